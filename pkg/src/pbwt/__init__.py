"""Parameterized and structural Burrows-Wheeler indexes."""
from .alphabet import (AlphabetSpec, CodedText, encode_text, prev_encode, compl_encode,
                       prev_compare, PrevString, ComplString, STATIC_OFFSET)
from .errors import *  # noqa: F401,F403
from .pindex import PIndex
from .sindex import SIndex
from .pdict import PDictIndex

__version__ = "0.1.0"
