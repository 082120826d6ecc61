"""Alphabet handling plus the prev and compl encodings.

Codes: p-symbols get 1..sigma_p, static symbols get sigma_p+1..sigma, and
the terminator '$' always gets sigma.  Encoded strings are tuples of plain
ints where a static code c is stored as STATIC_OFFSET + c, so comparing two
encodings is ordinary tuple comparison (integers first, then statics).
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AlphabetError, TerminatorMisplaced, UnknownSymbol

TERMINATOR = "$"
STATIC_OFFSET = 1 << 40


class AlphabetSpec:
    """Bijection between external symbols and integer codes."""

    def __init__(self, static: Iterable[str], param: Iterable[str],
                 pairs: Iterable[Tuple[str, str]] = ()):
        static = [s for s in static if s != TERMINATOR]
        param = list(param)
        for group in (static, param):
            if len(set(group)) != len(group):
                raise AlphabetError("duplicate symbol in alphabet")
        if set(static) & set(param):
            raise AlphabetError("a symbol cannot be both static and parameterized")
        if TERMINATOR in param:
            raise AlphabetError("'$' is reserved for the terminator")
        for sym in static + param:
            if len(sym) != 1 or sym.isspace():
                raise AlphabetError(f"symbols must be single non-space characters: {sym!r}")

        self.param_symbols = sorted(param)
        self.static_symbols = sorted(static) + [TERMINATOR]
        self.sigma_p = len(self.param_symbols)
        self.sigma_s = len(self.static_symbols)
        self.sigma = self.sigma_p + self.sigma_s
        self.symbol_to_code: Dict[str, int] = {}
        for k, sym in enumerate(self.param_symbols + self.static_symbols, start=1):
            self.symbol_to_code[sym] = k
        self.code_to_symbol = {c: s for s, c in self.symbol_to_code.items()}
        self.terminator = self.sigma

        self.complement: Dict[int, int] = {}
        for a, b in pairs:
            for sym in (a, b):
                if sym not in self.param_symbols:
                    raise AlphabetError(f"pair member {sym!r} is not a parameterized symbol")
            if a == b:
                raise AlphabetError(f"self-complement pair {a}-{b} is not supported")
            ca, cb = self.symbol_to_code[a], self.symbol_to_code[b]
            for x, y in ((ca, cb), (cb, ca)):
                if self.complement.get(x, y) != y:
                    raise AlphabetError(f"symbol {self.code_to_symbol[x]!r} paired twice")
                self.complement[x] = y
        self.pairs = sorted({tuple(sorted((self.code_to_symbol[a], self.code_to_symbol[b])))
                             for a, b in self.complement.items()})

    def is_param(self, code: int) -> bool:
        return 1 <= code <= self.sigma_p

    def complement_array(self) -> np.ndarray:
        """comp[c] = complement code of p-code c, or 0."""
        comp = np.zeros(self.sigma_p + 1, dtype=np.int64)
        for a, b in self.complement.items():
            comp[a] = b
        return comp

    def to_text(self) -> str:
        lines = ["static: " + " ".join(self.static_symbols[:-1]),
                 "param: " + " ".join(self.param_symbols)]
        if self.pairs:
            lines.append("pairs: " + " ".join(f"{a}-{b}" for a, b in self.pairs))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "AlphabetSpec":
        fields: Dict[str, List[str]] = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, rest = line.partition(":")
            key = key.strip().lower()
            if not sep or key not in ("static", "param", "pairs"):
                raise AlphabetError(f"malformed alphabet line: {raw!r}")
            if key in fields:
                raise AlphabetError(f"repeated alphabet field {key!r}")
            fields[key] = rest.split()
        if "static" not in fields or "param" not in fields:
            raise AlphabetError("alphabet needs 'static:' and 'param:' lines")
        pairs = []
        for item in fields.get("pairs", []):
            a, sep, b = item.partition("-")
            if not sep or not a or not b:
                raise AlphabetError(f"malformed pair {item!r}")
            pairs.append((a, b))
        return cls(fields["static"], fields["param"], pairs)

    def __eq__(self, other):
        return (isinstance(other, AlphabetSpec)
                and self.symbol_to_code == other.symbol_to_code
                and self.complement == other.complement)

    def __repr__(self):
        return (f"AlphabetSpec(static={self.static_symbols}, param={self.param_symbols}, "
                f"pairs={self.pairs})")


@dataclass
class CodedText:
    codes: np.ndarray
    spec: AlphabetSpec = field(repr=False)

    def __len__(self):
        return len(self.codes)

    def __getitem__(self, k):
        return self.codes[k]

    def __iter__(self):
        return iter(self.codes.tolist())

    def decode(self) -> str:
        return "".join(self.spec.code_to_symbol[c] for c in self.codes.tolist())


def _symbols(raw) -> List[str]:
    if isinstance(raw, str):
        return [ch for ch in raw if not ch.isspace()]
    return list(raw)


def encode_text(raw, spec: AlphabetSpec, terminate: bool = True) -> CodedText:
    """Map raw symbols to codes.

    With terminate=True the text is prepared for indexing and '$' is appended
    when missing.  With terminate=False (query mode) nothing is appended.
    """
    syms = _symbols(raw)
    codes = np.empty(len(syms) + 1, dtype=np.int64)
    for pos, sym in enumerate(syms):
        code = spec.symbol_to_code.get(sym)
        if code is None:
            raise UnknownSymbol(pos + 1, sym)
        if sym == TERMINATOR and pos != len(syms) - 1:
            raise TerminatorMisplaced(pos + 1)
        codes[pos] = code
    m = len(syms)
    if terminate and (m == 0 or syms[-1] != TERMINATOR):
        codes[m] = spec.terminator
        m += 1
    return CodedText(codes[:m].copy(), spec)


class PrevString(tuple):
    """A prev- or compl-encoded string (tuple of signed ints)."""

    def format(self, spec: Optional[AlphabetSpec] = None) -> str:
        return format_tokens(self, spec)


class ComplString(PrevString):
    pass


def static_token(code: int) -> int:
    return STATIC_OFFSET + int(code)


def is_static_token(tok: int) -> bool:
    return tok >= STATIC_OFFSET


def _codes_and_sigma_p(s, sigma_p):
    if isinstance(s, CodedText):
        return s.codes.tolist(), s.spec.sigma_p
    if sigma_p is None:
        raise ValueError("sigma_p is required for raw code sequences")
    return list(s), sigma_p


def prev_encode(s, sigma_p: Optional[int] = None) -> PrevString:
    codes, sp = _codes_and_sigma_p(s, sigma_p)
    last: Dict[int, int] = {}
    out = []
    for i, c in enumerate(codes):
        if c > sp:
            out.append(STATIC_OFFSET + c)
        else:
            j = last.get(c)
            out.append(0 if j is None else i - j)
            last[c] = i
    return PrevString(out)


def compl_encode(s, spec: Optional[AlphabetSpec] = None) -> ComplString:
    """Signed encoding: distance to the nearer of the symbol or its complement."""
    if isinstance(s, CodedText):
        spec = s.spec
        codes = s.codes.tolist()
    else:
        codes = list(s)
    sp = spec.sigma_p
    comp = spec.complement
    last: Dict[int, int] = {}
    out = []
    for i, c in enumerate(codes):
        if c > sp:
            out.append(STATIC_OFFSET + c)
            continue
        jp = last.get(c, -1)
        jm = last.get(comp.get(c, 0), -1)
        if jp < 0 and jm < 0:
            out.append(0)
        elif jp > jm:
            out.append(i - jp)
        else:
            out.append(-(i - jm))
        last[c] = i
    return ComplString(out)


def prev_compare(a: Sequence[int], b: Sequence[int]) -> int:
    """-1, 0 or 1 under the integers-before-statics order."""
    ta, tb = tuple(a), tuple(b)
    return (ta > tb) - (ta < tb)


def format_tokens(tokens: Sequence[int], spec: Optional[AlphabetSpec] = None) -> str:
    parts = []
    for t in tokens:
        if t >= STATIC_OFFSET:
            c = t - STATIC_OFFSET
            parts.append(spec.code_to_symbol[c] if spec else f"<{c}>")
        elif 0 <= t <= 9:
            parts.append(str(t))
        else:
            parts.append(f"({t})")
    return "".join(parts)
