import random

import pytest

from pbwt import AlphabetSpec, encode_text

SMALL_TEXT = "AxyBzCxzwAz$"
CLONE_TEXT = "AyBxCyAwBxCzxyAzBwCz$"


@pytest.fixture
def spec():
    return AlphabetSpec("ABC", "wxyz")


@pytest.fixture
def paired_spec():
    return AlphabetSpec("ABC", "wxyz", [("x", "w"), ("y", "z")])


def random_spec(rng, pairs=False, min_p=0, max_p=4, max_s=4):
    sp, ss = rng.randint(min_p, max_p), rng.randint(0, max_s)
    P = [chr(ord("a") + k) for k in range(sp)]
    S = [chr(ord("A") + k) for k in range(ss)]
    pr = []
    if pairs:
        sh = P[:]
        rng.shuffle(sh)
        pr = [(sh[2 * k], sh[2 * k + 1]) for k in range(rng.randint(0, sp // 2))]
    return AlphabetSpec(S, P, pr)


def symbols(spec):
    return spec.param_symbols + spec.static_symbols[:-1]


def random_text(rng, spec, n):
    syms = symbols(spec)
    raw = "".join(rng.choice(syms) for _ in range(n - 1)) if syms else ""
    return encode_text(raw, spec)


def comp_dict(spec):
    return {c: int(x) for c, x in enumerate(spec.complement_array().tolist()) if x}


def random_patterns(rng, spec, codes, k=10, max_len=6):
    """Half random strings, half substrings of the text (so most of those match)."""
    syms = symbols(spec)
    n = len(codes)
    out = []
    for _ in range(k):
        if syms and rng.random() < 0.5:
            out.append([spec.symbol_to_code[rng.choice(syms)] for _ in range(rng.randint(1, max_len))])
        else:
            a = rng.randint(0, n - 1)
            out.append(list(codes[a:rng.randint(a + 1, n)]))
    return out


@pytest.fixture
def rng():
    return random.Random(12345)
