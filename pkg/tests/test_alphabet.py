import random

import pytest
from hypothesis import given, settings, strategies as st

from pbwt import (AlphabetSpec, AlphabetError, TerminatorMisplaced, UnknownSymbol, compl_encode,
                  encode_text, prev_compare, prev_encode)
from pbwt.alphabet import STATIC_OFFSET
from pbwt import oracle as O

from conftest import SMALL_TEXT


def test_code_assignment(spec):
    # w->1 x->2 y->3 z->4, A->5 B->6 C->7 $->8
    assert encode_text("AxByCx", spec, terminate=False).codes.tolist() == [5, 2, 6, 3, 7, 2]
    assert spec.sigma == 8 and spec.terminator == 8 and spec.sigma_p == 4


def test_terminator_appended_only_when_indexing(spec):
    assert encode_text("Ax", spec).codes.tolist() == [5, 2, 8]
    assert encode_text("Ax$", spec).codes.tolist() == [5, 2, 8]
    assert encode_text("", spec, terminate=False).codes.tolist() == []


def test_encode_errors(spec):
    with pytest.raises(UnknownSymbol) as e:
        encode_text("AQx", spec)
    assert e.value.position == 2
    with pytest.raises(TerminatorMisplaced):
        encode_text("A$x", spec)


def test_whitespace_ignored(spec):
    assert encode_text("A x\nB", spec, terminate=False).codes.tolist() == [5, 2, 6]


def test_spec_validation():
    with pytest.raises(AlphabetError):
        AlphabetSpec("AB", "xx")
    with pytest.raises(AlphabetError):
        AlphabetSpec("Ax", "x")
    with pytest.raises(AlphabetError):
        AlphabetSpec("A", "xy", [("x", "x")])
    with pytest.raises(AlphabetError):
        AlphabetSpec("A", "xyz", [("x", "y"), ("x", "z")])
    with pytest.raises(AlphabetError):
        AlphabetSpec("A", "xy", [("x", "A")])


def test_spec_file_round_trip(paired_spec):
    text = paired_spec.to_text()
    assert text.startswith("static: A B C\nparam: w x y z\npairs:")
    assert AlphabetSpec.parse(text) == paired_spec
    assert AlphabetSpec.parse("static: A\nparam: x y\n").sigma == 4
    with pytest.raises(AlphabetError):
        AlphabetSpec.parse("param: x\n")
    with pytest.raises(AlphabetError):
        AlphabetSpec.parse("static: A\nparam: x\npairs: xy\n")


def test_prev_examples(spec):
    assert prev_encode(encode_text("AxByCx", spec, terminate=False)).format(spec) == "A0B0C4"
    assert prev_encode(encode_text(SMALL_TEXT, spec)).format(spec) == "A00B0C530A3$"
    allstatic = encode_text("ABCA", spec, terminate=False)
    assert prev_encode(allstatic) == tuple(STATIC_OFFSET + c for c in allstatic.codes.tolist())


def test_compl_examples(paired_spec, spec):
    s = paired_spec
    assert compl_encode(encode_text("AxByCx", s, terminate=False)).format(s) == "A0B0C4"
    assert compl_encode(encode_text("AxBwAwCxAx", s, terminate=False)).format(s) == "A0B(-2)A2C(-2)A2"
    plain = encode_text("AxyBzCxzwAz", spec, terminate=False)
    assert tuple(compl_encode(plain)) == tuple(prev_encode(plain))


def test_compare_examples(spec):
    a0 = prev_encode([5, 2], sigma_p=4)
    assert prev_compare([0], [STATIC_OFFSET + 5]) == -1
    assert prev_compare(prev_encode([5, 2, 6], 4), prev_encode([5, 2, 6, 3], 4)) == -1
    assert prev_compare(a0, a0) == 0


def test_suffix_order_matches_small_text(spec):
    t = encode_text(SMALL_TEXT, spec).codes.tolist()
    order = sorted(range(1, 13), key=lambda k: prev_encode(t[k - 1:] + t[:k - 1], 4))
    assert order == [7, 8, 2, 9, 3, 5, 11, 1, 10, 4, 6, 12]


strings = st.lists(st.integers(1, 6), max_size=9)


@settings(max_examples=200, deadline=None)
@given(strings, st.permutations([1, 2, 3, 4]))
def test_prev_invariant_under_renaming(s, perm):
    f = dict(zip([1, 2, 3, 4], perm))
    renamed = [f.get(c, c) for c in s]
    assert prev_encode(s, 4) == prev_encode(renamed, 4)


@settings(max_examples=200, deadline=None)
@given(strings, strings)
def test_prev_equal_iff_bijection(a, b):
    if len(a) != len(b):
        return
    same = prev_encode(a, 4) == prev_encode(b, 4)
    assert same == O.bijection_match(a, b, 4)


@settings(max_examples=200, deadline=None)
@given(strings, strings)
def test_compl_equal_iff_structural_bijection(a, b):
    if len(a) != len(b):
        return
    s = AlphabetSpec("AB", "wxyz", [("w", "x"), ("y", "z")])
    same = compl_encode(a, s) == compl_encode(b, s)
    assert same == O.bijection_match(a, b, 4, s.complement)


@settings(max_examples=100, deadline=None)
@given(strings, strings, strings)
def test_compare_total_order(a, b, c):
    pa, pb, pc = (prev_encode(x, 4) for x in (a, b, c))
    assert prev_compare(pa, pb) == -prev_compare(pb, pa)
    if prev_compare(pa, pb) <= 0 and prev_compare(pb, pc) <= 0:
        assert prev_compare(pa, pc) <= 0


def test_prev_tokens_bounded():
    rng = random.Random(3)
    for _ in range(200):
        s = [rng.randint(1, 6) for _ in range(rng.randint(0, 30))]
        for i, tok in enumerate(prev_encode(s, 4)):
            assert tok >= STATIC_OFFSET or 0 <= tok <= i
