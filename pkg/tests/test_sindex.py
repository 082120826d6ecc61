import random

import numpy as np
import pytest

from pbwt import AlphabetSpec, IndexOutOfRange, NotPPreceded, encode_text
from pbwt.sindex import SIndex, mirror_tree, slf_less
from pbwt import oracle as O

from conftest import comp_dict, random_patterns, random_spec, random_text
from test_pindex import _pair_table


def test_worked_structural_queries(paired_spec):
    hit = SIndex.build(encode_text("AzByCz", paired_spec))
    miss = SIndex.build(encode_text("AzBxCz", paired_spec))
    assert hit.find("AxBwCx") == [1]
    assert miss.find("AxBwCx") == []
    assert hit.s_count("AxBwCx") == 1 and miss.s_count("AxBwCx") == 0


def test_without_pairs_matches_parameterized(spec):
    ix = SIndex.build(encode_text("AyBxCyAwBxCzxyAzBwCz", spec))
    assert ix.find("AxByCx") == [1, 15]


def test_errors(paired_spec):
    ix = SIndex.build(encode_text("AzByCz", paired_spec))
    static_row = next(i for i in range(1, 8) if ix.sbwt(i) > paired_spec.sigma_p)
    with pytest.raises(NotPPreceded):
        ix.zero_node_pm(static_row)
    with pytest.raises(IndexOutOfRange):
        ix.slf(8)


def test_mirror_tree_reverses_children():
    from pbwt.topology import NavTree
    t = NavTree.from_depths([0, 1, 2, 2, 1, 1, 2])
    mt, mo = mirror_tree(t)
    for v in range(2, t.m + 1):
        assert mt.parent(mo[v - 1]) == mo[t.parent(v) - 1]
        assert mt.children(mo[v - 1]) == [mo[c - 1] for c in reversed(t.children(v))]


def _cases(seed, count, max_n=60):
    rng = random.Random(seed)
    for _ in range(count):
        spec = random_spec(rng, pairs=True, max_p=5)
        ct = random_text(rng, spec, rng.randint(1, max_n))
        yield rng, spec, ct, comp_dict(spec)


def test_structures_against_oracle():
    for rng, spec, ct, comp in _cases(5, 200, max_n=45):
        t, sp, n = ct.codes.tolist(), spec.sigma_p, len(ct)
        ix = SIndex.build(ct, delta=rng.randint(1, 4))
        b, fp, fm = O.naive_bwt(t, sp, comp)
        assert [ix.sbwt(i) for i in range(1, n + 1)] == b
        nodes = O.naive_tree(t, sp, comp)
        for i in range(1, n + 1):
            if b[i - 1] <= sp:
                w = O.naive_zero_node(nodes, i, abs(b[i - 1]))
                assert ix.zero_node_pm(i, "compact") == w
                assert ix.zero_node_pm(i, "succinct") == w
        fmin = [min(x, y) for x, y in zip(fp, fm)]
        pos = [0 < x <= sp for x in b]
        neg = [x < 0 for x in b]
        assert [ix.fs_plus(v) for v in range(1, len(nodes) + 1)] == O.naive_preceding(nodes, fmin, pos)
        assert [ix.fs_minus_rev(v) for v in range(1, len(nodes) + 1)] == \
            O.naive_fs_minus_rev(nodes, fmin, neg)


def test_slf_locate_against_oracle():
    for rng, spec, ct, comp in _cases(6, 250):
        t, sp, n = ct.codes.tolist(), spec.sigma_p, len(ct)
        ix = SIndex.build(ct, delta=rng.randint(1, 4))
        want = O.naive_slf(t, sp, comp)
        assert [ix.slf(i, "compact") for i in range(1, n + 1)] == want
        assert [ix.slf(i, "succinct") for i in range(1, n + 1)] == want
        sa = O.naive_ssa(t, sp, comp)
        isa = {p: i + 1 for i, p in enumerate(sa)}
        assert want == [isa[sa[i] - 1] if sa[i] > 1 else isa[n] for i in range(n)]
        assert [ix.ssa_lookup(i) for i in range(1, n + 1)] == sa
        assert [ix.issa_lookup(j) for j in range(1, n + 1)] == [isa[j] for j in range(1, n + 1)]
        for p in random_patterns(rng, spec, t):
            assert ix.s_locate(ix.s_backward_search(p)) == O.naive_smatch(t, p, sp, comp)


def test_order_table_predicts_slf():
    for rng, spec, ct, comp in _cases(7, 200):
        t, sp = ct.codes.tolist(), spec.sigma_p
        ix = SIndex.build(ct)
        rots = O.rotations(t, sp, comp)
        enc = np.array([rots[k - 1] for k in O.naive_ssa(t, sp, comp)], np.int64)
        I, J, Z, LI, LJ = _pair_table(enc)
        b = np.array([ix.sbwt(i) for i in range(1, len(t) + 1)])
        slf = np.array(O.naive_slf(t, sp, comp))
        pred = slf_less(I + 1, J + 1, b[I], b[J], Z, LI, LJ, sp)
        off = I != J
        assert (pred == (slf[I] < slf[J]))[off].all()


def test_state_round_trip():
    for rng, spec, ct, comp in _cases(8, 30):
        ix = SIndex.build(ct)
        ix2 = SIndex.from_state(ix.state(), spec)
        n = len(ct)
        assert [ix2.slf(i) for i in range(1, n + 1)] == [ix.slf(i) for i in range(1, n + 1)]
        assert ix2.size_in_bits() == ix.size_in_bits()
