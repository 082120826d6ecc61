import random

import numpy as np
import pytest

from pbwt import IndexOutOfRange, NotPPreceded, RangeOutOfBounds, encode_text
from pbwt.fsum import FSumStructure
from pbwt.pindex import PIndex, grouping_factors, plf_less
from pbwt.topology import NavTree
from pbwt import oracle as O

from conftest import SMALL_TEXT, CLONE_TEXT, random_patterns, random_spec, random_text

SMALL_PLF = [11, 1, 8, 2, 3, 10, 9, 12, 4, 5, 6, 7]


@pytest.fixture
def small(spec):
    return PIndex.build(encode_text(SMALL_TEXT, spec))


def test_small_text_golden(small, spec):
    assert [small.plf(i) for i in range(1, 13)] == SMALL_PLF
    assert [small.plf(i, "compact") for i in range(1, 13)] == SMALL_PLF
    assert [small.psa_lookup(i) for i in range(1, 13)] == [7, 8, 2, 9, 3, 5, 11, 1, 10, 4, 6, 12]
    assert [small.pbwt(i) for i in range(1, 13)] == [7, 3, 5, 2, 3, 6, 5, 8, 4, 4, 2, 3]
    assert small.extract(1, 12).format(spec) == "A00B0C530A3$"
    assert small.rc(1, 12, 1, 4) == 7


def test_clone_query(spec):
    ix = PIndex.build(encode_text(CLONE_TEXT, spec))
    assert ix.find("AxByCx") == [1, 15]
    assert ix.count("AxByCx") == 2
    assert ix.count("CzA") == ix.count("CyA") == 1      # only at position 5
    assert ix.find("") == list(range(1, 22))


def test_errors(small):
    with pytest.raises(NotPPreceded):
        small.zero_node(1)
    with pytest.raises(IndexOutOfRange):
        small.plf(13)
    with pytest.raises(IndexOutOfRange):
        small.psa_lookup(0)
    with pytest.raises(RangeOutOfBounds):
        small.extract(5, 13)
    with pytest.raises(RangeOutOfBounds):
        small.extract(4, 3)


def test_grouping_factors():
    assert grouping_factors(16, 1 << 20)[:2] == (4, 2)
    assert grouping_factors(2, 100)[:2] == (2, 2)


def _cases(seed, count, max_n=60):
    rng = random.Random(seed)
    for _ in range(count):
        spec = random_spec(rng)
        ct = random_text(rng, spec, rng.randint(1, max_n))
        yield rng, spec, ct


def test_plf_and_sampling_against_oracle():
    for rng, spec, ct in _cases(5, 250):
        t, sp, n = ct.codes.tolist(), spec.sigma_p, len(ct)
        ix = PIndex.build(ct, delta=rng.randint(1, 5))
        want = O.naive_plf(t, sp)
        assert [ix.plf(i) for i in range(1, n + 1)] == want
        assert [ix.plf(i, "compact") for i in range(1, n + 1)] == want
        sa = O.naive_psa(t, sp)
        isa = {p: i + 1 for i, p in enumerate(sa)}
        assert [ix.psa_lookup(i) for i in range(1, n + 1)] == sa
        assert [ix.ipsa_lookup(j) for j in range(1, n + 1)] == [isa[j] for j in range(1, n + 1)]
        # pLF(i) = ipsa[psa[i] - 1]
        assert want == [isa[sa[i] - 1] if sa[i] > 1 else isa[n] for i in range(n)]
        for _ in range(5):
            x = rng.randint(1, n)
            y = rng.randint(x, n)
            assert tuple(ix.extract(x, y)) == O.prev_of(t[x - 1:y], sp)


def test_search_against_oracle():
    for rng, spec, ct in _cases(6, 250):
        t, sp = ct.codes.tolist(), spec.sigma_p
        ix = PIndex.build(ct)
        for p in random_patterns(rng, spec, t):
            want = O.naive_pmatch(t, p, sp)
            r = ix.backward_search(p)
            assert ix.locate(r) == want
            assert ix.count(p) == len(want)


def _landing_literal(nodes, f, use):
    """Per leaf: the node x with |path(parent)|+2 <= f <= |path(x)|+1 on its root path."""
    par = O.naive_parents(nodes)
    out = []
    for j in range(1, nodes[0]["hi"] + 1):
        x = 0
        if use[j - 1]:
            for v in range(2, len(nodes) + 1):
                d = nodes[v - 1]
                if d["lo"] <= j <= d["hi"] and nodes[par[v - 1] - 1]["plen"] + 2 <= f[j - 1] <= d["plen"] + 1:
                    x = v
        out.append(x)
    return out


def test_zero_node_and_fsum_against_oracle():
    for rng, spec, ct in _cases(7, 200, max_n=45):
        t, sp, n = ct.codes.tolist(), spec.sigma_p, len(ct)
        ix = PIndex.build(ct)
        b, f, _ = O.naive_bwt(t, sp)
        nodes = O.naive_tree(t, sp)
        use = [x <= sp for x in b]
        marked = set(ix.zn.marks_g.marked_nodes.tolist())
        for i in range(1, n + 1):
            if not use[i - 1]:
                continue
            w = O.naive_zero_node(nodes, i, b[i - 1])
            assert ix.zero_node(i, "compact") == w
            assert ix.zero_node(i, "succinct") == w
            below = [x + 1 for x, d in enumerate(nodes)
                     if d["lo"] <= i <= d["hi"] and d["zero_depth"] < b[i - 1] and x + 1 in marked]
            assert ix.lowest_marked_zero_ancestor(i) == max(below, key=lambda v: nodes[v - 1]["plen"])
        # the counts pLF actually needs
        assert [ix.f_sum(v) for v in range(1, len(nodes) + 1)] == O.naive_preceding(nodes, f, use)
        # and fSum exactly as defined, on the same tree
        fs = FSumStructure(ix.tree, _landing_literal(nodes, f, use), rng.randint(2, 4))
        assert [fs.query(v) for v in range(1, len(nodes) + 1)] == O.naive_fsum(nodes, f, use)
        assert O.naive_fsum(nodes, f, use)[0] == 0


def test_fsum_on_random_trees():
    rng = random.Random(3)
    for _ in range(300):
        m = rng.randint(1, 120)
        d = [0]
        for _ in range(1, m):
            d.append(rng.randint(1, d[-1] + 1))
        t = NavTree.from_depths(d)
        par = t.parents()
        fnode = []
        for i in range(1, t.num_leaves + 1):
            x, anc = t.leaf_select(i), []
            while x != 1:
                anc.append(x)
                x = par[x - 1]
            fnode.append(rng.choice(anc + [0]))
        fs = FSumStructure(t, fnode, rng.randint(2, 5))
        fc = np.bincount([x - 1 for x in fnode if x], minlength=m)
        last = [t.subtree_last(v) for v in range(1, m + 1)]
        for v in range(1, m + 1):
            assert fs.query(v) == sum(fc[y - 1] for y in range(1, v) if not y <= v <= last[y - 1])
        fs2 = FSumStructure(t, state=fs.state())
        assert all(fs2.query(v) == fs.query(v) for v in range(1, m + 1))


def _pair_table(enc):
    n = enc.shape[0]
    neq = enc[:, None, :] != enc[None, :, :]
    lcp = np.minimum(np.where(neq.any(2), neq.argmax(2), n), n - 1)
    zc = np.concatenate([np.zeros((n, 1), np.int64), np.cumsum(enc == 0, axis=1)], axis=1)
    I, J = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return I, J, zc[I, lcp], enc[I, lcp], enc[J, lcp]


def test_order_table_predicts_plf():
    for rng, spec, ct in _cases(8, 200):
        t, sp = ct.codes.tolist(), spec.sigma_p
        ix = PIndex.build(ct)
        rots = O.rotations(t, sp)
        enc = np.array([rots[k - 1] for k in O.naive_psa(t, sp)], np.int64)
        I, J, Z, LI, LJ = _pair_table(enc)
        b = np.array([ix.pbwt(i) for i in range(1, len(t) + 1)])
        plf = np.array(O.naive_plf(t, sp))
        pred = plf_less(I + 1, J + 1, b[I], b[J], Z, LI, LJ, sp)
        off = I != J
        assert (pred == (plf[I] < plf[J]))[off].all()


def test_state_round_trip():
    for rng, spec, ct in _cases(9, 30):
        ix = PIndex.build(ct)
        ix2 = PIndex.from_state(ix.state(), spec)
        n = len(ct)
        assert [ix2.plf(i) for i in range(1, n + 1)] == [ix.plf(i) for i in range(1, n + 1)]
        assert ix2.size_in_bits() == ix.size_in_bits()


def test_space_breakdown_parts(small):
    parts = small.space_breakdown()
    assert parts["wt_pbwt"] == small.wt_pbwt.size_in_bits()
    assert small.size_in_bits() == sum(parts.values())
    assert "wt_zerodepth" in small.space_breakdown(include_compact=True)
