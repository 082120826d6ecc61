import random

import numpy as np
import pytest

from pbwt import DepthOutOfRange, IndexOutOfRange, NoSuchChild, RootHasNoParent
from pbwt.topology import MarkingScheme, NavTree


def random_depths(rng, m, deep):
    d = [0]
    for _ in range(1, m):
        d.append(d[-1] + 1 if rng.random() < deep else rng.randint(1, d[-1] + 1))
    return d


class PointerTree:
    """Plain parent/children arrays (1-based preorder) used as the reference."""

    def __init__(self, d):
        m = len(d)
        self.par = [0] * (m + 1)
        stack = []
        for v in range(1, m + 1):
            del stack[d[v - 1]:]
            self.par[v] = stack[-1] if stack else 0
            stack.append(v)
        self.kids = [[] for _ in range(m + 1)]
        for v in range(2, m + 1):
            self.kids[self.par[v]].append(v)
        self.last = list(range(m + 1))
        for v in range(m, 0, -1):
            if self.kids[v]:
                self.last[v] = self.last[self.kids[v][-1]]
        self.leaves = [v for v in range(1, m + 1) if not self.kids[v]]

    def anc(self, v):
        out = []
        while v:
            out.append(v)
            v = self.par[v]
        return out

    def leaves_under(self, v):
        return [x for x in self.leaves if v <= x <= self.last[v]]


def test_navigation_against_pointer_tree():
    rng = random.Random(2)
    for _ in range(1000):
        m = rng.randint(1, 2000) if rng.random() < 0.05 else rng.randint(1, 120)
        d = random_depths(rng, m, rng.random())
        t, P = NavTree.from_depths(d), PointerTree(d)
        lrank = {v: i + 1 for i, v in enumerate(P.leaves)}
        assert t.m == m and t.num_leaves == len(P.leaves)
        assert t.node_depth(1) == 0 and t.leaf_range(1) == (1, len(P.leaves))
        for v in rng.sample(range(1, m + 1), min(m, 25)):
            assert t.node_depth(v) == d[v - 1]
            if v > 1:
                p = t.parent(v)
                assert p == P.par[v]
                assert t.child(p, P.kids[p].index(v) + 1) == v
            assert t.children(v) == P.kids[v]
            assert t.subtree_last(v) == P.last[v]
            ls = P.leaves_under(v)
            assert (t.lmost_leaf(v), t.rmost_leaf(v)) == (lrank[ls[0]], lrank[ls[-1]])
            A = P.anc(v)[::-1]
            for D in range(d[v - 1] + 1):
                assert t.level_ancestor(v, D) == A[D]
            w = rng.randint(1, m)
            common = set(P.anc(w))
            assert t.lca(v, w) == next(x for x in P.anc(v) if x in common)
            assert t.lca(v, v) == v
        for i, leaf in enumerate(P.leaves, start=1):
            assert t.leaf_select(i) == leaf and t.leaf_rank(leaf) == i
            assert t.lmost_leaf(leaf) == t.rmost_leaf(leaf) == i


def test_navigation_errors():
    t = NavTree.from_depths([0, 1, 1, 2])
    with pytest.raises(RootHasNoParent):
        t.parent(1)
    with pytest.raises(NoSuchChild):
        t.child(1, 3)
    with pytest.raises(DepthOutOfRange):
        t.level_ancestor(4, 3)
    with pytest.raises(IndexOutOfRange):
        t.leaf_select(5)


def test_state_round_trip():
    d = random_depths(random.Random(0), 500, 0.6)
    t = NavTree.from_depths(d)
    t2 = NavTree.from_state(t.state())
    assert t2.depths().tolist() == d
    assert all(t2.parent(v) == t.parent(v) for v in range(2, 501))


def closure_marks(t, P, g):
    L = P.leaves
    S = {1}
    for f in range(1, len(L) + 1, g):
        S.add(t.lca(L[f - 1], L[min(f + g - 1, len(L)) - 1]))
    while True:
        s = sorted(S)
        new = S | {t.lca(a, b) for a, b in zip(s, s[1:])}
        if new == S:
            return S
        S = new


def test_star_and_path_trees():
    star = NavTree.from_depths([0] + [1] * 6)
    assert MarkingScheme(star, 6).marked_nodes.tolist() == [1]
    assert MarkingScheme(star, 9).marked_nodes.tolist() == [1]
    path = NavTree.from_depths(list(range(10)))
    ms = MarkingScheme(path, 3)
    assert set(ms.marked_nodes.tolist()) == closure_marks(path, PointerTree(list(range(10))), 3)
    assert ms.lowest_marked_ancestor(1) == 1


def test_marking_against_recomputation():
    rng = random.Random(7)
    for _ in range(300):
        m = rng.randint(1, 300)
        d = random_depths(rng, m, rng.random())
        t, P = NavTree.from_depths(d), PointerTree(d)
        for g in (2, 3, 5):
            ms = MarkingScheme(t, g)
            mk = set(ms.marked_nodes.tolist())
            assert mk == closure_marks(t, P, g)
            nprime = sum(ms.is_prime(v) for v in range(1, m + 1))
            assert len(mk) + nprime <= 8 * m / g
            if len(P.leaves) >= g:
                assert len(mk) <= 8 * len(P.leaves) / g
            else:
                assert len(mk) <= 2        # the root and the one partial group
            for v in rng.sample(range(1, m + 1), min(m, 20)):
                A = P.anc(v)
                assert ms.lowest_marked_ancestor(v) == next(x for x in A if x in mk)
                primes = [x for x in A if ms.is_prime(x)]
                if primes:
                    assert ms.lowest_prime_ancestor(v) == primes[0]
                desc = [x for x in range(v, P.last[v] + 1) if x in mk]
                want = min(desc, key=lambda x: d[x - 1]) if desc else None
                assert ms.highest_marked_descendant(v) == want


def suffix_trees(seed, count):
    from pbwt import AlphabetSpec, encode_text
    from pbwt.pst import build_all
    rng = random.Random(seed)
    for _ in range(count):
        spec = AlphabetSpec("AB"[:rng.randint(0, 2)], "xyz"[:rng.randint(1, 3)])
        syms = spec.param_symbols + spec.static_symbols[:-1]
        raw = "".join(rng.choice(syms) for _ in range(rng.randint(1, 150)))
        psd, _ = build_all(encode_text(raw, spec).codes, spec.sigma_p, spec.sigma)
        yield psd.tree


def test_marking_group_bounds():
    for t in suffix_trees(11, 150):
        P = PointerTree(t.depths().tolist())
        m = t.m
        for g in (2, 3, 4):
            ms = MarkingScheme(t, g)
            mk = set(ms.marked_nodes.tolist())
            for u in range(1, m + 1):
                if ms.is_prime(u):
                    star = ms.highest_marked_descendant(u)
                    extra = set(P.leaves_under(u)) - set(P.leaves_under(star))
                    assert len(extra) <= 2 * g
                if u in mk and u > 1:
                    # nodes strictly between u and its nearest marked ancestor
                    x, k = P.par[u], 0
                    while x not in mk:
                        x, k = P.par[x], k + 1
                    assert k <= g
                if u in mk and not any(x in mk for x in range(u + 1, P.last[u] + 1)):
                    # a lowest marked node may have many leaves (think of a star),
                    # but no child subtree can hold a whole group
                    for c in P.kids[u]:
                        assert len(P.leaves_under(c)) < 2 * g
