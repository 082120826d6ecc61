"""Parameterized FM-index: pLF, backward search, locate and extract.

Rows, leaves and text positions are 1-based in the public API.  Tree nodes
are 1-based preorder ranks.
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .alphabet import STATIC_OFFSET, AlphabetSpec, CodedText, PrevString, encode_text, prev_encode
from .errors import IndexOutOfRange, NotPPreceded, RangeOutOfBounds
from .fsum import FSumStructure
from .pst import build_all
from .succinct import BitVector, IntVector, UnaryCounts, WaveletTree
from .topology import MarkingScheme, NavTree


def clog2(x: int) -> int:
    return max(0, math.ceil(math.log2(x))) if x > 1 else 0


def grouping_factors(sigma: int, n: int) -> Tuple[int, int, int]:
    """(g, g', g_f): zeroNode marking, its refinement, and the fSum grouping."""
    g = max(2, clog2(sigma))
    gp = max(2, clog2(max(2, clog2(sigma))))
    gf = max(2, math.ceil(clog2(max(n, 2)) / 16))
    return g, gp, gf


# ------------------------------------------------------------ shared pieces

class ZeroNodeSupport:
    """Both zeroNode variants for a tree, given per-leaf values |bwt|.

    values_wt answers the range queries of the stepwise descent; for the
    signed structural index it holds shifted signed values and `signed`
    switches the descent to combine the positive and negative sides.
    """

    def __init__(self, tree: NavTree, zero_depth, zero_node, is_p, g, gp, *,
                 sign=None, state=None):
        self.tree = tree
        if state is not None:
            self._load(state)
            return
        t = tree
        m = t.m
        zd = np.asarray(zero_depth, np.int64)
        zn = np.asarray(zero_node, np.int64)
        self.signed = sign is not None
        self.wt_zerodepth = WaveletTree(zd, 0, max(1, int(zd.max())))
        self.marks_g = MarkingScheme(t, g)
        self.marks_gp = MarkingScheme(t, gp)
        mk = self.marks_g.marked_nodes
        self.mark_zerodepth = WaveletTree(zd[mk - 1], 0, max(1, int(zd.max())))
        # alpha per node: p-preceded leaves whose zeroNode is that node
        groups = [np.ones(len(zn), bool)] if sign is None else [sign > 0, sign < 0]
        self.alpha = []
        counts = []
        for sel in groups:
            c = np.bincount(zn[is_p & sel] - 1, minlength=m).astype(np.int64)
            counts.append(c)
            self.alpha.append(UnaryCounts(c))
        self.delta = [IntVector(self._deltas(c, zn, is_p & sel)) for c, sel in zip(counts, groups)]

    def _deltas(self, alpha, zn, use):
        """delta for every g'-marked node, relative to the child of its lowest strict g-marked ancestor."""
        t = self.tree
        depth = t.depths()
        par = t.parents()
        m = t.m
        mk = self.marks_g.marked.to_array().astype(bool)
        # prefix sums of alpha along root paths
        acc = alpha.copy()
        for v in range(1, m):
            acc[v] += acc[par[v] - 1]
        # depth of each leaf's zeroNode, per leaf row (-1 when unused)
        zdep = np.where(use, depth[np.maximum(zn, 1) - 1], -1)
        leaf_wt = WaveletTree(zdep + 1, 0, int(zdep.max()) + 1 if len(zdep) else 1)
        lm = np.cumsum(t.leafbv.to_array())
        out = []
        for x in self.marks_gp.marked_nodes:
            if x == 1:
                out.append(0)
                continue
            a = par[x - 1]
            while not mk[a - 1]:
                a = par[a - 1]
            p = x
            while par[p - 1] != a:
                p = par[p - 1]
            if p == x:
                out.append(0)
                continue
            total = acc[x - 1] - acc[p - 1]
            L = int(lm[x - 2]) + 1 if x > 1 else 1
            R = int(lm[t.subtree_last(x) - 1])
            inside = leaf_wt.range_count(L - 1, R, depth[p - 1] + 2, depth[x - 1] + 1)
            out.append(int(total - inside))
        return np.array(out, np.int64)

    # -- compact variant: predecessor on zeroDepth
    def compact(self, leaf: int, x: int) -> int:
        t = self.tree
        k = self.wt_zerodepth.predecessor(leaf - 1, x)
        u = t.lca(leaf, k + 1)
        return t.level_ancestor(leaf, t.node_depth(u) + 1)

    # -- succinct variant
    def lowest_marked_below(self, leaf: int, x: int) -> int:
        mk = self.marks_g
        u = mk.lowest_marked_ancestor(leaf)
        r = mk.marked.rank1(u - 1)
        if self.mark_zerodepth.access(r) < x:
            return u
        j = self.mark_zerodepth.predecessor(r, x)
        v = mk.marked.select1(j + 1) + 1
        return self.tree.lca(u, v)

    def succinct(self, leaf: int, x: int, wt, shift=0) -> int:
        """Walk down from the lowest marked ancestor with small zeroDepth.

        wt holds the per-leaf values (pBWT, or sBWT shifted by `shift`).  In
        the signed case both sides advance from the same beta: the positive
        side by rangeNextVal, the negative side by rangePrevVal on negated
        values, and the new beta is the larger magnitude.
        """
        t = self.tree
        mk, mkp = self.marks_g, self.marks_gp
        w = self.lowest_marked_below(leaf, x)
        zw = self.mark_zerodepth.access(mk.marked.rank1(w - 1))
        dw = t.node_depth(w)
        dl = t.node_depth(leaf)
        sides = len(self.alpha)

        def step(v, b, counts):
            L, R = t.leaf_range(v)
            best = b
            if counts[0]:
                best = max(best, wt.range_next_val(L - 1, R, b + shift, counts[0]) - shift)
            if sides > 1 and counts[1]:
                best = max(best, shift - wt.range_prev_val(L - 1, R, shift - b, counts[1]))
            return best

        u2 = t.level_ancestor(leaf, dw + 1)
        b1 = step(u2, zw, [al.get(u2) for al in self.alpha])
        if x <= b1:
            return u2
        path = []
        for d in range(dw + 2, dl + 1):
            y = t.level_ancestor(leaf, d)
            path.append(y)
            if mk.is_marked(y):
                break
        pref = np.zeros((len(path) + 1, sides), np.int64)
        for k, y in enumerate(path):
            pref[k + 1] = pref[k] + [al.get(y) for al in self.alpha]
        gp_idx = [k for k, y in enumerate(path) if mkp.is_marked(y)]
        start, beta = 0, b1
        lo, hi = 0, len(gp_idx)
        while lo < hi:
            mid = (lo + hi) // 2
            k = gp_idx[mid]
            y = path[k]
            r = mkp.marked.rank1(y - 1)
            gam = [int(pref[k + 1][s]) - self.delta[s][r] for s in range(sides)]
            bm = step(y, b1, gam)
            if x <= bm:
                hi = mid
            else:
                lo = mid + 1
                start, beta = k + 1, bm
        for k in range(start, len(path)):
            y = path[k]
            beta = step(y, beta, [al.get(y) for al in self.alpha])
            if x <= beta:
                return y
        raise AssertionError("zeroNode descent fell off the path")

    def parts_in_bits(self):
        return {
            "marks": self.marks_g.size_in_bits() + self.marks_gp.size_in_bits(),
            "mark_zerodepth": self.mark_zerodepth.size_in_bits(),
            "alpha": sum(a.size_in_bits() for a in self.alpha),
            "delta": sum(d.size_in_bits() for d in self.delta),
        }

    def state(self):
        return {"g": self.marks_g.g, "gp": self.marks_gp.g, "signed": self.signed,
                "marked_g": self.marks_g.marked.state(),
                "marked_gp": self.marks_gp.marked.state(),
                "wt_zerodepth": self.wt_zerodepth.state(),
                "mark_zerodepth": self.mark_zerodepth.state(),
                "alpha": [a.state() for a in self.alpha],
                "delta": [d.state() for d in self.delta]}

    def _load(self, st):
        t = self.tree
        self.signed = bool(st["signed"])
        self.marks_g = MarkingScheme(t, st["g"], marked_bv=BitVector.from_state(st["marked_g"]))
        self.marks_gp = MarkingScheme(t, st["gp"], marked_bv=BitVector.from_state(st["marked_gp"]))
        self.wt_zerodepth = WaveletTree(state=st["wt_zerodepth"])
        self.mark_zerodepth = WaveletTree(state=st["mark_zerodepth"])
        self.alpha = [UnaryCounts.from_state(a) for a in st["alpha"]]
        self.delta = [IntVector.from_state(d) for d in st["delta"]]


# --------------------------------------------------------- order table

def _is_static(tok):
    return np.asarray(tok) >= STATIC_OFFSET


def plf_less(i, j, bi, bj, z, lead_i, lead_j, sigma_p):
    """Predict pLF(i) < pLF(j) for rows i != j without computing either.

    bi, bj are the pBWT entries, z the zero count on the path of
    lca(leaf i, leaf j), lead_i / lead_j the first tokens below that lca on
    the way to each leaf (STATIC_OFFSET + code for statics).  Works
    elementwise on arrays.
    """
    i, j, bi, bj, z = (np.asarray(a, np.int64) for a in (i, j, bi, bj, z))
    lead_i, lead_j = np.asarray(lead_i, np.int64), np.asarray(lead_j, np.int64)
    mixed = (bi > sigma_p) != (bj > sigma_p)
    p_first = bj > sigma_p                # decides mixed pairs
    # orient every pair so that i < j, then flip the answer back
    swap = i > j
    bi, bj = np.where(swap, bj, bi), np.where(swap, bi, bj)
    lead_i, lead_j = np.where(swap, lead_j, lead_i), np.where(swap, lead_i, lead_j)
    statics = bi <= bj                    # equal symbols keep row order
    lo_i, lo_j = bi <= z, bj <= z
    params = np.where(lo_i & lo_j, bi >= bj,
             np.where(lo_i, False,
             np.where(lo_j, True,
                      ~((bi == z + 1) & (lead_i == 0) & ~_is_static(lead_j)))))
    oriented = np.where(bi > sigma_p, statics, params)
    return np.where(mixed, p_first, oriented ^ swap)


# ------------------------------------------------------------------- index

def landing_nodes(psd, f, use, child_static):
    """Node each p-preceded leaf is counted at by fSum (0 for none).

    Normally the highest ancestor y with |path(y)| >= f-1.  When f-1 equals
    |path(y)| exactly, the leaf's prepended suffix beats every sibling branch
    of y that starts with a static symbol, so it is credited to y's last
    child with a non-static leading token instead: in preorder that child
    precedes exactly those static-led branches.
    """
    n = psd.n
    m = len(psd.plen)
    y = psd.highest_with(psd.plen, np.where(use, f - 1, n + 1))
    y = np.where(use, y, 1)
    par = psd.parent
    nonroot = np.arange(2, m + 1)
    last_int = np.zeros(m + 1, np.int64)
    ints = nonroot[~child_static[nonroot - 1]]
    np.maximum.at(last_int, par[ints - 1], ints)
    exact = use & (psd.plen[y - 1] == f - 1)
    out = np.where(exact, last_int[y], np.where(y > 1, y, 0))
    return np.where(use, out, 0)


def _sampling(psa, delta):
    n = len(psa)
    rows = np.flatnonzero((psa - 1) % delta == 0)
    bv = np.zeros(n, np.uint8)
    bv[rows] = 1
    return BitVector(bv), IntVector((psa[rows] - 1) // delta)


class PIndex:
    """Queryable parameterized index over a terminated coded text."""

    def __init__(self):
        pass

    # ---------------------------------------------------------- building
    @classmethod
    def build(cls, text, spec: Optional[AlphabetSpec] = None, delta: Optional[int] = None,
              delta_mode: str = "log2", zero_node: str = "succinct"):
        if isinstance(text, str) and spec is not None:
            text = encode_text(text, spec)
        if isinstance(text, CodedText):
            spec = text.spec
            codes = text.codes
        else:
            codes = np.asarray(text, np.int64)
        self = cls()
        self.spec = spec
        self.sigma_p, self.sigma = spec.sigma_p, spec.sigma
        psd, bw = build_all(codes, spec.sigma_p, spec.sigma)
        self._from_parts(psd, bw, delta, delta_mode)
        self.zero_node_variant = zero_node
        return self

    def _from_parts(self, psd, bw, delta, delta_mode):
        n = psd.n
        self.n = n
        sp = self.sigma_p
        if delta is None:
            delta = max(1, clog2(n)) if delta_mode == "log2" else \
                max(1, math.ceil(math.log(max(n, 2)) / math.log(max(self.sigma, 2))))
        self.delta = int(delta)
        t = psd.tree
        self.tree = t
        pb = bw.bwt
        is_p = pb <= sp
        self.wt_pbwt = WaveletTree(pb, 1, self.sigma)
        g, gp, gf = grouping_factors(self.sigma, n)
        zn = psd.highest_with(psd.zero_depth, np.where(is_p, pb, n + 1))
        zn = np.where(is_p, zn, 0)
        par = psd.parent
        vpl = psd.plen[par[np.maximum(zn, 1) - 1] - 1]
        lead0 = is_p & (bw.f == vpl + 1)
        self.leaf_lead = BitVector((~lead0).astype(np.uint8))
        # pCount: children whose leading token is not static
        child_static = np.zeros(t.m, bool)
        nonroot = np.arange(1, t.m)
        k = psd.psa[psd.lo[nonroot]] - 1
        off = psd.plen[par[nonroot] - 1]
        child_static[nonroot] = psd.codes[(k + off) % n] > sp
        pc = np.bincount(par[nonroot][~child_static[nonroot]] - 1, minlength=t.m)
        self.pcount = UnaryCounts(pc)
        self.fsum = FSumStructure(t, landing_nodes(psd, bw.f, is_p, child_static), gf)
        self.zn = ZeroNodeSupport(t, psd.zero_depth, np.maximum(zn, 1), is_p, g, gp)
        self.sa_mark, self.sa_samples = _sampling(psd.psa, self.delta)
        qs = np.arange(1, n + 1, self.delta)
        self.isa_samples = IntVector(psd.ipsa[qs - 1])

    def state(self):
        return {"n": self.n, "sigma": self.sigma, "sigma_p": self.sigma_p, "delta": self.delta,
                "zero_node_variant": self.zero_node_variant,
                "tree": self.tree.state(), "wt_pbwt": self.wt_pbwt.state(),
                "leaf_lead": self.leaf_lead.state(), "pcount": self.pcount.state(),
                "fsum": self.fsum.state(), "zero_node": self.zn.state(),
                "sa_mark": self.sa_mark.state(), "sa_samples": self.sa_samples.state(),
                "isa_samples": self.isa_samples.state()}

    @classmethod
    def from_state(cls, st, spec: AlphabetSpec):
        self = cls()
        self.spec = spec
        self.n, self.sigma, self.sigma_p = int(st["n"]), int(st["sigma"]), int(st["sigma_p"])
        self.delta = int(st["delta"])
        self.zero_node_variant = st["zero_node_variant"]
        t = self.tree = NavTree.from_state(st["tree"])
        self.wt_pbwt = WaveletTree(state=st["wt_pbwt"])
        self.leaf_lead = BitVector.from_state(st["leaf_lead"])
        self.pcount = UnaryCounts.from_state(st["pcount"])
        self.fsum = FSumStructure(t, state=st["fsum"])
        self.zn = ZeroNodeSupport(t, None, None, None, None, None, state=st["zero_node"])
        self.sa_mark = BitVector.from_state(st["sa_mark"])
        self.sa_samples = IntVector.from_state(st["sa_samples"])
        self.isa_samples = IntVector.from_state(st["isa_samples"])
        return self

    # ------------------------------------------------------------ basics
    def _leaf(self, i):
        return self.tree.leaf_select(i)

    def rc(self, a, b, x, y):
        """rangeCount over 1-based inclusive rows [a, b]."""
        return self.wt_pbwt.range_count(a - 1, b, x, y)

    def pbwt(self, i):
        return self.wt_pbwt.access(i - 1)

    def _check_row(self, i):
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(i)

    def zero_node_compact(self, i):
        self._check_row(i)
        x = self.pbwt(i)
        if x > self.sigma_p:
            raise NotPPreceded(i)
        return self.zn.compact(self._leaf(i), x)

    def lowest_marked_zero_ancestor(self, i):
        self._check_row(i)
        x = self.pbwt(i)
        if x > self.sigma_p:
            raise NotPPreceded(i)
        return self.zn.lowest_marked_below(self._leaf(i), x)

    def zero_node_succinct(self, i):
        self._check_row(i)
        x = self.pbwt(i)
        if x > self.sigma_p:
            raise NotPPreceded(i)
        return self.zn.succinct(self._leaf(i), x, self.wt_pbwt)

    def zero_node(self, i, variant=None):
        v = variant or self.zero_node_variant
        return self.zero_node_compact(i) if v == "compact" else self.zero_node_succinct(i)

    def f_sum(self, x):
        return self.fsum.query(x)

    # --------------------------------------------------------------- pLF
    def plf(self, i, variant=None):
        self._check_row(i)
        c = self.pbwt(i)
        t = self.tree
        if c > self.sigma_p:
            return 1 + self.rc(1, self.n, 1, c - 1) + self.rc(1, i - 1, c, c)
        leaf = self._leaf(i)
        if (variant or self.zero_node_variant) == "compact":
            z = self.zn.compact(leaf, c)
        else:
            z = self.zn.succinct(leaf, c, self.wt_pbwt)
        n1 = self.fsum.query(z)
        Lz, Rz = t.leaf_range(z)
        n2 = self.rc(Lz, Rz, c + 1, self.sigma_p) + self.rc(Lz, i, c, c)
        n4 = 0
        if not self.leaf_lead.access(i - 1):
            v = t.parent(z)
            u = t.child(v, self.pcount.get(v))
            n4 = self.rc(Rz + 1, t.rmost_leaf(u), c, self.sigma_p)
        return n1 + n2 + n4

    # --------------------------------------------------- backward search
    def _pattern_codes(self, p):
        if isinstance(p, CodedText):
            return p.codes.tolist()
        if isinstance(p, str):
            return encode_text(p, self.spec, terminate=False).codes.tolist()
        return list(p)

    @staticmethod
    def _pattern_d(codes, sp):
        """Per position: (present, d) for p-symbols, scanning right to left."""
        first = {}
        out = [None] * len(codes)
        for x in range(len(codes) - 1, -1, -1):
            c = codes[x]
            if c > sp:
                continue
            if c in first:
                f = first[c]
                out[x] = (True, sum(1 for q in first.values() if q <= f))
            else:
                out[x] = (False, len(first))
            first[c] = x
        return out

    def backward_search(self, p, variant=None):
        """Suffix range [sp, ep] of prev(p), or None."""
        codes = self._pattern_codes(p)
        n, sp_ = self.n, self.sigma_p
        if not codes:
            return (1, n)
        info = self._pattern_d(codes, sp_)
        t = self.tree
        s, e = 1, n
        for x in range(len(codes) - 1, -1, -1):
            c = codes[x]
            if c > sp_:
                base = self.rc(1, n, 1, c - 1)
                s, e = 1 + base + self.rc(1, s - 1, c, c), base + self.rc(1, e, c, c)
            else:
                present, d = info[x]
                if not present:
                    size = self.rc(s, e, d + 1, sp_)
                    if size == 0:
                        return None
                    u = t.lca(self._leaf(s), self._leaf(e))
                    s = 1 + self.fsum.query(u)
                    e = s + size - 1
                else:
                    size = self.rc(s, e, d, d)
                    if size == 0:
                        return None
                    k = self.wt_pbwt.rank(s - 1, d)
                    imin = self.wt_pbwt.select(k + 1, d) + 1
                    s = self.plf(imin, variant)
                    e = s + size - 1
            if s > e:
                return None
        return (s, e)

    def count(self, p):
        r = self.backward_search(p)
        return 0 if r is None else r[1] - r[0] + 1

    # ------------------------------------------------------ locate/extract
    def psa_lookup(self, i):
        self._check_row(i)
        k = 0
        while not self.sa_mark.access(i - 1):
            i = self.plf(i)
            k += 1
        return self.sa_samples[self.sa_mark.rank1(i - 1)] * self.delta + 1 + k

    def ipsa_lookup(self, j):
        if not 1 <= j <= self.n:
            raise IndexOutOfRange(j)
        q = ((j - 1 + self.delta - 1) // self.delta) * self.delta + 1
        if q > self.n:
            q, r = self.n, self.n  # the terminator's suffix is always last
        else:
            r = self.isa_samples[(q - 1) // self.delta]
        while q > j:
            r = self.plf(r)
            q -= 1
        return r

    def locate(self, rng) -> List[int]:
        if rng is None:
            return []
        return sorted(self.psa_lookup(i) for i in range(rng[0], rng[1] + 1))

    def find(self, p) -> List[int]:
        return self.locate(self.backward_search(p))

    def extract(self, x, y) -> PrevString:
        if not 1 <= x <= y <= self.n:
            raise RangeOutOfBounds(f"[{x}, {y}] outside [1, {self.n}]")
        r = self.ipsa_lookup(y % self.n + 1)
        vals = []
        for _ in range(y - x + 1):
            vals.append(self.pbwt(r))
            r = self.plf(r)
        # vals[k] describes T[y-k]; decode right to left
        sp = self.sigma_p
        order: List[int] = []   # p-symbols by first occurrence to the right
        fresh = 0
        out = []
        for v in vals:
            if v > sp:
                out.append(v)
                continue
            if v <= len(order):
                sym = order.pop(v - 1)
            else:
                fresh += 1
                sym = fresh
            order.insert(0, sym)
            out.append(sym)
        out.reverse()
        return prev_encode(out, sigma_p=sp)

    # ------------------------------------------------------------- stats
    def space_breakdown(self, include_compact=False):
        parts = {
            "wt_pbwt": self.wt_pbwt.size_in_bits(),
            "tree": self.tree.size_in_bits(),
            "leaf_lead": self.leaf_lead.size_in_bits(),
            "pcount": self.pcount.size_in_bits(),
            "sa_samples": (self.sa_mark.size_in_bits() + self.sa_samples.size_in_bits()
                           + self.isa_samples.size_in_bits()),
        }
        for k, v in self.fsum.parts_in_bits().items():
            parts["fsum_" + k] = v
        for k, v in self.zn.parts_in_bits().items():
            parts["zero_" + k] = v
        if include_compact:
            parts["wt_zerodepth"] = self.zn.wt_zerodepth.size_in_bits()
        return parts

    def size_in_bits(self, include_compact=False):
        return sum(self.space_breakdown(include_compact).values())
