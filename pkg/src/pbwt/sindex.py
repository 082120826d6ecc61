"""Structural index: the signed BWT over compl-encoded suffixes.

sBWT values are stored shifted by sigma_p so the wavelet tree sees a
non-negative alphabet: negatives land in [0, sigma_p), statics above.
"""
import math
from typing import List, Optional

import numpy as np

from .alphabet import STATIC_OFFSET, AlphabetSpec, CodedText, encode_text
from .errors import AlphabetError, IndexOutOfRange, NotPPreceded
from .fsum import FSumStructure
from .pindex import ZeroNodeSupport, _sampling, clog2, grouping_factors, landing_nodes
from .pst import build_all
from .succinct import BitVector, IntVector, UnaryCounts, WaveletTree
from .topology import NavTree


def mirror_order(tree: NavTree) -> np.ndarray:
    """Preorder rank (1-based) of every node in the tree with children reversed."""
    depth = tree.depths()
    last = np.array([tree.subtree_last(v) for v in range(1, tree.m + 1)], np.int64)
    return depth + (tree.m - last) + 1


def mirror_tree(tree: NavTree):
    mo = mirror_order(tree)
    md = np.empty(tree.m, np.int64)
    md[mo - 1] = tree.depths()
    return NavTree.from_depths(md), mo


def slf_less(i, j, bi, bj, z, lead_i, lead_j, sigma_p):
    """Predict sLF(i) < sLF(j) for rows i != j from sBWT entries, the zero
    count z on the lca path and the tokens leading below it.  Elementwise."""
    i, j, bi, bj, z = (np.asarray(a, np.int64) for a in (i, j, bi, bj, z))
    lead_i, lead_j = np.asarray(lead_i, np.int64), np.asarray(lead_j, np.int64)
    mixed = (bi > sigma_p) != (bj > sigma_p)
    p_first = bj > sigma_p
    swap = i > j
    bi, bj = np.where(swap, bj, bi), np.where(swap, bi, bj)
    lead_i, lead_j = np.where(swap, lead_j, lead_i), np.where(swap, lead_i, lead_j)
    ai, aj = np.abs(bi), np.abs(bj)
    lo_i, lo_j = ai <= z, aj <= z
    both_lo = (((bi > 0) & (bj > 0) & (bi >= bj)) | ((bi < 0) & (bj > 0))
               | ((bi < 0) & (bj < 0) & (ai <= aj)))
    both_hi = (((bi == z + 1) & (lead_i == 0) & (lead_j < STATIC_OFFSET))
               | ((bj == -(z + 1)) & (lead_j == 0)))
    params = np.where(lo_i & lo_j, both_lo,
             np.where(lo_i, bi < 0,
             np.where(lo_j, bj > 0, ~both_hi)))
    oriented = np.where(bi > sigma_p, bi <= bj, params)
    return np.where(mixed, p_first, oriented ^ swap)


class SIndex:
    """Structural-matching index over a terminated text with complement pairs."""

    @classmethod
    def build(cls, text, spec: Optional[AlphabetSpec] = None, delta: Optional[int] = None,
              zero_node: str = "succinct"):
        if isinstance(text, str) and spec is not None:
            text = encode_text(text, spec)
        if isinstance(text, CodedText):
            spec = text.spec
            codes = text.codes
        else:
            codes = np.asarray(text, np.int64)
        if spec is None:
            raise AlphabetError("an alphabet spec is required")
        self = cls()
        self.spec = spec
        self.sigma_p, self.sigma = spec.sigma_p, spec.sigma
        comp = spec.complement_array()
        self.comp = comp
        psd, bw = build_all(codes, spec.sigma_p, spec.sigma, comp)
        self.zero_node_variant = zero_node
        self._from_parts(psd, bw, delta)
        return self

    def _from_parts(self, psd, bw, delta):
        n, sp = psd.n, self.sigma_p
        self.n = n
        self.delta = int(delta) if delta else max(1, clog2(n))
        t = psd.tree
        self.tree = t
        sb = bw.bwt
        is_p = sb <= sp
        sign = np.where(is_p, np.sign(sb), 0)
        mag = np.abs(sb)
        self.wt_sbwt = WaveletTree(sb + sp, 0, self.sigma + sp)
        g, gp, gf = grouping_factors(self.sigma, n)
        fmin = np.where(is_p, np.minimum(bw.f, bw.fminus), 0)
        zn = psd.highest_with(psd.zero_depth, np.where(is_p, mag, n + 1))
        zn = np.where(is_p, zn, 1)
        par = psd.parent
        lead0 = is_p & (fmin == psd.plen[par[zn - 1] - 1] + 1)
        self.leaf_lead = BitVector((~lead0).astype(np.uint8))
        child_static = np.zeros(t.m, bool)
        nonroot = np.arange(1, t.m)
        k = psd.psa[psd.lo[nonroot]] - 1
        off = psd.plen[par[nonroot] - 1]
        child_static[nonroot] = psd.codes[(k + off) % n] > sp
        self.pcount = UnaryCounts(np.bincount(par[nonroot][~child_static[nonroot]] - 1,
                                              minlength=t.m))
        pos, neg = is_p & (sign > 0), is_p & (sign < 0)
        self.fsum_plus = FSumStructure(t, landing_nodes(psd, fmin, pos, child_static), gf)
        # leaves after rmostLeaf(x): an ordinary fSum on the mirrored tree
        fn = psd.highest_with(psd.plen, np.where(neg, fmin - 1, n + 1))
        fn = np.where(neg & (fn > 1), fn, 0)
        mt, mo = mirror_tree(t)
        self.mirror = mt
        fn_m = np.where(fn > 0, mo[np.maximum(fn, 1) - 1], 0)[::-1]
        self.fsum_minus_rev = FSumStructure(mt, fn_m, gf)
        self.zn = ZeroNodeSupport(t, psd.zero_depth, zn, is_p, g, gp, sign=sign)
        self.sa_mark, self.sa_samples = _sampling(psd.psa, self.delta)
        qs = np.arange(1, n + 1, self.delta)
        self.isa_samples = IntVector(psd.ipsa[qs - 1])

    def state(self):
        return {"n": self.n, "sigma": self.sigma, "sigma_p": self.sigma_p, "delta": self.delta,
                "zero_node_variant": self.zero_node_variant,
                "tree": self.tree.state(), "wt_sbwt": self.wt_sbwt.state(),
                "leaf_lead": self.leaf_lead.state(), "pcount": self.pcount.state(),
                "fsum_plus": self.fsum_plus.state(), "mirror": self.mirror.state(),
                "fsum_minus_rev": self.fsum_minus_rev.state(), "zero_node": self.zn.state(),
                "sa_mark": self.sa_mark.state(), "sa_samples": self.sa_samples.state(),
                "isa_samples": self.isa_samples.state()}

    @classmethod
    def from_state(cls, st, spec: AlphabetSpec):
        self = cls()
        self.spec = spec
        self.comp = spec.complement_array()
        self.n, self.sigma, self.sigma_p = int(st["n"]), int(st["sigma"]), int(st["sigma_p"])
        self.delta = int(st["delta"])
        self.zero_node_variant = st["zero_node_variant"]
        t = self.tree = NavTree.from_state(st["tree"])
        self.wt_sbwt = WaveletTree(state=st["wt_sbwt"])
        self.leaf_lead = BitVector.from_state(st["leaf_lead"])
        self.pcount = UnaryCounts.from_state(st["pcount"])
        self.fsum_plus = FSumStructure(t, state=st["fsum_plus"])
        self.mirror = NavTree.from_state(st["mirror"])
        self.fsum_minus_rev = FSumStructure(self.mirror, state=st["fsum_minus_rev"])
        self.zn = ZeroNodeSupport(t, None, None, None, None, None, state=st["zero_node"])
        self.sa_mark = BitVector.from_state(st["sa_mark"])
        self.sa_samples = IntVector.from_state(st["sa_samples"])
        self.isa_samples = IntVector.from_state(st["isa_samples"])
        return self

    # ------------------------------------------------------------ basics
    def rc(self, a, b, x, y):
        """Count rows in [a, b] (1-based, inclusive) with sBWT in [x, y]."""
        if a > b or x > y:
            return 0
        s = self.sigma_p
        return self.wt_sbwt.range_count(a - 1, b, x + s, y + s)

    def _neg(self, a, b):
        return self.rc(a, b, -self.sigma_p, -1)

    def sbwt(self, i):
        return self.wt_sbwt.access(i - 1) - self.sigma_p

    def _check_row(self, i):
        if not 1 <= i <= self.n:
            raise IndexOutOfRange(i)

    def zero_node_pm(self, i, variant=None):
        """zeroNode+ or zeroNode- of leaf i, depending on the sign of sBWT[i]."""
        self._check_row(i)
        c = self.sbwt(i)
        if c > self.sigma_p:
            raise NotPPreceded(i)
        return self._zero_node(self.tree.leaf_select(i), abs(c), variant)

    def _zero_node(self, leaf, x, variant):
        if (variant or self.zero_node_variant) == "compact":
            return self.zn.compact(leaf, x)
        return self.zn.succinct(leaf, x, self.wt_sbwt, self.sigma_p)

    def fs_plus(self, x):
        return self.fsum_plus.query(x)

    def fs_minus_rev(self, x):
        t = self.tree
        mx = t.node_depth(x) + (t.m - t.subtree_last(x)) + 1
        return self.fsum_minus_rev.query(mx)

    # --------------------------------------------------------------- sLF
    def slf(self, i, variant=None):
        self._check_row(i)
        n, sp = self.n, self.sigma_p
        c = self.sbwt(i)
        if c > sp:
            return 1 + self.rc(1, n, -sp, c - 1) + self.rc(1, i - 1, c, c)
        t = self.tree
        a = abs(c)
        z = self._zero_node(t.leaf_select(i), a, variant)
        Lz, Rz = t.leaf_range(z)
        if c > 0:
            inside = self.rc(Lz, Rz, c + 1, sp) + self.rc(Lz, i, c, c) + self._neg(Lz, Rz)
        else:
            inside = self.rc(Lz, Rz, c + 1, -1) + self.rc(Lz, i, c, c)
        out = (self.fsum_plus.query(z) + self._neg(1, Lz - 1) + self._neg(Rz + 1, n)
               - self.fs_minus_rev(z))
        if not self.leaf_lead.access(i - 1):
            v = t.parent(z)
            if c > 0:
                Ru = t.rmost_leaf(t.child(v, self.pcount.get(v)))
                out += self.rc(Rz + 1, Ru, c, sp) + self.rc(Rz + 1, Ru, -sp, -c)
            else:
                Lv = t.lmost_leaf(v)
                out -= self.rc(Lv, Lz - 1, a, sp) + self.rc(Lv, Lz - 1, -sp, c)
        return inside + out

    # --------------------------------------------------- backward search
    def _pattern_codes(self, p):
        if isinstance(p, CodedText):
            return p.codes.tolist()
        if isinstance(p, str):
            return encode_text(p, self.spec, terminate=False).codes.tolist()
        return list(p)

    def _pattern_steps(self, codes):
        """Per p-position x (right to left): (case, d) for prepending codes[x] to codes[x+1:].

        case 0: neither the symbol nor its complement occurs to the right and
        d counts the distinct classes there; otherwise case is +1 or -1 by
        which of the two occurs first, and d counts classes up to it.
        """
        sp, comp = self.sigma_p, self.comp
        first_sym = {}
        first_cls = {}
        out = [None] * len(codes)
        for x in range(len(codes) - 1, -1, -1):
            c = codes[x]
            if c > sp:
                continue
            cc = int(comp[c])
            fp = first_sym.get(c)
            fm = first_sym.get(cc) if cc else None
            if fp is None and fm is None:
                out[x] = (0, len(first_cls))
            else:
                f, s = (fp, 1) if fm is None or (fp is not None and fp < fm) else (fm, -1)
                out[x] = (s, sum(1 for q in first_cls.values() if q <= f))
            first_sym[c] = x
            first_cls[min(c, cc) if cc else c] = x
        return out

    def s_backward_search(self, p, variant=None):
        """Suffix range [sp, ep] of compl(p), or None."""
        codes = self._pattern_codes(p)
        n, sp_ = self.n, self.sigma_p
        if not codes:
            return (1, n)
        steps = self._pattern_steps(codes)
        t = self.tree
        s, e = 1, n
        for x in range(len(codes) - 1, -1, -1):
            c = codes[x]
            if c > sp_:
                base = self.rc(1, n, -sp_, c - 1)
                s, e = 1 + base + self.rc(1, s - 1, c, c), base + self.rc(1, e, c, c)
            else:
                case, d = steps[x]
                if case == 0:
                    size = self.rc(s, e, d + 1, sp_) + self.rc(s, e, -sp_, -d - 1)
                    if size == 0:
                        return None
                    u = t.lca(t.leaf_select(s), t.leaf_select(e))
                    s = (1 + self.fsum_plus.query(u) + self.rc(s, e, -d, -1)
                         + self._neg(1, s - 1) + self._neg(e + 1, n) - self.fs_minus_rev(u))
                else:
                    key = case * d
                    size = self.rc(s, e, key, key)
                    if size == 0:
                        return None
                    r = self.wt_sbwt.rank(s - 1, key + sp_)
                    imin = self.wt_sbwt.select(r + 1, key + sp_) + 1
                    s = self.slf(imin, variant)
                e = s + size - 1
            if s > e:
                return None
        return (s, e)

    def s_count(self, p):
        r = self.s_backward_search(p)
        return 0 if r is None else r[1] - r[0] + 1

    # ------------------------------------------------------------ locate
    def ssa_lookup(self, i):
        self._check_row(i)
        k = 0
        while not self.sa_mark.access(i - 1):
            i = self.slf(i)
            k += 1
        return self.sa_samples[self.sa_mark.rank1(i - 1)] * self.delta + 1 + k

    def issa_lookup(self, j):
        if not 1 <= j <= self.n:
            raise IndexOutOfRange(j)
        q = ((j - 1 + self.delta - 1) // self.delta) * self.delta + 1
        if q > self.n:
            q, r = self.n, self.n
        else:
            r = self.isa_samples[(q - 1) // self.delta]
        while q > j:
            r = self.slf(r)
            q -= 1
        return r

    def s_locate(self, rng) -> List[int]:
        if rng is None:
            return []
        return sorted(self.ssa_lookup(i) for i in range(rng[0], rng[1] + 1))

    def find(self, p) -> List[int]:
        return self.s_locate(self.s_backward_search(p))

    # ------------------------------------------------------------- stats
    def space_breakdown(self):
        parts = {
            "wt_sbwt": self.wt_sbwt.size_in_bits(),
            "tree": self.tree.size_in_bits(),
            "mirror_tree": self.mirror.size_in_bits(),
            "leaf_lead": self.leaf_lead.size_in_bits(),
            "pcount": self.pcount.size_in_bits(),
            "fs_plus": self.fsum_plus.size_in_bits(),
            "fs_minus_rev": self.fsum_minus_rev.size_in_bits(),
            "sa_samples": (self.sa_mark.size_in_bits() + self.sa_samples.size_in_bits()
                           + self.isa_samples.size_in_bits()),
        }
        for k, v in self.zn.parts_in_bits().items():
            parts["zero_" + k] = v
        return parts

    def size_in_bits(self):
        return sum(self.space_breakdown().values())
