"""Suffix order, compacted suffix tree and last-column transform.

Works for both encodings: mode "prev" (p-matching) and mode "compl"
(structural matching with a complement pairing).  Everything is computed
on circular suffixes; since the terminator is unique this is the same
order as on ordinary suffixes.

Sorting is a rank refinement over offsets t = 0, 1, 2, ...: the token of
rotation k at offset t only depends on the distance from position k+t back
to the previous occurrence of its symbol (or of the complement), so each
round is a vectorized lexsort of the still-ambiguous rotations.  Rounds run
until every rotation is alone, i.e. max LCP + 1 rounds.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from .errors import MissingTerminator
from .topology import NavTree


# ------------------------------------------------------------- distances

@njit(cache=True)
def _back_dist_kernel(codes, sp, target):
    n = len(codes)
    glob = np.full(sp + 2, -1, np.int64)
    for p in range(n):
        if codes[p] <= sp:
            glob[codes[p]] = p
    last = np.full(sp + 2, -1, np.int64)
    out = np.full(n, n + 1, np.int64)
    for p in range(n):
        c = codes[p]
        if c > sp:
            continue
        w = target[c]
        if last[w] >= 0:
            out[p] = p - last[w]
        elif glob[w] >= 0:
            out[p] = p - glob[w] + n
        last[c] = p
    return out


def _back_dist(codes, sp, target=None):
    """Circular distance from each p-position back to the previous occurrence.

    target[c] is the symbol to look for (c itself by default); n+1 marks
    "never occurs", which only happens for a missing complement.
    """
    if target is None:
        target = np.arange(sp + 2, dtype=np.int64)
    else:
        target = np.where(np.asarray(target, np.int64) > 0, target, sp + 1)
        target = np.r_[target, sp + 1][:sp + 2].astype(np.int64)
    return _back_dist_kernel(np.asarray(codes, np.int64), sp, target)


def _fwd_dist(codes, sp, target=None):
    """Circular distance forward to the next occurrence (n+1 if absent)."""
    rev = codes[::-1].copy()
    return _back_dist(rev, sp, target)[::-1].copy()


# ----------------------------------------------------------------- kernels

@njit(cache=True)
def _build_intervals(lcp, n):
    """LCP intervals plus leaves, as (lo, hi, plen) arrays (unsorted)."""
    cap = 2 * n + 1
    lo = np.empty(cap, np.int64)
    hi = np.empty(cap, np.int64)
    pl = np.empty(cap, np.int64)
    cnt = 0
    st_l = np.empty(n + 1, np.int64)
    st_h = np.empty(n + 1, np.int64)
    top = 0
    st_l[0] = 0
    st_h[0] = 0
    for i in range(1, n + 1):
        h = lcp[i] if i < n else -1
        lb = i - 1
        while top >= 0 and h < st_h[top]:
            lo[cnt] = st_l[top]
            hi[cnt] = i - 1
            pl[cnt] = st_h[top]
            cnt += 1
            lb = st_l[top]
            top -= 1
        if h >= 0 and (top < 0 or h > st_h[top]):
            top += 1
            st_l[top] = lb
            st_h[top] = h
    for i in range(n):
        lo[cnt] = i
        hi[cnt] = i
        pl[cnt] = n
        cnt += 1
    return lo[:cnt], hi[:cnt], pl[:cnt]


@njit(cache=True)
def _depths(lo, hi):
    m = len(lo)
    d = np.empty(m, np.int64)
    st = np.empty(m, np.int64)
    top = -1
    for v in range(m):
        while top >= 0 and hi[st[top]] < lo[v]:
            top -= 1
        d[v] = top + 1
        top += 1
        st[top] = v
    return d


@njit(cache=True)
def _window_distinct(prevpos, ks, ls, n2):
    """#{p in [k, k+l) : prevpos[p] < k} for each query, offline with a Fenwick tree."""
    q = len(ks)
    out = np.zeros(q, np.int64)
    qord = np.argsort(ks, kind="mergesort")
    pord = np.argsort(prevpos, kind="mergesort")
    fen = np.zeros(n2 + 1, np.int64)
    ptr = 0
    for t in range(q):
        qi = qord[t]
        k = ks[qi]
        while ptr < n2 and prevpos[pord[ptr]] < k:
            x = pord[ptr] + 1
            while x <= n2:
                fen[x] += 1
                x += x & (-x)
            ptr += 1
        a = k
        b = k + ls[qi]
        s = 0
        x = b
        while x > 0:
            s += fen[x]
            x -= x & (-x)
        x = a
        while x > 0:
            s -= fen[x]
            x -= x & (-x)
        out[qi] = s
    return out


@njit(cache=True)
def _highest_with(depth, key, is_leaf, q):
    """For the j-th leaf (left to right), highest ancestor-or-self v with key[v] >= q[j].

    Returns 1-based preorder ids, 0 when even the leaf falls short.
    """
    m = len(depth)
    stack = np.empty(m, np.int64)
    out = np.zeros(len(q), np.int64)
    j = 0
    for v in range(m):
        d = depth[v]
        stack[d] = v
        if is_leaf[v]:
            want = q[j]
            lo, hi = 0, d + 1
            while lo < hi:
                mid = (lo + hi) // 2
                if key[stack[mid]] >= want:
                    hi = mid
                else:
                    lo = mid + 1
            out[j] = stack[lo] + 1 if lo <= d else 0
            j += 1
    return out


# ------------------------------------------------------------------ data

@dataclass
class PSuffixData:
    n: int
    mode: str
    codes: np.ndarray
    sigma_p: int
    psa: np.ndarray          # 1-based text positions, row order
    ipsa: np.ndarray         # ipsa[p-1] = row (1-based) of position p
    lcp: np.ndarray          # lcp[i] between rows i-1 and i (0-based rows), lcp[0] = 0
    tree: NavTree
    plen: np.ndarray         # per node, index v-1
    zero_depth: np.ndarray
    depth: np.ndarray
    parent: np.ndarray       # 1-based, 0 for root
    lo: np.ndarray           # leftmost leaf row (0-based)
    hi: np.ndarray
    leaf_node: np.ndarray    # row -> preorder node id
    classes: np.ndarray      # symbol class used for zero counting

    def path(self, v):
        """Encoded path label of node v (tuple), for inspection and tests."""
        k = int(self.psa[self.lo[v - 1]]) - 1
        return tuple(int(x) for x in self.tokens_at(np.full(self.plen[v - 1], k),
                                                    np.arange(self.plen[v - 1])))

    def tokens_at(self, ks, ts):
        return _tokens(self, np.asarray(ks, np.int64), np.asarray(ts, np.int64))

    def window_zeros(self, ks, ls):
        """Number of zero tokens in rotation k's first l tokens (0-based k)."""
        return _window_distinct(self._prevpos2, np.asarray(ks, np.int64),
                                np.asarray(ls, np.int64), 2 * self.n)

    def highest_with(self, key, q):
        return _highest_with(self.depth, key, self._is_leaf, np.asarray(q, np.int64))


@dataclass
class PBWTData:
    lastcol: np.ndarray
    bwt: np.ndarray          # pBWT (prev) or signed sBWT (compl)
    f: np.ndarray            # f_i (f+ for compl), 0 for static rows
    fminus: Optional[np.ndarray] = None   # compl only, n+1 when absent

    @property
    def pbwt(self):
        return self.bwt


def _tokens(psd, ks, ts):
    n = psd.n
    p = (ks + ts) % n
    c = psd.codes[p]
    static = c > psd.sigma_p
    if psd.mode == "prev":
        d = psd._dplus[p]
        tok = np.where(d <= ts, d, 0)
        return np.where(static, 2 * n + c, tok)
    dp, dm = psd._dplus[p], psd._dminus[p]
    mn = np.minimum(dp, dm)
    tok = np.where(mn > ts, 0, np.where(dp < dm, dp, -dm))
    return np.where(static, 2 * n + c, tok)


def _check_text(codes, sigma):
    if len(codes) == 0 or codes[-1] != sigma:
        raise MissingTerminator("text must end with the terminator")
    if int((codes == sigma).sum()) != 1:
        raise MissingTerminator("terminator must occur exactly once")


def build_psa(codes, sigma_p, sigma, comp=None) -> PSuffixData:
    """Sort circular suffixes; also sets up the tree (see build_pst)."""
    codes = np.asarray(codes, dtype=np.int64)
    _check_text(codes, sigma)
    n = len(codes)
    mode = "prev" if comp is None else "compl"
    psd = PSuffixData.__new__(PSuffixData)
    psd.n, psd.mode, psd.codes, psd.sigma_p = n, mode, codes, sigma_p
    psd._dplus = _back_dist(codes, sigma_p)
    if comp is not None:
        comp = np.asarray(comp, np.int64)
        psd._dminus = _back_dist(codes, sigma_p, comp)
        cls = np.where(codes <= sigma_p, np.minimum(codes, np.where(
            comp[np.minimum(codes, sigma_p)] > 0, comp[np.minimum(codes, sigma_p)], codes)), 0)
    else:
        cls = np.where(codes <= sigma_p, codes, 0)
    psd.classes = cls
    # previous position of the same class in the doubled text (static -> never counted)
    dcls = _back_dist(np.where(cls > 0, cls, sigma_p + 1), sigma_p)
    pos2 = np.arange(2 * n)
    d2 = np.tile(dcls, 2)
    prevpos = np.where(np.tile(cls, 2) > 0, pos2 - d2, 2 * n + 1)
    psd._prevpos2 = prevpos.astype(np.int64)

    order = np.arange(n, dtype=np.int64)
    gstart = np.zeros(n, dtype=np.int64)       # group start per row position
    lcp = np.zeros(n, dtype=np.int64)
    active = np.arange(n, dtype=np.int64)      # row positions still tied
    t = 0
    while len(active):
        ks = order[active]
        tok = _tokens(psd, ks, np.full(len(ks), t))
        g = gstart[active]
        perm = np.lexsort((tok, g))
        ks, tok, g = ks[perm], tok[perm], g[perm]
        order[active] = ks
        brk = np.ones(len(ks), dtype=bool)
        brk[1:] = (g[1:] != g[:-1]) | (tok[1:] != tok[:-1])
        split = np.zeros(len(ks), dtype=bool)
        split[1:] = (g[1:] == g[:-1]) & (tok[1:] != tok[:-1])
        lcp[active[split]] = t
        ng = np.maximum.accumulate(np.where(brk, active, 0))
        gstart[active] = ng
        # keep groups with at least two members
        grp = np.cumsum(brk) - 1
        sizes = np.bincount(grp)
        keep = sizes[grp] > 1
        active = active[keep]
        t += 1
        if t > n:
            raise AssertionError("rotation sort did not converge")
    psd.psa = order + 1
    ipsa = np.empty(n, dtype=np.int64)
    ipsa[order] = np.arange(1, n + 1)
    psd.ipsa = ipsa
    lcp[0] = 0
    psd.lcp = lcp
    return psd


def build_pst(psd: PSuffixData) -> PSuffixData:
    n = psd.n
    lo, hi, pl = _build_intervals(psd.lcp, n)
    o = np.lexsort((pl, lo))
    lo, hi, pl = lo[o], hi[o], pl[o]
    depth = _depths(lo, hi)
    psd.lo, psd.hi, psd.plen, psd.depth = lo, hi, pl, depth
    psd.tree = NavTree.from_depths(depth)
    psd.parent = psd.tree.parents()
    is_leaf = (lo == hi) & (pl == n)
    psd._is_leaf = is_leaf
    psd.leaf_node = np.flatnonzero(is_leaf) + 1
    ks = psd.psa[lo] - 1
    psd.zero_depth = psd.window_zeros(ks, pl)
    return psd


def build_bwt(psd: PSuffixData, comp=None) -> PBWTData:
    n, sp, codes = psd.n, psd.sigma_p, psd.codes
    rows_k = psd.psa - 1
    prevpos = (rows_k - 1) % n
    lastcol = codes[prevpos]
    is_p = lastcol <= sp
    fplus = _fwd_dist(codes, sp)[prevpos]
    if psd.mode == "prev":
        f = np.where(is_p, fplus, 0)
        cnt = psd.window_zeros(rows_k, np.where(is_p, f, 0))
        return PBWTData(lastcol, np.where(is_p, cnt, lastcol), f)
    fminus = _fwd_dist(codes, sp, np.asarray(comp, np.int64))[prevpos]
    fmin = np.minimum(fplus, fminus)
    cnt = psd.window_zeros(rows_k, np.where(is_p, fmin, 0))
    bwt = np.where(is_p, np.where(fplus < fminus, cnt, -cnt), lastcol)
    return PBWTData(lastcol, bwt, np.where(is_p, fplus, 0), np.where(is_p, fminus, 0))


def build_all(codes, sigma_p, sigma, comp=None):
    psd = build_pst(build_psa(codes, sigma_p, sigma, comp))
    return psd, build_bwt(psd, comp)
