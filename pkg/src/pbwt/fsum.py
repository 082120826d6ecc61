"""Constant-time fSum over a NavTree.

fSum(x) adds up per-node counts fc(y) over every y that precedes x in
preorder without being an ancestor of x.  Only O(m/g) full values are kept:

* prime nodes and "anchors" store fSum outright;
* a marked node u stores Phi(u), the total of fc over its subtree;
* each prime node c with highest marked descendant u* keeps a unary string
  B_c = 1^{n_1} 0 ... 1^{n_k} 0 over the path c = u_0, u_1..u_k, u*, where
  n_i counts the leaves below u* that land on u_i;
* everything else is a small correction read from a shared lookup table,
  memoized by the shape of the local subtree and its local counts.

An anchor is either a marked node without marked descendants or an
unmarked child of a marked node that has no marked node below it.  Both
have small subtrees, so a table covers them entirely.
"""
import numpy as np
from numba import njit

from .succinct import BitVector, IntVector, bit_at, packed_get, rank1, select0, select1
from .topology import MarkingScheme, NavTree, level_anc, node_depth, node_lca, \
    node_parent, subtree_last, lowest_marked


@njit(cache=True)
def hmd_kernel(words, sb, seg, P, N, leafw, leafsb, g, L, v):
    """Highest marked descendant of v (0 if none); mirrors MarkingScheme."""
    if v == 1:
        return 1
    lm = rank1(leafw, leafsb, v - 1) + 1
    last = subtree_last(words, sb, seg, P, N, v)
    rm = rank1(leafw, leafsb, last)
    i = ((lm - 1 + g - 1) // g) * g
    j = L if rm == L else (rm // g) * g
    if i + 1 > L or min(i + g, L) > j:
        return 0
    a = select1(leafw, leafsb, i + 1) + 1
    b = select1(leafw, leafsb, j) + 1
    return node_lca(words, sb, seg, P, N, a, b)


# ------------------------------------------------------------- build helpers

@njit(cache=True)
def _full_fsum(par, fc):
    m = par.shape[0]
    anc = np.zeros(m, np.int64)
    out = np.zeros(m, np.int64)
    run = 0
    for v in range(m):
        if v > 0:
            p = par[v] - 1
            anc[v] = anc[p] + fc[p]
        out[v] = run - anc[v]
        run += fc[v]
    return out


@njit(cache=True)
def _subtree_last_all(depth):
    m = depth.shape[0]
    last = np.empty(m, np.int64)
    st = np.empty(m + 1, np.int64)
    top = -1
    for v in range(m):
        while top >= 0 and depth[st[top]] >= depth[v]:
            last[st[top]] = v - 1
            top -= 1
        top += 1
        st[top] = v
    while top >= 0:
        last[st[top]] = m - 1
        top -= 1
    return last + 1  # 1-based node ids


@njit(cache=True)
def _regions(par, marked):
    """hmd per node (0 if none) and pc = child of lma(v) toward v (0 if v marked)."""
    m = par.shape[0]
    hmd = np.zeros(m, np.int64)
    for v in range(m - 1, -1, -1):
        if marked[v]:
            hmd[v] = v + 1
        if v > 0 and hmd[v] != 0 and not marked[par[v] - 1]:
            hmd[par[v] - 1] = hmd[v]
    pc = np.zeros(m, np.int64)
    for v in range(1, m):
        if marked[v]:
            continue
        p = par[v] - 1
        pc[v] = v + 1 if marked[p] else pc[p]
    return hmd, pc


@njit(cache=True)
def _nstar(par, marked, hmd, pc, last, leaf_nodes, fnode):
    """Per node, number of leaves below the prime's u* whose f lands on it."""
    m = par.shape[0]
    out = np.zeros(m, np.int64)
    for j in range(leaf_nodes.shape[0]):
        x = fnode[j]
        if x == 0 or marked[x - 1]:
            continue
        c = pc[x - 1]
        if c == x:
            continue
        u = hmd[c - 1]
        if u == 0:
            continue
        lf = leaf_nodes[j]
        if u <= lf <= last[u - 1]:
            out[x - 1] += 1
    return out


@njit(cache=True)
def _prime_tables(primes, hmd, last, depth, par, fc, nst, fs, phi_all):
    """Local keys, Psi values and B strings for every prime node."""
    tot = 0
    btot = 0
    for t in range(primes.shape[0]):
        c = primes[t]
        u = hmd[c - 1]
        size = last[c - 1] - c + 1 - (last[u - 1] - u)
        tot += size
        x = par[u - 1]
        while u != c and x != c:
            btot += nst[x - 1] + 1
            x = par[x - 1]
    kdep = np.empty(tot, np.int64)
    knv = np.empty(tot, np.int64)
    vals = np.empty(tot, np.int64)
    off = np.zeros(primes.shape[0] + 1, np.int64)
    upos = np.empty(primes.shape[0], np.int64)
    bbits = np.zeros(btot, np.uint8)
    boff = np.zeros(primes.shape[0] + 1, np.int64)
    k = 0
    b = 0
    for t in range(primes.shape[0]):
        c = primes[t]
        u = hmd[c - 1]
        off[t] = k
        boff[t] = b
        # B string: path nodes strictly between c and u, top-down
        if u != c:
            cnt = 0
            x = par[u - 1]
            while x != c:
                cnt += 1
                x = par[x - 1]
            path = np.empty(cnt, np.int64)
            x = par[u - 1]
            i = cnt - 1
            while x != c:
                path[i] = x
                i -= 1
                x = par[x - 1]
            for i in range(cnt):
                for _ in range(nst[path[i] - 1]):
                    bbits[b] = 1
                    b += 1
                b += 1
        # gamma per depth offset along the path
        gam = np.zeros(depth[u - 1] - depth[c - 1] + 1, np.int64)
        if u != c:
            x = par[u - 1]
            acc = 0
            while x != c:
                gam[depth[x - 1] - depth[c - 1]] = acc
                acc += nst[x - 1]
                x = par[x - 1]
            gam[0] = acc
        v = c
        while v <= last[c - 1]:
            if v > u and v <= last[u - 1]:
                v = last[u - 1] + 1
                continue
            kdep[k] = depth[v - 1] - depth[c - 1]
            if v == c or v == u:
                knv[k] = 0
            else:
                knv[k] = fc[v - 1] - nst[v - 1]
            if v <= u:
                vals[k] = fs[v - 1] - fs[c - 1]
                if v == u:
                    upos[t] = v - c
            else:
                # lca(v, u) is the deepest path node that is an ancestor of v
                a = v
                while not (a <= u and u <= last[a - 1]):
                    a = par[a - 1]
                vals[k] = fs[v - 1] - fs[c - 1] - phi_all[u - 1] - gam[depth[a - 1] - depth[c - 1]]
            k += 1
            v += 1
    off[primes.shape[0]] = k
    boff[primes.shape[0]] = b
    return kdep, knv, vals, off, upos, bbits, boff


@njit(cache=True)
def _anchor_tables(anchors, last, depth, fc, fs):
    tot = 0
    for t in range(anchors.shape[0]):
        a = anchors[t]
        tot += last[a - 1] - a + 1
    kdep = np.empty(tot, np.int64)
    knv = np.empty(tot, np.int64)
    vals = np.empty(tot, np.int64)
    off = np.zeros(anchors.shape[0] + 1, np.int64)
    k = 0
    for t in range(anchors.shape[0]):
        a = anchors[t]
        off[t] = k
        for v in range(a, last[a - 1] + 1):
            kdep[k] = depth[v - 1] - depth[a - 1]
            knv[k] = 0 if v == a else fc[v - 1]
            vals[k] = fs[v - 1] - fs[a - 1]
            k += 1
    off[anchors.shape[0]] = k
    return kdep, knv, vals, off


def _dedup(kdep, knv, vals, off, extra=None):
    """Share identical local tables; returns (table id per owner, table store)."""
    memo = {}
    ids = np.empty(len(off) - 1, np.int64)
    store, starts = [], []
    pos = 0
    for t in range(len(off) - 1):
        s, e = off[t], off[t + 1]
        key = (kdep[s:e].tobytes(), knv[s:e].tobytes(), -1 if extra is None else int(extra[t]))
        tid = memo.get(key)
        if tid is None:
            tid = len(starts)
            memo[key] = tid
            starts.append(pos)
            store.append(vals[s:e])
            pos += e - s
        ids[t] = tid
    starts.append(pos)
    return ids, np.concatenate(store) if store else np.zeros(0, np.int64), np.array(starts)


# ------------------------------------------------------------------ query

@njit(cache=True)
def _query(words, sb, seg, P, N, leafw, leafsb, g, L,
           mw, msb, mones, qw, qsb, qones,
           primew, primesb, anchw, anchsb,
           fpw, fpwd, faw, fawd, phiw, phiwd,
           bw, bsb, bn, bow, bowd,
           tpw, tpwd, taw, tawd, tow, towd, psw, pswd, v):
    if v == 1:
        return 0
    if bit_at(primew, v - 1):
        return packed_get(fpw, fpwd, rank1(primew, primesb, v - 1))
    if bit_at(anchw, v - 1):
        return packed_get(faw, fawd, rank1(anchw, anchsb, v - 1))
    a = lowest_marked(words, sb, seg, P, N, mw, msb, mones, qw, qsb, qones, v)
    if a == v:
        p = node_parent(words, sb, seg, P, N, v)
        b = lowest_marked(words, sb, seg, P, N, mw, msb, mones, qw, qsb, qones, p)
        c = level_anc(words, sb, seg, P, N, v, node_depth(words, sb, b) + 1)
        u = v
    else:
        c = level_anc(words, sb, seg, P, N, v, node_depth(words, sb, a) + 1)
        if not bit_at(primew, c - 1):
            anc = a if bit_at(anchw, a - 1) else c
            r = rank1(anchw, anchsb, anc - 1)
            base = packed_get(faw, fawd, r)
            t0 = packed_get(tow, towd, packed_get(taw, tawd, r))
            return base + packed_get(psw, pswd, t0 + v - anc)
        u = hmd_kernel(words, sb, seg, P, N, leafw, leafsb, g, L, c)
    r = rank1(primew, primesb, c - 1)
    base = packed_get(fpw, fpwd, r)
    t0 = packed_get(tow, towd, packed_get(tpw, tpwd, r))
    if v <= u:
        return base + packed_get(psw, pswd, t0 + v - c)
    ulast = subtree_last(words, sb, seg, P, N, u)
    loc = v - c - (ulast - u)
    phi = packed_get(phiw, phiwd, rank1(mw, msb, u - 1))
    x = node_lca(words, sb, seg, P, N, v, u)
    i = node_depth(words, sb, x) - node_depth(words, sb, c)
    s = packed_get(bow, bowd, r)
    e = packed_get(bow, bowd, r + 1)
    if i == 0:
        pos = s
    else:
        pos = select0(bw, bsb, s - rank1(bw, bsb, s) + i, bn) + 1
    gam = rank1(bw, bsb, e) - rank1(bw, bsb, pos)
    return base + phi + gam + packed_get(psw, pswd, t0 + loc)


# -------------------------------------------------------------- structure

class FSumStructure:
    """fSum over a tree for a given per-node count vector."""

    def __init__(self, tree: NavTree, fnode=None, g: int = 2, *, state=None):
        """fnode[j] is the node leaf j+1 lands on (0 for none); fc is its histogram."""
        self.tree = tree
        if state is not None:
            self._load(state)
            return
        fnode = np.asarray(fnode, np.int64)
        fc = np.bincount(fnode[fnode > 0] - 1, minlength=tree.m).astype(np.int64)
        self.fcount = fc
        self.g = max(2, int(g))
        self.marks = MarkingScheme(tree, self.g)
        m = tree.m
        depth = tree.depths()
        par = tree.parents()
        last = _subtree_last_all(depth)
        marked = self.marks.marked.to_array().astype(np.bool_)
        fs = _full_fsum(par, fc)
        sub = np.concatenate([[0], np.cumsum(fc)])
        phi_all = sub[last] - sub[np.arange(m)]
        hmd, pc = _regions(par, marked)
        leaf_nodes = np.flatnonzero(tree.leafbv.to_array()) + 1
        nst = _nstar(par, marked, hmd, pc, last, leaf_nodes, fnode)

        primes = self.marks.prime_nodes
        lowest = marked & ~_marked_below(par, marked)
        orphan = np.zeros(m, bool)
        nonroot = np.arange(1, m)
        cand = nonroot[(~marked[nonroot]) & marked[par[nonroot] - 1] & (hmd[nonroot] == 0)]
        cand = cand[~lowest[par[cand] - 1]]
        orphan[cand] = True
        anchor = lowest | orphan
        anchors = np.flatnonzero(anchor) + 1

        kd, kn, vals, off, upos, bbits, boff = _prime_tables(
            primes, hmd, last, depth, par, fc, nst, fs, phi_all)
        if len(vals) and vals.min() < 0:
            raise AssertionError("negative local correction")
        pid, pstore, pstarts = _dedup(kd, kn, vals, off, upos)
        akd, akn, avals, aoff = _anchor_tables(anchors, last, depth, fc, fs)
        aid, astore, astarts = _dedup(akd, akn, avals, aoff)

        self.prime_bv = self.marks.prime
        self.anchor_bv = BitVector(anchor.astype(np.uint8))
        self.f_prime = IntVector(fs[primes - 1])
        self.f_anchor = IntVector(fs[anchors - 1])
        self.phi = IntVector(phi_all[self.marks.marked_nodes - 1])
        self.B = BitVector(bbits)
        self.b_off = IntVector(boff)
        self.tab_prime = IntVector(pid)
        self.tab_anchor = IntVector(aid + len(pstarts) - 1)
        self.tab_off = IntVector(np.concatenate([pstarts[:-1], astarts + pstarts[-1]]))
        self.psi = IntVector(np.concatenate([pstore, astore]))
        self.num_tables = len(pstarts) + len(astarts) - 2
        self._pack()

    def _pack(self):
        t, mk = self.tree, self.marks
        self.k = (*t.k, t.leafbv.words, t.leafbv.sb, self.g, t.num_leaves,
                  *mk.k, self.prime_bv.words, self.prime_bv.sb,
                  self.anchor_bv.words, self.anchor_bv.sb,
                  self.f_prime.words, self.f_prime.width,
                  self.f_anchor.words, self.f_anchor.width,
                  self.phi.words, self.phi.width,
                  self.B.words, self.B.sb, self.B.n,
                  self.b_off.words, self.b_off.width,
                  self.tab_prime.words, self.tab_prime.width,
                  self.tab_anchor.words, self.tab_anchor.width,
                  self.tab_off.words, self.tab_off.width,
                  self.psi.words, self.psi.width)

    def query(self, v: int) -> int:
        self.tree._chk(v)
        return int(_query(*self.k, v))

    __call__ = query

    def parts_in_bits(self):
        return {
            "marks": self.marks.size_in_bits(),
            "anchors": self.anchor_bv.size_in_bits(),
            "samples": self.f_prime.size_in_bits() + self.f_anchor.size_in_bits(),
            "phi": self.phi.size_in_bits(),
            "paths": self.B.size_in_bits() + self.b_off.size_in_bits(),
            "tables": (self.tab_prime.size_in_bits() + self.tab_anchor.size_in_bits()
                       + self.tab_off.size_in_bits() + self.psi.size_in_bits()),
        }

    def size_in_bits(self):
        return sum(self.parts_in_bits().values())

    _FIELDS = ("anchor_bv", "B", "f_prime", "f_anchor", "phi", "b_off", "tab_prime",
               "tab_anchor", "tab_off", "psi")

    def state(self):
        st = {"g": self.g, "marked": self.marks.marked.state()}
        for f in self._FIELDS:
            st[f] = getattr(self, f).state()
        return st

    def _load(self, st):
        self.g = int(st["g"])
        self.marks = MarkingScheme(self.tree, self.g, marked_bv=BitVector.from_state(st["marked"]))
        self.prime_bv = self.marks.prime
        for f in self._FIELDS:
            cls = BitVector if f in ("anchor_bv", "B") else IntVector
            setattr(self, f, cls.from_state(st[f]))
        self._pack()


@njit(cache=True)
def _marked_below(par, marked):
    """True for nodes with a marked proper descendant."""
    m = par.shape[0]
    out = np.zeros(m, np.bool_)
    for v in range(m - 1, 0, -1):
        if out[v] or marked[v]:
            out[par[v] - 1] = True
    return out

