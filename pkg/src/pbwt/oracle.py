"""Brute-force reference implementations.

Everything here is written straight from the definitions and deliberately
shares no code with the index structures.  Inputs are plain lists of
integer codes: p-codes are 1..sigma_p, anything larger is static.  Sizes
are capped so a slip in a test cannot turn into an hour of quadratic work.
"""
import numpy as np

LIMIT = 2048
_BIG = 1 << 40


def _check(n):
    assert n <= LIMIT, f"oracle input too large ({n} > {LIMIT})"


def prev_of(s, sp):
    out, last = [], {}
    for i, c in enumerate(s):
        if c > sp:
            out.append(_BIG + c)
        else:
            out.append(i - last[c] if c in last else 0)
            last[c] = i
    return tuple(out)


def compl_of(s, sp, comp):
    out, last = [], {}
    for i, c in enumerate(s):
        if c > sp:
            out.append(_BIG + c)
            continue
        jp, jm = last.get(c, -1), last.get(comp.get(c, 0), -1)
        if jp < 0 and jm < 0:
            out.append(0)
        else:
            out.append(i - jp if jp > jm else -(i - jm))
        last[c] = i
    return tuple(out)


def _enc(s, sp, comp):
    return compl_of(s, sp, comp) if comp else prev_of(s, sp)


# -------------------------------------------------------------- matching

def naive_pmatch(t, p, sp, comp=None):
    """1-based starts j with enc(t[j..j+|p|-1]) == enc(p)."""
    _check(len(t))
    m = len(p)
    if m == 0 or m > len(t):
        return []
    want = _enc(p, sp, comp)
    return [j + 1 for j in range(len(t) - m + 1) if _enc(t[j:j + m], sp, comp) == want]


def naive_smatch(t, p, sp, comp):
    return naive_pmatch(t, p, sp, comp or {})


def bijection_match(a, b, sp, comp=None):
    """Exhaustive check for a renaming of p-symbols mapping a onto b."""
    from itertools import permutations
    if len(a) != len(b):
        return False
    ps = list(range(1, sp + 1))
    for perm in permutations(ps):
        f = dict(zip(ps, perm))
        if comp and any(comp.get(f[x]) != f[y] for x, y in comp.items()):
            continue
        if all((x if x > sp else f[x]) == y for x, y in zip(a, b)):
            return True
    return False


# ----------------------------------------------------------- suffix order

def rotations(t, sp, comp=None):
    """Encodings of all circular suffixes (each of length n)."""
    n = len(t)
    _check(n)
    return [_enc(t[k:] + t[:k], sp, comp) for k in range(n)]


def naive_psa(t, sp, comp=None):
    """Suffix array (1-based) of the encoded suffixes T[k..n]."""
    n = len(t)
    _check(n)
    return [k + 1 for k in sorted(range(n), key=lambda k: _enc(t[k:], sp, comp))]


def naive_ssa(t, sp, comp):
    return naive_psa(t, sp, comp or {})


def naive_lf(t, sp, comp=None):
    sa = naive_psa(t, sp, comp)
    n = len(t)
    isa = {p: i + 1 for i, p in enumerate(sa)}
    return [isa[sa[i] - 1 if sa[i] > 1 else n] for i in range(n)]


def naive_plf(t, sp):
    return naive_lf(t, sp)


def naive_slf(t, sp, comp):
    return naive_lf(t, sp, comp or {})


def naive_bwt(t, sp, comp=None):
    """Returns (bwt, f, fminus) per row.

    Without a pairing this is the pBWT (f = first occurrence of L[i] in the
    circular suffix).  With one it is the sBWT, whose magnitude counts the
    zeros of the encoded circular suffix up to min(f+, f-).
    """
    n = len(t)
    sa = naive_psa(t, sp, comp)
    comp = comp or {}
    bwt, fp, fm = [], [], []
    for k in sa:
        rot = t[k - 1:] + t[:k - 1]
        c = rot[-1]
        if c > sp:
            bwt.append(c)
            fp.append(0)
            fm.append(0)
            continue
        f1 = rot.index(c) + 1
        cc = comp.get(c)
        f2 = rot.index(cc) + 1 if cc is not None and cc in rot else n + 1
        f = min(f1, f2)
        zeros = sum(1 for x in _enc(rot, sp, comp)[:f] if x == 0)
        bwt.append(zeros if f1 < f2 else -zeros)
        fp.append(f1)
        fm.append(f2)
    return bwt, fp, fm


# ------------------------------------------------------------------ trees

def naive_tree(t, sp, comp=None):
    """Compacted trie of the encoded circular suffixes, in preorder.

    Each node is a dict with path (tuple), lo/hi (1-based leaf range),
    plen and zero_depth.  Leaves carry the full circular encoding.
    """
    n = len(t)
    sa = naive_psa(t, sp, comp)
    rots = rotations(t, sp, comp)
    leaves = [rots[k - 1] for k in sa]
    paths = {(): None}
    for i in range(n):
        paths[leaves[i]] = None
        if i:
            a, b = leaves[i - 1], leaves[i]
            l = 0
            while a[l] == b[l]:
                l += 1
            paths[a[:l]] = None
    nodes = []
    for p in paths:
        inside = [i + 1 for i in range(n) if leaves[i][:len(p)] == p]
        nodes.append({"path": p, "lo": inside[0], "hi": inside[-1], "plen": len(p),
                      "zero_depth": sum(1 for x in p if x == 0)})
    nodes.sort(key=lambda d: (d["lo"], d["plen"]))
    return nodes


def _is_anc(a, b):
    return a["lo"] <= b["lo"] and b["hi"] <= a["hi"] and a["plen"] <= b["plen"]


def naive_parents(nodes):
    par = [0] * len(nodes)
    for x in range(1, len(nodes)):
        par[x] = max((y for y in range(x) if _is_anc(nodes[y], nodes[x])),
                     key=lambda y: nodes[y]["plen"]) + 1
    return par


def naive_fcount(nodes, f, use):
    """fCount per node: leaves j below x with |path(parent)|+2 <= f_j <= |path(x)|+1."""
    par = naive_parents(nodes)
    out = [0] * len(nodes)
    for x in range(1, len(nodes)):
        lo, hi = nodes[x]["lo"], nodes[x]["hi"]
        top = nodes[par[x] - 1]["plen"]
        out[x] = sum(1 for j in range(lo, hi + 1)
                     if use[j - 1] and top + 2 <= f[j - 1] <= nodes[x]["plen"] + 1)
    return out


def naive_fsum(nodes, f, use):
    """fSum(x): fCount summed over preorder predecessors that are not ancestors."""
    fc = naive_fcount(nodes, f, use)
    return [sum(fc[y] for y in range(x) if not _is_anc(nodes[y], nodes[x]))
            for x in range(len(nodes))]


def naive_preceding(nodes, f, use):
    """For each node x: leaves j left of x whose prepended suffix sorts before
    every prepended suffix below x, judged at y = lca(x, l_j):
    f_j > 1 + |path(y)|, or f_j = 1 + |path(y)| while x's branch at y starts
    with a static token.
    """
    out = []
    for x in nodes:
        cnt = 0
        for j in range(1, x["lo"]):
            if not use[j - 1]:
                continue
            y = max((a for a in nodes if _is_anc(a, x) and a["lo"] <= j <= a["hi"]),
                    key=lambda a: a["plen"])
            h = y["plen"]
            cnt += f[j - 1] > h + 1 or (f[j - 1] == h + 1 and x["path"][h] >= _BIG)
        out.append(cnt)
    return out


def naive_fs_minus_rev(nodes, f, use):
    """Leaves j after rmostLeaf(x) with f_j > 1 + |path(lca(x, l_j))|."""
    out = []
    for x in nodes:
        cnt = 0
        for j in range(x["hi"] + 1, nodes[0]["hi"] + 1):
            if not use[j - 1]:
                continue
            l = max((y for y in nodes if _is_anc(y, x) and y["lo"] <= j <= y["hi"]),
                    key=lambda y: y["plen"])
            cnt += f[j - 1] > 1 + l["plen"]
        out.append(cnt)
    return out


def naive_zero_node(nodes, leaf, value):
    """Highest node on the root-to-leaf path with zero_depth >= value (1-based preorder)."""
    for x, d in enumerate(nodes):
        if d["lo"] <= leaf <= d["hi"] and d["zero_depth"] >= value:
            return x + 1
    return None


# ------------------------------------------------------------- dictionary

def naive_dict_scan(patterns, t, sp):
    """Pairs (end position j, pattern id i), both 1-based, sorted."""
    _check(len(t))
    out = []
    for i, p in enumerate(patterns, start=1):
        want, m = prev_of(p, sp), len(p)
        for j in range(m, len(t) + 1):
            if prev_of(t[j - m:j], sp) == want:
                out.append((j, i))
    return sorted(out)


def reverse_prev(s, sp):
    """prev of the reversed string, reversed back (distance to the next occurrence)."""
    return tuple(reversed(prev_of(list(reversed(s)), sp)))


def naive_failure(paths, sp):
    """For each trie path (a list of codes): the path of its failure state.

    The failure state of u spells the longest proper suffix of u whose prev
    encoding is also the encoding of some trie state.
    """
    keys = {prev_of(p, sp) for p in paths}
    out = []
    for p in paths:
        k = 1
        while k < len(p) and prev_of(p[k:], sp) not in keys:
            k += 1
        out.append(p[k:] if p else [])
    return out


# ------------------------------------------------------ matrix versions
# Same quantities as above, computed from the explicit matrix of sorted
# encoded rotations so that n in the hundreds stays cheap.  Each one is
# cross-checked against its definitional twin on small inputs.

class SortedRotations:
    """Encoded circular suffixes in sorted order, their LCPs and the trie nodes."""

    def __init__(self, t, sp, comp=None):
        n = len(t)
        _check(n)
        self.n, self.sp, self.comp = n, sp, comp or {}
        self.t = np.asarray(t, np.int64)
        self.raw = self._rotation_matrix()          # row k: rotation starting at k + 1
        order = np.lexsort(self.raw.T[::-1])
        self.sa = (order + 1).tolist()
        E = self.raw[order]
        self.E = E
        neq = E[1:] != E[:-1]
        adj = np.where(neq.any(1), neq.argmax(1), n) if n > 1 else np.zeros(0, np.int64)
        L = np.full((n, n), n, np.int64)
        for i in range(n - 1):
            L[i, i + 1:] = np.minimum.accumulate(adj[i:])
            L[i + 1:, i] = L[i, i + 1:]
        self.L = L
        self.zc = np.concatenate([np.zeros((n, 1), np.int64), np.cumsum(E == 0, axis=1)], axis=1)
        nodes = {(0, n - 1, 0)} | {(i, i, n) for i in range(n)}
        if n > 1:
            # node of each adjacent pair: rows sharing at least adj[i] symbols with row i
            k, i = np.arange(n)[:, None], np.arange(n - 1)[None, :]
            lo = ((L[:, 1:] < adj[None, :]) & (k <= i)).sum(0)
            hi = i[0] + ((L[:-1] >= adj[:, None]) & (k.T > i.T)).sum(1)
            nodes |= set(zip(lo.tolist(), hi.tolist(), adj.tolist()))
        nodes = sorted(nodes, key=lambda x: (x[0], x[2]))
        self.lo = np.array([x[0] for x in nodes])
        self.hi = np.array([x[1] for x in nodes])
        self.plen = np.array([x[2] for x in nodes])
        self.zero_depth = self.zc[self.lo, self.plen]
        lo, hi, pl = self.lo, self.hi, self.plen
        anc = (lo[:, None] <= lo[None, :]) & (hi[None, :] <= hi[:, None]) & (pl[:, None] < pl[None, :])
        self.anc = anc                   # anc[y, x]: y is a proper ancestor of x
        par = np.where(anc.any(0), np.argmax(np.where(anc, pl[:, None], -1), axis=0), -1)
        self.parent = par                # 0-based, -1 for the root

    def _back(self, want):
        """Circular distance from each position back to the nearest earlier want[p] (n+1 if none)."""
        t, n = self.t, self.n
        out = np.full(n, n + 1, np.int64)
        for c in np.unique(want):
            here = np.flatnonzero(t == c)
            if len(here) == 0:
                continue
            idx = np.flatnonzero(want == c)
            k = np.searchsorted(here, idx) - 1          # last occurrence strictly before
            out[idx] = np.where(k >= 0, idx - here[k], idx + n - here[-1])
        return out

    def _rotation_matrix(self):
        t, n, sp = self.t, self.n, self.sp
        pos = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
        i = np.broadcast_to(np.arange(n), (n, n))
        param = t <= sp
        same = self._back(np.where(param, t, -1))
        pair = np.array([self.comp.get(int(c), -1) if c <= sp else -1 for c in t], np.int64)
        other = self._back(pair)
        ds, do = same[pos], other[pos]
        tok = np.where(ds <= i, np.where(ds < do, ds, np.where(do <= i, -do, ds)),
                       np.where(do <= i, -do, 0))
        return np.where(param[pos], tok, _BIG + t[pos])

    def bwt(self):
        """(bwt, f, fminus) per sorted row, as naive_bwt."""
        n, sp = self.n, self.sp
        k = np.asarray(self.sa) - 1
        R = self.t[(k[:, None] + np.arange(n)[None, :]) % n]
        c = R[:, -1]
        f1 = np.argmax(R == c[:, None], axis=1) + 1
        cc = np.array([self.comp.get(int(x), -1) for x in c], np.int64)
        hit = R == cc[:, None]
        f2 = np.where(hit.any(1), np.argmax(hit, axis=1) + 1, n + 1)
        z = self.zc[np.arange(n), np.minimum(f1, f2)]
        b = np.where(c > sp, c, np.where(f1 < f2, z, -z))
        f1, f2 = np.where(c > sp, 0, f1), np.where(c > sp, 0, f2)
        return b.tolist(), f1.tolist(), f2.tolist()

    def match(self, p):
        """1-based starts of the windows whose encoding equals that of p, as naive_pmatch."""
        m, n = len(p), self.n
        if m == 0 or m > n:
            return []
        want = np.array(_enc(p, self.sp, self.comp), np.int64)
        return (np.flatnonzero((self.raw[: n - m + 1, :m] == want).all(1)) + 1).tolist()

    def zero_node(self, leaf, value):
        """1-based node id, as naive_zero_node."""
        i = leaf - 1
        hit = np.flatnonzero((self.lo <= i) & (i <= self.hi) & (self.zero_depth >= value))
        return int(hit[np.argmin(self.plen[hit])]) + 1

    def preceding(self, f, use):
        f, use = np.asarray(f), np.asarray(use, bool)
        j = np.arange(self.n)[:, None]
        h = self.L[:, self.lo]                       # h[j, x]: lcp of row j and node x
        lead = self.E[self.lo[None, :], np.minimum(h, self.n - 1)]
        f, use = f[:, None], use[:, None]
        hit = (j < self.lo) & use & ((f > h + 1) | ((f == h + 1) & (lead >= _BIG)))
        return hit.sum(0).tolist()

    def fs_minus_rev(self, f, use):
        f, use = np.asarray(f), np.asarray(use, bool)
        j = np.arange(self.n)[:, None]
        h = self.L[:, self.hi]
        return ((j > self.hi) & use[:, None] & (f[:, None] > 1 + h)).sum(0).tolist()

    def _lands(self, f, use):
        """lands[j, x]: leaf j counts towards fCount of node x (never the root)."""
        f, use = np.asarray(f)[:, None], np.asarray(use, bool)[:, None]
        top = np.where(self.parent >= 0, self.plen[np.maximum(self.parent, 0)], self.n + 2)
        j = np.arange(self.n)[:, None]
        return ((self.lo <= j) & (j <= self.hi) & use & (top + 2 <= f) & (f <= self.plen + 1))

    def fcount(self, f, use):
        return self._lands(f, use).sum(0)

    def fsum(self, f, use):
        fc = self.fcount(f, use)
        m = len(fc)
        before = np.tri(m, m, -1, dtype=bool).T          # before[y, x]: y < x
        return ((before & ~self.anc) * fc[:, None]).sum(0).tolist()

    def landing(self, f, use):
        """Per leaf, the 1-based node whose fCount it adds to (0 for none)."""
        lands = self._lands(f, use)
        return np.where(lands.any(1), lands.argmax(1) + 1, 0)

    def pair_table(self):
        """For all row pairs (i, j): zeros on the lca path and the tokens leading below it."""
        n = self.n
        I, J = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        h = np.minimum(self.L, n - 1)
        return I, J, self.zc[I, h], self.E[I, h], self.E[J, h]
