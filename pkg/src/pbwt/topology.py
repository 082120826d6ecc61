"""Ordered trees as balanced parentheses, plus the grouped marking scheme.

Nodes are identified by their 1-based preorder rank; leaves are numbered
1..L from left to right.  Internally an open parenthesis is a 1 bit and
the excess after position i is E(i) = 2*rank1(i+1) - (i+1), with E(-1) = 0.
"""
import numpy as np
from numba import njit

from .errors import DepthOutOfRange, IndexOutOfRange, NoSuchChild, RootHasNoParent
from .succinct import BitVector, bit_at, rank1, select0, select1

BLOCK = 512
_BIG = np.int32(1 << 30)


# ------------------------------------------------------------ excess kernels

@njit(cache=True, inline="always")
def excess(words, sb, i):
    if i < 0:
        return 0
    return 2 * rank1(words, sb, i + 1) - (i + 1)


@njit(cache=True)
def fwd_le(words, sb, seg, P, N, i, d):
    """Smallest j > i with E(j) <= d, or -1."""
    j = i + 1
    if j >= N:
        return -1
    e = excess(words, sb, i)
    b = j >> 9
    end = min((b + 1) << 9, N)
    while j < end:
        e += 2 * bit_at(words, j) - 1
        if e <= d:
            return j
        j += 1
    # next block to the right whose minimum reaches d
    node = P + b
    found = False
    while node > 1:
        if node & 1 == 0 and seg[node + 1] <= d:
            node += 1
            found = True
            break
        node >>= 1
    if not found:
        return -1
    while node < P:
        node = 2 * node if seg[2 * node] <= d else 2 * node + 1
    b = node - P
    j = b << 9
    e = excess(words, sb, j - 1)
    end = min(j + BLOCK, N)
    while j < end:
        e += 2 * bit_at(words, j) - 1
        if e <= d:
            return j
        j += 1
    return -1


@njit(cache=True)
def bwd_le(words, sb, seg, P, N, i, d):
    """Largest j in [-1, i) with E(j) <= d (E(-1) = 0)."""
    j = i - 1
    if j < 0:
        return -1
    e = excess(words, sb, j)
    b = j >> 9
    start = b << 9
    while j >= start:
        if e <= d:
            return j
        e -= 2 * bit_at(words, j) - 1
        j -= 1
    node = P + b
    found = False
    while node > 1:
        if node & 1 == 1 and seg[node - 1] <= d:
            node -= 1
            found = True
            break
        node >>= 1
    if not found:
        return -1
    while node < P:
        node = 2 * node + 1 if seg[2 * node + 1] <= d else 2 * node
    b = node - P
    j = min(((b + 1) << 9), N) - 1
    e = excess(words, sb, j)
    start = b << 9
    while j >= start:
        if e <= d:
            return j
        e -= 2 * bit_at(words, j) - 1
        j -= 1
    return -1


@njit(cache=True)
def range_min(words, sb, seg, P, N, i, j):
    """min E(k) for k in [i, j]."""
    bi, bj = i >> 9, j >> 9
    e = excess(words, sb, i)
    best = e
    k = i + 1
    end = j + 1 if bi == bj else (bi + 1) << 9
    while k < end:
        e += 2 * bit_at(words, k) - 1
        if e < best:
            best = e
        k += 1
    if bi == bj:
        return best
    lo, hi = P + bi + 1, P + bj  # half-open over whole blocks
    while lo < hi:
        if lo & 1:
            if seg[lo] < best:
                best = seg[lo]
            lo += 1
        if hi & 1:
            hi -= 1
            if seg[hi] < best:
                best = seg[hi]
        lo >>= 1
        hi >>= 1
    k = bj << 9
    e = excess(words, sb, k - 1)
    while k <= j:
        e += 2 * bit_at(words, k) - 1
        if e < best:
            best = e
        k += 1
    return best


@njit(cache=True)
def _block_minima(words, N, nblocks):
    out = np.empty(nblocks, dtype=np.int32)
    e = 0
    for b in range(nblocks):
        m = 1 << 30
        for j in range(b << 9, min((b + 1) << 9, N)):
            e += 2 * bit_at(words, j) - 1
            if e < m:
                m = e
        out[b] = m
    return out


# -------------------------------------------------------------- node kernels

@njit(cache=True, inline="always")
def node_pos(words, sb, v):
    return select1(words, sb, v)


@njit(cache=True, inline="always")
def node_depth(words, sb, v):
    return 2 * v - select1(words, sb, v) - 2


@njit(cache=True)
def node_close(words, sb, seg, P, N, v):
    p = select1(words, sb, v)
    return fwd_le(words, sb, seg, P, N, p, 2 * v - p - 2)


@njit(cache=True)
def subtree_last(words, sb, seg, P, N, v):
    """Preorder rank of the last node in v's subtree."""
    c = node_close(words, sb, seg, P, N, v)
    return rank1(words, sb, c + 1)


@njit(cache=True)
def node_parent(words, sb, seg, P, N, v):
    p = select1(words, sb, v)
    dep = 2 * v - p - 2
    j = bwd_le(words, sb, seg, P, N, p, dep - 1)
    return rank1(words, sb, j + 2)


@njit(cache=True)
def level_anc(words, sb, seg, P, N, v, D):
    p = select1(words, sb, v)
    j = bwd_le(words, sb, seg, P, N, p, D)
    return rank1(words, sb, j + 2)


@njit(cache=True)
def node_lca(words, sb, seg, P, N, a, b):
    if a > b:
        a, b = b, a
    if a == b:
        return a
    pa = select1(words, sb, a)
    ca = fwd_le(words, sb, seg, P, N, pa, 2 * a - pa - 2)
    pb = select1(words, sb, b)
    if pb < ca:
        return a
    mv = range_min(words, sb, seg, P, N, pa, pb)
    return level_anc(words, sb, seg, P, N, b, mv - 1)


@njit(cache=True)
def lca_batch(words, sb, seg, P, N, A, B):
    out = np.empty(A.shape[0], dtype=np.int64)
    for k in range(A.shape[0]):
        out[k] = node_lca(words, sb, seg, P, N, A[k], B[k])
    return out


@njit(cache=True)
def parents_from_depths(depth):
    m = depth.shape[0]
    par = np.zeros(m, dtype=np.int64)
    stack = np.empty(m + 1, dtype=np.int64)
    for v in range(m):
        d = depth[v]
        par[v] = stack[d - 1] + 1 if d > 0 else 0
        stack[d] = v
    return par


class NavTree:
    """Static ordered tree with parent/child/lca/level-ancestor/leaf queries."""

    def __init__(self, bits=None, *, bp=None):
        self.bp = bp if bp is not None else BitVector(bits)
        self.N = self.bp.n
        self.m = self.N // 2
        words = self.bp.words
        nblocks = max(1, (self.N + BLOCK - 1) // BLOCK)
        P = 1
        while P < nblocks:
            P *= 2
        seg = np.full(2 * P, _BIG, dtype=np.int32)
        seg[P:P + nblocks] = _block_minima(words, self.N, nblocks)
        for k in range(P - 1, 0, -1):
            seg[k] = min(seg[2 * k], seg[2 * k + 1])
        self.P = P
        self.seg = seg
        self.k = (words, self.bp.sb, seg, P, self.N)
        # leaves: an open parenthesis directly followed by a close
        arr = self.bp.to_array()
        opens = np.flatnonzero(arr == 1)
        nxt = np.append(arr, 0)[opens + 1]
        self.leafbv = BitVector((nxt == 0).astype(np.uint8))
        self.num_leaves = self.leafbv.ones

    @classmethod
    def from_depths(cls, depths):
        """Build from node depths listed in preorder (root depth 0)."""
        d = np.asarray(depths, dtype=np.int64)
        m = len(d)
        if m == 0 or d[0] != 0 or (d[1:] < 1).any() or (np.diff(d) > 1).any():
            raise ValueError("not a valid preorder depth sequence")
        bits = np.zeros(2 * m, dtype=np.uint8)
        bits[2 * np.arange(m) - d] = 1
        return cls(bits)

    @classmethod
    def from_parents(cls, parents):
        """parents[v-1] is the parent of preorder node v (0 for the root)."""
        par = np.asarray(parents, dtype=np.int64)
        depth = np.zeros(len(par), dtype=np.int64)
        for v in range(1, len(par)):
            depth[v] = depth[par[v] - 1] + 1
        return cls.from_depths(depth)

    def __len__(self):
        return self.m

    root = 1

    def _chk(self, v):
        if not 1 <= v <= self.m:
            raise IndexOutOfRange(v)

    def depths(self) -> np.ndarray:
        opens = np.flatnonzero(self.bp.to_array() == 1)
        return 2 * np.arange(self.m) - opens

    def parents(self) -> np.ndarray:
        return parents_from_depths(self.depths())

    def pre_order(self, v):
        self._chk(v)
        return v

    def node_depth(self, v):
        self._chk(v)
        return int(node_depth(self.k[0], self.k[1], v))

    def parent(self, v):
        self._chk(v)
        if v == 1:
            raise RootHasNoParent()
        return int(node_parent(*self.k, v))

    def subtree_last(self, v):
        self._chk(v)
        return int(subtree_last(*self.k, v))

    def subtree_size(self, v):
        return self.subtree_last(v) - v + 1

    def is_leaf(self, v):
        self._chk(v)
        return bool(self.leafbv.access(v - 1))

    def is_ancestor(self, a, b):
        """True if a is b or an ancestor of b."""
        return a <= b <= self.subtree_last(a)

    def children(self, v):
        last = self.subtree_last(v)
        out = []
        c = v + 1
        while c <= last:
            out.append(c)
            c = self.subtree_last(c) + 1
        return out

    def num_children(self, v):
        return len(self.children(v))

    def child(self, v, q):
        """q-th child (1-based) of v."""
        self._chk(v)
        last = self.subtree_last(v)
        c = v + 1
        for _ in range(q - 1):
            if c > last:
                break
            c = int(subtree_last(*self.k, c)) + 1
        if q < 1 or c > last:
            raise NoSuchChild(f"node {v} has no child {q}")
        return c

    def lca(self, a, b):
        self._chk(a)
        self._chk(b)
        return int(node_lca(*self.k, a, b))

    def level_ancestor(self, v, D):
        dep = self.node_depth(v)
        if not 0 <= D <= dep:
            raise DepthOutOfRange(D)
        return int(level_anc(*self.k, v, D))

    def leaf_rank(self, v):
        """1-based index of leaf v among all leaves."""
        if not self.is_leaf(v):
            raise IndexOutOfRange(f"node {v} is not a leaf")
        return self.leafbv.rank1(v)

    def leaf_select(self, i):
        if not 1 <= i <= self.num_leaves:
            raise IndexOutOfRange(i)
        return self.leafbv.select1(i) + 1

    def lmost_leaf(self, v):
        self._chk(v)
        return self.leafbv.rank1(v - 1) + 1

    def rmost_leaf(self, v):
        return self.leafbv.rank1(self.subtree_last(v))

    def leaf_range(self, v):
        return self.lmost_leaf(v), self.rmost_leaf(v)

    def lca_batch(self, A, B):
        return lca_batch(*self.k, np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64))

    def size_in_bits(self):
        return self.bp.size_in_bits() + 32 * len(self.seg) + self.leafbv.size_in_bits()

    def state(self):
        return self.bp.state()

    @classmethod
    def from_state(cls, st):
        return cls(bp=BitVector.from_state(st))


# ------------------------------------------------------------------ marking

@njit(cache=True)
def _lowest_marked_all(par, marked):
    m = par.shape[0]
    out = np.empty(m, dtype=np.int64)
    for v in range(m):
        if marked[v]:
            out[v] = v + 1
        else:
            out[v] = out[par[v] - 1]
    return out


@njit(cache=True)
def _prime_of_marked(par, lma, nodes):
    out = np.empty(nodes.shape[0], dtype=np.int64)
    for k in range(nodes.shape[0]):
        u = nodes[k]
        a = lma[par[u - 1] - 1]
        while par[u - 1] != a:
            u = par[u - 1]
        out[k] = u
    return out


@njit(cache=True)
def lowest_marked(words, sb, seg, P, N, mw, msb, mones, qw, qsb, qones, v):
    """Lowest marked ancestor of v (v included).

    mw/msb mark nodes in preorder, qw/qsb mark them in postorder.  The
    answer is read off the marked parentheses nearest to v's open one.
    """
    if bit_at(mw, v - 1):
        return v
    pv = select1(words, sb, v)
    closes_before = pv + 1 - v
    # next marked close and next marked open after pv
    r = rank1(qw, qsb, closes_before)
    nc = select0(words, sb, select1(qw, qsb, r + 1) + 1, N) if r < qones else N
    r1 = rank1(mw, msb, v)
    no = select1(words, sb, select1(mw, msb, r1 + 1) + 1) if r1 < mones else N
    if nc < no:
        j = bwd_le(words, sb, seg, P, N, nc, excess(words, sb, nc))
        return rank1(words, sb, j + 2)
    # previous marked open and previous marked close before pv
    po = select1(words, sb, select1(mw, msb, r1) + 1)
    pc = select0(words, sb, select1(qw, qsb, r) + 1, N) if r > 0 else -1
    if po > pc:
        return rank1(words, sb, po + 1)
    j = bwd_le(words, sb, seg, P, N, pc, excess(words, sb, pc))
    a = rank1(words, sb, j + 2)
    b = rank1(words, sb, no + 1)
    return node_lca(words, sb, seg, P, N, a, b)


class MarkingScheme:
    """Marked and prime nodes for grouping factor g over a NavTree."""

    def __init__(self, tree: NavTree, g: int, *, marked_bv=None):
        self.tree = tree
        self.g = max(2, int(g))
        if marked_bv is None:
            marked_bv = BitVector(self._compute_marked())
        self.marked = marked_bv
        self._derive()

    def _compute_marked(self):
        t, g = self.tree, self.g
        L = t.num_leaves
        firsts = np.arange(1, L + 1, g)
        lasts = np.minimum(firsts + g - 1, L)
        leaf_nodes = np.flatnonzero(t.leafbv.to_array()) + 1
        cur = np.unique(np.append(t.lca_batch(leaf_nodes[firsts - 1], leaf_nodes[lasts - 1]), 1))
        while True:
            extra = t.lca_batch(cur[:-1], cur[1:]) if len(cur) > 1 else cur[:0]
            nxt = np.union1d(cur, extra)
            if len(nxt) == len(cur):
                break
            cur = nxt
        bits = np.zeros(t.m, dtype=np.uint8)
        bits[cur - 1] = 1
        return bits

    def _derive(self):
        t = self.tree
        mk = self.marked.to_array()
        self.marked_nodes = np.flatnonzero(mk) + 1
        # postorder copy of the marks: closes in BP order
        bp = t.bp.to_array()
        opens = np.flatnonzero(bp == 1)
        depth = 2 * np.arange(t.m) - opens
        order = np.empty(t.m, dtype=np.int64)
        # node whose close is the k-th close: match by a stack-free trick on depths
        closes = np.flatnonzero(bp == 0)
        close_depth = 2 * np.cumsum(bp)[closes] - closes - 1  # depth of the closed node
        key_open = np.lexsort((opens, depth))
        key_close = np.lexsort((closes, close_depth))
        order[key_close] = key_open  # k-th close belongs to node order[k]
        self.marked_post = BitVector(mk[order])
        par = parents_from_depths(depth)
        lma = _lowest_marked_all(par, mk)
        primes = _prime_of_marked(par, lma, self.marked_nodes[1:])
        bits = np.zeros(t.m, dtype=np.uint8)
        bits[primes - 1] = 1
        self.prime = BitVector(bits)
        self.prime_nodes = np.flatnonzero(bits) + 1
        self.k = (self.marked.words, self.marked.sb, self.marked.ones,
                  self.marked_post.words, self.marked_post.sb, self.marked_post.ones)

    def is_marked(self, v):
        return bool(self.marked.access(v - 1))

    def is_prime(self, v):
        return bool(self.prime.access(v - 1))

    def lowest_marked_ancestor(self, v):
        """Deepest marked node on the root-to-v path (v included)."""
        self.tree._chk(v)
        return int(lowest_marked(*self.tree.k, *self.k, v))

    def highest_marked_descendant(self, v):
        """Highest marked node in v's subtree (v included), or None."""
        t, g = self.tree, self.g
        if v == 1:
            return 1  # the root is always marked
        L = t.num_leaves
        lm, rm = t.leaf_range(v)
        i = -(-(lm - 1) // g) * g
        j = L if rm == L else (rm // g) * g
        if i + 1 > L or min(i + g, L) > j:
            return None
        return t.lca(t.leaf_select(i + 1), t.leaf_select(j))

    def has_marked_descendant(self, v):
        return self.highest_marked_descendant(v) is not None

    def lowest_prime_ancestor(self, v):
        """Deepest prime node on the root-to-v path, or None."""
        t = self.tree
        while True:
            if self.is_prime(v):
                return v
            u = self.lowest_marked_ancestor(v)
            if u != v:
                c = t.level_ancestor(v, t.node_depth(u) + 1)
                if self.is_prime(c):
                    return c
            if self.is_prime(u):
                return u
            if u == 1:
                return None
            v = t.parent(u)

    def size_in_bits(self):
        return (self.marked.size_in_bits() + self.marked_post.size_in_bits()
                + self.prime.size_in_bits())
