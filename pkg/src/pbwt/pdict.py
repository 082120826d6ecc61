"""Parameterized dictionary matching over a relabeled pattern trie.

States are trie nodes in preorder, with each node's children ordered the
way their reversed encodings sort (see `child_order`).  A state's label is
the rank of the prev-encoding of its reversed root path; labels are kept as
an explicit permutation.  `next` goes through the Z wavelet tree and the
group bit-string S, so a transition costs a handful of rank/select calls.
"""
from bisect import bisect_left, insort
from collections import deque
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from .alphabet import STATIC_OFFSET, AlphabetSpec, CodedText, encode_text, prev_encode
from .errors import CounterOverflow, DuplicatePattern, NotEnoughOccurrences, PBWTError
from .succinct import BitVector, IntVector, WaveletTree
from .topology import NavTree


def _prev_tokens(codes, sp):
    return tuple(prev_encode(codes, sigma_p=sp))


def relabel_paths(children, sp):
    """Assign Sigma-codes to trie edges so that prev() of every path is unchanged.

    children: per node, dict token -> child (node 0 is the root).  Returns the
    label of each node's incoming edge (0 for the root).
    """
    m = len(children)
    label = np.zeros(m, np.int64)
    counter = np.zeros(m, np.int64)
    counter[0] = 1
    path: List[int] = []
    stack = [(0, 0)]
    while stack:
        x, d = stack.pop()
        if x:
            del path[d - 1:]
            path.append(int(label[x]))
        for tok, y in sorted(children[x].items(), reverse=True):
            if tok >= STATIC_OFFSET:
                label[y] = tok - STATIC_OFFSET
                counter[y] = counter[x]
            elif tok == 0:
                if counter[x] > sp:
                    raise CounterOverflow(f"more than {sp} distinct parameterized symbols on a path")
                label[y] = counter[x]
                counter[y] = counter[x] + 1
            else:
                label[y] = path[-tok]
                counter[y] = counter[x]
            stack.append((y, d + 1))
    return label


def child_order(z, sp):
    """Sort key putting sibling states in the order of their reversed encodings:
    p-edges by decreasing Z, then s-edges by increasing symbol code."""
    return (0, -z) if z <= sp else (1, z)


END = -1   # lead token for a reversed path that ends at the branching node


def next_precedes(zi, zj, z, lead_i, lead_j, u_first, sigma_p):
    """Predict whether the target of edge (u, u_i) sorts before that of (v, v_j).

    zi, zj are the edges' Z values; z counts zeros in the longest common
    prefix of the reversed encodings of u and v; lead_i / lead_j are the
    tokens that follow it (END when a string stops there); u_first says the
    reversed encoding of u is <= that of v.
    """
    zi, zj, z, lead_i, lead_j, u_first = np.broadcast_arrays(
        *(np.asarray(x) for x in (zi, zj, z, lead_i, lead_j, u_first)))
    si, sj = zi > sigma_p, zj > sigma_p
    # parameter edges: orient so that u's reversed encoding comes first
    a, b = np.where(u_first, zi, zj), np.where(u_first, zj, zi)
    la, lb = np.where(u_first, lead_i, lead_j), np.where(u_first, lead_j, lead_i)
    lo_a, lo_b = a <= z, b <= z
    first = ((lo_a & lo_b & (a >= b)) | (~lo_a & lo_b)
             | (~lo_a & ~lo_b & ~((a == z + 1) & (la == 0) & (lb < STATIC_OFFSET))))
    out = np.where(si != sj, sj,
                   np.where(si, (zi < zj) | ((zi == zj) & u_first), first == u_first))
    return bool(out) if out.ndim == 0 else out


class PDictIndex:
    """Dictionary of p-patterns; `scan` reports every (end position, pattern id)."""

    @classmethod
    def build(cls, patterns: Sequence, spec: AlphabetSpec):
        if not patterns:
            raise PBWTError("the dictionary needs at least one pattern")
        sp = spec.sigma_p
        self = cls()
        self.spec, self.sigma_p = spec, sp
        codes = [p.codes.tolist() if isinstance(p, CodedText) else
                 encode_text(p, spec, terminate=False).codes.tolist() if isinstance(p, str)
                 else list(p) for p in patterns]
        seen = {}
        for i, c in enumerate(codes, start=1):
            if not c:
                raise PBWTError(f"pattern {i} is empty")
            key = _prev_tokens(c, sp)
            if key in seen:
                raise DuplicatePattern(seen[key], i)
            seen[key] = i
        # trie over prev tokens; node 0 is the root
        children = [{}]
        final_of = {}
        for i, c in enumerate(codes, start=1):
            x = 0
            for tok in _prev_tokens(c, sp):
                y = children[x].get(tok)
                if y is None:
                    y = len(children)
                    children.append({})
                    children[x][tok] = y
                x = y
            final_of[x] = i
        m = len(children)
        label = relabel_paths(children, sp)
        # reversed-path encodings, Z per edge, depths
        rev = [()] * m
        zval = np.zeros(m, np.int64)
        depth = np.zeros(m, np.int64)
        pathsym: List[List[int]] = [[] for _ in range(m)]
        order = [0]
        for x in order:
            for y in children[x].values():
                pathsym[y] = pathsym[x] + [int(label[y])]
                depth[y] = depth[x] + 1
                rev[y] = tuple(prev_encode(pathsym[y][::-1], sigma_p=sp))
                zval[y] = self._z_of(pathsym[x], int(label[y]), sp)
                order.append(y)
        ranks = sorted(range(m), key=lambda v: rev[v])
        lab = np.empty(m, np.int64)
        lab[ranks] = np.arange(1, m + 1)
        # rebuild in preorder with siblings in child_order
        pre = []
        stack = [0]
        while stack:
            x = stack.pop()
            pre.append(x)
            kids = sorted(children[x].values(), key=lambda y: child_order(zval[y], sp))
            stack.extend(reversed(kids))
        pos = np.empty(m, np.int64)
        pos[pre] = np.arange(m)
        pre = np.array(pre)
        self.m = m
        self.trie = NavTree.from_depths(depth[pre])
        self.path_len = IntVector(depth[pre])
        self.edge_labels = IntVector(label[pre])
        self.z = IntVector(zval[pre])
        self.label_of = IntVector(lab[pre])                 # node -> label
        node_of = np.empty(m, np.int64)
        node_of[lab[pre] - 1] = np.arange(1, m + 1)
        self.node_of = IntVector(node_of)                   # label -> node
        is_leaf = np.zeros(m, np.uint8)
        is_leaf[lab[[v for v in range(m) if not children[v]]] - 1] = 1
        self.L = BitVector(is_leaf)
        # pattern ids: final labels in label order are the patterns in
        # reversed-encoding order; keep the map back to input positions
        fin = np.zeros(m, np.uint8)
        flabels = sorted((int(lab[v]), i) for v, i in final_of.items())
        fin[[r - 1 for r, _ in flabels]] = 1
        self.final = BitVector(fin)
        self.pattern_ids = IntVector([i for _, i in flabels])
        self.pattern_len = IntVector([len(codes[i - 1]) for _, i in flabels])
        # leaves of the reversed trie: children grouped by parent label, Z in sibling order
        zs, sbits = [], [0]
        for r in range(1, m + 1):
            v = int(node_of[r - 1])
            kids = self.trie.children(v)
            if not kids:
                continue
            zs.extend(int(self.z[k - 1]) for k in kids)
            sbits.extend([1] * len(kids) + [0])
        self.Z = WaveletTree(np.array(zs, np.int64), 1, max(1, spec.sigma))
        self.S = BitVector(np.array(sbits, np.uint8))
        self._links(children, pos, depth, final_of)
        return self

    @staticmethod
    def _z_of(path_w, c, sp):
        """Z of an edge labeled c below a node whose root path is path_w."""
        if c > sp:
            return c
        seen = set()
        for s in reversed(path_w):
            if s <= sp:
                seen.add(s)
            if s == c:
                return len(seen)
        return len(seen) + 1

    def _links(self, children, pos, depth, final_of):
        m = len(children)
        fail = np.zeros(m, np.int64)
        rep = np.zeros(m, np.int64)
        q = deque()
        for y in children[0].values():
            q.append(y)
        while q:
            x = q.popleft()
            for tok, y in children[x].items():
                w = fail[x]
                while True:
                    t = tok if tok >= STATIC_OFFSET or tok <= depth[w] else 0
                    if t in children[w]:
                        f = children[w][t]
                        break
                    if w == 0:
                        f = 0
                        break
                    w = fail[w]
                fail[y] = f
                rep[y] = f if f in final_of else rep[f]
                q.append(y)
        nf = np.empty(m, np.int64)
        nr = np.empty(m, np.int64)
        nf[pos] = pos[fail] + 1
        nr[pos] = pos[rep] + 1
        self.failure = IntVector(nf)
        self.report = IntVector(nr)

    _PARTS = ("path_len", "edge_labels", "z", "label_of", "node_of", "L", "final",
              "pattern_ids", "pattern_len", "Z", "S", "failure", "report")

    def state(self):
        st = {"m": self.m, "sigma_p": self.sigma_p, "trie": self.trie.state()}
        for k in self._PARTS:
            st[k] = getattr(self, k).state()
        return st

    @classmethod
    def from_state(cls, st, spec: AlphabetSpec):
        self = cls()
        self.spec, self.sigma_p, self.m = spec, int(st["sigma_p"]), int(st["m"])
        self.trie = NavTree.from_state(st["trie"])
        for k in self._PARTS:
            if k == "Z":
                v = WaveletTree(state=st[k])
            elif k in ("L", "final", "S"):
                v = BitVector.from_state(st[k])
            else:
                v = IntVector.from_state(st[k])
            setattr(self, k, v)
        return self

    # ------------------------------------------------------------ queries
    def root(self) -> int:
        return 1

    def is_final(self, u) -> bool:
        return bool(self.final.access(self.label_of[u - 1] - 1))

    def pattern_of(self, u):
        """Input id (1-based) of the pattern ending at final state u."""
        r = self.label_of[u - 1]
        return self.pattern_ids[self.final.rank1(r - 1)]

    def depth(self, u):
        return self.path_len[u - 1]

    def z_value(self, u):
        """Z of the edge entering u."""
        return self.z[u - 1]

    def next(self, u, z):
        """Child of u whose Z equals z, or None."""
        r = self.label_of[u - 1]
        if self.L.access(r - 1):
            return None
        k = r - self.L.rank1(r)                       # rank among internal states
        sp = self.S.rank1(self.S.select0(k)) + 1
        ep = self.S.rank1(self.S.select0(k + 1))
        try:
            q = self.Z.select(1 + self.Z.rank(sp - 1, z), z) + 1
        except NotEnoughOccurrences:
            return None
        if q > ep:
            return None
        return self.trie.child(u, q - sp + 1)

    def fail(self, u):
        return self.failure[u - 1]

    def report_link(self, u):
        return self.report[u - 1]

    # --------------------------------------------------------------- scan
    def iter_scan(self, text) -> Iterator[Tuple[int, int]]:
        """Yield (end position, pattern id) pairs in text order, both 1-based."""
        if isinstance(text, CodedText):
            codes = text.codes.tolist()
        elif isinstance(text, str):
            codes = encode_text(text, self.spec, terminate=False).codes.tolist()
        else:
            codes = list(text)
        sp = self.sigma_p
        last = {}          # p-symbol -> last position seen
        active: List[int] = []   # sorted last positions of symbols inside the window
        u, j = 1, 0        # window is codes[j:pos]
        for pos, c in enumerate(codes):
            while True:
                while active and active[0] < j:
                    active.pop(0)
                if c > sp:
                    z = c
                else:
                    a = last.get(c, -1)
                    z = len(active) + 1 if a < j else len(active) - bisect_left(active, a)
                v = self.next(u, z)
                if v is not None:
                    u = v
                    break
                if u == 1:
                    j = pos + 1
                    break
                w = self.fail(u)
                j += self.depth(u) - self.depth(w)
                u = w
            if c <= sp:
                a = last.get(c, -1)
                if a >= 0:
                    k = bisect_left(active, a)
                    if k < len(active) and active[k] == a:
                        active.pop(k)
                insort(active, pos)
                last[c] = pos
            if u != 1:
                hits = [self.pattern_of(u)] if self.is_final(u) else []
                x = self.report_link(u)
                while x != 1:
                    hits.append(self.pattern_of(x))
                    x = self.report_link(x)
                for i in sorted(hits):
                    yield pos + 1, i

    def scan(self, text) -> List[Tuple[int, int]]:
        return sorted(self.iter_scan(text))

    def size_in_bits(self):
        parts = [self.trie, self.path_len, self.edge_labels, self.z, self.label_of,
                 self.node_of, self.L, self.final, self.pattern_ids, self.pattern_len,
                 self.Z, self.S, self.failure, self.report]
        return sum(p.size_in_bits() for p in parts)
