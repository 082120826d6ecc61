"""Bit-vectors with rank/select, packed integer arrays, unary count
sequences and a levelwise wavelet tree.

Positions in the kernels are 0-based and ranges are half-open.  The Python
classes expose the same convention; callers that follow the 1-based
notation of the algorithms convert at their boundary.
"""
import numpy as np
from numba import njit

from .errors import IndexOutOfRange, NotEnoughOccurrences, NotEnoughValues

SUPER = 512  # bits per rank superblock
_WPS = SUPER // 64

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)
_ONE = np.uint64(1)
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True, inline="always")
def popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True, inline="always")
def bit_at(words, i):
    return np.int64((words[i >> 6] >> np.uint64(i & 63)) & _ONE)


@njit(cache=True)
def rank1(words, sb, i):
    """Number of ones in bits [0, i)."""
    k = i >> 9
    r = sb[k]
    wi = i >> 6
    for w in range(k * 8, wi):
        r += popcount(words[w])
    rem = i & 63
    if rem:
        r += popcount(words[wi] & ((_ONE << np.uint64(rem)) - _ONE))
    return r


@njit(cache=True, inline="always")
def rank0(words, sb, i):
    return i - rank1(words, sb, i)


@njit(cache=True, inline="always")
def _select_in_word(w, r):
    # position of the r-th (1-based) set bit of w
    for b in range(64):
        if (w >> np.uint64(b)) & _ONE:
            r -= 1
            if r == 0:
                return b
    return -1


@njit(cache=True)
def select1(words, sb, k):
    """0-based position of the k-th one (k >= 1); -1 if absent."""
    nsb = sb.shape[0]
    if k < 1 or k > sb[nsb - 1]:
        return -1
    lo, hi = 0, nsb - 1
    while hi - lo > 1:  # largest s with sb[s] < k
        mid = (lo + hi) >> 1
        if sb[mid] < k:
            lo = mid
        else:
            hi = mid
    cnt = sb[lo]
    w = lo * 8
    while True:
        pc = popcount(words[w])
        if cnt + pc >= k:
            return w * 64 + _select_in_word(words[w], k - cnt)
        cnt += pc
        w += 1


@njit(cache=True)
def select0(words, sb, k, n):
    """0-based position of the k-th zero among the first n bits; -1 if absent."""
    nsb = sb.shape[0]
    if k < 1 or k > n - sb[nsb - 1]:
        return -1
    lo, hi = 0, nsb - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if mid * 512 - sb[mid] < k:
            lo = mid
        else:
            hi = mid
    cnt = lo * 512 - sb[lo]
    w = lo * 8
    while True:
        inv = ~words[w]
        pc = popcount(inv)
        if cnt + pc >= k:
            return w * 64 + _select_in_word(inv, k - cnt)
        cnt += pc
        w += 1


def pack_bits(bits) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8)
    n = len(bits)
    nw = (n + 63) // 64 + 1
    padded = np.zeros(nw * 64, dtype=np.uint8)
    padded[:n] = bits
    return np.packbits(padded.reshape(-1, 8), axis=1, bitorder="little").reshape(-1).view(np.uint64).copy()


def superblocks(words: np.ndarray) -> np.ndarray:
    nw = len(words)
    pad = (-nw) % _WPS + _WPS
    w = np.concatenate([words, np.zeros(pad, dtype=np.uint64)])
    per_word = np.unpackbits(w.view(np.uint8)).reshape(len(w), 64).sum(axis=1)
    per_super = per_word.reshape(-1, _WPS).sum(axis=1)
    sb = np.zeros(len(per_super) + 1, dtype=np.int64)
    np.cumsum(per_super, out=sb[1:])
    return sb


class BitVector:
    """Static bit-vector with constant-time rank and logarithmic select."""

    def __init__(self, bits=None, *, words=None, n=None):
        if words is None:
            bits = np.asarray(bits if bits is not None else [], dtype=np.uint8)
            n = len(bits)
            words = pack_bits(bits)
        self.n = int(n)
        self.words = np.ascontiguousarray(words, dtype=np.uint64)
        self.sb = superblocks(self.words)
        self.ones = int(self.sb[-1])

    def __len__(self):
        return self.n

    def access(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexOutOfRange(i)
        return int(bit_at(self.words, i))

    def __getitem__(self, i):
        return self.access(i)

    def rank1(self, i: int) -> int:
        """Ones in [0, i)."""
        if not 0 <= i <= self.n:
            raise IndexOutOfRange(i)
        return int(rank1(self.words, self.sb, i))

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def select1(self, k: int) -> int:
        p = select1(self.words, self.sb, k)
        if p < 0:
            raise NotEnoughOccurrences(k)
        return int(p)

    def select0(self, k: int) -> int:
        p = select0(self.words, self.sb, k, self.n)
        if p < 0:
            raise NotEnoughOccurrences(k)
        return int(p)

    def to_array(self) -> np.ndarray:
        return np.unpackbits(self.words.view(np.uint8), bitorder="little")[: self.n]

    def size_in_bits(self) -> int:
        # payload words plus one 64-bit count per 512-bit superblock
        return 64 * len(self.words) + 64 * len(self.sb)

    def state(self):
        return {"n": self.n, "words": self.words}

    @classmethod
    def from_state(cls, st):
        return cls(words=st["words"], n=st["n"])


# ---------------------------------------------------------------- packed ints

@njit(cache=True)
def packed_get(words, width, i):
    if width == 0:
        return 0
    off = i * width
    w = off >> 6
    sh = off & 63
    val = words[w] >> np.uint64(sh)
    if sh + width > 64:
        val |= words[w + 1] << np.uint64(64 - sh)
    if width < 64:
        val &= (_ONE << np.uint64(width)) - _ONE
    return np.int64(val)


class IntVector:
    """Fixed-width packed array of non-negative integers."""

    def __init__(self, values=None, width=None, *, words=None, n=None):
        if words is None:
            vals = np.asarray(values if values is not None else [], dtype=np.int64)
            if len(vals) and vals.min() < 0:
                raise ValueError("IntVector stores non-negative values only")
            top = int(vals.max()) if len(vals) else 0
            if width is None:
                width = max(1, top.bit_length())
            n = len(vals)
            words = self._pack(vals, width)
        self.n = int(n)
        self.width = int(width)
        self.words = np.ascontiguousarray(words, dtype=np.uint64)

    @staticmethod
    def _pack(vals, width):
        n = len(vals)
        bits = ((vals[:, None] >> np.arange(width, dtype=np.int64)) & 1).astype(np.uint8).reshape(-1)
        return pack_bits(bits) if n else np.zeros(1, dtype=np.uint64)

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        if not 0 <= i < self.n:
            raise IndexOutOfRange(i)
        return int(packed_get(self.words, self.width, i))

    def to_array(self) -> np.ndarray:
        bits = np.unpackbits(self.words.view(np.uint8), bitorder="little")[: self.n * self.width]
        bits = bits.reshape(self.n, self.width).astype(np.int64)
        return (bits << np.arange(self.width, dtype=np.int64)).sum(axis=1)

    def size_in_bits(self) -> int:
        return 64 * len(self.words)

    def state(self):
        return {"n": self.n, "width": self.width, "words": self.words}

    @classmethod
    def from_state(cls, st):
        return cls(words=st["words"], n=st["n"], width=st["width"])


class UnaryCounts:
    """c_1..c_m stored as 0 1^c1 0 1^c2 ... 0."""

    def __init__(self, counts=None, *, bv=None):
        if bv is None:
            counts = np.asarray(counts if counts is not None else [], dtype=np.int64)
            m = len(counts)
            bits = np.ones(m + 1 + int(counts.sum()), dtype=np.uint8)
            zero_pos = np.arange(m + 1) + np.concatenate([[0], np.cumsum(counts)])
            bits[zero_pos] = 0
            bv = BitVector(bits)
        self.bv = bv
        self.m = bv.n - bv.ones - 1

    def __len__(self):
        return self.m

    def get(self, k: int) -> int:
        """c_k for 1 <= k <= m."""
        if not 1 <= k <= self.m:
            raise IndexOutOfRange(k)
        bv = self.bv
        return int(select0(bv.words, bv.sb, k + 1, bv.n) - select0(bv.words, bv.sb, k, bv.n) - 1)

    def prefix(self, k: int) -> int:
        """c_1 + ... + c_k."""
        bv = self.bv
        return int(rank1(bv.words, bv.sb, select0(bv.words, bv.sb, k + 1, bv.n)))

    def to_array(self) -> np.ndarray:
        bits = self.bv.to_array()
        zeros = np.flatnonzero(bits == 0)
        return np.diff(zeros) - 1

    def size_in_bits(self) -> int:
        return self.bv.size_in_bits()

    def state(self):
        return self.bv.state()

    @classmethod
    def from_state(cls, st):
        return cls(bv=BitVector.from_state(st))


# ------------------------------------------------------------- wavelet tree

@njit(cache=True)
def _wt_access(W, S, B, N, i):
    s, e, p, v = 0, N, i, 0
    for l in range(B):
        words, sb = W[l], S[l]
        r0s = rank0(words, sb, s)
        z = rank0(words, sb, e) - r0s
        if bit_at(words, p) == 0:
            p = s + rank0(words, sb, p) - r0s
            e = s + z
            v = v << 1
        else:
            p = s + z + rank1(words, sb, p) - (s - r0s)
            s = s + z
            v = (v << 1) | 1
    return v


@njit(cache=True)
def _wt_rank(W, S, B, N, i, x):
    s, e, p = 0, N, i
    for l in range(B):
        words, sb = W[l], S[l]
        r0s = rank0(words, sb, s)
        z = rank0(words, sb, e) - r0s
        if (x >> (B - 1 - l)) & 1 == 0:
            p = s + rank0(words, sb, p) - r0s
            e = s + z
        else:
            p = s + z + rank1(words, sb, p) - (s - r0s)
            s = s + z
    return p - s


@njit(cache=True)
def _wt_count_less(W, S, B, N, i, j, x):
    """Values < x among positions [i, j)."""
    if i >= j or x <= 0:
        return 0
    if x >= (1 << B):
        return j - i
    s, e, a, b, cnt = 0, N, i, j, 0
    for l in range(B):
        words, sb = W[l], S[l]
        r0s = rank0(words, sb, s)
        z = rank0(words, sb, e) - r0s
        ra = rank0(words, sb, a)
        rb = rank0(words, sb, b)
        if (x >> (B - 1 - l)) & 1 == 0:
            a = s + ra - r0s
            b = s + rb - r0s
            e = s + z
        else:
            cnt += rb - ra
            a = s + z + (a - ra) - (s - r0s)
            b = s + z + (b - rb) - (s - r0s)
            s = s + z
        if a >= b:
            break
    return cnt


@njit(cache=True)
def _wt_range_count(W, S, B, N, i, j, x, y):
    """Values in [x, y) among positions [i, j)."""
    return _wt_count_less(W, S, B, N, i, j, y) - _wt_count_less(W, S, B, N, i, j, x)


@njit(cache=True)
def _wt_quantile(W, S, B, N, i, j, k):
    """k-th smallest (1-based) value among positions [i, j)."""
    s, e, a, b, v = 0, N, i, j, 0
    for l in range(B):
        words, sb = W[l], S[l]
        r0s = rank0(words, sb, s)
        z = rank0(words, sb, e) - r0s
        ra = rank0(words, sb, a)
        rb = rank0(words, sb, b)
        zc = rb - ra
        if k <= zc:
            a = s + ra - r0s
            b = s + rb - r0s
            e = s + z
            v = v << 1
        else:
            k -= zc
            a = s + z + (a - ra) - (s - r0s)
            b = s + z + (b - rb) - (s - r0s)
            s = s + z
            v = (v << 1) | 1
    return v


@njit(cache=True)
def _wt_lift(W, S, B, N, starts, zs, x, level, p):
    # map a global position p at `level` on the path of x back to level 0
    for l in range(level - 1, -1, -1):
        words, sb = W[l], S[l]
        s = starts[l]
        if (x >> (B - 1 - l)) & 1 == 0:
            p = select0(words, sb, rank0(words, sb, s) + (p - s) + 1, N)
        else:
            cs = s + zs[l]
            p = select1(words, sb, rank1(words, sb, s) + (p - cs) + 1)
    return p


@njit(cache=True)
def _wt_select(W, S, B, N, k, x):
    starts = np.empty(B + 1, dtype=np.int64)
    zs = np.empty(B + 1, dtype=np.int64)
    s, e = 0, N
    for l in range(B):
        words, sb = W[l], S[l]
        r0s = rank0(words, sb, s)
        z = rank0(words, sb, e) - r0s
        starts[l] = s
        zs[l] = z
        if (x >> (B - 1 - l)) & 1 == 0:
            e = s + z
        else:
            s = s + z
    if k < 1 or k > e - s:
        return -1
    return _wt_lift(W, S, B, N, starts, zs, x, B, s + k - 1)


@njit(cache=True)
def _wt_predecessor(W, S, B, N, i, x):
    """Largest j < i with A[j] < x, or -1."""
    if i <= 0 or x <= 0:
        return -1
    if x >= (1 << B):
        return i - 1
    starts = np.empty(B + 1, dtype=np.int64)
    zs = np.empty(B + 1, dtype=np.int64)
    s, e, p, best = 0, N, i, -1
    for l in range(B):
        words, sb = W[l], S[l]
        r0s = rank0(words, sb, s)
        z = rank0(words, sb, e) - r0s
        starts[l] = s
        zs[l] = z
        rp = rank0(words, sb, p)
        if (x >> (B - 1 - l)) & 1 == 1:
            if rp - r0s > 0:
                cand = select0(words, sb, rp, N)
                cand = _wt_lift(W, S, B, N, starts, zs, x, l, cand)
                if cand > best:
                    best = cand
            p = s + z + (p - rp) - (s - r0s)
            s = s + z
        else:
            p = s + rp - r0s
            e = s + z
        if p <= s:
            break
    return best


def _build_levels(values: np.ndarray, B: int):
    n = len(values)
    cur = values.astype(np.int64)
    W, S = [], []
    for l in range(B):
        shift = B - 1 - l
        bits = ((cur >> shift) & 1).astype(np.uint8)
        words = pack_bits(bits)
        W.append(words)
        S.append(superblocks(words))
        cur = cur[np.argsort(cur >> shift, kind="stable")]
    if B == 0:
        return np.zeros((0, 1), dtype=np.uint64), np.zeros((0, 1), dtype=np.int64)
    return np.vstack(W), np.vstack(S)


class WaveletTree:
    """Balanced wavelet tree over integer values in [lo, hi].

    Public positions are 0-based; ranges are half-open [i, j).
    """

    def __init__(self, values=None, lo=None, hi=None, *, state=None):
        if state is not None:
            self.n, self.lo, self.hi = int(state["n"]), int(state["lo"]), int(state["hi"])
            self.B = max(1, (self.hi - self.lo).bit_length())
            self.W = np.ascontiguousarray(state["W"], dtype=np.uint64)
            self.S = np.vstack([superblocks(w) for w in self.W])
            return
        vals = np.asarray(values if values is not None else [], dtype=np.int64)
        self.n = len(vals)
        if lo is None:
            lo = int(vals.min()) if self.n else 0
        if hi is None:
            hi = int(vals.max()) if self.n else lo
        if self.n and (vals.min() < lo or vals.max() > hi):
            raise ValueError("value outside the declared alphabet range")
        self.lo, self.hi = int(lo), int(hi)
        self.B = max(1, (self.hi - self.lo).bit_length())
        self.W, self.S = _build_levels(vals - self.lo, self.B)

    def __len__(self):
        return self.n

    def _check(self, i, upper):
        if not 0 <= i <= upper:
            raise IndexOutOfRange(i)

    def access(self, i: int) -> int:
        self._check(i, self.n - 1)
        return int(_wt_access(self.W, self.S, self.B, self.n, i)) + self.lo

    def __getitem__(self, i):
        return self.access(i)

    def rank(self, i: int, x: int) -> int:
        """Occurrences of x in [0, i)."""
        self._check(i, self.n)
        if not self.lo <= x <= self.hi:
            return 0
        return int(_wt_rank(self.W, self.S, self.B, self.n, i, x - self.lo))

    def select(self, k: int, x: int) -> int:
        """Position of the k-th occurrence of x."""
        if self.lo <= x <= self.hi:
            p = _wt_select(self.W, self.S, self.B, self.n, k, x - self.lo)
            if p >= 0:
                return int(p)
        raise NotEnoughOccurrences(f"{k}-th occurrence of {x}")

    def predecessor(self, i: int, x: int):
        """Largest j < i with A[j] < x, or None."""
        self._check(i, self.n)
        p = _wt_predecessor(self.W, self.S, self.B, self.n, i, self._clip(x))
        return None if p < 0 else int(p)

    def _clip(self, x):
        # shift into the stored range, saturating at both ends
        x -= self.lo
        return min(max(x, 0), 1 << self.B)

    def count_less(self, i: int, j: int, x: int) -> int:
        if i >= j:
            return 0
        return int(_wt_count_less(self.W, self.S, self.B, self.n, i, j, self._clip(x)))

    def range_count(self, i: int, j: int, x: int, y: int) -> int:
        """Values in [x, y] among positions [i, j)."""
        i, j = max(i, 0), min(j, self.n)
        if i >= j or x > y:
            return 0
        lo, top = self.lo, 1 << self.B
        x = min(max(x - lo, 0), top)
        y = min(max(y + 1 - lo, 0), top)
        return int(_wt_range_count(self.W, self.S, self.B, self.n, i, j, x, y))

    def quantile(self, i: int, j: int, k: int) -> int:
        if not 1 <= k <= j - i:
            raise NotEnoughValues(k)
        return int(_wt_quantile(self.W, self.S, self.B, self.n, i, j, k)) + self.lo

    def range_next_val(self, i: int, j: int, x: int, k: int) -> int:
        """k-th smallest value > x among positions [i, j)."""
        c = self.count_less(i, j, x + 1)
        if k < 1 or c + k > j - i:
            raise NotEnoughValues(k)
        return self.quantile(i, j, c + k)

    def range_prev_val(self, i: int, j: int, x: int, k: int) -> int:
        """k-th largest value < x among positions [i, j)."""
        c = self.count_less(i, j, x)
        if k < 1 or k > c:
            raise NotEnoughValues(k)
        return self.quantile(i, j, c - k + 1)

    def to_array(self) -> np.ndarray:
        return np.array([self.access(i) for i in range(self.n)], dtype=np.int64)

    def size_in_bits(self) -> int:
        return 64 * (self.W.size + self.S.size)

    def state(self):
        return {"n": self.n, "lo": self.lo, "hi": self.hi, "W": self.W}
