"""Command-line front end and the PBWX index file format.

File layout (all integers little-endian):

    "PBWX" | version:u8 | payload | crc32(payload):u32

The payload starts with a fixed header (n, sigma_s, sigma_p, delta as u64,
then a flag byte), followed by the alphabet text and a list of named
sections.  Each section is a name, a u64 byte length and a tagged,
self-describing encoding of one structure's state.
"""
import argparse
import struct
import sys
import zlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .alphabet import AlphabetSpec, encode_text, format_tokens
from .errors import FormatError, PBWTError
from .pdict import PDictIndex
from .pindex import PIndex
from .sindex import SIndex

MAGIC = b"PBWX"
VERSION = 1

HAS_SINDEX = 1
HAS_PAIRING = 2
HAS_PINDEX = 4
HAS_DICT = 8

_SECTIONS = (("pindex", PIndex), ("sindex", SIndex), ("pdict", PDictIndex))


# ------------------------------------------------------------------ codec

def _u64(x):
    return struct.pack("<Q", x)


def _put_str(out, s):
    b = s.encode("utf-8")
    out += _u64(len(b))
    out += b


def encode_value(v, out: bytearray):
    """Append a tagged encoding of v (nested dicts, lists, ints, strings, arrays)."""
    if isinstance(v, (bool, np.bool_)):
        out += b"B" + bytes([int(v)])
    elif isinstance(v, (int, np.integer)):
        out += b"I" + struct.pack("<q", int(v))
    elif v is None:
        out += b"N"
    elif isinstance(v, str):
        out += b"S"
        _put_str(out, v)
    elif isinstance(v, np.ndarray):
        dt = v.dtype.newbyteorder("<")
        out += b"A"
        _put_str(out, dt.str)
        out += _u64(v.ndim)
        for s in v.shape:
            out += _u64(s)
        out += np.ascontiguousarray(v, dtype=dt).tobytes()
    elif isinstance(v, dict):
        out += b"D" + _u64(len(v))
        for k, x in v.items():
            _put_str(out, k)
            encode_value(x, out)
    elif isinstance(v, (list, tuple)):
        out += b"L" + _u64(len(v))
        for x in v:
            encode_value(x, out)
    else:
        raise TypeError(f"cannot serialize {type(v).__name__}")
    return out


class _Reader:
    def __init__(self, buf):
        self.buf = memoryview(buf)
        self.pos = 0

    def take(self, k):
        if k < 0 or self.pos + k > len(self.buf):
            raise FormatError("truncated index file")
        b = self.buf[self.pos:self.pos + k]
        self.pos += k
        return b

    def u64(self):
        return struct.unpack("<Q", self.take(8))[0]

    def string(self):
        try:
            return bytes(self.take(self.u64())).decode("utf-8")
        except UnicodeDecodeError as e:
            raise FormatError("bad string in index file") from e

    def value(self):
        tag = bytes(self.take(1))
        if tag == b"B":
            return bool(self.take(1)[0])
        if tag == b"I":
            return struct.unpack("<q", self.take(8))[0]
        if tag == b"N":
            return None
        if tag == b"S":
            return self.string()
        if tag == b"A":
            try:
                dt = np.dtype(self.string())
            except TypeError as e:
                raise FormatError("bad array type") from e
            shape = tuple(self.u64() for _ in range(self.u64()))
            count = int(np.prod(shape, dtype=np.int64))
            raw = self.take(count * dt.itemsize)
            return np.frombuffer(raw, dtype=dt).reshape(shape).astype(dt.newbyteorder("="))
        if tag == b"D":
            return {self.string(): self.value() for _ in range(self.u64())}
        if tag == b"L":
            return [self.value() for _ in range(self.u64())]
        raise FormatError(f"unknown value tag {tag!r}")


# ------------------------------------------------------------- index file

@dataclass
class IndexFile:
    spec: AlphabetSpec
    n: int = 0
    delta: int = 0
    pindex: Optional[PIndex] = None
    sindex: Optional[SIndex] = None
    pdict: Optional[PDictIndex] = None

    @property
    def flags(self):
        f = 0
        if self.sindex is not None:
            f |= HAS_SINDEX
        if self.spec.pairs:
            f |= HAS_PAIRING
        if self.pindex is not None:
            f |= HAS_PINDEX
        if self.pdict is not None:
            f |= HAS_DICT
        return f


def dumps(ix: IndexFile) -> bytes:
    spec = ix.spec
    payload = bytearray()
    payload += _u64(ix.n) + _u64(spec.sigma - spec.sigma_p) + _u64(spec.sigma_p) + _u64(ix.delta)
    payload += bytes([ix.flags])
    _put_str(payload, spec.to_text())
    for name, _ in _SECTIONS:
        obj = getattr(ix, name)
        if obj is None:
            continue
        body = encode_value(obj.state(), bytearray())
        _put_str(payload, name)
        payload += _u64(len(body))
        payload += body
    return MAGIC + bytes([VERSION]) + bytes(payload) + struct.pack("<I", zlib.crc32(payload))


def loads(data: bytes) -> IndexFile:
    if len(data) < len(MAGIC) + 5 or data[:4] != MAGIC:
        raise FormatError("not a PBWX index file")
    if data[4] != VERSION:
        raise FormatError(f"unsupported format version {data[4]}")
    payload = data[5:-4]
    if zlib.crc32(payload) != struct.unpack("<I", data[-4:])[0]:
        raise FormatError("checksum mismatch")
    r = _Reader(payload)
    n, sigma_s, sigma_p, delta = (r.u64() for _ in range(4))
    flags = r.take(1)[0]
    try:
        spec = AlphabetSpec.parse(r.string())
    except PBWTError as e:
        raise FormatError(f"bad alphabet table: {e}") from e
    if spec.sigma_p != sigma_p or spec.sigma - spec.sigma_p != sigma_s:
        raise FormatError("header does not match the alphabet table")
    ix = IndexFile(spec, n, delta)
    classes = dict(_SECTIONS)
    while r.pos < len(payload):
        name = r.string()
        size = r.u64()
        if name not in classes:
            r.take(size)          # unknown sections are skipped
            continue
        sub = _Reader(r.take(size))
        try:
            obj = classes[name].from_state(sub.value(), spec)
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(f"bad section {name!r}") from e
        setattr(ix, name, obj)
    if ix.flags != flags:
        raise FormatError("section list does not match header flags")
    return ix


def save(path, ix: IndexFile):
    with open(path, "wb") as fh:
        fh.write(dumps(ix))


def load(path) -> IndexFile:
    with open(path, "rb") as fh:
        return loads(fh.read())


# ------------------------------------------------------------------ stats

def stats_lines(ix: IndexFile):
    spec = ix.spec
    out = [f"n={ix.n} sigma={spec.sigma} sigma_s={spec.sigma - spec.sigma_p} "
           f"sigma_p={spec.sigma_p} delta={ix.delta}"]
    for name in ("pindex", "sindex"):
        obj = getattr(ix, name)
        if obj is None:
            continue
        parts = obj.space_breakdown()
        for k, v in parts.items():
            out.append(f"{name}.{k}={v}")
        total = sum(parts.values())
        out.append(f"{name}.total_bits={total}")
        out.append(f"{name}.bits_per_symbol={total / max(1, ix.n):.4f}")
    if ix.pdict is not None:
        d = ix.pdict
        out.append(f"pdict.states={d.m}")
        out.append(f"pdict.patterns={len(d.pattern_ids)}")
        out.append(f"pdict.total_bits={d.size_in_bits()}")
    return out


# -------------------------------------------------------------- commands

def _read_text(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _read_spec(path):
    return AlphabetSpec.parse(_read_text(path))


def _emit(lines):
    for line in lines:
        print(line)


def cmd_build(args, structural_only=False):
    spec = _read_spec(args.alphabet)
    text = encode_text(_read_text(args.text), spec)
    ix = IndexFile(spec, len(text))
    if not structural_only:
        ix.pindex = PIndex.build(text, delta=args.delta)
        ix.delta = ix.pindex.delta
    if structural_only or args.structural:
        ix.sindex = SIndex.build(text, delta=args.delta)
        ix.delta = ix.sindex.delta
    save(args.out, ix)
    _emit(stats_lines(ix))


def _need(ix, name):
    obj = getattr(ix, name)
    if obj is None:
        raise PBWTError(f"index file has no {name} section")
    return obj


def cmd_count(args):
    ix = load(args.index)
    print(_need(ix, "pindex").count(encode_text(args.pattern, ix.spec, terminate=False)))


def cmd_locate(args):
    ix = load(args.index)
    _emit(_need(ix, "pindex").find(encode_text(args.pattern, ix.spec, terminate=False)))


def cmd_extract(args):
    ix = load(args.index)
    print(format_tokens(_need(ix, "pindex").extract(args.x, args.y), ix.spec))


def cmd_squery(args):
    ix = load(args.index)
    s = _need(ix, "sindex")
    p = encode_text(args.pattern, ix.spec, terminate=False)
    if args.count:
        print(s.s_count(p))
    else:
        _emit(s.find(p))


def cmd_dict_build(args):
    spec = _read_spec(args.alphabet)
    lines = _read_text(args.patterns).splitlines()
    pats = [encode_text(line, spec, terminate=False) for line in lines]
    d = PDictIndex.build(pats, spec)
    ix = IndexFile(spec, d.m, pdict=d)
    save(args.out, ix)
    _emit(stats_lines(ix))


def cmd_dict_scan(args):
    ix = load(args.dict)
    d = _need(ix, "pdict")
    raw = _read_text(args.text) if args.text else sys.stdin.read()
    for j, i in d.iter_scan(encode_text(raw, ix.spec, terminate=False)):
        print(f"{j}\t{i}")


def cmd_stats(args):
    _emit(stats_lines(load(args.index)))


def make_parser():
    ap = argparse.ArgumentParser(prog="pbwt", description="Parameterized BWT indexes.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def build_args(p):
        p.add_argument("text")
        p.add_argument("alphabet")
        p.add_argument("out")
        p.add_argument("--delta", type=int, default=None, help="suffix-array sampling rate")

    p = sub.add_parser("build", help="build a p-index")
    build_args(p)
    p.add_argument("--structural", action="store_true", help="also build the structural index")
    p.set_defaults(func=cmd_build)
    p = sub.add_parser("sbuild", help="build a structural index only")
    build_args(p)
    p.set_defaults(func=lambda a: cmd_build(a, structural_only=True))
    for name, func in (("count", cmd_count), ("locate", cmd_locate)):
        p = sub.add_parser(name)
        p.add_argument("index")
        p.add_argument("pattern")
        p.set_defaults(func=func)
    p = sub.add_parser("extract", help="prev encoding of T[x..y]")
    p.add_argument("index")
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    p.set_defaults(func=cmd_extract)
    p = sub.add_parser("squery", help="structural matches of a pattern")
    p.add_argument("index")
    p.add_argument("pattern")
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=cmd_squery)
    p = sub.add_parser("dict-build")
    p.add_argument("patterns")
    p.add_argument("alphabet")
    p.add_argument("out")
    p.set_defaults(func=cmd_dict_build)
    p = sub.add_parser("dict-scan")
    p.add_argument("dict")
    p.add_argument("text", nargs="?")
    p.set_defaults(func=cmd_dict_scan)
    p = sub.add_parser("stats")
    p.add_argument("index")
    p.set_defaults(func=cmd_stats)
    return ap


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        args.func(args)
    except FormatError as e:
        print(f"pbwt: error: {e}", file=sys.stderr)
        return 3
    except (PBWTError, UnicodeDecodeError) as e:
        print(f"pbwt: error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"pbwt: error: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
