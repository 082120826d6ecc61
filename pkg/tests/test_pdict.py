import random

import pytest

from pbwt import DuplicatePattern, PBWTError, encode_text
from pbwt.pdict import END, PDictIndex, next_precedes
from pbwt import oracle as O

from conftest import CLONE_TEXT, random_spec


def test_clone_scan(spec):
    d = PDictIndex.build(["AxByCx"], spec)
    assert d.scan(CLONE_TEXT[:-1]) == [(6, 1), (20, 1)]
    assert d.scan("") == []


def test_build_errors(spec):
    with pytest.raises(PBWTError):
        PDictIndex.build([], spec)
    with pytest.raises(PBWTError):
        PDictIndex.build(["Ax", ""], spec)
    with pytest.raises(DuplicatePattern) as e:
        PDictIndex.build(["AxBx", "Ay", "AzBz"], spec)
    assert (e.value.i, e.value.j) == (1, 3)


def test_overlapping_reports(spec):
    d = PDictIndex.build(["xy", "xyx", "xx", "x"], spec)
    text = "zwzA"
    got = d.scan(text)
    codes = [encode_text(p, spec, terminate=False).codes.tolist() for p in ["xy", "xyx", "xx", "x"]]
    assert got == O.naive_dict_scan(codes, encode_text(text, spec, terminate=False).codes.tolist(), 4)
    assert [i for j, i in got if j == 3] == [1, 2, 4]


def _dicts(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        spec = random_spec(rng, min_p=1, max_s=3)
        syms = spec.param_symbols + spec.static_symbols[:-1]
        pats, keys = [], set()
        for _ in range(rng.randint(1, 12)):
            c = encode_text("".join(rng.choice(syms) for _ in range(rng.randint(1, 7))), spec,
                            terminate=False).codes.tolist()
            k = O.prev_of(c, spec.sigma_p)
            if k not in keys:
                keys.add(k)
                pats.append(c)
        yield rng, spec, pats, PDictIndex.build(pats, spec)


def _paths(d):
    t = d.trie
    path = {1: []}
    for v in range(2, d.m + 1):
        path[v] = path[t.parent(v)] + [d.edge_labels[v - 1]]
    return path


def test_trie_structure():
    for rng, spec, pats, d in _dicts(1, 300):
        sp = spec.sigma_p
        path = _paths(d)
        # relabeling keeps every state's encoding: the states are exactly the pattern prefixes
        states = {O.prev_of(p[:k], sp) for p in pats for k in range(len(p) + 1)}
        assert {O.prev_of(path[v], sp) for v in path} == states and len(states) == d.m
        # labels rank the reversed encodings; the root gets 1
        rev = {v: O.prev_of(path[v][::-1], sp) for v in path}
        order = sorted(path, key=lambda v: rev[v])
        assert [d.label_of[v - 1] for v in order] == list(range(1, d.m + 1))
        for u in path:
            kids = d.trie.children(u)
            zs = [d.z_value(k) for k in kids]
            assert len(set(zs)) == len(zs)
            # siblings sit in the order of their reversed encodings
            assert [rev[k] for k in kids] == sorted(rev[k] for k in kids)
            for z in range(1, spec.sigma + 1):
                want = [k for k, zz in zip(kids, zs) if zz == z]
                assert d.next(u, z) == (want[0] if want else None)
        for i, p in enumerate(pats, start=1):
            u = next(v for v in path if O.prev_of(path[v], sp) == O.prev_of(p, sp))
            assert d.is_final(u) and d.pattern_of(u) == i


def test_links_against_oracle():
    for rng, spec, pats, d in _dicts(2, 300):
        sp = spec.sigma_p
        path = _paths(d)
        key = {O.prev_of(path[v], sp): v for v in path}
        vs = sorted(path)
        fails = O.naive_failure([path[v] for v in vs], sp)
        finals = {v for v in vs if d.is_final(v)}
        for v, f in zip(vs, fails):
            if v == 1:
                continue
            assert d.fail(v) == key[O.prev_of(f, sp)]
            x = d.fail(v)
            while x != 1 and x not in finals:
                x = d.fail(x)
            assert d.report_link(v) == x


def test_scan_against_oracle():
    for rng, spec, pats, d in _dicts(3, 400):
        syms = spec.param_symbols + spec.static_symbols[:-1]
        text = "".join(rng.choice(syms) for _ in range(rng.randint(0, 80)))
        tc = encode_text(text, spec, terminate=False).codes.tolist()
        assert d.scan(text) == O.naive_dict_scan(pats, tc, spec.sigma_p)


def test_order_table_predicts_reversed_order():
    for rng, spec, pats, d in _dicts(4, 200):
        sp = spec.sigma_p
        path = _paths(d)
        rev = {v: O.prev_of(path[v][::-1], sp) for v in path}
        for a in range(2, d.m + 1):
            for b in range(2, d.m + 1):
                if a == b:
                    continue
                u, v = d.trie.parent(a), d.trie.parent(b)
                ru, rv = rev[u], rev[v]
                k = 0
                while k < min(len(ru), len(rv)) and ru[k] == rv[k]:
                    k += 1
                z = sum(1 for x in ru[:k] if x == 0)
                li = ru[k] if k < len(ru) else END
                lj = rv[k] if k < len(rv) else END
                assert next_precedes(d.z[a - 1], d.z[b - 1], z, li, lj, ru <= rv, sp) == \
                    (rev[a] < rev[b])


def test_state_round_trip():
    for rng, spec, pats, d in _dicts(5, 30):
        d2 = PDictIndex.from_state(d.state(), spec)
        syms = spec.param_symbols + spec.static_symbols[:-1]
        text = "".join(rng.choice(syms) for _ in range(60))
        assert d2.scan(text) == d.scan(text)
