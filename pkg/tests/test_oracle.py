import random

import pytest

from pbwt import AlphabetSpec, compl_encode, encode_text, prev_encode
from pbwt import oracle as O

from conftest import SMALL_TEXT


def test_small_text_columns(spec):
    t = encode_text(SMALL_TEXT, spec).codes.tolist()
    assert O.naive_psa(t, 4) == [7, 8, 2, 9, 3, 5, 11, 1, 10, 4, 6, 12]
    assert O.naive_plf(t, 4) == [11, 1, 8, 2, 3, 10, 9, 12, 4, 5, 6, 7]
    nodes = O.naive_tree(t, 4)
    b, f, _ = O.naive_bwt(t, 4)
    assert b == [7, 3, 5, 2, 3, 6, 5, 8, 4, 4, 2, 3]
    assert O.naive_fsum(nodes, f, [x <= 4 for x in b])[0] == 0


def test_size_cap():
    with pytest.raises(AssertionError):
        O.naive_psa([1] * (O.LIMIT + 1) + [2], 1)


def test_encodings_agree_with_alphabet_module():
    rng = random.Random(0)
    spec = AlphabetSpec("AB", "wxyz", [("w", "x")])
    for _ in range(300):
        s = [rng.randint(1, 6) for _ in range(rng.randint(0, 20))]
        assert O.prev_of(s, 4) == tuple(prev_encode(s, 4))
        assert O.compl_of(s, 4, spec.complement) == tuple(compl_encode(s, spec))


def test_bijection_search():
    assert O.bijection_match([1, 2, 1], [3, 4, 3], 4)
    assert not O.bijection_match([1, 2, 1], [3, 3, 3], 4)
    assert O.bijection_match([1, 2], [2, 1], 4, {1: 3, 3: 1, 2: 4, 4: 2})
    assert not O.bijection_match([1, 3], [1, 2], 4, {1: 3, 3: 1})


@pytest.mark.parametrize("paired", [False, True])
def test_matrix_oracles_match_definitions(paired):
    from conftest import comp_dict, random_patterns, random_spec, random_text
    rng = random.Random(9 + paired)
    for _ in range(150):
        spec = random_spec(rng, pairs=paired)
        t = random_text(rng, spec, rng.randint(1, 30)).codes.tolist()
        sp = spec.sigma_p
        comp = comp_dict(spec) if paired else None
        R = O.SortedRotations(t, sp, comp)
        rots = O.rotations(t, sp, comp)
        assert [tuple(r) for r in R.raw.tolist()] == rots
        assert R.sa == O.naive_psa(t, sp, comp)
        assert R.bwt() == O.naive_bwt(t, sp, comp)
        for p in random_patterns(rng, spec, t):
            assert R.match(p) == O.naive_pmatch(t, p, sp, comp)
        nodes = O.naive_tree(t, sp, comp)
        assert R.lo.tolist() == [d["lo"] - 1 for d in nodes]
        assert R.hi.tolist() == [d["hi"] - 1 for d in nodes]
        assert R.plen.tolist() == [d["plen"] for d in nodes]
        assert (R.parent + 1).tolist() == O.naive_parents(nodes)
        b, fp, fm = O.naive_bwt(t, sp, comp)
        f = [min(x, y) for x, y in zip(fp, fm)]
        use = [x <= sp for x in b]
        assert R.preceding(f, use) == O.naive_preceding(nodes, f, use)
        assert R.fs_minus_rev(f, use) == O.naive_fs_minus_rev(nodes, f, use)
        assert R.fcount(f, use).tolist() == O.naive_fcount(nodes, f, use)
        assert R.fsum(f, use) == O.naive_fsum(nodes, f, use)
        for i in range(1, len(t) + 1):
            if use[i - 1]:
                assert R.zero_node(i, abs(b[i - 1])) == O.naive_zero_node(nodes, i, abs(b[i - 1]))
