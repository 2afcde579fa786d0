"""Nilpotent search and the centralizer certification test."""

import random
from fractions import Fraction

import pytest

from patternforge.families import (
    bordered_path_pattern,
    companion_pattern,
    loop_chain_pattern,
    path_pattern,
    two_loop_path_pattern,
)
from patternforge.nilpotent import (
    NcCertificate,
    certify_sap,
    find_nilpotent,
    is_nilpotent,
    nc_test,
    nilpotent_index,
)
from patternforge.patterns import apply_equivalence, conforms_to
from patternforge.realization import realize_charpoly
from patternforge.spectra import CharPoly, RationalMatrix, char_poly, symbolic_coefficient

F = Fraction


def mat(rows):
    return RationalMatrix.from_rows([[F(v) for v in row] for row in rows])


def rows_of(a):
    return [[a.entry(i, j) for j in range(1, a.n + 1)] for i in range(1, a.n + 1)]


def jordan_block(n):
    rows = [[F(0)] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = F(1)
    return RationalMatrix.from_rows(rows)


# the bordered-path nilpotent assembled from a full tridiagonal one by
# appending a basis column and a zero row; the zero row is fine, the
# pattern allows zeros anywhere
W4_ASSEMBLED = [
    [1, 1, 0, 0],
    [F(-1, 2), 0, 1, 0],
    [0, F(-1, 2), -1, 1],
    [0, 0, 0, 0],
]
# same support, zero row at the top instead: still nilpotent of full
# index, but the centralizer test comes out deficient on it
W4_FLIPPED = [[0, 0, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1], [0, 0, -1, 0]]


def test_nilpotent_index_jordan():
    assert nilpotent_index(jordan_block(4)) == 4


def test_nilpotent_index_zero_matrix():
    assert nilpotent_index(RationalMatrix.zero(3)) == 1


def test_nilpotent_index_bordered_assembly():
    for rows in (W4_ASSEMBLED, W4_FLIPPED):
        a = mat(rows)
        assert conforms_to(rows_of(a), bordered_path_pattern(4))
        assert nilpotent_index(a) == 4


def test_nilpotent_index_rejects_non_nilpotent():
    with pytest.raises(ValueError):
        nilpotent_index(RationalMatrix.identity(3))


def test_is_nilpotent():
    assert is_nilpotent(jordan_block(5))
    assert not is_nilpotent(RationalMatrix.identity(2))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_find_nilpotent_companion_reaches_full_index(n):
    p = companion_pattern(n)
    a = find_nilpotent(p)
    assert conforms_to(rows_of(a), p)
    assert nilpotent_index(a) == n
    # the Jordan block itself is one valid answer inside this support
    j = jordan_block(n)
    assert conforms_to(rows_of(j), p)
    assert nilpotent_index(j) == n


def test_find_nilpotent_two_loop_path_order3():
    p = two_loop_path_pattern(3)
    a = find_nilpotent(p)
    assert conforms_to(rows_of(a), p)
    assert nilpotent_index(a) == 3
    # a hand-solved instance: trace, 2x2 sum, and determinant all vanish
    w = mat([[1, 1, 0], [F(-1, 2), 0, 1], [0, F(-1, 2), -1]])
    assert is_nilpotent(w)
    assert nilpotent_index(w) == 3
    assert conforms_to(rows_of(w), p)


def test_loop_chain_order3_has_full_index_nilpotent_but_never_certifies():
    # E1 = E2 = 0 zero both loops and E3 = 0 breaks the 3-cycle, yet two
    # consecutive arcs still compose: the index is 3, not less
    p = loop_chain_pattern(3)
    a = find_nilpotent(p)
    assert nilpotent_index(a) == 3
    assert a.entry(1, 1) == 0 and a.entry(2, 2) == 0
    assert a.entry(1, 2) * a.entry(2, 3) * a.entry(3, 1) == 0
    cert = certify_sap(p, attempts=8)
    assert cert is not None
    assert cert.verdict != "SAP_certified"


def test_nc_test_companion_jordan_certifies():
    p = companion_pattern(3)
    cert = nc_test(p, jordan_block(3))
    assert cert.verdict == "SAP_certified"
    assert cert.index == 3
    assert cert.centralizer_rank_deficiency == 0


def test_nc_test_bordered_assembly_certifies():
    cert = nc_test(bordered_path_pattern(4), mat(W4_ASSEMBLED))
    assert cert.verdict == "SAP_certified"
    assert cert.centralizer_rank_deficiency == 0


def test_nc_test_failure_is_inconclusive():
    # the verdict depends on which nilpotent is tested: this one fails on a
    # pattern that another nilpotent certifies
    cert = nc_test(bordered_path_pattern(4), mat(W4_FLIPPED))
    assert cert.verdict == "test_failed"
    assert cert.centralizer_rank_deficiency > 0


def test_nc_test_low_index_is_indeterminate():
    p = path_pattern(3, 1)
    a = mat([[0, 0, 0], [0, 0, 0], [0, 1, 0]])
    assert conforms_to(rows_of(a), p)
    cert = nc_test(p, a)
    assert cert.index == 2
    assert cert.verdict == "indeterminate"


def test_nc_test_preconditions():
    p = companion_pattern(3)
    with pytest.raises(ValueError):
        nc_test(p, RationalMatrix.zero(4))
    with pytest.raises(ValueError):
        nc_test(p, mat([[1, 0, 0], [0, 0, 0], [0, 0, -1]]))  # off support
    with pytest.raises(ValueError):
        nc_test(p, mat([[0, 1, 0], [0, 0, 1], [1, 0, 0]]))  # not nilpotent


def test_certificate_verdict_matches_fields():
    for p in [companion_pattern(4), two_loop_path_pattern(4), loop_chain_pattern(3)]:
        cert = certify_sap(p, attempts=6)
        assert cert is not None
        certified = cert.index == p.n and cert.centralizer_rank_deficiency == 0
        assert (cert.verdict == "SAP_certified") == certified
        obj = cert.as_json_obj()
        assert obj["verdict"] == cert.verdict
        assert obj["rank_deficiency"] == cert.centralizer_rank_deficiency


@pytest.mark.parametrize(
    "p",
    [
        companion_pattern(2),
        companion_pattern(3),
        companion_pattern(4),
        companion_pattern(5),
        two_loop_path_pattern(2),
        two_loop_path_pattern(3),
        two_loop_path_pattern(4),
        bordered_path_pattern(3),
        bordered_path_pattern(4),
    ],
    ids=lambda p: f"n{p.n}_{len(p.support)}nz",
)
def test_certify_sap_known_families(p):
    cert = certify_sap(p)
    assert cert is not None
    assert cert.verdict == "SAP_certified"
    # the certificate is exact: re-check nilpotency and conformance
    assert is_nilpotent(cert.nilpotent)
    assert conforms_to(rows_of(cert.nilpotent), p)
    assert nilpotent_index(cert.nilpotent) == p.n


def test_certify_sap_two_loop_path_order6():
    # the certifying branch carries nonzero end loops; reaching it needs a
    # negatively frozen 2-cycle product, so this guards the plan sweep
    cert = certify_sap(two_loop_path_pattern(6))
    assert cert is not None
    assert cert.verdict == "SAP_certified"
    assert cert.nilpotent.entry(1, 1) != 0


def test_certified_pattern_realizes_random_targets():
    rng = random.Random(20240817)
    for p in [companion_pattern(4), two_loop_path_pattern(3)]:
        cert = certify_sap(p)
        assert cert is not None and cert.verdict == "SAP_certified"
        n = p.n
        hits = 0
        for _ in range(25):
            coeffs = [F(1)] + [F(rng.randint(-4, 4), rng.choice([1, 2])) for _ in range(n)]
            target = CharPoly.from_monic_coeffs(coeffs)
            w = realize_charpoly(p, target, seed=7)
            if w is not None:
                assert char_poly(w.matrix) == target
                hits += 1
        assert hits == 25


def test_bordered_pattern_has_one_transversal_and_forced_zero():
    from patternforge.nilpotent import _candidate_nilpotents

    for n in (3, 4, 5):
        p = bordered_path_pattern(n)
        assert len(symbolic_coefficient(p, n).terms) == 1
        count = 0
        for a in _candidate_nilpotents(p):
            assert any(a.entry(i, j) == 0 for (i, j) in p.sorted_support())
            count += 1
            if count >= 4:
                break
        assert count >= 1


def test_nc_verdict_invariant_under_equivalence():
    p = two_loop_path_pattern(4)
    cert = certify_sap(p)
    assert cert is not None and cert.verdict == "SAP_certified"
    a = cert.nilpotent
    perm = [3, 1, 4, 2]
    for transposed in (False, True):
        q = apply_equivalence(p, perm, transposed)
        b = a.transpose() if transposed else a
        b = b.relabel(perm)
        assert conforms_to(rows_of(b), q)
        cert2 = nc_test(q, b)
        assert cert2.verdict == cert.verdict
        assert cert2.centralizer_rank_deficiency == cert.centralizer_rank_deficiency
