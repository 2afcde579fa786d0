import itertools
import random
from fractions import Fraction

import pytest

from patternforge.patterns import ZeroPattern
from patternforge.spectra import (
    CharPoly,
    MatrixError,
    RationalMatrix,
    RefinedInertia,
    as_fraction,
    char_poly,
    default_eps,
    evaluate_support_poly,
    fraction_str,
    inertia_targets,
    matrix_from_json,
    matrix_to_json,
    parse_matrix,
    principal_minor_sum,
    refined_inertia_of,
    refined_inertia_targets,
    roots,
    symbolic_coefficient,
    validate_refined_target,
)
from patternforge.families import (
    appendix_rows,
    companion_pattern,
    two_cycle_path_pattern,
)


# ---- independent oracles ----

def oracle_det(rows):
    # cofactor expansion along the first row; deliberately naive
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * oracle_det(minor)
    return total


def oracle_minor_sum(a: RationalMatrix, k: int) -> Fraction:
    rows = [[a.entry(i, j) for j in range(1, a.n + 1)] for i in range(1, a.n + 1)]
    total = Fraction(0)
    for idx in itertools.combinations(range(a.n), k):
        sub = [[rows[i][j] for j in idx] for i in idx]
        total += oracle_det(sub)
    return total


def random_matrix(rng: random.Random, n: int, density=0.7) -> RationalMatrix:
    rows = [
        [
            Fraction(rng.randint(-6, 6), rng.randint(1, 4)) if rng.random() < density else Fraction(0)
            for _ in range(n)
        ]
        for _ in range(n)
    ]
    return RationalMatrix.from_rows(rows)


# ---- exact scalars and matrices ----

def test_as_fraction_accepts_int_str_fraction():
    assert as_fraction(3) == 3
    assert as_fraction("11/2") == Fraction(11, 2)
    assert as_fraction(Fraction(1, 3)) == Fraction(1, 3)


def test_as_fraction_rejects_float():
    with pytest.raises(MatrixError, match="float"):
        as_fraction(0.1)


def test_fraction_str():
    assert fraction_str(Fraction(11, 2)) == "11/2"
    assert fraction_str(Fraction(-4)) == "-4"


def test_matrix_construction_and_entry():
    a = parse_matrix("1 2\n-3/2 0\n")
    assert a.entry(1, 2) == 2
    assert a.entry(2, 1) == Fraction(-3, 2)
    assert a.trace() == 1
    assert a.det() == 3


def test_matrix_ops_and_pattern():
    a = parse_matrix("1 0\n2 0\n")
    b = parse_matrix("0 1\n1 0\n")
    assert (a @ b).entry(1, 2) == 1
    assert (a + b.scale(-1)).entry(2, 1) == 1
    assert a.transpose().entry(1, 2) == 2
    assert a.pattern() == ZeroPattern(2, frozenset({(1, 1), (2, 1)}))
    assert RationalMatrix.zero(3).is_zero()
    assert RationalMatrix.identity(2).det() == 1


def test_matrix_relabel_is_conjugation():
    a = parse_matrix("1 2 0\n0 3 4\n5 0 6\n")
    b = a.relabel([2, 3, 1])
    # relabelling preserves the spectrum
    assert char_poly(b).e == char_poly(a).e


def test_matrix_json_round_trip_keeps_rationals():
    a = parse_matrix("1/3 0\n-7 11/2\n")
    blob = matrix_to_json(a)
    assert '"11/2"' in blob
    assert matrix_from_json(blob) == a


def test_principal_submatrix():
    a = parse_matrix("1 2 3\n4 5 6\n7 8 9\n")
    s = a.principal_submatrix((1, 3))
    assert s.n == 2 and s.entry(2, 2) == 9 and s.entry(1, 2) == 3


# ---- characteristic polynomial, dual route ----

def test_char_poly_companion_example():
    a = parse_matrix("5 1 0\n7 0 1\n11 0 0\n")
    assert char_poly(a).e == (5, -7, 11)


def test_char_poly_identity():
    assert char_poly(RationalMatrix.identity(2)).e == (2, 1)


def test_char_poly_matches_minor_oracle():
    rng = random.Random(101)
    for _ in range(200):
        n = rng.randint(1, 5)
        a = random_matrix(rng, n)
        cp = char_poly(a)
        for k in range(1, n + 1):
            want = oracle_minor_sum(a, k)
            assert cp.e[k - 1] == want
            assert principal_minor_sum(a, k) == want


def test_char_poly_monic_round_trip():
    cp = CharPoly((Fraction(5), Fraction(-7), Fraction(11)))
    coeffs = cp.monic_coeffs()
    assert coeffs == (Fraction(1), Fraction(-5), Fraction(-7), Fraction(-11))
    assert CharPoly.from_monic_coeffs(coeffs) == cp
    assert cp.evaluate(Fraction(1)) == 1 - 5 - 7 - 11


def test_char_poly_product():
    p = CharPoly.from_monic_coeffs([1, 0, 1])  # x^2 + 1
    q = CharPoly.from_monic_coeffs([1, -1])  # x - 1
    assert (p * q).monic_coeffs() == (1, -1, 1, -1)


def test_char_poly_str():
    cp = CharPoly((Fraction(0), Fraction(-1), Fraction(2)))
    assert str(cp) == "x^3 - x - 2"


def test_zero_root_multiplicity():
    cp = CharPoly.from_monic_coeffs([1, -1, 0, 0])  # x^3 - x^2
    assert cp.zero_root_multiplicity() == 2


# ---- support polynomials ----

def test_symbolic_coefficient_two_cycle_path():
    p = two_cycle_path_pattern()
    sp = symbolic_coefficient(p, 2)
    assert set(sp.terms) == {
        (-1, ((1, 2), (2, 1))),
        (-1, ((2, 3), (3, 2))),
    }
    assert sp.variables() == p.support
    assert symbolic_coefficient(p, 1).is_zero()


def test_symbolic_coefficient_matches_char_poly():
    rng = random.Random(103)
    for _ in range(40):
        n = rng.randint(2, 5)
        a = random_matrix(rng, n, density=0.5)
        p = a.pattern()
        cp = char_poly(a)
        for k in range(1, n + 1):
            sp = symbolic_coefficient(p, k)
            assert evaluate_support_poly(sp, a) == cp.e[k - 1]


def test_evaluate_support_poly_rejects_off_support():
    p = ZeroPattern(2, frozenset({(1, 2), (2, 1)}))
    a = parse_matrix("1 1\n1 0\n")
    with pytest.raises(MatrixError):
        evaluate_support_poly(symbolic_coefficient(p, 2), a)


# ---- numeric roots ----

def test_roots_quadratic_imaginary():
    boxes = roots(CharPoly.from_monic_coeffs([1, 0, 1]))
    vals = sorted((complex(b.value).real, complex(b.value).imag) for b in boxes)
    assert abs(vals[0][1] + 1) < 1e-15 and abs(vals[1][1] - 1) < 1e-15
    assert all(b.radius < 1e-20 for b in boxes)


def test_roots_exact_zero_stripping():
    boxes = roots(CharPoly.from_monic_coeffs([1, -1, 0, 0]))
    zeros = [b for b in boxes if b.exact_zero]
    assert len(zeros) == 2 and all(b.radius == 0.0 for b in zeros)
    (other,) = [b for b in boxes if not b.exact_zero]
    assert abs(complex(other.value) - 1) < 1e-20


def test_roots_multiple_root_radius_stays_small():
    # (x - 1)^2 x^2: the numeric double root must not blow up the error radius
    boxes = roots(CharPoly.from_monic_coeffs([1, -2, 1, 0, 0]))
    ones = [b for b in boxes if not b.exact_zero]
    assert len(ones) == 2
    for b in ones:
        assert abs(complex(b.value) - 1) < 1e-10
        assert b.radius < 1e-6


def test_roots_agree_with_trace_and_det():
    rng = random.Random(107)
    for _ in range(30):
        a = random_matrix(rng, 4)
        cp = char_poly(a)
        boxes = roots(cp)
        s = sum(complex(b.value) for b in boxes)
        assert abs(s - complex(cp.e[0])) < 1e-12 * (1 + abs(cp.e[0]))


# ---- refined inertia ----

def test_refined_inertia_validation():
    validate_refined_target(RefinedInertia(1, 1, 0, 2), 4)
    with pytest.raises(ValueError, match="odd"):
        validate_refined_target(RefinedInertia(1, 1, 1, 1), 4)
    with pytest.raises(ValueError, match="order"):
        validate_refined_target(RefinedInertia(1, 1, 0, 0), 4)
    with pytest.raises(ValueError, match="negative"):
        RefinedInertia(-1, 2, 1, 2)


def test_refined_inertia_reversal_and_projection():
    ri = RefinedInertia(2, 1, 1, 0)
    assert ri.reversal() == RefinedInertia(1, 2, 1, 0)
    assert ri.inertia() == (2, 1, 1)


def test_refined_target_counts():
    assert len(refined_inertia_targets(3)) == 13
    assert len(refined_inertia_targets(4)) == 22
    assert len(inertia_targets(4)) == 15


def test_refined_inertia_rotation():
    a = parse_matrix("0 -1\n1 0\n")
    reading = refined_inertia_of(a)
    assert reading.refined == RefinedInertia(0, 0, 0, 2)
    assert not reading.fragile


def test_refined_inertia_mixed_diagonal():
    a = parse_matrix("1 0 0\n0 -1 0\n0 0 0\n")
    reading = refined_inertia_of(a)
    assert reading.refined == RefinedInertia(1, 1, 1, 0)
    assert not reading.fragile


def test_refined_inertia_near_boundary_is_fragile():
    # a root landing exactly on the eps threshold cannot be trusted
    a = parse_matrix("1/2 0\n0 -1\n")
    reading = refined_inertia_of(a, eps=0.5)
    assert reading.fragile
    assert not refined_inertia_of(a).fragile


def test_refined_inertia_rejects_bad_eps():
    with pytest.raises(ValueError):
        refined_inertia_of(RationalMatrix.identity(2), eps=0.0)


def test_default_eps_scales_with_magnitude():
    small = RationalMatrix.identity(2)
    big = small.scale(10**6)
    assert default_eps(big) > default_eps(small)


def test_refined_inertia_negation_reverses():
    rng = random.Random(109)
    checked = 0
    for _ in range(40):
        a = random_matrix(rng, 4)
        r1 = refined_inertia_of(a)
        r2 = refined_inertia_of(a.scale(-1))
        if r1.fragile or r2.fragile:
            continue
        assert r2.refined == r1.refined.reversal()
        checked += 1
    assert checked >= 25


def test_appendix_rows_replay_cleanly():
    rows = appendix_rows()
    assert len(rows) == 54
    for row in rows:
        reading = refined_inertia_of(row.matrix)
        assert not reading.fragile, row
        assert reading.refined.inertia() == row.inertia, row
