import random
from fractions import Fraction

import pytest

from patternforge.families import path_pattern
from patternforge.nests import (
    BudgetError,
    NestOrdering,
    canonical_path_matrix,
    find_nest,
    find_nest_heuristic,
    is_properly_signed_nest,
    nest_implies_inertia_check,
    nest_signs,
    nested_minors,
    path_nest_ordering,
    pattern_allows_nest,
    stable_scaling_from_nest,
    valid_path_nest_ordering,
)
from patternforge.patterns import PatternError
from patternforge.spectra import RationalMatrix, parse_matrix, refined_inertia_of


def diag(*vals):
    n = len(vals)
    return RationalMatrix.from_rows(
        [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)]
    )


def test_nest_ordering_validates():
    NestOrdering.of((2, 1, 3))
    with pytest.raises(ValueError):
        NestOrdering.of((1, 1, 2))


def test_canonical_path_matrix_examples():
    assert canonical_path_matrix(3, 1) == parse_matrix("-1 -1 0\n1 0 -1\n0 1 0\n")
    assert canonical_path_matrix(2, 1) == parse_matrix("-1 -1\n1 0\n")
    b = canonical_path_matrix(4, 2)
    assert b.pattern() == path_pattern(4, 2)
    assert b.entry(2, 2) == -1 and b.entry(3, 2) == 1 and b.entry(2, 3) == -1
    with pytest.raises(PatternError):
        canonical_path_matrix(3, 4)


def test_nest_signs_path_example():
    b = canonical_path_matrix(3, 1)
    assert nest_signs(b, (1, 2, 3)) == (-1, 1, -1)
    assert nested_minors(b, (1, 2, 3)) == (Fraction(-1), Fraction(1), Fraction(-1))
    assert is_properly_signed_nest(b, (1, 2, 3))


def test_nest_signs_identity_and_singular():
    ident = RationalMatrix.identity(3)
    assert nest_signs(ident, (2, 3, 1)) == (1, 1, 1)
    assert not is_properly_signed_nest(ident, (1, 2, 3))
    singular = parse_matrix("1 0\n0 0\n")
    assert nest_signs(singular, (1, 2))[-1] == 0


def test_negated_identity_nest():
    b = RationalMatrix.identity(4).scale(-1)
    assert find_nest(b) == NestOrdering.of((1, 2, 3, 4))


def test_find_nest_explicit_ordering_vs_search():
    b = canonical_path_matrix(4, 3)
    got = find_nest(b)
    assert got is not None and is_properly_signed_nest(b, got)
    assert is_properly_signed_nest(b, (3, 2, 1, 4))


def test_find_nest_none_without_transversal():
    # loop at even position of an odd path: determinant vanishes identically
    assert find_nest(canonical_path_matrix(3, 2)) is None
    assert find_nest(canonical_path_matrix(5, 4)) is None


def test_find_nest_budget_cap():
    with pytest.raises(BudgetError):
        find_nest(RationalMatrix.identity(9).scale(-1))
    got = find_nest_heuristic(RationalMatrix.identity(9).scale(-1))
    assert got is not None and got.sequence == (1, 2, 3, 4, 5, 6, 7, 8, 9)


def test_parity_law_small():
    for n in range(1, 7):
        for alpha in range(1, n + 1):
            b = canonical_path_matrix(n, alpha)
            want = n % 2 == 0 or alpha % 2 == 1
            assert (find_nest(b) is not None) == want, (n, alpha)
            if want:
                ordering = valid_path_nest_ordering(n, alpha)
                assert is_properly_signed_nest(b, ordering), (n, alpha)


def test_paper_ordering_works_for_odd_alpha():
    for n, alpha in [(4, 1), (5, 3), (6, 5), (4, 3), (7, 7)]:
        b = canonical_path_matrix(n, alpha)
        assert is_properly_signed_nest(b, path_nest_ordering(n, alpha))


def test_paper_ordering_structural_zero_for_even_alpha():
    # the literal ordering cannot work: a nested minor is identically zero
    signs = nest_signs(canonical_path_matrix(4, 2), path_nest_ordering(4, 2))
    assert signs == (-1, 1, 0, 1)


def test_valid_ordering_rejects_impossible_case():
    with pytest.raises(PatternError):
        valid_path_nest_ordering(3, 2)


def test_determinant_recursion_border_loop():
    # det(P(n, n-1)) = det(P(n-2, n-3)) for even n
    for n in range(4, 11, 2):
        lhs = canonical_path_matrix(n, n - 1).det()
        rhs = canonical_path_matrix(n - 2, n - 3).det()
        assert lhs == rhs, n


def test_determinant_recursion_interior_loop():
    # det(P(n, alpha)) = det(P(n-2, alpha)) for 1 < alpha < n-1
    for n in range(4, 11):
        for alpha in range(2, n - 1):
            lhs = canonical_path_matrix(n, alpha).det()
            rhs = canonical_path_matrix(n - 2, alpha).det()
            assert lhs == rhs, (n, alpha)


def test_nest_signs_invariant_under_congruence_scaling():
    rng = random.Random(31)
    for _ in range(20):
        n = rng.randint(2, 5)
        rows = [
            [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)]
            for _ in range(n)
        ]
        b = RationalMatrix.from_rows(rows)
        d = diag(*[Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(n)])
        scaled = d @ b @ d
        ordering = tuple(rng.sample(range(1, n + 1), n))
        assert nest_signs(b, ordering) == nest_signs(scaled, ordering)


def test_stable_scaling_keeps_pattern_and_stabilizes():
    b = canonical_path_matrix(5, 3)
    ordering = valid_path_nest_ordering(5, 3)
    scaled = stable_scaling_from_nest(b, ordering)
    assert scaled is not None
    assert scaled.pattern() == b.pattern()
    reading = refined_inertia_of(scaled)
    assert not reading.fragile
    assert reading.refined.as_tuple() == (0, 5, 0, 0)


def test_stable_scaling_requires_nest():
    with pytest.raises(ValueError):
        stable_scaling_from_nest(RationalMatrix.identity(3), (1, 2, 3))


def test_nest_implies_inertia_check_path():
    b = canonical_path_matrix(4, 1)
    report = nest_implies_inertia_check(b, path_nest_ordering(4, 1))
    neg = refined_inertia_of(report.negative_witness)
    pos = refined_inertia_of(report.positive_witness)
    assert neg.refined.as_tuple() == (0, 4, 0, 0) and not neg.fragile
    assert pos.refined.as_tuple() == (4, 0, 0, 0) and not pos.fragile
    assert report.negative_witness.pattern() == b.pattern()
    obj = report.as_json_obj()
    assert obj["verdict"] == "confirmed" and obj["ordering"] == [1, 2, 3, 4]


def test_nest_implies_inertia_check_precondition():
    with pytest.raises(ValueError, match="precondition"):
        nest_implies_inertia_check(RationalMatrix.identity(3), (1, 2, 3))


def test_pattern_allows_nest_positive_and_negative():
    cert = pattern_allows_nest(path_pattern(4, 3))
    assert cert is not None
    assert is_properly_signed_nest(cert.matrix, cert.ordering)
    assert cert.matrix.pattern().support <= path_pattern(4, 3).support
    # no transversal: no realization can have a nonzero determinant
    assert pattern_allows_nest(path_pattern(3, 2), tries=30) is None
