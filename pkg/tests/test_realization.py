"""Witness construction: factored targets, exact solving, family shortcuts."""

import random
from fractions import Fraction

import pytest

from patternforge.families import (
    companion_pattern,
    loop_chain_pattern,
    path_pattern,
    two_loop_path_pattern,
)
from patternforge.patterns import ZeroPattern, conforms_to
from patternforge.realization import (
    RealizationWitness,
    TargetSpectrum,
    an_family_witness,
    path_refined_witness,
    real_root_split,
    realize_charpoly,
    realize_refined_inertia,
    survey,
    target_poly_for,
    transport_matrix,
)
from patternforge.spectra import (
    CharPoly,
    RefinedInertia,
    char_poly,
    inertia_targets,
    refined_inertia_of,
    refined_inertia_targets,
)


def rows_of(m):
    return [[m.entry(i, j) for j in range(1, m.n + 1)] for i in range(1, m.n + 1)]


# ---- factored targets ----

def test_target_poly_canonical_palette():
    got = target_poly_for(RefinedInertia(1, 1, 0, 2), seed=0)
    assert got.char_poly() == CharPoly.from_monic_coeffs([1, 0, 0, 0, -1])

    got = target_poly_for(RefinedInertia(0, 0, 4, 0), seed=0)
    assert got.char_poly() == CharPoly.from_monic_coeffs([1, 0, 0, 0, 0])

    got = target_poly_for(RefinedInertia(0, 2, 0, 2), seed=0)
    # (x^2 + 2x + 2)(x^2 + 1)
    assert got.char_poly() == CharPoly.from_monic_coeffs([1, 2, 3, 2, 2])


def test_target_poly_refined_roundtrip():
    for n in range(1, 7):
        for ri in refined_inertia_targets(n):
            for seed in range(4):
                spec = target_poly_for(ri, seed=seed)
                assert spec.refined() == ri
                assert spec.n == n
                assert spec.char_poly().n == n


def test_target_poly_distinct_nonzero_factors():
    for n in range(2, 7):
        for ri in refined_inertia_targets(n):
            for seed in range(3):
                spec = target_poly_for(ri, seed=seed)
                nonzero = [f for f in spec.factors if f[0] != "zero"]
                assert len(set(nonzero)) == len(nonzero)


def test_target_poly_rejects_odd_imaginary():
    with pytest.raises(ValueError, match="odd"):
        target_poly_for(RefinedInertia(1, 0, 0, 3))


# ---- exact real root counting ----

def poly_from_roots(roots):
    coeffs = [Fraction(1)]
    for r in roots:
        out = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            out[i] += c
            out[i + 1] -= r * c
        coeffs = out
    return CharPoly.from_monic_coeffs(coeffs)


def test_real_root_split_known_cases():
    assert real_root_split(CharPoly.from_monic_coeffs([1, 0, 0, 0, -1])) == (1, 0, 1)
    assert real_root_split(CharPoly.from_monic_coeffs([1, 0, 0, 0, 0, 0])) == (0, 5, 0)
    # (x^2 + 1): no real roots
    assert real_root_split(CharPoly.from_monic_coeffs([1, 0, 1])) == (0, 0, 0)


def test_real_root_split_random_products():
    rng = random.Random(20)
    pool = [Fraction(k, d) for k in range(-8, 9) if k for d in (1, 2, 3)]
    for _ in range(60):
        roots = rng.sample(pool, rng.randint(1, 5))
        zeros = rng.randint(0, 2)
        cp = poly_from_roots(list(roots) + [Fraction(0)] * zeros)
        neg, zero, pos = real_root_split(cp)
        distinct = set(roots)
        assert neg == sum(1 for r in distinct if r < 0)
        assert pos == sum(1 for r in distinct if r > 0)
        assert zero == zeros


def test_real_root_split_counts_distinct_nonzero_roots():
    # (x - 1)^2 x^2: the double root at 1 is seen once, zeros exactly
    cp = poly_from_roots([Fraction(1), Fraction(1), Fraction(0), Fraction(0)])
    assert real_root_split(cp) == (0, 2, 1)


# ---- characteristic polynomial realization ----

def test_companion_realizes_quartic_explicitly():
    w = realize_charpoly(companion_pattern(4), CharPoly.from_monic_coeffs([1, 0, 0, 0, -1]))
    assert w is not None
    assert rows_of(w.matrix) == [
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 0],
    ]
    assert w.coefficient_residual == 0


def test_companion_realizes_random_cubics():
    rng = random.Random(7)
    p = companion_pattern(3)
    for _ in range(20):
        coeffs = [Fraction(1)] + [
            Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(3)
        ]
        target = CharPoly.from_monic_coeffs(coeffs)
        w = realize_charpoly(p, target)
        assert w is not None
        assert w.char_poly == target
        assert conforms_to(rows_of(w.matrix), p)


def test_zero_polynomial_shortcut():
    p = path_pattern(4, 1)
    w = realize_charpoly(p, CharPoly.from_monic_coeffs([1, 0, 0, 0, 0]))
    assert w is not None
    assert w.matrix.is_zero()
    assert w.method == "construction"


def test_structurally_blocked_coefficient_returns_none():
    # x^4 + x needs E_3 != 0 but every composite 3-cycle crosses the loop,
    # whose value is pinned to 0 by the trace; no realization exists
    p = path_pattern(4, 1)
    assert realize_charpoly(p, CharPoly.from_monic_coeffs([1, 0, 0, 1, 0])) is None


def test_degree_mismatch_rejected():
    with pytest.raises(ValueError, match="degree"):
        realize_charpoly(path_pattern(4, 1), CharPoly.from_monic_coeffs([1, 0, 0]))


def test_exact_solver_on_two_loop_pattern():
    # (x + 1) x^3 has the rational witness a=0, d=-1, crossed 2-cycles
    p = two_loop_path_pattern(4)
    target = CharPoly.from_monic_coeffs([1, 1, 0, 0, 0])
    w = realize_charpoly(p, target, budget=24, seed=0)
    assert w is not None
    assert w.char_poly == target
    assert conforms_to(rows_of(w.matrix), p)


def test_witness_json_shape():
    ri = RefinedInertia(0, 2, 0, 2)
    w = realize_refined_inertia(two_loop_path_pattern(4), ri, budget=24, styles=3)
    assert w is not None
    obj = w.as_json_obj()
    assert obj["residual"] == "0"
    assert obj["refined_inertia"] == [0, 2, 0, 2]
    assert obj["method"] in ("construction", "exact", "newton", "negation")
    assert "matrix" in obj


# ---- path-pattern constructions ----

def test_path_witness_block_examples():
    # (0,0,0,4) on the loop-at-1 path: two imaginary blocks, distinct omegas
    w = realize_refined_inertia(path_pattern(4, 1), RefinedInertia(0, 0, 0, 4))
    assert w is not None
    assert w.method == "construction"
    assert w.char_poly == CharPoly.from_monic_coeffs([1, 0, 5, 0, 4])


@pytest.mark.parametrize("alpha", [1, 2, 3, 4])
def test_path_order4_realizes_every_refined_inertia(alpha):
    p = path_pattern(4, alpha)
    for ri in refined_inertia_targets(4):
        w = realize_refined_inertia(p, ri, budget=8, styles=2)
        assert w is not None, (alpha, ri)
        assert conforms_to(rows_of(w.matrix), p)
        reading = refined_inertia_of(w.matrix)
        assert reading.refined == ri
        assert not reading.fragile


@pytest.mark.parametrize("alpha", [1, 3, 5])
def test_path_order5_odd_loop_realizes_every_refined_inertia(alpha):
    p = path_pattern(5, alpha)
    for ri in refined_inertia_targets(5):
        w = realize_refined_inertia(p, ri, budget=8, styles=2)
        assert w is not None, (alpha, ri)
        reading = refined_inertia_of(w.matrix)
        assert reading.refined == ri
        assert not reading.fragile


@pytest.mark.parametrize("alpha", [2, 4])
def test_path_order5_even_loop_misses_definite_inertia(alpha):
    # without the parity the all-positive spectrum is out of reach
    p = path_pattern(5, alpha)
    w = realize_refined_inertia(p, RefinedInertia(5, 0, 0, 0), budget=8, styles=2)
    assert w is None


def test_path_witness_respects_mirrored_loop():
    # loop at the far end forces the mirrored layout internally
    m = path_refined_witness(6, 6, RefinedInertia(4, 0, 2, 0))
    assert m is not None
    assert conforms_to(rows_of(m), path_pattern(6, 6))
    reading = refined_inertia_of(m)
    assert reading.refined == RefinedInertia(4, 0, 2, 0)


# ---- loop-chain constructions ----

def test_an_witness_all_inertias_small_orders():
    for n in (3, 4, 5):
        p = loop_chain_pattern(n)
        for target in inertia_targets(n):
            m = an_family_witness(n, target)
            assert conforms_to(rows_of(m), p)
            neg, zero, pos = real_root_split(char_poly(m))
            assert (pos, neg, zero) == target


def test_an_witness_validates_input():
    with pytest.raises(ValueError, match="n >= 3"):
        an_family_witness(2, (1, 1, 0))
    with pytest.raises(ValueError, match="fit"):
        an_family_witness(4, (3, 2, 0))


def test_an_zero_free_inertias_have_simple_real_spectrum():
    # the corner shift must keep all roots real and off the axis
    m = an_family_witness(5, (3, 2, 0))
    cp = char_poly(m)
    assert cp.coefficient(5) != 0
    assert real_root_split(cp) == (2, 0, 3)


# ---- refined-inertia realization and survey ----

def test_realize_refined_validates_target():
    with pytest.raises(ValueError):
        realize_refined_inertia(path_pattern(4, 1), RefinedInertia(4, 1, 0, 0))


def test_diagonal_shortcut_full_pattern():
    full = ZeroPattern(3, frozenset((i, j) for i in (1, 2, 3) for j in (1, 2, 3)))
    w = realize_refined_inertia(full, RefinedInertia(2, 0, 1, 0))
    assert w is not None
    assert w.method == "construction"
    assert refined_inertia_of(w.matrix).refined == RefinedInertia(2, 0, 1, 0)


def test_survey_companion_hits_everything():
    out = survey(companion_pattern(4), budget=16, styles=2)
    assert len(out) == len(refined_inertia_targets(4))
    assert all(w is not None for w in out.values())


def test_survey_loop_chain_respects_two_cycle_obstruction():
    out = survey(loop_chain_pattern(4), budget=8, styles=2)
    missed = {ri.as_tuple() for ri, w in out.items() if w is None}
    # no proper 2-cycle: every zero-trace target with imaginary pairs is out
    refuted = {(0, 0, 2, 2), (0, 0, 0, 4)}
    assert refuted <= missed
    # every purely real target is in (the loop-chain construction)
    assert all(t.n_imag or t.as_tuple() not in missed for t in refined_inertia_targets(4))
    for ri, w in out.items():
        if w is not None:
            assert refined_inertia_of(w.matrix).refined == ri


def test_survey_reversal_closure_is_negation():
    out = survey(path_pattern(4, 2), budget=8, styles=2)
    for ri, w in out.items():
        if w is None:
            assert out[ri.reversal()] is None
        else:
            assert out[ri.reversal()] is not None


def test_transport_preserves_pattern_and_spectrum():
    src = companion_pattern(4)
    perm = [3, 1, 4, 2]
    dest = src.relabel(perm)
    w = realize_charpoly(src, CharPoly.from_monic_coeffs([1, 0, 0, 0, -1]))
    moved = transport_matrix(w.matrix, src, dest)
    assert moved is not None
    assert conforms_to(rows_of(moved), dest)
    assert char_poly(moved) == w.char_poly


def test_transport_rejects_inequivalent():
    assert (
        transport_matrix(
            an_family_witness(4, (2, 2, 0)), loop_chain_pattern(4), path_pattern(4, 1)
        )
        is None
    )
