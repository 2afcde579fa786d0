"""Nilpotent realizations and the centralizer test for spectral arbitrariness.

The certificate logic is exact end to end: candidate nilpotents are rational
and re-verified by rational arithmetic, and the centralizer rank is computed
by fraction-free elimination.  A passing certificate is a proof; a failing
one means nothing more than "this particular nilpotent did not settle it".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._exact import exact_rank
from .patterns import ZeroPattern, conforms_to
from .spectra import CharPoly, RationalMatrix, char_poly, matrix_json_obj
from .realization import (
    _exact_solve,
    _freeze_order,
    _newton_solve,
    _plan_solutions,
    _solve_time_limit,
    _symbolic_system,
)


def _rows(a: RationalMatrix) -> list[list[Fraction]]:
    return [[a.entry(i, j) for j in range(1, a.n + 1)] for i in range(1, a.n + 1)]


def is_nilpotent(a: RationalMatrix) -> bool:
    return char_poly(a) == CharPoly.from_monic_coeffs(
        [Fraction(1)] + [Fraction(0)] * a.n
    )


def nilpotent_index(a: RationalMatrix) -> int:
    """Smallest k with a^k = 0, by exact repeated multiplication."""
    if not is_nilpotent(a):
        raise ValueError("matrix is not nilpotent")
    power = a
    for k in range(1, a.n + 1):
        if power.is_zero():
            return k
        power = power @ a
    raise AssertionError("nilpotent matrix with index above its order")


_SWEEP_VALUES = [
    Fraction(-1),
    Fraction(2),
    Fraction(-2),
    Fraction(1, 2),
    Fraction(-1, 2),
    Fraction(4),
    Fraction(-4),
]


def _sweep_plans(p: ZeroPattern, arcs: list[tuple[int, int]]):
    """Deterministic freeze plans: all-ones, then one varied signed entry.

    Sign choices matter: some nilpotent branches only carry rational points
    when a frozen two-cycle product is negative, so the sweep flips each of
    the last few frozen arcs through a signed palette before giving up.
    """
    surplus = len(arcs) - p.n
    if surplus <= 0:
        yield {}
        return
    base = _freeze_order(p, arcs)[:surplus]
    one = Fraction(1)
    yield {arc: one for arc in base}
    for vary in range(min(3, surplus)):
        pos = surplus - 1 - vary
        for v in _SWEEP_VALUES:
            plan = {arc: one for arc in base}
            plan[base[pos]] = v
            yield plan


def _candidate_nilpotents(p: ZeroPattern, budget: int = 64, seed: int = 0):
    """Yield distinct nonzero exact nilpotents in Q(p), cheapest first."""
    xn = CharPoly.from_monic_coeffs([Fraction(1)] + [Fraction(0)] * p.n)
    seen: set = set()

    def emit(m: RationalMatrix | None) -> RationalMatrix | None:
        if m is None or m.is_zero() or char_poly(m) != xn:
            return None
        key = tuple(tuple(m.entry(i, j) for j in range(1, m.n + 1)) for i in range(1, m.n + 1))
        if key in seen:
            return None
        seen.add(key)
        return m

    arcs, syms, eqs = _symbolic_system(p, xn)
    limit = min(_solve_time_limit(), 0.5)
    for plan in _sweep_plans(p, arcs):
        # every solution of a plan matters here: the certifying nilpotent
        # often shares a plan with several useless zero-heavy ones
        for sol in _plan_solutions(p, arcs, syms, eqs, xn, plan, limit, max_sols=6):
            m = emit(sol)
            if m is not None:
                yield m
    for s in range(4):
        m = emit(_exact_solve(p, xn, seed + 31 * s + 1, attempts=2))
        if m is not None:
            yield m
    for s in range(3):
        m = emit(_newton_solve(p, xn, seed + 7 * s, starts=max(4, budget // 4)))
        if m is not None:
            yield m


def find_nilpotent(
    p: ZeroPattern, budget: int = 64, seed: int = 0, attempts: int = 6
) -> RationalMatrix | None:
    """A nilpotent matrix in Q(p), preferring the largest index found.

    The zero matrix is always nilpotent, so the search pins spanning-tree
    entries to nonzero values and keeps the candidate whose index is
    largest, stopping early at index n.  Entries forced to zero along the
    way are fine: zero patterns allow them.
    """
    best: RationalMatrix | None = None
    best_index = 0
    examined = 0
    for m in _candidate_nilpotents(p, budget=budget, seed=seed):
        k = nilpotent_index(m)
        if k > best_index:
            best, best_index = m, k
        examined += 1
        if best_index == p.n or examined >= max(attempts, 4):
            break
    if best is not None:
        return best
    return RationalMatrix.zero(p.n)


@dataclass(frozen=True)
class NcCertificate:
    """Outcome of the centralizer test on one nilpotent realization."""

    pattern: ZeroPattern
    nilpotent: RationalMatrix
    index: int
    centralizer_rank_deficiency: int
    verdict: str  # "SAP_certified" | "test_failed" | "indeterminate"

    def as_json_obj(self) -> dict:
        return {
            "nilpotent": matrix_json_obj(self.nilpotent),
            "index": self.index,
            "rank_deficiency": self.centralizer_rank_deficiency,
            "verdict": self.verdict,
        }


def nc_test(p: ZeroPattern, a: RationalMatrix) -> NcCertificate:
    """Centralizer test: AB = BA plus B^T vanishing on the support force B = 0.

    The unknown B ranges over all n x n matrices; the system stacks the n^2
    commutator equations with one equation B_ji = 0 per support position
    (i, j).  Zero deficiency with a full-index nilpotent certifies that the
    pattern is spectrally arbitrary; anything else proves nothing.
    """
    if a.n != p.n:
        raise ValueError("matrix order differs from pattern order")
    if not conforms_to(_rows(a), p):
        raise ValueError("matrix does not conform to the pattern")
    if not is_nilpotent(a):
        raise ValueError("matrix is not nilpotent")

    n = p.n
    idx = lambda i, j: (i - 1) * n + (j - 1)
    rows: list[list[Fraction]] = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            row = [Fraction(0)] * (n * n)
            for k in range(1, n + 1):
                row[idx(k, j)] += a.entry(i, k)
                row[idx(i, k)] -= a.entry(k, j)
            rows.append(row)
    for (i, j) in p.sorted_support():
        row = [Fraction(0)] * (n * n)
        row[idx(j, i)] = Fraction(1)
        rows.append(row)

    deficiency = n * n - exact_rank(rows)
    index = nilpotent_index(a)
    if index < n:
        verdict = "indeterminate"
    elif deficiency == 0:
        verdict = "SAP_certified"
    else:
        verdict = "test_failed"
    return NcCertificate(p, a, index, deficiency, verdict)


def certify_sap(
    p: ZeroPattern, budget: int = 64, seed: int = 0, attempts: int = 16
) -> NcCertificate | None:
    """Search nilpotents and run the centralizer test until one certifies.

    The test depends on which nilpotent is used, so failures retry with
    fresh candidates; attempts caps how many get tested.  Returns the first
    certifying certificate, else the most informative failing one (full
    index beats broken), else None when not even a nilpotent candidate
    emerged beyond the zero matrix.
    """
    fallback: NcCertificate | None = None
    examined = 0
    for a in _candidate_nilpotents(p, budget=budget, seed=seed):
        cert = nc_test(p, a)
        if cert.verdict == "SAP_certified":
            return cert
        if fallback is None or (
            cert.index > fallback.index
            or (
                cert.index == fallback.index
                and cert.centralizer_rank_deficiency
                < fallback.centralizer_rank_deficiency
            )
        ):
            fallback = cert
        examined += 1
        if examined >= attempts:
            break
    return fallback
