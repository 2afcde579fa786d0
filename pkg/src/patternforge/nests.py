"""Properly signed nests: verification, search, and path-pattern constructions.

A properly signed nest of an order-n matrix B is an ordering (a1,...,an) of
its indices such that sgn(det B[{a1,...,ak}]) = (-1)^k for k = 1..n.  A
pattern that allows one allows the extreme inertias (n,0,0) and (0,n,0); the
check here makes that concrete by producing an exact positive diagonal
scaling whose stability is certified by the Routh-Hurwitz criterion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ._exact import exact_det
from .patterns import PatternError, ZeroPattern
from .spectra import RationalMatrix, char_poly, fraction_str


class BudgetError(RuntimeError):
    """Raised when an exhaustive search would exceed its intended size cap."""


@dataclass(frozen=True)
class NestOrdering:
    """A candidate nest: a permutation of 1..n, applied left to right."""

    n: int
    sequence: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.sequence) != list(range(1, self.n + 1)):
            raise ValueError(f"{self.sequence} is not a permutation of 1..{self.n}")

    @classmethod
    def of(cls, sequence: Sequence[int]) -> "NestOrdering":
        seq = tuple(int(i) for i in sequence)
        return cls(len(seq), seq)


def _as_sequence(b: RationalMatrix, ordering) -> tuple[int, ...]:
    if isinstance(ordering, NestOrdering):
        seq = ordering.sequence
    else:
        seq = NestOrdering.of(ordering).sequence
    if len(seq) != b.n:
        raise ValueError(f"ordering of length {len(seq)} for order {b.n} matrix")
    return seq


def nested_minors(b: RationalMatrix, ordering) -> tuple[Fraction, ...]:
    """Exact determinants of B[{a1}], B[{a1,a2}], ..., B[{a1,...,an}]."""
    seq = _as_sequence(b, ordering)
    return tuple(b.principal_submatrix(seq[:k]).det() for k in range(1, b.n + 1))


def _sgn(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def nest_signs(b: RationalMatrix, ordering) -> tuple[int, ...]:
    """Signs (+1, -1, or 0) of the nested principal minors along the ordering."""
    return tuple(_sgn(d) for d in nested_minors(b, ordering))


def is_properly_signed_nest(b: RationalMatrix, ordering) -> bool:
    return all(
        s == (-1 if k % 2 else 1)
        for k, s in enumerate(nest_signs(b, ordering), start=1)
    )


FIND_NEST_MAX_ORDER = 8


def find_nest(b: RationalMatrix) -> NestOrdering | None:
    """Lexicographically first properly signed nest of b, or None.

    Exhaustive over orderings (dead prefixes pruned), so None is a proof that
    this particular matrix has no nest.  Capped at order 8; use
    find_nest_heuristic beyond that.
    """
    if b.n > FIND_NEST_MAX_ORDER:
        raise BudgetError(
            f"exhaustive nest search is capped at order {FIND_NEST_MAX_ORDER}; "
            "use find_nest_heuristic"
        )
    n = b.n

    def extend(prefix: list[int]) -> list[int] | None:
        if len(prefix) == n:
            return prefix
        want = -1 if (len(prefix) + 1) % 2 else 1
        for v in range(1, n + 1):
            if v in prefix:
                continue
            if _sgn(b.principal_submatrix(prefix + [v]).det()) == want:
                hit = extend(prefix + [v])
                if hit is not None:
                    return hit
        return None

    hit = extend([])
    return None if hit is None else NestOrdering.of(hit)


def find_nest_heuristic(b: RationalMatrix) -> NestOrdering | None:
    """Greedy nest search for large matrices: no backtracking, any order.

    Tries each start vertex, then repeatedly extends by the first vertex
    producing the required next sign.  Failure proves nothing.
    """
    n = b.n
    for start in range(1, n + 1):
        if _sgn(b.entry(start, start)) != -1:
            continue
        prefix = [start]
        while len(prefix) < n:
            want = -1 if (len(prefix) + 1) % 2 else 1
            for v in range(1, n + 1):
                if v not in prefix and _sgn(
                    b.principal_submatrix(prefix + [v]).det()
                ) == want:
                    prefix.append(v)
                    break
            else:
                break
        if len(prefix) == n:
            return NestOrdering.of(prefix)
    return None


# ---- canonical path-pattern constructions ----

def canonical_path_matrix(n: int, alpha: int) -> RationalMatrix:
    """The tridiagonal path with loop at alpha: subdiagonal 1, rest -1."""
    if n < 1 or not 1 <= alpha <= n:
        raise PatternError(f"need 1 <= alpha <= n, got ({n}, {alpha})")
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = Fraction(1)
        rows[i - 1][i] = Fraction(-1)
    rows[alpha - 1][alpha - 1] = Fraction(-1)
    return RationalMatrix.from_rows(rows)


def path_nest_ordering(n: int, alpha: int) -> NestOrdering:
    """The ordering (alpha, alpha-1, ..., 1, alpha+1, ..., n)."""
    if n < 1 or not 1 <= alpha <= n:
        raise PatternError(f"need 1 <= alpha <= n, got ({n}, {alpha})")
    return NestOrdering.of(
        list(range(alpha, 0, -1)) + list(range(alpha + 1, n + 1))
    )


def valid_path_nest_ordering(n: int, alpha: int) -> NestOrdering:
    """A nest ordering of the canonical path matrix that provably verifies.

    For odd alpha (and alpha = n) this is path_nest_ordering.  For even
    alpha with even n that ordering hits a structural zero: its prefix
    {alpha,...,1,alpha+1} induces a path whose loop sits at an even position,
    which has no transversal, so the minor vanishes for every realization.
    Reflecting the path (the equivalence onto the loop-at-(n-alpha+1) pattern)
    repairs it: use (alpha, alpha+1, ..., n, alpha-1, ..., 1) instead.
    """
    if n % 2 and alpha % 2 == 0:
        raise PatternError(
            f"path with n = {n}, alpha = {alpha} has no properly signed nest"
        )
    if alpha % 2 == 1 or alpha == n:
        return path_nest_ordering(n, alpha)
    return NestOrdering.of(
        list(range(alpha, n + 1)) + list(range(alpha - 1, 0, -1))
    )


# ---- nest consequences ----

def _hurwitz_stable(coeffs: Sequence[Fraction]) -> bool:
    """Routh-Hurwitz: monic real polynomial has all roots in Re < 0."""
    n = len(coeffs) - 1
    if coeffs[0] != 1:
        raise ValueError("expected a monic coefficient list")
    if n == 0:
        return True

    def c(k: int) -> Fraction:
        return coeffs[k] if 0 <= k <= len(coeffs) - 1 else Fraction(0)

    h = [[c(2 * (j + 1) - (i + 1)) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        if exact_det([row[:k] for row in h[:k]]) <= 0:
            return False
    return True


def stable_scaling_from_nest(
    b: RationalMatrix, ordering, max_halvings: int = 60
) -> RationalMatrix | None:
    """A matrix D @ b (D positive diagonal) with all eigenvalues in Re < 0.

    Along a properly signed nest the leading minors alternate sign, so a
    sufficiently fast-decaying diagonal makes the scaled matrix stable; each
    candidate is certified exactly by the Routh-Hurwitz test rather than
    trusted.  Returns None only if max_halvings is exhausted.
    """
    seq = _as_sequence(b, ordering)
    if not is_properly_signed_nest(b, seq):
        raise ValueError("ordering is not a properly signed nest of b")
    n = b.n
    t = Fraction(1)
    for _ in range(max_halvings):
        d = [Fraction(0)] * n
        for rank, v in enumerate(seq):
            d[v - 1] = t**rank
        scaled = RationalMatrix.from_rows(
            [[d[i] * b.entry(i + 1, j + 1) for j in range(n)] for i in range(n)]
        )
        if _hurwitz_stable(char_poly(scaled).monic_coeffs()):
            return scaled
        t /= 2
    return None


@dataclass(frozen=True)
class NestInertiaReport:
    """Instance check of the nest-to-inertia implication, with exact witnesses."""

    ordering: NestOrdering
    signs: tuple[int, ...]
    negative_witness: RationalMatrix  # inertia (0, n, 0)
    positive_witness: RationalMatrix  # inertia (n, 0, 0)

    def as_json_obj(self) -> dict:
        from .spectra import matrix_json_obj

        return {
            "ordering": list(self.ordering.sequence),
            "signs": list(self.signs),
            "verdict": "confirmed",
            "negative_witness": matrix_json_obj(self.negative_witness),
            "positive_witness": matrix_json_obj(self.positive_witness),
        }


def nest_implies_inertia_check(b: RationalMatrix, ordering) -> NestInertiaReport:
    """Confirm that a nest of b yields inertias (0,n,0) and (n,0,0) in its pattern.

    Both witnesses are diagonal scalings of b (hence share its pattern) whose
    half-plane eigenvalue counts are certified by exact Routh-Hurwitz tests.
    """
    seq = _as_sequence(b, ordering)
    if not is_properly_signed_nest(b, seq):
        raise ValueError("precondition failed: ordering is not a properly signed nest")
    stable = stable_scaling_from_nest(b, seq)
    if stable is None:
        raise RuntimeError("diagonal scaling search exhausted its budget")
    return NestInertiaReport(
        ordering=NestOrdering.of(seq),
        signs=nest_signs(b, seq),
        negative_witness=stable,
        positive_witness=stable.scale(-1),
    )


# ---- pattern-level search (semi-decision) ----

@dataclass(frozen=True)
class NestCertificate:
    matrix: RationalMatrix
    ordering: NestOrdering
    minors: tuple[Fraction, ...]

    def as_json_obj(self) -> dict:
        from .spectra import matrix_json_obj

        return {
            "matrix": matrix_json_obj(self.matrix),
            "ordering": list(self.ordering.sequence),
            "minors": [fraction_str(m) for m in self.minors],
        }


def _canonical_signed_matrix(p: ZeroPattern) -> RationalMatrix:
    rows = [[Fraction(0)] * p.n for _ in range(p.n)]
    for i, j in p.support:
        rows[i - 1][j - 1] = Fraction(1) if i == j + 1 else Fraction(-1)
    return RationalMatrix.from_rows(rows)


def pattern_allows_nest(
    p: ZeroPattern, seed: int = 0, tries: int = 500
) -> NestCertificate | None:
    """Search Q(p) for a matrix with a properly signed nest.

    Tries the canonical signed matrix first, then seeded random rational
    realizations.  None means no nest was found, not that none exists; the
    only exact impossibility proof is the missing-transversal obstruction.
    """
    rng = random.Random(seed)
    search = find_nest if p.n <= FIND_NEST_MAX_ORDER else find_nest_heuristic
    values = [Fraction(v) for v in (1, -1, 2, -2, 3, -3)] + [
        Fraction(1, 2),
        Fraction(-1, 2),
    ]

    def attempt(b: RationalMatrix) -> NestCertificate | None:
        ordering = search(b)
        if ordering is None:
            return None
        return NestCertificate(b, ordering, nested_minors(b, ordering))

    hit = attempt(_canonical_signed_matrix(p))
    if hit is not None:
        return hit
    for _ in range(tries):
        rows = [[Fraction(0)] * p.n for _ in range(p.n)]
        for i, j in p.support:
            rows[i - 1][j - 1] = Fraction(0) if rng.random() < 0.05 else rng.choice(values)
        hit = attempt(RationalMatrix.from_rows(rows))
        if hit is not None:
            return hit
    return None
