"""Exact characteristic polynomials, root boxes, and refined inertias.

Matrices are rational and exact throughout.  The characteristic polynomial of
an order-n matrix is written

    p(x) = x^n - E_1 x^(n-1) + E_2 x^(n-2) - ... + (-1)^n E_n,

so E_k is the sum of the k-by-k principal minors, and equally the sum of the
composite k-cycle products of the digraph of the matrix (each simple cycle of
length l contributing the product of its arc entries times (-1)**(l-1)).
Both routes are implemented; they must always agree.

Root isolation is numeric (arbitrary precision) but every classification keeps
an a-posteriori error radius per root, and eigenvalue counts coming from exact
structure (trailing zero coefficients) are never delegated to floating point.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath

from ._exact import exact_det
from .patterns import (
    CompositeCycle,
    PatternError,
    ZeroPattern,
    composite_cycles,
    pattern_of,
)

Rational = int | Fraction | str


class MatrixError(ValueError):
    """Raised for malformed matrix input or shape mismatches."""


def as_fraction(x: Rational) -> Fraction:
    """Coerce to Fraction; floats are rejected to keep the pipeline exact."""
    if isinstance(x, float):
        raise MatrixError(f"refusing inexact float {x!r}; rationalize explicitly")
    try:
        return Fraction(x)
    except (ValueError, TypeError) as exc:
        raise MatrixError(f"not a rational: {x!r}") from exc


def fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable square matrix over the rationals."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.rows)
        if n == 0 or any(len(row) != n for row in self.rows):
            raise MatrixError("matrix must be square and nonempty")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Rational]]) -> "RationalMatrix":
        return cls(tuple(tuple(as_fraction(x) for x in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(
            tuple(
                tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
            )
        )

    @classmethod
    def zero(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> Fraction:
        """1-based entry access."""
        return self.rows[i - 1][j - 1]

    def trace(self) -> Fraction:
        return sum((self.rows[i][i] for i in range(self.n)), Fraction(0))

    def det(self) -> Fraction:
        return exact_det(self.rows)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.n != other.n:
            raise MatrixError("size mismatch")
        cols = tuple(zip(*other.rows))
        return RationalMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.rows
            )
        )

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.n != other.n:
            raise MatrixError("size mismatch")
        return RationalMatrix(
            tuple(
                tuple(a + b for a, b in zip(r1, r2))
                for r1, r2 in zip(self.rows, other.rows)
            )
        )

    def __neg__(self) -> "RationalMatrix":
        return self.scale(Fraction(-1))

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return self + (-other)

    def scale(self, c: Rational) -> "RationalMatrix":
        q = as_fraction(c)
        return RationalMatrix(tuple(tuple(q * x for x in row) for row in self.rows))

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.rows)))

    def relabel(self, perm: Sequence[int]) -> "RationalMatrix":
        """Simultaneous row/column permutation: position (i,j) moves to (perm[i-1], perm[j-1])."""
        n = self.n
        out = [[Fraction(0)] * n for _ in range(n)]
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                out[perm[i - 1] - 1][perm[j - 1] - 1] = self.entry(i, j)
        return RationalMatrix(tuple(tuple(row) for row in out))

    def principal_submatrix(self, indices: Sequence[int]) -> "RationalMatrix":
        idx = list(indices)
        if len(set(idx)) != len(idx) or any(not 1 <= i <= self.n for i in idx):
            raise MatrixError(f"bad index set {indices}")
        return RationalMatrix(
            tuple(tuple(self.entry(i, j) for j in idx) for i in idx)
        )

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def pattern(self) -> ZeroPattern:
        return pattern_of(self.rows)

    def max_abs(self) -> Fraction:
        return max((abs(x) for row in self.rows for x in row), default=Fraction(0))

    def __str__(self) -> str:
        return matrix_to_text(self)


# ---- matrix serialization ----

def parse_matrix(text: str) -> RationalMatrix:
    """Whitespace-separated rational entries, one row per line, # comments."""
    rows: list[list[Fraction]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([as_fraction(tok) for tok in line.split()])
        except MatrixError as exc:
            raise MatrixError(f"line {lineno}: {exc}") from exc
    if not rows:
        raise MatrixError("no matrix rows found")
    n = len(rows)
    for i, row in enumerate(rows, start=1):
        if len(row) != n:
            raise MatrixError(f"ragged matrix: row {i} has {len(row)} entries, expected {n}")
    return RationalMatrix.from_rows(rows)


def matrix_to_text(a: RationalMatrix) -> str:
    cells = [[fraction_str(x) for x in row] for row in a.rows]
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def matrix_to_json(a: RationalMatrix) -> str:
    return json.dumps(matrix_json_obj(a))


def matrix_json_obj(a: RationalMatrix) -> dict:
    return {"n": a.n, "rows": [[fraction_str(x) for x in row] for row in a.rows]}


def matrix_from_json(text: str) -> RationalMatrix:
    try:
        obj = json.loads(text)
        return matrix_from_json_obj(obj)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise MatrixError(f"bad matrix JSON: {exc}") from exc


def matrix_from_json_obj(obj: Mapping) -> RationalMatrix:
    rows = obj["rows"]
    a = RationalMatrix.from_rows(rows)
    if a.n != obj.get("n", a.n):
        raise MatrixError("declared order disagrees with row count")
    return a


# ---- characteristic polynomials ----

@dataclass(frozen=True)
class CharPoly:
    """p(x) = x^n - E_1 x^(n-1) + ... + (-1)^n E_n, stored as (E_1, ..., E_n)."""

    e: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.e)

    def coefficient(self, k: int) -> Fraction:
        """E_k, with E_0 = 1."""
        if k == 0:
            return Fraction(1)
        return self.e[k - 1]

    def monic_coeffs(self) -> tuple[Fraction, ...]:
        """Coefficients [1, -E_1, E_2, ...] in descending powers of x."""
        return tuple(
            (-1) ** k * self.coefficient(k) for k in range(self.n + 1)
        )

    @classmethod
    def from_monic_coeffs(cls, coeffs: Sequence[Rational]) -> "CharPoly":
        cs = [as_fraction(c) for c in coeffs]
        if not cs or cs[0] != 1:
            raise MatrixError("expected monic coefficients in descending powers")
        return cls(tuple((-1) ** k * cs[k] for k in range(1, len(cs))))

    def evaluate(self, x: Rational) -> Fraction:
        q = as_fraction(x)
        acc = Fraction(1)
        for c in self.monic_coeffs()[1:]:
            acc = acc * q + c
        return acc

    def zero_root_multiplicity(self) -> int:
        """Exact multiplicity of the root 0 (trailing zero coefficients)."""
        m = 0
        for k in range(self.n, 0, -1):
            if self.coefficient(k) != 0:
                break
            m += 1
        return m

    def __mul__(self, other: "CharPoly") -> "CharPoly":
        a = self.monic_coeffs()
        b = other.monic_coeffs()
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
        return CharPoly.from_monic_coeffs(prod)

    def __str__(self) -> str:
        parts: list[str] = []
        coeffs = self.monic_coeffs()
        n = self.n
        for k, c in enumerate(coeffs):
            if c == 0:
                continue
            power = n - k
            mag = abs(c)
            body = "" if (mag == 1 and power > 0) else fraction_str(mag)
            xpart = "" if power == 0 else ("x" if power == 1 else f"x^{power}")
            term = f"{body}{xpart}" if body == "" or xpart == "" else f"{body} {xpart}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts) if parts else "0"


def char_poly(a: RationalMatrix) -> CharPoly:
    """Exact characteristic polynomial by the Faddeev-LeVerrier recurrence."""
    n = a.n
    m = RationalMatrix.identity(n)
    cs: list[Fraction] = []
    for k in range(1, n + 1):
        m = a @ m
        ck = -m.trace() / k
        cs.append(ck)
        if k < n:
            m = m + RationalMatrix.identity(n).scale(ck)
    return CharPoly(tuple((-1) ** k * cs[k - 1] for k in range(1, n + 1)))


def principal_minor_sum(a: RationalMatrix, k: int) -> Fraction:
    """E_k as the sum of all k-by-k principal minors (independent of char_poly)."""
    if not 1 <= k <= a.n:
        raise MatrixError(f"minor order {k} out of range 1..{a.n}")
    total = Fraction(0)
    for idx in itertools.combinations(range(1, a.n + 1), k):
        total += a.principal_submatrix(idx).det()
    return total


# ---- support polynomials (symbolic coefficients) ----

@dataclass(frozen=True)
class SupportPolynomial:
    """E_k of a pattern as a signed multilinear polynomial in its free entries.

    Each term is a composite k-cycle: (sign, arcs).  Distinct composite cycles
    have distinct arc sets, so the terms never merge or cancel structurally.
    """

    pattern: ZeroPattern
    k: int
    terms: tuple[tuple[int, tuple[tuple[int, int], ...]], ...]

    def variables(self) -> frozenset[tuple[int, int]]:
        return frozenset(arc for _, arcs in self.terms for arc in arcs)

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, a: RationalMatrix) -> Fraction:
        return evaluate_support_poly(self, a)

    def evaluate_assignment(self, values: Mapping[tuple[int, int], Fraction]) -> Fraction:
        total = Fraction(0)
        for sign, arcs in self.terms:
            prod = Fraction(sign)
            for arc in arcs:
                prod *= values[arc]
                if prod == 0:
                    break
            total += prod
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for sign, arcs in self.terms:
            body = "*".join(f"a{u}{v}" if self.pattern.n < 10 else f"a[{u},{v}]" for u, v in arcs)
            parts.append(f"{'+' if sign > 0 else '-'} {body}")
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else out


def symbolic_coefficient(p: ZeroPattern, k: int) -> SupportPolynomial:
    """E_k of the pattern, one term per composite k-cycle."""
    terms = tuple(
        (comp.sign, comp.arcs()) for comp in composite_cycles(p, k)
    )
    return SupportPolynomial(p, k, terms)


def evaluate_support_poly(q: SupportPolynomial, a: RationalMatrix) -> Fraction:
    if a.n != q.pattern.n:
        raise MatrixError("matrix order disagrees with pattern order")
    from .patterns import conforms_to

    if not conforms_to(a.rows, q.pattern):
        raise MatrixError("matrix has a nonzero entry outside the pattern support")
    return q.evaluate_assignment(
        {arc: a.entry(*arc) for _, arcs in q.terms for arc in arcs}
    )


# ---- roots with a-posteriori radii ----

@dataclass(frozen=True)
class RootBox:
    """A numeric root estimate with an error radius; exact zeros carry radius 0."""

    value: complex
    radius: float
    exact_zero: bool = False


def roots(c: CharPoly, prec_bits: int = 160) -> tuple[RootBox, ...]:
    """All n roots of the characteristic polynomial.

    Zero roots are split off exactly first (trailing coefficients), the rest go
    through arbitrary-precision simultaneous iteration.  Every returned box
    carries radius = deg * |Weierstrass correction|, a standard a-posteriori
    bound on the distance to the true root set; radius 0 marks exact zeros.
    """
    m = c.zero_root_multiplicity()
    coeffs = list(c.monic_coeffs()[: c.n + 1 - m])
    out = [RootBox(0j, 0.0, exact_zero=True)] * m
    deg = len(coeffs) - 1
    if deg == 0:
        return tuple(out)
    with mpmath.workprec(max(prec_bits, 53)):
        mp_coeffs = [
            mpmath.mpf(q.numerator) / mpmath.mpf(q.denominator) for q in coeffs
        ]
        try:
            zs = mpmath.polyroots(mp_coeffs, maxsteps=120, extraprec=80)
        except mpmath.libmp.libhyper.NoConvergence:
            try:
                zs = mpmath.polyroots(mp_coeffs, maxsteps=600, extraprec=300)
            except mpmath.libmp.libhyper.NoConvergence:
                comp = mpmath.zeros(deg, deg)
                for i in range(1, deg):
                    comp[i, i - 1] = mpmath.mpf(1)
                for i in range(deg):
                    comp[i, deg - 1] = -mp_coeffs[deg - i]
                zs = mpmath.mp.eig(mpmath.matrix(comp), left=False, right=False)
        zs = [mpmath.mpc(z) for z in zs]
        scale = 1.0 + max(float(abs(z)) for z in zs)
        floor = scale * 2.0 ** (-(mpmath.mp.prec - 12))
        clusters = _cluster_roots(zs, scale * 2.0 ** (-mpmath.mp.prec // 3))
        for cluster in clusters:
            m = len(cluster)
            centroid = sum(zs[j] for j in cluster) / m
            val = mpmath.polyval(mp_coeffs, centroid)
            denom = mpmath.mpf(1)
            for k, w in enumerate(zs):
                if k not in cluster:
                    denom *= centroid - w
            if denom == 0:
                radius = float("inf")
            else:
                # Weierstrass correction for simple roots; for a cluster of m
                # estimates, the residual splits over m nearby true roots.
                radius = float(deg * abs(val / denom) ** (mpmath.mpf(1) / m))
            radius = max(radius, floor)
            for j in cluster:
                out.append(RootBox(complex(zs[j]), radius))
    return tuple(sorted(out, key=lambda rb: (rb.value.real, rb.value.imag)))


def _cluster_roots(zs: list, tol: float) -> list[list[int]]:
    """Greedy union of root estimates closer than tol (transitive closure)."""
    parent = list(range(len(zs)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            if abs(zs[i] - zs[j]) <= tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(zs)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


# ---- refined inertia ----

@dataclass(frozen=True)
class RefinedInertia:
    """(n_plus, n_minus, n_zero, n_imag): eigenvalue counts by half-plane/axis.

    n_zero counts zero eigenvalues, n_imag the nonzero purely imaginary ones.
    For the refined inertia of a real matrix n_imag is even; readings measured
    with finite precision may transiently violate that and are flagged fragile
    by the classifier rather than rejected here.
    """

    n_plus: int
    n_minus: int
    n_zero: int
    n_imag: int

    def __post_init__(self) -> None:
        if min(self.n_plus, self.n_minus, self.n_zero, self.n_imag) < 0:
            raise ValueError(f"negative count in {self.as_tuple()}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n_plus, self.n_minus, self.n_zero, self.n_imag)

    @property
    def order(self) -> int:
        return self.n_plus + self.n_minus + self.n_zero + self.n_imag

    def inertia(self) -> tuple[int, int, int]:
        """Ordinary inertia: imaginary eigenvalues count as zero real part."""
        return (self.n_plus, self.n_minus, self.n_zero + self.n_imag)

    def reversal(self) -> "RefinedInertia":
        return RefinedInertia(self.n_minus, self.n_plus, self.n_zero, self.n_imag)

    def __str__(self) -> str:
        return f"({self.n_plus},{self.n_minus},{self.n_zero},{self.n_imag})"


def validate_refined_target(ri: RefinedInertia, n: int) -> None:
    """Targets must fill the order exactly and pair their imaginary eigenvalues."""
    if ri.order != n:
        raise ValueError(f"refined inertia {ri} does not sum to order {n}")
    if ri.n_imag % 2:
        raise ValueError(f"refined inertia {ri} has odd n_imag")


def refined_inertia_targets(n: int) -> tuple[RefinedInertia, ...]:
    """All refined inertias of order n with even n_imag, lexicographic order."""
    out = []
    for n_plus in range(n + 1):
        for n_minus in range(n + 1 - n_plus):
            for n_zero in range(n + 1 - n_plus - n_minus):
                n_imag = n - n_plus - n_minus - n_zero
                if n_imag % 2 == 0:
                    out.append(RefinedInertia(n_plus, n_minus, n_zero, n_imag))
    return tuple(out)


def inertia_targets(n: int) -> tuple[tuple[int, int, int], ...]:
    return tuple(
        (a, b, n - a - b) for a in range(n + 1) for b in range(n + 1 - a)
    )


@dataclass(frozen=True)
class InertiaReading:
    """A refined inertia measured from root boxes, with a fragility flag."""

    refined: RefinedInertia
    fragile: bool
    eps: float
    roots: tuple[RootBox, ...]

    def inertia(self) -> tuple[int, int, int]:
        return self.refined.inertia()


def default_eps(a: RationalMatrix) -> float:
    return 1e-9 * (1.0 + float(a.max_abs()))


def refined_inertia_of(a: RationalMatrix, eps: float | None = None) -> InertiaReading:
    """Classify the spectrum of an exact rational matrix.

    Zero eigenvalues are counted exactly from trailing coefficients; remaining
    roots are classified against eps: |z| < eps reads as zero, |Re z| < eps
    with |Im z| >= eps as nonzero imaginary, otherwise by the sign of Re z.
    The reading is fragile when any root sits within 10 * radius of a decision
    boundary, or when the imaginary count fails to pair up.
    """
    if eps is None:
        eps = default_eps(a)
    if eps <= 0:
        raise ValueError("eps must be positive")
    boxes = roots(char_poly(a))
    n_plus = n_minus = n_zero = n_imag = 0
    fragile = False
    for box in boxes:
        if box.exact_zero:
            n_zero += 1
            continue
        z = box.value
        mag, re = abs(z), z.real
        if mag < eps:
            n_zero += 1
        elif abs(re) < eps:
            n_imag += 1
        elif re > 0:
            n_plus += 1
        else:
            n_minus += 1
        boundary_dist = min(abs(mag - eps), abs(abs(re) - eps))
        if boundary_dist <= 10 * box.radius:
            fragile = True
    if n_imag % 2:
        fragile = True
    return InertiaReading(
        RefinedInertia(n_plus, n_minus, n_zero, n_imag), fragile, eps, boxes
    )
