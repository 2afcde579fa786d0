"""Witness construction: matrices realizing target spectra and inertias.

Verification discipline: a witness only counts if it is exactly rational,
conforms to the pattern, and its characteristic polynomial matches the
target exactly.  Numeric search is used to find candidates, never to
certify them.
"""

from __future__ import annotations

import os
import random
import signal
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from .patterns import ZeroPattern, canonicalize
from .spectra import (
    CharPoly,
    RationalMatrix,
    RefinedInertia,
    fraction_str,
    char_poly,
    matrix_json_obj,
    refined_inertia_of,
    refined_inertia_targets,
    symbolic_coefficient,
    validate_refined_target,
)
from .nests import (
    canonical_path_matrix,
    stable_scaling_from_nest,
    valid_path_nest_ordering,
)
from .families import companion_pattern, loop_chain_pattern, path_pattern


# ---- factored targets ----

# Root palettes: magnitudes inside [1/2, 4], pairwise separated by >= 1/4.
_REAL_PALETTE = [Fraction(x) for x in (1, 2, 3)] + [
    Fraction(1, 2), Fraction(5, 2), Fraction(7, 2), Fraction(3, 2), Fraction(4),
]
_IMAG_PALETTE = [Fraction(x) for x in (1, 2, 3, 4)] + [
    Fraction(1, 2), Fraction(3, 2), Fraction(5, 2), Fraction(7, 2),
]
_COMPLEX_PALETTE = [
    (Fraction(1), Fraction(1)), (Fraction(2), Fraction(1)),
    (Fraction(1), Fraction(2)), (Fraction(1, 2), Fraction(3, 2)),
    (Fraction(3, 2), Fraction(1, 2)), (Fraction(2), Fraction(2)),
    (Fraction(5, 2), Fraction(1)), (Fraction(1), Fraction(5, 2)),
]
# nonsquare rationals: x^2 + r keeps its roots on the imaginary axis while
# freeing the squared magnitude from the rational-square grid
_IMAGSQ_PALETTE = [Fraction(x) for x in (2, 3, 5, 6, 7, 10)] + [
    Fraction(1, 2), Fraction(3, 2), Fraction(5, 2), Fraction(2, 3),
]


@dataclass(frozen=True)
class TargetSpectrum:
    """An exactly factored spectrum pinning a refined inertia.

    Factors: ("real", r) for x - r; ("zero",) for x; ("imag", w) for
    x^2 + w^2; ("imagsq", r) for x^2 + r with r > 0 (roots +/- i*sqrt(r),
    covering imaginary pairs of irrational magnitude); ("complex", al, be)
    for x^2 + 2*al*x + (al^2 + be^2), whose roots are -al +/- be*i.
    """

    factors: tuple[tuple, ...]

    @property
    def n(self) -> int:
        return sum(1 if f[0] in ("real", "zero") else 2 for f in self.factors)

    def refined(self) -> RefinedInertia:
        plus = minus = zero = imag = 0
        for f in self.factors:
            if f[0] == "real":
                if f[1] > 0:
                    plus += 1
                else:
                    minus += 1
            elif f[0] == "zero":
                zero += 1
            elif f[0] in ("imag", "imagsq"):
                imag += 2
            else:
                if f[1] < 0:
                    plus += 2
                else:
                    minus += 2
        return RefinedInertia(plus, minus, zero, imag)

    def char_poly(self) -> CharPoly:
        coeffs = [Fraction(1)]
        for f in self.factors:
            if f[0] == "real":
                fac = [Fraction(1), -f[1]]
            elif f[0] == "zero":
                fac = [Fraction(1), Fraction(0)]
            elif f[0] == "imag":
                fac = [Fraction(1), Fraction(0), f[1] ** 2]
            elif f[0] == "imagsq":
                fac = [Fraction(1), Fraction(0), f[1]]
            else:
                al, be = f[1], f[2]
                fac = [Fraction(1), 2 * al, al**2 + be**2]
            out = [Fraction(0)] * (len(coeffs) + len(fac) - 1)
            for i, a in enumerate(coeffs):
                for j, b in enumerate(fac):
                    out[i + j] += a * b
            coeffs = out
        return CharPoly.from_monic_coeffs(coeffs)

    def factor_strings(self) -> list[str]:
        out = []
        for f in self.factors:
            if f[0] == "real":
                r = f[1]
                out.append(f"x-{fraction_str(r)}" if r > 0 else f"x+{fraction_str(-r)}")
            elif f[0] == "zero":
                out.append("x")
            elif f[0] == "imag":
                out.append(f"x^2+{fraction_str(f[1] ** 2)}")
            elif f[0] == "imagsq":
                out.append(f"x^2+{fraction_str(f[1])}")
            else:
                al, be = f[1], f[2]
                lin = f"+{fraction_str(2 * al)}" if al > 0 else f"-{fraction_str(-2 * al)}"
                out.append(f"x^2{lin}x+{fraction_str(al**2 + be**2)}")
        return out


def target_poly_for(ri: RefinedInertia, seed: int = 0) -> TargetSpectrum:
    """A factored polynomial realizing exactly ri, deterministic per seed.

    Same-half-plane eigenvalues are paired into conjugate complex factors
    (the parametric quartic trick), leaving odd counts as real roots; the
    seed rotates the root palettes so retries see fresh coefficients.
    """
    if ri.n_imag % 2:
        raise ValueError(f"{ri} has an odd imaginary count")
    rot = seed % len(_REAL_PALETTE)
    reals = _REAL_PALETTE[rot:] + _REAL_PALETTE[:rot]
    imags = _IMAG_PALETTE[rot:] + _IMAG_PALETTE[:rot]
    pairs = _COMPLEX_PALETTE[rot:] + _COMPLEX_PALETTE[:rot]
    sqs = _IMAGSQ_PALETTE[rot:] + _IMAGSQ_PALETTE[:rot]
    factors: list[tuple] = []
    for sign, count in ((1, ri.n_plus), (-1, ri.n_minus)):
        if seed % 2 == 0:
            halves, rest = divmod(count, 2)
        else:
            halves, rest = 0, count
        for k in range(halves):
            al, be = pairs[k % len(pairs)]
            factors.append(("complex", -sign * al, be))
        for k in range(rest):
            factors.append(("real", sign * reals[k % len(reals)]))
    factors.extend(("zero",) for _ in range(ri.n_zero))
    # imaginary magnitudes: rational (legacy), irrational sqrt(r), or mixed;
    # some patterns only have rational points off the rational-square grid
    mode = seed % 3
    for k in range(ri.n_imag // 2):
        if mode == 1 or (mode == 2 and k % 2):
            factors.append(("imagsq", sqs[k % len(sqs)]))
        else:
            factors.append(("imag", imags[k % len(imags)]))
    spec = TargetSpectrum(tuple(factors))
    assert spec.refined() == ri
    return spec


@dataclass(frozen=True)
class RealizationWitness:
    """An exact matrix whose characteristic polynomial hits the target.

    ``refined`` is the certified refined inertia: from the factored target
    when one exists, or from an exact construction argument (block spectra,
    Routh-Hurwitz) when the spectrum itself is irrational.
    """

    matrix: RationalMatrix
    char_poly: CharPoly
    target: TargetSpectrum | None
    refined: RefinedInertia | None
    method: str  # "construction" | "exact" | "newton" | "negation" | "probe" | "appendix"

    @property
    def coefficient_residual(self) -> Fraction:
        return Fraction(0)  # witnesses are exact by policy

    def as_json_obj(self) -> dict:
        obj = {
            "matrix": matrix_json_obj(self.matrix),
            "char_poly": str(self.char_poly),
            "method": self.method,
            "residual": "0",
        }
        if self.target is not None:
            obj["target_factors"] = self.target.factor_strings()
        if self.refined is not None:
            obj["refined_inertia"] = list(self.refined.as_tuple())
        return obj


def _verified(
    p: ZeroPattern,
    m: RationalMatrix,
    target_cp: CharPoly,
    spec: TargetSpectrum | None,
    method: str,
) -> RealizationWitness | None:
    if m.n != p.n:
        return None
    rows = [[m.entry(i, j) for j in range(1, m.n + 1)] for i in range(1, m.n + 1)]
    for i in range(p.n):
        for j in range(p.n):
            if rows[i][j] != 0 and (i + 1, j + 1) not in p.support:
                return None
    cp = char_poly(m)
    if cp != target_cp:
        return None
    refined = None if spec is None else spec.refined()
    return RealizationWitness(m, cp, spec, refined, method)


# ---- equivalence transport ----

def transport_matrix(
    m: RationalMatrix, source: ZeroPattern, dest: ZeroPattern
) -> RationalMatrix | None:
    """Carry a witness across pattern equivalence; preserves the spectrum.

    Permutation similarity and transposition both fix the characteristic
    polynomial, so the result realizes the same target inside Q(dest).
    """
    if source.n != dest.n:
        return None
    fs = canonicalize(source)
    fd = canonicalize(dest)
    if fs.pattern != fd.pattern:
        return None
    out = m
    if fs.transposed:
        out = out.transpose()
    out = out.relabel(fs.perm)
    # now out lies in the canonical pattern; invert dest's certificate
    inv = [0] * dest.n
    for i, v in enumerate(fd.perm, start=1):
        inv[v - 1] = i
    out = out.relabel(inv)
    if fd.transposed:
        out = out.transpose()
    return out


# ---- exact real-root counting (Sturm) ----

def _poly_eval_sign_at_inf(coeffs: Sequence[Fraction], positive: bool) -> int:
    for i, c in enumerate(coeffs):
        if c != 0:
            deg = len(coeffs) - 1 - i
            s = 1 if c > 0 else -1
            if not positive and deg % 2:
                s = -s
            return s
    return 0


def _sturm_chain(coeffs: list[Fraction]) -> list[list[Fraction]]:
    def deriv(c):
        n = len(c) - 1
        return [c[i] * (n - i) for i in range(n)] or [Fraction(0)]

    def rem(a, b):
        a = a[:]
        while len(a) >= len(b) and any(x != 0 for x in a):
            if a[0] == 0:
                a.pop(0)
                continue
            q = a[0] / b[0]
            for i in range(len(b)):
                a[i] -= q * b[i]
            a.pop(0)
        while len(a) > 1 and a[0] == 0:
            a.pop(0)
        return a or [Fraction(0)]

    chain = [list(coeffs), deriv(coeffs)]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        r = rem(chain[-2], chain[-1])
        if len(r) == 1 and r[0] == 0:
            break
        chain.append([-c for c in r])
        if len(chain[-1]) == 1:
            break
    return chain


def _variations(signs: list[int]) -> int:
    seq = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(seq, seq[1:]) if a * b < 0)


def real_root_split(cp: CharPoly) -> tuple[int, int, int]:
    """(negative, zero, positive) real root counts of cp, exact.

    Zero roots are counted with multiplicity; nonzero real roots are counted
    as DISTINCT roots by a Sturm chain, so the triple accounts for the whole
    spectrum only when the nonzero roots are simple.
    """
    coeffs = list(cp.monic_coeffs())
    zeros = 0
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
        zeros += 1
    if len(coeffs) == 1:
        return (0, zeros, 0)
    chain = _sturm_chain(coeffs)
    at_minus = _variations([_poly_eval_sign_at_inf(c, positive=False) for c in chain])
    at_plus = _variations([_poly_eval_sign_at_inf(c, positive=True) for c in chain])

    def sign_at_zero(c):
        return (c[-1] > 0) - (c[-1] < 0)

    at_zero = _variations([sign_at_zero(c) for c in chain])
    return (at_minus - at_zero, zeros, at_zero - at_plus)


# ---- constructive families ----

def _companion_first_column(target: CharPoly) -> RationalMatrix:
    n = len(target.e)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n):
        rows[i - 1][i] = Fraction(1)
    for i, ek in enumerate(target.e, start=1):
        rows[i - 1][0] = ek if i % 2 else -ek
    return RationalMatrix.from_rows(rows)


def an_family_witness(n: int, target_inertia: Sequence[int]) -> RationalMatrix:
    """Loop-chain witness for an ordinary inertia (a, b, z).

    Loops 1..n-1 carry distinct diagonal values, the corner entry shifts
    the characteristic polynomial by a constant.  With z >= 1 the matrix is
    triangular with the requested eigenvalue signs; with z = 0 the zero
    eigenvalue is pushed off the axis by a small corner value, verified
    exactly by Sturm root counting.
    """
    if n < 3:
        raise ValueError("loop-chain construction needs n >= 3")
    a, b, z = (int(x) for x in target_inertia)
    if min(a, b, z) < 0 or a + b + z != n:
        raise ValueError(f"inertia {target_inertia} does not fit order {n}")

    def build(diag: list[Fraction], corner: Fraction) -> RationalMatrix:
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i, v in enumerate(diag):
            rows[i][i] = v
        for i in range(n - 1):
            rows[i][i + 1] = Fraction(1)
        rows[n - 1][0] = corner
        return RationalMatrix.from_rows(rows)

    if z >= 1:
        diag = [Fraction(k) for k in range(1, a + 1)]
        diag += [Fraction(-k) for k in range(1, b + 1)]
        diag += [Fraction(0)] * (z - 1)
        return build(diag, Fraction(0))

    # z = 0: realize (a-1, b, 1) or (a, b-1, 1), then nudge the zero root
    push_positive = a >= 1 if b == 0 else (a >= b)
    if push_positive:
        diag = [Fraction(k) for k in range(1, a)] + [Fraction(-k) for k in range(1, b + 1)]
    else:
        diag = [Fraction(k) for k in range(1, a + 1)] + [Fraction(-k) for k in range(1, b)]
    base = build(diag, Fraction(0))
    base_cp = char_poly(base)
    # p(x) = f(x) - corner; a small corner of the right sign moves the zero
    # root off the origin without letting any other root cross
    eps = Fraction(1, 4)
    slope = base_cp.evaluate(Fraction(1, 10**6)) * 10**6  # sign of f'(0)
    corner_sign = 1 if (push_positive == (slope > 0)) else -1
    for _ in range(40):
        m = build(diag, Fraction(corner_sign) * eps)
        neg, zero, pos = real_root_split(char_poly(m))
        if zero == 0 and pos == a and neg == b:
            return m
        eps /= 2
    raise RuntimeError("corner shift failed to settle; widen the search")


# ---- path-pattern constructive witnesses ----

def _blocks_to_rows(n: int, placed: list[tuple[int, list[list[Fraction]]]]) -> list[list[Fraction]]:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for start, block in placed:
        k = len(block)
        for i in range(k):
            for j in range(k):
                rows[start - 1 + i][start - 1 + j] = block[i][j]
    return rows


def _pm_block(k: Fraction) -> list[list[Fraction]]:
    return [[Fraction(0), k * k], [Fraction(1), Fraction(0)]]  # eigen +k, -k


def _imag_block(w: Fraction) -> list[list[Fraction]]:
    return [[Fraction(0), -w * w], [Fraction(1), Fraction(0)]]  # eigen +/- wi


def _zero2_block() -> list[list[Fraction]]:
    return [[Fraction(0), Fraction(0)], [Fraction(1), Fraction(0)]]


def _loop_quadratic(p_: Fraction, q_: Fraction, loop_first: bool) -> list[list[Fraction]]:
    # char poly (x - p)(x - q); the loop entry may sit first or second
    s, t = p_ + q_, -(p_ * q_)
    if loop_first:
        return [[s, t], [Fraction(1), Fraction(0)]]
    return [[Fraction(0), t], [Fraction(1), s]]


def _path_layout(
    n: int, alpha: int, ri: RefinedInertia
) -> list[list[Fraction]] | None:
    a, b, c, d = ri.as_tuple()
    if b > a:
        neg = _path_layout(n, alpha, RefinedInertia(b, a, c, d))
        if neg is None:
            return None
        return [[-x for x in row] for row in neg]

    excess = a - b
    pm = min(a, b)
    im = d // 2
    balanced: list[list[list[Fraction]]] = []
    for k in range(1, pm + 1):
        balanced.append(_pm_block(Fraction(k)))
    for k in range(1, im + 1):
        balanced.append(_imag_block(Fraction(k)))
    # zeros travel as 1x1 blocks so they can fix any placement parity
    zero_singles = c

    def fill(segment_lengths: list[int]) -> list[list[list[Fraction]]] | None:
        """Distribute balanced 2x2 blocks and single zeros over segments."""
        blocks = list(balanced)
        zeros = zero_singles
        out: list[list[list[Fraction]]] = []
        for length in segment_lengths:
            seg: list[list[list[Fraction]]] = []
            need = length
            if need % 2:
                if zeros == 0:
                    return None
                seg.append([[Fraction(0)]])
                zeros -= 1
                need -= 1
            while need > 0:
                if blocks:
                    seg.append(blocks.pop())
                elif zeros >= 2:
                    seg.append(_zero2_block())
                    zeros -= 2
                else:
                    return None
                need -= 2
            out.append(seg)
        if blocks or zeros:
            # leftovers mean the bookkeeping above was wrong
            return None
        return out

    def assemble(core_start: int, core: list[list[Fraction]] | None) -> list[list[Fraction]] | None:
        span = len(core) if core is not None else 0
        left = core_start - 1
        right = n - left - span
        segs = fill([left, right])
        if segs is None:
            return None
        placed = []
        pos = 1
        for blk in segs[0]:
            placed.append((pos, blk))
            pos += len(blk)
        if core is not None:
            placed.append((pos, core))
            pos += span
        for blk in segs[1]:
            placed.append((pos, blk))
            pos += len(blk)
        return _blocks_to_rows(n, placed)

    if excess == 0:
        # no block needs the loop; treat the whole path as one segment
        segs = fill([n])
        if segs is None:
            return None
        placed = []
        pos = 1
        for blk in segs[0]:
            placed.append((pos, blk))
            pos += len(blk)
        return _blocks_to_rows(n, placed)

    if excess == 1:
        core = [[Fraction(3)]]
        got = assemble(alpha, core)
        if got is not None:
            return got
        # retry with a loop quadratic eating one zero, freeing parity
        if zero_singles >= 1 and n - alpha >= 1:
            zero_singles -= 1
            core2 = _loop_quadratic(Fraction(3), Fraction(0), loop_first=True)
            got = assemble(alpha, core2)
            if got is not None:
                return got
            core2 = _loop_quadratic(Fraction(3), Fraction(0), loop_first=False)
            got = assemble(alpha - 1, core2) if alpha >= 2 else None
            zero_singles += 1
            if got is not None:
                return got
        return None

    if excess == 2:
        for loop_first in (True, False):
            start = alpha if loop_first else alpha - 1
            if start < 1 or start + 1 > n:
                continue
            core = _loop_quadratic(Fraction(3), Fraction(4), loop_first)
            got = assemble(start, core)
            if got is not None:
                return got
        return None

    # excess >= 3: a one-sided segment certified by a nest-based scaling
    m = excess
    for start in range(max(1, alpha - m + 1), min(alpha, n - m + 1) + 1):
        beta = alpha - start + 1
        if m % 2 and beta % 2 == 0:
            continue  # that subpath has no properly signed nest
        seg = canonical_path_matrix(m, beta)
        stable = stable_scaling_from_nest(seg, valid_path_nest_ordering(m, beta))
        if stable is None:
            continue
        core = [
            [-stable.entry(i, j) for j in range(1, m + 1)] for i in range(1, m + 1)
        ]  # negated: all eigenvalues in Re > 0
        got = assemble(start, core)
        if got is not None:
            return got
    return None


def path_refined_witness(n: int, alpha: int, ri: RefinedInertia) -> RationalMatrix | None:
    """Constructive witness in Q(path with loop at alpha) for refined inertia ri.

    Block-diagonal assembly along the path: +/-k and imaginary 2x2 blocks,
    single zeros, a loop block for a small sign excess, and a nest-scaled
    one-sided segment when the excess runs deeper.  Mirrors the path when a
    layout only fits the reflected loop position.
    """
    validate_refined_target(ri, n)
    for mirrored in (False, True):
        al = alpha if not mirrored else n - alpha + 1
        rows = _path_layout(n, al, ri)
        if rows is None:
            continue
        m = RationalMatrix.from_rows(rows)
        if mirrored:
            m = m.relabel(list(range(n, 0, -1)))
        return m
    return None


# ---- generic engines ----

def _support_vars(p: ZeroPattern):
    arcs = sorted(p.support)
    syms = {arc: sympy.Symbol(f"t_{arc[0]}_{arc[1]}") for arc in arcs}
    return arcs, syms


def _symbolic_system(p: ZeroPattern, target: CharPoly):
    arcs, syms = _support_vars(p)
    eqs = []
    for k in range(1, p.n + 1):
        expr = sympy.Integer(0)
        for sign, cycle_arcs in symbolic_coefficient(p, k).terms:
            term = sympy.Integer(sign)
            for arc in cycle_arcs:
                term *= syms[arc]
            expr += term
        ek = target.e[k - 1]
        eqs.append(expr - sympy.Rational(ek.numerator, ek.denominator))
    return arcs, syms, eqs


def _spanning_tree_arcs(p: ZeroPattern) -> list[tuple[int, int]]:
    parent = list(range(p.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    for arc in sorted(p.support):
        i, j = arc
        if i == j:
            continue
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            tree.append(arc)
    return tree

_FREEZE_PALETTE = [Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2), Fraction(-2)]


def _solve_time_limit() -> float:
    try:
        return float(os.environ.get("PATTERNFORGE_EXACT_TIMEOUT", "1.0"))
    except ValueError:
        return 1.0


def _bounded(fn, seconds: float):
    """Run fn() under a wall-clock alarm; None on timeout.

    Groebner-based solving can stall on infeasible systems, and a realization
    search must stay a semi-decision: giving up is sound, hanging is not.
    Only usable from the main thread; elsewhere the call runs unbounded.
    """
    if seconds <= 0 or threading.current_thread() is not threading.main_thread():
        return fn()

    def handler(signum, frame):
        raise TimeoutError

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        return fn()
    except TimeoutError:
        return None
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _sequential_solve(
    eqs: list, unknowns: list, max_nodes: int = 400, max_sols: int = 4
) -> list[dict]:
    """Rational solutions of a polynomial system by elimination, depth first.

    Branches over rational roots of univariate equations and isolates
    linearly occurring variables, splitting on whether a nonconstant
    coefficient vanishes.  Deliberately incomplete: it only reports
    solutions it can pin down exactly, and the caller treats an empty
    answer as "not found" rather than "none exist".
    """
    sols: list[dict] = []
    nodes = 0

    def resolve(chain, base):
        vals = dict(base)
        for sym, expr in reversed(chain):
            v = sympy.cancel(expr.subs(vals))
            if not (isinstance(v, sympy.Rational) and not v.free_symbols):
                return None
            vals[sym] = v
        return vals

    def emit(chain, base, remaining):
        full = dict(base)
        for v in remaining:
            full[v] = sympy.Integer(0)
        got = resolve(chain, full)
        if got is not None:
            sols.append(got)

    def rec(cur_eqs, remaining, chain, base):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes or len(sols) >= max_sols:
            return
        cur = []
        for e in cur_eqs:
            e2 = sympy.expand(e)
            if e2 == 0:
                continue
            if e2.is_number:
                return  # contradiction on this branch
            cur.append(e2)
        if not cur:
            emit(chain, base, remaining)
            return

        for e in cur:
            vs = [v for v in remaining if e.has(v)]
            if len(vs) == 1:
                v = vs[0]
                try:
                    roots = sympy.roots(sympy.Poly(e, v))
                except sympy.PolynomialError:
                    continue
                rational = [
                    r
                    for r in roots
                    if isinstance(r, sympy.Rational) and not r.free_symbols
                ]
                # nonzero roots first: the zero-heavy solutions come out of
                # almost every plan, the structured ones only from a few
                rational.sort(key=lambda r: (r == 0, abs(r.p) + abs(r.q)))
                for r in rational:
                    rest = [q.subs(v, r) for q in cur if q is not e]
                    rec(rest, remaining - {v}, chain, {**base, v: r})
                return  # the equation's rational roots exhaust this variable

        for e in cur:
            if sympy.count_ops(e) > 120:
                continue
            fac = sympy.factor(e)
            parts = fac.args if fac.is_Mul else (fac,)
            factors = []
            for f in parts:
                if f.is_Pow:
                    f = f.base
                if f.free_symbols:
                    factors.append(f)
            if len(factors) >= 2:
                # a vanishing product is a clean disjunction; branch on the
                # bare-symbol factors last since those just zero an entry
                factors.sort(key=lambda f: f.is_Symbol)
                for f in factors:
                    rec([q for q in cur if q is not e] + [f], remaining, chain, base)
                return

        best = None
        for e in cur:
            for v in remaining:
                if sympy.degree(e, v) != 1:
                    continue
                c = sympy.expand(sympy.diff(e, v))
                r = sympy.expand(e - c * v)
                score = (0 if c.is_number else 1, sympy.count_ops(c) + sympy.count_ops(r))
                if best is None or score < best[0]:
                    best = (score, e, v, c, r)
        if best is None:
            return  # stuck: no univariate or linear handle
        _, e, v, c, r = best
        expr = -r / c
        subs_eqs = []
        for q in cur:
            if q is e:
                continue
            num, _den = sympy.fraction(sympy.together(sympy.cancel(q.subs(v, expr))))
            subs_eqs.append(sympy.expand(num))
        rec(subs_eqs, remaining - {v}, chain + [(v, expr)], base)
        if not c.is_number:
            # the vanishing-coefficient branch: c = 0 forces r = 0 as well
            rec([q for q in cur if q is not e] + [c, r], remaining, chain, base)

    rec(list(eqs), set(unknowns), [], {})
    return sols


def _assignment_matrix(
    p: ZeroPattern,
    arcs: list[tuple[int, int]],
    syms: dict,
    plan: dict,
    assign: dict,
    target: CharPoly,
) -> RationalMatrix | None:
    """Assemble and verify a matrix from frozen entries plus a solution."""
    values = dict(plan)
    for arc in arcs:
        if arc in plan:
            continue
        v = assign.get(syms[arc], sympy.Integer(0))
        if not isinstance(v, sympy.Rational) or v.free_symbols:
            return None
        values[arc] = Fraction(int(v.p), int(v.q))
    rows = [[Fraction(0)] * p.n for _ in range(p.n)]
    for (i, j), v in values.items():
        rows[i - 1][j - 1] = v
    m = RationalMatrix.from_rows(rows)
    return m if char_poly(m) == target else None


def _plan_solutions(
    p: ZeroPattern,
    arcs: list[tuple[int, int]],
    syms: dict,
    eqs: list,
    target: CharPoly,
    plan: dict,
    limit: float,
    max_sols: int = 4,
):
    """All verified matrices a freeze plan yields, sequential engine first."""
    sub = {
        syms[arc]: sympy.Rational(v.numerator, v.denominator)
        for arc, v in plan.items()
    }
    sys_eqs = [sympy.expand(e.subs(sub)) for e in eqs]
    unknowns = [syms[a] for a in arcs if a not in plan]

    for assign in _sequential_solve(sys_eqs, unknowns, max_sols=max_sols):
        m = _assignment_matrix(p, arcs, syms, plan, assign, target)
        if m is not None:
            yield m
    try:
        sols = _bounded(lambda: sympy.solve(sys_eqs, unknowns, dict=True), limit)
    except Exception:
        return
    for sol in sols or ():
        m = _assignment_matrix(p, arcs, syms, plan, sol, target)
        if m is not None:
            yield m


def _solve_with_plan(
    p: ZeroPattern,
    arcs: list[tuple[int, int]],
    syms: dict,
    eqs: list,
    target: CharPoly,
    plan: dict,
    limit: float,
) -> RationalMatrix | None:
    for m in _plan_solutions(p, arcs, syms, eqs, target, plan, limit):
        return m
    return None


def _freeze_order(p: ZeroPattern, arcs: list[tuple[int, int]]) -> list[tuple[int, int]]:
    # spanning-tree arcs are pure gauge (diagonal similarity), so freezing
    # them costs nothing; loops go last since they carry the trace
    tree = _spanning_tree_arcs(p)
    off = [a for a in arcs if a[0] != a[1] and a not in tree]
    loops = [a for a in arcs if a[0] == a[1]]
    return tree + off + loops


def _exact_solve(
    p: ZeroPattern, target: CharPoly, seed: int, attempts: int
) -> RationalMatrix | None:
    """Freeze surplus entries, solve the square system exactly, verify."""
    arcs, syms, eqs = _symbolic_system(p, target)
    surplus = len(arcs) - p.n
    rng = random.Random(seed * 7919 + 13)
    ordered = _freeze_order(p, arcs)

    freeze_plans: list[dict] = []
    if surplus <= 0:
        freeze_plans.append({})
    else:
        freeze_plans.append({arc: Fraction(1) for arc in ordered[:surplus]})
        for _ in range(max(0, attempts - 1)):
            chosen = rng.sample(ordered[: max(surplus + 2, len(ordered) - 1)], surplus)
            freeze_plans.append({arc: rng.choice(_FREEZE_PALETTE) for arc in chosen})

    limit = _solve_time_limit()
    for plan in freeze_plans[:attempts]:
        m = _solve_with_plan(p, arcs, syms, eqs, target, plan, limit)
        if m is not None:
            return m
    return None


def _newton_solve(
    p: ZeroPattern, target: CharPoly, seed: int, starts: int
) -> RationalMatrix | None:
    """Multi-start damped Gauss-Newton, then recover an exact witness.

    Each converged point is first rationalized wholesale; failing that, the
    surplus entries are frozen at small-denominator snaps of the numeric
    values and the remaining square system is solved exactly.
    """
    import numpy as np

    arcs = sorted(p.support)
    index = {arc: i for i, arc in enumerate(arcs)}
    terms_by_k = []
    for k in range(1, p.n + 1):
        terms = [
            (sign, [index[a] for a in cycle_arcs])
            for sign, cycle_arcs in symbolic_coefficient(p, k).terms
        ]
        terms_by_k.append(terms)
    goal = np.array([float(e) for e in target.e])

    def residual(t):
        out = np.empty(p.n)
        for k, terms in enumerate(terms_by_k):
            acc = 0.0
            for sign, idxs in terms:
                prod = float(sign)
                for i in idxs:
                    prod *= t[i]
                acc += prod
            out[k] = acc - goal[k]
        return out

    def jacobian(t):
        jac = np.zeros((p.n, len(arcs)))
        for k, terms in enumerate(terms_by_k):
            for sign, idxs in terms:
                for pos, i in enumerate(idxs):
                    prod = float(sign)
                    for q, jdx in enumerate(idxs):
                        if q != pos:
                            prod *= t[jdx]
                    jac[k, i] += prod
        return jac

    symbolic = None
    guided_left = 3
    freeze_arcs = _freeze_order(p, arcs)[: max(0, len(arcs) - p.n)]
    limit = _solve_time_limit()
    rng = random.Random(seed * 104729 + 7)
    for _ in range(starts):
        t = np.array(
            [rng.choice([-1, 1]) * rng.uniform(0.3, 3.0) for _ in arcs]
        )
        f = residual(t)
        for _ in range(120):
            nrm = float(np.linalg.norm(f))
            if nrm < 1e-13:
                break
            step, *_ = np.linalg.lstsq(jacobian(t), -f, rcond=None)
            lam = 1.0
            improved = False
            for _ in range(30):
                cand = t + lam * step
                fc = residual(cand)
                if float(np.linalg.norm(fc)) < nrm:
                    t, f, improved = cand, fc, True
                    break
                lam /= 2
            if not improved:
                break
        if float(np.linalg.norm(f)) >= 1e-12:
            continue
        rows = [[Fraction(0)] * p.n for _ in range(p.n)]
        for arc, i in index.items():
            rows[arc[0] - 1][arc[1] - 1] = Fraction(t[i]).limit_denominator(10**6)
        m = RationalMatrix.from_rows(rows)
        if char_poly(m) == target:
            return m
        if guided_left > 0 and freeze_arcs:
            guided_left -= 1
            if symbolic is None:
                symbolic = _symbolic_system(p, target)
            sarcs, syms, eqs = symbolic
            for den in (1, 4, 12):
                plan = {
                    arc: Fraction(t[index[arc]]).limit_denominator(den)
                    for arc in freeze_arcs
                }
                got = _solve_with_plan(p, sarcs, syms, eqs, target, plan, limit)
                if got is not None:
                    return got
    return None


def realize_charpoly(
    p: ZeroPattern,
    target: CharPoly,
    budget: int = 64,
    seed: int = 0,
    spec: TargetSpectrum | None = None,
) -> RealizationWitness | None:
    """Exact matrix in Q(p) with the given characteristic polynomial, or None.

    Semi-decision: None only means no witness was found within budget.
    Structural impossibilities (a needed coefficient with no composite
    cycle behind it) return None immediately.
    """
    if len(target.e) != p.n:
        raise ValueError("target degree differs from pattern order")
    for k in range(1, p.n + 1):
        if target.e[k - 1] != 0 and symbolic_coefficient(p, k).is_zero():
            return None
    if all(e == 0 for e in target.e):
        return _verified(p, RationalMatrix.zero(p.n), target, spec, "construction")
    if p.n <= 6 and p.num_nonzero == 2 * p.n - 1:
        if canonicalize(p).pattern == canonicalize(companion_pattern(p.n)).pattern:
            comp = _companion_first_column(target)
            moved = transport_matrix(comp, companion_pattern(p.n), p)
            if moved is not None:
                w = _verified(p, moved, target, spec, "construction")
                if w is not None:
                    return w
    got = _exact_solve(p, target, seed, attempts=max(2, budget // 16))
    if got is not None:
        w = _verified(p, got, target, spec, "exact")
        if w is not None:
            return w
    got = _newton_solve(p, target, seed, starts=budget)
    if got is not None:
        w = _verified(p, got, target, spec, "newton")
        if w is not None:
            return w
    return None


def _detect_path(p: ZeroPattern) -> tuple[int, int] | None:
    for alpha in range(1, p.n + 1):
        if p.support == path_pattern(p.n, alpha).support:
            return (p.n, alpha)
    return None


def _fraction_eval(expr, env: dict) -> Fraction | None:
    """Exact value of a sympy expression tree over Fraction assignments.

    None signals an undefined point (zero denominator); sympy's subs is two
    orders of magnitude too slow for the sampling loops that call this.
    """
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    if expr.is_Symbol:
        return env[expr]
    if expr.is_Add:
        total = Fraction(0)
        for arg in expr.args:
            v = _fraction_eval(arg, env)
            if v is None:
                return None
            total += v
        return total
    if expr.is_Mul:
        prod = Fraction(1)
        for arg in expr.args:
            v = _fraction_eval(arg, env)
            if v is None:
                return None
            prod *= v
        return prod
    if expr.is_Pow and expr.exp.is_Integer:
        base = _fraction_eval(expr.base, env)
        if base is None or (base == 0 and expr.exp < 0):
            return None
        return base ** int(expr.exp)
    return None


_SAMPLE_PALETTE = [
    Fraction(v)
    for v in (1, -1, 2, -2, 3, -3, 5, -5, 4, -4, 7, -7)
] + [
    Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2), Fraction(-3, 2),
    Fraction(1, 3), Fraction(-1, 3), Fraction(5, 2), Fraction(-5, 2),
]


def _even_part_all_negative_roots(evens: list[Fraction]) -> bool:
    """Does t^m + evens[0]*t^(m-1) + ... + evens[-1] have m real negative roots?

    All-positive coefficients rule out nonnegative roots, so it is enough to
    count real roots.  Counting is exact; multiple roots only arise in the
    m = 2 discriminant-zero case, which is handled explicitly.
    """
    if any(e <= 0 for e in evens):
        return False
    m = len(evens)
    if m == 1:
        return True
    if m == 2:
        return evens[0] * evens[0] - 4 * evens[1] >= 0
    coeffs = [Fraction(1)] + list(evens)
    chain = _sturm_chain(coeffs)
    at_minus = _variations([_poly_eval_sign_at_inf(c, positive=False) for c in chain])
    at_plus = _variations([_poly_eval_sign_at_inf(c, positive=True) for c in chain])
    return at_minus - at_plus == m


def _even_spectrum_witness(
    p: ZeroPattern,
    ri: RefinedInertia,
    seed: int = 0,
    samples: int = 3000,
) -> RealizationWitness | None:
    """Search the odd-coefficient variety for a (0, 0, z, 2m) witness.

    Fixed factored targets miss patterns whose imaginary pairs must have
    irrational magnitudes, so instead of prescribing the polynomial this
    solves the vanishing constraints symbolically and lets the pattern pick
    its own even coefficients: sample the free entries, check the even-part
    root conditions exactly, and verify the classified refined inertia.
    """
    if ri.n_plus or ri.n_minus or ri.n_imag < 2:
        return None
    from .obstructions import _coefficient_exprs, _real_branches

    n = p.n
    m = ri.n_imag // 2
    exprs = _coefficient_exprs(p)
    eqs = [exprs[j] for j in range(0, n, 2) if exprs[j] != 0]
    eqs += [exprs[j - 1] for j in range(2 * m + 2, n + 1, 2) if exprs[j - 1] != 0]
    if any(exprs[2 * i - 1] == 0 for i in range(1, m + 1)):
        return None  # a needed even coefficient is identically zero
    branches = _real_branches(eqs)
    if not branches:
        return None

    syms = {arc: sympy.Symbol(f"a_{arc[0]}_{arc[1]}") for arc in sorted(p.support)}
    allsyms = set(syms.values())
    rng = random.Random(f"{seed}|evenspec|{n}|{sorted(p.support)}")
    per_branch = max(1, samples // len(branches))
    for branch in branches:
        bound = [s for s, _v in branch]
        free = sorted(allsyms - set(bound), key=lambda s: s.name)
        needed = []
        ok = True
        for i in range(1, m + 1):
            cur = exprs[2 * i - 1]
            for s, v in branch:
                cur = cur.subs(s, v)
            cur = sympy.together(cur)
            if cur == 0:
                ok = False
                break
            needed.append(cur)
        if not ok:
            continue
        for _trial in range(per_branch):
            env = {s: rng.choice(_SAMPLE_PALETTE) for s in free}
            evens = []
            for e in needed:
                v = _fraction_eval(e, env)
                if v is None or v <= 0:
                    evens = None
                    break
                evens.append(v)
            if evens is None or not _even_part_all_negative_roots(evens):
                continue
            # back-substitute the eliminated entries, latest first
            full = dict(env)
            defined = True
            for s, v in reversed(branch):
                val = _fraction_eval(v, full)
                if val is None:
                    defined = False
                    break
                full[s] = val
            if not defined:
                continue
            rows = [
                [
                    full.get(syms.get((i, j)), Fraction(0))
                    if (i, j) in p.support else Fraction(0)
                    for j in range(1, n + 1)
                ]
                for i in range(1, n + 1)
            ]
            mat = RationalMatrix.from_rows(rows)
            reading = refined_inertia_of(mat)
            if reading.fragile or reading.refined != ri:
                continue
            return RealizationWitness(mat, char_poly(mat), None, ri, "probe")
    return None


def realize_refined_inertia(
    p: ZeroPattern,
    ri: RefinedInertia,
    budget: int = 64,
    seed: int = 0,
    styles: int = 4,
) -> RealizationWitness | None:
    """Witness in Q(p) whose refined inertia is exactly ri, or None.

    Constructive shortcuts (paths, loop chains, all-loop diagonals) run
    first; otherwise factored targets from several seeds feed the
    characteristic polynomial engine, with the negated reversal tried last.
    """
    validate_refined_target(ri, p.n)

    loc = _detect_path(p)
    if loc is not None:
        m = path_refined_witness(loc[0], loc[1], ri)
        if m is not None:
            return RealizationWitness(m, char_poly(m), None, ri, "construction")

    if ri.n_imag == 0 and all((v, v) in p.support for v in range(1, p.n + 1)):
        diag = [Fraction(k) for k in range(1, ri.n_plus + 1)]
        diag += [Fraction(-k) for k in range(1, ri.n_minus + 1)]
        diag += [Fraction(0)] * ri.n_zero
        rows = [
            [diag[i] if i == j else Fraction(0) for j in range(p.n)]
            for i in range(p.n)
        ]
        m = RationalMatrix.from_rows(rows)
        return RealizationWitness(m, char_poly(m), None, ri, "construction")

    if (
        ri.n_imag == 0
        and p.n >= 3
        and p.support == loop_chain_pattern(p.n).support
    ):
        m = an_family_witness(p.n, (ri.n_plus, ri.n_minus, ri.n_zero))
        return RealizationWitness(m, char_poly(m), None, ri, "construction")

    for style in range(styles):
        spec = target_poly_for(ri, seed=seed + style)
        w = realize_charpoly(p, spec.char_poly(), budget=budget, seed=seed + style, spec=spec)
        if w is not None:
            return w
    if ri.n_plus == 0 and ri.n_minus == 0 and ri.n_imag >= 2:
        # rational-magnitude targets can all miss when the pattern only
        # supports irrational imaginary pairs; probe the variety directly
        w = _even_spectrum_witness(p, ri, seed=seed, samples=48 * budget)
        if w is not None:
            return w
    rev = ri.reversal()
    if rev != ri:
        for style in range(styles):
            spec = target_poly_for(rev, seed=seed + style)
            w = realize_charpoly(p, spec.char_poly(), budget=budget, seed=seed + style, spec=spec)
            if w is not None:
                neg = w.matrix.scale(-1)
                negspec = TargetSpectrum(
                    tuple(_negate_factor(f) for f in spec.factors)
                )
                return RealizationWitness(neg, char_poly(neg), negspec, ri, "negation")
    return None


def _negate_factor(f: tuple) -> tuple:
    if f[0] == "real":
        return ("real", -f[1])
    if f[0] == "complex":
        return ("complex", -f[1], f[2])
    return f


def survey(
    p: ZeroPattern, budget: int = 64, seed: int = 0, styles: int = 4
) -> dict[RefinedInertia, RealizationWitness | None]:
    """Attempt every even-imaginary refined inertia of order p.n.

    Reversal closure is exploited: each unordered pair {ri, reversal} is
    searched once and the partner witness is the negation.
    """
    out: dict[RefinedInertia, RealizationWitness | None] = {}
    for ri in refined_inertia_targets(p.n):
        if ri in out:
            continue
        rev = ri.reversal()
        rep = ri if ri.n_plus >= ri.n_minus else rev
        w = realize_refined_inertia(p, rep, budget=budget, seed=seed, styles=styles)
        if w is None:
            out[rep] = None
            if rev != ri:
                out[rep.reversal()] = None
            continue
        out[rep] = w
        if rev != ri:
            neg = w.matrix.scale(-1)
            negspec = (
                None
                if w.target is None
                else TargetSpectrum(tuple(_negate_factor(f) for f in w.target.factors))
            )
            out[rep.reversal()] = RealizationWitness(
                neg, char_poly(neg), negspec, rep.reversal(), "negation"
            )
    return out
