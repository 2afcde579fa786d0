"""Structural reasons a pattern cannot have an eigenvalue property.

Each check inspects the digraph or the symbolic coefficients of a pattern
and, when it fires, returns a certificate naming the property it refutes
and why.  All checks are sound: a returned obstruction is a proof, while
None never proves anything.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import sympy

from .patterns import (
    ZeroPattern,
    composite_cycle_lengths,
    has_proper_two_cycle,
    is_irreducible,
    transversals,
)
from .spectra import RefinedInertia, symbolic_coefficient

KIND_MISSING_K_CYCLE = "missing_composite_k_cycle"
KIND_NO_PROPER_2_CYCLE = "no_proper_2_cycle"
KIND_NO_TRANSVERSAL = "no_nonzero_transversal"
KIND_LOOP_FORCED_DET = "loop_forced_determinant"
KIND_ENTRY_COUNT = "entry_count_bound"


@dataclass(frozen=True)
class Obstruction:
    """A structural certificate refuting SAP, RIAP, IAP, or specific targets.

    refutes names the strongest class-level property refuted; the hierarchy
    SAP => RIAP => IAP is applied by the refutes_* properties, so e.g. an
    IAP refutation also refutes RIAP and SAP.
    """

    kind: str
    refutes: str  # "IAP" | "RIAP" | "SAP" | "refined_inertia"
    citation: str
    k: int | None = None
    targets: tuple[tuple[int, int, int, int], ...] = field(default=())

    @property
    def refutes_iap(self) -> bool:
        return self.refutes == "IAP"

    @property
    def refutes_riap(self) -> bool:
        return self.refutes in {"IAP", "RIAP", "refined_inertia"}

    @property
    def refutes_sap(self) -> bool:
        return True  # every obstruction here blocks some spectrum

    def refutes_refined(self, target: RefinedInertia, n: int) -> bool:
        """Does this obstruction prove the refined inertia target unreachable?"""
        t = target
        if self.kind == KIND_MISSING_K_CYCLE:
            # all-roots-in-one-open-half-plane forces every coefficient nonzero
            if t.n_plus == n or t.n_minus == n:
                return True
            if self.k == n and t.n_zero == 0:
                return True  # nonzero spectrum needs a nonzero determinant
            if self.k == 1 and (t.n_plus > 0) != (t.n_minus > 0):
                return True  # one-sided real parts force a nonzero trace
            return False
        if self.kind == KIND_NO_PROPER_2_CYCLE:
            return t.n_plus == 0 and t.n_minus == 0 and t.n_imag >= 2
        if self.kind == KIND_NO_TRANSVERSAL:
            return t.n_zero == 0
        if self.kind == KIND_LOOP_FORCED_DET:
            return t.as_tuple() in self.targets
        return False

    def as_json_obj(self) -> dict:
        obj = {"kind": self.kind, "refutes": self.refutes, "citation": self.citation}
        if self.k is not None:
            obj["k"] = self.k
        if self.targets:
            obj["targets"] = [list(t) for t in self.targets]
        return obj


def check_kcycle_obstruction(p: ZeroPattern) -> Obstruction | None:
    """Smallest k in 1..n with no composite k-cycle, if any; refutes IAP.

    A matrix with inertia (0,n,0) has a characteristic polynomial with all
    coefficients positive, so every coefficient must be structurally
    attainable.
    """
    lengths = composite_cycle_lengths(p)
    for k in range(1, p.n + 1):
        if k not in lengths:
            return Obstruction(
                kind=KIND_MISSING_K_CYCLE,
                refutes="IAP",
                k=k,
                citation=(
                    f"no composite {k}-cycle: coefficient E_{k} is identically "
                    f"zero, but inertia (0,{p.n},0) needs every coefficient "
                    "of the characteristic polynomial positive"
                ),
            )
    return None


def _imaginary_heavy_targets(n: int) -> tuple[tuple[int, int, int, int], ...]:
    return tuple(
        (0, 0, n - b, b) for b in range(2, n + 1, 2)
    )


def check_2cycle_obstruction(p: ZeroPattern) -> Obstruction | None:
    """No proper 2-cycle refutes every refined inertia (0,0,a,b) with b >= 2.

    Such a spectrum has trace zero and E_2 > 0, but without proper 2-cycles
    2*E_2 = (tr A)^2 - sum(a_kk^2) = -sum(a_kk^2) <= 0.
    """
    if p.n < 2 or has_proper_two_cycle(p):
        return None
    return Obstruction(
        kind=KIND_NO_PROPER_2_CYCLE,
        refutes="refined_inertia",
        targets=_imaginary_heavy_targets(p.n),
        citation=(
            "no proper 2-cycle: with trace 0, 2*E_2 = -sum(a_kk^2) <= 0, so "
            "refined inertias (0,0,a,b) with b >= 2 (which force E_2 > 0) "
            "are unreachable; refined inertial arbitrariness fails"
        ),
    )


def check_transversal_obstruction(p: ZeroPattern) -> Obstruction | None:
    """No composite n-cycle: determinant is identically zero; refutes IAP."""
    if transversals(p):
        return None
    return Obstruction(
        kind=KIND_NO_TRANSVERSAL,
        refutes="IAP",
        citation=(
            "no nonzero transversal: every realization is singular, so "
            f"inertia ({p.n},0,0) and every all-nonzero spectrum are "
            "unreachable"
        ),
    )


def check_loop_forced_determinant(p: ZeroPattern) -> Obstruction | None:
    """Single loop lying on every transversal: trace 0 forces det 0.

    Refutes the refined inertia (0,0,0,n), which needs trace zero and
    determinant prod(beta_j^2) > 0.  That target only exists for even n;
    for odd n the rule proves nothing about refined inertial arbitrariness
    (the all-imaginary target is vacuous), so the check stays silent.
    """
    if p.n % 2:
        return None
    loops = [v for v in range(1, p.n + 1) if (v, v) in p.support]
    if len(loops) != 1:
        return None
    trans = transversals(p)
    if not trans:
        return None  # covered by the transversal obstruction
    loop_arc = (loops[0], loops[0])
    if not all(loop_arc in c.arcs() for c in trans):
        return None
    return Obstruction(
        kind=KIND_LOOP_FORCED_DET,
        refutes="refined_inertia",
        targets=((0, 0, 0, p.n),),
        citation=(
            f"the single loop at vertex {loops[0]} lies on every transversal: "
            "trace 0 zeroes the loop entry and with it the determinant, but "
            f"refined inertia (0,0,0,{p.n}) needs trace 0 and det > 0"
        ),
    )


def check_entry_count(p: ZeroPattern) -> Obstruction | None:
    """Minimum free-entry counts for irreducible patterns of orders 3 and 4."""
    if not is_irreducible(p):
        raise ValueError("entry-count bounds are stated for irreducible patterns")
    if p.n == 3 and p.num_nonzero < 5:
        return Obstruction(
            kind=KIND_ENTRY_COUNT,
            refutes="IAP",
            citation=(
                f"irreducible order-3 pattern with {p.num_nonzero} < 5 free "
                "entries cannot be inertially arbitrary"
            ),
        )
    if p.n == 4 and p.num_nonzero < 7:
        return Obstruction(
            kind=KIND_ENTRY_COUNT,
            refutes="RIAP",
            citation=(
                f"irreducible order-4 pattern with {p.num_nonzero} < 7 free "
                "entries cannot be refined inertially arbitrary"
            ),
        )
    return None


def run_all_obstructions(p: ZeroPattern) -> tuple[Obstruction, ...]:
    """All structural obstructions, deduplicated, in a fixed order.

    A missing n-cycle is reported as the transversal obstruction only.  The
    entry-count check is skipped for reducible patterns (its bounds are
    stated for irreducible ones).
    """
    out = []
    kc = check_kcycle_obstruction(p)
    if kc is not None and kc.k != p.n:
        out.append(kc)
    two = check_2cycle_obstruction(p)
    if two is not None:
        out.append(two)
    tr = check_transversal_obstruction(p)
    if tr is not None:
        out.append(tr)
    loop = check_loop_forced_determinant(p)
    if loop is not None:
        out.append(loop)
    if is_irreducible(p):
        count = check_entry_count(p)
        if count is not None:
            out.append(count)
    return tuple(out)


# ---- algebraic certificates over the symbolic coefficients ----

@dataclass(frozen=True)
class AlgebraicCertificate:
    """A verified polynomial identity among coefficients, with its consequences.

    kind "coefficient_dependence": E_member lies in the ideal generated by
    lower coefficients, so no realization can zero the basis while keeping
    E_member nonzero; this blocks the characteristic polynomial
    x^n + (-1)^member * c * x^(n-member) for c != 0 and refutes SAP.  When
    member = n and the basis holds only odd indices, it also blocks the
    all-imaginary refined inertia (0,0,0,n) and refutes RIAP.

    kind "three_cycle_factorization": E_3 = E_1 * E_2 identically.  Any
    spectrum of an order-4 matrix with inertia (2,0,2) has E_1 = s > 0,
    E_3 = s*q with q > 0 coming from either refined reading, while the
    identity forces E_3 = s * E_2 with E_2 accounting for the imaginary
    pair too; both refined forms (2,0,2,0) and (2,0,0,2) collapse to s*q = 0,
    a contradiction, so inertia (2,0,2) and its reversal are unreachable
    and IAP fails.
    """

    kind: str
    member: int
    basis: tuple[int, ...]
    refutes: str
    citation: str
    targets: tuple[tuple[int, int, int, int], ...] = field(default=())

    def refutes_refined(self, target: RefinedInertia, n: int) -> bool:
        return target.as_tuple() in self.targets

    @property
    def refutes_iap(self) -> bool:
        return self.refutes == "IAP"

    @property
    def refutes_riap(self) -> bool:
        return self.refutes in {"IAP", "RIAP"}

    def as_json_obj(self) -> dict:
        return {
            "kind": self.kind,
            "member": self.member,
            "basis": list(self.basis),
            "refutes": self.refutes,
            "citation": self.citation,
            "targets": [list(t) for t in self.targets],
        }


@lru_cache(maxsize=4096)
def _coefficient_exprs(p: ZeroPattern) -> tuple:
    syms = {arc: sympy.Symbol(f"a_{arc[0]}_{arc[1]}") for arc in sorted(p.support)}
    exprs = []
    for k in range(1, p.n + 1):
        total = sympy.Integer(0)
        for sign, arcs in symbolic_coefficient(p, k).terms:
            term = sympy.Integer(sign)
            for arc in arcs:
                term *= syms[arc]
            total += term
        exprs.append(sympy.expand(total))
    return tuple(exprs)


def _in_ideal(member, basis, gens) -> bool:
    nonzero = [b for b in basis if b != 0]
    if member == 0:
        return True
    if not nonzero:
        return False
    gb = sympy.groebner(nonzero, *gens, order="grevlex")
    return gb.reduce(member)[1] == 0


def find_coefficient_dependences(p: ZeroPattern) -> tuple[AlgebraicCertificate, ...]:
    """Ideal-membership battery over the symbolic coefficients E_1..E_n.

    For each k, tests E_k in <E_1,...,E_{k-1}>; each hit refutes SAP.  For
    even n additionally tests E_n in <odd-index coefficients>, which refutes
    the refined inertia (0,0,0,n) and with it RIAP.
    """
    exprs = _coefficient_exprs(p)
    gens = sorted(
        {s for e in exprs for s in e.free_symbols}, key=lambda s: s.name
    )
    if not gens:
        return ()
    out = []
    for k in range(2, p.n + 1):
        if exprs[k - 1] == 0:
            continue  # a missing cycle length; the k-cycle check owns that
        basis = exprs[: k - 1]
        if _in_ideal(exprs[k - 1], basis, gens):
            idx = tuple(j for j in range(1, k) if exprs[j - 1] != 0)
            out.append(
                AlgebraicCertificate(
                    kind="coefficient_dependence",
                    member=k,
                    basis=idx,
                    refutes="SAP",
                    citation=(
                        f"E_{k} lies in the ideal generated by "
                        f"{', '.join(f'E_{j}' for j in idx)}: zeroing those "
                        f"coefficients forces E_{k} = 0, so the characteristic "
                        f"polynomial x^{p.n} "
                        f"{'-' if k % 2 else '+'} c*x^{p.n - k} (c != 0) is "
                        "unreachable"
                    ),
                )
            )
    n = p.n
    if n % 2 == 0 and exprs[n - 1] != 0:
        odd = [exprs[j - 1] for j in range(1, n + 1, 2)]
        if _in_ideal(exprs[n - 1], odd, gens):
            idx = tuple(j for j in range(1, n + 1, 2) if exprs[j - 1] != 0)
            out.append(
                AlgebraicCertificate(
                    kind="coefficient_dependence",
                    member=n,
                    basis=idx,
                    refutes="RIAP",
                    targets=((0, 0, 0, n),),
                    citation=(
                        f"E_{n} lies in the ideal generated by the odd "
                        f"coefficients {', '.join(f'E_{j}' for j in idx)}: an "
                        "all-imaginary spectrum zeroes every odd coefficient "
                        f"yet needs E_{n} > 0, so refined inertia (0,0,0,{n}) "
                        "is unreachable"
                    ),
                )
            )
    return tuple(out)


def check_three_cycle_factorization(p: ZeroPattern) -> AlgebraicCertificate | None:
    """E_3 = E_1 * E_2 as polynomials (order 4): inertia (2,0,2) is unreachable."""
    if p.n != 4:
        return None
    e1, e2, e3, _ = _coefficient_exprs(p)
    if e1 == 0 or e3 == 0:
        return None
    if sympy.expand(e3 - e1 * e2) != 0:
        return None
    targets = ((2, 0, 2, 0), (2, 0, 0, 2), (0, 2, 2, 0), (0, 2, 0, 2))
    return AlgebraicCertificate(
        kind="three_cycle_factorization",
        member=3,
        basis=(1, 2),
        refutes="IAP",
        targets=targets,
        citation=(
            "E_3 = E_1 * E_2 identically: any matrix with inertia (2,0,2) "
            "or (0,2,2) would need E_3 = E_1 * q with q the product term of "
            "its two open-half-plane eigenvalues, forcing q = 0; both "
            "refined readings are contradictory, so IAP fails"
        ),
    )


# ---- sign analysis on coefficient varieties ----
#
# The ideal battery above only sees forced vanishing.  Several refutations
# need forced *signs*: "zeroing the other coefficients leaves E_4 = c^4" and
# the like.  The helpers below decompose the real zero set of a coefficient
# system into finitely many substitution branches (or give up), then read
# manifest signs off each branch.  Giving up is always safe: no certificate
# is produced.


class _GiveUp(Exception):
    pass


def _term_sign(e) -> int | None:
    """Sign of e provable monomial-by-monomial: every exponent even, one sign."""
    syms = sorted(e.free_symbols, key=lambda s: s.name)
    try:
        poly = sympy.Poly(e, *syms)
    except sympy.PolynomialError:
        return None
    signs = set()
    for monom, coeff in poly.terms():
        if any(m % 2 for m in monom):
            return None
        signs.add(1 if coeff > 0 else -1)
    return signs.pop() if len(signs) == 1 else None


def _factor_sign(e) -> int | None:
    if e.is_number:
        if e == 0:
            return 0
        return 1 if e > 0 else -1
    if e.is_Symbol:
        return None
    if e.is_Pow and e.exp.is_Integer:
        return 1 if e.exp % 2 == 0 else _factor_sign(e.base)
    if e.is_Mul:
        s = 1
        for arg in e.args:
            sa = _factor_sign(arg)
            if sa is None:
                sa = _term_sign(sympy.expand(arg))
            if sa is None:
                return None
            if sa == 0:
                return 0
            s *= sa
        return s
    if e.is_Add:
        return _term_sign(sympy.expand(e))
    return None


def _manifest_sign(e) -> int | None:
    """1 if e >= 0 everywhere, -1 if e <= 0, 0 if identically zero, else None."""
    e = sympy.expand(e)
    if e == 0:
        return 0
    if e.is_number:
        return 1 if e > 0 else -1
    s = _term_sign(e)
    if s is not None:
        return s
    return _factor_sign(sympy.factor(e))


def _numer(e):
    num, _den = sympy.fraction(sympy.together(sympy.expand(e)))
    return sympy.expand(num)


def _sign_on_branch(expr, branch) -> int | None:
    """Manifest sign of expr after the branch substitutions.

    Substitutions may introduce denominators; on the branch domain they are
    nonzero, so sign(num/den) = sign(num * den) pointwise.
    """
    cur = expr
    for sym, val in branch:
        cur = cur.subs(sym, val)
    num, den = sympy.fraction(sympy.together(sympy.expand(cur)))
    return _manifest_sign(sympy.expand(num * den))


def _real_branches(eqs, limit: int = 800):
    """Cover the real solutions of a polynomial system by substitution branches.

    Returns a list of branches, each an ordered substitution list
    [(symbol, value), ...], such that every real solution of eqs satisfies
    the substitutions of at least one branch (branches may overcover).
    Returns None when the system resists the complete rules; callers must
    then draw no conclusion.
    """
    out: list[list] = []
    budget = [limit]

    def rec(current, subs):
        if budget[0] <= 0:
            raise _GiveUp
        budget[0] -= 1
        cur = []
        for e in current:
            e = _numer(e)
            if e.is_number:
                if e != 0:
                    return  # contradictory equation: empty branch
                continue
            cur.append(e)
        if not cur:
            out.append(subs)
            return
        # a semidefinite equation with a nonzero constant term has no zeros
        for e in cur:
            if _manifest_sign(e) in (1, -1) and e.as_coeff_Add()[0] != 0:
                return
        # linear in some variable with a rational coefficient: eliminate
        for e in cur:
            for x in sorted(e.free_symbols, key=lambda s: s.name):
                poly = sympy.Poly(e, x)
                if poly.degree() != 1:
                    continue
                g = poly.coeff_monomial(x)
                if g.free_symbols:
                    continue
                val = sympy.cancel(-poly.nth(0) / g)
                rec([q.subs(x, val) for q in cur if q is not e],
                    subs + [(x, val)])
                return
        # semidefinite sum of even monomials: zero iff every monomial is zero
        for e in cur:
            if _term_sign(e) in (1, -1) and e.as_coeff_Add()[0] == 0:
                syms = sorted(e.free_symbols, key=lambda s: s.name)
                poly = sympy.Poly(e, *syms)
                choices = [
                    [g for g, m in zip(poly.gens, monom) if m > 0]
                    for monom, _c in poly.terms()
                ]
                seen: set[frozenset] = set()

                def walk(i, zeroed):
                    if i == len(choices):
                        if zeroed in seen:
                            return
                        seen.add(zeroed)
                        rest = [q for q in cur if q is not e]
                        for z in zeroed:
                            rest = [q.subs(z, 0) for q in rest]
                        rec(rest, subs + [
                            (z, sympy.Integer(0))
                            for z in sorted(zeroed, key=lambda s: s.name)
                        ])
                        return
                    if any(v in zeroed for v in choices[i]):
                        walk(i + 1, zeroed)
                        return
                    for v in choices[i]:
                        walk(i + 1, zeroed | {v})

                walk(0, frozenset())
                return
        # product: the zero set is the union over factors
        for e in cur:
            fac = sympy.factor(e)
            parts = fac.args if fac.is_Mul else (fac,)
            factors = []
            for f in parts:
                if f.is_Pow:
                    f = f.base
                if f.free_symbols:
                    factors.append(f)
            if len(factors) >= 2:
                for f in factors:
                    rec([q for q in cur if q is not e] + [f], list(subs))
                return
            if len(factors) == 1 and sympy.expand(factors[0] - e) != 0:
                rec([q for q in cur if q is not e] + [factors[0]], list(subs))
                return
        # univariate: complete only when all real roots are rational
        for e in cur:
            syms = sorted(e.free_symbols, key=lambda s: s.name)
            if len(syms) != 1:
                continue
            x = syms[0]
            roots = []
            for f, _m in sympy.Poly(e, x).factor_list()[1]:
                if f.degree() == 1:
                    roots.append(sympy.Rational(-f.nth(0), f.nth(1)))
                elif f.count_roots() != 0:
                    raise _GiveUp  # irrational real root: cannot substitute
            for root in roots:
                rec([q.subs(x, root) for q in cur if q is not e],
                    subs + [(x, root)])
            return
        # linear in some variable with a polynomial coefficient g: split on g
        for e in cur:
            for x in sorted(e.free_symbols, key=lambda s: s.name):
                poly = sympy.Poly(e, x)
                if poly.degree() != 1:
                    continue
                g, h = poly.coeff_monomial(x), poly.nth(0)
                val = sympy.cancel(-h / g)
                rec([sympy.cancel(q.subs(x, val)) for q in cur if q is not e],
                    subs + [(x, val)])
                rec([q for q in cur if q is not e] + [g, h], list(subs))
                return
        raise _GiveUp

    try:
        rec(list(eqs), [])
    except _GiveUp:
        return None
    return out


def _subs_polynomial(expr, branch):
    """Branch substitution when the result clears to a polynomial, else None."""
    cur = expr
    for sym, val in branch:
        cur = cur.subs(sym, val)
    num, den = sympy.fraction(sympy.together(sympy.expand(cur)))
    if den.free_symbols:
        return None
    return sympy.expand(num / den)


def _conditional_block(ea, eb) -> bool:
    """True when eb > 0 provably forces ea <= 0.

    Looks for a division ea = q*eb + r with q and r both manifestly
    nonpositive, trying variable orders suggested by eb's terms so that
    mixed leading monomials get a chance to divide.
    """
    if ea is None or eb is None or eb == 0 or not eb.free_symbols:
        return False
    allsyms = sorted(ea.free_symbols | eb.free_symbols, key=lambda s: s.name)
    orders = []
    for t in sympy.Add.make_args(sympy.expand(eb)):
        lead = sorted(t.free_symbols, key=lambda s: s.name)
        orders.append(tuple(lead + [s for s in allsyms if s not in lead]))
    orders.append(tuple(allsyms))
    for gens in orders:
        if not gens:
            continue
        try:
            q, r = sympy.div(ea, eb, *gens)
        except sympy.PolynomialError:
            continue
        if _manifest_sign(q) in (0, -1) and _manifest_sign(r) in (0, -1):
            return True
    return False


def _axis_certificates(p: ZeroPattern, exprs) -> list[AlgebraicCertificate]:
    n = p.n
    out = []
    for k in range(1, n + 1):
        if exprs[k - 1] == 0:
            continue
        others = [
            exprs[j - 1] for j in range(1, n + 1) if j != k and exprs[j - 1] != 0
        ]
        if not others:
            continue
        branches = _real_branches(others)
        if branches is None:
            continue
        signs = set()
        for br in branches:
            s = _sign_on_branch(exprs[k - 1], br)
            if s is None:
                signs = None
                break
            signs.add(s)
        if signs is None or not signs or signs == {1, -1} or signs == {-1, 0, 1}:
            continue
        basis = tuple(j for j in range(1, n + 1) if j != k and exprs[j - 1] != 0)
        sgn = "-" if k % 2 else "+"
        if signs <= {0}:
            out.append(AlgebraicCertificate(
                kind="forced_vanishing",
                member=k,
                basis=basis,
                refutes="SAP",
                citation=(
                    f"zeroing {', '.join(f'E_{j}' for j in basis)} forces "
                    f"E_{k} = 0 on every real branch, so the characteristic "
                    f"polynomial x^{n} {sgn} c*x^{n - k} is unreachable for "
                    "every c != 0"
                ),
            ))
        else:
            forced = 1 if signs <= {0, 1} else -1
            blocked_c = "c < 0" if (forced == 1) == (k % 2 == 0) else "c > 0"
            word = "nonnegative" if forced == 1 else "nonpositive"
            out.append(AlgebraicCertificate(
                kind="forced_sign",
                member=k,
                basis=basis,
                refutes="SAP",
                citation=(
                    f"zeroing {', '.join(f'E_{j}' for j in basis)} forces "
                    f"E_{k} to be {word} on every real branch, so the "
                    f"characteristic polynomial x^{n} {sgn} c*x^{n - k} is "
                    f"unreachable for {blocked_c}"
                ),
            ))
    return out


def _even_spectrum_certificate(
    p: ZeroPattern, exprs
) -> AlgebraicCertificate | None:
    """Block refined inertias (0,0,n-2m,2m) on the odd-coefficient variety.

    A spectrum of m nonzero imaginary pairs plus zeros has every odd
    coefficient zero and E_2, E_4, ..., E_2m all positive.  If each real
    branch of the odd variety forces some needed even coefficient to be
    nonpositive, or two of them to oppose, those targets are unreachable.
    """
    n = p.n
    half = n // 2
    if half < 1:
        return None
    odd = [exprs[j] for j in range(0, n, 2) if exprs[j] != 0]
    branches = _real_branches(odd)
    if not branches:
        # the zero matrix lies on the odd variety, so an empty cover can
        # only mean the analysis overpruned; draw no conclusion
        return None
    evens = [exprs[2 * i - 1] for i in range(1, half + 1)]
    threshold = 0
    for br in branches:
        best = None  # least m such that this branch blocks (0,0,n-2m,2m)
        single = [i for i in range(1, half + 1)
                  if _sign_on_branch(evens[i - 1], br) in (0, -1)]
        if single:
            best = min(single)
        if best != 1:
            subbed = None
            for i in range(1, half + 1):
                for j in range(i + 1, half + 1):
                    if best is not None and j >= best:
                        break
                    s = _sign_on_branch(evens[i - 1] * evens[j - 1], br)
                    if s in (0, -1):
                        best = j if best is None else min(best, j)
                        continue
                    if subbed is None:
                        subbed = [_subs_polynomial(e, br) for e in evens]
                    if (_conditional_block(subbed[i - 1], subbed[j - 1])
                            or _conditional_block(subbed[j - 1], subbed[i - 1])):
                        best = j if best is None else min(best, j)
        if best is None:
            return None
        threshold = max(threshold, best)
    targets = tuple(
        (0, 0, n - 2 * m, 2 * m) for m in range(max(threshold, 1), half + 1)
    )
    basis = tuple(j for j in range(1, n + 1, 2) if exprs[j - 1] != 0)
    return AlgebraicCertificate(
        kind="forced_sign",
        member=2 * threshold,
        basis=basis,
        refutes="RIAP",
        targets=targets,
        citation=(
            "on every real branch of the variety zeroing the odd "
            f"coefficients ({', '.join(f'E_{j}' for j in basis) or 'none'}), "
            f"the even coefficients E_2..E_{2 * threshold} cannot all be "
            "positive, so spectra with that many nonzero imaginary pairs "
            "are unreachable"
        ),
    )


@lru_cache(maxsize=1024)
def find_sign_obstructions(p: ZeroPattern) -> tuple[AlgebraicCertificate, ...]:
    """Sign certificates from complete case splits of coefficient varieties.

    The axis battery zeroes all coefficients but E_k and reads a forced sign
    or forced vanishing of E_k, blocking x^n + (-1)^k c x^(n-k) for one or
    both signs of c; either way SAP fails.  The even-spectrum battery works
    on the variety of the odd coefficients and blocks all-imaginary-plus-
    zeros refined inertias.  Every certificate is a theorem; inconclusive
    analyses produce nothing.
    """
    exprs = _coefficient_exprs(p)
    if all(e == 0 for e in exprs):
        return ()
    out = _axis_certificates(p, exprs)
    even = _even_spectrum_certificate(p, exprs)
    if even is not None:
        out.append(even)
    return tuple(out)


def run_algebraic_checks(p: ZeroPattern) -> tuple[AlgebraicCertificate, ...]:
    out = list(find_coefficient_dependences(p))
    fact = check_three_cycle_factorization(p)
    if fact is not None:
        out.append(fact)
    out.extend(find_sign_obstructions(p))
    return tuple(out)
