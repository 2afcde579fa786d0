"""Zero patterns and their digraph structure.

A zero pattern of order n prescribes, for each entry of an n-by-n real matrix,
either "free" (the entry may take any real value, zero included) or "zero"
(the entry must vanish).  A pattern is identified with the set of its free
positions, kept here as 1-based (row, column) pairs, and equally with the
digraph on vertices 1..n that has an arc (i, j) for every free position.

Everything downstream (coefficient formulas, obstructions, censuses) is driven
by the cycle structure of that digraph, so this module also enumerates simple
cycles, composite cycles (vertex-disjoint unions), and canonical forms under
relabelling and transposition.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class PatternError(ValueError):
    """Raised for malformed pattern text, JSON, or out-of-range positions."""


@dataclass(frozen=True)
class ZeroPattern:
    """An n-by-n zero pattern: ``support`` is the frozenset of free positions."""

    n: int
    support: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise PatternError(f"pattern order must be positive, got {self.n}")
        for pos in self.support:
            r, c = pos
            if not (1 <= r <= self.n and 1 <= c <= self.n):
                raise PatternError(f"position {pos} outside order-{self.n} pattern")

    @classmethod
    def from_positions(cls, n: int, positions: Iterable[tuple[int, int]]) -> "ZeroPattern":
        return cls(n, frozenset((int(r), int(c)) for r, c in positions))

    @property
    def num_nonzero(self) -> int:
        return len(self.support)

    def sorted_support(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.support))

    def loops(self) -> tuple[int, ...]:
        return tuple(v for v in range(1, self.n + 1) if (v, v) in self.support)

    def has_arc(self, i: int, j: int) -> bool:
        return (i, j) in self.support

    def transpose(self) -> "ZeroPattern":
        return ZeroPattern(self.n, frozenset((c, r) for r, c in self.support))

    def relabel(self, perm: Sequence[int]) -> "ZeroPattern":
        """Relabel vertices: vertex i becomes perm[i-1]."""
        if sorted(perm) != list(range(1, self.n + 1)):
            raise PatternError(f"not a permutation of 1..{self.n}: {perm}")
        return ZeroPattern(
            self.n, frozenset((perm[r - 1], perm[c - 1]) for r, c in self.support)
        )

    def __str__(self) -> str:
        return pattern_to_text(self)


# ---- parsing and serialization ----

def parse_pattern(text: str) -> ZeroPattern:
    """Parse the line-per-row text form.

    Each row is a string over ``*`` (free) and ``0`` (zero); ``1`` is accepted
    as an alias for ``*``.  Whitespace between symbols is ignored, ``#`` starts
    a comment, blank lines are skipped.  The number of rows fixes the order and
    every row must supply exactly that many symbols.
    """
    rows: list[list[str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        symbols = line.split()
        if not symbols:
            continue
        cells = [ch for tok in symbols for ch in tok]
        for ch in cells:
            if ch not in "*01":
                raise PatternError(f"line {lineno}: unexpected symbol {ch!r}")
        rows.append(cells)
    if not rows:
        raise PatternError("no pattern rows found")
    n = len(rows)
    support = set()
    for i, cells in enumerate(rows, start=1):
        if len(cells) != n:
            raise PatternError(
                f"ragged pattern: row {i} has {len(cells)} symbols, expected {n}"
            )
        for j, ch in enumerate(cells, start=1):
            if ch in "*1":
                support.add((i, j))
    return ZeroPattern(n, frozenset(support))


def pattern_to_text(p: ZeroPattern) -> str:
    return "\n".join(
        " ".join("*" if (i, j) in p.support else "0" for j in range(1, p.n + 1))
        for i in range(1, p.n + 1)
    )


def pattern_to_json(p: ZeroPattern) -> str:
    return json.dumps({"n": p.n, "support": [list(pos) for pos in p.sorted_support()]})


def pattern_from_json(text: str) -> ZeroPattern:
    try:
        obj = json.loads(text)
        n = obj["n"]
        support = [(int(r), int(c)) for r, c in obj["support"]]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise PatternError(f"bad pattern JSON: {exc}") from exc
    return ZeroPattern.from_positions(n, support)


def pattern_of(rows: Sequence[Sequence[Fraction]]) -> ZeroPattern:
    """The pattern whose free positions are exactly the nonzero entries."""
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise PatternError("matrix is not square")
    return ZeroPattern(
        n,
        frozenset(
            (i, j)
            for i, row in enumerate(rows, start=1)
            for j, entry in enumerate(row, start=1)
            if entry != 0
        ),
    )


def conforms_to(rows: Sequence[Sequence[Fraction]], p: ZeroPattern) -> bool:
    """True iff every nonzero entry of the matrix sits in a free position.

    Free positions may hold zero: membership in the qualitative class only
    forbids nonzeros outside the support.
    """
    if len(rows) != p.n or any(len(row) != p.n for row in rows):
        return False
    return all(
        rows[i - 1][j - 1] == 0
        for i in range(1, p.n + 1)
        for j in range(1, p.n + 1)
        if (i, j) not in p.support
    )


# ---- digraph structure ----

def is_irreducible(p: ZeroPattern) -> bool:
    """True iff the digraph is strongly connected (order 1 counts as irreducible)."""
    if p.n == 1:
        return True
    fwd: dict[int, set[int]] = {v: set() for v in range(1, p.n + 1)}
    rev: dict[int, set[int]] = {v: set() for v in range(1, p.n + 1)}
    for r, c in p.support:
        fwd[r].add(c)
        rev[c].add(r)

    def reaches_all(adj: dict[int, set[int]]) -> bool:
        seen = {1}
        stack = [1]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == p.n

    return reaches_all(fwd) and reaches_all(rev)


@lru_cache(maxsize=4096)
def simple_cycles(p: ZeroPattern) -> tuple[tuple[int, ...], ...]:
    """All simple cycles, each as its vertex tuple starting at its least vertex.

    A loop is the length-1 cycle ``(v,)``; the cycle ``(v1, ..., vk)`` uses the
    arcs (v1,v2), ..., (vk,v1).  Sorted by (least vertex, length, vertices).
    """
    adj: dict[int, list[int]] = {v: [] for v in range(1, p.n + 1)}
    for r, c in sorted(p.support):
        adj[r].append(c)
    found: list[tuple[int, ...]] = []

    def extend(start: int, v: int, path: list[int], used: set[int]) -> None:
        for w in adj[v]:
            if w == start:
                found.append(tuple(path))
            elif w > start and w not in used:
                used.add(w)
                path.append(w)
                extend(start, w, path, used)
                path.pop()
                used.remove(w)

    for s in range(1, p.n + 1):
        extend(s, s, [s], {s})
    found.sort(key=lambda cyc: (cyc[0], len(cyc), cyc))
    return tuple(found)


def cycle_arcs(cycle: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    return tuple(
        (cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))
    )


@dataclass(frozen=True)
class CompositeCycle:
    """A vertex-disjoint union of simple cycles, ordered by least vertex."""

    cycles: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        return sum(len(c) for c in self.cycles)

    @property
    def sign(self) -> int:
        """(-1) ** (length - number of cycles): each ℓ-cycle contributes (-1)**(ℓ-1)."""
        return -1 if (self.length - len(self.cycles)) % 2 else 1

    def arcs(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(arc for c in self.cycles for arc in cycle_arcs(c)))

    def vertices(self) -> frozenset[int]:
        return frozenset(v for c in self.cycles for v in c)


@lru_cache(maxsize=4096)
def _composite_cycles_all(p: ZeroPattern) -> tuple[CompositeCycle, ...]:
    cycles = simple_cycles(p)
    out: list[CompositeCycle] = []

    def build(idx: int, chosen: list[tuple[int, ...]], used: frozenset[int]) -> None:
        if chosen:
            out.append(CompositeCycle(tuple(chosen)))
        for k in range(idx, len(cycles)):
            cyc = cycles[k]
            if used.isdisjoint(cyc):
                chosen.append(cyc)
                build(k + 1, chosen, used | frozenset(cyc))
                chosen.pop()

    build(0, [], frozenset())
    out.sort(key=lambda comp: (comp.length, comp.arcs()))
    return tuple(out)


def composite_cycles(p: ZeroPattern, k: int) -> tuple[CompositeCycle, ...]:
    """All composite cycles of total length k, deterministically ordered."""
    if not 1 <= k <= p.n:
        raise PatternError(f"composite cycle length {k} out of range 1..{p.n}")
    return tuple(c for c in _composite_cycles_all(p) if c.length == k)


def composite_cycle_lengths(p: ZeroPattern) -> frozenset[int]:
    """The set of k with at least one composite k-cycle."""
    return frozenset(c.length for c in _composite_cycles_all(p))


def has_proper_two_cycle(p: ZeroPattern) -> bool:
    return any(r < c and (c, r) in p.support for r, c in p.support)


def transversals(p: ZeroPattern) -> tuple[CompositeCycle, ...]:
    """Composite n-cycles: the nonzero-diagonal supports of the pattern."""
    return composite_cycles(p, p.n)


# ---- equivalence and canonical forms ----

@lru_cache(maxsize=16)
def _group_elements(n: int) -> tuple[tuple[tuple[int, ...], bool], ...]:
    perms = tuple(itertools.permutations(range(1, n + 1)))
    return tuple((perm, t) for t in (False, True) for perm in perms)


def apply_equivalence(p: ZeroPattern, perm: Sequence[int], transposed: bool) -> ZeroPattern:
    """Transpose first (if asked), then relabel vertex i to perm[i-1]."""
    q = p.transpose() if transposed else p
    return q.relabel(perm)


@dataclass(frozen=True)
class CanonicalForm:
    """Least pattern in the equivalence orbit, with one witnessing group element.

    ``apply_equivalence(source, perm, transposed) == pattern`` always holds.
    """

    pattern: ZeroPattern
    perm: tuple[int, ...]
    transposed: bool


@lru_cache(maxsize=65536)
def canonicalize(p: ZeroPattern) -> CanonicalForm:
    """Minimize the sorted support tuple over all relabellings and transposition.

    Brute force over 2 * n! group elements; intended for the small orders this
    package studies (n <= 8 is already generous).
    """
    best_key: tuple[tuple[int, int], ...] | None = None
    best: tuple[tuple[int, ...], bool] | None = None
    for perm, t in _group_elements(p.n):
        q = apply_equivalence(p, perm, t)
        key = q.sorted_support()
        if best_key is None or key < best_key:
            best_key, best = key, (perm, t)
    assert best_key is not None and best is not None
    return CanonicalForm(
        ZeroPattern(p.n, frozenset(best_key)), tuple(best[0]), best[1]
    )


def are_equivalent(a: ZeroPattern, b: ZeroPattern) -> bool:
    if a.n != b.n or len(a.support) != len(b.support):
        return False
    return canonicalize(a).pattern == canonicalize(b).pattern


def is_superpattern(a: ZeroPattern, b: ZeroPattern) -> bool:
    """True iff b's support contains a's (same labelling, no relabelling)."""
    return a.n == b.n and a.support <= b.support


def embeds_up_to_equivalence(a: ZeroPattern, b: ZeroPattern) -> bool:
    """True iff some relabelling/transposition of a is a subpattern of b."""
    if a.n != b.n or len(a.support) > len(b.support):
        return False
    return any(
        apply_equivalence(a, perm, t).support <= b.support
        for perm, t in _group_elements(a.n)
    )
