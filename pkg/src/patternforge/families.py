"""Named pattern families and packaged reference data.

Parametric families (companion-like, single-loop paths, two-end-loop paths,
bordered paths, loop-chains) are generated directly; the order-4 reference
digraphs and the table of 54 realization matrices ship as JSON assets whose
sha256 checksums are pinned here and verified at load time.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .patterns import PatternError, ZeroPattern
from .spectra import RationalMatrix

_CHECKSUMS = {
    "figures.json": "c36baf54ba9237583924f34c92825113c907b0ce636791eeb07e241ad7865de5",
    "appendix.json": "64cfac6a33b382b81467f5d7265e8ec9a4379ab957b095c61e670aa45d948c8c",
}


class DataAssetError(RuntimeError):
    """Raised when a packaged data asset is missing or fails its checksum."""


def _load_asset(name: str) -> dict:
    blob = resources.files("patternforge.data").joinpath(name).read_bytes()
    digest = hashlib.sha256(blob).hexdigest()
    if digest != _CHECKSUMS[name]:
        raise DataAssetError(
            f"{name}: checksum mismatch ({digest}); packaged data was altered"
        )
    return json.loads(blob)


# ---- parametric families ----

def companion_pattern(n: int) -> ZeroPattern:
    """Free first column plus free superdiagonal; (1,1) is the loop."""
    if n < 1:
        raise PatternError("companion pattern needs n >= 1")
    support = {(i, 1) for i in range(1, n + 1)}
    support |= {(i, i + 1) for i in range(1, n)}
    return ZeroPattern(n, frozenset(support))


def loop_chain_pattern(n: int) -> ZeroPattern:
    """Loops at 1..n-1, free superdiagonal, and the closing corner (n,1)."""
    if n < 3:
        raise PatternError("loop chain pattern needs n >= 3")
    support = {(i, i) for i in range(1, n)}
    support |= {(i, i + 1) for i in range(1, n)}
    support.add((n, 1))
    return ZeroPattern(n, frozenset(support))


def path_pattern(n: int, alpha: int) -> ZeroPattern:
    """Tridiagonal path with a single loop in row alpha (2n-1 free entries)."""
    if n < 1 or not 1 <= alpha <= n:
        raise PatternError(f"path pattern needs 1 <= alpha <= n, got ({n}, {alpha})")
    support = {(i, i + 1) for i in range(1, n)}
    support |= {(i + 1, i) for i in range(1, n)}
    support.add((alpha, alpha))
    return ZeroPattern(n, frozenset(support))


def two_loop_path_pattern(n: int) -> ZeroPattern:
    """Tridiagonal path with loops at both ends."""
    if n < 2:
        raise PatternError("two-loop path pattern needs n >= 2")
    support = {(i, i + 1) for i in range(1, n)}
    support |= {(i + 1, i) for i in range(1, n)}
    support.add((1, 1))
    support.add((n, n))
    return ZeroPattern(n, frozenset(support))


def bordered_path_pattern(n: int) -> ZeroPattern:
    """Two-loop path of order n-1 bordered by the 2-cycle {n-1, n}."""
    if n < 3:
        raise PatternError("bordered path pattern needs n >= 3")
    base = two_loop_path_pattern(n - 1)
    support = set(base.support)
    support.add((n - 1, n))
    support.add((n, n - 1))
    return ZeroPattern(n, frozenset(support))


def three_cycle_pattern() -> ZeroPattern:
    return ZeroPattern(3, frozenset({(1, 2), (2, 3), (3, 1)}))


def two_cycle_path_pattern() -> ZeroPattern:
    return ZeroPattern(3, frozenset({(1, 2), (2, 1), (2, 3), (3, 2)}))


def order3_sap_generators() -> tuple[ZeroPattern, ...]:
    """The four minimal irreducible spectrally arbitrary supports of order 3."""
    return (
        ZeroPattern(3, frozenset({(1, 1), (1, 2), (2, 1), (2, 3), (3, 1)})),
        ZeroPattern(3, frozenset({(1, 1), (1, 2), (2, 3), (3, 1), (3, 2)})),
        ZeroPattern(3, frozenset({(1, 1), (1, 2), (2, 1), (2, 3), (3, 2), (3, 3)})),
        ZeroPattern(3, frozenset({(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)})),
    )


def order3_riap_generators() -> tuple[ZeroPattern, ...]:
    """The three minimal irreducible refined-inertially-arbitrary supports."""
    return (
        ZeroPattern(3, frozenset({(1, 1), (1, 2), (2, 1), (2, 3), (3, 1)})),
        ZeroPattern(3, frozenset({(1, 1), (1, 2), (2, 3), (3, 1), (3, 2)})),
        path_pattern(3, 1),
    )


# ---- packaged reference data ----

@lru_cache(maxsize=1)
def figure_patterns() -> dict[str, ZeroPattern]:
    obj = _load_asset("figures.json")
    return {
        name: ZeroPattern.from_positions(entry["n"], entry["support"])
        for name, entry in obj["patterns"].items()
    }


@dataclass(frozen=True)
class AppendixRow:
    """One published realization: pattern name, claimed inertia, exact matrix."""

    pattern_name: str
    inertia: tuple[int, int, int]
    matrix: RationalMatrix


@lru_cache(maxsize=1)
def appendix_rows() -> tuple[AppendixRow, ...]:
    obj = _load_asset("appendix.json")
    return tuple(
        AppendixRow(
            row["pattern"],
            tuple(row["inertia"]),
            RationalMatrix.from_rows(row["rows"]),
        )
        for row in obj["rows"]
    )


# ---- lookup by name ----

_FAMILY_HELP = (
    "C:n (companion), A:n (loop chain), P:n:alpha (single-loop path), "
    "T:n (two-loop path), W:n (bordered path), Y431 (= Y-1), H-1, H-2, "
    "and the order-4 reference digraphs C4-1..C4-8, Y-1, Y-2, D, "
    "NIAP-1..NIAP-4, J-1..J-6"
)


def builtin_pattern(name: str, n: int | None = None, alpha: int | None = None) -> ZeroPattern:
    """Look up a named pattern; parametric families take n (and alpha for P).

    Accepts either separate arguments (``builtin_pattern("P", 4, 2)``) or a
    packed reference string (``builtin_pattern("P:4:2")``).
    """
    if ":" in name:
        head, *rest = name.split(":")
        try:
            parts = [int(tok) for tok in rest]
        except ValueError as exc:
            raise PatternError(f"bad pattern reference {name!r}") from exc
        if len(parts) == 1:
            return builtin_pattern(head, parts[0])
        if len(parts) == 2:
            return builtin_pattern(head, parts[0], parts[1])
        raise PatternError(f"bad pattern reference {name!r}")

    figures = figure_patterns()
    if name in figures:
        if n is not None or alpha is not None:
            raise PatternError(f"{name} takes no parameters")
        return figures[name]
    if name == "Y431":
        return figures["Y-1"]
    if name == "H-1":
        return three_cycle_pattern()
    if name == "H-2":
        return two_cycle_path_pattern()

    if name in {"C", "A", "T", "W"}:
        if n is None or alpha is not None:
            raise PatternError(f"family {name} takes exactly one parameter n")
        return {
            "C": companion_pattern,
            "A": loop_chain_pattern,
            "T": two_loop_path_pattern,
            "W": bordered_path_pattern,
        }[name](n)
    if name == "P":
        if n is None or alpha is None:
            raise PatternError("family P takes parameters n and alpha")
        return path_pattern(n, alpha)
    raise PatternError(f"unknown pattern name {name!r}; known: {_FAMILY_HELP}")
