import pytest

from patternforge.families import (
    AppendixRow,
    DataAssetError,
    appendix_rows,
    bordered_path_pattern,
    builtin_pattern,
    companion_pattern,
    figure_patterns,
    loop_chain_pattern,
    order3_riap_generators,
    order3_sap_generators,
    path_pattern,
    three_cycle_pattern,
    two_cycle_path_pattern,
    two_loop_path_pattern,
)
from patternforge.patterns import PatternError, conforms_to, is_irreducible, transversals
import patternforge.families as families_mod


def test_companion_support():
    p = companion_pattern(4)
    assert p.support == frozenset(
        {(1, 1), (2, 1), (3, 1), (4, 1), (1, 2), (2, 3), (3, 4)}
    )


def test_loop_chain_support():
    p = loop_chain_pattern(4)
    assert p.support == frozenset(
        {(1, 1), (2, 2), (3, 3), (1, 2), (2, 3), (3, 4), (4, 1)}
    )


def test_path_support_and_size():
    p = path_pattern(4, 2)
    assert p.support == frozenset(
        {(1, 2), (2, 3), (3, 4), (2, 1), (3, 2), (4, 3), (2, 2)}
    )
    for n in range(1, 7):
        for alpha in range(1, n + 1):
            assert path_pattern(n, alpha).num_nonzero == 2 * n - 1


def test_two_loop_path_support():
    p = two_loop_path_pattern(3)
    assert p.support == frozenset({(1, 1), (3, 3), (1, 2), (2, 3), (2, 1), (3, 2)})


def test_bordered_path_extends_two_loop_path():
    for n in range(3, 7):
        w = bordered_path_pattern(n)
        t = two_loop_path_pattern(n - 1)
        assert w.support == t.support | {(n - 1, n), (n, n - 1)}
        # the only transversal pairs the border 2-cycle with loops elsewhere
        assert len(transversals(w)) == 1


def test_family_argument_validation():
    with pytest.raises(PatternError):
        loop_chain_pattern(2)
    with pytest.raises(PatternError):
        path_pattern(3, 4)
    with pytest.raises(PatternError):
        two_loop_path_pattern(1)
    with pytest.raises(PatternError):
        bordered_path_pattern(2)


def test_small_named_patterns():
    assert three_cycle_pattern().support == frozenset({(1, 2), (2, 3), (3, 1)})
    assert two_cycle_path_pattern().support == frozenset(
        {(1, 2), (2, 1), (2, 3), (3, 2)}
    )


def test_order3_generator_lists():
    sap = order3_sap_generators()
    riap = order3_riap_generators()
    assert len(sap) == 4 and len(riap) == 3
    assert all(p.n == 3 and is_irreducible(p) for p in sap + riap)
    assert [p.num_nonzero for p in sap] == [5, 5, 6, 6]
    assert riap[2] == path_pattern(3, 1)


def test_figure_patterns_inventory():
    figs = figure_patterns()
    names = set(figs)
    assert names == (
        {f"C4-{i}" for i in range(1, 9)}
        | {f"J-{i}" for i in range(1, 7)}
        | {f"NIAP-{i}" for i in range(1, 5)}
        | {"Y-1", "Y-2", "D"}
    )
    assert all(p.n == 4 for p in figs.values())
    assert all(is_irreducible(p) for p in figs.values())
    # every 7-entry reference digraph really has 7 free entries
    seven = [name for name in names if name.startswith(("C4-", "J-", "NIAP-", "Y-"))]
    assert all(figs[name].num_nonzero == 7 for name in seven)
    assert figs["D"].num_nonzero == 6


def test_appendix_rows_shape():
    rows = appendix_rows()
    assert len(rows) == 54
    by_pattern: dict[str, set] = {}
    for row in rows:
        assert isinstance(row, AppendixRow)
        by_pattern.setdefault(row.pattern_name, set()).add(row.inertia)
    assert set(by_pattern) == {f"J-{i}" for i in range(1, 7)}
    want = {
        (4, 0, 0), (3, 1, 0), (3, 0, 1), (2, 2, 0), (2, 1, 1),
        (2, 0, 2), (1, 1, 2), (1, 0, 3), (0, 0, 4),
    }
    for name, inertias in by_pattern.items():
        assert inertias == want, name


def test_appendix_matrices_fit_their_patterns():
    figs = figure_patterns()
    for row in appendix_rows():
        rows = [
            [row.matrix.entry(i, j) for j in range(1, 5)] for i in range(1, 5)
        ]
        assert conforms_to(rows, figs[row.pattern_name]), row.pattern_name


def test_checksum_tampering_detected(monkeypatch):
    monkeypatch.setitem(families_mod._CHECKSUMS, "figures.json", "0" * 64)
    figure_patterns.cache_clear()
    try:
        with pytest.raises(DataAssetError, match="checksum"):
            figure_patterns()
    finally:
        figure_patterns.cache_clear()


def test_builtin_pattern_lookup():
    assert builtin_pattern("C", 3) == companion_pattern(3)
    assert builtin_pattern("P:4:2") == path_pattern(4, 2)
    assert builtin_pattern("T:5") == two_loop_path_pattern(5)
    assert builtin_pattern("W", 4) == bordered_path_pattern(4)
    assert builtin_pattern("Y431") == figure_patterns()["Y-1"]
    assert builtin_pattern("H-2") == two_cycle_path_pattern()
    assert builtin_pattern("J-3") == figure_patterns()["J-3"]


def test_builtin_pattern_errors():
    with pytest.raises(PatternError):
        builtin_pattern("Q", 4)
    with pytest.raises(PatternError):
        builtin_pattern("P", 4)
    with pytest.raises(PatternError):
        builtin_pattern("J-1", 4)
    with pytest.raises(PatternError):
        builtin_pattern("P:4:x")
