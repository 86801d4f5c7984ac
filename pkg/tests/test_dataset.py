import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rankplot import (
    ColumnSpec,
    DatasetError,
    RankedDataset,
    parse_csv,
    parse_worldbank_pair,
    to_csv,
    to_midranks,
    validate_dataset,
)


def test_parse_csv_transcribes_rows():
    ds = parse_csv(b"name,a,b\nP,1,2\nQ,2,1\n", ColumnSpec("a", "b", "name"))
    assert len(ds) == 2
    assert ds.labels == ("P", "Q")
    assert list(ds.x) == [1.0, 2.0]
    assert list(ds.y) == [2.0, 1.0]
    assert (ds.x_name, ds.y_name) == ("a", "b")


def test_parse_csv_rejects_single_row():
    with pytest.raises(DatasetError, match="fewer than 2"):
        parse_csv(b"name,a,b\nP,1,2\n", ColumnSpec("a", "b"))


def test_parse_csv_drops_and_counts_bad_rows():
    rows = ["name,a,b"] + [f"p{i},{i},{i * 2}" for i in range(5)]
    rows.insert(3, "R,abc,3")
    ds = parse_csv("\n".join(rows).encode(), ColumnSpec("a", "b"))
    assert len(ds) == 5
    assert ds.dropped_rows == 1


def test_parse_csv_drops_nonfinite_cells():
    ds = parse_csv(b"n,a,b\nP,1,2\nQ,nan,1\nR,3,inf\nS,4,5\n", ColumnSpec("a", "b"))
    assert len(ds) == 2
    assert ds.dropped_rows == 2


def test_parse_csv_unknown_selector():
    with pytest.raises(DatasetError, match="not found"):
        parse_csv(b"a,b\n1,2\n3,4\n", ColumnSpec("a", "nope"))


def test_parse_csv_index_selectors_and_default_labels():
    ds = parse_csv(b"c0,c1\n1,2\n3,4\n", ColumnSpec(0, 1))
    assert ds.labels == ("0", "1")
    ds2 = parse_csv(b"c0,c1\n1,2\n3,4\n", ColumnSpec("0", "1"))
    assert list(ds2.x) == [1.0, 3.0]


def test_parse_csv_empty_input_is_malformed():
    with pytest.raises(DatasetError, match="header"):
        parse_csv(b"", ColumnSpec("a", "b"))


def test_column_spec_rejects_same_column():
    with pytest.raises(DatasetError):
        ColumnSpec("a", "a")


def test_dataset_requires_equal_lengths():
    with pytest.raises(DatasetError):
        RankedDataset(x=[1, 2, 3], y=[1, 2])


finite_floats = st.floats(allow_nan=False, allow_infinity=False)
labels = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc")),
    max_size=10,
)


@given(st.lists(st.tuples(labels, finite_floats, finite_floats), min_size=2, max_size=30))
def test_csv_round_trip(rows):
    ds = RankedDataset(
        x=[r[1] for r in rows],
        y=[r[2] for r in rows],
        labels=tuple(r[0] for r in rows),
        x_name="a",
        y_name="b",
    )
    again = parse_csv(to_csv(ds), ColumnSpec("a", "b", "label"))
    assert again == ds


# --- World Bank exports -----------------------------------------------------

def _wb_export(indicator, code_rows, years=("2019", "2020", "2021")):
    header = '"Country Name","Country Code","Indicator Name","Indicator Code",' + ",".join(
        f'"{y}"' for y in years
    )
    lines = [
        '"Data Source","World Development Indicators",',
        "",
        '"Last Updated Date","2023-08-25",',
        "",
        header,
    ]
    for name, code, values in code_rows:
        cells = ",".join(f'"{v}"' for v in values)
        lines.append(f'"{name}","{code}","{indicator}","X.Y.Z",{cells}')
    return ("\n".join(lines) + "\n").encode()


MIL = _wb_export(
    "Military expenditure (% of GDP)",
    [
        ("Atlantis", "ATL", ("1.9", "2.0", "2.1")),
        ("Borduria", "BOR", ("4.0", "4.1", "4.2")),
        ("Cascadia", "CAS", ("0.9", "1.0", "1.1")),
    ],
)
RND = _wb_export(
    "Research and development expenditure (% of GDP)",
    [
        ("Atlantis", "ATL", ("3.0", "3.1", "3.2")),
        ("Borduria", "BOR", ("0.4", "0.5", "0.6")),
        ("Cascadia", "CAS", ("1.5", "", "1.6")),  # no 2020 value
    ],
)


def test_worldbank_join_drops_missing_and_keeps_first_file_order():
    ds = parse_worldbank_pair(MIL, RND, 2020)
    assert ds.labels == ("Atlantis", "Borduria")
    assert list(ds.x) == [2.0, 4.1]
    assert list(ds.y) == [3.1, 0.5]
    assert ds.dropped_rows == 1
    assert ds.x_name.startswith("Military")
    assert ds.y_name.startswith("Research")


def test_worldbank_self_join_gives_identity():
    ds = parse_worldbank_pair(MIL, MIL, 2021)
    assert np.array_equal(ds.x, ds.y)
    assert len(ds) == 3


def test_worldbank_missing_year():
    with pytest.raises(DatasetError, match="year"):
        parse_worldbank_pair(MIL, RND, 1800)


def test_worldbank_join_too_small():
    solo = _wb_export("Military expenditure (% of GDP)", [("Atlantis", "ATL", ("1", "2", "3"))])
    with pytest.raises(DatasetError, match="fewer than 2"):
        parse_worldbank_pair(solo, RND, 2020)


def test_worldbank_requires_header():
    with pytest.raises(DatasetError, match="header"):
        parse_worldbank_pair(b"just,some,anything\n1,2,3\n", RND, 2020)


# --- midranks ----------------------------------------------------------------

def test_midranks_examples():
    ds = RankedDataset(x=[10, 20, 20, 30], y=[1, 2, 3, 4])
    assert list(to_midranks(ds).x) == [1.0, 2.5, 2.5, 4.0]

    ds = RankedDataset(x=[3, 7, 11, 20, 40], y=[1, 1, 1, 1, 1])
    ranked = to_midranks(ds)
    assert list(ranked.x) == [1, 2, 3, 4, 5]
    assert list(ranked.y) == [3.0] * 5

    ds = RankedDataset(x=[5, 5, 5, 5], y=[1, 2, 3, 4])
    assert list(to_midranks(ds).x) == [2.5] * 4


int_coords = st.lists(
    st.tuples(st.integers(-1000, 1000), st.integers(-1000, 1000)),
    min_size=2,
    max_size=40,
)


@given(int_coords)
def test_midranks_idempotent(coords):
    ds = RankedDataset(x=[c[0] for c in coords], y=[c[1] for c in coords])
    once = to_midranks(ds)
    twice = to_midranks(once)
    assert np.array_equal(once.x, twice.x)
    assert np.array_equal(once.y, twice.y)


@given(int_coords)
def test_midranks_invariant_under_monotone_transforms(coords):
    x = np.array([c[0] for c in coords], dtype=float)
    y = np.array([c[1] for c in coords], dtype=float)
    base = to_midranks(RankedDataset(x=x, y=y))
    for f in (lambda v: 3 * v + 7, lambda v: v**3):
        moved = to_midranks(RankedDataset(x=f(x), y=f(y)))
        assert np.array_equal(base.x, moved.x)
        assert np.array_equal(base.y, moved.y)


# --- validation --------------------------------------------------------------

def test_validate_reports_shape(ranks8):
    report = validate_dataset(ranks8)
    assert report.m == 8
    assert report.x_tie_groups == 0
    assert report.y_tie_groups == 0
    assert (report.x_min, report.x_max) == (8.0, 86.0)
    assert report.ok


def test_validate_counts_tie_groups():
    report = validate_dataset(RankedDataset(x=[5, 5], y=[1, 2]))
    assert report.x_tie_groups == 1
    assert report.y_tie_groups == 0


def test_validate_flags_nonfinite():
    report = validate_dataset(RankedDataset(x=[1, 2, 3], y=[1, math.nan, 2]))
    assert report.nonfinite_y == 1
    assert not report.ok
