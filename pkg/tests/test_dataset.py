import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from praa.dataset import (
    MISSING,
    AttributeSchema,
    DataError,
    Dataset,
    SchemaError,
    column_stats,
    generate_synthetic,
    load_csv,
    load_schema,
    skewness,
    write_csv,
    write_schema,
)

from conftest import datasets
from oracles import skew_formula


@pytest.fixture
def schema_file(tmp_path):
    p = tmp_path / "schema.txt"
    p.write_text("# three columns\nage integer\nsex categorical\nchd decision\n")
    return p


def test_load_schema_three_columns(schema_file):
    schema = load_schema(schema_file)
    assert [a.name for a in schema] == ["age", "sex", "chd"]
    assert [a.kind for a in schema] == ["integer", "categorical", "decision"]
    assert schema[-1].name == "chd"


def test_schema_marker_override(tmp_path):
    p = tmp_path / "s.txt"
    p.write_text("a real NA\nb decision\n")
    assert load_schema(p)[0].missing_marker == "NA"


@pytest.mark.parametrize(
    "text, message",
    [
        ("a integer\nb decision\nc decision\n", "multiple decision columns"),
        ("a float\nb decision\n", "allowed kinds: categorical, integer, real, decision"),
        ("a integer\na real\nb decision\n", "duplicate"),
        ("a integer\nb real\n", "no decision column"),
        ("b decision\na integer\n", "must be the last column"),
    ],
)
def test_load_schema_errors(tmp_path, text, message):
    p = tmp_path / "s.txt"
    p.write_text(text)
    with pytest.raises(SchemaError, match=message):
        load_schema(p)


SCHEMA3 = [AttributeSchema("age", "integer"), AttributeSchema("sex", "categorical"), AttributeSchema("chd", "decision")]


def test_load_csv_marker_substitution(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("41,?,1\n50,m,0\n")
    ds = load_csv(p, SCHEMA3)
    assert ds.rows[0] == (41, MISSING, "1")


def test_load_csv_row_length(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("41,x\n")
    with pytest.raises(DataError, match="row 1: expected 3 fields"):
        load_csv(p, SCHEMA3)


def test_load_csv_numeric_parse_error_names_column(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("abc,x,1\n")
    with pytest.raises(DataError, match="'age'"):
        load_csv(p, SCHEMA3)


def test_load_csv_missing_decision(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("41,x,?\n")
    with pytest.raises(DataError, match="decision"):
        load_csv(p, SCHEMA3)


def test_load_csv_header_flag(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("age,sex,chd\n41,f,1\n42,m,0\n")
    assert load_csv(p, SCHEMA3, header=True).m == 2


def test_multiclass_rejected():
    with pytest.raises(DataError, match="exactly two labels"):
        Dataset(SCHEMA3, [[1, "a", "x"], [2, "b", "y"], [3, "c", "z"]])


def test_single_record_rejected():
    with pytest.raises(DataError, match="at least 2"):
        Dataset(SCHEMA3, [[1, "a", "x"]])


def test_skewness_symmetric():
    assert skewness([1, 2, 3, 4, 5]) == 0.0


def test_skewness_constant_is_zero():
    assert skewness([1, 1, 1]) == 0.0


def test_skewness_matches_formula():
    # direct evaluation: mean 2.8, m2 = 12.96, m3 = 69.984, 69.984 / 12.96**1.5 = 1.5
    assert skew_formula([1, 1, 1, 1, 10]) == pytest.approx(1.5, abs=1e-12)
    assert skewness([1, 1, 1, 1, 10]) == pytest.approx(1.5, abs=1e-12)


@given(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=2, max_size=40))
def test_skewness_reflection_antisymmetry(xs):
    if np.var(xs) < 1e-6:
        return  # reflection itself rounds at the scale of the spread
    mean = sum(xs) / len(xs)
    reflected = [2 * mean - x for x in xs]
    assert skewness(xs) == pytest.approx(-skewness(reflected), abs=1e-6)


@given(st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=2, max_size=40))
def test_skewness_agrees_with_loop_formula(xs):
    if np.var(xs) < 1e-6:
        return
    assert skewness(xs) == pytest.approx(skew_formula(xs), rel=1e-6, abs=1e-6)


def test_column_stats_counts():
    ds = Dataset(SCHEMA3, [[1, "a", "x"], [1, MISSING, "y"], [2, "a", "x"]])
    st_ = column_stats(ds, 1)
    assert st_.counts == {"a": 2}
    assert sum(column_stats(ds, 0).counts.values()) == 3


@given(datasets())
def test_csv_round_trip(tmp_path_factory, ds):
    d = tmp_path_factory.mktemp("rt")
    write_schema(ds.schema, d / "s.txt")
    write_csv(ds, d / "d.csv")
    back = load_csv(d / "d.csv", load_schema(d / "s.txt"))
    assert back.rows == ds.rows


def test_synthetic_no_missing():
    assert generate_synthetic(100, 5, 0.0, 7).missing_count() == 0


def test_synthetic_deterministic():
    assert generate_synthetic(100, 5, 0.1, 7).rows == generate_synthetic(100, 5, 0.1, 7).rows


def test_synthetic_missing_count():
    ds = generate_synthetic(100, 5, 0.1, 7)
    assert ds.missing_count() == 40
    assert all(r[-1] is not MISSING for r in ds.rows)


@given(st.integers(2, 60), st.integers(2, 8), st.floats(0, 0.95), st.integers(0, 2**16))
def test_synthetic_missing_count_closed_form(m, n, rate, seed):
    ds = generate_synthetic(m, n, rate, seed)
    assert ds.missing_count() == math.floor(rate * m * (n - 1))
    assert ds.m == m and ds.n == n


def test_synthetic_mixed_kinds_and_label_signal():
    ds = generate_synthetic(400, 6, 0.0, 1)
    assert {a.kind for a in ds.schema[:-1]} == {"categorical", "integer", "real"}
    agree = np.mean([(r[0] == "a") == (r[-1] == "1") for r in ds.rows])
    assert agree > 0.75


def test_synthetic_rate_one_rejected():
    with pytest.raises(ValueError):
        generate_synthetic(10, 3, 1.0, 0)
