import datetime
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tedcan.ingest import (
    IngestError,
    expand_country,
    infer_factor_eligibility,
    ingest_csv,
    make_notice_link,
    normalize_date,
    to_integer_value,
)
from tedcan.schema import builtin_schema
from tedcan.store import write_store


# Hand-built month table, independent of the implementation's map.
MONTH_CASES = [
    ("01-JAN-06", "2006-01-01"),
    ("02-FEB-07", "2007-02-02"),
    ("03-MAR-08", "2008-03-03"),
    ("04-APR-09", "2009-04-04"),
    ("05-MAY-10", "2010-05-05"),
    ("06-JUN-11", "2011-06-06"),
    ("07-JUL-12", "2012-07-07"),
    ("31-DEC-13", "2013-12-31"),
    ("08-AUG-13", "2013-08-08"),
    ("09-SEP-14", "2014-09-09"),
    ("10-OCT-15", "2015-10-10"),
    ("11-NOV-06", "2006-11-11"),
    ("12-DEC-15", "2015-12-12"),
]


@pytest.mark.parametrize("raw,expected", MONTH_CASES)
def test_normalize_date_month_table(raw, expected):
    assert normalize_date(raw) == expected


def test_normalize_date_case_insensitive():
    assert normalize_date("31-dec-13") == "2013-12-31"
    assert normalize_date("31-Dec-13") == "2013-12-31"


def test_normalize_date_century_pivot():
    assert normalize_date("01-JAN-90") == "1990-01-01"
    assert normalize_date("01-JAN-99") == "1999-01-01"
    assert normalize_date("01-JAN-89") == "2089-01-01"
    assert normalize_date("01-JAN-00") == "2000-01-01"


def test_normalize_date_null_and_malformed():
    assert normalize_date(None) is None
    assert normalize_date("") is None
    assert normalize_date("31-XXX-13") is None
    assert normalize_date("2013/12/31") is None
    assert normalize_date("1-JAN-13") is None
    assert normalize_date("31-DEC-2013") is None


def test_normalize_date_iso_passthrough():
    # Re-ingesting an exported selection must not destroy dates.
    assert normalize_date("2013-12-31") == "2013-12-31"


def _raw_form(day: datetime.date) -> str:
    months = "JAN FEB MAR APR MAY JUN JUL AUG SEP OCT NOV DEC".split()
    return f"{day.day:02d}-{months[day.month - 1]}-{day.year % 100:02d}"


@settings(max_examples=300)
@given(
    st.dates(datetime.date(1990, 1, 1), datetime.date(2089, 12, 31)),
    st.dates(datetime.date(1990, 1, 1), datetime.date(2089, 12, 31)),
)
def test_normalize_date_preserves_calendar_order(d1, d2):
    out1, out2 = normalize_date(_raw_form(d1)), normalize_date(_raw_form(d2))
    assert (out1 < out2) == (d1 < d2)
    assert (out1 == out2) == (d1 == d2)


def test_expand_country():
    assert expand_country("FR") == "France"
    assert expand_country("UK") == "United Kingdom"
    assert expand_country("EL") == "Greece"
    assert expand_country("fr") == "France"
    assert expand_country(None) is None
    assert expand_country("") is None
    # Unknown codes and already expanded names pass through.
    assert expand_country("XX") == "XX"
    assert expand_country("France") == "France"


def _reference_round(text: str) -> int:
    """Ties away from zero, via exact rational arithmetic."""
    x = Fraction(text)
    floor = x.numerator // x.denominator
    frac = x - floor
    if frac > Fraction(1, 2):
        return floor + 1
    if frac < Fraction(1, 2):
        return floor
    return floor + 1 if x > 0 else floor


def test_to_integer_value_basics():
    assert to_integer_value("1000000.00") == 1000000
    assert to_integer_value("123.5") == 124
    assert to_integer_value("-123.5") == -124
    assert to_integer_value("2.4") == 2
    assert to_integer_value("300") == 300
    assert to_integer_value("") is None
    assert to_integer_value(None) is None
    assert to_integer_value("n/a") is None


@settings(max_examples=300)
@given(st.integers(-10**9, 10**9), st.integers(0, 99))
def test_to_integer_value_matches_reference(whole, cents):
    text = f"{whole}.{cents:02d}"
    assert to_integer_value(text) == _reference_round(text)


def test_make_notice_link():
    assert make_notice_link("201300001", "https://example/{id}") == "https://example/201300001"
    assert make_notice_link(None, "https://example/{id}") is None
    assert make_notice_link("42", "{id}/{id}") == "42/42"


def test_infer_factor_eligibility():
    assert infer_factor_eligibility(299) is True
    assert infer_factor_eligibility(300) is False
    assert infer_factor_eligibility(0) is True
    with pytest.raises(ValueError):
        infer_factor_eligibility(-1)


FIXTURE_HEADER = "ID_NOTICE_CAN,DT_DISPATCH,CAE_NAME,ISO_COUNTRY_CODE,WIN_NAME,VALUE_EURO,CPV,YEAR"


def _write(tmp_path, name: str, text: str):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_ingest_single_file(tmp_path):
    path = _write(
        tmp_path,
        "a.csv",
        FIXTURE_HEADER + "\n"
        '201300001,31-DEC-13,"Ville de Namur, Services",BE,Acme,1000000.00,30124530,2013\n'
        "201300002,01-JAN-13,Stad Gent,BE,,250000.50,45000000,2013\n"
        "201300003,,Mairie de Lille,FR,Bouygues,,66500000,2013\n",
    )
    store, report = ingest_csv([path], builtin_schema())
    assert report.rows_read == 3
    assert report.rows_kept == 3
    assert store.row_count == 3
    assert store.cell("DT_DISPATCH", 0) == "2013-12-31"
    assert store.cell("CAE_NAME", 0) == "Ville de Namur, Services"
    assert store.cell("ISO_COUNTRY_CODE", 0) == "Belgium"
    assert store.cell("ISO_COUNTRY_CODE", 2) == "France"
    assert store.cell("VALUE_EURO", 1) == 250001
    assert store.cell("VALUE_EURO", 2) is None
    assert store.cell("WIN_NAME", 1) is None
    assert store.cell("DT_DISPATCH", 2) is None
    # Fields absent from the header are all-null.
    assert store.cell("TITLE", 0) is None
    assert report.null_counts["VALUE_EURO"] == 1
    assert report.null_counts["TITLE"] == 3


def test_ingest_concatenates_files_in_order(tmp_path):
    a = _write(tmp_path, "a.csv", "CAE_NAME\nfirst\nsecond\n")
    b = _write(tmp_path, "b.csv", "CAE_NAME\nthird\nfourth\nfifth\n")
    store, report = ingest_csv([a, b], builtin_schema())
    assert report.rows_read == 5
    assert [store.cell("CAE_NAME", i) for i in range(5)] == [
        "first", "second", "third", "fourth", "fifth",
    ]


def test_ingest_accepts_display_name_headers(tmp_path):
    path = _write(
        tmp_path,
        "a.csv",
        "Contracting_Authority_Name,Contract_Value_Euros\nTown Hall,12.6\n",
    )
    store, _ = ingest_csv([path], builtin_schema())
    assert store.cell("CAE_NAME", 0) == "Town Hall"
    assert store.cell("VALUE_EURO", 0) == 13


def test_ingest_counts_warnings(tmp_path):
    path = _write(
        tmp_path,
        "a.csv",
        "DT_DISPATCH,VALUE_EURO,ISO_COUNTRY_CODE\nbad-date,not-a-number,ZZ\n,,\n",
    )
    store, report = ingest_csv([path], builtin_schema())
    assert report.warning_counts["DT_DISPATCH"] == 1
    assert report.warning_counts["VALUE_EURO"] == 1
    assert report.warning_counts["ISO_COUNTRY_CODE"] == 1
    assert store.cell("DT_DISPATCH", 0) is None
    assert store.cell("VALUE_EURO", 0) is None
    assert store.cell("ISO_COUNTRY_CODE", 0) == "ZZ"
    # Empty cells are null without warnings.
    assert report.null_counts["DT_DISPATCH"] == 2


def test_ingest_rejects_unrecognized_header(tmp_path):
    path = _write(tmp_path, "a.csv", "FOO,BAR\n1,2\n")
    with pytest.raises(IngestError, match="no recognized fields"):
        ingest_csv([path], builtin_schema())


def test_ingest_rejects_missing_file(tmp_path):
    with pytest.raises(IngestError, match="cannot read"):
        ingest_csv([tmp_path / "absent.csv"], builtin_schema())


def test_ingest_quoted_cells_rfc4180(tmp_path):
    path = _write(
        tmp_path,
        "a.csv",
        'CAE_NAME,TITLE\n"Name, with comma","He said ""hi"""\n',
    )
    store, _ = ingest_csv([path], builtin_schema())
    assert store.cell("CAE_NAME", 0) == "Name, with comma"
    assert store.cell("TITLE", 0) == 'He said "hi"'


def test_ingest_deterministic_bytes(tmp_path):
    rng = random.Random(7)
    rows = [
        f"20130000{i},{rng.randrange(10**6)}.{rng.randrange(100):02d},Auth {rng.randrange(5)},BE"
        for i in range(50)
    ]
    path = _write(
        tmp_path,
        "a.csv",
        "ID_NOTICE_CAN,VALUE_EURO,CAE_NAME,ISO_COUNTRY_CODE\n" + "\n".join(rows) + "\n",
    )
    store1, _ = ingest_csv([path], builtin_schema())
    store2, _ = ingest_csv([path], builtin_schema())
    out1, out2 = tmp_path / "s1.oted", tmp_path / "s2.oted"
    write_store(store1, out1)
    write_store(store2, out2)
    assert out1.read_bytes() == out2.read_bytes()
