import pytest

from irsfigs.schema import CSV_HEADER, SchemaError, load_rows, parse_csv_text

GOOD = (
    CSV_HEADER + "\n"
    "N4_L16,4,16,9,0.000999000999,statistical,9.76797846,9.69161565,"
    "0.00487150642,10000,2024\n"
    "N4_L16,4,16,9,0.000999000999,random,,5.63049786,0.0150724024,10000,2024\n"
    "N1_L64,1,64,9,0.000999000999,statistical,9.76812399,9.69312443,"
    "0.00489029679,10000,2024\n"
    "N1_L64,1,64,9,0.000999000999,random,,5.61946641,0.0148558426,10000,2024\n"
)


def test_good_csv_parses():
    rows = parse_csv_text(GOOD)
    assert len(rows) == 4
    assert rows[0].scenario_id == "N4_L16"
    assert rows[0].N == 4 and rows[0].L == 16 and rows[0].M == 9
    assert rows[0].method == "statistical"
    assert rows[0].rate_analytical == pytest.approx(9.76797846)
    assert rows[0].trials == 10000 and rows[0].seed == 2024


def test_empty_analytical_becomes_none():
    rows = parse_csv_text(GOOD)
    assert rows[1].method == "random"
    assert rows[1].rate_analytical is None
    assert rows[1].rate_mc == pytest.approx(5.63049786)


def test_total_elements_property():
    rows = parse_csv_text(GOOD)
    assert rows[0].total_elements == 64
    assert rows[2].total_elements == 64


def test_values_round_trip_to_nine_digits():
    rows = parse_csv_text(GOOD)
    assert f"{rows[0].rate_mc:.9g}" == "9.69161565"
    assert f"{rows[0].xi:.9g}" == "0.000999000999"


def test_header_only_gives_no_rows():
    assert parse_csv_text(CSV_HEADER + "\n") == []


def test_header_mismatch_names_line_one():
    with pytest.raises(SchemaError, match="line 1"):
        parse_csv_text("a,b,c\n1,2,3\n")


def test_empty_file_rejected():
    with pytest.raises(SchemaError, match="line 1"):
        parse_csv_text("")


def test_wrong_field_count_names_line():
    bad = CSV_HEADER + "\ns,4,16,9,0.1,statistical,1.0,1.0,0.1,100\n"
    with pytest.raises(SchemaError, match="line 2"):
        parse_csv_text(bad)


def test_unknown_method_names_line():
    lines = GOOD.splitlines()
    lines[3] = lines[3].replace("statistical", "magic")
    with pytest.raises(SchemaError, match=r"line 4.*magic"):
        parse_csv_text("\n".join(lines))


def test_non_numeric_field_names_line():
    lines = GOOD.splitlines()
    lines[2] = lines[2].replace("0.0150724024", "abc")
    with pytest.raises(SchemaError, match="line 3"):
        parse_csv_text("\n".join(lines))


def test_negative_rate_rejected():
    lines = GOOD.splitlines()
    lines[1] = lines[1].replace("9.69161565", "-1.0")
    with pytest.raises(SchemaError, match="rate_mc"):
        parse_csv_text("\n".join(lines))


def test_zero_trials_rejected():
    lines = GOOD.splitlines()
    lines[1] = lines[1].replace(",10000,", ",0,")
    with pytest.raises(SchemaError, match="trials"):
        parse_csv_text("\n".join(lines))


def test_missing_file_reported(tmp_path):
    with pytest.raises(SchemaError, match="not found"):
        load_rows(tmp_path / "nope.csv")


def test_load_rows_reads_file(tmp_path):
    path = tmp_path / "rates.csv"
    path.write_text(GOOD, encoding="utf-8")
    assert len(load_rows(path)) == 4
