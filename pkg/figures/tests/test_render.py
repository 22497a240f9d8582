import matplotlib.pyplot as plt
import pytest

from irsfigs.plotting import (
    PlotSpec,
    build_figure,
    error_bar_misses,
    render,
    series_groups,
)
from irsfigs.schema import CSV_HEADER, parse_csv_text

from test_schema import GOOD

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _spec(tmp_path, text, **kw):
    src = tmp_path / "rates.csv"
    src.write_text(text, encoding="utf-8")
    kw.setdefault("figure", "fig_b")
    return PlotSpec(input_csv=src, output_path=tmp_path / "fig.png", **kw)


def test_series_grouped_by_surfaces_and_method():
    groups = series_groups(parse_csv_text(GOOD))
    assert list(groups) == [(1, "random"), (1, "statistical"),
                            (4, "random"), (4, "statistical")]
    assert all(len(pts) == 1 for pts in groups.values())


def test_series_points_sorted_by_element_count():
    text = (CSV_HEADER + "\n"
            "s2,4,16,9,0.1,statistical,8.0,8.1,0.1,100,1\n"
            "s0,4,4,9,0.1,statistical,6.0,6.1,0.1,100,1\n"
            "s1,4,8,9,0.1,statistical,7.0,7.1,0.1,100,1\n")
    groups = series_groups(parse_csv_text(text))
    assert [p.total_elements for p in groups[(4, "statistical")]] == [16, 32, 64]


def test_four_row_example_draws_one_series_per_pair():
    rows = parse_csv_text(GOOD)
    fig, ax = build_figure(rows)
    try:
        labels = [c.get_label() for c in ax.containers]
        assert labels == ["N=1, random", "N=1, statistical",
                          "N=4, random", "N=4, statistical"]
        # errorbar markers/caps also live in ax.lines with linestyle 'None';
        # the solid lines are exactly the closed-form series (statistical only)
        solid = [ln for ln in ax.lines if ln.get_linestyle() == "-"]
        assert len(solid) == 2
        assert ax.get_legend() is not None
    finally:
        plt.close(fig)


def test_header_only_renders_empty_axes_without_legend(tmp_path):
    spec = _spec(tmp_path, CSV_HEADER + "\n")
    out = render(spec)
    assert out.read_bytes().startswith(PNG_MAGIC)
    fig, ax = build_figure([])
    try:
        assert ax.get_legend() is None
        assert not ax.lines and not ax.containers
    finally:
        plt.close(fig)


def test_render_writes_png(tmp_path):
    out = render(_spec(tmp_path, GOOD))
    data = out.read_bytes()
    assert data.startswith(PNG_MAGIC)
    assert len(data) > 1000


def test_render_is_idempotent(tmp_path):
    spec = _spec(tmp_path, GOOD)
    first = render(spec).read_bytes()
    second = render(spec).read_bytes()
    assert first == second


def test_panel_variants_differ_only_by_tag(tmp_path):
    a = render(_spec(tmp_path, GOOD, figure="fig_a")).read_bytes()
    b = render(_spec(tmp_path, GOOD, figure="fig_b")).read_bytes()
    assert a != b  # the panel tag is in the title


def test_output_is_png_regardless_of_suffix(tmp_path):
    src = tmp_path / "rates.csv"
    src.write_text(GOOD, encoding="utf-8")
    spec = PlotSpec(input_csv=src, output_path=tmp_path / "fig.img")
    assert render(spec).read_bytes().startswith(PNG_MAGIC)


def test_spec_validation(tmp_path):
    src = tmp_path / "rates.csv"
    src.write_text(GOOD, encoding="utf-8")
    with pytest.raises(ValueError, match="figure"):
        PlotSpec(src, tmp_path / "f.png", figure="fig_z").validate()
    with pytest.raises(ValueError, match="dpi"):
        PlotSpec(src, tmp_path / "f.png", dpi=0).validate()
    with pytest.raises(ValueError, match="not found"):
        PlotSpec(tmp_path / "nope.csv", tmp_path / "f.png").validate()


def test_dpi_changes_image_size(tmp_path):
    lo = render(_spec(tmp_path, GOOD, dpi=72)).read_bytes()
    hi = render(_spec(tmp_path, GOOD, dpi=200)).read_bytes()
    assert len(hi) > len(lo)


def test_error_bar_misses_flags_out_of_bar_points():
    inside = (CSV_HEADER + "\n"
              "s,4,16,9,0.1,statistical,8.05,8.0,0.1,100,1\n"
              "s,4,16,9,0.1,random,,5.0,0.1,100,1\n")
    assert error_bar_misses(parse_csv_text(inside)) == []
    outside = (CSV_HEADER + "\n"
               "s,4,16,9,0.1,statistical,8.5,8.0,0.1,100,1\n")
    misses = error_bar_misses(parse_csv_text(outside))
    assert len(misses) == 1
    assert misses[0][1] == pytest.approx(5.0)
