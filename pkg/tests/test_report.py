from __future__ import annotations

import math
from pathlib import Path

import pytest

import assesskit
from assesskit import (
    RadarAxis,
    RadarSpec,
    ReportError,
    ResponseEntry,
    Satisfaction,
    SecurityLevel,
)
from assesskit.report import security_level_label

from conftest import build_reference_scorecard_assessment

GOLDEN_DIR = Path(__file__).parent / "golden"


def all_yes(catalog):
    view = assesskit.select_level(catalog, SecurityLevel.HIGH)
    a = assesskit.new_assessment(view)
    for requirement in view.iter_requirements():
        a = assesskit.record_response(a, requirement.id, ResponseEntry(Satisfaction.YES))
    return a


class TestFormatting:
    def test_percent_one_decimal(self):
        assert assesskit.format_percent(0.6) == "60.0"
        assert assesskit.format_percent(0.6, sign=True) == "60.0%"
        assert assesskit.format_percent(1.0, sign=True) == "100.0%"
        assert assesskit.format_percent(0.0, sign=True) == "0.0%"

    def test_percent_two_decimals(self):
        assert assesskit.format_percent(0.8646, 2, sign=True) == "86.46%"
        assert assesskit.format_percent(0.6, 2, sign=True) == "60.00%"

    def test_points_display(self):
        assert assesskit.format_points(3.0) == "3"
        assert assesskit.format_points(0.0) == "0"
        assert assesskit.format_points(2.5) == "2.5"
        assert assesskit.format_points(2.75) == "2.75"

    def test_level_labels(self):
        assert security_level_label(SecurityLevel.HIGH) == "HIGH (Enhanced)"
        assert security_level_label(SecurityLevel.MEDIUM) == "MEDIUM"


class TestSnapshot:
    def test_ir_fixture_block(self, ir_fixture_assessment):
        doc = assesskit.snapshot(ir_fixture_assessment)
        assert doc.security_level_label == "HIGH (Enhanced)"
        assert doc.aggregate_percent == "60.00%"
        block = doc.blocks[0]
        assert block.code == "IR"
        assert block.question_count == 5
        assert block.answered_count == 5
        assert block.points_display == "3"
        assert block.compliance_percent == "60.0"
        assert [row.code for row in block.rows] == ["Y", "Y", "N", "D", "Y"]

    def test_non_yes_rows_emphasized(self, ir_fixture_assessment):
        rows = assesskit.snapshot(ir_fixture_assessment).blocks[0].rows
        assert [row.emphasized for row in rows] == [False, False, True, True, False]

    def test_unanswered_rows_emphasized(self, sample_catalog):
        view = assesskit.select_level(sample_catalog, SecurityLevel.HIGH)
        doc = assesskit.snapshot(assesskit.new_assessment(view))
        assert all(row.emphasized for row in doc.blocks[0].rows)
        assert all(row.code is None for row in doc.blocks[0].rows)

    def test_all_yes_aggregate(self, sample_catalog):
        doc = assesskit.snapshot(all_yes(sample_catalog))
        assert doc.aggregate_percent == "100.00%"
        assert doc.blocks[0].compliance_percent == "100.0"

    def test_empty_assessment_aggregate(self, sample_catalog):
        view = assesskit.select_level(sample_catalog, SecurityLevel.HIGH)
        doc = assesskit.snapshot(assesskit.new_assessment(view))
        assert doc.aggregate_percent == "0.00%"
        assert doc.answered_total == 0

    def test_rows_render_odp_values(self, ir_fixture_assessment):
        a = assesskit.assign_odp(ir_fixture_assessment, "IR.5", 1, "36 hours")
        doc = assesskit.snapshot(a)
        texts = [row.text for row in doc.blocks[0].rows]
        assert any("[36 hours]" in t for t in texts)
        assert any("[24/7]" in t for t in texts)

    def test_text_rendering(self, ir_fixture_assessment):
        text = assesskit.render_snapshot_text(assesskit.snapshot(ir_fixture_assessment))
        assert "SNAPSHOT" in text
        assert "Security Level: HIGH (Enhanced)" in text
        assert "Overall compliance: 60.00%" in text
        assert "INCIDENT RESPONSE (IR)" in text
        assert " * " in text


class TestComplianceTable:
    def test_ir_fixture_table_exact(self, ir_fixture_assessment):
        table = assesskit.compliance_table(assesskit.overall_compliance(ir_fixture_assessment))
        assert table == (
            "family,points,count,percent,verdict\n"
            "IR,3,5,60.0,fail\n"
            "TOTAL,3,5,60.0,fail\n"
        )

    def test_all_yes_rows_pass(self, reference_catalog):
        table = assesskit.compliance_table(
            assesskit.overall_compliance(all_yes(reference_catalog))
        )
        lines = table.strip().splitlines()
        assert lines[0] == "family,points,count,percent,verdict"
        assert len(lines) == 1 + 14 + 1
        assert all(line.endswith(",100.0,pass") for line in lines[1:])
        assert lines[-1].startswith("TOTAL,144,144,")

    def test_empty_assessment_rows_fail(self, sample_catalog):
        view = assesskit.select_level(sample_catalog, SecurityLevel.HIGH)
        table = assesskit.compliance_table(
            assesskit.overall_compliance(assesskit.new_assessment(view))
        )
        assert "IR,0,5,0.0,fail\n" in table
        assert "TOTAL,0,5,0.0,fail\n" in table


class TestEffectsRender:
    def test_ir_fixture_rows_exact(self, ir_fixture_assessment):
        render = assesskit.render_effects(assesskit.effects_map(ir_fixture_assessment))
        assert render.table == (
            "family,requirement,code,redirect,preclude,impede,limit,expose\n"
            "IR,4,D,,,,No,No\n"
            "IR,5,Y,,Yes,Yes,Yes,Yes\n"
        )

    def test_yes_with_two_effects(self, ir_fixture_assessment):
        a = assesskit.record_response(
            ir_fixture_assessment, "IR.4", ResponseEntry(Satisfaction.YES)
        )
        render = assesskit.render_effects(assesskit.effects_map(a))
        assert "IR,4,Y,,,,Yes,Yes\n" in render.table

    def test_unanswered_code_cell_empty(self, sample_catalog):
        view = assesskit.select_level(sample_catalog, SecurityLevel.HIGH)
        render = assesskit.render_effects(
            assesskit.effects_map(assesskit.new_assessment(view))
        )
        assert "IR,4,,,,,No,No\n" in render.table
        row = render.rows[0]
        assert row.unanswered
        assert row.code == ""

    def test_no_effects_label_spans_first_cell(self, reference_catalog):
        a = all_yes(reference_catalog)
        render = assesskit.render_effects(assesskit.effects_map(a))
        labeled = [row for row in render.rows if row.no_effects_listed]
        assert labeled
        for row in labeled:
            assert row.cells[0] == assesskit.NO_EFFECTS_LABEL
            assert all(cell == "" for cell in row.cells[1:])
        assert f",{assesskit.NO_EFFECTS_LABEL},,,,\n" in render.table


class TestRadarGeometry:
    def test_first_axis_at_twelve_o_clock(self):
        spec = RadarSpec(tuple(RadarAxis(code, 1.0) for code in ("AA", "BB", "CC", "DD")))
        assert spec.point(0, 1.0) == pytest.approx((400.0, 40.0))
        assert spec.point(1, 1.0) == pytest.approx((760.0, 400.0))
        assert spec.point(2, 1.0) == pytest.approx((400.0, 760.0))
        assert spec.point(3, 1.0) == pytest.approx((40.0, 400.0))

    def test_zero_fraction_sits_at_center(self):
        spec = RadarSpec(tuple(RadarAxis(code, 0.0) for code in ("AA", "BB", "CC")))
        for i in range(3):
            assert spec.point(i, 0.0) == pytest.approx(spec.center)

    def test_all_full_vertices_hit_spoke_ends(self, reference_catalog):
        score = assesskit.overall_compliance(all_yes(reference_catalog))
        spec = assesskit.build_radar_spec(score)
        n = len(spec.axes)
        assert n == 14
        for i, axis in enumerate(spec.axes):
            assert axis.fraction == 1.0
            angle = -math.pi / 2 + 2 * math.pi * i / n
            expected = (
                spec.center[0] + spec.radius * math.cos(angle),
                spec.center[1] + spec.radius * math.sin(angle),
            )
            got = spec.point(i, axis.fraction)
            assert abs(got[0] - expected[0]) < 1e-9
            assert abs(got[1] - expected[1]) < 1e-9

    def test_axes_follow_family_order(self, ir_fixture_assessment):
        spec = assesskit.build_radar_spec(
            assesskit.overall_compliance(ir_fixture_assessment)
        )
        assert [axis.code for axis in spec.axes] == ["IR"]


class TestRadarSvg:
    def test_fewer_than_three_axes_rejected(self):
        spec = RadarSpec((RadarAxis("AA", 0.5), RadarAxis("BB", 0.5)))
        with pytest.raises(ReportError):
            assesskit.radar_svg(spec)

    def test_labels_and_structure(self, reference_catalog):
        a = build_reference_scorecard_assessment(reference_catalog)
        svg = assesskit.radar_svg(assesskit.build_radar_spec(assesskit.overall_compliance(a)))
        assert svg.startswith("<svg")
        assert svg.rstrip().endswith("</svg>")
        for code in ("AC", "AT", "AU", "CM", "IA", "IR", "MA", "MP", "PS", "PE", "RA", "CA", "SC", "SI"):
            assert f">{code}<" in svg
        assert "stroke-dasharray" in svg
        assert "100%" in svg

    def test_byte_deterministic(self, reference_catalog):
        a = build_reference_scorecard_assessment(reference_catalog)
        spec = assesskit.build_radar_spec(assesskit.overall_compliance(a))
        assert assesskit.radar_svg(spec) == assesskit.radar_svg(spec)

    def test_matches_golden_file(self, reference_catalog):
        a = build_reference_scorecard_assessment(reference_catalog)
        svg = assesskit.radar_svg(assesskit.build_radar_spec(assesskit.overall_compliance(a)))
        golden = (GOLDEN_DIR / "radar_reference.svg").read_text(encoding="utf-8")
        assert svg == golden

    def test_no_threshold_ring_when_disabled(self, ir_fixture_assessment, reference_catalog):
        a = build_reference_scorecard_assessment(reference_catalog)
        score = assesskit.overall_compliance(a)
        with_ring = assesskit.radar_svg(assesskit.build_radar_spec(score))
        without = assesskit.radar_svg(
            assesskit.build_radar_spec(score, threshold_ring=False)
        )
        assert "stroke-dasharray" in with_ring
        assert "stroke-dasharray" not in without
