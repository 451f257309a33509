"""Report generation: snapshot documents, radar SVG, CSV exports.

All rounding lives here. Family percentages display with one decimal,
the overall aggregate with two. CSV output follows RFC 4180 quoting with
LF line endings. The radar SVG is byte-deterministic: the same inputs
always produce the same bytes.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from .assessment import Assessment, completion
from .catalog import EFFECT_ORDER, SecurityLevel, parse_requirement_id
from .effects import CellStatus, EffectsRow
from .errors import ReportError
from .scoring import OverallScore, Verdict, overall_compliance

NO_EFFECTS_LABEL = "No Adverse Effects Listed"


def format_percent(fraction: float, decimals: int = 1, *, sign: bool = False) -> str:
    """Display rounding for a 0..1 fraction, e.g. 0.8646 -> '86.46' (2 dp)."""
    text = f"{fraction * 100:.{decimals}f}"
    return text + "%" if sign else text


def format_points(points: float) -> str:
    """Exact-ish short display for a points sum: 3.0 -> '3', 1.25 -> '1.25'."""
    if points == int(points):
        return str(int(points))
    return format(points, ".6g")


def security_level_label(level: SecurityLevel) -> str:
    return "HIGH (Enhanced)" if level is SecurityLevel.HIGH else "MEDIUM"


# ---------------------------------------------------------------------------
# Snapshot

@dataclass(frozen=True)
class SnapshotRow:
    index: int
    code: str | None  # satisfaction code, None while unanswered
    text: str  # requirement text with ODP values substituted
    emphasized: bool  # anything other than a recorded yes


@dataclass(frozen=True)
class SnapshotFamilyBlock:
    code: str
    name: str
    question_count: int
    answered_count: int
    completion_percent: str  # 1 decimal
    points_display: str
    compliance_percent: str  # 1 decimal
    rows: tuple[SnapshotRow, ...]


@dataclass(frozen=True)
class SnapshotDoc:
    title: str
    security_level_label: str
    organization: str
    completed_on: str | None
    threshold: float
    blocks: tuple[SnapshotFamilyBlock, ...]
    question_total: int
    answered_total: int
    completion_percent: str  # 1 decimal
    aggregate_percent: str  # 2 decimals, e.g. '86.46%'
    aggregate_verdict: str


def snapshot(a: Assessment) -> SnapshotDoc:
    """Whole-assessment summary document. Numbers come straight from the
    scoring module; this function only formats them."""
    score = overall_compliance(a)
    progress = completion(a)
    blocks = []
    for family, family_score in zip(a.view.families, score.family_scores):
        rows = []
        for req in family.requirements:
            entry = a.responses.get(req.id)
            rows.append(
                SnapshotRow(
                    index=req.index,
                    code=entry.satisfaction.code if entry else None,
                    text=a.rendered_text(req.id),
                    emphasized=entry is None or entry.satisfaction.code != "Y",
                )
            )
        answered = family_score.answered_count
        count = family_score.requirement_count
        blocks.append(
            SnapshotFamilyBlock(
                code=family.code,
                name=family.name,
                question_count=count,
                answered_count=answered,
                completion_percent=format_percent(answered / count if count else 0.0),
                points_display=format_points(family_score.points),
                compliance_percent=format_percent(family_score.fraction),
                rows=tuple(rows),
            )
        )
    return SnapshotDoc(
        title=a.view.title,
        security_level_label=security_level_label(a.level),
        organization=a.organization,
        completed_on=a.completed_on.isoformat() if a.completed_on else None,
        threshold=a.threshold,
        blocks=tuple(blocks),
        question_total=progress.total,
        answered_total=progress.answered,
        completion_percent=format_percent(progress.fraction),
        aggregate_percent=format_percent(score.fraction, 2, sign=True),
        aggregate_verdict=score.aggregate_verdict.value,
    )


def render_snapshot_text(doc: SnapshotDoc) -> str:
    """Plain-text rendering of a snapshot document."""
    lines = []
    lines.append(f"SNAPSHOT{'':>40}Security Level: {doc.security_level_label}")
    lines.append(doc.title)
    org = doc.organization or "-"
    completed = doc.completed_on or "in progress"
    lines.append(f"Organization: {org}    Completed: {completed}")
    lines.append("")
    for block in doc.blocks:
        lines.append(
            f"{block.name.upper()} ({block.code})  "
            f"questions: {block.question_count}  "
            f"completed: {block.answered_count} {block.completion_percent}%  "
            f"compliance: {block.points_display} {block.compliance_percent}%"
        )
        for row in block.rows:
            code = row.code if row.code is not None else "-"
            marker = "*" if row.emphasized else " "
            lines.append(f" {marker}{row.index:>3}  {code}  {row.text}")
        lines.append("")
    lines.append(
        f"Questions: {doc.question_total}  "
        f"Completed: {doc.answered_total} {doc.completion_percent}%"
    )
    lines.append(f"Overall compliance: {doc.aggregate_percent}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Radar

@dataclass(frozen=True)
class RadarAxis:
    code: str
    fraction: float


@dataclass(frozen=True)
class RadarSpec:
    """Geometry for a family-compliance radar. 800x800 user units with a
    40-unit label margin; axis 0 points at 12 o'clock and axes proceed
    clockwise, evenly spaced."""

    axes: tuple[RadarAxis, ...]
    size: float = 800.0
    margin: float = 40.0
    threshold: float | None = None

    @property
    def center(self) -> tuple[float, float]:
        return (self.size / 2.0, self.size / 2.0)

    @property
    def radius(self) -> float:
        return self.size / 2.0 - self.margin

    def point(self, axis_index: int, fraction: float) -> tuple[float, float]:
        """Position along one spoke at a 0..1 radial fraction."""
        n = len(self.axes)
        angle = -math.pi / 2.0 + (2.0 * math.pi * axis_index) / n
        cx, cy = self.center
        return (
            cx + self.radius * fraction * math.cos(angle),
            cy + self.radius * fraction * math.sin(angle),
        )

    @property
    def polygon_points(self) -> tuple[tuple[float, float], ...]:
        return tuple(
            self.point(i, axis.fraction) for i, axis in enumerate(self.axes)
        )


def build_radar_spec(score: OverallScore, *, threshold_ring: bool = True) -> RadarSpec:
    """One axis per family in the level view, in catalog order."""
    axes = tuple(
        RadarAxis(fs.family_code, fs.fraction) for fs in score.family_scores
    )
    return RadarSpec(axes=axes, threshold=score.threshold if threshold_ring else None)


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def _polygon(spec: RadarSpec, fraction: float) -> str:
    points = (spec.point(i, fraction) for i in range(len(spec.axes)))
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)


def radar_svg(spec: RadarSpec) -> str:
    """Deterministic standalone SVG for a radar spec.

    Raises:
        ReportError: with fewer than three axes there is no polygon to draw.
    """
    n = len(spec.axes)
    if n < 3:
        raise ReportError(f"a radar chart needs at least 3 axes, got {n}")
    size = _fmt(spec.size).rstrip("0").rstrip(".")
    out = io.StringIO()
    out.write(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">\n'
    )
    out.write(f'  <rect width="{size}" height="{size}" fill="#ffffff"/>\n')
    # concentric grid at 25% steps
    for ring in (0.25, 0.5, 0.75, 1.0):
        stroke = "#9aa4ad" if ring == 1.0 else "#d4dade"
        out.write(
            f'  <polygon points="{_polygon(spec, ring)}" fill="none" '
            f'stroke="{stroke}" stroke-width="1"/>\n'
        )
    cx, cy = spec.center
    for i in range(n):
        x, y = spec.point(i, 1.0)
        out.write(
            f'  <line x1="{_fmt(cx)}" y1="{_fmt(cy)}" x2="{_fmt(x)}" y2="{_fmt(y)}" '
            f'stroke="#d4dade" stroke-width="1"/>\n'
        )
    # radial scale labels up the first spoke
    for ring in (0.25, 0.5, 0.75, 1.0):
        x, y = spec.point(0, ring)
        label = format_percent(ring, 0, sign=True)
        out.write(
            f'  <text x="{_fmt(x + 6)}" y="{_fmt(y - 4)}" font-family="sans-serif" '
            f'font-size="12" fill="#9aa4ad">{label}</text>\n'
        )
    if spec.threshold is not None:
        out.write(
            f'  <polygon points="{_polygon(spec, spec.threshold)}" fill="none" '
            f'stroke="#c0392b" stroke-width="1.5" stroke-dasharray="6 4"/>\n'
        )
    out.write(
        f'  <polygon points="{_data_polygon(spec)}" '
        f'fill="#2980b9" fill-opacity="0.35" stroke="#2980b9" stroke-width="2"/>\n'
    )
    for i, axis in enumerate(spec.axes):
        x, y = spec.point(i, 1.0)
        # push labels outward into the margin
        lx = cx + (x - cx) * (1.0 + spec.margin * 0.55 / spec.radius)
        ly = cy + (y - cy) * (1.0 + spec.margin * 0.55 / spec.radius)
        out.write(
            f'  <text x="{_fmt(lx)}" y="{_fmt(ly + 5)}" font-family="sans-serif" '
            f'font-size="16" text-anchor="middle" fill="#2c3e50">{axis.code}</text>\n'
        )
    out.write("</svg>\n")
    return out.getvalue()


def _data_polygon(spec: RadarSpec) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in spec.polygon_points)


# ---------------------------------------------------------------------------
# CSV exports

def compliance_table(score: OverallScore) -> str:
    """Per-family compliance as CSV with a final aggregate row."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["family", "points", "count", "percent", "verdict"])
    for fs in score.family_scores:
        writer.writerow(
            [
                fs.family_code,
                format_points(fs.points),
                fs.requirement_count,
                format_percent(fs.fraction),
                score.family_verdicts[fs.family_code].value,
            ]
        )
    writer.writerow(
        [
            "TOTAL",
            format_points(score.total_points),
            score.total_requirements,
            format_percent(score.fraction),
            score.aggregate_verdict.value,
        ]
    )
    return out.getvalue()


@dataclass(frozen=True)
class EffectsDocRow:
    family_code: str
    requirement_id: str
    requirement_index: int
    code: str  # satisfaction code, '' while unanswered
    cells: tuple[str, ...]  # 'Yes' / 'No' / '' in EFFECT_ORDER
    no_effects_listed: bool
    unanswered: bool


@dataclass(frozen=True)
class EffectsRender:
    table: str  # CSV
    rows: tuple[EffectsDocRow, ...]


_CELL_TEXT = {CellStatus.YES: "Yes", CellStatus.NO: "No", CellStatus.BLANK: ""}


def render_effects(rows: tuple[EffectsRow, ...]) -> EffectsRender:
    """CSV export plus a display-ready document model.

    A row with no annotated effects carries the 'No Adverse Effects Listed'
    label across the effect columns (first cell in the CSV; a span flag in
    the document model).
    """
    doc_rows = []
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["family", "requirement", "code"] + [e.value for e in EFFECT_ORDER]
    )
    for row in rows:
        index = parse_requirement_id(row.requirement_id)[1]
        code = row.satisfaction_code or ""
        if row.no_effects_listed:
            cells = (NO_EFFECTS_LABEL, "", "", "", "")
        else:
            cells = tuple(_CELL_TEXT[row.cells[e]] for e in EFFECT_ORDER)
        writer.writerow([row.family_code, index, code, *cells])
        doc_rows.append(
            EffectsDocRow(
                family_code=row.family_code,
                requirement_id=row.requirement_id,
                requirement_index=index,
                code=code,
                cells=cells,
                no_effects_listed=row.no_effects_listed,
                unanswered=row.unanswered,
            )
        )
    return EffectsRender(table=out.getvalue(), rows=tuple(doc_rows))
