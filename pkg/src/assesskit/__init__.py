"""Security requirement assessment toolkit.

Load a control catalog, record per-requirement responses, score family
and aggregate compliance against a threshold, map adversary effects for
enhanced requirements, and render snapshot, CSV, and radar reports. The
same engine backs the command line interface and the HTTP service.
"""

from __future__ import annotations

from .assessment import (
    DEFAULT_THRESHOLD,
    FILE_FORMAT,
    PARTIAL_SHORTCUTS,
    Assessment,
    Attribute,
    CatalogRef,
    Completion,
    DiffEntry,
    EvidenceItem,
    EvidenceKind,
    MethodMatrix,
    MethodSpec,
    ResponseEntry,
    Satisfaction,
    assign_odp,
    completion,
    deserialize_assessment,
    diff_assessments,
    load_assessment,
    new_assessment,
    record_response,
    save_assessment,
    serialize_assessment,
    set_completed_on,
    set_method_matrix,
)
from .catalog import (
    EFFECT_ORDER,
    HIPAA_ORDER,
    AdversaryEffect,
    Catalog,
    CatalogCounts,
    CatalogView,
    ControlFamily,
    FamilyView,
    HipaaType,
    OdpSlot,
    Requirement,
    SecurityLevel,
    Tier,
    ValidationFinding,
    ValidationReport,
    catalog_digest,
    extract_odp_slots,
    inspect_catalog,
    load_reference_catalog,
    load_sample_catalog,
    parse_catalog,
    parse_requirement_id,
    reference_catalog_path,
    render_requirement_text,
    sample_catalog_path,
    select_level,
    serialize_catalog,
    validate_catalog,
)
from .effects import CellStatus, EffectsRow, effects_map
from .errors import (
    AssessmentError,
    AssessmentFormatError,
    CatalogError,
    DigestMismatchError,
    ReportError,
)
from .report import (
    NO_EFFECTS_LABEL,
    RadarAxis,
    RadarSpec,
    SnapshotDoc,
    SnapshotFamilyBlock,
    SnapshotRow,
    build_radar_spec,
    compliance_table,
    format_percent,
    format_points,
    radar_svg,
    render_effects,
    render_snapshot_text,
    snapshot,
)
from .scoring import (
    Determination,
    FamilyScore,
    Finding,
    OverallScore,
    ThresholdVerdicts,
    Verdict,
    family_compliance,
    finding_for,
    findings_for,
    overall_compliance,
    threshold_eval,
    value_of,
)

__version__ = "0.1.0"

__all__ = [
    "AdversaryEffect",
    "Assessment",
    "AssessmentError",
    "AssessmentFormatError",
    "Attribute",
    "Catalog",
    "CatalogCounts",
    "CatalogError",
    "CatalogRef",
    "CatalogView",
    "CellStatus",
    "Completion",
    "ControlFamily",
    "DEFAULT_THRESHOLD",
    "Determination",
    "DiffEntry",
    "DigestMismatchError",
    "EFFECT_ORDER",
    "EffectsRow",
    "EvidenceItem",
    "EvidenceKind",
    "FILE_FORMAT",
    "FamilyScore",
    "FamilyView",
    "Finding",
    "HIPAA_ORDER",
    "HipaaType",
    "MethodMatrix",
    "MethodSpec",
    "NO_EFFECTS_LABEL",
    "OdpSlot",
    "OverallScore",
    "PARTIAL_SHORTCUTS",
    "RadarAxis",
    "RadarSpec",
    "ReportError",
    "Requirement",
    "ResponseEntry",
    "Satisfaction",
    "SecurityLevel",
    "SnapshotDoc",
    "SnapshotFamilyBlock",
    "SnapshotRow",
    "ThresholdVerdicts",
    "Tier",
    "ValidationFinding",
    "ValidationReport",
    "Verdict",
    "assign_odp",
    "build_radar_spec",
    "catalog_digest",
    "compliance_table",
    "completion",
    "deserialize_assessment",
    "diff_assessments",
    "effects_map",
    "extract_odp_slots",
    "family_compliance",
    "finding_for",
    "findings_for",
    "format_percent",
    "format_points",
    "inspect_catalog",
    "load_assessment",
    "load_reference_catalog",
    "load_sample_catalog",
    "new_assessment",
    "overall_compliance",
    "parse_catalog",
    "parse_requirement_id",
    "radar_svg",
    "record_response",
    "reference_catalog_path",
    "render_effects",
    "render_requirement_text",
    "render_snapshot_text",
    "sample_catalog_path",
    "save_assessment",
    "select_level",
    "serialize_assessment",
    "serialize_catalog",
    "set_completed_on",
    "set_method_matrix",
    "snapshot",
    "threshold_eval",
    "value_of",
]
