"""Assessment state: per-requirement responses, ODP values, method matrices.

An Assessment is an immutable value. Every mutating operation returns a new
Assessment with ``revision`` bumped by exactly one, which is what the HTTP
service's optimistic concurrency check keys on. Serialization is canonical
and byte-stable: serializing, loading, and serializing again reproduces the
same bytes.
"""

from __future__ import annotations

import enum
import json
import os
import tempfile
from dataclasses import dataclass, field, replace
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Mapping

from .catalog import (
    Catalog,
    CatalogView,
    HipaaType,
    HIPAA_ORDER,
    Requirement,
    SecurityLevel,
    Tier,
    extract_odp_slots,
    parse_requirement_id,
    render_requirement_text,
    select_level,
)
from .errors import (
    AssessmentError,
    AssessmentFormatError,
    DigestMismatchError,
)

DEFAULT_THRESHOLD = 0.80
FILE_FORMAT = "assessment-v1"

# Shortcut names accepted wherever a partial value can be entered.
PARTIAL_SHORTCUTS = {"PL": 0.25, "PM": 0.50, "PH": 0.75}


class Satisfaction(enum.Enum):
    """How a requirement is met. Single-letter codes are the wire format."""

    YES = "Y"
    PARTIAL = "P"
    ALTERNATIVE = "A"  # met through an alternative approach, full credit
    NO = "N"
    NOT_APPLICABLE = "D"  # does not apply

    @property
    def code(self) -> str:
        return self.value


class Attribute(enum.Enum):
    """Depth or coverage rigor of an assessment method."""

    BASIC = "basic"
    FOCUSED = "focused"
    COMPREHENSIVE = "comprehensive"


class EvidenceKind(enum.Enum):
    SPECIFICATION = "specification"
    MECHANISM = "mechanism"
    ACTIVITY = "activity"
    INDIVIDUAL = "individual"


@dataclass(frozen=True)
class EvidenceItem:
    kind: EvidenceKind
    description: str = ""


@dataclass(frozen=True)
class MethodSpec:
    """Depth, coverage, and evidence for one assessment method. Attributes
    stay optional until the assessment is marked complete."""

    depth: Attribute | None = None
    coverage: Attribute | None = None
    evidence: tuple[EvidenceItem, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "evidence", tuple(self.evidence))

    @property
    def complete(self) -> bool:
        return self.depth is not None and self.coverage is not None


@dataclass(frozen=True)
class MethodMatrix:
    """Examine / interview / test rigor for one enhanced requirement."""

    examine: MethodSpec = MethodSpec()
    interview: MethodSpec = MethodSpec()
    test: MethodSpec = MethodSpec()

    def __post_init__(self):
        for method_name in ("examine", "test"):
            spec: MethodSpec = getattr(self, method_name)
            for item in spec.evidence:
                if item.kind is EvidenceKind.INDIVIDUAL:
                    raise AssessmentError(
                        f"individual-kind evidence belongs under interview, not {method_name}"
                    )

    @property
    def complete(self) -> bool:
        return self.examine.complete and self.interview.complete and self.test.complete


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class ResponseEntry:
    """One recorded answer for one requirement."""

    satisfaction: Satisfaction
    partial_value: float | None = None
    satisfying_statement: str = ""
    names: tuple[str, ...] = ()
    validation_tools: tuple[str, ...] = ()
    hipaa_types: frozenset[HipaaType] = frozenset()
    recorded_at: datetime | None = field(default_factory=_utcnow)
    recorded_by: str = ""

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "validation_tools", tuple(self.validation_tools))
        object.__setattr__(self, "hipaa_types", frozenset(self.hipaa_types))
        if self.satisfaction is Satisfaction.PARTIAL:
            if self.partial_value is None:
                raise AssessmentError("a partial response requires partial_value")
            if not 0.0 < self.partial_value < 1.0:
                raise AssessmentError(
                    f"partial_value must be strictly between 0 and 1, got {self.partial_value}"
                )
        elif self.partial_value is not None:
            raise AssessmentError(
                f"partial_value only applies to partial responses, not {self.satisfaction.code}"
            )


@dataclass(frozen=True)
class CatalogRef:
    schema_version: str
    digest: str


@dataclass(frozen=True)
class Completion:
    """Answered-question progress. Distinct from compliance: a 'does not
    apply' answer counts as progress but never as credit."""

    answered: int
    total: int

    @property
    def fraction(self) -> float:
        return self.answered / self.total if self.total else 0.0


@dataclass(frozen=True)
class Assessment:
    view: CatalogView
    catalog_ref: CatalogRef
    organization: str
    threshold: float
    completed_on: date | None
    responses: Mapping[str, ResponseEntry]
    odp_values: Mapping[tuple[str, int], str]
    method_matrices: Mapping[str, MethodMatrix]
    revision: int

    @property
    def level(self) -> SecurityLevel:
        return self.view.level

    def response_for(self, requirement_id: str) -> ResponseEntry | None:
        return self.responses.get(requirement_id)

    def rendered_text(self, requirement_id: str) -> str:
        """Requirement text with this assessment's ODP values substituted."""
        req = self._require(requirement_id)
        values = {
            ordinal: value
            for (rid, ordinal), value in self.odp_values.items()
            if rid == requirement_id
        }
        return render_requirement_text(req, values)

    def _require(self, requirement_id: str) -> Requirement:
        req = self.view.requirement(requirement_id)
        if req is None:
            raise AssessmentError(
                f"unknown requirement {requirement_id!r} for level {self.level.value}"
            )
        return req


def new_assessment(
    view: CatalogView,
    organization: str = "",
    threshold: float = DEFAULT_THRESHOLD,
) -> Assessment:
    """Start an empty assessment against a level-selected catalog view."""
    if not 0.0 <= threshold <= 1.0:
        raise AssessmentError(f"threshold must be within [0, 1], got {threshold}")
    return Assessment(
        view=view,
        catalog_ref=CatalogRef(view.schema_version, view.digest),
        organization=organization,
        threshold=threshold,
        completed_on=None,
        responses={},
        odp_values={},
        method_matrices={},
        revision=0,
    )


def record_response(a: Assessment, requirement_id: str, entry: ResponseEntry) -> Assessment:
    """Store or overwrite the answer for one requirement."""
    a._require(requirement_id)
    responses = dict(a.responses)
    responses[requirement_id] = entry
    return replace(a, responses=responses, revision=a.revision + 1)


def assign_odp(a: Assessment, requirement_id: str, ordinal: int, value: str) -> Assessment:
    """Set the organization-defined value for one ODP slot."""
    req = a._require(requirement_id)
    slots = extract_odp_slots(req)
    if not any(slot.ordinal == ordinal for slot in slots):
        raise AssessmentError(
            f"requirement {requirement_id} has {len(slots)} ODP slot(s); "
            f"ordinal {ordinal} does not exist"
        )
    odp_values = dict(a.odp_values)
    odp_values[(requirement_id, ordinal)] = value
    return replace(a, odp_values=odp_values, revision=a.revision + 1)


def set_method_matrix(a: Assessment, requirement_id: str, matrix: MethodMatrix) -> Assessment:
    """Attach examine/interview/test rigor to an enhanced requirement."""
    req = a._require(requirement_id)
    if req.tier is not Tier.ENHANCED:
        raise AssessmentError(
            f"method matrices apply to enhanced-tier requirements only; "
            f"{requirement_id} is base tier"
        )
    matrices = dict(a.method_matrices)
    matrices[requirement_id] = matrix
    return replace(a, method_matrices=matrices, revision=a.revision + 1)


def set_completed_on(a: Assessment, when: date) -> Assessment:
    """Mark the assessment finished.

    Refused while any recorded method matrix still has unset attribute
    cells: completion is the point where all six cells must be filled.
    """
    for rid, matrix in sorted(a.method_matrices.items()):
        if not matrix.complete:
            raise AssessmentError(
                f"cannot complete: method matrix for {rid} has unset depth/coverage cells"
            )
    return replace(a, completed_on=when, revision=a.revision + 1)


def completion(a: Assessment) -> Completion:
    """Progress over the level view. Any recorded response counts, including
    'does not apply'."""
    return Completion(answered=len(a.responses), total=a.view.requirement_count)


# ---------------------------------------------------------------------------
# Serialization

def serialize_assessment(a: Assessment) -> str:
    """Canonical JSON (sorted keys, 2-space indent, trailing newline)."""
    doc = {
        "file_format": FILE_FORMAT,
        "catalog": {
            "schema_version": a.catalog_ref.schema_version,
            "digest": a.catalog_ref.digest,
        },
        "level": a.level.value,
        "organization": a.organization,
        "threshold": a.threshold,
        "completed_on": a.completed_on.isoformat() if a.completed_on else None,
        "revision": a.revision,
        "responses": {
            rid: _entry_doc(entry) for rid, entry in a.responses.items()
        },
        "odp_values": _odp_doc(a.odp_values),
        "method_matrices": {
            rid: _matrix_doc(matrix) for rid, matrix in a.method_matrices.items()
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _entry_doc(entry: ResponseEntry) -> dict:
    return {
        "satisfaction": entry.satisfaction.code,
        "partial_value": entry.partial_value,
        "satisfying_statement": entry.satisfying_statement,
        "names": list(entry.names),
        "validation_tools": list(entry.validation_tools),
        "hipaa_types": [t.value for t in HIPAA_ORDER if t in entry.hipaa_types],
        "recorded_at": entry.recorded_at.isoformat() if entry.recorded_at else None,
        "recorded_by": entry.recorded_by,
    }


def _odp_doc(odp_values: Mapping[tuple[str, int], str]) -> dict:
    doc: dict[str, dict[str, str]] = {}
    for (rid, ordinal), value in odp_values.items():
        doc.setdefault(rid, {})[str(ordinal)] = value
    return doc


def _matrix_doc(matrix: MethodMatrix) -> dict:
    def spec_doc(spec: MethodSpec) -> dict:
        return {
            "depth": spec.depth.value if spec.depth else None,
            "coverage": spec.coverage.value if spec.coverage else None,
            "evidence": [
                {"kind": item.kind.value, "description": item.description}
                for item in spec.evidence
            ],
        }

    return {
        "examine": spec_doc(matrix.examine),
        "interview": spec_doc(matrix.interview),
        "test": spec_doc(matrix.test),
    }


def deserialize_assessment(
    text: str,
    catalog: Catalog,
    *,
    allow_digest_mismatch: bool = False,
) -> Assessment:
    """Rebuild an Assessment from its file form against a catalog.

    Raises:
        AssessmentFormatError: JSON syntax or schema violations (fatal).
        DigestMismatchError: stored digest differs from the supplied
            catalog's; pass ``allow_digest_mismatch=True`` to load anyway.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AssessmentFormatError(
            f"assessment file: syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise AssessmentFormatError("assessment file must be a JSON object")
    if raw.get("file_format") != FILE_FORMAT:
        raise AssessmentFormatError(
            f"unsupported file_format {raw.get('file_format')!r}; expected {FILE_FORMAT!r}"
        )

    try:
        level = SecurityLevel(raw["level"])
        catalog_raw = raw["catalog"]
        stored_ref = CatalogRef(
            str(catalog_raw["schema_version"]), str(catalog_raw["digest"])
        )
        organization = str(raw["organization"])
        threshold = raw["threshold"]
        completed_raw = raw["completed_on"]
        revision = raw["revision"]
        responses_raw = raw["responses"]
        odp_raw = raw["odp_values"]
        matrices_raw = raw["method_matrices"]
    except (KeyError, TypeError, ValueError) as exc:
        raise AssessmentFormatError(f"assessment file: missing or malformed field ({exc})") from exc

    if not isinstance(threshold, (int, float)) or isinstance(threshold, bool):
        raise AssessmentFormatError("threshold must be a number")
    if not 0.0 <= threshold <= 1.0:
        raise AssessmentFormatError(f"threshold must be within [0, 1], got {threshold}")
    if not isinstance(revision, int) or isinstance(revision, bool) or revision < 0:
        raise AssessmentFormatError("revision must be a non-negative integer")
    if not isinstance(responses_raw, dict) or not isinstance(odp_raw, dict) \
            or not isinstance(matrices_raw, dict):
        raise AssessmentFormatError("responses, odp_values, and method_matrices must be objects")

    view = select_level(catalog, level)
    if stored_ref.digest != view.digest and not allow_digest_mismatch:
        raise DigestMismatchError(stored_ref.digest, view.digest)

    completed_on = None
    if completed_raw is not None:
        try:
            completed_on = date.fromisoformat(completed_raw)
        except (TypeError, ValueError) as exc:
            raise AssessmentFormatError(f"bad completed_on date: {completed_raw!r}") from exc

    a = new_assessment(view, organization, float(threshold))
    a = replace(a, catalog_ref=stored_ref, completed_on=completed_on)

    responses: dict[str, ResponseEntry] = {}
    for rid, entry_raw in responses_raw.items():
        if view.requirement(rid) is None:
            raise AssessmentFormatError(
                f"response for requirement {rid!r} not present in the "
                f"{level.value}-level catalog view"
            )
        responses[rid] = _entry_from_doc(rid, entry_raw)

    odp_values: dict[tuple[str, int], str] = {}
    for rid, by_ordinal in odp_raw.items():
        req = view.requirement(rid)
        if req is None:
            raise AssessmentFormatError(f"ODP value for unknown requirement {rid!r}")
        valid_ordinals = {slot.ordinal for slot in extract_odp_slots(req)}
        if not isinstance(by_ordinal, dict):
            raise AssessmentFormatError(f"ODP values for {rid!r} must be an object")
        for raw_ordinal, value in by_ordinal.items():
            try:
                ordinal = int(raw_ordinal)
            except ValueError as exc:
                raise AssessmentFormatError(f"bad ODP ordinal {raw_ordinal!r} for {rid}") from exc
            if ordinal not in valid_ordinals:
                raise AssessmentFormatError(f"requirement {rid} has no ODP slot {ordinal}")
            if not isinstance(value, str):
                raise AssessmentFormatError(f"ODP value for {rid}[{ordinal}] must be a string")
            odp_values[(rid, ordinal)] = value

    matrices: dict[str, MethodMatrix] = {}
    for rid, matrix_raw in matrices_raw.items():
        req = view.requirement(rid)
        if req is None or req.tier is not Tier.ENHANCED:
            raise AssessmentFormatError(
                f"method matrix for {rid!r}: not an enhanced requirement in this view"
            )
        matrices[rid] = _matrix_from_doc(rid, matrix_raw)

    return replace(
        a,
        responses=responses,
        odp_values=odp_values,
        method_matrices=matrices,
        revision=revision,
    )


def _entry_from_doc(rid: str, raw: object) -> ResponseEntry:
    if not isinstance(raw, dict):
        raise AssessmentFormatError(f"response for {rid} must be an object")
    try:
        satisfaction = Satisfaction(raw["satisfaction"])
    except (KeyError, ValueError) as exc:
        raise AssessmentFormatError(
            f"response for {rid}: bad satisfaction code {raw.get('satisfaction')!r}"
        ) from exc
    partial_value = raw.get("partial_value")
    if partial_value is not None and (
        not isinstance(partial_value, (int, float)) or isinstance(partial_value, bool)
    ):
        raise AssessmentFormatError(f"response for {rid}: partial_value must be a number")
    recorded_at = None
    recorded_raw = raw.get("recorded_at")
    if recorded_raw is not None:
        try:
            recorded_at = datetime.fromisoformat(recorded_raw)
        except (TypeError, ValueError) as exc:
            raise AssessmentFormatError(f"response for {rid}: bad recorded_at timestamp") from exc
    hipaa: set[HipaaType] = set()
    for value in raw.get("hipaa_types", []):
        try:
            hipaa.add(HipaaType(value))
        except ValueError as exc:
            raise AssessmentFormatError(f"response for {rid}: unknown HIPAA type {value!r}") from exc
    try:
        return ResponseEntry(
            satisfaction=satisfaction,
            partial_value=float(partial_value) if partial_value is not None else None,
            satisfying_statement=str(raw.get("satisfying_statement", "")),
            names=tuple(str(n) for n in raw.get("names", [])),
            validation_tools=tuple(str(t) for t in raw.get("validation_tools", [])),
            hipaa_types=frozenset(hipaa),
            recorded_at=recorded_at,
            recorded_by=str(raw.get("recorded_by", "")),
        )
    except AssessmentError as exc:
        raise AssessmentFormatError(f"response for {rid}: {exc}") from exc


def _matrix_from_doc(rid: str, raw: object) -> MethodMatrix:
    if not isinstance(raw, dict):
        raise AssessmentFormatError(f"method matrix for {rid} must be an object")

    def spec_from(method_name: str) -> MethodSpec:
        spec_raw = raw.get(method_name, {})
        if not isinstance(spec_raw, dict):
            raise AssessmentFormatError(f"matrix {rid}.{method_name} must be an object")
        def attr(key: str) -> Attribute | None:
            value = spec_raw.get(key)
            if value is None:
                return None
            try:
                return Attribute(value)
            except ValueError as exc:
                raise AssessmentFormatError(
                    f"matrix {rid}.{method_name}.{key}: unknown attribute {value!r}"
                ) from exc
        evidence = []
        for item_raw in spec_raw.get("evidence", []):
            if not isinstance(item_raw, dict):
                raise AssessmentFormatError(f"matrix {rid}.{method_name}: bad evidence item")
            try:
                kind = EvidenceKind(item_raw.get("kind"))
            except ValueError as exc:
                raise AssessmentFormatError(
                    f"matrix {rid}.{method_name}: unknown evidence kind "
                    f"{item_raw.get('kind')!r}"
                ) from exc
            evidence.append(EvidenceItem(kind, str(item_raw.get("description", ""))))
        return MethodSpec(attr("depth"), attr("coverage"), tuple(evidence))

    try:
        return MethodMatrix(spec_from("examine"), spec_from("interview"), spec_from("test"))
    except AssessmentError as exc:
        raise AssessmentFormatError(f"method matrix for {rid}: {exc}") from exc


def save_assessment(a: Assessment, path: str | Path) -> None:
    """Write atomically: temp file in the target directory, fsync, rename.
    A failure never leaves a partially written file behind."""
    path = Path(path)
    text = serialize_assessment(a)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.tmp.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def load_assessment(
    path: str | Path,
    catalog: Catalog,
    *,
    allow_digest_mismatch: bool = False,
) -> Assessment:
    text = Path(path).read_text(encoding="utf-8")
    return deserialize_assessment(text, catalog, allow_digest_mismatch=allow_digest_mismatch)


# ---------------------------------------------------------------------------
# Diff

@dataclass(frozen=True)
class DiffEntry:
    requirement_id: str
    field: str
    before: str | None
    after: str | None


_RESPONSE_FIELDS = (
    "satisfaction",
    "partial_value",
    "satisfying_statement",
    "names",
    "validation_tools",
    "hipaa_types",
    "recorded_at",
    "recorded_by",
)


def _response_field_views(entry: ResponseEntry | None) -> dict[str, str | None]:
    """Render entry fields for comparison. Absent entries and empty-ish
    values both map to None so a bare added response diffs as one line."""
    if entry is None:
        return {name: None for name in _RESPONSE_FIELDS}
    return {
        "satisfaction": entry.satisfaction.code,
        "partial_value": repr(entry.partial_value) if entry.partial_value is not None else None,
        "satisfying_statement": entry.satisfying_statement or None,
        "names": ", ".join(entry.names) or None,
        "validation_tools": ", ".join(entry.validation_tools) or None,
        "hipaa_types": ", ".join(
            t.value for t in HIPAA_ORDER if t in entry.hipaa_types
        ) or None,
        "recorded_at": entry.recorded_at.isoformat() if entry.recorded_at else None,
        "recorded_by": entry.recorded_by or None,
    }


def _matrix_field_views(matrix: MethodMatrix | None) -> dict[str, str | None]:
    fields: dict[str, str | None] = {}
    for method_name in ("examine", "interview", "test"):
        spec = getattr(matrix, method_name) if matrix else None
        fields[f"{method_name}.depth"] = spec.depth.value if spec and spec.depth else None
        fields[f"{method_name}.coverage"] = spec.coverage.value if spec and spec.coverage else None
        fields[f"{method_name}.evidence"] = (
            "; ".join(f"{i.kind.value}: {i.description}" for i in spec.evidence)
            if spec and spec.evidence
            else None
        )
    return fields


def diff_assessments(old: Assessment, new: Assessment) -> tuple[DiffEntry, ...]:
    """Field-level differences, ordered by requirement id then field name.

    Both assessments must reference the same catalog digest and level.
    Empty iff responses, ODP values, and matrices are all identical.
    """
    if old.catalog_ref != new.catalog_ref:
        raise AssessmentError("cannot diff: assessments reference different catalogs")
    if old.level != new.level:
        raise AssessmentError("cannot diff: assessments use different security levels")

    entries: list[DiffEntry] = []

    for rid in set(old.responses) | set(new.responses):
        before = _response_field_views(old.responses.get(rid))
        after = _response_field_views(new.responses.get(rid))
        for name in _RESPONSE_FIELDS:
            if before[name] != after[name]:
                entries.append(DiffEntry(rid, name, before[name], after[name]))

    for rid, ordinal in set(old.odp_values) | set(new.odp_values):
        b = old.odp_values.get((rid, ordinal))
        n = new.odp_values.get((rid, ordinal))
        if b != n:
            entries.append(DiffEntry(rid, f"odp[{ordinal}]", b, n))

    for rid in set(old.method_matrices) | set(new.method_matrices):
        before = _matrix_field_views(old.method_matrices.get(rid))
        after = _matrix_field_views(new.method_matrices.get(rid))
        for name in sorted(before):
            if before[name] != after[name]:
                entries.append(DiffEntry(rid, name, before[name], after[name]))

    def sort_key(entry: DiffEntry) -> tuple[str, int, str]:
        code, index = parse_requirement_id(entry.requirement_id)
        return (code, index, entry.field)

    return tuple(sorted(entries, key=sort_key))
