"""Control catalog model: families, requirements, tiers, and ODP slots.

A catalog is an immutable tree parsed from JSON. Requirement ids look like
``"IR.3"``: the owning family code, a dot, and a 1-based index that must be
contiguous within the family. Square brackets in requirement text delimit
organization-defined parameter (ODP) slots, e.g. ``"within [24 hours]"``;
the bracketed text is the slot's default value. Brackets never nest and
have no escape syntax.

File format (canonical form uses this key order, 2-space indent)::

    {
      "schema_version": "1.0",
      "title": "...",
      "source_note": "...",
      "families": [
        {"code": "IR", "name": "Incident Response", "requirements": [
          {"id": "IR.1", "tier": "base", "text": "...",
           "hipaa_types": ["administrative"], "adversary_effects": []}
        ]}
      ]
    }
"""

from __future__ import annotations

import enum
import hashlib
import json
import re
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from typing import Iterator, Mapping

from .errors import CatalogError

ERROR = "error"
WARNING = "warning"


class Tier(enum.Enum):
    BASE = "base"
    ENHANCED = "enhanced"


class SecurityLevel(enum.Enum):
    """Assessment scope: medium covers base requirements only, high covers all."""

    MEDIUM = "medium"
    HIGH = "high"


class AdversaryEffect(enum.Enum):
    REDIRECT = "redirect"
    PRECLUDE = "preclude"
    IMPEDE = "impede"
    LIMIT = "limit"
    EXPOSE = "expose"


# Column order used by every report and serializer that lays effects out.
EFFECT_ORDER: tuple[AdversaryEffect, ...] = (
    AdversaryEffect.REDIRECT,
    AdversaryEffect.PRECLUDE,
    AdversaryEffect.IMPEDE,
    AdversaryEffect.LIMIT,
    AdversaryEffect.EXPOSE,
)


class HipaaType(enum.Enum):
    ADMINISTRATIVE = "administrative"
    TECHNICAL = "technical"
    PHYSICAL = "physical"


HIPAA_ORDER: tuple[HipaaType, ...] = (
    HipaaType.ADMINISTRATIVE,
    HipaaType.TECHNICAL,
    HipaaType.PHYSICAL,
)


_REQUIREMENT_ID = re.compile(r"^([A-Z]+)\.([1-9][0-9]*)$")


def parse_requirement_id(requirement_id: str) -> tuple[str, int]:
    """Split ``"IR.3"`` into ``("IR", 3)``. Raises ValueError on malformed ids."""
    match = _REQUIREMENT_ID.match(requirement_id)
    if match is None:
        raise ValueError(
            f"malformed requirement id {requirement_id!r}: "
            "expected an uppercase family code, a dot, and a 1-based index"
        )
    return match.group(1), int(match.group(2))


@dataclass(frozen=True)
class OdpSlot:
    """One organization-defined parameter slot within a requirement's text."""

    requirement_id: str
    ordinal: int  # 1-based, in order of appearance
    default_text: str


@dataclass(frozen=True)
class Requirement:
    id: str
    tier: Tier
    text: str
    hipaa_types: frozenset[HipaaType] = frozenset()
    adversary_effects: frozenset[AdversaryEffect] = frozenset()

    @property
    def family_code(self) -> str:
        return parse_requirement_id(self.id)[0]

    @property
    def index(self) -> int:
        return parse_requirement_id(self.id)[1]


@dataclass(frozen=True)
class ControlFamily:
    code: str
    name: str
    requirements: tuple[Requirement, ...]


@dataclass(frozen=True)
class Catalog:
    schema_version: str
    title: str
    source_note: str
    families: tuple[ControlFamily, ...]

    def family(self, code: str) -> ControlFamily | None:
        for fam in self.families:
            if fam.code == code:
                return fam
        return None

    def iter_requirements(self) -> Iterator[Requirement]:
        for fam in self.families:
            yield from fam.requirements


@dataclass(frozen=True)
class CatalogCounts:
    families: int
    base: int
    enhanced: int

    @property
    def total(self) -> int:
        return self.base + self.enhanced


@dataclass(frozen=True)
class ValidationFinding:
    level: str  # ERROR or WARNING
    message: str
    location: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[ValidationFinding, ...]
    counts: CatalogCounts

    @property
    def errors(self) -> tuple[ValidationFinding, ...]:
        return tuple(f for f in self.findings if f.level == ERROR)

    @property
    def warnings(self) -> tuple[ValidationFinding, ...]:
        return tuple(f for f in self.findings if f.level == WARNING)

    @property
    def ok(self) -> bool:
        return not self.errors


# ---------------------------------------------------------------------------
# ODP slot scanning

def _scan_odp_segments(text: str, location: str = "text") -> list[tuple[str, str]]:
    """Split requirement text into ("literal", s) / ("odp", default) segments.

    Raises:
        CatalogError: on an unterminated span, a nested ``[``, or a stray ``]``.
    """
    segments: list[tuple[str, str]] = []
    buf: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "[":
            close = text.find("]", i + 1)
            if close == -1:
                raise CatalogError(f"unterminated ODP bracket at offset {i}", location)
            inner = text.find("[", i + 1)
            if inner != -1 and inner < close:
                raise CatalogError(f"nested '[' inside ODP span at offset {inner}", location)
            if buf:
                segments.append(("literal", "".join(buf)))
                buf = []
            segments.append(("odp", text[i + 1 : close]))
            i = close + 1
        elif ch == "]":
            raise CatalogError(f"']' without matching '[' at offset {i}", location)
        else:
            buf.append(ch)
            i += 1
    if buf:
        segments.append(("literal", "".join(buf)))
    return segments


def extract_odp_slots(requirement: Requirement) -> tuple[OdpSlot, ...]:
    """All ODP slots of a requirement, ordinal-numbered in order of appearance."""
    slots = []
    ordinal = 0
    for kind, content in _scan_odp_segments(requirement.text, requirement.id):
        if kind == "odp":
            ordinal += 1
            slots.append(OdpSlot(requirement.id, ordinal, content))
    return tuple(slots)


def render_requirement_text(requirement: Requirement, values: Mapping[int, str] | None = None) -> str:
    """Requirement text with ODP slots filled in.

    Assigned values replace the bracketed defaults by ordinal; unassigned
    slots keep their default. Brackets stay in place either way, so a
    render with no values reproduces the original text exactly.
    """
    values = values or {}
    parts: list[str] = []
    ordinal = 0
    for kind, content in _scan_odp_segments(requirement.text, requirement.id):
        if kind == "literal":
            parts.append(content)
        else:
            ordinal += 1
            parts.append("[" + values.get(ordinal, content) + "]")
    return "".join(parts)


# ---------------------------------------------------------------------------
# Parsing

def _shape_error(message: str, location: str) -> CatalogError:
    return CatalogError(message, location)


def _build_catalog(raw: object) -> tuple[Catalog, list[ValidationFinding]]:
    """Build the value tree from decoded JSON.

    Shape problems (wrong types, missing keys, unknown tiers) raise
    CatalogError. Representable data problems (unknown effect or HIPAA
    names) are dropped and reported as findings so a validation pass can
    list them instead of dying on the first one.
    """
    findings: list[ValidationFinding] = []
    if not isinstance(raw, dict):
        raise _shape_error("catalog document must be a JSON object", "$")
    schema_version = raw.get("schema_version")
    if not isinstance(schema_version, str):
        raise _shape_error("schema_version must be a string", "$.schema_version")
    title = raw.get("title", "")
    source_note = raw.get("source_note", "")
    if not isinstance(title, str) or not isinstance(source_note, str):
        raise _shape_error("title and source_note must be strings", "$")
    raw_families = raw.get("families")
    if not isinstance(raw_families, list):
        raise _shape_error("families must be a list", "$.families")

    families: list[ControlFamily] = []
    for fi, raw_fam in enumerate(raw_families):
        floc = f"families[{fi}]"
        if not isinstance(raw_fam, dict):
            raise _shape_error("family must be an object", floc)
        code = raw_fam.get("code")
        name = raw_fam.get("name", "")
        if not isinstance(code, str):
            raise _shape_error("family code must be a string", floc)
        if not isinstance(name, str):
            raise _shape_error("family name must be a string", floc)
        raw_reqs = raw_fam.get("requirements")
        if not isinstance(raw_reqs, list):
            raise _shape_error("requirements must be a list", floc)
        reqs: list[Requirement] = []
        for ri, raw_req in enumerate(raw_reqs):
            rloc = f"{floc}.requirements[{ri}]"
            if not isinstance(raw_req, dict):
                raise _shape_error("requirement must be an object", rloc)
            rid = raw_req.get("id")
            if not isinstance(rid, str) or not rid:
                raise _shape_error("requirement id must be a non-empty string", rloc)
            raw_tier = raw_req.get("tier")
            try:
                tier = Tier(raw_tier)
            except ValueError:
                raise _shape_error(f"unknown tier {raw_tier!r}", rloc) from None
            text = raw_req.get("text")
            if not isinstance(text, str):
                raise _shape_error("requirement text must be a string", rloc)

            hipaa: set[HipaaType] = set()
            for value in _string_list(raw_req.get("hipaa_types", []), "hipaa_types", rloc):
                try:
                    hipaa.add(HipaaType(value))
                except ValueError:
                    findings.append(ValidationFinding(ERROR, f"unknown HIPAA type {value!r}", rloc))
            effects: set[AdversaryEffect] = set()
            for value in _string_list(raw_req.get("adversary_effects", []), "adversary_effects", rloc):
                try:
                    effects.add(AdversaryEffect(value))
                except ValueError:
                    findings.append(ValidationFinding(ERROR, f"unknown adversary effect {value!r}", rloc))
            reqs.append(Requirement(rid, tier, text, frozenset(hipaa), frozenset(effects)))
        families.append(ControlFamily(code, name, tuple(reqs)))
    catalog = Catalog(schema_version, title, source_note, tuple(families))
    return catalog, findings


def _string_list(value: object, key: str, location: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise _shape_error(f"{key} must be a list of strings", location)
    return value


def validate_catalog(catalog: Catalog) -> ValidationReport:
    """Check structural rules and return all findings plus a counts summary.

    Never raises; strict parsing is layered on top of this.
    """
    findings: list[ValidationFinding] = []
    base = enhanced = 0

    if not catalog.families:
        findings.append(ValidationFinding(ERROR, "empty catalog: no families", "$.families"))
    if not catalog.schema_version:
        findings.append(ValidationFinding(WARNING, "schema_version is empty", "$.schema_version"))

    seen_codes: dict[str, str] = {}
    seen_ids: dict[str, str] = {}
    for fi, fam in enumerate(catalog.families):
        floc = f"families[{fi}]"
        if not fam.code:
            findings.append(ValidationFinding(ERROR, "family code is empty", floc))
        if fam.code in seen_codes:
            findings.append(
                ValidationFinding(
                    ERROR,
                    f"duplicate family code {fam.code!r} (also at {seen_codes[fam.code]})",
                    floc,
                )
            )
        else:
            seen_codes[fam.code] = floc
        if not fam.requirements:
            findings.append(ValidationFinding(WARNING, f"family {fam.code!r} has no requirements", floc))

        seen_enhanced = False
        for ri, req in enumerate(fam.requirements):
            rloc = f"{floc}.requirements[{ri}]"
            if req.tier is Tier.BASE:
                base += 1
            else:
                enhanced += 1

            if req.id in seen_ids:
                findings.append(
                    ValidationFinding(
                        ERROR,
                        f"duplicate requirement id {req.id!r} (also at {seen_ids[req.id]})",
                        rloc,
                    )
                )
            else:
                seen_ids[req.id] = rloc

            expected = f"{fam.code}.{ri + 1}"
            if req.id != expected:
                findings.append(
                    ValidationFinding(
                        ERROR,
                        f"requirement id {req.id!r} must be {expected!r}: "
                        "ids are family code plus a contiguous 1-based index",
                        rloc,
                    )
                )

            if req.tier is Tier.BASE and req.adversary_effects:
                names = ", ".join(sorted(e.value for e in req.adversary_effects))
                findings.append(
                    ValidationFinding(
                        ERROR,
                        f"base-tier requirement carries adversary effects ({names}); "
                        "effects are enhanced-tier annotations",
                        rloc,
                    )
                )
            if req.tier is Tier.ENHANCED:
                seen_enhanced = True
            elif seen_enhanced:
                findings.append(
                    ValidationFinding(
                        WARNING,
                        "base-tier requirement listed after an enhanced one; "
                        "convention is base first",
                        rloc,
                    )
                )

            try:
                _scan_odp_segments(req.text, req.id)
            except CatalogError as exc:
                findings.append(ValidationFinding(ERROR, str(exc), rloc))

    counts = CatalogCounts(len(catalog.families), base, enhanced)
    return ValidationReport(tuple(findings), counts)


def inspect_catalog(source: str) -> tuple[Catalog, ValidationReport]:
    """Parse leniently for validation tooling.

    JSON syntax and shape errors still raise CatalogError (there is nothing
    to report findings against); everything representable comes back as a
    catalog plus a findings report.
    """
    try:
        raw = json.loads(source)
    except json.JSONDecodeError as exc:
        raise CatalogError(
            f"syntax error: {exc.msg}",
            location=f"line {exc.lineno}, column {exc.colno}",
        ) from exc
    catalog, build_findings = _build_catalog(raw)
    report = validate_catalog(catalog)
    return catalog, ValidationReport(tuple(build_findings) + report.findings, report.counts)


def parse_catalog(source: str) -> Catalog:
    """Parse a catalog strictly.

    Raises:
        CatalogError: on syntax errors (position-reported), shape errors,
            or any error-level validation finding (duplicate ids, malformed
            ODP spans, unknown effect names, effects on base-tier rows).
    """
    catalog, report = inspect_catalog(source)
    if report.errors:
        first = report.errors[0]
        raise CatalogError(first.message, first.location)
    return catalog


def serialize_catalog(catalog: Catalog) -> str:
    """Canonical, diffable JSON form. parse(serialize(c)) == c."""
    doc = {
        "schema_version": catalog.schema_version,
        "title": catalog.title,
        "source_note": catalog.source_note,
        "families": [
            {
                "code": fam.code,
                "name": fam.name,
                "requirements": [
                    {
                        "id": req.id,
                        "tier": req.tier.value,
                        "text": req.text,
                        "hipaa_types": [t.value for t in HIPAA_ORDER if t in req.hipaa_types],
                        "adversary_effects": [
                            e.value for e in EFFECT_ORDER if e in req.adversary_effects
                        ],
                    }
                    for req in fam.requirements
                ],
            }
            for fam in catalog.families
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def catalog_digest(catalog: Catalog) -> str:
    """Lowercase hex SHA-256 of the canonical serialized form."""
    return hashlib.sha256(serialize_catalog(catalog).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# Level selection

@dataclass(frozen=True)
class FamilyView:
    """A family as seen at a security level. ``empty`` flags families whose
    requirements were all filtered out by the level."""

    code: str
    name: str
    requirements: tuple[Requirement, ...]
    empty: bool


@dataclass(frozen=True)
class CatalogView:
    """The level-filtered slice of a catalog that assessments run against."""

    schema_version: str
    title: str
    digest: str
    level: SecurityLevel
    families: tuple[FamilyView, ...]

    @cached_property
    def _by_id(self) -> dict[str, Requirement]:
        return {req.id: req for fam in self.families for req in fam.requirements}

    def requirement(self, requirement_id: str) -> Requirement | None:
        return self._by_id.get(requirement_id)

    def family(self, code: str) -> FamilyView | None:
        for fam in self.families:
            if fam.code == code:
                return fam
        return None

    @property
    def requirement_count(self) -> int:
        return sum(len(fam.requirements) for fam in self.families)

    def iter_requirements(self) -> Iterator[Requirement]:
        for fam in self.families:
            yield from fam.requirements


def select_level(catalog: Catalog, level: SecurityLevel) -> CatalogView:
    """Filter the catalog to one security level.

    Medium keeps base-tier requirements only; high keeps everything. The
    family list is preserved either way: a family whose requirements all
    fall away is retained with its ``empty`` flag set.
    """
    digest = catalog_digest(catalog)
    families = []
    for fam in catalog.families:
        if level is SecurityLevel.HIGH:
            kept = fam.requirements
        else:
            kept = tuple(r for r in fam.requirements if r.tier is Tier.BASE)
        families.append(FamilyView(fam.code, fam.name, kept, empty=not kept))
    return CatalogView(catalog.schema_version, catalog.title, digest, level, tuple(families))


# ---------------------------------------------------------------------------
# Packaged data

def _read_data(name: str) -> str:
    return resources.files("assesskit.data").joinpath(name).read_text(encoding="utf-8")


def load_reference_catalog() -> Catalog:
    """The shipped SP 800-171r2 + SP 800-172 reference catalog
    (14 families, 110 base + 34 enhanced requirements)."""
    return parse_catalog(_read_data("reference_catalog.json"))


def load_sample_catalog() -> Catalog:
    """A small single-family incident response catalog used in docs and tests."""
    return parse_catalog(_read_data("sample_catalog.json"))


def reference_catalog_path() -> str:
    """Filesystem path of the packaged reference catalog (for CLI defaults)."""
    return str(resources.files("assesskit.data").joinpath("reference_catalog.json"))


def sample_catalog_path() -> str:
    return str(resources.files("assesskit.data").joinpath("sample_catalog.json"))
