"""HTTP service exposing catalogs, assessments, scoring, and reports.

The service owns an in-memory store of assessments keyed by short ids.
Mutations are serialized per assessment and guarded by optimistic
concurrency: every mutating request carries the ``expected_revision`` it
last observed and is rejected with 409 when that revision is stale. Each
accepted mutation bumps the revision by exactly one, so after any storm of
concurrent writes the final revision equals the number of accepted ones.

Every number a client may display is shipped pre-formatted (for example
``"60.0%"``); the web UI renders those strings verbatim and does no score
arithmetic of its own.
"""

from __future__ import annotations

import argparse
import json
import threading
import uuid
from dataclasses import asdict
from pathlib import Path
from typing import Literal

from fastapi import Body, FastAPI, HTTPException, Query, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import assessment as asmt
from . import catalog as cat
from .effects import effects_map
from .errors import (
    AssessmentError,
    AssessmentFormatError,
    DigestMismatchError,
    ReportError,
)
from .report import (
    NO_EFFECTS_LABEL,
    build_radar_spec,
    format_percent,
    format_points,
    radar_svg,
    render_effects,
    snapshot,
)
from .scoring import findings_for, overall_compliance

DEFAULT_PORT = 8642


class SessionStore:
    """Assessments held in memory for the lifetime of the process."""

    def __init__(self, catalog: cat.Catalog):
        self.catalog = catalog
        self._assessments: dict[str, asmt.Assessment] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._master = threading.Lock()

    def add(self, a: asmt.Assessment) -> str:
        assessment_id = uuid.uuid4().hex[:12]
        with self._master:
            self._assessments[assessment_id] = a
            self._locks[assessment_id] = threading.Lock()
        return assessment_id

    def get(self, assessment_id: str) -> asmt.Assessment:
        try:
            return self._assessments[assessment_id]
        except KeyError:
            raise HTTPException(404, f"unknown assessment {assessment_id!r}") from None

    def lock(self, assessment_id: str) -> threading.Lock:
        with self._master:
            try:
                return self._locks[assessment_id]
            except KeyError:
                raise HTTPException(404, f"unknown assessment {assessment_id!r}") from None

    def put(self, assessment_id: str, a: asmt.Assessment) -> None:
        self._assessments[assessment_id] = a

    def ids(self) -> list[str]:
        with self._master:
            return list(self._assessments)


class NewAssessmentBody(BaseModel):
    level: Literal["medium", "high"]
    organization: str = ""
    threshold: float = Field(default=asmt.DEFAULT_THRESHOLD, ge=0.0, le=1.0)


class ResponseBody(BaseModel):
    satisfaction: str
    partial_value: float | None = None
    satisfying_statement: str = ""
    names: list[str] = Field(default_factory=list)
    validation_tools: list[str] = Field(default_factory=list)
    hipaa_types: list[str] = Field(default_factory=list)
    recorded_by: str = ""
    expected_revision: int


class OdpBody(BaseModel):
    value: str
    expected_revision: int


class MethodSpecBody(BaseModel):
    depth: str | None = None
    coverage: str | None = None
    evidence: list[dict] = Field(default_factory=list)


class MethodMatrixBody(BaseModel):
    examine: MethodSpecBody = Field(default_factory=MethodSpecBody)
    interview: MethodSpecBody = Field(default_factory=MethodSpecBody)
    test: MethodSpecBody = Field(default_factory=MethodSpecBody)
    expected_revision: int


def _catalog_doc(view: cat.CatalogView) -> dict:
    families = []
    base = enhanced = 0
    for family in view.families:
        requirements = []
        for req in family.requirements:
            if req.tier is cat.Tier.BASE:
                base += 1
            else:
                enhanced += 1
            requirements.append(
                {
                    "id": req.id,
                    "index": req.index,
                    "tier": req.tier.value,
                    "text": req.text,
                    "hipaa_types": [t.value for t in cat.HIPAA_ORDER if t in req.hipaa_types],
                    "adversary_effects": [
                        e.value for e in cat.EFFECT_ORDER if e in req.adversary_effects
                    ],
                    "odp_slots": [
                        {"ordinal": slot.ordinal, "default_text": slot.default_text}
                        for slot in cat.extract_odp_slots(req)
                    ],
                }
            )
        families.append(
            {
                "code": family.code,
                "name": family.name,
                "empty": family.empty,
                "requirements": requirements,
            }
        )
    return {
        "schema_version": view.schema_version,
        "title": view.title,
        "digest": view.digest,
        "level": view.level.value,
        "counts": {
            "families": len(view.families),
            "base": base,
            "enhanced": enhanced,
            "total": base + enhanced,
        },
        "families": families,
    }


def _score_doc(a: asmt.Assessment) -> dict:
    score = overall_compliance(a)
    progress = asmt.completion(a)
    families = []
    for family_view, fs in zip(a.view.families, score.family_scores):
        families.append(
            {
                "code": fs.family_code,
                "name": family_view.name,
                "empty": family_view.empty,
                "points": fs.points,
                "points_display": format_points(fs.points),
                "count": fs.requirement_count,
                "answered": fs.answered_count,
                "fraction": fs.fraction,
                "percent": format_percent(fs.fraction, 1, sign=True),
                "verdict": score.family_verdicts[fs.family_code].value,
            }
        )
    return {
        "revision": a.revision,
        "level": a.level.value,
        "threshold": a.threshold,
        "threshold_percent": format_percent(a.threshold, 0, sign=True),
        "completion": {
            "answered": progress.answered,
            "total": progress.total,
            "fraction": progress.fraction,
            "percent": format_percent(progress.fraction, 1, sign=True),
        },
        "families": families,
        "total": {
            "points": score.total_points,
            "points_display": format_points(score.total_points),
            "count": score.total_requirements,
            "fraction": score.fraction,
            "percent": format_percent(score.fraction, 2, sign=True),
            "verdict": score.aggregate_verdict.value,
        },
        "findings": {
            rid: {"finding": det.finding.value, "not_applicable": det.not_applicable}
            for rid, det in findings_for(a).items()
        },
    }


def _assessment_doc(assessment_id: str, a: asmt.Assessment) -> dict:
    doc = json.loads(asmt.serialize_assessment(a))
    doc["assessment_id"] = assessment_id
    return doc


def _response_entry_from_body(body: ResponseBody) -> asmt.ResponseEntry:
    try:
        satisfaction = asmt.Satisfaction(body.satisfaction)
    except ValueError:
        raise HTTPException(
            422, f"unknown satisfaction code {body.satisfaction!r} (expected Y, P, A, N, or D)"
        ) from None
    try:
        hipaa = frozenset(cat.HipaaType(v) for v in body.hipaa_types)
    except ValueError as exc:
        raise HTTPException(422, f"unknown HIPAA type: {exc}") from None
    try:
        return asmt.ResponseEntry(
            satisfaction=satisfaction,
            partial_value=body.partial_value,
            satisfying_statement=body.satisfying_statement,
            names=tuple(body.names),
            validation_tools=tuple(body.validation_tools),
            hipaa_types=hipaa,
            recorded_by=body.recorded_by,
        )
    except AssessmentError as exc:
        raise HTTPException(422, str(exc)) from None


def _matrix_from_body(body: MethodMatrixBody) -> asmt.MethodMatrix:
    def spec(spec_body: MethodSpecBody, method: str) -> asmt.MethodSpec:
        def attr(value: str | None, key: str) -> asmt.Attribute | None:
            if value is None:
                return None
            try:
                return asmt.Attribute(value)
            except ValueError:
                raise HTTPException(
                    422, f"{method}.{key}: unknown attribute {value!r}"
                ) from None

        evidence = []
        for item in spec_body.evidence:
            try:
                kind = asmt.EvidenceKind(item.get("kind"))
            except ValueError:
                raise HTTPException(
                    422, f"{method}: unknown evidence kind {item.get('kind')!r}"
                ) from None
            evidence.append(asmt.EvidenceItem(kind, str(item.get("description", ""))))
        return asmt.MethodSpec(
            attr(spec_body.depth, "depth"), attr(spec_body.coverage, "coverage"), tuple(evidence)
        )

    try:
        return asmt.MethodMatrix(
            spec(body.examine, "examine"),
            spec(body.interview, "interview"),
            spec(body.test, "test"),
        )
    except AssessmentError as exc:
        raise HTTPException(422, str(exc)) from None


def create_app(
    catalog: cat.Catalog,
    *,
    static_dir: str | Path | None = None,
    allow_origins: tuple[str, ...] = (),
) -> FastAPI:
    app = FastAPI(title="assesskit service", docs_url=None, redoc_url=None)
    store = SessionStore(catalog)
    app.state.store = store

    if allow_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(allow_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.get("/api/catalog")
    def get_catalog(level: str | None = Query(default=None)):
        if level is None:
            selected = cat.SecurityLevel.HIGH
        else:
            try:
                selected = cat.SecurityLevel(level)
            except ValueError:
                raise HTTPException(
                    400, f"unknown level {level!r} (expected medium or high)"
                ) from None
        return _catalog_doc(cat.select_level(store.catalog, selected))

    @app.get("/api/assessments")
    def list_assessments():
        items = []
        for assessment_id in store.ids():
            a = store.get(assessment_id)
            items.append(
                {
                    "assessment_id": assessment_id,
                    "organization": a.organization,
                    "level": a.level.value,
                    "threshold": a.threshold,
                    "revision": a.revision,
                }
            )
        return {"assessments": items}

    @app.post("/api/assessments", status_code=201)
    def create_assessment(body: NewAssessmentBody):
        view = cat.select_level(store.catalog, cat.SecurityLevel(body.level))
        a = asmt.new_assessment(view, body.organization, body.threshold)
        assessment_id = store.add(a)
        return {"assessment_id": assessment_id, "revision": a.revision}

    @app.get("/api/assessments/{assessment_id}")
    def get_assessment(assessment_id: str):
        return _assessment_doc(assessment_id, store.get(assessment_id))

    def _mutate(assessment_id: str, expected_revision: int, apply):
        """Run one mutating operation under the per-assessment lock."""
        with store.lock(assessment_id):
            a = store.get(assessment_id)
            if expected_revision != a.revision:
                raise HTTPException(
                    409,
                    {
                        "message": "stale revision",
                        "expected_revision": expected_revision,
                        "current_revision": a.revision,
                    },
                )
            updated = apply(a)
            store.put(assessment_id, updated)
            return {"revision": updated.revision}

    @app.patch("/api/assessments/{assessment_id}/responses/{requirement_id}")
    def patch_response(assessment_id: str, requirement_id: str, body: ResponseBody):
        a = store.get(assessment_id)
        if a.view.requirement(requirement_id) is None:
            raise HTTPException(
                404, f"unknown requirement {requirement_id!r} for level {a.level.value}"
            )
        entry = _response_entry_from_body(body)

        def apply(current: asmt.Assessment) -> asmt.Assessment:
            return asmt.record_response(current, requirement_id, entry)

        return _mutate(assessment_id, body.expected_revision, apply)

    @app.put("/api/assessments/{assessment_id}/odp/{requirement_id}/{ordinal}")
    def put_odp(assessment_id: str, requirement_id: str, ordinal: int, body: OdpBody):
        a = store.get(assessment_id)
        req = a.view.requirement(requirement_id)
        if req is None:
            raise HTTPException(
                404, f"unknown requirement {requirement_id!r} for level {a.level.value}"
            )
        if not any(slot.ordinal == ordinal for slot in cat.extract_odp_slots(req)):
            raise HTTPException(404, f"requirement {requirement_id} has no ODP slot {ordinal}")

        def apply(current: asmt.Assessment) -> asmt.Assessment:
            return asmt.assign_odp(current, requirement_id, ordinal, body.value)

        return _mutate(assessment_id, body.expected_revision, apply)

    @app.put("/api/assessments/{assessment_id}/methods/{requirement_id}")
    def put_methods(assessment_id: str, requirement_id: str, body: MethodMatrixBody):
        a = store.get(assessment_id)
        req = a.view.requirement(requirement_id)
        if req is None:
            raise HTTPException(
                404, f"unknown requirement {requirement_id!r} for level {a.level.value}"
            )
        if req.tier is not cat.Tier.ENHANCED:
            raise HTTPException(
                409, f"method matrices apply to enhanced requirements only; "
                f"{requirement_id} is base tier"
            )
        matrix = _matrix_from_body(body)

        def apply(current: asmt.Assessment) -> asmt.Assessment:
            return asmt.set_method_matrix(current, requirement_id, matrix)

        return _mutate(assessment_id, body.expected_revision, apply)

    @app.get("/api/assessments/{assessment_id}/score")
    def get_score(assessment_id: str):
        return _score_doc(store.get(assessment_id))

    @app.get("/api/assessments/{assessment_id}/effects")
    def get_effects(assessment_id: str):
        a = store.get(assessment_id)
        try:
            rows = effects_map(a)
        except AssessmentError as exc:
            raise HTTPException(409, str(exc)) from None
        render = render_effects(rows)
        return {
            "revision": a.revision,
            "columns": [e.value for e in cat.EFFECT_ORDER],
            "no_effects_label": NO_EFFECTS_LABEL,
            "rows": [asdict(row) for row in render.rows],
        }

    @app.get("/api/assessments/{assessment_id}/snapshot")
    def get_snapshot(assessment_id: str):
        a = store.get(assessment_id)
        doc = asdict(snapshot(a))
        doc["revision"] = a.revision
        return doc

    @app.get("/api/assessments/{assessment_id}/radar.svg")
    def get_radar(assessment_id: str):
        a = store.get(assessment_id)
        try:
            svg = radar_svg(build_radar_spec(overall_compliance(a)))
        except ReportError as exc:
            raise HTTPException(409, str(exc)) from None
        return Response(content=svg, media_type="image/svg+xml")

    @app.post("/api/assessments/{assessment_id}/save")
    def save(assessment_id: str):
        a = store.get(assessment_id)
        return Response(
            content=asmt.serialize_assessment(a),
            media_type="application/json",
            headers={
                "Content-Disposition": (
                    f'attachment; filename="assessment-{assessment_id}.json"'
                )
            },
        )

    @app.post("/api/assessments/import", status_code=201)
    def import_assessment(
        doc: dict = Body(...),
        allow_digest_mismatch: bool = Query(default=False),
    ):
        try:
            a = asmt.deserialize_assessment(
                json.dumps(doc), store.catalog, allow_digest_mismatch=allow_digest_mismatch
            )
        except DigestMismatchError as exc:
            raise HTTPException(409, str(exc)) from None
        except AssessmentFormatError as exc:
            raise HTTPException(422, str(exc)) from None
        assessment_id = store.add(a)
        return {"assessment_id": assessment_id, "revision": a.revision}

    if static_dir is not None:
        static_path = Path(static_dir)
        if static_path.is_dir():
            app.mount("/", StaticFiles(directory=static_path, html=True), name="webui")

    return app


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="assesskit-serve", description="Run the assessment HTTP service"
    )
    parser.add_argument(
        "--catalog", help="catalog JSON file (defaults to the packaged reference catalog)"
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=DEFAULT_PORT)
    parser.add_argument(
        "--static-dir",
        help="directory of web UI assets to serve at / "
        "(defaults to ./frontend/dist when present)",
    )
    parser.add_argument(
        "--allow-origin",
        action="append",
        default=[],
        dest="allow_origins",
        help="enable CORS for this origin (repeatable; CORS stays off without it)",
    )
    args = parser.parse_args(argv)

    catalog_path = args.catalog or cat.reference_catalog_path()
    catalog = cat.parse_catalog(Path(catalog_path).read_text(encoding="utf-8"))

    static_dir = args.static_dir
    if static_dir is None:
        candidate = Path("frontend/dist")
        if candidate.is_dir():
            static_dir = str(candidate)

    app = create_app(
        catalog, static_dir=static_dir, allow_origins=tuple(args.allow_origins)
    )

    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
