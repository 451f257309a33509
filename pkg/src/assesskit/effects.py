"""Adversary-effects map for enhanced requirements.

Enhanced requirements carry a set of adversary effect annotations
(redirect, preclude, impede, limit, expose). The map reports, per
requirement, whether each annotated effect is currently achieved: a yes,
alternative, or partial response achieves it; a no or does-not-apply
response does not. Effects are qualitative and never aggregate into the
numeric compliance score.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .assessment import Assessment, Satisfaction
from .catalog import AdversaryEffect, EFFECT_ORDER, SecurityLevel, Tier
from .errors import AssessmentError


class CellStatus(enum.Enum):
    YES = "yes"
    NO = "no"
    BLANK = "blank"  # effect not annotated on this requirement


@dataclass(frozen=True)
class EffectsRow:
    family_code: str
    requirement_id: str
    satisfaction_code: str | None  # None while unanswered
    cells: Mapping[AdversaryEffect, CellStatus]
    no_effects_listed: bool
    unanswered: bool


_ACHIEVING = (Satisfaction.YES, Satisfaction.ALTERNATIVE, Satisfaction.PARTIAL)


def effects_map(a: Assessment, *, strict_partial: bool = False) -> tuple[EffectsRow, ...]:
    """One row per enhanced requirement, in catalog order.

    Requires a high-level assessment; the medium view has no enhanced
    requirements to report on. ``strict_partial`` counts partial responses
    as not achieving their effects.

    Raises:
        AssessmentError: for medium-level assessments.
    """
    if a.level is not SecurityLevel.HIGH:
        raise AssessmentError(
            "the adversary-effects map requires a high-level assessment; "
            f"this one is {a.level.value}"
        )
    achieving = _ACHIEVING[:2] if strict_partial else _ACHIEVING
    rows: list[EffectsRow] = []
    for family in a.view.families:
        for req in family.requirements:
            if req.tier is not Tier.ENHANCED:
                continue
            entry = a.responses.get(req.id)
            unanswered = entry is None
            code = None if unanswered else entry.satisfaction.code
            if not req.adversary_effects:
                cells = {effect: CellStatus.BLANK for effect in EFFECT_ORDER}
                rows.append(
                    EffectsRow(family.code, req.id, code, cells, True, unanswered)
                )
                continue
            achieved = entry is not None and entry.satisfaction in achieving
            cells = {}
            for effect in EFFECT_ORDER:
                if effect not in req.adversary_effects:
                    cells[effect] = CellStatus.BLANK
                else:
                    cells[effect] = CellStatus.YES if achieved else CellStatus.NO
            rows.append(
                EffectsRow(family.code, req.id, code, cells, False, unanswered)
            )
    return tuple(rows)
