"""Compliance calculus.

The value of a response: yes and alternative earn 1, no and does-not-apply
earn 0, partial earns its recorded fraction. Compliance for any group of
requirements is the sum of values divided by the number of requirements in
the group, so unanswered and not-applicable rows stay in the denominator
at zero credit unless explicitly excluded. Points are exact sums; rounding
happens only at display time, in the report layer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .assessment import Assessment, ResponseEntry, Satisfaction
from .errors import AssessmentError


class Verdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"


class Finding(enum.Enum):
    SATISFIED = "satisfied"
    OTHER_THAN_SATISFIED = "other_than_satisfied"


@dataclass(frozen=True)
class Determination:
    """A determination finding plus the does-not-apply annotation."""

    finding: Finding
    not_applicable: bool = False


@dataclass(frozen=True)
class FamilyScore:
    family_code: str
    points: float
    requirement_count: int
    answered_count: int

    @property
    def fraction(self) -> float:
        return self.points / self.requirement_count if self.requirement_count else 0.0


@dataclass(frozen=True)
class OverallScore:
    family_scores: tuple[FamilyScore, ...]
    total_points: float
    total_requirements: int
    fraction: float
    threshold: float
    family_verdicts: Mapping[str, Verdict]
    aggregate_verdict: Verdict


@dataclass(frozen=True)
class ThresholdVerdicts:
    aggregate: Verdict
    families: Mapping[str, Verdict]
    threshold: float
    family_threshold: float


def value_of(satisfaction: Satisfaction, partial_value: float | None = None) -> float:
    """Numeric credit for a satisfaction code.

    partial_value must be supplied exactly when the code is partial, and
    must lie strictly between 0 and 1.
    """
    if satisfaction is Satisfaction.PARTIAL:
        if partial_value is None:
            raise AssessmentError("partial satisfaction requires a partial_value")
        if not 0.0 < partial_value < 1.0:
            raise AssessmentError(
                f"partial_value must be strictly between 0 and 1, got {partial_value}"
            )
        return partial_value
    if partial_value is not None:
        raise AssessmentError(
            f"partial_value only applies to partial responses, not {satisfaction.code}"
        )
    if satisfaction in (Satisfaction.YES, Satisfaction.ALTERNATIVE):
        return 1.0
    return 0.0  # NO and NOT_APPLICABLE


def _entry_value(entry: ResponseEntry | None) -> float:
    if entry is None:
        return 0.0
    return value_of(entry.satisfaction, entry.partial_value)


def family_compliance(
    a: Assessment,
    family_code: str,
    *,
    exclude_not_applicable: bool = False,
) -> FamilyScore:
    """Points and denominator for one family in the level view.

    With ``exclude_not_applicable`` set, requirements answered
    does-not-apply leave the denominator instead of counting as zero.
    """
    family = a.view.family(family_code)
    if family is None:
        raise AssessmentError(f"unknown family {family_code!r}")
    points = 0.0
    count = 0
    answered = 0
    for req in family.requirements:
        entry = a.responses.get(req.id)
        if (
            exclude_not_applicable
            and entry is not None
            and entry.satisfaction is Satisfaction.NOT_APPLICABLE
        ):
            continue
        count += 1
        if entry is not None:
            answered += 1
            points += _entry_value(entry)
    return FamilyScore(family_code, points, count, answered)


def overall_compliance(
    a: Assessment,
    *,
    exclude_not_applicable: bool = False,
) -> OverallScore:
    """Score every family and the aggregate.

    The aggregate is total points over total requirements, not a mean of
    family fractions, so families of different sizes weigh differently.
    """
    family_scores = tuple(
        family_compliance(a, fam.code, exclude_not_applicable=exclude_not_applicable)
        for fam in a.view.families
    )
    total_points = sum(score.points for score in family_scores)
    total_requirements = sum(score.requirement_count for score in family_scores)
    fraction = total_points / total_requirements if total_requirements else 0.0
    family_verdicts = {
        score.family_code: _verdict(score.fraction, a.threshold) for score in family_scores
    }
    return OverallScore(
        family_scores=family_scores,
        total_points=total_points,
        total_requirements=total_requirements,
        fraction=fraction,
        threshold=a.threshold,
        family_verdicts=family_verdicts,
        aggregate_verdict=_verdict(fraction, a.threshold),
    )


def _verdict(fraction: float, threshold: float) -> Verdict:
    # Meeting the threshold exactly passes.
    return Verdict.PASS if fraction >= threshold else Verdict.FAIL


def finding_for(entry: ResponseEntry) -> Determination:
    """Determination finding for a recorded response.

    Yes and alternative are satisfied; partial and no are other than
    satisfied; does-not-apply is other than satisfied with the
    not-applicable annotation set.
    """
    if entry.satisfaction in (Satisfaction.YES, Satisfaction.ALTERNATIVE):
        return Determination(Finding.SATISFIED)
    if entry.satisfaction is Satisfaction.NOT_APPLICABLE:
        return Determination(Finding.OTHER_THAN_SATISFIED, not_applicable=True)
    return Determination(Finding.OTHER_THAN_SATISFIED)


def findings_for(a: Assessment) -> dict[str, Determination]:
    """Findings for every answered requirement, keyed by requirement id."""
    return {rid: finding_for(entry) for rid, entry in sorted(a.responses.items())}


def threshold_eval(
    score: OverallScore,
    family_threshold: float | None = None,
) -> ThresholdVerdicts:
    """Re-evaluate verdicts, optionally with a separate per-family bar."""
    if family_threshold is not None and not 0.0 <= family_threshold <= 1.0:
        raise AssessmentError(
            f"family_threshold must be within [0, 1], got {family_threshold}"
        )
    bar = score.threshold if family_threshold is None else family_threshold
    families = {
        fs.family_code: _verdict(fs.fraction, bar) for fs in score.family_scores
    }
    return ThresholdVerdicts(
        aggregate=_verdict(score.fraction, score.threshold),
        families=families,
        threshold=score.threshold,
        family_threshold=bar,
    )
