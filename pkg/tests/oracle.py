"""Independent reference implementations used to cross-check the engine.

Everything here is deliberately written from the scoring rules directly,
using plain dicts and lists, without importing the package's scoring or
rendering code. Partial credit values generated for oracle comparisons are
restricted to 0.25, 0.5, and 0.75 so that both sides sum binary-exact
quantities and equality checks can be exact.
"""

from __future__ import annotations

import itertools
import json
import random
import re
import string

SATISFACTION_CODES = ("Y", "P", "A", "N", "D")
QUARTER_PARTIALS = (0.25, 0.5, 0.75)
FULL_CREDIT = {"Y": 1.0, "A": 1.0}
ZERO_CREDIT = {"N": 0.0, "D": 0.0}


def oracle_value(code, partial=None):
    if code == "P":
        if partial is None:
            raise ValueError("partial answers carry an explicit value")
        return partial
    if code in FULL_CREDIT:
        return FULL_CREDIT[code]
    if code in ZERO_CREDIT:
        return ZERO_CREDIT[code]
    raise ValueError(f"unknown code {code!r}")


def oracle_family_score(requirement_ids, answers, exclude_not_applicable=False):
    """Brute-force (points, count) for one family.

    ``answers`` maps requirement id to ``(code, partial)`` or is missing
    the id entirely when unanswered. Unanswered requirements stay in the
    denominator at zero value.
    """
    points = 0.0
    count = 0
    for rid in requirement_ids:
        answer = answers.get(rid)
        if exclude_not_applicable and answer is not None and answer[0] == "D":
            continue
        count += 1
        if answer is not None:
            points += oracle_value(*answer)
    return points, count


def oracle_aggregate(families, answers, exclude_not_applicable=False):
    """Brute-force (points, count, fraction) over every requirement.

    ``families`` is a list of ``{"code": ..., "requirement_ids": [...]}``.
    The fraction is total points over total count, not a mean of family
    fractions, and an empty denominator yields 0.0.
    """
    total_points = 0.0
    total_count = 0
    for family in families:
        points, count = oracle_family_score(
            family["requirement_ids"], answers, exclude_not_applicable
        )
        total_points += points
        total_count += count
    fraction = total_points / total_count if total_count else 0.0
    return total_points, total_count, fraction


_SLOT = re.compile(r"\[([^\[\]]*)\]")


def oracle_render(text, values=None):
    """Regex-based parameter substitution: ordinal-keyed, brackets kept."""
    values = values or {}
    counter = itertools.count(1)

    def replace(match):
        ordinal = next(counter)
        if ordinal in values:
            return "[" + values[ordinal] + "]"
        return match.group(0)

    return _SLOT.sub(replace, text)


def oracle_slot_defaults(text):
    return [match.group(1) for match in _SLOT.finditer(text)]


_EFFECT_NAMES = ("redirect", "preclude", "impede", "limit", "expose")
_HIPAA_NAMES = ("administrative", "technical", "physical")


def random_catalog(rng: random.Random, min_families=3, max_families=20,
                   min_reqs=1, max_reqs=30):
    """Generate a catalog as JSON text plus a plain mirror for the oracle.

    Families get distinct two-letter codes. Base requirements precede
    enhanced ones. Only enhanced requirements may carry adversary effect
    annotations. Some texts contain bracketed parameter slots.
    """
    n_families = rng.randint(min_families, max_families)
    letters = string.ascii_uppercase
    codes = []
    while len(codes) < n_families:
        code = rng.choice(letters) + rng.choice(letters)
        if code not in codes:
            codes.append(code)

    families_json = []
    mirror = []
    for code in codes:
        n_reqs = rng.randint(min_reqs, max_reqs)
        n_enhanced = rng.randint(0, n_reqs)
        n_base = n_reqs - n_enhanced
        requirements = []
        requirement_ids = []
        tiers = {}
        for i in range(n_reqs):
            rid = f"{code}.{i + 1}"
            tier = "base" if i < n_base else "enhanced"
            text = f"Perform duty {i + 1} for unit {code}"
            if rng.random() < 0.3:
                text += f" within [{rng.randint(1, 96)} hours]"
            if rng.random() < 0.1:
                text += f" reviewed [{rng.choice(['monthly', 'quarterly', 'annually'])}]"
            text += "."
            effects = []
            if tier == "enhanced":
                effects = [name for name in _EFFECT_NAMES if rng.random() < 0.4]
            hipaa = [name for name in _HIPAA_NAMES if rng.random() < 0.3]
            requirements.append(
                {
                    "id": rid,
                    "tier": tier,
                    "text": text,
                    "hipaa_types": hipaa,
                    "adversary_effects": effects,
                }
            )
            requirement_ids.append(rid)
            tiers[rid] = tier
        families_json.append(
            {"code": code, "name": f"Unit {code}", "requirements": requirements}
        )
        mirror.append(
            {"code": code, "requirement_ids": requirement_ids, "tiers": tiers}
        )

    doc = {
        "schema_version": "1.0",
        "title": f"Generated catalog {rng.randrange(10**6)}",
        "source_note": "synthetic",
        "families": families_json,
    }
    return json.dumps(doc), mirror


def random_answers(rng: random.Random, mirror, answered_probability=0.8):
    """Random answer map over a mirror structure from random_catalog."""
    answers = {}
    for family in mirror:
        for rid in family["requirement_ids"]:
            if rng.random() >= answered_probability:
                continue
            code = rng.choice(SATISFACTION_CODES)
            partial = rng.choice(QUARTER_PARTIALS) if code == "P" else None
            answers[rid] = (code, partial)
    return answers


def upgraded_answer(rng: random.Random, current):
    """Pick an answer whose value is >= the current one, or None if maxed.

    ``current`` is ``(code, partial)`` or None for unanswered. Unanswered
    counts as value 0 with no D exclusion subtleties, so anything is an
    upgrade.
    """
    value = 0.0 if current is None else oracle_value(*current)
    candidates = []
    for code in SATISFACTION_CODES:
        if code == "P":
            for partial in QUARTER_PARTIALS:
                if partial >= value:
                    candidates.append((code, partial))
        elif oracle_value(code) >= value:
            candidates.append((code, None))
    if not candidates:
        return None
    return rng.choice(candidates)
