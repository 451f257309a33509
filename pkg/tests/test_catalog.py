from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import assesskit
from assesskit import (
    AdversaryEffect,
    CatalogError,
    HipaaType,
    SecurityLevel,
    Tier,
)

from oracle import oracle_render, oracle_slot_defaults


def req(rid, tier="base", text="Do the thing.", hipaa=(), effects=()):
    return {
        "id": rid,
        "tier": tier,
        "text": text,
        "hipaa_types": list(hipaa),
        "adversary_effects": list(effects),
    }


def doc(families, schema_version="1.0", title="Test", source_note="static"):
    return json.dumps(
        {
            "schema_version": schema_version,
            "title": title,
            "source_note": source_note,
            "families": families,
        }
    )


def family(code, requirements, name=None):
    return {"code": code, "name": name or f"Family {code}", "requirements": requirements}


class TestRequirementId:
    def test_parse_requirement_id(self):
        assert assesskit.parse_requirement_id("IR.3") == ("IR", 3)
        assert assesskit.parse_requirement_id("AC.22") == ("AC", 22)

    @pytest.mark.parametrize(
        "bad", ["", "IR", "IR.", ".3", "IR.0", "IR.-1", "IR.x", "ir.3", "IR.3.1", "IR 3"]
    )
    def test_rejects_malformed(self, bad):
        with pytest.raises(ValueError):
            assesskit.parse_requirement_id(bad)


class TestOdp:
    def test_extracts_slots_in_order(self):
        catalog = assesskit.parse_catalog(
            doc([family("XX", [req("XX.1", text="Patch within [30 days] then audit [quarterly].")])])
        )
        slots = assesskit.extract_odp_slots(catalog.families[0].requirements[0])
        assert [(s.ordinal, s.default_text) for s in slots] == [(1, "30 days"), (2, "quarterly")]
        assert all(s.requirement_id == "XX.1" for s in slots)

    def test_render_substitutes_by_ordinal_and_keeps_brackets(self):
        catalog = assesskit.parse_catalog(
            doc([family("XX", [req("XX.1", text="Patch within [30 days] then audit [quarterly].")])])
        )
        requirement = catalog.families[0].requirements[0]
        assert (
            assesskit.render_requirement_text(requirement, {2: "monthly"})
            == "Patch within [30 days] then audit [monthly]."
        )
        assert (
            assesskit.render_requirement_text(requirement, None)
            == "Patch within [30 days] then audit [quarterly]."
        )

    @pytest.mark.parametrize(
        "text",
        ["open [slot", "nested [a [b] c]", "stray ] bracket", "[a][b] then ]"],
    )
    def test_bad_bracket_spans_rejected(self, text):
        with pytest.raises(CatalogError):
            assesskit.parse_catalog(doc([family("XX", [req("XX.1", text=text)])]))

    def test_render_agrees_with_regex_oracle_on_random_texts(self):
        rng = random.Random(90125)
        words = ["scan", "log", "limit", "report", "deny", "rotate"]
        for _ in range(300):
            pieces = []
            n_slots = rng.randint(0, 4)
            for i in range(n_slots):
                pieces.append(rng.choice(words))
                pieces.append(f"[slot {i}]")
            pieces.append(rng.choice(words))
            text = " ".join(pieces) + "."
            catalog = assesskit.parse_catalog(doc([family("XX", [req("XX.1", text=text)])]))
            requirement = catalog.families[0].requirements[0]
            values = {
                i + 1: f"v{i}" for i in range(n_slots) if rng.random() < 0.5
            }
            assert assesskit.render_requirement_text(requirement, values) == oracle_render(
                text, values
            )
            assert [s.default_text for s in assesskit.extract_odp_slots(requirement)] == (
                oracle_slot_defaults(text)
            )


class TestParseAndValidate:
    def test_reference_catalog_counts(self, reference_catalog):
        report = assesskit.validate_catalog(reference_catalog)
        assert report.ok
        assert report.counts.families == 14
        assert report.counts.base == 110
        assert report.counts.enhanced == 34
        assert report.counts.total == 144

    def test_sample_catalog_counts(self, sample_catalog):
        report = assesskit.validate_catalog(sample_catalog)
        assert report.ok
        assert (report.counts.families, report.counts.base, report.counts.enhanced) == (1, 3, 2)

    def test_malformed_json_raises_with_location(self):
        with pytest.raises(CatalogError) as exc_info:
            assesskit.inspect_catalog("{not json")
        assert exc_info.value.location is not None
        assert "line" in exc_info.value.location

    @pytest.mark.parametrize(
        "source",
        [
            "[]",
            '{"schema_version": "1.0", "families": {}}',
            '{"schema_version": 2, "families": []}',
            json.dumps(
                {"schema_version": "1.0", "families": [{"code": "XX", "requirements": [{}]}]}
            ),
        ],
    )
    def test_shape_errors_raise(self, source):
        with pytest.raises(CatalogError):
            assesskit.inspect_catalog(source)

    def test_unknown_tier_raises(self):
        with pytest.raises(CatalogError):
            assesskit.inspect_catalog(doc([family("XX", [req("XX.1", tier="extra")])]))

    def test_duplicate_family_code_is_error_naming_first(self):
        source = doc(
            [family("XX", [req("XX.1")]), family("XX", [req("XX.1")])]
        )
        _, report = assesskit.inspect_catalog(source)
        dup = [f for f in report.errors if "duplicate family code" in f.message]
        assert dup and "families[0]" in dup[0].message
        with pytest.raises(CatalogError):
            assesskit.parse_catalog(source)

    def test_duplicate_requirement_id_names_both_locations(self):
        source = doc(
            [
                family("XX", [req("XX.1"), req("XX.1")]),
            ]
        )
        _, report = assesskit.inspect_catalog(source)
        dup = [f for f in report.errors if "duplicate requirement id" in f.message]
        assert dup
        assert "families[0].requirements[0]" in dup[0].message
        assert dup[0].location == "families[0].requirements[1]"

    def test_non_contiguous_ids_are_errors(self):
        _, report = assesskit.inspect_catalog(
            doc([family("XX", [req("XX.1"), req("XX.3")])])
        )
        assert any("must be 'XX.2'" in f.message for f in report.errors)

    def test_id_family_prefix_mismatch_is_error(self):
        _, report = assesskit.inspect_catalog(doc([family("XX", [req("YY.1")])]))
        assert not report.ok

    def test_base_tier_effects_are_errors(self):
        _, report = assesskit.inspect_catalog(
            doc([family("XX", [req("XX.1", effects=["impede"])])])
        )
        assert any("enhanced-tier" in f.message for f in report.errors)

    def test_enhanced_before_base_is_warning_only(self):
        source = doc(
            [family("XX", [req("XX.1", tier="enhanced"), req("XX.2", tier="base")])]
        )
        _, report = assesskit.inspect_catalog(source)
        assert not report.errors
        assert any("base first" in f.message for f in report.warnings)
        assesskit.parse_catalog(source)

    def test_empty_family_is_warning(self):
        _, report = assesskit.inspect_catalog(doc([family("XX", [])]))
        assert any("no requirements" in f.message for f in report.warnings)
        assert not report.errors

    def test_empty_catalog_is_error(self):
        _, report = assesskit.inspect_catalog(doc([]))
        assert any("no families" in f.message for f in report.errors)

    def test_empty_schema_version_is_warning(self):
        _, report = assesskit.inspect_catalog(doc([family("XX", [req("XX.1")])], schema_version=""))
        assert any("schema_version" in f.message for f in report.warnings)

    def test_unknown_effect_name_is_error_and_dropped(self):
        source = doc(
            [family("XX", [req("XX.1", tier="enhanced", effects=["impede", "confuse"])])]
        )
        catalog, report = assesskit.inspect_catalog(source)
        assert any("confuse" in f.message for f in report.errors)
        assert catalog.families[0].requirements[0].adversary_effects == frozenset(
            {AdversaryEffect.IMPEDE}
        )

    def test_unknown_hipaa_name_is_error_and_dropped(self):
        source = doc([family("XX", [req("XX.1", hipaa=["technical", "fiscal"])])])
        catalog, report = assesskit.inspect_catalog(source)
        assert any("fiscal" in f.message for f in report.errors)
        assert catalog.families[0].requirements[0].hipaa_types == frozenset(
            {HipaaType.TECHNICAL}
        )


class TestSerializeDigest:
    def test_round_trip_preserves_digest(self, reference_catalog):
        text = assesskit.serialize_catalog(reference_catalog)
        again = assesskit.parse_catalog(text)
        assert assesskit.catalog_digest(again) == assesskit.catalog_digest(reference_catalog)
        assert assesskit.serialize_catalog(again) == text

    def test_canonical_form_details(self, sample_catalog):
        text = assesskit.serialize_catalog(sample_catalog)
        assert text.endswith("\n")
        assert '\n  "schema_version"' in text
        first_keys = [line.strip().split(":")[0] for line in text.splitlines()[1:5]]
        assert first_keys == ['"schema_version"', '"title"', '"source_note"', '"families"']

    def test_digest_is_lowercase_hex_sha256(self, sample_catalog):
        digest = assesskit.catalog_digest(sample_catalog)
        assert len(digest) == 64
        assert digest == digest.lower()
        int(digest, 16)

    def test_digest_changes_with_content(self):
        a = assesskit.parse_catalog(doc([family("XX", [req("XX.1", text="Alpha.")])]))
        b = assesskit.parse_catalog(doc([family("XX", [req("XX.1", text="Beta.")])]))
        assert assesskit.catalog_digest(a) != assesskit.catalog_digest(b)

    def test_non_ascii_survives(self):
        catalog = assesskit.parse_catalog(
            doc([family("XX", [req("XX.1", text="Révision annuelle.")])])
        )
        text = assesskit.serialize_catalog(catalog)
        assert "Révision annuelle." in text
        assert assesskit.parse_catalog(text).families[0].requirements[0].text == (
            "Révision annuelle."
        )

    def test_effect_and_hipaa_emit_order_is_fixed(self):
        source = doc(
            [
                family(
                    "XX",
                    [
                        req(
                            "XX.1",
                            tier="enhanced",
                            hipaa=["physical", "administrative", "technical"],
                            effects=["expose", "redirect", "impede"],
                        )
                    ],
                )
            ]
        )
        text = assesskit.serialize_catalog(assesskit.parse_catalog(source))
        body = json.loads(text)
        requirement = body["families"][0]["requirements"][0]
        assert requirement["hipaa_types"] == ["administrative", "technical", "physical"]
        assert requirement["adversary_effects"] == ["redirect", "impede", "expose"]

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=2**63 - 1))
    def test_generated_catalogs_round_trip(self, seed):
        from oracle import random_catalog

        source, _ = random_catalog(random.Random(seed), max_families=6, max_reqs=8)
        catalog = assesskit.parse_catalog(source)
        text = assesskit.serialize_catalog(catalog)
        assert assesskit.serialize_catalog(assesskit.parse_catalog(text)) == text


class TestLevelSelection:
    def test_medium_drops_enhanced(self, sample_catalog):
        view = assesskit.select_level(sample_catalog, SecurityLevel.MEDIUM)
        assert view.requirement_count == 3
        assert all(r.tier is Tier.BASE for r in view.iter_requirements())
        assert view.requirement("IR.4") is None
        assert view.requirement("IR.1") is not None

    def test_high_keeps_everything(self, sample_catalog):
        view = assesskit.select_level(sample_catalog, SecurityLevel.HIGH)
        assert view.requirement_count == 5
        assert view.requirement("IR.4").tier is Tier.ENHANCED

    def test_family_going_empty_is_retained_and_flagged(self):
        catalog = assesskit.parse_catalog(
            doc(
                [
                    family("XX", [req("XX.1", tier="enhanced")]),
                    family("YY", [req("YY.1")]),
                ]
            )
        )
        view = assesskit.select_level(catalog, SecurityLevel.MEDIUM)
        assert [f.code for f in view.families] == ["XX", "YY"]
        assert view.family("XX").empty
        assert not view.family("YY").empty

    def test_view_carries_digest_and_level(self, sample_catalog):
        view = assesskit.select_level(sample_catalog, SecurityLevel.HIGH)
        assert view.digest == assesskit.catalog_digest(sample_catalog)
        assert view.level is SecurityLevel.HIGH

    def test_reference_medium_count(self, reference_catalog):
        view = assesskit.select_level(reference_catalog, SecurityLevel.MEDIUM)
        assert view.requirement_count == 110
