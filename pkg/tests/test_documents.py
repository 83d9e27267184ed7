"""
Tests for JSON documents

Tests cover:
- Loading dg algebra, group, representation and ring documents
- Positional parse errors and unsupported kinds
- Filtration violations surfacing from the constructors
- Canonical serialization
- Vector arguments from the command line
"""
import json

import pytest

from src.documents import (
    algebra_from_document,
    algebra_to_document,
    dga_from_document,
    dga_to_document,
    group_from_document,
    group_to_document,
    load_document,
    morphism_from_document,
    morphism_to_document,
    parse_document,
    parse_vector_argument,
    representation_from_document,
    representation_to_document,
    ring_from_document,
    serialize,
)
from src.exceptions import DocumentParseError, FiltrationError, UnsupportedDocumentError
from src.generators import disguise
from src.models import DocumentKind


# ============================================================
# Test: Algebra Documents
# ============================================================

class TestAlgebraDocuments:

    @pytest.mark.unit
    def test_dga_fixture_is_shifted_on_load(self, fixture_path):
        A = algebra_from_document(load_document(fixture_path("t_f2_t3.json")))
        assert A.space.names == ("t", "t2")
        assert A.space.degrees == (-1, -1)
        assert A.operation(2).evaluate((0, 0)) == {1: A.field.one}

    @pytest.mark.unit
    def test_empty_algebra(self, fixture_path):
        A = algebra_from_document(load_document(fixture_path("empty_algebra.json")))
        assert A.dimension == 0
        assert A.nilpotency == 2

    @pytest.mark.unit
    def test_weight_violation_surfaces_as_filtration_error(self, fixture_path):
        with pytest.raises(FiltrationError):
            algebra_from_document(load_document(fixture_path("weight_violating.json")))

    @pytest.mark.unit
    def test_malformed_json_has_position(self, fixture_path):
        with pytest.raises(DocumentParseError) as exc_info:
            load_document(fixture_path("malformed.json"))
        assert "line" in exc_info.value.details["location"]

    @pytest.mark.unit
    def test_schema_errors_have_path(self):
        text = json.dumps({"kind": "ainfty", "field": {"characteristic": 2}, "nilpotency": 1})
        with pytest.raises(DocumentParseError) as exc_info:
            parse_document(text)
        assert exc_info.value.details["location"]["path"] == ["nilpotency"]

    @pytest.mark.unit
    def test_unknown_names_rejected(self):
        text = json.dumps({
            "field": {"characteristic": 2},
            "nilpotency": 2,
            "basis": [{"name": "x", "degree": 0}],
            "operations": [{"arity": 1, "entries": [{"inputs": ["y"], "output": {"x": "1"}}]}],
        })
        with pytest.raises(DocumentParseError):
            parse_document(text)

    @pytest.mark.unit
    def test_unsupported_kind(self, fixture_path):
        with pytest.raises(UnsupportedDocumentError):
            parse_document(json.dumps({"kind": "sheaf"}))
        with pytest.raises(UnsupportedDocumentError):
            load_document(fixture_path("z2_group.json"), expected=[DocumentKind.AINFTY.value])

    @pytest.mark.unit
    def test_missing_file(self, fixture_path):
        with pytest.raises(DocumentParseError):
            load_document(fixture_path("does_not_exist.json"))


# ============================================================
# Test: Canonical Serialization
# ============================================================

class TestSerialization:

    @pytest.mark.unit
    def test_dga_document_is_canonical(self, fixture_path):
        document = load_document(fixture_path("t_f2_t3.json"))
        text = serialize(dga_to_document(dga_from_document(document)))
        assert text == serialize(document)
        assert serialize(parse_document(text)) == text

    @pytest.mark.unit
    def test_algebra_document(self, heisenberg_algebra):
        text = serialize(algebra_to_document(heisenberg_algebra))
        assert algebra_from_document(parse_document(text)).same_structure(heisenberg_algebra)

    @pytest.mark.unit
    def test_morphism_document(self, heisenberg_algebra):
        import random
        _, F = disguise(random.Random(3), heisenberg_algebra, density=0.8)
        loaded = morphism_from_document(parse_document(serialize(morphism_to_document(F))))
        assert loaded.same_as(F)

    @pytest.mark.unit
    def test_group_and_representation(self, fixture_path):
        G = group_from_document(load_document(fixture_path("z2_group.json")))
        assert G.order == 2
        rho = representation_from_document(load_document(fixture_path("z2_trivial.json")), G)
        assert rho.dimension == 1
        assert group_from_document(group_to_document(G)).table == G.table
        assert representation_to_document(rho).matrices == {"e": [["1"]], "g": [["1"]]}

    @pytest.mark.unit
    def test_representation_must_cover_group(self, fixture_path):
        G = group_from_document(load_document(fixture_path("z2_group.json")))
        document = parse_document(json.dumps({
            "kind": "representation", "field": {"characteristic": 2}, "matrices": {"e": [["1"]]},
        }))
        with pytest.raises(DocumentParseError):
            representation_from_document(document, G)

    @pytest.mark.unit
    def test_ring_document(self):
        document = parse_document(
            json.dumps({"kind": "ring", "field": {"characteristic": 2}, "order": 3}), ["ring"]
        )
        R = ring_from_document(document)
        assert R.order == 3
        assert R.names == ["t", "t^2"]

    @pytest.mark.unit
    def test_ring_order_below_two_rejected(self):
        with pytest.raises(DocumentParseError):
            parse_document(json.dumps({"kind": "ring", "field": {"characteristic": 2}, "order": 1}))


# ============================================================
# Test: Vector Arguments
# ============================================================

class TestVectorArguments:

    @pytest.mark.unit
    @pytest.mark.parametrize("text", ["t=1,t2=1", '{"t": "1", "t2": "1"}', '{"t": 1, "t2": 3}'])
    def test_forms(self, z4_algebra, f2, text):
        assert parse_vector_argument(z4_algebra.space, text) == {0: f2.one, 1: f2.one}

    @pytest.mark.unit
    def test_empty_is_zero(self, z4_algebra):
        assert parse_vector_argument(z4_algebra.space, "") == {}
        assert parse_vector_argument(z4_algebra.space, None) == {}

    @pytest.mark.unit
    def test_missing_equals(self, z4_algebra):
        with pytest.raises(DocumentParseError):
            parse_vector_argument(z4_algebra.space, "t")
