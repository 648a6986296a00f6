import json

import pytest

from camir_eval.errors import SchemaError
from camir_eval.schema import (
    UNDETERMINED,
    default_schema,
    default_schema_text,
    load_schema,
    validate_corpus,
    validate_document,
)
from camir_eval.standoff import parse_document


def _config():
    return json.loads(default_schema_text())


def _load(cfg):
    return load_schema(json.dumps(cfg))


def test_shipped_schema_counts(schema):
    assert schema.event_type_names == ("Indication", "Lesion", "Medical Problem")
    assert len(schema.anatomy.parents) == 16
    assert schema.anatomy.child_count == 71
    assert all(UNDETERMINED in schema.anatomy.children[p] for p in schema.anatomy.parents)


def test_categories_start_each_event_with_trigger(schema):
    cats = schema.categories()
    assert cats[0] == ("Indication", "TRIGGER")
    assert ("Lesion", "Size Trend") in cats
    assert len(cats) == 3 + sum(len(et.roles) for et in schema.event_types)


@pytest.mark.parametrize("index", range(16))
def test_removing_undetermined_fails(index):
    cfg = _config()
    cfg["anatomy"]["parents"][index]["children"].remove(UNDETERMINED)
    with pytest.raises(SchemaError) as info:
        _load(cfg)
    assert info.value.rule == "undetermined_child"


def test_syntax_error_reports_position():
    with pytest.raises(SchemaError) as info:
        load_schema('{"event_types": [\n  }')
    assert info.value.rule == "syntax"
    assert "line 2" in str(info.value)


@pytest.mark.parametrize("mutate, rule", [
    (lambda c: c["event_types"].append(c["event_types"][0]), "unique_event_types"),
    (lambda c: c["event_types"][1]["roles"].append(c["event_types"][1]["roles"][0]), "unique_roles"),
    (lambda c: c["anatomy"]["parents"].append(c["anatomy"]["parents"][0]), "unique_parents"),
    (lambda c: c["anatomy"]["parents"][0].update(children=[]), "parent_has_children"),
    (lambda c: c["anatomy"]["parents"][0]["children"].append("Heart"), "unique_children"),
    (lambda c: c["event_types"][1]["roles"][1].update(kind="free_text"), "role_kind"),
    (lambda c: c["event_types"][1]["roles"][1].update(vocabulary=[]), "value_vocabulary"),
    (lambda c: c.pop("event_types"), "config_grammar"),
])
def test_rule_violations(mutate, rule):
    cfg = _config()
    mutate(cfg)
    with pytest.raises(SchemaError) as info:
        _load(cfg)
    assert info.value.rule == rule


def test_config_driven_extension():
    cfg = _config()
    cfg["event_types"].append({"name": "Device", "roles": [
        {"name": "Assertion", "kind": "span_with_value", "required": False, "vocabulary": ["present", "absent"]}]})
    s = _load(cfg)
    assert "Device" in s.event_type_names


TEXT = "No new nodule in the liver. Effusion."


def _rules(ann):
    return {v.rule for v in validate_document(default_schema(), parse_document(TEXT, ann, "d"))}


def test_valid_document_has_no_violations():
    ann = ("T1\tLesion 7 13\tnodule\nT2\tAnatomy 21 26\tliver\nT3\tAssertion 0 2\tNo\n"
           "E1\tLesion:T1 Anatomy:T2 Assertion:T3\n"
           "A1\tAnatomy Parent T2 Digestive\nA2\tAnatomy Child T2 Liver\nA3\tAssertion T3 absent\n")
    assert _rules(ann) == set()


@pytest.mark.parametrize("ann, rule", [
    ("T1\tTumor 7 13\tnodule\nE1\tTumor:T1\n", "unknown_event_type"),
    ("T1\tLesion 7 13\tnodule\nE1\tLesion:T1\n", "required_role_absent"),
    ("T1\tLesion 7 13\tnodule\nT2\tSize 21 26\tliver\nE1\tLesion:T1 Shape:T2\nA1\tAssertion E1 present\n",
     "role_not_allowed"),
    ("T1\tLesion 7 13\tnodule\nT2\tSize 21 26\tliver\nE1\tLesion:T1 Anatomy:T2\nA1\tAssertion E1 present\n",
     "argument_label_mismatch"),
    ("T1\tLesion 7 13\tnodule\nE1\tLesion:T1\nA1\tAssertion E1 maybe\n", "subtype_out_of_vocabulary"),
    ("T1\tLesion 7 13\tnodule\nT2\tAnatomy 21 26\tliver\nE1\tLesion:T1 Anatomy:T2\nA1\tAssertion E1 present\n"
     "A2\tAnatomy Parent T2 Digestive\n", "subtype_missing"),
    ("T1\tLesion 7 13\tnodule\nT2\tAnatomy 21 26\tliver\nE1\tLesion:T1 Anatomy:T2\nA1\tAssertion E1 present\n"
     "A2\tAnatomy Parent T2 Digestive\nA3\tAnatomy Child T2 Lung\n", "child_not_under_parent"),
    ("T1\tLesion 7 13\tnodule\nT2\tCount 3 6\tnew\nE1\tLesion:T1 Count:T2\nA1\tAssertion E1 present\n"
     "A2\tCount T2 two\n", "span_only_has_subtype"),
    ("T1\tLesion 7 13\tnodule\nE1\tLesion:T1\nE2\tLesion:T1\nA1\tAssertion E1 present\nA2\tAssertion E2 present\n",
     "shared_trigger"),
    ("T1\tLesion 7 13\tnodule\n", "orphan_trigger"),
])
def test_document_rules(ann, rule):
    assert rule in _rules(ann)


def test_validate_corpus_sorted(synth_corpus, schema):
    assert validate_corpus(schema, synth_corpus) == []
    bad = parse_document(TEXT, "T1\tLesion 7 13\tnodule\nE1\tLesion:T1\n", "a")
    bad2 = parse_document(TEXT, "T1\tTumor 7 13\tnodule\nE1\tTumor:T1\n", "0")
    out = validate_corpus(schema, [bad, bad2])
    assert out == sorted(out)
    assert [v.doc_id for v in out] == ["0", "a"]
