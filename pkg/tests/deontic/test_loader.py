"""Tests for model file loading, materialization and dumping."""

import copy

import pytest

from models.errors import ModelFileError
from deontic.fixtures import FIXTURES, PD_QUERY, conflict_model, fixture_file, prisoners_dilemma
from deontic.ideality import Construction, holds_conditional, ob_sup
from deontic.loader import dump_model, load_model, materialize, model_json, parse_model, write_model
from deontic.obstruct import check_all
from models.formula import extension, parse_obligation


def _pd(**changes):
    data = copy.deepcopy(FIXTURES["pd"])
    data.update(changes)
    return data


def _f_model():
    return {
        "worlds": ["a", "b"],
        "valuation": {"p": ["a"]},
        "F": {"a": ["a"], "b": ["b"], "a,b": ["b"]},
        "options": {"construction": "sup"},
    }


# ─── Loading ─────────────────────────────────────────────────


def test_load_scores_model(pd_file):
    model = load_model(pd_file)
    assert model.source == "scores"
    assert model.construction is Construction.SUP
    assert model.scores == (1.0, 3.0, 0.0, 2.0)
    assert model.ob == ob_sup(model.ideal)
    assert model.valuation["D_other"].labels == ["CD", "DD"]


def test_f_model_defaults_empty_context():
    model = materialize(parse_model(_f_model()))
    assert model.ideal.table == (0, 0b01, 0b10, 0b10)


def test_f_model_requires_every_nonempty_context():
    data = _f_model()
    del data["F"]["a,b"]
    with pytest.raises(ModelFileError) as exc:
        materialize(parse_model(data))
    assert exc.value.location == "F"
    assert "'a,b'" in str(exc.value)


def test_context_keys_must_be_sorted():
    data = _f_model()
    data["F"]["b,a"] = data["F"].pop("a,b")
    with pytest.raises(ModelFileError) as exc:
        materialize(parse_model(data))
    assert exc.value.location == "F.b,a"


def test_undeclared_world_in_valuation(write_json):
    path = write_json(_pd(valuation={"C_me": ["CC", "XX"]}))
    with pytest.raises(ModelFileError) as exc:
        load_model(path)
    assert exc.value.location == "valuation.C_me[1]"
    assert "undeclared world 'XX'" in str(exc.value)


def test_undeclared_world_in_scores():
    with pytest.raises(ModelFileError) as exc:
        materialize(parse_model(_pd(scores={"CC": 1, "CD": 3, "DC": 0, "DD": 2, "EE": 5})))
    assert exc.value.location == "scores.EE"


def test_missing_score():
    with pytest.raises(ModelFileError, match="no score for world"):
        materialize(parse_model(_pd(scores={"CC": 1, "CD": 3, "DC": 0})))


def test_ob_model_missing_contexts_are_empty():
    model = materialize(parse_model({"worlds": ["a", "b"], "ob": {"a,b": [["a"], ["a", "b"]]}}))
    u = model.universe
    assert model.ob.family(u.top()) == [u.prop(["a"]), u.top()]
    assert model.ob.family(u.prop(["a"])) == []
    assert model.ideal is None


def test_schema_errors_carry_a_location():
    with pytest.raises(ModelFileError) as exc:
        parse_model(_pd(colour="blue"))
    assert exc.value.location == "colour"
    with pytest.raises(ModelFileError) as exc:
        parse_model(_pd(ob={}))
    assert exc.value.location == "model"


def test_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ not json", encoding="utf-8")
    with pytest.raises(ModelFileError, match="invalid JSON"):
        load_model(path)
    with pytest.raises(ModelFileError, match="cannot read"):
        load_model(tmp_path / "missing.json")


def test_file_that_is_not_utf8(tmp_path):
    path = tmp_path / "latin1.json"
    path.write_bytes(b'{"worlds": ["a\xff"], "ob": {}}')
    with pytest.raises(ModelFileError, match="not valid UTF-8") as exc:
        load_model(path)
    assert exc.value.location == str(path)


def test_nan_score_is_rejected(tmp_path):
    path = tmp_path / "nan.json"
    path.write_text(
        '{"worlds": ["a", "b"], "scores": {"a": NaN, "b": 1}, "options": {"construction": "sup"}}',
        encoding="utf-8",
    )
    with pytest.raises(ModelFileError) as exc:
        load_model(path)
    assert exc.value.location == "scores.a"


# ─── Dumping ─────────────────────────────────────────────────


@pytest.mark.parametrize(
    "data",
    [
        FIXTURES["pd"],
        FIXTURES["conflict"],
        _f_model(),
        {"worlds": ["a", "b"], "valuation": {}, "ob": {"": [[]], "a,b": [["a"]]}},
    ],
)
def test_dump_reloads_to_the_same_model(data, tmp_path):
    model = materialize(parse_model(data))
    path = write_model(dump_model(model), tmp_path / "out.json")
    assert load_model(path) == model


def test_materialized_dump_keeps_the_table(tmp_path):
    model = prisoners_dilemma()
    path = write_model(dump_model(model, materialize_ob=True), tmp_path / "ob.json")
    reloaded = load_model(path)
    assert reloaded.source == "ob"
    assert reloaded.ob == model.ob
    assert reloaded.valuation == model.valuation


def test_dump_is_byte_stable():
    model = prisoners_dilemma()
    assert model_json(dump_model(model)) == model_json(dump_model(model))


# ─── Bundled fixtures ────────────────────────────────────────


def test_prisoners_dilemma_conditions():
    model = prisoners_dilemma()
    verdicts = dict(check_all(model.ob))
    assert all(verdicts[name].holds for name in ("5a", "5b", "5c", "5d"))
    assert not verdicts["5e"].holds


@pytest.mark.parametrize("construction", ["sup", "cap"])
def test_prisoners_dilemma_query(construction):
    model = materialize(parse_model(_pd(options={"construction": construction})))
    query = parse_obligation(PD_QUERY)
    a = extension(query.condition, model.valuation)
    b = extension(query.obligation, model.valuation)
    assert holds_conditional(model.ob, a, b)


def test_conflict_fixture_pair_is_generic():
    model = conflict_model()
    assert model.valuation["A"].labels == ["2", "3"]
    assert model.valuation["B"].labels == ["1", "3"]


def test_unknown_fixture():
    with pytest.raises(KeyError):
        fixture_file("chisholm")
