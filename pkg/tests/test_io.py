import json
import math

import jsonschema
import numpy as np
import pytest
from hypothesis import given

from conftest import lcmnl_instances
from refined_assortment.choice_core import Instance, RefinementDomain
from refined_assortment.exceptions import InvalidInstance
from refined_assortment.instance_gen import (
    GeneratorConfig,
    TightConstructionParams,
    example_instances,
    gen_lcmnl,
    prop1_instance,
    prop2_instance,
)
from refined_assortment.io import (
    dumps,
    instance_from_dict,
    instance_schema,
    instance_to_dict,
    jsonable,
    load_instance,
    save_instance,
    validate_document,
)
from refined_assortment.lcmnl import LCMNLModel


def _roundtrip(inst):
    return instance_from_dict(json.loads(dumps(instance_to_dict(inst))))


def _same(a, b):
    X = np.vstack((np.ones(a.n), np.zeros(a.n), np.linspace(0, 1, a.n)))
    np.testing.assert_array_equal(a.r, b.r)
    np.testing.assert_allclose(a.revenue_batch(X), b.revenue_batch(X), rtol=1e-15)
    assert a.domain.to_json() == b.domain.to_json()


@given(lcmnl_instances(max_n=6, max_m=4))
def test_lcmnl_roundtrip(inst):
    _same(inst, _roundtrip(inst))


@pytest.mark.parametrize("name", ["example1", "example2"])
def test_examples_roundtrip(name):
    inst = example_instances()[name]
    _same(inst, _roundtrip(inst))


def test_rcs_roundtrip():
    for inst in prop2_instance(0.1):
        again = _roundtrip(inst)
        assert again.model.kind == "rcs"
        assert again.revenue([1, 1]) == inst.revenue([1, 1])


def test_log_scale_roundtrip():
    inst, _, log_x = prop1_instance(TightConstructionParams(3, 3, 3))
    again = _roundtrip(inst)
    np.testing.assert_array_equal(again.model.log_v, inst.model.log_v)


def test_minus_infinity_written_as_string():
    model = LCMNLModel([0.0], [[0.0, -math.inf]], [1.0], scale="log")
    doc = instance_to_dict(Instance([1.0, 2.0], model))
    assert doc["model"]["params"]["v"][0][1] == "-inf"
    text = dumps(doc)  # strict JSON: would raise on a bare float infinity
    again = instance_from_dict(json.loads(text))
    assert np.isneginf(again.model.log_v[0, 1])
    assert again.revenue([1, 1]) == pytest.approx(0.5)


def test_jsonable():
    assert jsonable({1: (math.inf, -math.inf, np.array([1.5]))}) == {"1": ["inf", "-inf", [1.5]]}


def test_dumps_is_deterministic():
    inst = gen_lcmnl(GeneratorConfig(4, 2, seed=11))
    assert dumps(instance_to_dict(inst)) == dumps(instance_to_dict(gen_lcmnl(GeneratorConfig(4, 2, seed=11))))


def test_save_load(tmp_path):
    inst = gen_lcmnl(GeneratorConfig(5, 3, 0.01, "multimodal", 0.2, "anti", seed=1))
    path = save_instance(inst, tmp_path / "sub" / "a.json")
    _same(inst, load_instance(path))


def test_schema_accepts_generated():
    docs = [instance_to_dict(gen_lcmnl(GeneratorConfig(3, 2, seed=s))) for s in range(5)]
    docs += [instance_to_dict(i) for i in example_instances().values()]
    docs += [instance_to_dict(i) for i in prop2_instance(0.2)]
    docs.append(instance_to_dict(prop1_instance(TightConstructionParams(2, 3, 3))[0]))
    for doc in docs:
        validate_document(json.loads(dumps(doc)))


def test_schema_rejects():
    doc = instance_to_dict(gen_lcmnl(GeneratorConfig(3, 2, seed=0)))
    bad = dict(doc, model={"kind": "probit", "params": {}})
    with pytest.raises(jsonschema.ValidationError):
        validate_document(bad)
    with pytest.raises(jsonschema.ValidationError):
        validate_document({k: v for k, v in doc.items() if k != "domain"})
    assert instance_schema()["required"] == ["n", "r", "domain", "model", "metadata"]


def test_bad_documents(tmp_path):
    doc = instance_to_dict(gen_lcmnl(GeneratorConfig(3, 2, seed=0)))
    with pytest.raises(InvalidInstance):
        instance_from_dict(dict(doc, n=4))
    with pytest.raises(InvalidInstance):
        instance_from_dict(dict(doc, model={"kind": "probit", "params": {}}))
    (tmp_path / "broken.json").write_text("{not json")
    with pytest.raises(InvalidInstance):
        load_instance(tmp_path / "broken.json")
    with pytest.raises(OSError):
        load_instance(tmp_path / "missing.json")


def test_domain_json():
    dom = RefinementDomain.from_json(["binary", "interval", [0.0, 0.3, 1.0]])
    assert dom.to_json() == ["binary", "interval", [0.0, 0.3, 1.0]]
