"""JSON (de)serialization of instances and solver output.

An instance document has the fields ``n``, ``r``, ``domain``, ``model`` and
``metadata``; ``model`` is ``{"kind": ..., "params": ...}``.  Domains are a
list with one entry per product: ``"binary"``, ``"interval"`` or a sorted
array of admissible levels.  Log-scale attractions of excluded products are
written as the string ``"-inf"``.  Product indices (including RCS ``pref``)
are 0-based.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

from .choice_core import Instance, RefinementDomain
from .exceptions import InvalidInstance
from .instance_gen import MaxUtilityModel
from .lcmnl import LCMNLModel
from .rcs import RCSModel

MODEL_KINDS = {"lcmnl": LCMNLModel, "rcs": RCSModel, "max-utility": MaxUtilityModel}


def jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return "-inf" if obj < 0 else ("inf" if obj > 0 else "nan")
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):
        return jsonable(obj.tolist())
    return obj


def _decode(obj):
    if obj == "-inf":
        return -math.inf
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def instance_to_dict(instance: Instance):
    return {
        "n": instance.n,
        "r": jsonable(instance.r),
        "domain": instance.domain.to_json(),
        "model": {"kind": instance.model.kind, "params": jsonable(instance.model.to_params())},
        "metadata": jsonable(instance.metadata),
    }


def instance_from_dict(doc) -> Instance:
    try:
        kind = doc["model"]["kind"]
        params = {k: _decode(v) for k, v in doc["model"]["params"].items()}
        cls = MODEL_KINDS[kind]
    except KeyError as exc:
        raise InvalidInstance(f"malformed instance document: missing or unknown {exc}") from None
    model = cls.from_params(params)
    inst = Instance(doc["r"], model, RefinementDomain.from_json(doc["domain"]), doc.get("metadata", {}))
    if "n" in doc and doc["n"] != inst.n:
        raise InvalidInstance(f"document declares n={doc['n']} but holds {inst.n} products")
    return inst


def dumps(obj):
    """Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def save_instance(instance: Instance, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(instance_to_dict(instance)), encoding="utf-8")
    return path


def load_instance(path) -> Instance:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise OSError(f"cannot read instance file {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"{path}: not valid JSON ({exc})") from exc
    return instance_from_dict(doc)


def instance_schema():
    text = resources.files("refined_assortment").joinpath("schemas/instance.schema.json").read_text("utf-8")
    return json.loads(text)


def validate_document(doc):
    """Validate against the bundled JSON schema (needs ``jsonschema``)."""
    import jsonschema

    jsonschema.validate(doc, instance_schema())
