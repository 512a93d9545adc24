"""Model files in and out: validate, resolve labels, materialize ob.

`load_model` turns a JSON model file into a `LoadedModel` (universe,
valuation, optional F, and the ob table); `dump_model` goes the other way.
Reloading a dumped model gives an equal `LoadedModel`.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from pydantic import ValidationError

from models.errors import ModelFileError, UniverseError
from models.files import ModelFile
from models.formula import Valuation
from models.worlds import WorldSet, context_key
from deontic.ideality import Construction, IdealFun, construct, scores_to_ideal
from deontic.obstruct import ObFun

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoadedModel:
    universe: WorldSet
    valuation: Valuation
    ob: ObFun
    source: str
    ideal: Optional[IdealFun] = None
    construction: Optional[Construction] = None
    scores: Optional[tuple[float, ...]] = None


# ─── Reading ─────────────────────────────────────────────────


def _location(loc: tuple[Any, ...]) -> str:
    return ".".join(str(part) for part in loc) or "model"


def parse_model(data: Any) -> ModelFile:
    """Validate a decoded JSON document; the first schema error becomes a ModelFileError."""
    try:
        return ModelFile.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ModelFileError(_location(tuple(first["loc"])), first["msg"]) from None


def load_model(path: Union[str, Path]) -> LoadedModel:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ModelFileError(str(path), f"cannot read: {e.strerror or e}") from None
    except json.JSONDecodeError as e:
        raise ModelFileError(str(path), f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    except UnicodeDecodeError as e:
        raise ModelFileError(str(path), f"not valid UTF-8 (byte {e.start})") from None
    model = materialize(parse_model(data))
    logger.debug("loaded %s model from %s", model.source, path, extra={"n": model.universe.n})
    return model


def _mask(universe: WorldSet, labels: list[str], where: str) -> int:
    mask = 0
    for i, label in enumerate(labels):
        try:
            bit = 1 << universe.index(label)
        except UniverseError:
            raise ModelFileError(f"{where}[{i}]", f"undeclared world {label!r}") from None
        if mask & bit:
            raise ModelFileError(f"{where}[{i}]", f"world {label!r} listed twice")
        mask |= bit
    return mask


def _context(universe: WorldSet, key: str, where: str) -> int:
    labels = key.split(",") if key else []
    mask = _mask(universe, labels, f"{where}.{key}")
    if key != context_key(labels):
        raise ModelFileError(
            f"{where}.{key}", f"context key must be written {context_key(labels)!r} (sorted, comma-joined)",
        )
    return mask


def _valuation(universe: WorldSet, raw: Mapping[str, list[str]]) -> Valuation:
    bindings = {
        atom: universe.from_mask(_mask(universe, labels, f"valuation.{atom}"))
        for atom, labels in raw.items()
    }
    return Valuation(universe, bindings)


def _ideal_from_map(universe: WorldSet, raw: Mapping[str, list[str]]) -> IdealFun:
    table: dict[int, int] = {}
    for key, labels in raw.items():
        table[_context(universe, key, "F")] = _mask(universe, labels, f"F.{key}")
    # Only the empty context may be left out; it defaults to ∅.
    for x in range(1, universe.context_count):
        if x not in table:
            raise ModelFileError("F", f"missing context {universe.key_of(x)!r}")
    return IdealFun.from_mapping(universe, table)


def _scores(universe: WorldSet, raw: Mapping[str, float]) -> tuple[float, ...]:
    for label in raw:
        if label not in universe.names:
            raise ModelFileError(f"scores.{label}", "undeclared world")
    missing = [name for name in universe.names if name not in raw]
    if missing:
        raise ModelFileError("scores", f"no score for world(s): {', '.join(missing)}")
    return tuple(float(raw[name]) for name in universe.names)


def _ob_from_map(universe: WorldSet, raw: Mapping[str, list[list[str]]]) -> ObFun:
    families: dict[int, list[int]] = {}
    for key, members in raw.items():
        x = _context(universe, key, "ob")
        families[x] = [
            _mask(universe, labels, f"ob.{key}[{j}]") for j, labels in enumerate(members)
        ]
    return ObFun.from_families(universe, families)


def materialize(doc: ModelFile) -> LoadedModel:
    """Resolve labels and build the ob table (directly or via the construction)."""
    try:
        universe = WorldSet(tuple(doc.worlds))
    except UniverseError as e:
        raise ModelFileError("worlds", str(e)) from None
    valuation = _valuation(universe, doc.valuation)
    source = doc.source

    if source == "ob":
        return LoadedModel(universe, valuation, _ob_from_map(universe, doc.ob or {}), source)

    construction = Construction(doc.options.construction)
    scores = None
    if source == "scores":
        scores = _scores(universe, doc.scores or {})
        ideal = scores_to_ideal(universe, scores)
    else:
        ideal = _ideal_from_map(universe, doc.F or {})
    return LoadedModel(
        universe=universe,
        valuation=valuation,
        ob=construct(ideal, construction),
        source=source,
        ideal=ideal,
        construction=construction,
        scores=scores,
    )


# ─── Writing ─────────────────────────────────────────────────


def dump_model(model: LoadedModel, materialize_ob: bool = False) -> ModelFile:
    """The model as a ModelFile; `materialize_ob` writes the explicit ob table instead of F/scores."""
    u = model.universe
    doc: dict[str, Any] = {
        "worlds": list(u.names),
        "valuation": {atom: prop.labels for atom, prop in model.valuation.items()},
    }
    if materialize_ob or model.source == "ob":
        doc["ob"] = {
            u.key_of(x): [u.labels_of(y) for y in model.ob.member_masks(x)]
            for x in range(u.context_count)
        }
        return ModelFile.model_validate(doc)

    if model.source == "scores" and model.scores is not None:
        doc["scores"] = {name: s for name, s in zip(u.names, model.scores)}
    elif model.ideal is not None:
        doc["F"] = {u.key_of(x): u.labels_of(fx) for x, fx in enumerate(model.ideal.table)}
    doc["options"] = {"construction": model.construction.value if model.construction else None}
    return ModelFile.model_validate(doc)


def model_json(doc: ModelFile) -> str:
    return json.dumps(doc.model_dump(exclude_none=True), indent=2, ensure_ascii=False) + "\n"


def write_model(doc: ModelFile, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(model_json(doc), encoding="utf-8")
    return path
