"""Canonical JSON model cards.

Layout rules, which make :func:`emit` byte-deterministic:

* keys appear in the fixed order of :data:`FIELDS` (nested objects likewise);
* 2-space indentation, one key per line; arrays whose elements are all
  scalars are written on one line, ``[1, 2, 3]``;
* integers are written as integers, rationals with a terminating decimal
  expansion as exact decimals (``0.5``), any other rational as a JSON
  string ``"p/q"`` so no precision is lost;
* UTF-8 without escaping of non-ASCII text, and a trailing newline.

Rankings are stored as 1-based rank vectors: entry ``i`` is the position of
item ``i``.
"""

from __future__ import annotations

import json
import logging
import os
import warnings
from dataclasses import dataclass, fields as dc_fields
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .core import SENSES, DominanceMatrix, Measures, Ranking, rank_vector
from .generators import GenSpec
from .ingest import format_rational
from .rankability import Analysis, XStar

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MAX_STORED_RANKINGS = 1000
METHODS = ("lop", "hillside", "k")

FIELDS = (
    "schema_version",
    "dataset_id",
    "source",
    "n",
    "item_names",
    "D",
    "method",
    "sense",
    "optimal_objective",
    "num_optimal_rankings",
    "complete",
    "optimal_rankings",
    "diameter",
    "farthest_pair",
    "closest_pair",
    "centroid_solution",
    "centroid_farthest",
    "measures",
    "xstar",
    "genspec",
)
MEASURE_FIELDS = ("k", "p_k", "p", "tau", "beta")
XSTAR_FIELDS = ("estimated", "reference", "values")
GENSPEC_FIELDS = tuple(f.name for f in dc_fields(GenSpec))


class SchemaError(ValueError):
    """Invalid model card; ``path`` is a JSONPath-like location such as ``$.n``."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class CatalogWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ModelCard:
    dataset_id: int
    source: str
    D: DominanceMatrix
    method: str
    sense: str
    optimal_objective: Fraction
    num_optimal_rankings: int
    complete: bool
    optimal_rankings: tuple
    diameter: int
    farthest_pair: tuple
    closest_pair: Optional[tuple]
    centroid_solution: tuple
    centroid_farthest: tuple
    measures: Measures
    xstar: Optional[XStar] = None
    genspec: Optional[GenSpec] = None

    def __post_init__(self):
        n = self.D.n
        if self.method not in METHODS:
            raise SchemaError("$.method", f"unknown method {self.method!r}")
        if self.sense not in SENSES:
            raise SchemaError("$.sense", f"unknown sense {self.sense!r}")
        if self.num_optimal_rankings < 1:
            raise SchemaError("$.num_optimal_rankings", "must be at least 1")
        if len(self.optimal_rankings) != min(self.num_optimal_rankings, MAX_STORED_RANKINGS):
            raise SchemaError(
                "$.optimal_rankings",
                f"holds {len(self.optimal_rankings)} rankings, expected "
                f"min(num_optimal_rankings, {MAX_STORED_RANKINGS})",
            )
        for k, rv in enumerate(self.optimal_rankings):
            _check_rank_vector(rv, n, f"$.optimal_rankings[{k}]")
        if len(set(self.optimal_rankings)) != len(self.optimal_rankings):
            raise SchemaError("$.optimal_rankings", "duplicate rankings")
        for name in ("farthest_pair", "closest_pair"):
            pair = getattr(self, name)
            if pair is None:
                continue
            if len(pair) != 2:
                raise SchemaError(f"$.{name}", "must hold exactly two rankings")
            for k, rv in enumerate(pair):
                _check_rank_vector(rv, n, f"$.{name}[{k}]")
        if self.closest_pair is not None and self.closest_pair[0] == self.closest_pair[1]:
            raise SchemaError("$.closest_pair", "rankings must be distinct")
        _check_rank_vector(self.centroid_solution, n, "$.centroid_solution")
        _check_rank_vector(self.centroid_farthest, n, "$.centroid_farthest")
        if self.diameter < 0 or self.diameter > n * (n - 1) // 2:
            raise SchemaError("$.diameter", "out of range")
        if self.xstar is not None and self.xstar.n != n:
            raise SchemaError("$.xstar.values", f"X* is {self.xstar.n}x{self.xstar.n}, expected {n}x{n}")

    @property
    def n(self) -> int:
        return self.D.n


def _check_rank_vector(rv, n, path):
    if len(rv) != n:
        raise SchemaError(path, f"rank vector has {len(rv)} entries, expected {n}")
    if sorted(rv) != list(range(1, n + 1)):
        raise SchemaError(path, "not a permutation of rank positions 1..n")


def card_from_analysis(
    D: DominanceMatrix,
    analysis: Analysis,
    dataset_id: int = 0,
    source: str = "user",
    genspec: Optional[GenSpec] = None,
) -> ModelCard:
    P = analysis.optimal
    geo = analysis.geometry
    stored = list(P.rankings)
    if len(stored) > MAX_STORED_RANKINGS:
        stored = _nearest_to_centroid(stored, MAX_STORED_RANKINGS)
    rv = lambda r: tuple(rank_vector(r))  # noqa: E731
    return ModelCard(
        dataset_id=dataset_id,
        source=source,
        D=D,
        method=analysis.method,
        sense=P.sense,
        optimal_objective=P.objective,
        num_optimal_rankings=len(P),
        complete=P.complete,
        optimal_rankings=tuple(rv(r) for r in sorted(stored)),
        diameter=geo.diameter,
        farthest_pair=(rv(geo.farthest_pair[0]), rv(geo.farthest_pair[1])),
        closest_pair=None if geo.closest_pair is None else (rv(geo.closest_pair[0]), rv(geo.closest_pair[1])),
        centroid_solution=rv(geo.centroid_closest),
        centroid_farthest=rv(geo.centroid_farthest),
        measures=analysis.measures,
        xstar=analysis.xstar,
        genspec=genspec,
    )


def _nearest_to_centroid(rankings, keep):
    m = len(rankings)
    vecs = [rank_vector(r) for r in rankings]
    total = [sum(col) for col in zip(*vecs)]
    score = [m * sum(x * x for x in v) - 2 * sum(x * t for x, t in zip(v, total)) for v in vecs]
    idx = sorted(range(m), key=lambda i: (score[i], rankings[i].order))[:keep]
    return [rankings[i] for i in idx]


# -- emit ---------------------------------------------------------------------


def _scalar(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        s = format_rational(x)
        return json.dumps(s) if "/" in s else s
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _dump(value, indent: int) -> str:
    pad = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_dump(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return "[" + ", ".join(_scalar(v) for v in value) + "]"
        items = [pad + _dump(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return _scalar(value)


def to_tree(card: ModelCard) -> dict:
    m = card.measures
    return {
        "schema_version": SCHEMA_VERSION,
        "dataset_id": card.dataset_id,
        "source": card.source,
        "n": card.n,
        "item_names": None if card.D.item_names is None else list(card.D.item_names),
        "D": [list(row) for row in card.D.entries],
        "method": card.method,
        "sense": card.sense,
        "optimal_objective": card.optimal_objective,
        "num_optimal_rankings": card.num_optimal_rankings,
        "complete": card.complete,
        "optimal_rankings": [list(r) for r in card.optimal_rankings],
        "diameter": card.diameter,
        "farthest_pair": [list(r) for r in card.farthest_pair],
        "closest_pair": None if card.closest_pair is None else [list(r) for r in card.closest_pair],
        "centroid_solution": list(card.centroid_solution),
        "centroid_farthest": list(card.centroid_farthest),
        "measures": {"k": m.k, "p_k": m.p_k, "p": m.p, "tau": m.tau, "beta": m.beta},
        "xstar": None
        if card.xstar is None
        else {
            "estimated": card.xstar.estimated,
            "reference": rank_vector(card.xstar.reference),
            "values": [list(row) for row in card.xstar.values],
        },
        "genspec": None if card.genspec is None else {k: _genspec_value(v) for k, v in card.genspec.to_dict().items()},
    }


def _genspec_value(v):
    if isinstance(v, float):
        return Fraction(repr(v))
    return v


def emit(card: ModelCard) -> str:
    return _dump(to_tree(card), 0) + "\n"


# -- parse --------------------------------------------------------------------


def _obj(value, path, keys, optional=()):
    if not isinstance(value, dict):
        raise SchemaError(path, "expected an object")
    for key in value:
        if key not in keys:
            raise SchemaError(f"{path}.{key}", "unknown field")
    for key in keys:
        if key not in value and key not in optional:
            raise SchemaError(f"{path}.{key}", "missing required field")
    return value


def _int(value, path, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, "expected an integer")
    if minimum is not None and value < minimum:
        raise SchemaError(path, f"must be >= {minimum}")
    return value


def _bool(value, path):
    if not isinstance(value, bool):
        raise SchemaError(path, "expected true or false")
    return value


def _str(value, path):
    if not isinstance(value, str):
        raise SchemaError(path, "expected a string")
    return value


def _rational(value, path) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(path, "expected a number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str) and "/" in value:
        try:
            x = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(path, f"bad rational {value!r}") from None
        if x.denominator == 1 or format_rational(x) != value:
            raise SchemaError(path, f"rational {value!r} is not in canonical form")
        return x
    raise SchemaError(path, "expected a number or a \"p/q\" string")


def _list(value, path, length=None):
    if not isinstance(value, list):
        raise SchemaError(path, "expected an array")
    if length is not None and len(value) != length:
        raise SchemaError(path, f"expected {length} elements, got {len(value)}")
    return value


def _rank_vector(value, path, n) -> tuple:
    rv = tuple(_int(x, f"{path}[{i}]") for i, x in enumerate(_list(value, path, n)))
    _check_rank_vector(rv, n, path)
    return rv


def _matrix(value, path, n) -> tuple:
    rows = _list(value, path, n)
    return tuple(
        tuple(_rational(x, f"{path}[{i}][{j}]") for j, x in enumerate(_list(row, f"{path}[{i}]", n)))
        for i, row in enumerate(rows)
    )


def _pair(value, path, n):
    items = _list(value, path, 2)
    return tuple(_rank_vector(v, f"{path}[{k}]", n) for k, v in enumerate(items))


def _wrap(path, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except SchemaError:
        raise
    except (ValueError, TypeError) as exc:
        raise SchemaError(path, str(exc)) from None


def from_tree(tree) -> ModelCard:
    t = _obj(tree, "$", FIELDS)
    version = _int(t["schema_version"], "$.schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError("$.schema_version", f"unsupported schema version {version}")
    n = _int(t["n"], "$.n", minimum=1)
    names = t["item_names"]
    if names is not None:
        names = tuple(_str(s, f"$.item_names[{i}]") for i, s in enumerate(_list(names, "$.item_names", n)))
    D = _wrap("$.D", DominanceMatrix, _matrix(t["D"], "$.D", n), names)

    m = _obj(t["measures"], "$.measures", MEASURE_FIELDS)
    measures = _wrap(
        "$.measures",
        Measures,
        k=None if m["k"] is None else _rational(m["k"], "$.measures.k"),
        p_k=None if m["p_k"] is None else _int(m["p_k"], "$.measures.p_k", 1),
        p=_int(m["p"], "$.measures.p"),
        tau=_int(m["tau"], "$.measures.tau"),
        beta=_rational(m["beta"], "$.measures.beta"),
    )

    xs = t["xstar"]
    if xs is not None:
        xs = _obj(xs, "$.xstar", XSTAR_FIELDS)
        ref = _rank_vector(xs["reference"], "$.xstar.reference", n)
        xs = _wrap(
            "$.xstar",
            XStar,
            _matrix(xs["values"], "$.xstar.values", n),
            Ranking.from_rank_vector(ref),
            _bool(xs["estimated"], "$.xstar.estimated"),
        )

    gs = t["genspec"]
    if gs is not None:
        gs = _obj(gs, "$.genspec", GENSPEC_FIELDS)
        kwargs = {}
        for key, v in gs.items():
            if isinstance(v, Decimal):
                v = float(v)
            kwargs[key] = v
        gs = _wrap("$.genspec", GenSpec, **kwargs)

    rankings = tuple(
        _rank_vector(v, f"$.optimal_rankings[{i}]", n)
        for i, v in enumerate(_list(t["optimal_rankings"], "$.optimal_rankings"))
    )
    closest = t["closest_pair"]
    method = _str(t["method"], "$.method")
    sense = _str(t["sense"], "$.sense")
    return _wrap(
        "$",
        ModelCard,
        dataset_id=_int(t["dataset_id"], "$.dataset_id"),
        source=_str(t["source"], "$.source"),
        D=D,
        method=method,
        sense=sense,
        optimal_objective=_rational(t["optimal_objective"], "$.optimal_objective"),
        num_optimal_rankings=_int(t["num_optimal_rankings"], "$.num_optimal_rankings", 1),
        complete=_bool(t["complete"], "$.complete"),
        optimal_rankings=rankings,
        diameter=_int(t["diameter"], "$.diameter", 0),
        farthest_pair=_pair(t["farthest_pair"], "$.farthest_pair", n),
        closest_pair=None if closest is None else _pair(closest, "$.closest_pair", n),
        centroid_solution=_rank_vector(t["centroid_solution"], "$.centroid_solution", n),
        centroid_farthest=_rank_vector(t["centroid_farthest"], "$.centroid_farthest", n),
        measures=measures,
        xstar=xs,
        genspec=gs,
    )


def parse(text: str) -> ModelCard:
    try:
        tree = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"malformed JSON: {exc}") from None
    return from_tree(tree)


def write_card(card: ModelCard, directory) -> Path:
    path = Path(directory) / f"{card.dataset_id}.json"
    path.write_text(emit(card), encoding="utf-8")
    return path


def load_catalog(directory) -> list:
    """Every parseable ``*.json`` card in ``directory``, sorted by dataset_id.

    Files that fail to parse raise a :class:`CatalogWarning` and are skipped.
    """
    directory = Path(directory)
    if not directory.is_dir() or not os.access(directory, os.R_OK | os.X_OK):
        raise OSError(f"cannot read catalog directory {directory}")
    cards = []
    for path in sorted(directory.glob("*.json")):
        try:
            cards.append(parse(path.read_text(encoding="utf-8")))
        except (OSError, UnicodeDecodeError, SchemaError) as exc:
            log.warning("skipping %s: %s", path.name, exc)
            warnings.warn(f"{path.name}: {exc}", CatalogWarning, stacklevel=2)
    cards.sort(key=lambda c: c.dataset_id)
    return cards
