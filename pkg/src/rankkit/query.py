"""Conjunctive filter queries over model cards.

Grammar::

    query     := predicate ( "&&" predicate )*
    predicate := field op value
    op        := "==" | "!=" | "<=" | ">=" | "<" | ">" | "contains"
    value     := number | bare-word | "double quoted string"

Fields are the scalar model-card fields plus the measures (``k``, ``p``,
``tau``, ``beta``, ``p_k``, also reachable as ``measures.k`` etc.).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import to_fraction

_NUMERIC = {
    "dataset_id": lambda c: c.dataset_id,
    "n": lambda c: c.n,
    "optimal_objective": lambda c: c.optimal_objective,
    "num_optimal_rankings": lambda c: c.num_optimal_rankings,
    "diameter": lambda c: c.diameter,
    "k": lambda c: c.measures.k,
    "p_k": lambda c: c.measures.p_k,
    "p": lambda c: c.measures.p,
    "tau": lambda c: c.measures.tau,
    "beta": lambda c: c.measures.beta,
}
_TEXT = {
    "source": lambda c: c.source,
    "method": lambda c: c.method,
    "sense": lambda c: c.sense,
}
_BOOL = {"complete": lambda c: c.complete}

for _m in ("k", "p_k", "p", "tau", "beta"):
    _NUMERIC[f"measures.{_m}"] = _NUMERIC[_m]

FIELDS = sorted({*_NUMERIC, *_TEXT, *_BOOL})

_TOKEN = re.compile(
    r"""\s*(?:
        (?P<and>&&)
      | (?P<op>==|!=|<=|>=|<|>|contains\b)
      | (?P<str>"(?:[^"\\]|\\.)*")
      | (?P<word>[^\s&=!<>"]+)
    )""",
    re.VERBOSE,
)


class QueryError(ValueError):
    def __init__(self, position: int, message: str):
        super().__init__(f"query error at position {position}: {message}")
        self.position = position


@dataclass(frozen=True)
class Predicate:
    field: str
    op: str
    value: object
    position: int

    def __call__(self, card) -> bool:
        if self.field in _NUMERIC:
            x = _NUMERIC[self.field](card)
            if x is None:
                return False
        elif self.field in _BOOL:
            x = _BOOL[self.field](card)
        else:
            x = _TEXT[self.field](card)
        v = self.value
        if self.op == "contains":
            return v in x
        return {
            "==": x == v,
            "!=": x != v,
            "<": x < v,
            "<=": x <= v,
            ">": x > v,
            ">=": x >= v,
        }[self.op]


def _tokens(query: str):
    pos = 0
    out = []
    while pos < len(query):
        if query[pos:].strip() == "":
            break
        m = _TOKEN.match(query, pos)
        if m is None or m.end() == pos:
            start = len(query) - len(query[pos:].lstrip())
            raise QueryError(start, f"unexpected character {query[start]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


def parse_query(query: str) -> list:
    toks = _tokens(query)
    preds = []
    i = 0
    end = len(query)
    while True:
        if i + 3 > len(toks):
            at = toks[i][2] if i < len(toks) else end
            raise QueryError(at, "expected 'field op value'")
        (fk, field, fpos), (ok, op, opos), (vk, raw, vpos) = toks[i:i + 3]
        if fk != "word":
            raise QueryError(fpos, f"expected a field name, got {field!r}")
        if field not in FIELDS:
            raise QueryError(fpos, f"unknown field {field!r}")
        if ok != "op":
            raise QueryError(opos, f"expected an operator, got {op!r}")
        if vk not in ("word", "str"):
            raise QueryError(vpos, f"expected a value, got {raw!r}")
        text = raw[1:-1].encode().decode("unicode_escape") if vk == "str" else raw
        preds.append(Predicate(field, op, _coerce(field, op, text, vpos, fpos), fpos))
        i += 3
        if i == len(toks):
            return preds
        kind, tok, pos = toks[i]
        if kind != "and":
            raise QueryError(pos, f"expected '&&', got {tok!r}")
        i += 1


def _coerce(field, op, text, vpos, fpos):
    if field in _NUMERIC:
        if op == "contains":
            raise QueryError(fpos, f"'contains' does not apply to numeric field {field!r}")
        try:
            return to_fraction(text)
        except (ValueError, ZeroDivisionError):
            raise QueryError(vpos, f"{field!r} needs a number, got {text!r}") from None
    if field in _BOOL:
        if op not in ("==", "!="):
            raise QueryError(fpos, f"boolean field {field!r} supports only == and !=")
        if text not in ("true", "false"):
            raise QueryError(vpos, f"{field!r} needs true or false")
        return text == "true"
    return text


def filter_cards(cards, query: str) -> list:
    """dataset_ids of the cards satisfying every predicate, ascending."""
    preds = parse_query(query)
    return sorted(c.dataset_id for c in cards if all(p(c) for p in preds))

