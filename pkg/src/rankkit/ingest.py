"""Turn unprocessed data into dominance matrices.

Games CSV
    ``team_a,score_a,team_b,score_b`` per row, optionally preceded by a date
    column (detected when a row has five fields). A first row whose score
    fields are not integers is treated as a header.

Feature CSV
    ``name,feature_1,...,feature_m`` with a header row naming the features.

Matrix text
    Optional ``#`` comment lines, then ``n``, then ``n`` rows of ``n``
    whitespace-separated rationals (``3``, ``0.5`` or ``1/3``). Comments of
    the form ``# item <i>: <name>`` carry item names.
"""

from __future__ import annotations

import csv
import io
import logging
import re
from fractions import Fraction
from typing import NamedTuple, Sequence

from .core import DominanceMatrix, to_fraction

log = logging.getLogger(__name__)

_ITEM_RE = re.compile(r"#\s*item\s+(\d+)\s*:\s?(.*)$")


class GameRow(NamedTuple):
    team_a: str
    score_a: int
    team_b: str
    score_b: int


class IngestError(ValueError):
    pass


def _is_int(s: str) -> bool:
    try:
        int(s)
    except ValueError:
        return False
    return True


def read_games_csv(text: str) -> list:
    rows = []
    reader = csv.reader(io.StringIO(text))
    for lineno, fields in enumerate(reader, start=1):
        fields = [f.strip() for f in fields]
        if not fields or all(f == "" for f in fields):
            continue
        if len(fields) == 5:
            fields = fields[1:]
        if len(fields) != 4:
            raise IngestError(f"row {lineno}: expected 4 fields (or 5 with a date), got {len(fields)}")
        a, sa, b, sb = fields
        if not (_is_int(sa) and _is_int(sb)):
            if lineno == 1 and not rows:
                continue  # header
            raise IngestError(f"row {lineno}: scores must be integers, got {sa!r} and {sb!r}")
        rows.append((a, sa, b, sb, lineno))
    return [_game_row(*r) for r in rows]


def _game_row(a, sa, b, sb, lineno) -> GameRow:
    try:
        sa, sb = int(sa), int(sb)
    except (TypeError, ValueError):
        raise IngestError(f"row {lineno}: scores must be integers") from None
    if not a or not b:
        raise IngestError(f"row {lineno}: empty team name")
    if a == b:
        raise IngestError(f"row {lineno}: team {a!r} cannot play itself")
    if sa < 0 or sb < 0:
        raise IngestError(f"row {lineno}: scores must be nonnegative")
    return GameRow(a, sa, b, sb)


def ingest_games(rows: Sequence) -> DominanceMatrix:
    """``D(i, j)`` = number of games team i won against team j; draws count for neither."""
    checked = [_game_row(*row, lineno) for lineno, row in enumerate(rows, start=1)]
    if not checked:
        raise IngestError("no games to ingest")
    names = sorted({r.team_a for r in checked} | {r.team_b for r in checked})
    index = {name: i for i, name in enumerate(names)}
    n = len(names)
    D = [[0] * n for _ in range(n)]
    for r in checked:
        a, b = index[r.team_a], index[r.team_b]
        if r.score_a > r.score_b:
            D[a][b] += 1
        elif r.score_b > r.score_a:
            D[b][a] += 1
    return DominanceMatrix(tuple(map(tuple, D)), tuple(names))


def games_to_records(rows: Sequence, teams: Sequence[str] = ()):
    """Team names (sorted) and index-based game records for the rating systems."""
    checked = [_game_row(*row, lineno) for lineno, row in enumerate(rows, start=1)]
    names = sorted(set(teams) | {r.team_a for r in checked} | {r.team_b for r in checked})
    index = {name: i for i, name in enumerate(names)}
    records = [(index[r.team_a], r.score_a, index[r.team_b], r.score_b) for r in checked]
    return names, records


def ingest_features(names: Sequence[str], table: Sequence[Sequence], higher_is_better=None) -> DominanceMatrix:
    """``D(i, j)`` = number of features on which item i strictly outperforms item j."""
    if len(names) != len(table):
        raise IngestError(f"{len(names)} names for {len(table)} rows")
    if not table:
        raise IngestError("empty feature table")
    m = len(table[0])
    if m < 1:
        raise IngestError("feature table needs at least one feature")
    for r, row in enumerate(table):
        if len(row) != m:
            raise IngestError(f"row {r} has {len(row)} features, expected {m}")
    if len(set(names)) != len(names):
        raise IngestError("duplicate item names")
    if higher_is_better is None:
        higher_is_better = [True] * m
    if len(higher_is_better) != m:
        raise IngestError(f"{len(higher_is_better)} directions for {m} features")

    values = {name: [to_fraction(x) for x in row] for name, row in zip(names, table)}
    order = sorted(names)
    n = len(order)
    D = [[0] * n for _ in range(n)]
    for i, a in enumerate(order):
        for j, b in enumerate(order):
            if i == j:
                continue
            va, vb = values[a], values[b]
            D[i][j] = sum(
                1 for f in range(m) if (va[f] > vb[f] if higher_is_better[f] else va[f] < vb[f])
            )
    return DominanceMatrix(tuple(map(tuple, D)), tuple(order))


def read_features_csv(text: str):
    """Returns ``(feature_names, item_names, table)``."""
    reader = csv.reader(io.StringIO(text))
    rows = [[f.strip() for f in r] for r in reader if r and any(f.strip() for f in r)]
    if len(rows) < 2:
        raise IngestError("feature CSV needs a header and at least one item")
    header, body = rows[0], rows[1:]
    features = header[1:]
    names, table = [], []
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise IngestError(f"row {lineno}: {len(row)} fields, header has {len(header)}")
        try:
            table.append([to_fraction(x) for x in row[1:]])
        except (ValueError, ZeroDivisionError):
            raise IngestError(f"row {lineno}: non-numeric feature value") from None
        names.append(row[0])
    return features, names, table


def parse_matrix(text: str) -> DominanceMatrix:
    names = {}
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            m = _ITEM_RE.match(stripped)
            if m:
                names[int(m.group(1))] = m.group(2)
            continue
        for col, tok in enumerate(stripped.split(), start=1):
            tokens.append((tok, lineno, col))
    if not tokens:
        raise IngestError("matrix text is empty")
    tok, lineno, _ = tokens[0]
    if not _is_int(tok) or int(tok) < 1:
        raise IngestError(f"line {lineno}: expected a positive size, got {tok!r}")
    n = int(tok)
    cells = tokens[1:]
    if len(cells) != n * n:
        where = cells[n * n] if len(cells) > n * n else (tokens[-1][0], tokens[-1][1], tokens[-1][2])
        raise IngestError(
            f"expected {n * n} values for n={n}, found {len(cells)} (near line {where[1]}, field {where[2]})"
        )
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            tok, lineno, col = cells[r * n + c]
            try:
                x = to_fraction(tok)
            except (ValueError, ZeroDivisionError):
                raise IngestError(f"line {lineno}, field {col}: not a rational: {tok!r}") from None
            if x < 0:
                raise IngestError(f"line {lineno}, field {col}: negative entry")
            row.append(x)
        rows.append(row)
    for i in range(n):
        if rows[i][i] != 0:
            log.warning("diagonal entry (%d,%d)=%s forced to 0", i, i, rows[i][i])
            rows[i][i] = Fraction(0)
    item_names = None
    if names:
        if sorted(names) != list(range(n)):
            raise IngestError("item name comments must cover items 0..n-1 exactly once")
        item_names = tuple(names[i] for i in range(n))
    return DominanceMatrix(tuple(map(tuple, rows)), item_names)


def format_rational(x: Fraction) -> str:
    """Integers as integers, terminating fractions as exact decimals, others as ``p/q``."""
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    d = x.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    scaled = abs(x.numerator) * 10**digits // x.denominator
    sign = "-" if x < 0 else ""
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def format_matrix(D: DominanceMatrix) -> str:
    lines = []
    if D.item_names is not None:
        lines += [f"# item {i}: {name}" for i, name in enumerate(D.item_names)]
    lines.append(str(D.n))
    lines += [" ".join(format_rational(x) for x in row) for row in D.entries]
    return "\n".join(lines) + "\n"
