"""Finite magmas stored as Cayley tables, plus the identity probes used throughout.

Elements are the dense indices ``0..n-1``; labels are display metadata only.
Row index is the left operand, so ``table[i][j]`` is ``i*j``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class MagmaError(ValueError):
    """Raised for malformed tables or out-of-range elements."""


class ParseError(MagmaError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if column is not None:
            loc.append(f"column {column}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.line = line
        self.column = column


def default_labels(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(chr(ord("a") + i) for i in range(n))
    return tuple(str(i) for i in range(n))


@dataclass(frozen=True)
class Magma:
    order: int
    table: tuple[tuple[int, ...], ...]
    labels: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        n = self.order
        if n < 1:
            raise MagmaError("order must be at least 1")
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        if len(table) != n or any(len(row) != n for row in table):
            raise MagmaError(f"table must be {n}x{n}")
        for i, row in enumerate(table):
            for j, v in enumerate(row):
                if not 0 <= v < n:
                    raise MagmaError(f"entry ({i},{j})={v} is not an element of 0..{n - 1}")
        object.__setattr__(self, "table", table)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != n:
                raise MagmaError(f"expected {n} labels, got {len(labels)}")
            if len(set(labels)) != n:
                raise MagmaError("labels must be pairwise distinct")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_flat(cls, n: int, flat: Sequence[int], labels: Optional[Sequence[str]] = None) -> "Magma":
        if len(flat) != n * n:
            raise MagmaError(f"flat table must have {n * n} entries")
        rows = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
        return cls(n, rows, tuple(labels) if labels is not None else None)

    @property
    def flat(self) -> tuple[int, ...]:
        return tuple(itertools.chain.from_iterable(self.table))

    @property
    def elements(self) -> range:
        return range(self.order)

    def label(self, x: int) -> str:
        return (self.labels or default_labels(self.order))[x]

    def index(self, symbol: str) -> int:
        labels = self.labels or default_labels(self.order)
        try:
            return labels.index(symbol)
        except ValueError:
            raise MagmaError(f"unknown element {symbol!r}") from None

    def without_labels(self) -> "Magma":
        return Magma(self.order, self.table)

    def __call__(self, a: int, b: int) -> int:
        return self.table[a][b]

    def __repr__(self) -> str:
        return f"Magma(order={self.order}, flat={''.join(map(str, self.flat)) if self.order <= 10 else self.flat})"


def product(m: Magma, a: int, b: int) -> int:
    n = m.order
    if not (0 <= a < n and 0 <= b < n):
        raise MagmaError(f"element out of range for order {n}: ({a}, {b})")
    return m.table[a][b]


# ---------------------------------------------------------------------------
# text / JSON formats


def _strip_comments(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def _parse_text(text: str) -> Magma:
    lines = _strip_comments(text)
    if not lines:
        raise ParseError("empty input")
    lineno, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise ParseError(f"expected order, got {head!r}", lineno, 1) from None
    if n < 1:
        raise ParseError("order must be at least 1", lineno, 1)
    body = lines[1:]
    labels: Optional[tuple[str, ...]] = None
    if len(body) == n + 1:
        lineno, label_line = body[0]
        labels = tuple(label_line.split())
        if len(labels) != n:
            raise ParseError(f"expected {n} labels, got {len(labels)}", lineno)
        seen: dict[str, int] = {}
        for col, s in enumerate(labels, start=1):
            if s in seen:
                raise ParseError(f"duplicate label {s!r}", lineno, col)
            seen[s] = col
        body = body[1:]
    elif len(body) != n:
        where = body[-1][0] if body else lineno
        raise ParseError(f"expected {n} table rows, got {len(body)}", where)
    elif not all(tok.isdigit() for tok in body[0][1].split()):
        # symbols without a label line: the first line must have been the labels
        raise ParseError(f"expected {n} table rows after the label line, got {n - 1}", body[-1][0])

    lookup = {s: i for i, s in enumerate(labels)} if labels else {}
    rows = []
    for r, (lineno, line) in enumerate(body):
        cells = line.split()
        if len(cells) != n:
            raise ParseError(f"row {r} has {len(cells)} entries, expected {n}", lineno, len(cells) + 1)
        row = []
        for col, cell in enumerate(cells, start=1):
            if cell in lookup:
                row.append(lookup[cell])
            elif cell.isdigit() and int(cell) < n:
                row.append(int(cell))
            else:
                raise ParseError(f"unknown symbol {cell!r}", lineno, col)
        rows.append(tuple(row))
    return Magma(n, tuple(rows), labels)


def _parse_json(text: str) -> Magma:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict) or "order" not in data or "table" not in data:
        raise ParseError("JSON magma needs 'order' and 'table'")
    n = data["order"]
    if not isinstance(n, int) or n < 1:
        raise ParseError("'order' must be a positive integer")
    table = data["table"]
    if not isinstance(table, list) or len(table) != n:
        raise ParseError(f"'table' must have {n} rows")
    for r, row in enumerate(table):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"row {r} must have {n} entries", r + 1)
        for c, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                raise ParseError(f"entry {v!r} is not an element index", r + 1, c + 1)
    labels = data.get("elements")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != n:
            raise ParseError(f"'elements' must list {n} labels")
        dup = [s for s in labels if labels.count(s) > 1]
        if dup:
            raise ParseError(f"duplicate label {dup[0]!r}", None, labels.index(dup[0]) + 1)
        labels = tuple(str(s) for s in labels)
    return Magma(n, tuple(tuple(row) for row in table), labels)


def parse_magma(text: str, fmt: str = "auto") -> Magma:
    """Parse a magma from the text grid format or the JSON format.

    ``fmt`` is ``"text"``, ``"json"`` or ``"auto"`` (JSON when the input starts with ``{``).
    """
    if fmt == "auto":
        fmt = "json" if text.lstrip().startswith("{") else "text"
    if fmt == "json":
        return _parse_json(text)
    if fmt == "text":
        return _parse_text(text)
    raise ValueError(f"unknown format {fmt!r}")


def serialize_magma(m: Magma, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(magma_to_dict(m), sort_keys=True)
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    labels = m.labels or default_labels(m.order)
    lines = [str(m.order), " ".join(labels)]
    lines += [" ".join(labels[v] for v in row) for row in m.table]
    return "\n".join(lines)


def magma_to_dict(m: Magma) -> dict:
    d: dict = {"order": m.order, "table": [list(row) for row in m.table]}
    if m.labels is not None:
        d["elements"] = list(m.labels)
    return d


# ---------------------------------------------------------------------------
# identities; each returns the lexicographically least failing tuple, or None


def left_invertive_failure(m: Magma) -> Optional[tuple[int, int, int]]:
    t = m.table
    for a, b, c in itertools.product(m.elements, repeat=3):
        if t[t[a][b]][c] != t[t[c][b]][a]:
            return (a, b, c)
    return None


def medial_failure(m: Magma) -> Optional[tuple[int, int, int, int]]:
    t = m.table
    for a, b, c, d in itertools.product(m.elements, repeat=4):
        if t[t[a][b]][t[c][d]] != t[t[a][c]][t[b][d]]:
            return (a, b, c, d)
    return None


def paramedial_failure(m: Magma) -> Optional[tuple[int, int, int, int]]:
    t = m.table
    for a, b, c, d in itertools.product(m.elements, repeat=4):
        if t[t[a][b]][t[c][d]] != t[t[d][c]][t[b][a]]:
            return (a, b, c, d)
    return None


def law4_failure(m: Magma) -> Optional[tuple[int, int, int]]:
    t = m.table
    for a, b, c in itertools.product(m.elements, repeat=3):
        if t[a][t[b][c]] != t[b][t[a][c]]:
            return (a, b, c)
    return None


def ag_star_failure(m: Magma) -> Optional[tuple[int, int, int]]:
    """Least triple violating (ab)c = b(ac); left invertivity is checked separately."""
    t = m.table
    for a, b, c in itertools.product(m.elements, repeat=3):
        if t[t[a][b]][c] != t[b][t[a][c]]:
            return (a, b, c)
    return None


def associativity_failure(m: Magma) -> Optional[tuple[int, int, int]]:
    t = m.table
    for a, b, c in itertools.product(m.elements, repeat=3):
        if t[t[a][b]][c] != t[a][t[b][c]]:
            return (a, b, c)
    return None


def commutativity_failure(m: Magma) -> Optional[tuple[int, int]]:
    t = m.table
    for a, b in itertools.product(m.elements, repeat=2):
        if t[a][b] != t[b][a]:
            return (a, b)
    return None


_PERMS4 = list(itertools.permutations(range(4)))


def permutation_identity_failure(m: Magma) -> Optional[tuple[int, int, int, int]]:
    t = m.table
    for xs in itertools.product(m.elements, repeat=4):
        ref = t[t[xs[0]][xs[1]]][t[xs[2]][xs[3]]]
        for p in _PERMS4:
            if t[t[xs[p[0]]][xs[p[1]]]][t[xs[p[2]]][xs[p[3]]]] != ref:
                return xs
    return None


def is_left_invertive(m: Magma) -> bool:
    return left_invertive_failure(m) is None


def is_medial(m: Magma) -> bool:
    return medial_failure(m) is None


def is_paramedial(m: Magma) -> bool:
    return paramedial_failure(m) is None


def satisfies_law4(m: Magma) -> bool:
    return law4_failure(m) is None


def is_ag_star(m: Magma) -> bool:
    return is_left_invertive(m) and ag_star_failure(m) is None


def satisfies_permutation_identity(m: Magma) -> bool:
    return permutation_identity_failure(m) is None


def is_associative(m: Magma) -> bool:
    return associativity_failure(m) is None


def is_commutative(m: Magma) -> bool:
    return commutativity_failure(m) is None


def left_identities(m: Magma) -> list[int]:
    return [e for e in m.elements if all(m.table[e][x] == x for x in m.elements)]


def right_identities(m: Magma) -> list[int]:
    return [e for e in m.elements if all(m.table[x][e] == x for x in m.elements)]


def square(m: Magma) -> frozenset[int]:
    """The set S^2 of all products."""
    return frozenset(v for row in m.table for v in row)


@dataclass(frozen=True)
class StructureReport:
    order: int
    is_left_invertive: bool
    is_medial: bool
    is_paramedial: bool
    satisfies_law4: bool
    is_ag_star: bool
    satisfies_permutation_identity: bool
    is_commutative: bool
    is_associative: bool
    left_identities: tuple[int, ...]
    right_identities: tuple[int, ...]
    square: frozenset[int]

    @property
    def s_equals_s2(self) -> bool:
        return len(self.square) == self.order

    def to_dict(self, m: Optional[Magma] = None) -> dict:
        name = m.label if m is not None else str
        return {
            "order": self.order,
            "is_left_invertive": self.is_left_invertive,
            "is_medial": self.is_medial,
            "is_paramedial": self.is_paramedial,
            "satisfies_law4": self.satisfies_law4,
            "is_ag_star": self.is_ag_star,
            "satisfies_permutation_identity": self.satisfies_permutation_identity,
            "is_commutative": self.is_commutative,
            "is_associative": self.is_associative,
            "left_identities": [name(e) for e in self.left_identities],
            "right_identities": [name(e) for e in self.right_identities],
            "square": [name(e) for e in sorted(self.square)],
            "s_equals_s2": self.s_equals_s2,
        }


def probe(m: Magma) -> StructureReport:
    li = is_left_invertive(m)
    return StructureReport(
        order=m.order,
        is_left_invertive=li,
        is_medial=is_medial(m),
        is_paramedial=is_paramedial(m),
        satisfies_law4=satisfies_law4(m),
        is_ag_star=li and ag_star_failure(m) is None,
        satisfies_permutation_identity=satisfies_permutation_identity(m),
        is_commutative=is_commutative(m),
        is_associative=is_associative(m),
        left_identities=tuple(left_identities(m)),
        right_identities=tuple(right_identities(m)),
        square=square(m),
    )


# ---------------------------------------------------------------------------
# small named magmas used by tests, the harness and the CLI


def constant_magma(n: int, value: int = 0) -> Magma:
    return Magma(n, tuple((value,) * n for _ in range(n)))


def left_zero_magma(n: int) -> Magma:
    return Magma(n, tuple((i,) * n for i in range(n)))


def cyclic_group(n: int) -> Magma:
    return Magma(n, tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))


def relabel(m: Magma, perm: Sequence[int]) -> Magma:
    """Image of ``m`` under the bijection ``x -> perm[x]``."""
    n = m.order
    if sorted(perm) != list(range(n)):
        raise MagmaError("relabeling must be a permutation of the elements")
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows[perm[i]][perm[j]] = perm[m.table[i][j]]
    return Magma(n, tuple(tuple(r) for r in rows))


def all_tables(n: int) -> Iterable[Magma]:
    """Every magma of order ``n`` in odometer (lexicographic flattening) order."""
    for flat in itertools.product(range(n), repeat=n * n):
        yield Magma.from_flat(n, flat)
