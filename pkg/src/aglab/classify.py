"""Regularity classes of elements and of whole magmas, with explicit witnesses.

Every witness search scans its parameter tuples in lexicographic order, so the
returned witness is the least one. None of these require the magma to be AG.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional

from .magma import Magma


class ClassKind(enum.Enum):
    REGULAR = "regular"
    WEAKLY_REGULAR = "weakly_regular"
    INTRA_REGULAR = "intra_regular"
    RIGHT_REGULAR = "right_regular"
    LEFT_REGULAR = "left_regular"
    LEFT_QUASI_REGULAR = "left_quasi_regular"
    COMPLETELY_REGULAR = "completely_regular"

    @classmethod
    def parse(cls, name: str) -> "ClassKind":
        key = name.strip().lower().replace("-", "_")
        for kind in cls:
            if kind.value == key or kind.name.lower() == key:
                return kind
        raise ValueError(f"unknown class {name!r}")


# the six classes that coincide on AG-groupoids with left identity
EQUIVALENT_KINDS = (
    ClassKind.WEAKLY_REGULAR,
    ClassKind.INTRA_REGULAR,
    ClassKind.RIGHT_REGULAR,
    ClassKind.LEFT_REGULAR,
    ClassKind.LEFT_QUASI_REGULAR,
    ClassKind.COMPLETELY_REGULAR,
)


def regular_witness(m: Magma, a: int) -> Optional[int]:
    """Least x with (ax)a = a."""
    t = m.table
    for x in m.elements:
        if t[t[a][x]][a] == a:
            return x
    return None


def weakly_regular_witness(m: Magma, a: int) -> Optional[tuple[int, int]]:
    """Least (x, y) with (ax)(ay) = a."""
    t = m.table
    ra = t[a]
    for x, y in itertools.product(m.elements, repeat=2):
        if t[ra[x]][ra[y]] == a:
            return (x, y)
    return None


def intra_regular_witness(m: Magma, a: int) -> Optional[tuple[int, int]]:
    """Least (x, y) with (x(aa))y = a."""
    t = m.table
    aa = t[a][a]
    for x, y in itertools.product(m.elements, repeat=2):
        if t[t[x][aa]][y] == a:
            return (x, y)
    return None


def right_regular_witness(m: Magma, a: int) -> Optional[int]:
    """Least x with (aa)x = a."""
    row = m.table[m.table[a][a]]
    for x in m.elements:
        if row[x] == a:
            return x
    return None


def left_regular_witness(m: Magma, a: int) -> Optional[int]:
    """Least x with x(aa) = a."""
    t = m.table
    aa = t[a][a]
    for x in m.elements:
        if t[x][aa] == a:
            return x
    return None


def left_quasi_regular_witness(m: Magma, a: int) -> Optional[tuple[int, int]]:
    """Least (x, y) with (xa)(ya) = a."""
    t = m.table
    for x, y in itertools.product(m.elements, repeat=2):
        if t[t[x][a]][t[y][a]] == a:
            return (x, y)
    return None


def completely_regular_witness(m: Magma, a: int) -> Optional[tuple[int, int, int]]:
    """Regular, left regular and right regular witnesses, or None if any is missing."""
    r = regular_witness(m, a)
    if r is None:
        return None
    lr = left_regular_witness(m, a)
    if lr is None:
        return None
    rr = right_regular_witness(m, a)
    if rr is None:
        return None
    return (r, lr, rr)


def completely_regular(m: Magma, a: int) -> bool:
    return completely_regular_witness(m, a) is not None


def characterization_witness(m: Magma, a: int) -> Optional[tuple[int, int]]:
    """Least (x, z) with (xa)(az) = a, the alternate intra-regular form."""
    t = m.table
    for x, z in itertools.product(m.elements, repeat=2):
        if t[t[x][a]][t[a][z]] == a:
            return (x, z)
    return None


WITNESS_FUNCTIONS = {
    ClassKind.REGULAR: regular_witness,
    ClassKind.WEAKLY_REGULAR: weakly_regular_witness,
    ClassKind.INTRA_REGULAR: intra_regular_witness,
    ClassKind.RIGHT_REGULAR: right_regular_witness,
    ClassKind.LEFT_REGULAR: left_regular_witness,
    ClassKind.LEFT_QUASI_REGULAR: left_quasi_regular_witness,
    ClassKind.COMPLETELY_REGULAR: completely_regular_witness,
}


def witness(m: Magma, kind: ClassKind, a: int):
    return WITNESS_FUNCTIONS[kind](m, a)


def verify_witness(m: Magma, kind: ClassKind, a: int, params) -> bool:
    """Re-evaluate the defining equation of ``kind`` at ``a`` with ``params``."""
    op = m.table
    mul = lambda p, q: op[p][q]  # noqa: E731
    aa = mul(a, a)
    if kind is ClassKind.REGULAR:
        return mul(mul(a, params), a) == a
    if kind is ClassKind.WEAKLY_REGULAR:
        x, y = params
        return mul(mul(a, x), mul(a, y)) == a
    if kind is ClassKind.INTRA_REGULAR:
        x, y = params
        return mul(mul(x, aa), y) == a
    if kind is ClassKind.RIGHT_REGULAR:
        return mul(aa, params) == a
    if kind is ClassKind.LEFT_REGULAR:
        return mul(params, aa) == a
    if kind is ClassKind.LEFT_QUASI_REGULAR:
        x, y = params
        return mul(mul(x, a), mul(y, a)) == a
    r, lr, rr = params
    return (
        verify_witness(m, ClassKind.REGULAR, a, r)
        and verify_witness(m, ClassKind.LEFT_REGULAR, a, lr)
        and verify_witness(m, ClassKind.RIGHT_REGULAR, a, rr)
    )


def holds_globally(m: Magma, kind: ClassKind) -> bool:
    """Element-first scan; stops at the first element without a witness."""
    f = WITNESS_FUNCTIONS[kind]
    return all(f(m, a) is not None for a in m.elements)


def first_failing_element(m: Magma, kind: ClassKind) -> Optional[int]:
    f = WITNESS_FUNCTIONS[kind]
    for a in m.elements:
        if f(m, a) is None:
            return a
    return None


def global_flags(m: Magma) -> dict[ClassKind, bool]:
    return {kind: holds_globally(m, kind) for kind in ClassKind}


@dataclass(frozen=True)
class KindReport:
    kind: ClassKind
    witnesses: tuple  # per element: witness tuple or None

    @property
    def holds_globally(self) -> bool:
        return all(w is not None for w in self.witnesses)

    @property
    def first_failing_element(self) -> Optional[int]:
        for a, w in enumerate(self.witnesses):
            if w is None:
                return a
        return None


@dataclass(frozen=True)
class ClassReport:
    order: int
    kinds: dict

    def __getitem__(self, kind: ClassKind) -> KindReport:
        return self.kinds[kind]

    def flags(self) -> dict[ClassKind, bool]:
        return {k: r.holds_globally for k, r in self.kinds.items()}

    def to_dict(self, m: Optional[Magma] = None) -> dict:
        name = m.label if m is not None else str
        out = {}
        for kind, rep in self.kinds.items():
            wit = {}
            for a, w in enumerate(rep.witnesses):
                if w is None:
                    wit[name(a)] = None
                elif isinstance(w, tuple):
                    wit[name(a)] = [name(x) for x in w]
                else:
                    wit[name(a)] = [name(w)]
            ff = rep.first_failing_element
            out[kind.value] = {
                "global": rep.holds_globally,
                "witnesses": wit,
                "first_failing": None if ff is None else name(ff),
            }
        return out


def classify(m: Magma) -> ClassReport:
    """Per-element witnesses for all seven classes, least witness first."""
    kinds = {}
    for kind, f in WITNESS_FUNCTIONS.items():
        kinds[kind] = KindReport(kind, tuple(f(m, a) for a in m.elements))
    return ClassReport(m.order, kinds)
