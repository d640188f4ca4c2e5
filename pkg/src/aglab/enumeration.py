"""Enumerate magmas of a given order under AG / AG* / left-identity / class constraints.

Two independent routes produce the same tables: ``enumerate_naive`` filters
every table of order ``n <= 3`` through the predicates in :mod:`aglab.magma`,
and ``enumerate_backtracking`` runs the pruned search kernel.
"""
from __future__ import annotations

import heapq
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from . import _backend
from .classify import ClassKind, global_flags, holds_globally
from .magma import Magma, all_tables, is_ag_star, is_left_invertive, left_identities, relabel

NAIVE_MAX_ORDER = 3


class EnumerationError(ValueError):
    pass


@dataclass(frozen=True)
class EnumSpec:
    order: int
    ag: bool = False
    ag_star: bool = False
    left_identity: bool = False
    classes: tuple[ClassKind, ...] = ()
    up_to_iso: bool = False
    count_only: bool = False
    worker: int = 0
    workers: int = 1
    fill_order: str = "row"
    prune: bool = True

    def __post_init__(self) -> None:
        if self.order < 1:
            raise EnumerationError("order must be at least 1")
        if self.workers < 1 or not 0 <= self.worker < self.workers:
            raise EnumerationError("worker index must be in 0..workers-1")
        if self.fill_order not in ("row", "column"):
            raise EnumerationError(f"unknown fill order {self.fill_order!r}")
        object.__setattr__(self, "classes", tuple(self.classes))

    def describe(self) -> str:
        parts = [f"order {self.order}"]
        if self.ag_star:
            parts.append("AG*")
        elif self.ag:
            parts.append("AG")
        if self.left_identity:
            parts.append("left identity")
        parts += [k.value for k in self.classes]
        if self.up_to_iso:
            parts.append("up to iso")
        return ", ".join(parts)


class CanonicalForm(NamedTuple):
    order: int
    flat: tuple[int, ...]

    def to_magma(self) -> Magma:
        return Magma.from_flat(self.order, self.flat)

    def key(self) -> str:
        sep = "" if self.order <= 10 else ","
        return sep.join(map(str, self.flat))


def canonical_form(m: Magma) -> CanonicalForm:
    return CanonicalForm(m.order, tuple(_backend.kernels.canonical_form(m.flat, m.order)))


def canonical_form_bruteforce(m: Magma) -> CanonicalForm:
    """Reference implementation: relabel by every permutation and take the minimum."""
    best = min(relabel(m, p).flat for p in itertools.permutations(range(m.order)))
    return CanonicalForm(m.order, best)


def is_canonical(m: Magma) -> bool:
    return bool(_backend.kernels.is_canonical(m.flat, m.order))


def are_isomorphic(m1: Magma, m2: Magma) -> bool:
    if m1.order != m2.order:
        return False
    return canonical_form(m1) == canonical_form(m2)


def _passes_classes(m: Magma, classes: Sequence[ClassKind]) -> bool:
    return all(holds_globally(m, k) for k in classes)


def first_row_rank(flat: Sequence[int], n: int) -> int:
    rank = 0
    for v in flat[:n]:
        rank = rank * n + v
    return rank


def enumerate_naive(spec: EnumSpec) -> Iterator[Magma]:
    """Odometer over all ``n^(n*n)`` tables, filtered by the predicates; ``n <= 3`` only."""
    n = spec.order
    if n > NAIVE_MAX_ORDER:
        raise EnumerationError(f"naive enumeration is limited to order {NAIVE_MAX_ORDER}")
    for m in all_tables(n):
        if spec.workers > 1 and first_row_rank(m.flat, n) % spec.workers != spec.worker:
            continue
        if (spec.ag or spec.ag_star) and not is_left_invertive(m):
            continue
        if spec.ag_star and not is_ag_star(m):
            continue
        if spec.left_identity and not left_identities(m):
            continue
        if spec.up_to_iso and canonical_form_bruteforce(m).flat != m.flat:
            continue
        if not _passes_classes(m, spec.classes):
            continue
        yield m


def enumerate_backtracking(spec: EnumSpec) -> Iterator[Magma]:
    """Pruned backtracking search; emits the worker's partition when ``workers > 1``."""
    n = spec.order
    flats = _backend.kernels.search(
        n,
        ag=spec.ag or spec.ag_star,
        star=spec.ag_star,
        left_identity=spec.left_identity,
        up_to_iso=spec.up_to_iso,
        fill_order=spec.fill_order,
        worker=spec.worker,
        workers=spec.workers,
        prune=spec.prune,
    )
    for flat in flats:
        m = Magma.from_flat(n, flat)
        if spec.classes and not _passes_classes(m, spec.classes):
            continue
        yield m


def count(spec: EnumSpec) -> int:
    if spec.classes:
        return sum(1 for _ in enumerate_backtracking(spec))
    return _backend.kernels.count(
        spec.order,
        ag=spec.ag or spec.ag_star,
        star=spec.ag_star,
        left_identity=spec.left_identity,
        up_to_iso=spec.up_to_iso,
        fill_order=spec.fill_order,
        worker=spec.worker,
        workers=spec.workers,
        prune=spec.prune,
    )


def partitions(spec: EnumSpec, workers: int) -> list[EnumSpec]:
    return [replace(spec, worker=w, workers=workers) for w in range(workers)]


def _collect(spec: EnumSpec) -> list[tuple[int, ...]]:
    return [m.flat for m in enumerate_backtracking(spec)]


def enumerate_parallel(spec: EnumSpec, workers: int = 1) -> Iterator[Magma]:
    """Run the partitions in worker processes and merge them in lexicographic order."""
    if workers <= 1:
        yield from enumerate_backtracking(spec)
        return
    parts = partitions(spec, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_collect, parts))
    # row-major partitions are already sorted; column-major ones are not
    if spec.fill_order == "row":
        merged: Iterable = heapq.merge(*results)
    else:
        merged = sorted(itertools.chain(*results))
    for flat in merged:
        yield Magma.from_flat(spec.order, flat)


def count_parallel(spec: EnumSpec, workers: int = 1) -> int:
    if workers <= 1:
        return count(spec)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(count, partitions(spec, workers)))


def enumerate_magmas(spec: EnumSpec, workers: int = 1, naive: Optional[bool] = None) -> Iterator[Magma]:
    """Front door used by the harness and CLI."""
    if naive:
        return enumerate_naive(spec)
    return enumerate_parallel(spec, workers)


def count_by_class(n: int, ag: bool = False, ag_star: bool = False, left_identity: bool = False,
                   up_to_iso: bool = False, workers: int = 1) -> dict[ClassKind, int]:
    spec = EnumSpec(n, ag=ag, ag_star=ag_star, left_identity=left_identity, up_to_iso=up_to_iso)
    counts = {k: 0 for k in ClassKind}
    for m in enumerate_parallel(spec, workers):
        for kind, ok in global_flags(m).items():
            counts[kind] += ok
    return counts
