"""Executable versions of the regularity results, checked over enumerated universes.

Each property is a per-magma check returning violation records; a property run
maps that check over a :class:`Universe`, optionally split across worker
processes by enumeration partition.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Callable, Iterator, Optional, Sequence

from .classify import (
    EQUIVALENT_KINDS,
    ClassKind,
    characterization_witness,
    first_failing_element,
    global_flags,
    holds_globally,
    intra_regular_witness,
    witness,
)
from .enumeration import EnumSpec, canonical_form, enumerate_backtracking, enumerate_parallel
from .terms import DerivationChain, interpret_term, resolve_definitions
from .magma import (
    Magma,
    associativity_failure,
    commutativity_failure,
    is_ag_star,
    is_left_invertive,
    law4_failure,
    left_identities,
    magma_to_dict,
    medial_failure,
    paramedial_failure,
    parse_magma,
    probe,
    right_identities,
)


def example_fixture() -> Magma:
    text = resources.files("aglab").joinpath("data/example_table.txt").read_text()
    return parse_magma(text)


def mutated_fixture() -> Magma:
    """The fixture with c*e changed from d to c."""
    m = example_fixture()
    rows = [list(r) for r in m.table]
    c, d, e = m.index("c"), m.index("d"), m.index("e")
    assert rows[c][e] == d
    rows[c][e] = c
    return Magma(m.order, tuple(tuple(r) for r in rows), m.labels)


@dataclass(frozen=True)
class Universe:
    orders: tuple[int, ...]
    ag: bool = True
    ag_star: bool = False
    left_identity: bool = False
    up_to_iso: bool = False
    magmas_given: Optional[tuple[Magma, ...]] = None
    description: str = ""

    def __post_init__(self) -> None:
        if not self.orders and self.magmas_given is None:
            raise ValueError("a universe needs at least one order")

    @classmethod
    def ag_groupoids(cls, max_order: int, min_order: int = 1, **kw) -> "Universe":
        return cls(tuple(range(min_order, max_order + 1)), **kw)

    @classmethod
    def of(cls, magmas: Sequence[Magma], **kw) -> "Universe":
        kw.setdefault("ag", True)
        return cls((), magmas_given=tuple(magmas), **kw)

    def restrict(self, **kw) -> "Universe":
        return replace(self, **kw)

    def admits(self, m: Magma) -> bool:
        if (self.ag or self.ag_star) and not is_left_invertive(m):
            return False
        if self.ag_star and not is_ag_star(m):
            return False
        if self.left_identity and not left_identities(m):
            return False
        return True

    def specs(self) -> list[EnumSpec]:
        return [
            EnumSpec(n, ag=self.ag, ag_star=self.ag_star, left_identity=self.left_identity,
                     up_to_iso=self.up_to_iso)
            for n in self.orders
        ]

    def magmas(self, workers: int = 1) -> Iterator[Magma]:
        if self.magmas_given is not None:
            yield from (m for m in self.magmas_given if self.admits(m))
            return
        for spec in self.specs():
            yield from enumerate_parallel(spec, workers)

    def describe(self) -> str:
        if self.description:
            return self.description
        kind = "AG*-groupoids" if self.ag_star else "AG-groupoids" if self.ag else "magmas"
        parts = [kind]
        if self.left_identity:
            parts.append("with left identity")
        if self.magmas_given is not None:
            parts.append(f"({len(self.magmas_given)} given)")
        else:
            lo, hi = min(self.orders), max(self.orders)
            parts.append(f"of order {lo}" if lo == hi else f"of orders {lo}-{hi}")
        if self.up_to_iso:
            parts.append("up to isomorphism")
        return " ".join(parts)


@dataclass(frozen=True)
class Violation:
    magma: Magma
    element: Optional[int]
    detail: str

    def to_dict(self) -> dict:
        return {"magma": magma_to_dict(self.magma), "element": self.element, "detail": self.detail}


@dataclass
class PropertyResult:
    property_id: str
    universe: str
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)
    elapsed: float = 0.0
    exploratory: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "property": self.property_id,
            "universe": self.universe,
            "checked": self.checked,
            "passed": self.passed,
            "exploratory": self.exploratory,
            "violation_count": len(self.violations),
            "violations": [v.to_dict() for v in self.violations],
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# per-magma checks; each returns a list of violations (empty means the magma is fine)

Check = Callable[[Magma], list]


def _s_square(m: Magma) -> list[Violation]:
    if probe_square_full(m):
        return []
    member = [k.value for k in ClassKind if holds_globally(m, k)]
    if not member:
        return []
    missing = sorted(set(m.elements) - {v for row in m.table for v in row})
    return [Violation(m, missing[0], f"globally {', '.join(member)} but S^2 misses {missing}")]


def probe_square_full(m: Magma) -> bool:
    return len({v for row in m.table for v in row}) == m.order


def _intra_characterization(m: Magma) -> list[Violation]:
    intra = holds_globally(m, ClassKind.INTRA_REGULAR)
    char_missing = [a for a in m.elements if characterization_witness(m, a) is None]
    if intra and char_missing:
        return [Violation(m, char_missing[0], "intra-regular but no (x,z) with a=(xa)(az)")]
    if not intra and not char_missing:
        bad = next(a for a in m.elements if intra_regular_witness(m, a) is None)
        return [Violation(m, bad, "a=(xa)(az) solvable everywhere but not intra-regular")]
    return []


def _equivalences(m: Magma) -> list[Violation]:
    flags = {k: holds_globally(m, k) for k in EQUIVALENT_KINDS}
    if len(set(flags.values())) <= 1:
        return []
    on = [k.value for k, v in flags.items() if v]
    off = [k for k, v in flags.items() if not v]
    elem = first_failing_element(m, off[0])
    return [Violation(m, elem, f"holds: {', '.join(on)}; fails: {', '.join(k.value for k in off)}")]


def _implies_regular(kinds: Sequence[ClassKind]) -> Check:
    def check(m: Magma) -> list[Violation]:
        if holds_globally(m, ClassKind.REGULAR):
            return []
        held = [k.value for k in kinds if holds_globally(m, k)]
        if not held:
            return []
        elem = first_failing_element(m, ClassKind.REGULAR)
        return [Violation(m, elem, f"globally {', '.join(held)} but not regular")]
    return check


_weak_implies_regular = _implies_regular([ClassKind.WEAKLY_REGULAR])
_classes_imply_regular = _implies_regular(EQUIVALENT_KINDS)


def _weak_iff_right(m: Magma) -> list[Violation]:
    w = holds_globally(m, ClassKind.WEAKLY_REGULAR)
    r = holds_globally(m, ClassKind.RIGHT_REGULAR)
    if w == r:
        return []
    kind = ClassKind.RIGHT_REGULAR if w else ClassKind.WEAKLY_REGULAR
    return [Violation(m, first_failing_element(m, kind),
                      "weakly regular but not right regular" if w else "right regular but not weakly regular")]


def _ag_star_collapse(m: Magma) -> list[Violation]:
    out = []
    full = probe_square_full(m)
    member = [k.value for k in ClassKind if holds_globally(m, k)]
    if not (full or member):
        return out
    cf = commutativity_failure(m)
    af = associativity_failure(m)
    if cf is None and af is None:
        return out
    why = "S=S^2" if full else f"globally {', '.join(member)}"
    if cf is not None:
        out.append(Violation(m, cf[0], f"{why} but not commutative at {cf}"))
    if af is not None:
        out.append(Violation(m, af[0], f"{why} but not associative at {af}"))
    return out


def _identity_consequences(m: Magma) -> list[Violation]:
    out = []
    mf = medial_failure(m)
    if mf is not None:
        out.append(Violation(m, mf[0], f"not medial at {mf}"))
    lids = left_identities(m)
    if len(lids) > 1:
        out.append(Violation(m, lids[1], f"several left identities {lids}"))
    if lids:
        pf = paramedial_failure(m)
        if pf is not None:
            out.append(Violation(m, pf[0], f"left identity but not paramedial at {pf}"))
        lf = law4_failure(m)
        if lf is not None:
            out.append(Violation(m, lf[0], f"left identity but a(bc)=b(ac) fails at {lf}"))
    if right_identities(m):
        cf, af = commutativity_failure(m), associativity_failure(m)
        if cf is not None or af is not None:
            out.append(Violation(m, right_identities(m)[0], "right identity but not a commutative semigroup"))
    return out


CHECKS: dict[str, Check] = {
    "s_square": _s_square,
    "intra_characterization": _intra_characterization,
    "equivalences": _equivalences,
    "weak_implies_regular": _weak_implies_regular,
    "classes_imply_regular": _classes_imply_regular,
    "weak_iff_right_regular": _weak_iff_right,
    "ag_star_collapse": _ag_star_collapse,
    "identity_consequences": _identity_consequences,
}


def revalidate(property_id: str, v: Violation) -> bool:
    """True if re-running the property's check on the stored magma reproduces a failure."""
    return bool(CHECKS[property_id.split(":")[0]](v.magma))


def _run_partition(args: tuple[str, EnumSpec]) -> tuple[int, list[Violation]]:
    prop, spec = args
    check = CHECKS[prop]
    checked = 0
    violations: list[Violation] = []
    for m in enumerate_backtracking(spec):
        checked += 1
        violations.extend(check(m))
    return checked, violations


def run_property(property_id: str, u: Universe, workers: int = 1, exploratory: bool = False,
                 max_violations: int = 50) -> PropertyResult:
    start = time.perf_counter()
    label = f"{property_id}:exploratory" if exploratory else property_id
    result = PropertyResult(label, u.describe(), exploratory=exploratory)
    check = CHECKS[property_id]
    if u.magmas_given is not None or workers <= 1:
        for m in u.magmas(workers):
            result.checked += 1
            result.violations.extend(check(m))
    else:
        jobs = [(property_id, replace(spec, worker=w, workers=workers))
                for spec in u.specs() for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for checked, violations in pool.map(_run_partition, jobs):
                result.checked += checked
                result.violations.extend(violations)
        result.violations.sort(key=lambda v: (v.magma.order, v.magma.flat, v.detail))
    if len(result.violations) > max_violations:
        result.notes.append(f"{len(result.violations)} violations; first {max_violations} kept")
        result.violations = result.violations[:max_violations]
    result.elapsed = time.perf_counter() - start
    return result


# ---------------------------------------------------------------------------
# named properties


def check_s_square(u: Universe, workers: int = 1) -> PropertyResult:
    return run_property("s_square", u, workers)


def check_intra_characterization(u: Universe, workers: int = 1, require_left_identity: bool = True) -> PropertyResult:
    if require_left_identity:
        return run_property("intra_characterization", u.restrict(left_identity=True), workers)
    return run_property("intra_characterization", u.restrict(left_identity=False), workers, exploratory=True)


def check_equivalences(u: Universe, workers: int = 1, require_left_identity: bool = True) -> PropertyResult:
    if require_left_identity:
        return run_property("equivalences", u.restrict(left_identity=True), workers)
    return run_property("equivalences", u.restrict(left_identity=False), workers, exploratory=True)


def check_weak_implies_regular(u: Universe, workers: int = 1, require_left_identity: bool = True) -> PropertyResult:
    if require_left_identity:
        return run_property("weak_implies_regular", u.restrict(left_identity=True), workers)
    return run_property("weak_implies_regular", u.restrict(left_identity=False), workers, exploratory=True)


def check_classes_imply_regular(u: Universe, workers: int = 1, require_left_identity: bool = True) -> PropertyResult:
    if require_left_identity:
        return run_property("classes_imply_regular", u.restrict(left_identity=True), workers)
    return run_property("classes_imply_regular", u.restrict(left_identity=False), workers, exploratory=True)


def check_weak_iff_right_regular(u: Universe, workers: int = 1, require_left_identity: bool = False) -> PropertyResult:
    """Weakly regular iff right regular; stated for plain AG-groupoids, so exploratory without the filter."""
    if require_left_identity:
        return run_property("weak_iff_right_regular", u.restrict(left_identity=True), workers)
    return run_property("weak_iff_right_regular", u.restrict(left_identity=False), workers, exploratory=True)


def check_ag_star_collapse(u: Universe, workers: int = 1) -> PropertyResult:
    return run_property("ag_star_collapse", u.restrict(ag=True, ag_star=True), workers)


def check_identity_consequences(u: Universe, workers: int = 1) -> PropertyResult:
    return run_property("identity_consequences", u.restrict(ag=True), workers)


def _least_witness(max_order: int, pred: Callable[[Magma], bool], left_identity: bool = False,
                   min_order: int = 1) -> Optional[Magma]:
    """Least AG-groupoid under (order, canonical form) satisfying ``pred``."""
    for n in range(min_order, max_order + 1):
        spec = EnumSpec(n, ag=True, left_identity=left_identity, up_to_iso=True)
        for m in enumerate_backtracking(spec):  # canonical representatives, ascending
            if pred(m):
                return m
    return None


def check_s_square_converse(max_order: int, kind: Optional[ClassKind]) -> Optional[Magma]:
    """Least AG-groupoid with S = S^2 that is not globally in ``kind``."""
    if kind is None:
        raise ValueError("name the class whose converse is searched")
    return _least_witness(max_order, lambda m: probe_square_full(m) and not holds_globally(m, kind))


def check_regular_not_weak(max_order: int) -> Optional[Magma]:
    """Least AG-groupoid with left identity that is regular but not weakly regular, if any."""
    return _least_witness(
        max_order,
        lambda m: holds_globally(m, ClassKind.REGULAR) and not holds_globally(m, ClassKind.WEAKLY_REGULAR),
        left_identity=True,
    )


def verify_paper_fixture(m: Optional[Magma] = None) -> PropertyResult:
    """The example table: AG, left identity exactly e, S = S^2, d in no class, every class fails."""
    start = time.perf_counter()
    m = example_fixture() if m is None else m
    result = PropertyResult("example_fixture", f"bundled {m.order}-element table", checked=1)
    labels = m.labels or tuple("abcdef")
    e, d = labels.index("e"), labels.index("d")
    rep = probe(m)
    fail = result.violations.append
    if not rep.is_left_invertive:
        fail(Violation(m, None, "table is not left invertive"))
    if list(rep.left_identities) != [e]:
        fail(Violation(m, None, f"left identities are {list(rep.left_identities)}, expected [e]"))
    if not rep.s_equals_s2:
        fail(Violation(m, None, "S^2 != S"))
    for kind in ClassKind:
        w = witness(m, kind, d)
        if w is not None:
            fail(Violation(m, d, f"d has a {kind.value} witness {w}"))
    flags = global_flags(m)
    for kind, ok in flags.items():
        if ok:
            fail(Violation(m, None, f"table is globally {kind.value}"))
    result.elapsed = time.perf_counter() - start
    return result


def canonical_key(m: Magma) -> str:
    return canonical_form(m).key()


PASS_SUITE = (
    "example_fixture",
    "identity_consequences",
    "s_square",
    "intra_characterization",
    "equivalences",
    "weak_implies_regular",
    "classes_imply_regular",
    "ag_star_collapse",
)


def run_suite(max_order: int = 4, ag_star_max_order: Optional[int] = None, workers: int = 1,
              exploratory: bool = False, fixture: Optional[Magma] = None) -> list[PropertyResult]:
    """The pass/fail suite over AG / AG* universes, plus exploratory probes on request."""
    star_max = max_order if ag_star_max_order is None else ag_star_max_order
    ag = Universe.ag_groupoids(max_order)
    star = Universe.ag_groupoids(star_max, ag_star=True)
    results = [
        verify_paper_fixture(fixture),
        check_identity_consequences(ag, workers),
        check_s_square(ag, workers),
        check_intra_characterization(ag, workers),
        check_equivalences(ag, workers),
        check_weak_implies_regular(ag, workers),
        check_classes_imply_regular(ag, workers),
        check_ag_star_collapse(star, workers),
    ]
    if exploratory:
        results += [
            check_intra_characterization(ag, workers, require_left_identity=False),
            check_equivalences(ag, workers, require_left_identity=False),
            check_classes_imply_regular(ag, workers, require_left_identity=False),
            check_weak_iff_right_regular(ag, workers),
            _search_result("regular_not_weak", check_regular_not_weak(max_order), max_order),
        ]
        for kind in ClassKind:
            results.append(_search_result(f"s_square_converse[{kind.value}]",
                                          check_s_square_converse(max_order, kind), max_order))
    return results


def _search_result(prop: str, found: Optional[Magma], max_order: int) -> PropertyResult:
    """Counterexample searches report evidence only; a found witness is a note, not a violation."""
    r = PropertyResult(prop, f"AG-groupoids of orders 1-{max_order} up to isomorphism", exploratory=True)
    if found is None:
        r.notes.append("no witness found")
    else:
        r.notes.append(f"least witness: order {found.order}, table {canonical_key(found)}")
    return r


def chain_soundness(chain: DerivationChain, max_order: int = 3, universe: Optional[Universe] = None) -> PropertyResult:
    """Evaluate every term of ``chain`` in finite models where its hypotheses hold.

    Free symbols range over all assignments; defined symbols take the value of
    their definition.  All terms of the chain must then agree.  The default
    universe is AG-groupoids with left identity, where every declared law holds.
    """
    start = time.perf_counter()
    u = universe or Universe.ag_groupoids(max_order, left_identity=True)
    result = PropertyResult(f"chain_soundness[{chain.name}]", u.describe())
    free = chain.free_symbols()
    hyps = chain.hypotheses()
    satisfying = 0
    for m in u.magmas():
        result.checked += 1
        for values in itertools.product(m.elements, repeat=len(free)):
            env = resolve_definitions(chain, m, dict(zip(free, values)))
            if env is None:
                result.violations.append(Violation(m, None, "definitions are circular"))
                break
            if any(interpret_term(h.lhs, m, env) != interpret_term(h.rhs, m, env) for h in hyps):
                continue
            satisfying += 1
            vals = [interpret_term(t, m, env) for t in chain.terms]
            if len(set(vals)) > 1:
                k = next(i for i in range(1, len(vals)) if vals[i] != vals[i - 1])
                result.violations.append(
                    Violation(m, None, f"step {k} changes value under {dict(zip(free, values))}"))
                break
    result.notes.append(f"{satisfying} assignments satisfy the hypotheses")
    result.elapsed = time.perf_counter() - start
    return result
