"""Free-magma terms, the AG laws as rewrite rules, and derivation-chain replay.

Terms are written with ``*`` or juxtaposition, one binary product per pair of
parentheses: ``(ax)(ay)``, ``(x*(a*a))*y``.  ``t^2`` is sugar for ``(tt)``.
Symbols are a letter followed by optional digits.  Positions are paths of
0 (left) / 1 (right) from the root, written ``0.1``; the root is ``ε``.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Sequence, Union

from .magma import Magma


class TermError(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return format_term(self)


Term = Union[Var, App]
Position = tuple[int, ...]


def mul(a: Term, b: Term) -> App:
    return App(a, b)


def format_term(t: Term, sep: str = "") -> str:
    if isinstance(t, Var):
        return t.name

    def part(u: Term) -> str:
        return f"({format_term(u, sep)})" if isinstance(u, App) else u.name

    return f"{part(t.left)}{sep}{part(t.right)}"


_TOKEN = re.compile(r"\s*(?:([A-Za-z][0-9]*'*)|(\^2)|([()*]))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if mt is None or mt.end() == pos:
            raise TermError(f"unexpected character {text[pos:pos + 1]!r} at column {pos + 1} in {text!r}")
        tok = mt.group(1) or mt.group(2) or mt.group(3)
        tokens.append((tok, mt.start(mt.lastindex)))
        pos = mt.end()
    return tokens


def parse_term(text: str) -> Term:
    tokens = _tokenize(text)
    pos = 0

    def peek() -> Optional[str]:
        return tokens[pos][0] if pos < len(tokens) else None

    def fail(msg: str) -> TermError:
        col = tokens[pos][1] + 1 if pos < len(tokens) else len(text) + 1
        return TermError(f"{msg} at column {col} in {text!r}")

    def operand() -> Term:
        nonlocal pos
        tok = peek()
        if tok is None:
            raise fail("unexpected end of term")
        if tok == "(":
            pos += 1
            inner = term()
            if peek() != ")":
                raise fail("expected ')'")
            pos += 1
            node = inner
        elif tok[0].isalpha():
            pos += 1
            node = Var(tok)
        else:
            raise fail(f"unexpected {tok!r}")
        if peek() == "^2":
            pos += 1
            node = App(node, node)
        return node

    def term() -> Term:
        nonlocal pos
        left = operand()
        tok = peek()
        if tok == "*":
            pos += 1
            return App(left, operand())
        if tok is not None and tok not in (")",):
            right = operand()
            node = App(left, right)
            nxt = peek()
            if nxt is not None and nxt != ")":
                raise fail("a product of three factors needs parentheses")
            return node
        return left

    result = term()
    if pos != len(tokens):
        raise fail("a product of three factors needs parentheses" if peek() != ")" else "unbalanced ')'")
    return result


def symbols(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    return symbols(t.left) | symbols(t.right)


def size(t: Term) -> int:
    return 1 if isinstance(t, Var) else 1 + size(t.left) + size(t.right)


def parse_position(text: str) -> Position:
    text = text.strip()
    if text in ("ε", "root", ""):
        return ()
    try:
        path = tuple(int(p) for p in text.split("."))
    except ValueError:
        raise TermError(f"bad position {text!r}") from None
    if any(p not in (0, 1) for p in path):
        raise TermError(f"bad position {text!r}: steps must be 0 or 1")
    return path


def format_position(pos: Position) -> str:
    return ".".join(map(str, pos)) if pos else "ε"


def subterm(t: Term, pos: Position) -> Term:
    for step in pos:
        if not isinstance(t, App):
            raise TermError(f"position {format_position(pos)} does not address a node")
        t = t.right if step else t.left
    return t


def replace_at(t: Term, pos: Position, new: Term) -> Term:
    if not pos:
        return new
    if not isinstance(t, App):
        raise TermError(f"position {format_position(pos)} does not address a node")
    if pos[0] == 0:
        return App(replace_at(t.left, pos[1:], new), t.right)
    return App(t.left, replace_at(t.right, pos[1:], new))


def positions(t: Term, prefix: Position = ()) -> Iterator[Position]:
    """All node positions, pre-order, left before right."""
    yield prefix
    if isinstance(t, App):
        yield from positions(t.left, prefix + (0,))
        yield from positions(t.right, prefix + (1,))


def substitute(pattern: Term, sigma: Mapping[str, Term]) -> Term:
    if isinstance(pattern, Var):
        return sigma.get(pattern.name, pattern)
    return App(substitute(pattern.left, sigma), substitute(pattern.right, sigma))


def match_pattern(pattern: Term, subject: Term, sigma: Optional[dict] = None) -> Optional[dict[str, Term]]:
    """First-order matching: every variable of ``pattern`` is a pattern variable."""
    sigma = {} if sigma is None else sigma
    if isinstance(pattern, Var):
        bound = sigma.get(pattern.name)
        if bound is None:
            sigma[pattern.name] = subject
            return sigma
        return sigma if bound == subject else None
    if not isinstance(subject, App):
        return None
    if match_pattern(pattern.left, subject.left, sigma) is None:
        return None
    return match_pattern(pattern.right, subject.right, sigma)


# ---------------------------------------------------------------------------
# laws and named equations


@dataclass(frozen=True)
class Law:
    name: str
    lhs: Term
    rhs: Term
    description: str = ""

    def __post_init__(self) -> None:
        if symbols(self.lhs) != symbols(self.rhs):
            raise TermError(f"law {self.name} is not variable-balanced")

    def __str__(self) -> str:
        return f"{self.name}: {self.lhs} = {self.rhs}"


def _law(name: str, text: str, description: str) -> Law:
    lhs, rhs = text.split("=")
    return Law(name, parse_term(lhs), parse_term(rhs), description)


LAWS: dict[str, Law] = {
    law.name: law
    for law in (
        _law("L1", "(AB)C = (CB)A", "left invertive"),
        _law("L2", "(AB)(CD) = (AC)(BD)", "medial"),
        _law("L3", "(AB)(CD) = (DC)(BA)", "paramedial"),
        _law("L4", "A(BC) = B(AC)", "holds with a left identity"),
        _law("LSTAR", "(AB)C = B(AC)", "AG* defining identity"),
    )
}


@dataclass(frozen=True)
class NamedEquation:
    """A chain-local hypothesis (``a = (x(aa))y``) or abbreviation (``t = xy``)."""

    name: str
    lhs: Term
    rhs: Term
    role: str = "hyp"  # "hyp" or "def"

    def __str__(self) -> str:
        return f"{self.role} {self.name}: {self.lhs} = {self.rhs}"


Source = Union[Law, NamedEquation]
FWD, BWD = "fwd", "bwd"


@dataclass(frozen=True)
class Justification:
    source: str
    position: Position
    direction: str
    substitution: tuple = ()  # sorted (variable, term) pairs; empty for named equations

    def __str__(self) -> str:
        return f"by {self.source} at {format_position(self.position)} {self.direction}"


def _oriented(source: Source, direction: str) -> tuple[Term, Term]:
    if direction == FWD:
        return source.lhs, source.rhs
    if direction == BWD:
        return source.rhs, source.lhs
    raise TermError(f"direction must be fwd or bwd, got {direction!r}")


def apply_at(term: Term, source: Source, pos: Position, direction: str = FWD) -> Optional[Term]:
    """Rewrite the subterm at ``pos`` with the oriented equation, or None if it does not match."""
    target = subterm(term, pos)
    lhs, rhs = _oriented(source, direction)
    if isinstance(source, Law):
        sigma = match_pattern(lhs, target)
        if sigma is None:
            return None
        return replace_at(term, pos, substitute(rhs, sigma))
    if target != lhs:
        return None
    return replace_at(term, pos, rhs)


def _justification(term: Term, source: Source, pos: Position, direction: str) -> Justification:
    subst: tuple = ()
    if isinstance(source, Law):
        lhs, _ = _oriented(source, direction)
        sigma = match_pattern(lhs, subterm(term, pos)) or {}
        subst = tuple(sorted((k, format_term(v)) for k, v in sigma.items()))
    return Justification(source.name, pos, direction, subst)


def rewrites(term: Term, sources: Sequence[Source]) -> Iterator[tuple[Justification, Term]]:
    """Every single application, ordered by source, then position (pre-order), then direction."""
    for source in sources:
        for pos in positions(term):
            for direction in (FWD, BWD):
                out = apply_at(term, source, pos, direction)
                if out is not None and out != term:
                    yield _justification(term, source, pos, direction), out


def justify_step(s: Term, t: Term, sources: Sequence[Source],
                 claimed: Optional[tuple[str, Position, str]] = None) -> Optional[Justification]:
    by_name = {src.name: src for src in sources}
    if claimed is not None:
        name, pos, direction = claimed
        src = by_name.get(name)
        if src is None:
            return None
        try:
            out = apply_at(s, src, pos, direction)
        except TermError:
            return None
        return _justification(s, src, pos, direction) if out == t else None
    for just, out in rewrites(s, sources):
        if out == t:
            return just
    return None


def check_justification(s: Term, t: Term, just: Justification, sources: Sequence[Source]) -> bool:
    """Independent re-application of a justification, including its recorded substitution."""
    src = {x.name: x for x in sources}.get(just.source)
    if src is None:
        return False
    lhs, rhs = _oriented(src, just.direction)
    try:
        target = subterm(s, just.position)
    except TermError:
        return False
    if isinstance(src, Law):
        sigma = {k: parse_term(v) for k, v in just.substitution}
        if substitute(lhs, sigma) != target:
            return False
        return replace_at(s, just.position, substitute(rhs, sigma)) == t
    return target == lhs and replace_at(s, just.position, rhs) == t


DEFAULT_DEPTH = 6
MAX_DEPTH = 10


def bounded_equiv(s: Term, t: Term, depth: int = DEFAULT_DEPTH, sources: Sequence[Source] = (),
                  max_nodes: int = 2_000_000, max_size: Optional[int] = None) -> bool:
    """Breadth-first search for ``t`` from ``s`` within ``depth`` single applications.

    ``max_size`` bounds intermediate term size (default: twice the larger endpoint),
    which keeps hypotheses that unfold a symbol from flooding the frontier.
    """
    if depth > MAX_DEPTH:
        raise TermError(f"depth {depth} exceeds the configured maximum {MAX_DEPTH}")
    if s == t:
        return True
    limit = max_size if max_size is not None else 2 * max(size(s), size(t))
    seen = {s}
    frontier = deque([(s, 0)])
    while frontier:
        term, d = frontier.popleft()
        if d == depth:
            continue
        for _, nxt in rewrites(term, sources):
            if nxt == t:
                return True
            if nxt in seen or size(nxt) > limit:
                continue
            seen.add(nxt)
            if len(seen) > max_nodes:
                raise TermError("bounded_equiv node budget exhausted")
            frontier.append((nxt, d + 1))
    return False


def interpret_term(term: Term, m: Magma, assignment: Mapping[str, int]) -> int:
    if isinstance(term, Var):
        try:
            return assignment[term.name]
        except KeyError:
            raise TermError(f"no value assigned to {term.name!r}") from None
    return m.table[interpret_term(term.left, m, assignment)][interpret_term(term.right, m, assignment)]


# ---------------------------------------------------------------------------
# derivation chains


@dataclass
class DerivationChain:
    name: str
    laws: list[str]
    equations: list[NamedEquation]
    terms: list[Term]
    claims: list[Optional[tuple[str, Position, str]]]
    alphabet: frozenset[str] = frozenset()
    notes: list[str] = field(default_factory=list)
    lines: list[int] = field(default_factory=list)

    def sources(self) -> list[Source]:
        return [LAWS[name] for name in self.laws] + list(self.equations)

    def hypotheses(self) -> list[NamedEquation]:
        return [e for e in self.equations if e.role == "hyp"]

    def definitions(self) -> list[NamedEquation]:
        return [e for e in self.equations if e.role == "def"]

    def free_symbols(self) -> list[str]:
        defined = {e.lhs.name for e in self.definitions()}
        return sorted(self.alphabet - defined)

    def validate(self) -> None:
        if len(self.terms) < 2:
            raise TermError(f"chain {self.name}: needs at least two terms")
        for name in self.laws:
            if name not in LAWS:
                raise TermError(f"chain {self.name}: unknown law {name!r}")
        for e in self.definitions():
            if not isinstance(e.lhs, Var):
                raise TermError(f"chain {self.name}: definition {e.name} must define a symbol")
        for k, t in enumerate(self.terms):
            unknown = symbols(t) - self.alphabet
            if unknown:
                line = self.lines[k] if k < len(self.lines) else None
                where = f" (line {line})" if line else ""
                raise TermError(f"chain {self.name}: unknown symbol(s) {sorted(unknown)} in step {k}{where}")
        for k in range(1, len(self.terms)):
            if self.terms[k] == self.terms[k - 1]:
                raise TermError(f"chain {self.name}: step {k} repeats the previous term")


_CLAIM = re.compile(r"^(?P<term>.*?)\s+by\s+(?P<src>\S+)\s+at\s+(?P<pos>\S+)\s+(?P<dir>fwd|bwd)\s*$")
_EQ = re.compile(r"^(?P<name>[^:\s]+)\s*:\s*(?P<lhs>[^=]+)=(?P<rhs>.+)$")


def parse_chains(text: str) -> list[DerivationChain]:
    """Parse the chain DSL; ``#`` starts a comment, ``note`` lines are kept verbatim."""
    chains: list[DerivationChain] = []
    cur: Optional[DerivationChain] = None
    declared: set[str] = set()

    def finish() -> None:
        if cur is not None:
            cur.alphabet = frozenset(declared)
            cur.validate()
            chains.append(cur)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if keyword == "chain":
                finish()
                if not rest:
                    raise TermError("chain needs a name")
                cur = DerivationChain(rest, [], [], [], [])
                declared = set()
                continue
            if cur is None:
                raise TermError(f"{keyword!r} outside of a chain block")
            if keyword == "laws":
                cur.laws = rest.split()
            elif keyword == "vars":
                declared |= set(rest.split())
            elif keyword == "note":
                cur.notes.append(rest)
            elif keyword in ("hyp", "def"):
                mt = _EQ.match(rest)
                if mt is None:
                    raise TermError(f"malformed {keyword}: expected '<name>: <term> = <term>'")
                eq = NamedEquation(mt["name"], parse_term(mt["lhs"]), parse_term(mt["rhs"]), keyword)
                if keyword == "def" and not isinstance(eq.lhs, Var):
                    raise TermError("a definition must define a single symbol")
                cur.equations.append(eq)
                declared |= symbols(eq.lhs) | symbols(eq.rhs)
            elif keyword == "step":
                mt = _CLAIM.match(rest)
                if mt:
                    term = parse_term(mt["term"])
                    claim = (mt["src"], parse_position(mt["pos"]), mt["dir"])
                else:
                    term = parse_term(rest)
                    claim = None
                if not cur.terms:
                    declared |= symbols(term)
                    claim = None
                cur.terms.append(term)
                cur.claims.append(claim)
                cur.lines.append(lineno)
            else:
                raise TermError(f"unknown keyword {keyword!r}")
        except TermError as exc:
            raise TermError(f"line {lineno}: {exc}") from None
    finish()
    return chains


def format_chain(chain: DerivationChain) -> str:
    out = [f"chain {chain.name}"]
    out += [f"note {n}" for n in chain.notes]
    out.append("laws " + " ".join(chain.laws))
    extra = chain.alphabet - set().union(*(symbols(e.lhs) | symbols(e.rhs) for e in chain.equations), symbols(chain.terms[0]))
    if extra:
        out.append("vars " + " ".join(sorted(extra)))
    for e in chain.equations:
        out.append(f"{e.role} {e.name}: {e.lhs} = {e.rhs}")
    for term, claim in zip(chain.terms, chain.claims):
        line = f"step {term}"
        if claim is not None:
            line += f" by {claim[0]} at {format_position(claim[1])} {claim[2]}"
        out.append(line)
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class StepResult:
    index: int  # step k justifies terms[k-1] -> terms[k]
    before: Term
    after: Term
    justification: Optional[Justification]
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.justification is not None


@dataclass(frozen=True)
class ReplayReport:
    chain: str
    steps: tuple[StepResult, ...]

    @property
    def passed(self) -> bool:
        return all(s.ok for s in self.steps)

    @property
    def gaps(self) -> list[StepResult]:
        return [s for s in self.steps if not s.ok]

    def to_dict(self) -> dict:
        return {
            "chain": self.chain,
            "passed": self.passed,
            "steps": [
                {
                    "step": s.index,
                    "from": format_term(s.before),
                    "to": format_term(s.after),
                    "justification": str(s.justification) if s.justification else None,
                    "gap": None if s.ok else s.message,
                }
                for s in self.steps
            ],
        }


def replay_chain(chain: DerivationChain) -> ReplayReport:
    chain.validate()
    sources = chain.sources()
    steps = []
    for k in range(1, len(chain.terms)):
        s, t = chain.terms[k - 1], chain.terms[k]
        claim = chain.claims[k]
        just = justify_step(s, t, sources, claim)
        msg = ""
        if just is None:
            if claim is not None:
                msg = f"claimed justification 'by {claim[0]} at {format_position(claim[1])} {claim[2]}' does not produce the next term"
            else:
                msg = "no single application of a declared law, hypothesis or definition"
        steps.append(StepResult(k, s, t, just, msg))
    return ReplayReport(chain.name, tuple(steps))


def resolve_definitions(chain: DerivationChain, m: Magma, assignment: Mapping[str, int]) -> Optional[dict[str, int]]:
    """Extend an assignment of free symbols with the values of the chain's definitions."""
    env = dict(assignment)
    pending = list(chain.definitions())
    while pending:
        progress = False
        for e in list(pending):
            if symbols(e.rhs) <= env.keys():
                env[e.lhs.name] = interpret_term(e.rhs, m, env)
                pending.remove(e)
                progress = True
        if not progress:
            return None
    return env
