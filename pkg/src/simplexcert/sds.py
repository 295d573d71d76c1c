"""Successive difference substitution: search over words of barycentric matrices.

Each node of the search tree is a cell Con(M) with M = root * G_{s1} ... G_{sm}.
The form is carried already expanded on the cell, and a child is obtained
from its parent by one more barycentric step. A node is a certified leaf when
its expansion has the sign pattern the goal asks for; a negative value at a
cell vertex or at the cell center ends the search with a witness.

Children are always generated in lexicographic permutation order and results
are gathered in that order, so certificates do not depend on worker count.
"""
from __future__ import annotations

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Sequence

from .expansion import IntForm, SignClass, barycentric_step, expand, meets, sign_classify
from .polyring import Form, StructureError, evaluate, parse_rational, serialize_form
from .simplexgeo import (
    SimplexMatrix,
    barycentric_child,
    center,
    format_word,
    is_on_simplex,
    parse_word,
    permutations,
    product_chain,
    vertex,
)


class Goal(str, Enum):
    STRICT = "ProveStrictPositive"
    NONNEGATIVE = "ProveNonnegative"
    DECIDE = "Decide"

    def __str__(self) -> str:
        return self.value


class Verdict(str, Enum):
    POSITIVE = "Positive"
    NONNEGATIVE = "Nonnegative"
    NEGATIVE = "NegativeWitness"
    UNDECIDED = "Undecided"

    def __str__(self) -> str:
        return self.value


GOAL_ALIASES = {
    "strict": Goal.STRICT, "positive": Goal.STRICT, "pos": Goal.STRICT,
    "nonneg": Goal.NONNEGATIVE, "nonnegative": Goal.NONNEGATIVE,
    "decide": Goal.DECIDE,
}


def parse_goal(text: str) -> Goal:
    try:
        return Goal(text)
    except ValueError:
        pass
    try:
        return GOAL_ALIASES[text.lower()]
    except KeyError:
        raise ValueError(f"unknown goal {text!r}") from None


def worker_cap() -> int:
    """Upper bound on worker processes, from ``SIMPLEXCERT_MAX_WORKERS`` or the CPU count."""
    env = os.environ.get("SIMPLEXCERT_MAX_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class SdsConfig:
    max_depth: int = 6
    goal: Goal = Goal.STRICT
    traversal: str = "breadth-first"
    max_nodes: int = 250_000
    workers: int = 1

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError("max_depth must be nonnegative")
        if isinstance(self.goal, str):
            self.goal = parse_goal(self.goal)
        if self.traversal in ("bfs", "breadth"):
            self.traversal = "breadth-first"
        elif self.traversal in ("dfs", "depth"):
            self.traversal = "depth-first"
        if self.traversal not in ("breadth-first", "depth-first"):
            raise ValueError(f"unknown traversal {self.traversal!r}")


@dataclass(frozen=True)
class Witness:
    word: tuple
    point: tuple
    value: Fraction
    kind: str  # "vertexK" or "center"


@dataclass
class Certificate:
    verdict: Verdict
    goal: Goal
    n: int
    d: int
    form_sha256: str
    depth_used: int
    max_depth: int
    leaves: list = field(default_factory=list)  # (word, SignClass)
    open: list = field(default_factory=list)  # words left unresolved
    witness: Witness | None = None
    zeros: list = field(default_factory=list)  # vertices where f vanishes
    root: SimplexMatrix | None = None
    nodes: int = 0
    note: str = ""

    def to_text(self) -> str:
        lines = [
            "# simplexcert certificate",
            f"verdict={self.verdict}",
            f"goal={self.goal}",
            f"depth_used={self.depth_used}",
            f"max_depth={self.max_depth}",
            f"n={self.n}",
            f"d={self.d}",
            f"form_sha256={self.form_sha256}",
            f"root={'identity' if self.root is None else self.root.to_inline()}",
            f"nodes={self.nodes}",
        ]
        if self.note:
            lines.append(f"note={self.note}")
        lines.append(f"leaves={len(self.leaves)}")
        for word, cls in self.leaves:
            lines.append(f"word={format_word(word)} class={cls}")
        for word in self.open:
            lines.append(f"open={format_word(word)}")
        if self.witness is not None:
            w = self.witness
            lines += [
                f"witness.word={format_word(w.word)}",
                f"witness.kind={w.kind}",
                f"witness.point={' '.join(_fmt(x) for x in w.point)}",
                f"witness.value={_fmt(w.value)}",
            ]
        for p in self.zeros:
            lines.append(f"zero={' '.join(_fmt(x) for x in p)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Certificate:
        fields: dict[str, str] = {}
        leaves_raw, open_raw, zeros_raw = [], [], []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("word="):
                parts = line.split()
                if len(parts) != 2 or not parts[1].startswith("class="):
                    raise StructureError(f"line {lineno}: malformed leaf line")
                leaves_raw.append((parts[0][5:], parts[1][6:]))
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise StructureError(f"line {lineno}: expected key=value")
            if key == "open":
                open_raw.append(value)
            elif key == "zero":
                zeros_raw.append(value)
            else:
                fields[key] = value
        try:
            n = int(fields["n"])
            root = None if fields.get("root", "identity") == "identity" else SimplexMatrix.from_inline(fields["root"])
            witness = None
            if "witness.word" in fields:
                witness = Witness(
                    parse_word(fields["witness.word"], n),
                    tuple(parse_rational(t) for t in fields["witness.point"].split()),
                    parse_rational(fields["witness.value"]),
                    fields["witness.kind"],
                )
            cert = cls(
                verdict=Verdict(fields["verdict"]),
                goal=Goal(fields["goal"]),
                n=n,
                d=int(fields["d"]),
                form_sha256=fields["form_sha256"],
                depth_used=int(fields["depth_used"]),
                max_depth=int(fields["max_depth"]),
                leaves=[(parse_word(w, n), SignClass(c)) for w, c in leaves_raw],
                open=[parse_word(w, n) for w in open_raw],
                witness=witness,
                zeros=[tuple(parse_rational(t) for t in z.split()) for z in zeros_raw],
                root=root,
                nodes=int(fields.get("nodes", 0)),
                note=fields.get("note", ""),
            )
        except (KeyError, ValueError) as exc:
            raise StructureError(f"malformed certificate: {exc}") from None
        if int(fields.get("leaves", len(cert.leaves))) != len(cert.leaves):
            raise StructureError("malformed certificate: leaf count does not match")
        return cert


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def form_digest(f: Form) -> str:
    return hashlib.sha256(serialize_form(f).encode()).hexdigest()


# search core


class Node:
    """Search node. The cell matrix is built only when something reads it."""

    __slots__ = ("word", "form", "_parent", "_matrix")

    def __init__(self, word: tuple, matrix: SimplexMatrix | None, form: IntForm, parent=None):
        self.word = word
        self.form = form
        self._matrix = matrix
        self._parent = parent

    @property
    def matrix(self) -> SimplexMatrix:
        if self._matrix is None:
            self._matrix = barycentric_child(self._parent.matrix, self.word[-1])
            self._parent = None
        return self._matrix

    # pickled nodes carry their own matrix rather than the ancestor chain
    def __getstate__(self):
        return self.word, self.form, self.matrix

    def __setstate__(self, state):
        self.word, self.form, self._matrix = state
        self._parent = None


@dataclass
class NodeResult:
    word: tuple
    cls: SignClass
    leaf: bool
    witness: Witness | None = None
    probe: object = None
    zeros: list = field(default_factory=list)
    children: list | None = None


@dataclass
class SearchOutcome:
    leaves: list
    open: list
    witness: Witness | None
    probe: object
    zeros: list
    depth_used: int
    nodes: int
    note: str = ""


class _Visitor:
    """Per-node work; picklable so it can run in worker processes."""

    def __init__(self, strict: bool, max_depth: int, probe: Callable | None = None):
        self.strict = strict
        self.max_depth = max_depth
        self.probe = probe

    def __call__(self, node: Node) -> NodeResult:
        g = node.form
        if self.probe is not None:
            hit = self.probe(node.word, node.matrix)
            if hit is not None:
                return NodeResult(node.word, g.sign_class(), False, probe=hit)
        cls = g.sign_class()
        if meets(cls, self.strict):
            return NodeResult(node.word, cls, True)
        result = NodeResult(node.word, cls, False)
        # vertex i of Con(M) is M e_i and f(M e_i) is the x_i^d coefficient of g
        for i in range(g.n):
            v = g.vertex_value(i)
            if v < 0:
                result.witness = Witness(node.word, vertex(node.matrix, i + 1), v, f"vertex{i + 1}")
                return result
            if v == 0:
                result.zeros.append(vertex(node.matrix, i + 1))
        c = g.ones_value() / Fraction(g.n) ** g.d
        if c < 0:
            result.witness = Witness(node.word, center(node.matrix), c, "center")
            return result
        if len(node.word) < self.max_depth:
            result.children = [
                Node(node.word + (s,), None, barycentric_step(g, s), parent=node)
                for s in permutations(g.n)
            ]
        return result


def _run(f: Form, config: SdsConfig, root: SimplexMatrix | None, probe=None) -> SearchOutcome:
    n = f.n
    m0 = root if root is not None else SimplexMatrix.identity(n)
    g0 = IntForm.from_form(f if root is None else expand(f, root))
    visitor = _Visitor(config.goal is Goal.STRICT, config.max_depth, probe)
    workers = max(1, min(config.workers, worker_cap()))
    leaves, open_words, zeros = [], [], set()
    nodes = 0
    depth_used = 0

    def absorb(res: NodeResult):
        nonlocal depth_used
        depth_used = max(depth_used, len(res.word))
        zeros.update(res.zeros)
        if res.leaf:
            leaves.append((res.word, res.cls))
        elif res.children is None and res.witness is None and res.probe is None:
            open_words.append(res.word)

    def finish(witness=None, probe_hit=None, note=""):
        return SearchOutcome(sorted(leaves), sorted(open_words), witness, probe_hit,
                             sorted(zeros), depth_used, nodes, note)

    if config.traversal == "depth-first":
        stack = [Node((), m0, g0)]
        while stack:
            node = stack.pop()
            res = visitor(node)
            nodes += 1
            absorb(res)
            if res.probe is not None:
                return finish(probe_hit=res.probe)
            if res.witness is not None:
                return finish(witness=res.witness)
            if res.children:
                if nodes + len(stack) + len(res.children) > config.max_nodes:
                    open_words.extend(c.word for c in res.children)
                    open_words.extend(s.word for s in stack)
                    return finish(note="node-cap")
                stack.extend(reversed(res.children))
        return finish()

    level = [Node((), m0, g0)]
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        while level:
            if pool is not None and len(level) > 1:
                chunk = max(1, len(level) // (workers * 4))
                results = list(pool.map(visitor, level, chunksize=chunk))
            else:
                results = [visitor(node) for node in level]
            nodes += len(results)
            nxt = []
            for res in results:
                absorb(res)
                if res.probe is not None:
                    return finish(probe_hit=res.probe)
                if res.witness is not None:
                    return finish(witness=res.witness)
                if res.children:
                    nxt.extend(res.children)
            if len(nxt) > config.max_nodes:
                open_words.extend(c.word for c in nxt)
                return finish(note="node-cap")
            level = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    return finish()


def sds_search(f: Form, config: SdsConfig | None = None, root: SimplexMatrix | None = None) -> Certificate:
    """Search for a sign certificate of ``f`` on Con(root) (default: the whole simplex)."""
    if f.is_zero():
        raise StructureError("cannot certify the zero form")
    config = config or SdsConfig()
    if root is not None and root.n != f.n:
        raise StructureError("root matrix dimension mismatch")
    out = _run(f, config, root)
    if out.witness is not None:
        verdict = Verdict.NEGATIVE
        depth = len(out.witness.word)
    elif out.open or not out.leaves:
        verdict = Verdict.UNDECIDED
        depth = out.depth_used
    else:
        all_pos = all(c is SignClass.ALL_POSITIVE for _, c in out.leaves)
        if config.goal is Goal.NONNEGATIVE:
            verdict = Verdict.NONNEGATIVE
        else:
            verdict = Verdict.POSITIVE if all_pos else Verdict.NONNEGATIVE
        depth = max(len(w) for w, _ in out.leaves)
    return Certificate(
        verdict=verdict,
        goal=config.goal,
        n=f.n,
        d=f.d,
        form_sha256=form_digest(f),
        depth_used=depth,
        max_depth=config.max_depth,
        leaves=out.leaves,
        open=out.open,
        witness=out.witness,
        zeros=out.zeros,
        root=root,
        nodes=out.nodes,
        note=out.note,
    )


# replay


def _frontier_complete(words: Sequence[tuple], n: int) -> bool:
    leafset = set(words)
    if len(leafset) != len(words):
        return False
    perms = permutations(n)
    depth = max((len(w) for w in words), default=0)

    def covered(prefix: tuple) -> bool:
        if prefix in leafset:
            return True
        if len(prefix) >= depth:
            return False
        return all(covered(prefix + (s,)) for s in perms)

    # no leaf may sit strictly below another
    for w in words:
        if any(w[:k] in leafset for k in range(len(w))):
            return False
    return covered(())


def cell_matrix(cert: Certificate, word: Sequence) -> SimplexMatrix:
    chain = product_chain(word, cert.n)
    return chain if cert.root is None else cert.root @ chain


def replay_certificate(f: Form, cert: Certificate | str) -> bool:
    """Re-derive every claim in ``cert`` from ``f`` using the general expansion route."""
    if isinstance(cert, str):
        cert = Certificate.from_text(cert)
    if f.n != cert.n or f.d != cert.d or form_digest(f) != cert.form_sha256:
        return False
    if cert.root is not None:
        try:
            cert.root.validate()
        except StructureError:
            return False
    for word, cls in cert.leaves:
        if sign_classify(expand(f, cell_matrix(cert, word))) is not cls:
            return False
    if cert.verdict in (Verdict.POSITIVE, Verdict.NONNEGATIVE):
        if cert.witness is not None or cert.open or not cert.leaves:
            return False
        strict = cert.verdict is Verdict.POSITIVE
        if not all(meets(cls, strict) for _, cls in cert.leaves):
            return False
        if not _frontier_complete([w for w, _ in cert.leaves], cert.n):
            return False
    if cert.verdict is Verdict.NEGATIVE:
        w = cert.witness
        if w is None or len(w.point) != f.n or not is_on_simplex(w.point):
            return False
        if w.value >= 0 or evaluate(f, w.point) != w.value:
            return False
        m = cell_matrix(cert, w.word)
        expected = center(m) if w.kind == "center" else None
        if w.kind.startswith("vertex"):
            try:
                expected = vertex(m, int(w.kind[6:]))
            except (ValueError, StructureError):
                return False
        if expected is None or tuple(expected) != tuple(w.point):
            return False
    for p in cert.zeros:
        if len(p) != f.n or evaluate(f, p) != 0:
            return False
    return True
