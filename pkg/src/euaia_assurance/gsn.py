"""Goal Structuring Notation arguments: model, validation, DSL and exports.

An argument is a directed acyclic graph of goals, strategies, solutions,
contexts, justifications and counterclaims. SupportedBy edges carry the
claim decomposition (parent node first), InContextOf attaches contexts and
justifications, and Challenges lets a counterclaim dispute a claim.

Arguments are immutable values: ``add_node`` and ``add_edge`` return new
arguments and enforce the structural rules at insert time.
"""

from __future__ import annotations

import graphlib
import re
from dataclasses import dataclass, replace
from enum import Enum

from . import vocab
from .triples import Iri, Literal, Triple


class GsnError(ValueError):
    """Violation of the argument structure rules."""


class GsnParseError(GsnError):
    """DSL text that does not parse; carries the offending line."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = "" if line is None else f"line {line}" + ("" if column is None else f", column {column}")
        super().__init__(f"{where}: {message}" if where else message)


class GsnNodeKind(Enum):
    GOAL = "goal"
    STRATEGY = "strategy"
    SOLUTION = "solution"
    CONTEXT = "context"
    JUSTIFICATION = "justification"
    COUNTERCLAIM = "counterclaim"


# Node ids are the kind's prefix plus a positive integer, e.g. G1, Sn2, CC1.
ID_PREFIXES: dict[GsnNodeKind, str] = {
    GsnNodeKind.GOAL: "G",
    GsnNodeKind.STRATEGY: "S",
    GsnNodeKind.SOLUTION: "Sn",
    GsnNodeKind.CONTEXT: "C",
    GsnNodeKind.JUSTIFICATION: "J",
    GsnNodeKind.COUNTERCLAIM: "CC",
}

_KIND_ORDER = {kind: index for index, kind in enumerate(GsnNodeKind)}
_CLASS_IRIS: dict[GsnNodeKind, Iri] = {
    GsnNodeKind.GOAL: Iri("gsn", "Goal"),
    GsnNodeKind.STRATEGY: Iri("gsn", "Strategy"),
    GsnNodeKind.SOLUTION: Iri("gsn", "Solution"),
    GsnNodeKind.CONTEXT: Iri("gsn", "Context"),
    GsnNodeKind.JUSTIFICATION: Iri("gsn", "Justification"),
    GsnNodeKind.COUNTERCLAIM: Iri("gsn", "Counterclaim"),
}


class GsnRelation(Enum):
    SUPPORTED_BY = "supportedBy"
    IN_CONTEXT_OF = "inContextOf"
    CHALLENGES = "challenges"


_G = GsnNodeKind.GOAL
_S = GsnNodeKind.STRATEGY
_SN = GsnNodeKind.SOLUTION
_C = GsnNodeKind.CONTEXT
_J = GsnNodeKind.JUSTIFICATION
_CC = GsnNodeKind.COUNTERCLAIM

# Which (source kind, target kind) pairs each relation may connect.
LEGAL_EDGES: dict[GsnRelation, frozenset[tuple[GsnNodeKind, GsnNodeKind]]] = {
    GsnRelation.SUPPORTED_BY: frozenset({(_G, _G), (_G, _S), (_S, _G), (_G, _SN)}),
    GsnRelation.IN_CONTEXT_OF: frozenset({(_G, _C), (_G, _J), (_S, _C), (_S, _J)}),
    GsnRelation.CHALLENGES: frozenset({(_CC, _G), (_CC, _S), (_CC, _SN)}),
}


@dataclass(frozen=True)
class GsnNode:
    id: str
    kind: GsnNodeKind
    statement: str
    undeveloped: bool = False

    def __post_init__(self) -> None:
        prefix = ID_PREFIXES[self.kind]
        suffix = self.id[len(prefix):]
        if not self.id.startswith(prefix) or not re.match(r"^[1-9][0-9]*$", suffix):
            raise GsnError(
                f"node id {self.id!r} must be {prefix!r} followed by a positive integer"
            )
        if not self.statement:
            raise GsnError(f"node {self.id}: statement must be non-empty")
        if self.undeveloped and self.kind is not GsnNodeKind.GOAL:
            raise GsnError(f"node {self.id}: only goals can be marked undeveloped")

    @property
    def sort_key(self) -> tuple[int, int]:
        return (_KIND_ORDER[self.kind], int(self.id[len(ID_PREFIXES[self.kind]):]))


@dataclass(frozen=True)
class GsnEdge:
    source: str
    target: str
    relation: GsnRelation


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    subject: str
    message: str


def _node_key(node: GsnNode) -> tuple[int, int]:
    return node.sort_key


def _edge_key(edge: GsnEdge) -> str:
    return f"edge {edge.source} -> {edge.target} {edge.relation.value}"


@dataclass(frozen=True)
class GsnArgument:
    """An immutable argument graph with canonical node and edge order."""

    nodes: tuple[GsnNode, ...] = ()
    edges: tuple[GsnEdge, ...] = ()
    duty_link: str | None = None

    def node(self, node_id: str) -> GsnNode:
        for node in self.nodes:
            if node.id == node_id:
                return node
        raise KeyError(f"no node {node_id!r}")

    def has_node(self, node_id: str) -> bool:
        return any(node.id == node_id for node in self.nodes)

    def add_node(self, node: GsnNode) -> "GsnArgument":
        if self.has_node(node.id):
            raise GsnError(f"duplicate node id {node.id!r}")
        return replace(self, nodes=tuple(sorted(self.nodes + (node,), key=_node_key)))

    def add_edge(self, edge: GsnEdge) -> "GsnArgument":
        """Insert an edge, enforcing endpoint existence, legality and acyclicity."""
        if edge in self.edges:
            return self
        for endpoint in (edge.source, edge.target):
            if not self.has_node(endpoint):
                raise GsnError(f"edge endpoint {endpoint!r} is not a declared node")
        pair = (self.node(edge.source).kind, self.node(edge.target).kind)
        if pair not in LEGAL_EDGES[edge.relation]:
            raise GsnError(
                f"{edge.relation.value} may not connect {pair[0].value} to {pair[1].value}"
            )
        if edge.relation is GsnRelation.SUPPORTED_BY and self._would_cycle(edge):
            raise GsnError(f"edge {edge.source} -> {edge.target} would create a supportedBy cycle")
        return replace(self, edges=tuple(sorted(self.edges + (edge,), key=_edge_key)))

    def _would_cycle(self, edge: GsnEdge) -> bool:
        children: dict[str, list[str]] = {}
        for existing in self.edges:
            if existing.relation is GsnRelation.SUPPORTED_BY:
                children.setdefault(existing.source, []).append(existing.target)
        stack, seen = [edge.target], set()
        while stack:
            current = stack.pop()
            if current == edge.source:
                return True
            if current in seen:
                continue
            seen.add(current)
            stack.extend(children.get(current, ()))
        return False

    def with_duty_link(self, duty_iri: str) -> "GsnArgument":
        return replace(self, duty_link=duty_iri)

    def supported_children(self, node_id: str) -> list[str]:
        return [e.target for e in self.edges if e.source == node_id and e.relation is GsnRelation.SUPPORTED_BY]

    def root_goals(self) -> list[GsnNode]:
        """Goals with no incoming supportedBy edge, in canonical order."""
        supported = {
            e.target for e in self.edges if e.relation is GsnRelation.SUPPORTED_BY
        }
        return [n for n in self.nodes if n.kind is GsnNodeKind.GOAL and n.id not in supported]


# ----------------------------------------------------------------------
# validation

def validate(argument: GsnArgument) -> list[Diagnostic]:
    """Structural diagnostics; empty iff well-formed and fully developed.

    Errors cover supportedBy cycles, edges that break the legality matrix
    or reference missing nodes, strategies with no supporting goal, and a
    non-empty argument without a root goal. Warnings cover goals with no
    support that are not marked undeveloped, and counterclaims that
    challenge nothing.
    """
    errors: list[Diagnostic] = []
    warnings: list[Diagnostic] = []
    ids = {node.id: node for node in argument.nodes}

    for edge in argument.edges:
        missing = [p for p in (edge.source, edge.target) if p not in ids]
        if missing:
            errors.append(
                Diagnostic(Severity.ERROR, _edge_key(edge), f"undeclared endpoint {missing[0]!r}")
            )
            continue
        pair = (ids[edge.source].kind, ids[edge.target].kind)
        if pair not in LEGAL_EDGES[edge.relation]:
            errors.append(
                Diagnostic(
                    Severity.ERROR,
                    _edge_key(edge),
                    f"{edge.relation.value} may not connect {pair[0].value} to {pair[1].value}",
                )
            )

    graph: dict[str, set[str]] = {node.id: set() for node in argument.nodes}
    for edge in argument.edges:
        if edge.relation is GsnRelation.SUPPORTED_BY and edge.source in ids and edge.target in ids:
            graph[edge.source].add(edge.target)
    try:
        graphlib.TopologicalSorter(graph).prepare()
    except graphlib.CycleError as exc:
        cycle = " -> ".join(exc.args[1])
        errors.append(Diagnostic(Severity.ERROR, exc.args[1][0], f"supportedBy cycle: {cycle}"))

    has_cycle_error = any("cycle" in d.message for d in errors)
    if argument.nodes and not has_cycle_error and not argument.root_goals():
        errors.append(
            Diagnostic(Severity.ERROR, "argument", "non-empty argument has no root goal")
        )

    for node in argument.nodes:
        children = argument.supported_children(node.id)
        if node.kind is GsnNodeKind.STRATEGY:
            goal_children = [c for c in children if c in ids and ids[c].kind is GsnNodeKind.GOAL]
            if not goal_children:
                errors.append(
                    Diagnostic(Severity.ERROR, node.id, "strategy has no supporting goal")
                )
        elif node.kind is GsnNodeKind.GOAL:
            if not children and not node.undeveloped:
                warnings.append(
                    Diagnostic(
                        Severity.WARNING, node.id, "goal has no support and is not marked undeveloped"
                    )
                )
        elif node.kind is GsnNodeKind.COUNTERCLAIM:
            challenges = [
                e for e in argument.edges
                if e.source == node.id and e.relation is GsnRelation.CHALLENGES
            ]
            if not challenges:
                warnings.append(
                    Diagnostic(Severity.WARNING, node.id, "counterclaim challenges nothing")
                )

    errors.sort(key=lambda d: (d.subject, d.message))
    warnings.sort(key=lambda d: (d.subject, d.message))
    return errors + warnings


def _require_valid(argument: GsnArgument) -> None:
    problems = [d for d in validate(argument) if d.severity is Severity.ERROR]
    if problems:
        first = problems[0]
        raise GsnError(f"argument has {len(problems)} error(s); first: {first.subject}: {first.message}")


# ----------------------------------------------------------------------
# textual DSL

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n"}
_KEYWORDS = {kind.value: kind for kind in GsnNodeKind}
_RELATIONS = {rel.value: rel for rel in GsnRelation}


def _escape_statement(text: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in text)


def _strip_comment(line: str) -> str:
    in_quote = False
    i = 0
    while i < len(line):
        c = line[i]
        if c == "\\" and in_quote:
            i += 2
            continue
        if c == '"':
            in_quote = not in_quote
        elif c == "#" and not in_quote:
            return line[:i]
        i += 1
    return line


def _scan_statement_text(line: str, start: int, lineno: int) -> tuple[str, int]:
    if start >= len(line) or line[start] != '"':
        raise GsnParseError("expected quoted statement", lineno, start + 1)
    out: list[str] = []
    i = start + 1
    while i < len(line):
        c = line[i]
        if c == '"':
            return "".join(out), i + 1
        if c == "\\":
            if i + 1 >= len(line):
                raise GsnParseError("dangling escape in statement", lineno, i + 1)
            nxt = line[i + 1]
            if nxt == '"':
                out.append('"')
            elif nxt == "\\":
                out.append("\\")
            elif nxt == "n":
                out.append("\n")
            else:
                raise GsnParseError(f"unknown escape \\{nxt}", lineno, i + 1)
            i += 2
        else:
            out.append(c)
            i += 1
    raise GsnParseError("unterminated statement", lineno, start + 1)


def parse_gsn(text: str) -> GsnArgument:
    """Parse the DSL: node lines, ``edge A -> B relation`` lines, one optional
    ``duty <iri>`` line, ``#`` comments. Nodes may be declared in any order
    relative to the edges that use them.
    """
    node_lines: list[tuple[int, GsnNode]] = []
    edge_lines: list[tuple[int, GsnEdge]] = []
    duty_line: tuple[int, str] | None = None

    for lineno, raw in enumerate(text.split("\n"), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        keyword = line.split(None, 1)[0]
        if keyword in _KEYWORDS:
            rest = line[len(keyword):].lstrip()
            match = re.match(r"^(\S+)\s+", rest)
            if not match:
                raise GsnParseError("expected node id and statement", lineno)
            node_id = match.group(1)
            statement, end = _scan_statement_text(rest, match.end(), lineno)
            tail = rest[end:].strip()
            undeveloped = False
            if tail == "undeveloped":
                undeveloped = True
            elif tail:
                raise GsnParseError(f"unexpected trailing text {tail!r}", lineno)
            try:
                node_lines.append(
                    (lineno, GsnNode(node_id, _KEYWORDS[keyword], statement, undeveloped))
                )
            except GsnError as exc:
                raise GsnParseError(str(exc), lineno) from None
        elif keyword == "edge":
            match = re.match(r"^edge\s+(\S+)\s+->\s+(\S+)\s+(\S+)$", line)
            if not match:
                raise GsnParseError("expected 'edge <ID> -> <ID> <relation>'", lineno)
            relation = _RELATIONS.get(match.group(3))
            if relation is None:
                raise GsnParseError(f"unknown relation {match.group(3)!r}", lineno)
            edge_lines.append((lineno, GsnEdge(match.group(1), match.group(2), relation)))
        elif keyword == "duty":
            match = re.match(r"^duty\s+(\S+)$", line)
            if not match:
                raise GsnParseError("expected 'duty <iri>'", lineno)
            if duty_line is not None:
                raise GsnParseError("duplicate duty line", lineno)
            duty_line = (lineno, match.group(1))
        else:
            raise GsnParseError(f"unknown keyword {keyword!r}", lineno)

    argument = GsnArgument()
    for lineno, node in node_lines:
        try:
            argument = argument.add_node(node)
        except GsnError as exc:
            raise GsnParseError(str(exc), lineno) from None
    for lineno, edge in edge_lines:
        try:
            argument = argument.add_edge(edge)
        except GsnError as exc:
            raise GsnParseError(str(exc), lineno) from None
    if duty_line is not None:
        try:
            Iri.parse(duty_line[1])
        except ValueError as exc:
            raise GsnParseError(str(exc), duty_line[0]) from None
        argument = argument.with_duty_link(duty_line[1])
    return argument


def serialize_gsn(argument: GsnArgument) -> str:
    """Canonical DSL text: nodes by kind then id, edges lexicographic,
    duty line last. ``parse_gsn(serialize_gsn(a))`` reproduces ``a``.
    """
    _require_valid(argument)
    lines = []
    for node in argument.nodes:
        line = f'{node.kind.value} {node.id} "{_escape_statement(node.statement)}"'
        if node.undeveloped:
            line += " undeveloped"
        lines.append(line)
    lines.extend(sorted(_edge_key(edge) for edge in argument.edges))
    if argument.duty_link is not None:
        lines.append(f"duty {argument.duty_link}")
    return "\n".join(lines) + "\n" if lines else ""


# ----------------------------------------------------------------------
# exports

_DOT_SHAPES = {
    GsnNodeKind.GOAL: "box",
    GsnNodeKind.STRATEGY: "parallelogram",
    GsnNodeKind.SOLUTION: "ellipse",
    GsnNodeKind.CONTEXT: "note",
    GsnNodeKind.JUSTIFICATION: "hexagon",
    GsnNodeKind.COUNTERCLAIM: "octagon",
}
_DOT_STYLES = {
    GsnRelation.SUPPORTED_BY: "solid",
    GsnRelation.IN_CONTEXT_OF: "dashed",
    GsnRelation.CHALLENGES: "dotted",
}


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def render_dot(argument: GsnArgument) -> str:
    """DOT digraph with one shape per node kind and one style per relation."""
    _require_valid(argument)
    lines = ["digraph gsn {", "  rankdir=TB;"]
    for node in argument.nodes:
        label = f"{node.id}\n{node.statement}"
        if node.undeveloped:
            label += "\n(undeveloped)"
        lines.append(
            f'  {node.id} [shape={_DOT_SHAPES[node.kind]}, label="{_dot_escape(label)}"];'
        )
    for edge in sorted(argument.edges, key=_edge_key):
        lines.append(f"  {edge.source} -> {edge.target} [style={_DOT_STYLES[edge.relation]}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def argument_to_triples(argument: GsnArgument) -> list[Triple]:
    """Triple view of the argument.

    Per node a type triple and a statement triple; per edge one relation
    triple (source first). When a duty link is set, one ``operationalizes``
    triple from the canonically first root goal. Total count is therefore
    ``2 * nodes + edges`` plus one for the duty link.
    """
    _require_valid(argument)
    triples: list[Triple] = []
    for node in argument.nodes:
        iri = vocab.gsn_node_iri(node.id)
        triples.append(Triple(iri, vocab.RDF_TYPE, _CLASS_IRIS[node.kind]))
        triples.append(Triple(iri, vocab.GSN_STATEMENT, Literal(node.statement)))
    relation_iris = {
        GsnRelation.SUPPORTED_BY: vocab.GSN_SUPPORTED_BY,
        GsnRelation.IN_CONTEXT_OF: vocab.GSN_IN_CONTEXT_OF,
        GsnRelation.CHALLENGES: vocab.GSN_CHALLENGES,
    }
    for edge in sorted(argument.edges, key=_edge_key):
        triples.append(
            Triple(
                vocab.gsn_node_iri(edge.source),
                relation_iris[edge.relation],
                vocab.gsn_node_iri(edge.target),
            )
        )
    if argument.duty_link is not None:
        roots = argument.root_goals()
        if not roots:
            raise GsnError("duty link requires a root goal")
        triples.append(
            Triple(vocab.gsn_node_iri(roots[0].id), vocab.OPERATIONALIZES, Iri.parse(argument.duty_link))
        )
    return triples
