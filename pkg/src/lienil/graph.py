"""Directed multigraphs and the Lie solvability classification of their Leavitt path algebras.

A :class:`Graph` is finite except for two per-vertex attributes:
``pendant_sinks=k`` stands for ``k`` extra edges from the vertex, each into its
own fresh sink, and ``pendant_loops=k`` for ``k`` extra edges each into its own
fresh vertex that carries a loop.  ``k`` may be :data:`OMEGA`, which is how
infinite emitters (the infinite clock, say) are written down.

Text format, one declaration per line, ``#`` starts a comment::

    vertex v [pendant_sinks=omega] [pendant_loops=2]
    edge e : u -> v
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable

import networkx as nx

__all__ = [
    "OMEGA",
    "Vertex",
    "Edge",
    "Graph",
    "Cycle",
    "VertexKinds",
    "PendantFamily",
    "Block",
    "ClassificationReport",
    "DecompositionReport",
    "GraphSyntaxError",
    "GraphError",
    "NotSolvableError",
    "parse_graph",
    "serialize_graph",
    "vertex_kinds",
    "distinct_cycles",
    "is_no_exit",
    "char2_condition",
    "is_isolated_and_loops",
    "emitters_receiving_edges",
    "count_paths_to_sink",
    "count_paths_to_cycle",
    "block_structure",
    "classify",
    "decompose",
    "normalize_characteristic",
    "format_count",
]

OMEGA = math.inf
"""The countable infinite cardinal; compares above every integer."""

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def format_count(n) -> int | str:
    return "omega" if n == OMEGA else int(n)


def _parse_count(text: str) -> int | float:
    if text == "omega":
        return OMEGA
    if not text.isdigit():
        raise ValueError(f"count must be a nonnegative integer or 'omega', got {text!r}")
    return int(text)


class GraphError(ValueError):
    """Structurally invalid graph (duplicate names, dangling endpoints, bad counts)."""


class GraphSyntaxError(GraphError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Vertex:
    name: str
    pendant_sinks: int | float = 0
    pendant_loops: int | float = 0

    @property
    def pendant_total(self) -> int | float:
        return self.pendant_sinks + self.pendant_loops


@dataclass(frozen=True)
class Edge:
    name: str
    source: str
    range: str

    @property
    def is_loop(self) -> bool:
        return self.source == self.range


class Graph:
    """A finite directed multigraph plus pendant families."""

    def __init__(self, vertices: Iterable[Vertex | str] = (), edges: Iterable[Edge | tuple] = ()):
        self.vertices: dict[str, Vertex] = {}
        self.edges: dict[str, Edge] = {}
        for v in vertices:
            v = Vertex(v) if isinstance(v, str) else v
            self._check_name(v.name)
            for attr in (v.pendant_sinks, v.pendant_loops):
                if not (attr == OMEGA or (isinstance(attr, int) and attr >= 0)):
                    raise GraphError(f"vertex {v.name}: pendant counts must be >= 0 or OMEGA")
            self.vertices[v.name] = v
        for e in edges:
            e = Edge(*e) if isinstance(e, tuple) else e
            self._check_name(e.name)
            for end in (e.source, e.range):
                if end not in self.vertices:
                    raise GraphError(f"edge {e.name} refers to unknown vertex {end!r}")
            self.edges[e.name] = e
        self._out: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        self._in: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges.values():
            self._out[e.source].append(e)
            self._in[e.range].append(e)

    def _check_name(self, name: str) -> None:
        if not _NAME.fullmatch(name):
            raise GraphError(f"invalid name {name!r}")
        if name in self.vertices or name in getattr(self, "edges", {}):
            raise GraphError(f"duplicate name {name!r}")

    # -- local structure ---------------------------------------------------------

    def out_edges(self, v: str) -> list[Edge]:
        return self._out[v]

    def in_edges(self, v: str) -> list[Edge]:
        return self._in[v]

    def out_degree(self, v: str) -> int | float:
        return len(self._out[v]) + self.vertices[v].pendant_total

    def in_degree(self, v: str) -> int:
        return len(self._in[v])

    def is_sink(self, v: str) -> bool:
        return self.out_degree(v) == 0

    def has_pendants(self) -> bool:
        return any(v.pendant_total for v in self.vertices.values())

    @property
    def row_finite(self) -> bool:
        return all(self.out_degree(v) != OMEGA for v in self.vertices)

    def loops_at(self, v: str) -> list[Edge]:
        return [e for e in self._out[v] if e.is_loop]

    def expand(self) -> Graph:
        """Equivalent graph with every finite pendant family written out explicitly."""
        verts, edges = [], list(self.edges.values())
        used = set(self.vertices) | set(self.edges)

        def fresh(stem: str) -> str:
            i = 0
            while f"{stem}{i}" in used:
                i += 1
            used.add(f"{stem}{i}")
            return f"{stem}{i}"

        extra_v: list[Vertex] = []
        for v in self.vertices.values():
            if v.pendant_total == OMEGA:
                raise GraphError(f"vertex {v.name} has infinitely many pendant edges")
            verts.append(Vertex(v.name))
            for _ in range(int(v.pendant_sinks)):
                w = fresh(f"{v.name}_s")
                extra_v.append(Vertex(w))
                edges.append(Edge(fresh(f"{v.name}_to_s"), v.name, w))
            for _ in range(int(v.pendant_loops)):
                w = fresh(f"{v.name}_l")
                extra_v.append(Vertex(w))
                edges.append(Edge(fresh(f"{v.name}_to_l"), v.name, w))
                edges.append(Edge(fresh(f"{w}_loop"), w, w))
        return Graph(verts + extra_v, edges)

    # -- cycle structure ---------------------------------------------------------

    @cached_property
    def _digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from((e.source, e.range) for e in self.edges.values())
        return g

    @cached_property
    def _scc(self) -> dict[str, int]:
        comp = {}
        for idx, block in enumerate(nx.strongly_connected_components(self._digraph)):
            for v in block:
                comp[v] = idx
        return comp

    def on_cycle(self, v: str) -> bool:
        """Whether ``v`` lies on some (named) cycle."""
        if self.loops_at(v):
            return True
        return any(self._scc[e.range] == self._scc[v] for e in self._out[v])

    def cycle_edge_from(self, v: str) -> Edge | None:
        for e in self._out[v]:
            if self._scc[e.range] == self._scc[v]:
                return e
        return None

    def on_short_cycle(self, v: str) -> bool:
        """``v`` lies on a loop or on a cycle of length 2."""
        if self.loops_at(v):
            return True
        targets = {e.range for e in self._out[v]}
        return any(e.source in targets for e in self._in[v])

    # -- identity ----------------------------------------------------------------

    def _key(self):
        return (tuple(self.vertices.values()), tuple(self.edges.values()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"<Graph |E0|={len(self.vertices)} |E1|={len(self.edges)}>"


# -- text format -------------------------------------------------------------------


_ATTR = re.compile(r"\[?\s*(pendant_sinks|pendant_loops)\s*=\s*([^\],\s]*)\s*\]?")


def parse_graph(text: str) -> Graph:
    vertices: list[Vertex] = []
    edges: list[tuple[Edge, int, int]] = []
    seen: dict[str, int] = {}

    def declare(name: str, lineno: int, col: int) -> None:
        if not _NAME.fullmatch(name):
            raise GraphSyntaxError(f"invalid name {name!r}", lineno, col)
        if name in seen:
            raise GraphSyntaxError(f"duplicate name {name!r} (first declared on line {seen[name]})", lineno, col)
        seen[name] = lineno

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        keyword = body.split(None, 1)[0]
        if keyword == "vertex":
            m = re.match(r"vertex\s+(\S+)(.*)$", body)
            if not m:
                raise GraphSyntaxError("expected 'vertex <name> [attributes]'", lineno, indent + 1)
            name, rest = m.group(1), m.group(2)
            declare(name, lineno, indent + m.start(1) + 1)
            attrs: dict[str, int | float] = {}
            pos = 0
            rest_off = indent + m.start(2)
            while pos < len(rest):
                if rest[pos] in " \t,":
                    pos += 1
                    continue
                am = _ATTR.match(rest, pos)
                if not am or (rest[pos] == "[" and not am.group(0).endswith("]")):
                    raise GraphSyntaxError(
                        "expected [pendant_sinks=<n|omega>] or [pendant_loops=<n|omega>]", lineno, rest_off + pos + 1
                    )
                key, value = am.group(1), am.group(2)
                if key in attrs:
                    raise GraphSyntaxError(f"{key} given twice", lineno, rest_off + pos + 1)
                try:
                    attrs[key] = _parse_count(value)
                except ValueError as exc:
                    raise GraphSyntaxError(str(exc), lineno, rest_off + am.start(2) + 1) from None
                pos = am.end()
            vertices.append(Vertex(name, **attrs))
        elif keyword == "edge":
            m = re.match(r"edge\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$", body)
            if not m:
                raise GraphSyntaxError("expected 'edge <name> : <src> -> <dst>'", lineno, indent + 1)
            declare(m.group(1), lineno, indent + m.start(1) + 1)
            cols = (indent + m.start(2) + 1, indent + m.start(3) + 1)
            edges.append((Edge(m.group(1), m.group(2), m.group(3)), lineno, cols))
        else:
            raise GraphSyntaxError(f"unknown declaration {keyword!r}", lineno, indent + 1)

    names = {v.name for v in vertices}
    for e, lineno, cols in edges:
        for end, col in zip((e.source, e.range), cols):
            if end not in names:
                raise GraphSyntaxError(f"edge {e.name} refers to undeclared vertex {end!r}", lineno, col)
    return Graph(vertices, [e for e, _, _ in edges])


def serialize_graph(g: Graph) -> str:
    lines = []
    for v in g.vertices.values():
        parts = [f"vertex {v.name}"]
        if v.pendant_sinks:
            parts.append(f"[pendant_sinks={format_count(v.pendant_sinks)}]")
        if v.pendant_loops:
            parts.append(f"[pendant_loops={format_count(v.pendant_loops)}]")
        lines.append(" ".join(parts))
    for e in g.edges.values():
        lines.append(f"edge {e.name} : {e.source} -> {e.range}")
    return "\n".join(lines) + ("\n" if lines else "")


# -- vertex kinds ------------------------------------------------------------------


@dataclass(frozen=True)
class PendantFamily:
    owner: str
    kind: str  # "sink" or "loop"
    count: int | float

    def to_dict(self) -> dict:
        return {"owner": self.owner, "kind": self.kind, "count": format_count(self.count)}


@dataclass
class VertexKinds:
    sinks: list[str]
    regular: list[str]
    infinite_emitters: list[str]
    isolated: list[str]
    families: list[PendantFamily]

    def to_dict(self) -> dict:
        return {
            "sinks": self.sinks,
            "regular": self.regular,
            "infinite_emitters": self.infinite_emitters,
            "isolated": self.isolated,
            "pendant_families": [f.to_dict() for f in self.families],
        }


def vertex_kinds(g: Graph) -> VertexKinds:
    """Partition named vertices by out-degree; pendant vertices are summarized per family.

    Private pendant sinks are sinks (never isolated: each receives its edge),
    private loop vertices are regular.
    """
    kinds = VertexKinds([], [], [], [], [])
    for name, v in g.vertices.items():
        out = g.out_degree(name)
        if out == 0:
            kinds.sinks.append(name)
            if g.in_degree(name) == 0:
                kinds.isolated.append(name)
        elif out == OMEGA:
            kinds.infinite_emitters.append(name)
        else:
            kinds.regular.append(name)
        if v.pendant_sinks:
            kinds.families.append(PendantFamily(name, "sink", v.pendant_sinks))
        if v.pendant_loops:
            kinds.families.append(PendantFamily(name, "loop", v.pendant_loops))
    return kinds


# -- cycles --------------------------------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    """A cycle, rotated to start at its smallest vertex name."""

    edges: tuple[str, ...]
    vertices: tuple[str, ...]

    @property
    def base(self) -> str:
        return self.vertices[0]

    @property
    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.vertices)

    @property
    def is_loop(self) -> bool:
        return len(self.edges) == 1

    @property
    def label(self) -> str:
        return ".".join(self.edges)

    def __len__(self) -> int:
        return len(self.edges)


def distinct_cycles(g: Graph) -> list[Cycle]:
    """One cycle per vertex set: cycles on the same vertices count as the same.

    Among cycles on the same vertex set (different orders or parallel edges)
    the representative is the lexicographically smallest vertex sequence, each
    step using the first declared edge.
    """
    best: dict[frozenset, tuple[str, ...]] = {}
    for nodes in nx.simple_cycles(g._digraph):
        k = nodes.index(min(nodes))
        seq = tuple(nodes[k:] + nodes[:k])
        key = frozenset(seq)
        if key not in best or seq < best[key]:
            best[key] = seq
    cycles = []
    for seq in best.values():
        edges = []
        for a, b in zip(seq, seq[1:] + seq[:1]):
            edges.append(next(e.name for e in g.out_edges(a) if e.range == b))
        cycles.append(Cycle(tuple(edges), seq))
    cycles.sort(key=lambda c: (sorted(c.vertices), c.vertices))
    return cycles


def is_no_exit(g: Graph) -> tuple[bool, dict | None]:
    """Every vertex on a cycle has out-degree exactly 1 (pendant edges included)."""
    for v in g.vertices:
        if g.on_cycle(v) and g.out_degree(v) != 1:
            cyc = g.cycle_edge_from(v)
            others = [e.name for e in g.out_edges(v) if e is not cyc]
            return False, {
                "vertex": v,
                "cycle_edge": cyc.name,
                "exit": others[0] if others else "pendant edge",
            }
    return True, None


def char2_condition(g: Graph) -> tuple[bool, dict | None]:
    """Each vertex is a sink, or on a cycle of length <= 2, or sends every edge to a
    private sink (sole in-edge) or to a vertex whose in-edges are exactly that edge
    and one loop."""
    for v in g.vertices:
        if g.is_sink(v) or g.on_short_cycle(v):
            continue
        for e in g.out_edges(v):
            t = e.range
            ins = g.in_edges(t)
            if g.is_sink(t) and len(ins) == 1:
                continue
            loops = g.loops_at(t)
            if len(loops) == 1 and len(ins) == 2 and {x.name for x in ins} == {e.name, loops[0].name}:
                continue
            if g.is_sink(t):
                reason = f"sink {t} receives {len(ins)} edges"
            elif loops:
                reason = f"{t} carries a loop but receives {len(ins)} edges"
            else:
                reason = f"{t} is neither a sink nor on a loop"
            return False, {"vertex": v, "edge": e.name, "target": t, "reason": reason}
    return True, None


def emitters_receiving_edges(g: Graph) -> list[str]:
    """Infinite emitters at which some path of positive length ends."""
    return [v for v in g.vertices if g.out_degree(v) == OMEGA and g.in_degree(v) > 0]


def is_isolated_and_loops(g: Graph) -> tuple[bool, dict | None]:
    """Disjoint union of isolated vertices and loops (nothing else attached)."""
    for name, v in g.vertices.items():
        if v.pendant_total:
            return False, {"vertex": name, "reason": "has pendant edges"}
        outs, ins = g.out_edges(name), g.in_edges(name)
        if not outs and not ins:
            continue
        if len(outs) == 1 and len(ins) == 1 and outs[0] is ins[0] and outs[0].is_loop:
            continue
        return False, {
            "vertex": name,
            "reason": f"out-edges {[e.name for e in outs]}, in-edges {[e.name for e in ins]}",
        }
    return True, None


# -- path counting -------------------------------------------------------------------


def _count_paths_ending(g: Graph, target: str, avoid: Cycle | None = None) -> int | float:
    """Paths ending at ``target`` (trivial path included) that never run a full lap of ``avoid``.

    Paths are grown backwards; the state remembers how many cycle edges sit in
    a row at the front.  An infinite family exists iff the state graph
    reachable from ``(target, 0)`` has a cycle.
    """
    lap = len(avoid) if avoid is not None else 0
    cyc_edges = set(avoid.edges) if avoid is not None else set()
    memo: dict[tuple[str, int], int | float] = {}
    on_stack: set[tuple[str, int]] = set()

    def visit(state):
        if state in memo:
            return memo[state]
        if state in on_stack:
            return OMEGA
        on_stack.add(state)
        v, run = state
        total = 1
        for e in g.in_edges(v):
            nxt = run + 1 if e.name in cyc_edges else 0
            if cyc_edges and nxt >= lap:
                continue
            total += visit((e.source, nxt))
        on_stack.discard(state)
        memo[state] = total
        return total

    # recursion depth is bounded by |E0| * lap, tiny for graphs in scope
    return visit((target, 0))


def count_paths_to_sink(g: Graph, v: str) -> int | float:
    """``n(v)``: the number of paths ending at the sink ``v``."""
    if v not in g.vertices:
        raise GraphError(f"unknown vertex {v!r}")
    if not g.is_sink(v):
        raise GraphError(f"{v} is not a sink")
    return _count_paths_ending(g, v)


def count_paths_to_cycle(g: Graph, c: Cycle, base: str | None = None) -> int | float:
    """``m(c)``: paths ending at a vertex of ``c`` that do not contain ``c`` itself.

    Counted at ``base`` (default: the smallest vertex name of ``c``).
    """
    if c.vertex_set not in {d.vertex_set for d in distinct_cycles(g)}:
        raise GraphError(f"{c.label} is not a cycle of this graph")
    for a, name in zip(c.vertices, c.edges):
        e = g.edges.get(name)
        if e is None or e.source != a:
            raise GraphError(f"{c.label} is not a cycle of this graph")
    base = c.base if base is None else base
    if base not in c.vertices:
        raise GraphError(f"{base} is not on cycle {c.label}")
    return _count_paths_ending(g, base, c)


# -- reports ---------------------------------------------------------------------------


def normalize_characteristic(char) -> str:
    """``"2"`` or ``"not 2"`` from 2, "2", "not2", "not 2", or any other characteristic."""
    if isinstance(char, str):
        key = char.strip().lower().replace(" ", "").replace("_", "")
        if key == "2":
            return "2"
        if key in ("not2", "!2", "odd", "0"):
            return "not 2"
        if key.isdigit():
            return "2" if int(key) == 2 else "not 2"
        raise ValueError(f"characteristic selector must be 2 or not2, got {char!r}")
    if isinstance(char, int):
        return "2" if char == 2 else "not 2"
    raise ValueError(f"characteristic selector must be 2 or not2, got {char!r}")


@dataclass
class ClassificationReport:
    characteristic: str
    no_exit: bool
    exit_witness: dict | None
    char2_condition: bool
    char2_witness: dict | None
    isolated_and_loops: bool
    isolated_witness: dict | None
    emitters_receiving_edges: list[str]
    solvable: bool
    nilpotent: bool
    witness: dict | None
    explanation: list[dict] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "characteristic": "2" if self.characteristic == "2" else "not2",
            "solvable": self.solvable,
            "nilpotent": self.nilpotent,
            "no_exit": self.no_exit,
            "char2_condition": self.char2_condition,
            "isolated_and_loops": self.isolated_and_loops,
            "emitters_receiving_edges": self.emitters_receiving_edges,
            "witness": self.witness,
            "explanation": self.explanation,
        }


def classify(g: Graph, characteristic) -> ClassificationReport:
    """Lie solvability and nilpotency of ``L_K(E)`` read off the graph.

    Characteristic 2: solvable iff no exits and the three-way vertex
    condition holds.  Otherwise: solvable iff the graph is isolated vertices
    and loops.  Nilpotent iff isolated vertices and loops, in any
    characteristic.
    """
    char = normalize_characteristic(characteristic)
    no_exit, exit_wit = is_no_exit(g)
    c2, c2_wit = char2_condition(g)
    iso, iso_wit = is_isolated_and_loops(g)
    receivers = emitters_receiving_edges(g)
    trace = [
        {"check": "no_exit", "holds": no_exit, "witness": exit_wit},
        {"check": "char2_condition", "holds": c2, "witness": c2_wit},
        {"check": "isolated_and_loops", "holds": iso, "witness": iso_wit},
        {"check": "no_path_ends_at_infinite_emitter", "holds": not receivers, "witness": receivers or None},
    ]
    if char == "2":
        solvable = no_exit and c2
        if not no_exit:
            witness = {"rule": "exit", **exit_wit}
        elif not c2:
            witness = {"rule": "vertex_condition", **c2_wit}
        else:
            witness = None
    else:
        solvable = iso
        witness = None if iso else {"rule": "not_isolated_vertices_and_loops", **iso_wit}
    trace.append({"check": "solvable", "holds": solvable, "rule": "char 2" if char == "2" else "char not 2"})
    return ClassificationReport(char, no_exit, exit_wit, c2, c2_wit, iso, iso_wit, receivers, solvable, iso, witness, trace)


@dataclass(frozen=True)
class Block:
    """One matrix block: ``M_size(K)`` (``MatK``) or ``M_size(K[x, x^-1])`` (``MatLaurent``)."""

    kind: str
    size: int | float
    at: str
    copies: int | float = 1

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "size": format_count(self.size), "at": self.at}
        if self.copies != 1:
            d["copies"] = format_count(self.copies)
        return d


@dataclass
class DecompositionReport:
    sink_blocks: list[Block]
    cycle_blocks: list[Block]
    quotient_emitters: list[str]
    row_finite: bool
    exact: bool

    @property
    def blocks(self) -> list[Block]:
        return self.sink_blocks + self.cycle_blocks

    def to_dict(self) -> dict:
        return {
            "blocks": [b.to_dict() for b in self.blocks],
            "quotient_emitters": self.quotient_emitters,
            "row_finite": self.row_finite,
            "exact": self.exact,
        }


class NotSolvableError(ValueError):
    def __init__(self, report: ClassificationReport):
        super().__init__(f"L_K(E) is not Lie solvable in characteristic {report.characteristic}: {report.witness}")
        self.report = report


def block_structure(g: Graph) -> tuple[list[Block], list[Block]]:
    """Sink blocks ``M_n(v)(K)`` and cycle blocks ``M_m(c)(K[x, x^-1])``, no preconditions.

    Pendant families contribute one summarized entry each, with ``copies``
    equal to the family size.
    """
    sink_blocks, cycle_blocks = [], []
    for v in g.vertices:
        if g.is_sink(v):
            sink_blocks.append(Block("MatK", _count_paths_ending(g, v), v))
    for c in distinct_cycles(g):
        cycle_blocks.append(Block("MatLaurent", _count_paths_ending(g, c.base, c), c.label))
    for name, v in g.vertices.items():
        if not v.pendant_total:
            continue
        into_owner = _count_paths_ending(g, name)
        if v.pendant_sinks:
            sink_blocks.append(Block("MatK", 1 + into_owner, f"{name}:pendant_sinks", v.pendant_sinks))
        if v.pendant_loops:
            cycle_blocks.append(Block("MatLaurent", 1 + into_owner, f"{name}:pendant_loops", v.pendant_loops))
    return sink_blocks, cycle_blocks


def decompose(g: Graph, characteristic) -> DecompositionReport:
    """Matrix-block decomposition of the ideal generated by sinks and cycles.

    Defined only for Lie solvable ``L_K(E)``; the quotient by that ideal is
    ``K^(S)`` over the infinite emitters ``S``, so the decomposition is the
    whole algebra exactly when the graph is row-finite.
    """
    report = classify(g, characteristic)
    if not report.solvable:
        raise NotSolvableError(report)
    sink_blocks, cycle_blocks = block_structure(g)
    bound = 2 if report.characteristic == "2" else 1
    for b in sink_blocks + cycle_blocks:
        if not b.size <= bound:
            raise AssertionError(f"internal inconsistency: solvable graph has block {b} larger than {bound}")
    kinds = vertex_kinds(g)
    return DecompositionReport(sink_blocks, cycle_blocks, kinds.infinite_emitters, g.row_finite, g.row_finite)


def report_json(obj) -> str:
    return json.dumps(obj.to_dict(), sort_keys=True, indent=2)
