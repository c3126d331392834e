"""Exhaustive enumeration of small graphs and the linear-algebra cross-check of the classifier."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterator

import numpy as np

from .algebra import gl_algebra, gl_laurent_verdicts, is_lie_solvable
from .graph import (
    Graph,
    Vertex,
    Edge,
    OMEGA,
    block_structure,
    classify,
    count_paths_to_cycle,
    distinct_cycles,
    is_no_exit,
)
from .linalg import GF

__all__ = [
    "canonical_count_matrices",
    "enumerate_graphs",
    "count_graphs",
    "block_oracle",
    "SweepReport",
    "oracle_sweep",
    "SweepTooLargeError",
]

# above this many candidate multigraphs (before isomorphism reduction) a sweep is refused
MAX_CANDIDATES = 5_000_000


class SweepTooLargeError(ValueError):
    pass


def _candidate_count(nv: int, ne: int) -> int:
    return math.comb(nv * nv + ne - 1, ne) if nv else int(ne == 0)


def estimate_candidates(max_vertices: int, max_edges: int) -> int:
    return sum(_candidate_count(nv, ne) for nv in range(max_vertices + 1) for ne in range(max_edges + 1))


def _lex_min_update(best: np.ndarray, cand: np.ndarray) -> None:
    diff = cand != best
    first = diff.argmax(axis=1)
    rows = np.arange(len(best))
    less = diff.any(axis=1) & (cand[rows, first] < best[rows, first])
    best[less] = cand[less]


def canonical_count_matrices(nv: int, ne: int) -> np.ndarray:
    """One adjacency-count matrix (flattened, row-major) per isomorphism class.

    Directed multigraphs with loops on ``nv`` labelled vertices and ``ne``
    edges; the representative is the lexicographically smallest flattening
    over all relabellings.
    """
    slots = nv * nv
    if nv == 0:
        return np.zeros((1 if ne == 0 else 0, 0), dtype=np.int8)
    if ne == 0:
        return np.zeros((1, slots), dtype=np.int8)
    combos = np.array(list(itertools.combinations_with_replacement(range(slots), ne)), dtype=np.int64)
    counts = np.zeros((len(combos), slots), dtype=np.int8)
    for col in range(ne):
        np.add.at(counts, (np.arange(len(combos)), combos[:, col]), 1)

    # keep labellings whose per-vertex (out, in, loops) signature is nondecreasing;
    # every class has such a labelling, so nothing is lost
    mats = counts.reshape(-1, nv, nv).astype(np.int64)
    base = ne + 1
    sig = mats.sum(axis=2) * base * base + mats.sum(axis=1) * base + np.einsum("mii->mi", mats)
    keep = np.all(np.diff(sig, axis=1) >= 0, axis=1)
    counts = counts[keep]

    best = counts.copy()
    grid = np.arange(slots).reshape(nv, nv)
    for perm in itertools.permutations(range(nv)):
        p = np.asarray(perm)
        idx = grid[np.ix_(p, p)].ravel()
        _lex_min_update(best, counts[:, idx])
    return np.unique(best, axis=0)


def _graph_from_counts(flat: np.ndarray, nv: int) -> Graph:
    verts = [Vertex(f"v{i}") for i in range(nv)]
    edges = []
    for slot in np.flatnonzero(flat):
        i, j = divmod(int(slot), nv)
        for _ in range(int(flat[slot])):
            edges.append(Edge(f"e{len(edges)}", f"v{i}", f"v{j}"))
    return Graph(verts, edges)


def enumerate_graphs(max_vertices: int, max_edges: int) -> Iterator[Graph]:
    """Every graph with at most ``max_vertices`` vertices and ``max_edges`` edges, up to isomorphism.

    The empty graph is included.
    """
    total = estimate_candidates(max_vertices, max_edges)
    if total > MAX_CANDIDATES:
        raise SweepTooLargeError(
            f"bounds ({max_vertices} vertices, {max_edges} edges) give about {total} labelled candidates; "
            f"limit is {MAX_CANDIDATES}"
        )
    for nv in range(max_vertices + 1):
        for ne in range(max_edges + 1):
            for flat in canonical_count_matrices(nv, ne):
                yield _graph_from_counts(flat, nv)


def count_graphs(max_vertices: int, max_edges: int) -> int:
    return sum(
        len(canonical_count_matrices(nv, ne)) for nv in range(max_vertices + 1) for ne in range(max_edges + 1)
    )


@lru_cache(maxsize=None)
def _matrix_block_solvable(size: int, p: int) -> bool:
    return is_lie_solvable(gl_algebra(size, GF(p)))


@lru_cache(maxsize=None)
def _laurent_block_solvable(size: int, p: int) -> bool:
    return gl_laurent_verdicts(size, GF(p))[0]


def block_oracle(blocks, p: int) -> bool:
    """Lie solvability of a direct sum of matrix blocks over ``F_p``.

    A direct sum is solvable iff every summand is, so each distinct block
    type is decided once by the derived series of ``gl``.
    """
    for b in blocks:
        if b.size == OMEGA:
            return False
        solvable = _matrix_block_solvable if b.kind == "MatK" else _laurent_block_solvable
        if not solvable(int(b.size), p):
            return False
    return True


@dataclass
class SweepReport:
    max_vertices: int
    max_edges: int
    primes: tuple[int, ...]
    graphs: int = 0
    no_exit_graphs: int = 0
    solvable: dict[str, int] = dc_field(default_factory=lambda: {"2": 0, "not 2": 0})
    nilpotent: int = 0
    oracle_comparisons: int = 0
    mismatches: list[dict] = dc_field(default_factory=list)
    invariant_failures: list[dict] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.invariant_failures

    def to_dict(self) -> dict:
        return {
            "max_vertices": self.max_vertices,
            "max_edges": self.max_edges,
            "primes": list(self.primes),
            "graphs": self.graphs,
            "no_exit_graphs": self.no_exit_graphs,
            "solvable_char2": self.solvable["2"],
            "solvable_char_not2": self.solvable["not 2"],
            "nilpotent": self.nilpotent,
            "oracle_comparisons": self.oracle_comparisons,
            "mismatches": self.mismatches,
            "invariant_failures": self.invariant_failures,
            "ok": self.ok,
        }


def _describe(g: Graph) -> str:
    return "; ".join(f"{e.name}:{e.source}->{e.range}" for e in g.edges.values()) + f" |E0|={len(g.vertices)}"


def check_graph(g: Graph, primes=(2, 3, 5), report: SweepReport | None = None) -> SweepReport:
    """Run every structural invariant and the oracle comparison on one graph."""
    if report is None:
        report = SweepReport(len(g.vertices), len(g.edges), tuple(primes))
    report.graphs += 1
    c2, odd = classify(g, 2), classify(g, "not2")
    sinks, cycles = block_structure(g)
    blocks = sinks + cycles
    fail = report.invariant_failures.append

    report.solvable["2"] += c2.solvable
    report.solvable["not 2"] += odd.solvable
    report.nilpotent += c2.nilpotent
    if c2.nilpotent != odd.nilpotent:
        fail({"graph": _describe(g), "invariant": "nilpotency independent of characteristic"})
    if odd.solvable and not c2.solvable:
        fail({"graph": _describe(g), "invariant": "solvable away from 2 implies solvable in 2"})
    if c2.nilpotent and not (c2.solvable and odd.solvable):
        fail({"graph": _describe(g), "invariant": "nilpotent implies solvable"})
    all_unit = all(b.size == 1 for b in blocks)
    no_exit = is_no_exit(g)[0]
    if c2.nilpotent != all_unit:
        fail({"graph": _describe(g), "invariant": "nilpotent iff every block has size 1"})
    if no_exit and odd.solvable != all_unit:
        fail({"graph": _describe(g), "invariant": "char not 2: solvable iff every block has size 1"})
    if no_exit and c2.solvable != all(b.size <= 2 for b in blocks):
        fail({"graph": _describe(g), "invariant": "char 2: solvable iff every block has size <= 2"})
    for c in distinct_cycles(g):
        counts = {count_paths_to_cycle(g, c, v) for v in c.vertices}
        if len(counts) != 1:
            fail({"graph": _describe(g), "invariant": f"cycle count independent of base ({c.label})"})

    if no_exit and g.row_finite:
        report.no_exit_graphs += 1
        for p in primes:
            verdict = c2 if p == 2 else odd
            truth = block_oracle(blocks, p)
            report.oracle_comparisons += 1
            if truth != verdict.solvable:
                report.mismatches.append(
                    {
                        "graph": _describe(g),
                        "p": p,
                        "classifier": verdict.solvable,
                        "oracle": truth,
                        "blocks": [b.to_dict() for b in blocks],
                    }
                )
    return report


def oracle_sweep(max_vertices: int = 5, max_edges: int = 6, primes=(2, 3, 5)) -> SweepReport:
    report = SweepReport(max_vertices, max_edges, tuple(primes))
    for g in enumerate_graphs(max_vertices, max_edges):
        check_graph(g, primes, report)
    return report
