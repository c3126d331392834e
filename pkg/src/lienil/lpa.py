"""Monomials ``p q*`` of a Leavitt path algebra and their products.

Only the path relations are used when multiplying: ``q* r`` cancels a common
prefix or vanishes.  The Cuntz-Krieger relation at a vertex (``v = sum ee*``)
is never needed for products of monomials; :func:`collapse_unique_exits`
applies it in the one shape needed here, a vertex with a single out-edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graph import Graph, GraphError
from .linalg import QQ, Field, FieldScalar

__all__ = [
    "Path",
    "LpaMonomial",
    "LpaElement",
    "mono_mul",
    "element_mul",
    "commutator",
    "vertex",
    "edge",
    "ghost",
    "path",
    "ghost_path",
    "monomial",
    "collapse_unique_exits",
    "UnitsVerdict",
    "verify_matrix_units",
    "EMBEDDINGS",
    "embedding_fixture",
]


@dataclass(frozen=True, order=True)
class Path:
    """A path given by its start vertex and edge names; no edges means the vertex itself."""

    start: str
    edges: tuple[str, ...] = ()

    def end(self, g: Graph) -> str:
        return g.edges[self.edges[-1]].range if self.edges else self.start

    def __len__(self) -> int:
        return len(self.edges)

    def then(self, other: Path) -> Path:
        return Path(self.start, self.edges + other.edges)

    def label(self) -> str:
        return ".".join(self.edges) if self.edges else self.start

    def check(self, g: Graph) -> None:
        if self.start not in g.vertices:
            raise GraphError(f"unknown vertex {self.start!r}")
        at = self.start
        for name in self.edges:
            e = g.edges.get(name)
            if e is None:
                raise GraphError(f"unknown edge {name!r}")
            if e.source != at:
                raise GraphError(f"{'.'.join(self.edges)} is not a path: {name} does not start at {at}")
            at = e.range

    @classmethod
    def of(cls, g: Graph, edges: str | tuple[str, ...] | list[str]) -> Path:
        """Path from dot-joined edge names, or a vertex name for a trivial path."""
        if isinstance(edges, str):
            if edges in g.vertices:
                return cls(edges)
            edges = tuple(edges.split("."))
        edges = tuple(edges)
        if not edges:
            raise GraphError("empty edge list; give a vertex for a trivial path")
        if edges[0] not in g.edges:
            raise GraphError(f"unknown edge {edges[0]!r}")
        p = cls(g.edges[edges[0]].source, edges)
        p.check(g)
        return p


@dataclass(frozen=True, order=True)
class LpaMonomial:
    p: Path
    q: Path

    def check(self, g: Graph) -> None:
        self.p.check(g)
        self.q.check(g)
        if self.p.end(g) != self.q.end(g):
            raise GraphError(f"{self.label()}: r(p) != r(q)")

    def label(self) -> str:
        return f"{self.p.label()}({self.q.label()})^*"


def _is_prefix(a: Path, b: Path) -> bool:
    return a.start == b.start and b.edges[: len(a.edges)] == a.edges


def mono_mul(g: Graph, a: LpaMonomial, b: LpaMonomial) -> LpaMonomial | None:
    """``(p q*)(r s*)``, a single monomial or ``None`` for zero."""
    p, q = a.p, a.q
    r, s = b.p, b.q
    if _is_prefix(q, r):
        rest = Path(q.end(g), r.edges[len(q) :])
        return LpaMonomial(p.then(rest), s)
    if _is_prefix(r, q):
        rest = Path(r.end(g), q.edges[len(r) :])
        return LpaMonomial(p, s.then(rest))
    return None


class LpaElement:
    """A finite linear combination of monomials; zero coefficients are never stored."""

    __slots__ = ("graph", "field", "terms")

    def __init__(self, graph: Graph, field: Field = QQ, terms: dict[LpaMonomial, FieldScalar] | None = None):
        self.graph = graph
        self.field = field
        self.terms: dict[LpaMonomial, FieldScalar] = {}
        for m, c in (terms or {}).items():
            c = field(c.value if isinstance(c, FieldScalar) else c)
            if c:
                self.terms[m] = c

    def _like(self, terms: dict) -> LpaElement:
        return LpaElement(self.graph, self.field, terms)

    def _compatible(self, other: LpaElement) -> None:
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")
        if self.graph is not other.graph and self.graph != other.graph:
            raise ValueError("elements of different Leavitt path algebras")

    def __add__(self, other: LpaElement) -> LpaElement:
        self._compatible(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return self._like(terms)

    def __neg__(self) -> LpaElement:
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: LpaElement) -> LpaElement:
        return self + (-other)

    def scale(self, k) -> LpaElement:
        k = self.field(k)
        return self._like({m: k * c for m, c in self.terms.items()})

    def __rmul__(self, k) -> LpaElement:
        return self.scale(k)

    def __mul__(self, other):
        if isinstance(other, LpaElement):
            return element_mul(self, other)
        return self.scale(other)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, LpaElement):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.field, frozenset(self.terms.items())))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c.value}*{m.label()}" for m, c in sorted(self.terms.items()))

    __repr__ = __str__


def element_mul(x: LpaElement, y: LpaElement) -> LpaElement:
    x._compatible(y)
    terms: dict[LpaMonomial, FieldScalar] = {}
    for (a, ca), (b, cb) in itertools.product(x.terms.items(), y.terms.items()):
        m = mono_mul(x.graph, a, b)
        if m is not None:
            c = ca * cb
            terms[m] = terms[m] + c if m in terms else c
    return x._like(terms)


def commutator(x: LpaElement, y: LpaElement) -> LpaElement:
    return element_mul(x, y) - element_mul(y, x)


# -- constructors ----------------------------------------------------------------------


def monomial(g: Graph, p: Path, q: Path, field: Field = QQ, coeff=1) -> LpaElement:
    m = LpaMonomial(p, q)
    m.check(g)
    return LpaElement(g, field, {m: field(coeff)})


def vertex(g: Graph, v: str, field: Field = QQ) -> LpaElement:
    return monomial(g, Path(v), Path(v), field)


def path(g: Graph, edges, field: Field = QQ) -> LpaElement:
    p = Path.of(g, edges)
    end = Path(p.end(g))
    return monomial(g, p, end, field)


def ghost_path(g: Graph, edges, field: Field = QQ) -> LpaElement:
    """``q*`` for the path ``q``."""
    q = Path.of(g, edges)
    return monomial(g, Path(q.end(g)), q, field)


def edge(g: Graph, e: str, field: Field = QQ) -> LpaElement:
    return path(g, (e,), field)


def ghost(g: Graph, e: str, field: Field = QQ) -> LpaElement:
    return ghost_path(g, (e,), field)


def collapse_unique_exits(x: LpaElement) -> LpaElement:
    """Rewrite ``(p f)(q f)*`` to ``p q*`` wherever ``f`` is the only edge leaving ``r(p)``.

    This is the Cuntz-Krieger relation ``w = f f*`` at a vertex ``w`` emitting
    exactly ``f``, applied until no trailing pair cancels.
    """
    g = x.graph
    terms: dict[LpaMonomial, FieldScalar] = {}
    for m, c in x.terms.items():
        p, q = m.p, m.q
        while p.edges and q.edges and p.edges[-1] == q.edges[-1]:
            f = g.edges[p.edges[-1]]
            if g.out_degree(f.source) != 1:
                break
            p, q = Path(p.start, p.edges[:-1]), Path(q.start, q.edges[:-1])
        key = LpaMonomial(p, q)
        terms[key] = terms[key] + c if key in terms else c
    return x._like(terms)


# -- matrix units --------------------------------------------------------------------------


@dataclass(frozen=True)
class UnitsVerdict:
    holds: bool
    size: int
    products_checked: int
    failure: dict | None = None

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "size": self.size,
            "products_checked": self.products_checked,
            "failure": self.failure,
        }


def verify_matrix_units(units: dict[tuple[int, int], LpaElement], n: int) -> UnitsVerdict:
    """Check ``u(i,j) u(k,l) = [j == k] u(i,l)`` for all ``n^4`` index quadruples (1-based)."""
    missing = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if (i, j) not in units]
    if missing:
        return UnitsVerdict(False, n, 0, {"missing": [list(ij) for ij in missing]})
    some = units[1, 1]
    zero = LpaElement(some.graph, some.field)
    checked = 0
    for i, j, k, l in itertools.product(range(1, n + 1), repeat=4):
        got = element_mul(units[i, j], units[k, l])
        want = units[i, l] if j == k else zero
        checked += 1
        if got != want:
            return UnitsVerdict(
                False,
                n,
                checked,
                {"quadruple": [i, j, k, l], "product": str(got), "expected": str(want)},
            )
    return UnitsVerdict(True, n, checked)


def _cycle_exit_units(field: Field) -> tuple[Graph, dict]:
    # loop c at v with exit f; unit (n, m) is c^n f f* (c^m)*
    g = Graph(["v", "w"], [("c", "v", "v"), ("f", "v", "w")])
    c, c_ = edge(g, "c", field), ghost(g, "c", field)
    f, f_ = edge(g, "f", field), ghost(g, "f", field)

    def power(x: LpaElement, k: int) -> LpaElement:
        out = vertex(g, "v", field)
        for _ in range(k):
            out = element_mul(out, x)
        return out

    units = {}
    for n in range(1, 4):
        for m in range(1, 4):
            units[n, m] = element_mul(element_mul(element_mul(power(c, n), f), f_), power(c_, m))
    return g, units


def _path_units(field: Field) -> tuple[Graph, dict]:
    # u -f-> w -e-> v
    g = Graph(["u", "w", "v"], [("f", "u", "w"), ("e", "w", "v")])
    e, e_ = edge(g, "e", field), ghost(g, "e", field)
    f, f_ = edge(g, "f", field), ghost(g, "f", field)
    ee_ = element_mul(e, e_)
    units = {
        (1, 1): element_mul(element_mul(f, ee_), f_),
        (2, 2): ee_,
        (3, 3): vertex(g, "v", field),
        (1, 2): element_mul(f, ee_),
        (2, 1): element_mul(ee_, f_),
        (2, 3): e,
        (3, 2): e_,
        (1, 3): element_mul(f, e),
        (3, 1): element_mul(e_, f_),
    }
    return g, units


def _converging_units(field: Field) -> tuple[Graph, dict]:
    # a -e-> v <-f- b
    g = Graph(["a", "b", "v"], [("e", "a", "v"), ("f", "b", "v")])
    e, e_ = edge(g, "e", field), ghost(g, "e", field)
    f, f_ = edge(g, "f", field), ghost(g, "f", field)
    units = {
        (1, 1): element_mul(e, e_),
        (2, 2): element_mul(f, f_),
        (3, 3): vertex(g, "v", field),
        (1, 2): element_mul(e, f_),
        (2, 1): element_mul(f, e_),
        (1, 3): e,
        (3, 1): e_,
        (2, 3): f,
        (3, 2): f_,
    }
    return g, units


EMBEDDINGS = {
    "cycle-exit": _cycle_exit_units,
    "path": _path_units,
    "converge": _converging_units,
}


def embedding_fixture(name: str, field: Field = QQ) -> tuple[Graph, dict]:
    """Built-in graph and its nine candidate matrix units, each a product of generators."""
    try:
        build = EMBEDDINGS[name]
    except KeyError:
        raise ValueError(f"unknown embedding {name!r}; choose from {sorted(EMBEDDINGS)}") from None
    return build(field)
