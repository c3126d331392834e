"""Finite-dimensional algebras given by structure constants.

An algebra of dimension ``n`` is a dense tensor ``table`` of shape
``(n, n, n)`` with ``e_i e_j = sum_k table[i, j, k] e_k``.  Everything in this
module is bilinear bookkeeping on top of :mod:`lienil.linalg`: products and
brackets of subspaces, ideal closure, identity checks on basis triples, and the
derived / lower central / power series.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable

import numpy as np

from .linalg import QQ, DimensionError, Field, GF, Subspace

__all__ = [
    "PLAIN",
    "VERIFIED_NOVIKOV",
    "VERIFIED_ASSOCIATIVE",
    "StructureAlgebra",
    "IdentityVerdict",
    "SeriesReport",
    "FlavorError",
    "SeriesCapExceeded",
    "AlgebraFormatError",
    "multiply",
    "bracket",
    "product_space",
    "bracket_space",
    "ideal_closure",
    "verify_novikov",
    "verify_associative",
    "verify_lie_admissible",
    "as_novikov",
    "as_associative",
    "derived_series",
    "is_lie_solvable",
    "lie_lower_central_series",
    "is_lie_nilpotent",
    "power_chain",
    "is_nilpotent_subspace",
    "gl_algebra",
    "gl_laurent_verdicts",
    "direct_sum",
    "load_algebra",
    "dump_algebra",
    "max_series_steps",
]

PLAIN = "plain"
VERIFIED_NOVIKOV = "verified_novikov"
VERIFIED_ASSOCIATIVE = "verified_associative"
_FLAVORS = (PLAIN, VERIFIED_NOVIKOV, VERIFIED_ASSOCIATIVE)

MAX_STEPS_ENV = "LIENIL_MAX_STEPS"


class FlavorError(ValueError):
    """An operation received an algebra without the flavor it requires."""

    def __init__(self, message: str, verdict: IdentityVerdict | None = None):
        super().__init__(message)
        self.verdict = verdict


class SeriesCapExceeded(RuntimeError):
    """A series ran past its safety bound without terminating or stabilizing."""


class AlgebraFormatError(ValueError):
    pass


class StructureAlgebra:
    """An algebra on the basis ``e_0, ..., e_{n-1}`` given by structure constants."""

    def __init__(self, field: Field, table, flavor: str = PLAIN, name: str | None = None):
        table = table if isinstance(table, np.ndarray) and table.dtype == field.dtype else field.array(table)
        if field.p:
            table = field.reduce(table)
        if table.ndim != 3 or len(set(table.shape)) != 1 or table.shape[0] < 1:
            raise DimensionError(f"structure tensor must be n x n x n with n >= 1, got {table.shape}")
        if flavor not in _FLAVORS:
            raise ValueError(f"unknown flavor {flavor!r}")
        table.flags.writeable = False
        self.field = field
        self.table = table
        self.flavor = flavor
        self.name = name

    @classmethod
    def from_entries(cls, field: Field, dim: int, entries: dict, **kw) -> StructureAlgebra:
        """Build from a sparse ``{(i, j, k): coefficient}`` map (0-based indices)."""
        t = field.zeros((dim, dim, dim))
        for (i, j, k), c in entries.items():
            t[i, j, k] = field.elem(t[i, j, k] + field.elem(c))
        return cls(field, t, **kw)

    @property
    def dim(self) -> int:
        return self.table.shape[0]

    @cached_property
    def bracket_table(self) -> np.ndarray:
        return self.field.reduce(self.table - self.table.transpose(1, 0, 2))

    def full(self) -> Subspace:
        return Subspace.full(self.field, self.dim)

    def zero(self) -> Subspace:
        return Subspace.zero(self.field, self.dim)

    def span(self, rows) -> Subspace:
        return Subspace.span(self.field, rows, self.dim)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = self.field.one()
        return v

    def with_flavor(self, flavor: str) -> StructureAlgebra:
        return StructureAlgebra(self.field, self.table, flavor, self.name)

    def is_commutative(self) -> bool:
        return not np.any(self.bracket_table != 0)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<StructureAlgebra{label} dim={self.dim} over {self.field} ({self.flavor})>"


# -- products ------------------------------------------------------------------------


def _vec(alg: StructureAlgebra, a) -> np.ndarray:
    v = np.asarray(a)
    if v.ndim != 1 or v.shape[0] != alg.dim:
        raise DimensionError(f"expected a vector of length {alg.dim}, got shape {v.shape}")
    if v.dtype != alg.field.dtype:
        v = alg.field.array(v.tolist())
    return v


def _bilinear(alg: StructureAlgebra, table: np.ndarray, a, b) -> np.ndarray:
    a, b = _vec(alg, a), _vec(alg, b)
    n = alg.dim
    left = alg.field.dot(a[None, :], table.reshape(n, n * n)).reshape(n, n)
    return alg.field.dot(b[None, :], left)[0]


def multiply(alg: StructureAlgebra, a, b) -> np.ndarray:
    """The product ``ab`` of two coordinate vectors."""
    return _bilinear(alg, alg.table, a, b)


def bracket(alg: StructureAlgebra, a, b) -> np.ndarray:
    """The commutator ``ab - ba``."""
    return _bilinear(alg, alg.bracket_table, a, b)


def _pair_products(field: Field, table: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Rows ``A_i * B_j`` (row index ``i * len(B) + j``) under ``table``."""
    n = table.shape[0]
    a, b = A.shape[0], B.shape[0]
    if a == 0 or b == 0:
        return field.zeros((0, n))
    T = field.dot(A, table.reshape(n, n * n))
    T = T.reshape(a, n, n).transpose(1, 0, 2).reshape(n, a * n)
    P = field.dot(B, T)
    return P.reshape(b, a, n).transpose(1, 0, 2).reshape(a * b, n)


def _check_sub(alg: StructureAlgebra, *spaces: Subspace) -> None:
    for S in spaces:
        if S.ambient_dim != alg.dim or S.field != alg.field:
            raise DimensionError(
                f"subspace of {S.field}^{S.ambient_dim} does not live in {alg.field}^{alg.dim}"
            )


def product_space(alg: StructureAlgebra, A: Subspace, B: Subspace) -> Subspace:
    """``span{ab : a in A, b in B}``; basis pairs suffice by bilinearity."""
    _check_sub(alg, A, B)
    rows = _pair_products(alg.field, alg.table, A.matrix, B.matrix)
    return Subspace.zero(alg.field, alg.dim).extend(rows)


def bracket_space(alg: StructureAlgebra, A: Subspace, B: Subspace) -> Subspace:
    """``span{[a, b] : a in A, b in B}``."""
    _check_sub(alg, A, B)
    rows = _pair_products(alg.field, alg.bracket_table, A.matrix, B.matrix)
    if A == B and A.dim > 1:
        # alternating: only i < j contributes something new
        a = A.dim
        iu = np.triu_indices(a, 1)
        rows = rows.reshape(a, a, alg.dim)[iu]
    return Subspace.zero(alg.field, alg.dim).extend(rows)


def _multiplied_by_basis(alg: StructureAlgebra, S: Subspace) -> np.ndarray:
    n = alg.dim
    right = _pair_products(alg.field, alg.table, S.matrix, alg.field.identity(n))
    left = _pair_products(alg.field, alg.table, alg.field.identity(n), S.matrix)
    return np.vstack([right, left])


def ideal_closure(alg: StructureAlgebra, S: Subspace) -> Subspace:
    """Smallest two-sided ideal containing ``S`` (fixpoint over basis multiplications)."""
    _check_sub(alg, S)
    current = S
    while True:
        nxt = current.extend(_multiplied_by_basis(alg, current))
        if nxt.dim == current.dim:
            return current
        current = nxt


def is_ideal(alg: StructureAlgebra, S: Subspace) -> bool:
    _check_sub(alg, S)
    return S.first_outside(_multiplied_by_basis(alg, S)) is None


# -- identities on basis triples -------------------------------------------------------


@dataclass(frozen=True)
class IdentityVerdict:
    """Outcome of checking a multilinear identity on every basis triple.

    ``triple`` is the lexicographically first failing ``(i, j, k)`` (0-based)
    and ``residual`` the nonzero value of the identity there.
    """

    identity: str
    holds: bool
    triple: tuple[int, int, int] | None = None
    residual: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "holds": self.holds,
            "triple": None if self.triple is None else [t + 1 for t in self.triple],
            "residual": None if self.residual is None else [str(x) for x in self.residual],
        }


def _left_assoc(field: Field, t: np.ndarray) -> np.ndarray:
    """``X[i, j, k] = (e_i e_j) e_k``."""
    n = t.shape[0]
    return field.dot(t.reshape(n * n, n), t.reshape(n, n * n)).reshape(n, n, n, n)


def _right_assoc(field: Field, t: np.ndarray) -> np.ndarray:
    """``X[i, j, k] = e_i (e_j e_k)``."""
    n = t.shape[0]
    jkil = field.dot(t.reshape(n * n, n), t.transpose(1, 0, 2).reshape(n, n * n))
    return jkil.reshape(n, n, n, n).transpose(2, 0, 1, 3)


def _first_failure(name: str, field: Field, defect: np.ndarray) -> IdentityVerdict:
    defect = field.reduce(defect)
    bad = np.argwhere(np.any(defect != 0, axis=3))
    if bad.size == 0:
        return IdentityVerdict(name, True)
    i, j, k = (int(x) for x in bad[0])
    return IdentityVerdict(name, False, (i, j, k), tuple(defect[i, j, k].tolist()))


def _left_symmetry_defect(alg: StructureAlgebra) -> np.ndarray:
    # x(yz) - (xy)z - y(xz) + (yx)z
    L = _left_assoc(alg.field, alg.table)
    R = _right_assoc(alg.field, alg.table)
    assoc = R - L
    return assoc - assoc.transpose(1, 0, 2, 3)


def _right_commutativity_defect(alg: StructureAlgebra) -> np.ndarray:
    # (xy)z - (xz)y
    L = _left_assoc(alg.field, alg.table)
    return L - L.transpose(0, 2, 1, 3)


def verify_novikov(alg: StructureAlgebra) -> IdentityVerdict:
    """Left symmetry and right commutativity on all basis triples."""
    ls = _first_failure("left symmetry", alg.field, _left_symmetry_defect(alg))
    rc = _first_failure("right commutativity", alg.field, _right_commutativity_defect(alg))
    failures = [v for v in (ls, rc) if not v.holds]
    if not failures:
        return IdentityVerdict("novikov", True)
    return min(failures, key=lambda v: v.triple)


def verify_associative(alg: StructureAlgebra) -> IdentityVerdict:
    L = _left_assoc(alg.field, alg.table)
    R = _right_assoc(alg.field, alg.table)
    return _first_failure("associativity", alg.field, L - R)


def verify_lie_admissible(alg: StructureAlgebra) -> IdentityVerdict:
    """Jacobi identity for the commutator bracket."""
    BB = _left_assoc(alg.field, alg.bracket_table)
    jac = BB + BB.transpose(2, 0, 1, 3) + BB.transpose(1, 2, 0, 3)
    return _first_failure("jacobi", alg.field, jac)


def as_novikov(alg: StructureAlgebra) -> StructureAlgebra:
    """Return ``alg`` flagged verified_novikov, or raise with the failing triple."""
    v = verify_novikov(alg)
    if not v.holds:
        i, j, k = (t + 1 for t in v.triple)
        raise FlavorError(f"not a Novikov algebra: {v.identity} fails at basis triple ({i}, {j}, {k})", v)
    return alg.with_flavor(VERIFIED_NOVIKOV)


def as_associative(alg: StructureAlgebra) -> StructureAlgebra:
    v = verify_associative(alg)
    if not v.holds:
        i, j, k = (t + 1 for t in v.triple)
        raise FlavorError(f"not associative: fails at basis triple ({i}, {j}, {k})", v)
    return alg.with_flavor(VERIFIED_ASSOCIATIVE)


# -- series ----------------------------------------------------------------------------


def max_series_steps(dim: int) -> int:
    env = os.environ.get(MAX_STEPS_ENV)
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ValueError(f"{MAX_STEPS_ENV} must be an integer, got {env!r}") from None
        if cap < 1:
            raise ValueError(f"{MAX_STEPS_ENV} must be positive")
        return cap
    return 2 * dim + 2


@dataclass
class SeriesReport:
    """A computed chain of subspaces and how it ended.

    ``terminated_at_zero``: the last term is {0}.  ``stabilized``: the series
    provably repeats forever at a nonzero term.
    """

    chain: list[Subspace]
    stabilized: bool
    terminated_at_zero: bool
    label: str = dc_field(default="", compare=False)

    @property
    def length(self) -> int:
        return len(self.chain)

    @property
    def dims(self) -> list[int]:
        return [S.dim for S in self.chain]

    @property
    def last(self) -> Subspace:
        return self.chain[-1]

    def term(self, i: int) -> Subspace:
        """1-based term, extended past the end by the limiting value."""
        if i < 1:
            raise IndexError("series terms are 1-based")
        if i <= len(self.chain):
            return self.chain[i - 1]
        if self.terminated_at_zero or self.stabilized:
            return self.chain[-1]
        raise IndexError(f"term {i} was not computed")

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "dims": self.dims,
            "length": self.length,
            "stabilized": self.stabilized,
            "terminated_at_zero": self.terminated_at_zero,
        }


def _iterate(first: Subspace, step: Callable[[Subspace], Subspace], cap: int, label: str) -> SeriesReport:
    chain = [first]
    while True:
        cur = chain[-1]
        if cur.is_zero():
            return SeriesReport(chain, False, True, label)
        if len(chain) >= cap:
            raise SeriesCapExceeded(f"{label}: no termination within {cap} steps (dims {[S.dim for S in chain]})")
        nxt = step(cur)
        chain.append(nxt)
        if nxt == cur:
            return SeriesReport(chain, True, False, label)


def derived_series(alg: StructureAlgebra) -> SeriesReport:
    """``D_1 = A``, ``D_{k+1} = [D_k, D_k]``."""
    return _iterate(alg.full(), lambda D: bracket_space(alg, D, D), max_series_steps(alg.dim), "derived")


def is_lie_solvable(alg: StructureAlgebra) -> bool:
    return derived_series(alg).terminated_at_zero


def lie_lower_central_series(alg: StructureAlgebra) -> SeriesReport:
    """``A_[1] = A``, ``A_[i+1] = [A, A_[i]]``."""
    full = alg.full()
    return _iterate(full, lambda N: bracket_space(alg, full, N), max_series_steps(alg.dim), "lie lower central")


def is_lie_nilpotent(alg: StructureAlgebra) -> bool:
    return lie_lower_central_series(alg).terminated_at_zero


def power_chain(alg: StructureAlgebra, V: Subspace, max_n: int | None = None) -> SeriesReport:
    """``V^1 = V``, ``V^n = sum_{1<=i<n} V^i V^(n-i)``.

    Terminates when some ``V^n = {0}`` (``length`` is then the nilpotency
    index).  Non-nilpotency is declared when the partial sums
    ``V^1 + ... + V^n`` have stopped growing and the last ``dim + 1`` powers
    repeat with a fixed period.  With ``max_n`` set, a run that reaches it
    undecided returns a report with both flags false.
    """
    _check_sub(alg, V)
    cap = max_series_steps(alg.dim)
    window = alg.dim + 1
    powers = [V]
    partial = [V]
    while True:
        n = len(powers)
        if powers[-1].is_zero():
            return SeriesReport(powers, False, True, "power")
        if max_n is not None and n >= max_n:
            return SeriesReport(powers, False, False, "power")
        if n >= cap:
            raise SeriesCapExceeded(f"power chain undecided after {cap} steps (dims {[S.dim for S in powers]})")
        n += 1
        nxt = alg.zero()
        for i in range(1, n):
            nxt = nxt + product_space(alg, powers[i - 1], powers[n - i - 1])
        powers.append(nxt)
        partial.append(partial[-1] + nxt)
        if partial[-1] == partial[-2] and not nxt.is_zero() and _periodic_tail(powers, window):
            return SeriesReport(powers, True, False, "power")


def _periodic_tail(terms: list[Subspace], window: int) -> bool:
    n = len(terms)
    for period in range(1, n - window + 1):
        if all(terms[m] == terms[m - period] for m in range(n - window, n)):
            return True
    return False


def is_nilpotent_subspace(alg: StructureAlgebra, V: Subspace) -> bool:
    return power_chain(alg, V).terminated_at_zero


# -- gl(n) -----------------------------------------------------------------------------


def gl_algebra(n: int, field: Field = QQ) -> StructureAlgebra:
    """Full matrix algebra ``M_n(K)`` on the matrix units, ``E_ij E_pq = delta_jp E_iq``.

    ``E_ij`` is basis vector ``(i - 1) * n + (j - 1)``.
    """
    if n < 1:
        raise ValueError("gl_algebra needs n >= 1")
    t = field.zeros((n * n, n * n, n * n))
    one = field.one()
    for i in range(n):
        for j in range(n):
            for q in range(n):
                t[i * n + j, j * n + q, i * n + q] = one
    return StructureAlgebra(field, t, VERIFIED_ASSOCIATIVE, name=f"gl({n}, {field})")


def gl_laurent_verdicts(n: int, field: Field) -> tuple[bool, bool]:
    """(solvable, nilpotent) for ``gl(n, K[x, x^-1])``.

    Scalars from the coefficient ring pull out of every bracket of matrix
    units, so the verdicts are those of ``gl(n, K)``.
    """
    alg = gl_algebra(n, field)
    return is_lie_solvable(alg), is_lie_nilpotent(alg)


def direct_sum(*algs: StructureAlgebra) -> StructureAlgebra:
    """Block-diagonal structure tensor of the given algebras (same field)."""
    if not algs:
        raise ValueError("direct_sum of nothing")
    field = algs[0].field
    if any(a.field != field for a in algs):
        raise ValueError("direct_sum needs a common field")
    n = sum(a.dim for a in algs)
    t = field.zeros((n, n, n))
    off = 0
    for a in algs:
        d = a.dim
        t[off:off + d, off:off + d, off:off + d] = a.table
        off += d
    flavor = algs[0].flavor if all(a.flavor == algs[0].flavor for a in algs) else PLAIN
    return StructureAlgebra(field, t, flavor)


# -- JSON file format ------------------------------------------------------------------

_COEFF = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def _parse_field(desc) -> Field:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise AlgebraFormatError('"field" must be {"kind": "Q"} or {"kind": "Fp", "p": <prime>}')
    if desc["kind"] == "Q":
        return QQ
    if desc["kind"] == "Fp":
        p = desc.get("p")
        if not isinstance(p, int):
            raise AlgebraFormatError('"Fp" field needs an integer "p"')
        try:
            return GF(p)
        except ValueError as exc:
            raise AlgebraFormatError(str(exc)) from None
    raise AlgebraFormatError(f"unknown field kind {desc['kind']!r}")


def load_algebra(text: str) -> StructureAlgebra:
    """Parse the structure-constant JSON format (1-based indices, sparse entries)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise AlgebraFormatError("top level must be an object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise AlgebraFormatError('"dim" must be a positive integer')
    field = _parse_field(doc.get("field"))
    entries = doc.get("table", [])
    if not isinstance(entries, list):
        raise AlgebraFormatError('"table" must be a list')
    t = field.zeros((dim, dim, dim))
    seen = set()
    for pos, ent in enumerate(entries):
        if not isinstance(ent, dict):
            raise AlgebraFormatError(f"table entry {pos} is not an object")
        try:
            i, j, k = (ent[key] for key in ("i", "j", "k"))
            c = ent["c"]
        except KeyError as exc:
            raise AlgebraFormatError(f"table entry {pos} lacks {exc.args[0]!r}") from None
        for idx in (i, j, k):
            if not isinstance(idx, int) or not 1 <= idx <= dim:
                raise AlgebraFormatError(f"table entry {pos}: index {idx!r} outside 1..{dim}")
        if isinstance(c, int):
            c = str(c)
        if not isinstance(c, str) or not _COEFF.match(c):
            raise AlgebraFormatError(f"table entry {pos}: coefficient {c!r} is not an integer or a/b")
        if (i, j, k) in seen:
            raise AlgebraFormatError(f"table entry {pos}: duplicate index ({i}, {j}, {k})")
        seen.add((i, j, k))
        try:
            t[i - 1, j - 1, k - 1] = field.elem(Fraction(c.replace(" ", "")))
        except ZeroDivisionError as exc:
            raise AlgebraFormatError(f"table entry {pos}: {exc}") from None
    return StructureAlgebra(field, t)


def _fmt_coeff(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(int(c))


def dump_algebra(alg: StructureAlgebra) -> str:
    field = {"kind": "Q"} if alg.field.p == 0 else {"kind": "Fp", "p": alg.field.p}
    entries = [
        {"i": int(i) + 1, "j": int(j) + 1, "k": int(k) + 1, "c": _fmt_coeff(alg.table[i, j, k])}
        for i, j, k in np.argwhere(alg.table != 0)
    ]
    return json.dumps({"dim": alg.dim, "field": field, "table": entries}, indent=1, sort_keys=True) + "\n"
