"""Exact scalar fields and canonical subspaces.

Two kinds of field are supported: the rationals (arbitrary precision,
``fractions.Fraction``) and prime fields F_p.  Vectors and matrices are numpy
arrays whose dtype depends on the field: ``int64`` residues for small primes,
Python objects otherwise.  Nothing here ever touches floating point except the
exact small-integer matmul fast path in :meth:`Field.dot`.

A :class:`Subspace` is stored by its reduced row-echelon basis, so two
subspaces are equal exactly when their stored bases are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np
from sympy import isprime

__all__ = [
    "DimensionError",
    "Field",
    "FieldScalar",
    "QQ",
    "GF",
    "Subspace",
    "rref",
    "subspace_sum",
    "contains",
    "subspace_leq",
    "subspace_eq",
]

# residues below this bound live in int64 arrays: a product of two residues
# stays below 2**50, so a row operation never overflows
_INT64_PRIME_BOUND = 1 << 25
# float64 represents every integer below 2**53 exactly
_FLOAT_EXACT = 1 << 53
_INT64_EXACT = 1 << 62


class DimensionError(ValueError):
    """Raised on ragged input or mismatched ambient dimensions."""


@dataclass(frozen=True)
class Field:
    """The rationals (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self) -> None:
        if self.p != 0 and not (self.p > 1 and isprime(self.p)):
            raise ValueError(f"field characteristic must be 0 or a prime, got {self.p}")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def is_prime_field(self) -> bool:
        return self.p != 0

    @property
    def tag(self) -> str:
        return "Q" if self.p == 0 else f"F_{self.p}"

    def __str__(self) -> str:
        return self.tag

    @property
    def dtype(self):
        if self.p and self.p < _INT64_PRIME_BOUND:
            return np.int64
        return object

    # -- raw element arithmetic ------------------------------------------------

    def elem(self, value) -> int | Fraction:
        """Canonical raw representative of ``value`` (int, Fraction or ``"a/b"``)."""
        if isinstance(value, FieldScalar):
            if value.field != self:
                raise ValueError(f"cannot coerce {value.field} scalar into {self}")
            return value.value
        if isinstance(value, str):
            value = Fraction(value.strip())
        elif isinstance(value, np.integer):
            value = int(value)
        if not isinstance(value, Rational):
            raise TypeError(f"not an exact number: {value!r}")
        if self.p == 0:
            return Fraction(value)
        num, den = value.numerator, value.denominator
        if den % self.p == 0:
            raise ZeroDivisionError(f"denominator {den} vanishes in {self}")
        if den == 1:
            return int(num) % self.p
        return int(num) * pow(int(den), -1, self.p) % self.p

    def __call__(self, value) -> FieldScalar:
        return FieldScalar(self.elem(value), self)

    def zero(self) -> int | Fraction:
        return Fraction(0) if self.p == 0 else 0

    def one(self) -> int | Fraction:
        return Fraction(1) if self.p == 0 else 1

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p == 0:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    # -- arrays ----------------------------------------------------------------

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        """Bring an integer/object array back to canonical residues (no-op over Q)."""
        if self.p:
            return arr % self.p
        return arr

    def array(self, data) -> np.ndarray:
        """Convert nested sequences of exact numbers into a canonical array."""
        raw = np.asarray(data, dtype=object)
        out = np.empty(raw.shape, dtype=object)
        flat_in, flat_out = raw.reshape(-1), out.reshape(-1)
        for idx, v in enumerate(flat_in):
            flat_out[idx] = self.elem(v)
        if self.dtype is np.int64:
            return out.astype(np.int64)
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is np.int64:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(self.zero())
        return out

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one()
        return out

    def dot(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Exact matrix product, reduced."""
        if self.dtype is not np.int64:
            return self.reduce(np.dot(a, b))
        inner = a.shape[-1]
        bound = inner * (self.p - 1) ** 2
        if bound < _FLOAT_EXACT:
            prod = np.dot(a.astype(np.float64), b.astype(np.float64))
            return np.rint(prod).astype(np.int64) % self.p
        if bound < _INT64_EXACT:
            return np.dot(a, b) % self.p
        return (np.dot(a.astype(object), b.astype(object)) % self.p).astype(np.int64)

    def random_vector(self, rng, n: int, spread: int = 3) -> np.ndarray:
        """Pseudorandom vector; rational entries are small integers over small denominators."""
        if self.p:
            return self.array([rng.randrange(self.p) for _ in range(n)])
        return self.array(
            [Fraction(rng.randint(-spread, spread), rng.randint(1, spread)) for _ in range(n)]
        )


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


@dataclass(frozen=True)
class FieldScalar:
    """An exact element of a :class:`Field`."""

    value: int | Fraction
    field: Field

    def _coerce(self, other) -> int | Fraction:
        return self.field.elem(other)

    def _wrap(self, v) -> FieldScalar:
        return FieldScalar(self.field.elem(v), self.field)

    def __add__(self, other):
        return self._wrap(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.value - self._coerce(other))

    def __rsub__(self, other):
        return self._wrap(self._coerce(other) - self.value)

    def __mul__(self, other):
        return self._wrap(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def inverse(self) -> FieldScalar:
        return FieldScalar(self.field.inv(self.value), self.field)

    def __truediv__(self, other):
        return self * FieldScalar(self._coerce(other), self.field).inverse()

    def __rtruediv__(self, other):
        return FieldScalar(self._coerce(other), self.field) * self.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldScalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self._coerce(other)
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.field))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.value}" if self.field.p == 0 else f"{self.value} (mod {self.field.p})"


# -- row reduction ---------------------------------------------------------------


def _nonzero_rows(M: np.ndarray) -> np.ndarray:
    if M.shape[0] == 0:
        return M
    return M[np.any(M != 0, axis=1)]


def _dedupe_rows(M: np.ndarray) -> np.ndarray:
    if M.dtype == object or M.shape[0] < 2:
        return M
    return np.unique(M, axis=0)


def _rref_array(M: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan elimination.  Returns (nonzero RREF rows, pivot columns)."""
    M = _dedupe_rows(_nonzero_rows(M)).copy()
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(M[r:, c] != 0)
        if hits.size == 0:
            continue
        k = r + int(hits[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        lead = M[r, c]
        if lead != 1:
            M[r] = field.reduce(M[r] * field.inv(lead))
        col = M[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            M[mask] = field.reduce(M[mask] - np.outer(col[mask], M[r]))
        pivots.append(c)
        r += 1
    return M[:r], pivots


class Subspace:
    """A subspace of K^n, held by its canonical reduced row-echelon basis.

    Instances are immutable; equality and hashing are structural.
    """

    __slots__ = ("field", "ambient_dim", "_mat", "_pivots", "_key")

    def __init__(self, field: Field, ambient_dim: int, mat: np.ndarray, pivots: Sequence[int]):
        # trusted constructor: callers pass an already reduced basis
        mat.flags.writeable = False
        self.field = field
        self.ambient_dim = ambient_dim
        self._mat = mat
        self._pivots = tuple(pivots)
        self._key = None

    # -- constructors ------------------------------------------------------------

    @classmethod
    def span(cls, field: Field, rows, ambient_dim: int | None = None) -> Subspace:
        if isinstance(rows, np.ndarray):
            if rows.ndim != 2:
                raise DimensionError("expected a 2-d array of rows")
            if rows.dtype == field.dtype and field.p:
                M = field.reduce(rows)
            else:
                M = field.array(rows.tolist())
        else:
            rows = [list(r) for r in rows]
            lengths = {len(r) for r in rows}
            if len(lengths) > 1:
                raise DimensionError(f"ragged rows with lengths {sorted(lengths)}")
            if rows:
                n = lengths.pop()
                if ambient_dim is not None and n != ambient_dim:
                    raise DimensionError(f"rows have length {n}, expected {ambient_dim}")
                ambient_dim = n
            if ambient_dim is None:
                raise DimensionError("cannot infer the ambient dimension of an empty row list")
            M = field.array(rows) if rows else field.zeros((0, ambient_dim))
        n = M.shape[1]
        if ambient_dim is not None and n != ambient_dim:
            raise DimensionError(f"rows have length {n}, expected {ambient_dim}")
        if n < 1:
            raise DimensionError("ambient dimension must be positive")
        R, piv = _rref_array(M, field)
        return cls(field, n, R, piv)

    @classmethod
    def zero(cls, field: Field, n: int) -> Subspace:
        return cls(field, n, field.zeros((0, n)), ())

    @classmethod
    def full(cls, field: Field, n: int) -> Subspace:
        return cls(field, n, field.identity(n), range(n))

    # -- accessors ---------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._mat.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """Read-only ``dim x ambient_dim`` array of basis rows."""
        return self._mat

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    @property
    def basis(self) -> list[list]:
        return [list(row) for row in self._mat.tolist()]

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def _check(self, other: Subspace) -> None:
        if self.field != other.field:
            raise DimensionError(f"field mismatch: {self.field} vs {other.field}")
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError(
                f"ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    # -- membership --------------------------------------------------------------

    def residual(self, vectors) -> np.ndarray:
        """Remainders of ``vectors`` (rows) after reduction by this basis."""
        V = np.asarray(vectors)
        single = V.ndim == 1
        if single:
            V = V[None, :]
        if V.shape[1] != self.ambient_dim:
            raise DimensionError(f"vector length {V.shape[1]} != ambient dim {self.ambient_dim}")
        if V.dtype != self.field.dtype:
            V = self.field.array(V.tolist())
        if self.dim:
            coeffs = V[:, list(self._pivots)]
            V = self.field.reduce(V - self.field.dot(coeffs, self._mat))
        return V[0] if single else V

    def contains(self, v) -> bool:
        return not np.any(self.residual(v) != 0)

    def first_outside(self, vectors) -> int | None:
        """Index of the first row of ``vectors`` not in this subspace, or None."""
        R = self.residual(vectors)
        if R.ndim == 1:
            R = R[None, :]
        bad = np.flatnonzero(np.any(R != 0, axis=1))
        return int(bad[0]) if bad.size else None

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def __le__(self, other: Subspace) -> bool:
        self._check(other)
        if self.dim > other.dim:
            return False
        return self.dim == 0 or other.first_outside(self._mat) is None

    def __ge__(self, other: Subspace) -> bool:
        return other <= self

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        return Subspace._from_array(self.field, np.vstack([self._mat, other._mat]))

    @classmethod
    def _from_array(cls, field: Field, M: np.ndarray) -> Subspace:
        R, piv = _rref_array(M, field)
        return cls(field, M.shape[1], R, piv)

    def extend(self, rows: np.ndarray) -> Subspace:
        """Span of this subspace together with extra rows (array in field dtype)."""
        if rows.shape[0] == 0:
            return self
        return Subspace._from_array(self.field, np.vstack([self._mat, rows]))

    # -- identity ----------------------------------------------------------------

    def _canon(self):
        if self._key is None:
            self._key = (self.field, self.ambient_dim, tuple(map(tuple, self._mat.tolist())))
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self._canon() == other._canon()

    def __hash__(self) -> int:
        return hash(self._canon())

    def __repr__(self) -> str:
        return f"Subspace({self.field}, dim={self.dim}/{self.ambient_dim}, basis={self.basis})"


def rref(rows, field: Field = QQ, ambient_dim: int | None = None) -> Subspace:
    """Canonical reduced row-echelon basis of the span of ``rows``."""
    return Subspace.span(field, rows, ambient_dim)


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    return A + B


def contains(A: Subspace, v: Iterable) -> bool:
    return A.contains(np.asarray(list(v), dtype=object))


def subspace_leq(A: Subspace, B: Subspace) -> bool:
    return A <= B


def subspace_eq(A: Subspace, B: Subspace) -> bool:
    A._check(B)
    return A == B
