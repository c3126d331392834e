"""Commutator ideals and central chains in Novikov algebras.

All checks here work on a concrete :class:`~lienil.algebra.StructureAlgebra`
flagged ``verified_novikov`` and compare subspaces exactly.  Each ``check_*``
function returns a :class:`ChainCheckReport`; a failing report carries a
witness vector that genuinely lies outside the asserted subspace.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .algebra import (
    VERIFIED_NOVIKOV,
    FlavorError,
    SeriesReport,
    StructureAlgebra,
    _iterate,
    as_novikov,
    bracket,
    bracket_space,
    ideal_closure,
    is_ideal,
    lie_lower_central_series,
    max_series_steps,
    multiply,
    power_chain,
    product_space,
)
from .linalg import QQ, Field, Subspace

__all__ = [
    "ChainCheckReport",
    "NotLieIdealError",
    "InvalidChainError",
    "require_novikov",
    "is_lie_ideal",
    "commutator_ideal",
    "lower_central_chain_H",
    "class_of",
    "lie_commutator_ideal_chain",
    "check_commutator_ideal_formula",
    "check_ideal_generated_by_lie_terms",
    "check_cyclic_identities",
    "check_chain_inclusion",
    "check_product_inclusion",
    "check_commutator_ideal_equality",
    "check_nilpotency_equivalence",
    "random_lie_ideal",
    "make_truncated_derivation_novikov",
    "run_checks",
    "CHECKS",
]


class NotLieIdealError(ValueError):
    def __init__(self, message: str, which: str, witness: tuple):
        super().__init__(message)
        self.which = which
        self.witness = witness


class InvalidChainError(ValueError):
    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


@dataclass
class ChainCheckReport:
    claim_id: str
    holds: bool
    parameters: dict = dc_field(default_factory=dict)
    first_violation: dict | None = None
    details: dict = dc_field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            "claim": self.claim_id,
            "holds": self.holds,
            "parameters": self.parameters,
            "first_violation": self.first_violation,
            "details": self.details,
        }


def _coords(v) -> list[str]:
    return [str(x) for x in np.asarray(v).tolist()]


def require_novikov(alg: StructureAlgebra) -> None:
    if alg.flavor != VERIFIED_NOVIKOV:
        raise FlavorError(f"{alg!r} is not flagged verified_novikov; run as_novikov() first")


def is_lie_ideal(alg: StructureAlgebra, S: Subspace) -> tuple[bool, tuple | None]:
    """Whether ``[A, S] ⊆ S``; otherwise ``(False, (basis index, s index, bracket))``."""
    n = alg.dim
    for k, s in enumerate(S.matrix):
        for i in range(n):
            b = bracket(alg, alg.basis_vector(i), s)
            if not S.contains(b):
                return False, (i, k, b)
    return True, None


def _require_lie_ideal(alg: StructureAlgebra, S: Subspace, which: str) -> None:
    ok, wit = is_lie_ideal(alg, S)
    if not ok:
        i, k, b = wit
        raise NotLieIdealError(
            f"{which} is not a Lie ideal: [e_{i + 1}, basis row {k + 1}] = {_coords(b)} falls outside it",
            which,
            wit,
        )


def commutator_ideal(alg: StructureAlgebra, A: Subspace, B: Subspace, *, check: bool = True) -> Subspace:
    """``A ∘ B`` for Lie ideals A, B: ``[A, B] + N[A, B]``."""
    require_novikov(alg)
    if check:
        _require_lie_ideal(alg, A, "A")
        _require_lie_ideal(alg, B, "B")
    AB = bracket_space(alg, A, B)
    return AB + product_space(alg, alg.full(), AB)


def lower_central_chain_H(alg: StructureAlgebra) -> SeriesReport:
    """``H_1 = N``, ``H_{i+1} = H_i ∘ N``."""
    require_novikov(alg)
    full = alg.full()
    return _iterate(
        full,
        lambda H: commutator_ideal(alg, H, full, check=False),
        max_series_steps(alg.dim),
        "H",
    )


def class_of(alg: StructureAlgebra) -> int | None:
    """``n - 1`` for the first ``H_n = 0``; None when the algebra is not of finite class."""
    rep = lower_central_chain_H(alg)
    return rep.length - 1 if rep.terminated_at_zero else None


def lie_commutator_ideal_chain(alg: StructureAlgebra) -> list[Subspace]:
    """``Id(N_[i]) = N_[i] + N N_[i]`` for every computed term of the Lie lower central series."""
    require_novikov(alg)
    full = alg.full()
    return [N + product_space(alg, full, N) for N in lie_lower_central_series(alg).chain]


# -- checks ------------------------------------------------------------------------------


def random_lie_ideal(alg: StructureAlgebra, rng: random.Random) -> Subspace:
    """A Lie ideal drawn from one of several constructions that always give Lie ideals."""
    full = alg.full()
    derived = bracket_space(alg, full, full)
    k = rng.randint(0, max(1, alg.dim // 2))
    rand = alg.span([alg.field.random_vector(rng, alg.dim).tolist() for _ in range(k)]) if k else alg.zero()
    kind = rng.randrange(4)
    if kind == 0:
        # any subspace containing [N, N]
        return rand + derived
    if kind == 1:
        return ideal_closure(alg, bracket_space(alg, full, rand))
    if kind == 2:
        chain = lie_lower_central_series(alg).chain
        return chain[rng.randrange(len(chain))]
    return ideal_closure(alg, rand)


def check_commutator_ideal_formula(alg: StructureAlgebra, trials: int = 100, seed: int = 0) -> ChainCheckReport:
    """``[A, B] + N[A, B]`` equals the ideal generated by ``[A, B]`` on random Lie-ideal pairs."""
    require_novikov(alg)
    rng = random.Random(seed)
    symmetric_ok = True
    for t in range(trials):
        A, B = random_lie_ideal(alg, rng), random_lie_ideal(alg, rng)
        formula = commutator_ideal(alg, A, B)
        closure = ideal_closure(alg, bracket_space(alg, A, B))
        if formula != closure:
            missing = formula.first_outside(closure.matrix)
            wit = closure.matrix[missing] if missing is not None else formula.matrix[closure.first_outside(formula.matrix)]
            return ChainCheckReport(
                "commutator-ideal-formula",
                False,
                {"trials": trials, "seed": seed},
                {"trial": t, "dim_A": A.dim, "dim_B": B.dim, "element": _coords(wit)},
            )
        if commutator_ideal(alg, B, A, check=False) != formula:
            symmetric_ok = False
    return ChainCheckReport(
        "commutator-ideal-formula",
        symmetric_ok,
        {"trials": trials, "seed": seed},
        None if symmetric_ok else {"reason": "A∘B != B∘A"},
    )


def check_ideal_generated_by_lie_terms(alg: StructureAlgebra) -> ChainCheckReport:
    """``N_[i] + N N_[i]`` equals the ideal closure of ``N_[i]`` for every i."""
    require_novikov(alg)
    lcs = lie_lower_central_series(alg).chain
    formula = lie_commutator_ideal_chain(alg)
    for i, (N, F) in enumerate(zip(lcs, formula), start=1):
        C = ideal_closure(alg, N)
        if C != F:
            idx = F.first_outside(C.matrix)
            return ChainCheckReport(
                "ideal-of-lie-term", False, {"terms": len(lcs)}, {"i": i, "element": _coords(C.matrix[idx])}
            )
    return ChainCheckReport("ideal-of-lie-term", True, {"terms": len(lcs)})


def check_cyclic_identities(alg: StructureAlgebra, trials: int = 50, seed: int = 0) -> ChainCheckReport:
    """``[x,y]z + [y,z]x + [z,x]y = 0`` and ``x[y,z] + y[z,x] + z[x,y] = 0``.

    Checked on every basis triple and on ``trials`` pseudorandom triples.
    """
    require_novikov(alg)
    F = alg.field
    n = alg.dim

    def residuals(x, y, z):
        left = F.reduce(
            multiply(alg, bracket(alg, x, y), z) + multiply(alg, bracket(alg, y, z), x) + multiply(alg, bracket(alg, z, x), y)
        )
        right = F.reduce(
            multiply(alg, x, bracket(alg, y, z)) + multiply(alg, y, bracket(alg, z, x)) + multiply(alg, z, bracket(alg, x, y))
        )
        return left, right

    triples = [("basis", (i, j, k)) for i in range(n) for j in range(n) for k in range(n)]
    rng = random.Random(seed)
    samples = [
        ("random", tuple(F.random_vector(rng, n) for _ in range(3))) for _ in range(trials)
    ]
    for kind, item in triples + samples:
        xyz = [alg.basis_vector(t) for t in item] if kind == "basis" else list(item)
        for name, res in zip(("bracket-times", "times-bracket"), residuals(*xyz)):
            if np.any(res != 0):
                where = [t + 1 for t in item] if kind == "basis" else [_coords(v) for v in item]
                return ChainCheckReport(
                    "cyclic-identities",
                    False,
                    {"trials": trials, "seed": seed},
                    {"identity": name, "kind": kind, "at": where, "residual": _coords(res)},
                )
    return ChainCheckReport("cyclic-identities", True, {"basis_triples": n**3, "trials": trials, "seed": seed})


def _validate_user_chain(alg: StructureAlgebra, chain: Sequence[Subspace]) -> None:
    full = alg.full()
    if not chain:
        raise InvalidChainError("empty chain", 0)
    if chain[0] != full:
        raise InvalidChainError("the chain must start with the whole algebra", 1)
    for i, A in enumerate(chain, start=1):
        if A.ambient_dim != alg.dim:
            raise InvalidChainError(f"term {i} lives in the wrong ambient space", i)
        if i > 1 and not A <= chain[i - 2]:
            raise InvalidChainError(f"chain is not descending at term {i}", i)
        if not is_ideal(alg, A):
            raise InvalidChainError(f"term {i} is not an ideal", i)
    for i, A in enumerate(chain, start=1):
        nxt = chain[i] if i < len(chain) else alg.zero()
        if not commutator_ideal(alg, full, A, check=False) <= nxt:
            raise InvalidChainError(f"N ∘ A_{i} is not contained in A_{i + 1}", i)


def check_chain_inclusion(alg: StructureAlgebra, user_chain: Sequence[Subspace] | None = None) -> ChainCheckReport:
    """``H_p ∘ A_q ⊆ A_{p+q}`` for a central chain of ideals (default ``A_i = H_i``).

    Checked for all ``p + q <= L + 1`` where L is the chain length; a user
    chain is {0} past its end, the default chain continues at its limit.
    """
    require_novikov(alg)
    H = lower_central_chain_H(alg)
    if user_chain is None:
        term = H.term
        L = H.length
        source = "H"
    else:
        user_chain = list(user_chain)
        _validate_user_chain(alg, user_chain)
        L = len(user_chain)
        source = "user"

        def term(i: int) -> Subspace:
            return user_chain[i - 1] if i <= L else alg.zero()

    checked = 0
    for p in range(1, L + 1):
        Hp = H.term(p)
        for q in range(1, L + 2 - p):
            lhs = commutator_ideal(alg, Hp, term(q), check=False)
            rhs = term(p + q)
            bad = rhs.first_outside(lhs.matrix) if lhs.dim else None
            checked += 1
            if bad is not None:
                return ChainCheckReport(
                    "chain-inclusion",
                    False,
                    {"chain": source, "length": L},
                    {"p": p, "q": q, "element": _coords(lhs.matrix[bad])},
                )
    return ChainCheckReport("chain-inclusion", True, {"chain": source, "length": L, "pairs": checked})


def check_product_inclusion(alg: StructureAlgebra) -> ChainCheckReport:
    """``H_p H_q ⊆ H_{p+q-1}``; for finite class also nilpotency of ``H_2`` with index <= class."""
    require_novikov(alg)
    H = lower_central_chain_H(alg)
    L = H.length
    cls = L - 1 if H.terminated_at_zero else None
    params = {"length": L, "class": cls}
    for p in range(1, L + 1):
        for q in range(1, L + 1):
            prod = product_space(alg, H.term(p), H.term(q))
            bad = H.term(p + q - 1).first_outside(prod.matrix) if prod.dim else None
            if bad is not None:
                return ChainCheckReport(
                    "product-inclusion", False, params, {"part": "a", "p": p, "q": q, "element": _coords(prod.matrix[bad])}
                )
    details = {"a": True}
    if cls is None:
        details.update(b="vacuous", c="vacuous")
        return ChainCheckReport("product-inclusion", True, params, None, details)
    powers = power_chain(alg, H.term(2))
    if not powers.terminated_at_zero:
        return ChainCheckReport("product-inclusion", False, params, {"part": "b", "power_dims": powers.dims})
    index = powers.length
    details.update(b=True, nilpotency_index=index, power_dims=powers.dims)
    if index > cls:
        return ChainCheckReport(
            "product-inclusion", False, params, {"part": "c", "nilpotency_index": index, "class": cls}, details
        )
    details["c"] = True
    return ChainCheckReport("product-inclusion", True, params, None, details)


def check_commutator_ideal_equality(alg: StructureAlgebra) -> ChainCheckReport:
    """``Id(N_[i]) = H_i`` for all i, and ``Id(N_[p]) Id(N_[q]) ⊆ Id(N_[p+q-1])``."""
    require_novikov(alg)
    H = lower_central_chain_H(alg)
    lcs = lie_lower_central_series(alg)

    def ideal_term(i: int) -> Subspace:
        return ideal_closure(alg, lcs.term(i))

    L = max(H.length, lcs.length)
    for i in range(1, L + 1):
        I, Hi = ideal_term(i), H.term(i)
        if I != Hi:
            bad = Hi.first_outside(I.matrix)
            wit = I.matrix[bad] if bad is not None else Hi.matrix[I.first_outside(Hi.matrix)]
            return ChainCheckReport("commutator-ideal-equality", False, {"terms": L}, {"i": i, "element": _coords(wit)})
    ideals = {i: ideal_term(i) for i in range(1, 2 * L + 1)}
    for p in range(1, L + 1):
        for q in range(1, L + 1):
            prod = product_space(alg, ideals[p], ideals[q])
            bad = ideals[p + q - 1].first_outside(prod.matrix) if prod.dim else None
            if bad is not None:
                return ChainCheckReport(
                    "commutator-ideal-equality",
                    False,
                    {"terms": L},
                    {"part": "products", "p": p, "q": q, "element": _coords(prod.matrix[bad])},
                )
    return ChainCheckReport(
        "commutator-ideal-equality", True, {"terms": L}, None, {"H_dims": H.dims, "lie_dims": lcs.dims}
    )


def check_nilpotency_equivalence(alg: StructureAlgebra) -> ChainCheckReport:
    """Lie nilpotent exactly when of finite class; then ``Id([N, N])`` is nilpotent."""
    require_novikov(alg)
    lie_nil = lie_lower_central_series(alg).terminated_at_zero
    cls = class_of(alg)
    details = {"lie_nilpotent": lie_nil, "finite_class": cls is not None, "class": cls}
    if lie_nil != (cls is not None):
        return ChainCheckReport("nilpotency-equivalence", False, {}, {"reason": "verdicts disagree", **details}, details)
    if lie_nil:
        full = alg.full()
        commutator = ideal_closure(alg, bracket_space(alg, full, full))
        powers = power_chain(alg, commutator)
        details["commutator_ideal_power_dims"] = powers.dims
        if not powers.terminated_at_zero:
            return ChainCheckReport(
                "nilpotency-equivalence", False, {}, {"reason": "commutator ideal not nilpotent"}, details
            )
    return ChainCheckReport("nilpotency-equivalence", True, {}, None, details)


CHECKS = {
    "commutator-ideal-formula": lambda alg, trials, seed: check_commutator_ideal_formula(alg, trials, seed),
    "ideal-of-lie-term": lambda alg, trials, seed: check_ideal_generated_by_lie_terms(alg),
    "cyclic-identities": lambda alg, trials, seed: check_cyclic_identities(alg, trials, seed),
    "chain-inclusion": lambda alg, trials, seed: check_chain_inclusion(alg),
    "product-inclusion": lambda alg, trials, seed: check_product_inclusion(alg),
    "commutator-ideal-equality": lambda alg, trials, seed: check_commutator_ideal_equality(alg),
    "nilpotency-equivalence": lambda alg, trials, seed: check_nilpotency_equivalence(alg),
}


def run_checks(alg: StructureAlgebra, names: Sequence[str] | None = None, trials: int = 100, seed: int = 0) -> list[ChainCheckReport]:
    names = list(CHECKS) if names is None else list(names)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    return [CHECKS[name](alg, trials, seed) for name in names]


# -- example family ----------------------------------------------------------------------


def make_truncated_derivation_novikov(n: int, low_degree: int = 0, field: Field = QQ) -> StructureAlgebra:
    """Novikov algebra on ``x^low, ..., x^(n-1)`` with ``a ∘ b = a · db/dx`` mod ``x^n``.

    Basis vector ``d - low_degree`` is ``x^d``.
    """
    if n < 2 or not 0 <= low_degree < n:
        raise ValueError(f"need n >= 2 and 0 <= low_degree < n, got n={n}, low_degree={low_degree}")
    degrees = range(low_degree, n)
    entries = {}
    for a in degrees:
        for b in degrees:
            d = a + b - 1
            if b and low_degree <= d < n:
                entries[(a - low_degree, b - low_degree, d - low_degree)] = b
    alg = StructureAlgebra.from_entries(field, n - low_degree, entries, name=f"x^{low_degree}..x^{n - 1} mod x^{n}")
    return as_novikov(alg)
