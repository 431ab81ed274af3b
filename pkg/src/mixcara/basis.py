"""Finite monomial function systems and their pointwise evaluation.

A basis is an ordered set of distinct monomials ``x^alpha`` in ``n`` variables,
canonically sorted by (total degree, lexicographic) order.  Exponent gaps are
allowed, e.g. ``{1, x^2, x^3, x^5, x^6}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["MonomialBasis", "eval_point", "eval_jacobian"]


@dataclass(frozen=True)
class MonomialBasis:
    """Ordered system of distinct monomials in ``n`` variables.

    The exponent order given at construction does not matter: exponents are
    sorted canonically, so two bases built from permuted exponent lists
    compare equal.  The convention ``0**0 == 1`` makes the constant monomial
    evaluate to 1 everywhere.
    """

    n: int
    exponents: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"variable count must be a positive integer, got {self.n!r}")
        exps = [tuple(int(e) for e in alpha) for alpha in self.exponents]
        if not exps:
            raise ValueError("basis needs at least one exponent")
        for alpha in exps:
            if len(alpha) != self.n:
                raise ValueError(f"exponent {alpha} has length {len(alpha)}, expected {self.n}")
            if any(e < 0 for e in alpha):
                raise ValueError(f"exponent {alpha} has a negative entry")
        if len(set(exps)) != len(exps):
            raise ValueError("exponents must be pairwise distinct")
        # graded order; within a degree class, higher power of the first
        # variable first, so n=2 degree 1 lists as x1 then x2
        exps.sort(key=lambda a: (sum(a), tuple(-e for e in a)))
        object.__setattr__(self, "exponents", tuple(exps))
        object.__setattr__(self, "_exp_array", np.array(exps, dtype=np.int64))

    @property
    def m(self) -> int:
        return len(self.exponents)

    @property
    def max_degree(self) -> int:
        return max(sum(alpha) for alpha in self.exponents)

    @property
    def exponent_array(self) -> np.ndarray:
        return self._exp_array  # type: ignore[attr-defined]

    def is_univariate(self) -> bool:
        return self.n == 1

    def univariate_degrees(self) -> tuple[int, ...]:
        if self.n != 1:
            raise ValueError("univariate_degrees requires n == 1")
        return tuple(alpha[0] for alpha in self.exponents)

    def is_full_degree(self) -> bool:
        """True when the basis is the gap-free univariate system {1, x, ..., x^d}."""
        return self.n == 1 and self.univariate_degrees() == tuple(range(self.max_degree + 1))

    @classmethod
    def univariate(cls, degrees) -> "MonomialBasis":
        return cls(n=1, exponents=tuple((int(d),) for d in degrees))

    @classmethod
    def full_degree(cls, d: int, n: int = 1) -> "MonomialBasis":
        """All monomials of total degree at most ``d`` in ``n`` variables."""
        if d < 0:
            raise ValueError("degree must be >= 0")
        if n == 1:
            return cls.univariate(range(d + 1))
        exps: list[tuple[int, ...]] = []

        def rec(prefix: tuple[int, ...], remaining: int, budget: int) -> None:
            if remaining == 1:
                for e in range(budget + 1):
                    exps.append(prefix + (e,))
                return
            for e in range(budget + 1):
                rec(prefix + (e,), remaining - 1, budget - e)

        rec((), n, d)
        return cls(n=n, exponents=tuple(exps))

    def to_json(self) -> dict:
        return {"n": self.n, "exponents": [list(a) for a in self.exponents]}

    @classmethod
    def from_json(cls, data: dict) -> "MonomialBasis":
        return cls(n=int(data["n"]), exponents=tuple(tuple(a) for a in data["exponents"]))


def _as_point(x, n: int) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1 or arr.shape[0] != n:
        raise ValueError(f"point has shape {np.shape(x)}, expected ({n},)")
    return arr


def eval_point(basis: MonomialBasis, x) -> np.ndarray:
    """Evaluate every basis monomial at ``x``, returning a length-m vector."""
    pt = _as_point(x, basis.n)
    # 0.0 ** 0 == 1.0 under numpy, which is the convention we rely on
    return np.prod(pt[None, :] ** basis.exponent_array, axis=1)


def eval_jacobian(basis: MonomialBasis, x) -> np.ndarray:
    """Partial derivatives of the basis monomials at ``x`` as an m-by-n matrix."""
    pt = _as_point(x, basis.n)
    exps = basis.exponent_array
    m, n = exps.shape
    powers = pt[None, :] ** exps
    jac = np.zeros((m, n))
    for j in range(n):
        lowered = exps[:, j] - 1
        dj = np.where(exps[:, j] > 0, pt[j] ** np.maximum(lowered, 0), 0.0)
        others = np.prod(np.delete(powers, j, axis=1), axis=1) if n > 1 else np.ones(m)
        jac[:, j] = exps[:, j] * dj * others
    return jac
