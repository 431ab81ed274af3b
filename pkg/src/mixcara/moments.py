"""Forward moment maps for Dirac measures and Gaussian/log-normal mixtures.

The Gaussian case is handled through exact polynomial tables: integrating a
monomial ``x^i`` against a Gaussian centred at ``x`` with scale ``sigma``
gives a polynomial in ``(x, sigma)`` with integer coefficients.  Those
polynomials satisfy the recurrence

    p_0 = 1,   p_1 = x,   p_i = x * p_{i-1} + (i - 1) * sigma**2 * p_{i-2},

and factor across coordinates for isotropic scales, so all tables are built
once per basis and evaluated as needed.  Log-normal moments come from the
closed form ``xi**i * exp(i**2 * sigma**2 / 2)``, computed in log space so
overflow is reported instead of returning ``inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import MonomialBasis, eval_point
from .errors import MomentOverflowError, UnsupportedBasisError
from .measures import AtomicMeasure, MixtureMeasure

__all__ = [
    "MomentVector",
    "SmoothedBasis",
    "gaussian_smoothed_basis",
    "lognormal_moment",
    "dirac_moments",
    "mixture_moments",
    "component_moment_vector",
    "transfer_matrix_gaussian",
]

# A smoothed polynomial is stored as {(beta, sigma_power): integer coefficient}
# where beta is the monomial multi-index in the location variables.
SmoothedPoly = dict[tuple[tuple[int, ...], int], int]

_MAX_EXP_ARG = math.log(np.finfo(float).max)  # ~709.78


@dataclass(frozen=True, eq=False)
class MomentVector:
    """A point of the moment cone, tagged with the basis it lives over."""

    values: np.ndarray
    basis: MonomialBasis
    kind_tag: str | None = None

    def __post_init__(self) -> None:
        vals = np.atleast_1d(np.asarray(self.values, dtype=float))
        if vals.shape != (self.basis.m,):
            raise ValueError(f"expected {self.basis.m} moment values, got shape {vals.shape}")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def with_values(self, values, kind_tag: str | None = None) -> "MomentVector":
        return MomentVector(values=np.asarray(values, dtype=float), basis=self.basis, kind_tag=kind_tag)

    def to_json(self) -> dict:
        data = {"basis": self.basis.to_json(), "values": [float(v) for v in self.values]}
        if self.kind_tag is not None:
            data["kind_tag"] = self.kind_tag
        return data

    @classmethod
    def from_json(cls, data: dict) -> "MomentVector":
        return cls(
            values=np.array(data["values"], dtype=float),
            basis=MonomialBasis.from_json(data["basis"]),
            kind_tag=data.get("kind_tag"),
        )


def _univariate_tables(max_exp: int) -> list[dict[tuple[int, int], int]]:
    """Integer tables of the smoothed monomials in one variable.

    Entry ``i`` maps (x_power, sigma_power) to the coefficient in the
    polynomial for exponent ``i``; only even sigma powers occur.
    """
    tables: list[dict[tuple[int, int], int]] = [{(0, 0): 1}]
    if max_exp >= 1:
        tables.append({(1, 0): 1})
    for i in range(2, max_exp + 1):
        table: dict[tuple[int, int], int] = {}
        for (xp, sp), c in tables[i - 1].items():
            key = (xp + 1, sp)
            table[key] = table.get(key, 0) + c
        for (xp, sp), c in tables[i - 2].items():
            key = (xp, sp + 2)
            table[key] = table.get(key, 0) + (i - 1) * c
        tables.append(table)
    return tables


@dataclass(frozen=True, eq=False)
class SmoothedBasis:
    """Exact coefficient tables of the Gaussian-smoothed basis monomials.

    ``polynomials[i]`` is the table for the i-th basis exponent: a map from
    ``(beta, sigma_power)`` to an integer coefficient, with leading term
    ``x^alpha`` (coefficient 1) and only even sigma powers.  Setting
    ``sigma = 0`` recovers the plain monomial.
    """

    basis: MonomialBasis
    polynomials: tuple[SmoothedPoly, ...]

    def eval_components(self, xi, sigma: float) -> np.ndarray:
        """Vector of smoothed monomials at location ``xi`` and scale ``sigma``."""
        pt = np.atleast_1d(np.asarray(xi, dtype=float))
        if pt.shape != (self.basis.n,):
            raise ValueError(f"location has shape {pt.shape}, expected ({self.basis.n},)")
        out = np.empty(self.basis.m)
        for i, poly in enumerate(self.polynomials):
            out[i] = _poly_eval(poly, pt, sigma)
        return out

    def eval_mean_derivative(self, j: int, xi, sigma: float) -> np.ndarray:
        pt = np.atleast_1d(np.asarray(xi, dtype=float))
        out = np.empty(self.basis.m)
        for i, poly in enumerate(self.polynomials):
            out[i] = _poly_eval(_poly_dx(poly, j), pt, sigma)
        return out

    def eval_sigma_derivative(self, xi, sigma: float) -> np.ndarray:
        pt = np.atleast_1d(np.asarray(xi, dtype=float))
        out = np.empty(self.basis.m)
        for i, poly in enumerate(self.polynomials):
            out[i] = _poly_eval(_poly_dsigma(poly), pt, sigma)
        return out


def _poly_eval(poly: SmoothedPoly, pt: np.ndarray, sigma: float) -> float:
    total = 0.0
    for (beta, sp), coef in poly.items():
        term = float(coef)
        for x, b in zip(pt, beta):
            if b:
                term *= x**b
        if sp:
            term *= sigma**sp
        total += term
    return total


def _poly_dx(poly: SmoothedPoly, j: int) -> SmoothedPoly:
    out: SmoothedPoly = {}
    for (beta, sp), coef in poly.items():
        if beta[j] == 0:
            continue
        lowered = tuple(b - 1 if idx == j else b for idx, b in enumerate(beta))
        key = (lowered, sp)
        out[key] = out.get(key, 0) + coef * beta[j]
    return out


def _poly_dsigma(poly: SmoothedPoly) -> SmoothedPoly:
    out: SmoothedPoly = {}
    for (beta, sp), coef in poly.items():
        if sp == 0:
            continue
        key = (beta, sp - 1)
        out[key] = out.get(key, 0) + coef * sp
    return out


def gaussian_smoothed_basis(basis: MonomialBasis) -> SmoothedBasis:
    """Build the exact smoothed-polynomial tables for every basis exponent.

    Multivariate exponents factor coordinate-wise because the scale is
    isotropic, so each table is a product of univariate tables.
    """
    max_exp = int(basis.exponent_array.max()) if basis.m else 0
    tables = _univariate_tables(max_exp)
    polys = []
    for alpha in basis.exponents:
        acc: SmoothedPoly = {((), 0): 1}
        for a_j in alpha:
            nxt: SmoothedPoly = {}
            for (beta, sp), c in acc.items():
                for (xp, sp2), c2 in tables[a_j].items():
                    key = (beta + (xp,), sp + sp2)
                    nxt[key] = nxt.get(key, 0) + c * c2
            acc = nxt
        polys.append(acc)
    return SmoothedBasis(basis=basis, polynomials=tuple(polys))


def lognormal_moment(i: int, xi: float, sigma: float) -> float:
    """Raw moment of order ``i`` of a log-normal component.

    Evaluated in log space; exponents in the tens of thousands overflow the
    float range and raise instead of silently returning ``inf``.
    """
    if i < 0 or int(i) != i:
        raise ValueError(f"moment order must be a nonnegative integer, got {i!r}")
    if xi <= 0 or sigma <= 0:
        raise ValueError(f"need xi > 0 and sigma > 0, got xi={xi}, sigma={sigma}")
    if i == 0:
        return 1.0
    log_value = i * math.log(xi) + 0.5 * i * i * sigma * sigma
    if log_value > _MAX_EXP_ARG:
        raise MomentOverflowError(
            f"moment of order {i} at xi={xi}, sigma={sigma} exceeds the float range"
        )
    return math.exp(log_value)


def dirac_moments(basis: MonomialBasis, mu: AtomicMeasure) -> MomentVector:
    """Moment vector of a finitely atomic measure; empty measures give zero."""
    if mu.k and mu.n != basis.n:
        raise ValueError(f"measure has dimension {mu.n}, basis expects {basis.n}")
    values = np.zeros(basis.m)
    for c, x in zip(mu.weights, mu.points):
        values += c * eval_point(basis, x)
    return MomentVector(values=values, basis=basis, kind_tag="dirac")


def component_moment_vector(
    basis: MonomialBasis,
    kind: str,
    xi,
    sigma: float,
    smoothed: SmoothedBasis | None = None,
) -> np.ndarray:
    """Moment vector of a single unit-mass component of the given kind."""
    if kind == "gaussian":
        if smoothed is None:
            smoothed = gaussian_smoothed_basis(basis)
        return smoothed.eval_components(xi, sigma)
    if kind == "lognormal":
        if basis.n != 1:
            raise UnsupportedBasisError("log-normal moments are univariate")
        loc = float(np.atleast_1d(xi)[0])
        return np.array(
            [lognormal_moment(d, loc, sigma) for d in basis.univariate_degrees()]
        )
    raise ValueError(f"unknown kind {kind!r}")


def mixture_moments(
    basis: MonomialBasis,
    mu: MixtureMeasure,
    smoothed: SmoothedBasis | None = None,
) -> MomentVector:
    """Moment vector of a finite mixture."""
    if mu.kind == "lognormal" and basis.n != 1:
        raise UnsupportedBasisError("log-normal mixtures need a univariate basis")
    if mu.k and mu.n != basis.n:
        raise ValueError(f"mixture has dimension {mu.n}, basis expects {basis.n}")
    if mu.kind == "gaussian" and smoothed is None:
        smoothed = gaussian_smoothed_basis(basis)
    values = np.zeros(basis.m)
    for c, xi, s in mu.components():
        values += c * component_moment_vector(basis, mu.kind, xi, s, smoothed)
    return MomentVector(values=values, basis=basis, kind_tag=mu.kind)


def transfer_matrix_gaussian(basis: MonomialBasis, sigma: float) -> np.ndarray:
    """Matrix sending full-degree Dirac moments to shared-scale Gaussian moments.

    Row ``i`` holds the coefficients of the smoothed polynomial for the i-th
    basis exponent in the monomial basis ``{1, x, ..., x^max_degree}``.  For a
    gap-free univariate basis the matrix is square, unit lower-triangular and
    therefore invertible for every ``sigma``.
    """
    if basis.n != 1:
        raise UnsupportedBasisError("the transfer matrix is defined for univariate bases")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    smoothed = gaussian_smoothed_basis(basis)
    cols = basis.max_degree + 1
    M = np.zeros((basis.m, cols))
    for i, poly in enumerate(smoothed.polynomials):
        for (beta, sp), coef in poly.items():
            M[i, beta[0]] += coef * sigma**sp
    return M
