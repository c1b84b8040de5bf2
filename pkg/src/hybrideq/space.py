"""Finite-dimensional p-norm space model.

R^d carries the p-norm for an exponent p in (1, infinity); its dual is R^d
with the conjugate q-norm, 1/p + 1/q = 1, paired by the ordinary dot
product.  The normalized duality map J sends a primal vector x to the dual
vector w with <x, w> = |x|_p^2 and |w|_q = |x|_p; in these coordinates it
has the analytic form

    (Jx)_i = |x|_p^(2-p) * |x_i|^(p-1) * sign(x_i),

with J0 = 0 by convention.  The inverse map is the duality map of the dual
space (exponent q).  For p = 2 both maps are the identity and the space is
Euclidean ("Hilbert mode").

The functional phi(x, y) = |x|^2 - 2<x, Jy> + |y|^2 plays the role of a
squared distance; it reduces to |x - y|^2 at p = 2 and is bounded between
(|x| - |y|)^2 and (|x| + |y|)^2 in general.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

EXPONENT_MIN = 1.1
EXPONENT_MAX = 10.0


@dataclass(frozen=True)
class SpaceConfig:
    """Dimension and norm exponent of the ambient space.

    The conjugate exponent is derived and stored.  Exponents outside
    [1.1, 10] are rejected: |t|^(p-1) becomes numerically treacherous
    beyond that band and the package's tolerances stop being meaningful.
    """

    dimension: int
    exponent: float
    conjugate: float = field(init=False)

    def __post_init__(self):
        if not isinstance(self.dimension, (int, np.integer)) or self.dimension < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dimension!r}")
        p = float(self.exponent)
        if not (EXPONENT_MIN <= p <= EXPONENT_MAX):
            raise ValueError(
                f"exponent must lie in [{EXPONENT_MIN}, {EXPONENT_MAX}], got {p}"
            )
        object.__setattr__(self, "dimension", int(self.dimension))
        object.__setattr__(self, "exponent", p)
        object.__setattr__(self, "conjugate", p / (p - 1.0))

    @property
    def is_hilbert(self) -> bool:
        return self.exponent == 2.0


def _as_coords(values, dimension: int) -> np.ndarray:
    coords = np.asarray(values, dtype=float)
    if coords.shape != (dimension,):
        raise ValueError(f"expected a vector of length {dimension}, got shape {coords.shape}")
    if not np.all(np.isfinite(coords)):
        raise ValueError("coordinates must be finite")
    coords = coords.copy()
    coords.setflags(write=False)
    return coords


@dataclass(frozen=True)
class PrimalPoint:
    """A point of the primal space, tagged with its space configuration."""

    coords: np.ndarray
    space: SpaceConfig

    def __post_init__(self):
        object.__setattr__(self, "coords", _as_coords(self.coords, self.space.dimension))

    @property
    def norm(self) -> float:
        return pnorm(self.coords, self.space.exponent)


@dataclass(frozen=True)
class DualPoint:
    """A point of the dual space (q-norm side); houses values of J and of the maps T."""

    coords: np.ndarray
    space: SpaceConfig

    def __post_init__(self):
        object.__setattr__(self, "coords", _as_coords(self.coords, self.space.dimension))

    @property
    def norm(self) -> float:
        return pnorm(self.coords, self.space.conjugate)


def pnorm(v: np.ndarray, exponent: float) -> float:
    """The exponent-norm of a raw coordinate vector."""
    if exponent == 2.0:
        return float(np.sqrt(np.dot(v, v)))
    return float(np.sum(np.abs(v) ** exponent) ** (1.0 / exponent))


def pairing(primal: np.ndarray, dual: np.ndarray) -> float:
    """Canonical duality pairing <x, w> (the dot product in coordinates)."""
    return float(np.dot(primal, dual))


def gauge_coords(v: np.ndarray, exponent: float) -> np.ndarray:
    """Coordinates of the normalized duality map for the given norm exponent.

    Total on finite inputs; maps 0 to 0 explicitly, guarding the
    |v|^(2 - exponent) prefactor, which is 0 to a negative power when
    exponent > 2.
    """
    if exponent == 2.0:
        return np.array(v, dtype=float)
    nrm = pnorm(v, exponent)
    if nrm == 0.0:
        return np.zeros_like(np.asarray(v, dtype=float))
    return nrm ** (2.0 - exponent) * np.abs(v) ** (exponent - 1.0) * np.sign(v)


def duality_map(x: PrimalPoint) -> DualPoint:
    """The normalized duality map J: primal -> dual.

    Satisfies <x, Jx> = |x|_p^2 and |Jx|_q = |x|_p; identity at p = 2.
    """
    return DualPoint(gauge_coords(x.coords, x.space.exponent), x.space)


def inverse_duality_map(w: DualPoint) -> PrimalPoint:
    """The inverse duality map J* = J^{-1}: dual -> primal (duality map of the dual)."""
    return PrimalPoint(gauge_coords(w.coords, w.space.conjugate), w.space)


def duality_jacobian(v: np.ndarray, exponent: float) -> np.ndarray:
    """Jacobian of the duality map at v (the Hessian of 0.5 * |.|_p^2).

    Symmetric positive semidefinite; undefined at v = 0 (the map is only
    positively homogeneous there), where the zero matrix is returned as a
    usable surrogate for gradient-based inner solvers.
    """
    v = np.asarray(v, dtype=float)
    d = v.shape[0]
    if exponent == 2.0:
        return np.eye(d)
    nrm = pnorm(v, exponent)
    if nrm == 0.0:
        return np.zeros((d, d))
    s = np.abs(v) ** (exponent - 1.0) * np.sign(v)
    diag = (exponent - 1.0) * nrm ** (2.0 - exponent) * np.abs(v) ** (exponent - 2.0)
    jac = (2.0 - exponent) * nrm ** (2.0 - 2.0 * exponent) * np.outer(s, s)
    jac[np.diag_indices(d)] += diag
    return jac


def phi_coords(xc: np.ndarray, yc: np.ndarray, exponent: float) -> float:
    """phi on raw coordinates: |x|^2 - 2 <x, Jy> + |y|^2 with the p-norm."""
    jy = gauge_coords(yc, exponent)
    nx = pnorm(xc, exponent)
    ny = pnorm(yc, exponent)
    return nx * nx - 2.0 * float(np.dot(xc, jy)) + ny * ny


def lyapunov_phi(x: PrimalPoint, y: PrimalPoint) -> float:
    """The Lyapunov functional phi(x, y); nonnegative, zero iff x = y.

    Lies in [(|x| - |y|)^2, (|x| + |y|)^2] and equals |x - y|^2 at p = 2.
    """
    if x.space != y.space:
        raise ValueError("x and y must live in the same space")
    return phi_coords(x.coords, y.coords, x.space.exponent)
