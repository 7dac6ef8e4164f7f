"""Velocity-potential reconstruction inside the rectangle [0, pi] x [-1, 0].

Two separated-variable series extend boundary data into the tank:

  * the surface extension of a cosine mode,
        phi_k(x) cosh[sqrt(mu) k (y+1)] / cosh(sqrt(mu) k),
    matching the surface trace and flux-free on the other three walls;

  * the wave-maker extension of a lateral mode psi_k(y),
        a_k cosh[c_k (x-pi)] cos[(2k-1) (pi/2) (y+1)],   c_k = (2k-1) pi/(2 sqrt(mu)),
    vanishing on the surface and carrying the lateral flux -v at x = 0.

Both hyperbolic ratios are evaluated in exponent-shifted form; the naive
cosh/sinh quotients overflow once sqrt(mu) k exceeds a few hundred, while the
shifted forms use only nonpositive exponents and stay finite for any mu and
mode index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .basis import SQRT_2_OVER_PI, SQRT_PI, ModalVector, SpectralParams

__all__ = [
    "FieldGrid",
    "LateralProfile",
    "dirichlet_values",
    "dirichlet_extension",
    "neumann_values",
    "neumann_extension",
    "verify_harmonic",
    "write_field_csv",
]


@dataclass(frozen=True, eq=False)
class FieldGrid:
    """Tensor grid in the rectangle; values[i, j] samples the field at (x[i], y[j])."""

    x: np.ndarray
    y: np.ndarray
    values: Optional[np.ndarray] = None

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        if x.size < 2 or y.size < 2:
            raise ValueError("grid needs nx, ny >= 2")
        if np.any(x < 0) or np.any(x > math.pi):
            raise ValueError("grid x must lie in [0, pi]")
        if np.any(y < -1) or np.any(y > 0):
            raise ValueError("grid y must lie in [-1, 0]")
        for arr in (x, y):
            arr.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if self.values is not None:
            v = np.asarray(self.values, dtype=float)
            if v.shape != (x.size, y.size):
                raise ValueError(f"values shape {v.shape} does not match grid ({x.size}, {y.size})")
            if not np.all(np.isfinite(v)):
                raise ValueError("field values must be finite")
            v.flags.writeable = False
            object.__setattr__(self, "values", v)

    @property
    def nx(self) -> int:
        return self.x.size

    @property
    def ny(self) -> int:
        return self.y.size

    @classmethod
    def regular(cls, nx: int, ny: int) -> "FieldGrid":
        """nx-by-ny grid including the boundary."""
        if nx < 2 or ny < 2:
            raise ValueError("grid needs nx, ny >= 2")
        return cls(np.linspace(0.0, math.pi, nx), np.linspace(-1.0, 0.0, ny))

    @classmethod
    def interior(cls, nx: int, ny: int) -> "FieldGrid":
        """nx-by-ny uniform grid strictly inside the rectangle."""
        return cls(np.linspace(0.0, math.pi, nx + 2)[1:-1], np.linspace(-1.0, 0.0, ny + 2)[1:-1])


@dataclass(frozen=True, eq=False)
class LateralProfile:
    """Wave-maker velocity profile by its coefficients in psi_k(y) = sqrt(2) cos[(2k-1)(pi/2)(y+1)]."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if c.ndim != 1 or c.size < 1 or not np.all(np.isfinite(c)):
            raise ValueError("profile coefficients must be a finite 1-d sequence")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def n_modes(self) -> int:
        return self.coeffs.size

    @classmethod
    def single_mode(cls, k: int, n_modes: Optional[int] = None) -> "LateralProfile":
        n = k if n_modes is None else n_modes
        if not 1 <= k <= n:
            raise ValueError(f"lateral mode index {k} outside 1..{n}")
        c = np.zeros(n)
        c[k - 1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, amplitude: float, n_modes: int) -> "LateralProfile":
        """v = amplitude on [-1, 0]: <v, psi_k> = 2 sqrt(2) (-1)^(k+1) amplitude / ((2k-1) pi)."""
        k = np.arange(1, n_modes + 1)
        return cls(2.0 * math.sqrt(2.0) * (-1.0) ** (k + 1) * float(amplitude) / ((2 * k - 1) * math.pi))

    @classmethod
    def from_function(cls, fn, n_modes: int, n_panels: int = 2048) -> "LateralProfile":
        """Project a function on [-1, 0] by composite Simpson quadrature."""
        n = 2 * n_panels + 1
        y = np.linspace(-1.0, 0.0, n)
        w = np.ones(n)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w *= (1.0 / (n - 1)) / 3.0
        vy = np.array([float(fn(yi)) for yi in y])
        if not np.all(np.isfinite(vy)):
            raise ValueError("profile samples must be finite")
        k = np.arange(1, n_modes + 1)
        psi = math.sqrt(2.0) * np.cos((2 * k[:, None] - 1) * (math.pi / 2.0) * (y[None, :] + 1.0))
        return cls(psi @ (w * vy))

    def evaluate(self, y) -> np.ndarray:
        ya = np.atleast_1d(np.asarray(y, dtype=float))
        k = np.arange(1, self.n_modes + 1)
        psi = math.sqrt(2.0) * np.cos((2 * k[None, :] - 1) * (math.pi / 2.0) * (ya[:, None] + 1.0))
        return psi @ self.coeffs


def _basis_x(k: int, x: np.ndarray) -> np.ndarray:
    if k == 0:
        return np.full_like(x, 1.0 / SQRT_PI)
    return SQRT_2_OVER_PI * np.cos(k * x)


def dirichlet_values(eta: ModalVector, params: SpectralParams, x, y) -> np.ndarray:
    """Surface extension field at the tensor points (x_i, y_j), shape (nx, ny).

    Per mode the depth factor cosh[a(y+1)]/cosh(a), a = sqrt(mu) k, is computed
    as exp(a y) (1 + exp(-2a(y+1))) / (1 + exp(-2a)): all exponents <= 0.
    """
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    ya = np.atleast_1d(np.asarray(y, dtype=float))
    rmu = math.sqrt(params.mu)
    out = np.zeros((xa.size, ya.size))
    for k in range(eta.K + 1):
        ck = eta.coeffs[k]
        if ck == 0.0:
            continue
        a = rmu * k
        depth = np.exp(a * ya) * (1.0 + np.exp(-2.0 * a * (ya + 1.0))) / (1.0 + math.exp(-2.0 * a))
        out += ck * np.outer(_basis_x(k, xa), depth)
    return out


def dirichlet_extension(eta: ModalVector, params: SpectralParams, grid: FieldGrid) -> FieldGrid:
    return FieldGrid(grid.x, grid.y, dirichlet_values(eta, params, grid.x, grid.y))


def neumann_values(profile: LateralProfile, params: SpectralParams, x, y) -> np.ndarray:
    """Wave-maker extension field at the tensor points (x_i, y_j), shape (nx, ny).

    Per lateral mode the ratio cosh[c(x-pi)]/sinh(c pi) is computed as
    exp(-c x) (1 + exp(-2c(pi-x))) / (1 - exp(-2 c pi)); the field decays like
    exp(-c_1 x) away from the wave maker (boundary layer of width ~sqrt(mu)).
    """
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    ya = np.atleast_1d(np.asarray(y, dtype=float))
    rmu = math.sqrt(params.mu)
    out = np.zeros((xa.size, ya.size))
    for i in range(profile.n_modes):
        vk = profile.coeffs[i]
        if vk == 0.0:
            continue
        k = i + 1
        c = (2 * k - 1) * math.pi / (2.0 * rmu)
        ratio = np.exp(-c * xa) * (1.0 + np.exp(-2.0 * c * (math.pi - xa))) / (-math.expm1(-2.0 * c * math.pi))
        amp = 2.0 * math.sqrt(2.0 * params.mu) * vk / ((2 * k - 1) * math.pi)
        lateral = np.cos((2 * k - 1) * (math.pi / 2.0) * (ya + 1.0))
        out += amp * np.outer(ratio, lateral)
    return out


def neumann_extension(profile: LateralProfile, params: SpectralParams, grid: FieldGrid) -> FieldGrid:
    return FieldGrid(grid.x, grid.y, neumann_values(profile, params, grid.x, grid.y))


def verify_harmonic(
    values_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    params: SpectralParams,
    x,
    y,
    h: float = 1e-3,
) -> float:
    """Max |mu d2/dx2 + d2/dy2| residual over the tensor points, by 5-point stencils.

    values_fn(x, y) must return the field on the tensor grid.  The residual of
    an exact separated solution is O(h^2); points must keep distance h from
    the boundary so the stencil stays inside the rectangle.
    """
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    ya = np.atleast_1d(np.asarray(y, dtype=float))
    if h <= 0:
        raise ValueError("stencil step h must be positive")
    if np.any(xa - h < 0) or np.any(xa + h > math.pi) or np.any(ya - h < -1) or np.any(ya + h > 0):
        raise ValueError("stencil points must lie strictly inside the rectangle (margin h)")
    f0 = values_fn(xa, ya)
    d2x = (values_fn(xa + h, ya) - 2.0 * f0 + values_fn(xa - h, ya)) / h**2
    d2y = (values_fn(xa, ya + h) - 2.0 * f0 + values_fn(xa, ya - h)) / h**2
    return float(np.abs(params.mu * d2x + d2y).max())


def write_field_csv(grid: FieldGrid, path) -> None:
    """Serialize a filled grid as x,y,value rows (x outer, y inner), 17 significant digits."""
    if grid.values is None:
        raise ValueError("grid has no values to serialize")
    lines = ["x,y,value"]
    for i in range(grid.nx):
        for j in range(grid.ny):
            lines.append(f"{grid.x[i]:.17g},{grid.y[j]:.17g},{grid.values[i, j]:.17g}")
    with open(path, "wb") as fh:
        fh.write(("\n".join(lines) + "\n").encode("ascii"))
