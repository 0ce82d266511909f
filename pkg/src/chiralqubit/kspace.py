"""Chiral p-wave order parameter and its unit-vector texture in momentum space.

Natural units throughout: hbar = 1 and 2m = 1, so the band dispersion is
eps_k = k^2 - mu and the Fermi momentum is k_F = sqrt(mu) whenever mu > 0.
The gap function is d_z(k) = delta * (k_x + i*chi*k_y) / k_F and the texture
vector is m(k) = (Re d_z, Im d_z, eps_k).  For mu <= 0 the 1/k_F factor is
dropped; a positive rescaling of the in-plane pair (m_x, m_y) never changes
the degree of the normalized texture, so the topological content survives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class NonpositiveMu(ValueError):
    """Raised where the 1/k_F normalization is requested but mu <= 0."""


class ZeroTexture(ValueError):
    """Raised when the texture vector vanishes and cannot be normalized."""


@dataclass(frozen=True)
class GapParams:
    """Order-parameter parameter set: gap magnitude, chemical potential, chirality.

    chi = +1 selects k_x + i k_y, chi = -1 selects k_x - i k_y.
    """

    delta: float
    mu: float
    chi: int

    def __post_init__(self):
        if not (math.isfinite(self.delta) and self.delta >= 0.0):
            raise ValueError(f"delta must be finite and >= 0, got {self.delta!r}")
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu!r}")
        if self.chi not in (+1, -1):
            raise ValueError(f"chi must be exactly +1 or -1, got {self.chi!r}")
        object.__setattr__(self, "delta", float(self.delta))
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "chi", int(self.chi))

    @property
    def k_fermi(self) -> float:
        if self.mu <= 0.0:
            raise NonpositiveMu(f"k_F = sqrt(mu) undefined for mu = {self.mu}")
        return math.sqrt(self.mu)

    def is_gapped(self) -> bool:
        """True when |m(k)| > 0 everywhere.

        The texture vanishes somewhere iff delta = 0 with mu >= 0 (zero on the
        Fermi circle, or at k = 0 when mu = 0) or mu = 0 (zero at k = 0).
        """
        return self.mu < 0.0 or (self.delta > 0.0 and self.mu > 0.0)

    def _inplane_prefactor(self) -> float:
        return self.delta / math.sqrt(self.mu) if self.mu > 0.0 else self.delta


@dataclass(frozen=True)
class MVector:
    """Texture vector m = (Re d_z, Im d_z, eps_k) at one momentum point."""

    mx: float
    my: float
    mz: float

    def norm(self) -> float:
        return math.sqrt(self.mx * self.mx + self.my * self.my + self.mz * self.mz)

    def normalized(self) -> "MVector":
        n = self.norm()
        if n == 0.0:
            raise ZeroTexture("texture vector is zero, unit vector undefined")
        return MVector(self.mx / n, self.my / n, self.mz / n)

    def as_array(self) -> np.ndarray:
        return np.array([self.mx, self.my, self.mz])


def d_z(k, params: GapParams) -> complex:
    """Gap amplitude delta*(k_x + i*chi*k_y)/k_F at momentum k = (k_x, k_y).

    Requires mu > 0; for mu <= 0 use m_vector, which drops the 1/k_F factor.
    """
    if params.mu <= 0.0:
        raise NonpositiveMu(
            f"d_z normalization needs mu > 0, got mu = {params.mu}; "
            "m_vector handles mu <= 0 with the unnormalized convention"
        )
    kx, ky = k
    return params.delta * (kx + 1j * params.chi * ky) / math.sqrt(params.mu)


def dispersion(k, params: GapParams) -> float:
    """Band energy eps_k = k^2 - mu (units with 2m = 1)."""
    kx, ky = k
    return kx * kx + ky * ky - params.mu


def m_vector(k, params: GapParams) -> MVector:
    """Unnormalized texture vector at momentum k = (k_x, k_y)."""
    kx, ky = k
    pref = params._inplane_prefactor()
    return MVector(pref * kx, pref * params.chi * ky, kx * kx + ky * ky - params.mu)


def m_hat(k, params: GapParams) -> MVector:
    """Unit texture vector m/|m|; raises ZeroTexture where |m| = 0."""
    return m_vector(k, params).normalized()


def texture_field(kx, ky, params: GapParams) -> np.ndarray:
    """Unnormalized texture vectors on momentum arrays, shape kx.shape + (3,)."""
    kx = np.asarray(kx, dtype=float)
    ky = np.asarray(ky, dtype=float)
    pref = params._inplane_prefactor()
    mx, my, mz = np.broadcast_arrays(
        pref * kx, pref * params.chi * ky, kx * kx + ky * ky - params.mu
    )
    return np.stack([mx, my, mz], axis=-1)


def texture_grid(kx, ky, params: GapParams) -> np.ndarray:
    """Unit texture vectors on momentum arrays; raises ZeroTexture on a zero."""
    m = texture_field(kx, ky, params)
    norm = np.linalg.norm(m, axis=-1, keepdims=True)
    if not np.all(norm > 0.0):
        raise ZeroTexture("texture vanishes at a sampled momentum")
    return m / norm
