"""Topological chirality number of the p-wave texture, by two independent methods.

The invariant is the degree of the map k -> m_hat(k) from the compactified
momentum plane to the unit sphere,

    N = (1/4pi) integral  m_hat . (d m_hat/dk_x x d m_hat/dk_y)  dk_x dk_y,

with the plane orientation fixed so that chi = +1 with mu > 0 gives N = +1.

Two estimators are provided and must agree:

* chern_quadrature: finite-difference derivatives of the texture summed with
  the trapezoid rule.  Derivatives are evaluated by central differencing of
  the unnormalized field followed by the exact unit-normalization chain rule;
  differencing the normalized vectors directly loses two to three digits and
  fails the convergence bound on grids where this form is already exact.
* chern_plaquette: the discrete degree.  Each mesh cell contributes the
  signed solid angle of the spherical quadrilateral spanned by m_hat at its
  corners (two-triangle split, Van Oosterom-Strackee angles).

Both estimators close the finite integration square by coning its boundary
image to the north pole +z (the image of k -> infinity), which accounts for
the truncated tail.  For the plaquette method this closure makes the sum of
signed triangle areas an exact multiple of 4pi up to float rounding, so its
residual reflects numerical noise only.  The failure mode of a too-coarse
plaquette mesh is a silently wrong integer, which is why cross_validate runs
both methods and insists they agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kspace import GapParams, texture_field

RESIDUAL_LIMIT = 1e-3
ANTIPODAL_TOL = 1e-9
_POLE = np.array([0.0, 0.0, 1.0])
_trapezoid = getattr(np, "trapezoid", None) or getattr(np, "trapz")


class GaplessTexture(ValueError):
    """The texture has a zero, the invariant is undefined."""


class DegeneratePlaquette(ValueError):
    """Two plaquette corners are antipodal; the solid angle split is ill-defined."""


class MethodDisagreement(RuntimeError):
    """The two converged estimators disagree; indicates an implementation bug."""


class NotConverged(RuntimeError):
    """Accumulated value is too far from an integer to report an invariant.

    Carries the offending partial result in the ``result`` attribute.
    """

    def __init__(self, result: "ChernResult"):
        self.result = result
        super().__init__(
            f"raw value {result.raw} is {result.residual:.3e} from the nearest "
            f"integer (limit {RESIDUAL_LIMIT:g}) at n_grid={result.grid_size}"
        )


@dataclass(frozen=True)
class ChernResult:
    n_integer: int
    raw: float
    residual: float
    grid_size: int
    k_max: float
    method: str


@dataclass(frozen=True)
class CrossValidation:
    quadrature: ChernResult
    plaquette: ChernResult

    @property
    def n_integer(self) -> int:
        return self.plaquette.n_integer


def default_k_max(params: GapParams) -> float:
    """Integration cutoff 8 * max(sqrt(max(mu,0)), delta, 1)."""
    return 8.0 * max(math.sqrt(max(params.mu, 0.0)), params.delta, 1.0)


def _check_inputs(params: GapParams, k_max: float, n_grid: int) -> None:
    if not params.is_gapped():
        if params.delta == 0.0:
            raise GaplessTexture(
                f"delta = 0 with mu = {params.mu} >= 0: texture vanishes "
                "where eps_k = 0, invariant undefined"
            )
        raise GaplessTexture(
            "mu = 0 is the transition point: texture vanishes at k = 0, "
            "invariant undefined"
        )
    floor = 3.0 * max(math.sqrt(max(params.mu, 0.0)), params.delta, 1.0)
    if not k_max > floor:
        raise ValueError(f"k_max must exceed {floor:g} for these parameters, got {k_max}")
    if n_grid < 32:
        raise ValueError(f"n_grid must be >= 32, got {n_grid}")


def _mesh(k_max: float, n_grid: int) -> tuple[np.ndarray, float]:
    # nodes sit half a cell off k = 0 so texture zeros at the origin are never sampled
    h = 2.0 * k_max / n_grid
    return -k_max + (np.arange(n_grid) + 0.5) * h, h


def _unit_grid(params: GapParams, x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    kx, ky = np.meshgrid(x, x, indexing="ij")
    m = texture_field(kx, ky, params)
    norm = np.linalg.norm(m, axis=-1, keepdims=True)
    return m / norm, m, norm


def _solid_angle(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Signed solid angle of the spherical triangle (a, b, c), vectorized."""
    num = np.einsum("...i,...i->...", a, np.cross(b, c))
    den = (
        1.0
        + np.einsum("...i,...i->...", a, b)
        + np.einsum("...i,...i->...", b, c)
        + np.einsum("...i,...i->...", a, c)
    )
    return 2.0 * np.arctan2(num, den)


def _boundary_loop(unit: np.ndarray) -> np.ndarray:
    """Mesh boundary traversed counterclockwise in the (k_x, k_y) plane."""
    return np.concatenate(
        [unit[:-1, 0], unit[-1, :-1], unit[::-1, -1][:-1], unit[0, ::-1][:-1]], axis=0
    )


def _cap_closure(unit: np.ndarray) -> float:
    """Solid angle of the cone closing the boundary loop onto the north pole."""
    loop = _boundary_loop(unit)
    nxt = np.roll(loop, -1, axis=0)
    pole = np.broadcast_to(_POLE, loop.shape)
    return float(_solid_angle(loop, pole, nxt).sum())


def _finish(total_solid_angle: float, n_grid: int, k_max: float, method: str) -> ChernResult:
    # overall sign fixes the orientation convention N(chi=+1, mu>0) = +1
    raw = -total_solid_angle / (4.0 * math.pi)
    n_int = int(round(raw))
    residual = abs(raw - n_int)
    result = ChernResult(n_int, raw, residual, n_grid, k_max, method)
    if residual >= RESIDUAL_LIMIT:
        raise NotConverged(result)
    return result


def chern_quadrature(params: GapParams, k_max: float, n_grid: int) -> ChernResult:
    """Invariant via finite-difference derivatives and the trapezoid rule."""
    _check_inputs(params, k_max, n_grid)
    x, h = _mesh(k_max, n_grid)
    unit, m, norm = _unit_grid(params, x)

    dxm = np.gradient(m, h, axis=0, edge_order=2)
    dym = np.gradient(m, h, axis=1, edge_order=2)
    # d m_hat = (dm - m_hat (m_hat . dm)) / |m|
    dxu = (dxm - unit * np.einsum("ijk,ijk->ij", unit, dxm)[..., None]) / norm
    dyu = (dym - unit * np.einsum("ijk,ijk->ij", unit, dym)[..., None]) / norm

    integrand = np.einsum("ijk,ijk->ij", unit, np.cross(dxu, dyu))
    total = _trapezoid(_trapezoid(integrand, x, axis=1), x, axis=0)
    return _finish(total + _cap_closure(unit), n_grid, k_max, "quadrature")


def chern_plaquette(params: GapParams, k_max: float, n_grid: int) -> ChernResult:
    """Invariant via the discrete degree (signed spherical plaquette areas)."""
    _check_inputs(params, k_max, n_grid)
    x, _ = _mesh(k_max, n_grid)
    unit, _, _ = _unit_grid(params, x)

    a = unit[:-1, :-1]
    b = unit[1:, :-1]
    c = unit[1:, 1:]
    d = unit[:-1, 1:]
    worst = min(
        np.einsum("...i,...i->...", p, q).min()
        for p, q in ((a, b), (a, c), (a, d), (b, c), (b, d), (c, d))
    )
    if worst <= -1.0 + ANTIPODAL_TOL:
        raise DegeneratePlaquette(
            "two plaquette corners are antipodal within "
            f"{ANTIPODAL_TOL:g}; refine the grid"
        )
    interior = _solid_angle(a, b, c).sum() + _solid_angle(a, c, d).sum()
    return _finish(interior + _cap_closure(unit), n_grid, k_max, "plaquette")


def _conditioned(params: GapParams) -> GapParams:
    """Equivalent parameters with a well-conditioned texture.

    Rescaling the in-plane pair (m_x, m_y) by a positive constant is a
    homotopy of the unit texture (the norm never vanishes for gapped
    parameters), so the degree is unchanged.  Setting the effective gap to
    k_F (or to 1 when mu <= 0) makes every texture feature live on the same
    O(max(sqrt(mu), 1)) momentum scale, which uniform meshes resolve cheaply.
    """
    if params.mu > 0.0:
        return GapParams(math.sqrt(params.mu), params.mu, params.chi)
    return GapParams(1.0, params.mu, params.chi)


def cross_validate(
    params: GapParams,
    k_max: float | None = None,
    n_grid_start: int = 128,
    n_grid_max: int = 1024,
) -> CrossValidation:
    """Run both estimators at escalating resolution and require agreement.

    With k_max = None the texture is first rescaled to its well-conditioned
    equivalent (same invariant) and the cutoff is chosen automatically; an
    explicit k_max evaluates the parameters exactly as given.
    """
    if not params.is_gapped():
        _check_inputs(params, math.inf, n_grid_start)
    work = params if k_max is not None else _conditioned(params)
    cutoff = k_max if k_max is not None else default_k_max(work)

    n_grid = n_grid_start
    last_exc: Exception | None = None
    while n_grid <= n_grid_max:
        try:
            quad = chern_quadrature(work, cutoff, n_grid)
            plaq = chern_plaquette(work, cutoff, n_grid)
        except (NotConverged, DegeneratePlaquette) as exc:
            last_exc = exc
            n_grid *= 2
            continue
        if quad.n_integer != plaq.n_integer:
            raise MethodDisagreement(
                f"quadrature reports {quad.n_integer} but plaquette reports "
                f"{plaq.n_integer} at n_grid={n_grid}"
            )
        return CrossValidation(quadrature=quad, plaquette=plaq)
    raise last_exc
