"""Linear Schroedinger propagator on the irrational torus and the Duhamel map.

Everything here is a diagonal Fourier multiplier: the propagator multiplies
mode xi by e^{-i*laplace_scale*t*Q(xi)}, and the Duhamel integral is a
per-mode time quadrature.  The trapezoid rule is used for Duhamel (the
forcing is only as smooth in t as the path), organized so the whole path of
partial integrals costs one cumulative pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import SpectralField, TorusMetric, q_grid
from .nonlinearity import PowerNonlinearity, apply_F
from .norms import SpaceTimePath, TimeGrid


@dataclass(frozen=True)
class PropagatorPlan:
    """Cached one-step phases e^{-i*laplace_scale*Q(xi)*dt} for a fixed dt."""

    metric: TorusMetric
    bandlimit: int
    dt: float
    phases: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        q = q_grid(self.metric, self.bandlimit)
        ph = np.exp(-1j * self.metric.laplace_scale * self.dt * q)
        ph.flags.writeable = False
        object.__setattr__(self, "phases", ph)

    def step(self, field_: SpectralField) -> SpectralField:
        return field_.with_coeffs(field_.coeffs * self.phases)


def propagate(field_: SpectralField, t: float) -> SpectralField:
    """e^{itDelta}: multiply mode xi by e^{-i*laplace_scale*t*Q(xi)}."""
    q = q_grid(field_.metric, field_.bandlimit)
    return field_.with_coeffs(field_.coeffs * np.exp(-1j * field_.metric.laplace_scale * t * q))


def free_flow_path(u0: SpectralField, grid: TimeGrid) -> SpaceTimePath:
    """The linear evolution e^{it Delta}u0 sampled on the time grid."""
    q = q_grid(u0.metric, u0.bandlimit)
    t = grid.times
    phases = np.exp(-1j * u0.metric.laplace_scale * t[:, None, None, None] * q[None])
    return SpaceTimePath(grid, u0.metric, u0.bandlimit, phases * u0.coeffs[None])


def _duhamel_partials(forcing: SpaceTimePath) -> np.ndarray:
    """All partial integrals I(t_k) = int_0^{t_k} e^{-i c (t_k - s) Q} F_hat(s) ds.

    Written as e^{-i c t_k Q} * cumtrapz(e^{+i c s Q} F_hat(s)); one
    cumulative trapezoid pass over the grid serves every k at once.
    """
    c = forcing.metric.laplace_scale
    q = q_grid(forcing.metric, forcing.bandlimit)[None]
    t = forcing.grid.times[:, None, None, None]
    integrand = np.exp(1j * c * t * q) * forcing.coeffs
    dt = forcing.grid.dt
    cum = np.zeros_like(integrand)
    cum[1:] = np.cumsum(0.5 * dt * (integrand[1:] + integrand[:-1]), axis=0)
    return np.exp(-1j * c * t * q) * cum


def duhamel_integral(forcing: SpaceTimePath, t_index: int) -> SpectralField:
    """Trapezoid quadrature of int_0^{t_k} e^{i(t_k-s)Delta} F(s) ds."""
    if not 0 <= t_index < forcing.grid.n:
        raise IndexError(f"t_index {t_index} outside grid of size {forcing.grid.n}")
    partial = _duhamel_partials(forcing)[t_index]
    return SpectralField(forcing.metric, forcing.bandlimit, partial)


def duhamel_operator(
    u: SpaceTimePath,
    u0: SpectralField,
    nl: PowerNonlinearity | None,
    oversample: int = 4,
) -> SpaceTimePath:
    """Phi(u)(t_k) = e^{it_k Delta}u0 - i int_0^{t_k} e^{i(t_k-s)Delta} F(u(s)) ds."""
    free = free_flow_path(u0, u.grid)
    if nl is None:
        return free
    forcing = u.map_frames(lambda f: apply_F(f, nl, oversample))
    partials = _duhamel_partials(forcing)
    return SpaceTimePath(u.grid, u.metric, u.bandlimit, free.coeffs - 1j * partials)


def one_mode_duhamel_exact(metric: TorusMetric, xi, t: float, amplitude: complex = 1.0) -> complex:
    """Closed form of int_0^t e^{-i c (t-s) Q(xi)} * amplitude ds (constant forcing)."""
    from .lattice import q_form

    cq = metric.laplace_scale * q_form(metric, xi)
    if cq == 0:
        return amplitude * t
    return amplitude * (1.0 - np.exp(-1j * cq * t)) / (1j * cq)
