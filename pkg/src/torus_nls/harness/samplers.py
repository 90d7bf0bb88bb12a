"""Random data generators for the verification harness.

Every sampler is reproducible from an explicit numpy Generator and returns
a SpaceTimePath on the caller's time grid.  Frequency localization is
expressed by a support descriptor: a dyadic shell N/2 < |xi| <= N, the ball
|xi| <= N, or a cube of side N anchored near the origin (the shape used by
the scale-invariant Strichartz estimate).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import SamplerDegenerate
from ..lattice import SpectralField, TorusMetric, euclidean_norm_grid, q_grid
from ..littlewood_paley import cube_mask
from ..norms import SpaceTimePath, TimeGrid

KINDS = ("gaussian_shell", "free_flow", "step_atom", "solver_output")
SUPPORTS = ("shell", "ball", "cube")


@dataclass(frozen=True)
class SamplerSpec:
    """What to generate: path kind, amplitude, and frequency support."""

    kind: str
    amplitude: float = 1.0
    support: str = "shell"
    decay: float = 0.0  # coefficient decay <xi>^{-decay}; 0 = flat
    options: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sampler kind {self.kind!r}")
        if self.support not in SUPPORTS:
            raise ValueError(f"unknown support {self.support!r}")
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")

    def opt(self, key, default=None):
        return dict(self.options).get(key, default)


def support_mask(support: str, N: int, bandlimit: int) -> np.ndarray:
    r = euclidean_norm_grid(bandlimit)
    if support == "shell":
        if N == 1:
            return r <= 1.0
        return (r > N / 2.0) & (r <= N)
    if support == "ball":
        return r <= N
    if support == "cube":
        # side-N cube anchored at -N//2: fits in the lattice once M >= N/2
        return cube_mask(None, (-(N // 2),) * 3, N, bandlimit)
    raise ValueError(f"unknown support {support!r}")


def random_field(
    spec: SamplerSpec, metric: TorusMetric, bandlimit: int, N: int, rng: np.random.Generator
) -> SpectralField:
    """Complex-gaussian coefficients on the requested support, l2-normalized
    to the spec amplitude."""
    nn = 2 * bandlimit + 1
    mask = support_mask(spec.support, N, bandlimit)
    if not mask.any():
        raise SamplerDegenerate(
            f"empty frequency support: {spec.support} N={N} within bandlimit {bandlimit}"
        )
    c = (rng.standard_normal((nn, nn, nn)) + 1j * rng.standard_normal((nn, nn, nn)))
    c = np.where(mask, c, 0.0)
    if spec.decay:
        c = c * (1.0 + euclidean_norm_grid(bandlimit) ** 2) ** (-spec.decay / 2.0)
    norm = np.linalg.norm(c)
    if norm == 0:
        raise SamplerDegenerate("sampler produced identically-zero data")
    return SpectralField(metric, bandlimit, spec.amplitude / norm * c)


def _flow_phases(metric: TorusMetric, bandlimit: int, grid: TimeGrid) -> np.ndarray:
    q = q_grid(metric, bandlimit)
    return np.exp(-1j * metric.laplace_scale * grid.times[:, None, None, None] * q[None])


def sample_path(
    spec: SamplerSpec,
    metric: TorusMetric,
    bandlimit: int,
    N: int,
    grid: TimeGrid,
    rng: np.random.Generator,
) -> SpaceTimePath:
    """Draw one random space-time path of the requested kind."""
    if spec.kind == "gaussian_shell":
        f = random_field(spec, metric, bandlimit, N, rng)
        coeffs = np.broadcast_to(f.coeffs[None], (grid.n,) + f.coeffs.shape).copy()
        return SpaceTimePath(grid, metric, bandlimit, coeffs)

    if spec.kind == "free_flow":
        f = random_field(spec, metric, bandlimit, N, rng)
        return SpaceTimePath(
            grid, metric, bandlimit, _flow_phases(metric, bandlimit, grid) * f.coeffs[None]
        )

    if spec.kind == "step_atom":
        # piecewise free flow: constant twisted coefficients per time block
        n_blocks = int(spec.opt("blocks", min(4, grid.n // 2)))
        n_blocks = max(2, min(n_blocks, grid.n))
        cuts = np.sort(rng.choice(np.arange(1, grid.n), size=n_blocks - 1, replace=False))
        block_of = np.searchsorted(cuts, np.arange(grid.n), side="right")
        blocks = np.stack(
            [random_field(spec, metric, bandlimit, N, rng).coeffs for _ in range(n_blocks)]
        )
        coeffs = _flow_phases(metric, bandlimit, grid) * blocks[block_of]
        return SpaceTimePath(grid, metric, bandlimit, coeffs)

    if spec.kind == "solver_output":
        from ..nonlinearity import PowerNonlinearity
        from ..solver import splitstep_solve

        nl = PowerNonlinearity(float(spec.opt("p", 2.0)), int(spec.opt("sign", 1)))
        u0 = random_field(spec, metric, bandlimit, N, rng)
        path = splitstep_solve(u0, nl, grid.dt, grid.n, oversample=int(spec.opt("oversample", 2)))
        return path

    raise ValueError(f"unknown sampler kind {spec.kind!r}")
