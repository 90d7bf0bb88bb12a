"""Dyadic cutoffs, Littlewood-Paley projections, and cube decompositions.

Cutoffs act on the Euclidean norm of the integer frequency vector (the
metric never enters here).  Two profiles are supported:

* ``sharp``  -- indicator of |x| <= 1; projections are idempotent and
  mutually orthogonal, which makes the dyadic-sum identities exact.
* ``smooth`` -- a fixed C-infinity bump built from the exp(-1/t) glue,
  equal to 1 on |x| <= 1 and 0 on |x| >= 2.

For dyadic N, phi_N(x) = phi(x/N) and psi_N = phi_N - phi_{N/2}, with the
convention psi_1 = phi.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import SpectralField, euclidean_norm_grid

PROFILES = ("smooth", "sharp")


def _smooth_step(t):
    """C-infinity monotone step: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    def g(s):
        out = np.zeros_like(s)
        pos = s > 0
        out[pos] = np.exp(-1.0 / s[pos])
        return out
    a = g(t)
    b = g(1.0 - t)
    return a / (a + b)


def phi_weight(profile: str, N: float, radius) -> np.ndarray:
    """phi_N evaluated at |xi| = radius."""
    r = np.asarray(radius, dtype=float) / N
    if profile == "sharp":
        return (r <= 1.0).astype(float)
    if profile == "smooth":
        # 1 on r <= 1, 0 on r >= 2, glued monotonically in between.
        return _smooth_step(2.0 - r)
    raise ValueError(f"unknown cutoff profile {profile!r}")


def _check_dyadic(N) -> int:
    N = int(N)
    if N < 1 or (N & (N - 1)) != 0:
        raise ValueError(f"N must be a dyadic integer >= 1, got {N}")
    return N


def psi_weight(profile: str, N, radius) -> np.ndarray:
    """psi_N = phi_N - phi_{N/2} (psi_1 = phi) at |xi| = radius."""
    N = _check_dyadic(N)
    if N == 1:
        return phi_weight(profile, 1, radius)
    return phi_weight(profile, N, radius) - phi_weight(profile, N // 2, radius)


def _radius_grid(field: SpectralField) -> np.ndarray:
    return euclidean_norm_grid(field.bandlimit)


def project_dyadic(field: SpectralField, N, profile: str = "sharp") -> SpectralField:
    """P_N: multiply coefficients by psi_N(|xi|)."""
    return field.with_coeffs(field.coeffs * psi_weight(profile, N, _radius_grid(field)))


def project_leq(field: SpectralField, N, profile: str = "sharp") -> SpectralField:
    """P_{<=N}: multiply coefficients by phi_N(|xi|)."""
    _check_dyadic(N)
    return field.with_coeffs(field.coeffs * phi_weight(profile, N, _radius_grid(field)))


def blended_projection(field: SpectralField, N, theta: float, profile: str = "sharp") -> SpectralField:
    """(P_{<=N/2} + theta * P_N): multiplier phi_{N/2} + theta * psi_N.

    For N = 1 the low-pass part is empty (the convention P_{<=1/2} = 0),
    so the multiplier is theta * psi_1.
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    N = _check_dyadic(N)
    r = _radius_grid(field)
    low = phi_weight(profile, N // 2, r) if N > 1 else np.zeros_like(r)
    mult = low + theta * psi_weight(profile, N, r)
    return field.with_coeffs(field.coeffs * mult)


def dyadic_ladder(bandlimit: int) -> list[int]:
    """All dyadic N needed to exhaust a field of the given bandlimit."""
    top = 2 * bandlimit if bandlimit >= 1 else 1
    out = [1]
    while out[-1] < top:
        out.append(out[-1] * 2)
    return out


@dataclass(frozen=True)
class CubeDecomposition:
    """Tiling of [-M, M]^3 by integer-anchored, half-open cubes of side N.

    Each lattice point xi belongs to the cube anchored at floor(xi/N)*N;
    ``anchors`` lists the anchors of all cubes meeting the truncated lattice.
    """

    bandlimit: int
    side: int
    anchors: tuple[tuple[int, int, int], ...]

    @classmethod
    def build(cls, bandlimit: int, side: int) -> "CubeDecomposition":
        side = int(side)
        if side < 1:
            raise ValueError("cube side must be >= 1")
        # anchors are the multiples of `side` whose cube [a, a+side) meets [-M, M]
        a0 = int(np.floor(-bandlimit / side)) * side
        axis_anchors = list(range(a0, bandlimit + 1, side))
        anchors = tuple(
            (i, j, k) for i in axis_anchors for j in axis_anchors for k in axis_anchors
        )
        return cls(bandlimit, side, anchors)

    def anchor_of(self, xi) -> tuple[int, int, int]:
        return tuple(int(np.floor(x / self.side)) * self.side for x in xi)


def cube_mask(decomp_or_field, anchor, side: int, bandlimit: int) -> np.ndarray:
    """Boolean mask of the lattice cube [anchor, anchor + side) on the coefficient grid."""
    M = bandlimit
    r = np.arange(-M, M + 1)
    masks = []
    for axis in range(3):
        a = anchor[axis]
        masks.append((r >= a) & (r < a + side))
    return (
        masks[0][:, None, None] & masks[1][None, :, None] & masks[2][None, None, :]
    )


def project_cube(field: SpectralField, anchor, side: int) -> SpectralField:
    """Sharp restriction of coefficients to the cube [anchor, anchor + side)."""
    mask = cube_mask(None, anchor, side, field.bandlimit)
    return field.with_coeffs(np.where(mask, field.coeffs, 0.0))


def _sum_box_distance(anchor_sum: np.ndarray, side: int) -> np.ndarray:
    """Euclidean distance from the origin to the sum box [S, S + 2(side-1)].

    ``anchor_sum`` has shape (..., 3).  The clamp point is itself a lattice
    point, so distance <= R exactly characterizes 'the sum set contains a
    point of the ball |xi| <= R'.
    """
    lo = anchor_sum.astype(float)
    hi = lo + 2.0 * (side - 1)
    per_axis = np.maximum(0.0, np.maximum(lo, -hi))
    return np.sqrt(np.sum(per_axis**2, axis=-1))


def related_cube_pairs(decomp: CubeDecomposition, support_radius: float):
    """All unordered anchor pairs whose sum set meets the ball |xi| <= R.

    Self-pairs are included.  The per-cube partner count is uniformly
    bounded (<= 125 within the desk-scale lattice guard).
    """
    if support_radius <= 0:
        raise ValueError("support_radius must be positive")
    anchors = np.asarray(decomp.anchors)
    m = len(anchors)
    iu, ju = np.triu_indices(m)
    sums = anchors[iu] + anchors[ju]
    dist = _sum_box_distance(sums, decomp.side)
    keep = dist <= support_radius
    return [
        (tuple(anchors[i]), tuple(anchors[j]))
        for i, j in zip(iu[keep], ju[keep])
    ]
