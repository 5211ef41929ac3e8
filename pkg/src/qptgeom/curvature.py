"""Scalar curvature of a two-dimensional metric from sampled values.

Uses the Brioschi formula for the Gaussian curvature ``K`` of
``ds^2 = E du^2 + 2 F du dv + G dv^2`` and returns ``R = 2 K`` (the unit
sphere has ``R = 2``). Derivatives come from fourth-order central
differences on a 5x5 stencil.
"""

import numpy as np

_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


def scalar_curvature_from_stencil(G, du, dv):
    """Scalar curvature at the centre of a 5x5 grid of 2x2 metric samples.

    Parameters
    ----------
    G : array, shape (5, 5, 2, 2)
        ``G[i, j]`` is the metric at ``(u0 + (i-2) du, v0 + (j-2) dv)``.
    du, dv : float
        Grid spacings along the two coordinates.
    """
    G = np.asarray(G, dtype=float)
    if G.shape != (5, 5, 2, 2):
        raise ValueError(f"expected a (5, 5, 2, 2) stencil, got {G.shape}")
    E, F, Gv = G[..., 0, 0], G[..., 0, 1], G[..., 1, 1]

    def d_u(f):
        return _D1 @ f[:, 2] / du

    def d_v(f):
        return f[2, :] @ _D1 / dv

    def d_uu(f):
        return _D2 @ f[:, 2] / du**2

    def d_vv(f):
        return f[2, :] @ _D2 / dv**2

    def d_uv(f):
        return _D1 @ f @ _D1 / (du * dv)

    E0, F0, G0 = E[2, 2], F[2, 2], Gv[2, 2]
    first = np.array(
        [
            [-0.5 * d_vv(E) + d_uv(F) - 0.5 * d_uu(Gv), 0.5 * d_u(E), d_u(F) - 0.5 * d_v(E)],
            [d_v(F) - 0.5 * d_u(Gv), E0, F0],
            [0.5 * d_v(Gv), F0, G0],
        ]
    )
    second = np.array(
        [
            [0.0, 0.5 * d_v(E), 0.5 * d_u(Gv)],
            [0.5 * d_v(E), E0, F0],
            [0.5 * d_u(Gv), F0, G0],
        ]
    )
    det = E0 * G0 - F0**2
    if det <= 0:
        raise ZeroDivisionError(f"metric is degenerate at the stencil centre (det = {det:.3e})")
    gauss = (np.linalg.det(first) - np.linalg.det(second)) / det**2
    return float(2.0 * gauss)


def sample_stencil(metric, point, spacing):
    """Evaluate ``metric(u, v)`` on the 5x5 stencil around ``point``."""
    u0, v0 = point
    du, dv = (spacing, spacing) if np.isscalar(spacing) else spacing
    offsets = np.arange(-2, 3)
    return np.array(
        [[np.asarray(metric(u0 + i * du, v0 + j * dv), dtype=float) for j in offsets] for i in offsets]
    )


def scalar_curvature_2d(metric, point, spacing=1e-3):
    """Scalar curvature of a callable metric ``(u, v) -> 2x2`` at ``point``."""
    du, dv = (spacing, spacing) if np.isscalar(spacing) else spacing
    return scalar_curvature_from_stencil(sample_stencil(metric, point, (du, dv)), du, dv)
