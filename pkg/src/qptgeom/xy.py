"""Information geometry of the periodic XY chain in a transverse field.

Coordinates are ``(h, gamma)``. For an odd chain ``L = 2M + 1`` the ground
state is a product of Bogoliubov pairs with angles

    theta_k = arccos(eps_k / Lambda_k),  eps_k = cos x_k - h,
    Lambda_k = sqrt(eps_k^2 + gamma^2 sin^2 x_k),  x_k = 2 pi k / L,

and the metric is ``(1/4) sum_k d theta_k d theta_k``. Metric values in the
thermodynamic limit and the quantity ``L * R`` are reported per site, i.e.
with the overall factor ``L`` divided out.

Jordan-Wigner fermions of the periodic spin chain obey periodic boundary
conditions (integer ``k``) in the odd-parity sector and antiperiodic ones
(half-integer ``k``) in the even sector. The closed formulas use integer
``k``; :func:`ground_state_sector` tells which sector holds the actual
finite-chain ground state.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad_vec

from .curvature import sample_stencil, scalar_curvature_from_stencil
from .errors import CriticalPointError, DegeneracyError, GeometryError
from .quasifree import QuadraticSpec

SECTORS = ("periodic", "antiperiodic")
# fermion parity (-1)^N compatible with each boundary condition
SECTOR_PARITY = {"periodic": -1, "antiperiodic": 1}
GAPLESS_TOL = 1e-14


@dataclass(frozen=True)
class XYPoint:
    """Point ``(h, gamma)``; ``L=None`` stands for the thermodynamic limit."""

    h: float
    gamma: float
    L: Optional[int] = None

    def __post_init__(self):
        if not (np.isfinite(self.h) and np.isfinite(self.gamma)):
            raise ValueError("h and gamma must be finite")
        if self.L is not None:
            if int(self.L) != self.L or self.L < 3 or self.L % 2 == 0:
                raise ValueError(f"finite-size XY ops need odd L = 2M + 1 >= 3, got {self.L!r}")

    @property
    def M(self):
        if self.L is None:
            raise ValueError("M is undefined in the thermodynamic limit")
        return (self.L - 1) // 2


def is_critical(h, gamma):
    """True on the lines ``|h| = 1`` and the segment ``|h| <= 1, gamma = 0``."""
    return abs(h) == 1.0 or (abs(h) <= 1.0 and gamma == 0.0)


def _require_noncritical(h, gamma):
    if is_critical(h, gamma):
        raise CriticalPointError(f"(h, gamma) = ({h}, {gamma}) lies on the critical set")


def _require_finite(p):
    if p.L is None:
        raise ValueError("this operation needs a finite odd L")


def dispersion(k, p):
    """Return ``(eps_k, Lambda_k, x_k)`` for momentum label ``k``."""
    _require_finite(p)
    if abs(k) > p.L / 2:
        raise ValueError(f"momentum label {k} outside [-L/2, L/2]")
    x = 2 * np.pi * k / p.L
    eps = np.cos(x) - p.h
    return eps, float(np.hypot(eps, p.gamma * np.sin(x))), x


def theta(k, p, tol=GAPLESS_TOL):
    """Bogoliubov angle ``arccos(eps_k / Lambda_k)`` in ``[0, pi]``."""
    eps, lam, _ = dispersion(k, p)
    if lam <= tol:
        raise CriticalPointError(f"gapless mode k = {k}: Lambda_k = {lam:.3e}")
    return float(np.arccos(np.clip(eps / lam, -1.0, 1.0)))


def theta_gradient(k, p, tol=GAPLESS_TOL):
    """``(d theta_k / dh, d theta_k / dgamma)``.

    For ``0 < x_k < pi``::

        d theta / dh     = |gamma| sin x / Lambda^2
        d theta / dgamma = sgn(gamma) (cos x - h) sin x / Lambda^2
    """
    eps, lam, x = dispersion(k, p)
    if lam <= tol:
        raise CriticalPointError(f"gapless mode k = {k}: Lambda_k = {lam:.3e}")
    s = abs(np.sin(x))
    return np.array([abs(p.gamma) * s, np.copysign(1.0, p.gamma) * eps * s]) / lam**2


def momenta(L, sector="periodic"):
    """Labels of the paired modes ``0 < x_k < pi``: ``1..M`` or ``1/2..M-1/2``."""
    if sector not in SECTORS:
        raise ValueError(f"unknown sector {sector!r}; expected one of {SECTORS}")
    M = (L - 1) // 2
    k = np.arange(1, M + 1, dtype=float)
    return k if sector == "periodic" else k - 0.5


def theta_gradients(p, sector="periodic", tol=GAPLESS_TOL):
    """Angle gradients of all paired modes, shape ``(M, 2)``."""
    _require_finite(p)
    return np.array([theta_gradient(k, p, tol) for k in momenta(p.L, sector)])


def metric_finite_size(p, sector="periodic", tol=GAPLESS_TOL):
    """Finite-chain metric from the mode sums.

    ::

        g_hh = 1/4 sum_k gamma^2 sin^2 x_k / Lambda_k^4
        g_gg = 1/4 sum_k sin^2 x_k (cos x_k - h)^2 / Lambda_k^4
        g_hg = 1/4 sum_k gamma sin^2 x_k (cos x_k - h) / Lambda_k^4

    ``sector='periodic'`` sums over ``k = 1..M``; ``'antiperiodic'`` over the
    half-integer momenta of the even-parity sector.
    """
    _require_finite(p)
    if p.gamma == 0.0 and abs(p.h) <= 1.0:
        raise CriticalPointError(f"gamma = 0 with |h| = {abs(p.h)} <= 1 is on the critical segment")
    x = 2 * np.pi * momenta(p.L, sector) / p.L
    s2 = np.sin(x) ** 2
    eps = np.cos(x) - p.h
    lam2 = eps**2 + p.gamma**2 * s2
    bad = np.flatnonzero(np.sqrt(lam2) <= tol)
    if bad.size:
        k = momenta(p.L, sector)[bad[0]]
        raise CriticalPointError(f"gapless mode k = {k} at (h, gamma) = ({p.h}, {p.gamma})")
    lam4 = lam2**2
    g_hh = 0.25 * np.sum(p.gamma**2 * s2 / lam4)
    g_gg = 0.25 * np.sum(s2 * eps**2 / lam4)
    g_hg = 0.25 * np.sum(p.gamma * s2 * eps / lam4)
    return np.array([[g_hh, g_hg], [g_hg, g_gg]])


# --------------------------------------------------------------------------
# Jordan-Wigner images and the ground-state sector


def xy_quadratic_spec(L, h, gamma, sector="periodic"):
    """``(A, B)`` of the XY chain in one boundary-condition sector.

    ``A`` has ``h`` on the diagonal and ``-1/2`` hopping, ``B`` has pairing
    ``-gamma/2`` on ``(j, j+1)``. The bond closing the ring flips sign in the
    antiperiodic sector.
    """
    if sector not in SECTORS:
        raise ValueError(f"unknown sector {sector!r}; expected one of {SECTORS}")
    A = h * np.eye(L)
    B = np.zeros((L, L))
    for j in range(L):
        k = (j + 1) % L
        sign = -1.0 if (k == 0 and sector == "antiperiodic") else 1.0
        A[j, k] += -0.5 * sign
        A[k, j] += -0.5 * sign
        B[j, k] += -0.5 * gamma * sign
        B[k, j] += 0.5 * gamma * sign
    return QuadraticSpec(A, B)


def sector_energies(L, h, gamma):
    """Lowest spin-chain energy in each sector and whether it is the Bogoliubov vacuum.

    Returns a dict ``sector -> (energy, is_vacuum)``. The vacuum of a sector
    is physical only if its parity (the sign of ``det Z``) matches the
    boundary condition; otherwise the lowest admissible state carries one
    quasiparticle.
    """
    out = {}
    for sector in SECTORS:
        spec = xy_quadratic_spec(L, h, gamma, sector)
        Z = spec.A - spec.B
        svals = np.linalg.svd(Z, compute_uv=False)
        if svals.min() <= 1e-12:
            raise CriticalPointError(f"zero-energy mode in the {sector} sector")
        # (Tr A)/2 = h L/2 cancels the constant -h L/2 of the spin Hamiltonian
        energy = -0.5 * svals.sum()
        parity = int(np.sign(np.linalg.det(Z)))
        if parity == SECTOR_PARITY[sector]:
            out[sector] = (energy, True)
        else:
            out[sector] = (energy + svals.min(), False)
    return out


def ground_state_sector(L, h, gamma, tol=1e-10):
    """Boundary-condition sector holding the spin-chain ground state."""
    energies = sector_energies(L, h, gamma)
    (e_p, vac_p), (e_a, vac_a) = energies["periodic"], energies["antiperiodic"]
    if abs(e_p - e_a) < tol:
        raise DegeneracyError(f"sectors degenerate at (h, gamma) = ({h}, {gamma})", gap=abs(e_p - e_a))
    sector, vacuum = ("periodic", vac_p) if e_p < e_a else ("antiperiodic", vac_a)
    if not vacuum:
        raise GeometryError(f"ground state in the {sector} sector is not a Bogoliubov vacuum")
    return sector


def xy_ground_energy(L, h, gamma):
    """Exact ground energy of the periodic spin chain from free fermions."""
    return min(e for e, _ in sector_energies(L, h, gamma).values())


# --------------------------------------------------------------------------
# thermodynamic limit


def _tdl_integrand(h, gamma):
    def f(x):
        s2 = np.sin(x) ** 2
        eps = np.cos(x) - h
        lam4 = (eps**2 + gamma**2 * s2) ** 2
        return np.array([gamma**2 * s2, gamma * s2 * eps, s2 * eps**2]) / lam4

    return f


def _to_matrix(v):
    return np.array([[v[0], v[1]], [v[1], v[2]]])


def _singularity_distance(h, gamma):
    """Distance from the real axis of the nearest zero of ``Lambda(x)^2``."""
    a = 1.0 - gamma**2
    b = h * h + gamma * gamma
    if abs(a) < 1e-12:
        roots = [b / (2 * h)] if h != 0 else []
    else:
        disc = np.sqrt(complex(h * h - a * b))
        roots = [(h + disc) / a, (h - disc) / a]
    if not roots:
        return np.inf
    return min(abs(np.arccos(complex(r)).imag) for r in roots)


def _trapezoid(h, gamma, max_nodes=2**22):
    # the integrand is even and 2 pi periodic: trapezoid converges like exp(-N d)
    d = _singularity_distance(h, gamma)
    n = 64 if not np.isfinite(d) else max(64, int(np.ceil(45.0 / d)))
    if n > max_nodes:
        return None
    x = 2 * np.pi * np.arange(n) / n
    vals = _tdl_integrand(h, gamma)(x)
    return vals.sum(axis=1) * (np.pi / n)


def metric_tdl_integral(h, gamma, method="quad", rtol=1e-10):
    """Per-site metric from ``sum_k -> L/(2 pi) int_0^pi dx``, for any non-critical point.

    ``method='quad'`` uses adaptive Gauss-Kronrod quadrature with the
    interval split where ``eps(x)`` changes sign; ``'trapezoid'`` uses the
    periodic trapezoidal rule with a node count set by the analytic strip
    width of the integrand.
    """
    _require_noncritical(h, gamma)
    integral = None
    if method == "trapezoid":
        integral = _trapezoid(h, gamma)
    elif method != "quad":
        raise ValueError(f"unknown method {method!r}")
    if integral is None:
        points = [float(np.arccos(h))] if abs(h) < 1 else None
        integral, _ = quad_vec(
            _tdl_integrand(h, gamma), 0.0, np.pi, epsabs=0.0, epsrel=rtol, norm="max",
            points=points, limit=10000,
        )
    return _to_matrix(integral / (8 * np.pi))


def metric_tdl(h, gamma, method="quad", rtol=1e-10):
    """Per-site metric ``g / L`` in the thermodynamic limit.

    For ``|h| < 1`` this is the closed form
    ``diag(1 / (1 - h^2), 1 / (1 + |gamma|)^2) / (16 |gamma|)``; for
    ``|h| > 1`` the momentum integrals are evaluated numerically and the
    off-diagonal entry is generally non-zero.
    """
    _require_noncritical(h, gamma)
    if abs(h) < 1:
        g = abs(gamma)
        return np.diag([1.0 / (16 * g * (1 - h * h)), 1.0 / (16 * g * (1 + g) ** 2)])
    return metric_tdl_integral(h, gamma, method=method, rtol=rtol)


def scalar_curvature_closed(h, gamma):
    """``L * R``: ``-16 (1+|g|)/|g|`` for ``|h|<1``, ``16 (|h|+r)/r`` for ``|h|>1``.

    Here ``r = sqrt(h^2 + gamma^2 - 1)``.
    """
    _require_noncritical(h, gamma)
    if abs(h) < 1:
        g = abs(gamma)
        return -16.0 * (1 + g) / g
    r = np.sqrt(h * h + gamma * gamma - 1)
    return float(16.0 * (abs(h) + r) / r)


# --------------------------------------------------------------------------
# metric fields and numerical curvature


@dataclass
class MetricField:
    """Metric samples on a rectangular ``(h, gamma)`` grid.

    ``values[i, j]`` is the 2x2 metric at ``(h[i], gamma[j])``; invalid cells
    hold NaN and have ``valid[i, j] == False``.
    """

    h: np.ndarray
    gamma: np.ndarray
    values: np.ndarray
    valid: np.ndarray

    @classmethod
    def sample(cls, metric, h, gamma):
        h = np.asarray(h, dtype=float)
        gamma = np.asarray(gamma, dtype=float)
        values = np.full((h.size, gamma.size, 2, 2), np.nan)
        valid = np.zeros((h.size, gamma.size), dtype=bool)
        for i, hv in enumerate(h):
            for j, gv in enumerate(gamma):
                try:
                    values[i, j] = metric(hv, gv)
                    valid[i, j] = True
                except GeometryError:
                    pass
        return cls(h, gamma, values, valid)

    def _index(self, axis, value):
        hits = np.flatnonzero(np.isclose(axis, value, rtol=0, atol=1e-12))
        if hits.size != 1:
            raise ValueError(f"{value} is not a grid node")
        return int(hits[0])

    def stencil(self, at):
        """The 5x5 block of values centred on the grid node ``at`` and its spacings."""
        i, j = self._index(self.h, at[0]), self._index(self.gamma, at[1])
        if not (2 <= i < self.h.size - 2 and 2 <= j < self.gamma.size - 2):
            raise ValueError("point too close to the grid edge for a 5x5 stencil")
        hs, gs = self.h[i - 2 : i + 3], self.gamma[j - 2 : j + 3]
        dh, dg = np.diff(hs), np.diff(gs)
        if not (np.allclose(dh, dh[0]) and np.allclose(dg, dg[0])):
            raise ValueError("grid is not uniform around the point")
        if not self.valid[i - 2 : i + 3, j - 2 : j + 3].all():
            raise CriticalPointError(f"stencil around {tuple(at)} contains invalid cells")
        return self.values[i - 2 : i + 3, j - 2 : j + 3], float(dh[0]), float(dg[0])


def _check_stencil(h, gamma, dh, dg):
    h_lo, h_hi = h - 2 * dh, h + 2 * dh
    g_lo, g_hi = gamma - 2 * dg, gamma + 2 * dg
    for line in (-1.0, 1.0):
        if h_lo <= line <= h_hi:
            raise CriticalPointError(f"stencil around ({h}, {gamma}) crosses h = {line}")
    if min(abs(h_lo), abs(h_hi)) <= 1.0 and g_lo <= 0.0 <= g_hi:
        raise CriticalPointError(f"stencil around ({h}, {gamma}) crosses the gamma = 0 segment")


def scalar_curvature_numeric(field, at, spacing=1e-3, degenerate_offset=None):
    """``L * R`` at ``at`` from finite differences of a metric field.

    ``field`` is either a :class:`MetricField` (``at`` must be a grid node)
    or a callable ``(h, gamma) -> per-site metric`` sampled on a 5x5 stencil
    with the given ``spacing``.

    On the line ``gamma = 0, |h| > 1`` the metric is degenerate
    (``g_hh ~ gamma^2``) although the curvature is finite there; for a
    callable field the value is then taken as the mean over the two points
    ``gamma = +/- degenerate_offset`` (default ``10 * spacing``), which is
    exact up to ``O(offset^2)`` because the curvature is even in ``gamma``.
    """
    h, gamma = float(at[0]), float(at[1])
    if isinstance(field, MetricField):
        G, dh, dg = field.stencil(at)
        _check_stencil(h, gamma, dh, dg)
        return scalar_curvature_from_stencil(G, dh, dg)

    _check_stencil(h, gamma, spacing, spacing)
    try:
        return scalar_curvature_from_stencil(sample_stencil(field, (h, gamma), spacing), spacing, spacing)
    except ZeroDivisionError:
        if degenerate_offset == 0.0:
            raise CriticalPointError(f"metric is degenerate at ({h}, {gamma})") from None
        offset = 10 * spacing if degenerate_offset is None else degenerate_offset
        sides = [
            scalar_curvature_numeric(field, (h, gamma + s * offset), spacing, degenerate_offset=0.0)
            for s in (1.0, -1.0)
        ]
        return 0.5 * (sides[0] + sides[1])


def _scan_row(args):
    h, gammas = args
    values = np.full((gammas.size, 2, 2), np.nan)
    valid = np.zeros(gammas.size, dtype=bool)
    lr = np.full(gammas.size, np.nan)
    for j, g in enumerate(gammas):
        if is_critical(h, g):
            continue
        values[j] = metric_tdl(h, g, method="trapezoid")
        lr[j] = scalar_curvature_closed(h, g)
        valid[j] = True
    return values, valid, lr


def figure1_scan(h_range=(-2.0, 2.0), gamma_range=(-1.0, 1.0), resolution=200, workers=1):
    """Per-site metric and ``L * R`` on an inclusive ``(h, gamma)`` grid.

    Cells on the critical set are marked invalid. Returns
    ``(MetricField, LR)`` where ``LR[i, j]`` is NaN for invalid cells.
    """
    nh, ng = (resolution, resolution) if np.isscalar(resolution) else resolution
    h = np.linspace(h_range[0], h_range[1], int(nh))
    gamma = np.linspace(gamma_range[0], gamma_range[1], int(ng))
    tasks = [(hv, gamma) for hv in h]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_row, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        rows = [_scan_row(t) for t in tasks]
    values = np.stack([r[0] for r in rows])
    valid = np.stack([r[1] for r in rows])
    lr = np.stack([r[2] for r in rows])
    return MetricField(h, gamma, values, valid), lr
