"""Independent reference solutions.

Nothing in here uses the spectrum or eigenstate modules: the finite
difference solver discretises the effective-mass Schroedinger equation

    -C d/dx [ (1/m(x)) dpsi/dx ] + V(x) psi = E psi

directly, and the quadrature helpers only call ``state.psi``.  The
constant C = hbar^2 / 2m_e is computed here from scipy's CODATA values
rather than taken from :mod:`dqw.params`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import constants
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import bisect

from .errors import GridTooCoarse, ParameterMismatch

C_CODATA = constants.hbar ** 2 / (2 * constants.m_e) / constants.e * 1e18  # eV nm^2

DEFAULT_H = 0.005
DEFAULT_PAD = 12.0
DECAY_LENGTHS = 12.0
MAX_PAD = 600.0


@dataclass(frozen=True)
class Layer:
    width: float
    V: float
    m: float


@dataclass(frozen=True)
class Profile:
    """Piecewise-constant potential: inner layers between two half-spaces
    of height ``V_out`` and mass ``m_out``; the first layer starts at x = 0."""

    layers: Tuple[Layer, ...]
    V_out: float
    m_out: float

    @property
    def length(self) -> float:
        return sum(layer.width for layer in self.layers)

    @classmethod
    def from_params(cls, p) -> "Profile":
        layers = [Layer(p.a, 0.0, p.m0)]
        if p.b > 0:
            layers.append(Layer(p.b, p.vb, p.mb))
        layers.append(Layer(p.a, 0.0, p.m0))
        return cls(tuple(layers), p.vc, p.mc)


@dataclass(frozen=True)
class FdGrid:
    """Piecewise-uniform grid with every interface on a node.

    ``segments`` holds (start, end, intervals, V, m) per layer, including the
    two padding layers.  ``h`` is the nominal spacing; for commensurate
    layer widths all intervals equal ``h`` and ``h = (x1 - x0) / (n + 1)``.
    """

    x0: float
    x1: float
    n: int
    h: float
    segments: Tuple[Tuple[float, float, int, float, float], ...]

    @classmethod
    def build(cls, profile: Profile, h: float = DEFAULT_H, pad: float = DEFAULT_PAD) -> "FdGrid":
        segs = []
        x = -pad
        spans = [(pad, profile.V_out, profile.m_out)]
        spans += [(layer.width, layer.V, layer.m) for layer in profile.layers]
        spans += [(pad, profile.V_out, profile.m_out)]
        for width, V, m in spans:
            count = max(1, int(math.ceil(width / h - 1e-9)))
            segs.append((x, x + width, count, V, m))
            x += width
        n = sum(s[2] for s in segs) - 1
        return cls(-pad, x, n, h, tuple(segs))

    def refined(self) -> "FdGrid":
        segs = tuple((a, b, 2 * c, V, m) for a, b, c, V, m in self.segments)
        return FdGrid(self.x0, self.x1, 2 * self.n + 1, self.h / 2, segs)

    def cells(self):
        """Interval lengths, potentials and masses, left to right."""
        hs, Vs, ms = [], [], []
        for a, b, c, V, m in self.segments:
            hs.append(np.full(c, (b - a) / c))
            Vs.append(np.full(c, V))
            ms.append(np.full(c, m))
        return np.concatenate(hs), np.concatenate(Vs), np.concatenate(ms)

    def nodes(self) -> np.ndarray:
        """Interior node positions (the Dirichlet end points excluded)."""
        hs, _, _ = self.cells()
        return self.x0 + np.cumsum(hs)[:-1]


def _tridiagonal(grid: FdGrid, c: float):
    hs, Vs, ms = grid.cells()
    # face i sits between nodes i and i+1 and lies inside one layer, so its
    # mass is that layer's mass
    flux = c / (ms * hs)
    w = 0.5 * (hs[:-1] + hs[1:])
    diag = (flux[:-1] + flux[1:] + 0.5 * (hs[:-1] * Vs[:-1] + hs[1:] * Vs[1:])) / w
    off = -flux[1:-1] / np.sqrt(w[:-1] * w[1:])
    return diag, off, w


def fd_solve(profile: Profile, grid: FdGrid, count: int, c: float = C_CODATA):
    """Lowest ``count`` eigenpairs below ``V_out`` on a fixed grid.

    Returns (energies, psi) with psi of shape (n_nodes, n_found), each
    column normalised by the trapezoidal rule.
    """
    diag, off, w = _tridiagonal(grid, c)
    vmin = min([profile.V_out] + [layer.V for layer in profile.layers])
    E, y = eigh_tridiagonal(diag, off, select="v", select_range=(vmin, profile.V_out),
                            lapack_driver="stebz")
    E, y = E[:count], y[:, :count]
    psi = y / np.sqrt(w)[:, None]
    return E, psi


def _pad_for(E_top: float, profile: Profile, c: float) -> float:
    chi = math.sqrt(max(profile.V_out - E_top, 0.0) * profile.m_out / c)
    return DECAY_LENGTHS / chi if chi > 0 else MAX_PAD


def fd_spectrum(params_or_profile, count: int = 10, h: float = DEFAULT_H,
                pad: float = DEFAULT_PAD, c: float = C_CODATA):
    """Finite-difference bound states: list of (E, x_nodes, psi_nodes).

    The domain is widened until it extends at least 12 decay lengths of the
    least bound state found beyond the outer interfaces (capped at 600 nm).
    """
    profile = _as_profile(params_or_profile)
    while True:
        grid = FdGrid.build(profile, h, pad)
        E, psi = fd_solve(profile, grid, count, c)
        need = _pad_for(E[-1], profile, c) if len(E) else pad
        if need <= pad or pad >= MAX_PAD:
            break
        pad = min(MAX_PAD, 1.05 * need)
    x = grid.nodes()
    return [(float(E[i]), x, psi[:, i]) for i in range(len(E))], grid


def fd_energies(params_or_profile, count: int = 10, h: float = DEFAULT_H,
                pad: float = DEFAULT_PAD, c: float = C_CODATA) -> np.ndarray:
    states, _ = fd_spectrum(params_or_profile, count, h, pad, c)
    return np.array([s[0] for s in states])


def richardson_energies(params_or_profile, count: int = 10, h: float = DEFAULT_H,
                        pad: float = DEFAULT_PAD, c: float = C_CODATA,
                        tolerance: float = 1e-7) -> np.ndarray:
    """Second-order Richardson extrapolation from spacings h and h/2.

    Raises :class:`GridTooCoarse` if halving h moves any eigenvalue by more
    than ``tolerance`` eV.
    """
    profile = _as_profile(params_or_profile)
    states, grid = fd_spectrum(profile, count, h, pad, c)
    coarse = np.array([s[0] for s in states])
    fine_grid = grid.refined()
    fine, _ = fd_solve(profile, fine_grid, len(coarse), c)
    if len(fine) != len(coarse):
        raise GridTooCoarse(f"level count changed on refinement: {len(coarse)} -> {len(fine)}")
    shift = np.abs(fine - coarse)
    if np.any(shift > tolerance):
        raise GridTooCoarse(f"halving h={h} moved eigenvalues by up to {shift.max():.3g} eV")
    return (4.0 * fine - coarse) / 3.0


def convergence_order(params_or_profile, count: int = 3, h: float = 0.04,
                      pad: float = DEFAULT_PAD, c: float = C_CODATA) -> np.ndarray:
    """Observed order log2(|E_h - E_h/2| / |E_h/2 - E_h/4|) per level."""
    profile = _as_profile(params_or_profile)
    grid = FdGrid.build(profile, h, pad)
    E = []
    for _ in range(3):
        E.append(fd_solve(profile, grid, count, c)[0])
        grid = grid.refined()
    n = min(len(e) for e in E)
    e1, e2, e3 = (e[:n] for e in E)
    return np.log2(np.abs(e1 - e2) / np.abs(e2 - e3))


def _as_profile(obj) -> Profile:
    return obj if isinstance(obj, Profile) else Profile.from_params(obj)


# ---------------------------------------------------------------------------
# single symmetric well

def single_well_levels(width: float, V: float, m_in: float, m_out: float,
                       c: float = C_CODATA, samples_per_period: int = 50) -> List[Tuple[float, str]]:
    """Bound levels (E, 's'|'a') of one square well of the given width.

    Even states satisfy k m_out sin(kL/2) = m_in chi cos(kL/2) and odd ones
    k m_out cos(kL/2) = -m_in chi sin(kL/2); roots are bracketed on a uniform
    k grid and bisected.
    """
    kmax = math.sqrt(V * m_in / c)

    def chi(k):
        return math.sqrt(max(V - c * k * k / m_in, 0.0) * m_out / c)

    def even(k):
        return k * m_out * math.sin(0.5 * k * width) - m_in * chi(k) * math.cos(0.5 * k * width)

    def odd(k):
        return k * m_out * math.cos(0.5 * k * width) + m_in * chi(k) * math.sin(0.5 * k * width)

    n = int(samples_per_period * (kmax * width / math.pi + 1))
    ks = kmax * np.arange(1, n + 1) / n
    out = []
    for f, tag in ((even, "s"), (odd, "a")):
        vals = [f(k) for k in ks]
        for i in range(n - 1):
            if vals[i] == 0.0:
                out.append((c * ks[i] ** 2 / m_in, tag))
            elif vals[i] * vals[i + 1] < 0:
                k = bisect(f, ks[i], ks[i + 1], xtol=1e-16, rtol=1e-15, maxiter=400)
                out.append((c * k * k / m_in, tag))
    return sorted(out)


# ---------------------------------------------------------------------------
# quadrature

QUAD_EPSABS = 1e-14
QUAD_EPSREL = 1e-13


def _shared_params(i, j):
    if i.params != j.params:
        raise ParameterMismatch("states belong to different well parameters")
    return i.params


def _edges(p, chi_sum: float) -> List[float]:
    tail = math.log(1e16) / chi_sum
    return [-tail, 0.0, p.a, p.a + p.b, 2 * p.a + p.b, 2 * p.a + p.b + tail]


def quad_regions(f, edges: Sequence[float]) -> float:
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi > lo:
            total += quad(f, lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=400)[0]
    return total


def quad_overlap(i, j) -> float:
    """Integral of psi_i psi_j over the real line, region by region."""
    p = _shared_params(i, j)
    edges = _edges(p, i.level.waves.chi_c + j.level.waves.chi_c)
    return quad_regions(lambda x: i.psi(x) * j.psi(x), edges)


def quad_norm(state) -> float:
    """Integral of psi^2 over the real line, region by region."""
    return quad_overlap(state, state)


def fd_state_on(x: np.ndarray, fd_x: np.ndarray, fd_psi: np.ndarray) -> np.ndarray:
    """Interpolate a finite-difference eigenvector onto ``x`` (zero outside)."""
    return np.interp(x, fd_x, fd_psi, left=0.0, right=0.0)
