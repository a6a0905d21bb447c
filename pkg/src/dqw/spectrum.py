"""Spectrum determinants and bound-state energies.

The mirror symmetry of the well splits the 8x8 matching determinant into a
symmetric and an antisymmetric factor, each of the form

    D(k) = X(k) cos(ak) + Y(k) sin(ak).

All public determinant functions return the factor multiplied by
exp(-b chi_b), which has the same zeros and cannot overflow.  Above the
central barrier (E > V_b) the factors are continued to real functions via
chi_b -> i kappa_b:

    symmetric:      exp(-b chi) D_s  ->  F(kappa) (real, rescaling factor 1)
    antisymmetric:  exp(-b chi) D_a  ->  G(kappa) / i

so that both are continuous at E = V_b.  The antisymmetric factor vanishes
identically at E = V_b (the exponential basis degenerates there);
:func:`det_regular` divides that zero out and is what the root finder uses.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from . import params as _params
from .errors import LevelNotFound, NoBoundStates, PreconditionViolated
from .params import (Evanescent, WaveNumbers, WellParams, _wavenumbers,
                     check_energy)

log = logging.getLogger(__name__)


class Parity(enum.Enum):
    SYMMETRIC = "s"
    ANTISYMMETRIC = "a"

    @property
    def label(self) -> str:
        return self.value

    @property
    def sign(self) -> int:
        """+1 for even, -1 for odd states."""
        return 1 if self is Parity.SYMMETRIC else -1

    @classmethod
    def parse(cls, text) -> "Parity":
        if isinstance(text, Parity):
            return text
        t = str(text).strip().lower()
        if t in ("s", "sym", "symmetric", "even"):
            return cls.SYMMETRIC
        if t in ("a", "asym", "antisymmetric", "odd"):
            return cls.ANTISYMMETRIC
        raise ValueError(f"unknown parity {text!r}")


S = Parity.SYMMETRIC
A = Parity.ANTISYMMETRIC


@dataclass(frozen=True)
class Level:
    """One bound level; ``n`` counts from 1 over the merged spectrum."""

    n: int
    parity: Parity
    E: float
    waves: WaveNumbers

    @property
    def k(self) -> float:
        return self.waves.k

    @property
    def name(self) -> str:
        return f"{self.n}{self.parity.label}"


def _rates(k, p: WellParams):
    """Vectorised wavenumbers for an array of k (internal, no range check)."""
    C = _params.HBAR2_2ME
    k = np.asarray(k, dtype=float)
    E = C * k * k / p.m0
    chi_c = np.sqrt(np.maximum(p.vc - E, 0.0) * p.mc / C)
    evan = E <= p.vb
    chi = np.sqrt(np.maximum(p.vb - E, 0.0) * p.mb / C)
    kap = np.sqrt(np.maximum(E - p.vb, 0.0) * p.mb / C)
    return E, chi_c, evan, chi, kap


def _g1(x):
    """(1 - exp(-x)) / x, equal to 1 at x = 0."""
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0.0, 1.0, x)
    return np.where(x == 0.0, 1.0, -np.expm1(-safe) / safe)


def _xy(k, parity: Parity, p: WellParams, regular: bool = False):
    """Coefficients X, Y of cos(ak), sin(ak) in the scaled determinant."""
    k = np.asarray(k, dtype=float)
    _, chi_c, evan, chi, kap = _rates(k, p)
    m0, mb, mc, b = p.m0, p.mb, p.mc, p.b
    q = np.exp(-b * chi)
    th = 0.5 * b * kap
    cth, sth = np.cos(th), np.sin(th)
    if parity is S:
        xe = -k * m0 * (chi_c * mb * (1 + q) + chi * mc * (1 - q))
        ye = k * k * mb * mc * (1 + q) - chi * chi_c * m0 ** 2 * (1 - q)
        xp = -2 * k * m0 * (chi_c * mb * cth - kap * mc * sth)
        yp = 2 * (k * k * mb * mc * cth + kap * chi_c * m0 ** 2 * sth)
    elif regular:
        # divided by chi_b (kappa_b above the barrier)
        gb = b * _g1(b * chi)
        xe = k * m0 * (-chi_c * mb * gb - mc * (1 + q))
        ye = k * k * mb * mc * gb - chi_c * m0 ** 2 * (1 + q)
        sinc = b * np.sinc(th / np.pi)          # 2 sin(th) / kappa
        xp = k * m0 * (-chi_c * mb * sinc - 2 * mc * cth)
        yp = k * k * mb * mc * sinc - 2 * chi_c * m0 ** 2 * cth
    else:
        xe = k * m0 * (-chi_c * mb * (1 - q) - chi * mc * (1 + q))
        ye = k * k * mb * mc * (1 - q) - chi * chi_c * m0 ** 2 * (1 + q)
        xp = 2 * k * m0 * (-chi_c * mb * sth - kap * mc * cth)
        yp = 2 * (k * k * mb * mc * sth - kap * chi_c * m0 ** 2 * cth)
    return np.where(evan, xe, xp), np.where(evan, ye, yp)


def _det_k(k, parity: Parity, p: WellParams, regular: bool = False):
    x, y = _xy(k, parity, p, regular)
    ak = p.a * np.asarray(k, dtype=float)
    return x * np.cos(ak) + y * np.sin(ak)


def _k_of(E: float, p: WellParams) -> float:
    return math.sqrt(E * p.m0 / _params.HBAR2_2ME)


def det_scaled(E: float, parity: Parity, p: WellParams) -> float:
    """``exp(-b chi_b) * D_parity(E)``, continued to real values above V_b."""
    check_energy(E, p)
    return float(_det_k(_k_of(E, p), Parity.parse(parity), p))


def det_regular(E: float, parity: Parity, p: WellParams) -> float:
    """Like :func:`det_scaled` but with the spurious antisymmetric zero at
    ``E = V_b`` divided out (the antisymmetric branch is divided by chi_b,
    or kappa_b above the barrier).  Same sign as :func:`det_scaled`."""
    check_energy(E, p)
    return float(_det_k(_k_of(E, p), Parity.parse(parity), p, regular=True))


def det_relative_residual(E: float, parity: Parity, p: WellParams) -> float:
    """|D| / sqrt(X^2 + Y^2): a scale-free measure of how far E is from a root."""
    check_energy(E, p)
    k = _k_of(E, p)
    x, y = _xy(k, Parity.parse(parity), p, regular=True)
    ak = p.a * k
    return float(abs(x * math.cos(ak) + y * math.sin(ak)) / math.hypot(x, y))


def det_special_equal_barrier(E: float, parity: Parity, p: WellParams) -> float:
    """Reduced determinant for ``V_b == V_c`` and ``mb == mc`` (chi_c == chi_b).

    Scaled by exp(-b chi).  Plus sign for symmetric states:

        -2 k chi m0 mb cos(ak)
            +/- [(k^2 mb^2 + chi^2 m0^2) q +/- (k^2 mb^2 - chi^2 m0^2)] sin(ak)

    with ``q = exp(-b chi)``.  Note the second +/- follows the first; with a
    fixed inner sign the antisymmetric branch would not reduce to the odd
    single-well condition at b = 0.
    """
    if p.vb != p.vc or p.mb != p.mc:
        raise PreconditionViolated("requires vb == vc and mb == mc")
    check_energy(E, p)
    parity = Parity.parse(parity)
    w = _wavenumbers(E, p)
    k, chi = w.k, w.barrier.chi_b
    m0, mb = p.m0, p.mb
    q = math.exp(-p.b * chi)
    plus = (k * k * mb * mb + chi * chi * m0 * m0) * q
    minus = k * k * mb * mb - chi * chi * m0 * m0
    sgn = parity.sign
    return (-2 * k * chi * m0 * mb * math.cos(p.a * k)
            + sgn * (plus + sgn * minus) * math.sin(p.a * k))


def det_uniform_mass(E: float, parity: Parity, p: WellParams) -> float:
    """Determinant for one mass everywhere and ``V_b == V_c``, in terms of
    ``xi = chi / k``:

        2 cos(ak) + (xi - 1/xi) sin(ak) -/+ (xi + 1/xi) sin(ak) exp(-chi b)

    The minus sign gives symmetric states, the plus sign antisymmetric ones.
    Equals ``-det_special_equal_barrier / (k chi m^2)``.
    """
    if not (p.equal_mass and p.equal_barriers):
        raise PreconditionViolated("requires m0 == mb == mc and vb == vc")
    check_energy(E, p)
    parity = Parity.parse(parity)
    w = _wavenumbers(E, p)
    k, chi = w.k, w.barrier.chi_b
    xi = chi / k
    ak = p.a * k
    return (2 * math.cos(ak) + (xi - 1 / xi) * math.sin(ak)
            - parity.sign * (xi + 1 / xi) * math.sin(ak) * math.exp(-chi * p.b))


def det_isolated_well(E: float, p: WellParams) -> float:
    """b -> infinity limit of the scaled determinants (both parities).

    A single well of width ``a`` between a barrier (V_b, mb) on one side and
    (V_c, mc) on the other.  Requires ``E < V_b``.
    """
    check_energy(E, p)
    if E >= p.vb:
        raise PreconditionViolated("isolated-well limit needs E < vb")
    w = _wavenumbers(E, p)
    k, chi_b, chi_c = w.k, w.barrier.chi_b, w.chi_c
    m0, mb, mc = p.m0, p.mb, p.mc
    ak = p.a * k
    return (-k * m0 * (chi_c * mb + chi_b * mc) * math.cos(ak)
            + (k * k * mb * mc - chi_b * chi_c * m0 * m0) * math.sin(ak))


# ---------------------------------------------------------------------------
# full 8x8 system

COLUMNS = ("A1", "B1", "C1", "B2", "B3", "A2", "C2", "B4")


def matching_matrix(E: float, p: WellParams) -> np.ndarray:
    """Coefficient matrix of the eight BenDaniel-Duke matching equations.

    Rows, in order: flux psi'/m and value psi at x = 0; value and flux at
    x = a; value and flux at x = a+b; value and flux at x = 2a+b.  Columns
    in the order of :data:`COLUMNS`.  With this ordering

        det M = -m0^-4 mc^-2 mb^-2 exp(-2b chi) D_s D_a.

    Evanescent regime only.
    """
    check_energy(E, p)
    if E > p.vb:
        raise PreconditionViolated("matching_matrix is written for E <= vb")
    w = _wavenumbers(E, p)
    k, chi, chi_c = w.k, w.barrier.chi_b, w.chi_c
    m0, mb, mc = p.m0, p.mb, p.mc
    s, c = math.sin(p.a * k), math.cos(p.a * k)
    q = math.exp(-p.b * chi)
    M = np.zeros((8, 8))
    M[0] = [-k / m0, chi_c / mc, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    M[1] = [0.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    M[2] = [s, 0.0, c, -1.0, -q, 0.0, 0.0, 0.0]
    M[3] = [k * c / m0, 0.0, -k * s / m0, chi / mb, -chi * q / mb, 0.0, 0.0, 0.0]
    M[4] = [0.0, 0.0, 0.0, q, 1.0, -s, -c, 0.0]
    M[5] = [0.0, 0.0, 0.0, -chi * q / mb, chi / mb, k * c / m0, -k * s / m0, 0.0]
    M[6] = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0]
    M[7] = [0.0, 0.0, 0.0, 0.0, 0.0, -k / m0, 0.0, chi_c / mc]
    return M


def det_full_matrix(E: float, p: WellParams) -> float:
    """Determinant of :func:`matching_matrix` (requires ``E < V_b``)."""
    if not E < p.vb:
        check_energy(E, p)
        raise PreconditionViolated("det_full_matrix needs E < vb")
    return float(np.linalg.det(matching_matrix(E, p)))


def det_factorized(E: float, p: WellParams) -> float:
    """The factorised form of :func:`det_full_matrix`:

        -m0^-4 mc^-2 mb^-2 (e^{-b chi} D_s)(e^{-b chi} D_a)
    """
    ds = det_scaled(E, S, p)
    da = det_scaled(E, A, p)
    return -ds * da / (p.m0 ** 4 * p.mc ** 2 * p.mb ** 2)


# ---------------------------------------------------------------------------
# root finding

SAMPLES_PER_PERIOD = 40
ROOT_RTOL = 1e-14
DUPLICATE_DK = 1e-9
MAX_REFINE = 6


def _k_max(p: WellParams) -> float:
    return math.sqrt(p.vc * p.m0 / _params.HBAR2_2ME)


def scan_grid(p: WellParams, density: float = 1.0) -> np.ndarray:
    """Uniform k grid on (0, k(V_c)] resolving the fastest oscillation.

    At least 40 samples per pi/(2a+b) in k; the barrier phase b*kappa_b
    above V_b is also resolved.
    """
    kmax = _k_max(p)
    kap_max = math.sqrt(max(p.vc - p.vb, 0.0) * p.mb / _params.HBAR2_2ME)
    periods = kmax * p.width / math.pi + kap_max * p.b / math.pi + 1.0
    n = int(math.ceil(SAMPLES_PER_PERIOD * density * periods))
    return kmax * np.arange(1, n + 1) / n


def _bracket_roots(f, ks: np.ndarray, values: np.ndarray) -> List[float]:
    roots = []
    sign = np.sign(values)
    for i in np.flatnonzero(sign == 0.0):
        roots.append(float(ks[i]))
    idx = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    for i in idx:
        roots.append(brentq(f, ks[i], ks[i + 1], xtol=1e-300, rtol=ROOT_RTOL, maxiter=200))
    return sorted(roots)


def _parity_roots(parity: Parity, p: WellParams, density: float) -> List[float]:
    ks = scan_grid(p, density)
    vals = _det_k(ks, parity, p, regular=True)

    def f(k):
        return float(_det_k(k, parity, p, regular=True))

    kmax = ks[-1]
    # E == V_c exactly is not a bound state
    return [k for k in _bracket_roots(f, ks, vals) if k < kmax]


def _consistent(roots_s, roots_a) -> bool:
    for roots in (roots_s, roots_a):
        if any(b - a < DUPLICATE_DK for a, b in zip(roots, roots[1:])):
            return False
    merged = sorted([(k, S) for k in roots_s] + [(k, A) for k in roots_a],
                    key=lambda t: t[0])
    return all(par is (S if i % 2 == 0 else A) for i, (_, par) in enumerate(merged))


def find_levels(p: WellParams, max_levels: Optional[int] = None) -> List[Level]:
    """All bound levels with ``0 < E < V_c``, sorted by energy.

    Each parity is scanned separately for sign changes of the regularised
    determinant on a uniform k grid and refined with Brent's method.  If the
    result contains near-duplicate roots or violates the S, A, S, A, ...
    ordering that a symmetric potential guarantees, the scan is repeated at
    doubled density.
    """
    density = 1.0
    for attempt in range(MAX_REFINE):
        roots_s = _parity_roots(S, p, density)
        roots_a = _parity_roots(A, p, density)
        if _consistent(roots_s, roots_a):
            break
        log.debug("inconsistent root scan at density %g, doubling", density)
        density *= 2.0
    else:
        log.warning("root scan still inconsistent after %d refinements for %s",
                    MAX_REFINE, p)
        roots_s = sorted(set(roots_s))
        roots_a = sorted(set(roots_a))

    merged = sorted([(k, S) for k in roots_s] + [(k, A) for k in roots_a],
                    key=lambda t: t[0])
    if not merged:
        raise NoBoundStates(f"no bound states for {p}")
    levels = []
    for n, (k, parity) in enumerate(merged, start=1):
        E = _params.energy_from_k(k, p)
        levels.append(Level(n, parity, E, _wavenumbers(E, p)))
        if max_levels is not None and len(levels) >= max_levels:
            break
    return levels


def level_by_name(levels: List[Level], name: str) -> Level:
    """Look up ``'1s'``, ``'2a'`` or a bare index ``'3'``."""
    name = str(name).strip().lower()
    n = int(name.rstrip("sa"))
    for lv in levels:
        if lv.n == n:
            if name[-1] in "sa" and lv.parity.label != name[-1]:
                raise LevelNotFound(f"level {n} has parity {lv.parity.label}, not {name[-1]}")
            return lv
    raise LevelNotFound(f"level {name} is not bound ({len(levels)} bound levels)")


def is_evanescent(level: Level) -> bool:
    return isinstance(level.waves.barrier, Evanescent)
