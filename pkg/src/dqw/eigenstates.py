"""Normalised eigenfunctions of the double quantum well.

The wavefunction in the five regions is

    psi1 = B1 exp(chi_c x)                                   x < 0
    psi2 = A1 sin(kx) + C1 cos(kx)                           0 <= x <= a
    psi3 = B2 exp(chi_b (a - x)) + B3 exp(-chi_b (a + b - x)) a < x < a + b
    psi4 = A2 sin(k(2a+b-x)) + C2 cos(k(2a+b-x))             a+b <= x <= 2a+b
    psi5 = B4 exp(chi_c (2a + b - x))                        x > 2a + b

Above the central barrier (E > V_b) the barrier amplitudes instead
multiply a real standing-wave basis centred on the structure,

    psi3 = B2 cos(kappa_b t) + B3 sin(kappa_b t),   t = x - a - b/2,

so that symmetric states have B3 = 0 and antisymmetric ones B2 = 0.

Below V_b the coefficients have closed forms, all amplitudes being fixed
by C2 and C2 by normalisation.  Above V_b (and as a cross-check below it)
they come from the null vector of the 8x8 matching system.

Sign convention: every returned state has psi(a/2) > 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import List, Optional

import numpy as np
from scipy.linalg import null_space

from .errors import NotARoot, ParameterMismatch, RegimeUnsupported
from .params import Evanescent, WellParams
from .spectrum import (A, COLUMNS, Level, Parity, S, det_relative_residual,
                       find_levels, matching_matrix)

ROOT_TOLERANCE = 1e-8
RESIDUAL_TOLERANCE = 1e-8


@dataclass(frozen=True)
class CoefficientSet:
    A1: float
    A2: float
    B1: float
    B2: float
    B3: float
    B4: float
    C1: float
    C2: float

    def vector(self) -> np.ndarray:
        """Amplitudes in matching-matrix column order (A1 B1 C1 B2 B3 A2 C2 B4)."""
        return np.array([getattr(self, name) for name in COLUMNS])

    @classmethod
    def from_vector(cls, v) -> "CoefficientSet":
        return cls(**{name: float(x) for name, x in zip(COLUMNS, v)})

    def scaled(self, factor: float) -> "CoefficientSet":
        return CoefficientSet(**{f.name: factor * getattr(self, f.name) for f in fields(self)})

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.vector())))


@dataclass(frozen=True)
class BoundState:
    level: Level
    coeffs: CoefficientSet
    params: WellParams

    @property
    def parity(self) -> Parity:
        return self.level.parity

    @property
    def E(self) -> float:
        return self.level.E

    @property
    def name(self) -> str:
        return self.level.name

    def psi(self, x):
        return eval_psi(x, self)

    def dpsi(self, x):
        return eval_dpsi(x, self)

    def regions(self):
        """Interface positions and the tail decay constant, for integrators."""
        p = self.params
        return (0.0, p.a, p.a + p.b, p.width), self.level.waves.chi_c


# ---------------------------------------------------------------------------
# scaled hyperbolic helpers; every function below is multiplied by exp(-x)

def _em(x: float) -> float:
    return math.exp(-x)


def _ch1p(x: float) -> float:
    """exp(-x) (1 + cosh x)."""
    return _em(x) + 0.5 * (1.0 + _em(2 * x))


def _chm1_x2(x: float) -> float:
    """exp(-x) (cosh x - 1) / x^2."""
    if x == 0.0:
        return 0.5
    return 0.5 * (math.expm1(-x) / x) ** 2


def _shc(x: float) -> float:
    """exp(-x) sinh(x) / x."""
    if x == 0.0:
        return 1.0
    return -math.expm1(-2 * x) / (2 * x)


_S3_SERIES = [1 / math.factorial(2 * n + 3) for n in range(7)]


def _sh3(x: float) -> float:
    """exp(-x) (sinh x - x) / x^3."""
    if x < 0.5:
        x2 = x * x
        s = 0.0
        for c in reversed(_S3_SERIES):
            s = s * x2 + c
        return _em(x) * s
    return (-0.5 * math.expm1(-2 * x) - x * _em(x)) / x ** 3


def _norm_terms(level: Level, p: WellParams):
    k, chi_c, chi = level.waves.k, level.waves.chi_c, level.waves.barrier.chi_b
    m0, mb, mc, a, b = p.m0, p.mb, p.mc, p.a, p.b
    x = b * chi
    g1 = (k * k * mc * mc * (1 + a * chi_c) + m0 * chi_c ** 2 * (mc + m0 * a * chi_c)) / chi_c
    pref = mb * (k * k * mc * mc + chi_c ** 2 * m0 * m0)
    if level.parity is S:
        num = k * k * mb * b * (_em(x) + _shc(x)) + chi * chi * m0 * b * _shc(x)
        den = k * k * mb * mb * _ch1p(x) + chi * chi * m0 * m0 * 0.5 * (-math.expm1(-x)) ** 2
    else:
        num = k * k * mb * b ** 3 * _sh3(x) + m0 * b * _shc(x)
        den = k * k * mb * mb * b * b * _chm1_x2(x) + m0 * m0 * _ch1p(x)
    return g1, pref * num / den


def normalization_constant(level: Level, p: WellParams) -> float:
    """C2s (symmetric) or C2a (antisymmetric): ``k mc / sqrt(G1 + G2)``."""
    _require_evanescent(level)
    g1, g2 = _norm_terms(level, p)
    return level.k * p.mc / math.sqrt(g1 + g2)


def normalization_constant_equal_mass(level: Level, p: WellParams) -> float:
    """Single-mass form of :func:`normalization_constant` (m0 = mb = mc)."""
    _require_evanescent(level)
    k, chi_c, chi = level.waves.k, level.waves.chi_c, level.waves.barrier.chi_b
    a, b = p.a, p.b
    x = b * chi
    sgn = level.parity.sign
    # (sgn b chi k^2 + (k^2 + chi^2) sinh x) / (sgn (k^2 - chi^2) + (k^2 + chi^2) cosh x)
    # with numerator and denominator multiplied by exp(-x)
    num = sgn * b * chi * k * k * _em(x) + (k * k + chi * chi) * 0.5 * (-math.expm1(-2 * x))
    den = sgn * (k * k - chi * chi) * _em(x) + (k * k + chi * chi) * 0.5 * (1 + _em(2 * x))
    inner = a * chi + chi * chi / chi_c ** 2 + num / den
    return math.sqrt(chi) * ((1 + chi_c ** 2 / k ** 2) * inner) ** -0.5


def _require_evanescent(level: Level) -> None:
    if not is_closed_form(level):
        raise RegimeUnsupported(
            f"closed forms need E < V_b (level {level.name} at E = {level.E})")


def _barrier_ratio(level: Level, p: WellParams) -> float:
    """|B2| / C2 from the closed form (mb e^{b chi} factor cancelled)."""
    k, chi_c, chi = level.waves.k, level.waves.chi_c, level.waves.barrier.chi_b
    m0, mb, mc = p.m0, p.mb, p.mc
    q = math.exp(-p.b * chi)
    if level.parity is S:
        root = (k * mb * (1 + q)) ** 2 + (chi * m0 * (1 - q)) ** 2
    else:
        root = (k * mb * (1 - q)) ** 2 + (chi * m0 * (1 + q)) ** 2
    return mb * math.sqrt((k * mc) ** 2 + (chi_c * m0) ** 2) / (mc * math.sqrt(root))


def _closed_form(level: Level, p: WellParams, c2: float, barrier_sign: int) -> CoefficientSet:
    k, chi_c = level.waves.k, level.waves.chi_c
    amp_a = c2 * chi_c * p.m0 / (k * p.mc)
    bb = barrier_sign * c2 * _barrier_ratio(level, p)
    if level.parity is S:
        return CoefficientSet(A1=amp_a, A2=amp_a, B1=c2, B2=bb, B3=bb, B4=c2, C1=c2, C2=c2)
    return CoefficientSet(A1=-amp_a, A2=amp_a, B1=-c2, B2=-bb, B3=bb, B4=c2, C1=-c2, C2=c2)


def coefficients(level: Level, p: WellParams) -> CoefficientSet:
    """Closed-form normalised amplitudes for a level below the barrier top.

    The sign of the barrier amplitudes is the one that satisfies the
    matching conditions at x = a and a + b.  The overall sign is then fixed
    so that psi(a/2) > 0.
    """
    _require_evanescent(level)
    res = det_relative_residual(level.E, level.parity, p)
    if res > ROOT_TOLERANCE:
        raise NotARoot(f"E = {level.E} is not a {level.parity.name.lower()} root "
                       f"(relative determinant {res:.3g})")
    c2 = normalization_constant(level, p)
    candidates = []
    for sign in (1, -1):
        cs = _closed_form(level, p, c2, sign)
        candidates.append((float(np.max(_residuals(cs, level, p))), cs))
    candidates.sort(key=lambda t: t[0])
    best_res, best = candidates[0]
    if best_res > RESIDUAL_TOLERANCE:
        raise NotARoot(f"no barrier sign satisfies the matching conditions "
                       f"(best residual {best_res:.3g})")
    if candidates[1][0] <= RESIDUAL_TOLERANCE:
        raise NotARoot("both barrier signs satisfy the matching conditions")
    return _fix_sign(best, level, p)


# ---------------------------------------------------------------------------
# linear-solve route

def matching_system(level: Level, p: WellParams) -> np.ndarray:
    """8x8 matching matrix at the level energy, valid in either regime.

    Same row and column order as :func:`dqw.spectrum.matching_matrix`;
    above V_b the B2, B3 columns refer to the cos/sin barrier basis.
    """
    if isinstance(level.waves.barrier, Evanescent):
        return matching_matrix(level.E, p)
    k, chi_c, kap = level.waves.k, level.waves.chi_c, level.waves.barrier.kappa_b
    m0, mb, mc = p.m0, p.mb, p.mc
    s, c = math.sin(p.a * k), math.cos(p.a * k)
    th = 0.5 * kap * p.b
    st, ct = math.sin(th), math.cos(th)
    M = np.zeros((8, 8))
    M[0] = [-k / m0, chi_c / mc, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    M[1] = [0.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    M[2] = [s, 0.0, c, -ct, st, 0.0, 0.0, 0.0]
    M[3] = [k * c / m0, 0.0, -k * s / m0, -kap * st / mb, -kap * ct / mb, 0.0, 0.0, 0.0]
    M[4] = [0.0, 0.0, 0.0, ct, st, -s, -c, 0.0]
    M[5] = [0.0, 0.0, 0.0, -kap * st / mb, kap * ct / mb, k * c / m0, -k * s / m0, 0.0]
    M[6] = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0]
    M[7] = [0.0, 0.0, 0.0, 0.0, 0.0, -k / m0, 0.0, chi_c / mc]
    return M


def _residuals(cs: CoefficientSet, level: Level, p: WellParams) -> np.ndarray:
    M = matching_system(level, p)
    v = cs.vector()
    scale = np.max(np.abs(M), axis=1) * np.max(np.abs(v))
    return np.abs(M @ v) / scale


def norm_squared(cs: CoefficientSet, level: Level, p: WellParams) -> float:
    """Exact integral of psi^2 over the real line for the given amplitudes."""
    k, chi_c = level.waves.k, level.waves.chi_c
    a, b = p.a, p.b
    s2, c2 = math.sin(2 * k * a), math.cos(2 * k * a)

    def well(A, C):
        return (A * A * (a / 2 - s2 / (4 * k)) + C * C * (a / 2 + s2 / (4 * k))
                + A * C * (1 - c2) / (2 * k))

    total = (cs.B1 ** 2 + cs.B4 ** 2) / (2 * chi_c) + well(cs.A1, cs.C1) + well(cs.A2, cs.C2)
    barrier = level.waves.barrier
    if isinstance(barrier, Evanescent):
        x = b * barrier.chi_b
        q = math.exp(-x)
        tail = b * (1.0 if x == 0.0 else -math.expm1(-2 * x) / (2 * x))
        total += (cs.B2 ** 2 + cs.B3 ** 2) * tail + 2 * cs.B2 * cs.B3 * b * q
    else:
        half_sinc = 0.5 * b * np.sinc(barrier.kappa_b * b / np.pi)
        total += cs.B2 ** 2 * (b / 2 + half_sinc) + cs.B3 ** 2 * (b / 2 - half_sinc)
    return total


# mirror x -> 2a+b-x on the coefficient vector (COLUMNS order); returns the
# column permutation and signs
def _mirror(level: Level):
    order = [COLUMNS.index(c) for c in ("A2", "B4", "C2", "B3", "B2", "A1", "C1", "B1")]
    signs = np.ones(8)
    if not isinstance(level.waves.barrier, Evanescent):
        # cos/sin basis about the centre: cos is even, sin odd
        order[3], order[4] = COLUMNS.index("B2"), COLUMNS.index("B3")
        signs[4] = -1.0
    return order, signs


def _parity_basis(level: Level) -> np.ndarray:
    """Orthonormal basis (8 x 4) of coefficient vectors with the level's parity."""
    order, signs = _mirror(level)
    R = np.zeros((8, 8))
    R[np.arange(8), order] = signs
    proj = 0.5 * (np.eye(8) + level.parity.sign * R)
    u, sv, _ = np.linalg.svd(proj)
    return u[:, sv > 0.5]


def coefficients_linear(level: Level, p: WellParams) -> CoefficientSet:
    """Amplitudes from the null vector of the matching system, normalised.

    The null vector is taken inside the subspace of the level's parity, so
    the result stays well defined when a symmetric/antisymmetric pair is
    degenerate to machine precision.
    """
    M = matching_system(level, p)
    Q = _parity_basis(level)
    ns = null_space(M @ Q, rcond=1e-8)
    if ns.shape[1] == 1:
        v = Q @ ns[:, 0]
    else:
        # take the smallest singular direction; the root is only as exact as
        # the refinement
        _, sv, vh = np.linalg.svd(M @ Q)
        if sv[-1] > ROOT_TOLERANCE * sv[0]:
            raise NotARoot(f"matching system at E = {level.E} is not singular "
                           f"(sigma_min/sigma_max = {sv[-1] / sv[0]:.3g})")
        v = Q @ vh[-1]
    cs = CoefficientSet.from_vector(v)
    cs = cs.scaled(1.0 / math.sqrt(norm_squared(cs, level, p)))
    return _fix_sign(cs, level, p)


def _fix_sign(cs: CoefficientSet, level: Level, p: WellParams) -> CoefficientSet:
    probe = BoundState(level, cs, p)
    for x in (0.5 * p.a, 0.25 * p.a, 0.75 * p.a, 0.0):
        val = float(probe.psi(x))
        if abs(val) > 1e-6 * cs.max_abs():
            return cs if val > 0 else cs.scaled(-1.0)
    return cs


def boundary_residuals(state: BoundState) -> np.ndarray:
    """Residuals of the eight matching equations, each divided by the largest
    matrix entry of its row and the largest amplitude.

    Order: flux and value at x = 0, value and flux at a, value and flux at
    a + b, value and flux at 2a + b.
    """
    return _residuals(state.coeffs, state.level, state.params)


def is_closed_form(level: Level) -> bool:
    """True when the closed-form amplitudes apply (E strictly below V_b)."""
    return isinstance(level.waves.barrier, Evanescent) and level.waves.barrier.chi_b > 0.0


def solve_state(level: Level, p: WellParams) -> BoundState:
    """Bound state for a level: closed form below V_b, linear solve above."""
    if is_closed_form(level):
        cs = coefficients(level, p)
    else:
        cs = coefficients_linear(level, p)
    return BoundState(level, cs, p)


def solve_states(p: WellParams, max_levels: Optional[int] = None) -> List[BoundState]:
    return [solve_state(lv, p) for lv in find_levels(p, max_levels)]


# ---------------------------------------------------------------------------
# pointwise evaluation

def _pieces(x, state: BoundState):
    p = state.params
    x = np.asarray(x, dtype=float)
    k, chi_c = state.level.waves.k, state.level.waves.chi_c
    a, b, w = p.a, p.b, p.width
    r1 = x < 0
    r2 = (x >= 0) & (x <= a)
    r3 = (x > a) & (x < a + b)
    r4 = (x >= a + b) & (x <= w)
    r5 = x > w
    return x, k, chi_c, (r1, r2, r3, r4, r5)


def eval_psi(x, state: BoundState):
    """psi(x) in nm^-1/2; accepts scalars or arrays."""
    x, k, chi_c, (r1, r2, r3, r4, r5) = _pieces(x, state)
    p, cs = state.params, state.coeffs
    a, b, w = p.a, p.b, p.width
    out = np.zeros_like(x)
    out[r1] = cs.B1 * np.exp(chi_c * x[r1])
    out[r2] = cs.A1 * np.sin(k * x[r2]) + cs.C1 * np.cos(k * x[r2])
    xb = x[r3]
    barrier = state.level.waves.barrier
    if isinstance(barrier, Evanescent):
        chi = barrier.chi_b
        out[r3] = cs.B2 * np.exp(chi * (a - xb)) + cs.B3 * np.exp(-chi * (a + b - xb))
    else:
        t = barrier.kappa_b * (xb - p.center)
        out[r3] = cs.B2 * np.cos(t) + cs.B3 * np.sin(t)
    u = w - x[r4]
    out[r4] = cs.A2 * np.sin(k * u) + cs.C2 * np.cos(k * u)
    out[r5] = cs.B4 * np.exp(chi_c * (w - x[r5]))
    return out if out.ndim else float(out)


def eval_dpsi(x, state: BoundState):
    """d psi / dx, with interfaces assigned to regions as in :func:`eval_psi`."""
    x, k, chi_c, (r1, r2, r3, r4, r5) = _pieces(x, state)
    p, cs = state.params, state.coeffs
    a, b, w = p.a, p.b, p.width
    out = np.zeros_like(x)
    out[r1] = chi_c * cs.B1 * np.exp(chi_c * x[r1])
    out[r2] = k * (cs.A1 * np.cos(k * x[r2]) - cs.C1 * np.sin(k * x[r2]))
    xb = x[r3]
    barrier = state.level.waves.barrier
    if isinstance(barrier, Evanescent):
        chi = barrier.chi_b
        out[r3] = chi * (-cs.B2 * np.exp(chi * (a - xb)) + cs.B3 * np.exp(-chi * (a + b - xb)))
    else:
        kap = barrier.kappa_b
        t = kap * (xb - p.center)
        out[r3] = kap * (-cs.B2 * np.sin(t) + cs.B3 * np.cos(t))
    u = w - x[r4]
    out[r4] = -k * (cs.A2 * np.cos(k * u) - cs.C2 * np.sin(k * u))
    out[r5] = -chi_c * cs.B4 * np.exp(chi_c * (w - x[r5]))
    return out if out.ndim else float(out)


def mass_at(x, p: WellParams, side: str = "right"):
    """Effective mass at x; at an interface ``side`` picks the neighbour."""
    x = np.asarray(x, dtype=float)
    a, b, w = p.a, p.b, p.width
    if side == "left":
        m = np.where(x <= 0, p.mc, np.where(x <= a, p.m0,
                     np.where(x <= a + b, p.mb, np.where(x <= w, p.m0, p.mc))))
    else:
        m = np.where(x < 0, p.mc, np.where(x < a, p.m0,
                     np.where(x < a + b, p.mb, np.where(x < w, p.m0, p.mc))))
    return m if m.ndim else float(m)


def check_same_params(*states: BoundState) -> WellParams:
    p = states[0].params
    for st in states[1:]:
        if st.params != p:
            raise ParameterMismatch("states belong to different well parameters")
    return p


__all__ = [
    "A", "S", "BoundState", "CoefficientSet", "boundary_residuals", "coefficients",
    "coefficients_linear", "eval_dpsi", "eval_psi", "is_closed_form", "matching_system",
    "normalization_constant", "normalization_constant_equal_mass", "norm_squared",
    "solve_state", "solve_states",
]
