"""Optical dipole matrix elements between bound states.

    d = int psi_i(x) (x - a - b/2) psi_j(x) dx = 2 d1 + 2 d2 + d3

where d1 is the contribution of each confining barrier, d2 of each well and
d3 of the central barrier (the outer regions contribute equally for states
of opposite parity).

For one effective mass everywhere and V_b = V_c the three contributions
have closed forms in (k_s, chi_s) of the symmetric state and (k_a, chi_a)
of the antisymmetric one; :func:`dipole_closed_form` evaluates them with
all exponentials rescaled.  The barrier term uses

    v2 = -2 (chi_a^2 + chi_s^2) cosh(b chi_s / 2)
         + b chi_s (chi_s^2 - chi_a^2) sinh(b chi_s / 2)

The factor on the sinh term is b.  The alternative reading 4b
disagrees with direct integration of the barrier wavefunctions by O(1); see
``tests/test_dipole.py::test_v2_sinh_coefficient``.

The well term d2 = d2N / d2D carries, besides the oscillating p1..p4 terms
from the upper limit x = a, a constant term from the lower limit x = 0:

    d2N = -1/2 r_s r_a [(k_s - k_a)^2 (p1 - p3) - (k_s + k_a)^2 (p2 - p4) + p0]
    p0  = 2 k_s k_a [(2a + b)(k_s^2 - k_a^2)(chi_a - chi_s)
                     - 4 chi_s chi_a - 2 k_s^2 - 2 k_a^2]

Without p0 the well term is wrong by O(1)
(``tests/test_dipole.py::test_d2_lower_limit_term``).

The well and barrier terms are ratios that both vanish as the pair becomes
degenerate (wide barriers), so the closed form loses about
eps / (dk/k)^2 of relative accuracy; pairs closer than ``MIN_K_SEPARATION``
are refused.

:func:`dipole_numeric` integrates region by region with adaptive
Gauss-Kronrod quadrature and works for any masses and regimes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from scipy.integrate import quad

from .eigenstates import BoundState, check_same_params
from .errors import ParameterMismatch, PreconditionViolated
from .params import Evanescent
from .spectrum import A, S

QUAD_EPSABS = 1e-14
QUAD_EPSREL = 1e-13
TAIL_CUTOFF = 1e-16

V2_SINH_COEFFICIENT = 1.0
# the well and barrier terms divide by (k_s^2 - k_a^2)^2 and (chi_s - chi_a)^2;
# below this relative k separation the cancellation costs more than 1e-8
MIN_K_SEPARATION = 3e-5


@dataclass(frozen=True)
class DipoleBreakdown:
    """Region contributions in nm; ``total = 2 d1 + 2 d2 + d3``."""

    d1: float
    d2: float
    d3: float

    @property
    def total(self) -> float:
        return 2.0 * self.d1 + 2.0 * self.d2 + self.d3

    @property
    def magnitude(self) -> float:
        return abs(self.total)


def _order(i: BoundState, j: BoundState) -> Tuple[BoundState, BoundState]:
    if i.parity is S and j.parity is A:
        return i, j
    if i.parity is A and j.parity is S:
        return j, i
    raise PreconditionViolated(
        f"closed-form dipole needs one symmetric and one antisymmetric state, "
        f"got {i.name} and {j.name}")


def _check_closed_form(i: BoundState, j: BoundState):
    p = check_same_params(i, j)
    if not (p.equal_mass and p.equal_barriers):
        raise PreconditionViolated("closed-form dipole needs m0 == mb == mc and vb == vc")
    s, a = _order(i, j)
    for st in (s, a):
        if not isinstance(st.level.waves.barrier, Evanescent) or st.level.waves.barrier.chi_b <= 0:
            raise PreconditionViolated(f"state {st.name} is not below the barrier top")
    sep = abs(s.level.k - a.level.k) / max(s.level.k, a.level.k)
    if sep < MIN_K_SEPARATION:
        raise PreconditionViolated(
            f"{s.name} and {a.name} are nearly degenerate (relative k separation {sep:.2g}); "
            "the closed form loses precision, use dipole_numeric")
    return p, s, a


def closed_form_applicable(i: BoundState, j: BoundState) -> bool:
    """True when :func:`dipole_closed_form` accepts the pair."""
    try:
        _check_closed_form(i, j)
    except (PreconditionViolated, ParameterMismatch):
        return False
    return True


def dipole_closed_form(i: BoundState, j: BoundState,
                       v2_sinh_coefficient: float = V2_SINH_COEFFICIENT,
                       d2_lower_limit: bool = True) -> DipoleBreakdown:
    """Closed-form region contributions to the dipole between opposite-parity
    states (single effective mass, V_b = V_c, both states below V_b).

    The result follows the sign convention of the states passed in.
    ``v2_sinh_coefficient`` and ``d2_lower_limit`` exist so the barrier and
    well terms can be checked against alternative transcriptions.
    """
    p, s, a = _check_closed_form(i, j)
    ks, xs = s.level.waves.k, s.level.waves.chi_c
    ka, xa = a.level.waves.k, a.level.waves.chi_c
    aw, b = p.a, p.b
    bs, ba = b * xs, b * xa
    es, ea = math.exp(-bs), math.exp(-ba)
    sig = xs + xa

    # exp(-b chi/2)-scaled r and delta
    r_s = math.sqrt(xs * ((ks ** 2 - xs ** 2) * es + (ks ** 2 + xs ** 2) * 0.5 * (1 + es * es)))
    r_a = math.sqrt(xa * (-(ka ** 2 - xa ** 2) * ea + (ka ** 2 + xa ** 2) * 0.5 * (1 + ea * ea)))
    delta_s = math.sqrt(
        (-xs ** 2 * (1 + aw * xs) + ks ** 2 * (1 + (aw + b) * xs)) * es
        + (ks ** 2 + xs ** 2) * ((1 + aw * xs) * 0.5 * (1 + es * es) + 0.5 * (1 - es * es)))
    delta_a = math.sqrt(
        (xa ** 2 * (1 + aw * xa) - ka ** 2 * (1 + (aw + b) * xa)) * ea
        + (ka ** 2 + xa ** 2) * ((1 + aw * xa) * 0.5 * (1 + ea * ea) + 0.5 * (1 - ea * ea)))

    d1_num = ks * ka * (2 + (2 * aw + b) * sig) * r_s * r_a
    d1_den = 2 * sig ** 2 * math.sqrt((ks ** 2 + xs ** 2) * (ka ** 2 + xa ** 2)) * delta_s * delta_a
    d1 = d1_num / d1_den

    kp, km = ks + ka, ks - ka
    p1 = (b * kp * (ks * xa + ka * xs) + 2 * ks * ka - 2 * xs * xa) * math.cos(aw * kp)
    p2 = (b * km * (ks * xa - ka * xs) - 2 * ks * ka - 2 * xs * xa) * math.cos(aw * km)
    p3 = (b * kp * (ks * ka - xs * xa) - 2 * ks * xa - 2 * ka * xs) * math.sin(aw * kp)
    p4 = (b * (ka - ks) * (ks * ka + xs * xa) + 2 * ka * xs - 2 * ks * xa) * math.sin(aw * km)
    p0 = 0.0
    if d2_lower_limit:
        p0 = 2 * ks * ka * ((2 * aw + b) * (ks ** 2 - ka ** 2) * (xa - xs)
                            - 4 * xs * xa - 2 * ks ** 2 - 2 * ka ** 2)
    d2_num = -0.5 * r_s * r_a * (km ** 2 * (p1 - p3) - kp ** 2 * (p2 - p4) + p0)
    d2_den = (ks ** 2 - ka ** 2) ** 2 / sig ** 2 * d1_den
    d2 = d2_num / d2_den

    # half-angle hyperbolics scaled by exp(-x/2)
    hs, ha = math.exp(-0.5 * bs), math.exp(-0.5 * ba)
    chs, shs = 0.5 * (1 + hs * hs), 0.5 * (1 - hs * hs)
    cha, sha = 0.5 * (1 + ha * ha), 0.5 * (1 - ha * ha)
    v1 = -ba * (xs ** 2 - xa ** 2) * chs + 4 * xs * xa * shs
    v2 = (-2 * (xa ** 2 + xs ** 2) * chs
          + v2_sinh_coefficient * bs * (xs ** 2 - xa ** 2) * shs)
    d3_num = -4 * ks * ka * r_s * r_a * (v1 * cha + v2 * sha)
    s_s = math.sqrt(((1 + es) ** 2 * ks ** 2 + (1 - es) ** 2 * xs ** 2) / (ks ** 2 + xs ** 2))
    s_a = math.sqrt(((1 - ea) ** 2 * ka ** 2 + (1 + ea) ** 2 * xa ** 2) / (ka ** 2 + xa ** 2))
    d3_den = 0.5 * (xs - xa) ** 2 * s_s * s_a * d1_den
    # the closed form assumes a barrier-amplitude sign pairing; correct it with
    # the actual amplitudes (both states with C2 > 0 in the closed form)
    d3 = d3_num / d3_den * -_sgn(s.coeffs.B2 * s.coeffs.C2) * _sgn(a.coeffs.B3 * a.coeffs.C2)

    # the expressions are for C2 > 0 in both states
    flip = _sgn(s.coeffs.C2) * _sgn(a.coeffs.C2)
    return DipoleBreakdown(flip * d1, flip * d2, flip * d3)


def _sgn(x: float) -> float:
    return 1.0 if x >= 0 else -1.0


# ---------------------------------------------------------------------------
# quadrature

def _tail_length(i: BoundState, j: BoundState) -> float:
    chi = i.level.waves.chi_c + j.level.waves.chi_c
    return -math.log(TAIL_CUTOFF) / chi


def region_integrals(i: BoundState, j: BoundState, weight=None):
    """Integrals of psi_i * w(x) * psi_j over the five regions, left to right.

    ``weight`` defaults to the dipole operator x - a - b/2.  The outer
    regions are truncated where the integrand has decayed by 1e-16.
    """
    p = check_same_params(i, j)
    c = p.center
    if weight is None:
        def weight(x):
            return x - c
    tail = _tail_length(i, j)
    edges = [-tail, 0.0, p.a, p.a + p.b, p.width, p.width + tail]

    def f(x):
        return i.psi(x) * weight(x) * j.psi(x)

    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo:
            out.append(0.0)
            continue
        val, _ = quad(f, lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=400)
        out.append(val)
    return out


def dipole_regions(i: BoundState, j: BoundState) -> DipoleBreakdown:
    """Region contributions by quadrature, in the :class:`DipoleBreakdown`
    layout (regions 1/5 and 2/4 averaged)."""
    r = region_integrals(i, j)
    return DipoleBreakdown(0.5 * (r[0] + r[4]), 0.5 * (r[1] + r[3]), r[2])


def dipole_numeric(i: BoundState, j: BoundState) -> float:
    """Dipole matrix element by region-wise adaptive quadrature (nm)."""
    return float(sum(region_integrals(i, j)))


def dipole_infinite_well_approx(a: float, b: float, transition: str) -> float:
    """Hard-wall estimate: (a+b)/2 for 1s-2a, 16a/(9 pi^2) for 2a-3s."""
    t = transition.replace("-", "").replace(",", "").lower()
    if t in ("1s2a", "2a1s"):
        return 0.5 * (a + b)
    if t in ("2a3s", "3s2a"):
        return 16.0 * a / (9.0 * math.pi ** 2)
    raise ValueError(f"no infinite-well estimate for transition {transition!r}")
