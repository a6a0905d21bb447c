"""Cross-checks of the closed forms against the independent oracles.

Used by ``dqw validate`` and by the acceptance tests.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List

import numpy as np

from . import dipole, eigenstates, oracle, spectrum
from .params import WellParams


@dataclass
class Check:
    name: str
    max_dev: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.max_dev <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{status}  {self.name:<28s} max_dev={self.max_dev:.3e}  tol={self.tolerance:.1e}{extra}"


def _max(values) -> float:
    values = list(values)
    return float(max(values)) if values else 0.0


def check_spectrum(p: WellParams, levels) -> Check:
    ref = oracle.richardson_energies(p, count=len(levels) + 2)
    if len(ref) != len(levels):
        return Check("spectrum vs finite difference", np.inf, 1e-6,
                     f"{len(levels)} closed-form levels, {len(ref)} oracle levels")
    dev = _max(abs(lv.E - e) / e for lv, e in zip(levels, ref))
    return Check("spectrum vs finite difference", dev, 1e-6, f"{len(levels)} levels")


def check_factorization(p: WellParams, points: int = 100) -> Check:
    Es = np.linspace(0, p.vb, points + 2)[1:-1]
    dev = 0.0
    for E in Es:
        full = spectrum.det_full_matrix(E, p)
        fact = spectrum.det_factorized(E, p)
        dev = max(dev, abs(full - fact) / abs(full))
    return Check("determinant factorisation", dev, 1e-8, f"{points} energies")


def run_checks(p: WellParams) -> List[Check]:
    levels = spectrum.find_levels(p)
    states = [eigenstates.solve_state(lv, p) for lv in levels]
    checks = [check_spectrum(p, levels), check_factorization(p)]

    checks.append(Check("boundary residuals",
                        _max(eigenstates.boundary_residuals(s).max() for s in states), 1e-10))
    checks.append(Check("unit norm (quadrature)",
                        _max(abs(oracle.quad_norm(s) - 1) for s in states), 1e-10))
    pairs = list(itertools.combinations(states, 2))
    checks.append(Check("orthogonality",
                        _max(abs(oracle.quad_overlap(i, j)) for i, j in pairs), 1e-8))

    closed = [s for s in states if eigenstates.is_closed_form(s.level)]
    checks.append(Check("closed form vs linear solve",
                        _max(np.abs(eigenstates.coefficients_linear(s.level, p).vector()
                                    - s.coeffs.vector()).max() for s in closed), 1e-8,
                        f"{len(closed)} states"))

    same = [(i, j) for i, j in itertools.combinations_with_replacement(states, 2)
            if i.parity is j.parity]
    checks.append(Check("parity selection rule",
                        _max(abs(dipole.dipole_numeric(i, j)) for i, j in same), 1e-10))

    opposite = [(i, j) for i, j in pairs if i.parity is not j.parity]
    dev = 0.0
    for i, j in opposite:
        r = dipole.region_integrals(i, j)
        br = dipole.dipole_regions(i, j)
        dev = max(dev, abs(sum(r) - br.total))
    checks.append(Check("dipole region identity", dev, 1e-10))

    if p.equal_mass and p.equal_barriers:
        dev = 0.0
        usable = [(i, j) for i, j in opposite if dipole.closed_form_applicable(i, j)]
        for i, j in usable:
            cf = dipole.dipole_closed_form(i, j)
            num = dipole.dipole_numeric(i, j)
            dev = max(dev, abs(cf.total - num) / abs(num))
        checks.append(Check("closed-form dipole", dev, 1e-8, f"{len(usable)} pairs"))
    return checks


def report(p: WellParams) -> tuple:
    checks = run_checks(p)
    lines = [c.line() for c in checks]
    ok = all(c.passed for c in checks)
    lines.append("ALL PASS" if ok else "FAILED")
    return ok, "\n".join(lines)
