"""Acceptance criteria, one test each.

Every test records a one-line PASS/FAIL verdict with its measured deviation;
the lines are printed in the terminal summary (see conftest.py) and when the
module is run as a script.
"""
import itertools
import time
from dataclasses import dataclass

import numpy as np
import pytest

from dqw import oracle, params
from dqw.dipole import (dipole_closed_form, dipole_infinite_well_approx, dipole_numeric,
                        dipole_regions)
from dqw.eigenstates import boundary_residuals, solve_states
from dqw.errors import InvalidParameters
from dqw.params import GAAS, WellParams
from dqw.spectrum import A, S, det_full_matrix, det_factorized, find_levels

EQUAL = GAAS.with_(mb=GAAS.m0, mc=GAAS.m0)
B_ORACLE = (1.0, 3.0, 5.0, 8.0, 15.0)
B_SWEEP = np.arange(1.0, 16.0)

# Richardson-extrapolated finite-difference gap at b = 15 nm
GAP_B15 = 3.5088893934165366e-05


@dataclass
class Verdict:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{self.number}] {'PASS' if self.passed else 'FAIL'}  {self.title}: {self.detail}"


RESULTS = {}


def record(number, title, passed, detail):
    v = Verdict(number, title, bool(passed), detail)
    RESULTS[number] = v
    print(v.line())
    assert v.passed, v.line()


def test_1_spectrum_matches_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    for b in B_ORACLE:
        p = GAAS.with_(b=b)
        levels = find_levels(p)
        ref = oracle.richardson_energies(p, count=len(levels) + 2)
        assert len(ref) == len(levels), f"b={b}: {len(levels)} levels vs {len(ref)} from oracle"
        worst = max(worst, max(abs(lv.E - e) / e for lv, e in zip(levels, ref)))
    dt = time.perf_counter() - t0
    record(1, "spectrum vs finite difference", worst < 1e-6 and dt < 60,
           f"max rel dev {worst:.2e} (tol 1e-6), {dt:.1f} s (limit 60 s)")


def test_2_determinant_factorization():
    rng = np.random.default_rng(20240601)
    sets = []
    while len(sets) < 5:
        vc = rng.uniform(0.1, 0.5)
        try:
            sets.append(WellParams(a=rng.uniform(2, 12), b=rng.uniform(0.5, 20),
                                   vb=rng.uniform(0.05, vc), vc=vc, m0=rng.uniform(0.04, 0.1),
                                   mb=rng.uniform(0.04, 0.15), mc=rng.uniform(0.04, 0.15)))
        except InvalidParameters:
            continue
    t0 = time.perf_counter()
    worst = 0.0
    for p in sets:
        for E in np.linspace(0.0, p.vb, 102)[1:-1]:
            full = det_full_matrix(E, p)
            worst = max(worst, abs(full - det_factorized(E, p)) / abs(full))
    dt = time.perf_counter() - t0
    record(2, "determinant factorization", worst < 1e-8 and dt < 1.0,
           f"max rel dev {worst:.2e} (tol 1e-8) over 5 x 100 energies, {dt:.2f} s (limit 1 s)")


def test_3_eigenfunction_contracts():
    t0 = time.perf_counter()
    states = solve_states(GAAS)
    res = max(boundary_residuals(s).max() for s in states)
    norm = max(abs(oracle.quad_norm(s) - 1) for s in states)
    ortho = max(abs(oracle.quad_overlap(i, j)) for i, j in itertools.combinations(states, 2))
    dt = time.perf_counter() - t0
    record(3, "eigenfunction contracts",
           res < 1e-10 and norm < 1e-10 and ortho < 1e-8 and dt < 10,
           f"{len(states)} states; residual {res:.1e} (1e-10), norm {norm:.1e} (1e-10), "
           f"overlap {ortho:.1e} (1e-8), {dt:.1f} s")


def test_4_closed_form_dipoles():
    t0 = time.perf_counter()
    worst_total = worst_part = 0.0
    pairs = 0
    for b in B_SWEEP:
        states = solve_states(EQUAL.with_(b=float(b)))
        for i, j in ((0, 1), (1, 2)):
            if j >= len(states):
                continue
            cf = dipole_closed_form(states[i], states[j])
            num = dipole_numeric(states[i], states[j])
            parts = dipole_regions(states[i], states[j])
            worst_total = max(worst_total, abs(cf.total - num) / abs(num))
            for name in ("d1", "d2", "d3"):
                ref = getattr(parts, name)
                worst_part = max(worst_part, abs(getattr(cf, name) - ref) / abs(ref))
            pairs += 1
    dt = time.perf_counter() - t0
    record(4, "closed-form dipole equivalence",
           worst_total < 1e-8 and worst_part < 1e-8 and pairs == 30 and dt < 10,
           f"{pairs} pairs; total {worst_total:.1e}, components {worst_part:.1e} (tol 1e-8), "
           f"{dt:.1f} s")


def test_5_splitting_trend():
    bs = np.linspace(1.0, 15.0, 141)
    gaps, lows, highs = [], [], []
    for b in bs:
        lv = find_levels(GAAS.with_(b=float(b)), max_levels=2)
        gaps.append(lv[1].E - lv[0].E)
        lows.append(lv[0].E)
        highs.append(lv[1].E)
    gaps = np.array(gaps)
    decreasing = bool(np.all(np.diff(gaps) < 0))
    iso = next(E for E, tag in oracle.single_well_levels(GAAS.a, GAAS.vc, GAAS.m0, GAAS.mc,
                                                         c=params.HBAR2_2ME) if tag == "s")
    approach = max(abs(lows[-1] - iso), abs(highs[-1] - iso))
    golden = abs(gaps[-1] - GAP_B15) / GAP_B15
    record(5, "tunnel splitting vs barrier width",
           decreasing and gaps[-1] < 2e-3 and approach < 1e-4 and golden < 1e-4,
           f"strictly decreasing={decreasing}; gap(15 nm) {gaps[-1]:.4e} eV (< 2e-3, "
           f"oracle {GAP_B15:.4e}); distance to isolated well {approach:.1e} eV")


def test_6_dipole_trends():
    d12, d23 = [], []
    for b in B_SWEEP:
        states = solve_states(GAAS.with_(b=float(b)))
        d12.append(abs(dipole_numeric(states[0], states[1])))
        d23.append(abs(dipole_numeric(states[1], states[2])))
    slope = np.polyfit(B_SWEEP, d12, 1)[0]
    approx = dipole_infinite_well_approx(GAAS.a, 0.0, "2a3s")
    dev = np.abs(np.array(d23) / approx - 1)
    slope_ok = abs(slope / 0.5 - 1) < 0.25
    flat_ok = bool(np.all(dev < 0.35))
    record(6, "dipole trends",
           slope_ok and flat_ok,
           f"d_1s2a slope {slope:.4f} ({'within' if slope_ok else 'outside'} 25% of 0.5); "
           f"|d_2a3s| {min(d23):.3f}..{max(d23):.3f} nm vs {approx:.4f}, max dev "
           f"{dev.max():.0%} ({'within' if flat_ok else 'outside'} 35%)")


def test_7_parity_selection():
    worst = 0.0
    for b in (1.0, 5.0, 15.0):
        states = solve_states(GAAS.with_(b=b))
        for i, j in itertools.combinations_with_replacement(states, 2):
            if i.parity is j.parity:
                worst = max(worst, abs(dipole_numeric(i, j)))
    record(7, "parity selection rule", worst < 1e-10, f"max |d| {worst:.1e} nm (tol 1e-10)")


def test_8_limits():
    c = params.HBAR2_2ME
    merged = find_levels(GAAS.with_(b=0.0))
    single = oracle.single_well_levels(2 * GAAS.a, GAAS.vc, GAAS.m0, GAAS.mc, c=c)
    zero_ok = len(merged) == len(single) and all(
        lv.parity.label == tag for lv, (_, tag) in zip(merged, single))
    dev0 = max(abs(lv.E - E) for lv, (E, _) in zip(merged, single))

    wide = find_levels(GAAS.with_(b=200.0))
    iso = [E for E, _ in oracle.single_well_levels(GAAS.a, GAAS.vc, GAAS.m0, GAAS.mc, c=c)]
    per_level = []
    for parity in (S, A):
        levels = [lv.E for lv in wide if lv.parity is parity]
        zero_ok &= len(levels) == len(iso)
        per_level.append([abs(E - ref) for E, ref in zip(levels, iso)])
    dev_inf = max(max(d) for d in per_level)
    by_level = ", ".join(f"level {n + 1}: {max(d[n] for d in per_level):.1e}"
                         for n in range(len(iso)))
    record(8, "b = 0 and b = 200 nm reductions",
           zero_ok and dev0 < 1e-8 and dev_inf < 1e-8,
           f"b=0 vs width-2a well {dev0:.1e} eV; b=200 vs width-a well {by_level} eV (tol 1e-8)")


def test_9_oracle_convergence():
    order = oracle.convergence_order(GAAS, count=3, h=0.04)
    ok = bool(np.all((order >= 1.9) & (order <= 2.1)))
    record(9, "oracle grid convergence order", ok,
           "orders " + ", ".join(f"{o:.4f}" for o in order) + " (in [1.9, 2.1])")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
