"""Command line interface: ``dqw levels|sweep|wavefunction|dipole|validate``.

Parameters come from a ``key = value`` config file (``--config``) and/or
per-parameter flags; flags win.  Tabular output is CSV with a header row,
floats written with 17 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import re
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import dipole, eigenstates, params, spectrum, validation
from .errors import ConfigError, DQWError, LevelNotFound, NoBoundStates, UnboundLevelRequested
from .params import WellParams

OVERRIDES = [
    ("--a-nm", "a_nm"), ("--b-nm", "b_nm"), ("--vb-ev", "vb_ev"), ("--vc-ev", "vc_ev"),
    ("--m0", "m0"), ("--mb", "mb"), ("--mc", "mc"),
]
SWEEP_PARAMS = {"b": "b", "a": "a", "vb": "vb", "V_b": "vb"}


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def write_csv(header: Sequence[str], rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def resolve_params(config_path: Optional[str], overrides: dict) -> WellParams:
    raw = params.load_config(config_path) if config_path else {}
    raw.update({k: v for k, v in overrides.items() if v is not None})
    return params.validate(raw)


def parse_transition(text: str) -> Tuple[int, int]:
    """'1s2a', '2a3s' or 'i,j' -> 1-based level indices."""
    t = text.strip().lower()
    m = re.fullmatch(r"(\d+)([sa])(\d+)([sa])", t) or re.fullmatch(r"(\d+)()\s*,\s*(\d+)()", t)
    if not m:
        raise argparse.ArgumentTypeError(f"bad transition {text!r}; use 1s2a, 2a3s or i,j")
    i, j = int(m.group(1)), int(m.group(3))
    for n, tag in ((i, m.group(2)), (j, m.group(4))):
        if tag and tag != ("s" if n % 2 else "a"):
            raise argparse.ArgumentTypeError(
                f"level {n} has parity {'s' if n % 2 else 'a'}, not {tag}")
    return i, j


def level_label(n: int) -> str:
    # ground state is even and parities alternate
    return f"{n}{'s' if n % 2 else 'a'}"


def transition_label(t: Tuple[int, int]) -> str:
    return level_label(t[0]) + level_label(t[1])


def _approx(p: WellParams, t: Tuple[int, int]) -> Optional[float]:
    try:
        return dipole.dipole_infinite_well_approx(p.a, p.b, transition_label(t))
    except ValueError:
        return None


def dipole_breakdown(si, sj) -> dipole.DipoleBreakdown:
    """Closed form where it applies, otherwise region-wise quadrature."""
    if dipole.closed_form_applicable(si, sj):
        return dipole.dipole_closed_form(si, sj)
    return dipole.dipole_regions(si, sj)


# ---------------------------------------------------------------------------
# commands as functions returning (header, rows)

def cmd_levels(p: WellParams, max_levels: Optional[int] = None):
    levels = spectrum.find_levels(p, max_levels)
    rows = [(lv.n, lv.parity.label, lv.E, lv.k) for lv in levels]
    return ["n", "parity", "E_eV", "k_per_nm"], rows


def _sweep_point(args):
    p, n_levels, transitions = args
    try:
        levels = spectrum.find_levels(p)
    except NoBoundStates:
        levels = []
    by_n = {lv.n: lv for lv in levels}
    row = [by_n[n].E if n in by_n else None for n in range(1, n_levels + 1)]
    missing = [n for n in range(1, n_levels + 1) if n not in by_n]
    states = {}
    for t in transitions:
        if t[0] not in by_n or t[1] not in by_n:
            missing.extend(n for n in t if n not in by_n)
            row.extend([None] * 5)
            continue
        for n in t:
            if n not in states:
                states[n] = eigenstates.solve_state(by_n[n], p)
        br = dipole_breakdown(states[t[0]], states[t[1]])
        row.extend([br.d1, br.d2, br.d3, br.total, _approx(p, t)])
    return row, sorted(set(missing))


def sweep_values(start: float, stop: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError("steps must be >= 2")
    if not start < stop:
        raise ValueError("sweep needs from < to")
    return np.linspace(start, stop, steps)


def cmd_sweep(p: WellParams, param: str, start: float, stop: float, steps: int,
              n_levels: int = 2, transitions: Sequence[Tuple[int, int]] = (),
              jobs: int = 1):
    field = SWEEP_PARAMS[param]
    values = sweep_values(start, stop, steps)
    points = [(p.with_(**{field: float(v)}), n_levels, tuple(transitions)) for v in values]
    if jobs != 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs if jobs > 0 else None) as pool:
            results = list(pool.map(_sweep_point, points))
    else:
        results = [_sweep_point(pt) for pt in points]

    unit = {"b": "b_nm", "a": "a_nm", "vb": "vb_ev"}[field]
    header = [unit] + [f"E_{level_label(n)}" for n in range(1, n_levels + 1)]
    for t in transitions:
        lab = transition_label(t)
        header += [f"d1_{lab}", f"d2_{lab}", f"d3_{lab}", f"total_{lab}", f"approx_{lab}"]
    rows, missing = [], set()
    for v, (row, miss) in zip(values, results):
        rows.append([float(v)] + row)
        missing.update(miss)
    if missing:
        warnings.warn("level(s) " + ", ".join(level_label(n) for n in sorted(missing))
                      + " not bound at some sweep points; cells left empty",
                      UnboundLevelRequested, stacklevel=2)
    return header, rows


def cmd_wavefunction(p: WellParams, level: str, samples: int = 1001, pad: float = 5.0):
    levels = spectrum.find_levels(p)
    lv = spectrum.level_by_name(levels, level)
    state = eigenstates.solve_state(lv, p)
    x = np.linspace(-pad, p.width + pad, samples)
    psi = state.psi(x)
    return ["x_nm", "psi"], list(zip(x, psi))


def cmd_dipole(p: WellParams, transition: Tuple[int, int], b_values=None):
    if b_values is None:
        b_values = [p.b]
    rows = []
    for b in b_values:
        q = p.with_(b=float(b))
        levels = spectrum.find_levels(q)
        by_n = {lv.n: lv for lv in levels}
        if transition[0] not in by_n or transition[1] not in by_n:
            raise LevelNotFound(f"transition {transition_label(transition)} not bound at b = {b}")
        si = eigenstates.solve_state(by_n[transition[0]], q)
        sj = eigenstates.solve_state(by_n[transition[1]], q)
        br = dipole_breakdown(si, sj)
        rows.append([float(b), br.d1, br.d2, br.d3, br.total, _approx(q, transition)])
    return ["b_nm", "d1", "d2", "d3", "total", "approx"], rows


def cmd_validate(p: WellParams) -> Tuple[bool, str]:
    return validation.report(p)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value parameter file")
    for flag, key in OVERRIDES:
        common.add_argument(flag, dest=key, type=float, default=None)
    common.add_argument("--out", default="-", help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="dqw", description="Symmetric double quantum well solver")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("levels", parents=[common], help="bound-state energies")
    sp.add_argument("--levels", type=int, default=None, help="at most N levels")

    sp = sub.add_parser("sweep", parents=[common], help="energies and dipoles vs a parameter")
    sp.add_argument("--param", choices=sorted(SWEEP_PARAMS), default="b")
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--levels", type=int, default=2)
    sp.add_argument("--transition", type=parse_transition, action="append", default=[])
    sp.add_argument("--jobs", type=int, default=0, help="worker processes (0: all cores)")

    sp = sub.add_parser("wavefunction", parents=[common], help="sampled psi(x)")
    sp.add_argument("--level", required=True, help="level index or name, e.g. 1 or 2a")
    sp.add_argument("--samples", type=int, default=1001)
    sp.add_argument("--pad-nm", type=float, default=5.0)

    sp = sub.add_parser("dipole", parents=[common], help="dipole breakdown, optionally vs b")
    sp.add_argument("--transition", type=parse_transition, default=(1, 2))
    sp.add_argument("--from", dest="start", type=float)
    sp.add_argument("--to", dest="stop", type=float)
    sp.add_argument("--steps", type=int)

    sub.add_parser("validate", parents=[common], help="cross-check against the oracles")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {key: getattr(args, key) for _, key in OVERRIDES}
    try:
        p = resolve_params(args.config, overrides)
    except (ConfigError, OSError) as exc:
        parser.error(str(exc))
    except DQWError as exc:
        parser.error(f"invalid parameters: {exc}")

    buf = io.StringIO()
    status = 0
    try:
        if args.command == "levels":
            header, rows = cmd_levels(p, args.levels)
        elif args.command == "sweep":
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", UnboundLevelRequested)
                header, rows = cmd_sweep(p, args.param, args.start, args.stop, args.steps,
                                         args.levels, args.transition, args.jobs)
            for w in caught:
                print(f"dqw: warning: {w.message}", file=sys.stderr)
        elif args.command == "wavefunction":
            header, rows = cmd_wavefunction(p, args.level, args.samples, args.pad_nm)
        elif args.command == "dipole":
            b_values = None
            if args.steps is not None or args.start is not None or args.stop is not None:
                if None in (args.start, args.stop, args.steps):
                    parser.error("--from, --to and --steps go together")
                b_values = sweep_values(args.start, args.stop, args.steps)
            header, rows = cmd_dipole(p, args.transition, b_values)
        else:
            ok, text = cmd_validate(p)
            buf.write(text + "\n")
            header = None
            status = 0 if ok else 1
    except (DQWError, ValueError) as exc:
        print(f"dqw: error: {exc}", file=sys.stderr)
        return 1
    if header is not None:
        write_csv(header, rows, buf)

    if args.out == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    return status


if __name__ == "__main__":
    sys.exit(main())
