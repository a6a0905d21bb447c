"""Well parameters, unit conventions and energy <-> wavevector conversion.

Units throughout the package: lengths in nm, energies in eV, effective
masses in units of the free electron mass.  In these units

    E = HBAR2_2ME * k**2 / m

with k in 1/nm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Mapping, Union

from .errors import (BarrierAboveConfinement, ConfigError, EnergyOutOfRange,
                     NonPositiveDimension, NonPositiveMass,
                     NonPositivePotential)

# hbar^2 / (2 m_e) in eV nm^2, from CODATA 2018 hbar, m_e and e
# (3.80998212 eV A^2).
HBAR2_2ME = 0.03809982


@dataclass(frozen=True)
class WellParams:
    """Symmetric square double quantum well.

    Two wells of width ``a`` separated by a barrier of width ``b`` and
    height ``vb``; the structure is confined by outer barriers of height
    ``vc``.  ``m0``, ``mb``, ``mc`` are the effective masses in the wells,
    the central barrier and the confining barriers.  The left well occupies
    ``[0, a]`` and the structure centre is at ``a + b/2``.
    """

    a: float
    b: float
    vb: float
    vc: float
    m0: float
    mb: float
    mc: float

    def __post_init__(self):
        for name in ("a", "b", "vb", "vc", "m0", "mb", "mc"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.a <= 0:
            raise NonPositiveDimension(f"well width a must be > 0, got {self.a}")
        if self.b < 0:
            raise NonPositiveDimension(f"barrier width b must be >= 0, got {self.b}")
        for name in ("m0", "mb", "mc"):
            if getattr(self, name) <= 0:
                raise NonPositiveMass(f"{name} must be > 0, got {getattr(self, name)}")
        if self.vb <= 0 or self.vc <= 0:
            raise NonPositivePotential(
                f"barrier heights must be > 0, got vb={self.vb}, vc={self.vc}")
        if self.vb > self.vc:
            raise BarrierAboveConfinement(
                f"central barrier vb={self.vb} exceeds confinement vc={self.vc}")

    @property
    def center(self) -> float:
        return self.a + 0.5 * self.b

    @property
    def width(self) -> float:
        """Total extent ``2a + b`` of the wells plus central barrier."""
        return 2.0 * self.a + self.b

    @property
    def equal_mass(self) -> bool:
        return self.m0 == self.mb == self.mc

    @property
    def equal_barriers(self) -> bool:
        return self.vb == self.vc

    def with_(self, **changes) -> "WellParams":
        return replace(self, **changes)

    def as_config(self) -> dict:
        return {CONFIG_KEYS_REVERSE[f.name]: getattr(self, f.name) for f in fields(self)}


# config file key -> WellParams field
CONFIG_KEYS = {
    "a_nm": "a",
    "b_nm": "b",
    "vb_ev": "vb",
    "vc_ev": "vc",
    "m0": "m0",
    "mb": "mb",
    "mc": "mc",
}
CONFIG_KEYS_REVERSE = {v: k for k, v in CONFIG_KEYS.items()}

#: GaAs wells in Ga0.8Al0.2As barriers, a = 6 nm, b = 5 nm.
GAAS = WellParams(a=6.0, b=5.0, vb=0.1671, vc=0.1671, m0=0.067, mb=0.0836, mc=0.0836)


def validate(raw: Union[Mapping[str, float], WellParams]) -> WellParams:
    """Build a :class:`WellParams` from a mapping.

    Keys may be either the config-file names (``a_nm``, ``vb_ev``, ...) or
    the field names (``a``, ``vb``, ...).  Raises a subclass of
    :class:`~dqw.errors.InvalidParameters` on physically invalid input and
    :class:`~dqw.errors.ConfigError` on missing or unknown keys.
    """
    if isinstance(raw, WellParams):
        return raw
    values = {}
    for key, value in raw.items():
        name = CONFIG_KEYS.get(key, key)
        if name not in CONFIG_KEYS_REVERSE:
            raise ConfigError(f"unknown parameter {key!r}")
        values[name] = float(value)
    missing = [CONFIG_KEYS_REVERSE[n] for n in CONFIG_KEYS.values() if n not in values]
    if missing:
        raise ConfigError("missing parameters: " + ", ".join(missing))
    return WellParams(**values)


def parse_config(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines into a ``{config_key: float}`` dict.

    Blank lines and ``#`` comments are ignored.  Errors carry the line number.
    """
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}; "
                              f"expected one of {', '.join(CONFIG_KEYS)}")
        try:
            out[key] = float(value)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: value for {key!r} is not a number: {value!r}")
    return out


def load_config(path) -> dict:
    with open(path) as fh:
        return parse_config(fh.read(), source=str(path))


@dataclass(frozen=True)
class Evanescent:
    """Barrier mode for E <= V_b: decaying waves with constant ``chi_b``."""
    chi_b: float


@dataclass(frozen=True)
class Propagating:
    """Barrier mode for E > V_b: oscillating waves with wavevector ``kappa_b``."""
    kappa_b: float


BarrierMode = Union[Evanescent, Propagating]


@dataclass(frozen=True)
class WaveNumbers:
    k: float
    chi_c: float
    barrier: BarrierMode

    @property
    def evanescent(self) -> bool:
        return isinstance(self.barrier, Evanescent)


def _wavenumbers(E: float, p: WellParams) -> WaveNumbers:
    # no range check: callers inside the package evaluate at the closed
    # interval end points
    C = HBAR2_2ME
    k = math.sqrt(max(E, 0.0) * p.m0 / C)
    chi_c = math.sqrt(max(p.vc - E, 0.0) * p.mc / C)
    if E <= p.vb:
        barrier = Evanescent(math.sqrt((p.vb - E) * p.mb / C))
    else:
        barrier = Propagating(math.sqrt((E - p.vb) * p.mb / C))
    return WaveNumbers(k, chi_c, barrier)


def check_energy(E: float, p: WellParams) -> None:
    if not (0.0 < E < p.vc):
        raise EnergyOutOfRange(f"energy {E!r} eV outside the bound range (0, {p.vc})")


def wavenumbers(E: float, p: WellParams) -> WaveNumbers:
    """Wavevectors at energy ``E`` (eV), for ``0 < E < V_c``.

    ``E == V_b`` is assigned to the evanescent branch with ``chi_b = 0``.
    """
    check_energy(E, p)
    return _wavenumbers(E, p)


def energy_from_k(k: float, p: WellParams) -> float:
    return HBAR2_2ME * k * k / p.m0


def k_from_energy(E: float, p: WellParams) -> float:
    return math.sqrt(E * p.m0 / HBAR2_2ME)
