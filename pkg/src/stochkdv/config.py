"""Run configuration: key = value text files describing a scenario plus its
grids and seed.

Example::

    kind = additive
    alpha = const(0.0)
    beta = const(1.0)
    gamma = const(0.0)
    delta = const(1.0)
    mu = const(1.0)
    sigma = const(1.0)
    phi = wave
    t0 = 0.0
    T = 1.0
    n_steps = 1024
    z_min = -30.0
    z_max = 30.0
    n_points = 256
    seed = 42

``phi`` is one of: ``wave`` (traveling wave whose parameters are derived
from the scenario coefficients), ``wave(delta,beta,mu)`` (explicit
parameters), ``logistic``, or ``const(c)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import coeffs
from .coeffs import CoeffFn, constant_value
from .det_solutions import (ConstantProfile, LogisticFront, Profile,
                            TravelingWave, WaveParams)
from .errors import ConfigError
from .grids import SpatialGrid, TimeGrid
from .spde_exact import KINDS, Scenario

__all__ = ["RunSpec", "parse_runspec", "runspec_to_text", "resolve_profile"]

_COEFF_KEYS = ("alpha", "beta", "gamma", "delta", "mu", "sigma")
_REQUIRED = ("kind",) + _COEFF_KEYS + ("phi", "t0", "T", "n_steps",
                                       "z_min", "z_max", "n_points", "seed")


@dataclass(frozen=True)
class RunSpec:
    scenario: Scenario
    tgrid: TimeGrid
    sgrid: SpatialGrid
    seed: int
    phi_spec: str


def _const_or_fail(f: CoeffFn, name: str) -> float:
    v = constant_value(f)
    if v is None:
        raise ConfigError(f"the auto 'wave' profile needs a constant {name}, "
                          f"got {f.text()}")
    return v


def resolve_profile(spec: str, kind: str, c: dict, t0: float) -> Profile:
    """Turn a phi specification string into a Profile."""
    spec = spec.strip()
    if spec == "logistic":
        return LogisticFront()
    m = re.fullmatch(r"const\(\s*([-+0-9.eE]+)\s*\)", spec)
    if m:
        return ConstantProfile(float(m.group(1)))
    m = re.fullmatch(r"wave\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*,"
                     r"\s*([-+0-9.eE]+)\s*\)", spec)
    if m:
        d, b, mu = (float(m.group(i)) for i in (1, 2, 3))
        return TravelingWave(WaveParams(delta=d, mu_eff=mu, beta=b))
    if spec == "wave":
        if kind == "multiplicative":
            raise ConfigError("phi = wave needs the nonlinear term; the "
                              "multiplicative equation is linear")
        d = _const_or_fail(c["delta"], "delta")
        if kind == "advection":
            b = _const_or_fail(c["beta"], "beta")
            mu_eff = (_const_or_fail(c["mu"], "mu")
                      - 0.5 * _const_or_fail(c["sigma"], "sigma") ** 2)
        else:  # additive: nonlinearity coefficient is Bfrak = beta * R
            if _const_or_fail(c["gamma"], "gamma") != 0.0:
                raise ConfigError("phi = wave with additive noise needs gamma = 0 "
                                  "(otherwise Bfrak is time-dependent)")
            b = _const_or_fail(c["beta"], "beta")
            mu_eff = _const_or_fail(c["mu"], "mu")
        return TravelingWave(WaveParams(delta=d, mu_eff=mu_eff, beta=b))
    raise ConfigError(f"unknown phi specification {spec!r}")


def parse_runspec(text: str) -> RunSpec:
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in fields:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = value
    missing = [k for k in _REQUIRED if k not in fields]
    if missing:
        raise ConfigError(f"missing configuration keys: {', '.join(missing)}")
    unknown = [k for k in fields if k not in _REQUIRED]
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")

    kind = fields["kind"]
    if kind not in KINDS:
        raise ConfigError(f"kind must be one of {KINDS}, got {kind!r}")
    cf = {}
    for key in _COEFF_KEYS:
        try:
            cf[key] = coeffs.parse(fields[key])
        except ValueError as exc:
            raise ConfigError(f"field {key!r}: {exc}") from exc

    def number(key, conv=float):
        try:
            return conv(fields[key])
        except ValueError as exc:
            raise ConfigError(f"field {key!r}: not a valid number") from exc

    t0, T = number("t0"), number("T")
    try:
        tgrid = TimeGrid(t0, T, number("n_steps", int))
        sgrid = SpatialGrid(number("z_min"), number("z_max"),
                            number("n_points", int))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    phi = resolve_profile(fields["phi"], kind, cf, t0)
    scenario = Scenario(kind=kind, alpha=cf["alpha"], beta=cf["beta"],
                        gamma=cf["gamma"], delta=cf["delta"], mu=cf["mu"],
                        sigma=cf["sigma"], phi=phi, t0=t0, T=T)
    return RunSpec(scenario, tgrid, sgrid, number("seed", int), fields["phi"])


def runspec_to_text(spec: RunSpec) -> str:
    s = spec.scenario
    lines = [f"kind = {s.kind}"]
    for key in _COEFF_KEYS:
        lines.append(f"{key} = {getattr(s, key).text()}")
    lines.append(f"phi = {spec.phi_spec}")
    lines.append(f"t0 = {s.t0!r}")
    lines.append(f"T = {s.T!r}")
    lines.append(f"n_steps = {spec.tgrid.n_steps}")
    lines.append(f"z_min = {spec.sgrid.z_min!r}")
    lines.append(f"z_max = {spec.sgrid.z_max!r}")
    lines.append(f"n_points = {spec.sgrid.n_points}")
    lines.append(f"seed = {spec.seed}")
    return "\n".join(lines) + "\n"
