"""Relaxation and creep models built on finite spectra.

A relaxation modulus is ``R = beta * u + f0`` where ``u`` is the identity
convolution operator and ``f0(t) = f_inf + sum(mu_k * exp(-s_k * t))`` is
completely monotone. A creep function is the Bernstein function
``h(t) = a + b * t + sum((nu_j / r_j) * (1 - exp(-r_j * t)))``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import DomainError, GridError, ValidationError
from .spectra import DiscreteSpectrum, normalize


class Infinity(enum.Enum):
    """Marker for a limit that diverges to plus infinity."""

    INF = "inf"

    def __str__(self):
        return "inf"

    def __float__(self):
        return math.inf


INF = Infinity.INF

Limit = Union[float, Infinity]


def _nonneg(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    if value < 0.0:
        raise ValidationError(f"{name} must be >= 0, got {value!r}")
    return value


def _spectrum(value):
    if isinstance(value, DiscreteSpectrum):
        return value
    return normalize(value)


@dataclass(frozen=True)
class RelaxationModel:
    """LICM relaxation modulus ``beta * u + f0``.

    Parameters
    ----------
    newtonian : float
        Coefficient ``beta`` of the identity operator (Newtonian viscosity).
    equilibrium : float
        Long-time limit ``f_inf`` of ``f0``.
    spectrum : DiscreteSpectrum or list of (rate, weight)
        Relaxation spectrum ``mu``.
    """

    newtonian: float = 0.0
    equilibrium: float = 0.0
    spectrum: DiscreteSpectrum = field(default_factory=DiscreteSpectrum)

    def __post_init__(self):
        object.__setattr__(self, "newtonian", _nonneg("newtonian", self.newtonian))
        object.__setattr__(self, "equilibrium", _nonneg("equilibrium", self.equilibrium))
        object.__setattr__(self, "spectrum", _spectrum(self.spectrum))

    @property
    def is_degenerate(self) -> bool:
        """True when ``f0`` vanishes identically."""
        return self.equilibrium == 0.0 and not self.spectrum

    @property
    def f0_at_zero(self) -> float:
        return self.equilibrium + self.spectrum.mass

    @property
    def is_zero(self) -> bool:
        return self.is_degenerate and self.newtonian == 0.0


@dataclass(frozen=True)
class CreepModel:
    """Bernstein creep function ``a + b*t + sum(nu_j/r_j * (1 - exp(-r_j t)))``."""

    offset: float = 0.0
    flow: float = 0.0
    spectrum: DiscreteSpectrum = field(default_factory=DiscreteSpectrum)

    def __post_init__(self):
        object.__setattr__(self, "offset", _nonneg("offset", self.offset))
        object.__setattr__(self, "flow", _nonneg("flow", self.flow))
        object.__setattr__(self, "spectrum", _spectrum(self.spectrum))

    @property
    def is_zero(self) -> bool:
        return self.offset == 0.0 and self.flow == 0.0 and not self.spectrum


@dataclass(frozen=True)
class StieltjesRep:
    """Stieltjes function ``a + b/p + sum(w / (p + r))``."""

    const_term: float = 0.0
    pole_at_zero: float = 0.0
    spectrum: DiscreteSpectrum = field(default_factory=DiscreteSpectrum)

    def __post_init__(self):
        object.__setattr__(self, "const_term", _nonneg("const_term", self.const_term))
        object.__setattr__(self, "pole_at_zero", _nonneg("pole_at_zero", self.pole_at_zero))
        object.__setattr__(self, "spectrum", _spectrum(self.spectrum))

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        rates, weights = self.spectrum.rates, self.spectrum.weights
        val = self.const_term + self.pole_at_zero / p
        if len(rates):
            val = val + np.sum(weights / (p[..., None] + rates), axis=-1)
        return val


@dataclass(frozen=True)
class CbfRep:
    """Complete Bernstein function ``a + b*p + sum(w * p / (p + r))``."""

    const_term: float = 0.0
    slope: float = 0.0
    spectrum: DiscreteSpectrum = field(default_factory=DiscreteSpectrum)

    def __post_init__(self):
        object.__setattr__(self, "const_term", _nonneg("const_term", self.const_term))
        object.__setattr__(self, "slope", _nonneg("slope", self.slope))
        object.__setattr__(self, "spectrum", _spectrum(self.spectrum))

    @property
    def is_zero(self) -> bool:
        return self.const_term == 0.0 and self.slope == 0.0 and not self.spectrum

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        rates, weights = self.spectrum.rates, self.spectrum.weights
        val = self.const_term + self.slope * p
        if len(rates):
            val = val + np.sum(weights * p[..., None] / (p[..., None] + rates), axis=-1)
        return val


@dataclass(frozen=True)
class LimitReport:
    """Boundary values of a relaxation/creep pair.

    ``h0_reason`` records why ``h(0)`` vanishes (``"newtonian"`` when
    ``beta > 0``, ``"unbounded_f0"`` when ``f0(0)`` is infinite) or is
    ``None`` when ``h(0) = 1/f0(0)``.
    """

    f0_at_zero: Limit
    f_inf: float
    h_at_zero: float
    h_slope_at_zero: Limit
    h_at_inf: Limit
    flow_b: float
    h0_reason: str | None = None

    def as_dict(self):
        return {
            "f0_at_zero": self.f0_at_zero,
            "f_inf": self.f_inf,
            "h_at_zero": self.h_at_zero,
            "h_slope_at_zero": self.h_slope_at_zero,
            "h_at_inf": self.h_at_inf,
            "flow_b": self.flow_b,
        }


def _as_times(t, strict):
    arr = np.asarray(t, dtype=float)
    bad = arr <= 0.0 if strict else arr < 0.0
    if np.any(bad) or np.any(np.isnan(arr)):
        bound = "> 0" if strict else ">= 0"
        raise DomainError(f"time must be {bound}")
    return arr


def _scalar_or_array(t, value):
    return float(value) if np.ndim(t) == 0 else value


def f0_values(model: RelaxationModel, t):
    """``f0`` on ``t >= 0``; finite spectra keep ``f0(0)`` finite."""
    arr = _as_times(t, strict=False)
    rates, weights = model.spectrum.rates, model.spectrum.weights
    val = model.equilibrium + np.sum(weights * np.exp(-np.multiply.outer(arr, rates)), axis=-1)
    return _scalar_or_array(t, val)


def eval_relaxation(model: RelaxationModel, t):
    """Evaluate ``f0(t) = f_inf + sum(mu_k exp(-s_k t))`` for ``t > 0``.

    The Newtonian part ``beta * u`` acts as an identity operator and has no
    pointwise value, so it is not included.
    """
    _as_times(t, strict=True)
    return f0_values(model, t)


def eval_creep(model: CreepModel, t):
    """Evaluate the creep function at ``t >= 0``."""
    arr = _as_times(t, strict=False)
    rates, weights = model.spectrum.rates, model.spectrum.weights
    # -expm1 keeps (1 - exp(-r t)) accurate for small r t
    rt = np.multiply.outer(arr, rates)
    val = model.offset + model.flow * arr + np.sum(weights / rates * -np.expm1(-rt), axis=-1)
    return _scalar_or_array(t, val)


def creep_rate(model: CreepModel, t):
    """Derivative ``h'(t) = b + sum(nu_j exp(-r_j t))`` for ``t >= 0``."""
    arr = _as_times(t, strict=False)
    rates, weights = model.spectrum.rates, model.spectrum.weights
    val = model.flow + np.sum(weights * np.exp(-np.multiply.outer(arr, rates)), axis=-1)
    return _scalar_or_array(t, val)


def _as_freqs(p):
    arr = np.asarray(p, dtype=float)
    if np.any(~(arr > 0.0)):
        raise DomainError("Laplace variable must be > 0")
    return arr


def laplace_relaxation(model: RelaxationModel, p):
    """Laplace transform ``beta + f_inf/p + sum(mu_k / (p + s_k))``."""
    arr = _as_freqs(p)
    rates, weights = model.spectrum.rates, model.spectrum.weights
    val = model.newtonian + model.equilibrium / arr
    val = val + np.sum(weights / (arr[..., None] + rates), axis=-1)
    return _scalar_or_array(p, val)


def laplace_creep(model: CreepModel, p):
    """Laplace transform ``a/p + b/p**2 + sum(nu_j / (p (p + r_j)))``."""
    arr = _as_freqs(p)
    rates, weights = model.spectrum.rates, model.spectrum.weights
    val = model.offset / arr + model.flow / arr**2
    val = val + np.sum(weights / (arr[..., None] + rates), axis=-1) / arr
    return _scalar_or_array(p, val)


def limits_report(relax: RelaxationModel, creep: CreepModel) -> LimitReport:
    """Collect the boundary values of a relaxation/creep pair from closed forms."""
    nu = creep.spectrum
    if creep.flow > 0.0:
        h_inf: Limit = INF
    else:
        h_inf = creep.offset + math.fsum(w / r for r, w in nu)
    if relax.newtonian > 0.0:
        reason = "newtonian"
    else:
        reason = None
    return LimitReport(
        f0_at_zero=relax.f0_at_zero,
        f_inf=relax.equilibrium,
        h_at_zero=creep.offset,
        h_slope_at_zero=creep.flow + nu.mass,
        h_at_inf=h_inf,
        flow_b=creep.flow,
        h0_reason=reason,
    )


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a finite-difference monotonicity check.

    ``worst_violation`` is the largest amount by which a difference breaks
    its required sign (0 when none do); ``worst_order`` and ``worst_index``
    locate it.
    """

    passed: bool
    max_order: int
    tolerance: float
    worst_violation: float
    worst_order: int | None
    worst_index: int | None


def _grid_values(samples, max_order):
    if not 0 <= max_order <= 8:
        raise GridError(f"max_order must be in [0, 8], got {max_order}")
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GridError("samples must be a sequence of (t, value) pairs")
    if len(arr) < max_order + 1 or len(arr) < 2:
        raise GridError(f"need at least {max(max_order + 1, 2)} samples, got {len(arr)}")
    t, v = arr[:, 0], arr[:, 1]
    check_uniform(t)
    return v


def check_uniform(t: Sequence[float], rtol: float = 1e-8) -> float:
    """Return the step of a uniform increasing grid, raising GridError otherwise."""
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or len(t) < 2:
        raise GridError("grid needs at least two points")
    if not np.all(np.isfinite(t)):
        raise GridError("grid contains non-finite points")
    dt = np.diff(t)
    step = (t[-1] - t[0]) / (len(t) - 1)
    if not step > 0.0:
        raise GridError("grid must be increasing")
    if np.max(np.abs(dt - step)) > rtol * step + 4 * np.finfo(float).eps * np.max(np.abs(t)):
        raise GridError("grid is not uniform")
    return float(step)


def _sign_check(values, max_order, sign_of_order, nonneg_values):
    scale = float(np.max(np.abs(values))) if len(values) else 0.0
    tol = 1e-9 * scale
    worst, worst_n, worst_i = 0.0, None, None
    if nonneg_values:
        i = int(np.argmin(values))
        if -values[i] > worst:
            worst, worst_n, worst_i = float(-values[i]), 0, i
    diff = np.array(values, dtype=float)
    for n in range(1, max_order + 1):
        diff = np.diff(diff)
        # sign_of_order(n) * diff must be >= 0
        signed = sign_of_order(n) * diff
        i = int(np.argmin(signed))
        if -signed[i] > worst:
            worst, worst_n, worst_i = float(-signed[i]), n, i
    return CheckReport(
        passed=worst <= tol,
        max_order=max_order,
        tolerance=tol,
        worst_violation=worst,
        worst_order=worst_n,
        worst_index=worst_i,
    )


def cm_check(samples, max_order: int = 6) -> CheckReport:
    """Check complete monotonicity of uniformly sampled data.

    Passes iff ``(-1)**n * Delta**n v >= -1e-9 * max|v|`` for every order
    ``n <= max_order`` (``n = 0`` included) and every grid position.
    """
    v = _grid_values(samples, max_order)
    return _sign_check(v, max_order, lambda n: (-1.0) ** n, nonneg_values=True)


def bernstein_check(samples, max_order: int = 6) -> CheckReport:
    """Check the Bernstein sign pattern of uniformly sampled data.

    Passes iff the values are nonnegative and ``(-1)**n * Delta**n v <= tol``
    for ``1 <= n <= max_order``, with ``tol = 1e-9 * max|v|``.
    """
    v = _grid_values(samples, max_order)
    return _sign_check(v, max_order, lambda n: -((-1.0) ** n), nonneg_values=True)


def sample(fn, t) -> list[Tuple[float, float]]:
    """Pair grid points with values of ``fn`` for the checkers."""
    t = np.asarray(t, dtype=float)
    return list(zip(t.tolist(), np.asarray(fn(t), dtype=float).tolist()))
