"""Numerical Laplace inversion and time-domain oracles.

The oracles here are independent of the rational duality engine. They
check converted pairs through the transform product, the convolution
identity ``R * C = I**2`` and Gaver-Stehfest inversion.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import mpmath
import numpy as np

from .errors import DomainError, GridError, SingularTransform
from .models import (
    CreepModel,
    RelaxationModel,
    check_uniform,
    eval_creep,
    f0_values,
    laplace_creep,
    laplace_relaxation,
)

LN2 = math.log(2.0)
DEFAULT_TERMS = 14


@lru_cache(maxsize=None)
def _exact_weights(n_terms: int) -> tuple[Fraction, ...]:
    if n_terms % 2 or not 4 <= n_terms <= 20:
        raise DomainError(f"n_terms must be even and in [4, 20], got {n_terms}")
    half = n_terms // 2
    fact = math.factorial
    weights = []
    for k in range(1, n_terms + 1):
        total = Fraction(0)
        for j in range((k + 1) // 2, min(k, half) + 1):
            total += Fraction(
                j**half * fact(2 * j),
                fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k),
            )
        weights.append((-1) ** (k + half) * total)
    return tuple(weights)


def stehfest_weights(n_terms: int) -> tuple[float, ...]:
    """Gaver-Stehfest weights ``V_1 .. V_N``, computed exactly then rounded."""
    return tuple(float(v) for v in _exact_weights(n_terms))


def gaver_stehfest(
    transform: Callable[[float], float],
    t: float,
    n_terms: int = DEFAULT_TERMS,
    precision: int | None = None,
) -> float:
    """Invert a Laplace transform at ``t > 0`` from real-axis samples.

    Returns ``(ln2/t) * sum(V_k * F(k ln2 / t))``.

    Parameters
    ----------
    transform : callable
        ``p -> F(p)`` on the positive real axis.
    t : float
        Time at which to invert.
    n_terms : int
        Even number of terms, 4 to 20.
    precision : int, optional
        Decimal digits for an mpmath evaluation. ``transform`` is then
        called with ``mpmath.mpf`` nodes and must keep that precision. In
        plain double precision the weights (up to ~1e9 at 18 terms) amplify
        round-off, so the truncation error of 16 or more terms is only
        reachable this way.
    """
    if not (isinstance(t, (int, float, np.floating)) and math.isfinite(t) and t > 0.0):
        raise DomainError(f"t must be a positive finite number, got {t!r}")
    if precision is None:
        weights = stehfest_weights(n_terms)
        scale = LN2 / t
        return scale * math.fsum(
            v * float(transform((k + 1) * scale)) for k, v in enumerate(weights)
        )
    exact = _exact_weights(n_terms)
    with mpmath.workdps(precision):
        scale = mpmath.log(2) / mpmath.mpf(t)
        total = mpmath.mpf(0)
        for k, v in enumerate(exact):
            total += mpmath.mpf(v.numerator) / v.denominator * transform((k + 1) * scale)
        return float(scale * total)


def numeric_dual(
    transform: Callable[[float], float],
    t: float,
    n_terms: int = DEFAULT_TERMS,
    precision: int | None = None,
) -> float:
    """Creep value ``C(t)`` for a relaxation modulus known only by its transform.

    Uses ``C~(p) = 1 / (p**2 R~(p))`` and inverts numerically. Works for
    moduli outside the finite-spectrum class, e.g. power laws.
    """

    def creep_transform(p):
        value = transform(p)
        if precision is None:
            value = float(value)
        if not (mpmath.isfinite(value) and value > 0):
            raise SingularTransform(f"relaxation transform is {value!r} at p={p!r}")
        return 1 / (p * p * value)

    return gaver_stehfest(creep_transform, t, n_terms, precision)


def duality_residual(relax: RelaxationModel, creep: CreepModel, p_grid: Sequence[float]) -> float:
    """Largest ``|p**2 R~(p) C~(p) - 1|`` over ``p_grid``."""
    p = np.asarray(p_grid, dtype=float)
    if p.size == 0:
        raise DomainError("p_grid is empty")
    if np.any(~(p > 0.0)):
        raise DomainError("p_grid points must be > 0")
    # p R~ and p C~ are each O(1) across the grid, so multiply them that way
    prod = (p * laplace_relaxation(relax, p)) * (p * laplace_creep(creep, p))
    return float(np.max(np.abs(prod - 1.0)))


def _trapezoid_convolution(kernel, signal, step):
    """``int_0^{t_i} kernel(s) signal(t_i - s) ds`` for every grid point."""
    n = len(signal)
    full = np.convolve(kernel, signal)[:n]
    out = step * (full - 0.5 * (kernel[0] * signal + kernel * signal[0]))
    out[0] = 0.0
    return out


def _grid_from_zero(t_grid, step):
    t = np.asarray(t_grid, dtype=float)
    h = check_uniform(t)
    if t[0] != 0.0:
        raise GridError("convolution grids must start at t = 0")
    if step is not None and abs(step - h) > 1e-8 * h:
        raise GridError(f"step {step!r} does not match grid spacing {h!r}")
    return t, h


def convolution_oracle(
    relax: RelaxationModel,
    creep: CreepModel,
    t_grid: Sequence[float],
    step: float | None = None,
) -> float:
    """Check ``R * C = I**2`` in the time domain.

    Computes ``beta C(t) + int_0^t f0(s) C(t - s) ds`` by the trapezoid rule
    and returns ``max |(R*C)(t) - t| / max(t, step)``. The Newtonian part
    acts as the identity and is applied exactly.
    """
    t, h = _grid_from_zero(t_grid, step)
    c = eval_creep(creep, t)
    conv = relax.newtonian * c + _trapezoid_convolution(f0_values(relax, t), c, h)
    return float(np.max(np.abs(conv - t) / np.maximum(t, h)))


def stress_response(relax: RelaxationModel, strain_rate: Sequence[float], step: float) -> np.ndarray:
    """Stress ``beta * eps_dot + f0 * eps_dot`` for a strain rate sampled from t = 0."""
    rate = np.asarray(strain_rate, dtype=float)
    if rate.ndim != 1 or len(rate) < 2:
        raise GridError("strain rate needs at least two samples")
    if not (math.isfinite(step) and step > 0.0):
        raise GridError(f"step must be positive, got {step!r}")
    t = step * np.arange(len(rate))
    return relax.newtonian * rate + _trapezoid_convolution(f0_values(relax, t), rate, step)


def relaxation_transform(model: RelaxationModel) -> Callable:
    """Scalar ``p -> R~(p)`` usable with floats or ``mpmath.mpf``."""
    atoms = list(model.spectrum)
    beta, f_inf = model.newtonian, model.equilibrium
    return lambda p: beta + f_inf / p + sum(w / (p + s) for s, w in atoms)


def creep_transform(model: CreepModel) -> Callable:
    """Scalar ``p -> C~(p)`` usable with floats or ``mpmath.mpf``."""
    atoms = list(model.spectrum)
    a, b = model.offset, model.flow
    return lambda p: a / p + b / p**2 + sum(w / (p + r) for r, w in atoms) / p
