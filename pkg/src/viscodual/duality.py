"""Exact relaxation/creep interconversion for finite spectra.

Both directions reduce to one operation: the reciprocal of a rational
complete Bernstein function

    F(p) = a + b*p + sum(w_k * p / (p + s_k))

is the Stieltjes function ``a' + b'/p + sum(nu_j / (p + r_j))``. ``F`` is
strictly increasing between its poles ``-s_k`` on the negative axis, so each
gap holds exactly one zero and the zeros interlace with the poles. Zeros are
located by bisection inside those gaps and the residues of ``1/F`` are
``1/F'(rho)``.

Precision
---------
Every zero is computed as an offset ``x`` from the pole (or the origin) it
lies closest to, and ``F`` is summed term by term with the pole differences
``s_j - s_anchor`` precomputed. This keeps the relative accuracy of
``r_j`` and ``nu_j`` near machine precision even when a zero hugs a pole.
Spectra whose rates span many decades, or whose weights differ by many
orders of magnitude, still lose accuracy in the residues; each residue
carries an error estimate, and a :class:`PrecisionLoss` warning is issued
when it exceeds ``1e-8``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BracketFailure, PrecisionLoss, ZeroFunction
from .models import CbfRep, CreepModel, RelaxationModel, StieltjesRep
from .spectra import normalize

EPS = np.finfo(float).eps
ROOT_RTOL = 1e-14
MAX_ITER = 200
RESIDUE_RTOL = 1e-8


class _Anchored:
    """``F`` and its derivatives in the shifted variable ``x = p + anchor``."""

    def __init__(self, a, b, rates, weights, anchor):
        self.a, self.b = a, b
        self.rates, self.weights = rates, weights
        self.anchor = anchor
        self.shift = rates - anchor  # p + s_j == x + shift_j

    def terms(self, x):
        p = x - self.anchor
        return np.concatenate(([self.a, self.b * p], self.weights * p / (x + self.shift)))

    def value(self, x):
        return math.fsum(self.terms(x))

    def deriv(self, x):
        return self.b + math.fsum(self.weights * self.rates / (x + self.shift) ** 2)

    def deriv2(self, x):
        return -2.0 * math.fsum(self.weights * self.rates / (x + self.shift) ** 3)


def _bisect(fn, lo, hi):
    """Shrink ``[lo, hi]`` around the sign change of increasing ``fn``.

    ``fn(lo) < 0 < fn(hi)`` is assumed; an endpoint may sit on a pole and is
    never evaluated.
    """
    for _ in range(MAX_ITER):
        if hi - lo <= ROOT_RTOL * min(abs(lo), abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        val = fn.value(mid)
        if val == 0.0:
            return mid, mid, mid
        if val < 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    # safeguarded Newton polish, kept only while it stays in the bracket
    for _ in range(2):
        step = fn.value(x) / fn.deriv(x)
        x_new = x - step
        if not lo <= x_new <= hi or x_new == x:
            break
        x = x_new
    return x, lo, hi


@dataclass(frozen=True)
class _Root:
    rate: float
    residue: float
    rel_error: float


def _refine(fn, lo, hi):
    x, lo, hi = _bisect(fn, lo, hi)
    d1 = fn.deriv(x)
    if not (d1 > 0.0 and math.isfinite(d1)):
        raise BracketFailure(f"non-positive derivative {d1!r} at root offset {x!r}")
    # root uncertainty: rounding in F plus remaining bracket width
    terms = fn.terms(x)
    dx = EPS * len(terms) * math.fsum(np.abs(terms)) / d1 + (hi - lo)
    rel = abs(fn.deriv2(x) / d1) * dx + EPS * len(terms)
    rate = fn.anchor - x
    return _Root(rate=rate, residue=1.0 / d1, rel_error=rel)


def _gap_root(a, b, rates, weights, left, right):
    """Zero of F in the gap ``(-right, -left)``; ``left`` may be 0 (the origin)."""
    near_left = _Anchored(a, b, rates, weights, left)
    half = 0.5 * (right - left)
    mid_val = near_left.value(-half)
    if mid_val == 0.0:
        return _refine_exact(near_left, -half)
    if mid_val < 0.0:
        # zero between the midpoint and -left; F -> +inf at the pole -left
        # (or F(0) = a > 0 at the origin)
        return _refine(near_left, -half, 0.0)
    near_right = _Anchored(a, b, rates, weights, right)
    return _refine(near_right, 0.0, half)


def _refine_exact(fn, x):
    d1 = fn.deriv(x)
    return _Root(rate=fn.anchor - x, residue=1.0 / d1, rel_error=EPS)


def _outer_root(a, b, rates, weights):
    """Zero of F below the lowest pole, present only when ``b > 0``."""
    anchor = rates[-1] if len(rates) else 0.0
    fn = _Anchored(a, b, rates, weights, anchor)
    span = (a + math.fsum(weights)) / b
    lo = -max(span, anchor, 1e-300)
    for _ in range(2100):
        if fn.value(lo) < 0.0:
            break
        lo *= 2.0
        if not math.isfinite(lo):
            break
    else:
        lo = math.inf
    if not (math.isfinite(lo) and fn.value(lo) < 0.0):
        raise BracketFailure("no sign change below the lowest pole")
    return _refine(fn, lo, 0.0)


def rational_reciprocal(cbf: CbfRep) -> StieltjesRep:
    """Invert a rational complete Bernstein function into Stieltjes form.

    Parameters
    ----------
    cbf : CbfRep
        ``F(p) = a + b p + sum(w_k p / (p + s_k))``, not identically zero.

    Returns
    -------
    StieltjesRep
        ``1/F(p) = a' + b'/p + sum(nu_j / (p + r_j))`` where
        ``a' = 1/(a + sum w)`` if ``b == 0`` (else 0), ``b' = 1/F'(0)`` if
        ``a == 0`` (else 0), and ``-r_j`` are the zeros of ``F``.

    Raises
    ------
    ZeroFunction
        If ``F`` vanishes identically.
    BracketFailure
        If a zero cannot be bracketed.
    """
    if cbf.is_zero:
        raise ZeroFunction("cannot invert the zero function")
    a, b = cbf.const_term, cbf.slope
    rates, weights = cbf.spectrum.rates, cbf.spectrum.weights

    roots = []
    if a > 0.0 and len(rates):
        roots.append(_gap_root(a, b, rates, weights, 0.0, rates[0]))
    for left, right in zip(rates[:-1], rates[1:]):
        roots.append(_gap_root(a, b, rates, weights, left, right))
    if b > 0.0 and (len(rates) or a > 0.0):
        roots.append(_outer_root(a, b, rates, weights))

    for root in roots:
        if root.rel_error > RESIDUE_RTOL:
            warnings.warn(
                f"residue at rate {root.rate:.6g} has estimated relative error "
                f"{root.rel_error:.2e}",
                PrecisionLoss,
                stacklevel=2,
            )
    if set(r.rate for r in roots) & set(rates.tolist()):
        warnings.warn("a zero of F rounded onto a pole", PrecisionLoss, stacklevel=2)

    const = 0.0 if b > 0.0 else 1.0 / (a + math.fsum(weights))
    if a == 0.0:
        pole = 1.0 / (b + math.fsum(weights / rates))
    else:
        pole = 0.0
    spectrum = normalize([(r.rate, r.residue) for r in roots])
    return StieltjesRep(const_term=const, pole_at_zero=pole, spectrum=spectrum)


def relaxation_to_creep(model: RelaxationModel) -> CreepModel:
    """Creep function dual to a relaxation modulus.

    Inverts ``p * f~(p) = beta p + f_inf + sum(mu_k p / (p + s_k))``; the
    resulting Stieltjes function is ``p * h~(p)``.
    """
    if model.is_zero:
        raise ZeroFunction("relaxation modulus is identically zero")
    if model.is_degenerate:
        # pure Newtonian fluid: R = beta * u  <->  h(t) = t / beta
        return CreepModel(offset=0.0, flow=1.0 / model.newtonian)
    cbf = CbfRep(const_term=model.equilibrium, slope=model.newtonian, spectrum=model.spectrum)
    st = rational_reciprocal(cbf)
    return CreepModel(offset=st.const_term, flow=st.pole_at_zero, spectrum=st.spectrum)


def creep_to_relaxation(model: CreepModel) -> RelaxationModel:
    """Relaxation modulus dual to a creep function.

    ``p * h~(p) = a + b/p + sum(nu_j/(p + r_j))``, so ``p**2 * h~(p)`` is the
    CBF ``b + a p + sum(nu_j p/(p + r_j))``. Its reciprocal Stieltjes
    function ``a' + b'/p + ...`` equals ``f~(p)``, giving ``beta = a'`` and
    ``f_inf = b'``.
    """
    if model.is_zero:
        raise ZeroFunction("creep function is identically zero")
    cbf = CbfRep(const_term=model.flow, slope=model.offset, spectrum=model.spectrum)
    st = rational_reciprocal(cbf)
    return RelaxationModel(
        newtonian=st.const_term, equilibrium=st.pole_at_zero, spectrum=st.spectrum
    )


def is_interlaced(poles, zeros, const_positive: bool, slope_positive: bool) -> bool:
    """Check strict alternation of pole rates and zero rates.

    With ``n`` poles the zeros must number ``n - 1 + [a > 0] + [b > 0]``; a
    zero precedes the first pole iff ``a > 0`` and follows the last iff
    ``b > 0``.
    """
    poles = sorted(float(s) for s in poles)
    zeros = sorted(float(r) for r in zeros)
    n = len(poles)
    if n == 0:
        return len(zeros) == int(const_positive and slope_positive)
    if len(zeros) != n - 1 + int(const_positive) + int(slope_positive):
        return False
    seq = []
    if const_positive:
        seq.append(("r", zeros[0]))
        rest = zeros[1:]
    else:
        rest = zeros
    for k, s in enumerate(poles):
        seq.append(("s", s))
        if k < len(rest):
            seq.append(("r", rest[k]))
    if len(seq) != n + len(zeros):
        return False
    values = [v for _, v in seq]
    if any(v <= 0.0 for v in values):
        return False
    return all(x < y for x, y in zip(values, values[1:]))


def interlacing_summary(relax: RelaxationModel, creep: CreepModel) -> tuple[bool, str]:
    """Interlacing verdict and an ordering string such as ``r1 < s1 < r2``."""
    ok = is_interlaced(
        relax.spectrum.rates,
        creep.spectrum.rates,
        relax.equilibrium > 0.0,
        relax.newtonian > 0.0,
    )
    labelled = [(r, f"s{k + 1}") for k, r in enumerate(relax.spectrum.rates)]
    labelled += [(r, f"r{k + 1}") for k, r in enumerate(creep.spectrum.rates)]
    labelled.sort()
    order = " < ".join(name for _, name in labelled) or "(no atoms)"
    return ok, order


def _rel(x, y):
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0.0 else abs(x - y) / scale


@dataclass(frozen=True)
class RoundtripReport:
    discrepancy: float
    atom_count_match: bool
    creep: CreepModel
    recovered: RelaxationModel


def roundtrip_check(model: RelaxationModel) -> RoundtripReport:
    """Convert to creep and back; report the largest relative change.

    Compares ``beta``, ``f_inf`` and the atoms matched in sorted order. An
    atom-count mismatch gives an infinite discrepancy.
    """
    creep = relaxation_to_creep(model)
    back = creep_to_relaxation(creep)
    if len(back.spectrum) != len(model.spectrum):
        return RoundtripReport(math.inf, False, creep, back)
    diffs = [
        _rel(model.newtonian, back.newtonian),
        _rel(model.equilibrium, back.equilibrium),
    ]
    for (s0, w0), (s1, w1) in zip(model.spectrum, back.spectrum):
        diffs += [_rel(s0, s1), _rel(w0, w1)]
    return RoundtripReport(max(diffs), True, creep, back)
