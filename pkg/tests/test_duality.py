import warnings

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from viscodual.duality import (
    creep_to_relaxation,
    interlacing_summary,
    is_interlaced,
    rational_reciprocal,
    relaxation_to_creep,
    roundtrip_check,
)
from viscodual.errors import PrecisionLoss, ZeroFunction
from viscodual.models import CbfRep, CreepModel, RelaxationModel, laplace_creep, laplace_relaxation

from conftest import random_relaxation

P_GRID = np.geomspace(1e-4, 1e4, 64)


def assert_rep(rep, const, pole, atoms, rel=1e-12):
    assert rep.const_term == pytest.approx(const, rel=rel, abs=0)
    assert rep.pole_at_zero == pytest.approx(pole, rel=rel, abs=0)
    assert len(rep.spectrum) == len(atoms)
    for (r, w), (r0, w0) in zip(rep.spectrum, atoms):
        assert r == pytest.approx(r0, rel=rel)
        assert w == pytest.approx(w0, rel=rel)


# expected values from sympy.apart:
#   (p+1)/(2p+1)             = 1/2 + (1/4)/(p + 1/2)
#   (p^2+3p+2)/(2p^2+3p)     = 1/2 + (2/3)/p + (1/12)/(p + 3/2)
@pytest.mark.parametrize(
    "cbf, expected",
    [
        (CbfRep(1.0, 0.0, [(1.0, 1.0)]), (0.5, 0.0, [(0.5, 0.25)])),
        (CbfRep(0.0, 1.0, []), (0.0, 1.0, [])),
        (CbfRep(0.0, 0.0, [(1.0, 1.0), (2.0, 1.0)]), (0.5, 2 / 3, [(1.5, 1 / 12)])),
        (CbfRep(2.0, 0.0, []), (0.5, 0.0, [])),
        # 1/(2 + 4p) = (1/4)/(p + 1/2)
        (CbfRep(2.0, 4.0, []), (0.0, 0.0, [(0.5, 0.25)])),
    ],
)
def test_rational_reciprocal_examples(cbf, expected):
    assert_rep(rational_reciprocal(cbf), *expected)


def test_rational_reciprocal_zero():
    with pytest.raises(ZeroFunction):
        rational_reciprocal(CbfRep())


def _sympy_reciprocal(cbf, digits=40):
    """Stieltjes data of 1/F from explicit polynomials N/D, roots to 40 digits."""
    p = sp.symbols("p")
    a, b = sp.Rational(cbf.const_term), sp.Rational(cbf.slope)
    atoms = [(sp.Rational(s), sp.Rational(w)) for s, w in cbf.spectrum]
    D = sp.prod([p + s for s, _ in atoms]) if atoms else sp.Integer(1)
    N = (a + b * p) * D + sum(
        (w * p * sp.prod([p + t for j, (t, _) in enumerate(atoms) if j != k]) for k, (s, w) in enumerate(atoms)),
        sp.Integer(0),
    )
    N = sp.Poly(sp.expand(N), p)
    D = sp.Poly(sp.expand(D), p)
    dN = N.diff(p)
    out = []
    for rho in N.nroots(n=digits, maxsteps=200):
        rho = sp.re(rho)
        if abs(rho) < sp.Float(10) ** (-digits + 5):
            continue
        out.append((float(-rho), float(D.eval(rho) / dN.eval(rho))))
    const = 0.0 if b > 0 else float(1 / (a + sum(w for _, w in atoms)))
    pole = float(1 / (b + sum(w / s for s, w in atoms))) if a == 0 else 0.0
    return const, pole, sorted(out)


@pytest.mark.parametrize("seed", range(12))
def test_rational_reciprocal_matches_polynomial_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    atoms = [(float(10 ** rng.uniform(-2, 2)), float(10 ** rng.uniform(-2, 2))) for _ in range(n)]
    a = 0.0 if seed % 2 else float(10 ** rng.uniform(-2, 2))
    b = 0.0 if seed % 3 else float(10 ** rng.uniform(-2, 2))
    cbf = CbfRep(a, b, atoms)
    const, pole, expected = _sympy_reciprocal(cbf)
    assert_rep(rational_reciprocal(cbf), const, pole, expected, rel=1e-10)


def test_relaxation_to_creep_examples():
    creep = relaxation_to_creep(RelaxationModel(0.0, 0.0, [(1.0, 1.0)]))
    assert (creep.offset, creep.flow, len(creep.spectrum)) == pytest.approx((1.0, 1.0, 0), rel=1e-12)
    creep = relaxation_to_creep(RelaxationModel(0.0, 1.0, [(1.0, 1.0)]))
    assert_rep_creep(creep, 0.5, 0.0, [(0.5, 0.25)])
    creep = relaxation_to_creep(RelaxationModel(0.0, 4.0))
    assert_rep_creep(creep, 0.25, 0.0, [])


def assert_rep_creep(creep, offset, flow, atoms):
    assert creep.offset == pytest.approx(offset, rel=1e-12, abs=0)
    assert creep.flow == pytest.approx(flow, rel=1e-12, abs=0)
    assert len(creep.spectrum) == len(atoms)
    for (r, w), (r0, w0) in zip(creep.spectrum, atoms):
        assert (r, w) == pytest.approx((r0, w0), rel=1e-12)


def test_pure_newtonian_is_special_cased():
    creep = relaxation_to_creep(RelaxationModel(newtonian=4.0))
    assert creep == CreepModel(offset=0.0, flow=0.25)
    with pytest.raises(ZeroFunction):
        relaxation_to_creep(RelaxationModel())


def test_creep_to_relaxation_examples():
    relax = creep_to_relaxation(CreepModel(0.5, 0.0, [(0.5, 0.25)]))
    assert relax.newtonian == 0.0
    assert relax.equilibrium == pytest.approx(1.0, rel=1e-12)
    assert relax.spectrum.atoms[0] == pytest.approx((1.0, 1.0), rel=1e-12)
    assert creep_to_relaxation(CreepModel(0.0, 1.0)) == RelaxationModel(newtonian=1.0)
    relax = creep_to_relaxation(CreepModel(1.0, 1.0))
    assert (relax.newtonian, relax.equilibrium) == (0.0, 0.0)
    assert len(relax.spectrum) == 1
    assert relax.spectrum.atoms[0] == pytest.approx((1.0, 1.0), rel=1e-12)
    with pytest.raises(ZeroFunction):
        creep_to_relaxation(CreepModel())


def test_creep_to_relaxation_beta_law():
    # h(0) = 0: beta = 1/h'(0) = 1/(b + sum nu)
    creep = CreepModel(0.0, 0.5, [(2.0, 1.5), (7.0, 0.25)])
    relax = creep_to_relaxation(creep)
    assert relax.newtonian * (0.5 + 1.5 + 0.25) == pytest.approx(1.0, rel=1e-12)
    # h(0) > 0: beta = 0 and f0(0) = 1/h(0)
    relax = creep_to_relaxation(CreepModel(0.2, 0.5, [(2.0, 1.5)]))
    assert relax.newtonian == 0.0
    assert relax.f0_at_zero * 0.2 == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize(
    "model",
    [RelaxationModel(0.0, 1.0, [(1.0, 1.0)]), RelaxationModel(0.0, 0.0, [(1.0, 1.0)])],
    ids=["sls", "maxwell"],
)
def test_roundtrip_fixtures(model):
    assert roundtrip_check(model).discrepancy < 1e-12


def test_roundtrip_random_eight_atoms():
    rng = np.random.default_rng(8)
    atoms = [(float(10 ** rng.uniform(-3, 3)), float(10 ** rng.uniform(-3, 3))) for _ in range(8)]
    rep = roundtrip_check(RelaxationModel(0.3, 2.0, atoms))
    assert rep.atom_count_match
    assert rep.discrepancy < 1e-8


def test_is_interlaced():
    assert is_interlaced([1.0, 3.0], [0.5, 2.0], True, False)
    assert is_interlaced([1.0, 3.0], [2.0], False, False)
    assert is_interlaced([1.0, 3.0], [2.0, 4.0], False, True)
    assert is_interlaced([1.0, 3.0], [0.5, 2.0, 4.0], True, True)
    assert not is_interlaced([1.0, 3.0], [2.0, 2.5], True, False)
    assert not is_interlaced([1.0, 3.0], [0.5, 3.0], True, False)
    assert is_interlaced([], [], True, False)
    assert is_interlaced([], [1.0], True, True)


def _check_structure(model):
    creep = relaxation_to_creep(model)
    ok, _ = interlacing_summary(model, creep)
    assert ok
    assert creep.offset >= 0.0 and creep.flow >= 0.0
    assert all(w > 0.0 for _, w in creep.spectrum)
    s_rates = model.spectrum.rates
    if model.newtonian == 0.0 and model.equilibrium > 0.0:
        r_rates = creep.spectrum.rates
        assert len(r_rates) == len(s_rates)
        assert np.all(r_rates < s_rates)
    # fluid/solid dichotomy
    if model.equilibrium > 0.0:
        assert creep.flow == 0.0
        h_inf = creep.offset + sum(w / r for r, w in creep.spectrum)
        assert h_inf * model.equilibrium == pytest.approx(1.0, rel=1e-10)
    else:
        viscosity = model.newtonian + sum(w / s for s, w in model.spectrum)
        assert creep.flow * viscosity == pytest.approx(1.0, rel=1e-10)
    # offset law
    if model.newtonian > 0.0:
        assert creep.offset == 0.0
    else:
        assert creep.offset * model.f0_at_zero == pytest.approx(1.0, rel=1e-12)
    # transform identity
    prod = P_GRID * laplace_relaxation(model, P_GRID) * P_GRID * laplace_creep(creep, P_GRID)
    assert np.max(np.abs(prod - 1.0)) < 1e-10
    return creep


def test_structure_on_random_models():
    rng = np.random.default_rng(5)
    for _ in range(200):
        _check_structure(random_relaxation(rng))


log_values = st.floats(min_value=-3, max_value=3).map(lambda x: 10.0**x)


@given(
    st.lists(st.tuples(log_values, log_values), min_size=1, max_size=8),
    st.just(0.0) | log_values,
    st.just(0.0) | log_values,
)
@settings(max_examples=300, deadline=None)
def test_structure_property(atoms, beta, f_inf):
    model = RelaxationModel(beta, f_inf, atoms)
    # near-coincident rates are the documented precision-loss regime
    rates = model.spectrum.rates
    assume(len(rates) < 2 or np.min(np.diff(rates) / rates[1:]) > 1e-6)
    with warnings.catch_warnings():
        warnings.simplefilter("error", PrecisionLoss)
        creep = _check_structure(model)
    back = creep_to_relaxation(creep)
    if creep.offset == 0.0:
        assert back.newtonian * (creep.flow + creep.spectrum.mass) == pytest.approx(1.0, rel=1e-10)


def test_precision_loss_is_reported():
    model = RelaxationModel(0.0, 1.0, [(1.0, 1.0), (1.0 + 1e-13, 1e-20)])
    with pytest.warns(PrecisionLoss):
        relaxation_to_creep(model)
