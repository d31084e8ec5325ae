import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_index import _kernels
from toric_index import dirac1d as dm
from toric_index.dirac1d import (
    ConstantT,
    EpsilonFamily,
    IndexUnresolved,
    ModelError,
    ModelSpec1D,
    ProfileMu,
    ProperFunction,
    analytic_zero_mode_count,
    build_cylinder_operator,
    build_disc_operator,
    cluster_split,
    compute_index,
    deformation_sweep,
    parse_model_spec,
    probe_acyclicity,
    product_index,
)

FAST = 501


def cyl(rho, tau, **kw):
    kw.setdefault("N", FAST)
    return ModelSpec1D("cylinder", rho, tau, **kw)


def disc(rho, tau, **kw):
    kw.setdefault("N", FAST)
    return ModelSpec1D("disc", rho, tau, **kw)


@given(st.integers(-3, 3), st.floats(-0.24, 0.24))
def test_profile_linear_core(rho, r):
    assert ProfileMu(rho)(r) == pytest.approx(rho + r, abs=1e-15)


@given(st.integers(-3, 3), st.floats(0.75, 50))
def test_profile_flat_ends(rho, r):
    p = ProfileMu(rho)
    assert p(r) == pytest.approx(rho + 0.5, abs=1e-15)
    assert p(-r) == pytest.approx(rho - 0.5, abs=1e-15)
    assert ProfileMu(rho, "disc")(r) == pytest.approx(rho + 0.5, abs=1e-15)


@pytest.mark.parametrize("kind", ["cylinder", "disc"])
def test_profile_monotone_and_c1(kind):
    lo = -2.0 if kind == "cylinder" else 0.0
    x = np.linspace(lo, 2.0, 200001)
    mu = ProfileMu(0, kind)(x)
    assert np.all(np.diff(mu) >= -1e-15)
    slope = np.diff(mu) / np.diff(x)
    assert np.max(np.abs(np.diff(slope))) < 1e-3


def test_profile_transition_validation():
    with pytest.raises(ModelError, match="a0 \\+ a1 = 1"):
        ProfileMu(0, "cylinder", (0.2, 0.9))
    assert ProfileMu(0, "disc").disc_coefficient == pytest.approx(8 / 3)


def test_cutoff_regions():
    assert dm.cutoff(np.array([0.0, 0.1, 0.125]))[...].tolist() == [0.0, 0.0, 0.0]
    assert dm.cutoff(np.array([0.25, 1.0, -3.0])).tolist() == [1.0, 1.0, 1.0]


def test_circumference_derivative_matches_finite_difference():
    s = np.linspace(0.01, 1.5, 3001)
    num = np.gradient(dm.circumference(s), s)
    assert np.max(np.abs(num - dm.circumference_prime(s))[1:-1]) < 1e-3


def test_cylinder_operator_examples():
    op = build_cylinder_operator(ModelSpec1D("cylinder", 0, 0))
    w = op.potential
    crossings = np.flatnonzero(np.sign(w[:-1]) * np.sign(w[1:]) <= 0)
    assert len(crossings) in (1, 2) and np.all(np.abs(op.grid[crossings]) < 0.01)
    op1 = build_cylinder_operator(ModelSpec1D("cylinder", 0, 1))
    assert np.min(np.abs(op1.potential)) >= 0.5 - 1e-12
    op2 = build_cylinder_operator(cyl(0, 0, N=101))
    assert op2.plus_block.shape == (101, 101)
    assert op2.assembly_residual() == 0.0
    dense = op2.plus_block.toarray()
    b = np.diag(op2.d) + np.diag(op2.lo, -1) + np.diag(op2.up, 1)
    assert np.allclose(dense, -1j * b)


def test_disc_operator_shape_and_boundary():
    op = build_disc_operator(disc(1, 1, N=101))
    assert op.plus_block.shape == (101, 101)
    assert op.grid[0] > dm.disc_inner_radius(5.0)
    off = build_disc_operator(disc(1, 0, N=101))
    assert off.d[0] == pytest.approx(-(off.d[1] - off.d[1]) - 0 + off.d[0])


def test_builders_check_kind():
    with pytest.raises(ModelError):
        build_disc_operator(cyl(0, 0))
    with pytest.raises(ModelError):
        build_cylinder_operator(disc(0, 0))


@pytest.mark.parametrize("kw,match", [
    (dict(N=63), "N >= 64"), (dict(R=1.5), "R_max >= 2"), (dict(rho=2**40), "guard"),
    (dict(kind="sphere"), "kind"), (dict(cutoff=(0.3, 0.2)), "cutoff"),
])
def test_spec_validation(kw, match):
    base = dict(kind="cylinder", rho=0, tau=0)
    base.update(kw)
    with pytest.raises(ModelError, match=match):
        ModelSpec1D(**base)


def test_deformation_validation():
    with pytest.raises(ModelError):
        EpsilonFamily(1.5)
    with pytest.raises(ModelError):
        ConstantT(0)
    with pytest.raises(ModelError):
        ProperFunction(2)


def test_analytic_oracle_examples():
    assert analytic_zero_mode_count(ProfileMu(0), 0, 1) == 1
    assert analytic_zero_mode_count(ProfileMu(0), 1, 1) == 0
    assert analytic_zero_mode_count(ProfileMu(0), 1, -1) == 0
    assert analytic_zero_mode_count(ProfileMu(3), 3, 1) == 1
    assert analytic_zero_mode_count(ProfileMu(1, "disc"), 1, 1) == 1
    assert analytic_zero_mode_count(ProfileMu(1, "disc"), 3, 1) == 0
    with pytest.raises(ModelError):
        analytic_zero_mode_count(ProfileMu(0), 0, 2)


@given(st.integers(-5, 5), st.integers(-8, 8), st.sampled_from(["cylinder", "disc"]))
def test_analytic_oracle_is_delta(rho, tau, kind):
    p = ProfileMu(rho, kind)
    assert analytic_zero_mode_count(p, tau, 1) - analytic_zero_mode_count(p, tau, -1) == int(rho == tau)


def test_cluster_split_rule():
    assert cluster_split(np.array([1e-14, 1e-13, 5.0, 6.0]), 1e-16) == 2
    assert cluster_split(np.array([3.0, 4.0, 5.0]), 1e-12) == 0
    assert cluster_split(np.array([1e-12, 2e-12, 3e-12]), 1e-13) is None
    assert cluster_split(np.array([1e-12, 1e-9, 1.0]), 1e-16) == 2


@pytest.mark.parametrize("rho,tau,expected", [(0, 0, 1), (0, 1, 0), (2, 2, 1), (1, -1, 0)])
def test_compute_index_cylinder(rho, tau, expected):
    r = compute_index(cyl(rho, tau))
    assert r.index == expected and r.refinement_consistent
    assert r.index == r.dim_ker_plus - r.dim_ker_minus
    if r.kernel_cluster:
        assert r.spectral_gap / max(r.kernel_cluster) >= 100


@pytest.mark.parametrize("rho,tau,expected", [(1, 1, 1), (1, 3, 0), (1, 0, 0), (0, 0, 1)])
def test_compute_index_disc(rho, tau, expected):
    assert compute_index(disc(rho, tau)).index == expected


def test_compute_index_from_operator_matches_spec():
    spec = cyl(0, 0)
    a = compute_index(build_cylinder_operator(spec), refine=False)
    b = compute_index(spec, refine=False)
    assert a.index == b.index == 1
    assert not a.refinement_consistent


def test_unresolved_raises(monkeypatch):
    bad = dm.GridAnalysis(N=FAST, R=5.0, singular_values=(1.0, 1.1), resolved=False, index=None,
                          dim_ker_plus=None, dim_ker_minus=None, cluster_size=None,
                          spectral_gap=None, separation=None, reason="flat")
    monkeypatch.setattr(dm, "_analyze_spec", lambda spec: bad)
    with pytest.raises(IndexUnresolved, match="index unresolved; refine grid or adjust deformation"):
        compute_index(cyl(0, 0))
    sweep = deformation_sweep(cyl(0, 0), [ConstantT(50)])
    assert not sweep.results[0].resolved and sweep.errors[0]
    assert sweep.all_equal


def test_numpy_and_numba_singular_values_agree(monkeypatch):
    op = build_disc_operator(disc(1, 1))
    a = dm.smallest_singular_values(op)
    monkeypatch.setattr(_kernels, "HAVE_NUMBA", False)
    b = dm.smallest_singular_values(op)
    assert np.allclose(a, b, rtol=1e-10, atol=1e-14)


def test_deformation_sweep_examples():
    s = deformation_sweep(cyl(0, 0), [ConstantT(50), ConstantT(100), ConstantT(500)])
    assert [r.index for r in s.results] == [1, 1, 1] and s.all_equal
    s = deformation_sweep(cyl(0, 0), [EpsilonFamily(0), EpsilonFamily(0.5), EpsilonFamily(1)])
    assert [r.index for r in s.results] == [1, 1, 1]
    s = deformation_sweep(cyl(1, 1), [ProperFunction(), ConstantT(100)])
    assert s.results[0].index == s.results[1].index
    csv_text = s.to_csv().splitlines()
    assert csv_text[0] == "kind,rho,tau,deformation,index,gap,resolved"
    assert csv_text[1].startswith("cylinder,1,1,proper,1,")


def test_probe_acyclicity_examples():
    away = probe_acyclicity(cyl(0, 0), [(-math.inf, -0.5), (0.5, math.inf)])
    assert away.kappa_estimate >= float(ProfileMu(0)(0.5)) ** 2 - 1e-12
    assert math.isfinite(away.c_rho_estimate) and away.c_rho_estimate > 0
    everywhere = probe_acyclicity(cyl(0, 0))
    assert everywhere.kappa_estimate == 0.0
    shifted = probe_acyclicity(cyl(0, 1))
    assert shifted.kappa_estimate >= 0.25 - 1e-12
    # the anticommutator is 4 pi w^2 +- w' up to grid terms
    assert 4 * math.pi <= shifted.c_rho_estimate <= 4 * math.pi + 8


def test_product_index_examples():
    specs = [cyl(1, 0), disc(2, 0)]
    assert product_index(specs, (1, 2)) == 1
    assert product_index(specs, (1, 3)) == 0
    assert product_index([], ()) == 1
    with pytest.raises(ModelError, match="multimode"):
        product_index(specs, (1,))


@settings(max_examples=6)
@given(st.integers(-3, 3), st.integers(-2, 2), st.integers(-4, 4),
       st.sampled_from(["cylinder", "disc"]))
def test_shift_equivariance(rho, offset, k, kind):
    a = compute_index(ModelSpec1D(kind, rho, rho + offset, N=FAST))
    b = compute_index(ModelSpec1D(kind, rho + k, rho + offset + k, N=FAST))
    assert a.index == b.index == int(offset == 0)


def test_model_spec_document():
    text = """
kind: disc
rho: 1
tau: 1
deformation: {type: epsilon, epsilon: 1/2}
grid: {R: 6, N: 777}
"""
    spec = parse_model_spec(text)
    assert spec == ModelSpec1D("disc", 1, 1, EpsilonFamily(0.5), R=6.0, N=777)
    import yaml

    assert parse_model_spec(yaml.safe_dump(spec.to_dict())) == spec
    with pytest.raises(ModelError, match="unknown field"):
        parse_model_spec("kind: disc\nrho: 0\ntau: 0\ncolour: 1\n")
    with pytest.raises(ModelError, match="unknown deformation type"):
        parse_model_spec("kind: disc\nrho: 0\ntau: 0\ndeformation: {type: heat}\n")
