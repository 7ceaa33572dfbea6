"""Tests for quadrature grids, integration, and the integral identities."""

import math

import numpy as np
import pytest

from minimal_gap_lab.errors import InvariantViolation
from minimal_gap_lab.geoquad import (
    build_grid,
    evaluate_fields,
    integral_report,
    integrate,
)
from minimal_gap_lab.invariants import PointInvariants
from minimal_gap_lab.surfaces import catalog_entry


def test_clifford_area_spectral():
    grid = build_grid(catalog_entry("clifford"), (64, 64))
    area = integrate(np.ones_like(grid.u), grid)
    assert abs(area - 2.0 * math.pi ** 2) < 1e-10


@pytest.mark.parametrize("name,expected", [
    ("equator", 4.0 * math.pi),
    ("veronese", 12.0 * math.pi),
    ("calabi3", 24.0 * math.pi),
    ("calabi4", 40.0 * math.pi),
])
def test_sphere_areas(name, expected):
    grid = build_grid(catalog_entry(name), (64, 128))
    area = integrate(np.ones_like(grid.u), grid)
    assert abs(area - expected) < 1e-6 * expected


def test_weights_positive_and_nodes_inside_margin():
    for name in ("veronese", "clifford"):
        spec = catalog_entry(name)
        grid = build_grid(spec)
        assert np.all(grid.weight > 0.0)
        assert np.all(grid.sqrt_det_g > 0.0)
        if spec.chart == "sphere":
            assert np.min(grid.u) > spec.pole_margin
            assert np.max(grid.u) < math.pi - spec.pole_margin


def test_resolution_gate():
    from minimal_gap_lab.errors import DomainError

    with pytest.raises(DomainError):
        build_grid(catalog_entry("clifford"), (4, 64))


def test_integrate_rejects_nan():
    grid = build_grid(catalog_entry("clifford"), (8, 8))
    values = np.ones_like(grid.u)
    values[5] = np.nan
    with pytest.raises(InvariantViolation) as err:
        integrate(values, grid)
    assert "node 5" in str(err.value)


def test_integrate_shape_mismatch():
    grid = build_grid(catalog_entry("clifford"), (8, 8))
    with pytest.raises(ValueError):
        integrate(np.ones(3), grid)


@pytest.mark.parametrize("name", ["equator", "veronese", "calabi3", "clifford"])
def test_gauss_bonnet(name, bundle):
    b = bundle(name)
    rep = b.report
    assert abs(rep.gauss_bonnet_residual) < 1e-6 * (1.0 + abs(rep.int_K))
    assert abs(rep.int_delta_S) < 1e-6


def test_gauss_bonnet_mixed_torus(bundle):
    rep = bundle("mixed_torus").report
    # K changes sign on this torus; its integral must still vanish (chi = 0)
    assert abs(rep.gauss_bonnet_residual) < 1e-9


@pytest.mark.parametrize("name", ["clifford", "veronese", "calabi3", "mixed_torus"])
def test_first_gap_integral_identity(name, bundle):
    rep = bundle(name).report
    assert rep.gap1_residual_rel < 1e-4
    assert rep.gap1_lhs >= -1e-6 * rep.area


def test_first_gap_calabi3_value(bundle):
    rep = bundle("calabi3").report
    assert abs(rep.gap1_lhs - 40.0 * math.pi) < 1e-4 * 40.0 * math.pi
    assert abs(rep.gap1_rhs - 40.0 * math.pi) < 1e-4 * 40.0 * math.pi


@pytest.mark.parametrize("name", ["equator", "clifford", "veronese", "calabi3",
                                  "calabi4", "mixed_torus"])
def test_second_gap_forms_agree(name, bundle):
    rep = bundle(name).report
    assert rep.gap2_residual_rel < 1e-6
    assert rep.gap2_form1 >= -1e-6 * rep.area
    assert rep.gap2_form2 >= -1e-6 * rep.area


def test_second_gap_vanishes_on_veronese_and_calabi3(bundle):
    for name in ("veronese", "calabi3"):
        rep = bundle(name).report
        assert abs(rep.gap2_form1) / rep.area < 1e-5
        assert abs(rep.gap2_form2) / rep.area < 1e-5


def test_bound_445_attained_on_clifford(bundle):
    rep = bundle("clifford").report
    assert abs(rep.bound_445 - 2.0) < 1e-8
    assert abs(rep.max_u - 2.0) < 1e-8


def test_main6_specialization_on_two_spheres(bundle):
    # catalog 2-spheres have t = 0, so the tau = 0 hypothesis holds and
    # max u >= 3 (1 - 2 pi chi / area); equality for the harmonic spheres
    for name in ("equator", "veronese", "calabi3", "calabi4"):
        b = bundle(name)
        bound = 3.0 * (1.0 - 2.0 * math.pi * b.spec.euler_char / b.report.area)
        assert b.report.max_u >= bound - 1e-8
        assert abs(b.report.max_u - bound) < 1e-6   # attained on this catalog


def test_fields_worker_chunking_is_exact(mixed_torus):
    grid = build_grid(mixed_torus, (16, 16))
    f1 = evaluate_fields(mixed_torus, grid, workers=1)
    f3 = evaluate_fields(mixed_torus, grid, workers=3)
    assert np.array_equal(f1.inv.S, f3.inv.S)
    assert np.array_equal(f1.b1_direct, f3.b1_direct)
    assert np.array_equal(f1.b1_simons, f3.b1_simons)
    assert np.array_equal(f1.flagged, f3.flagged)


def test_quadrature_convergence_on_synthetic_field():
    # a smooth non-polynomial integrand on the veronese chart; halving the
    # mesh must cut the error at least 4x until the floor
    spec = catalog_entry("veronese")

    def field(grid):
        return np.exp(np.sin(grid.u) * np.cos(grid.v))

    ref_grid = build_grid(spec, (96, 192))
    ref = integrate(field(ref_grid), ref_grid)
    errors = []
    for res in ((8, 16), (16, 32), (32, 64)):
        grid = build_grid(spec, res)
        errors.append(abs(integrate(field(grid), grid) - ref))
    floor = 1e-10 * abs(ref)
    for coarse, fine in zip(errors, errors[1:]):
        assert fine <= max(coarse / 4.0, floor)


def test_report_residuals_do_not_degrade_with_resolution(bundle):
    # constant-field catalog integrands are already at the floor; doubling
    # the resolution must keep each residual at or below max(old/4, floor)
    coarse = bundle("veronese", (32, 64)).report
    fine = bundle("veronese").report       # 64 x 128
    for attr, floor in (("gauss_bonnet_residual", 1e-10),
                        ("int_delta_S", 1e-6),
                        ("gap2_residual_rel", 1e-10),
                        ("gap1_residual_rel", 1e-6)):
        c, f = abs(getattr(coarse, attr)), abs(getattr(fine, attr))
        assert f <= max(c / 4.0, floor)


def test_nonnegativity_guard_trips_on_forged_fields():
    # synthetic S = 1, lambda2 = 0 makes the first gap integrand -2 < 0
    spec = catalog_entry("clifford")
    grid = build_grid(spec, (8, 8))
    n = grid.node_count
    ones, zeros = np.ones(n), np.zeros(n)
    inv = PointInvariants(
        S=ones, normA2=ones, rho0=zeros, rho_perp=zeros, lambda1=ones,
        lambda2=zeros, u=ones, t=ones, K=0.5 * ones, ddvv_slack=ones,
        hopf_re=zeros, hopf_im=zeros, rho0_commutator_residual=zeros,
        eig_residual=zeros, eig_tail=zeros, gram_residual=zeros,
        minimality_residual=zeros)
    from minimal_gap_lab.geoquad import SurfaceFields

    forged = SurfaceFields(
        inv=inv, b1_simons=zeros, b1_direct=zeros, b1_cross=zeros,
        delta_S=zeros, codazzi_residual=zeros, grad_fd_disagreement=zeros,
        laplace_disagreement=zeros, flagged=zeros.astype(bool))
    with pytest.raises(InvariantViolation) as err:
        integral_report(spec, grid, forged)
    assert "nonnegativity" in str(err.value)
