import math

import numpy as np
import pytest

from logstrain.ellipticity_lab import (EllipticityReport, RankOneProbe, Verdict, Witness,
                                       counterexample_curve, counterexample_model,
                                       directional_second_derivative, elliptic_interval,
                                       frozen_identity_curvature, h_closed_form_paper, h_direct,
                                       hemisphere_directions, line_convexity_check,
                                       multiplicative_transport_check, rank_one_scan, simple_shear,
                                       simple_shear_kinematics, stretch_domain_scan,
                                       uniaxial_stretch_grid)
from logstrain.energy_models import (Hyperelastic, LogStrainEnergyKind, MultiplicativeComposite,
                                     SaintVenantKirchhoff, SmallStrainQuadratic)
from logstrain.errors import InvalidArgumentError, OrientationError
from logstrain.math_utils import random_deformation, random_unimodular, random_unit_vector
from logstrain.tensor_kernels import log_stretch


def _golden_ratio_log():
    return math.log((math.sqrt(5.0) + 1.0) / 2.0)


def test_counterexample_values_at_unit_shear():
    L = _golden_ratio_log()
    paper_exponent = 2.0 * L * L - 2.0 * (L / 5.0) * 4.0 + 8.0
    direct_exponent = 2.0 * L * L - 8.0 * L / math.sqrt(5.0) + 8.0
    assert paper_exponent == pytest.approx(7.693191, abs=1e-6)
    assert direct_exponent == pytest.approx(6.741496, abs=1e-6)
    assert h_closed_form_paper(-2.0, 0.0, 1.0) == pytest.approx(math.exp(paper_exponent), rel=1e-12)
    assert h_direct(-2.0, 0.0, 1.0) == pytest.approx(math.exp(direct_exponent), rel=1e-10)


def test_counterexample_curves_agree_at_zero():
    assert h_closed_form_paper(-2.0, 0.0, 0.0) == pytest.approx(math.exp(8.0), rel=1e-14)
    assert h_direct(-2.0, 0.0, 0.0) == pytest.approx(math.exp(8.0), rel=1e-12)


def test_counterexample_curve_is_nonconvex():
    curve = counterexample_curve(-2.0, 0.0, np.linspace(-2.0, 2.0, 401))
    assert not curve.direct_check.convex
    assert not curve.paper_check.convex
    assert curve.direct_check.witness is not None
    assert curve.evenness_expected
    assert curve.evenness_direct <= 1e-10
    assert curve.evenness_paper <= 1e-10
    assert curve.discrepancy > 0.1
    summary = curve.to_dict()
    assert summary["h_direct"]["verdict"] == "nonconvex"
    assert summary["h_at_one"]["h_paper"] == pytest.approx(h_closed_form_paper(-2.0, 0.0, 1.0))


def test_counterexample_curve_without_plastic_strain_is_convex():
    curve = counterexample_curve(0.0, 0.0, np.linspace(-2.0, 2.0, 401))
    assert curve.direct_check.convex
    assert curve.paper_check.convex


def test_odd_term_breaks_evenness():
    curve = counterexample_curve(0.0, 1.0, np.linspace(-2.0, 2.0, 101))
    assert not curve.evenness_expected
    assert curve.evenness_direct > 1e-3


@pytest.mark.parametrize("grid", [np.linspace(-1.0, 2.0, 11), np.array([-1.0, 1.0])])
def test_counterexample_grid_validation(grid):
    with pytest.raises(InvalidArgumentError):
        counterexample_curve(-2.0, 0.0, grid)


def test_line_convexity_on_pairs():
    result = line_convexity_check([(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)])
    assert not result.convex
    assert result.witness_index == 1
    assert result.witness == ((0.0, 0.0), (1.0, 1.0), (2.0, 0.0))
    t = np.array([0.0, 1.0, 3.0, 3.5])
    assert line_convexity_check(t, t * t).convex


def test_line_convexity_input_errors():
    with pytest.raises(InvalidArgumentError):
        line_convexity_check([(0.0, 0.0), (1.0, 1.0)])
    with pytest.raises(InvalidArgumentError):
        line_convexity_check(np.array([0.0, 2.0, 1.0]), np.zeros(3))


@pytest.mark.parametrize("t", [-3.0, -0.5, 0.0, 0.7, 2.0])
def test_simple_shear_kinematics(t):
    kin = simple_shear_kinematics(t)
    F = simple_shear(t)
    np.testing.assert_allclose(kin.R @ kin.U, F, atol=1e-14)
    np.testing.assert_allclose(kin.R.T @ kin.R, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(kin.logU, log_stretch(F), atol=1e-13)
    assert kin.lambda1 * (kin.lambda1 - t) == pytest.approx(1.0, rel=1e-14)


def test_simple_shear_batches():
    F = simple_shear(np.array([0.0, 1.0]))
    assert F.shape == (2, 2, 2)
    assert F[1, 0, 1] == 1.0 and F[0, 0, 1] == 0.0


def test_additive_shear_line_is_not_elliptic():
    model = counterexample_model(-2.0, 0.0)
    reports = [rank_one_scan(model, F, angular_resolution=128) for F in simple_shear(np.linspace(0.0, 1.5, 31))]
    assert sum(r.violated for r in reports) >= 1
    first = next(r for r in reports if r.violated)
    assert first.witness is not None and first.witness.q < -first.tol


def test_identity_curvature_matches_scan(eh_iso):
    ep = np.diag([-2.0, 2.0])
    min_q, eta, xi = frozen_identity_curvature(eh_iso, ep)
    assert min_q == pytest.approx(-3.0 * math.exp(8.0), rel=1e-12)
    assert abs(eta[0]) == pytest.approx(1.0)
    assert abs(xi[1]) == pytest.approx(1.0)
    report = rank_one_scan(counterexample_model(-2.0, 0.0), np.eye(2), angular_resolution=128)
    assert report.violated
    assert report.min_q == pytest.approx(min_q, rel=1e-4)
    q_grid = directional_second_derivative(counterexample_model(-2.0, 0.0), np.eye(2), eta, xi)
    assert q_grid == pytest.approx(min_q, rel=1e-4)


def test_identity_curvature_needs_planar_iso_kind(quadratic_3d):
    with pytest.raises(InvalidArgumentError):
        frozen_identity_curvature(quadratic_3d, np.zeros((3, 3)))


def test_multiplicative_shear_line_is_elliptic(eh_iso):
    model = MultiplicativeComposite(eh_iso, np.diag([math.exp(-2.0), math.exp(2.0)]))
    for F in simple_shear(np.linspace(0.0, 1.5, 31)):
        report = rank_one_scan(model, F, angular_resolution=128)
        assert report.verdict is Verdict.ELLIPTIC
        assert report.min_q > 0


def test_hyperelastic_iso_has_no_violations(rng, eh_iso):
    model = Hyperelastic(eh_iso)
    for _ in range(200):
        report = rank_one_scan(model, random_deformation(rng, 2, 0.2, 5.0), angular_resolution=64)
        assert not report.violated


def test_saint_venant_kirchhoff_under_compression():
    model = SaintVenantKirchhoff(1.0, 1.0, n=2)
    F = np.diag([0.3, 1.0])
    e1 = np.array([1.0, 0.0])
    expected = (3.0 / 32.0) * (12.0 * 0.09 - 4.0)
    assert directional_second_derivative(model, F, e1, e1) == pytest.approx(expected, rel=1e-6)
    assert rank_one_scan(model, F, angular_resolution=32).violated


def test_quadratic_hencky_uniaxial_tension(quadratic_3d):
    model = Hyperelastic(quadratic_3d)
    F = np.diag([5.0, 1.0, 1.0])
    e1 = np.array([1.0, 0.0, 0.0])
    expected = (7.0 / 6.0) * 2.0 * (1.0 - math.log(5.0)) / 25.0
    assert expected == pytest.approx(-0.056881, abs=1e-6)
    assert directional_second_derivative(model, F, e1, e1) == pytest.approx(expected, rel=1e-5)
    report = rank_one_scan(model, F, angular_resolution=32)
    assert report.violated
    assert report.min_q <= expected + 1e-6


def test_small_strain_scan_uses_exact_form():
    report = rank_one_scan(SmallStrainQuadratic(1.0, 0.5, n=2), np.array([[1.3, 0.4], [0.0, 0.8]]),
                           angular_resolution=16)
    assert report.verdict is Verdict.ELLIPTIC
    assert report.min_q >= 1.0 - 1e-12


def test_transport_identity(rng, eh_full_2d):
    for _ in range(1000):
        F = random_deformation(rng, 2, 0.5, 2.0)
        Fp = random_unimodular(rng, 2, max_condition=20.0)
        eta, xi = random_unit_vector(rng, 2), random_unit_vector(rng, 2)
        check = multiplicative_transport_check(eh_full_2d, F, Fp, eta, xi)
        assert check.relative_residual <= 1e-5


def test_transport_check_residual_is_small(eh_full_2d):
    check = multiplicative_transport_check(eh_full_2d, np.array([[1.2, 0.3], [0.0, 0.9]]),
                                           np.diag([2.0, 0.5]), np.array([0.6, 0.8]), np.array([1.0, 0.0]))
    assert check.zeta_norm == pytest.approx(0.5)
    assert check.relative_residual <= 1e-5


def test_uniaxial_domain_scan(quadratic_3d):
    values = [0.05, 0.1, 0.3, 0.6, 1.0, 1.2, 2.0, 3.0, 5.0]
    reports = stretch_domain_scan(quadratic_3d, uniaxial_stretch_grid(values), angular_resolution=64)
    ordered = [reports[(v, 1.0, 1.0)] for v in values]
    assert reports[(1.0, 1.0, 1.0)].verdict is Verdict.ELLIPTIC
    assert reports[(3.0, 1.0, 1.0)].violated and reports[(5.0, 1.0, 1.0)].violated
    assert reports[(0.1, 1.0, 1.0)].violated
    interval = elliptic_interval(values, ordered)
    assert interval.contains_identity
    assert interval.upper is not None and 1.0 < interval.upper <= 2.5
    assert interval.bounded
    assert interval.lower is not None and 0.05 < interval.lower < 1.0
    assert interval.to_dict()["reference"] == pytest.approx([0.21162, 1.39561])


def _report(verdict):
    witness = Witness(eta=np.zeros(2), xi=np.zeros(2), F=np.eye(2), q=0.0)
    return EllipticityReport(verdict=verdict, min_q=0.0, tol=1e-10, samples=1, F=np.eye(2),
                             minimizer=witness, max_abs_q=0.0)


def test_elliptic_interval_from_verdicts():
    E, V = Verdict.ELLIPTIC, Verdict.VIOLATED
    values = [2.0, 0.1, 0.5, 1.0, 1.5]
    reports = [_report(V), _report(V), _report(E), _report(E), _report(E)]
    interval = elliptic_interval(values, reports)
    assert interval.lower == pytest.approx(0.3)
    assert interval.upper == pytest.approx(1.75)
    assert interval.bounded
    lo, hi = interval.deviation
    assert lo == pytest.approx(0.3 - 0.21162)
    assert hi == pytest.approx(1.75 - 1.39561)
    unbounded = elliptic_interval([0.5, 1.0], [_report(E), _report(E)])
    assert not unbounded.bounded and unbounded.contains_identity
    assert not elliptic_interval([1.0], [_report(V)]).contains_identity


def test_hemisphere_directions():
    directions = hemisphere_directions(32)
    assert directions.shape == (35, 3)
    np.testing.assert_allclose(np.linalg.norm(directions, axis=1), 1.0, atol=1e-14)


def test_rank_one_probe():
    e1 = np.array([1.0, 0.0])
    with pytest.raises(InvalidArgumentError):
        RankOneProbe(np.eye(2), np.array([1.0, 1.0]), e1, 0.5)
    with pytest.raises(InvalidArgumentError):
        RankOneProbe(np.eye(2), e1, e1, 1.5)
    probe = RankOneProbe(np.eye(2), e1, np.array([0.0, 1.0]), 1.0)
    t, h = probe.line(counterexample_model(0.0, 0.0), samples=21)
    assert t.shape == h.shape == (21,)
    assert np.all(np.isfinite(h))


def test_second_derivative_near_boundary_is_minus_infinity(eh_full_2d):
    e1 = np.array([1.0, 0.0])
    q = directional_second_derivative(Hyperelastic(eh_full_2d), np.diag([1e-5, 1.0]), e1, e1)
    assert q == -np.inf


def test_scan_argument_errors(eh_iso):
    model = Hyperelastic(eh_iso)
    with pytest.raises(InvalidArgumentError):
        rank_one_scan(model, np.eye(3))
    with pytest.raises(OrientationError):
        rank_one_scan(model, np.diag([1.0, -1.0]))
    with pytest.raises(InvalidArgumentError):
        rank_one_scan(model, np.eye(2), angular_resolution=2)


def test_scan_keeps_cells(eh_iso):
    report = rank_one_scan(Hyperelastic(eh_iso), np.diag([1.5, 0.8]), angular_resolution=8, keep_cells=True)
    assert report.cells.shape == (8, 8)
    assert report.cell_header() == ["theta", "phi", "q"]
    assert len(list(report.cell_rows())) == 64
    assert report.to_dict()["witness"] is None
