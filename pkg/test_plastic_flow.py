import logging
import math

import numpy as np
import pytest

from logstrain import plastic_flow
from logstrain.energy_models import LogStrainEnergyKind, Moduli, SmallStrainPlastic
from logstrain.errors import InvalidArgumentError, NonConvergenceError
from logstrain.plastic_flow import (FlowState, Formulation, KKTCheck, PathSpec, StepResult, YieldSurface,
                                    additive_log_return_map, drive_path, kkt_check, multiplicative_flow_step,
                                    radial_return_small_strain, safeguarded_newton, shear_cycle,
                                    step_size_study)
from logstrain.tensor_kernels import det, deviatoric, frobenius_norm, matrix_exp_sym


def _shear_unload_path(formulation, kind, sigma_y=6.7, t_max=5.0, steps=25):
    times, deformations = shear_cycle(t_max, steps, steps)
    return PathSpec(times=times, formulation=formulation, kind=kind, yield_surface=YieldSurface(sigma_y),
                    deformations=deformations)


def _log_walk(rng, n, count, scale=0.02):
    S = np.zeros((n, n))
    deformations = []
    for _ in range(count):
        step = rng.standard_normal((n, n))
        S = S + scale * 0.5 * (step + step.T)
        deformations.append(matrix_exp_sym(S))
    return deformations


def test_yield_surface():
    surface = YieldSurface(3.0)
    assert surface.radius == pytest.approx(math.sqrt(2.0 / 3.0) * 3.0)
    assert surface.radius_squared == pytest.approx(6.0)
    assert surface.value(np.diag([1.0, -1.0])) == pytest.approx(2.0 - 6.0)
    assert Formulation.MULTIPLICATIVE.default_radius_factor == pytest.approx(1.0 / 3.0)
    with pytest.raises(InvalidArgumentError):
        YieldSurface(0.0)


def test_small_strain_radial_return_example():
    moduli = Moduli(mu=1.0, kappa=1.0, lam=1.0)
    state = FlowState.initial(Formulation.SMALL_STRAIN, 2)
    result = radial_return_small_strain(np.diag([1.0, -1.0]), state, moduli, YieldSurface(1.0, 1.0))
    assert result.delta_gamma == pytest.approx((2.0 * math.sqrt(2.0) - 1.0) / 2.0, rel=1e-14)
    assert frobenius_norm(deviatoric(result.stress)) == pytest.approx(1.0, rel=1e-14)
    assert np.trace(result.plastic.matrix) == pytest.approx(0.0, abs=1e-15)
    assert result.plastic_step
    assert kkt_check(result).passed


def test_small_strain_elastic_step():
    moduli = Moduli(mu=1.0, kappa=1.0, lam=1.0)
    state = FlowState.initial(Formulation.SMALL_STRAIN, 2)
    result = radial_return_small_strain(np.diag([0.1, -0.1]), state, moduli, YieldSurface(1.0))
    assert result.lambda_plus == 0.0
    assert not result.plastic_step
    assert result.plastic is state.plastic
    assert result.yield_value < 0


def test_step_rejects_bad_increment_and_state(eh_iso):
    moduli = Moduli(mu=1.0, kappa=1.0, lam=1.0)
    with pytest.raises(InvalidArgumentError):
        radial_return_small_strain(np.zeros((2, 2)), FlowState.initial(Formulation.SMALL_STRAIN, 2), moduli,
                                   YieldSurface(1.0), dt=0.0)
    with pytest.raises(InvalidArgumentError):
        additive_log_return_map(np.eye(2), FlowState.initial(Formulation.SMALL_STRAIN, 2), eh_iso,
                                YieldSurface(1.0))
    with pytest.raises(InvalidArgumentError):
        multiplicative_flow_step(np.eye(2), FlowState.initial(Formulation.ADDITIVE_LOG, 2), eh_iso,
                                 YieldSurface(1.0))


def test_additive_quadratic_matches_small_strain_on_log_strain(rng):
    kind = LogStrainEnergyKind.quadratic(mu=1.0, kappa=2.0, n=3)
    deformations = _log_walk(rng, 3, 1000)
    path = PathSpec(times=np.arange(1000.0), formulation=Formulation.ADDITIVE_LOG, kind=kind,
                    yield_surface=YieldSurface(0.3), deformations=deformations)
    additive = drive_path(path)
    small = drive_path(path.with_formulation(Formulation.SMALL_STRAIN, strain_measure="log"))
    assert additive.to_dict()["plastic_steps"] > 0
    for a, s in zip(additive, small):
        assert float(frobenius_norm(a.stress - s.stress)) <= 1e-12
        assert float(frobenius_norm(a.plastic.matrix - s.plastic.matrix)) <= 1e-12
        check = kkt_check(a)
        assert check.passed, check.failures
        assert abs(float(np.trace(a.plastic.matrix))) <= 1e-12


@pytest.mark.parametrize("formulation", [Formulation.SMALL_STRAIN, Formulation.ADDITIVE_LOG,
                                         Formulation.MULTIPLICATIVE])
def test_invariants_along_random_walk(rng, eh_full_2d, formulation):
    kind = eh_full_2d if formulation is not Formulation.SMALL_STRAIN else LogStrainEnergyKind(
        eh_full_2d.family, Moduli(mu=1.0, kappa=1.0, lam=0.0, k=1.0, khat=1.0), n=2)
    path = PathSpec(times=np.arange(1000.0), formulation=formulation, kind=kind, yield_surface=YieldSurface(0.8),
                    deformations=_log_walk(rng, 2, 1000))
    result = drive_path(path)
    assert any(step.plastic_step for step in result)
    for step in result:
        check = kkt_check(step)
        assert check.passed, check.failures
        assert step.lambda_plus >= 0
        assert step.dissipation >= -1e-12
        if formulation is Formulation.MULTIPLICATIVE:
            assert abs(float(det(step.plastic.matrix)) - 1.0) <= 1e-9
        else:
            assert abs(float(np.trace(step.plastic.matrix))) <= 1e-12
    assert result.final_state.accumulated_multiplier == pytest.approx(sum(s.delta_gamma for s in result))


def test_multiplicative_single_step_is_consistent():
    kind = LogStrainEnergyKind.quadratic(mu=1.0, kappa=1.0, n=2)
    surface = YieldSurface(1.0, 1.0 / 3.0)
    F = np.diag([math.exp(1.5), math.exp(-1.5)])
    result = multiplicative_flow_step(F, FlowState.initial(Formulation.MULTIPLICATIVE, 2), kind, surface)
    assert result.plastic_step
    assert abs(result.yield_value) <= 1e-10 * surface.radius_squared
    assert abs(float(det(result.plastic.matrix)) - 1.0) <= 1e-9
    assert result.dissipation > 0
    assert result.iterations >= 1


def test_elastic_loading_is_reversible(quadratic_3d):
    surface = YieldSurface(10.0)
    F = np.eye(3) + np.array([[0.0, 0.05, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.02]])
    path = PathSpec(times=[0.0, 1.0, 2.0], formulation=Formulation.ADDITIVE_LOG, kind=quadratic_3d,
                    yield_surface=surface, deformations=[np.eye(3), F, np.eye(3)])
    result = drive_path(path)
    assert not any(step.plastic_step for step in result)
    np.testing.assert_allclose(result[-1].stress, np.zeros((3, 3)), atol=1e-15)
    assert result.to_dict()["total_dissipation"] == 0.0


def test_kkt_check_reports_failures():
    plastic = SmallStrainPlastic.zero(2)
    bad = StepResult(t=0.0, stress=np.zeros((2, 2)), plastic=plastic, lambda_plus=-1.0, yield_value=1.0,
                     radius_squared=1.0)
    check = kkt_check(bad)
    assert isinstance(check, KKTCheck)
    assert not check.passed
    assert check.failures == ["multiplier", "yield", "complementarity"]
    slack = StepResult(t=0.0, stress=np.zeros((2, 2)), plastic=plastic, lambda_plus=0.5, yield_value=-0.2,
                       radius_squared=1.0)
    assert kkt_check(slack).failures == ["complementarity"]
    assert bad.kkt["yield_residual"] == 1.0
    assert bad.verdict == "skipped"


def test_additive_shear_unload_loses_ellipticity(eh_iso):
    result = drive_path(_shear_unload_path(Formulation.ADDITIVE_LOG, eh_iso), probe_ellipticity=True,
                        angular_resolution=64)
    assert result.first_violation is not None
    assert result[-1].verdict == "violated"
    assert result.final_state.plastic.norm() > 1.0 / math.sqrt(2.0)
    assert result.to_dict()["first_violation"]["step"] == result.first_violation


def test_multiplicative_shear_unload_stays_elliptic(eh_iso):
    result = drive_path(_shear_unload_path(Formulation.MULTIPLICATIVE, eh_iso), probe_ellipticity=True,
                        angular_resolution=64)
    assert any(step.plastic_step for step in result)
    assert result.first_violation is None
    assert all(step.verdict != "violated" for step in result)


def test_step_size_study_refines(eh_iso):
    path = _shear_unload_path(Formulation.ADDITIVE_LOG, eh_iso, t_max=3.0, steps=10)
    study = step_size_study(path, levels=3)
    assert study["dt"][1] == pytest.approx(study["dt"][0] / 2.0)
    assert len(study["differences"]) == 2 and len(study["ratios"]) == 1
    assert study["differences"][1] < study["differences"][0]
    with pytest.raises(InvalidArgumentError):
        step_size_study(path, levels=1)


def test_newton_converges_quickly():
    root, iterations, residual = safeguarded_newton(lambda x: 1.0 - x, lambda x: -1.0, 0.0, 3.0)
    assert root == pytest.approx(1.0, abs=1e-12)
    assert iterations <= 3
    assert residual <= 1e-12


def test_newton_falls_back_to_bisection(caplog):
    with caplog.at_level(logging.WARNING, logger="logstrain"):
        root, iterations, _ = safeguarded_newton(lambda x: 1.0 - x, lambda x: -1e6, 0.0, 3.0,
                                                 max_iter=200, patience=25)
    assert root == pytest.approx(1.0, abs=1e-11)
    assert iterations > 25
    assert "falling back to bisection" in caplog.text


def test_newton_raises_without_convergence():
    with pytest.raises(NonConvergenceError) as info:
        safeguarded_newton(lambda x: 1.0 - x, lambda x: -1e6, 0.0, 3.0, max_iter=10, patience=1000)
    assert info.value.iterations == 10
    assert info.value.step_index is None


def test_drive_path_reports_failing_step(eh_iso, monkeypatch):
    path = _shear_unload_path(Formulation.ADDITIVE_LOG, eh_iso)
    first_plastic = next(i for i, step in enumerate(drive_path(path)) if step.plastic_step)

    def stalled(*args, **kwargs):
        raise NonConvergenceError(residual=1.0, iterations=5)

    monkeypatch.setattr(plastic_flow, "safeguarded_newton", stalled)
    with pytest.raises(NonConvergenceError) as info:
        drive_path(path)
    assert info.value.step_index == first_plastic
    assert f"at step {first_plastic}" in str(info.value)


def test_path_spec_validation(eh_iso):
    surface = YieldSurface(1.0)
    eye = np.eye(2)
    with pytest.raises(InvalidArgumentError):
        PathSpec(times=[0.0, 0.0], formulation=Formulation.ADDITIVE_LOG, kind=eh_iso, yield_surface=surface,
                 deformations=[eye, eye])
    with pytest.raises(InvalidArgumentError):
        PathSpec(times=[0.0], formulation=Formulation.ADDITIVE_LOG, kind=eh_iso, yield_surface=surface)
    with pytest.raises(InvalidArgumentError):
        PathSpec(times=[0.0], formulation=Formulation.ADDITIVE_LOG, kind=eh_iso, yield_surface=surface,
                 strains=[np.zeros((2, 2))])
    with pytest.raises(InvalidArgumentError):
        PathSpec(times=[0.0], formulation=Formulation.SMALL_STRAIN, kind=eh_iso, yield_surface=surface,
                 deformations=[eye], strain_measure="green")
    with pytest.raises(InvalidArgumentError):
        PathSpec(times=[0.0], formulation=Formulation.ADDITIVE_LOG, kind=eh_iso, yield_surface=surface,
                 deformations=[np.diag([1.0, -1.0])])
    with pytest.raises(InvalidArgumentError):
        PathSpec(times=[0.0, 1.0], formulation=Formulation.ADDITIVE_LOG, kind=eh_iso, yield_surface=surface,
                 deformations=[eye])
    with pytest.raises(InvalidArgumentError):
        PathSpec(times=[0.0], formulation=Formulation.ADDITIVE_LOG, kind=eh_iso, yield_surface=surface,
                 deformations=[np.eye(3)])


def test_path_refinement_and_single_sample(eh_iso):
    path = _shear_unload_path(Formulation.ADDITIVE_LOG, eh_iso, t_max=1.0, steps=2)
    refined = path.refined()
    assert len(refined) == 2 * len(path) - 1
    np.testing.assert_allclose(refined.deformations[1], np.array([[1.0, 0.25], [0.0, 1.0]]))
    single = PathSpec(times=[0.0], formulation=Formulation.ADDITIVE_LOG, kind=eh_iso,
                      yield_surface=YieldSurface(1.0), deformations=[np.eye(2)])
    assert len(drive_path(single)) == 1


def test_shear_cycle():
    times, deformations = shear_cycle(1.0, 2, 2)
    np.testing.assert_array_equal(times, [0.0, 1.0, 2.0, 3.0, 4.0])
    assert [F[0, 1] for F in deformations] == pytest.approx([0.0, 0.5, 1.0, 0.5, 0.0])
    with pytest.raises(InvalidArgumentError):
        shear_cycle(1.0, 0, 2)
