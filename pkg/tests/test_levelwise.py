"""Probe fitting, model minimization, and the level-wise driver."""

import math

import numpy as np
import pytest

from levelq import (
    FitConditionError,
    LevelParams,
    LevelwiseConfig,
    ProbeRecord,
    Schedule,
    TrigModel,
    apply_cost,
    apply_mixer,
    argmin_model,
    coefficients_from_observables,
    expectation,
    fit_trig,
    level_step,
    model_eval,
    model_from_observables,
    pauli_expectations,
    probe_angles,
    run_levelwise,
    run_qaoa,
    unit_instance,
    grid_graph,
)

from conftest import random_instance


def planted_model(rng) -> TrigModel:
    return TrigModel(
        a4=float(rng.uniform(0.1, 3.0)),
        phi4=float(rng.uniform(-math.pi, math.pi - 1e-9)),
        a2=float(rng.uniform(0.1, 3.0)),
        phi2=float(rng.uniform(-math.pi, math.pi - 1e-9)),
        offset=float(rng.uniform(-2.0, 2.0)),
    )


def probes_from_model(model: TrigModel, has_fields: bool):
    return [ProbeRecord(t, model_eval(model, t), "exact")
            for t in probe_angles(has_fields)]


# ---------------------------------------------------------------------------
# probe angles
# ---------------------------------------------------------------------------

def test_probe_angle_sets():
    with_fields = probe_angles(True)
    assert with_fields == tuple(k * math.pi / 6 for k in (1, 2, 3, 4, 5))
    field_free = probe_angles(False)
    assert field_free == tuple(k * math.pi / 8 for k in (1, 2, 3))
    for angles in (with_fields, field_free):
        assert len(set(angles)) == len(angles)
        assert all(0 < t < math.pi for t in angles)


# ---------------------------------------------------------------------------
# model basics
# ---------------------------------------------------------------------------

def test_model_eval_periodicity(rng):
    m = planted_model(rng)
    for t in np.linspace(0, math.pi, 17):
        assert model_eval(m, t + math.pi) == pytest.approx(
            model_eval(m, t), abs=1e-12)
    pure4 = TrigModel(1.0, 0.3, 0.0, 0.0, 0.0)
    for t in np.linspace(0, math.pi, 17):
        assert model_eval(pure4, t + math.pi / 2) == pytest.approx(
            model_eval(pure4, t), abs=1e-12)


def test_model_eval_reference_values():
    assert model_eval(TrigModel(1, 0, 0, 0, 0), math.pi / 8) == pytest.approx(1.0)
    m = TrigModel(2.0, 0.25, 1.5, -0.5, 0.75)
    t = 0.61
    by_hand = (2.0 * math.sin(4 * t + 0.25)
               + 1.5 * math.sin(2 * t - 0.5) + 0.75)
    assert model_eval(m, t) == pytest.approx(by_hand, abs=1e-12)
    # vectorized path agrees with the scalar path
    ts = np.linspace(0, 3, 7)
    vec = model_eval(m, ts)
    assert np.allclose(vec, [model_eval(m, float(t)) for t in ts], atol=1e-12)


def test_model_canonical_form_enforced():
    with pytest.raises(ValueError):
        TrigModel(-0.5, 0.0, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        TrigModel(1.0, -math.pi, 0.0, 0.0, 0.0)  # phase must be in (-pi, pi]
    with pytest.raises(ValueError):
        TrigModel(1.0, math.nan, 0.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def test_fit_recovers_planted_sin4():
    model = TrigModel(1.0, 0.0, 0.0, 0.0, 0.0)
    fit = fit_trig(probes_from_model(model, False), has_fields=False)
    assert fit.a4 == pytest.approx(1.0, abs=1e-12)
    assert fit.phi4 == pytest.approx(0.0, abs=1e-12)
    assert fit.a2 == 0.0 and fit.phi2 == 0.0
    assert fit.offset == pytest.approx(0.0, abs=1e-12)


def test_fit_recovers_constant():
    records = [ProbeRecord(t, 2.5, "exact") for t in probe_angles(True)]
    fit = fit_trig(records, has_fields=True)
    assert fit.a4 == pytest.approx(0.0, abs=1e-12)
    assert fit.a2 == pytest.approx(0.0, abs=1e-12)
    assert fit.offset == pytest.approx(2.5, abs=1e-12)


def test_fit_recovers_planted_models(rng):
    for _ in range(25):
        model = planted_model(rng)
        fit = fit_trig(probes_from_model(model, True), has_fields=True)
        assert fit.a4 == pytest.approx(model.a4, abs=1e-9)
        assert fit.a2 == pytest.approx(model.a2, abs=1e-9)
        assert fit.offset == pytest.approx(model.offset, abs=1e-9)
        grid = np.linspace(0, math.pi, 64)
        assert np.max(np.abs(model_eval(fit, grid)
                             - model_eval(model, grid))) < 1e-9


def test_fit_field_free_forces_second_harmonic_to_zero(rng):
    model = TrigModel(float(rng.uniform(0.5, 2)), 0.7, 0.0, 0.0, -0.3)
    fit = fit_trig(probes_from_model(model, False), has_fields=False)
    assert fit.a2 == 0.0
    assert fit.phi2 == 0.0


def test_fit_rejects_wrong_probe_count():
    model = TrigModel(1.0, 0.0, 0.5, 0.0, 0.0)
    with pytest.raises(ValueError):
        fit_trig(probes_from_model(model, True)[:4], has_fields=True)
    with pytest.raises(ValueError):
        fit_trig(probes_from_model(model, False), has_fields=True)


def test_fit_rejects_coincident_angles():
    # pi/8 and pi/8 + pi/2 coincide modulo the field-free period
    records = [ProbeRecord(math.pi / 8, 1.0, "exact"),
               ProbeRecord(math.pi / 8 + math.pi / 2, 1.0, "exact"),
               ProbeRecord(math.pi / 4, 0.0, "exact")]
    with pytest.raises(FitConditionError) as err:
        fit_trig(records, has_fields=False)
    assert "angles" in str(err.value)


# ---------------------------------------------------------------------------
# argmin
# ---------------------------------------------------------------------------

def test_argmin_pure_fourth_harmonic_closed_form():
    theta, j = argmin_model(TrigModel(1.0, 0.0, 0.0, 0.0, 0.0))
    assert theta == pytest.approx(3 * math.pi / 8, abs=1e-12)
    assert j == pytest.approx(-1.0, abs=1e-12)
    assert 0 <= theta < math.pi / 2


def test_argmin_pure_second_harmonic():
    theta, j = argmin_model(TrigModel(0.0, 0.0, 1.0, 0.0, 0.0))
    assert theta == pytest.approx(3 * math.pi / 4, abs=1e-9)
    assert j == pytest.approx(-1.0, abs=1e-12)


def test_argmin_constant_model():
    theta, j = argmin_model(TrigModel(0.0, 0.0, 0.0, 0.0, 1.25))
    assert theta == 0.0
    assert j == 1.25


def test_argmin_beats_dense_grid(rng):
    """j* must come within 1e-10 of a million-point scan, theta in [0, pi)."""
    grid = np.linspace(0.0, math.pi, 1_000_000, endpoint=False)
    for _ in range(20):
        model = planted_model(rng)
        theta, j = argmin_model(model)
        assert 0.0 <= theta < math.pi
        assert j == pytest.approx(model_eval(model, theta), abs=1e-12)
        assert j <= float(np.min(model_eval(model, grid))) + 1e-10
        # stationarity at the reported minimizer
        d1 = (4 * model.a4 * math.cos(4 * theta + model.phi4)
              + 2 * model.a2 * math.cos(2 * theta + model.phi2))
        assert abs(d1) < 1e-9


def test_argmin_tie_breaks_to_smallest_theta():
    # a pure fourth harmonic seen through the generic scan path: a2 tiny but
    # nonzero would break ties; instead plant equal minima via a2 = 0 handled
    # by the scan when a4 = 0 too. Simplest honest tie: constant model.
    theta, _ = argmin_model(TrigModel(0.0, 0.0, 0.0, 0.0, 0.0))
    assert theta == 0.0


# ---------------------------------------------------------------------------
# two-path equivalence
# ---------------------------------------------------------------------------

def test_observable_route_on_plus_is_zero(rng):
    inst = random_instance(rng, 4, with_fields=False)
    model = coefficients_from_observables(inst, Schedule(), 0.0)
    assert model.a4 == pytest.approx(0.0, abs=1e-12)
    assert model.a2 == 0.0
    assert model.offset == pytest.approx(0.0, abs=1e-12)


def test_observable_route_field_free_has_no_second_harmonic(rng):
    inst = random_instance(rng, 5, with_fields=False)
    sched = Schedule(levels=[LevelParams(0.4, 0.7)])
    model = coefficients_from_observables(inst, sched, 0.3)
    assert model.a2 == pytest.approx(0.0, abs=1e-12)


def test_two_path_equivalence(rng):
    for n, depth, with_fields in ((3, 0, True), (5, 2, False), (6, 2, True),
                                  (4, 3, False)):
        inst = random_instance(rng, n, with_fields=with_fields)
        levels = [LevelParams(float(rng.uniform(0, 1)), float(rng.uniform(0, 1)))
                  for _ in range(depth)]
        gamma = float(rng.uniform(0.05, 1.0))
        sched = Schedule(levels=levels)
        by_obs = coefficients_from_observables(inst, sched, gamma)
        psi = apply_cost(run_qaoa(inst, sched), inst, gamma)
        records = [ProbeRecord(t, expectation(apply_mixer(psi, t), inst), "exact")
                   for t in probe_angles(with_fields)]
        by_fit = fit_trig(records, has_fields=with_fields)
        grid = np.linspace(0, math.pi, 64)
        gap = np.max(np.abs(model_eval(by_obs, grid) - model_eval(by_fit, grid)))
        assert gap < 1e-9


def test_model_from_observables_matches_direct_construction(rng):
    inst = random_instance(rng, 4, with_fields=True)
    psi = apply_cost(run_qaoa(inst, Schedule()), inst, 0.45)
    obs = pauli_expectations(psi, inst)
    model = model_from_observables(obs)
    # the five coefficients reproduce c^2 zz + s^2 yy + cs zy + c z + s y
    for t in np.linspace(0, math.pi, 33):
        c, s = math.cos(2 * t), math.sin(2 * t)
        want = (c * c * obs.zz + s * s * obs.yy + c * s * obs.zy
                + c * obs.z + s * obs.y)
        assert model_eval(model, t) == pytest.approx(want, abs=1e-12)


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def test_run_levelwise_monotone_exact(rng):
    for with_fields in (False, True):
        inst = random_instance(rng, 5, with_fields=with_fields)
        cfg = LevelwiseConfig(gamma0=0.3, p_max=8)
        _, report = run_levelwise(inst, cfg)
        j = report.j_trajectory
        assert all(j[k + 1] <= j[k] + 1e-12 for k in range(len(j) - 1))
        assert j[0] <= 0.0 + 1e-12  # J_0 = <+|H|+> = 0


def test_run_levelwise_trial_accounting(rng):
    for with_fields, per_level in ((False, 3), (True, 5)):
        inst = random_instance(rng, 4, with_fields=with_fields)
        for p in (1, 4, 7):
            cfg = LevelwiseConfig(gamma0=0.25, p_max=p)
            _, report = run_levelwise(inst, cfg)
            assert report.trial_count == per_level * p
            assert report.probes_per_level == per_level
            cfg_sampled = LevelwiseConfig(gamma0=0.25, p_max=p,
                                          final_shots=100)
            _, sampled = run_levelwise(inst, cfg_sampled)
            assert sampled.trial_count == per_level * p + 1


def test_run_levelwise_gamma_zero_is_degenerate(rng):
    inst = random_instance(rng, 4, with_fields=False)
    cfg = LevelwiseConfig(gamma0=0.0, p_max=3)
    sched, report = run_levelwise(inst, cfg)
    assert sched.thetas() == [0.0, 0.0, 0.0]
    assert all(abs(j) < 1e-12 for j in report.j_trajectory)


def test_run_levelwise_schedule_reproduces_trajectory(rng):
    inst = random_instance(rng, 5, with_fields=True)
    cfg = LevelwiseConfig(gamma0=0.4, p_max=5)
    sched, report = run_levelwise(inst, cfg)
    assert sched.objective == report.j_trajectory
    # replaying the schedule reproduces the final energy exactly
    final = expectation(run_qaoa(inst, sched), inst)
    assert final == pytest.approx(report.j_trajectory[-1], abs=1e-12)
    # prefix replay reproduces each intermediate energy
    for depth in (1, 3):
        prefix = Schedule(levels=list(sched.levels[:depth]))
        j = expectation(run_qaoa(inst, prefix), inst)
        assert j == pytest.approx(report.j_trajectory[depth - 1], abs=1e-12)


def test_run_levelwise_report_fields(rng):
    free = random_instance(rng, 4, with_fields=False)
    _, rep_free = run_levelwise(free, LevelwiseConfig(gamma0=0.3, p_max=4))
    assert rep_free.r_trajectory is not None
    assert rep_free.convergence_level is not None
    assert rep_free.ratio_convention in ("sum_weights", "sum_abs_weights")
    assert rep_free.probes_per_level == 3
    assert len(rep_free.steps) == 4
    assert rep_free.steps[0]["trials_so_far"] == 3
    assert 0.0 <= rep_free.ground_state_probability <= 1.0

    fielded = random_instance(rng, 4, with_fields=True)
    _, rep_f = run_levelwise(fielded, LevelwiseConfig(gamma0=0.3, p_max=4))
    assert rep_f.r_trajectory is None
    assert rep_f.convergence_level is None
    assert rep_f.low_energy_probability is not None


def test_level_step_matches_first_driver_level(rng):
    inst = random_instance(rng, 5, with_fields=True)
    cfg = LevelwiseConfig(gamma0=0.35, p_max=1)
    step = level_step(inst, Schedule(), cfg)
    sched, report = run_levelwise(inst, cfg)
    assert step.theta == pytest.approx(sched.thetas()[0], abs=1e-12)
    assert step.objective == pytest.approx(report.j_trajectory[0], abs=1e-9)
    assert step.level == 1
    assert len(step.probes) == 5


def test_level_step_never_worse_than_prior(rng):
    inst = random_instance(rng, 5, with_fields=True)
    prior = Schedule(levels=[LevelParams(0.3, 0.2), LevelParams(0.3, -0.1)])
    j_prior = expectation(run_qaoa(inst, prior), inst)
    step = level_step(inst, prior, LevelwiseConfig(gamma0=0.3, p_max=3))
    assert step.objective <= j_prior + 1e-12


def test_shots_mode_is_deterministic_and_accounted(rng):
    inst = random_instance(rng, 4, with_fields=True)
    cfg = LevelwiseConfig(gamma0=0.3, p_max=3, mode="shots", shots=500, seed=11)
    _, a = run_levelwise(inst, cfg)
    _, b = run_levelwise(inst, cfg)
    assert a.j_trajectory == b.j_trajectory
    assert a.trial_count == 15
    assert a.mode == "shots(M=500)"
    other = LevelwiseConfig(gamma0=0.3, p_max=3, mode="shots", shots=500, seed=12)
    _, c = run_levelwise(inst, other)
    assert c.j_trajectory != a.j_trajectory
    # every probe record carries its own derived seed
    seeds = [tuple(p) for s in a.steps for p in s["probes"]]
    assert len(seeds) == 15


def test_shots_mode_converges_to_exact_angles(rng):
    """With M = 1e6 the first-level angle lands within 0.01 rad of exact."""
    inst = unit_instance(grid_graph(2, 3))
    exact_cfg = LevelwiseConfig(gamma0=0.2, p_max=1)
    exact_sched, _ = run_levelwise(inst, exact_cfg)
    shot_cfg = LevelwiseConfig(gamma0=0.2, p_max=1, mode="shots",
                               shots=1_000_000, seed=5)
    shot_sched, _ = run_levelwise(inst, shot_cfg)
    assert abs(shot_sched.thetas()[0] - exact_sched.thetas()[0]) < 0.01


def test_stop_on_convergence_shortens_run():
    inst = unit_instance(grid_graph(2, 3))
    full = LevelwiseConfig(gamma0=0.2, p_max=60)
    _, rep_full = run_levelwise(inst, full)
    early = LevelwiseConfig(gamma0=0.2, p_max=60, stop_on_convergence=True)
    _, rep_early = run_levelwise(inst, early)
    assert len(rep_early.j_trajectory) < len(rep_full.j_trajectory)
    # and the stop really happened where improvement fell below epsilon
    r = rep_early.r_trajectory
    assert r[-1] - r[-2] < early.epsilon


def test_config_validation():
    with pytest.raises(ValueError):
        LevelwiseConfig(gamma0=0.2, p_max=0)
    with pytest.raises(ValueError):
        LevelwiseConfig(gamma0=0.2, p_max=2, mode="estimate")
    with pytest.raises(ValueError):
        LevelwiseConfig(gamma0=0.2, p_max=2, mode="shots", shots=0)
    with pytest.raises(ValueError):
        LevelwiseConfig(gamma0=[0.2], p_max=2)  # list shorter than p_max
    with pytest.raises(ValueError):
        LevelwiseConfig(gamma0=math.inf, p_max=2)
    cfg = LevelwiseConfig(gamma0=[0.3, 0.1], p_max=2)
    assert cfg.gamma_at(1) == 0.3
    assert cfg.gamma_at(2) == 0.1


def test_gamma_list_drives_levels(rng):
    inst = random_instance(rng, 4, with_fields=False)
    cfg = LevelwiseConfig(gamma0=[0.2, 0.4, 0.1], p_max=3)
    sched, _ = run_levelwise(inst, cfg)
    assert sched.gammas() == [0.2, 0.4, 0.1]
