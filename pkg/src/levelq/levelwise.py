"""Level-wise mixer-angle selection without an outer optimization loop.

For any prior circuit, the energy expectation after one extra cost+mixer
layer is an exact trigonometric function of the final mixer angle theta:

    J(theta) = a4 * sin(4*theta + phi4) + a2 * sin(2*theta + phi2) + offset

where the five coefficients depend on the instance, the cost angle, and all
earlier levels, but not on theta. The second harmonic vanishes for field-free
instances. Each level is therefore fixed by measuring J at five probe angles
(three when field-free), fitting the model exactly, and taking its minimizer;
levels are stacked greedily with a shared cost angle.

Two independent routes to the coefficients are provided: the probe fit
(:func:`fit_trig`, what hardware would do) and direct evaluation of the
underlying Pauli observables (:func:`coefficients_from_observables`, exact
simulation only). They agree to numerical precision.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .ising import IsingInstance, Spectrum, diagonal, normalized_energy
from .instances import mix_seed
from .metrics import (
    CONVERGENCE_EPSILON,
    RunReport,
    approx_ratio,
    convergence_point,
    low_energy_probability,
    resolve_convention,
    edge_weight_total,
)
from .simulator import (
    LevelParams,
    ObservableSet,
    Schedule,
    apply_cost,
    apply_mixer,
    estimate_energy,
    expectation,
    init_plus,
    pauli_expectations,
    run_qaoa,
    sample,
)

PROBE_ANGLES_WITH_FIELDS = tuple(k * math.pi / 6.0 for k in range(1, 6))
PROBE_ANGLES_FIELD_FREE = tuple(k * math.pi / 8.0 for k in range(1, 4))

# Probe values whose spread is below this are treated as a constant profile.
DEGENERATE_SPREAD = 1e-12

FIT_CONDITION_LIMIT = 1e8
DEFAULT_SCAN_POINTS = 4096
DERIVATIVE_TOL = 1e-12


class FitConditionError(RuntimeError):
    """The probe linear system is singular or ill-conditioned."""


def probe_angles(has_fields: bool) -> Tuple[float, ...]:
    """Probe angles for one level: k*pi/6 (k=1..5), or k*pi/8 (k=1..3)
    when the instance is field-free and the profile is pi/2-periodic."""
    return PROBE_ANGLES_WITH_FIELDS if has_fields else PROBE_ANGLES_FIELD_FREE


@dataclass(frozen=True)
class TrigModel:
    """Canonical two-harmonic model of the final-angle energy profile.

    Amplitudes are nonnegative and phases lie in (-pi, pi]; signs are
    absorbed into the phases so two models are comparable by evaluation.
    ``a2 == 0`` identifies the field-free (pi/2-periodic) case.
    """

    a4: float
    phi4: float
    a2: float
    phi2: float
    offset: float

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if not math.isfinite(value):
                raise ValueError(f"non-finite model coefficient {name}={value!r}")
        if self.a4 < 0 or self.a2 < 0:
            raise ValueError("amplitudes must be nonnegative in canonical form")
        for name in ("phi4", "phi2"):
            phase = getattr(self, name)
            if not -math.pi < phase <= math.pi:
                raise ValueError(f"{name}={phase!r} outside (-pi, pi]")

    def period(self) -> float:
        return math.pi / 2.0 if self.a2 == 0.0 else math.pi

    def as_dict(self) -> dict:
        return {"a4": self.a4, "phi4": self.phi4, "a2": self.a2,
                "phi2": self.phi2, "offset": self.offset}


@dataclass(frozen=True)
class ProbeRecord:
    """One energy evaluation at a fixed probe angle."""

    theta: float
    value: float
    mode: str                  # "exact" or "shots"
    seed: Optional[int] = None


def model_eval(model: TrigModel, theta):
    """Evaluate the model; accepts scalars or numpy arrays."""
    t = np.asarray(theta, dtype=np.float64)
    out = (model.a4 * np.sin(4.0 * t + model.phi4)
           + model.a2 * np.sin(2.0 * t + model.phi2)
           + model.offset)
    return float(out) if np.isscalar(theta) or out.ndim == 0 else out


def _canonical_amp_phase(sin_coef: float, cos_coef: float) -> Tuple[float, float]:
    # a*sin(x) + b*cos(x) = A*sin(x + phi) with A = hypot(a, b), phi = atan2(b, a)
    amp = math.hypot(sin_coef, cos_coef)
    if amp == 0.0:
        return 0.0, 0.0
    phase = math.atan2(cos_coef, sin_coef)
    if phase <= -math.pi:
        phase = math.pi
    return amp, phase


def fit_trig(probes: Sequence[ProbeRecord], has_fields: bool) -> TrigModel:
    """Solve the exactly-determined probe system and canonicalize.

    Five probes fit the basis {sin4t, cos4t, sin2t, cos2t, 1}; three probes
    (field-free) fit {sin4t, cos4t, 1}.

    Raises
    ------
    FitConditionError
        If the probe angles make the system singular or ill-conditioned.
    """
    expected = 5 if has_fields else 3
    if len(probes) != expected:
        raise ValueError(f"need exactly {expected} probes, got {len(probes)}")
    thetas = np.array([p.theta for p in probes], dtype=np.float64)
    values = np.array([p.value for p in probes], dtype=np.float64)
    period = math.pi if has_fields else math.pi / 2.0
    folded = np.sort(np.mod(thetas, period))
    if np.any(np.diff(folded) < 1e-12):
        raise FitConditionError(
            f"probe angles {thetas.tolist()} are not distinct modulo {period:g}"
        )
    if has_fields:
        design = np.column_stack([
            np.sin(4.0 * thetas), np.cos(4.0 * thetas),
            np.sin(2.0 * thetas), np.cos(2.0 * thetas),
            np.ones_like(thetas),
        ])
    else:
        design = np.column_stack([
            np.sin(4.0 * thetas), np.cos(4.0 * thetas), np.ones_like(thetas),
        ])
    cond = np.linalg.cond(design)
    if not np.isfinite(cond) or cond > FIT_CONDITION_LIMIT:
        raise FitConditionError(
            f"probe system at angles {thetas.tolist()} is ill-conditioned "
            f"(condition number {cond:.3g})"
        )
    coef = np.linalg.solve(design, values)
    a4, phi4 = _canonical_amp_phase(coef[0], coef[1])
    if has_fields:
        a2, phi2 = _canonical_amp_phase(coef[2], coef[3])
        offset = float(coef[4])
    else:
        a2, phi2 = 0.0, 0.0
        offset = float(coef[2])
    return TrigModel(a4=a4, phi4=phi4, a2=a2, phi2=phi2, offset=offset)


def model_from_observables(obs: ObservableSet) -> TrigModel:
    """Exact coefficients from the Pauli observable sums.

    With c = cos(2t), s = sin(2t) the profile is
    c^2*zz + s^2*yy + c*s*zy + c*z + s*y, whose double-angle expansion gives
    the canonical two-harmonic form.
    """
    a4, phi4 = _canonical_amp_phase(0.5 * obs.zy, 0.5 * (obs.zz - obs.yy))
    a2, phi2 = _canonical_amp_phase(obs.y, obs.z)
    offset = 0.5 * (obs.zz + obs.yy)
    return TrigModel(a4=a4, phi4=phi4, a2=a2, phi2=phi2, offset=offset)


def coefficients_from_observables(inst: IsingInstance, prior: Schedule,
                                  gamma: float) -> TrigModel:
    """Model of the next level's profile, computed without any probing.

    Builds the prior state, applies the cost layer at ``gamma``, and reads the
    coefficients off the Pauli expectations. Exact simulation only.
    """
    psi = run_qaoa(inst, prior)
    apply_cost(psi, inst, gamma, copy=False)
    return model_from_observables(pauli_expectations(psi, inst))


def _derivative(model: TrigModel, t: float) -> float:
    return (4.0 * model.a4 * math.cos(4.0 * t + model.phi4)
            + 2.0 * model.a2 * math.cos(2.0 * t + model.phi2))


def _second_derivative(model: TrigModel, t: float) -> float:
    return (-16.0 * model.a4 * math.sin(4.0 * t + model.phi4)
            - 4.0 * model.a2 * math.sin(2.0 * t + model.phi2))


def _refine_minimum(model: TrigModel, lo: float, hi: float, fallback: float) -> float:
    d_lo = _derivative(model, lo)
    d_hi = _derivative(model, hi)
    if d_lo < 0.0 < d_hi:
        t = float(brentq(lambda x: _derivative(model, x), lo, hi, xtol=1e-15))
    else:
        t = fallback
    # Newton polish toward |dJ/dtheta| <= DERIVATIVE_TOL.
    for _ in range(8):
        d1 = _derivative(model, t)
        if abs(d1) <= DERIVATIVE_TOL:
            break
        d2 = _second_derivative(model, t)
        if d2 <= 0.0:
            break
        step = d1 / d2
        if abs(step) > (hi - lo):
            break
        t -= step
    return t


def argmin_model(model: TrigModel,
                 scan_points: int = DEFAULT_SCAN_POINTS) -> Tuple[float, float]:
    """Global minimizer of the model over theta in [0, pi).

    A constant model returns theta = 0. A pure first-harmonic model
    (``a2 == 0``) has the closed-form minimizer 4*theta + phi4 = 3*pi/2
    (mod 2*pi), mapped into [0, pi/2). Otherwise: dense scan over [0, pi)
    followed by derivative-based refinement; ties go to the smallest theta.
    """
    if model.a4 == 0.0 and model.a2 == 0.0:
        return 0.0, model.offset
    if model.a2 == 0.0:
        theta = ((1.5 * math.pi - model.phi4) % (2.0 * math.pi)) / 4.0
        return theta, model.offset - model.a4
    if scan_points < 8:
        raise ValueError("scan_points too small for a reliable scan")
    ts = np.linspace(0.0, math.pi, scan_points, endpoint=False)
    vals = model_eval(model, ts)
    # The profile has period pi here, so neighbors wrap around cyclically.
    local_min = (vals <= np.roll(vals, 1)) & (vals <= np.roll(vals, -1))
    step = math.pi / scan_points
    best_theta, best_val = None, None
    for k in np.flatnonzero(local_min):
        t0 = float(ts[k])
        t = _refine_minimum(model, t0 - step, t0 + step, t0)
        t %= math.pi
        v = model_eval(model, t)
        if best_val is None or v < best_val or (v == best_val and t < best_theta):
            best_theta, best_val = t, v
    return float(best_theta), float(best_val)


@dataclass(frozen=True)
class LevelwiseConfig:
    """Driver settings for one level-wise run.

    ``gamma0`` is the shared cost angle; a per-level sequence (length at
    least ``p_max``) is accepted for forward compatibility but no selection
    logic is provided. In ``shots`` mode every probe (and the optional final
    sampling run) draws ``shots`` fresh measurements under a seed derived
    from ``seed``, the level, and the probe index.
    """

    gamma0: Union[float, Sequence[float]]
    p_max: int
    mode: str = "exact"
    shots: int = 1000
    seed: int = 0
    epsilon: float = CONVERGENCE_EPSILON
    stop_on_convergence: bool = False
    final_shots: Optional[int] = None
    scan_points: int = DEFAULT_SCAN_POINTS

    def __post_init__(self) -> None:
        if self.p_max < 1:
            raise ValueError("p_max must be >= 1")
        if self.mode not in ("exact", "shots"):
            raise ValueError(f"mode must be 'exact' or 'shots', got {self.mode!r}")
        if self.mode == "shots" and self.shots < 1:
            raise ValueError("shots must be >= 1 in shots mode")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.final_shots is not None and self.final_shots < 1:
            raise ValueError("final_shots must be >= 1 when set")
        gamma = self.gamma0
        if isinstance(gamma, (int, float)):
            gammas = (float(gamma),) * self.p_max
        else:
            gammas = tuple(float(g) for g in gamma)
            if len(gammas) < self.p_max:
                raise ValueError(
                    f"gamma list has {len(gammas)} entries but p_max={self.p_max}"
                )
        if not all(math.isfinite(g) for g in gammas):
            raise ValueError("cost angles must be finite")
        object.__setattr__(self, "gamma0", gammas if not
                           isinstance(self.gamma0, (int, float)) else float(gamma))
        object.__setattr__(self, "_gammas", gammas)

    def gamma_at(self, level: int) -> float:
        return self._gammas[level - 1]

    def describe_mode(self) -> str:
        return "exact" if self.mode == "exact" else f"shots(M={self.shots})"


@dataclass(frozen=True)
class StepResult:
    """Outcome of probing one level: the chosen angle and its evidence."""

    level: int
    gamma: float
    theta: float
    objective: float           # model value at theta (exact J in exact mode)
    model: TrigModel
    probes: Tuple[ProbeRecord, ...]

    def record(self, trials_so_far: int) -> dict:
        return {
            "level": self.level,
            "gamma": self.gamma,
            "probes": [[p.theta, p.value] for p in self.probes],
            "model": self.model.as_dict(),
            "theta": self.theta,
            "objective": self.objective,
            "trials_so_far": trials_so_far,
        }


def _probe_stream(level: int, k: int) -> int:
    # Probe k of a level gets stream (level << 3) | k; k <= 4, so | 7 is free
    # for the final sampling run.
    return (level << 3) | k


def _step_on_state(spectrum: Spectrum, has_fields: bool, psi_prior: np.ndarray,
                   cfg: LevelwiseConfig, level: int) -> StepResult:
    gamma = cfg.gamma_at(level)
    phi = apply_cost(psi_prior, spectrum, gamma, copy=True)
    records: List[ProbeRecord] = []
    for k, theta_x in enumerate(probe_angles(has_fields)):
        probed = apply_mixer(phi, theta_x, copy=True)
        if cfg.mode == "exact":
            value = expectation(probed, spectrum)
            records.append(ProbeRecord(theta_x, value, "exact"))
        else:
            seed = mix_seed(cfg.seed, _probe_stream(level, k))
            shot_set = sample(probed, cfg.shots, seed)
            value = estimate_energy(shot_set, spectrum)
            records.append(ProbeRecord(theta_x, value, "shots", seed))
    values = [r.value for r in records]
    if max(values) - min(values) < DEGENERATE_SPREAD:
        # Constant profile: keep the prior state exactly.
        mean = float(np.mean(values))
        model = TrigModel(0.0, 0.0, 0.0, 0.0, mean)
        theta, objective = 0.0, mean
    else:
        model = fit_trig(records, has_fields)
        theta, objective = argmin_model(model, cfg.scan_points)
    return StepResult(level=level, gamma=gamma, theta=theta,
                      objective=objective, model=model, probes=tuple(records))


def level_step(inst: IsingInstance, prior: Schedule,
               cfg: LevelwiseConfig) -> StepResult:
    """Probe, fit, and minimize one extra level on top of ``prior``.

    The prior state is rebuilt from its schedule; use :func:`run_levelwise`
    for the full incremental loop.
    """
    spectrum = diagonal(inst)
    psi_prior = run_qaoa(inst, prior)
    return _step_on_state(spectrum, inst.has_fields(), psi_prior, cfg,
                          level=prior.depth + 1)


def _progress_metric(inst: IsingInstance, spectrum: Spectrum,
                     convention: Optional[str]):
    """Rising per-level progress value used by the optional stopping rule:
    the approximation ratio when field-free, else 1 - normalized energy."""
    if not inst.has_fields() and convention is not None:
        return lambda j: approx_ratio(inst, j, spectrum.e_min, convention)
    if spectrum.e_max > spectrum.e_min:
        return lambda j: 1.0 - normalized_energy(spectrum, j)
    return None


def run_levelwise(inst: IsingInstance,
                  cfg: LevelwiseConfig) -> Tuple[Schedule, RunReport]:
    """Stack levels greedily: probe, fit, minimize, append, repeat.

    Returns the chosen schedule (with its energy trajectory) and a full
    :class:`~levelq.metrics.RunReport`. The reported final-state metrics are
    computed on a state re-prepared from the recorded schedule, so the report
    is reproducible from its own data.
    """
    t_start = time.perf_counter()
    spectrum = diagonal(inst)
    has_fields = inst.has_fields()
    n_probes = len(probe_angles(has_fields))

    convention: Optional[str] = None
    if not has_fields:
        conv = resolve_convention(inst, "auto")
        if edge_weight_total(inst, conv) - spectrum.e_min > 0:
            convention = conv

    progress = _progress_metric(inst, spectrum, convention)

    psi = init_plus(inst.n)
    schedule = Schedule()
    j_traj: List[float] = []
    steps: List[dict] = []
    trial_count = 0
    prev_progress: Optional[float] = None

    for level in range(1, cfg.p_max + 1):
        step = _step_on_state(spectrum, has_fields, psi, cfg, level)
        trial_count += n_probes
        apply_cost(psi, spectrum, step.gamma, copy=False)
        apply_mixer(psi, step.theta, copy=False)
        j_level = expectation(psi, spectrum) if cfg.mode == "exact" else step.objective
        schedule.levels.append(LevelParams(step.gamma, step.theta))
        j_traj.append(j_level)
        steps.append(step.record(trials_so_far=trial_count))
        if cfg.stop_on_convergence and progress is not None:
            cur = progress(j_level)
            if prev_progress is not None and cur - prev_progress < cfg.epsilon:
                break
            prev_progress = cur

    schedule.objective = list(j_traj)

    # Final state re-prepared from the recorded schedule.
    final_psi = run_qaoa(inst, schedule)
    probs = np.abs(final_psi) ** 2
    ground_prob = float(probs[spectrum.energies == spectrum.e_min].sum())

    r_traj: Optional[List[float]] = None
    conv_level: Optional[int] = None
    conv_ratio: Optional[float] = None
    if convention is not None:
        r_traj = [approx_ratio(inst, j, spectrum.e_min, convention) for j in j_traj]
        conv_level, conv_ratio = convergence_point(r_traj, cfg.epsilon)

    low_energy: Optional[float] = None
    if spectrum.e_max > spectrum.e_min:
        low_energy = low_energy_probability(final_psi, spectrum)

    final_sample_info = None
    if cfg.final_shots is not None:
        seed = mix_seed(cfg.seed, _probe_stream(schedule.depth + 1, 7))
        shot_set = sample(final_psi, cfg.final_shots, seed)
        trial_count += 1
        gs_hits = sum(c for k, c in shot_set.counts.items()
                      if spectrum.energies[k] == spectrum.e_min)
        info = {
            "shots": cfg.final_shots,
            "seed": seed,
            "ground_state_frequency": gs_hits / cfg.final_shots,
        }
        if spectrum.e_max > spectrum.e_min:
            lo_hits = sum(
                c for k, c in shot_set.counts.items()
                if normalized_energy(spectrum, spectrum.energies[k]) < 0.1
            )
            info["low_energy_frequency"] = lo_hits / cfg.final_shots
        final_sample_info = info

    report = RunReport(
        label=inst.label,
        n=inst.n,
        mode=cfg.describe_mode(),
        gammas=schedule.gammas(),
        thetas=schedule.thetas(),
        j_trajectory=list(j_traj),
        r_trajectory=r_traj,
        ratio_convention=convention,
        convergence_level=conv_level,
        convergence_ratio=conv_ratio,
        low_energy_probability=low_energy,
        ground_state_probability=ground_prob,
        trial_count=trial_count,
        probes_per_level=n_probes,
        final_sample=final_sample_info,
        wall_clock_s=time.perf_counter() - t_start,
        steps=steps,
    )
    return schedule, report
