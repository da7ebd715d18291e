"""Benchmark metrics and the analytic device-time cost model.

Covers the MaxCut approximation ratio (with the absolute-weight variant
needed for negative-weight graphs), trajectory convergence detection,
low-energy sampling probability, and a closed-form time-to-solution model
for comparing the level-wise quantum procedure against an exponential-time
classical baseline.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .ising import IsingInstance, Spectrum

# Reference approximation-ratio landmarks for MaxCut (classical lower bounds
# and NP-hardness thresholds; generic graphs and the 3-regular restriction).
GW_RATIO = 0.8786
GW_RATIO_CUBIC = 0.9326
HARDNESS_RATIO_GENERIC = 16.0 / 17.0
HARDNESS_RATIO_CUBIC = 331.0 / 332.0

SUM_WEIGHTS = "sum_weights"
SUM_ABS_WEIGHTS = "sum_abs_weights"

CONVERGENCE_EPSILON = 5.0 / 1000.0
LOW_ENERGY_THRESHOLD = 0.1

# Classical MaxCut solver runtime model: seconds = PREFACTOR * exp(RATE * n).
CLASSICAL_TTS_PREFACTOR = 1e-5
CLASSICAL_TTS_RATE = 0.04029

REPORT_FORMAT = "run-report/1"


def edge_weight_total(inst: IsingInstance, convention: str) -> float:
    """Total edge weight W under the given convention (fields excluded)."""
    if convention == SUM_WEIGHTS:
        return float(sum(w for _, _, w in inst.couplings))
    if convention == SUM_ABS_WEIGHTS:
        return float(sum(abs(w) for _, _, w in inst.couplings))
    raise ValueError(f"unknown ratio convention {convention!r}")


def resolve_convention(inst: IsingInstance, convention: str = "auto") -> str:
    """Pick/validate the W convention for an instance.

    ``auto`` selects plain summation for nonnegative weights and the
    absolute-value sum otherwise. Plain summation with negative weights is
    rejected: it can make the denominator vanish or flip sign.
    """
    has_negative = any(w < 0 for _, _, w in inst.couplings)
    if convention == "auto":
        return SUM_ABS_WEIGHTS if has_negative else SUM_WEIGHTS
    if convention == SUM_WEIGHTS and has_negative:
        raise ValueError(
            "sum_weights convention is invalid for negative-weight instances; "
            "use sum_abs_weights"
        )
    if convention not in (SUM_WEIGHTS, SUM_ABS_WEIGHTS):
        raise ValueError(f"unknown ratio convention {convention!r}")
    return convention


def approx_ratio(inst: IsingInstance, j: float, e_min: float,
                 convention: str = "auto") -> float:
    """Approximation ratio r = (W - J) / (W - e_min).

    ``r == 1`` at the optimum and ``0.5`` for the uniform superposition on an
    unweighted graph. ``convention`` chooses how W counts edge weights; see
    :func:`resolve_convention`.
    """
    convention = resolve_convention(inst, convention)
    w_total = edge_weight_total(inst, convention)
    denom = w_total - e_min
    if denom <= 0:
        raise ValueError(f"ratio denominator W - e_min = {denom:g} is not positive")
    return (w_total - j) / denom


def convergence_point(r_traj: Sequence[float],
                      eps: float = CONVERGENCE_EPSILON) -> Tuple[int, float]:
    """First level whose successor improves by less than ``eps``.

    ``r_traj[l-1]`` is the metric after level ``l``. Returns the 1-based level
    ``p_c`` and its value; if every step improves by ``eps`` or more, returns
    the last level.
    """
    if len(r_traj) == 0:
        raise ValueError("empty trajectory")
    if not eps > 0:
        raise ValueError("eps must be positive")
    for l in range(len(r_traj) - 1):
        if r_traj[l + 1] - r_traj[l] < eps:
            return l + 1, float(r_traj[l])
    return len(r_traj), float(r_traj[-1])


def low_energy_probability(psi: np.ndarray, spec: Spectrum,
                           threshold: float = LOW_ENERGY_THRESHOLD) -> float:
    """Probability mass on states with normalized energy below ``threshold``."""
    if spec.e_max == spec.e_min:
        raise ValueError("spectrum is degenerate: normalized energy undefined")
    u = (spec.energies - spec.e_min) / (spec.e_max - spec.e_min)
    probs = np.abs(np.asarray(psi)) ** 2
    if probs.shape != spec.energies.shape:
        raise ValueError("state and spectrum dimensions differ")
    return float(probs[u < threshold].sum())


@dataclass(frozen=True)
class BoxStats:
    """Box-plot summary: quartiles plus 1.5-IQR whiskers clamped to data."""

    count: int
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float


def box_stats(values: Sequence[float]) -> BoxStats:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("no values to summarize")
    q1, med, q3 = np.percentile(arr, [25.0, 50.0, 75.0])
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    whisker_low = float(arr[arr >= lo_fence].min())
    whisker_high = float(arr[arr <= hi_fence].max())
    return BoxStats(int(arr.size), float(med), float(q1), float(q3),
                    whisker_low, whisker_high)


# ---------------------------------------------------------------------------
# time-to-solution model
# ---------------------------------------------------------------------------

SCALING_LAWS = ("quadratic", "linear", "log")

# Calibration anchor shared by all three p(N) laws.
_ANCHOR_N = 20
_ANCHOR_P = 30


@dataclass(frozen=True)
class TtsParams:
    """Assumptions of the device-time model.

    ``tau`` is the two-qubit gate time; a single ansatz level on a complete
    graph needs N concurrent gate layers, so one level costs ``t_0 = N*tau``.
    ``shots`` is the number of circuit repetitions per energy estimate.
    ``scaling`` picks the p(N) growth law; ``alpha`` is its constant,
    calibrated (when left None) so that p(20) = 30.
    """

    tau: float = 500e-9
    shots: int = 1000
    scaling: str = "log"
    alpha: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.scaling not in SCALING_LAWS:
            raise ValueError(f"scaling must be one of {SCALING_LAWS}")
        if self.alpha is not None and not self.alpha > 0:
            raise ValueError("alpha must be positive")

    def resolved_alpha(self) -> float:
        if self.alpha is not None:
            return self.alpha
        if self.scaling == "quadratic":
            return _ANCHOR_P / _ANCHOR_N**2
        if self.scaling == "linear":
            return _ANCHOR_P / _ANCHOR_N
        return _ANCHOR_P / math.log(_ANCHOR_N)


def layer_time(n: int, params: TtsParams) -> float:
    """Seconds to run one ansatz level on an n-vertex complete-graph problem."""
    if n < 1:
        raise ValueError("need n >= 1")
    return n * params.tau


def _soft_ceil(x: float, tol: float = 1e-9) -> int:
    # Guards the calibrated alphas: alpha*N at the anchor must give exactly
    # the anchor p despite binary rounding of alpha.
    nearest = round(x)
    if abs(x - nearest) <= tol * max(1.0, abs(x)):
        return int(nearest)
    return int(math.ceil(x))


def p_scaling(n: int, params: TtsParams) -> int:
    """Ansatz depth p(N) under the chosen growth law."""
    if n < 1:
        raise ValueError("need n >= 1")
    alpha = params.resolved_alpha()
    if params.scaling == "quadratic":
        return _soft_ceil(alpha * n * n)
    if params.scaling == "linear":
        return _soft_ceil(alpha * n)
    return _soft_ceil(alpha * math.log(n))


def tts_quantum(p: int, n: int, params: TtsParams = TtsParams()) -> float:
    """Total device seconds for the level-wise procedure at depth p.

    Level l costs 5 probe trials of an l-level circuit plus one final
    sampling run at full depth: [5 p (p+1) / 2 + p] * shots * t_0.
    """
    if p < 1 or n < 1:
        raise ValueError("need p >= 1 and n >= 1")
    t0 = layer_time(n, params)
    trials_weighted = 5 * p * (p + 1) / 2 + p
    return trials_weighted * params.shots * t0


def tts_classical(n: int) -> float:
    """Modeled classical solver runtime in seconds (exponential in n)."""
    if n < 1:
        raise ValueError("need n >= 1")
    return CLASSICAL_TTS_PREFACTOR * math.exp(CLASSICAL_TTS_RATE * n)


def crossover(params: TtsParams, sizes: Sequence[int]) -> Optional[int]:
    """Smallest problem size in ``sizes`` where the quantum model wins.

    Returns None when the quantum time never drops below the classical time
    on the given sizes.
    """
    ordered = sorted(int(n) for n in sizes)
    if not ordered:
        raise ValueError("empty size range")
    for n in ordered:
        if tts_quantum(p_scaling(n, params), n, params) < tts_classical(n):
            return n
    return None


# ---------------------------------------------------------------------------
# run reports
# ---------------------------------------------------------------------------

@dataclass
class RunReport:
    """Everything observable about one level-wise run, JSON-serializable.

    ``r_trajectory`` is populated for field-free (MaxCut-style) runs only;
    ``steps`` holds the per-level probe/fit records emitted by the driver.
    """

    label: str
    n: int
    mode: str
    gammas: List[float]
    thetas: List[float]
    j_trajectory: List[float]
    r_trajectory: Optional[List[float]] = None
    ratio_convention: Optional[str] = None
    convergence_level: Optional[int] = None
    convergence_ratio: Optional[float] = None
    low_energy_probability: Optional[float] = None
    ground_state_probability: Optional[float] = None
    trial_count: int = 0
    probes_per_level: int = 0
    final_sample: Optional[Dict[str, float]] = None
    wall_clock_s: float = 0.0
    steps: List[dict] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {"format": REPORT_FORMAT}
        payload.update(self.__dict__)
        return json.dumps(payload, indent=2) + "\n"


def report_from_json(text: str) -> RunReport:
    payload = json.loads(text)
    fmt = payload.pop("format", REPORT_FORMAT)
    if fmt != REPORT_FORMAT:
        raise ValueError(f"unsupported report format {fmt!r}")
    # Ignore sidecar keys (job provenance etc.) added by batch tooling.
    names = {f.name for f in fields(RunReport)}
    return RunReport(**{k: v for k, v in payload.items() if k in names})


LEVEL_CSV_COLUMNS = ("level", "J", "r", "trials", "cumulative_time_model")


def level_rows(report: RunReport,
               tts: TtsParams = TtsParams()) -> List[Tuple[object, ...]]:
    """Per-level table in the fixed column order of LEVEL_CSV_COLUMNS.

    ``trials`` counts probe evaluations through each level;
    ``cumulative_time_model`` prices them on hardware via the TTS model
    (probe trials only; shots and gate time from ``tts``).
    """
    t0 = layer_time(report.n, tts)
    rows: List[Tuple[object, ...]] = []
    for idx, j in enumerate(report.j_trajectory):
        level = idx + 1
        r = report.r_trajectory[idx] if report.r_trajectory is not None else ""
        trials = report.probes_per_level * level
        cum_time = report.probes_per_level * tts.shots * t0 * level * (level + 1) / 2
        rows.append((level, j, r, trials, cum_time))
    return rows
