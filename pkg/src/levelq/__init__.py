"""Level-wise QAOA parameter setting for Ising/QUBO problems.

The package builds QAOA schedules one level at a time: the energy profile of
each new mixer angle is an exact low-order trigonometric function, so a
handful of probe evaluations per level replaces the usual outer optimization
loop. An exact statevector simulator, instance generators, benchmark metrics,
and a time-to-solution model round out the toolkit; the ``levelq`` console
script exposes batch front-ends for all of it.
"""

from .ising import (
    BRUTE_FORCE_CAP,
    IsingInstance,
    ResourceLimitError,
    Spectrum,
    bits_of_index,
    diagonal,
    energy,
    from_couplings,
    from_json,
    ground_state,
    index_of_bits,
    normalize,
    normalized_energy,
    to_json,
)
from .instances import (
    Graph,
    ParseError,
    WeightDistribution,
    assign_weights,
    encode_graph6,
    gen_regular,
    gen_sk,
    grid_graph,
    mix_seed,
    parse_edge_list,
    parse_graph6,
    parse_graph6_file,
    unit_instance,
)
from .simulator import (
    STATE_QUBIT_CAP,
    LevelParams,
    ObservableSet,
    Schedule,
    ShotSet,
    apply_cost,
    apply_mixer,
    estimate_energy,
    expectation,
    init_plus,
    load_state,
    pauli_expectations,
    run_qaoa,
    sample,
    save_state,
)
from .levelwise import (
    FitConditionError,
    LevelwiseConfig,
    ProbeRecord,
    StepResult,
    TrigModel,
    argmin_model,
    coefficients_from_observables,
    fit_trig,
    level_step,
    model_eval,
    model_from_observables,
    probe_angles,
    run_levelwise,
)
from .metrics import (
    CONVERGENCE_EPSILON,
    GW_RATIO,
    GW_RATIO_CUBIC,
    BoxStats,
    RunReport,
    TtsParams,
    approx_ratio,
    box_stats,
    convergence_point,
    crossover,
    edge_weight_total,
    level_rows,
    low_energy_probability,
    p_scaling,
    report_from_json,
    resolve_convention,
    tts_classical,
    tts_quantum,
)

__version__ = "0.1.0"

__all__ = [
    "BRUTE_FORCE_CAP",
    "BoxStats",
    "CONVERGENCE_EPSILON",
    "FitConditionError",
    "GW_RATIO",
    "GW_RATIO_CUBIC",
    "Graph",
    "IsingInstance",
    "LevelParams",
    "LevelwiseConfig",
    "ObservableSet",
    "ParseError",
    "ProbeRecord",
    "ResourceLimitError",
    "RunReport",
    "STATE_QUBIT_CAP",
    "Schedule",
    "ShotSet",
    "Spectrum",
    "StepResult",
    "TrigModel",
    "TtsParams",
    "WeightDistribution",
    "apply_cost",
    "apply_mixer",
    "approx_ratio",
    "argmin_model",
    "assign_weights",
    "bits_of_index",
    "box_stats",
    "coefficients_from_observables",
    "convergence_point",
    "crossover",
    "diagonal",
    "edge_weight_total",
    "encode_graph6",
    "energy",
    "estimate_energy",
    "expectation",
    "fit_trig",
    "from_couplings",
    "from_json",
    "gen_regular",
    "gen_sk",
    "grid_graph",
    "ground_state",
    "index_of_bits",
    "init_plus",
    "level_rows",
    "level_step",
    "load_state",
    "low_energy_probability",
    "mix_seed",
    "model_eval",
    "model_from_observables",
    "normalize",
    "normalized_energy",
    "p_scaling",
    "parse_edge_list",
    "parse_graph6",
    "parse_graph6_file",
    "pauli_expectations",
    "probe_angles",
    "report_from_json",
    "resolve_convention",
    "run_levelwise",
    "run_qaoa",
    "sample",
    "save_state",
    "to_json",
    "tts_classical",
    "tts_quantum",
    "unit_instance",
]
