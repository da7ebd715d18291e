"""Batch front-end: generate instances, run the level-wise driver on them,
sweep replica families, and tabulate the time-to-solution model.

Subcommands: ``gen``, ``run``, ``sweep``, ``tts``. Every option can come from
a JSON or TOML config file (``--config``); explicit flags override file
values. Each output file embeds the fully resolved job config and a format
tag; re-running a command with the same config reproduces CSV bodies byte for
byte (the single ``# generated:`` header line is the only timestamp).

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from statistics import fmean
from typing import Dict, List, Optional, Sequence, Tuple, Union

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .ising import IsingInstance, from_json, normalize, to_json
from .instances import (
    WeightDistribution,
    assign_weights,
    gen_regular,
    gen_sk,
    grid_graph,
    mix_seed,
    parse_edge_list,
    parse_graph6_file,
    unit_instance,
)
from .levelwise import LevelwiseConfig, run_levelwise
from .metrics import (
    LEVEL_CSV_COLUMNS,
    SCALING_LAWS,
    TtsParams,
    box_stats,
    crossover,
    level_rows,
    p_scaling,
    tts_classical,
    tts_quantum,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

GEN_FORMAT = "levelq/gen/1"
RUN_LEVELS_FORMAT = "levelq/run-levels/1"
SWEEP_REPLICAS_FORMAT = "levelq/sweep-replicas/1"
SWEEP_AGGREGATE_FORMAT = "levelq/sweep-aggregate/1"
SWEEP_SUMMARY_FORMAT = "levelq/sweep-summary/1"
TTS_FORMAT = "levelq/tts/1"

# Per-replica seed streams; replica k owns counters 4k .. 4k+3.
_STREAM_GRAPH = 0
_STREAM_WEIGHTS = 1
_STREAM_RUN = 2


class UsageError(ValueError):
    """Bad arguments or unusable input; maps to exit code 2."""


@dataclass(frozen=True)
class JobConfig:
    """Fully resolved options of one invocation, embedded in every output."""

    command: str
    params: Tuple[Tuple[str, object], ...]

    def as_dict(self) -> Dict[str, object]:
        return {"command": self.command, **dict(self.params)}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, default=str)


class _Options:
    """Flag-over-file-over-default resolution with a resolved-value record."""

    def __init__(self, args: argparse.Namespace):
        self._flags = vars(args)
        path = self._flags.get("config")
        self._file = _load_config_file(path) if path else {}
        self.resolved: Dict[str, object] = {}

    def get(self, key: str, default=None, required: bool = False, cast=None):
        value = self._flags.get(key)
        if value is None:
            value = self._file.get(key, default)
        if value is None:
            if required:
                raise UsageError(f"missing required option --{key.replace('_', '-')}")
            self.resolved[key] = None
            return None
        if cast is not None:
            value = cast(value)
        self.resolved[key] = value
        return value

    def job(self, command: str) -> JobConfig:
        items = tuple(sorted((k, v) for k, v in self.resolved.items()
                             if v is not None))
        return JobConfig(command, items)


def _load_config_file(path: str) -> Dict[str, object]:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"config file not found: {path}")
    raw = p.read_bytes()
    suffix = p.suffix.lower()
    try:
        if suffix == ".toml":
            data = tomllib.loads(raw.decode("utf-8"))
        elif suffix == ".json":
            data = json.loads(raw)
        else:
            try:
                data = json.loads(raw)
            except json.JSONDecodeError:
                data = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot parse config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a table/object at top level")
    return data


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _cell(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _write_csv(path: Path, fmt: str, job: JobConfig, columns: Sequence[str],
               rows: Sequence[Sequence[object]],
               extra_header: Sequence[str] = ()) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# format: {fmt}\n")
        fh.write(f"# generated: {_now()}\n")
        fh.write(f"# config: {job.to_json()}\n")
        for line in extra_header:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _write_json(path: Path, payload: Dict[str, object]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, default=str) + "\n",
                    encoding="utf-8")


def _parse_int_range(text: str) -> List[int]:
    try:
        lo, hi, step = (int(part) for part in str(text).split(":"))
    except ValueError as exc:
        raise UsageError(f"range must be MIN:MAX:STEP, got {text!r}") from exc
    if step <= 0:
        raise UsageError("range step must be positive")
    return list(range(lo, hi + 1, step))


def _parse_float_grid(text: str) -> List[float]:
    try:
        lo, hi, step = (float(part) for part in str(text).split(":"))
    except ValueError as exc:
        raise UsageError(f"grid must be MIN:MAX:STEP, got {text!r}") from exc
    if step <= 0 or hi < lo:
        raise UsageError("grid needs MAX >= MIN and a positive STEP")
    count = int(round((hi - lo) / step))
    return [round(lo + k * step, 10) for k in range(count + 1)]


def _parse_gammas(value) -> Union[float, Tuple[float, ...]]:
    # Accepts a number, a list (config file), or "0.2,0.3,..." (flag).
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, (list, tuple)):
        return tuple(float(v) for v in value)
    parts = [p for p in str(value).split(",") if p.strip()]
    try:
        values = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"cannot parse cost angles from {value!r}") from exc
    if not values:
        raise UsageError("empty cost-angle list")
    return values[0] if len(values) == 1 else values


_DISTRIBUTIONS = {
    "unit": WeightDistribution.unit,
    "pm1": WeightDistribution.plus_minus_one,
    "poisson": WeightDistribution.poisson,
    "normal": WeightDistribution.normal,
}


def _distribution(name: str) -> WeightDistribution:
    try:
        return _DISTRIBUTIONS[str(name)]()
    except KeyError:
        raise UsageError(
            f"unknown weight distribution {name!r}; pick one of "
            f"{', '.join(sorted(_DISTRIBUTIONS))}"
        ) from None


def _weighted_replica(n: int, d: int, dist: WeightDistribution, seed: int,
                      replica: int) -> IsingInstance:
    g = gen_regular(n, d, mix_seed(seed, 4 * replica + _STREAM_GRAPH))
    # Weights are rescaled by the largest magnitude; the all-zero draw (possible
    # for the Poisson distribution) is redrawn from a fresh stream.
    for attempt in range(100):
        k = 4 * replica + _STREAM_WEIGHTS + (attempt << 32)
        inst = assign_weights(g, dist, mix_seed(seed, k))
        if any(w != 0.0 for _, _, w in inst.couplings):
            return normalize(inst)
    raise RuntimeError("weight distribution produced only zero weights")


def _gen_family(family: str, *, n: Optional[int], d: int, dist_name: str,
                h0: float, rows: Optional[int], cols: Optional[int],
                input_path: Optional[str], replicas: int,
                seed: int) -> List[IsingInstance]:
    if family == "grid":
        if rows is None or cols is None:
            raise UsageError("grid family needs --rows and --cols")
        g = grid_graph(rows, cols)
        return [unit_instance(g, label=f"grid({rows}x{cols})")]
    if family == "graph6-file":
        if input_path is None:
            raise UsageError("graph6-file family needs --input FILE")
        p = Path(input_path)
        if not p.is_file():
            raise UsageError(f"graph6 file not found: {input_path}")
        graphs = parse_graph6_file(p.read_text(encoding="utf-8"))
        return [unit_instance(g, label=f"{p.stem}#{k}")
                for k, g in enumerate(graphs)]
    if replicas < 1:
        raise UsageError("need --replicas >= 1")
    if n is None:
        raise UsageError(f"{family} family needs --n")
    out: List[IsingInstance] = []
    if family == "u3r":
        for k in range(replicas):
            g = gen_regular(n, 3, mix_seed(seed, 4 * k + _STREAM_GRAPH))
            out.append(unit_instance(g, label=f"u3r(n={n},seed={seed},replica={k})"))
    elif family == "wdr":
        dist = _distribution(dist_name)
        for k in range(replicas):
            out.append(_weighted_replica(n, d, dist, seed, k))
    elif family == "sk":
        for k in range(replicas):
            out.append(gen_sk(n, h0, mix_seed(seed, 4 * k + _STREAM_GRAPH)))
    else:
        raise UsageError(
            f"unknown family {family!r}; pick u3r, wdr, sk, grid, or graph6-file"
        )
    return out


def _load_instance(path: str) -> IsingInstance:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"instance file not found: {path}")
    text = p.read_text(encoding="utf-8")
    suffix = p.suffix.lower()
    if suffix == ".json":
        return from_json(text)
    if suffix in (".g6", ".graph6"):
        graphs = parse_graph6_file(text)
        if len(graphs) != 1:
            raise UsageError(
                f"{path} holds {len(graphs)} graphs; run expects exactly one "
                f"(use gen --family graph6-file to split it)"
            )
        return unit_instance(graphs[0], label=p.stem)
    return parse_edge_list(text)


def _levelwise_kwargs(opts: _Options, *, seed: int) -> Dict[str, object]:
    gamma0 = opts.get("gamma0", required=True, cast=_parse_gammas)
    kwargs: Dict[str, object] = {
        "gamma0": gamma0,
        "p_max": opts.get("p_max", required=True, cast=int),
        "mode": opts.get("mode", default="exact", cast=str),
        "shots": opts.get("shots", default=1000, cast=int),
        "seed": seed,
    }
    epsilon = opts.get("epsilon", cast=float)
    if epsilon is not None:
        kwargs["epsilon"] = epsilon
    stop = opts.get("stop_on_convergence")
    if stop is not None:
        kwargs["stop_on_convergence"] = bool(stop)
    final_shots = opts.get("final_shots", cast=int)
    if final_shots is not None:
        kwargs["final_shots"] = final_shots
    return kwargs


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

def cmd_gen(args: argparse.Namespace) -> int:
    opts = _Options(args)
    family = opts.get("family", required=True, cast=str)
    n = opts.get("n", cast=int)
    d = opts.get("d", default=3, cast=int)
    dist_name = opts.get("dist", default="poisson", cast=str)
    h0 = opts.get("h0", default=0.0, cast=float)
    rows = opts.get("rows", cast=int)
    cols = opts.get("cols", cast=int)
    input_path = opts.get("input")
    replicas = opts.get("replicas", default=1, cast=int)
    seed = opts.get("seed", default=0, cast=int)
    out_dir = Path(opts.get("out", default=".", cast=str))

    try:
        instances = _gen_family(
            family, n=n, d=d, dist_name=dist_name, h0=h0, rows=rows,
            cols=cols, input_path=input_path, replicas=replicas, seed=seed,
        )
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    job = opts.job("gen")
    out_dir.mkdir(parents=True, exist_ok=True)
    written: List[str] = []
    for k, inst in enumerate(instances):
        if family == "grid":
            name = f"grid_{rows}x{cols}.json"
        elif family == "sk":
            name = f"sk_n{n}_h{h0:g}_r{k:03d}.json"
        elif family == "graph6-file":
            name = f"{Path(input_path).stem}_r{k:03d}.json"
        else:
            name = f"{family}_n{n}_r{k:03d}.json"
        payload = json.loads(to_json(inst))
        payload["job"] = job.as_dict()
        path = out_dir / name
        _write_json(path, payload)
        written.append(str(path))
    manifest = {
        "format": GEN_FORMAT,
        "generated": _now(),
        "job": job.as_dict(),
        "files": written,
    }
    _write_json(out_dir / "gen_manifest.json", manifest)
    for path in written:
        print(path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------

def cmd_run(args: argparse.Namespace) -> int:
    opts = _Options(args)
    instance_path = args.instance or opts.get("instance")
    if instance_path is None:
        raise UsageError("missing instance file argument")
    opts.resolved["instance"] = str(instance_path)
    seed = opts.get("seed", default=0, cast=int)
    kwargs = _levelwise_kwargs(opts, seed=seed)
    out_dir = Path(opts.get("out", default=".", cast=str))

    inst = _load_instance(str(instance_path))
    cfg = LevelwiseConfig(**kwargs)
    schedule, report = run_levelwise(inst, cfg)

    job = opts.job("run")
    stem = Path(instance_path).stem
    payload = json.loads(report.to_json())
    payload["job"] = job.as_dict()
    payload["generated"] = _now()
    report_path = out_dir / f"{stem}_report.json"
    _write_json(report_path, payload)

    tts = TtsParams(shots=int(kwargs["shots"]))
    csv_path = out_dir / f"{stem}_levels.csv"
    _write_csv(csv_path, RUN_LEVELS_FORMAT, job, LEVEL_CSV_COLUMNS,
               level_rows(report, tts))

    final_j = report.j_trajectory[-1]
    line = f"levels={schedule.depth} J={final_j:.6g} trials={report.trial_count}"
    if report.convergence_ratio is not None:
        line += (f" r_c={report.convergence_ratio:.4f}"
                 f" p_c={report.convergence_level}")
    print(line)
    print(report_path)
    print(csv_path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _replica_worker(task: Tuple[int, Optional[float], str, Dict[str, object]]) -> Dict[str, object]:
    index, h0, inst_text, cfg_kwargs = task
    try:
        inst = from_json(inst_text)
        cfg = LevelwiseConfig(**cfg_kwargs)
        _, report = run_levelwise(inst, cfg)
        payload = json.loads(report.to_json())
        return {"index": index, "h0": h0, "ok": True, "report": payload}
    except Exception as exc:  # runs in a worker process; report, don't crash
        return {"index": index, "h0": h0, "ok": False,
                "error": f"{type(exc).__name__}: {exc}"}


def _run_tasks(tasks: List[Tuple[int, Optional[float], str, Dict[str, object]]],
               threads: int) -> List[Dict[str, object]]:
    if threads <= 1 or len(tasks) <= 1:
        results = [_replica_worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_replica_worker, tasks))
    return sorted(results, key=lambda r: r["index"])


def cmd_sweep(args: argparse.Namespace) -> int:
    opts = _Options(args)
    graph6_path = opts.get("graph6")
    family = opts.get("family", required=graph6_path is None,
                      default="u3r" if graph6_path else None, cast=str)
    n = opts.get("n", cast=int)
    d = opts.get("d", default=3, cast=int)
    dist_name = opts.get("dist", default="poisson", cast=str)
    replicas = opts.get("replicas", default=None, cast=int)
    seed = opts.get("seed", default=0, cast=int)
    threads = opts.get("threads", default=os.cpu_count() or 1, cast=int)
    out_dir = Path(opts.get("out", default=".", cast=str))
    prefix = opts.get("prefix", default="", cast=str)
    kwargs = _levelwise_kwargs(opts, seed=seed)

    h0_grid: Optional[List[float]] = None
    if family == "sk":
        grid_text = opts.get("h0_grid")
        if grid_text is not None:
            h0_grid = _parse_float_grid(grid_text)
            opts.resolved["h0_grid"] = grid_text
        else:
            h0_grid = [opts.get("h0", default=0.0, cast=float)]

    # Build the replica instances up front (cheap next to the runs).
    instances: List[Tuple[Optional[float], IsingInstance]] = []
    try:
        if graph6_path is not None:
            p = Path(graph6_path)
            if not p.is_file():
                raise UsageError(f"graph6 file not found: {graph6_path}")
            graphs = parse_graph6_file(p.read_text(encoding="utf-8"))
            if not graphs:
                raise UsageError(f"{graph6_path} holds no graphs")
            instances = [(None, unit_instance(g, label=f"{p.stem}#{k}"))
                         for k, g in enumerate(graphs)]
        elif family == "sk":
            if replicas is None or replicas < 1:
                raise UsageError("need --replicas >= 1")
            if n is None:
                raise UsageError("sk family needs --n")
            for gi, h0 in enumerate(h0_grid):
                for k in range(replicas):
                    idx = gi * replicas + k
                    inst = gen_sk(n, h0, mix_seed(seed, 4 * idx + _STREAM_GRAPH))
                    instances.append((h0, inst))
        else:
            if replicas is None or replicas < 1:
                raise UsageError("need --replicas >= 1")
            fam_instances = _gen_family(
                family, n=n, d=d, dist_name=dist_name, h0=0.0, rows=None,
                cols=None, input_path=None, replicas=replicas, seed=seed,
            )
            instances = [(None, inst) for inst in fam_instances]
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    tasks = []
    for idx, (h0, inst) in enumerate(instances):
        cfg_kwargs = dict(kwargs)
        cfg_kwargs["seed"] = mix_seed(seed, 4 * idx + _STREAM_RUN)
        tasks.append((idx, h0, to_json(inst), cfg_kwargs))

    results = _run_tasks(tasks, threads)
    job = opts.job("sweep")
    labels = {idx: inst.label for idx, (_, inst) in enumerate(instances)}
    failures = [r for r in results if not r["ok"]]
    field_free = h0_grid is None

    replica_rows: List[Tuple[object, ...]] = []
    summary_rows: List[Tuple[object, ...]] = []
    written: List[Path] = []

    if field_free:
        by_level: Dict[int, Dict[str, List[float]]] = {}
        for res in results:
            idx = res["index"]
            if not res["ok"]:
                summary_rows.append((idx, labels[idx], res["error"], "", ""))
                continue
            rep = res["report"]
            r_traj = rep["r_trajectory"]
            for li, j in enumerate(rep["j_trajectory"]):
                r = r_traj[li] if r_traj is not None else ""
                replica_rows.append((idx, li + 1, j, r))
                if r != "":
                    slot = by_level.setdefault(li + 1, {"J": [], "r": []})
                    slot["J"].append(j)
                    slot["r"].append(r)
            summary_rows.append((idx, labels[idx], "ok",
                                 rep["convergence_level"] or "",
                                 rep["convergence_ratio"]
                                 if rep["convergence_ratio"] is not None else ""))
        agg_rows = []
        for level in sorted(by_level):
            rs = by_level[level]["r"]
            js = by_level[level]["J"]
            bs = box_stats(rs)
            agg_rows.append((level, bs.count, fmean(js), fmean(rs),
                             bs.whisker_low, bs.q1, bs.median, bs.q3,
                             bs.whisker_high))
        paths = {
            "replicas": ("replica", "level", "J", "r"),
            "aggregate": ("level", "count", "mean_J", "mean_r",
                          "r_whisker_low", "r_q1", "r_median", "r_q3",
                          "r_whisker_high"),
            "summary": ("replica", "label", "status", "p_c", "r_c"),
        }
        data = {"replicas": replica_rows, "aggregate": agg_rows,
                "summary": summary_rows}
        formats = {"replicas": SWEEP_REPLICAS_FORMAT,
                   "aggregate": SWEEP_AGGREGATE_FORMAT,
                   "summary": SWEEP_SUMMARY_FORMAT}
    else:
        by_h0: Dict[float, List[float]] = {}
        for res in results:
            idx = res["index"]
            h0 = res["h0"]
            rep_id = idx % (replicas or 1)
            if not res["ok"]:
                summary_rows.append((h0, rep_id, labels[idx], res["error"],
                                     "", ""))
                continue
            rep = res["report"]
            for li, j in enumerate(rep["j_trajectory"]):
                replica_rows.append((h0, rep_id, li + 1, j))
            low = rep["low_energy_probability"]
            summary_rows.append((h0, rep_id, labels[idx], "ok",
                                 len(rep["j_trajectory"]),
                                 low if low is not None else ""))
            if low is not None:
                by_h0.setdefault(h0, []).append(low)
        agg_rows = []
        for h0 in sorted(by_h0):
            bs = box_stats(by_h0[h0])
            agg_rows.append((h0, bs.count, bs.whisker_low, bs.q1, bs.median,
                             bs.q3, bs.whisker_high))
        paths = {
            "replicas": ("h0", "replica", "level", "J"),
            "aggregate": ("h0", "count", "low_energy_whisker_low",
                          "low_energy_q1", "low_energy_median",
                          "low_energy_q3", "low_energy_whisker_high"),
            "summary": ("h0", "replica", "label", "status", "levels",
                        "low_energy_probability"),
        }
        data = {"replicas": replica_rows, "aggregate": agg_rows,
                "summary": summary_rows}
        formats = {"replicas": SWEEP_REPLICAS_FORMAT,
                   "aggregate": SWEEP_AGGREGATE_FORMAT,
                   "summary": SWEEP_SUMMARY_FORMAT}

    for kind, columns in paths.items():
        path = out_dir / f"{prefix}{kind}.csv"
        _write_csv(path, formats[kind], job, columns, data[kind])
        written.append(path)

    for path in written:
        print(path)
    if failures:
        print(f"{len(failures)} of {len(results)} replicas failed", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


# ---------------------------------------------------------------------------
# tts
# ---------------------------------------------------------------------------

def cmd_tts(args: argparse.Namespace) -> int:
    opts = _Options(args)
    sizes = _parse_int_range(opts.get("n_range", default="100:1000:50", cast=str))
    if not sizes:
        raise UsageError("empty size range")
    scaling = opts.get("scaling")
    laws = [str(scaling)] if scaling is not None else list(SCALING_LAWS)
    for law in laws:
        if law not in SCALING_LAWS:
            raise UsageError(f"unknown scaling law {law!r}")
    tau = opts.get("tau", default=500e-9, cast=float)
    shots = opts.get("shots", default=1000, cast=int)
    alpha = opts.get("alpha", cast=float)
    out_dir = Path(opts.get("out", default=".", cast=str))

    params = {law: TtsParams(tau=tau, shots=shots, scaling=law, alpha=alpha)
              for law in laws}
    columns = ["n"]
    for law in laws:
        columns += [f"p_{law}", f"tq_{law}_s"]
    columns.append("tc_s")
    rows: List[List[object]] = []
    for size in sizes:
        row: List[object] = [size]
        for law in laws:
            p = p_scaling(size, params[law])
            row += [p, tts_quantum(p, size, params[law])]
        row.append(tts_classical(size))
        rows.append(row)

    dense = range(min(sizes), max(sizes) + 1)
    summary = []
    for law in laws:
        point = crossover(params[law], dense)
        if point is None:
            summary.append(f"crossover {law}: none in [{min(sizes)}, {max(sizes)}]")
        else:
            summary.append(f"crossover {law}: N={point}")

    job = opts.job("tts")
    path = out_dir / "tts.csv"
    _write_csv(path, TTS_FORMAT, job, columns, rows, extra_header=summary)
    for line in summary:
        print(line)
    print(path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON or TOML file providing defaults")
    p.add_argument("--seed", type=int, help="base seed (default 0)")
    p.add_argument("--out", help="output directory (default: current)")


def _add_driver_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma0", help="shared cost angle, or comma-separated per-level list")
    p.add_argument("--p-max", dest="p_max", type=int, help="number of levels")
    p.add_argument("--mode", choices=("exact", "shots"))
    p.add_argument("--M", dest="shots", type=int,
                   help="shots per probe trial (shots mode)")
    p.add_argument("--final-shots", dest="final_shots", type=int,
                   help="sample the final state with this many shots")
    p.add_argument("--stop-on-convergence", dest="stop_on_convergence",
                   action=argparse.BooleanOptionalAction, default=None,
                   help="stop early once per-level improvement drops below epsilon")
    p.add_argument("--epsilon", type=float,
                   help="convergence threshold (default 0.005)")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="levelq",
        description="Level-wise QAOA parameter setting: instance generation, "
                    "runs, sweeps, and time-to-solution tables.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate instance JSON files")
    _add_common(g)
    g.add_argument("--family", help="u3r | wdr | sk | grid | graph6-file")
    g.add_argument("--n", type=int)
    g.add_argument("--d", type=int, help="degree for wdr (default 3)")
    g.add_argument("--dist", help="wdr weights: unit | pm1 | poisson | normal")
    g.add_argument("--h0", type=float, help="SK longitudinal field")
    g.add_argument("--rows", type=int)
    g.add_argument("--cols", type=int)
    g.add_argument("--input", help="graph6 file for --family graph6-file")
    g.add_argument("--replicas", type=int)
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run the level-wise driver on one instance")
    _add_common(r)
    _add_driver_options(r)
    r.add_argument("instance", nargs="?", help="instance JSON, graph6, or edge list")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="run a replica family and aggregate")
    _add_common(s)
    _add_driver_options(s)
    s.add_argument("--family", help="u3r | wdr | sk")
    s.add_argument("--graph6", help="import replica graphs from a graph6 file")
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--dist", help="wdr weights: unit | pm1 | poisson | normal")
    s.add_argument("--h0", type=float)
    s.add_argument("--h0-grid", dest="h0_grid", help="SK field grid MIN:MAX:STEP")
    s.add_argument("--replicas", type=int)
    s.add_argument("--threads", type=int,
                   help="replica-level parallelism (default: CPU count)")
    s.add_argument("--prefix", help="output filename prefix")
    s.set_defaults(func=cmd_sweep)

    t = sub.add_parser("tts", help="tabulate the time-to-solution model")
    _add_common(t)
    t.add_argument("--n-range", dest="n_range", help="sizes MIN:MAX:STEP")
    t.add_argument("--scaling", choices=SCALING_LAWS,
                   help="single p(N) law (default: all three)")
    t.add_argument("--tau", type=float, help="two-qubit gate time in seconds")
    t.add_argument("--M", dest="shots", type=int, help="shots per trial")
    t.add_argument("--alpha", type=float, help="override the p(N) constant")
    t.set_defaults(func=cmd_tts)

    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
