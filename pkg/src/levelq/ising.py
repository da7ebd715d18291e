"""Ising/QUBO cost models with a brute-force ground-state oracle.

Conventions shared by every module in this package:

* Vertex/qubit indices are 0-based.
* Computational basis states are labelled by integers ``k`` in ``[0, 2**n)``.
  Bit ``i`` of ``k`` (the i-th *least* significant bit) carries the binary
  variable ``x_i``, and spins follow ``z_i = 1 - 2*x_i``, so ``k = 0`` is the
  all-spin-up configuration.
* The cost of a configuration is
  ``E(k) = sum_{i<j} w_ij * z_i * z_j + sum_i w_ii * z_i``.

All objects here are immutable after construction and safe to share across
threads; every operation is a pure function of its arguments.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

# 2**26 float64 energies is roughly the desk-scale memory ceiling.
BRUTE_FORCE_CAP = 26

JSON_FORMAT = "ising/1"


class ResourceLimitError(RuntimeError):
    """An operation would exceed a size cap or exhaust a retry budget."""


@dataclass(frozen=True)
class IsingInstance:
    """A generic Ising/QUBO cost function.

    Parameters
    ----------
    n : int
        Number of spins (qubits).
    couplings : sequence of (i, j, w)
        Two-body terms ``w * z_i * z_j`` with ``i < j``. Duplicate pairs are
        rejected rather than summed, so generator bugs surface early.
    fields : sequence of (i, w)
        One-body (longitudinal field) terms ``w * z_i``.
    label : str
        Free-form provenance string (generator name, seed, RNG version).
    """

    n: int
    couplings: Tuple[Tuple[int, int, float], ...] = ()
    fields: Tuple[Tuple[int, float], ...] = ()
    label: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        # Canonical storage order makes equality and serialization structural.
        couplings = tuple(sorted(
            (int(i), int(j), float(w)) for i, j, w in self.couplings))
        fields = tuple(sorted((int(i), float(w)) for i, w in self.fields))
        object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "fields", fields)
        seen = set()
        for i, j, w in couplings:
            if not (0 <= i < j < self.n):
                raise ValueError(f"coupling ({i}, {j}) needs 0 <= i < j < n={self.n}")
            if (i, j) in seen:
                raise ValueError(f"duplicate coupling ({i}, {j})")
            if not math.isfinite(w):
                raise ValueError(f"coupling ({i}, {j}) has non-finite weight {w}")
            seen.add((i, j))
        seen_f = set()
        for i, w in fields:
            if not 0 <= i < self.n:
                raise ValueError(f"field index {i} out of range for n={self.n}")
            if i in seen_f:
                raise ValueError(f"duplicate field on vertex {i}")
            if not math.isfinite(w):
                raise ValueError(f"field on vertex {i} has non-finite weight {w}")
            seen_f.add(i)

    def has_fields(self) -> bool:
        """True iff some one-body weight is nonzero.

        Decides the probing mode downstream: instances with fields need five
        probe angles per level, field-free instances only three.
        """
        return any(w != 0.0 for _, w in self.fields)

    def relabeled(self, perm: Sequence[int]) -> "IsingInstance":
        """Instance with vertex ``i`` renamed to ``perm[i]`` (a permutation)."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm must be a permutation of range(n)")
        couplings = tuple(
            (min(perm[i], perm[j]), max(perm[i], perm[j]), w)
            for i, j, w in self.couplings
        )
        fields = tuple((perm[i], w) for i, w in self.fields)
        return IsingInstance(self.n, couplings, fields, self.label)


@dataclass(frozen=True)
class Spectrum:
    """The full diagonal of a cost Hamiltonian, cached for reuse.

    ``energies[k]`` is the cost of basis state ``k`` under the package bit
    convention; ``e_min``/``e_max`` are its extremes.
    """

    energies: np.ndarray
    e_min: float
    e_max: float


def bits_of_index(k: int, n: int) -> np.ndarray:
    """Binary variables (x_0, ..., x_{n-1}) of basis index ``k``."""
    if not 0 <= k < (1 << n):
        raise ValueError(f"index {k} out of range for n={n}")
    return np.array([(k >> i) & 1 for i in range(n)], dtype=np.uint8)


def index_of_bits(bits: Sequence[int]) -> int:
    """Inverse of :func:`bits_of_index`."""
    k = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit {i} is {b!r}, expected 0 or 1")
        k |= int(b) << i
    return k


def energy(inst: IsingInstance, bits: Sequence[int]) -> float:
    """Cost of one spin configuration, evaluated term by term.

    ``bits`` holds the binary variables x_i; spins are z_i = 1 - 2 x_i.
    This scalar path is the independent oracle for :func:`diagonal`.
    """
    bits = np.asarray(bits)
    if bits.shape != (inst.n,):
        raise ValueError(f"expected {inst.n} bits, got shape {bits.shape}")
    z = 1.0 - 2.0 * bits.astype(np.float64)
    total = 0.0
    for i, j, w in inst.couplings:
        total += w * z[i] * z[j]
    for i, w in inst.fields:
        total += w * z[i]
    return total


def diagonal(inst: IsingInstance, cap: int = BRUTE_FORCE_CAP) -> Spectrum:
    """Vectorized evaluation of all 2**n configuration energies.

    Raises
    ------
    ResourceLimitError
        If ``inst.n`` exceeds ``cap`` (default 26).
    """
    if inst.n > cap:
        raise ResourceLimitError(
            f"diagonal over 2**{inst.n} states exceeds the cap of 2**{cap}"
        )
    size = 1 << inst.n
    idx = np.arange(size, dtype=np.int64)
    energies = np.zeros(size, dtype=np.float64)
    # Per-entry accumulation order is fixed by the term lists, so results are
    # bit-identical regardless of how callers parallelize over k.
    for i, j, w in inst.couplings:
        zi = 1.0 - 2.0 * ((idx >> i) & 1)
        zj = 1.0 - 2.0 * ((idx >> j) & 1)
        energies += w * zi * zj
    for i, w in inst.fields:
        energies += w * (1.0 - 2.0 * ((idx >> i) & 1))
    return Spectrum(energies, float(energies.min()), float(energies.max()))


def ground_state(
    inst: IsingInstance, cap: int = BRUTE_FORCE_CAP
) -> Tuple[float, List[int]]:
    """Exhaustive ground-state search.

    Returns
    -------
    (e_min, argmins)
        The global minimum energy and every basis index attaining it,
        ascending. Use :func:`bits_of_index` to render indices as bitstrings.
    """
    spec = diagonal(inst, cap=cap)
    argmins = np.flatnonzero(spec.energies == spec.e_min)
    return spec.e_min, [int(k) for k in argmins]


def normalize(inst: IsingInstance) -> IsingInstance:
    """Rescale so the largest coupling magnitude is exactly 1.

    Both couplings and fields are divided by ``max |w_ij|``; the spectrum is
    scaled uniformly, so argmin sets are preserved.

    Raises
    ------
    ValueError
        If there is no nonzero coupling to normalize against.
    """
    scale = max((abs(w) for _, _, w in inst.couplings), default=0.0)
    if scale == 0.0:
        raise ValueError("cannot normalize: no nonzero coupling weight")
    couplings = tuple((i, j, w / scale) for i, j, w in inst.couplings)
    fields = tuple((i, w / scale) for i, w in inst.fields)
    label = inst.label + " [normalized]" if inst.label else "[normalized]"
    return IsingInstance(inst.n, couplings, fields, label)


def normalized_energy(spec: Spectrum, e: float) -> float:
    """Map an energy into [0, 1] via (e - e_min) / (e_max - e_min)."""
    if spec.e_max == spec.e_min:
        raise ValueError("spectrum is degenerate: e_max == e_min")
    return (e - spec.e_min) / (spec.e_max - spec.e_min)


def to_json(inst: IsingInstance) -> str:
    """Serialize with deterministic field ordering (stable for hashing)."""
    payload = {
        "format": JSON_FORMAT,
        "n": inst.n,
        "couplings": [[i, j, w] for i, j, w in inst.couplings],
        "fields": [[i, w] for i, w in inst.fields],
        "label": inst.label,
    }
    return json.dumps(payload, indent=2) + "\n"


def from_json(text: str) -> IsingInstance:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid instance JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValueError("invalid instance JSON: expected an object")
    fmt = payload.get("format", JSON_FORMAT)
    if fmt != JSON_FORMAT:
        raise ValueError(f"unsupported instance format {fmt!r}")
    try:
        return IsingInstance(
            n=payload["n"],
            couplings=tuple((i, j, w) for i, j, w in payload.get("couplings", [])),
            fields=tuple((i, w) for i, w in payload.get("fields", [])),
            label=str(payload.get("label", "")),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"invalid instance JSON: {exc}") from exc


def from_couplings(
    n: int,
    couplings: Iterable[Tuple[int, int, float]],
    fields: Iterable[Tuple[int, float]] = (),
    label: str = "",
) -> IsingInstance:
    """Convenience constructor that canonicalizes (i, j) ordering."""
    canon = tuple(
        (min(i, j), max(i, j), float(w)) for i, j, w in couplings
    )
    return IsingInstance(n, canon, tuple(fields), label)
