"""Exact statevector simulation of the alternating cost/mixer ansatz.

States are plain 1-D ``numpy.complex128`` arrays of length ``2**n``, indexed
by the bit convention of :mod:`levelq.ising` (bit i of the array index is the
binary variable of qubit i). All public operations are pure unless
``copy=False`` explicitly requests in-place application.

Layer conventions
-----------------
* The cost layer multiplies amplitude ``k`` by ``exp(-1j * gamma * E_k)``
  where ``E_k`` is the precomputed diagonal energy.
* The mixer layer applies the same single-qubit rotation ``exp(-1j*theta*X)``
  to every qubit. Under this convention single-qubit expectations transform
  as ``<Z_i> -> cos(2 theta) <Z_i> + sin(2 theta) <Y_i>``, which is the
  identity the level-wise fit in :mod:`levelq.levelwise` relies on; it also
  makes final-layer energies pi-periodic in theta (pi/2-periodic when the
  instance is field-free).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np

from .ising import IsingInstance, ResourceLimitError, Spectrum, diagonal

STATE_QUBIT_CAP = 26

Target = Union[IsingInstance, Spectrum]


@dataclass(frozen=True)
class LevelParams:
    """Angles of one ansatz level: gamma on the cost term, theta on the mixer."""

    gamma: float
    theta: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.gamma) and np.isfinite(self.theta)):
            raise ValueError("level parameters must be finite")


@dataclass
class Schedule:
    """An ordered list of level parameters plus the energy trajectory.

    ``objective[l]`` is the energy expectation after level ``l + 1``; it is
    filled by the level-wise driver and left empty by :func:`run_qaoa`.
    """

    levels: List[LevelParams] = field(default_factory=list)
    objective: List[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.levels = [
            lp if isinstance(lp, LevelParams) else LevelParams(*lp)
            for lp in self.levels
        ]
        if self.objective and len(self.objective) != len(self.levels):
            raise ValueError("objective trajectory length must match level count")

    @property
    def depth(self) -> int:
        return len(self.levels)

    def gammas(self) -> List[float]:
        return [lp.gamma for lp in self.levels]

    def thetas(self) -> List[float]:
        return [lp.theta for lp in self.levels]


@dataclass(frozen=True)
class ObservableSet:
    """Weighted Pauli expectation sums of one state against one instance.

    ``zz``, ``yy``, ``zy`` run over couplings (``zy`` is the symmetrized
    Z_i Y_j + Y_i Z_j sum); ``z`` and ``y`` run over field terms.
    """

    zz: float
    yy: float
    zy: float
    z: float
    y: float


@dataclass(frozen=True)
class ShotSet:
    """Multiplicities of measured basis states from one sampling run."""

    counts: Dict[int, int]
    shots: int
    seed: int

    def __post_init__(self) -> None:
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if sum(self.counts.values()) != self.shots:
            raise ValueError("shot multiplicities must sum to the shot count")


def qubit_count(psi: np.ndarray) -> int:
    """Number of qubits of a state array; validates the shape."""
    size = psi.shape[0] if psi.ndim == 1 else 0
    n = size.bit_length() - 1
    if psi.ndim != 1 or size < 2 or (1 << n) != size:
        raise ValueError(f"state must be a 1-D array of length 2**n, got shape {psi.shape}")
    return n


def _as_spectrum(target: Target, n: int) -> Spectrum:
    if isinstance(target, Spectrum):
        spec = target
    elif isinstance(target, IsingInstance):
        spec = diagonal(target)
    else:
        raise TypeError(f"expected IsingInstance or Spectrum, got {type(target)!r}")
    if spec.energies.shape[0] != (1 << n):
        raise ValueError(
            f"dimension mismatch: state has {n} qubits, "
            f"diagonal has {spec.energies.shape[0]} entries"
        )
    return spec


def init_plus(n: int, cap: int = STATE_QUBIT_CAP) -> np.ndarray:
    """The uniform superposition |+...+>, the ansatz initial state."""
    if n < 1:
        raise ValueError("need n >= 1")
    if n > cap:
        raise ResourceLimitError(f"statevector for n={n} exceeds the cap of {cap} qubits")
    return np.full(1 << n, 2.0 ** (-n / 2.0), dtype=np.complex128)


def apply_cost(psi: np.ndarray, target: Target, gamma: float,
               copy: bool = True) -> np.ndarray:
    """Diagonal phase layer: amplitude k picks up exp(-1j*gamma*E_k).

    Accepts either the instance or its precomputed :class:`Spectrum`; passing
    the spectrum avoids rebuilding the diagonal on repeated application.
    """
    n = qubit_count(psi)
    spec = _as_spectrum(target, n)
    phases = np.exp(-1j * gamma * spec.energies)
    if copy:
        return psi * phases
    psi *= phases
    return psi


def apply_mixer(psi: np.ndarray, theta: float, copy: bool = True) -> np.ndarray:
    """Transverse mixer layer: exp(-1j*theta*X) on every qubit."""
    n = qubit_count(psi)
    out = psi.copy() if copy else psi
    c = np.cos(theta)
    s = -1j * np.sin(theta)
    for q in range(n):
        # Middle axis of this view is bit q of the basis index.
        block = out.reshape(-1, 2, 1 << q)
        a0 = block[:, 0, :].copy()
        block[:, 0, :] *= c
        block[:, 0, :] += s * block[:, 1, :]
        block[:, 1, :] *= c
        block[:, 1, :] += s * a0
    return out


def run_qaoa(inst: IsingInstance,
             sched: Union[Schedule, Iterable[Union[LevelParams, Tuple[float, float]]]],
             cap: int = STATE_QUBIT_CAP) -> np.ndarray:
    """Prepare the ansatz state: |+>, then per level cost followed by mixer."""
    levels = sched.levels if isinstance(sched, Schedule) else [
        lp if isinstance(lp, LevelParams) else LevelParams(*lp) for lp in sched
    ]
    psi = init_plus(inst.n, cap=cap)
    if not levels:
        return psi
    spec = diagonal(inst)
    for lp in levels:
        apply_cost(psi, spec, lp.gamma, copy=False)
        apply_mixer(psi, lp.theta, copy=False)
    return psi


def expectation(psi: np.ndarray, target: Target) -> float:
    """Energy expectation sum_k |a_k|^2 E_k."""
    n = qubit_count(psi)
    spec = _as_spectrum(target, n)
    probs = np.abs(psi) ** 2
    return float(probs @ spec.energies)


def _z_pattern(n: int, i: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return 1.0 - 2.0 * ((idx >> i) & 1)


def _apply_y(psi: np.ndarray, q: int) -> np.ndarray:
    """Y on qubit q: |0> -> i|1>, |1> -> -i|0>."""
    src = psi.reshape(-1, 2, 1 << q)
    out = np.empty_like(src)
    out[:, 1, :] = 1j * src[:, 0, :]
    out[:, 0, :] = -1j * src[:, 1, :]
    return out.reshape(-1)


def pauli_expectations(psi: np.ndarray, inst: IsingInstance) -> ObservableSet:
    """Weighted sums of ZZ, YY, ZY+YZ over couplings and Z, Y over fields.

    These are exactly the quantities that determine the trigonometric
    energy profile of one extra mixer layer on top of ``psi``.
    """
    n = qubit_count(psi)
    if n != inst.n:
        raise ValueError(f"state has {n} qubits but instance has {inst.n}")
    probs = np.abs(psi) ** 2
    y_states: Dict[int, np.ndarray] = {}

    def y_psi(q: int) -> np.ndarray:
        if q not in y_states:
            y_states[q] = _apply_y(psi, q)
        return y_states[q]

    zz = yy = zy = z = y = 0.0
    for i, j, w in inst.couplings:
        zi = _z_pattern(n, i)
        zj = _z_pattern(n, j)
        zz += w * float(probs @ (zi * zj))
        # <Y_i Y_j> = (Y_i psi)^dagger (Y_j psi); both operators Hermitian.
        yy += w * float(np.real(np.vdot(y_psi(i), y_psi(j))))
        zy += w * float(np.real(np.vdot(zi * psi, y_psi(j))))
        zy += w * float(np.real(np.vdot(y_psi(i), zj * psi)))
    for i, w in inst.fields:
        z += w * float(probs @ _z_pattern(n, i))
        y += w * float(np.real(np.vdot(psi, y_psi(i))))
    return ObservableSet(zz=zz, yy=yy, zy=zy, z=z, y=y)


def sample(psi: np.ndarray, shots: int, seed: int) -> ShotSet:
    """Measure in the computational basis: multiplicities of M i.i.d. draws.

    Only the aggregated counts are kept (the order of individual draws is
    never observable downstream); they follow the multinomial law of ``shots``
    independent draws from |a_k|^2. Deterministic in ``seed``.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    qubit_count(psi)
    probs = np.abs(psi) ** 2
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"state is not normalized: |psi|^2 sums to {total!r}")
    rng = np.random.default_rng(seed)
    counts_vec = rng.multinomial(shots, probs / total)
    nonzero = np.flatnonzero(counts_vec)
    counts = {int(k): int(counts_vec[k]) for k in nonzero}
    return ShotSet(counts=counts, shots=shots, seed=seed)


def estimate_energy(shots: ShotSet, target: Target) -> float:
    """Multiplicity-weighted sample mean of the energy; unbiased for
    :func:`expectation` of the sampled state."""
    if not shots.counts:
        raise ValueError("empty shot set")
    indices = np.fromiter(shots.counts.keys(), dtype=np.int64)
    size = int(indices.max()) + 1
    if isinstance(target, Spectrum):
        spec = target
    else:
        spec = diagonal(target)
    if spec.energies.shape[0] < size:
        raise ValueError("shot indices exceed the diagonal size")
    mult = np.fromiter(shots.counts.values(), dtype=np.int64)
    return float((spec.energies[indices] * mult).sum() / shots.shots)


# ---------------------------------------------------------------------------
# optional binary state dump (debugging aid; format not stability-guaranteed)
# ---------------------------------------------------------------------------

_STATE_MAGIC = b"LQSV"


def save_state(psi: np.ndarray, path: str) -> None:
    """Write (n, interleaved little-endian re/im doubles) to a file."""
    n = qubit_count(psi)
    flat = np.empty(2 * psi.shape[0], dtype="<f8")
    flat[0::2] = psi.real
    flat[1::2] = psi.imag
    with open(path, "wb") as fh:
        fh.write(_STATE_MAGIC)
        fh.write(struct.pack("<I", n))
        fh.write(flat.tobytes())


def load_state(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _STATE_MAGIC:
            raise ValueError(f"not a state dump: bad magic {magic!r}")
        (n,) = struct.unpack("<I", fh.read(4))
        flat = np.frombuffer(fh.read(), dtype="<f8")
    if flat.shape[0] != 2 * (1 << n):
        raise ValueError("state dump truncated")
    return (flat[0::2] + 1j * flat[1::2]).astype(np.complex128)
