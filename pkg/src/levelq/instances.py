"""Benchmark instance families and graph file formats.

Generators are pure functions of their parameters and a 64-bit seed: the same
call is bit-identical across processes and machines. Replica fan-out derives
per-replica seeds with :func:`mix_seed`, so replicas can be produced in
parallel in any order. The RNG algorithm (PCG64) is recorded in instance
labels to keep replicas citable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .ising import IsingInstance, ResourceLimitError

RNG_VERSION = "pcg64"

# Configuration-model rejection sampling gives up after this many attempts.
# Wholesale rejection keeps the distribution uniform but its acceptance rate
# decays roughly like exp(-(d*d - 1)/4), so higher degrees need headroom.
DEFAULT_RETRY_BUDGET = 20000

GRAPH6_HEADER = ">>graph6<<"
GRAPH6_MAX_N = 62


class ParseError(ValueError):
    """A graph or instance file could not be parsed.

    Carries the 1-based line number (edge lists) or 0-based byte offset
    (graph6) of the offending input where applicable.
    """

    def __init__(self, message: str, line: Optional[int] = None,
                 offset: Optional[int] = None):
        where = ""
        if line is not None:
            where = f" (line {line})"
        elif offset is not None:
            where = f" (byte {offset})"
        super().__init__(message + where)
        self.line = line
        self.offset = offset


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph with edges stored as (i, j), i < j."""

    n: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for a, b in edges:
            if not (0 <= a < b < self.n):
                raise ValueError(f"edge ({a}, {b}) needs 0 <= a < b < n={self.n}")
            if (a, b) in seen:
                raise ValueError(f"duplicate edge ({a}, {b})")
            seen.add((a, b))

    def degrees(self) -> List[int]:
        deg = [0] * self.n
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


def mix_seed(base_seed: int, k: int) -> int:
    """Derive the k-th child seed from a base seed.

    The k-th output of a splitmix64 generator seeded at ``base_seed``:
    advance the state by (k+1) golden-ratio increments, then finalize.
    Neighbouring indices land far apart in seed space, and the roles of
    base and index are not interchangeable. Deterministic and documented:
    part of the reproducibility contract.
    """
    x = (int(base_seed) + (int(k) + 1) * 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return x ^ (x >> 31)


@dataclass(frozen=True)
class WeightDistribution:
    """Edge-weight law for the weighted benchmark families.

    ``kind`` is one of ``unit``, ``poisson``, ``normal``, ``pm1``. Poisson
    uses mean ``lam`` (weights of 0 are possible and kept); Normal uses
    ``(mu, sigma)``; ``pm1`` draws +1/-1 with equal probability.
    """

    kind: str
    lam: float = 1.0
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("unit", "poisson", "normal", "pm1"):
            raise ValueError(f"unknown weight distribution {self.kind!r}")
        if self.kind == "poisson" and not self.lam > 0:
            raise ValueError("poisson mean must be positive")
        if self.kind == "normal" and not self.sigma > 0:
            raise ValueError("normal sigma must be positive")

    @classmethod
    def unit(cls) -> "WeightDistribution":
        return cls("unit")

    @classmethod
    def poisson(cls, lam: float = 1.0) -> "WeightDistribution":
        return cls("poisson", lam=lam)

    @classmethod
    def normal(cls, mu: float = 0.0, sigma: float = 1.0) -> "WeightDistribution":
        return cls("normal", mu=mu, sigma=sigma)

    @classmethod
    def plus_minus_one(cls) -> "WeightDistribution":
        return cls("pm1")

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "unit":
            return np.ones(size, dtype=np.float64)
        if self.kind == "poisson":
            return rng.poisson(self.lam, size).astype(np.float64)
        if self.kind == "normal":
            return rng.normal(self.mu, self.sigma, size)
        return rng.choice(np.array([1.0, -1.0]), size=size)

    def describe(self) -> str:
        if self.kind == "poisson":
            return f"poisson(lam={self.lam:g})"
        if self.kind == "normal":
            return f"normal(mu={self.mu:g},sigma={self.sigma:g})"
        return self.kind


def gen_regular(n: int, d: int, seed: int,
                retry_budget: int = DEFAULT_RETRY_BUDGET) -> Graph:
    """Random d-regular simple graph via the configuration (pairing) model.

    Stubs are paired uniformly at random; pairings containing a self-loop or
    a repeated edge are rejected wholesale and redrawn, up to ``retry_budget``
    attempts.

    Raises
    ------
    ValueError
        If ``n * d`` is odd or ``d >= n`` (no simple d-regular graph exists).
    ResourceLimitError
        If no loop-free, multi-edge-free pairing is found within the budget.
    """
    if d < 0 or n < 1:
        raise ValueError("need n >= 1 and d >= 0")
    if (n * d) % 2 != 0:
        raise ValueError(f"no {d}-regular graph on {n} vertices: n*d is odd")
    if d >= n:
        raise ValueError(f"no simple {d}-regular graph on {n} vertices: d >= n")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(retry_budget):
        perm = rng.permutation(stubs)
        edges = set()
        ok = True
        for k in range(0, len(perm), 2):
            a, b = int(perm[k]), int(perm[k + 1])
            if a == b:
                ok = False
                break
            e = (a, b) if a < b else (b, a)
            if e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return Graph(n, tuple(sorted(edges)))
    raise ResourceLimitError(
        f"configuration model failed for n={n}, d={d} after {retry_budget} attempts"
    )


def grid_graph(rows: int, cols: int) -> Graph:
    """Rectangular lattice with 4-neighbour edges; n = rows * cols."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, tuple(sorted(edges)))


def assign_weights(g: Graph, dist: WeightDistribution, seed: int,
                   label: str = "") -> IsingInstance:
    """Draw one i.i.d. weight per edge; fields stay zero."""
    rng = np.random.default_rng(seed)
    ws = dist.sample(rng, len(g.edges))
    couplings = tuple((a, b, float(w)) for (a, b), w in zip(g.edges, ws))
    if not label:
        label = (f"weighted(n={g.n},m={len(g.edges)},dist={dist.describe()},"
                 f"seed={seed},rng={RNG_VERSION})")
    return IsingInstance(g.n, couplings, (), label)


def gen_sk(n: int, h0: float, seed: int) -> IsingInstance:
    """Sherrington-Kirkpatrick replica: complete graph, +/-1 couplings.

    Couplings are +1 or -1 with equal probability; every vertex carries the
    homogeneous longitudinal field ``h0`` (possibly zero).
    """
    if n < 2:
        raise ValueError("SK model needs n >= 2")
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    signs = rng.choice(np.array([1.0, -1.0]), size=len(pairs))
    couplings = tuple((i, j, float(s)) for (i, j), s in zip(pairs, signs))
    fields = tuple((i, float(h0)) for i in range(n))
    label = f"sk(n={n},h0={h0:g},seed={seed},rng={RNG_VERSION})"
    return IsingInstance(n, couplings, fields, label)


def unit_instance(g: Graph, label: str = "") -> IsingInstance:
    """All-ones edge weights on a graph (MaxCut form)."""
    couplings = tuple((a, b, 1.0) for a, b in g.edges)
    return IsingInstance(g.n, couplings, (), label or f"unit(n={g.n},m={len(g.edges)})")


# ---------------------------------------------------------------------------
# graph6 (short form, n <= 62)
# ---------------------------------------------------------------------------

def encode_graph6(g: Graph) -> str:
    """Encode a graph in short-form graph6 (one printable line, no header)."""
    if g.n > GRAPH6_MAX_N:
        raise ValueError(f"graph6 short form supports n <= {GRAPH6_MAX_N}")
    adj = [[False] * g.n for _ in range(g.n)]
    for a, b in g.edges:
        adj[a][b] = True
    # Upper triangle in column order: (0,1), (0,2), (1,2), (0,3), ...
    bits = []
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if adj[i][j] else 0)
    while len(bits) % 6 != 0:
        bits.append(0)
    chars = [chr(63 + g.n)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        chars.append(chr(63 + val))
    return "".join(chars)


def parse_graph6(text: str) -> Graph:
    """Decode one short-form graph6 line (optionally with the format header).

    Raises
    ------
    ParseError
        On a malformed header, out-of-range byte, unsupported long form, or
        truncated/overlong body; the byte offset points at the problem.
    """
    line = text.strip()
    if line.startswith(GRAPH6_HEADER):
        line = line[len(GRAPH6_HEADER):]
    if not line:
        raise ParseError("empty graph6 input")
    first = ord(line[0])
    if first == 126:
        raise ParseError("long-form graph6 (n > 62) is not supported", offset=0)
    if not 63 <= first <= 63 + GRAPH6_MAX_N:
        raise ParseError(f"invalid graph6 size byte {line[0]!r}", offset=0)
    n = first - 63
    if n == 0:
        raise ParseError("graph6 graph has no vertices", offset=0)
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    body = line[1:]
    if len(body) != nchars:
        raise ParseError(
            f"graph6 body for n={n} needs {nchars} characters, got {len(body)}",
            offset=1 + min(len(body), nchars),
        )
    bits = []
    for pos, ch in enumerate(body):
        val = ord(ch) - 63
        if not 0 <= val < 64:
            raise ParseError(f"invalid graph6 character {ch!r}", offset=1 + pos)
        bits.extend((val >> shift) & 1 for shift in range(5, -1, -1))
    if any(bits[nbits:]):
        raise ParseError("nonzero padding bits in graph6 body", offset=len(line) - 1)
    edges = []
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if bits[pos]:
                edges.append((i, j))
            pos += 1
    return Graph(n, tuple(sorted(edges)))


def parse_graph6_file(text: str) -> List[Graph]:
    """Decode every non-empty line of a graph6 file."""
    graphs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            graphs.append(parse_graph6(line))
        except ParseError as exc:
            raise ParseError(f"{exc.args[0]}", line=lineno) from exc
    if not graphs:
        raise ParseError("no graphs found in graph6 input")
    return graphs


# ---------------------------------------------------------------------------
# edge-list text format
# ---------------------------------------------------------------------------

def parse_edge_list(text: str) -> IsingInstance:
    """Parse a plain-text instance description.

    Format: one term per line, ``i j w`` for a coupling or ``i i w`` for a
    field; ``#`` starts a comment. An optional ``n <count>`` directive (first
    non-comment line) declares the vertex count; otherwise it is inferred as
    ``max index + 1``. Duplicate terms are rejected.
    """
    declared_n: Optional[int] = None
    terms: List[Tuple[int, int, float, int]] = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if declared_n is None and not terms and tokens[0] == "n":
            if len(tokens) != 2:
                raise ParseError("n directive expects exactly one value", line=lineno)
            try:
                declared_n = int(tokens[1])
            except ValueError:
                raise ParseError(f"invalid vertex count {tokens[1]!r}", line=lineno)
            if declared_n < 1:
                raise ParseError(f"vertex count must be positive", line=lineno)
            continue
        if len(tokens) != 3:
            raise ParseError(
                f"expected 'i j w', got {len(tokens)} token(s)", line=lineno
            )
        try:
            i, j = int(tokens[0]), int(tokens[1])
            w = float(tokens[2])
        except ValueError:
            raise ParseError(f"non-numeric token in {line!r}", line=lineno)
        if i < 0 or j < 0:
            raise ParseError(f"negative index in {line!r}", line=lineno)
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ParseError(
                f"duplicate term for ({key[0]}, {key[1]}), "
                f"first seen on line {seen[key]}",
                line=lineno,
            )
        seen[key] = lineno
        terms.append((i, j, w, lineno))
    if not terms:
        raise ParseError("no terms found in edge-list input")
    max_index = max(max(i, j) for i, j, _, _ in terms)
    n = declared_n if declared_n is not None else max_index + 1
    couplings = []
    fields = []
    for i, j, w, lineno in terms:
        if i >= n or j >= n:
            raise ParseError(
                f"index {max(i, j)} out of declared range n={n}", line=lineno
            )
        if i == j:
            fields.append((i, w))
        else:
            couplings.append((min(i, j), max(i, j), w))
    return IsingInstance(n, tuple(sorted(couplings)), tuple(sorted(fields)),
                         label="edge-list")
