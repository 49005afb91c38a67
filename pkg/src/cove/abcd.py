"""Synthetic community graphs with power-law degrees and community sizes.

Each node splits its target degree between a graph drawn inside its
community and one global background graph, both built with configuration-
model stub matching; the noise parameter xi is the fraction of degree
routed to the background.  xi = 0 gives disjoint communities, xi = 1 a
completely random graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GenerationError, ParameterError
from .graph import Graph, from_edges
from .metrics import Clustering

__all__ = [
    "PowerLaw",
    "AbcdParams",
    "AbcdGraph",
    "sample_truncated_powerlaw",
    "generate",
]


@dataclass(frozen=True)
class PowerLaw:
    minimum: int
    maximum: int
    exponent: float

    def __post_init__(self):
        if self.minimum < 1 or self.minimum > self.maximum:
            raise ParameterError(
                f"power law needs 1 <= min <= max, got [{self.minimum}, "
                f"{self.maximum}]"
            )
        if self.exponent <= 1.0:
            raise ParameterError(f"exponent must be > 1, got {self.exponent}")


@dataclass(frozen=True)
class AbcdParams:
    n: int
    xi: float
    degree_law: PowerLaw = field(default_factory=lambda: PowerLaw(3, 70, 2.5))
    community_law: PowerLaw = field(default_factory=lambda: PowerLaw(15, 700, 1.5))
    seed: int = 0
    assignment_retries: int = 50

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.xi <= 1.0:
            raise ParameterError(f"xi must be in [0, 1], got {self.xi}")


@dataclass(frozen=True)
class AbcdGraph:
    graph: Graph
    ground_truth: Clustering
    params: AbcdParams


def sample_truncated_powerlaw(
    minimum: int, maximum: int, exponent: float, count: int, rng: np.random.Generator
) -> np.ndarray:
    """i.i.d. integer draws with P(k) proportional to k^-exponent on
    [minimum, maximum]."""
    law = PowerLaw(minimum, maximum, exponent)
    support = np.arange(law.minimum, law.maximum + 1)
    pmf = support.astype(np.float64) ** (-law.exponent)
    pmf /= pmf.sum()
    return rng.choice(support, size=count, p=pmf)


def _round_half_up(x: np.ndarray) -> np.ndarray:
    return np.floor(x + 0.5).astype(np.int64)


def _draw_community_sizes(
    n: int, law: PowerLaw, rng: np.random.Generator
) -> list[int]:
    """Sizes summing exactly to n, each within the law's bounds.

    Draws continue until a size would cross n; that draw is trimmed to land
    exactly on n.  A sub-minimum remainder (possible when the running sum
    stops within `minimum` of n) is absorbed into already-drawn sizes.
    """
    if n < law.minimum:
        raise GenerationError(
            f"n={n} is below the minimum community size {law.minimum}"
        )

    def draw() -> int:
        return int(
            sample_truncated_powerlaw(law.minimum, law.maximum, law.exponent, 1, rng)[0]
        )

    sizes: list[int] = []
    total = 0
    while total + law.minimum <= n:
        s = draw()
        if total + s >= n:
            # n - total >= minimum here, so the trimmed size stays lawful
            sizes.append(n - total)
            total = n
            break
        sizes.append(s)
        total += s
    deficit = n - total

    # absorb any leftover into existing communities, growing from the end
    for i in range(len(sizes) - 1, -1, -1):
        if deficit == 0:
            break
        take = min(law.maximum - sizes[i], deficit)
        sizes[i] += take
        deficit -= take
    while deficit >= law.minimum:
        take = min(deficit, law.maximum)
        if 0 < deficit - take < law.minimum:
            take = deficit - law.minimum
        if not law.minimum <= take <= law.maximum:
            break
        sizes.append(take)
        deficit -= take
    if deficit:
        raise GenerationError(
            f"could not partition n={n} into community sizes within "
            f"[{law.minimum}, {law.maximum}] (left over: {deficit})"
        )
    return sizes


def _assign_communities(
    internal: np.ndarray, sizes: list[int], rng: np.random.Generator, retries: int
) -> np.ndarray:
    """Place each node into a community larger than its internal degree,
    choosing uniformly over the remaining free slots; retried from scratch
    when a node runs out of feasible communities."""
    n = len(internal)
    sizes_arr = np.asarray(sizes)
    order = np.lexsort((np.arange(n), -internal))
    for _ in range(retries):
        remaining = sizes_arr.copy()
        assignment = np.full(n, -1, dtype=np.int64)
        ok = True
        for v in order:
            feasible = (remaining > 0) & (sizes_arr > internal[v])
            slots = np.where(feasible, remaining, 0)
            total = int(slots.sum())
            if total == 0:
                ok = False
                break
            pick = int(rng.choice(len(sizes_arr), p=slots / total))
            assignment[v] = pick
            remaining[pick] -= 1
        if ok:
            return assignment
    max_internal = int(internal.max()) if n else 0
    raise GenerationError(
        f"no feasible community assignment in {retries} attempts: max "
        f"internal degree {max_internal} vs community sizes "
        f"{sorted(set(sizes))}"
    )


def _fix_parity(stub_degrees: np.ndarray, members: np.ndarray, caps: np.ndarray | None):
    """Make the stub multiset even by incrementing its largest-degree member
    (respecting caps); decrements instead when nothing has headroom."""
    if stub_degrees[members].sum() % 2 == 0:
        return
    degs = stub_degrees[members]
    if caps is None:
        eligible = np.ones(len(members), dtype=bool)
    else:
        eligible = degs + 1 < caps
    if np.any(eligible):
        masked = np.where(eligible, degs, -1)
        stub_degrees[members[int(np.argmax(masked))]] += 1
    else:
        stub_degrees[members[int(np.argmax(degs))]] -= 1


def _configuration_edges(
    stubs: np.ndarray, rng: np.random.Generator
) -> list[tuple[int, int]]:
    """Uniform stub matching; self-pairs dropped, multi-edges kept for the
    caller to collapse."""
    if len(stubs) == 0:
        return []
    shuffled = stubs[rng.permutation(len(stubs))]
    pairs = shuffled.reshape(-1, 2)
    return [
        (int(a), int(b)) if a < b else (int(b), int(a))
        for a, b in pairs
        if a != b
    ]


def generate(params: AbcdParams) -> AbcdGraph:
    """Sample a community graph with ground truth and parameters attached."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(params.seed)])))
    n = params.n

    sizes = _draw_community_sizes(n, params.community_law, rng)
    degrees = sample_truncated_powerlaw(
        params.degree_law.minimum,
        params.degree_law.maximum,
        params.degree_law.exponent,
        n,
        rng,
    ).astype(np.int64)

    internal = _round_half_up((1.0 - params.xi) * degrees)
    assignment = _assign_communities(
        internal, sizes, rng, params.assignment_retries
    )
    background = degrees - internal

    edges: list[tuple[int, int]] = []
    communities = []
    sizes_arr = np.asarray(sizes)
    for c in range(len(sizes)):
        members = np.flatnonzero(assignment == c)
        communities.append(frozenset(int(v) for v in members))
        _fix_parity(internal, members, np.full(len(members), sizes_arr[c]))
        stubs = np.repeat(members, internal[members])
        edges.extend(_configuration_edges(stubs, rng))

    _fix_parity(background, np.arange(n), None)
    stubs = np.repeat(np.arange(n), background)
    edges.extend(_configuration_edges(stubs, rng))

    edge_weights = {pair: 1.0 for pair in edges}
    graph = from_edges(edge_weights, [str(v) for v in range(n)])
    truth = Clustering(
        clusters=tuple(communities), outliers=frozenset(), universe_n=n
    )
    return AbcdGraph(graph=graph, ground_truth=truth, params=params)
