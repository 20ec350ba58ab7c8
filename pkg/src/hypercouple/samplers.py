"""Random k-graph generation.

Uniform m-edge graphs arrive as ordered prefixes (partial Fisher-Yates over
the edge list), binomial graphs as plain edge sets, and uniform d-regular
extensions by rejection: permute the residual vertex-copy multiset, chop it
into k-blocks, keep the result iff it is simple.  Conditioned on acceptance
the result is uniform over ordered regular extensions of the base.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .core import (
    DomainError,
    DegreeState,
    Edge,
    MultiEdge,
    OrderedHypergraph,
    Hypergraph,
    Params,
    residual_state,
)
from . import oracle
from .stats import wilson_interval

DEFAULT_MAX_ATTEMPTS = 2_000_000


class RejectionBudgetError(RuntimeError):
    """Rejection sampling found no simple extension within its attempt budget."""


@dataclass(frozen=True)
class RngStream:
    """Addressable reproducible randomness: seed plus a spawn path.

    Two streams with different paths are statistically independent; the same
    (seed, path) always yields the same generator.
    """

    seed: int
    path: tuple[int, ...] = ()

    def child(self, *indices: int) -> "RngStream":
        return RngStream(self.seed, self.path + tuple(indices))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=self.path)
        return np.random.Generator(np.random.PCG64(ss))


def as_generator(rng) -> np.random.Generator:
    """Accept either an RngStream or a ready numpy Generator."""
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise DomainError(f"expected RngStream or numpy Generator, got {type(rng)!r}")


def all_edges(n: int, k: int) -> list[Edge]:
    """Every possible edge in lexicographic order.  Desk scale only."""
    return list(combinations(range(1, n + 1), k))


def sample_gnm(n: int, k: int, m: int, rng) -> OrderedHypergraph:
    """Uniform m-edge k-graph with a uniform edge order.

    Every prefix of the result is itself a uniform smaller instance, so the
    output doubles as a trajectory of the sequential uniform process.
    """
    gen = as_generator(rng)
    pool = all_edges(n, k)
    total = len(pool)
    if not 0 <= m <= total:
        raise DomainError(f"m={m} outside 0..{total}")
    for t in range(m):
        j = int(gen.integers(t, total))
        pool[t], pool[j] = pool[j], pool[t]
    return OrderedHypergraph(n, k, pool[:m])


def sample_gnp(n: int, k: int, p: float, rng) -> Hypergraph:
    """Binomial k-graph: each possible edge kept independently with chance p."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0, 1]")
    gen = as_generator(rng)
    pool = all_edges(n, k)
    mask = gen.random(len(pool)) < p
    return Hypergraph(n, k, [e for e, keep in zip(pool, mask) if keep])


@dataclass(frozen=True)
class MultiExtension:
    """One configuration-model draw: the base plus a multi-edge tail."""

    base: OrderedHypergraph
    tail: tuple[MultiEdge, ...]

    def is_simple(self) -> bool:
        seen = set(self.base.edge_set)
        for block in self.tail:
            if any(block[i] == block[i + 1] for i in range(len(block) - 1)):
                return False
            if block in seen:
                return False
            seen.add(block)
        return True


def _residual_vector(state: DegreeState) -> np.ndarray:
    vertices = np.fromiter(state.residual.keys(), dtype=np.int64)
    counts = np.fromiter(state.residual.values(), dtype=np.int64)
    return np.repeat(vertices, counts)


def sample_multi_extension(G: OrderedHypergraph, params: Params,
                           rng) -> MultiExtension:
    """Uniform vertex-copy permutation of the residual multiset, chopped into
    k-blocks.  Blocks are reported sorted; block order is kept."""
    gen = as_generator(rng)
    state = residual_state(G, params)
    vector = _residual_vector(state)
    perm = gen.permutation(vector)
    blocks = np.sort(perm.reshape(-1, params.k), axis=1)
    tail = tuple(tuple(int(x) for x in row) for row in blocks)
    return MultiExtension(base=G, tail=tail)


def _encode_rows(blocks: np.ndarray, n: int) -> list[int]:
    # positional base-(n+1) code of each sorted row; injective on sorted rows
    k = blocks.shape[1]
    powers = (n + 1) ** np.arange(k, dtype=np.int64)
    return (blocks @ powers).tolist()


def sample_regular(G: OrderedHypergraph, params: Params, rng,
                   max_attempts: int | None = None) -> OrderedHypergraph:
    """Uniform ordered d-regular extension of G by configuration rejection.

    For an empty base with d beyond half the complete degree the complement
    family is sampled instead and complemented back (a bijection between the
    two uniform families), with a fresh uniform edge order; rejection there
    would practically never accept.  Raises RejectionBudgetError after
    max_attempts failures, which may mean G is inadmissible.
    """
    gen = as_generator(rng)
    if max_attempts is None:
        max_attempts = DEFAULT_MAX_ATTEMPTS
    if max_attempts < 1:
        raise DomainError("max_attempts must be positive")
    if len(G) == 0 and params.d > params.max_degree:
        raise DomainError(
            f"no {params.d}-regular k-graph exists on n={params.n}: "
            f"complete degree is {params.max_degree}"
        )
    if len(G) == 0 and params.d > params.max_degree // 2:
        return _sample_regular_complement(params, gen)

    state = residual_state(G, params)
    vector = _residual_vector(state)
    slots = params.M - len(G)
    forbidden = set(_encode_rows(
        np.array(sorted(G.edge_set), dtype=np.int64).reshape(-1, params.k),
        params.n)) if len(G) else set()
    base_edges = list(G.edges)
    for _ in range(max_attempts):
        perm = gen.permutation(vector)
        blocks = np.sort(perm.reshape(slots, params.k), axis=1)
        if (blocks[:, 1:] == blocks[:, :-1]).any():
            continue
        codes = _encode_rows(blocks, params.n)
        code_set = set(codes)
        if len(code_set) != slots or code_set & forbidden:
            continue
        tail = [tuple(int(x) for x in row) for row in blocks]
        return OrderedHypergraph(params.n, params.k, base_edges + tail)
    raise RejectionBudgetError(
        f"no simple extension in {max_attempts} attempts at n={params.n} "
        f"k={params.k} d={params.d} |G|={len(G)}; G may be inadmissible or "
        f"the acceptance chance too small for rejection"
    )


def _sample_regular_complement(params: Params, gen: np.random.Generator) -> OrderedHypergraph:
    d_comp = params.max_degree - params.d
    pool = all_edges(params.n, params.k)
    if d_comp == 0:
        kept = pool
    else:
        comp = sample_regular(
            OrderedHypergraph(params.n, params.k),
            Params(params.n, params.k, d_comp), gen)
        absent = comp.edge_set
        kept = [e for e in pool if e not in absent]
    order = gen.permutation(len(kept))
    return OrderedHypergraph(params.n, params.k, [kept[i] for i in order])


@dataclass
class SimplicityEstimate:
    """Monte Carlo estimate of the chance a configuration draw is simple."""

    trials: int
    successes: int
    p_hat: float
    ci_low: float
    ci_high: float
    exact: Fraction | None

    def covers_exact(self) -> bool | None:
        if self.exact is None:
            return None
        return self.ci_low <= self.exact <= self.ci_high


def exact_simplicity_from_count(G: OrderedHypergraph, params: Params,
                                budget: int | None = None) -> Fraction:
    """P(simple) through the completion count: |R_G| (k!)^(M-t) prod r! / (k(M-t))!.

    This is the identity route; `oracle.exact_simplicity_probability` is the
    independent direct enumeration.
    """
    t = len(G)
    u = oracle.cached_completion_count(frozenset(G.edge_set), params, budget)
    ordered = u * math.factorial(params.M - t)
    state = residual_state(G, params)
    numerator = ordered * math.factorial(params.k) ** (params.M - t)
    for r in state.residual.values():
        numerator *= math.factorial(r)
    return Fraction(numerator, math.factorial(params.k * (params.M - t)))


def simplicity_probability(G: OrderedHypergraph, params: Params, trials: int,
                           rng, exact: str = "auto",
                           exact_budget: int = 2_000_000) -> SimplicityEstimate:
    """Estimate P(configuration draw simple); attach the exact value when the
    instance is small enough to count (exact='auto'|'never'|'require')."""
    if trials < 1:
        raise DomainError("trials must be positive")
    gen = as_generator(rng)
    state = residual_state(G, params)
    vector = _residual_vector(state)
    slots = params.M - len(G)
    forbidden = set(_encode_rows(
        np.array(sorted(G.edge_set), dtype=np.int64).reshape(-1, params.k),
        params.n)) if len(G) else set()
    successes = 0
    for _ in range(trials):
        perm = gen.permutation(vector)
        blocks = np.sort(perm.reshape(slots, params.k), axis=1)
        if (blocks[:, 1:] == blocks[:, :-1]).any():
            continue
        codes = set(_encode_rows(blocks, params.n))
        if len(codes) == slots and not codes & forbidden:
            successes += 1
    p_hat = successes / trials
    low, high = wilson_interval(successes, trials)
    value: Fraction | None = None
    if exact != "never":
        try:
            value = exact_simplicity_from_count(G, params, budget=exact_budget)
        except oracle.OracleBudgetError:
            if exact == "require":
                raise
    return SimplicityEstimate(trials=trials, successes=successes, p_hat=p_hat,
                              ci_low=low, ci_high=high, exact=value)
