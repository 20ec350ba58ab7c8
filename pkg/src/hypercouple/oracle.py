"""Exact brute-force oracles for regular extension families at desk scale.

Everything here enumerates, so it only works for tiny instances, but in
exchange every probability and identity comes out as an exact Fraction.
Two independent enumeration strategies are kept deliberately separate:

* `count_extensions` counts unordered completions by focus-vertex
  backtracking (always satisfy the smallest deficient vertex first);
* `exact_simplicity_probability` counts ordered simple tails
  edge-by-edge and converts to a probability over vertex-copy
  permutations.

Tests tie the two together through the configuration-model identity
P(simple) * N_G = |R_G| * (k!)^(M-t), where N_G is the number of
distinct permutations of the residual vertex-copy multiset.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .core import (
    DomainError,
    Edge,
    InadmissiblePrefixError,
    OrderedHypergraph,
    Params,
    complement_edges,
    residual_state,
)

DEFAULT_NODE_BUDGET = 100_000_000
ENV_NODE_BUDGET = "HYPERCOUPLE_NODE_BUDGET"


class OracleBudgetError(RuntimeError):
    """Enumeration exceeded its node budget; no silent truncation."""


def node_budget(override: int | None = None) -> int:
    """Effective enumeration budget: explicit value, else env var, else default."""
    if override is not None:
        if override < 1:
            raise DomainError(f"node budget must be positive, got {override}")
        return override
    raw = os.environ.get(ENV_NODE_BUDGET)
    if raw is not None:
        try:
            value = int(raw)
        except ValueError as exc:
            raise DomainError(f"bad {ENV_NODE_BUDGET}={raw!r}") from exc
        if value < 1:
            raise DomainError(f"bad {ENV_NODE_BUDGET}={raw!r}")
        return value
    return DEFAULT_NODE_BUDGET


@dataclass
class ExtensionFamily:
    """Completions of a prefix G to a d-regular k-graph.

    `unordered_count` is the number of completion edge-sets; the ordered
    family (all ways to expose the remaining edges one by one) is larger by
    a factor (M-t)!.  `completions` lists tails as lexicographically sorted
    edge tuples when requested.
    """

    params: Params
    base_size: int
    unordered_count: int
    admissible: bool
    completions: list[tuple[Edge, ...]] | None = None
    nodes_used: int = 0

    @property
    def ordered_count(self) -> int:
        return self.unordered_count * math.factorial(self.params.M - self.base_size)


class _FocusBacktracker:
    """Enumerate unordered completions, always serving the smallest deficient
    vertex next; within a stage, incident edges are chosen in increasing
    lexicographic order, so each completion is visited exactly once."""

    def __init__(self, n: int, k: int, residual: list[int],
                 forbidden: set[Edge], budget: int, collect: bool) -> None:
        self.n = n
        self.k = k
        self.residual = residual  # index 0 unused
        self.forbidden = forbidden
        self.budget = budget
        self.collect = collect
        self.count = 0
        self.nodes = 0
        self.chosen: list[Edge] = []
        self.tails: list[tuple[Edge, ...]] = []

    def run(self) -> None:
        self._fill()

    def _fill(self) -> None:
        r = self.residual
        focus = 0
        for v in range(1, self.n + 1):
            if r[v] > 0:
                focus = v
                break
        if focus == 0:
            self.count += 1
            if self.collect:
                self.tails.append(tuple(sorted(self.chosen)))
            return
        available = [w for w in range(focus + 1, self.n + 1) if r[w] > 0]
        cands = [
            (focus,) + rest
            for rest in combinations(available, self.k - 1)
            if (focus,) + rest not in self.forbidden
        ]
        self._assign(focus, r[focus], cands, 0)

    def _assign(self, v: int, needed: int, cands: list[Edge], start: int) -> None:
        if needed == 0:
            self._fill()
            return
        r = self.residual
        for i in range(start, len(cands)):
            if len(cands) - i < needed:
                break
            e = cands[i]
            self.nodes += 1
            if self.nodes > self.budget:
                raise OracleBudgetError(
                    f"enumeration exceeded {self.budget} nodes; raise the budget "
                    f"explicitly or via {ENV_NODE_BUDGET} if this size is intended"
                )
            if any(r[w] == 0 for w in e[1:]):
                continue
            for w in e:
                r[w] -= 1
            self.chosen.append(e)
            self._assign(v, needed - 1, cands, i + 1)
            self.chosen.pop()
            for w in e:
                r[w] += 1


def _residual_list(G: OrderedHypergraph, params: Params) -> list[int] | None:
    """Residual degrees as a 1-indexed list, or None if some vertex overflows."""
    deg = G.degree_map()
    residual = [0] * (params.n + 1)
    for v in range(1, params.n + 1):
        r = params.d - deg[v]
        if r < 0:
            return None
        residual[v] = r
    return residual


def count_extensions(G: OrderedHypergraph, params: Params,
                     list_completions: bool = False,
                     budget: int | None = None) -> ExtensionFamily:
    """Count (optionally list) the d-regular completions of prefix G.

    A prefix with a vertex above degree d is reported as inadmissible with
    count 0 rather than raising; exceeding the node budget raises
    OracleBudgetError.
    """
    if G.n != params.n or G.k != params.k:
        raise DomainError("graph and params disagree on (n, k)")
    t = len(G)
    if t > params.M:
        raise DomainError(f"prefix has {t} edges, more than M={params.M}")
    residual = _residual_list(G, params)
    if residual is None:
        return ExtensionFamily(params, t, 0, False,
                               [] if list_completions else None, 0)
    bt = _FocusBacktracker(params.n, params.k, residual, set(G.edge_set),
                           node_budget(budget), list_completions)
    bt.run()
    return ExtensionFamily(
        params=params,
        base_size=t,
        unordered_count=bt.count,
        admissible=bt.count > 0,
        completions=bt.tails if list_completions else None,
        nodes_used=bt.nodes,
    )


_COUNT_CACHE: dict[tuple[int, int, int, frozenset[Edge]], int] = {}


def cached_completion_count(edges: frozenset[Edge], params: Params,
                            budget: int | None = None) -> int:
    """Unordered completion count keyed by edge set; memoized.

    The coupling driver hits the same prefix states millions of times, so
    counts are cached per (n, k, d, edge set).
    """
    key = (params.n, params.k, params.d, edges)
    hit = _COUNT_CACHE.get(key)
    if hit is not None:
        return hit
    g = OrderedHypergraph(params.n, params.k, sorted(edges))
    fam = count_extensions(g, params, budget=budget)
    _COUNT_CACHE[key] = fam.unordered_count
    return fam.unordered_count


def clear_count_cache() -> None:
    _COUNT_CACHE.clear()


def exact_next_edge_distribution(G: OrderedHypergraph, params: Params,
                                 budget: int | None = None) -> dict[Edge, Fraction]:
    """Exact law of the next exposed edge given prefix G, as Fractions.

    For each absent edge e, P(e) = U(G+e) / (U(G) * (M-t)) where U counts
    unordered completions; the M-t orderings of each completion tail put
    each tail edge first equally often.  The values sum to 1 exactly.
    """
    t = len(G)
    if t >= params.M:
        raise DomainError("prefix already has M edges; no next edge exists")
    base = frozenset(G.edge_set)
    u_base = cached_completion_count(base, params, budget)
    if u_base == 0:
        raise DomainError("prefix is inadmissible; next-edge law undefined")
    denominator = u_base * (params.M - t)
    dist: dict[Edge, Fraction] = {}
    for e in complement_edges(G):
        u_ext = cached_completion_count(base | {e}, params, budget)
        dist[e] = Fraction(u_ext, denominator)
    assert sum(dist.values()) == 1
    return dist


@dataclass
class SwitchingClassSizes:
    """Family sizes stratified by a pair statistic.

    `sizes[value]` counts ordered extensions whose statistic equals `value`
    (unordered counts in `unordered_sizes`); `bottom` and `top` bound the
    occupied values.  `is_interval` records whether every level between them
    is occupied; a nonempty prefix can force the bottom above 0.
    """

    kind: str
    u: int
    v: int
    sizes: dict[int, int]
    unordered_sizes: dict[int, int]
    bottom: int
    top: int
    is_interval: bool
    total_ordered: int


def switching_class_sizes(G: OrderedHypergraph, u: int, v: int, kind: str,
                          params: Params,
                          budget: int | None = None) -> SwitchingClassSizes:
    """Stratify the extension family of G by a pair statistic at (u, v).

    kind "pair_degree" counts completion edges containing both u and v;
    kind "codegree" counts (k-1)-sets W with W+{u} in the full graph H and
    W+{v} in H\\G.
    """
    if kind not in ("pair_degree", "codegree"):
        raise DomainError(f"unknown switching statistic kind {kind!r}")
    if u == v:
        raise DomainError("statistic needs two distinct vertices")
    fam = count_extensions(G, params, list_completions=True, budget=budget)
    t = len(G)
    orderings = math.factorial(params.M - t)
    base = G.edge_set
    unordered: dict[int, int] = {}
    for tail in fam.completions or []:
        tail_set = set(tail)
        if kind == "pair_degree":
            value = sum(1 for e in tail if u in e and v in e)
        else:
            value = 0
            for e in base | tail_set:
                if u not in e or v in e:
                    continue
                swapped = tuple(sorted(set(e) - {u} | {v}))
                if swapped in tail_set:
                    value += 1
        unordered[value] = unordered.get(value, 0) + 1
    top = max(unordered) if unordered else 0
    bottom = min(unordered) if unordered else 0
    sizes = {val: cnt * orderings for val, cnt in unordered.items()}
    is_interval = bool(unordered) and all(
        val in unordered for val in range(bottom, top + 1))
    return SwitchingClassSizes(
        kind=kind, u=u, v=v, sizes=sizes, unordered_sizes=unordered,
        bottom=bottom, top=top, is_interval=is_interval,
        total_ordered=fam.ordered_count,
    )


class _SequentialTailCounter:
    """Count ordered tails of distinct loop-free edges consistent with the
    residual multiset, position by position.  Independent of the focus-vertex
    route on purpose."""

    def __init__(self, n: int, k: int, residual: list[int],
                 forbidden: set[Edge], slots: int, budget: int) -> None:
        self.n = n
        self.k = k
        self.residual = residual
        self.forbidden = forbidden
        self.slots = slots
        self.budget = budget
        self.used: set[Edge] = set()
        self.count = 0
        self.nodes = 0

    def run(self) -> None:
        self._place(self.slots)

    def _place(self, remaining: int) -> None:
        if remaining == 0:
            self.count += 1
            return
        r = self.residual
        support = [v for v in range(1, self.n + 1) if r[v] > 0]
        for e in combinations(support, self.k):
            self.nodes += 1
            if self.nodes > self.budget:
                raise OracleBudgetError(
                    f"enumeration exceeded {self.budget} nodes; raise the budget "
                    f"explicitly or via {ENV_NODE_BUDGET} if this size is intended"
                )
            if e in self.forbidden or e in self.used:
                continue
            for w in e:
                r[w] -= 1
            self.used.add(e)
            self._place(remaining - 1)
            self.used.discard(e)
            for w in e:
                r[w] += 1


def residual_multiset_permutations(G: OrderedHypergraph, params: Params) -> int:
    """Number N_G of distinct arrangements of the residual vertex copies."""
    st = residual_state(G, params)
    total = math.factorial(st.total)
    for r in st.residual.values():
        total //= math.factorial(r)
    return total


def exact_simplicity_probability(G: OrderedHypergraph, params: Params,
                                 budget: int | None = None) -> Fraction:
    """Exact probability that a uniform configuration extension of G is simple.

    Counts ordered simple tails T; each contributes (k!)^(M-t) vertex-copy
    permutations, so P = T * (k!)^(M-t) / N_G.  Raises
    InadmissiblePrefixError when the residual multiset does not exist.
    """
    if G.n != params.n or G.k != params.k:
        raise DomainError("graph and params disagree on (n, k)")
    t = len(G)
    if t > params.M:
        raise DomainError(f"prefix has {t} edges, more than M={params.M}")
    residual = _residual_list(G, params)
    if residual is None:
        raise InadmissiblePrefixError("a vertex exceeds degree d; no multiset")
    counter = _SequentialTailCounter(params.n, params.k, residual,
                                     set(G.edge_set), params.M - t,
                                     node_budget(budget))
    counter.run()
    block_orderings = math.factorial(params.k) ** (params.M - t)
    return Fraction(counter.count * block_orderings,
                    residual_multiset_permutations(G, params))


@dataclass
class RatioIdentityReport:
    """Both sides of the extension-ratio identity, exactly.

    extension_ratio = U(G+e)/U(G+f) must equal
    residual_ratio * simplicity_ratio, where residual_ratio multiplies the
    residual degrees of e\\f over those of f\\e and simplicity_ratio is
    P(simple | G+e) / P(simple | G+f).
    """

    e: Edge
    f: Edge
    extension_ratio: Fraction
    residual_ratio: Fraction
    p_simple_e: Fraction | None
    p_simple_f: Fraction | None
    rhs: Fraction
    equal: bool


def verify_ratio_identity(G: OrderedHypergraph, e: Edge, f: Edge, params: Params,
                          budget: int | None = None) -> RatioIdentityReport:
    """Check U(G+e)/U(G+f) == residual ratio times simplicity ratio, exactly.

    Requires f to extend G admissibly (nonzero count); e may be inadmissible,
    in which case both sides are 0.
    """
    e = tuple(sorted(e))
    f = tuple(sorted(f))
    for name, edge in (("e", e), ("f", f)):
        if edge in G.edge_set:
            raise DomainError(f"edge {name}={edge} already present in G")
        if len(edge) != params.k:
            raise DomainError(f"edge {name}={edge} has wrong size")
    base = frozenset(G.edge_set)
    u_e = cached_completion_count(base | {e}, params, budget)
    u_f = cached_completion_count(base | {f}, params, budget)
    if u_f == 0:
        raise DomainError("f does not extend G admissibly; ratio undefined")
    st = residual_state(G, params)
    num = math.prod(st.residual[w] for w in set(e) - set(f))
    den = math.prod(st.residual[w] for w in set(f) - set(e))
    residual_ratio = Fraction(num, den)
    extension_ratio = Fraction(u_e, u_f)
    p_f = exact_simplicity_probability(
        OrderedHypergraph(params.n, params.k, list(G.edges) + [f]), params, budget)
    if num == 0:
        # e pushes some vertex past degree d: both sides vanish
        p_e = None
        rhs = Fraction(0)
    else:
        p_e = exact_simplicity_probability(
            OrderedHypergraph(params.n, params.k, list(G.edges) + [e]),
            params, budget)
        rhs = residual_ratio * p_e / p_f
    return RatioIdentityReport(
        e=e, f=f,
        extension_ratio=extension_ratio,
        residual_ratio=residual_ratio,
        p_simple_e=p_e, p_simple_f=p_f,
        rhs=rhs,
        equal=extension_ratio == rhs,
    )
