"""Sampler correctness: stream discipline, validity, and uniformity."""

import numpy as np
import pytest

from hypercouple import (
    DomainError,
    OrderedHypergraph,
    Params,
    RejectionBudgetError,
    RngStream,
    as_generator,
    count_extensions,
    is_simple,
    sample_gnm,
    sample_gnp,
    sample_multi_extension,
    sample_regular,
)
from hypercouple.stats import tv_distance_uniform


class TestRngStream:
    def test_same_path_same_bits(self):
        a = RngStream(42, (1, 2)).generator().integers(0, 1 << 30, 8)
        b = RngStream(42, (1, 2)).generator().integers(0, 1 << 30, 8)
        assert np.array_equal(a, b)

    def test_children_diverge(self):
        root = RngStream(42)
        a = root.child(0).generator().integers(0, 1 << 30, 8)
        b = root.child(1).generator().integers(0, 1 << 30, 8)
        assert not np.array_equal(a, b)

    def test_child_equals_explicit_path(self):
        a = RngStream(7).child(3, 1).generator().integers(0, 1 << 30, 4)
        b = RngStream(7, (3, 1)).generator().integers(0, 1 << 30, 4)
        assert np.array_equal(a, b)

    def test_as_generator_accepts_both(self):
        assert isinstance(as_generator(RngStream(0)), np.random.Generator)
        g = np.random.default_rng(0)
        assert as_generator(g) is g
        with pytest.raises(DomainError):
            as_generator(31337)


class TestRegularSampler:
    def test_output_is_regular_simple_and_prefix_preserving(self):
        p = Params(9, 3, 2)
        prefix = OrderedHypergraph(9, 3, [(1, 2, 3)])
        for i in range(25):
            g = sample_regular(prefix, p, RngStream(5, (i,)))
            assert g.edges[0] == (1, 2, 3)
            assert len(g) == p.M
            assert is_simple(g.edges)
            assert all(g.degree(v) == p.d for v in range(1, 10))

    def test_empirical_uniformity_over_small_family(self):
        p = Params(6, 3, 2)
        rng = RngStream(11)
        counts = {}
        trials = 4000
        gen = rng.generator()
        for _ in range(trials):
            g = sample_regular(OrderedHypergraph(6, 3), p, gen)
            key = tuple(sorted(g.edge_set))
            counts[key] = counts.get(key, 0) + 1
        fam = count_extensions(OrderedHypergraph(6, 3), p).unordered_count
        assert fam == 75
        assert len(counts) == 75          # full support at this trial count
        assert tv_distance_uniform(counts, fam) < 0.1

    def test_conditional_uniformity_given_prefix(self):
        # restriction of the uniform regular law to graphs through the prefix
        p = Params(6, 3, 2)
        prefix = OrderedHypergraph(6, 3, [(1, 2, 3)])
        fam = count_extensions(prefix, p, list_completions=True)
        gen = RngStream(13).generator()
        counts = {}
        for _ in range(3000):
            g = sample_regular(prefix, p, gen)
            key = tuple(sorted(g.edge_set))
            counts[key] = counts.get(key, 0) + 1
        assert len(counts) == fam.unordered_count
        assert tv_distance_uniform(counts, fam.unordered_count) < 0.1

    def test_uncompletable_prefix_exhausts_rejection_budget(self):
        # degrees stay within d, but the residual multiset {4, 4} only forms
        # a loop, so every configuration draw fails the simplicity filter
        prefix = OrderedHypergraph(4, 2, [(1, 2), (1, 3), (2, 3)])
        with pytest.raises(RejectionBudgetError):
            sample_regular(prefix, Params(4, 2, 2), RngStream(0),
                           max_attempts=50)

    def test_inadmissible_prefix_rejected(self):
        prefix = OrderedHypergraph(4, 2, [(1, 2), (1, 3)])
        with pytest.raises(DomainError):
            sample_regular(prefix, Params(4, 2, 1), RngStream(0))


class TestMultiExtension:
    def test_tail_respects_residual_degrees(self):
        p = Params(6, 3, 2)
        prefix = OrderedHypergraph(6, 3, [(1, 2, 3)])
        for i in range(40):
            ext = sample_multi_extension(prefix, p, RngStream(3, (i,)))
            assert ext.base is prefix or ext.base == prefix
            deg = {v: 0 for v in range(1, 7)}
            for block in ext.tail:
                for v in block:
                    deg[v] += 1
            for v in range(1, 4):
                assert deg[v] == 1
            for v in range(4, 7):
                assert deg[v] == 2

    def test_simplicity_flag_matches_definition(self):
        p = Params(4, 2, 2)
        prefix = OrderedHypergraph(4, 2)
        seen = {True: 0, False: 0}
        for i in range(200):
            ext = sample_multi_extension(prefix, p, RngStream(9, (i,)))
            flag = ext.is_simple()
            assert flag == is_simple(list(prefix.edges) + list(ext.tail))
            seen[flag] += 1
        assert seen[True] and seen[False]   # both outcomes occur at k=2, d=2


class TestBinomialModels:
    def test_gnm_has_exactly_m_edges(self):
        g = sample_gnm(7, 3, 5, RngStream(1))
        assert len(g) == 5 and is_simple(g.edges)
        with pytest.raises(DomainError):
            sample_gnm(4, 2, 7, RngStream(0))

    def test_gnm_uniform_over_supports(self):
        gen = RngStream(21).generator()
        counts = {}
        for _ in range(3000):
            g = sample_gnm(4, 2, 2, gen)
            counts[tuple(sorted(g.edge_set))] = \
                counts.get(tuple(sorted(g.edge_set)), 0) + 1
        assert len(counts) == 15            # C(6,2) supports
        assert tv_distance_uniform(counts, 15) < 0.08

    def test_gnp_edge_count_is_binomial(self):
        gen = RngStream(8).generator()
        sizes = [len(sample_gnp(5, 2, 0.3, gen)) for _ in range(4000)]
        mean = sum(sizes) / len(sizes)
        assert abs(mean - 10 * 0.3) < 0.15   # |E| ~ Bin(C(5,2), 0.3)
        with pytest.raises(DomainError):
            sample_gnp(5, 2, 1.5, gen)

    def test_gnp_degenerate_probabilities(self):
        assert len(sample_gnp(5, 2, 0.0, RngStream(0))) == 0
        assert len(sample_gnp(5, 2, 1.0, RngStream(0))) == 10
