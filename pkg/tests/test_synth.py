import numpy as np
import pytest

import twbiclust as tb
from twbiclust.errors import LayoutInfeasibleError


def paper_layout_oracle(k_total, n, p):
    """Literal 1-based transcription of the band-layout formulas.

    Returns per-bicluster 1-based row/column index sets, for comparison with
    the 0-based implementation.
    """
    k1 = (3 * k_total + 4 + k_total % 2) // 2
    k2 = (3 * k_total + 4 - k_total % 2) // 2
    n1 = n // k1
    p1 = p // k2
    rects = []
    for k in range(1, k_total + 1):
        kk1 = (3 * k - 2 - k % 2) // 2
        kk2 = (3 * k - 4 + k % 2) // 2
        rows = set(range(kk1 * n1 + 1, (kk1 + 2) * n1 + 1))
        cols = set(range(kk2 * p1 + 1, (kk2 + 2) * p1 + 1))
        rects.append((rows, cols))
    return k1, k2, n1, p1, rects


class TestLayout:
    def test_k3_band_counts(self):
        spec = tb.LayoutSpec(3, 500, 375)
        assert spec.k1 == 7 and spec.k2 == 6
        assert spec.n1 == 71 and spec.p1 == 62

    def test_k3_500x375_first_bicluster_rows(self):
        # bicluster 1 spans 1-based rows 1..142, i.e. 0-based 0..141
        spec = tb.LayoutSpec(3, 500, 375)
        rows, cols = spec.rectangle(1)
        assert rows[0] == 0 and rows[-1] == 141 and rows.size == 142

    def test_k1_tiny_matrix(self):
        spec = tb.LayoutSpec(1, 7, 7)
        assert (spec.k1, spec.k2, spec.n1, spec.p1) == (4, 3, 1, 2)
        rows, cols = spec.rectangle(1)
        assert rows.size == 2 and cols.size == 4  # a single 2x4 bicluster
        g = tb.null_layout(1, 7, 7)
        assert g.counts()[0] > 0

    def test_matches_paper_transcription(self):
        for k_total in range(1, 9):
            for n, p in [(500, 375), (400, 300), (200, 150), (96, 80)]:
                spec = tb.LayoutSpec(k_total, n, p)
                k1, k2, n1, p1, rects = paper_layout_oracle(k_total, n, p)
                assert (spec.k1, spec.k2, spec.n1, spec.p1) == (k1, k2, n1, p1)
                for k in range(1, k_total + 1):
                    rows, cols = spec.rectangle(k)
                    assert set(rows + 1) == rects[k - 1][0]
                    assert set(cols + 1) == rects[k - 1][1]

    def test_disjoint_across_k_grid(self):
        # brute-force overlap scan of every pair of rectangles
        for k_total in range(1, 9):
            for n, p in [(500, 375), (80, 60), (40, 30)]:
                try:
                    spec = tb.LayoutSpec(k_total, n, p)
                except LayoutInfeasibleError:
                    continue
                entries = {}
                for k in range(1, k_total + 1):
                    rows, cols = spec.rectangle(k)
                    for i in rows:
                        for j in cols:
                            assert (i, j) not in entries, (k_total, n, p, k)
                            entries[(i, j)] = k
                assert len(entries) < n * p  # background survives

    def test_infeasible(self):
        with pytest.raises(LayoutInfeasibleError):
            tb.LayoutSpec(3, 5, 5)
        with pytest.raises(LayoutInfeasibleError):
            tb.null_layout(3, 5, 5)


class TestGenerate:
    def test_seed_determinism(self):
        spec = tb.GeneratorSpec(kind="gaussian", b=(0.2, 0.5, 0.6, 0.7),
                                s=(0.03, 0.04, 0.06, 0.07),
                                layout=tb.LayoutSpec(3, 60, 45), seed=12)
        a1, g1 = tb.generate(spec)
        a2, g2 = tb.generate(spec)
        assert np.array_equal(a1.values, a2.values)
        assert np.array_equal(g1.group_of, g2.group_of)

    def test_distinct_seeds_differ(self):
        spec = tb.GeneratorSpec(kind="gaussian", b=(0.2, 0.5, 0.6, 0.7),
                                s=(0.03, 0.04, 0.06, 0.07),
                                layout=tb.LayoutSpec(3, 60, 45), seed=12)
        a1, _ = tb.generate(spec)
        a2, _ = tb.generate(spec, seed=13)
        assert not np.array_equal(a1.values, a2.values)

    def test_degenerate_noise_recovers_means(self):
        b = (0.2, 0.5, 0.6, 0.7)
        spec = tb.GeneratorSpec(kind="gaussian", b=b, s=(1e-9,) * 4,
                                layout=tb.LayoutSpec(3, 40, 30), seed=5)
        a, g = tb.generate(spec)
        expect = np.asarray(b)[g.group_of]
        assert np.abs(a.values - expect).max() < 1e-6

    def test_bernoulli_group_means(self):
        b = (0.2, 0.5, 0.6, 0.7)
        spec = tb.GeneratorSpec(kind="bernoulli", b=b,
                                layout=tb.LayoutSpec(3, 500, 375), seed=21)
        a, g = tb.generate(spec)
        assert set(np.unique(a.values)) <= {0.0, 1.0}
        for grp in range(4):
            vals = a.values[g.group_of == grp]
            se = np.sqrt(b[grp] * (1 - b[grp]) / vals.size)
            assert abs(vals.mean() - b[grp]) <= 3 * se

    def test_poisson_variance_matches_mean(self):
        b = (2.0, 5.0, 6.0, 7.0)
        spec = tb.GeneratorSpec(kind="poisson", b=b,
                                layout=tb.LayoutSpec(3, 500, 375), seed=22)
        a, g = tb.generate(spec)
        for grp in range(4):
            vals = a.values[g.group_of == grp]
            assert vals.size >= 10_000
            assert abs(vals.var() / vals.mean() - 1.0) < 0.1

    def test_gaussian_group_moments_3_sigma(self):
        b = (0.2, 0.5, 0.6, 0.7)
        s = (0.03, 0.04, 0.06, 0.07)
        spec = tb.GeneratorSpec(kind="gaussian", b=b, s=s,
                                layout=tb.LayoutSpec(3, 300, 225), seed=30)
        a, g = tb.generate(spec)
        for grp in range(4):
            vals = a.values[g.group_of == grp]
            assert abs(vals.mean() - b[grp]) <= 3 * s[grp] / np.sqrt(vals.size)
            assert abs(vals.std() - s[grp]) <= 3 * s[grp] / np.sqrt(2 * vals.size)

    def test_parameter_validation(self):
        layout = tb.LayoutSpec(1, 10, 10)
        with pytest.raises(ValueError):
            tb.GeneratorSpec(kind="bernoulli", b=(0.5, 1.5), layout=layout)
        with pytest.raises(ValueError):
            tb.GeneratorSpec(kind="poisson", b=(1.0, -2.0), layout=layout)
        with pytest.raises(ValueError):
            tb.GeneratorSpec(kind="gaussian", b=(0.0, 1.0), layout=layout)  # missing s
        with pytest.raises(ValueError):
            tb.GeneratorSpec(kind="gaussian", b=(0.0, 1.0), s=(1.0,), layout=layout)

    def test_spec_roundtrip(self):
        spec = tb.GeneratorSpec(kind="poisson", b=(2.0, 5.0), layout=tb.LayoutSpec(1, 12, 10), seed=3)
        again = tb.GeneratorSpec.from_dict(spec.to_dict())
        assert again == spec


class TestInterpolatedMeans:
    def test_full_shrink(self):
        assert tb.interpolated_means((0.2, 0.5, 0.6, 0.7), 10, 0.5) == (0.5, 0.5, 0.5, 0.5)

    def test_zero_shrink(self):
        b = (0.2, 0.5, 0.6, 0.7)
        assert tb.interpolated_means(b, 0, 0.5) == b

    def test_half_shrink(self):
        got = tb.interpolated_means((0.2, 0.5, 0.6, 0.7), 5, 0.5)
        assert got == pytest.approx((0.35, 0.5, 0.55, 0.6), abs=1e-12)

    def test_poisson_center(self):
        got = tb.interpolated_means((2.0, 5.0, 6.0, 7.0), 5, 5.0)
        assert got == pytest.approx((3.5, 5.0, 5.5, 6.0), abs=1e-12)
