import math
from math import comb, log

import pytest

from bitlex.bitext import build_bitext
from bitlex.cooc import build_cooc
from bitlex.estimation import ClassParams
from bitlex.linking import LinkStats, link_bitext
from bitlex.scoring import (
    build_initial_scores,
    g2_score,
    likelihood_ratio,
    log_binomial_pmf,
    rebuild_scores,
)


def g2_reference(n_uv, n_u, n_v, total):
    """Independent oracle: direct O*ln(O/E) over the four cells."""
    table = [
        [n_uv, n_u - n_uv],
        [n_v - n_uv, total - n_u - n_v + n_uv],
    ]
    rows = [n_u, total - n_u]
    cols = [n_v, total - n_v]
    out = 0.0
    for i in range(2):
        for j in range(2):
            observed = table[i][j]
            if observed > 0:
                expected = rows[i] * cols[j] / total
                out += observed * log(observed / expected)
    return 2.0 * out


def pmf_reference(k, n, p):
    """Independent oracle: exact coefficient times float powers, no log-gamma."""
    return comb(n, k) * p**k * (1 - p) ** (n - k)


class TestG2:
    def test_exact_independence_is_zero(self):
        assert g2_score(1, 10, 10, 100) == 0.0

    def test_degenerate_single_cell_is_zero(self):
        assert g2_score(5, 5, 5, 5) == 0.0

    def test_strong_association_matches_oracle(self):
        # frozen from g2_reference(10, 10, 10, 100); analytically
        # 2 * (10*ln(10) + 90*ln(10/9))
        expected = 65.01659467828966
        assert g2_score(10, 10, 10, 100) == pytest.approx(expected, abs=1e-9)
        assert g2_reference(10, 10, 10, 100) == pytest.approx(expected, abs=1e-9)

    def test_below_independence_is_negative(self):
        assert g2_score(1, 50, 50, 100) < 0.0

    def test_symmetry_over_grid(self):
        for total in (10, 50, 200):
            for n_u in range(1, total + 1, 7):
                for n_v in range(1, total + 1, 7):
                    for n_uv in range(0, min(n_u, n_v) + 1, 3):
                        if total - n_u - n_v + n_uv < 0:
                            continue
                        assert g2_score(n_uv, n_u, n_v, total) == pytest.approx(
                            g2_score(n_uv, n_v, n_u, total), abs=1e-9
                        )

    def test_matches_oracle_over_grid(self):
        for n_uv, n_u, n_v, total in [
            (3, 9, 4, 60),
            (7, 7, 30, 100),
            (1, 2, 2, 4),
            (12, 40, 25, 200),
            (0, 5, 5, 30),
        ]:
            got = g2_score(n_uv, n_u, n_v, total)
            want = g2_reference(n_uv, n_u, n_v, total)
            if n_uv < n_u * n_v / total:
                want = -want
            assert got == pytest.approx(want, abs=1e-9)

    def test_offending_cell_named(self):
        with pytest.raises(ValueError, match="n\\(u\\)-n\\(u,v\\)"):
            g2_score(5, 3, 10, 100)
        with pytest.raises(ValueError, match="N-n\\(u\\)-n\\(v\\)"):
            g2_score(0, 60, 60, 100)
        with pytest.raises(ValueError, match="positive"):
            g2_score(0, 0, 0, 0)


class TestLogBinomialPmf:
    def test_zero_successes_closed_form(self):
        assert log_binomial_pmf(0, 5, 0.2) == pytest.approx(5 * log(0.8), abs=1e-12)

    def test_small_case_analytic(self):
        assert log_binomial_pmf(2, 3, 0.5) == pytest.approx(log(0.375), abs=1e-12)

    def test_matches_direct_product_oracle(self):
        # frozen from log(pmf_reference(3, 7, 0.78))
        assert log_binomial_pmf(3, 7, 0.78) == pytest.approx(
            -3.246546946925188, abs=1e-10
        )
        assert log(pmf_reference(3, 7, 0.78)) == pytest.approx(
            -3.246546946925188, abs=1e-12
        )

    def test_edge_probabilities(self):
        assert log_binomial_pmf(0, 5, 0.0) == 0.0
        assert log_binomial_pmf(1, 5, 0.0) == -math.inf
        assert log_binomial_pmf(5, 5, 1.0) == 0.0
        assert log_binomial_pmf(4, 5, 1.0) == -math.inf

    def test_preconditions(self):
        with pytest.raises(ValueError):
            log_binomial_pmf(6, 5, 0.5)
        with pytest.raises(ValueError):
            log_binomial_pmf(-1, 5, 0.5)
        with pytest.raises(ValueError):
            log_binomial_pmf(1, 5, 1.5)

    @pytest.mark.parametrize("n", [0, 1, 2, 5, 17, 50, 128, 200])
    @pytest.mark.parametrize("p", [0.0, 1e-6, 0.01, 0.1, 0.3, 0.5, 0.78, 0.9, 0.999999, 1.0])
    def test_normalization(self, n, p):
        total = sum(math.exp(log_binomial_pmf(k, n, p)) for k in range(n + 1))
        assert total == pytest.approx(1.0, abs=1e-9)


class TestLikelihoodRatio:
    def test_single_trial_link(self):
        assert likelihood_ratio(1, 1, 0.5, 0.25) == pytest.approx(log(2.0), abs=1e-12)

    def test_single_trial_no_link(self):
        assert likelihood_ratio(0, 1, 0.5, 0.25) == pytest.approx(
            log(0.5 / 0.75), abs=1e-12
        )

    def test_paper_scale_rates_match_oracle(self):
        # frozen from the direct pmf oracle at the reported content-class rates
        got = likelihood_ratio(2, 4, 0.78, 0.00016)
        assert got == pytest.approx(13.955815327207075, abs=1e-9)
        want = log(pmf_reference(2, 4, 0.78)) - log(pmf_reference(2, 4, 0.00016))
        assert got == pytest.approx(want, abs=1e-9)

    def test_zero_false_rate_saturates(self):
        assert likelihood_ratio(3, 5, 0.5, 0.0) == math.inf

    def test_zero_false_rate_no_links(self):
        assert likelihood_ratio(0, 4, 0.5, 0.0) == pytest.approx(4 * log(0.5), abs=1e-12)

    def test_strictly_increasing_in_k(self):
        for n in (1, 3, 10, 40):
            values = [likelihood_ratio(k, n, 0.78, 0.00016) for k in range(n + 1)]
            assert all(a < b for a, b in zip(values, values[1:]))

    def test_requires_ordered_rates(self):
        with pytest.raises(ValueError):
            likelihood_ratio(1, 2, 0.1, 0.5)


def two_segment_bitext():
    return build_bitext([("a b", "x y"), ("a c", "x z")])


class TestScoreTables:
    def test_initial_scores_drop_negative_associations(self):
        bt = two_segment_bitext()
        cooc = build_cooc(bt)
        table = build_initial_scores(cooc)
        for cls, scores in table.scores.items():
            for pair, value in scores.items():
                assert value >= 0.0
                assert pair in cooc.counts[cls]
        # (b, y) co-occurs only in its own segment, above independence
        b, y = bt.vocab_source.id_of("b"), bt.vocab_target.id_of("y")
        assert table.get("content", b, y) > 0.0

    def test_rebuild_k_equals_n_all_retained(self):
        bt = two_segment_bitext()
        cooc = build_cooc(bt)
        params = {
            "content": ClassParams("content", 0.78, 0.00016, 0.2, 0.25, 0.0),
        }
        # force k = n for every pair: claim each pair linked n times
        stats_full = LinkStats(
            counts={"content": dict(cooc.counts["content"])},
            class_totals={"content": sum(cooc.counts["content"].values())},
            total=sum(cooc.counts["content"].values()),
        )
        table = rebuild_scores(cooc, stats_full, params, cutoff=1.0)
        assert set(table.scores["content"]) == set(cooc.counts["content"])

    def test_rebuild_unlinked_long_pair_discarded(self):
        # k = 0, n = 50 at the reported content rates: log ratio is about
        # -75.7 (oracle), far below the cutoff
        bt = build_bitext([("a " * 50, "x " * 1)] )
        cooc = build_cooc(bt)
        params = {"content": ClassParams("content", 0.78, 0.00016, 0.2, 0.25, 0.0)}
        table = rebuild_scores(cooc, LinkStats(), params, cutoff=1.0)
        assert table.scores["content"] == {}

    def test_cutoff_monotone_filter(self):
        bt = two_segment_bitext()
        cooc = build_cooc(bt)
        initial = build_initial_scores(cooc)
        stats, _ = link_bitext(bt, initial)
        params = {"content": ClassParams("content", 0.78, 0.01, 0.2, 0.25, 0.0)}
        low = rebuild_scores(cooc, stats, params, cutoff=1.0)
        high = rebuild_scores(cooc, stats, params, cutoff=2.0)
        for cls in high.scores:
            assert set(high.scores[cls]) <= set(low.scores.get(cls, {}))

    def test_rebuild_skips_classes_without_params(self):
        bt = build_bitext(
            [("the dog", "le chien")],
            function_words_source={"the"},
            function_words_target={"le"},
        )
        cooc = build_cooc(bt)
        params = {"content": ClassParams("content", 0.78, 0.01, 0.2, 0.25, 0.0)}
        table = rebuild_scores(cooc, LinkStats(), params, cutoff=1.0)
        assert "function" not in table.scores

    def test_rebuild_rejects_nonpositive_cutoff(self):
        bt = two_segment_bitext()
        cooc = build_cooc(bt)
        with pytest.raises(ValueError):
            rebuild_scores(cooc, LinkStats(), {}, cutoff=0.0)
