import io
import random

import pytest

from bitlex.bitext import Bitext, build_bitext
from bitlex.cooc import build_cooc, dump_cooc_tsv
from bitlex.errors import InputError


def ids(bitext, side, *surfaces):
    vocab = bitext.vocab_source if side == "s" else bitext.vocab_target
    got = tuple(vocab.id_of(s) for s in surfaces)
    return got if len(got) > 1 else got[0]


class TestExamples:
    def test_single_segment_all_content(self):
        bt = build_bitext([("a b", "x")])
        table = build_cooc(bt)
        a, b = ids(bt, "s", "a", "b")
        x = ids(bt, "t", "x")
        assert table.counts["content"][(a, x)] == 1
        assert table.counts["content"][(b, x)] == 1
        assert table.total == 2

    def test_repeated_tokens_multiply(self):
        bt = build_bitext([("a a", "x x")])
        table = build_cooc(bt)
        a = ids(bt, "s", "a")
        x = ids(bt, "t", "x")
        assert table.counts["content"][(a, x)] == 4

    def test_strict_policy_never_crosses_classes(self):
        bt = build_bitext(
            [("the dog", "le chien")],
            function_words_source={"the"},
            function_words_target={"le"},
        )
        table = build_cooc(bt)
        the = ids(bt, "s", "the")
        dog = ids(bt, "s", "dog")
        le = ids(bt, "t", "le")
        chien = ids(bt, "t", "chien")
        assert table.counts["function"] == {(the, le): 1}
        assert table.counts["content"] == {(dog, chien): 1}
        assert table.total == 2

    def test_unknown_policy_rejected(self):
        bt = build_bitext([("a", "x")])
        with pytest.raises(ValueError):
            build_cooc(bt, policy="loose")

    def test_empty_bitext_rejected(self):
        bt = build_bitext([("...", "x")])  # the only pair is dropped
        with pytest.raises(InputError):
            build_cooc(bt)


def random_bitext(rng, segments=40, vocab=12):
    pairs = []
    for _ in range(segments):
        src = " ".join(f"s{rng.randrange(vocab)}" for _ in range(rng.randrange(1, 8)))
        tgt = " ".join(f"t{rng.randrange(vocab)}" for _ in range(rng.randrange(1, 8)))
        pairs.append((src, tgt))
    fw_src = {f"s{i}" for i in range(3)}
    fw_tgt = {f"t{i}" for i in range(3)}
    return build_bitext(pairs, function_words_source=fw_src, function_words_target=fw_tgt)


class TestInvariants:
    def test_marginal_consistency_by_full_summation(self):
        bt = random_bitext(random.Random(5))
        table = build_cooc(bt)
        for cls in table.classes():
            by_u = {}
            by_v = {}
            for (u, v), n in table.counts[cls].items():
                by_u[u] = by_u.get(u, 0) + n
                by_v[v] = by_v.get(v, 0) + n
            assert by_u == table.source_marginals[cls]
            assert by_v == table.target_marginals[cls]
            assert sum(table.counts[cls].values()) == table.class_totals[cls]
        assert sum(table.class_totals.values()) == table.total

    def test_pair_counts_bounded_by_marginals(self):
        bt = random_bitext(random.Random(6))
        table = build_cooc(bt)
        for cls in table.classes():
            for (u, v), n in table.counts[cls].items():
                assert n <= table.source_marginals[cls][u]
                assert n <= table.target_marginals[cls][v]

    def test_segment_order_invariance(self):
        rng = random.Random(7)
        bt = random_bitext(rng)
        shuffled_segments = list(bt.segments)
        rng.shuffle(shuffled_segments)
        bt2 = Bitext(shuffled_segments, bt.vocab_source, bt.vocab_target, bt.options)
        t1, t2 = build_cooc(bt), build_cooc(bt2)
        assert t1.counts == t2.counts
        assert t1.source_marginals == t2.source_marginals
        assert t1.class_totals == t2.class_totals

    def test_length_cap_skips_and_reports(self):
        long_line = " ".join(f"w{i}" for i in range(120))
        bt = build_bitext([("a", "x"), (long_line, "y")])
        table = build_cooc(bt, max_segment_len=100)
        assert table.skipped_segments == 1
        assert table.total == 1


class TestDump:
    def test_tsv_rows_sorted(self):
        bt = build_bitext([("b a", "y x")])
        table = build_cooc(bt)
        buf = io.StringIO()
        dump_cooc_tsv(table, bt, buf)
        lines = buf.getvalue().splitlines()
        assert lines == sorted(lines)
        assert lines[0].split("\t") == ["content", "a", "x", "1"]
        assert len(lines) == 4
