import pytest
from hypothesis import given
from hypothesis import strategies as st

from bitlex.bitext import (
    CONTENT,
    FUNCTION,
    SOURCE,
    TokenizerOptions,
    assign_class,
    build_bitext,
    load_bitext,
    load_function_words,
    tokenize,
)
from bitlex.errors import InputError

from conftest import write_file


class TestTokenize:
    def test_whitespace_split(self):
        assert tokenize("the quick fox") == ["the", "quick", "fox"]

    def test_hyphen_splitting_on(self):
        assert tokenize("a-b c") == ["a", "b", "c"]

    def test_hyphen_splitting_off(self):
        opts = TokenizerOptions(split_hyphens=False)
        assert tokenize("a-b c", opts) == ["a-b", "c"]

    def test_lowercasing_default_on(self):
        assert tokenize("Hello WORLD") == ["hello", "world"]

    def test_lowercasing_off(self):
        opts = TokenizerOptions(lowercase=False)
        assert tokenize("Hello WORLD", opts) == ["Hello", "WORLD"]

    def test_punctuation_stripped_from_edges(self):
        assert tokenize('"hello," (world)!') == ["hello", "world"]

    def test_inner_punctuation_kept(self):
        assert tokenize("don't stop", TokenizerOptions(split_hyphens=False)) == [
            "don't",
            "stop",
        ]

    def test_pure_punctuation_dropped(self):
        assert tokenize("a . b ...") == ["a", "b"]


class TestAssignClass:
    def test_member_is_function(self):
        assert assign_class("the", SOURCE, {"the", "of"}) == FUNCTION

    def test_non_member_is_content(self):
        assert assign_class("maison", "target", {"the", "of"}) == CONTENT

    def test_empty_list_all_content(self):
        assert assign_class("of", SOURCE, frozenset()) == CONTENT


class TestLoadBitext:
    def test_three_identical_lines(self, tmp_path):
        src = write_file(tmp_path, "s.txt", "a b\na b\na b\n")
        tgt = write_file(tmp_path, "t.txt", "x y\nx y\nx y\n")
        bt = load_bitext(src, tgt)
        assert len(bt.segments) == 3
        assert bt.dropped_pairs == 0

    def test_line_count_mismatch(self, tmp_path):
        src = write_file(tmp_path, "s.txt", "".join(f"line {i}\n" for i in range(10)))
        tgt = write_file(tmp_path, "t.txt", "".join(f"ligne {i}\n" for i in range(9)))
        with pytest.raises(InputError) as exc:
            load_bitext(src, tgt)
        assert "10" in str(exc.value) and "9" in str(exc.value)

    def test_undecodable_bytes_names_line(self, tmp_path):
        src = tmp_path / "s.txt"
        src.write_bytes(b"good line\n\xff\xfe bad\n")
        tgt = write_file(tmp_path, "t.txt", "a\nb\n")
        with pytest.raises(InputError) as exc:
            load_bitext(src, tgt)
        assert "line 2" in str(exc.value)

    def test_empty_after_tokenization_dropped_and_counted(self, tmp_path):
        src = write_file(tmp_path, "s.txt", "a\n...\nb\n")
        tgt = write_file(tmp_path, "t.txt", "x\ny\nz\n")
        bt = load_bitext(src, tgt)
        assert len(bt.segments) == 2
        assert bt.dropped_pairs == 1

    def test_missing_trailing_newline_ok(self, tmp_path):
        src = write_file(tmp_path, "s.txt", "a\nb")
        tgt = write_file(tmp_path, "t.txt", "x\ny")
        assert len(load_bitext(src, tgt).segments) == 2

    def test_function_words_classify_types(self, tmp_path):
        src = write_file(tmp_path, "s.txt", "the dog\n")
        tgt = write_file(tmp_path, "t.txt", "le chien\n")
        bt = load_bitext(src, tgt, function_words_source={"the"}, function_words_target={"le"})
        vs, vt = bt.vocab_source, bt.vocab_target
        assert vs.class_of(vs.id_of("the")) == FUNCTION
        assert vs.class_of(vs.id_of("dog")) == CONTENT
        assert vt.class_of(vt.id_of("le")) == FUNCTION
        assert vt.class_of(vt.id_of("chien")) == CONTENT

    def test_reload_is_identical(self, tmp_path):
        src = write_file(tmp_path, "s.txt", "The quick-brown fox!\nover the lazy dog\n")
        tgt = write_file(tmp_path, "t.txt", "le renard brun\npar-dessus le chien\n")
        first = load_bitext(src, tgt, function_words_source={"the"})
        second = load_bitext(src, tgt, function_words_source={"the"})
        assert first.to_dict() == second.to_dict()


class TestInterning:
    def test_roundtrip_for_all_tokens(self):
        bt = build_bitext([("a b a c", "x y x"), ("c b", "y z")])
        for seg in bt.segments:
            for wid in seg.source_ids:
                assert bt.vocab_source.id_of(bt.vocab_source.surface_of(wid)) == wid
            for wid in seg.target_ids:
                assert bt.vocab_target.id_of(bt.vocab_target.surface_of(wid)) == wid

    def test_ids_dense(self):
        bt = build_bitext([("a b c", "x y"), ("d a", "z x")])
        assert sorted(
            bt.vocab_source.id_of(s) for s in ("a", "b", "c", "d")
        ) == [0, 1, 2, 3]

    @given(st.lists(st.text(alphabet="abcxyz", min_size=1, max_size=4), min_size=1, max_size=8))
    def test_interning_injective(self, words):
        line = " ".join(words)
        bt = build_bitext([(line, line)])
        vocab = bt.vocab_source
        ids = {s: vocab.id_of(s) for s in set(tokenize(line))}
        assert len(set(ids.values())) == len(ids)


class TestFunctionWordLists:
    def test_load_and_fold(self, tmp_path):
        path = write_file(tmp_path, "fw.txt", "The\nof\n\n  and  \n")
        assert load_function_words(path) == frozenset({"the", "of", "and"})

    def test_no_folding_when_lowercase_off(self, tmp_path):
        path = write_file(tmp_path, "fw.txt", "The\n")
        opts = TokenizerOptions(lowercase=False)
        assert load_function_words(path, opts) == frozenset({"The"})
