"""Corpus import, filtering and histogram tests."""

import io

import pytest
from hypothesis import given, strategies as st

from isochrono.corpus import (
    FilterPolicy,
    Segment,
    apply_filter,
    import_covost_tsv,
    load_submission,
    read_corpus_jsonl,
    token_histogram,
    write_corpus_jsonl,
)
from isochrono.errors import (
    AlignmentError,
    DuplicateIdError,
    SchemaError,
    UnknownIdError,
)


def tsv(rows: list[str], header: str = "id\tsentence\ttranslation\tup_votes\tdown_votes") -> io.BytesIO:
    return io.BytesIO(("\n".join([header] + rows) + "\n").encode("utf-8"))


def seg(seg_id="s1", tokens=20, up=3, down=0) -> Segment:
    return Segment(id=seg_id, source_text="w " * tokens, source_language="en",
                   up_votes=up, down_votes=down)


class TestTsvImport:
    def test_well_formed(self):
        segments = import_covost_tsv(tsv([
            "s1\thello world\thallo welt\t4\t0",
            "s2\tgood morning\tguten morgen\t2\t1",
        ]))
        assert [s.id for s in segments] == ["s1", "s2"]
        assert segments[0].up_votes == 4 and segments[1].down_votes == 1
        assert segments[0].reference_translation == "hallo welt"

    def test_token_count_computed(self):
        (segment,) = import_covost_tsv(tsv(["s1\ta b c\tx\t0\t0"]))
        assert segment.token_count == 3

    def test_path_used_as_id(self):
        (segment,) = import_covost_tsv(tsv(
            ["clip_001.mp3\thi\tsalut\t1\t0"],
            header="path\tsentence\ttranslation\tup_votes\tdown_votes"))
        assert segment.id == "clip_001.mp3"

    def test_missing_column(self):
        with pytest.raises(SchemaError, match="up_votes"):
            import_covost_tsv(tsv(["s1\thello\thallo\t0"],
                                  header="id\tsentence\ttranslation\tdown_votes"))

    def test_duplicate_id(self):
        with pytest.raises(DuplicateIdError, match="s1"):
            import_covost_tsv(tsv(["s1\ta\tb\t0\t0", "s1\tc\td\t0\t0"]))

    def test_malformed_utf8(self):
        with pytest.raises(SchemaError, match="byte offset"):
            import_covost_tsv(io.BytesIO(b"id\tsentence\ttranslation\tup_votes\tdown_votes\ns1\t\xff\tx\t0\t0\n"))

    def test_row_with_missing_cells(self):
        with pytest.raises(SchemaError, match="row 2"):
            import_covost_tsv(tsv(["s1\thello\thallo\t0"]))


class TestJsonlRoundtrip:
    def test_roundtrip_identity(self):
        segments = [seg("a", 5, 1, 0), seg("b", 25, 4, 2),
                    Segment(id="c", source_text="你好 世界", source_language="zh")]
        text = write_corpus_jsonl(segments)
        assert text.endswith("\n") and "\r" not in text
        assert read_corpus_jsonl(io.BytesIO(text.encode("utf-8"))) == segments

    @given(st.lists(st.tuples(st.integers(min_value=0, max_value=40),
                              st.integers(min_value=0, max_value=9),
                              st.integers(min_value=0, max_value=9)),
                    max_size=30))
    def test_roundtrip_property(self, rows):
        segments = [seg(f"s{i}", t, u, d) for i, (t, u, d) in enumerate(rows)]
        again = read_corpus_jsonl(io.BytesIO(
            write_corpus_jsonl(segments).encode("utf-8")))
        assert again == segments


class TestLoadSubmission:
    corpus = [seg("s1"), seg("s2"), seg("s3")]

    def test_text_mode_aligned(self):
        sub = load_submission(io.BytesIO(b"t1\nt2\nt3\n"), "sysA", ("en", "de"),
                              self.corpus, fmt="text")
        assert sub.translations == {"s1": "t1", "s2": "t2", "s3": "t3"}

    def test_text_mode_mismatch(self):
        with pytest.raises(AlignmentError, match="expected 3.*got 2"):
            load_submission(io.BytesIO(b"t1\nt2\n"), "sysA", ("en", "de"),
                            self.corpus, fmt="text")

    def test_jsonl_mode_partial(self):
        data = b'{"id": "s1", "text": "t1"}\n{"id": "s3", "text": "t3"}\n'
        sub = load_submission(io.BytesIO(data), "sysA", ("en", "de"),
                              self.corpus, fmt="jsonl")
        assert set(sub.translations) == {"s1", "s3"}

    def test_jsonl_unknown_id(self):
        data = b'{"id": "s9", "text": "t"}\n'
        with pytest.raises(UnknownIdError, match="s9"):
            load_submission(io.BytesIO(data), "sysA", ("en", "de"),
                            self.corpus, fmt="jsonl")


class TestApplyFilter:
    def test_boundary_kept(self):
        assert apply_filter([seg(tokens=20, up=3, down=0)], FilterPolicy()) != []

    def test_below_token_threshold_dropped(self):
        assert apply_filter([seg(tokens=19, up=5, down=0)], FilterPolicy()) == []

    def test_downvote_dropped(self):
        assert apply_filter([seg(tokens=30, up=3, down=1)], FilterPolicy()) == []

    def test_permissive_policy_is_identity(self):
        segments = [seg(f"s{i}", i, i % 4, i % 3) for i in range(10)]
        policy = FilterPolicy(min_tokens=0, min_upvotes=0, max_downvotes=10**9)
        assert apply_filter(segments, policy) == segments

    @given(st.lists(st.tuples(st.integers(0, 40), st.integers(0, 6), st.integers(0, 3)),
                    max_size=40))
    def test_idempotent(self, rows):
        segments = [seg(f"s{i}", *row) for i, row in enumerate(rows)]
        once = apply_filter(segments, FilterPolicy())
        assert apply_filter(once, FilterPolicy()) == once

    @given(st.lists(st.tuples(st.integers(0, 40), st.integers(0, 6), st.integers(0, 3)),
                    max_size=40),
           st.integers(0, 25), st.integers(0, 4), st.integers(0, 3))
    def test_weaker_policy_superset(self, rows, min_tokens, min_up, max_down):
        segments = [seg(f"s{i}", *row) for i, row in enumerate(rows)]
        strict = FilterPolicy(min_tokens=min_tokens + 1, min_upvotes=min_up + 1,
                              max_downvotes=max_down)
        weak = FilterPolicy(min_tokens=min_tokens, min_upvotes=min_up,
                            max_downvotes=max_down + 1)
        assert set(s.id for s in apply_filter(segments, strict)) <= \
               set(s.id for s in apply_filter(segments, weak))


class TestTokenHistogram:
    def test_hand_binned(self):
        segments = [seg("a", 3), seg("b", 5), seg("c", 21)]
        assert token_histogram(segments, bin_width=10) == [(0, 2), (10, 0), (20, 1)]

    def test_empty(self):
        assert token_histogram([], bin_width=5) == []

    @given(st.lists(st.integers(0, 60), min_size=1, max_size=50),
           st.integers(1, 12))
    def test_counts_partition(self, tokens, bin_width):
        segments = [seg(f"s{i}", t) for i, t in enumerate(tokens)]
        histogram = token_histogram(segments, bin_width=bin_width)
        assert sum(count for _, count in histogram) == len(segments)
        starts = [start for start, _ in histogram]
        assert starts == sorted(starts)

    def test_width_one_has_bin_per_count(self):
        segments = [seg("a", 2), seg("b", 2), seg("c", 4)]
        assert token_histogram(segments, bin_width=1) == [
            (0, 0), (1, 0), (2, 2), (3, 0), (4, 1)]
