import pytest
from hypothesis import given, strategies as st

from facadex.bench import (
    DELIMITERS,
    generate_scaled_array,
    median_by_size,
    rows_to_csv,
    scale_harness,
    token_stats,
    tokenize,
)
from facadex.errors import ConfigError, ResourceLimitError


class TestTokenize:
    def test_query_text(self):
        # "SELECT" "?x" "?x" "a" "?y" — braces and spaces delimit
        assert tokenize("SELECT ?x {?x a ?y}") == ["SELECT", "?x", "?x", "a", "?y"]

    def test_adjacent_delimiters_produce_no_empty_tokens(self):
        assert tokenize("a,,;  a;a") == ["a", "a", "a"]

    def test_empty_text(self):
        assert tokenize("") == []
        assert tokenize(DELIMITERS) == []

    def test_every_delimiter_splits(self):
        for d in DELIMITERS:
            assert tokenize(f"a{d}b") == ["a", "b"]

    @given(st.text(max_size=200))
    def test_tokens_contain_no_delimiters(self, text):
        for token in tokenize(text):
            assert token
            assert not set(token) & set(DELIMITERS)

    @given(st.text(max_size=200))
    def test_retokenizing_a_join_is_idempotent(self, text):
        tokens = tokenize(text)
        assert tokenize(" ".join(tokens)) == tokens


class TestTokenStats:
    def test_single_file(self):
        stats = token_stats([("q", "SELECT ?x {?x a ?y}")])
        assert (stats.total, stats.distinct) == (5, 4)
        assert stats.per_file == (("q", 5, 4),)
        assert (stats.avg_total, stats.avg_distinct) == (5.0, 4.0)

    def test_averages_over_disjoint_sizes(self):
        stats = token_stats([("a", "x y"), ("b", "p q r s")])
        assert stats.avg_total == 3.0
        assert stats.avg_distinct == 3.0
        assert stats.total == 6 and stats.distinct == 6

    def test_global_distinct_dedupes_across_files(self):
        stats = token_stats([("a", "x y"), ("b", "y z")])
        assert stats.total == 4 and stats.distinct == 3

    def test_no_files_is_an_error(self):
        with pytest.raises(ConfigError):
            token_stats([])

    @given(st.lists(st.text(max_size=80), min_size=1, max_size=5))
    def test_distinct_never_exceeds_total(self, texts):
        stats = token_stats([(str(i), t) for i, t in enumerate(texts)])
        assert stats.distinct <= stats.total
        for _, total, distinct in stats.per_file:
            assert distinct <= total


class TestScaleHarness:
    QUERY = (
        "PREFIX xyz: <http://sparql.xyz/facade-x/data/>\n"
        "SELECT ?id { SERVICE <x-sparql-anything:location=%LOCATION%>"
        " { [] xyz:id ?id } }"
    )

    def test_generate_scaled_array_stamps_ids(self):
        arr = generate_scaled_array({"name": "n"}, 3)
        assert arr == [
            {"name": "n", "id": 1},
            {"name": "n", "id": 2},
            {"name": "n", "id": 3},
        ]

    def test_rows_shape(self):
        rows = scale_harness({"name": "n"}, [2, 5], self.QUERY, runs=2)
        assert [(s, r) for s, r, _ in rows] == [
            (2, 1), (2, 2), (5, 1), (5, 2)
        ]
        assert all(elapsed > 0 for _, _, elapsed in rows)

    def test_placeholder_required(self):
        with pytest.raises(ConfigError):
            scale_harness({}, [1], "SELECT * { ?s ?p ?o }")

    def test_byte_budget(self):
        with pytest.raises(ResourceLimitError):
            scale_harness({"pad": "x" * 100}, [10], self.QUERY, byte_budget=64)

    def test_median_by_size(self):
        rows = [(10, 1, 3.0), (10, 2, 9.0), (10, 3, 5.0), (2, 1, 1.0)]
        assert median_by_size(rows) == [(2, 1.0), (10, 5.0)]

    def test_rows_to_csv(self):
        out = rows_to_csv([(10, 1, 1.2345)])
        assert out == "size,run,elapsed_ms\n10,1,1.234\n"
