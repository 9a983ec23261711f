import math
import random

import pytest
from hypothesis import given, strategies as st

from uniprod.treeseq import LcpCodec, build_tree_sequence, lambda_default


def random_rows(rng: random.Random, h: int, universe: int = 60) -> list:
    return [rng.sample(range(universe), rng.randint(1, 12)) for _ in range(h)]


def test_lambda_default_values():
    assert lambda_default(2) == 1
    assert lambda_default(16) == 3  # ceil(sqrt(4 * 2))
    assert lambda_default(1 << 10) >= lambda_default(1 << 6)
    with pytest.raises(ValueError):
        lambda_default(1)


def test_codec_width():
    assert LcpCodec(1).width == 1
    assert LcpCodec(7).width == 3
    assert LcpCodec(8).width == 4
    with pytest.raises(ValueError):
        LcpCodec(0)


@given(st.text(alphabet="01", max_size=20), st.text(alphabet="01", max_size=20))
def test_codec_roundtrip(before, after):
    codec = LcpCodec(20)
    nu = codec.encode(before, after)
    assert codec.decode(before, nu) == after
    assert len(nu) == codec.code_len(before, after)


def test_codec_decode_is_total_on_wellformed_codes():
    codec = LcpCodec(6)
    # a code produced against one string still decodes against another;
    # the result just keeps the other string's prefix
    nu = codec.encode("000111", "000110")
    assert codec.decode("111111", nu) == "111110"
    with pytest.raises(ValueError):
        codec.decode("0", nu[: codec.width - 1])


def test_codec_clamps_long_prefixes():
    codec = LcpCodec(2)  # width 2 -> lcp field caps at 3
    before = "010101"
    nu = codec.encode(before, before)
    assert codec.decode(before, nu) == before
    assert len(nu) == codec.width + len(before) - 3


def test_tree_sequence_trees_cover_consecutive_rows():
    rng = random.Random(5)
    for trial in range(50):
        rows = random_rows(rng, rng.randint(1, 8))
        ts = build_tree_sequence(rows)
        ts.check()
        for y in range(ts.h):
            keys = set(ts.trees[y].keys())
            assert set(rows[y]) <= keys
            if y + 1 < ts.h:
                assert set(rows[y + 1]) <= keys


def test_tree_sequence_total_size_bound():
    rng = random.Random(6)
    for trial in range(50):
        rows = random_rows(rng, rng.randint(1, 8))
        ts = build_tree_sequence(rows)
        assert sum(len(t) for t in ts.trees) <= 4 * sum(len(r) for r in rows)


def test_tree_sequence_height_slack():
    rng = random.Random(7)
    for trial in range(50):
        rows = random_rows(rng, rng.randint(1, 8))
        ts = build_tree_sequence(rows)
        for t in ts.trees:
            assert t.height <= math.log2(len(t)) + ts.lambda_height


def test_transition_codes_decode_to_next_signature():
    rng = random.Random(8)
    for trial in range(50):
        rows = random_rows(rng, rng.randint(2, 8))
        ts = build_tree_sequence(rows)
        for y in range(1, ts.h):
            t0, t1 = ts.trees[y - 1], ts.trees[y]
            shared = set(t0.keys()) & set(t1.keys())
            assert set(rows[y]) <= shared
            for z in shared:
                nu = ts.transition_code(y, z)
                assert len(nu) <= ts.max_code_len
                assert ts.codec.decode(t0.signature(z), nu) == t1.signature(z)


def test_transition_code_errors():
    ts = build_tree_sequence([[1, 2], [2, 3]])
    with pytest.raises(IndexError):
        ts.transition_code(2, 2)
    with pytest.raises(KeyError):
        ts.transition_code(1, 99)


def test_build_rejects_empty_rows():
    with pytest.raises(ValueError):
        build_tree_sequence([])
    with pytest.raises(ValueError):
        build_tree_sequence([[1], []])
