import math

import numpy as np
import pytest

from polarjscd.huffman import HuffmanTree, SymbolDistribution, build_huffman

TOY_CODE = {"a": "00", "n": "01", "t": "10", " ": "11"}


def random_distribution(rng, max_symbols=27):
    size = rng.integers(2, max_symbols + 1)
    symbols = rng.choice(list("abcdefghijklmnopqrstuvwxyz "), size=size, replace=False)
    probs = rng.random(size) + 1e-3
    probs /= probs.sum()
    return SymbolDistribution(tuple(symbols), probs)


def test_dyadic_example_lengths():
    dist = SymbolDistribution(("a", "b", "c"), np.array([0.5, 0.25, 0.25]))
    tree = build_huffman(dist)
    assert tree.codes() == {"a": "0", "b": "10", "c": "11"}
    assert tree.mean_length(dist) == 1.5
    assert dist.entropy() == 1.5  # dyadic: code length meets entropy exactly


def test_uniform_four_symbols():
    dist = SymbolDistribution(("a", "b", "c", "d"), np.full(4, 0.25))
    tree = build_huffman(dist)
    assert tree.codes() == {"a": "00", "b": "01", "c": "10", "d": "11"}


def test_tie_break_is_deterministic():
    # ties are resolved by the smallest contained symbol; the smaller
    # subtree becomes the left child
    dist = SymbolDistribution.from_counts({"a": 4, "n": 3, "t": 2, " ": 4})
    tree = build_huffman(dist)
    assert tree.codes() == {"t": "00", "n": "01", " ": "10", "a": "11"}


def test_kraft_sum_is_exactly_one():
    rng = np.random.default_rng(7)
    for _ in range(50):
        tree = build_huffman(random_distribution(rng))
        assert tree.kraft_sum() == 1.0


def test_mean_length_within_one_bit_of_entropy():
    rng = np.random.default_rng(11)
    for _ in range(200):
        dist = random_distribution(rng)
        tree = build_huffman(dist)
        h = dist.entropy()
        mean = tree.mean_length(dist)
        assert h - 1e-12 <= mean < h + 1.0
        assert math.isclose(mean, tree.mean_length(), rel_tol=1e-12)


def test_round_trip_random_texts():
    rng = np.random.default_rng(23)
    for _ in range(300):
        dist = random_distribution(rng)
        tree = build_huffman(dist)
        text = "".join(rng.choice(dist.symbols, size=rng.integers(0, 60)))
        bits = tree.encode(text)
        decoded, residual = tree.decode(bits)
        assert decoded == text
        assert residual.size == 0


def test_decode_returns_partial_codeword_residual():
    tree = HuffmanTree.from_code_table(TOY_CODE)
    bits = tree.encode("ant")
    decoded, residual = tree.decode(bits[:-1])
    assert decoded == "an"
    assert list(residual) == [1]  # first bit of the "t" codeword


def test_sym_sets_partition_at_every_node():
    rng = np.random.default_rng(5)
    for _ in range(20):
        dist = random_distribution(rng)
        tree = build_huffman(dist)
        stack = [tree.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                assert node.sym_set == frozenset((node.symbol,))
                continue
            assert node.sym_set == node.left.sym_set | node.right.sym_set
            assert not (node.left.sym_set & node.right.sym_set)
            stack += [node.left, node.right]
        assert tree.root.sym_set == frozenset(dist.symbols)


def test_fixed_code_table():
    tree = HuffmanTree.from_code_table(TOY_CODE)
    assert tree.codes() == TOY_CODE
    assert tree.kraft_sum() == 1.0
    assert tree.root.p == 1.0
    bits = tree.encode("ant ")
    assert list(bits) == [0, 0, 0, 1, 1, 0, 1, 1]
    decoded, residual = tree.decode(bits)
    assert decoded == "ant "
    assert residual.size == 0


def test_code_table_file_round_trip(tmp_path):
    dist = SymbolDistribution.from_counts({"a": 4, "n": 3, "t": 2, " ": 4})
    tree = build_huffman(dist)
    path = tmp_path / "code.tsv"
    tree.save_code_table(path)
    loaded = HuffmanTree.load_code_table(path)
    assert loaded.codes() == tree.codes()


def test_from_code_table_rejects_bad_codes():
    with pytest.raises(ValueError):
        HuffmanTree.from_code_table({"a": "0", "b": "01"})  # not prefix-free
    with pytest.raises(ValueError):
        HuffmanTree.from_code_table({"a": "0", "b": "10"})  # incomplete
    with pytest.raises(ValueError):
        HuffmanTree.from_code_table({})
    with pytest.raises(ValueError):
        HuffmanTree.from_code_table({"a": "0", "b": "1x"})


def test_input_validation():
    with pytest.raises(ValueError):
        SymbolDistribution(("a", "b"), np.array([0.7, 0.2]))
    with pytest.raises(ValueError):
        SymbolDistribution(("a", "a"), np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        SymbolDistribution(("a", "b"), np.array([1.2, -0.2]))
    with pytest.raises(ValueError):
        build_huffman(SymbolDistribution(("a",), np.array([1.0])))
    with pytest.raises(ValueError):
        SymbolDistribution.from_counts({"a": 0})
    tree = HuffmanTree.from_code_table(TOY_CODE)
    with pytest.raises(ValueError):
        tree.encode("and")  # "d" has no code


def test_module_level_encode_decode():
    from polarjscd.huffman import huffman_decode, huffman_encode

    tree = HuffmanTree.from_code_table(TOY_CODE)
    bits = huffman_encode(tree, "ant ")
    assert np.array_equal(bits, tree.encode("ant "))
    assert huffman_encode(tree, "").size == 0
    text, residual = huffman_decode(tree, bits)
    assert text == "ant " and residual.size == 0
    text, residual = huffman_decode(tree, np.zeros(0, dtype=np.int8))
    assert text == "" and residual.size == 0


def test_decoding_is_instantaneous():
    # feeding the stream in chunks (carrying residuals forward) gives the
    # same symbols as decoding it whole
    rng = np.random.default_rng(31)
    for _ in range(40):
        dist = random_distribution(rng)
        tree = build_huffman(dist)
        text = "".join(rng.choice(dist.symbols, size=30))
        bits = tree.encode(text)
        whole, whole_residual = tree.decode(bits)
        pieces = []
        carry = np.zeros(0, dtype=np.int8)
        cuts = sorted(rng.integers(0, bits.size + 1, size=3))
        for lo, hi in zip([0] + cuts, cuts + [bits.size]):
            part, carry = tree.decode(np.concatenate([carry, bits[lo:hi]]))
            pieces.append(part)
        assert "".join(pieces) == whole == text
        assert np.array_equal(carry, whole_residual)
