import numpy as np
import pytest

from polarjscd.trie import DictTrie, build_trie

TOY_COUNTS = {"an": 2, "ant": 1, "at": 1}


def toy_trie():
    return build_trie(TOY_COUNTS)


def test_toy_counts_on_every_node():
    trie = toy_trie()
    root = trie.root
    assert root.count == 4
    a = root.children["a"]
    assert a.count == 4 and not a.is_word
    an = a.children["n"]
    assert an.count == 3
    assert an.children[" "].count == 2 and an.children[" "].is_word
    ant = an.children["t"]
    assert ant.count == 1
    assert ant.children[" "].count == 1 and ant.children[" "].is_word
    at = a.children["t"]
    assert at.count == 1
    assert at.children[" "].count == 1 and at.children[" "].is_word
    assert set(root.children) == {"a"}


def test_token_stream_matches_count_mapping():
    from_tokens = build_trie(["an", "an", "ant", "at"])
    assert list(from_tokens.words()) == list(toy_trie().words())


def test_insert_order_does_not_matter(tmp_path):
    rng = np.random.default_rng(3)
    items = [("an", 2), ("ant", 1), ("at", 1), ("zebra", 5), ("zeal", 2)]
    dumps = []
    for _ in range(4):
        order = rng.permutation(len(items))
        trie = DictTrie()
        for idx in order:
            word, count = items[idx]
            trie.insert(word + " ", count)
        path = tmp_path / f"t{len(dumps)}.tsv"
        trie.dump(path)
        dumps.append(path.read_text())
    assert len(set(dumps)) == 1


def test_internal_counts_equal_child_sums():
    rng = np.random.default_rng(17)
    words = ["".join(rng.choice(list("abcdef"), size=rng.integers(1, 9)))
             for _ in range(300)]
    trie = build_trie({w: int(rng.integers(1, 20)) for w in set(words)})
    stack = [trie.root]
    while stack:
        node = stack.pop()
        if node.children:
            assert node.count == sum(c.count for c in node.children.values())
        else:
            assert node.is_word
        stack += list(node.children.values())


def test_word_probabilities():
    trie = toy_trie()
    assert trie.word_probability("an") == 0.5
    assert trie.word_probability("an ") == 0.5
    assert trie.word_probability("ant") == 0.25
    assert trie.word_probability("at") == 0.25
    assert trie.word_probability("a") == 0.0  # prefix, not a stored word
    assert trie.word_probability("zebra") == 0.0
    assert sum(c for _, c in trie.words()) == trie.total
    assert sum(trie.word_probability(w) for w, _ in trie.words()) == 1.0


def test_words_listing_sorted():
    assert list(toy_trie().words()) == [("an", 2), ("ant", 1), ("at", 1)]
    assert toy_trie().distinct_words() == 3


def test_dump_load_round_trip(tmp_path):
    rng = np.random.default_rng(29)
    words = {"".join(rng.choice(list("abcdefgh"), size=rng.integers(1, 12))):
             int(rng.integers(1, 50)) for _ in range(200)}
    trie = build_trie(words)
    path = tmp_path / "dict.tsv"
    trie.dump(path)
    loaded = DictTrie.load(path)
    assert loaded.total == trie.total
    assert list(loaded.words()) == list(trie.words())
    path2 = tmp_path / "dict2.tsv"
    loaded.dump(path2)
    assert path.read_text() == path2.read_text()


def test_dump_format(tmp_path):
    trie = build_trie({"an": 2, "at": 1})
    path = tmp_path / "dict.tsv"
    trie.dump(path)
    assert path.read_text() == (
        "1\ta\t3\t0\n"
        "2\tn\t2\t0\n"
        "3\t \t2\t1\n"
        "2\tt\t1\t0\n"
        "3\t \t1\t1\n"
    )


def test_insert_validation():
    trie = DictTrie()
    with pytest.raises(ValueError):
        trie.insert("an")  # no terminator
    with pytest.raises(ValueError):
        trie.insert("a n ")  # interior space
    with pytest.raises(ValueError):
        trie.insert("a1 ")  # symbol outside alphabet
    with pytest.raises(ValueError):
        trie.insert("an ", 0)
    with pytest.raises(ValueError):
        DictTrie(alphabet="abc")  # no terminator in alphabet


def test_load_rejects_malformed(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("1\ta\tx\t0\n")
    with pytest.raises(ValueError):
        DictTrie.load(bad)
    bad.write_text("3\ta\t1\t0\n")  # depth jumps past the stack
    with pytest.raises(ValueError):
        DictTrie.load(bad)


def test_trace_dict_filters_children():
    from polarjscd.trie import trace_dict

    trie = toy_trie()
    a = trie.root.children["a"]
    hits = trace_dict(trie, a, frozenset("an"))
    assert set(hits) == {"n"} and hits["n"].count == 3
    assert trace_dict(trie, a, frozenset()) == {}
    everything = trace_dict(trie, trie.root, frozenset("abcdefghijklmnopqrstuvwxyz "))
    assert everything == trie.root.children


def test_node_level_word_probability():
    from polarjscd.trie import word_probability

    trie = toy_trie()
    assert word_probability(trie, trie.root) == 1.0
    an_end = trie.root.children["a"].children["n"].children[" "]
    assert word_probability(trie, an_end) == 0.5
    at_end = trie.root.children["a"].children["t"].children[" "]
    assert word_probability(trie, at_end) == 0.25


def test_build_trie_accepts_terminated_words():
    plain = build_trie(["an", "an", "ant", "at"])
    terminated = build_trie(["an ", "an ", "ant ", "at "])
    assert list(plain.words()) == list(terminated.words())
