"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Lines are collected in the terminal summary ("acceptance criteria" section)
and also echoed to stdout, so ``pytest -s tests/test_acceptance.py`` shows
them inline.
"""

import random
import subprocess
import sys
import textwrap
import time

import numpy as np
import pytest
from corpora import brute_force_top_k, dfs_reachable_set, random_corpus

from sensehyper.cli import main
from sensehyper.dense import (
    DenseItem,
    EmbeddingStore,
    ItemKind,
    VectorIndex,
    build_index,
    embed_label,
    embed_synset,
    extend_labels,
    load_embeddings,
    match_all,
    match_label,
)
from sensehyper.evaluation import WordReachability, evaluate
from sensehyper.labeling import (
    HypernymLabel,
    build_labels,
    compute_tfidf,
    label_synsets,
    truncate_top_n,
)
from sensehyper.lexicon import (
    IsARelation,
    Sense,
    SenseInventory,
    SenseTaxonomy,
    Synset,
    dump_synsets,
    load_isa,
    load_synsets,
)
from sensehyper.sparse_wsd import disambiguate_all, disambiguate_hypernym

# (2/3) * ln(3/2), written out by hand to 29 digits
TFIDF_FRUIT_S1 = 0.27031007207210958798534207697


@pytest.fixture
def criterion(record_property):
    """Time the body, then record and print one PASS/FAIL line."""

    class Gate:
        def __init__(self):
            self.checks = []

        def check(self, ok, what):
            self.checks.append((bool(ok), what))

        def finish(self, number, title, start, limit):
            elapsed = time.perf_counter() - start
            self.check(elapsed < limit, f"runtime {elapsed:.2f}s < {limit}s")
            failed = [what for ok, what in self.checks if not ok]
            status = "FAIL" if failed else "PASS"
            line = f"{status} criterion {number}: {title} ({elapsed:.2f}s)"
            if failed:
                line += " | failed: " + "; ".join(failed)
            record_property("acceptance", line)
            print(line)
            assert not failed, line

    return Gate()


def syn(sid, *tokens):
    return Synset(sid, tuple(Sense.parse(t) if "#" in t else Sense(t, 1) for t in tokens))


def item(kind, owner, *vec):
    return DenseItem(kind, owner, np.array(vec, dtype=float), 1.0)


def test_criterion_1_tfidf(criterion):
    start = time.perf_counter()
    inv = SenseInventory([syn("S1", "cherry", "red fruit"), syn("S2", "plum"), syn("S3", "oak")])
    rel = IsARelation.from_pairs([("cherry", "fruit"), ("red fruit", "fruit"), ("cherry", "color"),
                                  ("plum", "fruit"), ("oak", "tree")])
    labels = compute_tfidf(build_labels(inv, rel))
    got = labels["S1"].tfidf["fruit"]
    criterion.check(abs(got - TFIDF_FRUIT_S1) <= 1e-12, f"tfidf(fruit,S1)={got!r}")
    everywhere = compute_tfidf(build_labels(
        SenseInventory([syn("a", "x"), syn("b", "y")]),
        IsARelation.from_pairs([("x", "thing"), ("y", "thing"), ("y", "z")]),
    ))
    criterion.check(everywhere["a"].tfidf["thing"] == 0.0 and everywhere["b"].tfidf["thing"] == 0.0,
                    "everywhere-present hypernym weighs exactly 0")
    criterion.finish(1, "tf-idf oracle", start, 1.0)


def test_criterion_2_cherry_wsd(criterion):
    start = time.perf_counter()
    inv = SenseInventory([
        syn("src", "sweet cherry#1", "morello#1"),
        syn("c1", "cherry#1", "red fruit#1", "fruit#1"),
        syn("c2", "cherry#2", "cerise#1", "cherry red#1"),
    ])
    label = truncate_top_n(HypernymLabel("src", {"fruit": 1, "food": 1, "cherry": 1},
                                         {"fruit": 1.0, "food": 1.0, "cherry": 1.0}), 3)
    src = inv["src"]
    cherry = disambiguate_hypernym("cherry", label, src, inv)
    fruit = disambiguate_hypernym("fruit", label, src, inv)
    criterion.check(cherry == Sense("cherry", 1), f"cherry -> {cherry}")
    criterion.check(fruit == Sense("fruit", 1), f"fruit -> {fruit}")
    criterion.finish(2, "sparse WSD picks the first cherry/fruit sense", start, 1.0)


def test_criterion_3_pooling(criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    words = [f"v{i}" for i in range(12)]
    store = EmbeddingStore(words, rng.normal(size=(12, 16)).astype(np.float32))
    single = embed_synset(syn("s", "v4"), store).vector
    criterion.check(np.array_equal(single, store.get("v4")), "singleton synset vector")
    lab = truncate_top_n(HypernymLabel("s", {"v7": 3}, {"v7": 0.731}), 3)
    criterion.check(np.array_equal(embed_label(lab, store).vector, store.get("v7")), "single-hypernym label vector")
    weights = {w: float(rng.uniform(0.05, 3.0)) for w in words}
    members = words[:9]
    ref_syn = embed_synset(syn("s", *members), store).vector
    ref_lab = embed_label(truncate_top_n(HypernymLabel("s", {w: 1 for w in weights}, weights), 12), store).vector
    stable = True
    for _ in range(100):
        order = list(rng.permutation(members))
        keys = list(rng.permutation(words))
        shuffled = truncate_top_n(HypernymLabel("s", {w: 1 for w in keys}, {w: weights[w] for w in keys}), 12)
        stable &= np.array_equal(embed_synset(syn("s", *order), store).vector, ref_syn)
        stable &= np.array_equal(embed_label(shuffled, store).vector, ref_lab)
    criterion.check(stable, "permutation invariance over 100 shuffles")
    criterion.finish(3, "pooling identities", start, 5.0)


def test_criterion_4_knn_exact(criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(4)
    vectors = rng.normal(size=(1000, 10))
    index = VectorIndex([item(ItemKind.SYNSET, str(i), *v) for i, v in enumerate(vectors)])
    unit = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
    mismatches = 0
    for q in rng.normal(size=(500, 10)):
        k = int(rng.integers(1, 6))
        got = [i for i, _ in index.query(q, k)]
        # exhaustive scan in plain numpy, ties by position
        sims = unit @ (q / np.linalg.norm(q))
        expected = sorted(range(1000), key=lambda i: (-sims[i], i))[:k]
        mismatches += got != expected
    criterion.check(mismatches == 0, f"{mismatches} mismatching queries")
    sample = rng.normal(size=10)
    criterion.check([i for i, _ in index.query(sample, 5)] == brute_force_top_k(vectors, sample, 5),
                    "pure-python scan agrees")
    criterion.finish(4, "exact kNN on 1000 items x 500 queries", start, 10.0)


def test_criterion_5_match_filters(criterion):
    start = time.perf_counter()
    big = syn("big", *[f"b{i}" for i in range(21)])
    inv = SenseInventory([syn("s", "a"), syn("t", "x"), big, syn("ok", "o")])
    # own synset, another label and a 21-word synset all outrank the admissible one
    index = build_index(
        [item(ItemKind.SYNSET, "s", 1.0, 0.0), item(ItemKind.SYNSET, "big", 0.99, 0.1),
         item(ItemKind.SYNSET, "ok", 0.5, 0.9)],
        [item(ItemKind.LABEL, "s", 1.0, 0.02), item(ItemKind.LABEL, "t", 1.0, 0.03)],
    )
    settings = [(k, m, post) for k in range(1, 6) for m in (1, 20, 21) for post in (False, True)]
    returned = [match_label(inv["s"], index, inv, k, m, post) for k, m, post in settings]
    criterion.check(all(r is None or r.synset_id in ("big", "ok") for r in returned),
                    "no label item or self returned")
    criterion.check(all(r is None or len(r) <= m for r, (_, m, _) in zip(returned, settings)),
                    "every returned synset fits m")
    criterion.check(match_label(inv["s"], index, inv, 3, 20) is None, "|S|=21 rejected at m=20")
    criterion.check(match_label(inv["s"], index, inv, 3, 21) == big, "|S|=21 accepted at m=21")
    criterion.check(match_label(inv["s"], index, inv, 1, 20) is None, "self consumes the only slot")
    criterion.check(match_label(inv["s"], index, inv, 4, 20) is None, "oversized best survivor is not replaced")
    small = build_index(
        [item(ItemKind.SYNSET, "s", 1.0, 0.0), item(ItemKind.SYNSET, "ok", 0.5, 0.9)],
        [item(ItemKind.LABEL, "s", 1.0, 0.02), item(ItemKind.LABEL, "t", 1.0, 0.03)],
    )
    criterion.check(match_label(inv["s"], small, inv, 2, 20) is None, "label and self fill k=2")
    criterion.check(match_label(inv["s"], small, inv, 3, 20) == inv["ok"], "admissible synset found at k=3")
    criterion.finish(5, "dense match filters", start, 1.0)


def test_criterion_6_full_contains_sparse(criterion, toy):
    start = time.perf_counter()
    corpora = [(load_synsets(toy / "synsets.tsv"), load_isa(toy / "isa.tsv"),
                load_embeddings(toy / "embeddings.txt"))]
    corpora += [random_corpus(seed, n_synsets=int(np.random.default_rng(seed).integers(5, 51)))
                for seed in range(50)]
    violations = 0
    for inv, rel, store in corpora:
        labels = label_synsets(inv, rel, 3)
        sparse = disambiguate_all(labels, inv)
        for k, m in ((1, 15), (3, 2)):
            full = extend_labels(sparse, match_all(inv, labels, store, k, m).matches)
            violations += sum(not sparse[sid].hypernym_senses <= full[sid].hypernym_senses for sid in sparse)
    criterion.check(violations == 0, f"{violations} synsets lost sparse senses")
    criterion.finish(6, "Full contains Sparse on toy + 50 random corpora", start, 30.0)


def test_criterion_7_golden_cli(criterion, toy, tmp_path):
    start = time.perf_counter()
    for mode in ("sparse", "full"):
        out = tmp_path / f"{mode}.tsv"
        code = main(["run", "--mode", mode, "--synsets", str(toy / "synsets.tsv"), "--isa", str(toy / "isa.tsv"),
                     "--embeddings", str(toy / "embeddings.txt"), "--output", str(out)])
        criterion.check(code == 0, f"{mode} exit code {code}")
        criterion.check(out.exists() and out.read_bytes() == (toy / f"expected_{mode}.tsv").read_bytes(),
                        f"{mode} output byte-identical")
    criterion.finish(7, "golden CLI runs", start, 2.0)


def _random_digraph(rng):
    n_nodes = rng.randint(1, 200)
    n_words = rng.randint(max(1, n_nodes // 2), n_nodes)
    nodes = [Sense(f"w{rng.randrange(n_words)}", i + 1) for i in range(n_nodes)]
    n_edges = rng.randint(0, 3 * n_nodes)
    return SenseTaxonomy((rng.choice(nodes), rng.choice(nodes)) for _ in range(n_edges)), nodes


def test_criterion_8_evaluation(criterion):
    start = time.perf_counter()
    rng = random.Random(8)
    disagreements = 0
    for _ in range(100):
        g, nodes = _random_digraph(rng)
        adjacency = {s: set() for s in nodes}
        for u, v in g.edges:
            adjacency[u].add(v)
        senses_of = {}
        for s in nodes:
            senses_of.setdefault(s.word, []).append(s)
        reach = WordReachability(g.edges, nodes=nodes)
        for w, sources in senses_of.items():
            hit = set()
            for s in sources:
                hit |= {t.word for t in dfs_reachable_set(adjacency, s)}
            for h in senses_of:
                disagreements += reach.reachable(w, h) != (h in hit)
    criterion.check(disagreements == 0, f"{disagreements} reachability disagreements")
    scores = [evaluate(g, g).f1 for g, _ in (_random_digraph(rng) for _ in range(40)) if g.edges][:20]
    criterion.check(len(scores) == 20 and all(f == 1.0 for f in scores), "evaluate(g, g) gives F1 = 1")
    chain = SenseTaxonomy([(Sense("a", 1), Sense("b", 1)), (Sense("b", 1), Sense("c", 1))])
    report = evaluate(SenseTaxonomy([(Sense("a", 1), Sense("c", 1))]), chain)
    criterion.check(report.tp == 1 and report.fp == 0, f"transitive pair tp={report.tp} fp={report.fp}")
    criterion.finish(8, "evaluation oracle", start, 60.0)


SCALE_RUNNER = textwrap.dedent("""
    import resource, sys, time
    from sensehyper.cli import main
    start = time.perf_counter()
    code = main(sys.argv[1:])
    elapsed = time.perf_counter() - start
    peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
    print(f"SCALE {code} {elapsed:.3f} {peak}", file=sys.stderr)
""")


@pytest.mark.slow
def test_criterion_9_scale(criterion, tmp_path):
    inv, rel, store = random_corpus(9, n_synsets=10_000, n_words=20_000, n_pairs=100_000, dim=50)
    synsets, isa, vectors = tmp_path / "synsets.tsv", tmp_path / "isa.tsv", tmp_path / "vectors.txt"
    dump_synsets(inv, synsets)
    with open(isa, "w", encoding="utf-8") as f:
        for (hypo, hyper), count in rel.counts.items():
            f.write(f"{hypo}\t{hyper}\t{count}\n")
    # pad with repeats until the file has 100k lines
    with open(isa, "a", encoding="utf-8") as f:
        pairs = sorted(rel.counts)
        for i in range(100_000 - len(pairs)):
            f.write("%s\t%s\n" % pairs[i])
    with open(vectors, "w", encoding="utf-8") as f:
        f.write(f"{len(store)} {store.dimension}\n")
        for w, v in zip(store.words, store.vectors):
            f.write(w + " " + " ".join(f"{x:.5f}" for x in v) + "\n")
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-c", SCALE_RUNNER, "run", "--mode", "full", "--synsets", str(synsets),
         "--isa", str(isa), "--embeddings", str(vectors), "--output", str(tmp_path / "out.tsv")],
        capture_output=True, text=True,
    )
    tail = [line for line in proc.stderr.splitlines() if line.startswith("SCALE ")]
    criterion.check(proc.returncode == 0 and tail, f"runner exit {proc.returncode}")
    if tail:
        _, code, elapsed, peak = tail[-1].split()
        criterion.check(code == "0", f"cli exit {code}")
        criterion.check(float(elapsed) < 300, f"full mode {float(elapsed):.1f}s < 300s")
        criterion.check(int(peak) < 4 * 2**30, f"peak rss {int(peak) / 2**20:.0f} MiB < 4096 MiB")
        lines = sum(1 for _ in open(tmp_path / "out.tsv", encoding="utf-8"))
        criterion.check(lines > 0, f"{lines} output pairs")
    with open(isa, encoding="utf-8") as f:
        criterion.check(sum(1 for _ in f) == 100_000, "100k is-a lines")
    criterion.finish(9, "scale smoke test (10k synsets, 100k pairs, 50-d)", start, 300.0)
