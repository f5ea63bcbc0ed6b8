import itertools

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netavg.graph import Dag, NodeSet
from netavg.model import forward_sample
from netavg.scores import FamilyScoreCache, bdeu_family_score, bdeu_network_score, bdeu_node_score

from .conftest import dataset


def lg(x):
    return mpmath.loggamma(mpmath.mpf(x))


def oracle(counts, ess):
    """High-precision BDeu local score of a (q, r) count table."""
    counts = np.asarray(counts)
    q, r = counts.shape
    a_j, a_jk = mpmath.mpf(ess) / q, mpmath.mpf(ess) / (q * r)
    total = mpmath.mpf(0)
    for row in counts:
        total += lg(a_j) - lg(a_j + int(row.sum()))
        for c in row:
            total += lg(a_jk + int(c)) - lg(a_jk)
    return float(total)


def test_hand_counts_three_one():
    expected = lg(1) - lg(5) + (lg(3.5) - lg(0.5)) + (lg(1.5) - lg(0.5))
    assert abs(bdeu_family_score(np.array([[3, 1]]), 1.0) - float(expected)) < 1e-10


@pytest.mark.parametrize("seed", range(8))
def test_against_high_precision_oracle(seed):
    rng = np.random.default_rng(seed)
    q, r = int(rng.integers(1, 7)), int(rng.integers(2, 5))
    counts = rng.integers(0, 200, (q, r))
    counts[rng.random((q, r)) < 0.2] = 0
    ess = float(rng.choice([0.5, 1.0, 10.0, 37.5]))
    assert abs(bdeu_family_score(counts, ess) - oracle(counts, ess)) < 1e-10


def test_node_score_uses_data_counts():
    d = dataset([[0, 1], [0, 0], [1, 1], [0, 1], [1, 1]], ["A", "B"])
    # parent A, child B: rows A=0 -> B counts (1, 2), A=1 -> (0, 2)
    assert abs(bdeu_node_score(d, "B", ["A"], 10) - oracle([[1, 2], [0, 2]], 10)) < 1e-10


def test_empty_data_scores_zero():
    assert bdeu_family_score(np.zeros((4, 3), dtype=int), 10.0) == 0.0


def test_score_equivalence_pair(pair_net):
    d = forward_sample(pair_net, 300, seed=1)
    ab = bdeu_network_score(d, Dag.from_names("AB", [("A", "B")]), 10).log_score
    ba = bdeu_network_score(d, Dag.from_names("AB", [("B", "A")]), 10).log_score
    assert abs(ab - ba) < 1e-9


def all_three_node_dags():
    pairs = [(0, 1), (0, 2), (1, 2)]
    for states in itertools.product((None, 0, 1), repeat=3):
        edges = set()
        for (u, v), s in zip(pairs, states):
            if s == 0:
                edges.add((u, v))
            elif s == 1:
                edges.add((v, u))
        try:
            yield Dag(NodeSet("ABC"), frozenset(edges))
        except ValueError:
            continue


def test_all_25_three_node_dags(three_node_net):
    d = forward_sample(three_node_net, 400, seed=8)
    dags = list(all_three_node_dags())
    assert len(dags) == 25
    for dag in dags:
        total = 0.0
        for v in range(3):
            pa = sorted(dag.parents(v))
            counts = np.zeros((2 ** len(pa), 2), dtype=int)
            for row in d.codes.tolist():
                j = 0
                for p in pa:
                    j = 2 * j + row[p]
                counts[j, row[v]] += 1
            total += oracle(counts, 10)
        val = bdeu_network_score(d, dag, 10)
        assert abs(val.log_score - total) < 1e-8
        assert abs(val.log_score - sum(val.per_node)) < 1e-9


def test_markov_equivalence_classes_score_equal(three_node_net):
    d = forward_sample(three_node_net, 400, seed=9)

    def cls(dag):
        sk = frozenset(tuple(sorted(e)) for e in dag.edges)
        vs = frozenset(
            (a, c, b)
            for (a, c) in dag.edges for (b, c2) in dag.edges
            if c == c2 and a < b and tuple(sorted((a, b))) not in sk
        )
        return sk, vs

    groups = {}
    for dag in all_three_node_dags():
        groups.setdefault(cls(dag), []).append(bdeu_network_score(d, dag, 10).log_score)
    assert len(groups) == 11
    for scores in groups.values():
        assert max(scores) - min(scores) < 1e-9


def test_dependent_edge_improves_score(pair_net):
    d = forward_sample(pair_net, 500, seed=0)
    empty = bdeu_network_score(d, Dag(NodeSet("AB")), 10)
    assert empty.log_score == pytest.approx(bdeu_node_score(d, "A") + bdeu_node_score(d, "B"))
    assert bdeu_network_score(d, Dag.from_names("AB", [("A", "B")]), 10).log_score > empty.log_score


def test_duplicated_rows_keep_argmax(pair_net):
    d = forward_sample(pair_net, 60, seed=4)
    d2 = d.with_codes(np.vstack([d.codes, d.codes]))
    dags = list(Dag.from_names("AB", e) for e in ([], [("A", "B")]))
    best = [int(np.argmax([bdeu_network_score(x, g, 10).log_score for g in dags])) for x in (d, d2)]
    assert best[0] == best[1]


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_decomposability(seed):
    rng = np.random.default_rng(seed)
    codes = np.column_stack([rng.integers(0, 2, 50), rng.integers(0, 3, 50), rng.integers(0, 2, 50), rng.integers(0, 2, 50)])
    d = dataset(codes, cards=[2, 3, 2, 2])
    dag = Dag(NodeSet("ABCD"))
    for _ in range(4):
        u, v = rng.choice(4, 2, replace=False)
        try:
            new = dag.add_edge(int(u), int(v))
        except ValueError:
            continue
        before, after = bdeu_network_score(d, dag, 10), bdeu_network_score(d, new, 10)
        local = bdeu_node_score(d, int(v), new.parents(int(v)), 10) - bdeu_node_score(d, int(v), dag.parents(int(v)), 10)
        assert after.log_score - before.log_score == pytest.approx(local, abs=1e-9)
        assert [i for i in range(4) if after.per_node[i] != before.per_node[i]] in ([], [int(v)])
        dag = new


def test_cache_is_bit_identical():
    rng = np.random.default_rng(3)
    d = dataset(rng.integers(0, 3, (80, 4)), cards=[3] * 4)
    cache = FamilyScoreCache(d, 10)
    first = cache(2, (3, 0))
    assert cache(2, (0, 3)) == first == bdeu_node_score(d, 2, [0, 3], 10)
    assert cache.calls == 1


def test_invalid_arguments():
    d = dataset([[0, 1], [1, 0]])
    with pytest.raises(ValueError):
        bdeu_node_score(d, 0, [0], 10)
    with pytest.raises(ValueError):
        bdeu_node_score(d, 0, [], 0)
