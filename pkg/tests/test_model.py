import itertools
import math

import numpy as np
import pytest
from scipy.stats import chi2

from netavg.independence import mi_g2_test
from netavg.model import (
    NetworkError,
    StateSpaceTooLarge,
    exact_joint,
    forward_sample,
    parameter_count,
)
from netavg.netio import load_network

from .conftest import make_net


def brute_force_free_cells(net):
    return sum(cpt.table.size - cpt.table.shape[0] for cpt in net.cpts)


def test_parameter_count_single_binary():
    net = make_net("A", [], {"A": [[0.4, 0.6]]})
    assert parameter_count(net) == 1


def test_parameter_count_ternary_chain():
    net = load_network("chain3")
    assert parameter_count(net) == 2 + 6 + 6


def test_parameter_count_matches_free_cells(three_node_net):
    for net in (three_node_net, load_network("chain3"), load_network("synthetic8")):
        assert parameter_count(net) == brute_force_free_cells(net)


def test_deterministic_network_gives_constant_rows():
    net = make_net(
        "ABC",
        [("A", "B"), ("B", "C")],
        {"A": [[0, 1]], "B": [[1, 0], [0, 1]], "C": [[0, 1], [1, 0]]},
    )
    data = forward_sample(net, 200, seed=3)
    assert (data.codes == [1, 1, 0]).all()
    joint = exact_joint(net)
    assert joint[(1, 1, 0)] == 1.0
    assert sum(joint.values()) == pytest.approx(1.0, abs=1e-12)


def test_forward_sample_is_deterministic(three_node_net):
    a = forward_sample(three_node_net, 500, seed=11)
    b = forward_sample(three_node_net, 500, seed=11)
    c = forward_sample(three_node_net, 500, seed=12)
    assert a == b
    assert a != c


def test_exact_joint_independent_fair_pair():
    net = make_net("AB", [], {"A": [[0.5, 0.5]], "B": [[0.5, 0.5]]})
    assert exact_joint(net) == {k: 0.25 for k in itertools.product(range(2), repeat=2)}


def test_exact_joint_chain_rule_by_hand(three_node_net):
    joint = exact_joint(three_node_net)
    # P(A=1) P(B=0 | A=1) P(C=1 | A=1, B=0)
    assert joint[(1, 0, 1)] == pytest.approx(0.7 * 0.25 * 0.7, abs=1e-15)
    assert joint[(0, 1, 0)] == pytest.approx(0.3 * 0.2 * 0.4, abs=1e-15)
    assert sum(joint.values()) == pytest.approx(1.0, abs=1e-9)


def test_exact_joint_rejects_huge_state_space():
    names = [f"V{i}" for i in range(21)]
    net = make_net(names, [], {nm: [[0.5, 0.5]] for nm in names})
    with pytest.raises(StateSpaceTooLarge):
        exact_joint(net)


def test_sample_matches_exact_joint(three_node_net):
    n = 50_000
    data = forward_sample(three_node_net, n, seed=2024)
    joint = exact_joint(three_node_net)
    freq = {}
    for row in map(tuple, data.codes.tolist()):
        freq[row] = freq.get(row, 0) + 1
    dev = max(abs(freq.get(k, 0) / n - p) for k, p in joint.items())
    assert dev < 0.01


def test_marginal_cdf_converges():
    net = load_network("chain3")
    n = 20_000
    data = forward_sample(net, n, seed=5)
    joint = exact_joint(net)
    for j in range(3):
        exact = np.zeros(3)
        for cfg, p in joint.items():
            exact[cfg[j]] += p
        emp = np.bincount(data.codes[:, j], minlength=3) / n
        assert np.max(np.abs(np.cumsum(emp) - np.cumsum(exact))) < 3 * math.sqrt(1 / n)


def test_sampling_respects_conditional_independence():
    # A -> B, A -> C: B independent of C given A
    net = make_net(
        "ABC",
        [("A", "B"), ("A", "C")],
        {"A": [[0.4, 0.6]], "B": [[0.8, 0.2], [0.3, 0.7]], "C": [[0.7, 0.3], [0.1, 0.9]]},
    )
    crit = chi2.ppf(0.95, 2)
    below = sum(
        mi_g2_test(forward_sample(net, 1000, seed=s), "B", "C", ["A"]).statistic < crit
        for s in range(100)
    )
    assert below >= 90


def test_cpt_row_sums():
    with pytest.warns(UserWarning):
        net = make_net("A", [], {"A": [[0.5, 0.5 + 5e-7]]})
    assert net.cpts[0].table.sum() == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(NetworkError):
        make_net("A", [], {"A": [[0.5, 0.6]]})


def test_cpt_parents_must_match_dag():
    from netavg.graph import Dag
    from netavg.model import Cpt, DiscreteBayesNet

    from .conftest import binary

    dag = Dag.from_names("AB", [("A", "B")])
    with pytest.raises(NetworkError):
        DiscreteBayesNet(
            dag,
            [binary("A"), binary("B")],
            [Cpt(0, (), np.array([[0.5, 0.5]])), Cpt(1, (), np.array([[0.5, 0.5]]))],
        )


def test_sample_size_must_be_positive(three_node_net):
    with pytest.raises(ValueError):
        forward_sample(three_node_net, 0, seed=0)
