import numpy as np
import pytest

from netavg.data import Dataset, Variable
from netavg.graph import Dag
from netavg.model import Cpt, DiscreteBayesNet


def binary(name):
    return Variable(name, ["0", "1"])


def make_net(names, arcs, tables, levels=None):
    """Small network from ``{child: table}`` with parents in sorted-index order."""
    dag = Dag.from_names(names, arcs)
    variables = [
        Variable(nm, levels[nm]) if levels and nm in levels else binary(nm) for nm in names
    ]
    cpts = [Cpt(i, tuple(dag.parents(i)), np.asarray(tables[nm], float)) for i, nm in enumerate(names)]
    return DiscreteBayesNet(dag, variables, cpts)


@pytest.fixture
def three_node_net():
    # A -> B, A -> C, B -> C
    return make_net(
        "ABC",
        [("A", "B"), ("A", "C"), ("B", "C")],
        {
            "A": [[0.3, 0.7]],
            "B": [[0.8, 0.2], [0.25, 0.75]],
            "C": [[0.9, 0.1], [0.4, 0.6], [0.3, 0.7], [0.05, 0.95]],
        },
    )


@pytest.fixture
def pair_net():
    # strong A -> B
    return make_net("AB", [("A", "B")], {"A": [[0.5, 0.5]], "B": [[0.9, 0.1], [0.1, 0.9]]})


def dataset(codes, names=None, cards=None):
    codes = np.asarray(codes)
    names = names or [chr(65 + j) for j in range(codes.shape[1])]
    cards = cards or [max(2, int(codes[:, j].max()) + 1) for j in range(codes.shape[1])]
    return Dataset([Variable(nm, [str(k) for k in range(r)]) for nm, r in zip(names, cards)], codes)
