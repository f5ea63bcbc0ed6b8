import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netavg import _fallback, kernels

ext = pytest.importorskip("netavg._ext", reason="compiled extension not built")


def random_codes(seed, n=150, cards=(2, 3, 4, 2, 3)):
    rng = np.random.default_rng(seed)
    codes = np.column_stack([rng.integers(0, r, n) for r in cards]).astype(np.intc)
    return codes, np.array(cards, dtype=np.intp)


@given(st.integers(0, 2**32 - 1), st.permutations(range(5)), st.integers(0, 3))
@settings(max_examples=100, deadline=None)
def test_backends_agree(seed, order, k):
    codes, cards = random_codes(seed)
    child, *rest = order
    parents = sorted(rest[:k])
    assert np.array_equal(ext.config_index(codes, parents, cards), _fallback.config_index(codes, parents, cards))
    fc = ext.family_counts(codes, child, parents, cards)
    assert np.array_equal(fc, _fallback.family_counts(codes, child, parents, cards))
    x, y = rest[0], child
    z = rest[1 : 1 + k]
    assert np.array_equal(ext.cross_counts(codes, x, y, z, cards), _fallback.cross_counts(codes, x, y, z, cards))
    a = ext.bdeu_score(codes, child, parents, cards, 10.0)
    b = _fallback.bdeu_score(codes, child, parents, cards, 10.0)
    assert a == pytest.approx(b, rel=1e-13, abs=1e-10)
    assert ext.bdeu_from_counts(fc, 3.0) == pytest.approx(_fallback.bdeu_from_counts(fc, 3.0), rel=1e-13)


def test_default_backend_is_compiled():
    if os.environ.get("NETAVG_PURE_PYTHON") == "1":
        pytest.skip("fallback forced by environment")
    assert kernels.BACKEND == "cython"


def test_pure_python_switch():
    code = "import netavg.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, NETAVG_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_backends_give_identical_confidences():
    code = (
        "from netavg.averaging import edge_confidence; from netavg.learning import LearnerConfig;"
        "from netavg.model import forward_sample; from netavg.netio import load_network;"
        "d = forward_sample(load_network('synthetic8'), 250, seed=4);"
        "print(edge_confidence(d, LearnerConfig(), 30, seed=2).p_hat.tolist())"
    )
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, NETAVG_PURE_PYTHON=flag)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout)
    assert outs[0] == outs[1]
