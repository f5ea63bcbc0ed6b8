"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` to see the summary lines
next to the pytest verdicts. Criterion 5 is the long one (minutes).
"""

import json
import math
import os
import time
from pathlib import Path

import mpmath
import numpy as np
import pytest

from netavg.averaging import edge_confidence
from netavg.cli import main as cli_main
from netavg.graph import Dag, skeleton_of
from netavg.independence import mi_g2_test, mi_shrinkage_test
from netavg.learning import LearnerConfig
from netavg.model import exact_joint, forward_sample, parameter_count
from netavg.netio import load_network
from netavg.scores import bdeu_family_score, bdeu_network_score
from netavg.threshold import ConfidenceProfile, StepCdf, estimate_threshold, l1_minimizer, l1_objective

from .conftest import dataset, make_net

REFERENCE_DIR = os.environ.get("NETAVG_REFERENCE_DIR")


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\nCRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_1_example_golden(capsys):
    start = time.perf_counter()
    prof = ConfidenceProfile.from_confidences("ABCD", [0.2242, 0.0460, 0.8935, 0.3921, 0.7689, 0.9439])
    rep = estimate_threshold(prof)
    elapsed = time.perf_counter() - start
    ok = (
        abs(rep.t_hat - 0.4999816) < 1e-3
        and rep.cutoff == 0.3921
        and rep.selected == {(0, 3), (1, 3), (2, 3)}
        and elapsed < 1.0
    )
    report(capsys, 1, ok, f"t_hat={rep.t_hat:.7f} cutoff={rep.cutoff} selected={sorted(rep.selected)} in {elapsed:.3f}s")


def test_criterion_2_l1_grid_oracle(capsys):
    start = time.perf_counter()
    rng = np.random.default_rng(12345)
    grid = np.linspace(0.0, 1.0, 10_001)
    worst = -math.inf
    for _ in range(200):
        k = int(rng.integers(3, 51))
        values = rng.random(k)
        levels, widths = StepCdf(values).partition()
        grid_best = float(np.min(np.abs(levels[:, None] - grid[None, :]).T @ widths))
        worst = max(worst, l1_objective(l1_minimizer(values), values) - grid_best)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10.0
    report(capsys, 2, ok, f"max(closed form - grid best) = {worst:.3e} over 200 profiles in {elapsed:.2f}s")


def test_criterion_3_ideal_configuration(capsys):
    start = time.perf_counter()
    truth = Dag.from_names("ABCDEF", [("A", "B"), ("B", "C"), ("D", "C"), ("E", "F")])
    data = dataset(np.random.default_rng(0).integers(0, 2, (40, 6)))
    prof = edge_confidence(data, lambda d: truth, m=25, seed=3)
    rep = estimate_threshold(prof)
    elapsed = time.perf_counter() - start
    ok = rep.selected == skeleton_of(truth).edges and elapsed < 1.0
    report(capsys, 3, ok, f"selected {sorted(rep.selected)} vs skeleton {sorted(skeleton_of(truth).edges)} in {elapsed:.3f}s")


def test_criterion_4_parameter_counts(capsys):
    single = make_net("A", [], {"A": [[0.5, 0.5]]})
    # chain3: 3 ternary nodes, A has no parent (2), B|A and C|B (3 rows x 2 each)
    # synthetic8: ternary tree on 8 nodes, root 2 + 7 children x 6
    got = {"single": parameter_count(single), "chain3": parameter_count(load_network("chain3")),
           "synthetic8": parameter_count(load_network("synthetic8"))}
    want = {"single": 1, "chain3": 14, "synthetic8": 44}
    report(capsys, 4, got == want, f"fixtures {got}")


REFERENCE_COUNTS = {"alarm": 509, "hailfinder": 2656, "insurance": 984}


@pytest.mark.parametrize("name", sorted(REFERENCE_COUNTS))
def test_criterion_4_reference_networks(capsys, name):
    path = Path(REFERENCE_DIR or "") / f"{name}.json"
    if not REFERENCE_DIR or not path.exists():
        with capsys.disabled():
            print(f"\nCRITERION 4 ({name}): SKIP - set NETAVG_REFERENCE_DIR to a folder with {name}.json")
        pytest.skip("reference network not supplied")
    count = parameter_count(load_network(path))
    report(capsys, f"4 ({name})", count == REFERENCE_COUNTS[name], f"{count} free parameters, expected {REFERENCE_COUNTS[name]}")


@pytest.mark.slow
def test_criterion_5_desk_scale_trends(capsys):
    from netavg.evaluation import run_experiment

    start = time.perf_counter()
    grid = [100, 500, 2000]
    res = run_experiment(
        load_network("synthetic8"), grid, LearnerConfig(algorithm="hc", ess=10), m=200, repeats=10,
        seed=0, methods=["l1", "adhoc:0.95"], jobs=None,
    )
    sens = [res.mean(n, "l1", "sensitivity") for n in grid]
    spec = [res.mean(n, "l1", "specificity") for n in grid]
    delta = res.mean(100, "l1", "sensitivity") - res.mean(100, "adhoc:0.95", "sensitivity")
    elapsed = time.perf_counter() - start
    ok = (
        all(a <= b for a, b in zip(sens, sens[1:]))
        and min(spec) >= 0.9
        and delta >= 0
        and elapsed < 600
    )
    report(
        capsys, 5, ok,
        f"sensitivity {[round(s, 3) for s in sens]}, specificity {[round(s, 3) for s in spec]}, "
        f"delta(l1 - adhoc 0.95) at n=100 {delta:+.3f}, {elapsed:.0f}s",
    )


def test_criterion_6_bdeu(capsys):
    def oracle(counts, ess):
        q, r = counts.shape
        lg = lambda x: mpmath.loggamma(mpmath.mpf(x))  # noqa: E731
        a_j, a_jk = mpmath.mpf(ess) / q, mpmath.mpf(ess) / (q * r)
        return float(sum(
            lg(a_j) - lg(a_j + int(row.sum())) + sum(lg(a_jk + int(c)) - lg(a_jk) for c in row)
            for row in counts
        ))

    tables = [
        (np.array([[3, 1]]), 1.0),
        (np.array([[10, 0, 4], [2, 7, 7]]), 10.0),
        (np.array([[120, 3], [0, 0], [55, 61], [9, 1]]), 10.0),
        (np.array([[1000, 2000, 1]]), 0.5),
    ]
    err = max(abs(bdeu_family_score(c, e) - oracle(c, e)) for c, e in tables)
    pair = make_net("AB", [("A", "B")], {"A": [[0.4, 0.6]], "B": [[0.8, 0.2], [0.3, 0.7]]})
    d = forward_sample(pair, 500, seed=2)
    gap = abs(
        bdeu_network_score(d, Dag.from_names("AB", [("A", "B")]), 10).log_score
        - bdeu_network_score(d, Dag.from_names("AB", [("B", "A")]), 10).log_score
    )
    empty = bdeu_family_score(np.zeros((3, 2), dtype=np.int64), 10.0)
    ok = err < 1e-10 and gap < 1e-9 and empty == 0.0
    report(capsys, 6, ok, f"oracle error {err:.2e}, A->B vs B->A gap {gap:.2e}, empty-data score {empty}")


def test_criterion_7_sampler(capsys):
    net = make_net(
        "ABC",
        [("A", "B"), ("A", "C"), ("B", "C")],
        {"A": [[0.3, 0.7]], "B": [[0.8, 0.2], [0.25, 0.75]],
         "C": [[0.9, 0.1], [0.4, 0.6], [0.3, 0.7], [0.05, 0.95]]},
    )
    n = 50_000
    data = forward_sample(net, n, seed=7)
    idx = data.codes @ np.array([4, 2, 1])
    freq = np.bincount(idx, minlength=8) / n
    joint = exact_joint(net)
    dev = max(abs(freq[4 * a + 2 * b + c] - p) for (a, b, c), p in joint.items())
    report(capsys, 7, dev < 0.01, f"max |empirical - exact| = {dev:.4f}")


def test_criterion_8_ci_tests(capsys):
    d = dataset([[0, 0]] * 50 + [[1, 1]] * 50)
    stat = mi_g2_test(d, 0, 1).statistic
    rng = np.random.default_rng(8)
    n = 100_000
    x = rng.integers(0, 2, n)
    y = np.where(rng.random(n) < 0.65, x, rng.integers(0, 2, n))
    big = dataset(np.column_stack([x, y]))
    diff = abs(mi_g2_test(big, 0, 1).mi_estimate - mi_shrinkage_test(big, 0, 1).mi_estimate)
    ok = abs(stat - 200 * math.log(2)) < 1e-9 and diff < 1e-3
    report(capsys, 8, ok, f"G2 = {stat:.12f} (2*100*ln2 = {200 * math.log(2):.12f}); |MI_ml - MI_shrink| at n=1e5 = {diff:.2e}")


def test_criterion_9_cli_determinism(capsys, tmp_path):
    def run(*argv):
        assert cli_main([str(a) for a in argv]) == 0

    run("sample", "--network", "synthetic8", "--n", 300, "--seed", 5, "--out", tmp_path / "data.csv")
    conf = tmp_path / "conf.json"
    conf.write_text(json.dumps({"nodes": list("ABCD"), "p_hat": [0.2242, 0.046, 0.8935, 0.3921, 0.7689, 0.9439]}))
    cfg = tmp_path / "exp.json"
    cfg.write_text(json.dumps({"network": "chain3", "grid": [80, 160], "m": 8, "repeats": 2, "seed": 3,
                               "methods": ["l1", "adhoc:0.95", "noisefloor"]}))
    commands = {
        "sample": ["sample", "--network", "synthetic8", "--n", 300, "--seed", 5],
        "learn-hc": ["learn", tmp_path / "data.csv"],
        "learn-iamb": ["learn", tmp_path / "data.csv", "--algorithm", "iamb"],
        "learn-mmhc": ["learn", tmp_path / "data.csv", "--algorithm", "mmhc"],
        "avgnet-file": ["avgnet", "--confidences-file", conf],
    }
    parallel = {
        "avgnet-l1": ["avgnet", tmp_path / "data.csv", "--m", 12, "--seed", 4],
        "avgnet-noisefloor": ["avgnet", tmp_path / "data.csv", "--m", 12, "--seed", 4, "--method", "noisefloor"],
        "avgnet-mmhc": ["avgnet", tmp_path / "data.csv", "--m", 12, "--seed", 4, "--algorithm", "mmhc"],
        "experiment": ["experiment", cfg],
    }
    mismatched = []
    for name, argv in commands.items():
        outs = []
        for i in range(2):
            path = tmp_path / f"{name}.{i}"
            run(*argv, "--out", path)
            outs.append(path.read_bytes())
        if outs[0] != outs[1]:
            mismatched.append(name)
    for name, argv in parallel.items():
        outs = []
        for jobs in (1, 2, 1):
            path = tmp_path / f"{name}.{jobs}.{len(outs)}"
            run(*argv, "--jobs", jobs, "--out", path)
            outs.append(path.read_bytes())
        if len(set(outs)) != 1:
            mismatched.append(name)
    total = len(commands) + len(parallel)
    report(capsys, 9, not mismatched, f"{total - len(mismatched)}/{total} commands byte-identical across reruns and --jobs 1/2"
           + (f"; differing: {mismatched}" if mismatched else ""))
