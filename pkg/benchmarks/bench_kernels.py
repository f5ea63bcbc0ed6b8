"""Compare the compiled and pure-Python kernel backends.

Each backend runs in its own interpreter (the backend is fixed at import), on the
same data: raw BDeu family scoring and a full bootstrap confidence run.

    python3 benchmarks/bench_kernels.py [--n 2000] [--m 20]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from netavg import kernels
from netavg.averaging import edge_confidence
from netavg.learning import LearnerConfig
from netavg.model import forward_sample
from netavg.netio import load_network

n, m = int(sys.argv[1]), int(sys.argv[2])
data = forward_sample(load_network("synthetic8"), n, seed=0)
families = [(c, p) for c in range(8) for p in ([], [(c + 1) % 8], [(c + 1) % 8, (c + 3) % 8])]

def best_of(fn, repeat=5):
    times = []
    for _ in range(repeat):
        t = time.perf_counter(); fn(); times.append(time.perf_counter() - t)
    return min(times)

def score_all():
    for _ in range(50):
        for c, p in families:
            kernels.bdeu_score(data.codes, c, sorted(p), data.cards, 10.0)

score = best_of(score_all)
t = time.perf_counter()
prof = edge_confidence(data, LearnerConfig(), m, seed=1, jobs=1)
boot = time.perf_counter() - t
print(json.dumps({"backend": kernels.BACKEND, "family_scores_s": score,
                  "calls": 50 * len(families), "bootstrap_s": boot,
                  "p_hat": prof.p_hat.tolist()}))
"""


def run(backend_env: dict, n: int, m: int) -> dict:
    env = dict(os.environ, **backend_env)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, str(n), str(m)], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(out.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000, help="rows sampled from synthetic8")
    ap.add_argument("--m", type=int, default=20, help="bootstrap replicates")
    args = ap.parse_args()

    fast = run({"NETAVG_PURE_PYTHON": "0"}, args.n, args.m)
    slow = run({"NETAVG_PURE_PYTHON": "1"}, args.n, args.m)
    if fast["backend"] != "cython":
        print("compiled extension not available; only the fallback was measured")
    print(f"{'backend':<8} {'family scores':>15} {'bootstrap':>12}")
    for r in (fast, slow):
        per_call = r["family_scores_s"] / r["calls"] * 1e6
        print(f"{r['backend']:<8} {per_call:>12.1f} us {r['bootstrap_s']:>10.2f} s")
    print(f"speedup: scoring x{slow['family_scores_s'] / fast['family_scores_s']:.1f}, "
          f"bootstrap x{slow['bootstrap_s'] / fast['bootstrap_s']:.1f}")
    print("identical confidences:", fast["p_hat"] == slow["p_hat"])


if __name__ == "__main__":
    main()
