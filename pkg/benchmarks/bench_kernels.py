"""Compiled vs pure-Python kernel timings, plus one end-to-end run_oc.

    python benchmarks/bench_kernels.py [--reps 2000]

The pure-Python run happens in a subprocess with SEAMLESS_TRIALS_PURE_PYTHON=1
so the whole simulation uses the fallback.
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from seamless_trials import _kernels_py


def kernel_cases():
    g = np.random.default_rng(0)
    t1, t2 = g.exponential(4, 150), g.exponential(5, 150)
    e1, e2 = g.random(150) < 0.7, g.random(150) < 0.7
    return {
        "dunnett_exceed(m=3)": (lambda k: k.dunnett_exceed(1.9, 3, 0.5)),
        "logrank_terms(150+150)": (lambda k: k.logrank_terms(t1, e1, t2, e2)),
        "binom_upper_tail(n=80)": (lambda k: k.binom_upper_tail(24, 80, 0.2)),
    }


def time_call(fn, number=2000):
    return min(timeit.repeat(fn, number=number, repeat=5)) / number


def run_oc_seconds(reps, pure):
    code = (
        "import json, time\n"
        "from seamless_trials import presets, BACKEND\n"
        "from seamless_trials.oc import run_oc\n"
        "t = time.perf_counter()\n"
        f"run_oc(presets.design('A'), presets.scenario(2, 1), {reps}, 1)\n"
        "print(json.dumps([BACKEND, time.perf_counter() - t]))\n"
    )
    env = dict(os.environ)
    env.pop("SEAMLESS_TRIALS_PURE_PYTHON", None)
    if pure:
        env["SEAMLESS_TRIALS_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=2000, help="replications for the run_oc timing")
    args = ap.parse_args()
    try:
        from seamless_trials import _kernels as compiled
    except ImportError:
        sys.exit("compiled extension not built; run `python setup.py build_ext --inplace` first")

    print(f"{'kernel':<26}{'compiled':>12}{'python':>12}{'speedup':>10}")
    for name, fn in kernel_cases().items():
        c = time_call(lambda: fn(compiled))
        p = time_call(lambda: fn(_kernels_py), number=500)
        print(f"{name:<26}{c * 1e6:>10.1f}us{p * 1e6:>10.1f}us{p / c:>9.1f}x")

    (b1, c), (b2, p) = run_oc_seconds(args.reps, False), run_oc_seconds(args.reps, True)
    print(f"\nrun_oc Design A two-dose, {args.reps} reps: {b1} {c:.2f}s, {b2} {p:.2f}s ({p / c:.2f}x)")


if __name__ == "__main__":
    main()
