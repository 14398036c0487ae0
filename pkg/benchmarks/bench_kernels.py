"""Compare the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Reports the best-of-``repeat`` time per call for each available backend and
the speedup of the compiled module over the fallback.
"""

import argparse
import json
import timeit

import numpy as np

from acwi import kernels
from acwi.envs import make_env


def cases(rng):
    st = make_env("keycorridor-s3r3", seed=0)
    t, n = 128, 8
    r, v, nv = rng.normal(size=(t, n)), rng.normal(size=(t, n)), rng.normal(size=(t, n))
    ends = (rng.random((t, n)) < 0.05).astype(np.float64)
    return {
        "gen_obs": (lambda impl: impl.gen_obs(st.grid, st.agent_pos[0], st.agent_pos[1], st.agent_dir,
                                              st.carrying), 2000),
        "gae_128x8": (lambda impl: impl.gae(r, v, nv, ends, 0.99, 0.95), 500),
        "returns_128x8": (lambda impl: impl.discounted_returns(r, ends, 0.99), 500),
    }


def run(repeat):
    impls = kernels.implementations()
    rows = []
    for name, (fn, number) in cases(np.random.default_rng(0)).items():
        row = {"kernel": name}
        for backend, impl in impls.items():
            best = min(timeit.repeat(lambda: fn(impl), number=number, repeat=repeat)) / number
            row[backend] = best
        if "cython" in row:
            row["speedup"] = row["python"] / row["cython"]
        rows.append(row)
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--json", help="also write the results here")
    args = p.parse_args()
    rows = run(args.repeat)
    backends = [b for b in ("python", "cython") if b in rows[0]]
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':<16}" + "".join(f"{b + ' (us)':>16}" for b in backends) + f"{'speedup':>10}")
    for row in rows:
        cells = "".join(f"{row[b] * 1e6:>16.2f}" for b in backends)
        speed = f"{row['speedup']:>9.1f}x" if "speedup" in row else f"{'-':>10}"
        print(f"{row['kernel']:<16}{cells}{speed}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
