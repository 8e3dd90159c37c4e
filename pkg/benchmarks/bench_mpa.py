"""Benchmark the per-round message kernels: numba @njit vs pure numpy.

Runs the same fixed number of rounds through both implementations on one
generated graph, checks they agree, and prints per-round timings.

    python benchmarks/bench_mpa.py --n 500 --p 0.1 --rounds 2000
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from harmonic_influence import ERDOS_RENYI, GeneratorSpec, generate
from harmonic_influence._kernels import (
    HAVE_NUMBA,
    build_edge_index,
    estimates_numpy,
    initial_messages,
    mpa_round_numba,
    mpa_round_numpy,
)


def run_rounds(round_fn, index, rounds):
    w, h = initial_messages(index)
    start = time.perf_counter()
    for _ in range(rounds):
        w, h = round_fn(index, w, h)
    return time.perf_counter() - start, w, h


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=500)
    parser.add_argument("--p", type=float, default=0.1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--rounds", type=int, default=2000)
    parser.add_argument("--stubborn", type=int, default=3,
                        help="number of anchored nodes (ids 0..k-1)")
    args = parser.parse_args()

    graph = generate(GeneratorSpec(kind=ERDOS_RENYI, n=args.n, p=args.p, seed=args.seed))
    zeros = set(range(args.stubborn))
    index = build_edge_index(graph, zeros)
    print(f"graph: n={graph.node_count} m={graph.edge_count} "
          f"directed messages={index.directed_count} rounds={args.rounds}")

    elapsed_np, w_np, h_np = run_rounds(mpa_round_numpy, index, args.rounds)
    print(f"numpy : {elapsed_np:8.3f}s total  {1e6 * elapsed_np / args.rounds:8.1f} us/round")

    if not HAVE_NUMBA:
        print("numba : unavailable (not installed, or HIC_PURE_NUMPY is set)")
        return

    # warm the JIT outside the timed loop
    run_rounds(mpa_round_numba, index, 1)
    elapsed_nb, w_nb, h_nb = run_rounds(mpa_round_numba, index, args.rounds)
    print(f"numba : {elapsed_nb:8.3f}s total  {1e6 * elapsed_nb / args.rounds:8.1f} us/round")
    print(f"speedup: {elapsed_np / elapsed_nb:.2f}x")

    if not (np.allclose(w_np, w_nb, rtol=1e-13) and np.allclose(h_np, h_nb, rtol=1e-13)):
        raise SystemExit("backends disagree")
    est = estimates_numpy(index, w_np, h_np)
    finite = est[~np.isnan(est)]
    print(f"agreement OK; estimate range [{finite.min():.4f}, {finite.max():.4f}]")


if __name__ == "__main__":
    main()
