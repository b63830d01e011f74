"""Compare the compiled and pure-Python move-generation kernels.

Usage: python3 benchmarks/bench_movegen.py [--hands N] [--seed S]

Generates random hands of assorted sizes, times gen_moves for leading
and responding situations on both kernels, and checks they agree.
"""

import argparse
import time

import numpy as np

from ddzlab import _movegen_py
from ddzlab.cards import RANK_MAX

try:
    from ddzlab import _movegen
except ImportError:
    _movegen = None


def random_hand(rng, size):
    deck = [r for r in range(15) for _ in range(RANK_MAX[r])]
    picks = rng.choice(len(deck), size=size, replace=False)
    counts = [0] * 15
    for i in picks:
        counts[deck[i]] += 1
    return tuple(counts)


def make_cases(n, seed):
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(n):
        hand = random_hand(rng, int(rng.integers(5, 21)))
        cases.append((hand, 0, -1, 0))  # leading
        cases.append((hand, 1, int(rng.integers(0, 12)), 0))  # beat a solo
        cases.append((hand, 2, int(rng.integers(0, 10)), 0))  # beat a pair
    return cases


def run(kernel, cases, repeats):
    start = time.perf_counter()
    total = 0
    for _ in range(repeats):
        for hand, cat, main, length in cases:
            total += len(kernel.gen_moves(hand, cat, main, length))
    return time.perf_counter() - start, total


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--hands", type=int, default=300)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cases = make_cases(args.hands, args.seed)
    for hand, cat, main, length in cases:
        pure = _movegen_py.gen_moves(hand, cat, main, length)
        if _movegen is not None:
            fast = _movegen.gen_moves(hand, cat, main, length)
            assert pure == fast, f"kernel disagreement on {hand} vs ({cat},{main},{length})"

    t_pure, n_pure = run(_movegen_py, cases, args.repeats)
    calls = len(cases) * args.repeats
    print(f"pure:     {t_pure:.3f}s  ({calls / t_pure:,.0f} calls/s, {n_pure} moves)")
    if _movegen is None:
        print("compiled: not built")
        return
    t_fast, n_fast = run(_movegen, cases, args.repeats)
    assert n_pure == n_fast
    print(f"compiled: {t_fast:.3f}s  ({calls / t_fast:,.0f} calls/s)")
    print(f"speedup:  {t_pure / t_fast:.1f}x")


if __name__ == "__main__":
    main()
