"""Compare the pure-python and compiled term-map kernels.

Times the primitive operations on synthetic workloads shaped like the ones
the tensor layer produces (many small sparse maps, moderate degrees), plus
one end-to-end identity check routed through each backend via the
COCHAIN_PURE_PYTHON switch.

Run:  python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import os
import random
import statistics
import subprocess
import sys
import time

from cochain._kernels import available_kernels


def random_map(dim: int, rng: random.Random, n_terms: int = 6) -> dict:
    out = {}
    for _ in range(n_terms):
        exps = tuple(rng.randrange(4) for _ in range(dim))
        num = rng.randrange(-9, 10) or 1
        den = rng.randrange(1, 10)
        out[exps] = (num, den)
    return out


def build_workload(seed: int = 0, count: int = 400) -> list[tuple[dict, dict]]:
    rng = random.Random(seed)
    return [(random_map(4, rng), random_map(4, rng)) for _ in range(count)]


def time_op(kernel, name: str, pairs, repeat: int) -> float:
    op = getattr(kernel, name)
    timings = []
    for _ in range(repeat):
        start = time.perf_counter()
        if name == "mul":
            for a, b in pairs:
                op(a, b)
        elif name == "add":
            for a, b in pairs:
                op(a, b)
        elif name == "diff":
            for a, _ in pairs:
                op(a, 1)
        elif name == "signed_sum":
            for a, b in pairs:
                op([a, b, a], [1, -1, 1], 2, 3)
        elif name == "homotopy_scale":
            for a, _ in pairs:
                op(a, 2)
        timings.append(time.perf_counter() - start)
    return statistics.median(timings)


def end_to_end(pure: bool) -> float:
    """Identity sweep in a subprocess so the kernel choice is honored."""
    code = (
        "import random, time\n"
        "from cochain.complexes import random_K_element, d_K\n"
        "rng = random.Random(0)\n"
        "start = time.perf_counter()\n"
        "for _ in range(30):\n"
        "    e = random_K_element(3, 2, rng)\n"
        "    assert not d_K(d_K(e)).tensor.nonzero_indices()\n"
        "print(time.perf_counter() - start)\n"
    )
    env = dict(os.environ)
    if pure:
        env["COCHAIN_PURE_PYTHON"] = "1"
    else:
        env.pop("COCHAIN_PURE_PYTHON", None)
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    out.check_returncode()
    return float(out.stdout.strip())


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    kernels = available_kernels()
    if "compiled" not in kernels:
        print("compiled kernel not available; nothing to compare")
        return 1

    pairs = build_workload()
    ops = ("add", "mul", "diff", "signed_sum", "homotopy_scale")
    print(f"{len(pairs)} synthetic term-map pairs, median of {args.repeat} runs\n")
    print(f"{'op':<16}{'python [ms]':>14}{'compiled [ms]':>16}{'speedup':>10}")
    for name in ops:
        t_py = time_op(kernels["python"], name, pairs, args.repeat) * 1e3
        t_c = time_op(kernels["compiled"], name, pairs, args.repeat) * 1e3
        print(f"{name:<16}{t_py:>14.3f}{t_c:>16.3f}{t_py / t_c:>9.1f}x")

    print("\nend-to-end: 30 double-differential checks (dim 3, grade 2)")
    t_py = end_to_end(pure=True)
    t_c = end_to_end(pure=False)
    print(f"{'python':<16}{t_py * 1e3:>14.1f} ms")
    print(f"{'compiled':<16}{t_c * 1e3:>14.1f} ms   ({t_py / t_c:.1f}x)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
