"""Compare the compiled and pure-Python DBM closure kernels.

    python3 benchmarks/bench_dbm.py [--sizes 3 6 10] [--repeat 200]

Both kernels close the same random matrices; results are checked for
equality before timings are reported.
"""
from __future__ import annotations

import argparse
import json
import random
import timeit

from tiospec import _dbm_py
from tiospec.dbm import bound

try:
    from tiospec import _dbm_core
except ImportError:  # pragma: no cover - extension not built
    _dbm_core = None


def random_matrix(rng: random.Random, n: int) -> list[int]:
    """A satisfiable (n+1)x(n+1) bound matrix built from a random point."""
    point = [0] + [rng.randint(0, 20) for _ in range(n)]
    m = []
    for i in range(n + 1):
        for j in range(n + 1):
            if i == j:
                m.append(bound(0, False))
            elif rng.random() < 0.4:
                m.append(_dbm_py.INF)
            else:
                slack = rng.randint(0, 5)
                m.append(bound(point[i] - point[j] + slack, rng.random() < 0.3 and slack > 0))
    return m


def _closed(kernel, m, n):
    out = list(m)
    return kernel.close(out, n), out


def run(sizes, repeat: int, seed: int) -> list[dict]:
    rng = random.Random(seed)
    rows = []
    for n in sizes:
        mats = [random_matrix(rng, n) for _ in range(50)]
        kernels = {"python": _dbm_py}
        if _dbm_core is not None:
            kernels["compiled"] = _dbm_core
        closed = {name: [_closed(k, m, n + 1) for m in mats] for name, k in kernels.items()}
        if len(closed) == 2 and closed["python"] != closed["compiled"]:
            raise SystemExit(f"kernels disagree at {n} clocks")
        row = {"clocks": n}
        for name, k in kernels.items():
            t = timeit.timeit(lambda: [k.close(list(m), n + 1) for m in mats], number=max(1, repeat // 10))
            row[f"{name}_us"] = round(t / (max(1, repeat // 10) * len(mats)) * 1e6, 2)
        if "compiled_us" in row:
            row["speedup"] = round(row["python_us"] / row["compiled_us"], 1)
        rows.append(row)
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 8, 12])
    p.add_argument("--repeat", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    args = p.parse_args()
    rows = run(args.sizes, args.repeat, args.seed)
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'clocks':>6} {'python us':>10} {'compiled us':>12} {'speedup':>8}")
    for r in rows:
        print(f"{r['clocks']:>6} {r['python_us']:>10} {r.get('compiled_us', '-'):>12} {r.get('speedup', '-'):>8}")


if __name__ == "__main__":
    main()
