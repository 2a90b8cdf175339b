"""Compare the compiled and pure-Python BDD managers.

Two workloads: the classic n-queens constraint BDD, and a full fair/co-fair
analysis of benchmark instances on the symbolic backend.

    python benchmarks/bdd_cores.py [--queens 6 7] [--milner 10 20] [--philosophers 5 10]
"""

from __future__ import annotations

import argparse
import time

from cspguard.bench import milner, philosophers
from cspguard.setlogic import bdd
from cspguard.setlogic.symbolic import SymbolicAlgebra
from cspguard.sfs import SfsContext, analyze_sfs
from cspguard.syntax import bekic_elaborate, parse


def queens(mgr_cls, n: int) -> int:
    m = mgr_cls(n * n)

    def x(i, j):
        return m.var(i * n + j)

    f = 1
    for i in range(n):
        f = m.and_(f, bdd.disj(m, [x(i, j) for j in range(n)]))
    for i in range(n):
        for j in range(n):
            clash = []
            for k in range(n):
                if k != j:
                    clash.append(x(i, k))
                if k != i:
                    clash.append(x(k, j))
                d = k - i
                if d and 0 <= j + d < n:
                    clash.append(x(k, j + d))
                if d and 0 <= j - d < n:
                    clash.append(x(k, j - d))
            f = m.and_(f, m.implies(x(i, j), bdd.conj(m, [m.not_(c) for c in clash])))
    return bdd.count(m, f, range(n * n))


def sfs_run(mgr_cls, source: str) -> bool:
    spec = parse(source)
    alg = SymbolicAlgebra(spec.alphabet, manager_cls=mgr_cls)
    res = analyze_sfs(bekic_elaborate(spec, spec.root), SfsContext(alg))
    return res.livelock_free


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--queens", type=int, nargs="*", default=[6, 7])
    ap.add_argument("--milner", type=int, nargs="*", default=[10, 20])
    ap.add_argument("--philosophers", type=int, nargs="*", default=[5, 10])
    args = ap.parse_args()

    cores = [("python", bdd.PyManager)]
    if bdd.CyManager is not None:
        cores.append(("cython", bdd.CyManager))
    else:
        print("compiled core not built; timing the pure-Python manager only")

    jobs = [(f"queens-{n}", queens, n) for n in args.queens]
    jobs += [(f"milner-{n}", sfs_run, milner(n)) for n in args.milner]
    jobs += [(f"philosophers-{n}", sfs_run, philosophers(n)) for n in args.philosophers]

    print(f"{'workload':<18}" + "".join(f"{name:>12}" for name, _ in cores) + f"{'speedup':>10}")
    for label, fn, arg in jobs:
        results, times = [], []
        for _, cls in cores:
            r, t = timed(fn, cls, arg)
            results.append(r)
            times.append(t)
        assert len(set(results)) == 1, f"{label}: cores disagree {results}"
        speed = f"{times[0] / times[1]:>9.1f}x" if len(times) > 1 and times[1] > 0 else ""
        print(f"{label:<18}" + "".join(f"{t:>11.3f}s" for t in times) + speed)


if __name__ == "__main__":
    main()
