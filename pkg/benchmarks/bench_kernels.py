"""Compare the numba and numpy backends of the F_p kernels.

Run with ``python3 benchmarks/bench_kernels.py``.  Both backends are called
directly, so the CARNOT_NO_JIT flag does not matter here.  Outputs one line per
case: backend timings, speedup and whether the results agree.
"""

import argparse
import time

import numpy as np
from numba import njit

from carnot import _kernels
from carnot.catalog import build, spec
from carnot.morphism import fp_plan, gl_candidates

jit_extend = njit(cache=True)(_kernels._extend_loops)
jit_rref = njit(cache=True)(_kernels._rref_mod_p_loops)

CASES = [
    ("aut n1-(8) mod 13", spec("n1pm", 8, sign="-"), 13),
    ("aut L(2,3) mod 13", spec("L23", 3), 13),
    ("aut m0^{3,5}(9) mod 7", spec("m0_S", 9, (3, 5)), 7),
    ("aut n2(13) mod 11", spec("n2", 13), 11),
]


def _args(plan):
    return (plan["n"], plan["starts"], plan["tree_x"], plan["tree_y"], plan["minv"],
            plan["ha"], plan["hb"], plan["hc"], plan["hv"], plan["pair_i"],
            plan["pair_j"], plan["gcoef"])


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def bench_extend(repeat):
    for label, sp, p in CASES:
        g = build(sp)
        plan = fp_plan(g, g, p)
        cands = np.ascontiguousarray(gl_candidates(g.degree_dims[0], p))
        args = _args(plan)
        jit_extend(cands[:2], p, *args, False)        # compile outside the timing
        t_jit, (ok_jit, _) = best_of(lambda: jit_extend(cands, p, *args, False), repeat)
        t_np, (ok_np, _) = best_of(lambda: _kernels._extend_numpy(cands, p, *args, False), repeat)
        same = bool(np.array_equal(ok_jit, ok_np))
        print(f"{label:26s} K={len(cands):6d} numba {t_jit * 1e3:8.2f} ms  numpy {t_np * 1e3:8.2f} ms"
              f"  speedup {t_np / t_jit:6.1f}x  |Aut|={int(ok_jit.sum())}  agree={same}")


def bench_rref(repeat, size, p, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(size, size + 7), dtype=np.int64)
    jit_rref(a.copy(), p)
    t_jit, (r1, piv1) = best_of(lambda: jit_rref(a.copy(), p), repeat)
    t_np, (r2, piv2) = best_of(lambda: _kernels._rref_mod_p_numpy(a.copy(), p), repeat)
    same = bool(np.array_equal(r1, r2) and np.array_equal(piv1, piv2))
    print(f"{'rref ' + str(size) + 'x' + str(size + 7) + ' mod ' + str(p):26s}"
          f"          numba {t_jit * 1e3:8.2f} ms  numpy {t_np * 1e3:8.2f} ms"
          f"  speedup {t_np / t_jit:6.1f}x  agree={same}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--rref-size", type=int, default=120)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    bench_extend(a.repeat)
    bench_rref(a.repeat, a.rref_size, 101, a.seed)


if __name__ == "__main__":
    main()
