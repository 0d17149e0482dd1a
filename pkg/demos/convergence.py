"""Penalty (SPM) versus tau (PGS-tau) on the four benchmark families.

Case 1 problems have a manufactured exact solution; the table shows the
L-infinity error on 1000 interior points as N doubles.

    python3 demos/convergence.py
"""
from fracspm import BENCHMARKS, Method, benchmark_specs, convergence_sweep

N_LIST = (8, 16, 32, 64)


def main():
    for key, bench in BENCHMARKS.items():
        spec = benchmark_specs(key, 1, 1.5)
        print(f"{key}: {bench.bc.value}, alpha=1.5, p={bench.p}")
        for method in (Method.SPM, Method.PGS_TAU):
            rep = convergence_sweep(spec, N_LIST, method)
            errs = "  ".join(f"{r.linf_error:.2e}" for r in rep.rows)
            print(f"  {method.value:8s} {errs}")


if __name__ == "__main__":
    main()
