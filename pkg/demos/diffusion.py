"""Fractional diffusion of a tent with zero flux at both ends.

Runs implicit Euler to t = 2 for the Caputo (p = 0.25) and R-L (p = 0.75)
flux. Mass is conserved in both; the Caputo profile flattens towards 1/2
while the R-L profile grows at the endpoints.

    python3 demos/diffusion.py
"""
import numpy as np

from fracspm import diffusion_run

X = np.array([-0.99, -0.5, 0.0, 0.5, 0.99])


def main():
    for deriv, p in (("caputo", 0.25), ("rl", 0.75)):
        run = diffusion_run(deriv, 1.5, p, 100, 0.0025, 2.0, snapshot_times=(0.0, 0.1, 2.0))
        drift = max(abs(m - 1.0) for _, m in run.mass_series)
        print(f"{deriv} (p={p}), max |mass - 1| over {run.steps} steps: {drift:.1e}")
        for t, sol in run.snapshots:
            print(f"  t={t:4.2f}  u = " + " ".join(f"{v:8.4f}" for v in sol(X)))


if __name__ == "__main__":
    main()
