"""Poly-fractonomials map to Jacobi polynomials under the two-sided integral.

For alpha = 1.5 and a few skewness values p this demo solves for (mu, nu),
applies the closed-form image of the order 2-alpha integral to J_k, and
compares it with direct singular quadrature of the convolution integrals.

    python3 demos/spectral_relations.py
"""
import numpy as np
from scipy.special import eval_jacobi

from fracspm import BasisDescriptor, solve_mu_nu
from fracspm.fracbasis import apply_I_2ma
from fracspm.selftest import fractional_integral_quad


def quadrature_image(frac, k, x):
    f = lambda t: eval_jacobi(k, frac.mu, frac.nu, t)
    left = fractional_integral_quad(f, frac.mu, frac.nu, x, 2.0 - frac.alpha, "left")
    right = fractional_integral_quad(f, frac.mu, frac.nu, x, 2.0 - frac.alpha, "right")
    return frac.c_alpha_p * (frac.p * left + (1.0 - frac.p) * right)


def main():
    alpha, k = 1.5, 5
    xs = np.linspace(-0.9, 0.9, 7)
    for p in (0.5, 0.8, 1.0):
        frac = solve_mu_nu(alpha, p)
        image = apply_I_2ma(BasisDescriptor.poly_fractonomial(k, frac), k)
        err = max(abs(image(x) - quadrature_image(frac, k, x)) for x in xs)
        print(f"p={p:.1f}  mu={frac.mu:+.6f} nu={frac.nu:+.6f}  "
              f"max |closed form - quadrature| for J_{k}: {err:.2e}")


if __name__ == "__main__":
    main()
