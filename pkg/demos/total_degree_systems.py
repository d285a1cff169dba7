"""Total-degree orthonormal vectors and where their closed forms live.

P_n collects the n+1 orthonormal polynomials of total degree n.  At or
above the threshold k0 the component with leading monomial x^k y^{n-k}
is q_k(x, y) U_{n-k}(y) up to normalization; the handful of components
below k0 come from quadrature Gram-Schmidt.  Either way the assembled
vector is orthonormal against the quadrature oracle.
"""

import numpy as np

from bsz2d.total_order import build_total_vector, gram_deviation, total_threshold
from bsz2d.weights import product_spec


def main():
    spec = product_spec([0.5, -0.3])
    k0 = total_threshold(spec)
    print("spec:", spec, " closed-form threshold k0 =", k0)

    for n in range(5):
        system = build_total_vector(spec, n)
        dev = gram_deviation(spec, system)
        sources = ["oracle" if k < k0 else "closed" for k, _ in (idx for idx, _ in system.entries)]
        print(f"n = {n}: gram deviation {dev:.2e}, components: {sources}")

    print("\ncomponents of P_3 (Chebyshev-U coefficient grids):")
    system = build_total_vector(spec, 3)
    for (k, j), p in system.entries:
        print(f"  leading x^{k} y^{j}:")
        print(np.array_str(np.asarray(p.coeffs, dtype=float), precision=4, suppress_small=True))

    print("\npre-normalization norms consumed per component:")
    print(np.round(system.norms, 6))


if __name__ == "__main__":
    main()
