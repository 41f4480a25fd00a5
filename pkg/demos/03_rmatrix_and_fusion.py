"""Normalized R-matrices of the vector representation, their denominator, and fusion.

Run: python demos/03_rmatrix_and_fusion.py
"""

from klrkit.affine import (
    build_vector_rep, denominator, fusion_image, renormalized, solve_normalized_rmatrix, unitarity_scalar,
    yang_baxter_check,
)


def main():
    V = build_vector_rep(2)
    R = solve_normalized_rmatrix(V, V)
    print("R(z) on V (x) V_z for N = 2, nonzero entries (row, column, value):")
    for r, c, x in sorted(R.entries(), key=lambda t: (t[1], t[0])):
        print(f"  ({r}, {c}): {x}")
    print("denominator d(z) =", denominator(R))
    print("Yang-Baxter:", yang_baxter_check(V, V, V)["passed"])
    print("R(z) R(1/z) =", unitarity_scalar(V, V))

    # fusing l consecutive points q^0, q^2, ... gives the l-th fundamental module, or zero past N
    for N in (2, 3):
        Rn = renormalized(solve_normalized_rmatrix(build_vector_rep(N), build_vector_rep(N)))
        dims = [fusion_image(N, 0, l - 1, Rn)[0].dim for l in range(1, N + 2)]
        print(f"N = {N}: fused dimensions for l = 1..{N + 1}: {dims}")


if __name__ == "__main__":
    main()
