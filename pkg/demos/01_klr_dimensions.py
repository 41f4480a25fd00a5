"""KLR algebras: relations, graded dimensions and the two ways of computing them.

Run: python demos/01_klr_dimensions.py
"""

from klrkit.cartan import standard_datum
from klrkit.klr import KLRContext, format_two_var, quiver_q_family


def main():
    datum = standard_datum("A2")
    # Q_12(u, v) = u - v comes from orienting the single edge as 1 -> 2
    ctx = KLRContext(datum, quiver_q_family(datum, {(1, 2): 1}))
    print("Cartan matrix of A2:", [list(r) for r in datum.a])
    print("Q_12(u, v) =", format_two_var(ctx.qfam.coeffs(1, 2)))

    # every defining relation, instantiated on every word of content alpha_1 + alpha_2 + alpha_1
    words = ctx.words(beta=(2, 1))
    nonzero = sum(1 for nu in words for _, r in ctx.relation_residuals(nu) if r)
    print(f"{len(words)} words of content (2, 1); nonzero relation residuals: {nonzero}")

    # graded dimension of e(mu) R e(nu): closed formula versus brute-force rank count
    for mu in words:
        for nu in words:
            closed = ctx.graded_dim_hom(mu, nu, 8)
            brute = ctx.brute_force_dim_hom(mu, nu, 8)
            mark = "agree" if closed == brute else "DISAGREE"
            print(f"  dim_q e{mu} R e{nu} through q^8: {closed.to_pairs()}  [{mark}]")


if __name__ == "__main__":
    main()
