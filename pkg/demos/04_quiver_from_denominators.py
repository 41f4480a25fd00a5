"""From R-matrix denominators to a quiver, a Cartan matrix and a KLR algebra.

Run: python demos/04_quiver_from_denominators.py
"""

from klrkit.klr import format_two_var
from klrkit.swquiver import build_quiver, duality_on_onedim, instantiate_klr, vector_window_datum


def main():
    # vertices 0..3 at the points q^0, q^2, q^4, q^6, all labelled by the vector representation of sl_3
    dd = vector_window_datum(3, 0, 3)
    print("denominator d_{V,V}(z) =", dd.denominators[("V", "V")])
    quiver, cartan, qfam = build_quiver(dd)
    print("arrows:", sorted(quiver.arrows))
    print("A^J:", [list(r) for r in cartan.a])
    print("Q_01(u, v) =", format_two_var(qfam.coeffs(0, 1)))

    ctx = instantiate_klr(dd, {0: 1, 1: 1})
    print("KLR algebra on the support {0, 1}: Cartan", [list(r) for r in ctx.datum.a])

    # one-dimensional modules with consecutive words go to fused modules
    for word in ([0], [0, 1], [0, 1, 2], [0, 1, 2, 3]):
        mod, report = duality_on_onedim(dd, word)
        print(f"  word {word}: image of dimension {report['dimension']}")


if __name__ == "__main__":
    main()
