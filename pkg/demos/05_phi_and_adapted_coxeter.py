"""Height functions, the adapted Coxeter element, the phi labelling and the C_Q datum.

Run: python demos/05_phi_and_adapted_coxeter.py
"""

from klrkit.dynkin import DynkinQuiver, adapted_coxeter, default_height, phi_map, verify_thm_g0


def main():
    Q = DynkinQuiver.linear_a(3)
    xi = default_height(Q)
    print("quiver arrows:", Q.arrows, "height function:", xi)
    print("adapted Coxeter element (reduced word):", adapted_coxeter(Q))

    table = phi_map(Q, xi, (-6, 0))
    print("phi(i, p) = (root, j), from the top of the window down:")
    for i, p, root, j in table.rows():
        print(f"  ({i}, {p:>2}) -> ({root}, {j})")
    print("bijection report:", table.bijection_report())

    # vertices k -> phi^{-1}(alpha_k, 0), fundamental modules at (-q)^{p + h}
    report = verify_thm_g0(Q, xi)
    print("vertex map:", report["vertex_map"])
    print("Gamma^J arrows:", report["gamma_J"]["arrows"], "max pole order:", report["max_pole_order"])
    print("A^J:", report["cartan_AJ"], "passed:", report["passed"])


if __name__ == "__main__":
    main()
