"""Cyclotomic quotients against the Shapovalov form, and the sl_2 functor identities.

Run: python demos/02_cyclotomic_and_shapovalov.py
"""

from klrkit.cartan import CartanDatum
from klrkit.cyclotomic import build_cyclotomic, categorification_check, resolution_dim_check
from klrkit.klr import KLRContext
from klrkit.modules import CyclotomicFamily, check_sl2_identity, regular_module
from klrkit.shapovalov import Shapovalov


def main():
    sl2 = KLRContext(CartanDatum([[2]]))
    lam = (2,)
    for b in range(0, 4):
        A = build_cyclotomic(sl2, lam, (b,))
        print(f"R^Lambda({b} alpha) for <h, Lambda> = 2: dim {A.dim}, dim_q = {A.summary()['graded_dimension_text']}")

    # each block matches one Gram entry of the contravariant form up to a single q-power
    form = Shapovalov(sl2.datum, lam)
    print("Gram entry (f f v, f f v):", form.form((1, 1), (1, 1)).to_pairs())
    report = categorification_check(sl2, lam, (2,))
    print("block check for beta = 2 alpha:", report["blocks_checked"], "blocks, shift", report["shift"],
          "passed" if report["passed"] else "failed")

    # E F versus F E on the regular module: the sl_2 relation with lambda = Lambda - beta
    family = CyclotomicFamily(sl2, lam, max_height=4)
    for b in (0, 1, 2):
        M = regular_module(family.get((b,)))
        rep = check_sl2_identity(family, M, 1)
        print(f"  beta = {b} alpha: <h, Lambda - beta> = {rep['pairing']} ({rep['branch']} branch) passed={rep['passed']}")

    # the two-term resolution shadow: dim_q F^Lambda = dim_q K_0 - dim_q K_1
    rep = resolution_dim_check(sl2, lam, (1,), 1, cutoff=8)
    print("resolution check, beta = alpha: F =", rep["F"], "K_1 shift", rep["shift"], "passed" if rep["passed"] else "failed")


if __name__ == "__main__":
    main()
