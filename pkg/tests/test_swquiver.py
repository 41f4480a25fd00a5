"""Quivers, Cartan matrices and KLR data built from R-matrix denominators."""

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klrkit.affine import ZPolynomial, ZeroModule, build_vector_rep, qpow
from klrkit.errors import NegativeOrder, NotRealizable, QuiverError
from klrkit.klr import format_two_var
from klrkit.ratfunc import RationalFunctionQZ
from klrkit.swquiver import (
    DualityDatum, Quiver, build_quiver, duality_on_onedim, instantiate_klr, renormalized_vector_rmatrix,
    vector_window_datum,
)

Z_MINUS_Q2 = ZPolynomial.from_text("z - q^2")


@pytest.fixture(scope="module")
def window3():
    # the denominator is solved here, not supplied
    return vector_window_datum(3, 0, 3)


def test_window_gives_path_quiver(window3):
    quiver, datum, qfam = build_quiver(window3)
    assert quiver.arrows == {(0, 1): 1, (1, 2): 1, (2, 3): 1}
    assert not quiver.has_loops()
    assert [quiver.out_degree(j) for j in range(4)] == [1, 1, 1, 0]


def test_window_cartan_matrix(window3):
    _, datum, _ = build_quiver(window3)
    for r in range(4):
        for c in range(4):
            expected = 2 if r == c else (-1 if abs(r - c) == 1 else 0)
            assert datum.a[r][c] == expected
    assert datum.is_finite_type()


def test_window_q_polynomials(window3):
    _, _, qfam = build_quiver(window3)
    for i in range(3):
        assert format_two_var(qfam.coeffs(i, i + 1)) == "u - v"
        assert format_two_var(qfam.coeffs(i + 1, i)) == "-u + v"
    assert format_two_var(qfam.coeffs(0, 2)) == "1"


def test_solved_denominator_matches_text(window3):
    assert window3.denominators[("V", "V")] == Z_MINUS_Q2


@settings(max_examples=20, deadline=None)
@given(st.integers(-5, 5), st.integers(1, 4))
def test_shifted_window_is_isomorphic(lo, length):
    base, _, _ = build_quiver(vector_window_datum(2, 0, length, Z_MINUS_Q2))
    shifted, _, _ = build_quiver(vector_window_datum(2, lo, lo + length, Z_MINUS_Q2))
    assert base.relabel({j: j + lo for j in base.vertices}) == shifted


def test_double_zero_gives_double_arrows():
    dd = vector_window_datum(2, 0, 1, ZPolynomial.from_text("(z - q^2)^2"))
    quiver, datum, qfam = build_quiver(dd)
    assert quiver.multiplicity(0, 1) == 2
    assert datum.a[0][1] == -2
    assert format_two_var(qfam.coeffs(0, 1)) == "u^2 - 2*u*v + v^2"


def test_arrows_in_both_directions():
    # zeros at q^2 and q^-2 give one arrow each way; Q_ij = (u - v)(v - u)
    d = ZPolynomial.from_text("(z - q^2)*(z - q^(-2))")
    dd = vector_window_datum(2, 0, 1, d)
    quiver, datum, qfam = build_quiver(dd)
    assert quiver.arrows == {(0, 1): 1, (1, 0): 1}
    assert datum.a[0][1] == -2
    assert format_two_var(qfam.coeffs(0, 1)) == "-u^2 + 2*u*v - v^2"


def test_signed_points():
    # X(j) = (-q)^j with denominator z + q: arrows j -> j + 1
    J = [0, 1, 2]
    X = {j: (-1 if j % 2 else 1, j) for j in J}
    dd = DualityDatum(J, X, {j: "W" for j in J}, {("W", "W"): ZPolynomial.from_text("z + q")})
    quiver, _, _ = build_quiver(dd)
    assert quiver.arrows == {(0, 1): 1, (1, 2): 1}


def test_pole_gives_negative_order():
    J = [0, 1]
    bad = RationalFunctionQZ(1) / (RationalFunctionQZ.z() - RationalFunctionQZ.point(1, 2))
    dd = DualityDatum(J, {0: (1, 0), 1: (1, 2)}, {0: "V", 1: "V"}, {("V", "V"): bad})
    with pytest.raises(NegativeOrder):
        build_quiver(dd)


def test_datum_validation():
    with pytest.raises(QuiverError):
        DualityDatum([0], {0: (2, 0)}, {0: "V"}, {})
    with pytest.raises(QuiverError):
        DualityDatum([0], {0: (1, 0)}, {0: "V"}, {("V", "V"): ZPolynomial([1, 2])})
    dd = DualityDatum([0, 1], {0: (1, 0), 1: (1, 2)}, {0: "V", 1: "W"}, {("V", "V"): Z_MINUS_Q2})
    with pytest.raises(QuiverError):
        build_quiver(dd)


def test_quiver_helpers():
    Q = Quiver([1, 2, 3], {(1, 2): 1, (2, 3): 2, (3, 1): 0})
    assert Q.arrows == {(1, 2): 1, (2, 3): 2}
    assert Q.in_degree(3) == 2 and Q.out_degree(1) == 1
    assert Q.reversed().arrows == {(2, 1): 1, (3, 2): 2}
    assert Q.to_json() == {"vertices": [1, 2, 3], "arrows": [[1, 2, 1], [2, 3, 2]]}


def test_instantiate_klr_on_support(window3):
    ctx = instantiate_klr(window3, {1: 1, 2: 1})
    assert list(ctx.datum.index) == [1, 2]
    assert ctx.datum.a == ((2, -1), (-1, 2))
    assert format_two_var(ctx.qfam.coeffs(1, 2)) == "u - v"
    assert ctx.duality_datum.J == [1, 2]
    # R(alpha_1 + alpha_2) relations still hold in the restricted algebra
    for nu in ((1, 2), (2, 1)):
        assert all(not r for _, r in ctx.relation_residuals(nu))


def test_instantiate_klr_graded_dims_match_a2(window3, a2):
    ctx = instantiate_klr(window3, {0: 1, 1: 1})
    for mu, nu in (((0, 1), (0, 1)), ((0, 1), (1, 0))):
        ours = ctx.graded_dim_hom(mu, nu, 8)
        ref = a2.graded_dim_hom(tuple(x + 1 for x in mu), tuple(x + 1 for x in nu), 8)
        assert ours == ref


@pytest.fixture(scope="module")
def window_n3():
    return vector_window_datum(3, 0, 4, Z_MINUS_Q2)


@pytest.mark.parametrize("j", [0, 2])
def test_single_vertex_is_evaluated_vector_rep(window_n3, j):
    mod, report = duality_on_onedim(window_n3, [j])
    ref = build_vector_rep(3).at_point(qpow(2 * j))
    assert mod.weights == ref.weights
    assert mod.E == ref.E and mod.F == ref.F
    assert report["dimension"] == 3


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_consecutive_word_dimensions(window_n3, l):
    Rn = renormalized_vector_rmatrix(3)
    mod, report = duality_on_onedim(window_n3, list(range(l)), Rn)
    if l <= 3:
        assert mod.dim == comb(3, l) == report["dimension"]
        assert report["top_weight_dim"] == 1
    else:
        assert isinstance(mod, ZeroModule)
        assert report["dimension"] == 0


def test_unrealizable_words(window_n3):
    with pytest.raises(NotRealizable):
        duality_on_onedim(window_n3, [])
    with pytest.raises(NotRealizable):
        duality_on_onedim(window_n3, [0, 2])
    with pytest.raises(NotRealizable):
        duality_on_onedim(window_n3, [1, 0])
    with pytest.raises(NotRealizable):
        duality_on_onedim(window_n3, [9])
    odd = DualityDatum([0, 1], {0: (1, 1), 1: (1, 3)}, {0: "V", 1: "V"}, {("V", "V"): Z_MINUS_Q2}, reps={"V": 2})
    with pytest.raises(NotRealizable):
        duality_on_onedim(odd, [0, 1])
    unlabeled = DualityDatum([0], {0: (1, 0)}, {0: "W"}, {})
    with pytest.raises(NotRealizable):
        duality_on_onedim(unlabeled, [0])


def test_to_config_round_trip_text(window3):
    cfg = window3.to_config()
    assert cfg["J"] == [0, 1, 2, 3]
    assert cfg["X"][2] == [2, [1, 4]]
    assert cfg["denominators"][0][1]["text"] == "z - q^2"
