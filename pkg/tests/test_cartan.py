import pytest
from hypothesis import given
from hypothesis import strategies as st

from klrkit.cartan import CartanDatum, affine_type_a, datum_from_config, standard_datum
from klrkit.errors import IndexOutOfRange, NotFiniteType, NotGCM, NotSymmetrizable
from oracles import brute_positive_roots

FINITE = ["A1", "A2", "A3", "B2", "C3", "D4"]


def test_b2_symmetrizer_and_form():
    d = CartanDatum([[2, -2], [-1, 2]])
    assert d.d == (1, 2)
    assert d.bilinear(1, 1) == 2 and d.bilinear(2, 2) == 4 and d.bilinear(1, 2) == -2


@pytest.mark.parametrize("matrix,err", [
    ([[2, 1], [-1, 2]], NotGCM),
    ([[2, -1], [0, 2]], NotGCM),
    ([[1]], NotGCM),
    ([[2, -1, -1], [-1, 2, -1], [-2, -1, 2]], NotSymmetrizable),
])
def test_invalid_matrices(matrix, err):
    with pytest.raises(err):
        CartanDatum(matrix)


def test_explicit_d_must_symmetrize():
    with pytest.raises(NotSymmetrizable):
        CartanDatum([[2, -2], [-1, 2]], d=(1, 1))


def test_unknown_label():
    with pytest.raises(IndexOutOfRange):
        standard_datum("A2").pos(7)


@pytest.mark.parametrize("name,count,h", [("A1", 1, 2), ("A2", 3, 3), ("A3", 6, 4), ("B2", 4, 4), ("D4", 12, 6)])
def test_positive_roots_and_coxeter_number(name, count, h):
    d = standard_datum(name)
    roots = d.positive_roots()
    assert len(roots) == count
    assert set(roots) == brute_positive_roots(d)
    assert d.coxeter_number() == h


def test_affine_is_not_finite():
    with pytest.raises(NotFiniteType):
        affine_type_a(3).positive_roots()
    assert not standard_datum("A1^(1)").is_finite_type()


@pytest.mark.parametrize("name", FINITE)
def test_simple_reflection_permutes_other_positive_roots(name):
    d = standard_datum(name)
    roots = set(d.positive_roots())
    for i in d.index:
        a = d.simple_root(i)
        assert d.weyl_reflect(i, a) == tuple(-x for x in a)
        rest = roots - {a}
        assert {d.weyl_reflect(i, r) for r in rest} == rest


@pytest.mark.parametrize("name", FINITE + ["A1^(1)"])
def test_bilinear_form_is_symmetric(name):
    d = standard_datum(name)
    assert all(d.bilinear(i, j) == d.bilinear(j, i) for i in d.index for j in d.index)


def test_weyl_apply_rightmost_first():
    d = standard_datum("A2")
    # s1 s2 (alpha_1): s2 first gives alpha_1 + alpha_2, then s1 gives alpha_2
    assert d.weyl_apply((1, 2), (1, 0)) == (0, 1)


def test_config_round_trip():
    d = CartanDatum([[2, -2], [-1, 2]], index=("a", "b"))
    assert datum_from_config(d.to_config()) == d
    assert datum_from_config({"type": "D4"}) == standard_datum("D4")


@given(st.integers(0, 1), st.integers(0, 1), st.integers(-3, -1))
def test_perturbed_matrices_are_rejected_or_symmetrizable(i, j, entry):
    a = [[2, -1], [-1, 2]]
    if i != j:
        a[i][j] = entry
        d = CartanDatum(a)
        assert d.d[0] * a[0][1] == d.d[1] * a[1][0]
    else:
        a[i][i] = entry
        with pytest.raises(NotGCM):
            CartanDatum(a)
