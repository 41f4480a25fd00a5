"""Dynkin quivers, height functions, adapted Coxeter elements, phi and the C_Q duality datum."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klrkit.cartan import standard_datum
from klrkit.dynkin import (
    DynkinQuiver, adapted_coxeter, adapted_orders, build_cq_datum, default_height, gamma, permutation_equivalent,
    phi_map, pole_orders, repetition_quiver, repetition_vertices, validate_height, verify_thm_g0,
    weyl_element_signature,
)
from klrkit.errors import DynkinError, HypothesisViolated, InvalidHeightFunction, NoAdaptedOrder


def all_orientations(name):
    datum = standard_datum(name)
    edges = [(a, b) for a, b in itertools.combinations(datum.index, 2) if datum.cartan(a, b)]
    out = []
    for flips in itertools.product((False, True), repeat=len(edges)):
        arrows = [(b, a) if f else (a, b) for (a, b), f in zip(edges, flips)]
        out.append(DynkinQuiver(datum, arrows))
    return out


SMALL = [Q for name in ("A1", "A2", "A3", "A4", "D4") for Q in all_orientations(name)]


def linear_extension_count(Q):
    """Orders with i before j for every arrow i -> j, by brute force."""
    count = 0
    for order in itertools.permutations(Q.vertices):
        pos = {v: k for k, v in enumerate(order)}
        if all(pos[i] < pos[j] for i, j in Q.arrows):
            count += 1
    return count


# ----- quivers and heights -----

def test_orientation_validation():
    A3 = standard_datum("A3")
    with pytest.raises(DynkinError):
        DynkinQuiver(A3, [(1, 2)])
    with pytest.raises(DynkinError):
        DynkinQuiver(A3, [(1, 2), (2, 1), (2, 3)])
    with pytest.raises(DynkinError):
        DynkinQuiver(A3, [(1, 3), (1, 2), (2, 3)])
    with pytest.raises(DynkinError):
        DynkinQuiver(standard_datum("B2"), [(1, 2)])
    with pytest.raises(DynkinError):
        DynkinQuiver(standard_datum("A1^(1)"), [])


def test_from_config_and_sources():
    Q = DynkinQuiver.from_config({"type": "A3", "arrows": [[2, 1], [2, 3]]})
    assert Q.sources() == [2]
    assert Q.reflect(2).sources() == [1, 3]
    assert Q.reversed().sources() == [1, 3]
    assert Q.is_type_a()
    assert not DynkinQuiver(standard_datum("D4"), [(1, 2), (2, 3), (2, 4)]).is_type_a()


def test_height_validation():
    Q = DynkinQuiver.linear_a(3)
    assert validate_height(Q, {1: 5, 2: 4, 3: 3}) == {1: 5, 2: 4, 3: 3}
    with pytest.raises(InvalidHeightFunction):
        validate_height(Q, {1: 0, 2: 1, 3: 0})
    with pytest.raises(InvalidHeightFunction):
        validate_height(DynkinQuiver.linear_a(1), {})
    assert default_height(Q) == {1: 0, 2: -1, 3: -2}
    assert default_height(Q, 3, 7) == {1: 9, 2: 8, 3: 7}


@pytest.mark.parametrize("Q", SMALL, ids=lambda Q: f"{Q.datum.n}:{Q.arrows}")
def test_default_height_is_valid(Q):
    xi = default_height(Q)
    for i, j in Q.arrows:
        assert xi[j] == xi[i] - 1


def test_repetition_quiver_shapes():
    A1 = DynkinQuiver.linear_a(1)
    rq = repetition_quiver(A1, {1: 0}, (-4, 4))
    assert not rq.arrows
    assert len(rq.vertices) == 5
    A2 = DynkinQuiver.linear_a(2)
    rq = repetition_quiver(A2, {1: 1, 2: 0}, (-3, 3))
    assert all(rq.out_degree(v) == 1 for v in rq.vertices if v[1] < 3)
    assert all(b[1] == a[1] + 1 for a, b in rq.arrows)
    D4 = DynkinQuiver(standard_datum("D4"), [(1, 2), (2, 3), (2, 4)])
    xi = default_height(D4, 2, 0)
    rq = repetition_quiver(D4, xi, (-6, 6))
    assert rq.out_degree((2, 0)) == 3 and rq.in_degree((2, 0)) == 3
    assert rq.out_degree((1, 1)) == 1


def test_repetition_vertices_parity():
    Q = DynkinQuiver.linear_a(2)
    verts = repetition_vertices(Q, {1: 1, 2: 0}, (-2, 2))
    assert all((p - {1: 1, 2: 0}[i]) % 2 == 0 for i, p in verts)


# ----- adapted orders -----

def test_adapted_orders_small():
    A2 = DynkinQuiver.linear_a(2)
    assert adapted_orders(A2) == [(1, 2)]
    assert adapted_orders(A2.reversed()) == [(2, 1)]
    assert adapted_orders(DynkinQuiver.linear_a(3)) == [(1, 2, 3)]
    Q = DynkinQuiver.from_config({"type": "A3", "arrows": [[2, 1], [2, 3]]})
    assert sorted(adapted_orders(Q)) == [(2, 1, 3), (2, 3, 1)]


@pytest.mark.parametrize("Q", SMALL, ids=lambda Q: f"{Q.datum.n}:{Q.arrows}")
def test_adapted_coxeter_exhaustive(Q):
    orders = adapted_orders(Q)
    # adapted orders are exactly the linear extensions of the arrow order
    assert len(orders) == linear_extension_count(Q)
    c = adapted_coxeter(Q)
    sigs = {weyl_element_signature(Q.datum, o) for o in orders}
    assert len(sigs) == 1
    # a Coxeter element has order h
    h = Q.datum.coxeter_number()
    for i in Q.datum.index:
        v = Q.datum.simple_root(i)
        for _ in range(h):
            v = Q.datum.weyl_apply(c, v)
        assert v == Q.datum.simple_root(i)


def test_no_adapted_order_on_a_cycle():
    Q = DynkinQuiver.linear_a(2)
    bad = DynkinQuiver.__new__(DynkinQuiver)
    bad.datum, bad.vertices, bad.arrows = Q.datum, Q.vertices, [(1, 2), (2, 1)]
    with pytest.raises(NoAdaptedOrder):
        adapted_coxeter(bad)


# ----- gamma and phi -----

def test_gamma():
    D4 = DynkinQuiver(standard_datum("D4"), [(1, 2), (3, 2), (4, 2)])
    assert gamma(D4, 2) == (1, 1, 1, 1)
    assert gamma(D4, 1) == (1, 0, 0, 0)
    A3 = DynkinQuiver.linear_a(3)
    assert [gamma(A3, i) for i in (1, 2, 3)] == [(1, 0, 0), (1, 1, 0), (1, 1, 1)]


def test_phi_a1_alternates():
    table = phi_map(DynkinQuiver.linear_a(1), {1: 0}, (-6, 6))
    for p in range(-6, 7, 2):
        assert table[(1, p)] == ((1,), p // 2)


def test_phi_a2_golden_rows():
    table = phi_map(DynkinQuiver.linear_a(2), {1: 1, 2: 0}, (-2, 1))
    assert table.rows() == [
        [1, 1, [1, 0], 0],
        [2, 0, [1, 1], 0],
        [1, -1, [0, 1], 0],
        [2, -2, [1, 0], -1],
    ]
    assert table.preimage((1, 1), 0) == (2, 0)
    assert table.preimage((1, 1), 5) is None


@pytest.mark.parametrize("Q", SMALL, ids=lambda Q: f"{Q.datum.n}:{Q.arrows}")
def test_phi_satisfies_signed_mesh_relations(Q):
    """Knitting oracle: with signed classes (-1)^j beta, each mesh sums to zero."""
    xi = default_height(Q)
    table = phi_map(Q, xi)
    datum = Q.datum
    nbrs = {i: [b for b in datum.index if b != i and datum.cartan(i, b)] for i in datum.index}

    def signed(key):
        root, j = table[key]
        return tuple((-1) ** (j % 2) * x for x in root)

    for i in datum.index:
        assert table[(i, xi[i])] == (gamma(Q, i), 0)
    checked = 0
    for (i, p) in table.values:
        if (i, p - 2) not in table or not all((b, p - 1) in table for b in nbrs[i]):
            continue
        lhs = tuple(a + b for a, b in zip(signed((i, p)), signed((i, p - 2))))
        rhs = tuple(sum(c) for c in zip(*([signed((b, p - 1)) for b in nbrs[i]] or [(0,) * datum.n])))
        assert lhs == rhs
        checked += 1
    assert checked > 0


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "D4"])
def test_phi_is_bijection(name):
    for Q in all_orientations(name):
        table = phi_map(Q, default_height(Q))
        report = table.bijection_report()
        assert report["injective"] and report["positive_roots"] and report["interior_rows_full"]
        assert {-1, 0, 1} <= set(report["full_rows"])
        assert len(Q.datum.positive_roots()) == {"A1": 1, "A2": 3, "A3": 6, "D4": 12}[name]


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([Q for Q in SMALL if Q.datum.n <= 3]), st.integers(-5, 5))
def test_phi_shift_invariance(Q, c):
    xi = default_height(Q)
    base = phi_map(Q, xi, (-8, 8))
    moved = phi_map(Q, {i: v + c for i, v in xi.items()}, (-8 + c, 8 + c))
    assert {(i, p + c): val for (i, p), val in base.values.items()} == moved.values


# ----- the C_Q datum -----

@pytest.mark.parametrize("n,reverse", [(1, False), (2, False), (2, True), (3, False), (3, True)])
def test_verify_thm_g0_linear(n, reverse):
    Q = DynkinQuiver.linear_a(n, reverse=reverse)
    report = verify_thm_g0(Q, default_height(Q))
    assert report["passed"]
    assert report["max_pole_order"] <= 1
    assert permutation_equivalent(report["cartan_AJ"], [list(r) for r in Q.datum.a])


def test_verify_thm_g0_a3_bipartite():
    Q = DynkinQuiver.from_config({"type": "A3", "arrows": [[2, 1], [2, 3]]})
    assert verify_thm_g0(Q, default_height(Q))["passed"]


def test_cq_datum_points_and_poles():
    Q = DynkinQuiver.linear_a(2)
    xi = {1: 1, 2: 0}
    dd, table, simple = build_cq_datum(Q, xi)
    h = 3
    for v in dd.J:
        i, p = v
        assert dd.X[v] == ((-1) ** ((p + h) % 2), p + h)
        assert dd.s[v] == i
    # phi(1, 1) = (alpha_1, 0) and phi(1, -1) = (alpha_2, 0)
    assert simple == {1: (1, 1), 2: (1, -1)}
    poles = pole_orders(dd)
    assert poles[((1, -1), (1, 1))] == 1
    assert poles[((1, 1), (1, -1))] == 0


def test_pole_hypothesis_violation(monkeypatch):
    import klrkit.dynkin as dynkin

    Q = DynkinQuiver.linear_a(2)
    monkeypatch.setattr(dynkin, "pole_orders", lambda dd: {(v, v): 2 for v in dd.J})
    with pytest.raises(HypothesisViolated):
        verify_thm_g0(Q, {1: 1, 2: 0})


def test_cq_datum_type_a_only():
    D4 = DynkinQuiver(standard_datum("D4"), [(1, 2), (2, 3), (2, 4)])
    with pytest.raises(DynkinError):
        build_cq_datum(D4, default_height(D4))


def test_permutation_equivalent():
    assert permutation_equivalent([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], [[2, 0, -1], [0, 2, -1], [-1, -1, 2]])
    assert not permutation_equivalent([[2, -1], [-1, 2]], [[2, 0], [0, 2]])
