"""Dynkin quivers, height functions, adapted Coxeter elements and the map phi.

Conventions:

* A Weyl word ``(i_1, ..., i_l)`` acts on root vectors as ``s_{i_1} ... s_{i_l}``
  with the rightmost reflection applied first (``CartanDatum.weyl_apply``).
* The adapted Coxeter element ``tau`` is ``s_{i_1} ... s_{i_n}`` where
  ``i_1`` is a source of ``Q``, ``i_2`` a source of ``s_{i_1}(Q)`` and so on.
* ``phi(i, p - 2)`` is obtained from ``phi(i, p)`` with ``tau`` and
  ``phi(i, p + 2)`` with ``tau^{-1}``; a negative root flips sign and moves
  the second coordinate by one.
"""

import itertools
from collections import deque

from .affine import denominator, fundamental_rep, solve_normalized_rmatrix
from .cartan import CartanDatum
from .errors import (
    DynkinError, HypothesisViolated, IdentityViolation, InductionConflict, InvalidHeightFunction,
    NoAdaptedOrder,
)
from .ratfunc import order_of_zero
from .swquiver import DualityDatum, Quiver, build_quiver


class DynkinQuiver:
    """An orientation of a simply-laced finite-type Dynkin diagram.

    ``arrows`` lists pairs ``(i, j)`` meaning ``i -> j``; every edge of the
    diagram must be oriented exactly once.
    """

    def __init__(self, datum, arrows):
        self.datum = datum
        self.vertices = list(datum.index)
        self.arrows = [tuple(a) for a in arrows]
        if not datum.is_finite_type():
            raise DynkinError("a Dynkin quiver needs a finite-type Cartan datum")
        edges = set()
        for i, j in self.arrows:
            if datum.cartan(i, j) != -1 or datum.cartan(j, i) != -1:
                raise DynkinError(f"{i} -> {j} is not a simply-laced edge of the diagram")
            key = frozenset((i, j))
            if key in edges:
                raise DynkinError(f"edge {i} - {j} is oriented twice")
            edges.add(key)
        for a, b in itertools.combinations(self.vertices, 2):
            if datum.cartan(a, b) and frozenset((a, b)) not in edges:
                raise DynkinError(f"edge {a} - {b} has no orientation")

    @classmethod
    def linear_a(cls, n, reverse=False):
        """``1 -> 2 -> ... -> n`` (or the reverse)."""
        from .cartan import standard_datum
        arrows = [(k + 1, k) if reverse else (k, k + 1) for k in range(1, n)]
        return cls(standard_datum(f"A{n}"), arrows)

    @classmethod
    def from_config(cls, cfg):
        from .cartan import datum_from_config, standard_datum
        datum = standard_datum(cfg["type"]) if "type" in cfg else datum_from_config(cfg)
        return cls(datum, [tuple(a) for a in cfg.get("arrows", [])])

    def sources(self):
        targets = {j for _, j in self.arrows}
        return [v for v in self.vertices if v not in targets]

    def reflect(self, i):
        """``s_i(Q)``: reverse the arrows touching ``i``."""
        arrows = [(j, k) if i not in (j, k) else (k, j) for j, k in self.arrows]
        out = DynkinQuiver.__new__(DynkinQuiver)
        out.datum, out.vertices, out.arrows = self.datum, self.vertices, arrows
        return out

    def reversed(self):
        out = DynkinQuiver.__new__(DynkinQuiver)
        out.datum, out.vertices, out.arrows = self.datum, self.vertices, [(j, i) for i, j in self.arrows]
        return out

    def as_quiver(self):
        return Quiver(self.vertices, {a: 1 for a in self.arrows})

    def is_type_a(self):
        return self.datum.a == CartanDatum(_type_a_matrix(self.datum.n)).a and list(self.vertices) == list(range(1, self.datum.n + 1))

    def to_config(self):
        return {"index": list(self.vertices), "matrix": [list(r) for r in self.datum.a], "arrows": [list(a) for a in self.arrows]}


def _type_a_matrix(n):
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]


# ----- height functions -----

def validate_height(Q, xi):
    for i, j in Q.arrows:
        if xi[j] != xi[i] - 1:
            raise InvalidHeightFunction(f"xi({j}) must be xi({i}) - 1 along {i} -> {j}")
    missing = [v for v in Q.vertices if v not in xi]
    if missing:
        raise InvalidHeightFunction(f"no height for {missing}")
    return dict(xi)


def default_height(Q, anchor=None, value=0):
    """The height function with ``xi(anchor) = value`` (anchor defaults to the first vertex)."""
    anchor = Q.vertices[0] if anchor is None else anchor
    xi = {anchor: value}
    queue = deque([anchor])
    while queue:
        v = queue.popleft()
        for i, j in Q.arrows:
            if i == v and j not in xi:
                xi[j] = xi[v] - 1
                queue.append(j)
            elif j == v and i not in xi:
                xi[i] = xi[v] + 1
                queue.append(i)
    return validate_height(Q, xi)


def repetition_vertices(Q, xi, window):
    lo, hi = window
    return [(i, p) for p in range(lo, hi + 1) for i in Q.vertices if (p - xi[i]) % 2 == 0]


def repetition_quiver(Q, xi, window):
    """The repetition quiver restricted to ``p`` in ``window = (lo, hi)``."""
    validate_height(Q, xi)
    verts = repetition_vertices(Q, xi, window)
    vset = set(verts)
    arrows = {}
    for i, j in Q.arrows:
        for a, b in ((i, j), (j, i)):
            for (v, p) in verts:
                if v == a and (b, p + 1) in vset:
                    arrows[((a, p), (b, p + 1))] = 1
    return Quiver(verts, arrows)


# ----- adapted Coxeter elements -----

def adapted_orders(Q):
    """All orderings ``(i_1, ..., i_n)`` of the vertices with ``i_k`` a source of ``s_{i_{k-1}} ... s_{i_1}(Q)``."""
    out = []
    for order in itertools.permutations(Q.vertices):
        cur = Q
        ok = True
        for i in order:
            if i not in cur.sources():
                ok = False
                break
            cur = cur.reflect(i)
        if ok:
            out.append(tuple(order))
    return out


def weyl_element_signature(datum, word):
    """The images of the simple roots, which determine the Weyl group element."""
    return tuple(datum.weyl_apply(word, datum.simple_root(i)) for i in datum.index)


def adapted_coxeter(Q):
    """A reduced word for the Coxeter element adapted to ``Q`` (the first adapted order).

    Raises NoAdaptedOrder if there is none and IdentityViolation if two adapted
    orders define different Weyl group elements.
    """
    orders = adapted_orders(Q)
    if not orders:
        raise NoAdaptedOrder("no ordering of the vertices is adapted to the quiver")
    sig = weyl_element_signature(Q.datum, orders[0])
    for o in orders[1:]:
        if weyl_element_signature(Q.datum, o) != sig:
            raise IdentityViolation("adapted orders give different Weyl group elements", {"orders": [list(orders[0]), list(o)]})
    return orders[0]


def gamma(Q, i):
    """Sum of the simple roots ``alpha_j`` over the vertices ``j`` with a path ``j -> ... -> i`` (including ``i``)."""
    reach = {i}
    queue = deque([i])
    while queue:
        v = queue.popleft()
        for a, b in Q.arrows:
            if b == v and a not in reach:
                reach.add(a)
                queue.append(a)
    return Q.datum.content(sorted(reach, key=Q.datum.pos))


# ----- phi -----

class PhiTable:
    """A finite piece of ``phi``: ``(i, p) -> (root vector, j)``."""

    def __init__(self, Q, xi, window, values, tau):
        self.Q, self.xi, self.window = Q, dict(xi), tuple(window)
        self.values = dict(values)
        self.tau = tuple(tau)

    def __getitem__(self, key):
        return self.values[key]

    def __contains__(self, key):
        return key in self.values

    def __len__(self):
        return len(self.values)

    def preimage(self, root, j=0):
        root = tuple(root)
        hits = [v for v, val in self.values.items() if val == (root, j)]
        return hits[0] if len(hits) == 1 else None

    def rows(self):
        """JSON rows ``[i, p, root coordinates, j]`` sorted by ``p`` then vertex position."""
        keyed = sorted(self.values.items(), key=lambda kv: (-kv[0][1], self.Q.datum.pos(kv[0][0])))
        return [[i, p, list(root), j] for (i, p), (root, j) in keyed]

    def bijection_report(self):
        """Injectivity and which rows ``Delta_+ x {j}`` are fully covered."""
        images = list(self.values.values())
        injective = len(set(images)) == len(images)
        positive = set(self.Q.datum.positive_roots())
        by_row = {}
        for root, j in images:
            by_row.setdefault(j, set()).add(root)
        full = sorted(j for j, roots in by_row.items() if roots == positive)
        js = sorted(by_row)
        interior = [j for j in js if js[0] < j < js[-1]]
        return {
            "injective": injective,
            "rows": js,
            "full_rows": full,
            "interior_rows_full": all(j in full for j in interior),
            "positive_roots": all(r in positive for r, _ in images),
        }


def phi_map(Q, xi, window=None):
    """``phi`` on the repetition-quiver vertices with ``p`` in ``window``.

    Seeds ``phi(i, xi_i) = (gamma_i, 0)`` and propagates along each column
    with ``tau`` (downwards) and ``tau^{-1}`` (upwards).  Two different values
    for one vertex raise InductionConflict.
    """
    validate_height(Q, xi)
    datum = Q.datum
    h = datum.coxeter_number()
    if window is None:
        window = (min(xi.values()) - 2 * h, max(xi.values()) + 2 * h)
    lo, hi = window
    tau = adapted_coxeter(Q)
    tau_inv = tuple(reversed(tau))
    values = {}

    def assign(key, val):
        old = values.get(key)
        if old is not None and old != val:
            raise InductionConflict(f"phi{key} assigned both {old} and {val}")
        if old is None:
            values[key] = val
            return True
        return False

    queue = deque()
    for i in Q.vertices:
        if lo <= xi[i] <= hi:
            assign((i, xi[i]), (gamma(Q, i), 0))
            queue.append((i, xi[i]))
    while queue:
        i, p = queue.popleft()
        beta, j = values[(i, p)]
        for step, word in ((-2, tau), (2, tau_inv)):
            if not lo <= p + step <= hi:
                continue
            img = datum.weyl_apply(word, beta)
            if all(x >= 0 for x in img):
                val = (img, j)
            else:
                val = (tuple(-x for x in img), j - 1 if step < 0 else j + 1)
            if assign((i, p + step), val):
                queue.append((i, p + step))
    return PhiTable(Q, xi, window, values, tau)


# ----- the duality datum attached to Q -----

_ROOT_DATA_CACHE = {}


def _fundamental_rmatrix(N, i, j):
    key = (N, i, j)
    if key not in _ROOT_DATA_CACHE:
        Mi = fundamental_rep(N, i)
        Mj = Mi if i == j else fundamental_rep(N, j)
        R = solve_normalized_rmatrix(Mi, Mj)
        _ROOT_DATA_CACHE[key] = (R, denominator(R))
    return _ROOT_DATA_CACHE[key]


def cq_vertex_set(table):
    """Vertices ``(i, p)`` with ``phi(i, p) = (alpha_k, 0)``, keyed by ``k``."""
    datum = table.Q.datum
    out = {}
    for k in datum.index:
        v = table.preimage(datum.simple_root(k), 0)
        if v is None:
            raise InductionConflict(f"(alpha_{k}, 0) has no unique preimage in the window")
        out[k] = v
    return out


def build_cq_datum(Q, xi, window=None):
    """Duality datum with ``X(i, p) = (-q)^{p + h}`` and ``s(i, p) = V(varpi_i)`` (type A only)."""
    if not Q.is_type_a():
        raise DynkinError("denominators are only available for type A quivers labelled 1..n")
    table = phi_map(Q, xi, window)
    h = Q.datum.coxeter_number()
    simple = cq_vertex_set(table)
    J = sorted(simple.values(), key=lambda v: (Q.datum.pos(v[0]), v[1]))
    X = {(i, p): (-1 if (p + h) % 2 else 1, p + h) for (i, p) in J}
    s = {(i, p): i for (i, p) in J}
    N = Q.datum.n + 1
    labels = sorted(set(s.values()))
    dens = {(a, b): _fundamental_rmatrix(N, a, b)[1] for a in labels for b in labels}
    dd = DualityDatum(J, X, s, dens, reps={}, name=f"C_Q datum for A{Q.datum.n}")
    return dd, table, simple


def pole_orders(dd):
    """Pole order of the normalized R-matrix ``R_{s(i), s(j)}(z)`` at ``z = X(j) / X(i)`` for all pairs.

    The denominator is the lcm of the reduced entry denominators, so its order
    of zero at a point is the pole order of the R-matrix there.
    """
    out = {}
    for a in dd.J:
        for b in dd.J:
            out[(a, b)] = max(0, order_of_zero(dd.denominator(a, b), dd.ratio(a, b)))
    return out


def verify_thm_g0(Q, xi, window=None):
    """Check that ``A^J`` is the Cartan matrix of Q's diagram and ``k -> phi^{-1}(alpha_k, 0)`` maps ``Q^rev`` onto ``Gamma^J``.

    The pole-order hypothesis (at most 1) is checked first and raises
    HypothesisViolated.  A failed identity raises IdentityViolation.
    """
    dd, table, simple = build_cq_datum(Q, xi, window)
    poles = pole_orders(dd)
    worst = max(poles.values()) if poles else 0
    if worst > 1:
        bad = [[list(a), list(b), m] for (a, b), m in poles.items() if m > 1]
        raise HypothesisViolated(f"normalized R-matrix has a pole of order {worst}", bad)
    quiver, AJ, _ = build_quiver(dd)
    datum = Q.datum
    for k in datum.index:
        for l in datum.index:
            if AJ.cartan(simple[k], simple[l]) != datum.cartan(k, l):
                raise IdentityViolation("A^J differs from the Cartan matrix under k -> phi^{-1}(alpha_k, 0)",
                                        {"k": k, "l": l, "AJ": AJ.cartan(simple[k], simple[l]), "A": datum.cartan(k, l)})
    expected = Quiver(quiver.vertices, {(simple[j], simple[i]): 1 for i, j in Q.arrows})
    if quiver != expected:
        raise IdentityViolation("Gamma^J is not the image of the reversed quiver",
                                {"gamma": quiver.to_json(), "expected": expected.to_json()})
    return {
        "tau": list(table.tau),
        "J": [list(v) for v in dd.J],
        "X": {str(list(v)): list(dd.X[v]) for v in dd.J},
        "vertex_map": {str(k): list(v) for k, v in simple.items()},
        "max_pole_order": worst,
        "gamma_J": quiver.to_json(),
        "cartan_AJ": [list(r) for r in AJ.a],
        "passed": True,
    }


def permutation_equivalent(a, b):
    """Whether two square matrices agree up to a simultaneous permutation of rows and columns."""
    n = len(a)
    if n != len(b):
        return False
    return any(all(a[perm[r]][perm[c]] == b[r][c] for r in range(n) for c in range(n)) for perm in itertools.permutations(range(n)))
