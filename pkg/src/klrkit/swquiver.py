"""Quivers, Cartan matrices and KLR data built from R-matrix denominators.

A duality datum is a finite vertex set ``J`` with points ``X(j) = sign * q^m``,
module labels ``s(j)`` and the denominators ``d_{s, s'}(z)`` of the normalized
R-matrices between the labelled modules.  The number of arrows ``i -> j`` is
the order of zero of ``d_{s(i), s(j)}(z)`` at ``z = X(j) / X(i)``; the
Cartan matrix has ``a_ij = -d_ij - d_ji`` off the diagonal and the KLR
polynomials are ``Q_ij(u, v) = (u - v)^{d_ij} (v - u)^{d_ji}``.
"""

from .affine import (
    ZPolynomial, ZeroModule, build_vector_rep, denominator, fusion_image, renormalized,
    solve_normalized_rmatrix,
)
from .cartan import CartanDatum
from .errors import NegativeOrder, NotGCM, NotRealizable, QuiverError
from .klr import KLRContext, quiver_q_family
from .ratfunc import RationalFunctionQZ, order_of_zero, signed_q_power


class Quiver:
    """Vertices with arrow multiplicities ``arrows[(i, j)]``."""

    def __init__(self, vertices, arrows=None):
        self.vertices = list(vertices)
        self.arrows = {k: v for k, v in (arrows or {}).items() if v}

    def multiplicity(self, i, j):
        return self.arrows.get((i, j), 0)

    def out_degree(self, i):
        return sum(m for (a, _), m in self.arrows.items() if a == i)

    def in_degree(self, j):
        return sum(m for (_, b), m in self.arrows.items() if b == j)

    def has_loops(self):
        return any(i == j for (i, j) in self.arrows)

    def reversed(self):
        return Quiver(self.vertices, {(j, i): m for (i, j), m in self.arrows.items()})

    def relabel(self, mapping):
        return Quiver([mapping[v] for v in self.vertices], {(mapping[i], mapping[j]): m for (i, j), m in self.arrows.items()})

    def __eq__(self, other):
        return isinstance(other, Quiver) and set(self.vertices) == set(other.vertices) and self.arrows == other.arrows

    def to_json(self):
        return {
            "vertices": [_label_json(v) for v in self.vertices],
            "arrows": [[_label_json(i), _label_json(j), m] for (i, j), m in sorted(self.arrows.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))],
        }

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {sum(self.arrows.values())} arrows)"


def _label_json(v):
    return list(v) if isinstance(v, tuple) else v


class DualityDatum:
    """Vertex window ``J``, points ``X``, labels ``s`` and the denominator table.

    ``X[j] = (sign, m)`` stands for ``sign * q^m``; ``denominators[(s, s')]``
    is a ZPolynomial (or any function of ``z``).  ``reps`` optionally maps a
    label to the AffineRep it stands for.
    """

    def __init__(self, J, X, s, denominators, reps=None, name="datum"):
        self.J = list(J)
        self.X = {j: (int(X[j][0]), int(X[j][1])) for j in self.J}
        self.s = {j: s[j] for j in self.J}
        self.denominators = dict(denominators)
        self.reps = dict(reps or {})
        self.name = name
        for j, (sign, _) in self.X.items():
            if sign not in (1, -1):
                raise QuiverError(f"point of {j} must be +-q^m")
        for key, d in self.denominators.items():
            if isinstance(d, ZPolynomial) and d.coeffs[-1] != 1:
                raise QuiverError(f"denominator for {key} is not monic")

    def ratio(self, i, j):
        """X(j) / X(i) as (sign, m)."""
        si, mi = self.X[i]
        sj, mj = self.X[j]
        return (si * sj, mj - mi)

    def denominator(self, i, j):
        key = (self.s[i], self.s[j])
        if key not in self.denominators:
            raise QuiverError(f"no denominator for the pair {key}")
        d = self.denominators[key]
        return d.as_function() if isinstance(d, ZPolynomial) else RationalFunctionQZ(d)

    def arrow_count(self, i, j):
        order = order_of_zero(self.denominator(i, j), self.ratio(i, j))
        if order < 0:
            raise NegativeOrder(f"denominator for ({i}, {j}) has a pole at X(j)/X(i)")
        return order

    def to_config(self):
        return {
            "J": [_label_json(j) for j in self.J],
            "X": [[_label_json(j), list(self.X[j])] for j in self.J],
            "s": [[_label_json(j), self.s[j]] for j in self.J],
            "denominators": [[list(k) if isinstance(k, tuple) else k, d.to_json() if hasattr(d, "to_json") else str(d)]
                             for k, d in sorted(self.denominators.items(), key=lambda kv: str(kv[0]))],
        }


def build_quiver(dd):
    """``(Gamma^J, A^J, Q^J)`` for a duality datum; A^J is returned as a CartanDatum."""
    arrows = {}
    for i in dd.J:
        for j in dd.J:
            if i == j:
                continue
            m = dd.arrow_count(i, j)
            if m:
                arrows[(i, j)] = m
    quiver = Quiver(dd.J, arrows)
    n = len(dd.J)
    a = [[2 if r == c else -quiver.multiplicity(dd.J[r], dd.J[c]) - quiver.multiplicity(dd.J[c], dd.J[r]) for c in range(n)] for r in range(n)]
    for r in range(n):
        for c in range(n):
            if a[r][c] != a[c][r]:
                raise NotGCM("A^J is not symmetric")
    datum = CartanDatum(a, index=dd.J)
    qfam = quiver_q_family(datum, arrows)
    return quiver, datum, qfam


def instantiate_klr(dd, beta=None):
    """KLR context for ``(A^J, Q^J)``, restricted to the support of ``beta`` if given.

    ``beta`` maps vertices to multiplicities.
    """
    quiver, datum, _ = build_quiver(dd)
    if beta is None:
        verts = dd.J
    else:
        verts = [j for j in dd.J if beta.get(j, 0)]
    sub = DualityDatum(verts, dd.X, dd.s, dd.denominators, dd.reps, dd.name)
    sub_quiver = Quiver(verts, {k: m for k, m in quiver.arrows.items() if k[0] in verts and k[1] in verts})
    n = len(verts)
    a = [[2 if r == c else -sub_quiver.multiplicity(verts[r], verts[c]) - sub_quiver.multiplicity(verts[c], verts[r]) for c in range(n)] for r in range(n)]
    sub_datum = CartanDatum(a, index=verts)
    ctx = KLRContext(sub_datum, quiver_q_family(sub_datum, sub_quiver.arrows))
    ctx.duality_datum = sub
    return ctx


def vector_window_datum(N, lo, hi, denominator_poly=None):
    """Vertices ``lo..hi`` with ``X(j) = q^{2j}`` and every label the vector representation."""
    if denominator_poly is None:
        V = build_vector_rep(N)
        denominator_poly = denominator(solve_normalized_rmatrix(V, V))
    J = list(range(lo, hi + 1))
    return DualityDatum(J, {j: (1, 2 * j) for j in J}, {j: "V" for j in J},
                        {("V", "V"): denominator_poly}, reps={"V": N}, name=f"vector window {lo}..{hi}")


def duality_on_onedim(dd, nu, R_vv=None):
    """Image of the one-dimensional module with word ``nu`` (all x, tau acting by 0).

    Realized for a single vertex (the labelled module at its point) and for
    words of consecutive vertices ``nu_{k+1} / nu_k = q^2`` with every label
    the vector representation (the renormalized R-matrix composite).
    Returns ``(module or ZeroModule, report)``.
    """
    nu = list(nu)
    if not nu:
        raise NotRealizable("empty word")
    for v in nu:
        if v not in dd.X:
            raise NotRealizable(f"vertex {v} is not in the datum")
    labels = {dd.s[v] for v in nu}
    N = dd.reps.get("V")
    if len(nu) == 1:
        v = nu[0]
        rep = dd.reps.get(dd.s[v])
        if rep is None:
            raise NotRealizable(f"no module attached to label {dd.s[v]}")
        if isinstance(rep, int):
            rep = build_vector_rep(rep)
        sign, m = dd.X[v]
        mod = rep.at_point(signed_q_power(sign, m), name=f"F(S({v}))", check=True)
        return mod, {"word": [_label_json(v)], "dimension": mod.dim, "top_weight_dim": 1}
    if labels != {"V"} or N is None:
        raise NotRealizable("only words in the vector representation are realized beyond length one")
    for a, b in zip(nu, nu[1:]):
        if dd.ratio(a, b) != (1, 2):
            raise NotRealizable("consecutive points must have ratio q^2")
    sign, m0 = dd.X[nu[0]]
    if sign != 1 or m0 % 2:
        raise NotRealizable("points must be even powers of q")
    a = m0 // 2
    mod, rep = fusion_image(N, a, a + len(nu) - 1, R_vv)
    top = None
    if not isinstance(mod, ZeroModule):
        top = sum(1 for w in mod.weights if w == mod.weights[mod.dominant])
    return mod, {"word": [_label_json(v) for v in nu], "dimension": mod.dim, "top_weight_dim": top, "rank": rep["rank"]}


def renormalized_vector_rmatrix(N):
    V = build_vector_rep(N)
    return renormalized(solve_normalized_rmatrix(V, V))
