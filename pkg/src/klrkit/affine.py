"""Type A_{N-1}^{(1)} representations with spectral parameter and their R-matrices.

Conventions (fixed once, validated by the denominator ``z - q^2`` of the
vector representation):

* coproduct ``e -> e (x) K^{-1} + 1 (x) e``, ``f -> f (x) 1 + K (x) f``,
  ``K -> K (x) K``;
* vector representation ``f_i u_i = u_{i+1}``, ``e_i u_{i+1} = u_i`` for
  ``1 <= i < N`` and ``e_0 u_1 = u_N``, ``f_0 u_N = u_1``;
* a module at spectral point ``c`` has ``e_0`` scaled by ``c`` and ``f_0``
  by ``c^{-1}`` (specializing the affinization at ``z = c``).

The normalized R-matrix ``M_1 (x) (M_2)_z -> (M_2)_z (x) M_1`` is computed by
propagation: ``u_1 (x) u_2`` generates the tensor product for generic ``z``,
so an intertwiner is determined by ``u_1 (x) u_2 -> u_2 (x) u_1`` and the
rule ``R(g v) = g R(v)``.  The candidate is then verified to commute with
every generator, which proves existence; cyclicity together with a
one-dimensional target weight space proves uniqueness.
"""

from math import comb

import sympy

from .cartan import affine_type_a
from .errors import IdentityViolation, NonUniqueSolution, NoSolution, RelationFailure, SpecializationSingular
from .ratfunc import FIELD, RING, RationalFunctionQZ, _subst_poly, order_of_zero, signed_q_power
from .linalg import field_row_echelon

_Z = FIELD.gens[0]
_W = FIELD.gens[1]
_Q = FIELD.gens[2]
_ONE = FIELD.one
_ZERO = FIELD.zero


def qint(n):
    """[n] = (q^n - q^{-n}) / (q - q^{-1}) as a field element."""
    if n == 0:
        return _ZERO
    if n < 0:
        return -qint(-n)
    out = _ZERO
    for k in range(n):
        out += signed_q_power(1, n - 1 - 2 * k)
    return out


def qpow(m):
    return signed_q_power(1, m)


def _is_zero(a):
    return not a


# ---------------------------------------------------------------------------
# sparse vectors and matrices over the field
# ---------------------------------------------------------------------------

def _acc(out, key, c):
    v = out.get(key, _ZERO) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _apply(mat, vec):
    out = {}
    for k, c in vec.items():
        col = mat.get(k)
        if col:
            for r, a in col.items():
                _acc(out, r, a * c)
    return out


def _vec_sub(a, b):
    out = dict(a)
    for k, c in b.items():
        _acc(out, k, -c)
    return out


class AffineRep:
    """Finite-dimensional representation of U_q'(A_{N-1}^{(1)}) on weight vectors.

    ``weights[k]`` lists ``<h_i, wt(v_k)>`` for ``i = 0..N-1``; ``E[i]`` and
    ``F[i]`` map a basis index to a sparse column ``{row: field element}``.
    ``dominant`` is the index of a dominant extremal weight vector.
    The constructor verifies every defining relation unless ``check=False``.
    """

    def __init__(self, N, weights, E, F, dominant=0, name="M", check=True):
        self.N = N
        self.datum = affine_type_a(N)
        self.weights = [tuple(w) for w in weights]
        self.dim = len(self.weights)
        self.E = {i: {c: dict(col) for c, col in E.get(i, {}).items()} for i in range(N)}
        self.F = {i: {c: dict(col) for c, col in F.get(i, {}).items()} for i in range(N)}
        self.dominant = dominant
        self.name = name
        if check:
            self.check_relations()

    # ----- actions -----
    def e(self, i, vec):
        return _apply(self.E[i], vec)

    def f(self, i, vec):
        return _apply(self.F[i], vec)

    def K(self, i, vec, sign=1):
        return {k: c * qpow(sign * self.weights[k][i]) for k, c in vec.items()}

    def generator(self, kind, i, vec):
        return self.e(i, vec) if kind == "e" else self.f(i, vec)

    def generators(self):
        return [(kind, i) for i in range(self.N) for kind in ("e", "f")]

    def basis(self, k):
        return {k: _ONE}

    def weight_of(self, vec):
        ws = {self.weights[k] for k in vec}
        if len(ws) != 1:
            raise ValueError("not a weight vector")
        return ws.pop()

    def character(self):
        """Multiset of weights as a sorted list of (weight, multiplicity)."""
        out = {}
        for w in self.weights:
            out[w] = out.get(w, 0) + 1
        return sorted(out.items())

    # ----- relations -----
    def check_relations(self):
        a = self.datum.a
        N = self.N
        for k in range(self.dim):
            v = {k: _ONE}
            wt = self.weights[k]
            for j in range(N):
                for sgn, mat in ((1, self.E[j]), (-1, self.F[j])):
                    for r in mat.get(k, {}):
                        want = tuple(wt[i] + sgn * a[i][j] for i in range(N))
                        if self.weights[r] != want:
                            raise RelationFailure(f"{self.name}: generator {j} does not shift weights by alpha_{j}")
            for i in range(N):
                for j in range(N):
                    comm = _vec_sub(self.e(i, self.f(j, v)), self.f(j, self.e(i, v)))
                    want = {k: qint(wt[i])} if i == j and wt[i] else {}
                    if _vec_sub(comm, want):
                        raise RelationFailure(f"{self.name}: [e_{i}, f_{j}] relation fails on basis vector {k}")
                    if i == j:
                        continue
                    m = 1 - a[i][j]
                    for act in (self.e, self.f):
                        total = {}
                        for s in range(m + 1):
                            w = v
                            for _ in range(s):
                                w = act(i, w)
                            w = act(j, w)
                            for _ in range(m - s):
                                w = act(i, w)
                            coeff = _q_binomial(m, s) * (-1 if s % 2 else 1)
                            for key, c in w.items():
                                _acc(total, key, c * coeff)
                        if total:
                            raise RelationFailure(f"{self.name}: Serre relation ({i}, {j}) fails on basis vector {k}")
        return True

    # ----- constructions -----
    def at_point(self, c, name=None, check=False):
        """The same module with e_0 scaled by c and f_0 by 1/c."""
        c = _as_field(c)
        E = dict(self.E)
        F = dict(self.F)
        E[0] = {k: {r: x * c for r, x in col.items()} for k, col in self.E[0].items()}
        F[0] = {k: {r: x / c for r, x in col.items()} for k, col in self.F[0].items()}
        return AffineRep(self.N, self.weights, E, F, self.dominant, name or f"{self.name}_{c}", check=check)

    def tensor(self, other, name=None, check=False):
        """M (x) N with the coproduct e -> e (x) K^{-1} + 1 (x) e, f -> f (x) 1 + K (x) f."""
        if other.N != self.N:
            raise ValueError("rank mismatch")
        d2 = other.dim
        weights = [tuple(x + y for x, y in zip(w1, w2)) for w1 in self.weights for w2 in other.weights]
        E, F = {}, {}
        for i in range(self.N):
            Ei, Fi = {}, {}
            for a1 in range(self.dim):
                for b in range(d2):
                    col_e, col_f = {}, {}
                    kinv = qpow(-other.weights[b][i])
                    kv = qpow(self.weights[a1][i])
                    for r, c in self.E[i].get(a1, {}).items():
                        _acc(col_e, r * d2 + b, c * kinv)
                    for r, c in other.E[i].get(b, {}).items():
                        _acc(col_e, a1 * d2 + r, c)
                    for r, c in self.F[i].get(a1, {}).items():
                        _acc(col_f, r * d2 + b, c)
                    for r, c in other.F[i].get(b, {}).items():
                        _acc(col_f, a1 * d2 + r, c * kv)
                    if col_e:
                        Ei[a1 * d2 + b] = col_e
                    if col_f:
                        Fi[a1 * d2 + b] = col_f
            E[i], F[i] = Ei, Fi
        return AffineRep(self.N, weights, E, F, self.dominant * d2 + other.dominant,
                         name or f"{self.name}*{other.name}", check=check)

    def submodule_from_vectors(self, vectors, name=None, check=True):
        """Restrict to the span of the given weight vectors, which must be closed under all generators.

        Raises RelationFailure if the span is not a subrepresentation.
        """
        blocks = {}
        for v in vectors:
            if v:
                blocks.setdefault(self.weight_of(v), []).append(v)
        basis, weights = [], []
        pivots = {}
        for wt in sorted(blocks):
            keys = sorted({k for v in blocks[wt] for k in v})
            rows = [[v.get(k, _ZERO) for k in keys] for v in blocks[wt]]
            ech, piv = field_row_echelon(rows, _is_zero)
            for row, p in zip(ech, piv):
                vec = {keys[c]: x for c, x in enumerate(row) if x}
                pivots[keys[p]] = len(basis)
                basis.append(vec)
                weights.append(wt)
        E, F = {}, {}
        for i in range(self.N):
            for store, act in ((E, self.e), (F, self.f)):
                mat = {}
                for t, vec in enumerate(basis):
                    img = act(i, vec)
                    if not img:
                        continue
                    col = {}
                    for k, c in img.items():
                        if k in pivots:
                            col[pivots[k]] = c
                    # verify the image lies in the span
                    recon = {}
                    for s, c in col.items():
                        for k, x in basis[s].items():
                            _acc(recon, k, x * c)
                    if _vec_sub(recon, img):
                        raise RelationFailure(f"span is not stable under {'e' if store is E else 'f'}_{i}")
                    mat[t] = col
                store[i] = mat
        rep = AffineRep(self.N, weights, E, F, 0, name or f"sub({self.name})", check=check)
        rep.embedding = basis
        return rep


def _as_field(c):
    if isinstance(c, RationalFunctionQZ):
        return c.raw
    return FIELD(c) if not hasattr(c, "numer") else c


def _q_binomial(m, s):
    num = _ONE
    den = _ONE
    for k in range(s):
        num *= qint(m - k)
        den *= qint(k + 1)
    return num / den


# ---------------------------------------------------------------------------
# standard modules
# ---------------------------------------------------------------------------

def epsilon_weight(N, k):
    """<h_i, eps_k> for i = 0..N-1 (k is 1-based)."""
    w = [0] * N
    for i in range(1, N):
        w[i] = (1 if k == i else 0) - (1 if k == i + 1 else 0)
    w[0] = (1 if k == N else 0) - (1 if k == 1 else 0)
    return tuple(w)


def build_vector_rep(N, point=1, check=True):
    """The N-dimensional vector representation at spectral point ``point``."""
    if N < 2:
        raise ValueError("need N >= 2")
    c = _as_field(point)
    weights = [epsilon_weight(N, k) for k in range(1, N + 1)]
    E = {i: {} for i in range(N)}
    F = {i: {} for i in range(N)}
    for i in range(1, N):
        E[i][i] = {i - 1: _ONE}  # e_i u_{i+1} = u_i (0-based indices)
        F[i][i - 1] = {i: _ONE}  # f_i u_i = u_{i+1}
    E[0][0] = {N - 1: c}  # e_0 u_1 = c u_N
    F[0][N - 1] = {0: 1 / c}  # f_0 u_N = c^{-1} u_1
    return AffineRep(N, weights, E, F, dominant=0, name="V", check=check)


def trivial_rep(N):
    return AffineRep(N, [(0,) * N], {}, {}, dominant=0, name="1")


# ---------------------------------------------------------------------------
# R-matrices
# ---------------------------------------------------------------------------

class RMatrix:
    """Matrix of ``R: M_1 (x) M_2 -> M_2 (x) M_1`` as columns over Q(z, w, q)."""

    def __init__(self, M1, M2, columns, report=None):
        self.M1, self.M2 = M1, M2
        self.columns = columns
        self.report = report or {}

    @property
    def shape(self):
        return (self.M2.dim * self.M1.dim, self.M1.dim * self.M2.dim)

    def entry(self, row, col):
        return RationalFunctionQZ.wrap(self.columns.get(col, {}).get(row, _ZERO))

    def apply(self, vec):
        return _apply(self.columns, vec)

    def entries(self):
        for c, col in self.columns.items():
            for r, x in col.items():
                yield r, c, x

    def substitute(self, var, value):
        idx = {"z": 0, "w": 1, "q": 2}[var]
        v = _as_field(value)
        cols = {}
        for c, col in self.columns.items():
            new = {}
            for r, x in col.items():
                y = _subst(x, idx, v)
                if y:
                    new[r] = y
            if new:
                cols[c] = new
        return RMatrix(self.M1, self.M2, cols, dict(self.report))

    def scaled(self, f):
        f = _as_field(f)
        return RMatrix(self.M1, self.M2, {c: {r: x * f for r, x in col.items()} for c, col in self.columns.items()}, dict(self.report))

    def to_json(self):
        return {
            "source": self.M1.name + "*" + self.M2.name,
            "shape": list(self.shape),
            "entries": [[r, c, RationalFunctionQZ.wrap(x).to_json()] for c, col in sorted(self.columns.items()) for r, x in sorted(col.items())],
        }


def _subst(x, idx, v):
    den = _subst_poly(x.denom, idx, v)
    if not den:
        raise SpecializationSingular("specialization hits a pole")
    return _subst_poly(x.numer, idx, v) / den


def _weight_blocks(rep):
    out = {}
    for k, w in enumerate(rep.weights):
        out.setdefault(w, []).append(k)
    return out


def _swap_index(d1, d2):
    """Index map (a, b) in M1 (x) M2 -> (b, a) in M2 (x) M1."""
    return lambda k: (k % d2) * d1 + k // d2


def solve_normalized_rmatrix(M1, M2, point1=1, point2=None, max_rounds=None):
    """Normalized R-matrix ``(M1)_{point1} (x) (M2)_{point2} -> (M2)_{point2} (x) (M1)_{point1}``.

    ``point2`` defaults to ``z * point1``; the default ``point1 = 1`` gives a
    matrix in ``z = z_2 / z_1`` alone.
    """
    p1 = _as_field(point1)
    p2 = _Z * p1 if point2 is None else _as_field(point2)
    A = M1.at_point(p1)
    B = M2.at_point(p2)
    S = A.tensor(B)
    T = B.tensor(A)
    d1, d2 = M1.dim, M2.dim
    start_s = {M1.dominant * d2 + M2.dominant: _ONE}
    start_t = {M2.dominant * d1 + M1.dominant: _ONE}
    top = S.weights[M1.dominant * d2 + M2.dominant]
    top_dim_t = sum(1 for w in T.weights if w == top)
    if top_dim_t != 1:
        raise NonUniqueSolution("the weight space of u_2 (x) u_1 is not one-dimensional")
    blocks = _weight_blocks(S)
    # per weight: list of (source vector, image vector); kept in echelon form on the source side
    found = {w: [] for w in blocks}
    echelon = {w: _Echelon() for w in blocks}
    queue = [(start_s, start_t)]
    echelon[top].add(start_s)
    found[top].append((start_s, start_t))
    total = 1
    gens = S.generators()
    while queue and total < S.dim:
        v, w = queue.pop(0)
        for kind, i in gens:
            v2 = S.generator(kind, i, v)
            if not v2:
                continue
            wt = S.weights[next(iter(v2))]
            if echelon[wt].add(v2):
                w2 = T.generator(kind, i, w)
                found[wt].append((v2, w2))
                queue.append((v2, w2))
                total += 1
    if total < S.dim:
        raise NonUniqueSolution(f"u_1 (x) u_2 generates only {total} of {S.dim} dimensions")
    columns = {}
    for wt, idxs in blocks.items():
        pairs = found[wt]
        # solve R * src = img for R restricted to this weight space
        src = [[p[0].get(x, _ZERO) for p in pairs] for x in idxs]  # k x k, columns = sources
        inv = _invert(src)
        for t, x in enumerate(idxs):
            col = {}
            # R e_x = sum_s img_s * inv[s][t]
            for s, (_, img) in enumerate(pairs):
                c = inv[s][t]
                if c:
                    for r, y in img.items():
                        _acc(col, r, y * c)
            if col:
                columns[x] = col
    R = RMatrix(M1, M2, columns)
    R.source, R.target = S, T
    # verify intertwining on every basis vector
    for x in range(S.dim):
        for kind, i in gens:
            lhs = R.apply(S.generator(kind, i, {x: _ONE}))
            rhs = T.generator(kind, i, R.apply({x: _ONE}))
            if _vec_sub(lhs, rhs):
                raise NoSolution(f"no intertwiner: propagation is inconsistent with {kind}_{i}")
    R.report = {"cyclic": True, "target_top_weight_dim": 1, "unique": True, "dimension": S.dim}
    return R


class _Echelon:
    """Incremental independence test for sparse vectors over the field."""

    def __init__(self):
        self.rows = {}

    def reduce(self, v):
        v = dict(v)
        for p in sorted(self.rows):
            c = v.get(p)
            if c:
                for k, x in self.rows[p].items():
                    _acc(v, k, -c * x)
        return v

    def add(self, v):
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {k: x * inv for k, x in r.items()}
        for row in self.rows.values():
            c = row.get(p)
            if c:
                for k, x in r.items():
                    _acc(row, k, -c * x)
        self.rows[p] = r
        return True

    @property
    def rank(self):
        return len(self.rows)


def _invert(m):
    n = len(m)
    aug = [list(row) + [_ONE if i == j else _ZERO for j in range(n)] for i, row in enumerate(m)]
    ech, piv = field_row_echelon(aug, _is_zero)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise NoSolution("propagated vectors are not a basis of the weight space")
    return [row[n:] for row in ech]


def intertwiner_space_dimension(M1, M2):
    """Dimension over Q(z, q) of all intertwiners M1 (x) (M2)_z -> (M2)_z (x) M1 (brute-force linear system)."""
    S = M1.tensor(M2.at_point(_Z))
    T = M2.at_point(_Z).tensor(M1)
    # unknowns: weight-preserving entries R[r][c]
    unknowns = []
    for c, wc in enumerate(S.weights):
        for r, wr in enumerate(T.weights):
            if wc == wr:
                unknowns.append((r, c))
    index = {u: k for k, u in enumerate(unknowns)}
    rows = []
    for kind, i in S.generators():
        # (R g_S - g_T R)[r][c] = 0
        eqs = {}
        for (r, c) in unknowns:
            # contribution of R[r][c] to (R g_S)[r][c'] : g_S[c][c']
            for c2, col in (S.E if kind == "e" else S.F)[i].items():
                if c in col:
                    key = (r, c2)
                    eqs.setdefault(key, {})
                    _acc(eqs[key], index[(r, c)], col[c])
            # contribution to (g_T R)[r'][c] : g_T[r'][r]
            gmat = (T.E if kind == "e" else T.F)[i]
            for r2, y in gmat.get(r, {}).items():
                key = (r2, c)
                eqs.setdefault(key, {})
                _acc(eqs[key], index[(r, c)], -y)
        for eq in eqs.values():
            if eq:
                rows.append(eq)
    ech = _Echelon()
    for eq in rows:
        ech.add(eq)
    return len(unknowns) - ech.rank


# ---------------------------------------------------------------------------
# denominators
# ---------------------------------------------------------------------------

class ZPolynomial:
    """Monic polynomial in z with coefficients in Q(q) (``coeffs[k]`` multiplies z^k)."""

    def __init__(self, coeffs):
        self.coeffs = [RationalFunctionQZ(c) for c in coeffs]
        while len(self.coeffs) > 1 and self.coeffs[-1].is_zero():
            self.coeffs.pop()

    @classmethod
    def from_text(cls, text):
        """Parse ``"z - q^2"`` style input; the result must be monic in z."""
        zs, qs = sympy.symbols("z q")
        expr = sympy.sympify(str(text).replace("^", "**"), locals={"z": zs, "q": qs})
        if expr.free_symbols - {zs, qs}:
            raise ValueError(f"denominator {text!r} may only involve z and q")
        poly = sympy.Poly(sympy.together(expr), zs)
        coeffs = [RationalFunctionQZ.wrap(FIELD.from_expr(c)) for c in reversed(poly.all_coeffs())]
        out = cls(coeffs)
        if out.coeffs[-1] != RationalFunctionQZ(1):
            raise ValueError(f"denominator {text!r} is not monic in z")
        return out

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def as_function(self):
        out = RationalFunctionQZ(0)
        for k, c in enumerate(self.coeffs):
            out = out + c * RationalFunctionQZ.z() ** k
        return out

    def order_at(self, sign, m):
        return order_of_zero(self.as_function(), (sign, m))

    def __eq__(self, other):
        if isinstance(other, ZPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __repr__(self):
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            cs = repr(c)
            if k == 0:
                body, sign = (cs[1:], "-") if cs.startswith("-") and " " not in cs else (cs, "+")
                if " " in cs and not cs.startswith("("):
                    body = f"({cs})"
            elif cs == "1":
                body, sign = mono, "+"
            elif cs == "-1":
                body, sign = mono, "-"
            else:
                if cs.startswith("-") and " " not in cs:
                    body, sign = f"{cs[1:]}*{mono}", "-"
                else:
                    body, sign = (f"({cs})*{mono}" if " " in cs else f"{cs}*{mono}"), "+"
            parts.append((sign, body))
        if not parts:
            return "0"
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def to_json(self):
        return {"z_coeffs": [c.to_json() for c in self.coeffs], "text": repr(self)}


def denominator(R):
    """Monic lcm (in z, over Q(q)) of the entry denominators, with powers of z removed."""
    zs, qs = sympy.Symbol("z"), sympy.Symbol("q")
    dom = sympy.QQ.frac_field(qs)
    acc = sympy.Poly(1, zs, domain=dom)
    for _, _, x in R.entries():
        den = x.denom
        if den.degree(RING.gens[1]) > 0:
            raise ValueError("entries depend on the auxiliary variable")
        if den.degree(RING.gens[0]) == 0:
            continue
        p = sympy.Poly(den.as_expr(), zs, domain=dom).monic()
        acc = acc.lcm(p).monic()
    # strip the unit factors z^k
    while acc.degree() > 0 and acc.eval(0) == 0:
        acc = sympy.Poly(sympy.quo(acc.as_expr(), zs), zs, domain=dom)
    coeffs = list(reversed(acc.all_coeffs()))
    return ZPolynomial([RationalFunctionQZ.wrap(FIELD.from_expr(sympy.sympify(dom.to_sympy(c)))) for c in coeffs])


def renormalized(R, d=None):
    """d(z) R(z), which has entries polynomial in z."""
    d = denominator(R) if d is None else d
    return R.scaled(d.as_function())


# ---------------------------------------------------------------------------
# Yang-Baxter and unitarity
# ---------------------------------------------------------------------------

def _apply_on_factors(R, dims, pos, vec):
    """Apply R (acting on factors pos, pos+1 of a tensor with factor dimensions ``dims``) to vec.

    Returns the vector in the tensor whose factors pos, pos+1 are swapped.
    """
    d1, d2 = dims[pos], dims[pos + 1]
    new_dims = list(dims)
    new_dims[pos], new_dims[pos + 1] = d2, d1
    out = {}
    for k, c in vec.items():
        digits = _digits(k, dims)
        local = digits[pos] * d2 + digits[pos + 1]
        for r, x in R.columns.get(local, {}).items():
            nd = list(digits)
            nd[pos], nd[pos + 1] = r // d1, r % d1
            _acc(out, _undigits(nd, new_dims), x * c)
    return out, new_dims


def _digits(k, dims):
    out = []
    for d in reversed(dims):
        out.append(k % d)
        k //= d
    return list(reversed(out))


def _undigits(digits, dims):
    k = 0
    for x, d in zip(digits, dims):
        k = k * d + x
    return k


def yang_baxter_check(M1, M2, M3):
    """Both sides of the braid relation for normalized R-matrices, as exact matrices in z_2/z_1 = z, z_3/z_1 = w."""
    R12 = solve_normalized_rmatrix(M1, M2)                       # z2/z1 = z
    R13 = solve_normalized_rmatrix(M1, M3).substitute("z", _W)   # z3/z1 = w
    R23 = solve_normalized_rmatrix(M2, M3).substitute("z", _W / _Z)  # z3/z2 = w/z
    dims = [M1.dim, M2.dim, M3.dim]
    total = dims[0] * dims[1] * dims[2]
    mismatches = 0
    for k in range(total):
        v = {k: _ONE}
        a, da = _apply_on_factors(R12, dims, 0, v)
        a, da = _apply_on_factors(R13, da, 1, a)
        a, da = _apply_on_factors(R23, da, 0, a)
        b, db = _apply_on_factors(R23, dims, 1, v)
        b, db = _apply_on_factors(R13, db, 0, b)
        b, db = _apply_on_factors(R12, db, 1, b)
        if _vec_sub(a, b):
            mismatches += 1
    report = {"modules": [M1.name, M2.name, M3.name], "dimension": total, "mismatched_columns": mismatches, "passed": mismatches == 0}
    if mismatches:
        raise IdentityViolation("Yang-Baxter equation fails", report)
    return report


def unitarity_scalar(M1, M2):
    """R_{M1,M2}(z) R_{M2,M1}(1/z) as a scalar; raises IdentityViolation if it is not scalar."""
    R12 = solve_normalized_rmatrix(M1, M2)
    R21 = solve_normalized_rmatrix(M2, M1).substitute("z", 1 / _Z)
    scalar = None
    for k in range(M1.dim * M2.dim):
        v = R12.apply(R21.apply({k: _ONE}))
        if set(v) != {k}:
            raise IdentityViolation("unitarity product is not diagonal", {"column": k})
        if scalar is None:
            scalar = v[k]
        elif v[k] != scalar:
            raise IdentityViolation("unitarity product is not scalar", {"column": k})
    return RationalFunctionQZ.wrap(scalar)


# ---------------------------------------------------------------------------
# fusion
# ---------------------------------------------------------------------------

def spectral_point(k):
    """X(k) = q^{2k}."""
    return qpow(2 * k)


class ZeroModule:
    """The zero object returned by fusion when the image vanishes."""

    dim = 0
    name = "0"

    def __repr__(self):
        return "ZeroModule()"


def _longest_word(n):
    """A reduced word for the longest permutation of n letters (as adjacent swap positions)."""
    word = []
    for top in range(n - 1, 0, -1):
        word.extend(range(top))
    return word


def fusion_image(N, a, b, R_vv=None):
    """Image of the renormalized R-matrix composite on V_{X(a)} (x) ... (x) V_{X(b)}.

    Returns (module or ZeroModule, report).  The composite reverses the order
    of the factors; the image is a subrepresentation of the reversed product.
    """
    l = b - a + 1
    if l < 1:
        raise ValueError("need a <= b")
    V = build_vector_rep(N)
    if l == 1:
        return V.at_point(spectral_point(a), name=f"V_{a}", check=True), {"rank": N}
    if R_vv is None:
        R_vv = renormalized(solve_normalized_rmatrix(V, V))
    points = [a + k for k in range(l)]
    dims = [N] * l
    # specialized R-matrices per swap, cached by exponent gap
    cache = {}
    order = list(points)
    swaps = []
    for pos in _longest_word(l):
        x, y = order[pos], order[pos + 1]
        gap = y - x
        if gap not in cache:
            cache[gap] = R_vv.substitute("z", spectral_point(gap))
        swaps.append((pos, cache[gap]))
        order[pos], order[pos + 1] = y, x
    images = []
    for k in range(N ** l):
        v = {k: _ONE}
        for pos, Rm in swaps:
            v, _ = _apply_on_factors(Rm, dims, pos, v)
            if not v:
                break
        if v:
            images.append(v)
    target = None
    for p in order:
        Vp = V.at_point(spectral_point(p))
        target = Vp if target is None else target.tensor(Vp)
    if not images:
        return ZeroModule(), {"rank": 0, "points": points}
    sub = target.submodule_from_vectors(images, name=f"L({a},{b})", check=True)
    if sub.dim == 0:
        return ZeroModule(), {"rank": 0, "points": points}
    # dominant extremal vector: weight cl(varpi_l)
    want = [0] * N
    if l < N:
        want[l] = 1
    want[0] = -1 if l < N else 0
    dom = [k for k, w in enumerate(sub.weights) if w == tuple(want)]
    if len(dom) != 1:
        raise RelationFailure("fused module has no unique dominant extremal vector")
    sub.dominant = dom[0]
    return sub, {"rank": sub.dim, "points": points, "expected": comb(N, l)}


def fusion_module(N, a, b, R_vv=None):
    """V(varpi_l) at the point (-q)^{a+b}, l = b - a + 1, or ZeroModule if l > N."""
    mod, _ = fusion_image(N, a, b, R_vv)
    return mod


def fundamental_rep(N, l, R_vv=None):
    """V(varpi_l) normalized so that fusion over X(a), ..., X(b) gives it at (-q)^{a+b}."""
    if not 1 <= l <= N - 1:
        raise ValueError("fundamental representations are indexed by 1..N-1")
    mod = fusion_module(N, 0, l - 1, R_vv)
    c = signed_q_power(-1 if (l - 1) % 2 else 1, l - 1)
    out = mod.at_point(1 / c, name=f"V(w{l})", check=True)
    out.dominant = mod.dominant
    return out


def fundamental_denominators(N, i, j, R_vv=None):
    """Denominator of the normalized R-matrix between V(varpi_i) and V(varpi_j)."""
    Mi = fundamental_rep(N, i, R_vv)
    Mj = Mi if i == j else fundamental_rep(N, j, R_vv)
    return denominator(solve_normalized_rmatrix(Mi, Mj))


def expected_fundamental_denominator(N, k, l):
    """prod_{s=1}^{min(k, l, N-k, N-l)} (z - (-q)^{|k-l| + 2s}) (independent closed formula)."""
    f = RationalFunctionQZ(1)
    for s in range(1, min(k, l, N - k, N - l) + 1):
        m = abs(k - l) + 2 * s
        f = f * (RationalFunctionQZ.z() - RationalFunctionQZ.point(-1 if m % 2 else 1, m))
    # expand into z-coefficients
    num = f.raw.numer
    deg = num.degree(RING.gens[0])
    coeffs = []
    for e in range(deg + 1):
        c = FIELD.zero
        for m_, x in num.terms():
            if m_[0] == e:
                c += FIELD(RING({(0, m_[1], m_[2]): x}))
        coeffs.append(RationalFunctionQZ.wrap(c))
    return ZPolynomial(coeffs)
