"""Cartan data, roots, weights and simple reflections."""

import hashlib
import json
from fractions import Fraction
from math import gcd

from .errors import IndexOutOfRange, NotFiniteType, NotGCM, NotSymmetrizable


class CartanDatum:
    """A symmetrizable generalized Cartan matrix with its symmetrizing vector.

    Indices are the labels in ``index`` (any hashable, usually ints).
    Internally positions ``0..n-1`` are used; ``pos(label)`` converts.
    """

    def __init__(self, matrix, index=None, d=None):
        a = [list(map(int, row)) for row in matrix]
        n = len(a)
        if any(len(row) != n for row in a):
            raise NotGCM("Cartan matrix must be square")
        self.a = tuple(tuple(row) for row in a)
        self.n = n
        self.index = tuple(index) if index is not None else tuple(range(1, n + 1))
        if len(self.index) != n or len(set(self.index)) != n:
            raise NotGCM("index labels must be distinct and match the matrix size")
        self._pos = {lab: k for k, lab in enumerate(self.index)}
        _check_gcm(self.a)
        sym = _symmetrizer(self.a)
        if d is not None:
            d = tuple(int(x) for x in d)
            if len(d) != n or any(x <= 0 for x in d):
                raise NotSymmetrizable("d must be positive integers, one per index")
            for i in range(n):
                for j in range(n):
                    if d[i] * self.a[i][j] != d[j] * self.a[j][i]:
                        raise NotSymmetrizable(f"d_i a_ij != d_j a_ji at ({i}, {j})")
            sym = d
        self.d = sym
        self.form = tuple(tuple(self.d[i] * self.a[i][j] for j in range(n)) for i in range(n))

    # ----- indexing -----
    def pos(self, label):
        try:
            return self._pos[label]
        except (KeyError, TypeError):
            raise IndexOutOfRange(f"unknown index {label!r}") from None

    def label(self, k):
        return self.index[k]

    def __repr__(self):
        return f"CartanDatum({[list(r) for r in self.a]}, index={list(self.index)})"

    def __eq__(self, other):
        return isinstance(other, CartanDatum) and (self.a, self.index, self.d) == (other.a, other.index, other.d)

    def __hash__(self):
        return hash((self.a, self.index, self.d))

    def fingerprint(self):
        payload = json.dumps({"a": self.a, "index": [str(x) for x in self.index], "d": self.d})
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    # ----- forms -----
    def bilinear(self, i, j):
        """(alpha_i, alpha_j) for index labels i, j."""
        return self.form[self.pos(i)][self.pos(j)]

    def cartan(self, i, j):
        return self.a[self.pos(i)][self.pos(j)]

    def d_of(self, i):
        return self.d[self.pos(i)]

    def pair(self, u, v):
        """(u, v) for root vectors given as coordinate tuples."""
        return sum(u[i] * self.form[i][j] * v[j] for i in range(self.n) for j in range(self.n) if u[i] and v[j])

    def coroot_pairing(self, i, v):
        """<h_i, v> for a root vector v."""
        k = self.pos(i)
        return sum(self.a[k][j] * v[j] for j in range(self.n))

    def weight_of_root(self, v):
        """The weight vector (<h_i, v>)_i of a root-lattice element."""
        return tuple(sum(self.a[i][j] * v[j] for j in range(self.n)) for i in range(self.n))

    def simple_root(self, i):
        v = [0] * self.n
        v[self.pos(i)] = 1
        return tuple(v)

    def content(self, word):
        """Coordinate vector of the root sum of the letters of ``word``."""
        v = [0] * self.n
        for x in word:
            v[self.pos(x)] += 1
        return tuple(v)

    def weyl_reflect(self, i, v):
        k = self.pos(i)
        if len(v) != self.n:
            raise IndexOutOfRange("root vector has the wrong length")
        c = self.coroot_pairing(i, v)
        out = list(v)
        out[k] -= c
        return tuple(out)

    def weyl_apply(self, word, v):
        """Apply s_{i_1} ... s_{i_l} to v, rightmost reflection first."""
        for i in reversed(word):
            v = self.weyl_reflect(i, v)
        return v

    # ----- finite type -----
    def is_finite_type(self):
        """Positive-definiteness of the symmetrized matrix by exact LDL elimination."""
        m = [[Fraction(x) for x in row] for row in self.form]
        n = self.n
        for k in range(n):
            if m[k][k] <= 0:
                return False
            for i in range(k + 1, n):
                f = m[i][k] / m[k][k]
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
        return True

    def positive_roots(self):
        if not self.is_finite_type():
            raise NotFiniteType("positive roots are only enumerated for finite type")
        simple = [self.simple_root(i) for i in self.index]
        found = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for v in frontier:
                for i in self.index:
                    w = self.weyl_reflect(i, v)
                    if all(x >= 0 for x in w) and any(w) and w not in found:
                        found.add(w)
                        nxt.append(w)
            frontier = nxt
        return sorted(found, key=lambda v: (sum(v), tuple(-x for x in v)))

    def highest_root(self):
        roots = self.positive_roots()
        return max(roots, key=sum)

    def coxeter_number(self):
        return sum(self.highest_root()) + 1

    def is_dominant(self, lam):
        return all(x >= 0 for x in lam)

    def connected_components(self):
        seen = set()
        comps = []
        for s in range(self.n):
            if s in seen:
                continue
            comp = []
            stack = [s]
            seen.add(s)
            while stack:
                k = stack.pop()
                comp.append(k)
                for j in range(self.n):
                    if j not in seen and self.a[k][j] != 0:
                        seen.add(j)
                        stack.append(j)
            comps.append(sorted(comp))
        return comps

    def to_config(self):
        return {"index": list(self.index), "matrix": [list(r) for r in self.a], "d": list(self.d)}


def _check_gcm(a):
    n = len(a)
    for i in range(n):
        if a[i][i] != 2:
            raise NotGCM(f"diagonal entry a[{i}][{i}] = {a[i][i]} is not 2")
        for j in range(n):
            if i != j:
                if a[i][j] > 0:
                    raise NotGCM(f"off-diagonal entry a[{i}][{j}] = {a[i][j]} is positive")
                if (a[i][j] == 0) != (a[j][i] == 0):
                    raise NotGCM(f"a[{i}][{j}] and a[{j}][{i}] do not vanish together")


def _symmetrizer(a):
    """Minimal positive d with d_i a_ij = d_j a_ji, solved per connected component."""
    n = len(a)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        comp = [start]
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or a[i][j] == 0:
                    continue
                want = d[i] * a[i][j] / a[j][i]
                if d[j] is None:
                    d[j] = want
                    comp.append(j)
                    stack.append(j)
                elif d[j] != want:
                    raise NotSymmetrizable(f"no symmetrizer: cycle inconsistency at ({i}, {j})")
        lcm_den = 1
        for k in comp:
            lcm_den = lcm_den * d[k].denominator // gcd(lcm_den, d[k].denominator)
        ints = [int(d[k] * lcm_den) for k in comp]
        g = 0
        for x in ints:
            g = gcd(g, x)
        for k, x in zip(comp, ints):
            d[k] = x // g
    return tuple(int(x) for x in d)


def build_cartan_datum(matrix, index=None, d=None):
    return CartanDatum(matrix, index=index, d=d)


# ----- standard data -----
def cartan_matrix(kind, rank):
    """Finite-type matrices for A_n, B_n, C_n, D_n (Bourbaki numbering)."""
    n = rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    if kind in ("A", "B", "C"):
        for i in range(n - 1):
            a[i][i + 1] = a[i + 1][i] = -1
        if kind == "B" and n >= 2:
            a[n - 2][n - 1] = -2
        if kind == "C" and n >= 2:
            a[n - 1][n - 2] = -2
    elif kind == "D":
        if n < 4:
            raise ValueError("D_n needs rank at least 4")
        for i in range(n - 2):
            a[i][i + 1] = a[i + 1][i] = -1
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    else:
        raise ValueError(f"unsupported type {kind}")
    return a


def standard_datum(name):
    """``'A2'``, ``'B2'``, ``'D4'`` and so on; ``'A1^(1)'`` gives the affine sl_2 matrix."""
    if name.upper() == "A1^(1)":
        return CartanDatum([[2, -2], [-2, 2]], index=(0, 1))
    kind, rank = name[0].upper(), int(name[1:])
    return CartanDatum(cartan_matrix(kind, rank))


def affine_type_a(N):
    """Cartan matrix of A_{N-1}^{(1)} indexed 0..N-1."""
    if N < 2:
        raise ValueError("need N >= 2")
    if N == 2:
        return CartanDatum([[2, -2], [-2, 2]], index=(0, 1))
    a = [[0] * N for _ in range(N)]
    for i in range(N):
        a[i][i] = 2
        a[i][(i + 1) % N] = -1
        a[i][(i - 1) % N] = -1
    return CartanDatum(a, index=tuple(range(N)))


def datum_from_config(cfg):
    """Build a datum from a mapping with ``matrix`` and optional ``index``/``d``, or ``type``."""
    if "type" in cfg and "matrix" not in cfg:
        return standard_datum(str(cfg["type"]))
    if "matrix" not in cfg:
        raise KeyError("Cartan config needs 'matrix' or 'type'")
    return CartanDatum(cfg["matrix"], index=cfg.get("index"), d=cfg.get("d"))
