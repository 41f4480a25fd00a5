"""Splitting the projectives ``R^Lambda e(nu)`` into indecomposable summands.

For each word ``nu`` the degree-zero endomorphism algebra is
``B = (e(nu) R^Lambda e(nu))_0``.  Its radical is the radical of the trace
form (characteristic zero).  Central idempotents of ``B / rad B`` are read
off from the minimal polynomial of a random central element; each is lifted
to ``B`` by the iteration ``e -> 3e^2 - 2e^3``.  A Wedderburn block
``Mat_k(Q)`` contributes ``k`` isomorphic summands, so the character of one
indecomposable projective is ``ch(R^Lambda c) / k`` for the lifted central
idempotent ``c``.

If a minimal polynomial has a nonlinear irreducible factor, or a block
dimension is not a perfect square, the splitter reports failure for that word
instead of guessing.
"""

import random
from fractions import Fraction
from math import isqrt

import sympy

from .errors import SplitFailure
from .klr import GradedCharacter, identity_perm
from .laurent import LaurentPoly
from .linalg import SparseEchelon, field_nullspace, field_row_echelon


def _vec_add(a, b, s=1):
    return [x + s * y for x, y in zip(a, b)]


class DegreeZeroEndomorphisms:
    """``(e(nu) A e(nu))_0`` with dense structure constants over Q."""

    def __init__(self, A, nu):
        self.A = A
        self.nu = tuple(nu)
        self.idx = [k for k, (mu, nu2, d) in enumerate(A.basis_info) if mu == self.nu and nu2 == self.nu and d == 0]
        self.dim = len(self.idx)
        self.pos = {k: a for a, k in enumerate(self.idx)}
        b = self.dim
        self.table = [[None] * b for _ in range(b)]
        for a in range(b):
            for c in range(b):
                prod = A.multiply_basis(self.idx[a], self.idx[c])
                v = [Fraction(0)] * b
                for k, x in prod.items():
                    v[self.pos[k]] = Fraction(x)
                self.table[a][c] = v
        n = A.n
        unit = A.to_vector({(identity_perm(n), (0,) * n, self.nu): Fraction(1)})
        self.unit = [Fraction(unit.get(k, 0)) for k in self.idx]

    def mul(self, u, v):
        out = [Fraction(0)] * self.dim
        for a, x in enumerate(u):
            if not x:
                continue
            for c, y in enumerate(v):
                if y:
                    out = _vec_add(out, self.table[a][c], x * y)
        return out

    def basis_vec(self, a):
        v = [Fraction(0)] * self.dim
        v[a] = Fraction(1)
        return v

    def radical(self):
        """Basis of the radical as the null space of the trace form."""
        b = self.dim
        tr = [sum(self.table[r][s][s] for s in range(b)) for r in range(b)]
        gram = [[sum(self.table[a][c][r] * tr[r] for r in range(b)) for c in range(b)] for a in range(b)]
        return field_nullspace(gram, b)

    def to_global(self, v):
        return {self.idx[a]: x for a, x in enumerate(v) if x}


class _QuotientMap:
    """Coordinates modulo a subspace given by its reduced echelon form."""

    def __init__(self, sub, dim):
        rows, piv = field_row_echelon(sub) if sub else ([], [])
        self.rows, self.piv = rows, piv
        self.free = [c for c in range(dim) if c not in piv]

    def reduce(self, v):
        v = list(v)
        for row, c in zip(self.rows, self.piv):
            if v[c]:
                v = _vec_add(v, row, -v[c])
        return v

    def coords(self, v):
        r = self.reduce(v)
        return [r[c] for c in self.free]


def _min_poly(B, qmap, z, max_deg):
    """Monic minimal polynomial of z in B / rad, as a list of Fractions (constant term first)."""
    powers = [B.unit]
    rows = [qmap.coords(B.unit)]
    for m in range(1, max_deg + 1):
        powers.append(B.mul(powers[-1], z))
        rows.append(qmap.coords(powers[-1]))
        # solve sum_{k<m} c_k z^k = -z^m
        cols = len(rows[0])
        mat = [[rows[k][r] for k in range(m)] + [-rows[m][r]] for r in range(cols)]
        ech, piv = field_row_echelon(mat)
        if m in piv:
            continue
        coeffs = [Fraction(0)] * m
        for row, c in zip(ech, piv):
            coeffs[c] = row[m]
        return coeffs + [Fraction(1)], powers
    raise SplitFailure("minimal polynomial not found")


def central_idempotents(B, rng=None, tries=8):
    """Lifted central idempotents of B / rad B (one per simple block) and the block sizes k."""
    rng = rng or random.Random(0)
    b = B.dim
    if b == 0:
        return []
    rad = B.radical()
    qmap = _QuotientMap(rad, b)
    s_dim = len(qmap.free)
    # centre of B / rad: z with zb - bz in rad for every basis vector b
    eqs = []
    for a in range(b):
        ba = B.basis_vec(a)
        cols = []
        for c in qmap.free:
            bc = B.basis_vec(c)
            cols.append(qmap.coords(_vec_add(B.mul(bc, ba), B.mul(ba, bc), -1)))
        for r in range(s_dim):
            eqs.append([cols[k][r] for k in range(len(qmap.free))])
    null = field_nullspace(eqs, len(qmap.free)) if eqs else [[Fraction(1)]]
    centre = []
    for v in null:
        z = [Fraction(0)] * b
        for k, c in enumerate(qmap.free):
            z[c] = v[k]
        centre.append(z)
    m = len(centre)
    x = sympy.Symbol("x")
    for _ in range(tries):
        z = [Fraction(0)] * b
        for c in centre:
            z = _vec_add(z, c, rng.randint(-9, 9))
        coeffs, _ = _min_poly(B, qmap, z, m)
        if len(coeffs) - 1 < m:
            continue
        poly = sum(sympy.Rational(c.numerator, c.denominator) * x ** k for k, c in enumerate(coeffs))
        _, factors = sympy.factor_list(poly)
        if any(sympy.degree(f, x) != 1 or e != 1 for f, e in factors):
            raise SplitFailure("centre of the semisimple quotient is not split over Q")
        roots = [Fraction(str(sympy.solve(f, x)[0])) for f, _ in factors]
        out = []
        for r in roots:
            e = B.unit
            for s in roots:
                if s != r:
                    e = [y / (r - s) for y in B.mul(e, _vec_add(z, B.unit, -s))]
            e = _lift_idempotent(B, e)
            block = [qmap.coords(B.mul(e, B.basis_vec(a))) for a in range(b)]
            size = len(field_row_echelon(block)[1])
            k = isqrt(size)
            if k * k != size:
                raise SplitFailure(f"block of dimension {size} is not a full matrix algebra over Q")
            out.append((e, k))
        return out
    raise SplitFailure("random central elements did not separate the blocks")


def _lift_idempotent(B, e, max_steps=64):
    for _ in range(max_steps):
        e2 = B.mul(e, e)
        if e2 == e:
            return e
        e3 = B.mul(e2, e)
        e = [3 * a - 2 * c for a, c in zip(e2, e3)]
    raise SplitFailure("idempotent lifting did not converge")


def projective_character(A, e_vec, nu):
    """Graded character of ``A e`` for an idempotent ``e`` in ``e(nu) A_0 e(nu)`` (A-basis coordinates)."""
    groups = {}
    for k, (mu, nu2, d) in enumerate(A.basis_info):
        if nu2 == tuple(nu):
            groups.setdefault((mu, d), []).append(k)
    vals = {}
    for (mu, d), ks in groups.items():
        ech = SparseEchelon()
        for k in ks:
            ech.add(A.multiply({k: Fraction(1)}, e_vec))
        if ech.rank:
            vals.setdefault(mu, {})[d] = ech.rank
    return GradedCharacter(A.datum, {mu: LaurentPoly(v) for mu, v in vals.items()})


def _normalized(ch):
    lows = [p.min_degree() for p in ch.values.values() if p]
    if not lows:
        return ()
    lo = min(lows)
    return tuple(sorted((tuple(map(str, w)), tuple(p.shift(-lo).items())) for w, p in ch.values.items()))


def indecomposable_projectives(A, rng=None):
    """Characters of the indecomposable projectives up to shift.

    Returns ``{"characters": [GradedCharacter], "failed_words": [...]}``.
    """
    seen = {}
    failed = []
    for nu in A.live_words():
        B = DegreeZeroEndomorphisms(A, nu)
        try:
            parts = central_idempotents(B, rng)
        except SplitFailure as exc:
            failed.append((nu, str(exc)))
            continue
        for e, k in parts:
            ch = projective_character(A, B.to_global(e), nu)
            vals = {}
            for w, p in ch.values.items():
                pairs = {}
                for deg, c in p.items():
                    if c % k:
                        raise SplitFailure("projective character is not divisible by the block size")
                    pairs[deg] = c // k
                vals[w] = LaurentPoly(pairs)
            ch = GradedCharacter(A.datum, vals)
            seen.setdefault(_normalized(ch), ch)
    return {"characters": list(seen.values()), "failed_words": failed}


def count_projectives(A, rng=None):
    """Number of distinct indecomposable projective characters up to shift, or None on failure."""
    res = indecomposable_projectives(A, rng)
    if res["failed_words"]:
        return None
    return len(res["characters"])
