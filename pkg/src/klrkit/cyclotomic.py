"""Cyclotomic quotients of KLR algebras as explicit finite-dimensional graded algebras.

The two-sided ideal generated by ``a(x_p) = sum_nu x_p^{<h_{nu_p}, Lambda>} e(nu)``
is computed degree by degree inside each block ``e(mu) R e(nu)``.  It is
spanned by ``tau_u a tau_v x^c e(nu)`` with ``u`` any permutation, ``v`` in a
prescribed parabolic subgroup and ``c`` any exponent vector, because x's
commute with ``a`` and can be pushed past ``tau_v``.  Products ``tau_u a
tau_v e(nu)`` are computed once; multiplying by ``x^c`` on the right is free
in the normal form.

Each ``(block, degree)`` piece is first ranked modulo a large prime.  Full
rank modulo p forces full rank over Q, which settles vanishing pieces without
rational arithmetic; the remaining pieces are eliminated exactly.
"""

from fractions import Fraction

from .errors import ContentMismatch, IdentityViolation, NonDominantWeight, TruncationInconclusive
from .klr import (
    KLRElement, _accumulate, _right_x, act_on_word, all_perms, apply_s, canonical_word,
    identity_perm, perm_length,
)
from .laurent import LaurentPoly, TruncatedSeries
from .linalg import MODULUS, SparseEchelon


def weighted_exponents(weights, target):
    """Exponent vectors a >= 0 with sum a_k * weights[k] == target (weights positive)."""
    n = len(weights)
    out = []
    if target < 0:
        return out

    def rec(k, left, cur):
        if k == n - 1:
            if left % weights[k] == 0:
                out.append(tuple(cur) + (left // weights[k],))
            return
        m = 0
        while m * weights[k] <= left:
            cur.append(m)
            rec(k + 1, left - m * weights[k], cur)
            cur.pop()
            m += 1

    if n == 0:
        return [()] if target == 0 else []
    rec(0, target, [])
    return out


def parabolic_perms(n, letters):
    """Elements of the subgroup of S_n generated by the simple transpositions ``letters``."""
    letters = sorted(set(letters))
    seen = {identity_perm(n)}
    frontier = [identity_perm(n)]
    while frontier:
        nxt = []
        for p in frontier:
            for l in letters:
                r = apply_s(l, p)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return sorted(seen, key=lambda p: (perm_length(p), canonical_word(p)))


class IdealQuotient:
    """Degreewise quotient of ``R e(S)`` by ``R a(x_p) R_sub e(S)``.

    Parameters
    ----------
    ctx : KLRContext
    right_words : the words ``nu`` allowed on the right (``e(S) = sum_{nu in S} e(nu)``)
    lam : dominant weight as a tuple of <h_i, Lambda> in the datum's index order
    strand : 1-based strand carrying the cyclotomic polynomial
    sub_letters : tau indices generating the subgroup allowed between ``a`` and ``e(nu)``

    Results are stored per block ``(mu, nu)`` and degree: the quotient dimension,
    and (when ``keep_exact``) an exact reduced echelon of the ideal piece for
    reducing elements modulo the ideal.
    """

    def __init__(self, ctx, right_words, lam, strand=1, sub_letters=None, keep_exact=True):
        self.ctx = ctx
        self.datum = ctx.datum
        self.right_words = [tuple(w) for w in right_words]
        if not self.right_words:
            raise ContentMismatch("no words to quotient")
        self.n = len(self.right_words[0])
        if any(len(w) != self.n for w in self.right_words):
            raise ContentMismatch("right words must have a common length")
        self.lam = tuple(lam)
        if any(x < 0 for x in self.lam):
            raise NonDominantWeight(f"weight {self.lam} is not dominant")
        self.strand = strand
        n = self.n
        if sub_letters is None:
            sub_letters = range(1, n)
        self.sub_letters = tuple(sub_letters)
        self.keep_exact = keep_exact
        self._form = ctx._form
        self.perms = all_perms(n)
        self.sub_perms = parabolic_perms(n, self.sub_letters)
        self.dims = {}  # (mu, nu) -> {degree: dim}
        self.exact = {}  # (mu, nu, degree) -> SparseEchelon or "zero" or "free"
        self.columns = {}  # (mu, nu, degree) -> list of monomials (column order)
        self.col_index = {}  # (mu, nu, degree) -> {monomial: column}
        self.dead = set()
        self._gens = None

    # ----- generators of the ideal -----
    def _exponent(self, word):
        return self.lam[self.datum.pos(word[self.strand - 1])]

    def generators(self):
        """``{nu: [(u_perm, v_perm, degree, left_word, terms)]}`` for tau_u a tau_v e(nu)."""
        if self._gens is not None:
            return self._gens
        ctx = self.ctx
        n = self.n
        out = {}
        for nu in self.right_words:
            lst = []
            for v in self.sub_perms:
                base = {(identity_perm(n), (0,) * n, nu): Fraction(1)}
                base = ctx._apply_letters_terms([("t", l) for l in canonical_word(v)], base)
                if not base:
                    continue
                mid = act_on_word(v, nu)
                m = self._exponent(mid)
                terms = base
                for _ in range(m):
                    terms = ctx._left_x_terms(self.strand, terms)
                if not terms:
                    continue
                for u in self.perms:
                    t = ctx._apply_letters_terms([("t", l) for l in canonical_word(u)], terms)
                    if not t:
                        continue
                    degs = {ctx.monomial_degree(mm) for mm in t}
                    assert len(degs) == 1
                    left = act_on_word(next(iter(t))[0], nu)
                    lst.append((u, v, degs.pop(), left, t))
            out[nu] = lst
        self._gens = out
        return out

    # ----- basis monomials -----
    def x_weights(self, nu):
        return [self._form[(c, c)] for c in nu]

    def block_monomials(self, mu, nu, d):
        out = []
        w = self.x_weights(nu)
        for p in self.perms:
            if act_on_word(p, nu) != mu:
                continue
            td = self.ctx.tau_degree(p, nu)
            for a in weighted_exponents(w, d - td):
                out.append((p, a, nu))
        # complicated monomials first so that they become pivots
        out.sort(key=lambda m: (-sum(m[1]), tuple(-x for x in m[1]), canonical_word(m[0])))
        return out

    def left_words(self, nu):
        return sorted({act_on_word(p, nu) for p in self.perms}, key=lambda w: tuple(map(str, w)))

    def min_degree(self, mu, nu):
        ds = [self.ctx.tau_degree(p, nu) for p in self.perms if act_on_word(p, nu) == mu]
        return min(ds) if ds else None

    def generator_vectors(self, mu, nu, d):
        """Generator elements of the ideal lying in block (mu, nu), degree d."""
        w = self.x_weights(nu)
        for (u, v, gd, left, terms) in self.generators()[nu]:
            if left != mu or gd > d:
                continue
            for c in weighted_exponents(w, d - gd):
                yield _right_x(terms, c)

    # ----- rank computations -----
    def compute_piece(self, mu, nu, d):
        """Quotient dimension of block (mu, nu) in degree d (cached)."""
        key = (mu, nu, d)
        blk = self.dims.setdefault((mu, nu), {})
        if d in blk:
            return blk[d]
        if mu in self.dead or nu in self.dead:
            blk[d] = 0
            self.exact[key] = "zero"
            return 0
        monos = self.block_monomials(mu, nu, d)
        if not monos:
            blk[d] = 0
            self.exact[key] = "zero"
            return 0
        index = {m: k for k, m in enumerate(monos)}
        total = len(monos)
        modp = SparseEchelon(MODULUS)
        vectors = []
        for t in self.generator_vectors(mu, nu, d):
            vec = {index[m]: c for m, c in t.items()}
            if modp.add(vec):
                vectors.append(vec)
                if modp.rank == total:
                    break
        if modp.rank == total:
            blk[d] = 0
            self.exact[key] = "zero"
            return 0
        if not vectors:
            blk[d] = total
            self.exact[key] = "free"
            self.columns[key] = monos
            self.col_index[key] = index
            return total
        # exact elimination; the mod-p independent subset may miss vectors
        # whose rational rank differs, so rerun over all generators
        ech = SparseEchelon()
        for t in self.generator_vectors(mu, nu, d):
            ech.add({index[m]: c for m, c in t.items()})
            if ech.rank == total:
                break
        dim = total - ech.rank
        blk[d] = dim
        if dim == 0:
            self.exact[key] = "zero"
        else:
            self.exact[key] = ech if self.keep_exact else None
            self.columns[key] = monos
            self.col_index[key] = index
        return dim

    def find_dead_words(self):
        """Words nu with e(nu) in the ideal: their rows and columns vanish entirely."""
        for nu in self.right_words:
            if self.compute_piece(nu, nu, 0) == 0:
                self.dead.add(nu)
        return self.dead

    def reduce(self, terms):
        """Reduce an element (dict of monomials) modulo the ideal.

        Returns ``{(mu, nu, d): {column: coeff}}`` containing only non-pivot columns.
        """
        out = {}
        grouped = {}
        for m, c in terms.items():
            mu = act_on_word(m[0], m[2])
            d = self.ctx.monomial_degree(m)
            grouped.setdefault((mu, m[2], d), {})[m] = c
        for key, part in grouped.items():
            state = self.exact.get(key)
            if state is None:
                self.compute_piece(*key)
                state = self.exact.get(key)
            if state == "zero":
                continue
            index = self.col_index[key]
            vec = {index[m]: c for m, c in part.items()}
            if state != "free":
                vec = state.reduce(vec)
            if vec:
                out[key] = vec
        return out

    def quotient_basis(self, mu, nu, d):
        """Monomials representing a basis of the quotient piece (the non-pivot columns)."""
        self.compute_piece(mu, nu, d)
        key = (mu, nu, d)
        state = self.exact.get(key)
        if state == "zero":
            return []
        monos = self.columns[key]
        if state == "free":
            return list(monos)
        piv = set(state.rows)
        return [m for k, m in enumerate(monos) if k not in piv]


class FiniteDimGradedAlgebra:
    """R^Lambda(beta) with an explicit homogeneous basis and multiplication.

    ``basis`` lists monomials of R(beta) whose images form a basis; each
    carries its block ``(mu, nu)`` and degree.  Products are computed in
    R(beta) and reduced modulo the cyclotomic ideal.
    """

    def __init__(self, ctx, lam, beta, quotient, block_dims, top_degree):
        self.ctx = ctx
        self.datum = ctx.datum
        self.lam = tuple(lam)
        self.beta = tuple(beta)
        self.quotient = quotient
        self.block_dims = block_dims  # (mu, nu) -> LaurentPoly
        self.top_degree = top_degree
        self.n = sum(beta)
        self.words = list(quotient.right_words)
        self.basis = []
        self.basis_info = []  # (mu, nu, d)
        self.index = {}
        self._col_to_basis = {}
        for (mu, nu), poly in sorted(block_dims.items(), key=lambda kv: (tuple(map(str, kv[0][0])), tuple(map(str, kv[0][1])))):
            for d, _ in poly.items():
                key = (mu, nu, d)
                for m in quotient.quotient_basis(mu, nu, d):
                    k = len(self.basis)
                    self.basis.append(m)
                    self.basis_info.append(key)
                    self.index[m] = k
                    self._col_to_basis[(key, quotient.col_index[key][m])] = k
        self._mult_cache = {}
        self._right_gen_cache = {}

    @property
    def dim(self):
        return len(self.basis)

    def is_zero(self):
        return not self.basis

    def graded_dim(self):
        out = LaurentPoly()
        for p in self.block_dims.values():
            out = out + p
        return out

    def block_dim(self, mu, nu):
        return self.block_dims.get((tuple(mu), tuple(nu)), LaurentPoly())

    def live_words(self):
        return [w for w in self.words if w not in self.quotient.dead and self.block_dim(w, w)]

    def to_vector(self, terms):
        """Express an R(beta) element (monomial dict) in the quotient basis."""
        red = self.quotient.reduce(terms)
        out = {}
        for key, vec in red.items():
            for col, c in vec.items():
                out[self._col_to_basis[(key, col)]] = c
        return out

    def element_terms(self, vec):
        out = {}
        for k, c in vec.items():
            out[self.basis[k]] = out.get(self.basis[k], 0) + c
        return out

    def multiply_basis(self, i, j):
        key = (i, j)
        hit = self._mult_cache.get(key)
        if hit is not None:
            return hit
        a = KLRElement(self.ctx, self.n, {self.basis[i]: Fraction(1)})
        b = KLRElement(self.ctx, self.n, {self.basis[j]: Fraction(1)})
        res = self.to_vector((a * b).terms)
        self._mult_cache[key] = res
        return res

    def multiply(self, u, v):
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                _accumulate(out, self.multiply_basis(i, j), a * b)
        return out

    def left_action_terms(self, letters, vec):
        """Apply generator letters on the left of a quotient vector; returns a quotient vector."""
        terms = self.element_terms(vec)
        terms = self.ctx._apply_letters_terms(letters, terms)
        return self.to_vector(terms)

    def right_action_terms(self, letters, vec):
        """Multiply a quotient vector on the right by a product of generators."""
        key = tuple(letters)
        g = self._right_gen_cache.get(key)
        if g is None:
            g = self.ctx.apply_letters(letters, self.ctx.one(beta=self.beta))
            self._right_gen_cache[key] = g
        out = {}
        for k, c in vec.items():
            prod = KLRElement(self.ctx, self.n, {self.basis[k]: Fraction(1)}) * g
            _accumulate(out, self.to_vector(prod.terms), c)
        return out

    def structure_constants(self):
        """``{(i, j): {k: c}}`` for all nonzero products of basis elements."""
        out = {}
        for i, (mu_i, nu_i, _) in enumerate(self.basis_info):
            for j, (mu_j, nu_j, _) in enumerate(self.basis_info):
                if nu_i != mu_j:
                    continue
                v = self.multiply_basis(i, j)
                if v:
                    out[(i, j)] = v
        return out

    def check_associativity(self, triples=None):
        import random as _r
        rng = _r.Random(0)
        n = self.dim
        if n == 0:
            return True
        if triples is None:
            triples = [(rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(min(200, n ** 3))]
        for i, j, k in triples:
            left = self.multiply(self.multiply_basis(i, j), {k: Fraction(1)})
            right = self.multiply({i: Fraction(1)}, self.multiply_basis(j, k))
            if left != right:
                return False
        return True

    def unit_vector(self):
        out = {}
        for w in self.words:
            _accumulate(out, self.to_vector({(identity_perm(self.n), (0,) * self.n, w): Fraction(1)}), 1)
        return out

    def summary(self):
        return {
            "lambda": list(self.lam),
            "beta": list(self.beta),
            "dimension": self.dim,
            "graded_dimension": self.graded_dim().to_pairs(),
            "graded_dimension_text": str(self.graded_dim()),
            "top_degree": self.top_degree,
            "blocks": {
                f"{','.join(map(str, mu))}|{','.join(map(str, nu))}": p.to_pairs()
                for (mu, nu), p in sorted(self.block_dims.items(), key=lambda kv: (tuple(map(str, kv[0][0])), tuple(map(str, kv[0][1]))))
                if not p.is_zero()
            },
        }


def stabilization_window(datum, lam, beta):
    """W = 2 * max<h_k, Lambda> * ht(beta) + 2, widened to the largest generator degree step."""
    ht = sum(beta)
    w = 2 * max(lam, default=0) * ht + 2
    steps = [abs(datum.form[i][j]) for i in range(datum.n) for j in range(datum.n)]
    return max(w, max(steps, default=0))


def build_cyclotomic(ctx, lam, beta, cutoff=80, max_height=4):
    """The cyclotomic quotient R^Lambda(beta).

    Degrees are scanned upward over all blocks simultaneously; once W
    consecutive degrees above 0 vanish in every block, all higher degrees
    vanish as well (every product of generators would have to pass through
    the empty window, since no generator changes the degree by more than W).
    Raises TruncationInconclusive if the scan reaches ``cutoff`` first.
    """
    datum = ctx.datum
    lam = tuple(lam)
    beta = tuple(beta)
    if len(lam) != datum.n or len(beta) != datum.n:
        raise ContentMismatch("weight and root vectors must match the rank")
    if any(x < 0 for x in lam):
        raise NonDominantWeight(f"weight {lam} is not dominant")
    if any(x < 0 for x in beta):
        raise ContentMismatch("beta must lie in the positive root cone")
    if sum(beta) > max_height:
        raise ContentMismatch(f"height {sum(beta)} exceeds the guard {max_height}")
    n = sum(beta)
    if n == 0:
        return _degree_zero_algebra(ctx, lam)
    words = ctx.words(beta=beta)
    quo = IdealQuotient(ctx, words, lam, strand=1)
    quo.find_dead_words()
    live = [w for w in words if w not in quo.dead]
    window = stabilization_window(datum, lam, beta)
    blocks = [(mu, nu) for nu in live for mu in live if sorted(map(str, mu)) == sorted(map(str, nu))]
    block_dims = {b: {} for b in blocks}
    if not blocks:
        return FiniteDimGradedAlgebra(ctx, lam, beta, quo, {}, None)
    lo = min(quo.min_degree(mu, nu) for mu, nu in blocks)
    zero_run = 0
    top = None
    d = lo
    while True:
        if d > cutoff:
            raise TruncationInconclusive(
                f"no stabilization for Lambda={lam}, beta={beta} below degree {cutoff}"
            )
        any_nonzero = False
        for (mu, nu) in blocks:
            dim = quo.compute_piece(mu, nu, d)
            if dim:
                block_dims[(mu, nu)][d] = dim
                any_nonzero = True
        if any_nonzero:
            zero_run = 0
            top = d
        elif d > 0:
            zero_run += 1
            if zero_run >= window:
                break
        d += 1
    polys = {b: LaurentPoly(v) for b, v in block_dims.items() if v}
    return FiniteDimGradedAlgebra(ctx, lam, beta, quo, polys, top)


class _TrivialQuotient:
    def __init__(self):
        self.right_words = [()]
        self.dead = set()
        self.col_index = {((), (), 0): {((), (), ()): 0}}

    def quotient_basis(self, mu, nu, d):
        return [((), (), ())]

    def reduce(self, terms):
        c = terms.get(((), (), ()), 0)
        return {((), (), 0): {0: c}} if c else {}


def _degree_zero_algebra(ctx, lam):
    """R^Lambda(0) is the ground field (spanned by the empty idempotent)."""
    quo = _TrivialQuotient()
    return FiniteDimGradedAlgebra(ctx, lam, (0,) * ctx.datum.n, quo, {((), ()): LaurentPoly.const(1)}, 0)


def truncated_quotient_dim(ctx, right_words, lam, strand, sub_letters, cutoff):
    """Total graded dimension of a (typically infinite-dimensional) quotient through ``cutoff``."""
    quo = IdealQuotient(ctx, right_words, lam, strand=strand, sub_letters=sub_letters, keep_exact=False)
    out = {}
    for nu in quo.right_words:
        for mu in quo.left_words(nu):
            lo = quo.min_degree(mu, nu)
            for d in range(lo, cutoff + 1):
                dim = quo.compute_piece(mu, nu, d)
                if dim:
                    out[d] = out.get(d, 0) + dim
    return TruncatedSeries(cutoff, out)


def normalization_exponent(datum, lam, beta):
    """(Lambda, beta) - (beta, beta)/2, the q-power relating block dimensions to Gram entries."""
    lam_beta = sum(datum.d[i] * lam[i] * beta[i] for i in range(datum.n))
    bb = datum.pair(beta, beta)
    return lam_beta - bb // 2


def resolution_dim_check(ctx, lam, beta, i, cutoff=12, algebra=None):
    """Compare dim_q F^Lambda with dim_q K_0 - dim_q K_1 through ``cutoff``.

    ``F^Lambda = R^Lambda(beta + alpha_i) e(beta, alpha_i)``; ``K_0`` and ``K_1``
    are the induced quotients of ``R(beta + alpha_i) e(beta, alpha_i)`` and
    ``R(beta + alpha_i) e(alpha_i, beta)``.  The map ``K_1 -> K_0`` is right
    multiplication by ``a(x_1) tau_1 ... tau_n``, homogeneous of degree
    ``(alpha_i, 2 Lambda - beta)``; ``K_1`` is graded so that this map
    preserves degrees, i.e. its induced grading is shifted by that amount.
    ``algebra`` may pass a prebuilt R^Lambda(beta + alpha_i).
    """
    datum = ctx.datum
    lam, beta = tuple(lam), tuple(beta)
    n = sum(beta)
    up = list(beta)
    up[datum.pos(i)] += 1
    up = tuple(up)
    shift = 2 * sum(datum.d[k] * lam[k] * (1 if datum.index[k] == i else 0) for k in range(datum.n))
    shift -= sum(datum.bilinear(i, j) * beta[datum.pos(j)] for j in datum.index)
    A = algebra if algebra is not None else build_cyclotomic(ctx, lam, up, max_height=n + 1)
    f_dims = {}
    for (mu, nu), poly in A.block_dims.items():
        if nu[-1] == i:
            for d, c in poly.items():
                if d <= cutoff:
                    f_dims[d] = f_dims.get(d, 0) + c
    F = TruncatedSeries(cutoff, f_dims)
    if n == 0:
        # R^Lambda(0) is the ground field and both induced modules are R(alpha_i) e(i)
        K0 = ctx.graded_dim_hom((i,), (i,), cutoff)
        K1 = ctx.graded_dim_hom((i,), (i,), cutoff - shift)
    else:
        words = ctx.words(beta=beta)
        K0 = truncated_quotient_dim(ctx, [w + (i,) for w in words], lam, 1, range(1, n), cutoff)
        K1 = truncated_quotient_dim(ctx, [(i,) + w for w in words], lam, 2, range(2, n + 1), cutoff - shift)
    K1s = K1.shift(shift)
    rhs = K0 - K1s
    ok = F == rhs
    report = {
        "lambda": list(lam), "beta": list(beta), "i": i, "cutoff": cutoff, "shift": shift,
        "F": F.to_pairs(), "K0": K0.to_pairs(), "K1": K1s.to_pairs(), "passed": ok,
    }
    if not ok:
        raise IdentityViolation(f"resolution identity fails for Lambda={lam}, beta={beta}, i={i}", report)
    return report


def categorification_check(ctx, lam, beta, cutoff=80, algebra=None):
    """Compare every block ``dim_q e(mu) R^Lambda(beta) e(nu)`` with ``q^c (f_nu v, f_mu v)``.

    ``c = (Lambda, beta) - (beta, beta)/2`` is the single global shift per
    ``(Lambda, beta)``.  Raises IdentityViolation on the first mismatch.
    """
    from .shapovalov import Shapovalov
    lam, beta = tuple(lam), tuple(beta)
    A = algebra if algebra is not None else build_cyclotomic(ctx, lam, beta, cutoff=cutoff, max_height=max(4, sum(beta)))
    form = Shapovalov(ctx.datum, lam)
    c = normalization_exponent(ctx.datum, lam, beta)
    words = ctx.words(beta=beta)
    for mu in words:
        for nu in words:
            lhs = A.block_dim(mu, nu)
            rhs = form.form(nu, mu).shift(c)
            if lhs != rhs:
                raise IdentityViolation(
                    f"block ({mu}, {nu}) of R^Lambda{beta} does not match the contravariant form",
                    {"mu": list(mu), "nu": list(nu), "block": lhs.to_pairs(), "form": rhs.to_pairs(), "shift": c},
                )
    return {
        "lambda": list(lam), "beta": list(beta), "shift": c, "blocks_checked": len(words) ** 2,
        "dimension": A.dim, "graded_dimension": A.graded_dim().to_pairs(),
        "gram_rank": form.weight_multiplicity(beta), "passed": True,
    }
