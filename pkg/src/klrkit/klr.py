"""Khovanov-Lauda-Rouquier algebras by normal-form rewriting.

Basis monomials are ``tau_w x^a e(nu)``: a permutation ``w`` written with its
lexicographically smallest reduced word, an exponent vector ``a`` and the
right idempotent ``nu``.  The x's sit to the right of the taus.

Conventions
-----------
* A permutation is a tuple ``p`` with ``p[k] = w(k)`` (0-based positions).
* The word ``(i_1, ..., i_r)`` stands for ``w = s_{i_1} ... s_{i_r}`` and the
  element ``tau_{i_1} ... tau_{i_r}``; tau indices are 1-based.
* ``tau_l e(nu) = e(s_l nu) tau_l``, so ``tau_w e(nu) = e(w nu) tau_w`` with
  ``(w nu)[p[k]] = nu[k]``.

Products are computed by letting generators act on the left of basis
monomials.  Because x's sit on the right, every left action only needs to be
known on ``tau_w e(nu)``; results are cached per ``(generator, w, nu)`` and
then multiplied on the right by ``x^a``.
"""

import itertools
from collections import deque
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import AmbientMismatch, ContentMixing, InconsistentQFamily
from .laurent import LaurentPoly, TruncatedSeries, series_inverse
from .linalg import SparseEchelon


# ---------------------------------------------------------------------------
# permutations and words
# ---------------------------------------------------------------------------

def identity_perm(n):
    return tuple(range(n))


def apply_s(l, p):
    """s_l o w, where s_l swaps the values l-1 and l (0-based)."""
    a, b = l - 1, l
    return tuple(b if x == a else a if x == b else x for x in p)


def perm_of_word(word, n):
    p = identity_perm(n)
    for l in reversed(word):
        p = apply_s(l, p)
    return p


def inverse_perm(p):
    inv = [0] * len(p)
    for k, v in enumerate(p):
        inv[v] = k
    return tuple(inv)


def perm_length(p):
    n = len(p)
    return sum(1 for a in range(n) for b in range(a + 1, n) if p[a] > p[b])


def is_left_descent(l, p):
    inv = inverse_perm(p)
    return inv[l - 1] > inv[l]


@lru_cache(maxsize=None)
def canonical_word(p):
    """Lexicographically smallest reduced word of the permutation ``p``."""
    word = []
    while True:
        inv = inverse_perm(p)
        l = next((l for l in range(1, len(p)) if inv[l - 1] > inv[l]), None)
        if l is None:
            return tuple(word)
        word.append(l)
        p = apply_s(l, p)


def act_on_word(p, nu):
    out = [None] * len(nu)
    for k, v in enumerate(p):
        out[v] = nu[k]
    return tuple(out)


def all_perms(n):
    return list(itertools.permutations(range(n)))


def _neighbours(word):
    """Reduced words one commutation or braid move away, with braid data.

    Yields ``(new_word, move)`` where ``move`` is None for a commutation and
    ``(t, k, sign)`` for a braid move at letter position ``t`` on strands
    k, k+1, k+2: sign +1 when ``(k+1, k, k+1)`` becomes ``(k, k+1, k)``.
    """
    w = list(word)
    for t in range(len(w) - 1):
        if abs(w[t] - w[t + 1]) > 1:
            nw = w[:t] + [w[t + 1], w[t]] + w[t + 2:]
            yield tuple(nw), None
    for t in range(len(w) - 2):
        a, b, c = w[t], w[t + 1], w[t + 2]
        if a == c and abs(a - b) == 1:
            nw = w[:t] + [b, a, b] + w[t + 3:]
            k = min(a, b)
            sign = 1 if a == k + 1 else -1
            yield tuple(nw), (t, k, sign)


@lru_cache(maxsize=None)
def braid_path(src, dst):
    """Shortest sequence of moves turning reduced word ``src`` into ``dst``."""
    if src == dst:
        return ()
    prev = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v, move in _neighbours(u):
            if v in prev:
                continue
            prev[v] = (u, move)
            if v == dst:
                path = []
                cur = v
                while prev[cur] is not None:
                    par, mv = prev[cur]
                    path.append((par, mv))
                    cur = par
                return tuple(reversed(path))
            queue.append(v)
    raise ValueError(f"{src} and {dst} are not reduced words of the same permutation")


# ---------------------------------------------------------------------------
# Q polynomials
# ---------------------------------------------------------------------------

class QFamily:
    """The polynomials Q_ij(u, v) = sum t_{i,j;p,q} u^p v^q for i != j.

    ``table[(i, j)]`` maps ``(p, q)`` to a nonzero rational.  Only one of each
    unordered pair needs to be given; the other is filled in by the symmetry
    t_{i,j;p,q} = t_{j,i;q,p}.
    """

    def __init__(self, datum, table=None):
        self.datum = datum
        full = {}
        for (i, j), coeffs in (table or {}).items():
            if i == j:
                if any(Fraction(c) != 0 for c in coeffs.values()):
                    raise InconsistentQFamily(f"Q_{i}{i} must vanish")
                continue
            datum.pos(i), datum.pos(j)
            cleaned = {(int(p), int(q)): Fraction(c) for (p, q), c in coeffs.items() if Fraction(c) != 0}
            full.setdefault((i, j), {})
            for key, c in cleaned.items():
                full[(i, j)][key] = c
            mirror = {(q, p): c for (p, q), c in cleaned.items()}
            if (j, i) in (table or {}):
                given = {(int(p), int(q)): Fraction(c) for (p, q), c in table[(j, i)].items() if Fraction(c) != 0}
                if given != mirror:
                    raise InconsistentQFamily(f"t_{{{i},{j};p,q}} != t_{{{j},{i};q,p}}")
            full[(j, i)] = mirror
        for i in datum.index:
            for j in datum.index:
                if i != j and (i, j) not in full:
                    full[(i, j)] = default_q_coeffs(datum, i, j)
        self.table = full
        self._validate()

    def _validate(self):
        dm = self.datum
        for (i, j), coeffs in self.table.items():
            aii, ajj, aij = dm.bilinear(i, i), dm.bilinear(j, j), dm.bilinear(i, j)
            for (p, q) in coeffs:
                if p < 0 or q < 0 or p * aii + q * ajj != -2 * aij:
                    raise InconsistentQFamily(
                        f"coefficient at ({p},{q}) for Q_{i}{j} lies outside the support set"
                    )
            if coeffs.get((-dm.cartan(i, j), 0), 0) == 0:
                raise InconsistentQFamily(f"t_{{{i},{j};{-dm.cartan(i, j)},0}} must be nonzero")

    def coeffs(self, i, j):
        if i == j:
            return {}
        return self.table[(i, j)]

    def key(self):
        return tuple(sorted(
            (str(i), str(j), tuple(sorted((pq, str(c)) for pq, c in cf.items())))
            for (i, j), cf in self.table.items()
        ))

    def to_config(self):
        return {
            f"{i},{j}": [[p, q, str(c)] for (p, q), c in sorted(cf.items())]
            for (i, j), cf in sorted(self.table.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))
        }

    def __repr__(self):
        parts = []
        for (i, j), cf in sorted(self.table.items(), key=lambda kv: str(kv[0])):
            parts.append(f"Q_{i},{j} = {format_two_var(cf)}")
        return "QFamily(" + "; ".join(parts) + ")"


def support_set(datum, i, j):
    aii, ajj, aij = datum.bilinear(i, i), datum.bilinear(j, j), datum.bilinear(i, j)
    out = []
    for p in range(0, -2 * aij // max(aii, 1) + 1):
        rest = -2 * aij - p * aii
        if rest >= 0 and rest % ajj == 0:
            out.append((p, rest // ajj))
    return out


def default_q_coeffs(datum, i, j):
    """u^{-a_ij} + v^{-a_ji}, or the constant 1 when i and j are not joined."""
    aij, aji = datum.cartan(i, j), datum.cartan(j, i)
    if aij == 0:
        return {(0, 0): Fraction(1)}
    return {(-aij, 0): Fraction(1), (0, -aji): Fraction(1)}


def quiver_q_family(datum, arrows):
    """Q_ij = (u - v)^{d_ij} (v - u)^{d_ji} from arrow multiplicities ``arrows[(i, j)] = d_ij``."""
    table = {}
    for idx, i in enumerate(datum.index):
        for j in datum.index[idx + 1:]:
            dij = arrows.get((i, j), 0)
            dji = arrows.get((j, i), 0)
            coeffs = {}
            # (u - v)^{dij} (v - u)^{dji} = (-1)^{dji} (u - v)^{dij + dji}
            m = dij + dji
            sign = -1 if dji % 2 else 1
            for k in range(m + 1):
                c = comb(m, k) * (-1) ** (m - k) * sign
                coeffs[(k, m - k)] = Fraction(c)
            table[(i, j)] = coeffs
    return QFamily(datum, table)


def format_two_var(coeffs, names=("u", "v")):
    terms = []
    for (p, q), c in sorted(coeffs.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0])):
        mono = "*".join(
            n if e == 1 else f"{n}^{e}" for n, e in zip(names, (p, q)) if e
        )
        a = abs(c)
        body = (mono if a == 1 else f"{a}*{mono}") if mono else str(a)
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sg, b in terms[1:]:
        s += f" {sg} {b}"
    return s


# ---------------------------------------------------------------------------
# polynomials in x_1..x_n as dicts {exponent tuple: coefficient}
# ---------------------------------------------------------------------------

def _unit(n, k):
    e = [0] * n
    e[k] = 1
    return tuple(e)


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def q_poly_in_x(coeffs, n, k1, k2):
    """Q(x_{k1}, x_{k2}) as an x-polynomial (1-based strand numbers)."""
    out = {}
    for (p, q), c in coeffs.items():
        e = [0] * n
        e[k1 - 1] += p
        e[k2 - 1] += q
        e = tuple(e)
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


def braid_correction_poly(coeffs, n, k):
    """(Q(x_k, x_{k+1}) - Q(x_{k+2}, x_{k+1})) / (x_k - x_{k+2}) as an x-polynomial."""
    out = {}
    for (p, q), c in coeffs.items():
        # (x_k^p - x_{k+2}^p) / (x_k - x_{k+2}) = sum_{s=0}^{p-1} x_k^s x_{k+2}^{p-1-s}
        for s in range(p):
            e = [0] * n
            e[k - 1] += s
            e[k + 1] += p - 1 - s
            e[k] += q
            e = tuple(e)
            out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------

class KLRElement:
    """Sparse combination of basis monomials ``(perm, exps, nu) -> Fraction``."""

    __slots__ = ("ctx", "n", "terms")

    def __init__(self, ctx, n, terms=None):
        self.ctx = ctx
        self.n = n
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    def copy(self):
        return KLRElement(self.ctx, self.n, dict(self.terms))

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def _check(self, other):
        if not isinstance(other, KLRElement):
            raise TypeError("expected a KLRElement")
        if other.n != self.n:
            raise AmbientMismatch(f"elements live in R({self.n}) and R({other.n})")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        _accumulate(out, other.terms, 1)
        return KLRElement(self.ctx, self.n, out)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.terms)
        _accumulate(out, other.terms, -1)
        return KLRElement(self.ctx, self.n, out)

    def __neg__(self):
        return KLRElement(self.ctx, self.n, {k: -c for k, c in self.terms.items()})

    def scale(self, c):
        c = Fraction(c)
        return KLRElement(self.ctx, self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        return self.ctx.multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, KLRElement):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def degrees(self):
        return {self.ctx.monomial_degree(m) for m in self.terms}

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("element is not homogeneous")
        return next(iter(ds))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (p, a, nu), c in sorted(self.terms.items(), key=lambda kv: _mono_sort_key(kv[0])):
            parts.append((c, format_monomial(p, a, nu)))
        s = ""
        for idx, (c, body) in enumerate(parts):
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            piece = body if mag == 1 else f"{mag}*{body}"
            if idx == 0:
                s = ("-" if sign == "-" else "") + piece
            else:
                s += f" {sign} {piece}"
        return s


def _mono_sort_key(m):
    p, a, nu = m
    return (-perm_length(p), canonical_word(p), tuple(-x for x in a), tuple(str(x) for x in nu))


def format_monomial(p, a, nu):
    bits = [f"t{l}" for l in canonical_word(p)]
    for k, e in enumerate(a):
        if e == 1:
            bits.append(f"x{k + 1}")
        elif e:
            bits.append(f"x{k + 1}^{e}")
    bits.append("e(" + ",".join(str(x) for x in nu) + ")")
    return " ".join(bits)


def _accumulate(out, terms, sign):
    for k, c in terms.items():
        v = out.get(k, 0) + sign * c
        if v:
            out[k] = v
        else:
            out.pop(k, None)


def _right_x(terms, a):
    """Multiply basis monomials on the right by x^a (no rewriting needed)."""
    if not any(a):
        return terms
    return {(p, _add_exp(b, a), nu): c for (p, b, nu), c in terms.items()}


# ---------------------------------------------------------------------------
# the algebra
# ---------------------------------------------------------------------------

class KLRContext:
    """R(n) for a Cartan datum and Q family.  Elements of any length can be built
    through the context; ``n`` is the default ambient length."""

    def __init__(self, datum, qfam=None, n=None):
        self.datum = datum
        self.qfam = qfam if qfam is not None else QFamily(datum)
        if self.qfam.datum is not datum and self.qfam.datum != datum:
            raise InconsistentQFamily("Q family was built for a different Cartan datum")
        self.n = n
        self._left_tau = {}
        self._left_x = {}
        self._path = {}
        self._form = {(i, j): datum.bilinear(i, j) for i in datum.index for j in datum.index}

    # ----- constructors -----
    def words(self, beta=None, n=None):
        """All words of a given content ``beta`` (coordinate vector) or length ``n``."""
        if beta is not None:
            letters = []
            for lab, m in zip(self.datum.index, beta):
                letters.extend([lab] * m)
            return sorted(set(itertools.permutations(letters)), key=lambda w: tuple(self.datum.pos(x) for x in w))
        return list(itertools.product(self.datum.index, repeat=n))

    def zero(self, n=None):
        return KLRElement(self, self._n(n))

    def _n(self, n):
        if n is None:
            if self.n is None:
                raise ValueError("ambient length not fixed")
            return self.n
        return n

    def monomial(self, perm, exps, nu, coeff=1):
        n = len(nu)
        return KLRElement(self, n, {(tuple(perm), tuple(exps), tuple(nu)): Fraction(coeff)})

    def e(self, nu):
        nu = tuple(nu)
        return self.monomial(identity_perm(len(nu)), (0,) * len(nu), nu)

    def one(self, n=None, beta=None):
        """Sum of e(nu) over all words of length n (or of content beta)."""
        ws = self.words(beta=beta) if beta is not None else self.words(n=self._n(n))
        n_ = len(ws[0]) if ws else 0
        return KLRElement(self, n_, {(identity_perm(len(w)), (0,) * len(w), tuple(w)): Fraction(1) for w in ws})

    def x(self, k, nu=None, n=None, beta=None):
        if nu is not None:
            nu = tuple(nu)
            a = [0] * len(nu)
            a[k - 1] = 1
            return self.monomial(identity_perm(len(nu)), a, nu)
        one = self.one(n=n, beta=beta)
        return self.left_x_elem(k, one)

    def tau(self, l, nu=None, n=None, beta=None):
        base = self.e(nu) if nu is not None else self.one(n=n, beta=beta)
        return self.left_tau_elem(l, base)

    def tau_word(self, word, nu):
        return self.apply_letters([("t", l) for l in word], self.e(nu))

    # ----- degrees -----
    def tau_degree(self, p, nu):
        n = len(p)
        f = self._form
        return -sum(f[(nu[a], nu[b])] for a in range(n) for b in range(a + 1, n) if p[a] > p[b])

    def monomial_degree(self, mono):
        p, a, nu = mono
        f = self._form
        return self.tau_degree(p, nu) + sum(e * f[(nu[k], nu[k])] for k, e in enumerate(a) if e)

    # ----- left actions on basis monomials tau_w e(nu) -----
    def _left_x_base(self, k, p, nu):
        key = (k, p, nu)
        hit = self._left_x.get(key)
        if hit is not None:
            return hit
        n = len(nu)
        word = canonical_word(p)
        if not word:
            res = {(p, _unit(n, k - 1), nu): Fraction(1)}
        else:
            j = word[0]
            p_rest = apply_s(j, p)
            mu = act_on_word(p_rest, nu)
            m = j + 1 if k == j else j if k == j + 1 else k
            inner = self._left_x_base(m, p_rest, nu)
            res = self._left_tau_terms(j, inner)
            if mu[j - 1] == mu[j]:
                y = (p_rest, (0,) * n, nu)
                if k == j + 1:
                    _accumulate(res, {y: Fraction(1)}, 1)
                elif k == j:
                    _accumulate(res, {y: Fraction(1)}, -1)
        self._left_x[key] = res
        return res

    def _left_tau_base(self, l, p, nu):
        key = (l, p, nu)
        hit = self._left_tau.get(key)
        if hit is not None:
            return hit
        n = len(nu)
        zero_a = (0,) * n
        word = canonical_word(p)
        new_p = apply_s(l, p)
        if not is_left_descent(l, p):
            target = canonical_word(new_p)
            src = (l,) + word
            res = {(new_p, zero_a, nu): Fraction(1)}
            if src != target:
                _accumulate(res, self._path_corrections(src, target, nu), 1)
        else:
            v = new_p
            vword = canonical_word(v)
            # tau_w = tau_l tau_{canon(v)} + C
            corr = self._path_corrections(word, (l,) + vword, nu)
            mu = act_on_word(v, nu)
            res = {}
            if mu[l - 1] != mu[l]:
                qpoly = q_poly_in_x(self.qfam.coeffs(mu[l - 1], mu[l]), n, l, l + 1)
                base = {(v, zero_a, nu): Fraction(1)}
                _accumulate(res, self._apply_poly_terms(qpoly, base), 1)
            if corr:
                _accumulate(res, self._left_tau_terms(l, corr), 1)
        self._left_tau[key] = res
        return res

    def _path_corrections(self, src, dst, nu):
        """D with tau_src e(nu) = tau_dst e(nu) + D (both reduced words of one permutation)."""
        key = (src, dst, nu)
        hit = self._path.get(key)
        if hit is not None:
            return hit
        n = len(nu)
        out = {}
        for word, move in braid_path(src, dst):
            if move is None:
                continue
            t, k, sign = move
            prefix, suffix = word[:t], word[t + 3:]
            mu = act_on_word(perm_of_word(suffix, n), nu)
            if mu[k - 1] != mu[k + 1]:
                continue
            if mu[k - 1] == mu[k]:
                continue
            bpoly = braid_correction_poly(self.qfam.coeffs(mu[k - 1], mu[k]), n, k)
            if not bpoly:
                continue
            inner = self._apply_letters_terms([("t", l) for l in suffix], {(identity_perm(n), (0,) * n, nu): Fraction(1)})
            inner = self._apply_poly_terms(bpoly, inner)
            inner = self._apply_letters_terms([("t", l) for l in prefix], inner)
            _accumulate(out, inner, sign)
        self._path[key] = out
        return out

    # ----- term-level helpers -----
    def _left_tau_terms(self, l, terms):
        out = {}
        for (p, a, nu), c in terms.items():
            base = self._left_tau_base(l, p, nu)
            if base:
                _accumulate(out, _right_x(base, a), c)
        return out

    def _left_x_terms(self, k, terms):
        out = {}
        for (p, a, nu), c in terms.items():
            base = self._left_x_base(k, p, nu)
            _accumulate(out, _right_x(base, a), c)
        return out

    def _apply_poly_terms(self, poly, terms):
        out = {}
        for e, c in poly.items():
            cur = terms
            for k, m in enumerate(e):
                for _ in range(m):
                    cur = self._left_x_terms(k + 1, cur)
            _accumulate(out, cur, c)
        return out

    def _left_e_terms(self, mu, terms):
        mu = tuple(mu)
        return {(p, a, nu): c for (p, a, nu), c in terms.items() if act_on_word(p, nu) == mu}

    def _apply_letters_terms(self, letters, terms):
        """Left-multiply by the product of ``letters`` (leftmost letter applied last)."""
        for kind, arg in reversed(list(letters)):
            if kind == "t":
                terms = self._left_tau_terms(arg, terms)
            elif kind == "x":
                terms = self._left_x_terms(arg, terms)
            elif kind == "e":
                terms = self._left_e_terms(arg, terms)
            else:
                raise ValueError(f"unknown generator kind {kind!r}")
            if not terms:
                break
        return terms

    # ----- public element operations -----
    def left_tau_elem(self, l, elem):
        return KLRElement(self, elem.n, self._left_tau_terms(l, elem.terms))

    def left_x_elem(self, k, elem):
        return KLRElement(self, elem.n, self._left_x_terms(k, elem.terms))

    def apply_letters(self, letters, elem):
        return KLRElement(self, elem.n, self._apply_letters_terms(letters, elem.terms))

    def multiply(self, a, b):
        if a.n != b.n:
            raise AmbientMismatch(f"elements live in R({a.n}) and R({b.n})")
        out = {}
        for (p, ea, nu), c in a.terms.items():
            # tau_p x^ea e(nu) * b
            part = {m: v for m, v in b.terms.items() if act_on_word(m[0], m[2]) == nu}
            if not part:
                continue
            for k, m in enumerate(ea):
                for _ in range(m):
                    part = self._left_x_terms(k + 1, part)
            part = self._apply_letters_terms([("t", l) for l in canonical_word(p)], part)
            _accumulate(out, part, c)
        return KLRElement(self, a.n, out)

    def normal_form(self, expression, nu=None, n=None):
        """Normal form of a generator expression.

        ``expression`` is either a KLRElement (returned unchanged, already in
        normal form) or a list of ``(coefficient, letters)`` pairs where
        ``letters`` is a sequence of ``('e', word)``, ``('x', k)``, ``('t', l)``.
        A trailing idempotent may be supplied as ``nu``; otherwise the product
        is taken against the identity of length ``n``.
        """
        if isinstance(expression, KLRElement):
            return expression
        if isinstance(expression, str):
            expression = [(1, parse_letters(expression))]
        base = self.e(nu) if nu is not None else self.one(n=n)
        out = {}
        for coeff, letters in expression:
            _accumulate(out, self._apply_letters_terms(list(letters), base.terms), Fraction(coeff))
        return KLRElement(self, base.n, out)

    # ----- involution -----
    def psi(self, elem):
        """The involution e(nu) -> e(nu'), x_k -> x_{n+1-k}, tau_l e(nu) -> +-tau_{n-l} e(nu'),
        extended multiplicatively (see ``psi_variance``)."""
        n = elem.n
        out = {}
        for (p, a, nu), c in elem.terms.items():
            rev = tuple(reversed(nu))
            terms = {(identity_perm(n), tuple(reversed(a)), rev): Fraction(1)}
            # image of tau_{i_1} ... tau_{i_r} e(nu): apply images right to left
            word = canonical_word(p)
            sign = 1
            cur_nu = nu
            letters = []
            for l in reversed(word):
                if cur_nu[l - 1] == cur_nu[l]:
                    sign = -sign
                letters.append(n - l)
                cur_nu = act_on_word(apply_s(l, identity_perm(n)), cur_nu)
            for l in letters:
                terms = self._left_tau_terms(l, terms)
            _accumulate(out, terms, c * sign)
        return KLRElement(self, n, out)

    def psi_variance(self, n, beta=None, trials=None):
        """Decide empirically whether psi is multiplicative or anti-multiplicative on generators.

        Returns ``{'homomorphism': bool, 'anti_homomorphism': bool}`` computed
        over all pairs of generators of R(n) (restricted to content ``beta``).
        """
        gens = self.generators(n, beta)
        hom = anti = True
        for g in gens:
            for h in gens:
                lhs = self.psi(g * h)
                if hom and lhs != self.psi(g) * self.psi(h):
                    hom = False
                if anti and lhs != self.psi(h) * self.psi(g):
                    anti = False
                if not hom and not anti:
                    return {"homomorphism": False, "anti_homomorphism": False}
        return {"homomorphism": hom, "anti_homomorphism": anti}

    def generators(self, n, beta=None):
        ws = self.words(beta=beta) if beta is not None else self.words(n=n)
        out = []
        for w in ws:
            out.append(self.e(w))
            for k in range(1, n + 1):
                out.append(self.x(k, nu=w))
            for l in range(1, n):
                out.append(self.tau(l, nu=w))
        return out

    # ----- relation check -----
    def relation_residuals(self, nu):
        """LHS - RHS of every defining relation instantiated at the idempotent e(nu).

        Returns a list of ``(name, residual element)``; all residuals vanish
        in a correct implementation.  Each side is computed by left
        multiplication of generators onto e(nu).
        """
        nu = tuple(nu)
        n = len(nu)
        E = self.e(nu)
        zero = self.zero(n)

        def L(*letters):
            return self.apply_letters(list(letters), E)

        out = []
        for nu2 in self.words(n=n):
            want = E if nu2 == nu else zero
            out.append((f"e{nu2}e{nu}", L(("e", nu2)) - want))
        out.append(("sum e = 1", self.one(n=n) * E - E))
        for k in range(1, n + 1):
            out.append((f"x{k}e=ex{k}", L(("e", nu), ("x", k)) - L(("x", k), ("e", nu))))
            for l in range(1, n + 1):
                out.append((f"x{k}x{l}", L(("x", k), ("x", l)) - L(("x", l), ("x", k))))
        for k in range(1, n):
            s_nu = act_on_word(apply_s(k, identity_perm(n)), nu)
            out.append((f"t{k}e", L(("t", k)) - L(("e", s_nu), ("t", k))))
            for l in range(1, n):
                if abs(k - l) > 1:
                    out.append((f"t{k}t{l}", L(("t", k), ("t", l)) - L(("t", l), ("t", k))))
            qpoly = q_poly_in_x(self.qfam.coeffs(nu[k - 1], nu[k]), n, k, k + 1)
            rhs = KLRElement(self, n, self._apply_poly_terms(qpoly, E.terms))
            out.append((f"t{k}^2", L(("t", k), ("t", k)) - rhs))
            for m in range(1, n + 1):
                sm = k + 1 if m == k else k if m == k + 1 else m
                lhs = L(("t", k), ("x", m)) - L(("x", sm), ("t", k))
                if nu[k - 1] == nu[k] and m == k:
                    rhs = -E
                elif nu[k - 1] == nu[k] and m == k + 1:
                    rhs = E
                else:
                    rhs = zero
                out.append((f"t{k}x{m}", lhs - rhs))
            if k + 2 <= n:
                lhs = L(("t", k + 1), ("t", k), ("t", k + 1)) - L(("t", k), ("t", k + 1), ("t", k))
                if nu[k - 1] == nu[k + 1]:
                    bpoly = braid_correction_poly(self.qfam.coeffs(nu[k - 1], nu[k]), n, k)
                    rhs = KLRElement(self, n, self._apply_poly_terms(bpoly, E.terms))
                else:
                    rhs = zero
                out.append((f"braid{k}", lhs - rhs))
        return out

    # ----- graded dimensions -----
    def graded_dim_hom(self, mu, nu, cutoff):
        """dim_q e(mu) R e(nu) through degree ``cutoff`` from the basis theorem."""
        mu, nu = tuple(mu), tuple(nu)
        if len(mu) != len(nu) or sorted(map(str, mu)) != sorted(map(str, nu)):
            return TruncatedSeries(cutoff)
        n = len(nu)
        poly_part = LaurentPoly.const(1)
        for k in range(n):
            poly_part = poly_part * (LaurentPoly.const(1) - LaurentPoly.monomial(self._form[(nu[k], nu[k])]))
        tau_part = {}
        for p in all_perms(n):
            if act_on_word(p, nu) == mu:
                d = self.tau_degree(p, nu)
                tau_part[d] = tau_part.get(d, 0) + 1
        if not tau_part:
            return TruncatedSeries(cutoff)
        lo = min(tau_part)
        inv = series_inverse(poly_part, cutoff - lo)
        return inv * LaurentPoly(tau_part)

    def brute_force_dim_hom(self, mu, nu, cutoff):
        """Degreewise rank of rewritten products x^b tau_u x^a e(nu) (all tau words u up to the
        longest length, |b| <= 1).  Independent of the closed formula; asserts homogeneity."""
        mu, nu = tuple(mu), tuple(nu)
        n = len(nu)
        if len(mu) != n or sorted(map(str, mu)) != sorted(map(str, nu)):
            return TruncatedSeries(cutoff)
        maxlen = n * (n - 1) // 2
        f = self._form
        tau_words = [()]
        for L in range(1, maxlen + 1):
            tau_words.extend(itertools.product(range(1, n), repeat=L))
        left_monos = [None] + list(range(1, n + 1))
        by_degree = {}
        index = {}
        for u in tau_words:
            base = self._apply_letters_terms([("t", l) for l in u], {(identity_perm(n), (0,) * n, nu): Fraction(1)})
            if not base:
                continue
            dset = {self.monomial_degree(m) for m in base}
            assert len(dset) == 1, "rewriting produced an inhomogeneous element"
            d0 = next(iter(dset))
            # x^a on the right: enumerate exponent vectors within the degree budget
            for a in _exponents_upto(n, [f[(c, c)] for c in nu], cutoff - d0):
                right = _right_x(base, a)
                for b in left_monos:
                    terms = right if b is None else self._left_x_terms(b, right)
                    terms = self._left_e_terms(mu, terms)
                    if not terms:
                        continue
                    degs = {self.monomial_degree(m) for m in terms}
                    assert len(degs) == 1, "rewriting produced an inhomogeneous element"
                    d = next(iter(degs))
                    if d > cutoff:
                        continue
                    ech = by_degree.setdefault(d, SparseEchelon())
                    vec = {}
                    for m, c in terms.items():
                        if m not in index:
                            index[m] = len(index)
                        vec[index[m]] = c
                    ech.add(vec)
        return TruncatedSeries(cutoff, {d: ech.rank for d, ech in by_degree.items()})

    def random_element(self, rng, n, beta=None, max_letters=4, terms=2):
        """A random combination of generator products, for property tests."""
        ws = self.words(beta=beta) if beta is not None else self.words(n=n)
        out = self.zero(n)
        for _ in range(terms):
            letters = []
            for _ in range(rng.randint(0, max_letters)):
                if n > 1 and rng.random() < 0.5:
                    letters.append(("t", rng.randint(1, n - 1)))
                else:
                    letters.append(("x", rng.randint(1, n)))
            nu = rng.choice(ws)
            c = Fraction(rng.randint(-3, 3))
            out = out + KLRElement(self, n, self._apply_letters_terms(letters, self.e(nu).terms)).scale(c)
        return out


def _exponents_upto(n, weights, budget):
    """Exponent vectors a with sum a_k * weights[k] <= budget."""
    out = []

    def rec(k, left, cur):
        if k == n:
            out.append(tuple(cur))
            return
        m = 0
        while m * weights[k] <= left:
            cur.append(m)
            rec(k + 1, left - m * weights[k], cur)
            cur.pop()
            m += 1

    if budget >= 0:
        rec(0, budget, [])
    return out


def parse_letters(text):
    """Parse ``"t1 x2 e(1,1)"`` style generator strings into letter tuples."""
    letters = []
    for tok in text.replace("*", " ").split():
        if tok.startswith("e(") and tok.endswith(")"):
            body = tok[2:-1]
            word = tuple(int(s) if s.strip().lstrip("-").isdigit() else s.strip() for s in body.split(",") if s.strip())
            letters.append(("e", word))
        elif tok[0] in "tx" and tok[1:].isdigit():
            letters.append((tok[0], int(tok[1:])))
        else:
            raise ValueError(f"cannot parse generator {tok!r}")
    return letters


def build_klr_context(datum, qfam=None, n=None):
    return KLRContext(datum, qfam, n)


# ---------------------------------------------------------------------------
# characters and convolution
# ---------------------------------------------------------------------------

class GradedCharacter:
    """Map word -> graded dimension (LaurentPoly), all words of one content."""

    def __init__(self, datum, values=None):
        self.datum = datum
        self.values = {}
        content = None
        for w, v in (values or {}).items():
            w = tuple(w)
            v = LaurentPoly.coerce(v)
            if v.is_zero():
                continue
            c = datum.content(w)
            if content is None:
                content = c
            elif c != content:
                raise ContentMixing("a character must be supported on a single content")
            self.values[w] = v
        self.content = content

    def __eq__(self, other):
        if not isinstance(other, GradedCharacter):
            return NotImplemented
        return self.values == other.values

    def __add__(self, other):
        out = dict(self.values)
        for w, v in other.values.items():
            out[w] = out.get(w, LaurentPoly()) + v
        return GradedCharacter(self.datum, out)

    def __sub__(self, other):
        out = dict(self.values)
        for w, v in other.values.items():
            out[w] = out.get(w, LaurentPoly()) - v
        return GradedCharacter(self.datum, out)

    def scale(self, p):
        p = LaurentPoly.coerce(p)
        return GradedCharacter(self.datum, {w: v * p for w, v in self.values.items()})

    def is_zero(self):
        return not self.values

    def total(self):
        out = LaurentPoly()
        for v in self.values.values():
            out = out + v
        return out

    def to_json(self):
        return {",".join(map(str, w)): v.to_pairs() for w, v in sorted(self.values.items(), key=lambda kv: tuple(map(str, kv[0])))}

    def __repr__(self):
        return "{" + ", ".join(f"{w}: {v}" for w, v in sorted(self.values.items(), key=lambda kv: tuple(map(str, kv[0])))) + "}"


def shuffle_character(datum, chM, chN):
    """Character of the convolution product.

    Each interleaving of nu (from M) and nu' (from N) is weighted by
    q^{-sum (alpha_{nu_k}, alpha_{nu'_l})} over pairs where a letter of nu'
    lands before a letter of nu.
    """
    if chM.datum != datum or chN.datum != datum:
        raise ContentMixing("characters built over different Cartan data")
    out = {}
    for nu, fm in chM.values.items():
        for nup, fn in chN.values.items():
            m, n = len(nu), len(nup)
            base = fm * fn
            for slots in itertools.combinations(range(m + n), m):
                slotset = set(slots)
                word = []
                it_m, it_n = iter(nu), iter(nup)
                exp = 0
                seen_from_n = []
                for pos in range(m + n):
                    if pos in slotset:
                        letter = next(it_m)
                        for b in seen_from_n:
                            exp -= datum.bilinear(letter, b)
                        word.append(letter)
                    else:
                        letter = next(it_n)
                        seen_from_n.append(letter)
                        word.append(letter)
                w = tuple(word)
                out[w] = out.get(w, LaurentPoly()) + base.shift(exp)
    return GradedCharacter(datum, out)


def induced_trivial_character(ctx, nu, nup):
    """Character of R e(nu nu') modulo the left ideal generated by all x_k e(nu nu') and the
    taus internal to each block: the convolution of the one-dimensional modules
    with word nu and nu' on which x's and taus act by zero (when these exist)."""
    word = tuple(nu) + tuple(nup)
    n = len(word)
    m = len(nu)
    internal = [l for l in range(1, n) if l != m]
    zero_a = (0,) * n
    perms = all_perms(n)
    ident = identity_perm(n)
    base = {(ident, zero_a, word): Fraction(1)}
    # generators of the x-free part of the tau ideal
    col = {}
    echelons = {}
    for l in internal:
        gen = ctx._left_tau_terms(l, base)
        for p in perms:
            cw = canonical_word(p)
            # right-hand x's never disappear under left multiplication by taus,
            # so only |c| <= 1 can contribute x-free terms
            for xs in _exponents_upto(n, [1] * n, 1):
                t = dict(gen)
                for k, e in enumerate(xs):
                    for _ in range(e):
                        t = ctx._left_x_terms(k + 1, t)
                t = ctx._apply_letters_terms([("t", s) for s in cw], t)
                t = {mm: c for mm, c in t.items() if not any(mm[1])}
                if not t:
                    continue
                left = act_on_word(next(iter(t))[0], word)
                deg = ctx.monomial_degree(next(iter(t)))
                ech = echelons.setdefault((left, deg), SparseEchelon())
                vec = {}
                for mm, c in t.items():
                    if mm not in col:
                        col[mm] = len(col)
                    vec[col[mm]] = c
                ech.add(vec)
    out = {}
    for p in perms:
        left = act_on_word(p, word)
        deg = ctx.tau_degree(p, word)
        out.setdefault(left, {})
        out[left][deg] = out[left].get(deg, 0) + 1
    for (left, deg), ech in echelons.items():
        out[left][deg] -= ech.rank
    return GradedCharacter(ctx.datum, {w: LaurentPoly(d) for w, d in out.items()})


def random_generator_word(rng, n, max_len):
    letters = []
    for _ in range(rng.randint(0, max_len)):
        if n > 1 and rng.random() < 0.6:
            letters.append(("t", rng.randint(1, n - 1)))
        else:
            letters.append(("x", rng.randint(1, n)))
    return letters


__all__ = [
    "KLRContext", "KLRElement", "QFamily", "GradedCharacter", "build_klr_context",
    "shuffle_character", "induced_trivial_character", "quiver_q_family", "canonical_word",
    "perm_of_word", "act_on_word", "parse_letters", "support_set",
]
