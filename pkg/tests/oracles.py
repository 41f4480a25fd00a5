"""Independent oracles used by the test suite.

``PolynomialRepresentation`` is the faithful action of R(n) on
``sum_nu Q[x_1..x_n] e(nu)``: x's multiply, ``tau_k`` acts by
``(s_k f - f) / (x_k - x_{k+1})`` when ``nu_k = nu_{k+1}`` and by
``P_{nu_k, nu_{k+1}}(x_k, x_{k+1}) s_k f`` otherwise, with
``P_ij = 1`` and ``P_ji = Q_ij`` for ``i`` before ``j``.  It is written with
sympy directly and shares no code with the rewriting engine.
"""

import sympy


class PolynomialRepresentation:
    def __init__(self, ctx, n):
        self.ctx = ctx
        self.n = n
        self.xs = sympy.symbols(f"x1:{n + 1}")

    def _p(self, i, j, u, v):
        datum = self.ctx.datum
        if datum.pos(i) < datum.pos(j):
            return sympy.Integer(1)
        coeffs = self.ctx.qfam.coeffs(j, i)
        return sum(sympy.Rational(c.numerator, c.denominator) * u ** p * v ** q for (p, q), c in coeffs.items())

    def swap(self, f, k):
        a, b = self.xs[k - 1], self.xs[k]
        return f.subs({a: b, b: a}, simultaneous=True)

    def tau(self, k, f, nu):
        nu = tuple(nu)
        a, b = self.xs[k - 1], self.xs[k]
        new_nu = nu[:k - 1] + (nu[k], nu[k - 1]) + nu[k + 1:]
        if nu[k - 1] == nu[k]:
            out = sympy.cancel((self.swap(f, k) - f) / (a - b))
        else:
            out = self._p(nu[k - 1], nu[k], a, b) * self.swap(f, k)
        return sympy.expand(out), new_nu

    def act_monomial(self, mono, f, nu):
        from klrkit.klr import canonical_word
        perm, exps, right = mono
        if tuple(right) != tuple(nu):
            return None
        g = f
        for k, e in enumerate(exps):
            g = g * self.xs[k] ** e
        word = tuple(nu)
        for l in reversed(canonical_word(perm)):
            g, word = self.tau(l, g, word)
        return sympy.expand(g), word

    def act(self, elem, f, nu):
        """Apply a KLRElement to ``f e(nu)``; returns ``{word: polynomial}``."""
        out = {}
        for mono, c in elem.terms.items():
            hit = self.act_monomial(mono, f, nu)
            if hit is None:
                continue
            g, word = hit
            out[word] = sympy.expand(out.get(word, 0) + sympy.Rational(c.numerator, c.denominator) * g)
        return {w: g for w, g in out.items() if g != 0}

    def act_on_vector(self, elem, vec):
        out = {}
        for nu, f in vec.items():
            for w, g in self.act(elem, f, nu).items():
                out[w] = sympy.expand(out.get(w, 0) + g)
        return {w: g for w, g in out.items() if g != 0}


def brute_positive_roots(datum):
    """Positive roots by brute force: integer vectors v >= 0 with (v, v) = (alpha_i, alpha_i) for some i
    that lie in the Weyl orbit of a simple root (orbit closure by breadth-first search)."""
    simple = [datum.simple_root(i) for i in datum.index]
    orbit = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for i in datum.index:
                w = datum.weyl_reflect(i, v)
                if w not in orbit:
                    orbit.add(w)
                    nxt.append(w)
        frontier = nxt
    return {v for v in orbit if all(x >= 0 for x in v)}
