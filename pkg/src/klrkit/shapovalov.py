"""The contravariant form on an irreducible highest weight module, computed on words.

A word ``nu = (nu_1, ..., nu_n)`` stands for ``f_{nu_n} ... f_{nu_1} v_Lambda``
(the first letter acts first).  ``e_i`` is commuted through the f's; each
time it meets ``f_i`` it leaves ``(K_i - K_i^{-1}) / (q_i - q_i^{-1})`` acting
on the weight reached so far, i.e. a quantum integer.
"""

import itertools

from .errors import IdentityViolation
from .laurent import LaurentPoly, quantum_binomial, quantum_integer
from .linalg import bareiss_rank


class WeightedWordVector:
    """Formal combination of words (all of one content) with Laurent coefficients."""

    def __init__(self, terms=None):
        self.terms = {tuple(w): LaurentPoly.coerce(c) for w, c in (terms or {}).items() if LaurentPoly.coerce(c)}

    def __add__(self, other):
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, LaurentPoly()) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return WeightedWordVector(out)

    def scale(self, c):
        return WeightedWordVector({w: v * c for w, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, WeightedWordVector) and self.terms == other.terms

    def __repr__(self):
        return " + ".join(f"({c}) f{w}" for w, c in sorted(self.terms.items(), key=lambda kv: tuple(map(str, kv[0])))) or "0"


class Shapovalov:
    """Word calculus for V(Lambda) over a Cartan datum; ``lam`` lists <h_i, Lambda>."""

    def __init__(self, datum, lam):
        self.datum = datum
        self.lam = tuple(lam)
        if len(self.lam) != datum.n:
            raise ValueError("weight length does not match the rank")
        self._memo = {}

    def pairing(self, i, word_prefix):
        """<h_i, Lambda - content(prefix)>."""
        k = self.datum.pos(i)
        val = self.lam[k]
        for c in word_prefix:
            val -= self.datum.cartan(i, c)
        return val

    def apply_e_word(self, i, word):
        """e_i f_word v as a dict word -> LaurentPoly."""
        word = tuple(word)
        di = self.datum.d_of(i)
        out = {}
        for k, c in enumerate(word):
            if c != i:
                continue
            coeff = quantum_integer(self.pairing(i, word[:k]), di)
            if coeff.is_zero():
                continue
            rest = word[:k] + word[k + 1:]
            out[rest] = out.get(rest, LaurentPoly()) + coeff
        return {w: c for w, c in out.items() if c}

    def apply_e(self, i, vec):
        out = WeightedWordVector()
        for w, c in vec.terms.items():
            out = out + WeightedWordVector(self.apply_e_word(i, w)).scale(c)
        return out

    def form(self, nu, mu):
        """(f_nu v, f_mu v)."""
        nu, mu = tuple(nu), tuple(mu)
        if len(nu) != len(mu) or sorted(map(str, nu)) != sorted(map(str, mu)):
            return LaurentPoly()
        if not nu:
            return LaurentPoly.const(1)
        key = (nu, mu)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        # (f_nu v, f_j u) = (e_j f_nu v, u) with mu = (mu', j)
        j = mu[-1]
        out = LaurentPoly()
        for w, c in self.apply_e_word(j, nu).items():
            out = out + c * self.form(w, mu[:-1])
        self._memo[key] = out
        return out

    def form_vectors(self, u, v):
        out = LaurentPoly()
        for w1, c1 in u.terms.items():
            for w2, c2 in v.terms.items():
                out = out + c1 * c2 * self.form(w1, w2)
        return out

    def words(self, beta):
        letters = []
        for lab, m in zip(self.datum.index, beta):
            letters.extend([lab] * m)
        return sorted(set(itertools.permutations(letters)), key=lambda w: tuple(self.datum.pos(x) for x in w))

    def gram_matrix(self, beta, words=None):
        ws = list(words) if words is not None else self.words(beta)
        return ws, [[self.form(a, b) for b in ws] for a in ws]

    def weight_multiplicity(self, beta, words=None):
        """dim V(Lambda)_{Lambda - beta} as the rank of the Gram matrix over Q(q)."""
        ws, g = self.gram_matrix(beta, words)
        if not ws:
            return 0
        return bareiss_rank(g)

    def serre_element(self, i, j, prefix=()):
        """[N]_i! times the Serre element applied to f_prefix v, N = 1 - a_ij."""
        N = 1 - self.datum.cartan(i, j)
        di = self.datum.d_of(i)
        terms = {}
        for k in range(N + 1):
            w = tuple(prefix) + (i,) * k + (j,) + (i,) * (N - k)
            c = quantum_binomial(N, k, di)
            if k % 2:
                c = -c
            terms[w] = terms.get(w, LaurentPoly()) + c
        return WeightedWordVector(terms)

    def serre_check(self, i, j, probes=None, prefixes=((),)):
        """Pair the Serre element against probe words; raises IdentityViolation on a nonzero pairing."""
        if i == j:
            raise ValueError("Serre relations need i != j")
        checked = 0
        for prefix in prefixes:
            s = self.serre_element(i, j, prefix)
            content = self.datum.content(next(iter(s.terms)))
            probe_words = probes if probes is not None else self.words(content)
            for mu in probe_words:
                if self.datum.content(mu) != content:
                    continue
                val = self.form_vectors(s, WeightedWordVector({tuple(mu): 1}))
                checked += 1
                if val:
                    raise IdentityViolation(
                        f"Serre element ({i},{j}) pairs to {val} with {mu}",
                        {"i": i, "j": j, "prefix": list(prefix), "probe": list(mu), "value": val.to_pairs()},
                    )
        return {"pairs_checked": checked, "passed": True}


def shapovalov(datum, lam, nu, mu):
    return Shapovalov(datum, lam).form(nu, mu)


def weight_multiplicity(datum, lam, beta):
    return Shapovalov(datum, lam).weight_multiplicity(beta)


__all__ = ["Shapovalov", "WeightedWordVector", "shapovalov", "weight_multiplicity"]
