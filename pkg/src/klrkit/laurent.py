"""Laurent polynomials in q and truncated q-series with exact rational coefficients."""

from fractions import Fraction
from numbers import Rational

from .errors import InexactDivision, NotInvertible


def _frac(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


def _clean(terms):
    return {e: c for e, c in terms.items() if c != 0}


def _fmt_coeff(c):
    return str(c.numerator) if c.denominator == 1 else f"({c})"


def _fmt_terms(items, var="q"):
    """Render (exponent, coeff) pairs, highest exponent first."""
    if not items:
        return "0"
    out = []
    for e, c in items:
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if e == 0:
            body = _fmt_coeff(a)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if a == 1 else f"{_fmt_coeff(a)}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


class LaurentPoly:
    """Element of Q[q, q^-1], stored as a sparse ``{exponent: Fraction}`` map."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        self._terms = _clean({int(e): _frac(c) for e, c in dict(terms).items()})
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c):
        return cls({0: c})

    @classmethod
    def monomial(cls, e, c=1):
        return cls({e: c})

    @classmethod
    def q(cls):
        return cls({1: 1})

    @classmethod
    def coerce(cls, x):
        if isinstance(x, LaurentPoly):
            return x
        return cls.const(x)

    @classmethod
    def from_pairs(cls, pairs):
        out = {}
        for e, c in pairs:
            c = Fraction(c) if not isinstance(c, str) else Fraction(c)
            out[int(e)] = out.get(int(e), 0) + c
        return cls(out)

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def to_pairs(self):
        """``[[exponent, coefficient], ...]`` in increasing exponent; integral coefficients as ints."""
        return [[e, int(c) if c.denominator == 1 else str(c)] for e, c in self.items()]

    def coeff(self, e):
        return self._terms.get(e, Fraction(0))

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_monomial(self):
        return len(self._terms) == 1

    def max_degree(self):
        return max(self._terms) if self._terms else None

    def min_degree(self):
        return min(self._terms) if self._terms else None

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly.const(other)
            else:
                return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly()
            return LaurentPoly._raw({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly._raw(_clean(out))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if not self.is_monomial():
                raise NotInvertible("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            return LaurentPoly({-e * -n: Fraction(1) / c ** -n})
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k):
        """Multiply by q^k."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def bar(self):
        """The bar involution q -> q^{-1}."""
        return LaurentPoly._raw({-e: c for e, c in self._terms.items()})

    def substitute_power(self, d):
        """q -> q^d."""
        return LaurentPoly._raw({e * d: c for e, c in self._terms.items()})

    def evaluate(self, x):
        x = _frac(x)
        return sum((c * x ** e for e, c in self._terms.items()), Fraction(0))

    def at_one(self):
        return sum(self._terms.values(), Fraction(0))

    def exact_div(self, other):
        """Quotient in Q[q, q^-1]; raises InexactDivision when ``other`` does not divide."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly()
        lo = other.min_degree()
        hi = other.max_degree()
        lead = other._terms[hi]
        rem = dict(self._terms)
        quot = {}
        while rem:
            top = max(rem)
            if top - hi < min(rem) - lo:
                raise InexactDivision(f"{other} does not divide {self}")
            k = top - hi
            c = rem[top] / lead
            quot[k] = c
            for e, d in other._terms.items():
                v = rem.get(e + k, 0) - c * d
                if v:
                    rem[e + k] = v
                else:
                    rem.pop(e + k, None)
            if rem and max(rem) - min(rem) < hi - lo and rem:
                raise InexactDivision(f"{other} does not divide {self}")
        return LaurentPoly._raw(quot)

    def __repr__(self):
        return _fmt_terms(sorted(self._terms.items(), reverse=True))

    def __str__(self):
        return repr(self)


def quantum_integer(n, d=1):
    """[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d}).

    Negative ``n`` follows the same formula, giving ``-[−n]``.
    """
    if n < 0:
        return -quantum_integer(-n, d)
    return LaurentPoly._raw({d * (n - 1 - 2 * k): Fraction(1) for k in range(n)})


def quantum_factorial(n, d=1):
    out = LaurentPoly.const(1)
    for k in range(1, n + 1):
        out = out * quantum_integer(k, d)
    return out


def quantum_binomial(n, k, d=1):
    if k < 0 or k > n:
        return LaurentPoly()
    num = quantum_factorial(n, d)
    return num.exact_div(quantum_factorial(k, d) * quantum_factorial(n - k, d))


class TruncatedSeries:
    """A q-series known through degree ``cutoff``; coefficients above it are discarded."""

    __slots__ = ("cutoff", "_terms")

    def __init__(self, cutoff, terms=None):
        self.cutoff = int(cutoff)
        terms = terms or {}
        self._terms = _clean({int(e): _frac(c) for e, c in dict(terms).items() if e <= self.cutoff})

    @classmethod
    def from_laurent(cls, p, cutoff):
        return cls(cutoff, p.terms)

    @property
    def terms(self):
        return dict(self._terms)

    def coeff(self, e):
        if e > self.cutoff:
            raise ValueError(f"degree {e} is beyond the cutoff {self.cutoff}")
        return self._terms.get(e, Fraction(0))

    def min_degree(self):
        return min(self._terms) if self._terms else None

    def is_zero(self):
        return not self._terms

    def to_laurent(self):
        return LaurentPoly(self._terms)

    def to_pairs(self):
        return LaurentPoly(self._terms).to_pairs()

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, LaurentPoly):
            return TruncatedSeries(self.cutoff, other.terms)
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.cutoff, {0: other})
        return None

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = min(self.cutoff, other.cutoff)
        a = {e: c for e, c in self._terms.items() if e <= d}
        b = {e: c for e, c in other._terms.items() if e <= d}
        return a == b

    def __hash__(self):
        return hash((self.cutoff, frozenset(self._terms.items())))

    def __neg__(self):
        return TruncatedSeries(self.cutoff, {e: -c for e, c in self._terms.items()})

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = min(self.cutoff, other.cutoff)
        out = {}
        for src in (self._terms, other._terms):
            for e, c in src.items():
                if e <= d:
                    out[e] = out.get(e, 0) + c
        return TruncatedSeries(d, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self._terms or not other._terms:
            return TruncatedSeries(min(self.cutoff, other.cutoff))
        # each factor is exact only through its own cutoff
        d = min(self.cutoff + other.min_degree(), other.cutoff + self.min_degree())
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                if e <= d:
                    out[e] = out.get(e, 0) + c1 * c2
        return TruncatedSeries(d, out)

    __rmul__ = __mul__

    def shift(self, k):
        return TruncatedSeries(self.cutoff + k, {e + k: c for e, c in self._terms.items()})

    def __repr__(self):
        body = _fmt_terms(sorted(self._terms.items()))
        return f"{body} + O(q^{self.cutoff + 1})"


def series_inverse(p, cutoff):
    """Inverse of a Laurent polynomial as a q-series, exact through degree ``cutoff``."""
    p = LaurentPoly.coerce(p)
    if p.is_zero():
        raise NotInvertible("zero has no inverse")
    lo = p.min_degree()
    c0 = p.coeff(lo)
    if c0 == 0:
        raise NotInvertible("lowest coefficient must be invertible")
    # p = q^lo * c0 * (1 + r); invert the unit part degree by degree
    unit = {e - lo: c / c0 for e, c in p.terms.items()}
    top = cutoff + lo
    inv = {0: Fraction(1)}
    for k in range(1, top + 1):
        s = Fraction(0)
        for e, c in unit.items():
            if 0 < e <= k:
                s += c * inv.get(k - e, 0)
        if s:
            inv[k] = -s
    out = {e - lo: c / c0 for e, c in inv.items()}
    return TruncatedSeries(cutoff, out)
