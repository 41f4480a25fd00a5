"""Rational functions in the spectral variables z, w and the quantum parameter q.

Backed by sympy's sparse multivariate fraction field over QQ in graded
lexicographic order with z > w > q.  The auxiliary variable ``w`` carries a
second independent spectral ratio (needed for three-fold Yang-Baxter checks);
single-ratio data simply never mentions it.
"""

from fractions import Fraction

from sympy import QQ
from sympy.polys.fields import field
from sympy.polys.orderings import grlex

from .errors import ZeroFunction
from .laurent import LaurentPoly

FIELD, _Z, _W, _Q = field("z,w,q", QQ, grlex)
RING = FIELD.ring
_RZ, _RW, _RQ = RING.gens
_VAR_INDEX = {"z": 0, "w": 1, "q": 2}


def _to_fraction(c):
    return Fraction(int(c.numerator), int(c.denominator))


def _poly_to_terms(p):
    terms = ((tuple(m), _to_fraction(c)) for m, c in p.terms())
    return sorted(terms, key=lambda t: (sum(t[0]), t[0]), reverse=True)


def _normalize(num, den):
    """Scale so that the denominator's grlex-leading coefficient is 1."""
    lc = den.LC
    if lc != 1:
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    return num, den


class RationalFunctionQZ:
    """Reduced fraction num/den in Q(z, w, q) with monic (grlex) denominator."""

    __slots__ = ("_f",)

    def __init__(self, value=0):
        if isinstance(value, RationalFunctionQZ):
            self._f = value._f
        elif isinstance(value, LaurentPoly):
            self._f = laurent_to_field(value)
        elif isinstance(value, Fraction):
            self._f = FIELD(value.numerator) / value.denominator
        else:
            self._f = FIELD(value)

    @classmethod
    def wrap(cls, f):
        obj = cls.__new__(cls)
        obj._f = f
        return obj

    @classmethod
    def z(cls):
        return cls.wrap(_Z)

    @classmethod
    def w(cls):
        return cls.wrap(_W)

    @classmethod
    def q(cls):
        return cls.wrap(_Q)

    @classmethod
    def point(cls, sign, m):
        """The constant sign * q^m."""
        return cls.wrap(signed_q_power(sign, m))

    @property
    def raw(self):
        return self._f

    @property
    def numerator(self):
        return _normalize(self._f.numer, self._f.denom)[0]

    @property
    def denominator(self):
        return _normalize(self._f.numer, self._f.denom)[1]

    def reduce(self):
        """Return an equal function rebuilt from its normalized numerator and denominator."""
        num, den = _normalize(self._f.numer, self._f.denom)
        return RationalFunctionQZ.wrap(FIELD(num) / FIELD(den))

    def is_zero(self):
        return not self._f.numer

    def __bool__(self):
        return not self.is_zero()

    def _coerce(self, other):
        if isinstance(other, RationalFunctionQZ):
            return other._f
        if isinstance(other, LaurentPoly):
            return laurent_to_field(other)
        if isinstance(other, Fraction):
            return FIELD(other.numerator) / other.denominator
        if isinstance(other, int):
            return FIELD(other)
        return None

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return not (self._f - o).numer

    def __hash__(self):
        num, den = _normalize(self._f.numer, self._f.denom)
        return hash((tuple(_poly_to_terms(num)), tuple(_poly_to_terms(den))))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunctionQZ.wrap(self._f + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunctionQZ.wrap(self._f - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunctionQZ.wrap(o - self._f)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunctionQZ.wrap(self._f * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.numer:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunctionQZ.wrap(self._f / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunctionQZ.wrap(o / self._f)

    def __neg__(self):
        return RationalFunctionQZ.wrap(-self._f)

    def __pow__(self, n):
        if n < 0 and self.is_zero():
            raise ZeroDivisionError("zero to a negative power")
        return RationalFunctionQZ.wrap(self._f ** n)

    def evaluate(self, z=None, w=None, q=None):
        """Exact value at rational points; variables left as None must not occur."""
        vals = (z, w, q)
        num = _eval_poly(self._f.numer, vals)
        den = _eval_poly(self._f.denom, vals)
        if den == 0:
            raise ZeroDivisionError("evaluation point is a pole")
        return num / den

    def substitute(self, var, value):
        """Replace ``var`` (``'z'``, ``'w'`` or ``'q'``) by another rational function."""
        v = value._f if isinstance(value, RationalFunctionQZ) else self._coerce(value)
        idx = _VAR_INDEX[var]
        return RationalFunctionQZ.wrap(
            _subst_poly(self._f.numer, idx, v) / _subst_poly(self._f.denom, idx, v)
        )

    def degree_in(self, var):
        idx = _VAR_INDEX[var]
        return self._f.numer.degree(RING.gens[idx]), self._f.denom.degree(RING.gens[idx])

    def free_of(self, var):
        return self.degree_in(var) == (0, 0)

    def to_laurent(self):
        """Convert a function of q alone with monomial denominator to a LaurentPoly."""
        num, den = _normalize(self._f.numer, self._f.denom)
        if len(den.terms()) != 1:
            raise ValueError("denominator is not a monomial")
        (dm, dc), = den.terms()
        if dm[0] or dm[1]:
            raise ValueError("not a function of q alone")
        out = {}
        for m, c in num.terms():
            if m[0] or m[1]:
                raise ValueError("not a function of q alone")
            out[m[2] - dm[2]] = _to_fraction(c) / _to_fraction(dc)
        return LaurentPoly(out)

    def to_json(self):
        """``{"num": [[[ez, ew, eq], coeff], ...], "den": ...}`` with string coefficients."""
        num, den = _normalize(self._f.numer, self._f.denom)
        return {
            "num": [[list(m), str(c)] for m, c in _poly_to_terms(num)],
            "den": [[list(m), str(c)] for m, c in _poly_to_terms(den)],
        }

    @classmethod
    def from_json(cls, data):
        def build(rows):
            p = RING.zero
            for m, c in rows:
                p += RING({tuple(m): QQ(Fraction(c).numerator, Fraction(c).denominator)})
            return p

        return cls.wrap(FIELD(build(data["num"])) / FIELD(build(data["den"])))

    def __repr__(self):
        num, den = _normalize(self._f.numer, self._f.denom)
        n = format_poly(num)
        if den == 1:
            return n
        d = format_poly(den)
        return f"({n})/({d})"


def _eval_poly(p, vals):
    total = Fraction(0)
    for m, c in p.terms():
        t = _to_fraction(c)
        for e, v in zip(m, vals):
            if e:
                if v is None:
                    raise ValueError("value needed for a variable that occurs")
                t *= Fraction(v) ** e
        total += t
    return total


def _subst_poly(p, idx, value):
    out = FIELD.zero
    powers = {}
    for m, c in p.terms():
        e = m[idx]
        if e not in powers:
            powers[e] = value ** e
        rest = list(m)
        rest[idx] = 0
        out += FIELD(RING({tuple(rest): c})) * powers[e]
    return out


def format_poly(p):
    """Human-readable form like ``z - q^2`` (grlex order, highest term first)."""
    names = ("z", "w", "q")
    terms = _poly_to_terms(p)
    if not terms:
        return "0"
    parts = []
    for m, c in terms:
        mono = "*".join(
            n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e
        )
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def signed_q_power(sign, m):
    """sign * q^m as a field element."""
    base = _Q ** m if m >= 0 else 1 / _Q ** (-m)
    return base if sign > 0 else -base


def laurent_to_field(p):
    out = FIELD.zero
    for e, c in p.items():
        out += signed_q_power(1, e) * (FIELD(c.numerator) / c.denominator)
    return out


def order_of_zero(f, c, var="z"):
    """Order of vanishing of ``f`` at ``var = c`` where ``c = (sign, m)`` means sign * q^m.

    Negative results are pole orders.  Raises ZeroFunction on f = 0.
    """
    if isinstance(f, RationalFunctionQZ):
        raw = f.raw
    else:
        raw = RationalFunctionQZ(f).raw
    if not raw.numer:
        raise ZeroFunction("order of zero of the zero function is undefined")
    sign, m = c
    if sign not in (1, -1):
        raise ValueError("point sign must be +1 or -1")
    v = RING.gens[_VAR_INDEX[var]]
    # clear the q^m so the linear factor stays a polynomial
    lin = v - sign * _RQ ** m if m >= 0 else _RQ ** (-m) * v - sign
    return _multiplicity(raw.numer, lin) - _multiplicity(raw.denom, lin)


def _multiplicity(p, lin):
    k = 0
    while True:
        quo, rem = p.div(lin)
        if rem:
            return k
        p = quo
        k += 1


def parse_rational(text):
    """Parse a string such as ``"z - q**2"`` or ``"z - q^2"`` in z, w, q."""
    import sympy
    z, w, q = sympy.symbols("z w q")
    expr = sympy.sympify(str(text).replace("^", "**"), locals={"z": z, "w": w, "q": q})
    extra = expr.free_symbols - {z, w, q}
    if extra:
        raise ValueError(f"unexpected symbols {sorted(map(str, extra))}")
    return RationalFunctionQZ.wrap(FIELD.from_expr(expr))
