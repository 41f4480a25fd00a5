"""Exact sparse linear algebra.

Vectors are dicts ``{column: value}`` with no stored zeros.  Columns are
integers.  ``SparseEchelon`` keeps a fully reduced row echelon basis so that
reducing a vector against the span takes a single pass.
"""

from fractions import Fraction

from .errors import InexactDivision

MODULUS = (1 << 61) - 1


class SparseEchelon:
    """Incrementally built reduced row echelon basis over Q (or over Z/p when ``modulus`` is set).

    Pivots are the smallest column of each row.  Every stored row is zero in
    every other row's pivot column.
    """

    def __init__(self, modulus=None):
        self.modulus = modulus
        self.rows = {}  # pivot -> row dict
        self._col_rows = {}  # column -> set of pivots whose row touches it

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def pivots(self):
        return sorted(self.rows)

    def _coerce(self, v):
        p = self.modulus
        if p is None:
            return {k: Fraction(c) for k, c in v.items() if c}
        out = {}
        for k, c in v.items():
            c = _mod(c, p)
            if c:
                out[k] = c
        return out

    def reduce(self, v):
        """Remainder of ``v`` modulo the span (zero at every pivot column)."""
        v = self._coerce(v)
        p = self.modulus
        hits = [k for k in v if k in self.rows]
        for piv in hits:
            c = v.get(piv)
            if not c:
                continue
            for k, r in self.rows[piv].items():
                nv = v.get(k, 0) - c * r
                if p is not None:
                    nv %= p
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
        return v

    def contains(self, v):
        return not self.reduce(v)

    def add(self, v):
        """Insert ``v``; returns True when it enlarged the span."""
        v = self.reduce(v)
        if not v:
            return False
        p = self.modulus
        piv = min(v)
        lead = v[piv]
        if p is None:
            if lead != 1:
                inv = 1 / lead
                v = {k: c * inv for k, c in v.items()}
        else:
            inv = pow(lead, p - 2, p)
            v = {k: c * inv % p for k, c in v.items()}
        # clear the new pivot column from older rows
        for other in list(self._col_rows.get(piv, ())):
            row = self.rows[other]
            c = row.get(piv)
            if not c:
                continue
            for k, r in v.items():
                nv = row.get(k, 0) - c * r
                if p is not None:
                    nv %= p
                if nv:
                    if k not in row:
                        self._col_rows.setdefault(k, set()).add(other)
                    row[k] = nv
                else:
                    if k in row:
                        del row[k]
                        self._col_rows[k].discard(other)
        self.rows[piv] = v
        for k in v:
            self._col_rows.setdefault(k, set()).add(piv)
        return True


def _mod(c, p):
    if isinstance(c, Fraction):
        return c.numerator % p * pow(c.denominator % p, p - 2, p) % p
    return int(c) % p


def rank_of_vectors(vectors, modulus=None):
    ech = SparseEchelon(modulus)
    for v in vectors:
        ech.add(v)
    return ech.rank


def field_nullspace(rows, ncols, is_zero=None):
    """Basis of {x : A x = 0} for a dense list-of-lists matrix over any exact field.

    Entries must support + - * / and a zero test; ``is_zero`` defaults to ``not``.
    Returns a list of dense vectors.
    """
    m, pivcols = field_row_echelon(rows, is_zero)
    free = [c for c in range(ncols) if c not in pivcols]
    zero = 0 * rows[0][0] if rows and ncols else 0
    basis = []
    for fcol in free:
        x = [zero] * ncols
        x[fcol] = zero + 1
        for i, pc in enumerate(pivcols):
            x[pc] = -m[i][fcol]
        basis.append(x)
    return basis


def field_rank(rows, is_zero=None):
    """Rank of a dense matrix over an exact field."""
    if not rows:
        return 0
    ncols = len(rows[0])
    return ncols - len(field_nullspace(rows, ncols, is_zero)) if ncols else 0


def field_row_echelon(rows, is_zero=None):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    if is_zero is None:
        def is_zero(a):
            return not a
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivcols = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if not is_zero(m[i][c]):
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [a * inv for a in m[r]]
        for i in range(len(m)):
            if i != r and not is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivcols.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivcols


def bareiss_rank(matrix):
    """Rank over the fraction field of an integral domain by fraction-free elimination.

    Entries need + - * , truthiness, and ``exact_div``.  Works for LaurentPoly.
    """
    m = [list(r) for r in matrix]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    prev = None
    rank = 0
    col = 0
    while rank < nrows and col < ncols:
        pr = next((i for i in range(rank, nrows) if m[i][col]), None)
        if pr is None:
            col += 1
            continue
        m[rank], m[pr] = m[pr], m[rank]
        piv = m[rank][col]
        for i in range(rank + 1, nrows):
            for j in range(col + 1, ncols):
                val = piv * m[i][j] - m[i][col] * m[rank][j]
                if prev is not None:
                    try:
                        val = val.exact_div(prev)
                    except AttributeError:
                        if val % prev:
                            raise InexactDivision("Bareiss step was not exact")
                        val = val // prev
                m[i][j] = val
            m[i][col] = 0 * piv
        prev = piv
        rank += 1
        col += 1
    return rank
