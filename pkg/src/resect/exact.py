"""Exact linear algebra over the rationals and prime fields.

Everything here is exact: rank, kernel, determinant and Schur complements
are computed by fraction-free (Bareiss) elimination over the rationals and
by ordinary Gaussian elimination over a prime field.  No floating point is
involved anywhere, so results can back symbolic claims directly.

Field elements are plain Python values (``int``/``fractions.Fraction`` for
the rationals, canonical ``int`` representatives in ``[0, p)`` for a prime
field); a :class:`Field` object supplies the arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class Field:
    """Common interface for the exact coefficient fields."""

    tag = "?"

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def div(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError

    def to_str(self, a) -> str:
        raise NotImplementedError

    def __repr__(self):
        return self.tag


class RationalField(Field):
    """The field of arbitrary-precision rationals.

    Elements are ``int`` or ``fractions.Fraction``; integers are kept as
    ``int`` whenever possible so that Bareiss elimination stays in fast
    integer arithmetic.
    """

    tag = "QQ"

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in QQ")
        q = Fraction(a) / Fraction(b)
        return int(q) if q.denominator == 1 else q

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return n

    def parse(self, s):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/")
            q = Fraction(int(num), int(den))
            return int(q) if q.denominator == 1 else q
        return int(s)

    def to_str(self, a):
        if isinstance(a, Fraction) and a.denominator != 1:
            return f"{a.numerator}/{a.denominator}"
        return str(int(a))


class PrimeField(Field):
    """The prime field Z/p with canonical representatives in [0, p)."""

    def __init__(self, p: int = 32003):
        if p < 2:
            raise ValueError("p must be a prime >= 2")
        self.p = p
        self.tag = f"Fp:{p}"

    def zero(self):
        return 0

    def one(self):
        return 1 % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def div(self, a, b):
        b %= self.p
        if b == 0:
            raise ZeroDivisionError(f"division by zero in {self.tag}")
        return (a * pow(b, self.p - 2, self.p)) % self.p

    def inv(self, a):
        return self.div(1, a)

    def neg(self, a):
        return (-a) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def from_int(self, n):
        return n % self.p

    def parse(self, s):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/")
            return self.div(int(num) % self.p, int(den) % self.p)
        return int(s) % self.p

    def to_str(self, a):
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))


QQ = RationalField()

DEFAULT_PRIME = 32003


def field_from_tag(tag: str) -> Field:
    """Parse a field tag: ``"QQ"`` or ``"Fp:<p>"`` (also ``"fp:<p>"``, ``"qq"``)."""
    t = tag.strip()
    if t.upper() == "QQ":
        return QQ
    low = t.lower()
    if low.startswith("fp:"):
        return PrimeField(int(low[3:]))
    if low == "fp":
        return PrimeField(DEFAULT_PRIME)
    raise ValueError(f"unknown field tag {tag!r}")


class ExactMatrix:
    """A dense matrix of exact field elements, immutable by convention."""

    __slots__ = ("rows", "cols", "entries", "field")

    def __init__(self, entries, field: Field = QQ):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        if any(len(row) != self.cols for row in self.entries):
            raise ValueError("ragged rows")
        self.field = field

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "ExactMatrix":
        one, zero = field.one(), field.zero()
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> "ExactMatrix":
        zero = field.zero()
        return cls([[zero] * cols for _ in range(rows)], field)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return list(self.entries[i])

    def col(self, j):
        return [self.entries[i][j] for i in range(self.rows)]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.field,
        )

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        F = self.field
        out = []
        for i in range(self.rows):
            arow = self.entries[i]
            orow = []
            for j in range(other.cols):
                s = F.zero()
                for k in range(self.cols):
                    s = F.add(s, F.mul(arow[k], other.entries[k][j]))
                orow.append(s)
            out.append(orow)
        return ExactMatrix(out, F)

    def __matmul__(self, other):
        return self.matmul(other)

    def apply(self, vec):
        """Matrix times column vector (a sequence of field elements)."""
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        F = self.field
        out = []
        for i in range(self.rows):
            s = F.zero()
            row = self.entries[i]
            for k in range(self.cols):
                s = F.add(s, F.mul(row[k], vec[k]))
            out.append(s)
        return out

    def scale(self, c) -> "ExactMatrix":
        F = self.field
        return ExactMatrix([[F.mul(c, x) for x in row] for row in self.entries], F)

    def submatrix(self, row_idx, col_idx) -> "ExactMatrix":
        return ExactMatrix(
            [[self.entries[i][j] for j in col_idx] for i in row_idx], self.field
        )

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.entries == other.entries
            and self.field.tag == other.field.tag
        )

    def __repr__(self):
        body = "; ".join(
            " ".join(self.field.to_str(x) for x in row) for row in self.entries
        )
        return f"ExactMatrix({self.rows}x{self.cols} over {self.field.tag}: [{body}])"


# ---------------------------------------------------------------------------
# Elimination cores


def _clear_row_denominators(row):
    """Scale a QQ row by a positive integer to make all entries int.

    Returns (integer row, multiplier).  Row scaling leaves rank and kernel
    unchanged; determinant bookkeeping is done by the caller.
    """
    denoms = [x.denominator for x in row if isinstance(x, Fraction)]
    if not denoms:
        return [int(x) for x in row], 1
    m = 1
    for d in denoms:
        m = m * d // gcd(m, d)
    return [int(x * m) for x in row], m


def _int_rows(M: ExactMatrix):
    """Integer row-cleared copy of a QQ matrix with per-row multipliers."""
    rows, mults = [], []
    for r in M.entries:
        ir, m = _clear_row_denominators(r)
        rows.append(ir)
        mults.append(m)
    return rows, mults


def _bareiss_echelon(rows, ncols):
    """In-place fraction-free row echelon over the integers.

    Returns (pivot column list, list of pivot row indices in order).  After
    the call ``rows`` is in echelon form up to row scaling; all arithmetic
    is exact integer arithmetic (Bareiss one-step elimination).
    """
    nrows = len(rows)
    piv_cols = []
    r = 0
    prev = 1
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        piv = rows[r][c]
        rr = rows[r]
        for i in range(r + 1, nrows):
            # every row must be rescaled by the pivot, even with a zero
            # multiplier, or later exact divisions break
            ri = rows[i]
            f = ri[c]
            for j in range(c, ncols):
                ri[j] = (piv * ri[j] - f * rr[j]) // prev
        piv_cols.append(c)
        prev = piv
        r += 1
        if r == nrows:
            break
    return piv_cols


def _modp_echelon(rows, ncols, p):
    """In-place row echelon mod p; returns pivot column list."""
    nrows = len(rows)
    piv_cols = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        rr = rows[r]
        for i in range(r + 1, nrows):
            f = rows[i][c] % p
            if f:
                ri = rows[i]
                for j in range(c, ncols):
                    ri[j] = (ri[j] - f * rr[j]) % p
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    return piv_cols


def _echelon(M: ExactMatrix):
    """Echelon form rows + pivot columns, exact, field-appropriate."""
    if isinstance(M.field, PrimeField):
        rows = [list(r) for r in M.entries]
        piv = _modp_echelon(rows, M.cols, M.field.p)
        return rows, piv
    rows, _ = _int_rows(M)
    piv = _bareiss_echelon(rows, M.cols)
    return rows, piv


# ---------------------------------------------------------------------------
# Public operations


def rank(M: ExactMatrix) -> int:
    """Exact rank via fraction-free elimination."""
    _, piv = _echelon(M)
    return len(piv)


def kernel_basis(M: ExactMatrix):
    """Basis of the right kernel of M, as lists of field elements.

    Each basis vector is normalized so its last nonzero coordinate is 1,
    making cross-run comparisons deterministic.  Returns [] iff M has full
    column rank.
    """
    F = M.field
    rows, piv_cols = _echelon(M)
    rank_ = len(piv_cols)
    free_cols = [c for c in range(M.cols) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        v = [F.zero()] * M.cols
        v[fc] = F.one()
        # back-substitute pivot coordinates (echelon rows, bottom-up)
        for r in range(rank_ - 1, -1, -1):
            c = piv_cols[r]
            s = F.zero()
            for j in range(c + 1, M.cols):
                if not F.is_zero(v[j]):
                    s = F.add(s, F.mul(rows[r][j], v[j]))
            v[c] = F.neg(F.div(s, rows[r][c]))
        basis.append(_normalize_last_nonzero(v, F))
    return basis


def _normalize_last_nonzero(v, F: Field):
    last = None
    for i in range(len(v) - 1, -1, -1):
        if not F.is_zero(v[i]):
            last = i
            break
    if last is None:
        return v
    c = v[last]
    return [F.div(x, c) for x in v]


def determinant(M: ExactMatrix):
    """Exact determinant (Bareiss over QQ, Gaussian over a prime field)."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return M.field.one()
    if isinstance(M.field, PrimeField):
        p = M.field.p
        rows = [list(r) for r in M.entries]
        det = 1
        for c in range(n):
            pr = None
            for i in range(c, n):
                if rows[i][c] % p:
                    pr = i
                    break
            if pr is None:
                return 0
            if pr != c:
                rows[c], rows[pr] = rows[pr], rows[c]
                det = -det
            piv = rows[c][c] % p
            det = (det * piv) % p
            inv = pow(piv, p - 2, p)
            for i in range(c + 1, n):
                f = (rows[i][c] * inv) % p
                if f:
                    ri, rc = rows[i], rows[c]
                    for j in range(c, n):
                        ri[j] = (ri[j] - f * rc[j]) % p
        return det % p
    rows, mults = _int_rows(M)
    det = _int_determinant(rows)
    scale = 1
    for m in mults:
        scale *= m
    if scale == 1:
        return det
    q = Fraction(det, scale)
    return int(q) if q.denominator == 1 else q


def _int_determinant(rows):
    """Bareiss determinant of a square integer matrix (destroys rows)."""
    n = len(rows)
    sign = 1
    prev = 1
    for c in range(n - 1):
        pr = None
        for i in range(c, n):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            return 0
        if pr != c:
            rows[c], rows[pr] = rows[pr], rows[c]
            sign = -sign
        piv = rows[c][c]
        for i in range(c + 1, n):
            ri, rc = rows[i], rows[c]
            f = ri[c]
            for j in range(c, n):
                ri[j] = (piv * ri[j] - f * rc[j]) // prev
        prev = piv
    return sign * rows[n - 1][n - 1]


def schur_reduce(M: ExactMatrix, pivot_rows, pivot_cols) -> ExactMatrix:
    """Schur complement of the pivot block M[pivot_rows, pivot_cols].

    The result R satisfies det(M) = det(P) * det(R), where P is the pivot
    block.  When the row and column patterns induce a permutation of odd
    parity (non-principal blocks), the first row of the complement is
    negated to preserve that determinant identity.

    Raises ValueError if the pivot block is singular.
    """
    F = M.field
    pr = list(pivot_rows)
    pc = list(pivot_cols)
    if len(pr) != len(pc):
        raise ValueError("pivot block must be square")
    other_r = [i for i in range(M.rows) if i not in set(pr)]
    other_c = [j for j in range(M.cols) if j not in set(pc)]
    P = M.submatrix(pr, pc)
    if rank(P) < len(pr):
        raise ValueError("singular pivot block")
    B = M.submatrix(pr, other_c)
    C = M.submatrix(other_r, pc)
    D = M.submatrix(other_r, other_c)
    X = _solve_matrix(P, B)  # P X = B
    comp = []
    for i in range(D.rows):
        row = []
        for j in range(D.cols):
            s = D.entries[i][j]
            for k in range(P.rows):
                s = F.sub(s, F.mul(C.entries[i][k], X.entries[k][j]))
            row.append(s)
        comp.append(row)
    sign = _perm_sign(pr + other_r) * _perm_sign(pc + other_c)
    if sign < 0 and comp:
        comp[0] = [F.neg(x) for x in comp[0]]
    return ExactMatrix(comp, F) if comp else ExactMatrix.zeros(0, 0, F)


def _perm_sign(perm):
    seen = [False] * len(perm)
    order = sorted(range(len(perm)), key=lambda i: perm[i])
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = order[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _solve_matrix(P: ExactMatrix, B: ExactMatrix) -> ExactMatrix:
    """Exact solve P X = B for invertible P (field Gaussian elimination)."""
    F = P.field
    n = P.rows
    aug = [list(P.entries[i]) + list(B.entries[i]) for i in range(n)]
    width = n + B.cols
    for c in range(n):
        pr = None
        for i in range(c, n):
            if not F.is_zero(aug[i][c]):
                pr = i
                break
        if pr is None:
            raise ValueError("singular pivot block")
        if pr != c:
            aug[c], aug[pr] = aug[pr], aug[c]
        inv_piv = aug[c][c]
        aug[c] = [F.div(x, inv_piv) for x in aug[c]]
        for i in range(n):
            if i != c and not F.is_zero(aug[i][c]):
                f = aug[i][c]
                aug[i] = [F.sub(aug[i][j], F.mul(f, aug[c][j])) for j in range(width)]
    return ExactMatrix([row[n:] for row in aug], F)


def invert(M: ExactMatrix) -> ExactMatrix:
    """Exact inverse of a square invertible matrix."""
    if M.rows != M.cols:
        raise ValueError("inverse of a non-square matrix")
    return _solve_matrix(M, ExactMatrix.identity(M.rows, M.field))
