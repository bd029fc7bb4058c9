"""Sparse exact multivariate polynomials, monomial orders, and a small
Buchberger engine.

The main consumers are the image-coordinate polynomials p_{ij}[c] attached
to a camera/point grid: a :class:`PolyRing` may carry an *image shape*
``(m, n)`` in which case its first ``3*m*n`` variables are the image
variables, ordered by camera, then point, then coordinate.  Auxiliary
variables (used e.g. for ideal intersections) can be appended after the
image block.

Monomials are dense exponent tuples; polynomials are dictionaries mapping
exponent tuples to nonzero field elements.  All arithmetic is exact.

Groebner computations here are verification-scale: they are guarded by
explicit :class:`Budget` limits, and exceeding a budget is a reported
outcome rather than an exception.
"""

from __future__ import annotations

import heapq
import json
import math
import time
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .exact import Field, QQ


class PolyRing:
    """A polynomial ring with optionally image-shaped variables.

    Parameters
    ----------
    field : Field
        Coefficient field.
    image_shape : (m, n) or None
        If given, the first 3*m*n variables are the image coordinates
        p_{ij}[c] with index ``((i-1)*n + (j-1))*3 + (c-1)`` for 1-based
        (i, j, c).
    aux_names : sequence of str
        Names of extra variables appended after the image block.
    names : sequence of str
        Explicit names for a generic ring (mutually exclusive with
        image_shape).
    """

    def __init__(self, field: Field = QQ, image_shape=None, aux_names=(), names=None):
        self.field = field
        self.image_shape = tuple(image_shape) if image_shape else None
        if names is not None:
            if image_shape is not None:
                raise ValueError("names and image_shape are mutually exclusive")
            self.names = list(names)
            self.n_image = 0
        else:
            m, n = self.image_shape if self.image_shape else (0, 0)
            self.n_image = 3 * m * n
            self.names = [
                f"p{i}_{j}[{c}]" if m > 1 else f"p{j}[{c}]"
                for i in range(1, m + 1)
                for j in range(1, n + 1)
                for c in (1, 2, 3)
            ]
        self.aux_names = list(aux_names)
        self.names += self.aux_names
        self.nvars = len(self.names)

    def var_index(self, i: int, j: int, c: int) -> int:
        """Index of the image variable p_{ij}[c]; i, j, c are 1-based."""
        if not self.image_shape:
            raise ValueError("ring has no image variables")
        m, n = self.image_shape
        if not (1 <= i <= m and 1 <= j <= n and 1 <= c <= 3):
            raise ValueError(f"image variable ({i},{j},{c}) out of range for shape {self.image_shape}")
        return ((i - 1) * n + (j - 1)) * 3 + (c - 1)

    def image_var(self, v: int):
        """Inverse of var_index: (i, j, c), 1-based."""
        if v >= self.n_image:
            raise ValueError("not an image variable")
        m, n = self.image_shape
        c = v % 3 + 1
        j = (v // 3) % n + 1
        i = v // (3 * n) + 1
        return i, j, c

    def aux_index(self, name: str) -> int:
        return self.n_image + self.aux_names.index(name)

    def with_aux(self, *names: str) -> "PolyRing":
        """A new ring with extra auxiliary variables appended."""
        if self.image_shape:
            return PolyRing(self.field, self.image_shape,
                            aux_names=list(self.aux_names) + list(names))
        return PolyRing(self.field, names=list(self.names) + list(names))

    def zero_exps(self):
        return (0,) * self.nvars

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.field.tag == other.field.tag
            and self.names == other.names
            and self.image_shape == other.image_shape
        )

    def __repr__(self):
        if self.image_shape:
            extra = f"+{len(self.aux_names)} aux" if self.aux_names else ""
            return f"PolyRing({self.field.tag}, image {self.image_shape}{extra})"
        return f"PolyRing({self.field.tag}, vars {self.names})"


def image_ring(m: int, n: int, field: Field = QQ) -> PolyRing:
    return PolyRing(field, image_shape=(m, n))


def generic_ring(names, field: Field = QQ) -> PolyRing:
    return PolyRing(field, names=names)


class Monomial:
    """An exponent vector in a fixed ring; zero exponents are not surfaced."""

    __slots__ = ("ring", "exps")

    def __init__(self, ring: PolyRing, exps: Sequence[int]):
        self.ring = ring
        self.exps = tuple(exps)

    @property
    def exponents(self) -> dict:
        return {v: e for v, e in enumerate(self.exps) if e}

    def image_exponents(self) -> dict:
        """{(i, j, c): e} over image variables, 1-based indices."""
        return {self.ring.image_var(v): e for v, e in self.exponents.items()
                if v < self.ring.n_image}

    def degree(self) -> int:
        return sum(self.exps)

    def is_squarefree(self) -> bool:
        return all(e <= 1 for e in self.exps)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __str__(self):
        if not any(self.exps):
            return "1"
        parts = []
        for v, e in enumerate(self.exps):
            if e:
                parts.append(self.ring.names[v] + (f"^{e}" if e > 1 else ""))
        return "*".join(parts)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Monomial orders


class MonomialOrder:
    """Total monomial order given by a sort key on exponent tuples."""

    name = "order"

    def key(self, exps):
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return self.name


class LexOrder(MonomialOrder):
    """Lexicographic order; ranking[0] is the highest variable index."""

    name = "lex"

    def __init__(self, ranking: Sequence[int]):
        self.ranking = tuple(ranking)

    def key(self, exps):
        return tuple(exps[v] for v in self.ranking)

    def describe(self):
        return {"kind": "lex", "ranking": list(self.ranking)}


class GrevLexOrder(MonomialOrder):
    """Graded reverse lexicographic order on the ranked variables."""

    name = "grevlex"

    def __init__(self, ranking: Sequence[int]):
        self.ranking = tuple(ranking)
        self._rev = tuple(reversed(self.ranking))

    def key(self, exps):
        return (sum(exps[v] for v in self.ranking),) + tuple(-exps[v] for v in self._rev)

    def describe(self):
        return {"kind": "grevlex", "ranking": list(self.ranking)}


class ProductOrder(MonomialOrder):
    """Compare by an outer order first, break ties with an inner order.

    The outer and inner orders read disjoint variable blocks.  For
    polynomials supported entirely on the outer block the inner order is
    vacuous.
    """

    name = "product"

    def __init__(self, outer: MonomialOrder, inner: MonomialOrder):
        self.outer = outer
        self.inner = inner

    def key(self, exps):
        return self.outer.key(exps) + self.inner.key(exps)

    def describe(self):
        return {"kind": "product", "outer": self.outer.describe(),
                "inner": self.inner.describe()}


def lex_order(ring: PolyRing) -> LexOrder:
    """The pinned lexicographic order: the first ring variable is highest.

    On an image ring this ranks p_{11}[1] > p_{11}[2] > p_{11}[3] >
    p_{12}[1] > ... with the last image variable lowest; auxiliary
    variables come below all image variables.
    """
    return LexOrder(tuple(range(ring.nvars)))


def grevlex_order(ring: PolyRing) -> GrevLexOrder:
    return GrevLexOrder(tuple(range(ring.nvars)))


def elimination_order(ring: PolyRing, elim_vars: Sequence[int],
                      inner: Optional[MonomialOrder] = None) -> ProductOrder:
    """An order eliminating elim_vars: any monomial containing one of them
    dominates any monomial in the remaining variables."""
    elim = tuple(elim_vars)
    rest = tuple(v for v in range(ring.nvars) if v not in set(elim))
    if inner is None:
        inner = GrevLexOrder(rest)
    return ProductOrder(GrevLexOrder(elim), inner)


def order_from_descriptor(ring: PolyRing, desc) -> MonomialOrder:
    """Rebuild an order from its describe() dict or a plain name."""
    if isinstance(desc, str):
        if desc == "lex":
            return lex_order(ring)
        if desc == "grevlex":
            return grevlex_order(ring)
        raise ValueError(f"unknown order name {desc!r}")
    kind = desc["kind"]
    if kind == "lex":
        return LexOrder(desc["ranking"])
    if kind == "grevlex":
        return GrevLexOrder(desc["ranking"])
    if kind == "product":
        return ProductOrder(order_from_descriptor(ring, desc["outer"]),
                            order_from_descriptor(ring, desc["inner"]))
    raise ValueError(f"unknown order kind {kind!r}")


# ---------------------------------------------------------------------------
# Polynomials


class MultiPoly:
    """Sparse polynomial: dict of exponent tuple -> nonzero coefficient."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Optional[dict] = None):
        self.ring = ring
        self.terms = terms if terms is not None else {}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ring: PolyRing) -> "MultiPoly":
        return cls(ring, {})

    @classmethod
    def constant(cls, ring: PolyRing, c) -> "MultiPoly":
        if ring.field.is_zero(c):
            return cls.zero(ring)
        return cls(ring, {ring.zero_exps(): c})

    @classmethod
    def variable(cls, ring: PolyRing, v: int, exp: int = 1) -> "MultiPoly":
        exps = [0] * ring.nvars
        exps[v] = exp
        return cls(ring, {tuple(exps): ring.field.one()})

    @classmethod
    def image_variable(cls, ring: PolyRing, i: int, j: int, c: int) -> "MultiPoly":
        return cls.variable(ring, ring.var_index(i, j, c))

    @classmethod
    def from_terms(cls, ring: PolyRing, pairs: Iterable) -> "MultiPoly":
        F = ring.field
        terms = {}
        for exps, coeff in pairs:
            exps = tuple(exps)
            cur = terms.get(exps)
            coeff = F.add(cur, coeff) if cur is not None else coeff
            if F.is_zero(coeff):
                terms.pop(exps, None)
            else:
                terms[exps] = coeff
        return cls(ring, terms)

    # -- basic info --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def num_terms(self) -> int:
        return len(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            raise ValueError("degree of the zero polynomial")
        return max(sum(e) for e in self.terms)

    def monomials(self):
        return [Monomial(self.ring, e) for e in self.terms]

    def coeff(self, exps):
        return self.terms.get(tuple(exps), self.ring.field.zero())

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.constant(self.ring, self.ring.field.from_int(other)
                                  if isinstance(other, int) else other)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        F = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            cur = out.get(e)
            s = F.add(cur, c) if cur is not None else c
            if F.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return MultiPoly(self.ring, out)

    def __sub__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        F = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            cur = out.get(e)
            s = F.sub(cur, c) if cur is not None else F.neg(c)
            if F.is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return MultiPoly(self.ring, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self) -> "MultiPoly":
        F = self.ring.field
        return MultiPoly(self.ring, {e: F.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        F = self.ring.field
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = F.mul(c1, c2)
                cur = out.get(e)
                s = F.add(cur, c) if cur is not None else c
                if F.is_zero(s):
                    out.pop(e, None)
                else:
                    out[e] = s
        return MultiPoly(self.ring, out)

    def scale(self, c) -> "MultiPoly":
        F = self.ring.field
        if F.is_zero(c):
            return MultiPoly.zero(self.ring)
        return MultiPoly(self.ring, {e: F.mul(c, v) for e, v in self.terms.items()})

    def mul_term(self, exps, coeff) -> "MultiPoly":
        """Multiply by a single term coeff * x^exps."""
        F = self.ring.field
        if F.is_zero(coeff):
            return MultiPoly.zero(self.ring)
        exps = tuple(exps)
        return MultiPoly(
            self.ring,
            {tuple(a + b for a, b in zip(e, exps)): F.mul(coeff, c)
             for e, c in self.terms.items()},
        )

    def derivative(self, v: int) -> "MultiPoly":
        F = self.ring.field
        out = {}
        for e, c in self.terms.items():
            if e[v]:
                ne = list(e)
                ne[v] -= 1
                nc = F.mul(c, F.from_int(e[v]))
                if not F.is_zero(nc):
                    out[tuple(ne)] = nc
        return MultiPoly(self.ring, out)

    # -- evaluation and substitution ----------------------------------------

    def evaluate(self, values: Sequence):
        """Exact evaluation at a full point (one value per ring variable)."""
        F = self.ring.field
        total = F.zero()
        for e, c in self.terms.items():
            v = c
            for idx, exp in enumerate(e):
                if exp:
                    x = values[idx]
                    for _ in range(exp):
                        v = F.mul(v, x)
            total = F.add(total, v)
        return total

    def substitute(self, assignment: dict) -> "MultiPoly":
        """Partial evaluation: assignment maps variable index -> value."""
        F = self.ring.field
        out = {}
        for e, c in self.terms.items():
            coeff = c
            ne = list(e)
            for v, val in assignment.items():
                if e[v]:
                    for _ in range(e[v]):
                        coeff = F.mul(coeff, val)
                    ne[v] = 0
            if F.is_zero(coeff):
                continue
            ne = tuple(ne)
            cur = out.get(ne)
            s = F.add(cur, coeff) if cur is not None else coeff
            if F.is_zero(s):
                out.pop(ne, None)
            else:
                out[ne] = s
        return MultiPoly(self.ring, out)

    def map_vars(self, new_ring: PolyRing, var_map: dict) -> "MultiPoly":
        """Move to another ring; var_map sends old indices to new ones.

        Variables not in var_map must not occur in the polynomial.
        """
        out = {}
        F = new_ring.field
        for e, c in self.terms.items():
            ne = [0] * new_ring.nvars
            for v, exp in enumerate(e):
                if exp:
                    if v not in var_map:
                        raise ValueError(f"variable {self.ring.names[v]} has no image")
                    ne[var_map[v]] = exp
            ne = tuple(ne)
            cur = out.get(ne)
            s = F.add(cur, c) if cur is not None else c
            if F.is_zero(s):
                out.pop(ne, None)
            else:
                out[ne] = s
        return MultiPoly(new_ring, out)

    # -- order-dependent views ----------------------------------------------

    def leading_exps(self, order: MonomialOrder):
        if not self.terms:
            raise ValueError("leading monomial of the zero polynomial")
        return max(self.terms, key=order.key)

    def leading_coeff(self, order: MonomialOrder):
        return self.terms[self.leading_exps(order)]

    def monic(self, order: MonomialOrder) -> "MultiPoly":
        lc = self.leading_coeff(order)
        F = self.ring.field
        return MultiPoly(self.ring, {e: F.div(c, lc) for e, c in self.terms.items()})

    def sorted_terms(self, order: MonomialOrder):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- grading -------------------------------------------------------------

    def multidegree(self):
        """Per-image-block degree vector in Z^(mn) (camera-major order).

        Raises ValueError if the polynomial is zero, not multihomogeneous,
        or involves auxiliary variables.
        """
        if not self.ring.image_shape:
            raise ValueError("ring has no image grading")
        if not self.terms:
            raise ValueError("multidegree of the zero polynomial")
        m, n = self.ring.image_shape
        nblocks = m * n
        common = None
        for e in self.terms:
            if any(e[self.ring.n_image:]):
                raise ValueError("auxiliary variables are not graded")
            deg = [0] * nblocks
            for v, exp in enumerate(e[: self.ring.n_image]):
                if exp:
                    deg[v // 3] += exp
            if common is None:
                common = deg
            elif deg != common:
                raise ValueError("polynomial is not multihomogeneous")
        return tuple(common)

    def is_multihomogeneous(self) -> bool:
        try:
            self.multidegree()
            return True
        except ValueError:
            return not self.terms and bool(self.ring.image_shape)

    # -- serialization --------------------------------------------------------

    def to_json_dict(self) -> dict:
        """JSON form with image-variable exponents as [i, j, c, e] tuples."""
        F = self.ring.field
        terms = []
        for e, c in sorted(self.terms.items()):
            exps = []
            for v, exp in enumerate(e):
                if exp:
                    if v < self.ring.n_image:
                        i, j, cc = self.ring.image_var(v)
                        exps.append([i, j, cc, exp])
                    else:
                        # auxiliary variable: camera index 0 flags it
                        exps.append([0, 0, v - self.ring.n_image + 1, exp])
            terms.append({"exponents": exps, "coeff": F.to_str(c)})
        return {"terms": terms}

    @classmethod
    def from_json_dict(cls, ring: PolyRing, data: dict) -> "MultiPoly":
        F = ring.field
        pairs = []
        for t in data["terms"]:
            exps = [0] * ring.nvars
            for i, j, c, e in t["exponents"]:
                if i == 0:
                    exps[ring.n_image + c - 1] = e
                else:
                    exps[ring.var_index(i, j, c)] = e
            pairs.append((tuple(exps), F.parse(t["coeff"])))
        return cls.from_terms(ring, pairs)

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.ring.field
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = str(Monomial(self.ring, e))
            cs = F.to_str(c)
            parts.append(cs if mono == "1" else f"{cs}*{mono}")
        return " + ".join(parts)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Spec-facing helpers


def leading_monomial(f: MultiPoly, order: MonomialOrder) -> Monomial:
    """The order-largest monomial of a nonzero polynomial."""
    return Monomial(f.ring, f.leading_exps(order))


def multidegree(f: MultiPoly):
    return f.multidegree()


# ---------------------------------------------------------------------------
# Division, S-polynomials, Buchberger


def _divides(e_div, e_mono) -> bool:
    for a, b in zip(e_div, e_mono):
        if a > b:
            return False
    return True


def _support_mask(exps) -> int:
    m = 0
    for v, e in enumerate(exps):
        if e:
            m |= 1 << v
    return m


class _Divisors:
    """Preprocessed divisor set for fast normal-form computation."""

    def __init__(self, G: Sequence[MultiPoly], order: MonomialOrder):
        self.order = order
        self.items = []
        for g in G:
            if g.is_zero():
                continue
            lm = g.leading_exps(order)
            lc = g.terms[lm]
            self.items.append((lm, _support_mask(lm), lc, g))

    def find(self, exps, mask):
        for lm, lmask, lc, g in self.items:
            if lmask & mask == lmask and _divides(lm, exps):
                return lm, lc, g
        return None


def reduce(f: MultiPoly, G: Sequence[MultiPoly], order: MonomialOrder,
           max_terms: Optional[int] = None) -> MultiPoly:
    """Normal form of f modulo G: no term of the result is divisible by a
    leading monomial of G.  Exceeding max_terms raises BudgetExhausted."""
    q, r = _divmod_full(f, _Divisors(G, order), order, max_terms, want_quotients=False)
    return r


class BudgetExhausted(Exception):
    """Internal signal: a polynomial operation exceeded its budget."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def _divmod_full(f, divisors: _Divisors, order, max_terms, want_quotients):
    """Heap-based multivariate division.  Returns (quotients|None, remainder)."""
    F = f.ring.field
    key = order.key
    work = dict(f.terms)
    heap = [tuple(-k for k in key(e)) for e in work]
    heapq.heapify(heap)
    keymap = {tuple(-k for k in key(e)): e for e in work}
    remainder = {}
    quotients = [dict() for _ in divisors.items] if want_quotients else None
    qindex = {id(g): i for i, (_, _, _, g) in enumerate(divisors.items)} if want_quotients else None

    while heap:
        nk = heapq.heappop(heap)
        exps = keymap.get(nk)
        if exps is None:
            continue
        coeff = work.get(exps)
        if coeff is None or F.is_zero(coeff):
            continue
        hit = divisors.find(exps, _support_mask(exps))
        if hit is None:
            remainder[exps] = coeff
            del work[exps]
            continue
        lm, lc, g = hit
        shift = tuple(a - b for a, b in zip(exps, lm))
        factor = F.div(coeff, lc)
        if want_quotients:
            qd = quotients[qindex[id(g)]]
            cur = qd.get(shift)
            s = F.add(cur, factor) if cur is not None else factor
            if F.is_zero(s):
                qd.pop(shift, None)
            else:
                qd[shift] = s
        for ge, gc in g.terms.items():
            e = tuple(a + b for a, b in zip(ge, shift))
            delta = F.mul(factor, gc)
            cur = work.get(e)
            if cur is None:
                nv = F.neg(delta)
                if not F.is_zero(nv):
                    work[e] = nv
                    k = tuple(-k for k in key(e))
                    if k not in keymap:
                        keymap[k] = e
                        heapq.heappush(heap, k)
            else:
                nv = F.sub(cur, delta)
                if F.is_zero(nv):
                    del work[e]
                else:
                    work[e] = nv
        if max_terms is not None and len(work) + len(remainder) > max_terms:
            raise BudgetExhausted(f"intermediate polynomial exceeded {max_terms} terms")

    rem = MultiPoly(f.ring, remainder)
    if not want_quotients:
        return None, rem
    qpolys = [MultiPoly(f.ring, qd) for qd in quotients]
    return qpolys, rem


def exact_divide(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    """f / g when the division is exact; raises ValueError otherwise."""
    qs, r = _divmod_full(f, _Divisors([g], order), order, None, want_quotients=True)
    if not r.is_zero():
        raise ValueError("division is not exact")
    return qs[0]


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    """The standard S-polynomial of two nonzero polynomials."""
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of the zero polynomial")
    F = f.ring.field
    lf = f.leading_exps(order)
    lg = g.leading_exps(order)
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    mf = tuple(a - b for a, b in zip(lcm, lf))
    mg = tuple(a - b for a, b in zip(lcm, lg))
    return f.mul_term(mf, F.div(F.one(), f.terms[lf])) - g.mul_term(
        mg, F.div(F.one(), g.terms[lg])
    )


@dataclass
class Budget:
    """Resource caps for Groebner-scale computations."""

    max_pairs: int = 20000
    max_terms: int = 200000
    max_basis: int = 2000
    wall_seconds: Optional[float] = None

    def clock(self):
        return time.monotonic()


@dataclass
class GBResult:
    basis: list
    completed: bool
    pairs_processed: int = 0
    basis_size: int = 0
    reason: str = ""
    elapsed: float = 0.0

    @property
    def status(self) -> str:
        return "ok" if self.completed else "budget_exceeded"


def buchberger(G0: Sequence[MultiPoly], order: MonomialOrder,
               budget: Optional[Budget] = None) -> GBResult:
    """Budgeted Buchberger algorithm with the Gebauer-Moeller pair criteria.

    Returns a GBResult whose basis is the reduced Groebner basis when
    completed; on budget exhaustion the partial basis is returned with
    completed=False.
    """
    budget = budget or Budget()
    t0 = time.monotonic()
    basis = []
    for g in G0:
        if not g.is_zero():
            basis.append(g.monic(order))
    if not basis:
        return GBResult([], True, 0, 0, "trivial", 0.0)

    lms = [g.leading_exps(order) for g in basis]
    pairs = set()
    for i in range(len(basis)):
        _gm_update(pairs, lms, i)

    key = order.key

    def lcm_of(i, j):
        return tuple(max(a, b) for a, b in zip(lms[i], lms[j]))

    pair_heap = [(sum(lcm_of(i, j)), key(lcm_of(i, j)), i, j) for (i, j) in pairs]
    heapq.heapify(pair_heap)
    processed = 0

    while pairs:
        if processed >= budget.max_pairs:
            return GBResult(basis, False, processed, len(basis),
                            f"pair budget {budget.max_pairs} exhausted",
                            time.monotonic() - t0)
        if budget.wall_seconds is not None and time.monotonic() - t0 > budget.wall_seconds:
            return GBResult(basis, False, processed, len(basis),
                            "wall-clock budget exhausted", time.monotonic() - t0)
        while pair_heap:
            _, _, i, j = heapq.heappop(pair_heap)
            if (i, j) in pairs:
                break
        else:
            break
        pairs.discard((i, j))
        processed += 1
        # coprime leading monomials: S-pair reduces to zero (criterion 1)
        if all(a == 0 or b == 0 for a, b in zip(lms[i], lms[j])):
            continue
        sp = s_polynomial(basis[i], basis[j], order)
        if sp.is_zero():
            continue
        try:
            _, nf = _divmod_full(sp, _Divisors(basis, order), order,
                                 budget.max_terms, want_quotients=False)
        except BudgetExhausted as exc:
            return GBResult(basis, False, processed, len(basis), exc.reason,
                            time.monotonic() - t0)
        if nf.is_zero():
            continue
        basis.append(nf.monic(order))
        lms.append(basis[-1].leading_exps(order))
        if len(basis) > budget.max_basis:
            return GBResult(basis, False, processed, len(basis),
                            f"basis budget {budget.max_basis} exhausted",
                            time.monotonic() - t0)
        before = set(pairs)
        _gm_update(pairs, lms, len(basis) - 1)
        for (i, j) in pairs - before:
            heapq.heappush(pair_heap, (sum(lcm_of(i, j)), key(lcm_of(i, j)), i, j))

    basis = _interreduce(basis, order)
    return GBResult(basis, True, processed, len(basis), "", time.monotonic() - t0)


def _gm_update(pairs, lms, t):
    """Gebauer-Moeller update of the pair set with the new index t."""
    def lcm(a, b):
        return tuple(max(x, y) for x, y in zip(a, b))

    new = []
    for i in range(t):
        new.append((i, t))
    # criterion M: drop (i,t) if lcm(i,t) strictly contains lcm(j,t)
    keep = []
    for i, _ in new:
        l_it = lcm(lms[i], lms[t])
        dominated = False
        for j, _ in new:
            if j == i:
                continue
            l_jt = lcm(lms[j], lms[t])
            if l_jt != l_it and _divides(l_jt, l_it):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    # criterion F: among equal lcms keep one representative
    seen = {}
    kept = []
    for i in keep:
        l_it = lcm(lms[i], lms[t])
        if l_it in seen:
            continue
        seen[l_it] = i
        kept.append(i)
    # criterion B on old pairs
    drop = set()
    for (i, j) in pairs:
        l_ij = lcm(lms[i], lms[j])
        if (_divides(lms[t], l_ij)
                and lcm(lms[i], lms[t]) != l_ij
                and lcm(lms[j], lms[t]) != l_ij):
            drop.add((i, j))
    pairs.difference_update(drop)
    for i in kept:
        pairs.add((i, t))


def _interreduce(basis, order):
    """Minimal reduced Groebner basis: prune redundant leading monomials,
    then tail-reduce every element against the others."""
    items = sorted(((g.leading_exps(order), g) for g in basis),
                   key=lambda t: (sum(t[0]), order.key(t[0])))
    kept, kept_lms = [], []
    for lm, g in items:
        if any(_divides(l2, lm) for l2 in kept_lms):
            continue
        kept.append(g)
        kept_lms.append(lm)
    out = []
    for i, g in enumerate(kept):
        others = [h for j, h in enumerate(kept) if j != i]
        _, nf = _divmod_full(g, _Divisors(others, order), order, None,
                             want_quotients=False)
        out.append(nf.monic(order))
    return out


def standard_monomial_count(GB: Sequence[MultiPoly], order: MonomialOrder):
    """Number of monomials outside the initial ideal of a Groebner basis.

    Returns math.inf when the ideal is not zero-dimensional.  The unit
    ideal has count 0.
    """
    gens = [g for g in GB if not g.is_zero()]
    if not gens:
        return math.inf
    ring = gens[0].ring
    lms = [g.leading_exps(order) for g in gens]
    if any(not any(lm) for lm in lms):
        return 0  # unit ideal
    nv = ring.nvars
    bounds = [None] * nv
    for lm in lms:
        support = [v for v in range(nv) if lm[v]]
        if len(support) == 1:
            v = support[0]
            if bounds[v] is None or lm[v] < bounds[v]:
                bounds[v] = lm[v]
    if any(b is None for b in bounds):
        return math.inf
    count = 0
    exps = [0] * nv

    def rec(v):
        nonlocal count
        if v == nv:
            count += 1
            return
        for e in range(bounds[v]):
            exps[v] = e
            if not any(_divides(lm, exps) for lm in lms):
                rec(v + 1)
        exps[v] = 0

    rec(0)
    return count


@dataclass
class QuotientResult:
    generators: list
    completed: bool
    reason: str = ""

    @property
    def status(self) -> str:
        return "ok" if self.completed else "budget_exceeded"


def _eliminate_aux(gb_result: GBResult, ring: PolyRing, aux_var: int,
                   back_map: dict):
    """Keep elimination-ideal elements (no aux variable), map back to ring."""
    kept = []
    for g in gb_result.basis:
        if all(e[aux_var] == 0 for e in g.terms):
            kept.append(g.map_vars(ring, back_map))
    return kept


def ideal_intersection(A: Sequence[MultiPoly], B: Sequence[MultiPoly],
                       order: MonomialOrder,
                       budget: Optional[Budget] = None) -> QuotientResult:
    """Generators of <A> intersect <B> via the t-trick elimination."""
    if not A or not B:
        return QuotientResult([], True)
    ring = A[0].ring
    ext = ring.with_aux(f"_t{ring.nvars}")
    t_idx = ext.nvars - 1
    fwd = {v: v for v in range(ring.nvars)}
    back = {v: v for v in range(ring.nvars)}
    t = MultiPoly.variable(ext, t_idx)
    one = MultiPoly.constant(ext, ext.field.one())
    gens = [t * f.map_vars(ext, fwd) for f in A]
    gens += [(one - t) * g.map_vars(ext, fwd) for g in B]
    elim = elimination_order(ext, [t_idx], inner=_lift_order(order, ring, ext))
    res = buchberger(gens, elim, budget)
    kept = _eliminate_aux(res, ring, t_idx, back)
    return QuotientResult(kept, res.completed, res.reason)


def _lift_order(order: MonomialOrder, ring: PolyRing, ext: PolyRing) -> MonomialOrder:
    """Reuse an order of `ring` inside the extended ring (same var indices)."""
    return order


def ideal_quotient(I: Sequence[MultiPoly], g: MultiPoly, order: MonomialOrder,
                   budget: Optional[Budget] = None) -> QuotientResult:
    """Generators of the ideal quotient <I> : <g>.

    Uses the elimination construction: (I intersect <g>) scaled by 1/g.
    """
    if g.is_zero():
        raise ValueError("quotient by the zero polynomial")
    inter = ideal_intersection(I, [g], order, budget)
    if not inter.completed:
        return QuotientResult([], False, inter.reason)
    gens = []
    for f in inter.generators:
        gens.append(exact_divide(f, g, order))
    res = buchberger(gens, order, budget) if gens else GBResult([], True)
    if not res.completed:
        return QuotientResult(gens, False, res.reason)
    return QuotientResult(res.basis, True)


def ideal_quotient_by_ideal(I: Sequence[MultiPoly], gs: Sequence[MultiPoly],
                            order: MonomialOrder,
                            budget: Optional[Budget] = None) -> QuotientResult:
    """<I> : <g_1, ..., g_k> as the intersection of single quotients."""
    gs = [g for g in gs if not g.is_zero()]
    if not gs:
        raise ValueError("quotient by the zero ideal")
    acc = None
    for g in gs:
        q = ideal_quotient(I, g, order, budget)
        if not q.completed:
            return q
        if acc is None:
            acc = q.generators
        else:
            inter = ideal_intersection(acc, q.generators, order, budget)
            if not inter.completed:
                return inter
            acc = inter.generators
    res = buchberger(acc, order, budget)
    if not res.completed:
        return QuotientResult(acc, False, res.reason)
    return QuotientResult(res.basis, True)


def poly_to_json(f: MultiPoly) -> str:
    return json.dumps(f.to_json_dict(), sort_keys=True)


def poly_from_json(ring: PolyRing, s: str) -> MultiPoly:
    return MultiPoly.from_json_dict(ring, json.loads(s))
