"""Exact arithmetic in GF(p), GF(q = p^e) and tower fields GF(q^m), m in {3, 4}.

The base field GF(q) is realized as GF(p)[y]/(g) for the deterministic
primitive g found by :func:`find_primitive_poly`; its elements are encoded
as integers sum(a_i * p^i) so the covering-array alphabet 0..q-1 is fixed
bit-exactly.  The tower GF(q^m) is GF(q)[x]/(f) for a primitive f, with the
root x serving as the primitive element; element j of the log table is the
coordinate vector of the j-th power with respect to the basis
{1, x, ..., x^(m-1)}, which makes basis decomposition a table lookup.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

DEFAULT_ORDER_BOUND = 1 << 20


class FieldError(ValueError):
    """Invalid field parameters or a failed primitivity validation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors by trial division (adequate below ~4e11)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, e) with n = p^e, or None."""
    if n < 2:
        return None
    fs = prime_factors(n)
    if len(fs) != 1:
        return None
    p = fs[0]
    e = 0
    while n > 1:
        n //= p
        e += 1
    return p, e


@dataclass(frozen=True)
class PrimePoly:
    """Monic primitive polynomial over GF(p), coefficients low-degree-first."""

    p: int
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self) -> str:
        return poly_str(self.coeffs)


def poly_str(coeffs) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = int(coeffs[k])
        if c == 0:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            xk = "x" if k == 1 else f"x^{k}"
            terms.append(xk if c == 1 else f"{c}{xk}")
    return " + ".join(terms) if terms else "0"


def _x_has_full_order(low_coeffs, order: int, factors, add, mul, neg) -> bool:
    """Does x have multiplicative order ``order`` in F[x]/(f)?

    ``low_coeffs`` are f's coefficients below the (monic) leading term; the
    field ops work on integer-encoded symbols.  Tests x^order == 1 and
    x^(order/r) != 1 for every prime r | order.
    """
    deg = len(low_coeffs)
    if low_coeffs[0] == 0:
        return False  # x divides f
    neg_low = [neg(c) for c in low_coeffs]  # x^deg = sum neg_low[i] x^i

    def mulred(a, b):
        prod = [0] * (2 * deg - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        prod[i + j] = add(prod[i + j], mul(ai, bj))
        for k in range(2 * deg - 2, deg - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for i in range(deg):
                    if neg_low[i]:
                        prod[k - deg + i] = add(prod[k - deg + i], mul(c, neg_low[i]))
        return prod[:deg]

    def powx(exp):
        if deg == 1:
            base = [neg_low[0]]
        else:
            base = [0, 1] + [0] * (deg - 2)
        acc = base
        for bit in bin(exp)[3:]:
            acc = mulred(acc, acc)
            if bit == "1":
                acc = mulred(acc, base)
        return acc

    one = [1] + [0] * (deg - 1)
    if powx(order) != one:
        return False
    return all(powx(order // r) != one for r in factors)


def is_primitive_poly(coeffs, p: int) -> bool:
    """Primitivity of a monic polynomial over GF(p) by the order test."""
    coeffs = [int(c) % p for c in coeffs]
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if coeffs[-1] != 1:
        raise FieldError("polynomial must be monic")
    e = len(coeffs) - 1
    order = p ** e - 1
    return _x_has_full_order(
        coeffs[:-1], order, prime_factors(order),
        lambda a, b: (a + b) % p, lambda a, b: (a * b) % p, lambda a: (-a) % p)


def find_primitive_poly(p: int, e: int, order_bound: int = DEFAULT_ORDER_BOUND) -> PrimePoly:
    """Deterministic smallest primitive polynomial of degree e over GF(p).

    Candidates are enumerated in the companion-matrix form
    f = x^e - (c_{e-1} x^{e-1} + ... + c_0), by the tuple (c_0, ..., c_{e-1})
    in lexicographic order; for e = 1 this yields x - c for the smallest
    primitive root c of p.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if e < 1:
        raise FieldError("degree must be >= 1")
    if p ** e > order_bound:
        raise FieldError(f"p^e = {p ** e} exceeds bound {order_bound}")
    order = p ** e - 1
    factors = prime_factors(order)
    add = lambda a, b: (a + b) % p  # noqa: E731
    mul = lambda a, b: (a * b) % p  # noqa: E731
    neg = lambda a: (-a) % p  # noqa: E731
    for cs in product(range(p), repeat=e):
        low = [(-c) % p for c in cs]
        if _x_has_full_order(low, order, factors, add, mul, neg):
            return PrimePoly(p, tuple(low) + (1,))
    raise FieldError(f"no primitive polynomial of degree {e} over GF({p})")  # pragma: no cover


def _gfq_tables(p: int, e: int, base_low):
    """Addition/multiplication tables for GF(p^e) = GF(p)[y]/(g).

    Symbols encode coefficient vectors: sum(a_i * y^i) <-> sum(a_i * p^i).
    """
    q = p ** e
    if e == 1:
        rng = np.arange(p)
        return (np.add.outer(rng, rng) % p).astype(np.uint8), \
               (np.multiply.outer(rng, rng) % p).astype(np.uint8)

    def dec(s):
        return [(s // p ** i) % p for i in range(e)]

    def enc(t):
        return sum(c * p ** i for i, c in enumerate(t))

    neg_low = [(-c) % p for c in base_low]
    add_t = np.zeros((q, q), np.uint8)
    mul_t = np.zeros((q, q), np.uint8)
    for a in range(q):
        ta = dec(a)
        for b in range(a, q):
            tb = dec(b)
            s = enc([(x + y) % p for x, y in zip(ta, tb)])
            add_t[a, b] = add_t[b, a] = s
            prod = [0] * (2 * e - 1)
            for i, ai in enumerate(ta):
                if ai:
                    for j, bj in enumerate(tb):
                        prod[i + j] = (prod[i + j] + ai * bj) % p
            for k in range(2 * e - 2, e - 1, -1):
                c = prod[k]
                if c:
                    prod[k] = 0
                    for i in range(e):
                        prod[k - e + i] = (prod[k - e + i] + c * neg_low[i]) % p
            m = enc(prod[:e])
            mul_t[a, b] = mul_t[b, a] = m
    return add_t, mul_t


class FieldTower:
    """Immutable arithmetic context for GF(p) < GF(q = p^e) < GF(q^m).

    Shareable across workers once built; construction is single-threaded.
    """

    def __init__(self, p, e, m, base_poly, tower_poly, add_q, mul_q, coords):
        self.p = p
        self.e = e
        self.m = m
        self.q = p ** e
        self.order = self.q ** m
        self.period = self.order - 1
        self.base_poly = base_poly
        self.tower_poly = tuple(int(c) for c in tower_poly)
        self.add_q = add_q
        self.mul_q = mul_q
        q = self.q
        self.neg_q = np.array([int(np.nonzero(add_q[a] == 0)[0][0]) for a in range(q)],
                              np.uint8)
        inv = np.zeros(q, np.uint8)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul_q[a] == 1)[0][0])
        self.inv_q = inv
        self.coords = coords  # (period, m) uint8: coords[j] = L(alpha^j)
        self.encodings = (coords.astype(np.int64)
                          * (q ** np.arange(m, dtype=np.int64))).sum(axis=1)
        log = np.full(self.order, -1, np.int64)
        log[self.encodings] = np.arange(self.period)
        self.log = log
        self.subfield_step = self.period // (q - 1)
        self._trace = None

    # -- construction ---------------------------------------------------

    @classmethod
    def build(cls, p, e, m, tower_poly=None, order_bound=DEFAULT_ORDER_BOUND):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if m not in (3, 4):
            raise FieldError("tower degree m must be 3 or 4")
        q = p ** e
        if q ** m > order_bound:
            raise FieldError(f"q^m = {q ** m} exceeds bound {order_bound}")
        base_poly = find_primitive_poly(p, e, order_bound)
        add_q, mul_q = _gfq_tables(p, e, base_poly.coeffs[:-1])
        neg = [int(np.nonzero(add_q[a] == 0)[0][0]) for a in range(q)]
        period = q ** m - 1
        factors = prime_factors(period)
        add_l, mul_l = add_q.tolist(), mul_q.tolist()
        add = lambda a, b: add_l[a][b]  # noqa: E731
        mul = lambda a, b: mul_l[a][b]  # noqa: E731

        if tower_poly is not None:
            f = [int(c) for c in tower_poly]
            if len(f) != m + 1 or f[-1] != 1:
                raise FieldError(f"tower polynomial must be monic of degree {m}")
            if any(not 0 <= c < q for c in f):
                raise FieldError(f"tower coefficients must be GF({q}) symbols 0..{q - 1}")
            if not _x_has_full_order(f[:-1], period, factors, add, mul,
                                     lambda a: neg[a]):
                raise FieldError(
                    f"override polynomial {poly_str(f)} is not primitive over "
                    f"GF({q}): its root does not have order {period}")
        else:
            f = None
            for cs in product(range(q), repeat=m):
                low = [neg[c] for c in cs]
                if _x_has_full_order(low, period, factors, add, mul,
                                     lambda a: neg[a]):
                    f = low + [1]
                    break
            if f is None:  # pragma: no cover
                raise FieldError(f"no primitive tower polynomial over GF({q})")

        coords = cls._antilog_table(q, m, f, add_q, mul_q, neg)
        return cls(p, e, m, base_poly, f, add_q, mul_q, coords)

    @staticmethod
    def _antilog_table(q, m, f, add_q, mul_q, neg):
        period = q ** m - 1
        add_l = add_q.tolist()
        mul_l = mul_q.tolist()
        neg_low = [neg[c] for c in f[:m]]
        coords = np.zeros((period, m), np.uint8)
        cur = [1] + [0] * (m - 1)
        for i in range(period):
            coords[i] = cur
            top = cur[m - 1]
            nxt = [0] + cur[:m - 1]
            if top:
                mt = mul_l[top]
                for n in range(m):
                    c = neg_low[n]
                    if c:
                        nxt[n] = add_l[nxt[n]][mt[c]]
            cur = nxt
        if cur != [1] + [0] * (m - 1):  # pragma: no cover
            raise FieldError("internal error: root order check failed")
        return coords

    # -- element access --------------------------------------------------

    def zero(self):
        return FieldElement(self, 0)

    def one(self):
        return FieldElement(self, 1)

    def alpha(self):
        return self.from_exp(1)

    def from_exp(self, j: int):
        return FieldElement(self, int(self.encodings[j % self.period]))

    def from_enc(self, enc: int):
        if not 0 <= enc < self.order:
            raise FieldError(f"encoding {enc} out of range")
        return FieldElement(self, int(enc))

    def from_coords(self, cs):
        cs = [int(c) for c in cs]
        if len(cs) != self.m or any(not 0 <= c < self.q for c in cs):
            raise FieldError("bad coordinate vector")
        return FieldElement(self, sum(c * self.q ** n for n, c in enumerate(cs)))

    def decompose(self, j: int) -> np.ndarray:
        """Coordinates (c_0, ..., c_{m-1}) of alpha^j over the power basis."""
        return self.coords[j % self.period].copy()

    # -- field maps -------------------------------------------------------

    def trace_syms(self) -> np.ndarray:
        """GF(q) symbol of the subfield trace of alpha^j, for all j."""
        if self._trace is None:
            j = np.arange(self.period, dtype=np.int64)
            acc = self.coords.copy()
            for n in range(1, self.m):
                acc = self.add_q[acc, self.coords[(j * self.q ** n) % self.period]]
            if (acc[:, 1:] != 0).any():  # pragma: no cover
                raise FieldError("internal error: trace left the subfield")
            self._trace = acc[:, 0].copy()
        return self._trace

    def trace_exp(self, j: int) -> int:
        return int(self.trace_syms()[j % self.period])

    def e_symbol(self) -> int:
        """Symbol of alpha^((q^m-1)/(q-1)), a primitive element of GF(q)."""
        enc = int(self.encodings[self.subfield_step])
        if enc >= self.q:  # pragma: no cover
            raise FieldError("internal error: subfield power not in GF(q)")
        return enc

    def gfq_pow(self, sym: int, n: int) -> int:
        acc = 1
        for _ in range(n):
            acc = int(self.mul_q[acc, sym])
        return acc

    # -- serialization ----------------------------------------------------

    def descriptor(self) -> str:
        """One-line tower descriptor: p e m base_coeffs tower_coeffs."""
        parts = [str(self.p), str(self.e), str(self.m)]
        parts += [str(c) for c in self.base_poly.coeffs]
        parts += [str(c) for c in self.tower_poly]
        return " ".join(parts)

    @classmethod
    def from_descriptor(cls, line: str) -> "FieldTower":
        toks = line.split()
        p, e, m = int(toks[0]), int(toks[1]), int(toks[2])
        base = [int(t) for t in toks[3:3 + e + 1]]
        tower = [int(t) for t in toks[3 + e + 1:3 + e + 1 + m + 1]]
        if len(tower) != m + 1:
            raise FieldError(f"bad tower descriptor: {line!r}")
        t = cls.build(p, e, m, tower_poly=tower)
        if tuple(base) != t.base_poly.coeffs:
            raise FieldError("descriptor base polynomial is not the canonical one")
        return t

    def poly_csv(self) -> str:
        return ",".join(str(c) for c in self.tower_poly)

    def __repr__(self):
        return (f"FieldTower(p={self.p}, e={self.e}, m={self.m}, "
                f"tower_poly={poly_str(self.tower_poly)!r})")


class FieldElement:
    """An element of a FieldTower, canonically encoded as one integer."""

    __slots__ = ("tower", "enc")

    def __init__(self, tower: FieldTower, enc: int):
        self.tower = tower
        self.enc = enc

    @property
    def is_zero(self) -> bool:
        return self.enc == 0

    @property
    def exponent(self):
        """Discrete log in [0, q^m-2], or None for zero."""
        if self.enc == 0:
            return None
        return int(self.tower.log[self.enc])

    @property
    def coords(self) -> tuple[int, ...]:
        t = self.tower
        return tuple((self.enc // t.q ** n) % t.q for n in range(t.m))

    def _wrap(self, enc):
        return FieldElement(self.tower, int(enc))

    def __add__(self, other):
        t = self.tower
        if other.tower is not t:
            raise FieldError("elements of different towers")
        a, b, out, w = self.enc, other.enc, 0, 1
        for _ in range(t.m):
            out += int(t.add_q[a % t.q, b % t.q]) * w
            a //= t.q
            b //= t.q
            w *= t.q
        return self._wrap(out)

    def __neg__(self):
        t = self.tower
        a, out, w = self.enc, 0, 1
        for _ in range(t.m):
            out += int(t.neg_q[a % t.q]) * w
            a //= t.q
            w *= t.q
        return self._wrap(out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        t = self.tower
        if other.tower is not t:
            raise FieldError("elements of different towers")
        if self.enc == 0 or other.enc == 0:
            return self._wrap(0)
        j = (int(t.log[self.enc]) + int(t.log[other.enc])) % t.period
        return self._wrap(t.encodings[j])

    def __truediv__(self, other):
        if other.enc == 0:
            raise ZeroDivisionError("division by the zero field element")
        t = self.tower
        if self.enc == 0:
            return self._wrap(0)
        j = (int(t.log[self.enc]) - int(t.log[other.enc])) % t.period
        return self._wrap(t.encodings[j])

    def __pow__(self, n: int):
        t = self.tower
        if self.enc == 0:
            if n <= 0:
                raise ZeroDivisionError("0 ** nonpositive power")
            return self._wrap(0)
        j = (int(t.log[self.enc]) * n) % t.period
        return self._wrap(t.encodings[j])

    def __eq__(self, other):
        return (isinstance(other, FieldElement) and other.tower is self.tower
                and other.enc == self.enc)

    def __hash__(self):
        return hash((id(self.tower), self.enc))

    def __repr__(self):
        if self.enc == 0:
            return "FieldElement(0)"
        return f"FieldElement(alpha^{self.exponent})"


def build_tower(p: int, e: int, m: int, override_tower_poly=None,
                order_bound: int = DEFAULT_ORDER_BOUND) -> FieldTower:
    """Build the GF(q^m) tower over GF(q = p^e); see FieldTower.build."""
    return FieldTower.build(p, e, m, tower_poly=override_tower_poly,
                            order_bound=order_bound)


@lru_cache(maxsize=32)
def tower_for_q(q: int, m: int) -> FieldTower:
    """The default tower for a prime power q (cached; towers are immutable)."""
    pe = is_prime_power(q)
    if pe is None:
        raise FieldError(f"q = {q} is not a prime power")
    return FieldTower.build(pe[0], pe[1], m)


def trace(a: FieldElement) -> FieldElement:
    """Subfield trace a + a^q + ... + a^(q^(m-1)), as an element of GF(q)."""
    t = a.tower
    if a.enc == 0:
        return t.zero()
    return t.from_enc(t.trace_exp(a.exponent))
