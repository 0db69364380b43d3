"""Exact arithmetic in GF(p^e) and in towers GF(q) < GF(q^t).

Elements are encoded as integers ``0 <= code < p**e`` whose base-``p``
digits (least significant first) are the coefficients of the polynomial
representative modulo the field's modulus.  Fields of order at most
``2**16`` carry discrete-log tables; larger fields fall back to polynomial
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import sympy

TABLE_LIMIT = 1 << 16
ADD_TABLE_LIMIT = 1 << 12
SMALL_TABLE_LIMIT = 1 << 10


class FieldError(ValueError):
    """Raised for invalid field parameters or undefined operations."""


def is_prime(n: int) -> bool:
    return n >= 2 and bool(sympy.isprime(n))


# -- polynomials over GF(p), coefficient lists in ascending degree ----------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    f = [c % p for c in f]
    _trim(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    while len(f) - 1 >= dg and f:
        c = f[-1] * inv_lead % p
        shift = len(f) - 1 - dg
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gc) % p
        _trim(f)
    return f


def _pmulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod(out, m, p)


def _ppowmod(a: Sequence[int], n: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, m, p)
    while n:
        if n & 1:
            result = _pmulmod(result, base, m, p)
        n >>= 1
        if n:
            base = _pmulmod(base, base, m, p)
    return result


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def irreducibility_witness(coeffs: Sequence[int], p: int) -> list[int] | None:
    """Return ``None`` if the monic ``coeffs`` is irreducible over GF(p),
    otherwise a nontrivial factor (or root polynomial ``x - r``)."""
    f = _trim([c % p for c in coeffs])
    e = len(f) - 1
    if e < 1:
        raise FieldError("polynomial must have positive degree")
    if e == 1:
        return None
    for r in range(p):
        if sum(c * pow(r, i, p) for i, c in enumerate(f)) % p == 0:
            return [(-r) % p, 1]
    x = [0, 1]
    # Rabin: x^(p^e) = x mod f and gcd(x^(p^(e/r)) - x, f) = 1 for primes r | e
    for r in sympy.primefactors(e):
        h = _ppowmod(x, p ** (e // r), f, p)
        d = _pgcd(_psub(h, x, p), f, p)
        if len(d) > 1:
            return d
    if _psub(_ppowmod(x, p ** e, f, p), x, p):
        return f  # not square-free splitting; no explicit factor found cheaply
    return None


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    return irreducibility_witness(coeffs, p) is None


def _x_is_primitive(f: Sequence[int], p: int) -> bool:
    e = len(f) - 1
    n = p ** e - 1
    if n == 1:
        return True
    for r in sympy.primefactors(n):
        if _ppowmod([0, 1], n // r, f, p) == [1]:
            return False
    return True


def least_primitive_polynomial(p: int, e: int) -> tuple[int, ...]:
    """Monic primitive polynomial of degree ``e`` over GF(p) whose lower
    coefficients, read as the integer ``sum c_i p**i``, are smallest."""
    for enc in range(1, p ** e):
        low = [(enc // p ** i) % p for i in range(e)]
        if low[0] == 0:
            continue
        f = low + [1]
        if is_irreducible(f, p) and _x_is_primitive(f, p):
            return tuple(f)
    raise FieldError(f"no primitive polynomial of degree {e} over GF({p})")


# -- fields ------------------------------------------------------------------

class FiniteField:
    """GF(p^e) with integer-coded elements."""

    def __init__(self, p: int, e: int, modulus: Sequence[int]):
        self.p = p
        self.e = e
        self.order = p ** e
        self.modulus = tuple(int(c) % p for c in modulus)
        self.generator_flag = _x_is_primitive(self.modulus, p)
        self._pw = [p ** i for i in range(e)]
        self._tables = self.order <= TABLE_LIMIT
        if self._tables:
            self._build_tables()

    # construction helpers
    def _poly(self, code: int) -> list[int]:
        return _trim([(code // w) % self.p for w in self._pw])

    def _code(self, poly: Sequence[int]) -> int:
        return sum((c % self.p) * self._pw[i] for i, c in enumerate(poly) if i < self.e)

    def _slow_mul(self, a: int, b: int) -> int:
        return self._code(_pmulmod(self._poly(a), self._poly(b), self.modulus, self.p))

    def _build_tables(self):
        n = self.order - 1
        if self.generator_flag:
            g = self._code([0, 1]) if self.e > 1 else (-self.modulus[0]) % self.p
        else:
            g = self._find_generator()
        self.generator = g
        exp = np.zeros(2 * n + 1, dtype=np.int64)
        x = 1
        for i in range(n):
            exp[i] = x
            x = self._slow_mul(x, g)
        if x != 1:
            raise FieldError("generator search failed")
        exp[n:2 * n] = exp[:n]
        exp[2 * n] = exp[0]
        log = np.full(self.order, -1, dtype=np.int64)
        log[exp[:n]] = np.arange(n)
        if np.any(log[1:] < 0):
            raise FieldError("modulus is not irreducible")
        self.exp = exp
        self.log = log
        digits = np.zeros((self.order, self.e), dtype=np.int64)
        codes = np.arange(self.order)
        for i, w in enumerate(self._pw):
            digits[:, i] = (codes // w) % self.p
        self.digits = digits
        self._weights = np.array(self._pw, dtype=np.int64)
        self._addt = None
        if self.p != 2 and self.order <= ADD_TABLE_LIMIT:
            t = np.empty((self.order, self.order), dtype=np.int32 if self.order > 127 else np.int16)
            for a in range(self.order):
                t[a] = ((digits[a] + digits) % self.p) @ self._weights
            self._addt = t

    def _find_generator(self) -> int:
        n = self.order - 1
        primes = sympy.primefactors(n)
        for g in range(2, self.order):
            poly = self._poly(g)
            if all(_ppowmod(poly, n // r, self.modulus, self.p) != [1] for r in primes):
                return g
        raise FieldError("no generator found")

    # scalar arithmetic on codes
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._tables and self._addt is not None:
            return int(self._addt[a, b])
        return self._code([x + y for x, y in zip(self._digits_of(a), self._digits_of(b))])

    def _digits_of(self, a: int) -> list[int]:
        return [(a // w) % self.p for w in self._pw]

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self._code([-x for x in self._digits_of(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._tables:
            return int(self.exp[self.log[a] + self.log[b]])
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self._tables:
            return int(self.exp[(self.order - 1 - self.log[a]) % (self.order - 1)])
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if a == 0:
            return 1 if n == 0 else 0
        if self._tables:
            return int(self.exp[(int(self.log[a]) * n) % (self.order - 1)])
        return self._code(_ppowmod(self._poly(a), n, self.modulus, self.p))

    def trace(self, a: int, sub_order: int | None = None) -> int:
        """Trace down to GF(sub_order); absolute trace by default."""
        r = sub_order or self.p
        deg = _log_int(self.order, r)
        out, x = 0, a
        for _ in range(deg):
            out = self.add(out, x)
            x = self.pow(x, r)
        return out

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.order - 1) // 2) == 1

    # vectorised arithmetic (numpy integer arrays of codes)
    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self._addt is not None:
            return self._addt[a, b].astype(np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._pw:
            out += (((a // w) % self.p + (b // w) % self.p) % self.p) * w
        return out

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        out = np.zeros(a.shape, dtype=np.int64)
        for w in self._pw:
            out += ((-((a // w) % self.p)) % self.p) * w
        return out

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if not self._tables:
            return np.vectorize(self.mul, otypes=[np.int64])(a, b)
        la, lb = self.log[a], self.log[b]
        out = self.exp[np.maximum(la, 0) + np.maximum(lb, 0)]
        return np.where((la < 0) | (lb < 0), 0, out)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if not self._tables:
            return np.vectorize(self.inv, otypes=[np.int64])(a)
        return self.exp[(self.order - 1 - self.log[a]) % (self.order - 1)]

    def vpow(self, a, n: int):
        a = np.asarray(a, dtype=np.int64)
        if not self._tables:
            return np.vectorize(lambda x: self.pow(x, n), otypes=[np.int64])(a)
        if n == 0:
            return np.ones(a.shape, dtype=np.int64)
        la = self.log[a]
        out = self.exp[(np.maximum(la, 0) * (n % (self.order - 1))) % (self.order - 1)]
        if n < 0 and np.any(la < 0):
            raise ZeroDivisionError("negative power of zero")
        return np.where(la < 0, 0, out)

    def vsum(self, arr, axis=-1):
        arr = np.moveaxis(np.asarray(arr, dtype=np.int64), axis, 0)
        if arr.shape[0] == 0:
            return np.zeros(arr.shape[1:], dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(arr, axis=0)
        out = arr[0]
        for x in arr[1:]:
            out = self.vadd(out, x)
        return out

    @cached_property
    def small_tables(self) -> "SmallTables":
        if self.order > SMALL_TABLE_LIMIT:
            raise FieldError("field too large for dense q x q tables")
        codes = np.arange(self.order, dtype=np.int64)
        add = self.vadd(codes[:, None], codes[None, :])
        mul = self.vmul(codes[:, None], codes[None, :])
        neg = self.vneg(codes)
        inv = np.zeros(self.order, dtype=np.int64)
        inv[1:] = self.vinv(codes[1:])
        sub = add[:, neg]
        return SmallTables(add, sub, mul, neg, inv)

    # misc
    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, int(code))

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, c) for c in range(self.order)]

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))


@dataclass(frozen=True)
class SmallTables:
    add: np.ndarray
    sub: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray


def _log_int(n: int, base: int) -> int:
    k, x = 0, 1
    while x < n:
        x *= base
        k += 1
    if x != n:
        raise FieldError(f"{n} is not a power of {base}")
    return k


_FIELD_CACHE: dict = {}


def make_field(p: int, e: int = 1, modulus: Sequence[int] | None = None) -> FiniteField:
    """Build GF(p^e).  Without ``modulus`` the least primitive polynomial is
    used, so the result is reproducible."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if e < 1:
        raise FieldError("extension degree must be >= 1")
    if modulus is None:
        modulus = least_primitive_polynomial(p, e)
    else:
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {e}")
        witness = irreducibility_witness(modulus, p)
        if witness is not None:
            raise FieldError(f"modulus {modulus} is reducible over GF({p}); factor {witness}")
    key = (p, tuple(modulus))
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FiniteField(p, e, modulus)
    return _FIELD_CACHE[key]


def field_from_json(spec: dict) -> FiniteField:
    return make_field(int(spec["p"]), int(spec["e"]), spec.get("modulus"))


class FieldElement:
    """An element of a :class:`FiniteField` (value object)."""

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        if not 0 <= code < field.order:
            raise FieldError(f"code {code} out of range for {field!r}")
        self.field = field
        self.code = int(code)

    @property
    def spec(self) -> FiniteField:
        return self.field

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field._digits_of(self.code))

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        return FieldElement(self.field, self.field.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        return FieldElement(self.field, self.field.sub(self.code, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        return FieldElement(self.field, self.field.sub(b, self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        b = self._coerce(other)
        return FieldElement(self.field, self.field.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        return FieldElement(self.field, self.field.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._coerce(other)
        return FieldElement(self.field, self.field.div(b, self.code))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.code, n))

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.code))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.field.p and self.code < self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"{self.field!r}({self.code})"


def arith(a: FieldElement, b: FieldElement | int, kind: str) -> FieldElement:
    """Dispatch one of add/sub/mul/div/pow/inv."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    if kind == "pow":
        return a ** int(b)
    if kind == "inv":
        return a.inverse()
    raise ValueError(f"unknown operation {kind!r}")


def frobenius(a: FieldElement, i: int, sub_order: int) -> FieldElement:
    """``a ** (sub_order ** i)``."""
    F = a.field
    if sub_order % F.p or _log_int(sub_order, F.p) < 1:
        raise FieldError("sub_order must be a power of the characteristic")
    n = pow(sub_order, i, F.order - 1) if F.order > 2 else 1
    if a.code == 0:
        return a
    # exponent reduced mod |F*|; q^i mod (N-1), with 0 meaning N-1
    return FieldElement(F, F.pow(a.code, n if n else F.order - 1))


# -- towers ----------------------------------------------------------------

class Tower:
    """GF(q) inside GF(q^t), both realised in one field of order p^(e t).

    The subfield is the fixed field of ``x -> x^q``.  Its elements are coded
    by coefficients with respect to ``1, beta, ..., beta^(e-1)`` where
    ``beta`` generates GF(q)*; for prime q these codes are 0..p-1.
    """

    def __init__(self, big: FiniteField, e: int, t: int, omega: int, sub: FiniteField, emb: np.ndarray):
        self.big = big
        self.sub = sub
        self.p = big.p
        self.e = e
        self.t = t
        self.q = self.p ** e
        self.Q = big.order
        self.omega = int(omega)
        self.emb = emb
        sub_of = np.full(big.order, -1, dtype=np.int64)
        sub_of[emb] = np.arange(self.q)
        self.sub_of = sub_of
        self.basis = np.array([big.pow(self.omega, j) for j in range(t)], dtype=np.int64)
        self._check()
        self._build_vec_tables()

    def _check(self):
        big = self.big
        if big.pow(self.omega, self.Q) != self.omega:
            raise FieldError("omega not in the big field")
        orbit = {big.pow(self.omega, self.q ** i) for i in range(self.t)}
        if len(orbit) != self.t:
            raise FieldError("omega does not generate GF(q^t) over GF(q)")
        for c in self.emb:
            if big.pow(int(c), self.q) != int(c):
                raise FieldError("embedded subfield element not fixed by Frobenius")

    def _build_vec_tables(self):
        q, t = self.q, self.t
        idx = np.arange(q ** t, dtype=np.int64)
        code = np.zeros(q ** t, dtype=np.int64)
        for j in range(t):
            dig = (idx // q ** (t - 1 - j)) % q
            code = self.big.vadd(code, self.big.vmul(self.emb[dig], self.basis[j]))
        if len(np.unique(code)) != q ** t:
            raise FieldError("basis 1, omega, ... is not independent over GF(q)")
        self.code_of_vecidx = code
        vecidx = np.empty(q ** t, dtype=np.int64)
        vecidx[code] = idx
        self.vecidx_of_code = vecidx
        table = np.zeros((q ** t, t), dtype=np.int64)
        for j in range(t):
            table[:, j] = (vecidx // q ** (t - 1 - j)) % q
        self.vec_table = table

    # conversions between big-field codes and GF(q)-coordinate vectors
    def vec(self, a) -> np.ndarray:
        """Coordinates (over GF(q), subfield codes) w.r.t. 1, omega, ..."""
        return self.vec_table[np.asarray(a, dtype=np.int64)]

    def recompose(self, v) -> np.ndarray | int:
        v = np.asarray(v, dtype=np.int64)
        weights = self.q ** np.arange(self.t - 1, -1, -1, dtype=np.int64)
        out = self.code_of_vecidx[v @ weights]
        return int(out) if out.ndim == 0 else out

    def embed(self, s):
        return self.emb[np.asarray(s, dtype=np.int64)]

    def restrict(self, a):
        """Subfield code of big-field elements known to lie in GF(q)."""
        out = self.sub_of[np.asarray(a, dtype=np.int64)]
        if np.any(out < 0):
            raise FieldError("element not in the subfield")
        return out

    def frob(self, a, i: int = 1):
        """Vectorised ``a ** (q ** i)``."""
        n = pow(self.q, i, self.Q - 1)
        return self.big.vpow(a, n if n else self.Q - 1)

    def in_subfield(self, a) -> bool | np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return self.frob(a, 1) == a

    def minpoly_omega(self) -> list[int]:
        """Minimal polynomial of omega over GF(q), ascending subfield codes."""
        big = self.big
        poly = [1]
        for i in range(self.t):
            root = big.pow(self.omega, self.q ** i)
            nxt = [0] * (len(poly) + 1)
            for d, c in enumerate(poly):
                nxt[d + 1] = big.add(nxt[d + 1], c)
                nxt[d] = big.sub(nxt[d], big.mul(c, root))
            poly = nxt
        return [int(c) for c in self.restrict(poly)]

    def rel_trace(self, a):
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros(a.shape, dtype=np.int64)
        for i in range(self.t):
            out = self.big.vadd(out, self.frob(a, i))
        return out

    def rel_norm(self, a):
        a = np.asarray(a, dtype=np.int64)
        out = np.ones(a.shape, dtype=np.int64)
        for i in range(self.t):
            out = self.big.vmul(out, self.frob(a, i))
        return out

    def to_json(self) -> dict:
        return {
            "big": self.big.to_json(),
            "q": self.q,
            "t": self.t,
            "omega": self.omega,
            "omega_minpoly": self.minpoly_omega(),
            "sub_modulus": list(self.sub.modulus),
        }

    def __repr__(self):
        return f"Tower(GF({self.q}) < GF({self.q}^{self.t}))"


_TOWER_CACHE: dict = {}


def make_tower(p: int, e: int, t: int, omega_minpoly: Sequence[int] | None = None,
               modulus: Sequence[int] | None = None) -> Tower:
    """GF(p^e) inside GF(p^(e t)).

    ``omega_minpoly`` (monic, ascending subfield codes) selects omega as the
    least-coded root of that polynomial; otherwise omega is the primitive
    element of the big field."""
    key = (p, e, t, tuple(omega_minpoly) if omega_minpoly is not None else None,
           tuple(modulus) if modulus is not None else None)
    if key in _TOWER_CACHE:
        return _TOWER_CACHE[key]
    if t < 1:
        raise FieldError("t must be >= 1")
    big = make_field(p, e * t, modulus)
    if not big._tables:
        raise FieldError("towers require discrete-log tables (order <= 2^16)")
    q = p ** e
    g = big.generator
    if e == 1:
        sub = make_field(p, 1)
        emb = np.arange(p, dtype=np.int64)
    else:
        beta = big.pow(g, (big.order - 1) // (q - 1))
        poly = [1]
        for i in range(e):
            root = big.pow(beta, p ** i)
            nxt = [0] * (len(poly) + 1)
            for d, c in enumerate(poly):
                nxt[d + 1] = big.add(nxt[d + 1], c)
                nxt[d] = big.sub(nxt[d], big.mul(c, root))
            poly = nxt
        if any(c >= p for c in poly):
            raise FieldError("subfield minimal polynomial not over GF(p)")
        sub = make_field(p, e, poly)
        codes = np.arange(q, dtype=np.int64)
        emb = np.zeros(q, dtype=np.int64)
        for i in range(e):
            emb = big.vadd(emb, big.vmul((codes // p ** i) % p, big.pow(beta, i)))
    if omega_minpoly is None:
        omega = g
    else:
        f = [int(c) for c in omega_minpoly]
        if len(f) != t + 1 or f[-1] != 1:
            raise FieldError(f"omega minimal polynomial must be monic of degree {t}")
        ef = emb[np.array(f)]
        xs = np.arange(1, big.order, dtype=np.int64)
        val = np.zeros(xs.shape, dtype=np.int64)
        for c in ef[::-1]:
            val = big.vadd(big.vmul(val, xs), c)
        roots = xs[val == 0]
        omega = None
        for r in roots:
            if len({big.pow(int(r), q ** i) for i in range(t)}) == t:
                omega = int(r)
                break
        if omega is None:
            raise FieldError(f"polynomial {f} is not irreducible of degree {t} over GF({q})")
    tower = Tower(big, e, t, omega, sub, emb)
    _TOWER_CACHE[key] = tower
    return tower


def subfield_test_and_decompose(a: int, tower: Tower) -> tuple[bool, tuple[int, ...]]:
    v = tuple(int(x) for x in tower.vec(a))
    return bool(tower.in_subfield(a)), v


def trace_norm(a: int, tower: Tower) -> tuple[int, int]:
    """Relative trace and norm GF(q^t) -> GF(q), as subfield codes."""
    tr = int(tower.rel_trace(a))
    nm = int(tower.rel_norm(a))
    return int(tower.restrict(tr)), int(tower.restrict(nm))


def cubic_is_irreducible(coeffs: Iterable[int], field: FiniteField) -> bool:
    """Irreducibility over ``field`` of a cubic (ascending codes): no roots."""
    c = list(coeffs)
    if len(c) != 4 or c[-1] == 0:
        raise FieldError("expected a cubic")
    for x in range(field.order):
        val = 0
        for coef in reversed(c):
            val = field.add(field.mul(val, x), coef)
        if val == 0:
            return False
    return True


def tower_from_json(spec: dict) -> Tower:
    big = spec["big"]
    p, et, t = int(big["p"]), int(big["e"]), int(spec["t"])
    e = et // t
    tw = make_tower(p, e, t, modulus=big["modulus"])
    if tw.omega != int(spec["omega"]):
        tw = make_tower(p, e, t, omega_minpoly=spec["omega_minpoly"], modulus=big["modulus"])
    if tw.omega != int(spec["omega"]):
        raise FieldError("cannot rebuild the tower's omega")
    return tw
