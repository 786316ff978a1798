"""Exact arithmetic in prime fields F_p and extension fields GF(p^t).

Elements are encoded as integers in ``[0, p**t)``: the base-p digits are the
coefficients of the element in the polynomial basis ``1, x, ..., x^(t-1)``.
Fields with at most 2**16 elements get log/antilog tables; every vectorised
operation works on integer numpy arrays holding such encodings.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np
from sympy import isprime

from .errors import FieldMismatch

TABLE_LIMIT = 1 << 16


# --- polynomials over F_p as coefficient lists, low-to-high -----------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, m, p):
    a = _trim(a)
    m = _trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        f = (a[-1] * inv_lead) % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - f * c) % p
        a = _trim(a)
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _psub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, m, p):
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _irreducible_by_trial(f, p):
    t = len(f) - 1
    for d in range(1, t // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _pmod(f, list(low) + [1], p):
                return False
    return True


def _irreducible_by_rabin(f, p):
    t = len(f) - 1
    x = [0, 1]
    if _psub(_ppowmod(x, p**t, f, p), x, p):
        return False
    for r in _prime_factors(t):
        h = _psub(_ppowmod(x, p ** (t // r), f, p), x, p)
        g = _pgcd(f, h, p)
        if len(g) != 1:
            return False
    return True


def is_irreducible(f, p) -> bool:
    """Irreducibility of a monic polynomial over F_p (coefficients low-to-high)."""
    f = _trim([c % p for c in f])
    t = len(f) - 1
    if t < 1:
        return False
    if t == 1:
        return True
    if p ** (t // 2) <= 4096:
        return _irreducible_by_trial(f, p)
    return _irreducible_by_rabin(f, p)


def default_modulus(p: int, t: int) -> tuple:
    """Lexicographically smallest monic irreducible of degree t (low-to-high)."""
    # a zero constant term means divisibility by x, so those candidates are skipped
    first = range(p) if t == 1 else range(1, p)
    for low in product(first, *[range(p)] * (t - 1)):
        f = list(low) + [1]
        if is_irreducible(f, p):
            return tuple(f)
    raise ValueError(f"no irreducible polynomial of degree {t} over F_{p}")


class Field:
    """The finite field GF(p^t) with a fixed modulus."""

    def __init__(self, p: int, t: int = 1, modulus=None):
        if not isinstance(p, (int, np.integer)) or not isprime(int(p)):
            raise ValueError(f"characteristic must be prime, got {p!r}")
        if int(t) < 1:
            raise ValueError("extension degree must be >= 1")
        p, t = int(p), int(t)
        if modulus is None:
            modulus = default_modulus(p, t)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != t + 1 or modulus[-1] != 1:
                raise ValueError(f"modulus must be monic of degree {t}")
            if not is_irreducible(modulus, p):
                raise ValueError(f"modulus {list(modulus)} is reducible over F_{p}")
        self.p = p
        self.t = t
        self.q = p**t
        self.modulus = modulus
        self._powers = np.array([p**i for i in range(t)], dtype=np.int64)
        self._exp = self._log = None
        if self.q <= TABLE_LIMIT:
            self._build_tables()

    # -- construction helpers --

    def _digits(self, a):
        out = []
        for _ in range(self.t):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, d):
        v = 0
        for c in reversed(list(d) + [0] * (self.t - len(d))):
            v = v * self.p + c
        return v

    def _slow_mul(self, a, b):
        if self.t == 1:
            return (a * b) % self.p
        prod = _pmul(_trim(self._digits(a)), _trim(self._digits(b)), self.p)
        return self._undigits(_pmod(prod, self.modulus, self.p))

    def _vmul_notable(self, a, b):
        """Vectorised polynomial-basis product without tables."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        t, p = self.t, self.p
        if p == 2:
            acc = np.zeros(a.shape, dtype=np.int64)
            for i in range(t):
                acc ^= np.where((b >> i) & 1, a << i, 0)
            mod = sum(c << i for i, c in enumerate(self.modulus))
            for j in range(2 * t - 2, t - 1, -1):
                acc ^= np.where((acc >> j) & 1, mod << (j - t), 0)
            return acc
        da = [(a // w) % p for w in self._powers]
        db = [(b // w) % p for w in self._powers]
        conv = [np.zeros(a.shape, dtype=np.int64) for _ in range(2 * t - 1)]
        for i in range(t):
            for j in range(t):
                conv[i + j] = (conv[i + j] + da[i] * db[j]) % p
        for k in range(2 * t - 2, t - 1, -1):
            top = conv[k]
            for i, c in enumerate(self.modulus[:-1]):
                if c:
                    conv[k - t + i] = (conv[k - t + i] - top * c) % p
        out = np.zeros(a.shape, dtype=np.int64)
        for i in range(t):
            out += conv[i] * self._powers[i]
        return out

    def _build_tables(self):
        q = self.q
        order = q - 1
        factors = _prime_factors(order) if order > 1 else []
        for g in range(1, q):
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                break
        exp = np.zeros(2 * order + 2, dtype=np.int64)
        exp[0] = 1
        filled, step = 1, g
        while filled < order:
            take = min(filled, order - filled)
            exp[filled:filled + take] = self._vmul_notable(exp[:take], step)
            filled += take
            step = self._slow_mul(step, step)
        log = np.zeros(q, dtype=np.int64)
        log[exp[:order]] = np.arange(order)
        exp[order:2 * order] = exp[:order]
        self._exp, self._log = exp, log
        self.primitive = g

    def _slow_pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    # -- identity --

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.t, self.modulus) == (
            other.p, other.t, other.modulus)

    def __hash__(self):
        return hash((self.p, self.t, self.modulus))

    def __repr__(self):
        return f"GF({self.p})" if self.t == 1 else f"GF({self.p}^{self.t})"

    def to_dict(self):
        return {"p": self.p, "t": self.t, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, d):
        return cls(d["p"], d.get("t", 1), d.get("modulus"))

    @property
    def characteristic(self):
        return self.p

    def __len__(self):
        return self.q

    def element(self, value) -> "FieldElement":
        return FieldElement(self, value)

    def elements(self):
        return [FieldElement(self, v) for v in range(self.q)]

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element encoding of {self}")
        return a

    # -- scalar arithmetic on encodings --

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if self.t == 1:
            return (a + b) % self.p
        p = self.p
        return self._undigits([(x + y) % p for x, y in zip(self._digits(a), self._digits(b))])

    def neg(self, a):
        if self.p == 2:
            return a
        if self.t == 1:
            return (-a) % self.p
        return self._undigits([(-x) % self.p for x in self._digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.t == 1:
            return (a * b) % self.p
        if self._exp is not None:
            return int(self._exp[self._log[a] + self._log[b]])
        return self._slow_mul(a, b)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"zero has no inverse in {self}")
        if self.t == 1:
            return pow(int(a), self.p - 2, self.p)
        if self._exp is not None:
            return int(self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)])
        return self._slow_pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.t == 1:
            return pow(int(a), e, self.p)
        if self._exp is not None:
            return int(self._exp[(self._log[a] * e) % (self.q - 1)])
        return self._slow_pow(a, e)

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> GF(p^t)."""
        return int(n) % self.p

    # -- vectorised arithmetic on integer arrays --

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.t == 1:
            return (a + b) % self.p
        p, out = self.p, np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._powers:
            out += (((a // w) % p + (b // w) % p) % p) * w
        return out

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        if self.t == 1:
            return (-a) % self.p
        p, out = self.p, np.zeros_like(a)
        for w in self._powers:
            out += ((-((a // w) % p)) % p) * w
        return out

    def vsub(self, a, b):
        if self.p == 2:
            return np.asarray(a, dtype=np.int64) ^ np.asarray(b, dtype=np.int64)
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.t == 1:
            if self.p == 2:
                return a & b
            return (a * b) % self.p
        if self._exp is None:
            return self._vmul_notable(a, b)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no inverse")
        return np.vectorize(self.inv, otypes=[np.int64])(a)

    def matmul(self, A, B):
        """Matrix product of integer-encoded arrays."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        if self.t == 1 and self.p < (1 << 20):
            if self.p == 2:
                return (A @ B) & 1
            return (A @ B) % self.p
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in range(A.shape[1]):
            out = self.vadd(out, self.vmul(A[:, k, None], B[None, k, :]))
        return out

    def random(self, rng, size=None):
        return rng.integers(0, self.q, size=size, dtype=np.int64)


class FieldElement:
    """An element of a specific Field, with operator arithmetic."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = field.check(value)

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow(self.value, int(e)))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value}@{self.field!r}"


def field_new(p: int, t: int = 1, modulus=None) -> Field:
    return Field(p, t, modulus)


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "inv": lambda a, b: a.inverse(),
    "neg": lambda a, b: -a,
    "pow": lambda a, b: a ** (b.value if isinstance(b, FieldElement) else b),
}


def field_arith(a: FieldElement, b, op: str) -> FieldElement:
    """Apply one of add/sub/mul/div/inv/neg/pow; unary ops ignore b.

    For ``pow`` the exponent b is an ordinary integer.
    """
    if op not in _OPS:
        raise ValueError(f"unknown field operation {op!r}")
    if op in ("add", "sub", "mul", "div") and isinstance(b, FieldElement) and b.field != a.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    return _OPS[op](a, b)


@lru_cache(maxsize=64)
def get_field(p: int, t: int = 1, modulus=None) -> Field:
    """Shared Field instance; table construction is paid once per (p, t, modulus)."""
    return Field(p, t, modulus)
