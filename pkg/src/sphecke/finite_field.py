"""Arithmetic in F_{p^k}, the computable stand-in for an algebraic closure.

Elements are coefficient tuples of length k over F_p, reduced modulo a monic
irreducible polynomial.  The modulus is found by deterministic lexicographic
search so that serialized elements are reproducible; irreducibility is
checked by exhaustive trial division over all monic factors of degree at
most k // 2.
"""

from __future__ import annotations

from .errors import DomainError


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mulmod(a, b, modulus, p):
    """Product of coefficient lists, reduced mod (modulus, p)."""
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_rem(out, modulus, p)


def _poly_rem(a, modulus, p):
    a = list(a)
    dm = len(modulus) - 1
    lead_inv = pow(modulus[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        coef = a[i] % p
        if coef:
            factor = (coef * lead_inv) % p
            for j, m in enumerate(modulus):
                a[i - dm + j] = (a[i - dm + j] - factor * m) % p
    return [x % p for x in a[:dm]]


class FiniteField:
    """The field with p**k elements, with a fixed deterministic modulus."""

    def __init__(self, p, k=1, modulus=None):
        if not _is_prime(p):
            raise DomainError(f"{p} is not prime", precondition="prime_characteristic")
        if k < 1:
            raise DomainError("extension degree must be >= 1",
                              precondition="positive_degree")
        if p ** k > 10 ** 7:
            raise DomainError("field too large for exhaustive routines",
                              precondition="enumerable_field")
        self.p = p
        self.k = k
        if modulus is None:
            modulus = self._find_modulus()
        else:
            modulus = [x % p for x in modulus]
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise DomainError("modulus must be monic of degree k",
                                  precondition="monic_modulus")
            if k > 1 and not self._irreducible(modulus):
                raise DomainError("modulus is reducible",
                                  precondition="irreducible_modulus")
        self.modulus = tuple(modulus)
        self.zero = FFElement(self, (0,) * k)
        self.one = FFElement(self, (1,) + (0,) * (k - 1))

    def _find_modulus(self):
        p, k = self.p, self.k
        if k == 1:
            return [0, 1]
        # lexicographic search over constant-first coefficient vectors
        for code in range(p ** k):
            coeffs = []
            c = code
            for _ in range(k):
                coeffs.append(c % p)
                c //= p
            candidate = coeffs + [1]
            if self._irreducible(candidate):
                return candidate
        raise DomainError("no irreducible modulus found",
                          precondition="irreducible_modulus")  # pragma: no cover

    def _irreducible(self, candidate):
        p, k = self.p, self.k
        # no root and, for k >= 4, no factor of degree <= k // 2
        for x in range(p):
            if sum(c * pow(x, i, p) for i, c in enumerate(candidate)) % p == 0:
                return False
        for deg in range(2, k // 2 + 1):
            for code in range(p ** deg):
                coeffs = []
                c = code
                for _ in range(deg):
                    coeffs.append(c % p)
                    c //= p
                divisor = coeffs + [1]
                if not any(_poly_rem(candidate, divisor, p)):
                    return False
        return True

    @property
    def order(self):
        return self.p ** self.k

    def __call__(self, value):
        """Coerce an integer or coefficient sequence to a field element."""
        if isinstance(value, FFElement):
            if value.field is not self and value.field != self:
                raise DomainError("element of a different field",
                                  precondition="matching_field")
            return value
        if isinstance(value, int):
            return FFElement(self, (value % self.p,) + (0,) * (self.k - 1))
        coeffs = tuple(int(x) % self.p for x in value)
        if len(coeffs) != self.k:
            raise DomainError(f"element needs {self.k} coefficients",
                              precondition="matching_degree")
        return FFElement(self, coeffs)

    def elements(self):
        """All field elements, in deterministic order."""
        p, k = self.p, self.k
        for code in range(p ** k):
            coeffs = []
            c = code
            for _ in range(k):
                coeffs.append(c % p)
                c //= p
            yield FFElement(self, tuple(coeffs))

    def sqrt(self, a):
        """A canonical square root of ``a`` if one exists, else None."""
        a = self(a)
        for x in self.elements():
            if x * x == a:
                return x
        return None

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and self.p == other.p
                and self.k == other.k and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"FiniteField(p={self.p}, k={self.k})"

    def to_json(self):
        return {"p": self.p, "ext_degree": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, doc):
        return cls(doc["p"], doc.get("ext_degree", 1), doc.get("modulus"))


class FFElement:
    """Immutable element of a FiniteField."""

    __slots__ = ("field", "c")

    def __init__(self, field, coeffs):
        self.field = field
        self.c = tuple(coeffs)

    def _coerce(self, other):
        if isinstance(other, FFElement):
            if other.field != self.field:
                raise DomainError("elements of different fields",
                                  precondition="matching_field")
            return other
        if isinstance(other, int):
            return self.field(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self.field.p
        return FFElement(self.field,
                         tuple((a + b) % p for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FFElement(self.field, tuple((-a) % p for a in self.c))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = _poly_mulmod(list(self.c), list(other.c),
                           list(self.field.modulus), self.field.p)
        out += [0] * (self.field.k - len(out))
        return FFElement(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self):
        """Multiplicative inverse by the extended Euclidean algorithm."""
        if self.is_zero():
            raise DomainError("zero is not invertible", precondition="nonzero_element")
        p = self.field.p
        a = _poly_trim(list(self.c))
        b = list(self.field.modulus)
        # invariants: s*self + t*modulus = a (mod p)
        s0, s1 = [1], [0]
        while True:
            a = _poly_trim(a)
            if len(a) == 1:
                inv = pow(a[0], -1, p)
                out = [(x * inv) % p for x in s0]
                out = _poly_rem(out, list(self.field.modulus), p)
                out += [0] * (self.field.k - len(out))
                return FFElement(self.field, tuple(out))
            q, r = _poly_divmod(b, a, p)
            b, a = a, r
            s1, s0 = s0, _poly_sub(s1, _poly_mul(q, s0, p), p)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        acc = self.field.one
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def is_zero(self):
        return all(x == 0 for x in self.c)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FFElement):
            return NotImplemented
        return self.field == other.field and self.c == other.c

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.c))

    def __repr__(self):
        if self.field.k == 1:
            return f"F{self.field.p}({self.c[0]})"
        return f"F{self.field.p}^{self.field.k}{list(self.c)}"

    def sort_key(self):
        return self.c[::-1]

    def to_json(self):
        return list(self.c)


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def _poly_divmod(a, b, p):
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(1, len(a) - len(b) + 1)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        factor = (a[-1] * inv) % p
        q[shift] = factor
        for i, coef in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * coef) % p
        a = _poly_trim(a)
    return _poly_trim(q), a
