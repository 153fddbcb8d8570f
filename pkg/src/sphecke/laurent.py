"""Laurent polynomials in a formal variable v with v**2 = q.

Tracking the square root of the residue cardinality as v keeps every Satake
exponent integral: a pairing 2<rho, mu> becomes the v-exponent of a monomial.
Coefficients are plain integers; specialization substitutes a field element
for v.
"""

from __future__ import annotations

from .errors import DomainError


class LaurentV:
    """Finitely supported integer map {v-exponent: coefficient}."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = {}
        if coeffs:
            for e, v in coeffs.items():
                if v:
                    self.c[int(e)] = int(v)

    # ----- constructors -----

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def v_power(cls, e, coeff=1):
        return cls({e: coeff})

    @classmethod
    def from_q(cls, qcoeffs):
        """Build from a map {q-exponent: coefficient} (q = v**2)."""
        return cls({2 * e: v for e, v in qcoeffs.items()})

    # ----- structure -----

    @property
    def is_zero(self):
        return not self.c

    def monomial(self):
        """(exponent, coefficient) if this is a single term, else None."""
        if len(self.c) == 1:
            [(e, v)] = self.c.items()
            return (e, v)
        return None

    def is_q_polynomial(self):
        """True when all exponents are even and nonnegative."""
        return all(e >= 0 and e % 2 == 0 for e in self.c)

    def as_q_dict(self):
        if not self.is_q_polynomial():
            raise DomainError(f"{self} is not a polynomial in q",
                              precondition="q_polynomial")
        return {e // 2: v for e, v in self.c.items()}

    def is_constant(self):
        return not self.c or set(self.c) == {0}

    # ----- arithmetic -----

    @staticmethod
    def _coerce(other):
        if isinstance(other, LaurentV):
            return other
        if isinstance(other, int):
            return LaurentV({0: other})
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.c)
        for e, v in other.c.items():
            s = out.get(e, 0) + v
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        res = LaurentV.__new__(LaurentV)
        res.c = out
        return res

    __radd__ = __add__

    def __neg__(self):
        res = LaurentV.__new__(LaurentV)
        res.c = {e: -v for e, v in self.c.items()}
        return res

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
        out = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                s = out.get(e, 0) + v1 * v2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        res = LaurentV.__new__(LaurentV)
        res.c = out
        return res

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            mono = self.monomial()
            if mono is None or mono[1] not in (1, -1):
                raise DomainError("cannot invert a non-unit Laurent polynomial",
                                  precondition="unit_denominator")
            e, v = mono
            return LaurentV({e * n: 1 if v == 1 or n % 2 == 0 else -1})
        acc = LaurentV.one()
        base = self
        k = n
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def shift(self, e):
        """Multiply by v**e."""
        res = LaurentV.__new__(LaurentV)
        res.c = {k + e: v for k, v in self.c.items()}
        return res

    def q_reverse(self):
        """Substitute v -> v**-1 (so q -> q**-1 on even parts)."""
        res = LaurentV.__new__(LaurentV)
        res.c = {-k: v for k, v in self.c.items()}
        return res

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    # ----- evaluation -----

    def substitute(self, v_value):
        """Evaluate at v = v_value (any ring element supporting ** and +)."""
        acc = None
        for e, coeff in sorted(self.c.items()):
            term = (v_value ** e) * coeff
            acc = term if acc is None else acc + term
        if acc is None:
            return v_value ** 0 * 0
        return acc

    def eval_q(self, q):
        """Evaluate a q-polynomial at an integer q."""
        return sum(v * q ** e for e, v in self.as_q_dict().items())

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c, reverse=True):
            v = self.c[e]
            if e == 0:
                parts.append(f"{v}")
            elif e == 1:
                parts.append(f"{v}*v" if v != 1 else "v")
            else:
                parts.append(f"{v}*v^{e}" if v != 1 else f"v^{e}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return [{"v": e, "c": v} for e, v in sorted(self.c.items())]

    @classmethod
    def from_json(cls, doc):
        return cls({term["v"]: term["c"] for term in doc})
