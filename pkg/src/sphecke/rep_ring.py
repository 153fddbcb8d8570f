"""Characters of irreducible dual-group representations.

Weight multiplicities are computed by the Freudenthal recursion (exact
integer arithmetic, no alternating-sum cancellation), dimensions by the Weyl
dimension formula in exact rationals, and products / symmetric powers by
converting to the Weyl-orbit (monomial) basis and peeling off highest terms.

Tables are memoized per (datum, highest weight) since they dominate the cost
of the Satake matrices; the cache uses insert-if-absent semantics and is safe
for concurrent readers.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, InconsistencyError
from .root_data import grlex_key, _dot, _vadd, _vscale

_TABLE_CACHE = {}


class WeightMultiplicityTable:
    """Multiplicities of the dominant weights of one irreducible module."""

    __slots__ = ("datum", "highest", "mults", "_full")

    def __init__(self, datum, highest, mults):
        self.datum = datum
        self.highest = highest
        self.mults = dict(mults)
        self._full = None

    def full_weights(self):
        """Expand over Weyl orbits: multiplicity of every weight."""
        if self._full is None:
            full = {}
            for mu, m in self.mults.items():
                for nu in self.datum.weyl_orbit(mu):
                    full[nu] = m
            self._full = full
        return self._full

    def dimension(self):
        return sum(self.full_weights().values())

    def __repr__(self):
        return f"WeightMultiplicityTable({self.highest}: {self.mults})"


def weight_multiplicities(datum, lam):
    """Freudenthal recursion for dim V_lam(mu) over all dominant mu <= lam.

    Everything happens on the dual side: the roots of the dual group are the
    coroots of ``datum``, and the relevant Weyl vector is half the sum of the
    positive coroots.  All arithmetic is over the integers after doubling.
    """
    lam = datum._require_dominant(lam)
    key = (datum.cache_key, lam)
    cached = _TABLE_CACHE.get(key)
    if cached is not None:
        return cached

    pos = datum.positive_coroots
    rho2 = datum.corho_doubled
    weights = datum.weight_closure(lam)
    doms = datum.dominant_weights_below(lam)

    lam2 = _vadd(_vscale(lam, 2), rho2)
    norm_top = datum.form_value(lam2, lam2)

    mults = {lam: 1}
    for mu in doms[1:]:
        mu2 = _vadd(_vscale(mu, 2), rho2)
        denom = norm_top - datum.form_value(mu2, mu2)
        if denom <= 0:
            raise InconsistencyError(
                f"Freudenthal denominator {denom} at {mu} below {lam}")
        total = 0
        for alpha in pos:
            alpha2 = _vscale(alpha, 2)
            nu = mu
            while True:
                nu = _vadd(nu, alpha)
                if nu not in weights:
                    break
                m = mults[datum.dominant_representative(nu)]
                total += m * datum.form_value(_vscale(nu, 2), alpha2)
        if (2 * total) % denom:
            raise InconsistencyError(
                f"Freudenthal division not exact at {mu} below {lam}")
        mults[mu] = (2 * total) // denom

    table = WeightMultiplicityTable(datum, lam, mults)
    _TABLE_CACHE.setdefault(key, table)
    return _TABLE_CACHE[key]


def dimension(datum, lam):
    """Weyl dimension formula, evaluated in exact rationals."""
    lam = datum._require_dominant(lam)
    rho2 = datum.corho_doubled
    lam2 = _vadd(_vscale(lam, 2), rho2)
    dim = Fraction(1)
    for alpha in datum.positive_roots:
        dim *= Fraction(_dot(alpha, lam2), _dot(alpha, rho2))
    if dim.denominator != 1:
        raise InconsistencyError(f"non-integral dimension for {lam}: {dim}")
    return int(dim)


# ----- monomial-basis helpers ----------------------------------------------


def _is_zero(c):
    return c == 0


def monomial_mul(a, b):
    """Convolution of two finitely supported weight->coefficient maps."""
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = _vadd(wa, wb)
            acc = out.get(w)
            val = ca * cb if acc is None else acc + ca * cb
            if _is_zero(val):
                out.pop(w, None)
            else:
                out[w] = val
    return out


def adams(mono, i):
    """Adams operation on the monomial basis: rescale every weight by i."""
    out = {}
    for w, c in mono.items():
        key = _vscale(w, i)
        acc = out.get(key)
        val = c if acc is None else acc + c
        if _is_zero(val):
            out.pop(key, None)
        else:
            out[key] = val
    return out


def decompose_monomial(datum, mono):
    """Express a Weyl-invariant monomial sum in the irreducible basis.

    Repeatedly subtracts the full character of the graded-lex-largest
    remaining weight, which is dominant whenever the input really is
    Weyl-invariant.
    """
    work = {w: c for w, c in mono.items() if not _is_zero(c)}
    out = {}
    guard = 0
    while work:
        guard += 1
        if guard > 10_000_000:
            raise InconsistencyError("decomposition failed to terminate")
        lam = max(work, key=grlex_key)
        if not datum.is_dominant(lam):
            raise InconsistencyError(
                f"leading weight {lam} not dominant; input not Weyl-invariant")
        c = work[lam]
        out[lam] = c
        for nu, m in weight_multiplicities(datum, lam).full_weights().items():
            acc = work.get(nu, 0)
            val = acc - c * m
            if _is_zero(val):
                work.pop(nu, None)
            else:
                work[nu] = val
    return out


class VirtualCharacter:
    """Finite integer (or ring) combination of irreducible characters."""

    __slots__ = ("datum", "coeffs")

    def __init__(self, datum, coeffs=None):
        self.datum = datum
        self.coeffs = {}
        for lam, c in (coeffs or {}).items():
            if not _is_zero(c):
                self.coeffs[datum._require_dominant(lam)] = c

    @classmethod
    def irreducible(cls, datum, lam, coeff=1):
        return cls(datum, {tuple(lam): coeff})

    @classmethod
    def one(cls, datum):
        return cls(datum, {(0,) * datum.rank: 1})

    def _check_same(self, other):
        if self.datum != other.datum:
            raise DomainError("characters live on different root data",
                              precondition="matching_datum")

    def __add__(self, other):
        self._check_same(other)
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            val = out.get(lam, 0) + c
            if _is_zero(val):
                out.pop(lam, None)
            else:
                out[lam] = val
        return VirtualCharacter(self.datum, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return VirtualCharacter(self.datum,
                                {lam: v * c for lam, v in self.coeffs.items()})

    def __mul__(self, other):
        self._check_same(other)
        mono = monomial_mul(self.to_monomial(), other.to_monomial())
        return VirtualCharacter(self.datum, decompose_monomial(self.datum, mono))

    def to_monomial(self):
        """Expansion in the Weyl-orbit basis (weight -> coefficient)."""
        out = {}
        for lam, c in self.coeffs.items():
            for nu, m in weight_multiplicities(self.datum, lam).full_weights().items():
                acc = out.get(nu, 0)
                val = acc + c * m
                if _is_zero(val):
                    out.pop(nu, None)
                else:
                    out[nu] = val
        return out

    @classmethod
    def from_monomial(cls, datum, mono):
        return cls(datum, decompose_monomial(datum, mono))

    def dimension(self):
        """Value at the identity torus point."""
        return sum(c * dimension(self.datum, lam) for lam, c in self.coeffs.items())

    def coefficient(self, lam):
        return self.coeffs.get(tuple(lam), 0)

    def support(self):
        return tuple(sorted(self.coeffs, key=grlex_key, reverse=True))

    def __eq__(self, other):
        return (isinstance(other, VirtualCharacter)
                and self.datum == other.datum and self.coeffs == other.coeffs)

    def __repr__(self):
        terms = ", ".join(f"{lam}: {c}" for lam, c in
                          sorted(self.coeffs.items(), key=lambda kv: grlex_key(kv[0]),
                                 reverse=True))
        return f"VirtualCharacter({{{terms}}})"

    def to_json(self):
        return {"terms": [{"weight": list(lam), "coeff": c}
                          for lam, c in sorted(self.coeffs.items(),
                                               key=lambda kv: grlex_key(kv[0]),
                                               reverse=True)]}

    @classmethod
    def from_json(cls, datum, doc):
        coeffs = {}
        for term in doc.get("terms", []):
            coeffs[tuple(term["weight"])] = term["coeff"]
        return cls(datum, coeffs)


def multiply(a, b):
    """Product in the representation ring, in the irreducible basis."""
    return a * b


def tensor_power(x, e):
    """e-th tensor power of a character (iterated monomial convolution)."""
    x = _coerce_character(x)
    if e < 1:
        raise DomainError("tensor_power needs e >= 1", precondition="positive_power")
    mono = x.to_monomial()
    acc = mono
    for _ in range(e - 1):
        acc = monomial_mul(acc, mono)
    return VirtualCharacter.from_monomial(x.datum, acc)


def sym_power(x, e):
    """e-th symmetric power by the Newton recursion over Adams operations.

    e * Sym^e = sum_{i=1..e} psi^i * Sym^{e-i}; the division is exact on
    integer coefficients and is asserted.
    """
    x = _coerce_character(x)
    if e < 1:
        raise DomainError("sym_power needs e >= 1", precondition="positive_power")
    base = x.to_monomial()
    for c in base.values():
        if not isinstance(c, int):
            raise DomainError("sym_power needs integer coefficients",
                              precondition="integer_coefficients")
    zero = (0,) * x.datum.rank
    h = [{zero: 1}]
    psi = {i: adams(base, i) for i in range(1, e + 1)}
    for d in range(1, e + 1):
        acc = {}
        for i in range(1, d + 1):
            for w, c in monomial_mul(psi[i], h[d - i]).items():
                val = acc.get(w, 0) + c
                if val:
                    acc[w] = val
                else:
                    acc.pop(w, None)
        out = {}
        for w, c in acc.items():
            if c % d:
                raise InconsistencyError("Newton recursion division not exact")
            out[w] = c // d
        h.append(out)
    return VirtualCharacter.from_monomial(x.datum, h[e])


def _coerce_character(x):
    if isinstance(x, VirtualCharacter):
        return x
    raise DomainError("expected a VirtualCharacter",
                      precondition="character_input")
