"""The spherical Hecke algebra and the Satake transform, exactly.

Basis functions c_lam are indexed by dominant cocharacters; coefficients live
in Z[v, v**-1] with v**2 = q, the residue cardinality.  The transform and its
inverse are triangular with respect to the dominance order:

* inverse direction: S**-1(chi_lam) = v**(-2<rho,lam>) * sum_{mu <= lam}
  d_lam(mu) c_mu, with d_lam(mu) the degree reversal of the Lusztig q-analog
  K_{lam,mu}(q) scaled by v**(2<rho,lam-mu>);
* forward direction: obtained from the inverse by exact unitriangular
  inversion.

The q-analogs come from the q-graded Kostant partition count over the
positive coroots, alternating-summed over the Weyl group.  The inverse
matrix is built first because the partition counts are directly enumerable;
both directions are asserted unitriangular and mutually inverse at build
time, and again after every mod-p specialization.
"""

from __future__ import annotations

import threading

from .errors import DomainError, InconsistencyError
from .laurent import LaurentV
from .rep_ring import VirtualCharacter
from .root_data import grlex_key, _vadd, _vscale, _vsub

_MATRIX_CACHE = {}
_MATRIX_LOCK = threading.Lock()


# ----- q-graded Kostant partition count --------------------------------------


def q_kostant(datum, beta, graded=True):
    """Count expressions of ``beta`` as nonnegative sums of positive coroots.

    With ``graded`` the count is weighted by q**(number of parts) and
    returned as a LaurentV with even exponents; otherwise the plain integer
    count (the value at q = 1) is returned.
    """
    beta = datum._check_vec(beta)
    poly = _q_kostant_poly(datum, beta)
    if graded:
        return LaurentV.from_q(poly)
    return sum(poly.values())


def _q_kostant_poly(datum, beta):
    cache = datum.__dict__.setdefault("_kostant_cache", {})
    order = datum.positive_coroots
    heights = datum.__dict__.get("_coroot_heights")
    if heights is None:
        heights = tuple(sum(datum.coroot_coefficients(g)) for g in order)
        datum.__dict__["_coroot_heights"] = heights

    def rec(vec, idx):
        if all(x == 0 for x in vec):
            return {0: 1}
        if idx == len(order):
            return {}
        key = (vec, idx)
        hit = cache.get(key)
        if hit is not None:
            return hit
        coeffs = datum.coroot_coefficients(vec)
        if coeffs is None or any(c.denominator != 1 for c in coeffs) \
                or any(c < 0 for c in coeffs):
            # positive coroots have nonnegative simple-coroot coordinates,
            # so no nonnegative combination reaches this vector
            cache[key] = {}
            return {}
        height = sum(coeffs)
        out = {}
        gamma = order[idx]
        # k bounded by the height functional: each part costs >= 1.
        max_k = int(height // heights[idx])
        cur = vec
        for k in range(0, max_k + 1):
            sub = rec(cur, idx + 1)
            for e, c in sub.items():
                out[e + k] = out.get(e + k, 0) + c
            cur = _vsub(cur, gamma)
        out = {e: c for e, c in out.items() if c}
        cache[key] = out
        return out

    return rec(beta, 0)


def lusztig_q_analog(datum, lam, mu):
    """Alternating Weyl sum of q-Kostant counts; a polynomial in q with
    leading normalization K_{lam,lam} = 1."""
    lam = datum._require_dominant(lam)
    mu = datum._require_dominant(mu)
    if not datum.leq(mu, lam):
        raise DomainError(f"{mu} is not below {lam} in dominance",
                          precondition="dominance_comparable")
    cache = datum.__dict__.setdefault("_lusztig_cache", {})
    key = (lam, mu)
    hit = cache.get(key)
    if hit is not None:
        return hit
    rho2 = datum.corho_doubled
    top2 = _vadd(_vscale(lam, 2), rho2)
    bot2 = _vadd(_vscale(mu, 2), rho2)
    acc = {}
    for w, sign in datum.weyl.signed_elements():
        shifted = _vsub(datum.weyl.apply(w, top2), bot2)
        if any(x % 2 for x in shifted):
            raise InconsistencyError("odd coordinate in shifted Weyl sum")
        beta = tuple(x // 2 for x in shifted)
        for e, c in _q_kostant_poly(datum, beta).items():
            val = acc.get(e, 0) + sign * c
            if val:
                acc[e] = val
            else:
                acc.pop(e, None)
    poly = LaurentV.from_q(acc)
    cache[key] = poly
    return poly


# ----- Hecke elements ---------------------------------------------------------


def _coerce_coeff(c):
    if isinstance(c, int):
        return LaurentV({0: c})
    return c


class HeckeElement:
    """Finite combination of double-coset basis functions c_lam.

    Coefficients are LaurentV by default; after specialization they are
    finite-field elements.  Keys must be dominant.
    """

    __slots__ = ("datum", "terms")

    def __init__(self, datum, terms=None, coerce=True):
        self.datum = datum
        self.terms = {}
        for lam, c in (terms or {}).items():
            if coerce:
                c = _coerce_coeff(c)
            if not (c == 0):
                self.terms[datum._require_dominant(lam)] = c

    @classmethod
    def basis(cls, datum, lam, coeff=1):
        return cls(datum, {tuple(lam): coeff})

    @classmethod
    def unit(cls, datum):
        return cls(datum, {(0,) * datum.rank: 1})

    def _check_same(self, other):
        if self.datum != other.datum:
            raise DomainError("elements live on different root data",
                              precondition="matching_datum")

    def __add__(self, other):
        self._check_same(other)
        out = dict(self.terms)
        for lam, c in other.terms.items():
            val = out.get(lam, 0) + c
            if val == 0:
                out.pop(lam, None)
            else:
                out[lam] = val
        return HeckeElement(self.datum, out, coerce=False)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = _coerce_coeff(c)
        return HeckeElement(self.datum,
                            {lam: v * c for lam, v in self.terms.items()},
                            coerce=False)

    def __mul__(self, other):
        return hecke_multiply(self, other)

    def support(self):
        return tuple(sorted(self.terms, key=grlex_key, reverse=True))

    def __eq__(self, other):
        return (isinstance(other, HeckeElement)
                and self.datum == other.datum and self.terms == other.terms)

    def __repr__(self):
        body = ", ".join(f"c{list(lam)}: {c}" for lam, c in
                         sorted(self.terms.items(),
                                key=lambda kv: grlex_key(kv[0]), reverse=True))
        return f"HeckeElement({{{body}}})"

    def to_json(self):
        terms = []
        for lam in self.support():
            c = self.terms[lam]
            if not isinstance(c, LaurentV):
                raise DomainError("only exact (Laurent) elements serialize",
                                  precondition="exact_coefficients")
            terms.append({"weight": list(lam), "coeff": c.to_json()})
        return {"datum": self.datum.name, "terms": terms}

    @classmethod
    def from_json(cls, datum, doc):
        terms = {}
        for term in doc.get("terms", []):
            terms[tuple(term["weight"])] = LaurentV.from_json(term["coeff"])
        return cls(datum, terms, coerce=False)


# ----- Satake matrices --------------------------------------------------------


class SatakeMatrices:
    """Exact triangular matrices of the transform over a finite cutoff.

    ``weights`` is the dominance-downward closure of the requested cutoff in
    descending graded-lex order.  ``inv[lam][mu]`` holds the coefficient of
    c_mu in S**-1(chi_lam); ``fwd[lam][mu]`` the coefficient of chi_mu in
    S(c_lam).
    """

    def __init__(self, datum, cutoff):
        self.datum = datum
        closure = set()
        for lam in cutoff:
            closure.update(datum.dominant_weights_below(lam))
        self.weights = tuple(sorted(closure, key=grlex_key, reverse=True))
        self._index = {w: i for i, w in enumerate(self.weights)}
        self.below = {lam: tuple(mu for mu in datum.dominant_weights_below(lam)
                                 if mu in closure)
                      for lam in self.weights}
        self.inv = {}
        self.fwd = {}
        self._build()

    # -- construction --

    def _build(self):
        datum = self.datum
        for lam in self.weights:
            row = {}
            # rho_pairing_doubled already returns the v-exponent 2<rho, .>
            rp_lam = datum.rho_pairing_doubled(lam)
            for mu in self.below[lam]:
                kq = lusztig_q_analog(datum, lam, mu)
                d_entry = kq.q_reverse().shift(rp_lam - datum.rho_pairing_doubled(mu))
                if not d_entry.is_q_polynomial():
                    raise InconsistencyError(
                        f"reversed q-analog at ({lam},{mu}) is not in Z[q]")
                row[mu] = d_entry.shift(-rp_lam)
            if not (row[lam] == LaurentV.v_power(-rp_lam)):
                raise InconsistencyError("inverse diagonal not unitriangular")
            self.inv[lam] = row
        # invert the unitriangular-with-monomial-diagonal system
        for lam in self.weights:
            row = {}
            order = sorted(self.below[lam], key=grlex_key, reverse=True)
            for nu in order:
                if nu == lam:
                    # fwd[lam][lam] * inv[lam][lam] = 1
                    row[lam] = _monomial_inverse(self.inv[lam][lam])
                    continue
                acc = LaurentV.zero()
                for mu in order:
                    if mu == nu or mu not in row:
                        continue
                    inv_mu = self.inv[mu].get(nu)
                    if inv_mu is not None:
                        acc = acc + row[mu] * inv_mu
                row[nu] = (-acc) * _monomial_inverse(self.inv[nu][nu])
            self.fwd[lam] = row
        self._assert_inverse()

    def _assert_inverse(self):
        for lam in self.weights:
            for nu in self.below[lam]:
                acc = LaurentV.zero()
                for mu in self.below[lam]:
                    f = self.fwd[lam].get(mu)
                    i = self.inv.get(mu, {}).get(nu)
                    if f is not None and i is not None:
                        acc = acc + f * i
                expected = 1 if nu == lam else 0
                if not (acc == expected):
                    raise InconsistencyError(
                        f"matrix inversion failed at ({lam}, {nu})")

    # -- inspection --

    def covers(self, weights):
        return all(tuple(w) in self._index for w in weights)

    def d_value(self, lam, mu):
        """The normalized inverse-direction entry d_lam(mu) in Z[q]."""
        entry = self.inv[tuple(lam)][tuple(mu)]
        return entry.shift(self.datum.rho_pairing_doubled(tuple(lam)))

    def b_value(self, lam, mu):
        """The normalized forward-direction entry b_lam(mu)."""
        lam, mu = tuple(lam), tuple(mu)
        entry = self.fwd[lam][mu]
        return entry.shift(-self.datum.rho_pairing_doubled(mu))

    def constancy_report(self):
        """Entries whose normalized value is not a constant integer.

        The transform matrices are often quoted with constant coefficients;
        exact computation yields genuine q-polynomials in general, so the
        non-constant entries are reported rather than coerced.
        """
        out = {"b": [], "d": []}
        for lam in self.weights:
            for mu in self.below[lam]:
                if not self.d_value(lam, mu).is_constant():
                    out["d"].append((lam, mu))
                if not self.b_value(lam, mu).is_constant():
                    out["b"].append((lam, mu))
        return out

    # -- transform --

    def _require_cover(self, weights, what):
        missing = [w for w in weights if tuple(w) not in self._index]
        if missing:
            raise DomainError(
                f"{what} support {missing} outside the built cutoff",
                precondition="cutoff_covers_support")

    def satake(self, h):
        """Image of a Hecke element in the character ring."""
        if h.datum != self.datum:
            raise DomainError("element and matrices on different data",
                              precondition="matching_datum")
        self._require_cover(h.terms, "element")
        out = {}
        for lam, c in h.terms.items():
            for mu, entry in self.fwd[lam].items():
                val = out.get(mu, 0) + c * entry
                if val == 0:
                    out.pop(mu, None)
                else:
                    out[mu] = val
        return VirtualCharacter(self.datum, out)

    def satake_inverse(self, x):
        """Preimage of a virtual character under the transform."""
        if x.datum != self.datum:
            raise DomainError("character and matrices on different data",
                              precondition="matching_datum")
        self._require_cover(x.coeffs, "character")
        out = {}
        for lam, c in x.coeffs.items():
            for mu, entry in self.inv[lam].items():
                val = out.get(mu, 0) + c * entry
                if val == 0:
                    out.pop(mu, None)
                else:
                    out[mu] = val
        return HeckeElement(self.datum, out, coerce=False)

    def specialize(self, q_value, sqrt_q):
        return SpecializedSatakeMatrices(self, q_value, sqrt_q)


def _monomial_inverse(x):
    mono = x.monomial()
    if mono is None or mono[1] not in (1, -1):
        raise InconsistencyError("diagonal entry is not a unit monomial")
    e, v = mono
    return LaurentV({-e: v})


class SpecializedSatakeMatrices:
    """Satake matrices after substituting a field element for v."""

    def __init__(self, exact, q_value, sqrt_q):
        field = sqrt_q.field
        if q_value % field.p == 0:
            raise DomainError("residue cardinality divisible by p",
                              precondition="q_invertible_mod_p")
        if not (sqrt_q * sqrt_q == field(q_value)):
            raise DomainError("sqrt_q**2 does not equal q in the field",
                              precondition="square_root_consistent")
        self.exact = exact
        self.datum = exact.datum
        self.field = field
        self.q_value = q_value
        self.sqrt_q = sqrt_q
        self.weights = exact.weights
        self.below = exact.below
        self.inv = {lam: {mu: entry.substitute(sqrt_q)
                          for mu, entry in row.items()}
                    for lam, row in exact.inv.items()}
        self.fwd = {lam: {mu: entry.substitute(sqrt_q)
                          for mu, entry in row.items()}
                    for lam, row in exact.fwd.items()}
        self._assert_inverse()

    def _assert_inverse(self):
        zero, one = self.field.zero, self.field.one
        for lam in self.weights:
            for nu in self.below[lam]:
                acc = zero
                for mu in self.below[lam]:
                    f = self.fwd[lam].get(mu)
                    i = self.inv.get(mu, {}).get(nu)
                    if f is not None and i is not None:
                        acc = acc + f * i
                expected = one if nu == lam else zero
                if acc != expected:
                    raise InconsistencyError(
                        "specialized matrices are not mutually inverse")

    def covers(self, weights):
        return self.exact.covers(weights)

    def to_field(self, c):
        """Coerce an exact (Laurent / integer) coefficient into the field."""
        if isinstance(c, LaurentV):
            return c.substitute(self.sqrt_q)
        return self.field(c) if isinstance(c, int) else c

    def satake(self, h):
        if h.datum != self.datum:
            raise DomainError("element and matrices on different data",
                              precondition="matching_datum")
        self.exact._require_cover(h.terms, "element")
        out = {}
        for lam, c in h.terms.items():
            c = self.to_field(c)
            for mu, entry in self.fwd[lam].items():
                val = out.get(mu, self.field.zero) + c * entry
                out[mu] = val
        return VirtualCharacter(self.datum,
                                {k: v for k, v in out.items() if v != self.field.zero})

    def satake_inverse(self, x):
        if x.datum != self.datum:
            raise DomainError("character and matrices on different data",
                              precondition="matching_datum")
        self.exact._require_cover(x.coeffs, "character")
        out = {}
        for lam, c in x.coeffs.items():
            c = self.to_field(c)
            for mu, entry in self.inv[lam].items():
                val = out.get(mu, self.field.zero) + c * entry
                out[mu] = val
        return HeckeElement(self.datum,
                            {k: v for k, v in out.items() if v != self.field.zero},
                            coerce=False)


# ----- module-level convenience ------------------------------------------------


def build_satake_matrices(datum, cutoff):
    """Build (or fetch cached) exact matrices for a cutoff set of weights.

    The cache key is the downward closure, so cutoffs with the same closure
    share one instance.
    """
    closure = set()
    for w in cutoff:
        closure.update(datum.dominant_weights_below(tuple(w)))
    key = (datum.cache_key, frozenset(closure))
    with _MATRIX_LOCK:
        hit = _MATRIX_CACHE.get(key)
    if hit is not None:
        return hit
    built = SatakeMatrices(datum, closure)
    with _MATRIX_LOCK:
        return _MATRIX_CACHE.setdefault(key, built)


def satake(h, matrices=None):
    """Satake transform of a Hecke element (auto-building matrices)."""
    if matrices is None:
        matrices = build_satake_matrices(h.datum, h.support())
    return matrices.satake(h)


def satake_inverse(x, matrices=None):
    """Inverse transform of a virtual character (auto-building matrices)."""
    if matrices is None:
        matrices = build_satake_matrices(x.datum, x.support())
    return matrices.satake_inverse(x)


def hecke_multiply(h1, h2):
    """Convolution product, transported through the transform.

    The transform is a ring isomorphism, so the product is computed as
    S**-1(S(h1) * S(h2)); the cutoff is extended to cover all pairwise sums
    of the two supports.
    """
    if h1.datum != h2.datum:
        raise DomainError("elements live on different root data",
                          precondition="matching_datum")
    cutoff = set(h1.support()) | set(h2.support())
    for a in h1.terms:
        for b in h2.terms:
            cutoff.add(_vadd(a, b))
    matrices = build_satake_matrices(h1.datum, cutoff)
    prod = matrices.satake(h1) * matrices.satake(h2)
    return matrices.satake_inverse(prod)


def specialize_mod_p(obj, q_value, sqrt_q):
    """Substitute v -> sqrt_q throughout a HeckeElement or SatakeMatrices."""
    field = sqrt_q.field
    if q_value % field.p == 0:
        raise DomainError("residue cardinality divisible by p",
                          precondition="q_invertible_mod_p")
    if not (sqrt_q * sqrt_q == field(q_value)):
        raise DomainError("sqrt_q**2 does not equal q in the field",
                          precondition="square_root_consistent")
    if isinstance(obj, SatakeMatrices):
        return obj.specialize(q_value, sqrt_q)
    if isinstance(obj, HeckeElement):
        terms = {lam: c.substitute(sqrt_q) for lam, c in obj.terms.items()}
        return HeckeElement(obj.datum, terms, coerce=False)
    raise DomainError("cannot specialize this object",
                      precondition="specializable_object")
