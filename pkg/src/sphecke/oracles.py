"""Independent brute-force routes used to cross-check the main algorithms.

Two deliberately separate implementations live here:

* the full character of an irreducible dual-group module computed by the
  alternating-sum ratio (numerator and denominator as signed monomial sums
  over the Weyl group, divided exactly in the monomial ring), which checks
  the Freudenthal tables without sharing any code path with them;

* the double-coset convolution for rank-two general linear data over a
  local field with prime residue cardinality, computed from explicit
  triangular coset representatives and elementary-divisor classification,
  which checks the transform-transported Hecke multiplication.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, InconsistencyError
from .root_data import grlex_key, _vadd, _vscale, _vsub


def alternating_character(datum, lam):
    """Full weight function of the irreducible module of highest weight
    ``lam`` via exact division of signed Weyl-orbit sums (coordinates are
    doubled internally so the half-integral shift stays integral)."""
    lam = datum._require_dominant(lam)
    rho2 = datum.corho_doubled
    top = _vadd(_vscale(lam, 2), rho2)

    def signed_orbit(center):
        out = {}
        for w, sign in datum.weyl.signed_elements():
            key = datum.weyl.apply(w, center)
            out[key] = out.get(key, 0) + sign
        return {k: v for k, v in out.items() if v}

    numerator = signed_orbit(top)
    denominator = signed_orbit(rho2)
    lead = max(denominator, key=grlex_key)
    if denominator[lead] != 1 or lead != rho2:
        raise InconsistencyError("denominator is not monic at its top term")

    quotient = {}
    steps = 0
    while numerator:
        steps += 1
        if steps > 5_000_000:
            raise InconsistencyError("alternating-sum division ran away")
        t = max(numerator, key=grlex_key)
        coeff = numerator[t]
        shift = _vsub(t, lead)
        quotient[shift] = quotient.get(shift, 0) + coeff
        for mono, c in denominator.items():
            key = _vadd(mono, shift)
            val = numerator.get(key, 0) - coeff * c
            if val:
                numerator[key] = val
            else:
                numerator.pop(key, None)
    out = {}
    for doubled, c in quotient.items():
        if any(x % 2 for x in doubled):
            raise InconsistencyError("odd doubled exponent in the quotient")
        out[tuple(x // 2 for x in doubled)] = c
    return out


def orbit_sum_multiplicities(datum, lam):
    """Dominant-weight multiplicity table from the alternating-sum route."""
    full = alternating_character(datum, lam)
    mults = {}
    for nu, c in full.items():
        if c <= 0:
            raise InconsistencyError("negative weight multiplicity")
        if datum.is_dominant(nu):
            mults[nu] = c
    return mults


def orbit_sum_dimension(datum, lam):
    return sum(alternating_character(datum, lam).values())


# ----- double-coset convolution for rank-two general linear data ---------------


def _valuation(x, q):
    """q-adic valuation of a Fraction or int; None encodes infinity."""
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    num, den = x.numerator, x.denominator
    while num % q == 0:
        num //= q
        v += 1
    while den % q == 0:
        den //= q
        v -= 1
    return v


def _coset_type(m, q):
    """Elementary-divisor type (a, b), a >= b, of a nonsingular 2x2 matrix:
    b the minimum valuation of the entries, a + b the determinant
    valuation."""
    (m11, m12), (m21, m22) = m
    det = m11 * m22 - m12 * m21
    if det == 0:
        raise DomainError("singular matrix has no coset type",
                          precondition="nonsingular_matrix")
    vals = [v for v in (_valuation(m11, q), _valuation(m12, q),
                        _valuation(m21, q), _valuation(m22, q)) if v is not None]
    b = min(vals)
    a = _valuation(det, q) - b
    return (a, b)


def _triangular_reps(q, n):
    """Hermite representatives of the integral left cosets with determinant
    valuation n: [[q^i, u], [0, q^j]] with i + j = n, 0 <= u < q^i."""
    reps = []
    for i in range(n + 1):
        j = n - i
        for u in range(q ** i):
            reps.append(((q ** i, u), (0, q ** j)))
    return reps


def gl2_convolve(lam, mu, q):
    """Structure constants of c_lam * c_mu for rank-two general linear data
    at residue cardinality q (a prime), by direct coset enumeration.

    Returns a map from dominant type nu to the coset count, i.e. the value
    of the convolution at the representative of nu.
    """
    lam, mu = tuple(lam), tuple(mu)
    if len(lam) != 2 or len(mu) != 2 or lam[0] < lam[1] or mu[0] < mu[1]:
        raise DomainError("need dominant weight pairs",
                          precondition="dominant_input")
    if q < 2 or any(q % d == 0 for d in range(2, int(q ** 0.5) + 1)):
        raise DomainError("residue cardinality must be prime here",
                          precondition="prime_residue_cardinality")
    shift = min(lam[1], 0)
    lam0 = (lam[0] - shift, lam[1] - shift)  # translate to integral cosets
    supports = [m for m in _triangular_reps(q, sum(lam0))
                if _coset_type(m, q) == lam0]
    total = sum(lam0) + sum(mu)
    out = {}
    top = lam0[0] + mu[0]
    for a in range((total + 1) // 2, top + 1):
        b = total - a
        if a < b:
            continue
        g = (Fraction(q) ** a, Fraction(0)), (Fraction(0), Fraction(q) ** b)
        count = 0
        for x in supports:
            (x11, x12), (_, x22) = x
            det = Fraction(x11 * x22)
            xinv_g = ((g[0][0] / x11, -Fraction(x12) * g[1][1] / det),
                      (Fraction(0), g[1][1] / x22))
            if _coset_type(xinv_g, q) == mu:
                count += 1
        if count:
            out[(a + shift, b + shift)] = count
    return out
