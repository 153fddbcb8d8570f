"""Level-one modular forms mod p as truncated q-expansions, p >= 5.

Integral bases come from monomials in the classical series E4, E6 and the
discriminant cusp form, with the E6-exponent reduced to 0 or 1 (the square
of E6 is polynomial in the others); reduction mod p keeps those monomials
independent weight by weight.  The theta operator multiplies the n-th
coefficient by n and raises the weight by p + 1; the Hasse invariant is the
constant series 1 in weight p - 1, so multiplying by it is invisible on
q-expansions and the weight filtration is computed by exact linear algebra
over F_p within one residue class of weights mod p - 1.

Identity testing always happens through the Sturm horizon k // 12 + 1 of the
relevant weight; operations that would silently truncate below it raise
instead.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, InconsistencyError
from .finite_field import FiniteField
from .root_data import gl
from .satake import build_satake_matrices

_SERIES_CACHE = {}
_BASIS_CACHE = {}


def sturm_bound(k):
    """Number of leading coefficients that pin down a weight-k form."""
    return k // 12 + 1


class QExpansion:
    """Truncated q-series with a declared weight, over Q or F_p."""

    __slots__ = ("ring", "p", "weight", "coeffs")

    def __init__(self, ring, weight, coeffs, p=None):
        if ring not in ("Q", "Fp"):
            raise DomainError("ring must be 'Q' or 'Fp'", precondition="known_ring")
        if ring == "Fp":
            if p is None:
                raise DomainError("Fp series needs p", precondition="prime_given")
            coeffs = tuple(int(c) % p for c in coeffs)
        else:
            coeffs = tuple(
                c if isinstance(c, (int, Fraction)) else Fraction(c)
                for c in coeffs)
            p = None
        if not coeffs:
            raise DomainError("series needs at least the constant coefficient",
                              precondition="nonempty_series")
        self.ring = ring
        self.p = p
        self.weight = int(weight)
        self.coeffs = coeffs

    @property
    def trunc(self):
        return len(self.coeffs) - 1

    def coefficient(self, n):
        if n > self.trunc:
            raise DomainError(f"coefficient {n} beyond truncation {self.trunc}",
                              precondition="within_truncation")
        return self.coeffs[n]

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def _check_ring(self, other):
        if self.ring != other.ring or self.p != other.p:
            raise DomainError("mixed coefficient rings",
                              precondition="matching_ring")

    def __add__(self, other):
        self._check_ring(other)
        if self.weight != other.weight:
            raise DomainError("sum of forms of different weights",
                              precondition="matching_weight")
        n = min(self.trunc, other.trunc)
        return QExpansion(self.ring, self.weight,
                          [a + b for a, b in zip(self.coeffs[:n + 1],
                                                 other.coeffs[:n + 1])],
                          p=self.p)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return QExpansion(self.ring, self.weight,
                          [c * a for a in self.coeffs], p=self.p)

    def __mul__(self, other):
        self._check_ring(other)
        n = min(self.trunc, other.trunc)
        out = [0] * (n + 1)
        for i, a in enumerate(self.coeffs[:n + 1]):
            if a:
                for j in range(0, n + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        if self.ring == "Fp":
            out = [c % self.p for c in out]
        return QExpansion(self.ring, self.weight + other.weight, out, p=self.p)

    def reduce_mod(self, p):
        if self.ring == "Fp":
            raise DomainError("series already in characteristic p",
                              precondition="rational_input")
        if p < 5:
            raise DomainError("primes 2 and 3 are unsupported",
                              precondition="prime_at_least_5")
        out = []
        for c in self.coeffs:
            c = Fraction(c)
            if c.denominator % p == 0:
                raise DomainError(f"denominator divisible by {p}",
                                  precondition="p_integral_coefficients")
            out.append(c.numerator * pow(c.denominator, -1, p) % p)
        return QExpansion("Fp", self.weight, out, p=p)

    def agrees_with(self, other, through=None):
        """Coefficientwise equality through a horizon (default: the common
        truncation)."""
        self._check_ring(other)
        horizon = min(self.trunc, other.trunc) if through is None else through
        if horizon > self.trunc or horizon > other.trunc:
            raise DomainError("comparison horizon beyond truncation",
                              precondition="within_truncation")
        return self.coeffs[:horizon + 1] == other.coeffs[:horizon + 1]

    def __eq__(self, other):
        return (isinstance(other, QExpansion) and self.ring == other.ring
                and self.p == other.p and self.weight == other.weight
                and self.coeffs == other.coeffs)

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.trunc >= 6 else ""
        ring = f"F{self.p}" if self.ring == "Fp" else "Q"
        return f"QExpansion({ring}, wt={self.weight}, [{head}{tail}], N={self.trunc})"

    def to_json(self):
        doc = {"ring": self.ring, "weight": self.weight,
               "coeffs": [str(c) for c in self.coeffs], "trunc": self.trunc}
        if self.ring == "Fp":
            doc["p"] = self.p
        return doc

    @classmethod
    def from_json(cls, doc):
        coeffs = [Fraction(c) for c in doc["coeffs"]]
        if doc["ring"] == "Fp":
            ints = []
            for c in coeffs:
                if c.denominator != 1:
                    raise DomainError("Fp coefficients must be integers",
                                      precondition="integer_coefficients")
                ints.append(c.numerator)
            return cls("Fp", doc["weight"], ints, p=doc["p"])
        return cls("Q", doc["weight"], coeffs)


# ----- classical series ----------------------------------------------------


def _divisor_power_sums(r, n):
    """[sigma_r(1), ..., sigma_r(n)] by a divisor sieve."""
    out = [0] * (n + 1)
    for d in range(1, n + 1):
        dr = d ** r
        for m in range(d, n + 1, d):
            out[m] += dr
    return out[1:]


def _series(name, n):
    """Integer coefficient list of a named series, cached at the longest
    truncation seen so far."""
    cached = _SERIES_CACHE.get(name)
    if cached is not None and len(cached) >= n + 1:
        return cached[:n + 1]
    if name == "e4":
        coeffs = [1] + [240 * s for s in _divisor_power_sums(3, n)]
    elif name == "e6":
        coeffs = [1] + [-504 * s for s in _divisor_power_sums(5, n)]
    elif name == "delta":
        e4 = _series("e4", n)
        e6 = _series("e6", n)
        cube = _list_mul(_list_mul(e4, e4, n), e4, n)
        square = _list_mul(e6, e6, n)
        coeffs = []
        for a, b in zip(cube, square):
            num = a - b
            if num % 1728:
                raise InconsistencyError("discriminant coefficients not integral")
            coeffs.append(num // 1728)
    else:
        raise DomainError(f"unknown series {name!r}", precondition="known_series")
    _SERIES_CACHE[name] = coeffs
    return coeffs


def _list_mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a[:n + 1]):
        if x:
            for j in range(0, n + 1 - i):
                y = b[j]
                if y:
                    out[i + j] += x * y
    return out


def eisenstein4(n):
    """E4 = 1 + 240 sum sigma_3(m) q^m, truncated at q^n, over Q."""
    return QExpansion("Q", 4, _series("e4", n))


def eisenstein6(n):
    """E6 = 1 - 504 sum sigma_5(m) q^m, truncated at q^n, over Q."""
    return QExpansion("Q", 6, _series("e6", n))


def delta(n):
    """The discriminant cusp form (E4^3 - E6^2) / 1728, truncated at q^n."""
    d = QExpansion("Q", 12, _series("delta", n))
    if d.coeffs[0] != 0 or (n >= 1 and d.coeffs[1] != 1):
        raise InconsistencyError("discriminant normalization failed")
    return d


def _check_prime(p):
    if p < 5:
        raise DomainError("primes 2 and 3 are unsupported",
                          precondition="prime_at_least_5")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise DomainError(f"{p} is not prime", precondition="prime_at_least_5")
        d += 1


def basis_monomials(k):
    """Exponent triples (a, b, c) with 4a + 6b + 12c = k and b in {0, 1}.

    One monomial E4^a E6^b Delta^c per basis element; their count equals the
    dimension of the weight-k space.
    """
    if k < 0 or k % 2:
        return []
    out = []
    for c in range(k // 12 + 1):
        for b in (0, 1):
            rem = k - 12 * c - 6 * b
            if rem >= 0 and rem % 4 == 0:
                out.append((rem // 4, b, c))
    return out


def space_dimension(k):
    return len(basis_monomials(k))


_FP_MONO_CACHE = {}


def _list_mul_mod(a, b, n, p):
    out = [0] * (n + 1)
    for i, x in enumerate(a[:n + 1]):
        if x:
            for j in range(0, n + 1 - i):
                y = b[j]
                if y:
                    out[i + j] += x * y
    return [c % p for c in out]


def _fp_series(name, p, n):
    key = (name, p)
    hit = _FP_MONO_CACHE.get(key)
    if hit is None or len(hit) < n + 1:
        hit = [c % p for c in _series(name, n)]
        _FP_MONO_CACHE[key] = hit
    return hit[:n + 1]


def _fp_monomial(p, a, b, c, n):
    """Coefficients of E4^a E6^b Delta^c mod p, cached at the longest
    truncation seen so far and built by peeling one factor at a time."""
    key = (p, a, b, c)
    hit = _FP_MONO_CACHE.get(key)
    if hit is not None and len(hit) >= n + 1:
        return hit[:n + 1]
    if a == b == c == 0:
        out = [1] + [0] * n
    elif c > 0:
        out = _list_mul_mod(_fp_monomial(p, a, b, c - 1, n),
                            _fp_series("delta", p, n), n, p)
    elif b > 0:
        out = _list_mul_mod(_fp_monomial(p, a, b - 1, c, n),
                            _fp_series("e6", p, n), n, p)
    else:
        out = _list_mul_mod(_fp_monomial(p, a - 1, b, c, n),
                            _fp_series("e4", p, n), n, p)
    _FP_MONO_CACHE[key] = out
    return out


def basis(k, p, n):
    """Reductions mod p of the monomial basis of the weight-k space."""
    _check_prime(p)
    key = (k, p, n)
    hit = _BASIS_CACHE.get(key)
    if hit is not None:
        return hit
    out = tuple(QExpansion("Fp", k, _fp_monomial(p, a, b, c, n), p=p)
                for a, b, c in basis_monomials(k))
    if n >= sturm_bound(k):
        matrix = [list(f.coeffs[:sturm_bound(k) + 1]) for f in out]
        if _fp_rank(matrix, p) != len(out):
            raise InconsistencyError(
                f"weight-{k} monomial basis degenerates mod {p}")
    return _BASIS_CACHE.setdefault(key, out)


def hasse(p, n):
    """The weight p-1 form whose q-expansion is identically 1."""
    _check_prime(p)
    return QExpansion("Fp", p - 1, [1] + [0] * n, p=p)


# ----- operators -------------------------------------------------------------


def theta(f):
    """q d/dq on coefficients; the weight moves up by p + 1."""
    if f.ring != "Fp":
        raise DomainError("theta acts on mod-p series only",
                          precondition="mod_p_input")
    return QExpansion("Fp", f.weight + f.p + 1,
                      [n * c % f.p for n, c in enumerate(f.coeffs)], p=f.p)


def hecke_T(ell, f):
    """The weight-k Hecke operator at a good prime on level-one series:
    b_n = a_{n ell} + ell**(k-1) a_{n/ell}.  Shrinks the truncation by ell."""
    if f.ring != "Fp":
        raise DomainError("Hecke operators act on mod-p series here",
                          precondition="mod_p_input")
    if ell == f.p:
        raise DomainError("the residue characteristic is a bad place",
                          precondition="good_prime")
    if ell < 2 or any(ell % d == 0 for d in range(2, int(ell ** 0.5) + 1)):
        raise DomainError(f"{ell} is not prime", precondition="prime_operator")
    n_out = f.trunc // ell
    if n_out < 1:
        raise DomainError("source truncation too short for this operator",
                          precondition="sufficient_truncation")
    scale = pow(ell, f.weight - 1, f.p)
    out = []
    for n in range(n_out + 1):
        val = f.coeffs[n * ell]
        if n % ell == 0:
            val += scale * f.coeffs[n // ell]
        out.append(val % f.p)
    return QExpansion("Fp", f.weight, out, p=f.p)


def commutation_check(f, ell, horizon=None):
    """Whether T_ell theta f = ell theta T_ell f coefficientwise.

    The theta image carries its raised weight into the Hecke formula.  The
    comparison horizon defaults to everything available after one Hecke
    step; an explicit horizon must fit within it.
    """
    lhs = hecke_T(ell, theta(f))
    rhs = theta(hecke_T(ell, f)).scale(ell)
    rhs = QExpansion("Fp", lhs.weight, rhs.coeffs, p=f.p)
    return lhs.agrees_with(rhs, through=horizon)


def filtration(f):
    """Least weight whose form space contains this q-expansion.

    Scans the weights congruent to the labeled one mod p - 1 from the bottom
    and tests span membership by Gaussian elimination over F_p through the
    Sturm horizon of the labeled weight.  The input must be the reduction of
    a genuine form of its labeled weight.
    """
    if f.ring != "Fp":
        raise DomainError("filtration is defined for mod-p series",
                          precondition="mod_p_input")
    p, k = f.p, f.weight
    horizon = sturm_bound(k)
    if f.trunc < horizon:
        raise DomainError(
            f"truncation {f.trunc} below the Sturm horizon {horizon}",
            precondition="sufficient_truncation")
    target = list(f.coeffs[:horizon + 1])
    residue = k % (p - 1)
    for k_prime in range(residue, k + 1, p - 1):
        forms = basis(k_prime, p, horizon)
        if not forms and any(target):
            continue
        rows = [list(g.coeffs[:horizon + 1]) for g in forms]
        if _fp_in_span(rows, target, p):
            return k_prime
    raise InconsistencyError(
        "expansion not in its own weight space; the input is not the "
        "reduction of a form of its labeled weight")


def theta_cycle(f, iterations):
    """Filtrations of theta^i f for i = 1..iterations.

    Coefficientwise theta^p = theta, so the filtration sequence is periodic
    with period dividing p - 1 from the start; that periodicity is asserted.
    Returns an empty list when theta kills f.
    """
    if f.ring != "Fp":
        raise DomainError("theta cycles are defined for mod-p series",
                          precondition="mod_p_input")
    p = f.p
    if iterations < p:
        raise DomainError("need at least p iterations to see the cycle",
                          precondition="iterations_at_least_p")
    top_weight = f.weight + iterations * (p + 1)
    if f.trunc < sturm_bound(top_weight):
        raise DomainError(
            f"truncation {f.trunc} below the final Sturm horizon "
            f"{sturm_bound(top_weight)}",
            precondition="sufficient_truncation")
    out = []
    g = f
    for _ in range(iterations):
        g = theta(g)
        if g.is_zero():
            return []
        out.append(filtration(g))
    for i in range(len(out) - (p - 1)):
        if out[i] != out[i + p - 1]:
            raise InconsistencyError("theta-cycle periodicity failed")
    return out


def eigen_twist_check(f, ells, ext_degree=2):
    """Eigenvalue-level twist verification for a normalized eigenform.

    Checks that the theta image is again an eigenform with eigenvalue
    ell * a_ell for each good prime, then packages both eigensystems as
    Satake data over F_{p^ext_degree} with residue cardinality ell and runs
    the full parameter-level twist check with eta the determinant.
    """
    from .galois_twist import check_twist_theorem

    if f.ring != "Fp":
        raise DomainError("input must be a mod-p series", precondition="mod_p_input")
    p, k = f.p, f.weight
    tf = theta(f)
    if tf.is_zero():
        # coefficients supported on multiples of p; nothing left to twist
        return {"theta_kills": True, "checks": []}
    if f.trunc < 1 or f.coeffs[1] != 1:
        raise DomainError("eigenform must be normalized (a_1 = 1)",
                          precondition="normalized_eigenform")

    datum = gl(2)
    det = datum.character("det")
    field = FiniteField(p, ext_degree)
    matrices = build_satake_matrices(datum, [(2, 0), (1, 0)])
    results = []
    for ell in ells:
        horizon = sturm_bound(k + p + 1)
        if f.trunc < ell * horizon:
            raise DomainError(
                f"truncation {f.trunc} below {ell} * {horizon}",
                precondition="sufficient_truncation")
        a_ell = f.coeffs[ell]
        if not hecke_T(ell, f).agrees_with(f.scale(a_ell), through=horizon):
            raise DomainError("input is not an eigenform at %d" % ell,
                              precondition="eigenform_input")
        expected = (ell * a_ell) % p
        ok_eigen = hecke_T(ell, tf).agrees_with(tf.scale(expected),
                                                through=horizon)
        spec = matrices.specialize(ell, _canonical_sqrt(field, ell))
        psi1 = _gl2_eigensystem(spec, a_ell, k)
        psi2 = _gl2_eigensystem(spec, expected, k + p + 1)
        report = check_twist_theorem(psi1, psi2, det)
        results.append({
            "ell": ell,
            "theta_eigenvalue": expected,
            "eigenvalue_ok": ok_eigen,
            "twist": report,
        })
    return {"theta_kills": False, "checks": results}


def _canonical_sqrt(field, value):
    root = field.sqrt(field(value))
    if root is None:
        raise DomainError(f"{value} has no square root in the field",
                          precondition="square_root_exists")
    return root


def _gl2_eigensystem(spec_matrices, a_ell, weight):
    """Build the rank-two eigensystem with the given Hecke eigenvalue and
    central character ell**(weight - 2), by locating its Satake parameter
    over the working field."""
    from .galois_twist import TorusPoint, eigensystem_from_point

    field = spec_matrices.field
    sqrt_q = spec_matrices.sqrt_q
    trace = field(a_ell) / sqrt_q
    norm = field(spec_matrices.q_value) ** (weight - 2)
    roots = [x for x in field.elements()
             if not x.is_zero() and (x * x - trace * x + norm).is_zero()]
    if not roots:
        raise InconsistencyError("quadratic for the Satake parameter did not "
                                 "split; enlarge the extension degree")
    alpha = roots[0]
    beta = trace - alpha
    point = TorusPoint(spec_matrices.datum, (alpha, beta))
    return eigensystem_from_point(point, spec_matrices)


# ----- linear algebra over F_p ------------------------------------------------


def _fp_rank(rows, p):
    rows = [list(r) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                factor = rows[i][col]
                rows[i] = [(x - factor * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _fp_in_span(rows, target, p):
    if not rows:
        return not any(x % p for x in target)
    return _fp_rank(rows, p) == _fp_rank(rows + [target], p)
