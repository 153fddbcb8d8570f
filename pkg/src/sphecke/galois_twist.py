"""Satake parameters over finite fields and eigensystem twists.

A TorusPoint is a homomorphism from the cocharacter lattice to the
multiplicative group of a finite field, given by its values on the
coordinate basis; evaluating irreducible characters at such points realizes
the characters of the representation ring.  Semisimple classes are
represented by Weyl orbits of torus points, so conjugacy comparison is orbit
equality.

The central computation: twisting a Hecke eigensystem by a character eta of
the group multiplies each eigenvalue Psi(c_lam) by q**<eta, lam> (the only
computable reading of the uniformizer's image, since the uniformizer has no
residue in characteristic p), and this is equivalent to multiplying the
Satake parameter by the central torus element eta-hat(q-bar).  Both sides of
that equivalence, and the character identity chaining them, are checked by
``check_twist_theorem``.
"""

from __future__ import annotations

from .automorphic_weights import abs_weight, is_admissible_characterized
from .errors import DomainError, FieldSplitError, InconsistencyError
from .finite_field import FiniteField
from .rep_ring import weight_multiplicities
from .root_data import CharacterOfG, grlex_key
from .satake import SpecializedSatakeMatrices


class TorusPoint:
    """A point of the dual torus over F_{p^k} with nonzero coordinates."""

    __slots__ = ("datum", "coords")

    def __init__(self, datum, coords):
        self.datum = datum
        coords = tuple(coords)
        if len(coords) != datum.rank:
            raise DomainError("coordinate count differs from rank",
                              precondition="matching_dimensions")
        if any(x.is_zero() for x in coords):
            raise DomainError("torus point coordinates must be nonzero",
                              precondition="nonzero_coordinates")
        self.coords = coords

    @property
    def field(self):
        return self.coords[0].field

    def monomial(self, mu):
        """Evaluate the point on a cocharacter: prod coords_i ** mu_i."""
        mu = self.datum._check_vec(mu)
        acc = self.field.one
        for x, e in zip(self.coords, mu):
            if e:
                acc = acc * x ** e
        return acc

    def weyl_orbit(self):
        """Orbit under the Weyl action, as a frozenset of coordinate tuples."""
        gens = self.datum.weyl.generators
        seen = {self.coords}
        stack = [self.coords]
        while stack:
            cur = stack.pop()
            for g in gens:
                img = tuple(_act(cur, g, j, self.field) for j in range(len(cur)))
                if img not in seen:
                    seen.add(img)
                    stack.append(img)
        return frozenset(seen)

    def __eq__(self, other):
        return (isinstance(other, TorusPoint) and self.datum == other.datum
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.datum.cache_key, self.coords))

    def __repr__(self):
        return f"TorusPoint({[list(x.c) for x in self.coords]})"

    def to_json(self):
        f = self.field
        return {"datum": self.datum.name, "p": f.p, "ext_degree": f.k,
                "modulus": list(f.modulus),
                "coords": [x.to_json() for x in self.coords]}


def _act(coords, gen, j, field):
    # (w . s)(e_j) = s(w e_j): exponents are column j of the generator matrix
    acc = field.one
    for a, x in enumerate(coords):
        e = gen[a][j]
        if e:
            acc = acc * x ** e
    return acc


def char_value(s, lam):
    """chi_lam evaluated at the point: sum of mult * s**weight over all
    weights of the irreducible module."""
    lam = s.datum._require_dominant(lam)
    table = weight_multiplicities(s.datum, lam)
    acc = s.field.zero
    for nu, m in table.full_weights().items():
        acc = acc + s.monomial(nu) * m
    return acc


def twist_point(s, eta, t):
    """Multiply the point by the central element eta-hat(t)."""
    if not isinstance(eta, CharacterOfG):
        raise DomainError("eta must be a CharacterOfG",
                          precondition="character_input")
    if len(eta.coords) != len(s.coords):
        raise DomainError("character rank differs from the point's",
                          precondition="matching_dimensions")
    t = s.field(t)
    if t.is_zero():
        raise DomainError("twist scalar must be nonzero",
                          precondition="nonzero_scalar")
    coords = tuple(t ** e * x for e, x in zip(eta.coords, s.coords))
    return TorusPoint(s.datum, coords)


def frobenius_scalar(eta, lam, q_value, field):
    """The eigenvalue scalar q**<eta, lam> in the field."""
    if q_value % field.p == 0:
        raise DomainError("residue cardinality divisible by p",
                          precondition="q_invertible_mod_p")
    if len(eta.coords) != len(lam):
        raise DomainError("character rank differs from the weight's",
                          precondition="matching_dimensions")
    exponent = sum(e * x for e, x in zip(eta.coords, lam))
    return field(q_value) ** exponent


class EigenSystem:
    """Values of a Hecke eigensystem on the c-basis within a cutoff.

    Carries the specialized matrices so the induced character of the
    representation ring can be read off.
    """

    __slots__ = ("matrices", "values")

    def __init__(self, matrices, values):
        if not isinstance(matrices, SpecializedSatakeMatrices):
            raise DomainError("eigensystem needs specialized matrices",
                              precondition="specialized_matrices")
        self.matrices = matrices
        self.values = {}
        for lam, v in values.items():
            lam = matrices.datum._require_dominant(lam)
            if lam not in matrices.exact._index:
                raise DomainError(f"value at {lam} outside the cutoff",
                                  precondition="cutoff_covers_support")
            self.values[lam] = matrices.field(v)
        for lam in matrices.weights:
            if lam not in self.values:
                raise DomainError(f"missing value at {lam}",
                                  precondition="closed_domain")

    @property
    def datum(self):
        return self.matrices.datum

    @property
    def field(self):
        return self.matrices.field

    @property
    def q_value(self):
        return self.matrices.q_value

    def domain(self):
        return self.matrices.weights

    def omega(self, lam):
        """The induced character of the representation ring at chi_lam."""
        lam = self.datum._require_dominant(lam)
        row = self.matrices.inv.get(lam)
        if row is None:
            raise DomainError(f"{lam} outside the cutoff",
                              precondition="cutoff_covers_support")
        acc = self.field.zero
        for mu, entry in row.items():
            acc = acc + entry * self.values[mu]
        return acc

    def same_specialization(self, other):
        return (self.datum == other.datum
                and self.field == other.field
                and self.q_value == other.q_value
                and self.matrices.sqrt_q == other.matrices.sqrt_q
                and self.domain() == other.domain())

    def perturbed(self, lam, delta=1):
        """Copy with the value at ``lam`` shifted by a nonzero constant."""
        vals = dict(self.values)
        vals[tuple(lam)] = vals[tuple(lam)] + self.field(delta)
        return EigenSystem(self.matrices, vals)

    def __eq__(self, other):
        return (isinstance(other, EigenSystem)
                and self.same_specialization(other)
                and self.values == other.values)

    def to_json(self):
        f = self.field
        return {
            "datum": self.datum.name,
            "p": f.p, "ext_degree": f.k, "modulus": list(f.modulus),
            "q": self.q_value, "sqrt_q": self.matrices.sqrt_q.to_json(),
            "values": [{"weight": list(lam), "value": self.values[lam].to_json()}
                       for lam in sorted(self.values, key=grlex_key, reverse=True)],
        }


def eigensystem_from_point(s, matrices, weights=None, extend=False):
    """The eigensystem whose induced character is evaluation at ``s``.

    Reads Psi(c_lam) off the forward matrices; the inverse relation
    omega(chi_lam) = char_value(s, lam) is re-derived and asserted.  When
    ``weights`` asks for values beyond the built cutoff, the matrices are
    rebuilt over the enlarged closure if ``extend`` is set, and a DomainError
    is raised otherwise.
    """
    if s.datum != matrices.datum:
        raise DomainError("point and matrices on different data",
                          precondition="matching_datum")
    if s.field != matrices.field:
        raise DomainError("point and matrices over different fields",
                          precondition="matching_field")
    if weights is not None:
        missing = [tuple(w) for w in weights
                   if tuple(w) not in matrices.exact._index]
        if missing:
            if not extend:
                raise DomainError(
                    f"weights {missing} outside the built cutoff",
                    precondition="cutoff_covers_support")
            from .satake import build_satake_matrices

            exact = build_satake_matrices(
                s.datum, list(matrices.weights) + missing)
            matrices = exact.specialize(matrices.q_value, matrices.sqrt_q)
    charvals = {mu: char_value(s, mu) for mu in matrices.weights}
    values = {}
    for lam in matrices.weights:
        acc = matrices.field.zero
        for mu, entry in matrices.fwd[lam].items():
            acc = acc + entry * charvals[mu]
        values[lam] = acc
    psi = EigenSystem(matrices, values)
    for lam in matrices.weights:
        if psi.omega(lam) != charvals[lam]:
            raise InconsistencyError("eigensystem does not invert to the point")
    return psi


def point_from_eigensystem(psi, check=True):
    """Recover the Weyl orbit of the Satake parameter; gl(n) data only.

    The induced character on the fundamental exterior powers gives the
    elementary symmetric functions of the coordinates; the coordinates are
    then the roots of the resulting monic polynomial, found by exhaustive
    scan.  Raises FieldSplitError (carrying the needed total extension
    degree) when the polynomial does not split, and DomainError when the
    values are not actually multiplicative (``check=True`` verifies the
    recovered point reproduces every value).
    """
    datum = psi.datum
    if not (datum.family and datum.family[0] == "gl"):
        raise DomainError("parameter recovery is implemented for gl(n) only",
                          precondition="gl_datum")
    n = datum.family[1]
    field = psi.field
    elementary = []
    for i in range(1, n + 1):
        fund = (1,) * i + (0,) * (n - i)
        elementary.append(psi.omega(fund))
    # monic polynomial x^n - e1 x^(n-1) + ... + (-1)^n e_n, constant first
    coeffs = [field.zero] * (n + 1)
    coeffs[n] = field.one
    for i, e in enumerate(elementary, start=1):
        coeffs[n - i] = e * ((-1) ** i)
    if coeffs[0].is_zero():
        raise DomainError("zero constant term: parameter coordinates vanish",
                          precondition="nonzero_coordinates")
    roots = []
    remaining = [c for c in coeffs]
    for cand in field.elements():
        if cand.is_zero():
            continue
        while _poly_eval(remaining, cand).is_zero() and len(roots) < n:
            roots.append(cand)
            remaining = _synthetic_divide(remaining, cand)
        if len(roots) == n:
            break
    if len(roots) < n:
        needed = _splitting_degree(coeffs, field)
        raise FieldSplitError(
            "recovery polynomial does not split over F_%d^%d; "
            "total extension degree %d suffices" % (field.p, field.k, needed),
            polynomial=[c.to_json() for c in coeffs],
            recommended_ext_degree=needed)
    roots.sort(key=lambda x: x.sort_key())
    point = TorusPoint(datum, tuple(roots))
    if check:
        recomputed = eigensystem_from_point(point, psi.matrices)
        if recomputed.values != psi.values:
            raise DomainError("values are not the eigensystem of any point",
                              precondition="multiplicative_values")
    return {TorusPoint(datum, c) for c in point.weyl_orbit()}


def _poly_eval(coeffs, x):
    acc = x.field.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _synthetic_divide(coeffs, root):
    """Divide a polynomial (constant-first) by (x - root)."""
    n = len(coeffs) - 1
    out = [root.field.zero] * n
    carry = coeffs[n]
    for i in range(n - 1, -1, -1):
        out[i] = carry
        carry = coeffs[i] + carry * root
    return out


def _splitting_degree(coeffs, field):
    """Total degree over the prime field of the splitting field.

    Distinct-degree analysis of the squarefree part: the splitting degree is
    field.k times the lcm of the irreducible factor degrees.
    """
    f = [c for c in coeffs]
    # squarefree part via gcd with the derivative
    deriv = [field(i) * c for i, c in enumerate(f)][1:]
    g = _ff_poly_gcd(f, deriv, field)
    sqfree, _ = _ff_poly_divmod(f, g, field)
    degs = []
    work = sqfree
    d = 0
    q = field.order
    # x^(q^d) mod work, advanced one Frobenius power at a time
    xq = [field.zero, field.one]
    while _ff_deg(work) > 0:
        d += 1
        xq = _ff_poly_powmod(xq, q, work, field)
        probe = _ff_poly_sub(xq, [field.zero, field.one], field)
        factor = _ff_poly_gcd(work, probe, field)
        if _ff_deg(factor) > 0:
            degs.extend([d] * (_ff_deg(factor) // d))
            work, _ = _ff_poly_divmod(work, factor, field)
            xq = _ff_poly_rem(xq, work, field) if _ff_deg(work) > 0 else xq
        if d > len(coeffs):
            raise InconsistencyError("distinct-degree analysis ran away")
    lcm = 1
    for d in degs:
        lcm = lcm * d // _gcd_int(lcm, d)
    return field.k * lcm


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a


# -- generic polynomial helpers over a FiniteField (constant-first lists) --


def _ff_deg(f):
    i = len(f) - 1
    while i >= 0 and f[i].is_zero():
        i -= 1
    return i


def _ff_trim(f):
    d = _ff_deg(f)
    return f[:d + 1]


def _ff_poly_sub(a, b, field):
    n = max(len(a), len(b))
    a = list(a) + [field.zero] * (n - len(a))
    b = list(b) + [field.zero] * (n - len(b))
    return _ff_trim([x - y for x, y in zip(a, b)])


def _ff_poly_mul(a, b, field):
    if _ff_deg(a) < 0 or _ff_deg(b) < 0:
        return []
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x.is_zero():
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return _ff_trim(out)


def _ff_poly_divmod(a, b, field):
    a = _ff_trim(list(a))
    b = _ff_trim(list(b))
    if _ff_deg(b) < 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = [field.zero] * max(1, len(a) - len(b) + 1)
    inv = b[-1].inverse()
    while _ff_deg(a) >= _ff_deg(b) and _ff_deg(a) >= 0:
        shift = _ff_deg(a) - _ff_deg(b)
        factor = a[_ff_deg(a)] * inv
        q[shift] = factor
        for i, coef in enumerate(b):
            a[shift + i] = a[shift + i] - factor * coef
        a = _ff_trim(a) + [field.zero] * 0
    return _ff_trim(q), _ff_trim(a)


def _ff_poly_rem(a, b, field):
    return _ff_poly_divmod(a, b, field)[1]


def _ff_poly_gcd(a, b, field):
    a, b = _ff_trim(list(a)), _ff_trim(list(b))
    while _ff_deg(b) >= 0:
        a, b = b, _ff_poly_rem(a, b, field)
    if _ff_deg(a) >= 0:
        inv = a[-1].inverse()
        a = [x * inv for x in a]
    return a


def _ff_poly_powmod(base, n, modulus, field):
    acc = [field.one]
    base = _ff_poly_rem(base, modulus, field)
    while n:
        if n & 1:
            acc = _ff_poly_rem(_ff_poly_mul(acc, base, field), modulus, field)
        base = _ff_poly_rem(_ff_poly_mul(base, base, field), modulus, field)
        n >>= 1
    return acc


# ----- the twist check ---------------------------------------------------------


class TwistReport:
    """Outcome of the three-way eigensystem twist verification."""

    __slots__ = ("eta", "eigen_ok", "eigen_failures", "param_ok",
                 "param_reason", "char_identity_ok", "consistent")

    def __init__(self, eta, eigen_ok, eigen_failures, param_ok, param_reason,
                 char_identity_ok):
        self.eta = eta
        self.eigen_ok = eigen_ok
        self.eigen_failures = eigen_failures
        self.param_ok = param_ok
        self.param_reason = param_reason
        self.char_identity_ok = char_identity_ok
        self.consistent = None if param_ok is None else (eigen_ok == param_ok)

    @property
    def all_passed(self):
        return bool(self.eigen_ok and self.param_ok and self.char_identity_ok)

    def to_json(self):
        return {
            "eta": list(self.eta.coords),
            "eigenvalue_relation": {"ok": self.eigen_ok,
                                    "failures": [list(l) for l in self.eigen_failures]},
            "parameter_twist": {"ok": self.param_ok, "reason": self.param_reason},
            "character_identity": {"ok": self.char_identity_ok},
            "consistent": self.consistent,
        }


def check_twist_theorem(psi1, psi2, eta, s1=None, s2=None):
    """Verify the equivalence between the eigenvalue-level twist relation
    and the parameter-level central twist.

    (i)   Psi2(c_lam) = q**<eta,lam> Psi1(c_lam) for every lam in the domain;
    (ii)  the Satake-parameter orbits satisfy orbit(s2) = orbit(s1 twisted by
          eta-hat(q-bar)) -- points are recovered for gl(n) data when not
          supplied;
    (iii) the character identity chi_lam(eta-hat(q-bar) s1) =
          q-bar**<eta,lam> chi_lam(s1) for every lam.

    For genuine eigensystems (i) and (ii) must agree; a disagreement raises
    InconsistencyError.  When the parameter level cannot be decided (non-gl
    datum without supplied points, or a non-splitting recovery polynomial)
    it is reported as None.
    """
    if not psi1.same_specialization(psi2):
        raise DomainError("eigensystems with different specialization data",
                          precondition="matching_specialization")
    if not isinstance(eta, CharacterOfG):
        raise DomainError("eta must be a CharacterOfG",
                          precondition="character_input")
    field = psi1.field
    q_value = psi1.q_value
    qbar = field(q_value)

    failures = []
    for lam in psi1.domain():
        scalar = frobenius_scalar(eta, lam, q_value, field)
        if psi2.values[lam] != scalar * psi1.values[lam]:
            failures.append(lam)
    eigen_ok = not failures

    def resolve(point, psi, label):
        """Returns (orbit, reason, decisive); a side whose values provably
        come from no torus point decides the parameter check negatively."""
        if point is not None:
            expected = eigensystem_from_point(point, psi.matrices)
            if expected.values != psi.values:
                raise DomainError(
                    f"supplied point does not match eigensystem {label}",
                    precondition="point_matches_eigensystem")
            return point.weyl_orbit(), None, False
        try:
            orbit_points = point_from_eigensystem(psi)
        except FieldSplitError as exc:
            return None, f"{label}: {exc}", False
        except DomainError as exc:
            decisive = exc.precondition == "multiplicative_values"
            return None, f"{label}: {exc}", decisive
        some = next(iter(orbit_points))
        return some.weyl_orbit(), None, False

    orbit1, reason1, hard1 = resolve(s1, psi1, "left")
    orbit2, reason2, hard2 = resolve(s2, psi2, "right")

    param_ok = None
    param_reason = None
    rep1 = None
    if orbit1 is not None:
        canonical = min(orbit1, key=lambda cs: tuple(x.sort_key() for x in cs))
        rep1 = TorusPoint(psi1.datum, canonical)
    if orbit1 is not None and orbit2 is not None:
        twisted = twist_point(rep1, eta, qbar)
        param_ok = twisted.weyl_orbit() == orbit2
    elif hard1 or hard2:
        param_ok = False
        param_reason = "; ".join(r for r in (reason1, reason2) if r)
    else:
        param_reason = "; ".join(r for r in (reason1, reason2) if r) or \
            "points unavailable for this datum"

    char_identity_ok = None
    if rep1 is not None:
        char_identity_ok = True
        twisted = twist_point(rep1, eta, qbar)
        for lam in psi1.domain():
            lhs = char_value(twisted, lam)
            rhs = frobenius_scalar(eta, lam, q_value, field) * char_value(rep1, lam)
            if lhs != rhs:
                char_identity_ok = False
                break

    report = TwistReport(eta, eigen_ok, failures, param_ok, param_reason,
                         char_identity_ok)
    if report.consistent is False:
        raise InconsistencyError(
            "eigenvalue-level and parameter-level twist checks disagree")
    return report


# ----- JSON loaders -------------------------------------------------------------


def torus_point_from_json(doc, datum=None):
    """Rebuild a TorusPoint; the datum is looked up by name when not given."""
    from .root_data import builtin

    if datum is None:
        datum = builtin(doc["datum"])
    field = FiniteField(doc["p"], doc.get("ext_degree", 1), doc.get("modulus"))
    coords = tuple(field(c) for c in doc["coords"])
    return TorusPoint(datum, coords)


def eigensystem_from_json(doc, datum=None):
    """Rebuild an EigenSystem, reconstructing its specialized matrices."""
    from .root_data import builtin
    from .satake import build_satake_matrices

    if datum is None:
        datum = builtin(doc["datum"])
    field = FiniteField(doc["p"], doc.get("ext_degree", 1), doc.get("modulus"))
    weights = [tuple(term["weight"]) for term in doc["values"]]
    exact = build_satake_matrices(datum, weights)
    spec = exact.specialize(doc["q"], field(doc["sqrt_q"]))
    values = {tuple(term["weight"]): field(term["value"])
              for term in doc["values"]}
    return EigenSystem(spec, values)


# ----- weight bookkeeping scalars ----------------------------------------------


def theta_twist_character(kappa0, nu):
    """The twist character nu**(|kappa0| / 2) attached to a weight-raising
    operator of admissible weight kappa0."""
    if not isinstance(nu, CharacterOfG):
        raise DomainError("nu must be a CharacterOfG",
                          precondition="character_input")
    if not is_admissible_characterized(kappa0):
        raise DomainError("kappa0 is not admissible",
                          precondition="admissible_weight")
    total = abs_weight(kappa0)
    if total % 2:
        raise DomainError("admissible weights have even total",
                          precondition="even_total_weight")
    return nu.scale(total // 2)


def p_isogeny_scalar(d, kappa0, p):
    """Residue of p**(d |kappa0| / 2): the similitude scalar of an isogeny of
    p-power similitude factor, zero in characteristic p.

    Returns (field element, integer exponent); the exponent carries the
    characteristic-zero statement.
    """
    if d < 1:
        raise DomainError("similitude exponent d must be >= 1",
                          precondition="positive_isogeny_exponent")
    if not is_admissible_characterized(kappa0):
        raise DomainError("kappa0 is not admissible",
                          precondition="admissible_weight")
    total = abs_weight(kappa0)
    exponent = d * (total // 2)
    field = FiniteField(p)
    return field(pow(p, exponent, p)), exponent
