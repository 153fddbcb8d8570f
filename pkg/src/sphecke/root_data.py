"""Root data for split reductive groups and dominant-weight combinatorics.

A RootDatum fixes integer coordinates on the (co)character lattices of a
maximal torus: simple roots live in the character lattice, simple coroots in
the cocharacter lattice, and the pairing is the dot product.  Weights and
cocharacters are plain integer tuples throughout; all operations are pure
functions and every object is immutable after construction, so instances can
be shared freely across threads.

Conventions for the built-in constructors:

* ``gl(n)``: rank n, simple roots and coroots e_i - e_{i+1}, determinant
  character (1, ..., 1).
* ``gsp(2n)``: rank n + 1 with coordinates (eps_0; eps_1, ..., eps_n), simple
  roots eps_i - eps_{i+1} (1 <= i < n) and 2 eps_n - eps_0, matching coroots
  e_i - e_{i+1} and e_n, similitude character nu = eps_0.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import cached_property

from .errors import DimensionError, DomainError, ParseError, ResourceBoundError

#: Guard against runaway closure on malformed input data.
WEYL_ORDER_BOUND = 100_000


def grlex_key(vec):
    """Graded-lexicographic sort key (total coordinate sum, then lex)."""
    return (sum(vec), vec)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _vscale(a, c):
    return tuple(c * x for x in a)


def _mat_apply(m, v):
    return tuple(_dot(row, v) for row in m)


def _mat_mul(a, b):
    n = len(a)
    cols = tuple(zip(*b))
    return tuple(tuple(_dot(a[i], cols[j]) for j in range(n)) for i in range(n))


def _mat_transpose(m):
    return tuple(zip(*m))


def _identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _det(m):
    """Integer determinant by fraction-free Gaussian elimination."""
    n = len(m)
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def solve_columns(cols, target):
    """Solve sum_j x_j cols[j] = target exactly over the rationals.

    ``cols`` must be linearly independent integer vectors.  Returns a tuple
    of Fractions, or None if the system is inconsistent.
    """
    s = len(cols)
    r = len(target)
    aug = [[Fraction(cols[j][i]) for j in range(s)] + [Fraction(target[i])]
           for i in range(r)]
    row = 0
    pivot_rows = []
    for col in range(s):
        piv = next((i for i in range(row, r) if aug[i][col] != 0), None)
        if piv is None:
            raise InconsistencyColumns(col)
        aug[row], aug[piv] = aug[piv], aug[row]
        scale = aug[row][col]
        aug[row] = [x / scale for x in aug[row]]
        for i in range(r):
            if i != row and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[row])]
        pivot_rows.append(row)
        row += 1
    for i in range(row, r):
        if aug[i][s] != 0:
            return None
    return tuple(aug[i][s] for i in pivot_rows)


class InconsistencyColumns(Exception):
    """Raised by solve_columns when the columns are linearly dependent."""


class CharacterOfG:
    """A character of the whole group in torus coordinates.

    Such a character kills every coroot, which is exactly the validation
    RootDatum.character_of performs; do not construct directly from raw
    user input.
    """

    __slots__ = ("coords", "name")

    def __init__(self, coords, name="character"):
        self.coords = tuple(coords)
        self.name = name

    def scale(self, m):
        return CharacterOfG(_vscale(self.coords, m), f"{self.name}^{m}")

    def __eq__(self, other):
        return isinstance(other, CharacterOfG) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"CharacterOfG({self.name}={list(self.coords)})"


class WeylGroup:
    """Finite Weyl group as integer matrices acting on cocharacters."""

    def __init__(self, generators):
        self.generators = tuple(generators)
        elements = {_identity(len(self.generators[0]))}
        frontier = list(elements)
        while frontier:
            nxt = []
            for m in frontier:
                for g in self.generators:
                    prod = _mat_mul(g, m)
                    if prod not in elements:
                        elements.add(prod)
                        nxt.append(prod)
            if len(elements) > WEYL_ORDER_BOUND:
                raise ResourceBoundError(
                    "Weyl closure exceeded %d elements; datum is probably "
                    "not of finite type" % WEYL_ORDER_BOUND)
            frontier = nxt
        self.elements = tuple(sorted(elements))
        self._signs = tuple(_det(m) for m in self.elements)

    @property
    def order(self):
        return len(self.elements)

    def signed_elements(self):
        """Pairs (matrix, determinant sign), in a fixed order."""
        return tuple(zip(self.elements, self._signs))

    def apply(self, m, v):
        return _mat_apply(m, v)


class RootDatum:
    """Based root datum in fixed coordinates.

    Construction validates the Cartan condition pairing(alpha_i, alpha_j^v)
    = 2 (i = j) / <= 0 (i != j), linear independence of the simple roots and
    of the simple coroots, and that every simple coroot is positive for the
    graded-lexicographic order (the deterministic total refinement of
    dominance used throughout; data in other coordinate conventions must be
    translated, not guessed at).
    """

    def __init__(self, rank, simple_roots, simple_coroots, name="custom",
                 characters=None, family=None):
        if rank < 1:
            raise DomainError("rank must be >= 1", precondition="rank_positive")
        self.rank = int(rank)
        self.name = str(name)
        self.simple_roots = tuple(tuple(int(x) for x in a) for a in simple_roots)
        self.simple_coroots = tuple(tuple(int(x) for x in a) for a in simple_coroots)
        self.family = family
        if len(self.simple_roots) != len(self.simple_coroots):
            raise DomainError("need equally many simple roots and coroots",
                              precondition="matching_root_coroot_count")
        if len(self.simple_roots) > self.rank:
            raise DomainError("more simple roots than the rank allows",
                              precondition="root_count_at_most_rank")
        for vec in self.simple_roots + self.simple_coroots:
            if len(vec) != self.rank:
                raise DimensionError("root/coroot length differs from rank")
        for i, alpha in enumerate(self.simple_roots):
            for j, cov in enumerate(self.simple_coroots):
                val = _dot(alpha, cov)
                if i == j and val != 2:
                    raise DomainError(
                        f"pairing(alpha_{i}, alpha_{i}^v) = {val}, expected 2",
                        precondition="cartan_diagonal")
                if i != j and val > 0:
                    raise DomainError(
                        f"pairing(alpha_{i}, alpha_{j}^v) = {val} > 0",
                        precondition="cartan_off_diagonal")
        self._check_independent(self.simple_coroots, "coroots")
        if self.simple_roots:
            self._check_independent(self.simple_roots, "roots")
        for cov in self.simple_coroots:
            if grlex_key(cov) <= grlex_key((0,) * self.rank):
                raise DomainError(
                    "simple coroot %r is not graded-lex positive; translate "
                    "the datum to a supported coordinate convention" % (cov,),
                    precondition="coroots_grlex_positive")
        self.characters = {}
        for cname, coords in (characters or {}).items():
            self.characters[cname] = self.character_of(coords, name=cname)
        # Per-instance caches; insert-if-absent semantics keep them safe
        # for concurrent readers.
        self._below_cache = {}
        self._leq_cache = {}
        self._domrep_cache = {}

    def _check_independent(self, vecs, label):
        try:
            solve_columns(vecs, (0,) * self.rank)
        except InconsistencyColumns:
            raise DomainError(f"simple {label} are linearly dependent",
                              precondition=f"{label}_independent") from None

    # ----- basic pairing and dominance -------------------------------------

    def pairing(self, chi, mu):
        """Dot product of a character vector with a cocharacter vector."""
        chi = getattr(chi, "coords", chi)
        if len(chi) != len(mu):
            raise DimensionError(
                f"pairing of vectors of lengths {len(chi)} and {len(mu)}")
        return _dot(chi, mu)

    def _check_vec(self, mu):
        if len(mu) != self.rank:
            raise DimensionError(
                f"vector of length {len(mu)} in a rank-{self.rank} datum")
        return tuple(int(x) for x in mu)

    def is_dominant(self, mu):
        mu = self._check_vec(mu)
        return all(_dot(alpha, mu) >= 0 for alpha in self.simple_roots)

    def _require_dominant(self, mu, role="weight"):
        mu = self._check_vec(mu)
        if not self.is_dominant(mu):
            raise DomainError(f"{role} {mu} is not dominant",
                              precondition="dominant_input")
        return mu

    def coroot_coefficients(self, vec):
        """Coefficients of ``vec`` on the simple coroots, or None."""
        return solve_columns(self.simple_coroots, self._check_vec(vec))

    def leq(self, mu, lam):
        """Dominance order: lam - mu a nonnegative-integer coroot sum.

        Both arguments must be dominant.
        """
        mu = self._require_dominant(mu)
        lam = self._require_dominant(lam)
        key = (mu, lam)
        cached = self._leq_cache.get(key)
        if cached is None:
            coeffs = self.coroot_coefficients(_vsub(lam, mu))
            cached = coeffs is not None and all(
                c.denominator == 1 and c >= 0 for c in coeffs)
            self._leq_cache[key] = cached
        return cached

    # ----- Weyl group and orbits -------------------------------------------

    @cached_property
    def weyl(self):
        gens = []
        for alpha, cov in zip(self.simple_roots, self.simple_coroots):
            # s_i on cocharacters: mu -> mu - <alpha_i, mu> alpha_i^v
            gens.append(tuple(
                tuple((1 if a == b else 0) - cov[a] * alpha[b]
                      for b in range(self.rank))
                for a in range(self.rank)))
        if not gens:
            return WeylGroup([_identity(self.rank)])
        return WeylGroup(gens)

    def weyl_orbit(self, mu):
        """Orbit of a cocharacter under the simple reflections."""
        mu = self._check_vec(mu)
        seen = {mu}
        stack = [mu]
        while stack:
            nu = stack.pop()
            for alpha, cov in zip(self.simple_roots, self.simple_coroots):
                img = _vsub(nu, _vscale(cov, _dot(alpha, nu)))
                if img not in seen:
                    seen.add(img)
                    stack.append(img)
        return seen

    def dominant_representative(self, nu):
        """The unique dominant element in the Weyl orbit of ``nu``."""
        nu = self._check_vec(nu)
        cached = self._domrep_cache.get(nu)
        if cached is not None:
            return cached
        cur = nu
        while True:
            for alpha, cov in zip(self.simple_roots, self.simple_coroots):
                c = _dot(alpha, cur)
                if c < 0:
                    cur = _vsub(cur, _vscale(cov, c))
                    break
            else:
                self._domrep_cache[nu] = cur
                return cur

    # ----- root systems ------------------------------------------------------

    def _closure(self, seed, reflect_vectors):
        """Orbit closure of ``seed`` under reflections along simple pairs.

        ``reflect_vectors`` selects which side is being reflected: pass
        (simple_roots, simple_coroots) ordered as (pairing side, shift side).
        """
        pair_side, shift_side = reflect_vectors
        seen = set(seed)
        stack = list(seed)
        while stack:
            v = stack.pop()
            for chi, shift in zip(pair_side, shift_side):
                img = _vsub(v, _vscale(shift, _dot(chi, v)))
                if img not in seen:
                    seen.add(img)
                    stack.append(img)
            if len(seen) > WEYL_ORDER_BOUND:
                raise ResourceBoundError("root closure exceeded bound")
        return seen

    @cached_property
    def roots(self):
        """All roots, in the character lattice."""
        # Reflections on characters: chi -> chi - <chi, alpha_i^v> alpha_i.
        return frozenset(self._closure(
            self.simple_roots, (self.simple_coroots, self.simple_roots)))

    @cached_property
    def positive_roots(self):
        pos = []
        for beta in sorted(self.roots, key=grlex_key, reverse=True):
            coeffs = solve_columns(self.simple_roots, beta)
            if coeffs is not None and all(c >= 0 for c in coeffs):
                pos.append(beta)
        return tuple(pos)

    @cached_property
    def coroots(self):
        """All coroots, in the cocharacter lattice."""
        return frozenset(self._closure(
            self.simple_coroots, (self.simple_roots, self.simple_coroots)))

    @cached_property
    def positive_coroots(self):
        pos = []
        for beta in sorted(self.coroots, key=grlex_key, reverse=True):
            coeffs = solve_columns(self.simple_coroots, beta)
            if coeffs is not None and all(c >= 0 for c in coeffs):
                pos.append(beta)
        return tuple(pos)

    @cached_property
    def rho_doubled(self):
        """Sum of the positive roots (twice the Weyl vector)."""
        acc = (0,) * self.rank
        for beta in self.positive_roots:
            acc = _vadd(acc, beta)
        return acc

    @cached_property
    def corho_doubled(self):
        """Sum of the positive coroots (twice the dual Weyl vector)."""
        acc = (0,) * self.rank
        for beta in self.positive_coroots:
            acc = _vadd(acc, beta)
        return acc

    def rho_pairing_doubled(self, mu):
        """The integer 2<rho, mu> (rho itself may be half-integral)."""
        mu = self._check_vec(mu)
        return _dot(self.rho_doubled, mu)

    @cached_property
    def invariant_form(self):
        """Weyl-invariant positive-definite form on cocharacter space.

        Obtained by averaging the standard dot product over the Weyl
        group; integer-valued on the lattice.
        """
        n = self.rank
        acc = [[0] * n for _ in range(n)]
        for m in self.weyl.elements:
            mt = _mat_transpose(m)
            for i in range(n):
                for j in range(n):
                    acc[i][j] += _dot(mt[i], mt[j])
        return tuple(tuple(row) for row in acc)

    def form_value(self, x, y):
        """Evaluate the invariant form on two cocharacter vectors."""
        b = self.invariant_form
        return sum(x[i] * _dot(b[i], y) for i in range(self.rank))

    # ----- weight saturation --------------------------------------------------

    def weight_closure(self, lam):
        """All weights of the irreducible dual-group module with highest
        weight ``lam``: the saturation of lam under lowering along simple
        coroot strings."""
        lam = self._require_dominant(lam)
        seen = {lam}
        stack = [lam]
        while stack:
            nu = stack.pop()
            for alpha, cov in zip(self.simple_roots, self.simple_coroots):
                reach = _dot(alpha, nu)
                cur = nu
                for _ in range(reach):
                    cur = _vsub(cur, cov)
                    if cur not in seen:
                        seen.add(cur)
                        stack.append(cur)
        return seen

    def dominant_weights_below(self, lam):
        """All dominant mu <= lam, in descending graded-lex order."""
        lam = self._require_dominant(lam)
        cached = self._below_cache.get(lam)
        if cached is None:
            doms = [w for w in self.weight_closure(lam) if self.is_dominant(w)]
            cached = tuple(sorted(doms, key=grlex_key, reverse=True))
            self._below_cache[lam] = cached
        return cached

    # ----- characters of G ----------------------------------------------------

    def character_of(self, coords, name="character"):
        """Validate and wrap a character of the full group."""
        coords = self._check_vec(coords)
        for cov in self.simple_coroots:
            if _dot(coords, cov) != 0:
                raise DomainError(
                    f"{name} does not kill the simple coroot {cov}",
                    precondition="character_kills_coroots")
        return CharacterOfG(coords, name=name)

    def character(self, name):
        if name not in self.characters:
            raise DomainError(f"datum {self.name} has no character {name!r}",
                              precondition="known_character")
        return self.characters[name]

    # ----- identity / serialization -------------------------------------------

    @cached_property
    def cache_key(self):
        return self.to_json_str()

    def to_json(self):
        return {
            "name": self.name,
            "rank": self.rank,
            "simple_roots": [list(a) for a in self.simple_roots],
            "simple_coroots": [list(a) for a in self.simple_coroots],
            "characters": {k: list(v.coords) for k, v in sorted(self.characters.items())},
        }

    def to_json_str(self):
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def __eq__(self, other):
        return isinstance(other, RootDatum) and self.cache_key == other.cache_key

    def __hash__(self):
        return hash(self.cache_key)

    def __repr__(self):
        return f"RootDatum({self.name}, rank={self.rank})"


# ----- built-in constructors ---------------------------------------------------


def _unit(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def gl(n):
    """General linear datum of rank n."""
    if n < 1:
        raise DomainError("gl(n) needs n >= 1", precondition="rank_positive")
    roots = [_vsub(_unit(n, i), _unit(n, i + 1)) for i in range(n - 1)]
    return RootDatum(n, roots, roots, name=f"gl{n}",
                     characters={"det": (1,) * n}, family=("gl", n))


def gsp(two_n):
    """Symplectic similitude datum; argument is the symplectic dimension 2n."""
    if two_n < 2 or two_n % 2:
        raise DomainError("gsp(2n) needs a positive even argument",
                          precondition="even_symplectic_dimension")
    n = two_n // 2
    rank = n + 1
    roots = [_vsub(_unit(rank, i), _unit(rank, i + 1)) for i in range(1, n)]
    coroots = list(roots)
    long_root = _vsub(_vscale(_unit(rank, n), 2), _unit(rank, 0))
    roots.append(long_root)
    coroots.append(_unit(rank, n))
    return RootDatum(rank, roots, coroots, name=f"gsp{two_n}",
                     characters={"nu": _unit(rank, 0)}, family=("gsp", two_n))


def product(*data, name=None):
    """Direct product of root data (block-diagonal coordinates)."""
    if not data:
        raise DomainError("product needs at least one factor",
                          precondition="nonempty_product")
    rank = sum(d.rank for d in data)
    roots, coroots = [], []
    characters = {}
    offset = 0
    for idx, d in enumerate(data):
        pad = lambda v: (0,) * offset + tuple(v) + (0,) * (rank - offset - d.rank)
        roots.extend(pad(a) for a in d.simple_roots)
        coroots.extend(pad(a) for a in d.simple_coroots)
        for cname, ch in d.characters.items():
            characters[f"{cname}.{idx}"] = pad(ch.coords)
        offset += d.rank
    pname = name or "x".join(d.name for d in data)
    return RootDatum(rank, roots, coroots, name=pname, characters=characters,
                     family=("product", tuple(d.family for d in data)))


_BUILTINS = {}


def builtin(name):
    """Look up a built-in datum by name (gl1, gl2, ..., gsp2, gsp4, ...)."""
    if name not in _BUILTINS:
        if name.startswith("gl") and name[2:].isdigit():
            _BUILTINS[name] = gl(int(name[2:]))
        elif name.startswith("gsp") and name[3:].isdigit():
            _BUILTINS[name] = gsp(int(name[3:]))
        else:
            raise DomainError(f"unknown builtin datum {name!r}",
                              precondition="known_datum")
    return _BUILTINS[name]


def from_json(doc):
    """Build a RootDatum from its JSON document (or JSON text)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", field="<document>") from None
    if not isinstance(doc, dict):
        raise ParseError("root-datum document must be an object", field="<document>")
    out = {}
    for field, typ in (("name", str), ("rank", int),
                       ("simple_roots", list), ("simple_coroots", list)):
        if field not in doc:
            raise ParseError(f"missing field {field!r}", field=field)
        if not isinstance(doc[field], typ):
            raise ParseError(f"field {field!r} has wrong type", field=field)
        out[field] = doc[field]
    for field in ("simple_roots", "simple_coroots"):
        for vec in doc[field]:
            if not isinstance(vec, list) or not all(isinstance(x, int) for x in vec):
                raise ParseError(f"field {field!r} must hold integer vectors",
                                 field=field)
    characters = doc.get("characters", {})
    if not isinstance(characters, dict):
        raise ParseError("field 'characters' must be an object", field="characters")
    try:
        return RootDatum(out["rank"], out["simple_roots"], out["simple_coroots"],
                         name=out["name"], characters=characters)
    except DimensionError as exc:
        raise ParseError(str(exc), field="simple_roots") from None
