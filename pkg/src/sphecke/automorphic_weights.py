"""Automorphic weight combinatorics for products of general linear groups.

A SignatureData fixes the shape of the weight lattice: in the symplectic
case (C) one general linear factor of size n per place, in the unitary case
(A) a pair of factors (a, a*) per place with a + a* equal to a common n.
An AutWeight is a non-increasing integer tuple per factor.

The key predicate is admissibility: a weight is admissible exactly when it
is positive and even (case C) or positive and sum-symmetric (case A), and
equivalently when it occurs in the e-th symmetric power of the basic
weight-raising representation (squares of the standard factors in case C,
products of paired factors in case A) for e = half the total weight.  The
literal tensor-power reading of the occurrence condition is broader; both
modes are exposed and their discrepancies are reported, not adjudicated.
"""

from __future__ import annotations

from .errors import DomainError, ParseError, ResourceBoundError
from .rep_ring import VirtualCharacter, sym_power, tensor_power
from .root_data import gl, product

#: Default guard for constituent searches: total tensor degree e * rank.
CONSTITUENT_DEGREE_BOUND = 40


class SignatureData:
    """Shape data: case 'A' or 'C' plus the factor sizes per place."""

    __slots__ = ("case", "places")

    def __init__(self, case, places):
        if case not in ("A", "C"):
            raise DomainError("case must be 'A' or 'C'", precondition="known_case")
        self.case = case
        if case == "C":
            self.places = tuple(int(n) for n in places)
            if not self.places or any(n < 1 for n in self.places):
                raise DomainError("factor sizes must be >= 1",
                                  precondition="positive_signature")
        else:
            pairs = tuple((int(a), int(b)) for a, b in places)
            if not pairs or any(a < 1 or b < 1 for a, b in pairs):
                raise DomainError("factor sizes must be >= 1",
                                  precondition="positive_signature")
            totals = {a + b for a, b in pairs}
            if len(totals) != 1:
                raise DomainError("paired sizes must sum to a common n",
                                  precondition="constant_pair_sum")
            self.places = pairs

    def components(self):
        """Flattened general-linear factor sizes (pairs interleaved)."""
        if self.case == "C":
            return tuple(self.places)
        out = []
        for a, b in self.places:
            out.extend((a, b))
        return tuple(out)

    def total_rank(self):
        return sum(self.components())

    def group_datum(self):
        """Root datum of the product of general linear factors."""
        return _datum_for(self)

    def __eq__(self, other):
        return (isinstance(other, SignatureData) and self.case == other.case
                and self.places == other.places)

    def __hash__(self):
        return hash((self.case, self.places))

    def __repr__(self):
        return f"SignatureData({self.case}, {self.places})"

    def to_json(self):
        if self.case == "C":
            return {"case": "C", "places": [{"n": n} for n in self.places]}
        return {"case": "A",
                "places": [{"a": a, "a_star": b} for a, b in self.places]}

    @classmethod
    def from_json(cls, doc):
        case = doc.get("case")
        if case == "C":
            try:
                return cls("C", [pl["n"] for pl in doc["places"]])
            except (KeyError, TypeError):
                raise ParseError("case C places need integer field 'n'",
                                 field="places") from None
        if case == "A":
            try:
                return cls("A", [(pl["a"], pl["a_star"]) for pl in doc["places"]])
            except (KeyError, TypeError):
                raise ParseError("case A places need fields 'a', 'a_star'",
                                 field="places") from None
        raise ParseError("field 'case' must be 'A' or 'C'", field="case")


_DATUM_CACHE = {}


def _datum_for(sig):
    key = (sig.case, sig.places)
    hit = _DATUM_CACHE.get(key)
    if hit is None:
        factors = [gl(n) for n in sig.components()]
        hit = _DATUM_CACHE.setdefault(key, product(*factors))
    return hit


class AutWeight:
    """A dominant weight of the product group: one tuple per factor."""

    __slots__ = ("signature", "parts")

    def __init__(self, signature, parts):
        self.signature = signature
        parts = tuple(tuple(int(x) for x in part) for part in parts)
        comps = signature.components()
        if len(parts) != len(comps):
            raise DomainError(
                f"expected {len(comps)} weight components, got {len(parts)}",
                precondition="matching_signature")
        for part, size in zip(parts, comps):
            if len(part) != size:
                raise DomainError(f"component {part} has wrong length",
                                  precondition="matching_signature")
            if any(part[i] < part[i + 1] for i in range(len(part) - 1)):
                raise DomainError(f"component {part} is not non-increasing",
                                  precondition="dominant_weight")
        self.parts = parts

    @classmethod
    def parallel(cls, signature, k):
        """The scalar weight with every entry equal to k."""
        return cls(signature, [(k,) * n for n in signature.components()])

    def flatten(self):
        return tuple(x for part in self.parts for x in part)

    def is_zero(self):
        return all(x == 0 for x in self.flatten())

    def __eq__(self, other):
        return (isinstance(other, AutWeight)
                and self.signature == other.signature and self.parts == other.parts)

    def __hash__(self):
        return hash((self.signature, self.parts))

    def __repr__(self):
        return f"AutWeight({self.parts})"

    def to_json(self):
        return {"signature": self.signature.to_json(),
                "parts": [list(p) for p in self.parts]}


def abs_weight(kappa):
    """Total of all entries across all places."""
    return sum(kappa.flatten())


def is_positive(kappa):
    """Nonzero with nonnegative smallest entry in every component."""
    if kappa.is_zero():
        return False
    return all(part[-1] >= 0 for part in kappa.parts)


def is_even(kappa):
    return all(x % 2 == 0 for x in kappa.flatten())


def is_sum_symmetric(kappa):
    """Per place, the paired components carry equal entry sums (case A)."""
    if kappa.signature.case != "A":
        raise DomainError("sum-symmetry needs paired places (case A)",
                          precondition="case_A")
    for i in range(0, len(kappa.parts), 2):
        if sum(kappa.parts[i]) != sum(kappa.parts[i + 1]):
            return False
    return True


def is_admissible_characterized(kappa):
    """Positive and even (case C) / positive and sum-symmetric (case A)."""
    if kappa.signature.case == "C":
        return is_positive(kappa) and is_even(kappa)
    return is_positive(kappa) and is_sum_symmetric(kappa)


def basic_raising_character(signature):
    """Character of the basic weight-raising module: the direct sum over
    places of the squared standard factor (case C) or the product of the
    paired standard factors (case A)."""
    datum = _datum_for(signature)
    comps = signature.components()
    rank = datum.rank

    def embedded(weight_by_component):
        out = []
        for size, w in zip(comps, weight_by_component):
            out.extend(w if w is not None else (0,) * size)
        return tuple(out)

    acc = VirtualCharacter(datum, {})
    if signature.case == "C":
        for idx, n in enumerate(comps):
            w = [None] * len(comps)
            w[idx] = (2,) + (0,) * (n - 1)
            acc = acc + VirtualCharacter.irreducible(datum, embedded(w))
    else:
        for pair in range(0, len(comps), 2):
            w = [None] * len(comps)
            w[pair] = (1,) + (0,) * (comps[pair] - 1)
            w[pair + 1] = (1,) + (0,) * (comps[pair + 1] - 1)
            acc = acc + VirtualCharacter.irreducible(datum, embedded(w))
    return acc


def is_constituent_depth_e(lam, e, mode="tensor", degree_bound=None):
    """Whether ``lam`` occurs in the e-th tensor (or symmetric) power of the
    basic weight-raising module."""
    if e < 1:
        raise DomainError("depth e must be >= 1", precondition="positive_depth")
    if mode not in ("tensor", "sym"):
        raise DomainError("mode must be 'tensor' or 'sym'",
                          precondition="known_mode")
    sig = lam.signature
    bound = CONSTITUENT_DEGREE_BOUND if degree_bound is None else degree_bound
    if e * sig.total_rank() > bound:
        raise ResourceBoundError(
            f"constituent search of degree {e} on rank {sig.total_rank()} "
            f"exceeds the bound {bound}")
    power = _raising_power(sig, e, mode)
    return power.coefficient(lam.flatten()) > 0


_POWER_CACHE = {}


def _raising_power(sig, e, mode):
    key = (sig.case, sig.places, e, mode)
    hit = _POWER_CACHE.get(key)
    if hit is None:
        base = basic_raising_character(sig)
        built = tensor_power(base, e) if mode == "tensor" else sym_power(base, e)
        hit = _POWER_CACHE.setdefault(key, built)
    return hit


def depth(lam):
    """Half the total weight, defined for admissible weights."""
    if not is_admissible_characterized(lam):
        raise DomainError(f"{lam} is not admissible",
                          precondition="admissible_weight")
    total = abs_weight(lam)
    if total % 2:
        raise DomainError("admissible weights have even total",
                          precondition="even_total_weight")
    return total // 2


def weight_shift(kappa, lam, p):
    """The raised weight kappa + lam + (p-1) |lam|/2 in every entry."""
    if kappa.signature != lam.signature:
        raise DomainError("weights on different signatures",
                          precondition="matching_signature")
    if not is_admissible_characterized(lam):
        raise DomainError("shift weight must be admissible",
                          precondition="admissible_weight")
    scalar = (p - 1) * (abs_weight(lam) // 2)
    parts = []
    for pk, pl in zip(kappa.parts, lam.parts):
        parts.append(tuple(a + b + scalar for a, b in zip(pk, pl)))
    return AutWeight(kappa.signature, parts)


def constituent_discrepancies(signature, abs_bound, degree_bound=None):
    """Compare the characterized predicate against both occurrence modes.

    Scans all dominant weights with nonnegative entries and even total at
    most ``abs_bound``; returns records for every weight where the
    tensor-mode occurrence disagrees with the characterization (sym-mode
    disagreements would be reported too, and are expected to be absent).
    """
    records = []
    for total in range(2, abs_bound + 1, 2):
        e = total // 2
        for lam in _weights_of_total(signature, total):
            characterized = is_admissible_characterized(lam)
            sym = is_constituent_depth_e(lam, e, mode="sym",
                                         degree_bound=degree_bound)
            tensor = is_constituent_depth_e(lam, e, mode="tensor",
                                            degree_bound=degree_bound)
            if tensor != characterized or sym != characterized:
                records.append({
                    "weight": [list(p) for p in lam.parts],
                    "total": total,
                    "characterized": characterized,
                    "sym": sym,
                    "tensor": tensor,
                })
    return records


def _weights_of_total(signature, total):
    comps = signature.components()

    def partitions(size, budget):
        # non-increasing nonnegative tuples of the given length and sum
        if size == 0:
            if budget == 0:
                yield ()
            return
        for first in range(budget, -1, -1):
            for rest in partitions(size - 1, budget - first):
                if not rest or first >= rest[0]:
                    yield (first,) + rest

    def split(idx, budget):
        if idx == len(comps):
            if budget == 0:
                yield ()
            return
        for here in range(budget, -1, -1):
            for part in partitions(comps[idx], here):
                for rest in split(idx + 1, budget - here):
                    yield (part,) + rest

    for parts in split(0, total):
        yield AutWeight(signature, parts)
