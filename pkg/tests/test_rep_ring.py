import random

import pytest

from sphecke.errors import DomainError
from sphecke.oracles import orbit_sum_dimension, orbit_sum_multiplicities
from sphecke.rep_ring import (VirtualCharacter, dimension, multiply, sym_power,
                              tensor_power, weight_multiplicities)
from sphecke.root_data import gl, gsp

G2 = gl(2)
G3 = gl(3)
S4 = gsp(4)


class TestWeightMultiplicities:
    def test_minuscule_gl2(self):
        assert weight_multiplicities(G2, (1, 0)).mults == {(1, 0): 1}

    def test_gl3_adjoint(self):
        # derived with the alternating-sum oracle
        assert weight_multiplicities(G3, (1, 0, -1)).mults == {
            (1, 0, -1): 1, (0, 0, 0): 2}

    def test_gsp4_spin(self):
        table = weight_multiplicities(S4, (1, 1, 1))
        assert table.mults == {(1, 1, 1): 1}
        assert table.dimension() == 4

    def test_requires_dominant(self):
        with pytest.raises(DomainError):
            weight_multiplicities(G2, (0, 1))

    def test_matches_oracle(self):
        rng = random.Random(3)
        for datum, rank in ((G2, 2), (G3, 3), (S4, 3)):
            for _ in range(8):
                lam = datum.dominant_representative(
                    tuple(rng.randrange(-2, 3) for _ in range(rank)))
                table = weight_multiplicities(datum, lam)
                assert dict(table.mults) == orbit_sum_multiplicities(datum, lam)

    def test_memoized(self):
        assert weight_multiplicities(G3, (2, 0, 0)) is weight_multiplicities(G3, (2, 0, 0))


class TestDimension:
    @pytest.mark.parametrize("k", range(0, 7))
    def test_gl2_symmetric_powers(self, k):
        assert dimension(G2, (k, 0)) == k + 1

    def test_gl3_adjoint(self):
        assert dimension(G3, (1, 0, -1)) == 8

    def test_trivial(self):
        for datum in (G2, G3, S4):
            assert dimension(datum, (0,) * datum.rank) == 1

    def test_orbit_size_sum(self):
        for datum, lam in ((G3, (2, 1, 0)), (S4, (1, 2, 1)), (S4, (2, 2, 2))):
            table = weight_multiplicities(datum, lam)
            total = sum(m * len(datum.weyl_orbit(mu))
                        for mu, m in table.mults.items())
            assert total == dimension(datum, lam) == orbit_sum_dimension(datum, lam)


class TestMultiply:
    def test_clebsch_gordan(self):
        c = VirtualCharacter.irreducible(G2, (1, 0))
        assert (c * c).coeffs == {(2, 0): 1, (1, 1): 1}

    def test_identity(self):
        x = VirtualCharacter(G2, {(2, 0): 3, (1, 1): -1})
        assert multiply(x, VirtualCharacter.one(G2)) == x

    def test_square_of_sym2(self):
        c = VirtualCharacter.irreducible(G2, (2, 0))
        assert (c * c).coeffs == {(4, 0): 1, (3, 1): 1, (2, 2): 1}

    def test_dimension_multiplicative(self):
        rng = random.Random(5)
        for datum, rank in ((G2, 2), (G3, 3), (S4, 3)):
            for _ in range(4):
                lam = datum.dominant_representative(
                    tuple(rng.randrange(0, 3) for _ in range(rank)))
                mu = datum.dominant_representative(
                    tuple(rng.randrange(0, 3) for _ in range(rank)))
                a = VirtualCharacter.irreducible(datum, lam)
                b = VirtualCharacter.irreducible(datum, mu)
                prod = a * b
                assert all(c > 0 for c in prod.coeffs.values())
                assert prod.dimension() == dimension(datum, lam) * dimension(datum, mu)

    def test_commutative_associative(self):
        xs = [VirtualCharacter.irreducible(G3, w)
              for w in ((1, 0, 0), (1, 1, 0), (2, 0, 0))]
        a, b, c = xs
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)


class TestPowers:
    def test_tensor_square_contains_31(self):
        c = VirtualCharacter.irreducible(G2, (2, 0))
        assert tensor_power(c, 2).coefficient((3, 1)) == 1

    def test_sym_square(self):
        c = VirtualCharacter.irreducible(G2, (2, 0))
        sp = sym_power(c, 2)
        assert sp.coeffs == {(4, 0): 1, (2, 2): 1}
        assert sp.dimension() == 6

    def test_first_power_is_identity_map(self):
        c = VirtualCharacter.irreducible(G2, (2, 0))
        assert sym_power(c, 1) == c
        assert tensor_power(c, 1) == c

    def test_sym_plus_alternating_matches_tensor_dimension(self):
        c = VirtualCharacter.irreducible(G3, (1, 0, 0))
        t2 = tensor_power(c, 2)
        s2 = sym_power(c, 2)
        assert s2.dimension() == 6       # Sym^2 of the standard module
        assert t2.dimension() == 9

    def test_power_needs_positive_exponent(self):
        c = VirtualCharacter.irreducible(G2, (1, 0))
        with pytest.raises(DomainError):
            sym_power(c, 0)
        with pytest.raises(DomainError):
            tensor_power(c, 0)


class TestJson:
    def test_round_trip(self):
        x = VirtualCharacter(G2, {(2, 0): 3, (1, 1): -2})
        assert VirtualCharacter.from_json(G2, x.to_json()) == x
