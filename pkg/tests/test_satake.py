import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphecke.errors import DomainError
from sphecke.finite_field import FiniteField
from sphecke.laurent import LaurentV
from sphecke.oracles import gl2_convolve
from sphecke.rep_ring import VirtualCharacter
from sphecke.root_data import gl, gsp
from sphecke.satake import (HeckeElement, build_satake_matrices, hecke_multiply,
                            lusztig_q_analog, q_kostant, satake, satake_inverse,
                            specialize_mod_p)

G2 = gl(2)
G3 = gl(3)
S4 = gsp(4)


laurent_dicts = st.dictionaries(st.integers(-4, 4), st.integers(-9, 9), max_size=4)


class TestLaurent:
    @given(laurent_dicts, laurent_dicts, laurent_dicts)
    @settings(max_examples=80)
    def test_ring_axioms(self, a, b, c):
        x, y, z = LaurentV(a), LaurentV(b), LaurentV(c)
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z

    def test_int_interop(self):
        x = LaurentV({2: 1})
        assert x + 1 == LaurentV({2: 1, 0: 1})
        assert 2 * x == LaurentV({2: 2})
        assert x - x == 0

    def test_q_polynomial_interface(self):
        x = LaurentV({0: 1, 2: 3})
        assert x.is_q_polynomial()
        assert x.as_q_dict() == {0: 1, 1: 3}
        assert x.eval_q(2) == 7
        assert not LaurentV({1: 1}).is_q_polynomial()

    def test_substitute(self):
        field = FiniteField(7)
        x = LaurentV({-1: 1, 2: 3})
        val = x.substitute(field(2))
        assert val == field(2).inverse() + field(3) * field(4)


class TestQKostant:
    def test_gl2_simple(self):
        assert q_kostant(G2, (1, -1)) == LaurentV({2: 1})

    def test_gl2_double(self):
        assert q_kostant(G2, (2, -2)) == LaurentV({4: 1})

    def test_gl3_two_expressions(self):
        assert q_kostant(G3, (1, 0, -1)) == LaurentV({2: 1, 4: 1})

    def test_unreachable_is_zero(self):
        assert q_kostant(G2, (-1, 1)) == 0
        assert q_kostant(G2, (1, 0)) == 0

    def test_ungraded_is_value_at_one(self):
        for beta in ((1, 0, -1), (2, 1, -3), (2, 0, -2)):
            graded = q_kostant(G3, beta)
            assert q_kostant(G3, beta, graded=False) == sum(graded.c.values())


class TestLusztigQAnalog:
    def test_diagonal_is_one(self):
        for datum, lam in ((G2, (3, 1)), (G3, (2, 1, 0)), (S4, (2, 2, 1))):
            assert lusztig_q_analog(datum, lam, lam) == 1

    def test_gl2_basic(self):
        assert lusztig_q_analog(G2, (2, 0), (1, 1)) == LaurentV({2: 1})

    def test_gl3_example(self):
        assert lusztig_q_analog(G3, (2, 1, 0), (1, 1, 1)) == LaurentV({2: 1, 4: 1})

    def test_incomparable_rejected(self):
        with pytest.raises(DomainError):
            lusztig_q_analog(G2, (1, 1), (2, 0))


class TestMatrices:
    def test_single_term_forward(self):
        m = build_satake_matrices(G2, [(1, 0)])
        image = m.satake(HeckeElement.basis(G2, (1, 0)))
        assert image.coeffs == {(1, 0): LaurentV({1: 1})}

    def test_inverse_direction_example(self):
        m = build_satake_matrices(G2, [(2, 0)])
        x = m.satake_inverse(VirtualCharacter.irreducible(G2, (2, 0)))
        assert x.terms == {(2, 0): LaurentV({-2: 1}), (1, 1): LaurentV({-2: 1})}
        assert m.d_value((2, 0), (1, 1)) == 1

    def test_forward_example(self):
        m = build_satake_matrices(G2, [(2, 0)])
        image = m.satake(HeckeElement.basis(G2, (2, 0)))
        assert image.coeffs == {(2, 0): LaurentV({2: 1}), (1, 1): LaurentV({0: -1})}
        assert m.b_value((2, 0), (1, 1)) == -1

    def test_unitriangular_and_q_polynomial(self):
        m = build_satake_matrices(S4, [(2, 2, 2), (2, 1, 1)])
        for lam in m.weights:
            assert m.b_value(lam, lam) == 1
            assert m.d_value(lam, lam) == 1
            for mu in m.below[lam]:
                assert m.d_value(lam, mu).is_q_polynomial()

    def test_constancy_report_shape(self):
        m = build_satake_matrices(G3, [(2, 1, 0)])
        report = m.constancy_report()
        assert set(report) == {"b", "d"}

    def test_cache_hit(self):
        a = build_satake_matrices(G2, [(2, 0)])
        b = build_satake_matrices(G2, [(2, 0), (1, 1)])
        assert a is b  # same downward closure


class TestTransform:
    def test_round_trip_gl3_box(self):
        weights = [w for w in itertools.product(range(-2, 3), repeat=3)
                   if G3.is_dominant(w)]
        m = build_satake_matrices(G3, weights)
        for lam in weights:
            h = HeckeElement.basis(G3, lam)
            assert m.satake_inverse(m.satake(h)) == h

    def test_central_weight_fixed(self):
        image = satake(HeckeElement.basis(G2, (1, 1)))
        assert image.coeffs == {(1, 1): LaurentV.one()}

    def test_linearity(self):
        h = HeckeElement(G2, {(1, 0): 1, (1, 1): 1})
        image = satake(h)
        assert image.coeffs == {(1, 0): LaurentV({1: 1}), (1, 1): LaurentV.one()}

    def test_module_level_inverse(self):
        x = VirtualCharacter.irreducible(G3, (1, 1, 0))
        assert satake(satake_inverse(x)).coeffs == x.coeffs


class TestHeckeMultiply:
    def test_gl2_against_coset_oracle(self):
        weights = [(1, 0), (1, 1), (2, 0)]
        for q in (2, 3):
            for lam in weights:
                for mu in weights:
                    prod = hecke_multiply(HeckeElement.basis(G2, lam),
                                          HeckeElement.basis(G2, mu))
                    got = {nu: c.eval_q(q) for nu, c in prod.terms.items()}
                    assert {k: v for k, v in got.items() if v} == \
                        gl2_convolve(lam, mu, q)

    def test_gl2_oracle_beyond_the_required_range(self):
        # deeper double cosets, including a negative central shift
        for q in (2, 3):
            for lam, mu in (((2, 0), (2, 0)), ((3, 0), (1, 0)),
                            ((2, 1), (1, 0)), ((1, 0), (0, -1))):
                prod = hecke_multiply(HeckeElement.basis(G2, lam),
                                      HeckeElement.basis(G2, mu))
                got = {nu: c.eval_q(q) for nu, c in prod.terms.items()}
                assert {k: v for k, v in got.items() if v} == \
                    gl2_convolve(lam, mu, q)

    def test_structure_constant_q_plus_one(self):
        prod = hecke_multiply(HeckeElement.basis(G2, (1, 0)),
                              HeckeElement.basis(G2, (1, 0)))
        assert prod.terms == {(2, 0): LaurentV.one(),
                              (1, 1): LaurentV({0: 1, 2: 1})}

    def test_unit(self):
        h = HeckeElement(G2, {(2, 0): LaurentV({1: 2}), (1, 1): LaurentV.one()},
                         coerce=False)
        assert hecke_multiply(HeckeElement.unit(G2), h) == h

    def test_central_translation(self):
        prod = hecke_multiply(HeckeElement.basis(G2, (1, 1)),
                              HeckeElement.basis(G2, (1, 0)))
        assert prod.terms == {(2, 1): LaurentV.one()}

    def test_commutative_associative_random(self):
        rng = random.Random(17)
        for datum, pool in ((G2, [(1, 0), (1, 1), (2, 0), (0, 0)]),
                            (S4, [(1, 1, 1), (0, 0, 0), (2, 1, 1)])):
            for _ in range(3):
                picks = [HeckeElement(datum,
                                      {rng.choice(pool): rng.randrange(1, 4),
                                       rng.choice(pool): rng.randrange(1, 4)})
                         for _ in range(3)]
                a, b, c = picks
                assert hecke_multiply(a, b) == hecke_multiply(b, a)
                assert hecke_multiply(hecke_multiply(a, b), c) == \
                    hecke_multiply(a, hecke_multiply(b, c))

    def test_datum_mismatch(self):
        with pytest.raises(DomainError):
            hecke_multiply(HeckeElement.basis(G2, (1, 0)),
                           HeckeElement.basis(G3, (1, 0, 0)))


class TestSpecialization:
    def test_both_square_roots_accepted(self):
        m = build_satake_matrices(G2, [(2, 0), (1, 0)])
        field = FiniteField(5)
        for root in (2, 3):
            spec = specialize_mod_p(m, 4, field(root))
            image = spec.satake(HeckeElement.basis(G2, (1, 0)))
            assert image.coeffs == {(1, 0): field(root)}

    def test_p_divides_q_rejected(self):
        m = build_satake_matrices(G2, [(1, 0)])
        with pytest.raises(DomainError) as err:
            specialize_mod_p(m, 5, FiniteField(5)(0))
        assert err.value.precondition == "q_invertible_mod_p"

    def test_wrong_root_rejected(self):
        m = build_satake_matrices(G2, [(1, 0)])
        with pytest.raises(DomainError) as err:
            specialize_mod_p(m, 4, FiniteField(5)(1))
        assert err.value.precondition == "square_root_consistent"

    def test_round_trip_after_specialization(self):
        m = build_satake_matrices(S4, [(2, 2, 2)])
        field = FiniteField(7)
        spec = m.specialize(2, field(3))  # 3*3 = 2 mod 7
        h = HeckeElement(S4, {(2, 2, 2): field(5), (2, 1, 1): field(1)},
                         coerce=False)
        assert spec.satake_inverse(spec.satake(h)) == h

    def test_element_specialization(self):
        h = HeckeElement(G2, {(1, 0): LaurentV({1: 1})})
        field = FiniteField(5)
        out = specialize_mod_p(h, 4, field(2))
        assert out.terms == {(1, 0): field(2)}


class TestHeckeJson:
    def test_round_trip(self):
        h = HeckeElement(G2, {(2, 0): LaurentV({-1: 2, 3: 1}),
                              (1, 1): LaurentV.one()}, coerce=False)
        doc = h.to_json()
        assert doc["datum"] == "gl2"
        assert HeckeElement.from_json(G2, doc) == h
