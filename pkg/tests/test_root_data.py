import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphecke.errors import DimensionError, DomainError, ParseError
from sphecke.root_data import RootDatum, builtin, from_json, gl, gsp, product

G2 = gl(2)
G3 = gl(3)
S4 = gsp(4)


class TestPairing:
    def test_gl2_example(self):
        assert G2.pairing((1, -1), (1, 0)) == 1

    def test_zero_cocharacter(self):
        assert G3.pairing((5, -2, 7), (0, 0, 0)) == 0

    def test_gsp4_long_root_diagonal(self):
        long_root, long_coroot = S4.simple_roots[1], S4.simple_coroots[1]
        assert S4.pairing(long_root, long_coroot) == 2

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            G2.pairing((1, 0, 0), (1, 0))

    def test_bilinear(self):
        a, b, mu = (1, -1), (2, 0), (3, 4)
        lhs = G2.pairing(tuple(x + y for x, y in zip(a, b)), mu)
        assert lhs == G2.pairing(a, mu) + G2.pairing(b, mu)


class TestDominance:
    def test_gl2(self):
        assert G2.is_dominant((1, 0))
        assert not G2.is_dominant((0, 1))

    def test_gl3(self):
        assert G3.is_dominant((1, 0, -1))

    def test_leq_examples(self):
        assert G2.leq((1, 1), (2, 0))
        assert G2.leq((2, 0), (2, 0))
        assert not G2.leq((2, 0), (1, 1))

    def test_leq_requires_dominant(self):
        with pytest.raises(DomainError):
            G2.leq((0, 1), (2, 0))

    def test_below_gl2(self):
        assert G2.dominant_weights_below((2, 0)) == ((2, 0), (1, 1))

    def test_below_gl3(self):
        assert G3.dominant_weights_below((1, 0, -1)) == ((1, 0, -1), (0, 0, 0))

    def test_below_minuscule(self):
        assert G3.dominant_weights_below((1, 0, 0)) == ((1, 0, 0),)

    def test_below_all_comparable_and_complete(self):
        lam = (3, 1, -1)
        below = G3.dominant_weights_below(lam)
        for mu in below:
            assert G3.leq(mu, lam)
        # every dominant mu <= lam in a covering box shows up
        for cand in itertools.product(range(-2, 4), repeat=3):
            if G3.is_dominant(cand) and G3.leq(cand, lam):
                assert cand in below


@st.composite
def dominant_gl3(draw):
    vals = draw(st.lists(st.integers(-3, 4), min_size=3, max_size=3))
    return tuple(sorted(vals, reverse=True))


class TestPartialOrder:
    @given(dominant_gl3())
    def test_reflexive(self, lam):
        assert G3.leq(lam, lam)

    @given(dominant_gl3(), dominant_gl3())
    @settings(max_examples=60)
    def test_antisymmetric(self, a, b):
        if G3.leq(a, b) and G3.leq(b, a):
            assert a == b

    @given(dominant_gl3(), dominant_gl3(), dominant_gl3())
    @settings(max_examples=60)
    def test_transitive(self, a, b, c):
        if G3.leq(a, b) and G3.leq(b, c):
            assert G3.leq(a, c)


class TestRhoPairing:
    def test_gl2(self):
        assert G2.rho_pairing_doubled((1, 0)) == 1
        assert G2.rho_pairing_doubled((1, 1)) == 0

    def test_gl3(self):
        assert G3.rho_pairing_doubled((1, 0, -1)) == 4

    def test_linear(self):
        assert S4.rho_pairing_doubled((2, 4, 2)) == 2 * S4.rho_pairing_doubled((1, 2, 1))


class TestWeylGroup:
    def test_orbit_gl2(self):
        assert G2.weyl_orbit((1, 0)) == {(1, 0), (0, 1)}
        assert G2.weyl_orbit((1, 1)) == {(1, 1)}

    def test_orbit_gl3(self):
        assert G3.weyl_orbit((1, 0, 0)) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}

    @pytest.mark.parametrize("datum,order", [
        (gl(2), 2), (gl(3), 6), (gl(4), 24),
        (gsp(2), 2), (gsp(4), 8), (gsp(6), 48),
    ])
    def test_order(self, datum, order):
        assert datum.weyl.order == order

    def test_generators_are_involutions(self):
        for g in S4.weyl.generators:
            assert S4.weyl.apply(g, S4.weyl.apply(g, (1, 2, 3))) == (1, 2, 3)

    def test_orbit_has_unique_dominant(self):
        rng = random.Random(11)
        for _ in range(25):
            mu = tuple(rng.randrange(-3, 4) for _ in range(3))
            for datum in (G3, S4):
                orbit = datum.weyl_orbit(mu)
                doms = [nu for nu in orbit if datum.is_dominant(nu)]
                assert len(doms) == 1
                assert doms[0] == datum.dominant_representative(mu)


class TestCharacters:
    def test_gsp4_nu_kills_coroots(self):
        nu = S4.character("nu")
        for cov in S4.simple_coroots:
            assert S4.pairing(nu, cov) == 0

    def test_det_on_gl(self):
        det = G3.character("det")
        assert det.coords == (1, 1, 1)

    def test_invalid_character_rejected(self):
        with pytest.raises(DomainError):
            G2.character_of((1, 0))

    def test_comparable_weights_pair_equally(self):
        det = G3.character("det")
        lam = (2, 1, -1)
        for mu in G3.dominant_weights_below(lam):
            assert G3.pairing(det, mu) == G3.pairing(det, lam)


class TestConstructors:
    def test_gl2_invariants(self):
        assert G2.rank == 2
        assert G2.simple_roots == ((1, -1),)

    def test_gsp_shape(self):
        assert S4.rank == 3
        assert S4.simple_coroots == ((0, 1, -1), (0, 0, 1))

    def test_product_rank(self):
        p = product(gl(2), gl(1))
        assert p.rank == 3
        assert "det.0" in p.characters and "det.1" in p.characters

    def test_builtin_lookup(self):
        assert builtin("gl2") is builtin("gl2")
        assert builtin("gsp6").rank == 4
        with pytest.raises(DomainError):
            builtin("e8")

    def test_cartan_violation_rejected(self):
        with pytest.raises(DomainError):
            RootDatum(2, [(1, 1)], [(1, 0)])

    def test_dependent_coroots_rejected(self):
        with pytest.raises(DomainError):
            RootDatum(2, [(1, -1), (2, -2)], [(1, -1), (2, -2)])


class TestJson:
    def test_round_trip(self):
        doc = S4.to_json()
        again = from_json(doc)
        assert again == S4
        assert again.character("nu").coords == (1, 0, 0)

    def test_missing_field(self):
        with pytest.raises(ParseError) as err:
            from_json({"name": "x", "rank": 2, "simple_roots": [[1, -1]]})
        assert err.value.field == "simple_coroots"

    def test_bad_vector(self):
        with pytest.raises(ParseError):
            from_json({"name": "x", "rank": 2,
                       "simple_roots": [["a", 1]], "simple_coroots": [[1, -1]]})

    def test_text_input(self):
        assert from_json(G2.to_json_str()) == G2
