"""Polynomial arithmetic and Groebner machinery.

Ideal membership claimed by normal-form reduction is cross-checked
against straight linear algebra over the monomial basis (echelon
reduction of monomial multiples of the generators), which shares no
code with the division algorithm.
"""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from wittcert.polyring import (
    FieldModeError,
    Ideal,
    PolyParseError,
    PolyRing,
    Polynomial,
    TermOrder,
    buchberger,
    eliminate,
    ideal_equal,
    krull_dim,
    normal_form,
    parse_polynomial,
    poly_from_json,
    pth_root_ideal,
    pth_root_poly,
)


def monomials_up_to(ring, degree):
    for exp in itertools.product(range(degree + 1), repeat=ring.nvars):
        if sum(exp) <= degree:
            yield exp


def linalg_member(f, generators, degree):
    """Membership of f in the span of monomial multiples of the generators
    up to total degree `degree`: pure echelon reduction, no division."""
    ring = f.ring
    order = TermOrder.grevlex(ring.nvars)
    echelon = {}
    for g in generators:
        for exp in monomials_up_to(ring, degree):
            if g.is_zero() or g.total_degree() + sum(exp) > degree:
                continue
            q = g.mul_term(exp, 1)
            q = _echelon_reduce(q, echelon, order)
            if not q.is_zero():
                echelon[q.leading(order)[0]] = q
    return _echelon_reduce(f, echelon, order).is_zero()


def _echelon_reduce(f, echelon, order):
    while not f.is_zero():
        lm, lc = f.leading(order)
        row = echelon.get(lm)
        if row is None:
            return f
        _, rc = row.leading(order)
        f = f - row.scale(lc * pow(rc, -1, f.ring.p))
    return f


def random_poly(rng, ring, max_degree=3, max_terms=3, allow_zero=False):
    terms = {}
    for _ in range(rng.randint(0 if allow_zero else 1, max_terms)):
        exp = [0] * ring.nvars
        for _ in range(rng.randint(0, max_degree)):
            exp[rng.randrange(ring.nvars)] += 1
        terms[tuple(exp)] = rng.randint(1, ring.char - 1)
    return Polynomial(ring, terms)


# -- parsing and serialization ------------------------------------------------


def test_parse_grammar():
    ring = PolyRing(7, ("x", "y"))
    f = parse_polynomial("3x^2y + 2*y - 5", ring)
    assert f == Polynomial(ring, {(2, 1): 3, (0, 1): 2, (0, 0): -5})
    assert parse_polynomial("-(x - y)^2", ring) == -(ring.variable(0) - ring.variable(1)) ** 2
    assert parse_polynomial("x0 + 1", PolyRing(5, ("x0", "x1"))).total_degree() == 1


@pytest.mark.parametrize(
    "text", ["", "x +", "z", "x^", "(x", "x ? y", "2^x"]
)
def test_parse_errors_carry_position(text):
    ring = PolyRing(5, ("x", "y"))
    with pytest.raises(PolyParseError) as err:
        parse_polynomial(text, ring)
    assert err.value.position >= 0


def test_text_and_json_round_trip():
    ring = PolyRing(5, ("x", "y"))
    rng = random.Random(0)
    for _ in range(30):
        f = random_poly(rng, ring, allow_zero=True)
        assert parse_polynomial(f.to_text(), ring) == f or f.is_zero()
        assert poly_from_json(f.to_json()) == f


# -- ring arithmetic -----------------------------------------------------------


@settings(max_examples=60, derandomize=True)
@given(st.integers(min_value=0, max_value=10 ** 6), st.data())
def test_partial_derivative_leibniz(seed, data):
    p = data.draw(st.sampled_from([2, 3, 5]))
    ring = PolyRing(p, ("x", "y"))
    rng = random.Random(seed)
    f = random_poly(rng, ring)
    g = random_poly(rng, ring)
    for i in range(2):
        assert (f * g).partial(i) == f.partial(i) * g + f * g.partial(i)


def test_partial_examples():
    ring = PolyRing(5, ("x", "y"))
    f = parse_polynomial("y^2 - x^3", ring)
    assert f.partial(0) == parse_polynomial("2x^2", ring)
    assert f.partial(1) == parse_polynomial("2y", ring)
    assert ring.variable(0).frobenius_power().partial(0).is_zero()
    assert ring.constant(3).partial(1).is_zero()
    with pytest.raises(IndexError):
        f.partial(2)


def test_pth_root_examples():
    ring2 = PolyRing(2, ("x", "y"))
    assert pth_root_poly(parse_polynomial("x^2 + y^2", ring2)) == parse_polynomial("x + y", ring2)
    assert pth_root_poly(ring2.variable(0)) is None
    ring5 = PolyRing(5, ("x",))
    assert pth_root_poly(parse_polynomial("x^5", ring5)) == ring5.variable(0)


@settings(max_examples=40, derandomize=True)
@given(st.integers(min_value=0, max_value=10 ** 6), st.sampled_from([2, 3, 5]))
def test_pth_root_inverts_frobenius_power(seed, p):
    ring = PolyRing(p, ("x", "y"))
    f = random_poly(random.Random(seed), ring)
    power = f.frobenius_power()
    assert power == f ** p
    root = pth_root_poly(power)
    assert root == f
    maybe = pth_root_poly(f)
    if maybe is not None:
        assert maybe ** p == f


# -- Groebner bases ------------------------------------------------------------


def test_buchberger_known_basis():
    ring = PolyRing(2, ("x", "y"))
    order = TermOrder.lex(2, perm=(1, 0))  # y ranked above x
    ideal = buchberger(
        Ideal.from_polys(ring, [parse_polynomial("y - x^2", ring), parse_polynomial("x*y - 1", ring)]),
        order,
    )
    texts = sorted(g.to_text(order) for g in ideal.basis)
    assert texts == ["x^3 + 1", "y + x^2"]


def test_buchberger_trivial_cases():
    ring = PolyRing(5, ("x", "y"))
    assert buchberger(Ideal.from_polys(ring, [ring.variable(0)])).basis == (ring.variable(0),)
    assert buchberger(Ideal.from_polys(ring, [])).basis == ()
    unit = buchberger(Ideal.from_polys(ring, [ring.constant(3)]))
    assert unit.basis == (ring.one(),)


def test_buchberger_is_a_groebner_basis():
    # all S-polynomials of the reduced basis reduce to zero
    ring = PolyRing(3, ("x", "y", "z"))
    rng = random.Random(5)
    for _ in range(15):
        gens = [random_poly(rng, ring, max_degree=2, max_terms=3) for _ in range(2)]
        gb = buchberger(Ideal.from_polys(ring, gens))
        order = gb.basis_order
        basis = gb.basis
        for i in range(len(basis)):
            for j in range(i):
                lm_i, lc_i = basis[i].leading(order)
                lm_j, lc_j = basis[j].leading(order)
                lcm = tuple(max(a, b) for a, b in zip(lm_i, lm_j))
                s = basis[i].mul_term(
                    tuple(a - b for a, b in zip(lcm, lm_i)), pow(lc_i, -1, 3)
                ) - basis[j].mul_term(tuple(a - b for a, b in zip(lcm, lm_j)), pow(lc_j, -1, 3))
                assert normal_form(s, gb).is_zero()


def test_buchberger_order_stable_and_permutation_invariant():
    ring = PolyRing(5, ("x", "y", "z"))
    rng = random.Random(11)
    for _ in range(10):
        gens = [random_poly(rng, ring, max_degree=3, max_terms=3) for _ in range(3)]
        first = buchberger(Ideal.from_polys(ring, gens)).basis
        again = buchberger(Ideal.from_polys(ring, gens)).basis
        permuted = buchberger(Ideal.from_polys(ring, gens[::-1])).basis
        assert first == again == permuted


def test_normal_form_examples():
    ring = PolyRing(5, ("x", "y"))
    order = TermOrder.lex(2, perm=(1, 0))
    cusp = buchberger(Ideal.from_polys(ring, [parse_polynomial("y^2 - x^3", ring)]), order)
    assert normal_form(parse_polynomial("y^2", ring), cusp) == parse_polynomial("x^3", ring)
    gb_x = buchberger(Ideal.from_polys(ring, [ring.variable(0)]))
    assert normal_form(ring.variable(0), gb_x).is_zero()
    gb_xy = buchberger(Ideal.from_polys(ring, [ring.variable(0), ring.variable(1)]))
    assert normal_form(ring.one(), gb_xy) == ring.one()


def test_normal_form_requires_field_mode_and_cache():
    ring = PolyRing(5, ("x",), exponent=2)
    f = ring.variable(0)
    with pytest.raises(FieldModeError):
        normal_form(f, Ideal.from_polys(ring, [f]))
    good = PolyRing(5, ("x",))
    with pytest.raises(ValueError):
        normal_form(good.variable(0), Ideal.from_polys(good, [good.variable(0)]))


@pytest.mark.parametrize("p", [2, 3])
def test_membership_matches_linear_algebra(p):
    ring = PolyRing(p, ("x", "y"))
    rng = random.Random(p)
    for _ in range(25):
        gens = [random_poly(rng, ring, max_degree=2, max_terms=2) for _ in range(2)]
        gb = buchberger(Ideal.from_polys(ring, gens))
        f = random_poly(rng, ring, max_degree=3, max_terms=3, allow_zero=True)
        claimed = normal_form(f, gb).is_zero()
        degree = max(f.total_degree(), 0) + sum(max(g.total_degree(), 0) for g in gens) + 2
        if claimed:
            assert linalg_member(f, gens, degree)
        else:
            assert not linalg_member(f, gens, degree)


def test_eliminate_examples():
    ring = PolyRing(5, ("x", "t1", "t2"))
    ideal = Ideal.from_polys(
        ring, [parse_polynomial("t1 - x^2", ring), parse_polynomial("t2 - x^3", ring)]
    )
    got = eliminate(ideal, [1, 2])
    assert [g.to_text() for g in got.basis] == ["t1^3 + 4*t2^2"]

    ring2 = PolyRing(5, ("x", "y"))
    assert eliminate(Ideal.from_polys(ring2, [ring2.variable(0)]), [0]).basis == (ring2.variable(0),)
    gone = eliminate(
        Ideal.from_polys(ring2, [parse_polynomial("x - y", ring2)]), [1]
    )
    assert gone.basis == ()


def test_eliminate_properties():
    ring = PolyRing(3, ("x", "y", "z"))
    rng = random.Random(21)
    for _ in range(10):
        gens = [random_poly(rng, ring, max_degree=2, max_terms=2) for _ in range(2)]
        gb = buchberger(Ideal.from_polys(ring, gens))
        kept = eliminate(Ideal.from_polys(ring, gens), [1, 2])
        for g in kept.basis:
            assert g.variables_used() <= {1, 2}
            assert normal_form(g, gb).is_zero()  # eliminate(I, S) is inside I


def test_pth_root_ideal_examples():
    ring = PolyRing(5, ("x", "y"))
    x, y = ring.variable(0), ring.variable(1)
    assert [g.to_text() for g in pth_root_ideal(Ideal.from_polys(ring, [x])).basis] == ["x"]
    got = pth_root_ideal(Ideal.from_polys(ring, [parse_polynomial("x^5", ring), y]))
    assert sorted(g.to_text() for g in got.basis) == ["x", "y"]
    assert pth_root_ideal(Ideal.from_polys(ring, [ring.one()])).contains_one()
    assert pth_root_ideal(Ideal.from_polys(ring, [])).basis == ()


@pytest.mark.parametrize("p", [2, 3])
def test_pth_root_ideal_membership_property(p):
    ring = PolyRing(p, ("x", "y"))
    rng = random.Random(p * 7)
    for _ in range(10):
        gens = [random_poly(rng, ring, max_degree=2, max_terms=2)]
        ideal = Ideal.from_polys(ring, gens)
        roots = pth_root_ideal(ideal)
        gb = buchberger(ideal)
        for _ in range(8):
            g = random_poly(rng, ring, max_degree=2, max_terms=2, allow_zero=True)
            in_roots = normal_form(g, roots).is_zero()
            power_in_ideal = normal_form(g ** p, gb).is_zero()
            assert in_roots == power_in_ideal


def test_krull_dim_examples():
    ring = PolyRing(5, ("x", "y"))
    assert krull_dim(Ideal.from_polys(ring, [])) == 2
    assert krull_dim(Ideal.from_polys(ring, [parse_polynomial("y^2 - x^3", ring)])) == 1
    assert krull_dim(Ideal.from_polys(ring, [ring.one()])) == -1
    assert krull_dim(Ideal.from_polys(ring, [parse_polynomial("x*y", ring)])) == 1
    assert krull_dim(Ideal.from_polys(ring, [ring.variable(0), ring.variable(1)])) == 0
    three = PolyRing(5, ("x", "y", "z"))
    assert krull_dim(Ideal.from_polys(three, [])) == 3


def test_ideal_equal():
    ring = PolyRing(5, ("x", "y"))
    a = Ideal.from_polys(ring, [parse_polynomial("y^2 - x^3", ring)])
    b = Ideal.from_polys(ring, [parse_polynomial("2y^2 - 2x^3", ring)])
    assert ideal_equal(a, b)
    assert not ideal_equal(a, Ideal.from_polys(ring, [ring.variable(0)]))


def test_ring_validation():
    with pytest.raises(ValueError):
        PolyRing(4, ("x",))
    with pytest.raises(ValueError):
        PolyRing(5, ("x", "x"))
    with pytest.raises(ValueError):
        PolyRing(2 ** 16 + 1, ("x",))
