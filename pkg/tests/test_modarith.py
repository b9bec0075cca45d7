"""Linear algebra over Z/p^N against brute-force oracles."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from wittcert.modarith import (
    ModularMatrix,
    Modulus,
    Residue,
    SubmoduleBasis,
    is_prime,
    kernel_basis,
    smith_normal_form,
    solve_linear,
    submodule_membership,
)

DESK_MODULI = [Modulus(2, 1), Modulus(2, 2), Modulus(3, 1), Modulus(3, 3), Modulus(5, 2)]


def brute_force_span(mod, gens, ambient):
    """Every Z/p^N combination of the generators; desk scale only."""
    q = mod.char
    span = set()
    for coeffs in itertools.product(range(q), repeat=len(gens)):
        vec = tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) % q for i in range(ambient))
        span.add(vec)
    return span


def test_modulus_validation():
    with pytest.raises(ValueError):
        Modulus(4, 1)
    with pytest.raises(ValueError):
        Modulus(7, 0)
    assert Modulus(7, 2).char == 49


def test_residue_arithmetic_and_mixed_moduli():
    m = Modulus(3, 2)
    a = Residue(7, m)
    b = Residue(5, m)
    assert (a + b).value == 3
    assert (a * b).value == 35 % 9
    assert (-a).value == 2
    assert a.valuation() == 0
    assert Residue(3, m).valuation() == 1
    assert Residue(0, m).valuation() == 2
    with pytest.raises(ValueError):
        a + Residue(1, Modulus(3, 3))
    with pytest.raises(ValueError):
        Residue(3, m).inverse()


def test_is_prime_small():
    assert [n for n in range(2, 30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_smith_diagonal_already_diagonal():
    m = Modulus(2, 3)
    mat = ModularMatrix(m, [[2, 0], [0, 4]])
    snf = smith_normal_form(mat)
    assert [d.value for d in snf.diag] == [2, 4]
    assert snf.left @ mat @ snf.right == snf.diagonal_matrix(2, 2)


def test_smith_zero_matrix():
    m = Modulus(3, 2)
    snf = smith_normal_form(ModularMatrix.zero(m, 2, 2))
    assert [d.value for d in snf.diag] == [0, 0]


def test_smith_rank_one_over_z9():
    m = Modulus(3, 2)
    mat = ModularMatrix(m, [[1, 1], [1, 1]])
    snf = smith_normal_form(mat)
    assert [d.value for d in snf.diag] == [1, 0]
    assert snf.left @ mat @ snf.right == snf.diagonal_matrix(2, 2)
    assert snf.left.is_invertible() and snf.right.is_invertible()


@pytest.mark.parametrize("seed", range(6))
def test_smith_transform_identity_random(seed):
    rng = random.Random(seed)
    for mod in DESK_MODULI:
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        mat = ModularMatrix(mod, [[rng.randrange(mod.char) for _ in range(cols)] for _ in range(rows)])
        snf = smith_normal_form(mat)
        assert snf.left @ mat @ snf.right == snf.diagonal_matrix(rows, cols)
        assert snf.left.is_invertible()
        assert snf.right.is_invertible()
        # Diagonal entries are powers of p (or zero), sorted by valuation.
        vals = [d.valuation() for d in snf.diag]
        assert vals == sorted(vals)
        for d in snf.diag:
            if d.value:
                assert d.value == mod.p ** d.valuation()


def test_membership_trivial_cases():
    m = Modulus(5, 2)
    s = SubmoduleBasis(m, 2, [(5, 0)])
    assert submodule_membership((0, 0), s)
    assert submodule_membership((5, 0), s)
    assert not submodule_membership((1, 0), s)
    with pytest.raises(ValueError):
        submodule_membership((1, 0, 0), s)


@pytest.mark.parametrize("seed", range(8))
def test_membership_agrees_with_enumeration(seed):
    rng = random.Random(100 + seed)
    for mod in [Modulus(2, 2), Modulus(3, 3), Modulus(5, 1)]:
        if mod.char > 27:
            continue
        ambient = rng.randint(1, 3)
        gens = [tuple(rng.randrange(mod.char) for _ in range(ambient)) for _ in range(rng.randint(0, 3))]
        basis = SubmoduleBasis(mod, ambient, gens)
        span = brute_force_span(mod, gens, ambient)
        for _ in range(12):
            v = tuple(rng.randrange(mod.char) for _ in range(ambient))
            assert basis.contains(v) == (v in span)
        for v in list(span)[:12]:
            assert basis.contains(v)


@pytest.mark.parametrize("seed", range(8))
def test_howell_form_is_generator_independent(seed):
    rng = random.Random(200 + seed)
    mod = Modulus(2, 3)
    ambient = 3
    gens = [tuple(rng.randrange(8) for _ in range(ambient)) for _ in range(3)]
    a = SubmoduleBasis(mod, ambient, gens)
    shuffled = gens[::-1]
    mixed = gens + [tuple((x + y) % 8 for x, y in zip(gens[0], gens[1]))]
    assert a == SubmoduleBasis(mod, ambient, shuffled)
    assert a == SubmoduleBasis(mod, ambient, mixed)


def test_solve_trivial_and_zero_divisor():
    m = Modulus(5, 2)
    ident = ModularMatrix.identity(m, 3)
    assert solve_linear(ident, (3, 7, 24)) == (3, 7, 24)
    pmat = ModularMatrix(m, [[5]])
    assert solve_linear(pmat, (1,)) is None
    x = solve_linear(pmat, (5,))
    assert x is not None and (5 * x[0]) % 25 == 5


@pytest.mark.parametrize("seed", range(8))
def test_solve_agrees_with_enumeration(seed):
    rng = random.Random(300 + seed)
    for mod in [Modulus(2, 2), Modulus(3, 2)]:
        rows = rng.randint(1, 3)
        cols = rng.randint(1, 3)
        mat = ModularMatrix(mod, [[rng.randrange(mod.char) for _ in range(cols)] for _ in range(rows)])
        b = tuple(rng.randrange(mod.char) for _ in range(rows))
        solutions = [
            x
            for x in itertools.product(range(mod.char), repeat=cols)
            if mat.apply(x) == tuple(v % mod.char for v in b)
        ]
        got = solve_linear(mat, b)
        if solutions:
            assert got is not None and mat.apply(got) == tuple(v % mod.char for v in b)
        else:
            assert got is None


@pytest.mark.parametrize("seed", range(6))
def test_kernel_basis_generates_kernel(seed):
    rng = random.Random(400 + seed)
    mod = Modulus(3, 2)
    rows, cols = rng.randint(1, 3), rng.randint(1, 3)
    mat = ModularMatrix(mod, [[rng.randrange(9) for _ in range(cols)] for _ in range(rows)])
    gens = kernel_basis(mat)
    for g in gens:
        assert not any(mat.apply(g))
    span = brute_force_span(mod, gens, cols)
    true_kernel = {
        x for x in itertools.product(range(9), repeat=cols) if not any(mat.apply(x))
    }
    assert span == true_kernel


@settings(max_examples=60, derandomize=True)
@given(st.lists(st.integers(min_value=0, max_value=26), min_size=2, max_size=2))
def test_reduce_vector_is_canonical(vec):
    mod = Modulus(3, 3)
    basis = SubmoduleBasis(mod, 2, [(3, 1), (0, 9)])
    reduced = basis.reduce_vector(vec)
    assert basis.contains(tuple((a - b) % 27 for a, b in zip(vec, reduced)))
    # Reducing twice is stable.
    assert basis.reduce_vector(reduced) == reduced
