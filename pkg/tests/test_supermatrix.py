import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from supercurves.errors import DimensionError, NotInvertibleError, ParityError
from supercurves.grassmann import GrassmannScalar
from supercurves.supermatrix import (
    SuperLinearSystem,
    SuperMatrix,
    apply_row_vector,
    ber_star_substituted,
    ber_substituted,
    berezinian,
    berezinian_star,
    det_even,
    det_even_laplace,
    invert_matrix,
    oracle_solve,
    quasideterminant,
    random_even_matrix,
    random_vector,
    solve_cramer,
    solve_via_inverse,
)

N = 2


def g(v):
    return GrassmannScalar.scalar(N, v)


def gen(i):
    return GrassmannScalar.generator(N, i)


@pytest.fixture
def example_11():
    """[[1, b1], [b2, 1]] of shape (1|1)."""
    return SuperMatrix((1, 1), (1, 1), [[g(1), gen(0)], [gen(1), g(1)]])


def test_ber_identity_matrix():
    for shape in [(1, 1), (2, 1), (2, 3)]:
        A = SuperMatrix.identity(shape, N)
        assert berezinian(A) == g(1)
        assert berezinian_star(A) == g(1)


def test_ber_example(example_11):
    b12 = gen(0) * gen(1)
    assert berezinian(example_11) == g(1) - b12
    assert berezinian_star(example_11) == g(1) + b12
    assert berezinian(example_11) * berezinian_star(example_11) == g(1)


def test_ber_pure_parity_blocks():
    one = GrassmannScalar.one(N)
    zero = GrassmannScalar.zero(N)
    Y = SuperMatrix((0, 2), (0, 2), [[one * 2, zero], [zero, one * 4]])
    assert berezinian(Y).isclose(g(1 / 8), 1e-14)
    assert berezinian_star(Y).isclose(g(8), 1e-13)
    X = SuperMatrix((2, 0), (2, 0), [[one * 2, zero], [zero, one * 4]])
    assert berezinian(X).isclose(g(8), 1e-13)
    assert berezinian_star(X).isclose(g(1 / 8), 1e-14)


def test_ber_requires_even(example_11):
    bad = SuperMatrix((1, 1), (1, 1), [[gen(0), g(1)], [g(1), g(1)]])
    with pytest.raises(ParityError):
        berezinian(bad)


def test_ber_singular_reduced_block():
    A = SuperMatrix((1, 1), (1, 1), [[g(1), gen(0)], [gen(1), g(0)]])
    with pytest.raises(NotInvertibleError):
        berezinian(A)


def test_det_even_examples():
    assert det_even([[g(2), g(0)], [g(0), g(3)]], N) == g(6)
    b12 = gen(0) * gen(1)
    M = [[g(1), b12], [b12, g(1)]]
    assert det_even(M, N) == g(1)  # cross term kills itself
    a = g(2) + b12
    assert det_even([[a]], N) == a


def test_det_even_agrees_with_laplace(rng):
    from supercurves.grassmann import random_element

    n = 4
    for size in (2, 3, 4):
        M = [[random_element(rng, n, parity=0) for _ in range(size)] for _ in range(size)]
        fast = det_even(M, n)
        slow = det_even_laplace(M, n)
        assert (fast - slow).norm_inf() < 1e-9


def test_det_even_rejects_odd_entries():
    with pytest.raises(ParityError):
        det_even([[gen(0)]], N)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2 ** 16), size=st.integers(1, 3))
def test_det_even_transpose_invariance(seed, size):
    from supercurves.grassmann import random_element

    r = np.random.default_rng(seed)
    M = [[random_element(r, 4, parity=0) for _ in range(size)] for _ in range(size)]
    Mt = [[M[j][i] for j in range(size)] for i in range(size)]
    assert (det_even(M, 4) - det_even(Mt, 4)).norm_inf() < 1e-9


def test_quasidet_commutative_degeneration(rng):
    # 2x2 over plain numbers: |A|_11 = a11 - a12 a22^-1 a21 = det A / a22
    vals = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    A = SuperMatrix((2, 0), (2, 0), [[g(vals[0, 0]), g(vals[0, 1])],
                                     [g(vals[1, 0]), g(vals[1, 1])]])
    q = quasideterminant(A, 0, 0)
    want = np.linalg.det(vals) / vals[1, 1]
    assert abs(q.body - want) < 1e-12


def test_quasidet_identity():
    A = SuperMatrix.identity((2, 1), N)
    for i in range(3):
        assert quasideterminant(A, i, i) == g(1)


def test_quasidet_berezinian_quotients(rng):
    n = 4
    for _ in range(10):
        A = random_even_matrix(rng, (2, 2), n)
        lhs = quasideterminant(A, 0, 0) * berezinian(A.delete(0, 0))
        assert (lhs - berezinian(A)).norm_inf() < 1e-9
        lhs_odd = quasideterminant(A, 3, 3) * berezinian_star(A.delete(3, 3))
        assert (lhs_odd - berezinian_star(A)).norm_inf() < 1e-9


def test_quasidet_mixed_parity_rejected(example_11):
    with pytest.raises(ParityError):
        quasideterminant(example_11, 0, 1)


def test_invert_matrix_examples():
    assert invert_matrix(SuperMatrix.identity((1, 1), N)).isclose(
        SuperMatrix.identity((1, 1), N), 0)
    A = SuperMatrix((1, 1), (1, 1), [[g(2), gen(0)], [gen(1), g(1)]])
    Ainv = invert_matrix(A)
    b12 = gen(0) * gen(1)
    expect = SuperMatrix((1, 1), (1, 1), [
        [g(0.5) + b12 * 0.25, gen(0) * (-0.5)],
        [gen(1) * (-0.5), g(1) - b12 * 0.5],
    ])
    assert Ainv.isclose(expect, 1e-13)
    assert (A @ Ainv).isclose(SuperMatrix.identity((1, 1), N), 1e-13)
    assert (Ainv @ A).isclose(SuperMatrix.identity((1, 1), N), 1e-13)


def test_inverse_entries_are_quasidet_inverses(rng):
    n = 4
    A = random_even_matrix(rng, (2, 1), n)
    B = invert_matrix(A)
    for i in range(3):
        for j in range(3):
            if (i < 2) != (j < 2):
                continue  # mixed-parity quasidets do not exist over Lambda
            q = quasideterminant(A, j, i)
            if abs(q.body) < 1e-6:
                continue
            assert (B.entries[i][j] - q.invert()).norm_inf() < 1e-8


def test_singular_body_raises():
    A = SuperMatrix((1, 0), (1, 0), [[g(0) + gen(0) * gen(1)]])
    with pytest.raises(NotInvertibleError):
        invert_matrix(A)


def test_cramer_worked_example():
    A = SuperMatrix((1, 1), (1, 1), [[g(2), gen(0)], [gen(1), g(1)]])
    y = [g(1), g(0)]
    x = solve_cramer(SuperLinearSystem(A, y))
    b12 = gen(0) * gen(1)
    assert (x[0] - (g(0.5) + b12 * 0.25)).norm_inf() < 1e-13
    assert (x[1] - gen(0) * (-0.5)).norm_inf() < 1e-13


def test_cramer_identity_any_rhs(rng):
    A = SuperMatrix.identity((2, 2), 4)
    y = random_vector(rng, 4, 4)
    x = solve_cramer(SuperLinearSystem(A, y))
    for a, b in zip(x, y):
        assert (a - b).norm_inf() < 1e-12


def test_cramer_three_routes_and_residual(rng):
    n = 4
    for shape in [(1, 1), (2, 1), (2, 2), (3, 3)]:
        A = random_even_matrix(rng, shape, n)
        y = random_vector(rng, shape[0] + shape[1], n)
        system = SuperLinearSystem(A, y)
        xc = solve_cramer(system)
        xo = oracle_solve(system)
        xi = solve_via_inverse(system)
        for a, b in zip(xc, xo):
            assert (a - b).norm_inf() < 1e-9
        for a, b in zip(xc, xi):
            assert (a - b).norm_inf() < 1e-9
        for a, b in zip(apply_row_vector(xc, A), y):
            assert (a - b).norm_inf() < 1e-9


def test_substituted_ber_column_independence(rng):
    n = 4
    A = random_even_matrix(rng, (3, 3), n)
    y = random_vector(rng, 6, n)
    even_vals = [ber_substituted(A, 1, y, j=j) for j in range(3)]
    odd_vals = [ber_star_substituted(A, 4, y, j=j) for j in range(3, 6)]
    for v in even_vals[1:]:
        assert (v - even_vals[0]).norm_inf() < 1e-9
    for v in odd_vals[1:]:
        assert (v - odd_vals[0]).norm_inf() < 1e-9


def test_substituted_ber_recovers_plain_ber(rng):
    n = 4
    A = random_even_matrix(rng, (2, 2), n)
    assert (ber_substituted(A, 0, A.row(0)) - berezinian(A)).norm_inf() < 1e-9
    assert (ber_star_substituted(A, 3, A.row(3)) - berezinian_star(A)).norm_inf() < 1e-9
    # substituting a different row of A gives zero (solution of x A = row_k is e_k)
    assert ber_substituted(A, 0, A.row(1)).norm_inf() < 1e-9


def test_row_properties_P1_P2(rng):
    from supercurves.grassmann import random_element

    n = 4
    A = random_even_matrix(rng, (2, 2), n)
    lam = random_element(rng, n, parity=0, body=2.0 - 0.5j)
    B = A.with_row(0, [lam * e for e in A.entries[0]])
    assert (quasideterminant(B, 0, 0) - lam * quasideterminant(A, 0, 0)).norm_inf() < 1e-9
    assert (quasideterminant(B, 1, 1) - quasideterminant(A, 1, 1)).norm_inf() < 1e-9
    # P2: add last row to row 1; quasidets away from the added row are unchanged
    C = A.with_row(1, [a + b for a, b in zip(A.entries[1], A.entries[3])])
    assert (quasideterminant(C, 0, 0) - quasideterminant(A, 0, 0)).norm_inf() < 1e-9
    assert (quasideterminant(C, 1, 1) - quasideterminant(A, 1, 1)).norm_inf() < 1e-9


def test_cramer_all_odd_shape(rng):
    A = random_even_matrix(rng, (0, 2), 4)
    y = random_vector(rng, 2, 4)
    xc = solve_cramer(SuperLinearSystem(A, y))
    xo = oracle_solve(SuperLinearSystem(A, y))
    assert max((a - b).norm_inf() for a, b in zip(xc, xo)) < 1e-9


def test_six_generator_stress(rng):
    n = 6
    A = random_even_matrix(rng, (2, 2), n)
    B = random_even_matrix(rng, (2, 2), n)
    assert (berezinian(A @ B) - berezinian(A) * berezinian(B)).norm_inf() < 1e-9
    assert (berezinian(A) * berezinian_star(A) - GrassmannScalar.one(n)).norm_inf() < 1e-10
    y = random_vector(rng, 4, n)
    xc = solve_cramer(SuperLinearSystem(A, y))
    xo = oracle_solve(SuperLinearSystem(A, y))
    assert max((a - b).norm_inf() for a, b in zip(xc, xo)) < 1e-9


def test_oracle_on_singular_system():
    A = SuperMatrix((1, 0), (1, 0), [[g(0)]])
    with pytest.raises(NotInvertibleError):
        oracle_solve(SuperLinearSystem(A, [g(1)]))


def test_shape_mismatch():
    A = SuperMatrix.identity((1, 1), N)
    with pytest.raises(DimensionError):
        SuperLinearSystem(A, [g(1)])
    with pytest.raises(DimensionError):
        A @ SuperMatrix.identity((2, 1), N)


def _supertrace(M):
    k = M.row_shape[0]
    acc = GrassmannScalar.zero(M.n)
    for i in range(M.nrows):
        acc = acc + (M.entries[i][i] if i < k else -M.entries[i][i])
    return acc


def _matrix_exp(X, terms=40):
    acc = SuperMatrix.identity(X.row_shape, X.n)
    power = SuperMatrix.identity(X.row_shape, X.n)
    for m in range(1, terms):
        power = power @ X
        power = power.scale(1.0 / m)
        acc = acc + power
        if power.max_coeff() < 1e-18:
            break
    return acc


def test_ber_of_exponential_is_exp_of_supertrace(rng):
    # independent route into the block formula: ber(exp X) = exp(Str X)
    n = 4
    for shape in [(1, 1), (2, 1), (2, 2)]:
        X = random_even_matrix(rng, shape, n, soul_scale=0.3)
        X = X.scale(0.35)  # keep the series well inside convergence
        lhs = berezinian(_matrix_exp(X))
        rhs = _supertrace(X).exp()
        assert (lhs - rhs).norm_inf() < 1e-9
        lhs_star = berezinian_star(_matrix_exp(X))
        rhs_star = (-_supertrace(X)).exp()
        assert (lhs_star - rhs_star).norm_inf() < 1e-9


def test_matrix_json_roundtrip(rng):
    A = random_even_matrix(rng, (2, 1), 4)
    B = SuperMatrix.from_json(A.to_json())
    assert B.isclose(A, 0)
    assert B.row_shape == A.row_shape and B.col_shape == A.col_shape
