import pytest

from supercurves.errors import BigCellError, ParityError
from supercurves.grassmann import GrassmannScalar
from supercurves import sgr

N = 4


def g(v):
    return GrassmannScalar.scalar(N, v)


def mono(idx, c=1.0):
    return GrassmannScalar.monomial(N, idx, c)


@pytest.fixture
def window():
    return sgr.TruncationWindow(M=6)


@pytest.fixture
def banded_frame(window):
    sym = {("z", 1): g(0.22 - 0.1j) + mono([0, 1], 0.15),
           ("z", 2): g(-0.11 + 0.06j),
           ("ztheta", 1): mono([2], 0.3)}
    band, warn = sgr.multiplication_matrix(window, sym, N)
    assert not warn
    return sgr.exp_band_apply(band, sgr.standard_frame(window, N))


# -- multiplication matrices -----------------------------------------------------


def test_unit_symbol_is_identity(window):
    op, _ = sgr.multiplication_matrix(window, {("z", 0): g(1)}, N)
    assert sorted(op.entries) == sorted((d, d) for d in window.indices)
    assert all(v == g(1) for v in op.entries.values())


def test_z_inverse_band_covers_both_lines(window):
    op, _ = sgr.multiplication_matrix(window, {("z", -1): g(1)}, N)
    for d in window.indices:
        if window.contains(d - 2):
            assert op.entries[(d - 2, d)] == g(1)


def test_lambda_plus_mu_is_z_power(window):
    for nn in (1, 2):
        combo, _ = sgr.multiplication_matrix(
            window, {("lambda", nn): g(1), ("mu", nn): g(1)}, N)
        direct, _ = sgr.multiplication_matrix(window, {("z", -nn): g(1)}, N)
        assert combo.entries == direct.entries


def test_composition_matches_symbol_product(window):
    sym_a = {(1, 0): g(0.5), (-1, 1): mono([0], 0.3)}
    sym_b = {(-2, 0): g(1.0 + 0.5j), (1, 1): mono([1], 0.7)}
    a, _ = sgr.multiplication_matrix(window, sgr.symbol_of_jheis(sym_a), N)
    b, _ = sgr.multiplication_matrix(window, sgr.symbol_of_jheis(sym_b), N)
    prod = a @ b
    want, _ = sgr.multiplication_matrix(
        window, sgr.symbol_of_jheis(sgr.symbol_mul(sym_a, sym_b, N)), N)
    interior = [d for d in window.indices if abs(d) <= 2 * window.M - 6]
    for r in interior:
        for c in interior:
            lhs = prod.entries.get((r, c), GrassmannScalar.zero(N))
            rhs = want.entries.get((r, c), GrassmannScalar.zero(N))
            assert (lhs - rhs).norm_inf() < 1e-12


def test_band_warning_flag():
    win = sgr.TruncationWindow(M=2)
    _, warn = sgr.multiplication_matrix(win, {("z", -5): g(1)}, N)
    assert warn
    _, warn = sgr.multiplication_matrix(win, {("z", -1): g(1)}, N)
    assert not warn


def test_parity_enforcement(window):
    with pytest.raises(ParityError):
        sgr.multiplication_matrix(window, {("z", 1): mono([0], 1.0)}, N)
    with pytest.raises(ParityError):
        sgr.multiplication_matrix(window, {("ztheta", 1): g(1.0)}, N)


# -- big cell ----------------------------------------------------------------------


def test_standard_frame_in_big_cell(window):
    ok, normalized = sgr.big_cell_test(sgr.standard_frame(window, N))
    assert ok
    assert all((a - b).norm_inf() == 0
               for ra, rb in zip(normalized.entries, sgr.standard_frame(window, N).entries)
               for a, b in zip(ra, rb))


def test_zero_body_column_fails(window):
    frame = sgr.standard_frame(window, N)
    col = window.neg_indices.index(-2)
    frame.entries[window.indices.index(-2)][col] = mono([0, 1], 0.5)
    ok, _ = sgr.big_cell_test(frame)
    assert not ok


def test_delta_example_fails_big_cell(window):
    # column delta + z with nilpotent delta does not project onto e_0
    delta = mono([0, 1], 0.4)
    frame = sgr.standard_frame(window, N)
    col0 = window.neg_indices.index(0)
    frame.entries[window.indices.index(0)][col0] = delta
    frame.entries[window.indices.index(2)][col0] = g(1)
    ok, _ = sgr.big_cell_test(frame)
    assert not ok


def test_normalized_frame_has_unit_minus_block(banded_frame):
    ok, normalized = sgr.big_cell_test(banded_frame)
    assert ok
    A = sgr.minus_block(normalized)
    from supercurves.supermatrix import SuperMatrix
    assert A.isclose(SuperMatrix.identity(A.row_shape, N), 1e-12)


# -- Baker vectors -------------------------------------------------------------------


def test_standard_frame_baker_vectors(window):
    vec = sgr.baker_vectors(sgr.standard_frame(window, N))
    assert set(vec.w_even) == {0} and vec.w_even[0] == g(1)
    assert set(vec.w_odd) == {-1} and vec.w_odd[-1] == g(1)
    assert vec.route_discrepancy() == 0.0


def test_two_route_baker_equality_random(rng, window):
    for _ in range(3):
        frame = sgr.random_big_cell_frame(rng, window, N)
        vec = sgr.baker_vectors(frame)
        assert vec.route_discrepancy() < 1e-9


def test_flowed_frame_baker_polynomial_in_flow(banded_frame):
    # leading coefficients after a single even flow, two routes compared
    for t1 in (0.1, 0.25, 0.4):
        t = sgr.HeisenbergElement(N, {2: g(t1)})
        flowed = sgr.flowed_frame(banded_frame, t)
        vec = sgr.baker_vectors(flowed)
        assert vec.route_discrepancy() < 1e-9


def test_baker_functions_leading_structure(banded_frame):
    w_even, w_odd = sgr.baker_functions(banded_frame)
    assert (w_even[(0, 0)] - g(1)).norm_inf() < 1e-12
    assert (w_odd[(0, 1)] - g(1)).norm_inf() < 1e-12
    assert all(m >= 0 for (m, _t) in w_even)
    assert all(m >= 0 for (m, _t) in w_odd)


def test_baker_requires_big_cell(window):
    frame = sgr.standard_frame(window, N)
    col0 = window.neg_indices.index(0)
    frame.entries[window.indices.index(0)][col0] = g(0)
    with pytest.raises(BigCellError):
        sgr.baker_vectors(frame)


# -- tau functions ---------------------------------------------------------------------


def test_tau_standard_frame_is_one(window, rng):
    frame = sgr.standard_frame(window, N)
    t = sgr.HeisenbergElement(N, {2: g(0.3 + 0.1j), 1: mono([0], 0.5), 4: g(-0.2)})
    val = sgr.tau(frame, t)
    assert val.finite
    assert (val.tau - g(1)).norm_inf() < 1e-12
    assert (val.tau_star - g(1)).norm_inf() < 1e-12


def test_tau_zero_flow_is_one(banded_frame):
    val = sgr.tau(banded_frame, sgr.HeisenbergElement(N, {}))
    assert (val.tau - g(1)).norm_inf() < 1e-12


def test_tau_times_tau_star_is_one(banded_frame):
    t = sgr.HeisenbergElement(N, {2: g(0.2), 1: mono([3], 0.4)})
    val = sgr.tau(banded_frame, t)
    assert val.finite
    assert (val.tau * val.tau_star - g(1)).norm_inf() < 1e-10


def test_tau_factorizable_shift_product_rule(window):
    # k = -log(1 + zeta/z + xi theta/z) with nilpotent zeta, xi: multiplication
    # by exp(-k) preserves the span of W = m(z) H_-, so tau(f + k) factorizes
    sym_m = {("z", 1): g(0.25), ("z", 2): g(0.1 - 0.05j)}
    band, _ = sgr.multiplication_matrix(window, sym_m, N)
    frame = sgr.exp_band_apply(band, sgr.standard_frame(window, N))
    phi_sym = {(-1, 0): mono([0, 1], 0.5), (-1, 1): mono([2], 0.3)}
    k_sym = sgr.symbol_log_unipotent(phi_sym, N)
    k = sgr.HeisenbergElement.from_symbol({key: -c for key, c in k_sym.items()}, N)
    f = sgr.HeisenbergElement(N, {2: g(0.12 + 0.04j), 4: g(-0.06), 1: mono([3], 0.3)})
    tau_f = sgr.tau(frame, f)
    tau_k = sgr.tau(frame, k)
    tau_fk = sgr.tau(frame, f + k)
    assert tau_f.finite and tau_k.finite and tau_fk.finite
    residual = (tau_fk.tau - tau_f.tau * tau_k.tau).norm_inf()
    assert residual < 1e-8


def test_tau_cocycle_property(window, rng):
    # tau_W(t+s) = tau_W(t) tau_{W(t)}(s) holds identically
    frame = sgr.random_big_cell_frame(rng, window, N)
    t = sgr.HeisenbergElement(N, {2: g(0.15)})
    s = sgr.HeisenbergElement(N, {4: g(0.1), 1: mono([0], 0.2)})
    lhs = sgr.tau(frame, t + s).tau
    rhs = sgr.tau(frame, t).tau * sgr.tau(sgr.flowed_frame(frame, t), s).tau
    assert (lhs - rhs).norm_inf() < 1e-10


def test_tau_pole_reported(window):
    # a frame engineered to leave the big cell under the flow
    frame = sgr.standard_frame(window, N)
    i0 = window.indices.index(0)
    col0 = window.neg_indices.index(0)
    frame.entries[i0][col0] = g(0.25)          # shrunk diagonal entry
    frame.entries[window.indices.index(2)][col0] = g(1.0)  # strong z-component
    t = sgr.HeisenbergElement(N, {2: g(0.25)})  # exp(-t z^-1) pushes z down to e_0
    val = sgr.tau(frame, t)
    assert not val.finite and val.tau is None


def test_heisenberg_parity_validation():
    with pytest.raises(ParityError):
        sgr.HeisenbergElement(N, {2: mono([0], 1.0)})
    with pytest.raises(ParityError):
        sgr.HeisenbergElement(N, {1: g(1.0)})


# -- Baker-tau quotient ------------------------------------------------------------------


def test_baker_tau_quotient_standard_frame(window):
    frame = sgr.standard_frame(window, N)
    rep = sgr.baker_tau_quotient_check(frame, sgr.HeisenbergElement(N, {}),
                                       [0.1], mono([3], 0.7))
    assert rep["max_residual"] < 1e-12


def test_baker_tau_quotient_generic(banded_frame):
    t = sgr.HeisenbergElement(N, {2: g(0.16 + 0.08j), 1: mono([0], 0.25)})
    rep = sgr.baker_tau_quotient_check(banded_frame, t, [0.1, 0.2], mono([3], 0.8))
    assert rep["max_residual"] < 1e-8


def test_window_stability(rng):
    sym = {("z", 1): g(0.22 - 0.1j) + mono([0, 1], 0.15),
           ("ztheta", 1): mono([2], 0.3)}
    t = sgr.HeisenbergElement(N, {2: g(0.16 + 0.08j), 1: mono([0], 0.25)})
    taus = []
    for M in (8, 12):
        win = sgr.TruncationWindow(M)
        band, _ = sgr.multiplication_matrix(win, sym, N)
        frame = sgr.exp_band_apply(band, sgr.standard_frame(win, N))
        taus.append(sgr.tau(frame, t).tau)
    assert (taus[0] - taus[1]).norm_inf() < 1e-6


# -- cocycle -----------------------------------------------------------------------------


def test_cocycle_vanishes_on_one_sided_pairs(window):
    X, _ = sgr.multiplication_matrix(window, {("z", -2): g(1)}, N)
    Y, _ = sgr.multiplication_matrix(window, {("z", -1): g(1)}, N)
    assert sgr.cocycle(X, Y).is_zero()
    Xp, _ = sgr.multiplication_matrix(window, {("z", 2): g(1)}, N)
    Yp, _ = sgr.multiplication_matrix(window, {("z", 1): g(1)}, N)
    assert sgr.cocycle(Xp, Yp).is_zero()


def test_jheis_commutator_supertrace_vanishes(window):
    val = sgr.jheis_commutator_supertrace(
        window, {(-1, 0): g(1)}, {(1, 0): g(1)}, N)
    assert val.is_zero()
    val = sgr.jheis_commutator_supertrace(
        window, {(-2, 0): g(0.5), (-1, 1): mono([0], 1.0)},
        {(2, 0): g(1), (1, 1): mono([1], 1.0)}, N)
    assert val.norm_inf() < 1e-14


def test_cocycle_quarter_form_agrees(window):
    X, _ = sgr.multiplication_matrix(window, {("z", -2): g(1)}, N)
    Y, _ = sgr.multiplication_matrix(window, {("z", 2): g(1)}, N)
    assert (sgr.cocycle(X, Y) - sgr.cocycle_quarter_form(X, Y)).norm_inf() < 1e-14


def test_cocycle_nonzero_off_jheis(window):
    # single elementary entry in the c-block against its transpose in the b-block
    X = sgr.WindowOperator(window, N, {(2, 0): g(1)})    # even line, c-block
    Y = sgr.WindowOperator(window, N, {(0, 2): g(1)})
    assert sgr.cocycle(X, Y) == g(1)
    Xo = sgr.WindowOperator(window, N, {(1, -1): g(1)})  # odd line: sign flips
    Yo = sgr.WindowOperator(window, N, {(-1, 1): g(1)})
    assert sgr.cocycle(Xo, Yo) == g(-1)
    assert (sgr.cocycle(X, Y) - sgr.cocycle_quarter_form(X, Y)).norm_inf() < 1e-14
    assert (sgr.cocycle(Xo, Yo) - sgr.cocycle_quarter_form(Xo, Yo)).norm_inf() < 1e-14
