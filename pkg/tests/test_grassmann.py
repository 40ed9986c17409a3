import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from supercurves.errors import DimensionError, NotInvertibleError, ParityError
from supercurves.grassmann import GrassmannScalar, RealStructure, random_element

N = 3


def gen(i, n=N):
    return GrassmannScalar.generator(n, i)


def one(n=N):
    return GrassmannScalar.one(n)


def test_ordered_product():
    b1, b2 = gen(0), gen(1)
    assert (b1 * b2).terms == {0b11: 1.0 + 0j}


def test_anticommutation():
    b1, b2 = gen(0), gen(1)
    assert (b2 * b1).terms == {0b11: -1.0 + 0j}
    assert (b1 * b1).is_zero()


def test_nilpotent_cancellation():
    b1, b2 = gen(0), gen(1)
    p = (one() + b1 * b2) * (one() - b1 * b2)
    assert p == one()


def test_invert_nilpotent_neumann():
    b1, b2 = gen(0), gen(1)
    a = one() + b1 * b2
    assert a.invert() == one() - b1 * b2
    b = GrassmannScalar.scalar(N, 2) - b1 * b2
    binv = b.invert()
    assert binv.isclose(GrassmannScalar.scalar(N, 0.5) + b1 * b2 * 0.25, 1e-14)
    assert (b * binv - one()).norm_inf() < 1e-14


def test_odd_elements_not_invertible():
    with pytest.raises(NotInvertibleError):
        gen(0).invert()
    with pytest.raises(NotInvertibleError):
        GrassmannScalar.zero(N).invert()


def test_reduce_examples():
    b1, b2 = gen(0), gen(1)
    assert (GrassmannScalar.scalar(N, 3) + b1).reduce() == 3
    assert (b1 * b2).reduce() == 0
    assert GrassmannScalar.zero(N).reduce() == 0


def test_conjugation_fixed_generators_antilinear():
    s = RealStructure(+1)
    assert (gen(0) * 1j).conjugate(s) == gen(0) * (-1j)
    assert gen(0).conjugate(s) == gen(0)


def test_conjugation_reverses_products():
    b1, b2 = gen(0), gen(1)
    assert (b1 * b2).conjugate(RealStructure(+1)) == -(b1 * b2)
    assert (b1 * b2).conjugate(RealStructure(-1)) == b1 * b2


@pytest.mark.parametrize("eps", [1, -1])
def test_conjugation_axioms_random(rng, eps):
    s = RealStructure(eps)
    for _ in range(30):
        pa, pb = rng.integers(0, 2), rng.integers(0, 2)
        a = random_element(rng, N, parity=int(pa))
        b = random_element(rng, N, parity=int(pb))
        lhs = (a * b).conjugate(s)
        sign = eps ** (int(pa) * int(pb))
        rhs = b.conjugate(s) * a.conjugate(s) * sign
        assert (lhs - rhs).norm_inf() < 1e-12
        assert (a.conjugate(s).conjugate(s) - a).norm_inf() < 1e-12


def test_reduce_is_ring_homomorphism(rng):
    for _ in range(20):
        a = random_element(rng, N)
        b = random_element(rng, N)
        assert abs((a * b).reduce() - a.reduce() * b.reduce()) < 1e-12
        assert abs((a + b).reduce() - (a.reduce() + b.reduce())) < 1e-12


@settings(max_examples=40, deadline=None)
@given(pa=st.integers(0, 1), pb=st.integers(0, 1), seed=st.integers(0, 2 ** 16))
def test_supercommutativity(pa, pb, seed):
    r = np.random.default_rng(seed)
    a = random_element(r, N, parity=pa)
    b = random_element(r, N, parity=pb)
    sign = -1.0 if pa and pb else 1.0
    assert (a * b - b * a * sign).norm_inf() < 1e-12


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 16))
def test_associativity(seed):
    r = np.random.default_rng(seed)
    a, b, c = (random_element(r, N) for _ in range(3))
    assert ((a * b) * c - a * (b * c)).norm_inf() < 1e-10


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 16))
def test_invert_exactness(seed):
    r = np.random.default_rng(seed)
    a = random_element(r, N, body=1.0 + 0.5j)
    p = a * a.invert()
    assert abs(p.terms[0] - 1) < 1e-12
    assert all(abs(c) < 1e-12 for m, c in p.terms.items() if m)


def test_exp_inverse_relation():
    b1, b2, b3 = gen(0), gen(1), gen(2)
    a = b1 * b2 * 0.7 + b2 * b3 * (0.2 - 0.1j)
    e = a.exp()
    assert (e * (-a).exp() - one()).norm_inf() < 1e-14
    assert abs((GrassmannScalar.scalar(N, 1.5) + b1 * b2).exp().body - np.exp(1.5)) < 1e-12


def test_substitution_homomorphism(rng):
    images = {0: gen(1) + gen(2) * 0.5, 1: gen(0) * 2.0}
    for _ in range(10):
        a = random_element(rng, N)
        b = random_element(rng, N)
        lhs = (a * b).substitute(images)
        rhs = a.substitute(images) * b.substitute(images)
        assert (lhs - rhs).norm_inf() < 1e-12


def test_substitution_rejects_even_images():
    with pytest.raises(ParityError):
        one().substitute({0: one()})


def test_mismatched_algebras():
    with pytest.raises(DimensionError):
        GrassmannScalar.one(2) * GrassmannScalar.one(3)


def test_generator_cap():
    with pytest.raises(DimensionError):
        GrassmannScalar.zero(17)
    GrassmannScalar.zero(16)


def test_json_roundtrip(rng):
    a = random_element(rng, N)
    blob = json.dumps(a.to_json())
    back = GrassmannScalar.from_json(json.loads(blob))
    assert back == a
    assert json.dumps(a.to_json()) == blob  # deterministic serialization


def test_json_format_matches_contract():
    a = GrassmannScalar(2, {0b11: 1j})
    assert a.to_json() == {"n": 2, "terms": [{"mask": [1, 2], "re": 0.0, "im": 1.0}]}
