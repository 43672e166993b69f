import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _helpers import random_real_poly
from crrigidity.errors import DivisionNearZero, LogNonPositive, RealityViolation
from crrigidity.jets import BidegreeJet, HermitianDefiningFunction, eval_jet, fd_partial_oracle
from crrigidity.webster import metric_density


def sphere():
    return HermitianDefiningFunction({(1, 1): 1.0, (0, 0): -1.0})


def test_bilinear_partials():
    jet = eval_jet(sphere(), 2.0, (1, 1))
    assert jet[0, 0] == 3
    assert jet[1, 0] == 2
    assert jet[0, 1] == 2
    assert jet[1, 1] == 1


def test_quartic_monomial_partials():
    q = HermitianDefiningFunction({(1, 1): 1.0, (2, 2): 0.1, (0, 0): -1.0})
    jet = eval_jet(q, 0.0, (2, 2))
    assert jet[2, 2] == pytest.approx(0.4, abs=1e-15)
    assert jet[2, 1] == 0
    assert jet[2, 0] == 0


def test_constant_function():
    jet = eval_jet(HermitianDefiningFunction({(0, 0): -1.0}), 0.3 - 0.7j, (3, 3))
    expected = np.zeros((4, 4))
    expected[0, 0] = -1
    assert np.array_equal(jet.partials, expected)


def test_product_of_coordinates():
    w = BidegreeJet.coordinate(1.0, (1, 1))
    wb = BidegreeJet.coordinate(1.0, (1, 1), conjugate=True)
    prod = w * wb
    assert prod[0, 0] == 1
    assert prod[1, 1] == 1
    assert prod[1, 0] == 1 and prod[0, 1] == 1


def test_log_of_e():
    jet = BidegreeJet.constant(math.e, (2, 2)).log()
    assert jet[0, 0] == pytest.approx(1.0, abs=1e-15)
    assert np.abs(jet.partials).sum() - abs(jet[0, 0]) == 0


def test_metric_density_value_on_sphere():
    h = metric_density(eval_jet(sphere(), 0.5, (3, 3)))
    assert h.value.real == pytest.approx(16 / 9, rel=1e-14)


def test_reciprocal_and_log_domain_errors():
    with pytest.raises(DivisionNearZero):
        BidegreeJet.constant(0.0).reciprocal()
    with pytest.raises(LogNonPositive):
        BidegreeJet.constant(-1.0).log()
    with pytest.raises(LogNonPositive):
        BidegreeJet.constant(1j).log()


def test_reality_violation_reports_index():
    with pytest.raises(RealityViolation) as info:
        HermitianDefiningFunction({(1, 0): 1.0, (0, 1): 2.0})
    assert "1, 0" in str(info.value) or "0, 1" in str(info.value)


def test_terms_round_trip():
    q = HermitianDefiningFunction({(1, 1): 1.0, (2, 0): 0.5 + 0.25j, (0, 2): 0.5 - 0.25j, (0, 0): -1.0})
    assert HermitianDefiningFunction.from_terms(q.to_terms()) == q


def test_fd_oracle_examples():
    assert fd_partial_oracle(sphere(), 2.0, 1, 1, step=1e-3) == pytest.approx(1.0, abs=1e-6)
    quartic = HermitianDefiningFunction({(2, 2): 1.0})
    assert fd_partial_oracle(quartic, 0.0, 2, 2, step=1e-2) == pytest.approx(4.0, abs=1e-3)
    q = HermitianDefiningFunction({(1, 1): 1.0, (3, 0): 2.0, (0, 3): 2.0, (0, 0): -1.0})
    assert fd_partial_oracle(q, 0.3 + 0.1j, 0, 0) == q(0.3 + 0.1j)


def test_jets_match_fd_oracle_on_random_polynomials(rng):
    worst = 0.0
    for _ in range(200):
        q = random_real_poly(rng, 3)
        w = complex(*rng.uniform(-1, 1, 2))
        jet = eval_jet(q, w, (4, 4))
        for a in range(5):
            for b in range(5 - a):
                fd = fd_partial_oracle(q, w, a, b)
                err = abs(jet[a, b] - fd)
                worst = max(worst, err / max(1.0, abs(fd)))
                assert err <= max(1e-6, 1e-6 * abs(fd)), (a, b, jet[a, b], fd)
    assert worst < 1e-6


def test_reality_symmetry(rng):
    for _ in range(50):
        q = random_real_poly(rng, 3)
        jet = eval_jet(q, complex(*rng.normal(size=2)), (4, 4))
        d = jet.partials
        assert np.abs(d - d.T.conj()).max() <= 1e-12 * max(1.0, np.abs(d).max())


def _random_jet(rng, order=(3, 3)):
    t = rng.normal(size=(order[0] + 1, order[1] + 1)) + 1j * rng.normal(size=(order[0] + 1, order[1] + 1))
    return BidegreeJet.from_taylor(t)


def test_multiplication_commutes_and_associates(rng):
    for _ in range(50):
        x, y, z = (_random_jet(rng) for _ in range(3))
        scale = np.abs((x * y * z).partials).max()
        assert np.abs((x * y).partials - (y * x).partials).max() <= 1e-13 * scale
        assert np.abs(((x * y) * z).partials - (x * (y * z)).partials).max() <= 1e-13 * scale


def _positive_jet(rng, value):
    t = 0.1 * (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    t[0, 0] = value
    return BidegreeJet.from_taylor(t)


def test_log_turns_products_into_sums(rng):
    for _ in range(20):
        x, y = _positive_jet(rng, 1.5), _positive_jet(rng, 0.7)
        lhs = (x * y).log()
        rhs = x.log() + y.log()
        assert np.abs(lhs.partials - rhs.partials).max() <= 1e-11 * max(1.0, np.abs(lhs.partials).max())


def test_reciprocal_times_self_is_one(rng):
    for _ in range(20):
        t = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        t[0, 0] = 2.0 + 1j
        x = BidegreeJet.from_taylor(t)
        one = (x * x.reciprocal()).partials
        expected = np.zeros_like(one)
        expected[0, 0] = 1
        assert np.abs(one - expected).max() <= 1e-10 * np.abs(x.partials).max() ** 4


def test_derivative_shifts_orders():
    jet = eval_jet(sphere(), 0.5, (3, 3))
    assert jet.derive_w().order == (2, 3)
    assert jet.derive_wbar().order == (3, 2)
    assert jet.derive_w()[0, 0] == jet[1, 0]


def test_jets_are_immutable():
    jet = eval_jet(sphere(), 0.5, (2, 2))
    with pytest.raises(ValueError):
        jet.partials[0, 0] = 5


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(-2, 2), min_size=4, max_size=4),
    st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False),
)
def test_conjugate_jet_swaps_slots(vals, w):
    a, b, c, d = vals
    q = HermitianDefiningFunction(
        {(0, 0): a, (1, 1): b, (2, 1): complex(c, d), (1, 2): complex(c, -d), (3, 3): a * b}
    )
    jet = eval_jet(q, w, (3, 3))
    # q is real, so its jet is its own conjugate
    assert np.abs(jet.conj().partials - jet.partials).max() <= 1e-12 * max(1.0, np.abs(jet.partials).max())
    assert abs(jet.value.imag) <= 1e-12 * max(1.0, abs(jet.value))


@settings(max_examples=60, deadline=None)
@given(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False))
def test_jet_value_matches_callable(w):
    q = HermitianDefiningFunction({(1, 1): 1.0, (2, 2): 0.3, (0, 0): -1.0, (2, 0): 0.1j, (0, 2): -0.1j})
    assert eval_jet(q, w, (1, 1)).value.real == pytest.approx(q(w), rel=1e-12, abs=1e-12)
