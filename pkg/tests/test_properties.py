"""Randomized algebraic-law suites; every check is exact.

Each suite runs at least 100 independently generated instances, either via
hypothesis or a seeded RNG.
"""

import random

from hypothesis import given, settings, strategies as st

from bispec.exact import (
    MPoly,
    PS_ZERO,
    ParamScalar,
    Rat,
    normalize_fraction,
    nullspace,
)
from bispec.diffop import (
    DiffOp,
    QuasiRat,
    XPoly,
    XRat,
    annihilates_monomials,
    commutator,
    compose,
    equals,
    is_eigenfunction,
)
from bispec.adcond import ad_power
from bispec.darboux import darboux_step, intertwine_check

N_INSTANCES = 100


# ---------------------------------------------------------------------------
# MPoly ring laws (hypothesis)
# ---------------------------------------------------------------------------

_coeffs = st.integers(min_value=-9, max_value=9)
_names = st.sampled_from(["a", "b", "sqrt2", "i"])


@st.composite
def mpolys(draw):
    n_terms = draw(st.integers(min_value=0, max_value=4))
    poly = MPoly.zero()
    for _ in range(n_terms):
        c = draw(_coeffs)
        mono = MPoly.const(c)
        for _ in range(draw(st.integers(min_value=0, max_value=2))):
            mono = mono * MPoly.var(draw(_names))
        poly = poly + mono
    return poly


@settings(max_examples=N_INSTANCES, deadline=None)
@given(mpolys(), mpolys(), mpolys())
def test_mpoly_add_associative(p, q, r):
    assert (p + q) + r == p + (q + r)


@settings(max_examples=N_INSTANCES, deadline=None)
@given(mpolys(), mpolys(), mpolys())
def test_mpoly_mul_distributes(p, q, r):
    assert p * (q + r) == p * q + p * r


@settings(max_examples=N_INSTANCES, deadline=None)
@given(mpolys(), mpolys())
def test_mpoly_mul_commutes(p, q):
    assert p * q == q * p


@settings(max_examples=N_INSTANCES, deadline=None)
@given(mpolys(), mpolys(), mpolys())
def test_mpoly_mul_associative(p, q, r):
    assert (p * q) * r == p * (q * r)


# ---------------------------------------------------------------------------
# fraction field laws
# ---------------------------------------------------------------------------


def _random_mpoly(rng, allow_params=True, max_terms=3):
    poly = MPoly.zero()
    for _ in range(rng.randint(0, max_terms)):
        mono = MPoly.const(rng.randint(-6, 6))
        if allow_params:
            for _ in range(rng.randint(0, 2)):
                mono = mono * MPoly.var(rng.choice(["a", "b", "sqrt2"]))
        poly = poly + mono
    return poly


def _random_scalar(rng, allow_params=True):
    num = _random_mpoly(rng, allow_params)
    den = MPoly.zero()
    while den.is_zero():
        den = _random_mpoly(rng, allow_params)
    return ParamScalar(num, den)


def test_fraction_equality_is_equivalence():
    rng = random.Random(101)
    for _ in range(N_INSTANCES):
        s = _random_scalar(rng)
        t = _random_scalar(rng)
        u = _random_scalar(rng)
        assert s == s
        if s == t:
            assert t == s
        if s == t and t == u:
            assert s == u
        # scaling numerator and denominator by a common factor keeps the value
        f = MPoly.zero()
        while f.is_zero():
            f = _random_mpoly(rng)
        scaled = ParamScalar(s.num * f, s.den * f)
        assert scaled == s


def test_normalize_fraction_preserves_value():
    rng = random.Random(202)
    for _ in range(N_INSTANCES):
        num = _random_mpoly(rng)
        den = MPoly.zero()
        while den.is_zero():
            den = _random_mpoly(rng)
        s = normalize_fraction(num, den)
        # cross-multiplication against the raw pair
        assert (s.num * den - num * s.den).is_zero()


def test_relation_parameters_hold_under_operation_sequences():
    rng = random.Random(303)
    s2 = ParamScalar.var("sqrt2")
    i = ParamScalar.var("i")
    for _ in range(N_INSTANCES):
        acc = _random_scalar(rng)
        acc = acc * s2 + i
        assert (s2 * s2) == ParamScalar.const(2)
        assert (i * i) == ParamScalar.const(-1)
        # (acc * sqrt2)^2 == 2 * acc^2
        assert (acc * s2) ** 2 == acc * acc * 2


# ---------------------------------------------------------------------------
# operator laws
# ---------------------------------------------------------------------------


def _random_xpoly(rng, deg=2, allow_params=False):
    out = {}
    for d in range(deg + 1):
        c = rng.randint(-4, 4)
        if c and allow_params and rng.random() < 0.3:
            out[d] = ParamScalar.const(c) * ParamScalar.var("a")
        elif c:
            out[d] = ParamScalar.const(c)
    return XPoly(out)


def _random_op(rng, max_order=2, allow_params=False):
    coeffs = {}
    for order in range(rng.randint(0, max_order) + 1):
        poly = _random_xpoly(rng, rng.randint(0, 2), allow_params)
        if not poly.is_zero():
            coeffs[order] = XRat.from_poly(poly)
    if not coeffs:
        coeffs[0] = XRat.const(rng.randint(1, 3))
    return DiffOp(coeffs)


def test_jacobi_identity():
    rng = random.Random(404)
    for _ in range(N_INSTANCES):
        a = _random_op(rng)
        b = _random_op(rng)
        c = _random_op(rng)
        jac = (commutator(a, commutator(b, c))
               + commutator(b, commutator(c, a))
               + commutator(c, commutator(a, b)))
        assert jac.is_zero()


def test_derivation_law():
    rng = random.Random(505)
    for _ in range(N_INSTANCES):
        lop = _random_op(rng)
        a = _random_op(rng, max_order=1)
        b = _random_op(rng, max_order=1)
        lhs = commutator(lop, compose(a, b))
        rhs = compose(commutator(lop, a), b) + compose(a, commutator(lop, b))
        assert equals(lhs, rhs)


def test_commutator_bilinear_and_antisymmetric():
    rng = random.Random(606)
    for _ in range(N_INSTANCES):
        a = _random_op(rng)
        b = _random_op(rng)
        c = _random_op(rng)
        alpha = ParamScalar.const(rng.randint(-3, 3))
        assert commutator(a, a).is_zero()
        assert equals(commutator(a, b), -commutator(b, a))
        lhs = commutator(a, b.scale(alpha) + c)
        rhs = commutator(a, b).scale(alpha) + commutator(a, c)
        assert equals(lhs, rhs)


def test_order_zero_operators_commute():
    rng = random.Random(707)
    for _ in range(N_INSTANCES):
        f = DiffOp.mul_by(_random_xpoly(rng, 3))
        g = DiffOp.mul_by(XRat.from_ratio(
            _random_xpoly(rng, 2), XPoly.from_list([1, 0, 1])))
        assert commutator(f, g).is_zero()


def test_monomial_oracle_agrees_with_equals():
    rng = random.Random(808)
    agreements = {True: 0, False: 0}
    for _ in range(N_INSTANCES):
        a = _random_op(rng)
        b = _random_op(rng) if rng.random() < 0.5 else a + DiffOp({0: XRat.const(0)})
        same = equals(a, b)
        diff = a - b
        assert annihilates_monomials(diff) == same
        agreements[same] += 1
    assert agreements[True] > 0 and agreements[False] > 0


def test_ad_power_linear_in_theta():
    rng = random.Random(909)
    v = XPoly.monomial(2)
    lop = DiffOp.schrodinger(v)
    for _ in range(N_INSTANCES // 4):
        t1 = _random_xpoly(rng, 3)
        t2 = _random_xpoly(rng, 3)
        alpha = ParamScalar.const(rng.randint(-3, 3))
        beta = ParamScalar.const(rng.randint(-3, 3))
        for j in (1, 2, 3, 4):
            lhs = ad_power(lop, t1.scale(alpha) + t2.scale(beta), j)
            rhs = ad_power(lop, t1, j).scale(alpha) + ad_power(lop, t2, j).scale(beta)
            assert equals(lhs, rhs)


# ---------------------------------------------------------------------------
# darboux and nullspace oracles
# ---------------------------------------------------------------------------


def _random_seed(rng):
    factors = []
    for _ in range(rng.randint(0, 2)):
        base = XPoly.zero()
        while base.degree() < 1:
            base = _random_xpoly(rng, rng.randint(1, 2))
        factors.append((base, ParamScalar.const(rng.randint(-3, 3))))
    exp_part = XPoly({2: ParamScalar.const(Rat(rng.randint(-2, 2), 2)),
                      1: ParamScalar.const(rng.randint(-2, 2))})
    if not factors and exp_part.is_zero():
        factors.append((XPoly.x(), ParamScalar.const(1)))
    return QuasiRat(tuple(factors), exp_part)


def test_darboux_intertwining_on_random_seeds():
    # build the potential that makes each random quasi-rational function an
    # eigenfunction, then transform and check the intertwining identity
    rng = random.Random(1010)
    count = 0
    while count < N_INSTANCES:
        seed = _random_seed(rng)
        w = seed.log_derivative()
        v = (w.derivative() + w * w).reduced()
        lop = DiffOp.schrodinger(v)
        assert is_eigenfunction(lop, seed) == PS_ZERO
        new_op, record = darboux_step(lop, seed)
        assert intertwine_check(lop, new_op, seed)
        assert isinstance(record.output_v, XRat)
        count += 1


def test_nullspace_back_substitution_random():
    rng = random.Random(1111)
    for _ in range(N_INSTANCES):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        use_params = rng.random() < 0.4
        matrix = [[_random_scalar(rng, use_params) if rng.random() < 0.8 else PS_ZERO
                   for _ in range(cols)] for _ in range(rows)]
        basis, _ = nullspace(matrix)
        for vec in basis:
            assert any(not entry.is_zero() for entry in vec)
            for row in matrix:
                acc = PS_ZERO
                for entry, x in zip(row, vec):
                    acc = acc + entry * x
                assert acc.is_zero()
