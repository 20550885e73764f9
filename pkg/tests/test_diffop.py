import pytest

from bispec.exact import ExactError, PS_ONE, ParamScalar, Rat
from bispec.diffop import (
    DiffOp,
    QuasiRat,
    XPoly,
    XRat,
    annihilates_monomials,
    apply_op,
    commutator,
    compose,
    equals,
    is_eigenfunction,
    log_derivative,
)


def xp(*ascending):
    return XPoly.from_list(list(ascending))


D = DiffOp.d()
X_OP = DiffOp.mul_by(XPoly.x())


def test_compose_d_with_x():
    # D o x = x D + 1
    got = compose(D, X_OP)
    want = DiffOp({1: XRat.from_poly(XPoly.x()), 0: XRat.const(1)})
    assert equals(got, want)


def test_compose_d2_with_x():
    got = compose(DiffOp.d(2), X_OP)
    want = DiffOp({2: XRat.from_poly(XPoly.x()), 1: XRat.const(2)})
    assert equals(got, want)
    # cross-check against the action on monomials
    for m in range(4):
        f = XRat.from_poly(XPoly.monomial(m))
        image = apply_op(got, f)
        direct = XRat.from_poly((XPoly.monomial(m + 1)).derivative().derivative())
        assert image == direct


def test_compose_xd_squared():
    xd = compose(X_OP, D)
    got = compose(xd, xd)
    want = DiffOp({2: XRat.from_poly(XPoly.monomial(2)), 1: XRat.from_poly(XPoly.x())})
    assert equals(got, want)


def test_commutator_dx():
    assert equals(commutator(D, X_OP), DiffOp.identity())


def test_commutator_with_multiplication():
    # [-D^2 + V, g] = -2 g' D - g'' for any V
    v = XRat.from_ratio(xp(1, 2), xp(0, 0, 1))
    op = DiffOp.schrodinger(v)
    g = xp(1, 2, 3)
    got = commutator(op, DiffOp.mul_by(g))
    want = DiffOp({1: XRat.from_poly(g.derivative().scale(-2)),
                   0: XRat.from_poly(-g.derivative().derivative())})
    assert equals(got, want)
    assert annihilates_monomials(got - want)


def test_apply_examples():
    assert apply_op(DiffOp({1: XRat.const(-2)}), XRat.from_poly(xp(0, 0, 0, 1))) \
        == XRat.from_poly(XPoly.monomial(2, -6))
    harmonic = DiffOp.schrodinger(XPoly.monomial(2))
    assert apply_op(harmonic, XRat.const(1)) == XRat.from_poly(XPoly.monomial(2))
    a1 = commutator(harmonic, X_OP)
    assert apply_op(a1, XRat.from_poly(XPoly.x())) == XRat.const(-2)


def test_equals_with_zero_padding():
    a = DiffOp({1: XRat.const(1)})
    b = a + DiffOp({2: XRat.const(0)})
    assert equals(a, b)


def test_second_ad_power_is_2vprime():
    v = XRat.from_poly(XPoly.monomial(2))
    op = DiffOp.schrodinger(v)
    a1 = commutator(op, X_OP)
    a2 = commutator(op, a1)
    want = DiffOp.mul_by(XPoly.monomial(1, 4))
    assert equals(a2, want)


def test_xrat_parameter_free_reduction():
    f = XRat.from_ratio(xp(0, 0, 0, 1), XPoly.x())
    assert f.is_polynomial()
    assert f.as_xpoly() == XPoly.monomial(2)
    g = XRat.from_ratio(xp(-1, 0, 1), xp(-1, 1) * xp(2, 1)).reduced()
    assert g.num == xp(1, 1)
    assert g.den == xp(2, 1)


def test_xrat_derivative_quotient_rule():
    f = XRat.from_ratio(XPoly.one(), XPoly.monomial(2))
    df = f.derivative()
    assert df == XRat.from_ratio(XPoly.const(-2), XPoly.monomial(3))


def test_log_derivative_power():
    a = ParamScalar.var("alpha")
    q = QuasiRat(factors=((XPoly.x(), a),))
    assert log_derivative(q) == XRat.from_ratio(XPoly.const(a), XPoly.x())


def test_log_derivative_exponential():
    q = QuasiRat(exp_part=XPoly.monomial(2, Rat(1, 8)))
    assert log_derivative(q) == XRat.from_poly(XPoly.monomial(1, Rat(1, 4)))


def test_log_derivative_seed_product():
    # x^(m+1/2) * (x^2-k^2)/4 * exp(x^2/8)
    k = ParamScalar.var("k")
    mu = ParamScalar.const(Rat(-1, 4)) * (k * k + 2)
    base = XPoly({2: PS_ONE, 0: -(k * k)})
    q = QuasiRat(((XPoly.x(), mu), (base, PS_ONE)),
                 exp_part=XPoly.monomial(2, Rat(1, 8)),
                 scale=ParamScalar.const(Rat(1, 4)))
    want = (XRat.from_ratio(XPoly.const(mu), XPoly.x())
            + XRat.from_ratio(XPoly.monomial(1, 2), base)
            + XRat.from_poly(XPoly.monomial(1, Rat(1, 4))))
    assert log_derivative(q) == want


def test_quasirat_rejects_zero_base():
    with pytest.raises(ExactError):
        QuasiRat(factors=((XPoly.zero(), PS_ONE),))


def test_is_eigenfunction_cases():
    free = DiffOp.schrodinger(XRat.const(0))
    assert is_eigenfunction(free, QuasiRat(((XPoly.x(), PS_ONE),))) == ParamScalar.const(0)
    harmonic = DiffOp.schrodinger(XPoly.monomial(2))
    ground = QuasiRat(exp_part=XPoly.monomial(2, Rat(-1, 2)))
    assert is_eigenfunction(harmonic, ground) == ParamScalar.const(1)
    first = QuasiRat(((XPoly.x(), PS_ONE),), exp_part=XPoly.monomial(2, Rat(-1, 2)))
    assert is_eigenfunction(harmonic, first) == ParamScalar.const(3)
    # x is not an eigenfunction of the harmonic oscillator
    assert is_eigenfunction(harmonic, QuasiRat(((XPoly.x(), PS_ONE),))) is None


def test_potential_extraction_requires_schrodinger_form():
    op = DiffOp({2: XRat.const(-1), 1: XRat.const(1)})
    with pytest.raises(ExactError):
        op.potential()


def test_order_bound_for_commutators():
    v = XRat.from_poly(xp(0, 1, 2))
    op = DiffOp.schrodinger(v)
    a = DiffOp({3: XRat.from_poly(xp(1, 1)), 0: XRat.const(5)})
    assert commutator(op, a).order() <= op.order() + a.order() - 1
