import pytest

from bispec.exact import (
    ExactError,
    MPoly,
    ParamScalar,
    Rat,
    declare_param,
    is_zero,
    normalize_fraction,
    nullspace,
)


def ps(v):
    return ParamScalar.const(v)


def var(name):
    return MPoly.var(name)


def test_normalize_fraction_integer_content():
    k = var("k")
    s = normalize_fraction(k * 2, MPoly.const(4))
    assert s == ParamScalar(k, MPoly.const(2))
    assert str(s) == "k/2"


def test_normalize_fraction_zero_numerator():
    k = var("k")
    s = normalize_fraction(MPoly.zero(), k * k + 1)
    assert s.is_zero()
    assert s.den == MPoly.one()


def test_unreduced_fraction_equality():
    k = var("k")
    a = normalize_fraction(k * k - 4, k - 2)
    b = normalize_fraction(k + 2, MPoly.one())
    assert a == b


def test_zero_denominator_rejected():
    with pytest.raises(ExactError, match="division by zero polynomial"):
        normalize_fraction(MPoly.one(), MPoly.zero())


def test_is_zero_by_expansion():
    k = var("k")
    assert is_zero(ParamScalar((k * k - 4) - (k - 2) * (k + 2)))
    assert not is_zero(ps(Rat(1, 2)) - ps(Rat(1, 3)))


def test_relation_parameters_square():
    s2 = var("sqrt2")
    s3 = var("sqrt3")
    i = var("i")
    assert s2 * s2 == MPoly.const(2)
    assert s3 ** 2 == MPoly.const(3)
    assert i * i == MPoly.const(-1)
    assert s2 ** 3 == s2 * 2
    # mixed products stay unreduced
    assert (s2 * s3) ** 2 == MPoly.const(6)


def test_relation_survives_fraction_arithmetic():
    s2 = ParamScalar.var("sqrt2")
    half = ps(Rat(1, 2))
    inv = s2.invert()
    assert inv == s2 * half  # 1/sqrt2 = sqrt2/2
    assert (s2 ** 2) == ps(2)


def test_declare_param_conflicts():
    declare_param("fresh_q", 5)
    declare_param("fresh_q", 5)
    with pytest.raises(ExactError):
        declare_param("fresh_q", 7)
    with pytest.raises(ExactError):
        declare_param("x")


def test_monomial_cancellation():
    k = var("k")
    s = ParamScalar(-(k * k), k)
    assert s.num == -k
    assert s.den == MPoly.one()


def test_substitute_and_evaluate():
    k, a = var("k"), var("a")
    p = k * k * a + a * 2
    assert p.substitute({"k": MPoly.const(3)}) == a * 11
    assert p.evaluate({"k": Rat(3), "a": Rat(1, 2)}) == Rat(11, 2)


def vec_proportional(u, v):
    """Span comparison for nullspace vectors."""
    pairs = [(x, y) for x, y in zip(u, v)]
    for x, y in pairs:
        if x.is_zero() != y.is_zero():
            return False
    witness = next(((x, y) for x, y in pairs if not x.is_zero()), None)
    if witness is None:
        return True
    wx, wy = witness
    return all(x * wy == y * wx for x, y in pairs)


def test_nullspace_identity_empty():
    m = [[ps(1), ps(0)], [ps(0), ps(1)]]
    assert nullspace(m).basis == []


def test_nullspace_rank_one():
    m = [[ps(1), ps(4)], [ps(2), ps(8)]]
    basis, assumptions = nullspace(m)
    assert len(basis) == 1
    assert vec_proportional(basis[0], [ps(4), ps(-1)])
    assert assumptions == []


def test_nullspace_parametric_pivot():
    k = ParamScalar.var("k")
    basis, assumptions = nullspace([[k, k * k]])
    assert len(basis) == 1
    assert vec_proportional(basis[0], [-k, ParamScalar.const(1)])
    assert [str(a) for a in assumptions] == ["k"]


def test_nullspace_back_substitution_exact():
    k = ParamScalar.var("k")
    m = [[k, ps(2), ps(1)], [ps(0), k + 1, ps(3)], [k, ps(2), ps(1)]]
    basis, _ = nullspace(m)
    for vec in basis:
        for row in m:
            acc = ps(0)
            for entry, x in zip(row, vec):
                acc = acc + entry * x
            assert acc.is_zero()


def test_nullspace_with_relation_parameters():
    s2 = ParamScalar.var("sqrt2")
    basis, _ = nullspace([[s2, ps(2)]])
    assert len(basis) == 1
    # sqrt2 * v0 + 2 * v1 = 0 -> direction (sqrt2, -1)
    v0, v1 = basis[0]
    assert (s2 * v0 + ps(2) * v1).is_zero()
