"""The ad-condition engine.

An ad-condition is an operator identity ``sum_j a_j * ad L^j(Theta) = 0``
for a second-order operator L and a multiplication operator Theta, with
constant weights a_j.  This module computes iterated ad powers, builds the
classical weight ladders coming from eigenfunction recursions, verifies
identities exactly, fits unknown weights, solves for unknown Theta, and
expands the conjugation series e^{tL} Theta e^{-tL}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact import PS_ONE, PS_ZERO, ParamScalar, Rat, ExactError, nullspace
from .diffop import (
    DiffOp,
    XPoly,
    XRat,
    XR_ZERO,
    commutator,
    common_numerators,
    equals,
)


def _coerce_ps(value) -> ParamScalar:
    if isinstance(value, ParamScalar):
        return value
    return ParamScalar.const(value)


def as_operator(theta) -> DiffOp:
    """Coerce a polynomial or rational function to a multiplication operator."""
    if isinstance(theta, DiffOp):
        return theta
    if isinstance(theta, XPoly):
        return DiffOp.mul_by(XRat.from_poly(theta))
    if isinstance(theta, XRat):
        return DiffOp.mul_by(theta)
    return DiffOp.mul_by(XRat.const(theta))


@dataclass(frozen=True)
class SpectrumStep:
    """Spacing s of a linear operator spectrum lambda_n = s*n."""

    s: object

    def __post_init__(self):
        object.__setattr__(self, "s", Rat(self.s))
        if not self.s:
            raise ExactError("spectrum step must be nonzero")


class WeightVector:
    """Constant weights a_j of an ad-condition, indexed by commutator order j.

    Behaves like a polynomial in the ad operator: multiplication is
    convolution of orders.  The weight at the top order is nonzero.
    """

    __slots__ = ("weights",)

    def __init__(self, weights: dict):
        cleaned = {}
        for j, c in weights.items():
            c = _coerce_ps(c)
            if not c.is_zero():
                if j < 0:
                    raise ExactError("negative commutator order in weight vector")
                cleaned[j] = c
        if not cleaned:
            raise ExactError("weight vector must have a nonzero top weight")
        self.weights = cleaned

    @property
    def top_order(self) -> int:
        return max(self.weights)

    def items(self):
        return sorted(self.weights.items())

    def get(self, j: int) -> ParamScalar:
        return self.weights.get(j, PS_ZERO)

    def monic(self) -> "WeightVector":
        top = self.weights[self.top_order]
        if top.is_one():
            return self
        inv = top.invert()
        return WeightVector({j: c * inv for j, c in self.weights.items()})

    def __eq__(self, other):
        if not isinstance(other, WeightVector):
            return NotImplemented
        if self.weights.keys() != other.weights.keys():
            return False
        return all(self.weights[j] == other.weights[j] for j in self.weights)

    __hash__ = None

    def proportional_to(self, other: "WeightVector") -> bool:
        return self.monic() == other.monic()

    def shift(self, by: int = 1) -> "WeightVector":
        return WeightVector({j + by: c for j, c in self.weights.items()})

    def quadratic_step(self, c) -> "WeightVector":
        """Multiply by (ad^2 - c)."""
        c = _coerce_ps(c)
        out: dict = {j + 2: w for j, w in self.weights.items()}
        for j, w in self.weights.items():
            acc = out.get(j, PS_ZERO) - w * c
            out[j] = acc
        return WeightVector(out)

    def __mul__(self, other):
        """Product as polynomials in the ad operator (order convolution)."""
        if not isinstance(other, WeightVector):
            return NotImplemented
        out: dict = {}
        for j1, c1 in self.weights.items():
            for j2, c2 in other.weights.items():
                j = j1 + j2
                out[j] = out.get(j, PS_ZERO) + c1 * c2
        return WeightVector(out)

    def __str__(self):
        body = ", ".join(f"{j}: {c}" for j, c in self.items())
        return "{" + body + "}"

    def __repr__(self):
        return f"WeightVector({self})"


@dataclass
class ConditionReport:
    """Outcome of one identity check: holds iff the residual operator is zero."""

    holds: bool
    residual: DiffOp
    assumptions: list = field(default_factory=list)


def ad_power(op: DiffOp, theta, j: int) -> DiffOp:
    """ad op^j (theta): iterated commutator, A_0 = theta."""
    return ad_tower(op, theta, j)[j]

def ad_tower(op: DiffOp, theta, up_to: int) -> list:
    """[A_0, ..., A_up_to] with A_{j+1} = [op, A_j].

    Every step cancels denominator factors that divide the numerator so chains
    of commutators do not accumulate spurious denominator powers.
    """
    if up_to < 0:
        raise ExactError("commutator order must be >= 0")
    current = as_operator(theta)
    tower = [current]
    for _ in range(up_to):
        current = commutator(op, current).reduced()
        tower.append(current)
    return tower


def reach_weights(n: int, step) -> WeightVector:
    """Weights of prod_{i=1..n}(ad^2 - (s*i)^2) * ad, for spectrum lambda_m = s*m.

    The weight at order 2n+1-2m is (-1)^m times the m-th elementary symmetric
    polynomial of {(s*i)^2 : i = 1..n}.
    """
    if n < 1:
        raise ExactError("recursion ladder needs n >= 1")
    s = step.s if isinstance(step, SpectrumStep) else SpectrumStep(step).s
    w = WeightVector({1: PS_ONE})
    for i in range(1, n + 1):
        w = w.quadratic_step((s * i) ** 2)
    return w


def hermite_new_weights(k: int) -> WeightVector:
    """The lowered ad-condition weights for the k-th exceptional Hermite family.

    Odd k:  prod_{i=1..(k+1)/2}(ad^2 - (4i)^2) * ad      (orders k+2, k, ..., 1)
    Even k: prod_{i=0..k/2}(ad^2 - (2+4i)^2)             (orders k+2, k, ..., 0)
    """
    if k < 0:
        raise ExactError("family index must be >= 0")
    if k % 2:
        w = WeightVector({1: PS_ONE})
        for i in range(1, (k + 1) // 2 + 1):
            w = w.quadratic_step((4 * i) ** 2)
    else:
        w = WeightVector({0: PS_ONE})
        for i in range(0, k // 2 + 1):
            w = w.quadratic_step((2 + 4 * i) ** 2)
    return w


def residual_from_tower(tower: list, w: WeightVector) -> DiffOp:
    out = DiffOp.zero()
    for j, c in w.items():
        if j >= len(tower):
            raise ExactError("weight order exceeds computed tower")
        out = out + tower[j].scale(c)
    return out


def verify_condition(op: DiffOp, theta, w: WeightVector, tower=None) -> ConditionReport:
    """Check sum_j w_j * ad op^j(theta) = 0 exactly."""
    if tower is None or len(tower) <= w.top_order:
        tower = ad_tower(op, theta, w.top_order)
    residual = residual_from_tower(tower, w)
    return ConditionReport(residual.is_zero(), residual)


def _linear_rows(columns: list) -> list:
    """Rows of the exact linear system 'sum_i v_i * columns[i] = 0'.

    One row per (derivative order, x-degree) after clearing each derivative
    order's coefficients to a common denominator.
    """
    orders = set()
    for c in columns:
        orders |= c.coeffs.keys()
    rows = []
    for r in sorted(orders):
        nums = common_numerators([c.coeffs.get(r, XR_ZERO) for c in columns])
        degs = set()
        for n in nums:
            degs |= n.coeffs.keys()
        for d in sorted(degs):
            rows.append([n.coeffs.get(d, PS_ZERO) for n in nums])
    if not rows:
        # all columns vanish identically: the whole space is the nullspace
        rows.append([PS_ZERO] * len(columns))
    return rows


@dataclass
class FitResult:
    """Weight vectors spanning all conditions supported on the given orders."""

    vectors: list
    assumptions: list
    reports: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.vectors, self.assumptions))


def fit_weights(op: DiffOp, theta, orders, tower=None) -> FitResult:
    """Find all weight vectors supported on ``orders`` annihilating (op, theta).

    Builds the linear system from every x-coefficient of every derivative
    order of the residual, denominators cleared; returns a nullspace basis.
    Every returned vector is re-verified exactly.
    """
    orders = list(orders)
    if not orders or len(set(orders)) != len(orders):
        raise ExactError("orders must be nonempty and distinct")
    top = max(orders)
    if tower is None or len(tower) <= top:
        tower = ad_tower(op, theta, top)
    columns = [tower[j] for j in orders]
    rows = _linear_rows(columns)
    result = nullspace(rows)
    vectors = []
    reports = []
    for vec in result.basis:
        w = WeightVector({j: c for j, c in zip(orders, vec)})
        report = verify_condition(op, theta, w, tower=tower)
        if not report.holds:
            raise ExactError("internal error: fitted weights fail exact verification")
        vectors.append(w)
        reports.append(report)
    return FitResult(vectors, result.assumptions, reports)


@dataclass
class SolveResult:
    """Polynomial eigenvalue functions solving a fixed ad-condition."""

    thetas: list
    assumptions: list

    def __iter__(self):
        return iter((self.thetas, self.assumptions))


def solve_theta(op: DiffOp, w: WeightVector, deg_bound: int,
                fix_zero: bool = True, monomial_towers: dict | None = None) -> SolveResult:
    """Basis of polynomials Theta of degree <= deg_bound with
    sum_j w_j ad op^j(Theta) = 0.

    Theta(0) = 0 is imposed by default (an additive constant never changes an
    ad-condition); pass fix_zero=False to include the constant direction.
    Each A_j is linear in Theta, so columns are computed per monomial x^i;
    ``monomial_towers`` may carry precomputed towers keyed by i.
    """
    if deg_bound < 1:
        raise ExactError("degree bound must be >= 1")
    low = 1 if fix_zero else 0
    degrees = list(range(low, deg_bound + 1))
    top = w.top_order
    columns = []
    for i in degrees:
        if monomial_towers is not None and i in monomial_towers and len(monomial_towers[i]) > top:
            tower = monomial_towers[i]
        else:
            tower = ad_tower(op, XPoly.monomial(i), top)
            if monomial_towers is not None:
                monomial_towers[i] = tower
        columns.append(residual_from_tower(tower, w))
    rows = _linear_rows(columns)
    result = nullspace(rows)
    thetas = []
    for vec in result.basis:
        theta = XPoly({deg: c for deg, c in zip(degrees, vec) if not c.is_zero()})
        report = verify_condition(op, theta, w)
        if not report.holds:
            raise ExactError("internal error: solved Theta fails exact verification")
        thetas.append(theta)
    return SolveResult(thetas, result.assumptions)


def proportionality(a: DiffOp, b: DiffOp):
    """Constant c with a = c*b, or None if the operators are not proportional."""
    if b.is_zero():
        return PS_ZERO if a.is_zero() else None
    r = b.order()
    ca = a.coeff(r)
    cb = b.coeff(r)
    if ca.is_zero():
        return PS_ZERO if a.is_zero() else None
    ratio = ca / cb
    c = ratio.constant_value()
    if c is None:
        return None
    if equals(a, b.scale(c)):
        return c
    return None


@dataclass
class HeisenbergReport:
    """Expansion data for e^{tL} Theta e^{-tL} = sum t^j/j! A_j.

    ``relations`` holds every detected proportionality A_{j+2} = c_j A_j.
    ``rate`` is c_1 (the odd-chain ratio); ``closed_form_matches[m]`` records
    whether A_m equals rate^(m//2) * A_{m mod 2}, i.e. whether the order-m
    series coefficient agrees with cosh/sinh of sqrt(rate) acting on A_0, A_1.
    ``even_chain_matches[2i]`` records A_{2i} = rate^(i-1) * A_2 for i >= 1.
    """

    powers: list
    relations: list
    rate: object
    closed_form_matches: dict
    even_chain_matches: dict


def heisenberg_series(op: DiffOp, theta, n: int) -> HeisenbergReport:
    if n < 0:
        raise ExactError("series order must be >= 0")
    tower = ad_tower(op, theta, n)
    relations = []
    for j in range(0, n - 1):
        c = proportionality(tower[j + 2], tower[j])
        if c is not None:
            relations.append((j, c))
    rate = None
    for j, c in relations:
        if j == 1:
            rate = c
            break
    closed = {}
    even_chain = {}
    if rate is not None:
        for m in range(n + 1):
            target = tower[m % 2].scale(rate ** (m // 2))
            closed[m] = equals(tower[m], target)
        for m in range(2, n + 1, 2):
            target = tower[2].scale(rate ** (m // 2 - 1))
            even_chain[m] = equals(tower[m], target)
    return HeisenbergReport(tower, relations, rate, closed, even_chain)
