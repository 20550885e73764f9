"""Matrix-coefficient differential operators acting on matrix-valued functions.

Operators act on square-matrix functions F(x) from either side:

* right action: (L F) = sum_r F^(r) * C_r(x), coefficients multiply from the
  right (the convention of the matrix orthogonal polynomial displays);
* left action:  (L F) = sum_r C_r(x) * F^(r).

Ad-conditions here carry constant matrix right factors: sum_j (A_j o M_j) = 0
where (A o M)(F) composes A with multiplication by M on the coefficient side.
The source displays never state the action convention; ``convention_probe``
determines it empirically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .exact import ExactError
from .diffop import XRat, XR_ZERO, _coerce_xrat


def _as_xrat_matrix(rows) -> tuple:
    out = []
    for row in rows:
        out.append(tuple(_coerce_xrat(entry) if not isinstance(entry, XRat) else entry
                         for entry in row))
    n = len(out)
    if any(len(r) != n for r in out):
        raise ExactError("matrix must be square")
    return tuple(out)


def mat_zero(n: int) -> tuple:
    return tuple(tuple(XR_ZERO for _ in range(n)) for _ in range(n))


def mat_eye(n: int) -> tuple:
    return tuple(tuple(XRat.const(1 if i == j else 0) for j in range(n)) for i in range(n))


def mat_add(a, b) -> tuple:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a) -> tuple:
    return tuple(tuple(-x for x in row) for row in a)


def mat_mul(a, b) -> tuple:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = XR_ZERO
            for l in range(n):
                if not a[i][l].is_zero() and not b[l][j].is_zero():
                    acc = acc + a[i][l] * b[l][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_scale(a, c) -> tuple:
    return tuple(tuple(x * c for x in row) for row in a)


def mat_derivative(a) -> tuple:
    return tuple(tuple(x.derivative() for x in row) for row in a)


def mat_is_zero(a) -> bool:
    return all(x.is_zero() for row in a for x in row)


class MatDiffOp:
    """Differential operator with square-matrix XRat coefficients."""

    __slots__ = ("coeffs", "size", "action_side")

    def __init__(self, coeffs: dict, size: int, action_side: str = "right", _normalize=True):
        if action_side not in ("left", "right"):
            raise ExactError("action_side must be 'left' or 'right'")
        if _normalize:
            coeffs = {r: m for r, m in coeffs.items() if not mat_is_zero(m)}
        self.coeffs = coeffs
        self.size = size
        self.action_side = action_side

    @classmethod
    def from_matrices(cls, coeffs: dict, action_side: str = "right") -> "MatDiffOp":
        conv = {r: _as_xrat_matrix(m) for r, m in coeffs.items()}
        sizes = {len(m) for m in conv.values()}
        if len(sizes) != 1:
            raise ExactError("all coefficient matrices must have the same size")
        return cls(conv, sizes.pop(), action_side)

    @classmethod
    def scalar_times_identity(cls, f, size: int, action_side: str = "right") -> "MatDiffOp":
        f = _coerce_xrat(f)
        m = tuple(tuple(f if i == j else XR_ZERO for j in range(size)) for i in range(size))
        return cls({0: m}, size, action_side)

    def zero_like(self) -> "MatDiffOp":
        return MatDiffOp({}, self.size, self.action_side, _normalize=False)

    def is_zero(self) -> bool:
        return not self.coeffs

    def order(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def coeff(self, r: int) -> tuple:
        return self.coeffs.get(r, mat_zero(self.size))

    def with_side(self, side: str) -> "MatDiffOp":
        return MatDiffOp(self.coeffs, self.size, side, _normalize=False)

    def _check(self, other: "MatDiffOp"):
        if self.size != other.size:
            raise ExactError("operator size mismatch")
        if self.action_side != other.action_side:
            raise ExactError("operator action-side mismatch")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for r, m in other.coeffs.items():
            out[r] = mat_add(out[r], m) if r in out else m
        return MatDiffOp(out, self.size, self.action_side)

    def __neg__(self):
        return MatDiffOp({r: mat_neg(m) for r, m in self.coeffs.items()},
                         self.size, self.action_side, _normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def right_factor(self, m) -> "MatDiffOp":
        """Compose with right multiplication by a constant matrix:
        F -> (self F) * m under the right action, F -> self(m F) under the left."""
        m = _as_xrat_matrix(m)
        if len(m) != self.size:
            raise ExactError("right factor size mismatch")
        return MatDiffOp({r: mat_mul(c, m) for r, c in self.coeffs.items()},
                         self.size, self.action_side)

    def __eq__(self, other):
        if not isinstance(other, MatDiffOp):
            return NotImplemented
        self._check(other)
        for r in self.coeffs.keys() | other.coeffs.keys():
            a = self.coeffs.get(r)
            b = other.coeffs.get(r)
            if a is None:
                if not mat_is_zero(b):
                    return False
            elif b is None:
                if not mat_is_zero(a):
                    return False
            else:
                for ra, rb in zip(a, b):
                    for x, y in zip(ra, rb):
                        if x != y:
                            return False
        return True

    __hash__ = None

    def __str__(self):
        if not self.coeffs:
            return "0"
        chunks = []
        for r in sorted(self.coeffs, reverse=True):
            rows = "; ".join(", ".join(str(x) for x in row) for row in self.coeffs[r])
            dtxt = "" if r == 0 else (" D" if r == 1 else f" D^{r}")
            chunks.append(f"[{rows}]{dtxt}")
        return " + ".join(chunks)

    def __repr__(self):
        return f"MatDiffOp({self}, side={self.action_side})"


def mat_compose(a: MatDiffOp, b: MatDiffOp) -> MatDiffOp:
    """Composition a(b(F)) consistent with the shared action side."""
    a._check(b)
    out: dict = {}
    left = a.action_side == "left"
    for r, ar in a.coeffs.items():
        for s, bs in b.coeffs.items():
            db = bs
            for m in range(r + 1):
                if m > 0:
                    db = mat_derivative(db)
                # left action: coefficient A_r * B_s^(m); right action: B_s^(m) * A_r
                term = mat_mul(ar, db) if left else mat_mul(db, ar)
                binom = math.comb(r, m)
                if binom != 1:
                    term = mat_scale(term, binom)
                key = r + s - m
                out[key] = mat_add(out[key], term) if key in out else term
    return MatDiffOp(out, a.size, a.action_side)


def mat_commutator(a: MatDiffOp, b: MatDiffOp) -> MatDiffOp:
    return mat_compose(a, b) - mat_compose(b, a)


def mat_ad_power(op: MatDiffOp, theta: MatDiffOp, j: int) -> MatDiffOp:
    if theta.order() > 0:
        raise ExactError("theta must be an order-0 operator")
    current = theta
    for _ in range(j):
        current = mat_commutator(op, current)
        current = MatDiffOp({r: tuple(tuple(x.reduced() for x in row) for row in m)
                             for r, m in current.coeffs.items()},
                            current.size, current.action_side)
    return current


@dataclass
class MatCondition:
    """sum over terms (j, M_j) of ad L^j(theta) composed with the constant
    right factor M_j; theta is an order-0 operator."""

    terms: list
    theta: MatDiffOp

    def __post_init__(self):
        if not self.terms:
            raise ExactError("matrix condition needs at least one term")


@dataclass
class MatConditionReport:
    holds: bool
    residual: MatDiffOp
    assumptions: list = field(default_factory=list)


def verify_matrix_condition(op: MatDiffOp, cond: MatCondition) -> MatConditionReport:
    """Exact check of sum_j (ad op^j(theta) o M_j) = 0."""
    theta = cond.theta.with_side(op.action_side)
    top = max(j for j, _ in cond.terms)
    powers = [theta]
    for j in range(top):
        powers.append(mat_commutator(op, powers[j]))
    residual = op.zero_like()
    for j, m in cond.terms:
        residual = residual + powers[j].right_factor(m)
    return MatConditionReport(mat_is_zero_op(residual), residual)


def mat_is_zero_op(a: MatDiffOp) -> bool:
    return all(mat_is_zero(m) for m in a.coeffs.values())


def convention_probe(op: MatDiffOp, cond: MatCondition) -> dict:
    """Run the condition under both action conventions; report which hold.

    Returns {"left": report, "right": report, "sides": [...]} where ``sides``
    lists the conventions under which the identity verifies.
    """
    out = {}
    sides = []
    for side in ("left", "right"):
        report = verify_matrix_condition(op.with_side(side), cond)
        out[side] = report
        if report.holds:
            sides.append(side)
    out["sides"] = sides
    return out
