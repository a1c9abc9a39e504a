"""Shared test oracles, independent of the implementations they check."""

import math
from fractions import Fraction

import numpy as np

from fliptricks.quat import Quaternion
from fliptricks.tricks import (
    Concat,
    OShift,
    Power,
    Primitive,
    Product,
    Reverse,
    TimeScale,
)

# ---------------------------------------------------------------------------
# Quaternion oracle: expand products over the basis (1, i, j, k) using the
# structure constants directly, nothing shared with fliptricks.quat.mul.

# _BASIS_MUL[(a, b)] = (index, sign) with e_a * e_b = sign * e_index
_BASIS_MUL = {
    (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
    (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
    (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
    (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
}


def naive_mul(p, q):
    """Quaternion product via term-by-term basis expansion."""
    pc = (p.q0, p.q1, p.q2, p.q3) if isinstance(p, Quaternion) else tuple(p)
    qc = (q.q0, q.q1, q.q2, q.q3) if isinstance(q, Quaternion) else tuple(q)
    out = [0.0, 0.0, 0.0, 0.0]
    for a in range(4):
        for b in range(4):
            idx, sign = _BASIS_MUL[(a, b)]
            out[idx] += sign * pc[a] * qc[b]
    return tuple(out)


def naive_conjugation(q, v):
    """q v q^-1 for unit q via the basis-expansion product."""
    qc = (q.q0, q.q1, q.q2, q.q3) if isinstance(q, Quaternion) else tuple(q)
    q_inv = (qc[0], -qc[1], -qc[2], -qc[3])
    out = naive_mul(naive_mul(qc, (0.0, *v)), q_inv)
    return np.array(out[1:])


# ---------------------------------------------------------------------------
# Rotation oracle: axis/angle matrix via the skew-symmetric cross-product
# form R = I + sin(psi) [u]x + (1 - cos(psi)) [u]x^2.


def skew(u):
    x, y, z = u
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def axis_angle_matrix(u, angle):
    u = np.asarray(u, dtype=float)
    k = skew(u)
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


# ---------------------------------------------------------------------------
# Random inputs


def random_unit_quaternion(rng):
    from fliptricks.quat import UnitQuaternion

    v = rng.normal(size=4)
    while np.linalg.norm(v) < 1e-3:
        v = rng.normal(size=4)
    v = v / np.linalg.norm(v)
    return UnitQuaternion(*v)


def random_unit_axis(rng):
    v = rng.normal(size=3)
    while np.linalg.norm(v) < 1e-3:
        v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_expr(rng, depth):
    """A random trick expression of the given maximum depth."""
    if depth <= 0:
        return Primitive(str(rng.choice(["O", "S", "K", "U"])))
    kind = rng.choice(
        ["prim", "prim", "prim", "power", "product", "scale", "concat", "oshift", "reverse"]
    )
    if kind == "prim":
        return Primitive(str(rng.choice(["O", "S", "K", "U"])))
    if kind == "power":
        n = int(rng.choice([-3, -2, -1, 1, 2, 3]))
        return Power(random_expr(rng, depth - 1), n)
    if kind == "product":
        return Product(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if kind == "scale":
        den = int(rng.integers(1, 6))
        num = int(rng.integers(1, den + 1))
        return TimeScale(random_expr(rng, depth - 1), Fraction(num, den))
    if kind == "concat":
        return Concat(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if kind == "oshift":
        return OShift(random_expr(rng, depth - 1))
    return Reverse(random_expr(rng, depth - 1))


def monotone_reparametrization(rng, knots=3):
    """A random piecewise-linear phi with phi(0) = 0 and phi(1) = 1."""
    xs = np.concatenate([[0.0], np.sort(rng.uniform(0.05, 0.95, size=knots)), [1.0]])
    ys = np.concatenate([[0.0], np.sort(rng.uniform(0.02, 0.98, size=knots)), [1.0]])
    return lambda t: float(np.interp(t, xs, ys))
