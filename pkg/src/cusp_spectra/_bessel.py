"""Modified Bessel functions I_nu for the Robin-ball secular equations.

Only orders that actually occur are supported: nu = n/2 - 1 and nu + 1 for
ball dimension n >= 1, i.e. nonnegative integers and half-integers (plus
nu = -1/2, which has a closed form).  Everything is exponentially scaled,
ive(nu, z) = exp(-z) I_nu(z), so radii*lambda products up to the hundreds
stay representable.

Evaluation strategy
-------------------
* z < 12 — ascending power series.  All terms are positive (no
  cancellation) and the scaling factor exp(-z) is folded into the leading
  term, so the partial sums never overflow.
* z >= 12 — Miller's backward recurrence: run I_{k-1} = I_{k+1} + (2k/z) I_k
  downward from a start order well above max(nu, z) with arbitrary seed
  values, rescaling when the trial values grow past 1e250, then normalize:
  integer orders against exp(z) = I_0(z) + 2 sum_{k>=1} I_k(z), half-integer
  orders against the closed form I_{1/2}(z) = sqrt(2/(pi z)) sinh(z).
* in the overlap band 12 <= z < 13 both routes are evaluated and must agree
  to 1e-9 relative, else BesselConsistencyError — a live self-check at the
  crossover on every call that lands there.

iv_ratio evaluates I_{nu+1}/I_nu by a bottom-up continued fraction; it is
independent of both routes above and is used as a cross-check in tests.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

_CROSSOVER = 12.0
_OVERLAP_END = 13.0
_BIG = 1e250


class BesselConsistencyError(ArithmeticError):
    """Series and recurrence disagree at the crossover."""


def _check_order(nu: float) -> float:
    nu = float(nu)
    if nu < -0.5 or (2.0 * nu) != round(2.0 * nu):
        raise ValueError(f"order nu={nu!r} not supported: need integer or "
                         "half-integer nu >= -1/2")
    return nu


def _ive_series(nu: float, z: float) -> float:
    """exp(-z) sum_k (z/2)^(nu+2k) / (k! Gamma(nu+k+1)); terms all positive."""
    if z == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    log_t0 = nu * math.log(z / 2.0) - float(gammaln(nu + 1.0)) - z
    if log_t0 < -745.0:  # underflow of the whole sum
        return 0.0
    t = math.exp(log_t0)
    total = t
    q = z * z / 4.0
    for k in range(1, 400):
        t *= q / (k * (nu + k))
        total += t
        if t < 1e-18 * total:
            break
    return total


def _ive_half_integer_exact(z: float) -> float:
    """exp(-z) I_{1/2}(z) = sqrt(2/(pi z)) (1 - exp(-2z)) / 2."""
    return math.sqrt(2.0 / (math.pi * z)) * 0.5 * (-math.expm1(-2.0 * z))


def _ive_miller(nu: float, z: float) -> float:
    half = int(round(2.0 * nu)) % 2 != 0  # half-integer ladder?
    base = 0.5 if half else 0.0
    top = int(math.ceil(max(nu, z) + 12.0 * math.sqrt(z) + 40.0))
    # orders base + j for j = 0..top; recur down from j = top
    j_nu = int(round(nu - base))
    upper = 0.0
    cur = 1e-280
    saved = cur if j_nu == top else 0.0
    acc = cur  # running sum_j trial_j (integer normalization)
    for j in range(top, 0, -1):
        order = base + j
        prev = upper + (2.0 * order / z) * cur
        upper, cur = cur, prev
        if j - 1 == j_nu:
            saved = cur
        acc += cur
        if cur > _BIG:
            upper *= 1.0 / _BIG
            cur *= 1.0 / _BIG
            saved *= 1.0 / _BIG
            acc *= 1.0 / _BIG
    if half:
        return saved / cur * _ive_half_integer_exact(z)
    # exp(-z) I_nu = trial_nu / (trial_0 + 2 sum_{k>=1} trial_k)
    return saved / (2.0 * acc - cur)


def ive(nu: float, z: float) -> float:
    """Exponentially scaled modified Bessel function exp(-z) I_nu(z), z >= 0."""
    nu = _check_order(nu)
    z = float(z)
    if z < 0.0:
        raise ValueError("z must be nonnegative")
    if nu == -0.5:
        if z == 0.0:
            return math.inf
        return math.sqrt(2.0 / (math.pi * z)) * 0.5 * (1.0 + math.exp(-2.0 * z))
    if nu == 0.5 and z > 0.0:
        return _ive_half_integer_exact(z)
    if z < _CROSSOVER:
        return _ive_series(nu, z)
    val = _ive_miller(nu, z)
    if z < _OVERLAP_END:
        ref = _ive_series(nu, z)
        if abs(val - ref) > 1e-9 * abs(ref):
            raise BesselConsistencyError(
                f"I_{nu}({z}): series {ref!r} vs recurrence {val!r} "
                "disagree beyond 1e-9 at the crossover")
    return val


def ive_radial(nu: float, z: float) -> float:
    """exp(-z) z^(-nu) I_nu(z), finite at z = 0 (limit 2^-nu / Gamma(nu+1)).

    This is the radial profile of the ball ground state up to scaling.
    """
    nu = _check_order(nu)
    z = float(z)
    if z < 0.0:
        raise ValueError("z must be nonnegative")
    if z == 0.0:
        return math.exp(-nu * math.log(2.0) - float(gammaln(nu + 1.0)))
    if z < _CROSSOVER:
        # same series as _ive_series with the z^nu factor removed
        t = math.exp(-nu * math.log(2.0) - float(gammaln(nu + 1.0)) - z)
        total = t
        q = z * z / 4.0
        for k in range(1, 400):
            t *= q / (k * (nu + k))
            total += t
            if t < 1e-18 * total:
                break
        return total
    return ive(nu, z) * z ** (-nu)


def iv_ratio(nu: float, z: float) -> float:
    """I_{nu+1}(z) / I_nu(z) by a bottom-up continued fraction.

    ratio = z / (2(nu+1) + z^2 / (2(nu+2) + z^2 / ...)); independent of the
    series/recurrence evaluation, used for cross-checks.
    """
    nu = _check_order(nu)
    z = float(z)
    if z == 0.0:
        return 0.0
    depth = int(60 + 1.3 * z)
    d = 2.0 * (nu + depth)
    for k in range(depth - 1, 0, -1):
        d = 2.0 * (nu + k) + z * z / d
    return z / d
