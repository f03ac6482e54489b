"""Counting-law constants for the effective 1D operator.

The negative-spectrum counting function of the comparison operator obeys
N(A_1, -eps) ~ J_p eps^{-(2-p)/(2p)}, with

    J_p = n^{1/p} I_p / (2 pi),      I_p = Int_0^1 sqrt((1 - s^p)/s^p) ds,

and the physical-threshold count carries the coefficient

    M_p = (1/2 pi) B^{(p-2)/(2p)} (n/m)^{1/p} I_p.

I_p is evaluated two independent ways: by singularity-splitting
integration after the substitution u = s^p (which turns the integrand
into u^{1/p - 3/2} sqrt(1-u)), and by the closed form
I_p = (1/p) B(1/p - 1/2, 3/2).  Both are computed on every call and must
agree to 5e-12, else the call fails loudly.

On [0, 1/2] the u^{a-1} endpoint power (a = 1/p - 1/2 can be as small as
2.5e-3) is integrated exactly term by term against the binomial series of
sqrt(1-u), which converges geometrically there; on [1/2, 1] the
(1-u)^{1/2} power is absorbed into a Gauss-Jacobi weight, leaving an
analytic integrand.  (A Gauss-Jacobi weight u^{a-1} on the left half is
tempting but scipy's nodes lose ~7 digits as a -> 0; the series keeps the
split accurate to ~5e-13 absolute uniformly in p.)

p = 1 sits outside the operating range (the peak is no longer a peak) but
the integral still converges there — it is accepted purely as a quadrature
check value, I_1 = B(1/2, 3/2) = pi/2.  At p = 2 the integral diverges;
p >= 2 is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import roots_jacobi

_GUARD = 5e-12  # internal quadrature-vs-closed-form consistency bound


@dataclass(frozen=True)
class WeylConstants:
    """Phase integral and counting prefactor for one (p, n)."""

    p: float
    n: int
    I_p: float
    J_p: float
    quadrature_error_bound: float


def _check_p(p: float) -> float:
    p = float(p)
    if not (1.0 <= p < 2.0):
        raise ValueError(
            f"p={p!r} outside [1, 2): the peak model needs 1 < p < 2 "
            "(p = 1 accepted only as a quadrature check value; "
            "the integral diverges at p = 2)")
    return p


@lru_cache(maxsize=8)
def _jacobi_rule(alpha: float, beta: float, nodes: int = 60):
    x, w = roots_jacobi(nodes, alpha, beta)
    return x, w


def _left_split(a: float, terms: int = 80) -> float:
    """Int_0^{1/2} u^(a-1) sqrt(1-u) du, exactly term by term.

    sqrt(1-u) = 1 - sum_{k>=1} c_k u^k with c_k > 0, so every term
    integrates in closed form and the tail decays like 2^-k.
    """
    total = 0.5 ** a / a
    c = 0.5
    for k in range(1, terms):
        total -= c * 0.5 ** (a + k) / (a + k)
        c *= (k - 0.5) / (k + 1.0)
    return total


def phase_integral(p: float) -> float:
    """Int_0^1 sqrt((1 - s^p)/s^p) ds by singularity-split integration.

    Substituting u = s^p gives (1/p) Int_0^1 u^(a-1) (1-u)^(1/2) du with
    a = 1/p - 1/2 in (0, 1/2]; the singular endpoint powers are handled
    exactly on each half of [0, 1] (see module docstring).
    """
    p = _check_p(p)
    a = 1.0 / p - 0.5
    left = _left_split(a)
    # right half: u = (t+3)/4 in (1/2, 1), weight (1-t)^(1/2)
    t2, w2 = _jacobi_rule(0.5, 0.0)
    right = 0.25 ** 1.5 * float(w2 @ ((t2 + 3.0) / 4.0) ** (a - 1.0))
    quad = (left + right) / p
    closed = beta_fn(a, 1.5) / p
    if abs(quad - closed) > _GUARD * max(1.0, closed):
        raise ArithmeticError(
            f"phase integral quadrature {quad!r} disagrees with "
            f"closed form {closed!r} at p={p}")
    return quad


def phase_integral_closed_form(p: float) -> float:
    """(1/p) B(1/p - 1/2, 3/2) — the Beta closed form of the phase integral."""
    p = _check_p(p)
    return beta_fn(1.0 / p - 0.5, 1.5) / p


def weyl_J(p: float, n: int) -> WeylConstants:
    """Counting prefactor J_p = n^{1/p} I_p / (2 pi) with diagnostics."""
    p = _check_p(p)
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise ValueError("n must be a positive integer")
    I_p = phase_integral(p)
    err = abs(I_p - phase_integral_closed_form(p))
    return WeylConstants(p=p, n=int(n), I_p=I_p,
                         J_p=float(n) ** (1.0 / p) * I_p / (2.0 * np.pi),
                         quadrature_error_bound=err)


def threshold_count_coeff(p: float, n: int, m: float, B: float) -> float:
    """M_p = (1/2 pi) B^{(p-2)/(2p)} (n/m)^{1/p} I_p.

    Coefficient of alpha^{(p-1)/2} in the count of eigenvalues below
    -B alpha^{p+1} for the peak of half-opening m.
    """
    p = _check_p(p)
    if not (m > 0):
        raise ValueError("m must be positive")
    if not (B > 0):
        raise ValueError("B must be positive")
    I_p = phase_integral(p)
    return (B ** ((p - 2.0) / (2.0 * p)) * (float(n) / m) ** (1.0 / p)
            * I_p / (2.0 * np.pi))


def predicted_count(p: float, n: int, eps: float) -> float:
    """Leading-order count J_p eps^{-(2-p)/(2p)} of eigenvalues below -eps."""
    if not (eps > 0):
        raise ValueError("eps must be positive")
    c = weyl_J(p, n)
    return c.J_p * eps ** (-(2.0 - p) / (2.0 * p))
