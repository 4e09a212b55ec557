"""Bessel-type special functions used across the toolkit.

Integer orders 0 and 1 of J, Y, I, K delegate to scipy.special, with
derivatives supplied by the standard recurrences (never by differencing).

The pair (I_imag, K_imag) solves

    f'' + f'/x - f + f/x**2 = 0,

i.e. the modified Bessel equation with nu^2 = -1.  Both are real:
I_imag = Re I_i (growing like e^x/sqrt(2 pi x)) and
K_imag = -pi Im I_i / sinh(pi) (decaying like e^{-x} sqrt(pi/(2x))).
They are evaluated by the complex-order power series for small x and by
ODE continuation from series/asymptotic seeds beyond; they oscillate as
x -> 0 and their largest zero defines the published threshold R_STAR.
"""

from __future__ import annotations

import enum
from functools import lru_cache

import numpy as np
from scipy import special as sp
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

_SERIES_MAX = 4.0       # series <-> ODE handoff for the imaginary-order pair
_ODE_FAR = 800.0        # continuation limit / asymptotic seed radius


class BesselFamily(enum.Enum):
    J = "J"
    Y = "Y"
    I = "I"
    K = "K"
    I_IMAG = "I_imag"
    K_IMAG = "K_imag"


# ---------------------------------------------------------------------------
# integer orders: values and derivatives via recurrences
# ---------------------------------------------------------------------------

def _pair(f0, f1, d0, d1):
    return {0: (f0, d0), 1: (f1, d1)}


_INTEGER = {
    BesselFamily.J: _pair(sp.j0, sp.j1,
                          lambda x: -sp.j1(x),
                          lambda x: sp.j0(x) - sp.j1(x) / x),
    BesselFamily.Y: _pair(sp.y0, sp.y1,
                          lambda x: -sp.y1(x),
                          lambda x: sp.y0(x) - sp.y1(x) / x),
    BesselFamily.I: _pair(sp.i0, sp.i1,
                          lambda x: sp.i1(x),
                          lambda x: sp.i0(x) - sp.i1(x) / x),
    BesselFamily.K: _pair(sp.k0, sp.k1,
                          lambda x: -sp.k1(x),
                          lambda x: -sp.k0(x) - sp.k1(x) / x),
}


def bessel(family: BesselFamily, order: int, x, derivative: bool = False):
    """Evaluate a Bessel-type function (or its derivative) at x > 0.

    J also accepts x = 0.  The imaginary-order pair ignores `order` and is
    restricted to x >= R_STAR, its published positivity threshold.
    """
    x = np.asarray(x, dtype=float)
    if family in (BesselFamily.I_IMAG, BesselFamily.K_IMAG):
        if np.any(x < r_star()):
            raise ValueError("imaginary-order pair is published for x >= R_STAR")
        vi, dvi, vk, dvk = imag_pair_raw(x)
        if family is BesselFamily.I_IMAG:
            out = dvi if derivative else vi
        else:
            out = dvk if derivative else vk
        out = np.asarray(out)
        return out if out.shape != (1,) else float(out[0])
    if order not in (0, 1):
        raise ValueError("only orders 0 and 1 are provided")
    xmin = 0.0 if (family is BesselFamily.J) else np.nextafter(0.0, 1.0)
    if np.any(x < xmin):
        raise ValueError(f"{family.value}{order} requires x > 0")
    f, d = _INTEGER[family][order]
    fn = d if derivative else f
    with np.errstate(over="raise"):
        try:
            out = fn(x)
        except FloatingPointError as exc:  # I0/I1 overflow at large x
            raise OverflowError(f"{family.value}{order} overflowed") from exc
    if np.any(np.isinf(out)):
        raise OverflowError(f"{family.value}{order} overflowed")
    return out if np.ndim(out) else float(out)


def hankel1(order: int, x, derivative: bool = False):
    """H_order = J + iY and its derivative; x > 0."""
    j = bessel(BesselFamily.J, order, x, derivative)
    y = bessel(BesselFamily.Y, order, x, derivative)
    return j + 1j * y


# ---------------------------------------------------------------------------
# imaginary-order pair
# ---------------------------------------------------------------------------

def _series_I_i(x: np.ndarray, nterms: int = 60):
    """Complex I_i(x) = (x/2)^i sum_k (x^2/4)^k / (k! Gamma(k+1+i)), and d/dx."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    k = np.arange(nterms)
    coef = 1.0 / (sp.gamma(k + 1) * sp.gamma(k + 1 + 1j))
    q = (x[:, None] ** 2 / 4.0) ** k
    pref = np.exp(1j * np.log(x / 2.0))
    val = pref * np.sum(coef * q, axis=1)
    # d/dx [ (x/2)^{2k+i} ] = (2k+i)/x * (x/2)^{2k+i}
    dval = pref * np.sum(coef * q * (2 * k + 1j), axis=1) / x
    return val, dval


def _scaled_rhs(sign: float):
    # f = e^{sign*x} g turns the nu^2=-1 modified equation into
    # g'' + (2*sign + 1/x) g' + (sign/x + 1/x^2) g = 0
    def rhs(x, y):
        g, dg = y
        return [dg, -(2 * sign + 1.0 / x) * dg - (sign / x + 1.0 / x ** 2) * g]
    return rhs


@lru_cache(maxsize=1)
def _imag_solutions():
    """Dense continuations of the scaled pair (e^{-x} I_imag, e^{x} K_imag)."""
    # scaled I: seed from the series at the handoff, integrate outward
    # (the exponentially small K-admixture decays forward -> stable)
    v, dv = _series_I_i(np.array([_SERIES_MAX]))
    s = np.exp(-_SERIES_MAX)
    seed_i = [float(v[0].real) * s, float((dv[0] - v[0]).real) * s]
    sol_i = solve_ivp(_scaled_rhs(+1.0), (_SERIES_MAX, _ODE_FAR), seed_i,
                      method="DOP853", rtol=1e-12, atol=1e-300,
                      dense_output=True)
    if not sol_i.success:
        raise RuntimeError("I_imag continuation failed")
    # scaled K: seed from the nu^2 = -1 asymptotic series at x_far,
    # integrate inward (the e^{2x} mode decays backward -> stable).
    # K ~ e^{-x} sqrt(pi/(2x)) S(x), S = 1 + sum_k prod_j (4nu^2-(2j-1)^2)/(8jx)
    x0 = _ODE_FAR
    kvals = np.arange(1, 30)
    terms = np.cumprod([(-4.0 - (2 * j - 1) ** 2) / (8.0 * j * x0) for j in kvals])
    S = 1.0 + float(np.sum(terms))
    Sp = float(np.sum(-kvals * terms / x0))
    amp = np.sqrt(np.pi / (2 * x0))
    seed_k = [amp * S, amp * (Sp - S * 0.5 / x0)]
    sol_k = solve_ivp(_scaled_rhs(-1.0), (x0, 0.05), seed_k,
                      method="DOP853", rtol=1e-12, atol=1e-300,
                      dense_output=True)
    if not sol_k.success:
        raise RuntimeError("K_imag continuation failed")
    return sol_i, sol_k


def imag_pair_scaled(x):
    """Scaled pair (Ib, Ib', Kb, Kb') with I_imag = e^x Ib, K_imag = e^{-x} Kb.

    Overflow-free for any x in (0, 800]; primed quantities are d/dx of the
    scaled functions themselves.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x > _ODE_FAR):
        raise OverflowError("imaginary-order continuation range exceeded")
    ib = np.empty_like(x)
    dib = np.empty_like(x)
    kb = np.empty_like(x)
    dkb = np.empty_like(x)
    sol_i, sol_k = _imag_solutions()
    low = x <= _SERIES_MAX
    if np.any(low):
        v, dv = _series_I_i(x[low])
        ck = -np.pi / np.sinh(np.pi)
        e = np.exp(-x[low])
        ib[low] = v.real * e
        dib[low] = (dv - v).real * e
        kb[low] = ck * v.imag / e
        dkb[low] = ck * (dv + v).imag / e
    if np.any(~low):
        yi = sol_i.sol(x[~low])
        ib[~low], dib[~low] = yi[0], yi[1]
        yk = sol_k.sol(x[~low])
        kb[~low], dkb[~low] = yk[0], yk[1]
    return ib, dib, kb, dkb


def imag_pair_raw(x):
    """(I_imag, I_imag', K_imag, K_imag') without the R_STAR domain guard.

    Used for zero detection and by the low-frequency ODE machinery; raw
    values overflow/underflow around |x| ~ 700.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ib, dib, kb, dkb = imag_pair_scaled(x)
    ep = np.exp(x)
    em = np.exp(-x)
    return ib * ep, (dib + ib) * ep, kb * em, (dkb - kb) * em


@lru_cache(maxsize=1)
def r_star() -> float:
    """Largest zero of either I_imag or K_imag, detected numerically.

    Both oscillate as x -> 0 and keep a fixed sign beyond; this constant
    is published rather than assumed.
    """
    xs = np.linspace(0.05, _SERIES_MAX, 4000)
    vi, _, vk, _ = imag_pair_raw(xs)
    largest = 0.0
    for comp, v in ((0, vi), (2, vk)):
        sgn = np.sign(v)
        flips = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
        if flips.size:
            i = flips[-1]
            f = lambda t, c=comp: float(imag_pair_raw(t)[c])
            largest = max(largest, brentq(f, xs[i], xs[i + 1], xtol=1e-12))
    return float(largest)


R_STAR = None  # populated lazily; use r_star()
