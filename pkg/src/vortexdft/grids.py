"""Radial grids, quadrature weights and finite-difference stencils.

Everything downstream integrates against the measure r dr on a half-line
grid that is geometric near the origin (to resolve the 1/r^2 singular
point) and uniform in the bulk (to resolve oscillations at the largest
space frequency in play).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def geometric_uniform_nodes(r_min: float, r_max: float, n_geo: int, n_uni: int,
                            r_knee: float = 2.0) -> np.ndarray:
    """Strictly increasing nodes: relative spacing g*r near the origin,
    capped at an absolute h in the bulk, walked in both directions from
    the anchor r = 1 so the spacing function h(r) = min(g r, h_uni) is
    continuous everywhere (spacing jumps dominate quadrature error).

    n_geo calibrates g, n_uni calibrates h_uni; the kernel-integral anchor
    r = 1 is always a node.
    """
    if not (0.0 < r_min < 1.0 < r_knee < r_max):
        raise ValueError("need 0 < r_min < 1 < r_knee < r_max")
    g = (r_knee / r_min) ** (1.0 / n_geo) - 1.0
    h_uni = (r_max - r_knee) / n_uni
    down = [1.0]
    while down[-1] > r_min:
        down.append(down[-1] - min(g * down[-1], h_uni))
    down[-1] = r_min
    up = [1.0]
    while up[-1] < r_max:
        up.append(up[-1] + min(g * up[-1], h_uni))
    up[-1] = r_max
    nodes = np.concatenate([down[::-1], up[1:]])
    keep = np.concatenate([[True], np.diff(nodes) > 1e-9 * nodes[1:]])
    return nodes[keep]


def simpson_weights(x: np.ndarray) -> np.ndarray:
    """Composite Simpson weights on (possibly uneven) nodes for ∫ f dx.

    Consecutive node triples are integrated by the quadratic through them;
    a trailing odd interval is handled by the quadratic through the last
    three nodes restricted to it.  Exact for piecewise-quadratic f.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError("need at least two nodes")
    w = np.zeros(n)
    if n == 2:
        h = x[1] - x[0]
        return np.array([h / 2, h / 2])
    npairs = (n - 1) // 2
    for p in range(npairs):
        i = 2 * p
        x0, x1, x2 = x[i], x[i + 1], x[i + 2]
        h0, h1 = x1 - x0, x2 - x1
        # ∫_{x0}^{x2} of the Lagrange quadratic through (x0,x1,x2)
        c0 = (h0 + h1) * (2 * h0 - h1) / (6 * h0)
        c1 = (h0 + h1) ** 3 / (6 * h0 * h1)
        c2 = (h0 + h1) * (2 * h1 - h0) / (6 * h1)
        w[i] += c0
        w[i + 1] += c1
        w[i + 2] += c2
    if (n - 1) % 2 == 1:
        # integrate the quadratic through the last three nodes over the
        # final interval only
        x0, x1, x2 = x[-3], x[-2], x[-1]
        h1 = x2 - x1
        d01, d02, d12 = x0 - x1, x0 - x2, x1 - x2

        def int_basis(xa, xb, num_roots):
            # ∫ (t-a)(t-b) dt over [x1, x2] for the quadratic basis
            a, b = num_roots
            f = lambda t: t ** 3 / 3 - (a + b) * t ** 2 / 2 + a * b * t
            return f(xb) - f(xa)

        w[-3] += int_basis(x1, x2, (x1, x2)) / (d01 * d02)
        w[-2] += int_basis(x1, x2, (x0, x2)) / (-d01 * d12)
        w[-1] += int_basis(x1, x2, (x0, x1)) / (d02 * d12)
    return w


@dataclass(frozen=True)
class RadialGrid:
    """Radial nodes plus quadrature weights for ∫ f(r) r dr.

    Attributes
    ----------
    nodes : strictly increasing positive radii, nodes[0] <= 1e-4 scale.
    dr_weights : weights for ∫ f dr.
    weights : weights for ∫ f r dr  (== dr_weights * nodes).
    """

    nodes: np.ndarray
    dr_weights: np.ndarray = field(default=None)  # type: ignore[assignment]
    weights: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 4:
            raise ValueError("nodes must be a 1-d array with >= 4 entries")
        if np.any(np.diff(nodes) <= 0) or nodes[0] <= 0:
            raise ValueError("nodes must be strictly increasing and positive")
        object.__setattr__(self, "nodes", nodes)
        dr = simpson_weights(nodes)
        object.__setattr__(self, "dr_weights", dr)
        object.__setattr__(self, "weights", dr * nodes)

    @classmethod
    def build(cls, r_min: float = 1e-4, r_max: float = 60.0,
              n_geo: int = 240, n_uni: int = 2048, r_knee: float = 2.0) -> "RadialGrid":
        return cls(geometric_uniform_nodes(r_min, r_max, n_geo, n_uni, r_knee))

    @property
    def r_min(self) -> float:
        return float(self.nodes[0])

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])

    def integrate(self, f: np.ndarray) -> complex | float:
        """∫ f(r) r dr by the grid quadrature; f sampled on nodes."""
        return np.tensordot(self.weights, f, axes=(0, 0))

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex | float:
        """Bilinear pairing ∫ (f · g)(r) r dr for 2-vector fields (nr, 2)."""
        return np.sum(self.weights[:, None] * f * g)

    def norm2(self, f: np.ndarray, s: float = 0.0) -> float:
        """Weighted norm  || <r>^s f ||_{L2(r dr)}  for scalar or 2-vector f."""
        w = self.weights * (1.0 + self.nodes ** 2) ** s
        if f.ndim == 1:
            return float(np.sqrt(np.sum(w * np.abs(f) ** 2)))
        return float(np.sqrt(np.sum(w[:, None] * np.abs(f) ** 2)))

    def index_of(self, r: float) -> int:
        return int(np.argmin(np.abs(self.nodes - r)))

    def spec(self) -> dict:
        return {
            "r_min": self.r_min,
            "r_max": self.r_max,
            "n": int(self.nodes.size),
        }


def fornberg_weights(x: np.ndarray, x0: float, m: int) -> np.ndarray:
    """Finite-difference weights for the m-th derivative at x0 on nodes x.

    Fornberg's recursive algorithm; exact for polynomials of degree
    len(x)-1.  Returns the weight row for derivative order m.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    c = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = x[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


def derivative_matrix(nodes: np.ndarray, order: int, npts: int = 7) -> "np.ndarray":
    """Dense banded-style differentiation matrix on uneven nodes.

    Row i holds the npts-point Fornberg stencil (one-sided near the ends).
    Returned as a dense (n, n) array; fine at the grid sizes used here
    only when applied via the sparse representation below.
    """
    from scipy.sparse import lil_matrix

    n = nodes.size
    half = npts // 2
    mat = lil_matrix((n, n))
    for i in range(n):
        lo = min(max(i - half, 0), n - npts)
        sl = slice(lo, lo + npts)
        mat[i, sl] = fornberg_weights(nodes[sl], nodes[i], order)
    return mat.tocsr()


def cumtrapz_exp_left(x: np.ndarray, g: np.ndarray, rate: float) -> np.ndarray:
    """S(x_i) = ∫_{x_0}^{x_i} exp(-rate (x_i - t)) g(t) dt.

    Exponentially fitted trapezoid: exact for g piecewise linear, stable
    for arbitrarily large rate*h.  rate >= 0.
    """
    x = np.asarray(x, float)
    h = np.diff(x)
    if rate == 0.0:
        from scipy.integrate import cumulative_trapezoid
        return cumulative_trapezoid(g, x, initial=0.0)
    e = np.exp(-rate * h)
    m0 = (1.0 - e) / rate
    # ∫_0^h e^{-rate (h-τ)} τ dτ = (h - m0)/rate
    m1 = (h - m0) / rate
    w_hi = m1 / h            # weight of g_i
    w_lo = m0 - w_hi         # weight of g_{i-1}
    out = np.zeros_like(np.asarray(g, dtype=np.result_type(g, 1.0)))
    for i in range(1, x.size):
        out[i] = e[i - 1] * out[i - 1] + w_lo[i - 1] * g[i - 1] + w_hi[i - 1] * g[i]
    return out


def cumtrapz_exp_right(x: np.ndarray, g: np.ndarray, rate: float) -> np.ndarray:
    """S(x_i) = ∫_{x_i}^{x_end} exp(-rate (t - x_i)) g(t) dt (rate >= 0)."""
    rev = cumtrapz_exp_left(-x[::-1], g[::-1], rate)
    return rev[::-1]


def _exp_moments(z: np.ndarray):
    """(m0, m1, m2) of ∫_0^h e^{-rate tau} tau^k dtau in units of h^{k+1},
    with z = rate * h; series branch guards the small-z cancellation."""
    z = np.asarray(z, dtype=float)
    small = z < 1e-3
    zs = np.where(small, 1.0, z)
    e = np.exp(-zs)
    m0 = (1.0 - e) / zs
    m1 = (1.0 - e * (1.0 + zs)) / zs ** 2
    m2 = (2.0 - e * (2.0 + 2.0 * zs + zs ** 2)) / zs ** 3
    if np.any(small):
        t = z[small]
        m0 = np.array(m0, copy=True)
        m1 = np.array(m1, copy=True)
        m2 = np.array(m2, copy=True)
        m0[small] = 1.0 - t / 2 + t ** 2 / 6 - t ** 3 / 24
        m1[small] = 0.5 - t / 3 + t ** 2 / 8 - t ** 3 / 30
        m2[small] = 1.0 / 3 - t / 4 + t ** 2 / 10 - t ** 3 / 36
    return m0, m1, m2


def _local_exp_quad(x: np.ndarray, g: np.ndarray, rate: float) -> np.ndarray:
    """loc[i] = ∫_{x_i}^{x_{i+1}} e^{-rate (t - x_i)} g(t) dt with g
    approximated by the quadratic through (i-1, i, i+1) (one-sided at the
    left end).  Third-order accurate, stable for any rate*h >= 0."""
    h = np.diff(x)
    m0, m1, m2 = _exp_moments(rate * h)
    m0, m1, m2 = m0 * h, m1 * h ** 2, m2 * h ** 3
    n = x.size
    loc = np.empty(n - 1, dtype=np.result_type(g, 1.0))
    # centered triples for i in [1, n-2]
    hm = h[:-1]
    gp = (g[2:] - g[1:-1]) / h[1:]
    gm = (g[1:-1] - g[:-2]) / hm
    c2 = (gp - gm) / (hm + h[1:])
    c1 = gp - c2 * h[1:]
    loc[1:] = g[1:-1] * m0[1:] + c1 * m1[1:] + c2 * m2[1:]
    # first interval: quadratic through (0, 1, 2), expanded around x_0
    h0, h1 = h[0], h[1]
    d0 = (g[1] - g[0]) / h0
    d1 = (g[2] - g[1]) / h1
    c2f = (d1 - d0) / (h0 + h1)
    loc[0] = g[0] * m0[0] + (d0 - c2f * h0) * m1[0] + c2f * m2[0]
    return loc


def cumexp_left(x: np.ndarray, g: np.ndarray, rate: float) -> np.ndarray:
    """S(x_i) = ∫_{x_0}^{x_i} e^{-rate (x_i - t)} g(t) dt, 3rd order."""
    rev = cumexp_right(-x[::-1], g[::-1], rate)
    return rev[::-1]


def cumexp_right(x: np.ndarray, g: np.ndarray, rate: float) -> np.ndarray:
    """S(x_i) = ∫_{x_i}^{x_end} e^{-rate (t - x_i)} g(t) dt, 3rd order.

    The suffix recurrence S_i = loc_i + e^{-rate h_i} S_{i+1} is evaluated
    by vectorized scans over chunks of bounded rate*span, which keeps the
    rescaling exponentials within floating range for any rate.
    """
    if np.iscomplexobj(g):
        return cumexp_right(x, g.real, rate) + 1j * cumexp_right(x, g.imag, rate)
    n = x.size
    loc = _local_exp_quad(x, g, rate)
    out = np.zeros(n)
    if rate <= 0:
        out[:-1] = np.cumsum(loc[::-1])[::-1]
        return out
    span = 30.0 / rate
    edges = [0]
    target = x[0] + span
    for i in range(1, n):
        if x[i] >= target:
            edges.append(i)
            target = x[i] + span
    if edges[-1] != n - 1:
        edges.append(n - 1)
    carry = 0.0
    for k in range(len(edges) - 1, 0, -1):
        a, b = edges[k - 1], edges[k]
        xa = x[a]
        w = np.exp(-rate * (x[a:b] - xa))         # e^{-rate (x_j - xa)}
        c = w * loc[a:b]
        suf = np.cumsum(c[::-1])[::-1]
        seg = suf / w
        seg += carry * np.exp(-rate * (x[b] - x[a:b]))
        out[a:b] = seg
        carry = seg[0]
    return out


def cumint_right(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """∫_{x_i}^{x_end} g dt by cumulative trapezoid from the right."""
    from scipy.integrate import cumulative_trapezoid
    total = cumulative_trapezoid(g, x, initial=0.0)
    return total[-1] - total
