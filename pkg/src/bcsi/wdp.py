"""Gaussian writing-on-dirty-paper rates for the three-receiver layered scheme.

Three superposed layers X = X1 + X2 + X3 with powers P1, P2, P3 share one
additive-Gaussian broadcast channel with interference S ~ N(0, Q) known at the
encoder.  Layer k treats lower layers as part of its effective state and the
remaining ones as noise:

    layer 3: state S3 = S,            noise P1 + P2 + N3
    layer 2: state S2 = S + X3,       noise P1 + N2
    layer 1: state S1 = X2 + X3 + S,  noise N1

With U_k = X_k + beta * S_k the achievable rate is I(U;Y) - I(U;S), evaluated
here from covariance determinants.  At the optimal beta the interference drops
out entirely and the rates coincide with the interference-free closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["WdpParams", "beta_star", "rate_of_beta", "wdp_rates"]

_DEGENERATE = 1e-300


@dataclass(frozen=True)
class WdpParams:
    """Layer powers, receiver noise variances (n1 <= n2 <= n3), and state variance."""

    p1: float
    p2: float
    p3: float
    n1: float
    n2: float
    n3: float
    q: float = 0.0

    def __post_init__(self):
        for name in ("p1", "p2", "p3", "n1", "n2", "n3", "q"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if not (self.n1 <= self.n2 <= self.n3):
            raise ValueError("noise ordering n1 <= n2 <= n3 violated")

    @property
    def p(self) -> float:
        return self.p1 + self.p2 + self.p3


def _layer(p: WdpParams, layer: int) -> tuple[float, float, float]:
    """(signal power, effective state variance, effective noise variance)."""
    if layer == 3:
        return p.p3, p.q, p.p1 + p.p2 + p.n3
    if layer == 2:
        return p.p2, p.q + p.p3, p.p1 + p.n2
    if layer == 1:
        return p.p1, p.q + p.p2 + p.p3, p.n1
    raise ValueError(f"layer must be 1, 2, or 3, got {layer}")


def beta_star(p: WdpParams) -> tuple[float, float, float]:
    """Optimal dirty-paper coefficients (beta1, beta2, beta3)."""
    d3 = p.p + p.n3
    d2 = p.p1 + p.p2 + p.n2
    d1 = p.p1 + p.n1
    for name, d in (("p+n3", d3), ("p1+p2+n2", d2), ("p1+n1", d1)):
        if d <= 0:
            raise ValueError(f"beta_star denominator {name} is zero")
    return p.p1 / d1, p.p2 / d2, p.p3 / d3


def wdp_rates(p: WdpParams) -> tuple[float, float, float]:
    """Interference-free rates (R1, R2, R3) in nats; independent of q."""
    if min(p.n1, p.n2, p.n3) <= 0:
        raise ValueError("noise variances must be positive")
    r3 = 0.5 * math.log1p(p.p3 / (p.p1 + p.p2 + p.n3))
    r2 = 0.5 * math.log1p(p.p2 / (p.p1 + p.n2))
    r1 = 0.5 * math.log1p(p.p1 / p.n1)
    return r1, r2, r3


def _mi(va: float, vb: float, cab: float) -> float:
    """I(A;B) for jointly Gaussian scalars from their covariance entries."""
    if va <= _DEGENERATE or vb <= _DEGENERATE:
        return 0.0
    det = va * vb - cab * cab
    if det <= 0:
        return math.inf
    return 0.5 * math.log(va * vb / det)


def rate_of_beta(p: WdpParams, layer: int, beta: float) -> float:
    """I(U;Y) - I(U;S) for U = X_k + beta * S_k at one layer, in nats.

    A degenerate state (variance 0, e.g. layer 3 with q = 0) contributes
    I(U;S) = 0, the continuous limit of the closed form.
    """
    if min(p.n1, p.n2, p.n3) <= 0:
        raise ValueError("noise variances must be positive")
    px, vs, noise = _layer(p, layer)
    vu = px + beta * beta * vs
    vy = px + vs + noise
    i_uy = _mi(vu, vy, px + beta * vs)
    i_us = _mi(vu, vs, beta * vs)
    return i_uy - i_us
