"""Shared channel and scheme builders for the test suite."""

import numpy as np

from bcsi.channels import LessNoisyChannel, MbcChannel
from bcsi.prob import Alphabet, CondKernel, FinitePmf, random_kernel, random_pmf
from bcsi.regions import AuxScheme

S2, X2 = Alphabet("S", 2), Alphabet("X", 2)
Y1A, Y2A, Y3A = Alphabet("Y1", 2), Alphabet("Y2", 2), Alphabet("Y3", 2)


def flip_channel(rho: float = 0.002) -> MbcChannel:
    """Rare state flips the input: y1 = y3 = x XOR s, y2 = y1."""
    main = np.zeros((2, 2, 2, 2))
    for x in range(2):
        for s in range(2):
            t = x ^ s
            main[x, s, t, t] = 1.0
    return MbcChannel(
        FinitePmf((S2,), np.array([1.0 - rho, rho])),
        CondKernel((X2, S2), (Y1A, Y3A), main),
        CondKernel((Y1A,), (Y2A,), np.eye(2)),
    )


def flip_scheme(lam: float = 0.64) -> AuxScheme:
    """State-canceling layers for the flip channel.

    U = V in {0,1,2} with p(u) = (lam/2, lam/2, 1-lam); x = u XOR s for
    u in {0,1} and x = Bern(1/2) XOR s at u = 2, so every receiver sees
    the cloud symbol directly and I(U;S) = I(V;S|U) = 0.
    """
    u_alpha, v_alpha = Alphabet("U", 3), Alphabet("V", 3)
    pu = np.zeros((2, 3))
    pu[:, 0] = lam / 2
    pu[:, 1] = lam / 2
    pu[:, 2] = 1.0 - lam
    pv = np.zeros((3, 2, 3))
    for u in range(3):
        pv[u, :, u] = 1.0
    px = np.zeros((3, 2, 2))
    for s in range(2):
        px[0, s, s] = 1.0
        px[1, s, 1 - s] = 1.0
        px[2, s, :] = 0.5
    return AuxScheme(
        CondKernel((S2,), (u_alpha,), pu),
        CondKernel((u_alpha, S2), (v_alpha,), pv),
        CondKernel((v_alpha, S2), (X2,), px),
    )


def rand_mbc(seed, nx=2, ns=2, n1=2, n2=2, n3=2) -> MbcChannel:
    """Fully random (noisy) degraded-satellite channel."""
    rng = np.random.default_rng(seed)
    x, s = Alphabet("X", nx), Alphabet("S", ns)
    y1 = Alphabet("Y1", n1)
    return MbcChannel(
        random_pmf(rng, (s,)),
        random_kernel(rng, (x, s), (y1, Alphabet("Y3", n3))),
        random_kernel(rng, (y1,), (Alphabet("Y2", n2),)),
    )


def rand_ln(seed, nx=2, ns=2, ny=2) -> LessNoisyChannel:
    """Physically degraded draw, so the declared order Y1 >= Y2 >= Y3 holds."""
    rng = np.random.default_rng(seed)
    x, s = Alphabet("X", nx), Alphabet("S", ns)
    p1 = rng.dirichlet(np.ones(ny), size=(nx, ns))
    q2 = rng.dirichlet(np.ones(ny), size=ny)
    q3 = rng.dirichlet(np.ones(ny), size=ny)
    main = np.einsum("xsa,ab,bc->xsabc", p1, q2, q3)
    return LessNoisyChannel(
        random_pmf(rng, (s,)),
        CondKernel(
            (x, s),
            (Alphabet("Y1", ny), Alphabet("Y2", ny), Alphabet("Y3", ny)),
            main,
        ),
    )


def det_ln() -> LessNoisyChannel:
    """All three outputs deterministic: y1 = x XOR s, y2 = x, y3 = x AND s."""
    main = np.zeros((2, 2, 2, 2, 2))
    for x in range(2):
        for s in range(2):
            main[x, s, x ^ s, x, x & s] = 1.0
    return LessNoisyChannel(
        FinitePmf((S2,), np.array([0.7, 0.3])),
        CondKernel((X2, S2), (Y1A, Y2A, Y3A), main),
    )
