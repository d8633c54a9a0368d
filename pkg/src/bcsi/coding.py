"""Monte Carlo validation of the layered binning scheme at small blocklengths.

Codebooks follow the constructive proof: an outer message layer carried by u,
a satellite layer v superposed on u, and the channel input x superposed on v,
each Gelfand-Pinsker binned against the state.  Decoding is exhaustive weak
typicality.  Per-candidate scores are computed from symbol-count vectors, so
a trial costs a handful of numpy calls regardless of codebook size.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import ceil, exp
from typing import Mapping

import numpy as np

from .prob import FinitePmf
from .channels import MbcChannel
from .regions import AuxScheme, mbc_joint

SIZE_CAP = 2**20


class SizeCapError(RuntimeError):
    """A codebook or candidate space exceeds the configured cap."""

    def __init__(self, what: str, required: int, cap: int):
        super().__init__(f"{what} needs {required} entries, cap is {cap}")
        self.required = required
        self.cap = cap


@dataclass(frozen=True)
class SimConfig:
    """Blocklength, rate point (nats/symbol), bin rates, and trial plan."""

    n: int
    r0: float
    r11: float
    r12: float
    bin0: float = 0.0
    bin11: float = 0.0
    bin12: float = 0.0
    epsilon: float = 0.1
    trials: int = 1000
    seed: int = 0
    size_cap: int = SIZE_CAP

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        rates = (self.r0, self.r11, self.r12, self.bin0, self.bin11, self.bin12)
        if any(r < 0 for r in rates):
            raise ValueError("rates must be nonnegative")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        counts = self.index_counts()
        for what, count in counts.items():
            if count > self.size_cap:
                raise SizeCapError(what, count, self.size_cap)
        total = 1
        for count in counts.values():
            total *= count
        if total > self.size_cap:
            raise SizeCapError("decoder candidate space", total, self.size_cap)

    @property
    def r1(self) -> float:
        return self.r11 + self.r12

    def index_counts(self) -> dict[str, int]:
        def c(r: float) -> int:
            return ceil(exp(self.n * r) - 1e-9)

        return {
            "M0": c(self.r0), "B0": c(self.bin0),
            "M11": c(self.r11), "B11": c(self.bin11),
            "M12": c(self.r12), "B12": c(self.bin12),
        }


@dataclass(frozen=True)
class Codebooks:
    """Layered books; axes are (bin, message) per layer, blocklength last."""

    u: np.ndarray  # (B0, M0, n)
    v: np.ndarray  # (B0, M0, B11, M11, n)
    x: np.ndarray  # (B0, M0, B11, M11, B12, M12, n)


@dataclass(frozen=True)
class TypicalityTest:
    epsilon: float
    joint: FinitePmf

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class Encoded:
    x: np.ndarray
    chosen: tuple[int, int, int]  # (m0', m11', m12')


@dataclass(frozen=True)
class EncodingFailure:
    layer: str  # "u", "v", or "x"


@dataclass(frozen=True)
class SimResult:
    e1: float
    e2: float
    e3: float
    enc_fail: float
    trials: int


def _axis(joint: FinitePmf, label: str) -> int:
    for i, a in enumerate(joint.alphabets):
        if a.label == label:
            return i
    raise ValueError(f"no variable {label!r} in the reference joint")


def is_typical(test: TypicalityTest, sequences: Mapping[str, np.ndarray]) -> bool:
    """Weak joint typicality of the named sequences against the reference.

    True iff for every nonempty subset A of the provided variables,
    |-(1/n) sum_i ln p_A(tuple_i) - H(A)| <= epsilon.
    """
    labels = [a.label for a in test.joint.alphabets if a.label in sequences]
    if set(sequences) - set(labels):
        raise ValueError(f"unknown labels {sorted(set(sequences) - set(labels))}")
    seqs = {}
    n = None
    for lbl in labels:
        arr = np.asarray(sequences[lbl])
        size = test.joint.alphabets[_axis(test.joint, lbl)].size
        if arr.ndim != 1 or (n is not None and arr.shape[0] != n):
            raise ValueError("sequences must be 1-D and of equal length")
        n = arr.shape[0]
        if arr.size and (arr.min() < 0 or arr.max() >= size):
            raise ValueError(f"symbol out of range for {lbl}")
        seqs[lbl] = arr
    for k in range(1, len(labels) + 1):
        for sub in combinations(labels, k):
            pm = test.joint.marginal(sub).probs
            vals = pm[tuple(seqs[l] for l in sub)]
            if np.any(vals <= 0.0):
                return False
            pos = pm[pm > 0]
            ent = -float((pos * np.log(pos)).sum())
            if abs(-float(np.log(vals).mean()) - ent) > test.epsilon:
                return False
    return True


# -- codebook generation ----------------------------------------------------------


def _draw(rng: np.random.Generator, cum_rows: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Inverse-CDF draw of one symbol per entry of the row-index array."""
    r = rng.random(rows.shape)
    return (r[..., None] < cum_rows[rows]).argmax(axis=-1)


def build_codebooks(channel: MbcChannel, scheme: AuxScheme, cfg: SimConfig) -> Codebooks:
    """Draw the three layered books i.i.d from the scheme's chain marginals."""
    rng = np.random.default_rng([cfg.seed, 0])
    c = cfg.index_counts()
    joint = mbc_joint(channel, scheme)
    for lbl in ("U", "V", "X"):
        if joint.alphabets[_axis(joint, lbl)].size > 127:
            raise ValueError(f"alphabet {lbl} too large for int8 codebook storage")
    pu = joint.marginal(("U",)).probs
    pvu = joint.conditional(("V",), ("U",)).probs
    pxv = joint.conditional(("X",), ("V",)).probs

    u = _draw(rng, np.cumsum(pu)[None, :], np.zeros((c["B0"], c["M0"], cfg.n), dtype=np.intp))
    u_wide = np.broadcast_to(
        u[:, :, None, None, :], (c["B0"], c["M0"], c["B11"], c["M11"], cfg.n)
    )
    v = _draw(rng, np.cumsum(pvu, axis=1), u_wide)
    v_wide = np.broadcast_to(
        v[..., None, None, :],
        (c["B0"], c["M0"], c["B11"], c["M11"], c["B12"], c["M12"], cfg.n),
    )
    x = _draw(rng, np.cumsum(pxv, axis=1), v_wide)
    return Codebooks(u.astype(np.int8), v.astype(np.int8), x.astype(np.int8))


# -- fast subset scoring ------------------------------------------------------------


def _entropy_of(pm: np.ndarray) -> float:
    pos = pm[pm > 0]
    return -float((pos * np.log(pos)).sum())


class _CellTables:
    """ln-prob lookup tables over a flattened candidate-cell grid.

    A cell index enumerates joint symbols of `cell_labels` row-major.  For a
    variable subset, table() gives the vector of ln-marginals over the
    (cell, extra) grid with cells outside the subset broadcast, so a
    candidate's empirical log-probability is counts @ table / n.  Zero
    probabilities get a large negative stand-in: one counted hit sinks the
    score far below any entropy window.
    """

    def __init__(self, joint: FinitePmf, cell_labels):
        self.joint = joint
        self.cell_labels = tuple(cell_labels)
        self.sizes = tuple(
            joint.alphabets[_axis(joint, l)].size for l in self.cell_labels
        )
        self.ncell = int(np.prod(self.sizes))

    def _table(self, sub, extra_label, nextra):
        labels = sub + ((extra_label,) if extra_label else ())
        pm = self.joint.marginal(labels).probs
        ent = _entropy_of(pm)
        joint_order = [a.label for a in self.joint.alphabets if a.label in labels]
        want = [l for l in self.cell_labels if l in sub] + (
            [extra_label] if extra_label else []
        )
        pm = np.transpose(pm, [joint_order.index(l) for l in want])
        shape = tuple(s if l in sub else 1 for l, s in zip(self.cell_labels, self.sizes))
        if extra_label:
            shape = shape + (nextra,)
        pm = np.broadcast_to(
            pm.reshape(shape), self.sizes + ((nextra,) if extra_label else ())
        )
        lnp = np.where(pm > 0, np.log(np.maximum(pm, 1e-300)), -1e30)
        return lnp.reshape(-1), ent

    def core(self):
        """Tables for every nonempty subset of the cell variables alone."""
        return [
            self._table(sub, None, 1)
            for r in range(1, len(self.cell_labels) + 1)
            for sub in combinations(self.cell_labels, r)
        ]

    def with_extra(self, extra_label: str, nextra: int):
        """Tables for every subset joined with the received variable."""
        return [
            self._table(sub, extra_label, nextra)
            for r in range(len(self.cell_labels) + 1)
            for sub in combinations(self.cell_labels, r)
        ]


class _CountScorer:
    """Per-candidate typicality masks from one bincount per received sequence."""

    def __init__(self, tables: _CellTables, core_tabs, cells: np.ndarray, eps: float):
        self.ncell = tables.ncell
        self.k, self.n = cells.shape
        self.cells = cells.astype(np.intp)
        self.eps = eps
        self.rows = np.arange(self.k, dtype=np.intp)[:, None]
        counts = np.bincount(
            (self.rows * self.ncell + self.cells).ravel(),
            minlength=self.k * self.ncell,
        ).reshape(self.k, self.ncell).astype(np.float64)
        core = np.ones(self.k, dtype=bool)
        for lnp, ent in core_tabs:
            core &= np.abs(-(counts @ lnp) / self.n - ent) <= eps
        self.core = core

    def mask_with(self, extra_tabs, extra_seq: np.ndarray, nextra: int) -> np.ndarray:
        """core AND every received-variable subset condition, per candidate."""
        flat = self.cells * nextra + extra_seq[None, :]
        counts = np.bincount(
            (self.rows * (self.ncell * nextra) + flat).ravel(),
            minlength=self.k * self.ncell * nextra,
        ).reshape(self.k, self.ncell * nextra).astype(np.float64)
        ok = self.core.copy()
        for lnp, ent in extra_tabs:
            ok &= np.abs(-(counts @ lnp) / self.n - ent) <= self.eps
        return ok


# -- encoding -----------------------------------------------------------------------


def _first_true(mask: np.ndarray) -> int:
    idx = int(np.argmax(mask))
    return idx if mask[idx] else -1


class _Encoder:
    """Per-layer bin search with the same count-vector scoring as decoding."""

    def __init__(self, books: Codebooks, test: TypicalityTest):
        self.books = books
        self.joint = test.joint
        self.eps = test.epsilon
        self.shape = books.x.shape[:6]
        self.sizes = {
            l: self.joint.alphabets[_axis(self.joint, l)].size
            for l in ("S", "U", "V", "X")
        }
        ns = self.sizes["S"]
        n = books.x.shape[-1]
        self.tabs = {}
        for labels in (("U",), ("U", "V"), ("U", "V", "X")):
            t = _CellTables(self.joint, labels)
            self.tabs[labels] = (t, t.core(), t.with_extra("S", ns))
        t, core, _ = self.tabs[("U",)]
        self.sc_u = _CountScorer(t, core, books.u.reshape(-1, n), self.eps)

    def encode_one(self, s: np.ndarray, m0: int, m11: int, m12: int):
        books, eps, ns = self.books, self.eps, self.sizes["S"]
        b0c, m0c = self.shape[:2]
        # u layer: scan the bin column for message m0
        rows = np.arange(b0c) * m0c + m0
        mask = self.sc_u.mask_with(self.tabs[("U",)][2], s, ns)[rows]
        m0p = _first_true(mask)
        if m0p < 0:
            return EncodingFailure("u")
        u = books.u[m0p, m0].astype(np.intp)
        # v layer, with u fixed
        vcands = books.v[m0p, m0, :, m11].astype(np.intp)  # (B11, n)
        t, core, extra = self.tabs[("U", "V")]
        sc = _CountScorer(t, core, u[None, :] * self.sizes["V"] + vcands, eps)
        m11p = _first_true(sc.mask_with(extra, s, ns))
        if m11p < 0:
            return EncodingFailure("v")
        v = vcands[m11p]
        # x layer
        xcands = books.x[m0p, m0, m11p, m11, :, m12].astype(np.intp)  # (B12, n)
        nv, nx = self.sizes["V"], self.sizes["X"]
        t, core, extra = self.tabs[("U", "V", "X")]
        sc = _CountScorer(t, core, (u[None, :] * nv + v[None, :]) * nx + xcands, eps)
        m12p = _first_true(sc.mask_with(extra, s, ns))
        if m12p < 0:
            return EncodingFailure("x")
        return Encoded(xcands[m12p], (m0p, m11p, m12p))


def encode(
    books: Codebooks,
    scheme: AuxScheme,
    state: np.ndarray,
    message: tuple[int, int, int],
    test: TypicalityTest,
):
    """Three-layer successive bin search; first typical index per layer.

    Returns Encoded(x, (m0', m11', m12')) or EncodingFailure naming the first
    layer without a typical candidate.
    """
    for lbl, kern in (("U", scheme.pU_given_S), ("V", scheme.pV_given_US),
                      ("X", scheme.pX_given_VS)):
        want = test.joint.alphabets[_axis(test.joint, lbl)].size
        if kern.to[0].size != want:
            raise ValueError(f"scheme {lbl} alphabet disagrees with the reference joint")
    state = np.asarray(state)
    m0, m11, m12 = message
    m0c = books.u.shape[1]
    m11c, m12c = books.v.shape[3], books.x.shape[5]
    if not (0 <= m0 < m0c and 0 <= m11 < m11c and 0 <= m12 < m12c):
        raise ValueError(f"message {message} outside codebook index range")
    return _Encoder(books, test).encode_one(state, m0, m11, m12)


# -- simulation -----------------------------------------------------------------------


def simulate(channel: MbcChannel, scheme: AuxScheme, cfg: SimConfig) -> SimResult:
    """Empirical per-receiver error rates of the full encode/transmit/decode
    chain; encoding failures are tallied separately and excluded from the
    decoding denominators.
    """
    books = build_codebooks(channel, scheme, cfg)
    joint = mbc_joint(channel, scheme)
    test = TypicalityTest(cfg.epsilon, joint)
    enc = _Encoder(books, test)
    b0c, m0c, b11c, m11c, b12c, m12c = enc.shape
    n = cfg.n

    nv = joint.alphabets[_axis(joint, "V")].size
    nx = joint.alphabets[_axis(joint, "X")].size
    ns = joint.alphabets[_axis(joint, "S")].size
    n1 = joint.alphabets[_axis(joint, "Y1")].size
    n2 = joint.alphabets[_axis(joint, "Y2")].size
    n3 = joint.alphabets[_axis(joint, "Y3")].size

    # decoder scorers; receiver 1 filters on the (u, v) prefix first and only
    # expands x-candidates under surviving prefixes (prefix subset conditions
    # are a subset of the full ones, so the filter is exact)
    bu = books.u.astype(np.intp)
    bv = books.v.astype(np.intp)
    t, core, _ = enc.tabs[("U",)]
    d2 = _CountScorer(t, core, bu.reshape(-1, n), cfg.epsilon)
    tab2 = t.with_extra("Y2", n2)
    uv = (bu[:, :, None, None, :] * nv + bv).reshape(-1, n)
    tuv, core_uv, _ = enc.tabs[("U", "V")]
    d3 = _CountScorer(tuv, core_uv, uv, cfg.epsilon)
    tab3 = tuv.with_extra("Y3", n3)
    d1pre = _CountScorer(tuv, core_uv, uv, cfg.epsilon)
    tab1pre = tuv.with_extra("Y1", n1)
    tuvx, core_uvx, _ = enc.tabs[("U", "V", "X")]
    tab1 = tuvx.with_extra("Y1", n1)
    xflat = books.x.reshape(b0c * m0c * b11c * m11c, b12c * m12c, n).astype(np.intp)

    # message labels per candidate row, for unique-decoding checks
    grid = np.indices((b0c, m0c))
    m0_of_u = grid[1].reshape(-1)
    grid = np.indices((b0c, m0c, b11c, m11c))
    m0_of_uv = grid[1].reshape(-1)
    m11_of_uv = grid[3].reshape(-1)
    grid = np.indices((b12c, m12c))
    m12_of_x = grid[1].reshape(-1)

    def decode1(y1: np.ndarray, prefix_hits: np.ndarray) -> np.ndarray:
        """Unique messages among typical (u, v, x, y1) rows, as packed ids."""
        rows = np.flatnonzero(prefix_hits)
        if rows.size == 0:
            return rows
        cells = (uv[rows][:, None, :] * nx + xflat[rows]).reshape(-1, n)
        sc = _CountScorer(tuvx, core_uvx, cells, cfg.epsilon)
        hits = sc.mask_with(tab1, y1, n1)
        msg = (
            (m0_of_uv[rows][:, None] * m11c + m11_of_uv[rows][:, None]) * m12c
            + m12_of_x[None, :]
        ).reshape(-1)
        return np.unique(msg[hits])

    ps = channel.state.probs
    cum_s = np.cumsum(ps)[None, :]
    pmain = channel.main.probs.reshape(nx, ns, n1 * n3)
    cum_main = np.cumsum(pmain, axis=-1)
    cum_deg = np.cumsum(channel.degrading.probs, axis=-1)

    e1 = e2 = e3 = enc_fail = 0
    decoded_trials = 0
    for trial in range(cfg.trials):
        rng = np.random.default_rng([cfg.seed, 1, trial])
        s = _draw(rng, cum_s, np.zeros(n, dtype=np.intp))
        m0 = int(rng.integers(m0c))
        m11 = int(rng.integers(m11c))
        m12 = int(rng.integers(m12c))
        res = enc.encode_one(s, m0, m11, m12)
        if isinstance(res, EncodingFailure):
            enc_fail += 1
            continue
        decoded_trials += 1
        y13 = _draw(rng, cum_main.reshape(nx * ns, -1), res.x.astype(np.intp) * ns + s)
        y1, y3 = y13 // n3, y13 % n3
        y2 = _draw(rng, cum_deg, y1)

        hits = d2.mask_with(tab2, y2, n2)
        got = np.unique(m0_of_u[hits])
        if got.shape[0] != 1 or got[0] != m0:
            e2 += 1
        hits = d3.mask_with(tab3, y3, n3)
        got = np.unique(m0_of_uv[hits])
        if got.shape[0] != 1 or got[0] != m0:
            e3 += 1
        got = decode1(y1, d1pre.mask_with(tab1pre, y1, n1))
        want = (m0 * m11c + m11) * m12c + m12
        if got.shape[0] != 1 or got[0] != want:
            e1 += 1

    denom = max(decoded_trials, 1)
    return SimResult(
        e1 / denom, e2 / denom, e3 / denom, enc_fail / cfg.trials, cfg.trials
    )
