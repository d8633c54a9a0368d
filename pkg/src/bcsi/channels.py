"""Channel models and checkers for their structural hypotheses.

Two containers: MbcChannel (state pmf, main kernel (X,S)->(Y1,Y3), and a
degrading kernel Y1->Y2) and LessNoisyChannel (state pmf, main kernel
(X,S)->(Y1,Y2,Y3) with a declared less-noisy ordering).  Constructors store
whatever they are given; `validate` is the single gate that turns a channel
into trusted data, so malformed tables are reportable instead of fatal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np
from scipy.optimize import linprog

from .prob import (
    Alphabet,
    CondKernel,
    FinitePmf,
    LabelError,
    SIMPLEX_TOL,
    compose_joint,
    mutual_information,
    random_kernel,
)

DEGRADED_TOL = 1e-7
LESS_NOISY_GAP = 1e-9
DET_TOL = 1e-9

RECEIVERS = ("Y1", "Y2", "Y3")


class ChannelFormatError(ValueError):
    """A channel document failed validation; carries the violation list."""

    def __init__(self, violations: Sequence[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


def _unchecked_pmf(alphabets, probs) -> FinitePmf:
    p = object.__new__(FinitePmf)
    arr = np.asarray(probs, dtype=np.float64).reshape(tuple(a.size for a in alphabets))
    arr = arr.copy()
    arr.flags.writeable = False
    object.__setattr__(p, "alphabets", tuple(alphabets))
    object.__setattr__(p, "probs", arr)
    return p


def _unchecked_kernel(given, to, probs) -> CondKernel:
    k = object.__new__(CondKernel)
    shape = tuple(a.size for a in given) + tuple(a.size for a in to)
    arr = np.asarray(probs, dtype=np.float64).reshape(shape).copy()
    arr.flags.writeable = False
    object.__setattr__(k, "given", tuple(given))
    object.__setattr__(k, "to", tuple(to))
    object.__setattr__(k, "probs", arr)
    return k


@dataclass(frozen=True)
class MbcChannel:
    """Degraded-satellite model: state S, main (X,S)->(Y1,Y3), Y2 from Y1."""

    state: FinitePmf
    main: CondKernel
    degrading: CondKernel


@dataclass(frozen=True)
class LessNoisyChannel:
    """General three-output model with a declared ordering Y1 >= Y2 >= Y3."""

    state: FinitePmf
    main: CondKernel
    declared_order: tuple[str, str, str] = ("Y1", "Y2", "Y3")


Channel = Union[MbcChannel, LessNoisyChannel]


@dataclass(frozen=True)
class DetFunctionTable:
    """A receiver that is a function of (x, s): table[x, s] = output symbol."""

    variable: str
    table: np.ndarray


@dataclass(frozen=True)
class Degraded:
    witness: CondKernel  # (Y, S) -> Z


@dataclass(frozen=True)
class NotDegraded:
    x: int
    s: int
    residual: float


@dataclass(frozen=True)
class Counterexample:
    pU_given_S: CondKernel
    pX_given_US: CondKernel
    state: int
    gap: float


@dataclass(frozen=True)
class ConsistentAfter:
    samples: int
    skipped_states: tuple[int, ...] = ()


def _check_pmf(violations, name, pmf, want_labels=None):
    arr = np.asarray(pmf.probs, dtype=np.float64)
    if want_labels is not None and pmf.labels != tuple(want_labels):
        violations.append(f"{name}: labels {pmf.labels} != {tuple(want_labels)}")
        return
    lo = float(arr.min(initial=0.0))
    if lo < -SIMPLEX_TOL:
        violations.append(f"{name}: negative entry {lo:.3e}")
    dev = abs(float(arr.sum()) - 1.0)
    if dev > SIMPLEX_TOL:
        violations.append(f"{name}: total probability off by {dev:.3e}")


def _check_kernel(violations, name, k, want_given=None, want_to=None):
    if want_given is not None and k.given_labels != tuple(want_given):
        violations.append(f"{name}: conditioning labels {k.given_labels} != {tuple(want_given)}")
        return
    if want_to is not None and k.to_labels != tuple(want_to):
        violations.append(f"{name}: output labels {k.to_labels} != {tuple(want_to)}")
        return
    arr = np.asarray(k.probs, dtype=np.float64)
    lo = float(arr.min(initial=0.0))
    if lo < -SIMPLEX_TOL:
        violations.append(f"{name}: negative entry {lo:.3e}")
    sums = arr.sum(axis=tuple(range(len(k.given), arr.ndim)))
    dev = float(np.abs(sums - 1.0).max()) if sums.size else 0.0
    if dev > SIMPLEX_TOL:
        violations.append(f"{name}: worst row sum off by {dev:.3e}")


def validate(channel: Channel) -> list[str]:
    """All invariant violations of the channel, empty iff well formed."""
    v: list[str] = []
    _check_pmf(v, "state", channel.state, ("S",))
    if isinstance(channel, MbcChannel):
        _check_kernel(v, "main", channel.main, ("X", "S"), ("Y1", "Y3"))
        _check_kernel(v, "degrading", channel.degrading, ("Y1",), ("Y2",))
        if not any(s.startswith(("main:", "degrading:")) and "labels" in s for s in v):
            ny1_main = channel.main.to[0].size
            ny1_deg = channel.degrading.given[0].size
            if ny1_main != ny1_deg:
                v.append(f"degrading: Y1 alphabet size {ny1_deg} != main's {ny1_main}")
    elif isinstance(channel, LessNoisyChannel):
        _check_kernel(v, "main", channel.main, ("X", "S"), ("Y1", "Y2", "Y3"))
        if tuple(sorted(channel.declared_order)) != ("Y1", "Y2", "Y3"):
            v.append(f"declared_order: {channel.declared_order} is not a permutation of Y1,Y2,Y3")
    else:
        v.append(f"unknown channel type {type(channel).__name__}")
        return v
    if not any(s.startswith(("state:", "main:")) and "labels" in s for s in v):
        ns_state = channel.state.alphabets[0].size
        ns_main = channel.main.given[1].size
        if ns_state != ns_main:
            v.append(f"main: S alphabet size {ns_main} != state's {ns_state}")
    return v


def receiver_kernel(channel: Channel, receiver: str) -> CondKernel:
    """The marginal kernel (X,S) -> receiver, composing through any degrading."""
    if receiver not in RECEIVERS:
        raise LabelError(f"unknown receiver {receiver!r}; expected one of {RECEIVERS}")
    x, s = channel.main.given
    if isinstance(channel, LessNoisyChannel):
        axis = 2 + RECEIVERS.index(receiver)
        drop = tuple(i for i in (2, 3, 4) if i != axis)
        arr = channel.main.probs.sum(axis=drop)
        return CondKernel((x, s), (channel.main.to[RECEIVERS.index(receiver)],), arr)
    if receiver == "Y1":
        return CondKernel((x, s), (channel.main.to[0],), channel.main.probs.sum(axis=3))
    if receiver == "Y3":
        return CondKernel((x, s), (channel.main.to[1],), channel.main.probs.sum(axis=2))
    # Y2 = degrading applied to the Y1 marginal
    p_y1 = channel.main.probs.sum(axis=3)
    arr = np.einsum("xsa,ab->xsb", p_y1, channel.degrading.probs)
    return CondKernel((x, s), (channel.degrading.to[0],), arr)


def detect_deterministic(channel: Channel, receiver: str) -> DetFunctionTable | None:
    """The function table when every (x,s) row is within DET_TOL of a point mass."""
    k = receiver_kernel(channel, receiver)
    peaks = k.probs.max(axis=2)
    if peaks.min() >= 1.0 - DET_TOL:
        return DetFunctionTable(receiver, k.probs.argmax(axis=2))
    return None


def check_degraded(y_kernel: CondKernel, z_kernel: CondKernel):
    """Is Z a stochastically degraded version of Y, state by state?

    Solves, per s, min_t ||sum_y p(y|x,s) q(z|y) - p(z|x,s)||_inf over row-
    stochastic q; Degraded iff every state's optimum is <= DEGRADED_TOL.
    """
    if tuple(a.size for a in y_kernel.given) != tuple(a.size for a in z_kernel.given):
        raise LabelError("y and z kernels condition on different (X,S) alphabets")
    nx, ns = (a.size for a in y_kernel.given)
    ny = y_kernel.to[0].size
    nz = z_kernel.to[0].size
    witness = np.zeros((ny, ns, nz))
    worst = (-1.0, 0, 0)  # residual, x, s
    for s in range(ns):
        py = y_kernel.probs[:, s, :]  # (nx, ny)
        pz = z_kernel.probs[:, s, :]  # (nx, nz)
        nvar = ny * nz + 1
        c = np.zeros(nvar)
        c[-1] = 1.0
        # |(py q)[x,z] - pz[x,z]| <= t, two inequality rows per (x,z)
        rows = []
        rhs = []
        for x in range(nx):
            for z in range(nz):
                r = np.zeros(nvar)
                r[z::nz][:ny] = py[x]
                r[-1] = -1.0
                rows.append(r.copy())
                rhs.append(pz[x, z])
                r[:-1] *= -1.0
                rows.append(r)
                rhs.append(-pz[x, z])
        a_eq = np.zeros((ny, nvar))
        for y in range(ny):
            a_eq[y, y * nz : (y + 1) * nz] = 1.0
        res = linprog(
            c,
            A_ub=np.array(rows),
            b_ub=np.array(rhs),
            A_eq=a_eq,
            b_eq=np.ones(ny),
            bounds=[(0, None)] * (ny * nz) + [(0, None)],
            method="highs",
        )
        if not res.success:  # pragma: no cover - tiny LPs never fail structurally
            raise RuntimeError(f"feasibility solve failed for state {s}: {res.message}")
        t = float(res.fun)
        if t > worst[0]:
            q = res.x[: ny * nz].reshape(ny, nz)
            resid = np.abs(py @ q - pz)
            x_bad, z_bad = np.unravel_index(int(resid.argmax()), resid.shape)
            worst = (t, int(x_bad), s)
        witness[:, s, :] = res.x[: ny * nz].reshape(ny, nz)
    if worst[0] <= DEGRADED_TOL:
        # renormalize LP roundoff so the witness is a clean kernel
        wit = np.clip(witness, 0.0, None)
        wit /= wit.sum(axis=2, keepdims=True)
        s_alpha = Alphabet("S", ns)
        return Degraded(CondKernel((y_kernel.to[0], s_alpha), (z_kernel.to[0],), wit))
    return NotDegraded(worst[1], worst[2], worst[0])


def falsify_less_noisy(
    channel: LessNoisyChannel,
    pair: tuple[str, str],
    samples: int,
    aux_card: int = 2,
    seed: int = 0,
):
    """Search random (p(u|s), p(x|u,s)) for a violation of I(U;Y|s) >= I(U;Z|s).

    Returns the first Counterexample exceeding the gap tolerance, else
    ConsistentAfter (which is evidence, not proof).  States of probability
    zero are skipped and listed in the result.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if aux_card < 2:
        raise ValueError("aux_card must be >= 2")
    y_label, z_label = pair
    ky = receiver_kernel(channel, y_label)
    kz = receiver_kernel(channel, z_label)
    x_alpha, s_alpha = channel.main.given
    u_alpha = Alphabet("U", aux_card)
    ns = s_alpha.size
    ps = channel.state.probs
    skipped = tuple(int(s) for s in range(ns) if ps[s] <= 0.0)
    live = [s for s in range(ns) if ps[s] > 0.0]
    for i in range(samples):
        rng = np.random.default_rng([seed, i])
        p_u = random_kernel(rng, (s_alpha,), (u_alpha,))
        p_xu = random_kernel(rng, (u_alpha, s_alpha), (x_alpha,))
        for s in live:
            # per-state joint over (U, X, Y, Z)
            q = np.einsum(
                "u,ux,xy,xz->uxyz",
                p_u.probs[s],
                p_xu.probs[:, s, :],
                ky.probs[:, s, :],
                kz.probs[:, s, :],
            )
            j = FinitePmf(
                (u_alpha, x_alpha, Alphabet("Y", ky.to[0].size), Alphabet("Z", kz.to[0].size)),
                q,
            )
            gap = mutual_information(j, "U", "Z") - mutual_information(j, "U", "Y")
            if gap > LESS_NOISY_GAP:
                return Counterexample(p_u, p_xu, s, float(gap))
    return ConsistentAfter(samples, skipped)


def augment_receivers(channel: Channel, receivers: Sequence[str] = RECEIVERS) -> Channel:
    """Give the chosen receivers their own copy of the state: Yk -> (Yk, S).

    Output alphabets become product alphabets indexed yk*|S| + s; labels are
    kept so the result is a drop-in channel of the same type.
    """
    chosen = tuple(receivers)
    bad = [r for r in chosen if r not in RECEIVERS]
    if bad:
        raise LabelError(f"unknown receivers {bad}")
    x_alpha, s_alpha = channel.main.given
    ns = s_alpha.size

    def out_alpha(a: Alphabet) -> Alphabet:
        return Alphabet(a.label, a.size * ns) if a.label in chosen else a

    if isinstance(channel, LessNoisyChannel):
        n1, n2, n3 = (a.size for a in channel.main.to)
        src = channel.main.probs
        new = np.zeros(
            (x_alpha.size, ns) + tuple(out_alpha(a).size for a in channel.main.to)
        )
        for s in range(ns):
            i1 = slice(None) if "Y1" not in chosen else slice(s, n1 * ns, ns)
            i2 = slice(None) if "Y2" not in chosen else slice(s, n2 * ns, ns)
            i3 = slice(None) if "Y3" not in chosen else slice(s, n3 * ns, ns)
            new[:, s, i1, i2, i3] = src[:, s]
        kern = CondKernel((x_alpha, s_alpha), tuple(out_alpha(a) for a in channel.main.to), new)
        return LessNoisyChannel(channel.state, kern, channel.declared_order)

    if "Y2" in chosen and "Y1" not in chosen:
        raise LabelError("cannot augment Y2 without Y1: Y2's kernel would need S")
    n1, n3 = (a.size for a in channel.main.to)
    src = channel.main.probs
    new = np.zeros((x_alpha.size, ns) + tuple(out_alpha(a).size for a in channel.main.to))
    for s in range(ns):
        i1 = slice(None) if "Y1" not in chosen else slice(s, n1 * ns, ns)
        i3 = slice(None) if "Y3" not in chosen else slice(s, n3 * ns, ns)
        new[:, s, i1, i3] = src[:, s]
    main = CondKernel((x_alpha, s_alpha), tuple(out_alpha(a) for a in channel.main.to), new)
    deg_src = channel.degrading.probs
    n2 = channel.degrading.to[0].size
    y1_new = out_alpha(channel.main.to[0])
    y2_new = out_alpha(channel.degrading.to[0])
    if "Y1" in chosen and "Y2" in chosen:
        deg = np.zeros((n1 * ns, n2 * ns))
        for s in range(ns):
            deg[s::ns, s::ns] = deg_src
    elif "Y1" in chosen:
        deg = deg_src[np.repeat(np.arange(n1), ns)]  # row (y1,s) keeps y1's law
    else:
        deg = deg_src
    degrading = CondKernel((y1_new,), (y2_new,), deg)
    return MbcChannel(channel.state, main, degrading)


# -- channel document I/O ----------------------------------------------------

_ALPHABET_KEYS = ("X", "S", "Y1", "Y2", "Y3")


def load_channel(source) -> Channel:
    """Parse a channel JSON document (path, JSON text, or dict) and validate it."""
    if isinstance(source, (str, Path)) and not (isinstance(source, str) and source.lstrip().startswith("{")):
        with open(source) as fh:
            doc = json.load(fh)
    elif isinstance(source, str):
        doc = json.loads(source)
    else:
        doc = source
    problems: list[str] = []
    model = doc.get("model")
    if model not in ("mbc", "lessnoisy"):
        raise ChannelFormatError([f"model: expected 'mbc' or 'lessnoisy', got {model!r}"])
    sizes = doc.get("alphabets", {})
    for key in _ALPHABET_KEYS:
        n = sizes.get(key)
        if not isinstance(n, int) or n < 1:
            problems.append(f"alphabets.{key}: need a positive integer size, got {n!r}")
    if problems:
        raise ChannelFormatError(problems)
    ax = {key: Alphabet(key, sizes[key]) for key in _ALPHABET_KEYS}
    try:
        state = _unchecked_pmf((ax["S"],), doc["state"])
        if model == "mbc":
            main = _unchecked_kernel((ax["X"], ax["S"]), (ax["Y1"], ax["Y3"]), doc["main"])
            degrading = _unchecked_kernel((ax["Y1"],), (ax["Y2"],), doc["degrading"])
            channel: Channel = MbcChannel(state, main, degrading)
        else:
            main = _unchecked_kernel((ax["X"], ax["S"]), (ax["Y1"], ax["Y2"], ax["Y3"]), doc["main"])
            channel = LessNoisyChannel(state, main)
    except KeyError as exc:
        raise ChannelFormatError([f"missing field {exc.args[0]!r}"]) from exc
    except (ValueError, TypeError) as exc:
        raise ChannelFormatError([f"table shape: {exc}"]) from exc
    violations = validate(channel)
    if violations:
        raise ChannelFormatError(violations)
    return channel


def channel_to_dict(channel: Channel) -> dict:
    """The JSON-ready document for a channel (inverse of load_channel)."""
    sizes = {
        "X": channel.main.given[0].size,
        "S": channel.main.given[1].size,
    }
    if isinstance(channel, MbcChannel):
        sizes["Y1"] = channel.main.to[0].size
        sizes["Y3"] = channel.main.to[1].size
        sizes["Y2"] = channel.degrading.to[0].size
        return {
            "model": "mbc",
            "alphabets": sizes,
            "state": channel.state.probs.tolist(),
            "main": channel.main.probs.tolist(),
            "degrading": channel.degrading.probs.tolist(),
        }
    for a in channel.main.to:
        sizes[a.label] = a.size
    return {
        "model": "lessnoisy",
        "alphabets": sizes,
        "state": channel.state.probs.tolist(),
        "main": channel.main.probs.tolist(),
    }
