"""Finite-alphabet probability tables and information measures.

Dense numpy tables indexed row-major by an ordered list of labeled
alphabets.  Everything is in nats; 0*ln(0) is taken as 0 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# simplex membership tolerance for pmfs and kernel rows
SIMPLEX_TOL = 1e-9
# tolerance for information identities (chain rules, Markov residuals)
INFO_TOL = 1e-10
# magnitude below which a negative information value is a rounding artifact
_CLAMP = 1e-12


class LabelError(ValueError):
    """A variable label is unknown or a label group is ill-formed."""


class CompositionError(ValueError):
    """A kernel conditions on a variable that no earlier factor produces."""


@dataclass(frozen=True)
class Alphabet:
    """A finite alphabet with a short variable label such as "U" or "Y1"."""

    label: str
    size: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"alphabet {self.label!r} must have size >= 1, got {self.size}")


def _as_group(labels) -> tuple[str, ...]:
    if isinstance(labels, str):
        return (labels,)
    return tuple(labels)


class FinitePmf:
    """A joint pmf over an ordered tuple of alphabets.

    probs is a dense float64 array of shape (|A1|, ..., |Ak|); entries are
    nonnegative and sum to 1 within SIMPLEX_TOL.
    """

    __slots__ = ("alphabets", "probs")

    def __init__(self, alphabets: Sequence[Alphabet], probs) -> None:
        alphabets = tuple(alphabets)
        labels = [a.label for a in alphabets]
        if len(set(labels)) != len(labels):
            raise LabelError(f"duplicate labels in {labels}")
        shape = tuple(a.size for a in alphabets)
        arr = np.asarray(probs, dtype=np.float64).reshape(shape)
        if arr.min(initial=0.0) < -SIMPLEX_TOL:
            raise ValueError(f"negative probability {arr.min():.3e}")
        total = float(arr.sum())
        if abs(total - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"pmf sums to {total!r}, not 1")
        arr = np.clip(arr, 0.0, None)
        arr.flags.writeable = False
        super().__setattr__("alphabets", alphabets)
        super().__setattr__("probs", arr)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("FinitePmf is immutable")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.alphabets)

    def axes_of(self, labels) -> tuple[int, ...]:
        group = _as_group(labels)
        index = {a.label: i for i, a in enumerate(self.alphabets)}
        missing = [g for g in group if g not in index]
        if missing:
            raise LabelError(f"unknown labels {missing}; have {list(index)}")
        if len(set(group)) != len(group):
            raise LabelError(f"repeated labels in group {group}")
        return tuple(index[g] for g in group)

    def marginal(self, labels) -> "FinitePmf":
        """Marginal pmf over the given labels, in this pmf's variable order."""
        keep = set(self.axes_of(labels))
        drop = tuple(i for i in range(len(self.alphabets)) if i not in keep)
        arr = self.probs.sum(axis=drop) if drop else self.probs
        alphas = tuple(a for i, a in enumerate(self.alphabets) if i in keep)
        return FinitePmf(alphas, arr)

    def conditional(self, target, given) -> "CondKernel":
        """The kernel p(target | given), axes ordered (given..., target...).

        Rows whose conditioning event has zero probability are set uniform,
        so the result is always a valid kernel.
        """
        tgt = _as_group(target)
        giv = _as_group(given)
        if set(tgt) & set(giv):
            raise LabelError(f"target {tgt} and given {giv} overlap")
        m = self.marginal(giv + tgt)
        # reorder marginal axes to (given..., target...)
        order = [m.labels.index(g) for g in giv + tgt]
        arr = np.transpose(m.probs, order)
        ng = len(giv)
        denom = arr.sum(axis=tuple(range(ng, arr.ndim)), keepdims=True)
        out_cells = int(np.prod(arr.shape[ng:])) or 1
        with np.errstate(divide="ignore", invalid="ignore"):
            cond = np.where(denom > 0.0, arr / np.where(denom > 0.0, denom, 1.0), 1.0 / out_cells)
        by_label = {a.label: a for a in self.alphabets}
        return CondKernel([by_label[g] for g in giv], [by_label[t] for t in tgt], cond)


class CondKernel:
    """A conditional kernel p(to | given) as a dense table.

    probs has shape (given sizes..., to sizes...); every conditioning row is
    a pmf over the `to` alphabets within SIMPLEX_TOL.
    """

    __slots__ = ("given", "to", "probs")

    def __init__(self, given: Sequence[Alphabet], to: Sequence[Alphabet], probs) -> None:
        given = tuple(given)
        to = tuple(to)
        if not to:
            raise ValueError("kernel needs at least one output alphabet")
        labels = [a.label for a in given + to]
        if len(set(labels)) != len(labels):
            raise LabelError(f"duplicate labels in kernel {labels}")
        shape = tuple(a.size for a in given) + tuple(a.size for a in to)
        arr = np.asarray(probs, dtype=np.float64).reshape(shape)
        if arr.min(initial=0.0) < -SIMPLEX_TOL:
            raise ValueError(f"negative kernel entry {arr.min():.3e}")
        row_sums = arr.sum(axis=tuple(range(len(given), arr.ndim)))
        worst = float(np.abs(row_sums - 1.0).max()) if row_sums.size else 0.0
        if worst > SIMPLEX_TOL:
            raise ValueError(f"kernel row sums deviate from 1 by {worst:.3e}")
        arr = np.clip(arr, 0.0, None)
        arr.flags.writeable = False
        super().__setattr__("given", given)
        super().__setattr__("to", to)
        super().__setattr__("probs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("CondKernel is immutable")

    @property
    def given_labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.given)

    @property
    def to_labels(self) -> tuple[str, ...]:
        return tuple(a.label for a in self.to)


def _masked_xlogx_sum(q: np.ndarray) -> float:
    pos = q[q > 0.0]
    return float(-(pos * np.log(pos)).sum())


def entropy(p: FinitePmf, subset=None) -> float:
    """H of the marginal on `subset` (all variables when None), in nats."""
    if subset is None:
        q = p.probs
    else:
        q = p.marginal(subset).probs
    h = _masked_xlogx_sum(np.ravel(q))
    return 0.0 if -_CLAMP <= h < 0.0 else h


def _check_disjoint(*groups: tuple[str, ...]) -> None:
    seen: set[str] = set()
    for g in groups:
        overlap = seen & set(g)
        if overlap:
            raise LabelError(f"label groups overlap on {sorted(overlap)}")
        seen |= set(g)


def mutual_information(p: FinitePmf, group_a, group_b) -> float:
    """I(A;B) = H(A) + H(B) - H(A,B), tiny negatives clamped to 0."""
    a = _as_group(group_a)
    b = _as_group(group_b)
    _check_disjoint(a, b)
    v = entropy(p, a) + entropy(p, b) - entropy(p, a + b)
    return 0.0 if -_CLAMP <= v < 0.0 else v


def conditional_mutual_information(p: FinitePmf, group_a, group_b, group_c) -> float:
    """I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C).

    An empty conditioning group reduces to mutual_information.
    """
    a = _as_group(group_a)
    b = _as_group(group_b)
    c = _as_group(group_c) if group_c else ()
    _check_disjoint(a, b, c)
    v = entropy(p, a + c) + entropy(p, b + c) - entropy(p, a + b + c) - (entropy(p, c) if c else 0.0)
    return 0.0 if -_CLAMP <= v < 0.0 else v


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def compose_joint(factors: Iterable[CondKernel], root: FinitePmf) -> FinitePmf:
    """Chain the root pmf with conditional kernels into the full joint.

    Each factor may condition only on variables produced by the root or an
    earlier factor; its outputs are appended to the variable order.
    """
    alphas = list(root.alphabets)
    table = root.probs
    for k in factors:
        have = {a.label: i for i, a in enumerate(alphas)}
        dangling = [a.label for a in k.given if a.label not in have]
        if dangling:
            raise CompositionError(f"kernel {k.given_labels}->{k.to_labels} conditions on absent {dangling}")
        clash = [a.label for a in k.to if a.label in have]
        if clash:
            raise CompositionError(f"kernel output {clash} already present in joint")
        for a in k.given:
            if alphas[have[a.label]].size != a.size:
                raise CompositionError(f"alphabet size mismatch on {a.label!r}")
        if len(alphas) + len(k.to) > len(_LETTERS):
            raise CompositionError("too many variables to compose")
        cur = _LETTERS[: len(alphas)]
        out = _LETTERS[len(alphas) : len(alphas) + len(k.to)]
        ker_sub = "".join(cur[have[a.label]] for a in k.given) + out
        table = np.einsum(f"{cur},{ker_sub}->{cur}{out}", table, k.probs)
        alphas.extend(k.to)
    return FinitePmf(alphas, table)


def random_pmf(rng: np.random.Generator, alphabets: Sequence[Alphabet]) -> FinitePmf:
    """Flat-Dirichlet random joint pmf over the given alphabets."""
    shape = tuple(a.size for a in alphabets)
    g = rng.standard_exponential(shape)
    return FinitePmf(alphabets, g / g.sum())


def random_kernel(rng: np.random.Generator, given: Sequence[Alphabet], to: Sequence[Alphabet]) -> CondKernel:
    """Kernel with each conditioning row drawn flat-Dirichlet."""
    gshape = tuple(a.size for a in given)
    tshape = tuple(a.size for a in to)
    g = rng.standard_exponential(gshape + tshape)
    axes = tuple(range(len(gshape), len(gshape) + len(tshape)))
    return CondKernel(given, to, g / g.sum(axis=axes, keepdims=True))
