"""Achievable-rate regions and capacity special cases.

The two-message (common + private) region for the degraded-satellite model
and the three-message region for the general model, each per fixed auxiliary
scheme, plus randomized search over schemes and the deterministic-channel
capacity formulas.  Bound evaluators accept label groups so a substitution
like U := (Y2, S) can be checked mechanically against the closed forms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .prob import (
    Alphabet,
    CondKernel,
    FinitePmf,
    LabelError,
    compose_joint,
    random_kernel,
)
from .channels import (
    Channel,
    LessNoisyChannel,
    MbcChannel,
    detect_deterministic,
)
from .polytopes import (
    dedupe_points,
    hull2,
    hull_distance,
    pareto_corners,
    polygon_area,
    vertices_of_halfplanes,
)

VERTEX_TOL = 1e-9


class DeterminismError(RuntimeError):
    """A capacity variant needs a deterministic receiver that is not."""

    def __init__(self, receiver: str):
        super().__init__(f"receiver {receiver} is not deterministic")
        self.receiver = receiver


class SchemeFormatError(ValueError):
    pass


# -- auxiliary schemes --------------------------------------------------------


@dataclass(frozen=True)
class AuxScheme:
    """The factored input law p(u|s) p(v|u,s) p(x|v,s)."""

    pU_given_S: CondKernel
    pV_given_US: CondKernel
    pX_given_VS: CondKernel

    def __post_init__(self):
        want = [
            ("pU_given_S", self.pU_given_S, ("S",), ("U",)),
            ("pV_given_US", self.pV_given_US, ("U", "S"), ("V",)),
            ("pX_given_VS", self.pX_given_VS, ("V", "S"), ("X",)),
        ]
        for name, k, giv, to in want:
            if k.given_labels != giv or k.to_labels != to:
                raise LabelError(
                    f"{name}: labels {k.given_labels}->{k.to_labels} != {giv}->{to}"
                )


def random_scheme(rng: np.random.Generator, channel: Channel, cards=(None, None)) -> AuxScheme:
    """Flat-Dirichlet scheme; auxiliary sizes default to |X|*|S|."""
    x_alpha, s_alpha = channel.main.given
    default = x_alpha.size * s_alpha.size
    u = Alphabet("U", cards[0] or default)
    v = Alphabet("V", cards[1] or default)
    return AuxScheme(
        random_kernel(rng, (s_alpha,), (u,)),
        random_kernel(rng, (u, s_alpha), (v,)),
        random_kernel(rng, (v, s_alpha), (x_alpha,)),
    )


def load_scheme(source, channel: Channel) -> AuxScheme:
    """Parse a scheme JSON document against a channel's X,S alphabets."""
    if isinstance(source, (str, Path)) and not (
        isinstance(source, str) and source.lstrip().startswith("{")
    ):
        with open(source) as fh:
            doc = json.load(fh)
    elif isinstance(source, str):
        doc = json.loads(source)
    else:
        doc = source
    try:
        pu = np.asarray(doc["pU_given_S"], dtype=np.float64)
        pv = np.asarray(doc["pV_given_US"], dtype=np.float64)
        px = np.asarray(doc["pX_given_VS"], dtype=np.float64)
    except KeyError as exc:
        raise SchemeFormatError(f"missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise SchemeFormatError(f"non-numeric table: {exc}") from exc
    x_alpha, s_alpha = channel.main.given
    ns = s_alpha.size
    if pu.ndim != 2 or pu.shape[0] != ns:
        raise SchemeFormatError(f"pU_given_S: want shape ({ns}, |U|), got {pu.shape}")
    nu = pu.shape[1]
    if pv.ndim != 3 or pv.shape[:2] != (nu, ns):
        raise SchemeFormatError(f"pV_given_US: want shape ({nu}, {ns}, |V|), got {pv.shape}")
    nv = pv.shape[2]
    if px.ndim != 3 or px.shape != (nv, ns, x_alpha.size):
        raise SchemeFormatError(
            f"pX_given_VS: want shape ({nv}, {ns}, {x_alpha.size}), got {px.shape}"
        )
    u, v = Alphabet("U", nu), Alphabet("V", nv)
    try:
        return AuxScheme(
            CondKernel((s_alpha,), (u,), pu),
            CondKernel((u, s_alpha), (v,), pv),
            CondKernel((v, s_alpha), (x_alpha,), px),
        )
    except ValueError as exc:
        raise SchemeFormatError(str(exc)) from exc


def scheme_to_dict(scheme: AuxScheme) -> dict:
    return {
        "pU_given_S": scheme.pU_given_S.probs.tolist(),
        "pV_given_US": scheme.pV_given_US.probs.tolist(),
        "pX_given_VS": scheme.pX_given_VS.probs.tolist(),
    }


# -- joints and group-based bound evaluation ----------------------------------


def mbc_joint(channel: MbcChannel, scheme: AuxScheme) -> FinitePmf:
    """The composed joint over (S,U,V,X,Y1,Y3,Y2)."""
    return compose_joint(
        [scheme.pU_given_S, scheme.pV_given_US, scheme.pX_given_VS,
         channel.main, channel.degrading],
        channel.state,
    )


def ln_joint(channel: LessNoisyChannel, scheme: AuxScheme) -> FinitePmf:
    """The composed joint over (S,U,V,X,Y1,Y2,Y3)."""
    return compose_joint(
        [scheme.pU_given_S, scheme.pV_given_US, scheme.pX_given_VS, channel.main],
        channel.state,
    )


def _group(g) -> tuple[str, ...]:
    return (g,) if isinstance(g, str) else tuple(g)


def _union(*groups):
    out = []
    for g in groups:
        for lbl in g:
            if lbl not in out:
                out.append(lbl)
    return tuple(out)


class _Ent:
    """Entropy-of-subset cache over one joint; tolerates overlapping groups."""

    def __init__(self, joint: FinitePmf):
        self.j = joint
        self.axes = {a.label: i for i, a in enumerate(joint.alphabets)}
        self.cache: dict[tuple[int, ...], float] = {}

    def h(self, *groups) -> float:
        labels = _union(*(_group(g) for g in groups))
        key = tuple(sorted(self.axes[l] for l in labels))
        if key not in self.cache:
            drop = tuple(i for i in range(self.j.probs.ndim) if i not in key)
            arr = self.j.probs.sum(axis=drop) if drop else self.j.probs
            pos = arr[arr > 0.0]
            self.cache[key] = float(-(pos * np.log(pos)).sum())
        return self.cache[key]

    def mi(self, a, b) -> float:
        return self.h(a) + self.h(b) - self.h(a, b)

    def cmi(self, a, b, c) -> float:
        return self.h(a, c) + self.h(b, c) - self.h(a, b, c) - self.h(c)

    def hc(self, a, c) -> float:
        return self.h(a, c) - self.h(c)


def eq5_bounds(joint: FinitePmf, u="U", v="V", x="X", s="S", y1="Y1", y2="Y2", y3="Y3"):
    """Raw (unclamped) two-message bounds at an assignment of label groups.

    Returns (common, private, total):
      common  = min{ I(U;Y2) - I(U;S), I(V;Y3) - I(UV;S) }
      private = I(X;Y1|U) - I(V;S|U) - I(X;S|V)
      total   = I(V;Y3) + I(X;Y1|V) - I(X;S|V) - I(UV;S)
    Groups may overlap (substitutions like U := Y2 are legal); overlapping
    terms follow the entropy arithmetic of the defining identities.
    """
    e = _Ent(joint)
    uv = _union(_group(u), _group(v))
    common = min(e.mi(u, y2) - e.mi(u, s), e.mi(v, y3) - e.mi(uv, s))
    private = e.cmi(x, y1, u) - e.cmi(v, s, u) - e.cmi(x, s, v)
    total = e.mi(v, y3) + e.cmi(x, y1, v) - e.cmi(x, s, v) - e.mi(uv, s)
    return common, private, total


def eq22_bounds(joint: FinitePmf, u="U", v="V", x="X", s="S", y1="Y1", y2="Y2", y3="Y3"):
    """Raw three-message box bounds at an assignment of label groups:
    c1 = I(X;Y1|V) - I(X;S|V), c2 = I(V;Y2|U) - I(V;S|U), c3 = I(U;Y3) - I(U;S).
    """
    e = _Ent(joint)
    c1 = e.cmi(x, y1, v) - e.cmi(x, s, v)
    c2 = e.cmi(v, y2, u) - e.cmi(v, s, u)
    c3 = e.mi(u, y3) - e.mi(u, s)
    return c1, c2, c3


# -- region containers ---------------------------------------------------------


def _clamp(b: float) -> float:
    return b if b > 0.0 else 0.0


@dataclass(frozen=True)
class RateRegion2:
    """{(R0,R1) >= 0 : R0 <= b0, R1 <= b1, R0+R1 <= bsum} with vertices CCW."""

    halfspaces: tuple[tuple[int, int, float], ...]
    vertices: tuple[tuple[float, float], ...]

    @classmethod
    def from_caps(cls, common: float, private: float, total: float) -> "RateRegion2":
        rows = ((1, 0, _clamp(common)), (0, 1, _clamp(private)), (1, 1, _clamp(total)))
        verts = hull2(vertices_of_halfplanes(rows))
        return cls(rows, tuple(verts))

    def contains(self, pt, tol: float = VERTEX_TOL) -> bool:
        x, y = pt
        if x < -tol or y < -tol:
            return False
        return all(a0 * x + a1 * y <= b + tol for a0, a1, b in self.halfspaces)

    @property
    def area(self) -> float:
        return polygon_area(self.vertices)


@dataclass(frozen=True)
class RateRegion3:
    """The box 0 <= Rk <= ck."""

    bounds: tuple[float, float, float]

    @classmethod
    def from_caps(cls, c1: float, c2: float, c3: float) -> "RateRegion3":
        return cls((_clamp(c1), _clamp(c2), _clamp(c3)))

    @property
    def vertices(self) -> tuple[tuple[float, float, float], ...]:
        c1, c2, c3 = self.bounds
        pts = [(a, b, c) for a in (0.0, c1) for b in (0.0, c2) for c in (0.0, c3)]
        return tuple(dedupe_points(pts, 0.0))

    def contains(self, pt, tol: float = VERTEX_TOL) -> bool:
        return all(-tol <= r <= c + tol for r, c in zip(pt, self.bounds))

    @property
    def volume(self) -> float:
        c1, c2, c3 = self.bounds
        return c1 * c2 * c3


@dataclass(frozen=True)
class SearchConfig:
    aux_cards: tuple = (None, None)
    restarts: int = 60
    hillclimb_steps: int = 200
    step_size: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if any(c is not None and c < 1 for c in self.aux_cards):
            raise ValueError("auxiliary cardinalities must be >= 1")
        if self.hillclimb_steps < 0 or self.step_size <= 0:
            raise ValueError("bad hill-climb parameters")


@dataclass(frozen=True)
class RegionHull2:
    """Convex hull of a union of fixed-scheme regions, with generators."""

    vertices: tuple[tuple[float, float], ...]
    schemes: tuple
    raw_points: tuple[tuple[float, float], ...]

    def contains(self, pt, tol: float = VERTEX_TOL) -> bool:
        return hull_distance(self.vertices, pt) <= tol

    @property
    def area(self) -> float:
        return polygon_area(self.vertices)


@dataclass(frozen=True)
class RegionHull3:
    """Union of per-scheme boxes: Pareto corners plus the full corner cloud."""

    vertices: tuple[tuple[float, float, float], ...]
    schemes: tuple
    boxes: tuple[RateRegion3, ...]
    corner_cloud: tuple[tuple[float, float, float], ...]

    def contains(self, pt, tol: float = VERTEX_TOL) -> bool:
        return hull_distance(self.corner_cloud, pt) <= tol


# -- fixed-scheme regions -------------------------------------------------------


def mbc_inner_fixed(channel: MbcChannel, scheme: AuxScheme) -> RateRegion2:
    """Two-message region of a fixed scheme (bounds clamped at zero)."""
    return RateRegion2.from_caps(*eq5_bounds(mbc_joint(channel, scheme)))


def ln_inner_fixed(channel: LessNoisyChannel, scheme: AuxScheme) -> RateRegion3:
    """Three-message box of a fixed scheme (bounds clamped at zero)."""
    return RateRegion3.from_caps(*eq22_bounds(ln_joint(channel, scheme)))


# -- randomized search ----------------------------------------------------------


def _uniform_rows(given, to) -> CondKernel:
    shape = tuple(a.size for a in given) + tuple(a.size for a in to)
    n = int(np.prod([a.size for a in to]))
    return CondKernel(given, to, np.full(shape, 1.0 / n))


def _mod_map(given, to) -> CondKernel:
    """x := (first given symbol) mod |to|, ignoring the rest of the condition."""
    sizes = tuple(a.size for a in given)
    arr = np.zeros(sizes + (to.size,))
    idx = np.arange(sizes[0]) % to.size
    arr[(np.arange(sizes[0]),) + (slice(None),) * (len(sizes) - 1) + (idx,)] = 1.0
    return CondKernel(given, (to,), arr)


def _const_map(given, to) -> CondKernel:
    sizes = tuple(a.size for a in given)
    arr = np.zeros(sizes + (to.size,))
    arr[..., 0] = 1.0
    return CondKernel(given, (to,), arr)


def _canonical_schemes(s_alpha, x_alpha, cards):
    """Deterministic seed schemes: they land exact corner points on clean
    channels that the random climb only approaches asymptotically."""
    default = x_alpha.size * s_alpha.size
    u = Alphabet("U", cards[0] or default)
    v = Alphabet("V", cards[1] or default)
    informative = (
        _uniform_rows((s_alpha,), (u,)),
        _mod_map((u, s_alpha), v),
        _mod_map((v, s_alpha), x_alpha),
    )
    private = (
        _const_map((s_alpha,), u),
        _const_map((u, s_alpha), v),
        _uniform_rows((v, s_alpha), (x_alpha,)),
    )
    return [informative, private]


def _canonical_pairs(s_alpha, x_alpha, u_alpha):
    """Seeds for the (p(u|s), p(x|u,s)) capacity parameterization."""
    informative = (
        _uniform_rows((s_alpha,), (u_alpha,)),
        _mod_map((u_alpha, s_alpha), x_alpha),
    )
    private = (
        _const_map((s_alpha,), u_alpha),
        _uniform_rows((u_alpha, s_alpha), (x_alpha,)),
    )
    return [informative, private]


def _perturb(kernels: Sequence[CondKernel], rng: np.random.Generator, step: float):
    """One coordinate step on one conditioning row, renormalized."""
    which = int(rng.integers(len(kernels)))
    k = kernels[which]
    arr = np.array(k.probs)
    flat = arr.reshape(-1, int(np.prod([a.size for a in k.to])))
    r = int(rng.integers(flat.shape[0]))
    c = int(rng.integers(flat.shape[1]))
    row = flat[r].copy()
    row[c] = max(0.0, row[c] + (step if rng.random() < 0.5 else -step))
    tot = row.sum()
    if tot <= 0.0:
        return None
    flat = flat.copy()
    flat[r] = row / tot
    out = list(kernels)
    out[which] = CondKernel(k.given, k.to, flat.reshape(arr.shape))
    return tuple(out)


def _search_2d(bounds_fn, sampler, cfg: SearchConfig, extra_starts=()):
    """Hill-climb on hull area; returns accepted (vertex, params) pairs.

    bounds_fn(params) -> raw (common, private, total); sampler(rng) -> params.
    Acceptance is lexicographic: union-hull area, then support in a random
    per-restart direction (so restarts fan out along the frontier instead of
    piling onto one corner), then raw bound sum (the only signal while all
    bounds are still negative).  Restart r draws from default_rng([seed, r]).
    """
    pairs: list[tuple[tuple[float, float], object]] = []

    def region_of(params) -> RateRegion2:
        reg = RateRegion2.from_caps(*bounds_fn(params))
        pairs.extend((v, params) for v in reg.vertices)
        return reg

    for params in extra_starts:
        region_of(tuple(params))
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, r])
        params = sampler(rng)
        theta = rng.uniform(0.0, np.pi / 2)
        w = (float(np.cos(theta)), float(np.sin(theta)))

        def support(reg: RateRegion2) -> float:
            return max((w[0] * p0 + w[1] * p1 for p0, p1 in reg.vertices), default=0.0)

        b = bounds_fn(params)
        reg = RateRegion2.from_caps(*b)
        pairs.extend((v, params) for v in reg.vertices)
        hull = list(reg.vertices)
        area = polygon_area(hull)
        score = (support(reg), sum(b))
        for _ in range(cfg.hillclimb_steps):
            cand = _perturb(params, rng, cfg.step_size)
            if cand is None:
                continue
            b = bounds_fn(cand)
            cand_reg = RateRegion2.from_caps(*b)
            trial = hull2(hull + list(cand_reg.vertices))
            trial_area = polygon_area(trial)
            cand_score = (support(cand_reg), sum(b))
            if trial_area > area + 1e-15 or (
                trial_area >= area - 1e-15
                and (
                    cand_score[0] > score[0] + 1e-12
                    or (cand_score[0] >= score[0] - 1e-12 and cand_score[1] > score[1] + 1e-12)
                )
            ):
                params, hull, area, score = cand, trial, trial_area, cand_score
                pairs.extend((v, cand) for v in cand_reg.vertices)
    return pairs


def _assemble_2d(pairs) -> RegionHull2:
    pts = [p for p, _ in pairs]
    hull = hull2(pts)
    gens = []
    for v in hull:
        for p, sch in pairs:
            if max(abs(p[0] - v[0]), abs(p[1] - v[1])) <= VERTEX_TOL:
                gens.append(sch)
                break
        else:  # pragma: no cover - hull vertices come from pairs
            gens.append(None)
    return RegionHull2(tuple(hull), tuple(gens), tuple(dedupe_points(pts)))


def _search_3d(bounds_fn, sampler, cfg: SearchConfig, extra_starts=()):
    """Hill-climb on box volume (sum of bounds as tie-break)."""
    kept: list[tuple[RateRegion3, object]] = []
    for params in extra_starts:
        params = tuple(params)
        kept.append((RateRegion3.from_caps(*bounds_fn(params)), params))
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, r])
        params = sampler(rng)
        w = rng.dirichlet(np.ones(3))  # per-restart frontier direction
        raw = bounds_fn(params)
        box = RateRegion3.from_caps(*raw)
        vol, score = box.volume, (float(w @ box.bounds), sum(raw))
        for _ in range(cfg.hillclimb_steps):
            cand = _perturb(params, rng, cfg.step_size)
            if cand is None:
                continue
            craw = bounds_fn(cand)
            cbox = RateRegion3.from_caps(*craw)
            cvol = cbox.volume
            cscore = (float(w @ cbox.bounds), sum(craw))
            if cvol > vol + 1e-15 or (
                cvol >= vol - 1e-15
                and (
                    cscore[0] > score[0] + 1e-12
                    or (cscore[0] >= score[0] - 1e-12 and cscore[1] > score[1] + 1e-12)
                )
            ):
                params, box, vol, score = cand, cbox, cvol, cscore
        kept.append((box, params))
    return kept


def _assemble_3d(kept) -> RegionHull3:
    cloud: list[tuple[float, float, float]] = []
    for box, _ in kept:
        cloud.extend(box.vertices)
    cloud = dedupe_points(cloud, 0.0)
    corners = sorted(pareto_corners(cloud))
    gens = []
    for c in corners:
        for box, sch in kept:
            if any(max(abs(a - b) for a, b in zip(c, v)) <= VERTEX_TOL for v in box.vertices):
                gens.append(sch)
                break
        else:  # pragma: no cover
            gens.append(None)
    return RegionHull3(tuple(corners), tuple(gens), tuple(b for b, _ in kept), tuple(cloud))


def mbc_inner_region(channel: MbcChannel, cfg: SearchConfig = SearchConfig()) -> RegionHull2:
    """Hull (time sharing) of the union of fixed-scheme two-message regions."""
    ps = channel.state

    def bounds_fn(params):
        return eq5_bounds(
            compose_joint(list(params) + [channel.main, channel.degrading], ps)
        )

    def sampler(rng):
        s = random_scheme(rng, channel, cfg.aux_cards)
        return (s.pU_given_S, s.pV_given_US, s.pX_given_VS)

    x_alpha, s_alpha = channel.main.given
    seeds = _canonical_schemes(s_alpha, x_alpha, cfg.aux_cards)
    hull = _assemble_2d(_search_2d(bounds_fn, sampler, cfg, extra_starts=seeds))
    schemes = tuple(None if g is None else AuxScheme(*g) for g in hull.schemes)
    return RegionHull2(hull.vertices, schemes, hull.raw_points)


def ln_inner_region(channel: LessNoisyChannel, cfg: SearchConfig = SearchConfig()) -> RegionHull3:
    """Union of fixed-scheme boxes for the three-message model."""

    def bounds_fn(params):
        return eq22_bounds(compose_joint(list(params) + [channel.main], channel.state))

    def sampler(rng):
        s = random_scheme(rng, channel, cfg.aux_cards)
        return (s.pU_given_S, s.pV_given_US, s.pX_given_VS)

    x_alpha, s_alpha = channel.main.given
    seeds = _canonical_schemes(s_alpha, x_alpha, cfg.aux_cards)
    kept = _search_3d(bounds_fn, sampler, cfg, extra_starts=seeds)
    out = _assemble_3d(kept)
    schemes = tuple(None if g is None else AuxScheme(*g) for g in out.schemes)
    return RegionHull3(out.vertices, schemes, out.boxes, out.corner_cloud)


# -- capacity variants -----------------------------------------------------------

_MBC_VARIANTS = {
    "one-det": ("Y3",),
    "two-det": ("Y1", "Y3"),
    "full-det": ("Y1", "Y2", "Y3"),
}

_LN_VARIANTS = {
    "general": (),
    "one-det": ("Y1",),
    "two-det": ("Y1", "Y2"),
    "full-det": ("Y1", "Y2", "Y3"),
    "full-det-partial": ("Y1", "Y2", "Y3"),
    "two-det-partial": ("Y1", "Y2"),
}


def _canon_variant(variant: str, table) -> str:
    v = variant.strip().lower().replace("_", "-")
    if v not in table:
        raise ValueError(f"unknown variant {variant!r}; expected one of {sorted(table)}")
    return v


def _require_deterministic(channel: Channel, receivers):
    for r in receivers:
        if detect_deterministic(channel, r) is None:
            raise DeterminismError(r)


def mbc_capacity(
    channel: MbcChannel,
    variant: str,
    cfg: SearchConfig = SearchConfig(),
    extra_starts=(),
) -> RegionHull2:
    """Capacity region of a deterministic variant, optimized over input laws.

    one-det (Y3 = f(X,S)):   R0 <= min{I(U;Y2|S), H(Y3|S)}, R1 <= I(X;Y1|U,S),
                             R0+R1 <= H(Y3|S) + I(X;Y1|Y3,S)
    two-det (Y1,Y3 det):     R1 <= H(Y1|U,S), R0+R1 <= H(Y1,Y3|S)
    full-det (all det):      R0 <= min{H(Y2|S), H(Y3|S)}, R1 <= H(Y1|Y2,S),
                             R0+R1 <= H(Y1,Y3|S)
    Free conditionals: p(u|s) and p(x|u,s), except full-det which needs only
    p(x|s).  `extra_starts` seeds the search with known-good parameter tuples.
    """
    v = _canon_variant(variant, _MBC_VARIANTS)
    _require_deterministic(channel, _MBC_VARIANTS[v])
    x_alpha, s_alpha = channel.main.given
    ps = channel.state

    if v == "full-det":
        def bounds_fn(params):
            (px,) = params
            e = _Ent(compose_joint([px, channel.main, channel.degrading], ps))
            common = min(e.hc("Y2", "S"), e.hc("Y3", "S"))
            private = e.hc("Y1", ("Y2", "S"))
            total = e.hc(("Y1", "Y3"), "S")
            return common, private, total

        def sampler(rng):
            return (random_kernel(rng, (s_alpha,), (x_alpha,)),)

        seeds = [(_uniform_rows((s_alpha,), (x_alpha,)),)]
    else:
        u_alpha = Alphabet("U", cfg.aux_cards[0] or x_alpha.size * s_alpha.size)

        def bounds_fn(params):
            pu, pxu = params
            e = _Ent(compose_joint([pu, pxu, channel.main, channel.degrading], ps))
            common = min(e.cmi("U", "Y2", "S"), e.hc("Y3", "S"))
            if v == "one-det":
                private = e.cmi("X", "Y1", ("U", "S"))
                total = e.hc("Y3", "S") + e.cmi("X", "Y1", ("Y3", "S"))
            else:
                private = e.hc("Y1", ("U", "S"))
                total = e.hc(("Y1", "Y3"), "S")
            return common, private, total

        def sampler(rng):
            return (
                random_kernel(rng, (s_alpha,), (u_alpha,)),
                random_kernel(rng, (u_alpha, s_alpha), (x_alpha,)),
            )

        seeds = _canonical_pairs(s_alpha, x_alpha, u_alpha)

    return _assemble_2d(_search_2d(bounds_fn, sampler, cfg, seeds + list(extra_starts)))


def ln_capacity(
    channel: LessNoisyChannel,
    variant: str,
    cfg: SearchConfig = SearchConfig(),
    extra_starts=(),
) -> RegionHull3:
    """Capacity boxes for the deterministic / partial-SI variants.

    general:          R1 <= I(X;Y1|V,S), R2 <= I(V;Y2|U,S), R3 <= I(U;Y3|S)
    one-det:          R1 <= H(Y1|V,S), others as general
    two-det:          R1 <= H(Y1|Y2,S), R2 <= H(Y2|U,S), R3 <= I(U;Y3|S)
    full-det:         R1 <= H(Y1|Y2,S), R2 <= H(Y2|Y3,S), R3 <= H(Y3|S)
    full-det-partial: identical to full-det by construction
    two-det-partial:  as two-det but R3 <= I(U;Y3) - I(U;S)
    """
    v = _canon_variant(variant, _LN_VARIANTS)
    _require_deterministic(channel, _LN_VARIANTS[v])
    x_alpha, s_alpha = channel.main.given
    ps = channel.state

    if v in ("general", "one-det"):
        def bounds_fn(params):
            e = _Ent(compose_joint(list(params) + [channel.main], ps))
            c1 = e.hc("Y1", ("V", "S")) if v == "one-det" else e.cmi("X", "Y1", ("V", "S"))
            return c1, e.cmi("V", "Y2", ("U", "S")), e.cmi("U", "Y3", "S")

        def sampler(rng):
            s = random_scheme(rng, channel, cfg.aux_cards)
            return (s.pU_given_S, s.pV_given_US, s.pX_given_VS)

        seeds = _canonical_schemes(s_alpha, x_alpha, cfg.aux_cards)
    elif v in ("two-det", "two-det-partial"):
        u_alpha = Alphabet("U", cfg.aux_cards[0] or x_alpha.size * s_alpha.size)

        def bounds_fn(params):
            e = _Ent(compose_joint(list(params) + [channel.main], ps))
            c3 = e.mi("U", "Y3") - e.mi("U", "S") if v == "two-det-partial" else e.cmi("U", "Y3", "S")
            return e.hc("Y1", ("Y2", "S")), e.hc("Y2", ("U", "S")), c3

        def sampler(rng):
            return (
                random_kernel(rng, (s_alpha,), (u_alpha,)),
                random_kernel(rng, (u_alpha, s_alpha), (x_alpha,)),
            )

        seeds = _canonical_pairs(s_alpha, x_alpha, u_alpha)
    else:  # full-det and full-det-partial share one code path
        def bounds_fn(params):
            e = _Ent(compose_joint(list(params) + [channel.main], ps))
            return e.hc("Y1", ("Y2", "S")), e.hc("Y2", ("Y3", "S")), e.hc("Y3", "S")

        def sampler(rng):
            return (random_kernel(rng, (s_alpha,), (x_alpha,)),)

        seeds = [(_uniform_rows((s_alpha,), (x_alpha,)),)]

    return _assemble_3d(_search_3d(bounds_fn, sampler, cfg, seeds + list(extra_starts)))
