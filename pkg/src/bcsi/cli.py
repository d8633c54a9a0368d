"""Command-line front end: channel ingestion, dispatch, machine-readable output.

Exit codes: 0 success, 1 usage error, 2 input-validation failure, 3 numerical
or feasibility failure.  All rates are printed in nats unless --bits is given;
the conversion is display-only.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from .aen import AenParams, aen_inner, aen_outer
from .channels import (
    ChannelFormatError,
    ConsistentAfter,
    Counterexample,
    Degraded,
    MbcChannel,
    check_degraded,
    falsify_less_noisy,
    load_channel,
    receiver_kernel,
)
from .coding import SimConfig, SizeCapError, simulate
from .fm import BlowupError, Row, build_pre_fm, minimal_2d, project_to_rates, row_is_redundant
from .polytopes import hausdorff, hull2, vertices_of_halfplanes
from .prob import LabelError, conditional_mutual_information, mutual_information
from .regions import (
    DeterminismError,
    SchemeFormatError,
    SearchConfig,
    eq5_bounds,
    ln_capacity,
    ln_inner_region,
    load_scheme,
    mbc_capacity,
    mbc_inner_region,
    mbc_joint,
    random_scheme,
    scheme_to_dict,
)
from .wdp import WdpParams, beta_star, rate_of_beta, wdp_rates

__all__ = ["main", "run"]

LN2 = math.log(2.0)
VERTEX_TOL = 1e-9

RECEIVER_LABELS = ("Y1", "Y2", "Y3")

CAPACITY_VARIANTS = {
    "one-det": ("mbc", "one-det"),
    "two-det": ("mbc", "two-det"),
    "full-det": ("mbc", "full-det"),
    "ln-general": ("lessnoisy", "general"),
    "ln-one-det": ("lessnoisy", "one-det"),
    "ln-two-det": ("lessnoisy", "two-det"),
    "ln-full-det": ("lessnoisy", "full-det"),
    "ln-full-det-partial": ("lessnoisy", "full-det-partial"),
    "ln-two-det-partial": ("lessnoisy", "two-det-partial"),
}


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we own the codes
        raise UsageError(f"{self.prog}: {message}")


# -- flag parsing helpers ------------------------------------------------------


def _float_flag(flag: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise InputError(f"{flag}: expected a number, got {text!r}") from None


def _int_flag(flag: str, text: str, lo: int = 0) -> int:
    try:
        v = int(text)
    except ValueError:
        raise InputError(f"{flag}: expected an integer, got {text!r}") from None
    if v < lo:
        raise InputError(f"{flag}: must be >= {lo}, got {v}")
    return v


def _float_list(flag: str, text: str, want: int | None = None) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",")]
    if want is not None and len(parts) != want:
        raise InputError(f"{flag}: expected {want} comma-separated numbers, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise InputError(f"{flag}: expected numbers, got {text!r}") from None


def _int_list(flag: str, text: str, lo: int = 1) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    try:
        vals = tuple(int(p) for p in parts)
    except ValueError:
        raise InputError(f"{flag}: expected integers, got {text!r}") from None
    if not vals or any(v < lo for v in vals):
        raise InputError(f"{flag}: entries must be >= {lo}, got {text!r}")
    return vals


def _aux_cards(text: str | None) -> tuple[int | None, int | None]:
    """Parse 'U=4,V=4' (either key optional) into search cardinalities."""
    if text is None:
        return (None, None)
    out: dict[str, int] = {}
    for piece in text.split(","):
        key, eq, val = piece.strip().partition("=")
        if not eq or key not in ("U", "V") or key in out:
            raise InputError(f"--aux-card: expected 'U=<int>,V=<int>', got {text!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise InputError(f"--aux-card: {key} needs an integer, got {val!r}") from None
        if out[key] < 1:
            raise InputError(f"--aux-card: {key} must be >= 1, got {out[key]}")
    return (out.get("U"), out.get("V"))


def _receiver_pair(text: str) -> tuple[str, str]:
    parts = tuple(p.strip() for p in text.split(","))
    if len(parts) != 2 or any(p not in RECEIVER_LABELS for p in parts) or parts[0] == parts[1]:
        raise InputError(f"--pair: expected two distinct receivers out of {RECEIVER_LABELS}, got {text!r}")
    return parts


def _load_channel_arg(path: str):
    try:
        return load_channel(path)
    except FileNotFoundError:
        raise InputError(f"--channel: no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"--channel: {path} is not valid JSON ({exc})") from None
    except ChannelFormatError as exc:
        raise InputError(f"--channel: {path}: {exc}") from None


def _load_scheme_arg(path: str, channel):
    try:
        return load_scheme(path, channel)
    except FileNotFoundError:
        raise InputError(f"--scheme: no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"--scheme: {path} is not valid JSON ({exc})") from None
    except SchemeFormatError as exc:
        raise InputError(f"--scheme: {path}: {exc}") from None


def _require_model(channel, model: str, flag: str):
    is_mbc = isinstance(channel, MbcChannel)
    if model == "mbc" and not is_mbc:
        raise InputError(f"{flag}: channel file declares model 'lessnoisy', need 'mbc'")
    if model == "lessnoisy" and is_mbc:
        raise InputError(f"{flag}: channel file declares model 'mbc', need 'lessnoisy'")


# -- output helpers ------------------------------------------------------------


def _num(x: float) -> float:
    return 0.0 if x == 0.0 else float(x)  # normalize -0.0 for stable output


def _scale_points(points, factor: float):
    return [[_num(v / factor) for v in p] for p in points]


def _write_csv(path: str, header: Sequence[str], rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(_num(float(v))) for v in row) + "\n")


def _halfspaces(vertices) -> list[list[float]]:
    """Supporting half-planes a0*R0 + a1*R1 <= b from a CCW polygon."""
    if len(vertices) < 3:
        return []
    out = []
    k = len(vertices)
    for i in range(k):
        (px, py), (qx, qy) = vertices[i], vertices[(i + 1) % k]
        a0, a1 = qy - py, px - qx  # outward normal of a CCW edge
        out.append([_num(a0), _num(a1), _num(a0 * px + a1 * py)])
    return out


def _generator_doc(params):
    if params is None:
        return None
    names = {
        1: ("pX_given_S",),
        2: ("pU_given_S", "pX_given_US"),
        3: ("pU_given_S", "pV_given_US", "pX_given_VS"),
    }[len(params)]
    return {name: kern.probs.tolist() for name, kern in zip(names, params)}


# -- subcommands ----------------------------------------------------------------


def _search_config(args) -> SearchConfig:
    return SearchConfig(
        aux_cards=_aux_cards(args.aux_card),
        restarts=_int_flag("--restarts", args.restarts, lo=1),
        seed=_int_flag("--seed", args.seed),
    )


def _emit_region(summary: dict, dims: Sequence[str], vertices, out_path: str | None) -> None:
    print(json.dumps(summary, indent=2))
    if out_path:
        _write_csv(out_path, dims, vertices)


def _cmd_region(args) -> int:
    if args.model not in ("mbc", "lessnoisy"):
        raise InputError(f"--model: expected 'mbc' or 'lessnoisy', got {args.model!r}")
    channel = _load_channel_arg(args.channel)
    _require_model(channel, args.model, "--model")
    cfg = _search_config(args)
    factor = LN2 if args.bits else 1.0
    if args.model == "mbc":
        hull = mbc_inner_region(channel, cfg)
        dims = ("R0", "R1")
    else:
        hull = ln_inner_region(channel, cfg)
        dims = ("R1", "R2", "R3")
    vertices = _scale_points(hull.vertices, factor)
    summary = {
        "model": args.model,
        "units": "bits" if args.bits else "nats",
        "variables": list(dims),
        "vertices": vertices,
        "schemes": [None if s is None else scheme_to_dict(s) for s in hull.schemes],
    }
    if args.model == "mbc":
        summary["halfspaces"] = _halfspaces(vertices)
    _emit_region(summary, dims, vertices, args.out)
    return 0


def _cmd_capacity(args) -> int:
    if args.variant not in CAPACITY_VARIANTS:
        raise InputError(
            f"--variant: unknown {args.variant!r}; expected one of {', '.join(sorted(CAPACITY_VARIANTS))}"
        )
    model, variant = CAPACITY_VARIANTS[args.variant]
    channel = _load_channel_arg(args.channel)
    _require_model(channel, model, "--variant")
    cfg = _search_config(args)
    factor = LN2 if args.bits else 1.0
    if model == "mbc":
        hull = mbc_capacity(channel, variant, cfg)
        dims = ("R0", "R1")
    else:
        hull = ln_capacity(channel, variant, cfg)
        dims = ("R1", "R2", "R3")
    vertices = _scale_points(hull.vertices, factor)
    summary = {
        "variant": args.variant,
        "model": model,
        "units": "bits" if args.bits else "nats",
        "variables": list(dims),
        "vertices": vertices,
        "generators": [_generator_doc(g) for g in hull.schemes],
    }
    if model == "mbc":
        summary["halfspaces"] = _halfspaces(vertices)
    _emit_region(summary, dims, vertices, args.out)
    return 0


def _cmd_check(args) -> int:
    channel = _load_channel_arg(args.channel)
    ya, yb = _receiver_pair(args.pair)
    if args.property == "degraded":
        res = check_degraded(receiver_kernel(channel, ya), receiver_kernel(channel, yb))
        if isinstance(res, Degraded):
            print(f"degraded: yes ({yb} is a stochastically degraded version of {ya})")
        else:
            print(
                f"degraded: no (worst case input {res.x}, state {res.s}, "
                f"residual {res.residual:.6g})"
            )
    elif args.property == "less-noisy":
        samples = _int_flag("--samples", args.samples, lo=1)
        seed = _int_flag("--seed", args.seed)
        aux = _aux_cards(args.aux_card)[0] or 2
        res = falsify_less_noisy(channel, (ya, yb), samples, aux_card=aux, seed=seed)
        if isinstance(res, Counterexample):
            print(
                f"less-noisy: falsified ({ya} vs {yb}: state {res.state}, "
                f"gap {res.gap:.6g} nats)"
            )
        else:
            assert isinstance(res, ConsistentAfter)
            skipped = ", ".join(map(str, res.skipped_states)) or "none"
            print(
                f"less-noisy: no counterexample for {ya} vs {yb} "
                f"after {res.samples} samples (skipped states: {skipped})"
            )
    else:
        raise InputError(f"--property: expected 'degraded' or 'less-noisy', got {args.property!r}")
    return 0


def _combined_bound(joint) -> float:
    return (
        mutual_information(joint, ("X",), ("Y1",))
        - mutual_information(joint, ("U", "V"), ("S",))
        - conditional_mutual_information(joint, ("X",), ("S",), ("V",))
    )


def _fm_case(channel, scheme) -> tuple[float, bool, int]:
    projected = project_to_rates(build_pre_fm(channel, scheme))
    # closed form without the at-zero clamp, so an infeasible (negative-bound)
    # scheme compares empty-to-empty instead of empty-to-origin
    joint = mbc_joint(channel, scheme)
    common, private, total = eq5_bounds(joint)
    closed = hull2(vertices_of_halfplanes(
        [(1, 0, common), (0, 1, private), (1, 1, total)]
    ))
    gap = hausdorff(minimal_2d(projected).vertices, closed)
    redundant = row_is_redundant(projected, Row((1, 1), _combined_bound(joint)))
    return gap, redundant, len(projected.rows)


def _cmd_fm_verify(args) -> int:
    channel = _load_channel_arg(args.channel)
    _require_model(channel, "mbc", "--channel")
    scheme = _load_scheme_arg(args.scheme, channel)
    trials = _int_flag("--trials", args.trials)
    seed = _int_flag("--seed", args.seed)
    pre = build_pre_fm(channel, scheme)
    print(f"pre-elimination: {len(pre.rows)} rows over ({', '.join(pre.variables)})")
    gap, redundant, nrows = _fm_case(channel, scheme)
    ok = gap <= VERTEX_TOL
    print(
        f"given scheme: {nrows} projected rows, vertex gap {gap:.3e} "
        f"{'OK' if ok else 'MISMATCH'}, combined row "
        f"{'redundant' if redundant else 'NOT redundant'}"
    )
    all_ok = ok and redundant
    if trials:
        match = red = 0
        failing = []
        for t in range(trials):
            sch = random_scheme(np.random.default_rng([seed, t]), channel)
            gap, redundant, _ = _fm_case(channel, sch)
            match += gap <= VERTEX_TOL
            red += redundant
            if gap > VERTEX_TOL or not redundant:
                failing.append(t)
        print(f"random trials: {match}/{trials} vertex match, {red}/{trials} combined row redundant")
        if failing:
            print(f"failing trials: {', '.join(map(str, failing))}")
            all_ok = False
    return 0 if all_ok else 3


def _cmd_simulate(args) -> int:
    channel = _load_channel_arg(args.channel)
    _require_model(channel, "mbc", "--channel")
    scheme = _load_scheme_arg(args.scheme, channel)
    r0, r1 = _float_list("--rates", args.rates, 2)
    if min(r0, r1) < 0:
        raise InputError(f"--rates: rates must be nonnegative, got {args.rates!r}")
    if args.split is None:
        r11, r12 = 0.0, r1
    else:
        r11, r12 = _float_list("--split", args.split, 2)
        if abs(r11 + r12 - r1) > 1e-9:
            raise InputError(
                f"--split: R11 + R12 = {r11 + r12!r} does not match R1 = {r1!r} from --rates"
            )
    bins = (0.0, 0.0, 0.0) if args.bins is None else _float_list("--bins", args.bins, 3)
    blocklengths = _int_list("--n", args.n)
    trials = _int_flag("--trials", args.trials, lo=1)
    eps = _float_flag("--eps", args.eps)
    seed = _int_flag("--seed", args.seed)
    factor = LN2 if args.bits else 1.0
    configs = []
    for n in blocklengths:
        try:
            configs.append(SimConfig(
                n=n, r0=r0, r11=r11, r12=r12,
                bin0=bins[0], bin11=bins[1], bin12=bins[2],
                epsilon=eps, trials=trials, seed=seed,
            ))
        except ValueError as exc:
            raise InputError(f"--rates/--bins/--eps/--trials: {exc}") from None
    print("n,R0,R1,e1,e2,e3,enc_fail,trials,seed")
    for cfg in configs:
        res = simulate(channel, scheme, cfg)
        cells = [repr(_num(v)) for v in
                 (r0 / factor, r1 / factor, res.e1, res.e2, res.e3, res.enc_fail)]
        print(f"{cfg.n},{','.join(cells)},{res.trials},{seed}")
    return 0


def _cmd_wdp(args) -> int:
    p1, p2, p3 = _float_list("--p", args.p, 3)
    n1, n2, n3 = _float_list("--n", args.n, 3)
    q = _float_flag("--q", args.q)
    try:
        params = WdpParams(p1, p2, p3, n1, n2, n3, q)
        stars = beta_star(params)
        rates = wdp_rates(params)
    except ValueError as exc:
        raise InputError(f"--p/--n/--q: {exc}") from None
    unit = "bits" if args.bits else "nats"
    factor = LN2 if args.bits else 1.0
    print(f"β* = ({stars[0]:.6g}, {stars[1]:.6g}, {stars[2]:.6g})")
    scaled = [r / factor for r in rates]
    print(f"rates ({unit}) = ({scaled[0]:.6g}, {scaled[1]:.6g}, {scaled[2]:.6g})")
    grid_n = _int_flag("--grid", args.grid)
    if grid_n:
        if grid_n < 2:
            raise InputError(f"--grid: need at least 2 points, got {grid_n}")
        grid = np.linspace(0.0, 1.0, grid_n)
        hats = []
        for layer in (1, 2, 3):
            values = [rate_of_beta(params, layer, b) for b in grid]
            hats.append(float(grid[int(np.argmax(values))]))
        gap = max(abs(h - s) for h, s in zip(hats, stars))
        print(f"grid {grid_n}: β^ = ({hats[0]:.6g}, {hats[1]:.6g}, {hats[2]:.6g}), max |β^ - β*| = {gap:.3g}")
        at_hat = [rate_of_beta(params, layer, h) / factor for layer, h in zip((1, 2, 3), hats)]
        print(f"rates at β^ ({unit}) = ({at_hat[0]:.6g}, {at_hat[1]:.6g}, {at_hat[2]:.6g})")
        if gap > 1e-3:
            print("finding: grid optimum departs from the closed-form coefficient")
    return 0


def _cmd_aen(args) -> int:
    mx = _float_flag("--mx", args.mx)
    ms = _float_flag("--ms", args.ms)
    mz = _float_list("--mz", args.mz, 3)
    try:
        params = AenParams(mx, ms, mz)
    except ValueError as exc:
        raise InputError(f"--mx/--ms/--mz: {exc}") from None
    unit = "bits" if args.bits else "nats"
    factor = LN2 if args.bits else 1.0
    inner = aen_inner(params)
    for k, (value, valid) in enumerate(inner, 1):
        flag = "regime ok" if valid else "regime violated"
        print(f"inner R{k} ({unit}) = {value / factor:.10g} [{flag}]")
    if all(abs(z - ms) <= 1e-12 for z in mz):
        mode = "CorrectedConstant" if args.corrected else "PaperConstant"
        outer = aen_outer(params, mode)
        print(f"outer R1 = R2 = R3 ({unit}) = {outer[0] / factor:.10g} [{mode}]")
        if args.compare:
            exceeds = False
            for k, (value, _) in enumerate(inner, 1):
                diff = (value - outer[k - 1]) / factor
                print(f"compare R{k}: inner - outer = {diff:.10g}")
                exceeds = exceeds or diff > 0
            if exceeds:
                print("finding: an inner value exceeds the outer bound")
            else:
                print("inner <= outer for every receiver")
    else:
        print(f"outer: skipped (requires m_s = m_z1 = m_z2 = m_z3; got --ms {args.ms} --mz {args.mz})")
        if args.compare:
            print("compare: skipped (no outer values)")
    return 0


# -- parser and dispatch ---------------------------------------------------------


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--aux-card", default=None, metavar="U=4,V=4")
    p.add_argument("--restarts", default="60")
    p.add_argument("--seed", default="0")
    p.add_argument("--out", default=None, metavar="FILE.csv")
    p.add_argument("--bits", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bcsi", description="Broadcast-channel rate regions with encoder side information")
    sub = parser.add_subparsers(dest="command", metavar="command", required=True)

    p = sub.add_parser("region", help="achievable region via randomized scheme search")
    p.add_argument("--model", required=True, metavar="mbc|lessnoisy")
    p.add_argument("--channel", required=True, metavar="FILE.json")
    _add_search_flags(p)
    p.set_defaults(handler=_cmd_region)

    p = sub.add_parser("capacity", help="capacity region of a deterministic variant")
    p.add_argument("--channel", required=True, metavar="FILE.json")
    p.add_argument("--variant", required=True, metavar="|".join(sorted(CAPACITY_VARIANTS)))
    _add_search_flags(p)
    p.set_defaults(handler=_cmd_capacity)

    p = sub.add_parser("check", help="degradedness and less-noisy property checks")
    p.add_argument("--channel", required=True, metavar="FILE.json")
    p.add_argument("--property", required=True, metavar="degraded|less-noisy")
    p.add_argument("--pair", default="Y1,Y2", metavar="Y1,Y2")
    p.add_argument("--samples", default="10000")
    p.add_argument("--seed", default="0")
    p.add_argument("--aux-card", default=None, metavar="U=2")
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("fm", help="Fourier-Motzkin derivation checks")
    fmsub = p.add_subparsers(dest="fm_command", metavar="verify", required=True)
    v = fmsub.add_parser("verify", help="projected system vs the closed-form region")
    v.add_argument("--channel", required=True, metavar="FILE.json")
    v.add_argument("--scheme", required=True, metavar="FILE.json")
    v.add_argument("--trials", default="100")
    v.add_argument("--seed", default="1")
    v.set_defaults(handler=_cmd_fm_verify)

    p = sub.add_parser("simulate", help="Monte Carlo encode/decode error rates")
    p.add_argument("--channel", required=True, metavar="FILE.json")
    p.add_argument("--scheme", required=True, metavar="FILE.json")
    p.add_argument("--rates", required=True, metavar="R0,R1")
    p.add_argument("--split", default=None, metavar="R11,R12")
    p.add_argument("--bins", default=None, metavar="B0,B11,B12")
    p.add_argument("--n", default="8,12,16")
    p.add_argument("--trials", default="1000")
    p.add_argument("--eps", default="0.1")
    p.add_argument("--seed", default="0")
    p.add_argument("--bits", action="store_true")
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("wdp", help="Gaussian dirty-paper coefficients and rates")
    p.add_argument("--p", required=True, metavar="P1,P2,P3")
    p.add_argument("--n", required=True, metavar="N1,N2,N3")
    p.add_argument("--q", default="0")
    p.add_argument("--grid", default="0")
    p.add_argument("--bits", action="store_true")
    p.set_defaults(handler=_cmd_wdp)

    p = sub.add_parser("aen", help="additive-exponential-noise bounds")
    p.add_argument("--mx", required=True)
    p.add_argument("--ms", required=True)
    p.add_argument("--mz", required=True, metavar="M1,M2,M3")
    p.add_argument("--corrected", action="store_true")
    p.add_argument("--compare", action="store_true")
    p.add_argument("--bits", action="store_true")
    p.set_defaults(handler=_cmd_aen)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Dispatch one invocation; returns the exit code instead of raising."""
    arglist = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        args = build_parser().parse_args(arglist)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    try:
        return args.handler(args)
    except InputError as exc:
        print(f"bcsi: {exc}", file=sys.stderr)
        return 2
    except (DeterminismError, SizeCapError, BlowupError) as exc:
        print(f"bcsi: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"bcsi: no such file: {exc.filename}", file=sys.stderr)
        return 2
    except (ChannelFormatError, SchemeFormatError, LabelError, ValueError) as exc:
        print(f"bcsi: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run())
