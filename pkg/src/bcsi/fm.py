"""Exact Fourier-Motzkin elimination for small rate-inequality systems.

Rows carry integer coefficients and real bounds; pairing arithmetic stays in
integers (gcd-normalized), so elimination introduces no coefficient drift and
the only floating error lives in the bound constants.  The endpoint is the
two-variable (R0, R1) system, where redundancy is decided by vertex
enumeration against the nonnegative quadrant.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .prob import conditional_mutual_information, mutual_information
from .channels import MbcChannel
from .polytopes import (
    halfplanes_unbounded,
    hausdorff,
    hull2,
    vertices_of_halfplanes,
)
from .regions import mbc_joint

COEF_GUARD = 8
LE, GE = "<=", ">="


class BlowupError(RuntimeError):
    """Coefficient magnitude exceeded the guard during elimination."""


@dataclass(frozen=True)
class Row:
    coeffs: tuple[int, ...]
    bound: float
    sense: str = LE

    def __post_init__(self):
        if self.sense not in (LE, GE):
            raise ValueError(f"sense must be {LE!r} or {GE!r}, got {self.sense!r}")
        if any(abs(c) > COEF_GUARD for c in self.coeffs):
            raise BlowupError(f"coefficient out of range in {self.coeffs}")

    def upper(self) -> "Row":
        """The same constraint written with sense <=."""
        if self.sense == LE:
            return self
        return Row(tuple(-c for c in self.coeffs), -self.bound, LE)


@dataclass(frozen=True)
class LinIneqSystem:
    variables: tuple[str, ...]
    rows: tuple[Row, ...]

    def __post_init__(self):
        n = len(self.variables)
        for r in self.rows:
            if len(r.coeffs) != n:
                raise ValueError(f"row width {len(r.coeffs)} != {n} variables")

    def pretty(self) -> list[str]:
        out = []
        for r in self.rows:
            terms = [
                ("" if c == 1 else "-" if c == -1 else str(c)) + v
                for c, v in zip(r.coeffs, self.variables)
                if c != 0
            ]
            lhs = " + ".join(terms).replace("+ -", "- ") if terms else "0"
            out.append(f"{lhs} {r.sense} {r.bound:.6f}")
        return out


def _normalize(coeffs: tuple[int, ...], bound: float) -> tuple[tuple[int, ...], float]:
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
    if g > 1:
        coeffs = tuple(c // g for c in coeffs)
        bound = bound / g
    return coeffs, bound


def fm_eliminate(sys: LinIneqSystem, drop) -> LinIneqSystem:
    """Exact projection onto the variables not in `drop`.

    For each dropped variable, every lower bound is paired with every upper
    bound; surviving rows keep only the remaining columns.  Rows with equal
    coefficient vectors are merged keeping the tighter bound.  Raises
    BlowupError if a combined coefficient would exceed the magnitude guard.
    """
    drop = tuple(drop)
    unknown = [d for d in drop if d not in sys.variables]
    if unknown:
        raise ValueError(f"not in system: {unknown}")
    if not drop:
        return sys

    vars_ = list(sys.variables)
    rows = [(list(r.upper().coeffs), r.upper().bound) for r in sys.rows]
    for label in drop:
        z = vars_.index(label)
        pos = [(c, b) for c, b in rows if c[z] > 0]
        neg = [(c, b) for c, b in rows if c[z] < 0]
        zero = [(c, b) for c, b in rows if c[z] == 0]
        merged: dict[tuple[int, ...], float] = {}

        def add(coeffs: list[int], bound: float):
            del coeffs[z]
            t, bound = _normalize(tuple(coeffs), bound)
            if any(abs(c) > COEF_GUARD for c in t):
                raise BlowupError(
                    f"eliminating {label}: coefficients {t} exceed |{COEF_GUARD}|"
                )
            if t not in merged or bound < merged[t]:
                merged[t] = bound

        for c, b in zero:
            add(list(c), b)
        for cp, bp in pos:
            for cn, bn in neg:
                a, c = cp[z], -cn[z]
                add([c * x + a * y for x, y in zip(cp, cn)], c * bp + a * bn)
        del vars_[z]
        rows = [(list(c), b) for c, b in merged.items()]
    return LinIneqSystem(
        tuple(vars_), tuple(Row(tuple(c), b) for c, b in rows)
    )


# -- the pre-elimination coding system -----------------------------------------

PRE_FM_VARIABLES = ("R0", "R0'", "R11", "R11'", "R12", "R12'")


def build_pre_fm(channel: MbcChannel, scheme) -> LinIneqSystem:
    """The eight coding constraints plus nonnegativity, slack terms at zero.

    Over (R0, R0', R11, R11', R12, R12'):
      R0 + R0'                                  <= I(U;Y2)
      R12 + R12'                                <= I(X;Y1|V)
      R11 + R11' + R12 + R12'                   <= I(X;Y1|U)
      R0 + R0' + R11 + R11' + R12 + R12'        <= I(X;Y1)
      R0 + R0' + R11 + R11'                     <= I(V;Y3)
      R0'  >= I(U;S),   R11' >= I(V;S|U),   R12' >= I(X;S|V)
    """
    j = mbc_joint(channel, scheme)

    def mi(a, b):
        return mutual_information(j, (a,), (b,))

    def cmi(a, b, c):
        return conditional_mutual_information(j, (a,), (b,), (c,))

    rows = [
        Row((1, 1, 0, 0, 0, 0), mi("U", "Y2")),
        Row((0, 0, 0, 0, 1, 1), cmi("X", "Y1", "V")),
        Row((0, 0, 1, 1, 1, 1), cmi("X", "Y1", "U")),
        Row((1, 1, 1, 1, 1, 1), mi("X", "Y1")),
        Row((1, 1, 1, 1, 0, 0), mi("V", "Y3")),
        Row((0, 1, 0, 0, 0, 0), mi("U", "S"), GE),
        Row((0, 0, 0, 1, 0, 0), cmi("V", "S", "U"), GE),
        Row((0, 0, 0, 0, 0, 1), cmi("X", "S", "V"), GE),
    ]
    for k in range(6):
        e = [0] * 6
        e[k] = 1
        rows.append(Row(tuple(e), 0.0, GE))
    return LinIneqSystem(PRE_FM_VARIABLES, tuple(rows))


def project_to_rates(sys: LinIneqSystem, order=None) -> LinIneqSystem:
    """Project the pre-elimination system onto (R0, R1) with R1 = R11 + R12.

    The substitution is mechanical: a fresh R1 column plus the two rows
    R1 - R11 - R12 <= 0 and >= 0, then elimination of the bin rates and the
    split rates.  `order` overrides the default elimination order.
    """
    if sys.variables != PRE_FM_VARIABLES:
        raise ValueError(f"expected variables {PRE_FM_VARIABLES}, got {sys.variables}")
    vars7 = sys.variables + ("R1",)
    rows7 = [Row(r.coeffs + (0,), r.bound, r.sense) for r in sys.rows]
    split = (0, 0, -1, 0, -1, 0, 1)
    rows7.append(Row(split, 0.0, LE))
    rows7.append(Row(split, 0.0, GE))
    out = fm_eliminate(
        LinIneqSystem(vars7, tuple(rows7)),
        order if order is not None else ("R0'", "R11'", "R12'", "R11", "R12"),
    )
    if out.variables != ("R0", "R1"):
        raise ValueError(f"projection left variables {out.variables}")
    return out


# -- two-variable redundancy ------------------------------------------------------


@dataclass(frozen=True)
class Minimal2D:
    kept: tuple[Row, ...]
    redundant: tuple[Row, ...]
    vertices: tuple[tuple[float, float], ...]
    unbounded: bool


def _vertex_set(rows_le):
    verts = hull2(vertices_of_halfplanes(rows_le))
    return verts, halfplanes_unbounded(rows_le)


def row_is_redundant(sys: LinIneqSystem, row: Row, tol: float = 1e-9) -> bool:
    """Does imposing `row` on a two-variable system leave its region unchanged?

    Copies of the same constraint already present are set aside first, so the
    verdict is about the constraint itself; a pair of duplicates would
    otherwise each look deletable.
    """
    if len(sys.variables) != 2:
        raise ValueError(f"need exactly 2 variables, got {sys.variables}")
    cand = row.upper()
    ck, cb = _normalize(cand.coeffs, cand.bound)
    rest = []
    for r in sys.rows:
        u = r.upper()
        k, b = _normalize(u.coeffs, u.bound)
        if k == ck and abs(b - cb) <= tol:
            continue
        rest.append(r)
    verdict = minimal_2d(LinIneqSystem(sys.variables, tuple(rest) + (row,)), tol)
    return row in verdict.redundant


def minimal_2d(sys: LinIneqSystem, tol: float = 1e-9) -> Minimal2D:
    """Classify rows of a two-variable system over the nonnegative quadrant.

    A row is redundant iff deleting it changes neither the vertex set (within
    `tol`, Hausdorff) nor whether the region is unbounded.
    """
    if len(sys.variables) != 2:
        raise ValueError(f"need exactly 2 variables, got {sys.variables}")
    rows_le = [r.upper() for r in sys.rows]
    triples = [(r.coeffs[0], r.coeffs[1], r.bound) for r in rows_le]
    base_verts, base_unb = _vertex_set(triples)
    kept, redundant = [], []
    for i, row in enumerate(sys.rows):
        rest = triples[:i] + triples[i + 1 :]
        verts, unb = _vertex_set(rest)
        if unb == base_unb and hausdorff(verts, base_verts) <= tol:
            redundant.append(row)
        else:
            kept.append(row)
    return Minimal2D(tuple(kept), tuple(redundant), tuple(base_verts), base_unb)
