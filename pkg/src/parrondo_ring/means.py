"""Exact per-turn mean profits for the ring games.

The mean for the periodic schedule of r turns of game A followed by s turns
of game B is

    mu = (1/(r+s)) * sum_{v=0}^{s-1}  pi Pa^r Pb^v Pdot_b 1,

where pi is the stationary distribution of Pa^r Pb^s and Pdot_b is the
payoff-signed game-B matrix, all in reduced (class) coordinates.  Pure game B
is the r = 0, s = 1 case of the same fold; the random mixture replaces both
factors by their gamma-blend, or equivalently substitutes
p_m -> gamma/2 + (1-gamma)*p_m and plays pure B.

Everything here also exists in an unreduced full-state variant, kept solely
as an independent oracle for the reduction pipeline, plus literal 3-player
closed forms for a second, matrix-free oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .games import Number, ParamVector, PatternSpec, blend, build_game_a, build_game_b
from .stationary import (
    ReducibleCase,
    UnsupportedBoundary,
    classify_boundary,
    solve_stationary,
    stationary_from_factors,
)
from .symmetry import (
    CYCLIC,
    DIHEDRAL,
    SymmetryGroup,
    build_classes,
    quotient,
    reduced_game_a,
    reduced_game_b,
)

#: number of players above which exact rational arithmetic is refused
RATIONAL_N_LIMIT = 6

#: number of players above which reduced matrices are kept as sparse factors
FACTOR_SOLVE_THRESHOLD = 2000


@dataclass
class ProfitReport:
    """Mean profit per turn plus provenance of the computation."""

    mu: Number
    pattern: PatternSpec
    n: int
    params: ParamVector
    group: str | None
    case_id: int
    residual: float
    method: str
    class_count: int | None

    def __post_init__(self):
        if abs(self.mu) > 1 + 1e-12:
            raise ValueError(f"|mu| = {self.mu} exceeds the per-turn payoff bound 1")

    @property
    def mu_float(self) -> float:
        return float(self.mu)

    @property
    def mu_6sig(self) -> str:
        return six_significant(self.mu_float)


def six_significant(x: float) -> str:
    """Render to six significant digits, plain decimal notation."""
    if x == 0:
        return "0.00000"
    exponent = math.floor(math.log10(abs(x)))
    decimals = max(0, 5 - exponent)
    return f"{x:.{decimals}f}"


def resolve_group(n: int, params: ParamVector, group="auto") -> SymmetryGroup:
    """Group selection policy: dihedral needs p1 == p2, otherwise cyclic."""
    if isinstance(group, SymmetryGroup):
        if group.n != n:
            raise ValueError(f"group ring size {group.n} != n={n}")
        if group.kind == DIHEDRAL and not params.symmetric:
            raise ValueError("dihedral reduction requires p1 == p2")
        return group
    if group == "auto":
        return SymmetryGroup.dihedral(n) if params.symmetric else SymmetryGroup.cyclic(n)
    if group == CYCLIC:
        return SymmetryGroup.cyclic(n)
    if group == DIHEDRAL:
        if not params.symmetric:
            raise ValueError("dihedral reduction requires p1 == p2")
        return SymmetryGroup.dihedral(n)
    raise ValueError(f"unknown group {group!r}")


def _resolve_mode(n: int, params: ParamVector, mode) -> ParamVector:
    """Apply the dual-mode arithmetic policy and return params accordingly."""
    if mode is None:
        mode = "rational" if params.exact and n <= RATIONAL_N_LIMIT else "float"
    if mode == "rational":
        if n > RATIONAL_N_LIMIT:
            raise ValueError(f"rational mode supports n <= {RATIONAL_N_LIMIT}, got n={n}")
        if not params.exact:
            params = ParamVector(*(Fraction(p) for p in params.as_tuple()))
        return params
    if mode == "float":
        return params.to_float()
    raise ValueError(f"unknown mode {mode!r}")


def _fold_mean(pi, pa, pb, pdot, r: int, s: int):
    """Evaluate (1/(r+s)) sum_v (pi Pa^r Pb^v) . (Pdot 1), folding factor by
    factor so no intermediate matrix power is ever materialized."""
    if isinstance(pi, np.ndarray):
        d = pdot.sum(axis=1)
        w = pi
        for _ in range(r):
            w = w @ pa
        acc = 0.0
        for v in range(s):
            acc += float(w @ d)
            if v < s - 1:
                w = w @ pb
        return acc / (r + s)
    d = [sum(row.values()) for row in pdot.rows]
    w = list(pi)
    for _ in range(r):
        w = pa.vecmat(w)
    acc = Fraction(0)
    for v in range(s):
        acc += sum(wi * di for wi, di in zip(w, d) if wi)
        if v < s - 1:
            w = pb.vecmat(w)
    return acc / (r + s)


def _reduced_pipeline(n, params, r, s, group, mixture_gamma=None):
    """Shared reduced-chain computation.

    Returns (mu, stationary result, class count).  With ``mixture_gamma`` the
    A/B factors are replaced by their blend and (r, s) must be (0, 1).
    """
    qm = build_classes(n, group)
    exact = params.exact
    case = classify_boundary(params, n) if mixture_gamma is None else ReducibleCase(0, n, ())
    excluded = frozenset(qm.class_index(state) for state in case.excluded_ints)

    pb = reduced_game_b(n, params, qm)
    pdot = reduced_game_b(n, params, qm, signed=True)
    need_a = r > 0 or mixture_gamma is not None
    pa = reduced_game_a(n, qm, exact=exact) if need_a else None
    if mixture_gamma is not None:
        g = mixture_gamma
        one = params.one
        pb = blend(g, pa, one - g, pb)
        pa_dot = reduced_game_a(n, qm, exact=exact, signed=True)
        pdot = blend(g, pa_dot, one - g, pdot)
        pa = None

    if exact:
        product = pb.power(s)
        if r:
            product = pa.power(r) @ product
        st = solve_stationary(product, excluded)
        mu = _fold_mean(st.pi, pa, pb, pdot, r, s)
        return mu, st, qm.class_count

    pb_d = pb.to_numpy() if qm.class_count <= FACTOR_SOLVE_THRESHOLD else pb.to_csr()
    pa_d = None if pa is None else (
        pa.to_numpy() if qm.class_count <= FACTOR_SOLVE_THRESHOLD else pa.to_csr()
    )
    pdot_d = pdot.to_numpy() if qm.class_count <= FACTOR_SOLVE_THRESHOLD else pdot.to_csr()
    if qm.class_count <= FACTOR_SOLVE_THRESHOLD:
        product = np.linalg.matrix_power(pb_d, s)
        if r:
            product = np.linalg.matrix_power(pa_d, r) @ product
        st = solve_stationary(product, excluded)
        mu = _fold_mean(st.pi, pa_d, pb_d, pdot_d, r, s)
        return mu, st, qm.class_count
    factors = ([] if not r else [(pa_d, r)]) + [(pb_d, s)]
    st = stationary_from_factors(factors, excluded)
    d = np.asarray(pdot_d.sum(axis=1)).ravel()
    w = st.pi
    for _ in range(r):
        w = np.asarray(w @ pa_d).ravel()
    acc = 0.0
    for v in range(s):
        acc += float(w @ d)
        if v < s - 1:
            w = np.asarray(w @ pb_d).ravel()
    return acc / (r + s), st, qm.class_count


def mean_pattern(n: int, params: ParamVector, r: int, s: int, group="auto", mode=None) -> ProfitReport:
    """Exact mean profit per turn of the periodic schedule [r, s]."""
    spec = PatternSpec.pattern(r, s)
    params = _resolve_mode(n, params, mode)
    grp = resolve_group(n, params, group)
    case = classify_boundary(params, n)
    mu, st, classes = _reduced_pipeline(n, params, r, s, grp)
    return ProfitReport(mu, spec, n, params, grp.kind, case.case_id, st.residual, st.method, classes)


def mean_game_b(n: int, params: ParamVector, group="auto", mode=None) -> ProfitReport:
    """Exact mean profit per turn of always playing game B.

    In the absorbing regimes the answer is forced without solving: with
    p0 = 0 play ends in the all-losers state (mu = -1), with p3 = 1 in the
    all-winners state (mu = +1).  With both faces absorbing (p0 = 0, p3 = 1)
    the long-run mean depends on the random absorption target, so no single
    value exists and the input is rejected.
    """
    spec = PatternSpec.game_b()
    params = _resolve_mode(n, params, mode)
    grp = resolve_group(n, params, group)
    case = classify_boundary(params, n)
    if case.case_id in (2, 4):
        forced = params.one if case.case_id == 4 else -params.one
        return ProfitReport(forced, spec, n, params, grp.kind, case.case_id, 0.0, "absorbing", None)
    if case.case_id == 6:
        raise UnsupportedBoundary(
            "p0=0 and p3=1 make both uniform states absorbing for game B; "
            "its long-run mean depends on the absorption target"
        )
    mu, st, classes = _reduced_pipeline(n, params, 0, 1, grp)
    return ProfitReport(mu, spec, n, params, grp.kind, case.case_id, st.residual, st.method, classes)


def mean_mixture(n: int, params: ParamVector, gamma, group="auto", mode=None, route="direct") -> ProfitReport:
    """Exact mean profit per turn of the random mixture: play A with
    probability gamma, else B, every turn.

    ``route="direct"`` builds the blended one-step matrix; ``route="substitution"``
    rewrites the mixture as pure game B with p_m -> gamma/2 + (1-gamma)*p_m.
    The two are algebraically identical entrywise.
    """
    params = _resolve_mode(n, params, mode)
    if params.exact:
        gamma = Fraction(gamma)
    else:
        gamma = float(gamma)
    if not 0 < gamma < 1:
        raise ValueError(f"mixture weight must lie in (0, 1), got {gamma!r}")
    spec = PatternSpec.mixture(gamma)
    grp = resolve_group(n, params, group)
    if route == "substitution":
        inner = mean_game_b(n, params.mixed(gamma), group=group, mode=mode)
        return ProfitReport(
            inner.mu, spec, n, params, inner.group, inner.case_id,
            inner.residual, "substitution", inner.class_count,
        )
    if route != "direct":
        raise ValueError(f"unknown route {route!r}")
    mu, st, classes = _reduced_pipeline(n, params, 0, 1, grp, mixture_gamma=gamma)
    return ProfitReport(mu, spec, n, params, grp.kind, 0, st.residual, st.method, classes)


def mean_for(n: int, params: ParamVector, pattern: PatternSpec, group="auto", mode=None) -> ProfitReport:
    """Dispatch on the pattern kind."""
    if pattern.kind == "game_b":
        return mean_game_b(n, params, group=group, mode=mode)
    if pattern.kind == "pattern":
        return mean_pattern(n, params, pattern.r, pattern.s, group=group, mode=mode)
    return mean_mixture(n, params, pattern.gamma, group=group, mode=mode)


def full_state_mean(n: int, params: ParamVector, pattern: PatternSpec, mode=None) -> Number:
    """The same mean computed on the unreduced 2^n-state chain.

    Exists solely to validate the symmetry-reduced pipeline; capped at n = 10.
    """
    if n > 10:
        raise ValueError(f"full-state oracle capped at n=10, got n={n}")
    params = _resolve_mode(n, params, mode)
    exact = params.exact
    if pattern.kind == "pattern":
        r, s = pattern.r, pattern.s
        case = classify_boundary(params, n)
    elif pattern.kind == "game_b":
        r, s = 0, 1
        case = classify_boundary(params, n)
        if case.case_id in (2, 4):
            return params.one if case.case_id == 4 else -params.one
        if case.case_id == 6:
            raise UnsupportedBoundary("no single mean for game B with p0=0, p3=1")
    else:
        r, s = 0, 1
        params = params.mixed(pattern.gamma)
        case = ReducibleCase(0, n, ())
    excluded = case.excluded_ints
    pb = build_game_b(n, params)
    pdot = build_game_b(n, params, signed=True)
    pa = build_game_a(n, exact=exact) if r else None
    if exact:
        product = pb.power(s)
        if r:
            product = pa.power(r) @ product
        st = solve_stationary(product, excluded)
        return _fold_mean(st.pi, pa, pb, pdot, r, s)
    pb_d = pb.to_numpy()
    pa_d = pa.to_numpy() if pa is not None else None
    product = np.linalg.matrix_power(pb_d, s)
    if r:
        product = np.linalg.matrix_power(pa_d, r) @ product
    st = solve_stationary(product, excluded)
    return _fold_mean(st.pi, pa_d, pb_d, pdot.to_numpy(), r, s)


# --- literal 3-player closed forms (p1 = p2), the matrix-free oracle -------

_CLOSED_FORM_KEYS = ("B", (1, 1), (1, 2), (2, 1))


def closed_form_n3(params: ParamVector, pattern) -> Number:
    """Rational-function means for 3 players, patterns B, [1,1], [1,2], [2,1].

    Requires p1 == p2; evaluates in the parameter representation (Fraction in,
    Fraction out).
    """
    if not params.symmetric:
        raise ValueError("closed forms assume p1 == p2")
    if isinstance(pattern, PatternSpec):
        pattern = "B" if pattern.kind == "game_b" else (pattern.r, pattern.s)
    if pattern not in _CLOSED_FORM_KEYS:
        raise ValueError(f"no closed form for pattern {pattern!r}")
    p0, p1, _, p3 = params.as_tuple()
    one = params.one
    q0, q1, q3 = one - p0, one - p1, one - p3
    if pattern == "B":
        num = p1 * (p0 + q3) - q3
        den = p0 * p1 + 2 * p0 * q3 + q1 * q3
    elif pattern == (1, 1):
        num = 5 * (2 * p1 * (3 + p0 + q3) - 3 * q0 - 5 * q3)
        den = 2 * (17 + 15 * p0 + 4 * p0 * p1 + 8 * p0 * q3 + 4 * p1 * p3 + 4 * q1 + 19 * q3)
    elif pattern == (2, 1):
        num = 38 * (p1 * (12 + p0 + q3) - 6 * q0 - 7 * q3)
        den = 3 * (367 + 111 * p0 + 8 * p0 * p1 + 16 * p0 * q3 + 8 * p1 * p3 + 8 * q1 + 119 * q3)
    else:  # (1, 2)
        num = 2 * (
            -494 + 287 * p0 - 51 * p0 ** 2 + 181 * p3 - 13 * p0 * p3 - 12 * p0 ** 2 * p3
            + 142 * p3 ** 2 - 40 * p0 * p3 ** 2
            + (520 + 61 * p0 - 65 * p0 ** 2 - 113 * p3 + 130 * p0 * p3 - 28 * p0 ** 2 * p3
               - 65 * p3 ** 2 + 28 * p0 * p3 ** 2) * p1
            - 2 * (1 - p0 - p3) * (13 + 7 * p0 - 7 * p3) * p1 ** 2
        )
        den = 3 * (
            494 + 335 * p0 - 154 * p0 ** 2 - 157 * p3 - 64 * p0 * p3 + 32 * p0 ** 2 * p3
            - 130 * p3 ** 2 - 64 * p0 * p3 ** 2 + 32 * p0 ** 2 * p3 ** 2
            - 2 * (1 - p0 - p3) * (89 - 8 * p0 + 16 * p3 - 16 * p0 * p3) * p1
            + 8 * (1 - p0 - p3) ** 2 * p1 ** 2
        )
    if den == 0:
        raise ZeroDivisionError("closed-form denominator vanished")
    return num / den


def quotient_signed_consistency(n: int, params: ParamVector, group="auto"):
    """Max entrywise difference between the two constructions of the reduced
    signed matrix: quotient of the full signed matrix vs direct reduced build."""
    params = params if params.exact else params.to_float()
    grp = resolve_group(n, params, group)
    qm = build_classes(n, grp)
    via_quotient = quotient(build_game_b(n, params, signed=True), qm)
    direct = reduced_game_b(n, params, qm, signed=True)
    return via_quotient.max_abs_diff(direct)
