"""Stationary distributions of the (reduced) game chains.

Interior parameters give an irreducible aperiodic chain on all states.  On
the boundary of the parameter cube only six regimes are supported; in some of
them a few states are transient and must be dropped from the linear system
(the all-zeros state when p0 = 1, the all-ones state when p3 = 0, both when
p0 = 1 and p3 = 0, and the two alternating states when p0 = 0, p3 = 1 with n
even).  Anything else on the boundary is rejected rather than guessed.

Solvers: exact Gaussian elimination on Fraction rows, dense LU for float
matrices, and power iteration - both as an independent cross-check and as the
only practical route when the pattern product is too large to materialize.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .games import Configuration, ParamVector, TransitionMatrix, all_ones, all_zeros

#: largest dimension for which the direct dense linear solve is used
DENSE_SOLVE_LIMIT = 3000

RESIDUAL_TARGET = 1e-12
POWER_TOL = 1e-13
POWER_MAX_ITERS = 10 ** 6


class UnsupportedBoundary(ValueError):
    """Boundary parameters outside the supported taxonomy: no ergodicity
    guarantee is available, so no stationary distribution is computed."""


class SolverFailure(RuntimeError):
    """The residual target was not met."""


class NonStochastic(ValueError):
    """A row of the matrix (restricted to the retained states) does not sum to 1."""


def alternating_states(n: int) -> tuple[Configuration, Configuration]:
    """The two period-2 colorings 0101...01 and 1010...10 (n even)."""
    a = Configuration(n, tuple(i % 2 for i in range(n)))
    b = Configuration(n, tuple((i + 1) % 2 for i in range(n)))
    return a, b


@dataclass(frozen=True)
class ReducibleCase:
    """Boundary regime of the parameter vector.

    ``case_id`` 0 is the interior.  ``excluded_states`` lists the states that
    are transient for the pattern products ending in a game-B step and must
    be excluded from their stationary solve.  Pure game B needs extra care in
    the absorbing regimes (ids 2, 4, 6); see the means module.
    """

    case_id: int
    n: int
    excluded_states: tuple[Configuration, ...]

    @property
    def excluded_ints(self) -> frozenset[int]:
        return frozenset(c.to_int() for c in self.excluded_states)

    @property
    def interior(self) -> bool:
        return self.case_id == 0


def classify_boundary(params: ParamVector, n: int) -> ReducibleCase:
    """Map a parameter vector to its boundary regime (0 = interior, 1-6 on
    the supported boundary faces), raising UnsupportedBoundary elsewhere."""
    p0, p1, p2, p3 = params.as_tuple()
    interior = [0 < p < 1 for p in (p0, p1, p2, p3)]
    if all(interior):
        return ReducibleCase(0, n, ())
    if not (interior[1] and interior[2]):
        raise UnsupportedBoundary(
            f"p1={p1!r}, p2={p2!r}: boundary values of p1/p2 have no ergodicity guarantee"
        )
    edge0 = None if interior[0] else int(p0)  # 0 or 1 when on the boundary
    edge3 = None if interior[3] else int(p3)
    if edge0 == 1 and edge3 is None:
        return ReducibleCase(1, n, (all_zeros(n),))
    if edge0 == 0 and edge3 is None:
        return ReducibleCase(2, n, ())
    if edge0 is None and edge3 == 0:
        return ReducibleCase(3, n, (all_ones(n),))
    if edge0 is None and edge3 == 1:
        return ReducibleCase(4, n, ())
    if edge0 == 1 and edge3 == 0:
        return ReducibleCase(5, n, (all_zeros(n), all_ones(n)))
    if edge0 == 0 and edge3 == 1:
        excluded = alternating_states(n) if n % 2 == 0 else ()
        return ReducibleCase(6, n, excluded)
    raise UnsupportedBoundary(f"p0={p0!r}, p3={p3!r}: unsupported boundary combination")


@dataclass
class StationaryResult:
    """Stationary vector over all row indices, zero outside ``support``."""

    pi: object  # np.ndarray (float mode) or list[Fraction]
    support: tuple[int, ...]
    method: str
    residual: float

    @property
    def exact(self) -> bool:
        return not isinstance(self.pi, np.ndarray)


def _check_kept_rows(matrix_rows, keep, exact):
    keep_set = set(keep)
    tol = 0 if exact else 1e-9
    one = Fraction(1) if exact else 1.0
    for i in keep:
        total = sum(v for j, v in matrix_rows[i].items() if j in keep_set)
        if abs(total - one) > tol:
            raise NonStochastic(
                f"row {i} sums to {float(total)!r} over the retained states; "
                "either the matrix is not stochastic or the excluded set is wrong"
            )


def solve_stationary(pbar, excluded=frozenset()) -> StationaryResult:
    """Unique stationary distribution of a stochastic matrix, excluding the
    given transient row indices from the solve and reinserting them with
    probability zero.

    Accepts a TransitionMatrix (exact or float rows) or a dense numpy array.
    """
    excluded = frozenset(excluded)
    if isinstance(pbar, TransitionMatrix):
        if not pbar.stochastic:
            raise NonStochastic("matrix is flagged non-stochastic")
        if pbar.exact:
            return _solve_exact(pbar, excluded)
        dense = pbar.to_numpy()
    else:
        dense = np.asarray(pbar, dtype=float)
    if dense.shape[0] > DENSE_SOLVE_LIMIT:
        raise ValueError(
            f"dimension {dense.shape[0]} too large for the dense solver; "
            "use stationary_from_factors"
        )
    return _solve_dense(dense, excluded)


def _solve_exact(pbar: TransitionMatrix, excluded) -> StationaryResult:
    keep = [i for i in range(pbar.dim) if i not in excluded]
    _check_kept_rows(pbar.rows, keep, exact=True)
    d = len(keep)
    local = {s: i for i, s in enumerate(keep)}
    # columns of (P^T - I) restricted to the kept states; last equation = normalization
    a = [[Fraction(0)] * d for _ in range(d)]
    for i_local, s in enumerate(keep):
        for t, v in pbar.rows[s].items():
            if t in local:
                a[local[t]][i_local] += Fraction(v)
        a[i_local][i_local] -= 1
    a[d - 1] = [Fraction(1)] * d
    b = [Fraction(0)] * (d - 1) + [Fraction(1)]
    x = _gauss_exact(a, b)
    pi = [Fraction(0)] * pbar.dim
    for s, value in zip(keep, x):
        if value < 0:
            raise SolverFailure(f"negative stationary mass {value} at index {s}")
        pi[s] = value
    return StationaryResult(pi, tuple(keep), "exact-gauss", 0.0)


def _gauss_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    d = len(a)
    for col in range(d):
        pivot = next((r for r in range(col, d) if a[r][col] != 0), None)
        if pivot is None:
            raise SolverFailure("singular system: the retained chain is not irreducible")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            b[col], b[pivot] = b[pivot], b[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        b[col] *= inv
        for r in range(d):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [rv - factor * cv for rv, cv in zip(a[r], a[col])]
                b[r] -= factor * b[col]
    return b


def _solve_dense(dense: np.ndarray, excluded) -> StationaryResult:
    dim = dense.shape[0]
    keep = [i for i in range(dim) if i not in excluded]
    sub = dense[np.ix_(keep, keep)]
    row_sums = sub.sum(axis=1)
    if np.max(np.abs(row_sums - 1.0)) > 1e-9:
        worst = int(np.argmax(np.abs(row_sums - 1.0)))
        raise NonStochastic(
            f"row {keep[worst]} sums to {row_sums[worst]!r} over the retained states; "
            "either the matrix is not stochastic or the excluded set is wrong"
        )
    d = len(keep)
    a = sub.T - np.eye(d)
    a[-1, :] = 1.0
    b = np.zeros(d)
    b[-1] = 1.0
    try:
        x = np.linalg.solve(a, b)
        method = "dense-lu"
    except np.linalg.LinAlgError:
        x = None
        method = "dense-lstsq"
    if x is None or _restricted_residual(sub, x) > RESIDUAL_TARGET:
        stacked = np.vstack([sub.T - np.eye(d), np.ones(d)])
        rhs = np.zeros(d + 1)
        rhs[-1] = 1.0
        x, *_ = np.linalg.lstsq(stacked, rhs, rcond=None)
        method = "dense-lstsq"
    if x.min() < -1e-12:
        raise SolverFailure(f"negative stationary mass {x.min():.3e}")
    x = np.clip(x, 0.0, None)
    x /= x.sum()
    residual = _restricted_residual(sub, x)
    if residual > RESIDUAL_TARGET:
        raise SolverFailure(f"residual {residual:.3e} exceeds {RESIDUAL_TARGET:.0e}")
    pi = np.zeros(dim)
    pi[keep] = x
    return StationaryResult(pi, tuple(keep), method, float(residual))


def _restricted_residual(sub, x):
    return float(np.max(np.abs(x @ sub - x)))


def power_iteration_stationary(
    pbar, excluded=frozenset(), tol: float = POWER_TOL, max_iters: int = POWER_MAX_ITERS
) -> StationaryResult:
    """Stationary distribution by repeated multiplication; the independent
    counterpart of the direct linear solve."""
    dense = pbar.to_numpy() if isinstance(pbar, TransitionMatrix) else np.asarray(pbar, float)
    return stationary_from_factors([dense], excluded, tol=tol, max_iters=max_iters)


def stationary_from_factors(
    factors, excluded=frozenset(), tol: float = POWER_TOL, max_iters: int = POWER_MAX_ITERS
) -> StationaryResult:
    """Power iteration for the product of a factor sequence, never forming
    the product matrix.  Factors may be dense arrays or scipy sparse; each
    iteration applies them left to right to the current row vector.

    The factor list may also contain (matrix, repeat) pairs.
    """
    seq = []
    for f in factors:
        if isinstance(f, tuple):
            matrix, repeat = f
            seq.extend([matrix] * repeat)
        else:
            seq.append(f)
    seq = [f.to_numpy() if isinstance(f, TransitionMatrix) else f for f in seq]
    dim = seq[0].shape[0]
    w = np.full(dim, 1.0 / dim)
    for i in excluded:
        w[i] = 0.0
    w /= w.sum()
    residual = np.inf
    for iteration in range(max_iters):
        nxt = w
        for f in seq:
            nxt = nxt @ f
        nxt = np.asarray(nxt).ravel()
        nxt = np.clip(nxt, 0.0, None)
        nxt /= nxt.sum()
        residual = float(np.max(np.abs(nxt - w)))
        w = nxt
        if residual < tol:
            break
    else:
        raise SolverFailure(f"power iteration did not reach {tol:.0e} in {max_iters} steps")
    for i in excluded:
        if w[i] > 1e-12:
            raise SolverFailure(f"mass {w[i]:.3e} stayed on excluded index {i}")
        w[i] = 0.0
    w /= w.sum()
    keep = tuple(i for i in range(dim) if i not in excluded)
    return StationaryResult(w, keep, "power-iteration", residual)


def pattern_stationary(n: int, params: ParamVector, r: int, s: int, group=None) -> StationaryResult:
    """Stationary distribution of the reduced pattern product, with the
    boundary-regime exclusions applied."""
    from .symmetry import SymmetryGroup, build_classes, reduced_game_a, reduced_game_b

    if r < 0 or s < 1:
        raise ValueError(f"need r >= 0 and s >= 1, got r={r}, s={s}")
    if group is None:
        group = SymmetryGroup.dihedral(n) if params.symmetric else SymmetryGroup.cyclic(n)
    case = classify_boundary(params, n)
    qm = build_classes(n, group)
    excluded = frozenset(qm.class_index(state) for state in case.excluded_ints)
    pb = reduced_game_b(n, params, qm)
    if params.exact:
        product = pb.power(s)
        if r:
            product = reduced_game_a(n, qm, exact=True).power(r) @ product
        return _solve_exact(product, excluded)
    pb_dense = pb.to_numpy()
    product = np.linalg.matrix_power(pb_dense, s)
    if r:
        pa_dense = reduced_game_a(n, qm).to_numpy()
        product = np.linalg.matrix_power(pa_dense, r) @ product
    return _solve_dense(product, excluded)
