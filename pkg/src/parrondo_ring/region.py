"""Mapping the parameter cube: where the combined game wins while game B
loses (the Parrondo region) and the mirror anti-Parrondo region.

Throughout this module p1 = p2, so the free coordinates are (p0, p3, p1) in
the open unit cube.  A point is labeled Parrondo when mu_B <= 0 and the
pattern mean is > 0, anti-Parrondo when mu_B >= 0 and the pattern mean is
< 0.  Reflecting through Lambda(p0, p1, p3) = (1-p3, 1-p1, 1-p0) swaps the
two labels and preserves volume.

Grid scans and Monte Carlo volume estimates share one vectorized engine: the
reduced game-B matrix is affine in the eight numbers p_m, q_m, so a whole
batch of parameter points becomes one stack of small matrices solved by a
single batched LAPACK call.

Also here: the four sufficient conditions for ergodicity of the infinite-ring
spin system, evaluated literally, plus Monte Carlo estimates of the volumes
of the regions they describe.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .games import ParamVector, PatternSpec, neighbor_code
from .means import mean_for, mean_game_b
from .symmetry import SymmetryGroup, build_classes

LABEL_PARRONDO = "parrondo"
LABEL_ANTI = "anti-parrondo"
LABEL_NEITHER = "neither"

#: |mu| below this is treated as exactly zero for the <= / >= label sides
TIE_TOL = 1e-12

_LABEL_BY_CODE = {1: LABEL_PARRONDO, -1: LABEL_ANTI, 0: LABEL_NEITHER}


@dataclass(frozen=True)
class RegionPoint:
    """One classified point of the (p0, p3, p1) cube (p2 = p1 implied)."""

    p0: float
    p3: float
    p1: float
    mu_b: float
    mu_pattern: float
    label: str


def _label_codes(mu_b, mu_pattern):
    """Vectorized label: +1 Parrondo, -1 anti-Parrondo, 0 neither."""
    mb = np.where(np.abs(mu_b) <= TIE_TOL, 0.0, mu_b)
    mp = np.where(np.abs(mu_pattern) <= TIE_TOL, 0.0, mu_pattern)
    codes = np.zeros(np.shape(mb), dtype=np.int8)
    codes = np.where((mb <= 0) & (mp > 0), np.int8(1), codes)
    codes = np.where((mb >= 0) & (mp < 0), np.int8(-1), codes)
    return codes


def classify_point(p0, p1, p3, pattern: PatternSpec, n: int, mode=None) -> RegionPoint:
    """Classify a single point via the exact means pipeline (handles the
    supported boundary faces, unlike the interior-only batch engine)."""
    params = ParamVector.of(p0, p1, p1, p3, exact=False)
    mu_b = float(mean_game_b(n, params, mode=mode).mu)
    mu_pattern = float(mean_for(n, params, pattern, mode=mode).mu)
    code = int(_label_codes(np.float64(mu_b), np.float64(mu_pattern)))
    return RegionPoint(float(p0), float(p3), float(p1), mu_b, mu_pattern, _LABEL_BY_CODE[code])


def symmetry_map(p0, p1, p3):
    """The label-swapping involution (p0, p1, p3) -> (1-p3, 1-p1, 1-p0)."""
    return (1 - p3, 1 - p1, 1 - p0)


# --- vectorized batch engine (interior points, p1 = p2, dihedral classes) ---


@lru_cache(maxsize=8)
def _structure(n: int):
    """Constant matrices (U_m, V_m) with P_B = sum_m p_m U_m + q_m V_m in
    reduced dihedral coordinates, plus the fixed game-A matrix."""
    qm = build_classes(n, SymmetryGroup.dihedral(n))
    d = qm.class_count
    u = np.zeros((4, d, d))
    v = np.zeros((4, d, d))
    for c, rep in enumerate(qm.reps):
        state = int(rep)
        for j in range(n):
            m = neighbor_code(state, j, n)
            t = int(qm.class_of[state ^ (1 << j)])
            if (state >> j) & 1 == 0:
                u[m, c, t] += 1.0 / n  # flip to winner: p_m
                v[m, c, c] += 1.0 / n  # stay loser: q_m
            else:
                v[m, c, t] += 1.0 / n  # flip to loser: q_m
                u[m, c, c] += 1.0 / n  # stay winner: p_m
    pa = 0.5 * (u.sum(axis=0) + v.sum(axis=0))
    return qm, u, v, pa


def _batch_matrices(n, p0, p1, p3):
    """Stacked game-B matrices and signed row sums for a batch of points."""
    _, u, v, pa = _structure(n)
    pm = np.stack([p0, p1, p1, p3], axis=1)  # (G, 4)
    qm_ = 1.0 - pm
    pb = np.einsum("gm,mij->gij", pm, u) + np.einsum("gm,mij->gij", qm_, v)
    u_rows = u.sum(axis=2)  # (4, d)
    v_rows = v.sum(axis=2)
    signed_rows = pm @ u_rows - qm_ @ v_rows  # (G, d)
    return pa, pb, signed_rows


def _batch_stationary(matrices):
    """Stationary row vectors of a (G, d, d) stack of stochastic matrices."""
    g, d, _ = matrices.shape
    a = np.transpose(matrices, (0, 2, 1)) - np.eye(d)
    a[:, -1, :] = 1.0
    b = np.zeros((g, d, 1))
    b[:, -1, 0] = 1.0
    return np.linalg.solve(a, b)[..., 0]


def batch_means(n: int, pattern: PatternSpec, p0, p1, p3, chunk: int = 65536):
    """Game-B and pattern means for arrays of interior cube points.

    Matches the scalar means pipeline to solver precision; used by grid scans
    and Monte Carlo volume estimates where millions of points are needed.
    """
    p0 = np.asarray(p0, dtype=float)
    p1 = np.asarray(p1, dtype=float)
    p3 = np.asarray(p3, dtype=float)
    total = p0.shape[0]
    mu_b = np.empty(total)
    mu_pattern = np.empty(total)
    for start in range(0, total, chunk):
        sl = slice(start, min(start + chunk, total))
        mu_b[sl], mu_pattern[sl] = _batch_means_chunk(n, pattern, p0[sl], p1[sl], p3[sl])
    return mu_b, mu_pattern


def _batch_means_chunk(n, pattern, p0, p1, p3):
    pa, pb, signed_rows = _batch_matrices(n, p0, p1, p3)
    pi_b = _batch_stationary(pb)
    mu_b = np.einsum("gi,gi->g", pi_b, signed_rows)

    if pattern.kind == "game_b":
        return mu_b, mu_b.copy()
    if pattern.kind == "mixture":
        g = float(pattern.gamma)
        ph = [g * 0.5 + (1.0 - g) * p for p in (p0, p1, p3)]
        _, pb_h, signed_h = _batch_matrices(n, ph[0], ph[1], ph[2])
        pi_h = _batch_stationary(pb_h)
        return mu_b, np.einsum("gi,gi->g", pi_h, signed_h)

    r, s = pattern.r, pattern.s
    pa_r = np.linalg.matrix_power(pa, r)
    product = pb
    for _ in range(s - 1):
        product = product @ pb
    product = pa_r[None, :, :] @ product
    pi = _batch_stationary(product)
    w = pi @ pa_r
    acc = np.zeros(p0.shape[0])
    for v in range(s):
        acc += np.einsum("gi,gi->g", w, signed_rows)
        if v < s - 1:
            w = np.einsum("gi,gij->gj", w, pb)
    return mu_b, acc / (r + s)


@dataclass
class ScanResult:
    """Regular-grid classification of the open cube, in grid-index order
    (p0 outermost, then p3, then p1)."""

    n: int
    pattern: PatternSpec
    resolution: int
    subcube: tuple[tuple[float, float], ...]
    p0: np.ndarray
    p3: np.ndarray
    p1: np.ndarray
    mu_b: np.ndarray
    mu_pattern: np.ndarray
    codes: np.ndarray
    volumes: dict

    @property
    def labels(self):
        return [_LABEL_BY_CODE[int(c)] for c in self.codes]

    def rows(self):
        for i in range(len(self.p0)):
            yield (
                float(self.p0[i]),
                float(self.p3[i]),
                float(self.p1[i]),
                float(self.mu_b[i]),
                float(self.mu_pattern[i]),
                _LABEL_BY_CODE[int(self.codes[i])],
            )


def scan(n: int, pattern: PatternSpec, resolution: int, subcube=None, chunk: int = 65536) -> ScanResult:
    """Midpoint-rule scan of the (p0, p3, p1) cube (or a sub-box of it).

    Returns per-point means and labels plus volume estimates for the Parrondo
    and anti-Parrondo regions.  The volume error bar counts cells whose label
    differs from a grid neighbor, i.e. cells straddling a boundary surface.
    """
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    if subcube is None:
        subcube = ((0.0, 1.0), (0.0, 1.0), (0.0, 1.0))
    subcube = tuple((float(lo), float(hi)) for lo, hi in subcube)
    axes = []
    for lo, hi in subcube:
        if not 0.0 <= lo < hi <= 1.0:
            raise ValueError(f"bad subcube axis ({lo}, {hi})")
        h = (hi - lo) / resolution
        axes.append(lo + h * (np.arange(resolution) + 0.5))
    grid0, grid3, grid1 = np.meshgrid(axes[0], axes[1], axes[2], indexing="ij")
    p0 = grid0.ravel()
    p3 = grid3.ravel()
    p1 = grid1.ravel()
    mu_b, mu_pattern = batch_means(n, pattern, p0, p1, p3, chunk=chunk)
    codes = _label_codes(mu_b, mu_pattern)

    cell_volume = 1.0
    for lo, hi in subcube:
        cell_volume *= (hi - lo) / resolution
    cube = codes.reshape(resolution, resolution, resolution)
    mixed = np.zeros_like(cube, dtype=bool)
    for axis in range(3):
        diff = np.diff(cube, axis=axis) != 0
        pad_lo = [(0, 0)] * 3
        pad_lo[axis] = (0, 1)
        pad_hi = [(0, 0)] * 3
        pad_hi[axis] = (1, 0)
        mixed |= np.pad(diff, pad_lo)
        mixed |= np.pad(diff, pad_hi)
    boundary_volume = float(mixed.sum()) * cell_volume
    volumes = {}
    for code, label in ((1, LABEL_PARRONDO), (-1, LABEL_ANTI)):
        volumes[label] = (float((codes == code).sum()) * cell_volume, boundary_volume)
    return ScanResult(
        n, pattern, resolution, subcube, p0, p3, p1, mu_b, mu_pattern, codes, volumes
    )


def sample_volumes(n: int, pattern: PatternSpec, samples: int, seed, chunk: int = 65536) -> dict:
    """Monte Carlo volumes of the Parrondo / anti-Parrondo regions with
    binomial standard errors."""
    rng = np.random.default_rng(seed)
    p0, p3, p1 = rng.random((3, samples))
    mu_b, mu_pattern = batch_means(n, pattern, p0, p1, p3, chunk=chunk)
    codes = _label_codes(mu_b, mu_pattern)
    out = {}
    for code, label in ((1, LABEL_PARRONDO), (-1, LABEL_ANTI)):
        k = int((codes == code).sum())
        frac = k / samples
        se = np.sqrt(frac * (1.0 - frac) / samples)
        out[label] = (frac, float(se))
    return out


# --- ergodicity conditions for the infinite-ring spin system ----------------


@dataclass(frozen=True)
class ConditionReport:
    """Truth values of the four sufficient ergodicity conditions."""

    holds: tuple[bool, bool, bool, bool]
    in_union: bool
    p_bar: float

    def __post_init__(self):
        if self.in_union != any(self.holds):
            raise ValueError("in_union must be the disjunction of the four conditions")


def _condition_flags(p0, p1, p2, p3):
    """Vectorized evaluation of the four conditions; scalars or arrays."""
    p0, p1, p2, p3 = (np.asarray(v, dtype=float) for v in (p0, p1, p2, p3))
    cond_a = np.maximum(np.abs(p0 - p1), np.abs(p2 - p3)) + np.maximum(
        np.abs(p0 - p2), np.abs(p1 - p3)
    ) < 1
    lo = np.minimum(p0, p3)
    hi = np.maximum(p0, p3)
    cond_b = (0 < lo) & (lo <= np.minimum(p1, p2)) & (np.maximum(p1, p2) <= hi) & (hi < 1)
    bundle_hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p1 + p2 - p3))
    bundle_lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p1 + p2 - p3))
    cond_c = (bundle_hi - p3 < p0 / 2) & (p0 / 2 < bundle_lo)
    p_bar = (p0 + p1 + p2 + p3) / 4
    cond_d = np.ones_like(p_bar, dtype=bool)
    for p in (p0, p1, p2, p3):
        cond_d &= (p > 2 * p_bar - 1) & (p < 2 * p_bar) & (p > 0) & (p < 1)
    return cond_a, cond_b, cond_c, cond_d, p_bar


def ergodicity_conditions(params: ParamVector, gamma=None) -> ConditionReport:
    """Evaluate the four conditions, after the mixture substitution
    p_m -> gamma/2 + (1-gamma)*p_m when a mixture weight is given."""
    if gamma is not None:
        params = params.mixed(gamma)
    a, b, c, d, p_bar = _condition_flags(*params.as_floats())
    holds = (bool(a), bool(b), bool(c), bool(d))
    return ConditionReport(holds, any(holds), float(p_bar))


@dataclass(frozen=True)
class ConditionVolumes:
    """Monte Carlo volume estimates (value, standard error) of the four
    condition regions and their union, in the p1 = p2 cube."""

    samples: int
    seed: object
    estimates: dict


def condition_volumes(samples: int, seed) -> ConditionVolumes:
    if samples < 10 ** 4:
        raise ValueError(f"need at least 10^4 samples, got {samples}")
    rng = np.random.default_rng(seed)
    p0, p1, p3 = rng.random((3, samples))
    a, b, c, d, _ = _condition_flags(p0, p1, p1, p3)
    union = a | b | c | d
    estimates = {}
    for name, flags in (("a", a), ("b", b), ("c", c), ("d", d), ("union", union)):
        frac = float(flags.mean())
        se = float(np.sqrt(frac * (1.0 - frac) / samples))
        estimates[name] = (frac, se)
    return ConditionVolumes(samples, seed, estimates)
