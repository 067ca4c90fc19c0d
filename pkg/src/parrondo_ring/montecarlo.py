"""Simulation of the ensemble game and strong-law verification.

One turn: pick a player uniformly at random, decide which game the schedule
prescribes, toss the corresponding coin (fair for game A, the neighbor-status
coin for game B).  Heads pays +1 and makes the player a winner; tails pays -1
and makes the player a loser.  The running average of payoffs converges
almost surely to the exact mean computed by the means module, which is what
``slln_check`` tests.

Randomness comes from numpy's default generator.  Replication streams are
derived as ``SeedSequence(seed).spawn(replications)``, so a (seed, inputs)
pair fixes every trajectory bit for bit.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .games import Configuration, ParamVector, PatternSpec
from .means import mean_for

_CHUNK = 1 << 15
_MAX_CHECKPOINTS = 10 ** 4
_DETAILED_CAP = 10 ** 5
Z_FLAG_THRESHOLD = 4.0


@dataclass(frozen=True)
class SimulationRun:
    """Outcome of one simulated trajectory."""

    n: int
    params: tuple[float, float, float, float]
    pattern: PatternSpec
    turns: int
    seed: object
    initial: int
    final_state: int
    total: int
    final_mean: float
    trajectory: tuple[tuple[int, float], ...]
    batch_means: tuple[float, ...]

    def standard_error(self) -> float:
        """Batch-means estimate of the standard error of ``final_mean``;
        robust to the serial correlation of the payoff sequence."""
        b = len(self.batch_means)
        if b < 2:
            return math.nan
        mean = sum(self.batch_means) / b
        var = sum((m - mean) ** 2 for m in self.batch_means) / (b - 1)
        return math.sqrt(var / b)


def _pattern_code(pattern: PatternSpec):
    if pattern.kind == "game_b":
        return 0, 0, 1, 0.0
    if pattern.kind == "pattern":
        return 1, pattern.r, pattern.s, 0.0
    return 2, 0, 1, float(pattern.gamma)


def simulate(
    n: int,
    params: ParamVector,
    pattern: PatternSpec,
    turns: int,
    seed,
    initial: Configuration | int | None = None,
    record_trajectory: bool = True,
    batches: int = 100,
) -> SimulationRun:
    """Run the nonhomogeneous ensemble game for the given number of turns.

    ``initial`` may be a Configuration, a state code, or None for a uniform
    random start.  Identical inputs and seed reproduce the run exactly.
    """
    if turns < 1:
        raise ValueError(f"turns must be >= 1, got {turns}")
    pfloats = params.as_floats()
    kind, r, s, gamma = _pattern_code(pattern)
    rng = np.random.default_rng(seed)
    if initial is None:
        x = int(rng.integers(0, 1 << n))
    elif isinstance(initial, Configuration):
        x = initial.to_int()
    else:
        x = int(initial)
        if not 0 <= x < (1 << n):
            raise ValueError(f"initial state {x} out of range for n={n}")
    start = x

    left = [(j - 1) % n for j in range(n)]
    right = [(j + 1) % n for j in range(n)]
    set_bit = [1 << j for j in range(n)]
    clear_bit = [~(1 << j) for j in range(n)]
    pb = list(pfloats)

    step = -(-turns // _MAX_CHECKPOINTS) if record_trajectory else 0
    next_checkpoint = step if record_trajectory else turns + 1
    trajectory: list[tuple[int, float]] = []
    batch_size = turns // batches if turns >= batches else 0
    next_batch_end = batch_size if batch_size else turns + 1
    batch_means: list[float] = []
    batch_start_total = 0

    total = 0
    done = 0
    period = r + s
    phase = 0
    while done < turns:
        block = min(_CHUNK, turns - done)
        players = rng.integers(0, n, size=block).tolist()
        coins = rng.random(block).tolist()
        gcoins = rng.random(block).tolist() if kind == 2 else None
        for k in range(block):
            j = players[k]
            if kind == 1:
                if phase < r:
                    pc = 0.5
                else:
                    pc = pb[2 * ((x >> left[j]) & 1) + ((x >> right[j]) & 1)]
                phase += 1
                if phase == period:
                    phase = 0
            elif kind == 2 and gcoins[k] < gamma:
                pc = 0.5
            else:
                pc = pb[2 * ((x >> left[j]) & 1) + ((x >> right[j]) & 1)]
            if coins[k] < pc:
                x |= set_bit[j]
                total += 1
            else:
                x &= clear_bit[j]
                total -= 1
            turn = done + k + 1
            if turn == next_checkpoint:
                trajectory.append((turn, total / turn))
                next_checkpoint += step
            if turn == next_batch_end:
                batch_means.append((total - batch_start_total) / batch_size)
                batch_start_total = total
                next_batch_end += batch_size
        done += block
    if record_trajectory and (not trajectory or trajectory[-1][0] != turns):
        trajectory.append((turns, total / turns))

    return SimulationRun(
        n=n,
        params=pfloats,
        pattern=pattern,
        turns=turns,
        seed=seed,
        initial=start,
        final_state=x,
        total=total,
        final_mean=total / turns,
        trajectory=tuple(trajectory),
        batch_means=tuple(batch_means),
    )


def simulate_detailed(n, params, pattern, turns, seed, initial=None):
    """Small-run variant that records every turn: lists of (played game A?,
    player index, payoff, state after).  For tests and diagnostics only."""
    if turns > _DETAILED_CAP:
        raise ValueError(f"detailed mode capped at {_DETAILED_CAP} turns")
    pfloats = params.as_floats()
    kind, r, s, gamma = _pattern_code(pattern)
    rng = np.random.default_rng(seed)
    if initial is None:
        x = int(rng.integers(0, 1 << n))
    elif isinstance(initial, Configuration):
        x = initial.to_int()
    else:
        x = int(initial)
    records = []
    done = 0
    phase = 0
    while done < turns:
        block = min(_CHUNK, turns - done)
        players = rng.integers(0, n, size=block).tolist()
        coins = rng.random(block).tolist()
        gcoins = rng.random(block).tolist() if kind == 2 else None
        for k in range(block):
            j = players[k]
            if kind == 1:
                is_a = phase < r
                phase += 1
                if phase == r + s:
                    phase = 0
            elif kind == 2:
                is_a = gcoins[k] < gamma
            else:
                is_a = False
            m = 2 * ((x >> ((j - 1) % n)) & 1) + ((x >> ((j + 1) % n)) & 1)
            pc = 0.5 if is_a else pfloats[m]
            if coins[k] < pc:
                x |= 1 << j
                payoff = 1
            else:
                x &= ~(1 << j)
                payoff = -1
            records.append((is_a, j, payoff, x))
        done += block
    return records


@dataclass(frozen=True)
class SllnReport:
    """Replication summary: per-replication z-scores of the simulated means
    against the exact mean, using batch-means standard errors."""

    n: int
    pattern: PatternSpec
    turns: int
    replications: int
    seed: object
    reference_mu: float
    rep_means: tuple[float, ...]
    rep_se: tuple[float, ...]
    rep_z: tuple[float, ...]
    combined_z: float
    flagged: bool


def _zscore(diff: float, se: float) -> float:
    if se == 0 or math.isnan(se):
        return 0.0 if diff == 0 else math.inf
    return diff / se


def _rep_worker(args):
    n, params_floats, pattern, turns, child_seed = args
    run = simulate(
        n,
        ParamVector(*params_floats),
        pattern,
        turns,
        child_seed,
        record_trajectory=False,
    )
    return run.final_mean, run.batch_means


def slln_check(
    n: int,
    params: ParamVector,
    pattern: PatternSpec,
    turns: int,
    replications: int,
    seed,
    reference_mu: float | None = None,
    jobs: int = 1,
) -> SllnReport:
    """Run independent replications and compare their final means against the
    exact mean; a replication with |z| > 4 flags the report."""
    if replications < 1:
        raise ValueError("need at least one replication")
    if reference_mu is None:
        reference_mu = float(mean_for(n, params, pattern).mu)
    children = np.random.SeedSequence(seed).spawn(replications)
    tasks = [(n, params.as_floats(), pattern, turns, child) for child in children]
    if jobs > 1 and replications > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, replications)) as pool:
            outcomes = list(pool.map(_rep_worker, tasks))
    else:
        outcomes = [_rep_worker(t) for t in tasks]

    rep_means = tuple(mean for mean, _ in outcomes)
    rep_se = []
    rep_z = []
    for mean, batch in outcomes:
        b = len(batch)
        if b >= 2:
            bm = sum(batch) / b
            var = sum((v - bm) ** 2 for v in batch) / (b - 1)
            se = math.sqrt(var / b)
        else:
            se = math.nan
        rep_se.append(se)
        rep_z.append(_zscore(mean - reference_mu, se))
    grand = sum(rep_means) / replications
    if replications >= 2:
        spread = math.sqrt(
            sum((m - grand) ** 2 for m in rep_means) / (replications - 1) / replications
        )
    else:
        spread = math.nan
    combined_z = _zscore(grand - reference_mu, spread)
    flagged = any(abs(z) > Z_FLAG_THRESHOLD for z in rep_z)
    return SllnReport(
        n=n,
        pattern=pattern,
        turns=turns,
        replications=replications,
        seed=seed,
        reference_mu=reference_mu,
        rep_means=rep_means,
        rep_se=tuple(rep_se),
        rep_z=tuple(rep_z),
        combined_z=combined_z,
        flagged=flagged,
    )
