"""Core game objects: player-ring configurations, win-probability parameters,
play schedules, and the one-step transition matrices of games A and B.

Game B is the spatially dependent game: the chosen player tosses a coin whose
heads probability p_m depends on the win/loss status of the two ring
neighbors, encoded as m = 2*left + right.  Game A is the fair special case
(all p_m = 1/2).  The "signed" variant of a transition matrix negates every
loss-probability entry so that its row sums give expected one-turn payoffs.

Arithmetic is dual-mode: entries are `fractions.Fraction` when the parameters
are exact rationals, `float` otherwise.  The same builder code serves both.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import numpy as np

Number = Union[Fraction, float]

#: dimension below which dense numpy arrays are preferred over dict rows
DENSE_LIMIT = 256


def _validate_prob(name, value):
    if not 0 <= value <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class Configuration:
    """Win/loss status of all n players on the ring (1 = winner, 0 = loser).

    Player i (1-based) is stored in ``bits[i-1]``; indexing is circular, so
    player 0 means player n and player n+1 means player 1.  The canonical
    integer encoding puts player i at bit i-1, which makes rotation of the
    ring a bit rotation of the code.
    """

    n: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"need at least 3 players, got n={self.n}")
        if len(self.bits) != self.n:
            raise ValueError(f"expected {self.n} bits, got {len(self.bits)}")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @classmethod
    def from_int(cls, n: int, code: int) -> "Configuration":
        if not 0 <= code < (1 << n):
            raise ValueError(f"code {code} out of range for n={n}")
        return cls(n, tuple((code >> i) & 1 for i in range(n)))

    def to_int(self) -> int:
        code = 0
        for i, b in enumerate(self.bits):
            code |= b << i
        return code

    def bit(self, i: int) -> int:
        """Status of player i with circular indexing (i may be 0 or n+1)."""
        return self.bits[(i - 1) % self.n]

    def flipped(self, i: int) -> "Configuration":
        """The configuration that differs from this one at player i only."""
        j = (i - 1) % self.n
        return Configuration(self.n, self.bits[:j] + (1 - self.bits[j],) + self.bits[j + 1:])

    def __str__(self):
        return "".join(str(b) for b in self.bits)


def all_zeros(n: int) -> Configuration:
    return Configuration(n, (0,) * n)


def all_ones(n: int) -> Configuration:
    return Configuration(n, (1,) * n)


def neighbor_index(x: Configuration, i: int) -> int:
    """Neighbor status code m = 2*x_{i-1} + x_{i+1} of player i, in {0,1,2,3}."""
    if not 1 <= i <= x.n:
        raise ValueError(f"player index {i} out of range 1..{x.n}")
    return 2 * x.bit(i - 1) + x.bit(i + 1)


def neighbor_code(state: int, j: int, n: int) -> int:
    """Integer-encoding fast path of :func:`neighbor_index` (j is 0-based)."""
    return 2 * ((state >> ((j - 1) % n)) & 1) + ((state >> ((j + 1) % n)) & 1)


@dataclass(frozen=True)
class ParamVector:
    """The four win probabilities of game B, indexed by neighbor status.

    All four values share one number representation: `Fraction` for exact
    arithmetic, `float` otherwise.  The complements q_m = 1 - p_m are then
    exact in the chosen representation, which the signed-matrix construction
    relies on.
    """

    p0: Number
    p1: Number
    p2: Number
    p3: Number

    def __post_init__(self):
        kinds = {isinstance(v, Fraction) for v in self.as_tuple()}
        if len(kinds) != 1:
            raise ValueError("p0..p3 must all be Fraction or all be float")
        for name, v in zip(("p0", "p1", "p2", "p3"), self.as_tuple()):
            _validate_prob(name, v)

    @classmethod
    def of(cls, p0, p1, p2, p3, exact: bool = False) -> "ParamVector":
        conv = Fraction if exact else float
        return cls(conv(p0), conv(p1), conv(p2), conv(p3))

    @classmethod
    def parse(cls, text: str) -> "ParamVector":
        """Parse "p0,p1,p2,p3"; any fraction token like 4/25 makes all exact."""
        tokens = [t.strip() for t in text.split(",")]
        if len(tokens) not in (3, 4):
            raise ValueError(f"expected 3 or 4 comma-separated probabilities, got {text!r}")
        if len(tokens) == 3:  # p2 := p1
            tokens = [tokens[0], tokens[1], tokens[1], tokens[2]]
        exact = any("/" in t for t in tokens)
        conv = Fraction if exact else float
        return cls(*(conv(t) for t in tokens))

    def as_tuple(self) -> tuple[Number, Number, Number, Number]:
        return (self.p0, self.p1, self.p2, self.p3)

    def as_floats(self) -> tuple[float, float, float, float]:
        return tuple(float(v) for v in self.as_tuple())

    def p(self, m: int) -> Number:
        return self.as_tuple()[m]

    def q(self, m: int) -> Number:
        return self.one - self.as_tuple()[m]

    @property
    def one(self) -> Number:
        return Fraction(1) if self.exact else 1.0

    @property
    def exact(self) -> bool:
        return isinstance(self.p0, Fraction)

    @property
    def symmetric(self) -> bool:
        """True when p1 == p2, i.e. only the neighbor winner count matters."""
        return self.p1 == self.p2

    def coupled(self) -> "ParamVector":
        """The payoff-reversed parameter vector (q3, q2, q1, q0)."""
        one = self.one
        return ParamVector(one - self.p3, one - self.p2, one - self.p1, one - self.p0)

    def mixed(self, gamma: Number) -> "ParamVector":
        """Parameters of the gamma-mixture played as a single game:
        p_m -> gamma/2 + (1 - gamma)*p_m."""
        if not 0 < gamma < 1:
            raise ValueError(f"mixture weight must lie in (0, 1), got {gamma!r}")
        if self.exact:
            g = Fraction(gamma)
            return ParamVector(*(g / 2 + (1 - g) * p for p in self.as_tuple()))
        g = float(gamma)
        return ParamVector(*(g * 0.5 + (1.0 - g) * p for p in self.as_floats()))

    def to_float(self) -> "ParamVector":
        return ParamVector(*self.as_floats())

    def label(self) -> str:
        if self.exact:
            return ",".join(str(v) for v in self.as_tuple())
        return ",".join(repr(v) for v in self.as_tuple())


FAIR = ParamVector(0.5, 0.5, 0.5, 0.5)
FAIR_EXACT = ParamVector(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))


@dataclass(frozen=True)
class PatternSpec:
    """Play schedule: pure game B, the periodic pattern [r, s] (r turns of A
    then s turns of B, repeated), or the random mixture (gamma, 1-gamma)."""

    kind: str  # "game_b" | "pattern" | "mixture"
    r: int = 0
    s: int = 0
    gamma: Number | None = None

    def __post_init__(self):
        if self.kind == "pattern":
            if self.r < 1 or self.s < 1:
                raise ValueError(f"pattern requires r >= 1 and s >= 1, got [{self.r},{self.s}]")
        elif self.kind == "mixture":
            if self.gamma is None or not 0 < self.gamma < 1:
                raise ValueError(f"mixture weight must lie in (0, 1), got {self.gamma!r}")
        elif self.kind != "game_b":
            raise ValueError(f"unknown pattern kind {self.kind!r}")

    @classmethod
    def game_b(cls) -> "PatternSpec":
        return cls("game_b")

    @classmethod
    def pattern(cls, r: int, s: int) -> "PatternSpec":
        return cls("pattern", r=r, s=s)

    @classmethod
    def mixture(cls, gamma: Number) -> "PatternSpec":
        return cls("mixture", gamma=gamma)

    @property
    def period(self) -> int:
        return self.r + self.s if self.kind == "pattern" else 1

    def label(self) -> str:
        if self.kind == "game_b":
            return "B"
        if self.kind == "pattern":
            return f"[{self.r},{self.s}]"
        return f"mixture({self.gamma})"


class TransitionMatrix:
    """Square matrix with sparse dict rows, over full states or classes.

    ``rows[i]`` maps column index -> entry.  Entries are Fractions or floats.
    When ``stochastic`` is set, every row sums to one (within representation
    tolerance); signed payoff matrices leave it unset.
    """

    def __init__(self, dim: int, rows: list[dict], stochastic: bool = True):
        if len(rows) != dim:
            raise ValueError(f"got {len(rows)} rows for dim={dim}")
        self.dim = dim
        self.rows = rows
        self.stochastic = stochastic

    @classmethod
    def identity(cls, dim: int, exact: bool = False) -> "TransitionMatrix":
        one = Fraction(1) if exact else 1.0
        return cls(dim, [{i: one} for i in range(dim)])

    @property
    def exact(self) -> bool:
        for row in self.rows:
            for v in row.values():
                return isinstance(v, Fraction)
        return False

    def entry(self, i: int, j: int) -> Number:
        return self.rows[i].get(j, 0)

    def row_sums(self) -> list:
        return [sum(row.values()) for row in self.rows]

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows)

    def check_stochastic(self, tol: float = 1e-12) -> bool:
        one = Fraction(1) if self.exact else 1.0
        for total in self.row_sums():
            if abs(total - one) > tol:
                return False
        return True

    def __matmul__(self, other: "TransitionMatrix") -> "TransitionMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        rows = []
        for row in self.rows:
            out: dict = {}
            for k, v in row.items():
                for j, w in other.rows[k].items():
                    out[j] = out.get(j, 0) + v * w
            rows.append(out)
        return TransitionMatrix(self.dim, rows, self.stochastic and other.stochastic)

    def power(self, k: int) -> "TransitionMatrix":
        if k < 0:
            raise ValueError("negative power")
        result = TransitionMatrix.identity(self.dim, self.exact)
        for _ in range(k):
            result = result @ self
        return result

    def vecmat(self, w: list) -> list:
        """Row vector times matrix: (w P)_j = sum_i w_i P[i, j]."""
        out = [0] * self.dim
        for i, wi in enumerate(w):
            if wi == 0:
                continue
            for j, v in self.rows[i].items():
                out[j] += wi * v
        return out

    def to_numpy(self) -> np.ndarray:
        dense = np.zeros((self.dim, self.dim))
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                dense[i, j] = float(v)
        return dense

    def to_csr(self):
        from scipy.sparse import csr_matrix

        data, indices, indptr = [], [], [0]
        for row in self.rows:
            for j in sorted(row):
                indices.append(j)
                data.append(float(row[j]))
            indptr.append(len(indices))
        return csr_matrix((data, indices, indptr), shape=(self.dim, self.dim))

    def max_abs_diff(self, other: "TransitionMatrix") -> Number:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        worst = 0
        for ra, rb in zip(self.rows, other.rows):
            for j in set(ra) | set(rb):
                worst = max(worst, abs(ra.get(j, 0) - rb.get(j, 0)))
        return worst


def blend(alpha: Number, a: TransitionMatrix, beta: Number, b: TransitionMatrix) -> TransitionMatrix:
    """The linear combination alpha*a + beta*b with sparse rows."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    rows = []
    for ra, rb in zip(a.rows, b.rows):
        out = {j: alpha * v for j, v in ra.items()}
        for j, v in rb.items():
            out[j] = out.get(j, 0) + beta * v
        rows.append(out)
    stochastic = a.stochastic and b.stochastic and alpha + beta == 1
    return TransitionMatrix(a.dim, rows, stochastic)


def iter_row_entries(
    n: int, state: int, params: ParamVector, signed: bool = False
) -> Iterator[tuple[int, Number]]:
    """Entries of one row of the game-B matrix (or its signed variant).

    Yields (target state, value) pairs: one single-flip target per player plus
    repeated diagonal contributions.  The diagonal is deliberately emitted as
    n separate summands, i.e. before any simplification that would use
    q_m = 1 - p_m, so the signed variant can negate each q_m term in place.
    """
    p = params.as_tuple()
    q = tuple(params.one - v for v in p)
    inv_n = params.one / n
    for j in range(n):
        m = neighbor_code(state, j, n)
        flipped = state ^ (1 << j)
        if (state >> j) & 1 == 0:
            yield flipped, p[m] * inv_n  # heads: player becomes a winner
            dv = q[m] * inv_n  # tails: stays a loser
            yield state, -dv if signed else dv
        else:
            qv = q[m] * inv_n  # tails: player becomes a loser
            yield flipped, -qv if signed else qv
            yield state, p[m] * inv_n  # heads: stays a winner


def build_game_b(n: int, params: ParamVector, signed: bool = False) -> TransitionMatrix:
    """Full-state transition matrix of game B on 2^n configurations.

    Off-diagonal entries go to single-flip neighbors with probability p_m/n
    (flip to winner) or q_m/n (flip to loser); the diagonal collects the
    stay-put terms.  With ``signed`` every q_m term is negated, producing the
    payoff matrix whose row sums are expected one-turn profits.
    """
    if n < 3:
        raise ValueError(f"need at least 3 players, got n={n}")
    rows = []
    for state in range(1 << n):
        row: dict = {}
        for target, value in iter_row_entries(n, state, params, signed):
            row[target] = row.get(target, 0) + value
        rows.append({j: v for j, v in row.items() if v != 0})
    return TransitionMatrix(1 << n, rows, stochastic=not signed)


def build_game_a(n: int, exact: bool = False) -> TransitionMatrix:
    """Transition matrix of the fair game A: game B with all p_m = 1/2."""
    return build_game_b(n, FAIR_EXACT if exact else FAIR)


def build_game_b_signed(n: int, params: ParamVector) -> TransitionMatrix:
    """Payoff-signed variant of game B: every q_m entry negated."""
    return build_game_b(n, params, signed=True)


def build_game_a_signed(n: int, exact: bool = False) -> TransitionMatrix:
    return build_game_b(n, FAIR_EXACT if exact else FAIR, signed=True)
