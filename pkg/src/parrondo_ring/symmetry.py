"""Ring symmetries and the quotient (lumped) Markov chain.

The game dynamics are invariant under rotation of the players, and also under
reflection when p1 = p2.  States equivalent under the acting group are merged
into one class, shrinking the chain from 2^n states to the number of binary
necklaces (cyclic group) or bracelets (dihedral group).  The reduced matrix is
P_bar([x],[y]) = sum over y' ~ y of P(x, y'), evaluated at the canonical
representative x; reduction commutes with matrix products, so pattern products
can be formed entirely in reduced coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .games import Configuration, FAIR, FAIR_EXACT, ParamVector, TransitionMatrix, iter_row_entries

CYCLIC = "cyclic"
DIHEDRAL = "dihedral"

#: a group element is (rotation offset k, reflect first?)
GroupElement = tuple[int, bool]


@dataclass(frozen=True)
class SymmetryGroup:
    """Rotations of the n-ring, optionally extended by reflections."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in (CYCLIC, DIHEDRAL):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.n < 3:
            raise ValueError(f"need at least 3 players, got n={self.n}")

    @classmethod
    def cyclic(cls, n: int) -> "SymmetryGroup":
        return cls(CYCLIC, n)

    @classmethod
    def dihedral(cls, n: int) -> "SymmetryGroup":
        return cls(DIHEDRAL, n)

    @property
    def order(self) -> int:
        return self.n if self.kind == CYCLIC else 2 * self.n

    def elements(self) -> list[GroupElement]:
        rotations = [(k, False) for k in range(self.n)]
        if self.kind == CYCLIC:
            return rotations
        return rotations + [(k, True) for k in range(self.n)]

    def apply(self, element: GroupElement, state: int) -> int:
        k, reflected = element
        if reflected:
            state = reverse_bits(state, self.n)
        return rotate_bits(state, k, self.n)


def rotate_bits(state: int, k: int, n: int) -> int:
    """Right-rotation of the n-bit code; realizes y_j = x_{j+k} on the ring."""
    k %= n
    if k == 0:
        return state
    mask = (1 << n) - 1
    return ((state >> k) | (state << (n - k))) & mask


def reverse_bits(state: int, n: int) -> int:
    """Bit reversal of the n-bit code; realizes y_j = x_{n+1-j}."""
    out = 0
    for t in range(n):
        out |= ((state >> t) & 1) << (n - 1 - t)
    return out


def act(element: GroupElement, x: Configuration) -> Configuration:
    """Permuted configuration x_sigma with (x_sigma)_j = x_{sigma(j)}."""
    group = SymmetryGroup.dihedral(x.n)  # any group containing the element
    return Configuration.from_int(x.n, group.apply(element, x.to_int()))


def canonical_state(state: int, group: SymmetryGroup) -> int:
    """Minimum integer encoding over the group orbit of the state."""
    best = state
    for element in group.elements():
        best = min(best, group.apply(element, state))
    return best


def _canonical_all(n: int, group: SymmetryGroup) -> np.ndarray:
    """Canonical form of every state at once (vectorized bit permutations)."""
    states = np.arange(1 << n, dtype=np.int64)
    mask = (1 << n) - 1
    variants = [states]
    reversed_states = np.zeros_like(states)
    for t in range(n):
        reversed_states |= ((states >> t) & 1) << (n - 1 - t)
    if group.kind == DIHEDRAL:
        variants.append(reversed_states)
    canon = states.copy()
    for base in variants:
        for k in range(n):
            rotated = base if k == 0 else ((base >> k) | (base << (n - k))) & mask
            np.minimum(canon, rotated, out=canon)
    return canon


@dataclass
class QuotientModel:
    """Partition of the 2^n states into group orbits.

    ``reps`` lists the canonical (minimum-code) representative of each class
    in increasing order, ``sizes`` the orbit cardinalities, and ``class_of``
    maps every full state to its class index.
    """

    n: int
    group: SymmetryGroup
    reps: np.ndarray
    sizes: np.ndarray
    class_of: np.ndarray

    @property
    def class_count(self) -> int:
        return len(self.reps)

    def class_index(self, state: int) -> int:
        return int(self.class_of[state])

    def class_members(self, index: int) -> list[int]:
        return np.flatnonzero(self.class_of == index).tolist()

    def lift(self, pibar) -> list:
        """Full-state distribution pi(x) = pibar([x]) / |[x]|."""
        if len(pibar) != self.class_count:
            raise ValueError("class-vector length mismatch")
        sizes = self.sizes
        return [pibar[c] / int(sizes[c]) for c in self.class_of]


def build_classes(n: int, group: SymmetryGroup) -> QuotientModel:
    """Enumerate all equivalence classes of the n-ring under the group."""
    if group.n != n:
        raise ValueError(f"group is over n={group.n}, asked for n={n}")
    canon = _canonical_all(n, group)
    reps, inverse, sizes = np.unique(canon, return_inverse=True, return_counts=True)
    return QuotientModel(n, group, reps, sizes, inverse.astype(np.int64))


def necklace_count(n: int) -> int:
    """Binary necklaces: (1/n) * sum over d|n of phi(d) * 2^(n/d)."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _euler_phi(d) * (1 << (n // d))
    return total // n


def bracelet_count(n: int) -> int:
    """Binary bracelets: necklace count averaged with reflection fixed points."""
    reflections = (1 << ((n - 1) // 2)) if n % 2 else 3 * (1 << (n // 2 - 2))
    return necklace_count(n) // 2 + reflections


def _euler_phi(d: int) -> int:
    return sum(1 for k in range(1, d + 1) if gcd(k, d) == 1)


def quotient(p: TransitionMatrix, qm: QuotientModel) -> TransitionMatrix:
    """Reduced matrix over classes: row of the canonical representative with
    columns aggregated by class.  Correct for any group-invariant matrix,
    stochastic or signed."""
    if p.dim != (1 << qm.n):
        raise ValueError(f"matrix dim {p.dim} does not match 2^{qm.n} states")
    class_of = qm.class_of
    rows = []
    for rep in qm.reps:
        out: dict = {}
        for y, v in p.rows[int(rep)].items():
            c = int(class_of[y])
            out[c] = out.get(c, 0) + v
        rows.append(out)
    return TransitionMatrix(qm.class_count, rows, p.stochastic)


def reduced_game_b(n: int, params: ParamVector, qm: QuotientModel, signed: bool = False) -> TransitionMatrix:
    """Reduced game-B matrix built directly in class coordinates, without
    materializing the 2^n-state matrix.  Equals quotient(build_game_b(...))."""
    if qm.group.kind == DIHEDRAL and not params.symmetric:
        raise ValueError("dihedral reduction requires p1 == p2")
    class_of = qm.class_of
    rows = []
    for rep in qm.reps:
        out: dict = {}
        for target, value in iter_row_entries(n, int(rep), params, signed):
            c = int(class_of[target])
            out[c] = out.get(c, 0) + value
        rows.append({j: v for j, v in out.items() if v != 0})
    return TransitionMatrix(qm.class_count, rows, stochastic=not signed)


def reduced_game_a(n: int, qm: QuotientModel, exact: bool = False, signed: bool = False) -> TransitionMatrix:
    return reduced_game_b(n, FAIR_EXACT if exact else FAIR, qm, signed=signed)


def check_invariance(p: TransitionMatrix, group: SymmetryGroup, samples: int = 200, rng=None) -> bool:
    """Whether P(x_sigma, y_sigma) = P(x, y) holds: exhaustively when the
    state space times group order is small, else on random (sigma, x) pairs.
    Entry comparison is exact for Fractions, 1e-12 otherwise."""
    n = group.n
    if p.dim != (1 << n):
        raise ValueError("matrix dimension does not match group ring size")
    tol = 0 if p.exact else 1e-12
    elements = group.elements()

    def row_invariant(element, x):
        # permuted row of x must equal the row of x_sigma... note the action
        # maps row x to row sigma(x) and column y to sigma(y).
        gx = group.apply(element, x)
        expected = {group.apply(element, y): v for y, v in p.rows[x].items()}
        actual = p.rows[gx]
        for y in set(expected) | set(actual):
            if abs(expected.get(y, 0) - actual.get(y, 0)) > tol:
                return False
        return True

    if p.dim * len(elements) <= 1 << 14:
        return all(row_invariant(e, x) for e in elements for x in range(p.dim))
    rng = np.random.default_rng(rng)
    for _ in range(samples):
        element = elements[int(rng.integers(len(elements)))]
        x = int(rng.integers(p.dim))
        if not row_invariant(element, x):
            return False
    return True
