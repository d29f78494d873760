"""State spaces and network maps.

A network of n components has state set X = X_1 x ... x X_n where each X_i
is a finite integer interval with at least two values.  The dynamics is a
total map F: X -> X stored as a dense table of state ranks.  States are
plain tuples of ints; components are 0-based throughout the package and
rendered 1-based at every I/O surface.
"""

from __future__ import annotations

import os
from typing import Callable, Iterable, Iterator, Sequence

from .errors import DomainError

DEFAULT_STATE_CAP = 1 << 24
STATE_CAP_ENV = "NEGCIRC_STATE_CAP"


def state_cap() -> int:
    """Maximum allowed |X|, overridable via NEGCIRC_STATE_CAP."""
    raw = os.environ.get(STATE_CAP_ENV)
    if raw is None:
        return DEFAULT_STATE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise DomainError(f"{STATE_CAP_ENV} must be an integer, got {raw!r}")
    if cap < 2:
        raise DomainError(f"{STATE_CAP_ENV} must be at least 2, got {cap}")
    return cap


def sign(a: int) -> int:
    return (a > 0) - (a < 0)


class StateSpace:
    """A product of finite integer intervals with mixed-radix state ranks.

    Ranks are lexicographic with component 0 most significant, normalized
    by each interval's lower bound: rank((lo_0, ..., lo_{n-1})) == 0.
    """

    __slots__ = ("intervals", "n", "sizes", "weights", "size", "_digits")

    def __init__(self, intervals: Iterable[tuple[int, int]]):
        intervals = tuple((int(lo), int(hi)) for lo, hi in intervals)
        if not intervals:
            raise DomainError("a state space needs at least one component")
        for c, (lo, hi) in enumerate(intervals):
            if hi < lo + 1:
                raise DomainError(
                    f"component {c + 1} interval {lo}..{hi} has fewer than two values"
                )
        sizes = tuple(hi - lo + 1 for lo, hi in intervals)
        size = 1
        for s in sizes:
            size *= s
        cap = state_cap()
        if size > cap:
            raise DomainError(f"state space has {size} states, above the cap of {cap}")
        weights = [1] * len(sizes)
        for c in range(len(sizes) - 2, -1, -1):
            weights[c] = weights[c + 1] * sizes[c + 1]
        self.intervals = intervals
        self.n = len(intervals)
        self.sizes = sizes
        self.weights = tuple(weights)
        self.size = size
        self._digits = None

    def __eq__(self, other):
        return isinstance(other, StateSpace) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        parts = ",".join(f"{lo}..{hi}" for lo, hi in self.intervals)
        return f"StateSpace({parts})"

    def contains(self, state: Sequence[int]) -> bool:
        if len(state) != self.n:
            return False
        return all(lo <= v <= hi for v, (lo, hi) in zip(state, self.intervals))

    def check_state(self, state: Sequence[int]) -> tuple[int, ...]:
        state = tuple(state)
        if not self.contains(state):
            raise DomainError(f"state {state} is not in {self!r}")
        return state

    def rank(self, state: Sequence[int]) -> int:
        """Ordinal of ``state`` in lexicographic order (component 0 first)."""
        state = self.check_state(state)
        r = 0
        for v, (lo, _), w in zip(state, self.intervals, self.weights):
            r += (v - lo) * w
        return r

    def unrank(self, r: int) -> tuple[int, ...]:
        """State with ordinal ``r``; inverse of :meth:`rank`."""
        if not 0 <= r < self.size:
            raise DomainError(f"rank {r} out of range 0..{self.size - 1}")
        coords = []
        for (lo, _), s, w in zip(self.intervals, self.sizes, self.weights):
            coords.append(lo + (r // w) % s)
        return tuple(coords)

    def states(self) -> Iterator[tuple[int, ...]]:
        """All states in rank order."""
        for r in range(self.size):
            yield self.unrank(r)

    def digit_table(self) -> list[tuple[int, ...]]:
        """Per-rank tuple of 0-based digits ((value - lo) per component), cached."""
        if self._digits is None:
            digits = []
            for r in range(self.size):
                digits.append(
                    tuple((r // w) % s for s, w in zip(self.sizes, self.weights))
                )
            self._digits = digits
        return self._digits

    @property
    def is_boolean(self) -> bool:
        return all(s == 2 for s in self.sizes)


class NetworkMap:
    """A total map F: X -> X stored as a table of image ranks.

    Immutable after construction; all derived quantities are pure functions
    of the table, so instances are safe to share across threads.
    """

    __slots__ = ("space", "table", "_sign_table")

    def __init__(self, space: StateSpace, image_ranks: Sequence[int]):
        if len(image_ranks) != space.size:
            raise DomainError(
                f"table has {len(image_ranks)} entries, expected {space.size}"
            )
        table = []
        for r, img in enumerate(image_ranks):
            img = int(img)
            if not 0 <= img < space.size:
                raise DomainError(f"image rank {img} of state rank {r} out of range")
            table.append(img)
        self.space = space
        self.table = tuple(table)
        self._sign_table = None

    @classmethod
    def from_images(cls, space: StateSpace, images: Sequence[Sequence[int]]) -> "NetworkMap":
        """Build from images given as states in rank order."""
        return cls(space, [space.rank(img) for img in images])

    @classmethod
    def from_function(
        cls, space: StateSpace, fn: Callable[[tuple[int, ...]], Sequence[int]]
    ) -> "NetworkMap":
        """Tabulate ``fn`` over the whole space."""
        return cls(space, [space.rank(fn(x)) for x in space.states()])

    def __eq__(self, other):
        return (
            isinstance(other, NetworkMap)
            and self.space == other.space
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.space, self.table))

    def image_rank(self, r: int) -> int:
        return self.table[r]

    def image(self, state: Sequence[int]) -> tuple[int, ...]:
        """F(x)."""
        return self.space.unrank(self.table[self.space.rank(state)])

    def component(self, state: Sequence[int], i: int) -> int:
        """f_i(x)."""
        return self.image(state)[i]

    def async_update(self, state: Sequence[int], i: int) -> tuple[int, ...]:
        """State with coordinate ``i`` replaced by f_i(x); others untouched."""
        state = self.space.check_state(state)
        if not 0 <= i < self.space.n:
            raise DomainError(f"component {i} out of range 0..{self.space.n - 1}")
        fx = self.image(state)
        return state[:i] + (fx[i],) + state[i + 1 :]

    def delta_sign(self, state: Sequence[int]) -> tuple[int, ...]:
        """Per-component sign of f_i(x) - x_i; 0 exactly on stable components."""
        state = self.space.check_state(state)
        fx = self.image(state)
        return tuple(sign(f - v) for f, v in zip(fx, state))

    def unstable_set(self, state: Sequence[int]) -> set[int]:
        """Components i with f_i(x) != x_i; empty iff ``state`` is a fixed point."""
        return {i for i, s in enumerate(self.delta_sign(state)) if s != 0}

    def is_fixed_point(self, state: Sequence[int]) -> bool:
        r = self.space.rank(state)
        return self.table[r] == r

    def sign_table(self) -> list[tuple[int, ...]]:
        """delta_sign for every state, indexed by rank; cached."""
        if self._sign_table is None:
            digits = self.space.digit_table()
            self._sign_table = [
                tuple(sign(a - b) for a, b in zip(digits[img], digits[r]))
                for r, img in enumerate(self.table)
            ]
        return self._sign_table

    def unitary_map(self) -> "NetworkMap":
        """The map moving every coordinate one step toward its target.

        Component i of the result is x_i + sign(f_i(x) - x_i), which stays
        inside X_i because it moves toward f_i(x).  For Boolean spaces the
        result equals the original map.
        """
        space = self.space
        weights = space.weights
        signs = self.sign_table()
        table = [
            r + sum(s * w for s, w in zip(signs[r], weights))
            for r in range(space.size)
        ]
        return NetworkMap(space, table)

    def freeze_component(self, c: int) -> "NetworkMap":
        """Copy of the map with component ``c`` pinned to its current value."""
        space = self.space
        if not 0 <= c < space.n:
            raise DomainError(f"component {c} out of range 0..{space.n - 1}")
        w = space.weights[c]
        s = space.sizes[c]
        digits = space.digit_table()
        table = [
            img + (digits[r][c] - digits[img][c]) * w
            for r, img in enumerate(self.table)
        ]
        return NetworkMap(space, table)
