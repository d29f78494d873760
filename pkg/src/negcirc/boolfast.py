"""Vectorized analysis of Boolean networks with up to three components.

Exhausting all 16,777,216 three-component Boolean maps map-by-map is far
too slow in pure Python, so this engine processes maps in numpy batches:

* states are ranks 0..2^n-1 with component 0 on the most significant bit,
  matching the mixed-radix ranking of the generic layer;
* per-map reachability lives in one byte per state (a bitset over at most
  8 states), closed under boolean matrix squaring;
* interaction graphs are 2*n*n-bit arc masks, and circuit existence per
  mask comes from precomputed tables indexed by mask value.

Boolean maps equal their unitary map, so the asynchronous and unitary
transition graphs coincide; the unitary interaction graph is still
computed from its own threshold definition rather than assumed equal to
the global one.  ``tests`` cross-check every output of this engine
against the per-map reference path.
"""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np

from .errors import DomainError
from .interaction import arc_bit

MAX_COMPONENTS = 3

_TABLES: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

_POPCOUNT = np.array([bin(v).count("1") for v in range(256)], dtype=np.uint8)
_LOWBIT = np.array(
    [(v & -v).bit_length() - 1 if v else 255 for v in range(256)], dtype=np.uint8
)


def _vertex_cycles(n: int):
    """Elementary vertex cycles of the complete digraph, smallest vertex first."""
    cycles = []
    for k in range(1, n + 1):
        for subset in combinations(range(n), k):
            for rest in permutations(subset[1:]):
                cycles.append((subset[0],) + rest)
    return cycles


def circuit_tables(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(negative, positive, any) circuit existence per 2*n*n-bit arc mask.

    A vertex cycle is realizable with sign s when every step carries at
    least one arc and either some step carries both signs or the product
    of the forced signs is s.  Tables are cached per n.
    """
    if n > MAX_COMPONENTS:
        raise DomainError(f"mask tables support at most {MAX_COMPONENTS} components")
    if n in _TABLES:
        return _TABLES[n]
    size = 1 << (2 * n * n)
    masks = np.arange(size, dtype=np.int64)
    neg = np.zeros(size, dtype=bool)
    pos = np.zeros(size, dtype=bool)
    anyc = np.zeros(size, dtype=bool)
    for cycle in _vertex_cycles(n):
        k = len(cycle)
        realizable = np.ones(size, dtype=bool)
        parity = np.zeros(size, dtype=np.uint8)
        free = np.zeros(size, dtype=bool)
        for q in range(k):
            u, w = cycle[q], cycle[(q + 1) % k]
            pb = (masks >> arc_bit(n, u, 1, w)) & 1
            nb = (masks >> arc_bit(n, u, -1, w)) & 1
            realizable &= (pb | nb).astype(bool)
            parity ^= (nb & (1 - pb)).astype(np.uint8)
            free |= (pb & nb).astype(bool)
        neg |= realizable & (free | (parity == 1))
        pos |= realizable & (free | (parity == 0))
        anyc |= realizable
    out = (
        neg.astype(np.uint8),
        pos.astype(np.uint8),
        anyc.astype(np.uint8),
    )
    _TABLES[n] = out
    return out


def decode_tables(n: int, indices: np.ndarray) -> np.ndarray:
    """Map canonical indices to tables, entry of rank 0 most significant."""
    m = 1 << n
    indices = np.asarray(indices, dtype=np.int64)
    shifts = n * (m - 1 - np.arange(m, dtype=np.int64))
    return ((indices[:, None] >> shifts[None, :]) & (m - 1)).astype(np.uint8)


class BooleanBatchFacts:
    """Per-map fact arrays for one batch of Boolean tables."""

    __slots__ = (
        "n",
        "tables",
        "has_cyclic",
        "attractor_count",
        "has_fixed",
        "fixed_count",
        "converges",
        "global_mask",
        "unitary_mask",
        "global_neg",
        "global_pos",
        "global_any",
        "unitary_neg",
        "dyn_within_global",
        "unitary_dyn_within",
        "locals_union_is_global",
        "locals_neg_free",
        "locals_pos_any",
        "locals_all_acyclic",
    )


def analyze_batch(
    n: int,
    tables: np.ndarray,
    need_dyn: bool = True,
    need_locals: bool = True,
    need_unitary_mask: bool = True,
) -> BooleanBatchFacts:
    """Compute sweep-relevant facts for a batch of Boolean maps.

    ``tables`` has shape (B, 2^n) with image ranks as entries.  The three
    ``need_*`` switches skip the costliest stages when the selected
    checks do not use them; skipped fields stay None.
    """
    if n > MAX_COMPONENTS:
        raise DomainError(f"engine supports at most {MAX_COMPONENTS} components")
    m = 1 << n
    tables = np.ascontiguousarray(tables, dtype=np.uint8)
    batch = tables.shape[0]
    states = np.arange(m, dtype=np.uint8)
    rows = np.arange(batch)

    # asynchronous adjacency as one successor-bitset byte per state
    diff = tables ^ states[None, :]
    adj = np.zeros((batch, m), dtype=np.uint8)
    for b in range(n):
        flips = ((diff >> b) & 1).astype(np.uint8)
        adj |= flips * (np.uint8(1) << (states ^ (1 << b)))[None, :]

    # reflexive-transitive closure by repeated boolean matrix squaring
    reach = adj | (np.uint8(1) << states)[None, :]
    steps = max(1, (m - 1).bit_length())
    for _ in range(steps):
        new = reach.copy()
        for y in range(m):
            sel = ((reach >> y) & 1).astype(np.uint8)
            new |= sel * reach[:, y][:, None]
        reach = new

    # column bitsets: who reaches s
    bits = ((reach[:, :, None] >> states[None, None, :]) & 1).astype(np.uint16)
    cols = (bits * (np.uint16(1) << states.astype(np.uint16))[None, :, None]).sum(
        axis=1, dtype=np.uint16
    ).astype(np.uint8)

    terminal = (reach & ~cols) == 0
    cyclic_here = _POPCOUNT[reach] >= 2
    facts = BooleanBatchFacts()
    facts.n = n
    facts.tables = tables
    facts.has_cyclic = (terminal & cyclic_here).any(axis=1)
    roots = terminal & (_LOWBIT[reach] == states[None, :])
    facts.attractor_count = roots.sum(axis=1).astype(np.int16)

    fixed = tables == states[None, :]
    facts.has_fixed = fixed.any(axis=1)
    facts.fixed_count = fixed.sum(axis=1).astype(np.int16)
    target = np.argmax(fixed, axis=1).astype(np.uint8)
    reaches_target = ((reach >> target[:, None]) & 1).all(axis=1)
    facts.converges = (facts.fixed_count == 1) & reaches_target

    # pairwise finite differences drive all four interaction graphs
    gmask = np.zeros(batch, dtype=np.int32)
    umask = np.zeros(batch, dtype=np.int32) if need_unitary_mask else None
    pair_masks: dict[tuple[int, int], np.ndarray] = {}
    for j in range(n):
        pj = n - 1 - j
        for base in (x for x in range(m) if not (x >> pj) & 1):
            lo = tables[:, base]
            hi = tables[:, base | (1 << pj)]
            pm = np.zeros(batch, dtype=np.int32)
            for i in range(n):
                pi = n - 1 - i
                lob = (lo >> pi) & 1
                hib = (hi >> pi) & 1
                up = (hib > lob).astype(np.int32)
                down = (hib < lob).astype(np.int32)
                pm |= up << arc_bit(n, j, 1, i)
                pm |= down << arc_bit(n, j, -1, i)
                if need_unitary_mask:
                    xi = (base >> pi) & 1
                    zi = xi + 1 if i == j else xi
                    upos = (
                        ((lob <= xi) & (hib > xi)) | ((lob < zi) & (hib >= zi))
                    ).astype(np.int32)
                    uneg = (
                        ((lob > xi) & (hib <= xi)) | ((lob >= zi) & (hib < zi))
                    ).astype(np.int32)
                    umask |= upos << arc_bit(n, j, 1, i)
                    umask |= uneg << arc_bit(n, j, -1, i)
            pair_masks[(j, base)] = pm
            gmask |= pm
    facts.global_mask = gmask
    facts.unitary_mask = umask

    neg, pos, anyc = circuit_tables(n)
    facts.global_neg = neg[gmask].astype(bool)
    facts.global_pos = pos[gmask].astype(bool)
    facts.global_any = anyc[gmask].astype(bool)
    facts.unitary_neg = neg[umask].astype(bool) if need_unitary_mask else None

    if need_locals:
        union = np.zeros(batch, dtype=np.int32)
        local_neg = np.zeros(batch, dtype=bool)
        local_pos = np.zeros(batch, dtype=bool)
        local_any = np.zeros(batch, dtype=bool)
        for x in range(m):
            lm = np.zeros(batch, dtype=np.int32)
            for j in range(n):
                pj = n - 1 - j
                lm |= pair_masks[(j, x & ~(1 << pj))]
            union |= lm
            local_neg |= neg[lm].astype(bool)
            local_pos |= pos[lm].astype(bool)
            local_any |= anyc[lm].astype(bool)
        facts.locals_union_is_global = union == gmask
        facts.locals_neg_free = ~local_neg
        facts.locals_pos_any = local_pos
        facts.locals_all_acyclic = ~local_any
    else:
        facts.locals_union_is_global = None
        facts.locals_neg_free = None
        facts.locals_pos_any = None
        facts.locals_all_acyclic = None

    if need_dyn:
        # step-local influence masks; Boolean maps equal their unitary map
        dyn_ok_global = np.ones(batch, dtype=bool)
        dyn_ok_unitary = np.ones(batch, dtype=bool) if need_unitary_mask else None
        not_g = ~gmask
        not_u = ~umask if need_unitary_mask else None
        for x in range(m):
            tx = tables[:, x]
            fprime = np.empty((n, batch), dtype=np.int8)
            for i in range(n):
                pi = n - 1 - i
                fprime[i] = (((tx >> pi) & 1).astype(np.int8)) - ((x >> pi) & 1)
            dmask = np.zeros(batch, dtype=np.int32)
            for j in range(n):
                pj = n - 1 - j
                fb = ((tx >> pj) & 1).astype(np.uint8)
                step = (np.uint8(x) & np.uint8(~(1 << pj) & 0xFF)) | (fb << pj)
                timg = tables[rows, step]
                for i in range(n):
                    pi = n - 1 - i
                    fyi = (((timg >> pi) & 1).astype(np.int8)) - (
                        ((step >> pi) & 1).astype(np.int8)
                    )
                    changed = fprime[i] != fyi
                    s = fprime[j] * fyi
                    dmask |= (changed & (s > 0)).astype(np.int32) << arc_bit(n, j, 1, i)
                    dmask |= (changed & (s < 0)).astype(np.int32) << arc_bit(n, j, -1, i)
            dyn_ok_global &= (dmask & not_g) == 0
            if need_unitary_mask:
                dyn_ok_unitary &= (dmask & not_u) == 0
        facts.dyn_within_global = dyn_ok_global
        facts.unitary_dyn_within = dyn_ok_unitary
    else:
        facts.dyn_within_global = None
        facts.unitary_dyn_within = None
    return facts
