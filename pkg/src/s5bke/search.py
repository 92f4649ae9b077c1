"""Bounded model enumeration, countermodel search, and seeded generators.

The enumerator factorizes the per-world evidence filters into principal
cores (the knowledge core contains its world; the belief core is a
nonempty subset of the knowledge core), which shrinks the space to a
cartesian product of per-world core pairs times assignments.  Countermodel
search walks that space in a fixed lexicographic order, evaluating the
query in batches through the compiled-program kernels, so parallel or
vectorized runs return the same first witness a sequential scan would.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from . import fasteval, frames
from .algebra import AlgebraicModel
from .errors import GuardViolation
from .frames import Frame, FrameModel
from .syntax import B, Bot, Box, Formula, Impl, K, Neg, Var, variables

MAX_EXHAUSTIVE_WORLDS = 4
MAX_RANDOM_WORLDS = frames.MAX_FULL_WORLDS
MAX_FORMULA_DEPTH = 8

_BATCH_ROWS = 1 << 16


@dataclass(frozen=True)
class SearchBounds:
    max_worlds: int = 3
    max_variables: int = 3


@dataclass(frozen=True)
class Found:
    """A countermodel with the goal's per-world truth table."""

    model: FrameModel
    trace: tuple[bool, ...]


@dataclass(frozen=True)
class UnknownWithinBounds:
    models_examined: int


CountermodelReport = Union[Found, UnknownWithinBounds]


def _check_exhaustive(bounds: SearchBounds) -> None:
    if not 1 <= bounds.max_worlds <= MAX_EXHAUSTIVE_WORLDS:
        raise GuardViolation(
            f"exhaustive search supports 1..{MAX_EXHAUSTIVE_WORLDS} worlds, "
            f"got {bounds.max_worlds}"
        )


def _core_pairs(n: int, w: int) -> list[tuple[int, int]]:
    """All (knowledge core, belief core) pairs for world ``w``, sorted."""
    pairs = []
    for ck in range(1 << n):
        if not (ck >> w) & 1:
            continue
        sub = ck
        while sub:
            pairs.append((ck, sub))
            sub = (sub - 1) & ck
    pairs.sort()
    return pairs


def enumerate_frames(
    bounds: SearchBounds, variables: Sequence[str]
) -> Iterator[FrameModel]:
    """Every full-powerset frame model within the bounds, exactly once.

    Order is lexicographic in (world count, designated world, per-world
    core pairs, assignment masks); all yielded models are valid by
    construction.
    """
    _check_exhaustive(bounds)
    var_order = list(variables)
    for n in range(1, bounds.max_worlds + 1):
        pair_lists = [_core_pairs(n, w) for w in range(n)]
        masks = range(1 << n)
        for w_t in range(n):
            for combo in itertools.product(*pair_lists):
                frame = Frame(
                    world_count=n,
                    designated=w_t,
                    core_K=tuple(p[0] for p in combo),
                    core_B=tuple(p[1] for p in combo),
                )
                for assign in itertools.product(masks, repeat=len(var_order)):
                    yield FrameModel(frame, dict(zip(var_order, assign)))


def _enumerate_batches(
    bounds: SearchBounds, var_order: tuple[str, ...]
) -> Iterator[fasteval.FrameBatch]:
    """Array form of :func:`enumerate_frames`, in the identical order."""
    _check_exhaustive(bounds)
    nvars = len(var_order)
    for n in range(1, bounds.max_worlds + 1):
        pair_arrays = []
        for w in range(n):
            pairs = np.asarray(_core_pairs(n, w), dtype=np.int64)
            pair_arrays.append(pairs)
        p = pair_arrays[0].shape[0]
        n_assign = (1 << n) ** nvars
        total = p**n * n_assign
        for w_t in range(n):
            for start in range(0, total, _BATCH_ROWS):
                rows = np.arange(start, min(start + _BATCH_ROWS, total), dtype=np.int64)
                combo = rows // n_assign
                aidx = rows % n_assign
                core_k = np.empty((rows.size, n), dtype=np.int64)
                core_b = np.empty((rows.size, n), dtype=np.int64)
                for w in range(n):
                    digit = (combo // p ** (n - 1 - w)) % p
                    core_k[:, w] = pair_arrays[w][digit, 0]
                    core_b[:, w] = pair_arrays[w][digit, 1]
                assign = np.empty((rows.size, nvars), dtype=np.int64)
                for vi in range(nvars):
                    shift = (1 << n) ** (nvars - 1 - vi)
                    assign[:, vi] = (aidx // shift) % (1 << n)
                designated = np.full(rows.size, w_t, dtype=np.int64)
                yield fasteval.FrameBatch(n, designated, core_k, core_b, assign, var_order)


def _model_from_batch_row(batch: fasteval.FrameBatch, row: int) -> FrameModel:
    frame = Frame(
        world_count=batch.worlds,
        designated=int(batch.designated[row]),
        core_K=tuple(int(v) for v in batch.core_k[row]),
        core_B=tuple(int(v) for v in batch.core_b[row]),
    )
    assignment = {
        name: int(batch.assign[row, j]) for j, name in enumerate(batch.variables)
    }
    return FrameModel(frame, assignment)


def find_countermodel(
    premises: Sequence[Formula],
    goal: Formula,
    bounds: SearchBounds = SearchBounds(),
    backend: Optional[str] = None,
) -> CountermodelReport:
    """First enumerated model satisfying the premises and refuting the goal.

    Premises and goal are tested at the designated world.  Returns
    :class:`UnknownWithinBounds` with the exact number of models examined
    when the whole bounded space agrees with the goal; never claims
    validity.
    """
    query_vars = sorted(variables(goal).union(*(variables(p) for p in premises), set()))
    if len(query_vars) > bounds.max_variables:
        raise GuardViolation(
            f"query uses {len(query_vars)} variables, bound is {bounds.max_variables}"
        )
    var_order = tuple(query_vars)
    goal_prog = fasteval.compile_formula(goal, var_order)
    premise_progs = [fasteval.compile_formula(p, var_order) for p in premises]
    examined = 0
    for batch in _enumerate_batches(bounds, var_order):
        hit = ~fasteval.satisfied_at_designated(goal_prog, batch, backend)
        for prog in premise_progs:
            if not hit.any():
                break
            hit &= fasteval.satisfied_at_designated(prog, batch, backend)
        if hit.any():
            row = int(np.argmax(hit))
            model = _model_from_batch_row(batch, row)
            _recheck_found(model, premises, goal)
            trace = tuple(
                frames.satisfies_at(model, w, goal) for w in range(batch.worlds)
            )
            return Found(model, trace)
        examined += len(batch)
    return UnknownWithinBounds(examined)


def _recheck_found(
    model: FrameModel, premises: Sequence[Formula], goal: Formula
) -> None:
    # Guard against kernel/reference divergence: replay the verdict on the
    # recursive evaluator before reporting.
    if frames.models(model, goal) or not all(
        frames.models(model, p) for p in premises
    ):
        raise RuntimeError(
            "batched evaluation and the recursive evaluator disagree; "
            "this is a bug, please report the query"
        )


def random_model(
    seed: int, bounds: SearchBounds, variables: Sequence[str]
) -> FrameModel:
    """Seed-deterministic valid frame model within the bounds."""
    if not 1 <= bounds.max_worlds <= MAX_RANDOM_WORLDS:
        raise GuardViolation(
            f"random models support 1..{MAX_RANDOM_WORLDS} worlds, "
            f"got {bounds.max_worlds}"
        )
    rng = random.Random(seed)
    n = rng.randint(1, bounds.max_worlds)
    core_k = []
    core_b = []
    for w in range(n):
        ck = 1 << w
        for other in range(n):
            if other != w and rng.random() < 0.5:
                ck |= 1 << other
        members = [b for b in range(n) if (ck >> b) & 1]
        cb = 0
        for b in members:
            if rng.random() < 0.5:
                cb |= 1 << b
        if cb == 0:
            cb = 1 << rng.choice(members)
        core_k.append(ck)
        core_b.append(cb)
    frame = Frame(
        world_count=n,
        designated=rng.randrange(n),
        core_K=tuple(core_k),
        core_B=tuple(core_b),
    )
    assignment = {name: rng.randrange(1 << n) for name in variables}
    return FrameModel(frame, assignment)


def random_algebra(seed: int, max_atoms: int = 3) -> AlgebraicModel:
    """Seed-deterministic valid algebraic model with up to ``max_atoms``.

    Built from random principal cores per atom, which is exactly the shape
    every valid operator table has.
    """
    rng = random.Random(seed)
    n = rng.randint(1, max_atoms)
    full = (1 << n) - 1
    cores_k = []
    cores_b = []
    for i in range(n):
        ck = 1 << i
        for other in range(n):
            if other != i and rng.random() < 0.5:
                ck |= 1 << other
        members = [b for b in range(n) if (ck >> b) & 1]
        cb = 0
        for b in members:
            if rng.random() < 0.5:
                cb |= 1 << b
        if cb == 0:
            cb = 1 << rng.choice(members)
        cores_k.append(ck)
        cores_b.append(cb)
    k_table = []
    b_table = []
    for a in range(full + 1):
        kv = bv = 0
        for i in range(n):
            if cores_k[i] & ~a == 0:
                kv |= 1 << i
            if cores_b[i] & ~a == 0:
                bv |= 1 << i
        k_table.append(kv)
        b_table.append(bv)
    return AlgebraicModel(n, rng.randrange(n), tuple(k_table), tuple(b_table))


def random_formula(seed: int, depth: int, variables: Sequence[str]) -> Formula:
    """Seed-deterministic core-AST formula with node depth at most ``depth``."""
    if not 0 <= depth <= MAX_FORMULA_DEPTH:
        raise GuardViolation(f"depth must be in 0..{MAX_FORMULA_DEPTH}, got {depth}")
    rng = random.Random(seed)
    names = list(variables)

    def leaf() -> Formula:
        if names and rng.random() < 0.8:
            return Var(rng.choice(names))
        return Bot()

    def gen(d: int) -> Formula:
        if d == 0:
            return leaf()
        kind = rng.choice(("leaf", "neg", "impl", "impl", "box", "know", "bel"))
        if kind == "leaf":
            return leaf()
        if kind == "neg":
            return Neg(gen(d - 1))
        if kind == "impl":
            return Impl(gen(d - 1), gen(d - 1))
        if kind == "box":
            return Box(gen(d - 1))
        if kind == "know":
            return K(gen(d - 1))
        return B(gen(d - 1))

    return gen(depth)
