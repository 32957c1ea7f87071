"""Extension of bounded quasi-pseudometrics from a subspace to a finite space.

The pipeline builds a weighted series of chain metrics on the big space that
dominates the given metric on the subspace, then takes the entrywise minimum
with the cheapest bridge through subspace points.  The result restricts to
the input exactly and vanishes on the fine generator of the big space.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

# UnboundedInput is re-exported as part of this module's error surface
from .qpspace import (
    QPM,
    UnboundedInput,
    frink_metrize,
    min_plus_closure,
    scale_clip,
    validate_qpm,
)
from .quniform import (
    FiniteTopology,
    QuasiUniformity,
    chain_from,
    fine_quniformity,
    is_quasi_uniform_wrt,
    restrict,
    subspace_check,
    subspace_topology,
)


class NotEmbedded(ValueError):
    def __init__(self, pair: tuple[str, str], message: str) -> None:
        super().__init__(message)
        self.pair = pair


class NotQuasiUniform(ValueError):
    pass


@dataclass(frozen=True)
class EmbeddingInstance:
    """A space, a subset with a (by default trace) topology, and a metric on
    the subset that vanishes on the subset's fine generator."""

    space: FiniteTopology
    subset: tuple[int, ...]
    d: QPM
    subset_space: FiniteTopology

    def __init__(self, space, subset, d, subset_space=None) -> None:
        subset = tuple(sorted(set(subset)))
        if any(x < 0 or x >= space.size for x in subset):
            raise ValueError("subset point outside the space")
        if subset_space is None:
            subset_space = subspace_topology(space, subset)
        if d.size != len(subset):
            raise ValueError("metric size does not match the subset")
        if not is_quasi_uniform_wrt(d, fine_quniformity(subset_space)):
            raise NotQuasiUniform(
                "metric does not vanish on the subset's fine generator"
            )
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "subset", subset)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "subset_space", subset_space)

    @property
    def qu_y(self) -> QuasiUniformity:
        return fine_quniformity(self.space)

    @property
    def qu_x(self) -> QuasiUniformity:
        return fine_quniformity(self.subset_space)


@dataclass(frozen=True)
class ExtensionResult:
    extended: QPM
    series: QPM
    bridge: tuple[tuple[Fraction, ...], ...]
    depth: int


def _check_embedded(inst: EmbeddingInstance) -> None:
    ok = subspace_check(inst.subset_space, inst.space,
                        {inst.subset_space.labels[i]: inst.space.labels[x]
                         for i, x in enumerate(inst.subset)})
    if not ok:
        pair = _trace_gap(inst.space, inst.subset, inst.subset_space)
        labels = (inst.space.labels[inst.subset[pair[0]]], inst.space.labels[inst.subset[pair[1]]])
        raise NotEmbedded(labels, f"trace generator exceeds the subset generator at {labels}")


def _trace_gap(space, subset, subset_space):
    """A pair in the traced generator missing from the subset's own generator."""
    e_y = fine_quniformity(space).generator
    e_x = fine_quniformity(subset_space).generator
    traced = restrict(QuasiUniformity(e_y), subset).generator
    gap = sorted(traced.pairs - e_x.pairs)
    if not gap:
        raise RuntimeError("no trace gap exists")
    return gap[0]


def _series_depth(d: QPM) -> int:
    positive = [v for row in d.rows for v in row if v > 0]
    if not positive:
        return 1
    delta = min(positive)
    depth = 1
    while Fraction(1, 2**depth) > delta:
        depth += 1
    return depth


def series_metric(inst: EmbeddingInstance, chains=None, depth=None) -> QPM:
    """Weighted sum 8 * sum(2^-i * d_i) of chain metrics on the space.

    Each d_i comes from a depth-2 chain headed by an entourage V_i whose
    trace on the subset sits inside the subset ball {d < 2^-i}; the default
    V_i is the fine generator itself.  Each d_i is clipped to be bounded by 1
    with {d_i < 1/4} inside V_i.
    """
    _check_embedded(inst)
    qu_y = inst.qu_y
    depth = depth if depth is not None else _series_depth(inst.d)
    if chains is None:
        heads = [qu_y.generator] * depth
    else:
        heads = list(chains)
        depth = len(heads)
    n = inst.space.size
    local = {x: i for i, x in enumerate(inst.subset)}
    total = [[Fraction(0)] * n for _ in range(n)]
    for i, head in enumerate(heads, start=1):
        level = Fraction(1, 2**i)
        bad = sorted(
            (a, b)
            for a, b in head.pairs
            if a in local and b in local and inst.d.value(local[a], local[b]) >= level
        )
        if bad:
            labels = (inst.space.labels[bad[0][0]], inst.space.labels[bad[0][1]])
            raise NotEmbedded(
                labels, f"head entourage {i} traces outside the subset ball at {labels}"
            )
        chain_depth = 2
        while True:
            d_i = scale_clip(frink_metrize(chain_from(qu_y, head, chain_depth)))
            quarter_ball = {
                (x, y)
                for x in range(n)
                for y in range(n)
                if d_i.value(x, y) < Fraction(1, 4)
            }
            if quarter_ball <= head.pairs:
                break
            chain_depth += 1
        for x in range(n):
            for y in range(n):
                total[x][y] += 8 * level * d_i.value(x, y)
    rho = validate_qpm(inst.space.labels, total)
    for i, x in enumerate(inst.subset):
        for j, y in enumerate(inst.subset):
            if inst.d.value(i, j) > rho.value(x, y):
                raise RuntimeError("series metric fails to dominate the input")
    return rho


def extend_qpm(inst: EmbeddingInstance) -> ExtensionResult:
    """Extend the subset metric to the whole space.

    The output is the entrywise minimum of the series metric and the cheapest
    bridge through two subset points; it is validated as a quasi-pseudometric,
    restricts to the input exactly, and vanishes on the fine generator.
    Inputs bounded above 1/2 are rescaled into bound 1/2 and the result is
    scaled back, which preserves restriction exactness.
    """
    bound = inst.d.max_entry()
    if bound > Fraction(1, 2):
        factor = Fraction(1, 2) / bound
        scaled = EmbeddingInstance(
            inst.space, inst.subset, inst.d.scale(factor), inst.subset_space
        )
        result = extend_qpm(scaled)
        inv = 1 / factor
        return ExtensionResult(
            result.extended.scale(inv),
            result.series.scale(inv),
            tuple(tuple(v * inv for v in row) for row in result.bridge),
            result.depth,
        )
    depth = _series_depth(inst.d)
    rho = series_metric(inst, depth=depth)
    n = inst.space.size
    bridge = []
    for x in range(n):
        row = []
        for y in range(n):
            best = min(
                rho.value(x, a) + inst.d.value(i, j) + rho.value(b, y)
                for i, a in enumerate(inst.subset)
                for j, b in enumerate(inst.subset)
            )
            row.append(best)
        bridge.append(tuple(row))
    tilde = [
        [min(rho.value(x, y), bridge[x][y]) for y in range(n)] for x in range(n)
    ]
    extended = validate_qpm(inst.space.labels, tilde)
    for i, x in enumerate(inst.subset):
        for j, y in enumerate(inst.subset):
            if extended.value(x, y) != inst.d.value(i, j):
                raise RuntimeError("extension does not restrict to the input")
    if not is_quasi_uniform_wrt(extended, inst.qu_y):
        raise RuntimeError("extension does not vanish on the fine generator")
    return ExtensionResult(extended, rho, tuple(bridge), depth)


def non_extendability_witness(
    space: FiniteTopology, subset, subset_space: FiniteTopology | None = None
) -> QPM | None:
    """A metric on the subset that no extension can restrict to, if one exists.

    With the trace topology on the subset none exists and None is returned.
    When the subset carries a strictly finer topology, the witness vanishes
    on the subset's own fine generator but takes value 1 on a traced pair, so
    any extension vanishing on the space's fine generator would disagree.
    """
    subset = tuple(sorted(set(subset)))
    if subset_space is None:
        subset_space = subspace_topology(space, subset)
    inclusion = {subset_space.labels[i]: space.labels[x] for i, x in enumerate(subset)}
    if subspace_check(subset_space, space, inclusion):
        return None
    e_x = fine_quniformity(subset_space).generator
    k = len(subset)
    rows = [
        [Fraction(0) if (x, y) in e_x else Fraction(1) for y in range(k)]
        for x in range(k)
    ]
    d = validate_qpm(subset_space.labels, rows)
    gap = _trace_gap(space, subset, subset_space)
    if d.value(*gap) != 1:
        raise RuntimeError("witness does not separate the traced pair")
    return d


def embedding_suite(
    space: FiniteTopology,
    subset,
    trials: int,
    seed: int = 0,
    subset_space: FiniteTopology | None = None,
    grid=(Fraction(0), Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)),
) -> dict:
    """Run random bounded extension trials and report exact restriction.

    When the trace check holds every random metric must extend exactly; when
    it fails the witness metric is reported as non-extendable instead.
    """
    subset = tuple(sorted(set(subset)))
    if subset_space is None:
        subset_space = subspace_topology(space, subset)
    inclusion = {subset_space.labels[i]: space.labels[x] for i, x in enumerate(subset)}
    embedded = subspace_check(subset_space, space, inclusion)
    report = {
        "subspace_check": embedded,
        "trials": [],
    }
    if not embedded:
        witness = non_extendability_witness(space, subset, subset_space)
        gap = _trace_gap(space, subset, subset_space)
        report["witness"] = {
            "matrix": [[str(v) for v in row] for row in witness.rows],
            "pair": [subset_space.labels[gap[0]], subset_space.labels[gap[1]]],
        }
        return report
    rng = random.Random(seed)
    e_x = fine_quniformity(subset_space).generator
    k = len(subset)
    positive = [v for v in grid if v > 0]
    for trial in range(trials):
        trial_seed = rng.randrange(2**63)
        local = random.Random(trial_seed)
        rows = [
            [
                Fraction(0) if (x, y) in e_x else local.choice(positive)
                for y in range(k)
            ]
            for x in range(k)
        ]
        d = validate_qpm(subset_space.labels, min_plus_closure(rows))
        inst = EmbeddingInstance(space, subset, d, subset_space)
        result = extend_qpm(inst)
        errors = [
            abs(result.extended.value(x, y) - d.value(i, j))
            for i, x in enumerate(subset)
            for j, y in enumerate(subset)
        ]
        status = "extended" if max(errors, default=Fraction(0)) == 0 else "mismatch"
        report["trials"].append(
            {
                "trial": trial,
                "seed": trial_seed,
                "status": status,
                "max_restriction_error": str(max(errors, default=Fraction(0))),
            }
        )
    return report
