"""Seeded random instances: spaces, words, chains, topologies and group
fixtures.  All generation goes through random.Random so identical seeds give
identical instances everywhere."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .qpspace import QPM, min_plus_closure, validate_qpm
from .quniform import (
    Entourage,
    EntourageChain,
    FiniteTopology,
    compose,
    fine_quniformity,
    full_relation,
    subspace_topology,
)
from .words import AbelianWord, Word

VALUE_GRID = (
    Fraction(0),
    Fraction(1, 8),
    Fraction(1, 4),
    Fraction(1, 2),
    Fraction(3, 4),
    Fraction(1),
)

# no point may be labelled like the identity token "e"
_LABELS = "abcdfghijk"


def point_labels(n: int) -> list[str]:
    return list(_LABELS[:n])


def random_qpm(rng: random.Random, n: int, grid=VALUE_GRID, zero_pairs=()) -> QPM:
    """Random quasi-pseudometric: grid entries forced through the min-plus
    closure so the triangle inequality holds exactly."""
    rows = [[Fraction(0)] * n for _ in range(n)]
    for x in range(n):
        for y in range(n):
            if x != y:
                rows[x][y] = rng.choice(grid)
    for x, y in zero_pairs:
        rows[x][y] = Fraction(0)
    return validate_qpm(point_labels(n), min_plus_closure(rows))


def instance_a() -> QPM:
    """Two points with distances 1/4 and 1; the standard asymmetric example."""
    return validate_qpm(["a", "b"], [[0, Fraction(1, 4)], [1, 0]])


def random_reduced_word(rng: random.Random, n_points: int, length: int) -> Word:
    letters: list[int] = []
    alphabet = [i + 1 for i in range(n_points)] + [-(i + 1) for i in range(n_points)]
    while len(letters) < length:
        choices = [a for a in alphabet if not letters or a != -letters[-1]]
        letters.append(rng.choice(choices))
    return Word(letters)


def random_word(rng: random.Random, n_points: int, length: int) -> Word:
    """Unreduced word; may contain neutral letters and adjacent inverses."""
    alphabet = [0] + [i + 1 for i in range(n_points)] + [-(i + 1) for i in range(n_points)]
    return Word(rng.choice(alphabet) for _ in range(length))


def random_abelian(rng: random.Random, n_points: int, max_length: int) -> AbelianWord:
    coeffs = {}
    budget = rng.randint(1, max_length)
    while budget > 0:
        pid = rng.randrange(n_points)
        c = rng.randint(1, budget) * rng.choice((1, -1))
        coeffs[pid] = coeffs.get(pid, 0) + c
        budget -= abs(c)
    return AbelianWord(coeffs)


def random_balanced_abelian(rng: random.Random, n_points: int, pair_count: int) -> AbelianWord:
    """Sum of differences of generators, so the norm stays below the cheap
    matching total."""
    h = AbelianWord()
    for _ in range(pair_count):
        y = rng.randrange(n_points)
        z = rng.randrange(n_points)
        h = h + AbelianWord({y: -1}) + AbelianWord({z: 1})
    return h


def random_entourage(rng: random.Random, n: int, extra: int) -> Entourage:
    pairs = set((x, x) for x in range(n))
    candidates = [(x, y) for x in range(n) for y in range(n) if x != y]
    rng.shuffle(candidates)
    pairs.update(candidates[:extra])
    return Entourage(n, pairs)


def random_chain(rng: random.Random, n: int, depth: int) -> EntourageChain:
    """Random valid chain, built deepest-first: each level is the triple
    composition of the next plus random extra pairs."""
    deepest = random_entourage(rng, n, rng.randint(0, n))
    chain = [deepest]
    for _ in range(depth - 1):
        below = chain[0]
        cube = compose(compose(below, below), below)
        extra = random_entourage(rng, n, rng.randint(0, n))
        chain.insert(0, Entourage(n, cube.pairs | extra.pairs))
    chain.insert(0, full_relation(n))
    return EntourageChain(chain)


def random_preorder(rng: random.Random, n: int, extra: int | None = None) -> Entourage:
    """Random reflexive transitive relation (equivalently a finite topology)."""
    if extra is None:
        extra = rng.randint(0, n)
    rel = random_entourage(rng, n, extra)
    while True:
        squared = compose(rel, rel)
        if squared == rel:
            return rel
        rel = squared


def random_topology(rng: random.Random, n: int) -> FiniteTopology:
    rel = random_preorder(rng, n)
    return FiniteTopology(point_labels(n), [rel.image(x) for x in range(n)])


def random_quasi_uniform_qpm(
    rng: random.Random, space: FiniteTopology, grid=VALUE_GRID
) -> QPM:
    """Random metric on the space vanishing exactly on its fine generator."""
    gen = fine_quniformity(space).generator
    positive = [v for v in grid if v > 0]
    n = space.size
    rows = [
        [Fraction(0) if (x, y) in gen else rng.choice(positive) for y in range(n)]
        for x in range(n)
    ]
    return validate_qpm(space.labels, min_plus_closure(rows))


def cyclic_table(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def symmetric_table(n: int) -> list[list[int]]:
    """Multiplication table of the symmetric group on n symbols; the identity
    permutation gets index 0."""
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    return [
        [index[tuple(a[b[i]] for i in range(n))] for b in perms] for a in perms
    ]


def random_subset_chain(
    rng: random.Random, table: list[list[int]], depth: int
) -> list[list[int]]:
    """Chain of subsets containing the identity with each cube inside the
    previous level, built deepest-first."""
    order = len(table)
    identity = next(
        e for e in range(order) if all(table[e][x] == x for x in range(order))
    )

    def product(a, b):
        return {table[x][y] for x in a for y in b}

    deepest = {identity}
    others = [x for x in range(order) if x != identity]
    rng.shuffle(others)
    deepest.update(others[: rng.randint(0, 1)])
    chain = [deepest]
    for _ in range(depth - 1):
        below = chain[0]
        cube = product(product(below, below), below)
        extras = [x for x in range(order) if x not in cube]
        rng.shuffle(extras)
        cube.update(extras[: rng.randint(0, 2)])
        chain.insert(0, cube)
    return [sorted(s) for s in chain]


def random_chain_product_query(
    rng: random.Random, chain_length: int
) -> tuple[list[int], int]:
    """Indices k_1..k_m and target r with sum(2^-k_i) <= 2^-r."""
    r = rng.randrange(chain_length - 1)
    if rng.random() < 0.3 or r + 1 >= chain_length:
        return [r], r
    m = rng.randint(1, min(3, chain_length - r - 1))
    ks = [rng.randint(r + 1, chain_length - 1) for _ in range(m)]
    while sum(Fraction(1, 2**k) for k in ks) > Fraction(1, 2**r):
        ks = ks[:-1]
    return ks, r


def all_topologies(n: int):
    """Every topology on n labelled points (preorders, via candidate
    reflexive relations filtered for transitivity)."""
    off = [(x, y) for x in range(n) for y in range(n) if x != y]
    base = {(x, x) for x in range(n)}
    for mask in itertools.product((False, True), repeat=len(off)):
        pairs = base | {p for p, keep in zip(off, mask) if keep}
        rel = Entourage(n, pairs)
        if rel.is_transitive():
            yield FiniteTopology(point_labels(n), [rel.image(x) for x in range(n)])


def failing_embedding_fixtures(max_points: int = 3):
    """Triples (space, subset, finer subset topology) whose trace check fails.

    Searches all small spaces and all strictly finer topologies on two-point
    subsets whose inclusion stays continuous.
    """
    fixtures = []
    for space in all_topologies(max_points):
        for subset in itertools.combinations(range(space.size), 2):
            trace = subspace_topology(space, subset)
            for candidate in all_topologies(2):
                relabeled = FiniteTopology(trace.labels, candidate.min_nbhd)
                finer = all(
                    relabeled.min_nbhd[x] <= trace.min_nbhd[x] for x in range(2)
                )
                if finer and relabeled.min_nbhd != trace.min_nbhd:
                    fixtures.append((space, subset, relabeled))
    return fixtures
