"""Finite quasi-uniform spaces as principal entourage filters.

On a finite topological space the finest compatible quasi-uniformity is the
filter of all supersets of E = {(x, y): y in U_x}, where U_x is the minimal
open set containing x.  E is reflexive and transitive, so a quasi-uniformity
is represented here by that single generator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction


class GroundMismatch(ValueError):
    pass


class InvalidTopology(ValueError):
    pass


class NotASubset(ValueError):
    pass


class NotAnEmbedding(ValueError):
    pass


class NotInFilter(ValueError):
    pass


class InvalidChain(ValueError):
    def __init__(self, index: int, message: str) -> None:
        super().__init__(message)
        self.index = index


class PreconditionViolation(ValueError):
    pass


@dataclass(frozen=True)
class Entourage:
    """Reflexive relation on points 0..size-1, stored as a frozenset of pairs."""

    size: int
    pairs: frozenset

    def __init__(self, size: int, pairs) -> None:
        pairs = frozenset((int(a), int(b)) for a, b in pairs)
        for a, b in pairs:
            if not (0 <= a < size and 0 <= b < size):
                raise ValueError(f"pair ({a}, {b}) outside ground set of size {size}")
        missing = [x for x in range(size) if (x, x) not in pairs]
        if missing:
            raise ValueError(f"entourage not reflexive at point {missing[0]}")
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "pairs", pairs)

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def image(self, x: int) -> frozenset:
        return frozenset(b for a, b in self.pairs if a == x)

    def is_transitive(self) -> bool:
        return compose(self, self) == self


def diagonal(size: int) -> Entourage:
    return Entourage(size, ((x, x) for x in range(size)))


def full_relation(size: int) -> Entourage:
    return Entourage(size, itertools.product(range(size), repeat=2))


def compose(u: Entourage, v: Entourage) -> Entourage:
    """{(x, z): some y with (x, y) in u and (y, z) in v}."""
    if u.size != v.size:
        raise GroundMismatch(f"ground sets differ: {u.size} vs {v.size}")
    succ = [v.image(y) for y in range(v.size)]
    pairs = set()
    for a, b in u.pairs:
        for c in succ[b]:
            pairs.add((a, c))
    return Entourage(u.size, pairs)


def inverse(u: Entourage) -> Entourage:
    return Entourage(u.size, ((b, a) for a, b in u.pairs))


@dataclass(frozen=True)
class FiniteTopology:
    """Finite topology, canonically the minimal-open-neighbourhood assignment."""

    labels: tuple[str, ...]
    min_nbhd: tuple[frozenset, ...]

    def __init__(self, labels, min_nbhd) -> None:
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise InvalidTopology("duplicate point labels")
        nbhds = tuple(frozenset(s) for s in min_nbhd)
        if len(nbhds) != len(labels):
            raise InvalidTopology("one minimal neighbourhood per point required")
        n = len(labels)
        for x, u in enumerate(nbhds):
            if x not in u:
                raise InvalidTopology(f"minimal neighbourhood of {labels[x]} misses the point")
            if any(y < 0 or y >= n for y in u):
                raise InvalidTopology("neighbourhood member outside the point set")
        for x, u in enumerate(nbhds):
            for y in u:
                if not nbhds[y] <= u:
                    raise InvalidTopology(
                        f"minimal neighbourhoods inconsistent at {labels[x]}, {labels[y]}"
                    )
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "min_nbhd", nbhds)

    @property
    def size(self) -> int:
        return len(self.labels)

    def opens(self) -> frozenset:
        """The full open-set family (all unions of minimal neighbourhoods)."""
        family = {frozenset()}
        for r in range(1, self.size + 1):
            for combo in itertools.combinations(range(self.size), r):
                family.add(frozenset().union(*(self.min_nbhd[x] for x in combo)))
        return frozenset(family)

    def is_open(self, subset) -> bool:
        subset = frozenset(subset)
        return all(self.min_nbhd[x] <= subset for x in subset)


def topology_from_opens(labels, opens) -> FiniteTopology:
    """Build from an explicit open-set family, validating closure properties."""
    labels = tuple(labels)
    n = len(labels)
    family = {frozenset(o) for o in opens}
    whole = frozenset(range(n))
    if frozenset() not in family or whole not in family:
        raise InvalidTopology("open family must contain the empty set and the whole set")
    for a, b in itertools.combinations(family, 2):
        if a | b not in family:
            raise InvalidTopology(f"family not closed under union: {sorted(a)} | {sorted(b)}")
        if a & b not in family:
            raise InvalidTopology(f"family not closed under intersection: {sorted(a)} & {sorted(b)}")
    nbhds = []
    for x in range(n):
        containing = [o for o in family if x in o]
        nbhds.append(frozenset.intersection(*containing))
    topo = FiniteTopology(labels, nbhds)
    extra = [o for o in family if not topo.is_open(o)]
    if extra:
        raise InvalidTopology(f"inconsistent open family at {sorted(extra[0])}")
    return topo


def discrete_topology(labels) -> FiniteTopology:
    labels = tuple(labels)
    return FiniteTopology(labels, [{x} for x in range(len(labels))])


def indiscrete_topology(labels) -> FiniteTopology:
    labels = tuple(labels)
    whole = frozenset(range(len(labels)))
    return FiniteTopology(labels, [whole] * len(labels))


def subspace_topology(space: FiniteTopology, subset) -> FiniteTopology:
    """Trace topology on a subset (traced minimal neighbourhoods)."""
    subset = sorted(set(subset))
    if any(x < 0 or x >= space.size for x in subset):
        raise NotASubset("subset point outside the space")
    local = {x: i for i, x in enumerate(subset)}
    nbhds = [frozenset(local[y] for y in space.min_nbhd[x] if y in local) for x in subset]
    return FiniteTopology([space.labels[x] for x in subset], nbhds)


@dataclass(frozen=True)
class QuasiUniformity:
    """Principal filter of all supersets of a reflexive transitive generator."""

    generator: Entourage

    def __post_init__(self) -> None:
        if not self.generator.is_transitive():
            raise ValueError("principal generator must be transitive")

    @property
    def size(self) -> int:
        return self.generator.size

    def contains(self, u: Entourage) -> bool:
        return u.size == self.size and self.generator.pairs <= u.pairs


def fine_quniformity(space: FiniteTopology) -> QuasiUniformity:
    """Finest quasi-uniformity inducing the topology: generated by y in U_x."""
    pairs = {(x, y) for x in range(space.size) for y in space.min_nbhd[x]}
    return QuasiUniformity(Entourage(space.size, pairs))


def restrict(qu: QuasiUniformity, subset) -> QuasiUniformity:
    """Trace quasi-uniformity on a subset: generator intersected with the square."""
    subset = sorted(set(subset))
    if any(x < 0 or x >= qu.size for x in subset):
        raise NotASubset("subset point outside the ground set")
    local = {x: i for i, x in enumerate(subset)}
    pairs = {(local[a], local[b]) for a, b in qu.generator.pairs if a in local and b in local}
    return QuasiUniformity(Entourage(len(subset), pairs))


def induced_topology(qu: QuasiUniformity, labels=None) -> FiniteTopology:
    """Topology generated by the entourage balls E[x]."""
    labels = tuple(labels) if labels is not None else tuple(f"p{i}" for i in range(qu.size))
    return FiniteTopology(labels, [qu.generator.image(x) for x in range(qu.size)])


def subspace_check(
    x_space: FiniteTopology, y_space: FiniteTopology, inclusion=None
) -> bool:
    """Whether the trace of the fine quasi-uniformity of Y on X is fine for X.

    ``inclusion`` maps X labels to Y labels (identity by default).  The
    inclusion must at least be continuous: every traced minimal neighbourhood
    must be open in X.  When X carries exactly the subspace topology the
    answer is always True on finite spaces; a strictly finer topology on X
    yields False.
    """
    y_index = {label: i for i, label in enumerate(y_space.labels)}
    if inclusion is None:
        inclusion = {label: label for label in x_space.labels}
    try:
        image = [y_index[inclusion[label]] for label in x_space.labels]
    except KeyError as exc:
        raise NotAnEmbedding(f"inclusion misses point {exc.args[0]!r}") from exc
    if len(set(image)) != len(image):
        raise NotAnEmbedding("inclusion is not injective")
    trace = subspace_topology(y_space, image)
    order = {x: i for i, x in enumerate(sorted(image))}
    # trace minimal neighbourhoods back in X's own indexing
    position = [order[image[i]] for i in range(x_space.size)]
    for i in range(x_space.size):
        traced = frozenset(position.index(y) for y in trace.min_nbhd[position[i]])
        if not x_space.min_nbhd[i] <= traced:
            raise NotAnEmbedding(
                f"inclusion not continuous at {x_space.labels[i]}"
            )
    e_x = fine_quniformity(x_space).generator
    traced_gen = restrict(fine_quniformity(y_space), image).generator
    lifted = Entourage(
        x_space.size,
        {(position.index(a), position.index(b)) for a, b in traced_gen.pairs},
    )
    return lifted == e_x


def is_quasi_uniform_wrt(d, qu: QuasiUniformity) -> bool:
    """Whether every ball {d < eps} belongs to the filter.

    ``d`` is any quasi-pseudometric with ``size`` and ``value(x, y)``.  With a
    principal filter this reduces to: d vanishes on the generator.
    """
    if d.size != qu.size:
        raise GroundMismatch(f"ground sets differ: {d.size} vs {qu.size}")
    return all(d.value(a, b) == 0 for a, b in qu.generator.pairs)


@dataclass(frozen=True)
class EntourageChain:
    """V_0 = X^2 and V_{i+1} o V_{i+1} o V_{i+1} inside V_i, all reflexive."""

    entourages: tuple[Entourage, ...]

    def __init__(self, entourages) -> None:
        entourages = tuple(entourages)
        if not entourages:
            raise InvalidChain(0, "empty chain")
        size = entourages[0].size
        if entourages[0].pairs != full_relation(size).pairs:
            raise InvalidChain(0, "chain must start with the full relation")
        for i, v in enumerate(entourages):
            if v.size != size:
                raise InvalidChain(i, "mixed ground sets in chain")
        for i in range(len(entourages) - 1):
            nxt = entourages[i + 1]
            cube = compose(compose(nxt, nxt), nxt)
            if not cube.pairs <= entourages[i].pairs:
                raise InvalidChain(
                    i + 1, f"triple composition of V_{i + 1} escapes V_{i}"
                )
        object.__setattr__(self, "entourages", entourages)

    @property
    def size(self) -> int:
        return self.entourages[0].size

    @property
    def depth(self) -> int:
        return len(self.entourages) - 1

    def __getitem__(self, i: int) -> Entourage:
        return self.entourages[i]


def chain_from(qu: QuasiUniformity, v: Entourage, depth: int) -> EntourageChain:
    """Chain X^2, V, E, E, ... of the given depth headed by a filter member."""
    if not qu.contains(v):
        raise NotInFilter("entourage does not contain the principal generator")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    chain = [full_relation(qu.size), v]
    while len(chain) <= depth:
        chain.append(qu.generator)
    return EntourageChain(chain)


def chain_product_check(table, subsets, indices, target: int) -> bool:
    """Containment of a product of chain subsets of a finite group.

    ``table`` is a square multiplication table (``table[a][b]`` is the product
    index), ``subsets`` a list where consecutive members satisfy
    cube(subsets[i+1]) inside subsets[i] and every member contains the
    identity, ``indices`` the factors k_1..k_n of the product and ``target``
    the index r.  Requires sum(2^-k_i) <= 2^-r; under these hypotheses the
    containment always holds.
    """
    order = len(table)
    if any(len(row) != order for row in table):
        raise PreconditionViolation("multiplication table is not square")
    identity = None
    for e in range(order):
        if all(table[e][x] == x and table[x][e] == x for x in range(order)):
            identity = e
            break
    if identity is None:
        raise PreconditionViolation("table has no identity element")
    sets = [frozenset(s) for s in subsets]
    for i, s in enumerate(sets):
        if any(x < 0 or x >= order for x in s):
            raise PreconditionViolation(f"subset {i} mentions an unknown element")
        if identity not in s:
            raise PreconditionViolation(f"identity missing from subset {i}")

    def product(a: frozenset, b: frozenset) -> frozenset:
        return frozenset(table[x][y] for x in a for y in b)

    for i in range(len(sets) - 1):
        cube = product(product(sets[i + 1], sets[i + 1]), sets[i + 1])
        if not cube <= sets[i]:
            raise PreconditionViolation(f"cube of subset {i + 1} escapes subset {i}")
    if not indices:
        raise PreconditionViolation("empty index list")
    if any(k < 0 or k >= len(sets) for k in indices) or not 0 <= target < len(sets):
        raise PreconditionViolation("index outside the chain")
    if sum(Fraction(1, 2**k) for k in indices) > Fraction(1, 2**target):
        raise PreconditionViolation("index weights exceed the target weight")
    acc = sets[indices[0]]
    for k in indices[1:]:
        acc = product(acc, sets[k])
    return acc <= sets[target]
