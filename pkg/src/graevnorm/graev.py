"""Graev quasi-prenorms on free and free Abelian group words.

The norm of a group word is the minimum, over insertions of identity letters
and pairings of the padded positions (non-crossing pairings in the free case,
arbitrary pairings in the Abelian case), of half the sum of letter distances
between paired positions.  A brute-force enumerator serves as the oracle; an
interval dynamic program (free) and a minimum-weight perfect matching
(Abelian) compute the same values without enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm

import networkx as nx
import numpy as np

from .qpspace import QPM, LetterMetric, NonpositiveRadius, extend_metric
from .words import (
    NEUTRAL,
    AbelianWord,
    Word,
    invert,
    letter_point_id,
    multiply,
    reduce,
)


class OddLength(ValueError):
    pass


class NotReduced(ValueError):
    pass


class NeutralInput(ValueError):
    pass


@dataclass(frozen=True)
class Scheme:
    """Partition of {1..2n} into pairs whose index intervals never cross."""

    n: int
    pairs: tuple[tuple[int, int], ...]

    def __init__(self, n: int, pairs) -> None:
        pairs = tuple(sorted(tuple(sorted(p)) for p in pairs))
        endpoints = sorted(i for p in pairs for i in p)
        if endpoints != list(range(1, 2 * n + 1)):
            raise ValueError(f"pairs do not partition 1..{2 * n}")
        for (a1, b1), (a2, b2) in itertools.combinations(pairs, 2):
            if a1 < a2 < b1 < b2:
                raise ValueError(f"crossing pairs ({a1}, {b1}) and ({a2}, {b2})")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "pairs", pairs)

    @cached_property
    def partner_map(self) -> dict[int, int]:
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def partner(self, i: int) -> int:
        return self.partner_map[i]


@dataclass(frozen=True)
class AbelianScheme:
    """Fixed-point-free involution of {1..2n}, stored as its pairs."""

    n: int
    pairs: tuple[tuple[int, int], ...]

    def __init__(self, n: int, pairs) -> None:
        pairs = tuple(sorted(tuple(sorted(p)) for p in pairs))
        endpoints = sorted(i for p in pairs for i in p)
        if endpoints != list(range(1, 2 * n + 1)):
            raise ValueError(f"pairs do not partition 1..{2 * n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "pairs", pairs)

    @cached_property
    def partner_map(self) -> dict[int, int]:
        out = {}
        for a, b in self.pairs:
            out[a] = b
            out[b] = a
        return out

    def partner(self, i: int) -> int:
        return self.partner_map[i]


def _noncrossing_pairings(positions: tuple[int, ...]):
    if not positions:
        yield ()
        return
    first = positions[0]
    for idx in range(1, len(positions), 2):
        partner = positions[idx]
        for inner in _noncrossing_pairings(positions[1:idx]):
            for outer in _noncrossing_pairings(positions[idx + 1 :]):
                yield ((first, partner),) + inner + outer


def _all_pairings(positions: tuple[int, ...]):
    if not positions:
        yield ()
        return
    first = positions[0]
    for idx in range(1, len(positions)):
        partner = positions[idx]
        rest = positions[1:idx] + positions[idx + 1 :]
        for inner in _all_pairings(rest):
            yield ((first, partner),) + inner


def enumerate_schemes(n: int):
    """All non-crossing pair partitions of {1..2n}, in lexicographic order.

    The count is the n-th Catalan number.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    for pairs in _noncrossing_pairings(tuple(range(1, 2 * n + 1))):
        yield Scheme(n, pairs)


def enumerate_abelian_schemes(n: int):
    """All fixed-point-free involutions of {1..2n}; count (2n-1)!!."""
    if n < 1:
        raise ValueError("n must be at least 1")
    for pairs in _all_pairings(tuple(range(1, 2 * n + 1))):
        yield AbelianScheme(n, pairs)


@lru_cache(maxsize=None)
def _scheme_list(n: int) -> tuple[Scheme, ...]:
    if n == 0:
        return (Scheme(0, ()),)
    return tuple(enumerate_schemes(n))


@lru_cache(maxsize=None)
def _scheme_pair_arrays(n: int):
    """0-based endpoint arrays (schemes x n) for the canonical scheme order."""
    schemes = _scheme_list(n)
    a = np.array([[p[0] - 1 for p in s.pairs] for s in schemes], dtype=np.int16)
    b = np.array([[p[1] - 1 for p in s.pairs] for s in schemes], dtype=np.int16)
    return a, b


@lru_cache(maxsize=None)
def _e_position_combos(two_n: int, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(two_n), k))


def _padded_letters(g_letters: tuple[int, ...], two_n: int, e_positions) -> tuple[int, ...]:
    letters = [NEUTRAL] * two_n
    fill = iter(g_letters)
    for i in range(two_n):
        if i not in e_positions:
            letters[i] = next(fill)
    return tuple(letters)


def _as_letter_metric(rho) -> LetterMetric:
    return rho if isinstance(rho, LetterMetric) else extend_metric(rho)


def scheme_cost(word: Word, scheme, rho) -> Fraction:
    """Half the sum over positions i of the letter distance from the inverse
    of letter i to the letter paired with i."""
    star = _as_letter_metric(rho)
    letters = word.letters
    if len(letters) % 2:
        raise OddLength(f"word length {len(letters)} is odd")
    if len(letters) != 2 * scheme.n:
        raise ValueError("scheme size does not match the word length")
    total = sum(
        star.value(-letters[i - 1], letters[scheme.partner(i) - 1])
        for i in range(1, len(letters) + 1)
    )
    return total / 2


def _pair_cost(star: LetterMetric, u: int, v: int) -> Fraction:
    return (star.value(-u, v) + star.value(-v, u)) / 2


@dataclass(frozen=True)
class NormResult:
    value: Fraction
    witness_word: Word
    witness_scheme: Scheme | AbelianScheme


def _letter_codes(letters: tuple[int, ...]):
    alphabet = [NEUTRAL] + sorted(set(letters) - {NEUTRAL})
    code = {letter: i for i, letter in enumerate(alphabet)}
    return alphabet, code


def _int_cost_table(alphabet, star):
    """Pair costs as integers over a common denominator."""
    m = len(alphabet)
    table = [[_pair_cost(star, alphabet[i], alphabet[j]) for j in range(m)] for i in range(m)]
    scale = lcm(*(v.denominator for row in table for v in row))
    ints = [[int(v * scale) for v in row] for row in table]
    return ints, scale


# With 64-bit accumulators the vectorized path is safe while n * max_cost
# stays well below 2**63; otherwise fall back to exact Python integers.
_INT64_SAFE = 2**60


def _level_minimum_numpy(g_letters, n, ints, code):
    two_n = 2 * n
    k = two_n - len(g_letters)
    combos = _e_position_combos(two_n, k)
    coded = np.array([code[l] for l in g_letters], dtype=np.int64)
    m = len(ints)
    if k == 0:
        pad = coded.reshape(1, -1)
    else:
        pad = np.zeros((len(combos), two_n), dtype=np.int64)
        mask = np.zeros((len(combos), two_n), dtype=bool)
        rows = np.arange(len(combos))[:, None]
        mask[rows, np.array(combos, dtype=np.int64)] = True
        slots = np.nonzero(~mask)[1].reshape(len(combos), len(g_letters))
        pad[rows, slots] = coded
    flat = np.array(ints, dtype=np.int64).reshape(-1)
    arr_a, arr_b = _scheme_pair_arrays(n)
    columns: dict[tuple[int, int], np.ndarray] = {}
    best = None  # (value, pad_idx, scheme_idx)
    for s_idx in range(arr_a.shape[0]):
        cost = None
        for a, b in zip(arr_a[s_idx], arr_b[s_idx]):
            key = (int(a), int(b))
            col = columns.get(key)
            if col is None:
                col = flat[pad[:, key[0]] * m + pad[:, key[1]]]
                columns[key] = col
            cost = col.copy() if cost is None else cost + col
        value = int(cost.min())
        if best is None or value < best[0]:
            best = (value, int(cost.argmin()), s_idx)
        elif value == best[0]:
            pad_idx = int(cost.argmin())
            if pad_idx < best[1]:
                best = (value, pad_idx, s_idx)
    return best


def _level_minimum_python(g_letters, n, ints, code):
    two_n = 2 * n
    k = two_n - len(g_letters)
    schemes = _scheme_list(n)
    best = None
    for pad_idx, e_positions in enumerate(_e_position_combos(two_n, k)):
        letters = _padded_letters(g_letters, two_n, e_positions)
        coded = [code[l] for l in letters]
        for s_idx, scheme in enumerate(schemes):
            value = sum(ints[coded[a - 1]][coded[b - 1]] for a, b in scheme.pairs)
            if best is None or value < best[0]:
                best = (value, pad_idx, s_idx)
    return best


def norm_oracle(g: Word, rho, widen: int = 0) -> NormResult:
    """Brute-force norm: minimum cost over all identity-letter paddings of the
    reduced word with half-length from ceil(len/2) to len (plus ``widen``
    extra levels) and all non-crossing pairings of the padded positions.

    Ties break toward the smallest padded length, then the lexicographically
    smallest insertion positions, then the lexicographically smallest pairing.
    """
    star = _as_letter_metric(rho)
    g = reduce(g)
    if g.is_identity():
        return NormResult(Fraction(0), Word(), Scheme(0, ()))
    length = len(g)
    alphabet, code = _letter_codes(g.letters)
    ints, scale = _int_cost_table(alphabet, star)
    max_cost = max(v for row in ints for v in row)
    best = None  # (scaled value, n, pad_idx, scheme_idx)
    for n in range((length + 1) // 2, length + widen + 1):
        if max_cost * n < _INT64_SAFE:
            level = _level_minimum_numpy(g.letters, n, ints, code)
        else:
            level = _level_minimum_python(g.letters, n, ints, code)
        if best is None or level[0] < best[0]:
            best = (level[0], n, level[1], level[2])
    value_int, n, pad_idx, scheme_idx = best
    e_positions = _e_position_combos(2 * n, 2 * n - length)[pad_idx]
    witness = Word(_padded_letters(g.letters, 2 * n, e_positions))
    scheme = _scheme_list(n)[scheme_idx]
    value = Fraction(value_int, scale)
    assert scheme_cost(witness, scheme, star) == value
    return NormResult(value, witness, scheme)


def _dp_tables(letters: tuple[int, ...], star: LetterMetric):
    length = len(letters)
    close = [_pair_cost(star, l, NEUTRAL) for l in letters]
    pair = [
        [_pair_cost(star, letters[i], letters[j]) for j in range(length)]
        for i in range(length)
    ]
    cost: dict[tuple[int, int], Fraction] = {}
    choice: dict[tuple[int, int], tuple] = {}

    def get(i: int, j: int) -> Fraction:
        return cost[(i, j)] if i <= j else Fraction(0)

    for span in range(1, length + 1):
        for i in range(length - span + 1):
            j = i + span - 1
            best = close[i] + get(i + 1, j)
            pick = ("close",)
            for k in range(i + 1, j + 1):
                c = pair[i][k] + get(i + 1, k - 1) + get(k + 1, j)
                if c < best:
                    best, pick = c, ("pair", k)
            cost[(i, j)] = best
            choice[(i, j)] = pick
    return cost, choice


def norm_dp(g: Word, rho) -> Fraction:
    """Interval dynamic program for the norm.

    The cost of a segment is the best of closing its first letter against a
    virtual identity letter or pairing it with a later letter, splitting the
    segment into independent inner and outer parts.  Equals the brute-force
    norm on every input.
    """
    star = _as_letter_metric(rho)
    g = reduce(g)
    if g.is_identity():
        return Fraction(0)
    cost, _ = _dp_tables(g.letters, star)
    return cost[(0, len(g.letters) - 1)]


def norm_dp_result(g: Word, rho) -> NormResult:
    """Norm with a padded witness reconstructed from the dynamic program."""
    star = _as_letter_metric(rho)
    g = reduce(g)
    if g.is_identity():
        return NormResult(Fraction(0), Word(), Scheme(0, ()))
    cost, choice = _dp_tables(g.letters, star)
    letters = g.letters

    def build(i: int, j: int):
        if i > j:
            return [], []
        pick = choice[(i, j)]
        if pick[0] == "close":
            sub_w, sub_p = build(i + 1, j)
            word = [letters[i], NEUTRAL] + sub_w
            pairs = [(1, 2)] + [(a + 2, b + 2) for a, b in sub_p]
            return word, pairs
        k = pick[1]
        inner_w, inner_p = build(i + 1, k - 1)
        outer_w, outer_p = build(k + 1, j)
        offset = len(inner_w) + 2
        word = [letters[i]] + inner_w + [letters[k]] + outer_w
        pairs = (
            [(1, offset)]
            + [(a + 1, b + 1) for a, b in inner_p]
            + [(a + offset, b + offset) for a, b in outer_p]
        )
        return word, pairs

    word, pairs = build(0, len(letters) - 1)
    witness = Word(word)
    scheme = Scheme(len(word) // 2, pairs)
    value = cost[(0, len(letters) - 1)]
    assert scheme_cost(witness, scheme, star) == value
    return NormResult(value, witness, scheme)


def _padded_abelian_letters(h: AbelianWord) -> tuple[int, ...]:
    letters = h.signed_letters()
    if len(letters) % 2:
        letters = letters + (NEUTRAL,)
    return letters


def abelian_norm_oracle(h: AbelianWord, rho) -> NormResult:
    """Brute-force Abelian norm: minimum cost over all involutions of the
    letter multiset, padded with one identity letter when the length is odd."""
    star = _as_letter_metric(rho)
    if h.is_identity():
        return NormResult(Fraction(0), Word(), AbelianScheme(0, ()))
    letters = _padded_abelian_letters(h)
    k = len(letters) // 2
    best = None
    for scheme in enumerate_abelian_schemes(k):
        value = sum(_pair_cost(star, letters[a - 1], letters[b - 1]) for a, b in scheme.pairs)
        if best is None or value < best[0]:
            best = (value, scheme)
    word = Word(letters)
    result = NormResult(best[0], word, best[1])
    assert scheme_cost(word, best[1], star) == best[0]
    return result


def _min_weight_matching(letters: tuple[int, ...], star: LetterMetric):
    """Exact minimum-weight perfect matching of the letters under pair costs.

    Weights are scaled to integers so the blossom algorithm runs in exact
    arithmetic; maximum-cardinality matching on inverted weights gives the
    minimum-weight perfect matching of the complete graph.
    """
    m = len(letters)
    if m == 0:
        return Fraction(0), ()
    weights = {
        (i, j): _pair_cost(star, letters[i], letters[j])
        for i in range(m)
        for j in range(i + 1, m)
    }
    scale = lcm(*(w.denominator for w in weights.values()))
    ints = {pair: int(w * scale) for pair, w in weights.items()}
    top = max(ints.values()) + 1
    graph = nx.Graph()
    graph.add_nodes_from(range(m))
    for (i, j), w in ints.items():
        graph.add_edge(i, j, weight=top - w)
    mate = nx.max_weight_matching(graph, maxcardinality=True)
    pairs = tuple(sorted(tuple(sorted(p)) for p in mate))
    if len(pairs) != m // 2:
        raise RuntimeError("matching is not perfect")
    value = sum(weights[p] for p in pairs)
    return value, tuple((a + 1, b + 1) for a, b in pairs)


def abelian_norm_matching(h: AbelianWord, rho) -> Fraction:
    """Abelian norm via minimum-weight perfect matching of the padded letters."""
    star = _as_letter_metric(rho)
    if h.is_identity():
        return Fraction(0)
    letters = _padded_abelian_letters(h)
    value, _ = _min_weight_matching(letters, star)
    return value


def graev_dist(g: Word, h: Word, rho) -> Fraction:
    """Left-invariant distance: norm of g^-1 h."""
    return norm_dp(multiply(invert(g), h), rho)


def graev_dist_abelian(g: AbelianWord, h: AbelianWord, rho) -> Fraction:
    """Translation-invariant Abelian distance: norm of h - g."""
    return abelian_norm_matching(h - g, rho)


def ball_membership(g, rho, eps) -> bool:
    """Whether the norm of g is strictly below eps."""
    eps = Fraction(eps)
    if eps <= 0:
        raise NonpositiveRadius(f"radius must be positive, got {eps}")
    if isinstance(g, AbelianWord):
        return abelian_norm_matching(g, rho) < eps
    return norm_dp(g, rho) < eps


@dataclass(frozen=True)
class PairDecomposition:
    """h written as a sum of differences -u_i + v_i whose costs add up to the
    norm; when the norm is below 1 the pairs come from generator points only."""

    value: Fraction
    pairs: tuple[tuple[int, int], ...]
    point_pairs: tuple[tuple[int, int], ...] | None


def decompose_abelian(h: AbelianWord, rho) -> PairDecomposition:
    """Optimal pairing of an Abelian word as signed-difference summands.

    Returns letter pairs (u_i, v_i) with h equal to the sum of -u_i + v_i and
    the letter distances from u_i to v_i summing to the norm.  When the norm
    is below 1 the letters pair one negative against one positive generator,
    and the point pairs (y_i, z_i) with base distances summing to the norm
    are returned as well.
    """
    star = _as_letter_metric(rho)
    if h.is_identity():
        raise NeutralInput("cannot decompose the identity element")
    letters = _padded_abelian_letters(h)
    value, pairs = _min_weight_matching(letters, star)
    oriented = []
    for a, b in pairs:
        s, t = letters[a - 1], letters[b - 1]
        if s == NEUTRAL or (s > 0 and t < 0):
            s, t = t, s
        oriented.append((-s, t))
    # identity letter, if any, goes in the final summand
    oriented.sort(key=lambda uv: (uv[1] == NEUTRAL, uv))
    total = AbelianWord()
    cost = Fraction(0)
    for u, v in oriented:
        term = AbelianWord()
        if u != NEUTRAL:
            term = term + AbelianWord({letter_point_id(u): -1 if u > 0 else 1})
        if v != NEUTRAL:
            term = term + AbelianWord({letter_point_id(v): 1 if v > 0 else -1})
        total = total + term
        cost += star.value(u, v)
    if total != h or cost != value:
        raise RuntimeError("decomposition failed to reproduce the element")
    point_pairs = None
    if value < 1:
        point_pairs = []
        for u, v in oriented:
            if not (u > 0 and v > 0):
                raise RuntimeError("norm below 1 must pair a negative with a positive letter")
            point_pairs.append((letter_point_id(u), letter_point_id(v)))
        base_sum = sum(
            (rho if isinstance(rho, QPM) else star.base).value(y, z) for y, z in point_pairs
        )
        if base_sum != value:
            raise RuntimeError("point pair costs do not add up to the norm")
        point_pairs = tuple(point_pairs)
    return PairDecomposition(value, tuple(oriented), point_pairs)


def scheme_factorization(g: Word, scheme: Scheme):
    """Factor a reduced even-length word along a non-crossing pairing.

    Returns indices i_1 < ... < i_n (one endpoint per pair, 1-based) and
    conjugator words h_1..h_n such that the product of
    h_k x_{i_k} x_{partner(i_k)} h_k^-1 reduces back to g.  Pairs are emitted
    outermost first; the conjugator accumulates the inverses of the closing
    letters of the pairs still open to the left.
    """
    if not g.reduced:
        raise NotReduced("expected a reduced word")
    letters = g.letters
    if len(letters) % 2:
        raise OddLength(f"word length {len(letters)} is odd")
    if len(letters) != 2 * scheme.n:
        raise ValueError("scheme size does not match the word length")
    partner = scheme.partner_map
    indices: list[int] = []
    conjugators: list[Word] = []

    def go(lo: int, hi: int, conj: tuple[int, ...]) -> None:
        if lo > hi:
            return
        m = partner[lo + 1] - 1
        indices.append(lo + 1)
        conjugators.append(reduce(Word(conj)))
        go(lo + 1, m - 1, conj + (-letters[m],))
        go(m + 1, hi, conj)

    go(0, len(letters) - 1, ())
    product = Word()
    for i, conj in zip(indices, conjugators):
        factor = multiply(
            multiply(conj, Word((letters[i - 1], letters[partner[i] - 1]))), invert(conj)
        )
        product = multiply(product, factor)
    if product != g:
        raise RuntimeError("factorization failed to reproduce the word")
    return tuple(indices), tuple(conjugators)
