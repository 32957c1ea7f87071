"""Finite quasi-pseudometric spaces with exact rational distances.

Includes the extension of a bounded metric to the signed letter alphabet
(identity letter at distance 1, cross-signed letters at distance 2), chain
metrization, and the min(1, 4d) rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .quniform import Entourage, EntourageChain
from .words import NEUTRAL, Point, letter_point_id


class NegativeEntry(ValueError):
    pass


class NonzeroDiagonal(ValueError):
    def __init__(self, point: str) -> None:
        super().__init__(f"nonzero diagonal entry at {point}")
        self.point = point


class TriangleViolation(ValueError):
    def __init__(self, x: str, z: str, y: str) -> None:
        super().__init__(f"triangle inequality fails: d({x}, {y}) > d({x}, {z}) + d({z}, {y})")
        self.triple = (x, z, y)


class UnboundedInput(ValueError):
    pass


class NonpositiveRadius(ValueError):
    pass


@dataclass(frozen=True)
class QPM:
    """Quasi-pseudometric on points 0..size-1: zero diagonal and the triangle
    inequality, but no symmetry requirement."""

    points: tuple[Point, ...]
    rows: tuple[tuple[Fraction, ...], ...]
    bound: Fraction | None = None

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def labels(self) -> list[str]:
        return [p.label for p in self.points]

    def value(self, x: int, y: int) -> Fraction:
        return self.rows[x][y]

    def max_entry(self) -> Fraction:
        return max((v for row in self.rows for v in row), default=Fraction(0))

    def is_bounded_by(self, c) -> bool:
        return self.max_entry() <= Fraction(c)

    def scale(self, factor) -> "QPM":
        factor = Fraction(factor)
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        rows = tuple(tuple(v * factor for v in row) for row in self.rows)
        bound = None if self.bound is None else self.bound * factor
        return QPM(self.points, rows, bound)


def _as_points(points) -> tuple[Point, ...]:
    out = []
    for i, p in enumerate(points):
        out.append(p if isinstance(p, Point) else Point(i, str(p)))
    if len({p.label for p in out}) != len(out):
        raise ValueError("duplicate point labels")
    return tuple(out)


def validate_qpm(points, matrix, bound=None) -> QPM:
    """Check the axioms and build a QPM, or raise naming the first violation.

    Scans entries row-major for sign and diagonal violations, then triples
    (x, y, z) for d(x, y) > d(x, z) + d(z, y).
    """
    pts = _as_points(points)
    n = len(pts)
    rows = tuple(tuple(Fraction(v) for v in row) for row in matrix)
    if len(rows) != n or any(len(row) != n for row in rows):
        raise ValueError(f"expected a {n}x{n} matrix")
    for x in range(n):
        for y in range(n):
            if rows[x][y] < 0:
                raise NegativeEntry(f"negative entry at ({pts[x].label}, {pts[y].label})")
    for x in range(n):
        if rows[x][x] != 0:
            raise NonzeroDiagonal(pts[x].label)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if rows[x][y] > rows[x][z] + rows[z][y]:
                    raise TriangleViolation(pts[x].label, pts[z].label, pts[y].label)
    b = None if bound is None else Fraction(bound)
    if b is not None:
        high = [(x, y) for x in range(n) for y in range(n) if rows[x][y] > b]
        if high:
            x, y = high[0]
            raise ValueError(f"entry at ({pts[x].label}, {pts[y].label}) exceeds the bound {b}")
    return QPM(pts, rows, b)


def min_plus_closure(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    """All-pairs shortest paths (Floyd-Warshall) over exact rationals."""
    n = len(rows)
    dist = [list(row) for row in rows]
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            row = dist[i]
            for j in range(n):
                via = dik + dk[j]
                if via < row[j]:
                    row[j] = via
    return dist


class LetterMetric:
    """Lazy extension of a bounded-by-1 QPM to the signed letter alphabet.

    Values follow the case split: 0 on the diagonal, the base metric between
    generators, 1 against the identity letter, the reversed base metric
    between inverse letters, and 2 across signs.
    """

    def __init__(self, base: QPM) -> None:
        if not base.is_bounded_by(1):
            raise UnboundedInput(f"metric entries must be at most 1, found {base.max_entry()}")
        self.base = base

    def neutral_value(self, u: int, v: int) -> Fraction:
        """Extension to generators plus the identity letter (codes >= 0)."""
        if u < 0 or v < 0:
            raise ValueError("expected nonnegative letter codes")
        if u == v:
            return Fraction(0)
        if u != NEUTRAL and v != NEUTRAL:
            return self.base.value(letter_point_id(u), letter_point_id(v))
        return Fraction(1)

    def value(self, u: int, v: int) -> Fraction:
        if u == v:
            return Fraction(0)
        if u >= 0 and v >= 0:
            return self.neutral_value(u, v)
        if u <= 0 and v <= 0:
            return self.neutral_value(-v, -u)
        return Fraction(2)

    def _letter_order(self) -> list[int]:
        n = self.base.size
        return [i + 1 for i in range(n)] + [NEUTRAL] + [-(i + 1) for i in range(n)]

    def materialize(self) -> QPM:
        """Explicit QPM on the 2n+1 letter alphabet, for validation."""
        letters = self._letter_order()
        labels = []
        for letter in letters:
            if letter == NEUTRAL:
                labels.append("e")
            else:
                name = self.base.points[letter_point_id(letter)].label
                labels.append(name if letter > 0 else name + "^-1")
        rows = [[self.value(u, v) for v in letters] for u in letters]
        return validate_qpm(labels, rows)

    def materialize_neutral(self) -> QPM:
        """Explicit QPM on generators plus the identity letter."""
        letters = [i + 1 for i in range(self.base.size)] + [NEUTRAL]
        labels = [self.base.points[i].label for i in range(self.base.size)] + ["e"]
        rows = [[self.neutral_value(u, v) for v in letters] for u in letters]
        return validate_qpm(labels, rows)


def extend_metric(rho: QPM) -> LetterMetric:
    """Extension of a bounded metric to the signed letter alphabet."""
    return LetterMetric(rho)


def frink_metrize(chain: EntourageChain) -> QPM:
    """Quasi-pseudometric squeezed by a triple-composition chain.

    The step cost of a pair is 2^-i for the deepest level i containing it,
    and the metric is the min-plus closure of the step costs.  When the
    deepest entourage is transitive it acts as the infinite tail of the
    chain and its pairs cost 0; a non-transitive deepest level cannot (its
    zero walks would escape the shallower levels), so there its pairs keep
    cost 2^-depth.  The output satisfies, for each 1 <= i <= depth,
    V_i inside {rho <= 2^-i} inside V_{i-1}.
    """
    # revalidate so the op reports a broken chain itself
    EntourageChain(chain.entourages)
    n = chain.size
    depth = chain.depth
    tail_is_transitive = chain[depth].is_transitive()
    rows: list[list[Fraction]] = []
    for x in range(n):
        row = []
        for y in range(n):
            if x == y or (tail_is_transitive and (x, y) in chain[depth]):
                row.append(Fraction(0))
            else:
                level = max(i for i in range(depth + 1) if (x, y) in chain[i])
                row.append(Fraction(1, 2**level))
        rows.append(row)
    closed = min_plus_closure(rows)
    labels = [f"p{i}" for i in range(n)]
    return validate_qpm(labels, closed)


def sandwich_holds(chain: EntourageChain, rho: QPM) -> bool:
    """V_i inside {rho <= 2^-i} inside V_{i-1} for every 1 <= i <= depth."""
    for i in range(1, chain.depth + 1):
        level = Fraction(1, 2**i)
        ball = {
            (x, y)
            for x in range(rho.size)
            for y in range(rho.size)
            if rho.value(x, y) <= level
        }
        if not chain[i].pairs <= ball:
            return False
        if not ball <= chain[i - 1].pairs:
            return False
    return True


def scale_clip(rho0: QPM) -> QPM:
    """Entrywise min(1, 4 * rho0); again a QPM, now bounded by 1."""
    one = Fraction(1)
    rows = tuple(tuple(min(one, 4 * v) for v in row) for row in rho0.rows)
    return QPM(rho0.points, rows, one)


def ball_relation(rho: QPM, r, strict: bool = True) -> Entourage:
    """Pairs at distance below r (strictly, or weakly when strict is False)."""
    r = Fraction(r)
    if r <= 0:
        raise NonpositiveRadius(f"radius must be positive, got {r}")
    pairs = set()
    for x in range(rho.size):
        for y in range(rho.size):
            v = rho.value(x, y)
            if v < r or (not strict and v == r):
                pairs.add((x, y))
    return Entourage(rho.size, pairs)
