"""Exact word algebra for free and free Abelian groups over a finite point set.

Letters are encoded as small signed integers: ``0`` is the neutral letter,
``i + 1`` is the generator for point ``i`` and ``-(i + 1)`` its inverse.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

NEUTRAL = 0


@dataclass(frozen=True, order=True)
class Point:
    id: int
    label: str

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError(f"point id must be nonnegative, got {self.id}")


def positive(point: Point | int) -> int:
    pid = point.id if isinstance(point, Point) else point
    return pid + 1


def negative(point: Point | int) -> int:
    return -positive(point)


def letter_inverse(letter: int) -> int:
    return -letter


def is_neutral(letter: int) -> bool:
    return letter == NEUTRAL


def letter_point_id(letter: int) -> int:
    """Point index a non-neutral letter refers to."""
    if letter == NEUTRAL:
        raise ValueError("neutral letter names no point")
    return abs(letter) - 1


def _reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for letter in letters:
        if letter == NEUTRAL:
            continue
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A word over the signed letter alphabet; compares by its reduced form."""

    letters: tuple[int, ...]
    reduced: bool = field(init=False, compare=False)

    def __init__(self, letters: Iterable[int] = ()) -> None:
        object.__setattr__(self, "letters", tuple(letters))
        red = all(l != NEUTRAL for l in self.letters) and all(
            a != -b for a, b in zip(self.letters, self.letters[1:])
        )
        object.__setattr__(self, "reduced", red)

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return _reduce_letters(self.letters) == _reduce_letters(other.letters)

    def __hash__(self) -> int:
        return hash(_reduce_letters(self.letters))

    def __repr__(self) -> str:
        return f"Word({self.tokens()!r})"

    def is_identity(self) -> bool:
        return not _reduce_letters(self.letters)

    def tokens(self, labels: list[str] | None = None) -> str:
        """Render in the whitespace-separated token syntax (`a`, `a^-1`, `e`)."""
        parts = []
        for letter in self.letters:
            if letter == NEUTRAL:
                parts.append("e")
                continue
            name = labels[letter_point_id(letter)] if labels else f"x{letter_point_id(letter)}"
            parts.append(name if letter > 0 else name + "^-1")
        return " ".join(parts)


def parse_word(text: str, labels: list[str]) -> Word:
    """Parse the token syntax against a label table.

    Raises ValueError on unknown labels; the empty string is the identity.
    """
    index = {label: i for i, label in enumerate(labels)}
    letters = []
    for token in text.split():
        if token == "e":
            letters.append(NEUTRAL)
        elif token.endswith("^-1") and token[:-3] in index:
            letters.append(negative(index[token[:-3]]))
        elif token in index:
            letters.append(positive(index[token]))
        else:
            raise ValueError(f"unknown token {token!r}")
    return Word(letters)


def reduce(w: Word) -> Word:
    """Reduced form: neutral letters dropped, adjacent inverse pairs cancelled."""
    return Word(_reduce_letters(w.letters))


def multiply(w1: Word, w2: Word) -> Word:
    return reduce(Word(w1.letters + w2.letters))


def invert(w: Word) -> Word:
    return Word(tuple(-l for l in reversed(w.letters)))


def conjugate(w: Word, g: Word) -> Word:
    """w * g * w^-1, reduced."""
    return multiply(multiply(w, g), invert(w))


@dataclass(frozen=True)
class AbelianWord:
    """Integer coefficient map over point ids; zero coefficients are absent."""

    items: tuple[tuple[int, int], ...]

    def __init__(self, coeffs: dict[int, int] | Iterable[tuple[int, int]] = ()) -> None:
        pairs = dict(coeffs)
        object.__setattr__(
            self, "items", tuple(sorted((pid, c) for pid, c in pairs.items() if c != 0))
        )

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self.items)

    def length(self) -> int:
        """Word length: sum of absolute coefficients."""
        return sum(abs(c) for _, c in self.items)

    def is_identity(self) -> bool:
        return not self.items

    def __add__(self, other: "AbelianWord") -> "AbelianWord":
        coeffs = self.coeffs
        for pid, c in other.items:
            coeffs[pid] = coeffs.get(pid, 0) + c
        return AbelianWord(coeffs)

    def __neg__(self) -> "AbelianWord":
        return AbelianWord({pid: -c for pid, c in self.items})

    def __sub__(self, other: "AbelianWord") -> "AbelianWord":
        return self + (-other)

    def signed_letters(self) -> tuple[int, ...]:
        """Expansion into single signed letters, sorted by (point, sign)."""
        out: list[int] = []
        for pid, c in self.items:
            letter = positive(pid) if c > 0 else negative(pid)
            out.extend([letter] * abs(c))
        return tuple(sorted(out, key=lambda l: (letter_point_id(l), l)))


def abelianize(w: Word) -> AbelianWord:
    coeffs: dict[int, int] = {}
    for letter in w.letters:
        if letter == NEUTRAL:
            continue
        pid = letter_point_id(letter)
        coeffs[pid] = coeffs.get(pid, 0) + (1 if letter > 0 else -1)
    return AbelianWord(coeffs)


def is_almost_irreducible(w: Word) -> bool:
    """No two adjacent mutually-inverse letters; neutral letters anywhere are fine."""
    return all(a == NEUTRAL or a != -b for a, b in zip(w.letters, w.letters[1:]))


def enumerate_paddings(g: Word, n: int) -> Iterator[Word]:
    """All words of length 2n built by inserting neutral letters into reduced g.

    Yields in lexicographic order of the inserted positions.  Every yield is
    almost irreducible and reduces back to g.
    """
    if not g.reduced or g.is_identity():
        raise ValueError("expected a reduced, nonempty word")
    two_n = 2 * n
    k = two_n - len(g)
    if k < 0:
        raise ValueError(f"2n = {two_n} is shorter than the word (length {len(g)})")
    for e_positions in itertools.combinations(range(two_n), k):
        letters = [NEUTRAL] * two_n
        slots = (i for i in range(two_n) if i not in e_positions)
        for slot, letter in zip(slots, g.letters):
            letters[slot] = letter
        yield Word(letters)
