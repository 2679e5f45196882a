"""Reduced words in a free group of finite rank.

Letters are signed generator indices: ``k`` is the k-th generator and ``-k``
its inverse.  In text, lowercase letters are generators and uppercase letters
their inverses, so ``"aBa"`` is a.b^-1.a; ``"1"`` (or ``""``) is the identity.

ShortLex uses the letter order a < A < b < B < ...
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator, Sequence

from .errors import InvalidInput

LETTERS = "abcdefghijklmnopqrstuvwxyz"
MAX_TEXT_RANK = len(LETTERS)


def check_rank(rank: int) -> int:
    if not isinstance(rank, int) or rank < 1:
        raise InvalidInput(f"rank must be a positive integer, got {rank!r}")
    return rank


def signed_letters(rank: int) -> list[int]:
    """All 2n signed letters in ShortLex order."""
    out = []
    for k in range(1, rank + 1):
        out.append(k)
        out.append(-k)
    return out


def letter_key(x: int) -> int:
    return 2 * (abs(x) - 1) + (x < 0)


def letter_str(x: int) -> str:
    ch = LETTERS[abs(x) - 1]
    return ch if x > 0 else ch.upper()


def free_reduce(raw: Iterable[int]) -> tuple[int, ...]:
    """Cancel adjacent inverse pairs with a stack; no validation."""
    stack: list[int] = []
    for x in raw:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def _validate(letters: Sequence[int], rank: int) -> None:
    for x in letters:
        if not isinstance(x, int) or x == 0 or abs(x) > rank:
            raise InvalidInput(f"letter {x!r} is outside the alphabet of rank {rank}")


def parse_letters(text: str, rank: int) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "1"):
        return ()
    out = []
    for ch in text:
        idx = LETTERS.find(ch.lower())
        if idx < 0:
            raise InvalidInput(f"bad letter {ch!r} in word {text!r}")
        k = idx + 1
        if k > rank:
            raise InvalidInput(f"letter {ch!r} is outside the alphabet of rank {rank}")
        out.append(k if ch.islower() else -k)
    return tuple(out)


def format_letters(letters: Sequence[int]) -> str:
    if not letters:
        return "1"
    return "".join(letter_str(x) for x in letters)


@total_ordering
@dataclass(frozen=True)
class Word:
    """An immutable reduced word.  Ordering is ShortLex."""

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        check_rank(self.rank)
        _validate(self.letters, self.rank)
        for a, b in zip(self.letters, self.letters[1:]):
            if a == -b:
                raise InvalidInput(f"word {format_letters(self.letters)} is not reduced")

    @classmethod
    def parse(cls, text: str, rank: int) -> "Word":
        """Parse and freely reduce ``text``."""
        check_rank(rank)
        return cls(free_reduce(parse_letters(text, rank)), rank)

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls((), rank)

    def __str__(self):
        return format_letters(self.letters)

    def __repr__(self):
        return f"Word({str(self)!r}, rank={self.rank})"

    def __len__(self):
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            # slices of reduced words are reduced
            return Word(self.letters[item], self.rank)
        return self.letters[item]

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __lt__(self, other: "Word") -> bool:
        return shortlex_less(self, other)

    def is_identity(self) -> bool:
        return not self.letters


def reduce(raw: Iterable[int], rank: int) -> Word:
    raw = tuple(raw)
    check_rank(rank)
    _validate(raw, rank)
    return Word(free_reduce(raw), rank)


def _same_rank(u: Word, v: Word) -> None:
    if u.rank != v.rank:
        raise InvalidInput(f"alphabet mismatch: rank {u.rank} vs rank {v.rank}")


def concat(u: Word, v: Word) -> Word:
    _same_rank(u, v)
    a, b = u.letters, v.letters
    i = 0
    # only the junction can cancel
    while i < len(a) and i < len(b) and a[len(a) - 1 - i] == -b[i]:
        i += 1
    return Word(a[: len(a) - i] + b[i:], u.rank)


def invert(w: Word) -> Word:
    return Word(tuple(-x for x in reversed(w.letters)), w.rank)


def shortlex_key(letters: Sequence[int]) -> tuple:
    return (len(letters), tuple(letter_key(x) for x in letters))


def shortlex_less(u: Word, v: Word) -> bool:
    _same_rank(u, v)
    return shortlex_key(u.letters) < shortlex_key(v.letters)


def reduced_words(rank: int, max_length: int, min_length: int = 0) -> Iterator[tuple[int, ...]]:
    """Reduced words as raw letter tuples, in ShortLex order."""
    letters = signed_letters(rank)
    level: list[tuple[int, ...]] = [()]
    for length in range(max_length + 1):
        if length >= min_length:
            yield from level
        if length == max_length:
            break
        level = [w + (x,) for w in level for x in letters if not w or w[-1] != -x]


def sphere_size(rank: int, length: int) -> int:
    """Number of reduced words of exactly this length."""
    if length == 0:
        return 1
    return 2 * rank * (2 * rank - 1) ** (length - 1)


def ball_size(rank: int, radius: int) -> int:
    """Number of reduced words of length at most ``radius``."""
    return sum(sphere_size(rank, k) for k in range(radius + 1))
