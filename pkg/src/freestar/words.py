"""Letters, words, the star involution and the XOR-mask bijection.

Words are plain ``str`` values. Generator ``g`` is rendered as the g-th
lowercase letter and its star as the matching uppercase letter, so rank 1
words live over ``"aA"`` and rank 2 words over ``"aAbB"``. For rank 1 there
is also a binary view: ``a`` <-> ``0`` and ``A`` <-> ``1``.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from itertools import product
from typing import Iterator, NamedTuple

MAX_RANK = 26


class DimensionError(ValueError):
    pass


class Letter(NamedTuple):
    generator: int
    starred: bool = False

    def star(self) -> "Letter":
        return Letter(self.generator, not self.starred)

    def char(self) -> str:
        c = string.ascii_lowercase[self.generator]
        return c.upper() if self.starred else c

    @classmethod
    def parse(cls, c: str) -> "Letter":
        if len(c) != 1 or c not in string.ascii_letters:
            raise ValueError(f"not a letter: {c!r}")
        return cls(string.ascii_lowercase.index(c.lower()), c.isupper())


def alphabet(rank: int) -> str:
    """Letters of the rank-r alphabet in canonical order: a, A, b, B, ..."""
    if not 1 <= rank <= MAX_RANK:
        raise ValueError(f"rank must be in 1..{MAX_RANK}, got {rank}")
    return "".join(c + c.upper() for c in string.ascii_lowercase[:rank])


def letters(w: str) -> tuple[Letter, ...]:
    return tuple(Letter.parse(c) for c in w)


def from_letters(seq) -> str:
    return "".join(Letter(*x).char() for x in seq)


def parse_word(text: str, rank: int | None = None) -> str:
    """Validate a word in text rendering; ``"1"`` alone denotes the identity.

    With ``rank`` given, reject letters outside the rank-r alphabet.
    """
    if text in ("1", "ε"):
        return ""
    for c in text:
        Letter.parse(c)
    if rank is not None:
        allowed = set(alphabet(rank))
        bad = set(text) - allowed
        if bad:
            raise ValueError(f"letters {sorted(bad)} outside rank-{rank} alphabet")
    return text


def word_rank(w: str) -> int:
    """Smallest rank whose alphabet contains every letter of ``w``."""
    return max((Letter.parse(c).generator + 1 for c in w), default=1)


_SWAP = str.maketrans(string.ascii_lowercase + string.ascii_uppercase,
                      string.ascii_uppercase + string.ascii_lowercase)
_BITFLIP = str.maketrans("01", "10")


def swap_case(w: str) -> str:
    """Toggle every star flag without reversing (the a <-> A symmetry)."""
    return w.translate(_SWAP)


def star(w: str) -> str:
    """``w*``: reverse and toggle every star flag."""
    return w.translate(_SWAP)[::-1]


def star_bits(bits: str) -> str:
    """Star in the binary view: negate then reverse."""
    return bits.translate(_BITFLIP)[::-1]


def to_bits(w: str) -> str:
    if set(w) - {"a", "A"}:
        raise ValueError(f"binary view needs a rank 1 word, got {w!r}")
    return w.replace("a", "0").replace("A", "1")


def from_bits(bits: str) -> str:
    if set(bits) - {"0", "1"}:
        raise ValueError(f"not a bit string: {bits!r}")
    return bits.replace("0", "a").replace("1", "A")


def nimsum(u: str, v: str) -> str:
    """Bitwise XOR of two equal-length bit strings."""
    if len(u) != len(v):
        raise DimensionError(f"nimsum of lengths {len(u)} and {len(v)}")
    return "".join("1" if x != y else "0" for x, y in zip(u, v))


@dataclass(frozen=True)
class MaskWord:
    """A periodic infinite bit sequence, read from offset ``phase``."""

    period: str
    phase: int = 0

    def __post_init__(self):
        if not self.period or set(self.period) - {"0", "1"}:
            raise ValueError(f"bad mask period {self.period!r}")

    def prefix(self, n: int) -> str:
        if n < 0:
            raise ValueError("prefix length must be nonnegative")
        p = len(self.period)
        return "".join(self.period[(self.phase + t) % p] for t in range(n))

    def shifted(self, k: int) -> "MaskWord":
        return MaskWord(self.period, (self.phase + k) % len(self.period))


OMEGA = MaskWord("01")
OMEGA_INV = MaskWord("01", 1)


def omega_prefix(n: int, phase: int = 0) -> str:
    """First ``n`` bits of (01)^inf, or of (10)^inf when ``phase`` is 1."""
    return MaskWord("01", phase).prefix(n)


def phi_mask(mask: MaskWord, bits: str) -> str:
    """XOR ``bits`` with the equal-length prefix of ``mask``; an involution."""
    return nimsum(bits, mask.prefix(len(bits)))


def binary_words(n: int) -> Iterator[str]:
    for t in product("01", repeat=n):
        yield "".join(t)


def words_of_length(n: int, rank: int = 1) -> Iterator[str]:
    for t in product(alphabet(rank), repeat=n):
        yield "".join(t)


def runs(w: str) -> list[tuple[str, int]]:
    """Maximal runs of equal letters as (letter, length) pairs."""
    out: list[tuple[str, int]] = []
    for c in w:
        if out and out[-1][0] == c:
            out[-1] = (c, out[-1][1] + 1)
        else:
            out.append((c, 1))
    return out
