"""Length-reducing string rewriting for free regular star-monoids.

Three rule families are supported, all infinite in principle and recognised
by pattern rather than by table lookup, so a word of length n only ever
consults rules with left-hand side of length <= n:

* ``R1``          a^n A^n a^n -> a^n and A^n a^n A^n -> A^n, n >= 1
* ``R1_BOUNDED``  the same with 1 <= n <= index_bound
* ``RSTAR``       w w* w -> w for every nonempty word w over the rank-r alphabet
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable

from .words import alphabet, star, words_of_length

R1 = "R1"
R1_BOUNDED = "R1_BOUNDED"
RSTAR = "RSTAR"
SCHEMAS = (R1, R1_BOUNDED, RSTAR)


@dataclass(frozen=True, order=True)
class Rule:
    lhs: str
    rhs: str

    def __post_init__(self):
        if len(self.lhs) <= len(self.rhs):
            raise ValueError(f"rule {self} is not length-reducing")
        if not self.rhs or self.lhs[0] != self.rhs[0] or self.lhs[-1] != self.rhs[-1]:
            raise ValueError(f"rule {self} must share first and last letters")

    def __str__(self):
        return f"{self.lhs} -> {self.rhs or '1'}"

    @classmethod
    def parse(cls, line: str) -> "Rule":
        lhs, sep, rhs = line.partition("->")
        if not sep:
            raise ValueError(f"not a rule line: {line!r}")
        rhs = rhs.strip()
        return cls(lhs.strip(), "" if rhs == "1" else rhs)


def dump_rules(rules: Iterable[Rule]) -> str:
    return "".join(f"{r}\n" for r in rules)


def load_rules(text: str) -> list[Rule]:
    return [Rule.parse(line) for line in text.splitlines() if line.strip()]


def _letter_key(alpha: str) -> Callable[[str], tuple]:
    order = {c: i for i, c in enumerate(alpha)}
    return lambda w: (len(w), tuple(order[c] for c in w))


@dataclass(frozen=True)
class RewritingSystem:
    """One of the schema-generated rule families.

    ``bound`` is the default materialisation bound L (max lhs length) used by
    :meth:`rules`; reduction never needs it since rules are matched lazily.
    """

    schema: str = R1
    rank: int = 1
    index_bound: int | None = None
    bound: int | None = None
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.schema not in SCHEMAS:
            raise ValueError(f"unknown schema {self.schema!r}")
        if self.schema in (R1, R1_BOUNDED) and self.rank != 1:
            raise ValueError(f"{self.schema} is a rank 1 system")
        if self.schema == R1_BOUNDED and (self.index_bound is None or self.index_bound < 1):
            raise ValueError("R1_BOUNDED needs index_bound >= 1")

    @classmethod
    def r1(cls, bound: int | None = None) -> "RewritingSystem":
        return cls(R1, 1, None, bound)

    @classmethod
    def r1_bounded(cls, n: int, bound: int | None = None) -> "RewritingSystem":
        return cls(R1_BOUNDED, 1, n, bound)

    @classmethod
    def rstar(cls, rank: int = 1, bound: int | None = None) -> "RewritingSystem":
        return cls(RSTAR, rank, None, bound)

    @property
    def name(self) -> str:
        if self.schema == R1_BOUNDED:
            return f"R1_BOUNDED({self.index_bound})"
        if self.schema == RSTAR:
            return f"RSTAR({self.rank})"
        return R1

    @property
    def alphabet(self) -> str:
        return alphabet(self.rank)

    # -- rules -------------------------------------------------------------

    def match(self, u: str) -> Rule | None:
        """The rule whose left-hand side is exactly ``u``, if any."""
        n = len(u)
        if n < 3 or n % 3:
            return None
        m = n // 3
        head = u[:m]
        if self.schema == RSTAR:
            if u[2 * m:] == head and u[m:2 * m] == star(head):
                return Rule(u, head)
            return None
        if self.schema == R1_BOUNDED and m > self.index_bound:
            return None
        x = u[0]
        y = "A" if x == "a" else "a"
        if u == x * m + y * m + x * m:
            return Rule(u, head)
        return None

    def rules(self, bound: int | None = None) -> list[Rule]:
        """All rules with |lhs| <= bound, ordered by lhs length then letter order."""
        L = self.bound if bound is None else bound
        if L is None:
            if self.schema != R1_BOUNDED:
                raise ValueError(f"{self.name} is infinite; give a materialisation bound")
            L = 3 * self.index_bound
        key = _letter_key(self.alphabet)
        out = []
        for m in range(1, L // 3 + 1):
            if self.schema == RSTAR:
                for w in words_of_length(m, self.rank):
                    out.append(Rule(w + star(w) + w, w))
            elif self.schema == R1 or m <= self.index_bound:
                out.append(Rule("a" * m + "A" * m + "a" * m, "a" * m))
                out.append(Rule("A" * m + "a" * m + "A" * m, "A" * m))
        out.sort(key=lambda r: key(r.lhs))
        return out

    # -- redexes -----------------------------------------------------------

    def redexes(self, w: str) -> list[tuple[int, Rule]]:
        """Every (position, rule) whose lhs occurs in ``w`` at that position."""
        out = []
        n = len(w)
        for p in range(n - 2):
            for m in range(1, (n - p) // 3 + 1):
                r = self.match(w[p:p + 3 * m])
                if r is not None:
                    out.append((p, r))
        return out

    def leftmost_redex(self, w: str) -> tuple[int, Rule] | None:
        """Leftmost position carrying an lhs; shortest lhs breaks ties."""
        n = len(w)
        for p in range(n - 2):
            for m in range(1, (n - p) // 3 + 1):
                r = self.match(w[p:p + 3 * m])
                if r is not None:
                    return p, r
        return None

    def first_reducible_prefix(self, w: str, start: int = 1) -> int | None:
        """Length of the shortest reducible prefix of ``w`` (at least ``start``)."""
        for e in range(max(start, 3), len(w) + 1):
            for m in range(1, e // 3 + 1):
                if self.match(w[e - 3 * m:e]) is not None:
                    return e
        return None

    def ends_with_lhs(self, w: str) -> bool:
        return any(self.match(w[len(w) - 3 * m:]) is not None
                   for m in range(1, len(w) // 3 + 1))

    def is_irreducible(self, w: str) -> bool:
        return self.leftmost_redex(w) is None

    # -- normal forms ------------------------------------------------------

    def normal_form(self, w: str) -> str:
        cache = self._cache
        try:
            return cache[w]
        except KeyError:
            pass
        u = w
        while True:
            hit = self.leftmost_redex(u)
            if hit is None:
                break
            p, r = hit
            u = u[:p] + r.rhs + u[p + len(r.lhs):]
        cache[w] = u
        return u

    def multiply(self, m1: str, m2: str) -> str:
        return self.normal_form(m1 + m2)

    def reduce_with(self, w: str, choose: Callable[[list[tuple[int, Rule]]], tuple[int, Rule]]) -> str:
        """Reduce with an arbitrary strategy picking one redex per step."""
        u = w
        while True:
            options = self.redexes(u)
            if not options:
                return u
            p, r = choose(options)
            u = u[:p] + r.rhs + u[p + len(r.lhs):]

    def irreducible_words(self, n: int) -> Iterable[str]:
        """All irreducible words of length exactly ``n``, by prefix extension."""
        level = [""]
        for _ in range(n):
            level = [u + c for u in level for c in self.alphabet if not self.ends_with_lhs(u + c)]
        return level


def find_leftmost_redex(w: str, system: RewritingSystem):
    return system.leftmost_redex(w)


def reduce_to_normal_form(w: str, system: RewritingSystem) -> str:
    return system.normal_form(w)


def is_irreducible(w: str, system: RewritingSystem) -> bool:
    return system.is_irreducible(w)


def multiply(m1: str, m2: str, system: RewritingSystem) -> str:
    return system.multiply(m1, m2)


def enumerate_rules(system: RewritingSystem, bound: int | None = None) -> list[Rule]:
    return system.rules(bound)


def rightmost_strategy(options):
    return max(options, key=lambda pr: (pr[0], len(pr[1].lhs)))


def random_strategy(rng: random.Random):
    return lambda options: rng.choice(options)


# -- critical pairs ----------------------------------------------------------


@dataclass(frozen=True)
class CriticalPair:
    overlap: str
    left: str
    right: str
    rules: tuple[Rule, Rule]
    offset: int
    kind: str  # "overlap" or "inclusion"
    resolved: bool


def critical_pairs(system: RewritingSystem, maxlen: int) -> list[CriticalPair]:
    """All superpositions of rule pairs whose overlap word has length <= maxlen.

    Covers proper suffix/prefix overlaps and inclusion of one lhs in another
    (a rule with itself at offset 0 counts as a trivial inclusion).
    """
    if maxlen < 3:
        raise ValueError("maxlen must be at least 3")
    rules = system.rules(maxlen)
    nf = system.normal_form
    out = []
    for r1, r2 in product(rules, repeat=2):
        l1, l2 = r1.lhs, r2.lhs
        for p in range(len(l1) - len(l2) + 1):
            if l1[p:p + len(l2)] == l2:
                left = r1.rhs
                right = l1[:p] + r2.rhs + l1[p + len(l2):]
                out.append(CriticalPair(l1, left, right, (r1, r2), p, "inclusion",
                                        nf(left) == nf(right)))
        for k in range(1, min(len(l1), len(l2))):
            if len(l1) + len(l2) - k > maxlen:
                continue
            if l1[-k:] == l2[:k]:
                word = l1 + l2[k:]
                p = len(l1) - k
                left = r1.rhs + l2[k:]
                right = l1[:p] + r2.rhs
                out.append(CriticalPair(word, left, right, (r1, r2), p, "overlap",
                                        nf(left) == nf(right)))
    return out


@dataclass
class Report:
    passed: bool
    checked: int
    counterexamples: list = field(default_factory=list)


def verify_schema_equivalence(L: int) -> Report:
    """Check w w* w against w under R1, and R1 against RSTAR(1), for |w| <= L."""
    if L < 1:
        raise ValueError("L must be at least 1")
    r1 = RewritingSystem.r1()
    rs = RewritingSystem.rstar(1)
    bad = []
    checked = 0
    for n in range(1, L + 1):
        for w in words_of_length(n):
            u = w + star(w) + w
            a, b = r1.normal_form(u), rs.normal_form(u)
            checked += 1
            if a != b or a != r1.normal_form(w):
                bad.append((w, a, b))
            elif r1.is_irreducible(w) and a != w:
                bad.append((w, a, b))
    return Report(not bad, checked, bad)
