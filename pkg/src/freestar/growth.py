"""Sphere and ball counts for F_1^star and its factor-avoidance languages.

Binary words use the rank 1 identification a = 0, a* = 1. Two families of
forbidden factors are considered:

* STAR: w w* w  (the left-hand sides of RSTAR(1), star = negate + reverse)
* REV:  w w^rev w

All counts are exact Python integers. Two length conventions are kept
apart: EXACT counts words of length exactly n (spheres) and CUMULATIVE counts
words of length at most n (balls).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import accumulate

from .rewriting import RewritingSystem
from .words import OMEGA, binary_words, phi_mask, star_bits

STAR = "STAR"
REV = "REV"
EXACT = "EXACT"
CUMULATIVE = "CUMULATIVE"
STRICT_PEAK = "STRICT_PEAK"
DOUBLED_PEAK_ALLOWED = "DOUBLED_PEAK_ALLOWED"

ENUMERATION_GUARD = 26
LEVEL_ENUMERATION_GUARD = 40
R2_GUARD = 14


class GuardError(ValueError):
    pass


@dataclass(frozen=True)
class AvoidFamily:
    """A family of forbidden binary factors: STAR, REV, or an explicit set."""

    kind: str
    explicit: frozenset = frozenset()

    def __post_init__(self):
        if self.kind not in (STAR, REV, "EXPLICIT"):
            raise ValueError(f"unknown family {self.kind!r}")

    @classmethod
    def of(cls, words) -> "AvoidFamily":
        return cls("EXPLICIT", frozenset(words))

    def twist(self, w: str) -> str:
        return star_bits(w) if self.kind == STAR else w[::-1]

    def is_forbidden(self, u: str) -> bool:
        if self.kind == "EXPLICIT":
            return u in self.explicit
        n = len(u)
        if n < 3 or n % 3:
            return False
        m = n // 3
        head = u[:m]
        return u[2 * m:] == head and u[m:2 * m] == self.twist(head)

    def ends_forbidden(self, w: str) -> bool:
        """Whether some suffix of ``w`` is forbidden."""
        n = len(w)
        if self.kind == "EXPLICIT":
            return any(w.endswith(f) for f in self.explicit)
        for m in range(1, n // 3 + 1):
            tail = w[n - m:]
            if w[n - 3 * m:n - 2 * m] == tail and w[n - 2 * m:n - m] == self.twist(tail):
                return True
        return False

    def avoids(self, w: str) -> bool:
        return not any(self.ends_forbidden(w[:e]) for e in range(3, len(w) + 1))


STAR_FAMILY = AvoidFamily(STAR)
REV_FAMILY = AvoidFamily(REV)


def _family(fam) -> AvoidFamily:
    return fam if isinstance(fam, AvoidFamily) else AvoidFamily(fam)


def forbidden_factors_upto(fam, L: int) -> set[str]:
    fam = _family(fam)
    if fam.kind == "EXPLICIT":
        return {f for f in fam.explicit if len(f) <= L}
    return {w + fam.twist(w) + w for m in range(1, L // 3 + 1) for w in binary_words(m)}


def minimal_forbidden_factors(fam, L: int) -> set[str]:
    """Forbidden factors of length <= L with no forbidden proper factor."""
    forbidden = forbidden_factors_upto(fam, L)
    out = set()
    for f in forbidden:
        n = len(f)
        if not any(f[i:j] in forbidden
                   for i in range(n) for j in range(i + 1, n + 1) if j - i < n):
            out.add(f)
    return out


# -- enumeration -------------------------------------------------------------


def _extend(level, fam):
    return [u + c for u in level for c in "01" if not fam.ends_forbidden(u + c)]


def avoiding_words(fam, n: int) -> list[str]:
    """All binary words of length exactly n avoiding the family, by pruned extension."""
    fam = _family(fam)
    level = [""]
    for _ in range(n):
        level = _extend(level, fam)
    return level


def sphere_count_enumerate(fam, n: int) -> int:
    if n > ENUMERATION_GUARD:
        raise GuardError(f"n={n} exceeds enumeration guard {ENUMERATION_GUARD}; use sphere_count_dp")
    if n < 0:
        raise ValueError("n must be nonnegative")
    fam = _family(fam)
    count = 0
    stack = [""]
    while stack:
        w = stack.pop()
        if len(w) == n:
            count += 1
            continue
        for c in "01":
            u = w + c
            if not fam.ends_forbidden(u):
                stack.append(u)
    return count


def sphere_counts_enumerate(fam, n_max: int) -> list[int]:
    """Enumerated sphere counts for every n <= n_max, one level at a time."""
    if n_max > LEVEL_ENUMERATION_GUARD:
        raise GuardError(f"n_max={n_max} exceeds guard {LEVEL_ENUMERATION_GUARD}")
    fam = _family(fam)
    counts = [1]
    level = [""]
    for _ in range(n_max):
        level = _extend(level, fam)
        counts.append(len(level))
    return counts


# -- dynamic programming -----------------------------------------------------


def sphere_counts_dp(n_max: int) -> list[int]:
    """Sphere counts s(0..n_max) of F_1^star from the run-length structure.

    An irreducible word is determined by its first letter and its run
    lengths, which rise strictly to a peak m (single, or doubled as a^m A^m)
    and then fall strictly. With S_m[j] the number of ordered pairs of
    distinct-part partitions with parts < m and total j,
    s(n) = 2 * sum_m (S_m[n - m] + S_m[n - 2m]) for n >= 1.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    s = [0] * (n_max + 1)
    s[0] = 1
    pairs = [0] * (n_max + 1)  # S_1 = 1
    pairs[0] = 1
    for m in range(1, n_max + 1):
        for n in range(m, n_max + 1):
            s[n] += 2 * pairs[n - m]
        for n in range(2 * m, n_max + 1):
            s[n] += 2 * pairs[n - 2 * m]
        # S_{m+1} = S_m * (1 + x^m)^2
        nxt = pairs[:]
        for d in range(m, n_max + 1):
            nxt[d] += 2 * pairs[d - m]
        for d in range(2 * m, n_max + 1):
            nxt[d] += pairs[d - 2 * m]
        pairs = nxt
    return s


def sphere_count_dp(n: int, fam=STAR) -> int:
    """The DP count; STAR and REV counts coincide under the Phi_omega bijection."""
    if _family(fam).kind not in (STAR, REV):
        raise ValueError("the DP only covers STAR and REV")
    return sphere_counts_dp(n)[n]


def ball_counts(spheres: list[int]) -> list[int]:
    return list(accumulate(spheres))


@lru_cache(maxsize=None)
def distinct_partitions(j: int, m: int) -> int:
    """Partitions of j into distinct parts all < m."""
    if j == 0:
        return 1
    if j < 0 or m <= 1:
        return 0
    return distinct_partitions(j, m - 1) + distinct_partitions(j - (m - 1), m - 1)


def _sides(j: int, m: int) -> int:
    return sum(distinct_partitions(t, m) * distinct_partitions(j - t, m) for t in range(j + 1))


def strongly_unimodal_count(n: int, variant: str = STRICT_PEAK) -> int:
    """Sequences a_1 < ... < a_k > ... > a_l of positive integers summing to n.

    DOUBLED_PEAK_ALLOWED also counts sequences whose maximum appears twice in
    adjacent positions.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if variant not in (STRICT_PEAK, DOUBLED_PEAK_ALLOWED):
        raise ValueError(f"unknown variant {variant!r}")
    total = sum(_sides(n - m, m) for m in range(1, n + 1))
    if variant == DOUBLED_PEAK_ALLOWED:
        total += sum(_sides(n - 2 * m, m) for m in range(1, n // 2 + 1))
    return total


def rhoades_main_term(n: int) -> float:
    if n < 1:
        raise ValueError("n must be positive")
    t = 24 * n - 1
    root = math.sqrt(t)
    return (math.sqrt(3) * t ** -0.75 * math.exp(math.pi / 6 * root)
            * (1 + (math.pi ** 2 - 9) / (4 * math.pi * root)))


def log2_density(count: int, n: int) -> float:
    return math.log2(count) / n


# -- run profiles ------------------------------------------------------------


@dataclass(frozen=True)
class RunProfile:
    first: str
    composition: tuple[int, ...]

    @classmethod
    def of(cls, w: str) -> "RunProfile":
        comp: list[int] = []
        prev = None
        for c in w:
            if c == prev:
                comp[-1] += 1
            else:
                comp.append(1)
                prev = c
        return cls(w[:1], tuple(comp))

    def decompositions(self) -> list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
        """Splits (rising, peak, falling) with a strictly rising head, a peak of one
        run or two equal runs exceeding every other run, and a strictly falling tail."""
        e = self.composition
        out = []
        for i in range(len(e)):
            for width in (1, 2):
                peak = e[i:i + width]
                if len(peak) < width or len(set(peak)) != 1:
                    continue
                head, tail = e[:i], e[i + width:]
                m = peak[0]
                if any(x >= m for x in head + tail):
                    continue
                if any(a >= b for a, b in zip(head, head[1:])):
                    continue
                if any(a <= b for a, b in zip(tail, tail[1:])):
                    continue
                out.append((head, peak, tail))
        return out


# -- reports -----------------------------------------------------------------

SANDWICH_FIELDS = (
    "n", "sphere", "ball", "u_strict", "u_doubled", "rhoades",
    "sandwich_exact_strict", "sandwich_exact_doubled",
    "sandwich_cumulative_strict", "sandwich_cumulative_doubled",
    "rev_sphere", "star_equals_rev",
)


def _within(u: int, count: int) -> bool:
    return u <= count <= 2 * u


def sandwich_report(n_max: int) -> list[dict]:
    """Rows comparing counts with strongly unimodal counts under every pairing.

    ``star_equals_rev`` compares the STAR count from the DP with the REV count
    obtained by independent enumeration.
    """
    if n_max > LEVEL_ENUMERATION_GUARD:
        raise GuardError(f"n_max={n_max} exceeds guard {LEVEL_ENUMERATION_GUARD}")
    spheres = sphere_counts_dp(n_max)
    balls = ball_counts(spheres)
    rev = sphere_counts_enumerate(REV_FAMILY, n_max)
    rows = []
    for n in range(n_max + 1):
        if n == 0:
            us = ud = 1
            rh = None
        else:
            us = strongly_unimodal_count(n, STRICT_PEAK)
            ud = strongly_unimodal_count(n, DOUBLED_PEAK_ALLOWED)
            rh = rhoades_main_term(n)
        rows.append({
            "n": n,
            "sphere": spheres[n],
            "ball": balls[n],
            "u_strict": us,
            "u_doubled": ud,
            "rhoades": rh,
            "sandwich_exact_strict": _within(us, spheres[n]),
            "sandwich_exact_doubled": _within(ud, spheres[n]),
            "sandwich_cumulative_strict": _within(us, balls[n]),
            "sandwich_cumulative_doubled": _within(ud, balls[n]),
            "rev_sphere": rev[n],
            "star_equals_rev": rev[n] == spheres[n],
        })
    return rows


def phi_bijection_check(n: int) -> bool:
    """Phi_omega maps the STAR-avoiding words of length n onto the REV-avoiding ones."""
    stars = avoiding_words(STAR_FAMILY, n)
    revs = set(avoiding_words(REV_FAMILY, n))
    images = {phi_mask(OMEGA, w) for w in stars}
    return len(images) == len(stars) and images == revs


# -- rank 2 ------------------------------------------------------------------


class _PatternAutomaton:
    """Aho-Corasick automaton over a finite pattern set, for counting avoiders."""

    def __init__(self, patterns, alpha: str):
        self.alpha = alpha
        goto = [{}]
        dead = [False]
        for p in patterns:
            s = 0
            for c in p:
                if c not in goto[s]:
                    goto.append({})
                    dead.append(False)
                    goto[s][c] = len(goto) - 1
                s = goto[s][c]
            dead[s] = True
        fail = [0] * len(goto)
        order = []
        queue = list(goto[0].values())
        while queue:
            s = queue.pop(0)
            order.append(s)
            for c, t in goto[s].items():
                f = fail[s]
                while f and c not in goto[f]:
                    f = fail[f]
                fail[t] = goto[f][c] if c in goto[f] and goto[f][c] != t else 0
                dead[t] = dead[t] or dead[fail[t]]
                queue.append(t)
        delta = [dict() for _ in goto]
        for s in [0] + order:
            for c in alpha:
                if c in goto[s]:
                    delta[s][c] = goto[s][c]
                else:
                    delta[s][c] = delta[fail[s]][c] if s else 0
        self.delta = delta
        self.dead = dead

    def count(self, n_max: int) -> list[int]:
        counts = [1]
        vec = {0: 1}
        for _ in range(n_max):
            nxt: dict[int, int] = {}
            for s, k in vec.items():
                for c in self.alpha:
                    t = self.delta[s][c]
                    if not self.dead[t]:
                        nxt[t] = nxt.get(t, 0) + k
            vec = nxt
            counts.append(sum(vec.values()))
        return counts


def rank2_sphere_counts(n_max: int) -> list[int]:
    """s_2(0..n_max): irreducible words of each length over a, A, b, B."""
    if n_max > R2_GUARD:
        raise GuardError(f"n_max={n_max} exceeds rank 2 guard {R2_GUARD}")
    system = RewritingSystem.rstar(2)
    patterns = [r.lhs for r in system.rules(n_max)]
    return _PatternAutomaton(patterns, system.alphabet).count(n_max)


def growth_estimate_r2(n_max: int, enumerate_upto: int = 6) -> list[dict]:
    """Sphere/ball counts for F_2^star with the free-group lower bound check.

    Counts up to ``enumerate_upto`` are cross-checked against direct pruned
    enumeration of irreducible words.
    """
    spheres = rank2_sphere_counts(n_max)
    balls = ball_counts(spheres)
    system = RewritingSystem.rstar(2)
    rows = []
    for n in range(n_max + 1):
        fg = 2 * 3 ** n - 1
        enum = len(system.irreducible_words(n)) if n <= enumerate_upto else None
        rows.append({
            "n": n,
            "sphere": spheres[n],
            "ball": balls[n],
            "ratio": spheres[n] / spheres[n - 1] if n else None,
            "free_group_ball": fg,
            "bound_ok": balls[n] >= fg,
            "enumerated": enum,
            "enumeration_agrees": None if enum is None else enum == spheres[n],
        })
    return rows
