"""Integral homology of the tensored Kobayashi complex and its Morse reduction."""

from __future__ import annotations

from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from math import gcd

from .resolution import (
    Cell,
    KobayashiResolution,
    Truncation,
    TruncationOverflow,
    X,
    cell_str,
    closed_form_boundary,
    identify,
    theta_image_I,
    theta_image_II,
    theta_image_III,
)
from .rewriting import RewritingSystem

CRITICAL = "CRITICAL"
COLLAPSIBLE = "COLLAPSIBLE"
REDUNDANT = "REDUNDANT"


class MatchingError(RuntimeError):
    pass


# -- sparse integer matrices --------------------------------------------------


class IntegerMatrix:
    """Sparse matrix of exact integers; zero entries are never stored."""

    def __init__(self, rows: int, cols: int, entries=None):
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], int] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            if v:
                self.entries[r, c] = self.entries.get((r, c), 0) + v
                if not self.entries[r, c]:
                    del self.entries[r, c]

    @classmethod
    def from_dense(cls, rows_list) -> "IntegerMatrix":
        m = len(rows_list)
        n = len(rows_list[0]) if m else 0
        return cls(m, n, {(i, j): v for i, row in enumerate(rows_list) for j, v in enumerate(row) if v})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict[tuple[int, int], int] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                out[r, c] = out.get((r, c), 0) + v * w
        return IntegerMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.entries

    def dump(self) -> str:
        """Triplet text: a ``rows cols`` header, then ``row col value`` lines."""
        lines = [f"{self.rows} {self.cols}"]
        lines += [f"{r} {c} {v}" for (r, c), v in sorted(self.entries.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str) -> "IntegerMatrix":
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        rows, cols = map(int, lines[0])
        return cls(rows, cols, {(int(r), int(c)): int(v) for r, c, v in lines[1:]})

    def __eq__(self, other):
        return (isinstance(other, IntegerMatrix) and (self.rows, self.cols) == (other.rows, other.cols)
                and self.entries == other.entries)

    def __repr__(self):
        return f"IntegerMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def smith_normal_form(M: IntegerMatrix) -> tuple[list[int], int]:
    """Nonzero invariant factors d_1 | d_2 | ... of M, and its rank.

    Sparse elimination with smallest-magnitude pivots; the diagonal obtained
    is then brought into divisibility order with gcd/lcm swaps.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, dict[int, int]] = {}
    for (r, c), v in M.entries.items():
        rows.setdefault(r, {})[c] = v
        cols.setdefault(c, {})[r] = v

    def put(r, c, v):
        if v:
            rows.setdefault(r, {})[c] = v
            cols.setdefault(c, {})[r] = v
        else:
            rows[r].pop(c, None)
            cols[c].pop(r, None)
            if not rows[r]:
                del rows[r]
            if not cols[c]:
                del cols[c]

    def add_row(src, dst, q):
        for c, v in list(rows[src].items()):
            put(dst, c, rows.get(dst, {}).get(c, 0) + q * v)

    def add_col(src, dst, q):
        for r, v in list(cols[src].items()):
            put(r, dst, cols.get(dst, {}).get(r, 0) + q * v)

    diag = []
    while rows:
        # smallest magnitude, then sparsest row/column
        r, c = min(((r, c) for r, row in rows.items() for c in row),
                   key=lambda rc: (abs(rows[rc[0]][rc[1]]), len(rows[rc[0]]) * len(cols[rc[1]])))
        while True:
            p = rows[r][c]
            moved = False
            for r2, v in list(cols[c].items()):
                if r2 == r:
                    continue
                add_row(r, r2, -(v // p))
                if c in rows.get(r2, {}):
                    r, moved = r2, True
                    break
            if moved:
                continue
            for c2, v in list(rows[r].items()):
                if c2 == c:
                    continue
                add_col(c, c2, -(v // p))
                if r in cols.get(c2, {}):
                    c, moved = c2, True
                    break
            if not moved:
                break
        diag.append(abs(rows[r][c]))
        put(r, c, 0)
    diag.sort()
    changed = True
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                if diag[j] % diag[i]:
                    g = gcd(diag[i], diag[j])
                    diag[i], diag[j] = g, diag[i] * diag[j] // g
                    changed = True
        diag.sort()
    return diag, len(diag)


def matrix_rank(M: IntegerMatrix) -> int:
    return smith_normal_form(M)[1]


# -- complexes ----------------------------------------------------------------


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = self.torsion
        if any(d <= 1 for d in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"bad invariant factors {t}")

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) or "0"

    def as_dict(self, dim: int) -> dict:
        return {"dim": dim, "rank": self.rank, "torsion": list(self.torsion)}


@dataclass
class TruncatedComplex:
    """Ordered cell bases in dims 0..D and boundary matrices d_1..d_D.

    ``boundaries[n]`` maps dimension n to n - 1 (rows: basis n-1, cols: basis n).
    """

    bases: list[list[Cell]]
    boundaries: list[IntegerMatrix | None]
    _index: list[dict] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._index = [{c: i for i, c in enumerate(b)} for b in self.bases]
        for n in range(1, len(self.bases)):
            d = self.boundaries[n]
            if (d.rows, d.cols) != (len(self.bases[n - 1]), len(self.bases[n])):
                raise ValueError(f"d_{n} has shape {d.rows}x{d.cols}")

    @property
    def top(self) -> int:
        return len(self.bases) - 1

    def index(self, n: int, cell: Cell) -> int:
        return self._index[n][cell]

    def contains(self, n: int, cell: Cell) -> bool:
        return 0 <= n <= self.top and cell in self._index[n]

    def boundary_chain(self, n: int, chain: dict) -> dict:
        """Apply d_n to a chain given as {cell: coeff}."""
        if n == 0:
            return {}
        col_entries = self._columns(n)
        out: dict = {}
        below = self.bases[n - 1]
        for cell, k in chain.items():
            for r, v in col_entries[self.index(n, cell)]:
                out[below[r]] = out.get(below[r], 0) + k * v
        return {c: v for c, v in out.items() if v}

    def _columns(self, n: int):
        key = ("cols", n)
        cache = self.__dict__.setdefault("_colcache", {})
        if key not in cache:
            cols = [[] for _ in self.bases[n]]
            for (r, c), v in self.boundaries[n].entries.items():
                cols[c].append((r, v))
            cache[key] = cols
        return cache[key]

    def chain_condition(self) -> bool:
        return all((self.boundaries[n] @ self.boundaries[n + 1]).is_zero()
                   for n in range(1, self.top))


def tensor_trivial(resolution: KobayashiResolution, D: int | None = None) -> TruncatedComplex:
    """Apply - (x)_{ZM} Z to the resolution, keeping dimensions 0..D."""
    D = resolution.truncation.D if D is None else D
    bases = [list(resolution.cells(n)) for n in range(D + 1)]
    index = [{c: i for i, c in enumerate(b)} for b in bases]
    mats: list[IntegerMatrix | None] = [None, IntegerMatrix(1, len(bases[1]))]
    for n in range(2, D + 1):
        entries = {}
        for j, cell in enumerate(bases[n]):
            for face, v in resolution.tensored_boundary(cell).items():
                i = index[n - 1].get(face)
                if i is None:
                    raise TruncationOverflow(
                        f"boundary of {cell_str(cell)} reaches {cell_str(face)} outside the truncation")
                entries[i, j] = v
        mats.append(IntegerMatrix(len(bases[n - 1]), len(bases[n]), entries))
    return TruncatedComplex(bases, mats)


def homology(cx: TruncatedComplex, k: int) -> HomologyGroup:
    """H_k = ker d_k / im d_{k+1}; needs 0 <= k < top dimension."""
    if not 0 <= k < cx.top:
        raise ValueError(f"H_{k} needs d_{k + 1}; complex stops at dimension {cx.top}")
    rank_k = 0 if k == 0 else matrix_rank(cx.boundaries[k])
    factors, rank_next = smith_normal_form(cx.boundaries[k + 1])
    kernel = len(cx.bases[k]) - rank_k
    return HomologyGroup(kernel - rank_next, tuple(d for d in factors if d > 1))


def all_homology(cx: TruncatedComplex) -> list[HomologyGroup]:
    return [homology(cx, k) for k in range(cx.top)]


# -- collapsing scheme ----------------------------------------------------------


def theta(cell: Cell) -> tuple[int, Cell] | None:
    """The matching on rank 1 cells, as (sign, cell) or None for zero.

    X_i* is sent to -(X_i*, a^i); the negative sign is what makes X_i* occur
    with coefficient -1 in d(theta(X_i*)) = -(X_i* - X_i).
    """
    cell = tuple(cell)
    if len(cell) <= 1:
        return None
    hit = identify(cell)
    if hit is None:
        return None
    kind, idx, starred = hit
    if kind == "X":
        return (-1, X(idx[0], True) + ("a" * idx[0],)) if starred else None
    if kind == "I":
        return None if starred else (-1, theta_image_I(*idx))
    if kind == "II":
        return -1, theta_image_II(*idx, starred=starred)
    if kind == "III":
        return -1, theta_image_III(*idx, starred=starred)
    return None


class CollapsingScheme:
    """The matching restricted to the bases of a truncated complex."""

    def __init__(self, cx: TruncatedComplex, matching=theta):
        self.cx = cx
        self.theta: dict[Cell, tuple[int, Cell]] = {}
        self.partner: dict[Cell, Cell] = {}
        for n in range(cx.top + 1):
            for cell in cx.bases[n]:
                t = matching(cell)
                if t is not None:
                    self.theta[cell] = t
                    self.partner.setdefault(t[1], cell)

    def __call__(self, cell: Cell):
        return self.theta.get(tuple(cell))

    def classify(self, cell: Cell) -> str:
        cell = tuple(cell)
        if cell in self.theta:
            return REDUNDANT
        if cell in self.partner:
            return COLLAPSIBLE
        return CRITICAL

    def critical(self, n: int) -> list[Cell]:
        return [c for c in self.cx.bases[n] if self.classify(c) == CRITICAL]

    def apply(self, chain: dict) -> dict:
        out: dict = {}
        for cell, k in chain.items():
            t = self.theta.get(cell)
            if t is not None:
                out[t[1]] = out.get(t[1], 0) + k * t[0]
        return {c: v for c, v in out.items() if v}

    def pi(self, chain: dict, n: int) -> dict:
        """One application of 1 + d theta + theta d to a dimension-n chain."""
        cx = self.cx
        out = dict(chain)
        up = self.apply(chain)
        if up:
            for c, v in cx.boundary_chain(n + 1, up).items():
                out[c] = out.get(c, 0) + v
        for c, v in self.apply(cx.boundary_chain(n, chain)).items():
            out[c] = out.get(c, 0) + v
        return {c: v for c, v in out.items() if v}

    def pi_limit(self, chain: dict, n: int, cap: int = 10_000) -> dict:
        cur = {c: v for c, v in chain.items() if v}
        for _ in range(cap):
            nxt = self.pi(cur, n)
            if nxt == cur:
                return cur
            cur = nxt
        raise MatchingError(f"Pi_theta did not stabilise within {cap} steps")


def classify(cell: Cell, scheme: CollapsingScheme) -> str:
    return scheme.classify(cell)


@dataclass
class MatchingReport:
    conditions: dict[str, bool]
    failures: list[str]
    critical_counts: list[int]

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())


def verify_matching(cx: TruncatedComplex, scheme: CollapsingScheme,
                    resolution: KobayashiResolution | None = None) -> MatchingReport:
    """Check conditions (1)-(4) of a collapsing scheme on the truncated bases.

    (1) theta^2 = 0; (2) theta is injective up to sign; (3) every redundant b
    occurs with coefficient -1 in d(theta(b)); (4) the relation b > b'
    (b' != b occurring in d theta(b) or theta d(b)) is acyclic on each basis.
    With a resolution, the coefficient check is repeated with closed forms.
    """
    fails: list[str] = []
    ok = {"theta_squared_zero": True, "injective": True, "coefficient_minus_one": True,
          "well_founded": True, "images_in_basis": True}
    seen: dict[Cell, Cell] = {}
    for b, (sign, img) in scheme.theta.items():
        n = len(b)
        if not cx.contains(n + 1, img):
            ok["images_in_basis"] = False
            fails.append(f"theta{cell_str(b)} = {cell_str(img)} is outside the truncation")
            continue
        if img in scheme.theta:
            ok["theta_squared_zero"] = False
            fails.append(f"theta^2{cell_str(b)} != 0")
        if img in seen:
            ok["injective"] = False
            fails.append(f"theta{cell_str(b)} = +-theta{cell_str(seen[img])}")
        seen[img] = b
        coeff = sign * cx.boundary_chain(n + 1, {img: 1}).get(b, 0)
        if coeff != -1:
            ok["coefficient_minus_one"] = False
            fails.append(f"{cell_str(b)} has coefficient {coeff} in d theta")
        if resolution is not None:
            closed = closed_form_boundary(img, resolution.system).augment()
            if closed != resolution.tensored_boundary(img):
                ok["coefficient_minus_one"] = False
                fails.append(f"closed form and recursion disagree on {cell_str(img)}")
    for n in range(cx.top + 1):
        graph: dict[Cell, set] = {b: set() for b in cx.bases[n]}
        for b in cx.bases[n]:
            image = cx.boundary_chain(n + 1, scheme.apply({b: 1})) if n < cx.top else {}
            down = scheme.apply(cx.boundary_chain(n, {b: 1}))
            graph[b].update(c for c in list(image) + list(down) if c != b)
        try:
            tuple(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            ok["well_founded"] = False
            fails.append(f"cycle in dimension {n}: {[cell_str(c) for c in exc.args[1]]}")
    counts = [len(scheme.critical(n)) for n in range(cx.top + 1)]
    return MatchingReport(ok, fails, counts)


def morse_complex(cx: TruncatedComplex, scheme: CollapsingScheme) -> TruncatedComplex:
    """Critical cells with boundary pi o d o Pi_theta^inf."""
    bases = [scheme.critical(n) for n in range(cx.top + 1)]
    index = [{c: i for i, c in enumerate(b)} for b in bases]
    mats: list[IntegerMatrix | None] = [None]
    for n in range(1, cx.top + 1):
        entries = {}
        for j, cell in enumerate(bases[n]):
            image = cx.boundary_chain(n, scheme.pi_limit({cell: 1}, n))
            for face, v in image.items():
                i = index[n - 1].get(face)
                if i is not None:
                    entries[i, j] = v
        mats.append(IntegerMatrix(len(bases[n - 1]), len(bases[n]), entries))
    return TruncatedComplex(bases, mats)


# -- top level ------------------------------------------------------------------


@dataclass
class HomologyRun:
    N: int
    D: int
    resolution: KobayashiResolution
    complex: TruncatedComplex
    scheme: CollapsingScheme
    matching: MatchingReport
    groups: list[HomologyGroup]
    morse: TruncatedComplex | None
    morse_groups: list[HomologyGroup]

    def to_json(self) -> dict:
        return {
            "truncation": self.N,
            "dimension_bound": self.D,
            "system": self.resolution.system.name,
            "cell_counts": [len(b) for b in self.complex.bases],
            "groups": [g.as_dict(k) for k, g in enumerate(self.groups)],
            "morse": {
                "critical_counts": self.matching.critical_counts,
                "groups": [g.as_dict(k) for k, g in enumerate(self.morse_groups)],
                "matching": self.matching.conditions,
                "failures": self.matching.failures,
            },
        }


def run_homology(N: int, D: int = 4) -> HomologyRun:
    """Homology of the bounded monoid F_1^star(N) through dimension D - 1, with Morse check."""
    res = KobayashiResolution(RewritingSystem.r1_bounded(N), Truncation(N, D))
    cx = tensor_trivial(res, D)
    scheme = CollapsingScheme(cx)
    report = verify_matching(cx, scheme, res)
    groups = all_homology(cx)
    morse = morse_complex(cx, scheme) if report.passed else None
    mgroups = all_homology(morse) if morse is not None else []
    return HomologyRun(N, D, res, cx, scheme, report, groups, morse, mgroups)
