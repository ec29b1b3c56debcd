"""Kobayashi free resolution of Z over the monoid defined by a complete system.

A basis element of P_n is a pair ``(cell, translate)``: ``cell`` is a tuple
``(v_1, ..., v_n)`` of nonempty irreducible words with ``v_1`` a letter and
each adjacent pair an edge pair, and ``translate`` is an irreducible word
giving the right action. P_0 = ZM has the single cell ``()``.

The boundary and the contracting homotopy are defined by mutual recursion:

    d(v_1..v_{n+1})    = (v_1..v_n) . v_{n+1} - i(d(v_1..v_n) . v_{n+1})
    i((v_1..v_n) . x)  = 0                           if v_n x is irreducible
                       = (v_1..v_{n+1}) . y + i(i(d(v_1..v_n) . v_{n+1}) . y)

where v_n v_{n+1} is the shortest reducible prefix of v_n x and x = v_{n+1} y.
The closed forms for the rank 1 system R1 are provided separately so the two
routes can be compared term for term.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

from .rewriting import R1_BOUNDED, RewritingSystem
from .words import swap_case


class ResolutionError(RuntimeError):
    pass


class TruncationOverflow(ResolutionError):
    pass


Cell = tuple  # tuple[str, ...]


def cell_str(cell: Cell) -> str:
    return "(" + "|".join(cell) + ")"


def cell_dual(cell: Cell) -> Cell:
    return tuple(swap_case(v) for v in cell)


class ModuleElement:
    """Finite formal sum of ``(cell, translate)`` basis elements with integer coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict[tuple[Cell, str], int] = {}
        if terms:
            for key, c in (terms.items() if isinstance(terms, dict) else terms):
                self._add(key, c)

    def _add(self, key, c):
        v = self.terms.get(key, 0) + c
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    @classmethod
    def basis(cls, cell: Cell, translate: str = "", coeff: int = 1) -> "ModuleElement":
        return cls({(tuple(cell), translate): coeff})

    def copy(self) -> "ModuleElement":
        out = ModuleElement()
        out.terms = dict(self.terms)
        return out

    def __iadd__(self, other: "ModuleElement"):
        for key, c in other.terms.items():
            self._add(key, c)
        return self

    def __add__(self, other):
        out = self.copy()
        out += other
        return out

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        out = self.copy()
        for key, c in other.terms.items():
            out._add(key, -c)
        return out

    def scaled(self, k: int) -> "ModuleElement":
        out = ModuleElement()
        if k:
            out.terms = {key: k * c for key, c in self.terms.items()}
        return out

    def act(self, word: str, system: RewritingSystem) -> "ModuleElement":
        """Right action by ``word``; translates are reduced to normal form."""
        if not word:
            return self.copy()
        out = ModuleElement()
        nf = system.normal_form
        for (cell, t), c in self.terms.items():
            out._add((cell, nf(t + word)), c)
        return out

    def dual(self) -> "ModuleElement":
        return ModuleElement({(cell_dual(cell), swap_case(t)): c
                              for (cell, t), c in self.terms.items()})

    def augment(self) -> dict[Cell, int]:
        """Image under - (x)_{ZM} Z: translates are sent to 1."""
        out: dict[Cell, int] = defaultdict(int)
        for (cell, _), c in self.terms.items():
            out[cell] += c
        return {k: v for k, v in out.items() if v}

    def dimension(self) -> int | None:
        dims = {len(cell) for cell, _ in self.terms}
        if len(dims) > 1:
            raise ResolutionError(f"mixed dimensions {sorted(dims)}")
        return dims.pop() if dims else None

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, ModuleElement) and self.terms == other.terms

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"ModuleElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (cell, t), c in sorted(self.terms.items()):
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(f"{sign} {mag}{cell_str(cell)}∘{t or '1'}")
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def total_length(cell: Cell, translate: str) -> int:
    return sum(map(len, cell)) + len(translate)


def max_run(w: str) -> int:
    best = run = 0
    prev = None
    for c in w:
        run = run + 1 if c == prev else 1
        prev = c
        best = max(best, run)
    return best


@dataclass(frozen=True)
class Truncation:
    """Bounds on generated cells: run-length index ``N`` and dimension ``D``.

    A cell is within the truncation when every component has length <= 3N
    and no run longer than N; for the named rank 1 cells this is exactly
    i, j, k <= N.
    """

    N: int
    D: int = 4

    def __post_init__(self):
        if self.N < 1 or self.D < 1:
            raise ValueError("truncation bounds must be positive")

    def admits(self, cell: Cell) -> bool:
        return len(cell) <= self.D and all(len(v) <= 3 * self.N and max_run(v) <= self.N
                                           for v in cell)


class KobayashiResolution:
    """The resolution attached to a complete, length-reducing rewriting system.

    The system is assumed complete on the words it is asked about; for the
    R1 families this is checked separately by the critical pair analysis.
    """

    def __init__(self, system: RewritingSystem, truncation: Truncation | None = None):
        self.system = system
        if truncation is None:
            if system.schema != R1_BOUNDED:
                raise ValueError("an infinite system needs a truncation")
            truncation = Truncation(system.index_bound)
        self.truncation = truncation
        self._bd: dict[Cell, ModuleElement] = {}
        self._ho: dict[tuple[Cell, str], ModuleElement] = {}
        self._cells: dict[int, list[Cell]] = {}
        self._misc: dict = {}

    # -- bases --------------------------------------------------------------

    def edge_partners(self, u: str, maxlen: int) -> list[str]:
        """All v with (u, v) an edge pair and |v| <= maxlen."""
        # uv must end with an lhs that starts inside u and sticks out of it
        sys = self.system
        out = set()
        for rule in self._rules(len(u) + maxlen):
            lhs = rule.lhs
            for p in range(max(0, len(u) - len(lhs) + 1), len(u)):
                k = len(u) - p
                if lhs[:k] != u[p:]:
                    continue
                v = lhs[k:]
                if len(v) > maxlen or v in out:
                    continue
                if sys.first_reducible_prefix(u + v, len(u) + 1) == len(u) + len(v) \
                        and sys.is_irreducible(v):
                    out.add(v)
        return sorted(out)

    def _rules(self, bound: int):
        key = ("rules", bound)
        if key not in self._misc:
            self._misc[key] = self.system.rules(bound)
        return self._misc[key]

    def edge_pairs(self, maxlen: int) -> set[tuple[str, str]]:
        """Edge pairs (u, v) with |u| + |v| <= maxlen."""
        sys = self.system
        out = set()
        level = [""]
        for n in range(1, maxlen):
            level = [w + c for w in level for c in sys.alphabet if sys.is_irreducible(w + c)]
            for u in level:
                out.update((u, v) for v in self.edge_partners(u, maxlen - n))
        return out

    def cells(self, n: int) -> list[Cell]:
        """All dimension-n cells within the truncation, in sorted order."""
        if n < 0:
            raise ValueError("dimension must be nonnegative")
        if n in self._cells:
            return self._cells[n]
        if n == 0:
            out = [()]
        elif n == 1:
            out = [(c,) for c in self.system.alphabet]
        else:
            t = self.truncation
            out = []
            for cell in self.cells(n - 1):
                for v in self.edge_partners(cell[-1], 3 * t.N):
                    c = cell + (v,)
                    if t.admits(c):
                        out.append(c)
            out.sort()
        self._cells[n] = out
        return out

    # -- boundary and homotopy -------------------------------------------------

    def boundary(self, cell: Cell) -> ModuleElement:
        """d_n of the basis element ``cell . 1``."""
        cell = tuple(cell)
        hit = self._bd.get(cell)
        if hit is not None:
            return hit
        n = len(cell)
        if n == 0:
            raise ValueError("P_0 has no boundary inside the resolution")
        if n == 1:
            out = ModuleElement({((), cell[0]): 1, ((), ""): -1})
        else:
            head, last = cell[:-1], cell[-1]
            out = ModuleElement.basis(head, last) - self.homotopy(self.boundary(head).act(last, self.system))
        self._bd[cell] = out
        return out

    def boundary_of(self, x: ModuleElement) -> ModuleElement:
        out = ModuleElement()
        for (cell, t), c in x:
            out += self.boundary(cell).act(t, self.system).scaled(c)
        return out

    def homotopy(self, x: ModuleElement) -> ModuleElement:
        """The contracting homotopy i, extended Z-linearly."""
        out = ModuleElement()
        for (cell, t), c in x:
            out += self.homotopy_basis(cell, t).scaled(c)
        return out

    def homotopy_basis(self, cell: Cell, x: str) -> ModuleElement:
        key = (cell, x)
        hit = self._ho.get(key)
        if hit is not None:
            return hit
        if not cell:
            # i_1(x) = sum_k (x_k) . x_{k+1} ... x_m
            out = ModuleElement({((c,), x[k + 1:]): 1 for k, c in enumerate(x)})
        else:
            out = self._homotopy_step(cell, x)
        self._ho[key] = out
        return out

    def _homotopy_step(self, cell: Cell, x: str) -> ModuleElement:
        sys = self.system
        last = cell[-1]
        e = sys.first_reducible_prefix(last + x, len(last) + 1)
        if e is None:
            return ModuleElement()
        nxt, y = x[:e - len(last)], x[e - len(last):]
        inner = self.homotopy(self.boundary(cell).act(nxt, sys))
        bound = total_length(cell, nxt)
        for (c2, z), _ in inner:
            if total_length(c2, z) >= bound:
                raise ResolutionError(
                    f"homotopy recursion does not shrink: {cell_str(c2)}∘{z} from {cell_str(cell + (nxt,))}")
        return ModuleElement.basis(cell + (nxt,), y) + self.homotopy(inner.act(y, sys))

    def tensored_boundary(self, cell: Cell) -> dict[Cell, int]:
        """Column of the boundary after tensoring with trivial coefficients."""
        if len(cell) == 1:
            return {}
        return self.boundary(cell).augment()


# -- convenience functions mirroring the operation names ----------------------


def boundary_1(letter: str) -> ModuleElement:
    return ModuleElement({((), letter): 1, ((), ""): -1})


def homotopy_i1(x: str, system: RewritingSystem) -> ModuleElement:
    if not system.is_irreducible(x):
        raise ValueError(f"{x!r} is reducible")
    return ModuleElement({((c,), x[k + 1:]): 1 for k, c in enumerate(x)})


def edge_pairs(system: RewritingSystem, maxlen: int) -> set[tuple[str, str]]:
    return KobayashiResolution(system, Truncation(max(1, maxlen))).edge_pairs(maxlen)


# -- named rank 1 cells --------------------------------------------------------


def _w(*parts: tuple[str, int]) -> str:
    return "".join(c * k for c, k in parts)


def X(i: int, starred: bool = False) -> Cell:
    cell = ("a", _w(("a", i - 1), ("A", i), ("a", i)))
    return cell_dual(cell) if starred else cell


def type_I(i: int, starred: bool = False) -> Cell:
    cell = X(i) + ("A" * i,)
    return cell_dual(cell) if starred else cell


def type_II(i: int, j: int, starred: bool = False) -> Cell:
    if not 1 <= j < i:
        raise ValueError("type II needs 1 <= j < i")
    cell = X(i) + (_w(("A", j), ("a", j)),)
    return cell_dual(cell) if starred else cell


def type_III(i: int, j: int, k: int, starred: bool = False) -> Cell:
    if not (i >= 1 and 1 <= j < k <= i + j):
        raise ValueError("type III needs 1 <= j < k <= i + j")
    cell = X(i) + (_w(("a", j), ("A", k), ("a", k)),)
    return cell_dual(cell) if starred else cell


def theta_image_I(i: int, starred: bool = False) -> Cell:
    cell = type_I(i) + (_w(("a", i), ("A", i)),)
    return cell_dual(cell) if starred else cell


def theta_image_II(i: int, j: int, starred: bool = False) -> Cell:
    cell = type_II(i, j) + ("A" * j,)
    return cell_dual(cell) if starred else cell


def theta_image_III(i: int, j: int, k: int, starred: bool = False) -> Cell:
    cell = type_III(i, j, k) + ("A" * k,)
    return cell_dual(cell) if starred else cell


def _run_shape(w: str) -> list[tuple[str, int]]:
    out: list[tuple[str, int]] = []
    for c in w:
        if out and out[-1][0] == c:
            out[-1] = (c, out[-1][1] + 1)
        else:
            out.append((c, 1))
    return out


def identify(cell: Cell) -> tuple[str, tuple[int, ...], bool] | None:
    """Recognise a named rank 1 cell: returns (kind, indices, starred).

    Kinds: ``X`` (dim 2), ``I``, ``II``, ``III`` (dim 3) and ``I4``, ``II4``,
    ``III4`` (the dim 4 cells matched with the dim 3 types).
    """
    cell = tuple(cell)
    if not cell or cell[0] not in ("a", "A"):
        return None
    starred = cell[0] == "A"
    c = cell_dual(cell) if starred else cell
    if len(c) < 2:
        return None
    shape = _run_shape(c[1])
    # X_i = (a, a^{i-1} A^i a^i)
    if shape and shape[0][0] == "A":
        shape = [("a", 0)] + shape
    if len(shape) != 3 or [s[0] for s in shape] != ["a", "A", "a"]:
        return None
    i = shape[1][1]
    if shape[0][1] != i - 1 or shape[2][1] != i:
        return None
    if len(c) == 2:
        return "X", (i,), starred
    candidates = [("I", (i,), type_I, theta_image_I)]
    candidates += [("II", (i, j), type_II, theta_image_II) for j in range(1, i)]
    third = _run_shape(c[2])
    if len(third) == 3 and [s[0] for s in third] == ["a", "A", "a"]:
        j, k = third[0][1], third[1][1]
        if third[2][1] == k and 1 <= j < k <= i + j:
            candidates.append(("III", (i, j, k), type_III, theta_image_III))
    for kind, idx, make3, make4 in candidates:
        if len(c) == 3 and c == make3(*idx):
            return kind, idx, starred
        if len(c) == 4 and c == make4(*idx):
            return kind + "4", idx, starred
    return None


def closed_form_boundary(cell: Cell, system: RewritingSystem) -> ModuleElement:
    """The boundary of a named rank 1 cell from its closed formula.

    Raises ``ValueError`` on a cell shape with no closed form.
    """
    hit = identify(cell)
    if hit is None:
        raise ValueError(f"no closed form for {cell_str(cell)}")
    kind, idx, starred = hit
    out = _closed_form(kind, idx, system)
    return out.dual() if starred else out


def _closed_form(kind: str, idx: tuple[int, ...], system: RewritingSystem) -> ModuleElement:
    a = lambda k: "a" * k  # noqa: E731
    A = lambda k: "A" * k  # noqa: E731
    nf = system.normal_form
    B = ModuleElement.basis
    if kind == "X":
        (i,) = idx
        out = ModuleElement()
        for s in range(i):
            out += B(("a",), a(s) + A(i) + a(i))
            out += B(("A",), A(s) + a(i))
        return out
    if kind == "I":
        (i,) = idx
        return B(X(i), A(i)) - B(X(i, True))
    if kind == "II":
        i, j = idx
        return B(X(i), nf(A(j) + a(j))) - B(X(i))
    if kind == "III":
        i, j, k = idx
        return B(X(i), nf(a(j) + A(k) + a(k))) - B(X(i), a(j))
    if kind == "I4":
        (i,) = idx
        return B(type_I(i), a(i) + A(i)) + B(type_I(i, True), A(i))
    if kind == "II4":
        i, j = idx
        return B(type_II(i, j), A(j))
    if kind == "III4":
        i, j, k = idx
        return B(type_III(i, j, k), A(k))
    raise ValueError(kind)


def named_cells(N: int, dim: int) -> Iterator[Cell]:
    """Every named cell of the given dimension with indices <= N, both orientations."""
    for starred in (False, True):
        for i in range(1, N + 1):
            if dim == 2:
                yield X(i, starred)
            elif dim in (3, 4):
                mk_I, mk_II, mk_III = ((type_I, type_II, type_III) if dim == 3
                                       else (theta_image_I, theta_image_II, theta_image_III))
                yield mk_I(i, starred)
                for j in range(1, i):
                    yield mk_II(i, j, starred)
                for j, k in product(range(1, N + 1), repeat=2):
                    if j < k <= i + j:
                        yield mk_III(i, j, k, starred)

