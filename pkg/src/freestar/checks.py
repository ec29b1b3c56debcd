"""The verification suite run by ``freestar verify``."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import growth, homology, rewriting
from .words import words_of_length
from .resolution import KobayashiResolution, ModuleElement, Truncation, closed_form_boundary, named_cells

MINIMAL_REV_FACTORS = {"000", "111", "011001", "100110", "010010010", "101101101"}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)


def check_confluence(maxlen: int = 18) -> CheckResult:
    pairs = rewriting.critical_pairs(rewriting.RewritingSystem.r1(), maxlen)
    bad = [p for p in pairs if not p.resolved]
    return CheckResult("confluence", not bad, f"{len(pairs)} pairs, {len(bad)} unresolved")


def check_schema_equivalence(L: int = 8) -> CheckResult:
    rep = rewriting.verify_schema_equivalence(L)
    return CheckResult("schema_equivalence", rep.passed,
                       f"{rep.checked} words, {len(rep.counterexamples)} counterexamples")


def check_bijection(n_max: int = 16) -> CheckResult:
    bad = [n for n in range(n_max + 1) if not growth.phi_bijection_check(n)]
    return CheckResult("phi_bijection", not bad, f"n <= {n_max}; failing n: {bad}")


def check_counting(n_max: int = 22) -> CheckResult:
    dp = growth.sphere_counts_dp(n_max)
    enum = [growth.sphere_count_enumerate(growth.STAR, n) for n in range(n_max + 1)]
    ok = dp == enum and dp[3] == 6 and dp[4] == 10
    return CheckResult("dp_matches_enumeration", ok, f"n <= {n_max}")


def check_minimal_factors() -> CheckResult:
    got = growth.minimal_forbidden_factors(growth.REV, 9)
    return CheckResult("minimal_forbidden_factors", got == MINIMAL_REV_FACTORS, str(sorted(got, key=lambda w: (len(w), w))))


def check_intermediate_growth() -> CheckResult:
    s = growth.sphere_counts_dp(900)
    dens = [growth.log2_density(s[n], n) for n in (100, 200, 400, 900)]
    ok = dens[-1] < 0.2 and s[900] > 900 ** 8 and all(a > b for a, b in zip(dens, dens[1:]))
    return CheckResult("intermediate_growth_signal", ok,
                       "log2 s(n)/n at 100,200,400,900: " + ", ".join(f"{d:.4f}" for d in dens))


def check_sandwich(n_max: int = 40) -> CheckResult:
    rows = growth.sandwich_report(n_max)
    ok = all(r["star_equals_rev"] for r in rows)
    held = {k: all(r[k] for r in rows[1:]) for k in growth.SANDWICH_FIELDS if k.startswith("sandwich")}
    return CheckResult("sandwich_report", ok, f"equality column all true: {ok}; pairings holding: {held}")


def check_resolution(N: int = 5, max_total: int = 10) -> CheckResult:
    res = KobayashiResolution(rewriting.RewritingSystem.r1_bounded(N), Truncation(N, 4))
    sys = res.system
    for n in range(2, 5):
        for cell in res.cells(n):
            if res.boundary_of(res.boundary(cell)):
                return CheckResult("resolution", False, f"dd != 0 on {cell}")
    for n in (1, 2):
        for cell in res.cells(n):
            room = max_total - sum(map(len, cell))
            for m in range(room + 1):
                for x in sys.irreducible_words(m):
                    b = ModuleElement.basis(cell, x)
                    lhs = res.boundary_of(res.homotopy(b)) + res.homotopy(res.boundary_of(b))
                    if lhs != b:
                        return CheckResult("resolution", False, f"di + id != id on {cell}.{x}")
    return CheckResult("resolution", True, f"N={N}")


def check_closed_forms(N: int = 5) -> CheckResult:
    sys = rewriting.RewritingSystem.r1()
    res = KobayashiResolution(sys, Truncation(N, 4))
    count = 0
    for dim in (2, 3, 4):
        for cell in named_cells(N, dim):
            count += 1
            if closed_form_boundary(cell, sys) != res.boundary(cell):
                return CheckResult("closed_forms", False, f"mismatch on {cell}")
    return CheckResult("closed_forms", True, f"{count} cells")


def check_homology(N_max: int = 5) -> CheckResult:
    lines = []
    ok = True
    for N in range(1, N_max + 1):
        run = homology.run_homology(N, 4)
        g = run.groups
        good = (g[0] == homology.HomologyGroup(1) and g[1] == homology.HomologyGroup(1)
                and g[2] == homology.HomologyGroup(N - 1) and g[3] == homology.HomologyGroup(0)
                and run.matching.passed and run.matching.critical_counts[3] == 0
                and run.morse_groups[:3] == g[:3])
        ok &= good
        lines.append(f"N={N}: " + ", ".join(str(x) for x in g))
    return CheckResult("homology", ok, "; ".join(lines))


def check_rank2(n_max: int = 12) -> CheckResult:
    rows = growth.growth_estimate_r2(n_max, enumerate_upto=6)
    s = [r["sphere"] for r in rows]
    brute = sum(1 for w in words_of_length(3, 2) if rewriting.RewritingSystem.rstar(2).is_irreducible(w))
    ok = all(r["bound_ok"] for r in rows) and s[1] == 4 and s[2] == 16 and s[3] == brute
    ok &= all(r["enumeration_agrees"] in (None, True) for r in rows)
    return CheckResult("rank2_growth", ok, f"s2(1..4) = {s[1:5]}, brute s2(3) = {brute}")


def run_all(fast: bool = False) -> list[CheckResult]:
    plan = [
        (check_confluence, {}),
        (check_schema_equivalence, {}),
        (check_bijection, {}),
        (check_counting, {"n_max": 16 if fast else 22}),
        (check_minimal_factors, {}),
        (check_intermediate_growth, {}),
        (check_sandwich, {"n_max": 16 if fast else 40}),
        (check_resolution, {}),
        (check_closed_forms, {}),
        (check_homology, {}),
        (check_rank2, {}),
    ]
    out = []
    for fn, kw in plan:
        t = time.perf_counter()
        try:
            r = fn(**kw)
        except Exception as exc:  # reported, not raised: the suite must finish
            r = CheckResult(fn.__name__.removeprefix("check_"), False, f"{type(exc).__name__}: {exc}")
        r.seconds = round(time.perf_counter() - t, 3)
        out.append(r)
    return out

