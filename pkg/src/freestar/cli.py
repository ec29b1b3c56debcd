"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__, checks, growth, homology, rewriting
from .cache import ResultCache
from .resolution import (KobayashiResolution, ResolutionError, Truncation, closed_form_boundary,
                         identify, named_cells)

log = logging.getLogger("freestar")

OK, FAILED, BAD_CONFIG, INTERNAL = 0, 1, 2, 3
MAX_TRUNCATION = 8
DP_GUARD = 5000

CONVENTIONS = {
    "sphere": growth.EXACT,
    "ball": growth.CUMULATIVE,
    "u_strict": growth.STRICT_PEAK,
    "u_doubled": growth.DOUBLED_PEAK_ALLOWED,
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n_max: int | None = None
    truncation: int | None = None
    rank: int = 1
    out: str | None = None
    fmt: str = "csv"
    cache_dir: str | None = None
    verbosity: int = 0
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.rank not in (1, 2):
            raise ConfigError("rank must be 1 or 2")
        if self.n_max is not None and self.n_max < 0:
            raise ConfigError("nmax must be nonnegative")
        if self.truncation is not None and not 1 <= self.truncation <= MAX_TRUNCATION:
            raise ConfigError(f"truncation must be in 1..{MAX_TRUNCATION}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        return self


def _emit(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


def _cached(cfg: RunConfig, schema: str, op: str, bounds: dict, compute):
    if not cfg.cache_dir:
        return json.loads(json.dumps(compute(), sort_keys=True))
    return ResultCache(cfg.cache_dir).fetch(schema, op, bounds, compute)


def render_csv(records: list[dict], conventions: dict) -> str:
    buf = io.StringIO()
    buf.write("# conventions: " + " ".join(f"{k}={v}" for k, v in conventions.items()) + "\n")
    if records:
        names = ["n"] + [k for k in records[0] if k != "n"]
        w = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow({k: "" if v is None else v for k, v in r.items()})
    return buf.getvalue()


def render_json(records: list[dict], conventions: dict) -> str:
    return json.dumps({"conventions": conventions, "records": records}, indent=1, sort_keys=True) + "\n"


def render_plot(records: list[dict], column: str, convention: str) -> str:
    lines = [f"# n\tlog2({column}); convention={convention}"]
    lines += [f"{r['n']}\t{math.log2(r[column]):.12g}" for r in records if r[column]]
    return "\n".join(lines) + "\n"


# -- commands --------------------------------------------------------------------


def cmd_confluence(cfg: RunConfig) -> int:
    x = cfg.extra
    name, maxlen = x["system"], x["maxlen"]
    if maxlen < 3:
        raise ConfigError("maxlen must be at least 3")
    if name == "r1":
        system = rewriting.RewritingSystem.r1()
    elif name == "r1-bounded":
        system = rewriting.RewritingSystem.r1_bounded(x["index"] or 1)
    else:
        if cfg.rank == 2 and maxlen > 12:
            raise ConfigError("rank 2 critical pair search is guarded at maxlen 12")
        system = rewriting.RewritingSystem.rstar(cfg.rank)
    if x.get("dump_rules"):
        _emit(rewriting.dump_rules(system.rules(maxlen)), x["dump_rules"])
    pairs = rewriting.critical_pairs(system, maxlen)
    bad = [p for p in pairs if not p.resolved]
    print(f"{system.name}: {len(pairs)} critical pairs checked (maxlen {maxlen}), {len(bad)} unresolved")
    for p in bad[:20]:
        print(f"  unresolved: {p.overlap} -> {p.left} / {p.right}")
    status = OK if not bad else FAILED
    if system.rank == 1 and system.schema != rewriting.R1_BOUNDED:
        rep = rewriting.verify_schema_equivalence(x["equiv_len"])
        print(f"R1 vs RSTAR(1) on w w* w, |w| <= {x['equiv_len']}: "
              f"{rep.checked} words, {len(rep.counterexamples)} counterexamples")
        for w, a, b in rep.counterexamples[:20]:
            print(f"  counterexample: w={w} R1->{a} RSTAR->{b}")
        if not rep.passed:
            status = FAILED
    return status


def _growth_rank1(cfg: RunConfig) -> dict:
    n, mode = cfg.n_max, cfg.extra["mode"]
    if mode in ("enum", "both") and n > growth.ENUMERATION_GUARD:
        raise ConfigError(f"enumeration is guarded at n <= {growth.ENUMERATION_GUARD}")
    if n > growth.LEVEL_ENUMERATION_GUARD:
        if n > DP_GUARD:
            raise ConfigError(f"DP is guarded at n <= {DP_GUARD}")
        s = growth.sphere_counts_dp(n)
        balls = growth.ball_counts(s)
        records = [{"n": k, "sphere": s[k], "ball": balls[k],
                    "log2_density": growth.log2_density(s[k], k) if k else None}
                   for k in range(n + 1)]
    else:
        records = growth.sandwich_report(n)
    if mode in ("enum", "both"):
        for r in records:
            e = growth.sphere_count_enumerate(growth.STAR, r["n"])
            r["enumerated"] = e
            r["dp_equals_enum"] = e == r["sphere"]
    return {"conventions": CONVENTIONS, "records": records}


def _growth_rank2(cfg: RunConfig) -> dict:
    if cfg.n_max > growth.R2_GUARD:
        raise ConfigError(f"rank 2 counts are guarded at n <= {growth.R2_GUARD}")
    rows = growth.growth_estimate_r2(cfg.n_max)
    return {"conventions": {"sphere": growth.EXACT, "ball": growth.CUMULATIVE,
                            "free_group_ball": growth.CUMULATIVE}, "records": rows}


def cmd_growth(cfg: RunConfig) -> int:
    if cfg.n_max is None:
        raise ConfigError("--nmax is required")
    compute = _growth_rank1 if cfg.rank == 1 else _growth_rank2
    schema = "RSTAR(2)" if cfg.rank == 2 else "R1"
    payload = _cached(cfg, schema, "growth", {"n_max": cfg.n_max, "mode": cfg.extra["mode"]},
                      lambda: compute(cfg))
    records, conv = payload["records"], payload["conventions"]
    render = render_json if cfg.fmt == "json" else render_csv
    _emit(render(records, conv), cfg.out)
    if cfg.extra.get("plot"):
        _emit(render_plot(records, "sphere", conv["sphere"]), cfg.extra["plot"])
    ok = all(r.get("dp_equals_enum", True) and r.get("star_equals_rev", True)
             and r.get("bound_ok", True) and r.get("enumeration_agrees") in (None, True)
             for r in records)
    return OK if ok else FAILED


def _closed_form_check(N: int, run: homology.HomologyRun) -> dict:
    """Closed forms against the recursion: on R1 for indices <= N, and on the bounded resolution."""
    r1 = rewriting.RewritingSystem.r1()
    res = KobayashiResolution(r1, Truncation(N, 4))
    checked = mismatched = 0
    for dim in (2, 3, 4):
        for cell in named_cells(N, dim):
            checked += 1
            mismatched += closed_form_boundary(cell, r1) != res.boundary(cell)
    bres = run.resolution
    for dim in range(2, min(run.D, 4) + 1):
        for cell in bres.cells(dim):
            if identify(cell) is None:
                continue
            checked += 1
            mismatched += closed_form_boundary(cell, bres.system) != bres.boundary(cell)
    return {"checked": checked, "mismatched": mismatched}


def cmd_homology(cfg: RunConfig) -> int:
    N = cfg.truncation
    if N is None:
        raise ConfigError("--truncation is required")
    D = cfg.extra.get("dim", 4)
    if not 2 <= D <= 5:
        raise ConfigError("--dim must be in 2..5")
    check_forms = cfg.extra.get("check_lemmas", False)

    def compute():
        run = homology.run_homology(N, D)
        out = run.to_json()
        out["chain_condition"] = run.complex.chain_condition()
        if check_forms:
            out["closed_forms"] = _closed_form_check(N, run)
        if cfg.extra.get("matrices"):
            d = Path(cfg.extra["matrices"])
            d.mkdir(parents=True, exist_ok=True)
            for n in range(1, D + 1):
                (d / f"d{n}.txt").write_text(run.complex.boundaries[n].dump())
        return out

    if cfg.extra.get("matrices"):
        # matrix files are a side effect, so never serve them from the cache
        payload = json.loads(json.dumps(compute(), sort_keys=True))
    else:
        payload = _cached(cfg, f"R1_BOUNDED({N})", "homology", {"N": N, "D": D, "closed_forms": check_forms}, compute)
    text = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    if cfg.out:
        _emit(text, cfg.out)
    for g in payload["groups"]:
        torsion = "".join(f" + Z/{t}" for t in g["torsion"])
        free = {0: "0", 1: "Z"}.get(g["rank"], f"Z^{g['rank']}")
        print(f"H_{g['dim']} = {free}{torsion}")
    print(f"critical cells per dimension: {payload['morse']['critical_counts']}")
    ok = all(payload["morse"]["matching"].values()) and payload["chain_condition"]
    if check_forms:
        print(f"closed forms: {payload['closed_forms']['checked']} cells, {payload['closed_forms']['mismatched']} mismatches")
        ok &= payload["closed_forms"]["mismatched"] == 0
    for f in payload["morse"]["failures"][:20]:
        print(f"  matching failure: {f}")
    return OK if ok else FAILED


def cmd_verify(cfg: RunConfig) -> int:
    results = checks.run_all(fast=cfg.extra.get("fast", False))
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name} ({r.seconds:.2f}s): {r.detail}")
    failed = [r for r in results if not r.passed]
    summary = {
        "version": __version__,
        "passed": not failed,
        "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail, "seconds": r.seconds}
                   for r in results],
        "first_failure": failed[0].detail if failed else None,
    }
    if cfg.extra.get("json"):
        _emit(json.dumps(summary, indent=1) + "\n", cfg.extra["json"])
    return OK if not failed else FAILED


COMMANDS = {"confluence": cmd_confluence, "growth": cmd_growth,
            "homology": cmd_homology, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="freestar", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("--cache-dir", default=None, help="directory for cached results")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("confluence", help="critical pairs and the R1 / RSTAR(1) equivalence")
    c.add_argument("--system", choices=["r1", "r1-bounded", "rstar"], default="r1")
    c.add_argument("--rank", type=int, default=1)
    c.add_argument("--index", type=int, default=None, help="rule index bound for r1-bounded")
    c.add_argument("--maxlen", type=int, default=18)
    c.add_argument("--equiv-len", type=int, default=8)
    c.add_argument("--dump-rules", default=None, metavar="PATH")

    g = sub.add_parser("growth", help="sphere/ball counts and the unimodal comparison")
    g.add_argument("--rank", type=int, default=1)
    g.add_argument("--nmax", type=int, required=True)
    g.add_argument("--mode", choices=["dp", "enum", "both"], default="dp")
    g.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    g.add_argument("--out", default=None)
    g.add_argument("--plot", default=None, metavar="PATH", help="tab-separated n, log2(sphere)")

    h = sub.add_parser("homology", help="homology of the bounded monoid F_1^star(N)")
    h.add_argument("--truncation", type=int, required=True)
    h.add_argument("--dim", type=int, default=4, help="top dimension of the complex (reports H_0..H_{dim-1})")
    h.add_argument("--check-lemmas", action="store_true",
                   help="compare every closed-form boundary with the generic recursion")
    h.add_argument("--out", default=None, help="write the JSON report here")
    h.add_argument("--matrices", default=None, metavar="DIR", help="dump boundary matrices as triplets")

    v = sub.add_parser("verify", help="run the whole verification suite")
    v.add_argument("--fast", action="store_true")
    v.add_argument("--json", default=None, metavar="PATH")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    known = {"command", "verbose", "cache_dir", "nmax", "truncation", "rank", "out", "fmt"}
    extra = {k: v for k, v in vars(ns).items() if k not in known}
    return RunConfig(
        command=ns.command,
        n_max=getattr(ns, "nmax", None),
        truncation=getattr(ns, "truncation", None),
        rank=getattr(ns, "rank", 1),
        out=getattr(ns, "out", None),
        fmt=getattr(ns, "fmt", "csv"),
        cache_dir=ns.cache_dir,
        verbosity=ns.verbose,
        extra=extra,
    ).validate()


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(ns.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, growth.GuardError) as exc:
        print(f"freestar: invalid configuration: {exc}", file=sys.stderr)
        return BAD_CONFIG
    except (ResolutionError, homology.MatchingError) as exc:
        print(f"freestar: internal invariant violated: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
