"""Command-line experiment runner.

Subcommands ``geometry``, ``pipeline``, ``bounds`` and ``oracle`` each build a
JSON report (or CSV rows with ``--out file.csv``).  Exit codes: 0 success,
1 structural violation, 2 usage or input error, 3 search budget exhausted.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import bounds as bd
from ._random import derive_seed
from .cliques import (build_ax_instance, contains_clique, event_ax_occurs, iter_cliques,
                      verify_property_A, verify_property_B)
from .errors import BudgetExceeded, NotPrimePower, RetriesExhausted, TooLarge, UnsupportedFieldSize
from .graphs import (apply_pencil_filter, build_intersection_graph, intersect_graphs,
                     random_pencil_coloring, sample_edges)
from .oracle import brute_delta, brute_expected_ks, brute_force_f
from .sampler import SampleParams, sample_points, sample_until_good, verify_b_bound, verify_lemma5
from .unital import build_hermitian_unital, classify_crossing, find_onan, verify_design

SCHEMA_VERSION = "1.0"
THREADS_ENV = "ERDOS_ROGERS_THREADS"
EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- argument parsing ---------------------------------------------------------

def parse_int(text: str) -> int:
    """Integers written plainly or as ``base^exp``."""
    text = str(text).strip()
    try:
        if "^" in text:
            base, exp = text.split("^", 1)
            return int(base) ** int(exp)
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def parse_range(text: str) -> list[int]:
    """``3``, ``3..8`` or ``3,5,7``."""
    text = str(text).strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = parse_int(lo), parse_int(hi)
        if hi < lo:
            raise argparse.ArgumentTypeError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    return [parse_int(t) for t in text.split(",")]


def parse_sizes(text: str) -> list[int]:
    return [parse_int(t) for t in str(text).split(",")]


def parse_budget(text: str):
    text = str(text).strip()
    if text == "exhaustive":
        return None
    n = parse_int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("budget must be positive")
    return n


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    S = argparse.SUPPRESS
    common = _Parser(add_help=False, argument_default=S)
    common.add_argument("--seed", type=parse_int)
    common.add_argument("--out")
    common.add_argument("--config")
    common.add_argument("--threads", type=int)

    p = _Parser(prog="erdos-rogers", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("geometry", parents=[common], argument_default=S,
                       help="build and verify the Hermitian unital")
    g.add_argument("--q", type=parse_int)
    g.add_argument("--onan-budget", type=parse_budget)

    pl = sub.add_parser("pipeline", parents=[common], argument_default=S,
                        help="sample, filter and search the random line graph")
    pl.add_argument("--q", type=parse_int)
    pl.add_argument("--s", type=parse_int)
    pl.add_argument("--a", type=float)
    pl.add_argument("--b", type=parse_int)
    pl.add_argument("--rho", type=float)
    pl.add_argument("--pi", type=float)
    pl.add_argument("--trials", type=parse_int)
    pl.add_argument("--x-size", type=parse_int)
    pl.add_argument("--node-budget", type=parse_budget)
    pl.add_argument("--sample-edges", type=parse_int)
    pl.add_argument("--max-retries", type=parse_int)
    pl.add_argument("--properties", action=argparse.BooleanOptionalAction)

    b = sub.add_parser("bounds", parents=[common], argument_default=S,
                       help="evaluate the inequality chains in log space")
    b.add_argument("--lll", action="store_true")
    b.add_argument("--appendix", action="store_true")
    b.add_argument("--final", action="store_true")
    b.add_argument("--janson", action="store_true")
    b.add_argument("--chernoff", action="store_true")
    b.add_argument("--s", type=parse_range)
    b.add_argument("--q", type=parse_range)
    b.add_argument("--n", type=parse_int)
    b.add_argument("--a", type=float)

    o = sub.add_parser("oracle", parents=[common], argument_default=S,
                       help="brute-force Erdős–Rogers values and Janson oracles")
    o.add_argument("--f", action="store_true")
    o.add_argument("--janson", action="store_true")
    o.add_argument("--n", type=parse_range)
    o.add_argument("--s", type=parse_range)
    o.add_argument("--sizes", type=parse_sizes)
    o.add_argument("--rho", type=float)
    o.add_argument("--long", action="store_true")
    return p


DEFAULTS = {
    "common": {"seed": 0, "out": None, "threads": None},
    "geometry": {"q": 3, "onan_budget": None},
    "pipeline": {"q": 3, "s": 3, "a": None, "b": None, "rho": None, "pi": None, "trials": 20,
                 "x_size": None, "node_budget": 2 * 10 ** 6, "sample_edges": 50,
                 "max_retries": 10, "properties": True},
    "bounds": {"lll": False, "appendix": False, "final": False, "janson": False,
               "chernoff": False, "s": [3, 4, 5, 6, 7, 8], "q": None, "n": None, "a": None},
    "oracle": {"f": False, "janson": False, "n": list(range(1, 8)), "s": [2, 3, 4],
               "sizes": [2, 2, 2], "rho": 1.0, "long": False},
}


def _config_tokens(path: str) -> list[str]:
    """Turn a ``key=value`` file into flag tokens for the same parser."""
    tokens = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"config line without '=': {raw.strip()!r}")
            key, value = (t.strip() for t in line.split("=", 1))
            flag = "--" + key.replace("_", "-")
            low = value.lower()
            if low in ("true", "yes", "on"):
                tokens.append(flag)
            elif low in ("false", "no", "off"):
                if key in ("properties",):
                    tokens.append("--no-" + key.replace("_", "-"))
            else:
                tokens += [flag, value]
    return tokens


def resolve_config(argv) -> dict:
    """Defaults, overlaid by the config file, overlaid by explicit flags."""
    parser = build_parser()
    ns = vars(parser.parse_args(argv))
    cmd = ns["command"]
    merged = dict(DEFAULTS["common"])
    merged.update(DEFAULTS[cmd])
    if "config" in ns:
        try:
            file_ns = vars(parser.parse_args([cmd] + _config_tokens(ns["config"])))
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        file_ns.pop("config", None)
        merged.update(file_ns)
    merged.update(ns)
    merged.pop("config", None)
    merged["command"] = cmd
    if merged["threads"] is None:
        merged["threads"] = default_threads()
    if merged["threads"] < 1:
        raise UsageError("--threads must be at least 1")
    return merged


# -- report plumbing ----------------------------------------------------------

def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if isinstance(obj, bd.LogReal):
        return {"sign": obj.sign, "log": _clean(obj.log_mag)}
    if isinstance(obj, int) and not isinstance(obj, bool) and abs(obj) > 2 ** 53:
        return str(obj)
    return obj


def _config_echo(cfg: dict) -> dict:
    return {k: v for k, v in sorted(cfg.items()) if k not in ("out", "threads")}


def make_report(cfg: dict, results: dict, rows=None, timing=None, seeds=None) -> dict:
    rep = {"schema_version": SCHEMA_VERSION, "command": cfg["command"],
           "config": _config_echo(cfg), "log_base": "natural", "results": results}
    if seeds is not None:
        rep["seeds"] = seeds
    if rows is not None:
        rep["rows"] = rows
    rep["timing"] = timing or {}
    return _clean(rep)


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    cols = sorted({k for r in rows for k in r})
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(_clean(v)) if isinstance(v, (dict, list)) else _clean(v)
                    for k, v in r.items()})
    return buf.getvalue()


def emit(report: dict, out) -> None:
    if out is None:
        sys.stdout.write(dumps_report(report))
        return
    if out.endswith(".csv"):
        rows = report.get("rows") or [report["results"]]
        text = rows_to_csv(rows)
    elif out.endswith(".json"):
        text = dumps_report(report)
    else:
        raise UsageError(f"--out must end in .json or .csv, not {out!r}")
    with open(out, "w") as fh:
        fh.write(text)


class _Timer:
    def __init__(self):
        self.marks = {}

    def __call__(self, name):
        timer = self

        class _Ctx:
            def __enter__(self):
                self.t = time.perf_counter()

            def __exit__(self, *exc):
                timer.marks[name] = round(time.perf_counter() - self.t, 6)

        return _Ctx()


# -- geometry -----------------------------------------------------------------

def cmd_geometry(cfg: dict):
    t = _Timer()
    q = cfg["q"]
    with t("build"):
        U = build_hermitian_unital(q)
    with t("design"):
        design = verify_design(U, q)
    with t("onan"):
        search = find_onan(U, budget=cfg["onan_budget"])
    results = {
        "design": design.to_dict(),
        "onan": {"found": search.witness is not None,
                 "witness": list(search.witness) if search.witness else None,
                 "triangles_examined": search.triangles_examined,
                 "budget": cfg["onan_budget"] if cfg["onan_budget"] is not None else "exhaustive"},
    }
    ok = design.ok and search.witness is None
    return make_report(cfg, results, timing=t.marks), EXIT_OK if ok else EXIT_VIOLATION


# -- pipeline -----------------------------------------------------------------

def pipeline_parameters(cfg: dict) -> dict:
    """Resolve a, b, rho, X size; paper formulas unless overridden."""
    q, s = cfg["q"], cfg["s"]
    a = cfg["a"] if cfg["a"] is not None else 1024.0 * s
    b = cfg["b"] if cfg["b"] is not None else bd.b_value(s, a, q)
    if b < 1:
        raise UsageError("b must be at least 1")
    raw_rho = cfg["rho"] if cfg["rho"] is not None else (8 * s / b) ** (2 / s)
    if not 0 <= raw_rho or (cfg["rho"] is not None and raw_rho > 1):
        raise UsageError("rho must lie in [0, 1]")
    rho = min(1.0, raw_rho)
    n_lines = q * q * (q * q - q + 1)
    raw_x = cfg["x_size"] if cfg["x_size"] is not None else 8 * b * q * q
    x_size = min(raw_x, n_lines)
    return {"a": a, "b": b, "rho": rho, "x_size": x_size,
            "flags": {"rho_clamped": raw_rho > 1, "x_size_capped": raw_x > n_lines,
                      "a_is_1024s": a == 1024 * s, "b_at_least_2_40s": b >= 2 ** (40 * s),
                      "b_at_least_8s": b >= 8 * s}}


def _x_trial(H, Hg, pp, s, q, seed, node_budget):
    rng = np.random.default_rng(seed)
    X = np.sort(rng.choice(H.n_lines, pp["x_size"], replace=False)).tolist()
    inst = build_ax_instance(H, X, pp["b"])
    bad, witness = event_ax_occurs(Hg, inst, s, node_budget)
    found = contains_clique(Hg, X, s, node_budget)
    consistent = bad or found is not None
    if witness is not None:
        _, block, clique = witness
        xs = set(X)
        consistent = consistent and set(clique) <= set(block) <= xs and all(
            Hg.has_edge(u, v) for i, u in enumerate(clique) for v in clique[i + 1:])
    lhs, rhs, holds = verify_b_bound(H, X, pp["a"], pp["b"], q)
    return {
        "seed": seed, "bad": bad, "ks_in_X": found is not None,
        "consistent": consistent,
        "witness": None if witness is None else {"point": witness[0], "clique": list(witness[2])},
        "instance": inst.to_dict(),
        "b_bound": {"lhs": lhs, "rhs": rhs, "holds": holds},
        "mainlemma_log_bound": bd.mainlemma_bound(inst, s).value.log_mag,
    }


def cmd_pipeline(cfg: dict):
    t = _Timer()
    q, s, master = cfg["q"], cfg["s"], cfg["seed"]
    if s < 3:
        raise UsageError("s must be at least 3")
    pp = pipeline_parameters(cfg)
    seeds = {"master": master, "sample": derive_seed(master, "sample"),
             "chi": derive_seed(master, "chi"), "rho": derive_seed(master, "rho"),
             "properties": derive_seed(master, "properties"),
             "X": [derive_seed(master, "X", i) for i in range(cfg["trials"])]}

    with t("unital"):
        U = build_hermitian_unital(q)
    params = SampleParams(a=pp["a"], q=q, s=s, seed=seeds["sample"],
                          max_retries=cfg["max_retries"], pi=cfg["pi"])
    with t("sample"):
        try:
            H, lemma, attempts = sample_until_good(U, params)
            sample_ok = True
        except RetriesExhausted as exc:
            # keep the last attempt and report the failing items
            attempts = exc.attempts
            H = sample_points(U, params.probability, derive_seed(params.seed, "points", attempts - 1))
            lemma = verify_lemma5(H, params, spot_checks=50)
            sample_ok = False
    with t("graphs"):
        G = build_intersection_graph(H)
        chi = random_pencil_coloring(H, s, seeds["chi"])
        Gchi = apply_pencil_filter(G, chi)
        Grho = sample_edges(G, pp["rho"], seeds["rho"])
        Hg = intersect_graphs(Gchi, Grho)

    results = {
        "parameters": {k: v for k, v in pp.items() if k != "flags"},
        "pi": params.probability,
        "regime": {**pp["flags"], **params.regime(), "sample_ok": sample_ok,
                   "vacuous": Hg.n_edges == 0},
        "sampling": {"attempts": attempts, "lemma": lemma.to_dict()},
        "stages": {"points": H.n_points, "lines": H.n_lines, "edges_G": G.n_edges,
                   "edges_G_chi": Gchi.n_edges, "edges_G_rho": Grho.n_edges, "edges_H": Hg.n_edges},
    }
    violation = False

    with t("clique_search"):
        search = {"size": s + 1, "count": 0, "by_tag": {}, "complete": True, "examples": []}
        try:
            for c in iter_cliques(Hg.adj, s + 1, node_budget=cfg["node_budget"]):
                tag = classify_crossing(H, c).tag
                search["count"] += 1
                search["by_tag"][tag] = search["by_tag"].get(tag, 0) + 1
                if len(search["examples"]) < 10:
                    search["examples"].append({"lines": list(c), "tag": tag})
        except BudgetExceeded:
            search["complete"] = False
        search["all_fans"] = set(search["by_tag"]) <= {"fan"}
        violation |= not search["all_fans"]
        results["clique_search_H"] = search

    if cfg["properties"]:
        with t("properties"):
            pa = verify_property_A(G, H, s, node_budget=cfg["node_budget"],
                                   sample_edges=cfg["sample_edges"], seed=seeds["properties"])
            pb = verify_property_B(Gchi, H, s, node_budget=cfg["node_budget"],
                                   sample_edges=cfg["sample_edges"], seed=seeds["properties"])
        results["property_A"], results["property_B"] = pa.to_dict(), pb.to_dict()
        violation |= not (pa.ok and pb.ok)

    with t("trials"):
        nb = cfg["node_budget"]
        with ThreadPoolExecutor(max_workers=cfg["threads"]) as pool:
            trials = list(pool.map(lambda sd: _x_trial(H, Hg, pp, s, q, sd, nb), seeds["X"]))
    n = len(trials)
    results["trials"] = {
        "count": n,
        "bad_frequency": sum(r["bad"] for r in trials) / n if n else None,
        "ks_frequency": sum(r["ks_in_X"] for r in trials) / n if n else None,
        "inconsistencies": sum(not r["consistent"] for r in trials),
        "b_bound_holds": sum(r["b_bound"]["holds"] for r in trials),
    }
    violation |= results["trials"]["inconsistencies"] > 0
    rows = [{"trial": i, **{k: v for k, v in r.items() if k not in ("instance", "witness", "b_bound")},
             "sum_xp": r["instance"]["sum_xp"], "heavy_points": r["instance"]["heavy_points"]}
            for i, r in enumerate(trials)]
    results["trial_details"] = trials
    report = make_report(cfg, results, rows=rows, timing=t.marks, seeds=seeds)
    return report, EXIT_VIOLATION if violation else EXIT_OK


# -- bounds -------------------------------------------------------------------

def final_grid(s_values, a_of_s=lambda s: 1024 * s) -> list[tuple[int, int]]:
    """For each s: the smallest valid prime power and three larger powers of two."""
    grid = []
    for s in s_values:
        q0 = bd.smallest_prime_power_at_least_alogq(a_of_s(s))
        k0 = q0.bit_length()
        grid.append((s, q0))
        grid += [(s, 2 ** (k0 + d)) for d in (0, 10, 30)]
    return grid


def cmd_bounds(cfg: dict):
    t = _Timer()
    sel = {k: cfg[k] for k in ("lll", "appendix", "final", "janson", "chernoff")}
    if not any(sel.values()):
        sel = {k: True for k in sel}
    results, rows, ok = {}, [], True
    s_values = cfg["s"]
    if any(s < 3 for s in s_values):
        raise UsageError("s must be at least 3")

    if sel["lll"]:
        with t("lll"):
            out = []
            for s in s_values:
                a = cfg["a"] if cfg["a"] is not None else 1024 * s
                qs = cfg["q"] or [bd.smallest_prime_power_at_least_alogq(a)]
                for q in qs:
                    r = bd.lll_check(s, q, a)
                    out.append(r.to_dict())
                    rows.append({"check": "lll", "s": s, "q": q, "a": a, **{f"margin_{k}": v for k, v in r.margins.items()},
                                 "ok": r.ok})
                    ok &= r.ok
            results["lll"] = out
    if sel["appendix"]:
        with t("appendix"):
            out = []
            for s in s_values:
                n = cfg["n"] if cfg["n"] is not None else 2 ** (40 * s)
                _, rep = bd.appendix_ratio(s, n)
                mu_min, target, holds = bd.janson_mu_lower(s, n)
                rep["mu_lower"] = {"log_mu_min": mu_min.log_mag, "log_target": target.log_mag, "holds": holds}
                out.append(rep)
                rows.append({"check": "appendix", "s": s, "log_n": rep["log_n"], "ratio": rep["ratio"],
                             "terminal_bound": rep["terminal_bound"], "ok": rep["ratio_lt_1"]})
                ok &= rep["ratio_lt_1"]
            results["appendix"] = out
    if sel["final"]:
        with t("final"):
            grid = [(s, q) for s in s_values for q in cfg["q"]] if cfg["q"] else final_grid(s_values)
            out = [bd.final_bound_check(s, q) for s, q in grid]
            for r in out:
                rows.append({"check": "final", "s": r["s"], "q": r["q"], "margin": r["margin"], "ok": r["holds"]})
                ok &= r["holds"]
            bert = {str(n): bd.bertrand_prime(n) for n in (10 ** 2, 10 ** 6, 10 ** 10)}
            results["final"] = {"grid": out, "bertrand": bert}
            ok &= all(v is not None for v in bert.values())
    if sel["janson"]:
        with t("janson"):
            out = []
            for s in s_values:
                n = cfg["n"] if cfg["n"] is not None else 2 ** (40 * s)
                fb = bd.janson_ksfree_bound(s, n)
                out.append({"s": s, "log_bound": fb.value.log_mag, **fb.flags, **fb.details})
            results["janson"] = out
    if sel["chernoff"]:
        with t("chernoff"):
            results["chernoff"] = [
                {"mean": 16, "eps": 1.0, "side": side,
                 "log_bound": bd.chernoff_tail_bound(16, 1.0, side).log_mag}
                for side in ("upper", "lower")]
    return make_report(cfg, results, rows=rows, timing=t.marks), EXIT_OK if ok else EXIT_VIOLATION


# -- oracle -------------------------------------------------------------------

def cmd_oracle(cfg: dict):
    t = _Timer()
    sel_f, sel_j = cfg["f"], cfg["janson"]
    if not (sel_f or sel_j):
        sel_f = sel_j = True
    results, rows = {}, []
    if sel_f:
        with t("f"):
            table = []
            for n in cfg["n"]:
                for s in cfg["s"]:
                    r = brute_force_f(n, s, allow_long=cfg["long"])
                    row = {"n": n, "s": s, "f": r.value, "graphs_checked": r.graphs_checked,
                           "witness_edges": [list(e) for e in r.witness.edges]}
                    table.append(row)
                    rows.append({k: v for k, v in row.items() if k != "witness_edges"})
            results["f"] = table
    if sel_j:
        with t("janson"):
            sizes, rho = cfg["sizes"], cfg["rho"]
            mu, delta = brute_expected_ks(sizes, rho), brute_delta(sizes, rho)
            results["janson"] = {
                "sizes": sizes, "rho": rho, "mu": mu, "delta": delta,
                "mu_formula": float(bd.janson_mu(sizes, rho)),
                "delta_formula": float(bd.janson_delta(sizes, rho)),
            }
    return make_report(cfg, results, rows=rows or None, timing=t.marks), EXIT_OK


COMMANDS = {"geometry": cmd_geometry, "pipeline": cmd_pipeline, "bounds": cmd_bounds, "oracle": cmd_oracle}


def run(argv=None):
    """Parse, run and return ``(report or None, exit_code)`` without writing output."""
    try:
        cfg = resolve_config(argv)
        return COMMANDS[cfg["command"]](cfg) + (cfg,)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return None, EXIT_USAGE, None
    except (NotPrimePower, UnsupportedFieldSize, TooLarge, ValueError) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return None, EXIT_USAGE, None
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return None, EXIT_BUDGET, None


def main(argv=None) -> int:
    report, code, cfg = run(argv)
    if report is not None:
        try:
            emit(report, cfg["out"])
        except UsageError as exc:
            print(f"usage error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
