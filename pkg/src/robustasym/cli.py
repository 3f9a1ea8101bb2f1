"""Command-line front end: ``robustasym <command> ...``.

Machine-readable results go to standard output (JSON), progress and
diagnostics to standard error.  Exit codes: 0 success, 1 a check failed,
2 usage error, 3 I/O or file-format error, 4 domain error.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import checks
from .campaign import TASKS, CampaignConfig, read_config_file, run_campaign
from .exceptions import BudgetExceededError, EdgeListFormatError
from .generators import GnpdParams, GnpParams, default_degree, gen_gnp, gen_gnpd
from .graph import degree_stats, dist, dist_perm, read_edge_list, write_edge_list
from .permutations import Permutation
from .search import (
    DEFAULT_BUDGET,
    SearchParams,
    exact_profile,
    is_delta_asymmetric,
    transposition_stats,
    exact_delta_2,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO, EXIT_DOMAIN = 0, 1, 2, 3, 4

VERIFY_CHECKS = (
    "avg-degree",
    "common-neighbors",
    "density",
    "small-k-bound",
    "covered-edges",
    "lemma1",
    "lemma1-sweep",
    "edge-probability",
)
GRAPH_CHECKS = {"avg-degree", "common-neighbors", "density", "small-k-bound"}


def _rat(q):
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def _emit(doc, out=None):
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pairs(text):
    """``"0-1,2-3"`` -> [(0, 1), (2, 3)]; empty string -> []."""
    out = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        u, v = item.split("-")
        out.append((int(u), int(v)))
    return out


def _search_params(args):
    return SearchParams(
        restarts=args.restarts,
        steps=args.steps,
        cooling=args.cooling,
        probe_steps=args.probe_steps,
        seed=args.search_seed,
    )


def _add_search_flags(p):
    d = SearchParams()
    g = p.add_argument_group("heuristic search")
    g.add_argument("--restarts", type=int, default=d.restarts)
    g.add_argument("--steps", type=int, default=d.steps)
    g.add_argument("--cooling", type=float, default=d.cooling)
    g.add_argument("--probe-steps", type=int, default=d.probe_steps)
    g.add_argument("--search-seed", type=int, default=d.seed)


# -- commands -------------------------------------------------------------------


def cmd_gen(args):
    if args.model == "gnp":
        G = gen_gnp(GnpParams(args.n, args.p, args.seed))
    else:
        d = args.d if args.d is not None else default_degree(args.n, args.p)
        G = gen_gnpd(GnpdParams(args.n, args.p, d, args.seed))
    write_edge_list(G, args.out, aux=args.aux)
    stats = degree_stats(G)
    _emit({
        "n": G.n,
        "m": G.m,
        "min_degree": stats.min,
        "average_degree": _rat(stats.average),
        "max_degree": stats.max,
        "auxiliary_edges": len(G.aux_edges),
    })
    return EXIT_OK


def cmd_dist(args):
    G = read_edge_list(args.graph)
    if args.perm is not None:
        pi = Permutation.parse(args.perm, G.n)
        _emit({"dist": dist_perm(G, pi), "permutation": str(pi), "k": pi.k})
    elif args.other is not None:
        _emit({"dist": _rat(dist(G, read_edge_list(args.other)))})
    else:
        raise argparse.ArgumentTypeError("give a second graph file or --perm")
    return EXIT_OK


def cmd_profile(args):
    G = read_edge_list(args.graph)
    ks = None
    if args.ks:
        ks = [int(k) for k in args.ks.split(",")]
    prof = exact_profile(G, args.budget, _search_params(args), ks)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(prof.to_json())
    overall = prof.overall
    doc = {
        "graph_hash": prof.graph_hash,
        "overall_delta": _rat(overall),
        "certified": prof.certified,
        "heuristic_ks": [k for k, e in sorted(prof.entries.items()) if not e.exact],
    }
    if args.delta is not None:
        delta = Fraction(args.delta)
        doc["delta"] = _rat(delta)
        doc["verdict"] = is_delta_asymmetric(G, delta, prof).value
    if not args.out:
        doc["profile"] = prof.to_dict()
    _emit(doc)
    return EXIT_OK


def cmd_delta2(args):
    G = read_edge_list(args.graph)
    entry = exact_delta_2(G)
    stats = transposition_stats(G)
    _emit({
        "delta2": _rat(entry.delta),
        "dist": entry.dist,
        "witness": str(entry.witness),
        "mean_normalized": _rat(stats.mean_normalized(G.n, G.m)),
    })
    return EXIT_OK


def _run_check(name, args, G):
    if name == "avg-degree":
        return checks.check_avg_degree(G, _need(args, "p", name), args.d, args.slack)
    if name == "common-neighbors":
        return checks.check_common_neighbors(G)
    if name == "density":
        limit = args.limit
        if limit is None:
            limit = G.n // (_need(args, "d", name) ** 2)
        return checks.check_small_set_density(G, limit, args.node_budget)
    if name == "small-k-bound":
        return checks.check_small_k_bound(G, _need(args, "k", name), _need(args, "d", name), args.samples,
                                          args.seed, _search_params(args), p=args.p)
    if name == "covered-edges":
        return checks.mc_covered_edges(_need(args, "n", name), _need(args, "p", name), _need(args, "k", name),
                                       args.trials, args.seed, args.sigmas)
    if name == "lemma1":
        n, k = _need(args, "n", name), _need(args, "k", name)
        exp = checks.DistanceExperiment(n, k, _need(args, "m_s", name), args.trials)
        pi = Permutation.parse(args.perm, n) if args.perm else Permutation.from_cycles(n, [list(range(k))])
        return checks.mc_lemma1_expectation(exp, pi, args.seed, args.sigmas)
    if name == "lemma1-sweep":
        return checks.lemma1_sweep(args.max_pairs)
    if name == "edge-probability":
        n, p = _need(args, "n", name), _need(args, "p", name)
        d = args.d if args.d is not None else default_degree(n, p)
        params = GnpdParams(n, p, d, args.seed)
        F = _pairs(args.F)
        e = _pairs(_need(args, "e", name))
        if len(e) != 1:
            raise argparse.ArgumentTypeError("--e takes exactly one pair")
        return checks.mc_edge_probability(params, F, e[0], args.min_conditional, args.max_trials,
                                          args.seed, args.sigmas)
    raise AssertionError(name)


class _MissingFlag(Exception):
    pass


def _need(args, attr, check):
    value = getattr(args, attr)
    if value is None:
        raise _MissingFlag(f"check {check} needs --{attr.replace('_', '-')}")
    return value


def cmd_verify(args):
    selected = args.check or []
    if args.lemma1_sweep and "lemma1-sweep" not in selected:
        selected.append("lemma1-sweep")
    if not selected:
        raise _MissingFlag("select at least one --check")
    G = None
    if GRAPH_CHECKS.intersection(selected):
        if not args.graph:
            raise _MissingFlag("graph checks need --graph")
        G = read_edge_list(args.graph)
    reports = [_run_check(name, args, G) for name in selected]
    counts = {"passed": 0, "failed": 0, "skipped": 0, "inconclusive": 0}
    warnings = []
    for r in reports:
        if r.verdict in (checks.PASS, checks.STAT_PASS):
            counts["passed"] += 1
        elif r.verdict == checks.SKIPPED:
            counts["skipped"] += 1
        elif r.verdict == checks.INCONCLUSIVE:
            counts["inconclusive"] += 1
            warnings.append(f"{r.check}: inconclusive")
        else:
            counts["failed"] += 1
    summary = dict(checks=len(reports), **counts, ok=counts["failed"] == 0, warnings=warnings)
    _emit({"summary": summary, "reports": [r.to_dict() for r in reports]}, args.out)
    if args.out:
        _emit({"summary": summary})
    return EXIT_OK if summary["ok"] else EXIT_FAIL


_CONFIG_TYPES = {
    "model": str, "n": int, "p": float, "d": int, "seed_count": int, "master_seed": int,
    "budget": int, "small_k": int, "small_k_samples": int, "density_budget": int, "out_dir": str,
    "restarts": int, "steps": int, "cooling": float, "probe_steps": int, "search_seed": int,
    "jobs": int,
}


def _campaign_settings(args):
    settings = {}
    if args.config:
        for key, raw in read_config_file(args.config).items():
            if key == "seeds":
                settings[key] = tuple(int(s) for s in raw.split(",") if s.strip())
            elif key == "tasks":
                settings[key] = tuple(t.strip() for t in raw.split(",") if t.strip())
            elif key in _CONFIG_TYPES:
                settings[key] = _CONFIG_TYPES[key](raw)
            else:
                raise _MissingFlag(f"unknown config key {key!r}")
    for key in _CONFIG_TYPES:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if args.seeds is not None:
        settings["seeds"] = tuple(int(s) for s in args.seeds.split(",") if s.strip())
    if args.tasks is not None:
        settings["tasks"] = tuple(t.strip() for t in args.tasks.split(",") if t.strip())
    return settings


def cmd_campaign(args):
    settings = _campaign_settings(args)
    jobs = settings.pop("jobs", 1)
    defaults = SearchParams()
    search = SearchParams(
        restarts=settings.pop("restarts", defaults.restarts),
        steps=settings.pop("steps", defaults.steps),
        cooling=settings.pop("cooling", defaults.cooling),
        probe_steps=settings.pop("probe_steps", defaults.probe_steps),
        seed=settings.pop("search_seed", defaults.seed),
    )
    config = CampaignConfig(search=search, **settings)
    rows, summary = run_campaign(config, jobs=jobs, timings=not args.no_timings, progress=not args.quiet)
    _emit(summary)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="robustasym", description="Robust graph asymmetry toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a random graph to an edge-list file")
    p.add_argument("--model", choices=("gnp", "gnpd"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--d", type=int, help="minimum degree for gnpd (default ceil(p (n - 1)))")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--aux", action="store_true", help="append the auxiliary-edge block")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("dist", help="distance between two graphs or under a permutation")
    p.add_argument("graph")
    p.add_argument("other", nargs="?")
    p.add_argument("--perm", help="permutation in cycle notation, e.g. '(0 1)(2 3 4)'")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("profile", help="robustness profile delta(k)")
    p.add_argument("graph")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="exact enumeration limit per k")
    p.add_argument("--ks", help="comma-separated support sizes (default 2..n)")
    p.add_argument("--delta", help="also report whether the graph is delta-asymmetric")
    p.add_argument("--out", help="write the profile JSON here")
    _add_search_flags(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("delta2", help="exact delta(2) via the transposition closed form")
    p.add_argument("graph")
    p.set_defaults(func=cmd_delta2)

    p = sub.add_parser("verify", help="structural and Monte Carlo checks")
    p.add_argument("--graph")
    p.add_argument("--check", action="append", choices=VERIFY_CHECKS)
    p.add_argument("--lemma1-sweep", action="store_true", help="shorthand for --check lemma1-sweep")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--m-s", type=int)
    p.add_argument("--perm")
    p.add_argument("--F", default="", help="conditioning edges, e.g. '0-1,2-3'")
    p.add_argument("--e", help="target edge, e.g. '0-2'")
    p.add_argument("--limit", type=int, help="density size limit (default n // d^2)")
    p.add_argument("--slack", type=float, default=5.0)
    p.add_argument("--sigmas", type=float, default=4.0)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--min-conditional", type=int, default=1000)
    p.add_argument("--max-trials", type=int, default=200_000)
    p.add_argument("--max-pairs", type=int, default=12)
    p.add_argument("--node-budget", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    _add_search_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("campaign", help="run a seed ensemble")
    p.add_argument("--config", help="flat key=value file; flags take precedence")
    p.add_argument("--model", choices=("gnp", "gnpd"))
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--seeds", help="comma-separated seed list")
    p.add_argument("--seed-count", type=int)
    p.add_argument("--master-seed", type=int)
    p.add_argument("--tasks", help=f"comma-separated subset of {','.join(TASKS)}")
    p.add_argument("--budget", type=int)
    p.add_argument("--small-k", type=int)
    p.add_argument("--small-k-samples", type=int)
    p.add_argument("--density-budget", type=int)
    p.add_argument("--out-dir")
    p.add_argument("--jobs", type=int)
    p.add_argument("--no-timings", action="store_true", help="leave the runtime columns empty")
    p.add_argument("--quiet", action="store_true")
    g = p.add_argument_group("heuristic search")
    for flag, typ in (("--restarts", int), ("--steps", int), ("--cooling", float),
                      ("--probe-steps", int), ("--search-seed", int)):
        g.add_argument(flag, type=typ)
    p.set_defaults(func=cmd_campaign)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (_MissingFlag, argparse.ArgumentTypeError) as exc:
        print(f"robustasym {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, EdgeListFormatError) as exc:
        print(f"robustasym {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, BudgetExceededError) as exc:
        print(f"robustasym {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
