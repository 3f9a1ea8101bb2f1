"""Seed-ensemble campaigns with CSV and JSON outputs.

A campaign samples one graph per seed, runs the selected tasks on it and
writes one CSV row per seed (sorted by seed), one profile or report JSON
per seed where applicable, and a ``summary.json``.  Everything except the
``runtime_*`` columns is a pure function of the configuration.
"""

import csv
import hashlib
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from ._validation import check_int, check_probability
from .checks import PASS, SKIPPED, STAT_PASS, check_small_k_bound, lemma2_status
from .exceptions import DomainError
from .generators import GnpdParams, GnpParams, default_degree, gen_gnp, gen_gnpd
from .rng import derive_seed
from .search import DEFAULT_BUDGET, SearchParams, exact_delta_2, exact_profile

__all__ = ["TASKS", "CHECK_COLUMNS", "CSV_COLUMNS", "CampaignConfig", "run_seed", "run_campaign", "read_config_file"]

TASKS = ("profile", "delta2", "verify", "small-k-bound")
CHECK_COLUMNS = ("avg_degree", "common_neighbors", "small_set_density", "small_k_bound")
RUNTIME_COLUMNS = ("runtime_gen", "runtime_profile", "runtime_delta2", "runtime_verify", "runtime_small_k_bound")
CSV_COLUMNS = (
    ("config_hash", "seed", "model", "n", "p", "d", "m",
     "delta2_num", "delta2_den", "overall_delta_num", "overall_delta_den", "certified")
    + CHECK_COLUMNS
    + ("error",)
    + RUNTIME_COLUMNS
)


@dataclass(frozen=True)
class CampaignConfig:
    model: str = "gnp"
    n: int = 8
    p: float = 0.5
    d: int = None
    seeds: tuple = None
    seed_count: int = 10
    master_seed: int = 0
    tasks: tuple = ("profile",)
    budget: int = DEFAULT_BUDGET
    search: SearchParams = field(default_factory=SearchParams)
    small_k: int = 10
    small_k_samples: int = 10_000
    density_budget: int = 10**6
    out_dir: str = "campaign-out"

    def __post_init__(self):
        if self.model not in ("gnp", "gnpd"):
            raise DomainError(f"model must be 'gnp' or 'gnpd', got {self.model!r}")
        check_int(self.n, "n", minimum=2)
        check_probability(self.p)
        if self.d is not None:
            check_int(self.d, "d", minimum=1, maximum=self.n - 1)
        elif self.model == "gnpd" and default_degree(self.n, self.p) < 1:
            raise DomainError("ceil(p (n - 1)) = 0; set d explicitly")
        tasks = tuple(self.tasks)
        if not tasks:
            raise DomainError("a campaign needs at least one task")
        for t in tasks:
            if t not in TASKS:
                raise DomainError(f"unknown task {t!r}; choose from {', '.join(TASKS)}")
        object.__setattr__(self, "tasks", tasks)
        if self.seeds is not None:
            seeds = tuple(check_int(s, "seed", minimum=0) for s in self.seeds)
            if not seeds:
                raise DomainError("seed list is empty")
            if len(set(seeds)) != len(seeds):
                raise DomainError("seed list has duplicates")
            object.__setattr__(self, "seeds", seeds)
        else:
            check_int(self.seed_count, "seed_count", minimum=1)
            check_int(self.master_seed, "master_seed", minimum=0)
        check_int(self.budget, "budget", minimum=0)
        check_int(self.small_k, "small_k", minimum=2)
        if "small-k-bound" in tasks and self.small_k > self.n:
            raise DomainError(f"small_k must be <= n = {self.n}, got {self.small_k}")
        check_int(self.small_k_samples, "small_k_samples", minimum=1)
        check_int(self.density_budget, "density_budget", minimum=1)

    @property
    def degree(self):
        """``d`` as given, else ``ceil(p (n - 1))``."""
        return self.d if self.d is not None else default_degree(self.n, self.p)

    def seed_list(self):
        if self.seeds is not None:
            return list(self.seeds)
        return [derive_seed(self.master_seed, "campaign", i) for i in range(self.seed_count)]

    def to_dict(self):
        doc = asdict(self)
        doc["seeds"] = list(self.seeds) if self.seeds is not None else None
        doc["tasks"] = list(self.tasks)
        doc.pop("out_dir")
        return doc

    @property
    def hash(self):
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


def read_config_file(path):
    """Flat ``key=value`` lines; blank lines and ``#`` comments are ignored."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"{path}: line {lineno}: expected key=value")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _sample(config, seed):
    if config.model == "gnp":
        return gen_gnp(GnpParams(config.n, config.p, seed))
    return gen_gnpd(GnpdParams(config.n, config.p, config.degree, seed))


def run_seed(config, seed):
    """Run every task for one seed; returns ``(row, documents)``.

    ``documents`` maps relative output paths to JSON text.  Task failures
    are caught and recorded in the row's ``error`` column.
    """
    row = dict.fromkeys(CSV_COLUMNS, "")
    row.update(config_hash=config.hash, seed=seed, model=config.model, n=config.n, p=repr(config.p),
               d=config.degree if config.model == "gnpd" else (config.d or ""))
    docs = {}
    t0 = time.perf_counter()
    try:
        G = _sample(config, seed)
        row["runtime_gen"] = time.perf_counter() - t0
        row["m"] = G.m
        lemma2 = None
        if "profile" in config.tasks:
            t0 = time.perf_counter()
            prof = exact_profile(G, config.budget, config.search)
            row["runtime_profile"] = time.perf_counter() - t0
            overall = prof.overall
            row["overall_delta_num"] = overall.numerator
            row["overall_delta_den"] = overall.denominator
            row["certified"] = str(prof.certified).lower()
            if 2 in prof.entries and prof.entries[2].exact:
                row["delta2_num"] = prof.entries[2].delta.numerator
                row["delta2_den"] = prof.entries[2].delta.denominator
            docs[f"profiles/seed-{seed}.json"] = prof.to_json()
        if "delta2" in config.tasks:
            t0 = time.perf_counter()
            entry = exact_delta_2(G)
            row["runtime_delta2"] = time.perf_counter() - t0
            row["delta2_num"] = entry.delta.numerator
            row["delta2_den"] = entry.delta.denominator
        reports = []
        if "verify" in config.tasks:
            t0 = time.perf_counter()
            lemma2 = lemma2_status(G, config.degree, config.p, config.density_budget)
            row["runtime_verify"] = time.perf_counter() - t0
            for name, rep in lemma2.items():
                row[name] = rep.verdict
                reports.append(rep.to_dict())
        if "small-k-bound" in config.tasks:
            t0 = time.perf_counter()
            rep = check_small_k_bound(G, config.small_k, config.degree, config.small_k_samples, seed,
                                      config.search, lemma2, config.p)
            row["runtime_small_k_bound"] = time.perf_counter() - t0
            row["small_k_bound"] = rep.verdict
            reports.append(rep.to_dict())
        if reports:
            docs[f"reports/seed-{seed}.json"] = json.dumps(reports, indent=2) + "\n"
    except (ValueError, RuntimeError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row, docs


def _run_seed_job(args):
    return run_seed(*args)


def _rational_stats(values):
    values = sorted(values)
    if not values:
        return {"count": 0, "min": None, "median": None}
    mid = len(values) // 2
    median = values[mid] if len(values) % 2 else (values[mid - 1] + values[mid]) / 2
    return {
        "count": len(values),
        "min": {"num": values[0].numerator, "den": values[0].denominator},
        "median": {"num": median.numerator, "den": median.denominator},
    }


def summarize(config, rows):
    rates = {}
    for name in CHECK_COLUMNS:
        verdicts = [r[name] for r in rows if r[name] not in ("", SKIPPED)]
        if not verdicts:
            continue
        passed = sum(v in (PASS, STAT_PASS) for v in verdicts)
        rates[name] = {"passed": passed, "total": len(verdicts), "rate": passed / len(verdicts)}

    def fractions(prefix):
        return [Fraction(int(r[f"{prefix}_num"]), int(r[f"{prefix}_den"]))
                for r in rows if r[f"{prefix}_num"] != ""]

    return {
        "config": config.to_dict(),
        "config_hash": config.hash,
        "seeds": len(config.seed_list()),
        "rows": len(rows),
        "errors": sum(1 for r in rows if r["error"]),
        "pass_rates": rates,
        "delta2": _rational_stats(fractions("delta2")),
        "overall_delta": _rational_stats(fractions("overall_delta")),
        "certified": sum(1 for r in rows if r["certified"] == "true"),
    }


def format_csv(rows, timings=True):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        row = dict(row)
        for col in RUNTIME_COLUMNS:
            if not timings or row[col] == "":
                row[col] = ""
            else:
                row[col] = f"{row[col]:.6f}"
        writer.writerow(row)
    return buf.getvalue()


def run_campaign(config, jobs=1, timings=True, progress=True):
    """Run ``config`` and write ``results.csv``, ``summary.json`` and per-seed JSON.

    Returns ``(rows, summary)``.  Seeds run in up to ``jobs`` processes; the
    output is assembled after sorting by seed, so it does not depend on the
    schedule.
    """
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    seeds = config.seed_list()
    results = []
    if jobs > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for i, res in enumerate(pool.map(_run_seed_job, [(config, s) for s in seeds]), 1):
                results.append(res)
                if progress:
                    print(f"[{i}/{len(seeds)}] seed {res[0]['seed']} done", file=sys.stderr)
    else:
        for i, s in enumerate(seeds, 1):
            results.append(run_seed(config, s))
            if progress:
                print(f"[{i}/{len(seeds)}] seed {s} done", file=sys.stderr)
    results.sort(key=lambda item: item[0]["seed"])
    rows = [row for row, _ in results]
    for _, docs in results:
        for rel, text in sorted(docs.items()):
            path = out / rel
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    with open(out / "results.csv", "w", encoding="utf-8", newline="") as fh:
        fh.write(format_csv(rows, timings))
    summary = summarize(config, rows)
    with open(out / "summary.json", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(summary, indent=2) + "\n")
    return rows, summary
