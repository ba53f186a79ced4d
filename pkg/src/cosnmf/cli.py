"""Command-line front end: ``cosnmf synth|solve|bench|prep-docs``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cosfgm import CosSelectParams, cos_fgm
from .docs import scale_by_cluster_size, select_top_words
from .errors import CosNMFError
from .factors import ahals_nmf, compute_factors, nnls_hals
from .fgm import FgmParams
from .metrics import (clustering_accuracy, hard_cluster, index_accuracy,
                      relative_approx_generic)
from .mmio import read_labels, read_mtx, write_labels, write_mtx
from .spa import spa_columns, spa_plus, spa_rows
from .synth import gen_cosep, load_sidecar, noise_grid, save_instance

METHODS = ("cos_fgm", "spa_plus", "spac", "spar", "ahals")
CSV_FIELDS = ("epsilon", "trial", "method", "accuracy", "rel_approx", "seconds", "error")
EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL = 0, 1, 2


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # configuration errors exit with 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


@dataclass
class ExperimentConfig:
    m: int = 100
    n: int = 100
    r1: int = 10
    r2: int = 3
    epsilons: list = field(default_factory=lambda: noise_grid().tolist())
    trials: int = 25
    seed: int = 0
    cos: CosSelectParams | None = None
    baselines: tuple = ()
    ahals_iters: int = 1000

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.epsilons or any(not e >= 0 for e in self.epsilons):
            raise ConfigError("epsilons must be a nonempty list of values >= 0")
        if not (1 <= self.r1 < self.m and 1 <= self.r2 < self.n):
            raise ConfigError("need 1 <= r1 < m and 1 <= r2 < n")
        bad = set(self.baselines) - set(METHODS[1:])
        if bad:
            raise ConfigError(f"unknown baselines {sorted(bad)}")
        if self.cos is None:
            self.cos = CosSelectParams(self.r1, self.r2)

    def trial_seed(self, eps_idx: int, trial: int) -> int:
        return self.seed + 1000 * eps_idx + trial


def run_method(method, M, r1, r2, cos_params=None, ahals_iters=1000, seed=0):
    """Run one method; returns ``(k1, k2, rel_approx, extra)``.

    ``k1`` or ``k2`` is ``None`` for methods that do not select that side.
    """
    if method == "cos_fgm":
        sel = cos_fgm(M, cos_params or CosSelectParams(r1, r2))
        f = compute_factors(M, sel.k1, sel.k2)
        extra = {"outer_iterations": sel.outer_iterations, "converged": sel.converged,
                 "factors": f}
        return sel.k1, sel.k2, 1.0 - f.rel_residual, extra
    if method == "spa_plus":
        k1, k2 = spa_plus(M, r1, r2)
        f = compute_factors(M, k1, k2)
        return k1, k2, 1.0 - f.rel_residual, {"factors": f}
    if method == "spac":
        k2 = spa_columns(M, r2)
        H = nnls_hals(M, M[:, k2])
        return None, k2, relative_approx_generic(M, M[:, k2] @ H), {}
    if method == "spar":
        k1 = spa_rows(M, r1)
        P = nnls_hals(M.T, M[k1, :].T).T
        return k1, None, relative_approx_generic(M, P @ M[k1, :]), {}
    if method == "ahals":
        W, H = ahals_nmf(M, min(r1, r2), max_iter=ahals_iters, seed=seed)
        return None, None, relative_approx_generic(M, W @ H), {}
    raise ConfigError(f"unknown method {method!r}")


def selection_accuracy(k1, k2, k1_star, k2_star):
    """Index accuracy over the sides a method actually selects."""
    if k1 is None and k2 is None:
        return None
    if k1 is None:
        return index_accuracy([], k2, [], k2_star)
    if k2 is None:
        return index_accuracy(k1, [], k1_star, [])
    return index_accuracy(k1, k2, k1_star, k2_star)


def _fmt(v):
    return "" if v is None else repr(float(v))


def _bench_trial(cfg: ExperimentConfig, eps_idx, eps, trial, methods, timing):
    seed = cfg.trial_seed(eps_idx, trial)
    rows = []
    try:
        inst = gen_cosep(cfg.m, cfg.n, cfg.r1, cfg.r2, eps, seed)
    except (CosNMFError, ArithmeticError, ValueError) as exc:
        return [dict(epsilon=eps, trial=trial, method=m, accuracy=None, rel_approx=None,
                     seconds=None, error=f"{type(exc).__name__}: {exc}") for m in methods]
    for method in methods:
        row = dict(epsilon=eps, trial=trial, method=method, accuracy=None,
                   rel_approx=None, seconds=None, error="")
        t0 = time.perf_counter()
        try:
            k1, k2, approx, _ = run_method(method, inst.M, cfg.r1, cfg.r2, cfg.cos,
                                           cfg.ahals_iters, seed)
            row["accuracy"] = selection_accuracy(k1, k2, inst.k1_star, inst.k2_star)
            row["rel_approx"] = approx
        except (CosNMFError, ArithmeticError, ValueError) as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        if timing:
            row["seconds"] = time.perf_counter() - t0
        rows.append(row)
    return rows


def bench_rows(cfg: ExperimentConfig, threads=1, timing=True):
    """All result rows, ordered by (epsilon index, trial, method)."""
    methods = ("cos_fgm",) + tuple(cfg.baselines)
    jobs = [(i, e, t) for i, e in enumerate(cfg.epsilons) for t in range(cfg.trials)]
    if threads <= 1:
        chunks = [_bench_trial(cfg, i, e, t, methods, timing) for i, e, t in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda j: _bench_trial(cfg, *j, methods, timing), jobs))
    return [row for chunk in chunks for row in chunk]


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([_fmt(r["epsilon"]), r["trial"], r["method"], _fmt(r["accuracy"]),
                    _fmt(r["rel_approx"]), _fmt(r["seconds"]), r["error"]])
    return buf.getvalue()


def summarize_csv(text: str) -> dict:
    """Per-(epsilon, method) means of the numeric CSV fields.

    Blank cells (errors, metrics a method does not define, disabled
    timing) are left out of the means.
    """
    groups = {}
    for rec in csv.DictReader(io.StringIO(text)):
        key = (rec["epsilon"], rec["method"])
        g = groups.setdefault(key, {"trials": 0, "errors": 0,
                                    "accuracy": [], "rel_approx": [], "seconds": []})
        g["trials"] += 1
        if rec["error"]:
            g["errors"] += 1
        for col in ("accuracy", "rel_approx", "seconds"):
            if rec[col] != "":
                g[col].append(float(rec[col]))
    out = []
    for (eps, method), g in groups.items():
        entry = {"epsilon": float(eps), "method": method,
                 "trials": g["trials"], "errors": g["errors"]}
        for col in ("accuracy", "rel_approx", "seconds"):
            vals = g[col]
            entry[f"mean_{col}"] = float(np.mean(vals)) if vals else None
        out.append(entry)
    return {"groups": out}


def _eps_list(grid: str):
    if grid == "paper":
        return noise_grid().tolist()
    try:
        return [float(tok) for tok in grid.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"bad --eps-grid {grid!r}") from None


def _threads(args) -> int:
    env = os.environ.get("COSEP_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"COSEP_THREADS must be an integer, got {env!r}") from None
    else:
        n = args.threads
    if n < 1:
        raise ConfigError("thread count must be >= 1")
    return n


def _cos_params(args, r1, r2) -> CosSelectParams:
    fgm = FgmParams(lam=args.lam, max_iter=args.fgm_iters)
    return CosSelectParams(r1, r2, delta=args.delta, outer_max_iter=args.outer_iters,
                           fgm=fgm, postprocess=args.postprocess)


def _config(args) -> ExperimentConfig:
    baselines = tuple(b for b in (args.baselines or "").split(",") if b)
    cfg = ExperimentConfig(m=args.m, n=args.n, r1=args.r1, r2=args.r2,
                           epsilons=_eps_list(args.eps_grid), trials=args.trials,
                           seed=args.seed, baselines=baselines,
                           ahals_iters=getattr(args, "ahals_iters", 1000))
    cfg.cos = _cos_params(args, cfg.r1, cfg.r2)
    return cfg


def cmd_synth(args) -> int:
    cfg = _config(args)
    for i, eps in enumerate(cfg.epsilons):
        for t in range(cfg.trials):
            inst = gen_cosep(cfg.m, cfg.n, cfg.r1, cfg.r2, eps, cfg.trial_seed(i, t))
            save_instance(inst, os.path.join(args.out_dir, f"epsilon_{i}", f"trial_{t}"))
    return EXIT_OK


def _labels_to_Q(labels, r):
    labels = np.asarray(labels, dtype=np.intp)
    if labels.size and (labels.min() < 0 or labels.max() >= r):
        raise ConfigError(f"labels must lie in [0, {r})")
    Q = np.zeros((labels.size, r))
    Q[np.arange(labels.size), labels] = 1.0
    return Q


def cmd_solve(args) -> int:
    M = read_mtx(args.matrix)
    side = load_sidecar(args.matrix)
    r1 = args.r1 if args.r1 is not None else (side or {}).get("r1")
    r2 = args.r2 if args.r2 is not None else (side or {}).get("r2")
    if r1 is None or r2 is None:
        raise ConfigError("--r1 and --r2 are required without a sidecar")
    t0 = time.perf_counter()
    k1, k2, approx, extra = run_method(args.method, M, r1, r2, _cos_params(args, r1, r2),
                                       args.ahals_iters, args.seed)
    result = {"method": args.method, "rel_approx": approx,
              "seconds": time.perf_counter() - t0}
    if k1 is not None:
        result["k1"] = k1.tolist()
    if k2 is not None:
        result["k2"] = k2.tolist()
    for key in ("outer_iterations", "converged"):
        if key in extra:
            result[key] = extra[key]
    if side is not None:
        acc = selection_accuracy(k1, k2, side["k1_star"], side["k2_star"])
        if acc is not None:
            result["accuracy"] = acc
    f = extra.get("factors")
    if f is not None:
        if args.row_labels:
            Q = _labels_to_Q(read_labels(args.row_labels), r1)
            result["row_clustering_accuracy"] = clustering_accuracy(hard_cluster(f.P1), Q)
        if args.col_labels:
            Q = _labels_to_Q(read_labels(args.col_labels), r2)
            result["col_clustering_accuracy"] = clustering_accuracy(hard_cluster(f.P2.T), Q)
        if args.factors_dir:
            os.makedirs(args.factors_dir, exist_ok=True)
            for name in ("P1", "S", "P2"):
                write_mtx(os.path.join(args.factors_dir, f"{name}.mtx"), getattr(f, name))
    text = json.dumps(result, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = _config(args)
    threads = _threads(args)
    rows = bench_rows(cfg, threads=threads, timing=not args.no_timing)
    text = rows_to_csv(rows)
    os.makedirs(args.out_dir, exist_ok=True)
    with open(os.path.join(args.out_dir, "results.csv"), "w", encoding="utf-8",
              newline="") as fh:
        fh.write(text)
    with open(os.path.join(args.out_dir, "summary.json"), "w", encoding="utf-8",
              newline="\n") as fh:
        json.dump(summarize_csv(text), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return EXIT_PARTIAL if any(r["error"] for r in rows) else EXIT_OK


def cmd_prep_docs(args) -> int:
    M0 = read_mtx(args.matrix)
    labels = read_labels(args.labels)
    corpus = select_top_words(M0, labels, args.k)
    M = corpus.M
    if args.doc_weights:
        w = np.loadtxt(args.doc_weights, ndmin=1)[corpus.doc_index]
        M = scale_by_cluster_size(M, w, axis=0)
    if args.word_weights:
        w = np.loadtxt(args.word_weights, ndmin=1)[corpus.word_index]
        M = scale_by_cluster_size(M, w, axis=1)
    os.makedirs(args.out_dir, exist_ok=True)
    write_mtx(os.path.join(args.out_dir, "corpus.mtx"), M)
    write_labels(os.path.join(args.out_dir, "doc_labels.txt"), corpus.doc_labels)
    write_labels(os.path.join(args.out_dir, "word_labels.txt"), corpus.word_labels)
    return EXIT_OK


def _add_solver_flags(p):
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="trace penalty (default: 1e-2 * sigma_max(M)^2 / n)")
    p.add_argument("--delta", type=float, default=1e-6, help="outer stopping tolerance")
    p.add_argument("--postprocess", choices=("diag", "spa"), default="diag")
    p.add_argument("--fgm-iters", type=int, default=1000)
    p.add_argument("--outer-iters", type=int, default=50)
    p.add_argument("--ahals-iters", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)


def _add_instance_flags(p):
    p.add_argument("--m", type=int, default=100)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--r1", type=int, default=10)
    p.add_argument("--r2", type=int, default=3)
    p.add_argument("--eps-grid", default="paper",
                   help="'paper' (20 log-spaced levels in [1e-7, 1e-1]) or a comma list")
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--out-dir", required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cosnmf", description="Co-separable NMF tools")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="write planted instances")
    _add_instance_flags(p)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_synth, baselines="")

    p = sub.add_parser("solve", help="run one method on a MatrixMarket file")
    p.add_argument("matrix")
    p.add_argument("--method", choices=METHODS, default="cos_fgm")
    p.add_argument("--r1", type=int)
    p.add_argument("--r2", type=int)
    p.add_argument("--row-labels", help="ground-truth row labels for clustering accuracy")
    p.add_argument("--col-labels", help="ground-truth column labels for clustering accuracy")
    p.add_argument("--factors-dir", help="write P1, S, P2 here")
    p.add_argument("--out", help="result JSON path (default: stdout)")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="noise sweep with CSV and JSON summary")
    _add_instance_flags(p)
    _add_solver_flags(p)
    p.add_argument("--baselines", default="",
                   help="comma list from spa_plus,spac,spar,ahals")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-timing", action="store_true",
                   help="leave the seconds column blank (reproducible output)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("prep-docs", help="trim a document-word matrix and label words")
    p.add_argument("--matrix", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--k", type=int, default=1000)
    p.add_argument("--doc-weights", help="cluster sizes for the rows")
    p.add_argument("--word-weights", help="cluster sizes for the columns")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_prep_docs)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"cosnmf: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cosnmf: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CosNMFError as exc:
        print(f"cosnmf: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
