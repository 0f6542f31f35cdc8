"""Command-line entry point: ``praa <subcommand>``.

Settings come from defaults, then an optional ``key = value`` config file,
then flags. Exit status is 0 on success, 1 on data or runtime errors and 2 on
usage errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import __version__
from .adtree import DEFAULT_ITERATIONS, extract_rules, serialize, train_adtree
from .dataset import DataError, SchemaError, generate_synthetic, load_csv, load_schema, write_csv, write_schema
from .eval_stats.bench import bench_scalability
from .eval_stats.pipeline import PipelineConfig, impute, label_order, run_praa_pipeline, select_features
from .eval_stats.wilcoxon import wilcoxon_signed_rank
from .pso_select import SwarmConfig

log = logging.getLogger("praa")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    data: str | None = None
    schema: str | None = None
    header: bool = False
    seed: int = 0
    folds: int = 10
    fitness_folds: int = 10
    particles: int = 50
    iterations: int = 100
    c1: float = 2.0
    c2: float = 2.0
    vmax: float = 4.0
    adt_iterations: int = DEFAULT_ITERATIONS
    output: str = "."
    nested: bool = False
    cross_real_sets: str = "paper"
    positive_label: str | None = None
    method: str = "praa"
    k: int = 5
    threads: int = 0

    def swarm(self) -> SwarmConfig:
        return SwarmConfig(self.particles, self.iterations, self.c1, self.c2, self.vmax, self.seed)

    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(
            folds=self.folds,
            fitness_folds=self.fitness_folds,
            adt_iterations=self.adt_iterations,
            swarm=self.swarm(),
            seed=self.seed,
            nested=self.nested,
            cross_real_sets=self.cross_real_sets,
            positive_label=self.positive_label,
            impute_method=self.method,
            knn_k=self.k,
        )


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _coerce(name, text, kind):
    if kind == "bool":
        low = text.lower()
        if low in _TRUE | _FALSE:
            return low in _TRUE
        raise UsageError(f"config key {name!r}: expected a boolean, got {text!r}")
    try:
        if kind == "int":
            return int(text)
        if kind == "float":
            return float(text)
    except ValueError:
        raise UsageError(f"config key {name!r}: expected {kind}, got {text!r}") from None
    return text


def read_config(path) -> dict:
    """Parse flat ``key = value`` lines; relative data/schema/output paths resolve against the file."""
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"config file not found: {path}")
    types = {f.name: str(f.type) for f in fields(RunConfig)}
    out = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (t.strip() for t in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in types:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        kind = types[key]
        kind = "bool" if "bool" in kind else "int" if "int" in kind else "float" if "float" in kind else "str"
        value = _coerce(key, value, kind)
        if key in ("data", "schema", "output") and not os.path.isabs(value):
            value = str(path.parent / value)
        out[key] = value
    return out


def resolve(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        for key, value in read_config(args.config).items():
            setattr(cfg, key, value)
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(cfg, f.name, value)
    return cfg


def _require_inputs(cfg: RunConfig):
    if not cfg.data or not cfg.schema:
        raise UsageError("both --data and --schema are required (flags or config file)")
    for p in (cfg.data, cfg.schema):
        if not Path(p).is_file():
            raise UsageError(f"input file not found: {p}")


def _load(cfg: RunConfig):
    _require_inputs(cfg)
    return load_csv(cfg.data, load_schema(cfg.schema), header=cfg.header)


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_history(history, path):
    with open(path, "w") as fh:
        fh.write("iteration,global_best_fitness\n")
        for it, f in enumerate(history, start=1):
            fh.write(f"{it},{f!r}\n")


def _write_features(names, path):
    Path(path).write_text("".join(f"{n}\n" for n in names))


def cmd_generate(args) -> int:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    ds = generate_synthetic(args.rows, args.cols, args.missing, args.seed, separable=args.separable)
    write_csv(ds, out / "data.csv")
    write_schema(ds.schema, out / "schema.txt")
    print(f"wrote {out / 'data.csv'} ({ds.m} rows, {ds.missing_count()} missing) and {out / 'schema.txt'}")
    return 0


def cmd_impute(args) -> int:
    cfg = resolve(args)
    ds = _load(cfg)
    out = _outdir(cfg)
    imputed, report = impute(ds, cfg.pipeline())
    write_csv(imputed, out / "imputed.csv")
    report.write(out / "imputation_report.txt")
    print(f"filled {report.total} cells ({report.method}); wrote {out / 'imputed.csv'}")
    return 0


def cmd_select(args) -> int:
    cfg = resolve(args)
    if getattr(args, "folds", None) is not None and getattr(args, "fitness_folds", None) is None:
        cfg.fitness_folds = args.folds
    ds = _load(cfg)
    out = _outdir(cfg)
    pc = cfg.pipeline()
    imputed, _ = impute(ds, pc)
    result = select_features(imputed, pc)
    _write_features(result.selected, out / "features.txt")
    _write_history(result.history, out / "fitness_history.csv")
    print(f"selected {len(result.selected)} features (fitness {result.fitness:.6g}): {', '.join(result.selected)}")
    return 0


def cmd_train(args) -> int:
    cfg = resolve(args)
    ds = _load(cfg)
    out = _outdir(cfg)
    imputed, _ = impute(ds, cfg.pipeline())
    features = None
    if args.features:
        names = _feature_names(args.features)
        unknown = [n for n in names if n not in imputed.feature_names]
        if unknown:
            raise UsageError(f"unknown features: {', '.join(unknown)}")
        features = [imputed.feature_names.index(n) for n in names]
    labels = label_order(imputed, cfg.positive_label)
    tree = train_adtree(imputed, cfg.adt_iterations, features, labels=labels)
    (out / "tree.txt").write_text(serialize(tree))
    (out / "rules.txt").write_text("".join(r.render() + "\n" for r in extract_rules(tree)))
    print(f"trained {tree.iterations} splitters; wrote {out / 'tree.txt'} and {out / 'rules.txt'}")
    return 0


def _feature_names(spec: str) -> list[str]:
    p = Path(spec)
    if p.is_file():
        return [ln.strip() for ln in p.read_text().splitlines() if ln.strip()]
    return [s.strip() for s in spec.split(",") if s.strip()]


def cmd_evaluate(args) -> int:
    cfg = resolve(args)
    ds = _load(cfg)
    out = _outdir(cfg)
    report = run_praa_pipeline(ds, cfg.pipeline())
    write_csv(report.imputed, out / "imputed.csv")
    report.imputation.write(out / "imputation_report.txt")
    _write_features(report.selected, out / "features.txt")
    _write_history(report.selection.history, out / "fitness_history.csv")
    (out / "tree.txt").write_text(serialize(report.tree))
    (out / "rules.txt").write_text("".join(r.render() + "\n" for r in report.rules))
    (out / "metrics.txt").write_text(report.render())
    with open(out / "scores.csv", "w") as fh:
        fh.write("score,actual\n")
        for s, lab in sorted(zip(report.scores, report.labels)):
            fh.write(f"{s!r},{lab}\n")
    sys.stdout.write(report.metrics.render())
    return 0


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",")]
    except ValueError:
        raise UsageError(f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
    cfg = resolve(args)
    out = _outdir(cfg)
    report = bench_scalability(
        sizes, seed=cfg.seed, n=args.cols, missing_rate=args.missing,
        repeats=args.repeats, full_pipeline=args.full_pipeline,
    )
    report.write_csv(out / "bench.csv")
    (out / "bench_summary.txt").write_text(report.summary() + "\n")
    print(report.summary())
    return 0


def cmd_wilcoxon(args) -> int:
    pairs = []
    for lineno, raw in enumerate(Path(args.pairs).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        try:
            pairs.append((float(parts[0]), float(parts[1])))
        except (ValueError, IndexError):
            if lineno == 1:
                continue  # header row
            raise DataError(f"line {lineno}: expected two numbers, got {raw!r}") from None
    r = wilcoxon_signed_rank(pairs)
    kind = "exact" if r.exact else "normal approx."
    print(f"rank sums (+, -) {r.w_plus:.1f}, {r.w_minus:.1f}; statistic {r.statistic:.1f}; "
          f"n {r.n}; p {r.p_value:.4g} ({kind})")
    return 0


def _fraction_below_one(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= v < 1:
        raise argparse.ArgumentTypeError(f"must be in [0, 1), got {v}")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="praa", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"praa {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def inputs(p):
        p.add_argument("--config", help="key = value settings file")
        p.add_argument("--data", help="CSV data file")
        p.add_argument("--schema", help="schema file, one 'name kind [marker]' per line")
        p.add_argument("--header", action="store_true", default=None, help="data file has a header row")
        p.add_argument("--seed", type=int)
        p.add_argument("-o", "--output", help="output directory")
        p.add_argument("--threads", type=int, help="worker bound (runs are single-threaded)")
        p.add_argument("--cross-real-sets", choices=("paper", "symmetric"))
        p.add_argument("--method", choices=("praa", "knni"), help="imputation method")
        p.add_argument("--k", type=_positive_int, help="neighbors for knni")

    def swarm(p):
        p.add_argument("--particles", type=_positive_int)
        p.add_argument("--iterations", type=_positive_int)
        p.add_argument("--c1", type=float)
        p.add_argument("--c2", type=float)
        p.add_argument("--vmax", type=float)
        p.add_argument("--folds", type=_positive_int)
        p.add_argument("--adt-iterations", type=_positive_int)

    g = sub.add_parser("generate", help="write a synthetic dataset and schema")
    g.add_argument("--rows", type=_positive_int, required=True)
    g.add_argument("--cols", type=_positive_int, required=True)
    g.add_argument("--missing", type=_fraction_below_one, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--separable", action="store_true", help="make f0 a perfect predictor")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=cmd_generate, subparser=g)

    p = sub.add_parser("impute", help="fill missing cells")
    inputs(p)
    p.set_defaults(func=cmd_impute, subparser=p)

    p = sub.add_parser("select", help="PSO feature selection")
    inputs(p)
    swarm(p)
    p.set_defaults(func=cmd_select, subparser=p)

    p = sub.add_parser("train", help="train an ADTree and export rules")
    inputs(p)
    p.add_argument("--adt-iterations", type=_positive_int)
    p.add_argument("--features", help="comma-separated names or a file with one per line")
    p.add_argument("--positive-label")
    p.set_defaults(func=cmd_train, subparser=p)

    p = sub.add_parser("evaluate", help="full pipeline with cross-validated metrics")
    inputs(p)
    swarm(p)
    p.add_argument("--fitness-folds", type=_positive_int)
    p.add_argument("--nested", action="store_true", default=None, help="select features inside each outer fold")
    p.add_argument("--positive-label")
    p.set_defaults(func=cmd_evaluate, subparser=p)

    p = sub.add_parser("bench", help="imputation runtime vs dataset size")
    p.add_argument("--config")
    p.add_argument("--sizes", default="1000,2000,4000,8000")
    p.add_argument("--cols", type=_positive_int, default=6)
    p.add_argument("--missing", type=_fraction_below_one, default=0.1)
    p.add_argument("--repeats", type=_positive_int, default=3)
    p.add_argument("--full-pipeline", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench, subparser=p)

    p = sub.add_parser("wilcoxon", help="signed-rank test on paired accuracies (CSV: first,second)")
    p.add_argument("pairs")
    p.set_defaults(func=cmd_wilcoxon, subparser=p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        args.subparser.print_usage(sys.stderr)
        print(f"praa {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (SchemaError, DataError) as exc:
        print(f"praa {args.command}: dataset: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"praa {args.command}: {_origin(exc)}: {exc}", file=sys.stderr)
        return 1


def _origin(exc) -> str:
    """Name of the innermost praa module in the traceback."""
    name = "runtime"
    tb = exc.__traceback__
    while tb is not None:
        mod = tb.tb_frame.f_globals.get("__name__", "")
        if mod.startswith("praa.") and mod != "praa.cli":
            name = mod.split(".")[-1]
        tb = tb.tb_next
    return name


if __name__ == "__main__":
    sys.exit(main())
