"""Command-line front end: synth, ingest, inspect, run, evaluate."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import dataset as ds_mod
from . import synth as synth_mod
from .config import PipelineConfig, apply_overrides, load_config
from .dataset import stratified_kfold, stratified_split
from .ensemble import VotingEnsemble
from .errors import ConfigError, ENoseError
from .evaluate import (
    FeaturePipeline,
    GridResult,
    cross_validate,
    evaluate_model,
    learning_curve,
)
from .models import default_grid, make_factory
from .preprocess import correlation_report_csv, feature_target_correlation
from .rng import derive_seed
from .serialize import load_model, save_model
from .svgplot import confusion_svg, line_chart_svg

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2

CLASSICAL_FAMILIES = ("dt", "rf", "svm")


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


def _load_data(cfg: PipelineConfig):
    if cfg.source == "synth":
        spec = synth_mod.default_spec(cfg.samples, cfg.seed, drift_enabled=cfg.drift)
        return synth_mod.generate(spec)
    if cfg.source == "manifest":
        return ds_mod.load_manifest(cfg.manifest)
    return ds_mod.load_glob(cfg.glob)


def _write(path: str, text: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json_text(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def cmd_synth(cfg: PipelineConfig) -> int:
    spec = synth_mod.default_spec(cfg.samples, cfg.seed, drift_enabled=cfg.drift)
    data = synth_mod.generate(spec)
    manifest = synth_mod.write_run_files(data, cfg.out_dir)
    print(f"wrote {len(data.classes)} run files + manifest to {cfg.out_dir}")
    print(f"manifest: {manifest}")
    return EXIT_OK


def cmd_ingest(cfg: PipelineConfig) -> int:
    data = _load_data(cfg)
    counts = np.bincount(data.labels, minlength=data.n_classes)
    print(f"samples: {data.n}  features: {data.d}  classes: {data.n_classes}")
    for name, c in zip(data.classes, counts):
        print(f"  {name}: {c}")
    return EXIT_OK


def cmd_inspect(cfg: PipelineConfig) -> int:
    data = _load_data(cfg)
    ranking = feature_target_correlation(data)
    path = os.path.join(cfg.out_dir, "correlation.csv")
    _write(path, correlation_report_csv(ranking))
    top = ranking[0]
    bottom = ranking[-1]
    print(f"most positive: {top[0]} (r={top[1]:+.4f})")
    print(f"most negative: {bottom[0]} (r={bottom[1]:+.4f})")
    print(f"wrote {path}")
    return EXIT_OK


def _grid_csv(result: GridResult) -> str:
    names = sorted({k for c in result.cells for k in c.params})
    lines = [",".join(names) + ",mean,std,failures"]
    for cell in result.cells:
        vals = [str(cell.params.get(n, "")) for n in names]
        lines.append(",".join(vals) + f",{cell.mean!r},{cell.std!r},{len(cell.failures)}")
    return "\n".join(lines) + "\n"


def _roc_csv(auc: dict) -> str:
    lines = ["class,fpr,tpr"]
    for name, (fpr, tpr) in auc["curves"].items():
        for x, y in zip(fpr, tpr):
            lines.append(f"{name},{x!r},{y!r}")
    return "\n".join(lines) + "\n"


def _curve_csv(rows: list[dict]) -> str:
    lines = ["size,train_acc,val_acc"]
    for r in rows:
        lines.append(f"{r['size']!r},{r['train_acc']!r},{r['val_acc']!r}")
    return "\n".join(lines) + "\n"


def cmd_run(cfg: PipelineConfig) -> int:
    out = cfg.out_dir
    stage = "ingest"
    try:
        data = _load_data(cfg)

        stage = "inspect"
        ranking = feature_target_correlation(data)
        _write(os.path.join(out, "correlation.csv"), correlation_report_csv(ranking))

        stage = "split"
        train, test = stratified_split(data, cfg.test_fraction, derive_seed(cfg.seed, "split"))
        plan = stratified_kfold(train.labels, cfg.folds, derive_seed(cfg.seed, "cv"))

        stage = "pipeline"
        pipe = FeaturePipeline(cfg.version).fit(train)
        train_t = pipe.transform(train)
        test_t = pipe.transform(test)

        summary: list[dict] = []
        fitted: dict[str, object] = {}
        tuned_classical: list[str] = []

        def register(name, model, cv_mean=None, cv_std=None):
            stage_reports(name, model)
            train_acc = float((model.predict(train_t.features) == train_t.labels).mean())
            test_acc = float((model.predict(test_t.features) == test_t.labels).mean())
            summary.append({
                "model": name,
                "cv_mean": cv_mean,
                "cv_std": cv_std,
                "train_acc": train_acc,
                "test_acc": test_acc,
            })
            fitted[name] = model

        def stage_reports(name, model):
            report = evaluate_model(model, test_t.features, test_t.labels, list(data.classes))
            if "json" in cfg.formats:
                _write(os.path.join(out, "reports", f"{name}.report.json"),
                       _json_text(report.to_dict()))
            if "csv" in cfg.formats:
                _write(os.path.join(out, "roc", f"{name}.roc.csv"), _roc_csv(report.auc))
            if "svg" in cfg.formats:
                _write(os.path.join(out, "svg", f"{name}.confusion.svg"),
                       confusion_svg(report.confusion, list(data.classes)))
                curves = {n: c for n, c in report.auc["curves"].items()}
                _write(os.path.join(out, "svg", f"{name}.roc.svg"),
                       line_chart_svg(curves, "false positive rate", "true positive rate"))

        for family in [f for f in cfg.families if f in CLASSICAL_FAMILIES]:
            stage = f"baseline:{family}"
            factory = make_factory(family)
            base_params = {"seed": derive_seed(cfg.seed, family, "baseline")} if family == "rf" else {}
            cv = cross_validate(factory, base_params, train, plan, cfg.version)
            model = factory(base_params).fit(train_t.features, train_t.labels, data.n_classes)
            register(f"{family}_baseline", model, cv.mean, cv.std)

            if cfg.grid != "none":
                stage = f"grid:{family}"
                from .evaluate import grid_search
                result = grid_search(default_grid(family, cfg.grid), train, plan,
                                     factory, cfg.version, workers=cfg.workers)
                if "csv" in cfg.formats:
                    _write(os.path.join(out, "grids", f"{family}.grid.csv"), _grid_csv(result))
                best = dict(result.best.params)
                if family == "rf":
                    best.setdefault("seed", derive_seed(cfg.seed, family, "tuned"))
                model = factory(best).fit(train_t.features, train_t.labels, data.n_classes)
                register(f"{family}_tuned", model, result.best.mean, result.best.std)
                tuned_classical.append(f"{family}_tuned")

                if cfg.learning_curves:
                    stage = f"learning_curve:{family}"
                    rows = learning_curve(factory, best, train, cfg.learning_curve_sizes,
                                          plan, cfg.version)
                    if "csv" in cfg.formats:
                        _write(os.path.join(out, "curves", f"{family}.learning_curve.csv"),
                               _curve_csv(rows))
                    if "svg" in cfg.formats:
                        xs = np.array([r["size"] for r in rows])
                        _write(os.path.join(out, "svg", f"{family}.learning_curve.svg"),
                               line_chart_svg({
                                   "train": (xs, np.array([r["train_acc"] for r in rows])),
                                   "validation": (xs, np.array([r["val_acc"] for r in rows])),
                               }, "training-set fraction", "accuracy"))

        for variant in cfg.ann_variants:
            stage = f"ann:{variant}"
            factory = make_factory("mlp")
            params = {"variant": variant, "epochs": cfg.ann_epochs,
                      "seed": derive_seed(cfg.seed, "ann", variant)}
            model = factory(params).fit(train_t.features, train_t.labels, data.n_classes)
            register(f"ann_{variant}", model)
            if "csv" in cfg.formats:
                from .neural import history_csv
                _write(os.path.join(out, "curves", f"ann_{variant}.history.csv"),
                       history_csv(model.model))

        if cfg.ensemble and len(tuned_classical) >= 2:
            stage = "ensemble"
            ens = VotingEnsemble([getattr(fitted[n], "model", fitted[n]) for n in tuned_classical])
            register("ensemble", ens)

        stage = "summary"
        best_row = max(summary, key=lambda r: r["test_acc"])
        for row in summary:
            row["best"] = row is best_row
        if "csv" in cfg.formats:
            lines = ["model,cv_mean,cv_std,train_acc,test_acc,best"]
            for row in summary:
                cvm = "" if row["cv_mean"] is None else repr(row["cv_mean"])
                cvs = "" if row["cv_std"] is None else repr(row["cv_std"])
                lines.append(f"{row['model']},{cvm},{cvs},{row['train_acc']!r},"
                             f"{row['test_acc']!r},{int(row['best'])}")
            _write(os.path.join(out, "summary.csv"), "\n".join(lines) + "\n")
        if "json" in cfg.formats:
            _write(os.path.join(out, "summary.json"), _json_text(summary))

        stage = "models"
        os.makedirs(os.path.join(out, "models"), exist_ok=True)
        for name, model in fitted.items():
            inner = getattr(model, "model", model)
            save_model(os.path.join(out, "models", f"{name}.model.json"),
                       inner, pipe, list(data.classes))

        for row in summary:
            marker = " *" if row["best"] else ""
            print(f"{row['model']}: test={row['test_acc']:.4f}{marker}")
        return EXIT_OK
    except ENoseError as exc:
        raise StageError(stage, exc) from exc
    except OSError as exc:
        raise StageError(stage, exc) from exc


def cmd_evaluate(cfg: PipelineConfig, model_path: str) -> int:
    model, pipe, classes = load_model(model_path)
    data = _load_data(cfg)
    if classes is not None and tuple(classes) != data.classes:
        raise ConfigError(
            f"model classes {classes} do not match data classes {list(data.classes)}"
        )
    work = pipe.transform(data) if pipe is not None else data
    report = evaluate_model(model, work.features, work.labels, list(data.classes))
    path = os.path.join(cfg.out_dir, "evaluate.report.json")
    _write(path, _json_text(report.to_dict()))
    print(f"accuracy: {report.accuracy:.4f}")
    print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="enose",
        description="Gas-sensor fusion classification toolkit",
    )
    parser.add_argument("--config", help="INI-style config file")
    parser.add_argument("--seed", type=int, help="master seed override")
    parser.add_argument("--version", choices=("V1", "V2", "V3", "V4"),
                        help="feature-set version override")
    parser.add_argument("--samples", type=int, help="synthetic samples per class")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", action="append", choices=("json", "csv", "svg"),
                        help="report format (repeatable)")
    parser.add_argument("--workers", type=int, help="worker pool size for grid cells")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("synth", help="generate synthetic run files + manifest")
    sub.add_parser("ingest", help="load and summarize a dataset")
    sub.add_parser("inspect", help="feature-target correlation report")
    sub.add_parser("run", help="end-to-end pipeline: tune, fit, evaluate, report")
    p_eval = sub.add_parser("evaluate", help="evaluate a serialized model on a dataset")
    p_eval.add_argument("model", help="path to a .model.json document")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = apply_overrides(load_config(args.config), args).validate()
        if args.command == "synth":
            return cmd_synth(cfg)
        if args.command == "ingest":
            return cmd_ingest(cfg)
        if args.command == "inspect":
            return cmd_inspect(cfg)
        if args.command == "run":
            return cmd_run(cfg)
        if args.command == "evaluate":
            return cmd_evaluate(cfg, args.model)
        parser.error(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except StageError as exc:
        code = EXIT_VALIDATION if isinstance(exc.cause, ConfigError) else EXIT_RUNTIME
        print(f"error: {exc}", file=sys.stderr)
        return code
    except ENoseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
