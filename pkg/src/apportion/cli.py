"""Command-line surface: train, predict, benchmark, synth, boundary-grid,
fisher-check, diagnose.

Flags beat config-file entries, which beat built-in defaults; pass a JSON
config with --config. Relative data paths missing from the working directory
are retried under $APPORTION_DATA_DIR. Logs go to stderr, machine-readable
output to stdout or the requested file, and the exit code is 0 only when no
error occurred (fisher-check additionally exits 1 when a draw fails its
check).
"""
from __future__ import annotations

import argparse
import contextlib
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .data import (ParseError, SynthSpec, dumps_libsvm, generate_synthetic,
                   load_dataset)
from .evaluation import (METHOD_KINDS, MethodSpec, Predictor, fit, grid_search,
                         kfold_cv, resolve_lambda)
from .fisher import fisher_check
from .geometry import margin_report, pairwise_norm_check
from .kernel import GramCapExceeded
from .linear import objective, train_linear
from .models import (KernelModel, KernelSpec, LabeledDataset, LinearModel,
                     PriorityVector, TrainConfig, scaled_rows)
from .storage import load_model, save_model

log = logging.getLogger("apportion")

DEFAULTS = {
    "method": "apportioned",
    "kernel": None,
    "gamma": 1.0,
    "degree": 3,
    "coef0": 1.0,
    "C": None,
    "lambda": 1e-3,
    "iterations": 20_000,
    "seed": 0,
    "folds": 10,
    "no_standardize": False,
    "grid": False,
    "out": None,
    "box": "-5,5,-5,5",
    "resolution": 200,
    "stddev": 0.6,
    "per_class": 200,
    "draws": 500,
    "ks": "2,3,4",
}


def _theta(text: str) -> PriorityVector:
    try:
        vals = [float(tok) for tok in text.split(",")]
    except ValueError:
        raise ValueError(f"could not parse priority vector {text!r}")
    return PriorityVector(np.array(vals))


def _data_path(p: str) -> str:
    if os.path.exists(p):
        return p
    root = os.environ.get("APPORTION_DATA_DIR")
    if root and os.path.exists(os.path.join(root, p)):
        return os.path.join(root, p)
    return p


def _load(path: str, label_col: int = -1) -> LabeledDataset:
    return load_dataset(_data_path(path), label_col=label_col)


def _kernel_spec(o) -> KernelSpec | None:
    if o.kernel is None:
        return None
    return KernelSpec(kind=o.kernel, gamma=o.gamma, degree=o.degree,
                      coef0=o.coef0)


def _method_spec(o) -> MethodSpec:
    return MethodSpec(kind=o.method, kernel=_kernel_spec(o), C=o.C,
                      lambda_=o.lambda_, iterations=o.iterations,
                      standardize=not o.no_standardize)


def _check_theta(theta: PriorityVector, data: LabeledDataset) -> None:
    if theta.k != data.k:
        raise ValueError(f"theta has {theta.k} entries but the data has "
                         f"{data.k} classes")


def _class_token(model, j: int) -> str:
    names = getattr(model, "class_names", None)
    return names[j] if names else str(j)


def _model_dim(model) -> int:
    if isinstance(model, LinearModel):
        return model.W.shape[1] - 1
    if isinstance(model, KernelModel):
        return model.support_points.shape[1] - 1
    return model.weights.shape[1] - 1


def _open_out(path):
    return open(path, "w") if path else contextlib.nullcontext(sys.stdout)


# ---------------------------------------------------------------- commands

def cmd_train(o) -> int:
    data = _load(o.data)
    theta = _theta(o.theta)
    _check_theta(theta, data)
    spec = _method_spec(o)
    if o.grid:
        gs = grid_search(data, theta, spec, seed=o.seed)
        spec = replace(spec, C=gs.C)
        if gs.gamma is not None:
            spec = replace(spec, kernel=replace(spec.kernel, gamma=gs.gamma))
        log.info("grid search chose C=%g%s (inner risk %.4f)", gs.C,
                 "" if gs.gamma is None else f", gamma={gs.gamma:g}", gs.risk)

    if spec.kind == "apportioned" and spec.kernel is None:
        fitted = data
        scaler = None
        if spec.standardize:
            from .data import standardize
            fitted, scaler = standardize(data)
        cfg = TrainConfig(lambda_=resolve_lambda(spec, fitted.n),
                          iterations=spec.iterations, seed=o.seed,
                          record_objective_every=max(1, spec.iterations // 5))
        model, trace = train_linear(fitted, theta, cfg)
        model.scaler = scaler
        model.class_names = data.class_names
        tail = ", ".join(f"t={t}: {v:.6g}" for t, v in trace.objective_samples[-3:])
        log.info("objective trace tail: %s", tail)
    else:
        model = fit(data, theta, spec, seed=o.seed).model
        fitted = data
        if model.scaler is not None:
            fitted = LabeledDataset(model.scaler.transform(data.features),
                                    data.labels, data.k, data.class_names)

    if isinstance(model, LinearModel):
        log.info("final objective: %.6g",
                 objective(model, fitted, resolve_lambda(spec, fitted.n)))
        for pm in margin_report(model, fitted).rows:
            log.info("pair %d-%d: gamma=%.4g bound=%.4g eta=%.4g",
                     pm.i, pm.j, pm.gamma, pm.bound, pm.eta)
    out = o.out or "model.apportion"
    save_model(model, out)
    log.info("wrote %s", out)
    return 0


def cmd_predict(o) -> int:
    model = load_model(o.model)
    data = _load(o.data)
    pred = Predictor(model, getattr(model, "scaler", None)).predict(data.features)
    tokens = [_class_token(model, int(j)) for j in pred]
    with _open_out(o.out) as fh:
        for tok in tokens:
            print(tok, file=fh)
    if data.class_names:
        given = [data.class_names[y] for y in data.labels]
        agree = float(np.mean([a == b for a, b in zip(tokens, given)]))
        log.info("agreement with file labels: %.4f", agree)
    return 0


def cmd_synth(o) -> int:
    means = tuple(tuple(float(v) for v in pt.split(","))
                  for pt in o.means.split(";"))
    spec = SynthSpec(means=means, stddev=o.stddev, points_per_class=o.per_class,
                     seed=o.seed)
    data = generate_synthetic(spec)
    if o.out and o.out.endswith(".csv") or not o.out:
        with _open_out(o.out) as fh:
            cols = [f"x{i+1}" for i in range(data.d)]
            print(",".join(cols + ["label"]), file=fh)
            for row, y in zip(data.features, data.labels):
                print(",".join([repr(float(v)) for v in row] + [str(int(y))]), file=fh)
    else:
        with open(o.out, "w") as fh:
            fh.write(dumps_libsvm(data))
    if o.out:
        log.info("wrote %s (%d points, %d classes)", o.out, data.n, data.k)
    return 0


def cmd_boundary_grid(o) -> int:
    model = load_model(o.model)
    if _model_dim(model) != 2:
        raise ValueError("boundary grid requires a model over exactly two features")
    box = [float(v) for v in o.box.split(",")]
    if len(box) != 4 or box[0] >= box[1] or box[2] >= box[3]:
        raise ValueError("box must be xmin,xmax,ymin,ymax with min < max")
    r = int(o.resolution)
    if r < 2:
        raise ValueError("resolution must be at least 2")
    xs = np.linspace(box[0], box[1], r)
    ys = np.linspace(box[2], box[3], r)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    pred = Predictor(model, getattr(model, "scaler", None)).predict(pts)
    with _open_out(o.out) as fh:
        print("x1,x2,predicted_class", file=fh)
        for (x1, x2), j in zip(pts, pred):
            print(f"{float(x1)!r},{float(x2)!r},{_class_token(model, int(j))}", file=fh)
    if o.out:
        log.info("wrote %s (%d rows)", o.out, pts.shape[0])

    if o.points_out:
        if not o.data:
            raise ValueError("--points-out needs --data")
        data = _load(o.data)
        with open(o.points_out, "w") as fh:
            print("x1,x2,label", file=fh)
            for row, y in zip(data.features, data.labels):
                tok = data.class_names[y] if data.class_names else str(int(y))
                print(f"{float(row[0])!r},{float(row[1])!r},{tok}", file=fh)
        log.info("wrote %s", o.points_out)

    if o.lines_out:
        if not isinstance(model, LinearModel):
            raise ValueError("--lines-out needs a linear model")
        rows = scaled_rows(model)
        with open(o.lines_out, "w") as fh:
            print("kind,i,j,a,b,c", file=fh)
            for j in range(model.k):
                a, b, c = (float(model.W[j, 0]), float(model.W[j, 1]),
                           float(model.W[j, 2]) - model.theta[j])
                print(f"support,{j},{j},{a!r},{b!r},{c!r}", file=fh)
            for i in range(model.k):
                for j in range(i + 1, model.k):
                    n = rows[i] - rows[j]
                    print(f"bisector,{i},{j},{float(n[0])!r},{float(n[1])!r},"
                          f"{float(n[2])!r}", file=fh)
        log.info("wrote %s", o.lines_out)
    return 0


def cmd_benchmark(o) -> int:
    theta = _theta(o.theta)
    important = int(np.argmax(theta.costs))
    methods = [m.strip() for m in o.methods.split(",")] if o.methods else list(METHOD_KINDS)
    for m in methods:
        if m not in METHOD_KINDS:
            raise ValueError(f"unknown method {m!r}")
    csv_rows = []
    for path in o.data:
        resolved = _data_path(path)
        if not os.path.exists(resolved):
            log.warning("skipping %s: not found", path)
            continue
        data = load_dataset(resolved)
        if data.k != theta.k:
            log.warning("skipping %s: %d classes but theta has %d entries",
                        path, data.k, theta.k)
            continue
        name = Path(path).stem
        print(f"# {name} (n={data.n}, d={data.d}, k={data.k}, "
              f"important={important})")
        print(f"{'method':<12} {'risk':>8} {'sensitivity':>11}")
        for m in methods:
            spec = MethodSpec(kind=m, kernel=_kernel_spec(o) if m == "apportioned" else None,
                              C=o.C, lambda_=o.lambda_, iterations=o.iterations,
                              standardize=not o.no_standardize)
            if o.grid:
                gs = grid_search(data, theta, spec, seed=o.seed)
                spec = replace(spec, C=gs.C)
                if gs.gamma is not None:
                    spec = replace(spec, kernel=replace(spec.kernel, gamma=gs.gamma))
                log.info("%s/%s: grid chose C=%g%s", name, m, gs.C,
                         "" if gs.gamma is None else f", gamma={gs.gamma:g}")
            cv = kfold_cv(data, theta, spec, folds=o.folds, seed=o.seed)
            sens = float(cv.mean_sensitivity[important])
            print(f"{m:<12} {cv.mean_expected_risk:>8.4f} {sens:>11.4f}")
            csv_rows.append((name, m, cv.mean_expected_risk, sens))
    if o.csv:
        with open(o.csv, "w") as fh:
            print("dataset,method,expected_risk,sensitivity", file=fh)
            for name, m, risk, sens in csv_rows:
                print(f"{name},{m},{risk!r},{sens!r}", file=fh)
        log.info("wrote %s", o.csv)
    return 0


def cmd_fisher_check(o) -> int:
    ks = [int(v) for v in o.ks.split(",")]
    rng = np.random.default_rng(o.seed)
    failures = 0
    print("draw,k,argmax_weighted,argmax_numeric,value_numeric,value_closed,verdict")
    for i in range(o.draws):
        k = int(rng.choice(ks))
        P = rng.dirichlet(np.ones(k))
        theta = rng.uniform(0.2, 5.0, size=k)
        chk = fisher_check(P, theta)
        verdict = "PASS" if chk.passed else "FAIL"
        failures += chk.passed is False
        print(f"{i},{k},{chk.argmax_weighted},{chk.argmax_numeric},"
              f"{chk.value_numeric:.6g},{chk.value_closed:.6g},{verdict}")
    log.info("fisher-check: %d/%d draws passed", o.draws - failures, o.draws)
    return 1 if failures else 0


def cmd_diagnose(o) -> int:
    model = load_model(o.model)
    if not isinstance(model, LinearModel):
        raise ValueError("diagnose needs a linear model")
    data = _load(o.data)
    if model.scaler is not None:
        data = LabeledDataset(model.scaler.transform(data.features),
                              data.labels, data.k, data.class_names)
    print(margin_report(model, data).to_csv(), end="")
    chk = pairwise_norm_check(model.W)
    log.info("pairwise norm identity: lhs=%.6g rhs=%.6g holds=%s",
             chk.lhs, chk.rhs, chk.holds)
    return 0


# ---------------------------------------------------------------- plumbing

def _add_train_flags(p):
    p.add_argument("--method", choices=METHOD_KINDS)
    p.add_argument("--kernel", choices=("linear", "rbf", "polynomial"))
    p.add_argument("--gamma", type=float)
    p.add_argument("--degree", type=int)
    p.add_argument("--coef0", type=float)
    p.add_argument("--C", type=float, dest="C")
    p.add_argument("--lambda", type=float, dest="lambda_")
    p.add_argument("--iterations", type=int)
    p.add_argument("--grid", action="store_true")
    p.add_argument("--no-standardize", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="apportion", description=__doc__,
                                  formatter_class=argparse.RawDescriptionHelpFormatter)
    top.add_argument("--config", help="JSON file with default flag values")
    top.add_argument("--verbose", action="store_true")
    sub = top.add_subparsers(dest="cmd", required=True)

    def new(name, **kw):
        p = sub.add_parser(name, argument_default=argparse.SUPPRESS, **kw)
        p.add_argument("--seed", type=int)
        return p

    p = new("train", help="fit a model and write it to a file")
    p.add_argument("--data", required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--out")
    _add_train_flags(p)

    p = new("predict", help="print predicted labels, one per line")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out")

    p = new("synth", help="generate gaussian blobs as CSV or LIBSVM")
    p.add_argument("--means", required=True,
                   help="per-class centroids, e.g. '-3,0;3,0'")
    p.add_argument("--stddev", type=float)
    p.add_argument("--per-class", type=int, dest="per_class")
    p.add_argument("--out")

    p = new("boundary-grid", help="rasterize predictions over a 2-D box")
    p.add_argument("--model", required=True)
    p.add_argument("--out")
    p.add_argument("--box", help="xmin,xmax,ymin,ymax")
    p.add_argument("--resolution", type=int)
    p.add_argument("--data")
    p.add_argument("--points-out", dest="points_out")
    p.add_argument("--lines-out", dest="lines_out")

    p = new("benchmark", help="cross-validated risk table over methods")
    p.add_argument("--data", nargs="+", required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--methods")
    p.add_argument("--folds", type=int)
    p.add_argument("--csv")
    _add_train_flags(p)

    p = new("fisher-check", help="compare the numeric surrogate minimizer "
                                 "with the analytic candidate")
    p.add_argument("--draws", type=int)
    p.add_argument("--ks")

    p = new("diagnose", help="margin report and norm identity for a model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    return top


def _settings(args: argparse.Namespace) -> argparse.Namespace:
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        cfg = {key.replace("-", "_"): val for key, val in raw.items()}
    merged = dict(DEFAULTS)
    merged["lambda_"] = merged.pop("lambda")
    merged.update({("lambda_" if k == "lambda" else k): v for k, v in cfg.items()})
    merged.update(vars(args))
    merged.setdefault("data", None)
    merged.setdefault("points_out", None)
    merged.setdefault("lines_out", None)
    merged.setdefault("csv", None)
    merged.setdefault("methods", None)
    return argparse.Namespace(**merged)


COMMANDS = {
    "train": cmd_train,
    "predict": cmd_predict,
    "synth": cmd_synth,
    "boundary-grid": cmd_boundary_grid,
    "benchmark": cmd_benchmark,
    "fisher-check": cmd_fisher_check,
    "diagnose": cmd_diagnose,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr,
                        level=logging.DEBUG if getattr(args, "verbose", False)
                        else logging.INFO,
                        format="%(levelname)s %(message)s")
    try:
        opts = _settings(args)
        return COMMANDS[args.cmd](opts)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, GramCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
