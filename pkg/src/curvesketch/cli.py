"""Command line interface.

Exit status: 0 on success, 1 on invalid flags or input, 2 when ``verify``
finds a failing suite.  Errors are reported as one line on stderr:
``curvesketch: error: <kind>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import io as cio
from .analysis.classify import ExperimentConfig, directional_features, evaluate_repeats
from .analysis.verify import SUITES, verify_theorem_suite
from .datasets import DirectionalSpec, Rect, gen_directional, grid_landmarks, normalize_to_unit
from .descriptors import sigma_select, slfs_estimate
from .distances import dq_matrix, pairwise_curve_matrix
from .features import SketchConfig, Variant, field_raster, sketch_many

SCHEMA = cio.SCHEMA


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive_int(text):
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if val < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {val}")
    return val


def _positive_float(text):
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (val > 0 and math.isfinite(val)):
        raise argparse.ArgumentTypeError(f"must be positive and finite, got {text}")
    return val


def _p_value(text):
    if text.lower() in ("inf", "infinity"):
        return math.inf
    val = _positive_float(text)
    if val < 1:
        raise argparse.ArgumentTypeError(f"p must be >= 1, got {text}")
    return val


def _rect(text):
    try:
        return Rect.parse(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(parser):
    parser.add_argument("--config", type=Path, help="JSON file whose keys override flag defaults")
    parser.add_argument("--threads", type=_positive_int, default=1, help="worker threads (default: %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="curvesketch", description=__doc__.splitlines()[0],
                 formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    ap.add_argument("--version", action="version", version=f"curvesketch {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("gen-synthetic", help="directional A->B / B->A trajectories", formatter_class=fmt)
    p.add_argument("--n-per-class", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize", action="store_true", help="map the joint bounding box onto [0,1]^2")
    p.add_argument("--out", type=Path, required=True, help="trajectory CSV; the manifest goes next to it")
    p.add_argument("--plot", action="store_true", help="also write a PNG of the curves")
    _common(p)

    p = sub.add_parser("landmarks", help="grid landmarks over a rectangle", formatter_class=fmt)
    p.add_argument("--domain", type=_rect, default=Rect(0.0, 0.0, 1.0, 1.0), help="xmin,ymin,xmax,ymax")
    p.add_argument("--nx", type=_positive_int, default=20)
    p.add_argument("--ny", type=_positive_int, default=20)
    p.add_argument("--out", type=Path, required=True)
    _common(p)

    p = sub.add_parser("vectorize", help="sketch every curve over a landmark set", formatter_class=fmt)
    p.add_argument("--curves", type=Path, required=True)
    p.add_argument("--manifest", type=Path)
    p.add_argument("--landmarks", type=Path, help="landmark CSV; otherwise a grid from --domain/--nx/--ny")
    p.add_argument("--domain", type=_rect, default=Rect(0.0, 0.0, 1.0, 1.0))
    p.add_argument("--nx", type=_positive_int, default=20)
    p.add_argument("--ny", type=_positive_int, default=20)
    p.add_argument("--sigma", type=_positive_float, default=0.3)
    p.add_argument("--variant", choices=[v.value for v in Variant], default="signed")
    p.add_argument("--out", type=Path, required=True)
    _common(p)

    p = sub.add_parser("dist", help="pairwise distance matrix", formatter_class=fmt)
    p.add_argument("--metric", choices=["dq", "hausdorff", "frechet", "dtw"], default="dq")
    p.add_argument("--features", type=Path, help="feature CSV (metric dq)")
    p.add_argument("--p", type=_p_value, default=2.0, help="l^p exponent for dq; 'inf' for the max")
    p.add_argument("--curves", type=Path, help="trajectory CSV (curve metrics)")
    p.add_argument("--manifest", type=Path)
    p.add_argument("--step", type=_positive_float, default=0.01, help="densification step for hausdorff/frechet")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--plot", action="store_true")
    _common(p)

    p = sub.add_parser("field", help="signed field of one curve on a grid", formatter_class=fmt)
    p.add_argument("--curves", type=Path, required=True)
    p.add_argument("--manifest", type=Path)
    p.add_argument("--curve-id", help="defaults to the first curve in the file")
    p.add_argument("--domain", type=_rect, default=Rect(0.0, 0.0, 1.0, 1.0))
    p.add_argument("--nx", type=_positive_int, default=64)
    p.add_argument("--ny", type=_positive_int, default=64)
    p.add_argument("--sigma", type=_positive_float, default=0.3)
    p.add_argument("--out", type=Path, required=True, help="CSV raster; a PGM is written next to it")
    p.add_argument("--plot", action="store_true")
    _common(p)

    p = sub.add_parser("slfs", help="sampled signed local feature size as JSON", formatter_class=fmt)
    p.add_argument("--curves", type=Path, required=True)
    p.add_argument("--manifest", type=Path)
    p.add_argument("--curve-id")
    p.add_argument("--step", type=_positive_float, default=0.05)
    p.add_argument("--out", type=Path, help="write JSON here instead of stdout")
    _common(p)

    p = sub.add_parser("sigma-select", help="largest sigma for given delta and epsilon", formatter_class=fmt)
    p.add_argument("--delta", type=_positive_float, required=True)
    p.add_argument("--epsilon", type=_positive_float, required=True)
    _common(p)

    p = sub.add_parser("classify", help="repeated-split classification", formatter_class=fmt)
    p.add_argument("--variant", choices=["signed", "mindist", "both"], default="both")
    p.add_argument("--classifier", choices=["logreg", "knn"], default="logreg")
    p.add_argument("--k", type=_positive_int, default=5)
    p.add_argument("--lr", type=_positive_float, default=0.5)
    p.add_argument("--iters", type=_positive_int, default=500)
    p.add_argument("--repeats", type=_positive_int, default=100)
    p.add_argument("--train-fraction", type=_positive_float, default=0.7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-per-class", type=_positive_int, default=100)
    p.add_argument("--sigma", type=_positive_float, default=0.3)
    p.add_argument("--nx", type=_positive_int, default=20)
    p.add_argument("--ny", type=_positive_int, default=20)
    p.add_argument("--features", type=Path, help="classify an existing feature CSV instead")
    p.add_argument("--manifest", type=Path, help="labels for --features")
    p.add_argument("--out", type=Path, help="write JSON here instead of stdout")
    p.add_argument("--plot", action="store_true", help="box plot next to --out")
    _common(p)

    p = sub.add_parser("verify", help="run bound-checking suites", formatter_class=fmt)
    p.add_argument("--suite", choices=list(SUITES) + ["all"], required=True)
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, help="write JSON here instead of stdout")
    p.add_argument("--plot", action="store_true", help="bar chart next to --out")
    _common(p)
    return ap


def _parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is None:
        return parser, args
    cfg = cio.read_json(args.config)
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    schema = cfg.pop("schema", SCHEMA)
    if schema != SCHEMA:
        raise UsageError(f"config schema {schema!r} is not {SCHEMA!r}")
    known = {k for k in vars(args) if k not in ("command", "config")}
    unknown = sorted(set(cfg) - known)
    if unknown:
        raise UsageError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
    # flags given on the command line win over the file
    sub = parser._subparsers._group_actions[0].choices[args.command]
    sub.set_defaults(**{k: _coerce(sub, k, v) for k, v in cfg.items()})
    return parser, parser.parse_args(argv)


def _coerce(sub, dest, value):
    for action in sub._actions:
        if action.dest == dest:
            if action.type is not None and not isinstance(value, bool):
                try:
                    return action.type(str(value))
                except argparse.ArgumentTypeError as exc:
                    raise UsageError(f"config key {dest}: {exc}") from None
            if action.choices is not None and value not in action.choices:
                raise UsageError(f"config key {dest}: {value!r} not in {list(action.choices)}")
            return value
    return value


def _emit_json(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _png_next_to(path) -> Path:
    return Path(path).with_suffix(".png")


def _select(ids, curves, curve_id):
    if curve_id is None:
        return ids[0], curves[0]
    if curve_id not in ids:
        raise ValueError(f"curve id {curve_id!r} not found")
    i = ids.index(curve_id)
    return ids[i], curves[i]


def _jsonable(x):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


# subcommands ------------------------------------------------------------------


def cmd_gen_synthetic(args):
    curves, labels = gen_directional(DirectionalSpec(n_per_class=args.n_per_class, seed=args.seed))
    n = args.n_per_class
    ids = [f"ab{k:04d}" for k in range(n)] + [f"ba{k:04d}" for k in range(n)]
    if args.normalize:
        curves, tf = normalize_to_unit(curves)
        cio.write_json(args.out.with_name(args.out.stem + ".transform.json"), {"schema": SCHEMA, **tf.to_dict()})
    cio.write_trajectories(args.out, curves, ids, labels)
    if args.plot:
        from .plotting import plot_curves

        plot_curves(_png_next_to(args.out), curves, labels)
    return 0


def cmd_landmarks(args):
    cio.write_landmarks(args.out, grid_landmarks(args.domain, args.nx, args.ny))
    return 0


def cmd_vectorize(args):
    ids, curves, _ = cio.read_trajectories(args.curves, args.manifest)
    lm = cio.read_landmarks(args.landmarks) if args.landmarks else grid_landmarks(args.domain, args.nx, args.ny)
    cfg = SketchConfig(args.sigma, Variant(args.variant), lm)
    vecs = sketch_many(curves, cfg, ids, threads=args.threads)
    cio.write_features(args.out, ids, np.vstack([v.values for v in vecs]))
    cio.write_json(args.out.with_suffix(".json"), {
        "schema": SCHEMA,
        "version": __version__,
        "sigma": None if cfg.variant is Variant.MINDIST else args.sigma,
        "variant": cfg.variant.value,
        "landmarks": {"provenance": lm.provenance, "count": len(lm), "digest": lm.digest()},
    })
    return 0


def cmd_dist(args):
    if args.metric == "dq":
        if args.features is None:
            raise UsageError("--metric dq needs --features")
        ids, X = cio.read_features(args.features)
        M = dq_matrix(X, args.p)
    else:
        if args.curves is None:
            raise UsageError(f"--metric {args.metric} needs --curves")
        ids, curves, _ = cio.read_trajectories(args.curves, args.manifest)
        M = pairwise_curve_matrix(curves, args.metric, args.step, threads=args.threads)
    cio.write_matrix(args.out, ids, M)
    if args.plot:
        from .plotting import plot_matrix

        plot_matrix(_png_next_to(args.out), M, ids)
    return 0


def cmd_field(args):
    ids, curves, _ = cio.read_trajectories(args.curves, args.manifest)
    cid, curve = _select(ids, curves, args.curve_id)
    R = field_raster(curve, args.domain, args.nx, args.ny, args.sigma)
    cio.write_raster_csv(args.out, R)
    cio.write_pgm(args.out.with_suffix(".pgm"), R)
    if args.plot:
        from .plotting import plot_field

        plot_field(_png_next_to(args.out), R, args.domain.as_list(), curve, title=cid)
    return 0


def cmd_slfs(args):
    ids, curves, _ = cio.read_trajectories(args.curves, args.manifest)
    if args.curve_id is not None:
        pairs = [_select(ids, curves, args.curve_id)]
    else:
        pairs = list(zip(ids, curves))

    def one(pair):
        return {"curve_id": pair[0], **slfs_estimate(pair[1], args.step).to_dict()}

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(one, pairs))
    else:
        results = [one(p) for p in pairs]
    _emit_json({"schema": SCHEMA, "results": results}, args.out)
    return 0


def cmd_sigma_select(args):
    sys.stdout.write(cio.fmt(sigma_select(args.delta, args.epsilon)) + "\n")
    return 0


def cmd_classify(args):
    config = ExperimentConfig(
        train_fraction=args.train_fraction, repeats=args.repeats, classifier=args.classifier, k=args.k,
        lr=args.lr, iters=args.iters, seed=args.seed, n_per_class=args.n_per_class, sigma=args.sigma,
        nx=args.nx, ny=args.ny,
    )
    reports = {}
    if args.features is not None:
        if args.manifest is None:
            raise UsageError("--features needs --manifest for the labels")
        ids, X = cio.read_features(args.features)
        meta = cio.read_json(args.manifest)
        missing = [i for i in ids if i not in meta]
        if missing:
            raise ValueError(f"no label for curve {missing[0]!r} in {args.manifest}")
        reports["features"] = evaluate_repeats(X, [str(meta[i].get("label", "")) for i in ids], config)
    else:
        variants = ["signed", "mindist"] if args.variant == "both" else [args.variant]
        for v in variants:
            X, labels = directional_features(config, v, threads=args.threads)
            reports[v] = evaluate_repeats(X, labels, config)
    _emit_json({"schema": SCHEMA, "version": __version__, "config": config.to_dict(),
                "reports": {k: r.to_dict() for k, r in reports.items()}}, args.out)
    if args.plot:
        if args.out is None:
            raise UsageError("--plot needs --out")
        from .plotting import plot_errors

        plot_errors(_png_next_to(args.out), reports)
    return 0


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]

    def one(name):
        return verify_theorem_suite(name, args.trials, args.seed)

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            reports = list(pool.map(one, names))
    else:
        reports = [one(n) for n in names]
    payload = {"schema": SCHEMA, "version": __version__, "trials": args.trials, "seed": args.seed,
               "suites": []}
    for r in reports:
        d = r.to_dict()
        for key in ("max_ratio", "max_excess"):
            if d[key] is not None:
                d[key] = _jsonable(d[key])
        payload["suites"].append(d)
    payload["status"] = "PASS" if all(r.passed for r in reports) else "FAIL"
    _emit_json(payload, args.out)
    if args.plot:
        if args.out is None:
            raise UsageError("--plot needs --out")
        from .plotting import plot_suites

        plot_suites(_png_next_to(args.out), reports)
    return 0 if payload["status"] == "PASS" else 2


COMMANDS = {
    "gen-synthetic": cmd_gen_synthetic,
    "landmarks": cmd_landmarks,
    "vectorize": cmd_vectorize,
    "dist": cmd_dist,
    "field": cmd_field,
    "slfs": cmd_slfs,
    "sigma-select": cmd_sigma_select,
    "classify": cmd_classify,
    "verify": cmd_verify,
}


def _fail(kind, message) -> int:
    sys.stderr.write(f"curvesketch: error: {kind}: {' '.join(str(message).split())}\n")
    return 1


def main(argv=None) -> int:
    try:
        _, args = _parse(sys.argv[1:] if argv is None else list(argv))
        return COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail("usage", exc)
    except cio.InputError as exc:
        return _fail("input", exc)
    except (ValueError, OSError) as exc:
        return _fail("value", exc)


if __name__ == "__main__":
    sys.exit(main())
