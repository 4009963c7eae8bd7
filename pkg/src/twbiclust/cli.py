"""Command-line interface.

Subcommands: generate, localize, test, select-k, calibrate, growth-check.
Every run resolves its configuration (CLI flags > config file > defaults),
persists the resolved config next to its outputs, and is a pure function of
(input files, config, seed).  Exit codes: 0 success, 2 input or contract
error, 3 statistical non-acceptance, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import io as tio
from .errors import BiclustError, NoConvergenceError, NotAcceptedError
from .localize import (
    CoolingSchedule,
    LocalizerConfig,
    geometric,
    greedy,
)
from .model import compute_group_stats
from .synth import (
    DEFAULT_B,
    DEFAULT_CENTER,
    DEFAULT_S,
    DISTRIBUTIONS,
    GeneratorSpec,
    LayoutSpec,
    generate,
    interpolated_means,
)
from .twtest import run_test, select_k
from .validate import growth_check, ks_statistic, null_ensemble, tail_probabilities


def _schema(name: str) -> dict:
    with resources.files("twbiclust.schemas").joinpath(name).open(encoding="utf-8") as fh:
        return json.load(fh)


def _floats(text: str):
    return tuple(float(t) for t in text.split(","))


def _ints(text: str):
    return tuple(int(t) for t in text.split(","))


def _sizes(text: str):
    out = []
    for tok in text.split(","):
        n, p = tok.lower().split("x")
        out.append((int(n), int(p)))
    return out


_DEFAULTS = {
    "generate": {
        "dist": "gaussian", "k": 3, "n": 500, "p": 375, "b": None, "s": None,
        "t": None, "seed": 0, "out": ".",
    },
    "localize": {
        "matrix": None, "k0": 1, "entropy": None, "cooling_rate": 0.999,
        "sa_threshold": 1e-5, "greedy": False, "restarts": 5, "l1": None,
        "l2": None, "seed": 0, "jobs": 1, "out": ".",
    },
    "test": {
        "matrix": None, "assignment": None, "alpha": 0.05, "std_floor": None,
        "seed": 0, "out": ".",
    },
    "select-k": {
        "matrix": None, "alpha": 0.01, "k_max": 6, "entropy": None,
        "cooling_rate": 0.999, "sa_threshold": 1e-5, "restarts": 5,
        "l1": None, "l2": None, "std_floor": None, "seed": 0, "jobs": 1, "out": ".",
    },
    "calibrate": {
        "dist": "gaussian", "k": 3, "sizes": [(500, 375)], "trials": 100,
        "alphas": (0.01, 0.05, 0.1), "oracle_assignment": False, "b": None,
        "s": None, "t": None, "restarts": 5, "cooling_rate": 0.999,
        "sa_threshold": 1e-5, "paper_scale": False, "seed": 0, "jobs": 1, "out": ".",
    },
    "growth-check": {
        "dist": "gaussian", "k": 3, "k0s": (0, 1, 2),
        "sizes": [(200, 150), (400, 300)], "trials": 20, "b": None, "s": None,
        "restarts": 5, "cooling_rate": 0.999, "sa_threshold": 1e-5,
        "paper_scale": False, "seed": 0, "jobs": 1, "out": ".",
    },
}

#: full-scale experiment presets activated by --paper-scale
_PAPER_SCALE = {
    "calibrate": {"trials": 5000, "sizes": [(500 * i, 375 * i) for i in range(1, 11)]},
    "growth-check": {"trials": 100, "sizes": [(200 * i, 150 * i) for i in range(1, 11)]},
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twbiclust",
        description="Select the number of biclusters in a data matrix via a "
        "Tracy-Widom goodness-of-fit test.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_shared(p):
        p.add_argument("--config", help="JSON config file (flags take precedence)")
        p.add_argument("--seed", type=int)
        p.add_argument("--jobs", type=int)
        p.add_argument("--out", help="output directory (created if missing)")

    g = sub.add_parser("generate", help="write a synthetic matrix + assignment")
    g.add_argument("--dist", choices=DISTRIBUTIONS)
    g.add_argument("--k", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=int)
    g.add_argument("--b", type=_floats, help="group means, background first")
    g.add_argument("--s", type=_floats, help="group stds (gaussian only)")
    g.add_argument("--t", type=int, help="shrink means toward the center by 1 - t/10")
    add_shared(g)

    lo = sub.add_parser("localize", help="estimate a K0-bicluster assignment")
    lo.add_argument("--matrix", help="matrix CSV")
    lo.add_argument("--k0", type=int)
    lo.add_argument("--entropy", choices=DISTRIBUTIONS)
    lo.add_argument("--cooling-rate", dest="cooling_rate", type=float)
    lo.add_argument("--sa-threshold", dest="sa_threshold", type=float)
    lo.add_argument("--greedy", action="store_const", const=True)
    lo.add_argument("--restarts", type=int)
    lo.add_argument("--l1", type=int)
    lo.add_argument("--l2", type=int)
    add_shared(lo)

    te = sub.add_parser("test", help="test a fitted assignment at level alpha")
    te.add_argument("--matrix")
    te.add_argument("--assignment")
    te.add_argument("--alpha", type=float)
    te.add_argument("--std-floor", dest="std_floor", type=float)
    add_shared(te)

    se = sub.add_parser("select-k", help="sequential selection of the bicluster count")
    se.add_argument("--matrix")
    se.add_argument("--alpha", type=float)
    se.add_argument("--k-max", dest="k_max", type=int)
    se.add_argument("--entropy", choices=DISTRIBUTIONS)
    se.add_argument("--cooling-rate", dest="cooling_rate", type=float)
    se.add_argument("--sa-threshold", dest="sa_threshold", type=float)
    se.add_argument("--restarts", type=int)
    se.add_argument("--l1", type=int)
    se.add_argument("--l2", type=int)
    se.add_argument("--std-floor", dest="std_floor", type=float)
    add_shared(se)

    ca = sub.add_parser("calibrate", help="null-calibration Monte Carlo")
    ca.add_argument("--dist", choices=DISTRIBUTIONS)
    ca.add_argument("--k", type=int)
    ca.add_argument("--sizes", type=_sizes, help="e.g. 500x375,1000x750")
    ca.add_argument("--trials", type=int)
    ca.add_argument("--alphas", type=_floats)
    ca.add_argument("--oracle-assignment", dest="oracle_assignment",
                    action="store_const", const=True,
                    help="standardize with the generating assignment")
    ca.add_argument("--b", type=_floats)
    ca.add_argument("--s", type=_floats)
    ca.add_argument("--t", type=int)
    ca.add_argument("--restarts", type=int)
    ca.add_argument("--cooling-rate", dest="cooling_rate", type=float)
    ca.add_argument("--sa-threshold", dest="sa_threshold", type=float)
    ca.add_argument("--paper-scale", dest="paper_scale", action="store_const",
                    const=True, help="full experiment grid (overrides --trials/--sizes)")
    add_shared(ca)

    gr = sub.add_parser("growth-check", help="mean T / n^(5/3) under too-small K0")
    gr.add_argument("--dist", choices=DISTRIBUTIONS)
    gr.add_argument("--k", type=int)
    gr.add_argument("--k0s", type=_ints)
    gr.add_argument("--sizes", type=_sizes)
    gr.add_argument("--trials", type=int)
    gr.add_argument("--b", type=_floats)
    gr.add_argument("--s", type=_floats)
    gr.add_argument("--restarts", type=int)
    gr.add_argument("--cooling-rate", dest="cooling_rate", type=float)
    gr.add_argument("--sa-threshold", dest="sa_threshold", type=float)
    gr.add_argument("--paper-scale", dest="paper_scale", action="store_const",
                    const=True, help="full experiment grid (overrides --trials/--sizes)")
    add_shared(gr)

    return ap


def resolve_config(command: str, args: argparse.Namespace) -> dict:
    """Merge CLI flags over config-file values over defaults."""
    params = dict(_DEFAULTS[command])
    cfg_path = getattr(args, "config", None)
    if cfg_path:
        from_file = tio.read_json(cfg_path)
        for key, value in from_file.items():
            key = key.replace("-", "_")
            if key not in params:
                raise ValueError(f"unknown config key {key!r} for {command}")
            if key == "sizes" and value is not None:
                value = [tuple(v) for v in value]
            params[key] = value
    for key in params:
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            params[key] = cli_value
    if params.get("paper_scale"):
        params.update(_PAPER_SCALE[command])
    return params


def _persist_config(command: str, params: dict, out: Path) -> None:
    record = {"command": command, "params": _jsonable(params)}
    tio.write_json(out / "config.json", record, schema=_schema("run_config.json"))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def _outdir(params: dict) -> Path:
    out = Path(params["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _resolve_b_s(params: dict) -> tuple:
    kind = params["dist"]
    b = params["b"] if params["b"] is not None else DEFAULT_B[kind]
    if len(b) != params["k"] + 1:
        raise ValueError(f"--b needs K+1 = {params['k'] + 1} values")
    if params.get("t") is not None:
        b = interpolated_means(b, params["t"], DEFAULT_CENTER[kind])
    s = None
    if kind == "gaussian":
        s = params["s"] if params["s"] is not None else DEFAULT_S
        if len(s) != params["k"] + 1:
            raise ValueError(f"--s needs K+1 = {params['k'] + 1} values")
    return tuple(b), (tuple(s) if s is not None else None)


def _schedule(params: dict) -> CoolingSchedule:
    base = geometric(rate=params["cooling_rate"], threshold=params["sa_threshold"])
    if params.get("greedy"):
        return greedy(base.n_steps())
    return base


def _localizer(params: dict, entropy: str) -> LocalizerConfig:
    return LocalizerConfig(
        entropy=entropy,
        cooling=_schedule(params),
        restarts=params["restarts"],
        l1=params["l1"],
        l2=params["l2"],
        seed=params["seed"],
        jobs=params["jobs"],
    )


def _require_entropy(params: dict) -> str:
    # no auto-detection on external data: the family must be explicit
    if not params.get("entropy"):
        raise ValueError("--entropy is required (gaussian, bernoulli, or poisson)")
    return params["entropy"]


def cmd_generate(params: dict) -> int:
    out = _outdir(params)
    b, s = _resolve_b_s(params)
    spec = GeneratorSpec(
        kind=params["dist"], b=b, s=s,
        layout=LayoutSpec(params["k"], params["n"], params["p"]),
        seed=params["seed"],
    )
    a, g = generate(spec)
    _persist_config("generate", params, out)
    tio.write_matrix_csv(out / "matrix.csv", a)
    tio.write_assignment_csv(out / "assignment.csv", g)
    tio.write_json(out / "spec.json", spec.to_dict(), schema=_schema("generator_spec.json"))
    print(f"wrote matrix.csv assignment.csv spec.json to {out}")
    return 0


def cmd_localize(params: dict) -> int:
    out = _outdir(params)
    entropy = _require_entropy(params)
    a = tio.read_matrix_csv(params["matrix"])
    cfg = _localizer(params, entropy)
    k0 = params["k0"]
    results = []
    best, best_idx = None, 0
    from .localize import _run_one, compress, entropy_fn  # single compression, shared

    l1 = min(2**k0, a.n) if cfg.l1 is None else min(cfg.l1, a.n)
    l2 = min(2**k0, a.p) if cfg.l2 is None else min(cfg.l2, a.p)
    cm = compress(a, l1, l2)
    for r in range(cfg.restarts):
        res = _run_one(
            cm, k0, entropy_fn(entropy), cfg.cooling,
            np.random.SeedSequence([cfg.seed, k0, r]),
            record_objective=params.get("greedy", False),
        )
        results.append(res)
        if best is None or res.objective > best.objective:
            best, best_idx = res, r
    if params.get("greedy"):
        trace = best.objective_trace
        drops = sum(1 for x, y in zip(trace, trace[1:]) if y < x - 1e-12)
        if drops:
            raise RuntimeError("greedy objective decreased; annealing state corrupt")
    _persist_config("localize", params, out)
    tio.write_assignment_csv(out / "assignment.csv", best.assignment)
    summary = {
        "F": best.objective,
        "accepted_moves": best.accepted_moves,
        "steps": best.steps,
        "noops": best.noops,
        "best_restart": best_idx,
        "k0": k0,
        "restarts": [
            {"restart": r, "F": res.objective,
             "accepted_moves": res.accepted_moves, "steps": res.steps}
            for r, res in enumerate(results)
        ],
    }
    tio.write_json(out / "summary.json", summary, schema=_schema("localize_summary.json"))
    tio.write_json(out / "restarts.json", {"restarts": summary["restarts"]})
    print(f"best restart {best_idx}: F = {best.objective:.6f}")
    return 0


def cmd_test(params: dict) -> int:
    out = _outdir(params)
    a = tio.read_matrix_csv(params["matrix"])
    g = tio.read_assignment_csv(params["assignment"])
    outcome = run_test(a, g, params["alpha"], std_floor=params["std_floor"])
    stats = compute_group_stats(a, g, std_floor=params["std_floor"])
    _persist_config("test", params, out)
    doc = outcome.to_dict()
    doc["group_stats"] = tio.group_stats_dict(stats)
    tio.write_json(out / "outcome.json", doc, schema=_schema("outcome.json"))
    # sidecar next to the assignment, mirroring the on-disk format contract
    tio.write_json(out / "group_stats.json", tio.group_stats_dict(stats))
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def cmd_select_k(params: dict) -> int:
    out = _outdir(params)
    entropy = _require_entropy(params)
    a = tio.read_matrix_csv(params["matrix"])
    cfg = _localizer(params, entropy)
    _persist_config("select-k", params, out)
    base = {"alpha": params["alpha"], "k_max": params["k_max"]}
    try:
        result = select_k(a, params["alpha"], params["k_max"], localizer=cfg,
                          std_floor=params["std_floor"])
    except NotAcceptedError as exc:
        report = dict(base, accepted=False, k_hat=None,
                      trace=[s.to_dict() for s in exc.trace])
        tio.write_json(out / "report.json", report, schema=_schema("select_report.json"))
        print(json.dumps(report, indent=2, sort_keys=True))
        return 3
    report = dict(base, accepted=True, k_hat=result.k_hat,
                  trace=[s.to_dict() for s in result.trace])
    tio.write_json(out / "report.json", report, schema=_schema("select_report.json"))
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def cmd_calibrate(params: dict) -> int:
    out = _outdir(params)
    b, s = _resolve_b_s(params)
    localizer = None
    if not params["oracle_assignment"]:
        localizer = _localizer(dict(params, l1=None, l2=None), params["dist"])
    _persist_config("calibrate", params, out)
    alphas = list(params["alphas"])
    long_rows = ["n,p,alpha,tail"]
    trial_rows = ["n,p,trial,T"]
    summaries = []
    for n, p in params["sizes"]:
        ens = null_ensemble(
            params["dist"], params["k"], n, p, params["trials"],
            seed=params["seed"], b=b, s=s,
            oracle_assignment=params["oracle_assignment"],
            localizer=localizer, jobs=params["jobs"],
        )
        tails = tail_probabilities(ens, alphas)
        d, dsr = ks_statistic(ens)
        summaries.append({
            "n": n, "p": p, "alphas": alphas, "tails": tails,
            "D": d, "D_sqrt_r": dsr, "r": int(ens.t_values.size),
            "errors": [list(e) for e in ens.errors],
        })
        for alpha, tail in zip(alphas, tails):
            long_rows.append(f"{n},{p},{alpha!r},{tail!r}")
        for j, t in enumerate(ens.t_values):
            trial_rows.append(f"{n},{p},{j},{float(t)!r}")
    schema = _schema("calibrate_summary.json")
    if len(summaries) == 1:
        tio.write_json(out / "summary.json", summaries[0], schema=schema)
    else:
        for doc in summaries:
            tio.write_json(out / f"summary_{doc['n']}x{doc['p']}.json", doc, schema=schema)
    (out / "tails_long.csv").write_text("\n".join(long_rows) + "\n", encoding="utf-8")
    (out / "trials.csv").write_text("\n".join(trial_rows) + "\n", encoding="utf-8")
    for doc in summaries:
        print(f"{doc['n']}x{doc['p']}: tails {doc['tails']}  D*sqrt(r) {doc['D_sqrt_r']:.3f}")
    return 0


def cmd_growth_check(params: dict) -> int:
    out = _outdir(params)
    b, s = _resolve_b_s(params)
    localizer = _localizer(dict(params, l1=None, l2=None), params["dist"])
    _persist_config("growth-check", params, out)
    rows = ["n,p,k0,mean_ratio"]
    points_doc = []
    for k0 in params["k0s"]:
        points = growth_check(
            params["sizes"], params["k"], k0, params["dist"], params["trials"],
            seed=params["seed"], b=b, s=s, localizer=localizer, jobs=params["jobs"],
        )
        for pt in points:
            rows.append(f"{pt.n},{pt.p},{pt.k0},{pt.mean_ratio!r}")
            points_doc.append({"n": pt.n, "p": pt.p, "k0": pt.k0,
                               "mean_ratio": pt.mean_ratio})
            print(f"k0={pt.k0} {pt.n}x{pt.p}: mean T/n^(5/3) = {pt.mean_ratio:.4f}")
    (out / "growth.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    tio.write_json(out / "summary.json", {"points": points_doc},
                   schema=_schema("growth_summary.json"))
    return 0


_COMMANDS = {
    "generate": cmd_generate,
    "localize": cmd_localize,
    "test": cmd_test,
    "select-k": cmd_select_k,
    "calibrate": cmd_calibrate,
    "growth-check": cmd_growth_check,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        params = resolve_config(args.command, args)
        return _COMMANDS[args.command](params)
    except NotAcceptedError as exc:
        _print_error(exc)
        return 3
    except NoConvergenceError as exc:
        _print_error(exc)
        return 4
    except BiclustError as exc:
        _print_error(exc)
        return 2
    except (ValueError, OSError) as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
              file=sys.stderr)
        return 2


def _print_error(exc: BiclustError) -> None:
    print(json.dumps({"error": exc.payload()}), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
