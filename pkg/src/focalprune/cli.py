"""Command-line front end: ingest, score, prune, evaluate, simulate, generate.

Exit codes: 0 on success, 1 on flag/parameter validation errors, 2 on data
errors (unreadable or malformed inputs).  Reports land in --out-dir; every
JSON report embeds the resolved configuration and the dataset's SHA-256.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations
from pathlib import Path

import numpy as np

from .dataset import (
    DataFormatError,
    PredictionDataset,
    count_teams,
    enumerate_teams,
    load_predictions,
    member_accuracies,
    negative_sample_sets,
    team_label,
    write_predictions,
)
from .diversity import BASELINE_METRICS, baseline_score_table
from .evaluation import (
    VOTING_METHODS,
    brute_force_oracle,
    ensemble_accuracy,
    prune_quality,
)
from .focal import FOCAL_METRICS, compute_focal_table
from .pruning import (
    DEFAULT_PRUNE_FRACTION,
    consensus_vote,
    default_target_size,
    hq_prune,
    mean_threshold_prune,
)
from .report import (
    RunConfig,
    dataset_sha256,
    quality_payload,
    resolve_threads,
    selection_payload,
    team_entry,
    timing_rows,
    write_csv,
    write_json,
)
from .simulation import (
    CorrelatedErrorSpec,
    SyntheticSpec,
    generate_synthetic,
    simulate_correlated_errors,
)

ALL_METRICS = BASELINE_METRICS + FOCAL_METRICS


class CliError(ValueError):
    """Flag/parameter validation failure (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we map to exit 1
        raise CliError(f"{message} (run '{self.prog} --help' for usage)")


def _parse_metrics(raw: str, allowed=ALL_METRICS) -> tuple[str, ...]:
    metrics = tuple(dict.fromkeys(m.strip().lower() for m in raw.split(",") if m.strip()))
    if not metrics:
        raise CliError("no metrics given")
    for m in metrics:
        if m not in allowed:
            raise CliError(f"unknown metric {m!r}; choose from {', '.join(allowed)}")
    return metrics


def _parse_sizes(raw: str) -> tuple[int, int]:
    try:
        if ":" in raw:
            lo, hi = raw.split(":", 1)
            return int(lo), int(hi)
        value = int(raw)
        return value, value
    except ValueError:
        raise CliError(f"bad size range {raw!r}; use LO:HI or a single size") from None


def _parse_float_list(raw: str, flag: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in raw.split(",") if v.strip())
    except ValueError:
        raise CliError(f"bad value in {flag}: {raw!r}") from None
    if not values:
        raise CliError(f"{flag} needs at least one value")
    return values


def _parse_int_list(raw: str, flag: str) -> tuple[int, ...]:
    try:
        values = tuple(int(v) for v in raw.split(",") if v.strip())
    except ValueError:
        raise CliError(f"bad value in {flag}: {raw!r}") from None
    if not values:
        raise CliError(f"{flag} needs at least one value")
    return values


def _parse_accuracies(raw: str, num_models: int) -> tuple[float, ...]:
    if ":" in raw:
        lo_s, hi_s = raw.split(":", 1)
        try:
            lo, hi = float(lo_s), float(hi_s)
        except ValueError:
            raise CliError(f"bad accuracy range {raw!r}") from None
        return tuple(float(a) for a in np.linspace(lo, hi, num_models))
    values = _parse_float_list(raw, "--accuracies")
    if len(values) == 1:
        return values * num_models
    if len(values) != num_models:
        raise CliError(f"--accuracies needs 1 or {num_models} values, got {len(values)}")
    return values


def _load_dataset(args) -> PredictionDataset:
    return load_predictions(args.data, getattr(args, "confidence_dir", None))


def _base_payload(config: RunConfig, data_path=None) -> dict:
    payload = {"config": config.as_dict()}
    if data_path is not None:
        payload["dataset_sha256"] = dataset_sha256(data_path)
    return payload


def _team_accuracies(ds, teams, method):
    return {team: ensemble_accuracy(ds, team, method) for team in teams}


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_ingest(args) -> int:
    ds = _load_dataset(args)
    accs = member_accuracies(ds)
    config = RunConfig(
        subcommand="ingest", dataset=args.data, confidence_dir=args.confidence_dir,
        output_dir=args.out_dir,
    )
    payload = _base_payload(config, args.data)
    payload["dataset"] = {
        "num_models": ds.num_models,
        "num_samples": ds.num_samples,
        "num_classes": ds.num_classes,
        "has_confidences": ds.confidences is not None,
        "models": [
            {"index": m, "name": ds.model_names[m], "accuracy": float(accs[m])}
            for m in range(ds.num_models)
        ],
    }
    out = write_json(payload, Path(args.out_dir) / "ingest_report.json")
    print(f"dataset ok: M={ds.num_models} N={ds.num_samples} C={ds.num_classes}")
    print(f"wrote {out}")
    if args.normalize:
        norm = Path(args.out_dir) / "data_normalized.csv"
        write_predictions(ds, norm)
        print(f"wrote {norm}")
    return 0


def _cmd_score(args) -> int:
    ds = _load_dataset(args)
    metrics = _parse_metrics(args.metrics)
    sizes = _parse_sizes(args.sizes) if args.sizes else (2, ds.num_models - 1)
    threads = resolve_threads(args.threads)
    config = RunConfig(
        subcommand="score", dataset=args.data, confidence_dir=args.confidence_dir,
        metrics=metrics, seed=args.seed, output_dir=args.out_dir, format=args.format,
        threads=threads, neg_sample_size=args.neg_sample_size,
        extra={"sizes": list(sizes)},
    )
    teams = list(enumerate_teams(ds.num_models, sizes, allow_large=args.allow_large))
    by_size: dict[int, list] = {}
    for team in teams:
        by_size.setdefault(len(team), []).append(team)
    neg = negative_sample_sets(ds, args.neg_sample_size, args.seed)

    out_dir = Path(args.out_dir)
    payload = _base_payload(config, args.data)
    payload["tables"] = {}
    focal_rows = []
    baseline_rows = []
    for metric in metrics:
        if metric in FOCAL_METRICS:
            table = compute_focal_table(metric, ds, by_size, neg_sets=neg)
            focal_rows.extend(table.to_rows())
            entries = [
                team_entry(t, ds.num_models, score=table.scores[t], flags=table.flags[t])
                for t in sorted(table.scores)
            ]
        else:
            scores = baseline_score_table(metric, ds.correctness, teams)
            baseline_rows.extend(
                (metric, team_label(t, ds.num_models), scores[t]) for t in sorted(scores)
            )
            entries = [
                team_entry(t, ds.num_models, score=scores[t]) for t in sorted(scores)
            ]
        payload["tables"][metric] = entries

    if focal_rows:
        out = write_csv(out_dir / "focal_scores.csv",
                        ["metric", "team", "fq", "degenerate_flags"], focal_rows)
        print(f"wrote {out}")
    if baseline_rows:
        out = write_csv(out_dir / "baseline_scores.csv",
                        ["metric", "team", "score"], baseline_rows)
        print(f"wrote {out}")
    if args.format == "json":
        out = write_json(payload, out_dir / "score_report.json")
        print(f"wrote {out}")
    return 0


def _cmd_prune(args) -> int:
    ds = _load_dataset(args)
    metrics = _parse_metrics(args.metrics, allowed=FOCAL_METRICS)
    target = args.target_size if args.target_size else default_target_size(ds.num_models)
    threads = resolve_threads(args.threads)
    config = RunConfig(
        subcommand="prune", dataset=args.data, confidence_dir=args.confidence_dir,
        metrics=metrics, beta=args.beta, target_size=target,
        consensus_quorum=args.consensus, voting=args.voting, seed=args.seed,
        output_dir=args.out_dir, threads=threads,
        neg_sample_size=args.neg_sample_size, scale_over_full=args.scale_over_full,
    )
    neg = negative_sample_sets(ds, args.neg_sample_size, args.seed)

    selections = []
    for metric in metrics:
        selections.append(hq_prune(
            metric, ds, target, args.beta,
            scale_over_full=args.scale_over_full, neg_sets=neg,
        ))

    scored_teams = set()
    for sel in selections:
        scored_teams.update(sel.scores_by_size.get(target, {}))
    accuracies = _team_accuracies(ds, sorted(scored_teams), args.voting)

    payload = _base_payload(config, args.data)
    payload["accuracy_method"] = args.voting
    payload["metrics"] = {
        sel.metric: selection_payload(sel, ds.num_models, accuracies) for sel in selections
    }
    if len(selections) >= args.consensus:
        teams = consensus_vote(selections, args.consensus)
        payload["consensus"] = {
            "quorum": args.consensus,
            "teams": [team_entry(t, ds.num_models, accuracy=accuracies.get(t)) for t in teams],
        }
    else:
        payload["consensus"] = None
        print(f"note: consensus skipped ({len(selections)} selections < quorum {args.consensus})")

    out_dir = Path(args.out_dir)
    out = write_json(payload, out_dir / "prune_report.json")
    print(f"wrote {out}")
    out = write_csv(
        out_dir / "prune_timing.csv",
        ["metric", "size", "scored", "pruned", "skipped", "seconds"],
        timing_rows(selections),
    )
    print(f"wrote {out}")

    if not args.no_figures:
        from .figures import pruning_scatter

        reference = ensemble_accuracy(ds, tuple(range(ds.num_models)), args.voting)
        for sel in selections:
            scores = sel.scores_by_size.get(target, {})
            chosen = set(sel.selected)
            sel_pts = [(scores[t], accuracies[t]) for t in sorted(chosen)]
            cut_pts = [(scores[t], accuracies[t]) for t in sorted(set(scores) - chosen)]
            fig = pruning_scatter(
                out_dir / "figures" / f"prune_{sel.metric}_s{target}.png",
                sel_pts, cut_pts, reference_accuracy=reference,
                title=f"{sel.metric.upper()} hierarchical pruning (S={target})",
            )
            print(f"wrote {fig}")
    for sel in selections:
        print(f"{sel.metric}: selected {len(sel.selected)} of {count_teams(ds.num_models, (target, target))} "
              f"size-{target} teams")
    return 0


def _cmd_prune_baseline(args) -> int:
    ds = _load_dataset(args)
    metrics = _parse_metrics(args.metrics)
    threads = resolve_threads(args.threads)
    config = RunConfig(
        subcommand="prune-baseline", dataset=args.data, confidence_dir=args.confidence_dir,
        metrics=metrics, voting=args.voting, seed=args.seed,
        output_dir=args.out_dir, threads=threads,
    )
    teams = list(enumerate_teams(ds.num_models, allow_large=args.allow_large))
    by_size: dict[int, list] = {}
    for team in teams:
        by_size.setdefault(len(team), []).append(team)
    oracle = brute_force_oracle(ds, args.voting, allow_large=args.allow_large)

    payload = _base_payload(config, args.data)
    payload["reference_accuracy"] = oracle.reference_accuracy
    payload["metrics"] = {}
    out_dir = Path(args.out_dir)
    for metric in metrics:
        if metric in FOCAL_METRICS:
            table = compute_focal_table(metric, ds, by_size)
            scores = table.scores
        else:
            scores = baseline_score_table(metric, ds.correctness, teams)
        result = mean_threshold_prune(scores)
        quality = prune_quality(result.selected, oracle, scope=None)
        payload["metrics"][metric] = {
            "threshold": result.threshold,
            "selected_count": len(result.selected),
            "candidate_count": len(scores),
            "quality": quality_payload(quality, oracle.reference_accuracy),
            "selected": [
                team_entry(t, ds.num_models, score=scores[t],
                           accuracy=oracle.accuracies[t])
                for t in result.selected
            ],
        }
        if not args.no_figures:
            from .figures import score_accuracy_scatter

            points = [(scores[t], oracle.accuracies[t], len(t)) for t in sorted(scores)]
            fig = score_accuracy_scatter(
                out_dir / "figures" / f"mean_threshold_{metric}.png",
                points, threshold=result.threshold,
                reference_accuracy=oracle.reference_accuracy,
                title=f"{metric.upper()} mean-threshold pruning",
                xlabel=f"{metric.upper()} score",
            )
            print(f"wrote {fig}")
        print(f"{metric}: threshold {result.threshold:.6f}, "
              f"selected {len(result.selected)} of {len(scores)}")

    out = write_json(payload, out_dir / "prune_baseline_report.json")
    print(f"wrote {out}")
    return 0


def _read_selection_file(path) -> tuple[dict[str, list[tuple[int, ...]]], int | None]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DataFormatError(path, 0, "selection file not found") from None
    except json.JSONDecodeError as exc:
        raise DataFormatError(path, exc.lineno, f"invalid JSON: {exc.msg}") from None
    selections: dict[str, list[tuple[int, ...]]] = {}
    target = None
    if isinstance(data.get("metrics"), dict):
        for name, body in data["metrics"].items():
            entries = body.get("selected", [])
            selections[name] = [tuple(e["members"]) for e in entries]
            target = body.get("target_size", target)
    if isinstance(data.get("consensus"), dict):
        selections["consensus"] = [tuple(e["members"]) for e in data["consensus"].get("teams", [])]
    if not selections and isinstance(data.get("selections"), dict):
        selections = {name: [tuple(t) for t in teams]
                      for name, teams in data["selections"].items()}
        target = data.get("target_size")
    if not selections:
        raise DataFormatError(path, 0, "no selections found in file")
    return selections, target


def _cmd_evaluate(args) -> int:
    ds = _load_dataset(args)
    selections, target = _read_selection_file(args.selection)
    threads = resolve_threads(args.threads)
    scope = None if args.scope_all else target
    config = RunConfig(
        subcommand="evaluate", dataset=args.data, confidence_dir=args.confidence_dir,
        metrics=tuple(selections), voting=args.voting, seed=args.seed,
        output_dir=args.out_dir, format=args.format, threads=threads,
        target_size=target,
        extra={"selection_file": str(args.selection), "scope": "all" if scope is None else scope},
    )
    payload = _base_payload(config, args.data)
    out_dir = Path(args.out_dir)

    if args.oracle:
        oracle = brute_force_oracle(ds, args.voting, allow_large=args.allow_large)
        payload["reference_accuracy"] = oracle.reference_accuracy
        payload["quality"] = {}
        rows = []
        for name in sorted(selections):
            quality = prune_quality(selections[name], oracle, scope=scope)
            payload["quality"][name] = quality_payload(quality, oracle.reference_accuracy)
            acc_lo, acc_hi = quality.accuracy_range or (float("nan"), float("nan"))
            cost_lo, cost_hi = quality.cost_reduction_range or (float("nan"), float("nan"))
            rows.append((name, quality.precision, quality.recall,
                         acc_lo, acc_hi, cost_lo, cost_hi, quality.selected_count))
        if args.format == "csv":
            out = write_csv(out_dir / "evaluate_quality.csv",
                            ["selection", "precision", "recall", "acc_min", "acc_max",
                             "cost_reduction_min", "cost_reduction_max", "selected_count"],
                            rows)
            print(f"wrote {out}")
        for name in sorted(selections):
            q = payload["quality"][name]
            print(f"{name}: precision {q['precision']:.4f} recall {q['recall']:.4f}")
    else:
        payload["selections"] = {}
        for name in sorted(selections):
            teams = selections[name]
            accs = _team_accuracies(ds, teams, args.voting)
            payload["selections"][name] = [
                team_entry(t, ds.num_models, accuracy=accs[t]) for t in sorted(teams)
            ]

    if args.dump_scatter:
        oracle = brute_force_oracle(ds, args.voting, allow_large=args.allow_large)
        by_size: dict[int, list] = {}
        for team in oracle.accuracies:
            by_size.setdefault(len(team), []).append(team)
        metrics = _parse_metrics(args.scatter_metrics, allowed=FOCAL_METRICS)
        from .figures import score_accuracy_scatter

        for metric in metrics:
            table = compute_focal_table(metric, ds, by_size)
            rows = [
                (team_label(t, ds.num_models), table.scores[t],
                 oracle.accuracies[t], len(t))
                for t in sorted(table.scores)
            ]
            out = write_csv(out_dir / f"scatter_{metric}.csv",
                            ["team", "score", "accuracy", "size"],
                            [r for r in rows])
            print(f"wrote {out}")
            fig = score_accuracy_scatter(
                out_dir / "figures" / f"scatter_{metric}.png",
                [(r[1], r[2], r[3]) for r in rows],
                reference_accuracy=oracle.reference_accuracy,
                title=f"{metric.upper()} score vs accuracy",
                xlabel=f"{metric.upper()} focal diversity score",
            )
            print(f"wrote {fig}")

    out = write_json(payload, out_dir / "evaluate_report.json")
    print(f"wrote {out}")
    return 0


def _cmd_simulate(args) -> int:
    sizes = _parse_int_list(args.team_sizes, "--team-size") if args.team_sizes else (args.team_size,)
    deltas = _parse_float_list(args.deltas, "--delta") if args.deltas else (args.delta,)
    if any(s < 1 for s in sizes):
        raise CliError("--team-size must be >= 1")
    config = RunConfig(
        subcommand="simulate", seed=args.seed, output_dir=args.out_dir,
        format=args.format,
        extra={"team_sizes": list(sizes), "deltas": list(deltas),
               "trials": args.trials, "base_variance": args.base_variance},
    )
    rows = []
    for size in sizes:
        for delta in deltas:
            spec = CorrelatedErrorSpec(
                team_size=size, delta=delta, trials=args.trials,
                seed=args.seed, base_variance=args.base_variance,
            )
            result = simulate_correlated_errors(spec)
            rows.append({
                "team_size": size, "delta": delta,
                "predicted": result.predicted,
                "empirical": result.empirical,
                "stderr": result.stderr,
            })
    out_dir = Path(args.out_dir)
    out = write_csv(out_dir / "simulate_grid.csv",
                    ["team_size", "delta", "predicted", "empirical", "stderr"],
                    [(r["team_size"], r["delta"], r["predicted"], r["empirical"], r["stderr"])
                     for r in rows])
    print(f"wrote {out}")
    payload = _base_payload(config)
    payload["grid"] = rows
    out = write_json(payload, out_dir / "simulate_report.json")
    print(f"wrote {out}")
    if not args.no_figures:
        from .figures import simulation_curves

        fig = simulation_curves(out_dir / "figures" / "simulate_ratio.png", rows,
                                title="Added-error ratio: predicted vs simulated")
        print(f"wrote {fig}")
    for r in rows:
        print(f"S={r['team_size']} delta={r['delta']}: predicted {r['predicted']:.6f} "
              f"empirical {r['empirical']:.6f} (stderr {r['stderr']:.2e})")
    return 0


def _cmd_generate(args) -> int:
    accuracies = _parse_accuracies(args.accuracies, args.models)
    spec = SyntheticSpec(
        num_models=args.models, num_samples=args.samples, num_classes=args.classes,
        accuracies=accuracies, overlap=args.overlap, seed=args.seed,
    )
    ds = generate_synthetic(spec)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_predictions(ds, out)
    accs = member_accuracies(ds)
    print(f"wrote {out} (M={ds.num_models} N={ds.num_samples} C={ds.num_classes}, "
          f"empirical accuracy {accs.min():.4f}..{accs.max():.4f})")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(sub, *, data=True, voting=False, fmt=False):
    if data:
        sub.add_argument("--data", required=True, help="prediction CSV (wide form)")
        sub.add_argument("--confidence-dir", default=None,
                         help="directory of per-model confidence CSVs")
    sub.add_argument("--out-dir", default="reports", help="report output directory")
    sub.add_argument("--seed", type=int, default=0, help="RNG seed")
    sub.add_argument("--threads", type=int, default=None,
                     help="worker cap (default: FOCALPRUNE_THREADS or 1)")
    if voting:
        sub.add_argument("--voting", choices=VOTING_METHODS, default="plurality",
                         help="ensemble consensus method")
    if fmt:
        sub.add_argument("--format", choices=("json", "csv"), default="json",
                         help="main report format")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="focalprune",
                     description="Focal-diversity ensemble pruning over prediction logs")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("ingest", help="validate a prediction log", parents=[], add_help=True)
    _add_common(p)
    p.add_argument("--normalize", action="store_true", help="write the canonical CSV form")
    p.set_defaults(handler=_cmd_ingest)

    p = subs.add_parser("score", help="export diversity score tables")
    _add_common(p, fmt=True)
    p.add_argument("--metrics", default=",".join(FOCAL_METRICS),
                   help="comma-separated metric ids (ck,bd,kw,gd,f-ck,f-bd,f-kw,f-gd)")
    p.add_argument("--sizes", default=None, help="team size range LO:HI (default 2:M-1)")
    p.add_argument("--neg-sample-size", type=int, default=None,
                   help="subsample each negative set to this size")
    p.add_argument("--allow-large", action="store_true", help="override the M>25 guard")
    p.set_defaults(handler=_cmd_score)

    p = subs.add_parser("prune", help="hierarchical pruning with consensus")
    _add_common(p, voting=True)
    p.add_argument("--metrics", default=",".join(FOCAL_METRICS),
                   help="comma-separated focal metric ids")
    p.add_argument("--beta", type=float, default=DEFAULT_PRUNE_FRACTION,
                   help="fraction pruned per size level")
    p.add_argument("--target-size", type=int, default=None,
                   help="desired team size (default floor(M/2))")
    p.add_argument("--consensus", type=int, default=3,
                   help="metrics required to keep a team")
    p.add_argument("--neg-sample-size", type=int, default=None,
                   help="subsample each negative set to this size")
    p.add_argument("--scale-over-full", action="store_true",
                   help="min-max scale over all size-S teams, not just survivors")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    p.set_defaults(handler=_cmd_prune)

    p = subs.add_parser("prune-baseline", help="mean-threshold pruning over all teams")
    _add_common(p, voting=True)
    p.add_argument("--metrics", default="gd,bd",
                   help="comma-separated metric ids (baseline or focal)")
    p.add_argument("--allow-large", action="store_true", help="override enumeration guards")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    p.set_defaults(handler=_cmd_prune_baseline)

    p = subs.add_parser("evaluate", help="precision/recall/cost of a selection")
    _add_common(p, voting=True, fmt=True)
    p.add_argument("--selection", required=True, help="selection JSON (prune report)")
    p.add_argument("--oracle", action="store_true",
                   help="run the exhaustive oracle and report quality")
    p.add_argument("--scope-all", action="store_true",
                   help="recall over good teams of every size, not just the target size")
    p.add_argument("--dump-scatter", action="store_true",
                   help="emit (score, accuracy, size) triples per team")
    p.add_argument("--scatter-metrics", default="f-gd",
                   help="focal metrics for --dump-scatter")
    p.add_argument("--allow-large", action="store_true", help="override the oracle guard")
    p.set_defaults(handler=_cmd_evaluate)

    p = subs.add_parser("simulate", help="Monte-Carlo added-error ratio check")
    _add_common(p, data=False, fmt=True)
    p.add_argument("--team-size", type=int, default=5, help="ensemble size S")
    p.add_argument("--team-sizes", default=None, help="comma-separated sizes (grid mode)")
    p.add_argument("--delta", type=float, default=0.0, help="pairwise error correlation")
    p.add_argument("--deltas", default=None, help="comma-separated deltas (grid mode)")
    p.add_argument("--trials", type=int, default=100_000, help="Monte-Carlo trials")
    p.add_argument("--base-variance", type=float, default=1.0, help="member error variance")
    p.add_argument("--no-figures", action="store_true", help="skip figure rendering")
    p.set_defaults(handler=_cmd_simulate)

    p = subs.add_parser("generate", help="write a synthetic prediction log")
    _add_common(p, data=False)
    p.add_argument("--models", type=int, required=True, help="number of member models M")
    p.add_argument("--samples", type=int, required=True, help="number of samples N")
    p.add_argument("--classes", type=int, default=10, help="number of classes C")
    p.add_argument("--accuracies", default="0.9:0.96",
                   help="per-model accuracies: comma list, single value, or LO:HI spread")
    p.add_argument("--overlap", type=float, default=0.0,
                   help="pairwise error-overlap parameter in [0, 1]")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(handler=_cmd_generate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except DataFormatError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        print("hint: run 'focalprune ingest --data <file>' to pinpoint format problems",
              file=sys.stderr)
        return 2
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
