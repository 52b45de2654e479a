"""Command-line pipeline: synth -> ingest -> label-aps -> build-corpus ->
features -> train/eval-intent and predict/eval-predict/sensitivity.

Every subcommand reads/writes declared file formats into --out, records a
run manifest (version, seed, flags, input digests), and returns exit code
0 on success, 1 on validation failure, 2 on I/O errors. Report commands
render a PNG figure next to their delimited output.
"""

from __future__ import annotations

import csv
import functools
import hashlib
import json
import logging
import os
import shutil
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from . import classify, ingest, kgraph, locpred, metrics, pipeline, plots, spatial, synth
from .features import (
    FEATURE_NAMES,
    feature_set_indices,
    read_features_csv,
    write_features_csv,
)
from .model import (
    Floorplan,
    IntentLabel,
    canonical_json,
    load_category_map,
    load_floorplan,
    save_floorplan,
    validate_deployment,
)

log = logging.getLogger(__name__)


def _digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_dir: Path, subcommand: str, flags: dict, inputs: dict) -> None:
    manifest = {
        "tool": "footfall",
        "version": __version__,
        "subcommand": subcommand,
        "flags": {k: v for k, v in sorted(flags.items())},
        "inputs": {str(p): _digest(p) for p in sorted(inputs.values()) if p},
    }
    (out_dir / "manifest.json").write_text(canonical_json(manifest) + "\n", encoding="utf-8")


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except FileNotFoundError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except OSError as exc:
            click.echo(f"i/o error: {exc}", err=True)
            sys.exit(2)
        except ValueError as exc:
            click.echo(f"invalid input: {exc}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
def main():
    """Cyber-physical visitor analytics for indoor Wi-Fi deployments."""
    logging.basicConfig(level=os.environ.get("LOG_LEVEL", "WARNING"))


# ---------------------------------------------------------------------------


@main.command("synth")
@click.option("--out", "out_path", required=True, help="output directory")
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--n", "n_trajectories", type=int, default=176, show_default=True)
@click.option("--aps", type=int, default=70, show_default=True)
@click.option("--shops", type=int, default=200, show_default=True)
@click.option("--floors", type=int, default=1, show_default=True)
@click.option("--intentful-frac", type=float, default=48 / 176, show_default=True)
@click.option("--complete-frac", type=float, default=1.0, show_default=True)
@click.option("--short-frac", type=float, default=0.3, show_default=True)
@click.option("--kg", "kg_path", default=None, help="triples TSV (default: bundled)")
@click.option("--category-map", "map_path", default=None, help="category map JSON (default: bundled)")
@_guard
def cmd_synth(out_path, seed, n_trajectories, aps, shops, floors, intentful_frac,
              complete_frac, short_frac, kg_path, map_path):
    """Generate a synthetic floorplan, KG snapshot, AL/QL logs, and labels."""
    out = _out_dir(out_path)
    kg_src = Path(kg_path) if kg_path else pipeline.bundled_path("mini_kg.tsv")
    map_src = Path(map_path) if map_path else pipeline.bundled_path("category_map.json")
    registry, category_map = load_category_map(map_src)
    store, kg_rejects = kgraph.load_triples(kg_src)
    if kg_rejects:
        raise ValueError(f"{len(kg_rejects)} malformed triples in {kg_src}")

    floorplan = synth.make_floorplan(
        seed, registry, category_map, n_aps=aps, n_shops=shops, n_floors=floors
    )
    mix = synth.default_mix(intentful_frac)
    result = synth.generate(
        seed,
        n_trajectories,
        floorplan,
        store,
        registry,
        category_map,
        persona_mix=mix,
        complete_frac=complete_frac,
        short_assoc_frac=short_frac,
    )

    save_floorplan(floorplan, out / "floorplan.json")
    shutil.copyfile(kg_src, out / "kg.tsv")
    shutil.copyfile(map_src, out / "category_map.json")
    shutil.copyfile(pipeline.bundled_path("store_names.json"), out / "store_names.json")
    shutil.copyfile(pipeline.bundled_path("crowd_keywords.json"), out / "crowd_keywords.json")
    result.write(out / "al.csv", out / "ql.csv", out / "labels.csv")

    meta = {
        "seed": seed,
        "n_trajectories": n_trajectories,
        "targets": {tid: result.targets[tid] for tid in sorted(result.targets)},
        "label_counts": {
            "IF": sum(1 for v in result.labels.values() if v is IntentLabel.INTENTFUL),
            "IL": sum(1 for v in result.labels.values() if v is IntentLabel.INTENTLESS),
        },
    }
    (out / "synth_meta.json").write_text(canonical_json(meta) + "\n", encoding="utf-8")
    _write_manifest(
        out,
        "synth",
        {
            "seed": seed, "n": n_trajectories, "aps": aps, "shops": shops,
            "floors": floors, "intentful_frac": intentful_frac,
            "complete_frac": complete_frac, "short_frac": short_frac,
        },
        {"kg": kg_src, "category_map": map_src},
    )
    click.echo(f"wrote {n_trajectories} visits to {out}")


@main.command("ingest")
@click.option("--al", "al_path", required=True)
@click.option("--ql", "ql_path", required=True)
@click.option("--floorplan", "floorplan_path", required=True)
@click.option("--out", "out_path", required=True)
@click.option("--dwell-threshold", type=float, default=600.0, show_default=True)
@click.option("--session-gap", type=float, default=1800.0, show_default=True)
@_guard
def cmd_ingest(al_path, ql_path, floorplan_path, out_path, dwell_threshold, session_gap):
    """Parse AL/QL logs into per-visit trajectories."""
    out = _out_dir(out_path)
    floorplan = load_floorplan(floorplan_path)
    report = validate_deployment(floorplan)
    if not report.valid:
        for v in report.violations:
            click.echo(f"floorplan violation [{v.kind}]: {v.message}", err=True)
        raise ValueError("floorplan failed validation")

    al = ingest.parse_association_log(al_path)
    ql = ingest.parse_query_log(ql_path)
    config = ingest.SessionizationConfig(
        dwell_threshold=dwell_threshold, session_gap=session_gap
    )
    sessions = ingest.sessionize(al.records, ql.records, config, floorplan.ap_ids())
    trajectories = [
        ingest.mark_complete(t, floorplan.entry_exit_aps) for t in sessions.trajectories
    ]

    payload = [t.to_dict() for t in trajectories]
    (out / "trajectories.json").write_text(canonical_json(payload) + "\n", encoding="utf-8")
    ingest.write_rejects(out / "rejects.jsonl", al.rejects + ql.rejects + sessions.rejects)
    _write_manifest(
        out,
        "ingest",
        {"dwell_threshold": dwell_threshold, "session_gap": session_gap},
        {"al": al_path, "ql": ql_path, "floorplan": floorplan_path},
    )
    n_complete = sum(t.complete for t in trajectories)
    click.echo(
        f"{len(trajectories)} trajectories ({n_complete} complete), "
        f"{len(al.rejects) + len(ql.rejects) + len(sessions.rejects)} rejects"
    )


def _load_trajectories(path) -> list:
    from .model import Trajectory

    with open(path, encoding="utf-8") as fh:
        return [Trajectory.from_dict(d) for d in json.load(fh)]


@main.command("cdf")
@click.option("--al", "al_path", required=True)
@click.option("--bin-width", type=float, default=600.0, show_default=True)
@click.option("--out", "out_path", required=True)
@_guard
def cmd_cdf(al_path, bin_width, out_path):
    """Association-duration CDF table plus figure."""
    out = _out_dir(out_path)
    al = ingest.parse_association_log(al_path)
    cdf = ingest.association_cdf(al.records, bin_width)
    with open(out / "cdf.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["duration_bound_s", "cumulative_fraction"])
        for bound, frac in cdf:
            w.writerow([int(bound), f"{frac:.6f}"])
    plots.plot_association_cdf(cdf, out / "cdf.png")
    _write_manifest(out, "cdf", {"bin_width": bin_width}, {"al": al_path})
    click.echo(f"{len(cdf)} CDF bins -> {out / 'cdf.csv'}")


@main.command("label-aps")
@click.option("--floorplan", "floorplan_path", required=True)
@click.option("--category-map", "map_path", required=True)
@click.option("--out", "out_path", required=True)
@_guard
def cmd_label_aps(floorplan_path, map_path, out_path):
    """Assign shops to AP cells and derive per-AP semantic labels."""
    out = _out_dir(out_path)
    floorplan = load_floorplan(floorplan_path)
    registry, category_map = load_category_map(map_path)
    report = validate_deployment(floorplan, set(category_map))
    if not report.valid:
        for v in report.violations:
            click.echo(f"floorplan violation [{v.kind}]: {v.message}", err=True)
        raise ValueError("floorplan failed validation")

    assign_report = spatial.voronoi_assign(floorplan)
    rectified = spatial.apply_rectification(
        assign_report.assignment,
        dict(floorplan.rectification_overrides),
        floorplan,
    )
    labels = spatial.label_aps(rectified, floorplan, category_map, registry)

    (out / "ap_labels.json").write_text(
        canonical_json(spatial.labels_to_dict(labels)) + "\n", encoding="utf-8"
    )
    summary = {
        "assignment": {s: rectified[s] for s in sorted(rectified)},
        "unassigned_shops": sorted(assign_report.unassigned),
        "mean_shops_per_cell": assign_report.mean_shops_per_cell,
        "overrides_applied": len(floorplan.rectification_overrides),
    }
    (out / "assignment_report.json").write_text(
        canonical_json(summary) + "\n", encoding="utf-8"
    )
    _write_manifest(out, "label-aps", {}, {"floorplan": floorplan_path, "category_map": map_path})
    click.echo(
        f"labeled {len(labels)} APs; mean shops/cell "
        f"{assign_report.mean_shops_per_cell:.2f}"
    )


@main.command("build-corpus")
@click.option("--kg", "kg_path", required=True)
@click.option("--category-map", "map_path", required=True)
@click.option("--lambda", "depth", type=int, default=5, show_default=True,
              help="category expansion depth")
@click.option("--out", "out_path", required=True)
@_guard
def cmd_build_corpus(kg_path, map_path, depth, out_path):
    """Expand every semantic category into its term document."""
    out = _out_dir(out_path)
    registry, _ = load_category_map(map_path)
    store, rejects = kgraph.load_triples(kg_path)
    if rejects:
        ingest.write_rejects(out / "kg_rejects.jsonl", rejects)
        click.echo(f"{len(rejects)} malformed triples skipped", err=True)
    corpus = kgraph.build_category_corpus(store, registry, depth)
    pipeline.save_corpus(out / "corpus.json", corpus)
    _write_manifest(out, "build-corpus", {"lambda": depth}, {"kg": kg_path, "category_map": map_path})
    sizes = ", ".join(f"{d.category}={sum(d.terms.values())}" for d in corpus[:3])
    click.echo(f"{len(corpus)} category documents ({sizes}, ...)")


def _build_engine(kg_path, corpus_path, ap_labels_path, query_hops):
    store, rejects = kgraph.load_triples(kg_path)
    if rejects:
        raise ValueError(f"{len(rejects)} malformed triples in {kg_path}")
    corpus = pipeline.load_corpus(corpus_path)
    from .model import CategoryRegistry

    registry = CategoryRegistry.from_roots({d.category: f"kg:{d.category}" for d in corpus})
    with open(ap_labels_path, encoding="utf-8") as fh:
        ap_labels = spatial.labels_from_dict(json.load(fh))
    return pipeline.ContextEngine.build(
        store, registry, ap_labels, corpus=corpus, query_hops=query_hops
    )


@main.command("features")
@click.option("--trajectories", "traj_path", required=True)
@click.option("--ap-labels", "labels_path", required=True)
@click.option("--corpus", "corpus_path", required=True)
@click.option("--kg", "kg_path", required=True)
@click.option("--labels", "intent_labels_path", default=None, help="labels CSV to join")
@click.option("--store-doc", "store_doc_path", default=None)
@click.option("--crowd-doc", "crowd_doc_path", default=None)
@click.option("--query-hops", type=int, default=2, show_default=True)
@click.option("--complete-only", is_flag=True, help="keep complete trajectories only")
@click.option("--out", "out_path", required=True)
@_guard
def cmd_features(traj_path, labels_path, corpus_path, kg_path, intent_labels_path,
                 store_doc_path, crowd_doc_path, query_hops, complete_only, out_path):
    """Extract F1..F43 feature vectors for every trajectory."""
    out = _out_dir(out_path)
    engine = _build_engine(kg_path, corpus_path, labels_path, query_hops)
    trajectories = _load_trajectories(traj_path)
    if complete_only:
        trajectories = [t for t in trajectories if t.complete]
    store_doc = pipeline.load_term_doc(store_doc_path) if store_doc_path else None
    crowd_doc = pipeline.load_term_doc(crowd_doc_path) if crowd_doc_path else None
    intent_labels = (
        pipeline.load_labels_csv(intent_labels_path) if intent_labels_path else {}
    )
    vectors = [
        engine.features(
            t, store_doc, crowd_doc, intent_labels.get(t.trajectory_id)
        )
        for t in sorted(trajectories, key=lambda t: t.trajectory_id)
    ]
    write_features_csv(out / "features.csv", vectors)
    _write_manifest(
        out,
        "features",
        {"query_hops": query_hops, "complete_only": complete_only},
        {
            "trajectories": traj_path, "ap_labels": labels_path,
            "corpus": corpus_path, "kg": kg_path,
            "labels": intent_labels_path, "store_doc": store_doc_path,
            "crowd_doc": crowd_doc_path,
        },
    )
    labeled = sum(1 for v in vectors if v.label is not None)
    click.echo(f"{len(vectors)} feature vectors ({labeled} labeled)")


def _labeled_matrix(features_path, feature_set):
    vectors = [fv for fv in read_features_csv(features_path) if fv.label is not None]
    if not vectors:
        raise ValueError("no labeled feature vectors in input")
    from .features import to_matrix

    x, y = to_matrix(vectors)
    idx = list(feature_set_indices(feature_set))
    names = [FEATURE_NAMES[i] for i in idx]
    return x[:, idx], y, names


@main.command("train-intent")
@click.option("--features", "features_path", required=True)
@click.option("--classifier", type=click.Choice(["dt", "nb", "dtnb"]), default="dtnb",
              show_default=True)
@click.option("--cv", default="loo", show_default=True, help="selection CV: loo or kfold:N")
@click.option("--bins", type=int, default=5, show_default=True)
@click.option("--feature-set", default="phy+cyb+cont", show_default=True)
@click.option("--out", "out_path", required=True)
@_guard
def cmd_train_intent(features_path, classifier, cv, bins, feature_set, out_path):
    """Train an intent classifier and serialize it."""
    out = _out_dir(out_path)
    x, y, names = _labeled_matrix(features_path, feature_set)
    if classifier == "dt":
        model = classify.train_dt(x, y, feature_names=names, bins=bins, cv=cv)
    elif classifier == "nb":
        model = classify.train_nb(x, y, feature_names=names, bins=bins)
    else:
        model = classify.train_dtnb(x, y, feature_names=names, bins=bins, cv=cv)
    classify.save_model(model, out / "model.json")
    _write_manifest(
        out,
        "train-intent",
        {"classifier": classifier, "cv": cv, "bins": bins, "feature_set": feature_set},
        {"features": features_path},
    )
    click.echo(f"trained {classifier} on {len(y)} rows -> {out / 'model.json'}")


@main.command("eval-intent")
@click.option("--features", "features_path", required=True)
@click.option("--classifier", type=click.Choice(["dt", "nb", "dtnb", "majority"]),
              default="dtnb", show_default=True)
@click.option("--cv", default="loo", show_default=True, help="selection CV: loo or kfold:N")
@click.option("--bins", type=int, default=5, show_default=True)
@click.option("--feature-set", default="phy+cyb+cont", show_default=True)
@click.option("--scheme", default="kfold:10", show_default=True,
              help="outer evaluation scheme: loo or kfold:N")
@click.option("--out", "out_path", required=True)
@_guard
def cmd_eval_intent(features_path, classifier, cv, bins, feature_set, scheme, out_path):
    """Cross-validated intent metrics (accuracy, precision, recall, F-score)."""
    out = _out_dir(out_path)
    x, y, _ = _labeled_matrix(features_path, feature_set)
    trainer = classify.make_trainer(classifier, bins=bins, cv=cv)
    report = classify.evaluate_classifier(trainer, x, y, scheme=scheme)
    payload = {
        "classifier": classifier,
        "feature_set": feature_set,
        "scheme": scheme,
        "accuracy": report.accuracy,
        "weighted": report.weighted,
        "per_class": report.per_class,
    }
    (out / "intent_metrics.json").write_text(canonical_json(payload) + "\n", encoding="utf-8")
    plots.plot_intent_metrics(
        {
            f"{classifier}/{feature_set}": {
                "accuracy": report.accuracy, **report.weighted,
            }
        },
        out / "intent_metrics.png",
    )
    _write_manifest(
        out,
        "eval-intent",
        {
            "classifier": classifier, "cv": cv, "bins": bins,
            "feature_set": feature_set, "scheme": scheme,
        },
        {"features": features_path},
    )
    click.echo(
        f"{classifier}/{feature_set}: accuracy {report.accuracy * 100:.2f}%, "
        f"weighted F {report.weighted['f_score']:.3f}"
    )


def _prediction_setup(traj_path, labels_path, corpus_path, kg_path, query_hops, max_test):
    engine = _build_engine(kg_path, corpus_path, labels_path, query_hops)
    trajectories = _load_trajectories(traj_path)
    ap_universe = sorted(engine.ap_labels)
    setup = pipeline.prepare_prediction(trajectories, ap_universe, max_test=max_test)
    return engine, setup


@main.command("predict")
@click.option("--trajectories", "traj_path", required=True)
@click.option("--ap-labels", "labels_path", required=True)
@click.option("--corpus", "corpus_path", required=True)
@click.option("--kg", "kg_path", required=True)
@click.option("--method", "methods", default="i-i,i-i-w", show_default=True,
              help="comma list of i-i, i-i-w, u-u")
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--k-neighbors", type=int, default=10, show_default=True)
@click.option("--max-test", type=int, default=None)
@click.option("--query-hops", type=int, default=2, show_default=True)
@click.option("--out", "out_path", required=True)
@_guard
def cmd_predict(traj_path, labels_path, corpus_path, kg_path, methods, k,
                k_neighbors, max_test, query_hops, out_path):
    """Partition test visits at their first query and rank unvisited APs."""
    out = _out_dir(out_path)
    engine, setup = _prediction_setup(
        traj_path, labels_path, corpus_path, kg_path, query_hops, max_test
    )
    method_list = [m.strip() for m in methods.split(",") if m.strip()]
    with open(out / "predictions.jsonl", "w", encoding="utf-8") as fh:
        for method in method_list:
            rows = pipeline.run_prediction(
                setup, method, k, engine=engine, k_neighbors=k_neighbors
            )
            for row in rows:
                fh.write(row.to_json() + "\n")
    popularity = setup.matrix.popularity()
    with open(out / "popularity.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["ap_id", "visits"])
        for ap in sorted(popularity):
            w.writerow([ap, popularity[ap]])
    _write_manifest(
        out,
        "predict",
        {
            "method": methods, "k": k, "k_neighbors": k_neighbors,
            "max_test": max_test, "query_hops": query_hops,
        },
        {
            "trajectories": traj_path, "ap_labels": labels_path,
            "corpus": corpus_path, "kg": kg_path,
        },
    )
    click.echo(
        f"{len(setup.cases)} test visits x {len(method_list)} methods "
        f"({setup.fallback_count} partition fallbacks)"
    )


@main.command("eval-predict")
@click.option("--predictions", "pred_path", required=True)
@click.option("--ks", default="1,5,10", show_default=True)
@click.option("--out", "out_path", required=True)
@_guard
def cmd_eval_predict(pred_path, ks, out_path):
    """Accuracy@k and MRR per prediction method."""
    out = _out_dir(out_path)
    k_values = [int(v) for v in ks.split(",")]
    by_method: dict[str, list[dict]] = {}
    with open(pred_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                row = json.loads(line)
                by_method.setdefault(row["method"], []).append(row)
    if not by_method:
        raise ValueError("no prediction rows in input")

    results = []
    mrr_by_method: dict[str, dict[int, float]] = {}
    for method in sorted(by_method):
        rows = by_method[method]
        predicted = [r["predicted"] for r in rows]
        actual = [set(r["actual"]) for r in rows]
        for k in k_values:
            acc = float(np.mean([metrics.accuracy_at_k(p, a, k) for p, a in zip(predicted, actual)]))
            rank_quality = metrics.mrr([p[:k] for p in predicted], actual)
            results.append(
                {
                    "method": method,
                    "k": k,
                    "accuracy_at_k": acc,
                    "mrr": rank_quality,
                    "sensitivity": [],
                }
            )
            mrr_by_method.setdefault(method, {})[k] = rank_quality

    (out / "prediction_metrics.json").write_text(
        canonical_json(results) + "\n", encoding="utf-8"
    )
    with open(out / "prediction_metrics.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["method", "k", "accuracy_at_k", "mrr"])
        for r in results:
            w.writerow([r["method"], r["k"], f"{r['accuracy_at_k']:.6f}", f"{r['mrr']:.6f}"])
    plots.plot_mrr_bars(mrr_by_method, out / "mrr.png")
    _write_manifest(out, "eval-predict", {"ks": ks}, {"predictions": pred_path})
    for r in results:
        click.echo(
            f"{r['method']} k={r['k']}: acc@k {r['accuracy_at_k']:.3f} mrr {r['mrr']:.3f}"
        )


@main.command("sensitivity")
@click.option("--trajectories", "traj_path", required=True)
@click.option("--ap-labels", "labels_path", required=True)
@click.option("--corpus", "corpus_path", required=True)
@click.option("--kg", "kg_path", required=True)
@click.option("--methods", default="i-i,i-i-w", show_default=True)
@click.option("--n-max", type=int, default=20, show_default=True)
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--k-neighbors", type=int, default=10, show_default=True)
@click.option("--max-test", type=int, default=None)
@click.option("--query-hops", type=int, default=2, show_default=True)
@click.option("--out", "out_path", required=True)
@_guard
def cmd_sensitivity(traj_path, labels_path, corpus_path, kg_path, methods, n_max, k,
                    k_neighbors, max_test, query_hops, out_path):
    """Accuracy@k after removing the top-n popular APs, n = 0..n_max."""
    out = _out_dir(out_path)
    engine, setup = _prediction_setup(
        traj_path, labels_path, corpus_path, kg_path, query_hops, max_test
    )
    popularity = setup.matrix.popularity()
    n_values = list(range(0, n_max + 1))
    curves: dict[str, list[tuple[int, float]]] = {}
    results = []
    for method in [m.strip() for m in methods.split(",") if m.strip()]:
        rows = pipeline.run_prediction(
            setup, method, k, engine=engine, k_neighbors=k_neighbors
        )
        rankings = [r.ranking for r in rows]
        actuals = [set(r.actual) for r in rows]
        curve = metrics.sensitivity_remove_top_n(rankings, actuals, popularity, n_values, k=k)
        curves[method] = curve
        results.append(
            {
                "method": method,
                "k": k,
                "accuracy_at_k": curve[0][1],
                "mrr": metrics.mrr([r[:k] for r in rankings], actuals),
                "sensitivity": [{"n": n, "acc": acc} for n, acc in curve],
            }
        )

    (out / "sensitivity.json").write_text(canonical_json(results) + "\n", encoding="utf-8")
    with open(out / "sensitivity.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["method", "n", "accuracy_at_k"])
        for method in sorted(curves):
            for n, acc in curves[method]:
                w.writerow([method, n, f"{acc:.6f}"])
    plots.plot_sensitivity(curves, out / "sensitivity.png", k=k)
    _write_manifest(
        out,
        "sensitivity",
        {
            "methods": methods, "n_max": n_max, "k": k,
            "k_neighbors": k_neighbors, "max_test": max_test,
            "query_hops": query_hops,
        },
        {
            "trajectories": traj_path, "ap_labels": labels_path,
            "corpus": corpus_path, "kg": kg_path,
        },
    )
    click.echo(f"sensitivity curves for {sorted(curves)} -> {out / 'sensitivity.csv'}")


if __name__ == "__main__":
    main()
