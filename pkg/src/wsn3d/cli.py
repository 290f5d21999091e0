"""Command-line front end: cluster, estimate, predict, place, synth, pipeline.

Human-readable tables go to stdout; machine artifacts are always files under
--out, so repeated runs with identical flags produce byte-identical outputs.
Exit codes: 0 success, 1 usage or configuration error, 2 input-data error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import data_io, estimation, placement
from .clustering import Deployment, euclidean_distance, form_clusters
from .errors import ConfigurationError, DataFormatError
from .geometry import CorrelationModel, EventSource, correlation, correlation_radius


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; usage errors are exit 1 here
        raise _UsageError(message)


def _add_model_flags(p: _Parser):
    p.add_argument("--theta", type=float, default=30.0, help="correlation range parameter (default 30)")
    p.add_argument("--alpha", type=float, default=1.0, help="correlation smoothness in (0,2] (default 1)")


def _add_cluster_flags(p: _Parser):
    p.add_argument("--nodes", required=True, help="node coordinate CSV (node_id,x,y,z)")
    p.add_argument("--radius", type=float, default=6.0, help="clustering radius in meters (default 6)")
    p.add_argument("--derive-radius", action="store_true",
                   help="derive the radius from --tau-n and the correlation model instead of --radius")
    p.add_argument("--tau-n", type=float, default=0.85, help="node correlation threshold (default 0.85)")
    p.add_argument("--tau-e", type=float, default=0.85, help="event correlation threshold (default 0.85)")
    p.add_argument("--event", type=str, default=None,
                   help="event position X,Y,Z; enables event-range filtering for clustering")


def _add_signal_flags(p: _Parser):
    p.add_argument("--sigma-s2", type=float, default=1.0, help="source signal variance (default 1)")
    p.add_argument("--sigma-n2", type=float, default=0.05, help="per-node noise variance (default 0.05)")


def _add_out_flag(p: _Parser):
    p.add_argument("--out", type=str, default=".", help="output directory (default current)")
    p.add_argument("--seed", type=int, default=42, help="RNG seed (default 42)")


def _parse_event(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ConfigurationError(f"--event expects X,Y,Z, got {text!r}")
    try:
        x, y, z = (float(v) for v in parts)
    except ValueError:
        raise ConfigurationError(f"--event expects numbers, got {text!r}") from None
    return (x, y, z)


def build_parser() -> _Parser:
    parser = _Parser(prog="wsn3d", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", parents=[], help="form clusters and write clusters.json")
    _add_cluster_flags(p)
    _add_model_flags(p)
    _add_out_flag(p)

    p = sub.add_parser("estimate", help="cluster, then report per-cluster information accuracy")
    _add_cluster_flags(p)
    _add_model_flags(p)
    _add_signal_flags(p)
    _add_out_flag(p)

    p = sub.add_parser("predict", help="predict readings for dead nodes")
    p.add_argument("--nodes", required=True)
    p.add_argument("--readings", default=None, help="reading CSV (epoch,node_id,value)")
    p.add_argument("--synthetic", default=None, choices=["sun-shade", "uniform"],
                   help="generate readings instead of --readings")
    p.add_argument("--dead", default="", help="comma-separated dead node ids")
    p.add_argument("--epochs", type=int, default=800, help="epochs for --synthetic (default 800)")
    p.add_argument("--predict-unbiased", action="store_true",
                   help="divide the live sum by the live count instead of the total count")
    p.add_argument("--eq13-literal", action="store_true",
                   help="use the live-count squared divisor in the normalized predictor")
    _add_model_flags(p)
    _add_out_flag(p)

    p = sub.add_parser("place", help="run the placement search and write cost curves")
    p.add_argument("--nodes", required=True)
    p.add_argument("--readings", default=None)
    p.add_argument("--synthetic", default=None, choices=["sun-shade", "uniform"])
    p.add_argument("--epochs", type=int, default=800)
    p.add_argument("--radius", type=float, default=6.0)
    p.add_argument("--phi1", type=float, default=0.5, help="personal-best adaptation factor (default 0.5)")
    p.add_argument("--phi2", type=float, default=0.5, help="global-best adaptation factor (default 0.5)")
    p.add_argument("--rounds", type=int, default=300, help="search rounds (default 300)")
    p.add_argument("--threshold", type=float, default=5.0, help="selection cost threshold (default 5)")
    _add_model_flags(p)
    _add_out_flag(p)

    p = sub.add_parser("synth", help="generate a synthetic reading CSV")
    p.add_argument("--nodes", required=True)
    p.add_argument("--synthetic", default="sun-shade", choices=["sun-shade", "uniform"])
    p.add_argument("--epochs", type=int, default=800)
    p.add_argument("--variance", type=float, default=1.0, help="field variance (default 1)")
    _add_model_flags(p)
    _add_out_flag(p)

    p = sub.add_parser("pipeline", help="cluster, estimate, then place in one run")
    _add_cluster_flags(p)
    _add_model_flags(p)
    _add_signal_flags(p)
    p.add_argument("--readings", default=None)
    p.add_argument("--synthetic", default=None, choices=["sun-shade", "uniform"])
    p.add_argument("--epochs", type=int, default=800)
    p.add_argument("--phi1", type=float, default=0.5)
    p.add_argument("--phi2", type=float, default=0.5)
    p.add_argument("--rounds", type=int, default=300)
    p.add_argument("--threshold", type=float, default=5.0)
    p.add_argument("--dead", default="", help="optionally also predict these dead node ids")
    p.add_argument("--predict-unbiased", action="store_true")
    p.add_argument("--eq13-literal", action="store_true")
    _add_out_flag(p)

    return parser


def _load_deployment(args, with_event: bool) -> Deployment:
    dep = data_io.parse_nodes(args.nodes)
    if with_event and getattr(args, "event", None):
        ev = EventSource(position=_parse_event(args.event), tau_e=args.tau_e)
        dep = Deployment(nodes=dep.nodes, event=ev)
    return dep


def _clustering_radius(args, model: CorrelationModel) -> float:
    if args.derive_radius:
        return correlation_radius(model, args.tau_n)
    return args.radius


def _cluster(args, model: CorrelationModel):
    dep = _load_deployment(args, with_event=True)
    radius = _clustering_radius(args, model)
    return dep, radius, form_clusters(dep, radius, model if dep.event else None)


def _print_cluster_table(cs, reports=None):
    by_head = {r.head: r for r in reports} if reports else {}
    print(f"{len(cs)} clusters at radius {cs.radius:g} m")
    header = f"{'order':>5}  {'head':>4}  {'size':>4}  members"
    if by_head:
        header = f"{'order':>5}  {'head':>4}  {'size':>4}  {'accuracy':>9}  members"
    print(header)
    for c in cs:
        members = ",".join(str(m) for m in sorted(c.members)) or "-"
        if by_head:
            acc = by_head[c.head].accuracy
            print(f"{c.order_index:>5}  {c.head:>4}  {c.size:>4}  {acc:>9.4f}  {members}")
        else:
            print(f"{c.order_index:>5}  {c.head:>4}  {c.size:>4}  {members}")


def _event_for_estimation(args, dep: Deployment) -> tuple[EventSource, str]:
    if getattr(args, "event", None):
        return EventSource(position=_parse_event(args.event), tau_e=args.tau_e), "user"
    return EventSource(position=dep.centroid(), tau_e=args.tau_e), "centroid-default"


def _readings_matrix(args, dep: Deployment):
    readings = getattr(args, "readings", None)
    if readings and args.synthetic:
        raise ConfigurationError("pass either --readings or --synthetic, not both")
    if readings:
        return data_io.parse_readings(readings, deployment=dep)
    if args.synthetic:
        model = CorrelationModel(theta=args.theta, alpha=args.alpha)
        if args.synthetic == "sun-shade":
            scn = data_io.sun_shade_scenario(dep, model=model, epochs=args.epochs, seed=args.seed)
        else:
            scn = data_io.SyntheticScenario(
                model=model, variance=getattr(args, "variance", 1.0),
                epochs=args.epochs, seed=args.seed,
            )
        return data_io.generate_synthetic(scn, dep)
    raise ConfigurationError("readings required: pass --readings PATH or --synthetic NAME")


def cmd_cluster(args) -> int:
    model = CorrelationModel(theta=args.theta, alpha=args.alpha)
    dep, radius, cs = _cluster(args, model)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = {"theta": args.theta, "alpha": args.alpha, "derived_radius": bool(args.derive_radius)}
    (out / "clusters.json").write_text(data_io.write_cluster_report(cs, metadata=meta), encoding="utf-8")
    _print_cluster_table(cs)
    print(f"wrote {out / 'clusters.json'}")
    return 0


def cmd_estimate(args) -> int:
    model = CorrelationModel(theta=args.theta, alpha=args.alpha)
    dep, radius, cs = _cluster(args, model)
    event, event_origin = _event_for_estimation(args, dep)
    sig = estimation.SignalModel(sigma_s2=args.sigma_s2)
    noise = estimation.NoiseProfile.uniform(dep.ids(), args.sigma_n2)
    reports = [estimation.cluster_accuracy(dep, c, model, sig, noise, event) for c in cs]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = {
        "theta": args.theta, "alpha": args.alpha,
        "sigma_s2": args.sigma_s2, "sigma_n2": args.sigma_n2,
        "event": list(event.position), "event_origin": event_origin,
    }
    (out / "clusters.json").write_text(
        data_io.write_cluster_report(cs, reports, metadata=meta), encoding="utf-8"
    )
    if event_origin == "centroid-default":
        print(f"note: no --event given; using the deployment centroid {event.position}")
    _print_cluster_table(cs, reports)
    print(f"wrote {out / 'clusters.json'}")
    return 0


def cmd_predict(args) -> int:
    model = CorrelationModel(theta=args.theta, alpha=args.alpha)
    dep = data_io.parse_nodes(args.nodes)
    dead_ids = [int(v) for v in args.dead.split(",") if v.strip()]
    if not dead_ids:
        print("no dead nodes given; nothing to predict")
        return 0
    unknown = set(dead_ids) - set(dep.ids())
    if unknown:
        raise ConfigurationError(f"dead ids not in deployment: {sorted(unknown)}")
    if set(dead_ids) == set(dep.ids()):
        raise ConfigurationError("all nodes are dead; nothing observed")
    matrix = _readings_matrix(args, dep)
    live_ids = [i for i in sorted(matrix.node_ids) if i not in dead_ids]
    missing = [i for i in live_ids if matrix.present_values(i).size == 0]
    if missing:
        raise DataFormatError(f"no readings for live nodes {missing}")
    observed = [float(matrix.present_values(i).mean()) for i in live_ids]
    o_total = len(live_ids) + len(dead_ids)
    value = estimation.predict_dead(observed, o_total, unbiased=args.predict_unbiased)
    all_ids = sorted(set(live_ids) | set(dead_ids))
    pos = {n.id: n.position for n in dep.nodes}
    pts = np.asarray([pos[i] for i in all_ids])
    diff = pts[:, None, :] - pts[None, :, :]
    rho_pair = correlation(model, np.sqrt((diff**2).sum(axis=2)))
    divisor = "live" if args.eq13_literal else "total"
    print(f"{'dead':>5}  {'predicted':>10}  {'quality':>8}")
    for d in dead_ids:
        dists = np.asarray([euclidean_distance(pos[d], pos[i]) for i in all_ids])
        rho_dead = correlation(model, dists)
        quality = estimation.prediction_accuracy(
            o_total, rho_dead, rho_pair, divisor=divisor, live_count=len(live_ids)
        )
        print(f"{d:>5}  {value:>10.4f}  {quality:>8.4f}")
    return 0


def _place(args, dep: Deployment):
    model = CorrelationModel(theta=args.theta, alpha=args.alpha)
    matrix = _readings_matrix(args, dep)
    cs = form_clusters(dep, args.radius)
    missing = set(cs.all_ids()) - set(matrix.node_ids)
    if missing:
        raise DataFormatError(f"readings do not cover nodes {sorted(missing)}")
    params = placement.PlacementParams(
        phi1=args.phi1, phi2=args.phi2, rounds=args.rounds, threshold=args.threshold
    )
    state = placement.run_placement(dep, matrix, cs, params, seed=args.seed)
    costs = placement.cluster_costs(matrix, cs)
    selected = placement.select_nodes(state, costs, args.threshold)
    return state, costs, selected


def cmd_place(args) -> int:
    dep = data_io.parse_nodes(args.nodes)
    state, costs, selected = _place(args, dep)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    curve, nodes = data_io.write_cost_curves(state, costs, selected)
    (out / "curve.csv").write_text(curve, encoding="utf-8")
    (out / "nodes.csv").write_text(nodes, encoding="utf-8")
    print(f"{len(selected)} of {len(costs)} nodes selected at threshold {args.threshold:g}")
    if selected:
        print("selected:", ",".join(str(i) for i in sorted(selected)))
    print(f"wrote {out / 'curve.csv'} and {out / 'nodes.csv'}")
    return 0


def cmd_synth(args) -> int:
    dep = data_io.parse_nodes(args.nodes)
    matrix = _readings_matrix(args, dep)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "readings.csv").write_text(data_io.write_readings(matrix), encoding="utf-8")
    print(f"wrote {out / 'readings.csv'} ({len(matrix.node_ids)} nodes x {len(matrix.epochs)} epochs)")
    return 0


def cmd_pipeline(args) -> int:
    rc = cmd_estimate(args)
    if rc != 0:
        return rc
    dep = data_io.parse_nodes(args.nodes)
    state, costs, selected = _place(args, dep)
    out = Path(args.out)
    curve, nodes = data_io.write_cost_curves(state, costs, selected)
    (out / "curve.csv").write_text(curve, encoding="utf-8")
    (out / "nodes.csv").write_text(nodes, encoding="utf-8")
    print(f"{len(selected)} of {len(costs)} nodes selected at threshold {args.threshold:g}")
    if args.dead:
        rc = cmd_predict(args)
    return rc


_COMMANDS = {
    "cluster": cmd_cluster,
    "estimate": cmd_estimate,
    "predict": cmd_predict,
    "place": cmd_place,
    "synth": cmd_synth,
    "pipeline": cmd_pipeline,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    try:
        return _COMMANDS[args.command](args)
    except DataFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
