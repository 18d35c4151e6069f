"""``motifclust`` command line: motif correlation clustering, annealed covers, bounds, oracles."""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from importlib import resources
from pathlib import Path

import numpy as np

from . import anneal_cover as ann
from . import bounds, oracles
from .errors import ConfigError, GraphParseError, MotifClustError
from .graph import Graph, enumerate_triangles, parse_edge_list
from .instance import WeightConfig, build_instance, clusters_from_labels, labels_from_clusters, mmcc_cost
from .lp import build_lp, export_lp, import_solution, solve_lp
from .mmcc import RoundingParams, round_solution

log = logging.getLogger("motifclust")

BUNDLED = {"@karate": ("karate.edges", 1)}


def data_path(name: str) -> Path:
    return Path(str(resources.files("motifclust") / "data" / name))


class Input:
    """A loaded graph plus what the report needs to identify it."""

    def __init__(self, source: str, one_based: bool, n: int | None):
        if source in BUNDLED:
            fname, base = BUNDLED[source]
            path = data_path(fname)
        else:
            path, base = Path(source), int(one_based)
        try:
            raw = path.read_bytes()
        except OSError as exc:
            raise GraphParseError(f"cannot read {source}: {exc.strerror}") from None
        self.source = source
        self.sha256 = hashlib.sha256(raw).hexdigest()
        self.graph: Graph = parse_edge_list(raw.decode("utf-8"), base=base, n=n)

    def describe(self) -> dict:
        g = self.graph
        return {"path": self.source, "sha256": self.sha256, "n": g.n, "edges": g.edge_count, "base": g.base}


# ---------------------------------------------------------------- parsing helpers


def read_config_file(path: str) -> dict:
    """``key = value`` lines; ``#`` comments; keys are WeightConfig field names."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    fields = set(WeightConfig.__dataclass_fields__)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = (s.strip() for s in line.partition("="))
        if not sep or key not in fields:
            raise ConfigError(f"{path}:{lineno}: expected '<field> = <value>' with a known field, got {raw!r}")
        if key == "nonedge_role":
            out[key] = val
        elif key == "nonedge_dissim_interval":
            lo, hi = (float(t) for t in val.replace(",", " ").split())
            out[key] = (lo, hi)
        elif key == "seed":
            out[key] = int(val)
        else:
            try:
                out[key] = float(val)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: {key} needs a number, got {val!r}") from None
    return out


def weight_config(args) -> WeightConfig:
    kw = read_config_file(args.config) if args.config else {}
    flag_map = {
        "edge_sim": args.edge_sim,
        "nonedge_dissim": args.nonedge_dissim,
        "nonedge_dissim_coeff": args.nonedge_dissim_coeff,
        "nonedge_dissim_interval": tuple(args.nonedge_dissim_interval) if args.nonedge_dissim_interval else None,
        "triangle_sim": args.tri_sim,
        "nontriangle_sim": args.nontri_sim,
        "lambda2": args.lam,
        "lambda1": args.lambda1,
        "nonedge_role": args.nonedge_role,
    }
    kw.update({k: v for k, v in flag_map.items() if v is not None})
    if kw.get("nonedge_dissim_interval") is not None:
        kw.setdefault("seed", args.seed)
    cfg = WeightConfig(**kw)
    cfg.validate()
    return cfg


def weight_config_dict(cfg: WeightConfig) -> dict:
    d = dict(cfg.__dict__)
    if d["nonedge_dissim_interval"] is not None:
        d["nonedge_dissim_interval"] = list(d["nonedge_dissim_interval"])
    return d


def labelled_clusters(g: Graph, labels) -> list[list[int]]:
    return [[g.label(v) for v in c] for c in clusters_from_labels(labels)]


def read_partition(path: str, g: Graph) -> np.ndarray:
    try:
        clusters = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphParseError(f"cannot read partition {path}: {exc}") from None
    if isinstance(clusters, dict):
        clusters = clusters.get("partition", clusters.get("clusters"))
    try:
        internal = [[int(v) - g.base for v in c] for c in clusters]
        return labels_from_clusters(internal, g.n)
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"partition {path} is not a partition of the graph's vertices: {exc}") from None


def read_assignment(path: str, g: Graph, M: int | None) -> ann.FeatureAssignment:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphParseError(f"cannot read assignment {path}: {exc}") from None
    if "assignment" in raw:
        M = M or raw.get("M")
        raw = raw["assignment"]
    sets = [[] for _ in range(g.n)]
    for lab, feats in raw.items():
        v = int(lab) - g.base
        if not 0 <= v < g.n:
            raise ConfigError(f"assignment names unknown vertex {lab}")
        sets[v] = [int(f) for f in feats]
    M = M or max((max(s) for s in sets if s), default=1)
    try:
        return ann.FeatureAssignment.from_sets(int(M), sets)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def assignment_payload(g: Graph, A: ann.FeatureAssignment) -> tuple[dict, dict]:
    per_vertex = {str(g.label(v)): s for v, s in enumerate(A.sets())}
    per_feature = {}
    for k in range(1, A.M + 1):
        members = [g.label(v) for v in range(g.n) if (int(A.masks[v]) >> (k - 1)) & 1]
        if members:
            per_feature[str(k)] = members
    return per_vertex, per_feature


# ---------------------------------------------------------------- commands


def cmd_mmcc(args) -> dict:
    inp = Input(args.graph, args.one_based, args.n)
    g = inp.graph
    cfg = weight_config(args)
    rp = RoundingParams(args.alpha, args.beta, args.pivot, args.seed)
    rp.validate()
    inst = build_instance(g, cfg, force=args.force)
    model = build_lp(inst)
    if args.export_lp:
        Path(args.export_lp).write_text(export_lp(model, args.export_format), encoding="utf-8")
    if args.solution:
        sol = import_solution(model, Path(args.solution).read_text(encoding="utf-8"))
    else:
        sol = solve_lp(model, method=args.lp_method)
    labels = round_solution(sol, rp)
    cost = mmcc_cost(inst, labels)
    ratio = cost / sol.objective if sol.objective > 0 else (1.0 if cost == 0 else None)
    return {
        "input": inp.describe(),
        "parameters": {
            "weights": weight_config_dict(cfg),
            "rounding": {"alpha": rp.alpha, "beta": rp.beta, "pivot_rule": rp.pivot_rule},
            "lp_method": "imported" if args.solution else args.lp_method,
        },
        "results": {
            "partition": labelled_clusters(g, labels),
            "num_clusters": int(labels.max()) + 1,
            "lp_objective": sol.objective,
            "rounded_cost": cost,
            "ratio": ratio,
            "lp_backend": sol.backend,
        },
        "seeds": [args.seed],
    }


def cmd_anneal(args) -> dict:
    inp = Input(args.graph, args.one_based, args.n)
    g = inp.graph
    params = ann.AnnealParams(
        M=args.M, mu=args.mu, rounds=args.rounds, seed=args.seed, restarts=args.restarts,
        init=args.init, accept=args.accept, rounds_factor=args.rounds_factor,
    )
    try:
        p = params.resolved(g.n)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    res = ann.anneal(g, p)
    per_vertex, per_feature = assignment_payload(g, res.assignment)
    return {
        "input": inp.describe(),
        "parameters": {
            "M": p.M, "mu": p.mu, "rounds": p.rounds, "restarts": p.restarts,
            "init": p.init, "accept": p.accept,
        },
        "results": {
            "M": p.M,
            "score": res.score,
            "normalized_score": res.normalized_score,
            "assignment": per_vertex,
            "communities": per_feature,
            "seed": res.seed,
            "rounds": res.rounds,
            "chain_normalized_scores": list(res.chain_scores),
        },
        "seeds": [args.seed + i for i in range(p.restarts)],
    }


def cmd_bounds(args) -> dict:
    rows = []
    for n in args.n_values:
        rows.append({
            "n": n,
            "ecc_bound": bounds.ecc_bound(n),
            "etcc_bound": bounds.etcc_bound(n),
            "alon_bound": bounds.alon_bound(n, args.d),
        })
    return {"input": None, "parameters": {"n": args.n_values, "d": args.d}, "results": {"rows": rows}, "seeds": []}


def cmd_exact(args) -> dict:
    inp = Input(args.graph, args.one_based, args.n)
    g = inp.graph
    params: dict = {"what": args.what}
    if args.what == "mmcc":
        cfg = weight_config(args)
        params["weights"] = weight_config_dict(cfg)
        res = oracles.exact_mmcc(build_instance(g, cfg))
        results = {"optimum": res.optimum, "partition": labelled_clusters(g, res.witness)}
    elif args.what in ("etcc", "ecc"):
        fn = oracles.exact_etcc if args.what == "etcc" else oracles.exact_ecc
        res = fn(g)
        results = {"optimum": res.optimum, "cliques": [[g.label(v) for v in c] for c in res.witness]}
    else:
        params["M"] = args.M
        w = ann.default_weights(g)
        res = oracles.exact_best_assignment(g, args.M, w)
        A = ann.FeatureAssignment(args.M, res.witness)
        per_vertex, per_feature = assignment_payload(g, A)
        sc = ann.Scorer(g, w)
        results = {
            "optimum": res.optimum,
            "normalized_score": sc.normalized(res.optimum),
            "assignment": per_vertex,
            "communities": per_feature,
        }
    return {"input": inp.describe(), "parameters": params, "results": results, "seeds": []}


def cmd_eval(args) -> dict:
    inp = Input(args.graph, args.one_based, args.n)
    g = inp.graph
    if bool(args.partition) == bool(args.assignment):
        raise ConfigError("eval needs exactly one of --partition or --assignment")
    if args.partition:
        cfg = weight_config(args)
        labels = read_partition(args.partition, g)
        inst = build_instance(g, cfg, force=args.force)
        params = {"partition": args.partition, "weights": weight_config_dict(cfg)}
        results = {"mmcc_cost": mmcc_cost(inst, labels), "partition": labelled_clusters(g, labels)}
    else:
        A = read_assignment(args.assignment, g, args.M)
        sc = ann.Scorer(g)
        raw = sc.score(A.masks)
        params = {"assignment": args.assignment, "M": A.M}
        results = {"score": raw, "normalized_score": sc.normalized(raw)}
    return {"input": inp.describe(), "parameters": params, "results": results, "seeds": []}


def cmd_randcover(args) -> dict:
    inp = Input(args.graph, args.one_based, args.n)
    g = inp.graph
    rep = bounds.random_cover(g, args.d, seed=args.seed, trials=args.trials)
    return {
        "input": inp.describe(),
        "parameters": {"d": args.d, "trials": args.trials},
        "results": {
            "covered_all": rep.covered_all,
            "size": rep.size,
            "bound_used": rep.bound_used,
            "uncovered": rep.uncovered,
            "trials_used": rep.trials_used,
            "cliques": [[g.label(v) for v in c] for c in rep.cliques],
        },
        "seeds": [args.seed],
    }


def cmd_triangles(args) -> dict:
    inp = Input(args.graph, args.one_based, args.n)
    g = inp.graph
    tris = [[g.label(v) for v in t] for t in enumerate_triangles(g)]
    return {"input": inp.describe(), "parameters": {}, "results": {"count": len(tris), "triangles": tris}, "seeds": []}


# ---------------------------------------------------------------- text rendering


def render_text(command: str, report: dict) -> str:
    r = report["results"]
    if command == "bounds":
        lines = ["n\tecc_bound\tetcc_bound\talon_bound"]
        lines += [f"{x['n']}\t{x['ecc_bound']}\t{x['etcc_bound']}\t{x['alon_bound']}" for x in r["rows"]]
        return "\n".join(lines) + "\n"
    if command == "mmcc":
        out = [f"clusters: {r['num_clusters']}"]
        out += [f"  {' '.join(map(str, c))}" for c in r["partition"]]
        out.append(f"lp_objective: {r['lp_objective']:.6f}")
        out.append(f"rounded_cost: {r['rounded_cost']:.6f}")
        return "\n".join(out) + "\n"
    if command == "anneal":
        out = [f"normalized_score: {r['normalized_score']:.6f}", "communities:"]
        out += [f"  {k}: {' '.join(map(str, vs))}" for k, vs in r["communities"].items()]
        return "\n".join(out) + "\n"
    if command == "triangles":
        return "".join(" ".join(map(str, t)) + "\n" for t in r["triangles"]) + f"# {r['count']} triangles\n"
    return "".join(f"{k}: {json.dumps(v)}\n" for k, v in r.items())


# ---------------------------------------------------------------- argparse


def _add_weight_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("weights")
    g.add_argument("--config", help="key = value file of weight settings (flags override it)")
    g.add_argument("--edge-sim", type=float)
    g.add_argument("--nonedge-dissim", type=float, help="absolute non-edge weight")
    g.add_argument("--nonedge-dissim-coeff", type=float, help="c in 1/2 - c * density")
    g.add_argument("--nonedge-dissim-interval", type=float, nargs=2, metavar=("C_LO", "C_HI"),
                   help="draw each non-edge weight from [1/2 - C_HI*density, 1/2 - C_LO*density]")
    g.add_argument("--nonedge-role", choices=["similarity", "dissimilarity"],
                   help="use the non-edge value as w (default) or as 1 - w")
    g.add_argument("--tri-sim", type=float)
    g.add_argument("--nontri-sim", type=float)
    g.add_argument("--lambda", dest="lam", type=float, help="triple relevance factor")
    g.add_argument("--lambda1", type=float, help="pair relevance factor (default 1)")
    g.add_argument("--force", action="store_true", help="allow n above the dense-instance ceiling")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--output", help="write the JSON report to this path")
    common.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    common.add_argument("-v", "--verbose", action="store_true")

    graph_in = argparse.ArgumentParser(add_help=False)
    graph_in.add_argument("graph", help="edge-list file, or @karate for the bundled dataset")
    graph_in.add_argument("--one-based", action="store_true", help="vertex ids in the file start at 1")
    graph_in.add_argument("--n", type=int, help="vertex count (admits isolated vertices)")

    parser = argparse.ArgumentParser(prog="motifclust", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mmcc", parents=[common, graph_in], help="LP relaxation + rounding")
    _add_weight_flags(p)
    p.add_argument("--alpha", type=float, default=1 / 3)
    p.add_argument("--beta", type=float, default=1 / 3)
    p.add_argument("--pivot", choices=["ascending", "random"], default="ascending")
    p.add_argument("--lp-method", choices=["auto", "simplex", "highs", "external"], default="auto")
    p.add_argument("--export-lp", metavar="PATH", help="also write the LP model here")
    p.add_argument("--export-format", choices=["lp", "mps"], default="lp")
    p.add_argument("--solution", metavar="PATH", help="round this 'name value' solution instead of solving")
    p.set_defaults(func=cmd_mmcc)

    p = sub.add_parser("anneal", parents=[common, graph_in], help="simulated annealing feature assignment")
    p.add_argument("--M", type=int, required=True, help="number of features")
    p.add_argument("--mu", type=float, help="inverse temperature (default M)")
    p.add_argument("--rounds", type=int, help="rounds per chain (default ceil(f * n ln n))")
    p.add_argument("--rounds-factor", type=float, default=20.0, help="f in the default round count")
    p.add_argument("--restarts", type=int, default=1)
    p.add_argument("--init", choices=["empty", "random"], default="random")
    p.add_argument("--accept", choices=["raw", "normalized"], default="raw",
                   help="score scale inside the acceptance exponent")
    p.add_argument("--raw-score-accept", dest="accept", action="store_const", const="raw")
    p.set_defaults(func=cmd_anneal)

    p = sub.add_parser("bounds", parents=[common], help="cover-number bounds as TSV")
    p.add_argument("--n", dest="n_values", type=int, nargs="+", required=True)
    p.add_argument("--d", type=int, default=1)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("exact", parents=[common, graph_in], help="brute-force oracles")
    p.add_argument("--what", choices=["mmcc", "etcc", "ecc", "assign"], required=True)
    p.add_argument("--M", type=int, default=2)
    _add_weight_flags(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("eval", parents=[common, graph_in], help="score a given partition or assignment")
    p.add_argument("--partition", metavar="JSON")
    p.add_argument("--assignment", metavar="JSON")
    p.add_argument("--M", type=int)
    _add_weight_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("randcover", parents=[common, graph_in], help="randomized edge-triangle clique cover")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--trials", type=int, default=5)
    p.set_defaults(func=cmd_randcover)

    p = sub.add_parser("triangles", parents=[common, graph_in], help="list triangles")
    p.set_defaults(func=cmd_triangles)
    return parser


def execute(args) -> dict:
    start = time.perf_counter()
    report = {"command": args.command, **args.func(args)}
    if args.timing:
        report["wall_clock_seconds"] = time.perf_counter() - start
    return report


def run(argv=None) -> dict:
    """Parse ``argv``, run the command and return the report without printing."""
    return execute(build_parser().parse_args(argv))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        report = execute(args)
    except MotifClustError as exc:
        print(f"motifclust: {exc}", file=sys.stderr)
        return exc.exit_code
    text = json.dumps(report, indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    sys.stdout.write(text if args.json else render_text(args.command, report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
