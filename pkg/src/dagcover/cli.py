"""Command-line entry point.

Exit status: 0 when everything checks out, 1 when a certificate fails,
2 on malformed input or a structural error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import io
from .config import BudgetConstants, RunConfig
from .cover import certify, cover_to_dict, count_extra_edges
from .decomposition import heuristic_tree_decomposition, validate_decomposition
from .exceptions import DagCoverError, StructuralError
from .generators import generate
from .graph import aspect_ratio, all_pairs_distances
from .planar.cover import build_planar_cover_parts, planar_budgets
from .planar.embedding import embed
from .planar.pathcover import size_bounds_hold, verify_path_cover_contract
from .star import analyze_star_cover, star_lower_bound
from .tw_nonsteiner import build_tw_nonsteiner_cover, tw_nonsteiner_edge_budget
from .tw_steiner import build_tw_steiner_cover, tw_steiner_edge_budget

REPORT_FORMAT = 1
log = logging.getLogger("dagcover")


class CertificateFailure(Exception):
    """Raised inside a command to turn a failed check into exit status 1."""

    def __init__(self, report):
        self.report = report


def _emit(report: dict, cfg: RunConfig) -> None:
    text = json.dumps({"format": REPORT_FORMAT, **report}, indent=2, sort_keys=True) + "\n"
    target = cfg.outputs.get("report")
    if target:
        Path(target).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands ----------------------------------------------------------------

def cmd_gen(args, cfg: RunConfig) -> dict:
    params = {k: getattr(args, k) for k in ("n", "k", "rows", "cols") if getattr(args, k) is not None}
    if args.max_weight is not None:
        params["max_weight"] = args.max_weight
    if args.kind == "dicycle" and args.weighted:
        params["weight_seed"] = cfg.seed
    need = {"star": ["n"], "ktree": ["n", "k"], "grid": ["rows", "cols"], "dicycle": ["n"]}[args.kind]
    missing = [f"--{p}" for p in need if p not in params]
    if missing:
        raise argparse.ArgumentTypeError(f"gen {args.kind} needs {' '.join(missing)}")
    inst = generate(args.kind, cfg.seed, **params)
    g = inst["graph"]
    io.write_graph(cfg.outputs["graph"], g)
    report = {"command": "gen", "kind": args.kind, "seed": cfg.seed, "n": g.n, "m": g.m,
              "graph": cfg.outputs["graph"]}
    if "td" in inst and cfg.outputs.get("td"):
        io.write_td(cfg.outputs["td"], inst["td"], g.n)
        report["td"] = cfg.outputs["td"]
        report["width"] = inst["td"].width
    if "embedding" in inst and cfg.outputs.get("embedding"):
        io.write_embedding(cfg.outputs["embedding"], inst["embedding"])
        report["embedding"] = cfg.outputs["embedding"]
    return report


def cmd_decompose(args, cfg: RunConfig) -> dict:
    g = io.read_graph(cfg.inputs["graph"])
    td = heuristic_tree_decomposition(g)
    valid = validate_decomposition(g, td)
    if cfg.outputs.get("td"):
        io.write_td(cfg.outputs["td"], td, g.n)
    return {"command": "decompose", "n": g.n, "bags": len(td.bags), "width": td.width,
            "valid": bool(valid), "td": cfg.outputs.get("td")}


def _load_td(g, cfg):
    path = cfg.inputs.get("td")
    if not path:
        return heuristic_tree_decomposition(g)
    td, n = io.read_td(path)
    if n != g.n:
        raise StructuralError(f"{path}: decomposition is over {n} vertices, graph has {g.n}")
    return td


def cmd_cover(args, cfg: RunConfig) -> dict:
    g = io.read_graph(cfg.inputs["graph"])
    report = {"command": "cover", "construction": args.construction, "n": g.n}
    if args.construction == "tw-steiner":
        td = _load_td(g, cfg)
        cover, pds = build_tw_steiner_cover(g, td, prune=args.prune)
        report.update(width=td.width, per_dag_edges=[len(d.edges) for d in cover.dags],
                      per_dag_budget=tw_steiner_edge_budget(g.n, td.width),
                      pathwidths=[pd.width for pd in pds])
        prefix = cfg.outputs.get("pd_prefix")
        if prefix:
            for i, pd in enumerate(pds):
                io.write_td(f"{prefix}{i}.td", pd, cover.dags[i].n_vertices)
    elif args.construction == "tw-nonsteiner":
        td = _load_td(g, cfg)
        cover = build_tw_nonsteiner_cover(g, td)
        report.update(width=td.width, mu=count_extra_edges(g, cover),
                      mu_budget=tw_nonsteiner_edge_budget(g.n, td.width))
    else:
        if cfg.eps is None:
            raise argparse.ArgumentTypeError("cover planar needs --eps")
        emb = io.read_embedding(cfg.inputs["embedding"]) if cfg.inputs.get("embedding") else embed(g)
        gd = all_pairs_distances(g)
        parts = build_planar_cover_parts(g, emb, cfg.eps, gd=gd)
        cover = parts.cover
        budgets = planar_budgets(g, parts, cfg.constants)
        sizes = size_bounds_hold(parts.path_cover, parts.phi, cfg.constants)
        report.update(eps=cfg.eps, phi=parts.phi, constants=cfg.constants.to_dict(),
                      budgets=budgets, path_cover_sizes=sizes)
        if cfg.outputs.get("pathcover"):
            io.write_path_cover(cfg.outputs["pathcover"], parts.path_cover)
    io.write_cover(cfg.outputs["cover"], cover)
    report.update(dags=cover.g, steiner_points=[d.n_steiner for d in cover.dags],
                  cover=cfg.outputs["cover"])
    return report


def cmd_verify(args, cfg: RunConfig) -> dict:
    g = io.read_graph(cfg.inputs["graph"])
    cover = io.read_cover(cfg.inputs["cover"])
    if cfg.t is not None:
        cover = replace(cover, t=cfg.t)
    cert = certify(g, cover, threads=cfg.threads)
    report = {"command": "verify", "t": cover.t, "certificate": cert.to_dict()}
    if args.pathcover:
        pc = io.read_path_cover(args.pathcover)
        report["path_cover"] = verify_path_cover_contract(all_pairs_distances(g), pc, g=g).to_dict()
        if not report["path_cover"]["passed"]:
            raise CertificateFailure(report)
    if not cert.passed:
        raise CertificateFailure(report)
    return report


def cmd_bound(args, cfg: RunConfig) -> dict:
    value = star_lower_bound(args.n, args.mu)
    report = {"command": "bound star-lb", "n": args.n, "mu": args.mu, "bound": value}
    if cfg.inputs.get("cover"):
        cover = io.read_cover(cfg.inputs["cover"])
        t = cfg.t if cfg.t is not None else cover.t
        analysis = analyze_star_cover(args.n, cover, t)
        report["analysis"] = analysis.to_dict()
        if not analysis.consistent:
            raise CertificateFailure(report)
    return report


def cmd_stats(args, cfg: RunConfig) -> dict:
    g = io.read_graph(cfg.inputs["graph"])
    gd = all_pairs_distances(g)
    pairs = len(gd.reachable_pairs())
    report = {"command": "stats", "n": g.n, "m": g.m, "reachable_pairs": pairs,
              "aspect_ratio": aspect_ratio(gd) if pairs else None}
    if cfg.inputs.get("cover"):
        cover = io.read_cover(cfg.inputs["cover"])
        report["cover"] = {
            "dags": cover.g,
            "t": cover.t,
            "steiner": cover.steiner,
            "edges": [len(d.edges) for d in cover.dags],
            "steiner_points": [d.n_steiner for d in cover.dags],
            "mu": count_extra_edges(g, cover),
            "provenance": cover_to_dict(cover)["provenance"],
        }
    return report


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dagcover", description="Build and certify DAG covers of digraphs.")
    p.add_argument("--threads", type=int, default=1, help="cap on worker threads (default 1)")
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a seeded instance")
    gen.add_argument("kind", choices=["star", "ktree", "grid", "dicycle"])
    gen.add_argument("--n", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--rows", type=int)
    gen.add_argument("--cols", type=int)
    gen.add_argument("--max-weight", type=int)
    gen.add_argument("--weighted", action="store_true", help="random weights for dicycle")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="graph file to write")
    gen.add_argument("--td-out", help="decomposition file (star, ktree)")
    gen.add_argument("--emb-out", help="embedding file (grid, dicycle)")

    dec = sub.add_parser("decompose", help="min-fill tree decomposition")
    dec.add_argument("--graph", required=True)
    dec.add_argument("--out", help=".td file to write")

    cov = sub.add_parser("cover", help="build a cover")
    cov.add_argument("construction", choices=["tw-steiner", "tw-nonsteiner", "planar"])
    cov.add_argument("--graph", required=True)
    cov.add_argument("--td", help="tree decomposition (.td); min-fill when omitted")
    cov.add_argument("--emb", help="embedding file for planar; computed when omitted")
    cov.add_argument("--eps", type=float)
    cov.add_argument("--prune", action="store_true", help="drop unused chain points")
    cov.add_argument("--out", required=True, help="cover JSON to write")
    cov.add_argument("--pd-prefix", help="write the dags' path decompositions to PREFIX<i>.td")
    cov.add_argument("--pathcover-out", help="path cover JSON to write (planar)")

    ver = sub.add_parser("verify", help="certify a cover against its graph")
    ver.add_argument("--graph", required=True)
    ver.add_argument("--cover", required=True)
    ver.add_argument("--t", type=float, help="stretch to certify (default: the cover's own)")
    ver.add_argument("--pathcover", help="also check a path cover JSON")

    bnd = sub.add_parser("bound", help="lower bounds")
    bsub = bnd.add_subparsers(dest="bound", required=True)
    slb = bsub.add_parser("star-lb", help="dag-count bound for the bidirected star")
    slb.add_argument("--n", type=int, required=True)
    slb.add_argument("--mu", type=int, required=True)
    slb.add_argument("--cover", help="analyse this non-Steiner cover of the star")
    slb.add_argument("--t", type=float)

    st = sub.add_parser("stats", help="graph and cover statistics")
    st.add_argument("--graph", required=True)
    st.add_argument("--cover")
    return p


def config_from_args(args) -> RunConfig:
    inputs, outputs = {}, {}
    for key, attr in (("graph", "graph"), ("td", "td"), ("embedding", "emb"), ("cover", "cover")):
        val = getattr(args, attr, None)
        if val and not (args.command == "gen"):
            inputs[key] = val
    if args.command == "gen":
        outputs.update(graph=args.out, td=args.td_out, embedding=args.emb_out)
    elif args.command == "decompose":
        outputs["td"] = args.out
    elif args.command == "cover":
        outputs.update(cover=args.out, pd_prefix=args.pd_prefix, pathcover=args.pathcover_out)
    outputs["report"] = args.report
    return RunConfig(
        command=args.command,
        inputs=inputs,
        outputs=outputs,
        eps=getattr(args, "eps", None),
        t=getattr(args, "t", None),
        seed=getattr(args, "seed", 0) or 0,
        threads=max(1, args.threads),
        constants=BudgetConstants.from_env(),
    )


COMMANDS = {
    "gen": cmd_gen,
    "decompose": cmd_decompose,
    "cover": cmd_cover,
    "verify": cmd_verify,
    "bound": cmd_bound,
    "stats": cmd_stats,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
        log.info("running %s with inputs %s", args.command, cfg.inputs)
        report = COMMANDS[args.command](args, cfg)
    except CertificateFailure as fail:
        _emit({**fail.report, "passed": False}, cfg)
        return 1
    except (DagCoverError, argparse.ArgumentTypeError) as exc:
        print(f"dagcover: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"dagcover: error: {exc}", file=sys.stderr)
        return 2
    _emit({**report, "passed": True}, cfg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
