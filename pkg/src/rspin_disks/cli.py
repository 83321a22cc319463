"""Command-line interface.  Every command prints one JSON run report to stdout.

Exit codes: 0 success or a positive verdict, 1 a well-formed negative verdict, 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .graph import GraphError, GraphParseError, are_isomorphic, emit_graph, is_stable, parse_graph, validate
from .invariants import (
    DecompositionError,
    RankError,
    automorphism_order,
    decompose_witten,
    feasibility,
    moduli_dimension,
    witten_rank,
)
from .ops import ForgetError, OperationError, base_graph, detach_set, forget_tails
from .orientation import (
    SignError,
    boundary_split_sign,
    closed_split_sign,
    mc_invariant,
    rotation_signs,
    transport_sign,
    zero_dim_orientation,
)
from .sections import (
    ConfigurationError,
    ConvergenceError,
    DiskConfiguration,
    PoleError,
    arc_samples,
    basis_rank,
    residue_profile,
    rotation_determinant_sign,
    sigma_boundary_root,
)
from .strata import AmbientSpec, InfeasibleError, enumerate_codim1

REPORT_DIR_ENV = "RSPIN_REPORT_DIR"


class UsageError(Exception):
    pass


class Verdict(Exception):
    """A well-formed negative answer: reported normally, exit code 1."""

    def __init__(self, results: Any):
        super().__init__("negative verdict")
        self.results = results


def _int_list(text: Optional[str]) -> List[int]:
    if text is None or text.strip() == "":
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from exc


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise GraphParseError("", f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _load_graph(path: str):
    return parse_graph(_load_json(path))


# --------------------------------------------------------------------------
# Commands: each returns the results payload, or raises Verdict


def cmd_validate(ns) -> Any:
    rep = validate(_load_graph(ns.graph)).to_json()
    if rep["overall"] != "pass":
        raise Verdict(rep)
    return rep


def cmd_stable(ns) -> Any:
    g = _load_graph(ns.graph)
    out = {"stable": is_stable(g)}
    if not out["stable"]:
        raise Verdict(out)
    return out


def cmd_iso(ns) -> Any:
    out = {"isomorphic": are_isomorphic(_load_graph(ns.graph), _load_graph(ns.other))}
    if not out["isomorphic"]:
        raise Verdict(out)
    return out


def cmd_detach(ns) -> Any:
    g = _load_graph(ns.graph)
    items = list(ns.edge or []) + list(ns.cb or [])
    if not items:
        raise UsageError("name at least one --edge or --cb")
    res = detach_set(g, items)
    return {
        "graph": emit_graph(res.graph),
        "new_tails": [
            {"id": t.id, "tw": t.tw, "marking": sorted(t.marking) if isinstance(t.marking, frozenset) else t.marking,
             "anchor": t.anchor, "empty_union": t.empty_union}
            for t in res.new_tails
        ],
    }


def cmd_forget(ns) -> Any:
    g = _load_graph(ns.graph)
    return {"graph": emit_graph(forget_tails(g, _int_list(ns.boundary), _int_list(ns.internal)))}


def cmd_base(ns) -> Any:
    res = base_graph(_load_graph(ns.graph))
    return {"graph": emit_graph(res.graph), "first_vertex": res.v1, "forgotten_half_edge": res.h1}


def cmd_rank(ns) -> Any:
    return witten_rank(_load_graph(ns.graph)).to_json()


def cmd_feasible(ns) -> Any:
    f = feasibility(ns.r, ns.k, _int_list(ns.twists))
    out = {"feasible": f.feasible, "reason": f.reason, "rank": f.rank}
    if not f.feasible:
        raise Verdict(out)
    return out


def cmd_aut(ns) -> Any:
    a = automorphism_order(_load_graph(ns.graph))
    return {"order": a.order, "tag": a.tag, "per_component": list(a.per_component)}


def cmd_dim(ns) -> Any:
    d, c = moduli_dimension(_load_graph(ns.graph))
    return {"dimension": d, "codimension": c}


def cmd_decompose(ns) -> Any:
    return decompose_witten(_load_graph(ns.graph), ns.edge).to_json()


def cmd_enumerate(ns) -> Any:
    spec = AmbientSpec.make(ns.r, _int_list(ns.boundary), _int_list(ns.twists))
    try:
        recs = enumerate_codim1(spec, include_ramond=ns.ramond, codim2=ns.codim2)
    except InfeasibleError as exc:
        raise Verdict({"feasible": False, "reason": str(exc)})
    return {
        "count": len(recs),
        "strata": [dict(rec.to_json(), graph=emit_graph(rec.graph)) for rec in recs],
    }


def cmd_signs(ns) -> Any:
    rule = ns.rule
    if rule == "mc":
        return {"mc": mc_invariant(ns.r, _int_list(ns.twists))}
    if rule == "closed-split":
        tw = _int_list(ns.twists)
        return {"sign": closed_split_sign(ns.r, tw, ns.delta), "mc": mc_invariant(ns.r, tw), "delta": ns.delta}
    if rule == "boundary-split":
        sizes = _int_list(ns.sizes)
        if len(sizes) != 2:
            raise UsageError("--sizes takes two integers")
        return {"sign": boundary_split_sign(*sizes)}
    if rule == "rotation":
        w, m, p = rotation_signs(ns.k, ns.h)
        return {"bundle": w, "moduli": m, "product": p}
    if rule == "zero-dim":
        return {"sign": zero_dim_orientation(ns.k, ns.l)}
    if rule == "transport":
        if not ns.graph:
            raise UsageError("--graph is required for the transport rule")
        g = _load_graph(ns.graph)
        chain = [e for e in (ns.chain or "").split(",") if e]
        return transport_sign(g, chain, delta=ns.delta, other_family=ns.other_family).to_json()
    raise UsageError(f"unknown rule {rule}")


def cmd_sections(ns) -> Any:
    c = DiskConfiguration.from_json(_load_json(ns.config))
    rng = random.Random(ns.seed)
    samples = arc_samples(c, ns.per_arc, rng)
    out: Dict[str, Any] = {"configuration": c.to_json(), "parity_ok": c.parity_ok, "samples": samples}
    if c.k >= 2:
        out["values"] = {str(j): sigma_boundary_root(c, j, samples) for j in range(1, c.k)}
        rank, ratio = basis_rank(c, seed=ns.seed)
        out["rank"] = rank
        out["singular_value_ratio"] = ratio
        out["residues"] = {str(j): list(residue_profile(c, j)) for j in range(1, c.k)}
        out["rotation_signs"] = {str(h): rotation_determinant_sign(c, h, seed=ns.seed) for h in range(c.k)}
    else:
        out["rank"] = 0
    return out


# --------------------------------------------------------------------------


_COMMON = argparse.ArgumentParser(add_help=False)
_COMMON.add_argument("--format", choices=("json", "csv"), default="json")
_COMMON.add_argument("--seed", type=int, default=0)


def _graph_cmd(sub, name: str, fn: Callable, help_: str, extra: Callable = None, stochastic: bool = False):
    p = sub.add_parser(name, help=help_, parents=[_COMMON])
    p.add_argument("graph", help="graph JSON file")
    if extra:
        extra(p)
    p.set_defaults(fn=fn, files=("graph",), stochastic=stochastic)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rspin", description="Graded r-spin disk graph toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    _graph_cmd(sub, "validate", cmd_validate, "check every structural rule")
    _graph_cmd(sub, "stable", cmd_stable, "stability verdict")
    _graph_cmd(sub, "iso", cmd_iso, "isomorphism test", lambda p: p.add_argument("other")).set_defaults(files=("graph", "other"))

    def detach_args(p):
        p.add_argument("--edge", action="append", help="half-edge id of an edge to detach (repeatable)")
        p.add_argument("--cb", action="append", help="contracted-boundary tail to detach (repeatable)")

    _graph_cmd(sub, "detach", cmd_detach, "detach edges / contracted-boundary tails", detach_args)

    def forget_args(p):
        p.add_argument("--boundary", default="", help="boundary labels")
        p.add_argument("--internal", default="", help="internal labels")

    _graph_cmd(sub, "forget", cmd_forget, "forget twist-zero tails", forget_args)
    _graph_cmd(sub, "base", cmd_base, "base graph of a two-disk graph")
    _graph_cmd(sub, "rank", cmd_rank, "Witten bundle rank report")
    _graph_cmd(sub, "aut", cmd_aut, "automorphism group order")
    _graph_cmd(sub, "dim", cmd_dim, "moduli dimension and codimension")
    _graph_cmd(sub, "decompose", cmd_decompose, "rank decomposition along an edge",
               lambda p: p.add_argument("--edge", required=True, help="half-edge id or contracted-boundary tail"))

    p = sub.add_parser("feasible", help="is the smooth moduli space nonempty", parents=[_COMMON])
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--twists", default="")
    p.set_defaults(fn=cmd_feasible, files=(), stochastic=False)

    p = sub.add_parser("enumerate", help="codimension-one strata of a moduli component", parents=[_COMMON])
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--boundary", default="", help="boundary labels in cyclic order")
    p.add_argument("--twists", default="", help="internal twists; labels are 1..l")
    p.add_argument("--codim2", action="store_true", help="also list internal-edge strata")
    p.add_argument("--ramond", action="store_true", help="also list Ramond boundary-edge strata")
    p.set_defaults(fn=cmd_enumerate, files=(), stochastic=False)

    p = sub.add_parser("signs", help="orientation sign rules", parents=[_COMMON])
    p.add_argument("--rule", required=True, choices=("mc", "closed-split", "boundary-split", "rotation", "zero-dim", "transport"))
    p.add_argument("--r", type=int)
    p.add_argument("--twists", default="")
    p.add_argument("--delta", type=int, default=1, choices=(1, -1))
    p.add_argument("--sizes", default="")
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--graph")
    p.add_argument("--chain", default="", help="comma-separated half-edge ids, one per edge, in detach order")
    p.add_argument("--other-family", action="store_true")
    p.set_defaults(fn=cmd_signs, files=("graph",), stochastic=False)

    p = sub.add_parser("sections", help="explicit section numerics on a disk configuration", parents=[_COMMON])
    p.add_argument("config", help='JSON {"r":int,"x":[...],"z":[[re,im],...],"a":[...]}')
    p.add_argument("--per-arc", type=int, default=4)
    p.set_defaults(fn=cmd_sections, files=("config",), stochastic=True)
    return parser


def _digest(ns) -> str:
    args = {k: v for k, v in sorted(vars(ns).items()) if k not in ("fn", "files", "stochastic", "format")}
    for key in ns.files:
        path = getattr(ns, key, None)
        if path:
            with open(path, "rb") as fh:
                args[key] = hashlib.sha256(fh.read()).hexdigest()
    return hashlib.sha256(json.dumps(args, sort_keys=True, default=str).encode()).hexdigest()


def _csv_rows(command: str, results: Any) -> Tuple[List[str], List[List[Any]]]:
    if command == "enumerate" and "strata" in results:
        return (["index", "kind", "edge_class", "boundary_block", "internal_labels_on_first_vertex", "insertion"],
                [[i, s["kind"], s["edge_class"], " ".join(map(str, s["boundary_block"])),
                  " ".join(map(str, s["internal_labels_on_first_vertex"])),
                  "; ".join(f"{v}: {' '.join(seq)}" for v, seq in sorted(s["insertion"].items()))]
                 for i, s in enumerate(results["strata"])])
    if command == "sections" and "values" in results:
        js = sorted(results["values"], key=int)
        return (["w"] + [f"h{j}" for j in js],
                [[w] + [results["values"][j][i] for j in js] for i, w in enumerate(results["samples"])])
    if command == "validate":
        return (["rule", "result", "detail"], [[e["rule"], e["result"], e["detail"]] for e in results["entries"]])
    return (["key", "value"], [[k, json.dumps(v, sort_keys=True)] for k, v in sorted(results.items())])


def _render(report: Dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    header, rows = _csv_rows(report["command"], report["results"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    code = 0
    try:
        try:
            results = ns.fn(ns)
        except Verdict as v:
            results, code = v.results, 1
        digest = _digest(ns)
    except (UsageError, GraphParseError) as exc:
        where = f" at {exc.path}" if isinstance(exc, GraphParseError) and exc.path else ""
        print(json.dumps({"error": "usage" if isinstance(exc, UsageError) else "parse", "message": f"{exc}{where}"}), file=stderr)
        return 2
    except (GraphError, OperationError, ForgetError, RankError, DecompositionError, SignError,
            InfeasibleError, ConfigurationError, PoleError, ConvergenceError, ValueError) as exc:
        info = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ForgetError):
            info["reason"] = exc.reason
        print(json.dumps(info), file=stderr)
        return 1
    report = {
        "command": ns.command,
        "inputs_digest": digest,
        "seed": ns.seed if ns.stochastic else None,
        "results": results,
        "version": __version__,
    }
    text = _render(report, ns.format)
    stdout.write(text)
    out_dir = os.environ.get(REPORT_DIR_ENV)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        ext = "json" if ns.format == "json" else "csv"
        with open(os.path.join(out_dir, f"{ns.command}-{digest[:12]}.{ext}"), "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
