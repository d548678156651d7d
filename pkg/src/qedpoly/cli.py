"""Command-line front end.

Exit status: 0 on success, 1 when a verification or identity check fails,
2 on bad input.  Errors are written to stderr as a JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import ParseError, QedPolyError, SchemaError
from .grapoly import chi_edge, chi_pair, cycle_poly, kirchhoff, symanzik2, x_poly
from .graph import EDGE_KINDS, Edge, Graph
from .integrand import (FEYNMAN, GENERAL, evaluate_momenta, momentum_paths, mu, numerator)

COMMANDS = ("psi", "phi", "chi", "xpoly", "numerator", "verify-theorem", "check-identities")


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    gauge: str = GENERAL
    momenta: bool = False
    edge: int | None = None
    edge2: int | None = None
    max_edges: int = 5
    samples: int = 200
    random_max_edges: int = 10
    seed: int = 0
    output: str = "text"


# -- input -------------------------------------------------------------------------


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    value = obj[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise SchemaError(f"{where}.{key}: expected an integer, got {value!r}")
    if kind is str and not isinstance(value, str):
        raise SchemaError(f"{where}.{key}: expected a string, got {value!r}")
    if kind is list and not isinstance(value, list):
        raise SchemaError(f"{where}.{key}: expected a list")
    return value


def parse_graph(data: bytes | str) -> Graph:
    """Graph from JSON ``{"vertices": [...], "edges": [...], "externals": [...]}``."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    vertices = _require(doc, "vertices", list, "graph")
    for v in vertices:
        if isinstance(v, bool) or not isinstance(v, int):
            raise SchemaError(f"graph.vertices: {v!r} is not an integer")
    if len(set(vertices)) != len(vertices):
        raise SchemaError("graph.vertices: duplicate vertex")
    edges = []
    seen = set()
    for i, e in enumerate(_require(doc, "edges", list, "graph")):
        where = f"edges[{i}]"
        eid = _require(e, "id", int, where)
        src = _require(e, "source", int, where)
        dst = _require(e, "target", int, where)
        kind = _require(e, "kind", str, where)
        if kind not in EDGE_KINDS:
            raise SchemaError(f"{where}.kind: unknown kind {kind!r}")
        if eid in seen:
            raise SchemaError(f"{where}.id: duplicate edge id {eid}")
        for v in (src, dst):
            if v not in vertices:
                raise SchemaError(f"{where}: endpoint {v} is not a declared vertex")
        seen.add(eid)
        edges.append(Edge(eid, src, dst, kind))
    externals = []
    ext = doc.get("externals", [])
    if not isinstance(ext, list):
        raise SchemaError("graph.externals: expected a list")
    for i, x in enumerate(ext):
        where = f"externals[{i}]"
        v = _require(x, "vertex", int, where)
        q = _require(x, "momentum", str, where)
        if v not in vertices:
            raise SchemaError(f"{where}: vertex {v} is not declared")
        externals.append((v, q))
    return Graph(tuple(vertices), tuple(edges), tuple(externals))


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


# -- commands ----------------------------------------------------------------------


def _emit(cfg: RunConfig, text: str, obj) -> str:
    if cfg.output == "json":
        return json.dumps(obj, indent=2, sort_keys=True)
    return text


def _cmd_psi(G: Graph, cfg: RunConfig) -> tuple[int, str]:
    p = kirchhoff(G)
    return 0, _emit(cfg, str(p), {"psi": str(p)})


def _cmd_phi(G: Graph, cfg: RunConfig) -> tuple[int, str]:
    Q = symanzik2(G)
    if cfg.momenta:
        M = evaluate_momenta(Q, momentum_paths(G))
        return 0, _emit(cfg, str(M), {"phi": M.to_json()})
    return 0, _emit(cfg, str(Q), {"phi": Q.to_json()})


def _cmd_chi(G: Graph, cfg: RunConfig) -> tuple[int, str]:
    if cfg.edge is None:
        Q = cycle_poly(G)
        return 0, _emit(cfg, str(Q), {"chi": Q.to_json()})
    p = chi_edge(G, cfg.edge) if cfg.edge2 is None else chi_pair(G, cfg.edge, cfg.edge2)
    return 0, _emit(cfg, str(p), {"chi": str(p)})


def _cmd_xpoly(G: Graph, cfg: RunConfig) -> tuple[int, str]:
    if cfg.edge is None:
        raise SchemaError("xpoly needs --edge")
    X = x_poly(G, cfg.edge, mu(cfg.edge))
    if cfg.momenta:
        V = evaluate_momenta(X, momentum_paths(G))
        return 0, _emit(cfg, str(V), {"x": V.to_json()})
    return 0, _emit(cfg, str(X), {"x": X.to_json()})


def _cmd_numerator(G: Graph, cfg: RunConfig) -> tuple[int, str]:
    N = numerator(G, cfg.gauge)
    if cfg.momenta:
        E = evaluate_momenta(N, momentum_paths(G))
        return 0, _emit(cfg, str(E), {"gauge": cfg.gauge, "terms": E.to_json()})
    return 0, _emit(cfg, str(N), N.to_json())


def _cmd_verify(G: Graph, cfg: RunConfig) -> tuple[int, str]:
    from .oracle import verify_theorem

    result = verify_theorem(G, cfg.gauge)
    if result:
        return 0, _emit(cfg, "ok", {"equal": True})
    text = "mismatch\n" + json.dumps(result.report, indent=2, sort_keys=True)
    return 1, _emit(cfg, text, {"equal": False, "report": result.report})


def _check_one(job: tuple) -> list[str]:
    from .identities import check_identities, check_numerator, check_properties

    kind, G = job
    if kind == "qed":
        return check_numerator(G)
    return check_identities(G) + check_properties(G)


def _describe(G: Graph) -> str:
    return " ".join(f"{e.id}:{e.source}->{e.target}{'' if e.kind == 'scalar' else '/' + e.kind}"
                    for e in G.edges)


def _cmd_identities(cfg: RunConfig) -> tuple[int, str]:
    from .generate import connected_multigraphs, qed_corpus, random_corpus

    jobs = [("exhaustive", G) for G in connected_multigraphs(cfg.max_edges)]
    jobs += [("random", G) for G in random_corpus(cfg.samples, cfg.random_max_edges, cfg.seed)]
    jobs += [("qed", G) for G in qed_corpus(cfg.max_edges)]
    threads = max(1, int(os.environ.get("QEDPOLY_THREADS", "1") or 1))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_check_one, jobs, chunksize=8))
    else:
        results = [_check_one(j) for j in jobs]
    failures = []
    for (kind, G), fails in zip(jobs, results):
        for f in fails:
            failures.append({"corpus": kind, "graph": _describe(G), "failure": f})
    counts = {k: sum(1 for j in jobs if j[0] == k) for k in ("exhaustive", "random", "qed")}
    lines = [f"{k}: {n} graphs" for k, n in counts.items()]
    lines += [f"FAIL [{f['corpus']}] {f['graph']}: {f['failure']}" for f in failures]
    lines.append("all identities hold" if not failures else f"{len(failures)} failures")
    obj = {"graphs": counts, "failures": failures, "seed": cfg.seed}
    return (1 if failures else 0), _emit(cfg, "\n".join(lines), obj)


HANDLERS = {
    "psi": _cmd_psi,
    "phi": _cmd_phi,
    "chi": _cmd_chi,
    "xpoly": _cmd_xpoly,
    "numerator": _cmd_numerator,
    "verify-theorem": _cmd_verify,
}


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute a command; returns (exit status, text to print on stdout)."""
    if cfg.command == "check-identities":
        return _cmd_identities(cfg)
    if cfg.input is None:
        raise SchemaError(f"{cfg.command} needs an input graph")
    G = parse_graph(_read_input(cfg.input))
    return HANDLERS[cfg.command](G, cfg)


# -- argument parsing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qedpoly", description="Graph polynomials and QED integrand numerators.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, graph=True):
        p = sub.add_parser(name, help=help_text)
        if graph:
            p.add_argument("input", help="graph JSON file, or - for stdin")
        p.add_argument("--output", choices=("text", "json"), default="text")
        return p

    add("psi", "Kirchhoff polynomial")
    p = add("phi", "second Symanzik polynomial")
    p.add_argument("--momenta", action="store_true", help="evaluate at external momenta")
    p = add("chi", "cycle polynomial or one of its restrictions")
    p.add_argument("--edge", type=int)
    p.add_argument("--edge2", type=int)
    p = add("xpoly", "the X polynomial of an edge")
    p.add_argument("--edge", type=int, required=True)
    p.add_argument("--momenta", action="store_true")
    p = add("numerator", "QED numerator")
    p.add_argument("--gauge", choices=(GENERAL, FEYNMAN), default=GENERAL)
    p.add_argument("--momenta", action="store_true")
    p = add("verify-theorem", "compare the numerator with direct differentiation")
    p.add_argument("--gauge", choices=(GENERAL, FEYNMAN), default=GENERAL)
    p = add("check-identities", "run the identity suite over generated graphs", graph=False)
    p.add_argument("--max-edges", type=int, default=5, help="exhaustive corpus size")
    p.add_argument("--samples", type=int, default=200, help="number of random graphs")
    p.add_argument("--random-max-edges", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    cfg = RunConfig(command=args.command, **{k: v for k, v in vars(args).items()
                                              if k != "command" and v is not None})
    try:
        status, text = run(cfg)
    except (QedPolyError, OSError, ValueError) as exc:
        body = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, ParseError):
            body.update(line=exc.line, field=exc.field)
        print(json.dumps(body, sort_keys=True), file=sys.stderr)
        return 2
    print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
