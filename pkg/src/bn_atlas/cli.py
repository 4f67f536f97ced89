"""Command-line interface: ``bn-atlas <command> ...``.

Exit codes: 0 success, 2 domain error or unusable output directory,
3 a finding (no decomposition found, hypothesis gap, failed verification),
4 a previously written scan file no longer re-verifies.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Sequence

from .certificates import Finding
from .chains import build_chain_prop31, build_chain_search, star_classification
from .core import LocusId, PointedLocusId, adjusted_rho, rho
from .dimension import expected_dim_certificate, render_tree, verify_dim_certificate
from .errors import BNError, DomainError
from .maximal import conjecture_status, enumerate_expected_maximal
from .noncontainment import LABELS, StratificationGraph, build_stratification_graph, consistency_check
from .prym import cor54_certificates, cor55_check, prym_params

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_FINDING = 3
EXIT_REVERIFY = 4


def dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _table(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _finding(kind: str, message: str, extra: dict[str, Any] | None = None) -> int:
    payload = {"finding": kind, "message": message}
    if extra:
        payload.update(extra)
    sys.stderr.write(dumps(payload))
    return EXIT_FINDING


# -- commands ----------------------------------------------------------------


def cmd_rho(args: argparse.Namespace) -> int:
    base = LocusId(args.g, args.r, args.d)
    if args.ram:
        value = adjusted_rho(PointedLocusId.from_vanishing(base, args.ram))
    else:
        value = rho(args.g, args.r, args.d)
    print(dumps({"rho": value}) if args.json else value, end="" if args.json else "\n")
    return EXIT_OK


def cmd_maximal(args: argparse.Namespace) -> int:
    loci = enumerate_expected_maximal(args.g)
    status = conjecture_status(args.g)
    if args.json:
        records = [{"g": L.g, "r": L.r, "d": L.d, "rho": L.rho} for L in loci]
        sys.stdout.write(dumps({"g": args.g, "status": status.to_dict(), "loci": records}))
        return EXIT_OK
    rows = [(L.g, L.r, L.d, L.rho, star_classification(L)) for L in loci]
    print(_table(("g", "r", "d", "rho", "(*)"), rows))
    flags = [name for name in ("exceptional", "verified_small", "ckk_family") if getattr(status, name)]
    print(f"status: {', '.join(flags) if flags else 'open'}")
    return EXIT_OK


def cmd_chain(args: argparse.Namespace) -> int:
    locus = LocusId(args.g, args.r, args.d)
    if args.mode == "prop31":
        chain = build_chain_prop31(locus)
    else:
        chain = build_chain_search(locus, tuple(args.allowed) if args.allowed else (-1, -2, -3))
    report = chain.report
    assert report is not None
    if args.json:
        sys.stdout.write(dumps(chain.to_dict()))
    else:
        print(f"{locus.label()}  rho={locus.rho}  k={chain.k}  mode={chain.mode}")
        rows = []
        for i, c in enumerate(chain.components, 1):
            left = ",".join(map(str, c.left.entries)) if c.left is not None else "-"
            right = ",".join(map(str, c.right.entries)) if c.right is not None else "-"
            rows.append((i, c.g, c.d, c.rho, left, right))
        print(_table(("i", "g_i", "d_i", "rho_i", "left", "right"), rows))
        for name, ok in report.checks.items():
            print(f"{name}: {'pass' if ok else 'FAIL'}")
        print(f"rho sum {report.rho_sum} vs rho {report.rho_total}: {report.additivity}")
    if not report.passed:
        return _finding("verification-failed", f"chain for {locus} fails {report.failures()}")
    return EXIT_OK


def cmd_poset(args: argparse.Namespace) -> int:
    graph = build_stratification_graph(args.g)
    report = consistency_check(graph)
    if args.dot:
        write_atomic(Path(args.dot), graph.to_dot())
    if args.json:
        write_atomic(Path(args.json), dumps(graph.to_dict()))
    print(_table(("node", "rho"), [(n.key(), n.rho) for n in graph.nodes]))
    print()
    rows = [(e.source.key(), e.target.key(), e.label, e.provenance) for e in graph.edges]
    print(_table(("from", "to", "label", "provenance"), rows))
    print(f"consistency: {'pass' if report.passed else 'FAIL'}")
    if not report.passed:
        return _finding("inconsistent-graph", "; ".join(report.problems))
    return EXIT_OK


def cmd_dimcert(args: argparse.Namespace) -> int:
    cert = expected_dim_certificate(LocusId(args.g, args.r, args.d))
    report = verify_dim_certificate(cert)
    if args.json:
        sys.stdout.write(dumps(cert.to_dict()))
    else:
        print(render_tree(cert))
        print(f"verified: {'pass' if report.passed else 'FAIL'} ({report.nodes} nodes)")
    if not report.passed:
        return _finding("verification-failed", "dimension certificate fails", {"failures": list(report.failures)})
    return EXIT_OK


def cmd_prym(args: argparse.Namespace) -> int:
    if args.cor55:
        result = cor55_check(args.r)
        if isinstance(result, Finding):
            sys.stdout.write(dumps(result.to_dict()))
            return _finding(result.kind, f"failed clauses: {', '.join(result.failed_clauses)}")
        sys.stdout.write(dumps(result.to_dict()))
        return EXIT_OK
    params = prym_params(args.r, args.eps)
    certs = cor54_certificates(args.r, args.eps)
    if args.json:
        sys.stdout.write(dumps({"params": params.to_dict(), "certificates": [c.to_dict() for c in certs]}))
        return EXIT_OK
    t = params.target
    print(f"base genus {params.g_base}, source genus {params.g_tilde}, target {t.label()} rho={params.rho}")
    rows = [(c.witness["s"], c.witness["e"], c.witness["rho"], c.kind, c.verified) for c in certs]
    print(_table(("s", "e", "rho", "kind", "verified"), rows))
    return EXIT_OK


# -- scan --------------------------------------------------------------------


def _genus_payload(g: int) -> str:
    graph = build_stratification_graph(g)
    return dumps({"graph": graph.to_dict()})


def _label_counts(graph_dict: dict[str, Any]) -> dict[str, int]:
    counts = {label: 0 for label in LABELS}
    for e in graph_dict["edges"]:
        counts[e["label"]] += 1
    return counts


def _reverify(path: Path, g: int) -> tuple[dict[str, Any] | None, str | None]:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        graph = StratificationGraph.from_dict(data["graph"])
    except (OSError, ValueError, KeyError, TypeError, BNError) as exc:
        return None, f"{path}: unreadable ({exc})"
    if graph.g != g:
        return None, f"{path}: holds genus {graph.g}"
    report = consistency_check(graph)
    if not report.passed:
        return None, f"{path}: {report.problems[0]}"
    return data["graph"], None


def cmd_scan(args: argparse.Namespace) -> int:
    lo, hi = args.from_g, args.to_g
    if lo < 3 or hi < lo:
        raise DomainError(f"need 3 <= --from <= --to, got {lo}..{hi}")
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = tempfile.NamedTemporaryFile(dir=out, prefix=".probe.", delete=True)
        probe.close()
    except OSError as exc:
        sys.stderr.write(f"error: cannot write to {out}: {exc}\n")
        return EXIT_DOMAIN

    graphs: dict[int, dict[str, Any]] = {}
    failures: list[str] = []
    todo: list[int] = []
    for g in range(lo, hi + 1):
        path = out / f"g-{g}.json"
        if path.exists():
            graph, problem = _reverify(path, g)
            if problem is not None:
                failures.append(problem)
            else:
                graphs[g] = graph  # type: ignore[assignment]
                print(f"g={g} verified")
        else:
            todo.append(g)

    if args.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            payloads = list(pool.map(_genus_payload, todo))
    else:
        payloads = [_genus_payload(g) for g in todo]
    for g, text in zip(todo, payloads):
        write_atomic(out / f"g-{g}.json", text)
        graphs[g] = json.loads(text)["graph"]
        print(f"g={g} computed")

    if failures:
        for line in failures:
            sys.stderr.write(f"re-verification failed: {line}\n")
        return EXIT_REVERIFY
    summary = {
        "from": lo,
        "to": hi,
        "genera": {str(g): {"nodes": len(graphs[g]["nodes"]), "edges": _label_counts(graphs[g])} for g in sorted(graphs)},
    }
    write_atomic(out / "summary.json", dumps(summary))
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bn-atlas", description="Brill-Noether loci: numbers, chains, certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def triple(p: argparse.ArgumentParser) -> None:
        p.add_argument("--g", type=int, required=True)
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("rho", help="Brill-Noether number, optionally adjusted by marked points")
    triple(p)
    p.add_argument("--ram", type=_int_list, action="append", default=[],
                   help="vanishing sequence a0,...,ar at one marked point (repeatable)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("maximal", help="expected maximal loci of a genus")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_maximal)

    p = sub.add_parser("chain", help="chain-of-curves decomposition with verification report")
    triple(p)
    p.add_argument("--mode", choices=("prop31", "search"), default="prop31")
    p.add_argument("--allowed", type=_int_list, default=None, help="allowed component rho values, e.g. -1,-2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("poset", help="stratification graph of one genus")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--dot", metavar="PATH")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("dimcert", help="expected-dimension recursion tree")
    triple(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dimcert)

    p = sub.add_parser("prym", help="non-containments from double-cover source curves")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--eps", type=int, default=0)
    p.add_argument("--cor55", action="store_true", help="check the g = r^2+r+1 case for (r-1, g-3)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_prym)

    p = sub.add_parser("scan", help="write per-genus graphs and a summary to a directory")
    p.add_argument("--from", dest="from_g", type=int, required=True)
    p.add_argument("--to", dest="to_g", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-1,-2" as an option flag
    out: list[str] = []
    i = 0
    while i < len(argv):
        if argv[i] in ("--allowed", "--ram") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
            continue
        out.append(argv[i])
        i += 1
    return out


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(_glue_negative_values(list(sys.argv[1:] if argv is None else argv)))
    try:
        return args.func(args)
    except DomainError as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return EXIT_DOMAIN
    except BNError as exc:
        return _finding(exc.code, str(exc))


if __name__ == "__main__":
    raise SystemExit(main())
