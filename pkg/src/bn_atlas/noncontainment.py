"""Non-containment certificates and the per-genus stratification graph.

An edge ``A -> B`` states something about whether the locus A lies inside B:
``not-contained`` (A is not a subset of B), ``contained``, or ``unknown``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Callable

from .certificates import Certificate
from .chains import ChainDecomposition, build_chain_prop31, prop31_k, star_classification, verify_chain
from .core import LocusId, bn_number, canonicalize, serre_dual, trivial_containments
from .dimension import DimCertificate, expected_dim_certificate, verify_dim_certificate
from .errors import BNError, DomainError
from .maximal import ConjectureStatus, conjecture_status, enumerate_expected_maximal, is_expected_maximal
from .prym import params_for_genus, prym_certificate, recheck_prym

LABELS = ("contained", "not-contained", "unknown")
NONCONTAINMENT_KINDS = frozenset({"dim-thm34", "prym-schwarz", "prym-parity"})
CONTAINMENT_KINDS = frozenset({"trivial-containment", "serre-identification"})


# -- pointed rules -----------------------------------------------------------


def rule_divisor_vs_deeper(rho_a: int, rho_b: int) -> bool:
    """Adjusted rho -1 against a target of adjusted rho at most -2 (one or two marks)."""
    return rho_a == -1 and rho_b <= -2


def rule_codim2_vs_deeper(locus: LocusId, rho_b: int) -> bool:
    g, r, d = locus.as_tuple()
    return bn_number(g, r, d) == -2 and d < g + r and r + 1 <= g - d + r and rho_b <= -3


def divisor_rule_certificate(rho_a: int, rho_b: int) -> Certificate:
    subject = {"rho_a": rho_a, "rho_b": rho_b}
    witness = {"rho_a_is_minus_one": rho_a == -1, "rho_b_at_most_minus_two": rho_b <= -2}
    return Certificate("pointed-divisor-rule", subject, witness, rule_divisor_vs_deeper(rho_a, rho_b))


def codim2_rule_certificate(locus: LocusId, rho_b: int) -> Certificate:
    g, r, d = locus.as_tuple()
    witness = {
        "rho": bn_number(g, r, d),
        "d_below_g_plus_r": d < g + r,
        "h1_at_least_r_plus_1": r + 1 <= g - d + r,
        "rho_b_at_most_minus_three": rho_b <= -3,
    }
    subject = {"locus": locus.to_dict(), "rho_b": rho_b}
    return Certificate("codim2-rule", subject, witness, rule_codim2_vs_deeper(locus, rho_b))


def _recheck_divisor_rule(cert: Certificate) -> bool:
    a, b = int(cert.subject["rho_a"]), int(cert.subject["rho_b"])
    return divisor_rule_certificate(a, b).witness == cert.witness and rule_divisor_vs_deeper(a, b)


def _recheck_codim2_rule(cert: Certificate) -> bool:
    locus = LocusId.from_dict(cert.subject["locus"])
    b = int(cert.subject["rho_b"])
    return codim2_rule_certificate(locus, b).witness == cert.witness and rule_codim2_vs_deeper(locus, b)


# -- identifications and trivial containments --------------------------------


def serre_certificate(locus: LocusId) -> Certificate:
    dual = serre_dual(locus)
    g, r, d = locus.as_tuple()
    witness = {"r_dual": g - d + r - 1, "d_dual": 2 * g - 2 - d}
    return Certificate("serre-identification", {"locus": locus.to_dict(), "dual": dual.to_dict()}, witness, True)


def _recheck_serre(cert: Certificate) -> bool:
    locus = LocusId.from_dict(cert.subject["locus"])
    dual = LocusId.from_dict(cert.subject["dual"])
    g, r, d = locus.as_tuple()
    return (
        cert.witness == {"r_dual": g - d + r - 1, "d_dual": 2 * g - 2 - d}
        and serre_dual(locus).as_tuple() == dual.as_tuple()
    )


def trivial_certificate(source: LocusId, target: LocusId, rule: str) -> Certificate:
    witness = {"rule": rule, "rho_source": source.rho, "rho_target": bn_number(*target.as_tuple())}
    subject = {"contained": source.to_dict(), "container": target.to_dict()}
    cert = Certificate("trivial-containment", subject, witness)
    return Certificate(cert.kind, subject, witness, _recheck_trivial(cert))


def _recheck_trivial(cert: Certificate) -> bool:
    source = LocusId.from_dict(cert.subject["contained"])
    target = LocusId.from_dict(cert.subject["container"])
    rule = cert.witness.get("rule")
    if cert.witness != {"rule": rule, "rho_source": source.rho, "rho_target": bn_number(*target.as_tuple())}:
        return False
    return any(t.target.as_tuple() == target.as_tuple() and t.rule == rule for t in trivial_containments(source))


def containment_path(source: LocusId, target: LocusId) -> list[Certificate] | None:
    """Trivial containments and Serre identifications leading from source into target.

    Only loci with rho < 0 are walked; a step into rho >= 0 reaches all of M_g.
    """
    start = canonicalize(source).as_tuple()
    goal = canonicalize(target).as_tuple()
    if start == goal:
        return None
    parent: dict[tuple[int, int, int], tuple[tuple[int, int, int], str, tuple[int, int, int]] | None] = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            break
        for step in trivial_containments(LocusId(*cur)):
            t = step.target
            if step.rho >= 0 or t.d > 2 * t.g - 2:
                continue
            nxt = canonicalize(t).as_tuple()
            if nxt not in parent:
                parent[nxt] = (cur, step.rule, t.as_tuple())
                queue.append(nxt)
    if goal not in parent:
        return None
    certs: list[Certificate] = []
    node = goal
    while parent[node] is not None:
        prev, rule, raw = parent[node]
        if raw != node:
            certs.append(serre_certificate(LocusId(*raw)))
        certs.append(trivial_certificate(LocusId(*prev), LocusId(*raw), rule))
        node = prev
    certs.reverse()
    return certs


def path_connects(certs: tuple[Certificate, ...] | list[Certificate], source: LocusId, target: LocusId) -> bool:
    """Whether the steps lead from source to target, up to Serre duality at each end."""
    try:
        cur = canonicalize(source).as_tuple()
        for c in certs:
            if c.kind == "trivial-containment":
                if canonicalize(LocusId.from_dict(c.subject["contained"])).as_tuple() != cur:
                    return False
                cur = LocusId.from_dict(c.subject["container"]).as_tuple()
            elif c.kind == "serre-identification":
                if LocusId.from_dict(c.subject["locus"]).as_tuple() != cur:
                    return False
                cur = LocusId.from_dict(c.subject["dual"]).as_tuple()
            else:
                return False
        return bool(certs) and canonicalize(LocusId(*cur)).as_tuple() == canonicalize(target).as_tuple()
    except (BNError, KeyError, TypeError, ValueError):
        return False


# -- chain-degeneration certificates ------------------------------------------


def _require_pair(a: LocusId, b: LocusId) -> None:
    if a.g != b.g:
        raise DomainError(f"loci of different genus: {a}, {b}")
    for x in (a, b):
        if not is_expected_maximal(x):
            raise DomainError(f"{x} is not expected maximal")


def _bound_rule(bound: int) -> str:
    return "pointed-divisor-rule" if bound == -1 else "codim2-rule"


def _thm34_witness(a: LocusId, b: LocusId, chain: ChainDecomposition) -> dict[str, Any]:
    bounds = list(chain.component_rhos)
    total = sum(bounds)
    return {
        "g": a.g,
        "rho_contained": a.rho,
        "rho_container": b.rho,
        "classification": star_classification(a),
        "k": chain.k,
        "genera": list(chain.genera),
        "chain": chain.to_dict(),
        "bounds": bounds,
        "bound_rules": [_bound_rule(x) for x in bounds],
        "bound_sum": total,
        # additivity would force rho(B) >= sum of bounds = rho(A) > rho(B)
        "inequality": {"lhs": b.rho, "rhs": total, "holds": b.rho >= total},
    }


def thm34_certificate(a: LocusId, b: LocusId) -> Certificate | None:
    """Certificate that A is not contained in B whenever rho(B) < rho(A)."""
    _require_pair(a, b)
    if b.rho >= a.rho:
        return None
    if star_classification(a) != "holds":
        # an exception-case locus has the unique minimal rho, so no such B exists
        raise AssertionError(f"{a} is an exception case but {b} has smaller rho")
    chain = build_chain_prop31(a)
    subject = {"contained": a.to_dict(), "container": b.to_dict()}
    cert = Certificate("dim-thm34", subject, _thm34_witness(a, b, chain))
    return Certificate(cert.kind, subject, cert.witness, _recheck_thm34(cert))


def _recheck_thm34(cert: Certificate) -> bool:
    a = LocusId.from_dict(cert.subject["contained"])
    b = LocusId.from_dict(cert.subject["container"])
    _require_pair(a, b)
    w = cert.witness
    if not b.rho < a.rho:
        return False
    chain = ChainDecomposition.from_dict(w["chain"])
    if chain.source.as_tuple() != a.as_tuple() or chain.mode == "search":
        return False
    if not verify_chain(chain).passed or chain.k != prop31_k(a.rho):
        return False
    bounds = [int(x) for x in w["bounds"]]
    if bounds != list(chain.component_rhos) or any(x not in (-1, -2) for x in bounds):
        return False
    if -1 in bounds[:-1] or sum(bounds) != a.rho:
        return False
    if w != _thm34_witness(a, b, chain):
        return False
    return not w["inequality"]["holds"]


# -- other certificate kinds --------------------------------------------------


def dim_component_certificate(locus: LocusId) -> Certificate:
    tree = expected_dim_certificate(locus)
    cert = Certificate("exp-dim-component", {"locus": locus.to_dict()}, {"tree": tree.to_dict()})
    return Certificate(cert.kind, cert.subject, cert.witness, _recheck_dim(cert))


def _recheck_dim(cert: Certificate) -> bool:
    tree = DimCertificate.from_dict(cert.witness["tree"])
    if tree.root.as_tuple() != LocusId.from_dict(cert.subject["locus"]).as_tuple():
        return False
    return verify_dim_certificate(tree).passed


_RECHECKERS: dict[str, Callable[[Certificate], bool]] = {
    "dim-thm34": _recheck_thm34,
    "pointed-divisor-rule": _recheck_divisor_rule,
    "codim2-rule": _recheck_codim2_rule,
    "trivial-containment": _recheck_trivial,
    "serre-identification": _recheck_serre,
    "prym-schwarz": recheck_prym,
    "prym-parity": recheck_prym,
    "exp-dim-component": _recheck_dim,
}


def recheck_certificate(cert: Certificate) -> bool:
    """Re-derive a certificate from its subject and witness alone. Never raises."""
    try:
        return bool(_RECHECKERS[cert.kind](cert))
    except (BNError, ValueError, KeyError, TypeError, AssertionError, AttributeError):
        return False


# -- graph ------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    source: LocusId
    target: LocusId
    label: str
    provenance: str
    certificates: tuple[Certificate, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "from": self.source.key(),
            "to": self.target.key(),
            "label": self.label,
            "provenance": self.provenance,
            "certificates": [c.to_dict() for c in self.certificates],
        }


def _locus_from_key(key: str) -> LocusId:
    g, r, d = (int(x) for x in key.split("_"))
    return LocusId(g, r, d)


@dataclass(frozen=True)
class StratificationGraph:
    g: int
    status: ConjectureStatus
    nodes: tuple[LocusId, ...]
    edges: tuple[Edge, ...]

    def edge(self, a: LocusId, b: LocusId) -> Edge | None:
        for e in self.edges:
            if e.source.as_tuple() == a.as_tuple() and e.target.as_tuple() == b.as_tuple():
                return e
        return None

    def edges_labeled(self, label: str) -> list[Edge]:
        return [e for e in self.edges if e.label == label]

    def to_dict(self) -> dict[str, Any]:
        return {
            "g": self.g,
            "header": self.status.to_dict(),
            "nodes": [{"key": n.key(), "g": n.g, "r": n.r, "d": n.d, "rho": n.rho} for n in self.nodes],
            "edges": [e.to_dict() for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> StratificationGraph:
        status = ConjectureStatus(**data["header"])
        nodes = tuple(LocusId(int(n["g"]), int(n["r"]), int(n["d"])) for n in data["nodes"])
        edges = tuple(
            Edge(
                _locus_from_key(e["from"]),
                _locus_from_key(e["to"]),
                str(e["label"]),
                str(e["provenance"]),
                tuple(Certificate.from_dict(c) for c in e["certificates"]),
            )
            for e in data["edges"]
        )
        return cls(int(data["g"]), status, nodes, edges)

    def to_dot(self) -> str:
        lines = [f'digraph "bn_g{self.g}" {{']
        for n in self.nodes:
            lines.append(f'  "{n.key()}" [label="{n.label()} (ρ={n.rho})"];')
        styles = {"not-contained": "solid", "unknown": "dashed", "contained": "bold"}
        for e in self.edges:
            lines.append(
                f'  "{e.source.key()}" -> "{e.target.key()}" [style={styles[e.label]}, label="{e.label}"];'
            )
        lines.append("}")
        return "\n".join(lines) + "\n"


def _pair_edge(a: LocusId, b: LocusId, prym_target: LocusId | None, prym_params) -> Edge:
    certs: list[Certificate] = []
    thm = thm34_certificate(a, b)
    if thm is not None:
        certs.append(thm)
    if prym_target is not None and a.as_tuple() == prym_target.as_tuple():
        pc = prym_certificate(prym_params, b.r, b.d)
        if pc is not None:
            certs.append(pc)
    if certs:
        return Edge(a, b, "not-contained", certs[0].kind, tuple(certs))
    path = containment_path(a, b)
    if path is not None:
        return Edge(a, b, "contained", "trivial-chain", tuple(path))
    return Edge(a, b, "unknown", "open")


def build_stratification_graph(g: int) -> StratificationGraph:
    nodes = tuple(LocusId(L.g, L.r, L.d) for L in enumerate_expected_maximal(g))
    params = params_for_genus(g)
    target = params.target if params is not None else None
    edges = tuple(_pair_edge(a, b, target, params) for a in nodes for b in nodes if a != b)
    return StratificationGraph(g, conjecture_status(g), nodes, edges)


@dataclass(frozen=True)
class ConsistencyReport:
    problems: tuple[str, ...]
    certificates_checked: int

    @property
    def passed(self) -> bool:
        return not self.problems


def consistency_check(graph: StratificationGraph) -> ConsistencyReport:
    problems: list[str] = []
    checked = 0
    try:
        expected = [L.as_tuple() for L in enumerate_expected_maximal(graph.g)]
    except DomainError as exc:
        return ConsistencyReport((f"bad genus: {exc}",), 0)
    keys = [n.as_tuple() for n in graph.nodes]
    for n in graph.nodes:
        if n.g != graph.g or not is_expected_maximal(n):
            problems.append(f"node {n} is not expected maximal in genus {graph.g}")
    if sorted(keys) != sorted(expected):
        problems.append("node set differs from the expected maximal loci")
    node_set = set(keys)
    labels: dict[tuple[tuple[int, int, int], tuple[int, int, int]], set[str]] = {}
    for e in graph.edges:
        pair = (e.source.as_tuple(), e.target.as_tuple())
        where = f"{e.source}->{e.target}"
        if pair[0] == pair[1]:
            problems.append(f"self-edge at {e.source}")
        if pair[0] not in node_set or pair[1] not in node_set:
            problems.append(f"edge {where} leaves the node set")
        if e.label not in LABELS:
            problems.append(f"edge {where} has unknown label {e.label!r}")
        labels.setdefault(pair, set()).add(e.label)
        subject = {"contained": e.source.to_dict(), "container": e.target.to_dict()}
        if e.label == "not-contained":
            if not e.certificates:
                problems.append(f"edge {where} is not-contained without a certificate")
            for c in e.certificates:
                checked += 1
                if c.kind not in NONCONTAINMENT_KINDS or c.subject != subject:
                    problems.append(f"edge {where} carries a mismatched {c.kind} certificate")
                elif not recheck_certificate(c):
                    problems.append(f"edge {where}: {c.kind} certificate fails re-verification")
        elif e.label == "contained":
            if not e.certificates:
                problems.append(f"edge {where} is contained without a proof")
            for c in e.certificates:
                checked += 1
                if c.kind not in CONTAINMENT_KINDS or not recheck_certificate(c):
                    problems.append(f"edge {where}: {c.kind} step fails re-verification")
            if e.certificates and not path_connects(e.certificates, e.source, e.target):
                problems.append(f"edge {where}: containment steps do not lead from source to target")
        elif e.certificates:
            problems.append(f"edge {where} is unknown but carries certificates")
    for pair, seen in sorted(labels.items()):
        if {"contained", "not-contained"} <= seen:
            problems.append(f"contradictory pair {LocusId(*pair[0])}->{LocusId(*pair[1])}")
    for a in keys:
        for b in keys:
            if a != b and (a, b) not in labels:
                problems.append(f"missing edge {LocusId(*a)}->{LocusId(*b)}")
    return ConsistencyReport(tuple(problems), checked)

