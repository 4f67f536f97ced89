"""Recursion trees certifying a component of the expected dimension.

A tree node is a Brill--Noether triple. Internal nodes split the curve into a
two-component chain; leaves are base cases taken from the literature.
Case I peels off a hyperelliptic piece (r+2, r, 2r); Case II splits into
(3r+3+rho, r, 4r+rho) and a rho = 0 remainder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterator

from .core import LocusId, bn_number
from .errors import DomainError

CASE_I = "case-I-split"
CASE_II = "case-II-split"
BASE_R1 = "base-r1"
BASE_SMALL_GENUS = "base-small-genus"
BASE_RHO_ZERO = "base-rho-zero"
BASE_HYPERELLIPTIC = "base-hyperelliptic"
#: (8, 2, 7): Case II would return the node itself; rho = -1 loci are divisors
BASE_DIVISOR = "base-divisor"

LEAF_TAGS = frozenset({BASE_R1, BASE_SMALL_GENUS, BASE_RHO_ZERO, BASE_HYPERELLIPTIC, BASE_DIVISOR})
SPLIT_TAGS = frozenset({CASE_I, CASE_II})
#: leaves resting on results cited from elsewhere rather than checked here
AXIOM_TAGS = frozenset({BASE_R1, BASE_SMALL_GENUS, BASE_DIVISOR})

SMALL_GENUS = 7


def _ceil_half(n: int) -> int:
    return -(-n // 2)


def _canonical(g: int, r: int, d: int) -> tuple[int, int, int]:
    if d <= g - 1:
        return (g, r, d)
    return (g, g - d + r - 1, 2 * g - 2 - d)


@dataclass(frozen=True, eq=False)
class DimNode:
    tag: str
    given: tuple[int, int, int]
    locus: tuple[int, int, int]
    rho: int
    checks: dict[str, bool] = field(default_factory=dict)
    children: tuple[DimNode, ...] = ()

    def walk(self, path: str = "root") -> Iterator[tuple[str, DimNode]]:
        yield path, self
        for i, child in enumerate(self.children):
            yield from child.walk(f"{path}/{i}")

    def to_dict(self) -> dict[str, Any]:
        g, r, d = self.given
        cg, cr, cd = self.locus
        return {
            "tag": self.tag,
            "given": {"g": g, "r": r, "d": d},
            "locus": {"g": cg, "r": cr, "d": cd},
            "rho": self.rho,
            "checks": dict(self.checks),
            "children": [c.to_dict() for c in self.children],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DimNode:
        def triple(x: dict[str, Any]) -> tuple[int, int, int]:
            return (int(x["g"]), int(x["r"]), int(x["d"]))

        return cls(
            tag=str(data["tag"]),
            given=triple(data["given"]),
            locus=triple(data["locus"]),
            rho=int(data["rho"]),
            checks={str(k): bool(v) for k, v in data.get("checks", {}).items()},
            children=tuple(cls.from_dict(c) for c in data.get("children", [])),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DimNode):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class DimCertificate:
    root: LocusId
    tree: DimNode

    def to_dict(self) -> dict[str, Any]:
        return {"root": self.root.to_dict(), "tree": self.tree.to_dict()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DimCertificate:
        return cls(LocusId.from_dict(data["root"]), DimNode.from_dict(data["tree"]))

    def size(self) -> int:
        return sum(1 for _ in self.tree.walk())


def _case_one_checks(g: int, r: int, d: int, rho_value: int) -> dict[str, bool]:
    cg, cd = g - r - 2, d - r
    return {
        "hypotheses": g > SMALL_GENUS and r >= 2 and -rho_value >= r,
        "hyperelliptic_codim": bn_number(r + 2, r, 2 * r) == -r,
        "child_rho": bn_number(cg, r, cd) == rho_value + r,
        "child_codim_bound": -(rho_value + r) <= _ceil_half(cg),
        "child_degree_bound": cd <= 2 * cg - 2,
        "clifford_escape_not_triggered": not (g <= r + 4 and d <= r + 3),
    }


def _case_two_checks(g: int, r: int, d: int, rho_value: int) -> dict[str, bool]:
    g1, d1 = 3 * r + 3 + rho_value, 4 * r + rho_value
    g2, d2 = g - g1, d - 3 * r - rho_value
    return {
        "hypotheses": g > SMALL_GENUS and r >= 2 and -rho_value <= r - 1,
        "applicability": g > 3 * r + 2 + rho_value,
        "child1_rho": bn_number(g1, r, d1) == rho_value,
        "child1_codim_bound": -rho_value <= _ceil_half(g1),
        "child1_degree_bound": d1 <= 2 * g1 - 2,
        "child2_genus_nonnegative": g2 >= 0,
        "child2_degree_nonnegative": d2 >= 0,
        "child2_rho_zero": bn_number(g2, r, d2) == 0,
    }


@lru_cache(maxsize=None)
def _build(g: int, r: int, d: int) -> DimNode:
    given = (g, r, d)
    rho_value = bn_number(g, r, d)
    if rho_value >= 0:
        return DimNode(BASE_RHO_ZERO, given, given, rho_value)
    cg, cr, cd = _canonical(g, r, d)
    locus = (cg, cr, cd)
    if cr == 1:
        return DimNode(BASE_R1, given, locus, rho_value)
    if cg <= SMALL_GENUS:
        return DimNode(BASE_SMALL_GENUS, given, locus, rho_value)
    if -rho_value >= cr:
        checks = _case_one_checks(cg, cr, cd, rho_value)
        hyper = (cr + 2, cr, 2 * cr)
        leaf = DimNode(BASE_HYPERELLIPTIC, hyper, _canonical(*hyper), bn_number(*hyper))
        return DimNode(CASE_I, given, locus, rho_value, checks, (leaf, _build(cg - cr - 2, cr, cd - cr)))
    g1 = 3 * cr + 3 + rho_value
    if g1 == cg:
        if rho_value != -1:
            raise AssertionError(f"degenerate Case II split at {locus} with rho={rho_value}")
        return DimNode(BASE_DIVISOR, given, locus, rho_value)
    checks = _case_two_checks(cg, cr, cd, rho_value)
    first = _build(g1, cr, 4 * cr + rho_value)
    second = _build(cg - g1, cr, cd - 3 * cr - rho_value)
    return DimNode(CASE_II, given, locus, rho_value, checks, (first, second))


def expected_dim_certificate(locus: LocusId) -> DimCertificate:
    """Recursion tree for a locus with d <= 2g-2 and -rho <= ceil(g/2)."""
    g, r, d = locus.as_tuple()
    if d > 2 * g - 2:
        raise DomainError(f"hypothesis d <= 2g-2 fails: d={d} > {2 * g - 2}")
    rho_value = bn_number(g, r, d)
    if -rho_value > _ceil_half(g):
        raise DomainError(f"hypothesis -rho <= ceil(g/2) fails: {-rho_value} > {_ceil_half(g)}")
    return DimCertificate(locus, _build(g, r, d))


@dataclass(frozen=True)
class DimReport:
    failures: tuple[tuple[str, str], ...]
    nodes: int

    @property
    def passed(self) -> bool:
        return not self.failures


def _node_failures(node: DimNode) -> list[str]:
    bad: list[str] = []
    g, r, d = node.given
    rho_value = bn_number(g, r, d)
    if node.rho != rho_value:
        bad.append("rho")
    if rho_value < 0:
        if min(node.given) < 0 or g < 2 or d > 2 * g - 2:
            bad.append("given_range")
        elif node.locus != _canonical(g, r, d):
            bad.append("canonical_form")
    elif node.locus != node.given:
        bad.append("canonical_form")
    cg, cr, cd = node.locus
    tag = node.tag

    if tag in LEAF_TAGS:
        if node.children:
            bad.append("leaf_has_children")
        if tag == BASE_RHO_ZERO and rho_value < 0:
            bad.append("base_rho_zero")
        elif tag == BASE_R1 and not (rho_value < 0 and cr == 1):
            bad.append("base_r1")
        elif tag == BASE_SMALL_GENUS and not (rho_value < 0 and cg <= SMALL_GENUS):
            bad.append("base_small_genus")
        elif tag == BASE_HYPERELLIPTIC and not (node.given == (r + 2, r, 2 * r) and r >= 1 and rho_value == -r):
            bad.append("base_hyperelliptic")
        elif tag == BASE_DIVISOR and not (rho_value == -1 and cg > SMALL_GENUS and cr >= 2
                                          and 3 * cr + 3 + rho_value == cg):
            bad.append("base_divisor")
        return bad

    if tag not in SPLIT_TAGS:
        return bad + ["unknown_tag"]
    if len(node.children) != 2:
        return bad + ["split_arity"]
    if tag == CASE_I:
        expected_checks = _case_one_checks(cg, cr, cd, rho_value)
        want = [(cr + 2, cr, 2 * cr), (cg - cr - 2, cr, cd - cr)]
        if node.children[0].tag != BASE_HYPERELLIPTIC:
            bad.append("case_I_first_child_tag")
    else:
        expected_checks = _case_two_checks(cg, cr, cd, rho_value)
        g1 = 3 * cr + 3 + rho_value
        want = [(g1, cr, 4 * cr + rho_value), (cg - g1, cr, cd - 3 * cr - rho_value)]
    if [c.given for c in node.children] != want:
        bad.append("child_formula")
    bad.extend(name for name, ok in expected_checks.items() if not ok)
    if node.checks != expected_checks:
        bad.append("recorded_checks")
    return bad


def verify_dim_certificate(cert: DimCertificate) -> DimReport:
    """Re-derive every node's arithmetic; reports failures with their node path."""
    failures: list[tuple[str, str]] = []
    g, r, d = cert.root.as_tuple()
    if cert.tree.given != (g, r, d):
        failures.append(("root", "root_mismatch"))
    rho_value = bn_number(g, r, d)
    if d > 2 * g - 2 or -rho_value > _ceil_half(g):
        failures.append(("root", "root_hypotheses"))
    seen: dict[int, list[str]] = {}
    count = 0
    stack = [("root", cert.tree)]
    while stack:
        path, node = stack.pop()
        count += 1
        key = id(node)
        if key not in seen:
            seen[key] = _node_failures(node)
        failures.extend((path, name) for name in seen[key])
        for i in range(len(node.children) - 1, -1, -1):
            stack.append((f"{path}/{i}", node.children[i]))
    return DimReport(tuple(failures), count)


def render_tree(cert: DimCertificate) -> str:
    lines: list[str] = []

    def show(node: DimNode, depth: int) -> None:
        g, r, d = node.locus
        note = "" if node.given == node.locus else f"  [from ({node.given[0]},{node.given[1]},{node.given[2]})]"
        lines.append(f"{'  ' * depth}({g},{r},{d}) rho={node.rho} {node.tag}{note}")
        for child in node.children:
            show(child, depth + 1)

    show(cert.tree, 0)
    return "\n".join(lines)
