"""Chain-curve decompositions carrying refined limit linear series.

A decomposition of M^r_{g,d} is a chain C_1 u ... u C_k with sum g_i = g, and
for each node a pair of vanishing sequences (one per side) of type (r, d).
Component i then lies in the Brill--Noether locus (g_i, r, d_i) with
d_i = d - (sum of the first entries of its node sequences).

``enumerate_schedules`` is a brute-force enumerator over node data, kept
independent of the closed-form constructions so it can serve as an oracle.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, islice
from typing import Any, Iterator, NamedTuple, Sequence

from .core import LocusId, VanishingSequence, bn_number, is_realizable, rho, vanishing_weight
from .errors import DomainError, NoDecompositionFound
from .maximal import ceil_sqrt, is_expected_maximal

MODES = ("prop31-even", "prop31-odd", "search")

#: default oracle bounds: (max components, max degree)
DEFAULT_ORACLE_SCALE = (6, 30)
DEFAULT_CAP = 10**6
#: genus distributions tried per composition before a search gives up
SEARCH_BUDGET = 200_000


def oracle_scale() -> tuple[int, int]:
    """Bounds for ``enumerate_schedules``; BN_ATLAS_ORACLE_SCALE="K,D" raises them."""
    raw = os.environ.get("BN_ATLAS_ORACLE_SCALE")
    if not raw:
        return DEFAULT_ORACLE_SCALE
    try:
        k_text, d_text = raw.split(",")
        k, d = int(k_text), int(d_text)
    except ValueError as exc:
        raise DomainError(f"BN_ATLAS_ORACLE_SCALE must look like 'K,D', got {raw!r}") from exc
    return max(k, DEFAULT_ORACLE_SCALE[0]), max(d, DEFAULT_ORACLE_SCALE[1])


# -- condition (*) ---------------------------------------------------------


def star_lhs(locus: LocusId) -> int:
    m = -locus.rho
    r = locus.r
    return (2 * r + 1) * ((m + 1) // 2) - m // 2


def star_condition(locus: LocusId) -> bool:
    """(2r+1) floor((-rho+1)/2) - floor(-rho/2) <= g."""
    if locus.rho >= 0:
        raise DomainError(f"condition (*) is stated for rho < 0, {locus} has rho={locus.rho}")
    return star_lhs(locus) <= locus.g


def star_classification(locus: LocusId) -> str:
    """``exception-case`` iff -rho = r+1 = ceil(sqrt g) is odd and g is not a square.

    Only the direction holds => (*) is guaranteed; an exception-case locus may
    still satisfy (*).
    """
    if not is_expected_maximal(locus):
        raise DomainError(f"{locus} is not expected maximal")
    m = -locus.rho
    g = locus.g
    if m == locus.r + 1 == ceil_sqrt(g) and m % 2 == 1 and ceil_sqrt(g) ** 2 != g:
        return "exception-case"
    return "holds"


# -- data ------------------------------------------------------------------


@dataclass(frozen=True)
class ChainComponent:
    g: int
    d: int
    left: VanishingSequence | None
    right: VanishingSequence | None
    rho: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "g": self.g,
            "d": self.d,
            "left": list(self.left.entries) if self.left is not None else None,
            "right": list(self.right.entries) if self.right is not None else None,
            "rho": self.rho,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any], r: int, d: int) -> ChainComponent:
        def seq(x: Any) -> VanishingSequence | None:
            return None if x is None else VanishingSequence(tuple(int(v) for v in x), r, d)

        return cls(int(data["g"]), int(data["d"]), seq(data["left"]), seq(data["right"]), int(data["rho"]))


@dataclass(frozen=True)
class ChainReport:
    checks: dict[str, bool]
    rho_total: int
    rho_sum: int

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def additivity(self) -> str:
        """'equal' for refined data, 'strict' when the sum falls below, else 'violated'."""
        if self.rho_sum == self.rho_total:
            return "equal"
        return "strict" if self.rho_sum < self.rho_total else "violated"

    def failures(self) -> list[str]:
        return [name for name, ok in self.checks.items() if not ok]


@dataclass(frozen=True)
class ChainDecomposition:
    source: LocusId
    mode: str
    components: tuple[ChainComponent, ...]
    allowed_rhos: tuple[int, ...] = (-1, -2)
    report: ChainReport | None = field(default=None, compare=False)

    @property
    def k(self) -> int:
        return len(self.components)

    @property
    def genera(self) -> tuple[int, ...]:
        return tuple(c.g for c in self.components)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(c.d for c in self.components)

    @property
    def component_rhos(self) -> tuple[int, ...]:
        return tuple(c.rho for c in self.components)

    def to_dict(self) -> dict[str, Any]:
        report = self.report if self.report is not None else verify_chain(self)
        return {
            "source": self.source.to_dict(),
            "k": self.k,
            "mode": self.mode,
            "allowed_rhos": list(self.allowed_rhos),
            "components": [c.to_dict() for c in self.components],
            "report": dict(report.checks),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ChainDecomposition:
        source = LocusId.from_dict(data["source"])
        comps = tuple(ChainComponent.from_dict(c, source.r, source.d) for c in data["components"])
        if int(data["k"]) != len(comps):
            raise DomainError(f"k={data['k']} disagrees with {len(comps)} listed components")
        mode = data["mode"]
        if mode not in MODES:
            raise DomainError(f"unknown chain mode {mode!r}")
        chain = cls(source, mode, comps, tuple(int(x) for x in data.get("allowed_rhos", (-1, -2))))
        return chain.with_report()

    def with_report(self) -> ChainDecomposition:
        return ChainDecomposition(self.source, self.mode, self.components, self.allowed_rhos, verify_chain(self))

    def node_pairs(self) -> list[tuple[VanishingSequence | None, VanishingSequence | None]]:
        """(right side of C_i, left side of C_{i+1}) for every node."""
        return [(a.right, b.left) for a, b in zip(self.components, self.components[1:])]


def prop31_k(rho_value: int) -> int:
    return (-rho_value + 1) // 2


# -- verification ------------------------------------------------------------


def _entries(seq: VanishingSequence | None) -> tuple[int, ...]:
    return () if seq is None else tuple(seq.entries)


def _component_adjusted_rho(comp: ChainComponent, r: int, d: int) -> int:
    w = sum(vanishing_weight(_entries(s)) for s in (comp.left, comp.right) if s is not None)
    return bn_number(comp.g, r, d) - w


def verify_chain(chain: ChainDecomposition) -> ChainReport:
    """Re-check a decomposition from its numbers alone. Never raises."""
    g, r, d = chain.source.as_tuple()
    comps = chain.components
    k = len(comps)
    total = bn_number(g, r, d)
    checks: dict[str, bool] = {}

    structure = k >= 1
    for i, c in enumerate(comps):
        structure &= (c.left is None) == (i == 0)
        structure &= (c.right is None) == (i == k - 1)
    checks["structure"] = structure

    checks["genus_sum"] = sum(c.g for c in comps) == g

    if chain.mode == "search":
        checks["k_formula"] = True
    else:
        checks["k_formula"] = k == prop31_k(total) and chain.mode == ("prop31-even" if total % 2 == 0 else "prop31-odd")

    mod = r + 1
    if chain.mode == "prop31-even":
        checks["congruences"] = all(c.g % mod == (-2) % mod for c in comps)
    elif chain.mode == "prop31-odd":
        checks["congruences"] = all(c.g % mod == (-2) % mod for c in comps[:-1]) and bool(comps) and comps[-1].g % mod == (-1) % mod
    else:
        checks["congruences"] = all(c.g % mod == c.rho % mod for c in comps)

    checks["genus_bound"] = all(c.g > r - 1 and c.g >= 1 for c in comps)

    in_range = True
    for c in comps:
        for s in (c.left, c.right):
            if s is None:
                continue
            a = _entries(s)
            in_range &= len(a) == r + 1 and a[0] >= 0 and a[-1] <= d and all(x < y for x, y in zip(a, a[1:]))
    checks["vanishing_range"] = in_range

    checks["degree_bookkeeping"] = all(
        c.d == d - sum(_entries(s)[0] for s in (c.left, c.right) if s is not None) for c in comps
    ) if in_range else False

    refined = crude = True
    for left, right in chain.node_pairs():
        a, b = _entries(left), _entries(right)
        if len(a) != r + 1 or len(b) != r + 1:
            refined = crude = False
            continue
        sums = [a[i] + b[r - i] for i in range(r + 1)]
        refined &= all(s == d for s in sums)
        crude &= all(s >= d for s in sums)
    checks["refined_compatibility"] = refined
    checks["crude_compatibility"] = crude

    adjusted = [_component_adjusted_rho(c, r, d) for c in comps]
    checks["component_rho"] = all(c.rho == a for c, a in zip(comps, adjusted))
    checks["aspect_rho"] = all(bn_number(c.g, r, c.d) == a for c, a in zip(comps, adjusted))

    if chain.mode == "prop31-even":
        allowed_ok = all(a == -2 for a in adjusted)
    elif chain.mode == "prop31-odd":
        allowed_ok = bool(adjusted) and all(a == -2 for a in adjusted[:-1]) and adjusted[-1] == -1
    else:
        allowed_ok = all(a in chain.allowed_rhos for a in adjusted)
    checks["rho_allowed"] = allowed_ok

    checks["components_realizable"] = all(is_realizable(c.g, r, c.d) for c in comps)

    rho_sum = sum(adjusted)
    checks["additivity"] = rho_sum == total
    return ChainReport(checks, total, rho_sum)


# -- two-type construction ---------------------------------------------------


def _vanishing_schedule(
    r: int, d: int, genera: Sequence[int], degrees: Sequence[int], rhos: Sequence[int]
) -> tuple[ChainComponent, ...]:
    """Lay out consecutive-run node data for given component genera/degrees.

    v_i = d - d_i is split as v_i = v_i^1 + v_i^2 with v_i^1 = d - r - v_{i-1}^2,
    which makes every node refined; the last component takes v_k whole on its left.
    """
    k = len(genera)
    if k == 1:
        return (ChainComponent(genera[0], degrees[0], None, None, rhos[0]),)
    comps = []
    prev_right = d - degrees[0]
    comps.append(ChainComponent(genera[0], degrees[0], None, VanishingSequence.consecutive(prev_right, r, d), rhos[0]))
    for i in range(1, k):
        v = d - degrees[i]
        left = d - r - prev_right
        if i == k - 1:
            if left != v:
                raise AssertionError(f"last node does not close up: {left} != {v}")
            comps.append(ChainComponent(genera[i], degrees[i], VanishingSequence.consecutive(v, r, d), None, rhos[i]))
        else:
            right = v - left
            comps.append(
                ChainComponent(
                    genera[i],
                    degrees[i],
                    VanishingSequence.consecutive(left, r, d),
                    VanishingSequence.consecutive(right, r, d),
                    rhos[i],
                )
            )
            prev_right = right
    return tuple(comps)


def prop31_genera(g: int, r: int, rho_value: int) -> list[int]:
    """Start from (r-1, ..., r-1[, r]) and add r+1 cyclically from the first entry."""
    k = prop31_k(rho_value)
    start = [r - 1] * k
    if rho_value % 2:
        start[-1] = r
    remaining = g - sum(start)
    if remaining < 0 or remaining % (r + 1):
        raise AssertionError(f"genus {g} not reachable from {start} in steps of {r + 1}")
    steps = remaining // (r + 1)
    genera = list(start)
    for i in range(k):
        genera[i] += (r + 1) * (steps // k + (1 if i < steps % k else 0))
    return genera


def build_chain_prop31(locus: LocusId) -> ChainDecomposition:
    """Chain of components with rho_i in {-1, -2} following the even/odd construction."""
    g, r, d = locus.as_tuple()
    total = rho(g, r, d)
    if total >= 0:
        raise DomainError(f"{locus} has rho={total} >= 0; nothing to decompose")
    if d >= g + r:
        raise DomainError(f"construction needs d < g + r, got {locus}")
    if not star_condition(locus):
        raise DomainError(f"condition (*) fails for {locus}: {star_lhs(locus)} > {g}", code="star-violated")
    even = total % 2 == 0
    genera = prop31_genera(g, r, total)
    if any(gi <= r - 1 for gi in genera):
        raise DomainError(f"component genus <= r-1 in {genera}", code="empty-component")
    k = len(genera)
    degrees, rhos = [], []
    for i, gi in enumerate(genera):
        tail_odd = not even and i == k - 1
        shift = 1 if tail_odd else 2
        if (gi + shift) % (r + 1):
            raise AssertionError(f"(g_i + {shift}) not divisible by r+1 for g_i={gi}, r={r}")
        v = (gi + shift) // (r + 1) + d - r - gi
        degrees.append(d - v)
        rhos.append(-shift)
    comps = _vanishing_schedule(r, d, genera, degrees, rhos)
    chain = ChainDecomposition(locus, "prop31-even" if even else "prop31-odd", comps, (-1, -2))
    return chain.with_report()


# -- search mode -----------------------------------------------------------


def _compositions(total: int, parts: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Compositions of ``total`` into allowed parts: fewest parts first, larger parts earlier."""
    parts = sorted(set(parts), reverse=True)
    min_k = -(-total // parts[0])
    max_k = total // parts[-1]
    for k in range(min_k, max_k + 1):
        yield from _compositions_k(total, k, parts)


def _compositions_k(total: int, k: int, parts: Sequence[int]) -> Iterator[tuple[int, ...]]:
    if k == 0:
        if total == 0:
            yield ()
        return
    for p in parts:
        rest = total - p
        if parts[-1] * (k - 1) <= rest <= parts[0] * (k - 1):
            for tail in _compositions_k(rest, k - 1, parts):
                yield (p,) + tail


def _aspect_degree(gi: int, r: int, m: int) -> int:
    """Degree d_i with rho(g_i, r, d_i) = -m; needs (g_i + m) divisible by r+1."""
    return gi + r - (gi + m) // (r + 1)


def _smallest_genus(r: int, m: int, cap: int) -> int | None:
    """Smallest usable genus for a component of codimension m, or None below ``cap``."""
    gi = (-m) % (r + 1)
    while gi <= cap:
        if gi >= max(2, r) and _aspect_degree(gi, r, m) >= r and is_realizable(gi, r, _aspect_degree(gi, r, m)):
            return gi
        gi += r + 1
    return None


def _distributions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Ways to hand n increments to k slots: the cyclic spread first, then colex order."""
    cyclic = tuple(n // k + (1 if i < n % k else 0) for i in range(k))
    yield cyclic
    # colex over compositions of n into k non-negative parts (stars and bars)
    for bars in combinations(range(n + k - 1), k - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(n + k - 2 - prev)
        t = tuple(parts)
        if t != cyclic:
            yield t


def build_chain_search(locus: LocusId, allowed_rhos: Sequence[int] = (-1, -2, -3)) -> ChainDecomposition:
    """Search for a verified chain whose components all have rho in ``allowed_rhos``.

    Follows the shape of the even/odd construction: fix the multiset of
    component codimensions, start every genus at its least usable value in the
    right residue class mod r+1, and distribute the remaining genus in steps of
    r+1. Returns the first decomposition that passes ``verify_chain``.
    """
    allowed = tuple(sorted(set(allowed_rhos), reverse=True))
    if not allowed or any(a not in (-1, -2, -3) for a in allowed):
        raise DomainError(f"allowed_rhos must be a non-empty subset of {{-1,-2,-3}}, got {allowed_rhos!r}")
    g, r, d = locus.as_tuple()
    total = rho(g, r, d)
    if total >= 0:
        raise DomainError(f"{locus} has rho={total} >= 0; nothing to decompose")
    if d >= g + r:
        raise DomainError(f"construction needs d < g + r, got {locus}")
    if set(allowed) == {-1} and -total * (2 * r + 1) > g:
        raise DomainError(
            f"divisor decomposition needs -rho(2r+1) <= g, got {-total}*{2 * r + 1} > {g}", code="precondition"
        )
    if set(allowed) == {-1, -2, -3} and not is_expected_maximal(locus):
        raise DomainError(f"codimension <= 3 decomposition is stated for expected maximal loci; {locus} is not",
                          code="precondition")

    attempts = 0
    for parts in _compositions(-total, [-a for a in allowed]):
        base = [_smallest_genus(r, m, g) for m in parts]
        if any(b is None for b in base):
            continue
        spare = g - sum(base)  # type: ignore[arg-type]
        if spare < 0:
            continue
        if spare % (r + 1):
            raise AssertionError("residues of the base genera do not add up to g mod r+1")
        for incr in _distributions(spare // (r + 1), len(parts)):
            attempts += 1
            if attempts > SEARCH_BUDGET:
                raise NoDecompositionFound(f"search budget of {SEARCH_BUDGET} exhausted for {locus}")
            genera = [b + (r + 1) * x for b, x in zip(base, incr)]  # type: ignore[operator]
            degrees = [_aspect_degree(gi, r, m) for gi, m in zip(genera, parts)]
            if any(di < r for di in degrees):
                continue
            comps = _vanishing_schedule(r, d, genera, degrees, [-m for m in parts])
            chain = ChainDecomposition(locus, "search", comps, allowed).with_report()
            if chain.report is not None and chain.report.passed:
                return chain
    raise NoDecompositionFound(f"no chain with component rho in {set(allowed)} found for {locus}")


# -- brute-force schedule enumeration ------------------------------------


class Schedule(NamedTuple):
    """Node data for a chain: ``nodes[i]`` = (C_i side, C_{i+1} side)."""

    nodes: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    rhos: tuple[int, ...]
    total: int
    excess: int

    @property
    def refined(self) -> bool:
        return self.excess == 0


@lru_cache(maxsize=256)
def _vanishing_sequences(r: int, d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(d + 1), r + 1))


@lru_cache(maxsize=256)
def _node_pairs(r: int, d: int, refined_only: bool) -> tuple[tuple[tuple[tuple[int, ...], tuple[int, ...]], int, int, int], ...]:
    """((a, b), w(a), w(b), excess) for every admissible pair, lexicographic in (a, b)."""
    seqs = _vanishing_sequences(r, d)
    out = []
    for a in seqs:
        wa = vanishing_weight(a)
        for b in seqs:
            sums = [a[i] + b[r - i] - d for i in range(r + 1)]
            if min(sums) < 0:
                continue
            excess = sum(sums)
            if refined_only and excess:
                continue
            out.append(((a, b), wa, vanishing_weight(b), excess))
    return tuple(out)


def iter_schedules(
    genera: Sequence[int],
    r: int,
    d: int,
    refined_only: bool = True,
    max_excess: int | None = None,
) -> Iterator[Schedule]:
    """Lazily enumerate node data satisfying a_i + a'_{r-i} >= d (or = d when refined).

    ``max_excess`` bounds the total amount by which crude nodes exceed d.
    """
    k = len(genera)
    k_cap, d_cap = oracle_scale()
    if k < 1 or k > k_cap or d > d_cap:
        raise DomainError(f"oracle scale exceeded: k={k} (max {k_cap}), d={d} (max {d_cap})", code="oracle-scale")
    if r < 0 or d < r or any(gi < 0 for gi in genera):
        raise DomainError(f"bad oracle input genera={tuple(genera)}, r={r}, d={d}")
    base = [bn_number(gi, r, d) for gi in genera]
    if k == 1:
        yield Schedule((), (base[0],), base[0], 0)
        return
    pairs = _node_pairs(r, d, refined_only)
    if max_excess is not None:
        pairs = tuple(p for p in pairs if p[3] <= max_excess)
    make = tuple.__new__

    def extend(i: int, nodes: tuple, rhos: tuple[int, ...], excess: int) -> Iterator[Schedule]:
        # rhos[-1] is still missing the weight of the node to its right
        if i == k - 1:
            yield make(Schedule, (nodes, rhos, sum(rhos), excess))
            return
        nxt = base[i + 1]
        head = rhos[:-1]
        last = rhos[-1]
        for node, wa, wb, ex in pairs:
            if max_excess is not None and excess + ex > max_excess:
                continue
            yield from extend(i + 1, nodes + (node,), head + (last - wa, nxt - wb), excess + ex)

    yield from extend(0, (), (base[0],), 0)


def enumerate_schedules(
    genera: Sequence[int],
    r: int,
    d: int,
    refined_only: bool = True,
    cap: int = DEFAULT_CAP,
    max_excess: int | None = None,
) -> list[Schedule]:
    """Materialized ``iter_schedules``, truncated to ``cap`` entries."""
    return list(islice(iter_schedules(genera, r, d, refined_only, max_excess), cap))


def schedule_of(chain: ChainDecomposition) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """Node data of a decomposition in the format used by ``Schedule.nodes``."""
    return tuple((_entries(a), _entries(b)) for a, b in chain.node_pairs())


def chain_from_schedule(source: LocusId, genera: Sequence[int], schedule: Schedule,
                        allowed_rhos: Sequence[int] = (-1, -2, -3)) -> ChainDecomposition:
    """Wrap schedule data as a search-mode decomposition so ``verify_chain`` can inspect it."""
    r, d = source.r, source.d
    k = len(genera)
    comps = []
    for i, gi in enumerate(genera):
        left = VanishingSequence(schedule.nodes[i - 1][1], r, d) if i > 0 else None
        right = VanishingSequence(schedule.nodes[i][0], r, d) if i < k - 1 else None
        deg = d - sum(s.entries[0] for s in (left, right) if s is not None)
        comps.append(ChainComponent(gi, deg, left, right, schedule.rhos[i]))
    return ChainDecomposition(source, "search", tuple(comps), tuple(allowed_rhos)).with_report()
