"""Brill--Noether numbers, ramification data, Serre duality, trivial containments.

Everything here is exact integer arithmetic on small immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, NamedTuple, Sequence

from .errors import DomainError

#: largest genus accepted anywhere in the package
MAX_GENUS = 10**9
#: bound for r and d; keeps every product far inside a signed 64-bit word
MAX_PARAM = 2 * 10**9
_INT64 = 2**63


def _check_int(name: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DomainError(f"{name} must be an integer, got {value!r}")
    return value


def _checked(value: int) -> int:
    if not -_INT64 <= value < _INT64:
        raise OverflowError(f"intermediate value {value} leaves the 64-bit range")
    return value


def bn_number(g: int, r: int, d: int) -> int:
    """``g - (r+1)(g-d+r)`` with no domain checks.

    Used for chain components and degenerate recursion children, where the
    genus may be 0 or 1.
    """
    return g - (r + 1) * (g - d + r)


def rho(g: int, r: int, d: int) -> int:
    """Brill--Noether number of the triple (g, r, d)."""
    _validate_triple(g, r, d)
    return _checked(bn_number(g, r, d))


def expected_codimension(g: int, r: int, d: int) -> int:
    return max(0, -rho(g, r, d))


def _validate_triple(g: int, r: int, d: int) -> None:
    _check_int("g", g)
    _check_int("r", r)
    _check_int("d", d)
    if g < 2:
        raise DomainError(f"genus must be at least 2, got g={g}")
    if r < 0 or d < 0:
        raise DomainError(f"r and d must be non-negative, got r={r}, d={d}")
    if g > MAX_GENUS:
        raise DomainError(f"genus {g} exceeds the supported bound {MAX_GENUS}")
    if r > MAX_PARAM or d > MAX_PARAM:
        raise DomainError(f"r={r} or d={d} exceeds the supported bound {MAX_PARAM}")


@dataclass(frozen=True, order=True)
class LocusId:
    """The Brill--Noether locus M^r_{g,d}, identified by its triple."""

    g: int
    r: int
    d: int
    canonical: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        _validate_triple(self.g, self.r, self.d)
        if self.canonical and self.d > self.g - 1:
            raise DomainError(f"{self} is flagged canonical but d > g-1")

    @property
    def rho(self) -> int:
        return bn_number(self.g, self.r, self.d)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.g, self.r, self.d)

    def to_dict(self) -> dict[str, int]:
        return {"g": self.g, "r": self.r, "d": self.d}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> LocusId:
        return cls(int(data["g"]), int(data["r"]), int(data["d"]))

    def label(self) -> str:
        return f"M^{self.r}_{{{self.g},{self.d}}}"

    def key(self) -> str:
        return f"{self.g}_{self.r}_{self.d}"

    def __str__(self) -> str:
        return f"({self.g},{self.r},{self.d})"


@dataclass(frozen=True)
class RamificationSequence:
    """A ramification sequence 0 <= b_0 <= ... <= b_r <= d - r of type (r, d)."""

    entries: tuple[int, ...]
    r: int
    d: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        b = self.entries
        if len(b) != self.r + 1:
            raise DomainError(f"ramification sequence {b} has length {len(b)}, expected r+1={self.r + 1}")
        for x in b:
            _check_int("ramification entry", x)
        if b[0] < 0 or b[-1] > self.d - self.r:
            raise DomainError(f"ramification sequence {b} leaves [0, d-r] = [0, {self.d - self.r}]")
        if any(x > y for x, y in zip(b, b[1:])):
            raise DomainError(f"ramification sequence {b} is not non-decreasing")

    @property
    def weight(self) -> int:
        return sum(self.entries)

    def to_vanishing(self) -> VanishingSequence:
        return VanishingSequence(tuple(b + i for i, b in enumerate(self.entries)), self.r, self.d)


@dataclass(frozen=True)
class VanishingSequence:
    """A vanishing sequence 0 <= a_0 < ... < a_r <= d of type (r, d)."""

    entries: tuple[int, ...]
    r: int
    d: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        a = self.entries
        if len(a) != self.r + 1:
            raise DomainError(f"vanishing sequence {a} has length {len(a)}, expected r+1={self.r + 1}")
        for x in a:
            _check_int("vanishing entry", x)
        if a[0] < 0 or a[-1] > self.d:
            raise DomainError(f"vanishing sequence {a} leaves [0, d] = [0, {self.d}]")
        if any(x >= y for x, y in zip(a, a[1:])):
            raise DomainError(f"vanishing sequence {a} is not strictly increasing")

    @classmethod
    def consecutive(cls, start: int, r: int, d: int) -> VanishingSequence:
        """The run (start, start+1, ..., start+r): a base point of order ``start``."""
        return cls(tuple(range(start, start + r + 1)), r, d)

    @property
    def weight(self) -> int:
        return sum(self.entries) - self.r * (self.r + 1) // 2

    def to_ramification(self) -> RamificationSequence:
        return RamificationSequence(tuple(a - i for i, a in enumerate(self.entries)), self.r, self.d)

    def is_consecutive(self) -> bool:
        return self.entries[-1] - self.entries[0] == self.r


def vanishing_weight(entries: Sequence[int]) -> int:
    """Weight of a vanishing sequence given as bare integers."""
    n = len(entries)
    return sum(entries) - n * (n - 1) // 2


@dataclass(frozen=True)
class PointedLocusId:
    """A locus M^r_{g,d}(a^1, ..., a^n) with ramification imposed at n marked points."""

    base: LocusId
    marks: tuple[RamificationSequence, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "marks", tuple(self.marks))
        for m in self.marks:
            if (m.r, m.d) != (self.base.r, self.base.d):
                raise DomainError(
                    f"mark of type ({m.r},{m.d}) does not match base type ({self.base.r},{self.base.d})"
                )

    @classmethod
    def from_vanishing(cls, base: LocusId, sequences: Iterable[Sequence[int]]) -> PointedLocusId:
        marks = tuple(VanishingSequence(tuple(s), base.r, base.d).to_ramification() for s in sequences)
        return cls(base, marks)


def adjusted_rho(p: PointedLocusId) -> int:
    """rho(g, r, d) minus the total ramification weight of the marks."""
    for m in p.marks:
        if (m.r, m.d) != (p.base.r, p.base.d):
            raise DomainError("mark/type mismatch")
    return rho(p.base.g, p.base.r, p.base.d) - sum(m.weight for m in p.marks)


def serre_dual(locus: LocusId) -> LocusId:
    """M^r_{g,d} = M^{g-d+r-1}_{g,2g-2-d}."""
    g, r, d = locus.as_tuple()
    if d > 2 * g - 2:
        raise DomainError(f"Serre duality needs d <= 2g-2, got d={d} for g={g}")
    r_dual = g - d + r - 1
    if r_dual < 0:
        raise DomainError(f"dual dimension g-d+r-1 = {r_dual} is negative for {locus}")
    return LocusId(g, r_dual, 2 * g - 2 - d)


def canonicalize(locus: LocusId) -> LocusId:
    """Representative with d <= g-1, flagged canonical."""
    if locus.d > 2 * locus.g - 2:
        raise DomainError(f"canonical form needs d <= 2g-2, got {locus}")
    target = locus if locus.d <= locus.g - 1 else serre_dual(locus)
    return LocusId(target.g, target.r, target.d, canonical=True)


def is_realizable(g: int, r: int, d: int) -> bool:
    """Whether some smooth genus-g curve carries a g^r_d.

    After Serre duality into d <= g-1 this is Clifford's bound 2r <= d,
    attained on hyperelliptic curves; r = 0 and rho >= 0 are always realizable.
    """
    if g < 0 or r < 0 or d < 0:
        return False
    if g <= 1:
        # rational or elliptic: g^r_d exists iff h^0 of a degree-d bundle can reach r+1
        if g == 0:
            return d >= r
        return r == 0 or d >= r + 1
    if bn_number(g, r, d) >= 0 or r == 0:
        return True
    if d > 2 * g - 2:
        return d - g + 1 >= r + 1
    if d > g - 1:
        r, d = g - d + r - 1, 2 * g - 2 - d
        if r <= 0:
            return r == 0
    return 2 * r <= d


class TrivialContainment(NamedTuple):
    target: LocusId
    rule: str
    rho: int


def trivial_containments(locus: LocusId) -> list[TrivialContainment]:
    """One-step trivial containments out of a locus with rho < 0.

    The add-basepoint target is always listed (with its rho) so a caller can see
    whether the locus is maximal in the degree direction.
    """
    g, r, d = locus.as_tuple()
    if rho(g, r, d) >= 0:
        raise DomainError(f"trivial containments are defined for rho < 0, {locus} has rho={rho(g, r, d)}")
    out = [TrivialContainment(LocusId(g, r, d + 1), "add-basepoint", bn_number(g, r, d + 1))]
    if r >= 1 and d >= 1:
        below = bn_number(g, r - 1, d - 1)
        if below < 0:
            out.append(TrivialContainment(LocusId(g, r - 1, d - 1), "remove-non-basepoint", below))
    return out
