"""Expected maximal Brill--Noether loci and conjecture bookkeeping."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache
from math import isqrt

from .core import LocusId, bn_number, rho
from .errors import DomainError

#: genera in which the expected maximal loci are not all maximal
EXCEPTIONAL_GENERA = frozenset({7, 8, 9})
#: largest genus for which the maximality conjecture is known outright
VERIFIED_UP_TO = 23


def _require_genus(g: int, low: int = 3) -> None:
    if isinstance(g, bool) or not isinstance(g, int):
        raise DomainError(f"genus must be an integer, got {g!r}")
    if g < low:
        raise DomainError(f"genus must be at least {low}, got {g}")


def ceil_sqrt(n: int) -> int:
    s = isqrt(n)
    return s if s * s == n else s + 1


def r_max(g: int) -> int:
    """Largest r admitting an expected maximal locus in genus g.

    ceil(sqrt(g) - 1) when g >= s^2 + s (s = floor(sqrt(g))), else floor(sqrt(g) - 1).
    In the first branch g is never a square, so ceil(sqrt(g) - 1) = s.
    """
    _require_genus(g)
    s = isqrt(g)
    return s if g >= s * s + s else s - 1


def _require_r(g: int, r: int) -> None:
    top = r_max(g)
    if not 1 <= r <= top:
        raise DomainError(f"r={r} outside 1..r_max({g})={top}")


def d_max(g: int, r: int) -> int:
    """r + ceil(g r / (r+1)) - 1."""
    _require_r(g, r)
    return r + -(-g * r // (r + 1)) - 1


def exp_max_rho(g: int, r: int) -> int:
    """Brill--Noether number of the expected maximal locus with this r."""
    _require_r(g, r)
    return -(r + 1 - g % (r + 1))


@lru_cache(maxsize=4096)
def _enumerate(g: int) -> tuple[LocusId, ...]:
    return tuple(LocusId(g, r, d_max(g, r), canonical=True) for r in range(1, r_max(g) + 1))


def enumerate_expected_maximal(g: int) -> list[LocusId]:
    """Expected maximal loci of genus g, sorted by r."""
    _require_genus(g)
    return list(_enumerate(g))


def is_expected_maximal(locus: LocusId) -> bool:
    if locus.g < 3:
        return False
    return locus in _enumerate(locus.g)


def satisfies_small_rho_criterion(locus: LocusId) -> bool:
    """Sufficient test: 2r <= d <= g-1, r in range, and -r-1 <= rho <= -1."""
    g, r, d = locus.as_tuple()
    if g < 3 or r < 1 or r > r_max(g):
        return False
    if not 2 * r <= d <= g - 1:
        return False
    return -r - 1 <= rho(g, r, d) <= -1


def brute_force_expected_maximal(g: int) -> list[LocusId]:
    """Scan every (r, d) with 2r <= d <= g-1 against the defining rho conditions.

    Independent of the closed forms above; used as an oracle.
    """
    out = []
    for r in range(1, g + 1):
        for d in range(2 * r, g):
            if bn_number(g, r, d) < 0 and bn_number(g, r, d + 1) >= 0 and bn_number(g, r - 1, d - 1) >= 0:
                out.append(LocusId(g, r, d))
    return out


@dataclass(frozen=True)
class ConjectureStatus:
    g: int
    exceptional: bool
    verified_small: bool
    ckk_family: bool
    ckk_n: int | None

    def to_dict(self) -> dict:
        return asdict(self)


def lcm_prefix_values(limit: int) -> list[tuple[int, int]]:
    """Pairs (n, lcm(1..n)) for n >= 3 with lcm(1..n) <= limit; smallest n per value."""
    from math import lcm

    out: list[tuple[int, int]] = []
    value, n = 2, 2
    while True:
        n += 1
        nxt = lcm(value, n)
        if nxt > limit:
            break
        if nxt != value or not out:
            out.append((n, nxt))
        value = nxt
    return out


def conjecture_status(g: int) -> ConjectureStatus:
    _require_genus(g)
    witness = None
    for n, value in lcm_prefix_values(g + 2):
        if value in (g + 1, g + 2):
            witness = n
            break
    return ConjectureStatus(
        g=g,
        exceptional=g in EXCEPTIONAL_GENERA,
        verified_small=g <= VERIFIED_UP_TO,
        ckk_family=witness is not None,
        ckk_n=witness,
    )


def enumeration_records(g: int) -> list[dict[str, int]]:
    return [{"g": L.g, "r": L.r, "d": L.d, "rho": L.rho} for L in enumerate_expected_maximal(g)]
