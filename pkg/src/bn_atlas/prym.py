"""Non-containments coming from source curves of unramified double covers.

Only the numerical hypotheses enter: a genus g' = 1 + r(r+1)/2 + eps base curve
has source curve of odd genus g = 2g' - 1, which always carries a g^r_{g-1}.
Two predicates on (g, s, e) rule out a g^s_e on the general such source.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .certificates import Certificate, Finding
from .core import LocusId, bn_number, canonicalize, rho
from .errors import DomainError
from .maximal import is_expected_maximal, r_max


@dataclass(frozen=True)
class PrymParams:
    r: int
    eps: int
    g_base: int
    g_tilde: int
    target: LocusId
    rho: int
    target_expected_maximal: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "eps": self.eps,
            "g_base": self.g_base,
            "g_tilde": self.g_tilde,
            "target": self.target.to_dict(),
            "rho": self.rho,
            "target_expected_maximal": self.target_expected_maximal,
        }


def _check_params(r: int, eps: int) -> None:
    if isinstance(r, bool) or not isinstance(r, int) or isinstance(eps, bool) or not isinstance(eps, int):
        raise DomainError("r and eps must be integers")
    if r < 1:
        raise DomainError(f"r must be at least 1, got {r}")
    if not 0 <= 2 * eps < r:
        raise DomainError(f"eps must satisfy 0 <= eps < r/2, got eps={eps}, r={r}")


def prym_params(r: int, eps: int) -> PrymParams:
    _check_params(r, eps)
    g_base = 1 + r * (r + 1) // 2 + eps
    g_tilde = 2 * g_base - 1
    target = LocusId(g_tilde, r, 2 * g_base - 2)
    return PrymParams(r, eps, g_base, g_tilde, target, rho(*target.as_tuple()), is_expected_maximal(target))


def params_for_genus(g: int) -> PrymParams | None:
    """The (r, eps) with g = 1 + r(r+1) + 2 eps, if there is one."""
    if g < 3 or g % 2 == 0:
        return None
    r = 1
    while r * (r + 1) <= g - 1:
        eps2 = g - 1 - r * (r + 1)
        if eps2 % 2 == 0 and eps2 < r:
            return prym_params(r, eps2 // 2)
        r += 1
    return None


def _require_odd(g_tilde: int) -> None:
    if g_tilde % 2 == 0:
        raise DomainError(f"source genus must be odd (2g-1), got {g_tilde}")


def schwarz_predicate(g_tilde: int, s: int, e: int) -> bool:
    """rho(g~, s, e) = -s - 1."""
    _require_odd(g_tilde)
    return rho(g_tilde, s, e) == -s - 1


def parity_predicate(g_tilde: int, s: int, e: int) -> bool:
    """rho(g~, s, e) = -s, e odd, s not 3 mod 4."""
    _require_odd(g_tilde)
    return rho(g_tilde, s, e) == -s and e % 2 == 1 and s % 4 != 3


def parity_predicate_case_form(g_tilde: int, s: int, e: int) -> bool:
    """Same predicate phrased as two cases: (s even, e odd) or (s = 1 mod 4, e odd)."""
    _require_odd(g_tilde)
    if rho(g_tilde, s, e) != -s:
        return False
    return (s % 2 == 0 and e % 2 == 1) or (s % 4 == 1 and e % 2 == 1)


def _parity_obstruction(s: int, e: int) -> dict[str, Any]:
    """The sum of s+1 vanishing orders of equal parity would have to be (s+1)e/2."""
    twice = (s + 1) * e
    half_integral = twice % 2 == 0
    return {
        "twice_required_sum": twice,
        "required_sum_integral": half_integral,
        "required_sum_parity": (twice // 2) % 2 if half_integral else None,
    }


def _prym_witness(params: PrymParams, s: int, e: int) -> dict[str, Any]:
    g = params.g_tilde
    return {
        "r": params.r,
        "eps": params.eps,
        "g_base": params.g_base,
        "g_tilde": g,
        "s": s,
        "e": e,
        "rho_target": params.rho,
        "rho": bn_number(g, s, e),
        "schwarz": schwarz_predicate(g, s, e),
        "parity": parity_predicate(g, s, e),
        "parity_obstruction": _parity_obstruction(s, e),
    }


def recheck_prym(cert: Certificate) -> bool:
    w = cert.witness
    try:
        params = prym_params(int(w["r"]), int(w["eps"]))
        s, e = int(w["s"]), int(w["e"])
        g = params.g_tilde
        if cert.subject != {"contained": params.target.to_dict(), "container": LocusId(g, s, e).to_dict()}:
            return False
        if _prym_witness(params, s, e) != w:
            return False
        if cert.kind == "prym-schwarz":
            return schwarz_predicate(g, s, e)
        if cert.kind == "prym-parity":
            ob = _parity_obstruction(s, e)
            # s even: (s+1)e is odd; s = 1 mod 4: (s+1)e/2 is odd; both contradict an even sum
            obstructed = (not ob["required_sum_integral"]) or ob["required_sum_parity"] == 1
            return parity_predicate(g, s, e) and parity_predicate_case_form(g, s, e) and obstructed
    except (DomainError, KeyError, TypeError, ValueError):
        return False
    return False


def prym_certificate(params: PrymParams, s: int, e: int) -> Certificate | None:
    g = params.g_tilde
    if schwarz_predicate(g, s, e):
        kind = "prym-schwarz"
    elif parity_predicate(g, s, e):
        kind = "prym-parity"
    else:
        return None
    subject = {"contained": params.target.to_dict(), "container": LocusId(g, s, e).to_dict()}
    cert = Certificate(kind, subject, _prym_witness(params, s, e))
    return Certificate(kind, subject, cert.witness, recheck_prym(cert))


def candidate_loci(g: int) -> list[LocusId]:
    """Canonical forms of every (g, s, e) with 1 <= s <= r_max(g), 2s <= e <= 2g-2, deduplicated."""
    seen: set[tuple[int, int, int]] = set()
    out = []
    for s in range(1, r_max(g) + 1):
        for e in range(2 * s, 2 * g - 1):
            if bn_number(g, s, e) >= 0:
                continue
            c = canonicalize(LocusId(g, s, e))
            if c.r < 1 or c.as_tuple() in seen:
                continue
            seen.add(c.as_tuple())
            out.append(c)
    return sorted(out)


def cor54_certificates(r: int, eps: int) -> list[Certificate]:
    """Every non-containment of the target locus the two predicates certify."""
    params = prym_params(r, eps)
    out = []
    for loc in candidate_loci(params.g_tilde):
        cert = prym_certificate(params, loc.r, loc.d)
        if cert is not None:
            out.append(cert)
    return out


def cor55_check(r: int) -> Certificate | Finding:
    """g = r^2 + r + 1 with r = 2 mod 4: test the literal hypotheses for (r-1, g-3)."""
    if isinstance(r, bool) or not isinstance(r, int) or r < 2 or r % 2 or r % 4 == 0:
        raise DomainError(f"r must be even and not divisible by 4, got {r!r}")
    params = prym_params(r, 0)
    g = params.g_tilde
    s, e = r - 1, g - 3
    rho_target = rho(g, r, g - 1)
    rho_other = rho(g, s, e)
    if rho_target != -r or rho_other != -r + 1:
        raise AssertionError(f"rho values {rho_target}, {rho_other} disagree with -r, -r+1")
    cert = prym_certificate(params, s, e)
    if cert is not None:
        return cert
    clauses = {
        "schwarz: rho = -s-1": rho_other == -s - 1,
        "parity: rho = -s": rho_other == -s,
        "parity: d is odd": e % 2 == 1,
        "parity: s != 3 mod 4": s % 4 != 3,
    }
    parity_failed = tuple(name for name, ok in clauses.items() if name.startswith("parity") and not ok)
    return Finding(
        kind="hypothesis-gap",
        subject={"contained": params.target.to_dict(), "container": LocusId(g, s, e).to_dict()},
        failed_clauses=parity_failed,
        details={"r": r, "g": g, "rho_target": rho_target, "rho_container": rho_other, "clauses": clauses},
    )
