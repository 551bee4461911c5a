"""Virasoro operators L_m^(N) and order-by-order checks of the tau-function."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .cutjoin import TauSeries
from .exactalg import ZERO, DomainError, Key, TimesPolynomial, _strip, mpq

MU0 = TimesPolynomial({((), 0): mpq(1, 16), ((), 1): mpq(-1, 4)})


def apply_virasoro(m: int, p: TimesPolynomial) -> TimesPolynomial:
    """L_m p; lowers the weighted degree by 2m."""
    if m < 0:
        raise DomainError("Virasoro index must be non-negative")
    out: Dict[Key, mpq] = {}
    for (exps, d), c in p.items():
        n = len(exps)
        # 1/2 sum_k (2k+1) t_{2k+1} d_{2k+2m+1}
        for pos in range(m, n):
            e = exps[pos]
            if not e:
                continue
            k = pos - m
            base = list(exps) + [0] * max(0, k + 1 - n)
            base[pos] -= 1
            base[k] += 1
            key = (_strip(base), d)
            out[key] = out.get(key, ZERO) + c * mpq((2 * k + 1) * e, 2)
        # 1/4 sum_{a+b=m-1} d_{2a+1} d_{2b+1}
        for a in range(m):
            b = m - 1 - a
            if a >= n or b >= n:
                continue
            ea, eb = exps[a], exps[b]
            factor = ea * (ea - 1) if a == b else ea * eb
            if not factor:
                continue
            base = list(exps)
            base[a] -= 1
            base[b] -= 1
            key = (_strip(base), d)
            out[key] = out.get(key, ZERO) + c * mpq(factor, 4)
    result = TimesPolynomial(out)
    if m == 0:
        result = result + MU0 * p
    return result


@dataclass
class VirasoroReport:
    checked: List[Tuple[int, int]] = field(default_factory=list)
    failed: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_json_obj(self) -> dict:
        return {"virasoro": {"checked": [list(x) for x in self.checked], "failed": [list(x) for x in self.failed]}}


def virasoro_residual(tau: TauSeries, k: int, m: int) -> TimesPolynomial:
    lhs = apply_virasoro(m, tau[k])
    if tau.nu is not None:
        lhs = lhs.substitute_nu(tau.nu)
    return lhs - tau[k + 1].diff(2 * m + 1)


def check_virasoro(tau: TauSeries, m_max: int) -> VirasoroReport:
    """Check L_m tau^(k) = d/dt_{2m+1} tau^(k+1) for k < K and m <= m_max."""
    if tau.K < 1:
        raise DomainError("need at least one order beyond tau^(0)")
    report = VirasoroReport()
    for k in range(tau.K):
        for m in range(m_max + 1):
            report.checked.append((k, m))
            if not virasoro_residual(tau, k, m).is_zero():
                report.failed.append((k, m))
    return report


def string_residual(tau: TauSeries) -> List[TimesPolynomial]:
    return [virasoro_residual(tau, k, 0) for k in range(tau.K)]
