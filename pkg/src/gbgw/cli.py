"""Command-line entry point.

Exit codes: 0 success, 1 a verification found a nonzero residual, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional

from .exactalg import DomainError, TimesPolynomial, format_rational

COMMANDS = ("tau", "free-energy", "correlator", "schur", "verify", "bench")
SUITE_CHOICES = ("cutjoin", "virasoro", "schur", "freenergy", "sato", "correlators", "all")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    order: Optional[int] = None
    genus: Optional[int] = None
    n: Optional[int] = None
    level: Optional[int] = None
    nu: str = "symbolic"
    form: str = "t"
    coords: str = "x"
    suite: str = "all"
    format: str = "json"
    out: Optional[str] = None
    figure: Optional[str] = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        for name in ("order", "genus", "n", "level"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise UsageError(f"--{name} must be non-negative")
        if self.format == "csv" and not (self.command == "tau" or (self.command == "free-energy" and self.form == "t")):
            raise UsageError("csv output is only available for flat tables (tau, free-energy --form t)")
        if self.command == "correlator":
            if self.genus is None or self.n is None:
                raise UsageError("correlator needs --genus and --n")
            if self.n < 1:
                raise UsageError("--n must be at least 1")
        if self.command == "free-energy" and self.genus is None:
            raise UsageError("free-energy needs --genus")
        if self.command == "free-energy" and self.form == "bdecomp" and self.genus < 2:
            raise UsageError("bdecomp needs genus >= 2")
        if self.command == "schur" and self.level is None:
            raise UsageError("schur needs --level")
        if self.command == "bench" and self.order is not None and self.order < 1:
            raise UsageError("bench needs --order >= 1")


def _polynomial_rows(label: str, index: int, p: TimesPolynomial):
    for item in p.to_json_obj():
        mono = "*".join(f"t{k}^{e}" if e > 1 else f"t{k}" for k, e in item["t"].items()) or "1"
        yield [label, index, item["coeff"], item["nu"], mono]


def _tau(cfg: RunConfig):
    from .cutjoin import parse_nu, tau_expansion

    try:
        nu = parse_nu(cfg.nu)
    except (ValueError, TypeError, DomainError) as exc:
        raise UsageError(f"bad --nu: {exc}") from exc
    series = tau_expansion(3 if cfg.order is None else cfg.order, nu)
    if cfg.format == "csv":
        rows = [r for k, p in enumerate(series.orders) for r in _polynomial_rows("k", k, p)]
        return ["grade", "index", "coeff", "nu_power", "monomial"], rows
    return series.to_json_obj()


def _free_energy(cfg: RunConfig):
    from .freenergy import fixed_n_form, b_decompose, genus_table, to_moments

    g = cfg.genus
    order = cfg.order if cfg.order is not None else max(3 * g, 6)
    table = genus_table(order)
    if cfg.form == "t":
        if cfg.format == "csv":
            return ["grade", "index", "coeff", "S2_power", "monomial"], list(_polynomial_rows("g", g, table[g]))
        return {"genus": g, "order": order, "variable_nu": "S^2", "F": table[g].to_json_obj()}
    if cfg.form == "moments":
        return to_moments(g, table, order).to_json_obj()
    moments = {h: to_moments(h, table, order) for h in range(g + 1)}
    bd = b_decompose(g, fixed_n_form(g, moments))
    return {
        "genus": g,
        "order": order,
        "parts": {f"B{k}": p.to_json_obj() for k, p in bd.parts.items()},
        "residual_zero": bd.ok,
    }


def _correlator(cfg: RunConfig):
    from . import correlators as C

    if cfg.coords == "z":
        return C.to_z_differential(cfg.genus, cfg.n).to_json_obj()
    return C.correlator(cfg.genus, cfg.n).to_json_obj()


def _schur(cfg: RunConfig):
    from .schurkdv import Partition, c_constant, half_integer_nu, triangular_tau

    l = cfg.level
    return {
        "level": l,
        "partition": list(Partition.triangular(l).parts),
        "nu": format_rational(half_integer_nu(l)),
        "C": format_rational(c_constant(l)),
        "tau": triangular_tau(l).to_json_obj(),
    }


def _verify(cfg: RunConfig):
    from .verify import SUITES, run_suites

    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    return run_suites(names)


def bench(kmax: int, figure: Optional[str] = None) -> dict:
    """Wall time and term counts of the symbolic tau expansion, order by order."""
    from .cutjoin import clear_cache, tau_expansion

    clear_cache()
    rows = []
    start = time.perf_counter()
    for k in range(1, kmax + 1):
        p = tau_expansion(k)[k]
        elapsed = round(time.perf_counter() - start, 6)
        rows.append({"k": k, "terms": len(p.grouped()), "nu_terms": len(p), "seconds": elapsed})
    if figure:
        _bench_figure(rows, figure)
    return {"kmax": kmax, "nu": "symbolic", "rows": rows, "total_seconds": rows[-1]["seconds"]}


def _bench_figure(rows, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    ks = [r["k"] for r in rows]
    ax.semilogy(ks, [r["terms"] for r in rows], "o-", label="terms in tau^(k)")
    ax.set_xlabel("k")
    ax.set_ylabel("terms")
    ax2 = ax.twinx()
    ax2.plot(ks, [r["seconds"] for r in rows], "s--", color="tab:red", label="cumulative seconds")
    ax2.set_ylabel("seconds")
    fig.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _bench(cfg: RunConfig):
    return bench(10 if cfg.order is None else cfg.order, cfg.figure)


HANDLERS = {
    "tau": _tau,
    "free-energy": _free_energy,
    "correlator": _correlator,
    "schur": _schur,
    "verify": _verify,
    "bench": _bench,
}


def _serialize(result, fmt: str) -> str:
    if fmt == "csv":
        header, rows = result
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    return json.dumps(result, indent=2) + "\n"


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg.validate()
        result = HANDLERS[cfg.command](cfg)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    text = _serialize(result, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if cfg.command == "verify" and not result["ok"]:
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gbgw", description="Exact generalized BGW tau-function toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("tau", help="tau^(k) for k <= order")
    p.add_argument("--order", "-k", type=int)
    p.add_argument("--nu", default="symbolic", help='"symbolic" or an exact rational such as 25/4')
    common(p)

    p = sub.add_parser("free-energy", help="genus-g free energy")
    p.add_argument("--genus", "-g", type=int)
    p.add_argument("--order", "-k", type=int, help="weighted degree of the truncation")
    p.add_argument("--form", choices=("t", "moments", "bdecomp"), default="t")
    common(p)

    p = sub.add_parser("correlator", help="W_{g,n} in x (u-multilinear) or z coordinates")
    p.add_argument("--genus", "-g", "--g", dest="genus", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--coords", choices=("x", "z"), default="x")
    common(p)

    p = sub.add_parser("schur", help="triangular Schur tau-function")
    p.add_argument("--level", type=int)
    common(p)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=SUITE_CHOICES, default="all")
    common(p)

    p = sub.add_parser("bench", help="time the symbolic tau expansion")
    p.add_argument("--order", "-k", type=int)
    p.add_argument("--figure", help="also render a plot to this file")
    common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if v is not None or k in ("out", "figure")})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
