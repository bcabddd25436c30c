"""Command-line front end: construct, mf, sweep, predict, diagnose, verify."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import asym, ff, sets, seq, spectral, suites
from .errors import MeritError

FAMILIES = ("paley", "cyclotomic", "hall", "singer", "gmw", "sidelnikov")
SUITES = ("charsums", "sets", "tables", "spectral")
THREADS_ENV = "MERIT_THREADS"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    family: str | None = None
    p: int | None = None
    q: int | None = None
    m: int | None = None
    S: list[int] | None = None
    s: int | None = None
    inner: str | None = None
    r: int | None = None
    t: int | None = None
    R_grid: list[float] = field(default_factory=list)
    T_grid: list[float] = field(default_factory=list)
    nu: float | None = None
    R: float | None = None
    T: float | None = None
    maximize: bool = False
    input: str | None = None
    out: str | None = None
    format: str = "json"
    threads: int = 1
    exclude_origin: bool | None = None
    suite: str | None = None
    qmax: int | None = None
    primes: list[int] | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)


# -- parsing ------------------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _add_family(ap: argparse.ArgumentParser, required: bool = True) -> None:
    ap.add_argument("--family", choices=FAMILIES, required=required)
    ap.add_argument("--p", type=int, help="prime for paley, hall and cyclotomic sets")
    ap.add_argument("--q", type=int, help="field order for singer, gmw and sidelnikov sets")
    ap.add_argument("--m", type=int, help="cyclotomic order")
    ap.add_argument("--S", type=_int_list, help="comma-separated class indices")
    ap.add_argument("--s", type=int, help="subfield order for gmw")
    ap.add_argument("--inner", help="inner set: trivial, singer, paley, hall or gmw:<s>:<inner>")


def _add_common(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--out", help="output path (stdout if omitted)")
    ap.add_argument("--format", choices=("csv", "json"), default=None)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--save-config", help="also write the parsed run config as JSON here")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="meritds", description="Merit factors of sequences from difference sets.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    c = sub.add_parser("construct", help="write the +/- sequence of a family instance")
    _add_family(c)
    c.add_argument("--r", type=int, default=0)
    c.add_argument("--t", type=int)
    _add_common(c)

    m = sub.add_parser("mf", help="exact merit factor of a sequence")
    _add_family(m, required=False)
    m.add_argument("--in", dest="input", help="sequence file of + and - characters")
    m.add_argument("--r", type=int, default=0)
    m.add_argument("--t", type=int)
    _add_common(m)

    w = sub.add_parser("sweep", help="merit factors over an (R, T) grid with predictions")
    _add_family(w)
    w.add_argument("--R", dest="R_grid", type=_float_list, required=True)
    w.add_argument("--T", dest="T_grid", type=_float_list, required=True)
    _add_common(w)

    pr = sub.add_parser("predict", help="limiting merit factor phi_nu(R, T) or its maximum")
    pr.add_argument("--nu", type=float, required=True)
    pr.add_argument("--R", type=float)
    pr.add_argument("--T", type=float)
    pr.add_argument("--max", dest="maximize", action="store_true")
    _add_common(pr)

    d = sub.add_parser("diagnose", help="spectral deviation and periodic profile of an instance")
    _add_family(d)
    d.add_argument("--r", type=int, default=0)
    d.add_argument("--t", type=int)
    excl = d.add_mutually_exclusive_group()
    excl.add_argument("--exclude-origin", dest="exclude_origin", action="store_true", default=None)
    excl.add_argument("--include-origin", dest="exclude_origin", action="store_false")
    _add_common(d)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--qmax", type=int)
    v.add_argument("--m", type=int)
    v.add_argument("--primes", type=_int_list)
    v.add_argument("--family")
    v.add_argument("--q", type=int)
    v.add_argument("--p", type=int)
    _add_common(v)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    data = {k: v for k, v in vars(ns).items() if k in known and v is not None}
    cfg = RunConfig(**data)
    if ns.format is None:
        cfg.format = "csv" if ns.subcommand == "sweep" else "json"
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            cfg.threads = int(env)
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from exc
    if cfg.threads < 1:
        raise ConfigError("thread count must be at least 1")
    return cfg


# -- helpers ------------------------------------------------------------------------


def _need(cfg: RunConfig, name: str):
    val = getattr(cfg, name)
    if val is None:
        raise ConfigError(f"--{name} is required for family {cfg.family}")
    return val


def build_set(cfg: RunConfig) -> sets.SubsetOfGroup:
    fam = cfg.family
    if fam == "paley":
        return sets.build_paley(ff.make_prime_field(_need(cfg, "p")))
    if fam == "hall":
        return sets.build_hall(ff.make_prime_field(_need(cfg, "p")))
    if fam == "cyclotomic":
        return sets.build_cyclotomic(ff.make_prime_field(_need(cfg, "p")), _need(cfg, "m"), _need(cfg, "S"))
    if fam == "singer":
        return sets.build_singer(ff.make_field(_need(cfg, "q")))
    if fam == "sidelnikov":
        return sets.build_sidelnikov(ff.make_field(_need(cfg, "q")))
    if fam == "gmw":
        s = _need(cfg, "s")
        inner = cfg.inner or ("trivial" if s == 2 else "singer")
        return sets.build_gmw(ff.make_field(_need(cfg, "q")), s, sets.build_inner(inner, s))
    raise ConfigError(f"unknown family {fam!r}")


def family_nu(D: sets.SubsetOfGroup) -> float:
    """nu of the limiting function: family value for cyclotomic sets, 0 otherwise."""
    if D.kind == sets.ADDITIVE:
        return float(D.params["nu"])
    return 0.0


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _plain(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_plain) + "\n"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _num(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return seq.format_float(x)
    return x


# -- subcommands ----------------------------------------------------------------------


def cmd_construct(cfg: RunConfig) -> int:
    D = build_set(cfg)
    f = seq.realize(D, cfg.r or 0, cfg.t or D.n)
    if cfg.out:
        seq.write_sequence(f, cfg.out)
    else:
        sys.stdout.write(f.to_pm() + "\n")
    return 0


def _sequence_for(cfg: RunConfig) -> seq.LittlewoodSeq:
    if cfg.input:
        return seq.read_sequence(cfg.input)
    if not cfg.family:
        raise ConfigError("mf needs --in or a family spec")
    D = build_set(cfg)
    return seq.realize(D, cfg.r or 0, cfg.t or D.n)


def cmd_mf(cfg: RunConfig) -> int:
    f = _sequence_for(cfg)
    rep = seq.merit_factor(f)
    if cfg.format == "csv":
        _emit(cfg, _csv(["t", "sum_sq_acf", "F"], [[rep.t, rep.sum_sq_acf, _num(rep.merit_factor)]]))
    else:
        _emit(cfg, _json({"t": rep.t, "sum_sq_acf": rep.sum_sq_acf, "merit_factor": rep.merit_factor, **f.provenance()}))
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    if not cfg.R_grid or not cfg.T_grid:
        raise ConfigError("sweep grids must be nonempty")
    D = build_set(cfg)
    nu = family_nu(D)
    rows = []
    for row in seq.sweep(D, cfg.R_grid, cfg.T_grid, threads=cfg.threads):
        pred = asym.phi(nu, row.R, row.T)
        err = None if row.F is None else abs(row.F - pred)
        rows.append((row, pred, err))
    if cfg.format == "json":
        out = [
            {"R": r.R, "T": r.T, "r": r.r, "t": r.t, "F": r.F, "phi_pred": pred, "abs_err": err}
            for r, pred, err in rows
        ]
        _emit(cfg, _json({"family": D.family, "n": D.n, "nu": nu, "rows": out}))
    else:
        body = [[_num(r.R), _num(r.T), r.r, r.t, _num(r.F), _num(pred), _num(err)] for r, pred, err in rows]
        _emit(cfg, _csv(["R", "T", "r", "t", "F", "phi_pred", "abs_err"], body))
    return 0


def cmd_predict(cfg: RunConfig) -> int:
    if cfg.maximize:
        res = asym.phi_max(cfg.nu)
        out = {"nu": res.nu, "phi_max": res.phi_max, "T_opt": res.T_opt, "R_opt": res.R_opt}
    else:
        if cfg.R is None or cfg.T is None:
            raise ConfigError("predict needs --R and --T, or --max")
        out = {"nu": cfg.nu, "R": cfg.R, "T": cfg.T, "phi": asym.phi(cfg.nu, cfg.R, cfg.T)}
    if cfg.format == "csv":
        _emit(cfg, _csv(list(out), [[_num(v) for v in out.values()]]))
    else:
        _emit(cfg, _json(out))
    return 0


def cmd_diagnose(cfg: RunConfig) -> int:
    D = build_set(cfg)
    f = seq.realize(D, cfg.r or 0, cfg.t or D.n)
    out: dict = {"family": D.family, "n": D.n, "k": D.k}
    if len(f) <= spectral.LF_CAP:
        rep = spectral.lf_deviation(f, exclude_origin=cfg.exclude_origin, threads=cfg.threads)
        out["spectral"] = json.loads(rep.to_json())
        out["spectral"]["within_bound"] = rep.within_bound
    else:
        out["spectral"] = None
    if D.kind == sets.ADDITIVE:
        prof = spectral.periodic_profile(D)
        out["periodic_profile"] = prof.as_dict()
    _emit(cfg, _json(out))
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    suite = cfg.suite
    if suite == "charsums":
        checks = suites.charsums_suite(cfg.qmax or 256)
    elif suite == "sets":
        checks = suites.sets_suite(gmw_qmax=cfg.qmax or 1 << 10)
    elif suite == "tables":
        checks = suites.tables_suite(cfg.m, cfg.primes)
    elif suite == "spectral":
        if cfg.family:
            size = cfg.q or cfg.p
            if size is None:
                raise ConfigError("spectral suite with --family needs --q or --p")
            checks = [suites.spectral_check(cfg.family, size, threads=cfg.threads)]
        else:
            checks = suites.spectral_suite(threads=cfg.threads)
    else:
        raise ConfigError(f"unknown suite {suite!r}")
    passed = all(c.passed for c in checks)
    if cfg.format == "csv":
        _emit(cfg, _csv(["check", "passed"], [[c.name, int(c.passed)] for c in checks]))
    else:
        _emit(cfg, _json({"suite": suite, "passed": passed, "checks": [c.as_dict() for c in checks]}))
    return 0 if passed else 1


COMMANDS = {
    "construct": cmd_construct,
    "mf": cmd_mf,
    "sweep": cmd_sweep,
    "predict": cmd_predict,
    "diagnose": cmd_diagnose,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        if ns.save_config:
            with open(ns.save_config, "w") as fh:
                fh.write(cfg.to_json() + "\n")
        return COMMANDS[cfg.subcommand](cfg)
    except (MeritError, ConfigError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
