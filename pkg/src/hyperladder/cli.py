"""hyperladder command line.

    hyperladder verify [ladder|ortho|norms|commutators|all] --family jacobi --alpha 0 --beta 0 --lmax 15
    hyperladder emit {poly,asf,potential,wavefunction,coherent,spectrum} ...
    hyperladder oracle numerov --family jacobi --alpha 3/2 --beta 3/2 --count 3
    hyperladder acceptance

Exit codes: 0 pass, 1 numeric-tolerance failure, 2 config/domain error,
3 internal assertion.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from .errors import ConsistencyError, DomainError
from .families import FamilySpec, classical_polynomial, eigenvalue, family_from_config
from .polynomial import as_rational

EXIT_OK, EXIT_NUMERIC, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3

# flags that make up a run configuration, with their defaults
CONFIG_KEYS = {
    "family": "jacobi",
    "alpha": None,
    "beta": None,
    "normalization": "conventional",
    "lmax": 10,
    "mmax": None,
    "l": 2,
    "m": 0,
    "tol": None,
    "grid": None,
    "sign": None,
    "count": 3,
    "z": "0",
    "clip": None,
    "out": None,
    "format": None,
}


def _workers() -> int:
    raw = os.environ.get("HYPERLADDER_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


class Writer:
    """The single sink every report line goes through."""

    def __init__(self, path: str | None):
        self.path = path
        self.lines: list[str] = []

    def write(self, line: str):
        self.lines.append(line)

    def close(self):
        text = "".join(line + "\n" for line in self.lines)
        if self.path is None:
            sys.stdout.write(text)
            return
        try:
            with open(self.path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise DomainError(f"cannot write {self.path}: {exc.strerror}") from None


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_encode)


def _encode(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _float(x: float):
    return x if math.isfinite(x) else None


# configuration


def load_config(args: argparse.Namespace) -> dict:
    cfg = dict(CONFIG_KEYS)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise DomainError(f"cannot read config {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise DomainError(f"config {args.config} is not valid JSON: {exc.msg}") from None
        unknown = set(loaded) - set(CONFIG_KEYS)
        if unknown:
            raise DomainError(f"unknown config keys {sorted(unknown)}")
        cfg.update(loaded)
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    for key in ("lmax", "l", "m", "count"):
        if int(cfg[key]) < 0:
            raise DomainError(f"{key} must be >= 0")
    if cfg["tol"] is not None and not float(cfg["tol"]) > 0:
        raise DomainError("tol must be > 0")
    if cfg["sign"] is not None and int(cfg["sign"]) not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    return cfg


def family_of(cfg: dict) -> FamilySpec:
    spec = {"family": cfg["family"], "normalization": cfg["normalization"]}
    for key in ("alpha", "beta"):
        if cfg[key] is not None:
            try:
                spec[key] = as_rational(str(cfg[key]))
            except (ValueError, ZeroDivisionError):
                raise DomainError(f"{key} must be a rational like 1/2, got {cfg[key]!r}") from None
    return family_from_config(spec)


def config_hash(cfg: dict, command: str) -> str:
    payload = {k: v for k, v in cfg.items() if k != "out"}
    payload["command"] = command
    return hashlib.sha256(_json(payload).encode()).hexdigest()[:16]


def parse_z(text) -> complex:
    if isinstance(text, (int, float, complex)):
        return complex(text)
    text = str(text).strip()
    try:
        if "," in text:
            re_part, im_part = text.split(",", 1)
            return complex(float(re_part), float(im_part))
        return complex(text.replace("i", "j"))
    except ValueError:
        raise DomainError(f"cannot parse z = {text!r}; use re,im or 2+1j") from None


# verify


def sweep_level(fam, l):
    from .ladder import (
        factorization_check,
        hm_check,
        intertwining_check,
        lowering_check,
        raising_check,
        three_term_asf_check,
    )

    for m in range(l + 1):
        yield raising_check(fam, l, m)
        yield hm_check(fam, l, m)
        if m < l:
            yield lowering_check(fam, l, m)
            yield factorization_check(fam, l, m)
            yield intertwining_check(fam, l, m)
        if 1 <= m <= l - 1:
            yield three_term_asf_check(fam, l, m)


def _ladder_records(fam, cfg, pool):
    lmax = int(cfg["lmax"])
    for reports in pool.map(lambda l: list(sweep_level(fam, l)), range(lmax + 1)):
        for rep in reports:
            yield {
                "check": rep.identity,
                "family": rep.family,
                "l": rep.l,
                "m": rep.m,
                "status": rep.status,
                "residual": str(rep.residual),
            }


def _worst_records(fam, cfg, pool, jobs, tol, mmax):
    lmax = int(cfg["lmax"])
    names = list(jobs)
    for name, worst in zip(names, pool.map(lambda k: jobs[k](), names)):
        yield {
            "check": name,
            "family": fam.label,
            "l": lmax,
            "m": mmax,
            "status": "pass" if worst <= tol else "fail",
            "residual": worst,
            "tol": tol,
        }


def _norm_records(fam, cfg, pool):
    from .hilbert import norm_ladder_worst

    lmax = int(cfg["lmax"])
    mmax = min(int(cfg["mmax"]) if cfg["mmax"] is not None else lmax, lmax)
    tol = float(cfg["tol"]) if cfg["tol"] is not None else 1e-10
    jobs = {"norm_ladder": lambda: norm_ladder_worst(fam, lmax, mmax)}
    yield from _worst_records(fam, cfg, pool, jobs, tol, mmax)


def _ortho_records(fam, cfg, pool):
    from .hilbert import adjointness_worst, creation_chain_deviation, orthogonality_worst

    lmax = int(cfg["lmax"])
    mmax = min(int(cfg["mmax"]) if cfg["mmax"] is not None else lmax, lmax)
    tol = float(cfg["tol"]) if cfg["tol"] is not None else 1e-10
    jobs = {
        "orthogonality": lambda: orthogonality_worst(fam, lmax, mmax),
        "adjointness": lambda: adjointness_worst(fam, lmax),
        "creation_chain": lambda: max(
            (creation_chain_deviation(fam, m, l) for m in range(mmax + 1) for l in range(m + 1, lmax + 1)),
            default=0.0,
        ),
    }
    yield from _worst_records(fam, cfg, pool, jobs, tol, mmax)


def _commutator_records(fam, cfg, pool):
    from .hilbert import classify_algebra, commutator_checks

    lmax = max(int(cfg["lmax"]), 1)
    mmax = min(int(cfg["mmax"]) if cfg["mmax"] is not None else 3, lmax - 1)
    tol = float(cfg["tol"]) if cfg["tol"] is not None else 1e-12
    for rep in pool.map(lambda m: commutator_checks(fam, m, lmax, tol), range(mmax + 1)):
        for c in rep.checks:
            yield {
                "check": c.identity,
                "family": rep.family,
                "l": rep.l_max,
                "m": rep.m,
                "status": "pass" if c.passed else "fail",
                "residual": str(c.residual) if isinstance(c.residual, Fraction) else c.residual,
            }
    cls = classify_algebra(fam, 0, lmax, tol)
    yield {
        "check": "algebra_class",
        "family": fam.label,
        "l": lmax,
        "m": 0,
        "status": "pass" if cls.verified else "fail",
        "residual": cls.tag.value,
    }


VERIFY_GROUPS = {
    "ladder": _ladder_records,
    "ortho": _ortho_records,
    "norms": _norm_records,
    "commutators": _commutator_records,
}


def cmd_verify(args) -> int:
    cfg = load_config(args)
    fam = family_of(cfg)
    groups = list(VERIFY_GROUPS) if args.what == "all" else [args.what]
    writer = Writer(cfg["out"])
    first_failure, total, failed = None, 0, 0
    with ThreadPoolExecutor(max_workers=_workers()) as pool:
        for group in groups:
            for rec in VERIFY_GROUPS[group](fam, cfg, pool):
                total += 1
                if rec["status"] != "pass":
                    failed += 1
                    first_failure = first_failure or rec
                writer.write(_json(rec))
    writer.write(_json({
        "summary": "verify",
        "groups": groups,
        "family": fam.label,
        "checks": total,
        "failed": failed,
        "config_hash": config_hash(cfg, "verify " + args.what),
    }))
    writer.close()
    if first_failure:
        f = first_failure
        print(f"first failure: {f['family']} l={f['l']} m={f['m']} {f['check']}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


# emit


def _meta(cfg, fam, what, **extra) -> dict:
    meta = {"what": what, "family": fam.label, "config_hash": config_hash(cfg, "emit " + what)}
    meta.update(extra)
    return meta


def _xy_payload(cfg, meta, x, y) -> list[str]:
    fmt = cfg["format"] or "csv"
    if fmt == "json":
        return [_json({"meta": meta, "x": [float(v) for v in x], "value": [_float(float(v)) for v in y]})]
    if fmt != "csv":
        raise DomainError(f"unknown format {fmt!r}; expected json or csv")
    lines = ["# " + _json(meta), "x,value"]
    lines += [f"{float(a)!r},{float(b)!r}" for a, b in zip(x, y)]
    return lines


def _cov(fam, cfg):
    from .schrodinger import change_of_variable

    return change_of_variable(fam, int(cfg["sign"]) if cfg["sign"] is not None else None)


def _grid(cov, cfg, default: int = 512):
    from .schrodinger import interior_grid

    return interior_grid(cov, int(cfg["grid"]) if cfg["grid"] is not None else default)


def spectrum_payload(fam, cfg) -> dict:
    from .schrodinger import numerov_eigenvalues, potential

    cov = _cov(fam, cfg)
    m, count = int(cfg["m"]), int(cfg["count"])
    if count < 1:
        raise DomainError("count must be >= 1")
    profile = potential(fam, m, cov, _grid(cov, cfg, 64))
    clip = tuple(float(v) for v in cfg["clip"]) if cfg["clip"] else None
    n_grid = int(cfg["grid"]) if cfg["grid"] is not None else 8000
    tol = float(cfg["tol"]) if cfg["tol"] is not None else 1e-7
    levels = numerov_eigenvalues(profile, count, domain_clip=clip, n_grid=n_grid, tol=tol, cov=cov)
    analytic = [float(eigenvalue(fam, m + k)) for k in range(count)]
    errors = [abs(a - b) for a, b in zip(levels, analytic)]
    return {
        "levels": [_float(v) for v in levels],
        "analytic": analytic,
        "abs_err": [_float(v) for v in errors],
    }


def _emit_lines(what, fam, cfg) -> list[str]:
    l, m = int(cfg["l"]), int(cfg["m"])
    if what == "poly":
        poly = classical_polynomial(fam, l)
        return [_json({"meta": _meta(cfg, fam, what, l=l), "coefficients": poly.to_json()})]
    if what == "asf":
        from .ladder import asf

        phi = asf(fam, l, m)
        return [_json({"meta": _meta(cfg, fam, what, l=l, m=m), "kappa_power": m, "part": phi.part.to_json(),
                       "scale": str(phi.scale)})]
    if what == "potential":
        from .schrodinger import potential

        cov = _cov(fam, cfg)
        x = _grid(cov, cfg)
        prof = potential(fam, m, cov, x)
        meta = _meta(cfg, fam, what, m=m, sign=cov.sign, lambda_m=str(prof.lambda_m), flagged=prof.flagged)
        return _xy_payload(cfg, meta, x, prof.values)
    if what == "wavefunction":
        from .schrodinger import wavefunction

        cov = _cov(fam, cfg)
        x = _grid(cov, cfg)
        wf = wavefunction(fam, l, m, cov, x)
        meta = _meta(cfg, fam, what, l=l, m=m, sign=cov.sign, residual=_float(wf.residual))
        return _xy_payload(cfg, meta, x, wf.values)
    if what == "coherent":
        from .coherent import coherent_state, eigen_residual

        z = parse_z(cfg["z"])
        tol = float(cfg["tol"]) if cfg["tol"] is not None else 1e-12
        st = coherent_state(fam, m, z, tol)
        return [_json({
            "meta": _meta(cfg, fam, what, m=m, z=[z.real, z.imag]),
            "coefficients": [[c.real, c.imag] for c in st.coeffs],
            "normalization_sq": st.normalization_sq,
            "tail_bound": st.tail_bound,
            "residual": eigen_residual(st),
        })]
    if what == "spectrum":
        payload = spectrum_payload(fam, cfg)
        payload["meta"] = _meta(cfg, fam, what, m=m)
        return [_json(payload)]
    raise DomainError(f"unknown emit target {what!r}")


def cmd_emit(args) -> int:
    cfg = load_config(args)
    fam = family_of(cfg)
    writer = Writer(cfg["out"])
    what = getattr(args, "what", None) or args.command
    for line in _emit_lines(what, fam, cfg):
        writer.write(line)
    writer.close()
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = load_config(args)
    fam = family_of(cfg)
    payload = spectrum_payload(fam, cfg)
    writer = Writer(cfg["out"])
    writer.write(_json(payload))
    writer.close()
    tol = 1e-5
    ok = all(e is not None and e <= tol for e in payload["abs_err"])
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_acceptance(args) -> int:
    from .acceptance import run_all, summary_table

    results = run_all(args.only)
    for c in results:
        print(c.line(), flush=True)
    print(summary_table(results))
    return EXIT_OK if all(c.passed for c in results) else EXIT_NUMERIC


# argument parsing


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file with run settings; flags override it")
    p.add_argument("--family", choices=["jacobi", "hypergeometric", "laguerre", "hermite"])
    p.add_argument("--alpha", help="rational parameter, e.g. 1/2")
    p.add_argument("--beta", help="rational parameter, e.g. 3/2")
    p.add_argument("--normalization", choices=["conventional", "monic"])
    p.add_argument("--lmax", type=int)
    p.add_argument("--mmax", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--grid", type=int, help="grid points (Numerov steps for spectra)")
    p.add_argument("--sign", type=int, help="+1 or -1 for ds/dx = sign*kappa")
    p.add_argument("--count", type=int, help="number of levels")
    p.add_argument("--z", help="coherent-state label as re,im or 2+1j")
    p.add_argument("--clip", type=float, nargs=2, metavar=("LO", "HI"), help="Numerov interval")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=["json", "csv"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperladder", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="exact and numeric identity sweeps (JSON lines)")
    p.add_argument("what", nargs="?", default="all", choices=["ladder", "ortho", "norms", "commutators", "all"])
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("emit", help="write polynomials, potentials, wavefunctions, states or spectra")
    p.add_argument("what", choices=["poly", "asf", "potential", "wavefunction", "coherent", "spectrum"])
    _common(p)
    p.set_defaults(func=cmd_emit)

    for name, text in (("coherent", "coherent-state coefficients and eigen-residual (JSON)"),
                       ("potential", "V_m on a grid (CSV with a JSON header line)"),
                       ("wavefunction", "normalized Psi_{l,m} on a grid (CSV with a JSON header line)")):
        p = sub.add_parser(name, help=text)
        _common(p)
        p.set_defaults(func=cmd_emit, what=name)

    p = sub.add_parser("oracle", help="independent Numerov spectrum against the analytic levels")
    p.add_argument("which", choices=["numerov"])
    _common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("acceptance", help="run the acceptance matrix and print a summary table")
    p.add_argument("--only", type=int, nargs="+", help="criterion numbers to run")
    p.set_defaults(func=cmd_acceptance)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConsistencyError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
