"""Command-line entry point.

Subcommands: field | cone | census | constant | ratio | verify-all | optimize.
Exit code 0 when everything passes, 1 when any certificate fails, 2 on usage
errors.  Certificate JSON is deterministic given the full configuration
(including seed); the timing section of a report is informational only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .certificates import all_passed, jsonable, sort_certificates
from .cone import ConeModel, build_cone
from .errors import FqconeError
from .gf import build_field
from .kernels import BACKEND

SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    command: str
    p: int
    n: int = 1
    model: str = "product"
    seed: int = 0
    trials: int = 100
    tol: float = 1e-9
    mode: str = "float"
    output_format: str = "text"
    output_path: str | None = None
    extra: dict = field(default_factory=dict)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fqcone",
        description="Verification and search toolkit for the sharp quartic "
                    "extension inequality on the cone in F_q^4")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, model=False, sweep=False):
        sp.add_argument("--p", type=int, required=True, help="odd prime")
        sp.add_argument("--n", type=int, default=1, help="extension degree")
        sp.add_argument("--format", choices=("json", "csv", "text"),
                        default="text", dest="output_format")
        sp.add_argument("--output", dest="output_path", default=None,
                        help="write the report to this path instead of stdout")
        if model:
            sp.add_argument("--model", choices=[m.value for m in ConeModel],
                            default="product")
        if sweep:
            sp.add_argument("--trials", type=int, default=100)
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--tol", type=float, default=1e-9)

    common(sub.add_parser("field", help="print the field context"))
    common(sub.add_parser("cone", help="print cone structure summary"), model=True)
    common(sub.add_parser("census", help="check the representation counts"))
    common(sub.add_parser("constant", help="print the sharp constants"))

    rp = sub.add_parser("ratio", help="evaluate the quartic ratio of a function")
    common(rp, model=True)
    rp.add_argument("--f", required=True,
                    help="JSON array of values, or a family: constant | "
                         "character:a1,a2,a3,a4 | indicator:POINT | random:SEED")

    vp = sub.add_parser("verify-all", help="run the full certificate suite")
    common(vp, sweep=True)
    vp.add_argument("--mode", choices=("float", "exact"), default="float")

    op = sub.add_parser("optimize", help="maximize the ratio and classify")
    common(op)
    op.add_argument("--restarts", type=int, default=20)
    op.add_argument("--iters", type=int, default=2000)
    op.add_argument("--seed", type=int, default=0)
    op.add_argument("--tol", type=float, default=1e-4,
                    help="classification tolerance for the fitted extremizer")
    return ap


# ---------------------------------------------------------------------------
# Subcommand bodies: return (payload dict | None, certificates list)
# ---------------------------------------------------------------------------

def _cmd_field(cfg):
    return build_field(cfg.p, cfg.n).describe(), []


def _cmd_cone(cfg):
    cc = build_cone(cfg.p, cfg.n, ConeModel(cfg.model))
    return cc.describe(), []


def _cmd_census(cfg):
    from .verify import census_check
    return None, census_check(cfg.p**cfg.n)


def _cmd_constant(cfg):
    from .xform import sharp_constants
    sc = sharp_constants(cfg.p**cfg.n)
    return {"q": sc.q, "N": sc.N, "C": str(sc.C), "R4": str(sc.R4),
            "R": sc.R, "M": str(sc.M)}, []


def _parse_function(cc, spec: str):
    from .xform import (character_function, constant_function,
                        indicator_function, random_complex)
    if spec.lstrip().startswith("["):
        vals = json.loads(spec)
        arr = np.array([complex(v[0], v[1]) if isinstance(v, list) else complex(v)
                        for v in vals])
        return arr
    name, _, arg = spec.partition(":")
    if name == "constant":
        return constant_function(cc)
    if name == "character":
        a = tuple(int(v) for v in arg.split(","))
        if len(a) != 4:
            raise ValueError("character needs four parameters a1,a2,a3,a4")
        return character_function(cc, a)
    if name == "indicator":
        return indicator_function(cc, int(arg))
    if name == "random":
        return random_complex(cc, np.random.default_rng(int(arg)))
    raise ValueError(f"unknown function family {name!r}")


def _cmd_ratio(cfg):
    from .xform import ratio, sharp_constants
    cc = build_cone(cfg.p, cfg.n, ConeModel(cfg.model))
    f = _parse_function(cc, cfg.extra["f"])
    sc = sharp_constants(cc.q)
    r = ratio(cc, f)
    return {"q": cc.q, "model": cfg.model, "function": cfg.extra["f"],
            "ratio": r, "optimal": float(sc.C),
            "optimal_fraction": str(sc.C), "attains": bool(
                abs(r - float(sc.C)) <= 1e-9 * float(sc.C))}, []


def _cmd_verify_all(cfg):
    from .verify import verify_all
    certs = verify_all(cfg.p**cfg.n, trials=cfg.trials, seed=cfg.seed,
                       mode=cfg.mode, tol=cfg.tol)
    return None, certs


def _cmd_optimize(cfg):
    from .optim import AscentConfig, fit_and_report, maximize
    cc = build_cone(cfg.p, cfg.n)
    acfg = AscentConfig(max_iters=cfg.extra["iters"],
                        restarts=cfg.extra["restarts"], seed=cfg.seed)
    trace = maximize(cc, acfg)
    _, report = fit_and_report(cc, trace, tol=cfg.tol)
    report["restart_final_ratios"] = [r.ratios[-1] for r in trace.restarts]
    return report, []


_COMMANDS = {
    "field": _cmd_field,
    "cone": _cmd_cone,
    "census": _cmd_census,
    "constant": _cmd_constant,
    "ratio": _cmd_ratio,
    "verify-all": _cmd_verify_all,
    "optimize": _cmd_optimize,
}


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------

def render_report(cfg: RunConfig, payload, certs, timing: dict) -> str:
    certs = sort_certificates(certs)
    if cfg.output_format == "json":
        report = {
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": "fqcone", "version": __version__,
                     "backend": BACKEND},
            "config": jsonable(asdict(cfg)),
            "payload": jsonable(payload),
            "certificates": [c.to_dict() for c in certs],
            "summary": {"total": len(certs),
                        "passed": sum(c.passed for c in certs),
                        "failed": sum(not c.passed for c in certs)},
            "timing": timing,
        }
        return json.dumps(report, indent=2, sort_keys=True)
    if cfg.output_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["claim_id", "q", "mode", "observed", "expected",
                    "tolerance", "passed"])
        for c in certs:
            d = c.to_dict()
            w.writerow([d["claim_id"], d["q"], d["mode"],
                        json.dumps(d["observed"], sort_keys=True),
                        json.dumps(d["expected"], sort_keys=True),
                        d["tolerance"], d["passed"]])
        if payload is not None:
            for k, v in jsonable(payload).items():
                w.writerow(["payload:" + k, "", "", json.dumps(v, sort_keys=True),
                            "", "", ""])
        return buf.getvalue().rstrip("\n")
    lines = []
    if payload is not None:
        for k, v in jsonable(payload).items():
            lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
    for c in certs:
        lines.append(c.line())
    if certs:
        lines.append(f"{sum(c.passed for c in certs)}/{len(certs)} certificates "
                     f"passed ({timing.get('total_s', 0):.2f}s)")
    return "\n".join(lines)


def main(argv=None) -> int:
    ap = _parser()
    args = ap.parse_args(argv)
    known = {"command", "p", "n", "model", "seed", "trials", "tol", "mode",
             "output_format", "output_path"}
    base = {k: v for k, v in vars(args).items() if k in known}
    extra = {k: v for k, v in vars(args).items() if k not in known}
    cfg = RunConfig(**base, extra=extra)

    t0 = time.perf_counter()
    try:
        payload, certs = _COMMANDS[cfg.command](cfg)
    except (FqconeError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        ap.print_usage(sys.stderr)
        return 2
    timing = {"total_s": round(time.perf_counter() - t0, 6)}
    text = render_report(cfg, payload, certs, timing)
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text + "\n")
        if certs:
            # keep the human-readable verdict table on stdout next to the artifact
            summary_cfg = RunConfig(**{**asdict(cfg), "output_format": "text",
                                       "output_path": None})
            print(render_report(summary_cfg, None, certs, timing))
    else:
        print(text)
    return 0 if all_passed(certs) else 1


if __name__ == "__main__":
    sys.exit(main())
