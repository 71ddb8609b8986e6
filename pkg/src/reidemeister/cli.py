"""Command-line entry point: ``reidemeister {quotient,reidemeister,certify,verify}``.

Exit codes: 0 success, 1 inconclusive certificate, 2 usage error,
3 resource limit, 4 invalid automorphism, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import sympy

from .automorphisms import parse_automorphism
from .errors import InvalidAutomorphism, NonDescending, ResourceLimit, UsageError
from .groups import build_quotient, element_cap_from_env, expected_order, parse_group
from .orbits import twisted_partition
from .verification import SUITES, run_suite
from .witnesses import WITNESS_KINDS, certify_distinct

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_RESOURCE, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2, 3, 4, 5


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    automorphism: str | None = None
    family: str | None = None
    group_kind: str | None = None
    n: int | None = None
    k: int | None = None
    l: int | None = None
    moduli: list[int] = field(default_factory=list)
    suite: str = "all"
    output: str = "json"
    element_cap: int = 200_000
    seed: int = 0


def _moduli(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad moduli list {text!r}") from None
    if not values or any(v < 2 for v in values):
        raise argparse.ArgumentTypeError("moduli must be integers >= 2")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output", choices=("json", "text"), default="json")
    common.add_argument("--element-cap", type=int, default=None,
                        help="largest group to enumerate (env REIDEMEISTER_ELEMENT_CAP)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")

    parser = argparse.ArgumentParser(prog="reidemeister",
                                     description="Twisted conjugacy classes in finite matrix quotients.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quotient", parents=[common], help="enumerate SL/GL/Sp over Z/m")
    p.add_argument("--group", required=True, help="sl:n:m, gl:n:m or sp:2n:m")

    p = sub.add_parser("reidemeister", parents=[common], help="twisted classes and R(phi)")
    p.add_argument("--group", required=True)
    p.add_argument("--aut", dest="automorphism", required=True,
                   help="tau, sigma, theta, id, inner:<file>, chartwist:<file>, joined by '.'")

    p = sub.add_parser("certify", parents=[common], help="separate two witnesses in a finite quotient")
    p.add_argument("--family", required=True, choices=WITNESS_KINDS[:2])
    p.add_argument("--aut", dest="automorphism", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--moduli", type=_moduli, required=True, help="comma separated, tried in order")
    p.add_argument("--group-kind", choices=("sl", "gl", "sp"), default=None,
                   help="ambient family (default: sp for theta, else sl)")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, default="all")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cap = ns.element_cap if ns.element_cap is not None else element_cap_from_env()
    if cap < 1:
        raise UsageError("--element-cap must be positive")
    cfg = RunConfig(command=ns.command, output=ns.output, element_cap=cap, seed=ns.seed)
    for name in ("group", "automorphism", "family", "group_kind", "n", "k", "l", "moduli", "suite"):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    # reject bad descriptors before any computation
    if cfg.group is not None:
        parse_group(cfg.group)
    if cfg.automorphism is not None:
        parse_automorphism(cfg.automorphism)
    return cfg


def _emit(report: dict, cfg: RunConfig, out) -> None:
    if cfg.output == "json":
        out.write(json.dumps(report, indent=2) + "\n")
        return
    for key, value in report.items():
        if key == "classes":
            out.write("classes:\n")
            for c in value:
                out.write(f"  [{c['id']}] size {c['size']} rep {c['representative']}\n")
        elif key == "checks":
            for c in value:
                out.write(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}"
                          + (f": {c['detail']}" if c["detail"] else "") + "\n")
        else:
            out.write(f"{key}: {json.dumps(value)}\n")


def cmd_quotient(cfg: RunConfig) -> tuple[dict, int]:
    family, m = parse_group(cfg.group)
    g = build_quotient(family, m, cfg.element_cap)
    expected = expected_order(family, m)
    report = {
        "group": cfg.group,
        "order": g.order,
        "generators": len(g.generators),
        "expected_order": expected,
        "prime_modulus": bool(sympy.isprime(m)),
        "formula_check": "pass" if g.order == expected else "fail",
        "seed": cfg.seed,
    }
    return report, EXIT_OK


def cmd_reidemeister(cfg: RunConfig) -> tuple[dict, int]:
    family, m = parse_group(cfg.group)
    phi = parse_automorphism(cfg.automorphism).induced_mod(m)
    g = build_quotient(family, m, cfg.element_cap)
    part = twisted_partition(g, phi, seed=cfg.seed)
    report = part.to_dict(cfg.group, cfg.automorphism)
    report["seed"] = cfg.seed
    return report, EXIT_OK


def cmd_certify(cfg: RunConfig) -> tuple[dict, int]:
    phi = parse_automorphism(cfg.automorphism)
    kind = cfg.group_kind.upper() if cfg.group_kind else None
    cert = certify_distinct(cfg.family, phi, cfg.n, cfg.k, cfg.l, cfg.moduli, group_kind=kind,
                            element_cap=cfg.element_cap, seed=cfg.seed,
                            automorphism_name=cfg.automorphism)
    report = cert.to_dict()
    report["seed"] = cfg.seed
    return report, EXIT_OK if cert.distinct else EXIT_INCONCLUSIVE


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    checks = run_suite(cfg.suite, cfg.seed)
    passed = all(c.passed for c in checks)
    report = {"suite": cfg.suite, "passed": passed, "seed": cfg.seed,
              "checks": [c.to_dict() for c in checks]}
    return report, EXIT_OK if passed else EXIT_VERIFY


COMMANDS = {
    "quotient": cmd_quotient,
    "reidemeister": cmd_reidemeister,
    "certify": cmd_certify,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        cfg = config_from_args(ns)
        report, code = COMMANDS[cfg.command](cfg)
    except (UsageError, NonDescending) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvalidAutomorphism as exc:
        _emit({"error": "invalid automorphism", "report": exc.report.to_dict()}, ns_config(ns), out)
        return EXIT_INVALID
    _emit(report, cfg, out)
    return code


def ns_config(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(command=ns.command, output=ns.output)


if __name__ == "__main__":
    sys.exit(main())
