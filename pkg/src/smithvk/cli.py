"""Command-line entry point.

Exit codes: 0 success, 1 a requested hypothesis is false, 2 input error,
3 internal invariant violation.  Reports are JSON with sorted keys.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .certificates import PreconditionError, TheoremViolation, ext_certificate_search, mod2_cycle_certificate, \
    verify_join_theorem
from .deleted import build_deleted_product, cells_to_json, orbit_count, sphere_z2_complex
from .embedding import DegeneracyError, embedding_class_report, embedding_cocycle, moment_curve_map, \
    reduced_embedding_cochain
from .simplicial import SimplicialComplex, generate_corpus
from .smith import InvariantViolation, quotient_of, resolution_of_one, smith_classes_and_index, class_vanishes, \
    rho_of_degree

EXIT_OK, EXIT_VERDICT, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3
SUBCOMMANDS = ("gen", "dp", "quotient", "smith", "resolution", "vk", "certify", "join-verify", "selftest")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    m: int | None = None
    ring: str = "Z"
    parameters: list[int] | None = None
    output: str | None = None
    verbosity: int = 0
    seed: int = 0
    extra: dict[str, Any] = field(default_factory=dict)


def _read_complex(path: str) -> tuple[SimplicialComplex, str]:
    try:
        raw = Path(path).read_text()
        data = json.loads(raw)
        K = SimplicialComplex.from_json(data)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    digest = hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()
    return K, digest


def _envelope(cfg: RunConfig, digest: str, result: Any) -> dict:
    return {"tool": "smithvk", "version": __version__, "command": cfg.subcommand,
            "seed": cfg.seed, "input_digest": digest, "result": result}


def _emit(cfg: RunConfig, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(cfg: RunConfig):
    family, *params = cfg.inputs
    try:
        K = generate_corpus(family, *params)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None
    return EXIT_OK, K.to_json(), hashlib.sha256(" ".join(cfg.inputs).encode()).hexdigest()


def _cmd_dp(cfg: RunConfig):
    K, digest = _read_complex(cfg.inputs[0])
    D = build_deleted_product(K)
    out: dict[str, Any] = {"complex": K.name, "cell_counts": D.cell_counts(), "total": sum(D.cell_counts()),
                           "orbits": orbit_count(D), "flags": D.flags}
    if cfg.extra.get("cells"):
        out["cells"] = [[cells_to_json(c) for c in D.cells(i)] for i in range(D.dim + 1)]
    return EXIT_OK, out, digest


def _cmd_quotient(cfg: RunConfig):
    K, digest = _read_complex(cfg.inputs[0])
    Q = quotient_of(build_deleted_product(K))
    tables = []
    for i in range(Q.dim + 1):
        tables.append([{"cell": cells_to_json(c),
                        "boundary": [{"cell": cells_to_json(f), "coeff": v}
                                     for f, v in sorted(Q.boundary_of(c).items())]} for c in Q.cells(i)])
    return EXIT_OK, {"complex": Q.name, "cell_counts": Q.cell_counts(), "boundary": tables}, digest


def _smith_target(cfg: RunConfig):
    sphere = cfg.extra.get("sphere")
    if sphere is not None:
        return sphere_z2_complex(sphere), hashlib.sha256(f"sphere {sphere}".encode()).hexdigest()
    if not cfg.inputs:
        raise InputError("smith needs a complex file or --sphere N")
    K, digest = _read_complex(cfg.inputs[0])
    return build_deleted_product(K), digest


def _cmd_smith(cfg: RunConfig):
    X, digest = _smith_target(cfg)
    report = smith_classes_and_index(X, cfg.extra.get("max_k"), mod2=cfg.ring == "Z2" or cfg.extra.get("mod2", False),
                                     seed=cfg.seed)
    return EXIT_OK, report.summary(), digest


def _cmd_resolution(cfg: RunConfig):
    X, digest = _smith_target(cfg)
    res = resolution_of_one(X, cfg.extra.get("length"), cfg.extra.get("strategy", "explicit"), cfg.seed)
    data = res.to_json()
    out = cfg.extra.get("res_out")
    if out:
        Path(out).write_text(json.dumps(data, sort_keys=True) + "\n")
        return EXIT_OK, {"complex": X.name, "length": len(res), "written": out}, digest
    return EXIT_OK, data, digest


def _default_m(K: SimplicialComplex, m: int | None) -> int:
    return 2 * K.dim if m is None else m


def _cmd_vk(cfg: RunConfig):
    K, digest = _read_complex(cfg.inputs[0])
    report = embedding_class_report(K, _default_m(K, cfg.m), cfg.parameters)
    if report.agrees_with_smith is False:
        raise InvariantViolation("embedding class and Smith class disagree")
    return EXIT_OK, report.summary(), digest


def _cmd_certify(cfg: RunConfig):
    K, digest = _read_complex(cfg.inputs[0])
    m = _default_m(K, cfg.m)
    D = build_deleted_product(K)
    theta = embedding_cocycle(K, m, moment_curve_map(K, m, cfg.parameters), D)
    nu = reduced_embedding_cochain(D, theta)
    Q = quotient_of(D)
    out: dict[str, Any] = {"complex": K.name, "m": m}
    if cfg.ring == "Z2":
        z = mod2_cycle_certificate(Q, nu.mod2())
        out["nonzero"] = z is not None
        if z is not None:
            out["mod2_cycle"] = [cells_to_json(c) for c in sorted(z.cells())]
        return (EXIT_OK if z is not None else EXIT_VERDICT), out, digest
    if m % 2:
        raise InputError("integer certificates need even m; use --mod2 for odd m")
    if class_vanishes(D, theta, rho_of_degree(m)):
        out["nonzero"] = False
        return EXIT_VERDICT, out, digest
    out["nonzero"] = True
    out["certificate"] = ext_certificate_search(Q, nu, m).summary()
    return EXIT_OK, out, digest


def _cmd_join(cfg: RunConfig):
    K, digest = _read_complex(cfg.inputs[0])
    m = cfg.m if cfg.m is not None else 2 * K.dim
    report = verify_join_theorem(K, m, cfg.ring)
    return (EXIT_OK if report.hypothesis else EXIT_VERDICT), report.summary(), digest


def _cmd_selftest(cfg: RunConfig):
    from .selftest import run_selftest
    results = run_selftest(cfg.seed)
    ok = all(v == "ok" for v in results.values())
    return (EXIT_OK if ok else EXIT_INVARIANT), {"suites": results, "passed": ok}, hashlib.sha256(b"selftest").hexdigest()


COMMANDS = {
    "gen": _cmd_gen, "dp": _cmd_dp, "quotient": _cmd_quotient, "smith": _cmd_smith,
    "resolution": _cmd_resolution, "vk": _cmd_vk, "certify": _cmd_certify, "join-verify": _cmd_join,
    "selftest": _cmd_selftest,
}


def _params(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("parameters must be comma-separated integers") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="smithvk", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"smithvk {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the JSON report here instead of standard output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="subcommand", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a named complex")
    g.add_argument("family")
    g.add_argument("params", nargs="*")

    d = sub.add_parser("dp", parents=[common], help="deleted product cell counts")
    d.add_argument("complex")
    d.add_argument("--cells", action="store_true", help="include the full cell list")

    q = sub.add_parser("quotient", parents=[common], help="boundary tables of the quotient complex")
    q.add_argument("complex")

    for name, helptext in (("smith", "Smith classes and index"), ("resolution", "resolution of the unit cocycle")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("complex", nargs="?")
        s.add_argument("--sphere", type=int, help="use the CW sphere of this dimension instead of a file")
        if name == "smith":
            s.add_argument("--mod2", action="store_true")
            s.add_argument("--max-k", type=int, dest="max_k")
        else:
            s.add_argument("--out", dest="res_out")
            s.add_argument("--length", type=int)
            s.add_argument("--strategy", default="explicit", choices=("explicit", "mirror", "random", "solve"))

    v = sub.add_parser("vk", parents=[common], help="embedding class report")
    v.add_argument("complex")
    v.add_argument("-m", type=int)
    v.add_argument("--params", type=_params)

    c = sub.add_parser("certify", parents=[common], help="non-vanishing certificate for the embedding class")
    c.add_argument("complex")
    c.add_argument("-m", type=int)
    c.add_argument("--mod2", action="store_true")
    c.add_argument("--params", type=_params)

    j = sub.add_parser("join-verify", parents=[common], help="replay the join argument for [3]*K")
    j.add_argument("complex")
    j.add_argument("-m", type=int)
    j.add_argument("--mod2", action="store_true")

    sub.add_parser("selftest", parents=[common], help="run the built-in invariant suite")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    inputs = []
    if ns.subcommand == "gen":
        inputs = [ns.family, *ns.params]
    elif getattr(ns, "complex", None):
        inputs = [ns.complex]
    extra = {k: getattr(ns, k) for k in ("cells", "sphere", "max_k", "mod2", "res_out", "length", "strategy")
             if getattr(ns, k, None) is not None}
    return RunConfig(ns.subcommand, inputs, getattr(ns, "m", None), "Z2" if getattr(ns, "mod2", False) else "Z",
                     getattr(ns, "params", None), ns.output, ns.verbose, ns.seed, extra)


def run(cfg: RunConfig) -> int:
    if cfg.subcommand not in COMMANDS:
        print(f"smithvk: unknown subcommand {cfg.subcommand!r}", file=sys.stderr)
        return EXIT_INPUT
    try:
        code, result, digest = COMMANDS[cfg.subcommand](cfg)
    except (InputError, DegeneracyError, PreconditionError, ValueError) as exc:
        print(f"smithvk: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantViolation, TheoremViolation) as exc:
        print(f"smithvk: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    _emit(cfg, _envelope(cfg, digest, result))
    return code


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(ns.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    return run(config_from_args(ns))
