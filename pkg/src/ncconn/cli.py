"""Command-line front end.

    ncconn check|lc|curvature|dualize|solve SPEC [--json] [--oracle] [--bound B] [--seed S]

SPEC is a path or the name of a bundled spec (``ncconn list`` shows them).
Exit codes: 0 ok, 1 property failure, 2 parse or IO error, 3 mode misuse,
4 solver bound too small.  ``NCCONN_SEED`` overrides ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Dict, List, Optional, Sequence

from .algebra import Element
from .calculus import check_centred_axioms
from .connection import (
    Connection,
    bimodule_witness,
    curvature,
    hermitian_witness,
    levi_civita,
    torsion_witness,
)
from .duality import affine_connection, basic_derivation, cross_identity_residuals, phi
from .forms import CalculusSpec, SpecError, Tensor, indices
from .oracle import (
    ModeError,
    classical_curvature_oracle,
    fits_box,
    koszul_oracle,
    solve_connection_space,
)
from .oracle.solver import BIMODULE, HERMITIAN
from .sampling import probes, random_element
from .specfile import SpecFile, bundled_specs, load

SCHEMA = "ncconn.report/1"
COMMANDS = ("check", "lc", "curvature", "dualize", "solve")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_MODE = 3
EXIT_BOUND = 4


class Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def tensor_entries(t: Tensor) -> Dict[str, str]:
    """Every multi-index in lexicographic order, zero entries included."""
    return {"*".join(f"e{i + 1}" for i in idx): str(t[idx]) for idx in indices(t.rank, t.degree)}


def connection_entries(c: Connection) -> Dict[str, Dict[str, str]]:
    return {f"Gamma_{k + 1}": tensor_entries(g) for k, g in enumerate(c.gammas)}


def _seed(args: argparse.Namespace, sf: SpecFile) -> int:
    env = os.environ.get("NCCONN_SEED")
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise Exit(EXIT_INPUT, f"NCCONN_SEED must be an integer, got {env!r}") from None
    return args.seed if args.seed is not None else sf.options.seed


def _samples(spec: CalculusSpec, seed: int, extra: int) -> List[Element]:
    rng = random.Random(seed)
    return probes(spec.algebra) + [random_element(spec.algebra, rng, terms=2, degree=1) for _ in range(extra)]


def _axioms(spec: CalculusSpec, samples: Sequence[Element]) -> dict:
    rep = check_centred_axioms(spec, samples)
    return {
        "passed": rep.passed,
        "results": [{"name": r.name, "passed": r.passed, "witness": r.witness or None} for r in rep.results],
    }


def _property(witness: Optional[str]) -> dict:
    return {"passed": witness is None, "witness": witness}


# ---------------------------------------------------------------------------
# commands; each returns (exit code, report body)


def cmd_check(sf: SpecFile, args, seed: int):
    ax = _axioms(sf.spec, _samples(sf.spec, seed, sf.options.samples))
    return (EXIT_OK if ax["passed"] else EXIT_FAIL), {"axioms": ax}


def _require_axioms(sf: SpecFile, samples, body: dict) -> Optional[int]:
    ax = _axioms(sf.spec, samples)
    if not ax["passed"]:
        body["axioms"] = ax
        return EXIT_FAIL
    return None


def _require_classical(sf: SpecFile, args) -> None:
    if args.oracle and sf.spec.algebra.formal:
        raise Exit(EXIT_MODE, "oracle requires q=1")


def cmd_lc(sf: SpecFile, args, seed: int):
    _require_classical(sf, args)
    samples = _samples(sf.spec, seed, sf.options.samples)
    body: dict = {}
    code = _require_axioms(sf, samples, body)
    if code is not None:
        return code, body
    c = levi_civita(sf.spec)
    body["connection"] = connection_entries(c)
    props = {
        "hermitian": _property(hermitian_witness(c, samples)),
        "torsion_free": _property(torsion_witness(c, samples)),
        "bimodule": _property(bimodule_witness(c, samples)),
    }
    body["properties"] = props
    ok = all(p["passed"] for p in props.values())
    if args.oracle:
        agrees = koszul_oracle(sf.spec) == c
        body["oracle"] = {"name": "koszul", "agrees": agrees}
        ok = ok and agrees
    return (EXIT_OK if ok else EXIT_FAIL), body


def cmd_curvature(sf: SpecFile, args, seed: int):
    _require_classical(sf, args)
    samples = _samples(sf.spec, seed, sf.options.samples)
    body: dict = {}
    code = _require_axioms(sf, samples, body)
    if code is not None:
        return code, body
    spec = sf.spec
    R = curvature(levi_civita(spec))
    values = [R(spec.e(k)) for k in range(spec.rank)]
    body["curvature"] = {f"R(e{k + 1})": tensor_entries(v) for k, v in enumerate(values)}
    body["flat"] = all(not v for v in values)
    ok = True
    if args.oracle:
        expected = classical_curvature_oracle(spec)
        agrees = all(a == b for a, b in zip(values, expected))
        body["oracle"] = {"name": "classical-riemann", "agrees": agrees}
        ok = agrees
    return (EXIT_OK if ok else EXIT_FAIL), body


def cmd_dualize(sf: SpecFile, args, seed: int):
    _require_classical(sf, args)
    samples = _samples(sf.spec, seed, sf.options.samples)
    body: dict = {}
    code = _require_axioms(sf, samples, body)
    if code is not None:
        return code, body
    spec = sf.spec
    c = levi_civita(spec)
    table = {}
    for i in range(spec.rank):
        Di = basic_derivation(spec, i + 1)
        for j in range(spec.rank):
            X = phi(basic_derivation(spec, j + 1))
            nab = affine_connection(c, Di, X)
            table[f"nabla_d{i + 1}(d{j + 1})"] = [str(x) for x in nab.coeffs]
    body["affine_connection"] = table
    res = cross_identity_residuals(c, seed, args.instances)
    summary = {}
    for name, values in res.items():
        bad = [k for k, v in enumerate(values) if v]
        summary[name] = {
            "instances": len(values),
            "nonzero": len(bad),
            "witness": None if not bad else f"instance {bad[0]}: residual {values[bad[0]]}",
        }
    body["residuals"] = summary
    ok = all(s["nonzero"] == 0 for s in summary.values())
    return (EXIT_OK if ok else EXIT_FAIL), body


def cmd_solve(sf: SpecFile, args, seed: int):
    _require_classical(sf, args)
    samples = _samples(sf.spec, seed, sf.options.samples)
    body: dict = {}
    code = _require_axioms(sf, samples, body)
    if code is not None:
        return code, body
    spec = sf.spec
    bound = args.bound if args.bound is not None else sf.options.bound
    qbound = sf.options.qbound
    lc = levi_civita(spec)
    space = solve_connection_space(spec, bound, qbound)
    fits = fits_box(lc, bound, qbound, space.den_power)
    loose = solve_connection_space(spec, bound, qbound, constraints=(HERMITIAN, BIMODULE))
    body["solver"] = {
        "bound": bound,
        "qbound": qbound,
        "den_power": space.den_power,
        "unknowns": space.n_unknowns,
        "equations": space.n_equations,
        "rank": space.rank,
        "consistent": space.consistent,
        "dimension": space.dimension,
        "lc_fits_box": fits,
        "matches_lc": space.is_singleton and space.particular == lc,
        "dimension_without_torsion": loose.dimension,
    }
    if space.consistent:
        body["solution"] = connection_entries(space.particular)
    if not space.consistent or not fits:
        body["solver"]["status"] = "insufficient bound"
        return EXIT_BOUND, body
    ok = body["solver"]["matches_lc"]
    body["solver"]["status"] = "unique" if ok else "not unique"
    return (EXIT_OK if ok else EXIT_FAIL), body


HANDLERS = {
    "check": cmd_check,
    "lc": cmd_lc,
    "curvature": cmd_curvature,
    "dualize": cmd_dualize,
    "solve": cmd_solve,
}


# ---------------------------------------------------------------------------
# rendering


def _text_lines(report: dict) -> List[str]:
    lines = [f"{report['command']} {report['spec']} (q={report['q']}, seed={report['seed']})"]
    if "error" in report:
        lines.append(f"error: {report['error']}")
    ax = report.get("axioms")
    if ax:
        for r in ax["results"]:
            mark = "PASS" if r["passed"] else "FAIL"
            lines.append(f"  [{mark}] {r['name']}" + (f": {r['witness']}" if r["witness"] else ""))
    for section in ("connection", "solution", "curvature"):
        if section in report:
            lines.append(f"{section}:")
            for name, entries in report[section].items():
                nonzero = [f"{k}*({v})" for k, v in entries.items() if v != "0"]
                lines.append(f"  {name} = " + (" + ".join(nonzero) if nonzero else "0"))
    if "flat" in report:
        lines.append(f"flat: {'yes' if report['flat'] else 'no'}")
    if "affine_connection" in report:
        lines.append("affine connection on basic derivations:")
        for name, coeffs in report["affine_connection"].items():
            lines.append(f"  {name} = ({', '.join(coeffs)})")
    if "properties" in report:
        lines.append("properties:")
        for name, p in report["properties"].items():
            mark = "PASS" if p["passed"] else "FAIL"
            lines.append(f"  [{mark}] {name}" + (f": {p['witness']}" if p["witness"] else ""))
    if "residuals" in report:
        lines.append("cross-identity residuals:")
        for name, s in report["residuals"].items():
            mark = "PASS" if not s["nonzero"] else "FAIL"
            tail = f" ({s['witness']})" if s["witness"] else ""
            lines.append(f"  [{mark}] {name}: {s['nonzero']}/{s['instances']} nonzero{tail}")
    if "solver" in report:
        s = report["solver"]
        lines.append("solver:")
        for key, value in s.items():
            lines.append(f"  {key}: {value}")
    if "oracle" in report:
        o = report["oracle"]
        lines.append(f"oracle {o['name']}: {'agrees' if o['agrees'] else 'DISAGREES'}")
    lines.append(f"exit: {report['exit']}")
    return lines


def render(report: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(report, indent=2) + "\n"
    return "\n".join(_text_lines(report)) + "\n"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ncconn", description="Levi-Civita connections on the quantum torus.")
    p.add_argument("command", choices=COMMANDS + ("list",))
    p.add_argument("spec", nargs="?", help="spec file path or bundled spec name")
    p.add_argument("--json", action="store_true", help="emit the versioned JSON report")
    p.add_argument("--oracle", action="store_true", help="compare with the classical oracle (q = 1 only)")
    p.add_argument("--bound", type=int, default=None, help="solver support bound B")
    p.add_argument("--seed", type=int, default=None, help="probe seed (NCCONN_SEED overrides)")
    p.add_argument("--instances", type=int, default=20, help="random instances per cross-identity")
    return p


def run(argv: Optional[Sequence[str]] = None) -> tuple:
    """``(exit code, stdout text, stderr text)``; never raises on bad input."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_INPUT if exc.code else EXIT_OK), "", ""
    if args.command == "list":
        return EXIT_OK, "\n".join(bundled_specs()) + "\n", ""
    if not args.spec:
        return EXIT_INPUT, "", "error: missing spec argument\n"
    if args.bound is not None and args.bound < 0:
        return EXIT_INPUT, "", "error: --bound must be >= 0\n"
    try:
        sf = load(args.spec)
    except SpecError as exc:
        return EXIT_INPUT, "", f"error: {exc}\n"
    report = {
        "schema": SCHEMA,
        "command": args.command,
        "spec": sf.spec.name,
        "q": "formal" if sf.spec.algebra.formal else "1",
    }
    try:
        seed = _seed(args, sf)
        report["seed"] = seed
        code, body = HANDLERS[args.command](sf, args, seed)
    except (Exit, ModeError) as exc:
        code = exc.code if isinstance(exc, Exit) else EXIT_MODE
        message = exc.message if isinstance(exc, Exit) else str(exc)
        return code, "", f"error: {message}\n"
    report.update(body)
    report["exit"] = code
    return code, render(report, args.json), ""


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
