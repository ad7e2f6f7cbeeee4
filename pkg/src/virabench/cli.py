"""Command line front end.

Subcommands: ``act`` evaluates one operator application, ``verify`` runs
identity suites, ``closure`` runs the windowed submodule probe, and
``weight`` prints weighted action tables.  Exit codes: 0 all checks
passed, 1 an identity failed (with a witness in the report), 2 usage or
configuration error.  ``--json`` switches every report to a structured
document; rationals cross the boundary as "p/q" strings, never floats.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction

from .avmod import AModule, Caps, OmegaModule, to_h_basis
from .bralg import BrModuleDesc
from .closure import (
    FullWindowReached,
    Inconclusive,
    ProbeConfig,
    ProperInvariantSubspaceFound,
    generate,
)
from .exact import Poly, Vec
from .fmod import FModule
from .grammar import (
    ParseError,
    format_element,
    format_rational,
    load_workbench,
    parse_element,
    parse_module,
    parse_rational,
)
from .suites import SUITE_IDS, run_selected
from .weighting import omega_weight_table, render_table, weight_f_table


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="virabench",
        description="exact-arithmetic workbench for Virasoro module constructions",
    )
    p.add_argument("--module-file", help="JSON file with named module definitions")
    p.add_argument("--json", action="store_true", help="structured JSON reports")
    sub = p.add_subparsers(dest="command", required=True)

    act = sub.add_parser("act", help="apply one operator to an element")
    act.add_argument("module", help="module expression, e.g. Omega(2,3)")
    act.add_argument("op", help="operator: d:<m>, x:<m>, g:<m>, or c")
    act.add_argument("element", help="element in the module's grammar")
    act.add_argument(
        "--h-anchor", type=int, default=None,
        help="also print polynomial results in the h basis at this anchor",
    )

    ver = sub.add_parser("verify", help="run identity suites")
    ver.add_argument(
        "suite", nargs="?", default="all",
        help=f"one of {', '.join(SUITE_IDS)}, or all",
    )
    ver.add_argument("--window", type=int, default=None, help="mode window")
    ver.add_argument("--dt-cap", type=int, default=5, help="inner degree/index cap")
    ver.add_argument("--dx-cap", type=int, default=5, help="carrier degree cap")
    ver.add_argument("--lambda", dest="lam", default=None, help="scaling constant p/q")
    ver.add_argument("--beta", default=None, help="parameter p/q")
    ver.add_argument("--alpha", default=None, help="parameter p/q")
    ver.add_argument("--gamma", default=None, help="parameter p/q")
    ver.add_argument("--module", default=None, help="module override for the gm suite")

    clo = sub.add_parser("closure", help="windowed submodule generation probe")
    clo.add_argument("module", help="module expression")
    clo.add_argument("--seed", required=True, help="seed element")
    clo.add_argument("--window", type=int, default=4, help="mode window")
    clo.add_argument("--dt-cap", type=int, default=6, help="inner degree/index cap")
    clo.add_argument("--dx-cap", type=int, default=4, help="carrier degree cap")
    clo.add_argument("--ops", choices=("d", "dx"), default="d", help="operator set")
    clo.add_argument("--dump-basis", action="store_true", help="print the span basis")

    wgt = sub.add_parser("weight", help="weighted action table of a module")
    wgt.add_argument("module", help="Omega(lam,beta) or F(br,Omega(lam,beta))")
    wgt.add_argument("--window", type=int, default=5, help="weight/mode window")
    wgt.add_argument("--carrier-cap", type=int, default=4, help="carrier degree cap")

    return p


def _registry(args):
    if args.module_file:
        return load_workbench(args.module_file).modules
    return None


def cmd_act(args) -> int:
    module = parse_module(args.module, _registry(args))
    if isinstance(module, BrModuleDesc):
        raise ParseError("act needs a module carrying the d/x actions, not a carrier description")
    elem = parse_element(module, args.element)
    spec = args.op.strip()
    if spec == "c":
        result = module.c(elem)
    else:
        kind, _, mstr = spec.partition(":")
        if kind not in ("d", "x", "g") or not mstr.lstrip("+-").isdigit():
            raise ParseError(f"bad operator {spec!r}; use d:<m>, x:<m>, g:<m>, or c")
        m = int(mstr)
        result = getattr(module, kind)(m, elem)
    text = format_element(module, result)
    if args.json:
        doc = {"module": module.describe(), "op": spec, "result": text}
        if args.h_anchor is not None and isinstance(result, Poly):
            hb = to_h_basis(result, args.h_anchor)
            doc["h_basis"] = {
                "anchor": hb.anchor,
                "coords": [format_rational(c) for c in hb.coords],
            }
        print(json.dumps(doc, indent=2))
    else:
        print(text)
        if args.h_anchor is not None and isinstance(result, Poly):
            hb = to_h_basis(result, args.h_anchor)
            coords = ", ".join(format_rational(c) for c in hb.coords)
            print(f"h-basis[{hb.anchor}]: ({coords})")
    return 0


def cmd_verify(args) -> int:
    params = None
    overrides = [args.lam, args.beta, args.alpha, args.gamma]
    if any(v is not None for v in overrides):
        lam = parse_rational(args.lam) if args.lam is not None else Fraction(1)
        beta = parse_rational(args.beta) if args.beta is not None else Fraction(0)
        alpha = parse_rational(args.alpha) if args.alpha is not None else Fraction(0)
        gamma = parse_rational(args.gamma) if args.gamma is not None else Fraction(0)
        params = (lam, beta, alpha, gamma)
    gm_module = None
    if args.module is not None:
        gm_module = parse_module(args.module, _registry(args))
        if not isinstance(gm_module, BrModuleDesc):
            raise ParseError("--module must name a carrier module description")
    caps = Caps(inner=args.dt_cap, carrier=args.dx_cap)
    results = run_selected(
        args.suite, window=args.window, caps=caps, params=params, gm_module=gm_module
    )
    failures = sum(len(r.failures) for r in results)
    if args.json:
        doc = []
        for r in results:
            doc.append({
                "suite": r.suite,
                "module": r.module,
                "window": r.window,
                "params": r.params,
                "checks": r.checks,
                "failures": [
                    {
                        "op": f.op, "lhs": f.lhs, "rhs": f.rhs,
                        "witness": f.witness, "repro": f.repro,
                    }
                    for f in r.failures
                ],
            })
        print(json.dumps(doc, indent=2))
    else:
        for r in results:
            status = "PASS" if r.ok else "FAIL"
            ptxt = " ".join(f"{k}={v}" for k, v in sorted(r.params.items()))
            print(
                f"{status} suite={r.suite} module={r.module} window={r.window} "
                f"checks={r.checks} failures={len(r.failures)}"
                + (f" [{ptxt}]" if ptxt else "")
            )
            for f in r.failures:
                print(f"  op: {f.op}")
                print(f"  witness: {f.witness}")
                print(f"  lhs: {f.lhs}")
                print(f"  rhs: {f.rhs}")
                print(f"  repro: {f.repro}")
        total = sum(r.checks for r in results)
        print(f"TOTAL: {len(results)} suite runs, {total} checks, {failures} failures")
    return 0 if failures == 0 else 1


def cmd_closure(args) -> int:
    module = parse_module(args.module, _registry(args))
    if isinstance(module, BrModuleDesc):
        raise ParseError("closure needs a module carrying the d/x actions")
    seed = parse_element(module, args.seed)
    cfg = ProbeConfig(
        seed=seed,
        mode_window=args.window,
        caps=Caps(inner=args.dt_cap, carrier=args.dx_cap),
        op_set=args.ops,
    )
    verdict = generate(module, cfg)
    if isinstance(verdict, ProperInvariantSubspaceFound):
        headline = f"PROPER SUBSPACE (dim {verdict.dim} of {verdict.full_dim})"
    elif isinstance(verdict, FullWindowReached):
        headline = f"FULL WINDOW (dim {verdict.dim} of {verdict.dim})"
    else:
        headline = f"INCONCLUSIVE (dim {verdict.dim} of {verdict.full_dim}): {verdict.reason}"
    basis_elems = []
    if args.dump_basis and not isinstance(verdict, FullWindowReached):
        for row in verdict.basis.rows:
            coords = Vec(
                (verdict.keys[i], c) for i, c in enumerate(row) if c
            )
            basis_elems.append(format_element(module, module.from_coords(coords)))
    if args.json:
        doc = {
            "module": module.describe(),
            "seed": args.seed,
            "verdict": type(verdict).__name__,
            "dim": verdict.dim,
            "full_dim": getattr(verdict, "full_dim", verdict.dim),
            "leaks": verdict.leaks,
        }
        if basis_elems:
            doc["basis"] = basis_elems
        print(json.dumps(doc, indent=2))
    else:
        print(f"{headline}  [module {module.describe()}, seed {args.seed}, "
              f"leaks {verdict.leaks}]")
        for b in basis_elems:
            print(f"  basis: {b}")
    return 0


def cmd_weight(args) -> int:
    module = parse_module(args.module, _registry(args))
    if isinstance(module, OmegaModule):
        table = omega_weight_table(module, args.window)
    elif isinstance(module, FModule) and isinstance(module.inner, OmegaModule):
        table = weight_f_table(module, args.window, args.carrier_cap)
    else:
        raise ParseError(
            "weight needs Omega(lam,beta) or a tensor module with that inner part"
        )
    text = render_table(table)
    if args.json:
        doc = {
            "module": module.describe(),
            "window": args.window,
            "rescaled": True,
            "table": {
                f"{m},{n}": line.partition(": ")[2]
                for (m, n), line in zip(sorted(table), text.splitlines())
            },
        }
        print(json.dumps(doc, indent=2))
    else:
        print(f"rescaled weighted action table for {module.describe()} "
              f"(window {args.window})")
        print(text)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "act": cmd_act,
        "verify": cmd_verify,
        "closure": cmd_closure,
        "weight": cmd_weight,
    }
    try:
        return handlers[args.command](args)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
