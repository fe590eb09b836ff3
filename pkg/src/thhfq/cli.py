"""Command-line front end: ``thhfq <command> [flags]``.

Exit status is 0 on success, 1 when a scenario reports a failed claim and 2 on
usage errors (bad flags, unknown presets or scenario ids, malformed input).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Sequence

from .algebra import Presentation
from .derivation import DifferentialSpec
from .homological import ahl3_resolution, hochschild_complex, minimal_resolution, tor_via_bar
from .ktheory import CaseParams, classify, reference_params
from .presets import PRESETS, build_preset, get_preset
from .scenarios import SCENARIOS, default_workers, suite, verify_theorem
from .specseq import BigradedPage, run_page
from .steenrod import DualSteenrod, homology_of_K_comodule, self_comodule, v1_thh_comodule

COMMANDS = ("classify", "poincare", "hh", "tor", "resolution", "primitives", "page", "scenario", "suite")
COMODULES = ("dual-steenrod", "hfp-K", "v1-thh-homology")
ENV_MAX_DEGREE = "THH_ENGINE_MAX_DEGREE"


class UsageError(Exception):
    pass


def _default_max_degree() -> int:
    raw = os.environ.get(ENV_MAX_DEGREE)
    if raw is None:
        return 60
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{ENV_MAX_DEGREE} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="thhfq", description="Exact F_p checks for THH of K(F_q)_p.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--q", type=int, help="prime power q")
    ap.add_argument("--p", type=int, help="odd prime p (default 5)")
    ap.add_argument("--max-degree", type=int, dest="max_degree",
                    help=f"degree bound (default 60, or ${ENV_MAX_DEGREE}; scenarios use their own default)")
    ap.add_argument("--output", choices=("text", "json", "csv"), default="text")
    ap.add_argument("--id", dest="scenario_id", help="scenario id (scenario command)")
    ap.add_argument("--preset", help="named presentation (see --list)")
    ap.add_argument("--input-file", dest="input_file",
                    help="Presentation JSON, or DifferentialSpec JSON for the page command")
    ap.add_argument("--degree", type=int, help="single degree (primitives)")
    ap.add_argument("--param", type=int, default=None, help="free coaction parameter (primitives)")
    ap.add_argument("--unit", type=int, default=1, help="rescale scenario differentials by this unit")
    ap.add_argument("--method", choices=("minimal", "bar"), default="minimal", help="Tor algorithm")
    ap.add_argument("--coefficients", choices=("self", "fp"), default="self",
                    help="hh: HH(A; A) or HH(A; F_p)")
    ap.add_argument("--workers", type=int, default=1, help="suite: worker processes (0 = auto)")
    ap.add_argument("--list", action="store_true", help="list presets or scenarios and exit")
    return ap


# -- argument resolution ---------------------------------------------------------------

def _params(args, required: bool = True) -> CaseParams | None:
    p = 5 if args.p is None else args.p
    if args.q is None:
        case = get_preset(args.preset).case if args.preset else None
        if case is not None:
            return reference_params(case, p)
        if required:
            raise UsageError("--q is required")
        return None
    try:
        return classify(args.q, p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _bound(args) -> int:
    D = _default_max_degree() if args.max_degree is None else args.max_degree
    if D < 0:
        raise UsageError("--max-degree must be non-negative")
    return D


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _presentation(args, D: int) -> tuple[Presentation, CaseParams | None]:
    if args.input_file and not args.preset:
        data = _read_json(args.input_file)
        data = data.get("presentation", data)
        try:
            return Presentation.from_json(data), None
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"bad presentation in {args.input_file}: {exc}") from None
    if not args.preset:
        raise UsageError("give --preset or --input-file")
    params = _params(args)
    return build_preset(args.preset, params, D), params


# -- output ------------------------------------------------------------------------------

def _emit(args, payload: dict, text: str, rows: list[list] | None) -> None:
    if args.output == "json":
        print(json.dumps(payload, separators=(",", ":") if args.command == "classify" else None,
                         indent=None if args.command == "classify" else 2))
    elif args.output == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows or [])
        sys.stdout.write(buf.getvalue())
    else:
        print(text)


def _dims_rows(dims: Sequence[int]) -> list[list]:
    return [["degree", "dim"]] + [[n, d] for n, d in enumerate(dims)]


def _bigraded_rows(dims: dict) -> list[list]:
    return [["s", "t", "dim"]] + [[s, t, n] for (s, t), n in sorted(dims.items()) if n]


def _bigraded_text(dims: dict, D: int) -> str:
    lines = [f"{'s':>4} {'t':>5} {'dim':>4}"]
    lines += [f"{s:>4} {t:>5} {n:>4}" for (s, t), n in sorted(dims.items()) if n and s + t <= D]
    return "\n".join(lines)


def _totals(dims: dict, D: int) -> list[int]:
    out = [0] * (D + 1)
    for (s, t), n in dims.items():
        if s + t <= D:
            out[s + t] += n
    return out


# -- commands -------------------------------------------------------------------------------

def cmd_classify(args) -> int:
    if args.q is None or args.p is None:
        raise UsageError("classify needs --q and --p")
    c = _params(args)
    payload = {"r": c.r, "v": c.v, "case": c.case_id}
    _emit(args, payload, json.dumps(payload, separators=(",", ":")), [["r", "v", "case"], [c.r, c.v, c.case_id]])
    return 0


def cmd_poincare(args) -> int:
    D = _bound(args)
    pres, params = _presentation(args, D)
    dims = list(pres.poincare(D).dims)
    payload = {"presentation": pres.to_json(), "params": params.to_json() if params else None,
               "max_degree": D, "dims": dims}
    text = "\n".join([repr(pres)] + [f"{n:>4}  {d}" for n, d in enumerate(dims)])
    _emit(args, payload, text, _dims_rows(dims))
    return 0


def cmd_hh(args) -> int:
    D = _bound(args)
    A, _ = _presentation(args, D)
    C = hochschild_complex(A, D, Q=A if args.coefficients == "self" else None)
    dims = C.homology_dims()
    tot = C.total_homology(D)
    payload = {"presentation": A.to_json(), "coefficients": args.coefficients, "max_degree": D,
               "dims": [{"s": s, "t": t, "dim": n} for (s, t), n in sorted(dims.items()) if n],
               "total_dims": tot}
    text = f"HH_*({A.name or 'A'}; {'A' if args.coefficients == 'self' else 'F_p'}) through internal degree {D}\n"
    _emit(args, payload, text + _bigraded_text(dims, 10 ** 9), _bigraded_rows(dims))
    return 0


def cmd_tor(args) -> int:
    D = _bound(args)
    A, _ = _presentation(args, D)
    dims = tor_via_bar(A, D) if args.method == "bar" else minimal_resolution(A, D).tor_dims()
    payload = {"presentation": A.to_json(), "method": args.method, "max_degree": D,
               "dims": [{"s": s, "t": t, "dim": n} for (s, t), n in sorted(dims.items()) if n],
               "total_dims": _totals(dims, D)}
    text = f"Tor^{A.name or 'A'}(F_p, F_p), internal degree <= {D} ({args.method})\n"
    _emit(args, payload, text + _bigraded_text(dims, 10 ** 9), _bigraded_rows(dims))
    return 0


def cmd_resolution(args) -> int:
    D = _bound(args)
    if args.preset == "ahl3":
        p = 5 if args.p is None else args.p
        params = reference_params(4, p) if args.q is None else _params(args)
        try:
            res = ahl3_resolution(params, min(D, 2 * params.p))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        A, _ = _presentation(args, D)
        res = minimal_resolution(A, D)
    payload = res.to_json()
    _emit(args, payload, res.chart(), _bigraded_rows(res.tor_dims()))
    return 0


def cmd_primitives(args) -> int:
    D = _bound(args)
    name = args.preset or "dual-steenrod"
    if name not in COMODULES:
        raise UsageError(f"primitives needs one of the comodule presets {', '.join(COMODULES)}")
    if args.degree is not None and args.degree < 0:
        raise UsageError("--degree must be non-negative")
    bound = max(D, args.degree or 0)
    if name == "dual-steenrod":
        C = self_comodule(DualSteenrod(5 if args.p is None else args.p, bound), bound)
    elif name == "hfp-K":
        C = homology_of_K_comodule(_params(args), bound=bound, c=args.param)
    else:
        p = 5 if args.p is None else args.p
        C = v1_thh_comodule(p, 1 if args.param is None else args.param, bound)
    degrees = [args.degree] if args.degree is not None else list(range(bound + 1))
    M = C.module
    result = []
    for n in degrees:
        prims = C.primitives(n)
        result.append({"degree": n, "basis_dim": len(C.basis(n)), "dim": len(prims),
                       "primitives": [M.format(x) for x in prims]})
    payload = {"comodule": name, "p": C.p, "bound": bound, "degrees": result}
    text = "\n".join(f"{r['degree']:>4}  basis {r['basis_dim']:>3}  primitives {r['dim']}"
                     + (f"  [{', '.join(r['primitives'])}]" if r["primitives"] else "") for r in result)
    rows = [["degree", "basis_dim", "primitives_dim"]] + [[r["degree"], r["basis_dim"], r["dim"]] for r in result]
    _emit(args, payload, text, rows)
    return 0


def _load_specs(path: str) -> tuple[list[DifferentialSpec], dict | None]:
    data = _read_json(path)
    pres = None
    if isinstance(data, dict) and "differentials" in data:
        pres = data.get("presentation")
        data = data["differentials"]
    elif isinstance(data, dict) and "page" in data:
        data = [data]
    elif isinstance(data, dict):
        return [], data
    try:
        return [DifferentialSpec.from_json(d) for d in data], pres
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad differential spec in {path}: {exc}") from None


def cmd_page(args) -> int:
    D = _bound(args)
    specs: list[DifferentialSpec] = []
    pres = None
    if args.input_file:
        specs, pres_json = _load_specs(args.input_file)
        if pres_json is not None and not args.preset:
            pres = Presentation.from_json(pres_json)
    if pres is None:
        if not args.preset:
            raise UsageError("page needs --preset or a presentation in --input-file")
        pres = build_preset(args.preset, _params(args), D + len(specs) + 1)
    page = BigradedPage.initial(pres, D + len(specs) + 1)
    for spec in specs:
        page = run_page(page, spec)
    D_eff = min(D, page.exact_through)
    payload = page.to_json(D_eff)
    text = f"E{page.r} page, exact through total degree {D_eff}\n" + page.chart(D_eff)
    rows = [["filtration", "internal", "dim"]] + [[s, t, n] for (s, t), n in sorted(page.dims().items())
                                                 if s + t <= D_eff]
    _emit(args, payload, text, rows)
    return 0


def _report_rows(reports) -> list[list]:
    rows = [["scenario", "case", "claim", "pass"]]
    for rep in reports:
        for c in rep.claims:
            rows.append([rep.scenario, rep.params.get("case"), c.description, c.passed])
    return rows


def cmd_scenario(args) -> int:
    if not args.scenario_id:
        raise UsageError("scenario needs --id")
    if args.scenario_id not in SCENARIOS:
        raise UsageError(f"unknown scenario {args.scenario_id!r}; known: {', '.join(SCENARIOS)}")
    sc = SCENARIOS[args.scenario_id]
    if args.q is None:
        params = reference_params(sc.cases[0], 5 if args.p is None else args.p)
    else:
        params = _params(args)
    if args.max_degree is not None and args.max_degree < 0:
        raise UsageError("--max-degree must be non-negative")
    try:
        rep = verify_theorem(args.scenario_id, params, args.max_degree, unit=args.unit)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, rep.to_json(), rep.to_text(), _report_rows([rep]))
    return 0 if rep.passed else 1


def cmd_suite(args) -> int:
    if args.max_degree is not None and args.max_degree < 0:
        raise UsageError("--max-degree must be non-negative")
    workers = default_workers() if args.workers == 0 else max(1, args.workers)
    reports = suite(args.max_degree, workers=workers)
    ok = all(r.passed for r in reports)
    payload = {"reports": [r.to_json() for r in reports], "pass": ok}
    text = "\n".join(r.to_text() for r in reports)
    text += f"\n\n{sum(r.passed for r in reports)}/{len(reports)} scenario runs pass"
    _emit(args, payload, text, _report_rows(reports))
    return 0 if ok else 1


def _list(args) -> int:
    if args.command in ("scenario", "suite"):
        for name, sc in SCENARIOS.items():
            print(f"{name:<22} cases {','.join(map(str, sc.cases)):<8} D={sc.default_degree:<4} {sc.description}")
    else:
        for name, pr in PRESETS.items():
            tag = f"case {pr.case}" if pr.case else ""
            print(f"{name:<20} {tag:<7} {pr.description}")
    return 0


HANDLERS = {
    "classify": cmd_classify, "poincare": cmd_poincare, "hh": cmd_hh, "tor": cmd_tor,
    "resolution": cmd_resolution, "primitives": cmd_primitives, "page": cmd_page,
    "scenario": cmd_scenario, "suite": cmd_suite,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.list:
            return _list(args)
        return HANDLERS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"thhfq: error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        parser.print_usage(sys.stderr)
        print(f"thhfq: error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
