"""Command line interface.

    pretzelkh kh --pretzel 9,-7,0 --format latex
    pretzelkh s --pretzel 3,-3,-2
    pretzelkh turner-e1 --pretzel 9,-7,-2 --j 5
    pretzelkh verify thm1.2 --report-dir out/

Exit status: 0 on success, 1 on a domain error (bad input, s of a link,
an unsupported format), 2 when a crossing limit refuses the computation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import verify as verify_mod
from .diagram import (
    ORIENTATION_POLICIES,
    DiagramError,
    LinkDiagram,
    mirror,
    pretzel_columns,
    pretzel_diagram,
    reorient,
    signature,
    slice_bennequin_bounds,
    stats,
    torus2_diagram,
)
from .formulas import predict_s
from .khovanov import CrossingLimitError, jones_kauffman, khovanov_homology, latex_table, poincare_polynomial
from .lee import s_invariant
from .turner import TurnerData, build_sequence


class UsageError(Exception):
    """Bad combination of options; reported with exit status 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for limit refusals
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_triple(text: str):
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p,q,r, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three integers, got {text!r}")
    return tuple(parts)


def _parse_orient(spec: str):
    """A policy name or one 0/1 flag per component (commas optional)."""
    if spec in ORIENTATION_POLICIES:
        return spec
    flags = spec.replace(",", "")
    if not flags or set(flags) - {"0", "1"}:
        raise UsageError(f"--orient expects {' or '.join(ORIENTATION_POLICIES)} or 0/1 flags, got {spec!r}")
    return tuple(f == "1" for f in flags)


def _load_pd(path: str) -> LinkDiagram:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DiagramError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except ValueError as exc:
        raise DiagramError(f"malformed diagram JSON in {path}: {exc}") from exc
    if isinstance(data, list):
        # bare PD list, signs inferred from the edge numbering
        text = json.dumps({"pd": data})
    return LinkDiagram.from_json(text)


def load_diagram(args) -> LinkDiagram:
    orient = _parse_orient(args.orient) if args.orient else None
    if args.pretzel is not None:
        d = pretzel_diagram(*args.pretzel, orientation_choice=orient)
    elif args.torus is not None:
        d = torus2_diagram(args.torus, orientation_choice=orient)
    else:
        d = _load_pd(args.pd)
        if orient is not None:
            d = reorient(d, orient)
    if args.max_crossings is not None and d.n_crossings > args.max_crossings:
        raise CrossingLimitError(f"{d.n_crossings} crossings exceeds --max-crossings {args.max_crossings}")
    return d


def _need_format(args, *allowed):
    if args.format not in allowed:
        raise UsageError(f"format {args.format!r} is not available for {args.command}; use {', '.join(allowed)}")


def _dump(payload) -> str:
    return json.dumps(payload, sort_keys=True)


# ---------------------------------------------------------------------------
# commands


def cmd_kh(args, out):
    d = load_diagram(args)
    dims = khovanov_homology(d, method=args.method)
    if args.format == "json":
        out.write(dims.to_json() + "\n")
    elif args.format == "poly":
        out.write(str(poincare_polynomial(dims)) + "\n")
    else:
        out.write(latex_table(dims))
    if args.report_dir:
        from . import plotting

        report = Path(args.report_dir)
        report.mkdir(parents=True, exist_ok=True)
        (report / "kh.json").write_text(dims.to_json() + "\n")
        (report / "diagram.json").write_text(d.to_json() + "\n")
        plotting.save_figure(plotting.kh_grid_figure(dims, _title(args)), report / "kh.png")


def cmd_s(args, out):
    _need_format(args, "json", "poly")
    d = load_diagram(args)
    res = s_invariant(d, method=args.method)
    out.write((res.to_json() if args.format == "json" else str(res.s)) + "\n")


def cmd_jones(args, out):
    _need_format(args, "json", "poly")
    j = jones_kauffman(load_diagram(args))
    if args.format == "json":
        out.write(_dump({"jones": {str(k): v for k, v in sorted(j.coeffs.items())}}) + "\n")
    else:
        out.write(str(j) + "\n")


def cmd_stats(args, out):
    _need_format(args, "json")
    d = load_diagram(args)
    st = stats(d)
    payload = {
        "components": d.component_count,
        "crossings": d.n_crossings,
        "n_minus": st.n_minus,
        "n_plus": st.n_plus,
        "seifert_circles": st.seifert_circle_count,
        "strongly_negative": st.strongly_negative_count,
        "non_negative": st.non_negative_count,
        "writhe": st.writhe,
    }
    if d.component_count == 1:
        payload["signature"] = signature(d)
    out.write(_dump(payload) + "\n")


def cmd_bounds(args, out):
    _need_format(args, "json")
    d = load_diagram(args)
    plain, sharp = slice_bennequin_bounds(d)
    mplain, msharp = slice_bennequin_bounds(mirror(d))
    lo = plain if sharp is None else max(plain, sharp)
    hi = -(mplain if msharp is None else max(mplain, msharp))
    payload = {
        "lower_plain": plain,
        "lower_sharper": sharp,
        "mirror_lower_plain": mplain,
        "mirror_lower_sharper": msharp,
        "interval": [lo, hi],
    }
    out.write(_dump(payload) + "\n")


def _default_order(args, d):
    if args.order:
        try:
            return [int(x) for x in args.order.split(",")]
        except ValueError:
            raise UsageError(f"--order expects crossing indices, got {args.order!r}") from None
    if args.pretzel is not None:
        cols = pretzel_columns(*args.pretzel)
        return next((c for c in reversed(cols) if c), [])
    raise UsageError("turner-e1 needs --order for non-pretzel diagrams")


def cmd_turner(args, out):
    _need_format(args, "json", "latex")
    d = load_diagram(args)
    order = _default_order(args, d)
    choices = None
    if args.tilde_orient:
        choices = [(None, _parse_orient(args.tilde_orient))] * len(order)
    seq = build_sequence(d, order, choices)
    data = TurnerData(seq, threads=args.threads)
    js = args.j if args.j else data.nonempty_j()
    pages = [data.page(j) for j in js]
    if args.format == "json":
        payload = {
            "constants": data.constants.to_dict(),
            "crossing_order": list(seq.crossing_order),
            "pages": [json.loads(p.to_json()) for p in pages],
            "provenance": [list(p) for p in seq.provenance],
        }
        out.write(_dump(payload) + "\n")
    else:
        for p in pages:
            out.write(p.to_latex())
    if args.report_dir:
        from . import plotting

        report = Path(args.report_dir)
        report.mkdir(parents=True, exist_ok=True)
        for p in pages:
            (report / f"e1_j{p.j}.json").write_text(p.to_json() + "\n")
            fig = plotting.e1_page_figure(p, f"E1 page of {_title(args)}, j = {p.j}")
            plotting.save_figure(fig, report / f"e1_j{p.j}.png")


def cmd_predict(args, out):
    _need_format(args, "json")
    if args.pretzel is None:
        raise UsageError("predict needs --pretzel")
    try:
        pred = predict_s(*args.pretzel)
    except ValueError as exc:
        raise DiagramError(str(exc)) from exc
    out.write(_dump(None if pred is None else pred.to_dict()) + "\n")


def _suite_params(args) -> dict:
    params = {}
    for item in args.param or []:
        key, _, value = item.partition("=")
        if not value:
            raise UsageError(f"--param expects key=value, got {item!r}")
        try:
            parsed = json.loads(value)
        except ValueError:
            raise UsageError(f"--param value must be JSON, got {value!r}") from None
        params[key] = tuple(parsed) if isinstance(parsed, list) else parsed
    return params


def cmd_verify(args, out):
    _need_format(args, "json")
    try:
        result = verify_mod.run_suite(args.suite, threads=args.threads, **_suite_params(args))
    except TypeError as exc:
        raise UsageError(f"bad parameters for suite {args.suite}: {exc}") from exc
    out.write(json.dumps(result.to_dict(), sort_keys=True) + "\n")
    if args.report_dir:
        verify_mod.write_report(result, args.report_dir, figures=not args.no_figures)
    if args.strict and result.failed:
        return 1
    return 0


def _title(args) -> str:
    if args.pretzel is not None:
        return "P(" + ",".join(map(str, args.pretzel)) + ")"
    if args.torus is not None:
        return f"T(2,{args.torus})"
    return Path(args.pd).stem


# ---------------------------------------------------------------------------
# parser


def _add_input(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--pretzel", type=_parse_triple, metavar="P,Q,R", help="pretzel link P(p,q,r)")
    g.add_argument("--torus", type=int, metavar="N", help="torus link T(2,n)")
    g.add_argument("--pd", metavar="FILE", help="diagram JSON {pd, signs, orientation} or a bare PD list")
    p.add_argument("--orient", metavar="SPEC", help="orientation: a policy (inherit, max_positive) or 0/1 flags per component")


def _add_common(p, formats=("json", "poly", "latex")):
    p.add_argument("--format", choices=formats, default="json")
    p.add_argument("--max-crossings", type=int, metavar="N", help="refuse diagrams with more crossings (exit 2)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pretzelkh", description="Khovanov homology, Lee homology and s of pretzel and T(2,n) links.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kh", help="rational Khovanov homology")
    _add_input(p)
    _add_common(p)
    p.add_argument("--method", choices=("auto", "scan", "cube"), default="auto")
    p.add_argument("--report-dir", metavar="DIR", help="also write JSON and a rank figure here")
    p.set_defaults(func=cmd_kh)

    p = sub.add_parser("s", help="Rasmussen s-invariant of a knot")
    _add_input(p)
    _add_common(p)
    p.add_argument("--method", choices=("auto", "scan", "cube"), default="auto")
    p.set_defaults(func=cmd_s)

    for name, func, text in (
        ("jones", cmd_jones, "unnormalised Jones polynomial (state sum)"),
        ("stats", cmd_stats, "writhe, Seifert circles and signature"),
        ("bounds", cmd_bounds, "slice-Bennequin bounds for s"),
    ):
        p = sub.add_parser(name, help=text)
        _add_input(p)
        _add_common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("turner-e1", help="E1 pages of the skein spectral sequence")
    _add_input(p)
    _add_common(p)
    p.add_argument("--j", type=int, action="append", metavar="J", help="quantum degree (repeatable; default all nonzero)")
    p.add_argument("--order", metavar="I,J,...", help="crossings to resolve (default: last nonempty pretzel column)")
    p.add_argument("--tilde-orient", metavar="SPEC", help="orientation of every 0-resolved diagram")
    p.add_argument("--report-dir", metavar="DIR", help="also write page JSON and figures here")
    p.set_defaults(func=cmd_turner)

    p = sub.add_parser("predict", help="published s prediction for a pretzel knot")
    p.add_argument("--pretzel", type=_parse_triple, required=True, metavar="P,Q,R")
    _add_common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=verify_mod.SUITES)
    _add_common(p)
    p.add_argument("--param", action="append", metavar="KEY=JSON", help="suite parameter, e.g. pmax=5 or rs=[2,4]")
    p.add_argument("--report-dir", metavar="DIR", help="write JSON, CSV and figures here")
    p.add_argument("--no-figures", action="store_true", help="skip figures in the report")
    p.add_argument("--strict", action="store_true", help="exit 1 when a check fails")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_crossings is not None and args.max_crossings < 1:
        print("error: --max-crossings must be at least 1", file=sys.stderr)
        return 1
    try:
        status = args.func(args, out)
    except CrossingLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DiagramError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
