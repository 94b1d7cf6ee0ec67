"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 golden-table
mismatch. All commands are batch: read inputs, write outputs, exit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import evalharness
from .errors import WeldError
from .interp import DEFAULT_STEP_BUDGET, eval_entry, format_value
from .ioutil import atomic_write, read_text
from .mechanisms import (
    Mechanism,
    Workspace,
    generate,
    link,
    mechanism_from_name,
    regenerate,
)
from .minioop import ast
from .minioop.parser import parse_unit
from .minioop.printer import print_unit
from .minioop.profile import LanguageProfile
from .transforms import (
    Artifact,
    extract_regions,
    file_include_resolver,
    format_lost_regions,
    inject_regions,
    merge_partials,
    part_merge,
    resolve_includes,
    weave_aspects,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_GOLDEN = 3


def _mechanism_names() -> list[str]:
    return [m.value for m in Mechanism]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weld",
        description="class-model code generation with eight handwritten-code "
                    "integration strategies")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="scaffold a workspace")
    p.add_argument("--mechanism", required=True, choices=_mechanism_names())
    p.add_argument("--out", default=".", help="workspace directory")

    for name, help_text in (("gen", "run the generator"),
                            ("regen", "re-run the generator"),
                            ("link", "assemble the runnable program into out/")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--workspace", default=".")

    p = sub.add_parser("run", help="link, then evaluate an entry expression")
    p.add_argument("--workspace", default=".")
    p.add_argument("--entry", required=True)

    p = sub.add_parser("evaluate", help="probe the criteria and print the table")
    p.add_argument("--mechanism", choices=_mechanism_names())
    p.add_argument("--report", help="write the machine-readable report here")
    p.add_argument("--expect", help="golden report to compare against")
    p.add_argument("--figure", help="render the matrix to this image file")

    p = sub.add_parser("resolve-includes", help="splice include files into a unit")
    p.add_argument("file")
    p.add_argument("--root", default=".",
                   help="directory include paths are relative to")
    p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("merge-partial", help="merge partial declarations")
    p.add_argument("--generated", nargs="*", default=[], metavar="FILE")
    p.add_argument("--handwritten", nargs="*", default=[], metavar="FILE")
    p.add_argument("--no-override", action="store_true",
                   help="forbid handwritten bodies replacing generated ones")
    p.add_argument("--no-partial-interfaces", action="store_true")
    p.add_argument("--out", help="output directory (default: stdout)")

    p = sub.add_parser("weave", help="weave aspects into units")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("--aspects", nargs="+", default=[], metavar="ASP")
    p.add_argument("--out", help="output directory (default: stdout)")

    p = sub.add_parser("part-merge",
                       help="merge one generated artifact with its "
                            "handwritten counterpart")
    p.add_argument("generated")
    p.add_argument("handwritten")
    p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("regions", help="protected-region tools")
    rsub = p.add_subparsers(dest="regions_command", required=True)
    pe = rsub.add_parser("extract", help="dump region ids and contents as JSON")
    pe.add_argument("file")
    pi = rsub.add_parser("inject",
                         help="carry regions from a previous file into fresh "
                              "generator output")
    pi.add_argument("fresh")
    pi.add_argument("--saved", required=True,
                    help="previous file whose regions are preserved")
    pi.add_argument("--out", required=True)

    return parser


# --- command bodies ---------------------------------------------------------

def _cmd_init(args) -> int:
    Workspace.create(Path(args.out), mechanism_from_name(args.mechanism))
    print(f"initialized {args.mechanism} workspace in {args.out}")
    return EXIT_OK


def _cmd_gen(args, regen: bool) -> int:
    ws = Workspace.load(Path(args.workspace))
    model = ws.read_model()
    result = regenerate(model, ws) if regen else generate(model, ws)
    for rel in result.evidence.files_written:
        print(rel)
    for rel, ids in result.lost_regions.items():
        print(f"warning: lost regions in gen/{rel}: {', '.join(ids)} "
              f"(content saved to gen/{rel}.lost)", file=sys.stderr)
    return EXIT_OK


def _cmd_link(args) -> int:
    ws = Workspace.load(Path(args.workspace))
    units = link(ws, on_warning=lambda msg: print(f"warning: {msg}",
                                                  file=sys.stderr))
    print(f"linked {len(units)} unit(s) into out/")
    return EXIT_OK


def _cmd_run(args) -> int:
    ws = Workspace.load(Path(args.workspace))
    units = link(ws, on_warning=lambda msg: print(f"warning: {msg}",
                                                  file=sys.stderr))
    budget = DEFAULT_STEP_BUDGET
    env_budget = os.environ.get("WELD_STEP_BUDGET")
    if env_budget is not None:
        try:
            budget = int(env_budget)
        except ValueError:
            raise WeldError("BAD_BUDGET",
                            f"WELD_STEP_BUDGET must be an integer, got "
                            f"{env_budget!r}")
    value = eval_entry(units, args.entry, step_budget=budget)
    print(format_value(value))
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    mechanisms = (tuple(m for m in Mechanism
                        if m.value == args.mechanism)
                  if args.mechanism else evalharness.MECHANISM_ORDER)
    matrix = evalharness.evaluate_all(mechanisms)
    print(evalharness.render_table(matrix, mechanisms))
    lines = evalharness.report_lines(matrix, mechanisms)
    if args.report:
        atomic_write(Path(args.report), "\n".join(lines) + "\n")
    if args.figure:
        from .figures import render_matrix_figure
        render_matrix_figure(matrix, args.figure, mechanisms)
    if args.expect:
        golden = read_text(Path(args.expect))
        if golden is None:
            raise WeldError("NO_GOLDEN", f"cannot read {args.expect}")
        if args.mechanism:
            golden = "\n".join(l for l in golden.splitlines()
                               if l.startswith(args.mechanism + ","))
        diffs = evalharness.diff_reports(lines, golden)
        if diffs:
            print("golden mismatch:", file=sys.stderr)
            for d in diffs:
                print(f"  {d}", file=sys.stderr)
            return EXIT_GOLDEN
        print("matches golden table")
    return EXIT_OK


def _read_file(path: str) -> str:
    text = read_text(Path(path))
    if text is None:
        raise WeldError("NO_FILE", f"cannot read {path}")
    return text


def _emit_units(units: list[ast.Unit], out_dir: str | None) -> None:
    if out_dir is None:
        for u in units:
            sys.stdout.write(print_unit(u))
    else:
        for u in units:
            atomic_write(Path(out_dir) / Path(u.path).name, print_unit(u))


def _cmd_resolve_includes(args) -> int:
    unit = parse_unit(_read_file(args.file), args.file)
    root = Path(args.root)
    resolver = file_include_resolver(lambda rel: read_text(root / rel))
    profile = LanguageProfile(includes=True, include_in_interface=True)
    resolved = resolve_includes(unit, resolver, profile,
                                lambda msg: print(f"warning: {msg}",
                                                  file=sys.stderr))
    if args.out:
        atomic_write(Path(args.out), print_unit(resolved))
    else:
        sys.stdout.write(print_unit(resolved))
    return EXIT_OK


def _cmd_merge_partial(args) -> int:
    if not args.generated and not args.handwritten:
        raise WeldError("NO_FILE", "no input files given")
    units = [parse_unit(_read_file(f), f, ast.ORIGIN_GENERATED)
             for f in args.generated]
    units += [parse_unit(_read_file(f), f, ast.ORIGIN_HANDWRITTEN)
              for f in args.handwritten]
    profile = LanguageProfile(
        partial_classes=True,
        partial_interfaces=not args.no_partial_interfaces,
        partial_method_override=not args.no_override)
    _emit_units(merge_partials(units, profile), args.out)
    return EXIT_OK


def _cmd_weave(args) -> int:
    units = [parse_unit(_read_file(f), f) for f in args.files]
    aspects: list[ast.AspectDecl] = []
    for f in args.aspects:
        unit = parse_unit(_read_file(f), f)
        for d in unit.decls:
            if not isinstance(d, ast.AspectDecl):
                raise WeldError("ASPECT_FILE",
                                f"{f} may contain only aspects")
            aspects.append(d)
    _emit_units(weave_aspects(units, aspects), args.out)
    return EXIT_OK


def _cmd_part_merge(args) -> int:
    merged = part_merge(
        Artifact(args.generated, _read_file(args.generated),
                 ast.ORIGIN_GENERATED),
        Artifact(args.handwritten, _read_file(args.handwritten),
                 ast.ORIGIN_HANDWRITTEN))
    if args.out:
        atomic_write(Path(args.out), merged.text)
    else:
        sys.stdout.write(merged.text)
    return EXIT_OK


def _cmd_regions(args) -> int:
    if args.regions_command == "extract":
        regions = extract_regions(_read_file(args.file), args.file)
        print(json.dumps(regions, indent=2))
        return EXIT_OK
    saved = extract_regions(_read_file(args.saved), args.saved)
    text, lost = inject_regions(_read_file(args.fresh), saved, args.fresh)
    atomic_write(Path(args.out), text)
    if lost:
        sidecar = Path(args.out + ".lost")
        atomic_write(sidecar, format_lost_regions(saved, lost))
        print(f"warning: lost regions: {', '.join(lost)} "
              f"(content saved to {sidecar})", file=sys.stderr)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "init":
            return _cmd_init(args)
        if args.command == "gen":
            return _cmd_gen(args, regen=False)
        if args.command == "regen":
            return _cmd_gen(args, regen=True)
        if args.command == "link":
            return _cmd_link(args)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "evaluate":
            return _cmd_evaluate(args)
        if args.command == "resolve-includes":
            return _cmd_resolve_includes(args)
        if args.command == "merge-partial":
            return _cmd_merge_partial(args)
        if args.command == "weave":
            return _cmd_weave(args)
        if args.command == "part-merge":
            return _cmd_part_merge(args)
        if args.command == "regions":
            return _cmd_regions(args)
        raise WeldError("UNKNOWN_COMMAND", f"unknown command {args.command!r}")
    except WeldError as e:
        print(f"error: {e.render()}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
