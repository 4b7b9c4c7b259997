"""Command line interface: ``emq compute | verify | ring | validate``.

Exit codes: 0 success, 1 verification mismatch or invalid file in
``validate``, 2 unreadable or invalid input, 3 bad window, 4 ring requested
for a functor without products.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .coefficients import Window, table
from .mackey import (
    CATALOG_NAMES,
    GreenFunctor,
    MackeyFunctor,
    MkyParseError,
    MkyValidationError,
    catalog,
    load_mky,
    random_mackey,
)
from .oracle import cross_check
from .render import render_csv, render_grid, render_json, render_svg
from .ring import ring_presentation

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_WINDOW, EXIT_NOT_GREEN = 0, 1, 2, 3, 4
DEFAULT_WINDOW = "-10:10,-10:10"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def parse_window(text: str) -> Window:
    try:
        xs, ys = text.split(",")
        x0, x1 = (int(v) for v in xs.split(":"))
        y0, y1 = (int(v) for v in ys.split(":"))
        return Window(x0, x1, y0, y1)
    except ValueError as exc:
        raise CliError(EXIT_WINDOW, f"bad window {text!r}: expected x0:x1,y0:y1 with x0 <= x1, y0 <= y1 ({exc})")


def load_source(source: str) -> MackeyFunctor:
    if source in CATALOG_NAMES or source == "zero":
        return catalog(source)
    path = Path(source)
    if not path.exists():
        raise CliError(EXIT_INPUT, f"unknown functor {source!r}: not a catalog name and no such file")
    try:
        return load_mky(path)
    except MkyValidationError as exc:
        report = "\n".join(f"  {v}" for v in exc.report)
        raise CliError(EXIT_INPUT, f"{source} fails the Mackey axioms:\n{report}")
    except (MkyParseError, OSError) as exc:
        raise CliError(EXIT_INPUT, f"cannot parse {source}: {exc}")


def load_sources(source: str) -> list[MackeyFunctor]:
    """A single functor, or ``random:N:seed`` for N random functors from seed on."""
    if source.startswith("random:"):
        try:
            _, n, seed = source.split(":")
            count, start = int(n), int(seed)
        except ValueError:
            raise CliError(EXIT_INPUT, f"bad random source {source!r}: expected random:N:seed")
        return [random_mackey(start + k) for k in range(count)]
    return [load_source(source)]


def _actors(text: str | None) -> tuple[str, ...]:
    if not text:
        return ()
    out = tuple(a.strip() for a in text.split(",") if a.strip())
    bad = [a for a in out if a not in ("a", "u", "omega", "ω")]
    if bad:
        raise CliError(EXIT_INPUT, f"unknown actor(s) {bad}; use a, u, omega")
    return out


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_compute(args) -> int:
    M = load_source(args.mackey)
    window = parse_window(args.window)
    actors = _actors(args.actions)
    if args.format == "svg" and not actors:
        actors = ("a", "u")
    tab = table(M, window, actors)
    name = M.name or args.mackey
    if args.format == "grid":
        text = render_grid(tab, window)
    elif args.format == "csv":
        text = render_csv(tab)
    elif args.format == "json":
        text = render_json(tab, window, name)
    else:
        text = render_svg(tab, window, name)
    _emit(text, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    window = parse_window(args.window)
    functors = load_sources(args.mackey)
    failures = 0
    for M in functors:
        mismatches = cross_check(M, window, check_a=not args.groups_only)
        if mismatches:
            failures += 1
            print(f"{M.name or args.mackey}: {len(mismatches)} mismatch(es)")
            for m in mismatches:
                print(f"  {m}")
    if failures:
        return EXIT_MISMATCH
    print(f"clean: {len(functors)} functor(s) on [{window.x0},{window.x1}]x[{window.y0},{window.y1}]")
    return EXIT_OK


def cmd_ring(args) -> int:
    M = load_source(args.mackey)
    window = parse_window(args.window)
    if not isinstance(M, GreenFunctor):
        raise CliError(EXIT_NOT_GREEN, f"{M.name or args.mackey} has no product data; a Green functor is required")
    pres = ring_presentation(M, window)
    if args.format == "json":
        text = json.dumps(pres.to_dict(), indent=1, ensure_ascii=False) + "\n"
    else:
        text = pres.to_text()
    _emit(text, args.output)
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        M = load_mky(args.path)
    except MkyValidationError as exc:
        print(f"{args.path}: invalid")
        for v in exc.report:
            print(f"  {v}")
        return EXIT_MISMATCH
    except (MkyParseError, OSError) as exc:
        print(f"{args.path}: parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    kind = "Green functor" if isinstance(M, GreenFunctor) else "Mackey functor"
    print(f"{args.path}: valid {kind} (M(Q/Q) = {M.fixed_level}, V = {M.V})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="emq", description="RO(Q)-graded coefficients of HM for Q of order two")
    sub = p.add_subparsers(dest="command", required=True)
    names = ", ".join(CATALOG_NAMES + ("zero",))

    c = sub.add_parser("compute", help="table of coefficient groups")
    c.add_argument("--mackey", required=True, help=f"catalog name ({names}) or a .mky file")
    c.add_argument("--window", default=DEFAULT_WINDOW, help="x0:x1,y0:y1 (default %(default)s)")
    c.add_argument("--format", choices=["grid", "csv", "json", "svg"], default="grid")
    c.add_argument("--actions", help="comma-separated subset of a,u,omega")
    c.add_argument("--output", "-o", help="write to a file instead of stdout")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="compare closed forms with the cellular oracle")
    v.add_argument("--mackey", required=True, help="catalog name, .mky file, or random:N:seed")
    v.add_argument("--window", default=DEFAULT_WINDOW)
    v.add_argument("--groups-only", action="store_true", help="skip the comparison of a-maps")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("ring", help="generators and relations of a Green functor")
    r.add_argument("--mackey", required=True)
    r.add_argument("--window", default=DEFAULT_WINDOW)
    r.add_argument("--format", choices=["text", "json"], default="text")
    r.add_argument("--output", "-o")
    r.set_defaults(func=cmd_ring)

    val = sub.add_parser("validate", help="check a .mky file against the Mackey axioms")
    val.add_argument("path")
    val.set_defaults(func=cmd_validate)
    return p


def _join_window(argv: list[str]) -> list[str]:
    # argparse reads "-4:4,-4:4" as an option; glue it to its flag
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--window":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--window={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_window(sys.argv[1:] if argv is None else list(argv)))
    try:
        return args.func(args)
    except CliError as exc:
        print(f"emq: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
