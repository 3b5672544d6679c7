"""``doodle`` command line.

Inputs are file paths, ``-`` for stdin, ``family:NAME[:N]`` or
``fixture:NAME``.  A missing path whose file name is a shipped fixture
(``fixtures/d4.1.pd``) falls back to that fixture.

Exit codes: 0 success or equal, 1 unequal or failed check, 2 usage,
3 unreadable input, 4 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from pathlib import Path

from . import __version__
from .canonical import canonical_code, doodle_equal
from .codec import (
    ParseError,
    emit_gauss,
    format_gauss,
    format_pd,
    from_json,
    parse_gauss,
    parse_pd,
    parse_pd_text,
    render_dot,
    render_svg,
    to_json,
)
from .core import DoodleError, Mode, StructureError, check_identities
from .enumeration import Budget, BudgetExceeded, census, store_append, verify_census_claims
from .families import FIXTURE_NAMES, family, fixture_text
from .moves import reduce_with_trace
from .virtualization import gauss_data_equal, planarize, virtual_area_number

log = logging.getLogger("doodlekit")

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration


def load_config(args) -> dict:
    """Settings from flags, then ``DOODLE_*`` variables, then a JSON config file."""
    cfg = {}
    path = getattr(args, "config", None) or os.environ.get("DOODLE_CONFIG")
    if path:
        try:
            cfg.update(json.loads(Path(path).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config {path}: {exc}") from exc
    env = {"store": os.environ.get("DOODLE_STORE"), "budget_secs": os.environ.get("DOODLE_BUDGET_SECS")}
    cfg.update({k: v for k, v in env.items() if v is not None})
    flags = {"store": getattr(args, "store", None), "budget_secs": getattr(args, "budget", None),
             "workers": getattr(args, "workers", None)}
    cfg.update({k: v for k, v in flags.items() if v is not None})
    if cfg.get("budget_secs") is not None:
        cfg["budget_secs"] = float(cfg["budget_secs"])
    cfg["workers"] = int(cfg.get("workers", 1))
    return cfg


# ---------------------------------------------------------------------------
# input


def _sniff(text: str) -> str:
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    if body.startswith("{"):
        return "json"
    if any(tag in body for tag in ("X(", "V(", "O(")):
        return "pd"
    return "gauss"


def read_text(source: str):
    """Return (text, format hint) for an input source."""
    if source == "-":
        return sys.stdin.read(), None
    if source.startswith("fixture:"):
        return _fixture(source.split(":", 1)[1]), "pd"
    path = Path(source)
    if path.exists():
        fmt = {".pd": "pd", ".json": "json", ".gauss": "gauss"}.get(path.suffix)
        return path.read_text(encoding="utf-8"), fmt
    stem = path.name[:-3] if path.name.endswith(".pd") else None
    if stem in FIXTURE_NAMES:
        return _fixture(stem), "pd"
    raise InputError(f"no such input: {source}")


def _fixture(name):
    try:
        return fixture_text(name)
    except KeyError as exc:
        raise InputError(str(exc)) from exc


def read_map(source: str, fmt=None, mode=None):
    if source.startswith("family:"):
        parts = source.split(":")
        try:
            return family(parts[1], int(parts[2]) if len(parts) > 2 else None, mode)
        except (KeyError, ValueError) as exc:
            raise InputError(str(exc)) from exc
    text, hint = read_text(source)
    fmt = fmt or hint or _sniff(text)
    if fmt == "json":
        m = from_json(text)
        return m if mode is None else m.with_mode(mode)
    if fmt == "pd":
        return parse_pd(text, mode)
    return parse_gauss(text, mode)


def read_pd(source: str, fmt=None):
    """A PD document for the input, planarizing other formats."""
    if not source.startswith("family:"):
        text, hint = read_text(source)
        if (fmt or hint or _sniff(text)) == "pd":
            return parse_pd_text(text)
    return planarize(read_map(source, fmt))


def write_map(m, fmt: str) -> str:
    if fmt == "json":
        return to_json(m) + "\n"
    if fmt == "pd":
        return format_pd(planarize(m))
    return format_gauss(emit_gauss(m))


# ---------------------------------------------------------------------------
# commands


def cmd_reduce(args, cfg):
    m = read_map(args.input, args.format)
    out, trace = reduce_with_trace(m, args.strategy, args.seed)
    sys.stdout.write(write_map(out, args.out))
    for i, site in enumerate(trace, 1):
        move = "H1-" if site.kind == "monogon" else "H2-"
        print(f"# {i}: {move} at crossings {list(site.crossings)}")
    return EXIT_OK


def cmd_canon(args, cfg):
    m = read_map(args.input, args.format)
    print(canonical_code(m, args.mode).hex())
    return EXIT_OK


def cmd_eq(args, cfg):
    if args.detour_only:
        same = gauss_data_equal(read_pd(args.input1, args.format), read_pd(args.input2, args.format), args.mode)
    else:
        mode = Mode.parse(args.mode)
        same = doodle_equal(read_map(args.input1, args.format, mode), read_map(args.input2, args.format, mode), mode)
    print("equal" if same else "not equal")
    return EXIT_OK if same else EXIT_FALSE


def cmd_genus(args, cfg):
    from .canonical import genus_of_doodle

    print(genus_of_doodle(read_map(args.input, args.format)))
    return EXIT_OK


def cmd_va(args, cfg):
    print(virtual_area_number(read_pd(args.input, args.format)))
    return EXIT_OK


def cmd_census(args, cfg):
    budget = Budget(seconds=cfg.get("budget_secs"))
    store = cfg.get("store")
    checkpoint = args.checkpoint or (f"{store}.n{args.n}.ckpt" if store else None)
    try:
        records = census(args.n, genus=args.genus, components=args.components, budget=budget,
                         workers=cfg["workers"], checkpoint=checkpoint)
    except BudgetExceeded as exc:
        print(f"budget exhausted after {len(exc.records)} records; rerun to resume"
              + (f" from {checkpoint}" if checkpoint else ""), file=sys.stderr)
        return EXIT_BUDGET
    if store:
        added = store_append(records, store)
        print(f"{len(records)} records, {added} new, store {store}")
    else:
        for r in records:
            print(json.dumps(r.to_dict(), sort_keys=True))
    return EXIT_OK


def cmd_verify(args, cfg):
    results = verify_census_claims(extended=args.extended, workers=cfg["workers"],
                                   budget_seconds=cfg.get("budget_secs"))
    ok = True
    for r in results:
        ok &= bool(r.passed)
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail} ({r.seconds:.1f}s)")
    return EXIT_OK if ok else EXIT_FALSE


def cmd_family(args, cfg):
    try:
        m = family(args.name, args.n)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    sys.stdout.write(write_map(m, args.out))
    return EXIT_OK


def cmd_planarize(args, cfg):
    doc = planarize(read_map(args.input, args.format), seed=args.seed)
    sys.stdout.write(format_pd(doc))
    print(f"# virtual crossings: {doc.n_virtual}")
    return EXIT_OK


def cmd_render(args, cfg):
    if args.dot:
        sys.stdout.write(render_dot(read_map(args.input, args.format)))
    else:
        sys.stdout.write(render_svg(read_pd(args.input, args.format)))
    return EXIT_OK


def cmd_identities(args, cfg):
    m = read_map(args.input, args.format)
    rep = check_identities(m)
    if not rep.applicable:
        print(f"not applicable: {rep.reason}")
        return EXIT_FALSE
    for c in rep.checks:
        print(f"{c.name}: {c.lhs} = {c.rhs} {'ok' if c.ok else 'FAILED'}")
    return EXIT_OK if rep.passed else EXIT_FALSE


def cmd_confluence(args, cfg):
    from . import confluence as lab

    if args.doodle_seed:
        g = lab.doodle_subgraph(read_map(args.doodle_seed, args.format), depth=args.depth)
        rts = sorted(lab.roots(g))
        print(f"nodes {len(g.levels)}, edges {len(g.edges())}, roots {len(rts)}")
        for r in rts:
            print(f"root {r}")
        return EXIT_OK if len(rts) == 1 else EXIT_FALSE
    seed = args.seed if args.seed is not None else 0
    rng = random.Random(seed)
    counts = {}
    bad = 0
    for _ in range(args.random):
        g = lab.random_leveled_graph(rng, rng.randint(3, 9), rng.uniform(0.2, 0.6), rng.randint(2, 5))
        ldc, urp = lab.check_ldc(g), lab.check_urp(g)
        counts[(ldc, urp)] = counts.get((ldc, urp), 0) + 1
        bad += ldc and not urp
    print(f"seed {seed}, graphs {args.random}")
    for (ldc, urp), c in sorted(counts.items()):
        print(f"ldc={ldc} urp={urp}: {c}")
    print(f"ldc without urp: {bad}")
    return EXIT_OK if bad == 0 else EXIT_FALSE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="doodle", description="Doodles on surfaces as combinatorial maps.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--config", help="JSON config file (keys: store, budget_secs, workers)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(sp, name="input"):
        sp.add_argument(name)
        sp.add_argument("--format", choices=("gauss", "pd", "json"), help="input format (default: sniffed)")

    sp = sub.add_parser("reduce", help="minimal diagram and move trace")
    with_input(sp)
    sp.add_argument("--out", choices=("gauss", "pd", "json"), default="gauss")
    sp.add_argument("--strategy", choices=("first", "random", "greedy-bigon-first"), default="first")
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("canon", help="canonical code")
    with_input(sp)
    sp.add_argument("--mode", default="unoriented,unordered")
    sp.set_defaults(func=cmd_canon)

    sp = sub.add_parser("eq", help="exit 0 iff the two inputs are the same doodle")
    sp.add_argument("input1")
    sp.add_argument("input2")
    sp.add_argument("--format", choices=("gauss", "pd", "json"))
    sp.add_argument("--mode", default="unoriented,unordered")
    sp.add_argument("--detour-only", action="store_true", help="compare Gauss data without reduction")
    sp.set_defaults(func=cmd_eq)

    for name, fn, text in (("genus", cmd_genus, "genus of the doodle"),
                           ("va", cmd_va, "virtual area number")):
        sp = sub.add_parser(name, help=text)
        with_input(sp)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("census", help="connected minimal maps with n crossings")
    sp.add_argument("n", type=int)
    sp.add_argument("--genus", type=int)
    sp.add_argument("--components", type=int)
    sp.add_argument("--store", help="JSON-lines store to append to (env DOODLE_STORE)")
    sp.add_argument("--budget", type=float, help="seconds (env DOODLE_BUDGET_SECS)")
    sp.add_argument("--workers", type=int)
    sp.add_argument("--checkpoint", help="checkpoint file (default: next to the store)")
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("verify-claims", help="check the census claims")
    sp.add_argument("--extended", action="store_true", help="also run the 9 and 10 crossing claims")
    sp.add_argument("--workers", type=int)
    sp.add_argument("--budget", type=float)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("family", help="emit a family member")
    sp.add_argument("name")
    sp.add_argument("n", nargs="?", type=int)
    sp.add_argument("--out", choices=("gauss", "pd", "json"), default="json")
    sp.set_defaults(func=cmd_family)

    sp = sub.add_parser("planarize", help="planar drawing with virtual crossings")
    with_input(sp)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_planarize)

    sp = sub.add_parser("render", help="SVG or DOT text")
    with_input(sp)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--svg", action="store_true")
    g.add_argument("--dot", action="store_true")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("identities", help="edge, face and face-degree identities")
    with_input(sp)
    sp.set_defaults(func=cmd_identities)

    sp = sub.add_parser("confluence", help="diamond-condition lab")
    sp.add_argument("--random", type=int, default=0, metavar="N")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--doodle-seed", metavar="INPUT")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--format", choices=("gauss", "pd", "json"))
    sp.set_defaults(func=cmd_confluence)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if getattr(args, "seed", None) is not None:
        log.info("seed %s", args.seed)
    try:
        cfg = load_config(args)
        return args.func(args, cfg)
    except InputError as exc:
        print(f"doodle: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ParseError, StructureError, ValueError) as exc:
        print(f"doodle: cannot parse input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DoodleError as exc:
        print(f"doodle: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
