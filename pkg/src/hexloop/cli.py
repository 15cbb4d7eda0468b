"""Command-line interface wiring domains, engines, checks, chains, and SVG.

Subcommands: ``enumerate`` (exact weighted sums), ``sample`` (one chain,
CSV of event estimates), ``verify`` (exhaustive check suites over the
frozen fixture sets, nonzero exit on any in-region failure), ``render``
(configuration file to SVG), and ``scan`` (a grid of sampling jobs, CSV
phase table).

Every run writes one JSON line with the fully resolved configuration to
stderr, so any output can be reproduced from its log line.  Errors are
reported as one JSON object on stderr with exit code 2.
"""

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .checks import (
    check_bijection,
    check_catalan_bound,
    check_cbc,
    check_contour_identity,
    check_domain_markov_and_duality,
    check_domain_monotonicity,
    check_fkg_lattice,
    check_several_faces,
    check_symmetric_domain,
    check_triangle_lower_bound,
)
from .configs import Params, loops_from_json, spins_from_json
from .errors import HexloopError, OutOfRange
from .exact import (
    MAX_BRUTE_EDGES,
    MAX_SWEEP_WIDTH,
    brute_force_Z,
    sweep_Z,
    sweep_width,
)
from .fixtures import (
    defect_sets,
    load_default_grid,
    load_domains,
    load_monotone_pairs,
    load_symmetric_fixtures,
    resolve_x,
)
from .lattice import domain_from_hexagons, hexagon_ball, triangle_domain
from .render import render_loops, render_spins
from .sampler import run_chain

WEDGE = ((0, 0), (1, 0), (0, 1))
SUITES = ("fkg", "cbc", "markov", "bijection", "catalan", "monotone",
          "triangle", "contour", "symmetric", "all")


def _read_structured(text: str):
    """Parse a flag that is a file path or inline JSON."""
    if os.path.exists(text):
        with open(text) as fh:
            return json.load(fh)
    stripped = text.strip()
    if stripped.startswith(("{", "[")):
        return json.loads(stripped)
    raise OutOfRange(f"not a file and not inline JSON: {text!r}")


def _domain_from_spec(text: str):
    """Resolve a --domain flag into a (name, Domain) pair.

    Accepts a JSON file or inline JSON with one of the keys ``hexagons``,
    ``ball``, ``triangle``, or ``fixture``, or the bare name of a fixture
    from the shipped domain corpus.
    """
    for fixture in load_domains():
        if fixture.name == text:
            return text, fixture.build()
    obj = _read_structured(text)
    if not isinstance(obj, dict):
        raise OutOfRange("a domain spec must be a JSON object")
    if "hexagons" in obj:
        cells = [tuple(c) for c in obj["hexagons"]]
        return obj.get("name", "hexagons"), domain_from_hexagons(cells)
    if "ball" in obj:
        k = int(obj["ball"])
        return f"ball{k}", domain_from_hexagons(hexagon_ball(k))
    if "triangle" in obj:
        side = int(obj["triangle"])
        return f"triangle{side}", triangle_domain(side).domain
    if "fixture" in obj:
        for fixture in load_domains():
            if fixture.name == obj["fixture"]:
                return fixture.name, fixture.build()
        raise OutOfRange(f"unknown fixture {obj['fixture']!r}")
    raise OutOfRange("domain spec needs hexagons, ball, triangle, or fixture")


def _defects_from_flag(text: str) -> tuple:
    if not text.strip():
        return ()
    obj = json.loads(text)
    return tuple(tuple(v) for v in obj)


def _log_config(command: str, resolved: dict) -> None:
    line = {"command": command, "resolved": resolved,
            "caps": {"max_brute_edges": MAX_BRUTE_EDGES,
                     "max_sweep_width": MAX_SWEEP_WIDTH}}
    print(json.dumps(line, sort_keys=True), file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# enumerate
# ---------------------------------------------------------------------------

def _cmd_enumerate(args) -> int:
    name, domain = _domain_from_spec(args.domain)
    defects = _defects_from_flag(args.A)
    x = resolve_x(args.x, args.n)
    if args.h != 0.0 or args.hp != 0.0:
        raise OutOfRange("defect enumeration is loop-side; field terms "
                         "belong to sample")
    params = Params(args.n, x)
    engine = args.engine
    if engine == "auto":
        engine = ("sweep" if sweep_width(domain.edges) <= MAX_SWEEP_WIDTH
                  else "brute")
    _log_config("enumerate", {"domain": name, "A": [list(v) for v in defects],
                              "n": args.n, "x": x, "h": args.h, "hp": args.hp,
                              "engine": engine, "out": args.out})
    t0 = time.perf_counter()
    if engine == "sweep":
        ws = sweep_Z(domain, defects, params)
    else:
        ws = brute_force_Z(domain, defects, params)
    record = {"domain": name, "A": [list(v) for v in defects],
              "n": args.n, "x": x, "h": args.h, "hp": args.hp,
              "log_Z": ws.log_magnitude, "engine": engine,
              "elapsed": round(time.perf_counter() - t0, 6)}
    _emit(json.dumps(record, sort_keys=True) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------
# sample and scan
# ---------------------------------------------------------------------------

def _event_list(text: str) -> list:
    obj = _read_structured(text)
    if isinstance(obj, dict):
        obj = [obj]
    return obj


def _event_name(spec: dict) -> str:
    return json.dumps(spec, sort_keys=True, separators=(",", ":"))


def _estimates_csv(rows: list[tuple]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["event", "mean", "stderr", "n_samples", "tau_int"])
    for name, est in rows:
        writer.writerow([name, repr(est.mean), repr(est.stderr),
                         est.n_samples, repr(est.tau_int)])
    return out.getvalue()


def _cmd_sample(args) -> int:
    name, domain = _domain_from_spec(args.domain)
    tau = 1 if args.tau == "plus" else -1
    x = resolve_x(args.x, args.n)
    params = Params(args.n, x, args.h, args.hp)
    events = _event_list(args.events)
    _log_config("sample", {"domain": name, "tau": args.tau, "n": args.n,
                           "x": x, "h": args.h, "hp": args.hp,
                           "sweeps": args.sweeps, "burn": args.burn,
                           "seed": args.seed, "stream": args.stream,
                           "events": events, "out": args.out})
    estimates = run_chain(domain, tau, params, args.sweeps, args.burn,
                          seed=args.seed, events=events, stream=args.stream)
    rows = [(_event_name(spec), est) for spec, est in zip(events, estimates)]
    _emit(_estimates_csv(rows), args.out)
    return 0


def _scan_cell(payload: tuple):
    (hexagons, tau, n, x, h, hp, sweeps, burn, seed, stream, event) = payload
    params = Params(n, x, h, hp)
    est = run_chain(hexagons, tau, params, sweeps, burn, seed=seed,
                    events=[event], stream=stream)[0]
    return est


def _cmd_scan(args) -> int:
    name, domain = _domain_from_spec(args.domain)
    hexagons = tuple(sorted(domain.interior_hexagons))
    tau = 1 if args.tau == "plus" else -1
    xs = [resolve_x(tok, args.n) for tok in args.xs.split(",") if tok]
    hs = [float(tok) for tok in args.hs.split(",") if tok]
    event = _read_structured(args.event)
    workers = args.workers
    if workers is None:
        workers = int(os.environ.get("HEXLOOP_WORKERS", "1"))
    cells = [(x, h) for x in xs for h in hs]
    _log_config("scan", {"domain": name, "tau": args.tau, "n": args.n,
                         "xs": xs, "hs": hs, "hp": args.hp,
                         "sweeps": args.sweeps, "burn": args.burn,
                         "seed": args.seed, "event": event,
                         "workers": workers, "out": args.out})
    payloads = [(hexagons, tau, args.n, x, h, args.hp, args.sweeps,
                 args.burn, args.seed, idx, event)
                for idx, (x, h) in enumerate(cells)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_cell, payloads))
    else:
        results = [_scan_cell(p) for p in payloads]
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n", "x", "h", "event", "mean", "stderr",
                     "n_samples", "tau_int"])
    for (x, h), est in zip(cells, results):
        writer.writerow([repr(args.n), repr(x), repr(h), _event_name(event),
                         repr(est.mean), repr(est.stderr), est.n_samples,
                         repr(est.tau_int)])
    _emit(out.getvalue(), args.out)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _spin_points(grid: dict):
    for spec in grid["spin_params"]:
        x = resolve_x(spec["x"], spec["n"])
        label = (f"n={spec['n']},x={spec['x']},h={spec['h']},"
                 f"hp={spec['hp']}")
        yield label, Params(spec["n"], x, spec["h"], spec["hp"])


def _loop_points(grid: dict):
    for spec in grid["loop_params"]:
        x = resolve_x(spec["x"], spec["n"])
        yield f"n={spec['n']},x={spec['x']}", Params(spec["n"], x)


def _suite_fkg(grid: dict) -> list:
    regions = {"wedge": WEDGE, "ball1": tuple(sorted(hexagon_ball(1)))}
    out = []
    for label, params in _spin_points(grid):
        for rname, cells in regions.items():
            out.append((f"fkg/{rname}/{label}",
                        check_fkg_lattice(cells, -1, params)))
    return out


def _suite_cbc(grid: dict) -> list:
    ball = tuple(sorted(hexagon_ball(1)))
    events = {"origin_plus": lambda s: s[(0, 0)] == 1,
              "all_plus": lambda s: all(v == 1 for v in s.values())}
    out = []
    for label, params in _spin_points(grid):
        out.append((f"cbc/ball1/{label}",
                    check_cbc(ball, -1, +1, params, events)))
        out.append((f"faces/ball1/{label}",
                    check_several_faces(ball, -1, frozenset([(0, 0)]),
                                        frozenset([(1, 0)]), params)))
    return out


def _suite_markov(grid: dict) -> list:
    ball = tuple(sorted(hexagon_ball(1)))
    out = []
    for label, params in _spin_points(grid):
        out.append((f"markov/ball1/{label}",
                    check_domain_markov_and_duality(
                        ball, [(0, 0), (1, 0)], -1, params)))
    return out


def _suite_bijection(grid: dict) -> list:
    regions = {"hex1": ((0, 0),), "wedge": WEDGE,
               "ball1": tuple(sorted(hexagon_ball(1)))}
    out = []
    for label, params in _loop_points(grid):
        for rname, cells in regions.items():
            out.append((f"bijection/{rname}/{label}",
                        check_bijection(cells, -1, params)))
    return out


def _suite_catalan(grid: dict) -> list:
    out = []
    for fixture in load_domains()[:12]:
        domain = fixture.build()
        picks = defect_sets(domain)
        for label, params in _loop_points(grid):
            for size in (0, 2, 4):
                for j, pick in enumerate(picks[size]):
                    out.append((
                        f"catalan/{fixture.name}/A{size}.{j}/{label}",
                        check_catalan_bound(domain, pick, params)))
    return out


def _suite_monotone(grid: dict) -> list:
    out = []
    for pair in load_monotone_pairs():
        inner, outer = pair.build()
        for label, params in _loop_points(grid):
            out.append((f"monotone/{pair.name}/{label}",
                        check_domain_monotonicity(inner, outer, pair.gamma,
                                                  params)))
    return out


def _suite_triangle(grid: dict) -> list:
    spec = grid["triangle"]
    return [(f"triangle/side{side}/n={n}",
             check_triangle_lower_bound(side, n))
            for side in spec["sides"] for n in spec["ns"]]


def _suite_contour(grid: dict) -> list:
    spec = grid["contour"]
    out = [(f"contour/side{side}/n={n}/x=auto",
            check_contour_identity(side, n, resolve_x("auto", n)))
           for side in spec["sides"] for n in spec["ns"]]
    for off in spec.get("off_critical", ()):
        out.append((f"contour/side{off['side']}/n={off['n']}/x={off['x']}",
                    check_contour_identity(off["side"], off["n"], off["x"])))
    return out


def _suite_symmetric(grid: dict) -> list:
    out = []
    for fixture in load_symmetric_fixtures():
        for label, params in _loop_points(grid):
            out.append((f"symmetric/{fixture.name}/{label}",
                        check_symmetric_domain(
                            fixture.region,
                            (fixture.arc_a, fixture.arc_b),
                            params.n, params.x)))
    return out


_SUITE_RUNNERS = {
    "fkg": _suite_fkg,
    "cbc": _suite_cbc,
    "markov": _suite_markov,
    "bijection": _suite_bijection,
    "catalan": _suite_catalan,
    "monotone": _suite_monotone,
    "triangle": _suite_triangle,
    "contour": _suite_contour,
    "symmetric": _suite_symmetric,
}


def _cmd_verify(args) -> int:
    grid = (load_default_grid() if args.params == "default"
            else _read_structured(args.params))
    names = list(_SUITE_RUNNERS) if args.suite == "all" else [args.suite]
    _log_config("verify", {"suite": args.suite, "params": args.params,
                           "out": args.out})
    labeled = []
    for suite in names:
        labeled.extend(_SUITE_RUNNERS[suite](grid))
    failed = [label for label, rep in labeled if rep.failed_in_region]
    body = {
        "suite": args.suite,
        "n_reports": len(labeled),
        "n_failed_in_region": len(failed),
        "failed": failed,
        "reports": [{"label": label, **rep.to_json()}
                    for label, rep in labeled],
    }
    _emit(json.dumps(body, sort_keys=True, indent=1) + "\n", args.out)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# render
# ---------------------------------------------------------------------------

def _cmd_render(args) -> int:
    data = _read_structured(args.infile)
    _log_config("render", {"in": args.infile, "mode": args.mode,
                           "top": args.top, "overlay": args.overlay,
                           "out": args.out})
    if args.mode == "loops":
        if isinstance(data, dict):
            edges = loops_from_json(data["edges"])
            hexagons = ([tuple(c) for c in data["hexagons"]]
                        if "hexagons" in data else None)
        else:
            edges = loops_from_json(data)
            hexagons = None
        svg = render_loops(edges, args.top, hexagons=hexagons)
    else:
        system, spins = spins_from_json(data)
        svg = render_spins(system, spins, overlay=args.overlay)
    _emit(svg, args.out)
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hexloop",
        description="loop model tools: exact sums, chains, checks, pictures")
    sub = parser.add_subparsers(dest="command", required=True)

    def common_params(p):
        p.add_argument("--n", type=float, required=True)
        p.add_argument("--x", default="auto",
                       help="edge weight, or 'auto' for the critical point")
        p.add_argument("--h", type=float, default=0.0)
        p.add_argument("--hp", type=float, default=0.0)

    p = sub.add_parser("enumerate", help="exact weighted configuration sum")
    p.add_argument("--domain", required=True)
    p.add_argument("--A", default="", help="JSON list of defect vertices")
    common_params(p)
    p.add_argument("--engine", choices=("auto", "sweep", "brute"),
                   default="auto")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("sample", help="run one chain, write event estimates")
    p.add_argument("--domain", required=True)
    p.add_argument("--tau", choices=("plus", "minus"), default="minus")
    common_params(p)
    p.add_argument("--sweeps", type=int, required=True)
    p.add_argument("--burn", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream", type=int, default=0)
    p.add_argument("--events", required=True,
                   help="JSON list of event specs, or a file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("verify", help="run exhaustive check suites")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--params", default="default",
                   help="grid JSON file, or 'default' for the shipped grid")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("render", help="render a configuration file to SVG")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mode", choices=("loops", "spins"), required=True)
    p.add_argument("--top", type=int, default=5)
    p.add_argument("--overlay", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("scan", help="grid of sampling jobs, CSV phase table")
    p.add_argument("--domain", required=True)
    p.add_argument("--tau", choices=("plus", "minus"), default="minus")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--xs", required=True,
                   help="comma list of edge weights; 'auto' allowed")
    p.add_argument("--hs", default="0.0", help="comma list of field values")
    p.add_argument("--hp", type=float, default=0.0)
    p.add_argument("--event", required=True, help="one event spec JSON")
    p.add_argument("--sweeps", type=int, required=True)
    p.add_argument("--burn", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (HexloopError, ValueError, KeyError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
