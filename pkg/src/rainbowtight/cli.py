"""Command-line front end.  Every command prints one JSON document on stdout.

Exit codes: 0 success, 1 a checked property fails, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from .connectivity import (PreconditionError, closed_walk_one_mod_k, find_arc, find_closed_walk_mod,
                           find_switchers, is_tightly_connected)
from .core import (InstanceError, OneKGraph, load_system, min_degree, onek_from_json, system_to_json,
                   system_to_onek)
from .framework import pipeline_vicinity_to_framework, verify_framework
from .instances import complete_system, gadget_instance, random_system, xy_obstruction
from .matching import (HypothesisError, is_robustly_matchable, lift_link_matchings, matching_density,
                       max_fractional_matching, max_integral_matching)
from .sequential import SeqWalk, is_path, shorten_walk, validate, walk_length_bound
from .solver import (AbsorbingGadget, AbsorptionQuery, SearchConfig, check_absorbing_path, find_rainbow_hamilton,
                     threshold_probe, verify_absorbing_gadget, verify_hamilton)
from .vicinity import CleanupError, _plain, build_max_vicinity, verify_vicinity

log = logging.getLogger("rainbowtight")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _system(args):
    return load_system(args.input)


def _onek(args) -> OneKGraph:
    """Instance files hold either a graph system or a (1,k)-graph."""
    data = _read_json(args.input)
    if isinstance(data, dict) and "colorCount" in data:
        return onek_from_json(data)
    return system_to_onek(load_system(args.input))


# ------------------------------------------------------------------ commands

def cmd_gen(args):
    if args.kind == "complete":
        sys_ = complete_system(args.n, args.k)
    elif args.kind == "random":
        sys_ = random_system(args.n, args.k, args.target, args.seed)
    else:
        sys_ = xy_obstruction(args.n, args.x_size)
    return system_to_json(sys_), True


def cmd_degree(args):
    sys_ = _system(args)
    colors = range(sys_.n) if args.color is None else [args.color]
    per = {}
    for c in colors:
        if not 0 <= c < sys_.n:
            raise InstanceError(f"color {c} out of range")
        per[str(c)] = min_degree(sys_[c], args.d).to_json()
    overall = min(per.values(), key=lambda r: Fraction(r["relativeDegree"])) if per else None
    return {"d": args.d, "perColor": per, "minimum": overall}, True


def cmd_walk(args):
    H = _onek(args)
    W = SeqWalk.from_json(_read_json(args.walk))
    if args.action == "validate":
        check = validate(H, W)
        return {"walk": W.to_json(), "length": len(W.points), **check.to_json(),
                "path": check.valid and is_path(W)}, check.valid
    if not validate(H, W):
        raise InstanceError("the walk does not validate against the instance")
    short = shorten_walk(H, W)
    bound = walk_length_bound(H.k, max(H.n, H.color_count))
    return {"walk": short.to_json(), "length": len(short.points), "originalLength": len(W.points),
            "bound": bound}, len(short.points) <= bound


def cmd_connect(args):
    H = _onek(args)
    c = args.color
    if not 0 <= c < H.color_count:
        raise InstanceError(f"color {c} out of range")
    G = H.color_graph(c)
    connected = bool(G.edges) and is_tightly_connected(G)
    out = {"color": c, "tightlyConnected": connected}
    if H.k >= 3:
        vic = build_max_vicinity(H, [c])[c]
        out["switchers"] = {" ".join(map(str, S)): [list(e) for e in find_switchers(vic.C(S))[:args.limit]]
                            for S in vic.domain()}
        arc = find_arc(vic)
        out["arc"] = arc.to_json() if arc else None
        try:
            walk, source = closed_walk_one_mod_k(vic), "arc"
        except PreconditionError:
            walk, source = find_closed_walk_mod(H, c, 1), "search"
    else:
        out["switchers"] = [list(e) for e in find_switchers(G)[:args.limit]] if H.k == 2 else []
        out["arc"] = None
        walk, source = find_closed_walk_mod(H, c, 1), "search"
    out["closedWalkOneModK"] = None if walk is None else {"source": source, "length": len(walk.points),
                                                          "walk": walk.to_json()}
    return out, connected and walk is not None


def cmd_match(args):
    H = _onek(args)
    if args.mode == "lift":
        cols = sorted(args.colors) if args.colors else list(range(H.n // H.k))
        per = {c: max_fractional_matching(H.color_graph(c), backend=args.backend)[1] for c in cols}
        lifted = lift_link_matchings(H, per, colors=cols)
        viol = lifted.violations(None)
        viol += [f"point {v} load {x} exceeds 1/{H.k}" for v, x in lifted.point_loads().items() if x > Fraction(1, H.k)]
        viol += [f"color {c} load {x} exceeds 1" for c, x in lifted.color_loads().items() if x > 1]
        return {"mode": "lift", "colors": cols, "size": str(lifted.size), "matching": lifted.to_json(),
                "violations": _plain(viol)}, not viol
    G = H.color_graph(args.color)
    if args.mode == "max":
        value, m = max_fractional_matching(G, backend=args.backend)
        out = {"mode": "max", "color": args.color, "value": _plain(value),
               "density": _plain(matching_density(m, G.n)), "matching": m.to_json()}
        if len(G.edges) <= args.integral_limit:
            out["integral"] = max_integral_matching(G)
        return out, True
    rep = is_robustly_matchable(G, args.gamma, args.divisor, mode=args.robust_mode, samples=args.samples,
                                seed=args.seed, backend=args.backend)
    return {"mode": "robust", "color": args.color, **rep.to_json()}, rep.robust


def cmd_vicinity(args):
    H = _onek(args)
    family = build_max_vicinity(H)
    if args.action == "build":
        return {"family": [family[c].to_json() for c in sorted(family)]}, True
    rep = verify_vicinity(H, family, args.gamma, args.delta, backend=args.backend)
    return rep.to_json(), rep.holds()


def cmd_framework(args):
    H = _onek(args)
    rep = verify_framework(H, args.alpha, args.gamma, args.delta, samples=args.samples, seed=args.seed,
                           backend=args.backend)
    return rep.to_json(witnesses=True), rep.holds()


def cmd_pipeline(args):
    H = _onek(args)
    try:
        rep = pipeline_vicinity_to_framework(H, args.alpha, args.gamma, args.delta, f3_samples=args.samples,
                                             seed=args.seed)
    except CleanupError as exc:
        return {"stage": "cleanup", "error": str(exc), "report": _plain(exc.report)}, False
    return rep.to_json(witnesses=True), rep.implications_hold


def cmd_solve(args):
    sys_ = _system(args)
    cfg = SearchConfig(time_limit=args.time_limit, node_limit=args.node_limit, seed=args.seed,
                       pruning=args.pruning, check_every=args.check_every, exact=args.exact)
    res = find_rainbow_hamilton(sys_, cfg)
    ok = res.walk is None or verify_hamilton(sys_, res.walk)
    out = res.to_json(timing=args.seed is None)
    out["verified"] = ok if res.walk is not None else None
    return out, ok


def _grid(text: str) -> list[Fraction]:
    parts = text.split(":")
    if len(parts) == 1:
        return [_fraction(parts[0])]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be start:stop:step")
    start, stop, step = (_fraction(p) for p in parts)
    if step <= 0:
        raise argparse.ArgumentTypeError("grid step must be positive")
    out, x = [], start
    while x <= stop:
        out.append(x)
        x += step
    return out


def cmd_probe(args):
    cfg = SearchConfig(time_limit=args.time_limit, node_limit=args.node_limit)
    rows = threshold_probe(args.k, args.n, args.grid, args.trials, args.seed, cfg, jobs=args.jobs)
    return {"k": args.k, "n": args.n, "seed": args.seed,
            "rows": [{**r.to_json(), "level": str(r.level)} for r in rows]}, True


def cmd_absorb(args):
    if args.action == "demo":
        G, gadget, T, O, P, _ = gadget_instance(args.k)
        rep = verify_absorbing_gadget(G, gadget, T, O)
        res = check_absorbing_path(G, AbsorptionQuery(P, T, O), SearchConfig(node_limit=args.node_limit))
        return {"gadget": rep.to_json(), "absorption": res.to_json(timing=False)}, rep.holds and res.status == "found"
    data = _read_json(args.input)
    if not isinstance(data, dict) or "graph" not in data:
        raise InstanceError("expected an object with a 'graph' key")
    G = onek_from_json(data["graph"])
    try:
        if args.action == "gadget":
            rep = verify_absorbing_gadget(G, AbsorbingGadget.from_json(data["gadget"]), data["T"], data["O"])
            return rep.to_json(), rep.holds
        q = AbsorptionQuery(SeqWalk.from_json(data["path"]), data.get("S", ()), data.get("O", ()))
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"malformed absorption input: {exc}") from None
    res = check_absorbing_path(G, q, SearchConfig(node_limit=args.node_limit, time_limit=args.time_limit))
    return res.to_json(timing=False), res.status == "found"


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rainbowtight", description=__doc__.splitlines()[0])
    p.add_argument("--output", help="also write the JSON report to this file")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_input(sp):
        sp.add_argument("--input", required=True)

    def with_backend(sp):
        sp.add_argument("--backend", choices=("auto", "exact", "float"), default="auto")

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("kind", choices=("complete", "random", "xy"))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--target", type=_fraction, default=Fraction(1))
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--x-size", type=int, default=1)
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("degree", help="minimum relative degrees")
    with_input(d)
    d.add_argument("--d", type=int, default=1)
    d.add_argument("--color", type=int)
    d.set_defaults(func=cmd_degree)

    w = sub.add_parser("walk", help="validate or shorten a sequentially walk")
    w.add_argument("action", choices=("validate", "shorten"))
    with_input(w)
    w.add_argument("--walk", required=True)
    w.set_defaults(func=cmd_walk)

    c = sub.add_parser("connect", help="tight connectivity, switchers, arc, closed walk")
    c.add_argument("action", choices=("check",))
    with_input(c)
    c.add_argument("--color", type=int, default=0)
    c.add_argument("--limit", type=int, default=5, help="switchers listed per link")
    c.set_defaults(func=cmd_connect)

    m = sub.add_parser("match", help="fractional matchings")
    with_input(m)
    m.add_argument("--mode", choices=("max", "robust", "lift"), default="max")
    m.add_argument("--color", type=int, default=0)
    m.add_argument("--colors", type=int, nargs="*")
    m.add_argument("--gamma", type=_fraction, default=Fraction(0))
    m.add_argument("--divisor", type=int)
    m.add_argument("--robust-mode", choices=("equality", "size"), default="equality")
    m.add_argument("--samples", type=int, default=32)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--integral-limit", type=int, default=40)
    with_backend(m)
    m.set_defaults(func=cmd_match)

    v = sub.add_parser("vicinity", help="maximal vicinities and V1-V6")
    v.add_argument("action", choices=("build", "verify"))
    with_input(v)
    v.add_argument("--gamma", type=_fraction, default=Fraction(1, 100))
    v.add_argument("--delta", type=_fraction, default=Fraction(5, 9))
    with_backend(v)
    v.set_defaults(func=cmd_vicinity)

    for name, func, action in (("framework", cmd_framework, "verify"), ("pipeline", cmd_pipeline, "run")):
        f = sub.add_parser(name, help="F1-F5" if name == "framework" else "vicinity to framework, staged")
        f.add_argument("action", choices=(action,))
        with_input(f)
        f.add_argument("--alpha", type=_fraction, default=Fraction(1, 20))
        f.add_argument("--gamma", type=_fraction, default=Fraction(1, 100))
        f.add_argument("--delta", type=_fraction, default=Fraction(5, 9))
        f.add_argument("--samples", type=int, default=8)
        f.add_argument("--seed", type=int, default=0)
        if name == "framework":
            with_backend(f)
        f.set_defaults(func=func)

    s = sub.add_parser("solve", help="rainbow tight Hamilton cycle search")
    with_input(s)
    s.add_argument("--exact", action="store_true", help="report 'absent' after full exhaustion")
    s.add_argument("--seed", type=int)
    s.add_argument("--time-limit", type=int)
    s.add_argument("--node-limit", type=int)
    s.add_argument("--pruning", choices=("none", "hall", "hall+degree"), default="hall")
    s.add_argument("--check-every", type=int, default=1)
    s.set_defaults(func=cmd_solve)

    pr = sub.add_parser("probe", help="empirical Hamilton-cycle frequency per degree level")
    pr.add_argument("--k", type=int, default=3)
    pr.add_argument("--n", type=int, default=7)
    pr.add_argument("--grid", type=_grid, default=[Fraction(1)])
    pr.add_argument("--trials", type=int, default=10)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--jobs", type=int, default=1)
    pr.add_argument("--time-limit", type=int)
    pr.add_argument("--node-limit", type=int)
    pr.set_defaults(func=cmd_probe)

    a = sub.add_parser("absorb", help="absorbing paths and gadgets")
    a.add_argument("action", choices=("path", "gadget", "demo"))
    a.add_argument("--input")
    a.add_argument("--k", type=int, default=3)
    a.add_argument("--node-limit", type=int)
    a.add_argument("--time-limit", type=int)
    a.set_defaults(func=cmd_absorb)
    return p


def _setup_logging() -> None:
    level = os.environ.get("RHK_LOG", "error").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.ERROR),
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "action", None) in ("path", "gadget") and not args.input:
            raise UsageError("absorb path/gadget need --input")
        log.info("running %s", args.command)
        payload, ok = args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except (InstanceError, OSError, ValueError) as exc:
        if isinstance(exc, (HypothesisError, PreconditionError)):
            payload, ok = {"holds": False, "error": str(exc)}, False
        else:
            print(f"rainbowtight: {exc}", file=sys.stderr)
            return 2
    text = json.dumps(_plain(payload), indent=2) + "\n"
    sys.stdout.write(text)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
