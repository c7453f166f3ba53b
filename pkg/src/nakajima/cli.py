"""Command-line interface.

    nakajima build   --quiver A2 --auto tau --config all --out DIR
    nakajima present --quiver A2 --auto cluster [--category S]
    nakajima kan     --quiver A2 (--module m.json | --simple i | --random)
    nakajima strata  --quiver A2 --module m.json
    nakajima grass count --ambient m.json --dim d.json --field F2
    nakajima grass fiber --module m.json --v v.json --field F2
    nakajima fiber   --module m.json --v v.json --field F2
    nakajima desing  --algebra s.json --module m.json --e e.json --field F2
    nakajima check   [suite]
    nakajima dot     --quiver A2 --config all [--width 8]

``--quiver``, ``--auto`` and ``--config`` take a JSON file, inline JSON, or
a short form (``A3``, ``tau``/``cluster``, ``all``).  ``--algebra`` is a
JSON object ``{"quiver": ..., "auto": ..., "config": ...}``.  Modules are
over S unless ``--category`` says otherwise.  Dimension vectors are JSON
lists indexed by object.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 size guard hit.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import __version__
from . import io
from .grassmann import SizeGuardError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


# --------------------------------------------------------------------------
# shared input handling
# --------------------------------------------------------------------------

def _instance(args):
    if getattr(args, "algebra", None):
        d = io.load(args.algebra)
        if not isinstance(d, dict):
            raise io.InputError("--algebra must be a JSON object")
        return (io.read_quiver(d.get("quiver", "A2")), io.read_auto(d.get("auto", "tau")),
                io.read_config(d.get("config", "all")))
    return io.read_quiver(args.quiver), io.read_auto(args.auto), io.read_config(args.config)


def _field(args):
    from .linalg import Field

    try:
        return Field.parse(args.field)
    except ValueError as e:
        raise io.InputError(str(e)) from None


def _admissible(q, auto, config):
    from .quiver import Window, check_admissible, height_shift

    if height_shift(q, auto) == 0:
        raise io.InputError(f"F = {auto.label()} has finite order on ZQ; it must act freely")
    rep = check_admissible(config, auto, Window.around(q, config, auto))
    if not rep.ok:
        raise io.InputError(f"configuration not admissible: {rep.reason} at {rep.counterexample}")
    return rep


def _context(args, check_admissible=True):
    from .kan import KanContext

    q, auto, config = _instance(args)
    if check_admissible:
        _admissible(q, auto, config)
    return KanContext.build(q, config=config, auto=auto, field=_field(args),
                            max_degree=args.max_degree, check=False)


def _category(ctx, name):
    return {"R": ctx.r, "S": ctx.s, "P": ctx.p}[name]


def _module(args, ctx, cat_name="S", opt="module"):
    from .reps import random_module, simple

    cat = _category(ctx, cat_name)
    src = getattr(args, opt, None)
    if src:
        return io.read_module(cat, src)
    if getattr(args, "simple", None) is not None:
        if not 0 <= args.simple < cat.n:
            raise io.InputError(f"no object {args.simple} in {cat.name}")
        return simple(cat, args.simple)
    if getattr(args, "random", False):
        return random_module(cat, random.Random(args.seed), args.max_dim)
    raise io.InputError(f"--{opt} is required")


def _vector(src, n, what):
    d = io.load(src)
    if isinstance(d, dict):
        d = [d.get(str(i), 0) for i in range(n)]
    if not isinstance(d, list) or len(d) != n or not all(isinstance(a, int) and a >= 0 for a in d):
        raise io.InputError(f"{what} must be a list of {n} nonnegative integers")
    return d


def _emit(args, command, body):
    io.write(getattr(args, "out", None), io.report(command, args.seed, body))


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_build(args):
    from .orbitcat import BuildConfig, build_all, present
    from .quiver import Window

    q, auto, config = _instance(args)
    adm = _admissible(q, auto, config)
    r, s, p = build_all(BuildConfig(q, config, auto, _field(args), args.max_degree, check=False))
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    for c in (r, s, p):
        files[c.name] = str(out / f"{c.name}.json")
        io.write(files[c.name], c.to_json())
    pres = present(s, with_words=False)
    (out / "S.dot").write_text(presentation_dot(pres) + "\n")
    (out / "window.dot").write_text(Window.around(q, config, auto).to_dot() + "\n")
    body = {"objects": {c.name: c.n for c in (r, s, p)}, "files": files,
            "dot": [str(out / "S.dot"), str(out / "window.dot")],
            "admissibility": adm.to_json(), "exact_S": s.max_degree is None}
    io.write(None, io.report("build", args.seed, body))
    return EXIT_OK


def presentation_dot(pres) -> str:
    lines = ["digraph QS {"]
    for i, o in enumerate(pres.objects):
        lines.append(f'  {i} [label="{o!r}", shape=box];')
    for a in pres.arrows:
        lines.append(f'  {a[1]} -> {a[2]} [label="{a[0]}"];')
    lines.append("}")
    return "\n".join(lines)


def cmd_present(args):
    from .orbitcat import present

    ctx = _context(args)
    c = _category(ctx, args.category)
    pres = present(c)
    _emit(args, "present", {"category": c.name, "presentation": pres.to_json(c.field)})
    return EXIT_OK


def cmd_kan(args):
    from .kan import (ck, cq_rank, injective_decomposition, kan, kk, multiplicity_prediction,
                      projective_decomposition, stratum_of)

    ctx = _context(args)
    M = _module(args, ctx)
    ctx.check_headroom(M, "right")
    ctx.check_headroom(M, "left")
    res = kan(ctx, M)
    body = {"module": io.module_json(M), "dims": res.dims_json(),
            "KK": {str(k): v for k, v in sorted(projective_decomposition(kk(ctx, M, res)).items())},
            "CK": {str(k): v for k, v in sorted(injective_decomposition(ck(ctx, M, res)).items())},
            "KK_predicted": {str(k): v for k, v in sorted(multiplicity_prediction(ctx, M, res).items())},
            "stratum_v": list(stratum_of(ctx, M, res)), "C_q_rank": cq_rank(ctx),
            "P_objects": [repr(x) for x in ctx.p.labels]}
    _emit(args, "kan", body)
    return EXIT_OK


def cmd_strata(args):
    from .grassmann import feasible_strata
    from .kan import cq_rank, kan

    ctx = _context(args)
    M = _module(args, ctx)
    res = kan(ctx, M)
    rank = cq_rank(ctx)
    body = {"v0": list(res.KLR.v()), "w": list(M.dims),
            "feasible": [list(v) for v in feasible_strata(ctx, M, res)],
            "C_q_rank": rank, "C_q_injective": rank == ctx.p.n}
    if rank < ctx.p.n:
        body["note"] = "C_q is not injective here; strata are not claimed to be separated by v"
    _emit(args, "strata", body)
    return EXIT_OK


def cmd_grass(args):
    if args.mode == "fiber":
        return cmd_fiber(args)
    from .grassmann import enumerate_subreps, gr_nil_count

    ctx = _context(args)
    M = _module(args, ctx, args.category, "ambient")
    d = _vector(args.dim, M.cat.n, "--dim")
    subs = enumerate_subreps(M, d, args.guard)
    _emit(args, "grass count", {"dims": list(M.dims), "d": d, "field": M.field.name,
                                "count": subs.count, "nil_count": gr_nil_count(M, d, args.guard)})
    return EXIT_OK


def cmd_fiber(args):
    from .grassmann import direct_fiber_count, feasible_strata, fiber_points
    from .kan import kan

    ctx = _context(args)
    M = _module(args, ctx)
    res = kan(ctx, M)
    vs = [tuple(_vector(args.v, ctx.p.n, "--v"))] if args.v else feasible_strata(ctx, M, res)
    rows = []
    ok = True
    for v in vs:
        pts = fiber_points(ctx, M, v, res, args.guard)
        direct = direct_fiber_count(ctx, M, v, res, args.guard)
        ok &= direct == len(pts)
        rows.append({"v": list(v), "count": len(pts), "direct": direct,
                     "dims": sorted({tuple(N.dims) for N in pts})})
    _emit(args, "fiber", {"v0": list(res.KLR.v()), "fibers": rows, "agree": ok})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_desing(args):
    from .desing import check_desing_surjective

    ctx = _context(args)
    M = _module(args, ctx)
    e = _vector(args.e, M.cat.n, "--e")
    rep = check_desing_surjective(ctx, M, e, args.guard, allow_infinite=args.allow_infinite)
    _emit(args, "desing", rep.to_json())
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_check(args):
    from .suites import CRITERIA, SUITES, run

    if not args.suite:
        for name, ids in SUITES.items():
            print(f"{name}: " + ", ".join(f"{i} {CRITERIA[i].title}" for i in ids))
        return EXIT_OK
    if args.suite == "all":
        ids = [i for s in SUITES.values() for i in s]
    elif args.suite in SUITES:
        ids = SUITES[args.suite]
    else:
        raise io.InputError(f"unknown suite {args.suite!r}; known: {', '.join(SUITES)}, all")
    outcomes = run(ids, args.seed, args.jobs)
    for o in outcomes:
        print(o.line())
    if args.out:
        io.write(args.out, io.report(f"check {args.suite}", args.seed,
                                     {"outcomes": [o.to_json() for o in outcomes]}))
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_FAIL


def cmd_dot(args):
    from .quiver import Window

    q, auto, config = _instance(args)
    w = Window.around(q, config, auto, width=args.width)
    text = w.to_dot()
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nakajima", description="Generalized Nakajima categories")
    ap.add_argument("--version", action="version", version=f"nakajima {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", default=None)
    inst = argparse.ArgumentParser(add_help=False)
    inst.add_argument("--quiver", default="A2")
    inst.add_argument("--auto", default="tau")
    inst.add_argument("--config", default="all")
    inst.add_argument("--algebra", default=None)
    inst.add_argument("--field", default="Q")
    inst.add_argument("--max-degree", type=int, default=10)
    mod = argparse.ArgumentParser(add_help=False)
    mod.add_argument("--module", default=None)
    mod.add_argument("--simple", type=int, default=None)
    mod.add_argument("--random", action="store_true")
    mod.add_argument("--max-dim", type=int, default=4)
    mod.add_argument("--guard", type=int, default=10 ** 7)

    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("build", parents=[common, inst])
    p.set_defaults(fn=cmd_build)
    p = sub.add_parser("present", parents=[common, inst])
    p.add_argument("--category", choices=["R", "S", "P"], default="S")
    p.set_defaults(fn=cmd_present)
    p = sub.add_parser("kan", parents=[common, inst, mod])
    p.set_defaults(fn=cmd_kan)
    p = sub.add_parser("strata", parents=[common, inst, mod])
    p.set_defaults(fn=cmd_strata)
    p = sub.add_parser("grass", parents=[common, inst, mod])
    p.add_argument("mode", choices=["count", "fiber"])
    p.add_argument("--ambient", default=None)
    p.add_argument("--category", choices=["R", "S", "P"], default="S")
    p.add_argument("--dim", default=None)
    p.add_argument("--v", default=None)
    p.set_defaults(fn=cmd_grass)
    p = sub.add_parser("fiber", parents=[common, inst, mod])
    p.add_argument("--v", default=None)
    p.set_defaults(fn=cmd_fiber)
    p = sub.add_parser("desing", parents=[common, inst, mod])
    p.add_argument("--e", required=True)
    p.add_argument("--allow-infinite", action="store_true",
                   help="run on a truncated S (nilpotent modules only)")
    p.set_defaults(fn=cmd_desing)
    p = sub.add_parser("check", parents=[common])
    p.add_argument("suite", nargs="?", default="")
    p.set_defaults(fn=cmd_check)
    p = sub.add_parser("dot", parents=[common, inst])
    p.add_argument("--width", type=int, default=None)
    p.set_defaults(fn=cmd_dot)
    return ap


def main(argv=None) -> int:
    from .kan import TruncationError
    from .quiver import QuiverError

    args = parser().parse_args(argv)
    if getattr(args, "command", None) == "grass" and args.mode == "count" and not args.dim:
        print("error: grass count needs --dim", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.fn(args)
    except SizeGuardError as e:
        print(f"size guard: {e}", file=sys.stderr)
        return EXIT_GUARD
    except TruncationError as e:
        print(f"truncation: {e}", file=sys.stderr)
        return EXIT_GUARD
    except (QuiverError, ValueError, KeyError, FileNotFoundError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
