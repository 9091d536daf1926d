"""Command-line verification driver.

Subcommands: inspect (groups and integral forms), diagram (exactness and
commutativity at one degree), phi (the model equivalence), ring (product
axioms), pseudo (cycle surgery and bounding). Reports are deterministic:
the canonical hash covers everything except timings, and independent
checks may be evaluated by a thread pool (CHARRIG_JOBS) without changing
a byte of output.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import __version__, corpus
from .cochains import (
    RING_Q, RING_QMODZ, RING_Z, check_exactness, cohomology,
    integral_form_generators,
)
from .characters import verify_equivalence, verify_phi_good
from .diffcocycle import verify_diagram
from .geometry import (
    BoundResult, NotNullHomologous, bound_in_good_neighborhood,
    normalize_cycle, verify_normalization,
)
from .product import verify_ring_axioms
from .report import CheckResult, PASS, Report, check
from .simplicial import (
    Complex, DegreeError, DuplicateError, FaceClosureError, ParseError,
    barycentric_subdivide, closed_star_neighborhood, subcomplex_from_simplices,
)

INPUT_ERROR = 2


def _naturality_maps(cx: Complex):
    maps = [barycentric_subdivide(cx).last_vertex]
    star = closed_star_neighborhood(
        cx, subcomplex_from_simplices(cx, [cx.simplices[0][0]]))
    if not star.is_empty():
        _, incl = star.as_complex()
        maps.append(incl)
    return maps


def _run_tasks(tasks, jobs: int) -> list[CheckResult]:
    """Evaluate (name, callable) tasks, possibly concurrently; results are
    concatenated in task order so scheduling never changes the report."""
    def timed(fn):
        t0 = time.monotonic()
        out = fn()
        dt = int((time.monotonic() - t0) * 1000)
        results = out if isinstance(out, list) else [out]
        for r in results:
            r.time_ms = dt if len(results) == 1 else None
        return results

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(timed, fn) for _, fn in tasks]
            chunks = [f.result() for f in futures]
    else:
        chunks = [timed(fn) for _, fn in tasks]
    flat = []
    for chunk in chunks:
        flat.extend(chunk)
    return flat


def cmd_inspect(cx: Complex, args, jobs: int) -> Report:
    rep = Report(__version__, "inspect", cx.name,
                 list(range(cx.dim + 2)), args.seed)
    counts = ",".join(str(cx.n_simplices(d)) for d in range(cx.dim + 1))
    rep.notes.append(f"simplices per dimension: {counts}; "
                     f"euler characteristic {cx.euler_characteristic()}")
    tasks = []
    for j in range(cx.dim + 2):
        for ring in (RING_Z, RING_Q, RING_QMODZ):
            def fn(j=j, ring=ring):
                g = cohomology(cx, j, ring)
                return check(f"inspect.H{j}({ring})", True, g.describe())
            tasks.append((f"H{j}{ring}", fn))
        def forms(j=j):
            gens = integral_form_generators(cx, j)
            return check(f"inspect.integral_forms_{j}", True,
                         f"{len(gens)} generators (free classes + "
                         f"integral coboundaries)")
        tasks.append((f"L{j}", forms))
    rep.extend(_run_tasks(tasks, jobs))
    return rep


def cmd_diagram(cx: Complex, args, jobs: int) -> Report:
    k = args.degree
    rep = Report(__version__, "diagram", cx.name, [k], args.seed)
    rep.notes.append("sign convention: delta2 . i1 = -B along the drawn "
                     "diagram edge; the +B variant is isomorphic via u -> -u")
    maps = _naturality_maps(cx)
    tasks = [
        ("exactness", lambda: check_exactness(cx, k, random.Random(args.seed))),
        ("diagram", lambda: verify_diagram(cx, k, random.Random(args.seed),
                                           maps=maps)),
    ]
    rep.extend(_run_tasks(tasks, jobs))
    return rep


def cmd_phi(cx: Complex, args, jobs: int) -> Report:
    k = args.degree
    rep = Report(__version__, "phi", cx.name, [k], args.seed)
    tasks = [
        ("equivalence", lambda: verify_equivalence(
            cx, k, random.Random(args.seed), maps=_naturality_maps(cx))),
        ("good", lambda: verify_phi_good(
            cx, k, random.Random(args.seed + 1), max_subdiv=args.max_subdiv)),
    ]
    rep.extend(_run_tasks(tasks, jobs))
    return rep


def cmd_ring(cx: Complex, args, jobs: int) -> Report:
    degs = args.degrees
    rep = Report(__version__, "ring", cx.name, list(degs), args.seed)
    rep.notes.append("graded commutativity is contingent in this cochain "
                     "model: the curvature cup product does not commute; "
                     "failures carry witnesses and the defect-exactness "
                     "diagnosis (a cup-1 correction term would be needed)")
    maps = _naturality_maps(cx)
    tasks = [("ring", lambda: verify_ring_axioms(
        cx, degs, random.Random(args.seed), maps=maps))]
    rep.extend(_run_tasks(tasks, jobs))
    return rep


def cmd_pseudo(cx: Complex, args, jobs: int) -> Report:
    d, vec = corpus.load_cycle(args.cycle, cx)
    rep = Report(__version__, "pseudo", cx.name, [d], args.seed)
    if not cx.is_cycle(d, vec):
        rep.extend([check("pseudo.input_is_cycle", False, "nonzero boundary")])
        return rep

    def surgery():
        return verify_normalization(cx, d, vec, random.Random(args.seed))

    def bounding():
        sr, pm = normalize_cycle(cx, d, vec)
        out = bound_in_good_neighborhood(pm, cx, sr.tower,
                                         max_subdiv=args.max_subdiv)
        if isinstance(out, NotNullHomologous):
            return [check("pseudo.bounding", True,
                          f"not null-homologous in {out.group}",
                          {"witness_class": list(out.coords),
                           "pseudomanifold": pm.serialize()})]
        assert isinstance(out, BoundResult)
        nb = out.neighborhood
        return [check("pseudo.bounding", True,
                      f"bounds inside a {nb.k}-good neighborhood at "
                      f"subdivision level {nb.level}; collapse certificate "
                      f"removed {out.collapse_pairs} pairs down to dimension "
                      f"{out.collapsed_dim}",
                      {"chain_cells": sum(1 for c in out.chain if c),
                       "neighborhood_counts":
                           [nb.complex.n_simplices(j)
                            for j in range(nb.complex.dim + 1)]})]

    rep.extend(_run_tasks([("surgery", surgery), ("bounding", bounding)], jobs))
    rep.notes.append("the emitted neighborhood is of the bounding chain's "
                     "support, which contains the cycle's support")
    return rep


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="charrig",
        description="exact verification of differential character structure "
                    "on finite simplicial complexes")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("complex", help="corpus name or path to a complex file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("canonical", "pretty"),
                        default="canonical")
        sp.add_argument("--max-subdiv", type=int, choices=(0, 1, 2), default=2)

    sp = sub.add_parser("inspect", help="cohomology groups in all three rings")
    common(sp)
    sp = sub.add_parser("diagram", help="character diagram checks at one degree")
    common(sp)
    sp.add_argument("--degree", type=int, required=True)
    sp = sub.add_parser("phi", help="equivalence of the two character models")
    common(sp)
    sp.add_argument("--degree", type=int, required=True)
    sp = sub.add_parser("ring", help="product axiom suite")
    common(sp)
    sp.add_argument("--degrees", type=_degree_pair, required=True,
                    metavar="K,L")
    sp = sub.add_parser("pseudo", help="cycle surgery and bounding")
    common(sp)
    sp.add_argument("--cycle", required=True,
                    help="corpus cycle name or path to a cycle file")
    return p


def _degree_pair(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two degrees like 1,1")
    return (int(parts[0]), int(parts[1]))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    jobs = max(1, int(os.environ.get("CHARRIG_JOBS", "1")))
    try:
        cx = corpus.load(args.complex)
    except (FileNotFoundError, ParseError, FaceClosureError, DuplicateError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return INPUT_ERROR
    handler = {"inspect": cmd_inspect, "diagram": cmd_diagram,
               "phi": cmd_phi, "ring": cmd_ring, "pseudo": cmd_pseudo}
    try:
        rep = handler[args.command](cx, args, jobs)
    except (FileNotFoundError, ParseError, DegreeError, ValueError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return INPUT_ERROR
    print(rep.render(args.format))
    return 0 if rep.all_passed() else 1


if __name__ == "__main__":
    sys.exit(main())
