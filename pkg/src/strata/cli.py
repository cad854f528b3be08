"""Command line interface for the strata toolkit.

Subcommands:

* ``make``: build a space from a recipe string and emit its JSON form.
* ``homology``: intersection homology (classical or tame) per degree.
* ``blowup``: blown-up cohomology per degree.
* ``duality``: the cap with the fundamental class, degree by degree.
* ``pairing``: the cup pairing against the complementary perversity.
* ``pair``: the cup pairing for an explicitly chosen second perversity.
* ``check-products``: randomized verification of the product identities.
* ``sweep``: duality across a grid of per-stratum perversities and rings.

Every report is a JSON document carrying ``"schema": "strata/1"`` and is
byte-identical across runs for identical inputs and ``--seed``. Exit codes:
0 on success, 1 on validation errors (unreadable input, malformed
perversities, spaces outside the scope of a theorem), 2 when a mathematical
check fails (a duality matrix that is not invertible, a degenerate pairing,
a product identity violated), which indicates a bug rather than bad input.

``--space`` accepts either a path to a JSON complex or a recipe string such
as ``sigma_rp3`` or ``suspension(rp2)``.

Group strings in reports write one free summand of the coefficient ring as
"Z" whatever the ring is; the ``free_rank`` and ``torsion`` fields carry the
same data numerically.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import itertools
import json
import os
import sys
from fractions import Fraction

from .blowup import blowup_complex
from .chain_algebra import Ring, Z, parse_ring
from .constructions import LIBRARY_NAMES, build_recipe
from .duality import (
    GroupPresentation,
    MissingLink,
    NonOrientable,
    duality,
    is_witt,
    pairing,
)
from .filtered_complex import FilteredComplex
from .intersection_chains import intersection_complex, tame_complex
from .perversity import StratumPerversity, parse_perversity
from .products import verify_product_identities

SCHEMA = "strata/1"


class CliError(Exception):
    """Validation failure that should exit with status 1."""


# ---------------------------------------------------------------------------
# input parsing


def load_space(text: str) -> FilteredComplex:
    """A path to a JSON complex, or a recipe/library name."""
    if os.path.isfile(text):
        with open(text, encoding="utf-8") as handle:
            try:
                data = json.load(handle)
            except json.JSONDecodeError as exc:
                raise CliError(f"{text}: not valid JSON ({exc})") from exc
        return FilteredComplex.from_json(data)
    try:
        return build_recipe(text)
    except ValueError as exc:
        raise CliError(
            f"--space {text!r} is neither a readable file nor a recipe "
            f"(library names: {', '.join(LIBRARY_NAMES)})") from exc


def _perversity(text: str):
    try:
        return parse_perversity(text)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _ring(text: str) -> Ring:
    try:
        return parse_ring(text)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


# ---------------------------------------------------------------------------
# report plumbing


def _plain(value):
    """Recursively convert report values into JSON-encodable ones."""
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else str(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _dense(matrix) -> list[list]:
    return _plain(matrix.to_dense())


def _triplets(matrix) -> list[list]:
    """Sparse triplet form [row, column, value], canonically ordered."""
    return [[i, j, _plain(v)]
            for j, col in enumerate(matrix.cols)
            for i, v in sorted(col.items())]


def emit(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _group_entries(complex, degrees) -> list[dict]:
    summaries = {h.degree: h for h in complex.homology()}
    out = []
    for k in degrees:
        h = summaries.get(k)
        out.append({
            "degree": k,
            "group": h.group() if h else "0",
            "free_rank": h.free_rank if h else 0,
            "torsion": list(h.torsion) if h else [],
        })
    return out


def _basis_dump(complex, degrees) -> dict:
    return {str(k): _triplets(GroupPresentation(complex, k).gens)
            for k in degrees}


# ---------------------------------------------------------------------------
# subcommands


def _cmd_make(args) -> tuple[dict, int]:
    X = build_recipe(args.recipe)
    report = {"schema": SCHEMA, "command": "make", "recipe": args.recipe}
    report.update(X.to_json())
    report["summary"] = {
        "dim": X.dim,
        "formal_dim": X.formal_dim,
        "simplices_by_degree": [len(X.simplices(k))
                                for k in range(X.dim + 1)],
        "strata": [{"level": st.level, "index": st.index,
                    "codim": st.codim, "regular": st.is_regular,
                    "simplices": len(st.simplices)}
                   for st in X.strata],
    }
    return report, 0


def _cmd_homology(args) -> tuple[dict, int]:
    X = load_space(args.space)
    p = _perversity(args.perversity)
    ring = _ring(args.ring)
    variant = "tame" if args.tame else "classical"
    builder = tame_complex if args.tame else intersection_complex
    complex = builder(X, p, ring)
    degrees = list(range(X.formal_dim + 1))
    report = {
        "schema": SCHEMA,
        "command": "homology",
        "space": args.space,
        "perversity": args.perversity,
        "ring": str(ring),
        "variant": variant,
        "groups": _group_entries(complex, degrees),
    }
    if args.dump_basis:
        report["basis"] = _basis_dump(complex, degrees)
    return report, 0


def _cmd_blowup(args) -> tuple[dict, int]:
    X = load_space(args.space)
    p = _perversity(args.perversity)
    ring = _ring(args.ring)
    complex = blowup_complex(X).subcomplex(p, ring)
    degrees = list(range(X.formal_dim + 1))
    report = {
        "schema": SCHEMA,
        "command": "blowup",
        "space": args.space,
        "perversity": args.perversity,
        "ring": str(ring),
        "groups": _group_entries(complex, degrees),
    }
    if args.dump_basis:
        report["basis"] = _basis_dump(complex, degrees)
    return report, 0


def _cmd_duality(args) -> tuple[dict, int]:
    X = load_space(args.space)
    p = _perversity(args.perversity)
    ring = _ring(args.ring)
    result = duality(X, p, ring=ring, seed=args.seed,
                     check_representatives=args.check_representatives)
    report = {
        "schema": SCHEMA,
        "command": "duality",
        "space": args.space,
        "perversity": args.perversity,
        "ring": str(ring),
        "seed": args.seed,
        "iso": result.iso,
        "degrees": [{
            "degree": d.degree,
            "source": d.source.group(),
            "target": d.target.group(),
            "iso": d.iso,
            "matrix": _dense(d.matrix),
        } for d in result.degrees],
    }
    return report, 0 if result.iso else 2


def _pairing_report(args, q_text: str | None) -> tuple[dict, int]:
    X = load_space(args.space)
    p = _perversity(args.p)
    ring = _ring(args.ring)
    q = _perversity(q_text) if q_text is not None else None
    result = pairing(X, p, args.k, ring=ring, q=q)
    report = {
        "schema": SCHEMA,
        "command": "pair" if q_text is not None else "pairing",
        "space": args.space,
        "p": args.p,
        "ring": str(ring),
        "degree": result.degree,
        "codegree": result.codegree,
        "row_group": result.row_group,
        "col_group": result.col_group,
        "matrix": _plain(result.entries),
        "square": result.square,
        "det": _plain(result.det),
        "nondegenerate": result.nondegenerate,
        "unimodular": result.unimodular,
    }
    if q_text is not None:
        report["q"] = q_text
        return report, 0
    return report, 0 if result.nondegenerate else 2


def _cmd_pairing(args) -> tuple[dict, int]:
    return _pairing_report(args, None)


def _cmd_pair(args) -> tuple[dict, int]:
    return _pairing_report(args, args.q)


def _cmd_check_products(args) -> tuple[dict, int]:
    X = load_space(args.space)
    result = verify_product_identities(X, trials=args.trials, seed=args.seed)
    report = {
        "schema": SCHEMA,
        "command": "check-products",
        "space": args.space,
        "seed": args.seed,
        **result,
    }
    return report, 0 if result["failures"] == 0 else 2


# -- sweep ------------------------------------------------------------------

_WORKER_SPACES: dict[str, FilteredComplex] = {}


def _sweep_case(space_text: str, values: tuple, ring_text: str) -> str:
    X = _WORKER_SPACES.get(space_text)
    if X is None:
        X = load_space(space_text)
        _WORKER_SPACES[space_text] = X
    p = StratumPerversity(dict(values))
    try:
        result = duality(X, p, ring=parse_ring(ring_text))
    except NonOrientable:
        return "non_orientable"
    return "iso" if result.iso else "failed"


def _cmd_sweep(args) -> tuple[dict, int]:
    X = load_space(args.space)
    rings = [r.strip() for r in args.rings.split(",") if r.strip()]
    for r in rings:
        _ring(r)
    strata = X.singular_strata()
    ranges = [range(args.low, st.codim - 2 + args.high + 1) for st in strata]
    keys = [(st.level, st.index) for st in strata]
    cases = [(tuple(zip(keys, values)), ring_text)
             for values in itertools.product(*ranges)
             for ring_text in rings]
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(args.jobs) as pool:
            statuses = list(pool.map(
                _sweep_case,
                itertools.repeat(args.space),
                (values for values, _ in cases),
                (ring_text for _, ring_text in cases),
            ))
    else:
        statuses = [_sweep_case(args.space, values, ring_text)
                    for values, ring_text in cases]
    rows = [{
        "perversity": {f"{level},{index}": value
                       for (level, index), value in values},
        "ring": ring_text,
        "status": status,
    } for (values, ring_text), status in zip(cases, statuses)]
    counts = {name: sum(1 for row in rows if row["status"] == name)
              for name in ("iso", "failed", "non_orientable")}
    report = {
        "schema": SCHEMA,
        "command": "sweep",
        "space": args.space,
        "rings": rings,
        "strata": [f"{level},{index}" for level, index in keys],
        "cases": rows,
        "counts": counts,
        "ok": counts["failed"] == 0,
    }
    return report, 0 if counts["failed"] == 0 else 2


# ---------------------------------------------------------------------------
# argument wiring


class _Parser(argparse.ArgumentParser):
    """Usage problems are validation errors: exit 1, not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(sub, *, space=True, perversity=False, ring=True, out=True):
    if space:
        sub.add_argument("--space", required=True,
                         help="JSON complex file or recipe string")
    if perversity:
        sub.add_argument("--perversity", required=True,
                         help="preset name, integer, or inline JSON")
    if ring:
        sub.add_argument("--ring", default="Z",
                         help="Z, Q, or Fp (default Z)")
    if out:
        sub.add_argument("-o", "--output", metavar="FILE",
                         help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="strata",
                     description="Intersection homology of filtered "
                                 "simplicial complexes.")
    subs = parser.add_subparsers(dest="command", required=True,
                                 metavar="COMMAND")

    make = subs.add_parser("make", help="build a space from a recipe")
    make.add_argument("--recipe", required=True,
                      help='e.g. "suspension(rp2)" or "sphere(3)"')
    _add_common(make, space=False, ring=False)
    make.set_defaults(handler=_cmd_make)

    hom = subs.add_parser("homology",
                          help="intersection homology per degree")
    _add_common(hom, perversity=True)
    variant = hom.add_mutually_exclusive_group()
    variant.add_argument("--tame", action="store_true",
                         help="tame chains (regular supports)")
    variant.add_argument("--classical", dest="tame", action="store_false",
                         help="classical allowable chains (default)")
    hom.add_argument("--dump-basis", action="store_true",
                     help="include cycle bases as sparse triplets")
    hom.set_defaults(handler=_cmd_homology, tame=False)

    blow = subs.add_parser("blowup", help="blown-up cohomology per degree")
    _add_common(blow, perversity=True)
    blow.add_argument("--dump-basis", action="store_true",
                      help="include cocycle bases as sparse triplets")
    blow.set_defaults(handler=_cmd_blowup)

    dual = subs.add_parser("duality",
                           help="cap with the fundamental class")
    _add_common(dual, perversity=True)
    dual.add_argument("--seed", type=int, default=0,
                      help="seed for the representative perturbations")
    dual.add_argument("--check-representatives", action="store_true",
                      help="also verify independence of chosen cocycles")
    dual.set_defaults(handler=_cmd_duality)

    pairc = subs.add_parser("pairing",
                            help="cup pairing against the complement")
    _add_common(pairc)
    pairc.add_argument("--p", required=True, help="row perversity")
    pairc.add_argument("--k", required=True, type=int,
                       help="cohomological degree of the rows")
    pairc.set_defaults(handler=_cmd_pairing)

    pair2 = subs.add_parser("pair",
                            help="cup pairing for an explicit perversity "
                                 "pair")
    _add_common(pair2)
    pair2.add_argument("--p", required=True, help="row perversity")
    pair2.add_argument("--q", required=True, help="column perversity")
    pair2.add_argument("--k", required=True, type=int,
                       help="cohomological degree of the rows")
    pair2.set_defaults(handler=_cmd_pair)

    check = subs.add_parser("check-products",
                            help="randomized product identity checks")
    _add_common(check, ring=False)
    check.add_argument("--trials", type=int, default=200)
    check.add_argument("--seed", type=int, default=0)
    check.set_defaults(handler=_cmd_check_products)

    sweep = subs.add_parser("sweep",
                            help="duality across perversity and ring grids")
    _add_common(sweep, ring=False)
    sweep.add_argument("--rings", default="Z,Q,F2",
                       help="comma-separated ring list (default Z,Q,F2)")
    sweep.add_argument("--low", type=int, default=-2,
                       help="smallest per-stratum value (default -2)")
    sweep.add_argument("--high", type=int, default=2,
                       help="offset above the top perversity (default 2)")
    sweep.add_argument("--jobs", type=int, default=1,
                       help="parallel worker processes")
    sweep.set_defaults(handler=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code or 0
    try:
        report, code = args.handler(args)
    except (CliError, NonOrientable, MissingLink, ValueError, OSError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"strata: error: {message}", file=sys.stderr)
        return 1
    emit(report, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
