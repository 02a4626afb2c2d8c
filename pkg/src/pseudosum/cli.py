"""Command-line interface.

One binary, subcommand style.  All documents are JSON; numeric output is
serialized with 12 significant digits and carries a top-level schema
version.  Exit codes: 0 success, 1 invalid input, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .errors import ValidityError
from .lut import (
    LutTable,
    check_associative,
    check_commutative,
    find_idempotents,
    find_identity,
)
from .dist import CONVERGED, CYCLE, Distribution, convolve, limit, power, tv_distance
from .cyclic import (
    Permutation,
    StableLaw,
    decompose_id,
    doa_attractor,
    enumerate_stable,
    in_doa,
    is_infinitely_divisible,
    make_cyclic_lut,
    make_mod_lut,
    spectrum,
)
from .extremal import make_max_lut, max_convolve, max_doa, max_nth_root
from .montecarlo import SimConfig, empirical_fold

SCHEMA_VERSION = 1


def _sig12(x: float) -> float:
    return float(f"{float(x):.12g}")


def _fmt(value):
    """Round all floats in a JSON-ready structure to 12 significant digits."""
    if isinstance(value, float):
        return _sig12(value)
    if isinstance(value, list):
        return [_fmt(v) for v in value]
    if isinstance(value, dict):
        return {k: _fmt(v) for k, v in value.items()}
    return value


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidityError(f"{path}: not valid JSON: {exc}") from exc


def _load_dist(path: str) -> Distribution:
    return Distribution.from_json(_read_json(path))


def _load_perm(path: str | None, n: int) -> Permutation | None:
    if path is None:
        return None
    perm = Permutation.from_json(_read_json(path))
    if perm.n != n:
        raise ValidityError(f"permutation size {perm.n} does not match n={n}")
    return perm


_GEN_RE = re.compile(r"^(mod|max)(\d+)$")


def _load_lut(args) -> LutTable:
    if getattr(args, "lut", None):
        return LutTable.from_json(_read_json(args.lut))
    gen = getattr(args, "gen", None)
    if gen:
        m = _GEN_RE.match(gen)
        if m:
            n = int(m.group(2))
            return make_mod_lut(n) if m.group(1) == "mod" else make_max_lut(n)
        if gen.startswith("perm:"):
            return make_cyclic_lut_from_file(gen[len("perm:") :])
        raise ValidityError(
            f"unknown generator {gen!r}; expected modN, maxN, or perm:FILE"
        )
    raise ValidityError("no table given; use --lut FILE or --gen SPEC")


def make_cyclic_lut_from_file(path: str) -> LutTable:
    perm = Permutation.from_json(_read_json(path))
    return make_cyclic_lut(perm.n, perm)


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(_fmt(doc), indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _dist_doc(p: Distribution) -> dict:
    return {"version": SCHEMA_VERSION, "n": p.n, "p": p.p.tolist()}


def _add_table_args(sub) -> None:
    sub.add_argument("--lut", help="lookup table JSON file")
    sub.add_argument("--gen", help="built-in table: modN, maxN, or perm:FILE")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pseudosum",
        description="Pseudo-summation on finite alphabets: tables, exact "
        "distribution arithmetic, stable laws, and simulation.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("check", help="algebraic properties of a table")
    _add_table_args(sub)
    sub.add_argument("--out")

    sub = subs.add_parser("convolve", help="law of X (+) Y from two distribution files")
    _add_table_args(sub)
    sub.add_argument("dists", nargs=2, metavar="DIST")
    sub.add_argument("--out")

    sub = subs.add_parser("power", help="law of the m-fold pseudo-sum")
    _add_table_args(sub)
    sub.add_argument("dist", metavar="DIST")
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--out")

    sub = subs.add_parser("limit", help="limit of fold powers by doubling")
    _add_table_args(sub)
    sub.add_argument("--dist", required=True)
    sub.add_argument("--tol", type=float, default=1e-12)
    sub.add_argument("--max-doublings", type=int, default=64)
    sub.add_argument("--out")

    sub = subs.add_parser("stable", help="enumerate stable laws of the cyclic table")
    sub.add_argument("--enumerate", type=int, required=True, metavar="N")
    sub.add_argument("--perm", help="permutation JSON file")
    sub.add_argument("--out")

    sub = subs.add_parser("doa", help="domain-of-attraction test (cyclic table)")
    sub.add_argument("--dist", required=True)
    sub.add_argument("--target", type=int, help="divisor M of the target stable law")
    sub.add_argument("--perm")
    sub.add_argument("--out")

    sub = subs.add_parser("id", help="infinite divisibility (cyclic table)")
    sub.add_argument("--dist", required=True)
    mode = sub.add_mutually_exclusive_group()
    mode.add_argument("--decompose", action="store_true")
    mode.add_argument("--check", action="store_true")
    sub.add_argument("--perm")
    sub.add_argument("--tol", type=float, default=1e-9)
    sub.add_argument("--out")

    sub = subs.add_parser("spectrum", help="characteristic values of a law")
    sub.add_argument("--dist", required=True)
    sub.add_argument("--perm")
    sub.add_argument("--out")

    sub = subs.add_parser("max", help="max-table operations")
    mode = sub.add_mutually_exclusive_group(required=True)
    mode.add_argument("--convolve", nargs=2, metavar=("P", "Q"))
    mode.add_argument("--root", nargs=2, metavar=("N", "DIST"))
    mode.add_argument("--doa", nargs=2, metavar=("X", "DIST"))
    sub.add_argument("--out")

    sub = subs.add_parser("simulate", help="seeded Monte Carlo of the m-fold sum")
    _add_table_args(sub)
    sub.add_argument("--dist", required=True)
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--trials", type=int, required=True)
    sub.add_argument("--seed", type=int, required=True)
    sub.add_argument("--workers", type=int, default=1)
    sub.add_argument("--compare-exact", action="store_true")
    sub.add_argument("--out")

    return parser


def _cmd_check(args) -> dict:
    lut = _load_lut(args)
    assoc = check_associative(lut)
    comm = check_commutative(lut)
    doc: dict = {"version": SCHEMA_VERSION, "n": lut.n, "associative": assoc is None}
    if assoc is not None:
        doc["counterexample"] = list(assoc)
    doc["commutative"] = comm is None
    if comm is not None:
        doc["commutative_counterexample"] = list(comm)
    doc["identity"] = find_identity(lut)
    doc["idempotents"] = find_idempotents(lut)
    return doc


def _cmd_convolve(args) -> dict:
    lut = _load_lut(args)
    p, q = (_load_dist(path) for path in args.dists)
    return _dist_doc(convolve(lut, p, q))


def _cmd_power(args) -> dict:
    lut = _load_lut(args)
    return _dist_doc(power(lut, _load_dist(args.dist), args.m))


def _cmd_limit(args) -> dict:
    lut = _load_lut(args)
    res = limit(lut, _load_dist(args.dist), tol=args.tol, max_doublings=args.max_doublings)
    doc = {"version": SCHEMA_VERSION, "status": res.status, "doublings": res.doublings}
    if res.status == CONVERGED:
        doc["limit"] = res.dist.p.tolist()
    if res.status == CYCLE:
        doc["period"] = res.period
    return doc


def _cmd_stable(args) -> dict:
    n = args.enumerate
    perm = _load_perm(args.perm, n)
    laws = [
        {"m": law.m, "r": law.r, "p": dist.p.tolist()}
        for law, dist in enumerate_stable(n, perm)
    ]
    return {"version": SCHEMA_VERSION, "n": n, "laws": laws}


def _cmd_doa(args) -> dict:
    p = _load_dist(args.dist)
    perm = _load_perm(args.perm, p.n)
    if args.target is not None:
        if args.target < 1 or p.n % args.target != 0:
            raise ValidityError(f"target {args.target} must be a divisor of n={p.n}")
        law = StableLaw(args.target, p.n // args.target)
        return {
            "version": SCHEMA_VERSION,
            "target": {"m": law.m, "r": law.r},
            "in_doa": in_doa(p, law, perm),
        }
    law = doa_attractor(p, perm)
    doc: dict = {"version": SCHEMA_VERSION}
    doc["attractor"] = None if law is None else {"m": law.m, "r": law.r}
    return doc


def _cmd_id(args) -> dict:
    p = _load_dist(args.dist)
    perm = _load_perm(args.perm, p.n)
    if args.decompose:
        d = decompose_id(p, perm, tol=args.tol)
        doc: dict = {"version": SCHEMA_VERSION}
        if d is None:
            doc["decomposition"] = None
        else:
            doc["decomposition"] = {
                "a": d.a,
                "m": d.m,
                "lambda": d.lam,
                "jump": d.jump.p.tolist(),
            }
        return doc
    return {
        "version": SCHEMA_VERSION,
        "infinitely_divisible": is_infinitely_divisible(p, perm, tol=args.tol),
    }


def _cmd_spectrum(args) -> dict:
    p = _load_dist(args.dist)
    perm = _load_perm(args.perm, p.n)
    f = spectrum(p, perm).f
    return {
        "version": SCHEMA_VERSION,
        "n": p.n,
        "spectrum": [[float(v.real), float(v.imag)] for v in f],
    }


def _cmd_max(args) -> dict:
    if args.convolve:
        p, q = (_load_dist(path) for path in args.convolve)
        return _dist_doc(max_convolve(p, q))
    if args.root:
        n_parts = int(args.root[0])
        return _dist_doc(max_nth_root(_load_dist(args.root[1]), n_parts))
    x = int(args.doa[0])
    p = _load_dist(args.doa[1])
    return {"version": SCHEMA_VERSION, "x": x, "in_doa": max_doa(p, x)}


def _cmd_simulate(args) -> dict:
    lut = _load_lut(args)
    p = _load_dist(args.dist)
    cfg = SimConfig(seed=args.seed, trials=args.trials, m=args.m)
    emp = empirical_fold(lut, p, cfg, workers=args.workers)
    doc = {"version": SCHEMA_VERSION, "n": p.n, "empirical": emp.p.tolist()}
    if args.compare_exact:
        exact = power(lut, p, args.m)
        doc["exact"] = exact.p.tolist()
        doc["tv"] = tv_distance(emp, exact)
    return doc


_COMMANDS = {
    "check": _cmd_check,
    "convolve": _cmd_convolve,
    "power": _cmd_power,
    "limit": _cmd_limit,
    "stable": _cmd_stable,
    "doa": _cmd_doa,
    "id": _cmd_id,
    "spectrum": _cmd_spectrum,
    "max": _cmd_max,
    "simulate": _cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        doc = _COMMANDS[args.command](args)
    except (ValidityError, OSError) as exc:
        print(f"pseudosum {args.command}: {exc}", file=sys.stderr)
        return 1
    _emit(doc, getattr(args, "out", None))
    return 0


if __name__ == "__main__":
    sys.exit(main())
