"""Command-line surface: JSON in, JSON out, deterministic under a seed.

Exit codes: 0 success, 1 domain/input errors (chart boundary, non-reduced
word, vanishing minor, ...), 2 usage errors.  Errors are printed as
``{"error": {"kind": ..., "detail": ...}}``.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .cartan import parse_cartan_label
from .exact import ClusterCrystalsError, InvalidInputError, rat_parse, rat_str
from .seeds import mutate_seed, seed_from_json, seed_from_word, seed_hash, seed_to_json
from .tori import (
    APoint,
    ensemble_point,
    mutate_a_point,
    mutate_x_point,
    point_from_json,
    point_to_json,
)
from .crystal_a import act_ea_chart, act_ea_typeA
from .crystal_x import act_ex_chart
from . import typea_oracle as oracle
from .tropical import (
    box_sample,
    crystal_check,
    emit_dot,
    trop_act,
    trop_mutate,
    trop_point_from_json,
    trop_point_to_json,
    trop_wt_eps_phi,
)

RNG_ENV = "CLUSTER_CRYSTAL_RNG_SEED"


def _parse_word(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise InvalidInputError(f"cannot parse word {text!r}; expected e.g. 1,2,1")


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cartan_and_word(args) -> tuple:
    cartan = parse_cartan_label(args.cartan)
    word = _parse_word(args.word)
    return cartan, word


def _matrix_from_json(obj):
    rows = obj["matrix"] if isinstance(obj, dict) else obj
    return oracle.mat([[rat_parse(v) for v in row] for row in rows])


def _matrix_to_json(m) -> dict:
    return {"matrix": [[rat_str(v) for v in row] for row in m]}


def _default_rng_seed(args) -> int:
    if getattr(args, "rng_seed", None) is not None:
        return args.rng_seed
    return int(os.environ.get(RNG_ENV, "0"))


def cmd_seed(args) -> int:
    cartan, word = _cartan_and_word(args)
    seed = seed_from_word(cartan, word)
    if args.print == "b-tilde":
        grid = seed.b_tilde_grid()
        header = "     " + " ".join(f"{k:3d}" for k in seed.index_list)
        lines = [header]
        for idx, row in zip(seed.index_list, grid):
            lines.append(f"{idx:4d} " + " ".join(f"{v:3d}" for v in row))
        sys.stdout.write("\n".join(lines) + "\n")
        return 0
    payload = seed_to_json(seed)
    payload["hash"] = seed_hash(seed)
    _emit(payload, args.out)
    return 0


def cmd_mutate(args) -> int:
    if args.point:
        obj = _load_json(args.point)
        kind = args.structure
        if kind is None:
            raise InvalidInputError("--structure a|x is required when mutating a point")
        point = point_from_json(obj, kind)
        moved = (mutate_a_point if kind == "a" else mutate_x_point)(point.seed, args.k, point)
        _emit(point_to_json(moved), args.out)
        return 0
    if not args.seed:
        raise InvalidInputError("mutate needs --seed or --point")
    seed = seed_from_json(_load_json(args.seed))
    mutated = mutate_seed(seed, args.k)
    payload = seed_to_json(mutated)
    payload["hash"] = seed_hash(mutated)
    _emit(payload, args.out)
    return 0


def cmd_ensemble(args) -> int:
    point = point_from_json(_load_json(args.point), "a")
    _emit(point_to_json(ensemble_point(point.seed, point)), args.out)
    return 0


def cmd_act(args) -> int:
    c = rat_parse(args.c)
    obj = _load_json(args.point)
    if args.structure == "x":
        point = point_from_json(obj, "x")
        moved = act_ex_chart(point, args.j, c)
    else:
        point = point_from_json(obj, "a")
        if args.closed_form_typeA:
            moved = act_ea_typeA(point.seed, args.j, c, point)
        else:
            moved = act_ea_chart(point, args.j, c)
    _emit(point_to_json(moved), args.out)
    return 0


def cmd_minors(args) -> int:
    cartan, word = _cartan_and_word(args)
    g = _matrix_from_json(_load_json(args.matrix))
    if len(g) != cartan.rank + 1:
        raise InvalidInputError("matrix size does not match the rank")
    seed = seed_from_word(cartan, word)
    coords = oracle.minors_a(word, g, cartan.rank)
    point = APoint(seed, coords)
    _emit(point_to_json(point), args.out)
    return 0


def cmd_twist(args) -> int:
    word = _parse_word(args.word)
    g = _matrix_from_json(_load_json(args.matrix))
    out = oracle.twist_inverse(word, g) if args.inverse else oracle.twist(word, g)
    _emit(_matrix_to_json(out), args.out)
    return 0


def cmd_oracle(args) -> int:
    cartan, word = _cartan_and_word(args)
    results = oracle.verify_identities(cartan, word, args.trials, _default_rng_seed(args))
    all_ok = True
    for name, ok, detail in results:
        status = "pass" if ok else "FAIL"
        extra = f"  ({detail})" if detail else ""
        sys.stdout.write(f"{status}  {name}{extra}\n")
        all_ok = all_ok and ok
    sys.stdout.write(("all identities hold\n") if all_ok else ("identities FAILED\n"))
    return 0 if all_ok else 1


def _trop_seed(args):
    if args.seed:
        return seed_from_json(_load_json(args.seed))
    if not args.cartan or not args.word:
        raise InvalidInputError("need either --seed or both --cartan and --word")
    cartan, word = _cartan_and_word(args)
    return seed_from_word(cartan, word)


def cmd_trop_act(args) -> int:
    b = trop_point_from_json(_load_json(args.point))
    moved = trop_act(args.structure, b.seed, args.j, args.n, b)
    _emit(trop_point_to_json(moved), args.out)
    return 0


def cmd_trop_check(args) -> int:
    seed = _trop_seed(args)
    letters = None if args.letters in (None, "all") else _parse_word(args.letters)
    rng = random.Random(_default_rng_seed(args))
    structures = ("a", "x") if args.structure == "both" else (args.structure,)
    exit_code = 0
    for structure in structures:
        sample = box_sample(seed, args.box, rng, args.samples)
        report = crystal_check(structure, seed, sample, letters)
        sys.stdout.write(
            f"structure {structure}: {report.sample_size} points, "
            f"letters {list(report.letters)}\n"
        )
        for line in report.summary_lines():
            sys.stdout.write("  " + line + "\n")
        if not report.passed:
            exit_code = 1
    return exit_code


def cmd_trop_graph(args) -> int:
    seed = _trop_seed(args)
    letters = None if args.letters in (None, "all") else _parse_word(args.letters)
    text = emit_dot(args.structure, seed, args.box, letters)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_trop_wt(args) -> int:
    b = trop_point_from_json(_load_json(args.point))
    wt, eps, phi = trop_wt_eps_phi(args.structure, b.seed, args.j, b)
    _emit({"wt": wt, "epsilon": eps, "phi": phi}, args.out)
    return 0


def cmd_trop_mutate(args) -> int:
    b = trop_point_from_json(_load_json(args.point))
    moved = trop_mutate(args.structure, b.seed, args.k, b)
    _emit(trop_point_to_json(moved), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="cluster-crystals",
        description="exact geometric crystals on cluster tori, with tropical shadows",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seed", help="build seeds from reduced words")
    ssub = p.add_subparsers(dest="subcommand", required=True)
    b = ssub.add_parser("build")
    b.add_argument("--cartan", required=True, help="e.g. A4")
    b.add_argument("--word", required=True, help="comma-separated letters")
    b.add_argument("--print", choices=["b-tilde"], default=None)
    b.add_argument("--out")
    b.set_defaults(fn=cmd_seed)

    p = sub.add_parser("mutate", help="mutate a seed or a point")
    p.add_argument("--seed")
    p.add_argument("--point")
    p.add_argument("--structure", choices=["a", "x"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_mutate)

    p = sub.add_parser("ensemble", help="push an A-point to the X-torus")
    p.add_argument("--point", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_ensemble)

    p = sub.add_parser("act", help="apply the crystal action to a point")
    p.add_argument("--structure", choices=["a", "x"], required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--c", required=True, help="nonzero rational, e.g. 3/2")
    p.add_argument("--point", required=True)
    p.add_argument("--closed-form-typeA", action="store_true", dest="closed_form_typeA")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_act)

    p = sub.add_parser("minors", help="A-coordinates (generalized minors) of a cell matrix")
    p.add_argument("--cartan", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--matrix", required=True, help="JSON file with entries")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_minors)

    p = sub.add_parser("twist", help="twist map of the cell (or its inverse)")
    p.add_argument("--word", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_twist)

    p = sub.add_parser("oracle", help="matrix-oracle cross checks")
    osub = p.add_subparsers(dest="subcommand", required=True)
    v = osub.add_parser("verify")
    v.add_argument("--cartan", required=True)
    v.add_argument("--word", required=True)
    v.add_argument("--trials", type=int, default=25)
    v.add_argument("--rng-seed", type=int, dest="rng_seed")
    v.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("trop", help="tropical (integer-point) operations")
    tsub = p.add_subparsers(dest="subcommand", required=True)

    t = tsub.add_parser("act")
    t.add_argument("--structure", choices=["a", "x"], required=True)
    t.add_argument("--j", type=int, required=True)
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--point", required=True)
    t.add_argument("--out")
    t.set_defaults(fn=cmd_trop_act)

    t = tsub.add_parser("wt")
    t.add_argument("--structure", choices=["a", "x"], required=True)
    t.add_argument("--j", type=int, required=True)
    t.add_argument("--point", required=True)
    t.add_argument("--out")
    t.set_defaults(fn=cmd_trop_wt)

    t = tsub.add_parser("mutate")
    t.add_argument("--structure", choices=["a", "x"], required=True)
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--point", required=True)
    t.add_argument("--out")
    t.set_defaults(fn=cmd_trop_mutate)

    t = tsub.add_parser("check")
    t.add_argument("--cartan")
    t.add_argument("--word")
    t.add_argument("--seed")
    t.add_argument("--structure", choices=["a", "x", "both"], default="both")
    t.add_argument("--box", type=int, default=20)
    t.add_argument("--letters", default="all")
    t.add_argument("--samples", type=int, default=1000)
    t.add_argument("--rng-seed", type=int, dest="rng_seed")
    t.set_defaults(fn=cmd_trop_check)

    t = tsub.add_parser("graph")
    t.add_argument("--cartan")
    t.add_argument("--word")
    t.add_argument("--seed")
    t.add_argument("--structure", choices=["a", "x"], default="a")
    t.add_argument("--box", type=int, default=2)
    t.add_argument("--letters", default="all")
    t.add_argument("--out")
    t.set_defaults(fn=cmd_trop_graph)

    p = sub.add_parser("graph", help="alias for `trop graph`")
    p.add_argument("--cartan")
    p.add_argument("--word")
    p.add_argument("--seed")
    p.add_argument("--structure", choices=["a", "x"], default="a")
    p.add_argument("--box", type=int, default=2)
    p.add_argument("--letters", default="all")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_trop_graph)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except ClusterCrystalsError as exc:
        _emit({"error": {"kind": exc.kind, "detail": exc.detail}})
        return 1
    except FileNotFoundError as exc:
        _emit({"error": {"kind": "io", "detail": str(exc)}})
        return 1
    except (KeyError, json.JSONDecodeError) as exc:
        _emit({"error": {"kind": "invalid-input", "detail": f"malformed input: {exc}"}})
        return 1


run_cli = main


if __name__ == "__main__":
    sys.exit(main())
