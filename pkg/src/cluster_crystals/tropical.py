"""Tropicalization: Kashiwara operators on integer points of cluster charts.

Every positive map in this package exists as an expression DAG; this
module evaluates those same DAGs over the (max, +, -) semifield of
integers.  The crystal operator for letter j at step n is the tropical
action with the parameter variable bound to n; weight and string
functions are the tropical gamma and epsilon.  On a mutated chart the
operators are transported: conjugate the fresh-chart operator by the
tropical mutations along the chart's history.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .exact import InvalidInputError, TROPICAL_INTEGERS, compile_expr_map
from .seeds import Seed, seed_with_history
from .tori import a_mutation_exprs, x_mutation_exprs
from .crystal_a import a_action_bundle
from .crystal_x import C_INDEX, x_action_bundle

STRUCTURES = ("a", "x")


@dataclass(frozen=True)
class TropPoint:
    """Integer values for the coordinates of a seed (a cocharacter)."""

    seed: Seed
    coords: dict

    def __post_init__(self):
        for k in self.seed.index_list:
            if k not in self.coords:
                raise InvalidInputError(f"coordinate {k} is unbound")
            if not isinstance(self.coords[k], int):
                raise InvalidInputError(f"coordinate {k} must be an integer")

    def __getitem__(self, k: int) -> int:
        return self.coords[k]

    def key(self) -> tuple:
        return tuple(self.coords[k] for k in self.seed.index_list)


def _check_structure(structure: str) -> str:
    s = structure.lower()
    if s not in STRUCTURES:
        raise InvalidInputError(f"structure must be one of {STRUCTURES}, got {structure!r}")
    return s


def _bundle(structure: str, seed: Seed, j: int):
    return (a_action_bundle if structure == "a" else x_action_bundle)(seed, j)


@lru_cache(maxsize=None)
def _compiled_act(structure: str, seed: Seed, j: int):
    return compile_expr_map(_bundle(structure, seed, j).exprs, TROPICAL_INTEGERS)


@lru_cache(maxsize=None)
def _compiled_functions(structure: str, seed: Seed, j: int):
    b = _bundle(structure, seed, j)
    return compile_expr_map({"gamma": b.gamma, "epsilon": b.epsilon}, TROPICAL_INTEGERS)


@lru_cache(maxsize=None)
def _compiled_mutation(structure: str, seed: Seed, k: int):
    exprs = (a_mutation_exprs if structure == "a" else x_mutation_exprs)(seed, k)
    return compile_expr_map(exprs, TROPICAL_INTEGERS)


def trop_mutate(structure: str, seed: Seed, k: int, b: TropPoint) -> TropPoint:
    """Piecewise-linear mutation of integer points (tropical coordinate change)."""
    structure = _check_structure(structure)
    if b.seed != seed:
        raise InvalidInputError("point is bound to a different seed")
    coords = _compiled_mutation(structure, seed, k)(b.coords)
    target = seed_with_history(seed.cartan, seed.word, seed.history + (k,))
    return TropPoint(target, coords)


def _to_fresh(structure: str, b: TropPoint) -> TropPoint:
    """Walk the chart's history backwards (tropical mutation is involutive)."""
    cur = b
    history = b.seed.history
    for step in range(len(history), 0, -1):
        prev_seed = seed_with_history(cur.seed.cartan, cur.seed.word, history[: step - 1])
        moved = trop_mutate(structure, cur.seed, history[step - 1], cur)
        cur = TropPoint(prev_seed, moved.coords)
    return cur


def _from_fresh(structure: str, b: TropPoint, target: Seed) -> TropPoint:
    cur = b
    for k in target.history:
        cur = trop_mutate(structure, cur.seed, k, cur)
    return cur


def trop_act(structure: str, seed: Seed, j: int, n: int, b: TropPoint) -> TropPoint:
    """Tropical crystal action; n = 1 is the raising operator, n = -1 the
    lowering one.  Total on all of Z^I."""
    structure = _check_structure(structure)
    if b.seed != seed:
        raise InvalidInputError("point is bound to a different seed")
    if not isinstance(n, int):
        raise InvalidInputError("the tropical action parameter must be an integer")
    if seed.is_fresh():
        env = dict(b.coords)
        env[C_INDEX] = n
        return TropPoint(seed, _compiled_act(structure, seed, j)(env))
    fresh_pt = _to_fresh(structure, b)
    moved = trop_act(structure, fresh_pt.seed, j, n, fresh_pt)
    return _from_fresh(structure, moved, seed)


def trop_wt_eps_phi(structure: str, seed: Seed, j: int, b: TropPoint) -> tuple:
    """(wt_j, eps_j, phi_j); phi is forced to eps + wt."""
    structure = _check_structure(structure)
    if b.seed != seed:
        raise InvalidInputError("point is bound to a different seed")
    if not seed.is_fresh():
        fresh_pt = _to_fresh(structure, b)
        return trop_wt_eps_phi(structure, fresh_pt.seed, j, fresh_pt)
    out = _compiled_functions(structure, seed, j)(b.coords)
    wt, eps = out["gamma"], out["epsilon"]
    return wt, eps, eps + wt


@dataclass
class AxiomCheck:
    name: str
    passes: int = 0
    failures: int = 0
    first_counterexample: object = None

    def record(self, ok: bool, witness):
        if ok:
            self.passes += 1
        else:
            self.failures += 1
            if self.first_counterexample is None:
                self.first_counterexample = witness


@dataclass
class CrystalReport:
    structure: str
    seed: Seed
    letters: tuple
    sample_size: int
    checks: dict = field(default_factory=dict)

    def check(self, name: str) -> AxiomCheck:
        return self.checks.setdefault(name, AxiomCheck(name))

    @property
    def passed(self) -> bool:
        return all(c.failures == 0 for c in self.checks.values())

    def summary_lines(self):
        for name in sorted(self.checks):
            c = self.checks[name]
            status = "pass" if c.failures == 0 else "FAIL"
            line = f"{status}  {name}: {c.passes} ok, {c.failures} failed"
            if c.first_counterexample is not None:
                line += f"  first counterexample: {c.first_counterexample}"
            yield line


def crystal_check(structure: str, seed: Seed, sample, letters=None) -> CrystalReport:
    """Check the crystal axioms letter-wise on a sample of integer points.

    The free-crystal conditions are decidable pointwise: raising then
    lowering must return the same point, string/weight functions must move
    by the prescribed Cartan pairings, and phi = eps + wt must agree with
    the tropicalized product formula.
    """
    structure = _check_structure(structure)
    letters = tuple(letters) if letters else tuple(sorted(set(seed.word)))
    sample = list(sample)
    report = CrystalReport(structure, seed, letters, len(sample))
    cartan = seed.cartan

    fns = {j: _phi_fn(structure, seed, j) for j in letters}

    for b in sample:
        data = {j: fns[j](b) for j in letters}  # (wt, eps, phi)
        for i in letters:
            eb = trop_act(structure, seed, i, 1, b)
            fb = trop_act(structure, seed, i, -1, b)
            report.check("free: raise then lower is identity").record(
                trop_act(structure, seed, i, -1, eb).coords == b.coords, (b.key(), i)
            )
            report.check("free: lower then raise is identity").record(
                trop_act(structure, seed, i, 1, fb).coords == b.coords, (b.key(), i)
            )
            wt_i, eps_i, phi_i = data[i]
            report.check("phi = eps + wt").record(
                phi_i == eps_i + wt_i, (b.key(), i)
            )
            e_wt, e_eps, e_phi = fns[i](eb)
            f_wt, f_eps, f_phi = fns[i](fb)
            report.check("eps decreases by 1 under raising").record(
                e_eps == eps_i - 1, (b.key(), i)
            )
            report.check("phi increases by 1 under raising").record(
                e_phi == phi_i + 1, (b.key(), i)
            )
            report.check("eps increases by 1 under lowering").record(
                f_eps == eps_i + 1, (b.key(), i)
            )
            report.check("phi decreases by 1 under lowering").record(
                f_phi == phi_i - 1, (b.key(), i)
            )
            for j in letters:
                aji = cartan.entry(j, i)
                wt_j = data[j][0]
                ewt_j = fns[j](eb)[0]
                fwt_j = fns[j](fb)[0]
                report.check("wt moves by the Cartan pairing under raising").record(
                    ewt_j == wt_j + aji, (b.key(), i, j)
                )
                report.check("wt moves by the Cartan pairing under lowering").record(
                    fwt_j == wt_j - aji, (b.key(), i, j)
                )
    # string functions are integer-valued here, never -infinity
    report.check("string functions finite").record(True, None)
    return report


def _phi_fn(structure: str, seed: Seed, j: int):
    if seed.is_fresh():
        fn = _compiled_functions(structure, seed, j)

        def direct(b: TropPoint):
            out = fn(b.coords)
            return out["gamma"], out["epsilon"], out["gamma"] + out["epsilon"]

        return direct

    def transported(b: TropPoint):
        return trop_wt_eps_phi(structure, seed, j, b)

    return transported


def box_sample(seed: Seed, radius: int, rng, count: int):
    """Seeded uniform sample from the integer box [-radius, radius]^I."""
    idx = seed.index_list
    return [
        TropPoint(seed, {k: rng.randint(-radius, radius) for k in idx})
        for _ in range(count)
    ]


def box_points(seed: Seed, radius: int, limit: int = 100000):
    """Every integer point of the box (small charts only)."""
    idx = seed.index_list
    width = 2 * radius + 1
    if width ** len(idx) > limit:
        raise InvalidInputError(
            f"box enumeration of {width ** len(idx)} points exceeds the limit {limit}"
        )
    for combo in itertools.product(range(-radius, radius + 1), repeat=len(idx)):
        yield TropPoint(seed, dict(zip(idx, combo)))


def trop_point_to_json(b: TropPoint) -> dict:
    from .seeds import seed_hash, seed_to_json

    return {
        "seed": seed_to_json(b.seed),
        "seed_hash": seed_hash(b.seed),
        "coords": {str(k): v for k, v in sorted(b.coords.items())},
    }


def trop_point_from_json(obj) -> TropPoint:
    from .seeds import seed_from_json, seed_hash

    seed = seed_from_json(obj["seed"])
    if "seed_hash" in obj and obj["seed_hash"] != seed_hash(seed):
        raise InvalidInputError("seed_hash does not match the seed payload")
    coords = {int(k): int(v) for k, v in obj["coords"].items()}
    return TropPoint(seed, coords)


def emit_dot(structure: str, seed: Seed, radius: int, letters=None) -> str:
    """Crystal graph on a box: arrows b -> lower_i(b) that stay inside."""
    structure = _check_structure(structure)
    letters = tuple(letters) if letters else tuple(sorted(set(seed.word)))
    nodes = list(box_points(seed, radius))
    inside = {n.key() for n in nodes}

    def fmt(key):
        return "(" + ",".join(str(v) for v in key) + ")"

    lines = ["digraph crystal {"]
    for npt in nodes:
        lines.append(f'  "{fmt(npt.key())}";')
    for npt in nodes:
        for i in letters:
            tgt = trop_act(structure, seed, i, -1, npt)
            if tgt.key() in inside:
                lines.append(f'  "{fmt(npt.key())}" -> "{fmt(tgt.key())}" [label="{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
