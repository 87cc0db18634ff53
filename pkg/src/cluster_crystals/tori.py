"""Cluster A- and X-points, point mutations, and the ensemble map.

The birational coordinate changes are built as subtraction-free
expression DAGs (one per target coordinate) and evaluated over the exact
rationals here; the tropical module replays the very same DAGs over the
integers, so there is a single source of truth for every formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import (
    ChartBoundaryError,
    DomainError,
    InvalidInputError,
    POSITIVE_RATIONALS,
    Semifield,
    compile_expr_map,
    econst,
    eprod,
    epow,
    esum,
    evar,
    rat_parse,
    rat_str,
)
from .seeds import Seed, seed_from_json, seed_hash, seed_to_json, mutate_seed


def _int_entry(v: Fraction, what: str) -> int:
    if v.denominator != 1:
        raise InvalidInputError(f"{what} must be an integer, got {v}")
    return int(v)


@dataclass(frozen=True)
class APoint:
    """Nonzero rational values for the cluster coordinates of a seed; the
    coordinates are torus-chart values of the chain of generalized minors
    attached to the word."""

    seed: Seed
    coords: dict

    def __post_init__(self):
        _check_coords(self.seed, self.coords)

    def __getitem__(self, k: int) -> Fraction:
        return self.coords[k]


@dataclass(frozen=True)
class XPoint:
    seed: Seed
    coords: dict

    def __post_init__(self):
        _check_coords(self.seed, self.coords)

    def __getitem__(self, k: int) -> Fraction:
        return self.coords[k]


def _check_coords(seed: Seed, coords: dict):
    for k in seed.index_list:
        if k not in coords:
            raise InvalidInputError(f"coordinate {k} is unbound")
        v = coords[k]
        if not isinstance(v, Fraction):
            coords[k] = v = Fraction(v)
        if v == 0:
            raise InvalidInputError(f"coordinate {k} is zero; points live on the torus")
    extra = set(coords) - set(seed.index_list)
    if extra:
        raise InvalidInputError(f"coordinates {sorted(extra)} not in the seed index set")


@lru_cache(maxsize=None)
def a_mutation_exprs(seed: Seed, k: int):
    """Exchange relation at k: only coordinate k moves, to
    (prod_{B(k,j)>0} A_j^{B(k,j)} + prod_{B(k,j)<0} A_j^{-B(k,j)}) / A_k."""
    if seed.is_frozen(k) or k not in seed.index_list:
        raise InvalidInputError(f"cannot mutate at {k}")
    pos_mono, neg_mono = [], []
    for j in seed.index_list:
        e = _int_entry(seed.b(k, j), "exchange exponent")
        if e > 0:
            pos_mono.append(epow(evar(j), e))
        elif e < 0:
            neg_mono.append(epow(evar(j), -e))
    numerator = esum([eprod(pos_mono), eprod(neg_mono)])
    out = {i: evar(i) for i in seed.index_list}
    out[k] = numerator / evar(k)
    return out


@lru_cache(maxsize=None)
def x_mutation_exprs(seed: Seed, k: int):
    """X-coordinate change at k: X_k inverts; X_i picks up
    X_k^{[B(i,k)]_+} (1+X_k)^{-B(i,k)}."""
    if seed.is_frozen(k) or k not in seed.index_list:
        raise InvalidInputError(f"cannot mutate at {k}")
    xk = evar(k)
    one_plus = esum([econst(1), xk])
    out = {}
    for i in seed.index_list:
        if i == k:
            out[i] = epow(xk, -1)
            continue
        e = _int_entry(seed.b(i, k), "exchange exponent")
        factors = [evar(i)]
        if e > 0:
            factors.append(epow(xk, e))
        if e != 0:
            factors.append(epow(one_plus, -e))
        out[i] = eprod(factors)
    return out


@lru_cache(maxsize=None)
def ensemble_exprs(seed: Seed):
    """The monomial map X_i = prod_j A_j^{B~(i,j)}."""
    out = {}
    for i in seed.index_list:
        out[i] = eprod(
            epow(evar(j), seed.b_tilde(i, j))
            for j in seed.index_list
            if seed.b_tilde(i, j) != 0
        )
    return out


@lru_cache(maxsize=None)
def _compiled_a_mutation(seed: Seed, k: int, sf: Semifield):
    return compile_expr_map(a_mutation_exprs(seed, k), sf)


@lru_cache(maxsize=None)
def _compiled_x_mutation(seed: Seed, k: int, sf: Semifield):
    return compile_expr_map(x_mutation_exprs(seed, k), sf)


@lru_cache(maxsize=None)
def _compiled_ensemble(seed: Seed, sf: Semifield):
    return compile_expr_map(ensemble_exprs(seed), sf)


def mutate_a_point(seed: Seed, k: int, point: APoint) -> APoint:
    if point.seed != seed:
        raise InvalidInputError("point is bound to a different seed")
    try:
        new_coords = _compiled_a_mutation(seed, k, POSITIVE_RATIONALS)(point.coords)
    except ZeroDivisionError:
        raise DomainError("division by zero during mutation") from None
    if new_coords[k] == 0:
        raise ChartBoundaryError(f"mutated coordinate {k} vanished; point left the chart")
    return APoint(mutate_seed(seed, k), new_coords)


def mutate_x_point(seed: Seed, k: int, point: XPoint) -> XPoint:
    if point.seed != seed:
        raise InvalidInputError("point is bound to a different seed")
    if point.coords[k] == -1:
        # (1 + X_k) appears with a negative exponent for some row
        if any(_int_entry(seed.b(i, k), "b") > 0 for i in seed.index_list if i != k):
            raise ChartBoundaryError("1 + X_k = 0; point left the chart")
    try:
        new_coords = _compiled_x_mutation(seed, k, POSITIVE_RATIONALS)(point.coords)
    except ZeroDivisionError:
        raise DomainError("division by zero during mutation") from None
    if any(v == 0 for v in new_coords.values()):
        raise ChartBoundaryError("a coordinate vanished; point left the chart")
    return XPoint(mutate_seed(seed, k), new_coords)


def ensemble_point(seed: Seed, point: APoint) -> XPoint:
    """Push an A-point to the X-torus of the same seed (exponents B~)."""
    if point.seed != seed:
        raise InvalidInputError("point is bound to a different seed")
    coords = _compiled_ensemble(seed, POSITIVE_RATIONALS)(point.coords)
    return XPoint(seed, coords)


def transport_a_point(point: APoint, target: Seed) -> APoint:
    """Move a point between charts whose histories differ by a suffix."""
    cur = point
    h_from, h_to = cur.seed.history, target.history
    common = 0
    while common < min(len(h_from), len(h_to)) and h_from[common] == h_to[common]:
        common += 1
    for k in reversed(h_from[common:]):
        back = mutate_a_point(cur.seed, k, cur)
        # mutation is involutive; rebind to the shorter history
        prev = _seed_back(cur.seed)
        cur = APoint(prev, back.coords)
    for k in h_to[common:]:
        cur = mutate_a_point(cur.seed, k, cur)
    return cur


def transport_x_point(point: XPoint, target: Seed) -> XPoint:
    cur = point
    h_from, h_to = cur.seed.history, target.history
    common = 0
    while common < min(len(h_from), len(h_to)) and h_from[common] == h_to[common]:
        common += 1
    for k in reversed(h_from[common:]):
        back = mutate_x_point(cur.seed, k, cur)
        prev = _seed_back(cur.seed)
        cur = XPoint(prev, back.coords)
    for k in h_to[common:]:
        cur = mutate_x_point(cur.seed, k, cur)
    return cur


def _seed_back(seed: Seed) -> Seed:
    from .seeds import seed_with_history

    return seed_with_history(seed.cartan, seed.word, seed.history[:-1])


def point_to_json(point) -> dict:
    return {
        "seed": seed_to_json(point.seed),
        "seed_hash": seed_hash(point.seed),
        "coords": {str(k): rat_str(v) for k, v in sorted(point.coords.items())},
    }


def point_from_json(obj, kind: str):
    seed = seed_from_json(obj["seed"])
    if "seed_hash" in obj and obj["seed_hash"] != seed_hash(seed):
        raise InvalidInputError("seed_hash does not match the seed payload")
    coords = {int(k): rat_parse(v) for k, v in obj["coords"].items()}
    cls = {"a": APoint, "x": XPoint}[kind]
    return cls(seed, coords)
