"""Geometric crystal structure on the cluster X-torus of a fresh seed.

For a letter j with occurrences K_1 < ... < K_l in the word, define the
partial products T_m = X_{K_m} ... X_{K_{l-1}} (empty product 1) and the
c-weighted sums

    S_q = c * sum_{m <= q} T_m + sum_{m > q} T_m        (0 <= q <= l),

with S_{l+1} identified with S_l (nominal terms past m = l are absent).
The unipotent action multiplies X_{K_p} by S_{p+1}/S_{p-1}; a coordinate
at k with a different letter picks up (S_{g+s-1}/S_{g-1})^{a(j, i_k)}
where the occurrences of j strictly between k and k+ are K_g .. K_{g+s-1}
(factor 1 when there are none); the frozen coordinate at -i is scaled by
c^{a(j,i)} times the inverse of the product of the ratios of all
coordinates carrying letter i.  All of this is assembled once per
(seed, letter) as a subtraction-free DAG with the action parameter as the
reserved variable index 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import (
    DomainError,
    InvalidInputError,
    ONE,
    POSITIVE_RATIONALS,
    Semifield,
    compile_expr_map,
    eprod,
    epow,
    esum,
    evar,
)
from .seeds import Seed
from .tori import XPoint, transport_x_point

C_INDEX = 0  # reserved variable index for the action parameter


@dataclass(frozen=True)
class XActionBundle:
    """Per-coordinate update expressions plus the crystal functions."""

    seed: Seed
    letter: int
    exprs: dict          # index -> Expr for the moved point
    ratios: dict         # index -> Expr, multiplier only (1 where absent)
    gamma: object        # Expr
    epsilon: object      # Expr


def _require_fresh(seed: Seed):
    if not seed.is_fresh():
        raise InvalidInputError(
            "direct crystal formulas live on the fresh chart; "
            "use the chart-aware wrappers for mutated seeds"
        )


@lru_cache(maxsize=None)
def x_action_bundle(seed: Seed, j: int) -> XActionBundle:
    _require_fresh(seed)
    comb = seed.combinatorics
    if j not in seed.word:
        raise InvalidInputError(f"letter {j} does not occur in the word")
    occ = comb.occurrences(j)
    l = len(occ)
    c = evar(C_INDEX)

    # T[m] for m = 1..l ; T[l] is the empty product
    T = {l: ONE}
    for m in range(l - 1, 0, -1):
        T[m] = eprod([evar(occ[m - 1]), T[m + 1]])

    # S[q] for q = 0..l ; S[l+1] aliases S[l]
    S = {}
    for q in range(l + 1):
        terms = [eprod([c, T[m]]) for m in range(1, q + 1)]
        terms += [T[m] for m in range(q + 1, l + 1)]
        S[q] = esum(terms)
    S[l + 1] = S[l]

    ratios = {}
    for p, K in enumerate(occ, start=1):
        ratios[K] = S[p + 1] / S[p - 1]
    for k in range(1, comb.n + 1):
        if comb.letter(k) == j:
            continue
        kp = comb.kplus(k)
        between = [p for p, K in enumerate(occ, start=1) if k < K < kp]
        if not between:
            continue
        g, s = between[0], len(between)
        assert between == list(range(g, g + s))
        ratios[k] = epow(S[g + s - 1] / S[g - 1], seed.cartan.entry(j, comb.letter(k)))
    for i in range(1, seed.cartan.extended_rank + 1):
        factors = [epow(c, seed.cartan.entry(j, i))]
        for k in comb.occurrences(i):
            if k in ratios:
                factors.append(epow(ratios[k], -1))
        ratios[-i] = eprod(factors)

    exprs = {}
    for k in seed.index_list:
        exprs[k] = eprod([evar(k), ratios[k]]) if k in ratios else evar(k)

    gamma = eprod([evar(-j)] + [evar(K) for K in occ])
    tail = {l: evar(occ[-1])}
    for p in range(l - 1, 0, -1):
        tail[p] = eprod([evar(occ[p - 1]), tail[p + 1]])
    epsilon = epow(esum(tail[p] for p in range(1, l + 1)), -1)

    return XActionBundle(seed, j, exprs, ratios, gamma, epsilon)


def x_action_exprs(seed: Seed, j: int) -> dict:
    return x_action_bundle(seed, j).exprs


@lru_cache(maxsize=None)
def _compiled_action(seed: Seed, j: int, sf: Semifield):
    return compile_expr_map(x_action_bundle(seed, j).exprs, sf)


@lru_cache(maxsize=None)
def _compiled_functions(seed: Seed, j: int, sf: Semifield):
    b = x_action_bundle(seed, j)
    return compile_expr_map({"gamma": b.gamma, "epsilon": b.epsilon}, sf)


def _check_c(c) -> Fraction:
    c = Fraction(c)
    if c == 0:
        raise InvalidInputError("the action parameter must be nonzero")
    return c


def act_ex(seed: Seed, j: int, c, point: XPoint) -> XPoint:
    """Act by the crystal one-parameter family on an X-point of a fresh seed."""
    c = _check_c(c)
    if point.seed != seed:
        raise InvalidInputError("point is bound to a different seed")
    fn = _compiled_action(seed, j, POSITIVE_RATIONALS)
    env = dict(point.coords)
    env[C_INDEX] = c
    try:
        coords = fn(env)
    except ZeroDivisionError:
        raise DomainError(f"point outside the domain of the letter-{j} action") from None
    if any(v == 0 for v in coords.values()):
        raise DomainError(f"action at c={c} left the torus chart")
    return XPoint(seed, coords)


def act_ex_chart(point: XPoint, j: int, c) -> XPoint:
    """Chart-aware action: conjugate the fresh-chart action by mutations."""
    seed = point.seed
    if seed.is_fresh():
        return act_ex(seed, j, c, point)
    fresh = seed.fresh()
    back = transport_x_point(point, fresh)
    moved = act_ex(fresh, j, c, back)
    return transport_x_point(moved, seed)


def _eval_function(seed: Seed, j: int, point: XPoint, which: str) -> Fraction:
    if point.seed != seed:
        raise InvalidInputError("point is bound to a different seed")
    fn = _compiled_functions(seed, j, POSITIVE_RATIONALS)
    try:
        return fn(point.coords)[which]
    except ZeroDivisionError:
        raise DomainError(f"{which} undefined at this point") from None


def gamma_x(seed: Seed, j: int, point: XPoint) -> Fraction:
    """Torus weight: X_{-j} times the product over the occurrences of j."""
    return _eval_function(seed, j, point, "gamma")


def epsilon_x(seed: Seed, j: int, point: XPoint) -> Fraction:
    """Inverse of the sum of trailing occurrence products."""
    return _eval_function(seed, j, point, "epsilon")


def phi_x(seed: Seed, j: int, point: XPoint) -> Fraction:
    return epsilon_x(seed, j, point) * gamma_x(seed, j, point)


def gamma_x_expr(seed: Seed, j: int):
    return x_action_bundle(seed, j).gamma


def epsilon_x_expr(seed: Seed, j: int):
    return x_action_bundle(seed, j).epsilon
