"""Twisted geometric crystal structure on the cluster A-torus.

The action is computed through the ensemble map: push the A-point to the
X-torus, act there, and pull the result back coordinate by coordinate.
The back-substitution solves to a closed form whose exponents are minors
of the integer matrix B~:

* for k = 1..n the coordinate at k- (the previous occurrence of the
  letter of k, possibly a frozen negative index) is multiplied by
  c^{D(rows k..n, cols (k+1)-,..,n-,jmax)} times the product over
  l = k..n of (P_l / Xbar_l)^{D(rows k..l-1, cols (k+1)-,..,l-)},
  where P is the ensemble image and Xbar its image under the X-action;
* the last occurrence of each letter a is scaled by c^{delta(a,j)};
* the frozen coordinate of a letter absent from the word is fixed.

Minor row/column lists keep the stated order (signs matter).  The same
module carries the direct closed form available for the type-A staircase
word, which recomputes the action with no determinants at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cartan import staircase_word
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
    substitute,
)
from .seeds import Seed
from .tori import APoint, ensemble_exprs, transport_a_point
from .crystal_x import C_INDEX, x_action_bundle


@dataclass(frozen=True)
class AActionBundle:
    seed: Seed
    letter: int
    exprs: dict
    gamma: object
    epsilon: object


def btilde_minor(seed: Seed, rows, cols) -> int:
    """Integer determinant of the B~ submatrix with rows/cols in the listed
    order (an empty list pair gives 1)."""
    rows = tuple(rows)
    cols = tuple(cols)
    if len(rows) != len(cols):
        raise InvalidInputError("minor needs equally many rows and columns")
    if not rows:
        return 1
    m = [[Fraction(seed.b_tilde(rj, ck)) for ck in cols] for rj in rows]
    det = _det(m)
    assert det.denominator == 1
    return int(det)


def _det(m) -> Fraction:
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for i in range(col + 1, n):
            if m[i][col] != 0:
                f = m[i][col] * inv
                for j in range(col, n):
                    m[i][j] -= f * m[col][j]
    return det


def _require_fresh(seed: Seed):
    if not seed.is_fresh():
        raise InvalidInputError(
            "direct crystal formulas live on the fresh chart; "
            "use the chart-aware wrappers for mutated seeds"
        )


@lru_cache(maxsize=None)
def a_action_bundle(seed: Seed, j: int) -> AActionBundle:
    _require_fresh(seed)
    comb = seed.combinatorics
    if j not in seed.word:
        raise InvalidInputError(f"letter {j} does not occur in the word")
    n = comb.n
    jmax = comb.jmax(j)
    c = evar(C_INDEX)

    p_exprs = ensemble_exprs(seed)
    xb = x_action_bundle(seed, j)
    # P_l / Xbar_l as an expression in the A-variables and c
    inv_ratio = {
        l: epow(substitute(xb.ratios[l], p_exprs), -1)
        for l in range(1, n + 1)
        if l in xb.ratios
    }

    kminus = {k: comb.kminus(k) for k in range(1, n + 1)}
    exprs = {}
    for k in range(1, n + 1):
        cols = [kminus[l] for l in range(k + 1, n + 1)]
        c_exp = btilde_minor(seed, range(k, n + 1), cols + [jmax])
        factors = [evar(kminus[k]), epow(c, c_exp)]
        for l in range(k, n + 1):
            exp = btilde_minor(seed, range(k, l), (kminus[t] for t in range(k + 1, l + 1)))
            if l in inv_ratio and exp != 0:
                factors.append(epow(inv_ratio[l], exp))
        target = kminus[k]
        if target in exprs:
            raise InvalidInputError(f"coordinate {target} assigned twice")
        exprs[target] = eprod(factors)
    for letter in sorted(set(seed.word)):
        target = comb.jmax(letter)
        if target in exprs:
            raise InvalidInputError(f"coordinate {target} assigned twice")
        scaled = eprod([c, evar(target)]) if letter == j else evar(target)
        exprs[target] = scaled
    for letter in comb.absent_letters():
        exprs[-letter] = evar(-letter)
    missing = set(seed.index_list) - set(exprs)
    if missing:
        raise InvalidInputError(f"coordinates {sorted(missing)} not covered by the action")

    gamma = substitute(xb.gamma, p_exprs)
    epsilon = substitute(xb.epsilon, p_exprs)
    return AActionBundle(seed, j, exprs, gamma, epsilon)


def a_action_exprs(seed: Seed, j: int) -> dict:
    return a_action_bundle(seed, j).exprs


@lru_cache(maxsize=None)
def _compiled_action(seed: Seed, j: int, sf: Semifield):
    return compile_expr_map(a_action_bundle(seed, j).exprs, sf)


@lru_cache(maxsize=None)
def _compiled_functions(seed: Seed, j: int, sf: Semifield):
    b = a_action_bundle(seed, j)
    return compile_expr_map({"gamma": b.gamma, "epsilon": b.epsilon}, sf)


def _apply(seed: Seed, j: int, c, point: APoint, fn) -> APoint:
    c = Fraction(c)
    if c == 0:
        raise InvalidInputError("the action parameter must be nonzero")
    if point.seed != seed:
        raise InvalidInputError("point is bound to a different seed")
    env = dict(point.coords)
    env[C_INDEX] = c
    try:
        coords = fn(env)
    except ZeroDivisionError:
        raise DomainError(f"point outside the domain of the letter-{j} action") from None
    if any(v == 0 for v in coords.values()):
        raise DomainError(f"action at c={c} left the torus chart")
    return APoint(seed, coords)


def act_ea(seed: Seed, j: int, c, point: APoint) -> APoint:
    """Twisted crystal action on an A-point of a fresh seed."""
    return _apply(seed, j, c, point, _compiled_action(seed, j, POSITIVE_RATIONALS))


def act_ea_chart(point: APoint, j: int, c) -> APoint:
    """Chart-aware action: conjugate the fresh-chart action by mutations."""
    seed = point.seed
    if seed.is_fresh():
        return act_ea(seed, j, c, point)
    fresh = seed.fresh()
    back = transport_a_point(point, fresh)
    moved = act_ea(fresh, j, c, back)
    return transport_a_point(moved, seed)


def gamma_a(seed: Seed, j: int, point: APoint) -> Fraction:
    fn = _compiled_functions(seed, j, POSITIVE_RATIONALS)
    try:
        return fn(point.coords)["gamma"]
    except ZeroDivisionError:
        raise DomainError("gamma undefined at this point") from None


def epsilon_a(seed: Seed, j: int, point: APoint) -> Fraction:
    fn = _compiled_functions(seed, j, POSITIVE_RATIONALS)
    try:
        return fn(point.coords)["epsilon"]
    except ZeroDivisionError:
        raise DomainError("epsilon undefined at this point") from None


def phi_a(seed: Seed, j: int, point: APoint) -> Fraction:
    return epsilon_a(seed, j, point) * gamma_a(seed, j, point)


def gamma_a_expr(seed: Seed, j: int):
    return a_action_bundle(seed, j).gamma


def epsilon_a_expr(seed: Seed, j: int):
    return a_action_bundle(seed, j).epsilon


# --------------------------------------------- staircase-word closed form


def _staircase_positions(r: int):
    """(cycle m, letter d) -> flat position for the word (1..r, 1..r-1, .., 1)."""
    pos = {}
    k = 0
    for m in range(1, r + 1):
        for d in range(1, r - m + 2):
            k += 1
            pos[(m, d)] = k
    return pos


@lru_cache(maxsize=None)
def a_typeA_bundle(seed: Seed, j: int) -> AActionBundle:
    _require_fresh(seed)
    r = seed.cartan.rank
    if seed.word != staircase_word(r) or seed.cartan != _type_a(r):
        raise InvalidInputError("the closed form needs the type-A staircase word")
    if not 1 <= j <= r:
        raise InvalidInputError(f"letter {j} out of range")
    pos = _staircase_positions(r)
    c = evar(C_INDEX)
    p_exprs = ensemble_exprs(seed)

    d = j
    top = r - d + 1  # number of cycles containing letter d
    # Q_s = P_{s,d} P_{s+1,d} ... P_{r-d,d}; the empty product at s = top is 1
    Q = {top: ONE}
    for s in range(top - 1, 0, -1):
        Q[s] = eprod([p_exprs[pos[(s, d)]], Q[s + 1]])
    den = esum(Q[s] for s in range(1, top + 1))

    exprs = {}
    for m in range(1, r + 1):
        for dd in range(1, r - m + 2):
            k = pos[(m, dd)]
            if dd != d:
                exprs[k] = evar(k)
                continue
            num = esum(
                [eprod([c, Q[s]]) for s in range(1, m + 1)]
                + [Q[s] for s in range(m + 1, top + 1)]
            )
            exprs[k] = eprod([evar(k), num / den])
    base = a_action_bundle(seed, j)
    for i in range(1, r + 1):
        exprs[-i] = base.exprs[-i]
    return AActionBundle(seed, j, exprs, base.gamma, base.epsilon)


@lru_cache(maxsize=None)
def _type_a(r: int):
    from .cartan import cartan_a

    return cartan_a(r)


@lru_cache(maxsize=None)
def _compiled_typeA(seed: Seed, j: int, sf: Semifield):
    return compile_expr_map(a_typeA_bundle(seed, j).exprs, sf)


def act_ea_typeA(seed: Seed, j: int, c, point: APoint) -> APoint:
    """Staircase-word closed form of the twisted action (no determinants);
    agrees with :func:`act_ea` coordinate by coordinate."""
    return _apply(seed, j, c, point, _compiled_typeA(seed, j, POSITIVE_RATIONALS))
