"""Independent matrix ground truth in SL(r+1) / PGL(r+1) for type A.

Everything the closed-form crystal modules compute on cluster tori is
recomputed here with concrete (r+1) x (r+1) rational matrices:

* the open immersion of the X-torus (PGL representatives),
* generalized minors via leading principal minors of wbar'^{-1} g wbar,
* the crystal functions eps/gamma/phi from ratios of minors,
* the unipotent crystal action x_j((c-1)phi) g x_j((1/c-1)eps),
* the twist map transpose([ubar^{-1} g]_0 [ubar^{-1} g]_+) and its inverse,
* the torus-coordinate form of the action on the factorization
  t y_{i_1}(t_1) acheck_{i_1}(1/t_1) ... y_{i_n}(t_n) acheck_{i_n}(1/t_n).

Equality in PGL is tested as proportionality of GL representatives.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cartan import CartanData, cartan_a
from .exact import DomainError, InvalidInputError

Matrix = tuple


# ---------------------------------------------------------------- matrices


def mat(rows) -> Matrix:
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    assert len(a[0]) == m
    bt = list(zip(*b))
    return tuple(
        tuple(sum(ra[k] * cb[k] for k in range(m)) for cb in bt) for ra in a
    )


def mat_prod(ms) -> Matrix:
    out = None
    for m in ms:
        out = m if out is None else mat_mul(out, m)
    if out is None:
        raise InvalidInputError("empty matrix product needs a size")
    return out


def mat_scale(c, a: Matrix) -> Matrix:
    c = Fraction(c)
    return tuple(tuple(c * v for v in row) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_det(a: Matrix) -> Fraction:
    n = len(a)
    m = [list(row) for row in a]
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


def submatrix_det(a: Matrix, rows, cols) -> Fraction:
    """Determinant of the submatrix with 1-based rows/cols in the listed order."""
    if len(rows) != len(cols):
        raise InvalidInputError("minor needs equally many rows and columns")
    if not rows:
        return Fraction(1)
    return mat_det(tuple(tuple(a[i - 1][j - 1] for j in cols) for i in rows))


def leading_minor(a: Matrix, i: int) -> Fraction:
    return submatrix_det(a, range(1, i + 1), range(1, i + 1))


def mat_inverse(a: Matrix) -> Matrix:
    n = len(a)
    m = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            raise DomainError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [v - f * w for v, w in zip(m[i], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def ldu(a: Matrix):
    """Gauss decomposition a = L D U (L lower unitriangular, D diagonal,
    U upper unitriangular); needs all leading principal minors nonzero."""
    n = len(a)
    m = [list(row) for row in a]
    L = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        if m[col][col] == 0:
            raise DomainError("Gauss decomposition fails: a leading minor vanishes")
        inv = 1 / m[col][col]
        for i in range(col + 1, n):
            f = m[i][col] * inv
            L[i][col] = f
            if f != 0:
                for j in range(col, n):
                    m[i][j] -= f * m[col][j]
    D = tuple(tuple(m[i][i] if i == j else Fraction(0) for j in range(n)) for i in range(n))
    U = tuple(
        tuple(m[i][j] / m[i][i] if j >= i else Fraction(0) for j in range(n)) for i in range(n)
    )
    return mat(L), D, U


def proportional(a: Matrix, b: Matrix):
    """The scalar c with b == c*a, or None if the matrices are not parallel."""
    n = len(a)
    scale = None
    for i in range(n):
        for j in range(n):
            if a[i][j] != 0:
                scale = b[i][j] / a[i][j]
                break
        if scale is not None:
            break
    if scale is None or scale == 0:
        return None
    return scale if b == mat_scale(scale, a) else None


# ------------------------------------------------- elementary group elements


def x_mat(n: int, i: int, t) -> Matrix:
    out = [list(row) for row in identity(n)]
    out[i - 1][i] = Fraction(t)
    return mat(out)


def y_mat(n: int, i: int, t) -> Matrix:
    out = [list(row) for row in identity(n)]
    out[i][i - 1] = Fraction(t)
    return mat(out)


def diag(entries) -> Matrix:
    entries = [Fraction(v) for v in entries]
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else Fraction(0) for j in range(n)) for i in range(n))


def coweight_rep(n: int, i: int, t) -> Matrix:
    """GL representative of the i-th fundamental coweight: diag(t,..,t,1,..,1)
    with i copies of t."""
    return diag([t] * i + [1] * (n - i))


def coroot_rep(n: int, i: int, t) -> Matrix:
    """The coroot one-parameter subgroup: diag(1,..,t,1/t,..,1) at slot i."""
    t = Fraction(t)
    entries = [Fraction(1)] * n
    entries[i - 1] = t
    entries[i] = 1 / t
    return diag(entries)


@lru_cache(maxsize=None)
def sbar(n: int, i: int) -> Matrix:
    return mat_prod([x_mat(n, i, -1), y_mat(n, i, 1), x_mat(n, i, -1)])


def word_rep(n: int, word) -> Matrix:
    """wbar for a word, the product of the sbar factors; identity for ()."""
    out = identity(n)
    for i in word:
        out = mat_mul(out, sbar(n, i))
    return out


# ------------------------------------------------------------ cell elements


@dataclass(frozen=True)
class CellMatrix:
    """An (r+1)x(r+1) rational matrix inside the cell; ``sl`` flavor has
    determinant exactly 1, otherwise the matrix is a GL representative of a
    PGL element (defined up to a global scalar)."""

    entries: Matrix
    sl: bool = True

    def __post_init__(self):
        if self.sl and mat_det(self.entries) != 1:
            raise InvalidInputError("SL-flavored cell matrix must have determinant 1")

    @property
    def size(self) -> int:
        return len(self.entries)


def embed_x(word, coords: dict, rank: int) -> CellMatrix:
    """Open immersion of the X-torus: PGL representative of
    X_{-r}^{cowt_r} ... X_{-1}^{cowt_1} y_{i_1}(1) X_1^{cowt_{i_1}} ...."""
    n = rank + 1
    factors = []
    for i in range(rank, 0, -1):
        factors.append(coweight_rep(n, i, coords[-i]))
    for k, letter in enumerate(word, start=1):
        factors.append(y_mat(n, letter, 1))
        factors.append(coweight_rep(n, letter, coords[k]))
    return CellMatrix(mat_prod(factors), sl=False)


def generalized_minor(wprime, w, i: int, g: Matrix) -> Fraction:
    """Leading principal i x i minor of wbar'^{-1} g wbar (words, not elements,
    so representatives are pinned; no exterior-power sign bookkeeping)."""
    n = len(g)
    left = mat_inverse(word_rep(n, wprime))
    right = word_rep(n, w)
    return leading_minor(mat_mul(mat_mul(left, g), right), i)


def minors_a(word, g: Matrix, rank: int) -> dict:
    """All A-coordinates of a cell matrix: A_k is the generalized minor for
    the prefix u_{<=k} and the fundamental weight of letter |i_k|."""
    n = len(g)
    coords = {}
    for j in range(1, rank + 1):
        coords[-j] = leading_minor(g, j)
    prefix_inv = identity(n)
    for k, letter in enumerate(word, start=1):
        prefix_inv = mat_mul(mat_inverse(sbar(n, letter)), prefix_inv)
        coords[k] = leading_minor(mat_mul(prefix_inv, g), letter)
    return coords


def eps_gamma_phi_matrix(j: int, g: Matrix):
    """(eps_j, gamma_j, phi_j) from minors:
    phi = D_{1..j}/D_{1..j-1,j+1}, gamma = D_{<=j}^2/(D_{<=j-1} D_{<=j+1})."""
    dj = leading_minor(g, j)
    djm = leading_minor(g, j - 1)
    djp = leading_minor(g, j + 1)
    rows = list(range(1, j)) + [j + 1]
    dsj = submatrix_det(g, rows, range(1, j + 1))
    if dj == 0 or djm == 0 or djp == 0 or dsj == 0:
        raise DomainError(f"crystal functions undefined: a required minor vanishes (j={j})")
    phi = dj / dsj
    gamma = dj * dj / (djm * djp)
    return phi / gamma, gamma, phi


def act_e_matrix(j: int, c, g: Matrix) -> Matrix:
    """Unipotent crystal action e_j^c on a cell matrix."""
    c = Fraction(c)
    if c == 0:
        raise InvalidInputError("the action parameter must be nonzero")
    eps, _, phi = eps_gamma_phi_matrix(j, g)
    n = len(g)
    left = x_mat(n, j, (c - 1) * phi)
    right = x_mat(n, j, (1 / c - 1) * eps)
    return mat_mul(mat_mul(left, g), right)


# ------------------------------------------------------------------- twist


def twist(word, g: Matrix) -> Matrix:
    """transpose([ubar^{-1} g]_0 [ubar^{-1} g]_+) for the cell of ``word``."""
    n = len(g)
    k = mat_mul(mat_inverse(word_rep(n, word)), g)
    _, d, u = ldu(k)
    return transpose(mat_mul(d, u))


def twist_inverse(word, h: Matrix) -> Matrix:
    """Solve for the preimage of the twist on the cell of ``word``.

    With K = h^T playing the role of [ubar^{-1} g]_0 [ubar^{-1} g]_+, a
    preimage is g = ubar L K for a lower unitriangular L that makes the
    product lower triangular; that condition is linear in the strictly
    lower entries of L.  For words shorter than the longest element the
    system is underdetermined and the directions transverse to the cell
    are free; they are set to zero and the candidate is verified by
    applying the twist again, so a wrong preimage can never be returned.
    """
    n = len(h)
    K = transpose(h)
    ubar = word_rep(n, word)
    unknowns = [(a, b) for a in range(n) for b in range(a)]
    ncols = len(unknowns)
    rows = []
    rhs = []
    for p in range(n):
        for q in range(p + 1, n):
            # (ubar L K)_{pq} = sum_{a>b} ubar[p][a] K[b][q] L[a][b]
            #                   + sum_a ubar[p][a] K[a][q]          (L diag = 1)
            coeff = [Fraction(0)] * ncols
            for idx, (a, b) in enumerate(unknowns):
                coeff[idx] = ubar[p][a] * K[b][q]
            rows.append(coeff)
            rhs.append(-sum(ubar[p][a] * K[a][q] for a in range(n)))
    sol = _solve_linear(rows, rhs)
    L = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for idx, (a, b) in enumerate(unknowns):
        L[a][b] = sol[idx]
    g = mat_mul(mat_mul(ubar, mat(L)), K)
    try:
        again = twist(word, g)
    except DomainError:
        again = None
    if again != h:
        raise DomainError("twist inversion: input is outside the image of the twist")
    return g


def _solve_linear(rows, rhs):
    """Exact Gaussian elimination; free variables are set to zero."""
    m = [list(r) + [v] for r, v in zip(rows, rhs)]
    nrows = len(m)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [v * inv for v in m[rank]]
        for i in range(nrows):
            if i != rank and m[i][col] != 0:
                f = m[i][col]
                m[i] = [v - f * w for v, w in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, nrows):
        if m[i][ncols] != 0:
            raise DomainError("twist inversion: inconsistent system (outside the image)")
    sol = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        sol[col] = m[r][ncols]
    return sol


# ------------------------------------------------ factorization coordinates


@dataclass(frozen=True)
class TCoords:
    """Parameters of t y_{i_1}(t_1) acheck_{i_1}(1/t_1) ... ; ``h`` holds the
    diagonal entries of the torus part."""

    h: tuple
    ts: tuple

    def __post_init__(self):
        if any(v == 0 for v in self.h) or any(v == 0 for v in self.ts):
            raise InvalidInputError("factorization coordinates must be nonzero")


def matrix_from_tcoords(word, tc: TCoords, rank: int) -> Matrix:
    n = rank + 1
    factors = [diag(tc.h)]
    for letter, t in zip(word, tc.ts):
        factors.append(y_mat(n, letter, t))
        factors.append(coroot_rep(n, letter, 1 / Fraction(t)))
    return mat_prod(factors)


def matrix_from_ybar(word, h, cs, rank: int) -> Matrix:
    n = rank + 1
    factors = [diag(h)]
    for letter, c in zip(word, cs):
        factors.append(y_mat(n, letter, c))
    return mat_prod(factors)


def ybar_to_tcoords(cartan: CartanData, word, h, cs) -> TCoords:
    """Rewrite t ybar(c_1)...ybar(c_n) in the coroot-interleaved form."""
    n = len(word)
    zeta = [Fraction(0)] * (n + 1)
    for s in range(n, 0, -1):
        val = Fraction(cs[s - 1])
        for p in range(s + 1, n + 1):
            val *= zeta[p] ** (-cartan.entry(word[p - 1], word[s - 1]))
        zeta[s] = val
    ts = tuple(1 / zeta[s] for s in range(1, n + 1))
    hh = [Fraction(v) for v in h]
    size = cartan.rank + 1
    acc = diag(hh)
    for s in range(1, n + 1):
        acc = mat_mul(acc, coroot_rep(size, word[s - 1], 1 / zeta[s]))
    return TCoords(tuple(acc[i][i] for i in range(size)), ts)


def act_e_on_tcoords(cartan: CartanData, word, j: int, c, tc: TCoords) -> TCoords:
    """The crystal action in factorization coordinates: each t_k is scaled by
    a ratio of c-weighted sums over the occurrences of j; the torus part is
    untouched."""
    c = Fraction(c)
    if c == 0:
        raise InvalidInputError("the action parameter must be nonzero")
    n = len(word)
    ts = [Fraction(v) for v in tc.ts]
    occ = [m for m in range(1, n + 1) if word[m - 1] == j]
    if not occ:
        return tc
    tau = {}
    for m in occ:
        val = ts[m - 1]
        for p in range(1, m):
            val *= ts[p - 1] ** cartan.entry(word[p - 1], j)
        tau[m] = val
    new_ts = []
    for k in range(1, n + 1):
        num = c * sum((tau[m] for m in occ if m < k), Fraction(0)) + sum(
            (tau[m] for m in occ if m >= k), Fraction(0)
        )
        den = c * sum((tau[m] for m in occ if m <= k), Fraction(0)) + sum(
            (tau[m] for m in occ if m > k), Fraction(0)
        )
        if den == 0 or num == 0:
            raise DomainError("t-coordinate action undefined here")
        new_ts.append(ts[k - 1] * num / den)
    return TCoords(tc.h, tuple(new_ts))


def tcoords_ts_from_x(cartan: CartanData, word, coords: dict) -> tuple:
    """Invert prod_{k >= s, i_k = i_s} X_k = (prod_{p>s} t_p^{-a_{i_p,i_s}})/t_s
    for the t-parameters, working from the right end of the word."""
    n = len(word)
    ts = [Fraction(0)] * (n + 1)
    for s in range(n, 0, -1):
        z = Fraction(1)
        for k in range(s, n + 1):
            if word[k - 1] == word[s - 1]:
                z *= coords[k]
        val = 1 / z
        for p in range(s + 1, n + 1):
            val *= ts[p] ** (-cartan.entry(word[p - 1], word[s - 1]))
        ts[s] = val
    return tuple(ts[1:])


def x_from_tcoords_ts(cartan: CartanData, word, ts) -> dict:
    """The positive X-coordinates produced by given t-parameters."""
    n = len(word)
    z = {}
    for s in range(1, n + 1):
        val = 1 / Fraction(ts[s - 1])
        for p in range(s + 1, n + 1):
            val *= Fraction(ts[p - 1]) ** (-cartan.entry(word[p - 1], word[s - 1]))
        z[s] = val
    out = {}
    for s in range(1, n + 1):
        nxt = next((k for k in range(s + 1, n + 1) if word[k - 1] == word[s - 1]), None)
        out[s] = z[s] / z[nxt] if nxt is not None else z[s]
    return out


# ------------------------------------------------------------------ random


def random_fraction(rng: random.Random, lo=1, hi=9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(lo, hi))


def random_cell_matrix(word, rank: int, rng) -> tuple:
    """Seeded random element t ybar(c_1)...ybar(c_n) of the cell, with its
    factorization coordinates.  Returns (CellMatrix, TCoords)."""
    rng = random.Random(rng) if not isinstance(rng, random.Random) else rng
    h = [random_fraction(rng) for _ in range(rank)]
    prod = Fraction(1)
    for v in h:
        prod *= v
    h.append(1 / prod)
    cs = [random_fraction(rng) for _ in word]
    g = matrix_from_ybar(word, h, cs, rank)
    tc = ybar_to_tcoords(cartan_a(rank), word, h, cs)
    return CellMatrix(g, sl=True), tc


def random_reduced_word(cartan: CartanData, rng: random.Random, max_len=None):
    """A random reduced word whose letters cover {1..r}; built by ascents so
    it is reduced by construction."""
    from .cartan import check_reduced

    r = cartan.rank
    while True:
        word = []
        target = rng.randint(r, max_len or (r * (r + 1) // 2))
        for _ in range(200):
            if len(word) >= target and set(word) == set(range(1, r + 1)):
                break
            choices = [i for i in range(1, r + 1) if check_reduced(cartan, word + [i])]
            if not choices:
                break
            word.append(rng.choice(choices))
        if set(word) == set(range(1, r + 1)):
            return tuple(word)


# ------------------------------------------------------------ verification


def _random_xpoint(seed, rng):
    from .tori import XPoint

    return XPoint(seed, {k: random_fraction(rng) for k in seed.index_list})


def _random_apoint(seed, rng):
    from .tori import APoint

    return APoint(seed, {k: random_fraction(rng) for k in seed.index_list})


C_SAMPLES = (Fraction(2), Fraction(1, 3), Fraction(5, 7))


def verify_identities(cartan: CartanData, word, trials: int, rng_seed) -> list:
    """Run the full cross-check battery on one word; returns a list of
    (identity name, passed, detail) triples.  Everything is exact."""
    from . import crystal_a, crystal_x, tori
    from .seeds import mutate_seed, seed_from_word

    rng = random.Random(rng_seed)
    r = cartan.rank
    word = tuple(word)
    seed = seed_from_word(cartan, word)
    letters = sorted(set(word))
    results = []

    def run(name, fn, count):
        bad = 0
        detail = ""
        for t in range(count):
            try:
                if not fn(t):
                    bad += 1
            except Exception as exc:  # count blowups as failures, keep going
                bad += 1
                detail = detail or f"{type(exc).__name__}: {exc}"
        if bad:
            detail = detail or f"{bad}/{count} trials failed"
        results.append((name, bad == 0, detail))

    def x_action_vs_matrix(t):
        X = _random_xpoint(seed, rng)
        j = rng.choice(letters)
        c = rng.choice(C_SAMPLES)
        moved = crystal_x.act_ex(seed, j, c, X)
        lhs = embed_x(word, moved.coords, r).entries
        rhs = act_e_matrix(j, c, embed_x(word, X.coords, r).entries)
        return proportional(rhs, lhs) is not None

    def a_action_vs_twist_path(t):
        gcell, _ = random_cell_matrix(word, r, rng)
        A = tori.APoint(seed, minors_a(word, gcell.entries, r))
        j = rng.choice(letters)
        c = rng.choice(C_SAMPLES)
        lhs = crystal_a.act_ea(seed, j, c, A)
        back = twist_inverse(word, act_e_matrix(j, c, twist(word, gcell.entries)))
        return lhs.coords == minors_a(word, back, r)

    def ensemble_diagrams(t):
        A = _random_apoint(seed, rng)
        j = rng.choice(letters)
        c = rng.choice(C_SAMPLES)
        P = tori.ensemble_point(seed, A)
        lhs = tori.ensemble_point(seed, crystal_a.act_ea(seed, j, c, A))
        rhs = crystal_x.act_ex(seed, j, c, P)
        ok = lhs.coords == rhs.coords
        ok = ok and crystal_a.gamma_a(seed, j, A) == crystal_x.gamma_x(seed, j, P)
        ok = ok and crystal_a.epsilon_a(seed, j, A) == crystal_x.epsilon_x(seed, j, P)
        return ok

    def ensemble_vs_mutation(t):
        A = _random_apoint(seed, rng)
        ok = True
        for k in seed.unfrozen():
            lhs = tori.ensemble_point(mutate_seed(seed, k), tori.mutate_a_point(seed, k, A))
            rhs = tori.mutate_x_point(seed, k, tori.ensemble_point(seed, A))
            ok = ok and lhs.coords == rhs.coords
        return ok

    def twist_roundtrip(t):
        gcell, _ = random_cell_matrix(word, r, rng)
        g = gcell.entries
        if twist_inverse(word, twist(word, g)) != g:
            return False
        tg = twist(word, g)
        for klen in (0, len(word) // 2, len(word)):
            w = word[:klen]
            for i in range(1, r + 1):
                if generalized_minor(w, (), i, tg) != generalized_minor(word, w, i, g):
                    return False
        return True

    def tcoords_consistency(t):
        gcell, tc = random_cell_matrix(word, r, rng)
        if matrix_from_tcoords(word, tc, r) != gcell.entries:
            return False
        j = rng.choice(letters)
        c = rng.choice(C_SAMPLES)
        moved = act_e_on_tcoords(cartan, word, j, c, tc)
        if matrix_from_tcoords(word, moved, r) != act_e_matrix(j, c, gcell.entries):
            return False
        xs = {k: random_fraction(rng) for k in range(1, len(word) + 1)}
        ts = tcoords_ts_from_x(cartan, word, xs)
        return x_from_tcoords_ts(cartan, word, ts) == xs

    def covariance_and_group_law(t):
        X = _random_xpoint(seed, rng)
        A = _random_apoint(seed, rng)
        j = rng.choice(letters)
        c1, c2 = rng.choice(C_SAMPLES), random_fraction(rng)
        ok = True
        for jp in letters:
            a = cartan.entry(jp, j)
            ok = ok and crystal_x.gamma_x(seed, jp, crystal_x.act_ex(seed, j, c1, X)) == c1 ** a * crystal_x.gamma_x(seed, jp, X)
            ok = ok and crystal_a.gamma_a(seed, jp, crystal_a.act_ea(seed, j, c1, A)) == c1 ** a * crystal_a.gamma_a(seed, jp, A)
            if jp != j and a == 0 and cartan.entry(j, jp) == 0:
                ok = ok and crystal_x.epsilon_x(seed, jp, crystal_x.act_ex(seed, j, c1, X)) == crystal_x.epsilon_x(seed, jp, X)
                ok = ok and crystal_a.epsilon_a(seed, jp, crystal_a.act_ea(seed, j, c1, A)) == crystal_a.epsilon_a(seed, jp, A)
        ok = ok and crystal_x.epsilon_x(seed, j, crystal_x.act_ex(seed, j, c1, X)) == crystal_x.epsilon_x(seed, j, X) / c1
        ok = ok and crystal_a.epsilon_a(seed, j, crystal_a.act_ea(seed, j, c1, A)) == crystal_a.epsilon_a(seed, j, A) / c1
        ok = ok and crystal_x.act_ex(seed, j, c1, crystal_x.act_ex(seed, j, c2, X)).coords == crystal_x.act_ex(seed, j, c1 * c2, X).coords
        ok = ok and crystal_a.act_ea(seed, j, c1, crystal_a.act_ea(seed, j, c2, A)).coords == crystal_a.act_ea(seed, j, c1 * c2, A).coords
        return ok

    def minor_pullback(t):
        import itertools as it

        gcell, _ = random_cell_matrix(word, r, rng)
        g = gcell.entries
        c = rng.choice(C_SAMPLES)
        for size in range(1, r + 1):
            for rows in it.combinations(range(1, r + 2), size):
                for j in range(1, r + 1):
                    lhs = submatrix_det(act_e_matrix(j, c, g), rows, range(1, size + 1))
                    hit = [p for p, rj in enumerate(rows) if rj == j]
                    gap = False
                    if hit:
                        p0 = hit[0]
                        nxt = rows[p0 + 1] if p0 + 1 < len(rows) else r + 2
                        gap = nxt > j + 1
                    if gap:
                        _, _, phi = eps_gamma_phi_matrix(j, g)
                        bumped = list(rows)
                        bumped[p0] = j + 1
                        rhs = submatrix_det(g, rows, range(1, size + 1)) + (c - 1) * phi * submatrix_det(g, bumped, range(1, size + 1))
                    else:
                        rhs = submatrix_det(g, rows, range(1, size + 1))
                    if lhs != rhs:
                        return False
        return True

    run("x-action matches matrix action (projective)", x_action_vs_matrix, trials)
    run("a-action matches twist-conjugated matrix action", a_action_vs_twist_path, max(5, trials // 2))
    run("ensemble map intertwines the two actions", ensemble_diagrams, trials)
    run("ensemble map commutes with mutation", ensemble_vs_mutation, max(5, trials // 5))
    run("twist inverts exactly and swaps minor families", twist_roundtrip, max(5, trials // 2))
    run("factorization coordinates: action and changes of variable", tcoords_consistency, max(5, trials // 2))
    run("gamma/epsilon covariance and the group law", covariance_and_group_law, max(5, trials // 2))
    run("minor pullback under the unipotent action", minor_pullback, max(3, trials // 10))
    return results
