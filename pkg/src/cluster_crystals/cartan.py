"""Symmetrizable generalized Cartan matrices and reduced-word validation.

Only full-rank matrices are accepted: the number of frozen rows attached
to a seed equals the rank, and degenerate (e.g. affine) matrices would
need an extra basis choice that this package does not make.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .exact import InvalidInputError


@dataclass(frozen=True)
class CartanData:
    """A generalized Cartan matrix with its minimal positive symmetrizer.

    ``a`` is the r x r matrix, ``d`` the symmetrizer diag(d_1..d_r) with
    d_i * a[i][j] == d_j * a[j][i].  The extended rank equals ``rank``
    here (full-rank matrices only).
    """

    rank: int
    a: tuple
    d: tuple

    @property
    def extended_rank(self) -> int:
        return self.rank

    def entry(self, i: int, j: int) -> int:
        """a_{i,j} with 1-based letters."""
        return self.a[i - 1][j - 1]

    def sym(self, i: int) -> int:
        return self.d[i - 1]

    def letters(self):
        return range(1, self.rank + 1)

    def to_json(self) -> dict:
        if self.a == _type_a_matrix(self.rank):
            return {"type": "A", "rank": self.rank}
        return {"matrix": [list(row) for row in self.a], "symmetrizer": list(self.d)}

    @staticmethod
    def from_json(obj) -> "CartanData":
        if "type" in obj:
            if obj["type"] != "A":
                raise InvalidInputError(f"unsupported cartan type {obj['type']!r}")
            return cartan_a(int(obj["rank"]))
        built = build_cartan(obj["matrix"])
        if "symmetrizer" in obj:
            d = tuple(int(v) for v in obj["symmetrizer"])
            if len(d) != built.rank or any(v < 1 for v in d):
                raise InvalidInputError("symmetrizer must list one positive integer per row")
            for i in range(built.rank):
                for j in range(built.rank):
                    if d[i] * built.a[i][j] != d[j] * built.a[j][i]:
                        raise InvalidInputError("provided symmetrizer does not symmetrize")
            return CartanData(built.rank, built.a, d)
        return built


def _type_a_matrix(r: int) -> tuple:
    return tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r))
        for i in range(r)
    )


def cartan_a(r: int) -> CartanData:
    """The type A_r Cartan matrix (simply laced, symmetrizer all ones)."""
    if r < 1:
        raise InvalidInputError("rank must be >= 1")
    return CartanData(r, _type_a_matrix(r), (1,) * r)


def _matrix_rank(rows) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    nr, nc = len(m), len(m[0])
    rank = 0
    col = 0
    for col in range(nc):
        piv = next((i for i in range(rank, nr) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(nr):
            if i != rank and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def build_cartan(matrix) -> CartanData:
    """Validate a generalized Cartan matrix and find its minimal symmetrizer.

    Checks: square integer matrix, 2's on the diagonal, non-positive
    off-diagonal entries with a symmetric zero pattern, symmetrizable,
    and nondegenerate.  The symmetrizer is normalized so that each
    connected component uses the smallest positive integers.
    """
    rows = [list(row) for row in matrix]
    r = len(rows)
    if r == 0 or any(len(row) != r for row in rows):
        raise InvalidInputError("cartan matrix must be square and nonempty")
    for i in range(r):
        for j in range(r):
            v = rows[i][j]
            if not isinstance(v, int):
                raise InvalidInputError(f"cartan entries must be integers, got {v!r}")
            if i == j and v != 2:
                raise InvalidInputError(f"diagonal entry a[{i}][{i}] = {v}, expected 2")
            if i != j and v > 0:
                raise InvalidInputError(f"off-diagonal entry a[{i}][{j}] = {v} > 0")
            if (rows[i][j] == 0) != (rows[j][i] == 0):
                raise InvalidInputError(f"zero pattern not symmetric at ({i},{j})")

    # spread d along edges of the Dynkin graph: d_j = d_i * a_ij / a_ji
    ratios: list = [None] * r
    for start in range(r):
        if ratios[start] is not None:
            continue
        ratios[start] = Fraction(1)
        queue = [start]
        while queue:
            i = queue.pop()
            for j in range(r):
                if i == j or rows[i][j] == 0:
                    continue
                want = ratios[i] * Fraction(rows[i][j], rows[j][i])
                if ratios[j] is None:
                    ratios[j] = want
                    queue.append(j)
                elif ratios[j] != want:
                    raise InvalidInputError("matrix is not symmetrizable")
    scale = lcm(*(x.denominator for x in ratios))
    d = [int(x * scale) for x in ratios]
    # normalize per connected component so the minimal entries are reached
    for indices in _components(rows):
        cg = gcd(*(d[i] for i in indices))
        for i in indices:
            d[i] //= cg

    for i in range(r):
        for j in range(r):
            if d[i] * rows[i][j] != d[j] * rows[j][i]:
                raise InvalidInputError("matrix is not symmetrizable")

    if _matrix_rank(rows) != r:
        raise InvalidInputError(
            "cartan matrix is degenerate; only full-rank matrices are supported"
        )
    return CartanData(r, tuple(tuple(row) for row in rows), tuple(d))


def _components(rows):
    r = len(rows)
    seen = [False] * r
    out = []
    for s in range(r):
        if seen[s]:
            continue
        comp = []
        stack = [s]
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(r):
                if not seen[j] and i != j and rows[i][j] != 0:
                    seen[j] = True
                    stack.append(j)
        out.append(comp)
    return out


def parse_cartan_label(label: str) -> CartanData:
    """Parse CLI labels like ``A4``."""
    label = label.strip()
    if label[:1].upper() == "A" and label[1:].isdigit():
        return cartan_a(int(label[1:]))
    raise InvalidInputError(f"unrecognized cartan label {label!r} (expected e.g. 'A4')")


def validate_word(cartan: CartanData, word) -> tuple:
    word = tuple(int(x) for x in word)
    for x in word:
        if not 1 <= x <= cartan.rank:
            raise InvalidInputError(f"letter {x} out of range 1..{cartan.rank}")
    return word


def simple_reflection(cartan: CartanData, i: int, coeffs):
    """Apply s_i to a vector of simple-root coordinates.

    s_i sends a root beta to beta - beta(coroot_i) alpha_i, and on
    coordinate vectors beta(coroot_i) = sum_j a[i][j] beta_j.
    """
    pairing = sum(cartan.entry(i, j + 1) * c for j, c in enumerate(coeffs))
    out = list(coeffs)
    out[i - 1] -= pairing
    return tuple(out)


def check_reduced(cartan: CartanData, word) -> bool:
    """Root-ascent test: the word is reduced iff each partial product keeps
    sending the next simple root to a positive root."""
    word = validate_word(cartan, word)
    for k in range(len(word)):
        beta = tuple(1 if j == word[k] - 1 else 0 for j in range(cartan.rank))
        for pos in range(k - 1, -1, -1):
            beta = simple_reflection(cartan, word[pos], beta)
        if any(c < 0 for c in beta):
            return False
    return True


def word_to_permutation(r: int, word) -> tuple:
    """Type-A oracle: the permutation of {1..r+1} given by the product of
    adjacent transpositions, applied left factor first."""
    perm = list(range(1, r + 2))
    for i in reversed(word):
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    return tuple(perm)


def inversions(perm) -> int:
    n = len(perm)
    return sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])


def staircase_word(r: int) -> tuple:
    """The longest-element word (1..r, 1..r-1, ..., 1 2, 1) used by the
    type-A closed forms."""
    out = []
    for c in range(r):
        out.extend(range(1, r - c + 1))
    return tuple(out)
