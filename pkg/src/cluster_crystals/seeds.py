"""Seeds attached to reduced words, mutation, and the frozen-block matrix.

A seed carries the index set I = {-r..-1} u {1..n} (n = word length),
the frozen subset, a skew-symmetrizable exchange matrix B with exact
rational entries, and the per-index symmetrizer.  The frozen-block
matrix M is computed once from the word and carried unchanged through
mutations; B~ = B + M is the integer matrix of ensemble-map exponents.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .cartan import CartanData, check_reduced, validate_word
from .exact import InvalidInputError, rat_parse, rat_str


@dataclass(frozen=True)
class IndexCombinatorics:
    """Next/previous occurrences of each letter along the doubled index set.

    Negative index -j stands for a virtual occurrence of letter j before
    the word starts, so the previous-occurrence map lands on -j for the
    first genuine occurrence of j.
    """

    rank: int
    word: tuple

    @property
    def n(self) -> int:
        return len(self.word)

    def indices(self) -> tuple:
        return tuple(range(-self.rank, 0)) + tuple(range(1, self.n + 1))

    def letter(self, k: int) -> int:
        if k < 0:
            return -k
        return self.word[k - 1]

    def kplus(self, k: int) -> int:
        """First index above k carrying the same letter, or n+1."""
        lt = self.letter(k)
        for l in range(max(k + 1, 1), self.n + 1):
            if self.word[l - 1] == lt:
                return l
        return self.n + 1

    def kminus(self, k: int) -> int:
        """Last index below k carrying the same letter (negative for a first
        occurrence)."""
        lt = self.letter(k)
        for l in range(k - 1, 0, -1):
            if self.word[l - 1] == lt:
                return l
        return -lt

    def occurrences(self, letter: int) -> tuple:
        return tuple(k for k in range(1, self.n + 1) if self.word[k - 1] == letter)

    def jmax(self, letter: int):
        occ = self.occurrences(letter)
        return occ[-1] if occ else None

    def absent_letters(self) -> tuple:
        present = set(self.word)
        return tuple(j for j in range(1, self.rank + 1) if j not in present)


@dataclass(frozen=True)
class Seed:
    """Seed data; equality and hashing go by (cartan, word, history)."""

    cartan: CartanData
    word: tuple
    history: tuple = ()
    # derived payload, determined by the three identity fields
    index_list: tuple = field(compare=False, default=())
    frozen: frozenset = field(compare=False, default=frozenset())
    b_rows: tuple = field(compare=False, default=())
    m_rows: tuple = field(compare=False, default=())
    d_list: tuple = field(compare=False, default=())

    @property
    def n(self) -> int:
        return len(self.word)

    @property
    def combinatorics(self) -> IndexCombinatorics:
        return _combinatorics(self.cartan.extended_rank, self.word)

    def pos(self, index: int) -> int:
        return _position_map(self.index_list)[index]

    def b(self, j: int, k: int) -> Fraction:
        return self.b_rows[self.pos(j)][self.pos(k)]

    def m(self, j: int, k: int) -> Fraction:
        return self.m_rows[self.pos(j)][self.pos(k)]

    def b_tilde(self, j: int, k: int) -> int:
        v = self.b(j, k) + self.m(j, k)
        if v.denominator != 1:
            raise InvalidInputError(f"B~ entry at ({j},{k}) is not an integer: {v}")
        return int(v)

    def d(self, k: int) -> int:
        return self.d_list[self.pos(k)]

    def is_frozen(self, k: int) -> bool:
        return k in self.frozen

    def unfrozen(self) -> tuple:
        return tuple(k for k in self.index_list if k not in self.frozen)

    def is_fresh(self) -> bool:
        return not self.history

    def fresh(self) -> "Seed":
        return seed_from_word(self.cartan, self.word)

    def b_tilde_grid(self) -> list:
        return [[self.b_tilde(j, k) for k in self.index_list] for j in self.index_list]

    def key(self) -> tuple:
        return (self.cartan, self.word, self.history)


@lru_cache(maxsize=None)
def _combinatorics(rank: int, word: tuple) -> IndexCombinatorics:
    return IndexCombinatorics(rank, word)


@lru_cache(maxsize=None)
def _position_map(index_list: tuple) -> dict:
    return {idx: p for p, idx in enumerate(index_list)}


def _bracket(p: bool) -> int:
    return 1 if p else 0


@lru_cache(maxsize=None)
def _fresh_seed(cartan: CartanData, word: tuple) -> Seed:
    comb = _combinatorics(cartan.extended_rank, word)
    n = len(word)
    indices = comb.indices()
    kplus = {k: comb.kplus(k) for k in indices}
    letter = {k: comb.letter(k) for k in indices}

    def b_entry(j, k):
        jp, kp = kplus[j], kplus[k]
        s = (
            -_bracket(j == kp)
            + _bracket(jp == k)
            - _bracket(k < j < kp and j > 0)
            + _bracket(k < jp < kp and jp <= n)
            + _bracket(j < k < jp and k > 0)
            - _bracket(j < kp < jp and kp <= n)
        )
        return Fraction(cartan.entry(letter[k], letter[j]), 2) * s

    def m_entry(j, k):
        s = _bracket(kplus[j] > n and kplus[k] > n) + _bracket(j < 0 and k < 0)
        return Fraction(cartan.entry(letter[k], letter[j]), 2) * s

    b_rows = tuple(tuple(b_entry(j, k) for k in indices) for j in indices)
    m_rows = tuple(tuple(m_entry(j, k) for k in indices) for j in indices)
    frozen = frozenset(k for k in indices if k < 0 or kplus[k] > n)
    d_list = tuple(cartan.sym(letter[k]) for k in indices)
    seed = Seed(
        cartan=cartan,
        word=word,
        history=(),
        index_list=indices,
        frozen=frozen,
        b_rows=b_rows,
        m_rows=m_rows,
        d_list=d_list,
    )
    # integrality of B~ = B + M holds for every seed built from a word
    for j in indices:
        for k in indices:
            seed.b_tilde(j, k)
    return seed


def seed_from_word(cartan: CartanData, word) -> Seed:
    """Build the seed of a reduced word: exchange matrix from the letter
    combinatorics, frozen set = negatives plus last occurrences."""
    word = validate_word(cartan, word)
    if not check_reduced(cartan, word):
        raise InvalidInputError(f"word {word} is not reduced")
    return _fresh_seed(cartan, word)


def m_matrix(seed: Seed) -> tuple:
    """The frozen-block matrix rows, aligned with ``seed.index_list``."""
    return seed.m_rows


def mutate_seed(seed: Seed, k: int) -> Seed:
    """Mutation at an unfrozen index; indices keep their names."""
    if k not in _position_map(seed.index_list):
        raise InvalidInputError(f"index {k} not in seed")
    if seed.is_frozen(k):
        raise InvalidInputError(f"index {k} is frozen; cannot mutate")
    kp = seed.pos(k)
    rows = seed.b_rows
    size = len(rows)
    new_rows = []
    for ip in range(size):
        row = []
        for jp in range(size):
            v = rows[ip][jp]
            if ip == kp or jp == kp:
                row.append(-v)
            else:
                bik = rows[ip][kp]
                bkj = rows[kp][jp]
                row.append(v + (abs(bik) * bkj + bik * abs(bkj)) / 2)
        new_rows.append(tuple(row))
    return Seed(
        cartan=seed.cartan,
        word=seed.word,
        history=seed.history + (k,),
        index_list=seed.index_list,
        frozen=seed.frozen,
        b_rows=tuple(new_rows),
        m_rows=seed.m_rows,
        d_list=seed.d_list,
    )


@lru_cache(maxsize=None)
def seed_with_history(cartan: CartanData, word: tuple, history: tuple) -> Seed:
    """Replay a mutation history on the fresh seed of a word."""
    if not history:
        return seed_from_word(cartan, word)
    prev = seed_with_history(cartan, word, history[:-1])
    return mutate_seed(prev, history[-1])


def seed_chain(seed: Seed) -> list:
    """Fresh seed through ``seed``, one entry per mutation step."""
    return [
        seed_with_history(seed.cartan, seed.word, seed.history[:i])
        for i in range(len(seed.history) + 1)
    ]


def seed_to_json(seed: Seed) -> dict:
    return {
        "cartan": seed.cartan.to_json(),
        "word": list(seed.word),
        "I": list(seed.index_list),
        "frozen": sorted(seed.frozen),
        "B": [[rat_str(v) for v in row] for row in seed.b_rows],
        "d": list(seed.d_list),
        "history": list(seed.history),
    }


def seed_from_json(obj) -> Seed:
    cartan = CartanData.from_json(obj["cartan"])
    word = tuple(int(x) for x in obj["word"])
    history = tuple(int(x) for x in obj.get("history", ()))
    seed = seed_with_history(cartan, word, history)
    if "B" in obj:
        stored = [[rat_parse(v) for v in row] for row in obj["B"]]
        current = [list(row) for row in seed.b_rows]
        if stored != current:
            raise InvalidInputError("stored exchange matrix disagrees with word + history")
    return seed


def seed_hash(seed: Seed) -> str:
    payload = json.dumps(seed_to_json(seed), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()
