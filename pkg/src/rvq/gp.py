"""Generalized permutations: two rows of letters, each letter occurring twice.

A generalized permutation of type (l, m) is stored as two tuples of letter
tokens. Positions are numbered 1..l top row, l+1..l+m bottom row, matching
the usual formulas. All values are immutable; operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

from .errors import EmptyRow, LetterCountError, MalformedText

Letter = str


@dataclass(frozen=True)
class GeneralizedPermutation:
    top: tuple[Letter, ...]
    bottom: tuple[Letter, ...]

    def __post_init__(self):
        if not self.top or not self.bottom:
            raise EmptyRow("both rows must be non-empty")
        counts: dict[Letter, int] = {}
        for x in self.top + self.bottom:
            counts[x] = counts.get(x, 0) + 1
        bad = sorted(x for x, c in counts.items() if c != 2)
        if bad:
            raise LetterCountError(
                "letters must occur exactly twice: %s" % ", ".join(bad))
        if len(counts) < 2:
            raise LetterCountError("alphabet must contain at least 2 letters")

    # -- basic geometry -------------------------------------------------

    @property
    def ell(self) -> int:
        return len(self.top)

    @property
    def m(self) -> int:
        return len(self.bottom)

    @property
    def d(self) -> int:
        return (len(self.top) + len(self.bottom)) // 2

    @property
    def alphabet(self) -> tuple[Letter, ...]:
        """Letters in order of first appearance, top row first."""
        seen = []
        for x in self.top + self.bottom:
            if x not in seen:
                seen.append(x)
        return tuple(seen)

    def letter(self, pos: int) -> Letter:
        """Letter at 1-based position in 1..l+m."""
        if 1 <= pos <= self.ell:
            return self.top[pos - 1]
        if self.ell < pos <= self.ell + self.m:
            return self.bottom[pos - self.ell - 1]
        raise IndexError(pos)

    def positions(self, x: Letter) -> tuple[int, int]:
        """The two 1-based positions (i, j) of a letter, i < j."""
        found = [p for p in range(1, self.ell + self.m + 1)
                 if self.letter(p) == x]
        if len(found) != 2:
            raise LetterCountError("letter %r not in permutation" % (x,))
        return found[0], found[1]

    def sigma(self, pos: int) -> int:
        """The fixed-point-free involution pairing the two copies of a letter."""
        i, j = self.positions(self.letter(pos))
        return j if pos == i else i

    def row_of(self, pos: int) -> str:
        return 'top' if pos <= self.ell else 'bottom'

    # -- classification --------------------------------------------------

    def duplicates_top(self) -> tuple[Letter, ...]:
        return tuple(sorted({x for x in self.top if self.top.count(x) == 2}))

    def duplicates_bottom(self) -> tuple[Letter, ...]:
        return tuple(sorted({x for x in self.bottom
                             if self.bottom.count(x) == 2}))

    def both_rows_letters(self) -> tuple[Letter, ...]:
        """A_tb: letters with one occurrence in each row, in alphabet order."""
        tops = set(self.top)
        bots = set(self.bottom)
        return tuple(x for x in self.alphabet if x in tops and x in bots)

    @property
    def is_genuine(self) -> bool:
        """True when there are no duplicate letters (classical permutation)."""
        return not self.duplicates_top() and not self.duplicates_bottom()

    @property
    def is_strict(self) -> bool:
        return not self.is_genuine

    def satisfies_convention(self) -> bool:
        """Duplicate letters in both rows (vacuous for genuine permutations)."""
        if self.is_genuine:
            return True
        return bool(self.duplicates_top()) and bool(self.duplicates_bottom())

    # -- encoding ---------------------------------------------------------

    def encode(self) -> str:
        return "%s / %s" % (" ".join(self.top), " ".join(self.bottom))

    def __str__(self):
        return self.encode()

    def transpose(self) -> "GeneralizedPermutation":
        return GeneralizedPermutation(self.bottom, self.top)

    def relabel(self, mapping: Mapping[Letter, Letter]) -> "GeneralizedPermutation":
        return GeneralizedPermutation(
            tuple(mapping[x] for x in self.top),
            tuple(mapping[x] for x in self.bottom))

    def reduced(self) -> "GeneralizedPermutation":
        """Relabel by first appearance (top row first) to tokens 0, 1, 2, ..."""
        mapping = {x: str(k) for k, x in enumerate(self.alphabet)}
        return self.relabel(mapping)


def parse_gp(text: str) -> GeneralizedPermutation:
    """Parse "1 2 3 A A 4 / 4 3 B B 2 1" into a GeneralizedPermutation."""
    rows = text.split("/")
    if len(rows) != 2:
        raise MalformedText("expected exactly one '/' separating two rows")
    top = tuple(rows[0].split())
    bottom = tuple(rows[1].split())
    if not top or not bottom:
        raise MalformedText("rows must be non-empty")
    return GeneralizedPermutation(top, bottom)


# ---------------------------------------------------------------------------
# validity report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidityReport:
    is_genuine: bool
    is_strict: bool
    convention_ok: bool
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(gp: GeneralizedPermutation) -> ValidityReport:
    """Classify ``gp`` and report violations of the both-rows convention."""
    violations = []
    if gp.is_strict and not gp.duplicates_top():
        violations.append("no duplicate letter in top row")
    if gp.is_strict and not gp.duplicates_bottom():
        violations.append("no duplicate letter in bottom row")
    return ValidityReport(
        is_genuine=gp.is_genuine,
        is_strict=gp.is_strict,
        convention_ok=gp.satisfies_convention(),
        violations=tuple(violations))


# ---------------------------------------------------------------------------
# reducibility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Decomposition:
    """A corner decomposition witnessing reducibility.

    Cut indices follow the prefix/suffix convention: the top-left corner is
    positions 1..i1, top-right is i2..l, bottom-left is l+1..i3, bottom-right
    is i4..l+m. An index outside its span (i1 = 0, i2 = l+1, i3 = l,
    i4 = l+m+1) encodes an empty corner.
    """
    i1: int
    i2: int
    i3: int
    i4: int
    corners: tuple[frozenset, frozenset, frozenset, frozenset]
    pattern: str  # 'none-empty' | 'one-left' | 'two-left' | 'two-right'


def _corner_masks(row: Sequence[Letter], index: Mapping[Letter, int]):
    """Bitmask letter sets of all prefixes and suffixes of a row."""
    n = len(row)
    pref = [0] * (n + 1)
    for k, x in enumerate(row):
        pref[k + 1] = pref[k] | (1 << index[x])
    suf = [0] * (n + 2)
    for k in range(n, 0, -1):
        suf[k] = suf[k + 1] | (1 << index[row[k - 1]])
    return pref, suf


def find_reduction(gp: GeneralizedPermutation) -> Optional[Decomposition]:
    """Search all cut quadruples for a decomposition proving reducibility.

    Only meaningful for strict generalized permutations; genuine permutations
    use the classical prefix criterion in :func:`is_irreducible`.
    """
    ell, m = gp.ell, gp.m
    index = {x: k for k, x in enumerate(gp.alphabet)}
    tpref, tsuf = _corner_masks(gp.top, index)
    bpref, bsuf = _corner_masks(gp.bottom, index)

    def mask_set(mask):
        return frozenset(x for x, k in index.items() if mask >> k & 1)

    for a in range(0, ell + 1):          # i1; 0 = empty top-left
        tl = tpref[a]
        for b in range(max(a, 1), ell + 2):   # i2; l+1 = empty top-right
            tr = tsuf[b]
            if a == 0 and b == ell + 1:
                continue  # both top corners empty: never an allowed pattern
            for c in range(ell, ell + m + 1):        # i3; l = empty bottom-left
                bl = bpref[c - ell]
                for e in range(max(c, ell + 1), ell + m + 2):  # i4
                    br = bsuf[e - ell]
                    empties = (a == 0, b == ell + 1, c == ell, e == ell + m + 1)
                    n_empty = sum(empties)
                    if n_empty == 0:
                        pattern = 'none-empty'
                    elif n_empty == 1 and empties[0]:
                        pattern = 'one-left'
                    elif n_empty == 1 and empties[2]:
                        pattern = 'one-left'
                    elif n_empty == 2 and empties[0] and empties[2]:
                        pattern = 'two-left'
                    elif n_empty == 2 and empties[1] and empties[3]:
                        pattern = 'two-right'
                    else:
                        continue
                    if tl & br or tr & bl:
                        continue
                    if tl & ~(bl | tr) or tr & ~(br | tl):
                        continue
                    if bl & ~(tl | br) or br & ~(tr | bl):
                        continue
                    return Decomposition(
                        a, b, c, e,
                        (mask_set(tl), mask_set(tr), mask_set(bl), mask_set(br)),
                        pattern)
    return None


@lru_cache(maxsize=1 << 16)
def _is_irreducible_cached(top, bottom):
    gp = GeneralizedPermutation(top, bottom)
    if gp.is_genuine:
        seen_top, seen_bot = set(), set()
        for k in range(gp.d - 1):
            seen_top.add(gp.top[k])
            seen_bot.add(gp.bottom[k])
            if seen_top == seen_bot:
                return False
        return True
    return find_reduction(gp) is None


def is_irreducible(gp: GeneralizedPermutation) -> bool:
    return _is_irreducible_cached(gp.top, gp.bottom)


# ---------------------------------------------------------------------------
# erasing letters
# ---------------------------------------------------------------------------

def erase_letters(gp: GeneralizedPermutation,
                  letters: Iterable[Letter]) -> GeneralizedPermutation:
    """Remove all occurrences of the given letters, keeping the rest in order."""
    drop = set(letters)
    top = tuple(x for x in gp.top if x not in drop)
    bottom = tuple(x for x in gp.bottom if x not in drop)
    if not top or not bottom:
        raise EmptyRow("erasing %s would empty a row" % sorted(drop))
    return GeneralizedPermutation(top, bottom)


# ---------------------------------------------------------------------------
# suspension data
# ---------------------------------------------------------------------------

Complex = tuple[Fraction, Fraction]


def _as_fraction_pair(z) -> Complex:
    if isinstance(z, tuple):
        return Fraction(z[0]), Fraction(z[1])
    if isinstance(z, complex):
        return Fraction(z.real).limit_denominator(10**9), \
            Fraction(z.imag).limit_denominator(10**9)
    return Fraction(z), Fraction(0)


@dataclass(frozen=True)
class SuspensionDatum:
    """Exact complex length data, one value per letter.

    Values are pairs (real, imaginary) of Fractions so strict inequalities
    at boundaries are decided exactly.
    """
    values: Mapping[Letter, Complex] = field(default_factory=dict)

    @staticmethod
    def of(mapping) -> "SuspensionDatum":
        return SuspensionDatum(
            {x: _as_fraction_pair(z) for x, z in mapping.items()})

    def __getitem__(self, x: Letter) -> Complex:
        return self.values[x]


def check_suspension(gp: GeneralizedPermutation,
                     zeta: SuspensionDatum) -> list[tuple]:
    """Return the list of violated suspension conditions (empty when valid).

    Checks, with exact rational arithmetic: positivity of every width,
    positive top prefix heights, negative bottom prefix heights, and equality
    of the two row totals.
    """
    violations: list[tuple] = []
    for x in gp.alphabet:
        if x not in zeta.values:
            violations.append(('missing', x))
    if violations:
        return violations

    for x in gp.alphabet:
        if zeta[x][0] <= 0:
            violations.append(('positivity', x))

    h = Fraction(0)
    for i in range(gp.ell - 1):
        h += zeta[gp.top[i]][1]
        if h <= 0:
            violations.append(('top_prefix', i + 1))
    h = Fraction(0)
    for i in range(gp.m - 1):
        h += zeta[gp.bottom[i]][1]
        if h >= 0:
            violations.append(('bottom_prefix', i + 1))

    top_total = [sum(zeta[x][k] for x in gp.top) for k in (0, 1)]
    bot_total = [sum(zeta[x][k] for x in gp.bottom) for k in (0, 1)]
    if top_total != bot_total:
        violations.append(('total',))
    return violations
