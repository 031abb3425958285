"""0-rectangular bands given by their idempotent pattern.

A band here is the set {0} plus an m x n grid of cells (i, j) with
product (i, j)(k, l) = (i, l) when pattern[k][j] holds, else 0.  The
module hosts the scaled Hall conditions on the pattern, the construction
of disjoint row-to-column injections covering all columns (Hall's harem
theorem), the involution matching built from them, the block-similarity
criterion for orthodox bands, and the canonical 7-element band with no
permutation matching.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import graphs
from .core import FiniteSemigroup, PrincipalFactor, semigroup_from_rows
from .errors import (
    NotDivisible,
    NotOrthodox,
    NotRegularPattern,
    ParameterOutOfRange,
)
from .matching import (
    Matching,
    find_permutation_matching,
    quotient_pattern,
)


@dataclass(frozen=True)
class ZeroRectBand:
    m: int
    n: int
    pattern: tuple[tuple[bool, ...], ...]

    @property
    def order(self) -> int:
        return self.m * self.n + 1

    @property
    def aspect_ratio(self) -> int:
        if self.n % self.m:
            raise NotDivisible(self.m, self.n)
        return self.n // self.m

    def cell_index(self, i: int, j: int) -> int:
        """Semigroup index of cell (i, j); the zero sits at index 0."""
        return 1 + i * self.n + j

    def cell_of(self, index: int) -> tuple[int, int]:
        return divmod(index - 1, self.n)

    def cells(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.m) for j in range(self.n)]


def band_from_rows(rows) -> ZeroRectBand:
    pattern = tuple(tuple(bool(v) for v in row) for row in rows)
    m = len(pattern)
    n = len(pattern[0]) if m else 0
    if any(len(row) != n for row in pattern):
        raise ParameterOutOfRange("ragged idempotent pattern")
    return ZeroRectBand(m, n, pattern)


def no_matching_band() -> ZeroRectBand:
    """The smallest known band without a permutation matching: 7 elements,
    2 x 3, idempotents at 1-based positions (1,2), (1,3), (2,1).

    Cells display 1-based, so the short side A = {(2,2), (2,3)} of its
    Hall violator shows up under exactly those labels.
    """
    return band_from_rows([[0, 1, 1], [1, 0, 0]])


def _require_regular_pattern(band: ZeroRectBand) -> None:
    for i, row in enumerate(band.pattern):
        if not any(row):
            raise NotRegularPattern(f"row {i} has no idempotent")
    for j in range(band.n):
        if not any(band.pattern[i][j] for i in range(band.m)):
            raise NotRegularPattern(f"column {j} has no idempotent")


def to_semigroup(band: ZeroRectBand) -> FiniteSemigroup:
    """Cayley table of the band; cell (i, j) sits at index 1 + i*n + j and
    is labelled "(i+1,j+1)" (grids are conventionally displayed 1-based)."""
    _require_regular_pattern(band)
    m, n, pat = band.m, band.n, band.pattern
    size = band.order
    rows = [[0] * size for _ in range(size)]
    for i in range(m):
        for j in range(n):
            x = band.cell_index(i, j)
            for k in range(m):
                for l in range(n):
                    if pat[k][j]:
                        rows[x][band.cell_index(k, l)] = band.cell_index(i, l)
    labels = ["0"] + [f"({i + 1},{j + 1})" for i, j in band.cells()]
    return semigroup_from_rows(rows, labels)


def are_mutual_inverses(
    band: ZeroRectBand, x: tuple[int, int], y: tuple[int, int]
) -> bool:
    """Cells (i, j) and (k, l) are mutual inverses iff pattern[k][j] and
    pattern[i][l] (both sandwich products are then idempotent)."""
    (i, j), (k, l) = x, y
    return band.pattern[k][j] and band.pattern[i][l]


def h_quotient(factor: PrincipalFactor) -> ZeroRectBand:
    """H-class quotient of a completely 0-simple principal factor."""
    m, n, pattern = quotient_pattern(factor)
    return ZeroRectBand(m, n, pattern)


# ---------------------------------------------------------------------------
# Scaled Hall conditions and the harem construction
#
# With n = a*m, a permutation matching forces every t rows to meet at
# least a*t columns and every t columns to meet at least t/a rows.  Both
# conditions reduce to a perfect matching on the graph with each row
# cloned a times (unit-capacity flow), which is also exactly what the
# harem family needs.


def _clone_graph(band: ZeroRectBand) -> tuple[int, list[list[int]]]:
    a = band.aspect_ratio
    m, n = band.m, band.n
    adj = []
    for _slot in range(a):
        for i in range(m):
            adj.append([j for j in range(n) if band.pattern[i][j]])
    return a, adj


def check_harem_condition(
    band: ZeroRectBand,
) -> tuple[bool, tuple[str, tuple[int, ...]] | None]:
    """Decide the scaled Hall conditions by matching feasibility.

    Returns (True, None) or (False, ("rows", T)) where the row set T
    meets fewer than a*|T| columns.  Exhaustive subset checking lives in
    :func:`check_harem_condition_exhaustive` as the small-m oracle.
    """
    _require_regular_pattern(band)
    a, adj = _clone_graph(band)
    n_left = a * band.m
    size, match_l, match_r = graphs.hopcroft_karp(n_left, band.n, adj)
    if size == band.n:
        return True, None
    cert = graphs.deficiency_certificate(n_left, band.n, adj, match_l, match_r)
    clones, _image = cert
    violating_rows = tuple(sorted({u % band.m for u in clones}))
    return False, ("rows", violating_rows)


def check_harem_condition_exhaustive(
    band: ZeroRectBand,
) -> tuple[bool, tuple[str, tuple[int, ...]] | None]:
    """Subset-scan oracle for the scaled Hall conditions (2^m + 2^n)."""
    a = band.aspect_ratio
    m, n, pat = band.m, band.n, band.pattern
    for mask in range(1, 1 << m):
        rows = [i for i in range(m) if mask >> i & 1]
        cols = {j for j in range(n) for i in rows if pat[i][j]}
        if len(cols) < a * len(rows):
            return False, ("rows", tuple(rows))
    for mask in range(1, 1 << n):
        cols = [j for j in range(n) if mask >> j & 1]
        rows = {i for i in range(m) for j in cols if pat[i][j]}
        if len(rows) * a < len(cols):
            return False, ("cols", tuple(cols))
    return True, None


@dataclass(frozen=True)
class HaremFamily:
    """Injections rows -> columns with pairwise disjoint ranges covering
    every column; ``functions[t][i]`` is the column of row i under the
    t-th injection, and every (i, functions[t][i]) is an idempotent."""

    functions: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.functions)


def harem_family(band: ZeroRectBand) -> HaremFamily | None:
    """Constructs the family whenever the scaled Hall conditions hold.

    Each row's matched columns are assigned to slots in increasing column
    order, which makes the output deterministic.
    """
    _require_regular_pattern(band)
    a, adj = _clone_graph(band)
    n_left = a * band.m
    size, match_l, _ = graphs.hopcroft_karp(n_left, band.n, adj)
    if size < band.n:
        return None
    per_row: list[list[int]] = [[] for _ in range(band.m)]
    for u in range(n_left):
        per_row[u % band.m].append(match_l[u])
    functions = tuple(
        tuple(sorted(cols)[t] for cols in per_row) for t in range(a)
    )
    return HaremFamily(functions)


@dataclass
class HaremInvolution:
    """Involution matching of the band plus the data it was built from.

    ``column_order[new]`` is the original column relabelled ``new``; the
    matching itself is expressed in original coordinates over the band
    semigroup indexing (zero fixed at 0).
    """

    matching: Matching
    family: HaremFamily
    column_order: tuple[int, ...]


def involution_from_harem(band: ZeroRectBand) -> HaremInvolution | None:
    """Involution matching from a harem family.

    Columns are relabelled so the t-th injection maps row i to t*m + i;
    in those coordinates cell (i, t*m + r) swaps with (r, t*m + i), which
    squares to the identity and pairs mutual inverses.  None when the
    family does not exist.
    """
    fam = harem_family(band)
    if fam is None:
        return None
    m = band.m
    column_order = tuple(
        fam.functions[t][i] for t in range(fam.count) for i in range(m)
    )
    new_of = {orig: new for new, orig in enumerate(column_order)}
    p = [0] * band.order
    for i, c in band.cells():
        t, r = divmod(new_of[c], m)
        image = (r, column_order[t * m + i])
        p[band.cell_index(i, c)] = band.cell_index(*image)
    return HaremInvolution(tuple(p), fam, column_order)


# ---------------------------------------------------------------------------
# Orthodox similarity criterion


@dataclass
class SimilarityReport:
    """Block decomposition of an orthodox pattern plus both verdicts.

    For orthodox bands the constant column/row ratio across maximal
    all-true blocks is equivalent to matching existence; the matching
    verdict is recomputed independently so disagreement would surface."""

    similar: bool
    matching_present: bool
    blocks: tuple[tuple[int, int], ...]  # (rows, cols) per block

    @property
    def agree(self) -> bool:
        return self.similar == self.matching_present


def similarity_check(band: ZeroRectBand) -> SimilarityReport:
    """Partition the idempotent cells into maximal all-true rectangles and
    compare their column/row ratios; requires an orthodox band."""
    _require_regular_pattern(band)
    col_sets: dict[frozenset[int], list[int]] = {}
    for i in range(band.m):
        cols = frozenset(j for j in range(band.n) if band.pattern[i][j])
        col_sets.setdefault(cols, []).append(i)
    groups = sorted(col_sets.items(), key=lambda kv: kv[1][0])
    seen: set[int] = set()
    for cols, _rows in groups:
        if seen & cols:
            raise NotOrthodox(
                "rows share idempotent columns without sharing all of them"
            )
        seen |= cols
    blocks = tuple((len(rows), len(cols)) for cols, rows in groups)
    r0, c0 = blocks[0]
    similar = all(c * r0 == c0 * r for r, c in blocks)
    present = find_permutation_matching(to_semigroup(band)) is not None
    return SimilarityReport(similar, present, blocks)


# ---------------------------------------------------------------------------
# Random patterns and the text format
#
#   line 1: "m n"; then m rows of n characters '0'/'1'.


def random_band(m: int, n: int, density: float, seed: int) -> ZeroRectBand:
    """Seeded pattern, rejection-sampled until every row and column holds
    an idempotent; identical arguments give identical patterns."""
    if m < 1 or n < 1:
        raise ParameterOutOfRange("band dimensions must be positive")
    if not 0 < density <= 1:
        raise ParameterOutOfRange("density must lie in (0, 1]")
    rng = random.Random(seed)
    while True:
        rows = [
            [rng.random() < density for _ in range(n)] for _ in range(m)
        ]
        if all(any(row) for row in rows) and all(
            any(rows[i][j] for i in range(m)) for j in range(n)
        ):
            return band_from_rows(rows)


def parse_band(text: str) -> ZeroRectBand:
    from .errors import ParseError

    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty input")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(f"bad band header: {lines[0]!r}")
    try:
        m, n = int(head[0]), int(head[1])
    except ValueError as exc:
        raise ParseError(f"bad band header: {lines[0]!r}") from exc
    if len(lines) != m + 1:
        raise ParseError(f"expected {m} pattern rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        if len(ln) != n or any(ch not in "01" for ch in ln):
            raise ParseError(f"bad pattern row: {ln!r}")
        rows.append([ch == "1" for ch in ln])
    return band_from_rows(rows)


def format_band(band: ZeroRectBand) -> str:
    out = [f"{band.m} {band.n}"]
    out.extend(
        "".join("1" if v else "0" for v in row) for row in band.pattern
    )
    return "\n".join(out) + "\n"
