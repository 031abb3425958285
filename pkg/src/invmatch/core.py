"""Finite semigroups as Cayley tables: Green's relations, principal
factors, and structural predicates.

Elements are 0-based indices into the table; labels are cosmetic.  All
structures here are treated as immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    EntryOutOfRange,
    NotAssociative,
    NotRegular,
    NotZeroSimple,
    ParseError,
)


@dataclass(frozen=True)
class FiniteSemigroup:
    """A finite magma given by its Cayley table; see :func:`validate`."""

    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    @property
    def order(self) -> int:
        return len(self.table)

    def product(self, a: int, b: int) -> int:
        return self.table[a][b]

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels is not None else str(a)

    def labels_of(self, xs) -> list[str]:
        return [self.label(x) for x in xs]


def semigroup_from_rows(rows, labels=None) -> FiniteSemigroup:
    table = tuple(tuple(int(v) for v in row) for row in rows)
    return FiniteSemigroup(table, tuple(labels) if labels is not None else None)


def validate(s: FiniteSemigroup) -> None:
    """Entry-range and associativity check, O(n^3).

    Raises EntryOutOfRange or NotAssociative with the first failure in
    lexicographic scan order.
    """
    n = s.order
    t = s.table
    if any(len(row) != n for row in t):
        raise ParseError("table is not square")
    for a in range(n):
        for b in range(n):
            v = t[a][b]
            if not 0 <= v < n:
                raise EntryOutOfRange(a, b, v, n)
    for a in range(n):
        ta = t[a]
        for b in range(n):
            tab = t[ta[b]]
            tb = t[b]
            for c in range(n):
                if tab[c] != ta[tb[c]]:
                    raise NotAssociative(a, b, c)


def idempotents(s: FiniteSemigroup) -> list[int]:
    return [e for e in range(s.order) if s.table[e][e] == e]


def inverses_of(s: FiniteSemigroup, a: int) -> list[int]:
    """V(a) = all b with aba = a and bab = b, ascending."""
    t = s.table
    out = []
    for b in range(s.order):
        if t[t[a][b]][a] == a and t[t[b][a]][b] == b:
            out.append(b)
    return out


def inverse_sets(s: FiniteSemigroup) -> list[list[int]]:
    return [inverses_of(s, a) for a in range(s.order)]


def regularity_check(s: FiniteSemigroup) -> tuple[bool, int | None]:
    """True when every element has an inverse; else a witness without one."""
    t = s.table
    n = s.order
    for a in range(n):
        if not any(t[t[a][b]][a] == a and t[t[b][a]][b] == b for b in range(n)):
            return False, a
    return True, None


def require_regular(s: FiniteSemigroup) -> None:
    ok, witness = regularity_check(s)
    if not ok:
        raise NotRegular(witness)


# ---------------------------------------------------------------------------
# Green's relations


@dataclass
class DClassBox:
    """One D-class of the egg-box: an R x L grid of H-cells."""

    elements: tuple[int, ...]
    r_classes: tuple[tuple[int, ...], ...]
    l_classes: tuple[tuple[int, ...], ...]
    grid: tuple[tuple[tuple[int, ...], ...], ...]  # grid[r][l] = H-cell
    group_h: tuple[tuple[bool, ...], ...]


@dataclass
class EggBox:
    d_classes: tuple[DClassBox, ...]
    d_of: tuple[int, ...]  # element -> D-class index
    r_of: tuple[int, ...]  # element -> row index within its D-class
    l_of: tuple[int, ...]  # element -> column index within its D-class

    def h_key(self, a: int) -> tuple[int, int, int]:
        return self.d_of[a], self.r_of[a], self.l_of[a]

    def cell_of(self, a: int) -> tuple[int, ...]:
        box = self.d_classes[self.d_of[a]]
        return box.grid[self.r_of[a]][self.l_of[a]]


def right_ideal(s: FiniteSemigroup, a: int) -> frozenset[int]:
    """a S^1 with the identity adjoined only virtually."""
    row = s.table[a]
    return frozenset(row) | {a}


def left_ideal(s: FiniteSemigroup, a: int) -> frozenset[int]:
    t = s.table
    return frozenset(t[x][a] for x in range(s.order)) | {a}


def two_sided_ideal(s: FiniteSemigroup, a: int) -> frozenset[int]:
    t = s.table
    n = s.order
    out = set(t[a]) | {a}
    out.update(t[x][a] for x in range(n))
    for x in range(n):
        xa = t[x][a]
        out.update(t[xa])
    return frozenset(out)


def _partition_by(n: int, key) -> list[list[int]]:
    groups: dict = {}
    for a in range(n):
        groups.setdefault(key(a), []).append(a)
    return sorted(groups.values(), key=lambda g: g[0])


def green_relations(s: FiniteSemigroup) -> EggBox:
    """Egg-box decomposition: R by right ideals, L by left ideals,
    H = R intersect L, D = join of R and L (= J on finite semigroups)."""
    n = s.order
    r_ideals = [right_ideal(s, a) for a in range(n)]
    l_ideals = [left_ideal(s, a) for a in range(n)]
    r_classes = _partition_by(n, lambda a: r_ideals[a])
    l_classes = _partition_by(n, lambda a: l_ideals[a])
    r_id = [0] * n
    for i, cls in enumerate(r_classes):
        for a in cls:
            r_id[a] = i
    l_id = [0] * n
    for i, cls in enumerate(l_classes):
        for a in cls:
            l_id[a] = i

    # D = smallest equivalence containing R and L: union-find
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for cls in r_classes:
        for a in cls[1:]:
            union(cls[0], a)
    for cls in l_classes:
        for a in cls[1:]:
            union(cls[0], a)

    d_classes_raw = _partition_by(n, find)
    d_of = [0] * n
    r_of = [0] * n
    l_of = [0] * n
    boxes = []
    for d_idx, members in enumerate(d_classes_raw):
        local_r = sorted({r_id[a] for a in members})
        local_l = sorted({l_id[a] for a in members})
        r_pos = {g: i for i, g in enumerate(local_r)}
        l_pos = {g: i for i, g in enumerate(local_l)}
        cells: list[list[list[int]]] = [
            [[] for _ in local_l] for _ in local_r
        ]
        for a in members:
            i, j = r_pos[r_id[a]], l_pos[l_id[a]]
            cells[i][j].append(a)
            d_of[a] = d_idx
            r_of[a] = i
            l_of[a] = j
        grid = tuple(tuple(tuple(cell) for cell in row) for row in cells)
        group = tuple(
            tuple(any(s.table[e][e] == e for e in cell) for cell in row)
            for row in grid
        )
        boxes.append(
            DClassBox(
                elements=tuple(members),
                r_classes=tuple(tuple(r_classes[g]) for g in local_r),
                l_classes=tuple(tuple(l_classes[g]) for g in local_l),
                grid=grid,
                group_h=group,
            )
        )
    return EggBox(tuple(boxes), tuple(d_of), tuple(r_of), tuple(l_of))


# ---------------------------------------------------------------------------
# Principal factors


@dataclass
class PrincipalFactor:
    """D-class with products leaving the class sent to an adjoined zero.

    The minimal-ideal class is emitted zero-free exactly when it is closed
    under the product.  Factor indices: zero at 0 when adjoined, then the
    class members ascending.
    """

    semigroup: FiniteSemigroup
    source_d_class: int
    zero_adjoined: bool
    members: tuple[int, ...]
    _pos: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        off = 1 if self.zero_adjoined else 0
        self._pos = {x: i + off for i, x in enumerate(self.members)}

    def to_factor(self, x: int) -> int:
        return self._pos[x]

    def from_factor(self, i: int) -> int | None:
        if self.zero_adjoined:
            return None if i == 0 else self.members[i - 1]
        return self.members[i]

    @property
    def zero_index(self) -> int | None:
        return 0 if self.zero_adjoined else None


def principal_factors(
    s: FiniteSemigroup, egg: EggBox | None = None
) -> list[PrincipalFactor]:
    """One factor per D-class, ordered as in the egg-box."""
    require_regular(s)
    if egg is None:
        egg = green_relations(s)
    t = s.table
    factors = []
    for d_idx, box in enumerate(egg.d_classes):
        members = box.elements
        member_set = set(members)
        closed = all(t[x][y] in member_set for x in members for y in members)
        minimal = two_sided_ideal(s, members[0]) == frozenset(member_set)
        zero_adjoined = not (minimal and closed)
        k = len(members)
        pos = {x: i for i, x in enumerate(members)}
        if zero_adjoined:
            size = k + 1
            rows = [[0] * size for _ in range(size)]
            for i, x in enumerate(members):
                for j, y in enumerate(members):
                    z = t[x][y]
                    rows[i + 1][j + 1] = pos[z] + 1 if z in member_set else 0
            labels = ["0"] + [s.label(x) for x in members]
        else:
            rows = [
                [pos[t[x][y]] for y in members] for x in members
            ]
            labels = [s.label(x) for x in members]
        factors.append(
            PrincipalFactor(
                semigroup=semigroup_from_rows(rows, labels),
                source_d_class=d_idx,
                zero_adjoined=zero_adjoined,
                members=members,
            )
        )
    return factors


def is_zero_simple_factor(f: PrincipalFactor) -> bool:
    """Exactly one D-class besides the adjoined zero (if any)."""
    egg = green_relations(f.semigroup)
    nonzero = [
        box
        for box in egg.d_classes
        if not (f.zero_adjoined and box.elements == (0,))
    ]
    return len(nonzero) == 1


def require_zero_simple(f: PrincipalFactor) -> EggBox:
    egg = green_relations(f.semigroup)
    nonzero = [
        box
        for box in egg.d_classes
        if not (f.zero_adjoined and box.elements == (0,))
    ]
    if len(nonzero) != 1:
        raise NotZeroSimple(
            f"factor has {len(nonzero)} nonzero D-classes, expected 1"
        )
    return egg


# ---------------------------------------------------------------------------
# Structure predicates


@dataclass
class StructureReport:
    regular: bool
    inverse: bool
    union_of_groups: bool
    orthodox: bool
    e_solid: bool
    rectangular_band: bool
    x_equals_x_cubed: bool
    idempotent_count: int
    d_class_count: int


def generated_closure(s: FiniteSemigroup, seed) -> list[int]:
    """Subsemigroup generated by ``seed``, by closure to a fixed point."""
    t = s.table
    out = set(seed)
    frontier = list(out)
    while frontier:
        fresh = []
        for a in list(out):
            for b in frontier:
                for c in (t[a][b], t[b][a]):
                    if c not in out:
                        out.add(c)
                        fresh.append(c)
        frontier = fresh
    return sorted(out)


def _is_union_of_groups_subset(s: FiniteSemigroup, subset) -> bool:
    """Completely regular test relative to the subsemigroup ``subset``:
    every a has an inverse x in the subset with ax = xa."""
    t = s.table
    members = list(subset)
    for a in members:
        if not any(
            t[t[a][x]][a] == a and t[a][x] == t[x][a] for x in members
        ):
            return False
    return True


def structure_report(
    s: FiniteSemigroup, egg: EggBox | None = None
) -> StructureReport:
    n = s.order
    t = s.table
    if egg is None:
        egg = green_relations(s)
    vsets = inverse_sets(s)
    regular = all(vsets[a] for a in range(n))
    inverse = regular and all(len(vsets[a]) == 1 for a in range(n))
    union_of_groups = all(
        egg.d_classes[egg.d_of[a]].group_h[egg.r_of[a]][egg.l_of[a]]
        for a in range(n)
    )
    idems = idempotents(s)
    idem_set = set(idems)
    orthodox = regular and all(
        t[e][f] in idem_set for e in idems for f in idems
    )
    e_solid = regular and _is_union_of_groups_subset(
        s, generated_closure(s, idems)
    )
    rect = all(t[t[x][y]][x] == x for x in range(n) for y in range(n))
    xcubed = all(t[t[x][x]][x] == x for x in range(n))
    return StructureReport(
        regular=regular,
        inverse=inverse,
        union_of_groups=union_of_groups,
        orthodox=orthodox,
        e_solid=e_solid,
        rectangular_band=rect,
        x_equals_x_cubed=xcubed,
        idempotent_count=len(idems),
        d_class_count=len(egg.d_classes),
    )


# ---------------------------------------------------------------------------
# Cayley table text format
#
#   line 1:  n
#   lines 2..n+1:  n space-separated 0-based entries
#   optional:  "# labels: <l0> <l1> ..."


def parse_cayley(text: str) -> FiniteSemigroup:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty input")
    labels = None
    if lines[-1].startswith("#"):
        tail = lines.pop()
        body = tail.lstrip("#").strip()
        if not body.startswith("labels:"):
            raise ParseError(f"unrecognized trailer: {tail!r}")
        labels = body[len("labels:"):].split()
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ParseError(f"bad order line: {lines[0]!r}") from exc
    if n < 1:
        raise ParseError("order must be positive")
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        try:
            row = [int(v) for v in ln.split()]
        except ValueError as exc:
            raise ParseError(f"bad row: {ln!r}") from exc
        if len(row) != n:
            raise ParseError(f"row has {len(row)} entries, expected {n}")
        rows.append(row)
    if labels is not None and len(labels) != n:
        raise ParseError(f"expected {n} labels, found {len(labels)}")
    return semigroup_from_rows(rows, labels)


def format_cayley(s: FiniteSemigroup) -> str:
    out = [str(s.order)]
    out.extend(" ".join(str(v) for v in row) for row in s.table)
    if s.labels is not None:
        out.append("# labels: " + " ".join(s.labels))
    return "\n".join(out) + "\n"
