"""Decide, construct, verify and certify permutation and involution
matchings of finite regular semigroups.

A permutation matching is a bijection p with ``p[a]`` an inverse of ``a``;
an involution matching additionally satisfies ``p[p[a]] == a``.  Existence
of a permutation matching is equivalent to Hall's condition on the
two-copy bipartite graph of the mutual-inverse relation, and decomposes
through principal factors and their H-class quotients; this module
implements all of those routes plus the cross-checking report.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import graphs
from .core import (
    EggBox,
    FiniteSemigroup,
    PrincipalFactor,
    green_relations,
    principal_factors,
    require_regular,
    require_zero_simple,
)
from .errors import (
    DomainMismatch,
    EquivalenceViolation,
    NoInverseInTargetCell,
    NotAMatching,
    NotAPermutation,
    ParseError,
)

Matching = tuple[int, ...]


@dataclass
class InverseGraph:
    """Mutual-inverse relation of a semigroup.

    ``neighbors[a]`` lists the b != a with b in V(a), ascending;
    ``self_eligible`` holds the a with a = a^3, i.e. a in V(a).
    """

    n: int
    neighbors: tuple[tuple[int, ...], ...]
    self_eligible: frozenset[int]

    def degree(self, a: int) -> int:
        """Number of inverses of a, counting a itself when eligible."""
        return len(self.neighbors[a]) + (1 if a in self.self_eligible else 0)

    def candidates(self, a: int) -> list[int]:
        out = list(self.neighbors[a])
        if a in self.self_eligible:
            out.append(a)
            out.sort()
        return out


def build_inverse_graph(s: FiniteSemigroup) -> InverseGraph:
    require_regular(s)
    t = s.table
    n = s.order
    neighbors: list[list[int]] = [[] for _ in range(n)]
    eligible = set()
    for a in range(n):
        for b in range(a, n):
            if t[t[a][b]][a] == a and t[t[b][a]][b] == b:
                if a == b:
                    eligible.add(a)
                else:
                    neighbors[a].append(b)
                    neighbors[b].append(a)
    return InverseGraph(
        n=n,
        neighbors=tuple(tuple(sorted(ns)) for ns in neighbors),
        self_eligible=frozenset(eligible),
    )


@dataclass
class HallViolator:
    """Witness set A with more elements than joint inverses V(A)."""

    elements: tuple[int, ...]
    image: tuple[int, ...]


# ---------------------------------------------------------------------------
# Graph-level decisions (shared by semigroups, subgraphs and band patterns)


def matching_on_graph(g: InverseGraph) -> Matching | None:
    """Perfect matching of the two-copy bipartite graph, or None."""
    adj = [g.candidates(a) for a in range(g.n)]
    size, match_l, _ = graphs.hopcroft_karp(g.n, g.n, adj)
    if size < g.n:
        return None
    return tuple(match_l)


def violator_on_graph(g: InverseGraph) -> HallViolator | None:
    adj = [g.candidates(a) for a in range(g.n)]
    _, match_l, match_r = graphs.hopcroft_karp(g.n, g.n, adj)
    cert = graphs.deficiency_certificate(g.n, g.n, adj, match_l, match_r)
    if cert is None:
        return None
    violator, image = cert
    return HallViolator(tuple(violator), tuple(image))


def involution_on_graph(g: InverseGraph) -> Matching | None:
    """Involution assignment via the two-copy gadget.

    Copies A and B of the graph are joined by a cross edge at every
    self-eligible vertex; a perfect matching of the gadget restricted to
    copy A pairs the rest, and cross-matched vertices become fixed points.
    """
    n = g.n
    adj: list[list[int]] = [[] for _ in range(2 * n)]
    for a in range(n):
        adj[a].extend(g.neighbors[a])
        adj[a + n].extend(b + n for b in g.neighbors[a])
    for a in sorted(g.self_eligible):
        adj[a].append(a + n)
        adj[a + n].append(a)
    adj = [sorted(xs) for xs in adj]
    mate = graphs.max_matching_general(2 * n, adj)
    if any(m == -1 for m in mate):
        return None
    p = [0] * n
    for a in range(n):
        m = mate[a]
        p[a] = a if m >= n else m
    return tuple(p)


# ---------------------------------------------------------------------------
# Semigroup-level API


def find_permutation_matching(s: FiniteSemigroup) -> Matching | None:
    return matching_on_graph(build_inverse_graph(s))


def hall_violator(s: FiniteSemigroup) -> HallViolator | None:
    return violator_on_graph(build_inverse_graph(s))


def find_involution_matching(s: FiniteSemigroup) -> Matching | None:
    return involution_on_graph(build_inverse_graph(s))


def _check_permutation(n: int, p) -> None:
    if len(p) != n or sorted(p) != list(range(n)):
        raise NotAPermutation(f"not a permutation of [0, {n})")


def verify_permutation_matching(s: FiniteSemigroup, p) -> bool:
    """True iff p is a bijection with a * p[a] * a = a and
    p[a] * a * p[a] = p[a] for every a."""
    _check_permutation(s.order, p)
    t = s.table
    return all(
        t[t[a][p[a]]][a] == a and t[t[p[a]][a]][p[a]] == p[a]
        for a in range(s.order)
    )


def verify_involution_matching(s: FiniteSemigroup, p) -> bool:
    if not verify_permutation_matching(s, p):
        return False
    return all(p[p[a]] == a for a in range(s.order))


def is_h_preserving(s: FiniteSemigroup, p, egg: EggBox | None = None) -> bool:
    """True iff a H b implies p[a] H p[b]."""
    if egg is None:
        egg = green_relations(s)
    keys: dict[tuple[int, int, int], tuple[int, int, int]] = {}
    for a in range(s.order):
        src = egg.h_key(a)
        dst = egg.h_key(p[a])
        if keys.setdefault(src, dst) != dst:
            return False
    return True


# ---------------------------------------------------------------------------
# Involutions out of permutation matchings (cycle splitting)


def involution_from_cycles(s: FiniteSemigroup, p) -> Matching | None:
    """Split the cycles of a verified matching into an involution.

    Even cycles split into mutually inverse pairs.  An odd cycle needs a
    member with a = a^3 to serve as a fixed point; if some odd cycle has
    none, returns None -- a verdict about this p only, not about s.
    """
    t = s.table
    n = s.order
    out = [-1] * n
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = True
        x = p[start]
        while x != start:
            cycle.append(x)
            seen[x] = True
            x = p[x]
        if len(cycle) % 2 == 0:
            for i in range(0, len(cycle), 2):
                a, b = cycle[i], cycle[i + 1]
                out[a], out[b] = b, a
        else:
            fixable = [x for x in cycle if t[t[x][x]][x] == x]
            if not fixable:
                return None
            pivot = cycle.index(min(fixable))
            cycle = cycle[pivot:] + cycle[:pivot]
            out[cycle[0]] = cycle[0]
            for i in range(1, len(cycle), 2):
                a, b = cycle[i], cycle[i + 1]
                out[a], out[b] = b, a
    return tuple(out)


# ---------------------------------------------------------------------------
# H-quotient patterns, lifting, assembly


def quotient_pattern(
    f: PrincipalFactor,
) -> tuple[int, int, tuple[tuple[bool, ...], ...]]:
    """Idempotent pattern of the H-class quotient of a 0-simple factor.

    Rows are the factor's R-classes, columns its L-classes, and a cell is
    set when the H-cell there is a group.  Cell (r, l) corresponds to
    index ``1 + r * n_cols + l`` in the quotient band semigroup, with the
    zero at index 0.
    """
    egg = require_zero_simple(f)
    box = next(
        b
        for b in egg.d_classes
        if not (f.zero_adjoined and b.elements == (0,))
    )
    return len(box.r_classes), len(box.l_classes), box.group_h


def pattern_matching(pattern) -> dict[tuple[int, int], tuple[int, int]] | None:
    """Permutation matching of the 0-rectangular band with the given
    idempotent pattern, as a map on nonzero cells; None if there is none.

    Cells (i, j) and (k, l) are mutual inverses iff pattern[k][j] and
    pattern[i][l].
    """
    m = len(pattern)
    n = len(pattern[0]) if m else 0
    cells = [(i, j) for i in range(m) for j in range(n)]
    index = {c: k for k, c in enumerate(cells)}
    adj = []
    for (i, j) in cells:
        adj.append(
            [
                index[(k, l)]
                for (k, l) in cells
                if pattern[k][j] and pattern[i][l]
            ]
        )
    size, match_l, _ = graphs.hopcroft_karp(len(cells), len(cells), adj)
    if size < len(cells):
        return None
    return {cells[u]: cells[match_l[u]] for u in range(len(cells))}


def lift_h_matching(f: PrincipalFactor, q) -> Matching:
    """Lift a matching of the H-quotient band to the factor itself.

    ``q`` is a permutation of the quotient band semigroup (zero at index
    0, cell (r, l) at ``1 + r * n_cols + l``).  Each factor element maps
    to its unique inverse inside the H-cell designated by ``q``; the
    result is an H-preserving matching, and an involution whenever ``q``
    is one.
    """
    egg = require_zero_simple(f)
    box = next(
        b
        for b in egg.d_classes
        if not (f.zero_adjoined and b.elements == (0,))
    )
    n_cols = len(box.l_classes)
    band_n = len(box.r_classes) * n_cols + 1
    _check_permutation(band_n, q)
    if q[0] != 0:
        raise NotAMatching("quotient matching must fix the zero")
    t = f.semigroup.table
    out = [-1] * f.semigroup.order
    if f.zero_adjoined:
        out[0] = 0
    for x in box.elements:
        cell_index = 1 + egg.r_of[x] * n_cols + egg.l_of[x]
        target = q[cell_index]
        tr, tl = divmod(target - 1, n_cols)
        candidates = [
            y
            for y in box.grid[tr][tl]
            if t[t[x][y]][x] == x and t[t[y][x]][y] == y
        ]
        if not candidates:
            raise NoInverseInTargetCell(x, (tr, tl))
        if len(candidates) > 1:
            raise EquivalenceViolation(
                f"multiple inverses of {x} in one H-cell of a 0-simple factor"
            )
        out[x] = candidates[0]
    return tuple(out)


def assemble_global_matching(s: FiniteSemigroup, parts) -> Matching:
    """Union of per-principal-factor matchings into a matching of s.

    ``parts`` aligns with ``principal_factors(s)``; each part permutes its
    factor and fixes the adjoined zero.  The union is an involution
    whenever all parts are.
    """
    factors = principal_factors(s)
    parts = list(parts)
    if len(parts) != len(factors):
        raise DomainMismatch(
            f"{len(parts)} parts for {len(factors)} principal factors"
        )
    out = [-1] * s.order
    for f, part in zip(factors, parts):
        try:
            _check_permutation(f.semigroup.order, part)
        except NotAPermutation as exc:
            raise DomainMismatch(str(exc)) from exc
        if f.zero_adjoined and part[0] != 0:
            raise DomainMismatch("part does not fix the adjoined zero")
        for x in f.members:
            img = f.from_factor(part[f.to_factor(x)])
            if img is None:
                raise DomainMismatch("part maps a class element to zero")
            out[x] = img
    if not verify_permutation_matching(s, out):
        raise NotAMatching("assembled map is not a matching")
    return tuple(out)


# ---------------------------------------------------------------------------
# Exhaustive oracles (slow; used for cross-checks at small orders)


def matching_backtracking(s: FiniteSemigroup) -> Matching | None:
    """Reference search over injective inverse assignments."""
    g = build_inverse_graph(s)
    n = g.n
    cand = [g.candidates(a) for a in range(n)]
    used = [False] * n
    out = [-1] * n

    def place(a: int) -> bool:
        if a == n:
            return True
        for b in cand[a]:
            if not used[b]:
                used[b] = True
                out[a] = b
                if place(a + 1):
                    return True
                used[b] = False
        return False

    return tuple(out) if place(0) else None


def involution_backtracking(s: FiniteSemigroup) -> Matching | None:
    """Reference search over pairings into mutual-inverse 2-cycles and
    self-eligible fixed points."""
    g = build_inverse_graph(s)
    n = g.n
    out = [-1] * n

    def place() -> bool:
        a = next((x for x in range(n) if out[x] == -1), None)
        if a is None:
            return True
        if a in g.self_eligible:
            out[a] = a
            if place():
                return True
            out[a] = -1
        for b in g.neighbors[a]:
            if b > a and out[b] == -1:
                out[a], out[b] = b, a
                if place():
                    return True
                out[a] = out[b] = -1
        return False

    return tuple(out) if place() else None


# ---------------------------------------------------------------------------
# The cross-checking report


@dataclass
class EquivalenceReport:
    """Verdicts of the equivalent matching-existence characterizations.

    ``has_matching`` is the direct bipartite decision; ``hall_ok`` is the
    absence of a violator; ``factor_verdicts`` and ``quotient_verdicts``
    decide per principal factor and per H-quotient band; ``h_preserving``
    carries an H-relation-preserving matching constructed by lifting
    quotient matchings whenever the quotient verdicts hold.
    """

    has_matching: bool
    matching: Matching | None
    hall_ok: bool
    violator: HallViolator | None
    factor_verdicts: tuple[bool, ...]
    quotient_verdicts: tuple[bool, ...]
    h_preserving: Matching | None


def equivalence_report(s: FiniteSemigroup) -> EquivalenceReport:
    """Decide matching existence along every route and insist they agree.

    Raises EquivalenceViolation on any disagreement; that signals an
    implementation bug, never an input property.
    """
    require_regular(s)
    egg = green_relations(s)
    g = build_inverse_graph(s)
    matching = matching_on_graph(g)
    violator = violator_on_graph(g)
    factors = principal_factors(s, egg)
    factor_verdicts = []
    for f in factors:
        factor_verdicts.append(find_permutation_matching(f.semigroup) is not None)
    quotient_verdicts = []
    quotient_witnesses = []
    for f in factors:
        m, n_cols, pattern = quotient_pattern(f)
        witness = pattern_matching(pattern)
        quotient_verdicts.append(witness is not None)
        quotient_witnesses.append((m, n_cols, witness))
    h_preserving = None
    if all(quotient_verdicts):
        parts = []
        for f, (m, n_cols, witness) in zip(factors, quotient_witnesses):
            q = [0] * (m * n_cols + 1)
            for (i, j), (k, l) in witness.items():
                q[1 + i * n_cols + j] = 1 + k * n_cols + l
            parts.append(lift_h_matching(f, tuple(q)))
        h_preserving = assemble_global_matching(s, parts)

    direct = matching is not None
    verdicts = {
        "direct": direct,
        "hall": violator is None,
        "factors": all(factor_verdicts),
        "quotients": all(quotient_verdicts),
        "h_preserving": h_preserving is not None,
    }
    if len(set(verdicts.values())) != 1:
        raise EquivalenceViolation(f"verdicts disagree: {verdicts}")
    if h_preserving is not None:
        if not verify_permutation_matching(s, h_preserving):
            raise EquivalenceViolation("lifted matching failed verification")
        if not is_h_preserving(s, h_preserving, egg):
            raise EquivalenceViolation("lifted matching is not H-preserving")
    return EquivalenceReport(
        has_matching=direct,
        matching=matching,
        hall_ok=violator is None,
        violator=violator,
        factor_verdicts=tuple(factor_verdicts),
        quotient_verdicts=tuple(quotient_verdicts),
        h_preserving=h_preserving,
    )


# ---------------------------------------------------------------------------
# Serialization: one line of n space-separated images


def format_matching(p) -> str:
    return " ".join(str(v) for v in p) + "\n"


def parse_matching(text: str, n: int) -> Matching:
    try:
        values = [int(v) for v in text.split()]
    except ValueError as exc:
        raise ParseError(f"bad matching line: {text!r}") from exc
    if len(values) != n:
        raise ParseError(f"expected {n} images, found {len(values)}")
    return tuple(values)
