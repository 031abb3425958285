"""Transformation monoids at desk scale: full and partial maps,
order-preserving maps on a chain, and orientation-preserving/reversing
maps on a cycle.

Maps are image tuples of length n; the sentinel value n encodes
"undefined" so partial maps compose like total ones.  Products run left
to right, x(fg) = (xf)g, which makes R-classes kernel classes and
L-classes image classes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .core import FiniteSemigroup, semigroup_from_rows
from .errors import NotPerfect, NotTn, TooLarge
from .matching import InverseGraph, matching_on_graph
from . import graphs

FAMILIES = ("Tn", "PTn", "On", "OPn", "Pn")

Map = tuple[int, ...]


def compose(f: Map, g: Map, n: int) -> Map:
    """Apply f, then g; the sentinel n absorbs."""
    return tuple(g[v] if v < n else n for v in f)


def image_of(f: Map, n: int) -> tuple[int, ...]:
    return tuple(sorted({v for v in f if v < n}))


def rank_of(f: Map, n: int) -> int:
    return len({v for v in f if v < n})


def kernel_of(f: Map) -> tuple[tuple[int, ...], ...]:
    """Partition of the (defined) domain by equal image, ordered by first
    occurrence."""
    groups: dict[int, list[int]] = {}
    for x, v in enumerate(f):
        groups.setdefault(v, []).append(x)
    return tuple(
        tuple(cls) for _, cls in sorted(groups.items(), key=lambda kv: kv[1][0])
    )


def kernel_signature(f: Map, n: int) -> tuple[int, ...]:
    """Ascending kernel-class sizes; length equals the rank for total maps."""
    sizes = sorted(len(cls) for v, cls in _kernel_items(f) if v < n)
    return tuple(sizes)


def _kernel_items(f: Map):
    groups: dict[int, list[int]] = {}
    for x, v in enumerate(f):
        groups.setdefault(v, []).append(x)
    return groups.items()


# ---------------------------------------------------------------------------
# Family enumeration


def _monotone_maps(n: int):
    return itertools.combinations_with_replacement(range(n), n)


def _rotations(t: tuple[int, ...]):
    for s in range(len(t)):
        yield t[s:] + t[:s]


def family_size(family: str, n: int) -> int:
    if family == "Tn":
        return n**n
    if family == "PTn":
        return (n + 1) ** n
    if family == "On":
        return comb(2 * n - 1, n)
    return len(family_maps(family, n))


def family_maps(family: str, n: int) -> list[Map]:
    """All members of the family, sorted; no Cayley table is built."""
    if family == "Tn":
        maps = itertools.product(range(n), repeat=n)
        return sorted(maps)
    if family == "PTn":
        return sorted(itertools.product(range(n + 1), repeat=n))
    if family == "On":
        return sorted(_monotone_maps(n))
    if family == "OPn":
        out = {rot for mono in _monotone_maps(n) for rot in _rotations(mono)}
        return sorted(out)
    if family == "Pn":
        out = {rot for mono in _monotone_maps(n) for rot in _rotations(mono)}
        out.update(
            rot
            for mono in _monotone_maps(n)
            for rot in _rotations(tuple(reversed(mono)))
        )
        return sorted(out)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def _map_label(f: Map, n: int) -> str:
    if n <= 10:
        return "".join("-" if v >= n else str(v) for v in f)
    return ",".join("-" if v >= n else str(v) for v in f)


@dataclass
class FamilyData:
    family: str
    n: int
    semigroup: FiniteSemigroup
    maps: tuple[Map, ...]

    def index_of(self, f: Map) -> int:
        return self._pos[f]

    def __post_init__(self):
        self._pos = {f: i for i, f in enumerate(self.maps)}


def enumerate_family(family: str, n: int, cap: int = 10_000) -> FamilyData:
    """Enumerate the family and build its Cayley table by composition."""
    size = family_size(family, n)
    if size > cap:
        raise TooLarge(f"|{family}({n})| = {size} exceeds cap {cap}")
    maps = family_maps(family, n)
    pos = {f: i for i, f in enumerate(maps)}
    rows = [
        [pos[compose(f, g, n)] for g in maps] for f in maps
    ]
    labels = [_map_label(f, n) for f in maps]
    sg = semigroup_from_rows(rows, labels)
    return FamilyData(family, n, sg, tuple(maps))


# ---------------------------------------------------------------------------
# Mutual inverses without a Cayley table


def maps_mutually_inverse(a: Map, b: Map, n: int) -> bool:
    """b in V(a), i.e. aba = a and bab = b under left-to-right products."""
    if any(v >= n for v in a) or any(v >= n for v in b):
        aba = compose(compose(a, b, n), a, n)
        bab = compose(compose(b, a, n), b, n)
        return aba == a and bab == b
    # total maps: b sections a on im(a), a sections b on im(b)
    return all(a[b[y]] == y for y in set(a)) and all(
        b[a[z]] == z for z in set(b)
    )


def family_inverse_graph(maps, n: int) -> InverseGraph:
    """Mutual-inverse graph over ``maps``; the rank grouping prunes the
    pair scan since mutual inverses share a rank."""
    count = len(maps)
    by_rank: dict[int, list[int]] = {}
    for idx, f in enumerate(maps):
        by_rank.setdefault(rank_of(f, n), []).append(idx)
    neighbors: list[list[int]] = [[] for _ in range(count)]
    eligible = set()
    for members in by_rank.values():
        for pos, ia in enumerate(members):
            fa = maps[ia]
            for ib in members[pos:]:
                if maps_mutually_inverse(fa, maps[ib], n):
                    if ia == ib:
                        eligible.add(ia)
                    else:
                        neighbors[ia].append(ib)
                        neighbors[ib].append(ia)
    return InverseGraph(
        n=count,
        neighbors=tuple(tuple(sorted(xs)) for xs in neighbors),
        self_eligible=frozenset(eligible),
    )


# ---------------------------------------------------------------------------
# Signature classes (R-classes grouped by kernel-class-size signature)


@dataclass(frozen=True)
class SignatureClass:
    rank: int
    signature: tuple[int, ...]
    elements: tuple[int, ...]  # ascending semigroup indices


def signature_class_partition(
    data: FamilyData, rank: int
) -> list[SignatureClass]:
    """Split the rank-``rank`` D-class of a full transformation monoid into
    unions of R-classes sharing a kernel-size signature."""
    if data.family != "Tn":
        raise NotTn(f"signature classes are defined on Tn, not {data.family}")
    groups: dict[tuple[int, ...], list[int]] = {}
    for idx, f in enumerate(data.maps):
        if rank_of(f, data.n) != rank:
            continue
        groups.setdefault(kernel_signature(f, data.n), []).append(idx)
    return [
        SignatureClass(rank, sig, tuple(sorted(members)))
        for sig, members in sorted(groups.items())
    ]


def _class_adjacency(data: FamilyData, cls: SignatureClass):
    """Within-class inverse candidates (self included when eligible)."""
    n = data.n
    local = {g: i for i, g in enumerate(cls.elements)}
    adj: list[list[int]] = [[] for _ in cls.elements]
    for i, ga in enumerate(cls.elements):
        fa = data.maps[ga]
        for gb in cls.elements[i:]:
            if maps_mutually_inverse(fa, data.maps[gb], n):
                j = local[gb]
                adj[i].append(j)
                if i != j:
                    adj[j].append(i)
    return [sorted(xs) for xs in adj]


def signature_class_degree(data: FamilyData, cls: SignatureClass) -> int | None:
    """Common within-class inverse count, or None if the two-copy graph is
    not regular (which would be a reportable finding, not an expected
    outcome)."""
    adj = _class_adjacency(data, cls)
    degrees = {len(xs) for xs in adj}
    if len(degrees) != 1:
        return None
    return degrees.pop()


def class_perfect_matching(
    data: FamilyData, cls: SignatureClass
) -> dict[int, int] | None:
    """Perfect matching of the class's two-copy graph, lowest-index first."""
    adj = _class_adjacency(data, cls)
    size, match_l, _ = graphs.hopcroft_karp(len(adj), len(adj), adj)
    if size < len(adj):
        return None
    return {
        cls.elements[i]: cls.elements[match_l[i]] for i in range(len(adj))
    }


def permutation_from_perfect_matching(
    data: FamilyData, cls: SignatureClass, pm: dict[int, int]
) -> dict[int, int]:
    """Cycle-chase a perfect matching into a permutation matching.

    Starting anywhere, alternately dropping into the unprimed copy yields
    a cycle of successive mutual inverses; disjointness of the matching
    edges means no early revisit, so the cycles tile the class.
    """
    members = set(cls.elements)
    if set(pm) != members or set(pm.values()) - members:
        raise NotPerfect("matching does not cover the class")
    if len(set(pm.values())) != len(cls.elements):
        raise NotPerfect("matched partners are not distinct")
    for a, b in pm.items():
        if not maps_mutually_inverse(data.maps[a], data.maps[b], data.n):
            raise NotPerfect(f"pair ({a}, {b}) is not mutually inverse")
    phi: dict[int, int] = {}
    seen: set[int] = set()
    for start in cls.elements:
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        x = pm[start]
        while x != start:
            cycle.append(x)
            seen.add(x)
            x = pm[x]
        for i, a in enumerate(cycle):
            phi[a] = cycle[(i + 1) % len(cycle)]
    return phi


def tn_matching_via_classes(
    n: int, cap: int = 10_000
) -> tuple[FamilyData, tuple[int, ...]]:
    """Permutation matching of the full transformation monoid assembled
    from one matching per signature class."""
    data = enumerate_family("Tn", n, cap)
    p = [-1] * data.semigroup.order
    for rank in range(1, n + 1):
        for cls in signature_class_partition(data, rank):
            pm = class_perfect_matching(data, cls)
            if pm is None:
                raise NotPerfect(
                    f"signature class {cls.signature} of rank {rank} has no "
                    "perfect matching"
                )
            phi = permutation_from_perfect_matching(data, cls, pm)
            for a, b in phi.items():
                p[a] = b
    return data, tuple(p)


# ---------------------------------------------------------------------------
# Strong inverses


def _is_inverse_subsemigroup(s: FiniteSemigroup, members) -> bool:
    t = s.table
    idems = [e for e in members if t[e][e] == e]
    for e in idems:
        for f in idems:
            if t[e][f] != t[f][e]:
                return False
    for x in members:
        if not any(
            t[t[x][y]][x] == x and t[t[y][x]][y] == y for y in members
        ):
            return False
    return True


def strong_inverse_pairs(
    s: FiniteSemigroup, cap: int = 512
) -> InverseGraph:
    """Subgraph of the inverse graph keeping an edge {a, b} only when the
    subsemigroup generated by {a, b} is inverse (regular with commuting
    idempotents).  Matchings found on this subgraph map every element to
    a strong inverse."""
    from .core import generated_closure
    from .matching import build_inverse_graph

    if s.order > cap:
        raise TooLarge(f"|S| = {s.order} exceeds cap {cap}")
    g = build_inverse_graph(s)
    neighbors: list[list[int]] = [[] for _ in range(g.n)]
    for a in range(g.n):
        for b in g.neighbors[a]:
            if b < a:
                continue
            if _is_inverse_subsemigroup(s, generated_closure(s, (a, b))):
                neighbors[a].append(b)
                neighbors[b].append(a)
    eligible = {
        a
        for a in g.self_eligible
        if _is_inverse_subsemigroup(s, generated_closure(s, (a,)))
    }
    return InverseGraph(
        n=g.n,
        neighbors=tuple(tuple(sorted(xs)) for xs in neighbors),
        self_eligible=frozenset(eligible),
    )


def strong_inverse_matching(s: FiniteSemigroup, cap: int = 512):
    """Permutation matching restricted to strong-inverse pairs, or None."""
    return matching_on_graph(strong_inverse_pairs(s, cap))
