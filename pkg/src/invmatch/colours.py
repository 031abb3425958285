"""The ball-exchange alignment problem and its reduction to involution
matchings of 0-rectangular bands.

m girls hold n balls each, m balls of each of n colours; one round of
pairwise exchanges (a single involution on balls, fixed points allowed)
must leave every girl with one ball of each colour.  Solved instances
derived from a permutation matching of a band convert into involution
matchings of that band: when girl a's ball of origin (a, x) trades with
girl b's ball of origin (b, y), the cell (a, colour_of(b, y)) swaps with
(b, colour_of(a, x)), a pairing of idempotent-backed mutual inverses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bands import ZeroRectBand, to_semigroup
from .errors import (
    BudgetExhausted,
    IndexOutOfRange,
    MalformedInstance,
    NotAMatching,
    ParseError,
    PlanInstanceMismatch,
    WellDefinednessViolation,
)
from .matching import Matching, verify_involution_matching, verify_permutation_matching

Ball = tuple[int, int]  # (girl, colour)


@dataclass(frozen=True)
class ColourInstance:
    m: int  # girls
    n: int  # colours
    balls: tuple[Ball, ...]
    provenance: tuple[tuple[int, int], ...] | None = None

    def validate(self) -> None:
        if len(self.balls) != self.m * self.n:
            raise MalformedInstance(
                f"{len(self.balls)} balls for an {self.m} x {self.n} instance"
            )
        per_girl = [0] * self.m
        per_colour = [0] * self.n
        for girl, colour in self.balls:
            if not (0 <= girl < self.m and 0 <= colour < self.n):
                raise MalformedInstance(f"ball ({girl}, {colour}) out of range")
            per_girl[girl] += 1
            per_colour[colour] += 1
        if any(c != self.n for c in per_girl):
            raise MalformedInstance("some girl does not hold exactly n balls")
        if any(c != self.m for c in per_colour):
            raise MalformedInstance("some colour does not have exactly m balls")


@dataclass(frozen=True)
class ExchangePlan:
    """One-shot pairing of balls; fixed points are vacuous exchanges."""

    pairing: tuple[int, ...]

    def validate(self, n_balls: int) -> None:
        if len(self.pairing) != n_balls:
            raise IndexOutOfRange(
                f"plan covers {len(self.pairing)} balls, expected {n_balls}"
            )
        for i, j in enumerate(self.pairing):
            if not 0 <= j < n_balls:
                raise IndexOutOfRange(f"ball index {j} out of range")
            if self.pairing[j] != i:
                raise PlanInstanceMismatch("pairing is not an involution")

    def exchanges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.pairing) if i < j]


def instance_from_matching(band: ZeroRectBand, phi) -> ColourInstance:
    """One ball per cell: girl i's ball for column x has the colour of the
    second coordinate of the matching's image of (i, x)."""
    sg = to_semigroup(band)
    if phi[0] != 0 or not verify_permutation_matching(sg, phi):
        raise NotAMatching("phi is not a matching of the band fixing 0")
    balls = []
    provenance = []
    for a in range(band.m):
        for x in range(band.n):
            image = band.cell_of(phi[band.cell_index(a, x)])
            balls.append((a, image[1]))
            provenance.append((a, x))
    inst = ColourInstance(band.m, band.n, tuple(balls), tuple(provenance))
    inst.validate()
    return inst


@dataclass
class SolveResult:
    status: str  # "solved" | "unsolvable" | "budget_exhausted"
    plan: ExchangePlan | None
    nodes: int


def solve(instance: ColourInstance, budget: int | None = None) -> SolveResult:
    """Exact backtracking over ball pairings.

    Branches on the lowest unpaired ball, trying partners in index order
    and skipping partners equivalent under (owner, colour).  ``budget``
    caps the number of pairings tried; exceeding it yields the explicit
    "budget_exhausted" status, which is not a solvability verdict.
    """
    instance.validate()
    total = instance.m * instance.n
    owner = [g for g, _ in instance.balls]
    colour = [c for _, c in instance.balls]
    # need[g][c]: girl g still lacks colour c among her post-exchange balls
    need = [[True] * instance.n for _ in range(instance.m)]
    pairing = [-1] * total
    nodes = 0

    def place(start: int) -> bool:
        nonlocal nodes
        i = start
        while i < total and pairing[i] != -1:
            i += 1
        if i == total:
            return True
        gi, ci = owner[i], colour[i]
        tried: set[tuple[int, int]] = set()
        for j in range(i, total):
            if pairing[j] != -1:
                continue
            gj, cj = owner[j], colour[j]
            if (gj, cj) in tried:
                continue
            if i == j:
                ok = need[gi][cj]
            elif gi == gj and ci == cj:
                # pairing two same-colour balls of one girl hands her that
                # colour twice; both reads below would hit one need cell
                ok = False
            else:
                ok = need[gi][cj] and need[gj][ci]
            if not ok:
                continue
            tried.add((gj, cj))
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExhausted(f"no verdict within {budget} nodes")
            pairing[i], pairing[j] = j, i
            need[gi][cj] = False
            if i != j:
                need[gj][ci] = False
            if place(i + 1):
                return True
            pairing[i] = pairing[j] = -1
            need[gi][cj] = True
            if i != j:
                need[gj][ci] = True
        return False

    try:
        solved = place(0)
    except BudgetExhausted:
        return SolveResult("budget_exhausted", None, nodes)
    if not solved:
        return SolveResult("unsolvable", None, nodes)
    plan = ExchangePlan(tuple(pairing))
    return SolveResult("solved", plan, nodes)


def verify_plan(instance: ColourInstance, plan: ExchangePlan) -> bool:
    """Apply the exchanges; true iff every girl ends with exactly one ball
    of each colour."""
    instance.validate()
    plan.validate(len(instance.balls))
    counts = [[0] * instance.n for _ in range(instance.m)]
    for i, j in enumerate(plan.pairing):
        girl = instance.balls[i][0]
        counts[girl][instance.balls[j][1]] += 1
    return all(c == 1 for row in counts for c in row)


def involution_from_plan(
    band: ZeroRectBand, phi, instance: ColourInstance, plan: ExchangePlan
) -> Matching:
    """Involution matching of the band induced by a verified plan.

    Raises WellDefinednessViolation when the plan does not actually align
    the instance (colliding or incomplete cell assignments -- the failure
    that a verified plan rules out).
    """
    if instance.provenance is None:
        raise PlanInstanceMismatch("instance carries no ball provenance")
    sg = to_semigroup(band)
    if phi[0] != 0 or not verify_permutation_matching(sg, phi):
        raise NotAMatching("phi is not a matching of the band fixing 0")
    total = band.m * band.n
    if len(instance.balls) != total or len(instance.provenance) != total:
        raise PlanInstanceMismatch("instance does not fit the band")
    for k, (a, x) in enumerate(instance.provenance):
        expected = (a, band.cell_of(phi[band.cell_index(a, x)])[1])
        if instance.balls[k] != expected:
            raise PlanInstanceMismatch(
                f"ball {k} does not originate from the given matching"
            )
    plan.validate(total)

    assignment: dict[tuple[int, int], tuple[int, int]] = {}
    for x_ball in range(total):
        y_ball = plan.pairing[x_ball]
        a = instance.balls[x_ball][0]
        b = instance.balls[y_ball][0]
        source = (a, instance.balls[y_ball][1])
        target = (b, instance.balls[x_ball][1])
        if assignment.setdefault(source, target) != target:
            raise WellDefinednessViolation(
                f"cell {source} received two images"
            )
    if len(assignment) != total:
        raise WellDefinednessViolation(
            f"only {len(assignment)} of {total} cells were assigned"
        )
    p = [0] * band.order
    for (i, j), (k, l) in assignment.items():
        p[band.cell_index(i, j)] = band.cell_index(k, l)
    if not verify_involution_matching(sg, p):
        raise WellDefinednessViolation(
            "induced map is not an involution matching"
        )
    return tuple(p)


# ---------------------------------------------------------------------------
# Text formats
#
#   instance: line 1 "m n"; then m*n lines "girl colour"
#   plan:     "i j" exchange lines, fixed points omitted


def parse_instance(text: str) -> ColourInstance:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty input")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError(f"bad instance header: {lines[0]!r}")
    try:
        m, n = int(head[0]), int(head[1])
        balls = []
        for ln in lines[1:]:
            g, c = ln.split()
            balls.append((int(g), int(c)))
    except ValueError as exc:
        raise ParseError(f"bad instance line: {exc}") from exc
    inst = ColourInstance(m, n, tuple(balls))
    try:
        inst.validate()
    except MalformedInstance as exc:
        raise ParseError(str(exc)) from exc
    return inst


def format_instance(instance: ColourInstance) -> str:
    out = [f"{instance.m} {instance.n}"]
    out.extend(f"{g} {c}" for g, c in instance.balls)
    return "\n".join(out) + "\n"


def format_plan(plan: ExchangePlan) -> str:
    lines = [f"{i} {j}" for i, j in plan.exchanges()]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_plan(text: str, n_balls: int) -> ExchangePlan:
    pairing = list(range(n_balls))
    touched: set[int] = set()
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"bad plan line: {ln!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"bad plan line: {ln!r}") from exc
        if not (0 <= i < n_balls and 0 <= j < n_balls):
            raise IndexOutOfRange(f"ball index out of range in {ln!r}")
        if i in touched or j in touched or i == j:
            raise ParseError(f"ball reused in {ln!r}")
        touched.update((i, j))
        pairing[i], pairing[j] = j, i
    return ExchangePlan(tuple(pairing))
