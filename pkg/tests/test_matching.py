"""Matching engine: decisions, certificates, lifts, cycle splitting,
the involution gadget, and the cross-checking report."""

import random

import pytest

import corpus
from invmatch import bands, core, matching
from invmatch.errors import (
    DomainMismatch,
    NoInverseInTargetCell,
    NotAPermutation,
)
from invmatch.transformations import enumerate_family


def counterexample():
    return bands.to_semigroup(bands.no_matching_band())


class TestInverseGraph:
    def test_counterexample_degrees(self):
        sg = counterexample()
        g = matching.build_inverse_graph(sg)
        a = sg.labels.index("(2,2)")
        assert g.degree(a) == 1
        assert a not in g.self_eligible
        assert sg.labels_of(g.neighbors[a]) == ["(1,1)"]

    def test_semilattice_graph_is_edgeless(self):
        s = corpus.chain_semilattice(4)
        g = matching.build_inverse_graph(s)
        assert all(not ns for ns in g.neighbors)
        assert g.self_eligible == frozenset(range(4))

    def test_t3_identity_has_degree_one(self):
        data = enumerate_family("Tn", 3)
        g = matching.build_inverse_graph(data.semigroup)
        assert g.n == 27
        ident = data.maps.index((0, 1, 2))
        # oracle: exhaustive V(a) scan
        assert len(core.inverses_of(data.semigroup, ident)) == 1
        assert g.degree(ident) == 1

    def test_degree_equals_inverse_count(self):
        for seed in range(25):
            s = corpus.corpus_semigroup(seed)
            g = matching.build_inverse_graph(s)
            for a in range(s.order):
                assert g.degree(a) == len(core.inverses_of(s, a))


class TestFindPermutationMatching:
    def test_counterexample_has_none(self):
        assert matching.find_permutation_matching(counterexample()) is None

    def test_full_idempotent_band(self):
        band = bands.band_from_rows([[1, 1], [1, 1]])
        sg = bands.to_semigroup(band)
        p = matching.find_permutation_matching(sg)
        assert p is not None
        assert matching.verify_permutation_matching(sg, p)
        # the identity is itself an acceptable matching here
        assert matching.verify_permutation_matching(sg, tuple(range(sg.order)))

    def test_t3_has_matching(self):
        data = enumerate_family("Tn", 3)
        p = matching.find_permutation_matching(data.semigroup)
        assert p is not None
        assert matching.verify_permutation_matching(data.semigroup, p)


class TestHallViolator:
    def test_counterexample_certificate(self):
        sg = counterexample()
        viol = matching.hall_violator(sg)
        assert sorted(sg.labels_of(viol.elements)) == ["(2,2)", "(2,3)"]
        assert sg.labels_of(viol.image) == ["(1,1)"]

    def test_unions_of_groups_have_no_violator(self):
        for s in [
            corpus.cyclic_group(6),
            corpus.rectangular_band(2, 3),
            corpus.completely_simple(
                corpus.cyclic_group(2), 2, 2, [[0, 0], [0, 1]]
            ),
        ]:
            assert matching.hall_violator(s) is None
            assert matching.find_permutation_matching(s) is not None

    def test_certificate_versus_small_subset_scan(self):
        # when no violator is reported, no subset of size <= 2 violates
        # Hall's condition; when one is reported it checks out exactly
        for seed in range(80):
            s = corpus.corpus_semigroup(seed)
            vsets = core.inverse_sets(s)
            viol = matching.hall_violator(s)
            if viol is None:
                for a in range(s.order):
                    assert len(vsets[a]) >= 1
                    for b in range(a + 1, s.order):
                        assert len(set(vsets[a]) | set(vsets[b])) >= 2
            else:
                union = sorted({v for a in viol.elements for v in vsets[a]})
                assert union == sorted(viol.image)
                assert len(viol.elements) > len(viol.image)

    def test_duality_with_matching(self):
        for seed in range(80):
            s = corpus.corpus_semigroup(seed)
            present = matching.find_permutation_matching(s) is not None
            assert present == (matching.hall_violator(s) is None)


class TestVerify:
    def test_identity_on_x_cubed_band(self):
        s = corpus.rectangular_band(3, 2)
        assert matching.verify_permutation_matching(s, tuple(range(s.order)))

    def test_any_bijection_on_rectangular_band(self):
        s = corpus.rectangular_band(2, 3)
        rng = random.Random(5)
        perm = list(range(s.order))
        for _ in range(10):
            rng.shuffle(perm)
            assert matching.verify_permutation_matching(s, tuple(perm))

    def test_swapping_non_inverses_fails(self):
        s = corpus.chain_semilattice(4)
        p = [0, 1, 2, 3]
        p[0], p[3] = p[3], p[0]
        assert not matching.verify_permutation_matching(s, tuple(p))

    def test_rejects_non_permutation(self):
        s = corpus.chain_semilattice(3)
        with pytest.raises(NotAPermutation):
            matching.verify_permutation_matching(s, (0, 0, 1))

    def test_identity_verifies_iff_every_cube_fixes(self):
        for seed in range(40):
            s = corpus.corpus_semigroup(seed)
            t = s.table
            cube_law = all(t[t[x][x]][x] == x for x in range(s.order))
            ident = tuple(range(s.order))
            assert matching.verify_permutation_matching(s, ident) == cube_law

    def test_inverse_semigroups_have_the_unique_inverse_matching(self):
        for seed in range(60):
            s = corpus.corpus_semigroup(seed)
            rep = core.structure_report(s)
            if not rep.inverse:
                continue
            expected = tuple(core.inverses_of(s, a)[0] for a in range(s.order))
            assert matching.find_permutation_matching(s) == expected
            assert matching.find_involution_matching(s) == expected


class TestHPreserving:
    def test_identity_on_band(self):
        s = corpus.rectangular_band(2, 2)
        assert matching.is_h_preserving(s, tuple(range(s.order)))

    def test_group_inverse_matching_on_union_of_groups(self):
        s = corpus.completely_simple(
            corpus.cyclic_group(2), 2, 2, [[0, 0], [0, 0]]
        )
        t = s.table
        p = []
        for a in range(s.order):
            candidates = [
                b
                for b in core.inverses_of(s, a)
                if t[a][b] == t[b][a]
            ]
            # group inverse: commuting inverse inside the same subgroup
            chosen = [b for b in candidates if t[t[a][b]][a] == a]
            p.append(chosen[0])
        assert matching.verify_permutation_matching(s, tuple(p))
        assert matching.is_h_preserving(s, tuple(p))

    def test_swap_within_h_cell_stays_preserving(self):
        s = corpus.completely_simple(
            corpus.cyclic_group(2), 2, 2, [[0, 0], [0, 0]]
        )
        egg = core.green_relations(s)
        rep = matching.equivalence_report(s)
        p = list(rep.h_preserving)
        cell = egg.d_classes[0].grid[0][0]
        a1, a2 = cell[0], cell[1]
        p[a1], p[a2] = p[a2], p[a1]
        assert matching.is_h_preserving(s, tuple(p), egg)


class TestLift:
    def test_group_lifts_to_group_inverse(self):
        g = corpus.cyclic_group(4)
        (factor,) = core.principal_factors(g)
        q = (0, 1)  # identity on the 1x1 quotient band
        lifted = matching.lift_h_matching(factor, q)
        assert lifted == (0, 3, 2, 1)  # additive inverses mod 4

    def test_transpose_on_trivial_groups_lifts_to_itself(self):
        s = corpus.rectangular_band(2, 2)
        (factor,) = core.principal_factors(s)
        # factor is zero-free; quotient cells biject with elements
        q = [0] * 5
        for i in range(2):
            for j in range(2):
                q[1 + i * 2 + j] = 1 + j * 2 + i
        lifted = matching.lift_h_matching(factor, tuple(q))
        expected = tuple(
            (x % 2) * 2 + x // 2 for x in range(4)
        )  # transpose on (i, j) <-> index i*2+j
        assert lifted == expected

    def test_brandt_lift_recovers_unique_inverse_matching(self):
        s = corpus.brandt_b2()
        factors = core.principal_factors(s)
        f = next(g for g in factors if len(g.members) > 1)
        m, n_cols, pattern = matching.quotient_pattern(f)
        witness = matching.pattern_matching(pattern)
        q = [0] * (m * n_cols + 1)
        for (i, j), (k, l) in witness.items():
            q[1 + i * n_cols + j] = 1 + k * n_cols + l
        lifted = matching.lift_h_matching(f, tuple(q))
        for x in range(f.semigroup.order):
            assert core.inverses_of(f.semigroup, x) == [lifted[x]]

    def test_bad_quotient_matching_raises(self):
        s = corpus.brandt_b2()
        f = next(
            g for g in core.principal_factors(s) if len(g.members) > 1
        )
        # send cell (0,0) to the non-group cell (0,1): no inverse lives there
        q = [0, 2, 1, 4, 3]
        with pytest.raises(NoInverseInTargetCell):
            matching.lift_h_matching(f, tuple(q))

    def test_lift_is_h_preserving(self):
        for seed in range(30):
            s = corpus.corpus_semigroup(seed)
            rep = matching.equivalence_report(s)
            if rep.h_preserving is not None:
                assert matching.is_h_preserving(s, rep.h_preserving)


class TestAssemble:
    def test_single_class_identity(self):
        s = corpus.rectangular_band(2, 2)
        p = matching.find_permutation_matching(s)
        assert matching.assemble_global_matching(s, [p]) == p

    def test_t3_assembly(self):
        data = enumerate_family("Tn", 3)
        parts = [
            matching.find_permutation_matching(f.semigroup)
            for f in core.principal_factors(data.semigroup)
        ]
        p = matching.assemble_global_matching(data.semigroup, parts)
        assert matching.verify_permutation_matching(data.semigroup, p)

    def test_missing_part_raises(self):
        data = enumerate_family("Tn", 3)
        with pytest.raises(DomainMismatch):
            matching.assemble_global_matching(data.semigroup, [])

    def test_involution_parts_give_involution(self):
        sg = bands.to_semigroup(bands.band_from_rows([[1, 1], [1, 1]]))
        factors = core.principal_factors(sg)
        parts = [
            matching.involution_backtracking(f.semigroup) for f in factors
        ]
        assert all(part is not None for part in parts)
        p = matching.assemble_global_matching(sg, parts)
        assert matching.verify_involution_matching(sg, p)


class TestInvolutionFromCycles:
    def test_two_cycles_returned_unchanged(self):
        s = corpus.brandt_b2()
        p = matching.find_permutation_matching(s)
        assert matching.verify_involution_matching(s, p)
        assert matching.involution_from_cycles(s, p) == p

    def test_odd_cycle_of_idempotents_splits(self):
        s = corpus.rectangular_band(3, 3)
        # cycle three diagonal idempotents, fix the rest; every bijection
        # of a rectangular band is a matching
        p = list(range(s.order))
        d0, d1, d2 = 0 * 3 + 0, 1 * 3 + 1, 2 * 3 + 2
        p[d0], p[d1], p[d2] = d1, d2, d0
        assert matching.verify_permutation_matching(s, tuple(p))
        out = matching.involution_from_cycles(s, tuple(p))
        assert out is not None
        assert matching.verify_involution_matching(s, out)
        assert out[d0] in (d0, d1, d2)

    def test_idempotent_free_odd_cycle_blocks_this_p_only(self):
        # off-diagonal pattern: the three diagonal cells are pairwise
        # mutual inverses but none is self-eligible
        band = bands.band_from_rows(
            [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
        )
        sg = bands.to_semigroup(band)
        p = list(range(sg.order))
        d0 = band.cell_index(0, 0)
        d1 = band.cell_index(1, 1)
        d2 = band.cell_index(2, 2)
        p[d0], p[d1], p[d2] = d1, d2, d0
        assert matching.verify_permutation_matching(sg, tuple(p))
        assert matching.involution_from_cycles(sg, tuple(p)) is None
        # ... but the semigroup still has an involution matching
        inv = matching.find_involution_matching(sg)
        assert inv is not None
        assert matching.verify_involution_matching(sg, inv)

    def test_success_implies_gadget_present(self):
        for seed in range(50):
            s = corpus.corpus_semigroup(seed)
            p = matching.find_permutation_matching(s)
            if p is None:
                continue
            split = matching.involution_from_cycles(s, p)
            if split is not None:
                assert matching.verify_involution_matching(s, split)
                assert matching.find_involution_matching(s) is not None


class TestFindInvolutionMatching:
    def test_counterexample_absent(self):
        assert matching.find_involution_matching(counterexample()) is None

    def test_semilattice_identity(self):
        s = corpus.chain_semilattice(5)
        assert matching.find_involution_matching(s) == tuple(range(5))

    def test_gadget_agrees_with_backtracking_oracle(self):
        for seed in range(120):
            s = corpus.corpus_semigroup(seed, max_order=10)
            gadget = matching.find_involution_matching(s)
            oracle = matching.involution_backtracking(s)
            assert (gadget is None) == (oracle is None), f"seed {seed}"
            if gadget is not None:
                assert matching.verify_involution_matching(s, gadget)
                assert matching.verify_involution_matching(s, oracle)

    def test_involution_implies_matching(self):
        for seed in range(60):
            s = corpus.corpus_semigroup(seed)
            if matching.find_involution_matching(s) is not None:
                assert matching.find_permutation_matching(s) is not None


class TestEquivalenceReport:
    def test_counterexample_all_negative(self):
        rep = matching.equivalence_report(counterexample())
        assert not rep.has_matching
        assert not rep.hall_ok
        assert rep.violator is not None
        assert not all(rep.factor_verdicts)
        assert not all(rep.quotient_verdicts)
        assert rep.h_preserving is None

    def test_t3_all_positive(self):
        data = enumerate_family("Tn", 3)
        rep = matching.equivalence_report(data.semigroup)
        assert rep.has_matching
        assert rep.hall_ok
        assert all(rep.factor_verdicts)
        assert all(rep.quotient_verdicts)
        assert matching.is_h_preserving(data.semigroup, rep.h_preserving)

    def test_corpus_raises_no_violations(self):
        for seed in range(150):
            matching.equivalence_report(corpus.corpus_semigroup(seed))

    def test_quotient_verdicts_match_band_route(self):
        for seed in range(40):
            s = corpus.corpus_semigroup(seed)
            factors = core.principal_factors(s)
            rep = matching.equivalence_report(s)
            for f, verdict in zip(factors, rep.quotient_verdicts):
                band = bands.h_quotient(f)
                via_band = (
                    matching.find_permutation_matching(bands.to_semigroup(band))
                    is not None
                )
                assert verdict == via_band


class TestDeterminism:
    def test_repeated_runs_identical(self):
        for seed in (3, 17, 40):
            s = corpus.corpus_semigroup(seed)
            assert matching.find_permutation_matching(
                s
            ) == matching.find_permutation_matching(s)
            assert matching.find_involution_matching(
                s
            ) == matching.find_involution_matching(s)
            first = matching.hall_violator(s)
            second = matching.hall_violator(s)
            assert (first is None) == (second is None)
            if first is not None:
                assert first.elements == second.elements
                assert first.image == second.image


class TestSerialization:
    def test_round_trip(self):
        p = (0, 2, 1, 3)
        text = matching.format_matching(p)
        assert matching.parse_matching(text, 4) == p
