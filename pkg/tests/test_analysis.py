import random
from fractions import Fraction
from itertools import product

import pytest

from genconcept.analysis import (
    GenKind,
    build_phi,
    build_psi,
    check_surjective,
    classify_group,
    nested_structure,
    projection_classes,
    size_report,
    verify_exists_distributive,
    verify_forall_theorem,
)
from genconcept.context import apposition
from genconcept.errors import PreconditionError
from genconcept.generalize import (
    Axis,
    Group,
    GroupingScheme,
    Mode,
    generalize_attributes,
)
from genconcept.lattice import count_concepts, enumerate_concepts

from oracles import all_extents, random_context, random_partition


class TestClassification:
    def test_alpha_group_e_is_approximation_with_witnesses(self, initlattice):
        members = initlattice.attribute_set(["a", "b", "c"])
        got = classify_group(initlattice, members, Mode.ALPHA, Fraction(3, 5))
        assert got.kind is GenKind.APPROXIMATION
        b = initlattice.attribute_index("b")
        obj4 = initlattice.object_index("4")
        obj5 = initlattice.object_index("5")
        # object 4 has b but misses the 60% bar; object 5 clears it without b
        assert (b, obj4) in got.not_generalization
        assert (b, obj5) in got.not_specialization

    def test_exists_groups_generalize(self, initlattice, scheme_exists_abcd):
        for group in scheme_exists_abcd.groups:
            got = classify_group(initlattice, group.members, Mode.EXISTS)
            assert got.kind in (GenKind.GENERALIZATION, GenKind.EQUIVALENT)
            assert not got.not_generalization

    def test_forall_groups_specialize(self, initlattice, scheme_forall_stuv):
        for group in scheme_forall_stuv.groups:
            got = classify_group(initlattice, group.members, Mode.FORALL)
            assert got.kind in (GenKind.SPECIALIZATION, GenKind.EQUIVALENT)
            assert not got.not_specialization

    def test_singleton_group_equivalent(self, initlattice):
        for mode, alpha in (
            (Mode.EXISTS, None),
            (Mode.FORALL, None),
            (Mode.ALPHA, Fraction(2, 3)),
        ):
            got = classify_group(initlattice, {3}, mode, alpha)
            assert got.kind is GenKind.EQUIVALENT

    def test_random_groups_obey_mode_bounds(self):
        rng = random.Random(7)
        for _ in range(100):
            ctx = random_context(rng)
            size = rng.randint(1, ctx.n_attributes)
            members = frozenset(rng.sample(range(ctx.n_attributes), size))
            exists = classify_group(ctx, members, Mode.EXISTS)
            assert exists.kind in (GenKind.GENERALIZATION, GenKind.EQUIVALENT)
            forall = classify_group(ctx, members, Mode.FORALL)
            assert forall.kind in (GenKind.SPECIALIZATION, GenKind.EQUIVALENT)

    def test_empty_group_rejected(self, initlattice):
        with pytest.raises(PreconditionError):
            classify_group(initlattice, (), Mode.EXISTS)


def identity_scheme(ctx):
    return GroupingScheme(
        Axis.ATTRIBUTES,
        Mode.EXISTS,
        tuple(Group(f"{n}_g", frozenset({i})) for i, n in enumerate(ctx.attributes)),
    )


class TestOrderMaps:
    @pytest.fixture
    def smallcxt_pair(self, smallcxt, scheme_merge_m12):
        target_ctx = generalize_attributes(smallcxt, scheme_merge_m12)
        return (
            enumerate_concepts(smallcxt),
            enumerate_concepts(target_ctx),
            scheme_merge_m12,
        )

    def test_phi_le_psi_pointwise(self, smallcxt_pair):
        source, target, scheme = smallcxt_pair
        phi = build_phi(source, target, scheme)
        psi = build_psi(source, target, scheme)
        for i in range(len(source)):
            assert target.leq_index(phi.mapping[i], psi.mapping[i])

    def test_both_order_preserving(self, smallcxt_pair):
        source, target, scheme = smallcxt_pair
        for cmap in (
            build_phi(source, target, scheme),
            build_psi(source, target, scheme),
        ):
            for i, j in product(range(len(source)), repeat=2):
                if source.leq_index(i, j):
                    assert target.leq_index(cmap.mapping[i], cmap.mapping[j])

    def test_both_non_surjective_on_counterexample(self, smallcxt_pair):
        source, target, scheme = smallcxt_pair
        phi_onto, phi_missing = check_surjective(build_phi(source, target, scheme))
        psi_onto, psi_missing = check_surjective(build_psi(source, target, scheme))
        assert not phi_onto and phi_missing
        assert not psi_onto and psi_missing

    def test_identity_grouping_is_isomorphism(self, initlattice):
        scheme = identity_scheme(initlattice)
        source = enumerate_concepts(initlattice)
        target = enumerate_concepts(generalize_attributes(initlattice, scheme))
        phi = build_phi(source, target, scheme)
        psi = build_psi(source, target, scheme)
        assert phi.mapping == psi.mapping
        assert sorted(phi.mapping) == list(range(len(target)))
        assert check_surjective(phi)[0]

    def test_phi_definition_matches_join_of_object_concepts(self, smallcxt_pair):
        source, target, scheme = smallcxt_pair
        phi = build_phi(source, target, scheme)
        for i in range(len(source)):
            extent = source.concepts[i].extent
            expected = target.join_index(target.gamma[g] for g in extent)
            assert phi.mapping[i] == expected

    def test_psi_definition_matches_meet_of_attribute_concepts(self, smallcxt_pair):
        source, target, scheme = smallcxt_pair
        psi = build_psi(source, target, scheme)
        member_to_group = scheme.member_to_group(source.context)
        for i in range(len(source)):
            intent = source.concepts[i].intent
            expected = target.meet_index(
                target.mu[member_to_group[m]] for m in intent
            )
            assert psi.mapping[i] == expected

    def test_empty_intent_maps_to_target_top_under_psi(self, smallcxt_pair):
        source, target, scheme = smallcxt_pair
        psi = build_psi(source, target, scheme)
        for i in range(len(source)):
            if not source.concepts[i].intent:
                assert psi.mapping[i] == target.top

    def test_non_partition_scheme_rejected(self, initlattice):
        scheme = GroupingScheme(
            Axis.ATTRIBUTES,
            Mode.EXISTS,
            (Group("x", frozenset({0, 1})), Group("y", frozenset({1, 2}))),
            keep_ungrouped=True,
        )
        source = enumerate_concepts(initlattice)
        target = enumerate_concepts(generalize_attributes(initlattice, scheme))
        with pytest.raises(PreconditionError):
            build_phi(source, target, scheme)

    def test_mismatched_target_rejected(self, smallcxt, initlattice, scheme_merge_m12):
        source = enumerate_concepts(smallcxt)
        target = enumerate_concepts(initlattice)
        with pytest.raises(PreconditionError):
            build_phi(source, target, scheme_merge_m12)

    def test_psi_surjective_when_groups_have_greatest_elements(self):
        """Case-1 style context: one member column dominates each group."""
        from genconcept.context import FormalContext

        # columns: m1 ⊇ m2 and m3 ⊇ m4, so each group keeps a greatest member
        ctx = FormalContext(
            ("g1", "g2", "g3", "g4"),
            ("m1", "m2", "m3", "m4"),
            (0b0011, 0b0001, 0b1100, 0b1111),
        )
        scheme = GroupingScheme(
            Axis.ATTRIBUTES,
            Mode.EXISTS,
            (Group("p", frozenset({0, 1})), Group("q", frozenset({2, 3}))),
        )
        source = enumerate_concepts(ctx)
        target = enumerate_concepts(generalize_attributes(ctx, scheme))
        onto, missing = check_surjective(build_psi(source, target, scheme))
        assert onto and not missing


class TestProjectionClasses:
    @pytest.mark.parametrize(
        "scheme_fixture",
        ["scheme_exists_abcd", "scheme_forall_stuv", "scheme_alpha_efh"],
    )
    def test_class_count_equals_projected_lattice(
        self, request, initlattice, scheme_fixture
    ):
        scheme = request.getfixturevalue(scheme_fixture)
        generalized = generalize_attributes(initlattice, scheme)
        apposed = apposition(initlattice, generalized)
        lat = enumerate_concepts(apposed)
        group_positions = range(8, apposed.n_attributes)
        classes = projection_classes(lat, group_positions)
        assert len(classes) == count_concepts(generalized)
        assert sum(len(members) for _, members in classes) == len(lat)

    def test_projection_onto_everything_gives_singletons(self, initlattice):
        lat = enumerate_concepts(initlattice)
        classes = projection_classes(lat, range(8))
        assert all(len(members) == 1 for _, members in classes)

    def test_projection_onto_nothing_gives_one_class(self, initlattice):
        lat = enumerate_concepts(initlattice)
        classes = projection_classes(lat, ())
        assert len(classes) == 1


class TestForallTheorem:
    def test_initlattice_sizes(self, initlattice, scheme_forall_stuv):
        report = verify_forall_theorem(initlattice, scheme_forall_stuv)
        assert report.sizes.size_before == count_concepts(initlattice)
        assert report.size_apposed == report.sizes.size_before
        assert report.sizes.size_after <= report.sizes.size_before
        assert all(ok for _, ok in report.group_extents)

    def test_singleton_groups_equality(self, initlattice):
        scheme = GroupingScheme(
            Axis.ATTRIBUTES,
            Mode.FORALL,
            tuple(
                Group(f"{n}_g", frozenset({i}))
                for i, n in enumerate(initlattice.attributes)
            ),
        )
        report = verify_forall_theorem(initlattice, scheme)
        assert report.sizes.size_before == report.sizes.size_after == report.size_apposed

    def test_random_pairs_extent_set_equality(self):
        rng = random.Random(11)
        for _ in range(30):
            ctx = random_context(rng, max_objects=8, max_attributes=6)
            parts = random_partition(rng, ctx.n_attributes)
            scheme = GroupingScheme(
                Axis.ATTRIBUTES,
                Mode.FORALL,
                tuple(Group(f"s{i}", frozenset(p)) for i, p in enumerate(parts)),
            )
            report = verify_forall_theorem(ctx, scheme)
            assert report.sizes.size_after <= report.sizes.size_before
            # apposition preserves the extent set exactly, not just the count
            apposed = apposition(ctx, generalize_attributes(ctx, scheme))
            assert all_extents(apposed) == all_extents(ctx)

    def test_wrong_mode_rejected(self, initlattice, scheme_exists_abcd):
        with pytest.raises(PreconditionError):
            verify_forall_theorem(initlattice, scheme_exists_abcd)


class TestExistsDistributive:
    def test_contranominal_merge_shrinks_to_two(self, contranominal):
        ctx = contranominal(3)
        scheme = GroupingScheme(
            Axis.ATTRIBUTES,
            Mode.EXISTS,
            (Group("m12", frozenset({0, 1})),),
            keep_ungrouped=True,
        )
        report = verify_exists_distributive(ctx, scheme)
        assert report.applicable
        assert report.sizes.size_before == 8
        assert report.sizes.size_after == 2
        assert all(ok for _, ok in report.group_extents)

    def test_smallcxt_is_inapplicable_but_grows(self, smallcxt, scheme_merge_m12):
        report = verify_exists_distributive(smallcxt, scheme_merge_m12)
        assert not report.applicable
        # outside the theorem's hypotheses the count can grow: 7 -> 8
        sizes = size_report(smallcxt, scheme_merge_m12)
        assert (sizes.size_before, sizes.size_after) == (7, 8)
        assert sizes.delta == 1

    def test_chain_with_padding_attribute_is_applicable(self):
        from genconcept.context import FormalContext

        # chain rows plus one never-held attribute, which keeps every row
        # different from the full intersection convention
        n = 4
        ctx = FormalContext(
            tuple(f"g{i}" for i in range(n)),
            tuple(f"m{j}" for j in range(n + 1)),
            tuple((1 << (i + 1)) - 1 for i in range(n)),
        )
        scheme = GroupingScheme(
            Axis.ATTRIBUTES,
            Mode.EXISTS,
            (Group("s", frozenset({1, 2})),),
            keep_ungrouped=True,
        )
        report = verify_exists_distributive(ctx, scheme)
        assert report.applicable
        assert report.sizes.size_after <= report.sizes.size_before

    def test_random_groupings_on_boolean_context(self, contranominal):
        rng = random.Random(23)
        ctx = contranominal(4)
        for _ in range(50):
            parts = random_partition(rng, 4)
            scheme = GroupingScheme(
                Axis.ATTRIBUTES,
                Mode.EXISTS,
                tuple(Group(f"s{i}", frozenset(p)) for i, p in enumerate(parts)),
            )
            report = verify_exists_distributive(ctx, scheme)
            assert report.applicable
            assert report.sizes.size_after <= report.sizes.size_before


class TestSizeReport:
    def test_ratio_identity(self, smallcxt, scheme_merge_m12):
        report = size_report(smallcxt, scheme_merge_m12)
        assert report.ratio * report.size_after == report.size_before

    def test_sequential_steps_logged(self, initlattice, scheme_exists_abcd):
        second = GroupingScheme(
            Axis.ATTRIBUTES,
            Mode.EXISTS,
            (Group("AB", frozenset({0, 1})), Group("CD", frozenset({2, 3}))),
        )
        report = size_report(initlattice, [scheme_exists_abcd, second])
        assert len(report.steps) == 2
        assert report.steps[0].size_before == report.size_before
        assert report.steps[-1].size_after == report.size_after

    def test_json_shape(self, smallcxt, scheme_merge_m12):
        doc = size_report(smallcxt, scheme_merge_m12).to_json_dict()
        assert doc["delta"] == 1
        assert doc["ratio"] == "7/8"


class TestNestedStructure:
    def test_realized_cells_count_apposed_concepts(self, initlattice, scheme_forall_stuv):
        doc = nested_structure(initlattice, scheme_forall_stuv)
        apposed = apposition(
            initlattice, generalize_attributes(initlattice, scheme_forall_stuv)
        )
        total_realized = sum(len(cell["realized"]) for cell in doc["cells"])
        assert total_realized == count_concepts(apposed)
        assert len(doc["cells"]) == len(doc["outer"]["concepts"])
        assert doc["format_version"] == 1

    def test_outer_lattice_matches_generalized_context(
        self, initlattice, scheme_exists_abcd
    ):
        doc = nested_structure(initlattice, scheme_exists_abcd)
        generalized = generalize_attributes(initlattice, scheme_exists_abcd)
        assert len(doc["outer"]["concepts"]) == count_concepts(generalized)
        assert len(doc["inner"]["concepts"]) == count_concepts(initlattice)


class TestSpecialCaseSizeArguments:
    def test_extent_columns_imply_non_increase(self):
        """Groups whose union columns are already extents cannot add concepts."""
        rng = random.Random(41)
        checked = 0
        while checked < 20:
            ctx = random_context(rng, max_objects=7, max_attributes=6)
            parts = random_partition(rng, ctx.n_attributes)
            scheme = GroupingScheme(
                Axis.ATTRIBUTES,
                Mode.EXISTS,
                tuple(Group(f"s{i}", frozenset(p)) for i, p in enumerate(parts)),
            )
            merged = generalize_attributes(ctx, scheme)
            columns_are_extents = all(
                ctx.extent_mask(ctx.intent_mask(col)) == col for col in merged.cols
            )
            if not columns_are_extents:
                continue
            checked += 1
            assert count_concepts(merged) <= count_concepts(ctx)
            assert {
                frozenset(c.extent) for c in enumerate_concepts(merged).concepts
            } <= {frozenset(c.extent) for c in enumerate_concepts(ctx).concepts}

    def test_dominant_member_groups_match_projection(self):
        """With a greatest member per group, grouping equals projecting onto
        those members."""
        rng = random.Random(59)
        for _ in range(20):
            ctx = random_context(rng, max_objects=7, max_attributes=6)
            parts = random_partition(rng, ctx.n_attributes)
            # make the first member of each part dominate by giving it the
            # union of its group's columns
            rows = list(ctx.rows)
            leaders = []
            for part in parts:
                leader = part[0]
                leaders.append(leader)
                for g in range(ctx.n_objects):
                    if any(rows[g] >> m & 1 for m in part):
                        rows[g] |= 1 << leader
            from genconcept.context import FormalContext

            boosted = FormalContext(ctx.objects, ctx.attributes, tuple(rows))
            scheme = GroupingScheme(
                Axis.ATTRIBUTES,
                Mode.EXISTS,
                tuple(Group(f"s{i}", frozenset(p)) for i, p in enumerate(parts)),
            )
            merged = generalize_attributes(boosted, scheme)
            projected = boosted.project_attributes(sorted(leaders))
            assert count_concepts(merged) == count_concepts(projected)
            assert {c.extent for c in enumerate_concepts(merged).concepts} == {
                c.extent for c in enumerate_concepts(projected).concepts
            }
            assert count_concepts(merged) <= count_concepts(boosted)
