"""Property-based checks of the algebraic invariants."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from genconcept.context import FormalContext, apposition
from genconcept.generalize import (
    Axis,
    Group,
    GroupingScheme,
    Mode,
    generalize_attributes,
    generalize_objects,
)
from genconcept.lattice import count_concepts, enumerate_concepts

from oracles import all_closed_intents


@st.composite
def contexts(draw, max_objects=7, max_attributes=7):
    n_g = draw(st.integers(1, max_objects))
    n_m = draw(st.integers(1, max_attributes))
    rows = draw(
        st.lists(
            st.integers(0, (1 << n_m) - 1), min_size=n_g, max_size=n_g
        )
    )
    return FormalContext(
        tuple(f"g{i}" for i in range(n_g)),
        tuple(f"m{j}" for j in range(n_m)),
        tuple(rows),
    )


@st.composite
def contexts_with_two_attr_sets(draw):
    ctx = draw(contexts())
    pick = st.sets(st.integers(0, ctx.n_attributes - 1), max_size=ctx.n_attributes)
    return ctx, frozenset(draw(pick)), frozenset(draw(pick))


@st.composite
def contexts_with_two_obj_sets(draw):
    ctx = draw(contexts())
    pick = st.sets(st.integers(0, ctx.n_objects - 1), max_size=ctx.n_objects)
    return ctx, frozenset(draw(pick)), frozenset(draw(pick))


@st.composite
def contexts_with_partitions(draw):
    ctx = draw(contexts(max_objects=6, max_attributes=6))
    labels = draw(
        st.lists(
            st.integers(0, ctx.n_attributes - 1),
            min_size=ctx.n_attributes,
            max_size=ctx.n_attributes,
        )
    )
    groups: dict[int, set[int]] = {}
    for m, label in enumerate(labels):
        groups.setdefault(label, set()).add(m)
    scheme = GroupingScheme(
        Axis.ATTRIBUTES,
        Mode.EXISTS,
        tuple(
            Group(f"s{k}", frozenset(members))
            for k, (_, members) in enumerate(sorted(groups.items()))
        ),
    )
    return ctx, scheme


@given(contexts_with_two_obj_sets())
def test_galois_antitone_on_objects(data):
    ctx, a1, a2 = data
    if a1 <= a2:
        assert ctx.derive_objects(a2) <= ctx.derive_objects(a1)
    both = a1 | a2
    assert ctx.derive_objects(both) <= ctx.derive_objects(a1)


@given(contexts_with_two_attr_sets())
def test_galois_antitone_on_attributes(data):
    ctx, b1, b2 = data
    if b1 <= b2:
        assert ctx.derive_attributes(b2) <= ctx.derive_attributes(b1)


@given(contexts_with_two_attr_sets())
def test_galois_adjunction(data):
    ctx, b, _ = data
    for a in (frozenset(), frozenset(range(0, ctx.n_objects, 2)), frozenset(range(ctx.n_objects))):
        lhs = a <= ctx.derive_attributes(b)
        rhs = b <= ctx.derive_objects(a)
        assert lhs == rhs


@given(contexts_with_two_attr_sets())
def test_closure_extensive_idempotent(data):
    ctx, b, _ = data
    closed = ctx.closure_attributes(b)
    assert b <= closed
    assert ctx.closure_attributes(closed) == closed


@given(contexts_with_two_attr_sets())
def test_support_invariant_under_closure(data):
    ctx, b, _ = data
    assert ctx.support(b) == ctx.support(ctx.closure_attributes(b))


@given(contexts(), contexts())
def test_apposition_project_roundtrip(first, second):
    if first.n_objects != second.n_objects:
        return
    second = FormalContext(first.objects, second.attributes, second.rows)
    merged = apposition(first, second)
    back = merged.project_attributes(range(first.n_attributes))
    assert back.rows == first.rows
    assert back.attributes == first.attributes


@settings(max_examples=40)
@given(contexts(max_objects=6, max_attributes=6))
def test_enumeration_matches_brute_force(ctx):
    lat = enumerate_concepts(ctx)
    assert {c.intent for c in lat.concepts} == all_closed_intents(ctx)
    assert count_concepts(ctx) == len(lat)


@settings(max_examples=40)
@given(contexts(max_objects=6, max_attributes=6), st.randoms(use_true_random=False))
def test_alpha_monotone_in_threshold(ctx, rng):
    size = rng.randint(1, ctx.n_attributes)
    members = frozenset(rng.sample(range(ctx.n_attributes), size))
    from genconcept.generalize import group_column

    previous = None
    for k in range(1, 9):
        col = group_column(ctx, members, Mode.ALPHA, Fraction(k, 8))
        if previous is not None:
            assert col & ~previous == 0  # raising the bar never adds objects
        previous = col


@settings(max_examples=40)
@given(contexts(max_objects=6, max_attributes=6), st.randoms(use_true_random=False))
def test_object_attribute_duality(ctx, rng):
    size = rng.randint(1, ctx.n_objects)
    members = frozenset(rng.sample(range(ctx.n_objects), size))
    for mode, alpha in ((Mode.EXISTS, None), (Mode.FORALL, None), (Mode.ALPHA, Fraction(1, 2))):
        scheme_obj = GroupingScheme(
            Axis.OBJECTS, mode, (Group("A", members, alpha),), keep_ungrouped=True
        )
        scheme_attr = GroupingScheme(
            Axis.ATTRIBUTES, mode, (Group("A", members, alpha),), keep_ungrouped=True
        )
        direct = generalize_objects(ctx, scheme_obj)
        dual = generalize_attributes(ctx.transpose(), scheme_attr).transpose()
        assert direct.rows == dual.rows
        assert direct.objects == dual.objects


@settings(max_examples=30)
@given(contexts_with_partitions())
def test_phi_psi_order_preserving_and_dominated(data):
    from genconcept.analysis import build_phi, build_psi

    ctx, scheme = data
    source = enumerate_concepts(ctx)
    target = enumerate_concepts(generalize_attributes(ctx, scheme))
    phi = build_phi(source, target, scheme)
    psi = build_psi(source, target, scheme)
    n = len(source)
    for i in range(n):
        assert target.leq_index(phi.mapping[i], psi.mapping[i])
        for j in range(n):
            if source.leq_index(i, j):
                assert target.leq_index(phi.mapping[i], phi.mapping[j])
                assert target.leq_index(psi.mapping[i], psi.mapping[j])


@settings(max_examples=30)
@given(contexts_with_partitions())
def test_forall_partition_never_grows(data):
    from genconcept.analysis import verify_forall_theorem
    from dataclasses import replace

    ctx, scheme = data
    forall_scheme = replace(scheme, mode=Mode.FORALL)
    report = verify_forall_theorem(ctx, forall_scheme)
    assert report.sizes.size_after <= report.sizes.size_before
