from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yso5.algebra_core import Matrix, Scalar, kron
from yso5.rtt_engine import (AUX_LABELS, COMPONENT_NAMES, FreePoly, GenSymbol,
                             UnassignedSymbolError, build_lax, build_monodromy, check_constraints,
                             eval_relations, expand_rtt, extract_components, paper_relation)

# frozen at the first run of the engine; any change in the extraction shows up here
RELATION_COUNT_1_1 = 3691
RELATION_COUNT_2_2 = 8066


@pytest.fixture(scope="module")
def rs11():
    return expand_rtt(1, 1, 1)


@pytest.fixture(scope="module")
def rs22():
    return expand_rtt(2, 2, 1)


def test_relation_count(rs11):
    assert len(rs11) == RELATION_COUNT_1_1
    assert rs11.truncation == 3
    assert max(r.poly.max_level() for r in rs11) <= 3


def test_relation_count_level2(rs22):
    assert len(rs22) == RELATION_COUNT_2_2


def test_relations_are_x_independent(rs11):
    other = expand_rtt(1, 1, Scalar("1/3"))
    assert [r.poly for r in rs11] == [r.poly for r in other]


def test_normalized_leading_coefficient(rs11):
    for r in rs11:
        first = min(r.poly.terms)
        assert r.poly.terms[first] == Scalar(1)


def test_lax_satisfies_relations(rs11, lax):
    assert all(r.ok for r in eval_relations(rs11, lax))


def test_monodromy_satisfies_relations(rs22, mono):
    assert all(r.ok for r in eval_relations(rs22, mono))


def test_scaled_level1_violates_relations(rs22, mono):
    bad = [r for r in eval_relations(rs22, mono.scaled(1, 2)) if not r.ok]
    assert bad and bad[0].witness


def test_unassigned_symbol_named(rs22):
    small = build_lax(1, 0, max_level=2)
    with pytest.raises(UnassignedSymbolError, match="T3"):
        eval_relations(rs22, small)


def test_monodromy_level1_is_sum(mono, lax):
    # T^(1) of a product is the sum of the single-site T^(1)
    other = build_lax(1, 1)
    for a, b in product(AUX_LABELS, repeat=2):
        s = GenSymbol(1, a, b)
        want = kron(lax.assign[s], Matrix.identity(5)) + kron(Matrix.identity(5), other.assign[s])
        assert mono.assign[s] == want


# hand-written families ----------------------------------------------------

def test_left_family_matches_engine(rs22):
    table = {(r.i, r.j, r.entry): r.poly for r in rs22}
    for m in (1, 2):
        for a, b, c, d in product(AUX_LABELS, repeat=4):
            p = paper_relation("4.4", 0, m, (a, b, c, d))
            eng = table.get((-1, m, ((a, b), (c, d))))
            if p.is_zero():
                assert eng is None
            else:
                assert p.normalized() == eng


def test_left_family_trivial_instance():
    assert paper_relation("left", 0, 1, (2, 2, 2, 2)).is_zero()


def test_right_family_is_swapped_left():
    for a, b, c, d in product(AUX_LABELS, repeat=4):
        p = paper_relation("right", 2, 0, (a, b, c, d))
        q = paper_relation("left", 0, 2, (b, a, d, c))
        assert p.is_zero() == q.is_zero()
        if not p.is_zero():
            assert p.equal_up_to_scalar(q)


def test_general_family_boundary_is_left_family():
    for idx in product(AUX_LABELS, repeat=4):
        assert paper_relation("general", -1, 2, idx) == paper_relation("left", 0, 2, idx)


def test_general_family_matches_engine(rs22):
    table = {(r.i, r.j, r.entry): r.poly for r in rs22}
    for n, m in ((0, 0), (1, 1), (0, 2), (2, 2)):
        for a, b, c, d in product(AUX_LABELS, repeat=4):
            p = paper_relation("general", n, m, (a, b, c, d))
            eng = table.get((n, m, ((a, b), (c, d))))
            assert (eng is None) if p.is_zero() else p.normalized() == eng


def test_unknown_kind():
    with pytest.raises(ValueError):
        paper_relation("4.9", 0, 0, (2, 2, 2, 2))


# free algebra properties --------------------------------------------------

syms = st.builds(GenSymbol, st.integers(1, 3), st.sampled_from(AUX_LABELS),
                 st.sampled_from(AUX_LABELS))
coeffs = st.builds(Scalar, st.fractions(-5, 5, max_denominator=4),
                   st.fractions(-5, 5, max_denominator=4))
polys = st.dictionaries(st.lists(syms, max_size=2).map(tuple), coeffs, max_size=4).map(FreePoly)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_free_algebra_laws(p, q, r):
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p - p).is_zero()


@settings(max_examples=60, deadline=None)
@given(polys, coeffs)
def test_normalization_is_scale_invariant(p, c):
    if p.is_zero() or not c:
        return
    assert (p * c).normalized() == p.normalized()


def test_symbol_ordering():
    assert GenSymbol(1, 2, -2) < GenSymbol(2, -2, -2)
    assert GenSymbol(1, -1, 2) < GenSymbol(1, 0, -2)
    with pytest.raises(ValueError):
        GenSymbol(0, 1, 1)


# components and constraints -----------------------------------------------

def test_component_reconstruction(mono):
    for n in (1, 2, 3):
        cs = extract_components(mono, n)
        assert sorted(cs.ops) == sorted(COMPONENT_NAMES)
        assert cs.reconstruct() == mono.level_blocks(n)


@pytest.mark.parametrize("which", ["lax", "mono"])
def test_constraint_suites(which, request):
    rep = request.getfixturevalue(which)
    res = check_constraints(rep)
    assert len(res) == 43
    assert all(r.ok for r in res), [r for r in res if not r.ok][:3]


def test_constraints_need_level3():
    with pytest.raises(ValueError, match="max_level"):
        check_constraints(build_lax(1, 0, max_level=2))


def test_distinct_inhomogeneities_constraints():
    rep = build_monodromy(Scalar(2), (Scalar("1/2"), Scalar(-3)))
    assert all(r.ok for r in check_constraints(rep))
