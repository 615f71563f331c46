"""Drinfel'd relations, a-tensor, Serre relation and Cartan-Weyl tables."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yso5.algebra_core import Scalar, SparseOp, mat_mul
from yso5.drinfeld import (CW_TABLES, YangianPair, canonical_quadruples, check_cw_tables,
                           check_drinfeld, check_level2_covariance, check_serre,
                           compute_a_tensor, fit_ratio, lax_pair, so5_tensors, triple_product)
from yso5.fock_chain import ChainConfig, build_chain
from yso5.so5_rep import structure_constants


@pytest.fixture(scope="module")
def mono_pair(mono):
    return lax_pair(mono)


def _diag(values):
    return SparseOp.from_entries((len(values), len(values)),
                                 {(i, i): Scalar(v) for i, v in enumerate(values)})


def _failed(outcomes):
    return [o for o in outcomes if o.ok is False]


# --- a-tensor -------------------------------------------------------------

def test_a_tensor_frozen_values():
    _, a = so5_tensors()
    assert len(a) == 12960
    assert {str(v) for v in a.a.values()} == {"1/24", "-1/24"}
    assert a[(0, 0, 1, 1, 2, 2)] == Scalar("1/24")


def test_a_tensor_of_zero_constants_is_zero():
    assert len(compute_a_tensor({})) == 0


def test_a_tensor_rep_independent(spinor, vector):
    assert structure_constants(spinor) == structure_constants(vector)
    assert compute_a_tensor(structure_constants(spinor)).a == so5_tensors()[1].a


def test_canonical_quadruples():
    q = canonical_quadruples()
    assert len(q) == 1035 == len(set(q))
    assert all(l < m and s < t and (l, m) <= (s, t) for l, m, s, t in q)


# --- triple product --------------------------------------------------------

def test_triple_product_of_equal_args(spinor):
    x = spinor.get(1, 2)
    assert triple_product(x, x, x) == mat_mul(mat_mul(x, x), x) * Scalar(6)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=9, max_size=9))
def test_triple_product_commuting_diagonals(v):
    d = [_diag(v[3 * k:3 * k + 3]) for k in range(3)]
    expected = _diag([6 * v[i] * v[3 + i] * v[6 + i] for i in range(3)])
    assert triple_product(*d) == expected


def test_triple_product_direct_sum(spinor):
    a, b, c = spinor.get(1, 2), spinor.get(2, 3), spinor.get(1, 3)
    m = lambda *xs: mat_mul(mat_mul(xs[0], xs[1]), xs[2])
    direct = m(a, b, c) + m(a, c, b) + m(b, a, c) + m(b, c, a) + m(c, a, b) + m(c, b, a)
    assert triple_product(a, b, c) == direct


def test_fit_ratio():
    x = _diag([1, 2])
    assert fit_ratio(x * Scalar(3), x) == Scalar(3)
    assert fit_ratio(x, x * Scalar(0)) is None
    assert fit_ratio(_diag([1, 3]), x) is None


# --- Lax-derived pair ------------------------------------------------------

@pytest.mark.slow
def test_monodromy_pair_satisfies_drinfeld(mono_pair):
    r = check_drinfeld(mono_pair)
    assert len(r) == 200 + 1000 + 1035
    assert not _failed(r)


@pytest.mark.slow
def test_zero_level2_mutation_fails(mono_pair):
    z = mono_pair.with_level2({k: v * Scalar(0) for k, v in mono_pair.level2.gens.items()}, "-zero")
    bad = _failed(check_drinfeld(z))
    assert bad and all(o.check.startswith(("cubic:", "quartic:")) for o in bad)
    assert all(o.witness for o in bad)


def test_level2_covariance(mono_pair):
    r = check_level2_covariance(mono_pair)
    assert len(r) == 100 and not _failed(r)


def test_serre_lambda_is_one(mono_pair):
    out = check_serre(mono_pair)
    assert all(o.ok for o in out)
    assert out[0].metrics == {"fitted_lambda": "1/1", "lhs_zero": False, "rhs_zero": False}


def test_serre_spinor_is_degenerate(spinor):
    # a single 4-dim irrep makes both sides vanish, so it cannot discriminate
    out = check_serre(YangianPair(spinor, spinor, 1))
    assert out[0].metrics["lhs_zero"] and out[0].metrics["rhs_zero"]


def test_serre_detects_copy_mutation_on_chain():
    yp = build_chain(ChainConfig(2, 1)).pair(1)
    m = yp.with_level2(dict(yp.level1.gens), "-copy")
    out = check_serre(m)[0]
    assert out.ok is False and out.witness
    assert out.metrics["lhs_zero"] and not out.metrics["rhs_zero"]


# --- Cartan-Weyl tables ----------------------------------------------------

@pytest.mark.parametrize("table", CW_TABLES)
def test_cw_tables_on_monodromy(mono, mono_pair, table):
    out = check_cw_tables(mono_pair, table, mono)
    asserted = [o for o in out if o.ok is not None]
    assert asserted and not _failed(out)
    for o in out:
        if o.ok is None:
            assert o.check.endswith(":printed") and "printed_form_holds" in o.metrics


def test_printed_errata_recorded(mono, mono_pair):
    out = check_cw_tables(mono_pair, "34", mono)
    printed = {o.check: o.metrics["printed_form_holds"] for o in out if o.ok is None}
    assert printed["table34:34.14@n=2:printed"] is False
    corrected = {o.check: o.ok for o in out if o.ok is not None}
    assert corrected["table34:34.14@n=2"] is True


def test_level1_tables_on_lax(lax):
    yp = lax_pair(lax)
    for t in ("30", "31"):
        assert not _failed(check_cw_tables(yp, t))
    assert not _failed(check_cw_tables(yp, "34", lax))


def test_mixed_tables_need_rep(mono_pair):
    for t in ("33", "34"):
        with pytest.raises(ValueError):
            check_cw_tables(mono_pair, t)
    with pytest.raises(ValueError):
        check_cw_tables(mono_pair, "99")


def test_table31_on_chain():
    yp = build_chain(ChainConfig(2, 1)).pair(1)
    out = check_cw_tables(yp, "31")
    assert not _failed(out)
    assert any(o.check.startswith("table31:31.26") and o.ok for o in out)
