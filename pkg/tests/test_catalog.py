import pytest
from hypothesis import given, strategies as st

import oracles
from carnot.catalog import (N2_TABLE, N2_TABLE_PRINTED, LoopMatrix, REGISTRY, SpecError,
                            all_instances, bigrading_n2, build, build_matrix_realization,
                            check_serre, defining_cocycles, family_name, n2_degree,
                            tabulated_dimension, spec)
from carnot.cohomology import is_cocycle
from carnot.liealg import central_extension, check_jacobi, is_carnot, lower_central_series, width_ok_3_2
from carnot.morphism import find_exact_witness


def test_heisenberg():
    g = build(spec("m0", 2))
    assert g.degree_dims == [2, 1]
    from carnot.liealg import bracket
    assert g.describe(bracket(g, g.basis_vector(0), g.basis_vector(1))) == {"a2": 1}


def test_m1_relations():
    g = build(spec("m1", 5))
    e = lambda lab: g.basis_vector(g.index(lab))
    from carnot.liealg import bracket
    assert g.describe(bracket(g, e("a1"), e("b1"))) == {"a2": 1}
    assert g.describe(bracket(g, e("a1"), e("a2"))) == {"a3": 1}
    assert g.describe(bracket(g, e("a1"), e("a3"))) == {"a4": 1}
    # the top element sits at a5 and is reached from b1 and from a2
    assert bracket(g, e("b1"), e("a4"))[g.index("a5")] != 0
    assert bracket(g, e("a2"), e("a3"))[g.index("a5")] != 0


def test_n2_13_dimension():
    g = build(spec("n2", 13))
    # independent count of Table labels with natural degree <= 13
    count = sum(1 for i in range(1, 40) if n2_degree(i) <= 13)
    assert g.dim == count == 18 == tabulated_dimension(spec("n2", 13))


@pytest.mark.parametrize("sp", all_instances(20), ids=family_name)
def test_catalog_soundness(sp):
    g = build(sp)
    assert check_jacobi(g) == []
    assert is_carnot(g)
    assert width_ok_3_2(g)
    assert g.dim == tabulated_dimension(sp)
    assert g.length == sp.n


@pytest.mark.parametrize("fam", ["Wplus", "m2", "fial_ones"])
def test_width_one_examples_not_carnot(fam):
    g = build(spec(fam, 6))
    assert check_jacobi(g) == []
    assert g.dim == 7
    assert not is_carnot(g)


@pytest.mark.parametrize("n", range(6, 20))
def test_table_matches_matrices(n):
    a, b = build(spec("n2", n)), build_matrix_realization("n2", n)
    assert a.labels == b.labels and a.degrees == b.degrees
    assert a.constants == b.constants


def test_table_antisymmetry_law():
    for i in range(8):
        for j in range(8):
            assert N2_TABLE[i][j] + N2_TABLE[(-i) % 8][(-j) % 8] == 0
            assert N2_TABLE[i][j] == -N2_TABLE[j][i]
    # the printed table breaks the law at exactly two entries
    bad = {(i, j) for i in range(8) for j in range(8)
           if N2_TABLE_PRINTED[i][j] + N2_TABLE_PRINTED[(-i) % 8][(-j) % 8] != 0}
    assert bad <= {(5, 7), (7, 5), (3, 1), (1, 3)}


@pytest.mark.parametrize("sign", "+-")
@pytest.mark.parametrize("n", range(1, 9))
def test_n1pm_matrices(n, sign):
    a, b = build(spec("n1pm", n, sign=sign)), build_matrix_realization("n1pm", n, sign)
    assert a.structure_key() == b.structure_key()
    assert oracles.jacobi_ok(b)


def test_n1_matrices():
    g = build_matrix_realization("n1", 9)
    assert g.structure_key() == build(spec("n1", 9)).structure_key()


def test_commutator_self_zero():
    m = LoopMatrix.of(3, {(1, 2): (1, 0), (2, 3): (2, 1), (3, 1): (3, 1), (1, 1): (1, 2)})
    assert m.commutator(m).is_zero()


def test_serre():
    assert check_serre(build(spec("n1", 12)), "n1").ok
    rep = check_serre(build(spec("n2", 12)), "n2")
    assert rep.ok
    assert rep.sharp == {"ad^4 f1(f2)": True}


def test_bigrading():
    assert bigrading_n2(1) == (1, 0)
    assert bigrading_n2(2) == (0, 1)
    for m in range(5):
        assert bigrading_n2(8 * m + 7) == (4 * m + 3, 2 * m + 2)
    for i in range(1, 41):
        assert sum(bigrading_n2(i)) == n2_degree(i)


@pytest.mark.parametrize("sp", [spec("m0_S", 5, (3,)), spec("m0_S", 7, (3, 5, 7)), spec("m1", 7),
                                spec("m1_S", 7, (3,)), spec("m02_S", 8, (3,)), spec("m03_S", 9),
                                spec("n2_3", 8), spec("L23", 3), spec("n11", 7, sign="-")],
                         ids=family_name)
def test_defining_cocycles(sp):
    base, forms, labels = defining_cocycles(sp)
    assert all(is_cocycle(base, w) for w in forms)
    ext = central_extension(base, forms, labels)
    assert find_exact_witness(ext, build(sp)) is not None


def test_m02_6_is_n2_6():
    assert find_exact_witness(build(spec("m02_S", 6)), build(spec("n2", 6)), bound=2) is not None


def test_n2s_quotient_dims():
    for s in (1, 2, 3):
        assert build(spec("n2s", 7, s=s)).degree_dims[-1] == 1
        assert build(spec("n2s_3", 11, s=s)).dim == tabulated_dimension(spec("n2s_3", 11, s=s))


@pytest.mark.parametrize("bad", [
    spec("m0_S", 5, (7,)), spec("m0_S", 5, (4,)), spec("m0_S", 5, ()), spec("m1", 6),
    spec("m1", 3), spec("m02_S", 4), spec("m03_S", 5), spec("n2", 5), spec("n2s", 9, s=1),
    spec("n2s", 7, s=4), spec("n1pm", 4), spec("L23", 4), spec("nope", 3), spec("m1_S", 7, (7,))])
def test_spec_errors(bad):
    with pytest.raises(SpecError):
        build(bad)


def test_registry_covers_all_families():
    fams = {sp.family for sp in all_instances(13)} | {"Wplus", "m2", "fial_ones"}
    assert fams == {r.family for r in REGISTRY}


def test_lcs_matches_dimension_vector():
    for sp in all_instances(10):
        g = build(sp)
        dims = [t.dim for t in lower_central_series(g)]
        assert dims == [sum(g.degree_dims[i:]) for i in range(g.length)]


@given(st.integers(6, 30))
def test_n2_dimension_formula(n):
    assert build(spec("n2", n)).dim == tabulated_dimension(spec("n2", n))
