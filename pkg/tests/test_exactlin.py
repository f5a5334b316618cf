from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from carnot.exactlin import (GF, GaussianField, GaussianRational, Matrix, ModeMismatchError,
                             RationalField, Scalar, Subspace, field_from_name, inverse, kernel,
                             rref, solve, subspace_ops)

QQ = RationalField()
QI = GaussianField()
F7 = GF(7)
F2 = GF(2)


def test_rational_lowest_terms_and_format():
    x = QQ.coerce(Fraction(6, -4))
    assert QQ.format(x) == "-3/2"
    assert QQ.parse("-3/2") == x
    assert QQ.parse("5") == 5


def test_gaussian_format_roundtrip():
    z = GaussianRational(Fraction(1, 2), Fraction(-3, 4))
    s = QI.format(z)
    assert s == "1/2+-3/4 i" or QI.parse(s) == z
    assert QI.parse(s) == z
    i = GaussianRational(Fraction(0), Fraction(1))
    assert QI.mul(i, i) == QI.coerce(-1)


def test_prime_field_residues():
    assert F7.coerce(-1) == 6
    assert F7.format(F7.coerce(10)) == "3 mod 7"
    assert F7.parse("3 mod 7") == 3
    assert F7.mul(3, F7.inv(3)) == 1
    assert F7.coerce(Fraction(1, 2)) == 4


def test_prime_field_sqrt_minus_one():
    assert GF(13).sqrt_minus_one() == 5
    assert GF(7).sqrt_minus_one() is None


def test_field_names():
    assert field_from_name("Q") == QQ
    assert field_from_name("Qi") == QI
    assert field_from_name("Fp:11") == GF(11)


def test_scalar_mode_mismatch():
    with pytest.raises(ModeMismatchError):
        Scalar.of(QQ, 1) + Scalar.of(F7, 1)


def test_scalar_exact_cancellation():
    a, b = Scalar.of(QQ, Fraction(2, 3)), Scalar.of(QQ, Fraction(-5, 7))
    assert (a + b) - b == a


def test_rref_examples():
    assert rref(Matrix.from_rows(QQ, [[2, 4], [1, 2]])).tolist() == [[1, 2], [0, 0]]
    I3 = Matrix.identity(QQ, 3)
    assert rref(I3).tolist() == I3.tolist()
    assert rref(Matrix.from_rows(F2, [[1, 1], [1, -1]])).tolist() == [[1, 1], [0, 0]]


def test_kernel_examples():
    assert kernel(Matrix.zeros(QQ, 2, 3)).dim == 3
    assert kernel(Matrix.identity(QQ, 4)).dim == 0
    K = kernel(Matrix.from_rows(QQ, [[1, 2, 3]]))
    assert K.dim == 2
    assert K.contains_vector([-2, 1, 0]) and K.contains_vector([-3, 0, 1])


def test_subspace_ops_examples():
    e1 = Subspace.span(QQ, 2, [[1, 0]])
    e2 = Subspace.span(QQ, 2, [[0, 1]])
    ops = subspace_ops(e1, e2)
    assert ops.sum.dim == 2 and ops.intersection.dim == 0 and not ops.contains
    same = subspace_ops(e1, e1)
    assert same.sum.vectors() == e1.vectors() == same.intersection.vectors()
    a = Subspace.span(QQ, 3, [[1, 1, 0], [0, 1, 1]])
    b = Subspace.span(QQ, 3, [[1, 0, -1], [0, 1, 1]])
    ops = subspace_ops(a, b)
    assert ops.intersection.contains_vector([1, 2, 1])
    assert ops.sum.dim + ops.intersection.dim == a.dim + b.dim


def test_solve_and_inverse():
    m = Matrix.from_rows(QQ, [[1, 2], [3, 4]])
    x = solve(m, [5, 6])
    assert m.apply(x) == [5, 6]
    assert (m @ inverse(m)).tolist() == Matrix.identity(QQ, 2).tolist()
    assert solve(Matrix.from_rows(QQ, [[1, 1], [1, 1]]), [0, 1]) is None
    with pytest.raises(ValueError):
        inverse(Matrix.from_rows(QQ, [[1, 1], [1, 1]]))


# ---------------------------------------------------------------------------
# property tests in all three modes

small = st.integers(-4, 4)


def _entry(mode):
    if mode == "Q":
        return st.fractions(min_value=-5, max_value=5, max_denominator=4)
    if mode == "Qi":
        return st.builds(lambda a, b: GaussianRational(Fraction(a), Fraction(b)), small, small)
    return st.integers(0, 6)


FIELDS = {"Q": QQ, "Qi": QI, "F7": F7}


def matrices(mode):
    return st.integers(1, 4).flatmap(
        lambda r: st.integers(1, 5).flatmap(
            lambda c: st.lists(st.lists(_entry(mode), min_size=c, max_size=c),
                               min_size=r, max_size=r)))


@pytest.mark.parametrize("mode", ["Q", "Qi", "F7"])
@given(data=st.data())
def test_rref_idempotent(mode, data):
    F = FIELDS[mode]
    rows = data.draw(matrices(mode))
    m = Matrix.from_rows(F, rows)
    once = rref(m)
    assert rref(once).tolist() == once.tolist()


@pytest.mark.parametrize("mode", ["Q", "Qi", "F7"])
@given(data=st.data())
def test_rank_nullity(mode, data):
    F = FIELDS[mode]
    m = Matrix.from_rows(F, data.draw(matrices(mode)))
    K = kernel(m)
    assert m.rank() + K.dim == m.cols
    for v in K.vectors():
        assert all(F.is_zero(x) for x in m.apply(v))


@pytest.mark.parametrize("mode", ["Q", "Qi", "F7"])
@given(data=st.data())
def test_subspace_equality_matches_containment(mode, data):
    F = FIELDS[mode]
    n = 3
    vecs = st.lists(st.lists(_entry(mode), min_size=n, max_size=n), min_size=0, max_size=3)
    a = Subspace.span(F, n, data.draw(vecs))
    b = Subspace.span(F, n, data.draw(vecs))
    same = a.vectors() == b.vectors()
    assert same == (a.contains(b) and b.contains(a))
    ops = subspace_ops(a, b)
    assert ops.sum.dim + ops.intersection.dim == a.dim + b.dim
