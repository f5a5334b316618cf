"""Exact linear algebra over Q, Q(i) and prime fields.

Field elements are stored as raw Python values (``Fraction`` for Q,
``GaussianRational`` for Q(i), ``int`` in [0, p) for GF(p)); a ``Field`` object
knows how to combine them.  ``Scalar`` wraps a raw value together with its
field for use at API boundaries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ._kernels import rref_mod_p


class ModeMismatchError(ValueError):
    """Raised when values from two different fields are combined."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class GaussianRational:
    """re + im*i with rational parts."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(Fraction(x), Fraction(0))

    def __add__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussianRational.of(o) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, o):
        return self * GaussianRational.of(o).inverse()

    def __rtruediv__(self, o):
        return GaussianRational.of(o) * self.inverse()

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.im == 0 and self.re == o
        if isinstance(o, GaussianRational):
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


I = GaussianRational(Fraction(0), Fraction(1))


class Field:
    """Arithmetic on raw values of one field mode."""

    name: str = ""
    characteristic: int = 0

    def __repr__(self):
        return f"<field {self.name}>"

    def __eq__(self, other):
        return isinstance(other, Field) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    # the generic operations; GF(p) overrides all of them
    def coerce(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return not a

    def format(self, a) -> str:
        raise NotImplementedError

    def parse(self, s: str):
        raise NotImplementedError


class RationalField(Field):
    name = "Q"

    def coerce(self, x):
        if isinstance(x, Scalar):
            _check_same(x.field, self)
            return x.value
        if isinstance(x, GaussianRational):
            if x.im:
                raise ModeMismatchError("Gaussian value with nonzero imaginary part in Q")
            return x.re
        if isinstance(x, str):
            return self.parse(x)
        return Fraction(x)

    def format(self, a):
        return _frac_str(Fraction(a))

    def parse(self, s):
        s = s.strip()
        if " mod " in s or s.endswith("i"):
            raise ModeMismatchError(f"{s!r} is not a rational literal")
        return Fraction(s)


_GAUSS_RE = re.compile(r"^\s*([+-]?[0-9/]+)\s*([+-])\s*([0-9/]+)\s*i\s*$")


class GaussianField(Field):
    name = "Qi"

    def coerce(self, x):
        if isinstance(x, Scalar):
            if x.field == QQ:
                return GaussianRational.of(x.value)
            _check_same(x.field, self)
            return x.value
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return GaussianRational.of(x)

    def inv(self, a):
        return a.inverse()

    def format(self, a):
        a = GaussianRational.of(a)
        sign = "-" if a.im < 0 else "+"
        return f"{_frac_str(a.re)}{sign}{_frac_str(abs(a.im))} i"

    def parse(self, s):
        m = _GAUSS_RE.match(s)
        if m is None:
            if " mod " in s:
                raise ModeMismatchError(f"{s!r} is not a Gaussian literal")
            return GaussianRational.of(Fraction(s.strip()))
        im = Fraction(m.group(3))
        if m.group(2) == "-":
            im = -im
        return GaussianRational(Fraction(m.group(1)), im)


class PrimeField(Field):
    """GF(p).  Raw values are ints in [0, p)."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"Fp:{p}"

    def coerce(self, x):
        p = self.p
        if isinstance(x, Scalar):
            if x.field == QQ:
                return self.coerce(x.value)
            _check_same(x.field, self)
            return x.value
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, (int, np.integer)):
            return int(x) % p
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes mod {p}")
            return x.numerator * pow(x.denominator, p - 2, p) % p
        if isinstance(x, GaussianRational):
            if not x.im:
                return self.coerce(x.re)
            # reduction of Q(i) through the smallest square root of -1
            root = self.sqrt_minus_one()
            if root is None:
                raise ModeMismatchError(f"-1 is not a square mod {p}")
            return (self.coerce(x.re) + root * self.coerce(x.im)) % p
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {x!r} into GF({p})")

    def sqrt_minus_one(self) -> int | None:
        for r in range(1, self.p):
            if (r * r + 1) % self.p == 0:
                return r
        return None

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def format(self, a):
        return f"{a % self.p} mod {self.p}"

    def parse(self, s):
        s = s.strip()
        if " mod " in s:
            r, q = s.split(" mod ")
            if int(q) != self.p:
                raise ModeMismatchError(f"{s!r} does not belong to GF({self.p})")
            return int(r) % self.p
        return self.coerce(Fraction(s))


QQ = RationalField()
QQi = GaussianField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> Field:
    """Inverse of ``Field.name``: "Q", "Qi" or "Fp:<p>"."""
    if name == "Q":
        return QQ
    if name == "Qi":
        return QQi
    if name.startswith("Fp:"):
        return GF(int(name[3:]))
    raise ValueError(f"unknown field {name!r}")


def _check_same(a: Field, b: Field) -> None:
    if a != b:
        raise ModeMismatchError(f"field mismatch: {a.name} vs {b.name}")


@dataclass(frozen=True)
class Scalar:
    """An exact field element tagged with its mode."""

    field: Field
    value: object

    @staticmethod
    def of(field: Field, x) -> "Scalar":
        return Scalar(field, field.coerce(x))

    @staticmethod
    def parse(text: str, field: Field) -> "Scalar":
        return Scalar(field, field.parse(text))

    def _other(self, o):
        if isinstance(o, Scalar):
            _check_same(self.field, o.field)
            return o.value
        return self.field.coerce(o)

    def __add__(self, o):
        return Scalar(self.field, self.field.add(self.value, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return Scalar(self.field, self.field.sub(self.value, self._other(o)))

    def __rsub__(self, o):
        return Scalar(self.field, self.field.sub(self._other(o), self.value))

    def __mul__(self, o):
        return Scalar(self.field, self.field.mul(self.value, self._other(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return Scalar(self.field, self.field.div(self.value, self._other(o)))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __bool__(self):
        return not self.field.is_zero(self.value)

    def __eq__(self, o):
        if isinstance(o, Scalar):
            return self.field == o.field and self.value == o.value
        try:
            return self.value == self.field.coerce(o)
        except (TypeError, ValueError, ZeroDivisionError):
            return False

    def __hash__(self):
        return hash((self.field.name, self.value))

    def __str__(self):
        return self.field.format(self.value)


@dataclass(frozen=True)
class Matrix:
    """Dense matrix of raw values of a single field, row-major."""

    field: Field
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length does not match shape")

    @staticmethod
    def from_rows(field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        ent = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
            ent.extend(field.coerce(x) for x in r)
        return Matrix(field, len(rows), cols, tuple(ent))

    @staticmethod
    def zeros(field: Field, rows: int, cols: int) -> "Matrix":
        return Matrix(field, rows, cols, (field.zero,) * (rows * cols))

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return Matrix(field, n, n, tuple(o if i == j else z for i in range(n) for j in range(n)))

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def tolist(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def scalar(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self[i, j])

    def transpose(self) -> "Matrix":
        return Matrix.from_rows(self.field, [[self[i, j] for i in range(self.rows)]
                                             for j in range(self.cols)], self.rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _check_same(self.field, other.field)
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        F = self.field
        A, B = self.tolist(), other.tolist()
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = F.zero
                for k in range(self.cols):
                    a = A[i][k]
                    if not F.is_zero(a):
                        acc = F.add(acc, F.mul(a, B[k][j]))
                row.append(acc)
            out.append(row)
        return Matrix.from_rows(F, out, other.cols)

    def apply(self, v: Sequence) -> list:
        F = self.field
        out = []
        for i in range(self.rows):
            acc = F.zero
            for k, a in enumerate(self.entries[i * self.cols:(i + 1) * self.cols]):
                if not F.is_zero(a) and not F.is_zero(v[k]):
                    acc = F.add(acc, F.mul(a, v[k]))
            out.append(acc)
        return out

    def rank(self) -> int:
        return len(rref_pivots(self)[1])

    def is_zero(self) -> bool:
        return all(self.field.is_zero(x) for x in self.entries)

    def format_rows(self) -> list[list[str]]:
        return [[self.field.format(x) for x in r] for r in self.tolist()]


def matrix_of_scalars(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    """Build a matrix from Scalars, refusing mixed modes."""
    fields = {s.field for r in rows for s in r}
    if len(fields) > 1:
        raise ModeMismatchError("mixed field modes in one matrix")
    F = fields.pop()
    return Matrix.from_rows(F, [[s.value for s in r] for r in rows])


def _rref_generic(F: Field, rows: list[list]) -> tuple[list[list], list[int]]:
    m = [r[:] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        k = next((i for i in range(r, nrows) if not F.is_zero(m[i][c])), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = F.inv(m[r][c])
        m[r] = [F.mul(x, inv) for x in m[r]]
        pr = m[r]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if not F.is_zero(f):
                    m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], pr)]
        pivots.append(c)
        r += 1
    return m, pivots


def rref_pivots(m: Matrix) -> tuple[Matrix, list[int]]:
    """RREF of ``m`` and its pivot columns."""
    F = m.field
    if m.rows == 0 or m.cols == 0:
        return m, []
    if isinstance(F, PrimeField):
        arr = np.array(m.tolist(), dtype=np.int64).reshape(m.rows, m.cols)
        red, piv = rref_mod_p(arr, F.p)
        return Matrix(F, m.rows, m.cols, tuple(int(x) for x in red.ravel())), [int(c) for c in piv]
    red, piv = _rref_generic(F, m.tolist())
    return Matrix.from_rows(F, red, m.cols), piv


def rref(m: Matrix) -> Matrix:
    """Unique reduced row echelon form; same shape, zero rows last."""
    return rref_pivots(m)[0]


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^n stored by its canonical RREF basis."""

    field: Field
    ambient_dim: int
    basis: Matrix

    @staticmethod
    def span(field: Field, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [list(v) for v in vectors]
        if not vecs:
            return Subspace.zero(field, ambient_dim)
        red, piv = rref_pivots(Matrix.from_rows(field, vecs, ambient_dim))
        return Subspace(field, ambient_dim, Matrix(field, len(piv), ambient_dim,
                                                   red.entries[:len(piv) * ambient_dim]))

    @staticmethod
    def zero(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(field, ambient_dim, Matrix(field, 0, ambient_dim, ()))

    @staticmethod
    def full(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(field, ambient_dim, Matrix.identity(field, ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> list[list]:
        return self.basis.tolist()

    def pivots(self) -> list[int]:
        out = []
        for r in self.vectors():
            out.append(next(i for i, x in enumerate(r) if not self.field.is_zero(x)))
        return out

    def reduce(self, v: Sequence) -> list:
        """Remainder of v after clearing this subspace's pivot coordinates."""
        F = self.field
        v = list(v)
        for row, c in zip(self.vectors(), self.pivots()):
            f = v[c]
            if not F.is_zero(f):
                v = [F.sub(x, F.mul(f, y)) for x, y in zip(v, row)]
        return v

    def contains_vector(self, v: Sequence) -> bool:
        return all(self.field.is_zero(x) for x in self.reduce(v))

    def coordinates(self, v: Sequence) -> list | None:
        """Coefficients of v in the canonical basis, or None if v is outside."""
        if not self.contains_vector(v):
            return None
        return [v[c] for c in self.pivots()]

    def contains(self, other: "Subspace") -> bool:
        _check_same(self.field, other.field)
        return all(self.contains_vector(v) for v in other.vectors())

    def annihilator(self) -> "Subspace":
        """Vectors x with <b, x> = 0 for every basis vector b."""
        if self.dim == 0:
            return Subspace.full(self.field, self.ambient_dim)
        return kernel(self.basis)


def kernel(m: Matrix) -> Subspace:
    """Null space {x : m x = 0} with canonical basis."""
    F = m.field
    n = m.cols
    red, piv = rref_pivots(m)
    rows = red.tolist()
    free = [c for c in range(n) if c not in set(piv)]
    vecs = []
    for f in free:
        v = [F.zero] * n
        v[f] = F.one
        for r, c in enumerate(piv):
            v[c] = F.neg(rows[r][f])
        vecs.append(v)
    return Subspace.span(F, n, vecs)


class SubspaceOps(NamedTuple):
    sum: Subspace
    intersection: Subspace
    contains: bool


def subspace_ops(a: Subspace, b: Subspace) -> SubspaceOps:
    """Sum, intersection, and whether ``a`` contains ``b``."""
    _check_same(a.field, b.field)
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    F, n = a.field, a.ambient_dim
    total = Subspace.span(F, n, a.vectors() + b.vectors())
    duals = a.annihilator().vectors() + b.annihilator().vectors()
    if duals:
        inter = kernel(Matrix.from_rows(F, duals, n))
    else:
        inter = Subspace.full(F, n)
    return SubspaceOps(total, inter, a.contains(b))


def complement_basis(sub: Subspace, vectors: Sequence[Sequence]) -> list[list]:
    """Greedy choice of ``vectors`` completing ``sub`` to the span of both."""
    F, n = sub.field, sub.ambient_dim
    current = sub
    chosen = []
    for v in vectors:
        if not current.contains_vector(v):
            chosen.append(list(v))
            current = Subspace.span(F, n, current.vectors() + [list(v)])
    return chosen


def solve(m: Matrix, rhs: Sequence) -> list | None:
    """One solution x of m x = rhs, or None."""
    F = m.field
    aug = Matrix.from_rows(F, [r + [rhs[i]] for i, r in enumerate(m.tolist())], m.cols + 1)
    red, piv = rref_pivots(aug)
    if m.cols in piv:
        return None
    x = [F.zero] * m.cols
    rows = red.tolist()
    for r, c in enumerate(piv):
        x[c] = rows[r][m.cols]
    return x


def inverse(m: Matrix) -> Matrix:
    """Inverse of a square matrix; ValueError when singular."""
    F, n = m.field, m.rows
    if m.rows != m.cols:
        raise ValueError("not square")
    aug = [r + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(m.tolist())]
    if n == 0:
        return m
    red, piv = rref_pivots(Matrix.from_rows(F, aug, 2 * n))
    if piv[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return Matrix.from_rows(F, [r[n:] for r in red.tolist()], n)
