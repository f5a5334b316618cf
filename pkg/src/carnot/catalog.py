"""Named families of narrow Carnot algebras, their loop realizations and cocycles.

Every family instance is a finite truncation: ``n`` is the length (top
degree) of the algebra.  For the non-Carnot one-dimensional-component
algebras W+, m2 and g(1,1,...) the basis is e_1..e_{n+1} with deg e_i = i, so
that their associated graded algebras have length n.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

from .cohomology import Cochain
from .exactlin import Field, Matrix, RationalField, solve
from .liealg import GradedIdeal, GradedLieAlgebra, InvariantError, bracket, quotient, truncate

QQ = RationalField()

FAMILIES = ("m0", "m0_S", "m1", "m1_S", "m02_S", "m03_S", "n1", "n1pm", "n11",
            "n2", "n2_3", "n2s", "n2s_3", "Wplus", "m2", "fial_ones", "L23")


class SpecError(ValueError):
    """Family parameters outside their validity range."""


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int = 3
    S: tuple = ()
    sign: str | None = None     # "+" or "-" for n1pm and n11
    s: int | None = None        # 1, 2, 3 for n2s and n2s_3
    field: Field = dc_field(default=QQ, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "S", tuple(sorted(self.S)))

    @property
    def k(self) -> int:
        return len(self.S)

    def validate(self) -> None:
        f, n, S = self.family, self.n, self.S
        if f not in FAMILIES:
            raise SpecError(f"unknown family {f!r}")
        for r in S:
            if r % 2 == 0 or r < 3:
                raise SpecError(f"S element {r} must be odd and >= 3")
        if len(set(S)) != len(S):
            raise SpecError("S must be strictly increasing")
        if f in ("n1pm", "n11") and self.sign not in ("+", "-"):
            raise SpecError("sign must be '+' or '-'")
        if f in ("n2s", "n2s_3") and self.s not in (1, 2, 3):
            raise SpecError("s must be 1, 2 or 3")

        def need(cond: bool, msg: str):
            if not cond:
                raise SpecError(msg)

        if f == "m0":
            need(n >= 1, "m0(n) needs n >= 1")
            need(not S, "m0 takes no S; use m0_S")
        elif f == "m0_S":
            need(len(S) >= 1, "m0^S needs k >= 1")
            need(max(S) <= n, f"m0^S(n) needs 3 <= r_1 < ... < r_k <= n (got r={max(S)}, n={n})")
        elif f in ("m1", "m1_S"):
            need(n % 2 == 1 and n >= 5, f"m1(2m-1) needs odd n = 2m-1 with m >= 3 (got n={n})")
            if f == "m1":
                need(not S, "m1 takes no S; use m1_S")
            else:
                need(len(S) >= 1, "m1^S needs k >= 1")
                need(max(S) <= n - 2, f"m1^S(2m-1) needs r_k <= 2m-3 (got r={max(S)}, n={n})")
        elif f == "m02_S":
            need(n % 2 == 0 and n >= 6, f"m0,2^S(2m) needs even n = 2m with m >= 3 (got n={n})")
            need(not S or max(S) <= n - 3, f"m0,2^S(2m) needs r_k <= 2m-3 (got n={n})")
        elif f == "m03_S":
            need(n % 2 == 1 and n >= 7, f"m0,3^S(2m+1) needs odd n = 2m+1 with m >= 3 (got n={n})")
            need(not S or max(S) <= n - 4, f"m0,3^S(2m+1) needs r_k <= 2m-3 (got n={n})")
        elif f in ("n1", "n1pm"):
            need(n >= 1, "n1(n) needs n >= 1")
        elif f == "n11":
            need(n % 2 == 1 and n >= 5, f"n1,1(2m+1) needs odd n >= 5 (got n={n})")
        elif f in ("n2", "n2_3"):
            need(n >= 6, f"n2(n) needs n >= 6 (got n={n})")
        elif f in ("n2s", "n2s_3"):
            need(n >= 7 and n % 6 in (1, 5), f"n2,s(n) needs n = 6m+1 or 6m+5 with m >= 1 (got n={n})")
        elif f in ("Wplus", "m2", "fial_ones"):
            need(n >= 1, f"{f}(n) needs n >= 1")
        elif f == "L23":
            need(n == 3, "L(2,3) has length 3")
        if f not in ("m0_S", "m1_S", "m02_S", "m03_S"):
            need(not S, f"{f} takes no S")


def spec(family: str, n: int = 3, S: Sequence[int] = (), sign: str | None = None,
         s: int | None = None, field: Field = QQ) -> FamilySpec:
    return FamilySpec(family, n, tuple(S), sign, s, field)


# ---------------------------------------------------------------------------
# names


def _sset(S) -> str:
    return "^{" + ",".join(str(r) for r in S) + "}" if S else ""


def family_name(sp: FamilySpec) -> str:
    """Names such as ``m0^{3,5}(7)``, ``n1+(6)``, ``n2,1^3(7)``."""
    f, n, S = sp.family, sp.n, sp.S
    if f in ("m0", "m0_S"):
        return f"m0{_sset(S)}({n})"
    if f in ("m1", "m1_S"):
        return f"m1{_sset(S)}({n})"
    if f == "m02_S":
        return f"m0,2{_sset(S)}({n})"
    if f == "m03_S":
        return f"m0,3{_sset(S)}({n})"
    if f == "n1":
        return f"n1({n})"
    if f == "n1pm":
        return f"n1{sp.sign}({n})"
    if f == "n11":
        return f"n1,1{sp.sign}({n})"
    if f == "n2":
        return f"n2({n})"
    if f == "n2_3":
        return f"n2^3({n})"
    if f == "n2s":
        return f"n2,{sp.s}({n})"
    if f == "n2s_3":
        return f"n2,{sp.s}^3({n})"
    if f == "Wplus":
        return f"W+({n})"
    if f == "m2":
        return f"m2({n})"
    if f == "fial_ones":
        return f"g(1,1,...)({n})"
    return "L(2,3)"


def tabulated_dimension(sp: FamilySpec) -> int:
    """Total dimension from the closed-form dimension column of each family."""
    f, n, k = sp.family, sp.n, sp.k
    if f in ("m0", "m0_S"):
        return n + k + 1
    if f in ("m1", "m1_S"):
        m = (n + 1) // 2
        return 2 * m + k
    if f == "m02_S":
        return n + k + 2
    if f == "m03_S":
        m = (n - 1) // 2
        return 2 * m + k + 3
    if f in ("n1", "n1pm"):
        m = n // 2
        return 3 * m if n % 2 == 0 else 3 * m + 2
    if f == "n11":
        return 3 * ((n - 1) // 2) + 1
    if f in ("n2", "n2_3"):
        m, q = (n - 1) // 6, (n - 1) % 6 + 1
        base = 8 * m + q + (1 if q <= 4 else 2)
        return base + (f == "n2_3")
    if f in ("n2s", "n2s_3"):
        m = n // 6
        base = 8 * m + 1 if n % 6 == 1 else 8 * m + 6
        return base + (f == "n2s_3")
    if f in ("Wplus", "m2", "fial_ones"):
        return n + 1
    return 5


# ---------------------------------------------------------------------------
# filiform relations


def _sgn(q: int) -> int:
    return -1 if q % 2 else 1


def _m0_parts(n: int, S: Sequence[int]):
    basis = [("a1", 1), ("b1", 1)] + [(f"a{i}", i) for i in range(2, n + 1)]
    rels = []
    if n >= 2:
        rels.append(("a1", "b1", {"a2": 1}))
    rels += [("a1", f"a{i}", {f"a{i + 1}": 1}) for i in range(2, n)]
    for r in S:
        basis.append((f"b{r}", r))
        rels += _omega_relations(r, f"b{r}")
    return basis, rels


def _omega_relations(r: int, top: str) -> list:
    """Relations dual to omega_r = -b^1^a^{r-1} + sum_{q>=2} (-1)^q a^q^a^{r-q}."""
    rels = [("b1", f"a{r - 1}", {top: -1})]
    for q in range(2, (r - 1) // 2 + 1):
        rels.append((f"a{q}", f"a{r - q}", {top: _sgn(q)}))
    return rels


def _m02_parts(m: int, S: Sequence[int]):
    basis, rels = _m0_parts(2 * m - 1, tuple(S) + (2 * m - 1,))
    top = f"a{2 * m}"
    basis.append((top, 2 * m))
    rels.append(("a1", f"b{2 * m - 1}", {top: 1}))
    rels.append(("b1", f"a{2 * m - 1}", {top: -(m - 1)}))
    for q in range(2, m):
        rels.append((f"a{q}", f"a{2 * m - q}", {top: _sgn(q) * (m - q)}))
    return basis, rels


def _m03_extra(m: int) -> list:
    top = f"a{2 * m + 1}"
    rels = [("a1", f"a{2 * m}", {top: 1})]
    for p in range(2, m + 1):
        c = -_sgn(p) * (p - 1) * (m - Fraction(p, 2))
        rels.append((f"a{p}", f"a{2 * m - p + 1}", {top: c}))
    return rels


# ---------------------------------------------------------------------------
# loop matrices


@dataclass(frozen=True)
class LoopMatrix:
    """A matrix with entries in K[t], stored as {power of t: Matrix}."""

    size: int
    terms: tuple    # sorted ((power, Matrix), ...)

    @staticmethod
    def of(size: int, entries: dict) -> "LoopMatrix":
        """From {(row, col): (coeff, power)} with 1-based positions."""
        per: dict = {}
        for (r, c), (coeff, power) in entries.items():
            per.setdefault(power, [[Fraction(0)] * size for _ in range(size)])
            per[power][r - 1][c - 1] += Fraction(coeff)
        return LoopMatrix(size, tuple(sorted((p, Matrix.from_rows(QQ, rows, size))
                                              for p, rows in per.items())))

    def commutator(self, other: "LoopMatrix") -> "LoopMatrix":
        acc: dict = {}
        for p, a in self.terms:
            for q, b in other.terms:
                c = a @ b
                d = b @ a
                rows = [[c[i, j] - d[i, j] for j in range(self.size)] for i in range(self.size)]
                if p + q in acc:
                    rows = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(acc[p + q], rows)]
                acc[p + q] = rows
        terms = tuple(sorted((p, Matrix.from_rows(QQ, rows, self.size)) for p, rows in acc.items()
                             if any(x for r in rows for x in r)))
        return LoopMatrix(self.size, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def flat(self) -> dict:
        out = {}
        for p, m in self.terms:
            for i in range(self.size):
                for j in range(self.size):
                    if m[i, j]:
                        out[(p, i, j)] = m[i, j]
        return out


def _E(i, j):
    return (i, j)


def _n1_elements(n: int):
    """(label, degree, LoopMatrix) for the sl(2) loop basis up to degree n."""
    out = []
    k = 0
    while True:
        added = False
        half = Fraction(1, 2)
        trip = [(f"a{2 * k + 1}", 2 * k + 1, LoopMatrix.of(2, {_E(1, 2): (half, k)})),
                (f"b{2 * k + 1}", 2 * k + 1, LoopMatrix.of(2, {_E(2, 1): (1, k + 1)})),
                (f"c{2 * k + 2}", 2 * k + 2, LoopMatrix.of(2, {_E(1, 1): (half, k + 1),
                                                              _E(2, 2): (-half, k + 1)}))]
        for item in trip:
            if item[1] <= n:
                out.append(item)
                added = True
        if not added:
            return out
        k += 1


def _n1pm_elements(n: int, sign: str):
    eps = -1 if sign == "+" else 1      # v^+ = E23 - E32, v^- = E23 + E32
    out = []
    for k in range(1, n + 2):
        o = 2 * k - 1
        if o <= n:
            out.append((f"u{o}", o, LoopMatrix.of(3, {_E(1, 2): (1, o), _E(2, 1): (-1, o)})))
            out.append((f"v{o}{sign}", o, LoopMatrix.of(3, {_E(2, 3): (1, o), _E(3, 2): (eps, o)})))
        if 2 * k <= n:
            out.append((f"w{2 * k}{sign}", 2 * k,
                        LoopMatrix.of(3, {_E(1, 3): (1, 2 * k), _E(3, 1): (eps, 2 * k)})))
    return out


_N2_BASE_DEG = {1: 1, 2: 1, 3: 2, 4: 3, 5: 4, 6: 5, 7: 5, 8: 6}


def n2_degree(i: int) -> int:
    """Natural degree of f_i."""
    k, s = divmod(i - 1, 8)
    return 6 * k + _N2_BASE_DEG[s + 1]


def _n2_matrix(i: int) -> LoopMatrix:
    k, s = divmod(i - 1, 8)
    s += 1
    a, b, c = 2 * k, 2 * k + 1, 2 * k + 2
    forms = {
        1: {(1, 2): (1, a), (2, 3): (1, a)},
        2: {(3, 1): (1, b)},
        3: {(2, 1): (1, b), (3, 2): (-1, b)},
        4: {(1, 1): (1, b), (2, 2): (-2, b), (3, 3): (1, b)},
        5: {(1, 2): (1, b), (2, 3): (-1, b)},
        6: {(1, 3): (1, b)},
        7: {(2, 1): (1, c), (3, 2): (1, c)},
        8: {(1, 1): (1, c), (3, 3): (-1, c)},
    }
    return LoopMatrix.of(3, forms[s])


def _n2_elements(n: int):
    out = []
    i = 1
    while n2_degree(i) <= n:
        out.append((f"f{i}", n2_degree(i), _n2_matrix(i)))
        i += 1
    return out


def _algebra_from_matrices(name: str, elements, field: Field = QQ) -> GradedLieAlgebra:
    """Structure constants read off matrix commutators; brackets above the top degree vanish."""
    by_deg: dict = {}
    for lab, d, mat in elements:
        by_deg.setdefault(d, []).append((lab, mat))
    top = max(by_deg) if by_deg else 0
    rels = []
    for a in range(len(elements)):
        for b in range(a + 1, len(elements)):
            la, da, ma = elements[a]
            lb, db, mb = elements[b]
            if da + db > top:
                continue
            comm = ma.commutator(mb)
            if comm.is_zero():
                continue
            target = by_deg.get(da + db, [])
            keys = sorted(set().union(*[m.flat().keys() for _, m in target], comm.flat().keys()))
            cols = [[m.flat().get(key, Fraction(0)) for key in keys] for _, m in target]
            rhs = [comm.flat().get(key, Fraction(0)) for key in keys]
            x = solve(Matrix.from_rows(QQ, cols, len(keys)).transpose(), rhs) if cols else None
            if x is None:
                raise InvariantError(f"[{la},{lb}] leaves the span of the degree-{da + db} matrices")
            rels.append((la, lb, {lab: c for (lab, _), c in zip(target, x) if c}))
    basis = [(lab, d) for lab, d, _ in elements]
    return GradedLieAlgebra.from_relations(name, field, basis, rels)


def build_matrix_realization(family: str, n: int, sign: str | None = None,
                             field: Field = QQ) -> GradedLieAlgebra:
    """n1 (sl2 loops), n1pm (so(3) / so(2,1) loops) or n2 (sl3 loops), truncated at degree n."""
    if family == "n1":
        return _algebra_from_matrices(f"n1({n})", _n1_elements(n), field)
    if family == "n1pm":
        return _algebra_from_matrices(f"n1{sign}({n})", _n1pm_elements(n, sign), field)
    if family == "n2":
        return _algebra_from_matrices(f"n2({n})", _n2_elements(n), field)
    raise SpecError(f"no matrix realization for {family!r}")


# d_{q,l} by residues mod 8 as printed: row q, column l.  The entries at
# (5, 7) and (7, 5) break d_{i,j} + d_{-i,-j} = 0 and the Jacobi identity.
N2_TABLE_PRINTED = (
    (0, 1, -2, -1, 0, 1, 2, -1),
    (-1, 0, 1, 1, -3, -2, 0, 1),
    (2, -1, 0, 0, 0, 1, -1, 0),
    (1, -1, 0, 0, 3, -1, 1, -2),
    (0, 3, 0, -3, 0, 3, 0, -3),
    (-1, 2, -1, 1, -3, 0, 0, -1),
    (-2, 0, 1, -1, 0, 0, 0, 1),
    (1, -1, 0, 2, 3, 1, -1, 0),
)

# the working table: the printed one with those two signs flipped, which is
# what the sl(3) loop matrices give
N2_TABLE = tuple(
    tuple(-c if (q, l) in ((5, 7), (7, 5)) else c for l, c in enumerate(row))
    for q, row in enumerate(N2_TABLE_PRINTED))


def n2_constant(q: int, l: int) -> int:
    return N2_TABLE[q % 8][l % 8]


def _n2_parts(n: int):
    count = 0
    while n2_degree(count + 1) <= n:
        count += 1
    basis = [(f"f{i}", n2_degree(i)) for i in range(1, count + 1)]
    rels = []
    for i in range(1, count + 1):
        for j in range(i + 1, count + 1 - i):
            d = n2_constant(i, j)
            if d:
                rels.append((f"f{i}", f"f{j}", {f"f{i + j}": d}))
    return basis, rels


def bigrading_n2(i: int) -> tuple[int, int]:
    """Canonical bigrading (p, q) of f_i, written as i = 8m + s with -1 <= s <= 6."""
    s = (i + 1) % 8 - 1
    m = (i - s) // 8
    if s <= 1:
        return (4 * m + s, 2 * m)
    return (4 * m + s - 2, 2 * m + 1)


# ---------------------------------------------------------------------------
# construction


def _n2s_quotient(g: GradedLieAlgebra, n: int, s: int, name: str) -> GradedLieAlgebra:
    top = list(g.block(n))
    F = g.field
    x, y = top
    if s == 1:
        kill = [g.basis_vector(y)]
    elif s == 2:
        kill = [g.basis_vector(x)]
    else:
        v = g.basis_vector(x)
        v[y] = F.neg(F.one)
        kill = [v]
    q = quotient(g, GradedIdeal.from_vectors(g, kill), name)
    if s == 3:
        q = q.relabeled({g.labels[y]: "c"})
    return q


@lru_cache(maxsize=512)
def build(sp: FamilySpec) -> GradedLieAlgebra:
    """The algebra named by ``sp`` with exact constants in ``sp.field``."""
    sp.validate()
    f, n, S, F = sp.family, sp.n, sp.S, sp.field
    name = family_name(sp)
    if f in ("m0", "m0_S"):
        basis, rels = _m0_parts(n, S)
    elif f == "L23":
        basis, rels = _m0_parts(3, (3,))
    elif f in ("m1", "m1_S"):
        m = (n + 1) // 2
        basis, rels = _m0_parts(2 * m - 2, S)
        top = f"a{2 * m - 1}" if f == "m1" else f"b{2 * m - 1}"
        basis.append((top, 2 * m - 1))
        rels += _omega_relations(2 * m - 1, top)
    elif f == "m02_S":
        basis, rels = _m02_parts(n // 2, S)
    elif f == "m03_S":
        m = (n - 1) // 2
        basis, rels = _m02_parts(m, S)
        basis.append((f"a{2 * m + 1}", 2 * m + 1))
        rels += _m03_extra(m)
    elif f == "n1":
        return build_matrix_realization("n1", n, field=F)
    elif f == "n1pm":
        return build_matrix_realization("n1pm", n, sp.sign, field=F)
    elif f == "n11":
        g = build(FamilySpec("n1pm", n, (), sp.sign, None, F))
        u = g.basis_vector(g.index(f"u{n}"))
        return quotient(g, GradedIdeal.from_vectors(g, [u]), name)
    elif f in ("n2", "n2_3"):
        basis, rels = _n2_parts(n)
        if f == "n2_3":
            basis.append(("z", 3))
            rels.append(("f2", "f3", {"z": 1}))
    elif f in ("n2s", "n2s_3"):
        base = build(FamilySpec("n2" if f == "n2s" else "n2_3", n, field=F))
        return _n2s_quotient(base, n, sp.s, name)
    elif f == "Wplus":
        basis = [(f"e{i}", i) for i in range(1, n + 2)]
        rels = [(f"e{i}", f"e{j}", {f"e{i + j}": j - i})
                for i in range(1, n + 2) for j in range(i + 1, n + 2 - i)]
    elif f == "m2":
        basis = [(f"e{i}", i) for i in range(1, n + 2)]
        rels = [("e1", f"e{i}", {f"e{i + 1}": 1}) for i in range(2, n + 1)]
        rels += [("e2", f"e{j}", {f"e{j + 2}": 1}) for j in range(3, n)]
    else:  # fial_ones
        basis = [(f"e{i}", i) for i in range(1, n + 2)]
        top = n + 1
        rels = []
        for i, j, k in [(1, 2, 3), (1, 3, 4)]:
            if k <= top:
                rels.append((f"e{i}", f"e{j}", {f"e{k}": 1}))
        for k in range(2, top):
            if 2 * k + 2 <= top:
                rels.append(("e1", f"e{2 * k + 1}", {f"e{2 * k + 2}": 1}))
                rels.append(("e2", f"e{2 * k}", {f"e{2 * k + 2}": 1}))
            if 2 * k + 1 <= top:
                rels.append(("e2", f"e{2 * k - 1}", {f"e{2 * k + 1}": 1}))
    return GradedLieAlgebra.from_relations(name, F, basis, rels)


# ---------------------------------------------------------------------------
# Serre relations


def ad_power(g: GradedLieAlgebra, x: str, y: str, k: int) -> list:
    """ad(x)^k (y) as a dense vector."""
    xv = g.basis_vector(g.index(x))
    v = g.basis_vector(g.index(y))
    for _ in range(k):
        v = bracket(g, xv, v)
    return v


class SerreReport(NamedTuple):
    vanishing: dict     # description -> bool (True when the expression is zero)
    sharp: dict         # description -> bool (True when the expression is nonzero)

    @property
    def ok(self) -> bool:
        return all(self.vanishing.values()) and all(self.sharp.values())


def check_serre(g: GradedLieAlgebra, family: str) -> SerreReport:
    """ad e_i^{1 - a_ij}(e_j) = 0 for the two generators, with one sharpness check for n2."""
    F = g.field

    def zero(v):
        return all(F.is_zero(c) for c in v)

    if family == "n1":
        e1, e2 = g.labels[0], g.labels[1]
        van = {f"ad^3 {e1}({e2})": zero(ad_power(g, e1, e2, 3)),
               f"ad^3 {e2}({e1})": zero(ad_power(g, e2, e1, 3))}
        return SerreReport(van, {f"ad^2 {e1}({e2})": not zero(ad_power(g, e1, e2, 2))})
    if family == "n2":
        van = {"ad^2 f2(f1)": zero(ad_power(g, "f2", "f1", 2)),
               "ad^5 f1(f2)": zero(ad_power(g, "f1", "f2", 5))}
        return SerreReport(van, {"ad^4 f1(f2)": not zero(ad_power(g, "f1", "f2", 4))})
    raise SpecError(f"no Serre relations recorded for {family!r}")


# ---------------------------------------------------------------------------
# defining cocycles


class DefiningData(NamedTuple):
    base: GradedLieAlgebra
    cocycles: list
    labels: list


def omega_r(g: GradedLieAlgebra, r: int) -> Cochain:
    """-b^1^a^{r-1} + sum_{q=2}^{(r-1)/2} (-1)^q a^q^a^{r-q} on an m0-type algebra."""
    terms = {("b1", f"a{r - 1}"): -1}
    for q in range(2, (r - 1) // 2 + 1):
        terms[(f"a{q}", f"a{r - q}")] = _sgn(q)
    return Cochain.wedge(g, terms)


def omega_tilde(g: GradedLieAlgebra, m: int) -> Cochain:
    """a^1^b^{2m-1} - (m-1) b^1^a^{2m-1} + sum_{q=2}^{m-1} (-1)^q (m-q) a^q^a^{2m-q}."""
    terms = {("a1", f"b{2 * m - 1}"): 1, ("b1", f"a{2 * m - 1}"): -(m - 1)}
    for q in range(2, m):
        terms[(f"a{q}", f"a{2 * m - q}")] = _sgn(q) * (m - q)
    return Cochain.wedge(g, terms)


def omega_m03(g: GradedLieAlgebra, m: int) -> Cochain:
    terms = {("a1", f"a{2 * m}"): 1}
    for p in range(2, m + 1):
        terms[(f"a{p}", f"a{2 * m - p + 1}")] = -_sgn(p) * (p - 1) * (m - Fraction(p, 2))
    return Cochain.wedge(g, terms)


def top_slice(g: GradedLieAlgebra) -> DefiningData:
    """g as the extension of g/g_N by the coefficient forms of its top component."""
    F = g.field
    base = truncate(g, g.length - 1)
    top = list(g.block(g.length))
    forms = []
    for t in top:
        vals = {key: vec[t] for key, vec in g.constants.items() if t in vec}
        forms.append(Cochain(F, base.dim, 2, g.length, vals))
    return DefiningData(base, forms, [g.labels[t] for t in top])


def defining_cocycles(sp: FamilySpec) -> DefiningData:
    """Base algebra plus closed 2-cochains whose central extension is ``build(sp)``."""
    sp.validate()
    f, n, S, F = sp.family, sp.n, sp.S, sp.field
    if f == "m0_S":
        base = build(FamilySpec("m0", n, field=F))
        return DefiningData(base, [omega_r(base, r) for r in S], [f"b{r}" for r in S])
    if f == "L23":
        base = build(FamilySpec("m0", 3, field=F))
        return DefiningData(base, [omega_r(base, 3)], ["b3"])
    if f in ("m1", "m1_S"):
        base = build(FamilySpec("m0_S" if S else "m0", n - 1, S, field=F))
        top = f"a{n}" if f == "m1" else f"b{n}"
        return DefiningData(base, [omega_r(base, n)], [top])
    if f == "m02_S":
        m = n // 2
        base = build(FamilySpec("m0_S", n - 1, S + (n - 1,), field=F))
        return DefiningData(base, [omega_tilde(base, m)], [f"a{n}"])
    if f == "m03_S":
        m = (n - 1) // 2
        base = build(FamilySpec("m02_S", n - 1, S, field=F))
        return DefiningData(base, [omega_m03(base, m)], [f"a{n}"])
    if f == "n2_3":
        base = build(FamilySpec("n2", n, field=F))
        return DefiningData(base, [Cochain.wedge(base, {("f2", "f3"): 1})], ["z"])
    return top_slice(build(sp))


# ---------------------------------------------------------------------------
# registry


class FamilyInfo(NamedTuple):
    family: str
    parameters: str
    validity: str
    table_row: str


REGISTRY = (
    FamilyInfo("m0", "n", "n >= 1", "A0: m0(n)"),
    FamilyInfo("m0_S", "n, S", "S odd, 3 <= r_1 < ... < r_k <= n, k >= 1", "A0: m0^S(n)"),
    FamilyInfo("m1", "n = 2m-1", "m >= 3", "A0: m1(2m-1)"),
    FamilyInfo("m1_S", "n = 2m-1, S", "m >= 3, 3 <= r_1 < ... < r_k <= 2m-3, k >= 1", "A0: m1^S(2m-1)"),
    FamilyInfo("m02_S", "n = 2m, S", "m >= 3, r_k <= 2m-3, k >= 0", "A1: m0,2^S(2m)"),
    FamilyInfo("m03_S", "n = 2m+1, S", "m >= 3, r_k <= 2m-3, k >= 0", "A1: m0,3^S(2m+1)"),
    FamilyInfo("n1", "n", "n >= 1", "B: n1(n) (sl(2) loops)"),
    FamilyInfo("n1pm", "n, sign", "n >= 1, sign in {+,-}", "B: n1+-(n)"),
    FamilyInfo("n11", "n = 2m+1, sign", "m >= 2", "B: n1,1+-(2m+1)"),
    FamilyInfo("n2", "n", "n >= 6", "C: n2(n)"),
    FamilyInfo("n2_3", "n", "n >= 6", "D: n2^3(n)"),
    FamilyInfo("n2s", "n, s", "n = 6m+1 or 6m+5, m >= 1, s in {1,2,3}", "C: n2,s(n)"),
    FamilyInfo("n2s_3", "n, s", "n = 6m+1 or 6m+5, m >= 1, s in {1,2,3}", "D: n2,s^3(n)"),
    FamilyInfo("Wplus", "n", "n >= 1 (basis e1..e_{n+1})", "width one: W+"),
    FamilyInfo("m2", "n", "n >= 1 (basis e1..e_{n+1})", "width one: m2"),
    FamilyInfo("fial_ones", "n", "n >= 1 (basis e1..e_{n+1})", "width one: g(1,1,...)"),
    FamilyInfo("L23", "-", "length 3", "free 2-generated 3-step"),
)


def odd_subsets(lo: int, hi: int) -> list[tuple]:
    """All subsets of the odd integers in [lo, hi]."""
    odds = [r for r in range(lo, hi + 1) if r % 2 == 1]
    out = []
    for mask in range(1 << len(odds)):
        out.append(tuple(r for t, r in enumerate(odds) if mask >> t & 1))
    return out


def all_instances(max_n: int, field: Field = QQ) -> list[FamilySpec]:
    """Every Carnot family instance of length <= max_n (the width-one examples excluded)."""
    out = []
    for n in range(1, max_n + 1):
        out.append(FamilySpec("m0", n, field=field))
        out += [FamilySpec("m0_S", n, S, field=field) for S in odd_subsets(3, n) if S]
        out.append(FamilySpec("n1", n, field=field))
        out += [FamilySpec("n1pm", n, (), sg, field=field) for sg in "+-"]
        if n % 2 == 1 and n >= 5:
            out += [FamilySpec("m1", n, field=field)]
            out += [FamilySpec("m1_S", n, S, field=field) for S in odd_subsets(3, n - 2) if S]
            out += [FamilySpec("n11", n, (), sg, field=field) for sg in "+-"]
        if n % 2 == 0 and n >= 6:
            out += [FamilySpec("m02_S", n, S, field=field) for S in odd_subsets(3, n - 3)]
        if n % 2 == 1 and n >= 7:
            out += [FamilySpec("m03_S", n, S, field=field) for S in odd_subsets(3, n - 4)]
        if n >= 6:
            out += [FamilySpec("n2", n, field=field), FamilySpec("n2_3", n, field=field)]
        if n >= 7 and n % 6 in (1, 5):
            out += [FamilySpec(fam, n, (), None, s, field) for fam in ("n2s", "n2s_3") for s in (1, 2, 3)]
    out.append(FamilySpec("L23", 3, field=field))
    return out
