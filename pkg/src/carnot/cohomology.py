"""Graded Chevalley-Eilenberg cochains with trivial coefficients, and H^2.

A p-cochain is stored by its values on increasing index tuples of basis
vectors.  The differentials are

    (d phi)(x, y)      = phi([x, y])
    (d w)(x, y, z)     = w([x, y], z) + w([y, z], x) + w([z, x], y)

so that da^2 = a^1 ^ b^1 in an algebra with [a1, b1] = a2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple, Sequence

from .exactlin import Field, Matrix, Subspace, complement_basis, field_from_name, kernel, solve
from .liealg import GradedLieAlgebra, InvariantError


@dataclass(frozen=True, eq=False)
class Cochain:
    field: Field
    dim: int
    arity: int
    grading: int | None
    coeffs: dict    # increasing index tuple -> nonzero raw value

    @staticmethod
    def from_dict(field: Field, dim: int, arity: int, grading, values: dict) -> "Cochain":
        """Normalize arbitrary index tuples through antisymmetry."""
        out: dict = {}
        for key, c in values.items():
            key = tuple(key)
            if len(set(key)) < len(key):
                continue
            sign = _perm_sign(key)
            srt = tuple(sorted(key))
            c = field.coerce(c)
            if sign < 0:
                c = field.neg(c)
            out[srt] = field.add(out.get(srt, field.zero), c)
        out = {k: c for k, c in out.items() if not field.is_zero(c)}
        return Cochain(field, dim, arity, grading, out)

    @staticmethod
    def wedge(g: GradedLieAlgebra, terms: dict) -> "Cochain":
        """Cochain from {(label, label, ...): coefficient} in dual-basis notation.

        ``{("b1", "a4"): -1}`` is -b^1 ^ a^4.  The grading is read from the
        first term.
        """
        values = {}
        grading = None
        for labs, c in terms.items():
            key = tuple(g.index(lab) for lab in labs)
            values[key] = c
            grading = sum(g.degrees[i] for i in key)
        arity = len(next(iter(terms))) if terms else 2
        return Cochain.from_dict(g.field, g.dim, arity, grading, values)

    def value(self, idx: Sequence[int]):
        F = self.field
        if len(set(idx)) < len(idx):
            return F.zero
        c = self.coeffs.get(tuple(sorted(idx)), F.zero)
        return F.neg(c) if _perm_sign(idx) < 0 else c

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "Cochain") -> "Cochain":
        F = self.field
        vals = dict(self.coeffs)
        for k, c in other.coeffs.items():
            vals[k] = F.add(vals.get(k, F.zero), c)
        grading = self.grading if self.grading == other.grading else None
        return Cochain.from_dict(F, self.dim, self.arity, grading, vals)

    def scale(self, c) -> "Cochain":
        F = self.field
        c = F.coerce(c)
        return Cochain.from_dict(F, self.dim, self.arity, self.grading,
                                 {k: F.mul(c, v) for k, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.field, self.dim, self.arity, self.coeffs) == \
            (other.field, other.dim, other.arity, other.coeffs)

    def __hash__(self):
        return hash((self.field.name, self.dim, self.arity, tuple(sorted(self.coeffs.items()))))

    def vector(self, keys: Sequence[tuple]) -> list:
        F = self.field
        return [self.coeffs.get(k, F.zero) for k in keys]

    def describe(self, g: GradedLieAlgebra) -> str:
        """Readable form like ``-b^1^a^4 + a^2^a^3``."""
        F = self.field
        parts = []
        for key in sorted(self.coeffs):
            c = self.coeffs[key]
            forms = "^".join(f"{g.labels[i]}*" for i in key)
            parts.append(forms if c == F.one else f"{F.format(c)}*{forms}")
        return " + ".join(parts) if parts else "0"


def _perm_sign(idx: Sequence[int]) -> int:
    idx = list(idx)
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign


def _keys(g: GradedLieAlgebra, arity: int, grading: int | None) -> list[tuple]:
    out = []
    for key in combinations(range(g.dim), arity):
        if grading is None or sum(g.degrees[i] for i in key) == grading:
            out.append(key)
    return out


def d1(g: GradedLieAlgebra, phi: Cochain) -> Cochain:
    """(d phi)(e_i, e_j) = phi([e_i, e_j])."""
    F = g.field
    if phi.arity != 1:
        raise InvariantError("d1 expects a 1-cochain")
    vals = {}
    for (i, j), vec in g.constants.items():
        acc = F.zero
        for k, c in vec.items():
            v = phi.coeffs.get((k,))
            if v is not None:
                acc = F.add(acc, F.mul(c, v))
        if not F.is_zero(acc):
            vals[(i, j)] = acc
    return Cochain(F, g.dim, 2, phi.grading, vals)


def _omega_of(g: GradedLieAlgebra, w: Cochain, i: int, j: int, k: int):
    # w([e_i, e_j], e_k)
    F = g.field
    acc = F.zero
    for m, c in g.bracket_basis(i, j).items():
        v = w.value((m, k))
        if not F.is_zero(v):
            acc = F.add(acc, F.mul(c, v))
    return acc


def d2(g: GradedLieAlgebra, w: Cochain) -> Cochain:
    """(d w)(x, y, z) = w([x,y],z) + w([y,z],x) + w([z,x],y)."""
    F = g.field
    if w.arity != 2:
        raise InvariantError("d2 expects a 2-cochain")
    vals = {}
    if w.is_zero():
        return Cochain(F, g.dim, 3, w.grading, vals)
    keys = _keys(g, 3, w.grading) if w.grading is not None else combinations(range(g.dim), 3)
    for (i, j, k) in keys:
        acc = F.add(F.add(_omega_of(g, w, i, j, k), _omega_of(g, w, j, k, i)),
                    _omega_of(g, w, k, i, j))
        if not F.is_zero(acc):
            vals[(i, j, k)] = acc
    return Cochain(F, g.dim, 3, w.grading, vals)


def is_cocycle(g: GradedLieAlgebra, w: Cochain) -> bool:
    return d2(g, w).is_zero()


class CohomologySpace(NamedTuple):
    """H^2 in one weight: cocycles Z, coboundaries B and class representatives."""

    algebra: GradedLieAlgebra
    grading: int
    keys: tuple             # coordinates of C^2 in this weight
    cocycles: Subspace
    coboundaries: Subspace
    representatives: tuple  # Cochains completing B to Z

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def cochain(self, coords: Sequence) -> Cochain:
        """sum_t coords[t] * representative_t."""
        g = self.algebra
        F = g.field
        vals: dict = {}
        for c, rep in zip(coords, self.representatives):
            c = F.coerce(c)
            if F.is_zero(c):
                continue
            for k, v in rep.coeffs.items():
                vals[k] = F.add(vals.get(k, F.zero), F.mul(c, v))
        return Cochain.from_dict(F, g.dim, 2, self.grading, vals)

    def class_coordinates(self, w: Cochain) -> list | None:
        """Coordinates of the class of w, or None when w is not a cocycle."""
        g = self.algebra
        v = [w.coeffs.get(k, g.field.zero) for k in self.keys]
        if any(not g.field.is_zero(c) for k, c in w.coeffs.items() if k not in set(self.keys)):
            return None
        if not self.cocycles.contains_vector(v):
            return None
        cols = [r.vector(self.keys) for r in self.representatives] + self.coboundaries.vectors()
        if not cols:
            return []
        x = solve(Matrix.from_rows(g.field, cols, len(self.keys)).transpose(), v)
        return x[:self.dim]

    def is_coboundary(self, w: Cochain) -> bool:
        coords = self.class_coordinates(w)
        return coords is not None and all(self.algebra.field.is_zero(c) for c in coords)


def h2_graded(g: GradedLieAlgebra, k: int) -> CohomologySpace:
    """H^2 of weight k, with representatives taken greedily from the canonical basis of Z."""
    F = g.field
    keys = _keys(g, 2, k)
    n2 = len(keys)
    if n2 == 0:
        z = Subspace.zero(F, 0)
        return CohomologySpace(g, k, (), z, z, ())
    keys3 = _keys(g, 3, k)
    pos3 = {t: r for r, t in enumerate(keys3)}
    # matrix of d2: rows indexed by triples, columns by pairs
    rows = [[F.zero] * n2 for _ in keys3]
    for col, key in enumerate(keys):
        unit = Cochain(F, g.dim, 2, k, {key: F.one})
        for t, v in d2(g, unit).coeffs.items():
            rows[pos3[t]][col] = v
    Z = kernel(Matrix.from_rows(F, rows, n2)) if keys3 else Subspace.full(F, n2)
    bvecs = []
    for i in g.block(k) if k <= g.length else ():
        b = d1(g, Cochain(F, g.dim, 1, k, {(i,): F.one}))
        bvecs.append(b.vector(keys))
    B = Subspace.span(F, n2, bvecs)
    reps = complement_basis(B, Z.vectors())
    reps = tuple(Cochain.from_dict(F, g.dim, 2, k, dict(zip(keys, r))) for r in reps)
    return CohomologySpace(g, k, tuple(keys), Z, B, reps)


def h2_profile(g: GradedLieAlgebra, weights: Sequence[int] | None = None) -> dict:
    """{k: dim H^2_k} for k = 2 .. 2*length by default."""
    if weights is None:
        weights = range(2, 2 * g.length + 1)
    return {k: h2_graded(g, k).dim for k in weights}


def pullback(w: Cochain, phi: Matrix) -> Cochain:
    """(phi^* w)(e_i, e_j) = w(phi e_i, phi e_j) for a square matrix phi (columns = images)."""
    F = w.field
    n = phi.cols
    vals = {}
    cols = [[phi[r, c] for r in range(phi.rows)] for c in range(n)]
    nz = [[(r, x) for r, x in enumerate(col) if not F.is_zero(x)] for col in cols]
    for i in range(n):
        for j in range(i + 1, n):
            acc = F.zero
            for a, x in nz[i]:
                for b, y in nz[j]:
                    if a == b:
                        continue
                    v = w.value((a, b))
                    if not F.is_zero(v):
                        acc = F.add(acc, F.mul(F.mul(x, y), v))
            if not F.is_zero(acc):
                vals[(i, j)] = acc
    return Cochain(F, n, 2, w.grading, vals)


def restriction_matrix(g: GradedLieAlgebra, w: Cochain, da: int, db: int) -> list[list]:
    """Matrix of w restricted to g_da x g_db (rows g_da, columns g_db)."""
    return [[w.value((i, j)) for j in g.block(db)] for i in g.block(da)]


# ---------------------------------------------------------------------------
# JSON


def cochain_to_json(w: Cochain, g: GradedLieAlgebra) -> dict:
    """{grading, terms: [{labels, coeff}]} keyed by the algebra's labels."""
    F = w.field
    return {"field": F.name, "arity": w.arity, "grading": w.grading,
            "terms": [{"labels": [g.labels[i] for i in k], "coeff": F.format(c)}
                      for k, c in sorted(w.coeffs.items())]}


def cochain_from_json(doc: dict, g: GradedLieAlgebra) -> Cochain:
    F = g.field
    vals = {tuple(g.index(lab) for lab in t["labels"]): F.parse(str(t["coeff"]))
            for t in doc["terms"]}
    arity = int(doc.get("arity", 2))
    return Cochain.from_dict(F, g.dim, arity, doc.get("grading"), vals)
