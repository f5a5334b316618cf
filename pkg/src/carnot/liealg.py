"""Finite-dimensional positively graded Lie algebras given by structure constants."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .exactlin import (Field, Matrix, Subspace, complement_basis, field_from_name,
                       solve)


class InvariantError(ValueError):
    """A structural invariant of an algebra or ideal does not hold."""


class Violation(NamedTuple):
    kind: str           # "grading", "antisymmetry" or "jacobi"
    labels: tuple
    detail: str


@dataclass(frozen=True, eq=False)
class GradedLieAlgebra:
    """Graded basis plus sparse constants c_ij^k, stored for i < j only.

    Basis vectors are ordered by (degree, slot).  ``constants[(i, j)]`` maps a
    basis index k to the nonzero coefficient of e_k in [e_i, e_j].
    """

    name: str
    field: Field
    degrees: tuple
    labels: tuple
    constants: dict

    # -- construction -----------------------------------------------------

    @staticmethod
    def from_relations(name: str, field: Field, basis: Sequence[tuple[str, int]],
                       relations: Iterable[tuple[str, str, dict]]) -> "GradedLieAlgebra":
        """Build from (label, degree) pairs and relations [x, y] = sum c_z z.

        The basis is sorted stably by degree.  Relations may be given in either
        order of x, y; conflicting duplicates raise InvariantError.
        """
        order = sorted(range(len(basis)), key=lambda s: (basis[s][1], s))
        labels = tuple(basis[s][0] for s in order)
        degrees = tuple(int(basis[s][1]) for s in order)
        if len(set(labels)) != len(labels):
            raise InvariantError("duplicate basis labels")
        pos = {lab: i for i, lab in enumerate(labels)}
        consts: dict = {}
        for x, y, terms in relations:
            i, j = pos[x], pos[y]
            vec = {pos[z]: field.coerce(c) for z, c in terms.items()}
            vec = {k: c for k, c in vec.items() if not field.is_zero(c)}
            if i == j:
                if vec:
                    raise InvariantError(f"[{x},{x}] must vanish")
                continue
            if i > j:
                i, j = j, i
                vec = {k: field.neg(c) for k, c in vec.items()}
            if (i, j) in consts and consts[(i, j)] != vec:
                raise InvariantError(f"conflicting relations for [{x},{y}]")
            if vec:
                consts[(i, j)] = vec
        return GradedLieAlgebra(name, field, degrees, labels, consts)

    def with_field(self, field: Field) -> "GradedLieAlgebra":
        """Same constants read in another field (reduction mod p, or Q inside Q(i))."""
        consts = {}
        for key, vec in self.constants.items():
            new = {k: field.coerce(c) for k, c in vec.items()}
            new = {k: c for k, c in new.items() if not field.is_zero(c)}
            if new:
                consts[key] = new
        return GradedLieAlgebra(self.name, field, self.degrees, self.labels, consts)

    def renamed(self, name: str) -> "GradedLieAlgebra":
        return GradedLieAlgebra(name, self.field, self.degrees, self.labels, self.constants)

    def relabeled(self, mapping: dict) -> "GradedLieAlgebra":
        labels = tuple(mapping.get(lab, lab) for lab in self.labels)
        return GradedLieAlgebra(self.name, self.field, self.degrees, labels, self.constants)

    # -- shape --------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def length(self) -> int:
        return max(self.degrees) if self.degrees else 0

    @property
    def degree_dims(self) -> list[int]:
        dims = [0] * self.length
        for d in self.degrees:
            dims[d - 1] += 1
        return dims

    def block(self, d: int) -> range:
        """Indices of the basis vectors of degree d (contiguous)."""
        lo = next((i for i, e in enumerate(self.degrees) if e >= d), self.dim)
        hi = next((i for i, e in enumerate(self.degrees) if e > d), self.dim)
        return range(lo, hi)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def basis_vector(self, i: int) -> list:
        F = self.field
        v = [F.zero] * self.dim
        v[i] = F.one
        return v

    def vector(self, terms: dict) -> list:
        """Dense vector from {label: coefficient}."""
        F = self.field
        v = [F.zero] * self.dim
        for lab, c in terms.items():
            v[self.index(lab)] = F.add(v[self.index(lab)], F.coerce(c))
        return v

    def describe(self, v: Sequence) -> dict:
        """{label: coefficient} of the nonzero entries of a dense vector."""
        return {self.labels[i]: c for i, c in enumerate(v) if not self.field.is_zero(c)}

    def bracket_basis(self, i: int, j: int) -> dict:
        if i == j:
            return {}
        if i < j:
            return self.constants.get((i, j), {})
        F = self.field
        return {k: F.neg(c) for k, c in self.constants.get((j, i), {}).items()}

    def structure_key(self) -> tuple:
        items = tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.constants.items()))
        return (self.field.name, self.degrees, self.labels, items)

    def __eq__(self, other):
        if not isinstance(other, GradedLieAlgebra):
            return NotImplemented
        return self.name == other.name and self.structure_key() == other.structure_key()

    def __hash__(self):
        return hash(self.structure_key())

    def __repr__(self):
        return f"<GradedLieAlgebra {self.name} dims={self.degree_dims} over {self.field.name}>"


# ---------------------------------------------------------------------------
# brackets and invariants


def bracket(g: GradedLieAlgebra, x: Sequence, y: Sequence) -> list:
    """[x, y] for dense coordinate vectors x, y."""
    if len(x) != g.dim or len(y) != g.dim:
        raise ValueError("dimension mismatch")
    F = g.field
    out = [F.zero] * g.dim
    xs = [(i, a) for i, a in enumerate(x) if not F.is_zero(a)]
    ys = [(j, b) for j, b in enumerate(y) if not F.is_zero(b)]
    for i, a in xs:
        for j, b in ys:
            for k, c in g.bracket_basis(i, j).items():
                out[k] = F.add(out[k], F.mul(F.mul(a, b), c))
    return out


def _sparse_bracket_vec(g: GradedLieAlgebra, u: dict, v: dict) -> dict:
    F = g.field
    out: dict = {}
    for i, a in u.items():
        for j, b in v.items():
            for k, c in g.bracket_basis(i, j).items():
                out[k] = F.add(out.get(k, F.zero), F.mul(F.mul(a, b), c))
    return {k: c for k, c in out.items() if not F.is_zero(c)}


def check_jacobi(g: GradedLieAlgebra) -> list[Violation]:
    """Grading additivity first, then Jacobi over all basis triples.

    An empty list means the algebra passes.  Jacobi is only examined when the
    grading check is clean.
    """
    F = g.field
    bad = []
    for (i, j), vec in sorted(g.constants.items()):
        for k in vec:
            if g.degrees[k] != g.degrees[i] + g.degrees[j]:
                bad.append(Violation("grading", (g.labels[i], g.labels[j], g.labels[k]),
                                     f"deg {g.labels[k]} != deg {g.labels[i]} + deg {g.labels[j]}"))
    if bad:
        return bad
    n = g.dim
    one = F.one
    for i in range(n):
        for j in range(i + 1, n):
            xy = g.bracket_basis(i, j)
            for k in range(j + 1, n):
                if g.degrees[i] + g.degrees[j] + g.degrees[k] > g.length:
                    continue
                total = _sparse_bracket_vec(g, xy, {k: one})
                for part in (_sparse_bracket_vec(g, g.bracket_basis(j, k), {i: one}),
                             _sparse_bracket_vec(g, g.bracket_basis(k, i), {j: one})):
                    for m, c in part.items():
                        total[m] = F.add(total.get(m, F.zero), c)
                total = {m: c for m, c in total.items() if not F.is_zero(c)}
                if total:
                    bad.append(Violation("jacobi", (g.labels[i], g.labels[j], g.labels[k]),
                                         f"Jacobi sum {g.describe(_dense(g, total))}"))
    return bad


def _dense(g: GradedLieAlgebra, sparse: dict) -> list:
    v = [g.field.zero] * g.dim
    for k, c in sparse.items():
        v[k] = c
    return v


# ---------------------------------------------------------------------------
# graded ideals and the lower central series


@dataclass(frozen=True, eq=False)
class GradedIdeal:
    """One subspace of g_d per degree d = 1..length (coordinates inside g_d)."""

    parent: GradedLieAlgebra
    components: tuple

    @property
    def dim(self) -> int:
        return sum(c.dim for c in self.components)

    @property
    def dims(self) -> list[int]:
        return [c.dim for c in self.components]

    def vectors(self) -> list[list]:
        g = self.parent
        out = []
        for d, comp in enumerate(self.components, start=1):
            blk = g.block(d)
            for row in comp.vectors():
                v = [g.field.zero] * g.dim
                for t, c in zip(blk, row):
                    v[t] = c
                out.append(v)
        return out

    def contains(self, v: Sequence) -> bool:
        g = self.parent
        for d, comp in enumerate(self.components, start=1):
            if not comp.contains_vector([v[t] for t in g.block(d)]):
                return False
        return True

    def is_ideal(self) -> bool:
        g = self.parent
        vecs = self.vectors()
        for i in range(g.dim):
            e = g.basis_vector(i)
            for v in vecs:
                if not self.contains(bracket(g, e, v)):
                    return False
        return True

    @staticmethod
    def from_vectors(g: GradedLieAlgebra, vectors: Iterable[Sequence]) -> "GradedIdeal":
        """Graded span of homogeneous vectors (not closed under brackets)."""
        per = {d: [] for d in range(1, g.length + 1)}
        for v in vectors:
            degs = {g.degrees[t] for t, c in enumerate(v) if not g.field.is_zero(c)}
            if len(degs) > 1:
                raise InvariantError("vector is not homogeneous")
            for d in degs:
                per[d].append([v[t] for t in g.block(d)])
        comps = tuple(Subspace.span(g.field, len(g.block(d)), per[d])
                      for d in range(1, g.length + 1))
        return GradedIdeal(g, comps)

    @staticmethod
    def generated_by(g: GradedLieAlgebra, vectors: Iterable[Sequence]) -> "GradedIdeal":
        """Smallest graded ideal containing the given homogeneous vectors."""
        current = GradedIdeal.from_vectors(g, vectors)
        while True:
            new = current.vectors()
            for i in range(g.dim):
                e = g.basis_vector(i)
                new.extend(bracket(g, e, v) for v in current.vectors())
            new = [v for v in new if any(not g.field.is_zero(c) for c in v)]
            nxt = GradedIdeal.from_vectors(g, new)
            if nxt.dim == current.dim:
                return current
            current = nxt

    @staticmethod
    def above(g: GradedLieAlgebra, k: int) -> "GradedIdeal":
        """The ideal of all components of degree > k."""
        comps = tuple(Subspace.full(g.field, len(g.block(d))) if d > k
                      else Subspace.zero(g.field, len(g.block(d)))
                      for d in range(1, g.length + 1))
        return GradedIdeal(g, comps)


def lower_central_series(g: GradedLieAlgebra) -> list[GradedIdeal]:
    """Nonzero terms g^1 = g, g^{k+1} = [g, g^k]."""
    F = g.field
    N = g.length
    first = GradedIdeal(g, tuple(Subspace.full(F, len(g.block(d))) for d in range(1, N + 1)))
    series = [first] if g.dim else []
    current = first
    while current.dim:
        per = {d: [] for d in range(1, N + 1)}
        for v in current.vectors():
            vs = {t: c for t, c in enumerate(v) if not F.is_zero(c)}
            for i in range(g.dim):
                w = _sparse_bracket_vec(g, {i: F.one}, vs)
                if w:
                    d = g.degrees[next(iter(w))]
                    blk = g.block(d)
                    per[d].append([w.get(t, F.zero) for t in blk])
        nxt = GradedIdeal(g, tuple(Subspace.span(F, len(g.block(d)), per[d])
                                   for d in range(1, N + 1)))
        if nxt.dim == 0:
            break
        series.append(nxt)
        current = nxt
    return series


def natural_grading_dims(g: GradedLieAlgebra) -> list[int]:
    dims = [t.dim for t in lower_central_series(g)] + [0]
    return [a - b for a, b in zip(dims, dims[1:])]


def is_carnot(g: GradedLieAlgebra) -> bool:
    """True iff [g_1, g_i] spans g_{i+1} for every i < length."""
    F = g.field
    dims = g.degree_dims
    if any(d == 0 for d in dims):
        return False
    for i in range(1, g.length):
        nxt = g.block(i + 1)
        rows = []
        for a in g.block(1):
            for b in g.block(i):
                w = g.bracket_basis(a, b)
                if w:
                    rows.append([w.get(t, F.zero) for t in nxt])
        if Subspace.span(F, len(nxt), rows).dim != len(nxt):
            return False
    return True


def width_ok_3_2(g: GradedLieAlgebra) -> bool:
    dims = g.degree_dims + [0]
    return all(a + b <= 3 for a, b in zip(dims, dims[1:]))


class GrowthProfile(NamedTuple):
    values: tuple       # F(1), ..., F(N)
    width: int
    slope: Fraction


def growth(g: GradedLieAlgebra) -> GrowthProfile:
    """F(n) = dim g/g^{n+1}, from the lower central series."""
    dims = natural_grading_dims(g)
    vals, acc = [], 0
    for d in dims:
        acc += d
        vals.append(acc)
    N = len(vals)
    slope = Fraction(vals[-1] - vals[0], N - 1) if N > 1 else Fraction(0)
    return GrowthProfile(tuple(vals), max(dims) if dims else 0, slope)


# ---------------------------------------------------------------------------
# quotients, extensions, associated graded


def quotient(g: GradedLieAlgebra, ideal: GradedIdeal, name: str | None = None) -> GradedLieAlgebra:
    """g / ideal, keeping the basis vectors at non-pivot positions of each component."""
    if ideal.parent is not g and ideal.parent.structure_key() != g.structure_key():
        raise InvariantError("ideal belongs to another algebra")
    if not ideal.is_ideal():
        raise InvariantError("subspace is not an ideal")
    F = g.field
    keep = []
    for d, comp in enumerate(ideal.components, start=1):
        blk = list(g.block(d))
        piv = set(comp.pivots())
        keep.extend(blk[t] for t in range(len(blk)) if t not in piv)
    pos = {old: new for new, old in enumerate(keep)}

    def project(sparse: dict) -> dict:
        v = _dense(g, sparse)
        out = {}
        for d, comp in enumerate(ideal.components, start=1):
            blk = list(g.block(d))
            r = comp.reduce([v[t] for t in blk])
            for t, c in zip(blk, r):
                if not F.is_zero(c):
                    out[t] = c
        return out

    basis = [(g.labels[t], g.degrees[t]) for t in keep]
    rels = []
    for a in range(len(keep)):
        for b in range(a + 1, len(keep)):
            w = project(g.bracket_basis(keep[a], keep[b]))
            if w:
                rels.append((g.labels[keep[a]], g.labels[keep[b]],
                             {g.labels[k]: c for k, c in w.items() if k in pos}))
    return GradedLieAlgebra.from_relations(name or f"{g.name}/I", F, basis, rels)


def truncate(g: GradedLieAlgebra, n: int, name: str | None = None) -> GradedLieAlgebra:
    """Quotient by all components of degree > n."""
    return quotient(g, GradedIdeal.above(g, n), name or g.name)


def central_extension(g: GradedLieAlgebra, cocycles: Sequence, labels: Sequence[str] | None = None,
                      name: str | None = None) -> GradedLieAlgebra:
    """[x, y]_new = [x, y] + sum_t omega_t(x, y) z_t with z_t central of degree grading_t.

    Cocycles must be closed.  Linear dependence modulo coboundaries is not an
    error: the result is then simply not Carnot.
    """
    from .cohomology import d2  # cohomology imports this module

    F = g.field
    if labels is None:
        labels = ["z"] if len(cocycles) == 1 else [f"z{t + 1}" for t in range(len(cocycles))]
    for lab in labels:
        if lab in g.labels:
            raise InvariantError(f"label {lab} already used")
    for w in cocycles:
        if w.arity != 2:
            raise InvariantError("central extensions need 2-cochains")
        if not d2(g, w).is_zero():
            raise InvariantError("cochain is not closed")
    basis = list(zip(g.labels, g.degrees))
    basis += [(lab, w.grading) for lab, w in zip(labels, cocycles)]
    rels = []
    pairs = set(g.constants)
    for w in cocycles:
        pairs |= set(w.coeffs)
    for (i, j) in sorted(pairs):
        terms = {g.labels[k]: c for k, c in g.constants.get((i, j), {}).items()}
        for lab, w in zip(labels, cocycles):
            c = w.coeffs.get((i, j))
            if c is not None and not F.is_zero(c):
                terms[lab] = c
        rels.append((g.labels[i], g.labels[j], terms))
    return GradedLieAlgebra.from_relations(name or f"{g.name}+ext", F, basis, rels)


def associated_graded(g: GradedLieAlgebra, name: str | None = None) -> GradedLieAlgebra:
    """gr g with respect to the lower central series.

    The section of g^i / g^{i+1} is taken greedily from the canonical basis
    rows of g^i in stored order.
    """
    F = g.field
    series = [Subspace.span(F, g.dim, t.vectors()) for t in lower_central_series(g)]
    series.append(Subspace.zero(F, g.dim))
    sections = [complement_basis(series[i + 1], series[i].vectors())
                for i in range(len(series) - 1)]
    basis, vecs, level = [], [], []
    for lev, sec in enumerate(sections, start=1):
        for k, v in enumerate(sec):
            nz = [t for t, c in enumerate(v) if not F.is_zero(c)]
            if len(nz) == 1 and v[nz[0]] == F.one:
                lab = g.labels[nz[0]]
            else:
                lab = f"s{lev}_{k + 1}"
            basis.append((lab, lev))
            vecs.append(v)
            level.append(lev)
    # coordinates modulo the next filtration term
    solvers = {}
    for lev, sec in enumerate(sections, start=1):
        cols = sec + series[lev].vectors()
        solvers[lev] = (Matrix.from_rows(F, cols, g.dim).transpose(), len(sec))
    start = {}
    for idx, lev in enumerate(level):
        start.setdefault(lev, idx)
    rels = []
    for a in range(len(vecs)):
        for b in range(a + 1, len(vecs)):
            lev = level[a] + level[b]
            if lev not in solvers:
                continue
            w = bracket(g, vecs[a], vecs[b])
            mat, k = solvers[lev]
            x = solve(mat, w)
            if x is None:
                raise InvariantError("bracket left the filtration term")
            terms = {basis[start[lev] + t][0]: x[t] for t in range(k) if not F.is_zero(x[t])}
            if terms:
                rels.append((basis[a][0], basis[b][0], terms))
    return GradedLieAlgebra.from_relations(name or f"gr {g.name}", F, basis, rels)


# ---------------------------------------------------------------------------
# JSON interchange


def to_json(g: GradedLieAlgebra) -> dict:
    F = g.field
    brackets = []
    for (i, j) in sorted(g.constants):
        terms = [{"k": k, "coeff": F.format(c)} for k, c in sorted(g.constants[(i, j)].items())]
        brackets.append({"i": i, "j": j, "terms": terms})
    return {"name": g.name, "field": F.name, "degrees": g.degree_dims,
            "labels": list(g.labels), "brackets": brackets}


def dumps(g: GradedLieAlgebra) -> str:
    return json.dumps(to_json(g), sort_keys=True, indent=1)


def from_json(doc: dict) -> GradedLieAlgebra:
    F = field_from_name(doc["field"])
    dims = [int(d) for d in doc["degrees"]]
    labels = list(doc["labels"])
    if sum(dims) != len(labels):
        raise InvariantError("degrees do not add up to the number of labels")
    degrees = [d for d, cnt in enumerate(dims, start=1) for _ in range(cnt)]
    basis = list(zip(labels, degrees))
    rels = []
    seen = {}
    for br in doc["brackets"]:
        i, j = int(br["i"]), int(br["j"])
        terms = {}
        for t in br["terms"]:
            k = int(t["k"])
            terms[labels[k]] = F.add(terms.get(labels[k], F.zero), F.parse(str(t["coeff"])))
        if i == j and any(not F.is_zero(c) for c in terms.values()):
            raise InvariantError(f"antisymmetry: [{labels[i]},{labels[i]}] is nonzero")
        key = (min(i, j), max(i, j))
        sign_terms = terms if i < j else {z: F.neg(c) for z, c in terms.items()}
        if key in seen and seen[key] != sign_terms:
            raise InvariantError(f"antisymmetry: [{labels[i]},{labels[j]}] given inconsistently")
        seen[key] = sign_terms
        rels.append((labels[i], labels[j], terms))
    return GradedLieAlgebra.from_relations(doc.get("name", ""), F, basis, rels)


def loads(text: str) -> GradedLieAlgebra:
    return from_json(json.loads(text))
