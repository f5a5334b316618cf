"""Graded homomorphisms: forced extension from degree one, exhaustive search over F_p.

Maps are stored as full matrices whose column j is the image of the j-th
source basis vector.  Because both algebras are generated in degree one, a
graded map is determined by its degree-one block A.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .exactlin import (GF, Field, GaussianField, GaussianRational, Matrix, PrimeField,
                       Subspace, inverse)
from .liealg import GradedLieAlgebra, InvariantError, bracket, is_carnot


class UnsupportedSearch(ValueError):
    """Exhaustive search requested outside the supported size."""


@dataclass(frozen=True)
class Deg1Map:
    source: GradedLieAlgebra
    target: GradedLieAlgebra
    A: Matrix       # dim h_1 x dim g_1


@dataclass(frozen=True)
class GradedMap:
    source: GradedLieAlgebra
    target: GradedLieAlgebra
    matrix: Matrix  # dim h x dim g

    def block(self, d: int) -> Matrix:
        g, h = self.source, self.target
        rows, cols = list(h.block(d)), list(g.block(d))
        return Matrix.from_rows(self.matrix.field,
                                [[self.matrix[r, c] for c in cols] for r in rows], len(cols))

    def image(self, v: Sequence) -> list:
        return self.matrix.apply(v)

    def reduce_mod(self, p: int) -> "GradedMap":
        F = GF(p)
        g, h = self.source.with_field(F), self.target.with_field(F)
        m = Matrix.from_rows(F, [[F.coerce(x) for x in row] for row in self.matrix.tolist()],
                             self.matrix.cols)
        return GradedMap(g, h, m)


class IsoCertificate(NamedTuple):
    kind: str                   # "witness" or "refutation"
    prime: int | None
    search_size: int
    exhausted: bool
    witness: GradedMap | None = None
    note: str = ""

    @property
    def is_witness(self) -> bool:
        return self.kind == "witness"


# ---------------------------------------------------------------------------
# spanning trees


def bracket_tree(g: GradedLieAlgebra, policy: str = "first") -> dict:
    """For each degree d >= 2, pairs (x, y) with x in g_1, y in g_{d-1} whose brackets span g_d.

    ``policy`` "first" scans pairs in increasing order, "last" in decreasing
    order; both give valid trees.  Raises InvariantError when g is not
    generated in degree one.
    """
    F = g.field
    tree = {}
    for d in range(2, g.length + 1):
        blk = list(g.block(d))
        pairs = [(x, y) for x in g.block(1) for y in g.block(d - 1)]
        if policy == "last":
            pairs.reverse()
        chosen, span = [], Subspace.zero(F, len(blk))
        for x, y in pairs:
            w = g.bracket_basis(x, y)
            v = [w.get(t, F.zero) for t in blk]
            if not span.contains_vector(v):
                chosen.append((x, y))
                span = Subspace.span(F, len(blk), span.vectors() + [v])
                if span.dim == len(blk):
                    break
        if span.dim != len(blk):
            raise InvariantError(f"degree {d} is not generated by brackets with degree one")
        tree[d] = chosen
    return tree


# ---------------------------------------------------------------------------
# exact extension


def _compat(g: GradedLieAlgebra, h: GradedLieAlgebra, cols: list[list]) -> bool:
    F = g.field
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            if g.degrees[i] + g.degrees[j] > g.length:
                continue
            lhs = [F.zero] * h.dim
            for k, c in g.bracket_basis(i, j).items():
                for r in range(h.dim):
                    if not F.is_zero(cols[k][r]):
                        lhs[r] = F.add(lhs[r], F.mul(c, cols[k][r]))
            if lhs != bracket(h, cols[i], cols[j]):
                return False
    return True


def _blocks_invertible(g, h, cols) -> bool:
    F = g.field
    for d in range(1, g.length + 1):
        rows = [[cols[c][r] for c in g.block(d)] for r in h.block(d)]
        if len(rows) != len(g.block(d)):
            return False
        if rows and Matrix.from_rows(F, rows, len(g.block(d))).rank() != len(rows):
            return False
    return True


def extend_deg1(g: GradedLieAlgebra, h: GradedLieAlgebra, A: Matrix | Deg1Map,
                policy: str = "first", require_iso: bool = True) -> GradedMap | None:
    """Unique graded extension of A, or None when some structure constant is violated."""
    if isinstance(A, Deg1Map):
        A = A.A
    if not is_carnot(g):
        raise InvariantError("source algebra is not generated in degree one")
    if g.length != h.length:
        return None
    F = g.field
    if h.field != F:
        raise InvariantError("algebras live over different fields")
    tree = bracket_tree(g, policy)
    cols = [[F.zero] * h.dim for _ in range(g.dim)]
    g1, h1 = list(g.block(1)), list(h.block(1))
    if A.rows != len(h1) or A.cols != len(g1):
        return None
    for c, gc in enumerate(g1):
        for r, hr in enumerate(h1):
            cols[gc][hr] = F.coerce(A[r, c])
    for d in range(2, g.length + 1):
        gb, hb = list(g.block(d)), list(h.block(d))
        pairs = tree[d]
        # M: columns [x_t, y_t] in g_d ; N: columns [phi x_t, phi y_t] in h_d
        M = Matrix.from_rows(F, [[g.bracket_basis(x, y).get(t, F.zero) for t in gb]
                                 for x, y in pairs], len(gb)).transpose()
        Ncols = []
        for x, y in pairs:
            w = bracket(h, cols[x], cols[y])
            if any(not F.is_zero(w[t]) for t in range(h.dim) if h.degrees[t] != d):
                return None
            Ncols.append([w[t] for t in hb])
        if not hb:
            if any(Ncols):
                pass
            return None
        N = Matrix.from_rows(F, Ncols, len(hb)).transpose()
        block = N @ inverse(M)
        for c, gc in enumerate(gb):
            for r, hr in enumerate(hb):
                cols[gc][hr] = block[r, c]
    if not _compat(g, h, cols):
        return None
    if require_iso and not _blocks_invertible(g, h, cols):
        return None
    mat = Matrix.from_rows(F, [[cols[c][r] for c in range(g.dim)] for r in range(h.dim)], g.dim)
    return GradedMap(g, h, mat)


def verify_graded_iso(phi: GradedMap) -> bool:
    """Every degree block square and invertible, and phi[x, y] = [phi x, phi y] on basis pairs."""
    g, h = phi.source, phi.target
    if g.degree_dims != h.degree_dims:
        return False
    F = g.field
    for r in range(h.dim):
        for c in range(g.dim):
            if h.degrees[r] != g.degrees[c] and not F.is_zero(phi.matrix[r, c]):
                return False
    cols = [[phi.matrix[r, c] for r in range(h.dim)] for c in range(g.dim)]
    return _blocks_invertible(g, h, cols) and _compat(g, h, cols)


def map_from_images(g: GradedLieAlgebra, h: GradedLieAlgebra, images: dict) -> GradedMap:
    """GradedMap from {source label: {target label: coeff}}; unspecified labels map to 0."""
    F = g.field
    rows = [[F.zero] * g.dim for _ in range(h.dim)]
    for src, terms in images.items():
        c = g.index(src)
        for tgt, coeff in terms.items():
            rows[h.index(tgt)][c] = F.coerce(coeff)
    return GradedMap(g, h, Matrix.from_rows(F, rows, g.dim))


def compose(phi: GradedMap, psi: GradedMap) -> GradedMap:
    """phi after psi."""
    return GradedMap(psi.source, phi.target, phi.matrix @ psi.matrix)


def invert(phi: GradedMap) -> GradedMap:
    return GradedMap(phi.target, phi.source, inverse(phi.matrix))


# ---------------------------------------------------------------------------
# prime-field kernels


def _int_mod(F: PrimeField, x) -> int:
    return int(F.coerce(x))


def fp_plan(g: GradedLieAlgebra, h: GradedLieAlgebra, p: int, policy: str = "first") -> dict | None:
    """Integer arrays describing g -> h over F_p for the batched kernel.

    Returns None when the dimension vectors differ (no graded isomorphism).
    """
    if g.degree_dims != h.degree_dims:
        return None
    F = GF(p)
    g, h = g.with_field(F), h.with_field(F)
    n = g.dim
    starts = np.array([g.block(d).start for d in range(1, g.length + 1)] + [n], dtype=np.int64)
    tree = bracket_tree(g, policy)
    tree_x = np.zeros(n, dtype=np.int64)
    tree_y = np.zeros(n, dtype=np.int64)
    minv = np.zeros((n, n), dtype=np.int64)
    for d, pairs in tree.items():
        blk = list(g.block(d))
        M = Matrix.from_rows(F, [[g.bracket_basis(x, y).get(t, 0) for t in blk]
                                 for x, y in pairs], len(blk)).transpose()
        Mi = inverse(M)
        for t, (x, y) in enumerate(pairs):
            tree_x[blk[0] + t] = x
            tree_y[blk[0] + t] = y
        for r in range(len(blk)):
            for c in range(len(blk)):
                minv[blk[r], blk[c]] = Mi[r, c]
    ha, hb, hc, hv = [], [], [], []
    for (i, j), vec in sorted(h.constants.items()):
        for k, c in sorted(vec.items()):
            ha.append(i)
            hb.append(j)
            hc.append(k)
            hv.append(int(c))
    pi, pj, gco = [], [], []
    for i in range(n):
        for j in range(i + 1, n):
            if g.degrees[i] + g.degrees[j] > g.length:
                continue
            row = [0] * n
            for k, c in g.bracket_basis(i, j).items():
                row[k] = int(c)
            pi.append(i)
            pj.append(j)
            gco.append(row)
    arr = lambda v: np.array(v, dtype=np.int64)
    return {"n": n, "starts": starts, "tree_x": tree_x, "tree_y": tree_y, "minv": minv,
            "ha": arr(ha), "hb": arr(hb), "hc": arr(hc), "hv": arr(hv),
            "pair_i": arr(pi), "pair_j": arr(pj),
            "gcoef": np.array(gco, dtype=np.int64).reshape(len(pi), n),
            "field": F, "source": g, "target": h}


def gl_candidates(d: int, p: int) -> np.ndarray:
    """All invertible d x d matrices mod p, lexicographic in row-major entries."""
    if d > 2:
        raise UnsupportedSearch(f"exhaustive search is limited to dim g_1 <= 2 (got {d})")
    allm = np.array(list(itertools.product(range(p), repeat=d * d)), dtype=np.int64).reshape(-1, d, d)
    if d == 1:
        keep = allm[:, 0, 0] % p != 0
    else:
        det = (allm[:, 0, 0] * allm[:, 1, 1] - allm[:, 0, 1] * allm[:, 1, 0]) % p
        keep = det != 0
    return allm[keep]


def gl_order(d: int, p: int) -> int:
    out = 1
    for i in range(d):
        out *= p ** d - p ** i
    return out


def _map_from_phi(plan: dict, phi: np.ndarray) -> GradedMap:
    F = plan["field"]
    return GradedMap(plan["source"], plan["target"],
                     Matrix.from_rows(F, [[int(x) % F.characteristic for x in row] for row in phi],
                                      plan["n"]))


def iso_search_fp(g: GradedLieAlgebra, h: GradedLieAlgebra, p: int) -> IsoCertificate:
    """First witness over F_p in lexicographic order of A, or a refutation covering GL(d, p)."""
    d1 = g.degree_dims[0] if g.dim else 0
    if d1 > 2 or (h.dim and h.degree_dims[0] > 2):
        raise UnsupportedSearch("exhaustive search is limited to dim g_1 <= 2")
    plan = fp_plan(g, h, p)
    if plan is None:
        return IsoCertificate("refutation", p, 0, True, None, "dimension vectors differ")
    cands = gl_candidates(d1, p)
    ok, _ = _kernels.extend_candidates(cands, p, plan)
    hits = np.nonzero(ok)[0]
    if hits.size == 0:
        return IsoCertificate("refutation", p, len(cands), True)
    first = cands[hits[0]:hits[0] + 1]
    _, phis = _kernels.extend_candidates(first, p, plan, want_phi=True)
    return IsoCertificate("witness", p, int(hits[0]) + 1, False, _map_from_phi(plan, phis[0]))


class AutGroup(NamedTuple):
    prime: int
    order: int
    matrices: np.ndarray    # (order, d1, d1) degree-one blocks
    plan: dict

    def maps(self) -> list[Deg1Map]:
        F = self.plan["field"]
        g = self.plan["source"]
        return [Deg1Map(g, g, Matrix.from_rows(F, [[int(x) for x in r] for r in m], m.shape[1]))
                for m in self.matrices]

    def full_matrices(self) -> np.ndarray:
        _, phis = _kernels.extend_candidates(self.matrices, self.prime, self.plan, want_phi=True)
        return phis


def aut_group_fp(g: GradedLieAlgebra, p: int) -> AutGroup:
    """All A in GL(dim g_1, F_p) that extend to graded automorphisms of g."""
    plan = fp_plan(g, g, p)
    cands = gl_candidates(g.degree_dims[0], p)
    ok, _ = _kernels.extend_candidates(cands, p, plan)
    return AutGroup(p, int(ok.sum()), cands[ok], plan)


# ---------------------------------------------------------------------------
# exact witnesses found by small search


def _small_scalars(field: Field, bound: int) -> list:
    ints = [0] + [s * k for k in range(1, bound + 1) for s in (1, -1)]
    if isinstance(field, GaussianField):
        return [GaussianRational(Fraction(a), Fraction(b)) for a in ints for b in ints]
    return [field.coerce(k) for k in ints]


def find_exact_witness(g: GradedLieAlgebra, h: GradedLieAlgebra, bound: int = 2,
                       prefilter_prime: int | None = None) -> GradedMap | None:
    """Search degree-one matrices with small entries for an exact isomorphism.

    Candidates are first screened over F_p (p = 13 for Q(i), otherwise 101)
    with the batched kernel, then confirmed exactly.
    """
    if g.degree_dims != h.degree_dims or g.field != h.field:
        return None
    F = g.field
    d1 = g.degree_dims[0]
    if d1 > 2:
        raise UnsupportedSearch("exact search is limited to dim g_1 <= 2")
    p = prefilter_prime or (13 if isinstance(F, GaussianField) else 101)
    Fp = GF(p)
    vals = _small_scalars(F, bound)
    combos = np.array(list(itertools.product(range(len(vals)), repeat=d1 * d1)), dtype=np.int64)
    vals_p = np.array([int(Fp.coerce(v)) for v in vals], dtype=np.int64)
    red = vals_p[combos].reshape(-1, d1, d1)
    try:
        plan = fp_plan(g, h, p)
    except (InvariantError, ZeroDivisionError, ValueError):
        plan = None
    if plan is not None:
        ok, _ = _kernels.extend_candidates(red, p, plan)
        order = np.nonzero(ok)[0]
    else:
        order = range(len(combos))
    for idx in order:
        c = combos[idx]
        A = Matrix.from_rows(F, [[vals[c[r * d1 + s]] for s in range(d1)] for r in range(d1)], d1)
        if A.rank() < d1:
            continue
        phi = extend_deg1(g, h, A)
        if phi is not None:
            return phi
    return None


# ---------------------------------------------------------------------------
# closed-form automorphisms


def _conic_point(kind: str, q: Fraction) -> tuple[Fraction, Fraction]:
    q = Fraction(q)
    if kind == "circle":
        return (1 - q * q) / (1 + q * q), 2 * q / (1 + q * q)
    return (q * q + 1) / (q * q - 1), 2 * q / (q * q - 1)


def closed_form_automorphism(g: GradedLieAlgebra, family: str, params: dict,
                             z_weight: tuple = (2, 2)) -> GradedMap:
    """Instantiate a tabulated automorphism formula on the basis of g.

    Families and parameters:
      m0_S   alpha, beta, mu        (b_r read as [b_1, a_{r-1}])
      torus  alpha, mu              (m1, m1^S, m0,2^S, m0,3^S)
      n1+    c, t (or cos, sin), sign
      n1-    c, t (or cosh, sinh), sign
      n2     alpha, mu  ; n2_3 adds phi(z) = alpha^i mu^j z with (i, j) = z_weight
    """
    F = g.field
    P = {k: F.coerce(Fraction(v)) if not isinstance(v, str) else v for k, v in params.items()}
    img: dict = {}

    def pw(x, e):
        out = F.one
        for _ in range(e):
            out = F.mul(out, x)
        return out

    if family in ("m0_S", "torus"):
        al, mu = P["alpha"], P["mu"]
        be = P.get("beta", F.zero) if family == "m0_S" else F.zero
        for lab, d in zip(g.labels, g.degrees):
            if lab == "a1":
                img[lab] = {"a1": al, "b1": be}
            elif lab == "b1":
                img[lab] = {"b1": mu}
            elif lab.startswith("a"):
                r = int(lab[1:])
                if f"b{r}" in g.labels and family == "m0_S":
                    # b_r of the formula is [b_1, a_{r-1}] = -b_r of the relation table
                    img[lab] = {lab: F.mul(pw(al, r - 1), mu), f"b{r}": F.neg(F.mul(F.mul(pw(al, r - 2), mu), be))}
                elif family == "torus" and d >= 2 and _is_torus_top(g, lab):
                    img[lab] = {lab: F.mul(pw(al, r - 2), pw(mu, 2))}
                else:
                    img[lab] = {lab: F.mul(pw(al, r - 1), mu)}
            else:  # b_r
                r = int(lab[1:])
                img[lab] = {lab: F.mul(pw(al, r - 2), pw(mu, 2))}
    elif family in ("n1+", "n1-"):
        c = P["c"]
        if "t" in params:
            co, si = _conic_point("circle" if family == "n1+" else "hyperbola", Fraction(params["t"]))
            co, si = F.coerce(co), F.coerce(si)
        else:
            co, si = (P["cos"], P["sin"]) if family == "n1+" else (P["cosh"], P["sinh"])
        sg = F.one if params.get("sign", "+") == "+" else F.neg(F.one)
        tag = family[-1]
        for lab, d in zip(g.labels, g.degrees):
            cd = pw(c, d)
            if lab.startswith("u"):
                img[lab] = {lab: F.mul(cd, co), f"v{d}{tag}": F.mul(cd, si)}
            elif lab.startswith("v"):
                a = F.neg(si) if family == "n1+" else si
                img[lab] = {f"u{d}": F.mul(F.mul(sg, cd), a), lab: F.mul(F.mul(sg, cd), co)}
            else:
                img[lab] = {lab: F.mul(sg, cd)}
    elif family in ("n2", "n2_3"):
        from .catalog import bigrading_n2
        al, mu = P["alpha"], P["mu"]
        for lab in g.labels:
            if lab.startswith("f"):
                pp, qq = bigrading_n2(int(lab[1:]))
                img[lab] = {lab: F.mul(pw(al, pp), pw(mu, qq))}
            elif lab == "c":
                raise InvariantError("closed form not tabulated for the identified element")
            elif lab == "z":
                img[lab] = {lab: F.mul(pw(al, z_weight[0]), pw(mu, z_weight[1]))}
    else:
        raise InvariantError(f"no closed-form automorphism for {family!r}")
    return map_from_images(g, g, img)


def _is_torus_top(g: GradedLieAlgebra, lab: str) -> bool:
    # a_r above the filiform chain: [b_1, a_{r-1}] involves a_r, or a_{r-1} is such a vector
    r = int(lab[1:])
    prev = f"a{r - 1}"
    if r < 3 or prev not in g.labels:
        return False
    if g.index(lab) in g.bracket_basis(g.index("b1"), g.index(prev)):
        return True
    return _is_torus_top(g, prev)


def verify_aut_formula(g: GradedLieAlgebra, family: str, params: dict, **kw) -> bool:
    """Instantiate the closed-form automorphism and confirm it is a graded automorphism."""
    return verify_graded_iso(closed_form_automorphism(g, family, params, **kw))


# ---------------------------------------------------------------------------
# JSON


def witness_to_json(phi: GradedMap) -> dict:
    F = phi.matrix.field
    blocks = []
    for d in range(1, phi.source.length + 1):
        b = phi.block(d)
        blocks.append({"degree": d, "rows": [[F.format(x) for x in row] for row in b.tolist()]})
    return {"kind": "witness", "field": F.name, "source": phi.source.name,
            "target": phi.target.name, "blocks": blocks}


def witness_from_json(doc: dict, g: GradedLieAlgebra, h: GradedLieAlgebra) -> GradedMap:
    from .exactlin import field_from_name
    F = field_from_name(doc["field"])
    g, h = g.with_field(F), h.with_field(F)
    rows = [[F.zero] * g.dim for _ in range(h.dim)]
    for blk in doc["blocks"]:
        d = int(blk["degree"])
        hr, gc = list(h.block(d)), list(g.block(d))
        for r, row in enumerate(blk["rows"]):
            for c, x in enumerate(row):
                rows[hr[r]][gc[c]] = F.parse(str(x))
    return GradedMap(g, h, Matrix.from_rows(F, rows, g.dim))


def certificate_to_json(cert: IsoCertificate) -> dict:
    if cert.is_witness:
        doc = witness_to_json(cert.witness)
        doc["prime"] = cert.prime
        return doc
    return {"kind": "refutation", "prime": cert.prime, "group_order": cert.search_size,
            "exhausted": cert.exhausted, "note": cert.note}
