"""Certified enumeration of narrow Carnot extensions and the classification tree.

Representatives come from a family playbook keyed by the catalog spec of the
parent.  For every parent the engine then certifies

* each representative is a valid Carnot algebra whose top quotient is the
  parent (exact witness over the base field),
* representatives are pairwise non-isomorphic (exhaustive F_p refutations),
* every width-admissible cocycle subspace of H^2_{N+1} over the probe prime
  lies in the Aut-orbit of some representative.

Coverage failures are reported, never hidden.
"""

from __future__ import annotations

import json
import logging
import random
from collections import deque
from dataclasses import dataclass, field as dc_field
from itertools import combinations, product
from typing import Sequence

import numpy as np

from . import _kernels
from .catalog import FamilySpec, QQ, all_instances, build, family_name, top_slice
from .cohomology import Cochain, cochain_to_json, h2_graded, pullback
from .exactlin import GF, GaussianField, Field, inverse
from .liealg import GradedLieAlgebra, check_jacobi, is_carnot, truncate, width_ok_3_2
from .morphism import (GradedMap, IsoCertificate, aut_group_fp, certificate_to_json,
                       find_exact_witness, iso_search_fp, verify_graded_iso, witness_to_json)

log = logging.getLogger(__name__)

REAL = "real_like"
COMPLEX = "complex_like"
MODES = (REAL, COMPLEX)

# refutation primes: p = 3 mod 4 keeps -1 a non-square (real-like), p = 1 mod 4 splits it
DEFAULT_PRIMES = {REAL: (7, 11, 19, 23), COMPLEX: (13, 17, 29, 37)}
PROBE_PRIME = {REAL: 7, COMPLEX: 13}
SAMPLE_LIMIT = 10 ** 5
DEFAULT_SEED = 20240501


class FrontierError(RuntimeError):
    """A parent whose extensions are not fully accounted for."""


def _check_mode(mode: str) -> str:
    if mode in ("real", REAL):
        return REAL
    if mode in ("complex", COMPLEX):
        return COMPLEX
    raise ValueError(f"unknown mode {mode!r}")


def mode_field(mode: str) -> Field:
    return QQ if _check_mode(mode) == REAL else GaussianField()


def node_name(sp: FamilySpec, mode: str) -> str:
    """Catalog name; in complex_like mode the +/- pairs carry no sign."""
    if _check_mode(mode) == COMPLEX and sp.family == "n1pm":
        return f"n1({sp.n})"
    if _check_mode(mode) == COMPLEX and sp.family == "n11":
        return f"n1,1({sp.n})"
    return family_name(sp)


# ---------------------------------------------------------------------------
# playbook


def _m0(n: int, S, F) -> FamilySpec:
    S = tuple(sorted(S))
    if n == 3 and S == (3,):
        return FamilySpec("L23", 3, field=F)
    return FamilySpec("m0_S" if S else "m0", n, S, field=F)


def playbook(sp: FamilySpec, mode: str) -> list[tuple[FamilySpec, int]]:
    """Representative extensions (spec, added dimension) of a catalog algebra.

    An empty list means the family is terminal.
    """
    mode = _check_mode(mode)
    f, n, S, F = sp.family, sp.n, sp.S, sp.field
    if f == "L23":
        f, S = "m0_S", (3,)
    out: list[tuple[FamilySpec, int]] = []
    if f in ("m0", "m0_S"):
        if n % 2 == 0:
            out = [(_m0(n + 1, S, F), 1), (_m0(n + 1, S + (n + 1,), F), 2)]
            if n >= 4:
                out.append((FamilySpec("m1_S" if S else "m1", n + 1, S, field=F), 1))
            return out
        out = [(_m0(n + 1, S, F), 1)]
        if n in S:
            rest = tuple(r for r in S if r != n)
            if n == 3:
                signs = "+-" if mode == REAL else "-"
                out += [(FamilySpec("n1pm", 4, (), sg, field=F), 1) for sg in signs]
            elif n == 5:
                out.append((FamilySpec("n2_3" if rest else "n2", 6, field=F), 1))
            else:
                out.append((FamilySpec("m02_S", n + 1, rest, field=F), 1))
        return out
    if f == "m02_S":
        return [(FamilySpec("m03_S", n + 1, S, field=F), 1)]
    if f == "n1pm":
        if n % 2 == 0:
            return [(FamilySpec("n1pm", n + 1, (), sp.sign, field=F), 2),
                    (FamilySpec("n11", n + 1, (), sp.sign, field=F), 1)]
        return [(FamilySpec("n1pm", n + 1, (), sp.sign, field=F), 1)]
    if f in ("n2", "n2_3"):
        quot = "n2s" if f == "n2" else "n2s_3"
        if n % 6 in (0, 4):
            return [(FamilySpec(f, n + 1, field=F), 2)] + \
                [(FamilySpec(quot, n + 1, (), None, s, F), 1) for s in (1, 2, 3)]
        return [(FamilySpec(f, n + 1, field=F), 1)]
    if f in ("m1", "m1_S", "m03_S", "n11", "n2s", "n2s_3"):
        return []
    raise FrontierError(f"no playbook entry for {family_name(sp)}")


def root_spec(mode: str) -> FamilySpec:
    return FamilySpec("m0", 2, field=mode_field(mode))


# ---------------------------------------------------------------------------
# data types


@dataclass
class ExtensionNode:
    name: str
    spec: FamilySpec
    algebra: GradedLieAlgebra
    level: int
    parent: str | None = None
    ext_dim: int = 0
    cocycles: tuple = ()                     # forms on the parent basis
    parent_witness: GradedMap | None = None  # top quotient -> parent
    catalog_match: str | None = None
    terminal: bool = False
    certificate: "OrbitCertificate | None" = None

    def to_json(self, parent_alg: GradedLieAlgebra | None = None) -> dict:
        doc = {"name": self.name, "level": self.level, "parent": self.parent,
               "ext_dim": self.ext_dim, "terminal": self.terminal,
               "catalog_match": self.catalog_match, "dims": self.algebra.degree_dims}
        if parent_alg is not None:
            doc["cocycles"] = [cochain_to_json(w, parent_alg) for w in self.cocycles]
        if self.parent_witness is not None:
            doc["parent_witness"] = witness_to_json(self.parent_witness)
        if self.certificate is not None:
            doc["certificate"] = self.certificate.to_json()
        return doc


@dataclass
class OrbitCertificate:
    parent: str
    mode: str
    grading: int
    h2_dim: int
    h2_dim_fp: int
    admissible_dims: tuple
    representatives: list                   # ExtensionNode
    pairwise_refutations: dict              # (name, name) -> [IsoCertificate, ...]
    probe_prime: int
    probe_policy: str
    seed: int | None
    probe_count: int
    orbits: list                            # [{"rep", "j", "size"}]
    uncovered: list                         # [{"j", "probe", "size"}]
    problems: list = dc_field(default_factory=list)
    _coverage: dict = dc_field(default_factory=dict, repr=False)
    _generators: list = dc_field(default_factory=list, repr=False)

    @property
    def refuted_pairs(self) -> bool:
        return all(any(c.kind == "refutation" for c in certs)
                   for certs in self.pairwise_refutations.values())

    @property
    def complete(self) -> bool:
        return not self.problems and not self.uncovered and self.refuted_pairs

    def probe_witness(self, probe) -> tuple[str, list] | None:
        """(representative, generator word) carrying the representative's subspace to ``probe``.

        Each generator is an automorphism over F_p acting by pullback on
        H^2 coordinates; applying the word left to right reproduces the probe.
        """
        probe = _canon([list(r) for r in probe], self.probe_prime)
        if probe not in self._coverage:
            return None
        word = []
        cur = probe
        while True:
            rep, prev, gi = self._coverage[cur]
            if prev is None:
                return rep, word[::-1]
            word.append(gi)
            cur = prev

    def generator_actions(self) -> list:
        return list(self._generators)

    def to_json(self) -> dict:
        return {
            "parent": self.parent, "mode": self.mode, "grading": self.grading,
            "h2_dim": self.h2_dim, "h2_dim_fp": self.h2_dim_fp,
            "admissible_dims": list(self.admissible_dims),
            "representatives": [r.name for r in self.representatives],
            "pairwise_refutations": [
                {"pair": list(k), "certificates": [certificate_to_json(c) for c in v]}
                for k, v in sorted(self.pairwise_refutations.items())],
            "probe_prime": self.probe_prime, "probe_policy": self.probe_policy,
            "seed": self.seed, "probe_count": self.probe_count,
            "orbits": self.orbits,
            "uncovered": [{"j": u["j"], "probe": [list(r) for r in u["probe"]], "size": u["size"]}
                          for u in self.uncovered],
            "problems": list(self.problems), "complete": self.complete,
        }


# ---------------------------------------------------------------------------
# small linear algebra over F_p on tuples


def _canon(rows: list, p: int) -> tuple:
    """Reduced row echelon form mod p as a tuple of tuples (zero rows dropped)."""
    m = [[x % p for x in r] for r in rows]
    out = []
    if not m:
        return ()
    cols = len(m[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    out = tuple(tuple(row) for row in m[:r])
    return out


def _rank(rows: list, p: int) -> int:
    return len(_canon(rows, p))


def gaussian_binomial(h: int, j: int, p: int) -> int:
    if j < 0 or j > h:
        return 0
    num = den = 1
    for t in range(j):
        num *= p ** (h - t) - 1
        den *= p ** (t + 1) - 1
    return num // den


def _all_subspaces(h: int, j: int, p: int):
    """Every j-dimensional subspace of F_p^h as a canonical RREF tuple."""
    for pivots in combinations(range(h), j):
        free = [(r, c) for r in range(j) for c in range(pivots[r] + 1, h) if c not in pivots]
        for vals in product(range(p), repeat=len(free)):
            rows = [[0] * h for _ in range(j)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield tuple(tuple(r) for r in rows)


def _sampled_subspaces(h: int, j: int, p: int, count: int, rng: random.Random):
    seen = set()
    tries = 0
    while len(seen) < count and tries < 20 * count:
        tries += 1
        rows = [[rng.randrange(p) for _ in range(h)] for _ in range(j)]
        c = _canon(rows, p)
        if len(c) == j and c not in seen:
            seen.add(c)
            yield c


def _group_generators(mats: np.ndarray, p: int) -> list[int]:
    """Indices of a generating set, chosen greedily in list order and checked by closure."""
    order = len(mats)
    d = mats.shape[1] if order else 0
    elems = [tuple(int(x) for x in m.reshape(-1)) for m in mats]

    def mul(a, b):
        return tuple(sum(a[r * d + t] * b[t * d + c] for t in range(d)) % p
                     for r in range(d) for c in range(d))

    ident = tuple(int(r == c) for r in range(d) for c in range(d))
    gens: list[int] = []
    closure = {ident}
    for idx, m in enumerate(elems):
        if len(closure) >= order:
            break
        if m in closure:
            continue
        gens.append(idx)
        closure = {ident}
        queue = deque([ident])
        while queue:
            x = queue.popleft()
            for gi in gens:
                y = mul(x, elems[gi])
                if y not in closure:
                    closure.add(y)
                    queue.append(y)
    if len(closure) != order:
        raise RuntimeError("automorphism list is not closed under composition")
    return gens


# ---------------------------------------------------------------------------
# certification of one parent


def _transport_forms(child: GradedLieAlgebra, parent: GradedLieAlgebra):
    """Top-slice forms of ``child`` moved onto the parent's basis, plus the quotient witness."""
    data = top_slice(child)
    base = data.base
    witness = None
    if base.labels == parent.labels and base.structure_key() == parent.structure_key():
        from .exactlin import Matrix
        witness = GradedMap(base, parent, Matrix.identity(parent.field, parent.dim))
    else:
        witness = find_exact_witness(base, parent, bound=2)
    if witness is None or not verify_graded_iso(witness):
        return None, None
    inv = inverse(witness.matrix)
    forms = tuple(Cochain(parent.field, parent.dim, 2, w.grading, pullback(w, inv).coeffs)
                  for w in data.cocycles)
    return forms, witness


def _h2_basis_fp(parent: GradedLieAlgebra, k: int, p: int):
    Fp = GF(p)
    H = h2_graded(parent.with_field(Fp), k)
    keys = list(H.keys)
    basis = H.cocycles.vectors()     # canonical rows; coordinates = values at pivots
    pivots = list(H.cocycles.pivots())
    return Fp, keys, basis, pivots, H


def carnot_extensions(parent: ExtensionNode | GradedLieAlgebra, mode: str = REAL,
                      spec: FamilySpec | None = None, primes: Sequence[int] | None = None,
                      probe_prime: int | None = None, seed: int = DEFAULT_SEED,
                      sample_limit: int = SAMPLE_LIMIT) -> OrbitCertificate:
    """Certify the Carnot extensions of one parent."""
    mode = _check_mode(mode)
    if isinstance(parent, GradedLieAlgebra):
        if spec is None:
            raise FrontierError("unclassified frontier: parent has no catalog spec")
        parent = ExtensionNode(node_name(spec, mode), spec, parent, parent.length)
    g, sp = parent.algebra, parent.spec
    N = g.length
    k = N + 1
    primes = tuple(primes or DEFAULT_PRIMES[mode])
    p = probe_prime or PROBE_PRIME[mode]
    problems: list[str] = []
    if not is_carnot(g) or not width_ok_3_2(g):
        problems.append("parent is not a narrow Carnot algebra")

    Hq = h2_graded(g, k)
    dN = g.degree_dims[-1]
    admissible = tuple(j for j in (1, 2) if dN + j <= 3 and j <= Hq.dim)

    # representatives from the playbook
    reps: list[ExtensionNode] = []
    for csp, j in playbook(sp, mode):
        child = build(csp)
        name = node_name(csp, mode)
        node = ExtensionNode(name, csp, child, k, parent.name, j)
        node.terminal = not playbook(csp, mode)
        if check_jacobi(child) or not is_carnot(child) or not width_ok_3_2(child):
            problems.append(f"{name}: fails invariants")
        if child.degree_dims[:-1] != g.degree_dims or child.degree_dims[-1] != j:
            problems.append(f"{name}: dimension vector does not extend the parent")
        forms, witness = _transport_forms(child, g)
        if forms is None:
            problems.append(f"{name}: no exact witness for the top quotient")
            forms = ()
        node.cocycles, node.parent_witness = forms, witness
        if j not in admissible:
            problems.append(f"{name}: extension dimension {j} not width-admissible")
        reps.append(node)

    # pairwise refutations
    pairs: dict = {}
    for a, b in combinations(reps, 2):
        certs = []
        for q in primes:
            c = iso_search_fp(a.algebra, b.algebra, q)
            certs.append(c)
            if c.kind == "refutation":
                break
        pairs[(a.name, b.name)] = certs
        if not any(c.kind == "refutation" for c in certs):
            problems.append(f"{a.name} and {b.name} not separated at primes {list(primes)}")

    # probes: the first prime of the mode's class with good reduction and
    # full coverage certifies; otherwise report what the default prime sees
    order = (p,) + tuple(x for x in primes if x != p)
    attempts = []
    chosen = None
    for q in order:
        res = _probe(g, k, q, Hq.dim, reps, admissible, parent.name, seed, sample_limit)
        attempts.append(res)
        if res["h"] == Hq.dim and not res["uncovered"] and not res["problems"]:
            chosen = res
            break
    if chosen is None:
        good = [r for r in attempts if r["h"] == Hq.dim]
        chosen = good[0] if good else attempts[0]
        if not good:
            problems.append(f"dim H^2 jumps at every probe prime {list(order)}")
        if chosen["uncovered"]:
            log.warning("%s: %d uncovered probe orbit(s) mod %d", parent.name,
                        len(chosen["uncovered"]), chosen["p"])
    skipped = [r["p"] for r in attempts if r is not chosen]
    policy = chosen["policy"]
    if skipped and chosen is attempts[-1]:
        policy += f"; primes {skipped} skipped (H^2 jump or degenerate action)"
    problems += chosen["problems"]
    return OrbitCertificate(parent.name, mode, k, Hq.dim, chosen["h"], admissible, reps, pairs,
                            chosen["p"], policy, chosen["seed"], chosen["count"],
                            chosen["orbits"], chosen["uncovered"], problems,
                            chosen["coverage"], chosen["actions"])


def _probe(g: GradedLieAlgebra, k: int, p: int, hdim: int, reps: list, admissible: tuple,
           pname: str, seed: int, sample_limit: int) -> dict:
    """Orbit coverage of width-admissible cocycle subspaces over F_p."""
    N = g.length
    problems: list[str] = []
    Fp, keys, zbasis, pivots, Hp = _h2_basis_fp(g, k, p)
    h = len(zbasis)
    out = {"p": p, "h": h, "problems": problems, "orbits": [], "uncovered": [],
           "coverage": {}, "actions": [], "policy": "", "seed": None, "count": 0}
    if h != hdim:
        out["policy"] = f"F_{p} discarded: dim H^2 is {h}, expected {hdim}"
        return out
    pos = {key: t for t, key in enumerate(keys)}
    mixed = [pos[(a, b)] for a in g.block(1) for b in g.block(N) if (a, b) in pos]
    restr = [[int(z[t]) for t in mixed] for z in zbasis]

    def admissible_probe(L) -> bool:
        rows = [[sum(l[t] * restr[t][c] for t in range(h)) % p for c in range(len(mixed))]
                for l in L]
        return _rank(rows, p) == len(L)

    rep_probe = {}
    for node in reps:
        coords = []
        for w in node.cocycles:
            vec = [int(Fp.coerce(w.coeffs.get(key, 0))) for key in keys]
            if not Hp.cocycles.contains_vector(vec):
                problems.append(f"{node.name}: reduced cocycle is not closed mod {p}")
            coords.append([vec[pivots[t]] for t in range(h)])
        rep_probe[node.name] = _canon(coords, p) if coords else ()

    # generators of Aut(g) over F_p and their pullback action on coordinates
    aut = aut_group_fp(g, p)
    gens = _group_generators(aut.matrices, p) if aut.order else []
    actions = []
    if gens:
        _, phis = _kernels.extend_candidates(aut.matrices[gens], p, aut.plan, want_phi=True)
        n = g.dim
        omegas = []
        for z in zbasis:
            om = np.zeros((n, n), dtype=np.int64)
            for t, (a, b) in enumerate(keys):
                om[a, b] = int(z[t])
                om[b, a] = -int(z[t])
            omegas.append(om)
        for phi in phis:
            R = [[0] * h for _ in range(h)]
            for t, om in enumerate(omegas):
                pulled = (phi.T @ om @ phi) % p
                for s in range(h):
                    a, b = keys[pivots[s]]
                    R[s][t] = int(pulled[a, b])
            actions.append(R)

    def act(R, L):
        return _canon([[sum(R[s][t] * l[t] for t in range(h)) for s in range(h)] for l in L], p)

    total = sum(gaussian_binomial(h, j, p) for j in admissible)
    if total <= sample_limit:
        policy = f"exhaustive over all {total} subspaces of dimension {list(admissible)} in F_{p}^{h}"
        probes = [L for j in admissible for L in _all_subspaces(h, j, p)]
    else:
        rng = random.Random(seed)
        per = max(1, sample_limit // max(1, len(admissible)))
        policy = f"deterministic sample of {per} subspaces per dimension in F_{p}^{h}, seed {seed}"
        probes = [L for j in admissible for L in _sampled_subspaces(h, j, p, per, rng)]
        out["seed"] = seed
        log.info("probe sampling for %s with seed %d", pname, seed)
    probes = [L for L in probes if admissible_probe(L)]

    coverage: dict = {}
    orbits = []
    for node in reps:
        L0 = rep_probe[node.name]
        if not L0:
            continue
        if L0 in coverage:
            problems.append(f"{node.name} lies in the orbit of {coverage[L0][0]} mod {p}")
            continue
        if not admissible_probe(L0):
            problems.append(f"{node.name}: cocycle subspace not Carnot-admissible mod {p}")
        coverage[L0] = (node.name, None, None)
        queue = deque([L0])
        size = 1
        while queue:
            L = queue.popleft()
            for gi, R in enumerate(actions):
                M = act(R, L)
                if M not in coverage:
                    coverage[M] = (node.name, L, gi)
                    queue.append(M)
                    size += 1
        orbits.append({"rep": node.name, "j": len(L0), "size": size})

    uncovered = []
    seen: set = set()
    for L in probes:
        if L in coverage or L in seen:
            continue
        seen.add(L)
        queue = deque([L])
        size = 1
        while queue:
            X = queue.popleft()
            for R in actions:
                M = act(R, X)
                if M not in seen:
                    seen.add(M)
                    queue.append(M)
                    size += 1
        uncovered.append({"j": len(L), "probe": L, "size": size})
    out.update(policy=policy, count=len(probes), orbits=orbits, uncovered=uncovered,
               coverage=coverage, actions=actions)
    return out


# ---------------------------------------------------------------------------
# the tree


@dataclass
class ClassificationTree:
    mode: str
    max_len: int
    levels: dict          # level -> [ExtensionNode]
    nodes: dict           # name -> ExtensionNode

    def names(self, level: int) -> list[str]:
        return [nd.name for nd in self.levels.get(level, [])]

    def level_sizes(self) -> dict:
        return {n: len(v) for n, v in sorted(self.levels.items())}

    @property
    def frontier(self) -> list[str]:
        return [nd.name for nd in self.nodes.values()
                if nd.certificate is not None and not nd.certificate.complete]

    def edges(self):
        for n in sorted(self.levels):
            for nd in self.levels[n]:
                if nd.parent is not None:
                    yield nd.parent, nd.name, nd.ext_dim

    def to_json(self) -> dict:
        out = []
        for n in sorted(self.levels):
            for nd in self.levels[n]:
                par = self.nodes[nd.parent].algebra if nd.parent else None
                out.append(nd.to_json(par))
        return {"mode": self.mode, "max_len": self.max_len,
                "level_sizes": {str(k): v for k, v in self.level_sizes().items()},
                "frontier": self.frontier, "nodes": out}

    def to_dot(self) -> str:
        lines = ["digraph carnot_tree {", "  rankdir=TB;"]
        for n in sorted(self.levels):
            names = " ".join(json.dumps(nd.name) for nd in self.levels[n])
            lines.append(f"  {{ rank=same; {names} }}")
            for nd in self.levels[n]:
                shape = "box" if nd.terminal else "ellipse"
                lines.append(f"  {json.dumps(nd.name)} [label={json.dumps(nd.name)}, shape={shape}];")
        for a, b, j in self.edges():
            lines.append(f"  {json.dumps(a)} -> {json.dumps(b)} [label=\"{j}\"];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_tree(max_len: int, mode: str = REAL, primes: Sequence[int] | None = None,
               probe_prime: int | None = None, seed: int = DEFAULT_SEED,
               certify_leaves: bool = True) -> ClassificationTree:
    """Breadth-first tree from m0(2).

    Nodes at ``max_len`` are certified too (their extensions are examined but
    not added) unless ``certify_leaves`` is False.
    """
    if max_len < 2:
        raise ValueError("max_len must be at least 2")
    mode = _check_mode(mode)
    rsp = root_spec(mode)
    root = ExtensionNode(node_name(rsp, mode), rsp, build(rsp), 2)
    root.catalog_match = root.name
    levels = {2: [root]}
    nodes = {root.name: root}
    for n in range(2, max_len + 1):
        nxt = []
        for nd in levels[n]:
            if n == max_len and not certify_leaves:
                nd.terminal = not playbook(nd.spec, mode)
                continue
            cert = carnot_extensions(nd, mode, primes=primes, probe_prime=probe_prime, seed=seed)
            nd.certificate = cert
            nd.terminal = not cert.representatives
            if n < max_len:
                for child in cert.representatives:
                    if child.name in nodes:
                        raise FrontierError(f"{child.name} reached twice")
                    child.catalog_match = child.name
                    nodes[child.name] = child
                    nxt.append(child)
        if n < max_len:
            # siblings are separated by their certificates; different parents
            # give non-isomorphic top quotients
            levels[n + 1] = nxt
    return ClassificationTree(mode, max_len, levels, nodes)


# ---------------------------------------------------------------------------
# infinite families and catalog matching


_EXTENDABLE = {"m0": "m0^S", "m0_S": "m0^S", "L23": "m0^S", "n1pm": "n1", "n2": "n2",
               "n2_3": "n2^3", "m02_S": "m0,2 (one step)"}


def infinite_families(max_len: int, mode: str = REAL, tree: ClassificationTree | None = None) -> dict:
    """Split the level-``max_len`` nodes into extendable spectra and terminal ones."""
    tree = tree or build_tree(max_len, mode)
    ext: dict = {}
    term = []
    for nd in tree.levels[max_len]:
        if nd.terminal:
            term.append(nd.name)
        else:
            ext.setdefault(_EXTENDABLE.get(nd.spec.family, nd.spec.family), []).append(nd.name)
    return {"level": max_len, "mode": tree.mode, "extendable": ext, "terminal": term,
            "spectra": sorted(k for k in ext if "one step" not in k)}


@dataclass
class CatalogMatch:
    name: str
    spec: FamilySpec
    witness: GradedMap | None
    others: list


def match_to_catalog(g: GradedLieAlgebra, bound: int = 2) -> CatalogMatch | None:
    """Catalog instances isomorphic to g.

    Candidates with the same dimension vector are screened with exhaustive
    F_p searches, then an exact small-entry witness is sought.  The first hit
    with an exact witness is returned; further hits are listed in ``others``.
    """
    if not g.dim:
        return None
    p = 13 if isinstance(g.field, GaussianField) else 7
    hits = []
    for sp in all_instances(g.length, g.field):
        try:
            h = build(sp)
        except Exception:   # pragma: no cover - catalog is validated elsewhere
            continue
        if h.degree_dims != g.degree_dims:
            continue
        if iso_search_fp(g, h, p).kind != "witness":
            continue
        hits.append((family_name(sp), sp, find_exact_witness(g, h, bound=bound)))
    if not hits:
        return None
    hits.sort(key=lambda t: t[2] is None)
    name, sp, wit = hits[0]
    return CatalogMatch(name, sp, wit, [t[0] for t in hits[1:]])
