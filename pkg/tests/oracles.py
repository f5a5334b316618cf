"""Independent oracles: sympy ranks and brute-force modular searches.

Nothing here uses carnot.exactlin or carnot.cohomology; only the raw structure
constants of an algebra are read.
"""

from fractions import Fraction
from itertools import combinations, product

import sympy


def _raw(g):
    """{(i, j): {k: Fraction}} for i < j, read off the public constants."""
    out = {}
    for (i, j), vec in g.constants.items():
        out[(i, j)] = {k: Fraction(str(c)) for k, c in vec.items()}
    return out


def _br(raw, i, j):
    if i == j:
        return {}
    if i < j:
        return raw.get((i, j), {})
    return {k: -c for k, c in raw.get((j, i), {}).items()}


def h2_dim(g, k):
    """dim H^2 in weight k via sympy ranks of d1 and d2."""
    raw = _raw(g)
    deg = g.degrees
    n = len(deg)
    pairs = [(i, j) for i, j in combinations(range(n), 2) if deg[i] + deg[j] == k]
    triples = [t for t in combinations(range(n), 3) if sum(deg[x] for x in t) == k]
    col = {p: c for c, p in enumerate(pairs)}

    def w(a, b):
        # coordinate functional of the pair (a, b) with sign
        if a == b:
            return None, 0
        return ((a, b), 1) if a < b else ((b, a), -1)

    rows = []
    for (x, y, z) in triples:
        row = [0] * len(pairs)
        for (a, b, c) in ((x, y, z), (y, z, x), (z, x, y)):
            for m, coef in _br(raw, a, b).items():
                key, s = w(m, c)
                if key in col:
                    row[col[key]] += s * coef
        rows.append(row)
    rank_d2 = sympy.Matrix(rows).rank() if rows and pairs else 0
    dimZ = len(pairs) - rank_d2
    brows = []
    for t in range(n):
        if deg[t] != k:
            continue
        row = [0] * len(pairs)
        for (i, j), vec in raw.items():
            if t in vec and (i, j) in col:
                row[col[(i, j)]] += vec[t]
        brows.append(row)
    dimB = sympy.Matrix(brows).rank() if brows and pairs else 0
    return dimZ - dimB


def _int_mod(c, p):
    c = Fraction(str(c))
    return c.numerator * pow(c.denominator, -1, p) % p


def _solve_mod(cols, rhs, p):
    """x with sum_t x_t cols[t] = rhs mod p (cols independent), or None."""
    m = len(rhs)
    aug = [[cols[t][r] % p for t in range(len(cols))] + [rhs[r] % p] for r in range(m)]
    ncol = len(cols)
    r = 0
    piv = []
    for c in range(ncol):
        pr = next((i for i in range(r, m) if aug[i][c]), None)
        if pr is None:
            return None
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [v * inv % p for v in aug[r]]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(a - f * b) % p for a, b in zip(aug[i], aug[r])]
        piv.append(c)
        r += 1
    if any(aug[i][-1] for i in range(r, m)):
        return None
    return [aug[i][-1] for i in range(ncol)]


def count_isos_fp(g, h, p, stop_at_first=False):
    """Number of A in GL(d1, F_p) extending to graded isomorphisms g -> h.

    Images of higher basis vectors are found by solving phi(e_k) from
    phi([x, y]) = [phi x, phi y] over spanning pairs; every bracket is then
    checked.
    """
    if list(g.degrees) != list(h.degrees):
        return 0
    n = len(g.degrees)
    gr = {key: {k: _int_mod(c, p) for k, c in v.items()} for key, v in g.constants.items()}
    hr = {key: {k: _int_mod(c, p) for k, c in v.items()} for key, v in h.constants.items()}
    deg = g.degrees
    gens = [i for i in range(n) if deg[i] == 1]
    d1 = len(gens)

    def bracket(raw, u, v):
        out = [0] * n
        for (i, j), vec in raw.items():
            a = u[i] * v[j] - u[j] * v[i]
            if a % p:
                for k, c in vec.items():
                    out[k] = (out[k] + a * c) % p
        return out

    def unit(i):
        e = [0] * n
        e[i] = 1
        return e

    count = 0
    for entries in product(range(p), repeat=d1 * d1):
        A = [entries[r * d1:(r + 1) * d1] for r in range(d1)]
        if d1 == 2 and (A[0][0] * A[1][1] - A[0][1] * A[1][0]) % p == 0:
            continue
        img = {}
        for c, i in enumerate(gens):
            v = [0] * n
            for r, t in enumerate(gens):
                v[t] = A[r][c]
            img[i] = v
        ok = True
        for d in range(2, max(deg) + 1):
            block = [i for i in range(n) if deg[i] == d]
            # spanning pairs (x in degree 1, y in degree d-1)
            spans = []
            for x in gens:
                for y in (i for i in range(n) if deg[i] == d - 1):
                    b = bracket(gr, unit(x), unit(y))
                    if any(b):
                        spans.append((x, y, b))
            # pick a basis of g_d among the spanning brackets
            chosen = []
            for x, y, b in spans:
                trial = [s[2] for s in chosen] + [b]
                if _rank_mod([[v[i] for i in block] for v in trial], p) == len(trial):
                    chosen.append((x, y, b))
            if len(chosen) != len(block):
                ok = False
                break
            # phi(b_t) = [phi x, phi y]; express e_k via the chosen brackets
            cols = [[b[i] for i in block] for _, _, b in chosen]
            imgs = [bracket(hr, img[x], img[y]) for x, y, _ in chosen]
            for k in block:
                coeff = _solve_mod(cols, [int(i == k) for i in block], p)
                v = [0] * n
                for t, c in enumerate(coeff):
                    v = [(a + c * b) % p for a, b in zip(v, imgs[t])]
                img[k] = v
        if not ok:
            continue
        for i, j in combinations(range(n), 2):
            vec = gr.get((i, j), {})
            lhs = [0] * n
            for k, c in vec.items():
                lhs = [(a + c * b) % p for a, b in zip(lhs, img[k])]
            if lhs != bracket(hr, img[i], img[j]):
                ok = False
                break
        if ok:
            M = [[img[i][r] for i in range(n)] for r in range(n)]
            if _rank_mod(M, p) == n:
                count += 1
                if stop_at_first:
                    return count
    return count


def _rank_mod(rows, p):
    m = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pr = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[rank], m[pr] = m[pr], m[rank]
        inv = pow(m[rank][c], -1, p)
        m[rank] = [v * inv % p for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def jacobi_ok(g):
    """Jacobi identity on all basis triples, in exact Fractions."""
    raw = _raw(g)
    n = len(g.degrees)

    def brv(u, v):
        out = {}
        for a, x in u.items():
            for b, y in v.items():
                for k, c in _br(raw, a, b).items():
                    out[k] = out.get(k, 0) + x * y * c
        return {k: c for k, c in out.items() if c}

    for i, j, k in combinations(range(n), 3):
        e = lambda t: {t: Fraction(1)}
        tot = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for key, val in brv(brv(e(a), e(b)), e(c)).items():
                tot[key] = tot.get(key, 0) + val
        if any(tot.values()):
            return False
    return True
