"""Prime-field kernels: row reduction and batched homomorphism checks.

Every kernel has a numba version and a pure-numpy version with the same
signature.  The numba versions are used unless ``CARNOT_NO_JIT`` is set to a
non-empty value other than ``0``, or numba cannot be imported.
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("CARNOT_NO_JIT", "")
USE_JIT = _flag in ("", "0")

if USE_JIT:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_JIT = False


# ---------------------------------------------------------------------------
# row reduction


def _rref_mod_p_numpy(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        f = m[:, c].copy()
        f[r] = 0
        m -= np.outer(f, m[r])
        m %= p
        pivots.append(c)
        r += 1
    return m, np.array(pivots, dtype=np.int64)


def _inv_mod(a, p):
    # Fermat inverse, written as a loop so numba can compile it
    result = 1
    base = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def _rref_mod_p_loops(a, p):
    m = a.copy() % p
    rows, cols = m.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                t = m[r, j]
                m[r, j] = m[k, j]
                m[k, j] = t
        inv = _inv_mod(m[r, c], p)
        for j in range(cols):
            m[r, j] = (m[r, j] * inv) % p
        for i in range(rows):
            if i != r and m[i, c] != 0:
                f = m[i, c]
                for j in range(cols):
                    m[i, j] = (m[i, j] - f * m[r, j]) % p
        pivots[r] = c
        r += 1
    return m, pivots[:r].copy()


# ---------------------------------------------------------------------------
# batched extension of degree-one maps
#
# A candidate is a matrix A sending the degree-one part of g to that of h.
# The map on degree d is forced: for a fixed list of bracket pairs (x_t, y_t)
# whose brackets in g form a basis of g_d, phi([x_t, y_t]) must equal
# [phi x_t, phi y_t] in h, so phi_d = N_d * Minv_d.  The candidate is accepted
# when phi respects every structure constant and every block is invertible.


def _block_rank_loops(m, p):
    a = m.copy() % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[k, j]
                a[k, j] = t
        inv = _inv_mod(a[r, c], p)
        for i in range(r + 1, rows):
            if a[i, c] != 0:
                f = (a[i, c] * inv) % p
                for j in range(cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        r += 1
    return r


def _extend_loops(cands, p, n, starts, tree_x, tree_y, minv,
                  ha, hb, hc, hv, pair_i, pair_j, gcoef, want_phi):
    K = cands.shape[0]
    d1 = starts[1] - starts[0]
    nblocks = starts.shape[0] - 1
    ok = np.zeros(K, dtype=np.bool_)
    if want_phi:
        out = np.zeros((K, n, n), dtype=np.int64)
    else:
        out = np.zeros((0, n, n), dtype=np.int64)
    phi = np.zeros((n, n), dtype=np.int64)
    col = np.zeros(n, dtype=np.int64)
    nnz = ha.shape[0]
    npairs = pair_i.shape[0]
    for kk in range(K):
        for i in range(n):
            for j in range(n):
                phi[i, j] = 0
        for i in range(d1):
            for j in range(d1):
                phi[i, j] = cands[kk, i, j] % p
        good = True
        for b in range(1, nblocks):
            s0 = starts[b]
            s1 = starts[b + 1]
            d = s1 - s0
            if d == 0:
                continue
            nmat = np.zeros((d, d), dtype=np.int64)
            for t in range(d):
                x = tree_x[s0 + t]
                y = tree_y[s0 + t]
                for c in range(n):
                    col[c] = 0
                for s in range(nnz):
                    a = ha[s]
                    bb = hb[s]
                    v = (phi[a, x] * phi[bb, y] - phi[bb, x] * phi[a, y]) % p
                    if v != 0:
                        col[hc[s]] = (col[hc[s]] + hv[s] * v) % p
                for r in range(d):
                    nmat[r, t] = col[s0 + r]
            for r in range(d):
                for c in range(d):
                    acc = 0
                    for t in range(d):
                        acc += nmat[r, t] * minv[s0 + t, s0 + c]
                    phi[s0 + r, s0 + c] = acc % p
        for b in range(nblocks):
            s0 = starts[b]
            s1 = starts[b + 1]
            if s1 > s0:
                if _block_rank_loops(phi[s0:s1, s0:s1], p) < s1 - s0:
                    good = False
                    break
        if not good:
            continue
        for q in range(npairs):
            i = pair_i[q]
            j = pair_j[q]
            for c in range(n):
                col[c] = 0
            for s in range(nnz):
                a = ha[s]
                bb = hb[s]
                v = (phi[a, i] * phi[bb, j] - phi[bb, i] * phi[a, j]) % p
                if v != 0:
                    col[hc[s]] = (col[hc[s]] + hv[s] * v) % p
            for c in range(n):
                lhs = 0
                for k in range(n):
                    if gcoef[q, k] != 0:
                        lhs += gcoef[q, k] * phi[c, k]
                if (lhs - col[c]) % p != 0:
                    good = False
                    break
            if not good:
                break
        if good:
            ok[kk] = True
            if want_phi:
                for i in range(n):
                    for j in range(n):
                        out[kk, i, j] = phi[i, j]
    return ok, out


def _batched_rank_full(blocks: np.ndarray, p: int) -> np.ndarray:
    """True where the square matrices in ``blocks`` (K, d, d) are invertible mod p."""
    a = blocks.copy() % p
    K, d, _ = a.shape
    full = np.ones(K, dtype=bool)
    for c in range(d):
        # pick a pivot row at or below c for every batch entry
        sub = a[:, c:, c] != 0
        has = sub.any(axis=1)
        full &= has
        k = c + np.argmax(sub, axis=1)
        idx = np.arange(K)
        row_c = a[idx, c].copy()
        a[idx, c] = a[idx, k]
        a[idx, k] = row_c
        piv = a[:, c, c]
        inv = np.array([pow(int(v), p - 2, p) if v else 0 for v in piv], dtype=np.int64)
        for r in range(c + 1, d):
            f = (a[:, r, c] * inv) % p
            a[:, r, :] = (a[:, r, :] - f[:, None] * a[:, c, :]) % p
    return full


def _extend_numpy(cands, p, n, starts, tree_x, tree_y, minv,
                  ha, hb, hc, hv, pair_i, pair_j, gcoef, want_phi, chunk=512):
    K = cands.shape[0]
    d1 = starts[1] - starts[0]
    nblocks = len(starts) - 1
    scatter = np.zeros((len(ha), n), dtype=np.int64)
    scatter[np.arange(len(ha)), hc] = hv % p
    ok = np.zeros(K, dtype=bool)
    phis = np.zeros((K if want_phi else 0, n, n), dtype=np.int64)

    def bracket(u, v):
        # u, v: (B, n, m) columns -> (B, n, m)
        vals = (u[:, ha, :] * v[:, hb, :] - u[:, hb, :] * v[:, ha, :]) % p
        return np.einsum("bsm,sc->bcm", vals, scatter) % p

    for lo in range(0, K, chunk):
        c = cands[lo:lo + chunk] % p
        B = c.shape[0]
        phi = np.zeros((B, n, n), dtype=np.int64)
        phi[:, :d1, :d1] = c
        for b in range(1, nblocks):
            s0, s1 = starts[b], starts[b + 1]
            if s1 == s0:
                continue
            xs = tree_x[s0:s1]
            ys = tree_y[s0:s1]
            cols = bracket(phi[:, :, xs], phi[:, :, ys])[:, s0:s1, :]
            phi[:, s0:s1, s0:s1] = np.einsum("brt,tc->brc", cols, minv[s0:s1, s0:s1]) % p
        good = np.ones(B, dtype=bool)
        for b in range(nblocks):
            s0, s1 = starts[b], starts[b + 1]
            if s1 > s0:
                good &= _batched_rank_full(phi[:, s0:s1, s0:s1], p)
        if len(pair_i):
            rhs = bracket(phi[:, :, pair_i], phi[:, :, pair_j])
            lhs = np.einsum("bck,qk->bcq", phi, gcoef) % p
            good &= np.all((lhs - rhs) % p == 0, axis=(1, 2))
        ok[lo:lo + B] = good
        if want_phi:
            phis[lo:lo + B][good] = phi[good]
    return ok, phis


if USE_JIT:
    rref_mod_p_kernel = njit(cache=True)(_rref_mod_p_loops)
    _inv_mod = njit(cache=True)(_inv_mod)
    _block_rank_loops = njit(cache=True)(_block_rank_loops)
    extend_candidates_kernel = njit(cache=True)(_extend_loops)
else:
    rref_mod_p_kernel = _rref_mod_p_numpy
    extend_candidates_kernel = _extend_numpy


def rref_mod_p(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of an integer matrix mod p, plus pivot columns."""
    a = np.ascontiguousarray(a, dtype=np.int64)
    if a.size == 0:
        return a % p, np.zeros(0, dtype=np.int64)
    return rref_mod_p_kernel(a, p)


def extend_candidates(cands: np.ndarray, p: int, plan: dict, want_phi: bool = False):
    """Run the batched extension check; ``plan`` comes from morphism.fp_plan."""
    cands = np.ascontiguousarray(cands, dtype=np.int64)
    if cands.shape[0] == 0:
        n = plan["n"]
        return np.zeros(0, dtype=bool), np.zeros((0, n, n), dtype=np.int64)
    return extend_candidates_kernel(
        cands, p, plan["n"], plan["starts"], plan["tree_x"], plan["tree_y"],
        plan["minv"], plan["ha"], plan["hb"], plan["hc"], plan["hv"],
        plan["pair_i"], plan["pair_j"], plan["gcoef"], want_phi)


def backend_name() -> str:
    return "numba" if USE_JIT else "numpy"
