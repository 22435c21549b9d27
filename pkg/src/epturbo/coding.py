"""(3,6)-regular rate-1/2 LDPC code: construction, encoding, BP decoding.

The code is built from a random edge-permutation ensemble with repair
passes that remove parallel edges and (best-effort) 4-cycles by edge
swaps, which preserve the exact (3,6) degree profile. Encoding uses a
systematic form obtained once at construction by bit-packed Gaussian
elimination over GF(2). Decoding is flooding sum-product with the
stable two-argument boxplus recursion and syndrome early stopping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

COL_WEIGHT = 3
ROW_WEIGHT = 6


class LdpcConstructionError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# bit-packed GF(2) elimination


def _pack_rows(M: np.ndarray) -> np.ndarray:
    return np.packbits(M.astype(np.uint8), axis=1)


def _get_bit(packed: np.ndarray, j: int) -> np.ndarray:
    return (packed[:, j >> 3] >> (7 - (j & 7))) & 1


def _gf2_rref(M: np.ndarray):
    """Reduced row-echelon form over GF(2).

    Returns (rref rows as dense uint8, pivot column list). Bit-packed
    internally so n=4096 stays fast.
    """
    m, n = M.shape
    P = _pack_rows(M)
    pivots = []
    r = 0
    for j in range(n):
        if r >= m:
            break
        col = _get_bit(P, j)
        rows = np.nonzero(col[r:])[0]
        if rows.size == 0:
            continue
        piv = r + rows[0]
        if piv != r:
            P[[r, piv]] = P[[piv, r]]
        sel = np.nonzero(_get_bit(P, j))[0]
        sel = sel[sel != r]
        if sel.size:
            P[sel] ^= P[r]
        pivots.append(j)
        r += 1
    dense = np.unpackbits(P, axis=1)[:, :n]
    return dense, pivots


# ---------------------------------------------------------------------------
# code object


@dataclass
class LdpcCode:
    """Parity-check matrix plus a precomputed systematic encoder."""

    n: int
    k: int
    edge_col: np.ndarray          # (m*6,) column of each edge, row-major by check
    systematic_cols: np.ndarray   # (k,) codeword positions carrying info bits
    parity_cols: np.ndarray       # (m,) codeword positions carrying parity
    _enc: np.ndarray              # (m, k) float32, parity = _enc @ info mod 2
    rate: float = field(init=False)

    def __post_init__(self):
        self.rate = self.k / self.n
        m = self.n - self.k
        self.row_cols = self.edge_col.reshape(m, ROW_WEIGHT)
        # edge ids grouped by column, for the variable-node gather
        order = np.argsort(self.edge_col, kind="stable")
        self.col_edges = order.reshape(self.n, COL_WEIGHT)
        self.edge_of_col = self.edge_col  # alias used by the decoder

    @property
    def m(self) -> int:
        return self.n - self.k

    def parity_matrix(self) -> np.ndarray:
        H = np.zeros((self.m, self.n), dtype=np.uint8)
        rows = np.repeat(np.arange(self.m), ROW_WEIGHT)
        np.add.at(H, (rows, self.edge_col), 1)
        return H % 2

    def syndrome(self, c: np.ndarray) -> np.ndarray:
        bits = np.asarray(c, dtype=np.uint8)
        return np.bitwise_xor.reduce(bits[self.row_cols], axis=1)


def _sample_edges(n: int, rng: np.random.Generator) -> np.ndarray:
    stubs = np.repeat(np.arange(n), COL_WEIGHT)
    rng.shuffle(stubs)
    return stubs  # row-major: row i owns stubs[6i:6i+6]


def _repair_parallel_edges(edge_col: np.ndarray, rng: np.random.Generator) -> None:
    m = edge_col.size // ROW_WEIGHT
    for _ in range(200):
        rows = edge_col.reshape(m, ROW_WEIGHT)
        srt = np.sort(rows, axis=1)
        dup_rows = np.nonzero((srt[:, 1:] == srt[:, :-1]).any(axis=1))[0]
        if dup_rows.size == 0:
            return
        for r in dup_rows:
            vals, counts = np.unique(rows[r], return_counts=True)
            for v in vals[counts > 1]:
                e = r * ROW_WEIGHT + int(np.nonzero(rows[r] == v)[0][0])
                other = int(rng.integers(edge_col.size))
                edge_col[e], edge_col[other] = edge_col[other], edge_col[e]
    raise LdpcConstructionError("could not remove parallel edges")


def _remove_4cycles(edge_col: np.ndarray, rng: np.random.Generator,
                    max_passes: int = 30) -> int:
    """Best-effort 4-cycle removal by column-endpoint swaps.

    Returns the number of row pairs still sharing >= 2 columns (the
    construction's documented slack).
    """
    from scipy import sparse

    m = edge_col.size // ROW_WEIGHT
    n_cols = int(edge_col.max()) + 1
    for _ in range(max_passes):
        rows = np.repeat(np.arange(m), ROW_WEIGHT)
        A = sparse.csr_matrix(
            (np.ones(edge_col.size), (rows, edge_col)), shape=(m, n_cols)
        )
        G = (A @ A.T).tocoo()
        bad = (G.data >= 2) & (G.row < G.col)
        r1s, r2s = G.row[bad], G.col[bad]
        if r1s.size == 0:
            return 0
        touched = set()
        rmat = edge_col.reshape(m, ROW_WEIGHT)
        for r1, r2 in zip(r1s, r2s):
            if r1 in touched or r2 in touched:
                continue
            shared = np.intersect1d(rmat[r1], rmat[r2])
            if shared.size < 2:
                continue
            e = r2 * ROW_WEIGHT + int(np.nonzero(rmat[r2] == shared[0])[0][0])
            other = int(rng.integers(edge_col.size))
            edge_col[e], edge_col[other] = edge_col[other], edge_col[e]
            touched.update((r1, r2, other // ROW_WEIGHT))
        _repair_parallel_edges(edge_col, rng)
    rows = np.repeat(np.arange(m), ROW_WEIGHT)
    A = sparse.csr_matrix((np.ones(edge_col.size), (rows, edge_col)),
                          shape=(m, n_cols))
    G = (A @ A.T).tocoo()
    return int(np.count_nonzero((G.data >= 2) & (G.row < G.col)))


def build_ldpc(n: int, seed: int, max_attempts: int = 50) -> LdpcCode:
    """Build a (3,6)-regular rate-1/2 code, deterministic in (n, seed)."""
    if n % 2 != 0 or n < 128:
        raise ValueError(f"n must be even and >= 128, got {n}")
    m = n // 2
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        edge_col = _sample_edges(n, rng)
        _repair_parallel_edges(edge_col, rng)
        _remove_4cycles(edge_col, rng)
        H = np.zeros((m, n), dtype=np.uint8)
        rows = np.repeat(np.arange(m), ROW_WEIGHT)
        H[rows, edge_col] = 1
        rref, pivots = _gf2_rref(H)
        if len(pivots) != m:
            continue  # rank-deficient draw; resample
        parity_cols = np.asarray(pivots)
        sys_mask = np.ones(n, dtype=bool)
        sys_mask[parity_cols] = False
        systematic_cols = np.nonzero(sys_mask)[0]
        enc = rref[:, systematic_cols].astype(np.float32)
        return LdpcCode(n=n, k=n - m, edge_col=edge_col,
                        systematic_cols=systematic_cols,
                        parity_cols=parity_cols, _enc=enc)
    raise LdpcConstructionError(
        f"no full-rank (3,6) matrix found for n={n} after {max_attempts} attempts"
    )


def encode(code: LdpcCode, info: np.ndarray) -> np.ndarray:
    info = np.asarray(info, dtype=np.uint8)
    if info.shape != (code.k,):
        raise ValueError(f"info must have length k={code.k}, got {info.shape}")
    parity = (code._enc @ info.astype(np.float32)).astype(np.int64) % 2
    c = np.empty(code.n, dtype=np.uint8)
    c[code.systematic_cols] = info
    c[code.parity_cols] = parity.astype(np.uint8)
    return c


# ---------------------------------------------------------------------------
# sum-product decoding


def _boxplus(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    s = np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    return s + np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))


def _check_update(q: np.ndarray) -> np.ndarray:
    """Leave-one-out boxplus along axis 1 via prefix/suffix recursions."""
    m, d = q.shape
    pre = np.empty_like(q)
    suf = np.empty_like(q)
    pre[:, 0] = np.inf
    suf[:, -1] = np.inf
    for i in range(1, d):
        pre[:, i] = _boxplus(pre[:, i - 1], q[:, i - 1])
        suf[:, d - 1 - i] = _boxplus(suf[:, d - i], q[:, d - i])
    return _boxplus(pre, suf)


def bp_decode(code: LdpcCode, llr_in: np.ndarray, max_iter: int = 100):
    """Flooding sum-product decoding.

    Returns (info_hat, extrinsic, iterations_used). Extrinsic is the
    posterior LLR minus the channel input; internal messages are never
    clipped. Non-convergence returns the best-effort LLRs with
    iterations_used == max_iter.
    """
    llr_in = np.asarray(llr_in, dtype=float)
    if llr_in.shape != (code.n,):
        raise ValueError(f"llr_in must have length n={code.n}")
    m = code.m
    edge_col = code.edge_col
    c2v = np.zeros(edge_col.size)
    post = llr_in.copy()
    iters = max_iter
    for it in range(1, max_iter + 1):
        v2c = post[edge_col] - c2v
        c2v = _check_update(v2c.reshape(m, ROW_WEIGHT)).ravel()
        post = llr_in + np.bincount(edge_col, weights=c2v, minlength=code.n)
        hard = (post < 0).astype(np.uint8)
        if not code.syndrome(hard).any():
            iters = it
            break
    extrinsic = post - llr_in
    info_hat = (post[code.systematic_cols] < 0).astype(np.uint8)
    return info_hat, extrinsic, iters


# ---------------------------------------------------------------------------
# interleaving


@dataclass
class Interleaver:
    """Seeded random bit permutation; interleave(x)[i] = x[perm[i]]."""

    n: int
    seed: int

    def __post_init__(self):
        rng = np.random.default_rng(self.seed)
        self.perm = rng.permutation(self.n)
        self.inv = np.argsort(self.perm)

    def interleave(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape[0] != self.n:
            raise ValueError(f"expected length {self.n}, got {x.shape[0]}")
        return x[self.perm]

    def deinterleave(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape[0] != self.n:
            raise ValueError(f"expected length {self.n}, got {x.shape[0]}")
        return x[self.inv]


# ---------------------------------------------------------------------------
# alist import/export (for cross-run reproducibility)


def write_alist(code: LdpcCode, path) -> None:
    H = code.parity_matrix()
    m, n = H.shape
    col_lists = [np.nonzero(H[:, j])[0] + 1 for j in range(n)]
    row_lists = [np.nonzero(H[i])[0] + 1 for i in range(m)]
    with open(path, "w") as f:
        f.write(f"{n} {m}\n")
        f.write(f"{max(len(c) for c in col_lists)} "
                f"{max(len(r) for r in row_lists)}\n")
        f.write(" ".join(str(len(c)) for c in col_lists) + "\n")
        f.write(" ".join(str(len(r)) for r in row_lists) + "\n")
        for c in col_lists:
            f.write(" ".join(map(str, c)) + "\n")
        for r in row_lists:
            f.write(" ".join(map(str, r)) + "\n")


def read_alist(path) -> np.ndarray:
    """Read an alist file into a dense parity-check matrix."""
    with open(path) as f:
        tokens = f.read().split("\n")
    n, m = map(int, tokens[0].split())
    H = np.zeros((m, n), dtype=np.uint8)
    for j in range(n):
        for i in tokens[4 + j].split():
            if int(i) > 0:
                H[int(i) - 1, j] = 1
    return H
