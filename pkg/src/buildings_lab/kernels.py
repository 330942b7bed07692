"""Sparse rank computation modulo a large prime.

The reducer processes boundary-matrix columns one at a time, keeping one
stored pivot column per claimed "low" (largest row index). Stored columns
have pairwise distinct lows, so they are independent and the stored count is
an exact lower bound for the rank over Q of an integer matrix; hitting a
known target rank therefore certifies it exactly. Entries live in F_p for a
31-bit prime, so products fit comfortably in int64.

Two implementations share the algorithm: a numba kernel and a pure-numpy
fallback. Selection: the BUILDINGS_LAB_NUMBA environment variable forces the
numba path ("1") or the fallback ("0"); unset picks numba when importable.
"""

from __future__ import annotations

import os

import numpy as np

DEFAULT_PRIME = 2_147_483_647
FALLBACK_PRIME = 2_147_483_629

__all__ = [
    "DEFAULT_PRIME",
    "FALLBACK_PRIME",
    "numba_enabled",
    "kernel_backend",
    "IncrementalRank",
    "rank_mod_p",
]

_NUMBA_KERNEL = None


def numba_enabled() -> bool:
    flag = os.environ.get("BUILDINGS_LAB_NUMBA", "").strip()
    if flag == "0":
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        if flag == "1":
            raise RuntimeError("BUILDINGS_LAB_NUMBA=1 but numba is not importable")
        return False
    return True


def kernel_backend() -> str:
    return "numba" if numba_enabled() else "numpy"


def _get_numba_kernel():
    global _NUMBA_KERNEL
    if _NUMBA_KERNEL is None:
        from numba import njit

        _NUMBA_KERNEL = njit(cache=True)(_process_chunk_py)
    return _NUMBA_KERNEL


def _process_chunk_py(
    cindptr,
    crows,
    cvals,
    start_col,
    piv_indptr,
    piv_rows,
    piv_vals,
    n_stored,
    low_slot,
    p,
    target,
    wrows,
    wvals,
    mrows,
    mvals,
):
    """Reduce columns start_col.. of the chunk; see IncrementalRank.

    Returns (next_col, n_stored, status) with status 0 = chunk done,
    1 = target rank reached, 2 = pivot storage is full (grow and re-enter).
    """
    ncols = cindptr.shape[0] - 1
    cap_rows = piv_rows.shape[0]
    cap_cols = piv_indptr.shape[0] - 1
    for col in range(start_col, ncols):
        lo, hi = cindptr[col], cindptr[col + 1]
        wlen = hi - lo
        wrows[:wlen] = crows[lo:hi]
        wvals[:wlen] = cvals[lo:hi] % p
        while wlen > 0:
            if wvals[wlen - 1] == 0:
                wlen -= 1
                continue
            low = wrows[wlen - 1]
            slot = low_slot[low]
            if slot < 0:
                piv_len = piv_indptr[n_stored]
                if n_stored >= cap_cols or piv_len + wlen > cap_rows:
                    return col, n_stored, 2
                piv_rows[piv_len : piv_len + wlen] = wrows[:wlen]
                piv_vals[piv_len : piv_len + wlen] = wvals[:wlen]
                piv_indptr[n_stored + 1] = piv_len + wlen
                low_slot[low] = n_stored
                n_stored += 1
                if n_stored == target:
                    return col + 1, n_stored, 1
                break
            plo, phi = piv_indptr[slot], piv_indptr[slot + 1]
            # c = -wval / pivot_low_value mod p, by Fermat inverse
            inv = 1
            base = piv_vals[phi - 1] % p
            e = p - 2
            while e > 0:
                if e & 1:
                    inv = inv * base % p
                base = base * base % p
                e >>= 1
            c = (p - wvals[wlen - 1]) * inv % p
            # merge work + c * pivot into the scratch buffers
            i = 0
            j = plo
            k = 0
            while i < wlen or j < phi:
                if j >= phi or (i < wlen and wrows[i] < piv_rows[j]):
                    r = wrows[i]
                    v = wvals[i]
                    i += 1
                elif i >= wlen or piv_rows[j] < wrows[i]:
                    r = piv_rows[j]
                    v = c * piv_vals[j] % p
                    j += 1
                else:
                    r = wrows[i]
                    v = (wvals[i] + c * piv_vals[j]) % p
                    i += 1
                    j += 1
                if v != 0:
                    mrows[k] = r
                    mvals[k] = v
                    k += 1
            wrows[:k] = mrows[:k]
            wvals[:k] = mvals[:k]
            wlen = k
    return ncols, n_stored, 0


class IncrementalRank:
    """Feed sparse integer columns; read off a certified rank lower bound.

    Columns are (rows, vals) with strictly increasing row indices. `target`
    stops the reduction as soon as that many pivots are stored; `done` then
    reports the certificate. With `defer=True` a batch is processed in two
    passes: the first claims columns whose low is still free (no arithmetic),
    the second reduces the collisions.
    """

    def __init__(self, nrows: int, p: int = DEFAULT_PRIME, target: int | None = None,
                 use_numba: bool | None = None):
        self.nrows = nrows
        self.p = p
        self.target = target
        if use_numba is None:
            use_numba = numba_enabled()
        self.backend = "numba" if use_numba else "numpy"
        self._kernel = _get_numba_kernel() if use_numba else _process_chunk_py
        self.low_slot = np.full(nrows, -1, dtype=np.int64)
        cap = 1 << 12
        self.piv_indptr = np.zeros(cap + 1, dtype=np.int64)
        self.piv_rows = np.empty(cap * 4, dtype=np.int64)
        self.piv_vals = np.empty(cap * 4, dtype=np.int64)
        self.n_stored = 0
        self._wrows = np.empty(nrows, dtype=np.int64)
        self._wvals = np.empty(nrows, dtype=np.int64)
        self._mrows = np.empty(nrows, dtype=np.int64)
        self._mvals = np.empty(nrows, dtype=np.int64)

    @property
    def rank(self) -> int:
        return self.n_stored

    @property
    def done(self) -> bool:
        return self.target is not None and self.n_stored >= self.target

    def _grow(self, need_rows: int) -> None:
        if self.n_stored + 1 >= self.piv_indptr.shape[0]:
            grown = np.zeros(2 * self.piv_indptr.shape[0], dtype=np.int64)
            grown[: self.piv_indptr.shape[0]] = self.piv_indptr
            self.piv_indptr = grown
        while self.piv_rows.shape[0] < need_rows:
            self.piv_rows = np.concatenate(
                [self.piv_rows, np.empty(self.piv_rows.shape[0], dtype=np.int64)]
            )
            self.piv_vals = np.concatenate(
                [self.piv_vals, np.empty(self.piv_vals.shape[0], dtype=np.int64)]
            )

    def add_chunk(self, indptr, rows, vals) -> None:
        if self.done:
            return
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        rows = np.ascontiguousarray(rows, dtype=np.int64)
        vals = np.ascontiguousarray(vals, dtype=np.int64)
        target = -1 if self.target is None else self.target
        col = 0
        while True:
            col, self.n_stored, status = self._kernel(
                indptr, rows, vals, col,
                self.piv_indptr, self.piv_rows, self.piv_vals, self.n_stored,
                self.low_slot, self.p, target,
                self._wrows, self._wvals, self._mrows, self._mvals,
            )
            if status == 2:
                self._grow(self.piv_indptr[self.n_stored] + self.nrows)
                continue
            return

    def add_column(self, rows, vals) -> None:
        indptr = np.array([0, len(rows)], dtype=np.int64)
        self.add_chunk(indptr, np.asarray(rows), np.asarray(vals))

    def add_columns(self, columns, defer: bool = False) -> None:
        """columns: iterable of (rows, vals) pairs."""
        columns = list(columns)
        stash = []
        if defer:
            for rows, vals in columns:
                if len(rows) and self.low_slot[rows[-1]] < 0:
                    # claim eagerly so later columns in this batch collide
                    self._append_pivot(rows, vals)
                else:
                    stash.append((rows, vals))
                if self.done:
                    return
            columns = stash
        for rows, vals in columns:
            if self.done:
                return
            self.add_column(rows, vals)

    def _append_pivot(self, rows, vals) -> None:
        rows = np.asarray(rows, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.int64) % self.p
        keep = vals != 0
        rows, vals = rows[keep], vals[keep]
        if rows.size == 0 or self.low_slot[rows[-1]] >= 0:
            if rows.size:
                self.add_column(rows, vals)
            return
        piv_len = int(self.piv_indptr[self.n_stored])
        self._grow(piv_len + rows.size)
        self.piv_rows[piv_len : piv_len + rows.size] = rows
        self.piv_vals[piv_len : piv_len + rows.size] = vals
        self.piv_indptr[self.n_stored + 1] = piv_len + rows.size
        self.low_slot[rows[-1]] = self.n_stored
        self.n_stored += 1


def rank_mod_p(columns, nrows: int, p: int = DEFAULT_PRIME,
               target: int | None = None, use_numba: bool | None = None) -> int:
    """Rank of the sparse integer matrix with the given columns, over F_p.

    For an integer matrix this is a lower bound on the rank over Q, with
    equality unless p divides an unlucky invariant factor.
    """
    red = IncrementalRank(nrows, p=p, target=target, use_numba=use_numba)
    red.add_columns(columns)
    return red.rank
