"""Pure numpy/Python implementations of the hot loops.

Semantics match ``_ckernels`` exactly.  Both backends consume the same
precomputed per-coordinate factor tables (``factors[j][m]`` is the weight of
offset m in coordinate j, inf-padded past the largest admissible offset) and
accumulate the running product left to right, so membership decisions are
bit-for-bit identical across backends and against the table-based box-scan
oracle in the tests.
"""

from __future__ import annotations

import numpy as np

CHUNK = 256


def enumerate_members(factors: np.ndarray, budget: float, cap: int):
    """All h with prod_j factors[j][|h_j|] < budget, in lexicographic order.

    Returns an (n, d) int64 array, or None if the set would exceed ``cap``.
    """
    d = factors.shape[0]
    rows: list[list[int]] = []
    h = [0] * d

    def max_offset(j: int, prefix: float) -> int:
        m = 0
        row = factors[j]
        while m + 1 < row.shape[0] and prefix * row[m + 1] < budget:
            m += 1
        return m

    def descend(j: int, prefix: float) -> bool:
        if j == d:
            if len(rows) >= cap:
                return False
            rows.append(h.copy())
            return True
        m = max_offset(j, prefix)
        for hj in range(-m, m + 1):
            h[j] = hj
            p = prefix if hj == 0 else prefix * factors[j][abs(hj)]
            if not descend(j + 1, p):
                return False
        h[j] = 0
        return True

    if not descend(0, 1.0):
        return None
    return np.asarray(rows, dtype=np.int64).reshape(len(rows), d)


def count_members(factors: np.ndarray, budget: float, cap: int) -> int:
    """Cardinality of the same set, without materializing it.

    Zero coordinates are implicit (each node picks the next active
    coordinate), so very large d stays cheap.  Relies on factors[j][1] being
    non-decreasing in j to cut the coordinate scan.  Saturates at cap + 1.
    """
    d = factors.shape[0]

    def count(j_start: int, prefix: float) -> int:
        total = 1
        for j in range(j_start, d):
            row = factors[j]
            if row.shape[0] < 2 or prefix * row[1] >= budget:
                break
            m = 1
            while m < row.shape[0]:
                p = prefix * row[m]
                if p >= budget:
                    break
                total += 2 * count(j + 1, p)
                if total > cap:
                    return cap + 1
                m += 1
        return total

    return count(0, 1.0)


def cbc_scan(base: np.ndarray, w: np.ndarray, n: int) -> np.ndarray:
    """Squared worst-case error for every candidate last coordinate.

    ``base[j]`` is the per-node product over already-fixed coordinates and
    ``w`` the single-coordinate kernel factor on the grid k/n.  Candidate z
    scores mean_j base[j] * w[(j z) mod n] - 1.
    """
    out = np.empty(n - 1)
    j = np.arange(n, dtype=np.int64)
    for lo in range(1, n, CHUNK):
        zs = np.arange(lo, min(lo + CHUNK, n), dtype=np.int64)
        idx = (j[None, :] * zs[:, None]) % n
        out[lo - 1 : lo - 1 + zs.shape[0]] = (w[idx] @ base) / n - 1.0
    return out
