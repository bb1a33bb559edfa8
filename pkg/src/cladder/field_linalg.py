"""Dense exact linear algebra over a prime field F_p.

Matrices are plain ``numpy`` int64 arrays holding residues in ``[0, p)``.
Pivoting is deterministic: columns are scanned left to right and the first
row (from the top) with a nonzero entry becomes the pivot row.
"""

from __future__ import annotations

import numpy as np

DEFAULT_PRIME = 2


class InconsistentSystem(ValueError):
    """Raised when ``solve`` is asked for a system with no solution."""


def _check_prime(p: int) -> None:
    if p < 2 or p >= 1 << 16:
        raise ValueError(f"prime out of supported range: {p}")


def as_matrix(a, p: int = DEFAULT_PRIME, shape: tuple[int, int] | None = None) -> np.ndarray:
    m = np.asarray(a, dtype=np.int64)
    if shape is not None:
        m = m.reshape(shape)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    return np.mod(m, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mul(a: np.ndarray, b: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    return np.mod(a @ b, p)


def inv_scalar(a: int, p: int) -> int:
    return pow(int(a) % p, p - 2, p)


def rref(a: np.ndarray, p: int = DEFAULT_PRIME) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    _check_prime(p)
    r = np.mod(np.array(a, dtype=np.int64, copy=True), p)
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        nz = np.flatnonzero(r[row:, col])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        if r[row, col] != 1:
            r[row] = (r[row] * inv_scalar(r[row, col], p)) % p
        factors = r[:, col].copy()
        factors[row] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            r[hit] = (r[hit] - np.outer(factors[hit], r[row])) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: np.ndarray, p: int = DEFAULT_PRIME) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    # eliminate along the shorter side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref(a, p)[1])


def kernel_basis(a: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    """Columns spanning the null space of ``a`` (shape ``cols x k``)."""
    rows, cols = a.shape
    if cols == 0:
        return zeros(0, 0)
    if rows == 0:
        return identity(cols)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(cols, len(free))
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-r[i, f]) % p
    return basis


def image_basis(a: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    """The pivot columns of ``a``; a basis of its column space."""
    if a.size == 0:
        return zeros(a.shape[0], 0)
    _, pivots = rref(a, p)
    return np.mod(a[:, pivots], p)


def inverse(a: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.hstack([np.mod(a, p), identity(n)])
    r, pivots = rref(aug, p)
    if sum(1 for c in pivots if c < n) < n:
        raise InconsistentSystem("singular matrix")
    return r[:, n:]


def solve(a: np.ndarray, b: np.ndarray, p: int = DEFAULT_PRIME) -> np.ndarray:
    """One solution ``x`` of ``a @ x = b``; ``b`` may have several columns.

    Free variables are set to zero.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    rows, cols = a.shape
    if b.shape[0] != rows:
        raise ValueError(f"dimension mismatch: {a.shape} vs rhs {b.shape}")
    k = b.shape[1]
    if rows == 0:
        x = zeros(cols, k)
        return x[:, 0] if vec else x
    r, pivots = rref(np.hstack([np.mod(a, p), np.mod(b, p)]), p)
    if pivots and pivots[-1] >= cols:
        raise InconsistentSystem("system has no solution")
    x = zeros(cols, k)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols:]
    return x[:, 0] if vec else x


def cokernel_projection(a: np.ndarray, p: int = DEFAULT_PRIME) -> tuple[np.ndarray, np.ndarray]:
    """Projection onto a complement of the column space of ``a``.

    Returns ``(proj, section)`` with ``proj @ a == 0``, ``proj`` surjective and
    ``proj @ section == I``. The complement is spanned by the standard basis
    vectors at coordinates that are not pivots of the column space.
    """
    n = a.shape[0]
    img = image_basis(a, p) if a.size else zeros(n, 0)
    if img.shape[1] == 0:
        return identity(n), identity(n)
    _, piv = rref(img.T, p)
    comp = [i for i in range(n) if i not in set(piv)]
    e = zeros(n, len(comp))
    for j, i in enumerate(comp):
        e[i, j] = 1
    t = np.hstack([img, e])
    proj = inverse(t, p)[img.shape[1]:, :]
    return proj, e


def is_zero(a: np.ndarray) -> bool:
    return not np.any(a)


def block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out
