"""Dense complex matrix helpers.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Everything here
is a pure function; inputs are never modified.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import scipy.linalg

from .errors import DomainError, FactorizationError

__all__ = [
    "Tolerance",
    "as_tolerance",
    "as_matrix",
    "adjoint",
    "matmul",
    "kron",
    "trace",
    "frobenius_norm",
    "svd",
    "hermitian_eig",
    "numerical_rank",
    "qr_orthonormalize",
    "polar_partial_isometry",
    "is_scalar_multiple_of",
    "hpd_solve",
    "hpd_inverse",
    "hpd_inverse_sqrt",
    "matrix_to_dict",
    "matrix_from_dict",
    "load_matrix",
    "dump_matrix",
]


@dataclass(frozen=True)
class Tolerance:
    """Absolute threshold, optionally scaled by the size of the tested object.

    With ``rel=True`` the threshold becomes ``abs_eps * max(1, scale)`` where
    ``scale`` is the Frobenius norm of whatever is being compared.
    """

    abs_eps: float = 1e-9
    rel: bool = False

    def __post_init__(self):
        if not np.isfinite(self.abs_eps) or self.abs_eps < 0:
            raise DomainError(f"tolerance must be a finite nonnegative number, got {self.abs_eps!r}")

    def bound(self, scale: float = 1.0) -> float:
        if self.rel:
            return self.abs_eps * max(1.0, float(scale))
        return self.abs_eps

    def to_dict(self) -> dict:
        return {"abs_eps": self.abs_eps, "rel": self.rel}


TolLike = Union[Tolerance, float, None]


def as_tolerance(tol: TolLike) -> Tolerance:
    if tol is None:
        return Tolerance()
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(float(tol))


def as_matrix(a: Any, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite, nonempty 2-D complex array (a copy is not forced)."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr[:, np.newaxis]
    if arr.ndim != 2:
        raise DomainError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise DomainError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    return arr


def _square(a: np.ndarray, name: str) -> None:
    if a.shape[0] != a.shape[1]:
        raise DomainError(f"{name} must be square, got shape {a.shape}")


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def matmul(*factors) -> np.ndarray:
    """Left-to-right product of one or more matrices."""
    if not factors:
        raise DomainError("matmul needs at least one factor")
    out = as_matrix(factors[0])
    for f in factors[1:]:
        f = as_matrix(f)
        if out.shape[1] != f.shape[0]:
            raise DomainError(f"shape mismatch in product: {out.shape} @ {f.shape}")
        out = out @ f
    return out


def kron(*factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for f in factors:
        out = np.kron(out, as_matrix(f))
    return out


def trace(a) -> complex:
    a = as_matrix(a)
    _square(a, "matrix")
    return complex(np.trace(a))


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=np.complex128)))


def svd(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``a = U @ diag(s) @ V^*`` with ``s`` descending.

    Returns ``(U, s, V)``; note ``V`` itself, not its adjoint.
    """
    a = as_matrix(a)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"SVD did not converge for {a.shape} matrix") from exc
    return u, s, vh.conj().T


def _check_hermitian(a: np.ndarray, tol: Tolerance) -> None:
    _square(a, "matrix")
    dev = frobenius_norm(a - a.conj().T)
    if dev > tol.bound(frobenius_norm(a)):
        raise DomainError(f"matrix is not Hermitian (||A - A*||_F = {dev:.3e})")


def hermitian_eig(a, tol: TolLike = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending, real) and unitary eigenvector matrix of a Hermitian matrix."""
    a = as_matrix(a)
    tol = as_tolerance(tol)
    _check_hermitian(a, tol)
    h = 0.5 * (a + a.conj().T)
    try:
        w, q = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"eigh did not converge for {a.shape} matrix") from exc
    return w[::-1].copy(), q[:, ::-1].copy()


def _rank_cutoff(s: np.ndarray, tol: Tolerance) -> float:
    smax = float(s[0]) if s.size else 0.0
    return tol.abs_eps * max(1.0, smax)


def numerical_rank(a, tol: TolLike = None) -> int:
    _, s, _ = svd(a)
    return int(np.count_nonzero(s > _rank_cutoff(s, as_tolerance(tol))))


def qr_orthonormalize(a, tol: TolLike = None) -> tuple[np.ndarray, int]:
    """Orthonormal basis of the column span of ``a`` and its numerical rank.

    Full column rank inputs go through Householder QR with the sign of
    ``diag(R)`` fixed positive, so an already orthonormal input comes back
    unchanged. Rank-deficient inputs fall back to the leading left singular
    vectors.
    """
    a = as_matrix(a)
    tol = as_tolerance(tol)
    u, s, _ = svd(a)
    rank = int(np.count_nonzero(s > _rank_cutoff(s, tol)))
    if rank == a.shape[1]:
        q, r = np.linalg.qr(a)
        d = np.diag(r)
        return q * (d / np.abs(d))[np.newaxis, :], rank
    return u[:, :rank].copy(), rank


def polar_partial_isometry(a, tol: TolLike = None) -> np.ndarray:
    """Partial isometry ``U`` of the polar decomposition ``a = U |a|``.

    Singular values at or below the rank cutoff are discarded, so ``U^* U``
    projects onto the support of ``a`` and ``U U^*`` onto its range.
    """
    u, s, v = svd(a)
    keep = s > _rank_cutoff(s, as_tolerance(tol))
    return u[:, keep] @ v[:, keep].conj().T


def _projection_rank(p) -> tuple[np.ndarray, int]:
    matrix = getattr(p, "matrix", p)
    matrix = as_matrix(matrix, "projection")
    rank = getattr(p, "rank", None)
    if rank is None:
        rank = int(round(np.trace(matrix).real))
    return matrix, int(rank)


def is_scalar_multiple_of(b, p, tol: TolLike = None) -> Optional[complex]:
    """Return ``alpha`` with ``b == alpha * p`` up to ``tol``, else ``None``.

    ``p`` is an orthogonal projection (array or anything with ``matrix`` and
    ``rank`` attributes). The candidate ``trace(b) / rank(p)`` is the
    least-squares optimum, so it is the only scalar worth testing.
    """
    b = as_matrix(b)
    pm, rank = _projection_rank(p)
    if b.shape != pm.shape:
        raise DomainError(f"shape mismatch: {b.shape} vs projection {pm.shape}")
    _square(b, "matrix")
    if rank <= 0:
        raise DomainError("projection has rank 0")
    tol = as_tolerance(tol)
    alpha = complex(np.trace(b)) / rank
    resid = frobenius_norm(b - alpha * pm)
    if resid <= tol.bound(frobenius_norm(b)):
        return alpha
    return None


def hpd_solve(a, b) -> np.ndarray:
    """Solve ``a x = b`` for Hermitian positive definite ``a``."""
    a = as_matrix(a)
    _square(a, "matrix")
    try:
        factor = scipy.linalg.cho_factor(a)
    except np.linalg.LinAlgError as exc:
        raise DomainError("matrix is not Hermitian positive definite") from exc
    return scipy.linalg.cho_solve(factor, as_matrix(b))


def hpd_inverse(a) -> np.ndarray:
    a = as_matrix(a)
    return hpd_solve(a, np.eye(a.shape[0], dtype=np.complex128))


def hpd_inverse_sqrt(a, tol: TolLike = None) -> np.ndarray:
    w, q = hermitian_eig(a, tol)
    if w[-1] <= 0:
        raise DomainError("matrix is not Hermitian positive definite")
    return (q / np.sqrt(w)[np.newaxis, :]) @ q.conj().T


# JSON matrix format: {"rows": n, "cols": m, "data": [[[re, im], ...], ...]}


def matrix_to_dict(a) -> dict:
    a = as_matrix(a)
    rows, cols = a.shape
    data = [[[float(z.real), float(z.imag)] for z in row] for row in a]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_dict(obj: Any) -> np.ndarray:
    if not isinstance(obj, dict):
        raise DomainError("matrix JSON must be an object")
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except KeyError as exc:
        raise DomainError(f"matrix JSON is missing key {exc.args[0]!r}") from None
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise DomainError("rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows:
        raise DomainError(f"expected {rows} rows of data")
    out = np.empty((rows, cols), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise DomainError(f"row {i} must hold {cols} [re, im] pairs")
        for j, pair in enumerate(row):
            if (
                not isinstance(pair, list)
                or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)
            ):
                raise DomainError(f"entry ({i}, {j}) must be a [re, im] pair of numbers")
            out[i, j] = complex(pair[0], pair[1])
    if not np.all(np.isfinite(out)):
        raise DomainError("matrix has non-finite entries")
    return out


def load_matrix(path: Union[str, Path]) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_dict(json.load(fh))


def dump_matrix(a, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(matrix_to_dict(a)) + "\n", encoding="utf-8")
