"""Rank-k numerical ranges of Hermitian matrices and projections."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .matcore import Tolerance, TolLike, as_matrix, as_tolerance, frobenius_norm, hermitian_eig, is_scalar_multiple_of
from .subspaces import OrthProjection

__all__ = [
    "NumRangeInterval",
    "SymmetryReport",
    "hermitian_rank_k_range",
    "projection_witness",
    "pair_symmetry_check",
]


@dataclass(frozen=True)
class NumRangeInterval:
    k: int
    lower: float
    upper: float
    empty: bool

    def __contains__(self, x: float) -> bool:
        return not self.empty and self.lower <= x <= self.upper

    def to_dict(self) -> dict:
        return {"k": self.k, "lower": self.lower, "upper": self.upper, "empty": self.empty}


def hermitian_rank_k_range(a, k: int, tol: TolLike = None) -> NumRangeInterval:
    """``Lambda_k(a) = [a_{n-k+1}, a_k]`` for eigenvalues ``a_1 >= ... >= a_n``.

    Endpoints that cross by no more than ``tol`` (roundoff on a repeated
    eigenvalue) are merged into a single point.
    """
    a = as_matrix(a)
    tol = as_tolerance(tol)
    w, _ = hermitian_eig(a, tol)
    n = w.size
    if not 1 <= k <= n:
        raise DomainError(f"k must satisfy 1 <= k <= {n}, got {k}")
    lower, upper = float(w[n - k]), float(w[k - 1])
    if lower > upper:
        if lower - upper > tol.bound(frobenius_norm(a)):
            return NumRangeInterval(k, lower, upper, True)
        lower = upper = 0.5 * (lower + upper)
    return NumRangeInterval(k, lower, upper, False)


def projection_witness(p: OrthProjection, k: int, lam: float) -> OrthProjection:
    """Rank-k projection ``R`` with ``R P R = lam R``.

    ``R`` projects onto ``span{sqrt(lam) u_j + sqrt(1 - lam) v_j}`` where the
    ``u_j`` lie in the range of ``P`` and the ``v_j`` in its kernel.
    """
    n, rank = p.ambient_dim, p.rank
    if k < 1 or k > min(rank, n - rank):
        raise DomainError(f"need 1 <= k <= min(rank, n - rank) = {min(rank, n - rank)}, got k={k}")
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    _, q = hermitian_eig(p.matrix, Tolerance(1e-8, rel=True))
    u, v = q[:, :k], q[:, rank : rank + k]
    w = np.sqrt(lam) * u + np.sqrt(1.0 - lam) * v
    return OrthProjection(w @ w.conj().T, k)


@dataclass(frozen=True)
class SymmetryReport:
    holds: bool
    agree: bool
    mu: Optional[float]
    mu_pqp: Optional[complex]
    mu_qpq: Optional[complex]
    residual_pqp: float
    residual_qpq: float
    trace_identity_residual: Optional[float]

    def to_dict(self) -> dict:
        def _num(z):
            return None if z is None else float(np.real(z))

        return {
            "holds": self.holds,
            "agree": self.agree,
            "mu": self.mu,
            "mu_pqp": _num(self.mu_pqp),
            "mu_qpq": _num(self.mu_qpq),
            "residual_pqp": self.residual_pqp,
            "residual_qpq": self.residual_qpq,
            "trace_identity_residual": self.trace_identity_residual,
        }


def pair_symmetry_check(p: OrthProjection, q: OrthProjection, tol: TolLike = None) -> SymmetryReport:
    """Test ``PQP = mu P`` and ``QPQ = mu Q`` independently and compare."""
    tol = as_tolerance(tol)
    if p.ambient_dim != q.ambient_dim:
        raise DomainError(f"ambient dimensions differ: {p.ambient_dim} vs {q.ambient_dim}")
    if p.rank != q.rank:
        raise DomainError(f"ranks differ: {p.rank} vs {q.rank}")
    pm, qm = p.matrix, q.matrix
    pqp, qpq = pm @ qm @ pm, qm @ pm @ qm
    mu_p = is_scalar_multiple_of(pqp, p, tol)
    mu_q = is_scalar_multiple_of(qpq, q, tol)
    r_p = frobenius_norm(pqp - np.trace(pqp) / p.rank * pm)
    r_q = frobenius_norm(qpq - np.trace(qpq) / q.rank * qm)

    holds = mu_p is not None and mu_q is not None
    agree = (mu_p is None) == (mu_q is None)
    if holds:
        agree = agree and abs(mu_p - mu_q) <= tol.bound(1.0)
    mu = float(np.real(mu_p)) if holds else None
    trace_resid = None
    if holds and abs(mu) > tol.abs_eps:
        trace_resid = abs(np.trace(qpq).real / mu - p.rank)
    return SymmetryReport(holds, bool(agree), mu, mu_p, mu_q, r_p, r_q, trace_resid)
