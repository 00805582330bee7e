"""Canonical angles between subspaces and the isoclinic test.

A subspace is carried by an isometry ``Q`` (orthonormal columns); its
orthogonal projection is ``Q Q^*``. Two equal-dimensional subspaces are
isoclinic when all canonical angles coincide, equivalently when
``Q_V^* Q_W`` is a multiple of a unitary, equivalently when
``P_V P_W P_V = lam P_V`` and ``P_W P_V P_W = lam P_W``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .matcore import (
    Tolerance,
    TolLike,
    as_matrix,
    as_tolerance,
    frobenius_norm,
    hermitian_eig,
    matrix_to_dict,
    qr_orthonormalize,
    svd,
)

__all__ = [
    "Subspace",
    "OrthProjection",
    "CanonicalAngles",
    "IsoclinicReport",
    "FamilyReport",
    "subspace_from_columns",
    "random_subspace",
    "canonical_angles",
    "isoclinic_check",
    "ratio_probe",
    "make_isoclinic_pair",
    "family_isoclinic_check",
]

# Structural checks on constructed values; independent of the user's tol.
_STRUCT_TOL = Tolerance(1e-8, rel=True)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of C^n given by an n x m isometry ``basis``."""

    basis: np.ndarray

    def __post_init__(self):
        q = as_matrix(self.basis, "basis")
        n, m = q.shape
        if m > n:
            raise DomainError(f"basis has more columns ({m}) than rows ({n})")
        dev = frobenius_norm(q.conj().T @ q - np.eye(m))
        if dev > _STRUCT_TOL.bound(np.sqrt(m)):
            raise DomainError(f"basis columns are not orthonormal (||Q*Q - I||_F = {dev:.3e})")
        object.__setattr__(self, "basis", _frozen(q))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projection(self) -> "OrthProjection":
        return OrthProjection(self.basis @ self.basis.conj().T, self.dim)

    def to_dict(self) -> dict:
        return matrix_to_dict(self.basis)


@dataclass(frozen=True, eq=False)
class OrthProjection:
    """Hermitian idempotent n x n matrix together with its rank."""

    matrix: np.ndarray
    rank: int

    def __post_init__(self):
        p = as_matrix(self.matrix, "projection")
        if p.shape[0] != p.shape[1]:
            raise DomainError(f"projection must be square, got {p.shape}")
        scale = max(1.0, frobenius_norm(p))
        herm = frobenius_norm(p - p.conj().T)
        idem = frobenius_norm(p @ p - p)
        if herm > _STRUCT_TOL.bound(scale) or idem > _STRUCT_TOL.bound(scale):
            raise DomainError(
                f"not an orthogonal projection (hermiticity {herm:.3e}, idempotency {idem:.3e})"
            )
        tr = np.trace(p).real
        if abs(tr - self.rank) > 1e-6:
            raise DomainError(f"trace {tr:.6f} does not match rank {self.rank}")
        object.__setattr__(self, "matrix", _frozen(p))
        object.__setattr__(self, "rank", int(self.rank))

    @classmethod
    def from_matrix(cls, p) -> "OrthProjection":
        p = as_matrix(p, "projection")
        return cls(p, int(round(np.trace(p).real)))

    @property
    def ambient_dim(self) -> int:
        return self.matrix.shape[0]

    def range_subspace(self) -> Subspace:
        _, q = hermitian_eig(self.matrix, _STRUCT_TOL)
        if self.rank == 0:
            raise DomainError("projection has rank 0")
        return Subspace(q[:, : self.rank])

    def kernel_basis(self) -> np.ndarray:
        _, q = hermitian_eig(self.matrix, _STRUCT_TOL)
        return q[:, self.rank :].copy()


@dataclass(frozen=True)
class CanonicalAngles:
    angles: tuple[float, ...]  # ascending, in [0, pi/2]
    cosines: tuple[float, ...]  # descending singular values

    def to_dict(self) -> dict:
        return {"angles": list(self.angles), "cosines": list(self.cosines)}


@dataclass(frozen=True)
class IsoclinicReport:
    isoclinic: bool
    lam: float
    canonical_angle: float
    paper_angle: float
    spread: float
    residuals: dict
    conditions: dict
    cosines: tuple[float, ...] = ()
    tol: Optional[Tolerance] = None

    def to_dict(self) -> dict:
        out = {
            "isoclinic": self.isoclinic,
            "lambda": self.lam,
            "canonical_angle": self.canonical_angle,
            "paper_angle": self.paper_angle,
            "spread": self.spread,
            "residuals": dict(self.residuals),
            "conditions": dict(self.conditions),
            "cosines": list(self.cosines),
        }
        if self.tol is not None:
            out["tol"] = self.tol.to_dict()
        return out


@dataclass(frozen=True)
class FamilyReport:
    isoclinic: bool
    lambdas: np.ndarray  # k x k, unit diagonal
    pairs: dict = field(default_factory=dict)  # (i, j) -> IsoclinicReport, i < j

    def to_dict(self) -> dict:
        return {
            "isoclinic": self.isoclinic,
            "lambda_matrix": self.lambdas.tolist(),
            "pairs": [
                {"i": i, "j": j, **rep.to_dict()} for (i, j), rep in sorted(self.pairs.items())
            ],
        }


def subspace_from_columns(raw, tol: TolLike = None) -> Subspace:
    """Orthonormalize the columns of ``raw``; they must be linearly independent."""
    raw = as_matrix(raw, "columns")
    q, rank = qr_orthonormalize(raw, tol)
    if rank != raw.shape[1]:
        raise DomainError(
            f"columns are linearly dependent: numerical rank {rank} < {raw.shape[1]} columns"
        )
    return Subspace(q)


def _complex_gaussian(rng: np.random.Generator, *shape: int) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_subspace(n: int, m: int, seed=None) -> Subspace:
    """Haar-random m-dimensional subspace of C^n."""
    if not 1 <= m <= n:
        raise DomainError(f"need 1 <= m <= n, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    return subspace_from_columns(_complex_gaussian(rng, n, m))


def _check_ambient(v: Subspace, w: Subspace) -> None:
    if v.ambient_dim != w.ambient_dim:
        raise DomainError(f"ambient dimensions differ: {v.ambient_dim} vs {w.ambient_dim}")


def canonical_angles(v: Subspace, w: Subspace) -> CanonicalAngles:
    _check_ambient(v, w)
    _, s, _ = svd(v.basis.conj().T @ w.basis)
    s = np.clip(s, 0.0, 1.0)
    return CanonicalAngles(tuple(np.arccos(s).tolist()), tuple(s.tolist()))


def isoclinic_check(v: Subspace, w: Subspace, tol: TolLike = None) -> IsoclinicReport:
    """Evaluate the equal-angle, scalar-unitary and projection-identity criteria."""
    _check_ambient(v, w)
    if v.dim != w.dim:
        raise DomainError(f"subspace dimensions differ: {v.dim} vs {w.dim}")
    tol = as_tolerance(tol)
    m = v.dim
    g = v.basis.conj().T @ w.basis
    _, s, _ = svd(g)
    s = np.clip(s, 0.0, 1.0)

    pv = v.basis @ v.basis.conj().T
    pw = w.basis @ w.basis.conj().T
    pvpwpv = pv @ pw @ pv
    lam = float(np.clip(np.trace(pvpwpv).real / m, 0.0, 1.0))

    spread = float(s[0] - s[-1])
    r_unitary = frobenius_norm(g @ g.conj().T - lam * np.eye(m))
    r_v = frobenius_norm(pvpwpv - lam * pv)
    r_w = frobenius_norm(pw @ pv @ pw - lam * pw)

    conditions = {
        "equal_angles": spread <= tol.bound(1.0),
        "scalar_unitary": r_unitary <= tol.bound(frobenius_norm(g @ g.conj().T)),
        "projection_identity": r_v <= tol.bound(frobenius_norm(pvpwpv)) and r_w <= tol.bound(frobenius_norm(pvpwpv)),
    }
    mean_cos = float(np.clip(s.mean(), 0.0, 1.0))
    return IsoclinicReport(
        isoclinic=all(conditions.values()),
        lam=lam,
        canonical_angle=float(np.arccos(mean_cos)),
        paper_angle=float(np.arccos(lam)),
        spread=spread,
        residuals={"unitary": r_unitary, "v_side": r_v, "w_side": r_w},
        conditions=conditions,
        cosines=tuple(s.tolist()),
        tol=tol,
    )


def ratio_probe(v: Subspace, w: Subspace, samples: int = 100, seed: int = 0) -> tuple[float, float]:
    """Extremes of ``||P_W x|| / ||x||`` over random unit vectors ``x`` in ``v``."""
    _check_ambient(v, w)
    if samples < 1:
        raise DomainError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    x = v.basis @ _complex_gaussian(rng, v.dim, samples)
    ratios = np.linalg.norm(w.basis.conj().T @ x, axis=0) / np.linalg.norm(x, axis=0)
    return float(ratios.min()), float(ratios.max())


def make_isoclinic_pair(n: int, m: int, lam: float, seed: int = 0) -> tuple[Subspace, Subspace]:
    """Random pair ``V = span{u_j}``, ``W = span{sqrt(lam) u_j + sqrt(1-lam) v_j}``."""
    if m < 1 or 2 * m > n:
        raise DomainError(f"need 1 <= m and 2m <= n, got m={m}, n={n}")
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(_complex_gaussian(rng, n, 2 * m))
    u, vperp = q[:, :m], q[:, m:]
    return Subspace(u), Subspace(np.sqrt(lam) * u + np.sqrt(1.0 - lam) * vperp)


def family_isoclinic_check(subspaces: Sequence[Subspace], tol: TolLike = None) -> FamilyReport:
    tol = as_tolerance(tol)
    k = len(subspaces)
    lambdas = np.eye(k)
    pairs = {}
    for i, j in itertools.combinations(range(k), 2):
        rep = isoclinic_check(subspaces[i], subspaces[j], tol)
        pairs[(i, j)] = rep
        lambdas[i, j] = lambdas[j, i] = rep.lam
    return FamilyReport(all(r.isoclinic for r in pairs.values()), lambdas, pairs)
