"""Knill-Laflamme checks and the isoclinic family induced by a correctable code."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .errors import DegeneracyError, DomainError, PreconditionError
from .matcore import (
    Tolerance,
    TolLike,
    as_matrix,
    as_tolerance,
    frobenius_norm,
    hermitian_eig,
    is_scalar_multiple_of,
    matrix_from_dict,
    matrix_to_dict,
    polar_partial_isometry,
)
from .subspaces import (
    FamilyReport,
    OrthProjection,
    Subspace,
    family_isoclinic_check,
    isoclinic_check,
    subspace_from_columns,
)

__all__ = [
    "ErrorModel",
    "KLReport",
    "ExtractionResult",
    "kl_check",
    "extract_isoclinic_family",
    "rotate_model",
    "rotation_matrix",
    "converse_check",
]

# Slack allowed on sum_i E_i^* E_i <= I.
COMPLETENESS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ErrorModel:
    """Ordered Kraus operators ``E_i`` on C^n with ``sum E_i^* E_i <= I``."""

    kraus: tuple

    def __post_init__(self):
        ops = tuple(as_matrix(e, f"operator {i}") for i, e in enumerate(self.kraus))
        if not ops:
            raise DomainError("error model needs at least one operator")
        n = ops[0].shape[0]
        for i, e in enumerate(ops):
            if e.shape != (n, n):
                raise DomainError(f"operator {i} has shape {e.shape}, expected {(n, n)}")
        total = sum(e.conj().T @ e for e in ops)
        top = hermitian_eig(total, Tolerance(1e-9, rel=True))[0][0]
        if top > 1.0 + COMPLETENESS_TOL:
            raise DomainError(f"sum of E_i^* E_i exceeds the identity (largest eigenvalue {top:.12g})")
        for e in ops:
            e.setflags(write=False)
        object.__setattr__(self, "kraus", ops)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def __len__(self) -> int:
        return len(self.kraus)

    def to_dict(self) -> dict:
        return {"operators": [matrix_to_dict(e) for e in self.kraus]}

    @classmethod
    def from_dict(cls, obj: Any) -> "ErrorModel":
        if not isinstance(obj, dict) or not isinstance(obj.get("operators"), list):
            raise DomainError('error model JSON must be {"operators": [<matrix>, ...]}')
        return cls(tuple(matrix_from_dict(m) for m in obj["operators"]))


@dataclass(frozen=True)
class KLReport:
    correctable: bool
    alpha: np.ndarray
    residuals: np.ndarray
    nondegenerate: bool
    gram_spectrum: tuple[float, ...]
    alpha_psd: bool
    tol: Optional[Tolerance] = None

    def to_dict(self) -> dict:
        out = {
            "correctable": self.correctable,
            "alpha": matrix_to_dict(self.alpha),
            "residuals": self.residuals.tolist(),
            "nondegenerate": self.nondegenerate,
            "gram_spectrum": list(self.gram_spectrum),
            "alpha_psd": self.alpha_psd,
        }
        if self.tol is not None:
            out["tol"] = self.tol.to_dict()
        return out


@dataclass(frozen=True)
class ExtractionResult:
    subspaces: tuple[Subspace, ...]
    partial_isometries: tuple[np.ndarray, ...]
    lambda_matrix: np.ndarray
    pairwise_lambda: np.ndarray
    family_isoclinic: bool
    projection_residuals: np.ndarray
    kl: KLReport
    family: FamilyReport

    def to_dict(self) -> dict:
        return {
            "family_isoclinic": self.family_isoclinic,
            "lambda_matrix": matrix_to_dict(self.lambda_matrix),
            "pairwise_lambda": self.pairwise_lambda.tolist(),
            "projection_residuals": self.projection_residuals.tolist(),
            "subspace_dims": [s.dim for s in self.subspaces],
            "kl": self.kl.to_dict(),
            "family": self.family.to_dict(),
        }


def _as_code(code) -> Subspace:
    if isinstance(code, OrthProjection):
        return code.range_subspace()
    if not isinstance(code, Subspace):
        raise DomainError("code must be a Subspace or OrthProjection")
    return code


def kl_check(code: Subspace, model: ErrorModel, tol: TolLike = None) -> KLReport:
    """Test ``P_C E_i^* E_j P_C = alpha_ij P_C`` for every pair of operators.

    ``alpha`` always holds the best-fit scalars ``trace(P E_i^* E_j P) / dim C``,
    whether or not the test passes.
    """
    code = _as_code(code)
    tol = as_tolerance(tol)
    if code.ambient_dim != model.dim:
        raise DomainError(f"code lives in C^{code.ambient_dim}, operators act on C^{model.dim}")
    if code.dim == 0:
        raise DomainError("code has dimension 0")
    p = code.projection()
    k = len(model)
    restricted = [e @ p.matrix for e in model.kraus]
    alpha = np.zeros((k, k), dtype=np.complex128)
    residuals = np.zeros((k, k))
    correctable = True
    for i, j in itertools.product(range(k), repeat=2):
        block = restricted[i].conj().T @ restricted[j]
        alpha[i, j] = np.trace(block) / p.rank
        residuals[i, j] = frobenius_norm(block - alpha[i, j] * p.matrix)
        if is_scalar_multiple_of(block, p, tol) is None:
            correctable = False

    vecs = np.stack([r.ravel() for r in restricted], axis=1)
    gram = vecs.conj().T @ vecs
    spectrum = hermitian_eig(gram, Tolerance(1e-9, rel=True))[0]
    nondegenerate = bool(spectrum[0] > 0 and spectrum[-1] > tol.abs_eps * spectrum[0])

    alpha_eigs = hermitian_eig(alpha, Tolerance(1e-9, rel=True))[0]
    alpha_psd = bool(alpha_eigs[-1] >= -tol.bound(frobenius_norm(alpha)))
    return KLReport(
        correctable=correctable,
        alpha=alpha,
        residuals=residuals,
        nondegenerate=nondegenerate,
        gram_spectrum=tuple(spectrum.tolist()),
        alpha_psd=alpha_psd,
        tol=tol,
    )


def extract_isoclinic_family(code: Subspace, model: ErrorModel, tol: TolLike = None) -> ExtractionResult:
    """Ranges of the restricted errors ``E_i P_C`` and their isoclinic parameters.

    Raises ``PreconditionError`` when the code is not correctable and
    ``DegeneracyError`` when the restricted operators are linearly dependent.
    """
    code = _as_code(code)
    tol = as_tolerance(tol)
    kl = kl_check(code, model, tol)
    if not kl.correctable:
        worst = float(kl.residuals.max())
        raise PreconditionError(f"code is not correctable for this model (max KL residual {worst:.3e})")
    diag = kl.alpha.diagonal().real
    if not kl.nondegenerate or np.any(diag <= tol.abs_eps):
        raise DegeneracyError(
            "restricted error operators are linearly dependent; "
            f"Gram spectrum {list(kl.gram_spectrum)}"
        )

    p = code.projection().matrix
    unitaries = tuple(polar_partial_isometry(e @ p, tol) for e in model.kraus)
    subspaces = tuple(subspace_from_columns(e @ code.basis, tol) for e in model.kraus)
    norm = np.sqrt(diag)
    lam = kl.alpha / np.outer(norm, norm)
    pairwise = np.abs(lam) ** 2

    projs = [u @ p @ u.conj().T for u in unitaries]
    k = len(projs)
    resid = np.zeros((k, k))
    for i, j in itertools.product(range(k), repeat=2):
        resid[i, j] = frobenius_norm(projs[i] @ projs[j] @ projs[i] - pairwise[i, j] * projs[i])

    family = family_isoclinic_check(subspaces, tol)
    ok = family.isoclinic and bool(resid.max() <= tol.bound(np.sqrt(code.dim)))
    return ExtractionResult(
        subspaces=subspaces,
        partial_isometries=unitaries,
        lambda_matrix=lam,
        pairwise_lambda=pairwise,
        family_isoclinic=ok,
        projection_residuals=resid,
        kl=kl,
        family=family,
    )


def rotation_matrix(phi: float) -> np.ndarray:
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def rotate_model(model: ErrorModel, phi: float) -> ErrorModel:
    """``[F_1 F_2] = [E_1 E_2] U`` with ``U`` the rotation by ``phi``."""
    if len(model) != 2:
        raise DomainError(f"rotation needs exactly 2 operators, got {len(model)}")
    e1, e2 = model.kraus
    c, s = np.cos(phi), np.sin(phi)
    return ErrorModel((c * e1 + s * e2, -s * e1 + c * e2))


def converse_check(p1: OrthProjection, p2: OrthProjection, tol: TolLike = None) -> tuple[KLReport, KLReport]:
    """KL reports for both ranges under the model ``{P_1 / sqrt 2, P_2 / sqrt 2}``."""
    tol = as_tolerance(tol)
    if p1.ambient_dim != p2.ambient_dim:
        raise DomainError(f"ambient dimensions differ: {p1.ambient_dim} vs {p2.ambient_dim}")
    if p1.rank != p2.rank:
        raise DomainError(f"projection ranks differ: {p1.rank} vs {p2.rank}")
    v, w = p1.range_subspace(), p2.range_subspace()
    rep = isoclinic_check(v, w, tol)
    if not rep.isoclinic:
        raise PreconditionError(f"projections are not isoclinic (cosines {list(rep.cosines)})")
    model = ErrorModel((p1.matrix / np.sqrt(2.0), p2.matrix / np.sqrt(2.0)))
    return kl_check(v, model, tol), kl_check(w, model, tol)
