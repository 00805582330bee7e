"""Worked examples: the two-qubit bit-flip model and graph subspaces of C^4.

Two-qubit states use the basis ordering |00>, |01>, |10>, |11>, so
``X_1 = X (x) I_2`` flips the first (most significant) qubit.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DomainError
from .matcore import TolLike, as_matrix, as_tolerance, frobenius_norm, hpd_inverse, hpd_inverse_sqrt, hpd_solve, kron
from .qec import ErrorModel
from .subspaces import OrthProjection, Subspace, isoclinic_check, subspace_from_columns

__all__ = [
    "PAULI_X",
    "BitFlipParams",
    "GraphSubspaceSpec",
    "WongReport",
    "ket",
    "bitflip_model",
    "code_c1",
    "code_c2",
    "theta_formula",
    "theta_surface",
    "surface_csv",
    "graph_subspace",
    "graph_projection",
    "wong_equation_check",
    "wong_example_pair",
]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
I2 = np.eye(2, dtype=np.complex128)


@dataclass(frozen=True)
class BitFlipParams:
    p: float
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"p must lie in (0, 1), got {self.p}")


def ket(*bits: int) -> np.ndarray:
    """Computational basis vector |b_1 b_2 ...> as a column."""
    out = np.zeros((2 ** len(bits), 1), dtype=np.complex128)
    out[int("".join(str(b) for b in bits), 2), 0] = 1.0
    return out


def bitflip_model(p: float) -> ErrorModel:
    """``{sqrt(1-p) I_4, sqrt(p) X_1}``: bit flip on the first qubit with probability p."""
    BitFlipParams(p)
    return ErrorModel((np.sqrt(1.0 - p) * np.eye(4), np.sqrt(p) * kron(PAULI_X, I2)))


def code_c1() -> Subspace:
    return Subspace(np.hstack([ket(0, 0), ket(1, 1)]))


def code_c2() -> Subspace:
    return Subspace(np.hstack([ket(1, 0), ket(0, 1)]))


def theta_formula(params: BitFlipParams) -> float:
    """Isoclinic angle of the rotated bit-flip family, with ``cos(theta) = |lambda_12|^2``."""
    p = params.p
    c, s = np.cos(params.phi), np.sin(params.phi)
    num = abs(c * s * (2 * p - 1)) ** 2
    den = (c * c * (1 - p) + s * s * p) * (s * s * (1 - p) + c * c * p)
    return float(np.arccos(np.clip(num / den, 0.0, 1.0)))


def theta_surface(p_steps: int, phi_steps: int) -> list[tuple[float, float, float]]:
    """Rows ``(p, phi, theta)`` on a uniform grid over (0, 1) x [0, 2 pi).

    ``p`` takes the interior points ``i / (p_steps + 1)``; ``phi`` takes
    ``2 pi j / phi_steps``. Rows are ordered p-major.
    """
    if p_steps < 1 or phi_steps < 1:
        raise DomainError("grid needs at least one step in each direction")
    ps = [(i + 1) / (p_steps + 1) for i in range(p_steps)]
    phis = [2 * np.pi * j / phi_steps for j in range(phi_steps)]
    return [(p, phi, theta_formula(BitFlipParams(p, phi))) for p in ps for phi in phis]


def surface_csv(rows: Iterable[tuple[float, float, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "phi", "theta"])
    for p, phi, theta in rows:
        writer.writerow([repr(float(p)), repr(float(phi)), repr(float(theta))])
    return buf.getvalue()


@dataclass(frozen=True, eq=False)
class GraphSubspaceSpec:
    """Square matrix ``M`` whose graph ``{(x, Mx)}`` is the subspace of interest."""

    m: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.m, "M")
        if m.shape[0] != m.shape[1]:
            raise DomainError(f"M must be square, got {m.shape}")
        object.__setattr__(self, "m", m)

    @property
    def stacked(self) -> np.ndarray:
        return np.vstack([np.eye(self.m.shape[0]), self.m])


def graph_subspace(spec: GraphSubspaceSpec) -> Subspace:
    return subspace_from_columns(spec.stacked)


def graph_projection(spec: GraphSubspaceSpec) -> OrthProjection:
    """``[I; M] (I + M^* M)^{-1} [I  M^*]``."""
    g = spec.stacked
    inner = hpd_inverse(np.eye(spec.m.shape[0]) + spec.m.conj().T @ spec.m)
    return OrthProjection(g @ inner @ g.conj().T, spec.m.shape[0])


@dataclass(frozen=True)
class WongReport:
    lambda_bestfit: float
    residual: float
    holds: bool
    raw_residual: float
    relative_eigenvalues: tuple[float, ...]
    isoclinic_lambda: float
    isoclinic_residual: float
    consistent: bool

    def to_dict(self) -> dict:
        return {
            "lambda_bestfit": self.lambda_bestfit,
            "residual": self.residual,
            "holds": self.holds,
            "raw_residual": self.raw_residual,
            "relative_eigenvalues": list(self.relative_eigenvalues),
            "isoclinic_lambda": self.isoclinic_lambda,
            "isoclinic_residual": self.isoclinic_residual,
            "consistent": self.consistent,
        }


def wong_equation_check(a: GraphSubspaceSpec, b: GraphSubspaceSpec, tol: TolLike = None) -> WongReport:
    """Fit ``(I + A^*B)(I + B^*B)^{-1}(I + B^*A) = lam (I + A^*A)``.

    The fit is done after whitening by ``(I + A^*A)^{-1/2}``; in that frame
    the equation is ``Q_A^* P_B Q_A = lam I``, so the best-fit scalar and the
    residual coincide with those of ``P_A P_B P_A = lam P_A``. The unwhitened
    residual is reported as ``raw_residual``.
    """
    tol = as_tolerance(tol)
    am, bm = a.m, b.m
    if am.shape != bm.shape:
        raise DomainError(f"A and B differ in shape: {am.shape} vs {bm.shape}")
    eye = np.eye(am.shape[0])
    rhs = eye + am.conj().T @ am
    lhs = (eye + am.conj().T @ bm) @ hpd_solve(eye + bm.conj().T @ bm, eye + bm.conj().T @ am)

    lam = float(np.trace(hpd_solve(rhs, lhs)).real / am.shape[0])
    w = hpd_inverse_sqrt(rhs)
    whitened = w @ lhs @ w
    residual = frobenius_norm(whitened - lam * eye)
    raw = frobenius_norm(lhs - lam * rhs)
    rel = np.sort(np.linalg.eigvalsh(0.5 * (whitened + whitened.conj().T)))[::-1]

    rep = isoclinic_check(graph_subspace(a), graph_subspace(b), tol)
    consistent = (
        abs(rep.lam - lam) <= tol.bound(1.0)
        and abs(rep.residuals["v_side"] - residual) <= tol.bound(1.0)
    )
    return WongReport(
        lambda_bestfit=lam,
        residual=residual,
        holds=residual <= tol.bound(frobenius_norm(whitened)),
        raw_residual=raw,
        relative_eigenvalues=tuple(rel.tolist()),
        isoclinic_lambda=rep.lam,
        isoclinic_residual=rep.residuals["v_side"],
        consistent=bool(consistent),
    )


def wong_example_pair() -> tuple[GraphSubspaceSpec, GraphSubspaceSpec]:
    """``A = diag(1, -1)`` and ``B = diag((sqrt3 + 1)/(sqrt3 - 1), 0)``."""
    r3 = np.sqrt(3.0)
    return (
        GraphSubspaceSpec(np.diag([1.0, -1.0])),
        GraphSubspaceSpec(np.diag([(r3 + 1) / (r3 - 1), 0.0])),
    )
