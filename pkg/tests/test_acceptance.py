"""Acceptance criteria; each test prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``.
"""

import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from conftest import compression_cosines_sq
from isoclinic.gallery import BitFlipParams, bitflip_model, code_c1, theta_formula, wong_equation_check, wong_example_pair
from isoclinic.matcore import Tolerance, dump_matrix
from isoclinic.numrange import hermitian_rank_k_range, pair_symmetry_check, projection_witness
from isoclinic.qec import converse_check, extract_isoclinic_family, kl_check, rotate_model, rotation_matrix
from isoclinic.subspaces import (
    OrthProjection,
    canonical_angles,
    isoclinic_check,
    make_isoclinic_pair,
    random_subspace,
    ratio_probe,
)

GOLDEN = Path(__file__).parent / "golden" / "wong_example_pair.json"
GRID = [((i + 1) / 21, 2 * np.pi * j / 20) for i in range(20) for j in range(20)]
LAMBDAS = (0.0, 0.25, 0.5, 0.75, 1.0)


@pytest.fixture
def verdict(capsys):
    def _report(label: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        assert ok, f"{label}: {detail}"

    return _report


def _isoclinic_pairs():
    pairs = []
    for idx in range(100):
        lam = LAMBDAS[idx % 5]
        n = 4 + idx % 9  # 4..12
        m = 1 + idx % (n // 2)
        pairs.append((lam, *make_isoclinic_pair(n, m, lam, seed=idx)))
    return pairs


def test_ac1_bitflip_alpha(verdict):
    worst_res = worst_alpha = 0.0
    for p in (0.1, 0.3, 0.5, 0.9):
        rep = kl_check(code_c1(), bitflip_model(p), Tolerance(1e-12))
        ok = rep.correctable
        worst_res = max(worst_res, rep.residuals.max())
        worst_alpha = max(worst_alpha, np.abs(rep.alpha - np.diag([1 - p, p])).max())
        if not ok:
            break
    verdict(
        "AC1 bit-flip alpha = diag(1-p, p)",
        ok and worst_res <= 1e-12 and worst_alpha <= 1e-12,
        f"max residual {worst_res:.2e}, max |alpha - diag(1-p,p)| {worst_alpha:.2e}",
    )


def test_ac2_rotation_covariance(verdict):
    worst_cov = worst_closed = 0.0
    code = code_c1()
    for p, phi in GRID:
        base = kl_check(code, bitflip_model(p)).alpha
        rot = kl_check(code, rotate_model(bitflip_model(p), phi)).alpha
        u = rotation_matrix(phi)
        worst_cov = max(worst_cov, np.linalg.norm(rot - u.conj().T @ base @ u))
        c, s = np.cos(phi), np.sin(phi)
        closed = np.array([[c * c * (1 - p) + s * s * p, c * s * (2 * p - 1)], [c * s * (2 * p - 1), s * s * (1 - p) + c * c * p]])
        worst_closed = max(worst_closed, np.abs(rot - closed).max())
    verdict(
        "AC2 rotation covariance on 20x20 grid",
        worst_cov <= 1e-10 and worst_closed <= 1e-12,
        f"max ||alpha' - U*alpha U||_F {worst_cov:.2e}, max closed-form error {worst_closed:.2e}",
    )


def test_ac3_theta_pipeline(verdict):
    worst_theta = worst_iso = 0.0
    all_iso = True
    code = code_c1()
    for p, phi in GRID:
        res = extract_isoclinic_family(code, rotate_model(bitflip_model(p), phi))
        lam12 = res.pairwise_lambda[0, 1]
        worst_theta = max(worst_theta, abs(np.cos(theta_formula(BitFlipParams(p, phi))) - lam12))
        rep = isoclinic_check(*res.subspaces)
        all_iso &= rep.isoclinic
        worst_iso = max(worst_iso, abs(rep.lam - lam12))
    verdict(
        "AC3 cos(theta_formula) = |lambda_12|^2 from extraction",
        worst_theta <= 1e-9 and all_iso and worst_iso <= 1e-9,
        f"max |cos theta - |l12|^2| {worst_theta:.2e}, extracted pairs isoclinic: {all_iso}, "
        f"max |lambda - |l12|^2| {worst_iso:.2e}",
    )


def test_ac4_canonical_angles_vs_compression(verdict):
    rng = np.random.default_rng(4)
    worst = 0.0
    for trial in range(100):
        n = int(rng.integers(1, 13))
        m, k = int(rng.integers(1, n + 1)), int(rng.integers(1, n + 1))
        v, w = random_subspace(n, m, 1000 + trial), random_subspace(n, k, 2000 + trial)
        cos2 = np.square(canonical_angles(v, w).cosines)
        oracle = compression_cosines_sq(v, w)  # m eigenvalues; the last m - l are zero
        padded = np.concatenate([cos2, np.zeros(m - cos2.size)])
        worst = max(worst, np.abs(padded - oracle).max())
    verdict("AC4 squared cosines = compression eigenvalues (100 pairs, n<=12)", worst <= 1e-10, f"max deviation {worst:.2e}")


def test_ac5_equivalence_suite(verdict):
    tol = Tolerance(1e-8)
    iso_ok = True
    worst_probe = 0.0
    for idx, (lam, v, w) in enumerate(_isoclinic_pairs()):
        rep = isoclinic_check(v, w, tol)
        lo, hi = ratio_probe(v, w, 100, idx)
        iso_ok &= all(rep.conditions.values())
        worst_probe = max(worst_probe, hi - lo)

    together = True
    found = trial = 0
    while found < 100:
        trial += 1
        n = 4 + trial % 9
        m = 2 + trial % (n - 2) if n > 3 else 2
        v, w = random_subspace(n, m, 5000 + trial), random_subspace(n, m, 9000 + trial)
        cos = np.sqrt(np.clip(compression_cosines_sq(v, w), 0, 1))
        if cos[0] - cos[-1] < 0.1:
            continue
        found += 1
        rep = isoclinic_check(v, w, tol)
        lo, hi = ratio_probe(v, w, 100, trial)
        together &= not any(rep.conditions.values()) and hi - lo > tol.abs_eps
    verdict(
        "AC5 isoclinic equivalence suite",
        iso_ok and worst_probe <= 1e-8 and together,
        f"isoclinic pairs pass (i)(ii)(iii): {iso_ok}, max ratio spread {worst_probe:.2e}; "
        f"non-isoclinic pairs fail all four: {together}",
    )


def test_ac6_converse_closure(verdict):
    worst_res = worst_alpha = 0.0
    ok = True
    for lam, v, w in _isoclinic_pairs():
        r1, r2 = converse_check(v.projection(), w.projection())
        ok &= r1.correctable and r2.correctable
        worst_res = max(worst_res, r1.residuals.max(), r2.residuals.max())
        worst_alpha = max(
            worst_alpha,
            np.abs(r1.alpha - 0.5 * np.array([[1, lam], [lam, lam]])).max(),
            np.abs(r2.alpha - 0.5 * np.array([[lam, lam], [lam, 1]])).max(),
        )
    verdict(
        "AC6 converse closure, alpha = (1/2)[[1, l], [l, l]]",
        ok and worst_res <= 1e-10 and worst_alpha <= 1e-10,
        f"all correctable: {ok}, max KL residual {worst_res:.2e}, max alpha error {worst_alpha:.2e}",
    )


def test_ac7_numerical_range(verdict):
    pm = np.diag([1.0, 1.0, 0.0, 0.0])
    intervals = [hermitian_rank_k_range(pm, k) for k in (1, 2)]
    iv_ok = all(not iv.empty and (iv.lower, iv.upper) == (0.0, 1.0) for iv in intervals)
    p = OrthProjection(pm, 2)
    worst_witness = 0.0
    for lam in (0.0, 0.5, 1.0):
        r = projection_witness(p, 2, lam).matrix
        worst_witness = max(worst_witness, np.linalg.norm(r @ pm @ r - lam * r))

    rng = np.random.default_rng(7)
    agree = True
    held = 0
    for trial in range(200):
        n = int(rng.integers(2, 10))
        m = int(rng.integers(1, n // 2 + 1))
        if trial % 4 == 0:
            v, w = make_isoclinic_pair(n, m, float(rng.uniform()), seed=trial)
        else:
            v, w = random_subspace(n, m, 300 + trial), random_subspace(n, m, 700 + trial)
        rep = pair_symmetry_check(v.projection(), w.projection())
        agree &= rep.agree
        held += rep.holds
    verdict(
        "AC7 rank-k numerical ranges",
        iv_ok and worst_witness <= 1e-12 and agree,
        f"Lambda_k(diag(1,1,0,0)) = [0,1] for k=1,2: {iv_ok}, max witness residual {worst_witness:.2e}, "
        f"symmetry verdicts agree on 200 pairs: {agree} ({held} isoclinic)",
    )


def test_ac8_wong_adjudication(verdict):
    a, b = wong_example_pair()
    rep = wong_equation_check(a, b)
    eye = np.eye(2)

    def proj(m):
        g = np.vstack([eye, m])
        return g @ np.linalg.inv(eye + m.conj().T @ m) @ g.conj().T

    pa, pb = proj(a.m), proj(b.m)
    t = pa @ pb @ pa
    lam = np.trace(t).real / 2
    res = np.linalg.norm(t - lam * pa)
    gold = json.loads(GOLDEN.read_text())
    d_lam, d_res = abs(rep.lambda_bestfit - lam), abs(rep.residual - res)
    ok = (
        d_lam <= 1e-12
        and d_res <= 1e-12
        and rep.holds == gold["holds"]
        and abs(rep.lambda_bestfit - gold["lambda_bestfit"]) <= 1e-12
        and abs(rep.residual - gold["residual"]) <= 1e-12
    )
    verdict(
        "AC8 Wong example pair adjudicated",
        ok,
        f"holds={rep.holds}, best-fit lambda {rep.lambda_bestfit:.12f}, residual {rep.residual:.12f}; "
        f"vs direct P_A P_B P_A: dlambda {d_lam:.1e}, dresidual {d_res:.1e}",
    )


def _cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "isoclinic", *map(str, args)], capture_output=True, cwd=cwd)


def test_ac9_cli_determinism_and_exit_codes(verdict, tmp_path):
    first, second = _cli("gallery", "surface", "--steps", "50"), _cli("gallery", "surface", "--steps", "50")
    same = first.returncode == second.returncode == 0 and first.stdout == second.stdout
    rows = len(first.stdout.decode().splitlines()) - 1

    model = tmp_path / "model.json"
    model.write_text(json.dumps(bitflip_model(0.3).to_dict()))
    good, bad = tmp_path / "c1.json", tmp_path / "bad.json"
    dump_matrix(code_c1().basis, good)
    dump_matrix(np.eye(4)[:, [0, 2]], bad)
    pass_code = _cli("klcheck", good, model).returncode
    fail_code = _cli("klcheck", bad, model).returncode
    usage_code = _cli("klcheck", tmp_path / "absent.json", model).returncode
    verdict(
        "AC9 CLI determinism and exit codes",
        same and rows == 2500 and (pass_code, fail_code, usage_code) == (0, 1, 2),
        f"surface byte-identical: {same} ({rows} rows); klcheck exit codes pass/fail/usage = "
        f"{pass_code}/{fail_code}/{usage_code}",
    )
