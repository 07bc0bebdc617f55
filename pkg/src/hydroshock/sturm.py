"""Discretized quadratic-form certificates and pointwise sign scans.

The self-adjoint operator L w = w'' + q_pot(x) w governs the real-eigenvalue
part of the stability argument.  Negative definiteness of its quadratic form
(whole line, and half line with the Robin condition w'(0) = c1 w(0)) is
certified here by symmetric second-order finite differences plus bisection
with Sturm-sequence inertia counts, which give the extreme eigenvalue to
absolute accuracy without forming dense factorizations.

The pointwise scans collect the minima of the quantities whose positivity
drives the analytical argument (the weights alpha and beta, the cubic lower
bound, the potential margins, and the Robin coefficients).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .linearization import (boundary_coeffs, coeff_alpha, coeff_beta, coeff_f2,
                            coeff_q_pot, sign_cubic)
from .profile import (H_L, ProfileClass, ShockProfile, profile_rhs,
                      profile_rhs_d2H, reference_points)


@dataclass
class DiscreteOperator:
    """Symmetric tridiagonal representation of the truncated operator.

    `diag` and `offdiag` define the matrix after the similarity transform
    absorbing the half-weight Robin row, so standard symmetric eigenvalue
    tools apply directly.
    """

    grid: np.ndarray
    diag: np.ndarray
    offdiag: np.ndarray
    boundary: str            # "dirichlet" | "robin"
    robin_c1: Optional[float] = None

    @property
    def h(self) -> float:
        return float(self.grid[1] - self.grid[0])

    @property
    def size(self) -> int:
        return len(self.diag)


def _q_pot_on_grid(profile: ShockProfile, x: np.ndarray) -> np.ndarray:
    p, refs = profile.params, profile.refs
    H = np.clip(profile.height_spline()(x), profile.H.min(), H_L)
    return coeff_q_pot(H, p, refs)


def discretize_L(profile: ShockProfile, n: int = 2000, half: bool = False,
                 bc: str = "dirichlet") -> DiscreteOperator:
    """Assemble L = d^2/dx^2 + q_pot on the truncated profile domain.

    half=False: domain [-W, W], homogeneous Dirichlet at both ends.
    half=True:  domain [-W, 0], Dirichlet at -W; bc selects "dirichlet" or
    "robin" (ghost-point closure of w'(0) = c1 w(0), second order, kept
    symmetric through a half-cell weight and similarity transform).
    """
    if n < 200:
        raise DomainError("need n >= 200 grid intervals")
    if not profile.certifiable:
        raise DomainError("degenerate profiles are not certifiable")
    W = profile.half_width
    if half:
        if profile.profile_class is not ProfileClass.DISCONTINUOUS:
            raise DomainError("half-line operator requires a discontinuous profile")
        grid = np.linspace(-W, 0.0, n + 1)
    else:
        grid = np.linspace(-W, W, n + 1)
    h = grid[1] - grid[0]
    q = _q_pot_on_grid(profile, grid)

    if not half or bc == "dirichlet":
        nodes = grid[1:-1]
        diag = -2.0 / h ** 2 + q[1:-1]
        off = np.full(len(nodes) - 1, 1.0 / h ** 2)
        return DiscreteOperator(grid=grid, diag=diag, offdiag=off,
                                boundary="dirichlet")

    if bc != "robin":
        raise DomainError(f"unknown boundary condition {bc!r}")
    c1 = boundary_coeffs(profile.params, profile.refs).c1
    nodes = grid[1:]
    diag = np.empty(len(nodes))
    diag[:-1] = -2.0 / h ** 2 + q[1:-1]
    diag[-1] = (-2.0 + 2.0 * h * c1) / h ** 2 + q[-1]
    off = np.full(len(nodes) - 1, 1.0 / h ** 2)
    off[-1] = np.sqrt(2.0) / h ** 2
    return DiscreteOperator(grid=grid, diag=diag, offdiag=off,
                            boundary="robin", robin_c1=float(c1))


def _count_below(diag: np.ndarray, off2: np.ndarray, sigma: float) -> int:
    """Number of eigenvalues strictly below sigma (Sturm sequence / LDL^T)."""
    count = 0
    d = diag[0] - sigma
    if d < 0.0:
        count += 1
    tiny = 1e-300
    for i in range(1, len(diag)):
        denom = d if abs(d) > tiny else (-tiny if d <= 0 else tiny)
        d = diag[i] - sigma - off2[i - 1] / denom
        if d < 0.0:
            count += 1
    return count


def max_eigenvalue(op: DiscreteOperator, tol: float = 1e-10) -> float:
    """Largest eigenvalue by bisection on the inertia count."""
    diag, off = op.diag, op.offdiag
    off2 = off * off
    radius = np.zeros(len(diag))
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    lo = float((diag - radius).min())
    hi = float((diag + radius).max())
    n = len(diag)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _count_below(diag, off2, mid) == n:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def discretize_advection(profile: ShockProfile, n: int = 2000):
    """Symmetrized discretization of the untransformed operator
    M u = u'' + f2(x) u' on [-W, W] with Dirichlet ends.

    The nonsymmetric tridiagonal matrix has positive off-diagonal products
    for the step sizes used here, so a diagonal similarity makes it exactly
    symmetric without changing eigenvalues.  Returns (diag, offdiag).
    """
    W = profile.half_width
    grid = np.linspace(-W, W, n + 1)
    h = grid[1] - grid[0]
    p, refs = profile.params, profile.refs
    H = np.clip(profile.height_spline()(grid[1:-1]), profile.H.min(), H_L)
    f2 = coeff_f2(H, p, refs)
    if np.any(np.abs(f2) * h >= 2.0):
        raise DomainError("step too large to symmetrize the advection matrix")
    diag = np.full(n - 1, -2.0 / h ** 2)
    sub = 1.0 / h ** 2 - f2[1:] / (2.0 * h)      # coupling of row i to i-1
    sup = 1.0 / h ** 2 + f2[:-1] / (2.0 * h)     # coupling of row i to i+1
    off = np.sqrt(sup * sub)
    return diag, off


@dataclass(frozen=True)
class SignReport:
    name: str
    min_value: float
    argmin_H: float
    passed: bool


def sign_scan(profile: ShockProfile, n_samples: int = 2001) -> list:
    """Minima over the traversed height range of the positivity conditions.

    Always: the weights alpha and beta and the cubic lower bound.
    Smooth: the whole-line potential margin f2^2/2 + f2_x.
    Discontinuous: the half-line potential margin f2^2/4 + f2_x/2, the Robin
    negativity -c1, and the Robin margin f2(H_*)/2 - c1.
    """
    p, refs = profile.params, profile.refs
    lo, hi = profile.traversed_interval()
    H = np.linspace(lo, hi, n_samples)
    G = profile_rhs(H, p, refs)
    f2 = coeff_f2(H, p, refs)
    f2x = -profile_rhs_d2H(H, p, refs) * G
    out = []

    def report(name, values, hgrid=H):
        i = int(np.argmin(values))
        out.append(SignReport(name=name, min_value=float(values[i]),
                              argmin_H=float(np.asarray(hgrid)[i]),
                              passed=bool(values[i] > 0.0)))

    report("alpha_weight", coeff_alpha(H, p, refs))
    report("beta_weight", coeff_beta(H, p, refs))
    report("cubic_positivity", sign_cubic(H, p))
    if profile.profile_class is ProfileClass.SMOOTH:
        report("whole_line_potential_margin", 0.5 * f2 * f2 + f2x)
    else:
        report("half_line_potential_margin", 0.25 * f2 * f2 + 0.5 * f2x)
        bd = boundary_coeffs(p, refs)
        hstar = np.array([refs.Hstar])
        report("robin_negativity", np.array([-bd.c1]), hstar)
        f2_star = float(coeff_f2(refs.Hstar, p, refs))
        report("robin_margin", np.array([0.5 * f2_star - bd.c1]), hstar)
    return out


def zero_eigenvalue_absence(profile: ShockProfile) -> bool:
    """No zero eigenvalue of the untransformed half-line operator.

    The unique decaying zero-mode candidate is H - H_L (up to scale); its
    logarithmic derivative at the boundary is G(H_*)/(H_* - 1) > 0, while
    the boundary condition would require the strictly negative slope
    c1 - f2(0-)/2, so no zero eigenfunction exists.
    """
    if profile.profile_class is not ProfileClass.DISCONTINUOUS:
        raise DomainError("zero_eigenvalue_absence requires a discontinuous profile")
    p, refs = profile.params, profile.refs
    hstar = refs.Hstar
    quotient = profile_rhs(hstar, p, refs) / (hstar - H_L)
    bd = boundary_coeffs(p, refs)
    slope = bd.c1 - 0.5 * float(coeff_f2(hstar, p, refs))
    return bool(quotient > 0.0 and slope < 0.0)


def form_report(profile: ShockProfile, n: int = 2000) -> dict:
    """Certificate summary for the appropriate quadratic form."""
    half = profile.profile_class is ProfileClass.DISCONTINUOUS
    op = discretize_L(profile, n=n, half=half, bc="robin" if half else "dirichlet")
    scans = sign_scan(profile)
    return {
        "schema": "hydroshock/1",
        "params": {"F": profile.params.F, "H_R": profile.params.H_R},
        "W": profile.half_width,
        "h": op.h,
        "bc": op.boundary,
        "max_eig": max_eigenvalue(op),
        "sign_scans": [
            {"name": s.name, "min": s.min_value, "argmin": s.argmin_H,
             "pass": s.passed}
            for s in scans
        ],
    }


def write_form_report(profile: ShockProfile, path, n: int = 2000) -> None:
    with open(path, "w") as fh:
        json.dump(form_report(profile, n=n), fh, indent=2, sort_keys=True)
        fh.write("\n")
