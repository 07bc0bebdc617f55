"""Linearization about a hydraulic shock profile and its scalar reduction.

Linearizing the flow equations about the wave in the co-moving frame gives a
first-order system A v' = (E - lam*I - A_x) v in the perturbation v = (h, q).
Eliminating v_1 reduces it, for lam != 0, to a scalar second-order equation

    u'' + (f1*lam + f2) u' + (f3*lam^2 + f4*lam) u = 0,

and the substitution w = exp(0.5*int(f1*lam + f2)) u produces the self-adjoint
form  w'' + (-beta*lam^2 - alpha*lam + q_pot) w = 0  with strictly positive
weights alpha, beta on the traversed height range.

The coefficient functions below are closed-form rationals in H.  They follow
from the elimination with the pivot transform T2 = [[1,0],[c,1]]; the key
simplification is H_s^3 = F^2 q0^2, which makes

    det A = -(H^3 - H_s^3) / (F^2 H^2)

and yields

    f1 = 2 F^2 q0 H / (H^3 - H_s^3)
    f2 = -G'(H)                      (G = profile ODE right side)
    f3 = -F^2 H^2 / (H^3 - H_s^3)
    f4 = -2 F^2 (Q + q0 G(H)) / (H^3 - H_s^3).

The symbolic worksheet in docs/derive_reduction.py rederives these from the
raw matrix elimination; the test suite additionally checks them against a
fully numeric elimination path at random parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BranchAmbiguityError, DerivationError, DomainError, SingularityError
from .profile import (H_L, ModelParams, ProfileClass, ReferencePoints, classify,
                      profile_rhs, profile_rhs_dH, profile_rhs_d2H, reference_points)


@dataclass(frozen=True)
class LinearizedMatrices:
    """Jacobian-type matrices of the linearized system at one profile point."""

    A: np.ndarray
    E: np.ndarray
    detA: float


@dataclass(frozen=True)
class CoefficientSet:
    """Reduction coefficients and derived quantities at one height."""

    f1: float
    f2: float
    f3: float
    f4: float
    f1x: float
    f2x: float
    alpha: float
    beta: float
    q_pot: float


@dataclass(frozen=True)
class BoundaryData:
    """Robin data w'(0) = (c1 + c2*lam) w(0) for the half-line problem,
    plus the state and flux jumps across the subshock."""

    c1: float
    c2: float
    Wbar_jump: np.ndarray      # ([H], [Q])
    flux_jump: np.ndarray      # jump of (Q, Q^2/H + H^2/(2F^2))
    relax_jump: np.ndarray     # jump of (0, H - Q^2/H^2)


def matrices(H: float, params: ModelParams,
             refs: Optional[ReferencePoints] = None) -> LinearizedMatrices:
    """A and E evaluated at height H on the profile (Q = cH - q0)."""
    refs = refs or reference_points(params)
    F, c, q0 = params.F, refs.c, refs.q0
    Q = c * H - q0
    u = Q / H
    A = np.array([[-c, 1.0],
                  [H / (F * F) - u * u, 2.0 * u - c]])
    E = np.array([[0.0, 0.0],
                  [2.0 * u * u / H + 1.0, -2.0 * u / H]])
    detA = (c - u) ** 2 - H / (F * F)
    return LinearizedMatrices(A=A, E=E, detA=detA)


def matrices_x_derivative(H: float, params: ModelParams,
                          refs: Optional[ReferencePoints] = None) -> np.ndarray:
    """dA/dx along the profile (chain rule through H' = G(H))."""
    refs = refs or reference_points(params)
    F, c, q0 = params.F, refs.c, refs.q0
    Q = c * H - q0
    u = Q / H
    G = profile_rhs(H, params, refs)
    return np.array([[0.0, 0.0],
                     [G * (1.0 / (F * F) - 2.0 * u * (c - u) / H),
                      G * 2.0 * (c - u) / H]])


# -- coefficient functions (vectorized in H) -------------------------------

def _check_sonic(H, refs):
    if np.any(np.abs(np.asarray(H) - refs.Hs) < 1e-10):
        raise SingularityError("reduction coefficients are singular at H_s")


def coeff_f1(H, params, refs=None):
    refs = refs or reference_points(params)
    _check_sonic(H, refs)
    H = np.asarray(H, dtype=float)
    return 2.0 * params.F ** 2 * refs.q0 * H / (H ** 3 - refs.Hs ** 3)


def coeff_f2(H, params, refs=None):
    refs = refs or reference_points(params)
    _check_sonic(H, refs)
    return -profile_rhs_dH(H, params, refs)


def coeff_f3(H, params, refs=None):
    refs = refs or reference_points(params)
    _check_sonic(H, refs)
    H = np.asarray(H, dtype=float)
    return -params.F ** 2 * H * H / (H ** 3 - refs.Hs ** 3)


def coeff_f4(H, params, refs=None):
    refs = refs or reference_points(params)
    _check_sonic(H, refs)
    H = np.asarray(H, dtype=float)
    Q = refs.c * H - refs.q0
    G = profile_rhs(H, params, refs)
    return -2.0 * params.F ** 2 * (Q + refs.q0 * G) / (H ** 3 - refs.Hs ** 3)


def coeff_f1_dH(H, params, refs=None):
    refs = refs or reference_points(params)
    H = np.asarray(H, dtype=float)
    d = H ** 3 - refs.Hs ** 3
    return 2.0 * params.F ** 2 * refs.q0 * (d - 3.0 * H ** 3) / (d * d)


def coeff_alpha(H, params, refs=None):
    """alpha = -f4 + f1 f2 / 2 + f1_x / 2 > 0 on the traversed range."""
    refs = refs or reference_points(params)
    G = profile_rhs(H, params, refs)
    f1x = coeff_f1_dH(H, params, refs) * G
    return (-coeff_f4(H, params, refs)
            + 0.5 * coeff_f1(H, params, refs) * coeff_f2(H, params, refs)
            + 0.5 * f1x)


def coeff_beta(H, params, refs=None):
    """beta = -f3 + f1^2/4 = F^2 H^5 / (H^3 - H_s^3)^2 > 0."""
    refs = refs or reference_points(params)
    _check_sonic(H, refs)
    H = np.asarray(H, dtype=float)
    d = H ** 3 - refs.Hs ** 3
    return params.F ** 2 * H ** 5 / (d * d)


def coeff_q_pot(H, params, refs=None):
    """Potential of the self-adjoint operator at lam = 0:
    q_pot = -f2^2/4 - f2_x/2 with f2_x = (df2/dH) G."""
    refs = refs or reference_points(params)
    f2 = coeff_f2(H, params, refs)
    f2x = -profile_rhs_d2H(H, params, refs) * profile_rhs(H, params, refs)
    return -0.25 * f2 * f2 - 0.5 * f2x


def sign_cubic(H, params: ModelParams):
    """Cubic 2(sqrt(H_R)+1)^2 H^3 - F^2 H_R (H_R + sqrt(H_R) + 1) H + F^2 H_R^2
    whose positivity on the traversed range drives the imaginary-part argument."""
    H = np.asarray(H, dtype=float)
    F, H_R = params.F, params.H_R
    sq = np.sqrt(H_R)
    return (2.0 * (sq + 1.0) ** 2 * H ** 3
            - F * F * H_R * (H_R + sq + 1.0) * H + F * F * H_R * H_R)


def reduce_coefficients(H: float, params: ModelParams,
                        refs: Optional[ReferencePoints] = None) -> CoefficientSet:
    """All reduction coefficients and derived weights at one height."""
    refs = refs or reference_points(params)
    _check_sonic(H, refs)
    G = profile_rhs(H, params, refs)
    f1 = float(coeff_f1(H, params, refs))
    f2 = float(coeff_f2(H, params, refs))
    f3 = float(coeff_f3(H, params, refs))
    f4 = float(coeff_f4(H, params, refs))
    f1x = float(coeff_f1_dH(H, params, refs) * G)
    f2x = float(-profile_rhs_d2H(H, params, refs) * G)
    return CoefficientSet(
        f1=f1, f2=f2, f3=f3, f4=f4, f1x=f1x, f2x=f2x,
        alpha=float(-f4 + 0.5 * f1 * f2 + 0.5 * f1x),
        beta=float(-f3 + 0.25 * f1 * f1),
        q_pot=float(-0.25 * f2 * f2 - 0.5 * f2x),
    )


def w_potential(lam: complex, H: float, params: ModelParams,
                refs: Optional[ReferencePoints] = None) -> complex:
    """Coefficient of w in the transformed scalar equation:
    -beta*lam^2 - alpha*lam + q_pot."""
    cs = reduce_coefficients(H, params, refs)
    return -cs.beta * lam * lam - cs.alpha * lam + cs.q_pot


# -- asymptotic decay rates -------------------------------------------------

def _rate_coeffs(params: ModelParams, side: str):
    """(polynomial-in-lam coefficients of the discriminant, prefactor) for
    the displayed closed forms of the transformed-variable decay rates."""
    F = params.F
    nu = params.nu
    if side == "left":
        a = 4.0 * nu ** 2 * (nu + 1.0) ** 2
        b = 4.0 * nu * (nu + 1.0) * (-F * F + 2.0 * nu ** 2 + 2.0 * nu)
        c0 = F * F * (nu ** 2 + nu - 2.0) ** 2
        pref = F * nu * (nu + 1.0) / (2.0 * (-F * F + nu ** 4 + 2.0 * nu ** 3 + nu ** 2))
        sign = 1.0
    elif side == "right":
        a = 4.0 * (nu + 1.0) ** 2
        b = 4.0 * nu * (nu + 1.0) * (-F * F * nu ** 2 + 2.0 * nu + 2.0)
        c0 = F * F * nu ** 2 * (-2.0 * nu ** 2 + nu + 1.0) ** 2
        pref = -F * nu * (nu + 1.0) / (2.0 * (-F * F * nu ** 4 + nu ** 2 + 2.0 * nu + 1.0))
        sign = 1.0
    else:
        raise DomainError(f"side must be 'left' or 'right', got {side!r}")
    return a, b, c0, pref * sign


def rate_discriminant(lam, params: ModelParams, side: str):
    """Quadratic under the square root of the decay-rate closed form."""
    a, b, c0, _ = _rate_coeffs(params, side)
    lam = np.asarray(lam, dtype=complex)
    return a * lam * lam + b * lam + c0


def asymptotic_rates(lam: complex, params: ModelParams, side: str,
                     sqrt_sign: float = 1.0) -> complex:
    """Spatial rate of the transformed variable at the chosen infinity.

    Principal square-root branch (nonnegative real part); pass sqrt_sign=-1
    to select the continuation across a cut.  At lam = 0 the left rate equals
    |f2(H_L)|/2 and the right rate equals -f2(H_R)/2.
    """
    a, b, c0, pref = _rate_coeffs(params, side)
    lam = complex(lam)
    disc = a * lam * lam + b * lam + c0
    scale = max(abs(a * lam * lam), abs(b * lam), abs(c0), 1e-300)
    if abs(disc) < 1e-13 * scale:
        raise BranchAmbiguityError(
            f"decay-rate discriminant vanishes at lam={lam}; "
            "continue the value along the evaluation path instead")
    return pref * sqrt_sign * np.sqrt(disc)


# -- rates of the first-order system (limit matrices) -----------------------

def limit_system_rates(lam, H0: float, params: ModelParams,
                       refs: Optional[ReferencePoints] = None,
                       sqrt_sign=1.0):
    """Both spatial rates of the first-order system at the constant state H0.

    They solve  detA*g^2 + (cE22 + E21 + 2*lam*(u - c))*g + lam*(lam - E22) = 0.
    Returned as (g_first, g_second) where g_first = (-b - s)/(2 detA) is, at
    large real lam with the principal branch, the root with positive real
    part (the mode decaying toward -infinity); g_second is the other root.
    Vectorized over lam; sqrt_sign may be an array for branch continuation.
    """
    refs = refs or reference_points(params)
    F, c, q0 = params.F, refs.c, refs.q0
    lam = np.asarray(lam, dtype=complex)
    Q = c * H0 - q0
    u = Q / H0
    detA = (c - u) ** 2 - H0 / (F * F)
    E21 = 2.0 * Q * Q / H0 ** 3 + 1.0
    E22 = -2.0 * Q / H0 ** 2
    b = (c * E22 + E21) + 2.0 * lam * (u - c)
    s = np.asarray(sqrt_sign) * np.sqrt(b * b - 4.0 * detA * lam * (lam - E22) + 0j)
    return (-b - s) / (2.0 * detA), (-b + s) / (2.0 * detA)


def limit_rate_discriminant(lam, H0: float, params: ModelParams,
                            refs: Optional[ReferencePoints] = None):
    """Discriminant of the limit-rate quadratic (for branch tracking)."""
    refs = refs or reference_points(params)
    c, q0 = refs.c, refs.q0
    lam = np.asarray(lam, dtype=complex)
    Q = c * H0 - q0
    u = Q / H0
    detA = (c - u) ** 2 - H0 / (params.F ** 2)
    E21 = 2.0 * Q * Q / H0 ** 3 + 1.0
    E22 = -2.0 * Q / H0 ** 2
    b = (c * E22 + E21) + 2.0 * lam * (u - c)
    return b * b - 4.0 * detA * lam * (lam - E22)


@dataclass(frozen=True)
class LimitSignReport:
    """Real-part sign pattern of the limit rates at both infinities."""

    left: tuple
    right: tuple
    expected_right_both_positive: bool
    consistent: bool


def limit_mode_signs(lam: complex, params: ModelParams) -> LimitSignReport:
    """Check the sign pattern of the limit rates for Re(lam) > 0.

    Left state: one positive, one negative real part (consistent splitting).
    Right state: both positive for discontinuous parameters (so decaying
    solutions vanish identically on x > 0); (+,-) for smooth parameters.
    """
    if complex(lam).real <= 0:
        raise DomainError("limit_mode_signs requires Re(lam) > 0")
    refs = reference_points(params)
    gl = limit_system_rates(np.array([lam]), H_L, params, refs)
    gr = limit_system_rates(np.array([lam]), params.H_R, params, refs)
    left = (float(np.sign(gl[0][0].real)), float(np.sign(gl[1][0].real)))
    right = (float(np.sign(gr[0][0].real)), float(np.sign(gr[1][0].real)))
    disc = classify(params.F, params.H_R) is ProfileClass.DISCONTINUOUS
    if disc:
        nu_bound = params.nu > (1.0 + np.sqrt(1.0 + 4.0 * params.F)) / (2.0 * params.F)
        ok = left == (1.0, -1.0) and right == (1.0, 1.0) and nu_bound
    else:
        ok = left == (1.0, -1.0) and sorted(right) == [-1.0, 1.0]
    return LimitSignReport(left=left, right=right,
                           expected_right_both_positive=disc, consistent=bool(ok))


# -- half-line boundary coefficients ----------------------------------------

def relaxation_source(H: float, params: ModelParams,
                      refs: Optional[ReferencePoints] = None) -> np.ndarray:
    """Relaxation term (0, H - Q^2/H^2) evaluated on the profile."""
    refs = refs or reference_points(params)
    Q = refs.c * H - refs.q0
    return np.array([0.0, H - Q * Q / (H * H)])


def conservative_flux(H: float, params: ModelParams,
                      refs: Optional[ReferencePoints] = None) -> np.ndarray:
    """Flux (Q, Q^2/H + H^2/(2F^2)) of the conservative part."""
    refs = refs or reference_points(params)
    Q = refs.c * H - refs.q0
    return np.array([Q, Q * Q / H + H * H / (2.0 * params.F ** 2)])


def _boundary_row(lam: complex, params: ModelParams, refs: ReferencePoints):
    """Row pairing the jump data with the transformed boundary trace.

    Assembles (lam*[W] - [source])_perp . A(0-) T2 S1(lam) S2(lam) where S1,
    S2 map (w', w) back to the first-order unknowns.  Returns the 1x2 complex
    row acting on (w'(0), w(0)).
    """
    Hst = refs.Hstar
    c, q0 = refs.c, refs.q0
    jump_W = np.array([params.H_R - Hst, (c * params.H_R - q0) - (c * Hst - q0)])
    jump_S = (relaxation_source(params.H_R, params, refs)
              - relaxation_source(Hst, params, refs))
    p = lam * jump_W - jump_S
    p_perp = np.array([p[1], -p[0]])
    A = matrices(Hst, params, refs).A
    T2 = np.array([[1.0, 0.0], [c, 1.0]])
    f1 = float(coeff_f1(Hst, params, refs))
    f2 = float(coeff_f2(Hst, params, refs))
    S1 = np.array([[-1.0 / lam, 0.0], [0.0, 1.0]], dtype=complex)
    S2 = np.array([[1.0, -0.5 * (f1 * lam + f2)], [0.0, 1.0]], dtype=complex)
    return p_perp @ A @ T2 @ S1 @ S2


def boundary_coeffs(params: ModelParams,
                    refs: Optional[ReferencePoints] = None,
                    cross_check_tol: float = 1e-10) -> BoundaryData:
    """Robin coefficients (c1, c2) for the half-line reduction.

    Closed forms (after simplifying with the quadratic identity satisfied
    by H_*):

        c1 = f2(H_*)/2 - F^2 (H_*(H_R + sqrt(H_R) + 1)^2 - H_R(2F^2+1))
                         / ((sqrt(H_R)+1)^2 (H_*^3 - H_s^3))
        c2 = -F^2 H_R H_* / ((sqrt(H_R)+1)(H_*^3 - H_s^3))

    Both are recomputed independently by assembling the boundary row at two
    values of lam and solving the resulting affine relation; disagreement
    beyond cross_check_tol raises DerivationError.
    """
    refs = refs or reference_points(params)
    if refs.Hstar is None:
        raise DomainError("boundary_coeffs requires a discontinuous profile")
    F, H_R = params.F, params.H_R
    Hst, Hs = refs.Hstar, refs.Hs
    sq = np.sqrt(H_R)
    denom = Hst ** 3 - Hs ** 3
    c1 = (0.5 * float(coeff_f2(Hst, params, refs))
          - F * F * (Hst * (H_R + sq + 1.0) ** 2 - H_R * (2.0 * F * F + 1.0))
          / ((sq + 1.0) ** 2 * denom))
    c2 = -F * F * H_R * Hst / ((sq + 1.0) * denom)

    # independent path: the affine coefficient of the boundary row
    def kappa(lam):
        row = _boundary_row(lam, params, refs)
        return -row[1] / row[0]
    k1, k2 = kappa(1.0), kappa(2.0)
    c2_num = (k2 - k1).real
    c1_num = (k1 - c2_num).real
    if max(abs(k1.imag), abs(k2.imag)) > cross_check_tol \
            or abs(c1 - c1_num) > cross_check_tol * max(1.0, abs(c1)) \
            or abs(c2 - c2_num) > cross_check_tol * max(1.0, abs(c2)):
        raise DerivationError(
            f"boundary coefficient paths disagree: closed form ({c1}, {c2}) "
            f"vs row assembly ({c1_num}, {c2_num})")

    return BoundaryData(
        c1=float(c1), c2=float(c2),
        Wbar_jump=np.array([H_R - Hst, refs.c * (H_R - Hst)]),
        flux_jump=(conservative_flux(H_R, params, refs)
                   - conservative_flux(Hst, params, refs)),
        relax_jump=(relaxation_source(H_R, params, refs)
                    - relaxation_source(Hst, params, refs)),
    )


# -- coefficient table export ------------------------------------------------

def write_coefficient_table(params: ModelParams, path, n: int = 200) -> None:
    """CSV dump "H,f1,f2,f3,f4,alpha,beta,q_pot" over the traversed range."""
    refs = reference_points(params)
    klass = classify(params.F, params.H_R)
    lo = refs.Hstar if klass is ProfileClass.DISCONTINUOUS else params.H_R
    Hs = np.linspace(lo + 1e-9, H_L - 1e-9, n)
    rows = ["H,f1,f2,f3,f4,alpha,beta,q_pot"]
    for h in Hs:
        cs = reduce_coefficients(float(h), params, refs)
        rows.append(f"{h!r},{cs.f1!r},{cs.f2!r},{cs.f3!r},{cs.f4!r},"
                    f"{cs.alpha!r},{cs.beta!r},{cs.q_pot!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")
