"""Hydraulic shock profiles of the inclined shallow-water (Saint-Venant) system.

Traveling waves (H, Q)(x - ct) connect the left equilibrium H_L = 1 (fixed by
rescaling) to a right equilibrium H_R in (0, 1).  On smooth regions the height
satisfies the scalar ODE

    H' = G(H) = F^2 (H - 1)(H - H_R)(H - H_3) / (H^3 - H_s^3),

with H_3 and the sonic value H_s rational/algebraic in (F, H_R).  Depending on
whether H_s falls below or above H_R the connection is smooth, or carries a
single entropy-admissible subshock from H_* down to H_R.  At the transition
value the profile is continuous with a corner (degenerate case).

The constructor here integrates x as a function of H (the profile is strictly
monotone), which avoids the slow exponential approach to the equilibria that
plagues direct integration in x.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, IntegrationError, SingularityError

H_L = 1.0

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)

# relative tolerance used to declare a parameter pair exactly critical
_CLASS_RTOL = 1e-12


class ProfileClass(Enum):
    SMOOTH = "smooth"
    DEGENERATE = "degenerate"
    DISCONTINUOUS = "discontinuous"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ModelParams:
    """Froude number and right equilibrium height; H_L == 1 by rescaling."""

    F: float
    H_R: float

    def __post_init__(self):
        if not (0.0 < self.F < 2.0):
            raise DomainError(f"Froude number must lie in (0, 2), got {self.F}")
        if not (0.0 < self.H_R < 1.0):
            raise DomainError(f"H_R must lie in (0, 1), got {self.H_R}")

    @property
    def nu(self) -> float:
        """Height ratio sqrt(H_L / H_R) > 1."""
        return 1.0 / np.sqrt(self.H_R)


@dataclass(frozen=True)
class ReferencePoints:
    """Distinguished heights and wave data derived from (F, H_R)."""

    H3: float
    Hs: float
    Hc: float
    c: float
    q0: float
    Hstar: Optional[float] = None


@dataclass(frozen=True)
class SubshockRecord:
    """States on both sides of the interior shock, plus jump data."""

    H_left: float
    Q_left: float
    H_right: float
    Q_right: float

    @property
    def jump_H(self) -> float:
        return self.H_right - self.H_left

    @property
    def jump_Q(self) -> float:
        return self.Q_right - self.Q_left


def smooth_threshold(F: float) -> float:
    """Critical H_R separating smooth (above) from discontinuous (below)."""
    return 2.0 * F * F / (1.0 + 2.0 * F + np.sqrt(1.0 + 4.0 * F))


def classify(F: float, H_R: float) -> ProfileClass:
    """Classify the profile type for admissible (F, H_R).

    The comparison against the critical height is made at relative tolerance
    1e-12 so that parameter pairs meant to be exactly critical are reported
    as degenerate.
    """
    ModelParams(F, H_R)  # validate
    thr = smooth_threshold(F)
    if abs(H_R - thr) <= _CLASS_RTOL * max(abs(H_R), abs(thr)):
        return ProfileClass.DEGENERATE
    return ProfileClass.SMOOTH if H_R > thr else ProfileClass.DISCONTINUOUS


def critical_height(params: ModelParams) -> float:
    """Positive critical point of the cubic controlling the first-order
    sign condition (used by the stability scans)."""
    sq = np.sqrt(params.H_R)
    return params.F * np.sqrt(params.H_R * (params.H_R + sq + 1.0)) / (np.sqrt(6.0) * (sq + 1.0))


def reference_points(params: ModelParams) -> ReferencePoints:
    """All distinguished heights plus wave speed and flux constant.

    The wave speed comes from the equilibrium Rankine-Hugoniot relation
    c (H_L - H_R) = H_L^{3/2} - H_R^{3/2}; the flux constant is q0 = c - 1.
    H_* (present only for discontinuous profiles) satisfies

        H_*^2 (sqrt(H_R)+1)^2 + H_* H_R (sqrt(H_R)+1)^2 - 2 F^2 H_R = 0.
    """
    F, H_R = params.F, params.H_R
    nu = params.nu
    H3 = nu * nu / (nu + 1.0) ** 2 * H_R
    Hs = (F * nu * nu / (nu + 1.0)) ** (2.0 / 3.0) * H_R
    c = (1.0 - H_R ** 1.5) / (1.0 - H_R)
    q0 = c - 1.0
    Hstar = None
    if classify(F, H_R) is ProfileClass.DISCONTINUOUS:
        Hstar = (-nu - 1.0 + np.sqrt(8.0 * F * F * nu ** 4 + nu * nu + 2.0 * nu + 1.0)) \
            / (2.0 * (nu + 1.0)) * H_R
    return ReferencePoints(H3=H3, Hs=Hs, Hc=critical_height(params), c=c, q0=q0, Hstar=Hstar)


def profile_rhs(H, params: ModelParams, refs: Optional[ReferencePoints] = None):
    """Right side G(H) of the traveling-wave ODE.  Accepts scalars or arrays.

    Raises SingularityError when any evaluation point is within 1e-10 of the
    sonic height H_s (simple pole of G).
    """
    refs = refs or reference_points(params)
    H = np.asarray(H, dtype=float)
    if np.any(np.abs(H - refs.Hs) < 1e-10):
        raise SingularityError(f"profile RHS evaluated at the sonic point H_s={refs.Hs}")
    F, H_R = params.F, params.H_R
    val = F * F * (H - H_L) * (H - H_R) * (H - refs.H3) / (H ** 3 - refs.Hs ** 3)
    return float(val) if val.ndim == 0 else val


def profile_rhs_dH(H, params: ModelParams, refs: Optional[ReferencePoints] = None):
    """dG/dH, needed for decay rates and the reduction coefficients."""
    refs = refs or reference_points(params)
    H = np.asarray(H, dtype=float)
    F, H_R = params.F, params.H_R
    n = (H - H_L) * (H - H_R) * (H - refs.H3)
    np_ = (H - H_R) * (H - refs.H3) + (H - H_L) * (H - refs.H3) + (H - H_L) * (H - H_R)
    d = H ** 3 - refs.Hs ** 3
    val = F * F * (np_ * d - 3.0 * H * H * n) / (d * d)
    return float(val) if val.ndim == 0 else val


def profile_rhs_d2H(H, params: ModelParams, refs: Optional[ReferencePoints] = None):
    """d^2 G / dH^2."""
    refs = refs or reference_points(params)
    H = np.asarray(H, dtype=float)
    F, H_R = params.F, params.H_R
    n = (H - H_L) * (H - H_R) * (H - refs.H3)
    n1 = (H - H_R) * (H - refs.H3) + (H - H_L) * (H - refs.H3) + (H - H_L) * (H - H_R)
    n2 = 2.0 * (3.0 * H - (H_L + H_R + refs.H3))
    d = H ** 3 - refs.Hs ** 3
    d1 = 3.0 * H * H
    d2 = 6.0 * H
    val = F * F * ((n2 * d - n * d2) * d - 2.0 * d1 * (n1 * d - n * d1)) / d ** 3
    return float(val) if val.ndim == 0 else val


def decay_rate_left(params: ModelParams, refs: Optional[ReferencePoints] = None) -> float:
    """|G'(H_L)|: exponential approach rate of the profile tail at -infinity."""
    refs = refs or reference_points(params)
    return abs(profile_rhs_dH(H_L, params, refs))

def decay_rate_right(params: ModelParams, refs: Optional[ReferencePoints] = None) -> float:
    """|G'(H_R)|: tail rate at +infinity (smooth profiles only)."""
    refs = refs or reference_points(params)
    return abs(profile_rhs_dH(params.H_R, params, refs))


@dataclass
class ShockProfile:
    """Sampled traveling wave on a strictly increasing grid.

    For discontinuous profiles the subshock sits at x = 0: the grid point
    x = 0 carries the left state H_*, and all x > 0 rows are the constant
    right equilibrium.  Q = c H - q0 holds identically on the grid.
    """

    params: ModelParams
    refs: ReferencePoints
    profile_class: ProfileClass
    x: np.ndarray
    H: np.ndarray
    Q: np.ndarray
    subshock: Optional[SubshockRecord]
    max_residual: float
    worst_residual_x: float
    half_width: float

    _spline: Optional[CubicSpline] = None

    @property
    def certifiable(self) -> bool:
        """Degenerate profiles are built for display only."""
        return self.profile_class is not ProfileClass.DEGENERATE

    @property
    def anchor_height(self) -> float:
        return float(self.H[np.argmin(np.abs(self.x))])

    def height_spline(self) -> CubicSpline:
        """Interpolant for H(x) over the full grid (built lazily).

        For discontinuous and degenerate classes the right portion is exactly
        constant, so splining the whole grid is safe: the only knot with a
        derivative jump is x=0 (resp. the corner), where the data is constant
        on one side.
        """
        if self._spline is None:
            self._spline = CubicSpline(self.x, self.H)
        return self._spline

    def traversed_interval(self) -> tuple:
        """Open H-interval swept by the smooth left-to-right connection."""
        if self.profile_class is ProfileClass.DISCONTINUOUS:
            return (self.refs.Hstar, H_L)
        return (self.params.H_R, H_L)

    # -- export ----------------------------------------------------------

    def write_csv(self, path) -> None:
        """Rows "x,H,Q"; the subshock row appears twice, tagged 0- and 0+."""
        lines = ["x,H,Q"]
        c, q0 = self.refs.c, self.refs.q0
        for xi, hi, qi in zip(self.x, self.H, self.Q):
            if self.subshock is not None and xi == 0.0:
                s = self.subshock
                lines.append(f"0-,{s.H_left!r},{s.Q_left!r}")
                lines.append(f"0+,{s.H_right!r},{s.Q_right!r}")
            else:
                lines.append(f"{xi!r},{hi!r},{qi!r}")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")

    def sidecar_dict(self) -> dict:
        d = {
            "schema": "hydroshock/1",
            "params": {"F": self.params.F, "H_R": self.params.H_R, "nu": self.params.nu},
            "class": str(self.profile_class),
            "refs": {
                "H3": self.refs.H3,
                "Hs": self.refs.Hs,
                "Hc": self.refs.Hc,
                "c": self.refs.c,
                "q0": self.refs.q0,
                "Hstar": self.refs.Hstar,
            },
            "grid_points": int(len(self.x)),
            "half_width": self.half_width,
            "max_residual": self.max_residual,
            "worst_residual_x": self.worst_residual_x,
            "certifiable": self.certifiable,
        }
        if self.subshock is not None:
            d["subshock"] = {
                "H_left": self.subshock.H_left,
                "Q_left": self.subshock.Q_left,
                "H_right": self.subshock.H_right,
                "Q_right": self.subshock.Q_right,
            }
        return d

    def write_sidecar(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.sidecar_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _cumulative_x(Hgrid: np.ndarray, params, refs) -> np.ndarray:
    """x along a monotone H grid by composite Gauss-Legendre of dx/dH = 1/G."""
    a, b = Hgrid[:-1], Hgrid[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    panels = (1.0 / profile_rhs(nodes, params, refs)) @ _GL_WEIGHTS * half
    return np.concatenate([[0.0], np.cumsum(panels)])


def _deriv7(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """dy/dx at the nodes via sliding 7-point Lagrange stencils."""
    n, k = len(x), 7
    j = np.clip(np.arange(n) - 3, 0, n - k)
    idx = j[:, None] + np.arange(k)[None, :]
    X = x[idx] - x[:, None]
    V = X[..., None] ** np.arange(k)[None, None, :]
    rhs = np.zeros((n, k, 1))
    rhs[:, 1, 0] = 1.0
    w = np.linalg.solve(np.swapaxes(V, 1, 2), rhs)[..., 0]
    return (w * y[idx]).sum(axis=1)


def default_half_width(params: ModelParams, refs: Optional[ReferencePoints] = None,
                       tail: float = 1e-10) -> float:
    """Half-width making the truncated tail amplitude at most `tail`."""
    refs = refs or reference_points(params)
    kL = decay_rate_left(params, refs)
    width = -np.log(tail) / kL
    if classify(params.F, params.H_R) is ProfileClass.SMOOTH:
        width = max(width, -np.log(tail) / decay_rate_right(params, refs))
    return 1.05 * width


def integrate_profile(params: ModelParams, half_width: Optional[float] = None,
                      n_points: int = 4000, tol: float = 1e-8) -> ShockProfile:
    """Construct the sampled traveling wave.

    H is taken as the independent variable (dx/dH = 1/G), accumulated with
    composite 16th-order Gauss-Legendre panels on a grid geometrically
    clustered at the equilibria.  The residual |H' - G(H)| / (1 + |G|) is
    measured afterwards with 7-point finite differences on the x grid; the
    construction fails if it exceeds `tol`.

    Degenerate profiles are constructed (the corner at H_R is reached at
    finite x, constant state beyond) but flagged non-certifiable.
    """
    refs = reference_points(params)
    klass = classify(params.F, params.H_R)
    if half_width is None:
        half_width = default_half_width(params, refs)
    F, H_R = params.F, params.H_R
    c, q0 = refs.c, refs.q0
    kL = decay_rate_left(params, refs)

    if klass is ProfileClass.DISCONTINUOUS:
        anchor = refs.Hstar
        dL = np.clip((1.0 - anchor) * np.exp(-kL * half_width), 5e-14, 0.5 * (1.0 - anchor))
        n_left = max(n_points * 7 // 8, 64)
        Hg = H_L - np.geomspace(dL, 1.0 - anchor, n_left)
        Hg[-1] = anchor
        x = _cumulative_x(Hg, params, refs)
        x -= x[-1]
        n_right = max(n_points - n_left, 8)
        xr = np.linspace(0.0, half_width, n_right + 1)[1:]
        x = np.concatenate([x, xr])
        H = np.concatenate([Hg, np.full(n_right, H_R)])
        subshock = SubshockRecord(H_left=anchor, Q_left=c * anchor - q0,
                                  H_right=H_R, Q_right=c * H_R - q0)
    elif klass is ProfileClass.SMOOTH:
        anchor = 0.5 * (H_L + H_R)
        kR = decay_rate_right(params, refs)
        dL = np.clip((1.0 - anchor) * np.exp(-kL * half_width), 5e-14, 0.5 * (1.0 - anchor))
        dR = np.clip((anchor - H_R) * np.exp(-kR * half_width), 5e-14, 0.5 * (anchor - H_R))
        n_half = max(n_points // 2, 32)
        top = H_L - np.geomspace(dL, 1.0 - anchor, n_half)
        bot = H_R + np.geomspace(dR, anchor - H_R, n_half)[::-1]
        Hg = np.concatenate([top, bot[1:]])
        x = _cumulative_x(Hg, params, refs)
        x -= x[n_half - 1]
        H = Hg
        subshock = None
    else:  # degenerate: corner where the connection meets H_R at finite x
        anchor = 0.5 * (H_L + H_R)
        dL = np.clip((1.0 - anchor) * np.exp(-kL * half_width), 5e-14, 0.5 * (1.0 - anchor))
        n_left = max(n_points * 7 // 8, 64)
        top = H_L - np.geomspace(dL, 1.0 - anchor, n_left // 2)
        # regular endpoint at H_R (G finite, nonzero): mild clustering only
        bot = H_R + (anchor - H_R) * (np.linspace(0.0, 1.0, n_left - n_left // 2 + 1)[1:]) ** 1.5
        Hg = np.concatenate([top, bot[::-1]])
        x = _cumulative_x(Hg, params, refs)
        x -= x[n_left // 2 - 1]
        x_corner = x[-1]
        n_right = max(n_points - n_left, 8)
        xr = x_corner + np.linspace(0.0, half_width, n_right + 1)[1:]
        x = np.concatenate([x, xr])
        H = np.concatenate([Hg, np.full(n_right, H_R)])
        subshock = None

    Q = c * H - q0
    if np.any(np.diff(x) <= 0.0):
        raise IntegrationError("profile grid is not strictly increasing")

    # residual on the varying piece of the grid only; the constant-state
    # extension satisfies the ODE exactly (both sides vanish).  For the
    # degenerate corner, skip the few rows whose finite-difference window
    # would straddle the derivative jump.
    if klass is ProfileClass.SMOOTH:
        stop = len(x)
    elif klass is ProfileClass.DISCONTINUOUS:
        stop = n_left
    else:
        stop = n_left - 4
    if stop >= 7:
        dH = _deriv7(x[:stop], H[:stop])
        g = profile_rhs(H[:stop], params, refs)
        res = np.abs(dH - g) / (1.0 + np.abs(g))
        imax = int(np.argmax(res))
        max_res, worst_x = float(res[imax]), float(x[imax])
    else:
        max_res, worst_x = 0.0, 0.0
    if max_res > tol:
        raise IntegrationError(
            f"profile residual {max_res:.3e} exceeds tol {tol:.1e} at x={worst_x:.4f}",
            worst_x=worst_x, worst_residual=max_res)

    return ShockProfile(params=params, refs=refs, profile_class=klass,
                        x=x, H=H, Q=Q, subshock=subshock,
                        max_residual=max_res, worst_residual_x=worst_x,
                        half_width=float(half_width))


@dataclass(frozen=True)
class LaxReport:
    """Outcome of the jump-condition and characteristic checks at the subshock."""

    rh_mass_residual: float
    rh_momentum_residual: float
    lax_incoming_left: bool    # u + sqrt(H)/F > c at H_*
    lax_outgoing_right: bool   # u + sqrt(H)/F < c at H_R
    lax_first_family: bool     # u - sqrt(H)/F < c on both sides
    passed: bool
    failures: tuple


def lax_check(profile: ShockProfile, rh_tol: float = 1e-10) -> LaxReport:
    """Verify the subshock is an admissible compressive jump.

    Checks the Rankine-Hugoniot relations c[H]=[Q] and
    c[Q]=[Q^2/H + H^2/(2F^2)] at tolerance `rh_tol`, then the characteristic
    inequalities of the second family (u + sqrt(H)/F straddles c) and that
    the first family passes through (u - sqrt(H)/F < c on both sides).
    """
    if profile.profile_class is not ProfileClass.DISCONTINUOUS:
        raise DomainError("lax_check requires a discontinuous profile")
    s = profile.subshock
    F = profile.params.F
    c = profile.refs.c
    jH = s.jump_H
    jQ = s.jump_Q
    flux2 = lambda H, Q: Q * Q / H + H * H / (2.0 * F * F)
    r1 = abs(c * jH - jQ)
    r2 = abs(c * jQ - (flux2(s.H_right, s.Q_right) - flux2(s.H_left, s.Q_left)))
    uL, uR = s.Q_left / s.H_left, s.Q_right / s.H_right
    lam2L = uL + np.sqrt(s.H_left) / F
    lam2R = uR + np.sqrt(s.H_right) / F
    lam1L = uL - np.sqrt(s.H_left) / F
    lam1R = uR - np.sqrt(s.H_right) / F
    checks = {
        "rankine_hugoniot_mass": r1 <= rh_tol,
        "rankine_hugoniot_momentum": r2 <= rh_tol,
        "lax_incoming_left": lam2L > c,
        "lax_outgoing_right": lam2R < c,
        "lax_first_family": (lam1L < c) and (lam1R < c),
    }
    failures = tuple(k for k, ok in checks.items() if not ok)
    return LaxReport(rh_mass_residual=r1, rh_momentum_residual=r2,
                     lax_incoming_left=checks["lax_incoming_left"],
                     lax_outgoing_right=checks["lax_outgoing_right"],
                     lax_first_family=checks["lax_first_family"],
                     passed=not failures, failures=failures)


def threshold_by_bisection(F: float, tol: float = 1e-12) -> float:
    """Locate the smooth/discontinuous boundary as the sign change of
    Hs - H_R, independently of the closed-form threshold."""
    def gap(hr):
        p = ModelParams(F, hr)
        r = reference_points(p)
        return r.Hs - hr
    lo, hi = 1e-6, 1.0 - 1e-9
    if gap(lo) <= 0 or gap(hi) >= 0:
        raise DomainError("bisection bracket invalid")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
