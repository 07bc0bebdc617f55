"""Evans and Evans-Lopatinsky determinants with contour winding counts.

Eigenvalues of the linearized problem are zeros of a shooting determinant:

* smooth profiles: the Wronskian at x = 0 of the solution decaying toward
  -infinity and the solution decaying toward +infinity (whole line);
* discontinuous profiles: the pairing of the jump data
  (lam*[W] - [relaxation])_perp with A(0-) v(0-) for the solution decaying
  toward -infinity (half line), the jump row coming from elimination of the
  linearized front position.

Both are evaluated by rate-shifted batched RK4 integration of the mode ODE
v' = A^{-1}(E - lam*I - A_x) v along the sampled profile.  The integrated
directions are renormalized to unit length (a positive scalar factor, so
zeros, phases and winding numbers are untouched) and the reported value is
additionally multiplied by a modulus-one factor cancelling the accumulated
local-rate phase; this keeps the sampled phase slowly varying along contours
so the argument principle needs only a few hundred samples even at radius 20.

Contours live in the closed right half-plane (plus a small disk around the
origin for the translational-zero count); there the principal square-root
branch of the asymptotic rates is continuous along the paths used.  Branch
continuation by sign chaining is still applied sample-to-sample as a guard.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, IntegrationError, ZeroOnContourError
from .linearization import (limit_rate_discriminant, limit_system_rates,
                            matrices, matrices_x_derivative, relaxation_source)
from .profile import (H_L, ProfileClass, ShockProfile, decay_rate_left,
                      decay_rate_right)

_TWO_PI = 2.0 * np.pi

# spectral-gap threshold above which the decaying direction is slaved to the
# local eigenvector (boundary layer thinner than any profile variation)
_ADIABATIC_GAP = 2500.0
_TAIL_CUT = 1e-7


# --------------------------------------------------------------------------
# contours
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Contour:
    """Closed positively oriented sampling path, parametrized by t in [0, 1].

    Paths start at their rightmost real point so that branch chaining can
    begin where the principal square root is the correct mode rate.
    """

    kind: str                  # "semicircle" | "circle"
    radius: float
    indent: float = 0.0
    center: complex = 0.0

    @staticmethod
    def semicircle(R: float, r_indent: float) -> "Contour":
        """Boundary of {Re > 0, r_indent < |lam| < R}, counterclockwise,
        starting and ending at lam = R."""
        if not (0.0 < r_indent < R):
            raise DomainError("need 0 < r_indent < R")
        return Contour(kind="semicircle", radius=R, indent=r_indent)

    @staticmethod
    def circle(center: complex, radius: float) -> "Contour":
        if radius <= 0.0:
            raise DomainError("circle radius must be positive")
        return Contour(kind="circle", radius=radius, center=center)

    def _pieces(self):
        R, r = self.radius, self.indent
        if self.kind == "circle":
            return [("arc", self.center, self.radius, 0.0, _TWO_PI, 1.0)]
        quarter = 0.25 * np.pi * R
        seg = R - r
        ind = 0.5 * np.pi * r
        total = 2 * quarter + 2 * seg + ind
        return [
            ("arc", 0.0, R, 0.0, 0.5 * np.pi, quarter / total),
            ("seg", 1j * R, 1j * r, None, None, seg / total),
            ("arc", 0.0, r, 0.5 * np.pi, -0.5 * np.pi, ind / total),
            ("seg", -1j * r, -1j * R, None, None, seg / total),
            ("arc", 0.0, R, -0.5 * np.pi, 0.0, quarter / total),
        ]

    def point(self, t):
        """Map parameters t (array-like, in [0,1]) to contour points."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty(t.shape, dtype=complex)
        t0 = 0.0
        for kind, a, b, th0, th1, frac in self._pieces():
            t1 = t0 + frac
            sel = (t >= t0 - 1e-15) & (t <= t1 + 1e-15) if t1 < 1.0 else (t >= t0 - 1e-15)
            if np.any(sel):
                s = np.clip((t[sel] - t0) / frac, 0.0, 1.0)
                if kind == "arc":
                    out[sel] = a + b * np.exp(1j * (th0 + (th1 - th0) * s))
                else:
                    out[sel] = a + (b - a) * s
            t0 = t1
        return out

    def base_ts(self, n: int) -> np.ndarray:
        """n+1 parameters (closed: first and last map to the same point)."""
        return np.linspace(0.0, 1.0, n + 1)

    def describe(self) -> dict:
        d = {"kind": self.kind, "radius": self.radius}
        if self.kind == "semicircle":
            d["indent"] = self.indent
        else:
            d["center"] = [self.center.real, self.center.imag]
        return d


# --------------------------------------------------------------------------
# mode integration engine
# --------------------------------------------------------------------------

def _chain_sqrt_signs(disc: np.ndarray) -> np.ndarray:
    """Signs making sign*sqrt(disc) continuous along the sample sequence,
    starting from the principal branch at the first sample."""
    root = np.sqrt(disc.astype(complex))
    signs = np.ones(len(root))
    prev = root[0]
    for i in range(1, len(root)):
        signs[i] = -signs[i - 1] if abs(root[i] - prev) > abs(root[i] + prev) \
            else signs[i - 1]
        prev = signs[i] * root[i]
    return signs


class _SideData:
    """Per-side profile tables used by the mode integrator."""

    def __init__(self, profile: ShockProfile, side: str):
        self.side = side
        p = profile.params
        refs = profile.refs
        x, H = profile.x, profile.H
        if side == "left":
            self.H_limit = H_L
            self.kappa = decay_rate_left(p, refs)
            cut = np.nonzero(np.abs(H - self.H_limit) <= _TAIL_CUT)[0]
            i_cut = cut[-1] if len(cut) else 0
            self.x_cut = float(x[i_cut])
            self.x_end = 0.0
        else:
            self.H_limit = p.H_R
            self.kappa = decay_rate_right(p, refs)
            cut = np.nonzero(np.abs(H - self.H_limit) <= _TAIL_CUT)[0]
            i_cut = cut[0] if len(cut) else len(x) - 1
            self.x_cut = float(x[i_cut])
            self.x_end = 0.0
        self.spline = profile.height_spline()
        self.params = p
        self.refs = refs
        # coarse survey grid for gap and amplitude estimates
        self.survey_x = np.linspace(self.x_end, self.x_cut, 37)
        self.survey_H = np.clip(self.spline(self.survey_x),
                                min(p.H_R, 1.0) if side == "right" else 0.0, H_L)

    def local_rates(self, lams: np.ndarray, Hvals: np.ndarray):
        """Both mode rates of the frozen-coefficient system at given heights,
        vectorized over (H, lam)."""
        p, refs = self.params, self.refs
        F, c, q0 = p.F, refs.c, refs.q0
        Hv = np.asarray(Hvals, dtype=float)[:, None]
        lam = np.asarray(lams, dtype=complex)[None, :]
        Q = c * Hv - q0
        u = Q / Hv
        detA = (c - u) ** 2 - Hv / (F * F)
        E21 = 2.0 * Q * Q / Hv ** 3 + 1.0
        E22 = -2.0 * Q / Hv ** 2
        b = (c * E22 + E21) + 2.0 * lam * (u - c)
        s = np.sqrt(b * b - 4.0 * detA * lam * (lam - E22) + 0j)
        return (-b - s) / (2.0 * detA), (-b + s) / (2.0 * detA)


class ModeIntegrator:
    """Batched computation of the unit decaying-mode directions at x = 0.

    The kept mode is the one decaying toward -infinity (left side) or toward
    +infinity (right side).  Integration is rate-shifted RK4 with periodic
    renormalization; when the spectral gap is so large that the mode is a
    pure boundary layer, the direction is taken from the local eigenvector
    with a first-order adiabatic correction instead of integrating.
    """

    def __init__(self, profile: ShockProfile, max_steps: int = 250_000):
        self.profile = profile
        self.max_steps = max_steps
        self.left = _SideData(profile, "left")
        self.right = _SideData(profile, "right") \
            if profile.profile_class is ProfileClass.SMOOTH else None
        self._cache = {}

    # -- local system matrices --------------------------------------------

    def _system(self, H):
        p, refs = self.profile.params, self.profile.refs
        F, c, q0 = p.F, refs.c, refs.q0
        H = np.asarray(H, dtype=float)
        Q = c * H - q0
        u = Q / H
        z = np.zeros_like(H)
        o = np.ones_like(H)
        A = np.stack([np.stack([-c * o, o], -1),
                      np.stack([H / (F * F) - u * u, 2.0 * u - c], -1)], -2)
        E = np.stack([np.stack([z, z], -1),
                      np.stack([2.0 * u * u / H + 1.0, -2.0 * u / H], -1)], -2)
        from .profile import profile_rhs
        G = profile_rhs(H, p, refs)
        Ax = np.stack([np.stack([z, z], -1),
                       np.stack([G * (1.0 / (F * F) - 2.0 * u * (c - u) / H),
                                 G * 2.0 * (c - u) / H], -1)], -2)
        Ainv = np.linalg.inv(A)
        return Ainv @ (E - Ax), Ainv

    def _limit_rates(self, side: _SideData, lams, signs):
        g1, g2 = limit_system_rates(lams, side.H_limit, self.profile.params,
                                    self.profile.refs, sqrt_sign=signs)
        return (g1, g2) if side.side == "left" else (g2, g1)  # (kept, other)

    def _eigvec(self, H0: float, lam: complex, gamma: complex) -> np.ndarray:
        m = matrices(H0, self.profile.params, self.profile.refs)
        Ax = matrices_x_derivative(H0, self.profile.params, self.profile.refs)
        C = np.linalg.solve(m.A, (m.E - Ax) - lam * np.eye(2))
        # robust eigenvector for the eigenvalue of C nearest gamma
        w, V = np.linalg.eig(C)
        j = int(np.argmin(np.abs(w - gamma)))
        v = V[:, j]
        return v / np.linalg.norm(v)

    def _adiabatic_direction(self, side: _SideData, lam: complex,
                             gamma_kept: complex) -> np.ndarray:
        """Local eigenvector at x=0 with first-order adiabatic correction."""
        h = 1e-5
        x0 = side.x_end
        H0 = float(side.spline(x0))
        m = matrices(H0, self.profile.params, self.profile.refs)
        Ax = matrices_x_derivative(H0, self.profile.params, self.profile.refs)
        C = np.linalg.solve(m.A, (m.E - Ax) - lam * np.eye(2))
        w, V = np.linalg.eig(C)
        j = int(np.argmin(np.abs(w - gamma_kept)))
        k = 1 - j
        rj, rk = V[:, j], V[:, k]
        # dr_j/dx by symmetric difference of the aligned eigenvector
        def vec_at(x):
            Hx = float(side.spline(x))
            mm = matrices(Hx, self.profile.params, self.profile.refs)
            Axx = matrices_x_derivative(Hx, self.profile.params, self.profile.refs)
            Cx = np.linalg.solve(mm.A, (mm.E - Axx) - lam * np.eye(2))
            ww, VV = np.linalg.eig(Cx)
            jj = int(np.argmin(np.abs(ww - w[j])))
            v = VV[:, jj]
            v = v / np.linalg.norm(v)
            return v * np.sign(np.vdot(rj, v).real + 1e-300)
        drj = (vec_at(x0 + h) - vec_at(x0 - h)) / (2.0 * h)
        wL, VL = np.linalg.eig(C.T)
        kk = int(np.argmin(np.abs(wL - w[k])))
        lk = VL[:, kk]
        sigma = (lk @ drj) / ((w[k] - w[j]) * (lk @ rk))
        v = rj / np.linalg.norm(rj) + sigma * rk
        return v / np.linalg.norm(v)

    # -- batched integration ----------------------------------------------

    def directions(self, side_name: str, lams: np.ndarray,
                   signs: Optional[np.ndarray] = None):
        """Unit mode directions at x=0 and the accumulated local-rate phase.

        Returns (V, phase) with V of shape (2, K) and phase real of shape (K,).
        """
        side = self.left if side_name == "left" else self.right
        if side is None:
            raise DomainError("right-side modes are only defined for smooth profiles")
        lams = np.asarray(lams, dtype=complex)
        if signs is None:
            signs = np.ones(len(lams))
        kept_inf, other_inf = self._limit_rates(side, lams, signs)

        g1s, g2s = side.local_rates(lams, side.survey_H)
        kept_loc = g1s if side.side == "left" else g2s
        gap_loc = np.abs(g1s - g2s)                      # (nx, K)
        gap_min = gap_loc.min(axis=0)
        gap_max = gap_loc.max(axis=0)
        amp_max = np.abs(kept_loc - kept_inf[None, :]).max(axis=0)

        V = np.empty((2, len(lams)), dtype=complex)
        phase = np.zeros(len(lams))
        adiabatic = gap_min >= _ADIABATIC_GAP
        for i in np.nonzero(adiabatic)[0]:
            V[:, i] = self._adiabatic_direction(side, lams[i], kept_inf[i])
        todo = np.nonzero(~adiabatic)[0]
        if len(todo):
            X = abs(side.x_cut - side.x_end)
            need = X * (gap_max[todo].max() / 2.2
                        + 7.0 * amp_max[todo].max()
                        + 7.0 * side.kappa + 3.0)
            nstep = int(np.clip(need, 600, self.max_steps))
            if need > self.max_steps:
                raise IntegrationError(
                    f"mode integration would need {int(need)} steps "
                    f"(cap {self.max_steps}); parameters too close to degeneracy")
            Vi = self._integrate(side, lams[todo], kept_inf[todo], nstep)
            V[:, todo] = Vi
            phase[todo] = self._covered_phase(side, lams[todo], kept_inf[todo])
        return V, phase

    def _integrate(self, side: _SideData, lams, gammas, nstep):
        key = (side.side, nstep)
        if key not in self._cache:
            xs = np.linspace(side.x_cut, side.x_end, nstep + 1)
            allx = np.empty(2 * nstep + 1)
            allx[0::2] = xs
            allx[1::2] = 0.5 * (xs[:-1] + xs[1:])
            Hall = side.spline(allx)
            # clamp spline wiggle beyond the data range
            C0, Ainv = self._system(np.clip(Hall, self.profile.H.min(), H_L))
            self._cache[key] = (xs[1] - xs[0], C0, Ainv)
            if len(self._cache) > 8:
                self._cache.pop(next(iter(self._cache)))
        h, C0, Ainv = self._cache[key]
        lam = np.asarray(lams)
        gam = np.asarray(gammas)
        V = np.empty((2, len(lam)), dtype=complex)
        for i, (l, g) in enumerate(zip(lam, gam)):
            V[:, i] = self._eigvec(float(side.spline(side.x_cut)), l, g)

        def rhs(idx, Y):
            return C0[idx] @ Y - Ainv[idx] @ (Y * lam[None, :]) - Y * gam[None, :]

        for k in range(nstep):
            i0, im, i1 = 2 * k, 2 * k + 1, 2 * k + 2
            k1 = rhs(i0, V)
            k2 = rhs(im, V + 0.5 * h * k1)
            k3 = rhs(im, V + 0.5 * h * k2)
            k4 = rhs(i1, V + h * k3)
            V = V + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if k % 8 == 0:
                n = np.sqrt(np.abs(V[0]) ** 2 + np.abs(V[1]) ** 2)
                V = V / n[None, :]
        n = np.sqrt(np.abs(V[0]) ** 2 + np.abs(V[1]) ** 2)
        return V / n[None, :]

    def _covered_phase(self, side: _SideData, lams, kept_inf):
        """Imag part of int (gamma_kept_local - gamma_kept_inf) dx over the
        integrated interval (quadrature, principal branch)."""
        xq = np.linspace(side.x_cut, side.x_end, 401)
        Hq = side.spline(xq)
        g1, g2 = side.local_rates(lams, Hq)
        kept = g1 if side.side == "left" else g2
        integ = kept - kept_inf[None, :]
        Phi = np.trapezoid(integ, xq, axis=0)
        return Phi.imag

    def norm_track(self, side_name: str, lam: complex, nstep: int = 4000):
        """Diagnostic: norms of the rate-shifted solution along the run
        (no renormalization), for the renormalization-window property."""
        side = self.left if side_name == "left" else self.right
        lams = np.array([lam], dtype=complex)
        kept_inf, _ = self._limit_rates(side, lams, np.ones(1))
        xs = np.linspace(side.x_cut, side.x_end, nstep + 1)
        allx = np.empty(2 * nstep + 1)
        allx[0::2] = xs
        allx[1::2] = 0.5 * (xs[:-1] + xs[1:])
        C0, Ainv = self._system(side.spline(allx))
        h = xs[1] - xs[0]
        V = self._eigvec(float(side.spline(side.x_cut)), lam, kept_inf[0])[:, None]
        lamv = lams
        gam = kept_inf
        norms = [1.0]

        def rhs(idx, Y):
            return C0[idx] @ Y - Ainv[idx] @ (Y * lamv[None, :]) - Y * gam[None, :]

        for k in range(nstep):
            i0, im, i1 = 2 * k, 2 * k + 1, 2 * k + 2
            k1 = rhs(i0, V)
            k2 = rhs(im, V + 0.5 * h * k1)
            k3 = rhs(im, V + 0.5 * h * k2)
            k4 = rhs(i1, V + h * k3)
            V = V + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            norms.append(float(np.sqrt(np.abs(V[0, 0]) ** 2 + np.abs(V[1, 0]) ** 2)))
        return np.array(norms)


# --------------------------------------------------------------------------
# determinant evaluators
# --------------------------------------------------------------------------

class EvansEvaluator:
    """Contour-aware evaluator producing slowly-spinning determinant samples.

    The reported values differ from the raw shooting determinants by a
    positive scalar and a modulus-one continuous factor; zeros and winding
    numbers are unchanged.
    """

    def __init__(self, profile: ShockProfile):
        if not profile.certifiable:
            raise DomainError("degenerate profiles are not certifiable")
        self.profile = profile
        self.modes = ModeIntegrator(profile)
        self.is_smooth = profile.profile_class is ProfileClass.SMOOTH
        if not self.is_smooth:
            refs = profile.refs
            p = profile.params
            Hst = refs.Hstar
            self._A0 = matrices(Hst, p, refs).A
            self._jump_W = np.array([p.H_R - Hst, refs.c * (p.H_R - Hst)])
            self._jump_S = (relaxation_source(p.H_R, p, refs)
                            - relaxation_source(Hst, p, refs))

    def _signs(self, lams, H0):
        disc = limit_rate_discriminant(lams, H0, self.profile.params, self.profile.refs)
        return _chain_sqrt_signs(np.atleast_1d(disc))

    def values(self, lams: np.ndarray, phase_correct: bool = True) -> np.ndarray:
        """Determinant samples at contour-ordered points."""
        lams = np.atleast_1d(np.asarray(lams, dtype=complex))
        sL = self._signs(lams, H_L)
        VL, phiL = self.modes.directions("left", lams, sL)
        if self.is_smooth:
            sR = self._signs(lams, self.profile.params.H_R)
            VR, phiR = self.modes.directions("right", lams, sR)
            D = VL[0] * VR[1] - VL[1] * VR[0]
            phi = phiL + phiR
        else:
            AV = self._A0 @ VL
            p1 = lams * self._jump_W[0] - self._jump_S[0]
            p2 = lams * self._jump_W[1] - self._jump_S[1]
            D = p2 * AV[0] - p1 * AV[1]
            phi = phiL
        return D * np.exp(-1j * phi) if phase_correct else D


def evans_whole_line(lam: complex, profile: ShockProfile) -> complex:
    """Whole-line shooting determinant at a single point (smooth profiles).

    Normalization-free up to a positive factor; vanishes exactly at
    eigenvalues, including the translational zero at lam = 0.
    """
    if profile.profile_class is not ProfileClass.SMOOTH:
        raise DomainError("evans_whole_line requires a smooth profile")
    ev = EvansEvaluator(profile)
    return complex(ev.values(np.array([lam]), phase_correct=False)[0])


def evans_lopatinsky(lam: complex, profile: ShockProfile) -> complex:
    """Half-line determinant at a single point (discontinuous profiles)."""
    if profile.profile_class is not ProfileClass.DISCONTINUOUS:
        raise DomainError("evans_lopatinsky requires a discontinuous profile")
    ev = EvansEvaluator(profile)
    return complex(ev.values(np.array([lam]), phase_correct=False)[0])


# --------------------------------------------------------------------------
# winding numbers
# --------------------------------------------------------------------------

@dataclass
class WindingReport:
    contour: Contour
    winding: int
    min_modulus: float
    n_samples: int
    max_phase_step: float
    samples_lam: np.ndarray = field(repr=False, default=None)
    samples_val: np.ndarray = field(repr=False, default=None)

    def to_dict(self, params=None) -> dict:
        d = {
            "schema": "hydroshock/1",
            "contour": self.contour.describe(),
            "n_samples": int(self.n_samples),
            "winding": int(self.winding),
            "min_modulus": float(self.min_modulus),
        }
        if params is not None:
            d["params"] = {"F": params.F, "H_R": params.H_R}
        return d

    def write_json(self, path, params=None) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(params), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def write_samples_csv(self, path) -> None:
        lines = ["re_lam,im_lam,re_D,im_D"]
        for l, v in zip(self.samples_lam, self.samples_val):
            lines.append(f"{l.real!r},{l.imag!r},{v.real!r},{v.imag!r}")
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def _wrap(d):
    return (d + np.pi) % _TWO_PI - np.pi


def winding_number(D: Callable, contour: Contour, n_base: int = 256,
                   tol: float = 0.25 * np.pi, max_evals: int = 20000,
                   zero_rtol: float = 1e-9) -> WindingReport:
    """Integer winding of D around the contour by adaptive phase tracking.

    D is called with an ndarray of contour points (a scalar callable is
    wrapped automatically).  Segments are bisected until successive phase
    increments stay below `tol`.  If any sample modulus falls below
    zero_rtol times the largest modulus seen, a ZeroOnContourError is
    raised: the contour must be deformed by the caller.
    """
    def evaluate(lams):
        try:
            out = np.asarray(D(lams), dtype=complex)
            if out.shape != lams.shape:
                raise TypeError
            return out
        except TypeError:
            return np.array([complex(D(l)) for l in lams])

    ts = np.linspace(0.0, 1.0, n_base + 1)
    lam = contour.point(ts)
    vals = evaluate(lam)
    evals = len(lam)
    while True:
        d = _wrap(np.diff(np.angle(vals)))
        bad = np.nonzero(np.abs(d) > tol)[0]
        if len(bad) == 0:
            break
        if evals + len(bad) > max_evals:
            raise IntegrationError(
                f"winding refinement exceeded {max_evals} evaluations "
                f"({len(bad)} unresolved segments)")
        tm = 0.5 * (ts[bad] + ts[bad + 1])
        lm = contour.point(tm)
        vm = evaluate(lm)
        evals += len(tm)
        order = np.argsort(np.concatenate([ts, tm]), kind="stable")
        ts = np.concatenate([ts, tm])[order]
        lam = np.concatenate([lam, lm])[order]
        vals = np.concatenate([vals, vm])[order]

    mods = np.abs(vals)
    min_mod = float(mods.min())
    if min_mod < zero_rtol * float(mods.max()):
        raise ZeroOnContourError(
            f"sample modulus {min_mod:.3e} is below threshold; "
            "a zero lies (numerically) on the contour")
    d = _wrap(np.diff(np.angle(vals)))
    total = d.sum() / _TWO_PI
    w = int(np.rint(total))
    if abs(total - w) > 1e-6:
        raise IntegrationError(f"winding {total} is not integral")
    return WindingReport(contour=contour, winding=w, min_modulus=min_mod,
                         n_samples=len(vals), max_phase_step=float(np.abs(d).max()),
                         samples_lam=lam, samples_val=vals)


def count_unstable(profile: ShockProfile, R: float = 10.0,
                   r_indent: float = 0.01, n_base: int = 256) -> int:
    """Number of determinant zeros strictly inside the indented right
    half-plane semicircle (origin excluded).  Expected 0 for every
    certifiable profile."""
    return unstable_report(profile, R, r_indent, n_base).winding


def unstable_report(profile: ShockProfile, R: float = 10.0,
                    r_indent: float = 0.01, n_base: int = 256) -> WindingReport:
    ev = EvansEvaluator(profile)
    contour = Contour.semicircle(R, r_indent)
    return winding_number(ev.values, contour, n_base=n_base)


def branch_free_radius(profile: ShockProfile) -> float:
    """Largest disk around the origin avoiding the square-root branch points
    of the asymptotic rates (they sit in the open left half-plane)."""
    p, refs = profile.params, profile.refs
    rads = []
    sides = [H_L] + ([p.H_R] if profile.profile_class is ProfileClass.SMOOTH else [])
    for H0 in sides:
        Q = refs.c * H0 - refs.q0
        u = Q / H0
        detA = (u - refs.c) ** 2 - H0 / p.F ** 2
        E21 = 2.0 * Q * Q / H0 ** 3 + 1.0
        E22 = -2.0 * Q / H0 ** 2
        B0 = refs.c * E22 + E21
        a = 4.0 * (u - refs.c) ** 2 - 4.0 * detA
        b = 4.0 * B0 * (u - refs.c) + 4.0 * detA * E22
        c0 = B0 * B0
        rads.append(np.abs(np.roots([a, b, c0])).min())
    return float(min(rads))


def translational_zero_winding(profile: ShockProfile, radius: float = 0.5,
                               n_base: int = 192) -> WindingReport:
    """Winding of the determinant on a circle about the origin: counts the
    multiplicity of the translational zero (expected 1).

    The requested radius is clamped into the branch-point-free disk: beyond
    it the shooting determinant is not single-valued (the asymptotic rates
    undergo monodromy around their branch points), so a winding count there
    would be meaningless.  The effective radius is recorded in the report.
    """
    r_eff = min(radius, 0.4 * branch_free_radius(profile))
    ev = EvansEvaluator(profile)
    contour = Contour.circle(0.0, r_eff)
    return winding_number(ev.values, contour, n_base=n_base)


# --------------------------------------------------------------------------
# transformed-variable (scalar) shooting for the half-line cross-check
# --------------------------------------------------------------------------

def w_mismatch(lam: complex, profile: ShockProfile, c1: float, c2: float,
               nstep: int = 6000) -> complex:
    """Robin mismatch w'(0) - (c1 + c2*lam) w(0) of the decaying solution of
    the transformed scalar equation on the left half-line.

    Zeros coincide with zeros of the half-line determinant; used as an
    independent formulation check.
    """
    from .linearization import asymptotic_rates, coeff_alpha, coeff_beta, coeff_q_pot
    p, refs = profile.params, profile.refs
    side = _SideData(profile, "left")
    mu = asymptotic_rates(lam, p, "left")
    nst = int(max(nstep, 8 * abs(side.x_cut) * abs(mu)))
    xs = np.linspace(side.x_cut, 0.0, nst + 1)
    allx = np.empty(2 * nst + 1)
    allx[0::2] = xs
    allx[1::2] = 0.5 * (xs[:-1] + xs[1:])
    Hq = np.clip(side.spline(allx), profile.H.min(), H_L)
    Vq = (coeff_beta(Hq, p, refs) * lam * lam
          + coeff_alpha(Hq, p, refs) * lam - coeff_q_pot(Hq, p, refs))
    h = xs[1] - xs[0]
    y = np.array([1.0, mu], dtype=complex)

    def rhs(idx, yv):
        return np.array([yv[1] - mu * yv[0], Vq[idx] * yv[0] - mu * yv[1]])

    for k in range(nst):
        i0, im, i1 = 2 * k, 2 * k + 1, 2 * k + 2
        k1 = rhs(i0, y)
        k2 = rhs(im, y + 0.5 * h * k1)
        k3 = rhs(im, y + 0.5 * h * k2)
        k4 = rhs(i1, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        n = abs(y[0]) + abs(y[1])
        if n > 1e6 or n < 1e-6:
            y = y / n
    return complex(y[1] - (c1 + c2 * lam) * y[0])
