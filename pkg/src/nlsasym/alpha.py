"""Coefficients of the ln t / t and 1/t terms contributed by the four dbar regions.

The regions around the stationary point z0 are the sectors

    Omega1: 0 < phi < pi/4        Omega4: pi < phi < 5pi/4
    Omega6: -pi/4 < phi < 0       Omega3: 3pi/4 < phi < pi

in polar coordinates z = z0 + rho e^{i phi}.  In each one the dbar data
is integrated against U^2 = e^{+-4it rho^2 e^{2i phi}} A^2(+-a, k y) with
y = 2 sqrt(2) e^{-i pi/4} sqrt(t) rho e^{i phi} and k in {1, -1, i, -i}.

For the t-free coefficients (t = 1 after rescaling) the radial integrals
are analytic in rho, so we rotate each ray to rho = s e^{i psi} on which
the PC argument is real positive and the kernel is e^{-4 s^2}.  The
literal integrand is evaluated at the rotated nodes; nothing is simplified
by hand.  ``method="direct"`` integrates along real rho instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oscquad
from .rhp import LocalParams, f_factor
from .scattering import ScatteringData
from .specfun import pc_env, pc_u0

__all__ = [
    "AlphaQuadratureError",
    "RegionSpec",
    "REGIONS",
    "pc_argument",
    "E_value",
    "dbar_E",
    "alpha3_coeff",
    "alpha12_coeffs",
    "AlphaSet",
    "compute_alpha_set",
    "assemble_alpha1",
    "region_rule",
    "region_integral_oracle",
    "region_f_piece",
    "omega1_terms",
    "alpha_report",
]

S_MAX = 3.3  # e^{-4 S_MAX^2} < 1e-18
_E4 = np.exp(-0.25j * math.pi)
_SQ2 = math.sqrt(2.0)


class AlphaQuadratureError(RuntimeError):
    """Adaptive refinement of an alpha integral hit its cap."""


@dataclass(frozen=True)
class RegionSpec:
    index: int
    phi_lo: float
    phi_hi: float
    a_sign: int  # A(a, .) or A(-a, .)
    y_factor: complex  # PC argument is y_factor * y
    phase_sign: int  # U^2 = e^{phase_sign 4 i t rho^2 e^{2 i phi}} A^2
    psi0: float  # rotated ray: arg rho = psi0 - phi
    graded: str  # phi end where the Gaussian damping vanishes
    conj_side: bool  # f^2 and conjugated densities (lower half plane in z)

    def pa(self, lp: LocalParams) -> complex:
        return lp.a if self.a_sign > 0 else -lp.a

    def const(self, lp: LocalParams) -> complex:
        return lp.region_consts[self.index]


REGIONS: dict[int, RegionSpec] = {
    1: RegionSpec(1, 0.0, math.pi / 4, 1, 1.0, 1, math.pi / 4, "lo", False),
    4: RegionSpec(4, math.pi, 5 * math.pi / 4, 1, -1.0, 1, 5 * math.pi / 4, "lo", False),
    6: RegionSpec(6, -math.pi / 4, 0.0, -1, 1j, -1, -math.pi / 4, "hi", True),
    3: RegionSpec(3, 3 * math.pi / 4, math.pi, -1, -1j, -1, 3 * math.pi / 4, "hi", True),
}


def _spec(region: int) -> RegionSpec:
    try:
        return REGIONS[region]
    except KeyError:
        raise ValueError(f"region must be one of {sorted(REGIONS)}, not {region!r}") from None


def pc_argument(spec: RegionSpec, rho, phi, t: float = 1.0):
    return spec.y_factor * 2 * _SQ2 * _E4 * math.sqrt(t) * np.asarray(rho) * np.exp(1j * np.asarray(phi))


def _A(a: complex, y) -> np.ndarray:
    return np.asarray(pc_env(a, np.asarray(y, complex)))


# --- dbar data -------------------------------------------------------------


def E_value(region: int, lp: LocalParams, sd: ScatteringData, rho, phi) -> np.ndarray:
    """The extension E itself (regions 1 and 6), for finite-difference checks."""
    rho, phi = np.asarray(rho, float), np.asarray(phi, float)
    z = lp.z0 + rho * np.exp(1j * phi)
    u = lp.z0 + rho * np.cos(phi)
    c2 = np.cos(2 * phi)
    if region == 1:
        return c2 * f_factor(lp, sd, z, -2) * sd.r(u) * np.exp(-1j * lp.omega) + (1 - c2) * abs(lp.r0)
    if region == 6:
        return -c2 * f_factor(lp, sd, z, 2) * np.conj(sd.r(u)) * np.exp(1j * lp.omega) - (1 - c2) * abs(lp.r0)
    raise ValueError("E_value is implemented for regions 1 and 6")


def dbar_E(region: int, lp: LocalParams, sd: ScatteringData, rho, phi, force_f_one: bool = False) -> np.ndarray:
    """dbar of the region's extension at z = z0 + rho e^{i phi}, u = Re z."""
    _spec(region)
    rho, phi = np.asarray(rho, float), np.asarray(phi, float)
    if np.any(rho <= 0):
        raise ValueError("rho must be positive")
    z = lp.z0 + rho * np.exp(1j * phi)
    u = lp.z0 + rho * np.cos(phi)
    rad = 1j * np.exp(1j * phi) * np.sin(2 * phi) / rho
    half_c2 = 0.5 * np.cos(2 * phi)
    em, ep = np.exp(-1j * lp.omega), np.exp(1j * lp.omega)
    r0a = abs(lp.r0)
    if region in (1, 4):
        f = 1.0 if force_f_one else f_factor(lp, sd, z, -2)
        if region == 1:
            return rad * (r0a - f * sd.r(u) * em) + half_c2 * f * sd.dr(u) * em
        return rad * (r0a / (1 - r0a**2) - f * sd.q_r(u) * em) + half_c2 * f * sd.dq_r(u) * em
    f = 1.0 if force_f_one else f_factor(lp, sd, z, 2)
    if region == 6:
        return -rad * r0a + rad * f * np.conj(sd.r(u)) * ep - half_c2 * f * np.conj(sd.dr(u)) * ep
    return -rad * r0a / (1 - r0a**2) + rad * f * np.conj(sd.q_r(u)) * ep - half_c2 * f * np.conj(sd.dq_r(u)) * ep


# --- t-free coefficients ---------------------------------------------------


def _rotated_nodes(spec: RegionSpec, n_phi: int, n_s: int):
    xp, wp = np.polynomial.legendre.leggauss(n_phi)
    phi = spec.phi_lo + (spec.phi_hi - spec.phi_lo) * (xp + 1) / 2
    wphi = (spec.phi_hi - spec.phi_lo) / 2 * wp
    edges = np.array([0.0, 1.0, 2.0, S_MAX])
    xs, ws = np.polynomial.legendre.leggauss(n_s)
    a, b = edges[:-1, None], edges[1:, None]
    s = (0.5 * (a + b) + 0.5 * (b - a) * xs).ravel()
    wsr = (0.5 * (b - a) * ws).ravel()
    PHI, S = np.meshgrid(phi, s, indexing="ij")
    W = np.outer(wphi, wsr)
    psi = spec.psi0 - PHI
    rho = S * np.exp(1j * psi)
    return rho.ravel(), PHI.ravel(), (W * np.exp(1j * psi)).ravel()  # d rho = e^{i psi} ds


def _integrand(spec: RegionSpec, lp: LocalParams, kind: str, a_power: int, rho, phi):
    y = pc_argument(spec, rho, phi)
    kern = np.exp(spec.phase_sign * 4j * rho**2 * np.exp(2j * phi))
    pa = spec.pa(lp)
    if kind == "A":
        return np.exp(1j * phi) * np.sin(2 * phi) * kern * _A(pa, y) ** a_power * rho * np.exp(1j * phi)
    if kind == "B":
        return np.sin(2 * phi) * np.cos(phi) * kern * _A(pa + 1, y) * _A(pa, y)
    raise ValueError(kind)


def _double_integral(spec: RegionSpec, lp: LocalParams, kind: str, a_power: int, method: str,
                     tol: float, max_doublings: int = 4) -> complex:
    if method == "rotated":
        n_phi, n_s = 8, 24
        prev = None
        for _ in range(max_doublings + 1):
            rho, phi, w = _rotated_nodes(spec, n_phi, n_s)
            val = complex(np.dot(w, _integrand(spec, lp, kind, a_power, rho, phi)))
            if prev is not None and abs(val - prev) <= tol * max(abs(val), 1e-300):
                return val
            prev = val
            n_phi, n_s = 2 * n_phi, 2 * n_s
        raise AlphaQuadratureError(f"region {spec.index} {kind}-integral did not converge to {tol:g}")
    if method == "direct":
        rule = oscquad.polar_rule(
            spec.phi_lo, spec.phi_hi, lambda p: spec.phase_sign * 4 * np.exp(2j * p), lambda p: math.inf,
            graded=spec.graded, phi_min=1e-9, scale=0.5, rho_data=0.0, n_phi=12,
        )
        y = pc_argument(spec, rule.rho, rule.phi)
        pa = spec.pa(lp)
        e = np.exp(1j * rule.phi)
        if kind == "A":
            vals = e * np.sin(2 * rule.phi) * _A(pa, y) ** a_power * rule.rho * e
        else:
            vals = np.sin(2 * rule.phi) * np.cos(rule.phi) * _A(pa + 1, y) * _A(pa, y)
        return rule.integrate(vals)
    raise ValueError(f"method must be 'rotated' or 'direct', not {method!r}")


def alpha3_coeff(region: int, lp: LocalParams, method: str = "rotated", a_power: int = 2,
                 tol: float = 1e-12) -> complex:
    """alpha_{i,3}: the ln t / t coefficient from region i.

    ``a_power`` only affects regions 3 and 6, whose coefficient is sometimes
    written with A instead of A^2.
    """
    spec = _spec(region)
    if a_power not in (1, 2):
        raise ValueError("a_power must be 1 or 2")
    p = a_power if spec.conj_side else 2
    J = _double_integral(spec, lp, "A", p, method, tol)
    em, ep = np.exp(-1j * lp.omega), np.exp(1j * lp.omega)
    pref = {
        1: -lp.r0 * lp.c1 * em,
        4: lp.q_r0 * lp.c4 * em,
        6: lp.c6 * np.conj(lp.r0) * ep,
        3: -lp.c3 * np.conj(lp.q_r0) * ep,
    }[region]
    return complex(pref * lp.dF0 / (2 * math.pi) * J)


def _trig_moment(lo: float, hi: float) -> complex:
    """int e^{-i phi} sin 2phi cos phi d phi (exact up to rounding with 16 nodes)."""
    x, w = np.polynomial.legendre.leggauss(16)
    p = lo + (hi - lo) * (x + 1) / 2
    return complex((hi - lo) / 2 * np.dot(w, np.exp(-1j * p) * np.sin(2 * p) * np.cos(p)))


def alpha12_coeffs(region: int, lp: LocalParams, method: str = "rotated", literal_q31: bool = False,
                   tol: float = 1e-12) -> tuple[complex, complex]:
    """(alpha_{i,1}, alpha_{i,2}): the 1/t coefficients from the boundary term and the B-integral.

    Region 3's boundary term uses the derivative of conj(q_r); ``literal_q31``
    swaps in conj(q_r(z0)) itself.
    """
    spec = _spec(region)
    pa = spec.pa(lp)
    A20 = pc_u0(pa) ** 2
    m = _trig_moment(spec.phi_lo, spec.phi_hi)
    JB = _double_integral(spec, lp, "B", 2, method, tol)
    em, ep = np.exp(-1j * lp.omega), np.exp(1j * lp.omega)
    a = lp.a
    if region == 1:
        a1 = -A20 * lp.dr0 * lp.c1 * em / 8 * m
        a2 = -lp.c22 * lp.dr0 * JB
    elif region == 4:
        a1 = -A20 * lp.dq_r0 * lp.c4 * em / 8 * m
        a2 = -_SQ2 * lp.dq_r0 * _E4 * (a + 0.5) * lp.c4 * em / 2 * JB
    elif region == 6:
        a1 = lp.c6 * np.conj(lp.dr0) * A20 * ep / 8 * m
        a2 = -_SQ2 * 1j * _E4 * (-a + 0.5) * np.conj(lp.dr0) * lp.c6 * ep / 2 * JB
    else:
        q31 = np.conj(lp.q_r0) if literal_q31 else np.conj(lp.dq_r0)
        a1 = lp.c3 * q31 * A20 * ep / 8 * m
        a2 = _SQ2 * 1j * _E4 * np.conj(lp.dq_r0) * (-a + 0.5) * lp.c3 * ep / 2 * JB
    return complex(a1), complex(a2)


@dataclass(frozen=True)
class AlphaSet:
    z0: float
    coeffs: dict  # region -> (alpha_i1, alpha_i2, alpha_i3)
    method: str = "rotated"
    a_power: int = 2
    diagnostics: dict = field(default_factory=dict)

    def alpha(self, region: int, k: int) -> complex:
        return self.coeffs[region][k - 1]

    @property
    def alpha3_sum(self) -> complex:
        return sum((c[2] for c in self.coeffs.values()), 0j)

    @property
    def cancellation(self) -> dict[str, float]:
        """Relative residuals |alpha13 + alpha43| / max and |alpha33 + alpha63| / max."""
        out = {}
        for i, j in ((1, 4), (3, 6)):
            x, y = self.alpha(i, 3), self.alpha(j, 3)
            scale = max(abs(x), abs(y))
            out[f"{i}{j}"] = abs(x + y) / scale if scale > 0 else 0.0
        return out


def compute_alpha_set(lp: LocalParams, method: str = "rotated", a_power: int = 2, tol: float = 1e-12) -> AlphaSet:
    coeffs = {}
    for i in (1, 4, 6, 3):
        a1, a2 = alpha12_coeffs(i, lp, method, tol=tol)
        coeffs[i] = (a1, a2, alpha3_coeff(i, lp, method, a_power, tol))
    return AlphaSet(lp.z0, coeffs, method, a_power)


def assemble_alpha1(aset: AlphaSet, lp: LocalParams, t: float) -> complex:
    """alpha_1(t) = (2i/pi) e^{i omega} e^{2it theta(z0)} c^{-2} (2 sqrt t)^{-2i nu} sum_i alpha_{i,3}."""
    from .asymptotics import theta_at_z0

    phase = np.exp(1j * lp.omega) * np.exp(2j * t * theta_at_z0(lp.z0))
    scale = np.exp(-2j * lp.nu * math.log(2 * math.sqrt(t)))
    return complex(2j / math.pi * phase * lp.c0 ** (-2) * scale * aset.alpha3_sum)


# --- t-dependent region integrals -------------------------------------------


def region_rule(region: int, lp: LocalParams, sd: ScatteringData, t: float, scale: float = 0.1,
                phi_min: float = 1e-7, n_phi: int = 8) -> oscquad.PolarRule:
    """Polar rule over a region with the kernel e^{+-4it rho^2 e^{2i phi}} folded in."""
    spec = _spec(region)
    rho_data = max(lp.z0 - sd.zs[0], sd.zs[-1] - lp.z0) + 0.5
    return oscquad.polar_rule(
        spec.phi_lo, spec.phi_hi, lambda p: spec.phase_sign * 4 * t * np.exp(2j * p), lambda p: math.inf,
        graded=spec.graded, phi_min=phi_min, scale=scale, rho_data=rho_data, n_phi=n_phi,
    )


_ORACLE_SIGN = {1: 1, 4: -1, 6: -1, 3: 1}


def region_integral_oracle(region: int, lp: LocalParams, sd: ScatteringData, t: float,
                           rule: oscquad.PolarRule | None = None) -> complex:
    """Brute-force int int_{Omega_i} W12 dA with the true f and r."""
    spec = _spec(region)
    rule = rule or region_rule(region, lp, sd, t)
    y = pc_argument(spec, rule.rho, rule.phi, t)
    vals = _A(spec.pa(lp), y) ** 2 * rule.rho * dbar_E(region, lp, sd, rule.rho, rule.phi)
    return _ORACLE_SIGN[region] * spec.const(lp) * rule.integrate(vals)


def region_f_piece(region: int, lp: LocalParams, sd: ScatteringData, t: float,
                   rule: oscquad.PolarRule | None = None) -> complex:
    """Part of the region integral carried by (f^{-+2} - 1) times the density at z0.

    Its leading behaviour is alpha_{i,3} ln t / t.
    """
    spec = _spec(region)
    rule = rule or region_rule(region, lp, sd, t)
    y = pc_argument(spec, rule.rho, rule.phi, t)
    z = lp.z0 + rule.rho * np.exp(1j * rule.phi)
    ang = 1j * np.exp(1j * rule.phi) * np.sin(2 * rule.phi)
    f = f_factor(lp, sd, z, 2 if spec.conj_side else -2)
    core = rule.integrate(ang * _A(spec.pa(lp), y) ** 2 * (f - 1))
    em, ep = np.exp(-1j * lp.omega), np.exp(1j * lp.omega)
    dens = {1: -lp.c1 * em * lp.r0, 4: lp.c4 * em * lp.q_r0,
            6: -lp.c6 * ep * np.conj(lp.r0), 3: lp.c3 * ep * np.conj(lp.q_r0)}[region]
    return complex(dens * core)


def omega1_terms(lp: LocalParams, sd: ScatteringData, t: float, rule: oscquad.PolarRule | None = None) -> dict:
    """The pieces of the Omega1 integral used in the remainder estimates, on one shared rule."""
    spec = REGIONS[1]
    rule = rule or region_rule(1, lp, sd, t)
    rho, phi = rule.rho, rule.phi
    y = pc_argument(spec, rho, phi, t)
    A0 = _A(lp.a, y)
    A2 = A0 * A0
    B = _A(lp.a + 1, y) * A0
    fm2 = f_factor(lp, sd, lp.z0 + rho * np.exp(1j * phi), -2)
    u = lp.z0 + rho * np.cos(phi)
    ru, dru = sd.r(u), sd.dr(u)
    r0, dr0 = lp.r0, lp.dr0
    em = np.exp(-1j * lp.omega)
    pre = lp.c1 * em
    ang = 1j * np.exp(1j * phi) * np.sin(2 * phi)
    s2 = np.sin(2 * phi)
    I = rule.integrate
    out = {
        "I0_tilde": pre * I(ang * A2 * (fm2 - 1) * (ru - r0)),
        "I1_tilde": pre * r0 * I(ang * A2 * (fm2 - 1)),
        "I2_tilde": pre * I(ang * A2 * (ru - r0)),
        "I2_hat": pre / (8 * t) * I(np.exp(-1j * phi) * s2 * A2 * (ru - r0 - rho * dru * np.cos(phi)) / rho**2),
        "I2_bar1": lp.c22 / math.sqrt(t) * dr0 * I(s2 * np.cos(phi) * B),
        "I2_bar2": lp.c22 / math.sqrt(t) * I(s2 * B * (ru - r0 - rho * dr0 * np.cos(phi)) / rho),
        "I3": lp.c1 * em * I(A2 * 0.5 * rho * np.cos(2 * phi) * fm2 * dru),
    }
    out["oracle"] = -(out["I0_tilde"] + out["I1_tilde"] + out["I2_tilde"]) + out["I3"]
    out["n_nodes"] = rule.size
    return {k: (complex(v) if isinstance(v, complex | np.complexfloating) else v) for k, v in out.items()}


def _c(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def alpha_report(aset: AlphaSet, lp: LocalParams, t_values=(10.0, 100.0, 1000.0)) -> dict:
    return {
        "z0": aset.z0,
        "method": aset.method,
        "a_power": aset.a_power,
        "coefficients": {f"alpha_{i}{k}": _c(aset.alpha(i, k)) for i in (1, 3, 4, 6) for k in (1, 2, 3)},
        "alpha3_sum": _c(aset.alpha3_sum),
        "cancellation": aset.cancellation,
        "alpha1": {str(t): _c(assemble_alpha1(aset, lp, t)) for t in t_values},
        "local": lp.to_dict(),
        **aset.diagnostics,
    }
