"""The two concrete models: displaced harmonic oscillator and Swanson model.

Both Hamiltonians reduce in momentum space to -f psi'' + g psi' + h psi =
eps psi with f = (1+beta*p^2)^2, so the point canonical transformation
sends them to a sec^2 potential on a finite box and the spectra follow from
the (A + n sqrt(beta))^2 ladder.  This module supplies the coefficient
sets, the closed-form energies and eigenfunctions, the metric operators
that restore Hermiticity, and the reality threshold of the Swanson model.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .algebra import DeformationParams
from .errors import (
    ComplexSpectrumError,
    ConstraintViolatedError,
    DegenerateModelError,
    DivergenceError,
    DomainError,
    UnsupportedRegimeError,
)
from .inner import QuadratureSpec, eta_inner
from .jacobi import jacobi_eval
from .pct import (
    CoefficientSet,
    EnergyMap,
    QMapHint,
    TransformedProblem,
    secant_squared_levels,
    transform,
)


@dataclass(frozen=True)
class DisplacedOscillatorParams:
    """Harmonic oscillator of mass mu and frequency omega plus the term i*lam*x."""

    deformation: DeformationParams
    mu: float = 1.0
    omega: float = 1.0
    lam: float = 0.0

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError(f"mu must be positive, got {self.mu}")
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")

    @property
    def lam_tilde(self) -> float:
        """Reduced coupling lam/(mu*hbar*omega^2) appearing throughout."""
        d = self.deformation
        return self.lam / (self.mu * d.hbar * self.omega**2)


@dataclass(frozen=True)
class SwansonParams:
    """Quadratic non-Hermitian model omega*ad*a + lam*a^2 + delta*ad^2 + omega/2."""

    deformation: DeformationParams
    m: float = 1.0
    omega: float = 1.0
    lam: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError(f"m must be positive, got {self.m}")
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")
        drive = self.omega - self.lam - self.delta
        if drive == 0:
            raise DegenerateModelError("omega - lam - delta = 0 makes the momentum-space reduction singular")
        if drive < 0:
            raise UnsupportedRegimeError(
                f"omega - lam - delta = {drive} < 0 flips the energy-map orientation; not supported"
            )

    @property
    def drive(self) -> float:
        return self.omega - self.lam - self.delta

    @property
    def c1(self) -> float:
        """Asymmetry coefficient (delta-lam)/(hbar*omega*(omega-lam-delta))."""
        return (self.delta - self.lam) / (self.deformation.hbar * self.omega * self.drive)


@dataclass(frozen=True)
class DerivedSpectralParams:
    """Ladder constant A, sec^2 strength nu, additive offset, and (Swanson) s, kappa.

    For parameters past the reality threshold ``s`` and ``a_const`` are
    complex (principal branch); below it they are real.
    """

    a_const: complex
    nu: float
    offset: float
    s: Optional[complex] = None
    kappa: Optional[float] = None

    @property
    def is_real(self) -> bool:
        return abs(np.imag(self.a_const)) == 0.0


@dataclass(frozen=True)
class MetricFunction:
    """Positive metric weight eta(p) with eta(0) = 1."""

    evaluator: Callable
    closed_form_tag: str = "generic"

    def __call__(self, p):
        return self.evaluator(np.asarray(p, dtype=float))


def gup_q_map_hint(deformation: DeformationParams) -> QMapHint:
    """Closed-form q-map for f = (1+beta*p^2)^2: q = arctan(sqrt(beta) p)/sqrt(beta)."""
    beta = deformation.beta
    if beta == 0:
        return QMapHint(q_of_p=lambda p: np.asarray(p, float), p_of_q=lambda q: np.asarray(q, float),
                        q_min=-np.inf, q_max=np.inf)
    sqb = np.sqrt(beta)
    return QMapHint(
        q_of_p=lambda p: np.arctan(sqb * np.asarray(p, float)) / sqb,
        p_of_q=lambda q: np.tan(sqb * np.asarray(q, float)) / sqb,
        q_min=-np.pi / (2 * sqb),
        q_max=np.pi / (2 * sqb),
    )


# --------------------------------------------------------------------------
# displaced oscillator
# --------------------------------------------------------------------------

def displaced_coefficients(params: DisplacedOscillatorParams) -> CoefficientSet:
    """Momentum-space ODE coefficients of the displaced oscillator."""
    d = params.deformation
    beta, gamma, hbar = d.beta, d.gamma, d.hbar
    mu, omega = params.mu, params.omega
    lt = params.lam_tilde
    h_quad = 1.0 / (hbar**2 * mu**2 * omega**2) - gamma * (beta + gamma)
    h_lin = -2.0 * gamma * lt

    def f(p):
        return (1.0 + beta * p**2) ** 2

    def df(p):
        return 4.0 * beta * p * (1.0 + beta * p**2)

    def d2f(p):
        return 4.0 * beta * (1.0 + 3.0 * beta * p**2)

    def g(p):
        return -2.0 * (1.0 + beta * p**2) * ((gamma + beta) * p + lt)

    def dg(p):
        return -2.0 * (gamma + beta) * (1.0 + 3.0 * beta * p**2) - 4.0 * beta * lt * p

    def h(p):
        return h_quad * p**2 + h_lin * p

    emap = EnergyMap(scale=2.0 / (hbar**2 * mu * omega**2), offset=gamma)
    return CoefficientSet(f=f, df=df, d2f=d2f, g=g, dg=dg, h=h, energy_map=emap)


def displaced_log_rho(params: DisplacedOscillatorParams) -> Callable:
    """log of the similarity factor: rho = (1+beta*p^2)^(-gamma/2beta) * exp(-lt*arctan(...)/sqrt(beta))."""
    d = params.deformation
    beta, gamma = d.beta, d.gamma
    lt = params.lam_tilde
    if beta == 0:
        return lambda p: -lt * np.asarray(p, float)
    sqb = np.sqrt(beta)

    def log_rho(p):
        p = np.asarray(p, dtype=float)
        return -(gamma / (2.0 * beta)) * np.log1p(beta * p**2) - lt * np.arctan(sqb * p) / sqb

    return log_rho


def displaced_spectral(params: DisplacedOscillatorParams) -> DerivedSpectralParams:
    """A, sec^2 strength nu, and the additive potential offset of the displaced model."""
    d = params.deformation
    beta = d.beta
    if beta <= 0:
        raise DomainError("spectral ladder parameters require beta > 0")
    nu = 1.0 / (beta * d.hbar**2 * params.mu**2 * params.omega**2)
    offset = params.lam_tilde**2 - nu + d.gamma
    a_const = 0.5 * (np.sqrt(beta) + np.sqrt(beta + 4.0 * nu))
    return DerivedSpectralParams(a_const=a_const, nu=nu, offset=offset)


def displaced_transform(params: DisplacedOscillatorParams) -> TransformedProblem:
    """Schrodinger form of the displaced model using the closed-form hints."""
    return transform(
        displaced_coefficients(params),
        q_hint=gup_q_map_hint(params.deformation),
        log_rho_hint=displaced_log_rho(params),
    )


def displaced_energy(n: int, params: DisplacedOscillatorParams) -> float:
    """Closed-form E_n; real for every n, beta >= 0 and lam."""
    if n < 0:
        raise DomainError(f"level index must be non-negative, got {n}")
    d = params.deformation
    hbar, beta = d.hbar, d.beta
    mu, omega, lam = params.mu, params.omega, params.lam
    t = beta * hbar * omega * mu / 2.0
    return hbar * omega * (t * (n * n + n + 0.5) + (n + 0.5) * np.sqrt(1.0 + t * t)) + lam**2 / (
        2.0 * mu * omega**2
    )


def displaced_epsilon_levels(params: DisplacedOscillatorParams) -> Callable:
    """n -> eps_n of the transformed problem (ladder plus the potential offset)."""
    sp = displaced_spectral(params)
    ladder = secant_squared_levels(sp.nu, params.deformation.beta)
    return lambda n: ladder(n) + sp.offset


def displaced_metric(params: DisplacedOscillatorParams) -> MetricFunction:
    """Metric eta(p) = exp[2*lam*arctan(sqrt(beta) p)/(hbar*mu*omega^2*sqrt(beta))]."""
    d = params.deformation
    beta = d.beta
    if beta <= 0:
        raise DomainError("the closed-form metric requires beta > 0")
    sqb = np.sqrt(beta)
    lt = params.lam_tilde

    def eta(p):
        return np.exp(2.0 * lt * np.arctan(sqb * p) / sqb)

    metric = MetricFunction(evaluator=eta, closed_form_tag="displaced")
    _assert_generic_agreement(metric, params.deformation, displaced_log_rho(params))
    return metric


# --------------------------------------------------------------------------
# Swanson model
# --------------------------------------------------------------------------

def swanson_coefficients(params: SwansonParams) -> CoefficientSet:
    """Momentum-space ODE coefficients of the Swanson model.

    The mass enters only through the affine eps<->E map; f, g, h are m-free
    because the ladder operators carry the whole 1/(2m) prefactor.
    """
    d = params.deformation
    beta, gamma, hbar = d.beta, d.gamma, d.hbar
    omega, lam, delta = params.omega, params.lam, params.delta
    drive = params.drive
    c1 = params.c1
    h_quad = (omega + lam + delta) / (hbar**2 * omega**2 * drive) - 2.0 * gamma * c1 - gamma**2
    h_w = c1 + 1.0 / (hbar * drive) + gamma

    def f(p):
        return (1.0 + beta * p**2) ** 2

    def df(p):
        return 4.0 * beta * p * (1.0 + beta * p**2)

    def d2f(p):
        return 4.0 * beta * (1.0 + 3.0 * beta * p**2)

    def g(p):
        return -2.0 * (beta + gamma + c1) * (1.0 + beta * p**2) * p

    def dg(p):
        return -2.0 * (beta + gamma + c1) * (1.0 + 3.0 * beta * p**2)

    def h(p):
        return h_quad * p**2 - h_w * (1.0 + beta * p**2)

    emap = EnergyMap(scale=2.0 / (hbar * params.m * omega * drive), offset=-1.0 / (hbar * params.m * drive))
    return CoefficientSet(f=f, df=df, d2f=d2f, g=g, dg=dg, h=h, energy_map=emap)


def swanson_log_rho(params: SwansonParams) -> Callable:
    """log rho = -(gamma + c1)/(2 beta) * log(1 + beta p^2)."""
    d = params.deformation
    beta, gamma = d.beta, d.gamma
    c1 = params.c1
    if beta == 0:
        return lambda p: np.zeros_like(np.asarray(p, float))

    def log_rho(p):
        p = np.asarray(p, dtype=float)
        return -((gamma + c1) / (2.0 * beta)) * np.log1p(beta * p**2)

    return log_rho


def swanson_spectral(params: SwansonParams) -> DerivedSpectralParams:
    """nu, offset, ladder constant A, Jacobi parameter s, and exponent kappa.

    Past the reality threshold 1 + 4 nu/beta turns negative and A, s become
    complex (principal branch); callers that need real bound states must
    check ``is_real``.
    """
    d = params.deformation
    beta = d.beta
    if beta <= 0:
        raise DomainError("spectral ladder parameters require beta > 0")
    hbar = d.hbar
    omega, lam, delta = params.omega, params.lam, params.delta
    drive = params.drive
    denom = beta * hbar**2 * omega**2 * drive**2
    nu = (omega**2 - 4.0 * lam * delta - hbar * omega**2 * beta * drive) / denom
    offset = (4.0 * lam * delta - omega**2) / denom
    root = np.sqrt(complex(beta + 4.0 * nu))
    a_const = 0.5 * (np.sqrt(beta) + root)
    if root.imag == 0:
        a_const = a_const.real
    s = a_const / np.sqrt(beta) - 0.5
    big_b = a_const / np.sqrt(beta)
    kappa = -((d.gamma + params.c1) / (2.0 * beta)) - (big_b.real if np.imag(big_b) == 0 else np.nan) / 2.0
    return DerivedSpectralParams(a_const=a_const, nu=nu, offset=offset, s=s, kappa=kappa)


def swanson_transform(params: SwansonParams) -> TransformedProblem:
    """Schrodinger form of the Swanson model using the closed-form hints."""
    return transform(
        swanson_coefficients(params),
        q_hint=gup_q_map_hint(params.deformation),
        log_rho_hint=swanson_log_rho(params),
    )


def swanson_energy(n: int, params: SwansonParams) -> complex:
    """Closed-form E_n; complex (conjugate-pair member) past the reality threshold.

    Returns a real float when the square-root argument is non-negative and a
    complex value (principal branch, positive imaginary part) otherwise.
    """
    if n < 0:
        raise DomainError(f"level index must be non-negative, got {n}")
    d = params.deformation
    t = d.hbar * params.m * params.omega * d.beta * params.drive / 2.0
    arg = (params.omega - t) ** 2 - 4.0 * params.lam * params.delta
    quad = t * (n * n + n + 0.5)
    if arg >= 0:
        return quad + (n + 0.5) * np.sqrt(arg)
    return quad + (n + 0.5) * 1j * np.sqrt(-arg)


def swanson_reality_margin(params: SwansonParams) -> float:
    """Left side of the reality constraint; >= 0 iff the spectrum is real."""
    d = params.deformation
    t = d.hbar * params.m * params.omega * d.beta * params.drive / 2.0
    return (params.omega - t) ** 2 - 4.0 * params.lam * params.delta


def swanson_beta_c(params: SwansonParams) -> Optional[float]:
    """Critical deformation beta_c = 2(omega - 2 sqrt(lam*delta))/(m*hbar*omega*(omega-lam-delta)).

    Returns None when lam*delta < 0 (the spectrum stays real for every beta,
    so there is no transition).  Raises when omega - 2 sqrt(lam*delta) <= 0,
    where the constraint cannot be met at any beta >= 0.
    """
    d = params.deformation
    prod = params.lam * params.delta
    if prod < 0:
        return None
    head = params.omega - 2.0 * np.sqrt(prod)
    if head <= 0:
        raise ConstraintViolatedError(
            f"omega - 2*sqrt(lam*delta) = {head} <= 0: reality fails for every beta"
        )
    return 2.0 * head / (params.m * d.hbar * params.omega * params.drive)


# --------------------------------------------------------------------------
# eigenfunctions (canonical and printed cross-check forms)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Wavefunction:
    """Closed-form eigenfunction N * exp(a1*u(p)) * (1+beta*p^2)^a2 * P_n^(alpha,alpha)(z(p)).

    Here u(p) = arctan(sqrt(beta) p)/sqrt(beta).  The canonical argument is
    z = sqrt(beta) p/sqrt(1+beta*p^2) (what the transformation pipeline
    produces); ``printed_argument`` switches to z = sqrt(beta) p/(1+beta*p^2)
    for cross-checking the published closed form.  First and second
    derivatives are analytic (chain rule plus the Jacobi parameter-shift
    derivative), as required by the ODE-residual check.
    """

    n: int
    beta: float
    a1: float
    a2: float
    alpha: float
    energy: complex = np.nan
    epsilon: float = np.nan
    norm: float = 1.0
    printed_argument: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"level index must be non-negative, got {self.n}")
        if self.beta <= 0:
            raise DomainError("closed-form eigenfunctions require beta > 0")

    def _z(self, p, w):
        sqb = np.sqrt(self.beta)
        if self.printed_argument:
            return sqb * p / w, sqb * (1.0 - self.beta * p**2) / w**2, 2.0 * sqb * self.beta * p * (
                self.beta * p**2 - 3.0
            ) / w**3
        return sqb * p / np.sqrt(w), sqb * w ** (-1.5), -3.0 * self.beta * sqb * p * w ** (-2.5)

    def _jacobi(self, z):
        n, a = self.n, self.alpha
        pn = jacobi_eval(n, a, a, z)
        dpn = 0.5 * (n + 2 * a + 1) * jacobi_eval(n - 1, a + 1, a + 1, z) if n >= 1 else np.zeros_like(z)
        d2pn = (
            0.25 * (n + 2 * a + 1) * (n + 2 * a + 2) * jacobi_eval(n - 2, a + 2, a + 2, z)
            if n >= 2
            else np.zeros_like(z)
        )
        return pn, dpn, d2pn

    def _pieces(self, p):
        p = np.asarray(p, dtype=float)
        w = 1.0 + self.beta * p**2
        sqb = np.sqrt(self.beta)
        u = np.arctan(sqb * p) / sqb
        log_env = self.a1 * u + self.a2 * np.log(w)
        dlog = (self.a1 + 2.0 * self.a2 * self.beta * p) / w
        d2log = (2.0 * self.a2 * self.beta * w - (self.a1 + 2.0 * self.a2 * self.beta * p) * 2.0 * self.beta * p) / w**2
        env = self.norm * np.exp(log_env)
        z, dz, d2z = self._z(p, w)
        pn, dpn, d2pn = self._jacobi(z)
        return env, dlog, d2log, pn, dpn, d2pn, dz, d2z

    def __call__(self, p):
        env, _, _, pn, _, _, _, _ = self._pieces(p)
        return env * pn

    def derivative(self, p):
        env, dlog, _, pn, dpn, _, dz, _ = self._pieces(p)
        return env * (dlog * pn + dz * dpn)

    def second_derivative(self, p):
        env, dlog, d2log, pn, dpn, d2pn, dz, d2z = self._pieces(p)
        return env * ((dlog**2 + d2log) * pn + (2.0 * dlog * dz + d2z) * dpn + dz**2 * d2pn)


def _normalize(wave: Wavefunction, eta: MetricFunction, deformation: DeformationParams,
               spec: QuadratureSpec) -> Wavefunction:
    norm2 = eta_inner(wave, wave, eta, deformation, spec).real
    if not np.isfinite(norm2) or norm2 <= 0:
        raise DivergenceError(f"eigenfunction has no finite positive metric norm (got {norm2})")
    return Wavefunction(
        n=wave.n, beta=wave.beta, a1=wave.a1, a2=wave.a2, alpha=wave.alpha,
        energy=wave.energy, epsilon=wave.epsilon,
        norm=wave.norm / np.sqrt(norm2), printed_argument=wave.printed_argument,
    )


def displaced_wavefunction(
    n: int, params: DisplacedOscillatorParams, spec: QuadratureSpec = QuadratureSpec(), normalize: bool = True
) -> Wavefunction:
    """Canonical eigenfunction rho(p) * phi_n(q(p)), metric-normalized by default."""
    d = params.deformation
    if d.beta <= 0:
        raise DomainError("closed-form eigenfunctions require beta > 0")
    sp = displaced_spectral(params)
    big_b = sp.a_const / np.sqrt(d.beta)
    wave = Wavefunction(
        n=n,
        beta=d.beta,
        a1=-params.lam_tilde,
        a2=-d.gamma / (2.0 * d.beta) - big_b / 2.0,
        alpha=big_b - 0.5,
        energy=displaced_energy(n, params),
        epsilon=displaced_epsilon_levels(params)(n),
    )
    if not normalize:
        return wave
    return _normalize(wave, displaced_metric(params), d, spec)


def displaced_printed_wavefunction(n: int, params: DisplacedOscillatorParams) -> Wavefunction:
    """The published p-space closed form (unnormalized), kept for cross-checks only.

    Its envelope exponent carries the full A/sqrt(beta) (twice the canonical
    value) and its Jacobi argument is sqrt(beta) p/(1+beta*p^2); the
    ODE-residual check quantifies the discrepancy with the canonical form.
    """
    d = params.deformation
    sp = displaced_spectral(params)
    big_b = sp.a_const / np.sqrt(d.beta)
    return Wavefunction(
        n=n,
        beta=d.beta,
        a1=-params.lam_tilde,
        a2=-d.gamma / (2.0 * d.beta) - big_b,
        alpha=big_b - 0.5,
        energy=displaced_energy(n, params),
        epsilon=displaced_epsilon_levels(params)(n),
        printed_argument=True,
    )


def swanson_wavefunction(
    n: int, params: SwansonParams, spec: QuadratureSpec = QuadratureSpec(), normalize: bool = True
) -> Wavefunction:
    """Canonical Swanson eigenfunction; only defined below the reality threshold."""
    d = params.deformation
    if d.beta <= 0:
        raise DomainError("closed-form eigenfunctions require beta > 0")
    sp = swanson_spectral(params)
    if not sp.is_real:
        raise ComplexSpectrumError(
            "beta is at or past the reality threshold; bound-state eigenfunctions are not real-parameter Jacobi forms"
        )
    big_b = float(np.real(sp.a_const)) / np.sqrt(d.beta)
    ladder = secant_squared_levels(sp.nu, d.beta)
    eps = float(ladder(n) + sp.offset)
    wave = Wavefunction(
        n=n,
        beta=d.beta,
        a1=0.0,
        a2=-(d.gamma + params.c1) / (2.0 * d.beta) - big_b / 2.0,
        alpha=big_b - 0.5,
        energy=swanson_energy(n, params),
        epsilon=eps,
    )
    if not normalize:
        return wave
    return _normalize(wave, swanson_metric(params), d, spec)


def swanson_printed_wavefunction(n: int, params: SwansonParams) -> Wavefunction:
    """Published p-space closed form of the Swanson eigenfunction (cross-check only)."""
    d = params.deformation
    sp = swanson_spectral(params)
    if not sp.is_real:
        raise ComplexSpectrumError("no real closed form past the reality threshold")
    big_b = float(np.real(sp.a_const)) / np.sqrt(d.beta)
    ladder = secant_squared_levels(sp.nu, d.beta)
    return Wavefunction(
        n=n,
        beta=d.beta,
        a1=0.0,
        a2=-(d.gamma + params.c1) / (2.0 * d.beta) - big_b,
        alpha=big_b - 0.5,
        energy=swanson_energy(n, params),
        epsilon=float(ladder(n) + sp.offset),
        printed_argument=True,
    )


def swanson_metric(params: SwansonParams) -> MetricFunction:
    """Metric eta(p) = (1+beta*p^2)^[(delta-lam)/(hbar*omega*beta*(omega-lam-delta))]."""
    d = params.deformation
    beta = d.beta
    if beta <= 0:
        raise DomainError("the closed-form metric requires beta > 0")
    exponent = params.c1 / beta

    def eta(p):
        return (1.0 + beta * p**2) ** exponent

    metric = MetricFunction(evaluator=eta, closed_form_tag="swanson")
    _assert_generic_agreement(metric, params.deformation, swanson_log_rho(params))
    return metric


# --------------------------------------------------------------------------
# generic metric path
# --------------------------------------------------------------------------

def generic_metric(deformation: DeformationParams, log_rho: Callable) -> MetricFunction:
    """Generic metric (1+beta*p^2)^(-gamma/beta) * exp(-2 * Re int chi).

    ``log_rho`` is the (real) integral of chi; for both models it has a
    closed form, so this path is exact and serves as an independent check on
    the model-specific formulas.
    """
    beta, gamma = deformation.beta, deformation.gamma
    if beta <= 0:
        raise DomainError("the generic metric requires beta > 0")

    def eta(p):
        p = np.asarray(p, dtype=float)
        return (1.0 + beta * p**2) ** (-gamma / beta) * np.exp(-2.0 * np.real(log_rho(p)))

    return MetricFunction(evaluator=eta, closed_form_tag="generic")


def _assert_generic_agreement(metric: MetricFunction, deformation: DeformationParams, log_rho: Callable):
    generic = generic_metric(deformation, log_rho)
    p = np.linspace(-7.0, 7.0, 11)
    a, b = metric(p), generic(p)
    rel = np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300))
    if rel > 1e-10:
        raise ConstraintViolatedError(f"closed-form metric disagrees with the generic formula (rel {rel:.2e})")
