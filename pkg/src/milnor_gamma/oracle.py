"""High-precision numerical cross-check of the closed-form period vectors.

The oracle never uses the Beta-function closed forms to build a period.  It
integrates the raw line-segment parametrizations

    J = int_0^1 t^(p-1) (1 - t^r)^(q-1) dt

with a tanh-sinh (double exponential) rule, integrates the suspension kernel

    M(lambda) = d/dlambda int_0^lambda (lambda - mu)^(1/2) mu^e dmu
              = 1/2 int_0^lambda (lambda - mu)^(-1/2) mu^e dmu

the same way, and assembles the pairings ``(I(lambda), phi_i) = (1/pi) P_i J_i
M_i(lambda)``.  Solving against the residue pairing gives the coefficients of
``I(lambda)``, and ``Psi_j = c_j Gamma(theta_j + 3/2) / lambda^(theta_j + 1/2)``
is compared with the exact vector.  Gamma and Beta values (from mpmath) are
only used for that final rescaling and for the separate Beta agreement check.

Numbers here are mpmath ``mpf``/``mpc`` values at a stated number of decimal
digits.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import mpmath

from .exactnum import CyclotomicNumber, as_fraction
from .periods import Cycle, catalog_cycles, cycle, psi
from .rootdata import normalize_family, singularity_data

F = Fraction
DEFAULT_DIGITS = 50
ENV_DIGITS = "MILNOR_GAMMA_DIGITS"

__all__ = [
    "DEFAULT_DIGITS",
    "QuadratureError",
    "IntegrandSpec",
    "ResidueSpec",
    "PsiCheckReport",
    "default_digits",
    "gamma_value",
    "beta_value",
    "tanh_sinh",
    "quadrature",
    "integrand_specs",
    "catalog_integrand_specs",
    "beta_agreement",
    "suspension_kernel",
    "numeric_psi_check",
]


class QuadratureError(ArithmeticError):
    """The tanh-sinh rule did not settle at the requested precision."""


def default_digits() -> int:
    """Working precision: ``$MILNOR_GAMMA_DIGITS`` when set, otherwise 50."""
    raw = os.environ.get(ENV_DIGITS)
    if raw is None or raw == "":
        return DEFAULT_DIGITS
    value = int(raw)
    if value < 30:
        raise ValueError(f"{ENV_DIGITS} must be at least 30")
    return value


def _mpf(x: Union[Fraction, int, str]) -> mpmath.mpf:
    q = as_fraction(x)
    return mpmath.mpf(q.numerator) / q.denominator


def gamma_value(x, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    q = as_fraction(x)
    if q <= 0 and q.denominator == 1:
        raise ValueError(f"Gamma has a pole at {q}")
    with mpmath.workdps(digits + 10):
        val = mpmath.gamma(_mpf(q))
    with mpmath.workdps(digits):
        return +val


def beta_value(a, b, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    qa, qb = as_fraction(a), as_fraction(b)
    if qa <= 0 or qb <= 0:
        raise ValueError("beta_value needs positive arguments")
    with mpmath.workdps(digits + 10):
        val = mpmath.beta(_mpf(qa), _mpf(qb))
    with mpmath.workdps(digits):
        return +val


# ---------------------------------------------------------------------------
# tanh-sinh quadrature on [0, 1]
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _level_nodes(dps: int, level: int, u_max: int) -> tuple:
    """Nodes ``(t, 1 - t, weight)`` that are new at ``level`` (step 2^-level)."""
    with mpmath.workdps(dps):
        h = mpmath.mpf(2) ** (-level)
        count = int(u_max * 2**level)
        ks = range(0, count + 1) if level == 0 else range(1, count + 1, 2)
        half_pi = mpmath.pi / 2
        out = []
        for k in ks:
            u = k * h
            s = half_pi * mpmath.sinh(u)
            w = half_pi / 2 * mpmath.cosh(u) / mpmath.cosh(s) ** 2
            e = mpmath.exp(2 * s)
            near_one = e / (1 + e)  # 1/(1+e^(-2s))
            near_zero = 1 / (1 + e)
            out.append((near_one, near_zero, w))
            if k:
                out.append((near_zero, near_one, w))
        return tuple(out)


def _u_max(dps: int, min_exponent: Fraction) -> int:
    """Truncation point where ``t^min_exponent`` has dropped below 10^-(dps+10)."""
    if min_exponent <= 0:
        raise ValueError("endpoint exponents must be positive")
    target = (dps + 10) * mpmath.log(10) / (mpmath.pi * _mpf(min_exponent))
    return int(mpmath.ceil(mpmath.asinh(target))) + 1


def tanh_sinh(
    f: Callable[[mpmath.mpf, mpmath.mpf], mpmath.mpf],
    digits: int = DEFAULT_DIGITS,
    min_exponent: Fraction = F(1, 2),
    max_level: int = 11,
) -> mpmath.mpf:
    """Integrate ``f`` over [0, 1]; ``f(t, 1 - t)`` receives both distances to the endpoints.

    ``min_exponent`` is a lower bound for the integrable endpoint exponents
    (``f ~ t^(a-1)`` with ``a >= min_exponent`` near 0, likewise near 1); it
    fixes how far the node set extends.  Step halving stops when two levels
    agree to ``10^-(digits-10)``.
    """
    dps = digits + 15
    u_max = _u_max(dps, F(min_exponent))
    tol = mpmath.mpf(10) ** (-(digits - 10))
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        prev = None
        for level in range(max_level + 1):
            for t, tc, w in _level_nodes(dps, level, u_max):
                if t and tc:
                    total += w * f(t, tc)
            approx = total * mpmath.mpf(2) ** (-level)
            if prev is not None and level >= 3 and abs(approx - prev) < tol:
                return +approx
            prev = approx
    raise QuadratureError(f"no convergence to {digits} digits after {max_level} levels")


# ---------------------------------------------------------------------------
# Integrand data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegrandSpec:
    """Slot ``slot`` of the pairing vector of ``label``: ``(1/pi) prefactor * J * M``.

    ``J = int_0^1 t^(p-1) (1 - t^r)^(q-1) dt`` and ``M`` is the suspension
    kernel with exponent ``mu_exponent``.
    """

    family: str
    rank: int
    slot: int
    label: Cycle
    p: Fraction
    q: Fraction
    r: int
    prefactor: CyclotomicNumber = field(compare=False)
    mu_exponent: Fraction = F(0)

    def __post_init__(self):
        if self.p <= 0 or self.q <= 0 or self.r < 1:
            raise ValueError("integrand exponents must satisfy p > 0, q > 0, r >= 1")

    def beta_closed_form(self, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
        with mpmath.workdps(digits + 10):
            val = beta_value(self.p / self.r, self.q, digits + 10) / self.r
        with mpmath.workdps(digits):
            return +val


@dataclass(frozen=True)
class ResidueSpec:
    """A slot whose inner period is the constant ``2 pi i * value`` (a small loop residue)."""

    family: str
    rank: int
    slot: int
    label: Cycle
    value: CyclotomicNumber = field(compare=False)
    mu_exponent: Fraction = F(0)


def _z(n: int, p: int) -> CyclotomicNumber:
    return CyclotomicNumber.root_of_unity(n, p)


def integrand_specs(label: Cycle) -> list[Union[IntegrandSpec, ResidueSpec]]:
    """Per-slot integral data for an ``alpha`` label (slots are 1-based)."""
    fam, n, k = label.family, label.rank, label.k
    if label.kind != "alpha":
        raise ValueError("integrand data exists only for alpha cycles")
    a = label.a
    out: list[Union[IntegrandSpec, ResidueSpec]] = []
    half = F(1, 2)
    if fam == "A":
        h = n + 1
        sign = -1 if a % 2 else 1
        for i in range(1, n + 1):
            pre = (_z(h, (k + 1) * i) - _z(h, k * i)).scale(F(sign, h))
            out.append(IntegrandSpec(fam, n, i, label, F(i, h), half, 1, pre, F(i, h) - half))
    elif fam == "D":
        h = 2 * n - 2
        for i in range(1, n):
            m = 2 * i - 1
            out.append(IntegrandSpec(fam, n, i, label, i - half, half, n - 1, _z(h, m * k), F(m, h) - half))
        out.append(ResidueSpec(fam, n, n, label, CyclotomicNumber.one()))
    elif fam in ("E6", "E8"):
        q = 4 if fam == "E6" else 5
        scale = F(1, 12) if fam == "E6" else F(1, 15)
        for i in range(1, q):
            pre = ((1 - _z(3, -2)) * (1 - _z(q, i)) * _z(q, k * i) * _z(3, a)).scale(scale)
            out.append(IntegrandSpec(fam, n, i, label, F(i, q), F(1, 3), 1, pre, F(i, q) - F(2, 3)))
        for j in range(1, q):
            pre = ((1 - _z(3, -1)) * (1 - _z(q, j)) * _z(q, k * j) * _z(3, 2 * a)).scale(scale)
            out.append(IntegrandSpec(fam, n, q - 1 + j, label, F(j, q), F(2, 3), 1, pre, F(j, q) - F(1, 3)))
    else:  # E7
        for i in range(1, 4):
            pre = ((1 - _z(3, -2)) * _z(9, k * (3 * i - 1) - 6 * a)).scale(F(-1, 9))
            out.append(IntegrandSpec(fam, n, i, label, F(i, 3) - F(1, 9), F(1, 3), 1, pre, (i - F(7, 3)) / 3))
        for i in range(4, 7):
            pre = ((1 - _z(3, -1)) * _z(9, k * (3 * (i - 4) + 1) - 3 * a)).scale(F(-1, 9))
            out.append(
                IntegrandSpec(fam, n, i, label, F(i - 4, 3) + F(1, 9), F(2, 3), 1, pre, (i - 4 - F(2, 3)) / 3)
            )
        out.append(ResidueSpec(fam, n, 7, label, CyclotomicNumber.rational(F(-1, 3))))
    return out


def catalog_integrand_specs(family: str, rank: Optional[int] = None) -> list[IntegrandSpec]:
    """Integrand specs of every alpha cycle in the catalog (D_N includes alpha_0)."""
    fam, n = normalize_family(family, rank)
    labels = [c for c in catalog_cycles(fam, n) if c.kind == "alpha"]
    if fam == "D":
        labels = [cycle(fam, n, 0)] + labels
    return [s for lbl in labels for s in integrand_specs(lbl) if isinstance(s, IntegrandSpec)]


@lru_cache(maxsize=None)
def _quadrature_cached(p: Fraction, q: Fraction, r: int, digits: int) -> mpmath.mpf:
    pm1, qm1 = _mpf(p) - 1, _mpf(q) - 1
    half = mpmath.mpf(1) / 2

    def integrand(t, tc):
        if r == 1:
            one_minus = tc
        elif t > half:
            one_minus = -mpmath.expm1(r * mpmath.log1p(-tc))
        else:
            one_minus = 1 - t**r
        return t**pm1 * one_minus**qm1

    return tanh_sinh(integrand, digits, min_exponent=min(p, q))


def quadrature(spec: IntegrandSpec, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """``int_0^1 t^(p-1) (1 - t^r)^(q-1) dt`` by tanh-sinh, absolute error below 10^-(digits-10)."""
    return _quadrature_cached(spec.p, spec.q, spec.r, digits)


def beta_agreement(spec: IntegrandSpec, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """Relative difference between the quadrature and ``(1/r) B(p/r, q)``."""
    with mpmath.workdps(digits + 5):
        closed = spec.beta_closed_form(digits + 5)
        return abs(quadrature(spec, digits) - closed) / abs(closed)


@lru_cache(maxsize=None)
def _kernel_cached(e: Fraction, lam: Fraction, digits: int) -> mpmath.mpf:
    lam_f = _mpf(lam)
    ee = _mpf(e)
    minus_half = -mpmath.mpf(1) / 2

    def integrand(t, tc):
        # mu = lam * t on [0, lam]; the Jacobian lam is applied at the end
        return (lam_f * tc) ** minus_half * (lam_f * t) ** ee

    val = tanh_sinh(integrand, digits, min_exponent=min(F(1, 2), e + 1))
    with mpmath.workdps(digits + 15):
        return val * lam_f / 2


def suspension_kernel(e, lam=1, digits: int = DEFAULT_DIGITS) -> mpmath.mpf:
    """``1/2 int_0^lam (lam - mu)^(-1/2) mu^e dmu`` by quadrature in mu."""
    return _kernel_cached(as_fraction(e), as_fraction(lam), digits)


# ---------------------------------------------------------------------------
# Reconstruction of Psi
# ---------------------------------------------------------------------------


def _d_alpha_expansion(label: Cycle) -> dict[int, Fraction]:
    """Write a D_N label as a rational combination of alpha_0 .. alpha_(N-1)."""
    n, k = label.rank, label.k
    if label.kind == "alpha":
        return {k: F(1)}
    v_n = {0: F(-1, 2), n - 1: F(-1, 2)}
    if label.kind == "v":
        if k == n:
            return v_n
        out = dict(v_n)
        out[k] = out.get(k, F(0)) + 1
        return {j: c for j, c in out.items() if c}
    if k <= n - 2:
        return {k: F(1), k + 1: F(-1)}
    if k == n - 1:
        return {n - 1: F(1)}
    return {0: F(-1)}


@dataclass
class PsiCheckReport:
    family: str
    rank: int
    label: str
    digits: int
    lam: Fraction
    expected: list
    actual: list
    deviations: list

    @property
    def max_deviation(self) -> mpmath.mpf:
        return max(self.deviations) if self.deviations else mpmath.mpf(0)

    def passed(self, tol: float = 1e-10) -> bool:
        return self.max_deviation < tol

    def to_json(self) -> dict:
        def s(x):
            return mpmath.nstr(x, 30, min_fixed=-30, max_fixed=30)

        return {
            "family": self.family,
            "rank": self.rank,
            "label": self.label,
            "digits": self.digits,
            "lambda": str(self.lam),
            "slots": [
                {
                    "slot": i + 1,
                    "expected": [s(e.real), s(e.imag)],
                    "actual": [s(a.real), s(a.imag)],
                    "deviation": mpmath.nstr(d, 5),
                }
                for i, (e, a, d) in enumerate(zip(self.expected, self.actual, self.deviations))
            ],
            "max_deviation": mpmath.nstr(self.max_deviation, 5),
        }


def _pairing_vector(label: Cycle, lam: Fraction, digits: int) -> list:
    n = label.rank
    dps = digits + 15
    with mpmath.workdps(dps):
        out = [mpmath.mpc(0)] * n
        for spec in integrand_specs(label):
            kernel = suspension_kernel(spec.mu_exponent, lam, digits)
            if isinstance(spec, IntegrandSpec):
                inner = spec.prefactor.evaluate(dps) * quadrature(spec, digits)
            else:
                inner = spec.value.evaluate(dps) * 2 * mpmath.pi * mpmath.j
            out[spec.slot - 1] = inner * kernel / mpmath.pi
        return out


def numeric_psi_check(
    family: str,
    rank: Optional[int],
    label: Cycle,
    digits: Optional[int] = None,
    lam: Union[int, Fraction, str] = 1,
) -> PsiCheckReport:
    """Rebuild Psi(label) numerically at ``lambda = lam`` and compare slot by slot."""
    fam, n = normalize_family(family, rank)
    if (label.family, label.rank) != (fam, n):
        raise ValueError("label belongs to another family")
    digits = default_digits() if digits is None else int(digits)
    lam = as_fraction(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    data = singularity_data(fam, n)
    dps = digits + 15
    with mpmath.workdps(dps):
        if fam == "D":
            pairing = [mpmath.mpc(0)] * n
            for k, c in _d_alpha_expansion(label).items():
                part = _pairing_vector(cycle(fam, n, k), lam, digits)
                pairing = [x + _mpf(c) * y for x, y in zip(pairing, part)]
        else:
            pairing = _pairing_vector(label, lam, digits)
        lam_f = _mpf(lam)
        actual = [mpmath.mpc(0)] * n
        for i in range(n):
            j = data.partner(i)
            c_j = pairing[i] / _mpf(data.residue_pairing[i][j])
            theta = _mpf(data.theta[j])
            actual[j] = c_j * mpmath.gamma(theta + mpmath.mpf(3) / 2) / lam_f ** (theta + mpmath.mpf(1) / 2)
        expected = psi(label).values(dps)
        deviations = []
        for e, a in zip(expected, actual):
            scale = abs(e)
            deviations.append(abs(a - e) / scale if scale > mpmath.mpf(10) ** (-digits) else abs(a - e))
    return PsiCheckReport(fam, n, str(label), digits, lam, expected, actual, deviations)
