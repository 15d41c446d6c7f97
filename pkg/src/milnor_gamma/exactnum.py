"""Exact arithmetic in cyclotomic fields and products of Gamma values.

Two value types live here.

:class:`CyclotomicNumber` is an element of Q(zeta_n) stored in the power
basis of Q[x]/(Phi_n).  Numbers of different orders are lifted to the lcm of
their orders before any arithmetic, so every root of unity that shows up in
the period formulas can be mixed freely.

:class:`GammaMonomial` is a positive real constant of the shape
``r * pi^(s/2) * prod Gamma(p/q)^e`` kept in a canonical form so that equality
is a syntactic comparison.  :func:`gamma_reflect` cancels complementary pairs
``Gamma(x) Gamma(1-x) = pi / sin(pi x)`` and moves the sine into the
cyclotomic field, which is how pairing values collapse to rationals.

:class:`GaugedVector` couples the two: one cyclotomic coefficient per slot and
one fixed gauge constant per slot.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

import mpmath

RationalLike = Union[int, Fraction, str]

__all__ = [
    "as_fraction",
    "euler_phi",
    "cyclotomic_polynomial",
    "CyclotomicNumber",
    "cyc_from_root_of_unity",
    "cyc_arith",
    "imag_unit",
    "sqrt3",
    "cos_pi",
    "sin_pi",
    "GammaMonomial",
    "gamma_mul",
    "gamma_reflect",
    "GaugedVector",
]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# ---------------------------------------------------------------------------
# Cyclotomic polynomials and reduction tables
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi needs a positive integer")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials (coefficients low to high, monic divisor)."""
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for k in range(len(quot) - 1, -1, -1):
        c = num[k + dd]
        quot[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    if any(num[:dd]):
        raise ArithmeticError("polynomial division left a remainder")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, constant term first."""
    if n < 1:
        raise ValueError("cyclotomic polynomials are indexed by positive integers")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Sparse rows: ``table[k]`` lists ``(index, coeff)`` of x^k mod Phi_n, 0 <= k < n."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    vec = [0] * deg
    vec[0] = 1
    for _ in range(n):
        rows.append(tuple((i, c) for i, c in enumerate(vec) if c))
        top = vec[-1]
        vec = [0] + vec[:-1]
        if top:
            for i in range(deg):
                vec[i] -= top * phi[i]
    return tuple(rows)


# ---------------------------------------------------------------------------
# CyclotomicNumber
# ---------------------------------------------------------------------------


class CyclotomicNumber:
    """An element of Q(zeta_n) in the power basis ``1, zeta_n, ..., zeta_n^(phi(n)-1)``.

    Instances are immutable.  Arithmetic with ints and Fractions is allowed on
    either side.  Equality lifts both operands to a common order, so
    ``CyclotomicNumber.root_of_unity(4, 2) == -1`` holds.  Instances are not
    hashable because equal values may be stored at different orders.
    """

    __slots__ = ("order", "coeffs")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, order: int, coeffs: Iterable[RationalLike]):
        order = int(order)
        if order < 1:
            raise ValueError("order must be a positive integer")
        vec = tuple(as_fraction(c) for c in coeffs)
        if len(vec) != euler_phi(order):
            raise ValueError(
                f"order {order} needs {euler_phi(order)} coefficients, got {len(vec)}"
            )
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", vec)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def rational(cls, value: RationalLike, order: int = 1) -> "CyclotomicNumber":
        vec = [Fraction(0)] * euler_phi(order)
        vec[0] = as_fraction(value)
        return cls(order, vec)

    @classmethod
    def zero(cls, order: int = 1) -> "CyclotomicNumber":
        return cls.rational(0, order)

    @classmethod
    def one(cls, order: int = 1) -> "CyclotomicNumber":
        return cls.rational(1, order)

    @classmethod
    def root_of_unity(cls, order: int, power: int) -> "CyclotomicNumber":
        """zeta_order ** power, stored at the exact order of that root."""
        order = int(order)
        if order < 1:
            raise ValueError("order must be a positive integer")
        power = int(power) % order
        g = gcd(order, power) if power else order
        n, p = order // g, power // g
        return cls._from_exponents(n, {p: Fraction(1)})

    @classmethod
    def _from_exponents(cls, n: int, terms: dict) -> "CyclotomicNumber":
        """Project ``sum c_k zeta_n^k`` (any integer k) onto the power basis."""
        table = _power_table(n)
        out = [Fraction(0)] * euler_phi(n)
        for k, c in terms.items():
            if c:
                for idx, t in table[k % n]:
                    out[idx] += c * t
        return cls(n, out)

    # -- structure --------------------------------------------------------

    def lift(self, order: int) -> "CyclotomicNumber":
        """The same value expressed in Q(zeta_order); ``self.order`` must divide it."""
        order = int(order)
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} into order {order}")
        step = order // self.order
        table = _power_table(order)
        out = [Fraction(0)] * euler_phi(order)
        for j, c in enumerate(self.coeffs):
            if c:
                for idx, t in table[j * step]:
                    out[idx] += c * t
        return CyclotomicNumber(order, out)

    def _coerce(self, other) -> "CyclotomicNumber | None":
        if isinstance(other, CyclotomicNumber):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CyclotomicNumber.rational(other, 1)
        return None

    @staticmethod
    def _align(a: "CyclotomicNumber", b: "CyclotomicNumber"):
        if a.order == b.order:
            return a, b
        m = _lcm(a.order, b.order)
        return a.lift(m), b.lift(m)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def galois(self, k: int) -> "CyclotomicNumber":
        """Apply the automorphism zeta_n -> zeta_n^k (k coprime to n)."""
        n = self.order
        if gcd(k % n or n, n) != 1 and n > 1:
            raise ValueError(f"{k} is not a unit modulo {n}")
        terms: dict[int, Fraction] = {}
        for j, c in enumerate(self.coeffs):
            if c:
                e = (j * k) % n
                terms[e] = terms.get(e, Fraction(0)) + c
        return CyclotomicNumber._from_exponents(n, terms)

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1)

    # -- arithmetic -------------------------------------------------------

    def __neg__(self):
        return CyclotomicNumber(self.order, [-c for c in self.coeffs])

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.order == 1 and self.order != 1:
            vec = list(self.coeffs)
            vec[0] += o.coeffs[0]
            return CyclotomicNumber(self.order, vec)
        a, b = self._align(self, o)
        return CyclotomicNumber(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, q: RationalLike) -> "CyclotomicNumber":
        q = as_fraction(q)
        return CyclotomicNumber(self.order, [q * c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        if other.order == 1:
            return self.scale(other.coeffs[0])
        if self.order == 1:
            return other.scale(self.coeffs[0])
        a, b = self._align(self, other)
        n = a.order
        acc = [Fraction(0)] * n
        bnz = [(j, c) for j, c in enumerate(b.coeffs) if c]
        for i, ci in enumerate(a.coeffs):
            if ci:
                for j, cj in bnz:
                    acc[(i + j) % n] += ci * cj
        return CyclotomicNumber._from_exponents(n, {k: v for k, v in enumerate(acc) if v})

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CyclotomicNumber.rational(1 / self.coeffs[0], self.order)
        n = self.order
        d = len(self.coeffs)
        zeta = CyclotomicNumber.root_of_unity(n, 1).lift(n)
        # columns: coefficient vectors of self * zeta^j
        cols = []
        cur = self
        for _ in range(d):
            cols.append(cur.coeffs)
            cur = cur * zeta
        rows = [[cols[j][i] for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        sol = _solve_augmented(rows, d)
        return CyclotomicNumber(n, sol)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(1 / Fraction(other))
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int):
        exponent = int(exponent)
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = CyclotomicNumber.one(self.order)
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._align(self, o)
        return a.coeffs == b.coeffs

    def __bool__(self):
        return not self.is_zero()

    # -- numerics and I/O ---------------------------------------------------

    def evaluate(self, dps: int = 50) -> mpmath.mpc:
        """Numerical value as an mpmath complex at ``dps`` decimal digits."""
        with mpmath.workdps(dps):
            total = mpmath.mpc(0)
            for j, c in enumerate(self.coeffs):
                if c:
                    total += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(
                        mpmath.mpf(2 * j) / self.order
                    )
            return +total

    def __complex__(self):
        return complex(self.evaluate(20))

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [_frac_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CyclotomicNumber":
        return cls(int(data["order"]), [Fraction(c) for c in data["coeffs"]])

    def __repr__(self):
        return f"CyclotomicNumber({self.order}, [{', '.join(_frac_str(c) for c in self.coeffs)}])"

    def __str__(self):
        parts = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            if j == 0:
                parts.append(_frac_str(c))
                continue
            mono = f"z{self.order}" if j == 1 else f"z{self.order}^{j}"
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{_frac_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _solve_augmented(rows: list[list[Fraction]], n: int) -> list[Fraction]:
    """Gauss-Jordan on an n x (n+1) augmented system; raises if singular."""
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular linear system")
        rows[col], rows[piv] = rows[piv], rows[col]
        pr = rows[col]
        inv = 1 / pr[col]
        pr[:] = [x * inv for x in pr]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rr = rows[r]
                for c in range(col, n + 1):
                    if pr[c]:
                        rr[c] -= f * pr[c]
    return [rows[i][n] for i in range(n)]


def cyc_from_root_of_unity(order: int, power: int) -> CyclotomicNumber:
    """zeta_order ** power in canonical form."""
    return CyclotomicNumber.root_of_unity(order, power)


def cyc_arith(a: CyclotomicNumber, b: CyclotomicNumber, op: str) -> CyclotomicNumber:
    """Field operation by name: ``add``, ``sub``, ``mul`` or ``div``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def imag_unit() -> CyclotomicNumber:
    return CyclotomicNumber.root_of_unity(4, 1)


def sqrt3() -> CyclotomicNumber:
    """The positive square root of 3, as zeta_12 + zeta_12^-1."""
    return CyclotomicNumber.root_of_unity(12, 1) + CyclotomicNumber.root_of_unity(12, -1)


def cos_pi(x: RationalLike) -> CyclotomicNumber:
    """cos(pi x) for rational x, exactly."""
    x = as_fraction(x)
    n = 2 * x.denominator
    z = CyclotomicNumber.root_of_unity(n, x.numerator)
    return (z + z.conjugate()).scale(Fraction(1, 2))


def sin_pi(x: RationalLike) -> CyclotomicNumber:
    """sin(pi x) for rational x, exactly: (zeta^p - zeta^-p) / 2i."""
    x = as_fraction(x)
    n = 2 * x.denominator
    z = CyclotomicNumber.root_of_unity(n, x.numerator)
    return ((z - z.conjugate()) * imag_unit()).scale(Fraction(-1, 2))


# ---------------------------------------------------------------------------
# GammaMonomial
# ---------------------------------------------------------------------------


class GammaMonomial:
    """``rational * pi^(pi_half/2) * prod Gamma(arg)^exp`` in canonical form.

    Arguments are shifted into (0, 1) with Gamma(x+1) = x Gamma(x), Gamma(1)
    disappears and Gamma(1/2) becomes pi^(1/2).  Factors are sorted by
    argument and zero exponents dropped, so ``==`` compares canonical forms.
    """

    __slots__ = ("rational", "pi_half", "gammas")

    def __init__(
        self,
        rational: RationalLike = 1,
        pi_half: int = 0,
        gammas: Iterable[tuple[RationalLike, int]] = (),
    ):
        r = as_fraction(rational)
        if r == 0:
            raise ValueError("a GammaMonomial cannot be zero")
        s = int(pi_half)
        acc: dict[Fraction, int] = {}
        for arg, exp in gammas:
            x = as_fraction(arg)
            e = int(exp)
            if x <= 0:
                raise ValueError(f"Gamma has a pole or is excluded at {x}")
            if e == 0:
                continue
            while x > 1:
                x -= 1
                r *= x**e
            if x == 1:
                continue
            if x == Fraction(1, 2):
                s += e
                continue
            acc[x] = acc.get(x, 0) + e
        object.__setattr__(self, "rational", r)
        object.__setattr__(self, "pi_half", s)
        object.__setattr__(
            self, "gammas", tuple(sorted((x, e) for x, e in acc.items() if e))
        )

    def __setattr__(self, name, value):
        raise AttributeError("GammaMonomial is immutable")

    @classmethod
    def gamma(cls, x: RationalLike, exp: int = 1) -> "GammaMonomial":
        return cls(1, 0, [(x, exp)])

    @classmethod
    def pi_power(cls, half_exponent: int) -> "GammaMonomial":
        return cls(1, half_exponent)

    def is_rational(self) -> bool:
        return self.pi_half == 0 and not self.gammas

    def transcendental_part(self) -> "GammaMonomial":
        return GammaMonomial(1, self.pi_half, self.gammas)

    def _coerce(self, other):
        if isinstance(other, GammaMonomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GammaMonomial(other)
        return None

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GammaMonomial(
            self.rational * o.rational, self.pi_half + o.pi_half, self.gammas + o.gammas
        )

    __rmul__ = __mul__

    def inverse(self) -> "GammaMonomial":
        return GammaMonomial(1 / self.rational, -self.pi_half, [(x, -e) for x, e in self.gammas])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        n = int(n)
        return GammaMonomial(self.rational**n, self.pi_half * n, [(x, e * n) for x, e in self.gammas])

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.rational, self.pi_half, self.gammas) == (o.rational, o.pi_half, o.gammas)

    def __hash__(self):
        return hash((self.rational, self.pi_half, self.gammas))

    def evaluate(self, dps: int = 50) -> mpmath.mpf:
        with mpmath.workdps(dps + 5):
            val = mpmath.mpf(self.rational.numerator) / self.rational.denominator
            if self.pi_half:
                val *= mpmath.sqrt(mpmath.pi) ** self.pi_half
            for x, e in self.gammas:
                val *= mpmath.gamma(mpmath.mpf(x.numerator) / x.denominator) ** e
        with mpmath.workdps(dps):
            return +val

    def __float__(self):
        return float(self.evaluate(20))

    def to_json(self) -> dict:
        return {
            "rational": _frac_str(self.rational),
            "pi_half": self.pi_half,
            "gammas": [{"arg": _frac_str(x), "exp": e} for x, e in self.gammas],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GammaMonomial":
        return cls(
            Fraction(data["rational"]),
            int(data["pi_half"]),
            [(Fraction(g["arg"]), int(g["exp"])) for g in data["gammas"]],
        )

    def __repr__(self):
        return f"GammaMonomial({self})"

    def __str__(self):
        parts = []
        if self.rational != 1 or (not self.pi_half and not self.gammas):
            parts.append(_frac_str(self.rational))
        s = self.pi_half
        if s == 1:
            parts.append("pi^(1/2)")
        elif s == 2:
            parts.append("pi")
        elif s and s % 2 == 0:
            parts.append(f"pi^{s // 2}")
        elif s:
            parts.append(f"pi^({s}/2)")
        for x, e in self.gammas:
            parts.append(f"G({_frac_str(x)})" + ("" if e == 1 else f"^{e}"))
        return "*".join(parts)


def gamma_mul(a: GammaMonomial, b: GammaMonomial) -> GammaMonomial:
    return a * b


def gamma_reflect(a: GammaMonomial) -> tuple[GammaMonomial, CyclotomicNumber]:
    """Cancel every pair Gamma(x)Gamma(1-x) into pi / sin(pi x).

    Returns the reduced monomial together with the product of the
    ``1/sin(pi x)`` factors (or their inverses, for pairs with negative
    exponents) as a cyclotomic number.
    """
    acc = dict(a.gammas)
    pi_half = a.pi_half
    alg = CyclotomicNumber.one()
    for x in sorted(acc):
        if x >= Fraction(1, 2):
            break
        y = 1 - x
        ex, ey = acc.get(x, 0), acc.get(y, 0)
        if ex == 0 or ey == 0 or (ex > 0) != (ey > 0):
            continue
        sign = 1 if ex > 0 else -1
        k = min(abs(ex), abs(ey))
        acc[x] -= sign * k
        acc[y] -= sign * k
        pi_half += 2 * sign * k
        alg = alg * sin_pi(x) ** (-sign * k)
    return GammaMonomial(a.rational, pi_half, acc.items()), alg


# ---------------------------------------------------------------------------
# Vectors with per-slot gauge constants
# ---------------------------------------------------------------------------


Scalar = Union[int, Fraction, CyclotomicNumber]


class GaugedVector:
    """Slot ``i`` has value ``coeffs[i] * gauges[i]``; the gauges are fixed by the ambient space.

    Subclasses describe the ambient space through :meth:`space` and rebuild
    themselves through :meth:`_with_coeffs`.  Arithmetic is only defined
    between vectors of the same space.
    """

    __slots__ = ("coeffs", "gauges")

    def __init__(self, coeffs: Sequence[CyclotomicNumber], gauges: Sequence[GammaMonomial]):
        if len(coeffs) != len(gauges):
            raise ValueError("one gauge per coefficient is required")
        self.coeffs = tuple(coeffs)
        self.gauges = tuple(gauges)

    def space(self) -> tuple:
        return (type(self).__name__, self.gauges)

    def _with_coeffs(self, coeffs) -> "GaugedVector":
        return type(self)(coeffs, self.gauges)

    def _check(self, other: "GaugedVector"):
        if not isinstance(other, GaugedVector) or other.space() != self.space():
            raise ValueError("vectors live in different spaces")

    def __len__(self):
        return len(self.coeffs)

    def __add__(self, other):
        self._check(other)
        return self._with_coeffs([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return self._with_coeffs([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return self._with_coeffs([-a for a in self.coeffs])

    def __mul__(self, scalar: Scalar):
        if isinstance(scalar, GaugedVector):
            return NotImplemented
        return self._with_coeffs([a * scalar for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GaugedVector) or other.space() != self.space():
            return NotImplemented
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def values(self, dps: int = 50) -> list:
        """Numerical slot values ``coeff * gauge``."""
        with mpmath.workdps(dps):
            return [c.evaluate(dps) * g.evaluate(dps) for c, g in zip(self.coeffs, self.gauges)]

    def lifted(self, order: int) -> "GaugedVector":
        return self._with_coeffs([c.lift(order) for c in self.coeffs])
