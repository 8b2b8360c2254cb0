"""Closed-form tiling counts in exact arithmetic.

Integer hyperfactorials ``H(n) = 0! 1! ... (n-1)!`` are plain ints. Half-integer
arguments appear in the cored-hexagon formula when the core size is odd; they
are evaluated as :class:`PiMonomial` values ``q * pi**(t/2)`` using
``H(n + 1/2) = prod_{k<n} Gamma(k + 3/2)``. Every formula here has as many
half-integer factors above the line as below, so the pi powers cancel and the
choice of normalisation drops out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Tuple, Union

from .errors import (
    BadDentPositions,
    DivisionByZero,
    InvalidInput,
    NegativeArgument,
    NonIntegralResult,
    PreconditionViolated,
)
from .regions import FernSpec, semihexagon_dents

Number = Union[int, Fraction]


@lru_cache(maxsize=None)
def hyperfactorial(n: int) -> int:
    if n < 0:
        raise NegativeArgument(f"hyperfactorial of negative argument {n}")
    result = 1
    factorial = 1
    for j in range(1, n):
        factorial *= j
        result *= factorial
    return result


@lru_cache(maxsize=None)
def double_factorial(n: int) -> int:
    result = 1
    for j in range(n, 1, -2):
        result *= j
    return result


@dataclass(frozen=True)
class PiMonomial:
    """Exact value ``q * pi**(t/2)``."""

    q: Fraction
    t: int = 0

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))

    def __mul__(self, other: Union["PiMonomial", Number]) -> "PiMonomial":
        if isinstance(other, PiMonomial):
            return PiMonomial(self.q * other.q, self.t + other.t)
        return PiMonomial(self.q * other, self.t)

    __rmul__ = __mul__

    def __truediv__(self, other: Union["PiMonomial", Number]) -> "PiMonomial":
        if isinstance(other, PiMonomial):
            return PiMonomial(self.q / other.q, self.t - other.t)
        return PiMonomial(self.q / other, self.t)

    def __pow__(self, n: int) -> "PiMonomial":
        return PiMonomial(self.q**n, self.t * n)

    @property
    def is_rational(self) -> bool:
        return self.t == 0

    @property
    def is_integral(self) -> bool:
        return self.t == 0 and self.q.denominator == 1 and self.q >= 0

    def to_fraction(self) -> Fraction:
        if self.t != 0:
            raise NonIntegralResult(f"value {self} keeps a factor pi^({self.t}/2)")
        return self.q

    def __str__(self) -> str:
        return str(self.q) if self.t == 0 else f"{self.q}*pi^({self.t}/2)"


@lru_cache(maxsize=None)
def _half_hyperfactorial(n: int) -> PiMonomial:
    """H(n + 1/2)"""
    q = Fraction(1)
    for k in range(n):
        q *= Fraction(double_factorial(2 * k + 1), 2 ** (k + 1))
    return PiMonomial(q, n)


def hyperfactorial_half(x: Number) -> PiMonomial:
    x = Fraction(x)
    if x < 0:
        raise NegativeArgument(f"hyperfactorial of negative argument {x}")
    if x.denominator == 1:
        return PiMonomial(Fraction(hyperfactorial(int(x))))
    if x.denominator != 2:
        raise InvalidInput(f"hyperfactorial needs an integer or half-integer, got {x}")
    return _half_hyperfactorial(int(x - Fraction(1, 2)))


def _hyper_ratio(numerator: Iterable[Number], denominator: Iterable[Number]) -> PiMonomial:
    value = PiMonomial(Fraction(1))
    for arg in numerator:
        value = value * hyperfactorial_half(arg)
    for arg in denominator:
        value = value / hyperfactorial_half(arg)
    return value


def _int_ratio(numerator: Iterable[int], denominator: Iterable[int]) -> Fraction:
    top = 1
    for arg in numerator:
        top *= hyperfactorial(arg)
    bottom = 1
    for arg in denominator:
        bottom *= hyperfactorial(arg)
    return Fraction(top, bottom)


def _as_count(value: Fraction, what: str) -> int:
    if value.denominator != 1 or value < 0:
        raise NonIntegralResult(f"{what} evaluated to {value}")
    return int(value)


def _fl(n: int) -> int:
    return n // 2


def _cl(n: int) -> int:
    return -(-n // 2)


def macmahon_p(a: int, b: int, c: int) -> int:
    """Plane partitions in an a x b x c box, i.e. tilings of hexagon a,b,c,a,b,c."""
    value = _int_ratio([a, b, c, a + b + c], [a + b, a + c, b + c])
    return _as_count(value, f"P({a},{b},{c})")


def trapezoid_count(m: int, n: int, dents: Sequence[int]) -> int:
    dents = tuple(dents)
    if m < 0 or n < 0:
        raise BadDentPositions(f"trapezoid sides must be non-negative, got m={m}, n={n}")
    if len(dents) != n:
        raise BadDentPositions(f"expected {n} dent positions, got {len(dents)}")
    if any(x < 1 or x > m + n for x in dents) or any(b <= a for a, b in zip(dents, dents[1:])):
        raise BadDentPositions(f"dents {dents} must increase strictly within 1..{m + n}")
    value = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            value *= Fraction(dents[j] - dents[i], j - i)
    return _as_count(value, f"T_{m},{n}{dents}")


def semihex_s(blocks: Sequence[int]) -> int:
    """Tilings of the semihexagon with odd-indexed base blocks removed."""
    blocks = tuple(blocks)
    if not blocks:
        return 1
    if len(blocks) % 2 == 0:
        return semihex_s(blocks[:-1])
    m, n, dents = semihexagon_dents(blocks)
    return trapezoid_count(m, n, dents)


def semihex_s_printed(blocks: Sequence[int]) -> Fraction:
    """The hyperfactorial product as displayed for s; differs from the true count in general.

    Kept as a diagnostic: ``semihex_s_printed((2, 1, 1))`` is 6 while the
    semihexagon has 3 tilings.
    """
    blocks = tuple(blocks)
    if len(blocks) % 2 == 0:
        blocks = blocks[:-1]
    odd, even = [], []
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            span = sum(blocks[i : j + 1])
            (odd if (j - i + 1) % 2 else even).append(span)
    return _int_ratio(odd, even)


# ---------------------------------------------------------------------------
# Cored hexagons and two-lobe ferns
# ---------------------------------------------------------------------------

BRANCHES = ("yz", "xy", "xz")


def parity_branch(x: int, y: int, z: int) -> str:
    """First pair of parameters sharing parity, in the order yz, xy, xz."""
    if (y - z) % 2 == 0:
        return "yz"
    if (x - y) % 2 == 0:
        return "xy"
    return "xz"


def _check_branch(x: int, y: int, z: int, branch: Optional[str]) -> str:
    for name, value in (("x", x), ("y", y), ("z", z)):
        if value < 0:
            raise NegativeArgument(f"{name} must be non-negative, got {value}")
    if branch is None:
        return parity_branch(x, y, z)
    if branch not in BRANCHES:
        raise InvalidInput(f"unknown parity branch {branch!r}")
    first, second = {"yz": (y, z), "xy": (x, y), "xz": (x, z)}[branch]
    if (first - second) % 2:
        raise PreconditionViolated(f"branch {branch} needs equal parities, got ({x},{y},{z})")
    return branch


def cored_master(x: int, y: int, z: int, m: int) -> PiMonomial:
    """Tilings of the cored hexagon C_{x,y,z}(m) for y and z of equal parity."""
    if (y - z) % 2:
        raise PreconditionViolated(f"y={y} and z={z} must share parity")
    h = Fraction(m, 2)
    s = x + y + z
    yz = (y + z) // 2
    numerator = [
        x + m, y + m, z + m, s + m, _fl(s) + m, _cl(s) + m,
        h, h, _fl(x), _cl(x), _fl(y), _cl(y), _fl(z), _cl(z),
        _fl(x + y) + h, _cl(x + y) + h, _fl(x + z) + h, _cl(x + z) + h, yz + h, yz + h,
    ]
    denominator = [
        x + y + m, x + z + m, y + z + m, _cl(x + y) + m, _fl(x + z) + m, yz + m,
        _fl(x) + h, _cl(x) + h, _fl(y) + h, _cl(y) + h, _fl(z) + h, _cl(z) + h,
        _fl(s) + h, _cl(s) + h, _fl(x + y), _cl(x + z), yz,
    ]
    return _hyper_ratio(numerator, denominator)


def cored_count_exact(x: int, y: int, z: int, m: int, branch: Optional[str] = None) -> PiMonomial:
    branch = _check_branch(x, y, z, branch)
    if m < 0:
        raise NegativeArgument(f"m must be non-negative, got {m}")
    if branch == "yz":
        return cored_master(x, y, z, m)
    # south-west and north-west cores: x and y trade places
    if branch == "xy":
        return cored_master(z, y, x, m)
    return cored_master(y, x, z, m)


def cored_count(x: int, y: int, z: int, m: int, branch: Optional[str] = None) -> int:
    value = cored_count_exact(x, y, z, m, branch)
    if not value.is_integral:
        raise NonIntegralResult(f"C_{x},{y},{z}({m}) evaluated to {value}")
    return int(value.q)


def _ratio_yz(x: int, y: int, z: int, a: int, b: int) -> Fraction:
    A, C = _fl(x + y), _cl(x + y)
    B, D = _fl(x + z), _cl(x + z)
    Y = (y + z) // 2
    return _int_ratio(
        [a, b, D, Y, a + A, b + C, a + b + B, a + b + Y],
        [a + b, C, a + b + A, a + B, b + D, a + Y, b + Y],
    )


def _ratio_xy(x: int, y: int, z: int, a: int, b: int) -> Fraction:
    X = (x + y) // 2
    B, D = _fl(x + z), _cl(x + z)
    E, F = _fl(y + z), _cl(y + z)
    return _int_ratio(
        [a, b, B, F, a + X, b + X, a + b + D, a + b + E],
        [a + b, X, a + b + X, a + D, b + B, a + E, b + F],
    )


def two_lobe_ratio(
    x: int, y: int, z: int, a: int, b: int, branch: Optional[str] = None
) -> Fraction:
    """M(FC_{x,y,z}(a,b)) / M(C_{x,y,z}(a+b))."""
    branch = _check_branch(x, y, z, branch)
    if a < 0 or b < 0:
        raise NegativeArgument(f"lobes must be non-negative, got ({a},{b})")
    if branch == "yz":
        return _ratio_yz(x, y, z, a, b)
    if branch == "xy":
        return _ratio_xy(y, x, z, a, b)
    return _ratio_yz(y, x, z, a, b)


def fc_two_lobe_count(x: int, y: int, z: int, a: int, b: int) -> int:
    value = two_lobe_ratio(x, y, z, a, b) * cored_count(x, y, z, a + b)
    return _as_count(value, f"FC_{x},{y},{z}({a},{b})")


# ---------------------------------------------------------------------------
# General ferns
# ---------------------------------------------------------------------------


def s_first(spec: FernSpec) -> int:
    """s(a_1..a_{k-1}) for even k, s(a_1..a_k) for odd k (fern padded by a zero lobe)."""
    return semihex_s(spec.padded_even().lobes[:-1])


def envelope_product(spec: FernSpec) -> int:
    """s_first(spec) * s(a_2..a_k): tilings of the smallest hexagon around the fern."""
    return s_first(spec) * semihex_s(spec.lobes[1:])


def g_function(x: int, y: int, z: int, spec: FernSpec) -> Fraction:
    """M(FC_{x,y,z}(a)) / M(FC_{x,y,z}(o,e)); depends on x+y and x+z only."""
    for name, value in (("x", x), ("y", y), ("z", z)):
        if value < 0:
            raise NegativeArgument(f"{name} must be non-negative, got {value}")
    k = spec.k
    t1, c1 = _fl(x + z), _cl(x + z)
    t2, c2 = _fl(x + y), _cl(x + y)
    numerator = [t1 + spec.o, c1 + spec.e]
    denominator = [t2 + spec.o, c2 + spec.e]
    for i in range(1, k + 1):
        prefix, rest = spec.prefix(i), spec.complement(i)
        if i % 2 == 1:
            numerator += [t2 + prefix, c2 + rest]
            denominator += [t1 + prefix, c1 + rest]
        elif i < k:
            numerator += [t1 + prefix, c1 + rest]
            denominator += [t2 + prefix, c2 + rest]
    return envelope_product(spec) * _int_ratio(numerator, denominator)


def theorem21_ratio(x: int, y: int, z: int, spec: FernSpec) -> Fraction:
    return g_function(x, y, z, spec)


def fc_count_formula(x: int, y: int, z: int, spec: FernSpec) -> int:
    """Tilings of FC_{x,y,z}(a_1..a_k) from the product formula."""
    value = theorem21_ratio(x, y, z, spec) * fc_two_lobe_count(x, y, z, spec.o, spec.e)
    return _as_count(value, f"FC_{x},{y},{z}({spec})")


def scalar_identity_413(x: int, y: int, z: int, o: int, e: int) -> Tuple[Fraction, Fraction]:
    """Both sides of 1 = (x+y+z)/D + (2o+2e-1)/D with D = x+y+z+2o+2e-1.

    D vanishes exactly when x+y+z = 1 and o = e = 0.
    """
    total = x + y + z + 2 * o + 2 * e
    if total < 1:
        raise PreconditionViolated("x+y+z+2o+2e must be at least 1")
    denominator = total - 1
    if denominator == 0:
        raise DivisionByZero(f"x+y+z+2o+2e-1 vanishes at ({x},{y},{z},{o},{e})")
    rhs = Fraction(x + y + z, denominator) + Fraction(2 * o + 2 * e - 1, denominator)
    return Fraction(1), rhs
