"""Thin certified-interval layer over mpmath.iv.

Real enclosures are mpmath interval scalars; complex enclosures are
rectangles (CIv) holding one interval per component.  All constructors round
outward, so any value proved inside an input stays inside every derived
enclosure.  mpmath's interval context keeps its working precision in module
state; prec_ctx scopes it.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from mpmath import iv, libmp


@contextmanager
def prec_ctx(bits: int) -> Iterator[None]:
    """Temporarily set the interval working precision."""
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def frac_iv(q) -> "iv.mpf":
    """Certified enclosure of an exact rational at the current precision."""
    q = Fraction(q)
    if q.denominator == 1:
        return iv.mpf(q.numerator)
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def hull_iv(lo, hi) -> "iv.mpf":
    """Enclosure of the exact rational interval [lo, hi]."""
    return iv.mpf([frac_iv(lo), frac_iv(hi)])


def iv_endpoints(x) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an interval scalar."""
    a, b = x._mpi_
    return Fraction(*libmp.to_rational(a)), Fraction(*libmp.to_rational(b))


def iv_width(x) -> Fraction:
    lo, hi = iv_endpoints(x)
    return hi - lo


def iv_contains(x, q) -> bool:
    """Whether the exact rational q lies in the enclosure x."""
    lo, hi = iv_endpoints(x)
    return lo <= Fraction(q) <= hi


def iv_sign(x) -> int | None:
    """Certified sign: +1, -1, 0 impossible to certify; None if undecided."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    return None


def eval_poly_iv(coeffs, x) -> "iv.mpf":
    """Horner evaluation of exact-rational coefficients at an interval."""
    acc = iv.mpf(0)
    for c in reversed(list(coeffs)):
        acc = acc * x + frac_iv(c)
    return acc


@dataclass(frozen=True)
class CIv:
    """Complex rectangle enclosure: re + i*im with interval components."""

    re: object
    im: object

    @staticmethod
    def from_fracs(re, im=Fraction(0)) -> "CIv":
        return CIv(frac_iv(re), frac_iv(im))

    @staticmethod
    def from_rect(re_lo, re_hi, im_lo, im_hi) -> "CIv":
        return CIv(hull_iv(re_lo, re_hi), hull_iv(im_lo, im_hi))

    def __add__(self, other: "CIv") -> "CIv":
        return CIv(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "CIv") -> "CIv":
        return CIv(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "CIv":
        return CIv(-self.re, -self.im)

    def __mul__(self, other: "CIv") -> "CIv":
        return CIv(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def conj(self) -> "CIv":
        return CIv(self.re, -self.im)

    def abs2(self) -> "iv.mpf":
        return self.re * self.re + self.im * self.im

    def contains(self, re, im=Fraction(0)) -> bool:
        return iv_contains(self.re, re) and iv_contains(self.im, im)

    def excludes(self, re, im=Fraction(0)) -> bool:
        return not self.contains(re, im)

    def width(self) -> Fraction:
        return max(iv_width(self.re), iv_width(self.im))

    def endpoints(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        rl, rh = iv_endpoints(self.re)
        il, ih = iv_endpoints(self.im)
        return rl, rh, il, ih

    def abs_upper(self) -> Fraction:
        """Exact rational upper bound for |z| over the rectangle."""
        from .polys import sqrt_up

        rl, rh, il, ih = self.endpoints()
        m_re = max(abs(rl), abs(rh))
        m_im = max(abs(il), abs(ih))
        return sqrt_up(m_re * m_re + m_im * m_im)

    def abs_lower(self) -> Fraction:
        """Exact rational lower bound for |z| over the rectangle."""
        from .polys import sqrt_down

        rl, rh, il, ih = self.endpoints()
        d_re = Fraction(0) if rl <= 0 <= rh else min(abs(rl), abs(rh))
        d_im = Fraction(0) if il <= 0 <= ih else min(abs(il), abs(ih))
        return sqrt_down(d_re * d_re + d_im * d_im)

    def mid(self) -> complex:
        return complex(float(self.re.mid), float(self.im.mid))


def eval_poly_civ(coeffs, z: CIv) -> CIv:
    """Horner evaluation of exact-rational coefficients at a rectangle."""
    acc = CIv.from_fracs(0)
    for c in reversed(list(coeffs)):
        acc = acc * z + CIv.from_fracs(c)
    return acc


def arg_iv(z: CIv) -> "iv.mpf":
    """Principal-branch argument enclosure; wide near the cut by design."""
    return iv.atan2(z.im, z.re)
