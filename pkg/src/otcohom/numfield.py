"""Number field layer: fields, embeddings, units, logarithm vectors.

A field is Q[x]/(f) for a monic irreducible integer polynomial f of degree
s + 2t.  Elements are coordinate vectors in the power basis with exact
rational entries.  Embeddings are certified enclosures: isolating intervals
with exact rational endpoints for the s real roots (Sturm + bisection) and
certified discs for the t upper-half-plane roots (numeric approximation
followed by an exact containment certificate).  Nothing downstream ever
consumes an uncertified numeric value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import libmp

from . import polys
from .errors import (
    DegreeTooSmall,
    DivisionByZero,
    NotIntegral,
    NotMonic,
    NotUnit,
    PrecisionExhausted,
    Reducible,
    SignatureUnsupported,
)
from .intervals import CIv, eval_poly_civ, eval_poly_iv, hull_iv, iv_sign, prec_ctx

PRECISION_DEFAULT = 128
PRECISION_CAP = 4096


@dataclass(frozen=True)
class FieldSpec:
    """Monic irreducible defining polynomial, ascending integer coefficients."""

    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def poly(self) -> list[Fraction]:
        return [Fraction(c) for c in self.coeffs]


@dataclass(frozen=True)
class AlgebraicNumber:
    """Element of Q[x]/(f) as power-basis coordinates."""

    field: FieldSpec
    coords: tuple[Fraction, ...]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])


@dataclass(frozen=True)
class EmbeddingSet:
    """Certified root enclosures ordering the embeddings.

    real_roots[i] is an exact rational isolating interval (lo, hi) for the
    i-th real root in ascending order.  complex_roots[k] is a certified disc
    (center_re, center_im, radius) around the k-th upper-half-plane root,
    sorted by center.  Index i < s addresses a real embedding; index s + k
    addresses the k-th upper-half-plane embedding (its conjugate is the
    remaining one).
    """

    field: FieldSpec
    s: int
    t: int
    precision_bits: int
    real_roots: tuple[tuple[Fraction, Fraction], ...]
    complex_roots: tuple[tuple[Fraction, Fraction, Fraction], ...]


@dataclass(frozen=True)
class LogVector:
    """Entries of the logarithm map: s real entries log|sigma_i(u)| followed
    by t entries 2*log|sigma_(s+k)(u)|, as certified intervals."""

    entries: tuple
    precision_bits: int


def parse_field(coeffs, for_ot: bool = True) -> FieldSpec:
    """Validate a defining polynomial.

    Accepts integers or integer-valued strings, ascending order.  Raises
    NotMonic, Reducible, or (when for_ot) DegreeTooSmall for degree < 3,
    since s > 0 and t > 0 force degree s + 2t >= 3.
    """
    try:
        ints = [int(c) for c in coeffs]
    except (TypeError, ValueError) as exc:
        raise NotMonic(f"coefficients must be integers: {coeffs!r}") from exc
    while ints and ints[-1] == 0:
        ints.pop()
    if len(ints) < 2:
        raise DegreeTooSmall("defining polynomial must be nonconstant")
    if ints[-1] != 1:
        raise NotMonic(f"leading coefficient {ints[-1]} != 1")
    if for_ot and len(ints) - 1 < 3:
        raise DegreeTooSmall(
            f"degree {len(ints) - 1} < 3 cannot have both real and complex places"
        )
    if len(ints) - 1 >= 2:
        import sympy

        x = sympy.Symbol("x")
        if not sympy.Poly(list(reversed(ints)), x, domain="ZZ").is_irreducible:
            raise Reducible(f"{ints} factors over Q")
    return FieldSpec(coeffs=tuple(ints))


# --- root isolation ---------------------------------------------------------

def _isolate_real_roots(f: list[Fraction]) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open intervals with dyadic endpoints, one simple root each."""
    chain = polys.sturm_chain(f)
    bound = polys.cauchy_bound(f)
    hi = Fraction(int(bound) + 1)
    lo = -hi
    total = polys.sturm_count(chain, lo, hi)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi, total)]
    while stack:
        a, b, count = stack.pop()
        if count == 0:
            continue
        if count == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        # irreducible degree >= 2 has no rational roots, so mid is never a root
        left = polys.sturm_count(chain, a, mid)
        stack.append((a, mid, left))
        stack.append((mid, b, count - left))
    out.sort()
    return out


def _refine_real_root(
    f_int: list[int], lo: Fraction, hi: Fraction, target_width: Fraction
) -> tuple[Fraction, Fraction]:
    """Bisection with pure-integer sign evaluation at dyadic points."""

    def dyadic(q: Fraction) -> tuple[int, int]:
        k = q.denominator.bit_length() - 1
        return q.numerator, k

    s_lo = polys.sign_at_dyadic(f_int, *dyadic(lo))
    s_hi = polys.sign_at_dyadic(f_int, *dyadic(hi))
    assert s_lo != 0 and s_hi != 0 and s_lo != s_hi
    while hi - lo > target_width:
        mid = (lo + hi) / 2
        s_mid = polys.sign_at_dyadic(f_int, *dyadic(mid))
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _mpf_to_frac(x) -> Fraction:
    return Fraction(*libmp.to_rational(x._mpf_))


def _certify_complex_roots(
    f: list[Fraction],
    f_int: list[int],
    t: int,
    real_iv: list[tuple[Fraction, Fraction]],
    target_width: Fraction,
    bits: int,
) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Certified discs around the t upper-half-plane roots.

    Each disc center z0 is an exact Gaussian rational taken from a numeric
    approximation; the radius n*|f(z0)/f'(z0)| provably reaches the nearest
    root.  Disjointness of all n enclosures (s intervals, t discs, their
    conjugates) then pins exactly one root per disc.
    """
    n = len(f) - 1
    fp = polys.derivative(f)
    work = max(bits + 64, 128)
    for _ in range(8):
        with mpmath.workprec(work):
            approx = mpmath.polyroots(
                [mpmath.mpf(c.numerator) / c.denominator for c in reversed(f)],
                maxsteps=200,
                extraprec=work,
            )
            upper = [z for z in approx if mpmath.im(z) > 0]
        if len(upper) == t:
            discs: list[tuple[Fraction, Fraction, Fraction]] = []
            ok = True
            for z in upper:
                # component access is exact; an mpf() wrapper would re-round
                # to the ambient precision and wreck the residual bound
                x0 = _mpf_to_frac(z.real)
                y0 = _mpf_to_frac(z.imag)
                wr, wi = polys.eval_gauss(f, x0, y0)
                dr, di = polys.eval_gauss(fp, x0, y0)
                d2 = dr * dr + di * di
                if d2 == 0:
                    ok = False
                    break
                rad = polys.sqrt_up(Fraction(n * n) * (wr * wr + wi * wi) / d2)
                if 2 * rad > target_width or y0 - rad <= 0:
                    ok = False
                    break
                discs.append((x0, y0, rad))
            if ok and _enclosures_disjoint(real_iv, discs):
                discs.sort(key=lambda d: (d[0], d[1]))
                return discs
        work *= 2
    raise PrecisionExhausted(
        f"could not certify complex roots of {f_int} at target width {target_width}"
    )


def _enclosures_disjoint(
    real_iv: list[tuple[Fraction, Fraction]],
    discs: list[tuple[Fraction, Fraction, Fraction]],
) -> bool:
    """All n root enclosures pairwise disjoint (conjugate discs included)."""
    as_discs = [((a + b) / 2, Fraction(0), (b - a) / 2) for a, b in real_iv]
    for x0, y0, r in discs:
        as_discs.append((x0, y0, r))
        as_discs.append((x0, -y0, r))
    for i in range(len(as_discs)):
        for j in range(i + 1, len(as_discs)):
            xi, yi, ri = as_discs[i]
            xj, yj, rj = as_discs[j]
            d2 = (xi - xj) ** 2 + (yi - yj) ** 2
            if d2 <= (ri + rj) ** 2:
                return False
    return True


@lru_cache(maxsize=None)
def _embeddings_cached(field: FieldSpec, precision_bits: int) -> tuple:
    f = field.poly()
    f_int = list(field.coeffs)
    chain = polys.sturm_chain(f)
    bound = Fraction(int(polys.cauchy_bound(f)) + 1)
    s = polys.sturm_count(chain, -bound, bound)
    n = field.degree
    t = (n - s) // 2
    assert s + 2 * t == n
    target = Fraction(1, 2 ** (precision_bits // 2))
    isolated = _isolate_real_roots(f)
    assert len(isolated) == s
    real = [
        _refine_real_root(f_int, lo, hi, target) for lo, hi in isolated
    ]
    cplx = (
        _certify_complex_roots(f, f_int, t, real, target, precision_bits)
        if t
        else []
    )
    return s, t, tuple(real), tuple(cplx)


def compute_embeddings(
    field: FieldSpec,
    precision_bits: int = PRECISION_DEFAULT,
    require_ot: bool = True,
) -> EmbeddingSet:
    """Certified embedding enclosures at the requested precision.

    Raises SignatureUnsupported when require_ot is set and the signature has
    s = 0 or t = 0; with require_ot=False the set is still returned so the
    unit-search oracle can run on such fields.
    """
    s, t, real, cplx = _embeddings_cached(field, precision_bits)
    if require_ot and (s == 0 or t == 0):
        raise SignatureUnsupported(f"signature ({s},{t}) unsupported for OT data")
    return EmbeddingSet(
        field=field,
        s=s,
        t=t,
        precision_bits=precision_bits,
        real_roots=real,
        complex_roots=cplx,
    )


def refine_embeddings(emb: EmbeddingSet, precision_bits: int) -> EmbeddingSet:
    """Recompute at higher precision, keeping embedding indices aligned.

    Each refined enclosure must land inside the matching coarse enclosure;
    disjointness of the coarse certificates makes the alignment canonical.
    """
    fine = compute_embeddings(emb.field, precision_bits, require_ot=False)
    real = list(fine.real_roots)
    for (lo, hi), (flo, fhi) in zip(emb.real_roots, real):
        assert lo <= flo and fhi <= hi, "refined real root escaped its interval"
    cplx: list[tuple[Fraction, Fraction, Fraction]] = []
    for x0, y0, r in emb.complex_roots:
        inside = [
            d
            for d in fine.complex_roots
            if (d[0] - x0) ** 2 + (d[1] - y0) ** 2 <= (r - d[2]) ** 2 and d[2] <= r
        ]
        assert len(inside) == 1, "refined complex root alignment failed"
        cplx.append(inside[0])
    return EmbeddingSet(
        field=emb.field,
        s=emb.s,
        t=emb.t,
        precision_bits=precision_bits,
        real_roots=tuple(real),
        complex_roots=tuple(cplx),
    )


def embed_interval(emb: EmbeddingSet, a: AlgebraicNumber, index: int):
    """Certified enclosure of sigma_index(a).

    Indices 0..s-1 give real interval scalars; s..s+t-1 give complex
    rectangles for the upper-half-plane embeddings.
    """
    with prec_ctx(emb.precision_bits + 32):
        if index < emb.s:
            lo, hi = emb.real_roots[index]
            return eval_poly_iv(a.coords, hull_iv(lo, hi))
        x0, y0, r = emb.complex_roots[index - emb.s]
        z = CIv.from_rect(x0 - r, x0 + r, y0 - r, y0 + r)
        return eval_poly_civ(a.coords, z)


# --- arithmetic -------------------------------------------------------------

def element(field: FieldSpec, coords) -> AlgebraicNumber:
    n = field.degree
    cs = [Fraction(c) for c in coords]
    if len(cs) > n:
        cs = polys.poly_mod(cs, field.poly())
    cs = cs + [Fraction(0)] * (n - len(cs))
    return AlgebraicNumber(field=field, coords=tuple(cs[:n]))


def _mul_mod(field: FieldSpec, a, b) -> list[Fraction]:
    return polys.poly_mod(polys.poly_mul(a, b), field.poly())


def _inverse_coords(field: FieldSpec, a: list[Fraction]) -> list[Fraction]:
    """Extended Euclid in Q[x] against the defining polynomial."""
    r0, r1 = field.poly(), polys.normalize(a)
    if not r1:
        raise DivisionByZero("inverse of zero")
    s0: list[Fraction] = []
    s1: list[Fraction] = [Fraction(1)]
    while polys.degree(r1) > 0:
        q, r = polys.poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, polys.poly_sub(s0, polys.poly_mul(q, s1))
    # r1 is a nonzero constant: f irreducible and a nonzero mod f
    return polys.poly_scale(s1, 1 / r1[0])


def algebra_op(a: AlgebraicNumber, b, op: str) -> AlgebraicNumber:
    """Field arithmetic: op in add|sub|mul|pow|inv.

    For pow, b is an integer exponent (negative allowed); for inv, b is
    ignored.  Raises DivisionByZero on inv(0) or pow(0, k<0).
    """
    field = a.field
    ac = list(a.coords)
    if op == "add":
        return element(field, polys.poly_add(ac, list(b.coords)))
    if op == "sub":
        return element(field, polys.poly_sub(ac, list(b.coords)))
    if op == "mul":
        return element(field, _mul_mod(field, ac, list(b.coords)))
    if op == "inv":
        return element(field, _inverse_coords(field, ac))
    if op == "pow":
        k = int(b)
        base = ac
        if k < 0:
            base = _inverse_coords(field, ac)
            k = -k
        acc: list[Fraction] = [Fraction(1)]
        while k:
            if k & 1:
                acc = _mul_mod(field, acc, base)
            base = _mul_mod(field, base, base)
            k >>= 1
        return element(field, acc)
    raise ValueError(f"unknown op {op!r}")


def mult_matrix(a: AlgebraicNumber) -> list[list[Fraction]]:
    """Row i holds the power-basis coordinates of a * theta^i."""
    field = a.field
    n = field.degree
    rows = []
    cur = list(a.coords)
    for _ in range(n):
        rows.append(cur + [Fraction(0)] * (n - len(cur)))
        cur = _mul_mod(field, cur, [Fraction(0), Fraction(1)])
    return [row[:n] for row in rows]


def norm(a: AlgebraicNumber) -> Fraction:
    """Field norm via the regular-representation determinant.

    Sign convention: norm of the rational constant c is c**degree.
    """
    return polys.det_fraction(mult_matrix(a))


def trace(a: AlgebraicNumber) -> Fraction:
    m = mult_matrix(a)
    return sum((m[i][i] for i in range(len(m))), Fraction(0))


# --- units ------------------------------------------------------------------

def check_unit(a: AlgebraicNumber, precision_bits: int = PRECISION_DEFAULT) -> str:
    """Classify an integral element.

    Returns "unit_totally_positive", "unit_not_totally_positive", or
    "not_unit".  Raises NotIntegral for non-integer coordinates.  Total
    positivity is certified on every real embedding, escalating precision
    until each sign is decided.
    """
    if not a.is_integral():
        raise NotIntegral(f"coordinates {a.coords} are not integral")
    if abs(norm(a)) != 1:
        return "not_unit"
    bits = precision_bits
    while True:
        emb = compute_embeddings(a.field, bits, require_ot=False)
        signs = []
        for i in range(emb.s):
            with prec_ctx(bits + 32):
                signs.append(iv_sign(embed_interval(emb, a, i)))
        if all(sg is not None for sg in signs):
            if all(sg > 0 for sg in signs):
                return "unit_totally_positive"
            return "unit_not_totally_positive"
        if bits >= PRECISION_CAP:
            raise PrecisionExhausted(
                f"sign of a real embedding undecided at {bits} bits"
            )
        bits *= 2


def log_vector(a: AlgebraicNumber, emb: EmbeddingSet) -> LogVector:
    """Certified logarithm-map entries for a unit.

    Real entries are log|sigma_i(a)|; complex entries carry the weight two:
    2*log|sigma_(s+k)(a)| = log(|sigma|^2).  Precision escalates until every
    modulus is bounded away from zero.
    """
    if not a.is_integral() or abs(norm(a)) != 1:
        raise NotUnit(f"{a.coords} is not a unit of the integral model")
    from mpmath import iv

    cur = emb
    bits = emb.precision_bits
    while True:
        entries = []
        ok = True
        with prec_ctx(bits + 32):
            for i in range(cur.s):
                val = embed_interval(cur, a, i)
                sg = iv_sign(val)
                if sg is None:
                    ok = False
                    break
                entries.append(iv.log(abs(val)))
            if ok:
                for k in range(cur.t):
                    val = embed_interval(cur, a, cur.s + k)
                    m2 = val.abs2()
                    if not m2 > 0:
                        ok = False
                        break
                    entries.append(iv.log(m2))
        if ok:
            return LogVector(entries=tuple(entries), precision_bits=bits)
        if bits >= PRECISION_CAP:
            raise PrecisionExhausted(f"log vector undecided at {bits} bits")
        bits *= 2
        cur = refine_embeddings(cur, bits)


def _is_torsion(a: AlgebraicNumber) -> bool:
    """Roots of unity in the integral model; {+-1} once a real place exists."""
    if a.is_rational():
        return abs(a.coords[0]) == 1
    cur = a
    for _ in range(24):
        cur = algebra_op(cur, a, "mul")
        if cur.is_rational() and abs(cur.coords[0]) == 1:
            return True
    return False


def search_units(
    field: FieldSpec, height: int, limit: int | None = None
) -> list[AlgebraicNumber]:
    """Integral units with coordinates in [-height, height], up to sign.

    Torsion units are dropped (with a real embedding that means only +-1;
    in the totally imaginary oracle case small roots of unity are detected
    by iterated powering).  Results are ordered lexicographically by
    coordinates; sign is fixed by the first nonzero coordinate.
    """
    n = field.degree
    found: list[AlgebraicNumber] = []
    for raw in itertools.product(range(-height, height + 1), repeat=n):
        first = next((c for c in raw if c != 0), 0)
        if first <= 0:
            continue
        mat = [[int(x) for x in row] for row in mult_matrix(element(field, raw))]
        if abs(polys.det_int(mat)) != 1:
            continue
        cand = element(field, raw)
        if _is_torsion(cand):
            continue
        found.append(cand)
        if limit is not None and len(found) >= limit:
            break
    found.sort(key=lambda u: u.coords)
    return found
