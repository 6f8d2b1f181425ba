"""Dense univariate polynomial helpers over exact rationals.

Coefficient lists are ascending (c[0] + c[1]*x + ...), entries Fraction or
int, and are kept normalized (no trailing zeros; the zero polynomial is []).
These routines back the certified root isolation and the resultant oracle;
everything here is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Sequence

Coeffs = list[Fraction]


def normalize(c: Sequence) -> Coeffs:
    out = [Fraction(x) for x in c]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(c: Sequence) -> int:
    """Degree with the convention deg 0 = -1."""
    return len(c) - 1


def poly_add(a: Sequence, b: Sequence) -> Coeffs:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return normalize(out)


def poly_neg(a: Sequence) -> Coeffs:
    return [-Fraction(x) for x in a]


def poly_sub(a: Sequence, b: Sequence) -> Coeffs:
    return poly_add(a, poly_neg(b))


def poly_mul(a: Sequence, b: Sequence) -> Coeffs:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return normalize(out)


def poly_scale(a: Sequence, k) -> Coeffs:
    return normalize([Fraction(k) * Fraction(x) for x in a])


def poly_divmod(a: Sequence, b: Sequence) -> tuple[Coeffs, Coeffs]:
    """Quotient and remainder over Q; b must be nonzero."""
    a = normalize(a)
    b = normalize(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = list(a)
    inv_lead = 1 / b[-1]
    while len(r) >= len(b):
        k = len(r) - len(b)
        f = r[-1] * inv_lead
        q[k] = f
        for i, y in enumerate(b):
            r[i + k] -= f * y
        # leading term cancels exactly
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return normalize(q), r


def poly_mod(a: Sequence, b: Sequence) -> Coeffs:
    return poly_divmod(a, b)[1]


def derivative(a: Sequence) -> Coeffs:
    return normalize([Fraction(i * x) for i, x in enumerate(a)][1:])


def eval_at(a: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(a)):
        acc = acc * x + Fraction(c)
    return acc


def eval_gauss(a: Sequence, re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
    """Evaluate at the Gaussian rational re + i*im, returning (Re, Im)."""
    acc_r, acc_i = Fraction(0), Fraction(0)
    for c in reversed(list(a)):
        acc_r, acc_i = acc_r * re - acc_i * im + Fraction(c), acc_r * im + acc_i * re
    return acc_r, acc_i


def sign_at_dyadic(a: Sequence[int], p: int, k: int) -> int:
    """Sign of f(p / 2**k) for integer coefficients, pure integer arithmetic."""
    n = len(a) - 1
    acc = 0
    for i, c in enumerate(a):
        acc += c * pow(p, i) * pow(2, k * (n - i))
    return (acc > 0) - (acc < 0)


def sturm_chain(a: Sequence) -> list[Coeffs]:
    """Sturm sequence of a (squarefree not required; standard chain)."""
    p0 = normalize(a)
    p1 = derivative(p0)
    chain = [p0, p1]
    while chain[-1]:
        rem = poly_mod(chain[-2], chain[-1])
        if not rem:
            break
        chain.append(poly_neg(rem))
    return chain


def _sign_changes(values: list[Fraction]) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if (x > 0) != (y > 0))


def sturm_count(chain: list[Coeffs], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi]."""
    va = _sign_changes([eval_at(p, lo) for p in chain])
    vb = _sign_changes([eval_at(p, hi) for p in chain])
    return va - vb


def cauchy_bound(a: Sequence) -> Fraction:
    """B with every complex root inside |z| < B; a must be nonconstant."""
    c = normalize(a)
    lead = c[-1]
    m = max((abs(Fraction(x) / lead) for x in c[:-1]), default=Fraction(0))
    return 1 + m


def sylvester_resultant(a: Sequence, b: Sequence) -> Fraction:
    """Resultant via the Sylvester matrix determinant (independent oracle)."""
    a = normalize(a)
    b = normalize(b)
    n, m = degree(a), degree(b)
    if n < 0 or m < 0:
        return Fraction(0)
    if n == 0:
        return Fraction(a[0]) ** m
    if m == 0:
        return Fraction(b[0]) ** n
    size = n + m
    mat = [[Fraction(0)] * size for _ in range(size)]
    for row in range(m):
        for i, c in enumerate(reversed(a)):
            mat[row][row + i] = c
    for row in range(n):
        for i, c in enumerate(reversed(b)):
            mat[m + row][row + i] = c
    return det_fraction(mat)


def det_fraction(mat: list[list[Fraction]]) -> Fraction:
    """Determinant by fraction Gaussian elimination with partial pivoting."""
    n = len(mat)
    m = [row[:] for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] == 0:
                continue
            f = m[r][col] * inv
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    return det


def det_int(mat: list[list[int]]) -> int:
    """Bareiss fraction-free determinant for integer matrices."""
    n = len(mat)
    if n == 0:
        return 1
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for col in range(n - 1):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        for r in range(col + 1, n):
            for c in range(col + 1, n):
                m[r][c] = (m[r][c] * m[col][col] - m[r][col] * m[col][c]) // prev
            m[r][col] = 0
        prev = m[col][col]
    return sign * m[n - 1][n - 1]


def newton_to_coeffs(power_sums: Sequence[Fraction], deg: int) -> Coeffs:
    """Monic polynomial of degree deg from power sums p_1..p_deg of its roots.

    Newton's identities: k*e_k = sum_{i=1..k} (-1)^(i-1) * e_{k-i} * p_i.
    Returns ascending coefficients of prod (x - r_j).
    """
    e = [Fraction(1)] + [Fraction(0)] * deg
    for k in range(1, deg + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            term = e[k - i] * Fraction(power_sums[i - 1])
            acc += term if i % 2 == 1 else -term
        e[k] = acc / k
    # prod (x - r_j) = sum_{k} (-1)^k e_k x^(deg-k)
    coeffs = [Fraction(0)] * (deg + 1)
    for k in range(deg + 1):
        coeffs[deg - k] = e[k] if k % 2 == 0 else -e[k]
    return coeffs


def taylor_shift(a: Sequence, h: Fraction) -> Coeffs:
    """Coefficients of p(x + h)."""
    c = normalize(a)
    out = list(c)
    n = len(out)
    # synthetic division by (x - (-h)) repeatedly
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += h * out[j + 1]
    return normalize(out)


def trailing_zeros(a: Sequence) -> int:
    c = normalize(a)
    k = 0
    while k < len(c) and c[k] == 0:
        k += 1
    return k


def sqrt_up(q: Fraction) -> Fraction:
    """Rational upper bound for sqrt(q), q >= 0; exact on perfect squares."""
    if q < 0:
        raise ValueError("negative radicand")
    n, d = q.numerator, q.denominator
    r = isqrt(n * d)
    if r * r == n * d:
        return Fraction(r, d)
    return Fraction(r + 1, d)


def sqrt_down(q: Fraction) -> Fraction:
    """Rational lower bound for sqrt(q), q >= 0."""
    if q < 0:
        raise ValueError("negative radicand")
    n, d = q.numerator, q.denominator
    return Fraction(isqrt(n * d), d)
