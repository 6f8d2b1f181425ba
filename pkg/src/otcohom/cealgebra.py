"""Invariant-form algebra of the solvmanifold model and its cohomology.

The complexified cotangent fiber is spanned by generators
alpha_1..alpha_s, abar_1..abar_s, beta_1..beta_t, bbar_1..bbar_t in that
canonical order; a form monomial is a wedge of distinct generators encoded
as a bitmask.  The differentials act on generators by

    dbar alpha_i = +1/2 alpha_i ^ abar_i          del alpha_i = 0
    dbar abar_i  = 0                              del abar_i  = -1/2 alpha_i ^ abar_i
    dbar beta_k  = -1/2 psi_k(abar) ^ beta_k      del beta_k  = -1/2 psi_k(alpha) ^ beta_k
    dbar bbar_k  = -1/2 psibar_k(abar) ^ bbar_k   del bbar_k  = -1/2 psibar_k(alpha) ^ bbar_k

with psi_k = sum_i (b_ik/2 + sqrt(-1) c_ik) x_i, and extend by Leibniz.
Two scalar backends share the code path: exact Gaussian rationals with the
c parameters specialized to deterministic generic values, and floating
complex numbers carrying the true certified-midpoint constants.  Ranks are
taken by sparse exact elimination or by SVD with an explicit ambiguity
band; the two routes are compared, never merged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BackendDisagreement, PrecisionExhausted


@dataclass(frozen=True)
class QQi:
    """Gaussian rational a + b*sqrt(-1) with exact components."""

    a: Fraction
    b: Fraction

    def __add__(self, other: "QQi") -> "QQi":
        return QQi(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QQi") -> "QQi":
        return QQi(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QQi":
        return QQi(-self.a, -self.b)

    def __mul__(self, other: "QQi") -> "QQi":
        return QQi(
            self.a * other.a - self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    def __truediv__(self, other: "QQi") -> "QQi":
        n = other.a * other.a + other.b * other.b
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi(
            (self.a * other.a + self.b * other.b) / n,
            (self.b * other.a - self.a * other.b) / n,
        )

    def conj(self) -> "QQi":
        return QQi(self.a, -self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @staticmethod
    def of(a, b=0) -> "QQi":
        return QQi(Fraction(a), Fraction(b))


@dataclass(frozen=True)
class FormMonomial:
    """Wedge of generators by 1-based index tuples, canonical order."""

    alpha: tuple[int, ...]
    abar: tuple[int, ...]
    beta: tuple[int, ...]
    bbar: tuple[int, ...]

    def bidegree(self) -> tuple[int, int]:
        return (
            len(self.alpha) + len(self.beta),
            len(self.abar) + len(self.bbar),
        )


@dataclass(frozen=True)
class StructureConstants:
    """Coefficient matrices of psi_k: entries b[i][k], c[i][k].

    exact backends carry Fractions, numeric backends floats; t=1 exact
    constants pin b = -1, which unimodularity forces.
    """

    s: int
    t: int
    b: tuple
    c: tuple
    exact: bool


def _primes(count: int, skip: int = 0) -> list[int]:
    out = []
    n = 2
    while len(out) < count + skip:
        if all(n % p for p in out):
            out.append(n)
        n += 1
    return out[skip:]


def generic_constants(s: int, t: int, seed: int = 0) -> StructureConstants:
    """Deterministic generic exact parameters.

    c values are distinct primes over a common denominator: unique
    factorization rules out every multiplicative coincidence among them
    (a geometric progression would not: 3*81 = 9*27 collapses a rank for
    s = 4), which keeps the exact backend at the generic rank the numeric
    true-constant backend sees.  For t = 1 the b column is exactly -1 (the
    one relation true constants always satisfy); for larger t the rows are
    generic with row sum -1, built from a disjoint prime stream.
    """
    cp = _primes(s * t, skip=seed)
    bp = _primes(s * t, skip=seed + s * t)
    idx = 0
    b_rows = []
    c_rows = []
    for i in range(s):
        b_row = []
        c_row = []
        for k in range(t):
            c_row.append(Fraction(cp[idx], 7 + seed))
            idx += 1
        if t == 1:
            b_row = [Fraction(-1)]
        else:
            raw = [Fraction(bp[i * t + j], 11) for j in range(t)]
            total = sum(raw)
            b_row = [x - (total + 1) / t for x in raw]
        b_rows.append(tuple(b_row))
        c_rows.append(tuple(c_row))
    return StructureConstants(
        s=s, t=t, b=tuple(b_rows), c=tuple(c_rows), exact=True
    )


def true_constants(ot) -> StructureConstants:
    """Float midpoints of the certified B and C matrices of a structure."""
    b = tuple(
        tuple(float(ot.B[i][k].mid) for k in range(ot.t)) for i in range(ot.s)
    )
    c = tuple(
        tuple(float(ot.C[i][k].mid) for k in range(ot.t)) for i in range(ot.s)
    )
    return StructureConstants(s=ot.s, t=ot.t, b=b, c=c, exact=False)


class FormAlgebra:
    """Operator context: one signature, one constant set, one scalar type.

    rank_tol, when given, overrides the numeric backend's relative
    singular-value threshold (ignored by the exact backend).
    """

    def __init__(self, constants: StructureConstants, rank_tol: float | None = None):
        self.s = constants.s
        self.t = constants.t
        self.constants = constants
        self.exact = constants.exact
        self.rank_tol = rank_tol
        self.n_gen = 2 * self.s + 2 * self.t
        self.vol_mask = (1 << self.n_gen) - 1
        if self.exact:
            self.zero = QQi.of(0)
            self.one = QQi.of(1)
            half = QQi.of(Fraction(1, 2))
            self.w = [
                [
                    QQi(Fraction(constants.b[i][k]) / 2, Fraction(constants.c[i][k]))
                    for k in range(self.t)
                ]
                for i in range(self.s)
            ]
        else:
            self.zero = complex(0)
            self.one = complex(1)
            half = complex(0.5)
            self.w = [
                [
                    complex(constants.b[i][k] / 2.0, constants.c[i][k])
                    for k in range(self.t)
                ]
                for i in range(self.s)
            ]
        self._half = half
        self._dbar_gen = self._generator_rules(holomorphic=False)
        self._del_gen = self._generator_rules(holomorphic=True)

    # --- mask plumbing ------------------------------------------------------

    def pos_alpha(self, i: int) -> int:
        return i - 1

    def pos_abar(self, i: int) -> int:
        return self.s + i - 1

    def pos_beta(self, k: int) -> int:
        return 2 * self.s + k - 1

    def pos_bbar(self, k: int) -> int:
        return 2 * self.s + self.t + k - 1

    def mask(self, mono: FormMonomial) -> int:
        m = 0
        for i in mono.alpha:
            m |= 1 << self.pos_alpha(i)
        for i in mono.abar:
            m |= 1 << self.pos_abar(i)
        for k in mono.beta:
            m |= 1 << self.pos_beta(k)
        for k in mono.bbar:
            m |= 1 << self.pos_bbar(k)
        return m

    def unpack(self, m: int) -> FormMonomial:
        s, t = self.s, self.t
        alpha = tuple(i + 1 for i in range(s) if m >> i & 1)
        abar = tuple(i + 1 for i in range(s) if m >> (s + i) & 1)
        beta = tuple(k + 1 for k in range(t) if m >> (2 * s + k) & 1)
        bbar = tuple(k + 1 for k in range(t) if m >> (2 * s + t + k) & 1)
        return FormMonomial(alpha=alpha, abar=abar, beta=beta, bbar=bbar)

    def bidegree(self, m: int) -> tuple[int, int]:
        s, t = self.s, self.t
        p = (m & ((1 << s) - 1)).bit_count()
        p += (m >> 2 * s & ((1 << t) - 1)).bit_count()
        q = (m >> s & ((1 << s) - 1)).bit_count()
        q += (m >> (2 * s + t)).bit_count()
        return p, q

    def _partner(self, pos: int) -> int:
        s, t = self.s, self.t
        if pos < s:
            return pos + s
        if pos < 2 * s:
            return pos - s
        if pos < 2 * s + t:
            return pos + t
        return pos - t

    # --- forms --------------------------------------------------------------

    def form(self, terms) -> dict:
        """Build a form from (FormMonomial | mask, coefficient) pairs."""
        out: dict = {}
        for mono, coeff in terms:
            m = mono if isinstance(mono, int) else self.mask(mono)
            c = self._scalar(coeff)
            acc = out.get(m, self.zero) + c
            if self._is_zero(acc):
                out.pop(m, None)
            else:
                out[m] = acc
        return out

    def _scalar(self, x):
        if self.exact:
            if isinstance(x, QQi):
                return x
            return QQi.of(x)
        if isinstance(x, complex):
            return x
        return complex(float(x))

    def _is_zero(self, x) -> bool:
        if self.exact:
            return x.is_zero()
        return x == 0

    def conj_scalar(self, x):
        if self.exact:
            return x.conj()
        return x.conjugate()

    def add(self, f: dict, g: dict) -> dict:
        out = dict(f)
        for m, c in g.items():
            acc = out.get(m, self.zero) + c
            if self._is_zero(acc):
                out.pop(m, None)
            else:
                out[m] = acc
        return out

    def scale(self, f: dict, c) -> dict:
        c = self._scalar(c)
        if self._is_zero(c):
            return {}
        return {m: v * c for m, v in f.items()}

    def is_zero_form(self, f: dict, tol: float = 2.0**-40) -> bool:
        if self.exact:
            return not f
        return all(abs(v) <= tol for v in f.values())

    # --- wedge and differentials -------------------------------------------

    @staticmethod
    def _merge_sign(a: int, b: int) -> int:
        """Sign from sorting the concatenation of two disjoint masks."""
        inv = 0
        rem = b
        while rem:
            low = rem & (-rem)
            pos = low.bit_length() - 1
            inv += (a >> (pos + 1)).bit_count()
            rem ^= low
        return -1 if inv & 1 else 1

    def wedge(self, f: dict, g: dict) -> dict:
        out: dict = {}
        for m1, c1 in f.items():
            for m2, c2 in g.items():
                if m1 & m2:
                    continue
                m = m1 | m2
                c = c1 * c2
                if self._merge_sign(m1, m2) < 0:
                    c = -c
                acc = out.get(m, self.zero) + c
                if self._is_zero(acc):
                    out.pop(m, None)
                else:
                    out[m] = acc
        return out

    def _generator_rules(self, holomorphic: bool) -> list[dict]:
        """Image of each generator under del (holomorphic) or dbar."""
        s, t = self.s, self.t
        rules: list[dict] = [{} for _ in range(self.n_gen)]
        half = self._half
        for i in range(1, s + 1):
            pair = 1 << self.pos_alpha(i) | 1 << self.pos_abar(i)
            if holomorphic:
                rules[self.pos_abar(i)] = {pair: self.zero - half}
            else:
                rules[self.pos_alpha(i)] = {pair: half}
        for k in range(1, t + 1):
            for i in range(1, s + 1):
                w = self.w[i - 1][k - 1]
                coeff = self.zero - half * w
                coeff_bar = self.zero - half * self.conj_scalar(w)
                if holomorphic:
                    lead = 1 << self.pos_alpha(i)
                else:
                    lead = 1 << self.pos_abar(i)
                rules[self.pos_beta(k)][lead | 1 << self.pos_beta(k)] = coeff
                rules[self.pos_bbar(k)][lead | 1 << self.pos_bbar(k)] = coeff_bar
        return rules

    def _apply_rules(self, f: dict, rules: list[dict]) -> dict:
        out: dict = {}
        for m, c in f.items():
            rem = m
            below = 0
            while rem:
                low = rem & (-rem)
                pos = low.bit_length() - 1
                rule = rules[pos]
                if rule:
                    rest = m ^ low
                    lead_sign = -1 if below & 1 else 1
                    for tm, tc in rule.items():
                        if tm & rest:
                            continue
                        sign = lead_sign * self._merge_sign(tm, rest)
                        term = c * tc
                        if sign < 0:
                            term = -term
                        key = tm | rest
                        acc = out.get(key, self.zero) + term
                        if self._is_zero(acc):
                            out.pop(key, None)
                        else:
                            out[key] = acc
                below += 1
                rem ^= low
        return out

    def delbar(self, f: dict) -> dict:
        return self._apply_rules(f, self._dbar_gen)

    def del_(self, f: dict) -> dict:
        return self._apply_rules(f, self._del_gen)

    def d(self, f: dict) -> dict:
        return self.add(self.del_(f), self.delbar(f))

    def conj(self, f: dict) -> dict:
        out: dict = {}
        for m, c in f.items():
            positions = []
            rem = m
            while rem:
                low = rem & (-rem)
                positions.append(self._partner(low.bit_length() - 1))
                rem ^= low
            inv = sum(
                1
                for x in range(len(positions))
                for y in range(x + 1, len(positions))
                if positions[x] > positions[y]
            )
            nm = 0
            for p in positions:
                nm |= 1 << p
            c2 = self.conj_scalar(c)
            if inv & 1:
                c2 = -c2
            out[nm] = out.get(nm, self.zero) + c2
        return {m: c for m, c in out.items() if not self._is_zero(c)}

    def star(self, f: dict) -> dict:
        """Conjugate-linear Hodge star against the canonical volume form.

        star(monomial) = sign * complementary monomial where
        monomial ^ complement = sign * vol; coefficients conjugate.
        """
        out: dict = {}
        for m, c in f.items():
            comp = self.vol_mask ^ m
            sign = self._merge_sign(m, comp)
            c2 = self.conj_scalar(c)
            if sign < 0:
                c2 = -c2
            out[comp] = c2
        return out

    # --- bases and operators ------------------------------------------------

    def basis_pq(self, p: int, q: int) -> list[int]:
        return [
            m for m in range(1 << self.n_gen) if self.bidegree(m) == (p, q)
        ]

    def basis_k(self, k: int) -> list[int]:
        return [m for m in range(1 << self.n_gen) if m.bit_count() == k]


# --- rank engines -----------------------------------------------------------

def exact_rank(rows: list[dict]) -> int:
    """Sparse Gaussian elimination over exact scalars; rows are dicts."""
    live = [dict(r) for r in rows if r]
    rank = 0
    while live:
        live.sort(key=lambda r: (len(r), min(r)))
        piv = live.pop(0)
        rank += 1
        pc = min(piv)
        pv = piv[pc]
        reduced = []
        for r in live:
            if pc in r:
                f = r[pc] / pv
                new = dict(r)
                for col, val in piv.items():
                    acc = new.get(col, None)
                    acc = (acc - f * val) if acc is not None else -(f * val)
                    if acc.is_zero():
                        new.pop(col, None)
                    else:
                        new[col] = acc
                if new:
                    reduced.append(new)
            else:
                reduced.append(r)
        live = reduced
    return rank


def numeric_rank(rows: list[dict], tol: float = 2.0**-40, band: float = 2.0**-20) -> int:
    """SVD rank with an explicit ambiguity band.

    Singular values below tol*max count as zero, above band*max as nonzero;
    anything between triggers one higher-precision retry and then a
    PrecisionExhausted, never a silent guess.  Matrices whose largest
    singular value sits below an absolute floor are zero outright: the
    operators have O(1) structure constants, so an all-tiny matrix is
    roundoff residue of an identically zero map, and relative
    thresholding must not resurrect it.
    """
    import numpy as np

    rows = [r for r in rows if r]
    if not rows:
        return 0
    cols = sorted({c for r in rows for c in r})
    col_index = {c: j for j, c in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)), dtype=complex)
    for i, r in enumerate(rows):
        for c, v in r.items():
            mat[i, col_index[c]] = v
    sv = np.linalg.svd(mat, compute_uv=False)
    top = sv[0] if len(sv) else 0.0
    if top <= 2.0**-30:
        return 0
    rel = sv / top
    if not ((rel > tol) & (rel < band)).any():
        return int((rel >= band).sum())
    # ambiguity band hit: retry the decomposition at higher precision
    import mpmath

    with mpmath.workprec(160):
        mm = mpmath.matrix(
            [[mpmath.mpc(mat[i, j]) for j in range(mat.shape[1])] for i in range(mat.shape[0])]
        )
        sv2 = mpmath.svd_c(mm, compute_uv=False)
        vals = sorted((float(sv2[i]) for i in range(sv2.rows)), reverse=True)
    rel2 = [v / vals[0] for v in vals]
    if any(tol < v < band for v in rel2):
        raise PrecisionExhausted("singular value inside the ambiguity band")
    return sum(1 for v in rel2 if v >= band)


def operator_rows(algebra: FormAlgebra, op, basis: list[int]) -> list[dict]:
    """Images of basis monomials under op, as sparse rows."""
    return [op({m: algebra.one}) for m in basis]


def _stacked_rows(algebra: FormAlgebra, basis: list[int]) -> list[dict]:
    """Rows of the stacked (del, dbar) operator with tagged columns."""
    out = []
    for m in basis:
        row: dict = {}
        for col, v in algebra.del_({m: algebra.one}).items():
            row[(0, col)] = v
        for col, v in algebra.delbar({m: algebra.one}).items():
            row[(1, col)] = v
        out.append(row)
    return out


def _rank(algebra: FormAlgebra, rows: list[dict]) -> int:
    if algebra.exact:
        return exact_rank(rows)
    if algebra.rank_tol is not None:
        return numeric_rank(rows, tol=algebra.rank_tol)
    return numeric_rank(rows)


def dolbeault_dim(algebra: FormAlgebra, p: int, q: int) -> int:
    dom = algebra.basis_pq(p, q)
    below = algebra.basis_pq(p, q - 1) if q > 0 else []
    r_out = _rank(algebra, operator_rows(algebra, algebra.delbar, dom))
    r_in = _rank(algebra, operator_rows(algebra, algebra.delbar, below))
    return len(dom) - r_out - r_in


def derham_dim(algebra: FormAlgebra, k: int) -> int:
    dom = algebra.basis_k(k)
    below = algebra.basis_k(k - 1) if k > 0 else []
    r_out = _rank(algebra, operator_rows(algebra, algebra.d, dom))
    r_in = _rank(algebra, operator_rows(algebra, algebra.d, below))
    return len(dom) - r_out - r_in


def bottchern_dim(algebra: FormAlgebra, p: int, q: int) -> int:
    """dim ker(del) ∩ ker(dbar) on (p,q) minus rank of del dbar into (p,q)."""
    dom = algebra.basis_pq(p, q)
    kernel_dim = len(dom) - _rank(algebra, _stacked_rows(algebra, dom))
    if p > 0 and q > 0:
        below = algebra.basis_pq(p - 1, q - 1)
        dd = lambda f: algebra.del_(algebra.delbar(f))
        r_dd = _rank(algebra, operator_rows(algebra, dd, below))
    else:
        r_dd = 0
    return kernel_dim - r_dd


def cohomology_dim(source, flavor: str, degree, backend: str = "both", rank_tol: float | None = None) -> int:
    """Cohomology dimension of the invariant complex.

    source is an OTStructure (both backends derive from it) or a
    StructureConstants instance (its own backend only).  flavor selects
    dolbeault (degree = (p, q)), derham (degree = k), or bottchern
    (degree = (p, q)).  backend "both" computes exact-generic and
    numeric-true dimensions and raises BackendDisagreement on mismatch.
    """
    algebras = _algebras_for(source, backend, rank_tol)
    dims = []
    for alg in algebras:
        if flavor == "dolbeault":
            p, q = degree
            dims.append(dolbeault_dim(alg, p, q))
        elif flavor == "derham":
            dims.append(derham_dim(alg, int(degree)))
        elif flavor == "bottchern":
            p, q = degree
            dims.append(bottchern_dim(alg, p, q))
        else:
            raise ValueError(f"unknown flavor {flavor!r}")
    if len(dims) == 2 and dims[0] != dims[1]:
        raise BackendDisagreement(
            f"{flavor} {degree}: exact {dims[0]} != numeric {dims[1]}"
        )
    return dims[0]


def _algebras_for(source, backend: str, rank_tol: float | None = None) -> list[FormAlgebra]:
    if isinstance(source, StructureConstants):
        return [FormAlgebra(source, rank_tol)]
    if backend == "exact":
        return [FormAlgebra(generic_constants(source.s, source.t), rank_tol)]
    if backend == "numeric":
        return [FormAlgebra(true_constants(source), rank_tol)]
    if backend == "both":
        return [
            FormAlgebra(generic_constants(source.s, source.t), rank_tol),
            FormAlgebra(true_constants(source), rank_tol),
        ]
    raise ValueError(f"unknown backend {backend!r}")


def d_squared_scan(algebra: FormAlgebra) -> bool:
    """Check dbar^2 = 0, del^2 = 0 and del dbar + dbar del = 0 on every
    monomial of the complex.  A False return means the structure
    constants fail integrability, which no valid input can produce."""
    for m in range(1 << algebra.n_gen):
        f = algebra.form([(m, 1)])
        if not algebra.is_zero_form(algebra.delbar(algebra.delbar(f))):
            return False
        if not algebra.is_zero_form(algebra.del_(algebra.del_(f))):
            return False
        anti = algebra.add(
            algebra.del_(algebra.delbar(f)),
            algebra.delbar(algebra.del_(f)),
        )
        if not algebra.is_zero_form(anti):
            return False
    return True


def is_bc_harmonic(algebra: FormAlgebra, f: dict) -> bool:
    """Kernel test: del f = 0, dbar f = 0, and del dbar star f = 0.

    Phrased through kernels only, so it is independent of the overall sign
    conventions in the star operator.
    """
    if not algebra.is_zero_form(algebra.del_(f)):
        return False
    if not algebra.is_zero_form(algebra.delbar(f)):
        return False
    return algebra.is_zero_form(algebra.del_(algebra.delbar(algebra.star(f))))
