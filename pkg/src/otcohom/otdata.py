"""OT structure data: log lattice, solvmanifold coefficients, admissibility.

From a field of signature (s, t) and s totally positive units this layer
certifies the rank-s log lattice (matrix X), solves for the real coefficient
matrix B (X*B equals the complex-column block of the log vectors) and the
argument matrix C (principal-branch arguments of the complex embedding
values), and decides admissibility of index triples (J, K, L) by certified
interval evaluation of the character, optionally backed by an exact
composed-product certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import iv

from . import polys
from .errors import (
    DegenerateLattice,
    DeltaNotInvariant,
    NotTotallyPositiveUnit,
    OtcohomError,
    PrecisionExhausted,
    RankMismatch,
)
from .intervals import (
    CIv,
    arg_iv,
    eval_poly_civ,
    frac_iv,
    iv_contains,
    iv_width,
    prec_ctx,
)
from .numfield import (
    PRECISION_CAP,
    PRECISION_DEFAULT,
    AlgebraicNumber,
    EmbeddingSet,
    FieldSpec,
    check_unit,
    compute_embeddings,
    element,
    embed_interval,
    log_vector,
    mult_matrix,
    refine_embeddings,
)

Triple = tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

# widths below this certify an interval admissibility verdict
DECISION_WIDTH = Fraction(1, 2**64)
# exact certificate runs automatically while n**m stays at or under this
CERT_DEGREE_AUTO = 1024


@dataclass(eq=False)
class OTStructure:
    """Certified structure data for one OT manifold."""

    field: FieldSpec
    s: int
    t: int
    units: tuple[AlgebraicNumber, ...]
    emb: EmbeddingSet
    precision_bits: int
    precision_cap: int
    X: tuple  # s x s interval matrix, rows p(l(u_i))
    B: tuple  # s x t interval matrix, X*B = complex log block
    C: tuple  # s x t interval matrix, X*C = principal arguments
    mult_mats: tuple  # integer matrices of the unit actions
    branch_shifts: tuple | None


@dataclass(frozen=True)
class AdmissibilityVerdict:
    """Outcome of a character triviality decision.

    status is "admissible", "not_admissible", or "uncertain".  witness names
    the refuting generator and its character enclosure for the negative
    case.  certified marks verdicts backed by the exact composed-product
    certificate (positive case) or by the rational-endpoint interval
    exclusion (negative case).
    """

    status: str
    witness: tuple | None = None
    certified: bool = False


def all_triples(s: int, t: int) -> list[Triple]:
    """Every (J, K, L) with J in [1..s], K, L in [1..t], deterministic order."""
    out: list[Triple] = []
    for jm in range(2**s):
        J = tuple(i + 1 for i in range(s) if jm >> i & 1)
        for km in range(2**t):
            K = tuple(i + 1 for i in range(t) if km >> i & 1)
            for lm in range(2**t):
                L = tuple(i + 1 for i in range(t) if lm >> i & 1)
                out.append((J, K, L))
    return out


def _det_iv(mat) -> "iv.mpf":
    """Cofactor-expansion determinant of a small interval matrix."""
    n = len(mat)
    if n == 0:
        return iv.mpf(1)
    if n == 1:
        return mat[0][0]
    acc = iv.mpf(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = mat[0][j] * _det_iv(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _solve_cramer(mat, rhs, det) -> list:
    """Columns of the solution of mat * x = rhs via Cramer's rule."""
    n = len(mat)
    out = []
    for j in range(n):
        repl = [[rhs[i] if c == j else mat[i][c] for c in range(n)] for i in range(n)]
        out.append(_det_iv(repl) / det)
    return out


def _log_rows(units, emb):
    """Log vectors for all generators at the embedding precision."""
    return [log_vector(u, emb) for u in units]


def verify_admissible_subgroup(
    field: FieldSpec,
    units,
    precision_bits: int = PRECISION_DEFAULT,
    precision_cap: int = PRECISION_CAP,
) -> tuple[EmbeddingSet, tuple]:
    """Certify the proposed generators and the log lattice matrix X.

    Checks the generator count against s, total positivity of every unit,
    and nonsingularity of X (escalating precision until the determinant
    excludes zero).  Returns the embedding set and X at the final precision.
    """
    emb = compute_embeddings(field, precision_bits, require_ot=True)
    if len(units) != emb.s:
        raise RankMismatch(f"need {emb.s} generators for s={emb.s}, got {len(units)}")
    for u in units:
        verdict = check_unit(u, precision_bits)
        if verdict != "unit_totally_positive":
            raise NotTotallyPositiveUnit(f"{u.coords}: {verdict}")
    bits = precision_bits
    while True:
        rows = _log_rows(units, emb)
        with prec_ctx(bits + 32):
            X = tuple(tuple(r.entries[j] for j in range(emb.s)) for r in rows)
            det = _det_iv([list(row) for row in X])
        if not iv_contains(det, 0):
            return emb, X
        if bits >= precision_cap:
            raise DegenerateLattice(
                f"det(X) enclosure still contains 0 at {bits} bits"
            )
        bits *= 2
        emb = refine_embeddings(emb, bits)


def build_ot_structure(
    field: FieldSpec,
    units,
    precision_bits: int = PRECISION_DEFAULT,
    precision_cap: int = PRECISION_CAP,
    integral_basis=None,
    branch_shifts=None,
) -> OTStructure:
    """Assemble the full certified OT structure.

    branch_shifts, when given, is an s x t integer matrix adding 2*pi*m to
    the argument entries before solving for C; cohomological output must be
    invariant under such shifts.  integral_basis rows express an alternative
    integral model in power-basis coordinates; every unit action must keep
    it stable (DeltaNotInvariant otherwise).
    """
    units = tuple(
        u if isinstance(u, AlgebraicNumber) else element(field, u)
        for u in units
    )
    emb, X = verify_admissible_subgroup(field, units, precision_bits, precision_cap)
    bits = emb.precision_bits
    while True:
        rows = _log_rows(units, emb)
        with prec_ctx(bits + 32):
            X = tuple(tuple(r.entries[j] for j in range(emb.s)) for r in rows)
            det = _det_iv([list(row) for row in X])
            if iv_contains(det, 0):
                ok = False
            else:
                ok = True
                cols_B = []
                cols_C = []
                for k in range(emb.t):
                    rhs_b = [rows[i].entries[emb.s + k] for i in range(emb.s)]
                    cols_B.append(_solve_cramer([list(r) for r in X], rhs_b, det))
                    args = []
                    for i in range(emb.s):
                        val = embed_interval(emb, units[i], emb.s + k)
                        theta = arg_iv(val)
                        if iv_width(theta) > 3:
                            # rectangle straddles the branch cut
                            ok = False
                            break
                        if branch_shifts is not None:
                            theta = theta + 2 * iv.pi * int(branch_shifts[i][k])
                        args.append(theta)
                    if not ok:
                        break
                    cols_C.append(
                        _solve_cramer([list(r) for r in X], args, det)
                    )
        if ok:
            if emb.t == 1:
                # norm-one row sums force the single b column to be -1
                # exactly; the solve only encloses it, so certify the
                # enclosure and collapse it (midpoint noise here would
                # otherwise leak into the numeric backend's constants)
                for j in range(emb.s):
                    if not iv_contains(cols_B[0][j], -1):
                        raise OtcohomError(
                            "b enclosure misses -1 in the t=1 column; "
                            "the log-lattice arithmetic is inconsistent"
                        )
                with prec_ctx(bits + 32):
                    cols_B[0] = [frac_iv(Fraction(-1)) for _ in range(emb.s)]
            B = tuple(
                tuple(cols_B[k][j] for k in range(emb.t)) for j in range(emb.s)
            )
            C = tuple(
                tuple(cols_C[k][j] for k in range(emb.t)) for j in range(emb.s)
            )
            break
        if bits >= precision_cap:
            raise PrecisionExhausted(f"structure solve undecided at {bits} bits")
        bits *= 2
        emb = refine_embeddings(emb, bits)

    mats = []
    for u in units:
        m = mult_matrix(u)
        if integral_basis is None:
            entries = [[_as_int(x, u) for x in row] for row in m]
        else:
            entries = _conjugate_by_basis(m, integral_basis, u)
        mats.append(tuple(tuple(row) for row in entries))
    return OTStructure(
        field=field,
        s=emb.s,
        t=emb.t,
        units=units,
        emb=emb,
        precision_bits=bits,
        precision_cap=precision_cap,
        X=X,
        B=B,
        C=C,
        mult_mats=tuple(mats),
        branch_shifts=None if branch_shifts is None else tuple(
            tuple(int(x) for x in row) for row in branch_shifts
        ),
    )


def _as_int(x: Fraction, u) -> int:
    if x.denominator != 1:
        raise DeltaNotInvariant(
            f"unit {u.coords} does not act integrally: coefficient {x}"
        )
    return int(x)


def _conjugate_by_basis(m, basis, u):
    """Unit action in a custom integral model G*M*G^(-1), must be integral."""
    g = [[Fraction(x) for x in row] for row in basis]
    n = len(g)
    # solve G * out = G * M  ->  out = G M G^{-1} acting on row vectors
    gm = [
        [sum(g[i][a] * Fraction(m[a][j]) for a in range(n)) for j in range(n)]
        for i in range(n)
    ]
    ginv = _invert_fraction(g)
    out = [
        [sum(gm[i][a] * ginv[a][j] for a in range(n)) for j in range(n)]
        for i in range(n)
    ]
    return [[_as_int(x, u) for x in row] for row in out]


def _invert_fraction(mat):
    n = len(mat)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise DeltaNotInvariant("integral basis matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


# --- admissibility ----------------------------------------------------------

def character_value(ot: OTStructure, gen_index: int, triple: Triple) -> CIv:
    """Certified rectangle for the character of one generator.

    The character multiplies sigma_j over j in J (real places), sigma_(s+k)
    over k in K, and conjugated sigma_(s+l) over l in L.
    """
    return _character_at(ot.field, ot.units, ot.emb, gen_index, triple)


def _character_at(field, units, emb, gen_index, triple) -> CIv:
    J, K, L = triple
    u = units[gen_index]
    with prec_ctx(emb.precision_bits + 32):
        acc = CIv.from_fracs(1)
        for j in J:
            acc = acc * CIv(embed_interval(emb, u, j - 1), frac_iv(0))
        for k in K:
            acc = acc * embed_interval(emb, u, emb.s + k - 1)
        for l in L:
            acc = acc * embed_interval(emb, u, emb.s + l - 1).conj()
    return acc


def _log_modulus(rows, gen_index, triple, s):
    """Interval for log |character|: sum l_j + half the complex entries."""
    J, K, L = triple
    r = rows[gen_index].entries
    acc = iv.mpf(0)
    for j in J:
        acc = acc + r[j - 1]
    for k in K:
        acc = acc + r[s + k - 1] / 2
    for l in L:
        acc = acc + r[s + l - 1] / 2
    return acc


@lru_cache(maxsize=None)
def _composed_product(field: FieldSpec, coords: tuple, m: int):
    """Monic integer polynomial whose roots are all m-fold products of
    embedding values of the unit, via power sums of the regular
    representation.  Degree n**m."""
    from .numfield import element

    n = field.degree
    deg = n**m
    mat = [[int(x) for x in row] for row in mult_matrix(element(field, coords))]
    power_sums = []
    acc = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(deg):
        acc = _mat_mul_int(acc, mat)
        power_sums.append(sum(acc[i][i] for i in range(n)) ** m)
    coeffs = polys.newton_to_coeffs([Fraction(p) for p in power_sums], deg)
    for c in coeffs:
        # symmetric functions of algebraic integers must be integers
        assert c.denominator == 1, "composed product lost integrality"
    return tuple(coeffs)


def _mat_mul_int(a, b):
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def _certificate_verdict(field, coords, triple, char_rect: CIv, bits: int) -> str:
    """Exact certificate: "admissible", "not_admissible", or "undecided".

    Q(x) = P(x+1) for the composed product P of degree n**m vanishes at
    v - 1, where v is the character value.  A zero constant-coefficient
    multiplicity mu >= 1 together with 0 excluded from the deflated
    polynomial over the rectangle proves v = 1 exactly; mu = 0 proves no
    m-fold product equals 1 at all.
    """
    J, K, L = triple
    m = len(J) + len(K) + len(L)
    if m == 0:
        return "admissible"
    p = _composed_product(field, coords, m)
    q = polys.taylor_shift(p, Fraction(1))
    mu = polys.trailing_zeros(q)
    if mu == 0:
        return "not_admissible"
    deflated = list(q)[mu:]
    with prec_ctx(bits + 32):
        val = eval_poly_civ(deflated, char_rect - CIv.from_fracs(1))
        if val.excludes(0) and char_rect.contains(1):
            return "admissible"
    return "undecided"


def is_admissible_triple(
    ot: OTStructure, triple: Triple, certify: str = "auto"
) -> AdmissibilityVerdict:
    """Decide whether the triple's character is trivial on every generator.

    Interval route: the character rectangle of each generator must enclose
    1 and the log-modulus must enclose 0, at rectangle width below 2^-64;
    any generator whose rectangle excludes 1 refutes admissibility with a
    witness.  certify in {"auto", "always", "never"} controls the exact
    composed-product certificate; "auto" runs it while n**m stays small.
    """
    if certify not in ("auto", "always", "never"):
        raise ValueError(f"bad certify mode {certify!r}")
    J, K, L = triple
    m = len(J) + len(K) + len(L)
    if m == 0:
        return AdmissibilityVerdict(status="admissible", certified=True)
    emb = ot.emb
    bits = emb.precision_bits
    while True:
        rows = _log_rows(ot.units, emb)
        worst = Fraction(0)
        refute = None
        values = []
        for i in range(len(ot.units)):
            v = _character_at(ot.field, ot.units, emb, i, triple)
            with prec_ctx(bits + 32):
                lm = _log_modulus(rows, i, triple, ot.s)
            if v.excludes(1) or not iv_contains(lm, 0):
                refute = (i, v.endpoints())
                values = [v]
                break
            values.append(v)
            worst = max(worst, v.width())
        if refute is not None:
            return AdmissibilityVerdict(
                status="not_admissible", witness=refute, certified=True
            )
        if worst <= DECISION_WIDTH:
            certified = False
            if certify == "always" or (
                certify == "auto" and ot.field.degree**m <= CERT_DEGREE_AUTO
            ):
                certified = True
                for i, v in enumerate(values):
                    out = _certificate_verdict(
                        ot.field, ot.units[i].coords, triple, v, bits
                    )
                    if out == "not_admissible":
                        raise OtcohomError(
                            "certificate contradicts interval admissibility"
                        )
                    if out != "admissible":
                        certified = False
                        break
            return AdmissibilityVerdict(status="admissible", certified=certified)
        if bits >= ot.precision_cap:
            return AdmissibilityVerdict(status="uncertain")
        bits *= 2
        emb = refine_embeddings(emb, bits)


def certificate_verdict(ot: OTStructure, triple: Triple) -> str:
    """Standalone exact-certificate route over all generators.

    Returns "admissible" only when every generator's certificate confirms
    triviality, "not_admissible" when some generator's composed product
    rules the value 1 out entirely, else "undecided".
    """
    J, K, L = triple
    m = len(J) + len(K) + len(L)
    if m == 0:
        return "admissible"
    emb = ot.emb
    bits = emb.precision_bits
    while True:
        outs = []
        for i in range(len(ot.units)):
            v = _character_at(ot.field, ot.units, emb, i, triple)
            outs.append(
                _certificate_verdict(ot.field, ot.units[i].coords, triple, v, bits)
            )
        if any(o == "not_admissible" for o in outs):
            return "not_admissible"
        if all(o == "admissible" for o in outs):
            return "admissible"
        if bits >= ot.precision_cap:
            return "undecided"
        bits *= 2
        emb = refine_embeddings(emb, bits)
