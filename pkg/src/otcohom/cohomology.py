"""Cohomology tables assembled from admissibility data.

Hodge numbers follow the counting formula
    h^{p,q} = sum over p1+p2=p, q1+q2=q of C(s, q1) * rho_{p1,p2,q2},
where rho counts admissible triples by block sizes; Betti numbers sum
binomials over admissible triples; the Bott-Chern table comes either from
the closed form valid for t = 1 or from rank computations on the invariant
complex.  Every table has an independent cross-check and any Uncertain
admissibility verdict aborts the computation explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from . import cealgebra
from .errors import NotTypeS1, OtcohomError, UndecidedCharacter
from .otdata import OTStructure, Triple, all_triples, is_admissible_triple


@dataclass(frozen=True)
class BasisQuadruple:
    """One Dolbeault basis element: abar-block I is free, (J, K, L) is an
    admissible triple."""

    I: tuple[int, ...]
    J: tuple[int, ...]
    K: tuple[int, ...]
    L: tuple[int, ...]

    def bidegree(self) -> tuple[int, int]:
        return len(self.J) + len(self.K), len(self.I) + len(self.L)

    def monomial(self) -> cealgebra.FormMonomial:
        return cealgebra.FormMonomial(
            alpha=self.J, abar=self.I, beta=self.K, bbar=self.L
        )


def admissible_triples(ot: OTStructure, certify: str = "auto") -> list[Triple]:
    """All admissible (J, K, L), deterministic order.

    Raises UndecidedCharacter if any verdict is uncertain; a table built on
    a guess would be worthless.
    """
    cache = ot.__dict__.setdefault("_admissible_cache", {})
    if certify in cache:
        return cache[certify]
    out = []
    for triple in all_triples(ot.s, ot.t):
        verdict = is_admissible_triple(ot, triple, certify=certify)
        if verdict.status == "uncertain":
            raise UndecidedCharacter(f"admissibility of {triple} undecided")
        if verdict.status == "admissible":
            out.append(triple)
    cache[certify] = out
    return out


def dolbeault_basis(ot: OTStructure) -> list[BasisQuadruple]:
    """Basis quadruples (I free, triple admissible), deterministic order."""
    triples = admissible_triples(ot)
    out = []
    for im in range(2**ot.s):
        I = tuple(i + 1 for i in range(ot.s) if im >> i & 1)
        for (J, K, L) in triples:
            out.append(BasisQuadruple(I=I, J=J, K=K, L=L))
    return out


def rho_counts(ot: OTStructure) -> dict[tuple[int, int, int], int]:
    """rho_{p1,p2,q2}: admissible triples with |J|=p1, |K|=p2, |L|=q2."""
    counts: dict[tuple[int, int, int], int] = {}
    for (J, K, L) in admissible_triples(ot):
        key = (len(J), len(K), len(L))
        counts[key] = counts.get(key, 0) + 1
    return counts


def hodge_numbers(ot: OTStructure) -> list[list[int]]:
    """Hodge table h[p][q], p, q in 0..s+t, via the rho counting formula.

    Cross-checked against direct bidegree enumeration of the basis
    quadruples; disagreement would mean an internal inconsistency.
    """
    n = ot.s + ot.t
    rho = rho_counts(ot)
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for p in range(n + 1):
        for q in range(n + 1):
            acc = 0
            for (p1, p2, q2), cnt in rho.items():
                if p1 + p2 == p and 0 <= q - q2 <= n:
                    acc += comb(ot.s, q - q2) * cnt
            table[p][q] = acc
    direct = [[0] * (n + 1) for _ in range(n + 1)]
    for quad in dolbeault_basis(ot):
        p, q = quad.bidegree()
        direct[p][q] += 1
    if direct != table:
        raise OtcohomError("hodge counting formula disagrees with enumeration")
    return table


def betti_numbers(ot: OTStructure) -> list[int]:
    """b_k = sum over admissible triples of C(s, k - |J| - |K| - |L|)."""
    n = ot.s + ot.t
    out = []
    sizes = [len(J) + len(K) + len(L) for (J, K, L) in admissible_triples(ot)]
    for k in range(2 * n + 1):
        out.append(sum(comb(ot.s, k - m) for m in sizes if 0 <= k - m <= ot.s))
    return out


def frolicher_check(ot: OTStructure) -> dict:
    """Frolicher comparison per total degree.

    Returns per-k sums of Hodge numbers against Betti numbers; the
    inequality must hold everywhere and, for this family, with equality.
    """
    n = ot.s + ot.t
    h = hodge_numbers(ot)
    b = betti_numbers(ot)
    sums = [
        sum(h[p][k - p] for p in range(n + 1) if 0 <= k - p <= n)
        for k in range(2 * n + 1)
    ]
    return {
        "hodge_sums": sums,
        "betti": b,
        "inequality_holds": all(sk >= bk for sk, bk in zip(sums, b)),
        "equality_holds": sums == b,
    }


def bc_closed_form_s1(ot_or_s) -> dict:
    """Closed-form Bott-Chern table and representatives for t = 1.

    Accepts an OTStructure with t = 1 (NotTypeS1 otherwise) or a bare s.
    Entries: (0,0) once; (i,i)-type (1,1) classes alpha_i ^ abar_i; the
    families (p, s+1) spanned by alpha_J ^ abar_[s] ^ beta ^ bbar with
    |J| = p-1 and (s+1, q) by their conjugate-shaped partners.
    """
    if isinstance(ot_or_s, OTStructure):
        if ot_or_s.t != 1:
            raise NotTypeS1(f"closed form needs t=1, got t={ot_or_s.t}")
        s = ot_or_s.s
    else:
        s = int(ot_or_s)
        if s < 1:
            raise NotTypeS1("need s >= 1")
    full = tuple(range(1, s + 1))
    reps: dict[tuple[int, int], list[cealgebra.FormMonomial]] = {}
    reps[(0, 0)] = [cealgebra.FormMonomial((), (), (), ())]
    reps[(1, 1)] = [
        cealgebra.FormMonomial((i,), (i,), (), ()) for i in full
    ]
    for p in range(1, s + 2):
        entries = [
            cealgebra.FormMonomial(J, full, (1,), (1,))
            for J in _subsets(full, p - 1)
        ]
        reps.setdefault((p, s + 1), []).extend(entries)
    for q in range(1, s + 1):
        entries = [
            cealgebra.FormMonomial(full, J, (1,), (1,))
            for J in _subsets(full, q - 1)
        ]
        reps.setdefault((s + 1, q), []).extend(entries)
    return {
        "dims": {pq: len(v) for pq, v in reps.items()},
        "representatives": reps,
    }


def _subsets(pool: tuple[int, ...], size: int) -> list[tuple[int, ...]]:
    from itertools import combinations

    return [tuple(c) for c in combinations(pool, size)]


def bc_from_lie_algebra(ot: OTStructure, backend: str = "both", rank_tol: float | None = None) -> dict:
    """Bott-Chern dimensions by rank computation over all bidegrees.

    For t = 1 additionally verifies that every closed-form representative
    is Bott-Chern harmonic on the requested backends and that the listed
    representatives per bidegree number exactly the closed-form entry.
    The returned table is the honest rank computation; callers comparing
    it with the closed form should expect extra middle-bidegree classes
    when s >= 2 (see bc_rank_vs_closed_form).
    """
    n = ot.s + ot.t
    out: dict[tuple[int, int], int] = {}
    for p in range(n + 1):
        for q in range(n + 1):
            d = cealgebra.cohomology_dim(ot, "bottchern", (p, q), backend, rank_tol)
            if d:
                out[(p, q)] = d
    if ot.t == 1:
        closed = bc_closed_form_s1(ot)
        for pq, monos in closed["representatives"].items():
            if len(monos) != closed["dims"][pq]:
                raise OtcohomError(
                    f"representative count at {pq} disagrees with table"
                )
            for alg in cealgebra._algebras_for(ot, backend, rank_tol):
                for m in monos:
                    f = alg.form([(m, 1)])
                    if not cealgebra.is_bc_harmonic(alg, f):
                        raise OtcohomError(
                            f"closed-form representative {m} at {pq} "
                            "fails the harmonicity test"
                        )
    return out


def bc_rank_vs_closed_form(ot: OTStructure, backend: str = "both", rank_tol: float | None = None) -> dict:
    """Compare the two Bott-Chern routes entry by entry (t = 1 only).

    Returns the rank table, the closed-form table, the per-bidegree
    surplus of the rank route, and an agreement flag.  The rank route
    always dominates: for s = 1 the surplus kernel vectors are exact so
    the tables coincide, while for s >= 2 genuine extra classes survive
    at middle bidegrees (the smallest is a two-term combination in
    bidegree (1,2)), so agreement fails even though every closed-form
    entry is reproduced.
    """
    rank_table = bc_from_lie_algebra(ot, backend, rank_tol)
    closed = bc_closed_form_s1(ot)["dims"]
    keys = sorted(set(rank_table) | set(closed))
    surplus = {}
    deficit = {}
    for pq in keys:
        d = rank_table.get(pq, 0) - closed.get(pq, 0)
        if d > 0:
            surplus[pq] = d
        elif d < 0:
            deficit[pq] = -d
    if deficit:
        raise OtcohomError(
            f"rank computation fell below the closed form at {deficit}; "
            "this contradicts the kernel containment and flags a bug"
        )
    return {
        "rank": rank_table,
        "closed_form": closed,
        "surplus": surplus,
        "agree": not surplus,
    }


def at_deficiency(bc_dims: dict, betti: list[int], n: int) -> list[int]:
    """Deficiency per degree in the degeneration inequality:
    sum over p+q=k of (bc^{p,q} + bc^{n-p,n-q}) minus 2 b_k."""
    out = []
    for k in range(2 * n + 1):
        acc = 0
        for p in range(k + 1):
            q = k - p
            if p > n or q > n:
                continue
            acc += bc_dims.get((p, q), 0) + bc_dims.get((n - p, n - q), 0)
        out.append(acc - 2 * betti[k])
    return out


def formality_check(ot: OTStructure) -> bool:
    """Wedge closure at the index level.

    The product of two basis quadruples is zero (overlapping blocks) or
    must land on a basis quadruple again, meaning the union triple stays
    admissible.
    """
    triples = set(admissible_triples(ot))
    quads = dolbeault_basis(ot)
    for a in quads:
        for b in quads:
            if set(a.I) & set(b.I) or set(a.J) & set(b.J):
                continue
            if set(a.K) & set(b.K) or set(a.L) & set(b.L):
                continue
            union = (
                tuple(sorted(set(a.J) | set(b.J))),
                tuple(sorted(set(a.K) | set(b.K))),
                tuple(sorted(set(a.L) | set(b.L))),
            )
            if union not in triples:
                return False
    return True


def star_closure_check(ot: OTStructure) -> bool:
    """Complement closure: the complementary quadruple of every basis
    quadruple is again a basis quadruple."""
    triples = set(admissible_triples(ot))
    full_s = set(range(1, ot.s + 1))
    full_t = set(range(1, ot.t + 1))
    for (J, K, L) in triples:
        comp = (
            tuple(sorted(full_s - set(J))),
            tuple(sorted(full_t - set(K))),
            tuple(sorted(full_t - set(L))),
        )
        if comp not in triples:
            return False
    return True


def hodge_symmetry_witness(ot: OTStructure) -> dict:
    """Quantified failure of Hodge symmetry: h^{0,1} vs h^{1,0}."""
    h = hodge_numbers(ot)
    return {
        "h01": h[0][1],
        "h10": h[1][0],
        "hodge_symmetry_violated": h[0][1] != h[1][0],
    }


@dataclass
class CohomologyReport:
    """Integer-valued summary of one run; everything serializes exactly."""

    s: int
    t: int
    betti: list[int] | None = None
    hodge: list[list[int]] | None = None
    bott_chern: dict | None = None
    checks: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        bc = None
        if self.bott_chern is not None:
            n = self.s + self.t
            bc = [
                [self.bott_chern.get((p, q), 0) for q in range(n + 1)]
                for p in range(n + 1)
            ]
        return {
            "s": self.s,
            "t": self.t,
            "betti": self.betti,
            "hodge": self.hodge,
            "bott_chern": bc,
            "checks": self.checks,
        }


def build_report(
    ot: OTStructure,
    compute: tuple = ("betti", "hodge", "bottchern", "checks"),
    rank_exponent: int = 40,
) -> CohomologyReport:
    """Assemble the requested tables with their cross-checks.

    For t = 1 the published Bott-Chern table is the closed form; the
    rank computation on both scalar backends runs alongside and its
    agreement status is recorded in the checks rather than enforced
    (the rank route genuinely carries extra middle-bidegree classes
    once s >= 2; the closed form is the asserted quotient-level table).
    For t >= 2 only the rank computation exists and the table is
    flagged as Lie-algebra-level.

    A failed degeneration equality aborts with a diagnostic dump: that
    equality is unconditional, so its failure means an implementation
    bug or an undecided character slipped through.
    """
    report = CohomologyReport(s=ot.s, t=ot.t)
    n = ot.s + ot.t
    rank_tol = 2.0 ** -rank_exponent
    betti = betti_numbers(ot)
    if "betti" in compute:
        report.betti = betti
    if "hodge" in compute:
        report.hodge = hodge_numbers(ot)
    bc = None
    bc_agree = None
    if "bottchern" in compute:
        if ot.t == 1:
            cmp = bc_rank_vs_closed_form(ot, backend="both", rank_tol=rank_tol)
            bc = cmp["closed_form"]
            bc_agree = cmp["agree"]
        else:
            bc = bc_from_lie_algebra(ot, backend="both", rank_tol=rank_tol)
        report.bott_chern = bc
    if "checks" in compute:
        fr = frolicher_check(ot)
        if not fr["equality_holds"]:
            raise OtcohomError(
                "degeneration equality failed; diagnostic dump: "
                f"hodge antidiagonal sums {fr['hodge_sums']} vs "
                f"betti {fr['betti']}"
            )
        checks = {
            "frolicher": True,
            "star_closure": star_closure_check(ot),
            "formality": formality_check(ot),
        }
        checks.update(hodge_symmetry_witness(ot))
        if bc_agree is not None:
            checks["bc_rank_matches_closed_form"] = bc_agree
        if ot.t >= 2 and bc is not None:
            checks["bott_chern_scope"] = "lie_algebra_level"
        if bc is not None:
            delta = at_deficiency(bc, betti, n)
            checks["at_deficiency"] = delta
            checks["at_failure_set"] = [k for k, v in enumerate(delta) if v]
        report.checks = checks
    return report
