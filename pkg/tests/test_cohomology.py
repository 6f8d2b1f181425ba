"""Cohomology tables, closed forms, dualities and the report assembly."""

import json

import pytest

from otcohom import cealgebra
from otcohom.cohomology import (
    admissible_triples,
    at_deficiency,
    bc_closed_form_s1,
    bc_from_lie_algebra,
    bc_rank_vs_closed_form,
    betti_numbers,
    build_report,
    dolbeault_basis,
    formality_check,
    frolicher_check,
    hodge_numbers,
    hodge_symmetry_witness,
    rho_counts,
    star_closure_check,
)
from otcohom.errors import NotTypeS1

CUBIC_BETTI = [1, 1, 0, 1, 1]
CUBIC_HODGE = [[1, 1, 0], [0, 0, 0], [0, 1, 1]]
CUBIC_BC = {(0, 0): 1, (1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): 1}

QUARTIC_BETTI = [1, 2, 1, 0, 1, 2, 1]
QUARTIC_HODGE = [
    [1, 2, 1, 0],
    [0, 0, 0, 0],
    [0, 0, 0, 0],
    [0, 1, 2, 1],
]
QUARTIC_BC = {
    (0, 0): 1, (1, 1): 2, (1, 3): 1, (2, 3): 2,
    (3, 1): 1, (3, 2): 2, (3, 3): 1,
}
QUARTIC_SURPLUS = {(1, 2): 1, (2, 1): 1, (2, 2): 1}
S3_SURPLUS = {
    (1, 2): 3, (1, 3): 1, (2, 1): 3, (2, 2): 1, (2, 3): 1,
    (3, 1): 1, (3, 2): 1, (3, 3): 3,
}


# --- Hodge and Betti --------------------------------------------------------

def test_cubic_tables(cubic_ot):
    assert betti_numbers(cubic_ot) == CUBIC_BETTI
    assert hodge_numbers(cubic_ot) == CUBIC_HODGE


def test_quartic_tables(quartic_ot):
    assert betti_numbers(quartic_ot) == QUARTIC_BETTI
    assert hodge_numbers(quartic_ot) == QUARTIC_HODGE


def test_rho_formula_vs_direct_enumeration(cubic_ot, quartic_ot):
    """The counting formula and raw bidegree counting are independent
    routes to the same table."""
    for ot in (cubic_ot, quartic_ot):
        n = ot.s + ot.t
        h = hodge_numbers(ot)
        direct = [[0] * (n + 1) for _ in range(n + 1)]
        for quad in dolbeault_basis(ot):
            p, q = quad.bidegree()
            direct[p][q] += 1
        assert direct == h


def test_rho_counts_cubic(cubic_ot):
    assert rho_counts(cubic_ot) == {(0, 0, 0): 1, (1, 1, 1): 1}


def test_hodge_also_matches_rank_route(cubic_ot):
    """Harmonic-basis counting equals the operator-rank computation."""
    n = cubic_ot.s + cubic_ot.t
    h = hodge_numbers(cubic_ot)
    for p in range(n + 1):
        for q in range(n + 1):
            rank_dim = cealgebra.cohomology_dim(
                cubic_ot, "dolbeault", (p, q), backend="both"
            )
            assert rank_dim == h[p][q], (p, q)


def test_frolicher_equality(cubic_ot, quartic_ot):
    for ot in (cubic_ot, quartic_ot):
        fr = frolicher_check(ot)
        assert fr["inequality_holds"]
        assert fr["equality_holds"]
        assert fr["betti"] == betti_numbers(ot)


def test_duality_symmetries(cubic_ot, quartic_ot):
    for ot in (cubic_ot, quartic_ot):
        n = ot.s + ot.t
        h = hodge_numbers(ot)
        b = betti_numbers(ot)
        for p in range(n + 1):
            for q in range(n + 1):
                assert h[p][q] == h[n - p][n - q]
        for k in range(2 * n + 1):
            assert b[k] == b[2 * n - k]


def test_hodge_symmetry_violation(cubic_ot, quartic_ot):
    for ot in (cubic_ot, quartic_ot):
        w = hodge_symmetry_witness(ot)
        assert w["h01"] == ot.s
        assert w["h10"] == 0
        assert w["hodge_symmetry_violated"]


def test_basis_level_checks(cubic_ot, quartic_ot):
    for ot in (cubic_ot, quartic_ot):
        assert star_closure_check(ot)
        assert formality_check(ot)


def test_admissible_triples_deterministic(cubic_ot):
    once = admissible_triples(cubic_ot)
    again = admissible_triples(cubic_ot)
    assert once == again == [((), (), ()), ((1,), (1,), (1,))]


# --- Bott-Chern -------------------------------------------------------------

def test_bc_closed_form_tables():
    assert bc_closed_form_s1(1)["dims"] == CUBIC_BC
    assert bc_closed_form_s1(2)["dims"] == QUARTIC_BC
    with pytest.raises(NotTypeS1):
        bc_closed_form_s1(0)


def test_bc_closed_form_representative_counts():
    for s in (1, 2, 3):
        closed = bc_closed_form_s1(s)
        for pq, monos in closed["representatives"].items():
            assert len(monos) == closed["dims"][pq]
            for m in monos:
                assert m.bidegree() == pq


def test_bc_conjugation_symmetry():
    for s in (1, 2, 3):
        dims = bc_closed_form_s1(s)["dims"]
        assert dims == {(q, p): v for (p, q), v in dims.items()}


def test_cubic_bc_both_routes_agree(cubic_ot):
    cmp = bc_rank_vs_closed_form(cubic_ot)
    assert cmp["agree"]
    assert cmp["surplus"] == {}
    assert cmp["rank"] == CUBIC_BC
    assert cmp["closed_form"] == CUBIC_BC


def test_quartic_bc_rank_surplus_is_frozen(quartic_ot):
    """The rank route reproduces every closed-form entry and carries a
    conjugation-symmetric surplus at the middle bidegrees."""
    cmp = bc_rank_vs_closed_form(quartic_ot)
    assert not cmp["agree"]
    assert cmp["closed_form"] == QUARTIC_BC
    assert cmp["surplus"] == QUARTIC_SURPLUS
    merged = dict(QUARTIC_BC)
    for pq, v in QUARTIC_SURPLUS.items():
        merged[pq] = merged.get(pq, 0) + v
    assert cmp["rank"] == merged
    # surplus is conjugation-symmetric
    assert cmp["surplus"] == {
        (q, p): v for (p, q), v in cmp["surplus"].items()
    }


def test_s3_bc_rank_surplus_is_frozen():
    """Same comparison one signature up, on the exact backend alone."""
    gc = cealgebra.generic_constants(3, 1)
    closed = bc_closed_form_s1(3)["dims"]
    rank = {}
    for p in range(5):
        for q in range(5):
            d = cealgebra.cohomology_dim(gc, "bottchern", (p, q))
            if d:
                rank[(p, q)] = d
    surplus = {
        pq: rank[pq] - closed.get(pq, 0)
        for pq in rank
        if rank[pq] > closed.get(pq, 0)
    }
    assert all(rank.get(pq, 0) >= v for pq, v in closed.items())
    assert surplus == S3_SURPLUS


@pytest.mark.xfail(
    strict=True,
    reason="the rank route carries genuine extra middle-bidegree classes "
    "once s >= 2 (smallest witness: a two-term combination in bidegree "
    "(1,2)); entrywise agreement with the closed form holds only at s = 1",
)
def test_bc_routes_agree_entrywise_s2(quartic_ot):
    rank = bc_from_lie_algebra(quartic_ot)
    assert rank == bc_closed_form_s1(quartic_ot)["dims"]


@pytest.mark.xfail(
    strict=True,
    reason="same extra-class phenomenon as s = 2, exact backend alone",
)
def test_bc_routes_agree_entrywise_s3():
    gc = cealgebra.generic_constants(3, 1)
    closed = bc_closed_form_s1(3)["dims"]
    for p in range(5):
        for q in range(5):
            d = cealgebra.cohomology_dim(gc, "bottchern", (p, q))
            assert d == closed.get((p, q), 0), (p, q)


def test_smallest_extra_class_witness():
    """(alpha_1 + alpha_2) ^ abar_1 ^ abar_2 is d-closed but not in the
    closed-form span at bidegree (1,2); pin it down concretely."""
    alg = cealgebra.FormAlgebra(cealgebra.generic_constants(2, 1))
    a1 = 1 << alg.pos_alpha(1)
    a2 = 1 << alg.pos_alpha(2)
    ab12 = (1 << alg.pos_abar(1)) | (1 << alg.pos_abar(2))
    f = alg.form([(a1 | ab12, 1), (a2 | ab12, 1)])
    assert alg.is_zero_form(alg.del_(f))
    assert alg.is_zero_form(alg.delbar(f))
    # the single-term pieces are not del-closed on their own; only the
    # sum cancels the cross terms, which is why monomial-by-monomial
    # counting misses this class
    assert not alg.is_zero_form(alg.del_(alg.form([(a1 | ab12, 1)])))


def test_closed_form_representatives_are_harmonic(cubic_ot, quartic_ot):
    for ot in (cubic_ot, quartic_ot):
        closed = bc_closed_form_s1(ot)
        for algebra in (
            cealgebra.FormAlgebra(cealgebra.generic_constants(ot.s, ot.t)),
            cealgebra.FormAlgebra(cealgebra.true_constants(ot)),
        ):
            for monos in closed["representatives"].values():
                for m in monos:
                    f = algebra.form([(m, 1)])
                    assert cealgebra.is_bc_harmonic(algebra, f)


# --- degeneration deficiency ------------------------------------------------

def test_at_deficiency_cubic():
    delta = at_deficiency(CUBIC_BC, CUBIC_BETTI, 2)
    assert delta == [0, 0, 2, 0, 0]
    assert [k for k, v in enumerate(delta) if v] == [2]


def test_at_deficiency_quartic():
    delta = at_deficiency(QUARTIC_BC, QUARTIC_BETTI, 3)
    assert delta == [0, 0, 2, 0, 2, 0, 0]
    assert [k for k, v in enumerate(delta) if v] == [2, 4]


def test_at_deficiency_entries_even(cubic_ot, quartic_ot):
    for ot, bc, betti in (
        (cubic_ot, CUBIC_BC, CUBIC_BETTI),
        (quartic_ot, QUARTIC_BC, QUARTIC_BETTI),
    ):
        delta = at_deficiency(bc, betti, ot.s + ot.t)
        assert all(v % 2 == 0 for v in delta)
        assert all(v >= 0 for v in delta)


# --- report assembly --------------------------------------------------------

def test_report_cubic(cubic_ot):
    rep = build_report(cubic_ot)
    assert rep.betti == CUBIC_BETTI
    assert rep.hodge == CUBIC_HODGE
    assert rep.bott_chern == CUBIC_BC
    ck = rep.checks
    assert ck["frolicher"] and ck["star_closure"] and ck["formality"]
    assert ck["bc_rank_matches_closed_form"] is True
    assert ck["hodge_symmetry_violated"]
    assert ck["at_deficiency"] == [0, 0, 2, 0, 0]
    assert ck["at_failure_set"] == [2]


def test_report_quartic(quartic_ot):
    rep = build_report(quartic_ot)
    assert rep.betti == QUARTIC_BETTI
    assert rep.bott_chern == QUARTIC_BC
    assert rep.checks["bc_rank_matches_closed_form"] is False
    assert rep.checks["at_failure_set"] == [2, 4]


def test_report_compute_subsets(cubic_ot):
    rep = build_report(cubic_ot, compute=("betti",))
    assert rep.betti == CUBIC_BETTI
    assert rep.hodge is None
    assert rep.bott_chern is None
    assert rep.checks == {}


def test_report_serialization_grid(cubic_ot):
    doc = build_report(cubic_ot).to_json_dict()
    assert doc["bott_chern"] == [[1, 0, 0], [0, 1, 1], [0, 1, 1]]
    assert doc["betti"] == CUBIC_BETTI
    assert doc["hodge"] == CUBIC_HODGE
    json.dumps(doc)  # must be serializable as-is
