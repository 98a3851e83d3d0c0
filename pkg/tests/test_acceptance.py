"""Acceptance gate: one test per headline claim, one verdict line each under -v.

Every test exercises the claim end to end through the public API.  A
failure here means the shipped datasets and the machine checks disagree;
nothing below is allowed to mask that.
"""

import dataclasses

import pytest

from crystmono.affine import (
    dilation_check,
    maximal_root_check,
    reference_closure,
    reference_group,
    verify_crystallographic,
)
from crystmono.classify import (
    character_multiplicity,
    kernel_characters,
    proj_rows,
    table_rows,
    verify_proj_row,
    verify_table_row,
    versal_classes,
)
from crystmono.cli import diagram_from_payload, show_diagram_payload
from crystmono.monodromy import diagram, diagram_names, quotient_basis, verify_diagram

BOTH = ("primary", "conj")

MAXIMAL_ROOT_CASES = ("C3_33", "D4_3", "P8_Z3", "C3_24")


def all_pass(checks):
    return [(c.claim_id, c.verdict, c.witness) for c in checks if c.verdict != "pass"]


@pytest.fixture(scope="module")
def reports():
    """Full crystallographic verification for every diagram and character."""
    return {
        (name, chi): verify_crystallographic(diagram(name, chi))
        for name in diagram_names()
        for chi in BOTH
    }


def test_criterion_01_symmetry_table_rows_verify():
    rows = table_rows()
    assert len(rows) == 15
    for row in rows:
        assert all_pass(verify_table_row(row)) == [], row.notation
    print(f"criterion 1 PASS: {len(rows)} symmetry table rows verified "
          "(order, versal monomials, kernel characters, smoothability)")


def test_criterion_02_projective_families_are_equivariant():
    rows = proj_rows()
    assert len(rows) == 7
    for row in rows:
        assert all_pass(verify_proj_row(row)) == [], row.id
    print("criterion 2 PASS: 7 projective families equivariant with the declared kernel split")


def test_criterion_03_multiplicities_match_tau():
    linked = [r for r in table_rows() if r.diagram is not None]
    assert len(linked) == 8
    for row in linked:
        tau = diagram(row.diagram).tau
        assert len(versal_classes(row.case)) == tau, row.notation
        for chi in kernel_characters(row.case):
            assert character_multiplicity(row.case, chi) == tau, row.notation
    print("criterion 3 PASS: 8 cases have kernel-character multiplicity "
          "= versal dimension = tau, for both characters")


def test_criterion_04_forms_kernels_and_relations():
    for name in diagram_names():
        for chi in BOTH:
            d = diagram(name, chi)
            q = quotient_basis(d)
            gram_check = next(c for c in verify_diagram(d) if c.claim_id == "gram_form")
            assert gram_check.verdict == "pass", (name, chi, gram_check.witness)
            assert d.kernel_vector[0] == d.field.one, (name, chi)
            if d.relation is not None:
                assert len(q.roots) == len(d.cycles), (name, chi)
    print("criterion 4 PASS: 8 diagrams x 2 characters have semidefinite corank-1 forms, "
          "normalised kernel vectors, and radical relations that rewrite cleanly")


def test_criterion_05_reflections_braids_and_classical_order():
    """P8divZ4 is the one case whose vertex product has order 4, not 3;
    its determinant is a primitive fourth root of unity, which rules
    order 3 out.  The dataset records 4 and the check enforces it."""
    orders = {}
    for name in diagram_names():
        for chi in BOTH:
            d = diagram(name, chi)
            checks = verify_diagram(d)
            assert all_pass(checks) == [], (name, chi, all_pass(checks))
            orders[name] = d.classical_order
    assert orders.pop("P8divZ4") == 4
    assert set(orders.values()) == {3}
    print("criterion 5 PASS: reflections, braids and the extra relation verified; "
          "classical monodromy has order 3 in 7 cases and order 4 for P8divZ4 "
          "(deviation: determinant is a primitive fourth root of unity)")


def test_criterion_06_dual_action_matches_the_crystallographic_model(reports):
    for (name, chi), rep in reports.items():
        assert rep.verdict == "pass", (name, chi, all_pass(rep.checks))
        got = {c.claim_id for c in rep.checks}
        for needed in ("linear_order", "reflection_multiset", "lattice_rank",
                       "lattice_invariant", "translations_contained", "translations_generate"):
            assert needed in got, (name, chi, needed)
        ref = reference_group(rep.group)
        assert len(reference_closure(rep.group)) == ref.declared_order
    print(f"criterion 6 PASS: {len(reports)} diagram/character cases generate their "
          "crystallographic groups with invariant, contained and regenerated lattices "
          "(an inconclusive search would fail this test)")


def test_criterion_07_maximal_root_identities():
    for name in MAXIMAL_ROOT_CASES:
        for chi in BOTH:
            mr = maximal_root_check(diagram(name, chi))
            assert mr.holds, (name, chi, mr.word)
    print("criterion 7 PASS: 4 maximal-root word identities hold for both characters")


def test_criterion_08_conjugate_character_correspondence(reports):
    for name in diagram_names():
        d, dc = diagram(name, "primary"), diagram(name, "conj")
        assert dc.chi == d.chi.conjugate()
        assert [c.eigenvalue for c in dc.cycles] == [c.eigenvalue.conjugate() for c in d.cycles]
        assert [[x.conjugate() for x in row] for row in dc.gram.gram] == [list(r) for r in d.gram.gram]
        prim = [(c.claim_id, c.verdict) for c in reports[(name, "primary")].checks]
        conj = [(c.claim_id, c.verdict) for c in reports[(name, "conj")].checks]
        assert prim == conj, name
    for row in table_rows():
        pair = kernel_characters(row.case)
        if pair is None or row.diagram is None:
            continue
        assert pair[1] == pair[0].conjugate()
        assert character_multiplicity(row.case, pair[0]) == character_multiplicity(row.case, pair[1])
    print("criterion 8 PASS: conjugating the kernel character conjugates the datasets "
          "entrywise and leaves every verdict and multiplicity unchanged")


def test_criterion_09_dilation_invariance():
    for name in diagram_names():
        rep = dilation_check(diagram(name))
        assert rep.verdicts_match, (name, "verdict drift under dilation")
        assert rep.lattice_scaled, (name, "lattice did not scale by 1 - w")
    print("criterion 9 PASS: dilating the kernel value by 1 - w preserves every verdict "
          "and scales all 8 translation lattices exactly")


def test_criterion_10_negative_controls():
    # a broken form must be caught
    payload = show_diagram_payload(diagram("C3_33"))
    payload["gram"][0][0] = "-4"
    bad_form = verify_diagram(diagram_from_payload(payload))
    assert any(c.verdict == "fail" for c in bad_form)

    # a flipped symmetry must be caught
    row = table_rows()[0]
    kx, ky, kz = row.case.kappa
    flipped = dataclasses.replace(row, case=dataclasses.replace(row.case, kappa=(-kx, ky, kz)))
    assert any(c.verdict == "fail" for c in verify_table_row(flipped))

    # a wrong eigenvalue must be caught
    payload = show_diagram_payload(diagram("C3_24"))
    payload["cycles"][1]["eigenvalue"] = "-1"
    wrong = diagram_from_payload(payload)
    failed = [c for c in verify_diagram(wrong) if c.verdict == "fail"]
    assert failed, "tampered eigenvalue slipped through"
    print("criterion 10 PASS: mutated form, flipped symmetry and wrong eigenvalue "
          "each produce at least one fail verdict")
