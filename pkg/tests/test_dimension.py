import json
from dataclasses import replace

import pytest

from bn_atlas.core import LocusId, bn_number
from bn_atlas.dimension import (
    AXIOM_TAGS,
    BASE_DIVISOR,
    BASE_HYPERELLIPTIC,
    BASE_R1,
    BASE_RHO_ZERO,
    BASE_SMALL_GENUS,
    CASE_I,
    CASE_II,
    DimCertificate,
    expected_dim_certificate,
    render_tree,
    verify_dim_certificate,
)
from bn_atlas.errors import DomainError


def test_case_one_example():
    cert = expected_dim_certificate(LocusId(12, 2, 9))
    root = cert.tree
    assert root.tag == CASE_I
    hyper, rest = root.children
    assert hyper.given == (4, 2, 4) and hyper.locus == (4, 1, 2) and hyper.tag == BASE_HYPERELLIPTIC
    assert rest.given == (8, 2, 7) and rest.rho == -1
    assert rest.tag == BASE_DIVISOR
    assert verify_dim_certificate(cert).passed


def test_r1_leaf():
    cert = expected_dim_certificate(LocusId(9, 1, 5))
    assert cert.tree.tag == BASE_R1 and not cert.tree.children
    assert verify_dim_certificate(cert).passed


def test_canonicalizing_child():
    cert = expected_dim_certificate(LocusId(20, 4, 19))
    hyper, rest = cert.tree.children
    assert hyper.given == (6, 4, 8)
    assert rest.given == (14, 4, 15) and rest.locus == (14, 2, 11)
    assert rest.tag == CASE_II
    first, second = rest.children
    assert first.given == (8, 2, 7)
    assert second.given == (6, 2, 6) and second.tag == BASE_RHO_ZERO
    assert verify_dim_certificate(cert).passed


def test_small_genus_leaf():
    cert = expected_dim_certificate(LocusId(7, 2, 6))
    assert cert.tree.tag == BASE_SMALL_GENUS


def test_root_hypothesis_errors():
    with pytest.raises(DomainError, match="2g-2"):
        expected_dim_certificate(LocusId(8, 2, 15))
    with pytest.raises(DomainError, match="ceil"):
        # -rho = 14 > ceil(20/2)
        expected_dim_certificate(LocusId(20, 5, 18))


def test_tampered_case_one_child_genus_fails_with_path():
    cert = expected_dim_certificate(LocusId(20, 4, 19))
    hyper, rest = cert.tree.children
    bad_rest = replace(rest, given=(13, 4, 15))
    tree = replace(cert.tree, children=(hyper, bad_rest))
    report = verify_dim_certificate(DimCertificate(cert.root, tree))
    assert not report.passed
    paths = {p for p, _ in report.failures}
    assert "root" in paths and "root/1" in paths
    assert ("root", "child_formula") in report.failures


def test_false_rho_zero_leaf_fails():
    cert = expected_dim_certificate(LocusId(12, 2, 9))
    hyper, rest = cert.tree.children
    tree = replace(cert.tree, children=(hyper, replace(rest, tag=BASE_RHO_ZERO)))
    report = verify_dim_certificate(DimCertificate(cert.root, tree))
    assert ("root/1", "base_rho_zero") in report.failures


def test_tampered_recorded_check_fails():
    cert = expected_dim_certificate(LocusId(20, 4, 19))
    checks = dict(cert.tree.checks)
    checks["child_rho"] = False
    report = verify_dim_certificate(DimCertificate(cert.root, replace(cert.tree, checks=checks)))
    assert ("root", "recorded_checks") in report.failures


def test_unknown_tag_fails():
    cert = expected_dim_certificate(LocusId(12, 2, 9))
    report = verify_dim_certificate(DimCertificate(cert.root, replace(cert.tree, tag="base-magic")))
    assert not report.passed


def test_json_round_trip():
    cert = expected_dim_certificate(LocusId(40, 4, 34))
    data = json.loads(json.dumps(cert.to_dict()))
    again = DimCertificate.from_dict(data)
    assert again == cert
    assert verify_dim_certificate(again).passed


def test_render_tree():
    text = render_tree(expected_dim_certificate(LocusId(20, 4, 19)))
    assert text.splitlines()[0] == "(20,4,19) rho=-5 case-I-split"
    assert "[from (14,4,15)]" in text


def test_every_split_decreases_genus_and_obeys_bounds():
    for g in range(8, 90):
        for r in range(2, g):
            for d in range(2 * r, g):
                rho_value = bn_number(g, r, d)
                if -rho_value > -(-g // 2):
                    continue
                cert = expected_dim_certificate(LocusId(g, r, d))
                for _, node in cert.tree.walk():
                    for child in node.children:
                        assert child.given[0] < node.locus[0]
                    if node.tag == CASE_I:
                        cg, cr, cd = node.locus
                        assert node.checks["clifford_escape_not_triggered"]
                        assert cd - cr <= 2 * (cg - cr - 2) - 2
                    if node.tag == CASE_II:
                        cg, cr, _ = node.locus
                        assert cg > 3 * cr + 2 + node.rho


def test_axiom_leaves_are_marked():
    assert AXIOM_TAGS == {BASE_R1, BASE_SMALL_GENUS, BASE_DIVISOR}
    assert CASE_II not in AXIOM_TAGS
