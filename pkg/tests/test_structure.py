import pytest

from ffgs.constructions import (alpha, constant, constant_cyclic,
                                direct_product, extension_witness,
                                find_isomorphism, inversion_action, kernel,
                                mu, semidirect, tate_oort2)
from ffgs.hopf import convolution_power, points
from ffgs.oracle import AbstractGroup, s3_table
from ffgs.rings import parse_ring
from ffgs.structure import (classify_order_p, common_refinement,
                            connected_etale_sequence, fiber_report,
                            frobenius_verschiebung, hochschild_split,
                            identity_component, infinitesimal_rank, is_etale,
                            locus_report, order_p_subgroup,
                            p_primary_decompose, separable_rank,
                            theorem_decompose)

Q = parse_ring("Q")
F2 = parse_ring("GF(2)")
F3 = parse_ring("GF(3)")
F5 = parse_ring("GF(5)")
F7 = parse_ring("GF(7)")
ZL2 = parse_ring("Zloc(2)")


def s3_semidirect(R):
    Gmu = mu(R, 3)
    table = [[0, 1], [1, 0]]
    return semidirect(Gmu, table, inversion_action(Gmu, table))


def test_infinitesimal_and_separable_ranks():
    assert infinitesimal_rank(mu(F3, 3)) == 3
    assert infinitesimal_rank(mu(F5, 3)) == 1
    assert infinitesimal_rank(alpha(F2, 2)) == 2
    assert separable_rank(mu(F3, 3)) == 1
    assert separable_rank(mu(F5, 3)) == 3
    assert separable_rank(constant(F5, s3_table())) == 6


def test_is_etale():
    assert is_etale(mu(Q, 6))[0]
    assert is_etale(mu(F5, 6))[0]
    assert not is_etale(mu(F3, 6))[0]
    assert not is_etale(alpha(F3, 3))[0]


def test_identity_component():
    H = identity_component(mu(F3, 6))
    assert H.order == 3
    assert identity_component(constant(F5, s3_table())).order == 1
    assert identity_component(mu(F5, 6)).order == 1


def test_fiber_report_mu2_zloc2():
    reps = fiber_report(mu(ZL2, 2))
    by_id = {r.point.id: r for r in reps}
    assert by_id["generic"].infinitesimal_rank == 1
    assert by_id["generic"].etale
    assert by_id["closed"].infinitesimal_rank == 2
    assert by_id["closed"].classification == "mu"


def test_fiber_report_alpha():
    reps = fiber_report(alpha(F3, 3))
    assert len(reps) == 1
    assert reps[0].infinitesimal_rank == 3
    assert reps[0].separable_rank == 1
    assert reps[0].classification == "alpha"


def test_fiber_report_zmod_base():
    G = constant_cyclic(parse_ring("Z/6"), 2)
    reps = fiber_report(G)
    assert sorted(r.infinitesimal_rank for r in reps) == [1, 1]


def test_classifier_matches_iso_search():
    cases = [
        (mu(F2, 2), "mu"), (mu(F3, 3), "mu"),
        (alpha(F2, 2), "alpha"), (alpha(F3, 3), "alpha"),
        (constant_cyclic(F3, 2), "etale"), (constant_cyclic(F2, 3), "etale"),
    ]
    for G, expect in cases:
        assert classify_order_p(G) == expect, G.name
        # cross-check by explicit isomorphism with the model of that type
        p = G.rank
        R = G.ring
        if expect == "mu":
            model = mu(R, p)
        elif expect == "alpha":
            model = alpha(R, p)
        else:
            model = constant_cyclic(R, p)
        assert find_isomorphism(G, model).status == "iso"


def test_verschiebung_times_frobenius():
    G = mu(F3, 3)
    F, V = frobenius_verschiebung(G)
    assert F.then(V).alg == convolution_power(G, 3).alg
    G = alpha(F2, 2)
    F, V = frobenius_verschiebung(G)
    assert F.then(V).alg == convolution_power(G, 2).alg


def test_order_p_subgroup_dispatch():
    # field, infinitesimal
    H = order_p_subgroup(mu(F3, 6), 3)
    assert H.order == 3
    # Q, etale
    H = order_p_subgroup(constant(Q, s3_table()), 3)
    assert H.order == 3
    # finite field, etale
    H = order_p_subgroup(constant(F5, s3_table()), 3)
    assert H.order == 3
    # local base
    H = order_p_subgroup(mu(ZL2, 6), 2)
    assert H.order == 2
    # Z/n base
    H = order_p_subgroup(mu(parse_ring("Z/25"), 6), 3)
    assert H.order == 3


def test_locus_report_mu2_zloc2():
    rep = locus_report(mu(ZL2, 2), 2)
    assert rep.s1 == ["generic"]
    assert sorted(rep.sp) == ["closed", "generic"]
    assert sorted(rep.vp) == ["closed", "generic"]
    assert rep.vp_is_whole()
    assert rep.subgroup is not None and rep.subgroup.order == 2


def test_locus_report_s3_f5():
    G = constant(F5, s3_table())
    rep2 = locus_report(G, 2)
    assert rep2.vp == []
    rep3 = locus_report(G, 3)
    assert rep3.vp_is_whole()
    assert rep3.subgroup.order == 3


def test_p_primary_decompose():
    for G in (mu(Q, 6), constant_cyclic(F5, 6), mu(parse_ring("GF(11)"), 6)):
        factors, iso = p_primary_decompose(G)
        assert [p for p, _ in factors] == [2, 3]
        assert [H.order for _, H in factors] == [2, 3]
        assert iso


def test_connected_etale_sequence():
    E = connected_etale_sequence(mu(F3, 6))
    assert E.kernel.order == 3
    assert E.quotient.rank == 2
    E = connected_etale_sequence(constant(F5, s3_table()))
    assert E.kernel.order == 1


def test_hochschild_split_s3_over_q():
    G = constant(Q, s3_table())
    H = order_p_subgroup(G, 3)
    E = extension_witness(G, H)
    for entry in E.ledger:
        assert entry["right_surjective"], entry
    res = hochschild_split(E)
    assert res.status == "found"
    assert len(res.section) == 2


def test_hochschild_split_noncoprime_rejected():
    from ffgs.hopf import HopfError
    G = mu(F5, 4)
    K = kernel(convolution_power(G, 2))
    E = extension_witness(G, K)
    with pytest.raises(HopfError):
        hochschild_split(E)


def test_common_refinement():
    G = constant_cyclic(F5, 6)
    E6 = extension_witness(G, kernel(convolution_power(G, 6)))
    E2 = extension_witness(G, kernel(convolution_power(G, 2)))
    E = common_refinement(E6, E2)
    assert E.kernel.order == 2
    same = common_refinement(E2, E2)
    assert same.kernel.ideal == E2.kernel.ideal


def test_theorem_decompose_mu6_zloc2():
    cert = theorem_decompose(mu(ZL2, 6))
    assert sorted(cert.i_values) == [1, 2]
    assert cert.witness.kernel.order == 2
    assert cert.witness.quotient.rank == 3
    assert [p for p, _ in cert.factors] == [2]
    assert cert.split.status == "found"
    d = cert.to_dict()
    assert d["schema"] == 1


def test_theorem_decompose_etale_is_trivial_kernel():
    cert = theorem_decompose(constant(Q, s3_table()))
    assert cert.i_values == [1]
    assert cert.witness.kernel.order == 1
    assert cert.witness.quotient.rank == 6


def test_theorem_rejects_non_squarefree():
    from ffgs.hopf import HopfError
    with pytest.raises(HopfError):
        theorem_decompose(mu(Q, 4))
