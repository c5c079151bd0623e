import pytest

from ffgs.constructions import (alpha, constant, constant_cyclic,
                                direct_product, extension_witness,
                                find_isomorphism, image, intersect,
                                inversion_action, is_normal, kernel, mu,
                                quotient, semidirect, tate_oort2,
                                trivial_subgroup, whole_subgroup)
from ffgs.hopf import GroupSchemeHom, HopfError, convolution_power, points
from ffgs.oracle import AbstractGroup, s3_table
from ffgs.rings import parse_ring

Q = parse_ring("Q")
F5 = parse_ring("GF(5)")
F7 = parse_ring("GF(7)")
ZL2 = parse_ring("Zloc(2)")


def test_tate_oort2_requires_ab_minus_two():
    with pytest.raises(HopfError):
        tate_oort2(ZL2, ZL2.one, ZL2.one)


def test_tate_oort2_mu2_and_z2():
    # ot2(-2, 1) is mu_2 via t -> 1 + x; ot2(1, -2) is the constant Z/2
    one, zero = ZL2.one, ZL2.zero
    G = tate_oort2(ZL2, ZL2.parse("-2"), one)
    f = GroupSchemeHom(G, mu(ZL2, 2), [[one, zero], [one, one]])
    assert f.is_valid().ok
    assert f.is_module_iso()
    H = tate_oort2(ZL2, one, ZL2.parse("-2"))
    g = GroupSchemeHom(H, constant_cyclic(ZL2, 2),
                       [[one, ZL2.parse("-1")], [zero, one]])
    assert g.is_valid().ok
    assert g.is_module_iso()


def test_tate_oort2_unit_scaling():
    # x -> u x identifies ot2(a, b) with ot2(ua, b/u)
    a = ZL2.parse("-2/3")
    b = ZL2.parse("3")
    G = tate_oort2(ZL2, a, b)
    u = ZL2.parse("5")
    Gu = tate_oort2(ZL2, ZL2.mul(u, a), ZL2.mul(b, ZL2.inv(u)))
    # basis 1, x: the scaling map pulls back x_u to u x
    f = GroupSchemeHom(G, Gu, [[ZL2.one, ZL2.zero], [ZL2.zero, u]])
    assert f.is_valid().ok
    assert f.is_module_iso()


def test_semidirect_points_are_s3():
    Gmu = mu(F7, 3)
    table = [[0, 1], [1, 0]]
    G = semidirect(Gmu, table, inversion_action(Gmu, table))
    assert G.verify().ok
    assert not G.is_commutative()
    P = points(G, F7)
    assert AbstractGroup.from_points(P).identify() == "S3"


def test_direct_product():
    G = direct_product(mu(F5, 2), constant_cyclic(F5, 3))
    assert G.verify().ok
    assert G.rank == 6
    P = points(G, F5)
    assert P.order == 6
    assert P.is_abelian()


def test_kernel_image_quotient_of_doubling():
    G = mu(F5, 4)
    f = convolution_power(G, 2)
    K = kernel(f)
    assert K.order == 2
    assert K.verify_hopf_ideal().ok
    I = image(f)
    assert I.order == 2
    flag, _ = is_normal(K)
    assert flag
    Gbar, proj = quotient(G, K)
    assert Gbar.rank == 2
    assert proj.is_valid().ok
    assert find_isomorphism(Gbar, mu(F5, 2)).status == "iso"


def test_subgroup_scheme_and_inclusion():
    G = mu(Q, 6)
    K = kernel(convolution_power(G, 3))
    H = K.scheme()
    assert H.verify().ok
    assert H.rank == 3
    inc = K.inclusion()
    assert inc.is_valid().ok


def test_intersect():
    G = mu(Q, 6)
    K2 = kernel(convolution_power(G, 2))
    K3 = kernel(convolution_power(G, 3))
    both = intersect(K2, K3)
    assert both.order == 1
    assert intersect(K2, whole_subgroup(G)).ideal == K2.ideal
    assert intersect(K2, trivial_subgroup(G)).order == 1


def test_normality_in_s3():
    G = constant(Q, s3_table())
    # the order-3 rotation subgroup is normal
    from ffgs.structure import order_p_subgroup
    H3 = order_p_subgroup(G, 3)
    assert H3.order == 3
    assert is_normal(H3)[0]


def test_nonnormal_subgroup_detected():
    G = constant(F5, s3_table())
    P = points(G, F5)
    # the subgroup generated by a transposition: basis functions constant on it
    A = AbstractGroup.from_points(P)
    refl = next(i for i in range(6) if A.element_order(i) == 2)
    sub = {A.identity, refl}
    # ideal of functions vanishing on sub = span of e_g for g outside sub
    from ffgs.constructions import ClosedSubgroup
    rows = [G.basis_vector(g) for g in range(6) if g not in sub]
    H = ClosedSubgroup(G, rows)
    assert H.order == 2
    assert H.verify_hopf_ideal().ok
    assert not is_normal(H)[0]


def test_extension_witness_ledger():
    G = mu(F5, 4)
    K = kernel(convolution_power(G, 2))
    E = extension_witness(G, K)
    assert E.kernel.order == 2
    assert E.quotient.rank == 2
    assert len(E.ledger) >= 1
    for entry in E.ledger:
        assert entry["left_injective"]
        assert entry["exact_middle"]


def test_find_isomorphism_negative():
    res = find_isomorphism(mu(F5, 4), direct_product(mu(F5, 2), mu(F5, 2)))
    assert res.status == "no"


def test_alpha_selfdual():
    from ffgs.hopf import cartier_dual
    F3 = parse_ring("GF(3)")
    G = alpha(F3, 3)
    res = find_isomorphism(cartier_dual(G), G)
    assert res.status == "iso"
