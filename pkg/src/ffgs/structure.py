"""Structural analysis of finite flat group schemes of small order.

Fiberwise invariants (infinitesimal and separable rank), the
connected-etale sequence over fields and Artin local bases, Frobenius
and Verschiebung with the order-p classifier, p-primary decomposition,
the loci where an order-p subgroup exists, and the full decomposition
pipeline producing a re-verifiable certificate:

    1 -> G' -> G -> G'' -> 1

with G'' etale, G' a product of normal prime-order subgroups, and a
splitting section searched for on points over the test-ring family.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd, prod

from . import linalg
from .linalg import (
    canonical_span,
    member,
    member_with_coeffs,
    row_kernel,
    solve,
    transpose,
    vec_add,
    vec_scale,
    vec_sub,
)
from .hopf import (
    GroupScheme,
    GroupSchemeHom,
    HopfError,
    PointGroup,
    convolution_power,
    cartier_dual,
    hom_on_points,
    points,
    power_map_alg,
    sum_ring,
    trace_discriminant,
)
from .constructions import (
    ClosedSubgroup,
    ExtensionWitness,
    extension_witness,
    ideal_closure,
    intersect,
    is_normal,
    kernel,
    image,
    quotient,
    trivial_subgroup,
    whole_subgroup,
)
from .oracle import AbstractGroup, subgroup_lattice
from .rings import (
    DualNumbers,
    FiniteField,
    IntegersMod,
    LocalizedIntegers,
    PrimeField,
    QQ,
    RationalField,
    Ring,
    RingError,
    RingHom,
    find_hom,
    gf,
    hom_preimage,
    is_prime,
    prime_factors,
    spectrum,
)
from .testrings import test_ring_family


class InternalInconsistencyError(RuntimeError):
    """A step the theory guarantees has failed: an implementation bug."""


MAX_EXTENSION_DEGREE = 24
MAX_SPLITTING_FIELD = 1 << 16


def _field_size(k: Ring) -> int:
    if isinstance(k, PrimeField):
        return k.p
    if isinstance(k, FiniteField):
        return k.p ** k.k
    raise RingError(f"not a finite field: {k.name()}")


# ----------------------------------------------------------------------
# Fiber invariants


def augmentation_core(G: GroupScheme):
    """Stabilized power of the augmentation ideal J = ker(counit).

    Over a field the result is the complement of the local factor at the
    identity: its codimension is the infinitesimal rank."""
    R = G.ring
    J = canonical_span(R, [
        vec_sub(R, G.basis_vector(i), vec_scale(R, G.counit[i], G.unit))
        for i in range(G.rank)
    ])
    cur = J
    while True:
        nxt = canonical_span(R, [G.mul_vec(v, w) for v in cur for w in J])
        if nxt == cur:
            return cur
        cur = nxt


def infinitesimal_rank(G: GroupScheme) -> int:
    """Order of the identity component of G over a field."""
    if not G.ring.is_field:
        raise HopfError("infinitesimal rank is a fiber invariant")
    return G.rank - len(augmentation_core(G))


def separable_rank(G: GroupScheme) -> int:
    """Number of geometric points of G over a field."""
    k = G.ring
    if not k.is_field:
        raise HopfError("separable rank is a fiber invariant")
    if k.char() == 0:
        tr = [sum_ring(k, (G.mult[t][i][i] for i in range(G.rank)))
              for t in range(G.rank)]
        T = [[k.dot(G.mult[i][j], tr) for j in range(G.rank)]
             for i in range(G.rank)]
        return len(canonical_span(k, T))
    # char p: rank of the iterated q-power map a -> a^q (k-linear)
    q = _field_size(k)
    M = [G.power_vec(G.basis_vector(i), q) for i in range(G.rank)]
    rank = len(canonical_span(k, M))
    cur = M
    while True:
        cur = [[k.dot(row, col) for col in zip(*M)] for row in cur]
        r = len(canonical_span(k, cur))
        if r == rank:
            return rank
        rank = r


def is_etale(G: GroupScheme):
    """(flag, discriminant): true iff the trace-form discriminant is a
    unit in the base ring."""
    disc = trace_discriminant(G)
    return G.ring.is_unit(disc), disc


def _unit_of_ideal(G: GroupScheme, rows):
    """The multiplicative unit of a unital ideal given by a module basis."""
    R = G.ring
    if not rows:
        return None
    m = G.rank
    r = len(rows)
    # solve sum_i t_i (rows_i * rows_j) = rows_j for all j
    cols = []
    for i in range(r):
        col = []
        for j in range(r):
            col.extend(G.mul_vec(rows[i], rows[j]))
        cols.append(col)
    rhs = []
    for j in range(r):
        rhs.extend(rows[j])
    t = solve(R, transpose(cols), rhs)
    if t is None:
        raise HopfError("ideal is not unital")
    e = [R.zero] * m
    for c, v in zip(t, rows):
        e = vec_add(R, e, vec_scale(R, c, v))
    return e


def identity_component(G: GroupScheme) -> ClosedSubgroup:
    """The identity component as a closed subgroup (field or dual-number
    base; uses idempotent lifting in the latter, henselian case)."""
    R = G.ring
    if R.is_field:
        core = augmentation_core(G)
        return ClosedSubgroup(G, ideal_closure(G, core), check=False)
    if isinstance(R, DualNumbers):
        k = R.base
        fiber = G.base_change(RingHom(R, k, lambda a: a[0], "eps -> 0"))
        core = augmentation_core(fiber)
        if not core:
            return trivial_subgroup(G) if G.rank == 1 else \
                ClosedSubgroup(G, [], check=False)
        eB = _unit_of_ideal(fiber, core)
        u0 = [(vec_sub(k, fiber.unit, eB)[i], k.zero) for i in range(G.rank)]
        # one Newton step u -> 3u^2 - 2u^3 kills the eps-order error
        u2 = G.mul_vec(u0, u0)
        u3 = G.mul_vec(u2, u0)
        u = vec_sub(R, vec_scale(R, R.from_int(3), u2),
                    vec_scale(R, R.from_int(2), u3))
        gen = vec_sub(R, G.unit, u)
        return ClosedSubgroup(G, ideal_closure(G, [gen]), check=False)
    raise HopfError(
        f"identity component needs a field or Artin local base, not {R.name()}"
    )


# ----------------------------------------------------------------------
# Frobenius, Verschiebung, order-p classification


def p_twist(G: GroupScheme) -> GroupScheme:
    """Base change along the absolute Frobenius x -> x^p of the base."""
    p = G.ring.char()
    if p == 0:
        raise HopfError("no Frobenius twist in characteristic zero")
    R = G.ring
    f = lambda a: R.pow(a, p)
    return G.base_change(RingHom(R, R, f, f"x -> x^{p}"))


def frobenius(G: GroupScheme) -> GroupSchemeHom:
    """Relative Frobenius F: G -> G^(p), pulling e_i back to e_i^p."""
    p = G.ring.char()
    if p == 0 or not G.ring.is_field:
        raise HopfError("Frobenius needs a field of positive characteristic")
    alg = [G.power_vec(G.basis_vector(i), p) for i in range(G.rank)]
    return GroupSchemeHom(G, p_twist(G), alg)


def verschiebung(G: GroupScheme) -> GroupSchemeHom:
    """V: G^(p) -> G, the Cartier dual of the Frobenius of the dual."""
    if not G.is_commutative():
        raise HopfError("Verschiebung needs a commutative group scheme")
    Fd = frobenius(cartier_dual(G))
    return GroupSchemeHom(p_twist(G), G, transpose(Fd.alg))


def frobenius_verschiebung(G: GroupScheme):
    return frobenius(G), verschiebung(G)


def classify_order_p(G: GroupScheme) -> str:
    """'mu' | 'alpha' | 'etale' for a group scheme of prime order over a
    finite field (Frobenius/Verschiebung criterion)."""
    if not is_prime(G.rank):
        raise HopfError("classifier applies to prime-order schemes")
    flag, _ = is_etale(G)
    if flag:
        return "etale"
    # connected of order p forces char = p
    if G.ring.char() != G.rank:
        raise InternalInconsistencyError(
            "connected prime-order scheme away from the residue characteristic"
        )
    F = frobenius(G)
    V = verschiebung(G)
    if V.is_module_iso():
        return "mu"
    if F.is_trivial() and V.is_trivial():
        return "alpha"
    if F.is_module_iso():  # pragma: no cover - caught by is_etale above
        return "etale"
    raise InternalInconsistencyError(
        "order-p scheme escapes the mu/alpha/etale classification"
    )


# ----------------------------------------------------------------------
# Fiber reports


class FiberReport:
    def __init__(self, point, fiber, i_rank, sep_rank, etale, classification):
        self.point = point
        self.fiber = fiber
        self.infinitesimal_rank = i_rank
        self.separable_rank = sep_rank
        self.etale = etale
        self.classification = classification

    def to_dict(self):
        return {
            "point": self.point.id,
            "residue_field": self.point.residue_field.name(),
            "infinitesimal_rank": self.infinitesimal_rank,
            "separable_rank": self.separable_rank,
            "etale": self.etale,
            "identity_component": self.classification,
        }


def fiber_report(G: GroupScheme):
    out = []
    for s in spectrum(G.ring):
        fiber = G.base_change(s.residue_hom)
        i = infinitesimal_rank(fiber)
        sep = separable_rank(fiber)
        flag, _ = is_etale(fiber)
        if i == 1:
            cls = "trivial"
        elif is_prime(i) and i == fiber.ring.char():
            comp = identity_component(fiber).scheme()
            if fiber.ring.is_finite:
                cls = classify_order_p(comp)
            else:  # pragma: no cover - char 0 has i = 1
                cls = "none"
        else:
            cls = "none"
        out.append(FiberReport(s, fiber, i, sep, flag, cls))
    return out


# ----------------------------------------------------------------------
# Geometric points and etale subgroups


def _reduction_hom(G: GroupScheme) -> RingHom:
    """A good-reduction map Q -> GF(p) for an etale scheme over Q."""
    flag, disc = is_etale(G)
    if not flag:
        raise HopfError("good reduction needs an etale scheme over Q")
    entries = [c for row in G.mult for v in row for c in v]
    entries += G.unit + G.counit
    entries += [c for mat in G.comult for r in mat for c in r]
    entries += [c for v in G.antipode for c in v]
    p = 2
    while True:
        if all(c.denominator % p for c in entries) and \
                disc.numerator % p and disc.denominator % p:
            k = PrimeField(p)
            fn = lambda fr, p=p: (fr.numerator * pow(fr.denominator, -1, p)) % p
            return RingHom(QQ, k, fn, f"reduction mod {p}")
        p += 1
        while not is_prime(p):
            p += 1


def splitting_points(G: GroupScheme):
    """(PointGroup, extension field, embedding) over a finite field: the
    smallest listed extension where the point count reaches order(G)."""
    k = G.ring
    if isinstance(k, PrimeField):
        p, d0 = k.p, 1
    elif isinstance(k, FiniteField):
        p, d0 = k.p, k.k
    else:
        raise HopfError("splitting extension needs a finite base field")
    for j in range(1, MAX_EXTENSION_DEGREE + 1):
        if p ** (d0 * j) > MAX_SPLITTING_FIELD:
            break
        K = gf(p, d0 * j)
        P = points(G, K)
        if P.order == G.rank:
            return P, K, find_hom(k, K)
    raise HopfError(
        f"no splitting field of degree <= {MAX_EXTENSION_DEGREE} found"
    )


def geometric_point_group(G: GroupScheme) -> AbstractGroup:
    """G(sbar) for G etale over a finite field or Q."""
    k = G.ring
    if isinstance(k, RationalField):
        red = G.base_change(_reduction_hom(G))
        return geometric_point_group(red)
    P, _, _ = splitting_points(G)
    return AbstractGroup.from_points(P)


def etale_unique_subgroup(G: GroupScheme, d: int):
    """('ok', ClosedSubgroup) | ('not unique', count) | ('absent', 0).

    For etale G over a finite field: the unique order-d subgroup of the
    geometric point group, if any, is Frobenius-stable and descends to a
    closed subgroup over the base field."""
    flag, _ = is_etale(G)
    if not flag:
        raise HopfError("unique-subgroup descent needs an etale scheme")
    if G.rank % d != 0:
        raise HopfError(f"{d} does not divide the order {G.rank}")
    P, K, emb = splitting_points(G)
    A = AbstractGroup.from_points(P)
    subs = [s for s in subgroup_lattice(A) if s.order == d]
    if not subs:
        return ("absent", 0)
    if len(subs) > 1:
        return ("not unique", len(subs))
    pts = [P.elements[i] for i in subs[0].elements]
    rows = linalg.mat_kernel(K, [list(pt) for pt in pts])
    descended = []
    for row in rows:
        back = []
        for c in row:
            b = hom_preimage(emb, c)
            if b is None:
                raise InternalInconsistencyError(
                    "Frobenius-stable subgroup failed to descend"
                )
            back.append(b)
        descended.append(back)
    H = ClosedSubgroup(G, ideal_closure(G, descended), check=False)
    rep = H.verify_hopf_ideal()
    if not rep or H.order != d:
        raise InternalInconsistencyError(f"descended subgroup defective: {rep}")
    return ("ok", H)


# ----------------------------------------------------------------------
# Order-p subgroup production per base


def _saturate_zloc(R: LocalizedIntegers, rows_q, width: int):
    """Basis over Zloc(p) of span_Q(rows_q) intersected with Zloc^width."""
    rref = canonical_span(QQ, rows_q)
    if not rref:
        return []
    p = R.p
    # e = max p-adic valuation appearing in any denominator
    e = 0
    for row in rref:
        for c in row:
            den = c.denominator
            v = 0
            while den % p == 0:
                den //= p
                v += 1
            e = max(e, v)
    if e == 0:
        return canonical_span(R, [[Fraction(c) for c in row] for row in rref])
    pe = p ** e
    Rmod = IntegersMod(pe)
    D = [[(c * pe).numerator * pow((c * pe).denominator, -1, pe) % pe
          for c in row] for row in rref]
    ker = row_kernel(Rmod, D)
    rows_out = []
    for t in ker:
        v = [Fraction(0)] * width
        for c, row in zip(t, rref):
            v = [a + c * b for a, b in zip(v, row)]
        rows_out.append(v)
    for row in rref:
        rows_out.append([pe * c for c in row])
    return canonical_span(R, rows_out)


def _torsion_equalizer(G: GroupScheme, p: int) -> ClosedSubgroup:
    """The closed subscheme of points x with x^p = identity, via the
    p-fold convolution power of the identity (a linear map even when the
    group law is not commutative)."""
    R = G.ring
    alg = power_map_alg(G, p)
    gens = [
        vec_sub(R, alg[j], vec_scale(R, G.counit[j], G.unit))
        for j in range(G.rank)
    ]
    return ClosedSubgroup(G, ideal_closure(G, gens), check=False)


def order_p_subgroup(G: GroupScheme, p: int) -> ClosedSubgroup:
    """The (unique, normal) order-p subgroup over the supported bases."""
    R = G.ring
    if R.is_field:
        i = infinitesimal_rank(G)
        if i == p:
            H = identity_component(G)
        elif isinstance(R, RationalField):
            H = _torsion_equalizer(G, p)
        else:
            status, H = etale_unique_subgroup(G, p)
            if status != "ok":
                raise HopfError(f"no unique order-{p} subgroup: {status}")
    elif isinstance(R, LocalizedIntegers):
        gen_hom = find_hom(R, QQ)
        Gq = G.base_change(gen_hom)
        Hq = order_p_subgroup(Gq, p)
        rows = _saturate_zloc(R, [list(v) for v in Hq.ideal], G.rank)
        H = ClosedSubgroup(G, rows, check=False)
    elif isinstance(R, (IntegersMod, DualNumbers)):
        if G.is_commutative():
            H = kernel(convolution_power(G, p))
        else:
            H = _torsion_equalizer(G, p)
    else:
        raise HopfError(f"unsupported base {R.name()}")
    rep = H.verify_hopf_ideal()
    if not rep:
        raise InternalInconsistencyError(f"order-{p} ideal defective: {rep}")
    if H.order != p:
        raise InternalInconsistencyError(
            f"order-{p} subgroup came out with order {H.order}"
        )
    H.quotient_data()  # freeness (flatness) check
    flag, cert = is_normal(H)
    if not flag:
        raise InternalInconsistencyError(
            f"order-{p} subgroup is not normal (generator {cert})"
        )
    return H


# ----------------------------------------------------------------------
# Loci


class LocusReport:
    def __init__(self, prime, s1, sp, vp, subgroup, spectrum_ids):
        self.prime = prime
        self.s1 = s1
        self.sp = sp
        self.vp = vp
        self.subgroup = subgroup
        self.spectrum_ids = spectrum_ids

    def vp_is_whole(self) -> bool:
        return set(self.vp) == set(self.spectrum_ids)

    def to_dict(self):
        d = {
            "prime": self.prime,
            "spectrum": self.spectrum_ids,
            "S1": self.s1,
            "Sp": self.sp,
            "Vp": self.vp,
        }
        if self.subgroup is not None:
            R = self.subgroup.ambient.ring
            d["subgroup_ideal"] = [[R.show(c) for c in v]
                                   for v in self.subgroup.ideal]
            d["subgroup_order"] = self.subgroup.order
        return d


def _has_unique_sylow(A: AbstractGroup, p: int) -> bool:
    if A.order % p != 0:
        return False
    return sum(1 for s in subgroup_lattice(A) if s.order == p) == 1


def locus_report(G: GroupScheme, p: int) -> LocusReport:
    n = G.rank
    if any(n % (q * q) == 0 for q in prime_factors(n)):
        raise HopfError("loci are defined for square-free order")
    reports = fiber_report(G)
    ids = [r.point.id for r in reports]
    s1 = [r.point.id for r in reports if r.infinitesimal_rank == 1]
    sp = [r.point.id for r in reports if r.infinitesimal_rank in (1, p)]
    vp = [x for x in sp if x not in s1]
    for r in reports:
        if r.point.id in s1 and r.etale:
            A = geometric_point_group(r.fiber)
            if _has_unique_sylow(A, p):
                vp.append(r.point.id)
    vp = [x for x in ids if x in vp]
    sub = None
    if set(vp) == set(ids) and vp:
        sub = order_p_subgroup(G, p)
    return LocusReport(p, s1, sp, vp, sub, ids)


# ----------------------------------------------------------------------
# p-primary decomposition (commutative case)


def _slot_product_map(G: GroupScheme, subgroups):
    """The algebra map of mult: H_1 x ... x H_t -> G, i.e.
    (pi_1 (x) ... (x) pi_t) o Delta^(t-1), as rows phi(e_i)."""
    R = G.ring
    t = len(subgroups)
    projections = [H.quotient_data()[1] for H in subgroups]
    ranks = [H.order for H in subgroups]
    width = prod(ranks)
    rows = []
    for i in range(G.rank):
        cur = {(i,): R.one}
        for _ in range(t - 1):
            nxt: dict = {}
            for key, c in cur.items():
                for j, k, d in G.comult_sparse(key[-1]):
                    nk = key[:-1] + (j, k)
                    nxt[nk] = R.add(nxt.get(nk, R.zero), R.mul(c, d))
            cur = nxt
        out = [R.zero] * width
        for key, c in cur.items():
            vecs = [proj(G.basis_vector(idx))
                    for proj, idx in zip(projections, key)]
            for combo in itertools.product(*(range(r) for r in ranks)):
                coeff = c
                for vec, pos in zip(vecs, combo):
                    coeff = R.mul(coeff, vec[pos])
                    if coeff == R.zero:
                        break
                if coeff != R.zero:
                    flat = 0
                    for pos, r in zip(combo, ranks):
                        flat = flat * r + pos
                    out[flat] = R.add(out[flat], coeff)
        rows.append(out)
    return rows, width


def internal_product(G: GroupScheme, subgroups) -> tuple:
    """(ClosedSubgroup generated by the given subgroups, iso flag).

    The subgroup is cut out by the kernel of the multiplication map's
    algebra map; the flag records that the map identifies the product
    with it (full image rank)."""
    R = G.ring
    rows, width = _slot_product_map(G, subgroups)
    ideal = row_kernel(R, rows)
    H = ClosedSubgroup(G, ideal_closure(G, ideal), check=False)
    iso = len(canonical_span(R, rows)) == prod(s.order for s in subgroups) \
        and H.order == prod(s.order for s in subgroups)
    return H, iso


def p_primary_decompose(G: GroupScheme, automorphisms=()):
    """Factors (p, G_p) with G_p = kernel([p]) = image([n/p]), plus the
    product isomorphism flag. Commutative square-free G only."""
    if not G.is_commutative():
        raise HopfError("p-primary decomposition needs a commutative group")
    n = G.rank
    primes = prime_factors(n)
    if any(n % (p * p) == 0 for p in primes):
        raise HopfError("p-primary decomposition needs square-free order")
    factors = []
    for p in primes:
        Kp = kernel(convolution_power(G, p))
        Ip = image(convolution_power(G, n // p))
        if Kp.ideal != Ip.ideal:
            raise InternalInconsistencyError(
                f"kernel([{p}]) and image([{n // p}]) disagree"
            )
        for f in automorphisms:
            for v in Kp.ideal:
                if not member(G.ring, Kp.ideal, f.apply_alg(v)):
                    raise InternalInconsistencyError(
                        f"automorphism moves the {p}-primary ideal"
                    )
        factors.append((p, Kp))
    _, iso = internal_product(G, [f[1] for f in factors]) if len(factors) > 1 \
        else (None, True)
    if len(factors) > 1 and not iso:
        raise InternalInconsistencyError("primary product map is not an iso")
    return factors, iso


# ----------------------------------------------------------------------
# Connected-etale sequence


def connected_etale_sequence(G: GroupScheme) -> ExtensionWitness:
    H = identity_component(G)
    E = extension_witness(G, H)
    flag, disc = is_etale(E.quotient)
    if not flag:
        raise InternalInconsistencyError(
            f"connected-etale quotient has non-unit discriminant {G.ring.show(disc)}"
        )
    return E


# ----------------------------------------------------------------------
# Hochschild splitting


class SplitResult:
    def __init__(self, status, ring_name=None, section=None, detail=None):
        self.status = status    # found | no-splitting-ring | not-found
        self.ring_name = ring_name
        self.section = section  # list: quotient point index -> total index
        self.detail = detail

    def to_dict(self):
        return {
            "status": self.status,
            "ring": self.ring_name,
            "section": self.section,
            "detail": self.detail,
        }


def hochschild_split(E: ExtensionWitness, budget: int = 200000) -> SplitResult:
    """Check the Hochschild property on the ledger, then search for a
    homomorphic section of G(R') -> G''(R') over the first test ring
    where G'' has its full complement of points."""
    nker = E.kernel.order
    nquo = E.quotient.rank
    flag, disc = is_etale(E.quotient)
    if not flag:
        raise HopfError("splitting needs an etale quotient")
    if gcd(nker, nquo) != 1:
        raise HopfError("splitting needs coprime kernel and quotient orders")
    for entry in E.ledger:
        if not (entry["left_injective"] and entry["exact_middle"]
                and entry["right_surjective"]):
            raise InternalInconsistencyError(
                f"point sequence not exact over {entry['ring']}: {entry}"
            )
    G = E.total
    base = G.ring
    for T in test_ring_family(base):
        try:
            PG = points(G, T, bound=budget)
            PQ = points(E.quotient, T, bound=budget)
        except (HopfError, RingError):
            continue
        if PQ.order != nquo:
            continue
        hom = find_hom(base, T)
        out_map = hom_on_points(E.projection, PG, PQ, hom)
        if len(set(out_map)) != PQ.order:
            continue
        section = _section_search(AbstractGroup.from_points(PQ),
                                  AbstractGroup.from_points(PG),
                                  out_map, budget)
        if section is not None:
            return SplitResult("found", T.name(), section)
        return SplitResult("not-found", T.name(),
                           detail="search exhausted without a section")
    return SplitResult("no-splitting-ring",
                       detail="no test ring gives the quotient full points")


def _section_search(Q: AbstractGroup, Gp: AbstractGroup, out_map, budget):
    """First homomorphic section sigma with out_map[sigma(q)] = q."""
    gens = Q._small_generators()
    preimages = [
        [g for g in range(Gp.order) if out_map[g] == q] for q in gens
    ]
    count = 0
    for images in itertools.product(*preimages):
        count += 1
        if count > budget:
            return None
        sigma = {Q.identity: Gp.identity}
        frontier = [Q.identity]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for g, img in zip(gens, images):
                y = Q.table[x][g]
                fy = Gp.table[sigma[x]][img]
                if out_map[fy] != y:
                    ok = False
                    break
                if y in sigma:
                    if sigma[y] != fy:
                        ok = False
                        break
                else:
                    sigma[y] = fy
                    frontier.append(y)
        if not ok or len(sigma) != Q.order:
            continue
        if all(sigma[Q.table[a][b]] == Gp.table[sigma[a]][sigma[b]]
               for a in range(Q.order) for b in range(Q.order)):
            return [sigma[q] for q in range(Q.order)]
    return None


# ----------------------------------------------------------------------
# Common refinement (two etale-quotient extensions)


def common_refinement(E1: ExtensionWitness, E2: ExtensionWitness) -> ExtensionWitness:
    if E1.total is not E2.total and E1.total.to_dict() != E2.total.to_dict():
        raise HopfError("refinement needs extensions of the same scheme")
    for E in (E1, E2):
        flag, _ = is_etale(E.quotient)
        if not flag:
            raise HopfError("refinement needs etale quotients")
    K = intersect(E1.kernel, E2.kernel)
    rep = K.verify_hopf_ideal()
    if not rep:
        raise InternalInconsistencyError(f"intersection not a Hopf ideal: {rep}")
    try:
        K.quotient_data()
        E = extension_witness(E1.total, K)
    except HopfError as exc:
        raise InternalInconsistencyError(f"refined kernel not flat: {exc}")
    flag, disc = is_etale(E.quotient)
    if not flag:
        raise InternalInconsistencyError(
            "refined quotient has a non-unit discriminant"
        )
    return E


# ----------------------------------------------------------------------
# The decomposition pipeline


class TheoremCertificate:
    def __init__(self, G, i_values, witness, quotient_disc, factors,
                 product_iso, conjugation, split):
        self.scheme = G
        self.i_values = i_values
        self.witness = witness
        self.quotient_discriminant = quotient_disc
        self.factors = factors          # list of (p, ClosedSubgroup)
        self.product_iso = product_iso
        self.conjugation = conjugation  # list of (p, bool)
        self.split = split

    def to_dict(self):
        R = self.scheme.ring
        return {
            "schema": 1,
            "base": R.name(),
            "order": self.scheme.rank,
            "infinitesimal_ranks": self.i_values,
            "kernel_order": self.witness.kernel.order,
            "quotient_order": self.witness.quotient.rank,
            "quotient_discriminant": R.show(self.quotient_discriminant),
            "factors": [
                {
                    "prime": p,
                    "order": H.order,
                    "ideal": [[R.show(c) for c in v] for v in H.ideal],
                    "commutative": H.scheme().is_commutative(),
                }
                for p, H in self.factors
            ],
            "product_isomorphism": self.product_iso,
            "conjugation_invariant": [
                {"prime": p, "invariant": ok} for p, ok in self.conjugation
            ],
            "extension": self.witness.to_dict(),
            "splitting": self.split.to_dict() if self.split else None,
        }


def theorem_decompose(G: GroupScheme, budget: int = 200000) -> TheoremCertificate:
    n = G.rank
    if any(n % (p * p) == 0 for p in prime_factors(n)) and n > 1:
        raise HopfError("the decomposition needs square-free order")
    reports = fiber_report(G)
    i_values = sorted({r.infinitesimal_rank for r in reports})
    primes = [p for p in i_values if p != 1]
    if primes:
        subgroups = []
        for p in primes:
            rep = locus_report(G, p)
            if not rep.vp_is_whole():
                raise InternalInconsistencyError(
                    f"V_{p} is a proper nonempty part of a connected spectrum"
                )
            subgroups.append((p, rep.subgroup))
        if len(subgroups) == 1:
            Gprime = subgroups[0][1]
            product_iso = True
        else:
            Gprime, product_iso = internal_product(G, [h for _, h in subgroups])
            if not product_iso:
                raise InternalInconsistencyError(
                    "product of prime subgroups is not an isomorphism"
                )
            if Gprime.order != prod(p for p, _ in subgroups):
                raise InternalInconsistencyError("internal product has wrong order")
    else:
        Gprime = trivial_subgroup(G)
        subgroups = []
        product_iso = True
    E = extension_witness(G, Gprime, budget=budget)
    flag, disc = is_etale(E.quotient)
    if not flag:
        raise InternalInconsistencyError(
            "the quotient by the infinitesimal part is not etale"
        )
    # the prime factors and their conjugation invariance
    factors = []
    conjugation = []
    if Gprime.order > 1:
        Gp_scheme = Gprime.scheme()
        if not Gp_scheme.is_commutative():
            raise InternalInconsistencyError(
                "square-free product of prime-order subgroups must be commutative"
            )
        for p, H in subgroups:
            factors.append((p, H))
            ok, _ = is_normal(H)
            conjugation.append((p, ok))
            if not ok:
                raise InternalInconsistencyError(
                    f"conjugation moves the order-{p} factor"
                )
        # cross-check the primary decomposition of G' itself
        inner, _ = p_primary_decompose(Gp_scheme)
        if sorted(p for p, _ in inner) != sorted(p for p, _ in subgroups):
            raise InternalInconsistencyError(
                "primary decomposition of G' disagrees with the locus factors"
            )
    split = hochschild_split(E, budget=budget)
    return TheoremCertificate(G, i_values, E, disc, factors, product_iso,
                              conjugation, split)
