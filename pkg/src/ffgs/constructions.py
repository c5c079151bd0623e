"""Standard group schemes and the category operations on them.

Builtins: multiplicative mu_n, constant groups, the infinitesimal
alpha_p in characteristic p, order-2 schemes x^2 = a x with a*b = -2,
semidirect products of a constant group acting on anything, and direct
products.

Subobjects are Hopf ideals; kernels, images, intersections, normality
and free quotients are all computed at the ideal level with canonical
module forms, so equality of subgroups is literal equality of bases."""

from __future__ import annotations

import itertools
from math import comb

from . import linalg
from .linalg import (
    canonical_span,
    member,
    member_with_coeffs,
    reduce_mod_span,
    row_kernel,
    span_equal,
    transpose,
    vec_add,
    vec_scale,
    vec_sub,
)
from .hopf import (
    GroupScheme,
    GroupSchemeHom,
    HopfError,
    VerificationReport,
    points,
    sum_ring,
)
from .oracle import AbstractGroup, cyclic_table, product_table, s3_table
from .rings import Ring, RingError, find_hom
from .testrings import test_ring_family


# ----------------------------------------------------------------------
# Builtins


def mu(R: Ring, n: int) -> GroupScheme:
    """mu_n = Spec R[x]/(x^n - 1), group law x (x) x. Basis x^0..x^{n-1}."""
    if n < 1:
        raise HopfError("mu needs n >= 1")
    Z, O = R.zero, R.one
    def e(i):
        return [O if j == i % n else Z for j in range(n)]
    mult = [[e(i + j) for j in range(n)] for i in range(n)]
    comult = [
        [[O if (j == i and k == i) else Z for k in range(n)] for j in range(n)]
        for i in range(n)
    ]
    return GroupScheme(
        R, n, mult, e(0), comult, [O] * n, [e(-i) for i in range(n)],
        name=f"mu_{n}",
    )


def constant(R: Ring, table, name: str | None = None) -> GroupScheme:
    """Constant group scheme of a finite group given by its table.

    Basis = indicator functions of the group elements."""
    G = AbstractGroup(table)
    n = G.order
    Z, O = R.zero, R.one
    mult = [
        [[O if (i == j and k == i) else Z for k in range(n)] for j in range(n)]
        for i in range(n)
    ]
    comult = []
    for g in range(n):
        mat = [[Z] * n for _ in range(n)]
        for h in range(n):
            for hp in range(n):
                if table[h][hp] == g:
                    mat[h][hp] = O
        comult.append(mat)
    counit = [O if g == G.identity else Z for g in range(n)]
    antipode = [
        [O if j == G.inverse(g) else Z for j in range(n)] for g in range(n)
    ]
    return GroupScheme(R, n, mult, [O] * n, comult, counit, antipode,
                       name=name or f"constant({G.identify()})")


def constant_cyclic(R: Ring, n: int) -> GroupScheme:
    return constant(R, cyclic_table(n), name=f"Z/{n}")


def alpha(R: Ring, p: int) -> GroupScheme:
    """alpha_p = Spec R[x]/(x^p), additive group law (char p only)."""
    if R.char() != p:
        raise HopfError(f"alpha_{p} needs a base of characteristic {p}")
    Z, O = R.zero, R.one
    m = p
    def e(i):
        return [O if j == i else Z for j in range(m)]
    mult = [
        [e(i + j) if i + j < m else [Z] * m for j in range(m)] for i in range(m)
    ]
    comult = []
    for i in range(m):
        mat = [[Z] * m for _ in range(m)]
        for j in range(i + 1):
            mat[j][i - j] = R.from_int(comb(i, j))
        comult.append(mat)
    counit = [O] + [Z] * (m - 1)
    antipode = [vec_scale(R, R.from_int((-1) ** i), e(i)) for i in range(m)]
    return GroupScheme(R, m, mult, e(0), comult, counit, antipode,
                       name=f"alpha_{p}")


def tate_oort2(R: Ring, a, b) -> GroupScheme:
    """Order 2: Spec R[x]/(x^2 - a x), Delta x = x(x)1 + 1(x)x + b x(x)x.

    Requires a * b = -2. (a, b) = (0, anything with 0*b = -2 impossible
    unless char 2; standard members: (2, -1) = mu_2, (0, b) with char 2.)"""
    if R.mul(a, b) != R.neg(R.from_int(2)):
        raise HopfError("tate_oort2 needs a * b = -2")
    Z, O = R.zero, R.one
    mult = [[[O, Z], [Z, O]], [[Z, O], [Z, a]]]
    comult = [
        [[O, Z], [Z, Z]],
        [[Z, O], [O, b]],
    ]
    counit = [O, Z]
    # every point squares to the identity, so the antipode is the identity:
    # m(S(x)id)Delta(x) = 2x + b x^2 = (2 + ab) x = 0
    antipode = [[O, Z], [Z, O]]
    return GroupScheme(R, 2, mult, [O, Z], comult, counit, antipode,
                       name=f"ot2({R.show(a)},{R.show(b)})")


def direct_product(G: GroupScheme, H: GroupScheme) -> GroupScheme:
    """G x H via the tensor product Hopf algebra."""
    if G.ring != H.ring:
        raise HopfError("direct product needs a common base")
    R = G.ring
    mG, mH = G.rank, H.rank
    m = mG * mH
    def idx(i, a):
        return i * mH + a
    Z = R.zero
    mult = [[[Z] * m for _ in range(m)] for _ in range(m)]
    for i in range(mG):
        for a in range(mH):
            for j in range(mG):
                for b in range(mH):
                    row = mult[idx(i, a)][idx(j, b)]
                    for k, ck in enumerate(G.mult[i][j]):
                        if ck == Z:
                            continue
                        for c, cc in enumerate(H.mult[a][b]):
                            if cc != Z:
                                row[idx(k, c)] = R.add(row[idx(k, c)], R.mul(ck, cc))
    unit = [Z] * m
    for i, u in enumerate(G.unit):
        for a, v in enumerate(H.unit):
            unit[idx(i, a)] = R.mul(u, v)
    comult = [[[Z] * m for _ in range(m)] for _ in range(m)]
    for i in range(mG):
        for a in range(mH):
            tgt = comult[idx(i, a)]
            for j, k, c in G.comult_sparse(i):
                for x, y, d in H.comult_sparse(a):
                    tgt[idx(j, x)][idx(k, y)] = R.add(
                        tgt[idx(j, x)][idx(k, y)], R.mul(c, d)
                    )
    counit = [Z] * m
    antipode = [[Z] * m for _ in range(m)]
    for i in range(mG):
        for a in range(mH):
            counit[idx(i, a)] = R.mul(G.counit[i], H.counit[a])
            for j, sa in enumerate(G.antipode[i]):
                if sa == Z:
                    continue
                for b, sb in enumerate(H.antipode[a]):
                    if sb != Z:
                        antipode[idx(i, a)][idx(j, b)] = R.mul(sa, sb)
    name = None
    if G.name and H.name:
        name = f"{G.name} x {H.name}"
    return GroupScheme(R, m, mult, unit, comult, counit, antipode, name=name)


def semidirect(Q: GroupScheme, P_table, action) -> GroupScheme:
    """Semidirect product Q x| P with P the constant group of P_table
    acting on Q.

    action[g] is the Hopf-algebra pullback matrix of the automorphism
    alpha_g of Q (rows = images of basis vectors), with the
    anti-compatibility action[g][h-action...] checked: pullback reverses
    composition, alpha_{gh}^* = alpha_h^* alpha_g^* is NOT required here;
    we check alpha_{gh}^* = alpha_g^* after alpha_h^* as matrices acting
    on the left.

    Basis: a_i (x) f_g with a_i the Q basis and f_g indicators of P."""
    R = Q.ring
    P = AbstractGroup(P_table)
    n = P.order
    mQ = Q.rank
    autos = {}
    for g in range(n):
        mat = [list(v) for v in action[g]]
        h = GroupSchemeHom(Q, Q, mat)
        rep = h.is_valid()
        if not rep or not h.is_module_iso():
            raise HopfError(f"action entry {g} is not a Hopf automorphism: {rep}")
        autos[g] = h
    if autos[P.identity].alg != linalg.identity_matrix(R, mQ):
        raise HopfError("action at the identity must be trivial")
    for g in range(n):
        for h in range(n):
            gh = P.table[g][h]
            comp = autos[h].then(autos[g])
            if comp.alg != autos[gh].alg:
                raise HopfError(f"action is not a homomorphism at ({g},{h})")
    m = mQ * n
    def idx(i, g):
        return i * n + g
    Z = R.zero
    # algebra: (a (x) f_g)(b (x) f_h) = delta_{g,h} ab (x) f_g
    mult = [[[Z] * m for _ in range(m)] for _ in range(m)]
    for i in range(mQ):
        for g in range(n):
            for j in range(mQ):
                row = mult[idx(i, g)][idx(j, g)]
                for k, c in enumerate(Q.mult[i][j]):
                    if c != Z:
                        row[idx(k, g)] = c
    unit = [Z] * m
    for i, u in enumerate(Q.unit):
        for g in range(n):
            unit[idx(i, g)] = u
    # Delta(a (x) f_g) = sum_{h h' = g} a_(1) (x) f_h (x) alpha_h^*(a_(2)) (x) f_h'
    comult = [[[Z] * m for _ in range(m)] for _ in range(m)]
    for i in range(mQ):
        for g in range(n):
            tgt = comult[idx(i, g)]
            for j, k, c in Q.comult_sparse(i):
                for h in range(n):
                    for hp in range(n):
                        if P.table[h][hp] != g:
                            continue
                        moved = autos[h].alg[k]
                        for t, x in enumerate(moved):
                            if x != Z:
                                a, b = idx(j, h), idx(t, hp)
                                tgt[a][b] = R.add(tgt[a][b], R.mul(c, x))
    counit = [Z] * m
    for i in range(mQ):
        counit[idx(i, P.identity)] = Q.counit[i]
    # S(a (x) f_g) = S_Q(alpha_g^* a) (x) f_{g^{-1}}
    antipode = [[Z] * m for _ in range(m)]
    for i in range(mQ):
        for g in range(n):
            moved = Q.antipode_vec(autos[g].alg[i])
            gi = P.inverse(g)
            for t, x in enumerate(moved):
                if x != Z:
                    antipode[idx(i, g)][idx(t, gi)] = x
    name = None
    if Q.name:
        name = f"{Q.name} x| {AbstractGroup(P_table).identify()}"
    return GroupScheme(R, m, mult, unit, comult, counit, antipode, name=name)


def inversion_action(Q: GroupScheme, P_table):
    """The action of a group of exponent <= 2 on commutative Q by
    inversion on non-identity elements."""
    P = AbstractGroup(P_table)
    out = []
    for g in range(P.order):
        if g == P.identity:
            out.append(linalg.identity_matrix(Q.ring, Q.rank))
        else:
            if P.element_order(g) != 2:
                raise HopfError("inversion action needs exponent 2 off identity")
            out.append([list(v) for v in Q.antipode])
    return out


# ----------------------------------------------------------------------
# Closed subgroups = Hopf ideals


class ClosedSubgroup:
    """A closed subgroup scheme of ambient, stored by the canonical basis
    of its defining Hopf ideal."""

    def __init__(self, ambient: GroupScheme, ideal_rows, check: bool = True):
        self.ambient = ambient
        self.ideal = canonical_span(ambient.ring, ideal_rows)
        if check:
            rep = self.verify_hopf_ideal()
            if not rep:
                raise HopfError(f"not a Hopf ideal: {rep}")

    @property
    def order(self) -> int:
        return self.ambient.rank - len(self.ideal)

    def __eq__(self, other):
        return (
            isinstance(other, ClosedSubgroup)
            and self.ambient is other.ambient
            and self.ideal == other.ideal
        )

    def __repr__(self):
        return f"<closed subgroup of order {self.order} in {self.ambient!r}>"

    def contains_vector(self, v) -> bool:
        return member(self.ambient.ring, self.ideal, v)

    def verify_hopf_ideal(self) -> VerificationReport:
        G = self.ambient
        R = G.ring
        m = G.rank
        # ideal: closed under multiplication by the ambient algebra
        for t, v in enumerate(self.ideal):
            for i in range(m):
                if not member(R, self.ideal, G.mul_vec(v, G.basis_vector(i))):
                    return VerificationReport(False, "ideal-closure", (t, i))
        # inside the augmentation ideal
        for t, v in enumerate(self.ideal):
            if G.counit_of(v) != R.zero:
                return VerificationReport(False, "augmentation", (t,))
        # coideal: Delta(I) in I (x) A + A (x) I
        mix = _mixed_tensor_span(G, self.ideal)
        for t, v in enumerate(self.ideal):
            if not member(R, mix, _flatten_tensor(G, G.comult_vec(v))):
                return VerificationReport(False, "coideal", (t,))
        # antipode stability
        for t, v in enumerate(self.ideal):
            if not member(R, self.ideal, G.antipode_vec(v)):
                return VerificationReport(False, "antipode-stability", (t,))
        return VerificationReport(True)

    def quotient_data(self):
        """Free quotient A/I: (basis indices, projection, pivots)."""
        G = self.ambient
        R = G.ring
        pivot_cols = []
        for row in self.ideal:
            for j, c in enumerate(row):
                if c != R.zero:
                    if not R.is_unit(c):
                        raise HopfError(
                            "quotient is not a free module (non-unit pivot)"
                        )
                    pivot_cols.append(j)
                    break
        free_cols = [j for j in range(G.rank) if j not in pivot_cols]
        def project(v):
            w = reduce_mod_span(R, self.ideal, v)
            return [w[j] for j in free_cols]
        return free_cols, project

    def scheme(self) -> GroupScheme:
        """The subgroup scheme Spec(A/I)."""
        G = self.ambient
        R = G.ring
        free_cols, project = self.quotient_data()
        r = len(free_cols)
        mult = [
            [
                project(G.mult[free_cols[a]][free_cols[b]])
                for b in range(r)
            ]
            for a in range(r)
        ]
        unit = project(G.unit)
        comult = []
        for a in range(r):
            mat = [[R.zero] * r for _ in range(r)]
            for j, k, c in G.comult_sparse(free_cols[a]):
                pj = project(G.basis_vector(j))
                pk = project(G.basis_vector(k))
                for x, cx in enumerate(pj):
                    if cx == R.zero:
                        continue
                    ccx = R.mul(c, cx)
                    for y, cy in enumerate(pk):
                        if cy != R.zero:
                            mat[x][y] = R.add(mat[x][y], R.mul(ccx, cy))
            comult.append(mat)
        counit = [G.counit[free_cols[a]] for a in range(r)]
        antipode = [project(G.antipode_vec(G.basis_vector(free_cols[a])))
                    for a in range(r)]
        return GroupScheme(R, r, mult, unit, comult, counit, antipode)

    def inclusion(self) -> GroupSchemeHom:
        """The closed immersion scheme(self) -> ambient."""
        H = self.scheme()
        _, project = self.quotient_data()
        alg = [project(self.ambient.basis_vector(j))
               for j in range(self.ambient.rank)]
        return GroupSchemeHom(H, self.ambient, alg)

    def is_whole(self) -> bool:
        return not self.ideal

    def is_trivial(self) -> bool:
        return self.order == 1


def _flatten_tensor(G: GroupScheme, tensor: dict):
    R = G.ring
    m = G.rank
    out = [R.zero] * (m * m)
    for (j, k), c in tensor.items():
        out[j * m + k] = c
    return out


def _mixed_tensor_span(G: GroupScheme, ideal_rows):
    """Canonical span of I (x) A + A (x) I inside A (x) A (flattened)."""
    R = G.ring
    m = G.rank
    rows = []
    for v in ideal_rows:
        for k in range(m):
            left = [R.zero] * (m * m)
            right = [R.zero] * (m * m)
            for j, c in enumerate(v):
                left[j * m + k] = c
                right[k * m + j] = c
            rows.append(left)
            rows.append(right)
    return canonical_span(R, rows)


def ideal_closure(G: GroupScheme, gens):
    """Smallest submodule containing gens and stable under multiplication."""
    R = G.ring
    span = canonical_span(R, list(gens))
    while True:
        extra = [
            G.mul_vec(v, G.basis_vector(i))
            for v in span
            for i in range(G.rank)
        ]
        bigger = canonical_span(R, span + extra)
        if bigger == span:
            return span
        span = bigger


def whole_subgroup(G: GroupScheme) -> ClosedSubgroup:
    return ClosedSubgroup(G, [], check=False)


def trivial_subgroup(G: GroupScheme) -> ClosedSubgroup:
    R = G.ring
    gens = [
        vec_sub(R, G.basis_vector(i), vec_scale(R, G.counit[i], G.unit))
        for i in range(G.rank)
    ]
    return ClosedSubgroup(G, ideal_closure(G, gens), check=False)


def kernel(f: GroupSchemeHom) -> ClosedSubgroup:
    """ker f as a closed subgroup of the source."""
    G, T = f.source, f.target
    R = G.ring
    gens = [
        vec_sub(R, f.alg[j], vec_scale(R, T.counit[j], G.unit))
        for j in range(T.rank)
    ]
    return ClosedSubgroup(G, ideal_closure(G, gens), check=False)


def image(f: GroupSchemeHom) -> ClosedSubgroup:
    """Scheme-theoretic image, a closed subgroup of the target.

    The defining ideal is the kernel of the algebra map, i.e. all
    functions on the target pulling back to zero."""
    R = f.source.ring
    rows = row_kernel(R, f.alg)
    return ClosedSubgroup(f.target, ideal_closure(f.target, rows), check=False)


def intersect(H1: ClosedSubgroup, H2: ClosedSubgroup) -> ClosedSubgroup:
    if H1.ambient is not H2.ambient:
        raise HopfError("intersection needs a common ambient scheme")
    return ClosedSubgroup(H1.ambient, H1.ideal + H2.ideal, check=False)


def conjugation_tensor(G: GroupScheme, v) -> dict:
    """ad(v) = sum v_(1) S(v_(3)) (x) v_(2) as {(j,k): coeff}.

    The subgroup cut out by an ideal I is normal iff ad(I) lies in
    A (x) I: the conjugated element stays in the subgroup whatever the
    conjugating point does on the first tensor factor."""
    R = G.ring
    out: dict = {}
    for i, coeff in enumerate(v):
        if coeff == R.zero:
            continue
        for j, k, c in G.comult_sparse(i):
            for a, b, d in G.comult_sparse(k):
                # v_(1) = e_j, v_(2) = e_a, v_(3) = e_b
                w = G.mul_vec(G.basis_vector(j), G.antipode_vec(G.basis_vector(b)))
                cd = R.mul(coeff, R.mul(c, d))
                for t, x in enumerate(w):
                    if x != R.zero:
                        key = (t, a)
                        out[key] = R.add(out.get(key, R.zero), R.mul(cd, x))
    return {key: c for key, c in out.items() if c != R.zero}


def is_normal(H: ClosedSubgroup):
    """(flag, certificate): certificate is a failing generator index or None."""
    G = H.ambient
    R = G.ring
    m = G.rank
    rows = []
    for k in range(m):
        for v in H.ideal:
            row = [R.zero] * (m * m)
            for j, c in enumerate(v):
                row[k * m + j] = c
            rows.append(row)
    span = canonical_span(R, rows)
    for t, v in enumerate(H.ideal):
        flat = _flatten_tensor(G, conjugation_tensor(G, v))
        if not member(R, span, flat):
            return False, t
    return True, None


def quotient(G: GroupScheme, H: ClosedSubgroup):
    """(G/H, projection hom) for H normal, via coinvariants of the
    coaction (id (x) pi) Delta."""
    if H.ambient is not G:
        raise HopfError("subgroup does not live in this scheme")
    R = G.ring
    m = G.rank
    free_cols, project = H.quotient_data()
    r = len(free_cols)
    punit = project(G.unit)
    # a = sum t_i e_i is coinvariant iff for all (j, q):
    #   sum_i t_i (Delta-coeff of e_j (x) e_k) pi(e_k)_q = t_j pi(1)_q
    pbasis = [project(G.basis_vector(k)) for k in range(m)]
    cols = []
    for i in range(m):
        col = [R.zero] * (m * r)
        for j, k, c in G.comult_sparse(i):
            for q in range(r):
                if pbasis[k][q] != R.zero:
                    col[j * r + q] = R.add(col[j * r + q], R.mul(c, pbasis[k][q]))
        for q in range(r):
            col[i * r + q] = R.sub(col[i * r + q], punit[q])
        cols.append(col)
    B = canonical_span(R, row_kernel(R, cols))
    if not B:
        raise HopfError("coinvariants are zero")
    if len(B) * H.order != m:
        raise HopfError(
            f"quotient rank {len(B)} times subgroup order {H.order} "
            f"misses the ambient order {m}"
        )
    # structure constants of the subalgebra B
    def coords(v):
        c = member_with_coeffs(R, B, v)
        if c is None:
            raise HopfError("coinvariant algebra is not closed as expected")
        return c
    rB = len(B)
    mult = [[coords(G.mul_vec(B[a], B[b])) for b in range(rB)] for a in range(rB)]
    unit = coords(G.unit)
    tensor_rows = []
    for a in range(rB):
        for b in range(rB):
            flat = [R.zero] * (m * m)
            for j, x in enumerate(B[a]):
                if x == R.zero:
                    continue
                for k, y in enumerate(B[b]):
                    if y != R.zero:
                        flat[j * m + k] = R.mul(x, y)
            tensor_rows.append(flat)
    comult = []
    for a in range(rB):
        flat = _flatten_tensor(G, G.comult_vec(B[a]))
        c = member_with_coeffs(R, tensor_rows, flat)
        if c is None:
            raise HopfError("comultiplication does not restrict to coinvariants")
        comult.append([[c[x * rB + y] for y in range(rB)] for x in range(rB)])
    counit = [G.counit_of(B[a]) for a in range(rB)]
    antipode = [coords(G.antipode_vec(B[a])) for a in range(rB)]
    Gbar = GroupScheme(R, rB, mult, unit, comult, counit, antipode,
                       name=f"{G.name}/H" if G.name else None)
    proj = GroupSchemeHom(G, Gbar, [list(v) for v in B])
    return Gbar, proj


# ----------------------------------------------------------------------
# Extensions 1 -> H -> G -> Gbar -> 1 with point-level evidence


class ExtensionWitness:
    """A quotient presentation of G by a normal closed subgroup, together
    with a ledger recording exactness of the point sequences over the
    configured test rings."""

    def __init__(self, kernel_subgroup: ClosedSubgroup, total: GroupScheme,
                 quotient_scheme: GroupScheme, projection: GroupSchemeHom,
                 ledger: list):
        self.kernel = kernel_subgroup
        self.total = total
        self.quotient = quotient_scheme
        self.projection = projection
        self.ledger = ledger

    def __repr__(self):
        return (f"<extension 1 -> {self.kernel.order} -> {self.total.rank} "
                f"-> {self.quotient.rank} -> 1>")

    def to_dict(self):
        return {
            "kernel_order": self.kernel.order,
            "total_order": self.total.rank,
            "quotient_order": self.quotient.rank,
            "kernel_ideal": [
                [self.total.ring.show(c) for c in v] for v in self.kernel.ideal
            ],
            "quotient": self.quotient.to_dict(),
            "ledger": self.ledger,
        }


def extension_witness(G: GroupScheme, H: ClosedSubgroup,
                      budget: int = 200000) -> ExtensionWitness:
    """Quotient G by the normal subgroup H and check the point sequences
    1 -> H(T) -> G(T) -> (G/H)(T) over every test ring T."""
    flag, cert = is_normal(H)
    if not flag:
        raise HopfError(f"subgroup is not normal (generator {cert})")
    Gbar, proj = quotient(G, H)
    Hs = H.scheme()
    incl = H.inclusion()
    ledger = []
    from .hopf import hom_on_points
    for T in test_ring_family(G.ring):
        try:
            PH = points(Hs, T, bound=budget)
            PG = points(G, T, bound=budget)
            PQ = points(Gbar, T, bound=budget)
        except (HopfError, RingError):
            continue
        hom = find_hom(G.ring, T)
        in_map = hom_on_points(incl, PH, PG, hom)
        out_map = hom_on_points(proj, PG, PQ, hom)
        injective = len(set(in_map)) == PH.order
        mid_kernel = {i for i in range(PG.order)
                      if out_map[i] == PQ.identity_index}
        exact_middle = mid_kernel == set(in_map)
        surjective = len(set(out_map)) == PQ.order
        ledger.append({
            "ring": T.name(),
            "counts": [PH.order, PG.order, PQ.order],
            "left_injective": injective,
            "exact_middle": exact_middle,
            "right_surjective": surjective,
        })
    return ExtensionWitness(H, G, Gbar, proj, ledger)


# ----------------------------------------------------------------------
# Isomorphism testing


class IsoResult:
    def __init__(self, status: str, hom: GroupSchemeHom | None = None,
                 reason: str | None = None):
        self.status = status        # "iso" | "no" | "unknown"
        self.hom = hom
        self.reason = reason

    def __repr__(self):
        return f"IsoResult({self.status}{': ' + self.reason if self.reason else ''})"


def find_isomorphism(G: GroupScheme, H: GroupScheme,
                     budget: int = 200000) -> IsoResult:
    """Search for an isomorphism G -> H over a common finite-type base.

    Cheap invariants first (order, commutativity, point counts and group
    types over the test-ring family); then a search for a Hopf algebra
    map Hopf(H) -> Hopf(G) determined by the image of a single algebra
    generator of Hopf(H). Budget exhaustion gives status "unknown"."""
    if G.ring != H.ring:
        return IsoResult("no", reason="different base rings")
    if G.rank != H.rank:
        return IsoResult("no", reason=f"orders {G.rank} and {H.rank}")
    if G.is_commutative() != H.is_commutative():
        return IsoResult("no", reason="one group law is commutative, one is not")
    for Rp in test_ring_family(G.ring):
        if not Rp.is_finite:
            continue
        try:
            PG = points(G, Rp)
            PH = points(H, Rp)
        except (HopfError, RingError):
            continue
        if PG.order != PH.order:
            return IsoResult(
                "no", reason=f"{PG.order} vs {PH.order} points over {Rp.name()}"
            )
        if not AbstractGroup.from_points(PG).is_isomorphic_to(
            AbstractGroup.from_points(PH)
        ):
            return IsoResult(
                "no", reason=f"point groups over {Rp.name()} differ"
            )
    R = G.ring
    if not R.is_finite:
        return IsoResult("unknown", reason="no search over an infinite base")
    # monogenic path: find an element generating Hopf(H) as an algebra;
    # basis vectors first, then a bounded scan over all module elements
    def powers_of(v):
        powers = [H.unit]
        for _ in range(H.rank - 1):
            powers.append(H.mul_vec(powers[-1], list(v)))
        return powers

    def generates(powers):
        span = canonical_span(R, powers)
        return all(member(R, span, H.basis_vector(j)) for j in range(H.rank))

    gen_powers = None
    for i in range(H.rank):
        powers = powers_of(H.basis_vector(i))
        if generates(powers):
            gen_powers = powers
            break
    if gen_powers is None and len(list(R.elements())) ** H.rank <= 4096:
        for v in itertools.product(R.elements(), repeat=H.rank):
            powers = powers_of(list(v))
            if generates(powers):
                gen_powers = powers
                break
    if gen_powers is None:
        return _exhaustive_isomorphism(G, H, budget)
    exprs = [member_with_coeffs (R, gen_powers, H.basis_vector(j))
             for j in range(H.rank)]
    els = list(R.elements())
    total = len(els) ** G.rank
    count = 0
    for v in itertools.product(els, repeat=G.rank):
        count += 1
        if count > budget:
            return IsoResult("unknown", reason="search budget exhausted")
        vpow = [list(G.unit)]
        for _ in range(H.rank - 1):
            vpow.append(G.mul_vec(vpow[-1], list(v)))
        alg = []
        for j in range(H.rank):
            w = [R.zero] * G.rank
            for t, c in enumerate(exprs[j]):
                if c != R.zero:
                    w = vec_add(R, w, vec_scale(R, c, vpow[t]))
            alg.append(w)
        f = GroupSchemeHom(G, H, alg)
        if f.is_module_iso() and f.is_valid():
            return IsoResult("iso", hom=f)
    # the monogenic image determines the map, so exhaustion is conclusive
    return IsoResult("no", reason="no isomorphism carries a generator")


def _exhaustive_isomorphism(G: GroupScheme, H: GroupScheme,
                            budget: int) -> IsoResult:
    """Scan every module map Hopf(H) -> Hopf(G); conclusive at tiny rank."""
    R = G.ring
    els = list(R.elements())
    m = G.rank
    if len(els) ** (m * m) > budget:
        return IsoResult("unknown", reason="search budget exhausted")
    for flat in itertools.product(els, repeat=m * m):
        alg = [list(flat[j * m:(j + 1) * m]) for j in range(m)]
        f = GroupSchemeHom(G, H, alg)
        if f.is_module_iso() and f.is_valid():
            return IsoResult("iso", hom=f)
    return IsoResult("no", reason="exhausted all module maps")
