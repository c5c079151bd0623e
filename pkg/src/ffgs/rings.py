"""Exact base rings: Q, GF(p), GF(p^k), Z/n, Z localized at p, dual numbers.

Elements use canonical encodings so that ``==`` decides equality:
  Q, Zloc(p)   -> fractions.Fraction (reduced; Zloc denominators coprime to p)
  GF(p), Z/n   -> int in range(modulus)
  GF(p^k)      -> tuple of k ints, coefficient of x^i at index i
  Dual(F)      -> pair (a, b) of F-elements, meaning a + b*eps, eps^2 = 0
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class RingError(ValueError):
    pass


class Ring:
    """Common interface of all base rings.  Instances are immutable."""

    is_field = False
    is_finite = False

    # -- arithmetic ----------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def char(self) -> int:
        raise NotImplementedError

    # -- helpers -------------------------------------------------------
    def is_zero(self, a) -> bool:
        return a == self.zero

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        r = self.one
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def dot(self, xs, ys):
        acc = self.zero
        for x, y in zip(xs, ys):
            if x != self.zero and y != self.zero:
                acc = self.add(acc, self.mul(x, y))
        return acc

    def elements(self):
        """Deterministic iteration over all elements (finite rings only)."""
        raise RingError(f"{self.name()} is not finite")

    def sort_key(self, a):
        raise NotImplementedError

    def name(self) -> str:
        raise NotImplementedError

    def show(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def __repr__(self):
        return self.name()

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return ()


class RationalField(Ring):
    is_field = True

    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise RingError("division by zero in Q")
        return 1 / Fraction(a)

    def from_int(self, n):
        return Fraction(n)

    def char(self):
        return 0

    def sort_key(self, a):
        return (a.denominator, a.numerator)

    def name(self):
        return "Q"

    def show(self, a):
        return str(a)

    def parse(self, text):
        return Fraction(text.strip())


class PrimeField(Ring):
    is_field = True
    is_finite = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise RingError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def _key(self):
        return (self.p,)

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        if a % self.p == 0:
            raise RingError("division by zero in GF(p)")
        return pow(a, -1, self.p)

    def from_int(self, n):
        return n % self.p

    def char(self):
        return self.p

    def elements(self):
        return iter(range(self.p))

    def sort_key(self, a):
        return a

    def name(self):
        return f"GF({self.p})"

    def show(self, a):
        return str(a)

    def parse(self, text):
        return int(text.strip()) % self.p


# -- polynomial helpers over GF(p), coefficients low-degree-first --------

def _ptrim(c):
    while c and c[-1] == 0:
        c = c[:-1]
    return c


def _pmul_modp(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return tuple(_ptrim(out))


def _pmod_modp(a, m, p):
    a = list(a)
    dm = len(m) - 1
    lead_inv = pow(m[-1], -1, p)
    while len(a) > dm:
        c = (a[-1] * lead_inv) % p
        if c:
            off = len(a) - 1 - dm
            for i, y in enumerate(m):
                a[off + i] = (a[off + i] - c * y) % p
        a.pop()
    return tuple(_ptrim(a))


def _pdivmod_modp(a, b, p):
    a = list(a)
    db = len(b) - 1
    q = [0] * max(0, len(a) - db)
    lead_inv = pow(b[-1], -1, p)
    while len(a) > db:
        c = (a[-1] * lead_inv) % p
        q[len(a) - 1 - db] = c
        if c:
            off = len(a) - 1 - db
            for i, y in enumerate(b):
                a[off + i] = (a[off + i] - c * y) % p
        a.pop()
    return tuple(_ptrim(q)), tuple(_ptrim(a))


def _pgcd_modp(a, b, p):
    a, b = tuple(_ptrim(list(a))), tuple(_ptrim(list(b)))
    while b:
        a, b = b, _pdivmod_modp(a, b, p)[1]
    if a:
        c = pow(a[-1], -1, p)
        a = tuple((x * c) % p for x in a)
    return a


def _ppowmod_modp(base, e, m, p):
    r = (1,)
    base = _pmod_modp(base, m, p)
    while e:
        if e & 1:
            r = _pmod_modp(_pmul_modp(r, base, p), m, p)
        base = _pmod_modp(_pmul_modp(base, base, p), m, p)
        e >>= 1
    return r


def poly_is_irreducible_modp(coeffs, p) -> bool:
    """coeffs low-degree-first over GF(p), must be monic of degree >= 1."""
    f = tuple(c % p for c in coeffs)
    k = len(f) - 1
    if k < 1 or f[-1] != 1:
        return False
    # x^(p^k) == x mod f, and gcd(x^(p^(k/l)) - x, f) == 1 for primes l | k
    x = (0, 1)
    if _ppowmod_modp(x, p ** k, f, p) != _pmod_modp(x, f, p):
        return False
    for ell in prime_factors(k):
        g = _ppowmod_modp(x, p ** (k // ell), f, p)
        diff = list(g) + [0] * (2 - len(g))
        diff[1] = (diff[1] - 1) % p
        d = _pgcd_modp(tuple(_ptrim(diff)), f, p)
        if len(d) != 1:
            return False
    return True


def default_modulus(p: int, k: int) -> tuple:
    """First irreducible monic degree-k polynomial over GF(p) in lex order
    of (c_0, ..., c_{k-1}).  Deterministic; documented in the README."""
    for lower in itertools.product(range(p), repeat=k):
        f = tuple(lower) + (1,)
        if poly_is_irreducible_modp(f, p):
            return f
    raise RingError("no irreducible polynomial found")  # pragma: no cover


class FiniteField(Ring):
    """GF(p^k) as GF(p)[x] / (modulus); elements are coeff tuples of length k."""

    is_field = True
    is_finite = True

    def __init__(self, p: int, k: int, modulus):
        if not is_prime(p):
            raise RingError(f"{p} is not prime")
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise RingError("modulus must be monic of degree k")
        if not poly_is_irreducible_modp(modulus, p):
            raise RingError("modulus polynomial is reducible mod p")
        self.p = p
        self.k = k
        self.modulus = modulus
        self.q = p ** k
        self.zero = ()
        self.one = (1,)

    def _key(self):
        return (self.p, self.k, self.modulus)

    def _pad(self, a):
        return tuple(a) + (0,) * (self.k - len(a))

    def add(self, a, b):
        n = max(len(a), len(b))
        a = tuple(a) + (0,) * (n - len(a))
        b = tuple(b) + (0,) * (n - len(b))
        return tuple(_ptrim([(x + y) % self.p for x, y in zip(a, b)]))

    def mul(self, a, b):
        return _pmod_modp(_pmul_modp(a, b, self.p), self.modulus, self.p)

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def is_unit(self, a):
        return len(a) > 0

    def inv(self, a):
        if not a:
            raise RingError("division by zero in finite field")
        # extended euclid in GF(p)[x]
        r0, r1 = self.modulus, tuple(a)
        s0, s1 = (), (1,)
        while r1:
            q, r = _pdivmod_modp(r0, r1, self.p)
            r0, r1 = r1, r
            qs = _pmul_modp(q, s1, self.p)
            n = max(len(s0), len(qs))
            s = tuple(
                ((s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)) % self.p
                for i in range(n)
            )
            s0, s1 = s1, tuple(_ptrim(list(s)))
        c = pow(r0[0], -1, self.p)  # r0 is a nonzero constant
        return _pmod_modp(tuple((x * c) % self.p for x in s0), self.modulus, self.p)

    def from_int(self, n):
        n %= self.p
        return (n,) if n else ()

    def char(self):
        return self.p

    def elements(self):
        for tup in itertools.product(range(self.p), repeat=self.k):
            yield tuple(_ptrim(list(tup)))

    def sort_key(self, a):
        return self._pad(a)

    def name(self):
        return f"GF({self.p}^{self.k};{self.show_poly(self.modulus)})"

    @staticmethod
    def show_poly(coeffs) -> str:
        terms = []
        for e in range(len(coeffs) - 1, -1, -1):
            c = coeffs[e]
            if not c:
                continue
            if e == 0:
                terms.append(str(c))
            elif e == 1:
                terms.append("x" if c == 1 else f"{c}*x")
            else:
                terms.append(f"x^{e}" if c == 1 else f"{c}*x^{e}")
        return "+".join(terms) if terms else "0"

    def show(self, a):
        return self.show_poly(a)

    def parse(self, text):
        return _pmod_modp(parse_poly_modp(text, self.p), self.modulus, self.p)


def parse_poly_modp(text: str, p: int) -> tuple:
    """Parse e.g. 'x^2+2*x+1' into low-degree-first coeffs mod p."""
    s = text.replace(" ", "").replace("-", "+-")
    if not s:
        raise RingError("empty polynomial literal")
    coeffs: dict[int, int] = {}
    for term in s.split("+"):
        if not term:
            continue
        m = re.fullmatch(r"(-?\d+)?\*?(x(\^(\d+))?)?", term)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise RingError(f"bad polynomial term {term!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        if m.group(2) is None:
            e = 0
        elif m.group(4) is not None:
            e = int(m.group(4))
        else:
            e = 1
        coeffs[e] = (coeffs.get(e, 0) + c) % p
    deg = max(coeffs) if coeffs else 0
    return tuple(_ptrim([coeffs.get(i, 0) for i in range(deg + 1)]))


class IntegersMod(Ring):
    is_finite = True

    def __init__(self, n: int):
        if n < 2:
            raise RingError("Z/n requires n >= 2")
        self.n = n
        self.zero = 0
        self.one = 1
        self.is_field = is_prime(n)

    def _key(self):
        return (self.n,)

    def add(self, a, b):
        return (a + b) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def is_unit(self, a):
        return gcd(a, self.n) == 1

    def inv(self, a):
        if gcd(a, self.n) != 1:
            raise RingError(f"{a} is not a unit in Z/{self.n}")
        return pow(a, -1, self.n)

    def from_int(self, n):
        return n % self.n

    def char(self):
        return self.n

    def elements(self):
        return iter(range(self.n))

    def sort_key(self, a):
        return a

    def name(self):
        return f"Z/{self.n}"

    def show(self, a):
        return str(a)

    def parse(self, text):
        return int(text.strip()) % self.n


class LocalizedIntegers(Ring):
    """Z localized at p: fractions with denominator coprime to p."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise RingError(f"{p} is not prime")
        self.p = p
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def _key(self):
        return (self.p,)

    def _check(self, a):
        if a.denominator % self.p == 0:
            raise RingError(f"{a} is not in Zloc({self.p})")
        return a

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_unit(self, a):
        return a != 0 and a.numerator % self.p != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise RingError(f"{a} is not a unit in Zloc({self.p})")
        return 1 / a

    def from_int(self, n):
        return Fraction(n)

    def char(self):
        return 0

    def valuation(self, a) -> int:
        if a == 0:
            raise RingError("valuation of zero")
        v = 0
        num = a.numerator
        while num % self.p == 0:
            num //= self.p
            v += 1
        return v

    def sort_key(self, a):
        return (a.denominator, a.numerator)

    def name(self):
        return f"Zloc({self.p})"

    def show(self, a):
        return str(a)

    def parse(self, text):
        return self._check(Fraction(text.strip()))


class DualNumbers(Ring):
    """F[eps]/(eps^2) over a field F; elements are pairs (a, b) = a + b*eps."""

    def __init__(self, base: Ring):
        if not base.is_field:
            raise RingError("dual numbers are supported over fields only")
        self.base = base
        self.is_finite = base.is_finite
        self.zero = (base.zero, base.zero)
        self.one = (base.one, base.zero)

    def _key(self):
        return (self.base,)

    def add(self, a, b):
        return (self.base.add(a[0], b[0]), self.base.add(a[1], b[1]))

    def mul(self, a, b):
        F = self.base
        return (F.mul(a[0], b[0]), F.add(F.mul(a[0], b[1]), F.mul(a[1], b[0])))

    def neg(self, a):
        return (self.base.neg(a[0]), self.base.neg(a[1]))

    def is_unit(self, a):
        return self.base.is_unit(a[0])

    def inv(self, a):
        F = self.base
        ai = F.inv(a[0])
        return (ai, F.neg(F.mul(F.mul(ai, ai), a[1])))

    def from_int(self, n):
        return (self.base.from_int(n), self.base.zero)

    def char(self):
        return self.base.char()

    def elements(self):
        for a in self.base.elements():
            for b in self.base.elements():
                yield (a, b)

    def sort_key(self, a):
        return (self.base.sort_key(a[0]), self.base.sort_key(a[1]))

    def name(self):
        return f"Dual({self.base.name()})"

    def show(self, a):
        x, y = self.base.show(a[0]), self.base.show(a[1])
        if a[1] == self.base.zero:
            return x
        if ("+" in x or "-" in x[1:]) and not x.startswith("("):
            x = f"({x})"
        if "+" in y or "-" in y[1:]:
            y = f"({y})"
        return f"{x}+eps*{y}"

    def parse(self, text):
        s = text.strip()
        # split at a top-level '+eps*'
        depth = 0
        for i in range(len(s)):
            c = s[i]
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
            elif depth == 0 and s.startswith("+eps*", i):
                a, b = s[:i], s[i + 5:]
                return (self._parse_part(a), self._parse_part(b))
        if s.startswith("eps*"):
            return (self.base.zero, self._parse_part(s[4:]))
        return (self._parse_part(s), self.base.zero)

    def _parse_part(self, s):
        s = s.strip()
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        return self.base.parse(s)


QQ = RationalField()


_RING_GRAMMAR = re.compile(
    r"Q|GF\(\d+(\^\d+;[^()]*)?\)|Z/\d+|Zloc\(\d+\)|Dual\(.*\)"
)


def parse_ring(spec: str) -> Ring:
    """Parse a ring spec string: Q | GF(p) | GF(p^k;<monic poly>) | Z/n |
    Zloc(p) | Dual(<field spec>)."""
    s = spec.strip()
    if s == "Q":
        return QQ
    m = re.fullmatch(r"GF\((\d+)\)", s)
    if m:
        return PrimeField(int(m.group(1)))
    m = re.fullmatch(r"GF\((\d+)\^(\d+);([^()]+)\)", s)
    if m:
        p, k = int(m.group(1)), int(m.group(2))
        if not is_prime(p):
            raise RingError(f"{p} is not prime")
        modulus = parse_poly_modp(m.group(3), p)
        return FiniteField(p, k, modulus)
    m = re.fullmatch(r"GF\((\d+)\^(\d+)\)", s)
    if m:
        raise RingError("GF(p^k) needs an explicit modulus: GF(p^k;<poly>)")
    m = re.fullmatch(r"Z/(\d+)", s)
    if m:
        return IntegersMod(int(m.group(1)))
    m = re.fullmatch(r"Zloc\((\d+)\)", s)
    if m:
        return LocalizedIntegers(int(m.group(1)))
    m = re.fullmatch(r"Dual\((.*)\)", s)
    if m:
        return DualNumbers(parse_ring(m.group(1)))
    raise RingError(f"malformed ring spec {spec!r}")


def gf(p: int, k: int = 1) -> Ring:
    """GF(p^k) with the deterministic default modulus (internal helper)."""
    if k == 1:
        return PrimeField(p)
    return FiniteField(p, k, default_modulus(p, k))


# ----------------------------------------------------------------------
# Ring homomorphisms


@dataclass(frozen=True)
class RingHom:
    source: Ring
    target: Ring
    fn: object
    description: str

    def __call__(self, a):
        return self.fn(a)

    def then(self, other: "RingHom") -> "RingHom":
        assert self.target == other.source
        return RingHom(
            self.source,
            other.target,
            lambda a: other.fn(self.fn(a)),
            f"{self.description}; {other.description}",
        )


def identity_hom(R: Ring) -> RingHom:
    return RingHom(R, R, lambda a: a, "id")


def _direct_hom(R: Ring, S: Ring) -> RingHom | None:
    if R == S:
        return identity_hom(R)
    if isinstance(R, LocalizedIntegers):
        if isinstance(S, RationalField):
            return RingHom(R, S, lambda a: a, "fraction-field inclusion")
        if isinstance(S, PrimeField) and S.p == R.p:
            p = R.p
            return RingHom(
                R, S, lambda a: (a.numerator * pow(a.denominator, -1, p)) % p,
                f"residue mod {p}",
            )
        if isinstance(S, IntegersMod) and prime_factors(S.n) == [R.p]:
            n = S.n
            return RingHom(
                R, S, lambda a: (a.numerator * pow(a.denominator, -1, n)) % n,
                f"residue mod {n}",
            )
    if isinstance(R, IntegersMod):
        if isinstance(S, IntegersMod) and R.n % S.n == 0:
            return RingHom(R, S, lambda a: a % S.n, f"quotient mod {S.n}")
        if isinstance(S, PrimeField) and R.n % S.p == 0:
            return RingHom(R, S, lambda a: a % S.p, f"quotient mod {S.p}")
    if isinstance(R, PrimeField):
        if isinstance(S, FiniteField) and S.p == R.p:
            return RingHom(R, S, lambda a: (a,) if a else (), "prime-field inclusion")
    if isinstance(R, FiniteField) and isinstance(S, FiniteField):
        if S.p == R.p and S.k % R.k == 0:
            root = _find_embedding_root(R, S)
            if root is not None:
                def emb(a, root=root, S=S):
                    acc = S.zero
                    power = S.one
                    for c in a:
                        if c:
                            acc = S.add(acc, S.mul(S.from_int(c), power))
                        power = S.mul(power, root)
                    return acc
                return RingHom(R, S, emb, "field extension")
    if isinstance(S, DualNumbers) and S.base == R:
        return RingHom(R, S, lambda a: (a, R.zero), "dual-numbers inclusion")
    if isinstance(R, DualNumbers) and R.base == S:
        return RingHom(R, S, lambda a: a[0], "eps -> 0")
    return None


def _find_embedding_root(R: FiniteField, S: FiniteField):
    """First root of R's modulus in S, in S's element order."""
    for cand in S.elements():
        acc = S.zero
        power = S.one
        for c in R.modulus:
            if c:
                acc = S.add(acc, S.mul(S.from_int(c), power))
            power = S.mul(power, cand)
        if acc == S.zero:
            return cand
    return None


def find_hom(R: Ring, S: Ring) -> RingHom | None:
    """A supported ring homomorphism R -> S (residue maps, fraction-field
    inclusion, field extensions, dual-numbers maps, and their composites),
    or None."""
    h = _direct_hom(R, S)
    if h is not None:
        return h
    # composites through an intermediate residue field / prime field
    mids: list[Ring] = []
    if isinstance(S, DualNumbers):
        mids.append(S.base)
    if isinstance(S, FiniteField):
        mids.append(PrimeField(S.p))
    if isinstance(R, LocalizedIntegers):
        mids.append(PrimeField(R.p))
    if isinstance(R, IntegersMod):
        mids.extend(PrimeField(p) for p in prime_factors(R.n))
    if isinstance(R, DualNumbers):
        mids.append(R.base)
    for mid in mids:
        if mid == R or mid == S:
            continue
        first = _direct_hom(R, mid) or find_hom(R, mid)
        if first is None:
            continue
        rest = _direct_hom(mid, S) or find_hom(mid, S)
        if rest is not None:
            return first.then(rest)
    return None


def hom_preimage(hom: RingHom, b):
    """Pull an element of hom's target back along an injective hom between
    finite fields (or trivial cases); None if b is not in the image."""
    R = hom.source
    if not R.is_finite:
        raise RingError("preimage search needs a finite source")
    for a in R.elements():
        if hom(a) == b:
            return a
    return None


# ----------------------------------------------------------------------
# Spectra


@dataclass
class SpectrumPoint:
    id: str
    residue_field: Ring
    specializations: list = field(default_factory=list)
    residue_hom: RingHom | None = None


def spectrum(R: Ring) -> list[SpectrumPoint]:
    """The points of Spec R with residue fields and specialization order."""
    if isinstance(R, (RationalField, PrimeField, FiniteField)):
        return [SpectrumPoint("pt", R, [], identity_hom(R))]
    if isinstance(R, DualNumbers):
        return [SpectrumPoint("pt", R.base, [], _direct_hom(R, R.base))]
    if isinstance(R, IntegersMod):
        pts = []
        for p in prime_factors(R.n):
            k = PrimeField(p)
            pts.append(SpectrumPoint(f"p{p}", k, [], _direct_hom(R, k)))
        return pts
    if isinstance(R, LocalizedIntegers):
        closed = SpectrumPoint(
            "closed", PrimeField(R.p), [], _direct_hom(R, PrimeField(R.p))
        )
        generic = SpectrumPoint("generic", QQ, ["closed"], _direct_hom(R, QQ))
        return [generic, closed]
    raise RingError(f"no spectrum description for {R.name()}")
