"""Exact arithmetic in imaginary quadratic fields.

Ideal classes are modeled by reduced positive-definite binary quadratic
forms under Gauss/Dirichlet composition; specific ideals (as opposed to
classes) are modeled by two-row Hermite normal form lattices over the
maximal order.  Everything is plain big-integer arithmetic: no floating
point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd, isqrt

from sympy import factorint, isprime, kronecker_symbol

from .errors import (
    NonFundamentalDiscriminant,
    NotPrincipal,
    RamifiedPrime,
)

__all__ = [
    "QuadraticField",
    "QuadraticInteger",
    "QuadForm",
    "ClassGroup",
    "PrimeSplitting",
    "IsNormResult",
    "make_field",
    "splitting",
    "class_group",
    "is_norm",
    "principal_generator",
    "prime_form",
]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with u*a + v*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _solve_linmod(a: int, b: int, m: int) -> tuple[int, int]:
    """Solve a*x = b (mod m); return (x0, step) so that x = x0 + k*step."""
    g, u, _ = _xgcd(a, m)
    if b % g:
        raise ValueError("congruence has no solution")
    return (b // g * u) % m, m // g


def _squarefree_part(n: int) -> int:
    """Largest squarefree divisor of n, carrying the sign of n."""
    sign = -1 if n < 0 else 1
    m = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            m *= p
    return sign * m


def fundamental_discriminant(n: int) -> int:
    """Discriminant of the quadratic field Q(sqrt(n)), n nonsquare."""
    m = _squarefree_part(n)
    return m if m % 4 == 1 else 4 * m


@dataclass(frozen=True)
class QuadraticField:
    """Imaginary quadratic field of fundamental discriminant ``disc``.

    ``w`` is the number of roots of unity: 6 for disc -3, 4 for disc -4,
    and 2 otherwise.
    """

    disc: int
    w: int

    def kronecker(self, p: int) -> int:
        return int(kronecker_symbol(self.disc, p))

    def integer(self, x: int, y: int) -> "QuadraticInteger":
        return QuadraticInteger(x, y, self)

    def one(self) -> "QuadraticInteger":
        return QuadraticInteger(2, 0, self)


@dataclass(frozen=True)
class QuadraticInteger:
    """Element (x + y*sqrt(disc))/2 of the maximal order.

    Integrality forces x = y*disc (mod 2).
    """

    x: int
    y: int
    field: QuadraticField

    def __post_init__(self):
        if (self.x - self.y * self.field.disc) % 2:
            raise ValueError(
                f"({self.x} + {self.y}*sqrt({self.field.disc}))/2 is not integral"
            )

    def norm(self) -> int:
        d = self.field.disc
        n, r = divmod(self.x * self.x - d * self.y * self.y, 4)
        assert r == 0
        return n

    def trace(self) -> int:
        return self.x

    def conjugate(self) -> "QuadraticInteger":
        return QuadraticInteger(self.x, -self.y, self.field)

    def is_rational(self) -> bool:
        return self.y == 0

    def __add__(self, other: "QuadraticInteger") -> "QuadraticInteger":
        assert self.field == other.field
        return QuadraticInteger(self.x + other.x, self.y + other.y, self.field)

    def __sub__(self, other: "QuadraticInteger") -> "QuadraticInteger":
        assert self.field == other.field
        return QuadraticInteger(self.x - other.x, self.y - other.y, self.field)

    def __neg__(self) -> "QuadraticInteger":
        return QuadraticInteger(-self.x, -self.y, self.field)

    def __mul__(self, other: "QuadraticInteger") -> "QuadraticInteger":
        assert self.field == other.field
        d = self.field.disc
        xx, rx = divmod(self.x * other.x + d * self.y * other.y, 2)
        yy, ry = divmod(self.x * other.y + self.y * other.x, 2)
        assert rx == 0 and ry == 0
        return QuadraticInteger(xx, yy, self.field)

    def __pow__(self, n: int) -> "QuadraticInteger":
        if n < 0:
            raise ValueError("negative powers leave the order")
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __str__(self) -> str:
        return f"({self.x} + {self.y}*sqrt({self.field.disc}))/2"


@dataclass(frozen=True, order=True)
class QuadForm:
    """Positive definite binary quadratic form a*x^2 + b*x*y + c*y^2."""

    a: int
    b: int
    c: int

    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        return (-a < b <= a < c) or (0 <= b <= a == c)

    def normalized(self) -> "QuadForm":
        a, b, c = self.a, self.b, self.c
        if -a < b <= a:
            return self
        r = (a - b) // (2 * a)
        return QuadForm(a, b + 2 * r * a, a * r * r + b * r + c)

    def reduced(self) -> "QuadForm":
        f = self.normalized()
        a, b, c = f.a, f.b, f.c
        while a > c or (a == c and b < 0):
            s = (c + b) // (2 * c)
            a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
            # renormalize so that -a < b <= a
            if not -a < b <= a:
                r = (a - b) // (2 * a)
                b, c = b + 2 * r * a, a * r * r + b * r + c
        return QuadForm(a, b, c)

    def inverse(self) -> "QuadForm":
        return QuadForm(self.a, -self.b, self.c).reduced()

    def compose(self, other: "QuadForm") -> "QuadForm":
        """Dirichlet composition followed by reduction."""
        if self == other:
            return self._square().reduced()
        a1, b1, c1 = self.a, self.b, self.c
        a2, b2, c2 = other.a, other.b, other.c
        g = (b1 + b2) // 2
        h = -(b1 - b2) // 2
        w = gcd(gcd(a1, a2), g)
        s = a1 // w
        t = a2 // w
        u = g // w
        mu, nu = _solve_linmod(t * u, h * u + s * c1, s * t)
        lam = _solve_linmod(t * nu, h - t * mu, s)[0]
        k = mu + nu * lam
        ell = (k * t - h) // s
        m = (t * u * k - h * u - c1 * s) // (s * t)
        return QuadForm(s * t, w * u - (k * t + ell * s), k * ell - w * m).reduced()

    def _square(self) -> "QuadForm":
        a, b, c = self.a, self.b, self.c
        mu = _solve_linmod(b, c, a)[0]
        return QuadForm(a * a, b - 2 * a * mu, mu * mu - (b * mu - c) // a)

    def power(self, n: int) -> "QuadForm":
        """Reduced n-th composition power of the class of this form."""
        result = principal_form(self.disc())
        base = self.reduced()
        while n:
            if n & 1:
                result = result.compose(base)
            base = base.compose(base)
            n >>= 1
        return result


def principal_form(disc: int) -> QuadForm:
    k = disc % 2
    return QuadForm(1, k, (k * k - disc) // 4)


@dataclass(frozen=True)
class ClassGroup:
    """Form class group: class number plus invariant factor decomposition."""

    field: QuadraticField
    h: int
    elementary_divisors: tuple[int, ...]
    forms: tuple[QuadForm, ...] = dc_field(repr=False, default=())


@dataclass(frozen=True)
class PrimeSplitting:
    """Splitting behaviour of a rational prime, with the class order of a
    prime above it when one exists (split or ramified)."""

    p: int
    kind: str  # "split" | "inert" | "ramified"
    ideal_class_order: int | None


def make_field(disc: int) -> QuadraticField:
    """Construct the imaginary quadratic field of a fundamental discriminant.

    Raises NonFundamentalDiscriminant (payload: the discriminant of the
    field Q(sqrt(disc)) actually generated) for any other negative input.
    """
    if disc >= 0:
        raise ValueError(f"discriminant must be negative, got {disc}")
    fund = fundamental_discriminant(disc)
    if disc != fund:
        raise NonFundamentalDiscriminant(disc, fund)
    w = 6 if disc == -3 else 4 if disc == -4 else 2
    return QuadraticField(disc, w)


def prime_form(fld: QuadraticField, p: int) -> QuadForm:
    """Form (p, b, c) attached to a prime ideal of norm p above p.

    Defined for split and ramified p only; the choice between the two
    conjugate primes above a split p is a fixed convention.
    """
    d = fld.disc
    sym = fld.kronecker(p)
    if sym == -1:
        raise ValueError(f"{p} is inert; no degree-one prime above it")
    if p == 2:
        if sym == 1:  # d = 1 mod 8
            return QuadForm(2, 1, (1 - d) // 8)
        if d % 8 == 0:
            return QuadForm(2, 0, -d // 8)
        return QuadForm(2, 2, (4 - d) // 8)
    if sym == 0:
        if d % 2:
            return QuadForm(p, p, (p * p - d) // (4 * p))
        return QuadForm(p, 0, -d // (4 * p))
    from sympy.ntheory import sqrt_mod

    r = int(sqrt_mod(d % p, p))
    b = r if (r - d) % 2 == 0 else r + p
    return QuadForm(p, b, (b * b - d) // (4 * p))


def _form_order(f: QuadForm, disc: int) -> int:
    one = principal_form(disc)
    g = f.reduced()
    n = 1
    while g != one:
        g = g.compose(f)
        n += 1
    return n


def splitting(fld: QuadraticField, p: int) -> PrimeSplitting:
    """Splitting kind of p by Kronecker symbol, plus the order of the class
    of a prime above p in the class group (absent when inert)."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    sym = fld.kronecker(p)
    if sym == -1:
        return PrimeSplitting(p, "inert", None)
    kind = "split" if sym == 1 else "ramified"
    order = _form_order(prime_form(fld, p), fld.disc)
    return PrimeSplitting(p, kind, order)


def reduced_forms(disc: int) -> tuple[QuadForm, ...]:
    """All reduced forms of the given discriminant, sorted."""
    out = []
    amax = isqrt(-disc // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            out.append(QuadForm(a, b, c))
    return tuple(sorted(out))


def _abelian_invariants(orders_fn, elements, h: int) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group given by exhaustion.

    ``orders_fn(g, e)`` must return g composed with itself e times (the
    e-th power in the group).  The p-part structure is recovered from the
    counts of elements killed by successive p-power exponents.
    """
    if h == 1:
        return (1,)
    per_prime: dict[int, list[int]] = {}
    for p, v in factorint(h).items():
        counts = [1]
        for i in range(1, v + 1):
            e = p**i
            counts.append(sum(1 for g in elements if orders_fn(g, e)))
        # number of cyclic p-factors with exponent >= i
        n_parts = []
        for i in range(1, v + 1):
            ratio = counts[i] // counts[i - 1]
            k = 0
            while ratio > 1:
                ratio //= p
                k += 1
            n_parts.append(k)
        exps = []
        j = 1
        while True:
            e_j = sum(1 for n in n_parts if n >= j)
            if e_j == 0:
                break
            exps.append(e_j)
            j += 1
        per_prime[p] = exps  # descending cyclic exponents of the p-part
    rank = max(len(v) for v in per_prime.values())
    factors = []
    for i in range(rank):
        d = 1
        for p, exps in per_prime.items():
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    return tuple(sorted(factors))


@lru_cache(maxsize=None)
def _class_group_by_disc(disc: int) -> ClassGroup:
    fld = QuadraticField(disc, 6 if disc == -3 else 4 if disc == -4 else 2)
    forms = reduced_forms(disc)
    h = len(forms)
    one = principal_form(disc)

    def is_killed(g: QuadForm, e: int) -> bool:
        return g.power(e) == one

    divisors = _abelian_invariants(is_killed, forms, h)
    return ClassGroup(fld, h, divisors, forms)


def class_group(fld: QuadraticField) -> ClassGroup:
    """Class group by exhaustive reduced-form enumeration."""
    return _class_group_by_disc(fld.disc)


@dataclass(frozen=True)
class IsNormResult:
    """Outcome of the norm test with its three independent routes.

    route_class:  l splits and the prime above it is principal.
    route_form:   l is represented by the principal form.
    route_search: the norm equation x^2 - disc*y^2 = 4l has a solution.
    """

    value: bool
    witness: QuadraticInteger | None
    route_class: bool
    route_form: bool
    route_search: bool


def _represented_by_principal_form(disc: int, l: int) -> bool:
    b0 = disc % 2
    c0 = (b0 * b0 - disc) // 4
    ybound = isqrt(4 * l // -disc) + 1
    for y in range(-ybound, ybound + 1):
        # 4*(x^2 + b0*x*y + c0*y^2) = (2x + b0*y)^2 + |disc|*y^2
        rem = 4 * l + disc * y * y
        if rem < 0:
            continue
        tmax = isqrt(rem)
        for x in range((-b0 * y - tmax - 2) // 2, (-b0 * y + tmax + 2) // 2 + 1):
            if x * x + b0 * x * y + c0 * y * y == l:
                return True
    return False


def _norm_equation_solutions(disc: int, n: int):
    """Yield (x, y) with x, y >= 0, x^2 - disc*y^2 = 4n, x = y*disc (mod 2),
    in increasing y order."""
    ybound = isqrt(4 * n // -disc) + 1
    for y in range(0, ybound + 1):
        r = 4 * n + disc * y * y
        if r < 0:
            break
        x = isqrt(r)
        if x * x == r and (x - y * disc) % 2 == 0:
            yield x, y


def is_norm(fld: QuadraticField, l: int) -> IsNormResult:
    """Decide whether the prime l is the norm of an integral element.

    Three routes are computed and must agree: principality of the prime
    above l, representation by the principal form, and a bounded search of
    the norm equation.  The witness, when one exists, is the canonical
    solution (x >= 0, minimal y >= 0).
    """
    if not isprime(l):
        raise ValueError(f"{l} is not prime")
    if fld.disc % l == 0:
        raise RamifiedPrime(f"{l} ramifies in discriminant {fld.disc}")

    sym = fld.kronecker(l)
    route_class = False
    if sym == 1:
        route_class = prime_form(fld, l).reduced() == principal_form(fld.disc)
    route_form = _represented_by_principal_form(fld.disc, l)
    witness = None
    for x, y in _norm_equation_solutions(fld.disc, l):
        witness = fld.integer(x, y)
        break
    route_search = witness is not None
    if not (route_class == route_form == route_search):
        raise AssertionError(
            f"norm routes disagree for disc={fld.disc}, l={l}: "
            f"class={route_class} form={route_form} search={route_search}"
        )
    return IsNormResult(route_class, witness, route_class, route_form, route_search)


# --- ideals as Hermite normal form lattices over the maximal order -------
#
# An integral ideal is Z*a + Z*(b + c*w) with w = (disc + sqrt(disc))/2,
# c | a, c | b, 0 <= b < a.  Its norm is a*c.


@dataclass(frozen=True)
class _Ideal:
    a: int
    b: int
    c: int
    disc: int

    def norm(self) -> int:
        return self.a * self.c

    def conjugate(self) -> "_Ideal":
        # conj(b + c*w) = (b + c*disc) - c*w
        return _hnf_ideal(
            [(self.a, 0), (self.b + self.c * self.disc, -self.c)], self.disc
        )

    def contains(self, z: QuadraticInteger) -> bool:
        # z = u + v*w with u = (x - y*disc)/2, v = y
        u = (z.x - z.y * self.disc) // 2
        v = z.y
        if v % self.c:
            return False
        return (u - (v // self.c) * self.b) % self.a == 0

    def multiply(self, other: "_Ideal") -> "_Ideal":
        d = self.disc
        t = (d * d - d) // 4  # w^2 = d*w - t
        gens = [
            (self.a * other.a, 0),
            (self.a * other.b, self.a * other.c),
            (other.a * self.b, other.a * self.c),
            (
                self.b * other.b - self.c * other.c * t,
                self.b * other.c + self.c * other.b + self.c * other.c * d,
            ),
        ]
        return _hnf_ideal(gens, d)

    def power(self, n: int) -> "_Ideal":
        result = _hnf_ideal([(1, 0), (0, 1)], self.disc)
        base = self
        while n:
            if n & 1:
                result = result.multiply(base)
            base = base.multiply(base)
            n >>= 1
        return result


def _hnf_ideal(gens: list[tuple[int, int]], disc: int) -> _Ideal:
    """Hermite normal form of the Z-module spanned by (u, v) pairs."""
    rows = list(gens)
    # fold the w-column into a single row (b, c) by gcd steps
    b, c = 0, 0
    for u, v in rows:
        if v == 0:
            continue
        if c == 0:
            b, c = u, v
        else:
            g, s, t = _xgcd(c, v)
            b, c = s * b + t * u, g
    if c < 0:
        b, c = -b, -c
    # reduce every generator by the (b, c) row, leaving pure-integer vectors
    a = 0
    for u, v in rows:
        if c:
            assert v % c == 0, "column gcd must divide every entry"
            u -= (v // c) * b
        a = gcd(a, u)
    a = abs(a)
    if a:
        b %= a
    return _Ideal(a, b, c, disc)


def _form_ideal(fld: QuadraticField, f: QuadForm) -> _Ideal:
    """Ideal Z*a + Z*((-b + sqrt(disc))/2) attached to the form (a, b, c)."""
    d = fld.disc
    assert f.disc() == d, "form discriminant must match the field"
    s = (-f.b - d) // 2  # (-b + sqrt(d))/2 = s + w
    return _hnf_ideal([(f.a, 0), (s, 1)], d)


def principal_generator(
    fld: QuadraticField, form: QuadForm, n: int = 1
) -> QuadraticInteger:
    """Canonical generator of the n-th power of the ideal attached to ``form``.

    Raises NotPrincipal when the n-th power class is not the identity.  The
    generator is determined up to roots of unity and conjugation; the
    representative returned has x >= 0 and minimal y >= 0.
    """
    if n < 1:
        raise ValueError("exponent must be positive")
    if form.power(n) != principal_form(fld.disc):
        raise NotPrincipal(
            f"class of ({form.a},{form.b},{form.c})^{n} is not principal "
            f"in discriminant {fld.disc}"
        )
    ideal = _form_ideal(fld, form).power(n)
    target = ideal.norm()
    for x, y in _norm_equation_solutions(fld.disc, target):
        for cand in (fld.integer(x, y), fld.integer(x, -y)):
            if ideal.contains(cand):
                return fld.integer(x, y)
    raise AssertionError(
        f"principal ideal of norm {target} has no generator; "
        "the class test and the search bound disagree"
    )
