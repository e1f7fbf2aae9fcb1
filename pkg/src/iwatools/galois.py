"""Measures and pseudo-measures on Gamma' x H.

A measure is a finitely supported family nu = sum_h nu_h * h of Gamma'-series
(T = gamma_0 - 1); the group acts by pushforward, sigma = (gamma_0^k, h)
translating the H-index and multiplying components by (1+T)^k.

A pseudo-measure keeps a symbolic denominator: a product of terms
(1 - sigma^{-1}) and (N - sigma).  Specializing at a character chi of H turns
each term into a series over the value ring D = Z_p[x]/Phi_d, and division is
attempted lazily per character: it succeeds outright when the term's constant
specialization is a unit, and through T-valuation when the constant vanishes
(the "(1 - gamma) nu(1) is a measure" mechanism); anything else reports
NotDivisible for that chi.

The p-adic L-value of chi at s integrates kappa^s against the chi^{-1}
component: a Mahler pairing with finite differences of i -> kappa^(s*i),
whose tail is controlled by v(kappa0^s - 1) >= 2.  The associated Iwasawa
function is the denominator-cleared chi^{-1} component itself; evaluating it
at kappa0^s - 1 must agree with the integral, which the tests exercise as the
two-path consistency contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    ContextMismatch,
    DegenerateDenominator,
    DomainError,
    NotAHomomorphism,
    NotDivisible,
)
from .padic import kappa_power
from .series import BaseRing, IwasawaSeries, one_plus_T_pow
from .cyclotomic import CycElt, CycRing

DEFAULT_KAPPA_GEN = 5  # any residue = 5 mod 8 generates 1 + 4Z_2


def _lcm(a, b):
    return a * b // math.gcd(a, b)


class FiniteAbelianGroup:
    """Product of cyclic groups with named generators; elements are exponent
    tuples reduced mod the orders."""

    def __init__(self, orders, names=None):
        orders = tuple(int(d) for d in orders)
        if any(d < 1 for d in orders):
            raise ValueError("cyclic orders must be positive")
        self.orders = orders
        self.names = tuple(names) if names else tuple(f"g{i}" for i in range(len(orders)))

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and other.orders == self.orders

    def __hash__(self):
        return hash(self.orders)

    def __repr__(self):
        return f"FiniteAbelianGroup{self.orders}"

    @property
    def identity(self):
        return (0,) * len(self.orders)

    def reduce(self, h):
        return tuple(a % d for a, d in zip(h, self.orders))

    def mul(self, a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, self.orders))

    def inv(self, a):
        return tuple((-x) % d for x, d in zip(a, self.orders))

    def elements(self):
        out = [()]
        for d in self.orders:
            out = [t + (i,) for t in out for i in range(d)]
        return out

    def order(self):
        n = 1
        for d in self.orders:
            n *= d
        return n

    def exponent(self):
        e = 1
        for d in self.orders:
            e = _lcm(e, d)
        return e


class CharacterOfH:
    """chi(gen_i) = zeta_{d_i}^{e_i}, valued in Z_p[x]/Phi_d for d = ord(chi)."""

    def __init__(self, group: FiniteAbelianGroup, exponents, ctx):
        self.group = group
        self.exponents = tuple(e % d for e, d in zip(exponents, group.orders))
        order = 1
        for e, d in zip(self.exponents, group.orders):
            order = _lcm(order, d // math.gcd(d, e) if e else 1)
        self.order = order
        self.ctx = ctx
        self.ring = CycRing(ctx, order)

    def __repr__(self):
        return f"CharacterOfH{self.exponents} of order {self.order}"

    def is_trivial(self):
        return all(e == 0 for e in self.exponents)

    def inverse(self):
        return CharacterOfH(self.group,
                            [-e for e in self.exponents], self.ctx)

    def value_exponent(self, h) -> int:
        """t with chi(h) = zeta_order^t."""
        t = 0
        for a, e, d in zip(h, self.exponents, self.group.orders):
            if e:
                o = d // math.gcd(d, e)
                u = (e * o // d) % o
                t += a * u * (self.order // o)
        return t % self.order

    def value(self, h) -> CycElt:
        return self.ring.zeta_power(self.value_exponent(h))


@dataclass
class GaloisMeasure:
    """H-indexed family of Gamma'-series; absent keys are the zero series."""

    group: FiniteAbelianGroup
    ring: BaseRing
    M: int
    components: dict = field(default_factory=dict)

    def component(self, h):
        h = self.group.reduce(h)
        got = self.components.get(h)
        return got if got is not None else IwasawaSeries.zero(self.ring, self.M)

    def set_component(self, h, series):
        if series.M != self.M or series.ring != self.ring:
            raise ContextMismatch("component series window or ring mismatch")
        self.components[self.group.reduce(h)] = series
        return self

    def __add__(self, other):
        if other.group != self.group or other.M != self.M:
            raise ContextMismatch("measures live on different groups or windows")
        out = dict(self.components)
        for h, s in other.components.items():
            out[h] = out[h] + s if h in out else s
        return GaloisMeasure(self.group, self.ring, self.M, out)

    def __neg__(self):
        return GaloisMeasure(self.group, self.ring, self.M,
                             {h: -s for h, s in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return GaloisMeasure(self.group, self.ring, self.M,
                             {h: s.scale(c) for h, s in self.components.items()})

    def push(self, sigma):
        """Pushforward by sigma = (k, h): translate H, multiply by (1+T)^k."""
        k, h = sigma
        h = self.group.reduce(h)
        factor = one_plus_T_pow(self.ring, k, self.M) if k else None
        out = {}
        for h0, s in self.components.items():
            s2 = s * factor if factor is not None else s
            out[self.group.mul(h0, h)] = s2
        return GaloisMeasure(self.group, self.ring, self.M, out)

    def act(self, elt):
        """Apply a formal Z-combination of group elements (list of (coef, sigma))."""
        total = None
        for coef, sigma in elt:
            piece = self.push(sigma).scale(self.ring.from_int(coef))
            total = piece if total is None else total + piece
        return total if total is not None else GaloisMeasure(self.group, self.ring, self.M)

    def __eq__(self, other):
        if not isinstance(other, GaloisMeasure) or other.group != self.group:
            return NotImplemented
        keys = set(self.components) | set(other.components)
        return all(self.component(h) == other.component(h) for h in keys)


def pushforward_group(nu: GaloisMeasure, sigma) -> GaloisMeasure:
    return nu.push(sigma)


def restrict_to_quotient(nu: GaloisMeasure, target: FiniteAbelianGroup,
                         gen_images) -> GaloisMeasure:
    """Sum components along the fibers of the map sending generator i of H to
    gen_images[i] in the target group; the map must be a surjective hom."""
    H = nu.group
    gen_images = [target.reduce(g) for g in gen_images]
    if len(gen_images) != len(H.orders):
        raise NotAHomomorphism("need one image per generator")
    for d, img in zip(H.orders, gen_images):
        power = tuple((d * x) % dd for x, dd in zip(img, target.orders))
        if power != target.identity:
            raise NotAHomomorphism(
                f"generator of order {d} maps to an element whose order "
                f"does not divide it"
            )
    reached = {target.identity}
    frontier = [target.identity]
    while frontier:
        cur = frontier.pop()
        for img in gen_images:
            nxt = target.mul(cur, img)
            if nxt not in reached:
                reached.add(nxt)
                frontier.append(nxt)
    if len(reached) != target.order():
        raise NotAHomomorphism("the map is not surjective")
    out = GaloisMeasure(target, nu.ring, nu.M)
    for h, s in nu.components.items():
        img = target.identity
        for a, g in zip(h, gen_images):
            img = target.mul(img, tuple((a * x) % d for x, d in zip(g, target.orders)))
        if img in out.components:
            out.components[img] = out.components[img] + s
        else:
            out.components[img] = s
    return out


# -- pseudo-measures ------------------------------------------------------------


@dataclass(frozen=True)
class DenominatorTerm:
    """Either (1 - sigma^{-1}) [kind 'one_minus_inv'] or (N - sigma)
    [kind 'norm_minus']."""

    kind: str
    sigma: tuple
    n: int = 0

    def specialize(self, chi: CharacterOfH, ring: CycRing, M: int) -> IwasawaSeries:
        k, h = self.sigma
        one = IwasawaSeries.from_ints(ring, [1], M)
        if self.kind == "one_minus_inv":
            chi_inv = ring.zeta_power(-chi.value_exponent(h))
            return one - one_plus_T_pow(ring, -k, M).scale(chi_inv)
        chi_h = ring.zeta_power(chi.value_exponent(h))
        return one.scale(ring.from_int(self.n)) - one_plus_T_pow(ring, k, M).scale(chi_h)


@dataclass
class PseudoMeasure:
    """numerator / product of denominator terms, divided lazily per chi."""

    numerator: GaloisMeasure
    denominator: list = field(default_factory=list)

    @property
    def group(self):
        return self.numerator.group

    def adjoin_term(self, term: DenominatorTerm):
        k, h = term.sigma
        h = self.group.reduce(h)
        if term.kind == "one_minus_inv" and k == 0 and h == self.group.identity:
            raise DegenerateDenominator("(1 - identity) vanishes identically")
        if term.kind == "norm_minus" and term.n == 1 and k == 0 \
                and h == self.group.identity:
            raise DegenerateDenominator("(1 - identity) vanishes identically")
        return PseudoMeasure(self.numerator,
                             self.denominator + [DenominatorTerm(term.kind, (k, h), term.n)])


def euler_factor_adjust(pm: PseudoMeasure, sigma_l) -> PseudoMeasure:
    """Multiply the denominator by (1 - sigma_l^{-1})."""
    return pm.adjoin_term(DenominatorTerm("one_minus_inv", sigma_l))


def recover_from_alpha(nu_alpha: GaloisMeasure, n_alpha: int, sigma_alpha) -> PseudoMeasure:
    """The pseudo-measure nu_alpha / (N_alpha - sigma_alpha)."""
    return PseudoMeasure(nu_alpha).adjoin_term(
        DenominatorTerm("norm_minus", sigma_alpha, n_alpha))


def chi_component(nu: GaloisMeasure, chi: CharacterOfH) -> IwasawaSeries:
    """sum over h of chi(h) * nu_h, over the value ring of chi."""
    ring = chi.ring
    out = None
    for h, s in nu.components.items():
        zeta = chi.value(h)
        lifted = IwasawaSeries(ring, [ring.coerce(c) * zeta for c in s.coeffs], nu.M)
        out = lifted if out is None else out + lifted
    if out is None:
        out = IwasawaSeries.zero(ring, nu.M)
    return out


def divide_series(num: IwasawaSeries, den: IwasawaSeries, chi=None) -> IwasawaSeries:
    """Exact division in D[[T]] via unit constants and T-valuation."""
    ring = num.ring
    shifts = 0
    while True:
        c0 = den.coeffs[0]
        if ring.is_unit(c0):
            return num * den.invert_unit()
        if c0.is_zero_at_precision():
            if not num.coeffs[0].is_zero_at_precision():
                raise NotDivisible(
                    "denominator vanishes at T = 0 but the numerator does not",
                    chi=chi)
            num = num.shift_T()
            den = den.shift_T()
            shifts += 1
            if shifts > num.M:
                raise NotDivisible("denominator is zero to working precision",
                                   chi=chi)
            continue
        raise NotDivisible(
            "denominator constant term is a non-unit, non-vanishing "
            "specialization", chi=chi)


def normalize(pm: PseudoMeasure, chi: CharacterOfH) -> IwasawaSeries:
    """Clear the denominator on the chi-component; NotDivisible on obstruction."""
    ring = chi.ring
    out = chi_component(pm.numerator, chi)
    for term in pm.denominator:
        den = term.specialize(chi, ring, pm.numerator.M)
        out = divide_series(out, den, chi=chi.exponents)
    return out


def _as_pseudo(nu) -> PseudoMeasure:
    return nu if isinstance(nu, PseudoMeasure) else PseudoMeasure(nu)


def iwasawa_function(nu, chi: CharacterOfH, *, kappa_gen: int = DEFAULT_KAPPA_GEN
                     ) -> IwasawaSeries:
    """The series F(w, chi): denominator-cleared chi^{-1} component, with the
    trivial character first multiplied by (1 - gamma_0) = -T."""
    pm = _as_pseudo(nu)
    chi_inv = chi.inverse()
    out = chi_component(pm.numerator, chi_inv)
    if chi.is_trivial():
        minus_t = IwasawaSeries.from_ints(chi_inv.ring, [0, -1], pm.numerator.M)
        out = out * minus_t
    for term in pm.denominator:
        den = term.specialize(chi_inv, chi_inv.ring, pm.numerator.M)
        out = divide_series(out, den, chi=chi.exponents)
    return out


def lp_value(nu, chi: CharacterOfH, s, *, kappa_gen: int = DEFAULT_KAPPA_GEN,
             terms: int | None = None) -> CycElt:
    """L_p(s, chi): integral of kappa^s against the cleared chi^{-1} component.

    Mahler pairing: sum over k of (finite differences of i -> kappa0^{s i} at 0)
    times the k-th coefficient; the k-th difference is (kappa0^s - 1)^k, of
    valuation >= (2 + v(s)) k, so ceil(N/2) terms exhaust the digit budget.
    """
    F = iwasawa_function(nu, chi, kappa_gen=kappa_gen)
    ring = F.ring
    ctx = ring.ctx
    if isinstance(s, int):
        s = ctx.integer(s)
    kappa0 = ctx.integer(kappa_gen)
    w = kappa_power(kappa0, s)
    K = terms if terms is not None else min(F.M, ctx.N // 2 + 2)
    powers = [ctx.one()]
    for _ in range(K - 1):
        powers.append(powers[-1] * w)
    # forward difference table of the sequence of powers
    total = None
    diff = powers
    for k in range(K):
        contrib = F.coeffs[k] * diff[0]
        total = contrib if total is None else total + contrib
        diff = [b - a for a, b in zip(diff, diff[1:])]
    tail = (2 + s.val_floor()) * K
    return ring.cap(total, min(total.pi_prec, tail * ring.ramification)) \
        if isinstance(total, CycElt) else total


def evaluate_iwasawa_function(F: IwasawaSeries, s, *,
                              kappa_gen: int = DEFAULT_KAPPA_GEN):
    """Path B of the consistency contract: F(kappa0^s - 1)."""
    ring = F.ring
    ctx = ring.ctx
    if isinstance(s, int):
        s = ctx.integer(s)
    w = kappa_power(ctx.integer(kappa_gen), s)
    x = ring.coerce(w - ctx.one())
    return F.evaluate(x)


def combine_recover(pm1: PseudoMeasure, pm2: PseudoMeasure, chi: CharacterOfH
                    ) -> IwasawaSeries:
    """Solve d1*m = n1, d2*m = n2 jointly via a polynomial Bezout identity
    a*d1 + b*d2 = c (constant); m = (a*n1 + b*n2) / c, dividing by the
    uniformizer content of c when c is not a unit."""
    if len(pm1.denominator) != 1 or len(pm2.denominator) != 1:
        raise DomainError("combined recovery expects single-term denominators")
    ring = chi.ring
    M = pm1.numerator.M
    n1 = chi_component(pm1.numerator, chi)
    n2 = chi_component(pm2.numerator, chi)
    d1 = pm1.denominator[0].specialize(chi, ring, M)
    d2 = pm2.denominator[0].specialize(chi, ring, M)
    deg1 = max(pm1.denominator[0].sigma[0], 0)
    deg2 = max(pm2.denominator[0].sigma[0], 0)
    a, b, c = _poly_bezout(d1, d2, deg1, deg2, ring, M)
    combined = n1 * a + n2 * b
    if ring.is_unit(c):
        return combined.scale(ring.inv(c))
    v = ring.valuation(c)
    if v is None:
        raise NotDivisible("Bezout constant vanishes to working precision",
                           chi=chi.exponents)
    unit_part = ring.div_uni(c, v)
    cleared = IwasawaSeries(ring, [ring.div_uni(x, v) for x in combined.coeffs], M)
    return cleared.scale(ring.inv(unit_part))


def _poly_bezout(d1, d2, deg1, deg2, ring, M):
    """Extended Euclid on the polynomial parts (unit leading coefficients)."""
    def as_poly(s, deg):
        return [s.coeffs[i] for i in range(deg + 1)]

    def trim(p):
        while len(p) > 1 and p[-1].is_zero_at_precision():
            p.pop()
        return p

    r0, r1 = trim(as_poly(d1, deg1)), trim(as_poly(d2, deg2))
    zero_series = IwasawaSeries.zero(ring, M)
    one_series = IwasawaSeries.from_ints(ring, [1], M)
    s0, s1 = one_series, zero_series
    t0, t1 = zero_series, one_series
    while len(r1) > 1:
        if not ring.is_unit(r1[-1]):
            raise NotDivisible("Bezout step hit a non-unit leading coefficient")
        inv = ring.inv(r1[-1])
        q = [ring.zero() for _ in range(len(r0) - len(r1) + 1)]
        rem = list(r0)
        for j in range(len(r0) - 1, len(r1) - 2, -1):
            coef = rem[j] * inv
            q[j - len(r1) + 1] = coef
            for t in range(len(r1)):
                rem[j - len(r1) + 1 + t] = rem[j - len(r1) + 1 + t] - coef * r1[t]
        rem = trim(rem[: len(r1) - 1] or [ring.zero()])
        q_series = IwasawaSeries(ring, q + [ring.zero()] * (M - len(q)), M)
        s0, s1 = s1, s0 - q_series * s1
        t0, t1 = t1, t0 - q_series * t1
        r0, r1 = r1, rem
    if r1[0].is_zero_at_precision():
        # gcd is r0 (non-constant): no constant Bezout combination
        raise NotDivisible("denominators share a common factor")
    return s1, t1, r1[0]
