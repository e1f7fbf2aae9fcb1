"""Measures on Z_p through their Mahler series.

A measure is identified with F_nu(w) = integral of (1+w)^x d nu(x); there is
no separate function-on-Z_p representation.  Restriction to the units is the
idempotent F - (1/p) * sum over p-th roots of unity of F(zeta(1+w) - 1); for
p = 2 the two roots are rational and everything stays in the base ring, for
odd p one twist is computed over Z_p[zeta_p] and the sum over primitive roots
is its coefficientwise trace.

Character integrals over Z_p^x come in two flavours: an exact moment-based
path for integer exponents (see omega_twist), and the certified Riemann-sum
refinement over residue classes mod 2^r for general 2-adic exponents.  The
Riemann error after cells of radius 2^-r is O(2^(r + v(s))) because
x -> <x>^s moves by s * (x - a) / a + higher terms on each unit class.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, NonIntegral, PrecisionExhausted
from .padic import PadicContext, PadicInt, kappa_power
from .series import BaseRing, IwasawaSeries, binomial_series, one_plus_T_pow
from .cyclotomic import CycRing, eval_at_level

SUPPORT_ALL = "all"
SUPPORT_UNITS = "units"


@dataclass
class UnitMeasure:
    """Measure on Z_p via its Mahler coefficient sequence."""

    series: IwasawaSeries
    support: str = SUPPORT_ALL

    @property
    def ring(self):
        return self.series.ring

    def __add__(self, other):
        support = self.support if self.support == other.support else SUPPORT_ALL
        return UnitMeasure(self.series + other.series, support)

    def __sub__(self, other):
        support = self.support if self.support == other.support else SUPPORT_ALL
        return UnitMeasure(self.series - other.series, support)

    def scale(self, c):
        return UnitMeasure(self.series.scale(c), self.support)

    def total_mass(self):
        return self.series.coeffs[0]

    def __eq__(self, other):
        return isinstance(other, UnitMeasure) and self.series == other.series


def dirac(ring: BaseRing, a, M: int = 64) -> UnitMeasure:
    """Point mass at a: Mahler series (1+w)^a.

    Integer points are exact (a polynomial series for 0 <= a < M); p-adic
    points carry the binomial precision loss floor(log_p k) at coefficient k.
    """
    if isinstance(a, int):
        s = one_plus_T_pow(ring, a, M)
        unit = a % ring.p != 0
    else:
        s = binomial_series(ring, a, M)
        unit = a.is_unit()
    return UnitMeasure(s, SUPPORT_UNITS if unit else SUPPORT_ALL)


def restrict_to_units(nu: UnitMeasure) -> UnitMeasure:
    """Kill the part supported on pZ_p; idempotent, flags the output."""
    ring = nu.ring
    p = ring.p
    F = nu.series
    if p == 2:
        # F(w)/2 - F(-2-w)/2; the two-term sum of integral measures is even
        twisted = F.compose_affine(ring.from_int(-2), ring.from_int(-1))
        diff = F - twisted
        halved = _divide_coeffs(diff, ring, 1)
        return UnitMeasure(halved, SUPPORT_UNITS)
    # odd p: one zeta-twist over Z_p[zeta_p]; the primitive-root sum is its trace
    cring = CycRing(ring.ctx, p)
    csers = _lift_series(F, cring)
    zeta = cring.zeta_power(1)
    twist = csers.compose_affine(zeta - cring.one(), zeta)
    dropped = []
    for j in range(F.M):
        total = F.coeffs[j] + twist.coeffs[j].trace_to_base()
        if total.r % p != 0:
            raise NonIntegral(f"restriction sum is not divisible by p at w^{j}")
        dropped.append(total.divide_p(1))
    out = F - IwasawaSeries(ring, dropped, F.M)
    return UnitMeasure(out, SUPPORT_UNITS)


def _divide_coeffs(diff, ring, v):
    out = []
    for j, c in enumerate(diff.coeffs):
        if c.r % ring.p ** v != 0:
            raise NonIntegral(
                f"coefficient {j} of the restriction sum is not divisible by "
                f"p^{v}; the input is not an integral measure"
            )
        out.append(c.divide_p(v))
    return IwasawaSeries(ring, out, diff.M, diff.poly_degree)


def _lift_series(F, cring):
    return IwasawaSeries(cring, [cring.coerce(c) for c in F.coeffs], F.M,
                         F.poly_degree)


def pushforward_scale(nu: UnitMeasure, u) -> UnitMeasure:
    """Image measure under x -> u*x for a unit u: F((1+w)^u - 1)."""
    ring = nu.ring
    if isinstance(u, int):
        if u % ring.p == 0:
            raise DomainError("pushforward scale must be a unit")
        g = one_plus_T_pow(ring, u, nu.series.M)
    else:
        if not u.is_unit():
            raise DomainError("pushforward scale must be a unit")
        g = binomial_series(ring, u, nu.series.M)
    g = g - IwasawaSeries.from_ints(ring, [1], nu.series.M)
    return UnitMeasure(nu.series.compose(g), nu.support)


def moment(nu: UnitMeasure, m: int) -> PadicInt:
    """integral of x^m d nu via ((1+w) d/dw)^m F at w = 0."""
    F = nu.series
    if m >= F.M:
        raise PrecisionExhausted(f"moment {m} needs a T-window beyond {F.M}")
    ring = F.ring
    coeffs = list(F.coeffs)
    width = F.M
    for _ in range(m):
        width -= 1
        nxt = []
        for i in range(width):
            d = coeffs[i + 1] * (i + 1)
            nxt.append(d + coeffs[i] * i if i else d)
        coeffs = nxt
    return coeffs[0] if coeffs else ring.zero()


def omega_twist(nu: UnitMeasure) -> UnitMeasure:
    """Multiply a 2-adic measure by omega(x) = +1/-1 on 1/3 mod 4, 0 on evens.

    omega(x) = (i^(x-1) + (-i)^(x-1)) / 2, so the twist is assembled from the
    two quarter-twists F(+-i(1+w) - 1) over Z_2[i] and descends to Z_2.
    """
    ring = nu.ring
    if ring.p != 2:
        raise DomainError("the sign-character twist is the p = 2 construction")
    cring = CycRing(ring.ctx, 4)
    csers = _lift_series(nu.series, cring)
    i_elt = cring.zeta_power(1)
    plus = csers.compose_affine(i_elt - cring.one(), i_elt)
    minus = csers.compose_affine(-i_elt - cring.one(), -i_elt)
    out = []
    for j in range(nu.series.M):
        val = plus.coeffs[j] * (-i_elt) + minus.coeffs[j] * i_elt
        if any(v % 2 for v in val.vec):
            raise NonIntegral(f"omega twist has a half-integral coefficient at w^{j}")
        halves = [v // 2 for v in val.vec]
        k = max(val.k - 1, 1)
        if halves[1] % 2 ** k:
            raise NonIntegral("omega twist did not descend to the base ring")
        out.append(PadicInt(ring.ctx, halves[0], k))
    return UnitMeasure(IwasawaSeries(ring, out, nu.series.M), nu.support)


def _raw_ball_sums(nu: UnitMeasure, r: int, evals):
    """2^r * mass(a) as raw integers for a mod 2^r, plus the digit floor.

    mass(a) = 2^-r * (F(0) + sum over levels m <= r of Tr(zeta_m^-a F(zeta_m - 1)));
    the trace kernel of a 2-power level is supported on two points, so each
    level costs O(2^r) integer additions in total.
    """
    F = nu.series
    while len(evals) < r:
        evals.append(eval_at_level(F, len(evals) + 1))
    kmin = min(c.k for c in F.coeffs)
    sums = [F.coeffs[0].r % 2 ** kmin] * (2 ** r)
    for m in range(1, r + 1):
        e = evals[m - 1]
        kmin = min(kmin, e.pi_prec // e.ring.ramification)
        d = max(e.ring.degree, 1)
        span = 2 ** m
        # Tr(zeta^(i-a)) = d at i = a mod 2^m, -d at i = a - d mod 2^m
        vec = e.vec
        for a in range(2 ** r):
            b = a % span
            if b < d:
                sums[a] += d * vec[b]
            elif b - d < d:
                sums[a] -= d * vec[b - d]
    return sums, kmin


def ball_masses(nu: UnitMeasure, r: int) -> list:
    """nu(a + 2^r Z_2) for all a mod 2^r, from F at the 2-power roots of unity."""
    ring = nu.ring
    ctx = ring.ctx
    if ctx.p != 2:
        raise DomainError("ball masses by root-of-unity traces: p = 2 only")
    sums, kmin = _raw_ball_sums(nu, r, [])
    if kmin - r < 1:
        raise PrecisionExhausted("ball masses need more digits than remain")
    pk = 2 ** kmin
    out = []
    for a in range(2 ** r):
        v = sums[a] % pk
        if v % 2 ** r:
            raise NonIntegral(f"ball mass at {a} mod 2^{r} is not integral")
        out.append(PadicInt(ctx, v >> r, kmin - r))
    return out


def integrate_unit_character(nu: UnitMeasure, j: int, s, *,
                             target_digits: int = 8,
                             max_r: int = 16) -> PadicInt:
    """integral over Z_2^x of omega(x)^j <x>^s d nu.

    Riemann sums over classes mod 2^r with the certified error bound
    min(r + v(s), 2r); r doubles until two successive passes agree at the
    target and the bound covers it.  PrecisionExhausted carries the bound
    that failed.
    """
    ring = nu.ring
    ctx = ring.ctx
    if ring.p != 2:
        raise DomainError("unit-character integration is implemented for p = 2")
    if nu.support != SUPPORT_UNITS:
        raise DomainError("measure must be certified unit-supported; restrict first")
    work_ctx = PadicContext(2, min(ctx.N, target_digits + 6))
    if isinstance(s, int):
        s = work_ctx.integer(s)
    else:
        s = PadicInt(work_ctx, s.r, min(s.k, work_ctx.N))
    vs = s.val_floor()
    prev = None
    prev_bound = 0
    r = 4
    evals = []
    while r <= max_r:
        bound = min(r + vs, 2 * r, work_ctx.N)
        cur = _riemann_pass(nu, j, s, r, work_ctx, evals)
        if prev is not None and bound >= target_digits:
            common = min(target_digits, prev.k, cur.k)
            if prev.agrees_to(cur, common):
                return PadicInt(ctx, cur.r, min(cur.k, bound))
        prev, prev_bound = cur, bound
        r *= 2
    raise PrecisionExhausted(
        f"Riemann refinement stopped at r = {max_r} with certified bound "
        f"{prev_bound} digits against target {target_digits}"
    )


def _riemann_pass(nu, j, s, r, work_ctx, evals):
    sums, kmin = _raw_ball_sums(nu, r, evals)
    if kmin - r < 1:
        raise PrecisionExhausted("ball masses need more digits than remain")
    kw = work_ctx.N
    modulus = 2 ** kw
    total = 0
    pr = 2 ** r
    for a in range(1, pr, 2):
        v = sums[a] % 2 ** kmin
        if v % pr:
            raise NonIntegral(f"ball mass at {a} mod 2^{r} is not integral")
        mass = (v >> r) % modulus
        if mass == 0:
            continue
        princ = a if a % 4 == 1 else (-a) % modulus
        f = kappa_power(PadicInt(work_ctx, princ, kw), s).r
        if j % 2 and a % 4 == 3:
            f = -f
        total += f * mass
    return PadicInt(work_ctx, total, min(kw, kmin - r))
