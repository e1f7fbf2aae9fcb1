"""Arithmetic in Z_p[x]/Phi_m(x) and root-of-unity evaluation of series.

Two uses share this ring type: the totally ramified towers Q_p(zeta_{p^n})
where Iwasawa series are evaluated at finite-order characters, and the value
rings generated by character values of a finite group H.

For a prime-power conductor the ring is local with uniformizer pi = zeta - 1,
ramification e = p^(n-1)(p-1) and residue field F_p; elements track their
certified pi-adic accuracy.  Norms down to Z_p are computed on exact integer
lifts (for p = 2 by folding the tower level by level, each step a single
packed polynomial product), then certified: the valuation w of the computed
norm is trusted exactly when w < pi_accuracy, because every neglected term
perturbs the norm by at least min(e*k, M)/e + (e-1)w/e > w.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    ContextMismatch,
    DomainError,
    NonUnit,
    PrecisionExhausted,
)
from .padic import PadicContext, PadicInt, vp
from .series import IwasawaSeries, poly_mul_packed


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m == 1:
        return (-1, 1)
    # prime-power conductors have the closed form Phi_p(x^(m/p))
    for p in range(2, m + 1):
        if m % p == 0:
            q = m
            while q % p == 0:
                q //= p
            if q == 1:
                step = m // p
                out = [0] * (step * (p - 1) + 1)
                for i in range(p):
                    if i * step < len(out):
                        out[i * step] = 1
                return tuple(out)
            break
    # divide x^m - 1 by the cyclotomic polynomials of the proper divisors
    num = [0] * (m + 1)
    num[0], num[m] = -1, 1
    for d in range(1, m):
        if m % d == 0:
            den = cyclotomic_poly(d)
            num = _poly_divexact(num, den)
    return tuple(num)


def _poly_divexact(num, den):
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for j in range(len(num) - 1, dd - 1, -1):
        c = num[j]
        out[j - dd] = c
        if c:
            for t in range(dd + 1):
                num[j - dd + t] -= c * den[t]
    assert all(v == 0 for v in num[:dd]), "inexact cyclotomic division"
    return out


class CycRing:
    """Z_p[x]/Phi_m(x) over a context; local exactly when m is a p-power."""

    is_base = False

    def __init__(self, ctx: PadicContext, conductor: int):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        self.ctx = ctx
        self.p = ctx.p
        self.m = conductor
        phi = cyclotomic_poly(conductor)
        self.degree = len(phi) - 1
        self.phi = phi
        # reduction rule: x^degree = -(phi minus leading term)
        self.red = [-c for c in phi[:-1]]
        level = 0
        mm = conductor
        while mm % ctx.p == 0:
            mm //= ctx.p
            level += 1
        self.level = level
        self.local = conductor == 1 or (mm == 1 and level >= 1)
        self.ramification = self.degree if self.local and conductor > 1 else 1

    def __eq__(self, other):
        return isinstance(other, CycRing) and (other.ctx, other.m) == (self.ctx, self.m)

    def __hash__(self):
        return hash(("cyc", self.ctx, self.m))

    def __repr__(self):
        return f"CycRing(p={self.p}, conductor={self.m})"

    # -- element constructors ------------------------------------------------

    def element(self, vec, k=None, pi_prec=None):
        return CycElt(self, vec, self.ctx.N if k is None else k, pi_prec)

    def zero(self, prec=None):
        return self.element([0] * self.degree, prec)

    def one(self, prec=None):
        return self.element([1] + [0] * (self.degree - 1), prec)

    def from_int(self, n, prec=None):
        return self.element([n] + [0] * (self.degree - 1), prec)

    def zeta_power(self, t: int):
        """The root of unity zeta^t as a ring element."""
        t %= self.m
        vec = [0] * (t + 1)
        vec[t] = 1
        return self.element(_int_reduce_mod_phi(vec, self))

    def _p_over_pi(self):
        """The integral element p / (zeta - 1), cached (p-power conductors)."""
        q = getattr(self, "_p_over_pi_cache", None)
        if q is None:
            acc = self.one()
            for a in range(2, self.m):
                if _gcd(a, self.m) != 1:
                    continue
                acc = acc * (self.one() - self.zeta_power(a))
            q = -acc
            self._p_over_pi_cache = q
        return q

    def coerce(self, v):
        if isinstance(v, CycElt):
            if v.ring != self:
                raise ContextMismatch(f"{v.ring!r} vs {self!r}")
            return v
        if isinstance(v, PadicInt):
            if v.ctx != self.ctx:
                raise ContextMismatch(f"{v.ctx} vs {self.ctx}")
            return self.element([v.r] + [0] * (self.degree - 1), v.k)
        if isinstance(v, int):
            return self.from_int(v)
        raise TypeError(f"cannot coerce {type(v).__name__} into {self!r}")

    # -- scalar-ring protocol for series over this ring ------------------------

    def is_unit(self, c):
        return c.is_unit()

    def inv(self, c):
        return c.inv()

    def valuation(self, c):
        return c.pi_valuation()

    def val_floor(self, c):
        v = c.pi_valuation()
        return c.pi_prec if v is None else v

    def uni_prec(self, c):
        return c.pi_prec

    def div_uni(self, c, v):
        return c.divide_pi(v)

    def res_p(self, c):
        if not self.local:
            raise DomainError("residue map needs a local (p-power conductor) ring")
        return sum(c.vec) % self.p

    def cap(self, c, pi_prec):
        pi_prec = max(1, pi_prec)
        if pi_prec >= c.pi_prec:
            return c
        k = max(1, min(c.k, pi_prec // self.ramification if self.ramification > 1
                       else pi_prec))
        return CycElt(self, c.vec, k, pi_prec)


class CycElt:
    """Element of a cyclotomic quotient ring, coefficients mod p^k.

    pi_prec is the certified pi-adic accuracy (defaults to ramification * k);
    series evaluation lowers it when the T-window is the binding constraint.
    """

    __slots__ = ("ring", "vec", "k", "pi_prec")

    def __init__(self, ring, vec, k, pi_prec=None):
        if k < 1:
            raise PrecisionExhausted("no digits left in this cyclotomic element")
        k = min(k, ring.ctx.N)
        pk = ring.p ** k
        vec = [v % pk for v in vec]
        if len(vec) != ring.degree:
            raise ValueError(f"need {ring.degree} coefficients, got {len(vec)}")
        self.ring = ring
        self.vec = vec
        self.k = k
        base = ring.ramification * k
        self.pi_prec = base if pi_prec is None else min(pi_prec, base)

    def _match(self, other):
        if isinstance(other, (int, PadicInt)):
            return self.ring.coerce(other)
        if not isinstance(other, CycElt) or other.ring != self.ring:
            raise ContextMismatch("cyclotomic operands from different rings")
        return other

    def __add__(self, other):
        other = self._match(other)
        k = min(self.k, other.k)
        return CycElt(self.ring, [a + b for a, b in zip(self.vec, other.vec)], k,
                      min(self.pi_prec, other.pi_prec))

    __radd__ = __add__

    def __neg__(self):
        return CycElt(self.ring, [-a for a in self.vec], self.k, self.pi_prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        other = self._match(other)
        k = min(self.k, other.k)
        pk = self.ring.p ** k
        prod = poly_mul_packed([v % pk for v in self.vec], [v % pk for v in other.vec],
                               pk, 2 * self.ring.degree)
        vec = _reduce_mod_phi(prod, self.ring, pk)
        return CycElt(self.ring, vec, k, min(self.pi_prec, other.pi_prec))

    __rmul__ = __mul__

    def is_zero_at_precision(self):
        return all(v == 0 for v in self.vec)

    def is_unit(self):
        ring = self.ring
        if ring.local:
            return sum(self.vec) % ring.p != 0 if ring.m > 1 else self.vec[0] % ring.p != 0
        g = _fp_poly_gcd(self.vec, list(ring.phi), ring.p)
        return len(g) == 1

    def inv(self):
        """Hensel-lifted inverse; exists iff the reduction mod p is invertible."""
        ring = self.ring
        p, k = ring.p, self.k
        a0 = _fp_poly_invert(self.vec, ring, p)
        if a0 is None:
            raise NonUnit("element is not a unit in the cyclotomic ring")
        a = a0
        prec = 1
        while prec < k:
            prec = min(2 * prec, k)
            pk = p ** prec
            ua = _mul_mod(self.vec, a, ring, pk)
            corr = [(-x) % pk for x in ua]
            corr[0] = (corr[0] + 2) % pk
            a = _mul_mod(a, corr, ring, pk)
        return CycElt(ring, a, k, self.pi_prec)

    # -- valuations -------------------------------------------------------------

    def pi_valuation(self):
        """pi-adic valuation (uniformizer units) when visible, else None.

        For non-local conductors this degrades to the p-content of the
        coefficient vector, which is the valuation in every etale factor
        simultaneously whenever it is visible.
        """
        ring = self.ring
        if self.is_zero_at_precision():
            return None
        if not ring.local or ring.m == 1:
            return min(vp(v, ring.p) for v in self.vec if v != 0)
        norm = self.norm_exact()
        if norm == 0:
            return None
        w = vp(norm, ring.p)
        if w >= self.pi_prec:
            return None
        return w

    def norm_exact(self) -> int:
        """Exact integer norm of the lifted representative down to Z."""
        ring = self.ring
        if ring.degree == 1:
            return self.vec[0]
        if ring.p == 2 and ring.local:
            return _tower_norm_2(self.vec)
        return _conjugate_norm(self.vec, ring)

    def norm_to_base(self) -> PadicInt:
        """Field norm to Z_p as a context scalar (certified digits)."""
        ring = self.ring
        n = self.norm_exact()
        if n == 0:
            return ring.ctx.zero(max(1, min(self.k, ring.ctx.N)))
        if ring.local and ring.m > 1:
            w = vp(n, ring.p)
            if w < self.pi_prec:
                d = ring.degree
                claim = self.pi_prec // d + (w * (d - 1)) // d
            else:
                claim = self.k
        else:
            claim = self.k
        claim = max(1, min(claim, ring.ctx.N))
        return PadicInt(ring.ctx, n, claim)

    def trace_to_base(self) -> PadicInt:
        """Trace to Z_p; closed form for p-power conductors."""
        ring = self.ring
        if not ring.local:
            raise DomainError("trace closed form implemented for p-power conductors")
        if ring.m == 1:
            return PadicInt(ring.ctx, self.vec[0], self.k)
        m, p = ring.m, ring.p
        total = 0
        for i, a in enumerate(self.vec):
            if a == 0:
                continue
            t = i % m
            if t == 0:
                total += a * ring.degree
            elif t % (m // p) == 0:
                total -= a * (m // p)
        return PadicInt(ring.ctx, total, self.k)

    def divide_pi(self, v: int):
        """Exact division by pi^v = (zeta-1)^v; conservative digit cost."""
        ring = self.ring
        if not ring.local or ring.m == 1:
            # uniformizer is p itself
            pv = ring.p ** v
            if any(x % pv for x in self.vec):
                raise DomainError("not divisible by the uniformizer power")
            if self.k - v < 1:
                raise PrecisionExhausted("pi-division leaves no digits")
            return CycElt(ring, [x // pv for x in self.vec], self.k - v)
        e = ring.ramification
        out = self
        full, rest = divmod(v, e)
        if full:
            pf = ring.p ** full
            if any(x % pf for x in out.vec):
                raise DomainError("not divisible by p^(v // e)")
            if out.k - full < 1:
                raise PrecisionExhausted("pi-division leaves no digits")
            out = CycElt(ring, [x // pf for x in out.vec], out.k - full)
        for _ in range(rest):
            out = out._divide_single_pi()
        return out

    def _divide_single_pi(self):
        ring = self.ring
        q = ring._p_over_pi()
        t = self * q
        if any(x % ring.p for x in t.vec):
            raise DomainError("not divisible by pi")
        if t.k - 1 < 1:
            raise PrecisionExhausted("pi-division leaves no digits")
        return CycElt(ring, [x // ring.p for x in t.vec], t.k - 1)

    def __eq__(self, other):
        try:
            other = self._match(other)
        except ContextMismatch:
            return NotImplemented
        k = min(self.k, other.k)
        pk = self.ring.p ** k
        return all((a - b) % pk == 0 for a, b in zip(self.vec, other.vec))

    def to_texts(self):
        return [PadicInt(self.ring.ctx, v, self.k).to_text() for v in self.vec]

    def __repr__(self):
        return f"CycElt(m={self.ring.m}, {self.vec[:4]}..., k={self.k})"


def _reduce_mod_phi(prod, ring, pk):
    d = ring.degree
    prod = list(prod) + [0] * max(0, 2 * d - len(prod))
    red = ring.red
    for j in range(2 * d - 1, d - 1, -1):
        c = prod[j] % pk
        if c:
            prod[j] = 0
            for t, rc in enumerate(red):
                if rc:
                    prod[j - d + t] = (prod[j - d + t] + c * rc) % pk
    return [v % pk for v in prod[:d]]


def _mul_mod(a, b, ring, pk):
    prod = poly_mul_packed([v % pk for v in a], [v % pk for v in b], pk,
                           2 * ring.degree)
    return _reduce_mod_phi(prod, ring, pk)


def _fp_poly_gcd(a, b, p):
    a = [x % p for x in a]
    b = [x % p for x in b]

    def trim(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = trim(a), trim(b)
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            off = len(a) - len(b)
            for i, bv in enumerate(b):
                a[off + i] = (a[off + i] - c * bv) % p
            a = trim(a)
            if not a:
                break
        a, b = b, a
    return a if a else [0]


def _fp_divmod(num, den, p):
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 0)
    inv = pow(den[-1], -1, p)
    for j in range(len(num) - 1, len(den) - 2, -1):
        c = num[j] * inv % p
        if c:
            q[j - len(den) + 1] = c
            for i, dv in enumerate(den):
                num[j - len(den) + 1 + i] = (num[j - len(den) + 1 + i] - c * dv) % p
    rem = num[: len(den) - 1]
    while rem and rem[-1] == 0:
        rem.pop()
    return q, rem


def _fp_poly_invert(vec, ring, p):
    """Inverse of vec mod (p, Phi) by extended Euclid over F_p, or None."""
    def trim(v):
        v = [x % p for x in v]
        while v and v[-1] == 0:
            v.pop()
        return v

    r0, r1 = trim(ring.phi), trim(vec)
    s0, s1 = [], [1]
    if not r1:
        return None
    while r1:
        q, rem = _fp_divmod(r0, r1, p)
        qs1 = [0] * (len(q) + len(s1) - 1) if q and s1 else []
        for i, qc in enumerate(q):
            if qc:
                for j, sv in enumerate(s1):
                    qs1[i + j] = (qs1[i + j] + qc * sv) % p
        ns = [0] * max(len(s0), len(qs1), 1)
        for i, v in enumerate(s0):
            ns[i] = v % p
        for i, v in enumerate(qs1):
            ns[i] = (ns[i] - v) % p
        while ns and ns[-1] == 0:
            ns.pop()
        r0, r1 = r1, rem
        s0, s1 = s1, ns
    if len(r0) != 1:
        return None
    c = pow(r0[0], -1, p)
    out = [v * c % p for v in s0]
    out += [0] * (ring.degree - len(out))
    return out[: ring.degree]


def _tower_norm_2(vec):
    """prod over Gal of the lifted element, folding zeta -> -zeta level by level.

    Exact signed integer arithmetic: the level-n product a(x) * a(-x) is even
    and descends to the level-(n-1) variable y = x^2 under y^(d/2) = -1.
    """
    a = [int(v) for v in vec]
    while len(a) > 1:
        d = len(a)
        b = [c if i % 2 == 0 else -c for i, c in enumerate(a)]
        full = [0] * (2 * d)
        for i, av in enumerate(a):
            if av:
                for j, bv in enumerate(b):
                    if bv:
                        full[i + j] += av * bv
        red = [full[i] - full[i + d] for i in range(d)]
        a = red[0::2]
    return a[0]


def _conjugate_norm(vec, ring):
    """prod over a in (Z/m)^* of A(x^a), evaluated with exact integers."""
    m = ring.m
    d = ring.degree
    acc = [1] + [0] * (d - 1)
    for a in range(1, m):
        if _gcd(a, m) != 1:
            continue
        conj = [0] * d
        work = [0] * (2 * d)
        for i, c in enumerate(vec):
            if c:
                work = _add_monomial(work, (i * a) % m, c, ring)
        conj = work[:d]
        acc = _int_mul_mod_phi(acc, conj, ring)
    assert all(c == 0 for c in acc[1:]), "norm must land in the base"
    return acc[0]


def _add_monomial(work, t, c, ring):
    # x^t reduced mod Phi, scaled by c, accumulated into work
    d = ring.degree
    vec = [0] * (t + 1)
    vec[t] = 1
    vec = _int_reduce_mod_phi(vec, ring)
    for i, v in enumerate(vec):
        work[i] += c * v
    return work


def _int_reduce_mod_phi(vec, ring):
    d = ring.degree
    vec = list(vec) + [0] * max(0, d - len(vec))
    for j in range(len(vec) - 1, d - 1, -1):
        c = vec[j]
        if c:
            vec[j] = 0
            for t, rc in enumerate(ring.red):
                if rc:
                    vec[j - d + t] += c * rc
    return vec[:d]


def _int_mul_mod_phi(a, b, ring):
    d = ring.degree
    out = [0] * (2 * d)
    for i, av in enumerate(a):
        if av:
            for j, bv in enumerate(b):
                if bv:
                    out[i + j] += av * bv
    return _int_reduce_mod_phi(out, ring)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# -- series evaluation at p-power roots of unity -------------------------------


def eval_at_level(F: IwasawaSeries, n: int, demand: int | None = None) -> CycElt:
    """F(zeta_{p^n} - 1) with certified pi-adic accuracy min(e*k, M).

    Raises PrecisionExhausted (reporting the minimal sufficient window) when
    the caller demands more accuracy than the T-window can certify.
    """
    ring = F.ring
    if not getattr(ring, "is_base", False):
        raise DomainError("evaluation starts from a base-ring series")
    ctx = ring.ctx
    cring = CycRing(ctx, ctx.p ** n)
    kmin = min(c.k for c in F.coeffs)
    accuracy = min(cring.ramification * kmin, F.M)
    if F.poly_degree is not None:
        accuracy = cring.ramification * kmin
    if demand is not None and accuracy < demand:
        raise PrecisionExhausted(
            f"certified accuracy {accuracy}; a T-window of at least {demand} "
            f"coefficients would suffice"
        )
    pk = ctx.p ** kmin
    d = cring.degree
    res = [c.r % pk for c in F.coeffs]
    acc = [0] * d
    acc[0] = res[-1]
    if ctx.p == 2 and cring.local and d > 1:
        # x^d = -1: acc * (x-1) is a shift-and-subtract with one sign wrap
        for i in range(F.M - 2, -1, -1):
            top = acc[d - 1]
            nxt = [(res[i] - top - acc[0]) % pk]
            nxt += [(x - y) % pk for x, y in zip(acc, acc[1:])]
            acc = nxt
        return CycElt(cring, acc, kmin, pi_prec=accuracy)
    for i in range(F.M - 2, -1, -1):
        # acc <- acc * (x - 1) + c_i, with x^d reduced by Phi
        nxt = [0] * d
        for j in range(d):
            prev = acc[j - 1] if j >= 1 else 0
            nxt[j] = (prev - acc[j]) % pk
        top = acc[d - 1]
        if top:
            for t, rc in enumerate(cring.red):
                if rc:
                    nxt[t] = (nxt[t] + top * rc) % pk
        nxt[0] = (nxt[0] + res[i]) % pk
        acc = nxt
    return CycElt(cring, acc, kmin, pi_prec=accuracy)


def norm_to_base(e: CycElt) -> PadicInt:
    return e.norm_to_base()


@dataclass
class InvariantReport:
    n: int
    lhs: int
    rhs: int
    match: bool


def invariant_identity_check(F: IwasawaSeries, n: int) -> InvariantReport:
    """mu(F) * p^(n-1)(p-1) + lambda(F) against ord_p of the level-n norm."""
    ml = F.mu_lambda()
    ctx = F.ring.ctx
    e = ctx.p ** (n - 1) * (ctx.p - 1)
    if e <= ml.lam:
        raise DomainError(
            f"level {n} is too small: need p^(n-1)(p-1) > lambda = {ml.lam}"
        )
    lhs = ml.mu * e + ml.lam
    elt = eval_at_level(F, n)
    norm = elt.norm_exact()
    if norm == 0:
        raise PrecisionExhausted(
            f"norm vanishes to working accuracy; a T-window of at least "
            f"{elt.pi_prec + 1} coefficients would suffice"
        )
    w = vp(norm, ctx.p)
    if w >= elt.pi_prec:
        raise PrecisionExhausted(
            f"norm valuation {w} is not certified at accuracy {elt.pi_prec}; "
            f"a T-window of at least {w + 1} coefficients would suffice"
        )
    return InvariantReport(n, lhs, w, lhs == w)
