"""Truncated Iwasawa algebra: Z_p(chi)[[T]] mod T^M.

A series carries its coefficient ring descriptor, M coefficients, and an
optional exact polynomial degree (None = the tail beyond the window is
unknown).  Everything answers only within the declared (digits, degree)
window; mu/lambda queries refuse to guess when the window cannot decide.

The scalar ring is duck-typed: BaseRing wraps PadicInt, and the cyclotomic
module provides the ramified extensions used by character values.  Both obey
the same small protocol (from_int, is_unit, inv, valuation in uniformizer
units, div_uni, res_p, uni_prec, cap).

Uniform-precision series over the base ring take all-integer fast paths;
polynomial products ride one big-integer multiplication (Kronecker packing)
instead of an O(M^2) object loop.

Preparation is division-based: Weierstrass-divide T^lambda by F/p^mu to get
T^lambda = Q*(F/p^mu) + R, then P = T^lambda - R and U = Q^{-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache as _lru_cache

from .errors import (
    ContextMismatch,
    DomainError,
    Indeterminate,
    NonUnit,
    PrecisionExhausted,
)
from .padic import PadicInt


# -- packed polynomial helpers (residue vectors, one bigint multiply) -------

def _pack(coeffs, stride):
    out = 0
    for c in reversed(coeffs):
        out = (out << stride) | c
    return out


def _unpack(n, stride, count):
    mask = (1 << stride) - 1
    return [(n >> (i * stride)) & mask for i in range(count)]


def poly_mul_packed(a, b, modulus, M):
    """Convolution of nonnegative residue vectors mod `modulus`, truncated
    to M coefficients."""
    if not a or not b:
        return []
    bound = min(len(a), len(b)) * (modulus - 1) ** 2 + 1
    stride = bound.bit_length()
    prod = _pack(a, stride) * _pack(b, stride)
    n = min(M, len(a) + len(b) - 1)
    return [c % modulus for c in _unpack(prod, stride, n)]


# -- scalar ring descriptor for Z_p ------------------------------------------

class BaseRing:
    """Scalar ring Z_p of a context; uniformizer p, residue field F_p."""

    is_base = True
    ramification = 1

    def __init__(self, ctx):
        self.ctx = ctx
        self.p = ctx.p

    def __eq__(self, other):
        return isinstance(other, BaseRing) and other.ctx == self.ctx

    def __hash__(self):
        return hash(("base", self.ctx))

    def __repr__(self):
        return f"BaseRing({self.ctx})"

    def from_int(self, n, prec=None):
        return self.ctx.integer(n, prec)

    def zero(self, prec=None):
        return self.ctx.zero(prec)

    def one(self, prec=None):
        return self.ctx.one(prec)

    def coerce(self, x):
        if isinstance(x, PadicInt):
            if x.ctx != self.ctx:
                raise ContextMismatch(f"{x.ctx} vs {self.ctx}")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    def is_unit(self, c):
        return c.is_unit()

    def inv(self, c):
        return c.inv()

    def valuation(self, c):
        return c.valuation()

    def val_floor(self, c):
        return c.val_floor()

    def uni_prec(self, c):
        return c.k

    def div_uni(self, c, v):
        return c.divide_p(v)

    def res_p(self, c):
        return c.r % self.p

    def cap(self, c, prec):
        prec = max(1, prec)
        return PadicInt(self.ctx, c.r, min(c.k, prec)) if prec < c.k else c


@dataclass
class MuLambda:
    mu: int
    lam: int
    lambda_at_window_edge: bool

    def as_tuple(self):
        return (self.mu, self.lam)


class IwasawaSeries:
    """Element of R[[T]] known modulo (precision window, T^M)."""

    __slots__ = ("ring", "M", "coeffs", "poly_degree")

    def __init__(self, ring, coeffs, M=None, poly_degree=None):
        self.ring = ring
        self.M = len(coeffs) if M is None else M
        coeffs = list(coeffs)
        if len(coeffs) < self.M:
            coeffs += [ring.zero() for _ in range(self.M - len(coeffs))]
        self.coeffs = coeffs[: self.M]
        self.poly_degree = poly_degree

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_ints(cls, ring, ints, M=None, poly=True):
        M = M if M is not None else max(len(ints), 1)
        coeffs = [ring.from_int(v) for v in ints[:M]]
        deg = None
        if poly:
            deg = max((i for i, v in enumerate(ints[:M]) if v != 0), default=0)
        return cls(ring, coeffs, M, poly_degree=deg)

    @classmethod
    def zero(cls, ring, M):
        return cls.from_ints(ring, [0], M)

    @classmethod
    def variable(cls, ring, M):
        return cls.from_ints(ring, [0, 1], M)

    def _check(self, other):
        if not isinstance(other, IwasawaSeries):
            raise TypeError("expected an IwasawaSeries")
        if other.ring != self.ring:
            raise ContextMismatch(f"{self.ring!r} vs {other.ring!r}")
        if other.M != self.M:
            raise ContextMismatch(f"T-windows differ: {self.M} vs {other.M}")
        return other

    def copy(self):
        return IwasawaSeries(self.ring, list(self.coeffs), self.M, self.poly_degree)

    # -- fast-path plumbing ----------------------------------------------------

    def _uniform_prec(self):
        """Common digit count when the base-ring fast path applies, else None."""
        if not getattr(self.ring, "is_base", False):
            return None
        k = self.coeffs[0].k
        return k if all(c.k == k for c in self.coeffs) else None

    def residues(self):
        return [c.r for c in self.coeffs]

    @classmethod
    def _from_residues(cls, ring, res, k, M, poly_degree=None):
        ctx = ring.ctx
        res = list(res) + [0] * (M - len(res))
        return cls(ring, [PadicInt(ctx, r, k) for r in res[:M]], M, poly_degree)

    # -- ring operations ---------------------------------------------------------

    def __add__(self, other):
        other = self._check(other)
        deg = None
        if self.poly_degree is not None and other.poly_degree is not None:
            deg = max(self.poly_degree, other.poly_degree)
        return IwasawaSeries(
            self.ring,
            [a + b for a, b in zip(self.coeffs, other.coeffs)],
            self.M,
            deg,
        )

    def __neg__(self):
        return IwasawaSeries(self.ring, [-c for c in self.coeffs], self.M, self.poly_degree)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.ring.coerce(c)
        return IwasawaSeries(self.ring, [a * c for a in self.coeffs], self.M, self.poly_degree)

    def __mul__(self, other):
        if not isinstance(other, IwasawaSeries):
            return self.scale(other)
        other = self._check(other)
        deg = None
        if self.poly_degree is not None and other.poly_degree is not None:
            d = self.poly_degree + other.poly_degree
            deg = d if d < self.M else None
        ka, kb = self._uniform_prec(), other._uniform_prec()
        if ka is not None and kb is not None:
            k = min(ka, kb)
            modulus = self.ring.p ** k
            res = poly_mul_packed(
                [r % modulus for r in self.residues()],
                [r % modulus for r in other.residues()],
                modulus,
                self.M,
            )
            return IwasawaSeries._from_residues(self.ring, res, k, self.M, deg)
        coeffs = _object_mul(self.ring, self.coeffs, other.coeffs, self.M)
        return IwasawaSeries(self.ring, coeffs, self.M, deg)

    def shift_T(self):
        """Exact division by T; requires a constant term that vanishes.

        The appended top coefficient is a window artifact and carries a
        single-digit claim.
        """
        if not self.coeffs[0].is_zero_at_precision():
            raise DomainError("constant term does not vanish; cannot divide by T")
        deg = None if self.poly_degree is None else max(self.poly_degree - 1, 0)
        top = self.ring.zero() if deg is not None else self.ring.zero(1)
        return IwasawaSeries(self.ring, self.coeffs[1:] + [top], self.M, deg)

    def evaluate(self, x):
        """F(x) for a scalar x of positive valuation floor."""
        x = self.ring.coerce(x)
        vx = self.ring.val_floor(x)
        if vx < 1:
            raise DomainError("series evaluation needs a scalar of positive valuation")
        acc = self.coeffs[-1]
        for i in range(self.M - 2, -1, -1):
            acc = acc * x + self.coeffs[i]
        if self.poly_degree is None:
            acc = self.ring.cap(acc, self.M * vx)
        return acc

    # -- composition ----------------------------------------------------------------

    def compose_affine(self, c, b=1):
        """F(c + b*T) by Horner; needs v(c) >= 1 or c = 0."""
        ring = self.ring
        c = ring.coerce(c)
        b = ring.coerce(b)
        vc = ring.val_floor(c)
        if not c.is_zero_at_precision() and vc < 1:
            raise DomainError("affine composition needs v(constant) >= 1")
        k = self._uniform_prec()
        if k is not None and isinstance(c, PadicInt) and isinstance(b, PadicInt) \
                and c.k >= k and b.k >= k:
            modulus = ring.p ** k
            cr, br = c.r % modulus, b.r % modulus
            acc = [0] * self.M
            acc[0] = self.coeffs[-1].r % modulus
            for i in range(self.M - 2, -1, -1):
                nxt = [0] * self.M
                for j in range(self.M - 1, 0, -1):
                    nxt[j] = (acc[j - 1] * br + acc[j] * cr) % modulus
                nxt[0] = (acc[0] * cr + self.coeffs[i].r) % modulus
                acc = nxt
            out = IwasawaSeries._from_residues(ring, acc, k, self.M, self.poly_degree)
        else:
            zero = ring.zero()
            acc = [self.coeffs[-1]] + [zero] * (self.M - 1)
            for i in range(self.M - 2, -1, -1):
                nxt = [zero] * self.M
                for j in range(self.M - 1, 0, -1):
                    nxt[j] = acc[j - 1] * b + acc[j] * c
                nxt[0] = acc[0] * c + self.coeffs[i]
                acc = nxt
            out = IwasawaSeries(ring, acc, self.M, self.poly_degree)
        if self.poly_degree is None and not c.is_zero_at_precision():
            bounds = _affine_tail_bounds(ring.p, self.M, vc, ring.ctx.N)
            capped = [ring.cap(cf, bounds[j]) for j, cf in enumerate(out.coeffs)]
            out = IwasawaSeries(ring, capped, self.M, out.poly_degree)
        return out

    def compose(self, g):
        """F(G) for a series G with G(0) zero or of positive valuation."""
        g = self._check(g)
        g0 = g.coeffs[0]
        v0 = self.ring.val_floor(g0)
        if not g0.is_zero_at_precision() and v0 < 1:
            raise DomainError("composition needs G(0) = 0 or of positive valuation")
        if getattr(self.ring, "is_base", False):
            # residue Horner at the common floor precision (claims = floor)
            kk = min(min(c.k for c in self.coeffs), min(c.k for c in g.coeffs))
            modulus = self.ring.p ** kk
            gres = [r % modulus for r in g.residues()]
            acc = [self.coeffs[-1].r % modulus] + [0] * (self.M - 1)
            for i in range(self.M - 2, -1, -1):
                acc = poly_mul_packed(acc, gres, modulus, self.M)
                acc += [0] * (self.M - len(acc))
                acc[0] = (acc[0] + self.coeffs[i].r) % modulus
            acc = IwasawaSeries._from_residues(self.ring, acc, kk, self.M)
        else:
            acc = IwasawaSeries(self.ring, [self.coeffs[-1]], self.M)
            for i in range(self.M - 2, -1, -1):
                acc = acc * g
                acc = IwasawaSeries(self.ring,
                                    [acc.coeffs[0] + self.coeffs[i]] + acc.coeffs[1:],
                                    self.M)
        deg = None
        if self.poly_degree is not None and g.poly_degree is not None:
            d = self.poly_degree * max(g.poly_degree, 1)
            deg = d if d < self.M else None
        acc.poly_degree = deg
        if self.poly_degree is None and not g0.is_zero_at_precision():
            acc = acc._cap_tail(v0)
        return acc

    def _cap_tail(self, v_const):
        """Cap claims at the unknown-tail bound (M - j) * v(G(0))."""
        ring = self.ring
        capped = [
            ring.cap(c, max(1, (self.M - j) * v_const))
            for j, c in enumerate(self.coeffs)
        ]
        return IwasawaSeries(ring, capped, self.M, self.poly_degree)

    # -- structure queries ---------------------------------------------------------

    def mu_lambda(self) -> MuLambda:
        ring = self.ring
        best = None
        best_i = None
        bounds = []
        for i, c in enumerate(self.coeffs):
            v = ring.valuation(c)
            bounds.append((i, v, ring.uni_prec(c)))
            if v is not None and (best is None or v < best):
                best, best_i = v, i
        if best is None:
            raise Indeterminate("every coefficient vanishes to working precision")
        for i, v, bound in bounds:
            if v is not None:
                continue
            if bound < best or (bound == best and i < best_i):
                raise Indeterminate(
                    f"coefficient {i} is only known to valuation >= {bound}; "
                    f"mu/lambda not visible at this precision"
                )
        return MuLambda(best, best_i, best_i == self.M - 1)

    def is_distinguished(self):
        """Monic polynomial with non-unit lower coefficients, at current precision."""
        if self.poly_degree is None:
            return False
        d = self.poly_degree
        ring = self.ring
        lead = self.coeffs[d]
        if not ring.is_unit(lead) or not (lead == ring.one()):
            return False
        return all(not ring.is_unit(self.coeffs[i]) for i in range(d))

    # -- inversion / division / preparation --------------------------------------------

    def invert_unit(self):
        """Inverse of a series with unit constant term, mod (prec, T^M)."""
        ring = self.ring
        if not ring.is_unit(self.coeffs[0]):
            raise NonUnit("series has non-unit constant term")
        k = self._uniform_prec()
        if k is not None:
            modulus = ring.p ** k
            b = [r % modulus for r in self.residues()]
            v = [pow(b[0], -1, modulus)]
            width = 1
            while width < self.M:
                width = min(2 * width, self.M)
                bv = poly_mul_packed(b[:width], v, modulus, width)
                corr = [(-x) % modulus for x in bv]
                corr[0] = (corr[0] + 2) % modulus
                v = poly_mul_packed(v, corr, modulus, width)
            return IwasawaSeries._from_residues(ring, v, k, self.M)
        inv0 = ring.inv(self.coeffs[0])
        out = [inv0]
        for j in range(1, self.M):
            acc = None
            for i in range(1, j + 1):
                t = self.coeffs[i] * out[j - i]
                acc = t if acc is None else acc + t
            out.append(-(acc * inv0))
        return IwasawaSeries(ring, out, self.M)

    def weierstrass_divide(self, P):
        """F = Q*P + R with deg R < deg P, for a distinguished polynomial P.

        When F is an exact polynomial this is Euclidean division (exact to the
        coefficients' own digits).  Otherwise the unknown tail of F feeds back
        into the low coefficients of Q at one extra p-power per deg P degrees,
        and the claims of Q and R are reduced accordingly; the reconstruction
        identity still holds exactly on the computed residues mod T^M.
        """
        P = self._check(P)
        if not P.is_distinguished():
            raise DomainError("divisor is not distinguished at this precision")
        lam = P.poly_degree
        if lam == 0:
            return self.copy(), IwasawaSeries.zero(self.ring, self.M)
        if self.poly_degree is not None:
            return self._divide_euclid(P, lam)
        return self._divide_fixed_point(P, lam, unit_high=True)

    def _divide_euclid(self, P, lam):
        ring = self.ring
        zero = ring.zero()
        rem = list(self.coeffs)
        q = [zero] * self.M
        for j in range(self.poly_degree, lam - 1, -1):
            c = rem[j]
            q[j - lam] = c
            for t in range(lam + 1):
                rem[j - lam + t] = rem[j - lam + t] - c * P.coeffs[t]
        Q = IwasawaSeries(ring, q, self.M,
                          poly_degree=max(self.poly_degree - lam, 0))
        R = IwasawaSeries(ring, rem[:lam] + [zero] * (self.M - lam), self.M,
                          poly_degree=max(lam - 1, 0))
        return Q, R

    def weierstrass_divide_by(self, G):
        """F = Q*G + R for any G with mu(G) = 0; deg R < lambda(G)."""
        G = self._check(G)
        ml = G.mu_lambda()
        if ml.mu != 0:
            raise DomainError("division needs a divisor of mu = 0")
        if ml.lam == 0:
            return self * G.invert_unit(), IwasawaSeries.zero(self.ring, self.M)
        return self._divide_fixed_point(G, ml.lam, unit_high=False)

    def _divide_fixed_point(self, G, lam, unit_high):
        """Fixed-point division engine.

        G = A + T^lam * B with A in the maximal ideal; iterate
        Q <- tau(F - Q*A) * B^{-1}, a contraction by the uniformizer.  When
        both operands are exact polynomials the iteration runs on a window
        extended by lam*(digits+1), which makes the first M coefficients of Q
        exact; otherwise claims are degraded as documented above.
        """
        ring = self.ring
        exact_tail = self.poly_degree is not None and G.poly_degree is not None
        k, kg = self._uniform_prec(), G._uniform_prec()
        if k is not None and kg is not None:
            kk = min(k, kg)
            width = self.M + lam * (kk * ring.ramification + 1) if exact_tail else self.M
            modulus = ring.p ** kk
            f = [r % modulus for r in self.residues()] + [0] * (width - self.M)
            g_full = [r % modulus for r in G.residues()] + [0] * (width - self.M)
            a = g_full[:lam]
            if unit_high:
                binv = None
            else:
                B = IwasawaSeries._from_residues(ring, g_full[lam:], kk, width)
                binv = B.invert_unit().residues()

            def times_binv(vec):
                if binv is None:
                    return vec + [0] * (width - len(vec))
                out = poly_mul_packed(vec, binv, modulus, width)
                return out + [0] * (width - len(out))

            q = times_binv(f[lam:] + [0] * lam)
            for _ in range(kk * ring.ramification + 1):
                qa = poly_mul_packed(q, a, modulus, width)
                qa += [0] * (width - len(qa))
                nq = times_binv([(f[j] - qa[j]) % modulus for j in range(lam, width)] + [0] * lam)
                if nq == q:
                    break
                q = nq
            qg = poly_mul_packed(q, g_full, modulus, width)
            qg += [0] * (width - len(qg))
            r = [(f[j] - qg[j]) % modulus for j in range(lam)]
            if exact_tail:
                Q = IwasawaSeries._from_residues(ring, q[: self.M], kk, self.M)
                R = IwasawaSeries._from_residues(ring, r, kk, self.M,
                                                 poly_degree=max(lam - 1, 0))
                return Q, R
            qc = [
                PadicInt(ring.ctx, q[j], self._q_claim(j, lam, kk))
                for j in range(self.M)
            ]
            rc = [PadicInt(ring.ctx, rr, self._r_claim(lam, kk)) for rr in r]
            Q = IwasawaSeries(ring, qc, self.M)
            R = IwasawaSeries(ring, rc + [ring.zero()] * (self.M - lam), self.M,
                              poly_degree=max(lam - 1, 0))
            return Q, R
        # generic object path (cyclotomic scalars, mixed precision)
        zero = ring.zero()
        a = G.coeffs[:lam]
        depth = min(ring.uni_prec(c) for c in self.coeffs)
        depth = min(depth, min(ring.uni_prec(c) for c in G.coeffs))
        if unit_high:
            Binv = None
        else:
            B = IwasawaSeries(ring, G.coeffs[lam:] + [zero] * lam, self.M)
            Binv = B.invert_unit()

        def times_binv_obj(vec):
            if Binv is None:
                return vec
            return _object_mul(ring, vec, Binv.coeffs, self.M)

        q = times_binv_obj(self.coeffs[lam:] + [zero] * lam)
        for _ in range(depth + 1):
            qa = _object_mul(ring, q, a, self.M)
            q = times_binv_obj(
                [self.coeffs[j] - qa[j] for j in range(lam, self.M)] + [zero] * lam
            )
        qg = _object_mul(ring, q, G.coeffs, self.M)
        r = [self.coeffs[j] - qg[j] for j in range(lam)]
        qcap = [ring.cap(c, self._q_claim(j, lam, depth)) for j, c in enumerate(q)]
        rcap = [ring.cap(c, self._r_claim(lam, depth)) for c in r]
        Q = IwasawaSeries(ring, qcap, self.M)
        R = IwasawaSeries(ring, rcap + [zero] * (self.M - lam), self.M,
                          poly_degree=max(lam - 1, 0))
        return Q, R

    def _q_claim(self, j, lam, kk):
        # unknown tail coefficient F_m (m >= M) reaches Q_j after
        # (m - j)/lam - 1 contraction steps, each worth one uniformizer digit
        return min(kk, max(1, -(-(self.M - j - lam) // lam)))

    def _r_claim(self, lam, kk):
        return min(kk, max(1, -(-(self.M - 2 * lam + 1) // lam) + 1))

    def prepare(self) -> "WeierstrassData":
        """Weierstrass preparation F = p^mu * P * U (canonical).

        Exact-polynomial inputs give P and U at the full digit window (minus
        the mu shift); truncated-tail inputs give the documented reduced
        claims inherited from the division.
        """
        ml = self.mu_lambda()
        mu, lam = ml.mu, ml.lam
        ring = self.ring
        if lam >= self.M:
            raise PrecisionExhausted("lambda does not fit inside the T-window")
        g = IwasawaSeries(
            ring, [ring.div_uni(c, mu) for c in self.coeffs], self.M, self.poly_degree
        )
        if lam == 0:
            P = IwasawaSeries.from_ints(ring, [1], self.M)
            return WeierstrassData(mu, P, g)
        t_lam = IwasawaSeries.from_ints(ring, [0] * lam + [1], self.M)
        Q, R = t_lam.weierstrass_divide_by(g)
        P = t_lam - R
        P.poly_degree = lam
        U = Q.invert_unit()
        return WeierstrassData(mu, P, U)

    # -- presentation ------------------------------------------------------------------

    def cap_precision(self, prec):
        ring = self.ring
        return IwasawaSeries(ring, [ring.cap(c, prec) for c in self.coeffs], self.M,
                             self.poly_degree)

    def __eq__(self, other):
        if not isinstance(other, IwasawaSeries) or other.ring != self.ring:
            return NotImplemented
        if other.M != self.M:
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def residues_equal(self, other):
        return self.M == other.M and self.residues() == other.residues()

    def __repr__(self):
        head = ", ".join(c.to_text() if hasattr(c, "to_text") else repr(c)
                         for c in self.coeffs[:4])
        return f"IwasawaSeries[{head}, ...; M={self.M}]"


@_lru_cache(maxsize=64)
def _affine_tail_bounds(p, M, vc, cap):
    """Valuation floor, per output degree j, of the unknown-tail part of
    F(c + b*T) when only M coefficients of F are known and v(c) = vc.

    Tail term i >= M lands on degree j with valuation
    (i - j) * vc + v_p(binom(i, j)); the binomial part is the Kummer carry
    count of adding j and i - j in base p.
    """
    out = []
    for j in range(M):
        best = cap
        for i in range(M, j + cap // max(vc, 1) + 2):
            raw = (i - j) * vc
            if raw >= best:
                break
            v = raw + _kummer_carries(j, i - j, p)
            if v < best:
                best = v
        out.append(max(1, best))
    return tuple(out)


def _kummer_carries(a, b, p):
    carries = 0
    carry = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        a //= p
        b //= p
    return carries


def _object_mul(ring, a, b, M):
    out = []
    for n in range(M):
        acc = None
        lo = max(0, n - len(b) + 1)
        for i in range(lo, min(n + 1, len(a))):
            t = a[i] * b[n - i]
            acc = t if acc is None else acc + t
        out.append(acc if acc is not None else ring.zero())
    return out


@dataclass
class WeierstrassData:
    """F = p^mu * P * U with P distinguished of degree lambda, U a unit."""

    mu: int
    P: IwasawaSeries
    U: IwasawaSeries

    @property
    def lam(self):
        return self.P.poly_degree

    def reassemble(self):
        ring = self.P.ring
        piece = self.P * self.U
        if self.mu:
            piece = piece.scale(ring.from_int(ring.p ** self.mu))
        return piece


# -- functional aliases for the operator names ---------------------------------------

def series_add(f, g):
    return f + g


def series_mul(f, g):
    return f * g


def series_compose(f, g):
    return f.compose(g)


def mu_lambda(f):
    return f.mu_lambda()


def weierstrass_prepare(f):
    return f.prepare()


def weierstrass_divide(f, p):
    return f.weierstrass_divide(p)


# -- common series builders -----------------------------------------------------------

def one_plus_T_pow(ring, e: int, M: int) -> IwasawaSeries:
    """(1+T)^e for an integer e (negative allowed), exact binomials."""
    if 0 <= e < M:
        ints = [math.comb(e, j) for j in range(e + 1)]
        return IwasawaSeries.from_ints(ring, ints, M)
    if e >= 0:
        ints = [math.comb(e, j) for j in range(M)]
    else:
        ints = [(-1) ** j * math.comb(-e + j - 1, j) for j in range(M)]
    s = IwasawaSeries.from_ints(ring, ints, M)
    s.poly_degree = None  # the polynomial (or tail) continues past the window
    return s


def binomial_series(ring, u, M: int) -> IwasawaSeries:
    """(1+T)^u for a p-adic exponent u.

    Coefficient j is the exact integer binomial of the residue, claimed to
    k(u) - floor(log_p j) digits: moving u by p^m moves binom(u, j) by a
    multiple of p^(m - floor(log_p j)) (Vandermonde expansion of the shift).
    """
    if isinstance(u, int):
        return one_plus_T_pow(ring, u, M)
    p = ring.p
    ku = u.k
    coeffs = [ring.one(ku)]
    num = 1
    r = u.r
    for j in range(1, M):
        num *= r - (j - 1)
        c = num // math.factorial(j)
        loss = 0
        jj = j
        while jj >= p:
            jj //= p
            loss += 1
        k = ku - loss
        if k < 1:
            raise PrecisionExhausted(f"binomial coefficient {j} has no digits left")
        coeffs.append(PadicInt(ring.ctx, c, k))
    return IwasawaSeries(ring, coeffs, M)
