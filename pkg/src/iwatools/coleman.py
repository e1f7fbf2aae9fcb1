"""The operator attaching a unit-supported measure to a Coleman-style series.

For a series g(W) with unit constant term,

    tilde(g) = log g(W) - (1/p) * sum over zeta^p = 1 of log g(zeta(1+W) - 1),

computed on the formal multiplicative group (X + Y + XY).  Individual logs
have denominators (the k-th term of log(1+h) carries 1/k), so everything is
computed scaled by p^s with s = max v_p(k) over the window, and the final
division by p^(s+1) doubles as the integrality check: it fails exactly when
the input is not norm-coherent to first order.

log of a p-power root of unity is 0 by convention (forced 2-adically from
2 log(-1) = log 1), so torsion constant parts drop out.

Exact-polynomial inputs are processed on a window extended by N + log-slack
coefficients, which keeps full digit claims on the output; unknown-tail
inputs inherit the documented window-feedback claims.
"""

from __future__ import annotations

from .errors import DomainError, NonIntegral, PrecisionExhausted
from .padic import PadicInt, padic_log, unit_decompose, vp
from .series import IwasawaSeries
from .cyclotomic import CycRing
from .mahler import SUPPORT_UNITS, UnitMeasure


def formal_add(a, b):
    """Multiplicative formal group law X + Y + XY on series (or a scalar)."""
    if not isinstance(b, IwasawaSeries):
        ring = a.ring
        b = IwasawaSeries(ring, [ring.coerce(b)] + [ring.zero()] * (a.M - 1), a.M,
                          poly_degree=0)
    return a + b + a * b


def _scaled_log(g, scale):
    """p^scale * log(g / torsion(g(0))) on g's own window; integral output."""
    ring = g.ring
    p = ring.p
    g0 = g.coeffs[0]
    if not g0.is_unit():
        raise DomainError("Coleman series needs a unit constant term")
    dec = unit_decompose(g0)
    c0 = padic_log(dec.principal)
    h = g.scale(g0.inv()) - IwasawaSeries.from_ints(ring, [1], g.M)
    if not h.coeffs[0].is_zero_at_precision():
        raise DomainError("normalized series must have constant term 1")
    M = g.M
    out = [c0 * (p ** scale)] + [ring.zero() for _ in range(M - 1)]
    hk = IwasawaSeries.from_ints(ring, [1], M)
    for k in range(1, M):
        hk = hk * h
        v = vp(k, p)
        unit = (k // p ** v)
        factor = ring.from_int(p ** (scale - v) * pow(unit, -1, p ** ring.ctx.N))
        if k % 2 == 0:
            factor = -factor
        for j in range(k, M):
            out[j] = out[j] + hk.coeffs[j] * factor
    s = IwasawaSeries(ring, out, M)
    s.poly_degree = None  # a truncation of an infinite series, never exact
    return s


def coleman_tilde(g: IwasawaSeries) -> UnitMeasure:
    """The measure with Mahler series log g - (1/p) sum of twisted logs."""
    ring = g.ring
    p = ring.p
    M = g.M
    if g.poly_degree is not None:
        # zero-extend so the window feedback sits beyond every claimed digit
        ext = M + ring.ctx.N + (M + ring.ctx.N).bit_length()
        gg = IwasawaSeries(ring, list(g.coeffs), ext, poly_degree=g.poly_degree)
    else:
        gg = g
    scale = (gg.M - 1).bit_length() if p == 2 else \
        len(_base_repr(gg.M - 1, p))
    A = _scaled_log(gg, scale)
    if p == 2:
        B = A.compose_affine(ring.from_int(-2), ring.from_int(-1))
        diff = A - B
        denom = scale + 1
        out = _divide_checked(diff, ring, denom, M)
    else:
        cring = CycRing(ring.ctx, p)
        lifted = IwasawaSeries(cring, [cring.coerce(c) for c in A.coeffs], A.M)
        zeta = cring.zeta_power(1)
        twist = lifted.compose_affine(zeta - cring.one(), zeta)
        coeffs = []
        for j in range(A.M):
            tr = twist.coeffs[j].trace_to_base()
            coeffs.append(A.coeffs[j] * (p - 1) - tr)
        diff = IwasawaSeries(ring, coeffs, A.M)
        out = _divide_checked(diff, ring, scale + 1, M)
    _certify_unit_support(out)
    return UnitMeasure(out, SUPPORT_UNITS)


def _certify_unit_support(out):
    """Check sum over zeta^p = 1 of g~(zeta(1+W)-1) = 0 to tracked precision."""
    ring = out.ring
    if ring.p == 2:
        twisted = out.compose_affine(ring.from_int(-2), ring.from_int(-1))
        cert = out + twisted
    else:
        cring = CycRing(ring.ctx, ring.p)
        lifted = IwasawaSeries(cring, [cring.coerce(c) for c in out.coeffs], out.M)
        zeta = cring.zeta_power(1)
        twist = lifted.compose_affine(zeta - cring.one(), zeta)
        cert = out + IwasawaSeries(
            ring, [t.trace_to_base() for t in twist.coeffs], out.M)
    for j, c in enumerate(cert.coeffs):
        if c.r % ring.p ** c.k != 0:
            raise NonIntegral(
                f"psi-annihilation certificate failed at w^{j} on the output"
            )


def _divide_checked(diff, ring, denom, M):
    p = ring.p
    out = []
    for j in range(M):
        c = diff.coeffs[j]
        if c.r % p ** min(denom, c.k) != 0:
            raise NonIntegral(
                f"coefficient {j} of the Coleman operator output is not "
                f"integral; the input is not norm-coherent"
            )
        if c.k - denom >= 1:
            out.append(c.divide_p(denom))
        elif c.r == 0:
            # an exactly vanishing stored residue: 0 survives any division
            out.append(PadicInt(ring.ctx, 0, 1))
        else:
            raise PrecisionExhausted(
                f"window feedback consumed every digit of coefficient {j}; "
                f"provide a polynomial input or a longer window"
            )
    return IwasawaSeries(ring, out, M)


def _base_repr(n, p):
    out = []
    while n:
        out.append(n % p)
        n //= p
    return out


def tilde_is_multiplicative(g: IwasawaSeries, h: IwasawaSeries) -> bool:
    """coleman_tilde(g*h) = coleman_tilde(g) + coleman_tilde(h) to precision."""
    both = coleman_tilde(g * h)
    split = coleman_tilde(g) + coleman_tilde(h)
    return both.series == split.series
