"""Exact Z_p arithmetic at a fixed digit budget.

Every scalar is a residue r mod p^k together with the number k of digits that
are actually trusted (k <= N, the context-wide cap).  Operations compute the
worst-case precision of the result:

    add/sub:  min(k_a, k_b)
    mul:      min(k_a + v(b), k_b + v(a), N)    (v = known valuation floor)
    inv:      k of the argument (units only)
    p-shift:  k - v (raises once the window is used up)

log and exp are summed with exact integer arithmetic (powers of the residue
are exact integers, the p-part of each denominator is divided out exactly,
the odd part is inverted mod p^k), so on their convergence domains neither
loses digits beyond the input's own window: the documented loss table is 0
for both, at every p.  Conservative callers may still rely on the weaker
guarantee "at least k - 2 digits" quoted elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ContextMismatch,
    DomainError,
    NonUnit,
    PrecisionExhausted,
)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def vp(n: int, p: int) -> int:
    """Exact p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def sp(n: int, p: int) -> int:
    """Digit sum of n in base p (Legendre's formula helper)."""
    s = 0
    while n:
        s += n % p
        n //= p
    return s


class PadicContext:
    """Ambient Z_p: the prime and the digit cap shared by a computation."""

    __slots__ = ("p", "N")

    def __init__(self, p: int = 2, N: int = 64):
        if not _is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if N < 1:
            raise ValueError("precision N must be >= 1")
        self.p = p
        self.N = N

    def __eq__(self, other):
        return isinstance(other, PadicContext) and (self.p, self.N) == (other.p, other.N)

    def __hash__(self):
        return hash((self.p, self.N))

    def __repr__(self):
        return f"PadicContext(p={self.p}, N={self.N})"

    def integer(self, value: int, prec: int | None = None) -> "PadicInt":
        k = self.N if prec is None else prec
        return PadicInt(self, value, k)

    def zero(self, prec: int | None = None) -> "PadicInt":
        return self.integer(0, prec)

    def one(self, prec: int | None = None) -> "PadicInt":
        return self.integer(1, prec)


class PadicInt:
    """A p-adic integer known modulo p^k (k digits of a context capped at N)."""

    __slots__ = ("ctx", "r", "k")

    def __init__(self, ctx: PadicContext, r: int, k: int):
        if k < 1:
            raise PrecisionExhausted("no digits left in this value")
        k = min(k, ctx.N)
        self.ctx = ctx
        self.k = k
        self.r = r % (ctx.p ** k)

    # -- helpers -----------------------------------------------------------

    def _match(self, other):
        if isinstance(other, int):
            return self.ctx.integer(other)
        if not isinstance(other, PadicInt):
            return None  # defer to the other operand's reflected operator
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
        return other

    def valuation(self):
        """v_p(x) when visible, else None meaning 'at least k'."""
        if self.r == 0:
            return None
        return vp(self.r, self.ctx.p)

    def val_floor(self) -> int:
        """Best known lower bound for the valuation."""
        v = self.valuation()
        return self.k if v is None else v

    def is_zero_at_precision(self) -> bool:
        return self.r == 0

    def is_unit(self) -> bool:
        return self.r % self.ctx.p != 0

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = self._match(other)
        if other is None:
            return NotImplemented
        k = min(self.k, other.k)
        return PadicInt(self.ctx, self.r + other.r, k)

    __radd__ = __add__

    def __neg__(self):
        return PadicInt(self.ctx, -self.r, self.k)

    def __sub__(self, other):
        other = self._match(other)
        if other is None:
            return NotImplemented
        k = min(self.k, other.k)
        return PadicInt(self.ctx, self.r - other.r, k)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._match(other)
        if other is None:
            return NotImplemented
        k = min(self.k + other.val_floor(), other.k + self.val_floor(), self.ctx.N)
        return PadicInt(self.ctx, self.r * other.r, k)

    __rmul__ = __mul__

    def inv(self) -> "PadicInt":
        if not self.is_unit():
            raise NonUnit(f"{self} has positive valuation")
        p, k = self.ctx.p, self.k
        return PadicInt(self.ctx, pow(self.r, -1, p ** k), k)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("integer exponents only; use kappa_power for p-adic ones")
        if e < 0:
            return self.inv() ** (-e)
        out = self.ctx.one(self.k) if e == 0 else self
        for _ in range(e - 1):
            out = out * self
        return out

    def divide_p(self, v: int = 1) -> "PadicInt":
        """Exact division by p^v; costs v digits of the window."""
        if v == 0:
            return self
        pv = self.ctx.p ** v
        if self.r % pv != 0:
            raise DomainError(f"{self} is not divisible by p^{v}")
        if self.k - v < 1:
            raise PrecisionExhausted(f"dividing by p^{v} leaves no digits")
        return PadicInt(self.ctx, self.r // pv, self.k - v)

    # -- comparisons -------------------------------------------------------

    def __eq__(self, other):
        """Agreement at the shared precision (the only decidable equality)."""
        if isinstance(other, int):
            other = self.ctx.integer(other)
        if not isinstance(other, PadicInt) or other.ctx != self.ctx:
            return NotImplemented
        k = min(self.k, other.k)
        pk = self.ctx.p ** k
        return (self.r - other.r) % pk == 0

    def agrees_to(self, other, digits: int) -> bool:
        other = self._match(other)
        if other is None:
            raise TypeError("agrees_to needs a PadicInt or int")
        if min(self.k, other.k) < digits:
            raise PrecisionExhausted(
                f"cannot compare to {digits} digits at precision {min(self.k, other.k)}"
            )
        return (self.r - other.r) % (self.ctx.p ** digits) == 0

    # -- presentation ------------------------------------------------------

    def digits(self) -> str:
        """Canonical digit string, least significant digit first."""
        p, n, out = self.ctx.p, self.r, []
        for _ in range(self.k):
            out.append(str(n % p))
            n //= p
        sep = "" if p < 10 else ","
        return sep.join(out)

    def to_text(self) -> str:
        """Textual form `p^v * m mod p^k` used verbatim in CLI/JSON output."""
        p, k = self.ctx.p, self.k
        if self.r == 0:
            return f"0 mod {p}^{k}"
        v = vp(self.r, p)
        return f"{p}^{v} * {self.r // p ** v} mod {p}^{k}"

    def __repr__(self):
        return f"PadicInt({self.to_text()})"


def from_text(ctx: PadicContext, text: str) -> PadicInt:
    """Parse the `p^v * m mod p^k` form (and the `0 mod p^k` degenerate one)."""
    body, _, mod = text.partition(" mod ")
    if not mod:
        raise ValueError(f"malformed p-adic literal: {text!r}")
    pk_base, _, pk_exp = mod.partition("^")
    if int(pk_base) != ctx.p:
        raise ValueError(f"literal is {pk_base}-adic, context is {ctx.p}-adic")
    k = int(pk_exp)
    body = body.strip()
    if body == "0":
        return PadicInt(ctx, 0, k)
    power, _, m = body.partition(" * ")
    base, _, exp = power.partition("^")
    if int(base) != ctx.p:
        raise ValueError(f"literal is {base}-adic, context is {ctx.p}-adic")
    return PadicInt(ctx, int(m) * ctx.p ** int(exp), k)


# -- functional aliases for the operator names -----------------------------

def padic_add(x: PadicInt, y: PadicInt) -> PadicInt:
    return x + y


def padic_mul(x: PadicInt, y: PadicInt) -> PadicInt:
    return x * y


def padic_inv(x: PadicInt) -> PadicInt:
    return x.inv()


def valuation(x: PadicInt):
    return x.valuation()


@dataclass(frozen=True)
class UnitDecomposition:
    """u = sign * principal with sign torsion and principal in 1 + 4Z_2
    (1 + pZ_p for odd p)."""

    sign: PadicInt
    principal: PadicInt


def unit_decompose(u: PadicInt) -> UnitDecomposition:
    ctx = u.ctx
    if not u.is_unit():
        raise NonUnit(f"{u} is not a unit")
    if ctx.p == 2:
        if u.k < 2:
            raise PrecisionExhausted("need at least 2 digits to read the sign mod 4")
        if u.r % 4 == 1:
            sign = ctx.one()
        else:
            sign = ctx.integer(-1)
        return UnitDecomposition(sign, PadicInt(ctx, sign.r * u.r, u.k))
    # Teichmueller digit: omega = lim u^(p^m), fixed point of x -> x^p mod p^k.
    p, k = ctx.p, u.k
    pk = p ** k
    w = u.r % pk
    for _ in range(k + 1):
        w2 = pow(w, p, pk)
        if w2 == w:
            break
        w = w2
    omega = PadicInt(ctx, w, k)
    return UnitDecomposition(omega, u * omega.inv())


def _log_domain_check(u: PadicInt):
    p = u.ctx.p
    if p == 2:
        if u.k < 2 or u.r % 4 != 1:
            raise DomainError("log needs u = 1 mod 4 at two known digits (p = 2)")
    else:
        if u.r % p != 1:
            raise DomainError("log needs u = 1 mod p")


def padic_log(u: PadicInt) -> PadicInt:
    """Iwasawa logarithm on principal units; homomorphic, no digit loss."""
    _log_domain_check(u)
    ctx, k = u.ctx, u.k
    p = ctx.p
    pk = p ** k
    x = u.r - 1  # exact integer, v_p(x) >= 2 (p=2) resp. >= 1
    if x == 0:
        return ctx.zero(k)
    vx = vp(x, p)
    total = 0
    xn = 1
    n = 0
    while True:
        n += 1
        xn *= x
        v_tail = n * vx - (n.bit_length() if p == 2 else len(_base_digits(n, p)))
        term_v = n * vx - vp(n, p)
        if term_v < k:
            vn = vp(n, p)
            odd = n // p ** vn
            t = (xn // p ** vn) * pow(odd, -1, pk)
            total += t if n % 2 == 1 else -t
            total %= pk
        if v_tail >= k and n * vx >= k:
            break
    return PadicInt(ctx, total, k)


def _base_digits(n: int, p: int) -> list:
    out = []
    while n:
        out.append(n % p)
        n //= p
    return out


def padic_exp(x: PadicInt) -> PadicInt:
    """Exponential on p^2 Z_2 (resp. pZ_p); inverse of log, no digit loss."""
    ctx, k = x.ctx, x.k
    p = ctx.p
    min_v = 2 if p == 2 else 1
    v = x.valuation()
    if v is not None and v < min_v:
        raise DomainError(f"exp needs valuation >= {min_v} (got {v})")
    if v is None and k < min_v:
        raise PrecisionExhausted("cannot certify the exp domain at this precision")
    pk = p ** k
    if x.r == 0:
        return ctx.one(k)
    total = 1
    xn = 1
    fact_v = 0
    fact_odd = 1
    n = 0
    while True:
        n += 1
        xn *= x.r
        fact_v += vp(n, p)
        fact_odd = fact_odd * (n // p ** vp(n, p)) % pk
        term_v = n * v - fact_v
        if term_v < k:
            total = (total + (xn // p ** fact_v) * pow(fact_odd, -1, pk)) % pk
        # Legendre: v(x^n/n!) >= n(v - 1/(p-1)) + s_p(n)/(p-1), increasing in n.
        if n * v - (n - 1) // (p - 1) >= k:
            break
    return PadicInt(ctx, total, k)


def kappa_power(u: PadicInt, s) -> PadicInt:
    """u^s := exp(s log u) for u in the principal-unit domain, s in Z_p."""
    if isinstance(s, int):
        s = u.ctx.integer(s)
    lg = padic_log(u)
    return padic_exp(s * lg)
