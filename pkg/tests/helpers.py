"""Independent oracles used by the test-suite.

Everything here is deliberately naive: exact Fractions, dense linear algebra,
direct definitions.  The library must agree with these, never the other way
round.
"""

from fractions import Fraction
import math


def v2(n):
    n = abs(int(n))
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    return v


def vp_int(n, p):
    n = abs(int(n))
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def frac_mod(q: Fraction, p: int, k: int) -> int:
    """Reduce a p-integral rational mod p^k."""
    pk = p ** k
    den = q.denominator
    assert den % p != 0, "rational is not p-integral"
    return q.numerator * pow(den, -1, pk) % pk


class FracSeries:
    """Exact power series over Fraction, truncated at M."""

    def __init__(self, coeffs, M):
        coeffs = [Fraction(c) for c in coeffs]
        coeffs += [Fraction(0)] * (M - len(coeffs))
        self.c = coeffs[:M]
        self.M = M

    def __add__(self, o):
        return FracSeries([a + b for a, b in zip(self.c, o.c)], self.M)

    def __sub__(self, o):
        return FracSeries([a - b for a, b in zip(self.c, o.c)], self.M)

    def __neg__(self):
        return FracSeries([-a for a in self.c], self.M)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return FracSeries([a * o for a in self.c], self.M)
        out = [Fraction(0)] * self.M
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j in range(self.M - i):
                out[i + j] += a * o.c[j]
        return FracSeries(out, self.M)

    def compose(self, g):
        assert g.c[0] == 0 or abs(g.c[0]) != 0, "composition point"
        acc = FracSeries([self.c[-1]], self.M)
        for i in range(self.M - 2, -1, -1):
            acc = acc * g
            acc.c[0] += self.c[i]
        return acc

    def log_unit_constant(self):
        """log of a series with constant term 1."""
        assert self.c[0] == 1
        h = FracSeries(self.c, self.M)
        h.c[0] = Fraction(0)
        out = FracSeries([0], self.M)
        pw = FracSeries([1], self.M)
        for n in range(1, self.M):
            pw = pw * h
            out = out + pw * Fraction((-1) ** (n + 1), n)
        return out

    def invert(self):
        assert self.c[0] != 0
        inv0 = 1 / self.c[0]
        out = [inv0]
        for j in range(1, self.M):
            s = Fraction(0)
            for i in range(1, j + 1):
                s += self.c[i] * out[j - i]
            out.append(-s * inv0)
        return FracSeries(out, self.M)


def one_plus_w_pow(e, M):
    if e >= 0:
        return FracSeries([math.comb(e, j) for j in range(min(e, M - 1) + 1)], M)
    return FracSeries([(-1) ** j * math.comb(-e + j - 1, j) for j in range(M)], M)


def sylvester_resultant(f, g):
    """Res(f, g) for integer coefficient lists (lowest degree first)."""
    f = list(f)
    g = list(g)
    while f and f[-1] == 0:
        f.pop()
    while g and g[-1] == 0:
        g.pop()
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        return 0
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j, cf in enumerate(reversed(f)):
            row[i + j] = cf
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, cg in enumerate(reversed(g)):
            row[i + j] = cg
        rows.append(row)
    return _det_bareiss(rows)


def _det_bareiss(a):
    a = [row[:] for row in a]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def howell_mod(rows, modulus):
    """Echelon basis (Howell-style) of the row span of `rows` in (Z/modulus)^n.

    Returns a list of pivot rows usable for membership testing via reduce_mod.
    """
    n = len(rows[0]) if rows else 0
    work = [list(r) for r in rows if any(x % modulus for x in r)]
    basis = []
    col = 0
    while work and col < n:
        work = [[x % modulus for x in r] for r in work]
        work = [r for r in work if any(r)]
        if not work:
            break
        cand = [r for r in work if r[col] % modulus]
        if not cand:
            col += 1
            continue
        piv = min(cand, key=lambda r: v2_mod(r[col], modulus))
        work.remove(piv)
        vp_piv = v2_mod(piv[col], modulus)
        unit = piv[col] >> vp_piv
        inv_unit = pow(unit, -1, modulus)
        piv = [(x * inv_unit) % modulus for x in piv]  # pivot entry = 2^vp
        for r in work:
            if r[col] % modulus:
                vr = v2_mod(r[col], modulus)
                q = (r[col] >> vp_piv) % modulus if vr >= vp_piv else None
                if q is None:
                    continue
                for j in range(n):
                    r[j] = (r[j] - q * piv[j]) % modulus
        # annihilator companion keeps the span's torsion visible
        ann = modulus >> vp_piv
        comp = [(x * ann) % modulus for x in piv]
        if any(comp):
            work.append(comp)
        basis.append((col, vp_piv, piv))
        work = [r for r in work if any(x % modulus for x in r)]
        col += 1
    return basis


def v2_mod(x, modulus):
    x %= modulus
    if x == 0:
        return modulus.bit_length() - 1
    return v2(x)


def member_mod(basis, vec, modulus):
    """Is vec in the span described by a howell_mod basis?"""
    v = [x % modulus for x in vec]
    for col, vp_piv, piv in basis:
        if v[col] % modulus:
            vr = v2_mod(v[col], modulus)
            if vr < vp_piv:
                return False
            q = (v[col] >> vp_piv) % modulus
            for j in range(len(v)):
                v[j] = (v[j] - q * piv[j]) % modulus
    return not any(v)
