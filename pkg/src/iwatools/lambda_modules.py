"""Finitely presented torsion modules over the truncated Iwasawa algebra.

A module is a square presentation matrix; its characteristic ideal is the
Weierstrass-prepared determinant (mu, P), with the unit part discarded.
Determinants expand by minors (no divisions, so no precision loss beyond the
entries' own claims).  Block-triangular composition realizes short exact
sequences, and det of a block triangular matrix is the product of the blocks'
dets, which is the executable multiplicativity of characteristic ideals.

mu = 0 is equivalent to the cokernel being finitely generated over Z_p; the
predicate is double-checked by an independent route, the nonvanishing of the
mod-p determinant over F_p[[T]].
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    ContextMismatch,
    DimensionMismatch,
    Indeterminate,
    NotTorsion,
    ZeroDivisor,
)
from .series import IwasawaSeries


@dataclass
class PresentedModule:
    """Cokernel of a square matrix over the truncated Iwasawa algebra."""

    matrix: list  # r x r of IwasawaSeries
    _ring: object = None
    _M: int = 0

    def __post_init__(self):
        r = len(self.matrix)
        if any(len(row) != r for row in self.matrix):
            raise DimensionMismatch("presentation matrix must be square")
        if r == 0:
            if self._ring is None:
                raise DimensionMismatch(
                    "an empty presentation needs an explicit ring and window")
            return
        self._ring = self.matrix[0][0].ring
        self._M = self.matrix[0][0].M
        for row in self.matrix:
            for s in row:
                if s.ring != self._ring or s.M != self._M:
                    raise ContextMismatch("presentation entries disagree")

    @property
    def rank(self):
        return len(self.matrix)

    @property
    def ring(self):
        return self._ring

    @property
    def M(self):
        return self._M


def elementary_module(ring, M, generators) -> PresentedModule:
    """diag(g_1..g_k): the module sum of Lambda/(g_i)."""
    gs = []
    for g in generators:
        if isinstance(g, IwasawaSeries):
            s = g
        else:
            s = IwasawaSeries.from_ints(ring, [g], M)
        if all(c.is_zero_at_precision() for c in s.coeffs):
            raise ZeroDivisor("elementary factors must be nonzero")
        gs.append(s)
    r = len(gs)
    zero = IwasawaSeries.zero(ring, M)
    matrix = [[gs[i] if i == j else zero for j in range(r)] for i in range(r)]
    return PresentedModule(matrix, ring, M)


def determinant(mod: PresentedModule) -> IwasawaSeries:
    """Minor expansion (division free) down the first column."""
    r = mod.rank
    if r == 0:
        return None
    ring, M = mod.ring, mod.M

    cache = {}

    def minor(rows, cols):
        if not rows:
            return IwasawaSeries.from_ints(ring, [1], M)
        key = (rows, cols)
        got = cache.get(key)
        if got is not None:
            return got
        c0 = cols[0]
        total = None
        for idx, i in enumerate(rows):
            entry = mod.matrix[i][c0]
            if all(c.is_zero_at_precision() for c in entry.coeffs):
                continue
            sub = minor(rows[:idx] + rows[idx + 1:], cols[1:])
            piece = entry * sub
            if idx % 2:
                piece = -piece
            total = piece if total is None else total + piece
        if total is None:
            total = IwasawaSeries.zero(ring, M)
        cache[key] = total
        return total

    return minor(tuple(range(r)), tuple(range(r)))


@dataclass
class CharIdeal:
    mu: int
    P: IwasawaSeries

    @property
    def lam(self):
        return self.P.poly_degree

    def __eq__(self, other):
        return isinstance(other, CharIdeal) and self.mu == other.mu and self.P == other.P


def char_ideal(mod: PresentedModule) -> CharIdeal:
    """Prepared determinant: the canonical generator p^mu * P."""
    if mod.rank == 0:
        return CharIdeal(0, IwasawaSeries.from_ints(mod.ring, [1], mod.M))
    det = determinant(mod)
    if all(c.is_zero_at_precision() for c in det.coeffs):
        raise NotTorsion("determinant vanishes to working precision")
    w = det.prepare()
    return CharIdeal(w.mu, w.P)


def ses_compose(a: PresentedModule, c: PresentedModule, glue) -> PresentedModule:
    """Block matrix [[A, glue], [0, C]]: the extension of C by A."""
    ra, rc = a.rank, c.rank
    if len(glue) != ra or any(len(row) != rc for row in glue):
        raise DimensionMismatch(f"glue must be {ra} x {rc}")
    ring, M = a.ring, a.M
    zero = IwasawaSeries.zero(ring, M)
    out = []
    for i in range(ra):
        out.append(list(a.matrix[i]) + list(glue[i]))
    for i in range(rc):
        out.append([zero] * ra + list(c.matrix[i]))
    return PresentedModule(out)


def is_mu_zero(mod: PresentedModule) -> bool:
    return char_ideal(mod).mu == 0


def is_finitely_generated_over_Zp(mod: PresentedModule) -> bool:
    """Independent route: the mod-p determinant over F_p[[T]] is nonzero
    iff the cokernel is a finitely generated Z_p-module."""
    ring, M = mod.ring, mod.M
    p = ring.p
    kmin = min(min(c.k for c in s.coeffs) for row in mod.matrix for s in row)
    if kmin < 1:
        raise Indeterminate("no digits available for the mod-p reduction")
    red = [[[c.r % p for c in s.coeffs] for s in row] for row in mod.matrix]
    det = _fp_series_det(red, p, M)
    return any(det)


def _fp_series_det(rows, p, M):
    """Determinant over F_p[T]/T^M by fraction-free expansion."""
    r = len(rows)

    def mul(a, b):
        out = [0] * M
        for i, av in enumerate(a):
            if av:
                for j in range(M - i):
                    if b[j]:
                        out[i + j] = (out[i + j] + av * b[j]) % p
        return out

    cache = {}

    def minor(rset, cols):
        if not rset:
            e = [0] * M
            e[0] = 1
            return e
        key = (rset, cols)
        if key in cache:
            return cache[key]
        c0 = cols[0]
        total = [0] * M
        for idx, i in enumerate(rset):
            entry = rows[i][c0]
            if not any(entry):
                continue
            sub = minor(rset[:idx] + rset[idx + 1:], cols[1:])
            piece = mul(entry, sub)
            sign = p - 1 if idx % 2 else 1
            for t in range(M):
                total[t] = (total[t] + sign * piece[t]) % p
        cache[key] = total
        return total

    return minor(tuple(range(r)), tuple(range(r)))
