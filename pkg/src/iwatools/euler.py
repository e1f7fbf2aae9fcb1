"""Kolyvagin-derivative combinatorics over synthetic Galois modules.

The group is G = prod of cyclic G_q (order M = 2^l, generator tau_q) times a
finite abelian Delta.  A synthetic Euler system is the module presented by
exactly the axiom relations on one designated generator per squarefree level:

    ambient:  free abelian group on monomials (prod of tau_q-powers, d) e_r,
              with q ranging over r only (G_{q'} with q' not dividing r acts
              trivially by construction: the field-membership axiom);
    rows:     N_q e_{rq} - (Frob_q - 1) e_r   for every level r and q not in r,
              a finite Delta-presentation at the base level,
              plus an optional corruption row for negative controls.

Membership of a vector in M*V + (relation span) is decided exactly, level by
level from the top: at each level the N_q parts are peeled off through the
free quotient prod_q Z/M[G_q]/(N_q) tensor Z/M[Delta] (each factor is free of
rank M-1, so the kernel of the tensor quotient is the sum of the N_q ideals),
the induced (Frob_q - 1) contributions are pushed down, and the base level
finishes with a Howell-form echelon over Z/M.  The peeling choice does not
matter: alternative coefficients differ by (tau_q - 1)-multiples, which act
trivially one level down.

Local data [.]_q and phi_q are Delta-equivariant integer matrices into the
rank-one free Z[Delta]-module on a place Q above q; tau-parts act trivially
on ideals, which makes the bracket vanish on N_q-rows automatically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import DomainError, NotSquarefree, UndefinedDatum, UnknownPrime
from .galois import FiniteAbelianGroup


# -- group ring elements -------------------------------------------------------

class GroupRingElt:
    """Sparse element of Z[G], G = (Z/M)^s x Delta."""

    def __init__(self, group: "DerivativeGroup", terms=None):
        self.group = group
        self.terms = dict(terms or {})

    def copy(self):
        return GroupRingElt(self.group, self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, 0) + c
            if out[g] == 0:
                del out[g]
        return GroupRingElt(self.group, out)

    def __neg__(self):
        return GroupRingElt(self.group, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return GroupRingElt(self.group)
            return GroupRingElt(self.group,
                                {g: c * other for g, c in self.terms.items()})
        out = {}
        for g1, c1 in self.terms.items():
            for g2, c2 in other.terms.items():
                g = self.group.mul(g1, g2)
                out[g] = out.get(g, 0) + c1 * c2
        return GroupRingElt(self.group,
                            {g: c for g, c in out.items() if c != 0})

    __rmul__ = __mul__

    def augmentation(self):
        return sum(self.terms.values())

    def __eq__(self, other):
        if isinstance(other, int):
            if other == 0:
                return not self.terms
            other = GroupRingElt(self.group, {self.group.identity: other})
        a = {g: c for g, c in self.terms.items() if c}
        b = {g: c for g, c in other.terms.items() if c}
        return a == b

    def __repr__(self):
        return f"GroupRingElt({self.terms})"


class DerivativeGroup:
    """Auxiliary primes q_0..q_{s-1} with cyclic layers of order M = 2^l,
    Frobenius data, and a base group Delta."""

    def __init__(self, s: int, l: int, delta: FiniteAbelianGroup,
                 frobenius=None):
        if s < 0 or l < 1:
            raise ValueError("need s >= 0 auxiliary primes and l >= 1")
        self.s = s
        self.l = l
        self.M = 2 ** l
        self.delta = delta
        # frobenius[i] = exponent tuple over the other legs (own entry 0)
        if frobenius is None:
            frobenius = [tuple(0 for _ in range(s)) for _ in range(s)]
        self.frobenius = [tuple(f) for f in frobenius]
        for i, f in enumerate(self.frobenius):
            if len(f) != s or f[i] % self.M != 0:
                raise ValueError(
                    "Frobenius must have trivial component on its own layer")

    @property
    def identity(self):
        return (0,) * self.s + self.delta.identity

    def mul(self, g1, g2):
        legs = tuple((a + b) % self.M for a, b in zip(g1[: self.s], g2[: self.s]))
        d = self.delta.mul(g1[self.s:], g2[self.s:])
        return legs + d

    def tau(self, q: int, power: int = 1):
        self._check_prime(q)
        legs = [0] * self.s
        legs[q] = power % self.M
        return tuple(legs) + self.delta.identity

    def frob(self, q: int):
        self._check_prime(q)
        return tuple(x % self.M for x in self.frobenius[q]) + self.delta.identity

    def _check_prime(self, q):
        if not (0 <= q < self.s):
            raise UnknownPrime(f"prime index {q} outside 0..{self.s - 1}")

    def one(self):
        return GroupRingElt(self, {self.identity: 1})

    def norm_element(self, q: int) -> GroupRingElt:
        self._check_prime(q)
        return GroupRingElt(self, {self.tau(q, i): 1 for i in range(self.M)})

    def derivative_element(self, q: int) -> GroupRingElt:
        self._check_prime(q)
        return GroupRingElt(self, {self.tau(q, i): i for i in range(1, self.M)})

    def derivative_product(self, primes) -> GroupRingElt:
        primes = list(primes)
        if len(set(primes)) != len(primes):
            raise NotSquarefree(f"repeated auxiliary prime in {primes}")
        out = self.one()
        for q in primes:
            out = out * self.derivative_element(q)
        return out

    def telescope_check(self, q: int) -> bool:
        """(tau_q - 1) D_q = M - N_q exactly in Z[G]."""
        tau = GroupRingElt(self, {self.tau(q, 1): 1})
        lhs = (tau - self.one()) * self.derivative_element(q)
        rhs = GroupRingElt(self, {self.identity: self.M}) - self.norm_element(q)
        return lhs == rhs


# -- the module and its membership engine ----------------------------------------


def _level_key(primes):
    return tuple(sorted(primes))


@dataclass
class SyntheticEulerSystem:
    group: DerivativeGroup
    base_gens: int
    base_rows: list           # rows: dict base-monomial -> int (Z[Delta]-span)
    corruption: dict | None = None   # (level, q) -> base-supported vector
    corrupt_at: tuple | None = None

    # monomial keys:
    #   ("b", delta_tuple, j)                      base generator j, translated
    #   ("l", level_tuple, legs_tuple, delta_tuple) the orbit of e_level

    def x_vector(self, level) -> dict:
        level = _level_key(level)
        if not level:
            return {("b", self.group.delta.identity, 0): 1}
        legs = (0,) * len(level)
        return {("l", level, legs, self.group.delta.identity): 1}

    def act_monomial(self, g, key):
        """Action of a group element on a basis monomial."""
        delta_part = g[self.group.s:]
        if key[0] == "b":
            _, d, j = key
            return ("b", self.group.delta.mul(d, delta_part), j)
        _, level, legs, d = key
        new_legs = tuple((a + g[q]) % self.group.M
                         for a, q in zip(legs, level))
        return ("l", level, new_legs, self.group.delta.mul(d, delta_part))

    def apply(self, elt: GroupRingElt, vec: dict) -> dict:
        out = {}
        for g, c in elt.terms.items():
            for key, v in vec.items():
                k2 = self.act_monomial(g, key)
                out[k2] = out.get(k2, 0) + c * v
        return {k: v for k, v in out.items() if v != 0}

    def kolyvagin_derivative(self, primes) -> dict:
        """The representative D_r x_r of kappa(r) in V/(MV + relations)."""
        primes = list(primes)
        if len(set(primes)) != len(primes):
            raise NotSquarefree(f"repeated auxiliary prime in {primes}")
        D = self.group.derivative_product(primes)
        return self.apply(D, self.x_vector(primes))

    # -- membership in M*V + relation span --------------------------------------

    def membership(self, vec: dict) -> bool:
        M = self.group.M
        by_level = {}
        for key, v in vec.items():
            lvl = _level_key(key[1]) if key[0] == "l" else ()
            by_level.setdefault(lvl, {})[key] = v % M
        levels = sorted((l for l in by_level if l), key=len, reverse=True)
        base_acc = dict(by_level.get((), {}))
        while levels:
            lvl = levels.pop(0)
            cur = {k: v % M for k, v in by_level.pop(lvl, {}).items() if v % M}
            if not cur:
                levels = sorted((l for l in by_level if l), key=len, reverse=True)
                continue
            coeffs = self._peel_level(cur, lvl)
            if coeffs is None:
                return False
            for q, a_q in coeffs.items():
                self._push_down(a_q, lvl, q, by_level, base_acc)
            levels = sorted((l for l in by_level if l), key=len, reverse=True)
        return self._base_membership(base_acc)

    def _peel_level(self, cur, lvl):
        """Solve cur = sum over q in lvl of a_q * N_q mod M, or return None.

        Processes one leg at a time: the slice at top exponent M-1 yields the
        coefficient (the quotient by N_q is free on exponents 0..M-2), and
        subtracting a_q * N_q clears the leg.  The residual must vanish.
        """
        M = self.group.M
        work = dict(cur)
        coeffs = {}
        for pos, q in enumerate(lvl):
            a_q = {}
            # read the slice legs[pos] == M-1
            for key, v in list(work.items()):
                _, level, legs, d = key
                if legs[pos] == M - 1 and v % M:
                    folded = key[:2] + (legs[:pos] + (0,) + legs[pos + 1:], d)
                    a_q[folded] = (a_q.get(folded, 0) + v) % M
            if a_q:
                coeffs[q] = a_q
                for key, c in a_q.items():
                    if not c:
                        continue
                    _, level, legs, d = key
                    for i in range(M):
                        k2 = ("l", level, legs[:pos] + (i,) + legs[pos + 1:], d)
                        work[k2] = (work.get(k2, 0) - c) % M
            work = {k: v for k, v in work.items() if v % M}
        if work:
            return None
        return coeffs

    def _push_down(self, a_q, lvl, q, by_level, base_acc):
        """Subtract a_q times the lower part of the (lvl without q, q) row."""
        M = self.group.M
        sub = _level_key(p for p in lvl if p != q)
        frob = self.group.frob(q)
        target = self.x_vector(sub)
        for key, c in a_q.items():
            if not c:
                continue
            _, level, legs, d = key
            g = [0] * self.group.s
            for leg, prime in zip(legs, level):
                if prime != q:
                    g[prime] = leg
            g_elt = tuple(g) + d
            base_mono = {self.act_monomial(g_elt, k): v
                         for k, v in target.items()}
            # the used row contributes -(Frob_q - 1) e_sub + z below the top;
            # the residual v - a_q * row therefore gains +a_q (Frob_q - 1) e_sub
            # and loses a_q * z
            for k0, v0 in base_mono.items():
                k_frob = self.act_monomial(frob, k0)
                self._accumulate(by_level, base_acc, sub, k_frob, c * v0)
                self._accumulate(by_level, base_acc, sub, k0, -c * v0)
            if self.corruption and self.corrupt_at == (sub, q):
                for kz, vz in self.corruption.items():
                    kz2 = self.act_monomial(g_elt, kz)
                    self._accumulate(by_level, base_acc, (), kz2, -c * vz)

    def _accumulate(self, by_level, base_acc, lvl, key, val):
        M = self.group.M
        if key[0] == "b":
            base_acc[key] = (base_acc.get(key, 0) + val) % M
        else:
            d = by_level.setdefault(_level_key(key[1]), {})
            d[key] = (d.get(key, 0) + val) % M

    def _base_membership(self, base_acc) -> bool:
        M = self.group.M
        vec = {k: v % M for k, v in base_acc.items() if v % M}
        if not vec:
            return True
        basis_keys = [("b", d, j) for d in self.group.delta.elements()
                      for j in range(self.base_gens)]
        index = {k: i for i, k in enumerate(basis_keys)}
        rows = []
        for row in self.base_rows:
            for d in self.group.delta.elements():
                g = (0,) * self.group.s + d
                r = [0] * len(basis_keys)
                for k, v in row.items():
                    r[index[self.act_monomial(g, k)]] = v % M
                rows.append(r)
        target = [0] * len(basis_keys)
        for k, v in vec.items():
            target[index[k]] = v % M
        return _howell_member(rows, target, M)


def _howell_member(rows, vec, modulus):
    """Membership of vec in the row span over Z/modulus (modulus = 2^l)."""
    n = len(vec)
    work = [[x % modulus for x in r] for r in rows]
    work = [r for r in work if any(r)]
    basis = []
    for col in range(n):
        cand = [r for r in work if r[col]]
        if not cand:
            continue
        piv = min(cand, key=lambda r: _v2m(r[col], modulus))
        work.remove(piv)
        t = _v2m(piv[col], modulus)
        unit = piv[col] >> t
        inv_unit = pow(unit, -1, modulus)
        piv = [(x * inv_unit) % modulus for x in piv]
        for r in work:
            if r[col]:
                q = (r[col] >> t) % modulus
                for j in range(col, n):
                    r[j] = (r[j] - q * piv[j]) % modulus
        ann = modulus >> t
        comp = [(x * ann) % modulus for x in piv]
        if any(comp):
            work.append(comp)
        basis.append((col, t, piv))
        work = [r for r in work if any(r)]
    v = [x % modulus for x in vec]
    for col, t, piv in basis:
        if v[col]:
            if _v2m(v[col], modulus) < t:
                return False
            q = (v[col] >> t) % modulus
            for j in range(col, len(v)):
                v[j] = (v[j] - q * piv[j]) % modulus
    return not any(v)


def _v2m(x, modulus):
    x %= modulus
    if x == 0:
        return modulus.bit_length() - 1
    v = 0
    while x % 2 == 0:
        x //= 2
        v += 1
    return v


# -- public ops -------------------------------------------------------------------


def norm_element(group: DerivativeGroup, q: int) -> GroupRingElt:
    return group.norm_element(q)


def derivative_element(group: DerivativeGroup, q: int) -> GroupRingElt:
    return group.derivative_element(q)


def derivative_product(group: DerivativeGroup, primes) -> GroupRingElt:
    return group.derivative_product(primes)


def telescope_check(group: DerivativeGroup, q: int) -> bool:
    return group.telescope_check(q)


def kolyvagin_derivative(sys: SyntheticEulerSystem, primes) -> dict:
    return sys.kolyvagin_derivative(primes)


def invariance_check(sys: SyntheticEulerSystem, primes) -> bool:
    """kappa(r) descends: (tau_q - 1) D_r x_r in MV + relations for q | r."""
    primes = _level_key(primes)
    if len(set(primes)) != len(primes):
        raise NotSquarefree(f"repeated auxiliary prime in {primes}")
    D = sys.group.derivative_product(primes)
    x = sys.x_vector(primes)
    for q in primes:
        tau = GroupRingElt(sys.group, {sys.group.tau(q, 1): 1})
        elt = (tau - sys.group.one()) * D
        vec = sys.apply(elt, x)
        if not sys.membership(vec):
            return False
    return True


def classes_equal(sys: SyntheticEulerSystem, va: dict, vb: dict) -> bool:
    diff = dict(va)
    for k, v in vb.items():
        diff[k] = diff.get(k, 0) - v
    return sys.membership(diff)


# -- local data -----------------------------------------------------------------


@dataclass
class LocalDatum:
    """Valuation (and residue) data at one auxiliary prime.

    I_q is the free Z[Delta]-module on one place Q; maps are given on the
    designated level generators / base generators and extended
    Delta-equivariantly, with every tau acting trivially on I_q.
    """

    group: DerivativeGroup
    q: int
    val_on_levels: dict = field(default_factory=dict)   # level tuple -> vector
    val_on_base: dict = field(default_factory=dict)     # gen index -> vector
    res_on_levels: dict = field(default_factory=dict)
    res_on_base: dict = field(default_factory=dict)

    def _vector_of(self, table_levels, table_base, key):
        delta = self.group.delta
        zero = {d: 0 for d in delta.elements()}
        if key[0] == "b":
            _, d, j = key
            base = table_base.get(j)
            if base is None:
                return dict(zero)
            return {delta.mul(d, dd): c for dd, c in base.items()}
        _, level, legs, d = key
        base = table_levels.get(level)
        if base is None:
            return dict(zero)
        return {delta.mul(d, dd): c for dd, c in base.items()}

    def _map(self, table_levels, table_base, vec: dict) -> dict:
        M = self.group.M
        out = {d: 0 for d in self.group.delta.elements()}
        for key, c in vec.items():
            img = self._vector_of(table_levels, table_base, key)
            for d, v in img.items():
                out[d] = (out[d] + c * v) % M
        return out

    def bracket(self, vec: dict) -> dict:
        """[y]_q: the class of the valuation vector in I_q / M I_q."""
        return self._map(self.val_on_levels, self.val_on_base, vec)

    def phi(self, vec: dict) -> dict:
        """phi_q on ker [.]_q, via the declared residue data."""
        br = self.bracket(vec)
        if any(br.values()):
            raise DomainError("phi_q is defined on the kernel of [.]_q only")
        return self._map(self.res_on_levels, self.res_on_base, vec)


def bracket_q(sys: SyntheticEulerSystem, vec: dict, datum: LocalDatum) -> dict:
    if datum.group is not sys.group:
        raise UndefinedDatum("datum declared for a different group")
    return datum.bracket(vec)


def phi_q(sys: SyntheticEulerSystem, vec: dict, datum: LocalDatum) -> dict:
    if datum.group is not sys.group:
        raise UndefinedDatum("datum declared for a different group")
    return datum.phi(vec)


# -- randomized constructions -----------------------------------------------------


def random_system(seed: int, s: int, l: int, delta_orders=(2,), base_gens: int = 2,
                  corrupt: bool = False) -> SyntheticEulerSystem:
    """Axiom-satisfying synthetic system from a seed; optionally corrupted.

    The corruption adds a base-level vector z to one norm relation; z is
    resampled until its class in V/(MV + relations) is nonzero, which makes
    the negative control genuinely violate the norm axiom.
    """
    rng = random.Random(seed)
    delta = FiniteAbelianGroup(delta_orders)
    M = 2 ** l
    frob = []
    for i in range(s):
        row = [rng.randrange(M) for _ in range(s)]
        row[i] = 0
        frob.append(tuple(row))
    group = DerivativeGroup(s, l, delta, frob)
    base_rows = []
    for j in range(base_gens):
        # even coefficients only: odd corruption vectors then always carry a
        # nonzero class, which keeps negative controls detectable
        row = {}
        d = tuple(rng.randrange(o) for o in delta_orders)
        row[("b", d, j)] = 2 * rng.randrange(1, M) % M if M > 2 else 2
        row[("b", delta.identity, rng.randrange(base_gens))] = \
            2 * rng.randrange(0, max(M // 2, 1))
        base_rows.append({k: v for k, v in row.items() if v % M})
    base_rows = [r for r in base_rows if r]
    sys = SyntheticEulerSystem(group, base_gens, base_rows)
    if not corrupt or s == 0:
        return sys
    # corrupt the bottom norm relation N_q x_q = (Frob_q - 1) x_(); deeper
    # corruptions can be annihilated mod M by the derivative weights, the
    # bottom one is probed exactly by the invariance of kappa({q})
    q = rng.randrange(s)
    for _ in range(40):
        z = {("b", tuple(rng.randrange(o) for o in delta_orders),
              rng.randrange(base_gens)): 1 + 2 * rng.randrange(M // 2)}
        if not sys.membership(dict(z)):
            return SyntheticEulerSystem(group, base_gens, base_rows,
                                        corruption=z, corrupt_at=((), q))
    raise RuntimeError("could not find a detectable corruption")
