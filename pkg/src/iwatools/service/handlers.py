"""Service handlers: pure request-model -> response-model functions.

The FastAPI routes and the CLI both call these, so batch runs and the
long-running service cannot drift apart."""

from __future__ import annotations

from .. import jsonio
from ..errors import AlgebraError
from ..padic import PadicContext
from ..series import BaseRing
from ..cyclotomic import invariant_identity_check
from ..mahler import dirac, moment, pushforward_scale, restrict_to_units
from ..coleman import coleman_tilde
from ..galois import iwasawa_function, lp_value
from ..lambda_modules import char_ideal
from ..euler import (
    SyntheticEulerSystem,
    DerivativeGroup,
    invariance_check,
    kolyvagin_derivative,
    random_system,
)
from ..galois import FiniteAbelianGroup
from . import models


def prepare(req: models.SeriesRequest) -> models.PrepareResponse:
    s = jsonio.series_from_payload(req.series)
    w = s.prepare()
    return models.PrepareResponse(mu=w.mu, lam=w.lam,
                                  P=jsonio.series_to_payload(w.P),
                                  U=jsonio.series_to_payload(w.U))


def mulam(req: models.SeriesRequest) -> models.MuLambdaResponse:
    ml = jsonio.series_from_payload(req.series).mu_lambda()
    return models.MuLambdaResponse(mu=ml.mu, lam=ml.lam,
                                   lambda_at_window_edge=ml.lambda_at_window_edge)


def divide(req: models.DivideRequest) -> models.DivideResponse:
    f = jsonio.series_from_payload(req.series)
    p = jsonio.series_from_payload(req.divisor)
    if p.poly_degree is None:
        deg = max((i for i, c in enumerate(p.coeffs)
                   if not c.is_zero_at_precision()), default=0)
        p.poly_degree = deg
    q, r = f.weierstrass_divide(p)
    return models.DivideResponse(quotient=jsonio.series_to_payload(q),
                                 remainder=jsonio.series_to_payload(r))


def _parse_levels(spec: str):
    if ".." in spec:
        lo, hi = spec.split("..")
        return range(int(lo), int(hi) + 1)
    return [int(spec)]


def invariants(req: models.InvariantsRequest) -> models.InvariantsResponse:
    s = jsonio.series_from_payload(req.series)
    rows = []
    for n in _parse_levels(req.levels):
        rep = invariant_identity_check(s, n)
        rows.append(models.InvariantRow(n=rep.n, lhs=rep.lhs, rhs=rep.rhs,
                                        match=rep.match))
    return models.InvariantsResponse(rows=rows)


def mahler(req: models.MahlerRequest) -> models.MeasureResponse:
    ctx = PadicContext(req.p, req.N)
    ring = BaseRing(ctx)
    nu = None
    for pt in req.points:
        d = dirac(ring, int(pt["a"]), req.M).scale(ctx.integer(int(pt.get("coef", 1))))
        nu = d if nu is None else nu + d
    if nu is None:
        nu = dirac(ring, 0, req.M).scale(ctx.integer(0))
    return models.MeasureResponse(measure=jsonio.measure_to_payload(nu))


def restrict(req: models.MeasureRequest) -> models.MeasureResponse:
    nu = jsonio.measure_from_payload(req.measure)
    return models.MeasureResponse(
        measure=jsonio.measure_to_payload(restrict_to_units(nu)))


def pushforward(req: models.PushforwardRequest) -> models.MeasureResponse:
    nu = jsonio.measure_from_payload(req.measure)
    return models.MeasureResponse(
        measure=jsonio.measure_to_payload(pushforward_scale(nu, req.u)))


def moment_of(req: models.MomentRequest) -> models.ScalarResponse:
    nu = jsonio.measure_from_payload(req.measure)
    return models.ScalarResponse(value=jsonio.scalar_to_payload(moment(nu, req.m)))


def coleman(req: models.ColemanRequest) -> models.MeasureResponse:
    g = jsonio.series_from_payload(req.series)
    return models.MeasureResponse(
        measure=jsonio.measure_to_payload(coleman_tilde(g)))


def lp(req: models.LpRequest) -> models.ScalarResponse:
    pm = jsonio.galois_from_payload(req.measure)
    chi = jsonio.character_from(req.chi, pm.group, pm.numerator.ring.ctx)
    value = lp_value(pm, chi, req.s, kappa_gen=req.kappa_gen)
    return models.ScalarResponse(value=jsonio.scalar_to_payload(value))


def iwfun(req: models.IwfunRequest) -> models.SeriesOverDResponse:
    pm = jsonio.galois_from_payload(req.measure)
    chi = jsonio.character_from(req.chi, pm.group, pm.numerator.ring.ctx)
    F = iwasawa_function(pm, chi, kappa_gen=req.kappa_gen)
    return models.SeriesOverDResponse(series=jsonio.series_to_payload(F))


def charideal(req: models.CharidealRequest) -> models.CharidealResponse:
    mod = jsonio.matrix_from_payload(req.matrix)
    ci = char_ideal(mod)
    return models.CharidealResponse(mu=ci.mu, lam=ci.lam,
                                    P=jsonio.series_to_payload(ci.P))


def _system_from_scenario(scenario: dict) -> SyntheticEulerSystem:
    seed = int(scenario.get("seed", 0))
    s = int(scenario.get("s", 1))
    l = int(scenario.get("l", 1))
    delta = tuple(scenario.get("delta", [2]))
    base_gens = int(scenario.get("base_gens", 2))
    corrupt = bool(scenario.get("corrupt", False))
    sys = random_system(seed, s=s, l=l, delta_orders=delta,
                        base_gens=base_gens, corrupt=corrupt)
    if "frobenius" in scenario:
        group = DerivativeGroup(s, l, FiniteAbelianGroup(delta),
                                [tuple(f) for f in scenario["frobenius"]])
        sys = SyntheticEulerSystem(group, sys.base_gens, sys.base_rows,
                                   sys.corruption, sys.corrupt_at)
    return sys


def euler(req: models.EulerRequest) -> models.EulerResponse:
    sys = _system_from_scenario(req.scenario)
    if req.check == "telescope":
        ok = all(sys.group.telescope_check(q) for q in range(sys.group.s))
        return models.EulerResponse(ok=ok)
    if req.check == "invariance":
        ok = invariance_check(sys, tuple(req.r))
        return models.EulerResponse(ok=ok)
    if req.check == "kappa":
        vec = kolyvagin_derivative(sys, tuple(req.r))
        pretty = {str(k): v for k, v in sorted(vec.items(), key=lambda kv: str(kv[0]))}
        return models.EulerResponse(ok=True, detail={"class": pretty})
    raise AlgebraError(f"unknown euler check {req.check!r}")
