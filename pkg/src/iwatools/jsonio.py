"""Codecs between the wire/file JSON payloads and the library objects.

Series travel as arrays of scalar literals (`p^v * m mod p^k`) plus window
metadata; Galois measures as H-shape, component map keyed by exponent tuples
rendered "(a,b)", and a symbolic denominator list.  Everything is plain dicts
so the same payloads serve files, the CLI and the HTTP service.
"""

from __future__ import annotations

from .padic import PadicContext, from_text
from .series import BaseRing, IwasawaSeries
from .cyclotomic import CycElt
from .mahler import SUPPORT_ALL, UnitMeasure
from .galois import (
    CharacterOfH,
    DenominatorTerm,
    FiniteAbelianGroup,
    GaloisMeasure,
    PseudoMeasure,
)
from .lambda_modules import PresentedModule


class PayloadError(ValueError):
    """Malformed input payload (exit code 2 territory)."""


def context_of(payload) -> PadicContext:
    try:
        return PadicContext(int(payload["p"]), int(payload["N"]))
    except (KeyError, TypeError, ValueError) as e:
        raise PayloadError(f"bad context fields: {e}") from e


def series_to_payload(s: IwasawaSeries) -> dict:
    ring = s.ring
    out = {"p": ring.p, "N": ring.ctx.N, "M": s.M}
    if getattr(ring, "is_base", False):
        out["coeffs"] = [c.to_text() for c in s.coeffs]
        if s.poly_degree is not None:
            out["poly_degree"] = s.poly_degree
    else:
        out["conductor"] = ring.m
        out["coeffs"] = [c.to_texts() for c in s.coeffs]
    return out


def series_from_payload(payload) -> IwasawaSeries:
    ctx = context_of(payload)
    ring = BaseRing(ctx)
    try:
        coeffs = [from_text(ctx, t) for t in payload["coeffs"]]
        M = int(payload.get("M", len(coeffs)))
    except (KeyError, TypeError, ValueError) as e:
        raise PayloadError(f"bad series payload: {e}") from e
    deg = payload.get("poly_degree")
    return IwasawaSeries(ring, coeffs, M, None if deg is None else int(deg))


def scalar_to_payload(x) -> dict:
    if isinstance(x, CycElt):
        return {"conductor": x.ring.m, "coeffs": x.to_texts()}
    return {"value": x.to_text(), "digits": x.digits()}


def measure_to_payload(nu: UnitMeasure) -> dict:
    out = series_to_payload(nu.series)
    out["support"] = nu.support
    return out


def measure_from_payload(payload) -> UnitMeasure:
    s = series_from_payload(payload)
    return UnitMeasure(s, payload.get("support", SUPPORT_ALL))


def _h_key(h) -> str:
    return "(" + ",".join(str(x) for x in h) + ")"


def _h_parse(key, rank) -> tuple:
    body = key.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    parts = [x for x in body.split(",") if x.strip() != ""]
    if len(parts) != rank:
        raise PayloadError(f"H-element {key!r} needs {rank} exponents")
    return tuple(int(x) for x in parts)


def galois_to_payload(pm: PseudoMeasure) -> dict:
    nu = pm.numerator
    out = {
        "p": nu.ring.p,
        "N": nu.ring.ctx.N,
        "M": nu.M,
        "H": list(nu.group.orders),
        "components": {
            _h_key(h): [c.to_text() for c in s.coeffs]
            for h, s in sorted(nu.components.items())
        },
        "denominator": [
            {"kind": t.kind, "k": t.sigma[0], "h": list(t.sigma[1]), "n": t.n}
            for t in pm.denominator
        ],
    }
    return out


def galois_from_payload(payload) -> PseudoMeasure:
    ctx = context_of(payload)
    ring = BaseRing(ctx)
    try:
        H = FiniteAbelianGroup(payload["H"])
        M = int(payload["M"])
    except (KeyError, TypeError, ValueError) as e:
        raise PayloadError(f"bad measure payload: {e}") from e
    nu = GaloisMeasure(H, ring, M)
    for key, coeffs in payload.get("components", {}).items():
        h = _h_parse(key, len(H.orders))
        series = IwasawaSeries(ring, [from_text(ctx, t) for t in coeffs], M)
        nu.set_component(h, series)
    pm = PseudoMeasure(nu)
    for term in payload.get("denominator", []):
        try:
            pm = pm.adjoin_term(DenominatorTerm(
                term["kind"], (int(term["k"]), tuple(term["h"])),
                int(term.get("n", 0))))
        except KeyError as e:
            raise PayloadError(f"bad denominator term: {e}") from e
    return pm


def character_from(payload_chi, group: FiniteAbelianGroup, ctx) -> CharacterOfH:
    if isinstance(payload_chi, str):
        exps = [int(x) for x in payload_chi.split(",")]
    else:
        exps = [int(x) for x in payload_chi]
    if len(exps) != len(group.orders):
        raise PayloadError(
            f"character needs {len(group.orders)} exponents, got {len(exps)}")
    return CharacterOfH(group, exps, ctx)


def matrix_to_payload(mod: PresentedModule) -> dict:
    return {
        "p": mod.ring.p,
        "N": mod.ring.ctx.N,
        "M": mod.M,
        "entries": [[[c.to_text() for c in s.coeffs] for s in row]
                    for row in mod.matrix],
    }


def matrix_from_payload(payload) -> PresentedModule:
    ctx = context_of(payload)
    ring = BaseRing(ctx)
    try:
        M = int(payload["M"])
        entries = payload["entries"]
    except (KeyError, TypeError) as e:
        raise PayloadError(f"bad matrix payload: {e}") from e
    rows = []
    for row in entries:
        rows.append([IwasawaSeries(ring, [from_text(ctx, t) for t in coeffs], M)
                     for coeffs in row])
    if not rows:
        return PresentedModule([], ring, M)
    return PresentedModule(rows)


def error_payload(err: Exception) -> dict:
    return {"error": {"type": type(err).__name__, "detail": str(err)}}
