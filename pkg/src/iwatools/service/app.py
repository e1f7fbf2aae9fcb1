"""FastAPI front door: one POST route per operation family.

Mathematical failures (AlgebraError) map to HTTP 422 with a structured error
object; malformed payloads (PayloadError) to 400.  Run with

    uvicorn iwatools.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import jsonio
from ..errors import AlgebraError
from . import handlers, models

app = FastAPI(title="iwatools",
              description="2-adic measures, Iwasawa series and characteristic "
                          "ideals as a stateless compute service")


@app.exception_handler(AlgebraError)
async def algebra_error_handler(request: Request, exc: AlgebraError):
    return JSONResponse(status_code=422, content=jsonio.error_payload(exc))


@app.exception_handler(jsonio.PayloadError)
async def payload_error_handler(request: Request, exc: jsonio.PayloadError):
    return JSONResponse(status_code=400, content=jsonio.error_payload(exc))


@app.post("/prepare", response_model=models.PrepareResponse)
def prepare(req: models.SeriesRequest):
    return handlers.prepare(req)


@app.post("/mulam", response_model=models.MuLambdaResponse)
def mulam(req: models.SeriesRequest):
    return handlers.mulam(req)


@app.post("/divide", response_model=models.DivideResponse)
def divide(req: models.DivideRequest):
    return handlers.divide(req)


@app.post("/invariants", response_model=models.InvariantsResponse)
def invariants(req: models.InvariantsRequest):
    return handlers.invariants(req)


@app.post("/mahler", response_model=models.MeasureResponse)
def mahler(req: models.MahlerRequest):
    return handlers.mahler(req)


@app.post("/restrict", response_model=models.MeasureResponse)
def restrict(req: models.MeasureRequest):
    return handlers.restrict(req)


@app.post("/pushforward", response_model=models.MeasureResponse)
def pushforward(req: models.PushforwardRequest):
    return handlers.pushforward(req)


@app.post("/moment", response_model=models.ScalarResponse)
def moment(req: models.MomentRequest):
    return handlers.moment_of(req)


@app.post("/coleman", response_model=models.MeasureResponse)
def coleman(req: models.ColemanRequest):
    return handlers.coleman(req)


@app.post("/lp", response_model=models.ScalarResponse)
def lp(req: models.LpRequest):
    return handlers.lp(req)


@app.post("/iwfun", response_model=models.SeriesOverDResponse)
def iwfun(req: models.IwfunRequest):
    return handlers.iwfun(req)


@app.post("/charideal", response_model=models.CharidealResponse)
def charideal(req: models.CharidealRequest):
    return handlers.charideal(req)


@app.post("/euler", response_model=models.EulerResponse)
def euler(req: models.EulerRequest):
    return handlers.euler(req)
