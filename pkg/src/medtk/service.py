"""HTTP service exposing the verification toolkit.

Thin wrapper: every endpoint validates its payload with pydantic, calls
the corresponding library function, and returns the same JSON the CLI
prints.  No state is kept between requests.
"""

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .graphs import FiniteGraph, CapExceeded
from .median import certify_median, MedianFailure
from .wallspace import Wallspace, cubulate
from .groups import Presentation, fwn_virtually_abelian, LimitExceeded
from .scenarios import run_scenario, SCENARIOS

app = FastAPI(title="median graph verification toolkit")


class GraphPayload(BaseModel):
    n: int = Field(ge=0)
    edges: list[list[int]]


class WallspacePayload(BaseModel):
    points: int = Field(ge=0)
    walls: list[list[int]]


class PresentationPayload(BaseModel):
    generators: int = Field(ge=0)
    relators: list[list[int]]


class FwRequest(BaseModel):
    presentation: PresentationPayload
    n: int = Field(ge=1)


class ScenarioRequest(BaseModel):
    params: dict = Field(default_factory=dict)


def _wrap(fn):
    try:
        return fn()
    except (CapExceeded, LimitExceeded) as e:
        raise HTTPException(status_code=422, detail={"kind": "resource", "error": str(e)})
    except (ValueError, KeyError) as e:
        raise HTTPException(status_code=400, detail={"kind": "input", "error": str(e)})


@app.get("/scenarios")
def list_scenarios():
    return {"scenarios": sorted(SCENARIOS)}


@app.post("/scenario/{name}")
def scenario(name: str, req: ScenarioRequest):
    return _wrap(lambda: run_scenario(name, req.params).to_json())


@app.post("/check-median")
def check_median(payload: GraphPayload):
    def run():
        g = FiniteGraph(payload.n, [tuple(e) for e in payload.edges])
        result = certify_median(g)
        if isinstance(result, MedianFailure):
            return {
                "median": False,
                "reason": result.reason,
                "triple": list(result.triple) if result.triple else None,
                "median_count": result.median_count,
            }
        return {
            "median": True,
            "hyperplanes": len(result.hyperplanes),
        }

    return _wrap(run)


@app.post("/cubulate")
def cubulate_endpoint(payload: WallspacePayload):
    def run():
        ws = Wallspace(payload.points, tuple(frozenset(w) for w in payload.walls))
        mg, point_map = cubulate(ws)
        return {
            "graph": mg.graph.to_json(),
            "point_map": {str(p): v for p, v in sorted(point_map.items())},
            "hyperplanes": len(mg.hyperplanes),
        }

    return _wrap(run)


@app.post("/fw-abelian")
def fw_abelian(req: FwRequest):
    def run():
        pres = Presentation(
            req.presentation.generators,
            tuple(tuple(r) for r in req.presentation.relators),
        )
        verdict = fwn_virtually_abelian(pres, req.n)
        out = {"holds": verdict.holds, "n": verdict.n}
        if not verdict.holds:
            w = verdict.witness
            out["subgroup_index"] = verdict.subgroup_index
            out["witness"] = {
                "sigma": list(w.sigma),
                "lam": [str(x) for x in w.lam],
                "word": list(w.word),
                "value": str(w.value),
            }
        out["note"] = verdict.note
        return out

    return _wrap(run)
