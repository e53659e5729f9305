# api.py
from fastapi import FastAPI, HTTPException, Response
from typing import Any, Dict
import logging
import os
from .codec import (
    RELATION_SPACES,
    decode_point,
    decode_schedule,
    dumps,
    encode_descriptor,
    encode_schedule,
    encode_verdict,
    rational_arg,
    require_relation_space,
)
from .config import load_run_config
from .errors import InfeasibleScheduleError, RedlabError, ScheduleInvalidError
from .hierarchy import ReducibilityRegistry
from .models import DecideRequest, ReduceRequest, ScheduleRequest, VerifyRequest
from .reductions import MAPS, ensure_valid_schedule, gen_params, reduce_point, validate_schedule
from .relations import DECIDERS, H0Verdict, holds
from .verification import VerificationRunner, expand_suites, summary_line

# Configure logging
logging.basicConfig(
    level=os.getenv("LOG_LEVEL", "INFO"),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

# Create a logger
logger = logging.getLogger(__name__)

app = FastAPI(title="redlab")
registry = ReducibilityRegistry.seeded()


def _json(payload: Any) -> Response:
    # codec.dumps keeps 17 digits and spells out non-finite floats
    return Response(content=dumps(payload), media_type="application/json")


def _domain_error(e: RedlabError) -> HTTPException:
    detail: Dict[str, Any] = {"code": e.code, "message": e.message}
    if isinstance(e, InfeasibleScheduleError):
        detail["clause"] = e.clause
    if isinstance(e, ScheduleInvalidError):
        detail["clauses"] = e.clauses
    return HTTPException(status_code=400, detail=detail)


@app.post("/schedules")
async def create_schedule(request: ScheduleRequest):
    try:
        config = load_run_config(n_max=request.n_max, margin=request.margin)
        schedule = gen_params(request.flavor, request.base_p, config.n_max, config.margin, config.max_log_k)
        payload = encode_schedule(schedule)
        payload["clauses"] = [clause.model_dump() for clause in validate_schedule(schedule)]
        return _json(payload)
    except RedlabError as e:
        logger.warning(f"Schedule request rejected: {e}")
        raise _domain_error(e)
    except Exception as e:
        logger.error(f"Error generating schedule: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/decide/{relation}")
async def decide_relation(relation: str, request: DecideRequest):
    if relation not in DECIDERS:
        raise HTTPException(status_code=404, detail=f"Unknown relation {relation}, expected one of {sorted(RELATION_SPACES)}")
    try:
        a, b = decode_point(request.a), decode_point(request.b)
        require_relation_space(relation, {"a": a, "b": b})
        verdict = DECIDERS[relation](a, b)
        witness = verdict.witness if isinstance(verdict, H0Verdict) else None
        return _json(encode_verdict(holds(verdict), witness, verdict))
    except RedlabError as e:
        logger.warning(f"Decide request rejected: {e}")
        raise _domain_error(e)
    except Exception as e:
        logger.error(f"Error deciding {relation}: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/reduce/{map_name}")
async def reduce_endpoint(map_name: str, request: ReduceRequest):
    if map_name not in MAPS:
        raise HTTPException(status_code=404, detail=f"Unknown map {map_name}, expected one of {list(MAPS)}")
    try:
        config = load_run_config()
        descriptor = reduce_point(
            map_name,
            decode_point(request.point),
            schedule=decode_schedule(request.schedule) if request.schedule else None,
            base_p=rational_arg(request.base_p) if request.base_p is not None else None,
            p=rational_arg(request.p) if request.p is not None else None,
            cycle=decode_point(request.cycle) if request.cycle else None,
            n_max=config.n_max,
            margin=config.margin,
        )
        return _json(encode_descriptor(descriptor))
    except RedlabError as e:
        logger.warning(f"Reduce request rejected: {e}")
        raise _domain_error(e)
    except Exception as e:
        logger.error(f"Error applying {map_name}: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/verify/{suite}")
async def verify_endpoint(suite: str, request: VerifyRequest):
    try:
        suites = expand_suites(suite)
        config = load_run_config(seed=request.seed, cases=request.cases, n_max=request.n_max, samples=request.samples)
        schedule = ensure_valid_schedule(decode_schedule(request.schedule)) if request.schedule else None
        results = VerificationRunner(config, schedule).run(suites)
        return _json({
            "summary": summary_line(suite, results),
            "passed": all(r.holds for r in results),
            "results": [r.model_dump() for r in results],
        })
    except RedlabError as e:
        logger.warning(f"Verify request rejected: {e}")
        raise _domain_error(e)
    except Exception as e:
        logger.error(f"Error running suite {suite}: {e}")
        raise HTTPException(status_code=500, detail=str(e))


@app.get("/hierarchy/dot")
async def hierarchy_dot():
    return Response(content=registry.export_dot(), media_type="text/vnd.graphviz")


@app.get("/hierarchy/reachable")
async def hierarchy_reachable(source: str, target: str):
    try:
        return {
            "source": source,
            "target": target,
            "reachable": registry.reachable(source, target),
            "strict": registry.strictly_below(source, target),
        }
    except RedlabError as e:
        raise HTTPException(status_code=404, detail={"code": e.code, "message": e.message})
