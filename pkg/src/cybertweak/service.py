"""Local HTTP decision service for the policy-tuner UI.

Sessions live in memory.  Each session serializes its mutations: a solve or
feedback request while another is in flight returns 409.  What-if queries
never mutate session state.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field, replace

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse

from .colgen import CgConfig, cybertweak, greedytweak
from .model import (
    GameInstance,
    SolveResult,
    errors_only,
    instance_from_dict,
    validate,
)
from .special_cases import detect_case, solve_small_effort, solve_uniform_cost

SCHEMA_VERSION = 1

COST_MIN_FACTOR = 0.25
COST_MAX_FACTOR = 8.0


@dataclass
class Session:
    id: str
    instance: GameInstance
    original_costs: dict[str, float]
    current_result: SolveResult | None = None
    solved_method: str | None = None
    feedback_log: list[tuple[str, str, float]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _risk_levels(instance: GameInstance) -> dict[str, dict]:
    kappas = {w.id: w.kappa for w in instance.websites}
    top = max(kappas.values(), default=0.0)
    out = {}
    for wid, kap in kappas.items():
        score = 0.0 if top <= 0 else kap / top
        band = "Low" if score < 1 / 3 else ("Medium" if score < 2 / 3 else "High")
        out[wid] = {"score": score, "band": band}
    return out


def _solve(instance: GameInstance, method: str) -> SolveResult:
    if method == "auto":
        case = detect_case(instance)
        if case.which == "small_effort_budget":
            return solve_small_effort(instance)
        if case.which == "uniform_cost_unlimited_effort":
            return solve_uniform_cost(instance)
        return cybertweak(instance)
    if method == "cybertweak":
        return cybertweak(instance)
    if method == "greedytweak":
        return greedytweak(instance)
    raise HTTPException(status_code=400, detail=f"unknown method: {method}")


def _result_payload(session: Session) -> dict:
    result = session.current_result
    assert result is not None
    inst = session.instance
    risks = _risk_levels(inst)
    return {
        "schema_version": SCHEMA_VERSION,
        "session_id": session.id,
        "value": result.value,
        "lower_bound": result.lower_bound,
        "upper_bound": result.upper_bound,
        "method": result.method,
        "status": result.status,
        "sites": [
            {
                "id": w.id,
                "name": w.name,
                "t": w.t,
                "t_all": w.t_all,
                "c": w.c,
                "x": float(result.strategy.x[i]),
                "risk_score": risks[w.id]["score"],
                "risk_band": risks[w.id]["band"],
            }
            for i, w in enumerate(inst.websites)
        ],
    }


def create_app() -> FastAPI:
    app = FastAPI(title="policy tuner service")
    sessions: dict[str, Session] = {}

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    @app.exception_handler(HTTPException)
    async def with_schema_version(request, exc: HTTPException):
        detail = exc.detail if isinstance(exc.detail, dict) else {"error": exc.detail}
        return JSONResponse(
            status_code=exc.status_code,
            content={"schema_version": SCHEMA_VERSION, **detail},
        )

    @app.get("/healthz")
    def healthz():
        return {"schema_version": SCHEMA_VERSION, "status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict):
        try:
            instance = instance_from_dict(payload)
        except (ValueError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        problems = errors_only(validate(instance))
        if problems:
            raise HTTPException(
                status_code=400,
                detail={
                    "error": "validation failed",
                    "violations": [
                        {"website_id": v.website_id, "rule": v.rule} for v in problems
                    ],
                },
            )
        session_id = uuid.uuid4().hex
        sessions[session_id] = Session(
            id=session_id,
            instance=instance,
            original_costs={w.id: w.c for w in instance.websites},
        )
        return {"schema_version": SCHEMA_VERSION, "session_id": session_id}

    @app.get("/sessions/{session_id}")
    def get_session_state(session_id: str):
        session = get_session(session_id)
        body = {
            "schema_version": SCHEMA_VERSION,
            "session_id": session.id,
            "solved": session.current_result is not None,
            "budget_defender": session.instance.budget_defender,
            "feedback_log": [
                {"website_id": wid, "verdict": verdict, "timestamp": ts}
                for wid, verdict, ts in session.feedback_log
            ],
        }
        if session.current_result is not None:
            body["result"] = _result_payload(session)
        return body

    @app.post("/sessions/{session_id}/solve")
    def solve_session(session_id: str, body: dict | None = None):
        session = get_session(session_id)
        method = (body or {}).get("method", "auto")
        if not session.lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="solve in progress")
        try:
            session.current_result = _solve(session.instance, method)
            session.solved_method = method
        finally:
            session.lock.release()
        return _result_payload(session)

    @app.post("/sessions/{session_id}/feedback")
    def submit_feedback(session_id: str, body: dict):
        session = get_session(session_id)
        wid = body.get("website_id")
        verdict = body.get("verdict")
        if verdict not in ("Acceptable", "Degraded"):
            raise HTTPException(status_code=400, detail="verdict must be Acceptable or Degraded")
        try:
            idx = session.instance.index_of(wid)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown website: {wid}")
        if not session.lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="solve in progress")
        try:
            site = session.instance.websites[idx]
            original = session.original_costs[wid]
            if verdict == "Degraded":
                new_c = min(site.c * 2.0, original * COST_MAX_FACTOR)
            else:
                new_c = max(site.c / 2.0, original * COST_MIN_FACTOR)
            websites = list(session.instance.websites)
            websites[idx] = replace(site, c=new_c)
            session.instance = replace(session.instance, websites=tuple(websites))
            session.feedback_log.append((wid, verdict, time.time()))
            session.current_result = _solve(session.instance, session.solved_method or "auto")
        finally:
            session.lock.release()
        return {
            "schema_version": SCHEMA_VERSION,
            "website_id": wid,
            "old_c": site.c,
            "new_c": new_c,
            "result": _result_payload(session),
        }

    @app.get("/sessions/{session_id}/what-if")
    def what_if(session_id: str, budget_ratio: float = Query(...)):
        session = get_session(session_id)
        if not 0.0 <= budget_ratio <= 1.0:
            raise HTTPException(status_code=400, detail="budget_ratio must be in [0, 1]")
        full = session.instance.max_defender_budget
        scenario = session.instance.with_budget_defender(budget_ratio * full)
        result = _solve(scenario, session.solved_method or "auto")
        base = _solve(session.instance.with_budget_defender(0.0), session.solved_method or "auto")
        utility_ratio = 0.0 if base.value <= 0 else result.value / base.value
        return {
            "schema_version": SCHEMA_VERSION,
            "budget_ratio": budget_ratio,
            "value": result.value,
            "utility_ratio": utility_ratio,
        }

    return app
