import asyncio

from sanic import Request
from sanic.response import json

from config import MAX_API_N
from exceptions import ConstraintError, RangeError
from schemas.run import Command, RunConfig
from services.runner import run_command

# Body fields accepted by every experiment endpoint
BODY_FIELDS = {"q", "r", "n", "n_list", "x", "window", "mode", "workers"}


def config_from_body(request: Request, command: Command) -> RunConfig:
    """
    Build a RunConfig from the JSON body of a request.

    Raises:
        ConstraintError: On a non-object body or unknown fields
        RangeError: If n exceeds MAX_API_N
        ValidationError: If RunConfig rejects the values
    """
    body = request.json or {}
    if not isinstance(body, dict):
        raise ConstraintError("request body must be a JSON object")
    unknown = sorted(set(body) - BODY_FIELDS)
    if unknown:
        raise ConstraintError("unknown fields in request body", {"fields": unknown})
    config = RunConfig(command=command, **body)
    largest = max([config.n or 0, *(config.n_list or ())])
    if largest > MAX_API_N:
        raise RangeError(f"n above the API limit of {MAX_API_N}", {"n": largest, "max_n": MAX_API_N})
    return config


async def execute(request: Request, command: Command):
    """Validate the body, run the experiment off the event loop and return the artifact."""
    config = config_from_body(request, command)
    result = await asyncio.to_thread(run_command, config)
    return json(result.model_dump(mode="json"))
