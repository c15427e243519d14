import time

from pydantic import ValidationError
from sanic import Request
from sanic.log import logger
from sanic.response import json

from exceptions import InvalidParameterError, NumericFailure


async def start_timer(request: Request):
    """Record when the request arrived."""
    request.ctx.started = time.perf_counter()


async def log_timing(request: Request, response):
    """Log method, path, status and elapsed milliseconds of every request."""
    started = getattr(request.ctx, "started", None)
    if started is None:
        return
    elapsed = (time.perf_counter() - started) * 1000.0
    logger.info("%s %s -> %s in %.1f ms", request.method, request.path, response.status, elapsed)


async def invalid_parameter_handler(request: Request, exception: InvalidParameterError):
    logger.warning("invalid parameter on %s: %s", request.path, exception.message)
    return json(exception.to_dict(), status=400)


async def validation_error_handler(request: Request, exception: ValidationError):
    """
    Report pydantic validation errors of the request body.

    Returns:
        400 with one {field, message} entry per failed constraint
    """
    details = [
        {"field": ".".join(str(part) for part in error["loc"]) or None, "message": error["msg"]}
        for error in exception.errors(include_url=False, include_context=False)
    ]
    logger.warning("validation failed on %s: %d error(s)", request.path, len(details))
    return json({"error": "validation failed", "type": "ValidationError", "payload": {"details": details}}, status=400)


async def numeric_failure_handler(request: Request, exception: NumericFailure):
    logger.error("numeric failure on %s: %s %s", request.path, exception.message, exception.payload)
    return json(exception.to_dict(), status=422)
