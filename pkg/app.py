from pydantic import ValidationError
from sanic import Sanic
from sanic.response import json

from config import DEBUG, APP_NAME, HOST, PORT
from exceptions import InvalidParameterError, NumericFailure
from middlewares.errors import (
    invalid_parameter_handler,
    log_timing,
    numeric_failure_handler,
    start_timer,
    validation_error_handler,
)
from apps.api_v1 import api_v1_group
from schemas.run import Command

# Initialize the Sanic application with the name from config
app = Sanic(APP_NAME)

# Request timing
app.middleware("request")(start_timer)
app.middleware("response")(log_timing)

# Map toolkit errors to HTTP statuses: bad input 400, numeric failure 422
app.exception(InvalidParameterError)(invalid_parameter_handler)
app.exception(ValidationError)(validation_error_handler)
app.exception(NumericFailure)(numeric_failure_handler)

# Register API version blueprints
app.blueprint(api_v1_group)


@app.route("/")
async def index(request):
    """
    List the experiment endpoints.

    Returns:
        JSON object with the service name and one POST path per command
    """
    commands = [command.value for command in Command if command is not Command.REPORT]
    return json({"service": APP_NAME, "commands": {name: f"/api/v1/{name}" for name in commands}})


# Run the application when executed directly
if __name__ == "__main__":
    app.run(host=HOST, port=PORT, debug=DEBUG)
