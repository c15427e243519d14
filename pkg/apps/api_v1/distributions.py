from sanic import Blueprint

from schemas.run import Command
from .common import execute

# Blueprint for the q-binomial distribution and its local limit
bp = Blueprint('distributions_v1')


@bp.post('/pmf')
async def pmf(request):
    """
    Tabulate the q-binomial probability mass function.

    Request body:
        - q: Deformation index in (0, 2) (required)
        - n: Number of trials (required)
        - r: Success parameter (default 0.5)
        - mode: "exact" or "shift" (default "shift")

    Returns:
        CommandResult JSON with columns k, x_k, qlog_weight, prob, scaled_density
    """
    return await execute(request, Command.PMF)


@bp.post('/clt')
async def clt(request):
    """
    q-log residuals of the local limit theorem.

    Request body:
        - q, n (required); r, window, mode (optional)
    """
    return await execute(request, Command.CLT)
