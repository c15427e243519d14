from sanic import Blueprint

from schemas.run import Command
from .common import execute

# Blueprint for the n-sweep experiments
bp = Blueprint('limits_v1')


@bp.post('/ldp')
async def ldp(request):
    """
    Scaled q-log tail against the large-deviation rate.

    Request body:
        - q, x, n_list (required); r, mode (default "exact"), workers (optional)
    """
    return await execute(request, Command.LDP)


@bp.post('/collapse')
async def collapse(request):
    """
    Scaled densities and q-Gaussian fits for several n.

    Request body:
        - q (required); r, n_list, window, mode, workers (optional)
    """
    return await execute(request, Command.COLLAPSE)
