from sanic import Blueprint

from schemas.run import Command
from .common import execute

bp = Blueprint('divergences_v1')


@bp.post('/divergence')
async def divergence(request):
    """
    q- and alpha-divergence of (x, 1-x) from (r, 1-r), with the rate function.

    Request body:
        - q, x (required); r (optional)
    """
    return await execute(request, Command.DIVERGENCE)
