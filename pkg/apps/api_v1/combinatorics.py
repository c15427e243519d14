from sanic import Blueprint

from schemas.run import Command
from .common import execute

bp = Blueprint('combinatorics_v1')


@bp.post('/stirling')
async def stirling(request):
    """
    Compare the exact q-log factorial with its leading and refined approximations.

    Request body:
        - q: Deformation index (required)
        - n_list: Strictly increasing trial counts (required)
    """
    return await execute(request, Command.STIRLING)
