from sanic import Blueprint

# Import route modules
from . import combinatorics, distributions, divergences, limits

# Group all API v1 blueprints under a common prefix
api_v1_group = Blueprint.group(
    distributions.bp, combinatorics.bp, divergences.bp, limits.bp, url_prefix='/api/v1'
)
