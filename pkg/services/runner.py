"""
Command orchestration shared by the CLI and the HTTP API.

Each handler turns a RunConfig into a CommandResult with fixed columns.
Summaries are recomputed from (config, rows) only, so a re-read JSON
artifact yields the same summary.
"""
import logging
import math
from typing import Callable, Dict, List

import numpy as np

from config import C_Q_MIN_REFERENCE
from exceptions import ConstraintError
from schemas.deformation import DeformationParameter
from schemas.distribution import QBinomialSpec
from schemas.divergence import ProbVector
from schemas.limits import ScaledDensity
from schemas.run import Cell, Command, CommandResult, RunConfig
from services.divergence import alpha_divergence, alpha_from_q, q_divergence, rate_function
from services.limits import (
    clt_residuals,
    collapse_experiment,
    collapse_sup_distance,
    ldp_convergence_series,
    residual_decay_slope,
)
from services.qbinomial import build_pmf, peak_probability
from services.qcombinatorics import (
    build_factorial_table,
    estimate_c_q,
    q_ln_factorial,
    stirling_leading,
    stirling_refined,
)

logger = logging.getLogger(__name__)

COLUMNS = {
    Command.PMF: ["k", "x_k", "qlog_weight", "prob", "scaled_density"],
    Command.STIRLING: ["n", "exact", "leading", "refined", "err_leading", "err_refined"],
    Command.DIVERGENCE: ["q", "alpha", "D_q", "D_alpha", "rate"],
    Command.LDP: ["n", "scaled_stat", "target", "abs_err"],
    Command.CLT: ["k", "x_k", "residual"],
    Command.COLLAPSE: ["series_id", "x", "g", "fit_beta", "fit_amplitude", "sup_error"],
}


def _param(config: RunConfig) -> DeformationParameter:
    return DeformationParameter(q=config.q)


def _config_dump(config: RunConfig) -> Dict[str, Cell]:
    dump = config.model_dump(mode="json", exclude={"output_path", "input_path", "format", "workers"})
    dump["mode"] = config.effective_mode.value
    return dump


def _run_pmf(config: RunConfig) -> CommandResult:
    spec = QBinomialSpec(param=_param(config), n=config.n, r=config.r, mode=config.effective_mode)
    pmf = build_pmf(spec, build_factorial_table(spec.param, spec.n))
    density = pmf.sigma_q * pmf.probs
    rows = [
        [k, float(pmf.grid[k]), float(pmf.qlog_weights[k]), float(pmf.probs[k]), float(density[k])]
        for k in range(spec.n + 1)
    ]
    metadata = {
        "sigma_q": pmf.sigma_q,
        "peak_index": pmf.peak_index,
        "peak_probability": peak_probability(pmf),
        "norm_kind": pmf.norm_meta.kind,
        "qlog_offset": pmf.norm_meta.qlog_offset,
    }
    return _result(config, rows, metadata)


def _run_stirling(config: RunConfig) -> CommandResult:
    param = _param(config)
    table = build_factorial_table(param, max(config.n_list[-1], 2 * C_Q_MIN_REFERENCE))
    const = estimate_c_q(table, table.max_n // 2)
    rows = []
    for n in config.n_list:
        exact = q_ln_factorial(table, n)
        leading = stirling_leading(param, n)
        refined = stirling_refined(param, n, const)
        rows.append([n, exact, leading, refined, exact - leading, exact - refined])
    metadata = {"c_q": const.c_q, "estimation_n": const.estimation_n, "residual_bound": const.residual_bound}
    return _result(config, rows, metadata)


def _run_divergence(config: RunConfig) -> CommandResult:
    param = _param(config)
    p, r = ProbVector.binary(config.x), ProbVector.binary(config.r)
    alpha = alpha_from_q(param.q)
    rows = [[param.q, alpha, q_divergence(param, p, r), alpha_divergence(alpha, p, r), rate_function(param, config.x, config.r)]]
    return _result(config, rows, {})


def _run_ldp(config: RunConfig) -> CommandResult:
    series = ldp_convergence_series(
        _param(config), config.r, config.x, config.n_list, mode=config.effective_mode, max_workers=config.workers
    )
    rows = [
        [entry.n, entry.scaled_stat, series.target, abs(entry.scaled_stat - series.target)]
        for entry in series.entries
    ]
    return _result(config, rows, {"ldp_regime": series.ldp_regime})


def _run_clt(config: RunConfig) -> CommandResult:
    spec = QBinomialSpec(param=_param(config), n=config.n, r=config.r, mode=config.effective_mode)
    report = clt_residuals(spec, build_factorial_table(spec.param, spec.n), config.effective_window)
    rows = [[k, x, res] for k, x, res in report.points()]
    return _result(config, rows, {})


def _run_collapse(config: RunConfig) -> CommandResult:
    window = config.effective_window
    report = collapse_experiment(
        _param(config), config.r, config.effective_n_list, window, mode=config.effective_mode, max_workers=config.workers
    )
    rows = []
    for item in report.series:
        trimmed = item.density.within(window)
        series_id = f"n={item.n}"
        fit = item.fit
        rows.extend(
            [series_id, float(x), float(g), fit.beta, fit.amplitude, fit.sup_error]
            for x, g in zip(trimmed.x, trimmed.g)
        )
    return _result(config, rows, {})


def _summary_pmf(config: RunConfig, rows: List[List[Cell]]) -> Dict[str, Cell]:
    probs = [row[3] for row in rows]
    peak = max(range(len(probs)), key=lambda k: (probs[k], -k))
    floor_index = int(math.floor(config.n * config.r))
    return {
        "peak_probability": probs[floor_index],
        "peak_index": peak,
        "total_probability": math.fsum(probs),
    }


def _summary_stirling(config: RunConfig, rows: List[List[Cell]]) -> Dict[str, Cell]:
    errors = [abs(row[5]) for row in rows]
    slope = None
    if len(rows) >= 3 and all(err > 0.0 for err in errors):
        slope = residual_decay_slope([(row[0], err) for row, err in zip(rows, errors)])
    return {"max_abs_err_refined": max(errors), "refined_decay_slope": slope}


def _summary_divergence(config: RunConfig, rows: List[List[Cell]]) -> Dict[str, Cell]:
    return {"D_q": rows[0][2], "rate": rows[0][4]}


def _summary_ldp(config: RunConfig, rows: List[List[Cell]]) -> Dict[str, Cell]:
    errors = [row[3] for row in rows]
    tail = errors[-4:]
    target = rows[-1][2]
    return {
        "abs_err": errors[-1],
        "rel_err": errors[-1] / abs(target) if target else None,
        "error_nonincreasing": all(b <= a for a, b in zip(tail, tail[1:])),
    }


def _summary_clt(config: RunConfig, rows: List[List[Cell]]) -> Dict[str, Cell]:
    return {"max_abs_residual": max(abs(row[2]) for row in rows), "points": len(rows)}


def _summary_collapse(config: RunConfig, rows: List[List[Cell]]) -> Dict[str, Cell]:
    grouped: Dict[str, List[List[Cell]]] = {}
    for row in rows:
        grouped.setdefault(row[0], []).append(row)
    densities = [
        ScaledDensity(
            x=np.array([row[1] for row in group]),
            g=np.array([row[2] for row in group]),
            spacing=group[1][1] - group[0][1] if len(group) > 1 else 1.0,
        )
        for group in grouped.values()
    ]
    betas = [group[0][3] for group in grouped.values()]
    return {
        "beta_spread": (max(betas) - min(betas)) / min(betas),
        "sup_distance": collapse_sup_distance(densities, config.effective_window),
        "series": len(grouped),
    }


HANDLERS: Dict[Command, Callable[[RunConfig], CommandResult]] = {
    Command.PMF: _run_pmf,
    Command.STIRLING: _run_stirling,
    Command.DIVERGENCE: _run_divergence,
    Command.LDP: _run_ldp,
    Command.CLT: _run_clt,
    Command.COLLAPSE: _run_collapse,
}

SUMMARIES = {
    Command.PMF: _summary_pmf,
    Command.STIRLING: _summary_stirling,
    Command.DIVERGENCE: _summary_divergence,
    Command.LDP: _summary_ldp,
    Command.CLT: _summary_clt,
    Command.COLLAPSE: _summary_collapse,
}


def _result(config: RunConfig, rows: List[List[Cell]], metadata: Dict[str, Cell]) -> CommandResult:
    return CommandResult(
        command=config.command,
        config=_config_dump(config),
        columns=COLUMNS[config.command],
        rows=rows,
        summary=SUMMARIES[config.command](config, rows),
        metadata=metadata,
    )


def summarize(result: CommandResult) -> Dict[str, Cell]:
    """Recompute the summary of an artifact from its config and rows."""
    config = RunConfig(command=result.command, **{k: v for k, v in result.config.items() if k != "command"})
    return SUMMARIES[result.command](config, result.rows)


def run_command(config: RunConfig) -> CommandResult:
    """
    Run one experiment.

    Args:
        config: Validated run configuration (not the report command)

    Returns:
        CommandResult with rows in the command's fixed column order
    """
    if config.command is Command.REPORT:
        raise ConstraintError("report re-reads an artifact and has no handler")
    logger.info("running %s q=%r r=%r", config.command.value, config.q, config.r)
    return HANDLERS[config.command](config)
