"""kingbound CLI: evaluate queueing bounds and verify them by simulation."""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click

from kingbound import __version__

logger = logging.getLogger(__name__)

FORMAT_CHOICE = click.Choice(["text", "json", "csv"])

# context for commands that accept trailing ``--name value`` formula parameters
_EXTRA_ARGS = dict(ignore_unknown_options=True, allow_extra_args=True)


def _fail(message: str, code: int = 2):
    click.echo("Error: %s" % message, err=True)
    sys.exit(code)


def _formula_params(options: tuple[str, ...], extra_args: list[str]) -> dict:
    """Merge ``-p key=value`` options with trailing ``--key value`` pairs.

    Exits with an error message on malformed input.
    """
    from kingbound.utils import parse_extra_args, parse_kv_options
    try:
        params = parse_kv_options(options)
        params.update(parse_extra_args(extra_args))
    except ValueError as e:
        _fail(str(e))
    return params


def _distribution(text: str, what: str):
    from kingbound.dists import DistributionError, from_literal
    from kingbound.utils import parse_distribution_literal
    try:
        return from_literal(parse_distribution_literal(text))
    except (ValueError, DistributionError) as e:
        _fail("%s: %s" % (what, e))


def _read_mapping(path: str) -> dict:
    from vpd.next.util import read_yaml
    p = Path(path)
    if not p.is_file():
        _fail("config file not found: %s" % path)
    data = read_yaml(str(p))
    if not isinstance(data, dict):
        _fail("config file must contain a mapping: %s" % path)
    return data


def _get_user_config(config_path: str | None):
    from kingbound.config import KingboundConfig
    return KingboundConfig(Path(config_path)) if config_path else KingboundConfig()


# TODO: converge logging with SAF logging
def _setup_logging(verbose: bool):
    """Configure logging based on verbosity.

    Uses explicit handler setup instead of ``logging.basicConfig`` which
    is silently a no-op when the root logger already has handlers.
    """
    level = logging.DEBUG if verbose else logging.INFO
    fmt = ("%(asctime)s [%(levelname)s] %(name)s: %(message)s" if verbose
           else "%(message)s")

    root = logging.getLogger()
    root.setLevel(level)
    for handler in root.handlers[:]:
        root.removeHandler(handler)
    handler = logging.StreamHandler()
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(fmt, datefmt="%H:%M:%S"))
    root.addHandler(handler)

    from kingbound.utils import suppress_noisy_loggers
    suppress_noisy_loggers()


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Enable verbose/debug output")
@click.version_option(__version__, prog_name="kingbound")
@click.pass_context
def main(ctx, verbose):
    """kingbound: explicit bounds for FCFS GI/GI/n queues, checked by simulation."""
    ctx.ensure_object(dict)
    ctx.obj["verbose"] = verbose
    _setup_logging(verbose)


# ---------------------------------------------------------------------------
# bound / sweep
# ---------------------------------------------------------------------------


@main.command(context_settings=_EXTRA_ARGS)
@click.argument("name", required=False)
@click.option("--list", "list_only", is_flag=True, help="List formula names and their parameters")
@click.option("--param", "-p", "options", multiple=True, help="Formula parameter: -p key=value (repeatable)")
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="text", help="Output format")
@click.pass_context
def bound(ctx, name, list_only, options, fmt):
    """Evaluate a named bound formula.

    Parameters may be given as trailing --name value pairs or with -p.

    Examples:

      kingbound bound main-tail --r 3 --mS 1 --mA 1 --x 10

      kingbound bound kingman -p cA2=1 -p cS2=1 -p rho=0.9

      kingbound bound lemma-moment --id pooled-central --r 3 --ESr 6 --theta 0.25 --gap 0.2 --k 10 --t 1
    """
    from kingbound.bounds import BoundError, evaluate_formula, list_formulas
    from kingbound.utils.cli_formatters import (
        format_csv, format_formula_result, format_formula_table, format_json, result_payload, result_rows,
    )
    from kingbound.xnum import XnumError

    if list_only or not name:
        if fmt == "json":
            click.echo(format_json({f.name: f.param_names() for f in list_formulas()}))
        else:
            click.echo(format_formula_table(list_formulas()))
        return

    params = _formula_params(options, ctx.args)
    try:
        result = evaluate_formula(name, params)
    except (BoundError, XnumError) as e:
        _fail(str(e))

    if fmt == "json":
        click.echo(format_json(result_payload(result)))
    elif fmt == "csv":
        rows = [(result.name,) + row for row in result_rows(result)]
        click.echo(format_csv(("formula", "output", "exp10", "display", "probability"), rows))
    else:
        click.echo(format_formula_result(result))


@main.command(context_settings=_EXTRA_ARGS)
@click.argument("name")
@click.option("--param", "sweep_param", required=True, help="Parameter to vary")
@click.option("--values", "values_text", required=True, help="Comma-separated values, e.g. 1,10,100")
@click.option("-p", "options", multiple=True, help="Fixed parameter: -p key=value (repeatable)")
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="text", help="Output format")
@click.pass_context
def sweep(ctx, name, sweep_param, values_text, options, fmt):
    """Evaluate a bound formula over a grid of one parameter.

    Examples:

      kingbound sweep main-tail --param x --values 1,10,100 --r 3

      kingbound sweep mean --param rho --values 0.5,0.9,0.99 --r 4 -p mS=2 -p mA=2
    """
    from kingbound.bounds import BoundError, evaluate_formula
    from kingbound.utils import parse_float_list
    from kingbound.utils.cli_formatters import format_csv, format_json, format_table, result_payload, result_rows
    from kingbound.xnum import XnumError

    params = _formula_params(options, ctx.args)
    try:
        grid = parse_float_list(values_text)
    except ValueError as e:
        _fail(str(e))
    if not grid:
        _fail("--values must name at least one value")

    results = []
    try:
        for value in grid:
            results.append((value, evaluate_formula(name, dict(params, **{sweep_param: value}))))
    except (BoundError, XnumError) as e:
        _fail(str(e))

    if fmt == "json":
        click.echo(format_json({"formula": name, "param": sweep_param,
                                "points": [dict(result_payload(r), value=value) for value, r in results]}))
        return
    headers = (sweep_param, "output", "exp10", "display", "probability")
    rows = [("%g" % value,) + row for value, r in results for row in result_rows(r)]
    click.echo(format_csv(headers, rows) if fmt == "csv" else format_table(headers, rows))


# ---------------------------------------------------------------------------
# sim / sup / moments
# ---------------------------------------------------------------------------


def _queue_from_cli(config_path, arrival, service, n, rho):
    """Resolve the queue for ``sim``: a config file or literals.

    Returns:
        Tuple of (QueueSpec, sim settings mapping).
    """
    from kingbound import dists
    from kingbound.bounds import BoundError
    from kingbound.dists import DistributionError
    from kingbound.estimators import SimulationError
    from kingbound.qsim import QueueSpec

    sim_settings = {}
    try:
        if config_path:
            data = _read_mapping(config_path)
            literal = dict(data.get("queue", data))
            for key in ("sim", "tail_grid"):
                literal.pop(key, None)
            sim_settings = dict(data.get("sim") or {})
            if rho is not None:
                literal["rho"] = rho
            return QueueSpec.from_literal(literal), sim_settings
        if not (arrival and service and n):
            _fail("give --config or all of --arrival, --service and --n")
        q = QueueSpec(_distribution(arrival, "--arrival"), _distribution(service, "--service"), n)
        return (q.with_rho(rho) if rho is not None else q), sim_settings
    except (SimulationError, DistributionError, BoundError) as e:
        _fail(str(e))


@main.command()
@click.option("--config", "config_path", default=None, help="Queue file with a queue: mapping and optional sim:")
@click.option("--arrival", default=None, help="Interarrival law, e.g. exponential:mean=1")
@click.option("--service", default=None, help="Service law, e.g. erlang:k=2,mean=0.9")
@click.option("--n", type=int, default=None, help="Number of servers")
@click.option("--rho", type=float, default=None, help="Rescale arrivals to this traffic intensity")
@click.option("--seed", type=int, default=None, help="Master seed")
@click.option("--arrivals", "total_arrivals", type=int, default=None, help="Total simulated arrivals")
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="text", help="Output format")
@click.pass_context
def sim(ctx, config_path, arrival, service, n, rho, seed, total_arrivals, fmt):
    """Simulate a GI/GI/n queue with both simulators.

    Examples:

      kingbound sim --arrival exponential --service exponential:mean=0.9 --n 1

      kingbound sim --config q.yaml --seed 7 --format csv
    """
    from kingbound.estimators import SimulationError
    from kingbound.qsim import SimConfig, run_event_sim, run_kw
    from kingbound.utils.cli_formatters import estimate_row, format_estimates, tail_rows

    q, sim_settings = _queue_from_cli(config_path, arrival, service, n, rho)
    try:
        cfg = SimConfig.from_mapping(sim_settings, master_seed=seed, total_arrivals=total_arrivals)
        kw = run_kw(q, cfg)
        ev = run_event_sim(q, cfg)
    except SimulationError as e:
        _fail(str(e))

    label = q.label
    s = cfg.master_seed
    rows = [
        estimate_row(label, "wait_mean", kw.wait_mean, s),
        estimate_row(label, "delay_prob", kw.delay_prob, s),
        estimate_row(label, "queue_mean", ev.queue_mean, s),
        estimate_row(label, "sspd", ev.sspd, s),
    ]
    rows.extend(tail_rows(label, "queue_tail", ev.queue_tail, s))
    payload = {
        "spec": q.to_literal(),
        "rho": q.rho,
        "seed": s,
        "kw": {"wait_mean": kw.wait_mean.to_dict(), "delay_prob": kw.delay_prob.to_dict(),
               "wait_tail": kw.wait_tail.to_dict()},
        "event": {"queue_mean": ev.queue_mean.to_dict(), "sspd": ev.sspd.to_dict(),
                  "queue_tail": ev.queue_tail.to_dict()},
    }
    click.echo(format_estimates(rows, fmt, payload))


@main.command()
@click.option("--arrival", required=True, help="Interarrival law, e.g. exponential:mean=1.111")
@click.option("--service", required=True, help="Service law, e.g. deterministic:mean=1")
@click.option("--n-prime", "n_prime", type=int, required=True, help="Number of pooled service processes")
@click.option("--max-level", type=float, default=20.0, help="Largest tail level (grid 0..max-level)")
@click.option("--reps", type=int, default=None, help="Replications (default from user config)")
@click.option("--horizon-multiplier", type=float, default=None, help="Horizon multiplier (>= 5)")
@click.option("--seed", type=int, default=None, help="Master seed")
@click.option("--workers", type=int, default=None, help="Worker threads")
@click.option("--config", "config_path", default=None, help="Path to user config file")
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="text", help="Output format")
@click.pass_context
def sup(ctx, arrival, service, n_prime, max_level, reps, horizon_multiplier, seed, workers, config_path, fmt):
    """Simulate the all-time supremum of arrivals minus pooled service counts.

    Example:

      kingbound sup --arrival exponential:mean=1.111111 --service exponential --n-prime 10
    """
    from kingbound.csim import SupremumConfig, simulate_supremum, sup_tail_estimate
    from kingbound.estimators import SimulationError
    from kingbound.utils.cli_formatters import format_estimates, tail_rows

    user = _get_user_config(config_path)
    a = _distribution(arrival, "--arrival")
    s = _distribution(service, "--service")
    try:
        cfg = SupremumConfig(
            n_prime=n_prime,
            reps=reps if reps is not None else user.sup_reps,
            horizon_multiplier=horizon_multiplier if horizon_multiplier is not None else user.horizon_multiplier,
            master_seed=seed if seed is not None else user.default_seed,
            max_level=max_level,
            workers=workers if workers is not None else user.workers,
        )
        samples = simulate_supremum(a, s, cfg)
        curve = sup_tail_estimate(samples, [float(k) for k in range(int(max_level) + 1)])
    except SimulationError as e:
        _fail(str(e))

    label = "sup %s / %s / %d" % (a.label, s.label, n_prime)
    rows = tail_rows(label, "sup_tail", curve, cfg.master_seed)
    payload = {"arrival": a.to_literal(), "service": s.to_literal(), "n_prime": n_prime, "seed": cfg.master_seed,
               "reps": cfg.reps, "truncation_diag": samples.truncation_diag, "horizon": samples.horizon,
               "sup_tail": curve.to_dict()}
    click.echo(format_estimates(rows, fmt, payload))
    if fmt == "text":
        click.echo("truncation diagnostic: %.4g  horizon: %.6g" % (samples.truncation_diag, samples.horizon))


def _moment_with_bound(kind, d, k, t, r, reps, seed, centered, equilibrium):
    """Run one moment estimator and evaluate the matching lemma bound.

    The law must already have unit mean.

    Returns:
        Tuple of (estimate, lemma_id, bound).
    """
    from kingbound import csim, dists
    from kingbound.bounds import default_theta, lemma_moment_bound

    theta, _surrogate = default_theta(1.0, dists.raw_moment(d, 2))
    gap = dists.laplace_gap(d, theta)
    if kind == "pooled":
        est = csim.estimate_pooled_moment(d, k, t, r, equilibrium, reps, seed)
        if t >= 1:
            lemma_id = "pooled-central"
            params = dict(r=r, ESr=dists.raw_moment(d, r), theta=theta, gap=gap, k=k, t=t)
        else:
            lemma_id = "pooled-small-t"
            params = dict(p=r, theta=theta, gap=gap, k=k, t=t)
    elif kind == "partial-sum":
        est = csim.estimate_partial_sum_moment(d, k, r, reps, seed)
        lemma_id = "arrival-central"
        params = dict(r3=r, mAr=dists.normalized_moment(d, r), k=k)
    else:
        est = csim.estimate_count_moment(d, t, r, centered, reps, seed, equilibrium=equilibrium,
                                         offset=0.0 if centered else 1.0)
        if centered:
            lemma_id = "equilibrium-central" if equilibrium else "renewal-central"
            params = dict(r=r, ESr=dists.raw_moment(d, r), theta=theta, gap=gap, t=t)
        else:
            lemma_id = "count-moment-t"
            params = dict(p=r, theta=theta, gap=gap, t=t)
    return est, lemma_id, lemma_moment_bound(lemma_id, params)


@main.command()
@click.argument("kind", type=click.Choice(["pooled", "partial-sum", "count"]))
@click.option("--dist", "dist_text", default="exponential", help="Distribution literal (rescaled to unit mean)")
@click.option("--k", type=int, default=10, help="Number of pooled processes / summands")
@click.option("--t", type=float, default=1.0, help="Time horizon")
@click.option("--r", type=float, default=3.0, help="Moment order")
@click.option("--reps", type=int, default=2000, help="Replications")
@click.option("--seed", type=int, default=None, help="Master seed")
@click.option("--centered/--raw", default=True, help="Central or shifted raw count moment (count only)")
@click.option("--equilibrium", is_flag=True, help="Use equilibrium (stationary) renewal processes (required for pooled)")
@click.option("--config", "config_path", default=None, help="Path to user config file")
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="text", help="Output format")
@click.pass_context
def moments(ctx, kind, dist_text, k, t, r, reps, seed, centered, equilibrium, config_path, fmt):
    """Estimate a renewal or partial-sum moment next to its lemma bound.

    Examples:

      kingbound moments pooled --dist erlang:k=2 --k 100 --t 10 --r 3 --equilibrium

      kingbound moments partial-sum --dist exponential --k 10 --r 3
    """
    from kingbound import dists
    from kingbound.bounds import BoundError
    from kingbound.dists import DistributionError
    from kingbound.estimators import SimulationError
    from kingbound.utils.cli_formatters import format_csv, format_json, format_number
    from kingbound.xnum import format_scalar, log10_of

    if kind == "pooled" and not equilibrium:
        _fail("pooled moment bounds hold for equilibrium renewal processes; pass --equilibrium")
    d = _distribution(dist_text, "--dist")
    if seed is None:
        seed = _get_user_config(config_path).default_seed
    try:
        d = dists.with_mean(d, 1.0)
        est, lemma_id, bound_value = _moment_with_bound(kind, d, k, t, r, reps, seed, centered, equilibrium)
    except (SimulationError, DistributionError, BoundError) as e:
        _fail(str(e))

    exp10 = log10_of(bound_value)
    if fmt == "json":
        click.echo(format_json({"kind": kind, "dist": d.to_literal(), "k": k, "t": t, "r": r, "seed": seed,
                                "reps": reps, "estimate": est.to_dict(), "lemma": lemma_id,
                                "bound_exp10": exp10, "bound": format_scalar(bound_value)}))
    elif fmt == "csv":
        click.echo(format_csv(("kind", "lemma", "point", "ci", "bound_exp10", "seed"),
                              [(kind, lemma_id, format_number(est.point), format_number(est.ci_half_width),
                                format_number(exp10), seed)]))
    else:
        click.echo("%s moment of %s (k=%d, t=%g, r=%g, reps=%d, seed=%d)" % (kind, d.label, k, t, r, reps, seed))
        click.echo("  estimate: %s +/- %s" % (format_number(est.point), format_number(est.ci_half_width)))
        click.echo("  bound (%s): %s" % (lemma_id, format_scalar(bound_value)))


# ---------------------------------------------------------------------------
# verify / campaigns / checks
# ---------------------------------------------------------------------------


@main.command()
@click.option("--campaign", "campaign_name", default="default", help="Campaign name or file path")
@click.option("--seed", type=int, default=None, help="Override the campaign seed")
@click.option("--workers", type=int, default=None, help="Worker threads for campaign steps")
@click.option("--out", "out_dir", default=None, help="Report directory")
@click.option("--config", "config_path", default=None, help="Path to user config file")
@click.option("--option", "-o", "options", multiple=True, help="Override a setting: -o key=value (repeatable)")
@click.option("--format", "fmt", type=FORMAT_CHOICE, default="text", help="Format for the records printed")
@click.option("--dry-run", "-n", is_flag=True, help="Validate the campaign without running it")
@click.pass_context
def verify(ctx, campaign_name, seed, workers, out_dir, config_path, options, fmt, dry_run):
    """Run a verification campaign and write report.json / report.csv.

    Exit status: 0 when every record passes or is vacuous, 1 on any
    non-vacuous failure, 2 for usage or configuration errors.

    Examples:

      kingbound verify --campaign smoke

      kingbound verify --campaign my-campaign.yaml --seed 7 --workers 4 --out reports/
    """
    from kingbound.bootstrap import init_kingbound
    from kingbound.bounds import BoundError
    from kingbound.campaigns import load_campaign
    from kingbound.dists import DistributionError
    from kingbound.estimators import SimulationError
    from kingbound.harness import CampaignError, render_csv, render_json, run_campaign, write_reports
    from kingbound.utils import parse_kv_options
    from kingbound.utils.cli_formatters import format_records, format_report_summary

    v = init_kingbound()
    # SAF's init_framework_desktop reconfigures the root logger; re-apply ours
    _setup_logging(ctx.obj["verbose"])
    user = _get_user_config(config_path)

    try:
        overrides = parse_kv_options(options)
    except ValueError as e:
        _fail(str(e))
    if seed is not None:
        overrides["seed"] = seed
    if workers is not None:
        overrides["workers"] = workers

    try:
        campaign = load_campaign(campaign_name, user.get_campaign_search_paths())
        if dry_run:
            issues = campaign.validate(v=v)
            if issues:
                raise CampaignError("campaign %r is invalid:\n  %s" % (campaign.name, "\n  ".join(issues)))
            click.echo("Campaign %s is valid: %d step(s)." % (campaign.name, len(campaign.steps)))
            return
        report = run_campaign(campaign, cli_overrides=overrides, user_defaults=user.settings_defaults(), v=v)
    except (CampaignError, BoundError, DistributionError, SimulationError) as e:
        _fail(str(e))

    target = Path(out_dir or campaign.output_dir or user.output_dir / campaign.name)
    write_reports(report, target)

    if fmt == "json":
        click.echo(render_json(report), nl=False)
    elif fmt == "csv":
        click.echo(render_csv(report), nl=False)
    else:
        failed = [r for r in report.records if r.failed]
        if failed:
            click.echo(format_records(failed))
        click.echo(format_report_summary(report))
    sys.exit(report.exit_code)


@main.command("campaigns")
@click.option("--config", "config_path", default=None, help="Path to user config file")
@click.pass_context
def campaigns_cmd(ctx, config_path):
    """List built-in and discovered campaign files."""
    from kingbound.campaigns import list_campaigns
    from kingbound.utils.cli_formatters import format_campaign_table

    user = _get_user_config(config_path)
    click.echo(format_campaign_table(list_campaigns(user.get_campaign_search_paths())))


@main.command("checks")
@click.pass_context
def checks_cmd(ctx):
    """List registered check kinds."""
    from kingbound.bootstrap import get_check, init_kingbound, list_checks
    from kingbound.utils.cli_formatters import format_check_table

    v = init_kingbound()
    _setup_logging(ctx.obj["verbose"])
    click.echo(format_check_table([(name, get_check(name, v=v).description) for name in list_checks(v=v)]))


if __name__ == "__main__":
    main()
