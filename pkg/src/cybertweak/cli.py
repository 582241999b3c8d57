"""Command-line front end: solve instances, generate them, run experiments,
and serve the interactive policy tuner.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .baselines import CapExceededError, solve_all_actions, solve_max_effort
from .colgen import CgConfig, cybertweak, greedytweak
from .dominance import find_dominated_websites
from .experiments import ExperimentSpec, run_experiment
from .model import (
    AttackPlan,
    SolveResult,
    errors_only,
    generate_instance,
    load_instance,
    save_instance,
    validate,
    ParseError,
)
from .relaxation import solve_relaxed_p1
from .special_cases import detect_case, solve_small_effort, solve_uniform_cost

EXIT_VALIDATION = 1
EXIT_SOLVER = 2
EXIT_IO = 3


@click.group()
def main():
    """Minimax packet-alteration policies against watering-hole attackers."""


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(path_type=Path))
@click.option(
    "--method",
    default="auto",
    type=click.Choice(
        ["auto", "cybertweak", "greedytweak", "relaxed", "max-effort", "all-actions", "special"]
    ),
)
@click.option("--out", "out_path", type=click.Path(path_type=Path))
@click.option("--no-dwe", is_flag=True, help="Skip dominated-website elimination.")
@click.option("--no-opt-check", is_flag=True, help="Skip the relaxation optimality check.")
@click.option("--epsilon", default=1e-6, show_default=True, help="Optimality-check radius.")
@click.option("--force-general", is_flag=True, help="Never dispatch to special-case solvers.")
@click.option("--explain-dwe", is_flag=True, help="Print the dominance witnesses.")
def solve(in_path, method, out_path, no_dwe, no_opt_check, epsilon, force_general, explain_dwe):
    """Solve an instance file and write the result as JSON."""
    try:
        instance = load_instance(in_path)
    except (OSError, ParseError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    problems = errors_only(validate(instance))
    if problems:
        for v in problems:
            click.echo(f"invalid: {v.website_id or '-'}: {v.rule}", err=True)
        sys.exit(EXIT_VALIDATION)

    config = CgConfig(
        run_dwe=not no_dwe, run_optimality_check=not no_opt_check, epsilon=epsilon
    )
    try:
        result = _dispatch(instance, method, config, force_general)
    except CapExceededError as exc:
        click.echo(f"solver failed: {exc}", err=True)
        sys.exit(EXIT_SOLVER)

    if explain_dwe:
        report = find_dominated_websites(instance)
        for w, us in sorted(report.witness.items()):
            click.echo(f"dominated: {w} by {{{', '.join(us)}}}")

    payload = result.to_dict(instance)
    if out_path:
        try:
            out_path.write_text(json.dumps(payload, indent=1), encoding="utf-8")
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_IO)
    else:
        click.echo(json.dumps(payload, indent=1))
    click.echo(f"value={result.value:.6g} method={result.method} status={result.status}", err=True)


def _dispatch(instance, method, config, force_general) -> SolveResult:
    if method == "auto":
        if not force_general:
            case = detect_case(instance)
            if case.which == "small_effort_budget":
                return solve_small_effort(instance)
            if case.which == "uniform_cost_unlimited_effort":
                return solve_uniform_cost(instance)
        return cybertweak(instance, config)
    if method == "special":
        case = detect_case(instance)
        if case.which == "small_effort_budget":
            return solve_small_effort(instance)
        if case.which == "uniform_cost_unlimited_effort":
            return solve_uniform_cost(instance)
        click.echo(f"no special case matches: {case.reason}", err=True)
        sys.exit(EXIT_SOLVER)
    if method == "cybertweak":
        return cybertweak(instance, config)
    if method == "greedytweak":
        return greedytweak(instance, config)
    if method == "relaxed":
        relax = solve_relaxed_p1(instance)
        from .best_response import best_response_value
        from .model import DefenderStrategy

        plan, value = best_response_value(instance, relax.x_hat)
        return SolveResult(
            strategy=relax.x_hat,
            value=value,
            best_response=plan,
            lower_bound=0.0,
            upper_bound=min(value, relax.hat_value),
            method="relaxed",
            status="heuristic",
        )
    if method == "max-effort":
        return solve_max_effort(instance)
    if method == "all-actions":
        return solve_all_actions(instance)
    raise ValueError(method)


@main.command()
@click.option("--size", required=True, type=int)
@click.option(
    "--profile",
    default="standard",
    type=click.Choice(["standard", "small", "unit", "large_split"]),
)
@click.option("--seed", default=0, type=int)
@click.option("--out", "out_path", required=True, type=click.Path(path_type=Path))
def generate(size, profile, seed, out_path):
    """Generate a random instance file."""
    instance = generate_instance(size, profile, seed)
    try:
        save_instance(instance, out_path)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_IO)
    click.echo(f"wrote {out_path} ({size} sites, profile={profile}, seed={seed})")


@main.command()
@click.option("--name", required=True)
@click.option("--sizes", required=True, help="Comma-separated site counts.")
@click.option("--trials", default=20, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--profile", default="standard")
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
def experiment(name, sizes, trials, seed, profile, out_dir):
    """Run a named experiment and write CSV table + plot data."""
    spec = ExperimentSpec(
        name=name,
        sizes=tuple(int(s) for s in sizes.split(",")),
        trials=trials,
        seed=seed,
        profile=profile,
    )
    info = run_experiment(spec, out_dir)
    click.echo(json.dumps(info))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8787, show_default=True, type=int)
def serve(host, port):
    """Start the local policy-tuner HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
