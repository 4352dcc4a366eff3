"""
Main entry point for inversion-complexity.

This module contains the click command group and maps library exceptions to
the exit-code contract: 0 ok, 2 parse, 3 size guard, 4 self-verification,
5 realization mismatch, 6 invalid circuit, 7 weight bound violated.
"""

import logging
import os
import sys
from typing import Callable, Optional

import click

from .cli import InversionCLI
from .config import config as app_config
from .utils.logging_utils import InversionComplexityError, format_exception, setup_logging

logger = logging.getLogger(__name__)


def _run(action: Callable[[], str]) -> None:
    """Echo the rendered report or exit with the exception's code."""
    try:
        output = action()
    except InversionComplexityError as e:
        logger.error(format_exception(e))
        click.echo(f"Error: {format_exception(e)}", err=True)
        sys.exit(e.exit_code)
    if output:
        click.echo(output)


@click.group(invoke_without_command=True)
@click.option('--config-file', '-c', default=None, help='Path to configuration file')
@click.option('--log-level', '-l', default=None, help='Log level (debug, info, warning, error, critical)')
@click.option('--log-file', '-f', default=None, help='Path to log file')
@click.option('--max-points', default=None, type=int, help='Largest k^n accepted by the analyses')
@click.option('--json', 'json_output', is_flag=True, default=None, help='Emit machine-readable JSON reports')
@click.option('--version', '-v', is_flag=True, help='Show version and exit')
@click.pass_context
def main(
    ctx: click.Context,
    config_file: Optional[str],
    log_level: Optional[str],
    log_file: Optional[str],
    max_points: Optional[int],
    json_output: Optional[bool],
    version: bool
):
    """Inversion complexity of k-valued functions and systems."""
    if version:
        from . import __version__
        click.echo(f"inversion-complexity v{__version__}")
        sys.exit(0)

    # Set custom config file if provided
    if config_file:
        os.environ['INVERSION_COMPLEXITY_CONFIG'] = config_file
    try:
        app_config.reload(config_file)
    except InversionComplexityError as e:
        click.echo(f"Error: {format_exception(e)}", err=True)
        sys.exit(e.exit_code)

    if log_level:
        app_config.set('general', 'log_level', log_level)
    if log_file:
        app_config.set('general', 'log_file', log_file)
    setup_logging(level=app_config.get('general', 'log_level', 'warning'),
                  log_file=app_config.get('general', 'log_file'))

    if max_points is not None:
        app_config.set('limits', 'max_analysis_points', max_points)

    ctx.obj = InversionCLI(json_output=json_output or None)
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


BASIS_HELP = 'Basis: bp (Post negation), bl (Lukasiewicz negation) or file:PATH'


@main.command()
@click.argument('system_file', type=click.Path())
@click.option('--basis', '-b', default='bp', show_default=True, help=BASIS_HELP)
@click.pass_obj
def analyze(cli: InversionCLI, system_file: str, basis: str):
    """Decrease, inversion powers and complexity bounds of a system."""
    _run(lambda: cli.render(cli.analyze(system_file, basis)))


@main.command()
@click.argument('system_file', type=click.Path())
@click.option('--basis', '-b', default='bp', show_default=True, help=BASIS_HELP)
@click.option('--out', '-o', default=None, type=click.Path(), help='Write the circuit to this file')
@click.pass_obj
def synthesize(cli: InversionCLI, system_file: str, basis: str, out: Optional[str]):
    """Build a circuit with the fewest possible omega gates."""
    def action() -> str:
        report, circuit = cli.synthesize(system_file, basis, out)
        text = cli.render(report)
        if out is None and not cli.json_output:
            text += "\n" + circuit.dumps().rstrip("\n")
        return text

    _run(action)


@main.command()
@click.argument('circuit_file', type=click.Path())
@click.argument('system_file', type=click.Path())
@click.option('--basis', '-b', default='bp', show_default=True, help=BASIS_HELP)
@click.pass_obj
def verify(cli: InversionCLI, circuit_file: str, system_file: str, basis: str):
    """Check that a circuit is valid, realizes a system and respects the weight bound."""
    _run(lambda: cli.render(cli.verify(circuit_file, system_file, basis)))


@main.command()
@click.option('-k', 'k', required=True, type=int, help='Number of values')
@click.option('-n', 'n', required=True, type=int, help='Number of variables')
@click.option('-m', 'm', default=None, type=int, help='Number of functions in a system')
@click.option('--basis', '-b', default='bp', show_default=True, help=BASIS_HELP)
@click.option('--scan', is_flag=True, help='Confirm the maximum decrease by scanning the space')
@click.option('--sample', default=None, type=int, help='Scan this many random instances instead')
@click.option('--seed', default=None, type=int, help='Seed for --sample (default: oracle.seed)')
@click.pass_obj
def shannon(cli: InversionCLI, k: int, n: int, m: Optional[int], basis: str,
            scan: bool, sample: Optional[int], seed: Optional[int]):
    """Worst-case inversion complexity of n-ary functions or m-member systems."""
    _run(lambda: cli.render_shannon(cli.shannon(k, n, m, basis, scan or sample is not None, sample, seed)))


@main.group('config')
def config_group():
    """Show or change configuration values."""


@config_group.command('get')
@click.option('--all', 'show_all', is_flag=True, help='Show the whole configuration')
@click.argument('section', required=False)
@click.argument('key', required=False)
@click.pass_obj
def config_get(cli: InversionCLI, show_all: bool, section: Optional[str], key: Optional[str]):
    """Get a configuration value, section or everything."""
    _run(lambda: cli.render(cli.config_get(section, key, show_all)))


@config_group.command('set')
@click.argument('section')
@click.argument('key')
@click.argument('value')
@click.option('--save', is_flag=True, help='Write the configuration file')
@click.pass_obj
def config_set(cli: InversionCLI, section: str, key: str, value: str, save: bool):
    """Set a configuration value."""
    _run(lambda: cli.render(cli.config_set(section, key, value, save)))


if __name__ == '__main__':
    main()
