"""Интерфейс командной строки для расчетов интегралов по путям в пространстве Лиувилля."""

import json
import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict

import click
from dotenv import load_dotenv
from pydantic import ValidationError

from ..exceptions import LiouvilleError

DEFAULT_TOL = 1e-10
TOL_ENV = "LIOUVILLE_PATHINT_TOL"
LOG_LEVEL_ENV = "LIOUVILLE_PATHINT_LOG_LEVEL"
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


def run_options(func: Callable) -> Callable:
    """Общие для всех подкоманд опции --config/--out/--tol/--seed."""
    func = click.option('--seed', default=0, show_default=True, help='Зерно для случайных проверок')(func)
    func = click.option('--tol', type=float, envvar=TOL_ENV, default=DEFAULT_TOL, show_default=True,
                        help=f'Численный допуск (переменная {TOL_ENV})')(func)
    func = click.option('--out', 'out_dir', default='./pathint_output', show_default=True,
                        type=click.Path(file_okay=False), help='Директория для сохранения результатов')(func)
    func = click.option('--config', 'config_path', required=True,
                        type=click.Path(exists=True, dir_okay=False), help='JSON-конфигурация расчета')(func)
    return func


def _execute(operation: str, config_path: str, out_dir: str, tol: float, action: Callable) -> Dict[str, Any]:
    from ..core.pipeline import RunPipeline
    from ..core.storage_manager import ArtifactStore
    from ..models.run_config import load_config

    try:
        config = load_config(config_path)
        pipeline = RunPipeline(config, ArtifactStore(Path(out_dir)), tol=tol)
        summary = action(pipeline)
    except (LiouvilleError, ValidationError) as e:
        raise click.ClickException(f"❌ Ошибка {operation}: {e}") from e
    click.echo(json.dumps(summary, indent=2, default=str))
    return summary


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging')
def main(verbose: bool):
    """Superoperator path-integral toolkit."""
    load_dotenv()
    level = logging.DEBUG if verbose else getattr(logging, os.getenv(LOG_LEVEL_ENV, "INFO").upper(), logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT)


@main.command()
@run_options
def propagate(config_path, out_dir, tol, seed):
    """Time-sliced propagation of the initial state."""
    click.echo(f"⏱  Propagating {config_path}")
    _execute("propagate", config_path, out_dir, tol, lambda p: p.propagate())
    click.echo("✅ Propagation finished")


@main.command()
@run_options
def kernel(config_path, out_dir, tol, seed):
    """Ядро короткого шага и символ на координатной сетке."""
    summary = _execute("kernel", config_path, out_dir, tol, lambda p: p.kernel())
    click.echo(f"✅ Ядро записано ({summary.get('method')})")


@main.command()
@run_options
def choi(config_path, out_dir, tol, seed):
    """Матрица Чоя, ее спектр и разложение Крауса операции."""
    summary = _execute("choi", config_path, out_dir, tol, lambda p: p.choi())
    if summary["completely_positive"]:
        click.echo(f"✅ Ранг Крауса: {summary['kraus_rank']}")
    else:
        click.echo(f"⚠️  Операция не вполне положительна (мин. собственное значение {summary['min_eigenvalue']:.3e})")


@main.command('gate-matrix')
@run_options
def gate_matrix(config_path, out_dir, tol, seed):
    """Вещественная матрица гейта 4^n x 4^n в базисе Паули."""
    summary = _execute("gate-matrix", config_path, out_dir, tol, lambda p: p.gate_matrix())
    click.echo(f"✅ Матрица гейта: кубитов {summary['n_qubits']}")


@main.command()
@run_options
def moments(config_path, out_dir, tol, seed):
    """Замкнутые уравнения для моментов модели осциллятора."""
    _execute("moments", config_path, out_dir, tol, lambda p: p.moments())
    click.echo("✅ Моменты записаны")


@main.command('check-algebra')
@click.option('--config', 'config_path', default=None, type=click.Path(exists=True, dir_okay=False),
              help='Не используется; принимается для единообразия')
@click.option('--out', 'out_dir', default='./pathint_output', show_default=True,
              type=click.Path(file_okay=False), help='Директория для сохранения результатов')
@click.option('--tol', type=float, envvar=TOL_ENV, default=1e-11, show_default=True,
              help='Максимально допустимая невязка')
@click.option('--seed', default=0, show_default=True, help='Зерно для случайных троек операторов')
@click.option('--trials', default=50, show_default=True, help='Количество случайных троек')
def check_algebra(config_path, out_dir, tol, seed, trials):
    """Тождества Ли, Йордана и смешанные для супероператоров L+- на случайных операторах."""
    from ..core.pipeline import algebra_suite
    from ..core.storage_manager import ArtifactStore

    frame = algebra_suite(seed, trials=trials)
    ArtifactStore(Path(out_dir)).save_table("algebra_residuals.csv", frame)
    worst = frame.groupby("relation")["residual"].max()
    for relation, residual in worst.items():
        mark = "✅" if residual <= tol else "❌"
        click.echo(f"{mark} {relation}: {residual:.3e}")
    if (worst > tol).any():
        raise click.ClickException(f"❌ Ошибка check-algebra: максимальная невязка {worst.max():.3e} > {tol:.3e}")


if __name__ == '__main__':
    main()
