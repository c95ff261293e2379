"""
Run configuration assembled from command options, a parameter file and the
GLOBAL_GAMES settings, in that order of precedence.
"""
from dataclasses import dataclass

from django.db import models

from common.exceptions import ParameterError
from common.settings import game_settings
from gamma_poisson.params import read_params_file, validate_params

# command option -> parameter key
PARAM_OPTIONS = {
    'k': 'k',
    'theta': 'theta',
    'lambda': 'lambda',
    'p': 'p',
    'g': 'g',
    'n': 'n_agents',
}


class OutputFormat(models.TextChoices):
    """Report format"""
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class RunConfig:
    """
    Everything one command invocation needs besides its own options.
    ``params`` is None for commands that run built-in parameter sets.
    """
    params: object
    tau_max: object
    n_samples: int
    seed: int
    workers: int
    format: OutputFormat = OutputFormat.JSON
    out: object = None


def raw_params(options):
    raw = read_params_file(options['params']) if options.get('params') else {}
    for option, key in PARAM_OPTIONS.items():
        if options.get(option) is not None:
            raw[key] = options[option]
    return raw


def build_run_config(options, needs_params=True):
    """
    Build a RunConfig from parsed command options.
    """
    raw = raw_params(options)
    params = validate_params(raw) if raw or needs_params else None
    n_samples = options.get('n_samples')
    seed = options.get('seed')
    workers = options.get('workers')
    tau_max = options.get('tau_max')
    if tau_max is not None and tau_max < 1:
        raise ParameterError(f"--tau-max must be at least 1, got {tau_max}.")
    return RunConfig(
        params=params,
        tau_max=tau_max,
        n_samples=game_settings.DEFAULT_SAMPLES if n_samples is None else n_samples,
        seed=game_settings.DEFAULT_SEED if seed is None else seed,
        workers=game_settings.WORKERS if workers is None else workers,
        format=OutputFormat(options.get('format') or OutputFormat.JSON),
        out=options.get('out'),
    )
