"""
Parameter ingestion: validation of raw parameter sets and parameter files.
"""
from pathlib import Path

import yaml

from common.exceptions import (
    InvalidGain, InvalidShape, NonPositiveRate, ParameterError, TooFewAgents, ZeroExponent,
)
from .serializers import ModelParamsSerializer

ERRORS_BY_CODE = {
    'non_positive_rate': NonPositiveRate,
    'invalid_shape': InvalidShape,
    'zero_exponent': ZeroExponent,
    'invalid_gain': InvalidGain,
    'too_few_agents': TooFewAgents,
}

# Report the most specific failure first when several fields are wrong
FIELD_ORDER = ['theta', 'lambda', 'k', 'p', 'g', 'n_agents']


def _error_from(errors):
    for field in FIELD_ORDER + sorted(set(errors) - set(FIELD_ORDER)):
        for detail in errors.get(field, []):
            error_class = ERRORS_BY_CODE.get(getattr(detail, 'code', None), ParameterError)
            return error_class(f"{field}: {detail}")
    return ParameterError(str(errors))


def validate_params(raw):
    """
    Validate a candidate parameter set and return a ModelParams.

    ``raw`` is a mapping with the keys k, theta, lambda, p, g and optionally
    n_agents (an integer or "inf").
    """
    serializer = ModelParamsSerializer(data=dict(raw))
    if not serializer.is_valid():
        raise _error_from(serializer.errors)
    return serializer.save()


def read_params_file(path):
    """
    Read a raw parameter mapping from a JSON or YAML file.
    """
    with Path(path).open(encoding='utf-8') as handle:
        raw = yaml.safe_load(handle)
    if not isinstance(raw, dict):
        raise ParameterError(f"{path} does not contain a parameter mapping.")
    return raw


def dump_params(params):
    return dict(ModelParamsSerializer(params).data)
