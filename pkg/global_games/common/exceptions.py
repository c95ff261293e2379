"""
Exception hierarchy for the global games toolkit.

Every error carries a machine ``code`` and the process ``exit_code`` the
command line reports for it.
"""


class GlobalGameError(Exception):
    """
    Base class for every error raised by the toolkit.
    """
    code = 'error'
    exit_code = 2
    default_detail = 'An unexpected error occurred.'

    def __init__(self, detail=None):
        self.detail = detail or self.default_detail
        super().__init__(self.detail)


# Validation errors (exit code 1)

class ParameterError(GlobalGameError):
    code = 'invalid_parameters'
    exit_code = 1
    default_detail = 'Invalid parameters.'


class NonPositiveRate(ParameterError):
    code = 'non_positive_rate'
    default_detail = 'theta and lambda must be positive.'


class InvalidShape(ParameterError):
    code = 'invalid_shape'
    default_detail = 'k must be an integer greater than or equal to 1.'


class ZeroExponent(ParameterError):
    code = 'zero_exponent'
    default_detail = 'The cost exponent p must be nonzero.'


class InvalidGain(ParameterError):
    code = 'invalid_gain'
    default_detail = 'The benefit gain g must be positive.'


class TooFewAgents(ParameterError):
    code = 'too_few_agents'
    default_detail = 'A finite game needs at least two agents.'


class TooManyAgents(ParameterError):
    code = 'too_many_agents'
    default_detail = 'Too many agents for this computation.'


class DomainError(ParameterError):
    code = 'domain_error'
    default_detail = 'Argument outside the domain of the function.'


class WrongSign(ParameterError):
    code = 'wrong_sign'
    default_detail = 'The sign of p does not match this computation.'


class ProfileLengthMismatch(ParameterError):
    code = 'profile_length_mismatch'
    default_detail = 'The threshold profile length does not match the number of agents.'


class MixedKindProfile(ParameterError):
    code = 'mixed_kind_profile'
    default_detail = 'All thresholds in a profile must share the same kind.'


class KindMismatch(ParameterError):
    code = 'kind_mismatch'
    default_detail = 'Low thresholds require p > 0 and high thresholds require p < 0.'


class IndexOutOfRange(ParameterError):
    code = 'index_out_of_range'
    default_detail = 'Agent index out of range.'


class TooFewSamples(ParameterError):
    code = 'too_few_samples'
    default_detail = 'Not enough Monte Carlo samples.'


# Numerical errors (exit code 2)

class NumericalError(GlobalGameError):
    code = 'numerical_error'
    exit_code = 2
    default_detail = 'Numerical failure.'


class QuadratureFailure(NumericalError):
    code = 'quadrature_failure'
    default_detail = 'Adaptive quadrature did not reach the requested tolerance.'


class NoSolution(NumericalError):
    code = 'no_solution'
    default_detail = 'The equation has no solution in the admissible range.'


class DegenerateBound(NumericalError):
    code = 'degenerate_bound'
    default_detail = 'The sufficient-condition bound is not finite for these parameters.'


class ScanLimitExceeded(NumericalError):
    code = 'scan_limit_exceeded'
    default_detail = 'Integer scan exceeded MAX_SCAN without finding a crossing.'


class NotConverged(NumericalError):
    code = 'not_converged'
    default_detail = 'Best-response dynamics did not converge.'


# Property suites (exit code 3)

class SuiteFailure(GlobalGameError):
    code = 'suite_failure'
    exit_code = 3
    default_detail = 'One or more property suites failed.'
