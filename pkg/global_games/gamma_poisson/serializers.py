"""
Serializers for the gamma_poisson app.
"""
import math

from rest_framework import serializers

from .models import INFINITE_AGENTS, ModelParams


class AgentCountField(serializers.Field):
    """
    Agent count: an integer, or the string "inf" for the mean-field limit.
    """
    default_error_messages = {
        'invalid': 'n_agents must be an integer or "inf".',
    }

    def to_internal_value(self, data):
        if isinstance(data, str) and data.strip().lower() in ('inf', 'infinite', 'infinity'):
            return INFINITE_AGENTS
        if isinstance(data, float) and math.isinf(data):
            return INFINITE_AGENTS
        try:
            value = float(data)
        except (TypeError, ValueError):
            self.fail('invalid')
        if not value.is_integer():
            self.fail('invalid')
        return int(value)

    def to_representation(self, value):
        return 'inf' if math.isinf(value) else int(value)


class ModelParamsSerializer(serializers.Serializer):
    """
    Serializer for ModelParams using the JSON keys k, theta, lambda, p, g, n_agents.
    """
    k = serializers.FloatField()
    theta = serializers.FloatField()
    lam = serializers.FloatField(source='lam')
    p = serializers.IntegerField()
    g = serializers.FloatField()
    n_agents = AgentCountField(required=False, default=INFINITE_AGENTS)

    def get_fields(self):
        # "lambda" is a keyword, so the field is declared as lam and renamed here
        return {
            ('lambda' if name == 'lam' else name): field
            for name, field in super().get_fields().items()
        }

    def validate_k(self, value):
        if not float(value).is_integer() or value < 1:
            raise serializers.ValidationError("k must be an integer >= 1.", code='invalid_shape')
        return int(value)

    def validate_theta(self, value):
        if value <= 0:
            raise serializers.ValidationError("theta must be positive.", code='non_positive_rate')
        return value

    def validate_lambda(self, value):
        if value <= 0:
            raise serializers.ValidationError("lambda must be positive.", code='non_positive_rate')
        return value

    def validate_p(self, value):
        if value == 0:
            raise serializers.ValidationError("p must be nonzero.", code='zero_exponent')
        return value

    def validate_g(self, value):
        if value <= 0:
            raise serializers.ValidationError("g must be positive.", code='invalid_gain')
        return value

    def validate_n_agents(self, value):
        if not math.isinf(value) and value < 2:
            raise serializers.ValidationError("n_agents must be at least 2.", code='too_few_agents')
        return value

    def to_representation(self, instance):
        data = super().to_representation(instance)
        data['k'] = int(data['k'])
        return data

    def create(self, validated_data):
        return ModelParams(**validated_data)

