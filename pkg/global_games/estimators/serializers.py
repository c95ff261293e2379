"""
Serializers for the estimators app.
"""
from rest_framework import serializers

from common.exceptions import GlobalGameError
from .models import Bound, PolicyKind, ThresholdProfile


class ThresholdValueField(serializers.Field):
    """
    A threshold: a nonnegative integer, -1, or one of "inf", "never", "always".
    """
    default_error_messages = {
        'invalid': 'Thresholds must be integers >= -1 or one of "inf", "never", "always".',
    }

    def to_internal_value(self, data):
        if isinstance(data, str) and data in Bound.values:
            return data
        if isinstance(data, bool):
            self.fail('invalid')
        try:
            value = int(data)
        except (TypeError, ValueError):
            self.fail('invalid')
        if (value != data and str(value) != str(data).strip()) or value < -1:
            self.fail('invalid')
        return value

    def to_representation(self, value):
        return str(value.value) if isinstance(value, Bound) else value


class ThresholdProfileSerializer(serializers.Serializer):
    """
    Serializer for ThresholdProfile as {"kind": "low", "taus": [...]}.
    """
    kind = serializers.ChoiceField(choices=PolicyKind.choices)
    taus = serializers.ListField(child=ThresholdValueField(), allow_empty=False)

    def to_representation(self, instance):
        return {
            'kind': str(instance.kind.value),
            'taus': list(instance.taus),
        }

    def validate(self, attrs):
        try:
            attrs['profile'] = ThresholdProfile.from_taus(attrs['kind'], attrs['taus'])
        except GlobalGameError as exc:
            raise serializers.ValidationError({'taus': [exc.detail]}, code=exc.code)
        return attrs

    def create(self, validated_data):
        return validated_data['profile']
