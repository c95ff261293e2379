"""
Serializers for the equilibrium app.
"""
import math

from rest_framework import serializers

from estimators.serializers import ThresholdProfileSerializer


class CrossingPointSerializer(serializers.Serializer):
    y = serializers.IntegerField()
    benefit = serializers.FloatField()
    cost = serializers.SerializerMethodField()
    activates = serializers.BooleanField(read_only=True)

    def get_cost(self, obj):
        # c_hat is infinite below the first regular signal when p < 0
        return obj.cost if math.isfinite(obj.cost) else None


class BestResponseResultSerializer(serializers.Serializer):
    """
    Serializer for BestResponseResult.
    """
    agent = serializers.IntegerField()
    tau_star = serializers.ReadOnlyField()
    pole_end = serializers.IntegerField()
    diagnostics = CrossingPointSerializer(many=True)


class SufficientConditionSerializer(serializers.Serializer):
    holds = serializers.BooleanField()
    critical_gain = serializers.FloatField()
    direction = serializers.CharField()


class DynamicsRoundSerializer(serializers.Serializer):
    """
    One record of the dynamics trace.
    """
    round = serializers.IntegerField(source='index')
    profile = ThresholdProfileSerializer()
    changed = serializers.ListField(child=serializers.IntegerField())


class DynamicsResultSerializer(serializers.Serializer):
    """
    Serializer for DynamicsResult; the per-round trace is emitted separately.
    """
    profile = ThresholdProfileSerializer()
    converged = serializers.BooleanField()
    rounds = serializers.IntegerField()
    condition_holds = serializers.BooleanField()
    monotone_agents = serializers.ListField(child=serializers.IntegerField(), read_only=True)
    monotone = serializers.BooleanField(source='is_monotone', read_only=True)


class QuadratureAuditSerializer(serializers.Serializer):
    """
    Serializer for QuadratureAudit.
    """
    passed = serializers.BooleanField()
    tolerance = serializers.FloatField()
    max_gain = serializers.SerializerMethodField()
    agent = serializers.IntegerField(source='worst.agent')
    deviation = serializers.ReadOnlyField(source='worst.deviation')
    n_checked = serializers.IntegerField()

    def get_max_gain(self, obj):
        # leaving an infinite expected cost gains an unbounded amount
        return obj.max_gain if math.isfinite(obj.max_gain) else None
