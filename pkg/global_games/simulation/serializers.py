"""
Serializers for the simulation app.
"""
from rest_framework import serializers


class GameRealizationSerializer(serializers.Serializer):
    """
    Serializer for GameRealization.
    """
    x = serializers.FloatField()
    signals = serializers.ListField(child=serializers.IntegerField())
    actions = serializers.ListField(child=serializers.IntegerField())
    utilities = serializers.ListField(child=serializers.FloatField())


class DeviationEstimateSerializer(serializers.Serializer):
    agent = serializers.IntegerField()
    deviation = serializers.ReadOnlyField()
    gain = serializers.FloatField(source='gain.mean')
    stderr = serializers.FloatField(source='gain.stderr')
    upper = serializers.FloatField()


class DeviationAuditReportSerializer(serializers.Serializer):
    """
    Serializer for DeviationAuditReport; the worst deviation only, not every estimate.
    """
    passed = serializers.BooleanField()
    epsilon = serializers.FloatField()
    confidence = serializers.FloatField()
    max_gain = serializers.FloatField(read_only=True)
    worst = DeviationEstimateSerializer()
    n_checked = serializers.SerializerMethodField()
    n_realizations = serializers.IntegerField()
    seed = serializers.IntegerField()

    def get_n_checked(self, report):
        return len(report.estimates)
