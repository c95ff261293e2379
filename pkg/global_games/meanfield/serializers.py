"""
Serializers for the meanfield app.
"""
from rest_framework import serializers

from gamma_poisson.serializers import ModelParamsSerializer


class MfpfPointSerializer(serializers.Serializer):
    """
    One grid point of a potential curve, built by MfpfCurveSerializer.
    """
    tau = serializers.IntegerField()
    value = serializers.FloatField()
    stderr = serializers.FloatField()
    is_argmax = serializers.BooleanField()


class MfpfCurveSerializer(serializers.Serializer):
    """
    Serializer for MfpfCurve.
    """
    params = ModelParamsSerializer()
    n_samples = serializers.IntegerField()
    seed = serializers.IntegerField()
    tau_star = serializers.IntegerField(read_only=True)
    points = serializers.SerializerMethodField()

    def get_points(self, curve):
        best = curve.argmax_index
        rows = [
            {'tau': tau, 'value': value.mean, 'stderr': value.stderr, 'is_argmax': index == best}
            for index, (tau, value) in enumerate(zip(curve.taus, curve.values))
        ]
        return MfpfPointSerializer(rows, many=True).data


class MfpfEndpointsSerializer(serializers.Serializer):
    at_zero = serializers.FloatField()
    at_infinity = serializers.FloatField()


class TableComparisonSerializer(serializers.Serializer):
    """
    Serializer for TableComparison; ``expected_*`` fields carry the reference values.
    """
    k = serializers.IntegerField(source='row.k')
    theta = serializers.FloatField(source='row.theta')
    # the keyword clash is resolved in to_representation
    lam = serializers.FloatField(source='row.lam')
    g = serializers.FloatField(source='row.g')
    tau_star = serializers.IntegerField()
    expected_tau_star = serializers.IntegerField(source='row.tau_star')
    tau_omni = serializers.FloatField()
    expected_tau_omni = serializers.FloatField(source='row.tau_omni')
    tau_ce = serializers.IntegerField()
    expected_tau_ce = serializers.IntegerField(source='row.tau_ce')
    passed = serializers.BooleanField(read_only=True)

    def to_representation(self, instance):
        data = super().to_representation(instance)
        return {('lambda' if key == 'lam' else key): value for key, value in data.items()}


class CriticalGainPointSerializer(serializers.Serializer):
    theta = serializers.FloatField()
    lam = serializers.FloatField()
    critical_gain = serializers.FloatField()

    def to_representation(self, instance):
        data = super().to_representation(instance)
        data['lambda'] = data.pop('lam')
        return data


class SignalRowSerializer(serializers.Serializer):
    y = serializers.IntegerField()
    pmf = serializers.FloatField()
    cdf = serializers.FloatField()
    markers = serializers.ListField(child=serializers.CharField())
