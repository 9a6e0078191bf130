"""
Theta Serializers
Validation of the spec file schema shared by every subcommand, and of the
q-series file format.
"""

from fractions import Fraction
from typing import Any, Dict

from rest_framework import serializers

from apps.core.exceptions import IndefThetaError, SpecError
from apps.lattice.tools.polynomials import HomPoly
from apps.lattice.tools.quadratic_form import as_fraction
from apps.series.tools.qseries import QSeries
from apps.theta.tools.spec import ThetaSpec, build_spec


class RationalField(serializers.Field):
    """An int or a "p/q" string, held as a Fraction."""

    default_error_messages = {
        'invalid': 'Expected an integer or a "p/q" string.',
    }

    def to_internal_value(self, data):
        if isinstance(data, bool) or isinstance(data, float):
            self.fail('invalid')
        try:
            return as_fraction(data)
        except (ValueError, TypeError, ZeroDivisionError, SpecError):
            self.fail('invalid')

    def to_representation(self, value):
        return str(Fraction(value))


class ConeVectorSerializer(serializers.Serializer):
    """Cone parameter: rational vector, optionally the real vector it represents"""

    vector = serializers.ListField(
        child=RationalField(),
        min_length=2,
        help_text="Rational entries; for an irrational interior vector, a point on its ray"
    )
    real = serializers.ListField(
        child=serializers.FloatField(),
        required=False,
        help_text="Real entries of an irrational interior vector"
    )


class ThetaSpecSerializer(serializers.Serializer):
    """The spec file: form, polynomial, cone data and characteristics"""

    matrix = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField()),
        min_length=2,
        help_text="Symmetric integer matrix A of signature (n-1, 1)"
    )
    poly = serializers.ListField(
        child=serializers.DictField(),
        help_text='Records {"exponents": [...], "coeff": "p/q" or ["re", "im"]}'
    )
    degree = serializers.IntegerField(
        required=False,
        min_value=0,
        help_text="Degree, needed only for the zero polynomial"
    )
    anchor = serializers.ListField(
        child=RationalField(),
        help_text="c0 with Q(c0) < 0 selecting the cone component"
    )
    c1 = ConeVectorSerializer(help_text="First cone parameter")
    c2 = ConeVectorSerializer(help_text="Second cone parameter")
    a = serializers.ListField(child=RationalField(), help_text="Lattice shift")
    b = serializers.ListField(child=RationalField(), help_text="Phase twist")
    boundary_override = serializers.BooleanField(
        default=False,
        help_text="Accept a outside R(c1) ∩ R(c2) when boundary lines contribute zero"
    )

    def validate(self, attrs):
        n = len(attrs['matrix'])
        for key in ('anchor', 'a', 'b'):
            if len(attrs[key]) != n:
                raise serializers.ValidationError({key: f"expected {n} entries"})
        for key in ('c1', 'c2'):
            cone = attrs[key]
            if len(cone['vector']) != n or len(cone.get('real', cone['vector'])) != n:
                raise serializers.ValidationError({key: f"expected {n} entries"})
        try:
            attrs['spec'] = self._build(attrs)
        except IndefThetaError as e:
            raise serializers.ValidationError({'spec': str(e)})
        except KeyError as e:
            raise serializers.ValidationError({'poly': f"missing key {e}"})
        return attrs

    @staticmethod
    def _build(attrs) -> ThetaSpec:
        n = len(attrs['matrix'])
        f = HomPoly.from_records(n, attrs['poly'], d=attrs.get('degree'))
        return build_spec(
            attrs['matrix'], f, attrs['anchor'],
            attrs['c1']['vector'], attrs['c2']['vector'], attrs['a'], attrs['b'],
            boundary_override=attrs['boundary_override'],
            c1_real=attrs['c1'].get('real'), c2_real=attrs['c2'].get('real'),
        )


class QSeriesSerializer(serializers.Serializer):
    """The q-series file: exponent denominator, order and cyclotomic coefficients"""

    exp_den = serializers.IntegerField(min_value=1, help_text="D with exponents in (1/D)Z")
    order = RationalField(help_text="Every exponent below the order is complete")
    terms = serializers.ListField(
        child=serializers.DictField(),
        help_text='Records {"e": j, "coeff": {"order": M, "coeffs": [...]}} for q^{j/D}'
    )

    def validate(self, attrs):
        try:
            attrs['series'] = QSeries.from_json(attrs)
        except (KeyError, ValueError, TypeError, IndefThetaError) as e:
            raise serializers.ValidationError({'terms': str(e)})
        return attrs


# ============================================================================
# HELPERS
# ============================================================================

def load_spec(data: Dict[str, Any]) -> ThetaSpec:
    """
    Validate spec file content.

    Raises:
        SpecError: with the serializer errors as diagnostics.
    """
    serializer = ThetaSpecSerializer(data=data)
    if not serializer.is_valid():
        raise SpecError("invalid spec file", {'errors': serializer.errors})
    return serializer.validated_data['spec']


def dump_spec(spec: ThetaSpec) -> Dict[str, Any]:
    def cone(c):
        out = {'vector': [str(x) for x in c.require_exact()]}
        if tuple(float(x) for x in c.c) != c.real:
            out['real'] = list(c.real)
        return out

    data = {
        'matrix': spec.Qf.to_list(),
        'poly': spec.f.to_records(),
        'anchor': [str(x) for x in spec.c1.anchor],
        'c1': cone(spec.c1),
        'c2': cone(spec.c2),
        'a': [str(x) for x in spec.a],
        'b': [str(x) for x in spec.b],
        'boundary_override': spec.boundary_override,
    }
    if spec.f.is_zero:
        data['degree'] = spec.d
    return data


def load_series(data: Dict[str, Any]) -> QSeries:
    serializer = QSeriesSerializer(data=data)
    if not serializer.is_valid():
        raise SpecError("invalid series file", {'errors': serializer.errors})
    return serializer.validated_data['series']
