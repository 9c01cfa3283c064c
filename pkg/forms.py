import math

from werkzeug.datastructures import MultiDict
from wtforms import BooleanField, FloatField, Form, IntegerField, SelectField, StringField
from wtforms.validators import InputRequired, NumberRange, Optional, ValidationError

from errors import ConfigError
from grid_oracle import STENCILS
from ring import CUTOFF_WIDTHS
from utils import parse_tau_grid


class Positive:
    """Strictly positive number"""

    def __init__(self, message=None):
        self.message = message or 'Must be greater than 0.'

    def __call__(self, form, field):
        if field.data is not None and not field.data > 0:
            raise ValidationError(self.message)


class TauGridField(StringField):
    """Comma-separated dimensionless times; fractions such as 1/3 allowed"""

    def process_formdata(self, valuelist):
        if not valuelist:
            return
        try:
            self.data = parse_tau_grid(valuelist[0])
        except (ValueError, ZeroDivisionError) as exc:
            self.data = None
            raise ValueError('Not a valid list of times.') from exc

    def pre_validate(self, form):
        if self.data is not None:
            if not self.data:
                raise ValidationError('At least one time is required.')
            if any(t < 0 for t in self.data):
                raise ValidationError('Times must be non-negative.')


class PacketForm(Form):
    delta_n = FloatField('delta_n', validators=[InputRequired(), Positive()])
    n0 = IntegerField('n0', validators=[InputRequired()])
    phi0 = FloatField('phi0', validators=[InputRequired()])
    cutoff = IntegerField('cutoff', validators=[Optional(), NumberRange(min=1)])

    def validate_cutoff(form, field):
        if form.delta_n.data and field.data < math.ceil(CUTOFF_WIDTHS * form.delta_n.data):
            raise ValidationError(
                f'Must be at least ceil({CUTOFF_WIDTHS}·delta_n) = '
                f'{math.ceil(CUTOFF_WIDTHS * form.delta_n.data)}.')


class RingForm(Form):
    mass = FloatField('mass', validators=[InputRequired(), Positive()])
    radius = FloatField('radius', validators=[InputRequired(), Positive()])
    alpha = FloatField('alpha', validators=[InputRequired()])
    flux = FloatField('flux', validators=[Optional()])
    rel_enabled = BooleanField('rel_enabled')


class RunForm(Form):
    seed = IntegerField('seed', validators=[InputRequired(), NumberRange(min=0)])
    trials = IntegerField('trials', validators=[InputRequired(), NumberRange(min=1)])
    grid_size = IntegerField('grid_size', validators=[InputRequired(), NumberRange(min=8)])
    workers = IntegerField('workers', validators=[InputRequired(), NumberRange(min=1)])
    shots = IntegerField('shots', validators=[InputRequired(), NumberRange(min=1)])
    tau_grid = TauGridField('tau_grid', validators=[InputRequired()])
    dtau = FloatField('dtau', validators=[InputRequired(), Positive()])
    oracle_grid_size = IntegerField('oracle_grid_size', validators=[InputRequired(), NumberRange(min=8)])
    oracle_tau_grid = TauGridField('oracle_tau_grid', validators=[InputRequired()])
    stencil = SelectField('stencil', choices=[(s, s) for s in STENCILS], validators=[InputRequired()])


class AnalysisForm(Form):
    resultant_min = FloatField('resultant_min', validators=[InputRequired(), NumberRange(min=0, max=1)])
    variance_max = FloatField('variance_max', validators=[InputRequired(), NumberRange(min=0, max=1)])
    secondary_max = FloatField('secondary_max', validators=[InputRequired(), NumberRange(min=0, max=1)])
    lobe_weight_min = FloatField('lobe_weight_min', validators=[InputRequired(), NumberRange(min=0, max=1)])


SECTION_FORMS = {
    'packet': PacketForm,
    'ring': RingForm,
    'run': RunForm,
    'analysis': AnalysisForm,
}


def _to_text(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, (list, tuple)):
        return ','.join(repr(float(v)) for v in value)
    return str(value)


def validate_section(name, values):
    """Validate one config section; returns the coerced field data"""
    form_class = SECTION_FORMS[name]
    formdata = MultiDict({key: _to_text(value) for key, value in values.items() if value is not None})
    form = form_class(formdata=formdata)
    if not form.validate():
        raise ConfigError({f'{name}.{field}': '; '.join(messages)
                           for field, messages in form.errors.items()})
    unknown = set(values) - set(form.data)
    if unknown:
        raise ConfigError({f'{name}.{key}': 'Unknown setting.' for key in unknown})
    return dict(form.data)
