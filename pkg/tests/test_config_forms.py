import pytest
from scipy import constants

from config import DEFAULTS, embedded_config, load_config, thresholds_from, validate_config
from errors import ConfigError
from export import render_csv, render_json
from forms import validate_section
from revival import Thresholds


def resolve(path=None, overrides=None):
    return validate_config(load_config(path, overrides))


def test_defaults_validate():
    resolved = resolve()
    assert resolved['packet'] == {'delta_n': 10.0, 'n0': 0, 'phi0': 0.0, 'cutoff': None}
    assert resolved['ring']['mass'] == pytest.approx(constants.m_e)
    assert resolved['ring']['rel_enabled'] is False
    assert resolved['run']['tau_grid'] == pytest.approx([0.0, 0.25, 1 / 3, 0.5, 1.0])
    assert resolved['run']['stencil'] == 'spectral'
    assert thresholds_from(resolved) == Thresholds()


def test_toml_file_layer(tmp_path):
    path = tmp_path / 'run.toml'
    path.write_text('[packet]\ndelta_n = 20\n\n[RUN]\nseed = 5\ntau_grid = "1/3, 1"\n')
    resolved = resolve(path)
    assert resolved['packet']['delta_n'] == 20.0
    assert resolved['run']['seed'] == 5
    assert resolved['run']['tau_grid'] == pytest.approx([1 / 3, 1.0])


def test_environment_overrides_file(tmp_path, monkeypatch):
    path = tmp_path / 'run.toml'
    path.write_text('[packet]\ndelta_n = 20\n')
    monkeypatch.setenv('RINGFLUX_PACKET__DELTA_N', '15')
    monkeypatch.setenv('RINGFLUX_RING__REL_ENABLED', 'true')
    resolved = resolve(path)
    assert resolved['packet']['delta_n'] == 15.0
    assert resolved['ring']['rel_enabled'] is True


def test_flags_override_environment(monkeypatch):
    monkeypatch.setenv('RINGFLUX_PACKET__DELTA_N', '15')
    resolved = resolve(overrides={'PACKET': {'delta_n': 12.0, 'n0': None}})
    assert resolved['packet']['delta_n'] == 12.0
    assert resolved['packet']['n0'] == 0


def test_defaults_are_not_mutated():
    resolve(overrides={'RUN': {'seed': 77}})
    assert DEFAULTS['RUN']['seed'] == 0


@pytest.mark.parametrize('overrides, field', [
    ({'PACKET': {'delta_n': -1}}, 'packet.delta_n'),
    ({'PACKET': {'cutoff': 10}}, 'packet.cutoff'),
    ({'RING': {'radius': 0}}, 'ring.radius'),
    ({'RUN': {'tau_grid': ''}}, 'run.tau_grid'),
    ({'RUN': {'tau_grid': '0,-1'}}, 'run.tau_grid'),
    ({'RUN': {'tau_grid': '1/0'}}, 'run.tau_grid'),
    ({'RUN': {'stencil': 'upwind'}}, 'run.stencil'),
    ({'RUN': {'trials': 0}}, 'run.trials'),
    ({'RUN': {'bogus': 1}}, 'run.bogus'),
    ({'ANALYSIS': {'secondary_max': 2.0}}, 'analysis.secondary_max'),
])
def test_invalid_settings(overrides, field):
    with pytest.raises(ConfigError) as excinfo:
        resolve(overrides=overrides)
    assert field in excinfo.value.field_errors
    assert excinfo.value.exit_code == 2
    assert field in str(excinfo.value)


def test_errors_from_several_sections_are_collected():
    with pytest.raises(ConfigError) as excinfo:
        resolve(overrides={'PACKET': {'delta_n': 0}, 'RING': {'mass': -1}})
    assert {'packet.delta_n', 'ring.mass'} <= set(excinfo.value.field_errors)


def test_validate_section_coerces_types():
    data = validate_section('packet', {'delta_n': '7.5', 'n0': '-2', 'phi0': 1, 'cutoff': 45})
    assert data == {'delta_n': 7.5, 'n0': -2, 'phi0': 1.0, 'cutoff': 45}


def test_section_must_be_a_table():
    with pytest.raises(ConfigError):
        load_config(overrides={'PACKET': 3})


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / 'missing.toml')


def test_embedded_config_drops_execution_settings():
    header = embedded_config(resolve(overrides={'RUN': {'workers': 4}}))
    assert 'workers' not in header['run']
    assert 'seed' in header['run']


@pytest.mark.parametrize('suffix', ['.json', '.csv'])
def test_output_header_replays(tmp_path, suffix):
    resolved = resolve(overrides={'PACKET': {'delta_n': 14.0}, 'RUN': {'tau_grid': '0,1/3'}})
    header = embedded_config(resolved)
    path = tmp_path / f'out{suffix}'
    if suffix == '.json':
        path.write_text(render_json(header, {'x': 1.0}))
    else:
        path.write_text(render_csv(header, ('a',), [(1.0,)]))
    replayed = embedded_config(resolve(path))
    assert replayed == header
