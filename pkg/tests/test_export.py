import json

import pytest

from errors import OutputError
from export import (HEADER_PREFIX, SIMULATE_COLUMNS, TRIAL_COLUMNS, read_header, render_csv,
                    render_json, write_csv, write_json)
from reports import build_pdf_content, export_pdf

CONFIG = {'packet': {'delta_n': 10.0}, 'run': {'seed': 3}}


def test_csv_layout():
    text = render_csv(CONFIG, SIMULATE_COLUMNS, [(0.0, 0.5, 1.25), (1.0, 2, 'x')])
    lines = text.splitlines()
    assert lines[0] == HEADER_PREFIX + '{"packet":{"delta_n":10.0},"run":{"seed":3}}'
    assert lines[1] == 'tau,phi,density'
    assert lines[2] == '0.0000000000000000e+00,5.0000000000000000e-01,1.2500000000000000e+00'
    assert lines[3] == '1.0000000000000000e+00,2,x'
    assert text.endswith('\n')


def test_column_schemas():
    assert SIMULATE_COLUMNS == ('tau', 'phi', 'density')
    assert TRIAL_COLUMNS == ('trial', 'seed', 'sampled_angle', 'alpha_true_mod', 'alpha_est',
                             'circular_error')


def test_float_cells_round_trip():
    value = 0.1 + 0.2
    cell = render_csv(CONFIG, ('v',), [(value,)]).splitlines()[2]
    assert float(cell) == value


def test_json_layout():
    text = render_json(CONFIG, {'b': 2.0, 'a': 1})
    payload = json.loads(text)
    assert payload == {'config': CONFIG, 'result': {'a': 1, 'b': 2.0}}
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith('}\n')


def test_write_to_stdout(capsys):
    write_json(None, CONFIG, {'a': 1})
    assert json.loads(capsys.readouterr().out)['result'] == {'a': 1}
    write_csv('-', CONFIG, ('v',), [(1,)])
    assert capsys.readouterr().out.splitlines()[1:] == ['v', '1']


def test_write_failure_is_an_output_error(tmp_path):
    with pytest.raises(OutputError) as excinfo:
        write_json(tmp_path / 'missing' / 'out.json', CONFIG, {})
    assert excinfo.value.exit_code == 4
    assert 'missing' in str(excinfo.value)


def test_read_header(tmp_path):
    csv_path = tmp_path / 'out.csv'
    write_csv(csv_path, CONFIG, ('v',), [(1.0,)])
    assert read_header(csv_path) == CONFIG
    json_path = tmp_path / 'out.json'
    write_json(json_path, CONFIG, {'v': 1.0})
    assert read_header(json_path) == CONFIG


def test_read_header_without_config(tmp_path):
    path = tmp_path / 'plain.csv'
    path.write_text('a,b\n1,2\n')
    with pytest.raises(ValueError):
        read_header(path)


def test_pdf_content_has_both_tables():
    content = build_pdf_content('Feasibility', CONFIG, {'revival_time': 1.0854e-7, 'ok': True})
    tables = [item for item in content if type(item).__name__ == 'Table']
    assert len(tables) == 2


def test_export_pdf(tmp_path):
    path = tmp_path / 'report.pdf'
    export_pdf(path, 'Monte Carlo error report', CONFIG, {'rms_relative_error': 0.0159},
               timezone='Europe/Berlin')
    assert path.read_bytes().startswith(b'%PDF')
