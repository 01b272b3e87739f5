import pytest
from pydantic import ValidationError

from rational_white_noise.config import CalculusEntryPoint, Config, config


def test_entry_points_load_their_modules():
    for key in config.keys():
        entry_point = config.get_entry_point(key)
        assert isinstance(entry_point, CalculusEntryPoint)
        module = entry_point.load()
        assert module.__name__.startswith('rational_white_noise')
    assert config.get_entry_point('series').load().__name__ == (
        'rational_white_noise.series.general'
    )


def test_defaults():
    assert config.get_entry_point('general').degree == 6
    assert config.get_entry_point('general').max_var == 4
    assert config.get_entry_point('general').tolerance == 1e-12
    assert config.get_entry_point('whitenoise').seed == 42
    assert config.get_entry_point('whitenoise').samples == 100_000
    assert config.get_entry_point('kernels').psd_tolerance == -1e-10
    assert config.get_entry_point('realization').tolerance == 1e-9


def test_unknown_calculus():
    with pytest.raises(KeyError):
        config.get_entry_point('plotting')
    with pytest.raises(KeyError):
        Config(modules={}).get_entry_point('series')


def test_update_validates(restore_config):
    restore_config.update({'whitenoise': {'seed': 7}})
    assert config.get_entry_point('whitenoise').seed == 7
    with pytest.raises(ValueError):
        restore_config.update({'whitenoise': {'colour': 'red'}})
    with pytest.raises(ValidationError):
        restore_config.update({'general': {'degree': -1}})


def test_load_yaml(tmp_path, restore_config):
    path = tmp_path / 'overrides.yaml'
    path.write_text(
        'general:\n  degree: 3\nkernels:\n  slice_grid: 64\n', encoding='utf-8'
    )
    restore_config.load_yaml(path)
    assert config.get_entry_point('general').degree == 3
    assert config.get_entry_point('kernels').slice_grid == 64

    path.write_text('- not a mapping\n', encoding='utf-8')
    with pytest.raises(ValueError):
        restore_config.load_yaml(path)


def test_base_entry_point_has_no_module():
    with pytest.raises(NotImplementedError):
        CalculusEntryPoint(name='Bare').load()
