import logging

import pytest
import structlog

from rational_white_noise.config import config


@pytest.fixture(scope='session', autouse=True)
def configure_structlog():
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.KeyValueRenderer(key_order=['level', 'event']),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(logging.DEBUG),
        cache_logger_on_first_use=False,
    )


@pytest.fixture
def logger():
    return structlog.get_logger()


@pytest.fixture
def restore_config():
    saved = {key: config.get_entry_point(key).model_dump() for key in config.keys()}
    yield config
    for key, values in saved.items():
        entry_point = config.get_entry_point(key)
        for field, value in values.items():
            setattr(entry_point, field, value)
