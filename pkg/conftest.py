"""
Shared fixtures for the markedgroups test suite
"""
import pytest
from hypothesis import HealthCheck, settings

from markedgroups.models.graphprod import wreath_family
from markedgroups.models.words import Alphabet
from markedgroups.services.presentation_service import parse_presentation

settings.register_profile(
    'markedgroups',
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile('markedgroups')

SURFACE_TEXT = "x1 y1 x2 y2\n# genus 2\nx1 y1 X1 Y1 x2 y2 X2 Y2\n"
SURFACE_RELATOR = "x1 y1 X1 Y1 x2 y2 X2 Y2"
WREATH_TEXT = "t x\nt x T x t X T X\nt t x T T x t t X T T X\n"


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: exhaustive checks that take minutes; deselect with -m "not slow"')


@pytest.fixture
def xy():
    return Alphabet.of('x', 'y')


@pytest.fixture
def surface():
    """(alphabet, family) of the genus-2 surface group"""
    return parse_presentation(SURFACE_TEXT)


@pytest.fixture
def wreath3():
    return wreath_family(3)


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path as a string"""
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return str(path)
    return _write
