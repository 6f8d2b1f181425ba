import pytest

from otcohom import numfield, otdata
from otcohom.presets import PRESETS


def build_preset_structure(name: str) -> otdata.OTStructure:
    p = PRESETS[name]
    field = numfield.parse_field(p.field_coeffs)
    return otdata.build_ot_structure(field, p.units)


@pytest.fixture(scope="session")
def cubic_ot():
    """Signature (1,1) structure on x^3 - x - 1 with unit theta."""
    return build_preset_structure("inoue-cubic")


@pytest.fixture(scope="session")
def quartic_ot():
    """Signature (2,1) structure on x^4 - x^3 - 1 with two units."""
    return build_preset_structure("quartic-s2")
