import pytest

from bdew.bivariate import BdewParams

# battery of parameter sets with compact supports (grids stay affordable);
# the near-zero beta3 entry exercises the independence limit
BATTERY = [
    BdewParams(1.0, 0.5, 1.0, 1.0, 1.0),
    BdewParams(1.0, 0.5, 2.0, 0.5, 1.5),
    BdewParams(1.0, 0.2, 0.7, 1.3, 2.0),
    BdewParams(1.0, 0.8, 1.0, 1.0, 1.0),
    BdewParams(1.0, 0.9, 3.0, 2.0, 1.0),
    BdewParams(0.5, 0.2, 1.0, 1.0, 1.0),
    BdewParams(0.5, 0.3, 2.0, 1.0, 0.5),
    BdewParams(0.7, 0.4, 1.5, 2.5, 0.8),
    BdewParams(2.0, 0.5, 1.0, 1.0, 1.0),
    BdewParams(2.0, 0.9, 0.3, 3.3, 2.0),
    BdewParams(2.0, 0.99, 1.5, 3.3, 4.4),
    BdewParams(1.5, 0.9, 2.0, 2.0, 2.0),
    BdewParams(1.5, 0.5, 0.3, 0.3, 0.3),
    BdewParams(1.3, 0.7, 1.2, 1.2, 1.2),
    BdewParams(0.9, 0.9, 0.3, 3.3, 2.0),
    BdewParams(0.8, 0.6, 1.0, 2.0, 0.5),
    BdewParams(1.2, 0.85, 0.6, 1.1, 2.2),
    BdewParams(3.5, 0.9998, 0.5, 1.2, 1.6),
    BdewParams(1.0, 0.5, 5.0, 5.0, 5.0),
    BdewParams(2.5, 0.95, 0.8, 0.8, 0.8),
    BdewParams(1.0, 0.5, 1.0, 1.0, 1e-8),
    BdewParams(1.0, 0.3, 10.0, 0.1, 1.0),
]


@pytest.fixture(scope="session")
def battery():
    return BATTERY
