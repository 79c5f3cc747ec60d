"""Shared fixtures: the 6x6 worked example and its independently computed
reference values (plain-Python two-pass formulas, frozen before the build)."""
from __future__ import annotations

import pytest

from clustsim import DataMatrix, Partition

# 6 rows x 6 columns; two reasonable 3-cluster readings compete on it:
# single-linkage sees {X1,X2,X5,X6}|{X3}|{X4}, PAM sees {X1,X2}|{X3,X4}|{X5,X6}
DEMO_ROWS = [
    [-0.440, 0.563, -0.452, -1.155, 1.125, 1.162],
    [-0.531, -0.785, -0.340, -0.793, 0.682, 1.003],
    [0.613, 1.310, -1.582, -2.209, 1.442, 1.966],
    [-0.912, -1.765, -0.491, -0.796, -1.520, -1.820],
    [1.743, 2.185, -1.480, 0.003, 1.010, 1.216],
    [0.422, 0.072, 1.604, 1.136, -0.064, 0.238],
]

# reference distance matrix for DEMO_ROWS, computed independently with the
# textbook two-pass correlation formula (no numpy) and d = sqrt(2*(1-rho))
DEMO_DISTANCES = [
    [0.0, 0.468490718256, 1.607697751366, 1.227678481294, 0.984014108641, 0.959000218149],
    [0.468490718256, 0.0, 1.697015029022, 1.451132224339, 0.641287718547, 0.661271236298],
    [1.607697751366, 1.697015029022, 0.0, 0.726675699636, 1.687442822032, 1.653807726984],
    [1.227678481294, 1.451132224339, 0.726675699636, 0.0, 1.646581137776, 1.62368538307],
    [0.984014108641, 0.641287718547, 1.687442822032, 1.646581137776, 0.0, 0.141183652259],
    [0.959000218149, 0.661271236298, 1.653807726984, 1.62368538307, 0.141183652259, 0.0],
]

DEMO_RHO_12 = 0.890258223454  # pearson(X1, X2) by the same independent route

# single-linkage merge heights on DEMO_ROWS, from a by-hand re-scan trace
DEMO_MERGE_HEIGHTS = [0.141183652259, 0.468490718256, 0.641287718547, 0.726675699636, 1.227678481294]

# least-squares fits on DEMO_ROWS, closed-form formulas evaluated separately:
# (source, target, intercept, slope, residual sd with df = n - 2)
DEMO_FITS_PAIRED = [  # under {X1,X2}|{X3,X4}|{X5,X6}
    (0, 1, 0.0697432205, 1.2978108126, 0.7247286645),
    (2, 3, -0.3054487659, 0.7228410816, 0.8524881561),
    (4, 5, 0.0936604271, 1.1973971729, 0.2077749601),
]
DEMO_FITS_CHAIN = [  # under {X1,X2,X5,X6}|{X3}|{X4}
    (0, 1, 0.0697432205, 1.2978108126, 0.7247286645),
    (0, 4, 0.3598382028, 0.5765036686, 1.0450110784),
    (0, 5, 0.5185935149, 0.7300993414, 1.2415954658),
]


@pytest.fixture(scope="session")
def demo_matrix() -> DataMatrix:
    return DataMatrix(DEMO_ROWS)


@pytest.fixture(scope="session")
def singleton_heavy() -> Partition:
    """The 4+1+1 reading of the demo data."""
    return Partition(((0, 1, 4, 5), (2,), (3,)))


@pytest.fixture(scope="session")
def paired() -> Partition:
    """The 2+2+2 reading of the demo data."""
    return Partition(((0, 1), (2, 3), (4, 5)))
