import pytest

from bratteli import generators as gen


def suite_diagrams(levels=10):
    """The standard example family used across the tests."""
    odo = {d: gen.odometer(d, levels) for d in (2, 3, 5)}
    fib = gen.stationary_adic([[1, 1], [1, 0]], levels)
    union2 = gen.disjoint_union([odo[2], odo[3]])
    union3 = gen.disjoint_union([odo[2], odo[3], odo[5]])
    return {
        "odometer2": odo[2],
        "odometer3": odo[3],
        "odometer5": odo[5],
        "fibonacci": fib,
        "union2": union2,
        "union3": union3,
    }


@pytest.fixture(scope="session")
def suite():
    return suite_diagrams()
