import pytest

import sperner_lab as sl


@pytest.fixture(scope="session")
def k32():
    return sl.build(3, 2)


@pytest.fixture(scope="session")
def k34():
    return sl.build(3, 4)


@pytest.fixture(scope="session")
def k45():
    return sl.build(4, 5)


@pytest.fixture(scope="session")
def star_colorings(k45):
    return [sl.coloring_from_scheme(k45, s) for s in sl.star_hypergraph_schemes()]


@pytest.fixture(scope="session")
def path_colorings_factory(k45):
    def make(tiebreak):
        return [
            sl.coloring_from_scheme(k45, s)
            for s in sl.path_hypergraph_schemes(tiebreak)
        ]

    return make
