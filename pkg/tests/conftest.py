import numpy as np
import pytest

from dynanet.graph import Network


@pytest.fixture
def triangle() -> Network:
    return Network.build("ABC", [("A", "B"), ("B", "C"), ("A", "C")])


@pytest.fixture
def path3() -> Network:
    return Network.build("abc", [("a", "b"), ("b", "c")])


@pytest.fixture
def star4() -> Network:
    return Network.build(
        ["c", "l1", "l2", "l3", "l4"],
        [("c", "l1"), ("c", "l2"), ("c", "l3"), ("c", "l4")],
    )


@pytest.fixture
def k4() -> Network:
    nodes = ["w", "x", "y", "z"]
    edges = [(u, v) for i, u in enumerate(nodes) for v in nodes[i + 1:]]
    return Network.build(nodes, edges)


@pytest.fixture
def cycle4() -> Network:
    return Network.build("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240901)
