import pytest

from supertrees import ProblemInstance, parse_newick


@pytest.fixture
def instance():
    """Build a ProblemInstance from Newick lines."""

    def make(*lines, mode="rooted"):
        return ProblemInstance.from_newick(lines, mode)

    return make


@pytest.fixture
def rooted():
    return lambda text: parse_newick(text, "rooted")


@pytest.fixture
def unrooted():
    return lambda text: parse_newick(text, "unrooted")
