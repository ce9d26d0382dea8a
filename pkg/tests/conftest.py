import pytest

from urnlab import UrnSpec, iter_grid

GRID = tuple(iter_grid())


@pytest.fixture(scope="session")
def grid():
    return GRID


def spec_id(spec: UrnSpec) -> str:
    return f"{spec.model.value}-m{spec.m}-c{spec.c}-{'_'.join(map(str, spec.counts))}"
