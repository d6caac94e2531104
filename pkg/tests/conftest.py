import pytest
from fractions import Fraction

from kolmlab.machine import Budget
from kolmlab.measures import (
    DeterministicMeasure,
    IIDMeasure,
    Lemma5Measure,
    MarkovMeasure,
    MeasureRegistry,
    MixtureMeasure,
    MixturePredictor,
    UniformMeasure,
    repeat_generator,
)


@pytest.fixture
def budget():
    return Budget(max_steps=10_000, max_output=4096)


def make_markov_chain():
    """Order-1 binary chain with all conditionals far from 1/(3 ln 2)."""
    return MarkovMeasure(
        1,
        {
            (): (Fraction(1, 2), Fraction(1, 2)),
            (0,): (Fraction(2, 3), Fraction(1, 3)),
            (1,): (Fraction(1, 4), Fraction(3, 4)),
        },
    )


def make_zoo_registry():
    """One measure per variant, all binary (one block-encoded 16-ary)."""
    reg = MeasureRegistry()
    reg.register(UniformMeasure(2))
    reg.register(IIDMeasure([Fraction(1, 4), Fraction(3, 4)]))
    reg.register(IIDMeasure([Fraction(1, 16), Fraction(15, 16)]))
    reg.register(make_markov_chain())
    reg.register(Lemma5Measure(3))
    reg.register(DeterministicMeasure(repeat_generator("1", 5)))
    reg.register(
        MixtureMeasure(
            [UniformMeasure(2), IIDMeasure([Fraction(1, 4), Fraction(3, 4)])],
            [Fraction(1, 2), Fraction(1, 2)],
        )
    )
    reg.register(DeterministicMeasure(repeat_generator("1001", 3), alphabet_size=16))
    return reg


@pytest.fixture(scope="session")
def zoo_registry():
    return make_zoo_registry()


@pytest.fixture(scope="session")
def zoo_predictor(zoo_registry):
    return MixturePredictor(zoo_registry, 18, 10_000)
