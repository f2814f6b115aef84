import math

import pytest
from hypothesis import given, strategies as st

from casimir_lab import modulation as mod
from casimir_lab.errors import InvalidDimensionError


def test_unmodulated_returns_bare():
    law = mod.constant(2.5)
    for t in (0.0, 1.0, 17.3):
        assert mod.evaluate(law, t) == 2.5


def test_single_tone_value():
    law = mod.single_tone(1.0, 0.1, eta=2.0)
    assert mod.evaluate(law, math.pi / 4) == pytest.approx(1.1, abs=1e-15)


def test_zero_phase_tones_vanish_at_origin():
    law = mod.ParameterLaw(0.7, 0.3, (mod.ModulationComponent(2.0),
                                      mod.ModulationComponent(0.01, 0.5)))
    assert mod.evaluate(law, 0.0) == 0.7


def test_complex_depth_examples():
    law = mod.single_tone(1.0, 0.25, eta=2.0)
    assert mod.complex_depth(law, 0) == pytest.approx(0.25)
    law = mod.single_tone(1.0, 0.25, eta=2.0, phase=math.pi / 2)
    assert mod.complex_depth(law, 0) == pytest.approx(0.25j)
    law = mod.single_tone(1.0, 0.2, eta=2.0, weight=0.5, phase=math.pi)
    assert mod.complex_depth(law, 0) == pytest.approx(-0.1)


def test_complex_depth_index_guard():
    law = mod.single_tone(1.0, 0.1, eta=2.0)
    with pytest.raises(InvalidDimensionError):
        mod.complex_depth(law, 1)


def test_classify_tones():
    law = mod.ParameterLaw(1.0, 0.1, (mod.ModulationComponent(2.0),
                                      mod.ModulationComponent(0.01),
                                      mod.ModulationComponent(0.5)))
    fast, slow = mod.classify_tones(law, omega0=1.0)
    assert fast == (0, 2)  # boundary inclusive on the fast side
    assert slow == (1,)


def test_distinct_tone_frequencies_required():
    with pytest.raises(InvalidDimensionError):
        mod.ParameterLaw(1.0, 0.1, (mod.ModulationComponent(2.0),
                                    mod.ModulationComponent(2.0, 0.5)))


def test_commensurate_periodicity():
    # tones at 2 and 3 (gcd 1): period 2*pi
    law = mod.ParameterLaw(0.3, 0.2, (mod.ModulationComponent(2.0, 1.0, 0.4),
                                      mod.ModulationComponent(3.0, 0.7, 1.1)))
    period = 2.0 * math.pi
    for t in (0.0, 0.37, 1.9):
        assert mod.evaluate(law, t) == pytest.approx(mod.evaluate(law, t + period), abs=1e-12)


@given(st.floats(-50.0, 50.0), st.floats(0.0, 2.0),
       st.lists(st.tuples(st.floats(0.01, 10.0), st.floats(0.0, 1.0),
                          st.floats(-math.pi, math.pi)),
                min_size=1, max_size=4, unique_by=lambda c: c[0]),
       st.floats(-100.0, 100.0))
def test_evaluation_bounded_by_total_weight(bare, depth, comps, t):
    law = mod.ParameterLaw(bare, depth,
                           tuple(mod.ModulationComponent(*c) for c in comps))
    bound = depth * sum(c[1] for c in comps)
    assert abs(mod.evaluate(law, t) - bare) <= bound + 1e-12
