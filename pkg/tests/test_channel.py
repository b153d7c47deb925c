import math

import pytest
from hypothesis import given, strategies as st

from vmimo_game.channel import ChannelModel, free_space_gain, received_snr
from vmimo_game.errors import DomainError


def test_exogenous_ignores_power():
    ch = ChannelModel.exogenous(3.162)
    assert received_snr(ch, 50.0) == 3.162
    assert received_snr(ch, 0.0) == 3.162


def test_link_budget_linear_map():
    assert received_snr(ChannelModel.link_budget(0.1), 10.0) == pytest.approx(1.0, rel=1e-15)


def test_reference_pair():
    gamma_ref = 10 ** (-5 / 10)
    ch = ChannelModel.from_reference(1.0, gamma_ref)
    assert received_snr(ch, 35.0) == pytest.approx(11.0679718105893276619961274055, rel=1e-12)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_reference_round_trip(p_ref, gamma_ref):
    ch = ChannelModel.from_reference(p_ref, gamma_ref)
    assert received_snr(ch, p_ref) == pytest.approx(gamma_ref, rel=1e-12)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_link_budget_homogeneous(a, p):
    ch = ChannelModel.link_budget(0.7)
    assert received_snr(ch, a * p) == pytest.approx(a * received_snr(ch, p), rel=1e-12)


@pytest.mark.parametrize("p", [0.0, -1.0, math.nan])
def test_link_budget_needs_positive_power(p):
    with pytest.raises(DomainError):
        received_snr(ChannelModel.link_budget(1.0), p)


def test_model_invariants():
    with pytest.raises(DomainError):
        ChannelModel.exogenous(0.0)
    with pytest.raises(DomainError):
        ChannelModel.link_budget(-1.0)
    with pytest.raises(DomainError):
        ChannelModel.link_budget(1.0, interference=-0.1)


def test_interference_only_when_enabled():
    assert received_snr(ChannelModel.link_budget(1.0), 10.0, interfering_power=5.0) == 10.0
    coupled = ChannelModel.link_budget(1.0, interference=0.2)
    assert received_snr(coupled, 10.0, interfering_power=5.0) == pytest.approx(5.0)


def test_free_space_gain_scales_inverse_square():
    g1 = free_space_gain(10.0, 2.4e9)
    g2 = free_space_gain(20.0, 2.4e9)
    assert g1 / g2 == pytest.approx(4.0, rel=1e-12)
