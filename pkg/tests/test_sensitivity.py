import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from axionspin import (AxionParams, DeviceScenario, DfszModel, QubitConfig,
                       axion_frequency, beta_min, detection_threshold,
                       dfsz_band, g_ae_limit, scan, snr_amp, snr_db)
from axionspin.physics import _modulation_index_natural
from axionspin.sensitivity import (BEST_CASE_SCENARIO,
                                   CURRENT_DEVICE_SCENARIO, NEXT_GEN_SCENARIO,
                                   default_mass_grid, dfsz_band_range,
                                   stellar_cooling_limit)


def bare_scenario(T2=1e-4):
    return DeviceScenario(Q=1, N=1, t=T2, eta_B=1e-7, T2=T2)


class TestSnrAmp:
    def test_best_case_22p5_db(self, qubit):
        a = AxionParams(m_a=3e-6)
        amp = snr_amp(BEST_CASE_SCENARIO, a, qubit)
        assert amp == pytest.approx(13.335, rel=0.01)
        assert snr_db(amp) == pytest.approx(22.5, abs=0.5)

    def test_decoupled_gives_zero(self, qubit):
        a = AxionParams(m_a=3e-6, g_ae=0.0)
        assert snr_amp(BEST_CASE_SCENARIO, a, qubit) == 0.0

    def test_sqrt_n_scaling_unentangled(self, qubit):
        a = AxionParams(m_a=3e-6)
        s1 = DeviceScenario(Q=1e4, N=100, t=1.0, eta_B=1e-7, T2=1e-4,
                            entangled=False)
        s4 = DeviceScenario(Q=1e4, N=400, t=1.0, eta_B=1e-7, T2=1e-4,
                            entangled=False)
        assert snr_amp(s4, a, qubit) == pytest.approx(2 * snr_amp(s1, a, qubit))

    @given(n=st.floats(1.0, 1e10))
    @settings(max_examples=40, deadline=None)
    def test_entangled_over_unentangled_is_sqrt_n(self, n):
        a = AxionParams(m_a=3e-6)
        q = QubitConfig(B0=0.5)
        ent = DeviceScenario(Q=10, N=n, t=1.0, eta_B=1e-7, T2=1e-4,
                             entangled=True)
        arr = DeviceScenario(Q=10, N=n, t=1.0, eta_B=1e-7, T2=1e-4,
                             entangled=False)
        assert snr_amp(ent, a, q) / snr_amp(arr, a, q) == pytest.approx(
            math.sqrt(n), rel=1e-9)


class TestBetaMin:
    def test_reference_floor_q1(self):
        f_axion = axion_frequency(AxionParams(m_a=1e-6))
        floor = beta_min(bare_scenario(), f_axion)
        assert floor == pytest.approx(4.789e-18, rel=1e-3)
        assert 1e-17 / 3 <= floor <= 1e-17 * 3

    def test_reference_floor_q1e5(self):
        f_axion = axion_frequency(AxionParams(m_a=1e-6))
        s = DeviceScenario(Q=1e5, N=1, t=1e-4, eta_B=1e-7, T2=1e-4)
        floor = beta_min(s, f_axion)
        assert floor == pytest.approx(4.789e-23, rel=1e-3)
        assert 1e-22 / 3 <= floor <= 1e-22 * 3

    def test_perfect_sensor_limit(self):
        s = DeviceScenario(Q=1e5, N=1e6, t=1.0, eta_B=1e-30, T2=1e-4)
        assert beta_min(s, 1e9) == pytest.approx(0.0, abs=1e-40)

    def test_product_invariant(self):
        # beta_min * Q * N * sqrt(t) * f_axion collapses to a constant
        reference = None
        for Q, N, t, f in ((10, 10, 1.0, 1e8), (1e5, 1e6, 3600.0, 1e9),
                           (2.0, 1e3, 0.25, 2.4e8)):
            s = DeviceScenario(Q=Q, N=N, t=t, eta_B=1e-7, T2=1e-4)
            product = beta_min(s, f) * Q * N * math.sqrt(t) * f
            if reference is None:
                reference = product
            assert product == pytest.approx(reference, rel=1e-12)

    def test_rejects_nonpositive_frequency(self):
        with pytest.raises(ValueError):
            beta_min(bare_scenario(), 0.0)


class TestDetectionThreshold:
    def test_boundary_inclusive(self):
        floor = 1e-22
        assert detection_threshold(5 * floor, floor) is True

    def test_zero_beta_rejected(self):
        assert detection_threshold(0.0, 1e-22) is False

    def test_reference_anchor_pair(self):
        # beta ~ 1e-21 against the Q=1e5 floor ~1e-22: 10 >= 5
        assert detection_threshold(1e-21, 1e-22) is True

    @given(scale=st.floats(1e-10, 1e10), beta=st.floats(1e-25, 1e-15),
           floor=st.floats(1e-25, 1e-15))
    @settings(max_examples=60, deadline=None)
    def test_scale_invariance(self, scale, beta, floor):
        assert detection_threshold(beta, floor) == \
            detection_threshold(scale * beta, scale * floor)


class TestGaeLimit:
    def test_inversion_consistency(self, qubit):
        # plugging the limit back reproduces beta = 5 * beta_min
        m_a = 1e-5
        s = CURRENT_DEVICE_SCENARIO
        g_lim = g_ae_limit(m_a, s)
        a = AxionParams(m_a=m_a, g_ae=g_lim)
        beta = _modulation_index_natural(a)
        floor = beta_min(s, axion_frequency(a))
        assert beta == pytest.approx(5 * floor, rel=1e-10)

    def test_bisection_oracle(self):
        # independent threshold-inversion by bisection on g_ae
        m_a = 3e-6
        s = NEXT_GEN_SCENARIO
        lo, hi = 1e-40, 1e-5
        for _ in range(200):
            mid = math.sqrt(lo * hi)
            a = AxionParams(m_a=m_a, g_ae=mid)
            beta = _modulation_index_natural(a)
            if detection_threshold(beta, beta_min(s, axion_frequency(a))):
                hi = mid
            else:
                lo = mid
        assert g_ae_limit(m_a, s) == pytest.approx(hi, rel=1e-6)

    def test_monotone_in_scenario_strength(self):
        base = DeviceScenario(Q=1e4, N=100, t=100.0, eta_B=1e-7, T2=1e-3)
        better_q = DeviceScenario(Q=1e5, N=100, t=100.0, eta_B=1e-7, T2=1e-3)
        better_n = DeviceScenario(Q=1e4, N=1000, t=100.0, eta_B=1e-7, T2=1e-3)
        better_t = DeviceScenario(Q=1e4, N=100, t=10000.0, eta_B=1e-7, T2=1e-3)
        g0 = g_ae_limit(1e-6, base)
        for s in (better_q, better_n, better_t):
            assert g_ae_limit(1e-6, s) < g0

    def test_mass_independent_under_enhanced_floor(self):
        s = CURRENT_DEVICE_SCENARIO
        assert g_ae_limit(1e-6, s) == pytest.approx(g_ae_limit(1e-3, s),
                                                    rel=1e-12)


class TestDfsz:
    def test_tan_beta_one_coefficient(self):
        model = DfszModel(tan_beta_a=1.0, f_a=1e9, variant="I")
        assert model.coupling_coefficient == pytest.approx(1 / 6, rel=1e-12)

    def test_hand_value(self):
        # C_e = 1/6, m_e = 0.511 MeV, f_a = 1e9 GeV
        g = dfsz_band(DfszModel(tan_beta_a=1.0, f_a=1e9, variant="I"))
        assert g == pytest.approx(8.517e-14, rel=1e-3)
        assert g <= 1e-13

    @given(tan_beta=st.floats(0.1, 50.0))
    @settings(max_examples=50, deadline=None)
    def test_variant_symmetry(self, tan_beta):
        # DFSZ-I(beta) == DFSZ-II(pi/2 - beta)
        g1 = dfsz_band(DfszModel(tan_beta, 1e10, "I"))
        g2 = dfsz_band(DfszModel(1.0 / tan_beta, 1e10, "II"))
        assert g1 == pytest.approx(g2, rel=1e-9)

    def test_band_contains_midline(self):
        lo, hi = dfsz_band_range(1e9, "I")
        mid = dfsz_band(DfszModel(1.0, 1e9, "I"))
        assert lo < mid < hi

    def test_f_a_window_enforced(self):
        with pytest.raises(ValueError):
            DfszModel(tan_beta_a=1.0, f_a=1e8)


class TestScan:
    def test_single_point(self):
        rows = scan([1e-6], {"current": CURRENT_DEVICE_SCENARIO},
                    DfszModel(1.0, 1e9))
        assert len(rows) == 1
        assert rows[0].f_axion_hz == pytest.approx(2.4179892e8, rel=1e-6)

    def test_grid_endpoint_frequencies(self):
        rows = scan(default_mass_grid(3),
                    {"current": CURRENT_DEVICE_SCENARIO}, DfszModel(1.0, 1e9))
        assert rows[0].f_axion_hz == pytest.approx(2.4179892e8, rel=1e-6)
        assert rows[-1].f_axion_hz == pytest.approx(2.4179892e11, rel=1e-6)

    def test_next_gen_below_current_everywhere(self):
        rows = scan(default_mass_grid(31),
                    {"current": CURRENT_DEVICE_SCENARIO,
                     "next_gen": NEXT_GEN_SCENARIO}, DfszModel(1.0, 1e9))
        for row in rows:
            assert row.g_ae_limits["next_gen"] < row.g_ae_limits["current"]

    def test_row_monotone_in_q(self):
        masses = [1e-6, 1e-5]
        weak = DeviceScenario(Q=1e3, N=16, t=3600.0, eta_B=1e-7, T2=1e-3)
        strong = DeviceScenario(Q=1e6, N=16, t=3600.0, eta_B=1e-7, T2=1e-3)
        rows = scan(masses, {"weak": weak, "strong": strong},
                    DfszModel(1.0, 1e9))
        for row in rows:
            assert row.g_ae_limits["strong"] < row.g_ae_limits["weak"]

    def test_rejects_empty_grid(self):
        with pytest.raises(ValueError):
            scan([], {"current": CURRENT_DEVICE_SCENARIO}, DfszModel(1.0, 1e9))


def test_stellar_cooling_reference_loads():
    g = stellar_cooling_limit()
    assert 1e-14 < g < 1e-12


def test_scenario_validation():
    with pytest.raises(ValueError):
        DeviceScenario(Q=0.5, N=1, t=1.0, eta_B=1e-7, T2=1e-4)
    with pytest.raises(ValueError):
        DeviceScenario(Q=1, N=0, t=1.0, eta_B=1e-7, T2=1e-4)
    with pytest.raises(ValueError):
        DeviceScenario(Q=1, N=1, t=-1.0, eta_B=1e-7, T2=1e-4)
