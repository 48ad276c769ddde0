import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose
from scipy.stats import unitary_group

from gwldiscord.measures import pure_concurrence
from gwldiscord.numkernel import I2, I4, SWAP, herm_eigvals
from gwldiscord.states import (
    NAMED_STATES,
    PureState,
    apply_unitary,
    apply_unitary_to_state,
    gwl,
    named_state,
    parse_state,
    partial_trace,
    random_pure_state,
    reduced,
    reduced_gwl,
    spin_flip,
    validate_density,
    werner,
)

R2, R5, R6, R35 = math.sqrt(2), math.sqrt(5), math.sqrt(6), math.sqrt(35)
seeds = st.integers(min_value=0, max_value=2**32 - 1)
ps = st.floats(min_value=-1 / 3, max_value=1.0)


def reference_matrix(name, p):
    if name == "psi1":
        m = [
            [16 - 9 * p, 3 * R35 * p, R35 * p, 7 * p],
            [3 * R35 * p, 16 + 29 * p, 15 * p, 3 * R35 * p],
            [R35 * p, 15 * p, 16 - 11 * p, R35 * p],
            [7 * p, 3 * R35 * p, R35 * p, 16 - 9 * p],
        ]
        return np.array(m) / 64
    if name == "psi2":
        m = [
            [9, 9 * R2 * p, -6 * R2 * p, -3 * p],
            [9 * R2 * p, 9 * (1 + p), -12 * p, -3 * R2 * p],
            [-6 * R2 * p, -12 * p, 9 - p, 2 * R2 * p],
            [-3 * p, -3 * R2 * p, 2 * R2 * p, 9 - 8 * p],
        ]
        return np.array(m) / 36
    if name == "psi3":
        m = [
            [10 - p, 3 * R6 * p, 6 * R6 * p, -3 * p],
            [3 * R6 * p, 10 - 4 * p, 12 * p, -R6 * p],
            [6 * R6 * p, 12 * p, 2 * (5 + 7 * p), -2 * R6 * p],
            [-3 * p, -R6 * p, -2 * R6 * p, 10 - 9 * p],
        ]
        return np.array(m) / 40
    m = [
        [1 + p, 0, 0, 2 * p],
        [0, 1 - p, 0, 0],
        [0, 0, 1 - p, 0],
        [2 * p, 0, 0, 1 + p],
    ]
    return np.array(m) / 4


class TestPureState:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="not normalized"):
            PureState([1, 1, 0, 0])

    def test_normalize_opt_in(self):
        assert_allclose(PureState([1, 1, 0, 0], normalize=True).amplitudes, [1 / R2, 1 / R2, 0, 0])

    def test_wrong_length(self):
        with pytest.raises(ValueError, match="4 amplitudes"):
            PureState([1, 0, 0])

    def test_non_finite(self):
        with pytest.raises(ValueError):
            PureState([np.nan, 0, 0, 0])

    def test_amplitudes_read_only(self):
        psi = named_state("psi1")
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 0

    def test_w_matrix(self):
        assert_allclose(named_state("psi2").w_matrix, [[-0.5, -R2 / 2], [R2 / 3, 1 / 6]])

    def test_equality(self):
        assert named_state("psi3") == named_state("psi3")
        assert named_state("psi3") != named_state("psi2")
        assert len({named_state("psi3"), named_state("psi3")}) == 1


class TestNamedStates:
    def test_psi1(self):
        assert_allclose(named_state("psi1").amplitudes, [math.sqrt(7) / 8, 3 * R5 / 8, R5 / 8, math.sqrt(7) / 8])

    def test_psi5(self):
        expected = [0, -math.sqrt(2 + math.sqrt(3)) / 2, math.sqrt(2 - math.sqrt(3)) / 2, 0]
        assert_allclose(named_state("psi5").amplitudes, expected)

    def test_psi6_zero_phase(self):
        assert_allclose(named_state("psi6").amplitudes, [-R2 / 6, R2 / 3, R2 / 2, R2 / 3])

    def test_psi6_phase(self):
        z = named_state("psi6", (0, math.pi / 2, 0, 0)).amplitudes
        assert_allclose(z[1], 1j * R2 / 3, atol=1e-16)

    def test_all_normalized(self):
        for name in NAMED_STATES:
            assert abs(np.sum(np.abs(named_state(name).amplitudes) ** 2) - 1) < 1e-15

    def test_unknown_lists_valid(self):
        with pytest.raises(ValueError, match="psi1.*bell:phi-"):
            named_state("psi4")

    def test_concurrences(self):
        cs = [pure_concurrence(named_state(n)) for n in ("psi1", "psi2", "psi3", "bell:psi+")]
        assert_allclose(cs, [0.25, 0.5, 0.75, 1.0], atol=1e-15)


class TestParseState:
    def test_named(self):
        assert parse_state("named:psi2") == named_state("psi2")

    def test_raw(self):
        assert_allclose(parse_state("0,1,0,0,0,0,0,0").amplitudes, [1j, 0, 0, 0])

    def test_bad_token_named(self):
        with pytest.raises(ValueError, match="'x'"):
            parse_state("1,0,x,0,0,0,0,0")

    def test_wrong_count(self):
        with pytest.raises(ValueError, match="8 comma-separated"):
            parse_state("1,0,0,0")

    def test_unnormalized_rejected_unless_asked(self):
        with pytest.raises(ValueError):
            parse_state("1,0,1,0,0,0,0,0")
        assert_allclose(parse_state("1,0,0,1,0,0,0,0", normalize=True).amplitudes, [1 / R2, 1j / R2, 0, 0])


class TestGwl:
    @pytest.mark.parametrize("name", ["psi1", "psi2", "psi3", "bell:psi+"])
    @pytest.mark.parametrize("p", [-1 / 3, -0.1, 0.0, 0.37, 0.8, 1.0])
    def test_matches_printed_matrices(self, name, p):
        assert_allclose(gwl(named_state(name), p), reference_matrix(name, p), atol=1e-15)

    def test_white_noise(self):
        assert_allclose(gwl(named_state("psi3"), 0), I4 / 4)

    @pytest.mark.parametrize("p, bound", [(-0.34, "lower"), (1.01, "upper")])
    def test_range_names_bound(self, p, bound):
        with pytest.raises(ValueError, match=bound):
            gwl(named_state("psi1"), p)

    @given(seeds, ps)
    def test_spectrum(self, seed, p):
        rho = gwl(random_pure_state(np.random.default_rng(seed)), p)
        expected = sorted([(1 + 3 * p) / 4] + [(1 - p) / 4] * 3, reverse=True)
        assert_allclose(herm_eigvals(rho), expected, atol=1e-12)


class TestWerner:
    def test_zero(self):
        assert_allclose(werner(0), I4 / 4)

    def test_singlet(self):
        assert_allclose(werner(-1), named_state("bell:phi-").projector(), atol=1e-16)

    def test_swap_form(self):
        assert_allclose(werner(0.2), 0.8 / 4 * I4 + 0.1 * SWAP)

    @pytest.mark.parametrize("p", [-1, -0.6, 0, 0.3, 1 / 3])
    def test_bridge(self, p):
        assert np.max(np.abs(gwl(named_state("bell:phi-"), -p) - werner(p))) <= 1e-15

    def test_range(self):
        with pytest.raises(ValueError, match="upper"):
            werner(0.5)


class TestReduced:
    def test_white_noise(self):
        assert_allclose(reduced(gwl(named_state("psi1"), 0), "A"), I2 / 2)

    def test_bell(self):
        assert_allclose(reduced(named_state("bell:psi+").projector(), "A"), I2 / 2, atol=1e-16)

    @pytest.mark.parametrize("name", ["psi1", "psi2", "psi3", "psi5"])
    def test_marginal_spectrum(self, name):
        psi = named_state(name)
        d = math.sqrt(1 - pure_concurrence(psi) ** 2)
        for side in "AB":
            assert_allclose(herm_eigvals(reduced(psi, side)), [(1 + d) / 2, (1 - d) / 2], atol=1e-14)

    @given(seeds, ps)
    def test_closed_form_matches_partial_trace(self, seed, p):
        psi = random_pure_state(np.random.default_rng(seed))
        rho = gwl(psi, p)
        for side in "AB":
            assert_allclose(reduced(rho, side), reduced_gwl(psi, p, side), atol=1e-14)
            assert_allclose(partial_trace(psi.projector(), side), reduced(psi, side), atol=1e-14)

    def test_partition_label(self):
        with pytest.raises(ValueError):
            reduced(named_state("psi1"), "C")


class TestSpinFlip:
    def test_identity(self):
        assert_allclose(spin_flip(I4 / 4), I4 / 4)

    def test_bell_invariant(self):
        proj = named_state("bell:psi+").projector()
        assert_allclose(spin_flip(proj), proj, atol=1e-15)

    def test_gwl_commutes(self):
        psi = named_state("psi2")
        assert_allclose(spin_flip(gwl(psi, 0.7)), gwl(psi.spin_flipped(), 0.7), atol=1e-15)


class TestUnitary:
    def test_identity(self):
        rho = gwl(named_state("psi3"), 0.4)
        assert_allclose(apply_unitary(rho, I4), rho)

    def test_form_invariance(self):
        u = unitary_group.rvs(4, random_state=7)
        psi = named_state("psi1")
        expected = gwl(apply_unitary_to_state(psi, u), 0.6)
        assert_allclose(apply_unitary(gwl(psi, 0.6), u), expected, atol=1e-14)

    def test_exchange(self):
        psi = named_state("psi2")
        assert_allclose(apply_unitary(gwl(psi, 0.5), SWAP), gwl(apply_unitary_to_state(psi, SWAP), 0.5), atol=1e-15)

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError, match="not unitary.*e"):
            apply_unitary(I4 / 4, 2 * I4)


class TestValidateDensity:
    def test_trace(self):
        with pytest.raises(ValueError, match="trace"):
            validate_density(I4)

    def test_negative(self):
        with pytest.raises(ValueError, match="negative"):
            validate_density(np.diag([0.6, 0.5, 0.0, -0.1]))
