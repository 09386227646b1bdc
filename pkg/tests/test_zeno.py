import math

import numpy as np
import pytest

from cfqsim.states import PureState, Qubit, entanglement_entropy, states_close
from cfqsim.zeno import (
    OBSTACLE,
    ChainConfig,
    asymptotic_limit,
    chain_closed_form,
    chain_step,
    convergence_scan,
    mode_register,
    obstacle_step,
    run_chain,
    scan_to_csv,
    unabsorbed_sector,
)

MODE = mode_register(0)
PASS = Qubit(("pass", "block"), 1.0, 0.0)
BLOCK = Qubit(("pass", "block"), 0.0, 1.0)


def obstacle_qubit(a, b):
    return Qubit(("pass", "block"), a, b)


class TestChainStep:
    def test_quarter_turn(self):
        s = PureState((OBSTACLE, MODE), {("pass", "0"): 1.0})
        out = chain_step(s, math.pi / 2)
        assert out.amps[("pass", "1")] == pytest.approx(1.0 + 0j, abs=1e-12)
        assert ("pass", "0") not in out.amps or abs(out.amps[("pass", "0")]) < 1e-12

    def test_zero_angle_identity(self):
        s = PureState((OBSTACLE, MODE), {("pass", "0"): 0.6, ("pass", "1"): 0.8})
        assert states_close(chain_step(s, 0.0), s)

    def test_two_steps_compose(self):
        theta = 0.37
        s = PureState((OBSTACLE, MODE), {("pass", "0"): 1.0})
        twice = chain_step(chain_step(s, theta), theta)
        once = chain_step(s, 2 * theta)
        assert states_close(twice, once, 1e-12)

    def test_absorbed_untouched(self):
        s = PureState((OBSTACLE, MODE), {("block", "absorbed"): 1.0})
        assert states_close(chain_step(s, 0.9), s)


class TestObstacleStep:
    def test_lower_arm_untouched(self):
        s = PureState((OBSTACLE, MODE), {("block", "0"): 1.0})
        assert states_close(obstacle_step(s), s)

    def test_upper_arm_absorbed(self):
        s = PureState((OBSTACLE, MODE), {("block", "1"): 1.0})
        out = obstacle_step(s)
        assert out.amps == {("block", "absorbed"): 1.0 + 0j}

    def test_superposed_obstacle(self):
        theta = 0.61
        c, s_ = math.cos(theta), math.sin(theta)
        r = 1.0 / math.sqrt(2.0)
        state = PureState(
            (OBSTACLE, MODE),
            {
                ("pass", "0"): r * c,
                ("pass", "1"): r * s_,
                ("block", "0"): r * c,
                ("block", "1"): r * s_,
            },
        )
        out = obstacle_step(state)
        assert out.amps[("pass", "0")] == pytest.approx(r * c)
        assert out.amps[("pass", "1")] == pytest.approx(r * s_)
        assert out.amps[("block", "0")] == pytest.approx(r * c)
        assert out.amps[("block", "absorbed")] == pytest.approx(r * s_)
        assert abs(out.amps[("block", "absorbed")]) ** 2 == pytest.approx(s_**2 / 2)


class TestRunChain:
    def test_full_absorption_single_cycle(self):
        result = run_chain(ChainConfig(L=1, theta=math.pi / 2, obstacle=BLOCK), "after_final_obstacle")
        assert result.survival == pytest.approx(0.0, abs=1e-12)

    def test_pure_block_default_angle(self):
        result = run_chain(ChainConfig(L=25, obstacle=BLOCK), "after_final_obstacle")
        amp = result.final.amps[("block", "0")]
        assert amp == pytest.approx(math.cos(math.pi / 50) ** 25, abs=1e-12)

    def test_pure_pass_freezes_in_upper_arm(self):
        for readout in ("after_final_bs", "after_final_obstacle"):
            result = run_chain(ChainConfig(L=16, obstacle=PASS), readout)
            assert abs(result.final.amps[("pass", "1")]) == pytest.approx(1.0, abs=1e-12)

    def test_closed_form_equivalence_random(self):
        rng = np.random.default_rng(301)
        for _ in range(60):
            a = rng.uniform(0, 1)
            obstacle = obstacle_qubit(a, math.sqrt(1 - a * a))
            L = int(rng.integers(1, 65))
            theta = rng.uniform(0.01, math.pi / 2)
            layers = int(rng.integers(1, 4))
            for readout in ("after_final_bs", "after_final_obstacle"):
                result = run_chain(
                    ChainConfig(L=L, theta=theta, obstacle=obstacle, layers=layers), readout
                )
                oracle = chain_closed_form(obstacle, L, theta, layers, readout)
                assert states_close(unabsorbed_sector(result.final), oracle, 1e-12)

    def test_stacked_block_survival(self):
        L, layers, theta = 9, 3, 0.21
        result = run_chain(ChainConfig(L=L, theta=theta, obstacle=BLOCK, layers=layers), "after_final_obstacle")
        assert result.survival == pytest.approx(math.cos(theta) ** (2 * L * layers), abs=1e-12)

    def test_mass_conserved_at_every_step(self):
        config = ChainConfig(L=12, obstacle=Qubit.balanced(("pass", "block")), layers=2)
        theta = config.resolved_theta
        from cfqsim.states import product_state

        state = product_state(
            [(OBSTACLE, config.obstacle), (mode_register(0), "0"), (mode_register(1), "0")]
        )
        for _ in range(config.L):
            state = chain_step(state, theta)
            assert state.norm2() == pytest.approx(1.0, abs=1e-12)
            state = obstacle_step(state)
            assert state.norm2() == pytest.approx(1.0, abs=1e-12)
            absorbed = state.norm2() - unabsorbed_sector(state).norm2()
            assert unabsorbed_sector(state).norm2() + absorbed == pytest.approx(1.0, abs=1e-12)

    def test_bad_config(self):
        with pytest.raises(ValueError):
            ChainConfig(L=0)
        with pytest.raises(ValueError):
            ChainConfig(L=4, theta=2.0)
        with pytest.raises(ValueError):
            ChainConfig(L=4, layers=0)
        with pytest.raises(ValueError):
            run_chain(ChainConfig(L=4), "mid_chain")


class TestAsymptote:
    def test_pure_pass(self):
        s = asymptotic_limit(PASS, 1)
        assert s.amps == {("pass", "1"): 1.0 + 0j}

    def test_balanced_bell(self):
        s = asymptotic_limit(Qubit.balanced(("pass", "block")), 1)
        assert s.norm2() == pytest.approx(1.0, abs=1e-12)
        assert entanglement_entropy(s, [OBSTACLE]) == pytest.approx(1.0, abs=1e-10)

    def test_three_layer_cat_every_bipartition(self):
        s = asymptotic_limit(Qubit.balanced(("pass", "block")), 3)
        regs = s.registers
        for partition in ([regs[0]], [regs[1]], [regs[2]], [regs[0], regs[2]], [regs[1], regs[3]]):
            assert entanglement_entropy(s, partition) == pytest.approx(1.0, abs=1e-10)


class TestConvergenceScan:
    def test_single_cycle_far_from_limit(self):
        rows = convergence_scan(Qubit.balanced(("pass", "block")), 1, [1])
        assert rows[0].fidelity < 0.5

    def test_fidelity_grows_with_chain_length(self):
        rows = convergence_scan(Qubit.balanced(("pass", "block")), 1, [100, 400])
        assert rows[1].fidelity > rows[0].fidelity

    def test_long_chain_block_survival(self):
        rows = convergence_scan(BLOCK, 1, [1000], "after_final_obstacle")
        assert rows[0].survival == pytest.approx(math.cos(math.pi / 2000) ** 2000, abs=1e-9)

    def test_three_layer_monotone(self):
        rows = convergence_scan(Qubit.balanced(("pass", "block")), 3, [10, 100, 1000])
        fids = [r.fidelity for r in rows]
        assert fids[0] < fids[1] < fids[2]

    def test_deficit_scales_inversely_with_length(self):
        rows = convergence_scan(Qubit.balanced(("pass", "block")), 3, [100, 1000])
        ratio = (1.0 - rows[0].fidelity) / (1.0 - rows[1].fidelity)
        assert 5.0 < ratio < 20.0

    def test_csv_shape(self):
        rows = convergence_scan(Qubit.balanced(("pass", "block")), 1, [2, 4])
        text = scan_to_csv(rows)
        lines = text.strip().split("\n")
        assert lines[0] == "L,fidelity,survival"
        assert len(lines) == 3
        assert lines[1].startswith("2,")

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            convergence_scan(PASS, 1, [])
