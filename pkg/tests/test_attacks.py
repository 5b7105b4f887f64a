import json

import numpy as np
import pytest

from qltc import attacks, zoo
from qltc.attacks import (
    IslandTrialStats,
    NotAnErrorError,
    alphabet_alpha,
    alphabet_attack,
    alphabet_t,
    evaluate_r,
    expander_attack,
    island_attack,
    refined_expander_attack,
    soundness_profile,
)
from qltc.pauli import PauliOp
from qltc.zoo import (
    random_open_path,
    steane_code,
    string_error,
    toric_code,
    vertex_path_edges,
)


def test_alphabet_constants():
    assert alphabet_t(2) == pytest.approx(1 / 3)
    assert alphabet_alpha(2) == pytest.approx(2 / 3)
    assert alphabet_t(3) == pytest.approx(1 / 8)
    assert alphabet_alpha(3) == pytest.approx(7 / 8)
    assert alphabet_alpha(5) == pytest.approx(23 / 24)


# --- evaluate_r ------------------------------------------------------------

def test_evaluate_open_string_toric4():
    # L-shaped path whose endpoints are lattice distance 3 apart, so the
    # coset weight equals the string length
    c = toric_code(4)
    e = string_error(4, vertex_path_edges(4, [(0, 0), (0, 1), (0, 2), (1, 2)]), kind="z")
    rep = evaluate_r(c, e)
    assert rep.penalty == 2
    assert rep.wt_mod_centralizer.value == 3
    assert rep.delta_low == pytest.approx(3 / 32)
    assert rep.R == pytest.approx(2 / 32)
    assert rep.r == pytest.approx((2 / 32) / (4 * 3 / 32))


def test_evaluate_staple_path_shortens():
    # a length-3 "staple" whose endpoints are adjacent reduces to weight 1
    c = toric_code(4)
    e = string_error(4, vertex_path_edges(4, [(3, 2), (2, 2), (2, 3), (3, 3)]), kind="z")
    rep = evaluate_r(c, e)
    assert rep.weight == 3 and rep.wt_mod_centralizer.value == 1


def test_evaluate_single_qubit_x():
    c = toric_code(3)
    e = PauliOp.single(c.n, 2, 0, x=1, z=0)
    rep = evaluate_r(c, e)
    assert rep.penalty == 2  # its two vertex checks
    assert rep.delta_low == pytest.approx(1 / c.n)
    assert rep.wt_mod_group.exact or rep.wt_mod_group.low >= 1


def test_evaluate_rejects_non_errors():
    c = toric_code(2)
    with pytest.raises(NotAnErrorError):
        evaluate_r(c, c.generators[0])
    with pytest.raises(NotAnErrorError):
        evaluate_r(c, PauliOp.identity(c.n, 2))
    logical = string_error(2, zoo.wrap_loop_edges(2, 0, "horizontal"), kind="z")
    with pytest.raises(NotAnErrorError):
        evaluate_r(c, logical)


def test_interval_r_pessimistic():
    c = toric_code(3)
    e = string_error(3, random_open_path(3, 3, np.random.default_rng(1)), kind="z")
    rep = evaluate_r(c, e, budget=1)  # too small to verify the coset weight
    assert not rep.wt_mod_centralizer.exact
    assert rep.r_pessimistic >= rep.r_optimistic
    with pytest.raises(ValueError):
        rep.r
    obj = rep.to_json()
    assert obj["r"]["kind"] == "interval"
    json.dumps(obj)  # serializable


# --- expander attack -------------------------------------------------------

def test_expander_single_island_exact():
    c = toric_code(3)
    rep = expander_attack(c, 1 / c.n, seed=0)
    assert rep.weight == 1
    assert rep.wt_mod_centralizer.value == 1  # weight-1 error with syndrome
    assert rep.meta["attack"] == "expander" and len(rep.meta["U"]) == 1


def test_expander_two_islands_verified():
    h = zoo.regular_circulant_matrix(4, 2, seed=1)
    c = zoo.css_hypergraph_product(h, h)
    rep = expander_attack(c, 2 / c.n, seed=3)
    assert len(rep.meta["U"]) == 2
    # exact: all weight-1 candidates exhausted
    assert rep.wt_mod_centralizer.value == 2


def test_expander_r_bound_on_toric():
    c = toric_code(4)
    eps_star = c.graph.small_set_expansion_error(c.k)["epsilon_star"]
    assert eps_star < 0.5
    rep = expander_attack(c, 1 / c.n, seed=0)
    assert rep.r <= 2 * eps_star + 1e-12


def test_expander_penalty_bound_meta():
    c = toric_code(4)
    rep = expander_attack(c, 2 / c.n, seed=1)
    assert rep.penalty <= rep.meta["predicted_penalty_bound"]


def test_expander_rejects_bad_delta():
    with pytest.raises(ValueError):
        expander_attack(toric_code(2), 0.0)


# --- refined attack --------------------------------------------------------

def test_refined_on_toric():
    c = toric_code(4)
    u = c.graph.greedy_t_independent(1, 2, seed=2)
    rep = refined_expander_attack(c, u, len(u) / c.n)
    assert rep.meta["attack"] == "refined_expander"
    # measured inequality from the claim
    assert rep.r_pessimistic <= rep.meta["r_bound"] + 1e-12 or not rep.wt_mod_centralizer.exact
    assert rep.r <= rep.meta["r_bound"] + 1e-12


def test_refined_subset_delta():
    c = toric_code(4)
    u = c.graph.greedy_t_independent(1, 3, seed=5)
    assert len(u) >= 2
    rep = refined_expander_attack(c, u, 1 / c.n)
    assert rep.weight == 1


def test_refined_rejects_bad_u():
    c = toric_code(3)
    # adjacent constraints are not 1-independent
    c0 = 0
    c1 = sorted(c.graph.gamma(c.graph.gamma([c0], "right"), "left") - {c0})[0]
    with pytest.raises(ValueError):
        refined_expander_attack(c, [c0, c1], 1 / c.n)
    u = c.graph.greedy_t_independent(1, 2, seed=0)
    with pytest.raises(ValueError):
        refined_expander_attack(c, u, 1.0)  # delta' n > |U|


# --- alphabet attack -------------------------------------------------------

@pytest.mark.parametrize("d", [2, 3, 5])
def test_alphabet_attack_bound(d):
    c = toric_code(3, d)
    rep = alphabet_attack(c, 1 / c.n, seed=0)
    assert rep.r <= alphabet_alpha(d) + 1e-12
    fracs = rep.meta["per_qudit_violation_fraction"]
    assert all(f <= alphabet_alpha(d) + 1e-12 for f in fracs)


def test_alphabet_majority_on_uniform_qudit():
    # on the toric code every qudit sees 2 X-type and 2 Z-type checks, so
    # the majority is the lexicographically first tied symbol
    c = toric_code(3)
    x, z, count = attacks.majority_restriction(c, 0)
    assert count == 2


# --- island attack ---------------------------------------------------------

def _hgp_instance():
    h = zoo.regular_circulant_matrix(6, 2, seed=3)
    return zoo.css_hypergraph_product(h, h)


def test_island_stats_shape():
    c = _hgp_instance()
    stats = island_attack(c, trials=300, seed=4)
    assert stats.histogram.sum() == 300 * len(stats.u_set)
    assert len(stats.s_qudits) == len(stats.u_set) * c.k
    assert stats.p == pytest.approx(1 / (10 * c.k))
    assert 0 <= stats.epsilon_prime < 1
    assert stats.best_trial.penalty > 0
    json.dumps(stats.to_json())


def test_island_determinism():
    c = _hgp_instance()
    a = island_attack(c, trials=100, seed=9)
    b = island_attack(c, trials=100, seed=9)
    assert np.array_equal(a.histogram, b.histogram)
    assert a.mean_penalty == b.mean_penalty
    assert a.best_trial.error == b.best_trial.error


def test_island_rate_within_3_sigma():
    c = _hgp_instance()
    trials = 2000
    stats = island_attack(c, trials=trials, seed=1)
    p = stats.p
    n_draws = trials * len(stats.s_qudits)
    sigma = np.sqrt(p * (1 - p) / n_draws)
    assert abs(stats.empirical_qudit_rate - p) <= 3 * sigma


def test_island_rejects_bad_trials():
    with pytest.raises(ValueError):
        island_attack(_hgp_instance(), trials=0, seed=0)


def test_weight_threshold_table():
    assert attacks.weight_threshold_y(4) == 0.9985
    assert attacks.weight_threshold_y(5) == 0.9992
    assert attacks.weight_threshold_y(8) == 0.9999
    with pytest.raises(ValueError):
        attacks.weight_threshold_y(3)


# --- soundness profile -----------------------------------------------------

def test_profile_toric2_single_errors():
    c = toric_code(2)
    prof = soundness_profile(c, 2)
    # single-qudit errors violate exactly 2 checks
    assert prof.min_penalty[1] == 2
    assert prof.R(1 / c.n) * c.m <= 2
    assert all(p > 0 for p in prof.min_penalty.values())


def test_profile_monotone_R():
    c = toric_code(2)
    prof = soundness_profile(c, 3)
    deltas = [w / c.n for w in sorted(prof.min_penalty)]
    values = [prof.R(dl) for dl in deltas]
    assert values == sorted(values)


def test_profile_coverage_and_guard():
    c = toric_code(2)
    prof = soundness_profile(c, c.n)
    assert prof.coverage_complete
    assert prof.syndromes_seen == 2**c.rank - 1
    with pytest.raises(ValueError):
        soundness_profile(toric_code(4), 10)


def test_attacks_never_beat_oracle():
    for code in (steane_code(), toric_code(2)):
        prof = soundness_profile(code, 3)
        for seed in range(3):
            rep = expander_attack(code, 1 / code.n, seed=seed)
            w = rep.wt_mod_centralizer.value
            if w in prof.min_penalty:
                assert rep.r >= prof.r_at_coset_weight(w) - 1e-12


def test_profile_json():
    # per-coset-weight minima are always exact (penalty and coset weight are
    # functions of the syndrome); R rows are only upper bounds until every
    # syndrome has been seen
    partial = soundness_profile(toric_code(2), 2).to_json()
    json.dumps(partial)
    assert partial["min_penalty_per_coset_weight"]["1"]["kind"] == "exact"
    assert partial["table"][0]["kind"] == "upper_bound"
    full = soundness_profile(toric_code(2), 8).to_json()
    assert full["coverage_complete"]
    assert all(row["kind"] == "exact" for row in full["table"])
