"""Distinguishing attacks: exact rates, sampled confirmation, applicability."""

from fractions import Fraction

import numpy as np
import pytest

from qindlab.attacks import (
    ATTACKS,
    HadamardBitProbe,
    bz_adversary,
    bz_expected_win_rate,
    hadamard_bit_distinguisher,
    qlp_distinguisher,
)
from qindlab.games import (
    GameSetupError,
    estimate_advantage,
    hoeffding_half_width,
    run_fqind_qcpa,
    run_gqind_qcpa,
    run_qind_qcpa,
)
from qindlab.schemes import (
    block_scheme,
    identity_permutation_family,
    ideal_prp_family,
    prf_scheme,
    prp_scheme,
)


def keys_for(scheme, count=3, seed=55):
    rng = np.random.default_rng(seed)
    return [scheme.gen(16, rng) for _ in range(count)]


def test_bz_expected_rates_are_frozen():
    assert bz_expected_win_rate(1) == Fraction(3, 4)
    assert bz_expected_win_rate(2) == Fraction(7, 8)
    assert bz_expected_win_rate(3) == Fraction(15, 16)
    assert bz_expected_win_rate(4) == Fraction(31, 32)


def test_bz_exact_probability_matches_closed_form():
    attack = bz_adversary()
    for m in (1, 2, 3):
        scheme = prf_scheme(m, 1)
        expected = float(bz_expected_win_rate(m))
        for key in keys_for(scheme, 2):
            for r in range(2):
                p = attack.exact_win_probability(scheme, key, r)
                assert p == pytest.approx(expected, abs=1e-12)


def test_bz_sampled_rate_concentrates():
    scheme = prf_scheme(2, 1)
    est = estimate_advantage(run_fqind_qcpa, scheme, bz_adversary(), 2000, seed=11)
    eps = hoeffding_half_width(2000)
    assert abs(est.win_rate - 7 / 8) <= eps


def test_qlp_attack_is_perfect_on_prf_schemes():
    attack = qlp_distinguisher()
    for m in (1, 2, 3):
        scheme = prf_scheme(m, 1)
        for key in keys_for(scheme, 3):
            for r in range(2):
                assert attack.exact_win_probability(scheme, key, r) == pytest.approx(
                    1.0, abs=1e-12
                )


def test_qlp_attack_is_perfect_on_degenerate_prp():
    # tau = 0 keeps the permutation length-preserving, so the attack still applies
    scheme = prp_scheme(2, 0, ideal_prp_family(2))
    attack = qlp_distinguisher()
    for key in keys_for(scheme, 3):
        assert attack.exact_win_probability(scheme, key, 0) == pytest.approx(1.0)


def test_qlp_wins_every_sampled_trial():
    scheme = prf_scheme(2, 2)
    est = estimate_advantage(run_qind_qcpa, scheme, qlp_distinguisher(), 300, seed=23)
    assert est.wins == 300


def test_qlp_refuses_non_qlp_schemes_without_force():
    scheme = prp_scheme(2, 1, ideal_prp_family(3))
    with pytest.raises(GameSetupError, match="force=True"):
        run_qind_qcpa(scheme, qlp_distinguisher(), np.random.default_rng(0))


def test_qlp_forced_probe_runs_on_any_scheme():
    scheme = prp_scheme(2, 1, ideal_prp_family(3))
    probe = qlp_distinguisher(force=True)
    assert probe.name == "qlp-forced"
    out = run_qind_qcpa(scheme, probe, np.random.default_rng(1))
    assert out.guess in (0, 1)


def test_qlp_plays_gqind_with_the_same_exact_rate():
    scheme = prf_scheme(2, 1)
    attack = qlp_distinguisher()
    key = keys_for(scheme, 1)[0]
    exact = attack.exact_win_probability(scheme, key, 0)
    wins = 0
    trials = 40
    for i in range(trials):
        out = run_gqind_qcpa(
            scheme, attack, np.random.default_rng([14, i]), key=key
        )
        wins += out.win
    assert exact == pytest.approx(1.0, abs=1e-12)
    assert wins == trials


def test_hadamard_bit_probe_is_perfect_on_one_bit_messages():
    attack = hadamard_bit_distinguisher()
    for tau in (1, 2):
        scheme = prf_scheme(1, tau)
        for key in keys_for(scheme, 3):
            for r in range(2**tau):
                assert attack.exact_win_probability(scheme, key, r) == pytest.approx(
                    1.0, abs=1e-12
                )


def test_hadamard_bit_sampled_wins_every_trial_at_m1():
    scheme = prf_scheme(1, 2)
    est = estimate_advantage(
        run_qind_qcpa, scheme, hadamard_bit_distinguisher(), 200, seed=41
    )
    assert est.wins == 200


def test_hadamard_bit_probe_wire_must_exist():
    scheme = prf_scheme(1, 1)
    probe = HadamardBitProbe(probe_wire=1)
    with pytest.raises(GameSetupError):
        run_qind_qcpa(scheme, probe, np.random.default_rng(0))


def test_hadamard_bit_runs_at_wider_messages():
    # no rate guarantee beyond one bit, but the probe must still run
    scheme = prf_scheme(2, 1)
    out = run_qind_qcpa(scheme, hadamard_bit_distinguisher(), np.random.default_rng(7))
    assert out.guess in (0, 1)


def test_registry_names_and_games():
    assert set(ATTACKS) == {"bz", "qlp", "hadamard-bit"}
    assert ATTACKS["bz"].games == ("fqind",)
    assert ATTACKS["qlp"].games == ("qind", "gqind")
    assert ATTACKS["hadamard-bit"].games == ("qind", "gqind")


def test_registry_expected_rates():
    prf3 = prf_scheme(3, 1)
    assert ATTACKS["bz"].expected_win_rate(prf3) == Fraction(15, 16)
    assert ATTACKS["qlp"].expected_win_rate(prf3) == Fraction(1)
    assert ATTACKS["hadamard-bit"].expected_win_rate(prf3) is None
    assert ATTACKS["hadamard-bit"].expected_win_rate(prf_scheme(1, 1)) == Fraction(1)
    randomized_prp = prp_scheme(2, 1, ideal_prp_family(3))
    assert ATTACKS["qlp"].expected_win_rate(randomized_prp) is None


def test_registry_builders_produce_strategies():
    for name, spec in ATTACKS.items():
        strategy = spec.build()
        assert strategy.name in (name, f"{name}-forced")
        assert strategy.games == spec.games


def test_attacks_use_no_learning_queries():
    scheme = prf_scheme(2, 1)
    out = run_fqind_qcpa(scheme, bz_adversary(), np.random.default_rng(6))
    assert out.query_count == 0
    out = run_qind_qcpa(scheme, qlp_distinguisher(), np.random.default_rng(6))
    assert out.query_count == 0


def test_identity_scheme_shows_why_force_exists():
    # identity permutation with tau=0 is QLP; the attack runs unforced and wins
    scheme = prp_scheme(2, 0, identity_permutation_family(2))
    attack = qlp_distinguisher()
    key = scheme.gen(16, np.random.default_rng(0))
    assert attack.exact_win_probability(scheme, key, 0) == pytest.approx(1.0)


def test_block_scheme_needs_forced_probe():
    scheme = block_scheme(prp_scheme(1, 1, ideal_prp_family(2)), 2)
    with pytest.raises(GameSetupError):
        run_qind_qcpa(scheme, qlp_distinguisher(), np.random.default_rng(3))
    out = run_qind_qcpa(scheme, qlp_distinguisher(force=True), np.random.default_rng(3))
    assert out.guess in (0, 1)
