"""Averaged encryption channels and the distance bound certificates."""

import math
from dataclasses import asdict

import numpy as np
import pytest

from qindlab.channels import (
    EXHAUSTIVE_CAP,
    BoundReport,
    apply_channel_bipartite,
    avg_permutation_channel,
    certify_corollary_bound,
    certify_lemma_bound,
    constant_mixed_channel,
    corollary_bound,
    lemma_bound,
)
from qindlab.quantum_core import (
    DensityMatrix,
    apply_unitary,
    hadamard_all,
    maximally_entangled,
    partial_trace,
    random_pure_bipartite,
    state_from_bits,
    zero_state,
)


def test_lemma_bound_values():
    assert lemma_bound(1) == 2.0
    assert lemma_bound(2) == 1.0
    assert lemma_bound(3) == 0.5
    assert lemma_bound(4) == 0.25


def test_corollary_bound_values_and_saturation():
    assert corollary_bound(1, 3, 0) == pytest.approx(0.5)
    assert corollary_bound(1, 3, 4) == pytest.approx(4 / 6)
    assert corollary_bound(2, 4, 8) == pytest.approx(4 / 14)
    with pytest.raises(ValueError, match="saturates"):
        corollary_bound(1, 1, 4)
    with pytest.raises(ValueError):
        corollary_bound(1, 1, -1)


def test_corollary_bound_reduces_to_lemma_without_taken_outputs():
    for m in (1, 2):
        for tau in (1, 2, 3):
            assert corollary_bound(m, tau, 0) == pytest.approx(lemma_bound(tau))


def test_exhaustive_channel_counts_all_injections():
    ch = avg_permutation_channel(1, 1)
    # 2 plaintexts into 4 free slots: 4 * 3 ordered choices
    assert ch.permutations.shape[0] == 12
    assert ch.exhaustive
    assert ch.input_wires == 1
    assert ch.output_wires == 2


def test_exhaustive_channel_sends_basis_states_to_uniform():
    ch = avg_permutation_channel(1, 1)
    for bits in ("0", "1"):
        rho = ch.apply(state_from_bits(bits).to_density())
        assert np.allclose(rho.matrix, np.eye(4) / 4, atol=1e-12)


def test_exhaustive_cap_guides_to_sampling():
    with pytest.raises(ValueError, match="n_perm"):
        avg_permutation_channel(2, 3)  # 32P4 injections, too many
    ch = avg_permutation_channel(2, 3, n_perm=50, rng=np.random.default_rng(0))
    assert not ch.exhaustive
    assert ch.permutations.shape[0] == 50


def test_sampling_requires_rng():
    with pytest.raises(ValueError, match="rng"):
        avg_permutation_channel(1, 2, n_perm=10)


def test_sampled_channel_diagonal_is_uniform_within_4_sigma():
    n_perm = 2000
    ch = avg_permutation_channel(1, 3, n_perm=n_perm, rng=np.random.default_rng(77))
    p = 1 / 16
    sigma = math.sqrt(p * (1 - p) / n_perm)
    for bits in ("0", "1"):
        rho = ch.apply(state_from_bits(bits).to_density())
        diag = np.diag(rho.matrix).real
        assert np.trace(rho.matrix).real == pytest.approx(1.0)
        assert np.max(np.abs(diag - p)) <= 4 * sigma


def test_taken_outputs_never_appear():
    taken = (0, 5)
    ch = avg_permutation_channel(1, 2, taken, n_perm=200, rng=np.random.default_rng(3))
    rho = ch.apply(state_from_bits("1").to_density())
    diag = np.diag(rho.matrix).real
    assert diag[0] == pytest.approx(0.0, abs=1e-15)
    assert diag[5] == pytest.approx(0.0, abs=1e-15)


def test_constant_channel_ignores_its_input():
    ch = constant_mixed_channel(1, 1)
    a = ch.apply(state_from_bits("0").to_density())
    plus = apply_unitary(hadamard_all(1), zero_state(1))
    b = ch.apply(plus.to_density())
    assert np.allclose(a.matrix, b.matrix)
    assert np.allclose(a.matrix, np.eye(4) / 4)


def test_constant_channel_with_almost_full_taken_set_is_a_point_mass():
    taken = tuple(range(1, 4))  # leaves only output 0 free
    ch = constant_mixed_channel(1, 1, taken)
    rho = ch.apply(state_from_bits("1").to_density())
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    assert np.allclose(rho.matrix, expected)


def test_bipartite_application_reduces_to_product_on_product_inputs():
    ch = avg_permutation_channel(1, 1)
    ref = apply_unitary(hadamard_all(1), zero_state(1)).to_density()
    inp = state_from_bits("1").to_density()
    joint = DensityMatrix(2, np.kron(ref.matrix, inp.matrix))
    out = apply_channel_bipartite(ch, joint, ref_wires=1)
    assert out.num_wires == 3
    expected = np.kron(ref.matrix, ch.apply(inp).matrix)
    assert np.allclose(out.matrix, expected, atol=1e-12)


def test_bipartite_application_preserves_trace_on_entangled_inputs():
    ch = avg_permutation_channel(1, 2, n_perm=100, rng=np.random.default_rng(8))
    probe = random_pure_bipartite(1, 1, np.random.default_rng(9)).to_density()
    out = apply_channel_bipartite(ch, probe, ref_wires=1)
    assert np.trace(out.matrix).real == pytest.approx(1.0)
    evals = np.linalg.eigvalsh(out.matrix)
    assert evals.min() >= -1e-12


def test_entangled_probe_output_has_the_closed_form():
    # reference kept, constant part uniform, plus the traceless coherence block
    ch = avg_permutation_channel(1, 1)
    phi = maximally_entangled(1).to_density()
    out = apply_channel_bipartite(ch, phi, ref_wires=1)
    marginal = partial_trace(phi, keep=(0,))
    constant = np.kron(marginal.matrix, np.eye(4) / 4)
    chi = out.matrix - constant
    assert abs(np.trace(chi)) <= 1e-12
    # the coherence block is what the certificates extract; frozen spectrum
    c = 1 / 12
    block = 2 * chi[0:4, 4:8]
    sym = (block + block.conj().T) / 2
    evals = np.sort(np.linalg.eigvalsh(sym))
    assert np.allclose(evals, [-c, -c, -c, 3 * c], atol=1e-10)


def test_lemma_certificate_exhaustive_small_case():
    report = certify_lemma_bound(1, 1, samples=1)
    assert isinstance(report, BoundReport)
    assert report.bound == 2.0
    assert report.vacuous  # nothing to violate when the bound exceeds 1
    assert report.satisfied
    assert report.worst_input == "maximally-entangled"
    assert report.max_trace_distance == pytest.approx(0.25, abs=1e-10)
    assert report.max_difference_trace_norm == pytest.approx(0.5, abs=1e-10)
    assert report.chi_c_trace_norm == pytest.approx(0.5, abs=1e-10)
    evals = np.sort(report.chi_c_eigenvalues)
    c = 1 / 12
    assert np.allclose(evals, [-c, -c, -c, 3 * c], atol=1e-10)


def test_lemma_certificate_sampled_run_is_satisfied():
    report = certify_lemma_bound(1, 3, samples=60, n_perm=800, seed=5)
    assert report.bound == 0.5
    assert not report.vacuous
    assert report.satisfied
    assert report.margin == pytest.approx(report.bound - report.max_trace_distance)
    assert report.max_difference_trace_norm == pytest.approx(
        2 * report.max_trace_distance
    )


def test_certificates_are_seed_reproducible():
    a = certify_lemma_bound(1, 2, samples=30, n_perm=400, seed=9)
    b = certify_lemma_bound(1, 2, samples=30, n_perm=400, seed=9)
    assert asdict(a) == asdict(b)


def test_corollary_certificate_excludes_taken_outputs():
    taken = (3, 6)
    report = certify_corollary_bound(1, 3, taken, samples=50, n_perm=500, seed=12)
    assert report.taken_count == 2
    assert report.bound == pytest.approx(4 / (8 - 2 / 2))
    assert report.satisfied


def test_corollary_certificate_with_no_taken_set_equals_the_lemma_run():
    a = certify_lemma_bound(1, 2, samples=25, n_perm=300, seed=31)
    b = certify_corollary_bound(1, 2, (), samples=25, n_perm=300, seed=31)
    assert a.max_trace_distance == b.max_trace_distance
    assert a.bound == b.bound


def test_certificate_rejects_saturating_taken_set():
    with pytest.raises(ValueError, match="saturates"):
        certify_corollary_bound(1, 1, (0, 1, 2, 3), samples=1)


def test_pair_action_validates_input_range():
    ch = avg_permutation_channel(1, 1)
    with pytest.raises(ValueError):
        ch.pair_action(0, 2)


def test_channel_weights_sum_to_one():
    ch = avg_permutation_channel(1, 2, n_perm=64, rng=np.random.default_rng(2))
    assert float(np.sum(ch.weights)) == pytest.approx(1.0)
    assert EXHAUSTIVE_CAP >= ch.permutations.shape[0]
