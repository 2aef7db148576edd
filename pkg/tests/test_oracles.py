"""Encryption oracle lifts: permutation tables, wiring, interconversion."""

import numpy as np
import pytest

from qindlab.oracles import (
    EncryptionUnitary,
    type1_decryption_unitary,
    type1_from_type2,
    type1_unitary,
    type2_from_type1,
    type2_unitary,
)
from qindlab.quantum_core import (
    append_wires,
    apply_unitary,
    hadamard_all,
    zero_state,
)
from qindlab.schemes import (
    identity_permutation_family,
    ideal_prp_family,
    prf_scheme,
    prp_scheme,
)

RNG = np.random.default_rng(99)


def keys_for(scheme, count=3):
    return [scheme.gen(16, np.random.default_rng(7 + i)) for i in range(count)]


def test_type1_is_an_involution():
    scheme = prf_scheme(2, 1)
    for key in keys_for(scheme):
        u1 = type1_unitary(scheme, key, r=1)
        perm = u1.permutation
        assert np.array_equal(perm[perm], np.arange(perm.size))


def test_type1_xors_ciphertext_into_response_register():
    scheme = prf_scheme(2, 2)
    key = keys_for(scheme, 1)[0]
    r = 3
    u1 = type1_unitary(scheme, key, r)
    m, ell = scheme.message_bits, scheme.ciphertext_bits
    for x in range(2**m):
        for y in range(2**ell):
            image = u1.permutation[(x << ell) | y]
            assert image == (x << ell) | (y ^ int(scheme.enc(key, r, x)))


def test_type1_on_uniform_superposition_entangles_all_pairs():
    scheme = prf_scheme(2, 1)
    key = keys_for(scheme, 1)[0]
    r = 0
    u1 = type1_unitary(scheme, key, r)
    m, ell = scheme.message_bits, scheme.ciphertext_bits
    state = append_wires(apply_unitary(hadamard_all(m), zero_state(m)), ell)
    state = u1.apply(state, tuple(range(m + ell)))
    for x in range(2**m):
        idx = (x << ell) | int(scheme.enc(key, r, x))
        assert state.amplitudes[idx] == pytest.approx(0.5)
    assert np.count_nonzero(state.amplitudes) == 2**m


def test_type2_agrees_with_enc_on_cleared_ancilla():
    scheme = prp_scheme(2, 2, ideal_prp_family(4))
    key = keys_for(scheme, 1)[0]
    for r in range(4):
        u2 = type2_unitary(scheme, key, r)
        table = u2.type2_action_table()
        for x in range(4):
            assert table[x] == int(scheme.enc(key, r, x))


def test_type2_prp_completion_applies_the_permutation():
    scheme = prp_scheme(2, 2, ideal_prp_family(4))
    key = keys_for(scheme, 1)[0]
    fam = ideal_prp_family(4)
    r = 2
    u2 = type2_unitary(scheme, key, r)
    # in-place rule: |x, y> -> |pi_k(x || (y ^ r))> over the whole ancilla range
    for x in range(4):
        for y in range(4):
            assert u2.permutation[(x << 2) | y] == fam.forward(key, (x << 2) | (y ^ r))


def test_type2_is_a_permutation_of_the_cipher_space():
    scheme = prf_scheme(2, 2)
    for key in keys_for(scheme):
        u2 = type2_unitary(scheme, key, r=1)
        assert sorted(u2.permutation) == list(range(2**scheme.ciphertext_bits))


def test_one_wire_identity_scheme_is_cnot():
    # m=1, tau=0, identity permutation: Enc(x) = x, so the XOR lift is CNOT
    scheme = prp_scheme(1, 0, identity_permutation_family(1))
    key = scheme.gen(16, RNG)
    u1 = type1_unitary(scheme, key, 0)
    assert list(u1.permutation) == [0, 1, 3, 2]


def test_type1_from_type2_matches_direct_lift():
    for scheme in (prf_scheme(2, 1), prp_scheme(2, 1, ideal_prp_family(3))):
        for key in keys_for(scheme, 2):
            for r in range(2):
                built = type1_from_type2(type2_unitary(scheme, key, r))
                direct = type1_unitary(scheme, key, r)
                assert np.array_equal(built.permutation, direct.permutation)


def test_type2_from_type1_agrees_on_cleared_workspace():
    scheme = prf_scheme(1, 1)
    for key in keys_for(scheme, 2):
        for r in range(2):
            u1e = type1_unitary(scheme, key, r)
            u1d = type1_decryption_unitary(scheme, key, r)
            built = type2_from_type1(u1e, u1d)
            assert built.workspace_wires == scheme.ciphertext_bits
            assert built.num_wires == 2 * scheme.ciphertext_bits
            direct = type2_unitary(scheme, key, r)
            assert np.array_equal(built.type2_action_table(), direct.type2_action_table())


def test_type2_adjoint_decrypts():
    scheme = prf_scheme(2, 2)
    key = keys_for(scheme, 1)[0]
    r = 1
    adj = type2_unitary(scheme, key, r).adjoint()
    tau = scheme.ciphertext_bits - scheme.message_bits
    for x in range(4):
        c = int(scheme.enc(key, r, x))
        assert adj.permutation[c] == x << tau


def test_type1_adjoint_is_itself():
    scheme = prf_scheme(2, 1)
    key = keys_for(scheme, 1)[0]
    u1 = type1_unitary(scheme, key, 0)
    assert np.array_equal(u1.adjoint().permutation, u1.permutation)


def test_operator_matrix_is_unitary():
    scheme = prf_scheme(2, 1)
    key = keys_for(scheme, 1)[0]
    for u in (type1_unitary(scheme, key, 1), type2_unitary(scheme, key, 1)):
        mat = u.operator().matrix
        assert np.allclose(mat @ mat.conj().T, np.eye(mat.shape[0]))
        assert set(np.unique(mat)) <= {0.0 + 0j, 1.0 + 0j}


def test_oracle_construction_is_deterministic():
    scheme = prp_scheme(2, 1, ideal_prp_family(3))
    key = keys_for(scheme, 1)[0]
    a = type2_unitary(scheme, key, 1)
    b = type2_unitary(scheme, key, 1)
    assert np.array_equal(a.permutation, b.permutation)


def test_randomness_out_of_range_rejected():
    scheme = prf_scheme(2, 1)
    key = keys_for(scheme, 1)[0]
    with pytest.raises(ValueError):
        type1_unitary(scheme, key, 2)
    with pytest.raises(ValueError):
        type1_unitary(scheme, key, -1)


def test_adjoint_composition_is_identity():
    scheme = prp_scheme(2, 2, ideal_prp_family(4))
    key = keys_for(scheme, 1)[0]
    u2 = type2_unitary(scheme, key, 3)
    composed = u2.adjoint().permutation[u2.permutation]
    assert np.array_equal(composed, np.arange(composed.size))


def test_permutation_tables_are_int64():
    scheme = prf_scheme(3, 2)
    key = keys_for(scheme, 1)[0]
    assert type1_unitary(scheme, key, 0).permutation.dtype == np.int64
    assert type2_unitary(scheme, key, 0).permutation.dtype == np.int64


def test_type1_from_type2_requires_a_type2_oracle():
    scheme = prf_scheme(1, 1)
    key = keys_for(scheme, 1)[0]
    with pytest.raises(ValueError):
        type1_from_type2(type1_unitary(scheme, key, 0))
