"""Unitary lifts of classical encryption schemes.

Two standard lifts, both computational-basis permutations:

* type-1, on m + ell wires: |x>|y> -> |x>|y ^ Enc_k(x; r)>, the XOR-register
  oracle. Register layout [plaintext | output], plaintext on the MSB side.
* type-2, on ell wires: |x>|y> -> |phi_{x,y}>, the in-place oracle. The
  scheme's declared completion fixes phi, with phi(x || 0) = Enc_k(x; r), so
  the adjoint is the decryption oracle.

Lifts are stored as basis index tables, so applying one to a larger state
costs O(2^n) regardless of operator size; dense matrices materialize on
demand below the dense-operator cap. The interconversions build one lift
from oracle access to the other and are checked against the direct
constructions by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .quantum_core import StateVector, UnitaryOperator, apply_basis_permutation
from .schemes import ClassicalScheme


def _check_permutation(perm: np.ndarray, num_wires: int) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.int64)
    d = 2**num_wires
    if perm.shape != (d,):
        raise ValueError(f"permutation length {perm.shape} does not fit {num_wires} wires")
    if perm.min() < 0 or perm.max() >= d or np.bincount(perm, minlength=d).max() != 1:
        raise ValueError("index table is not a permutation")
    return perm


@dataclass(frozen=True)
class EncryptionUnitary:
    """A scheme lift at fixed (key, randomness), held as a basis permutation.

    ``workspace_wires`` > 0 marks a derived oracle that carries a working
    register (trailing wires) expected to start in |0>.
    """

    kind: str
    scheme: ClassicalScheme
    key: Any
    randomness: int
    num_wires: int
    permutation: np.ndarray
    workspace_wires: int = 0

    def __post_init__(self) -> None:
        perm = _check_permutation(self.permutation, self.num_wires)
        perm.setflags(write=False)
        object.__setattr__(self, "permutation", perm)

    @property
    def dim(self) -> int:
        return 2**self.num_wires

    def operator(self) -> UnitaryOperator:
        """Dense 0/1 permutation matrix (small wire counts only)."""
        mat = np.zeros((self.dim, self.dim), dtype=np.complex128)
        mat[self.permutation, np.arange(self.dim)] = 1.0
        return UnitaryOperator(self.num_wires, mat)

    def apply(self, state: StateVector, wires: tuple[int, ...]) -> StateVector:
        return apply_basis_permutation(self.permutation, state, wires)

    def adjoint(self) -> EncryptionUnitary:
        return EncryptionUnitary(
            kind=f"{self.kind}-adjoint" if not self.kind.endswith("-adjoint") else self.kind[:-8],
            scheme=self.scheme,
            key=self.key,
            randomness=self.randomness,
            num_wires=self.num_wires,
            permutation=np.argsort(self.permutation),
            workspace_wires=self.workspace_wires,
        )

    def type2_action_table(self) -> np.ndarray:
        """Ciphertext index reached from |x, 0> for each plaintext x (type-2 only)."""
        if not self.kind.startswith("type2"):
            raise ValueError(f"not a type-2 oracle: {self.kind}")
        scheme = self.scheme
        m, ell = scheme.message_bits, scheme.ciphertext_bits
        anc = ell - m
        x = np.arange(2**m)
        if self.workspace_wires == 0:
            return self.permutation[x << anc]
        out = self.permutation[x << (anc + self.workspace_wires)]
        mask = (1 << self.workspace_wires) - 1
        if np.any(out & mask):
            raise ValueError("workspace register did not return to |0> on y=0 inputs")
        return out >> self.workspace_wires


def _enc_table(scheme: ClassicalScheme, key, r) -> np.ndarray:
    return np.asarray(scheme.enc(key, r, np.arange(2**scheme.message_bits)), dtype=np.int64)


def _check_randomness(scheme: ClassicalScheme, r: int) -> int:
    r = int(r)
    if not 0 <= r < 2**scheme.randomness_bits:
        raise ValueError(f"randomness {r} out of range for {scheme.randomness_bits} bits")
    return r


def type1_unitary(scheme: ClassicalScheme, key, r: int) -> EncryptionUnitary:
    """XOR-register lift of Enc_k(.; r) on message + ciphertext wires."""
    r = _check_randomness(scheme, r)
    m, ell = scheme.message_bits, scheme.ciphertext_bits
    i = np.arange(2 ** (m + ell))
    x, y = i >> ell, i & ((1 << ell) - 1)
    enc = _enc_table(scheme, key, r)
    return EncryptionUnitary("type1", scheme, key, r, m + ell, (x << ell) | (y ^ enc[x]))


def type1_decryption_unitary(scheme: ClassicalScheme, key, r: int = 0) -> EncryptionUnitary:
    """XOR-register lift of Dec_k on ciphertext + message wires.

    Decryption takes no randomness; ``r`` is carried only so the oracle can be
    matched against an encryption oracle in the interconversions.
    """
    r = _check_randomness(scheme, r)
    m, ell = scheme.message_bits, scheme.ciphertext_bits
    i = np.arange(2 ** (ell + m))
    y, w = i >> m, i & ((1 << m) - 1)
    dec = np.asarray(scheme.dec(key, np.arange(2**ell)), dtype=np.int64)
    return EncryptionUnitary("type1-dec", scheme, key, r, ell + m, (y << m) | (w ^ dec[y]))


def type2_unitary(scheme: ClassicalScheme, key, r: int) -> EncryptionUnitary:
    """In-place lift on ell wires from the scheme's declared completion.

    Construction checks that the completion is a permutation and that its
    action on |x, 0> reproduces Enc_k(x; r) exactly.
    """
    r = _check_randomness(scheme, r)
    if scheme.type2_completion is None:
        raise ValueError(f"scheme {scheme.name} declares no type-2 completion")
    m, ell = scheme.message_bits, scheme.ciphertext_bits
    perm = np.asarray(scheme.type2_completion(key, r, np.arange(2**ell)), dtype=np.int64)
    oracle = EncryptionUnitary("type2", scheme, key, r, ell, perm)
    if not np.array_equal(perm[np.arange(2**m) << (ell - m)], _enc_table(scheme, key, r)):
        raise ValueError(f"scheme {scheme.name}: completion disagrees with Enc on y=0 inputs")
    return oracle


def type1_from_type2(u2: EncryptionUnitary) -> EncryptionUnitary:
    """Type-1 oracle assembled from type-2 oracle access.

    Circuit: encrypt in place into [plaintext | fresh ancilla], CNOT-copy the
    ciphertext register transversally onto the output register, then undo the
    in-place encryption with the adjoint. The ancilla provably returns to |0>
    on every basis input, so the result lives on m + ell wires; it must equal
    type1_unitary for the same (scheme, key, randomness).
    """
    if u2.kind != "type2" or u2.workspace_wires:
        raise ValueError("type1_from_type2 needs a direct type-2 oracle")
    scheme = u2.scheme
    m, ell = scheme.message_bits, scheme.ciphertext_bits
    anc = ell - m
    inv = np.argsort(u2.permutation)
    i = np.arange(2 ** (m + ell))
    x, y = i >> ell, i & ((1 << ell) - 1)
    cipher = u2.permutation[x << anc]
    back = inv[cipher]
    if np.any(back != (x << anc)):
        raise ValueError("type-2 adjoint failed to restore the plaintext register")
    return EncryptionUnitary(
        "type1", scheme, u2.key, u2.randomness, m + ell, (x << ell) | (y ^ cipher)
    )


def type2_from_type1(u1_enc: EncryptionUnitary, u1_dec: EncryptionUnitary) -> EncryptionUnitary:
    """Type-2 oracle assembled from type-1 encryption and decryption oracles.

    Circuit on [type-2 register (ell wires) | working register (ell wires)]:
    encrypt the plaintext into the working register, uncompute the plaintext
    via the decryption oracle, swap the registers. The working register
    returns to |0> exactly on y=0 inputs, where the action equals the
    scheme's declared completion; other ancilla values leave residue, which
    is why the result keeps its workspace wires.
    """
    if u1_enc.kind != "type1" or u1_dec.kind != "type1-dec":
        raise ValueError("need a type-1 encryption oracle and a type-1 decryption oracle")
    if (
        u1_enc.scheme is not u1_dec.scheme
        or u1_enc.key != u1_dec.key
        or u1_enc.randomness != u1_dec.randomness
    ):
        raise ValueError("oracles must share scheme, key and randomness")
    scheme = u1_enc.scheme
    m, ell = scheme.message_bits, scheme.ciphertext_bits
    anc = ell - m
    mask_ell, mask_m, mask_anc = (1 << ell) - 1, (1 << m) - 1, (1 << anc) - 1
    i = np.arange(2 ** (2 * ell))
    t, c = i >> ell, i & mask_ell
    x, y = t >> anc, t & mask_anc
    # encrypt: type-1 on (plaintext wires, working register)
    j = u1_enc.permutation[(x << ell) | c]
    c1 = j & mask_ell
    # uncompute: type-1 decryption on (working register, plaintext wires)
    j2 = u1_dec.permutation[(c1 << m) | x]
    x1 = j2 & mask_m
    # swap the full ell-wire registers
    out = (c1 << ell) | (x1 << anc) | y
    return EncryptionUnitary(
        "type2", scheme, u1_enc.key, u1_enc.randomness, 2 * ell, out, workspace_wires=ell
    )
