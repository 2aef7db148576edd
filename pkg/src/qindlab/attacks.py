"""Concrete distinguishing adversaries for the indistinguishability games.

Three attacks, each packaged as an AdversaryStrategy plus a closed-form
expected win rate where one is known:

* superposition-mask attack ("bz"): fqind. Register 1 holds the uniform
  superposition; if the challenger encrypts it, entanglement with the
  response register destroys the interference pattern a final Hadamard
  would otherwise restore. Wins with probability 1 - 2^-(m+1) against any
  scheme whose encryption is injective per (key, randomness).

* core-interference attack ("qlp"): qind and gqind. Sends the uniform
  superposition vs the all-minus state. Any quasi-length-preserving scheme
  moves plaintexts through a basis permutation on the trailing message-size
  wires of the ciphertext, which fixes the uniform state and keeps the
  minus state's amplitudes balanced, so a trailing Hadamard measurement
  separates the branches perfectly: win rate exactly 1.

* single-wire probe ("hadamard-bit"): qind and gqind. Plus vs minus on one
  plaintext wire, Hadamard test on the aligned ciphertext wire. Win rate 1
  for quasi-length-preserving schemes with one-bit messages (the only
  one-bit bijections are identity and negation, both phase-transparent);
  against wider or non-core schemes it is a cheap probe with no guarantee.

Exact evaluators replay both challenge branches through the simulator and
return the averaged win probability, with no sampling anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .games import (
    AdversaryStrategy,
    FqindChallenge,
    GameSetupError,
    GqindChallenge,
    GqindResponse,
)
from .oracles import type1_unitary, type2_unitary
from .quantum_core import (
    H,
    StateDescription,
    StateVector,
    X,
    append_wires,
    apply_unitary,
    hadamard_all,
    measure_computational,
    run_gates,
    zero_state,
)
from .schemes import ClassicalScheme, is_quasi_length_preserving


def _prob_zero(state: StateVector, wires: tuple[int, ...]) -> float:
    """Probability that a computational measurement of ``wires`` is all zero."""
    tensor = state.amplitudes.reshape((2,) * state.num_wires)
    index: list = [slice(None)] * state.num_wires
    for w in wires:
        index[w] = 0
    return float(np.sum(np.abs(tensor[tuple(index)]) ** 2))


def _pure_state(description: StateDescription) -> StateVector:
    if description.mixture is not None:
        raise GameSetupError("exact evaluation needs pure challenge descriptions")
    return run_gates(description.num_wires, description.gates)


def _qind_cipher_state(
    scheme: ClassicalScheme, key, r: int, description: StateDescription
) -> StateVector:
    plain = _pure_state(description)
    ell = scheme.ciphertext_bits
    u2 = type2_unitary(scheme, key, r)
    return u2.apply(append_wires(plain, ell - plain.num_wires), tuple(range(ell)))


# -- superposition-mask attack (fqind) ------------------------------------------


class SuperpositionMaskAttack(AdversaryStrategy):
    """fqind adversary that detects which register was encrypted.

    Register 0 is |0..0>, register 1 the uniform superposition, response
    |0..0>. After the challenge, Hadamards on register 1: if register 0 was
    encrypted, register 1 is untouched and collapses to all-zero with
    certainty; if register 1 was encrypted, it is maximally mixed and the
    all-zero outcome appears with probability 2^-m. Guess 0 iff all-zero.
    """

    name = "bz"
    games = ("fqind",)

    def start(self, scheme, rng):
        m, ell = scheme.message_bits, scheme.ciphertext_bits
        msg1 = tuple(range(m, 2 * m))

        class _Trial:
            def __init__(self) -> None:
                self._guess: int | None = None

            def fqind_template(self) -> FqindChallenge:
                state = apply_unitary(hadamard_all(m), zero_state(2 * m + ell), msg1)
                return FqindChallenge(
                    state,
                    tuple(range(m)),
                    msg1,
                    tuple(range(2 * m, 2 * m + ell)),
                )

            def receive_challenge(self, ch: FqindChallenge) -> None:
                state = apply_unitary(hadamard_all(m), ch.state, ch.message1_wires)
                outcome, _ = measure_computational(state, ch.message1_wires, rng)
                self._guess = 0 if set(outcome) == {"0"} else 1

            def final_guess(self) -> int:
                assert self._guess is not None
                return self._guess

        return _Trial()

    def exact_win_probability(self, scheme: ClassicalScheme, key, r: int) -> float:
        m, ell = scheme.message_bits, scheme.ciphertext_bits
        msg1 = tuple(range(m, 2 * m))
        response = tuple(range(2 * m, 2 * m + ell))
        template = apply_unitary(hadamard_all(m), zero_state(2 * m + ell), msg1)
        u1 = type1_unitary(scheme, key, r)
        p = []
        for message in (tuple(range(m)), msg1):
            state = u1.apply(template, message + response)
            state = apply_unitary(hadamard_all(m), state, msg1)
            p.append(_prob_zero(state, msg1))
        return 0.5 * (p[0] + 1.0 - p[1])


def bz_expected_win_rate(message_bits: int) -> Fraction:
    """1 - 2^-(m+1); holds whenever Enc(key, r, .) is injective."""
    return Fraction(2 ** (message_bits + 1) - 1, 2 ** (message_bits + 1))


def bz_adversary() -> SuperpositionMaskAttack:
    return SuperpositionMaskAttack()


# -- core-interference attack (qind / gqind) ------------------------------------


def _core_width(scheme: ClassicalScheme, force: bool) -> int:
    if is_quasi_length_preserving(scheme):
        return scheme.core.output_bits
    if not force:
        raise GameSetupError(
            f"scheme {scheme.name} is not quasi-length-preserving; "
            "pass force=True to probe it anyway"
        )
    return scheme.message_bits


class CoreInterferenceAttack(AdversaryStrategy):
    """qind/gqind adversary: uniform vs all-minus, Hadamard test on the core.

    The ciphertext's trailing core-width wires carry a basis permutation of
    the plaintext register. The uniform state is invariant under any basis
    permutation and the all-minus state keeps equally many +1 and -1
    amplitudes, so after Hadamards the all-zero outcome occurs with
    probability 1 in branch 0 and 0 in branch 1. Refuses schemes without a
    length-preserving core unless forced (then the trailing message-size
    wires are probed with no guarantee).
    """

    name = "qlp"
    games = ("qind", "gqind")

    def __init__(self, force: bool = False) -> None:
        self.force = force
        if force:
            self.name = "qlp-forced"

    def start(self, scheme, rng):
        m = scheme.message_bits
        ell = scheme.ciphertext_bits
        width = _core_width(scheme, self.force)

        class _Trial:
            def __init__(self) -> None:
                self._guess: int | None = None

            def qind_template(self) -> tuple[StateDescription, StateDescription]:
                return _qlp_descriptions(m)

            def gqind_template(self) -> GqindChallenge:
                plus = run_gates(m, tuple(H(w) for w in range(m)))
                minus = run_gates(
                    m, tuple(X(w) for w in range(m)) + tuple(H(w) for w in range(m))
                )
                amplitudes = np.kron(plus.amplitudes, minus.amplitudes)
                return GqindChallenge(
                    StateVector(2 * m, amplitudes),
                    tuple(range(m)),
                    tuple(range(m, 2 * m)),
                )

            def receive_challenge(self, response) -> None:
                if isinstance(response, GqindResponse):
                    state, cipher = response.state, response.ciphertext_wires
                else:
                    state, cipher = response, tuple(range(ell))
                core = cipher[len(cipher) - width :]
                state = apply_unitary(hadamard_all(width), state, core)
                outcome, _ = measure_computational(state, core, rng)
                self._guess = 0 if set(outcome) == {"0"} else 1

            def final_guess(self) -> int:
                assert self._guess is not None
                return self._guess

        return _Trial()

    def exact_win_probability(self, scheme: ClassicalScheme, key, r: int) -> float:
        """Branch-enumerated qind win probability; the gqind value is the
        same because both challenge registers are product states."""
        width = _core_width(scheme, self.force)
        ell = scheme.ciphertext_bits
        core = tuple(range(ell - width, ell))
        d0, d1 = _qlp_descriptions(scheme.message_bits)
        p = []
        for d in (d0, d1):
            state = _qind_cipher_state(scheme, key, r, d)
            state = apply_unitary(hadamard_all(width), state, core)
            p.append(_prob_zero(state, core))
        return 0.5 * (p[0] + 1.0 - p[1])


def _qlp_descriptions(m: int) -> tuple[StateDescription, StateDescription]:
    hs = tuple(H(w) for w in range(m))
    xs = tuple(X(w) for w in range(m))
    return StateDescription(m, hs), StateDescription(m, xs + hs)


def qlp_distinguisher(force: bool = False) -> CoreInterferenceAttack:
    return CoreInterferenceAttack(force=force)


# -- single-wire probe (qind / gqind) -------------------------------------------


class HadamardBitProbe(AdversaryStrategy):
    """Plus vs minus on one plaintext wire, Hadamard test on the aligned
    ciphertext wire (trailing-core layout). Certain win for one-bit
    quasi-length-preserving schemes; otherwise a guarantee-free probe."""

    name = "hadamard-bit"
    games = ("qind", "gqind")

    def __init__(self, probe_wire: int = 0) -> None:
        if probe_wire < 0:
            raise ValueError("probe_wire must be >= 0")
        self.probe_wire = probe_wire

    def _cipher_wire(self, scheme: ClassicalScheme) -> int:
        m, ell = scheme.message_bits, scheme.ciphertext_bits
        if self.probe_wire >= m:
            raise GameSetupError(f"probe wire {self.probe_wire} outside {m} message wires")
        return ell - m + self.probe_wire

    def _descriptions(self, m: int) -> tuple[StateDescription, StateDescription]:
        w = self.probe_wire
        return (
            StateDescription(m, (H(w),)),
            StateDescription(m, (X(w), H(w))),
        )

    def start(self, scheme, rng):
        m = scheme.message_bits
        ell = scheme.ciphertext_bits
        target_offset = self._cipher_wire(scheme)
        descriptions = self._descriptions(m)
        probe_wire = self.probe_wire

        class _Trial:
            def __init__(self) -> None:
                self._guess: int | None = None

            def qind_template(self) -> tuple[StateDescription, StateDescription]:
                return descriptions

            def gqind_template(self) -> GqindChallenge:
                reg0 = run_gates(m, (H(probe_wire),))
                reg1 = run_gates(m, (X(probe_wire), H(probe_wire)))
                amplitudes = np.kron(reg0.amplitudes, reg1.amplitudes)
                return GqindChallenge(
                    StateVector(2 * m, amplitudes),
                    tuple(range(m)),
                    tuple(range(m, 2 * m)),
                )

            def receive_challenge(self, response) -> None:
                if isinstance(response, GqindResponse):
                    state, cipher = response.state, response.ciphertext_wires
                else:
                    state, cipher = response, tuple(range(ell))
                target = cipher[target_offset]
                state = apply_unitary(hadamard_all(1), state, (target,))
                outcome, _ = measure_computational(state, (target,), rng)
                self._guess = 0 if outcome == "0" else 1

            def final_guess(self) -> int:
                assert self._guess is not None
                return self._guess

        return _Trial()

    def exact_win_probability(self, scheme: ClassicalScheme, key, r: int) -> float:
        target = self._cipher_wire(scheme)
        p = []
        for d in self._descriptions(scheme.message_bits):
            state = _qind_cipher_state(scheme, key, r, d)
            state = apply_unitary(hadamard_all(1), state, (target,))
            p.append(_prob_zero(state, (target,)))
        return 0.5 * (p[0] + 1.0 - p[1])


def hadamard_bit_distinguisher(probe_wire: int = 0) -> HadamardBitProbe:
    return HadamardBitProbe(probe_wire=probe_wire)


# -- registry --------------------------------------------------------------------


@dataclass(frozen=True)
class AttackSpec:
    """Catalog entry: how to build the strategy and what rate theory pins."""

    name: str
    games: tuple[str, ...]
    build: Callable[..., AdversaryStrategy]
    expected_win_rate: Callable[[ClassicalScheme], Fraction | None]


def _bz_rate(scheme: ClassicalScheme) -> Fraction:
    return bz_expected_win_rate(scheme.message_bits)


def _qlp_rate(scheme: ClassicalScheme) -> Fraction | None:
    return Fraction(1) if is_quasi_length_preserving(scheme) else None


def _hadamard_rate(scheme: ClassicalScheme) -> Fraction | None:
    if is_quasi_length_preserving(scheme) and scheme.message_bits == 1:
        return Fraction(1)
    return None


ATTACKS: dict[str, AttackSpec] = {
    "bz": AttackSpec("bz", ("fqind",), bz_adversary, _bz_rate),
    "qlp": AttackSpec("qlp", ("qind", "gqind"), qlp_distinguisher, _qlp_rate),
    "hadamard-bit": AttackSpec(
        "hadamard-bit", ("qind", "gqind"), hadamard_bit_distinguisher, _hadamard_rate
    ),
}
