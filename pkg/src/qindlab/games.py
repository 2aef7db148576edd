"""Indistinguishability games against lifted encryption oracles.

Four challengers, one per game:

* ind:   quantum (type-1) learning queries, classical challenge pair.
* fqind: type-1 learning queries; the adversary prepares registers
         [message0 | message1 | response] and keeps all of them; the
         challenger XOR-encrypts message b into the response register.
* qind:  type-2 learning queries; the adversary sends two classical state
         descriptions; the challenger rebuilds the chosen one privately,
         encrypts it in place with fresh randomness, and returns only the
         ciphertext register.
* gqind: like qind, but the adversary designates two message registers
         inside a state it prepared (entanglement with private wires
         allowed); the challenger measures out the unchosen register and
         discards the outcome.

Adversaries are stateless factories (AdversaryStrategy); ``start`` yields a
per-trial instance whose optional hooks the challenger calls: ``learn``
(given a learning oracle), one of ``{game}_template``, ``receive_challenge``
and ``final_guess``. The challenger never exposes the challenge bit or any
b-dependent data beyond the prescribed response registers; winning always
means guess == challenge bit.

Every trial consumes randomness only from its own Generator, and
estimate_advantage derives one child seed per trial up front, so aggregates
are reproducible regardless of worker scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .oracles import type1_unitary, type2_unitary
from .quantum_core import (
    StateDescription,
    StateVector,
    X,
    append_wires,
    apply_unitary,
    hadamard_all,
    measure_and_remove,
    measure_computational,
    sample_description,
    zero_state,
)
from .schemes import ClassicalScheme

GAME_NAMES = ("ind", "fqind", "qind", "gqind")

DEFAULT_SECURITY = 16
CONFIDENCE = 0.99


class GameSetupError(ValueError):
    """Malformed challenge, incompatible strategy, or invalid game request."""


@dataclass(frozen=True)
class GameOutcome:
    game: str
    challenge_bit: int
    guess: int
    win: bool
    randomness_used: tuple[int, ...]
    query_count: int


@dataclass(frozen=True)
class AdvantageEstimate:
    """Aggregate of many trials; interval is a two-sided bound on win_rate.

    Sampled mode uses the Hoeffding bound at the fixed 99% confidence level
    (half_width is the unclipped epsilon); exact mode collapses the interval
    to a point and leaves wins unset.
    """

    trials: int
    wins: int | None
    win_rate: float
    advantage: float
    confidence: float
    interval: tuple[float, float]
    advantage_interval: tuple[float, float]
    half_width: float
    method: str

    def __post_init__(self) -> None:
        if not 0.0 <= self.win_rate <= 1.0:
            raise ValueError("win_rate out of [0, 1]")
        lo, hi = self.interval
        if not lo <= self.win_rate <= hi:
            raise ValueError("interval must contain win_rate")


@dataclass(frozen=True)
class FqindChallenge:
    """Adversary-held registers for fqind; also the response container."""

    state: StateVector
    message0_wires: tuple[int, ...]
    message1_wires: tuple[int, ...]
    response_wires: tuple[int, ...]


@dataclass(frozen=True)
class GqindChallenge:
    state: StateVector
    message0_wires: tuple[int, ...]
    message1_wires: tuple[int, ...]


@dataclass(frozen=True)
class GqindResponse:
    """Ciphertext register plus whatever private wires the adversary kept."""

    state: StateVector
    ciphertext_wires: tuple[int, ...]
    private_wires: tuple[int, ...]


class AdversaryStrategy:
    """Factory producing one adversary instance per trial."""

    name: str = "adversary"
    games: tuple[str, ...] = ()
    deterministic: bool = False

    def start(self, scheme: ClassicalScheme, rng: np.random.Generator) -> Any:
        raise NotImplementedError


def _fresh_randomness(scheme: ClassicalScheme, rng: np.random.Generator) -> int:
    return int(rng.integers(2**scheme.randomness_bits))


class Type1LearningOracle:
    """Superposition access |x>|y> -> |x>|y ^ Enc_k(x; r)>, fresh r per query."""

    def __init__(self, scheme: ClassicalScheme, key, rng: np.random.Generator) -> None:
        self._scheme = scheme
        self._key = key
        self._rng = rng
        self.query_count = 0
        self.randomness_used: list[int] = []

    def _next_r(self) -> int:
        r = _fresh_randomness(self._scheme, self._rng)
        self.query_count += 1
        self.randomness_used.append(r)
        return r

    def query(
        self,
        state: StateVector,
        message_wires: tuple[int, ...],
        response_wires: tuple[int, ...],
    ) -> StateVector:
        u1 = type1_unitary(self._scheme, self._key, self._next_r())
        return u1.apply(state, tuple(message_wires) + tuple(response_wires))

    def query_classical(self, x: int) -> int:
        """Basis-state query; returns the classical ciphertext."""
        return int(self._scheme.enc(self._key, self._next_r(), int(x)))


class Type2LearningOracle:
    """In-place access: the challenger appends its own |0> ancilla and encrypts."""

    def __init__(self, scheme: ClassicalScheme, key, rng: np.random.Generator) -> None:
        self._scheme = scheme
        self._key = key
        self._rng = rng
        self.query_count = 0
        self.randomness_used: list[int] = []

    def _next_r(self) -> int:
        r = _fresh_randomness(self._scheme, self._rng)
        self.query_count += 1
        self.randomness_used.append(r)
        return r

    def query(
        self, state: StateVector, message_wires: tuple[int, ...]
    ) -> tuple[StateVector, tuple[int, ...]]:
        """Returns the new state and the wires now holding the ciphertext."""
        scheme = self._scheme
        m = scheme.message_bits
        if len(message_wires) != m:
            raise GameSetupError(f"type-2 query needs {m} message wires")
        anc = scheme.ciphertext_bits - m
        n = state.num_wires
        ext = append_wires(state, anc)
        wires = tuple(message_wires) + tuple(range(n, n + anc))
        u2 = type2_unitary(scheme, self._key, self._next_r())
        return u2.apply(ext, wires), wires

    def query_classical(self, x: int) -> int:
        return int(self._scheme.enc(self._key, self._next_r(), int(x)))


def _start_trial(
    scheme: ClassicalScheme,
    strategy: AdversaryStrategy,
    rng: np.random.Generator,
    game: str,
):
    adv = strategy.start(scheme, rng)
    if not hasattr(adv, f"{game}_template"):
        raise GameSetupError(f"strategy {strategy.name!r} does not play {game}")
    return adv


def _challenge_bit(rng: np.random.Generator, forced: int | None) -> int:
    if forced is None:
        return int(rng.integers(2))
    if forced not in (0, 1):
        raise GameSetupError("challenge bit must be 0 or 1")
    return int(forced)


def _challenge_randomness(
    scheme: ClassicalScheme, rng: np.random.Generator, forced: int | None
) -> int:
    if forced is None:
        return _fresh_randomness(scheme, rng)
    if not 0 <= int(forced) < 2**scheme.randomness_bits:
        raise GameSetupError(f"randomness {forced} out of range")
    return int(forced)


def _guess(adv) -> int:
    g = int(adv.final_guess())
    if g not in (0, 1):
        raise GameSetupError(f"guess must be 0 or 1, got {g}")
    return g


def _check_register(state: StateVector, wires: tuple[int, ...], size: int, what: str) -> None:
    if len(wires) != size:
        raise GameSetupError(f"{what} must have {size} wires, got {len(wires)}")
    if len(set(wires)) != len(wires):
        raise GameSetupError(f"{what} wires must be distinct")
    if any(w < 0 or w >= state.num_wires for w in wires):
        raise GameSetupError(f"{what} wires out of range")


def run_ind_qcpa(
    scheme: ClassicalScheme,
    strategy: AdversaryStrategy,
    rng: np.random.Generator,
    *,
    security: int = DEFAULT_SECURITY,
    key=None,
    challenge_bit: int | None = None,
    challenge_randomness: int | None = None,
) -> GameOutcome:
    """Quantum learning phase, classical challenge on a plaintext pair."""
    if key is None:
        key = scheme.gen(security, rng)
    adv = _start_trial(scheme, strategy, rng, "ind")
    oracle = Type1LearningOracle(scheme, key, rng)
    if hasattr(adv, "learn"):
        adv.learn(oracle)
    x0, x1 = adv.ind_template()
    for x in (x0, x1):
        if not 0 <= int(x) < 2**scheme.message_bits:
            raise GameSetupError(f"challenge plaintext {x} out of range")
    b = _challenge_bit(rng, challenge_bit)
    r = _challenge_randomness(scheme, rng, challenge_randomness)
    adv.receive_challenge(int(scheme.enc(key, r, int((x0, x1)[b]))))
    g = _guess(adv)
    return GameOutcome("ind", b, g, g == b, tuple(oracle.randomness_used) + (r,), oracle.query_count)


def run_fqind_qcpa(
    scheme: ClassicalScheme,
    strategy: AdversaryStrategy,
    rng: np.random.Generator,
    *,
    security: int = DEFAULT_SECURITY,
    key=None,
    challenge_bit: int | None = None,
    challenge_randomness: int | None = None,
) -> GameOutcome:
    """Relaying challenge: XOR-encrypt register b in place, hand everything back."""
    if key is None:
        key = scheme.gen(security, rng)
    adv = _start_trial(scheme, strategy, rng, "fqind")
    oracle = Type1LearningOracle(scheme, key, rng)
    if hasattr(adv, "learn"):
        adv.learn(oracle)
    ch = adv.fqind_template()
    m, ell = scheme.message_bits, scheme.ciphertext_bits
    _check_register(ch.state, ch.message0_wires, m, "message register 0")
    _check_register(ch.state, ch.message1_wires, m, "message register 1")
    _check_register(ch.state, ch.response_wires, ell, "response register")
    claimed = set(ch.message0_wires) | set(ch.message1_wires) | set(ch.response_wires)
    if len(claimed) != 2 * m + ell:
        raise GameSetupError("challenge registers must be disjoint")
    b = _challenge_bit(rng, challenge_bit)
    r = _challenge_randomness(scheme, rng, challenge_randomness)
    u1 = type1_unitary(scheme, key, r)
    message = ch.message1_wires if b else ch.message0_wires
    state = u1.apply(ch.state, tuple(message) + tuple(ch.response_wires))
    adv.receive_challenge(
        FqindChallenge(state, ch.message0_wires, ch.message1_wires, ch.response_wires)
    )
    g = _guess(adv)
    return GameOutcome(
        "fqind", b, g, g == b, tuple(oracle.randomness_used) + (r,), oracle.query_count
    )


def run_qind_qcpa(
    scheme: ClassicalScheme,
    strategy: AdversaryStrategy,
    rng: np.random.Generator,
    *,
    security: int = DEFAULT_SECURITY,
    key=None,
    challenge_bit: int | None = None,
    challenge_randomness: int | None = None,
) -> GameOutcome:
    """Non-relaying challenge: adversary sees only the fresh ciphertext register."""
    if key is None:
        key = scheme.gen(security, rng)
    adv = _start_trial(scheme, strategy, rng, "qind")
    oracle = Type2LearningOracle(scheme, key, rng)
    if hasattr(adv, "learn"):
        adv.learn(oracle)
    d0, d1 = adv.qind_template()
    m, ell = scheme.message_bits, scheme.ciphertext_bits
    for d in (d0, d1):
        if not isinstance(d, StateDescription) or d.num_wires != m:
            raise GameSetupError(f"challenge descriptions must cover exactly {m} wires")
    b = _challenge_bit(rng, challenge_bit)
    r = _challenge_randomness(scheme, rng, challenge_randomness)
    plain = sample_description((d0, d1)[b], rng)
    u2 = type2_unitary(scheme, key, r)
    cipher = u2.apply(append_wires(plain, ell - m), tuple(range(ell)))
    adv.receive_challenge(cipher)
    g = _guess(adv)
    return GameOutcome(
        "qind", b, g, g == b, tuple(oracle.randomness_used) + (r,), oracle.query_count
    )


def run_gqind_qcpa(
    scheme: ClassicalScheme,
    strategy: AdversaryStrategy,
    rng: np.random.Generator,
    *,
    security: int = DEFAULT_SECURITY,
    key=None,
    challenge_bit: int | None = None,
    challenge_randomness: int | None = None,
) -> GameOutcome:
    """General challenge: designated registers, unchosen one measured out."""
    if key is None:
        key = scheme.gen(security, rng)
    adv = _start_trial(scheme, strategy, rng, "gqind")
    oracle = Type2LearningOracle(scheme, key, rng)
    if hasattr(adv, "learn"):
        adv.learn(oracle)
    ch = adv.gqind_template()
    m, ell = scheme.message_bits, scheme.ciphertext_bits
    _check_register(ch.state, ch.message0_wires, m, "message register 0")
    _check_register(ch.state, ch.message1_wires, m, "message register 1")
    if set(ch.message0_wires) & set(ch.message1_wires):
        raise GameSetupError("message registers must be disjoint")
    b = _challenge_bit(rng, challenge_bit)
    r = _challenge_randomness(scheme, rng, challenge_randomness)
    keep = ch.message1_wires if b else ch.message0_wires
    drop = ch.message0_wires if b else ch.message1_wires
    # trace out the unchosen register: measure, discard the outcome, delete
    _, state = measure_and_remove(ch.state, drop, rng)

    def shifted(w: int) -> int:
        return w - sum(1 for d in drop if d < w)

    message = tuple(shifted(w) for w in keep)
    private = tuple(
        shifted(w)
        for w in range(ch.state.num_wires)
        if w not in drop and w not in keep
    )
    n = state.num_wires
    state = append_wires(state, ell - m)
    cipher_wires = message + tuple(range(n, n + ell - m))
    u2 = type2_unitary(scheme, key, r)
    state = u2.apply(state, cipher_wires)
    adv.receive_challenge(GqindResponse(state, cipher_wires, private))
    g = _guess(adv)
    return GameOutcome(
        "gqind", b, g, g == b, tuple(oracle.randomness_used) + (r,), oracle.query_count
    )


GAME_RUNNERS: dict[str, Callable[..., GameOutcome]] = {
    "ind": run_ind_qcpa,
    "fqind": run_fqind_qcpa,
    "qind": run_qind_qcpa,
    "gqind": run_gqind_qcpa,
}


# -- aggregation ---------------------------------------------------------------


def hoeffding_half_width(trials: int, confidence: float = CONFIDENCE) -> float:
    """Two-sided Hoeffding epsilon: P(|rate - p| >= eps) <= 1 - confidence."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    return math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * trials))


def estimate_advantage(
    runner: Callable[..., GameOutcome],
    scheme: ClassicalScheme,
    strategy: AdversaryStrategy,
    trials: int,
    seed: int,
    *,
    jobs: int = 1,
    security: int = DEFAULT_SECURITY,
) -> AdvantageEstimate:
    """Run independent trials with per-trial derived seeds and aggregate.

    Trial i always uses the i-th spawned child of SeedSequence(seed), so the
    result is identical for any worker count.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    children = np.random.SeedSequence(seed).spawn(trials)

    def one(child) -> bool:
        return runner(scheme, strategy, np.random.default_rng(child), security=security).win

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            wins = sum(pool.map(one, children))
    else:
        wins = sum(one(child) for child in children)
    rate = wins / trials
    eps = hoeffding_half_width(trials)
    interval = (max(0.0, rate - eps), min(1.0, rate + eps))
    return AdvantageEstimate(
        trials=trials,
        wins=int(wins),
        win_rate=rate,
        advantage=2.0 * rate - 1.0,
        confidence=CONFIDENCE,
        interval=interval,
        advantage_interval=(2.0 * interval[0] - 1.0, 2.0 * interval[1] - 1.0),
        half_width=eps,
        method="hoeffding",
    )


def exact_win_probability(
    scheme: ClassicalScheme,
    strategy: AdversaryStrategy,
    *,
    key_count: int = 2,
    seed: int = 0,
    security: int = DEFAULT_SECURITY,
    max_randomness_values: int = 8,
) -> float:
    """Average closed-form win probability over sampled keys and randomness.

    Needs a strategy exposing exact_win_probability(scheme, key, r); both
    challenge branches are enumerated there instead of sampling. Randomness
    is swept exhaustively when the space is small.
    """
    if not hasattr(strategy, "exact_win_probability"):
        raise GameSetupError(f"strategy {strategy.name!r} has no exact evaluator")
    rng = np.random.default_rng([0x5EED, seed])
    keys: list = []
    while len(keys) < key_count:
        k = scheme.gen(security, rng)
        if k not in keys:
            keys.append(k)
    space = 2**scheme.randomness_bits
    if space <= max_randomness_values:
        r_values = list(range(space))
    else:
        r_values = sorted({int(rng.integers(space)) for _ in range(max_randomness_values)})
    probs = [
        strategy.exact_win_probability(scheme, key, r) for key in keys for r in r_values
    ]
    return float(np.mean(probs))


def exact_advantage(
    scheme: ClassicalScheme,
    strategy: AdversaryStrategy,
    *,
    key_count: int = 2,
    seed: int = 0,
    security: int = DEFAULT_SECURITY,
) -> AdvantageEstimate:
    """Exact-mode estimate: zero-width interval, branch enumeration, no sampling."""
    p = exact_win_probability(
        scheme, strategy, key_count=key_count, seed=seed, security=security
    )
    space = min(2**scheme.randomness_bits, 8)
    return AdvantageEstimate(
        trials=2 * key_count * space,
        wins=None,
        win_rate=p,
        advantage=2.0 * p - 1.0,
        confidence=1.0,
        interval=(p, p),
        advantage_interval=(2.0 * p - 1.0, 2.0 * p - 1.0),
        half_width=0.0,
        method="exact",
    )


# -- baseline and utility strategies -------------------------------------------


def _tensor(a: StateVector, b: StateVector) -> StateVector:
    return StateVector(a.num_wires + b.num_wires, np.kron(a.amplitudes, b.amplitudes))


class _TrivialTemplates:
    """Game-agnostic challenge templates for strategies that only guess."""

    def __init__(self, scheme: ClassicalScheme) -> None:
        self._m = scheme.message_bits
        self._ell = scheme.ciphertext_bits

    def ind_template(self) -> tuple[int, int]:
        return 0, 2**self._m - 1

    def qind_template(self) -> tuple[StateDescription, StateDescription]:
        return (
            StateDescription(self._m),
            StateDescription(self._m, tuple(X(w) for w in range(self._m))),
        )

    def fqind_template(self) -> FqindChallenge:
        m, ell = self._m, self._ell
        return FqindChallenge(
            zero_state(2 * m + ell),
            tuple(range(m)),
            tuple(range(m, 2 * m)),
            tuple(range(2 * m, 2 * m + ell)),
        )

    def gqind_template(self) -> GqindChallenge:
        m = self._m
        return GqindChallenge(zero_state(2 * m), tuple(range(m)), tuple(range(m, 2 * m)))


class RandomGuesser(AdversaryStrategy):
    """Ignores everything and flips a fair coin; advantage 0 by construction."""

    name = "random"
    games = GAME_NAMES

    def start(self, scheme, rng):
        templates = _TrivialTemplates(scheme)

        class _Trial:
            ind_template = staticmethod(templates.ind_template)
            qind_template = staticmethod(templates.qind_template)
            fqind_template = staticmethod(templates.fqind_template)
            gqind_template = staticmethod(templates.gqind_template)

            def receive_challenge(self, response) -> None:
                pass

            def final_guess(self) -> int:
                return int(rng.integers(2))

        return _Trial()


class ConstantGuesser(AdversaryStrategy):
    """Queries nothing and always outputs the same bit; wins iff b matches."""

    name = "constant"
    games = GAME_NAMES
    deterministic = True

    def __init__(self, bit: int = 0) -> None:
        if bit not in (0, 1):
            raise ValueError("bit must be 0 or 1")
        self.bit = bit
        self.name = f"constant{bit}"

    def start(self, scheme, rng):
        templates = _TrivialTemplates(scheme)
        bit = self.bit

        class _Trial:
            ind_template = staticmethod(templates.ind_template)
            qind_template = staticmethod(templates.qind_template)
            fqind_template = staticmethod(templates.fqind_template)
            gqind_template = staticmethod(templates.gqind_template)

            def receive_challenge(self, response) -> None:
                pass

            def final_guess(self) -> int:
                return bit

        return _Trial()


class _PaddedTrial:
    def __init__(self, inner, count: int) -> None:
        self._inner = inner
        self._count = count

    def learn(self, oracle) -> None:
        for _ in range(self._count):
            oracle.query_classical(0)
        if hasattr(self._inner, "learn"):
            self._inner.learn(oracle)

    def __getattr__(self, item):
        return getattr(self._inner, item)


class _PaddedStrategy(AdversaryStrategy):
    def __init__(self, base: AdversaryStrategy, count: int) -> None:
        self._base = base
        self._count = count
        self.name = f"{base.name}+q{count}"
        self.games = base.games
        self.deterministic = base.deterministic

    def start(self, scheme, rng):
        return _PaddedTrial(self._base.start(scheme, rng), self._count)


def with_learning_queries(strategy: AdversaryStrategy, count: int) -> AdversaryStrategy:
    """Pad a strategy with ``count`` classical learning queries (results unused).

    The queries are real oracle calls, so transcripts and the taken-output
    budget |T| = q * mu * 2^m they feed are honest.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    return strategy if count == 0 else _PaddedStrategy(strategy, count)


def _register_state(state: StateVector, wires: tuple[int, ...]) -> StateVector:
    """Reorder a full state so the listed wires become wires 0..k-1."""
    if sorted(wires) != list(range(state.num_wires)):
        raise GameSetupError("register extraction needs all wires accounted for")
    arr = state.amplitudes.reshape((2,) * state.num_wires).transpose(wires)
    return StateVector(state.num_wires, arr.reshape(-1))


class _ReplayTrial:
    def __init__(self, inner, scheme, rng) -> None:
        self._inner = inner
        self._m = scheme.message_bits
        self._rng = rng

    def learn(self, oracle) -> None:
        if hasattr(self._inner, "learn"):
            self._inner.learn(oracle)

    def gqind_template(self) -> GqindChallenge:
        d0, d1 = self._inner.qind_template()
        state = _tensor(
            sample_description(d0, self._rng), sample_description(d1, self._rng)
        )
        m = self._m
        return GqindChallenge(state, tuple(range(m)), tuple(range(m, 2 * m)))

    def receive_challenge(self, response: GqindResponse) -> None:
        if response.private_wires:
            raise GameSetupError("replayed adversary kept no private wires")
        self._inner.receive_challenge(
            _register_state(response.state, response.ciphertext_wires)
        )

    def final_guess(self) -> int:
        return self._inner.final_guess()


class _GqindReplay(AdversaryStrategy):
    def __init__(self, base: AdversaryStrategy) -> None:
        self._base = base
        self.name = f"{base.name}@gqind"
        self.games = ("gqind",)
        self.deterministic = base.deterministic

    def start(self, scheme, rng):
        return _ReplayTrial(self._base.start(scheme, rng), scheme, rng)


def replay_through_gqind(strategy: AdversaryStrategy) -> AdversaryStrategy:
    """Lift a qind strategy into gqind: descriptions materialize as unentangled
    registers, the returned ciphertext register is handed back verbatim."""
    return _GqindReplay(strategy)


class EntangledBlockProbe(AdversaryStrategy):
    """gqind probe for block schemes: an entangled challenge across blocks.

    Register 0 is the across-all-wires GHZ state (the blocks cannot be
    written as a product), register 1 the uniform superposition. On receipt
    a Hadamard test runs on the trailing base-message wires of every
    ciphertext block; the guess is 0 iff every outcome is zero.
    """

    name = "entangled-blocks"
    games = ("gqind",)

    def __init__(self, mu: int) -> None:
        if mu < 1:
            raise ValueError("mu must be >= 1")
        self.mu = mu
        self.name = f"entangled-blocks-mu{mu}"

    def start(self, scheme, rng):
        mu = self.mu
        if scheme.message_bits % mu or scheme.ciphertext_bits % mu:
            raise GameSetupError(f"scheme widths are not divisible into {mu} blocks")
        m_total = scheme.message_bits
        m_b = m_total // mu
        c_b = scheme.ciphertext_bits // mu
        probe = self

        class _Trial:
            def __init__(self) -> None:
                self._guess: int | None = None

            def gqind_template(self) -> GqindChallenge:
                ghz = np.zeros(2**m_total, dtype=np.complex128)
                ghz[0] = ghz[-1] = 1.0 / np.sqrt(2.0)
                uniform = np.full(2**m_total, 2.0 ** (-m_total / 2), dtype=np.complex128)
                state = _tensor(
                    StateVector(m_total, ghz), StateVector(m_total, uniform)
                )
                return GqindChallenge(
                    state, tuple(range(m_total)), tuple(range(m_total, 2 * m_total))
                )

            def receive_challenge(self, response: GqindResponse) -> None:
                state = response.state
                probe_wires: list[int] = []
                for i in range(probe.mu):
                    block = response.ciphertext_wires[i * c_b : (i + 1) * c_b]
                    core = block[c_b - m_b :]
                    state = apply_unitary(hadamard_all(m_b), state, core)
                    probe_wires.extend(core)
                outcome, _ = measure_computational(state, tuple(probe_wires), rng)
                self._guess = 0 if set(outcome) == {"0"} else 1

            def final_guess(self) -> int:
                assert self._guess is not None
                return self._guess

        return _Trial()
