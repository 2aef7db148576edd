"""Classical symmetric encryption schemes at desk scale.

Messages, randomness, ciphertexts and keys are plain integers with declared
bit widths (wire 0 = MSB, so an m-bit plaintext equals its basis index). All
primitives operate elementwise on numpy integer arrays as well as scalars,
which is what lets the oracle layer build permutation tables in one shot.

Each scheme may declare a type-2 completion: a keyed basis permutation phi on
ell-bit strings, laid out as [x: m bits | y: ell-m bits], with
phi(x || 0) = Enc_k(x; r). The completions shipped here are choices, not
forced by the schemes themselves:

* prf scheme:   (x, y) -> (y^r) || (F_k(y^r) ^ x)
* prp scheme:   (x, y) -> pi_k(x || (y^r))
* block scheme: per-block completion with independent randomness slices.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

_TABLE_PRP_CAP = 8  # explicit permutation tables up to here, lazy sampling above


class CoreDecompositionError(ValueError):
    """Raised for schemes whose ciphertext is not a (randomness, core) prefix split."""


def _is_scalar(x) -> bool:
    return isinstance(x, (int, np.integer))


def _like(x, out):
    return int(out) if _is_scalar(x) else out


def _check_range(value, bits: int, what: str) -> None:
    if _is_scalar(value) and not 0 <= int(value) < 2**bits:
        raise ValueError(f"{what} {value} out of range for {bits} bits")


@dataclass(frozen=True)
class KeyedFunction:
    """Keyed function {0,1}^input_bits -> {0,1}^output_bits."""

    input_bits: int
    output_bits: int
    key_bits: int
    evaluate: Callable[[Any, Any], Any]

    def __call__(self, key, x):
        return self.evaluate(key, x)


@dataclass(frozen=True)
class CoreFunction:
    """Accessors for the core f of a ciphertext split Enc_k(x; r) = r || f(k, r, x)."""

    output_bits: int
    f: Callable[[Any, Any, Any], Any]
    f_inverse: Callable[[Any, Any, Any], Any]


@dataclass(frozen=True)
class ClassicalScheme:
    name: str
    message_bits: int
    randomness_bits: int
    ciphertext_bits: int
    key_space: str
    gen: Callable[[int, np.random.Generator], Any]
    enc: Callable[[Any, Any, Any], Any]
    dec: Callable[[Any, Any], Any]
    core: CoreFunction | None = None
    type2_completion: Callable[[Any, Any, Any], Any] | None = None


def core_function(scheme: ClassicalScheme) -> CoreFunction:
    """The (f, f_inverse) pair of a prefix-split scheme."""
    if scheme.core is None:
        raise CoreDecompositionError(f"scheme {scheme.name}: no core decomposition")
    return scheme.core


def is_quasi_length_preserving(scheme: ClassicalScheme) -> bool:
    """True iff a core exists and its output is exactly message-length."""
    return scheme.core is not None and scheme.core.output_bits == scheme.message_bits


# -- toy PRFs -----------------------------------------------------------------

_prf_lock = threading.Lock()
_prf_tables: dict[tuple, np.ndarray] = {}


def _prf_table(key: int, input_bits: int, output_bits: int) -> np.ndarray:
    ident = (int(key), input_bits, output_bits)
    with _prf_lock:
        table = _prf_tables.get(ident)
        if table is None:
            rng = np.random.default_rng([0x7F52, *ident])
            table = rng.integers(0, 2**output_bits, size=2**input_bits, dtype=np.int64)
            table.setflags(write=False)
            _prf_tables[ident] = table
    return table


def toy_prf(input_bits: int, output_bits: int, key_bits: int = 16) -> KeyedFunction:
    """Random-table PRF: each key selects an independent uniform table."""
    if input_bits < 0 or output_bits < 1:
        raise ValueError("need input_bits >= 0 and output_bits >= 1")
    if input_bits > _TABLE_PRP_CAP:
        raise ValueError(f"toy_prf tables are capped at {_TABLE_PRP_CAP} input bits")

    def evaluate(key, x):
        table = _prf_table(key, input_bits, output_bits)
        return _like(x, table[np.asarray(x)] if not _is_scalar(x) else table[int(x)])

    return KeyedFunction(input_bits, output_bits, key_bits, evaluate)


def constant_prf(input_bits: int, output_bits: int, value: int = 0) -> KeyedFunction:
    """F_k(x) = value for every key and input; the leaky degenerate case."""
    if not 0 <= value < 2**output_bits:
        raise ValueError("value out of range")

    def evaluate(key, x):
        return _like(x, np.asarray(x) * 0 + value if not _is_scalar(x) else value)

    return KeyedFunction(input_bits, output_bits, 0, evaluate)


# -- permutation families ------------------------------------------------------


@dataclass(frozen=True)
class PermutationFamily:
    """Keyed permutations of {0,1}^block_bits with explicit inverses."""

    name: str
    block_bits: int
    key_bits: int
    init: Callable[[int, np.random.Generator], Any]
    forward: Callable[[Any, Any], Any]
    inverse: Callable[[Any, Any], Any]


_ideal_lock = threading.Lock()
_ideal_tables: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}
_lazy_perms: dict[tuple, "_LazyPermutation"] = {}


def _ideal_table(seed: int, block_bits: int) -> tuple[np.ndarray, np.ndarray]:
    ident = (int(seed), block_bits)
    with _ideal_lock:
        pair = _ideal_tables.get(ident)
        if pair is None:
            rng = np.random.default_rng([0x1DEA, *ident])
            fwd = rng.permutation(2**block_bits).astype(np.int64)
            bwd = np.argsort(fwd)
            fwd.setflags(write=False)
            bwd.setflags(write=False)
            pair = (fwd, bwd)
            _ideal_tables[ident] = pair
    return pair


class _LazyPermutation:
    """Uniform permutation realized query by query with memoized consistency.

    The realized permutation depends on the query order, so it is
    deterministic exactly for a fixed seeded query sequence; the lock keeps
    concurrent queries from assigning conflicting slots.
    """

    def __init__(self, seed: int, block_bits: int) -> None:
        self._size = 2**block_bits
        self._rng = np.random.default_rng([0x1A2, int(seed), block_bits])
        self._fwd: dict[int, int] = {}
        self._bwd: dict[int, int] = {}
        self._lock = threading.Lock()

    def _fresh(self, taken: dict[int, int]) -> int:
        while True:
            cand = int(self._rng.integers(self._size))
            if cand not in taken:
                return cand

    def forward(self, x: int) -> int:
        with self._lock:
            if x not in self._fwd:
                y = self._fresh(self._bwd)
                self._fwd[x] = y
                self._bwd[y] = x
            return self._fwd[x]

    def inverse(self, y: int) -> int:
        with self._lock:
            if y not in self._bwd:
                x = self._fresh(self._fwd)
                self._fwd[x] = y
                self._bwd[y] = x
            return self._bwd[y]


def _lazy_perm(seed: int, block_bits: int) -> _LazyPermutation:
    ident = (int(seed), block_bits)
    with _ideal_lock:
        perm = _lazy_perms.get(ident)
        if perm is None:
            perm = _LazyPermutation(seed, block_bits)
            _lazy_perms[ident] = perm
    return perm


def ideal_prp_family(block_bits: int, rng: np.random.Generator | None = None) -> PermutationFamily:
    """Uniformly random permutation per key (key = 32-bit seed).

    Explicit table at block_bits <= 8; lazy memoized sampling above. The
    optional ``rng`` only serves as the default source when ``init`` is
    called without one.
    """
    if block_bits < 1:
        raise ValueError("block_bits must be >= 1")
    default_rng = rng

    def init(security: int, rng: np.random.Generator | None = None):
        src = rng if rng is not None else default_rng
        if src is None:
            raise ValueError("ideal_prp_family.init needs a Generator")
        return int(src.integers(2**32))

    if block_bits <= _TABLE_PRP_CAP:

        def forward(key, x):
            return _like(x, _ideal_table(key, block_bits)[0][x])

        def inverse(key, y):
            return _like(y, _ideal_table(key, block_bits)[1][y])

    else:

        def forward(key, x):
            perm = _lazy_perm(key, block_bits)
            if _is_scalar(x):
                return perm.forward(int(x))
            return np.array([perm.forward(int(v)) for v in np.asarray(x).ravel()]).reshape(
                np.asarray(x).shape
            )

        def inverse(key, y):
            perm = _lazy_perm(key, block_bits)
            if _is_scalar(y):
                return perm.inverse(int(y))
            return np.array([perm.inverse(int(v)) for v in np.asarray(y).ravel()]).reshape(
                np.asarray(y).shape
            )

    return PermutationFamily(
        name=f"ideal-{block_bits}",
        block_bits=block_bits,
        key_bits=32,
        init=init,
        forward=forward,
        inverse=inverse,
    )


def _feistel_round_table(key: int, rnd: int, half_bits: int) -> np.ndarray:
    return _prf_table((int(key) << 8) | rnd, half_bits, half_bits)


def feistel_prp_family(
    block_bits: int,
    rounds: int = 4,
    round_function: Callable[[Any, int, Any], Any] | None = None,
) -> PermutationFamily:
    """Balanced Feistel network over half-blocks.

    Round i maps (L, R) -> (R, L ^ F(key, i, R)). The default round function
    is an independent random table per (key, round). Passing the zero round
    function makes every round a swap, so any even round count composes to
    the identity; that degenerate vector is used as a test oracle.
    """
    if block_bits < 2 or block_bits % 2:
        raise ValueError("block_bits must be even and >= 2")
    if rounds < 4:
        raise ValueError("rounds must be >= 4")
    half = block_bits // 2
    mask = (1 << half) - 1

    if round_function is None:

        def round_function(key, rnd, r):
            table = _feistel_round_table(key, rnd, half)
            return _like(r, table[np.asarray(r)] if not _is_scalar(r) else table[int(r)])

    def init(security: int, rng: np.random.Generator):
        return int(rng.integers(2**16))

    def forward(key, x):
        left, right = np.asarray(x) >> half, np.asarray(x) & mask
        for i in range(rounds):
            left, right = right, left ^ round_function(key, i, right)
        return _like(x, (left << half) | right)

    def inverse(key, y):
        left, right = np.asarray(y) >> half, np.asarray(y) & mask
        for i in reversed(range(rounds)):
            left, right = right ^ round_function(key, i, left), left
        return _like(y, (left << half) | right)

    return PermutationFamily(
        name=f"feistel-{block_bits}x{rounds}",
        block_bits=block_bits,
        key_bits=16,
        init=init,
        forward=forward,
        inverse=inverse,
    )


def identity_permutation_family(block_bits: int) -> PermutationFamily:
    """pi_k = identity for every key; transparent test fixture."""
    if block_bits < 1:
        raise ValueError("block_bits must be >= 1")
    return PermutationFamily(
        name=f"identity-{block_bits}",
        block_bits=block_bits,
        key_bits=0,
        init=lambda security, rng: 0,
        forward=lambda key, x: x,
        inverse=lambda key, y: y,
    )


# -- schemes -------------------------------------------------------------------


def prf_scheme(m: int, tau: int, prf: KeyedFunction | None = None) -> ClassicalScheme:
    """Randomized scheme Enc_k(x; r) = r || (F_k(r) ^ x); quasi-length-preserving."""
    if m < 1 or tau < 1:
        raise ValueError("need m >= 1 and tau >= 1")
    if prf is None:
        prf = toy_prf(tau, m)
    if prf.input_bits != tau or prf.output_bits != m:
        raise ValueError(
            f"prf width mismatch: need {tau} -> {m}, got {prf.input_bits} -> {prf.output_bits}"
        )
    m_mask = (1 << m) - 1
    t_mask = (1 << tau) - 1

    def enc(key, r, x):
        _check_range(r, tau, "randomness")
        _check_range(x, m, "plaintext")
        return _like(x, (np.asarray(r) << m) | (prf(key, r) ^ np.asarray(x)))

    def dec(key, y):
        _check_range(y, tau + m, "ciphertext")
        return _like(y, (np.asarray(y) & m_mask) ^ prf(key, np.asarray(y) >> m))

    def completion(key, r, z):
        arr = np.asarray(z)
        x, y = arr >> tau, arr & t_mask
        rp = y ^ r
        return _like(z, (rp << m) | (np.asarray(prf(key, rp)) ^ x))

    core = CoreFunction(
        output_bits=m,
        f=lambda key, r, x: _like(x, prf(key, r) ^ np.asarray(x)),
        f_inverse=lambda key, r, z: _like(z, prf(key, r) ^ np.asarray(z)),
    )
    return ClassicalScheme(
        name=f"prf[m={m},tau={tau}]",
        message_bits=m,
        randomness_bits=tau,
        ciphertext_bits=tau + m,
        key_space=f"{prf.key_bits}-bit integer",
        gen=lambda security, rng: int(rng.integers(2 ** max(prf.key_bits, 1))),
        enc=enc,
        dec=dec,
        core=core,
        type2_completion=completion,
    )


def prp_scheme(m: int, tau: int, family: PermutationFamily) -> ClassicalScheme:
    """Randomized scheme Enc_k(x; r) = pi_k(x || r), Dec = first m bits of inverse.

    The ciphertext has no (randomness, core) prefix split for tau > 0, so
    core_function raises; at tau = 0 the prefix is empty and the whole
    permutation is the (degenerate, quasi-length-preserving) core.
    """
    if m < 1 or tau < 0:
        raise ValueError("need m >= 1 and tau >= 0")
    if family.block_bits != m + tau:
        raise ValueError(
            f"family block width {family.block_bits} != m + tau = {m + tau}"
        )
    t_mask = (1 << tau) - 1

    def enc(key, r, x):
        _check_range(r, tau, "randomness")
        _check_range(x, m, "plaintext")
        return family.forward(key, _like(x, (np.asarray(x) << tau) | r))

    def dec(key, y):
        _check_range(y, m + tau, "ciphertext")
        return _like(y, np.asarray(family.inverse(key, y)) >> tau)

    def completion(key, r, z):
        arr = np.asarray(z)
        x, y = arr >> tau, arr & t_mask
        return _like(z, np.asarray(family.forward(key, (x << tau) | (y ^ r))))

    core = None
    if tau == 0:
        core = CoreFunction(
            output_bits=m,
            f=lambda key, r, x: family.forward(key, x),
            f_inverse=lambda key, r, z: family.inverse(key, z),
        )
    return ClassicalScheme(
        name=f"prp[m={m},tau={tau},{family.name}]",
        message_bits=m,
        randomness_bits=tau,
        ciphertext_bits=m + tau,
        key_space=f"{family.key_bits}-bit integer",
        gen=lambda security, rng: family.init(security, rng),
        enc=enc,
        dec=dec,
        core=core,
        type2_completion=completion,
    )


def block_scheme(base: ClassicalScheme, mu: int) -> ClassicalScheme:
    """mu independent blocks under one key: y_i = Enc_k(x_i; r_i), concatenated.

    Message space {0,1}^(mu*m), randomness slices r_1 || ... || r_mu, block 1
    most significant throughout.
    """
    if mu < 1:
        raise ValueError("mu must be >= 1")
    m_b, t_b, c_b = base.message_bits, base.randomness_bits, base.ciphertext_bits
    m_mask, t_mask, c_mask = (1 << m_b) - 1, (1 << t_b) - 1, (1 << c_b) - 1

    def blocks(value, width: int, mask: int):
        value = np.asarray(value)
        return [(value >> ((mu - 1 - i) * width)) & mask for i in range(mu)]

    def enc(key, r, x):
        _check_range(r, mu * t_b, "randomness")
        _check_range(x, mu * m_b, "plaintext")
        out = np.asarray(x) * 0
        for xi, ri in zip(blocks(x, m_b, m_mask), blocks(r, t_b, t_mask)):
            out = (out << c_b) | np.asarray(base.enc(key, ri, xi))
        return _like(x, out)

    def dec(key, y):
        _check_range(y, mu * c_b, "ciphertext")
        out = np.asarray(y) * 0
        for yi in blocks(y, c_b, c_mask):
            out = (out << m_b) | np.asarray(base.dec(key, yi))
        return _like(y, out)

    completion = None
    if base.type2_completion is not None:

        def completion(key, r, z):
            arr = np.asarray(z)
            x_all, y_all = arr >> (mu * t_b), arr & ((1 << (mu * t_b)) - 1)
            out = arr * 0
            for xi, yi, ri in zip(
                blocks(x_all, m_b, m_mask),
                blocks(y_all, t_b, t_mask),
                blocks(r, t_b, t_mask),
            ):
                ci = base.type2_completion(key, ri, (xi << t_b) | yi)
                out = (out << c_b) | np.asarray(ci)
            return _like(z, out)

    return ClassicalScheme(
        name=f"block[mu={mu},{base.name}]",
        message_bits=mu * m_b,
        randomness_bits=mu * t_b,
        ciphertext_bits=mu * c_b,
        key_space=base.key_space,
        gen=base.gen,
        enc=enc,
        dec=dec,
        core=base.core if mu == 1 else None,
        type2_completion=completion,
    )
