"""Command-line front end: seeded experiments with machine-readable output.

Subcommands: attack (run a named adversary in a chosen game), secure
(advantage of a probe against the permutation-based constructions, compared
to the applicable bound), lemma (channel-distance certification), equiv
(oracle interconversion comparison), suite (the full acceptance battery).

One JSON document per run on stdout (or --out). Everything in the document
is a pure function of the echoed config; wall-clock lives in a separate
"timing" key that --no-timing omits, so reruns are byte-comparable.
Exit codes: 0 pass, 1 bound or acceptance violation, 2 usage error.

Flag values beat --config file entries, which beat built-in defaults; the
effective values are echoed under "config". QINDLAB_SEED serves as a
fallback seed; sampled runs refuse to start without one.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import asdict
from fractions import Fraction

from . import __version__, acceptance, attacks, channels, games, schemes
from .games import GameSetupError
from .quantum_core import WIRE_CAP

SCHEMA_VERSION = 1


class UsageError(ValueError):
    """Bad parameters or incompatible selections; maps to exit code 2."""


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(part) for part in text.split(","))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qindlab",
        description="Exact desk-scale experiments on quantum encryption oracles.",
    )
    sub = parser.add_subparsers(dest="command")

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=None, help="experiment seed")
        p.add_argument("--jobs", type=_positive_int, default=None, help="worker threads")
        p.add_argument("--out", default=None, help="write JSON here instead of stdout")
        p.add_argument("--csv", default=None, help="also write a flat CSV row here")
        p.add_argument(
            "--no-timing",
            action="store_true",
            default=None,
            help="omit the timing field for byte-identical reruns",
        )
        p.add_argument("--config", default=None, help="JSON file with default flag values")

    def scheme_flags(p: argparse.ArgumentParser, kinds: tuple[str, ...]) -> None:
        p.add_argument("--scheme", choices=kinds, default=None)
        p.add_argument("--m", type=_positive_int, default=None, help="message bits")
        p.add_argument("--tau", type=int, default=None, help="randomness bits")
        p.add_argument("--mu", type=_positive_int, default=None, help="block count")
        p.add_argument("--family", choices=("ideal", "feistel", "identity"), default=None)
        p.add_argument("--rounds", type=_positive_int, default=None, help="feistel rounds")

    p_attack = sub.add_parser("attack", help="run a named adversary in a game")
    p_attack.add_argument("--name", choices=tuple(attacks.ATTACKS), required=True)
    p_attack.add_argument("--game", choices=games.GAME_NAMES, required=True)
    p_attack.add_argument("--mode", choices=("sampled", "exact"), default=None)
    p_attack.add_argument("--trials", type=_positive_int, default=None)
    p_attack.add_argument("--keys", type=_positive_int, default=None, help="keys for exact mode")
    p_attack.add_argument("--q", type=int, default=None, help="learning queries to pad in")
    p_attack.add_argument("--force", action="store_true", default=None)
    scheme_flags(p_attack, ("prf", "prp", "block"))
    common(p_attack)

    p_secure = sub.add_parser("secure", help="probe a construction against its bound")
    p_secure.add_argument("--game", choices=("qind", "gqind"), default=None)
    p_secure.add_argument(
        "--adversary",
        choices=("qlp", "hadamard-bit", "random", "entangled-blocks"),
        default=None,
    )
    p_secure.add_argument("--trials", type=_positive_int, default=None)
    p_secure.add_argument("--q", type=int, default=None, help="learning queries")
    scheme_flags(p_secure, ("prp", "block"))
    common(p_secure)

    p_lemma = sub.add_parser("lemma", help="certify the channel-distance bound")
    p_lemma.add_argument("--m", type=_positive_int, default=None)
    p_lemma.add_argument("--tau", type=int, default=None)
    p_lemma.add_argument("--mode", choices=("sampled", "exact"), default=None)
    p_lemma.add_argument("--samples", type=_positive_int, default=None)
    p_lemma.add_argument("--n-perm", type=_positive_int, default=None, dest="n_perm")
    p_lemma.add_argument(
        "--taken", type=_int_list, default=None, help="comma-separated taken outputs"
    )
    common(p_lemma)

    p_equiv = sub.add_parser("equiv", help="compare interconversion circuits")
    p_equiv.add_argument("--scheme", choices=("prf", "prp"), default=None)
    p_equiv.add_argument("--m", type=_positive_int, default=None)
    p_equiv.add_argument("--tau", type=int, default=None)
    p_equiv.add_argument("--keys", type=_positive_int, default=None)
    p_equiv.add_argument("--family", choices=("ideal", "feistel", "identity"), default=None)
    p_equiv.add_argument("--rounds", type=_positive_int, default=None)
    common(p_equiv)

    p_suite = sub.add_parser("suite", help="run the full acceptance battery")
    common(p_suite)

    return parser


_DEFAULTS: dict[str, dict] = {
    "attack": {
        "mode": "sampled",
        "trials": 1000,
        "keys": 4,
        "q": 0,
        "force": False,
        "scheme": "prf",
        "m": 2,
        "tau": 2,
        "mu": 1,
        "family": "ideal",
        "rounds": 4,
        "jobs": 1,
        "no_timing": False,
    },
    "secure": {
        "game": "qind",
        "adversary": "qlp",
        "trials": 5000,
        "q": 0,
        "scheme": "prp",
        "m": 2,
        "tau": 4,
        "mu": 1,
        "family": "ideal",
        "rounds": 4,
        "jobs": 1,
        "no_timing": False,
    },
    "lemma": {
        "m": 1,
        "tau": 1,
        "mode": "sampled",
        "n_perm": 5000,
        "taken": (),
        "jobs": 1,
        "no_timing": False,
    },
    "equiv": {
        "scheme": "prf",
        "m": 1,
        "tau": 1,
        "keys": 8,
        "family": "ideal",
        "rounds": 4,
        "jobs": 1,
        "no_timing": False,
    },
    "suite": {"jobs": 1, "no_timing": False},
}


def _resolve_config(args: argparse.Namespace) -> dict:
    """flags > config file > defaults, echoed in full."""
    defaults = _DEFAULTS[args.command]
    from_file: dict = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        from_file = loaded
    cfg: dict = {"command": args.command}
    names = set(defaults) | {
        k for k in vars(args) if k not in ("command", "config")
    }
    for name in sorted(names):
        flag = getattr(args, name, None)
        if flag is not None:
            cfg[name] = flag
        elif name in from_file:
            cfg[name] = from_file[name]
        else:
            cfg[name] = defaults.get(name)
    if isinstance(cfg.get("taken"), list):
        cfg["taken"] = tuple(int(t) for t in cfg["taken"])
    return cfg


def _resolve_seed(cfg: dict, required: bool) -> int | None:
    seed = cfg.get("seed")
    if seed is None:
        env = os.environ.get("QINDLAB_SEED")
        if env is not None:
            try:
                seed = int(env)
            except ValueError:
                raise UsageError(f"QINDLAB_SEED must be an integer, got {env!r}")
    if seed is None and required:
        raise UsageError("seed required for sampled mode (--seed or QINDLAB_SEED)")
    cfg["seed"] = seed
    return seed


def _build_family(name: str, block_bits: int, rounds: int) -> schemes.PermutationFamily:
    if name == "ideal":
        return schemes.ideal_prp_family(block_bits)
    if name == "feistel":
        return schemes.feistel_prp_family(block_bits, rounds=rounds)
    return schemes.identity_permutation_family(block_bits)


def _build_scheme(cfg: dict) -> schemes.ClassicalScheme:
    kind = cfg["scheme"]
    m, tau, mu = cfg["m"], cfg["tau"], cfg["mu"]
    if tau < 0:
        raise UsageError("tau must be >= 0")
    if kind != "block" and mu != 1:
        raise UsageError("mu applies to the block scheme only")
    if kind == "prf":
        if tau < 1:
            raise UsageError("the prf scheme needs tau >= 1")
        return schemes.prf_scheme(m, tau)
    base = schemes.prp_scheme(m, tau, _build_family(cfg["family"], m + tau, cfg["rounds"]))
    if kind == "prp":
        return base
    return schemes.block_scheme(base, mu)


def _check_wire_budget(game: str, scheme: schemes.ClassicalScheme) -> None:
    m, ell = scheme.message_bits, scheme.ciphertext_bits
    # gqind peaks at max(two message registers, ciphertext) because the
    # unchosen register is measured away before the ancilla attach
    need = {
        "ind": m + ell,
        "fqind": 2 * m + ell,
        "qind": ell,
        "gqind": max(2 * m, ell),
    }[game]
    if need > WIRE_CAP:
        raise UsageError(f"game {game} needs {need} wires; the simulator cap is {WIRE_CAP}")


def _strategy_for_attack(cfg: dict) -> games.AdversaryStrategy:
    name = cfg["name"]
    if name == "qlp":
        strategy: games.AdversaryStrategy = attacks.qlp_distinguisher(force=bool(cfg["force"]))
    elif name == "bz":
        strategy = attacks.bz_adversary()
    else:
        strategy = attacks.hadamard_bit_distinguisher()
    if cfg["q"] < 0:
        raise UsageError("q must be >= 0")
    return games.with_learning_queries(strategy, cfg["q"])


def cmd_attack(cfg: dict) -> tuple[dict, int]:
    spec = attacks.ATTACKS[cfg["name"]]
    game = cfg["game"]
    if game not in spec.games:
        raise UsageError(f"{spec.name} requires {'/'.join(spec.games)}")
    scheme = _build_scheme(cfg)
    _check_wire_budget(game, scheme)
    strategy = _strategy_for_attack(cfg)
    expected = spec.expected_win_rate(scheme)
    if cfg["mode"] == "exact":
        if cfg["q"]:
            raise UsageError("learning-query padding is sampled-mode only")
        seed = _resolve_seed(cfg, required=False)
        estimate = games.exact_advantage(
            scheme, strategy, key_count=cfg["keys"], seed=seed if seed is not None else 0
        )
    else:
        seed = _resolve_seed(cfg, required=True)
        runner = games.GAME_RUNNERS[game]
        estimate = games.estimate_advantage(
            runner, scheme, strategy, cfg["trials"], seed, jobs=cfg["jobs"]
        )
    results = {
        "attack": spec.name,
        "game": game,
        "scheme": scheme.name,
        "estimate": asdict(estimate),
        "expected_win_rate": None if expected is None else float(expected),
        "expected_win_rate_exact": None if expected is None else str(expected),
    }
    return results, 0


def cmd_secure(cfg: dict) -> tuple[dict, int]:
    scheme = _build_scheme(cfg)
    game = cfg["game"]
    _check_wire_budget(game, scheme)
    name = cfg["adversary"]
    if name == "qlp":
        strategy: games.AdversaryStrategy = attacks.qlp_distinguisher(force=True)
    elif name == "hadamard-bit":
        strategy = attacks.hadamard_bit_distinguisher()
    elif name == "random":
        strategy = games.RandomGuesser()
    else:
        strategy = games.EntangledBlockProbe(cfg["mu"])
    if game not in strategy.games:
        raise UsageError(f"{name} requires {'/'.join(strategy.games)}")
    if cfg["q"] < 0:
        raise UsageError("q must be >= 0")
    strategy = games.with_learning_queries(strategy, cfg["q"])
    seed = _resolve_seed(cfg, required=True)
    runner = games.GAME_RUNNERS[game]
    estimate = games.estimate_advantage(
        runner, scheme, strategy, cfg["trials"], seed, jobs=cfg["jobs"]
    )
    taken_count = cfg["q"] * cfg["mu"] * 2 ** cfg["m"]
    per_block = channels.corollary_bound(cfg["m"], cfg["tau"], taken_count)
    effective = cfg["mu"] * per_block
    ci_half_width = 2.0 * estimate.half_width
    within = abs(estimate.advantage) <= effective + ci_half_width
    results = {
        "adversary": strategy.name,
        "game": game,
        "scheme": scheme.name,
        "estimate": asdict(estimate),
        "q": cfg["q"],
        "mu": cfg["mu"],
        "taken_count": taken_count,
        "corollary_bound": per_block,
        "effective_bound": effective,
        "ci_half_width": ci_half_width,
        "within_bound": within,
    }
    return results, 0 if within else 1


def cmd_lemma(cfg: dict) -> tuple[dict, int]:
    m, tau = cfg["m"], cfg["tau"]
    if tau < 0:
        raise UsageError("tau must be >= 0")
    if 2 * m + tau > WIRE_CAP:
        raise UsageError(f"certification needs {2 * m + tau} wires; cap is {WIRE_CAP}")
    taken = tuple(cfg["taken"])
    exact = cfg["mode"] == "exact"
    samples = cfg["samples"] if cfg.get("samples") is not None else (1 if exact else 500)
    cfg["samples"] = samples
    seed = _resolve_seed(cfg, required=(not exact) or samples > 1)
    import numpy as np

    rng = np.random.default_rng(seed)
    n_perm = None if exact else cfg["n_perm"]
    if taken:
        report = channels.certify_corollary_bound(
            m, tau, taken, samples=samples, n_perm=n_perm, rng=rng
        )
    else:
        report = channels.certify_lemma_bound(
            m, tau, samples=samples, n_perm=n_perm, rng=rng
        )
    results = asdict(report)
    results["bound_kind"] = "taken-excluded" if taken else "taken-free"
    return results, 0 if report.satisfied else 1


def cmd_equiv(cfg: dict) -> tuple[dict, int]:
    import numpy as np

    from . import oracles

    m, tau = cfg["m"], cfg["tau"]
    if tau < 0:
        raise UsageError("tau must be >= 0")
    if m > 3 or tau > 3:
        raise UsageError("equiv runs at m, tau <= 3")
    cfg["mu"] = 1
    scheme = _build_scheme(cfg)
    seed = _resolve_seed(cfg, required=True)
    rng = np.random.default_rng(seed)
    keys = []
    while len(keys) < cfg["keys"]:
        k = scheme.gen(16, rng)
        if k not in keys:
            keys.append(k)
    r_values = list(range(2**tau)) if tau <= 2 else [0, 1, 2**tau - 1]
    per_key = []
    worst = 0.0
    for key in keys:
        dev1 = 0.0
        dev2 = 0.0
        for r in r_values:
            u2 = oracles.type2_unitary(scheme, key, r)
            direct1 = oracles.type1_unitary(scheme, key, r)
            built1 = oracles.type1_from_type2(u2)
            if not np.array_equal(built1.permutation, direct1.permutation):
                dev1 = max(
                    dev1,
                    float(
                        np.max(
                            np.abs(
                                built1.operator().matrix - direct1.operator().matrix
                            )
                        )
                    ),
                )
            u1d = oracles.type1_decryption_unitary(scheme, key, r)
            built2 = oracles.type2_from_type1(direct1, u1d)
            if not np.array_equal(built2.type2_action_table(), u2.type2_action_table()):
                dev2 = 1.0
        per_key.append(
            {"key": int(key), "type1_deviation": dev1, "type2_y0_deviation": dev2}
        )
        worst = max(worst, dev1, dev2)
    passed = worst <= 1e-12
    results = {
        "scheme": scheme.name,
        "keys": [int(k) for k in keys],
        "randomness_values": r_values,
        "per_key": per_key,
        "max_entrywise_deviation": worst,
        "passed": passed,
    }
    return results, 0 if passed else 1


def cmd_suite(cfg: dict) -> tuple[dict, int]:
    outcomes = acceptance.run_all(jobs=cfg["jobs"])
    total = sum(o.seconds for o in outcomes)
    within_time = total <= acceptance.SUITE_TIME_LIMIT
    all_passed = all(o.passed for o in outcomes) and within_time
    results = {
        "criteria": [
            {
                "number": o.number,
                "name": o.name,
                "passed": o.passed,
                "seconds": round(o.seconds, 3),
                "details": o.details,
            }
            for o in outcomes
        ],
        "total_seconds": round(total, 3),
        "time_limit_seconds": acceptance.SUITE_TIME_LIMIT,
        "within_time_limit": within_time,
        "all_passed": all_passed,
    }
    return results, 0 if all_passed else 1


_COMMANDS = {
    "attack": cmd_attack,
    "secure": cmd_secure,
    "lemma": cmd_lemma,
    "equiv": cmd_equiv,
    "suite": cmd_suite,
}


def _json_clean(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (tuple, set)):
        return list(value)
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def _flatten(prefix: str, value, row: dict) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}{k}." if prefix else f"{k}.", v, row)
        return
    key = prefix.rstrip(".")
    if isinstance(value, (list, tuple)):
        row[key] = json.dumps(value, default=_json_clean)
    else:
        row[key] = value


def _emit(doc: dict, cfg: dict) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True, default=_json_clean)
    out = cfg.get("out")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    csv_path = cfg.get("csv")
    if csv_path:
        row: dict = {}
        _flatten("", {"config": doc["config"], "results": doc["results"]}, row)
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=sorted(row))
            writer.writeheader()
            writer.writerow(row)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        cfg = _resolve_config(args)
        start = time.perf_counter()
        results, code = _COMMANDS[args.command](cfg)
        elapsed = time.perf_counter() - start
    except (UsageError, GameSetupError, schemes.CoreDecompositionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    echo = {k: v for k, v in cfg.items() if k not in ("out", "csv", "no_timing")}
    doc = {
        "schema": SCHEMA_VERSION,
        "version": __version__,
        "command": cfg["command"],
        "config": echo,
        "results": results,
    }
    if not cfg.get("no_timing"):
        doc["timing"] = {"wall_seconds": round(elapsed, 6)}
    _emit(doc, cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
