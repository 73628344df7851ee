"""Command-line entry point.

Subcommands::

    qpce run      one protocol run (optionally under attack)
    qpce table1   exhaustive per-bit outcome table
    qpce analyze  leak bound and Monte Carlo estimate for one carrier
    qpce attack   repeated attack experiments
    qpce circuit  |W_1> preparation circuit and Clifford reachability check

JSON goes to stdout (``--format text`` for humans), logs to stderr.  The seed
defaults to 0, or to ``$QPCE_SEED`` when set.

Exit codes: 0 success, 1 configuration error, 2 protocol abort,
3 consistency-scan failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from . import adversary, analysis, protocol, states
from .qsim import EXACT_ATOL, fidelity

SCHEMA = 1
EXIT_OK, EXIT_CONFIG, EXIT_ABORT, EXIT_SCAN = 0, 1, 2, 3

log = logging.getLogger("qpce")

ENCODING_FLAGS = {"isy": "i_sigma_y", "sx": "sigma_x"}
RESOURCE_FLAGS = {"w1": "W1", "symw": "symmetric_W", "epr": "EPR"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _hex(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed hex value {text!r}") from None


def _default_seed() -> int:
    raw = os.environ.get("QPCE_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"QPCE_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="master seed (default: $QPCE_SEED or 0)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    enc = _Parser(add_help=False)
    enc.add_argument("--encoding", choices=tuple(ENCODING_FLAGS), default="isy",
                     help="bit-1 operator: isy = i*sigma_y (default), sx = sigma_x")

    proto = _Parser(add_help=False)
    proto.add_argument("--variant", choices=("aw", "lwj11", "lwg12"), default="aw")
    proto.add_argument("--bits", type=int, default=8, help="secret bit length N (1-64)")
    proto.add_argument("--mix", type=int, default=8, help="mix-up sequence length L")
    proto.add_argument("--decoys", type=int, default=8, help="decoy photons per direction")
    proto.add_argument("--threshold", type=float, default=0.0, help="abort if decoy error rate exceeds this")

    parser = _Parser(prog="qpce", description="Quantum private comparison of equality simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", parents=[common, enc, proto], help="run the protocol once")
    p.add_argument("--x", type=_hex, required=True, help="Alice's secret (hex)")
    p.add_argument("--y", type=_hex, required=True, help="Bob's secret (hex)")
    p.add_argument("--adversary", choices=("intercept_resend", "tp_classical"))
    p.add_argument("--transcript", action="store_true", help="include the full transcript")

    p = sub.add_parser("table1", parents=[common, enc], help="exhaustive per-bit outcome table")
    p.add_argument("--variant", choices=("aw", "lwj11", "lwg12"), default="aw")

    p = sub.add_parser("analyze", parents=[common, enc], help="leak bound for one carrier")
    p.add_argument("--resource", choices=tuple(RESOURCE_FLAGS), default="w1")
    p.add_argument("--trials", type=int, default=100_000)

    p = sub.add_parser("attack", parents=[common, enc, proto], help="repeated attack experiment")
    p.add_argument("--kind", choices=adversary.ATTACK_KINDS, required=True)
    p.add_argument("--trials", type=int, default=1000, help="runs (or interceptions)")
    p.add_argument("--resource", choices=tuple(RESOURCE_FLAGS), default="w1",
                   help="carrier for dishonest_participant")

    p = sub.add_parser("circuit", parents=[common], help="verify the |W_1> preparation circuit")
    p.add_argument("--show-steps", action="store_true")
    p.add_argument("--stabilizer-check", action="store_true")
    p.add_argument("--depth", type=int, default=12, help="search depth for --stabilizer-check")
    return parser


def _config(args) -> protocol.ProtocolConfig:
    if not 1 <= args.bits <= 64:
        raise UsageError(f"--bits must be in [1, 64], got {args.bits}")
    return protocol.ProtocolConfig(
        variant=args.variant.upper(), n_bits=args.bits, mix_length=args.mix,
        decoy_count=args.decoys, encoding=ENCODING_FLAGS[args.encoding],
        error_threshold=args.threshold, seed=args.seed)


def cmd_run(args) -> tuple[dict, str, int]:
    config = _config(args)
    for name, value in (("--x", args.x), ("--y", args.y)):
        if value >> config.n_bits:
            raise UsageError(f"{name} does not fit in {config.n_bits} bits")
    scenario = adversary.AttackScenario(args.adversary) if args.adversary == "intercept_resend" else None
    log.info("running %s with N=%d L=%d", config.variant, config.n_bits, config.mix_length)
    run = protocol.run_protocol(config, args.x, args.y, adversary=scenario)
    out = {"schema": SCHEMA, "command": "run", **run.to_dict(include_transcript=args.transcript)}
    if args.adversary == "tp_classical" and not run.report.aborted:
        attack = adversary.tp_classical_attack(run.transcript, config.variant, run.tp_view,
                                               np.random.default_rng(args.seed), run.report.r)
        out["attack"] = attack.to_dict()
    elif args.adversary == "intercept_resend":
        out["attack"] = {"kind": "intercept_resend", "detected": run.report.aborted,
                         "error_rates": run.report.error_rates}

    r = run.report
    lines = [f"variant {config.variant}  N={config.n_bits}  L={config.mix_length}  "
             f"decoys={config.decoy_count}  encoding={config.encoding}",
             f"verdict: {r.verdict}",
             f"R = {r.r}   R' = {r.r_prime}",
             "decoy error rates: " + ", ".join(f"{d} {v:.3f}" for d, v in r.error_rates.items())]
    lines += [f"note: {n}" for n in r.notes]
    if "attack" in out and out["attack"]["kind"] == "tp_classical":
        a = out["attack"]
        lines.append(f"TP attack: recovered R = {a['recovered_R']} "
                     f"(method 1: {a['details']['method1_R']}, method 2: {a['details']['method2_R']})")
    return out, "\n".join(lines), EXIT_ABORT if r.aborted else EXIT_OK


def cmd_table1(args) -> tuple[dict, str, int]:
    scan = analysis.correctness_scan(args.variant.upper(), ENCODING_FLAGS[args.encoding])
    rows = analysis.table1_rows(scan)
    bad = scan.mismatches()
    out = {
        "schema": SCHEMA, "command": "table1", "variant": scan.variant, "encoding": scan.encoding,
        "row_count": len(rows), "all_consistent": not bad,
        "rows": rows,
        "mismatch_branches": [vars(r) for r in bad],
    }
    text = [analysis.render_table(rows), "", f"{len(rows)} rows; "
            + ("every row has C = x XOR y" if not bad else f"{len(bad)} branches violate C = x XOR y")]
    if bad:
        text.append("violating branches (x y kind_a kind_b -> C):")
        seen = sorted({(r.x, r.y, r.kind_a, r.kind_b, r.c) for r in bad})
        text += [f"  {x} {y} {ka:4s} {kb:4s} -> {c}" for x, y, ka, kb, c in seen]
    return out, "\n".join(text), EXIT_OK if not bad else EXIT_SCAN


def cmd_analyze(args) -> tuple[dict, str, int]:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    rep = analysis.leak_monte_carlo(RESOURCE_FLAGS[args.resource], ENCODING_FLAGS[args.encoding],
                                    args.trials, np.random.default_rng(args.seed))
    out = {"schema": SCHEMA, "command": "analyze", **rep.to_dict()}
    text = (f"resource {rep.resource}, encoding {rep.encoding}\n"
            f"rho0 diag = {np.real(np.diag(rep.rho0.entries)).round(6).tolist()}\n"
            f"rho1 diag = {np.real(np.diag(rep.rho1.entries)).round(6).tolist()}\n"
            f"Helstrom bound = {rep.bound:.6f}\n"
            f"empirical = {rep.empirical:.6f} over {rep.trials} trials (sigma {rep.sigma:.5f})")
    return out, text, EXIT_OK


def cmd_attack(args) -> tuple[dict, str, int]:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.kind == "dishonest_participant":
        outcome = adversary.dishonest_participant_attack(
            RESOURCE_FLAGS[args.resource], ENCODING_FLAGS[args.encoding], args.trials,
            np.random.default_rng(args.seed))
    elif args.kind == "intercept_resend":
        outcome = adversary.intercept_resend_experiment(_config(args), args.trials, seed=args.seed)
    else:
        outcome = adversary.tp_equality_experiment(_config(args), args.trials, seed=args.seed)
    out = {"schema": SCHEMA, "command": "attack", **outcome.to_dict()}
    text = json.dumps(outcome.to_dict(), indent=2)
    return out, text, EXIT_OK


def cmd_circuit(args) -> tuple[dict, str, int]:
    circuit = states.w1_circuit()
    fid = fidelity(states.replay(circuit), states.make_w1())
    elementary = states.elementary_steps(circuit)
    ok = fid >= 1 - EXACT_ATOL
    out = {
        "schema": SCHEMA, "command": "circuit",
        "wires": "1-based particle labels",
        "steps": circuit.to_json(),
        "logical_steps": len(circuit.steps),
        "elementary_gates": len(elementary),
        "fidelity": fid,
        "verified": ok,
        "note": "|W_1> is not a stabilizer state, so the circuit needs one controlled-H "
                "beyond NOT/CNOT/H",
    }
    text = [f"fidelity to |W_1> = {fid:.15f} ({'ok' if ok else 'FAILED'})"]
    if args.show_steps:
        out["step_descriptions"] = [s.describe() for s in circuit.steps]
        out["elementary_steps"] = [s.to_dict() for s in elementary]
        text += [f"  {i + 1}. {s.describe()}" for i, s in enumerate(circuit.steps)]
        text.append(f"elementary form ({len(elementary)} gates): "
                    + ", ".join(s.describe() for s in elementary))
    if args.stabilizer_check:
        check = states.stabilizer_check(max_depth=args.depth)
        out["stabilizer_check"] = check
        text.append(f"{{NOT, CNOT, H}} search: {check['reachable_states']} states "
                    f"(closed at depth {check['closure_depth']}), "
                    f"|W_1> reachable: {check['w1_reachable']}, "
                    f"best fidelity {check['best_fidelity_to_w1']:.6f}")
    text.append(out["note"])
    return out, "\n".join(text), EXIT_OK if ok else EXIT_SCAN


COMMANDS = {"run": cmd_run, "table1": cmd_table1, "analyze": cmd_analyze,
            "attack": cmd_attack, "circuit": cmd_circuit}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.seed is None:
            args.seed = _default_seed()
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
        out, text, code = COMMANDS[args.command](args)
    except (UsageError, protocol.ConfigError, ValueError) as exc:
        print(f"qpce: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
