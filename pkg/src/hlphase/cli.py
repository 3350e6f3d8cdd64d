"""Command-line front end.

Every subcommand writes its results plus a ``manifest.json`` into ``--out``.
Exit codes: 0 success, 2 invalid input, 3 optimizer did not converge.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import hpea, optics, outputs, schemes, snl
from .outputs import EXPERIMENTAL_NOTE, json_number
from .quantum import StateValidationError, fidelity, load_density_matrix, purity
from .streams import SEED_ENV_VAR, cell_generator, default_seed

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_CONVERGED = 3

EXPERIMENT_HPEA = {
    "V_H": schemes.EXPERIMENTAL_VALUES["hpea"][0],
    "V_H_uncertainty": schemes.EXPERIMENTAL_VALUES["hpea"][1],
    "fidelity": 0.980,
    "fidelity_uncertainty": 0.003,
    "purity": 0.965,
    "purity_uncertainty": 0.006,
    "note": EXPERIMENTAL_NOTE,
}
EXPERIMENT_SNL = {
    "V_H": schemes.EXPERIMENTAL_VALUES["shot_noise"][0],
    "V_H_uncertainty": schemes.EXPERIMENTAL_VALUES["shot_noise"][1],
    "note": EXPERIMENTAL_NOTE,
}


class UsageError(ValueError):
    pass


def _seed_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help=f"master seed (default: ${SEED_ENV_VAR} or built-in)")


def _out_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, default=Path("results"), help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hlphase", description="Phase-estimation simulations at N=3.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hpea-sweep", help="conditional/unconditional Holevo variance and outcome probabilities")
    p.add_argument("--grid-size", type=int, default=hpea.DEFAULT_GRID)
    p.add_argument("--mode", choices=("exact", "mc"), default="exact")
    p.add_argument("--trials", type=int, default=100_000, help="shots per grid phase in mc mode")
    p.add_argument("--state", type=Path, default=None, help="density-matrix JSON file (default: optimal probe)")
    p.add_argument("--no-feedforward", action="store_true")
    p.add_argument("--bootstrap", type=int, default=0, help="bootstrap resamples for an mc interval (0: off)")
    p.add_argument("--workers", type=int, default=1)
    _seed_arg(p)
    _out_arg(p)

    p = sub.add_parser("hpea-shot", help="individual shots of the protocol at a fixed phase")
    p.add_argument("--phi", type=float, required=True, help="true phase in radians")
    p.add_argument("--shots", type=int, default=1)
    p.add_argument("--state", type=Path, default=None)
    p.add_argument("--no-feedforward", action="store_true")
    _seed_arg(p)
    _out_arg(p)

    p = sub.add_parser("snl", help="independent-photon baseline")
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--mode", choices=("exact", "mc"), default="exact")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--grid-size", type=int, default=hpea.DEFAULT_GRID)
    _seed_arg(p)
    _out_arg(p)

    p = sub.add_parser("optimize", help="optimize probe and controlled phases for one scheme class")
    cls = p.add_mutually_exclusive_group()
    cls.add_argument("--symmetric", dest="state_class", action="store_const", const="symmetric")
    cls.add_argument("--general", dest="state_class", action="store_const", const="general")
    cls.add_argument("--no-entanglement", dest="state_class", action="store_const", const="separable")
    alloc = p.add_mutually_exclusive_group()
    alloc.add_argument("--single-pass", dest="allocation", action="store_const", const="single")
    alloc.add_argument("--multipass", dest="allocation", action="store_const", const="multi",
                       help="best over every pass allocation summing to three")
    alloc.add_argument("--passes", dest="passes", type=str, default=None,
                       help="explicit allocation in detection order, e.g. 2,1")
    ada = p.add_mutually_exclusive_group()
    ada.add_argument("--adaptive", dest="adaptive", action="store_true", default=True)
    ada.add_argument("--non-adaptive", dest="adaptive", action="store_false")
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(state_class="general", allocation="single")
    _seed_arg(p)
    _out_arg(p)

    p = sub.add_parser("table2", help="every row of the N=3 scheme comparison")
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    _seed_arg(p)
    _out_arg(p)

    p = sub.add_parser("calibrate", help="waveplate angle to encoded phase, as CSV")
    p.add_argument("--points", type=int, default=8, help="number of equispaced phases in [0, 2 pi)")
    _out_arg(p)

    p = sub.add_parser("fidelity", help="fidelity, purity and predicted variance of a state file")
    p.add_argument("state", type=Path)
    _out_arg(p)

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest.json")
    p.add_argument("manifest", type=Path)
    _out_arg(p)
    return parser


def _load_state(path: Path | None):
    return hpea.optimal_state() if path is None else load_density_matrix(path)


def replay_argv(argv: list[str], seed: int | None) -> list[str]:
    """Drop ``--out`` and pin the seed so a manifest replays the same numbers anywhere."""
    kept, skip = [], False
    for token in argv:
        if skip:
            skip = False
        elif token == "--out":
            skip = True
        elif not token.startswith("--out="):
            kept.append(token)
    if seed is not None and not any(t == "--seed" or t.startswith("--seed=") for t in kept):
        kept += ["--seed", str(seed)]
    return kept


def _finish(args, command: str, parameters: dict, paths: list[Path], seed: int | None) -> None:
    man = outputs.manifest(command, parameters, paths, seed, replay_argv(args.argv, seed))
    outputs.write_json(args.out / "manifest.json", man)


def cmd_hpea_sweep(args, seed: int) -> int:
    state = _load_state(args.state)
    config = hpea.ProtocolConfig(
        state,
        feedforward=not args.no_feedforward,
        trials_per_phase=args.trials,
        master_seed=seed,
        grid_size=args.grid_size,
    )
    if config.N != 3:
        raise UsageError(f"the sweep output format is for two photons (N=3), state has N={config.N}")
    sweep = hpea.phase_sweep(config, args.mode, workers=args.workers)
    v_hl = hpea.heisenberg_limit(config.N)
    v = sweep.unconditional_variance
    ci = None
    if args.bootstrap and args.mode == "mc":
        ci = list(hpea.bootstrap_variance_ci(sweep.phases, sweep.metadata["counts"], args.bootstrap, seed))
    summary = {
        "schema": "hpea_summary.v1",
        "V_H": json_number(v),
        "V_H_recombined": json_number(sweep.recombined_variance()),
        "V_HL": v_hl,
        "N": config.N,
        "mode": args.mode,
        "seed": seed if args.mode == "mc" else None,
        "ratio": json_number(v / v_hl),
        "infinite": math.isinf(v),
        "feedforward": config.feedforward,
        "grid_size": config.grid_size,
        "trials_per_phase": args.trials if args.mode == "mc" else None,
        "bootstrap_ci": ci,
        "experimental_reference": EXPERIMENT_HPEA,
    }
    paths = [
        outputs.sweep_csv(args.out / "hpea_sweep.csv", sweep),
        outputs.write_json(args.out / "hpea_summary.json", summary),
    ]
    params = {
        "grid_size": args.grid_size,
        "mode": args.mode,
        "trials": args.trials,
        "state": None if args.state is None else str(args.state),
        "feedforward": config.feedforward,
        "bootstrap": args.bootstrap,
    }
    _finish(args, "hpea-sweep", params, paths, seed)
    print(f"V_H = {outputs.fmt(v)}  V_HL = {outputs.fmt(v_hl)}  ratio = {outputs.fmt(v / v_hl)}")
    return EXIT_OK


def cmd_hpea_shot(args, seed: int) -> int:
    if args.shots < 1:
        raise UsageError("--shots must be >= 1")
    state = _load_state(args.state)
    K = state.num_qubits - 1
    rows = []
    for i in range(args.shots):
        draws = cell_generator(seed, i).random(K + 1)
        rec = hpea.run_single_shot(state, args.phi, not args.no_feedforward, draws)
        rows.append([i, rec.label, *rec.bits, rec.estimate, rec.true_phase])
    header = ["shot", "label", *[f"bit{m}" for m in range(K + 1)], "estimate", "phi"]
    path = outputs._write_rows(args.out / "hpea_shots.csv", header, rows)
    params = {"phi": args.phi, "shots": args.shots, "state": None if args.state is None else str(args.state),
              "feedforward": not args.no_feedforward}
    _finish(args, "hpea-shot", params, [path], seed)
    sys.stdout.write(path.read_text(encoding="utf-8"))
    return EXIT_OK


def cmd_snl(args, seed: int) -> int:
    config = snl.SnlConfig(N=args.N, trials=args.trials, seed=seed, grid_size=args.grid_size)
    sweep = snl.snl_simulate(config, args.mode)
    v = sweep.unconditional_variance
    summary = {
        "schema": "snl_summary.v1",
        "V_H": json_number(v),
        "N": args.N,
        "mode": args.mode,
        "seed": seed if args.mode == "mc" else None,
        "n_outcomes": sweep.metadata["n_outcomes"],
        "n_informative": sweep.metadata["n_informative"],
        "infinite": math.isinf(v),
        "schedule": sweep.metadata["schedule"],
        "experimental_reference": EXPERIMENT_SNL if args.N == 3 else {},
    }
    paths = [
        outputs.sweep_csv(args.out / "snl_sweep.csv", sweep),
        outputs.write_json(args.out / "snl_summary.json", summary),
    ]
    params = {"N": args.N, "mode": args.mode, "trials": args.trials, "grid_size": args.grid_size}
    _finish(args, "snl", params, paths, seed)
    print(f"V_SNL = {outputs.fmt(v)}")
    return EXIT_OK


def _parse_passes(text: str) -> tuple[int, ...]:
    try:
        passes = tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--passes must be comma-separated integers, got {text!r}") from exc
    if sum(passes) != schemes.TOTAL_PASSES:
        raise UsageError(f"pass counts must sum to {schemes.TOTAL_PASSES}, got {passes}")
    return passes


def _result_dict(res: schemes.OptimizationResult) -> dict:
    return {
        "spec": res.spec.to_dict(),
        "best_variance": json_number(res.best_variance),
        "infinite": math.isinf(res.best_variance),
        "converged": res.converged,
        "restarts_converged": res.restarts_converged,
        "evaluations": res.evaluations,
    }


def cmd_optimize(args, seed: int) -> int:
    if args.restarts < 1:
        raise UsageError("--restarts must be >= 1")
    passes = _parse_passes(args.passes) if args.passes else None
    multipass = passes is None and args.allocation == "multi"
    if passes is not None:
        spec = schemes.SchemeSpec(passes, args.state_class, args.adaptive)
        best = schemes.optimize_scheme(spec, args.restarts, seed, args.workers)
        results = [best]
    elif multipass:
        best, results = schemes.optimize_over_allocations(
            args.state_class, args.adaptive, True, args.restarts, seed, args.workers
        )
    else:
        spec = schemes.SchemeSpec((1,) * schemes.TOTAL_PASSES, args.state_class, args.adaptive)
        best = schemes.optimize_scheme(spec, args.restarts, seed, args.workers)
        results = [best]
    ref = schemes.reference_for(args.state_class, args.adaptive, passes, multipass)
    v = best.best_variance
    payload = {
        "schema": "optimize_result.v1",
        **_result_dict(best),
        "reference": ref,
        "abs_error": None if ref is None or math.isinf(v) else abs(v - ref),
        "restarts": args.restarts,
        "seed": seed,
        "best_params": best.best_params.to_dict(),
        "allocations": [_result_dict(r) for r in results],
    }
    path = outputs.write_json(args.out / "optimize_result.json", payload)
    params = {"state_class": args.state_class, "allocation": "passes" if passes else args.allocation,
              "passes": list(passes) if passes else None, "adaptive": args.adaptive, "restarts": args.restarts}
    _finish(args, "optimize", params, [path], seed)
    ref_text = "none" if ref is None else outputs.fmt(ref)
    print(f"{best.spec.label}: V_H = {outputs.fmt(v)}  reference = {ref_text}")
    if not best.converged:
        print("warning: optimizer did not converge", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_table2(args, seed: int) -> int:
    if args.restarts < 1:
        raise UsageError("--restarts must be >= 1")
    rows = schemes.table2_report(args.restarts, seed, args.workers)
    payload = {"schema": "table2.v1", "restarts": args.restarts, "seed": seed, "rows": [r.to_dict() for r in rows]}
    path = outputs.write_json(args.out / "table2.json", payload)
    _finish(args, "table2", {"restarts": args.restarts}, [path], seed)
    mark = {True: "Y", False: "N"}
    for r in rows:
        flags = f"{mark[r.symmetric_entanglement]} {mark[r.multipass]} {mark[r.adaptive]}"
        print(f"{flags}  {r.variance:.4f}  {r.source}")
    return EXIT_OK


def cmd_calibrate(args, seed: int | None) -> int:
    if args.points < 1:
        raise UsageError("--points must be >= 1")
    phases = 2.0 * np.pi * np.arange(args.points) / args.points
    text = outputs.calibration_csv(optics.calibration_table(phases))
    path = args.out / "calibration.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    _finish(args, "calibrate", {"points": args.points}, [path], None)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_fidelity(args, seed: int | None) -> int:
    rho = load_density_matrix(args.state)
    if rho.num_qubits != 2:
        raise UsageError(f"expected a two-qubit state, got {rho.num_qubits} qubits")
    v = hpea.exact_variance(rho)
    report = {
        "schema": "fidelity_report.v1",
        "fidelity": fidelity(rho, hpea.optimal_state()),
        "purity": purity(rho),
        "V_H": json_number(v),
        "infinite": math.isinf(v),
        "V_HL": hpea.heisenberg_limit(3),
        "experimental_reference": EXPERIMENT_HPEA,
    }
    path = outputs.write_json(args.out / "fidelity_report.json", report)
    _finish(args, "fidelity", {"state": str(args.state)}, [path], None)
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_replay(args, seed: int | None) -> int:
    man = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    if man.get("schema") != f"manifest.{outputs.SCHEMA_VERSION}" or "argv" not in man:
        raise UsageError(f"{args.manifest} is not a {outputs.SCHEMA_VERSION} manifest")
    if man["argv"][:1] == ["replay"]:
        raise UsageError("refusing to replay a replay")
    return main([*man["argv"], "--out", str(args.out)])


COMMANDS = {
    "hpea-sweep": cmd_hpea_sweep,
    "hpea-shot": cmd_hpea_shot,
    "snl": cmd_snl,
    "optimize": cmd_optimize,
    "table2": cmd_table2,
    "calibrate": cmd_calibrate,
    "fidelity": cmd_fidelity,
    "replay": cmd_replay,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = list(sys.argv[1:] if argv is None else argv)
    try:
        seed = args.seed if getattr(args, "seed", None) is not None else default_seed()
        if not 0 <= seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        return COMMANDS[args.command](args, seed)
    except StateValidationError as exc:
        print(f"invalid state ({exc.invariant}): {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
