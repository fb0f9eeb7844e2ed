"""Command line front end.

Exit codes:
    0  success (pool complete / run converged / artifact written)
    1  honest negative result (incomplete pool, search budget exhausted)
    2  usage, parse, or input errors
    3  ADAPT run ended in gradient_stall
    4  ADAPT run ended in iteration_cap

Every command that writes an artifact also writes `<artifact>.manifest.json`
recording the command, arguments, inputs and outputs; re-running the same
command line reproduces the artifact byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

from . import __version__, adapt, groups, hamiltonians, pools, svg, symmetry
from .validation import as_occupation


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


def _load_symmetry(path):
    if path is None:
        return None
    try:
        return symmetry.load_symmetry_spec(path)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc))


def _load_pool_file(path):
    try:
        return pools.read_pool(path)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc))


def _load_ham(path):
    try:
        return hamiltonians.load_hamiltonian(path)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc))


def _write_manifest(out_path: str, command: str, args: argparse.Namespace,
                    inputs: list, outputs: list) -> None:
    params = {}
    for k, v in sorted(vars(args).items()):
        if k in ("func", "command", "config"):
            continue
        params[k] = v
    doc = {
        "command": command,
        "parameters": params,
        "inputs": sorted(inputs),
        "outputs": sorted(outputs),
        "version": __version__,
    }
    with open(out_path + ".manifest.json", "w", encoding="utf-8",
              newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_pool_check(args) -> int:
    ops = _load_pool_file(args.file)
    spec = _load_symmetry(args.symmetry)
    try:
        report = groups.check_pool(ops, level=args.level, spec=spec)
    except (ValueError, groups.EnumerationCapError) as exc:
        raise CliError(str(exc))
    print(report.to_kv() if args.kv else report.to_text())
    return 0 if report.complete else 1


def cmd_pool_find(args) -> int:
    spec = _load_symmetry(args.symmetry)
    try:
        if spec is not None:
            n_starters = args.starters
            if n_starters is None:
                n_starters = pools.default_starter_count(spec)
            pool = pools.symmetry_adapted_mcp(
                spec, n_starters, args.seed, level=args.level,
                max_attempts=args.attempts)
        else:
            if args.qubits is None:
                raise CliError("--qubits is required without --symmetry")
            if args.starters is not None:
                raise CliError("--starters needs --symmetry")
            pool = pools.random_mcp(args.qubits, args.seed, level=args.level,
                                    max_attempts=args.attempts)
    except ValueError as exc:
        raise CliError(str(exc))
    except pools.SearchBudgetError as exc:
        print(f"search failed: {exc}", file=sys.stderr)
        return 1
    pools.write_pool(args.out, pool)
    inputs = [args.symmetry] if args.symmetry else []
    _write_manifest(args.out, "pool find", args, inputs, [args.out])
    print(f"wrote {len(pool)} operators to {args.out} "
          f"(attempt {pool.attempts}, level {pool.check_level})")
    return 0


def cmd_ham_random(args) -> int:
    spec = _load_symmetry(args.symmetry)
    constraints = symmetry.build_constraints(spec) if spec else None
    bref = None
    if args.brillouin_ref is not None:
        bref = _occupation(args.brillouin_ref, args.qubits)
    try:
        h = hamiltonians.random_real_hamiltonian(
            args.qubits, args.terms, args.seed, constraints=constraints,
            max_flip_weight=args.max_flip_weight, brillouin_reference=bref)
    except ValueError as exc:
        raise CliError(str(exc))
    hamiltonians.save_hamiltonian(args.out, h)
    inputs = [args.symmetry] if args.symmetry else []
    _write_manifest(args.out, "ham random", args, inputs, [args.out])
    print(f"wrote {len(h)} terms to {args.out}")
    return 0


def cmd_ham_fci(args) -> int:
    h = _load_ham(args.file)
    try:
        e = hamiltonians.ground_energy(h, seed=args.seed)
    except hamiltonians.GroundEnergyError as exc:
        raise CliError(str(exc))
    print(f"{e:.17g}")
    return 0


def _occupation(text, n):
    s = str(text)
    try:
        if len(s) == n and all(c in "01" for c in s):
            return as_occupation(s, n)
        return as_occupation(int(s), n)
    except ValueError as exc:
        raise CliError(str(exc))


def _adapt_config(args) -> adapt.AdaptConfig:
    return adapt.AdaptConfig(eps_grad=args.eps_grad, eps_energy=args.eps_energy,
                             max_iters=args.max_iters)


_STATUS_CODE = {"converged": 0, "gradient_stall": 3, "iteration_cap": 4}


def _resolve_eref(args, h):
    if args.fci and args.eref is not None:
        raise CliError("--fci and --eref are mutually exclusive")
    if args.fci:
        return hamiltonians.ground_energy(h)
    return args.eref


def cmd_adapt_run(args) -> int:
    h = _load_ham(args.ham)
    ops = _load_pool_file(args.pool)
    if ops and ops[0].n_qubits != h.n_qubits:
        raise CliError(f"pool is on {ops[0].n_qubits} qubits, "
                       f"Hamiltonian on {h.n_qubits}")
    reference = _occupation(args.reference, h.n_qubits)
    e_ref = _resolve_eref(args, h)
    config = _adapt_config(args)

    with open(args.trace, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(adapt.TRACE_HEADER + "\n")
        fh.flush()

        def stream(record, _grads):
            fh.write(adapt.format_trace_record(record) + "\n")
            fh.flush()
            if not args.quiet:
                err = f" error={record.error:.3e}" if record.error is not None else ""
                print(f"iter={record.iteration} op={record.op} "
                      f"grad={record.max_grad:.3e} "
                      f"energy={record.energy:.12f}{err}")

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # bare pool files are expected here
            _, trace = adapt.run_adapt(h, ops, reference, config,
                                       e_ref=e_ref, on_iteration=stream)
        fh.write(f"# status={trace.status}\n")

    _write_manifest(args.trace, "adapt run", args,
                    [args.ham, args.pool], [args.trace])
    final = trace.final_energy
    print(f"status={trace.status} iterations={len(trace.records)}"
          + (f" energy={final:.12f}" if final is not None else ""))
    return _STATUS_CODE[trace.status]


def cmd_scan(args) -> int:
    files = sorted(f for f in os.listdir(args.ham_dir) if f.endswith(".ham"))
    if not files:
        raise CliError(f"no .ham files in {args.ham_dir}")
    ops = _load_pool_file(args.pool)
    config = _adapt_config(args)

    def one(fname):
        h = _load_ham(os.path.join(args.ham_dir, fname))
        reference = _occupation(args.reference, h.n_qubits)
        e_ref = _resolve_eref(args, h)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            _, trace = adapt.run_adapt(h, ops, reference, config, e_ref=e_ref)
        final = trace.final_energy
        err = (repr(abs(final - e_ref))
               if e_ref is not None and final is not None else "")
        return (f"{fname},{trace.status},{len(trace.records)},"
                f"{repr(float(final)) if final is not None else ''},{err}")

    workers = max(1, int(os.environ.get("MCPOOLS_THREADS", "1")))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(one, files))
    else:
        rows = [one(f) for f in files]

    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("file,status,iterations,energy,error\n")
        for row in rows:
            fh.write(row + "\n")
    _write_manifest(args.out, "scan", args,
                    [args.pool] + [os.path.join(args.ham_dir, f) for f in files],
                    [args.out])
    print(f"scanned {len(files)} Hamiltonians -> {args.out}")
    return 0


def cmd_plot(args) -> int:
    try:
        trace = adapt.read_trace_csv(args.trace)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc))
    if not trace.records:
        raise CliError(f"{args.trace}: empty trace, nothing to plot")
    iters = [r.iteration for r in trace.records]
    series = {"max pool gradient": [r.max_grad for r in trace.records]}
    if any(r.error is not None for r in trace.records):
        series["energy error"] = [r.error for r in trace.records]
    try:
        doc = svg.render_line_chart(iters, series,
                                    title=f"ADAPT convergence ({trace.status})",
                                    y_label="magnitude")
    except ValueError as exc:
        raise CliError(str(exc))
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(doc)
    _write_manifest(args.out, "plot", args, [args.trace], [args.out])
    print(f"wrote {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mcpools",
        description="Minimal complete Pauli pools and ADAPT-VQE at desk scale.")
    parser.add_argument("--config", default=None,
                        help="key=value file of option defaults; flags win")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    leaves = {}

    pool = sub.add_parser("pool", help="verify and search operator pools")
    pool_sub = pool.add_subparsers(dest="pool_command", required=True)

    p = pool_sub.add_parser("check", help="run the completeness battery")
    p.add_argument("file", help="pool file, one Pauli string per line")
    p.add_argument("--symmetry", default=None, help="symmetry spec file")
    p.add_argument("--level", default="auto",
                   choices=["auto", "group", "inseparable", "algebra"])
    p.add_argument("--kv", action="store_true",
                   help="machine-readable key=value output")
    p.set_defaults(func=cmd_pool_check)
    leaves["pool check"] = p

    p = pool_sub.add_parser("find", help="randomized minimal complete pool search")
    p.add_argument("--qubits", type=int, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--symmetry", default=None, help="symmetry spec file")
    p.add_argument("--starters", type=int, default=None,
                   help="exact starter count (default: half the pool)")
    p.add_argument("--level", default="auto",
                   choices=["auto", "group", "inseparable", "algebra"])
    p.add_argument("--attempts", type=int, default=100_000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pool_find)
    leaves["pool find"] = p

    ham = sub.add_parser("ham", help="Hamiltonian utilities")
    ham_sub = ham.add_subparsers(dest="ham_command", required=True)

    p = ham_sub.add_parser("random", help="seeded random real Hamiltonian")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--symmetry", default=None)
    p.add_argument("--max-flip-weight", type=int, default=None)
    p.add_argument("--brillouin-ref", default=None,
                   help="occupation whose single-excitation couplings vanish")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ham_random)
    leaves["ham random"] = p

    p = ham_sub.add_parser("fci", help="exact ground energy")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ham_fci)
    leaves["ham fci"] = p

    av = sub.add_parser("adapt", help="run ADAPT-VQE")
    adapt_sub = av.add_subparsers(dest="adapt_command", required=True)

    p = adapt_sub.add_parser("run", help="single Hamiltonian, streamed trace")
    p.add_argument("--ham", required=True)
    p.add_argument("--pool", required=True)
    p.add_argument("--reference", default="0",
                   help="basis index or 0/1 occupation string")
    p.add_argument("--fci", action="store_true",
                   help="diagonalize for the convergence target")
    p.add_argument("--eref", type=float, default=None,
                   help="explicit reference energy")
    p.add_argument("--eps-grad", type=float, default=1e-8)
    p.add_argument("--eps-energy", type=float, default=1e-8)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--trace", required=True, help="output trace CSV")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_adapt_run)
    leaves["adapt run"] = p

    p = sub.add_parser("scan", help="run ADAPT over a directory of .ham files")
    p.add_argument("--ham-dir", required=True)
    p.add_argument("--pool", required=True)
    p.add_argument("--reference", default="0")
    p.add_argument("--fci", action="store_true")
    p.add_argument("--eref", type=float, default=None)
    p.add_argument("--eps-grad", type=float, default=1e-8)
    p.add_argument("--eps-energy", type=float, default=1e-8)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)
    leaves["scan"] = p

    p = sub.add_parser("plot", help="render a trace CSV as an SVG chart")
    p.add_argument("trace")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    leaves["plot"] = p

    return parser, leaves


def _read_config(path) -> dict:
    conf = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise CliError(f"{path}:{lineno}: expected key=value")
                k, _, v = line.partition("=")
                conf[k.strip().replace("-", "_")] = v.strip()
    except OSError as exc:
        raise CliError(str(exc))
    return conf


def _apply_config(leaf: argparse.ArgumentParser, conf: dict, path: str) -> None:
    actions = {a.dest: a for a in leaf._actions}
    defaults = {}
    for key, raw in conf.items():
        if key not in actions:
            raise CliError(f"{path}: unknown option {key!r} for this command")
        action = actions[key]
        if isinstance(action, (argparse._StoreTrueAction,
                               argparse._StoreFalseAction)):
            if raw.lower() not in ("true", "false"):
                raise CliError(f"{path}: {key} must be true or false")
            defaults[key] = raw.lower() == "true"
        elif action.type is not None:
            try:
                defaults[key] = action.type(raw)
            except ValueError:
                raise CliError(f"{path}: bad value {raw!r} for {key}")
        else:
            defaults[key] = raw
        if action.required:
            action.required = False
    leaf.set_defaults(**defaults)


def _peek_config_and_leaf(argv):
    """Cheap token scan so config defaults can land before the real parse
    (a probe parse would trip over required options the config provides)."""
    config = None
    words = []
    skip_next = False
    for i, tok in enumerate(argv):
        if skip_next:
            skip_next = False
            continue
        if tok == "--config":
            config = argv[i + 1] if i + 1 < len(argv) else None
            skip_next = True
        elif tok.startswith("--config="):
            config = tok.split("=", 1)[1]
        elif tok.startswith("-"):
            skip_next = tok.startswith("--") and "=" not in tok
        elif len(words) < 2:
            words.append(tok)
    name = " ".join(words[:2]) if words and words[0] in ("pool", "ham", "adapt") \
        else (words[0] if words else "")
    return config, name


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, leaves = build_parser()
    try:
        config_path, leaf_name = _peek_config_and_leaf(argv)
        if config_path is not None and leaf_name in leaves:
            _apply_config(leaves[leaf_name], _read_config(config_path),
                          config_path)
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
