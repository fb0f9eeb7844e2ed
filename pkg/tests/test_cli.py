import json

import numpy as np
import pytest

import mcpools
from mcpools.cli import main

from conftest import FIXTURES


def run(argv):
    return main([str(a) for a in argv])


def make_problem(tmp_path, n=4, seed=0, terms=14):
    ham = tmp_path / "h.ham"
    pool = tmp_path / "p.pool"
    mcpools.save_hamiltonian(ham, mcpools.random_real_hamiltonian(n, terms, seed=seed))
    mcpools.write_pool(pool, mcpools.random_mcp(n, seed=seed))
    return ham, pool


def test_pool_check_complete_exit_zero(capsys):
    code = run(["pool", "check", FIXTURES / "pool_n6_reference.pool",
                "--level", "algebra"])
    assert code == 0
    out = capsys.readouterr().out
    assert "COMPLETE" in out and "528" in out


def test_pool_check_kv_output(capsys):
    code = run(["pool", "check", FIXTURES / "pool_n6_reference.pool",
                "--level", "algebra", "--kv"])
    assert code == 0
    kv = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert kv["complete"] == "true"
    assert kv["closure_size"] == "528"


def test_pool_check_incomplete_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.pool"
    bad.write_text("YIII\nIYII\nIIYI\nIIIY\nXYII\nIIXY\n")  # separable
    assert run(["pool", "check", bad]) == 1
    assert "INCOMPLETE" in capsys.readouterr().out


def test_pool_check_symmetry(capsys, tmp_path):
    code = run(["pool", "check", FIXTURES / "h4_pool.pool",
                "--symmetry", FIXTURES / "h4.sym", "--level", "algebra", "--kv"])
    assert code == 0
    kv = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert kv["complete"] == "true"
    assert kv["pool_size"] == "11" and kv["expected_size"] == "11"


def test_pool_check_parse_error_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.pool"
    bad.write_text("XQ\n")
    assert run(["pool", "check", bad]) == 2
    assert "position" in capsys.readouterr().err


def test_pool_find_writes_pool_and_manifest(tmp_path):
    out = tmp_path / "found.pool"
    assert run(["pool", "find", "--qubits", 5, "--seed", 3, "--out", out]) == 0
    ops = mcpools.read_pool(out)
    assert len(ops) == 8
    assert mcpools.check_pool(ops, level="algebra").complete
    manifest = json.loads((tmp_path / "found.pool.manifest.json").read_text())
    assert manifest["command"] == "pool find"
    assert manifest["outputs"] == [str(out)]
    assert manifest["parameters"]["seed"] == 3


def test_pool_find_symmetry_default_starters(tmp_path):
    out = tmp_path / "h4.pool"
    assert run(["pool", "find", "--symmetry", FIXTURES / "h4.sym",
                "--seed", 1, "--out", out]) == 0
    text = out.read_text()
    assert "starters=6" in text  # ceil(11/2) by default
    ops = mcpools.read_pool(out)
    assert len(ops) == 11


def test_ham_random_round_trip_and_rerun_identical(tmp_path):
    out = tmp_path / "h.ham"
    argv = ["ham", "random", "--qubits", 5, "--terms", 12, "--seed", 7,
            "--out", out]
    assert run(argv) == 0
    first = out.read_bytes()
    h = mcpools.load_hamiltonian(out)
    assert h.n_qubits == 5 and len(h.terms) == 12
    assert run(argv) == 0
    assert out.read_bytes() == first


def test_ham_random_with_symmetry_and_weight(tmp_path):
    out = tmp_path / "c.ham"
    assert run(["ham", "random", "--qubits", 8, "--terms", 30, "--seed", 2,
                "--symmetry", FIXTURES / "h4.sym", "--max-flip-weight", 4,
                "--brillouin-ref", "11110000", "--out", out]) == 0
    h = mcpools.load_hamiltonian(out)
    cons = mcpools.build_constraints(mcpools.load_symmetry_spec(FIXTURES / "h4.sym"))
    assert all(mcpools.satisfies_constraints(p, cons) for _, p in h.terms)
    assert all(p.flip_weight <= 4 for _, p in h.terms)


def test_ham_fci_prints_ground_energy(tmp_path, capsys):
    ham, _ = make_problem(tmp_path, seed=5)
    assert run(["ham", "fci", ham]) == 0
    printed = float(capsys.readouterr().out.strip())
    assert printed == pytest.approx(
        mcpools.ground_energy(mcpools.load_hamiltonian(ham)), abs=1e-12)


def test_adapt_run_converged(tmp_path, capsys):
    ham, pool = make_problem(tmp_path, seed=0)
    trace = tmp_path / "t.csv"
    code = run(["adapt", "run", "--ham", ham, "--pool", pool, "--fci",
                "--trace", trace])
    assert code == 0
    parsed = mcpools.read_trace_csv(trace)
    assert parsed.status == "converged"
    assert parsed.records[-1].error < 1e-8
    out = capsys.readouterr().out
    assert "converged" in out
    manifest = json.loads((tmp_path / "t.csv.manifest.json").read_text())
    assert manifest["command"] == "adapt run"
    assert str(ham) in manifest["inputs"]


def test_adapt_run_rerun_byte_identical(tmp_path):
    ham, pool = make_problem(tmp_path, seed=1)
    trace = tmp_path / "t.csv"
    argv = ["adapt", "run", "--ham", ham, "--pool", pool, "--fci",
            "--trace", trace]
    assert run(argv) == 0
    first = trace.read_bytes()
    manifest_first = (tmp_path / "t.csv.manifest.json").read_bytes()
    assert run(argv) == 0
    assert trace.read_bytes() == first
    assert (tmp_path / "t.csv.manifest.json").read_bytes() == manifest_first


def test_adapt_run_stall_exit_three(tmp_path):
    ham = tmp_path / "zz.ham"
    ham.write_text("1.0 ZZ\n")
    pool = tmp_path / "tiny.pool"
    pool.write_text("YI\n")
    trace = tmp_path / "t.csv"
    code = run(["adapt", "run", "--ham", ham, "--pool", pool,
                "--eref", "-1.0", "--trace", trace])
    assert code == 3
    assert mcpools.read_trace_csv(trace).status == "gradient_stall"


def test_adapt_run_cap_exit_four(tmp_path):
    ham, pool = make_problem(tmp_path, seed=2)
    trace = tmp_path / "t.csv"
    code = run(["adapt", "run", "--ham", ham, "--pool", pool, "--fci",
                "--max-iters", 2, "--trace", trace])
    assert code == 4
    assert mcpools.read_trace_csv(trace).status == "iteration_cap"


def test_adapt_run_eref_and_fci_mutually_exclusive(tmp_path, capsys):
    ham, pool = make_problem(tmp_path, seed=0)
    code = run(["adapt", "run", "--ham", ham, "--pool", pool, "--fci",
                "--eref", "-1.0", "--trace", tmp_path / "t.csv"])
    assert code == 2


def test_adapt_run_reference_bitstring(tmp_path):
    ham, pool = make_problem(tmp_path, seed=0)
    trace = tmp_path / "t.csv"
    code = run(["adapt", "run", "--ham", ham, "--pool", pool, "--fci",
                "--reference", "1010", "--max-iters", 1, "--trace", trace])
    assert code in (0, 4)
    assert trace.exists()


def test_config_file_supplies_and_cli_overrides(tmp_path):
    ham, pool = make_problem(tmp_path, seed=0)
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        f"ham = {ham}\npool = {pool}\nfci = true\nmax-iters = 1\n"
        f"trace = {tmp_path / 'from_config.csv'}\n")
    assert run(["--config", cfg, "adapt", "run"]) == 4
    assert (tmp_path / "from_config.csv").exists()
    # CLI flag wins over the config value
    assert run(["--config", cfg, "adapt", "run",
                "--trace", tmp_path / "cli_wins.csv"]) == 4
    assert (tmp_path / "cli_wins.csv").exists()


def test_config_unknown_key_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("frobnicate = yes\n")
    code = run(["--config", cfg, "pool", "check", FIXTURES / "pool_n6_reference.pool"])
    assert code == 2
    assert "frobnicate" in capsys.readouterr().err


def test_usage_error_exit_two(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(["pool", "find", "--out", tmp_path / "x.pool"])  # missing --seed
    assert exc.value.code == 2


def test_scan_over_directory(tmp_path, monkeypatch):
    ham_dir = tmp_path / "hams"
    ham_dir.mkdir()
    for seed in (0, 1, 2):
        mcpools.save_hamiltonian(ham_dir / f"s{seed}.ham",
                                 mcpools.random_real_hamiltonian(4, 14, seed=seed))
    pool = tmp_path / "p.pool"
    mcpools.write_pool(pool, mcpools.random_mcp(4, seed=0))
    out = tmp_path / "scan.csv"
    assert run(["scan", "--ham-dir", ham_dir, "--pool", pool, "--fci",
                "--out", out]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "file,status,iterations,energy,error"
    assert len(lines) == 4
    assert [ln.split(",")[0] for ln in lines[1:]] == ["s0.ham", "s1.ham", "s2.ham"]

    # same rows regardless of the thread count
    monkeypatch.setenv("MCPOOLS_THREADS", "3")
    out2 = tmp_path / "scan2.csv"
    assert run(["scan", "--ham-dir", ham_dir, "--pool", pool, "--fci",
                "--out", out2]) == 0
    assert out2.read_text() == out.read_text()


def test_plot_renders_svg(tmp_path):
    ham, pool = make_problem(tmp_path, seed=0)
    trace = tmp_path / "t.csv"
    run(["adapt", "run", "--ham", ham, "--pool", pool, "--fci", "--trace", trace])
    out = tmp_path / "t.svg"
    assert run(["plot", trace, "--out", out]) == 0
    body = out.read_text()
    assert body.lstrip().startswith("<svg")
    assert "polyline" in body
    # byte-stable re-render
    first = out.read_bytes()
    assert run(["plot", trace, "--out", out]) == 0
    assert out.read_bytes() == first


def test_plot_empty_trace_errors(tmp_path, capsys):
    trace = tmp_path / "empty.csv"
    trace.write_text("iter,op,max_grad,energy,error,params,evals\n"
                     "# status=gradient_stall\n")
    code = run(["plot", trace, "--out", tmp_path / "x.svg"])
    assert code == 2
    assert "nothing to plot" in capsys.readouterr().err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["--version"])
    assert exc.value.code == 0
    assert mcpools.__version__ in capsys.readouterr().out
