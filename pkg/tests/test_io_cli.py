import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from projrom import cli, harness, io
from projrom.errors import ConfigError
from projrom.solvers import GaussNewtonSettings


# --- PSNAP1 -------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 7), st.integers(1, 5))))
def test_psnap_round_trip_is_exact(tmp_path_factory, M):
    path = tmp_path_factory.mktemp("p") / "m.psnap"
    io.write_matrix(path, M)
    back = io.read_matrix(path)
    assert back.shape == M.shape
    assert back.tobytes() == np.ascontiguousarray(M).tobytes()  # bitwise, NaN payloads included


def test_psnap_layout(tmp_path):
    M = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    io.write_matrix(tmp_path / "m.psnap", M)
    raw = (tmp_path / "m.psnap").read_bytes()
    assert raw[:8] == b"PSNAP1\x00\x00"
    assert struct.unpack("<QQ", raw[8:24]) == (2, 3)
    assert struct.unpack("<6d", raw[24:]) == (1.0, 4.0, 2.0, 5.0, 3.0, 6.0)


def test_vector_is_one_column(tmp_path):
    io.write_matrix(tmp_path / "v.psnap", np.arange(4.0))
    assert io.read_matrix(tmp_path / "v.psnap").shape == (4, 1)
    np.testing.assert_array_equal(io.read_vector(tmp_path / "v.psnap"), np.arange(4.0))


def test_psnap_format_errors(tmp_path):
    bad = tmp_path / "bad.psnap"
    bad.write_bytes(b"NOTPSNAP" + struct.pack("<QQ", 1, 1) + struct.pack("<d", 1.0))
    with pytest.raises(io.FormatError, match="not a PSNAP1"):
        io.read_matrix(bad)
    bad.write_bytes(b"PSNAP1\x00")
    with pytest.raises(io.FormatError, match="truncated"):
        io.read_matrix(bad)
    bad.write_bytes(b"PSNAP1\x00\x00" + struct.pack("<QQ", 2, 2) + struct.pack("<3d", 1, 2, 3))
    with pytest.raises(io.FormatError, match="expected 2x2"):
        io.read_matrix(bad)
    io.write_matrix(bad, np.ones((2, 2)))
    with pytest.raises(io.FormatError, match="single column"):
        io.read_vector(bad)


def test_indices_and_report_round_trip(tmp_path):
    io.write_indices(tmp_path / "i.txt", [0, 5, 9])
    np.testing.assert_array_equal(io.read_indices(tmp_path / "i.txt"), [0, 5, 9])
    row = dict.fromkeys(io.REPORT_COLUMNS, 1)
    row["method"] = "lspg"
    io.write_report(tmp_path / "r.csv", [row])
    (back,) = io.read_report(tmp_path / "r.csv")
    assert list(back) == list(io.REPORT_COLUMNS) and back["method"] == "lspg"


# --- harness helpers ----------------------------------------------------------


def test_compare_states_examples():
    assert harness.compare_states([1.0, 2.0], [1.0, 2.0]) == (0.0, 0.0)
    l2, linf = harness.compare_states([1.0, 1.0], [1.0, 0.0])
    assert l2 == pytest.approx(1 / np.sqrt(2), rel=1e-15) and linf == 1.0
    with pytest.raises(ConfigError):
        harness.compare_states([1.0], [1.0, 2.0])


def test_geometric_mean():
    assert harness.geometric_mean([2.0, 8.0]) == pytest.approx(4.0, rel=1e-15)
    assert harness.geometric_mean([3.5]) == pytest.approx(3.5, rel=1e-15)
    with pytest.raises(ValueError):
        harness.geometric_mean([1.0, 0.0])


@pytest.mark.parametrize(
    "method,stepper",
    [("galerkin", "bdf1"), ("galerkin", "bdf2"), ("lspg", "rk4"), ("lspg", "forward-euler")],
)
def test_method_stepper_mismatch(method, stepper):
    with pytest.raises(ConfigError, match="requires"):
        harness.RunConfig(method=method, stepper=stepper)


@pytest.mark.parametrize(
    "changes",
    [dict(method="pod"), dict(stepper="euler"), dict(dt=0.0), dict(num_steps=0), dict(jacobian="banded"),
     dict(weighting="collocation"), dict(weighting="collocation:1.5"), dict(weighting="identity:0.5"),
     dict(weighting="random:0.1")],
)
def test_config_validation(changes):
    with pytest.raises(ConfigError):
        harness.RunConfig(**changes)


def test_parse_weighting():
    assert harness.parse_weighting("scaled-collocation:0.25") == ("scaled-collocation", 0.25)
    assert harness.parse_weighting("collocation", 0.5) == ("collocation", 0.5)
    assert harness.parse_weighting("diagonal") == ("diagonal", None)


def test_single_step_rom_has_two_columns():
    config = harness.RunConfig(num_cells=16, method="galerkin", stepper="rk4", dt=1e-3, num_steps=1)
    run = harness.run_rom(config, np.eye(16)[:, :3])
    assert run.trajectory.shape == (3, 2) and run.steps == 1


@pytest.mark.parametrize("method,stepper", [("galerkin", "rk4"), ("lspg", "bdf1"), ("lspg", "bdf2")])
def test_identity_basis_matches_fom(method, stepper):
    tight = GaussNewtonSettings(1e-15, 1e-12)
    config = harness.RunConfig(num_cells=32, method=method, stepper=stepper, dt=0.01, num_steps=20, settings=tight)
    fom = harness.run_fom(config.with_(method="fom"))
    rom = harness.run_rom(config, np.eye(32))
    l2, _ = harness.compare_states(fom.final_state, rom.final_state)
    assert l2 < 1e-10


def test_bench_single_replica():
    config = harness.RunConfig(num_cells=16, method="galerkin", stepper="rk4", dt=1e-3, num_steps=3)
    row = harness.bench(config, np.eye(16)[:, :4], replicas=1)
    assert row["replicas"] == 1 and row["ms_per_iteration"] > 0
    with pytest.raises(ConfigError):
        harness.bench(config, np.eye(16)[:, :4], replicas=0)


# --- command line -------------------------------------------------------------


SMALL = ["--num-cells", "32", "--dt", "0.01", "--num-steps", "20"]


def test_cli_pipeline(tmp_path, capsys):
    assert cli.main(["fom", *SMALL, "--stepper", "bdf1", "--out-dir", str(tmp_path / "fom")]) == 0
    S = io.read_matrix(tmp_path / "fom" / "snapshots.psnap")
    assert S.shape == (32, 21)
    assert cli.main(["pod", "--snapshots", str(tmp_path / "fom" / "snapshots.psnap"), "--rom-size", "4",
                     "--out-dir", str(tmp_path / "pod")]) == 0
    assert io.read_matrix(tmp_path / "pod" / "basis.psnap").shape == (32, 4)
    rc = cli.main(["rom", *SMALL, "--stepper", "bdf1", "--method", "lspg", "--basis", str(tmp_path / "pod" / "basis.psnap"),
                   "--weighting", "collocation:0.5", "--seed", "3",
                   "--fom-final", str(tmp_path / "fom" / "final_state.psnap"), "--out-dir", str(tmp_path / "rom")])
    assert rc == 0
    (row,) = io.read_report(tmp_path / "rom" / "report.csv")
    assert row["method"] == "lspg" and row["z"] == "16" and float(row["rel_l2"]) < 1e-2
    idx = io.read_indices(tmp_path / "rom" / "sample_indices.txt")
    assert len(idx) == 16 and idx[0] == 0 and idx[-1] == 31
    assert io.read_matrix(tmp_path / "rom" / "reduced_trajectory.psnap").shape == (4, 21)
    capsys.readouterr()
    assert cli.main(["compare", "--fom", str(tmp_path / "fom" / "final_state.psnap"),
                     "--rom", str(tmp_path / "rom" / "final_state.psnap")]) == 0
    assert "rel_l2=" in capsys.readouterr().out
    assert cli.main(["bench", *SMALL, "--stepper", "bdf1", "--method", "lspg", "--replicas", "2",
                     "--basis", str(tmp_path / "pod" / "basis.psnap"), "--out-dir", str(tmp_path / "bench")]) == 0
    (row,) = io.read_report(tmp_path / "bench" / "bench.csv")
    assert float(row["ms_per_iteration"]) > 0


def test_cli_exit_codes(tmp_path, capsys):
    basis = tmp_path / "basis.psnap"
    io.write_matrix(basis, np.eye(32)[:, :2])
    # galerkin with an implicit stepper
    assert cli.main(["rom", *SMALL, "--stepper", "bdf1", "--method", "galerkin", "--basis", str(basis)]) == 2
    assert "error[config]" in capsys.readouterr().err
    assert cli.main(["rom", *SMALL, "--method", "galerkin", "--basis", str(basis), "--rom-size", "5"]) == 2
    # missing file
    assert cli.main(["compare", "--fom", str(tmp_path / "nope.psnap"), "--rom", str(basis)]) == 4
    assert "error[io]" in capsys.readouterr().err
    # rank-deficient snapshots
    S = np.ones((32, 3))
    io.write_matrix(tmp_path / "s.psnap", S)
    assert cli.main(["pod", "--snapshots", str(tmp_path / "s.psnap"), "--rom-size", "2",
                     "--out-dir", str(tmp_path)]) == 3
    assert "error[numerical]" in capsys.readouterr().err
    with pytest.raises(SystemExit):
        cli.main(["rom", "--method", "bogus"])
