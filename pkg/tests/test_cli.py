"""Command line interface: exit codes, outputs, and determinism."""

import os

import numpy as np
import pytest

import arbfscaffold as ax
from arbfscaffold import samples
from arbfscaffold.cli import EXIT_INPUT, EXIT_NUMERIC, EXIT_OK, main


@pytest.fixture
def mesh_dir(tmp_path):
    return samples.write_sample_meshes(str(tmp_path / "meshes"))


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_fit_writes_model(mesh_dir, tmp_path, capsys):
    out = str(tmp_path / "m.arbf")
    rc = main(["fit", "--mesh", mesh_dir["tet1.node"], "--out", out])
    assert rc == EXIT_OK
    assert os.path.exists(out)
    stdout = capsys.readouterr().out
    assert "N=14" in stdout and "residual=" in stdout
    model = ax.load_model(out)
    assert model.basis.kind == "imq"


def test_fit_default_output_is_mesh_stem(mesh_dir, capsys):
    rc = main(["fit", "--mesh", mesh_dir["tri1.off"]])
    assert rc == EXIT_OK
    stem = os.path.splitext(mesh_dir["tri1.off"])[0]
    assert os.path.exists(stem + ".arbf")


def test_sample_then_iso(mesh_dir, tmp_path, capsys):
    model = str(tmp_path / "m.arbf")
    vol = str(tmp_path / "vol")
    assert main(["fit", "--mesh", mesh_dir["hex8.hexmesh"], "--out", model]) == EXIT_OK
    assert main(["sample", "--model", model, "--out", vol,
                 "--resolution", "24"]) == EXIT_OK
    assert os.path.exists(vol + ".vhdr") and os.path.exists(vol + ".raw")
    rc = main(["iso", "--volume", vol, "--iso=-0.1,0.1"])
    assert rc == EXIT_OK
    assert os.path.exists(vol + "_iso-0.1.obj")
    assert os.path.exists(vol + "_iso0.1.obj")


def test_pipeline_writes_everything(mesh_dir, tmp_path, capsys):
    out = str(tmp_path / "run")
    rc = main(["pipeline", "--mesh", mesh_dir["hex8.hexmesh"],
               "--resolution", "24", "--iso=-0.1,0.1", "--out", out])
    assert rc == EXIT_OK
    for suffix in (".arbf", ".vhdr", ".raw", "_iso-0.1.obj", "_iso0.1.obj"):
        assert os.path.exists(out + suffix), suffix
    stdout = capsys.readouterr().out
    assert "fraction" in stdout


def test_pipeline_is_byte_deterministic(mesh_dir, tmp_path):
    outs = []
    for tag in ("a", "b"):
        out = str(tmp_path / tag / "run")
        rc = main(["pipeline", "--mesh", mesh_dir["tet1.node"],
                   "--resolution", "16", "--iso", "0.0", "--out", out])
        assert rc == EXIT_OK
        outs.append(out)
    for suffix in (".arbf", ".vhdr", ".raw", "_iso0.obj"):
        assert read(outs[0] + suffix) == read(outs[1] + suffix), suffix


def test_out_of_range_iso_warns_but_succeeds(mesh_dir, tmp_path, capsys):
    out = str(tmp_path / "run")
    rc = main(["pipeline", "--mesh", mesh_dir["tet1.node"],
               "--resolution", "12", "--iso", "99", "--out", out])
    assert rc == EXIT_OK
    err = capsys.readouterr().err
    assert "empty" in err.lower()
    assert not os.path.exists(out + "_iso99.obj")


def test_tpms_subcommand(tmp_path):
    out = str(tmp_path / "gyroid")
    rc = main(["tpms", "--kind", "g", "--resolution", "24", "--iso", "0",
               "--out", out])
    assert rc == EXIT_OK
    assert os.path.exists(out + ".vhdr")
    assert os.path.exists(out + "_iso0.obj")


def test_perturb_subcommand(mesh_dir, capsys):
    src = mesh_dir["hex8.hexmesh"]
    rc = main(["perturb", "--mesh", src, "--seed", "7", "--magnitude", "0.2"])
    assert rc == EXIT_OK
    out = src.replace(".hexmesh", "_perturbed.hexmesh")
    assert os.path.exists(out)
    a = ax.load_mesh(src)
    b = ax.load_mesh(out)
    assert not np.array_equal(a.vertices, b.vertices)
    assert np.array_equal(a.cells, b.cells)


def test_perturb_is_deterministic(mesh_dir, tmp_path):
    outs = []
    for tag in ("a", "b"):
        out = str(tmp_path / f"{tag}.hexmesh")
        rc = main(["perturb", "--mesh", mesh_dir["hex1.hexmesh"],
                   "--seed", "9", "--out", out])
        assert rc == EXIT_OK
        outs.append(read(out))
    assert outs[0] == outs[1]


def test_missing_mesh_is_input_error(tmp_path, capsys):
    rc = main(["fit", "--mesh", str(tmp_path / "nope.off")])
    assert rc == EXIT_INPUT
    assert capsys.readouterr().err.strip()


def test_malformed_mesh_is_input_error(tmp_path, capsys):
    p = tmp_path / "bad.off"
    p.write_text("OFF\n3 1 0\nnot numbers here\n")
    rc = main(["fit", "--mesh", str(p)])
    assert rc == EXIT_INPUT
    assert "bad.off" in capsys.readouterr().err


def test_singular_system_is_numeric_error(mesh_dir, tmp_path, capsys):
    rc = main(["fit", "--mesh", mesh_dir["hex1.hexmesh"], "--basis", "tps",
               "--out", str(tmp_path / "m.arbf")])
    assert rc == EXIT_NUMERIC
    assert "lambda" in capsys.readouterr().err


def test_singular_system_recovers_with_lambda(mesh_dir, tmp_path):
    rc = main(["fit", "--mesh", mesh_dir["hex1.hexmesh"], "--basis", "tps",
               "--lambda", "1e-10", "--out", str(tmp_path / "m.arbf")])
    assert rc == EXIT_OK


def test_empty_iso_list_is_input_error(mesh_dir, tmp_path, capsys):
    rc = main(["pipeline", "--mesh", mesh_dir["tet1.node"], "--iso", ",",
               "--out", str(tmp_path / "x")])
    assert rc == EXIT_INPUT


def test_bad_arguments_exit_2(capsys):
    assert main(["frobnicate"]) == EXIT_INPUT
    assert main(["fit"]) == EXIT_INPUT  # --mesh is required


def test_mode_aliases(mesh_dir, tmp_path):
    for mode in ("iso", "isotropic"):
        out = str(tmp_path / f"{mode}.arbf")
        rc = main(["fit", "--mesh", mesh_dir["tet1.node"], "--mode", mode,
                   "--out", out])
        assert rc == EXIT_OK
        assert ax.load_model(out).mode == "isotropic"
