"""Basis evaluation, system assembly, solving, and model round-trips."""

import numpy as np
import pytest

import arbfscaffold as ax
from arbfscaffold import samples
from arbfscaffold.errors import (
    DuplicateCenterError,
    SingularMatrixError,
    ValidationError,
)
from arbfscaffold.mesh import build_segments
from arbfscaffold.rbf import (
    Basis,
    assemble_matrix,
    eval_basis,
    fit,
    fit_mesh,
    fit_with_report,
    load_model,
    save_model,
    solve_weights,
)

ALL_MESHES = {
    "tri": samples.triangle_mesh,
    "tet": samples.unit_tet_mesh,
    "hex": samples.unit_hex_mesh,
    "block": samples.hex_block_mesh,
    "icosa": samples.icosahedron_tet_mesh,
}


# --- basis functions ------------------------------------------------------


def test_basis_known_values():
    assert eval_basis(Basis("gaussian", 2.0), 0.5) == pytest.approx(np.exp(-1.0))
    assert eval_basis(Basis("mq", 0.1), 0.0) == pytest.approx(0.1)
    assert eval_basis(Basis("imq", 0.1), 0.0) == pytest.approx(10.0)
    assert eval_basis(Basis("mq", 3.0), 4.0) == pytest.approx(5.0)
    assert eval_basis(Basis("imq", 3.0), 4.0) == pytest.approx(0.2)
    e = float(np.e)
    assert eval_basis(Basis("tps", 0.1), e) == pytest.approx(e * e)


def test_tps_zero_by_convention():
    # r^2 log r has a removable singularity at 0; the kernel takes the limit
    assert eval_basis(Basis("tps", 0.1), 0.0) == 0.0
    r = np.array([0.0, 1.0, 2.0])
    vals = eval_basis(Basis("tps", 0.1), r)
    assert vals[0] == 0.0 and vals[1] == 0.0
    assert vals[2] == pytest.approx(4.0 * np.log(2.0))


def test_basis_array_shapes():
    r = np.linspace(0, 3, 7).reshape(7, 1)
    out = eval_basis(Basis("gaussian", 1.0), r)
    assert out.shape == (7, 1)
    assert isinstance(eval_basis(Basis("imq", 1.0), 2.0), float)


def test_basis_monotonicity():
    r = np.linspace(0.0, 5.0, 50)
    g = eval_basis(Basis("gaussian", 0.7), r)
    i = eval_basis(Basis("imq", 0.7), r)
    m = eval_basis(Basis("mq", 0.7), r)
    assert np.all(np.diff(g) < 0) and np.all(np.diff(i) < 0)
    assert np.all(np.diff(m) > 0)


def test_basis_validation():
    with pytest.raises(ValidationError):
        Basis("gaussian", 0.0)
    with pytest.raises(ValidationError):
        Basis("cubic", 1.0)
    Basis("tps", 0.0)  # shape parameter unused for tps


# --- assembly -------------------------------------------------------------


def test_matrix_is_exactly_symmetric(icosa_mesh):
    centers = ax.assemble_center_set(icosa_mesh, "anisotropic")
    a, rhs = assemble_matrix(centers, Basis("imq", 0.1))
    assert np.array_equal(a, a.T)
    assert set(np.unique(rhs)) == {-1.0, 1.0}


def test_matrix_diagonal_values(tet_mesh):
    centers = ax.assemble_center_set(tet_mesh, "isotropic")
    n = len(centers)
    for kind, c, expect in [("gaussian", 0.5, 1.0), ("mq", 0.1, 0.1),
                            ("imq", 0.1, 10.0), ("tps", 0.1, 0.0)]:
        a, _ = assemble_matrix(centers, Basis(kind, c))
        assert np.allclose(np.diag(a), expect)


def test_lambda_shifts_diagonal(tet_mesh):
    centers = ax.assemble_center_set(tet_mesh, "isotropic")
    a0, _ = assemble_matrix(centers, Basis("imq", 0.1), 0.0)
    a1, _ = assemble_matrix(centers, Basis("imq", 0.1), 1e-6)
    assert np.allclose(a1 - a0, 1e-6 * np.eye(len(centers)))


def test_duplicate_point_centers_raise():
    from arbfscaffold.mesh import NodalValue
    centers = [NodalValue(np.zeros(3), 1.0), NodalValue(np.zeros(3), -1.0)]
    with pytest.raises(DuplicateCenterError):
        assemble_matrix(centers, Basis("imq", 0.1))


def test_segments_sharing_an_endpoint_are_fine():
    # adjacent-cell segments meet at shared face centers; zero distance is
    # legitimate there and must not be flagged as a duplicate center
    verts = np.array([[0.0, 0, 0], [1.0, 0, 0], [0.0, 1, 0],
                      [0.0, 0, 1], [1.0, 1, 1]])
    mesh = ax.make_mesh("tet", verts, [[0, 1, 2, 3], [0, 2, 1, 4]])
    model, report = fit_mesh(mesh, Basis("imq", 0.1), "anisotropic")
    assert report.residual_inf < 1e-8


# --- solving --------------------------------------------------------------


def test_solve_matches_reference(rng):
    a = rng.standard_normal((40, 40))
    a = a @ a.T + 40 * np.eye(40)  # SPD, well conditioned
    rhs = rng.standard_normal(40)
    w = solve_weights(a, rhs)
    assert np.allclose(a @ w, rhs, atol=1e-10)


def test_singular_matrix_raises_with_hint():
    a = np.ones((4, 4))
    with pytest.raises(SingularMatrixError, match="lambda"):
        solve_weights(a, np.ones(4))


def test_hex_tps_anisotropic_is_singular(hex_mesh):
    # the cube's symmetry makes the tps system exactly rank deficient
    with pytest.raises(SingularMatrixError):
        fit_mesh(hex_mesh, Basis("tps", 0.1), "anisotropic")


def test_hex_tps_recovers_with_lambda(hex_mesh):
    model, report = fit_mesh(hex_mesh, Basis("tps", 0.1), "anisotropic", lam=1e-10)
    assert report.residual_inf < 1e-8


# --- fitted models ----------------------------------------------------------


@pytest.mark.parametrize("name", sorted(ALL_MESHES))
@pytest.mark.parametrize("mode", ["isotropic", "anisotropic"])
def test_nodal_exactness(name, mode):
    mesh = ALL_MESHES[name]()
    model = fit_mesh(mesh, Basis("imq", 0.1), mode)[0]
    for c in model.centers:
        if hasattr(c, "position"):
            assert model.evaluate(c.position) == pytest.approx(c.value, abs=1e-6)


def test_isotropic_point_set_mode_equivalence(tet_mesh):
    # same point-only center list assembled under both mode labels
    centers = ax.assemble_center_set(tet_mesh, "isotropic")
    assert len(centers) == 15
    a_iso, r_iso = assemble_matrix(centers, Basis("imq", 0.1))
    a_aniso, r_aniso = assemble_matrix(list(centers), Basis("imq", 0.1))
    assert np.array_equal(a_iso, a_aniso)
    w_iso = fit(centers, Basis("imq", 0.1), "isotropic").weights
    w_aniso = fit(centers, Basis("imq", 0.1), "anisotropic").weights
    assert np.array_equal(w_iso, w_aniso)


def test_regular_tet_sign_structure(regular_tet):
    model = fit_mesh(regular_tet, Basis("imq", 0.1), "anisotropic")[0]
    mids = np.array([0.5 * (s.a + s.b) for s in build_segments(regular_tet)])
    vals = model.evaluate_many(mids)
    assert np.allclose(vals, -0.7579543325824778, atol=1e-9)
    assert np.all(model.evaluate_many(regular_tet.vertices) > 0)


def test_corner_tet_diagonal_channel(tet_mesh):
    # On the right-angle corner tet all four segments meet at the centroid,
    # so their pairwise distances vanish and the short diagonal-face segment
    # takes a positive weight: the field stays positive along that channel.
    # Rederived independently by dense sampling + a reference linear solve.
    model = fit_mesh(tet_mesh, Basis("imq", 0.1), "anisotropic")[0]
    mids = np.array([0.5 * (s.a + s.b) for s in build_segments(tet_mesh)])
    vals = model.evaluate_many(mids)
    assert np.allclose(vals[:3], -4.153083975028432, atol=1e-9)
    assert vals[3] == pytest.approx(4.083241112880295, abs=1e-9)


def test_evaluate_many_matches_scalar(block_mesh, rng):
    model = fit_mesh(block_mesh, Basis("imq", 0.1), "anisotropic")[0]
    pts = rng.uniform(0, 1, size=(30, 3))
    many = model.evaluate_many(pts)
    assert np.array_equal(many, [model.evaluate(p) for p in pts])


def test_fit_report_fields(block_mesh):
    model, report = fit_mesh(block_mesh, Basis("imq", 0.1), "anisotropic")
    assert report.n_centers == 129
    assert report.condition_estimate >= 1.0
    assert report.residual_inf < 1e-10


def test_model_bbox_covers_segment_endpoints(tet_mesh):
    model = fit_mesh(tet_mesh, Basis("imq", 0.1), "anisotropic")[0]
    lo, hi = model.bbox()
    assert np.all(lo <= 0.0) and np.all(hi >= 1.0)


# --- persistence ------------------------------------------------------------


@pytest.mark.parametrize("mode", ["isotropic", "anisotropic"])
def test_model_round_trip_is_exact(tmp_path, mode, icosa_mesh, rng):
    model = fit_mesh(icosa_mesh, Basis("mq", 0.25), mode, lam=1e-12)[0]
    path = str(tmp_path / "m.arbf")
    save_model(model, path)
    back = load_model(path)
    assert back.basis == model.basis
    assert back.mode == model.mode
    assert back.lam == model.lam
    assert np.array_equal(back.weights, model.weights)
    pts = rng.uniform(-1, 1, size=(20, 3))
    assert np.array_equal(back.evaluate_many(pts), model.evaluate_many(pts))


def test_model_file_is_ascii_with_magic(tmp_path, tet_mesh):
    model = fit_mesh(tet_mesh, Basis("imq", 0.1), "anisotropic")[0]
    path = str(tmp_path / "m.arbf")
    save_model(model, path)
    lines = open(path, encoding="ascii").read().splitlines()
    assert lines[0] == "ARBF1"
    assert lines[1].startswith("basis imq")
    assert lines[2].startswith("lambda ")
    assert lines[3] == "14"
