import numpy as np
import pytest

from stcutfem.mesh import BackgroundMesh, MeshConfigError, build_mesh

UNIT = (0.0, 0.0, 1.0, 1.0)


def interior_face_count(nx, ny):
    return nx * (ny - 1) + ny * (nx - 1)


def test_counts_2x2():
    m = build_mesh(UNIT, 2, 2)
    assert m.n_elements == 4
    assert len(m.interior_faces) == 4


def test_counts_1x1():
    m = build_mesh(UNIT, 1, 1)
    assert m.n_elements == 1
    assert len(m.interior_faces) == 0


def test_counts_20x20():
    m = build_mesh(UNIT, 20, 20)
    assert m.h == pytest.approx(0.05)
    assert len(m.interior_faces) == interior_face_count(20, 20)


def test_nonsquare_elements_rejected():
    with pytest.raises(MeshConfigError):
        build_mesh(UNIT, 2, 3)
    with pytest.raises(MeshConfigError):
        build_mesh(UNIT, 0, 1)


def test_rectangular_box_square_elements_ok():
    m = build_mesh((0.0, 0.0, 2.0, 1.0), 4, 2)
    assert m.h == pytest.approx(0.5)
    assert len(m.interior_faces) == interior_face_count(4, 2)


def test_element_patch_middle_bottom_vertical_face():
    m = build_mesh(UNIT, 2, 2)
    # vertical face between elements 0 and 1
    fid = m.element_faces(0)[1]
    assert m.element_patch(fid) == (0, 1)


def test_element_patch_1x2():
    m = build_mesh((0.0, 0.0, 1.0, 2.0), 1, 2)
    (fid,) = m.interior_faces
    assert m.element_patch(fid) == (0, 1)


def test_patch_elements_differ_everywhere():
    m = build_mesh(UNIT, 4, 4)
    for fid in m.interior_faces:
        k1, k2 = m.element_patch(fid)
        assert k1 != k2


def test_boundary_face_patch_errors():
    m = build_mesh(UNIT, 2, 2)
    boundary = [f for f in range(m.n_faces) if f not in set(m.interior_faces)]
    with pytest.raises(ValueError):
        m.element_patch(boundary[0])


def test_area_sum_matches_bbox():
    m = build_mesh((0.3, -1.0, 1.3, 0.0), 8, 8)
    boxes = m.element_boxes()
    areas = (boxes[:, 2] - boxes[:, 0]) * (boxes[:, 3] - boxes[:, 1])
    assert areas.sum() == pytest.approx(1.0, rel=1e-13)


def test_face_element_maps_consistent():
    m = build_mesh((0.0, 0.0, 0.75, 1.0), 3, 4)
    for e in range(m.n_elements):
        for fid in m.element_faces(e):
            assert e in m.face_elements[fid]
    for fid in range(m.n_faces):
        for e in m.face_elements[fid]:
            if e >= 0:
                assert fid in m.element_faces(e)


def test_face_normals_axis_aligned_unit():
    m = build_mesh(UNIT, 3, 3)
    for fid in m.interior_faces:
        n = m.face_normal(fid)
        assert np.linalg.norm(n) == pytest.approx(1.0)
        assert sorted(np.abs(n)) == pytest.approx([0.0, 1.0])


def test_face_segments_have_length_h():
    m = build_mesh(UNIT, 5, 5)
    for fid in (0, m.n_vertical_faces, int(m.interior_faces[7])):
        p0, p1 = m.face_segment(fid)
        assert np.linalg.norm(p1 - p0) == pytest.approx(m.h)


def test_normal_orientation_k1_to_k2():
    m = build_mesh(UNIT, 2, 2)
    for fid in m.interior_faces:
        k1, k2 = m.element_patch(fid)
        c1 = np.mean(np.array(m.element_box(k1)).reshape(2, 2), axis=0)
        c2 = np.mean(np.array(m.element_box(k2)).reshape(2, 2), axis=0)
        assert np.dot(m.face_normal(fid), c2 - c1) > 0


def test_locate():
    m = build_mesh(UNIT, 4, 4)
    pts = np.array([[0.1, 0.1], [0.9, 0.1], [0.1, 0.9], [0.6, 0.6]])
    assert list(m.locate(pts)) == [0, 3, 12, 10]


def test_neighbors_sorted():
    m = build_mesh(UNIT, 3, 3)
    assert m.neighbors(4) == [1, 3, 5, 7]
    assert m.neighbors(0) == [1, 3]
