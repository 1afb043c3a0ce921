"""Uniform Cartesian quadrilateral background mesh with face topology.

Element and face ids are lexicographic with x varying fastest; all
elements are squares of edge length h. The mesh is immutable after
construction and safe to share.
"""

from __future__ import annotations

import numpy as np


class MeshConfigError(ValueError):
    """Raised when the requested mesh would not have square elements."""


class BackgroundMesh:
    """Uniform nx-by-ny grid of square elements covering an axis-aligned box.

    Face table layout: vertical faces (normal +x) come first, ordered
    x-fastest over (ix in 0..nx, iy in 0..ny-1), then horizontal faces
    (normal +y) over (ix in 0..nx-1, iy in 0..ny). Interior faces carry
    both neighbouring element ids; boundary faces carry -1 on the
    outside slot. The face normal points from element K1 to K2
    (left-to-right, bottom-to-top).
    """

    def __init__(self, bbox, nx: int, ny: int):
        x0, y0, x1, y1 = map(float, bbox)
        if nx < 1 or ny < 1:
            raise MeshConfigError(f"element counts must be >= 1, got {nx}x{ny}")
        hx = (x1 - x0) / nx
        hy = (y1 - y0) / ny
        if hx <= 0 or hy <= 0:
            raise MeshConfigError(f"degenerate bbox {bbox}")
        if abs(hx - hy) > 1e-12 * max(hx, hy):
            raise MeshConfigError(
                f"non-square elements: hx={hx}, hy={hy}; adjust bbox or nx/ny"
            )
        self.bbox = (x0, y0, x1, y1)
        self.nx = nx
        self.ny = ny
        self.h = hx
        self.n_elements = nx * ny
        self._build_faces()

    # -- topology ---------------------------------------------------------

    def _build_faces(self):
        nx, ny = self.nx, self.ny
        nv = (nx + 1) * ny
        nh = nx * (ny + 1)
        elems = np.full((nv + nh, 2), -1, dtype=int)
        axis = np.empty(nv + nh, dtype=int)
        axis[:nv] = 0
        axis[nv:] = 1
        ix, iy = np.meshgrid(np.arange(nx + 1), np.arange(ny), indexing="xy")
        ix, iy = ix.ravel(), iy.ravel()
        left = iy * nx + (ix - 1)
        right = iy * nx + ix
        elems[:nv, 0] = np.where(ix > 0, left, -1)
        elems[:nv, 1] = np.where(ix < nx, right, -1)
        jx, jy = np.meshgrid(np.arange(nx), np.arange(ny + 1), indexing="xy")
        jx, jy = jx.ravel(), jy.ravel()
        below = (jy - 1) * nx + jx
        above = jy * nx + jx
        elems[nv:, 0] = np.where(jy > 0, below, -1)
        elems[nv:, 1] = np.where(jy < ny, above, -1)
        self.n_vertical_faces = nv
        self.face_elements = elems
        self.face_axis = axis
        self.n_faces = nv + nh
        self.interior_faces = np.flatnonzero(np.all(elems >= 0, axis=1))

    def element_index(self, e: int):
        return e % self.nx, e // self.nx

    def element_box(self, e: int):
        x0, y0, _, _ = self.bbox
        i, j = self.element_index(e)
        return (x0 + i * self.h, y0 + j * self.h, x0 + (i + 1) * self.h, y0 + (j + 1) * self.h)

    def element_boxes(self, elements=None) -> np.ndarray:
        """(n, 4) array of (x0, y0, x1, y1) per element."""
        if elements is None:
            elements = np.arange(self.n_elements)
        elements = np.asarray(elements)
        x0, y0, _, _ = self.bbox
        i = elements % self.nx
        j = elements // self.nx
        return np.column_stack(
            [x0 + i * self.h, y0 + j * self.h, x0 + (i + 1) * self.h, y0 + (j + 1) * self.h]
        )

    def element_patch(self, face: int):
        """The two elements sharing an interior face."""
        k1, k2 = self.face_elements[face]
        if k1 < 0 or k2 < 0:
            raise ValueError(f"face {face} is a boundary face")
        return int(k1), int(k2)

    def face_normal(self, face: int) -> np.ndarray:
        return np.array([1.0, 0.0]) if self.face_axis[face] == 0 else np.array([0.0, 1.0])

    def face_segment(self, face: int):
        """Physical endpoints of the face segment."""
        x0, y0, _, _ = self.bbox
        nv = self.n_vertical_faces
        if face < nv:
            ix, iy = face % (self.nx + 1), face // (self.nx + 1)
            p0 = (x0 + ix * self.h, y0 + iy * self.h)
            p1 = (p0[0], p0[1] + self.h)
        else:
            f = face - nv
            jx, jy = f % self.nx, f // self.nx
            p0 = (x0 + jx * self.h, y0 + jy * self.h)
            p1 = (p0[0] + self.h, p0[1])
        return np.array(p0), np.array(p1)

    def element_faces(self, e: int):
        """Face ids (left, right, bottom, top) of element e."""
        i, j = self.element_index(e)
        nv = self.n_vertical_faces
        return (
            j * (self.nx + 1) + i,
            j * (self.nx + 1) + i + 1,
            nv + j * self.nx + i,
            nv + (j + 1) * self.nx + i,
        )

    def neighbors(self, e: int):
        """Face-adjacent element ids (only existing ones), ascending."""
        i, j = self.element_index(e)
        out = []
        if i > 0:
            out.append(e - 1)
        if i < self.nx - 1:
            out.append(e + 1)
        if j > 0:
            out.append(e - self.nx)
        if j < self.ny - 1:
            out.append(e + self.nx)
        return sorted(out)

    def locate(self, points: np.ndarray) -> np.ndarray:
        """Element id containing each point (clipped to the grid)."""
        pts = np.atleast_2d(points)
        x0, y0, _, _ = self.bbox
        i = np.clip(((pts[:, 0] - x0) / self.h).astype(int), 0, self.nx - 1)
        j = np.clip(((pts[:, 1] - y0) / self.h).astype(int), 0, self.ny - 1)
        return j * self.nx + i


def build_mesh(bbox, nx: int, ny: int) -> BackgroundMesh:
    """Construct the background mesh; errors if elements would not be square."""
    return BackgroundMesh(bbox, nx, ny)
