"""Tensor-product space-time finite element spaces on the active mesh.

Spatial shape functions are Q_m Lagrange polynomials on the equispaced
lattice of each square element; because they are plain polynomials they
extend canonically beyond the element, which patch-jump stabilization and
inter-slab transfer rely on. The time factor on a slab (t0, t1] is the
scaled monomial basis tau^i with tau = (t - t0) / dt.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

SUPPORTED_ORDERS = (1, 2, 3)


@lru_cache(maxsize=None)
def _lagrange_coeffs(m: int, deriv: int) -> np.ndarray:
    """(m+1, m+1) monomial coefficients (ascending powers) of the deriv-th
    derivative of the 1D Lagrange basis on nodes j/m of [0, 1]."""
    nodes = np.arange(m + 1) / m
    vander = np.vander(nodes, m + 1, increasing=True)
    coeffs = np.linalg.inv(vander).T  # row l: coefficients of basis l
    for _ in range(deriv):
        coeffs = coeffs[:, 1:] * np.arange(1, coeffs.shape[1])
    return np.ascontiguousarray(coeffs)


def _eval_1d(m: int, xi: np.ndarray, deriv: int) -> np.ndarray:
    """Values of the m-th order 1D basis (or a derivative) at xi; valid for
    any real xi, inside the element or not."""
    coeffs = _lagrange_coeffs(m, deriv)
    if coeffs.shape[1] == 0:
        return np.zeros((xi.size, m + 1))
    powers = xi[:, None] ** np.arange(coeffs.shape[1])
    return powers @ coeffs.T


def eval_space_basis(m: int, box, points, deriv=(0, 0)) -> np.ndarray:
    """(npts, (m+1)^2) array of basis partial derivatives d^p_x d^q_y at
    arbitrary physical points; node order is lexicographic, x fastest."""
    if m not in SUPPORTED_ORDERS:
        raise ValueError(f"unsupported spatial order m={m}")
    x0, y0, x1, y1 = box
    pts = np.atleast_2d(points)
    hx, hy = x1 - x0, y1 - y0
    p, q = deriv
    bx = _eval_1d(m, (pts[:, 0] - x0) / hx, p) / hx**p
    by = _eval_1d(m, (pts[:, 1] - y0) / hy, q) / hy**q
    return (by[:, :, None] * bx[:, None, :]).reshape(pts.shape[0], (m + 1) ** 2)


def eval_space_gradient(m: int, box, points) -> np.ndarray:
    """(npts, ndof, 2) gradients of all basis functions."""
    return np.stack(
        [eval_space_basis(m, box, points, (1, 0)), eval_space_basis(m, box, points, (0, 1))],
        axis=-1,
    )


def directional_derivative(m: int, box, points, direction, order: int) -> np.ndarray:
    """(npts, ndof) array of order-th derivatives along a unit direction,
    which may vary per point (direction shape (2,) or (npts, 2))."""
    pts = np.atleast_2d(points)
    d = np.broadcast_to(np.atleast_2d(direction), (pts.shape[0], 2))
    out = np.zeros((pts.shape[0], (m + 1) ** 2))
    for j in range(order + 1):
        binom = np.math.comb(order, j) if hasattr(np.math, "comb") else __import__("math").comb(order, j)
        part = eval_space_basis(m, box, pts, (j, order - j))
        out += binom * (d[:, 0] ** j * d[:, 1] ** (order - j))[:, None] * part
    return out


def eval_time_basis(k: int, slab, t, deriv: int = 0):
    """Row(s) of the scaled monomials tau^0..tau^k or their first time
    derivative at times t inside the closed slab."""
    t0, t1 = slab
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(tt < t0 - 1e-12 * (t1 - t0)) or np.any(tt > t1 + 1e-12 * (t1 - t0)):
        raise ValueError(f"time {t} outside slab [{t0}, {t1}]")
    dt = t1 - t0
    tau = (tt - t0) / dt
    powers = np.arange(k + 1)
    if deriv == 0:
        vals = tau[:, None] ** powers[None, :]
    elif deriv == 1:
        vals = np.zeros((tau.size, k + 1))
        if k >= 1:
            vals[:, 1:] = powers[1:] * tau[:, None] ** (powers[1:] - 1) / dt
    else:
        raise ValueError("only time-derivative orders 0 and 1 are used")
    return vals if np.ndim(t) else vals[0]


class SlabSpace:
    """DOF bookkeeping for one space-time slab.

    Spatial DOFs are the distinct Q_m lattice nodes of the active elements,
    numbered lexicographically by node coordinate (x fastest); the full
    space has (k+1) copies, one per time monomial, laid out block-wise
    (all spatial DOFs of tau^0, then tau^1, ...).
    """

    def __init__(self, mesh, active_elements, m: int, k: int, slab):
        if m not in SUPPORTED_ORDERS:
            raise ValueError(f"unsupported spatial order m={m}")
        active = np.sort(np.asarray(active_elements, dtype=int))
        if active.size == 0:
            raise ValueError("empty active mesh")
        self.mesh = mesh
        self.active = active
        self.m = m
        self.k = k
        self.slab = (float(slab[0]), float(slab[1]))

        nodes_per_side = m + 1
        i = active % mesh.nx
        j = active // mesh.nx
        a, b = np.meshgrid(np.arange(nodes_per_side), np.arange(nodes_per_side), indexing="xy")
        lx = (i[:, None] * m + a.ravel()[None, :]).ravel()
        ly = (j[:, None] * m + b.ravel()[None, :]).ravel()
        width = mesh.nx * m + 1
        keys = ly * width + lx
        uniq, inverse = np.unique(keys, return_inverse=True)
        self.n_space = uniq.size
        self.elem_dofs = inverse.reshape(active.size, nodes_per_side**2)
        x0, y0, _, _ = mesh.bbox
        step = mesh.h / m
        self.node_coords = np.column_stack([x0 + (uniq % width) * step, y0 + (uniq // width) * step])
        self._active_pos = np.full(mesh.n_elements, -1, dtype=int)
        self._active_pos[active] = np.arange(active.size)

    @property
    def n_total(self) -> int:
        return (self.k + 1) * self.n_space

    @property
    def dt(self) -> float:
        return self.slab[1] - self.slab[0]

    def active_position(self, element: int) -> int:
        """Index of an element within the active list, or -1."""
        return int(self._active_pos[element])

    def contains(self, element: int) -> bool:
        return self._active_pos[element] >= 0

    def interpolate_spatial(self, g) -> np.ndarray:
        """Nodal interpolant coefficients of a callable g(points)->values."""
        return np.asarray(g(self.node_coords), dtype=float)


def build_dof_map(mesh, active_elements, m: int, k: int, slab=(0.0, 1.0)) -> SlabSpace:
    return SlabSpace(mesh, active_elements, m, k, slab)


def evaluate_solution(space: SlabSpace, coeffs, t, points, gradient: bool = False):
    """Evaluate sum_i sum_l c[i,l] phi_l(x) tau^i at (t, points).

    Points must lie in active elements; raises if any is not locatable.
    """
    pts = np.atleast_2d(points)
    coeffs = np.asarray(coeffs, dtype=float).reshape(space.k + 1, space.n_space)
    tvals = eval_time_basis(space.k, space.slab, float(t))
    spatial = coeffs.T @ tvals  # combined spatial coefficients at time t
    elems = space.mesh.locate(pts)
    pos = space._active_pos[elems]
    if np.any(pos < 0):
        bad = pts[pos < 0][0]
        raise ValueError(f"point {bad} not inside the active mesh")
    out = np.zeros(pts.shape[0])
    grad = np.zeros((pts.shape[0], 2)) if gradient else None
    for e in np.unique(elems):
        sel = elems == e
        box = space.mesh.element_box(e)
        dofs = space.elem_dofs[space._active_pos[e]]
        vals = eval_space_basis(space.m, box, pts[sel])
        out[sel] = vals @ spatial[dofs]
        if gradient:
            g = eval_space_gradient(space.m, box, pts[sel])
            grad[sel] = np.einsum("pdc,d->pc", g[:, :, :], spatial[dofs])
    if gradient:
        return out, grad
    return out
