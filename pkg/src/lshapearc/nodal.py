"""Overflow-safe evaluation of the nodal polynomial and Lebesgue function.

All magnitude arithmetic lives in natural-log space: a "log magnitude"
is a plain float holding log|x|, with -inf standing for magnitude zero.
The Lebesgue sum exponentiates per-term differences, which stay O(1)
even when the product itself under- or overflows.
"""

from dataclasses import dataclass

import numpy as np

from .conformal import boundary_point
from .families import LevelNodes, NodeFamily, build_level_nodes, build_raw, k1_k2_locate

# cap on rows*columns of any pairwise-distance block held in memory
_CHUNK_CELLS = 1 << 22


def _points_of(nodes) -> np.ndarray:
    if isinstance(nodes, np.ndarray):
        return nodes
    return nodes.points


def log_abs_omega(nodes, z):
    """log of |product of (z - node_k)|; -inf iff z hits a node.

    `nodes` may be a NodeFamily, LevelNodes, or a plain complex array.
    Scalar z returns a float; an array of z returns an array, evaluated
    in chunks to bound memory.
    """
    pts = _points_of(nodes)
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        with np.errstate(divide="ignore"):
            return float(np.sum(np.log(np.abs(z - pts))))
    out = np.empty(z.shape[0])
    chunk = max(1, _CHUNK_CELLS // max(1, len(pts)))
    with np.errstate(divide="ignore"):
        for i in range(0, len(z), chunk):
            block = z[i : i + chunk]
            out[i : i + chunk] = np.log(np.abs(block[:, None] - pts[None, :])).sum(axis=1)
    return out


@dataclass
class DerivativeTable:
    """Per-node log|omega'(node_k)| = sum over j != k of log|node_k - node_j|."""

    family: NodeFamily
    logs: np.ndarray


def build_derivative_table(f: NodeFamily) -> DerivativeTable:
    pts = f.points
    m = len(pts)
    logs = np.empty(m)
    chunk = max(1, _CHUNK_CELLS // m)
    for i0 in range(0, m, chunk):
        i1 = min(i0 + chunk, m)
        block = np.abs(pts[i0:i1, None] - pts[None, :])
        rows = np.arange(i0, i1)
        block[rows - i0, rows] = 1.0  # skip the j == k factor
        if np.any(block == 0.0):
            r, c = np.argwhere(block == 0.0)[0]
            raise ValueError(f"duplicate nodes at indices {i0 + r} and {c}")
        logs[i0:i1] = np.log(block).sum(axis=1)
    return DerivativeTable(family=f, logs=logs)


def lebesgue_function(f: NodeFamily, table: DerivativeTable, z: complex) -> float:
    """Sum of canonical Lagrange basis magnitudes at z.

    Exactly 1 when z is a node (the matching basis element is 1 there
    and every other one vanishes with the nodal polynomial).
    """
    pts = f.points
    with np.errstate(divide="ignore"):
        ld = np.log(np.abs(z - pts))
    if np.any(np.isneginf(ld)):
        return 1.0
    s = ld.sum()
    return float(np.exp(s - ld - table.logs).sum())


def lebesgue_function_grid(f: NodeFamily, table: DerivativeTable, zs: np.ndarray) -> np.ndarray:
    """Vectorized Lebesgue function over an array of evaluation points."""
    pts = f.points
    logs = table.logs
    zs = np.asarray(zs, dtype=complex)
    out = np.empty(len(zs))
    chunk = max(1, _CHUNK_CELLS // max(1, len(pts)))
    for i0 in range(0, len(zs), chunk):
        block = zs[i0 : i0 + chunk]
        d = np.abs(block[:, None] - pts[None, :])
        hit = (d == 0.0).any(axis=1)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ld = np.log(d)
            s = ld.sum(axis=1)
            lam = np.exp(s[:, None] - ld - logs[None, :]).sum(axis=1)
        lam[hit] = 1.0
        out[i0 : i0 + chunk] = lam
    return out


def asymptotic_omega_estimate(
    n: int,
    t: float,
    convention: str = "one_over_n",
    raw: NodeFamily = None,
    level: LevelNodes = None,
) -> float:
    """Four-factor surrogate for |omega_n| on the arc.

    At z = boundary_point(t) the nodal magnitude is comparable to
    |(z - z_k1)(z - z_k2)| / |(z - z*_k1)(z - z*_k2)| where k1, k2 index
    the nearest nodes on the two sheets and z* are their level-curve
    counterparts.  Symmetric in t by conjugation.
    """
    ta = abs(t)
    if raw is None:
        raw = build_raw(n)
    if level is None:
        level = build_level_nodes(n, convention)
    k1, k2 = k1_k2_locate(n, ta)
    z = boundary_point(ta)
    num = abs((z - raw.points[k1]) * (z - raw.points[k2]))
    den = abs((z - level.points[k1]) * (z - level.points[k2]))
    return num / den
