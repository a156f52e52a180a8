"""Interpolation node families on the L-shape arc.

The raw family maps equally spaced unit-circle angles through the
exterior map.  Because the map folds the circle onto the arc, two raw
nodes can land almost on top of each other; the adjusted family moves
each colliding pair apart symmetrically (preserving the pair's folded
average) so that all folded angles are separated by at least
2pi/(3(n+1)).
"""

from dataclasses import dataclass, field

import numpy as np

from .conformal import CORNER_ANGLE, LevelCurve, psi
from .fold import _profile, fold_closed_form, unfold

_CLASSIFY_TOL = 1e-12


def theta_grid(n: int) -> np.ndarray:
    """The n+1 base angles in (-pi, pi].

    Positive angles are 2k*pi/(n+1) for even n and (2k+1)*pi/(n+1) for
    odd n, k = 0..floor(n/2); the rest mirror to negative angles.  The
    odd offset keeps both +-pi out of the grid so the corner is never
    hit twice.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    m = n // 2
    k = np.arange(m + 1)
    if n % 2 == 0:
        pos = 2.0 * k * np.pi / (n + 1)
    else:
        pos = (2.0 * k + 1.0) * np.pi / (n + 1)
    th = np.empty(n + 1)
    th[: m + 1] = pos
    kk = np.arange(m + 1, n + 1)
    th[m + 1 :] = -th[2 * m + 1 - kk]
    return th


def mirror_index(n: int, k: int) -> int:
    """Index of the angle-negated partner of node k (k itself at angle 0)."""
    m = n // 2
    if n % 2 == 0 and k == 0:
        return 0
    return 2 * m + 1 - k


@dataclass
class NodeFamily:
    """A degree-n node set: circle angles, folded representatives, points.

    folded[k] lies in [-2pi/3, 2pi/3] and satisfies
    psi(e^{i*folded[k]}) = psi(e^{i*angles[k]}); points[k] is that value.
    adjusted_pairs lists (k, j) index pairs moved by the adjustment.
    """

    n: int
    kind: str
    angles: np.ndarray
    folded: np.ndarray
    points: np.ndarray
    adjusted_pairs: list = field(default_factory=list)


def _fold_angles(angles: np.ndarray) -> np.ndarray:
    """Folded representative of each circle angle."""
    folded = angles.copy()
    outer = np.abs(angles) > CORNER_ANGLE + _CLASSIFY_TOL
    if np.any(outer):
        folded[outer] = fold_closed_form(angles[outer])
    return folded


def build_raw(n: int) -> NodeFamily:
    """The unadjusted family at degree n."""
    th = theta_grid(n)
    return NodeFamily(
        n=n,
        kind="raw",
        angles=th,
        folded=_fold_angles(th),
        points=psi(np.exp(1j * th)),
    )


def _unfold_batch(targets: np.ndarray) -> np.ndarray:
    """Vectorized inverse fold: t in [2pi/3, pi] with fold(t) = target.

    Bisection on the strictly decreasing magnitude profile; 64 halvings
    of the initial interval reach machine resolution.
    """
    lo = np.full(targets.shape, CORNER_ANGLE)
    hi = np.full(targets.shape, np.pi)
    want = np.minimum(_profile(targets), _profile(CORNER_ANGLE))
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        above = _profile(mid) > want
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    return 0.5 * (lo + hi)


def build_adjusted(n: int) -> NodeFamily:
    """The separation-adjusted family at degree n.

    For every positive angle theta_k beyond the endpoint preimage, find
    the nearest grid angle theta_j inside [0, 2pi/3] to the fold value
    J(theta_k) (ties to the smaller index).  If they are closer than
    delta = 2pi/(3(n+1)), node k's folded angle is pushed to exactly
    delta away from theta_j on its own side, and theta_j is moved so the
    pair's folded average is preserved.  Mirrored to negative angles.
    """
    th = theta_grid(n).copy()
    folded = _fold_angles(th)
    m = n // 2
    delta = 2.0 * np.pi / (3.0 * (n + 1))
    k_corner = int(np.searchsorted(th[: m + 1], CORNER_ANGLE + _CLASSIFY_TOL, side="right")) - 1
    outer = np.arange(k_corner + 1, m + 1)
    pairs = []
    if outer.size:
        jk = folded[outer]
        # the inner grid is uniform, so the nearest index is a rounding
        # (exact halves resolved to the smaller index, matching argmin)
        if n % 2 == 0:
            x = (n + 1) * jk / (2.0 * np.pi)
        else:
            x = ((n + 1) * jk / np.pi - 1.0) / 2.0
        j = np.clip(np.ceil(x - 0.5).astype(int), 0, k_corner)
        hit = np.abs(jk - th[j]) < delta
        ks, js, jk = outer[hit], j[hit], jk[hit]
        if len(set(js.tolist())) != len(js):
            raise RuntimeError(f"cascading fold collision at n={n}")
        target = np.where(th[js] >= jk, th[js] - delta, th[js] + delta)
        if np.any(target < 0.0) or np.any(target > CORNER_ANGLE):
            raise RuntimeError(f"adjustment target leaves [0, 2pi/3] at n={n}")
        new_j = th[js] + jk - target  # folded pair averages preserved
        th[ks] = _unfold_batch(target)
        folded[ks] = target
        th[js] = new_j
        folded[js] = new_j
        pairs = [(int(a), int(b)) for a, b in zip(ks, js)]
        moved = np.concatenate([ks, js])
        mi = 2 * m + 1 - moved
        if n % 2 == 0:
            mi = np.where(moved == 0, 0, mi)
        th[mi] = -th[moved]
        folded[mi] = -folded[moved]
    fam = NodeFamily(
        n=n,
        kind="adjusted",
        angles=th,
        folded=folded,
        points=psi(np.exp(1j * th)),
        adjusted_pairs=pairs,
    )
    if pairs and separation_margin(fam) < 2.0 * np.pi / 3.0 - 1e-9 * (n + 1):
        raise RuntimeError(f"adjustment left a residual collision at n={n}")
    return fam


def separation_margin(f: NodeFamily) -> float:
    """(n+1) times the minimum pairwise folded-angle gap (inf for n=0)."""
    if f.n == 0:
        return np.inf
    s = np.sort(f.folded)
    return (f.n + 1) * float(np.min(np.diff(s)))


def _nearest_with_smaller_tie(x: float) -> int:
    # nearest integer to x, exact half-way ties resolved downward
    return int(np.ceil(x - 0.5))


def k1_k2_locate(n: int, t: float):
    """Indices of the grid angles nearest t on both sheets.

    k1 indexes the nearest base angle inside [0, 2pi/3]; k2 the nearest
    one in (2pi/3, pi], measured at the unfolded angle.  Closed-form
    rounding with boundary clamps; ties go to the smaller index.
    """
    if not 0.0 <= t <= CORNER_ANGLE + _CLASSIFY_TOL:
        raise ValueError("t must lie in [0, 2pi/3]")
    th = theta_grid(n)
    m = n // 2

    def locate(angle):
        if n % 2 == 0:
            x = (n + 1) * angle / (2.0 * np.pi)
        else:
            x = ((n + 1) * angle / np.pi - 1.0) / 2.0
        return _nearest_with_smaller_tie(x)

    k_corner = max(i for i in range(m + 1) if th[i] <= CORNER_ANGLE + _CLASSIFY_TOL)
    k1 = min(max(locate(t), 0), k_corner)
    if k_corner == m:
        raise ValueError(f"no grid angle beyond the endpoint preimage at n={n}")
    u = unfold(min(t, CORNER_ANGLE))
    k2 = min(max(locate(u), k_corner + 1), m)
    return k1, k2


@dataclass
class LevelNodes:
    """The raw angle grid mapped at level-curve radius rho_n."""

    n: int
    curve: LevelCurve
    points: np.ndarray


def build_level_nodes(n: int, convention: str = "one_over_n_plus_1") -> LevelNodes:
    curve = LevelCurve(n, convention)
    th = theta_grid(n)
    return LevelNodes(n=n, curve=curve, points=psi(curve.rho * np.exp(1j * th)))
