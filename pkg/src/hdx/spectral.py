"""Real spectral theory: weighted Laplacians, Hodge parts, gaps, graph verdicts.

The inner product on i-cochains weights each cell by its top-cell degree.
Operators are assembled densely and conjugated by D^(1/2) into symmetric form,
so plain symmetric eigensolvers certify everything at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complexes import Face, SimplicialComplex
from .errors import (DimensionError, NotInL200Error, RangeError,
                     RegularityError, SizeCapError, UnknownTypeError)

SPECTRAL_TOL = 1e-9
RANK_REL_TOL = 1e-8
CHEEGER_CAP = 22


def coboundary_matrix(X: SimplicialComplex, i: int) -> np.ndarray:
    """Dense signed incidence matrix of the degree-i coboundary.

    Dimension -1 is the augmentation: the column of ones over the vertices.
    """
    if i == -1:
        return np.ones((X.n_cells(0), 1))
    rows, cols = X.cells(i + 1), X.cells(i)
    colidx = {f: j for j, f in enumerate(cols)}
    out = np.zeros((len(rows), len(cols)))
    for r, f in enumerate(rows):
        for ell in range(len(f)):
            out[r, colidx[f[:ell] + f[ell + 1:]]] = -1.0 if ell % 2 else 1.0
    return out


class OperatorBundle:
    """Coboundaries, adjoints and Laplacians of one complex, ready to solve.

    Includes the augmentation map at dimension -1 (the constant functions are
    coboundaries), which makes harmonic space at dimension 0 the reduced one.
    """

    def __init__(self, X: SimplicialComplex, tol: float = SPECTRAL_TOL):
        self.X = X
        self.tol = tol
        d = X.dim
        self.deg = {i: np.asarray(X.degrees(i), dtype=float)
                    for i in range(-1, d + 1)}
        for i in range(0, d + 1):
            if np.any(self.deg[i] == 0):
                raise ValueError(
                    f"zero-degree {i}-cells: weighted inner product is "
                    "degenerate, spectral analysis unavailable")
        self.delta = {i: coboundary_matrix(X, i) for i in range(-1, d)}
        # hat form D_{i+1}^(1/2) delta_i D_i^(-1/2): adjoint becomes transpose
        self.hat = {
            i: np.sqrt(self.deg[i + 1])[:, None] * self.delta[i]
               / np.sqrt(self.deg[i])[None, :]
            for i in range(-1, d)
        }
        self.delta_star = {
            i: (self.delta[i].T * self.deg[i + 1][None, :])
               / self.deg[i][:, None]
            for i in range(-1, d)
        }
        self._complement_cache: dict[int, np.ndarray] = {}

    # -- operators ---------------------------------------------------------

    def lap_up(self, i: int) -> np.ndarray:
        if i not in self.delta:
            return np.zeros((self.X.n_cells(i),) * 2)
        return self.delta_star[i] @ self.delta[i]

    def lap_down(self, i: int) -> np.ndarray:
        if i - 1 not in self.delta:
            return np.zeros((self.X.n_cells(i),) * 2)
        return self.delta[i - 1] @ self.delta_star[i - 1]

    def lap(self, i: int) -> np.ndarray:
        return self.lap_up(i) + self.lap_down(i)

    def inner(self, i: int, f: np.ndarray, g: np.ndarray) -> float:
        return float(np.dot(self.deg[i] * f, g))

    # -- spectra -------------------------------------------------------------

    def _hat_sym(self, op: np.ndarray, i: int) -> np.ndarray:
        s = np.sqrt(self.deg[i])
        return s[:, None] * op / s[None, :]

    def eigenvalues(self, i: int, which: str = "full") -> np.ndarray:
        """Spectrum of the chosen Laplacian at dimension i (ascending)."""
        op = {"up": self.lap_up, "down": self.lap_down,
              "full": self.lap}[which](i)
        sym = self._hat_sym(op, i)
        return np.linalg.eigvalsh((sym + sym.T) / 2)

    def _coboundary_complement(self, i: int) -> np.ndarray:
        """Orthonormal (hat-space) basis of the complement of B^i."""
        if i not in self._complement_cache:
            A = self.hat[i - 1]
            u, s, _ = np.linalg.svd(A)
            rank = int(np.sum(s > RANK_REL_TOL * s[0])) if s.size else 0
            self._complement_cache[i] = u[:, rank:]
        return self._complement_cache[i]

    def spectral_gap(self, i: int) -> float:
        """Least eigenvalue of the up Laplacian on the complement of B^i."""
        if not 0 <= i <= self.X.dim - 1:
            raise DimensionError(f"spectral gap defined for 0 <= i <= {self.X.dim - 1}")
        q = self._coboundary_complement(i)
        if q.shape[1] == 0:
            return math.inf
        a = self.hat[i] @ q
        ev = np.linalg.eigvalsh(a.T @ a)
        return float(ev[0])

    def spectral_gaps(self) -> list[float]:
        return [self.spectral_gap(i) for i in range(self.X.dim)]

    def harmonic_dim(self, i: int) -> int:
        """dim ker of the full Laplacian at dimension i (tolerance cut)."""
        ev = self.eigenvalues(i, "full")
        return int(np.sum(np.abs(ev) <= max(self.tol, self.tol * ev[-1])))

    # -- Hodge -----------------------------------------------------------------

    def hodge_decompose(self, i: int, f: np.ndarray,
                        ) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
        """Split f into coboundary, harmonic and down parts.

        The returned residual is the largest defect among the three pairwise
        weighted inner products and the harmonicity of the middle part; a
        numerically bad decomposition is visible there, never silent.
        """
        f = np.asarray(f, dtype=float)
        s = np.sqrt(self.deg[i])
        fh = s * f

        def proj(mat: np.ndarray | None) -> np.ndarray:
            if mat is None or mat.size == 0:
                return np.zeros_like(fh)
            u, sv, _ = np.linalg.svd(mat, full_matrices=False)
            if sv.size == 0 or sv[0] == 0:
                return np.zeros_like(fh)
            q = u[:, sv > RANK_REL_TOL * sv[0]]
            return q @ (q.T @ fh)

        b_hat = proj(self.hat[i - 1] if i - 1 in self.hat else None)
        bd_hat = proj(self.hat[i].T if i in self.hat else None)
        h_hat = fh - b_hat - bd_hat
        b, h, bp = b_hat / s, h_hat / s, bd_hat / s
        lap_h = self.lap(i) @ h
        residual = max(
            abs(self.inner(i, b, h)),
            abs(self.inner(i, b, bp)),
            abs(self.inner(i, h, bp)),
            math.sqrt(max(0.0, self.inner(i, lap_h, lap_h))),
        )
        return b, h, bp, residual


def is_spectral_expander(X: SimplicialComplex, eps: float,
                         tol: float = SPECTRAL_TOL) -> bool:
    """True iff every spectral gap below the top dimension is at least eps."""
    bundle = OperatorBundle(X, tol)
    return all(g >= eps - tol for g in bundle.spectral_gaps())


# ----------------------------------------------------------------------
# graph-level certificates


def _require_graph(X: SimplicialComplex) -> None:
    if X.dim > 1:
        raise DimensionError("operation defined on graphs; pass a 1-skeleton")


def regular_degree(X: SimplicialComplex) -> int:
    _require_graph(X)
    degs = set(X.vertex_edge_degrees())
    if len(degs) != 1:
        raise RegularityError(f"graph is not regular: degrees {sorted(degs)}")
    return degs.pop()


def cheeger_constant(X: SimplicialComplex, cap: int = CHEEGER_CAP) -> Fraction:
    """Exact Cheeger constant by exhaustion over vertex bipartitions."""
    _require_graph(X)
    n = X.n_vertices
    if n > cap:
        raise SizeCapError(f"exhaustive partition search capped at {cap} vertices")
    if n < 2:
        raise ValueError("need at least two vertices")
    if not X.is_connected():
        return Fraction(0)
    edge_masks = [(1 << u) | (1 << v) for u, v in X.cells(1)]
    best: Fraction | None = None
    full = (1 << n) - 1
    for s in range(1, full, 2):  # vertex 0 stays on side A
        size_a = s.bit_count()
        cross = sum(1 for m in edge_masks if (s & m).bit_count() == 1)
        h = Fraction(cross, min(size_a, n - size_a))
        if best is None or h < best:
            best = h
    return best


@dataclass(frozen=True)
class CheegerBuserReport:
    k: int
    h: Fraction
    lambda1: float
    lower: float          # h^2 / (2 k^2)
    upper: float          # 2 h / k
    lower_slack: float    # lambda1 - lower
    upper_slack: float    # upper - lambda1
    holds: bool


def check_cheeger_buser(X: SimplicialComplex,
                        tol: float = SPECTRAL_TOL) -> CheegerBuserReport:
    """Two-sided Cheeger inequality check for a connected regular graph."""
    k = regular_degree(X)
    h = cheeger_constant(X)
    lam = OperatorBundle(X).spectral_gap(0)
    hf = float(h)
    lower = hf * hf / (2 * k * k)
    upper = 2 * hf / k
    return CheegerBuserReport(
        k=k, h=h, lambda1=lam, lower=lower, upper=upper,
        lower_slack=lam - lower, upper_slack=upper - lam,
        holds=(lower <= lam + tol and lam <= upper + tol))


@dataclass(frozen=True)
class RamanujanReport:
    k: int
    mu: float
    bound: float               # 2 sqrt(k - 1)
    is_ramanujan: bool
    boundary: bool             # mu within tolerance of the bound
    spectrum: tuple[float, ...]


def adjacency_matrix(X: SimplicialComplex) -> np.ndarray:
    _require_graph(X)
    a = np.zeros((X.n_vertices, X.n_vertices))
    for u, v in X.cells(1):
        a[u, v] = a[v, u] = 1.0
    return a


def ramanujan_certify(X: SimplicialComplex,
                      tol: float = SPECTRAL_TOL) -> RamanujanReport:
    """Largest nontrivial adjacency eigenvalue versus the 2 sqrt(k-1) bound.

    Eigenvalues within tolerance of +-k are the trivial ones and are excluded
    by value.  A verdict on the bound itself is reported as a boundary tie.
    """
    k = regular_degree(X)
    ev = np.linalg.eigvalsh(adjacency_matrix(X))
    nontrivial = ev[np.abs(np.abs(ev) - k) > tol]
    mu = float(np.max(np.abs(nontrivial))) if nontrivial.size else 0.0
    bound = 2.0 * math.sqrt(k - 1)
    return RamanujanReport(
        k=k, mu=mu, bound=bound,
        is_ramanujan=(mu <= bound + tol),
        boundary=(abs(mu - bound) <= tol),
        spectrum=tuple(float(x) for x in ev))


@dataclass(frozen=True)
class GarlandReport:
    d: int
    epsilon: float | None          # min over (d-2)-links of lambda^(0)
    bound: float | None            # 1 + d*epsilon - d
    lambda_top: float              # lambda^(d-1) of the complex
    holds: bool
    vacuous: bool
    disconnected_links: tuple[Face, ...] = field(default_factory=tuple)
    link_gaps: tuple = field(default_factory=tuple)  # ((face, gap), ...)


def garland_check(X: SimplicialComplex,
                  tol: float = SPECTRAL_TOL) -> GarlandReport:
    """Local-to-global bound: lambda^(d-1) >= 1 + d*eps - d from link gaps.

    Links of (d-2)-faces are graphs; a disconnected link is reported by the
    parent-vertex names of the offending face, and forces the bound vacuous
    (its gap is zero).
    """
    d = X.dim
    if d < 2:
        raise DimensionError("local-to-global bound needs dimension >= 2")
    eps = None
    offenders: list[Face] = []
    gaps: list[tuple[Face, float]] = []
    for f in X.cells(d - 2):
        link = X.link(f)
        if link.dim < 1 or not link.is_connected():
            offenders.append(f)
            gap = 0.0
        else:
            gap = OperatorBundle(link).spectral_gap(0)
        gaps.append((f, gap))
        eps = gap if eps is None else min(eps, gap)
    lam_top = OperatorBundle(X).spectral_gap(d - 1)
    bound = None if eps is None else 1.0 + d * eps - d
    vacuous = bound is None or bound <= tol
    holds = vacuous or lam_top >= bound - tol
    return GarlandReport(d=d, epsilon=eps, bound=bound, lambda_top=lam_top,
                         holds=holds, vacuous=vacuous,
                         disconnected_links=tuple(offenders),
                         link_gaps=tuple(gaps))


# ----------------------------------------------------------------------
# the p-parametrisation of the tempered interval


def solve_p(lam: float, q: float, tol: float = 1e-12) -> float:
    """The unique p in [2, inf] with lam = q^(1/p) + q^((p-1)/p).

    Bisection on t = 1/p, where q^t + q^(1-t) is strictly decreasing on
    [0, 1/2]; endpoints map exactly (2 sqrt(q) -> 2, q+1 -> inf).
    """
    if q <= 1:
        raise RangeError("need q > 1")
    lo_val = 2.0 * math.sqrt(q)
    hi_val = q + 1.0
    if lam < lo_val - 1e-9 or lam > hi_val + 1e-9:
        raise RangeError(f"lambda must lie in [{lo_val}, {hi_val}], got {lam}")
    if lam <= lo_val:
        return 2.0
    if lam >= hi_val:
        return math.inf
    lo, hi = 0.0, 0.5  # g is decreasing: g(0) = q+1, g(1/2) = 2 sqrt(q)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if q ** mid + q ** (1 - mid) > lam:
            lo = mid
        else:
            hi = mid
    return 2.0 / (lo + hi)


def weyl_p(family: str, rank: int) -> int:
    """Decay parameter p attached to an affine Weyl type (family, rank)."""
    fam = family.strip().rstrip("~").upper()
    if fam in ("A", "B", "C"):
        if rank < 1:
            raise UnknownTypeError(f"{fam} needs rank >= 1")
        return 2 * rank
    if fam == "D":
        if rank < 2:
            raise UnknownTypeError("D needs rank >= 2")
        return 2 * (rank - 1) if rank % 2 == 0 else 2 * rank
    exceptional = {("E", 6): 16, ("E", 7): 18, ("E", 8): 29,
                   ("F", 4): 11, ("G", 2): 6}
    try:
        return exceptional[(fam, rank)]
    except KeyError:
        raise UnknownTypeError(f"unknown affine type {family}_{rank}") from None


# ----------------------------------------------------------------------
# universal-cover lift profiles


@dataclass(frozen=True)
class LiftDecayProfile:
    averages: tuple[float, ...]    # sphere averages, radius 0..R
    alpha: float | None            # fitted decay exponent, base q = k-1
    q: int
    window: tuple[int, int]
    skipped: tuple[int, ...]       # radii dropped for underflow
    base: int


def _bipartition(X: SimplicialComplex) -> list[int] | None:
    """2-colouring of a connected graph, or None if an odd cycle exists."""
    color = [-1] * X.n_vertices
    adj = [[] for _ in range(X.n_vertices)]
    for u, v in X.cells(1):
        adj[u].append(v)
        adj[v].append(u)
    stack = [0]
    color[0] = 0
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if color[w] == -1:
                color[w] = 1 - color[u]
                stack.append(w)
            elif color[w] == color[u]:
                return None
    return color


def lift_decay_profile(X: SimplicialComplex, f: np.ndarray, base: int,
                       radius: int, tol: float = SPECTRAL_TOL,
                       ) -> LiftDecayProfile:
    """Sphere averages of the lift of f to the universal cover around base.

    The cover of a k-regular graph is the k-regular tree; spheres are walked
    by non-backtracking breadth first search with (previous, current) states
    collapsed to multiplicities, so memory stays at the directed-edge count.
    The decay exponent comes from a least-squares fit of
    log_q |avg(r)/avg(0)| against -alpha * r over the upper half window.
    """
    k = regular_degree(X)
    if k < 3:
        raise RegularityError("decay profile needs degree at least 3")
    if not X.is_connected():
        raise ValueError("graph must be connected")
    f = np.asarray(f, dtype=float)
    scale = max(1.0, float(np.max(np.abs(f))))
    if abs(float(np.sum(f))) > tol * scale * X.n_vertices:
        raise NotInL200Error("f is not orthogonal to the constants")
    color = _bipartition(X)
    if color is not None:
        for side in (0, 1):
            part = sum(float(f[v]) for v in range(X.n_vertices)
                       if color[v] == side)
            if abs(part) > tol * scale * X.n_vertices:
                raise NotInL200Error(
                    "bipartite graph: f must sum to zero on each side")

    adj = [[] for _ in range(X.n_vertices)]
    for u, v in X.cells(1):
        adj[u].append(v)
        adj[v].append(u)
    frontier: dict[tuple[int, int], int] = {(-1, base): 1}
    averages = []
    for _ in range(radius + 1):
        total = sum(frontier.values())
        acc = sum(c * float(f[v]) for (_, v), c in frontier.items())
        averages.append(acc / total)
        nxt: dict[tuple[int, int], int] = {}
        for (u, v), c in frontier.items():
            for w in adj[v]:
                if w != u:
                    key = (v, w)
                    nxt[key] = nxt.get(key, 0) + c
        frontier = nxt

    q = k - 1
    f0 = abs(averages[0])
    if f0 < 1e-13:
        raise ValueError("f vanishes at the base vertex; pick another base")
    lo = (radius + 1) // 2
    rs, ys, skipped = [], [], []
    for r in range(lo, radius + 1):
        if abs(averages[r]) < 1e-13:
            skipped.append(r)
            continue
        rs.append(r)
        ys.append(math.log(abs(averages[r]) / f0) / math.log(q))
    alpha = None
    if rs:
        alpha = -sum(r * y for r, y in zip(rs, ys)) / sum(r * r for r in rs)
    return LiftDecayProfile(
        averages=tuple(averages), alpha=alpha, q=q,
        window=(lo, radius), skipped=tuple(skipped), base=base)


# ----------------------------------------------------------------------
# the points-to-lines example and its flagged eigenvalue conventions

FANO_LINES = ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5),
              (1, 4, 6), (2, 3, 6), (2, 4, 5))


def heawood_graph() -> SimplicialComplex:
    """Point-line incidence graph of the order-2 projective plane."""
    edges = [(p, 7 + li) for li, line in enumerate(FANO_LINES) for p in line]
    return SimplicialComplex.graph(14, edges)


def fano_heawood_report(tol: float = SPECTRAL_TOL) -> dict:
    """Certify the Heawood graph and record both lambda_1 conventions.

    The normalised gap computed from the second adjacency eigenvalue sqrt(q)
    is 1 - sqrt(q)/(q+1); the commonly quoted value 1 - 1/sqrt(q) agrees only
    as q grows, so both are reported and the mismatch is flagged rather than
    resolved.
    """
    q = 2
    graph = heawood_graph()
    ram = ramanujan_certify(graph, tol)
    lam1 = OperatorBundle(graph).spectral_gap(0)
    incidence_form = 1.0 - math.sqrt(q) / (q + 1)
    quoted_form = 1.0 - 1.0 / math.sqrt(q)
    return {
        "q": q,
        "ramanujan": ram,
        "lambda1_computed": lam1,
        "lambda1_incidence_form": incidence_form,
        "lambda1_quoted_form": quoted_form,
        "discrepancy_flagged": abs(incidence_form - quoted_form) > tol,
    }
