"""Finite pure simplicial complexes: faces, incidence, degrees, links, weights.

Vertices are integers 0..n-1 under their natural order, faces are strictly
ascending tuples, and the empty face () is always materialised at dimension -1
so that degree-0 cochain machinery sees the constants as coboundaries.
Complexes are immutable after construction; every derived index (cell
enumerations, coface lists, top-cell degrees) is built once in the constructor.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DimensionError, MissingFaceError, PurityError

Face = tuple[int, ...]


def _closure(faces: Iterable[Sequence[int]]) -> set[Face]:
    """Downward closure of the given faces, including the empty face."""
    out: set[Face] = {()}
    for f in faces:
        vs = tuple(sorted(set(f)))
        for r in range(1, len(vs) + 1):
            out.update(itertools.combinations(vs, r))
    return out


class SimplicialComplex:
    """Immutable face store with per-dimension enumerations and a coface index.

    ``cells(i)`` returns the i-cells in lexicographic order; that order is the
    canonical basis enumeration used by the cochain and operator modules.
    """

    __slots__ = (
        "n_vertices",
        "dim",
        "vertex_labels",
        "_cells",
        "_index",
        "_cofaces",
        "_degrees",
    )

    def __init__(self, n_vertices: int, faces: Iterable[Face], *,
                 vertex_labels: tuple[int, ...] | None = None):
        faces = set(faces)
        faces.add(())
        if any(v < 0 or v >= n_vertices for f in faces for v in f):
            raise IndexError(f"vertex index out of range 0..{n_vertices - 1}")
        self.n_vertices = n_vertices
        self.dim = max(len(f) for f in faces) - 1
        self.vertex_labels = vertex_labels
        self._cells: dict[int, list[Face]] = {
            i: sorted(f for f in faces if len(f) == i + 1)
            for i in range(-1, self.dim + 1)
        }
        self._index: dict[int, dict[Face, int]] = {
            i: {f: j for j, f in enumerate(cs)} for i, cs in self._cells.items()
        }
        self._check_closure()
        self._cofaces = self._build_cofaces()
        self._degrees = self._build_degrees()

    def _check_closure(self) -> None:
        for i in range(0, self.dim + 1):
            idx = self._index[i - 1]
            for f in self._cells[i]:
                for ell in range(len(f)):
                    if f[:ell] + f[ell + 1:] not in idx:
                        raise PurityError(
                            f"face {f} present but its subface is missing")

    def _build_cofaces(self) -> dict[int, list[list[int]]]:
        cof: dict[int, list[list[int]]] = {
            i: [[] for _ in self._cells[i]] for i in range(-1, self.dim + 1)
        }
        for i in range(0, self.dim + 1):
            idx = self._index[i - 1]
            for j, f in enumerate(self._cells[i]):
                for ell in range(len(f)):
                    cof[i - 1][idx[f[:ell] + f[ell + 1:]]].append(j)
        return cof

    def _build_degrees(self) -> dict[int, list[int]]:
        d = self.dim
        deg: dict[int, list[int]] = {d: [1] * len(self._cells[d])}
        for i in range(d - 1, -2, -1):
            up = deg[i + 1]
            # each top cell containing F is counted once per (i+1)-coface
            # of F inside it, i.e. (d - i) times
            deg[i] = [sum(up[c] for c in cofs) // (d - i)
                      for cofs in self._cofaces[i]]
        return deg

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def from_maximal_faces(cls, maximal: Iterable[Sequence[int]],
                           n_vertices: int | None = None,
                           *, allow_isolated_vertices: bool = False,
                           ) -> "SimplicialComplex":
        """Build the downward closure of the given faces and verify purity.

        Duplicate and nested inputs are absorbed by the closure.  Raises
        PurityError when, after closure, some face is not contained in a
        top-dimensional cell.  With ``allow_isolated_vertices`` (graphs and
        degree-skewed random models) vertices outside every top cell are kept
        as 0-cells instead of failing the purity check.
        """
        maximal = [list(f) for f in maximal]
        if not maximal:
            raise PurityError("need at least one maximal face")
        faces = _closure(maximal)
        n = n_vertices if n_vertices is not None else 1 + max(
            (v for f in faces for v in f), default=-1)
        if any(v < 0 or v >= n for f in faces for v in f):
            raise IndexError(f"vertex index out of range 0..{n - 1}")
        if allow_isolated_vertices:
            faces.update((v,) for v in range(n))
        d = max(len(f) for f in faces) - 1
        top = [set(f) for f in faces if len(f) == d + 1]
        for f in faces:
            if 0 < len(f) <= d and not any(set(f) <= t for t in top):
                if allow_isolated_vertices and len(f) == 1:
                    continue
                raise PurityError(f"face {tuple(f)} lies in no {d}-cell")
        if not allow_isolated_vertices:
            covered = {v for f in faces for v in f}
            for v in range(n):
                if v not in covered:
                    raise PurityError(f"vertex {v} lies in no face")
        return cls(n, faces)

    @classmethod
    def complete(cls, n: int, d: int) -> "SimplicialComplex":
        """Complete d-dimensional complex on n vertices: all subsets of size <= d+1."""
        if not 0 <= d <= n - 1:
            raise DimensionError(f"need 0 <= d <= n-1, got d={d}, n={n}")
        faces: set[Face] = set()
        for i in range(d + 1):
            faces.update(itertools.combinations(range(n), i + 1))
        return cls(n, faces)

    @classmethod
    def graph(cls, n: int, edges: Iterable[Sequence[int]]) -> "SimplicialComplex":
        """Graph on vertices 0..n-1; isolated vertices are kept as 0-cells."""
        faces: set[Face] = {(v,) for v in range(n)}
        faces.update(tuple(sorted(e)) for e in edges)
        return cls(n, faces)

    @classmethod
    def from_cells(cls, n: int, cells: Iterable[Face]) -> "SimplicialComplex":
        """Trusted constructor from an already downward-closed face set."""
        return cls(n, cells)

    # ------------------------------------------------------------------
    # accessors

    def cells(self, i: int) -> list[Face]:
        """The i-cells in lexicographic order (dimension -1 holds only ())."""
        if not -1 <= i <= self.dim:
            return []
        return self._cells[i]

    def n_cells(self, i: int) -> int:
        return len(self.cells(i))

    def cell_index(self, face: Face) -> int:
        idx = self._index.get(len(face) - 1, {})
        if face not in idx:
            raise MissingFaceError(f"face {face} not in complex")
        return idx[face]

    def __contains__(self, face: Sequence[int]) -> bool:
        f = tuple(face)
        return f in self._index.get(len(f) - 1, {})

    def cofaces(self, face: Face) -> list[Face]:
        """Faces of one dimension higher containing the given face."""
        i = len(face) - 1
        j = self.cell_index(face)
        return [self._cells[i + 1][c] for c in self._cofaces[i][j]]

    def coface_indices(self, i: int) -> list[list[int]]:
        """For each i-cell (by index), the indices of its (i+1)-cofaces."""
        return self._cofaces[i]

    def degree(self, face: Face) -> int:
        """Number of top-dimensional cells containing the face."""
        j = self.cell_index(face)
        return self._degrees[len(face) - 1][j]

    def degrees(self, i: int) -> list[int]:
        """Top-cell degrees of all i-cells, in enumeration order."""
        if not -1 <= i <= self.dim:
            raise DimensionError(f"no cells of dimension {i}")
        return self._degrees[i]

    def weight(self, face: Face) -> Fraction:
        """Normalised weight deg(F) / (C(d+1, i+1) * #top cells), exact."""
        i = len(face) - 1
        return Fraction(self.degree(face), self.weight_denominator(i))

    def weight_denominator(self, i: int) -> int:
        """Common denominator of all i-cell weights."""
        n_top = self.n_cells(self.dim)
        if n_top == 0:
            raise DimensionError("complex has no top cells")
        return comb(self.dim + 1, i + 1) * n_top

    def weight_table(self, i: int) -> dict[Face, Fraction]:
        """All i-cell weights at once; they sum to exactly 1."""
        den = self.weight_denominator(i)
        return {f: Fraction(d, den)
                for f, d in zip(self._cells[i], self._degrees[i])}

    def incidence_number(self, f: Face, g: Face) -> int:
        """Oriented incidence [F:G]: (-1)^l if F minus G is F's l-th vertex, else 0."""
        if len(f) != len(g) + 1:
            raise DimensionError(
                f"incidence needs dim F = dim G + 1, got {len(f)-1}, {len(g)-1}")
        gs = set(g)
        if not gs <= set(f):
            return 0
        pos = next(ell for ell, v in enumerate(f) if v not in gs)
        return -1 if pos % 2 else 1

    # ------------------------------------------------------------------
    # derived complexes

    def link(self, face: Sequence[int]) -> "SimplicialComplex":
        """Link of a face, re-indexed over its own vertices.

        The result's ``vertex_labels`` maps its vertex indices back to the
        parent complex, which is what failure reports quote.
        """
        f = tuple(sorted(face))
        if f not in self:
            raise MissingFaceError(f"face {f} not in complex")
        fs = set(f)
        if not fs:
            return self
        maximal = [tuple(v for v in top if v not in fs)
                   for top in self._cells[self.dim] if fs <= set(top)]
        labels = sorted({v for m in maximal for v in m})
        relabel = {v: j for j, v in enumerate(labels)}
        faces = _closure([[relabel[v] for v in m] for m in maximal])
        return SimplicialComplex(len(labels), faces,
                                 vertex_labels=tuple(labels))

    def skeleton(self, j: int) -> "SimplicialComplex":
        """All faces of dimension at most j; pure of dimension j."""
        if not 0 <= j <= self.dim:
            raise DimensionError(f"skeleton dimension must be in 0..{self.dim}")
        faces = [f for i in range(-1, j + 1) for f in self._cells[i]]
        return SimplicialComplex(self.n_vertices, faces,
                                 vertex_labels=self.vertex_labels)

    # ------------------------------------------------------------------
    # graph-flavoured queries

    def edges(self) -> list[Face]:
        return self.cells(1)

    def vertex_edge_degrees(self) -> list[int]:
        """Number of edges at each vertex (graph degree, any complex)."""
        out = [0] * self.n_vertices
        for u, v in self.cells(1):
            out[u] += 1
            out[v] += 1
        return out

    def isolated_vertices(self) -> list[int]:
        """Vertices of top-cell degree zero (possible for generated graphs)."""
        return [v for (v,), d in zip(self._cells[0], self._degrees[0]) if d == 0]

    def uncovered_cells(self, i: int) -> list[Face]:
        """i-cells contained in no top cell (nonempty only off the pure case)."""
        return [f for f, d in zip(self._cells[i], self._degrees[i]) if d == 0]

    def is_pure(self) -> bool:
        return all(d > 0 for i in range(0, self.dim)
                   for d in self._degrees[i])

    def n_components(self) -> int:
        """Connected components of the 1-skeleton (isolated vertices count)."""
        parent = list(range(self.n_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.cells(1):
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        return len({find(v) for v in range(self.n_vertices)})

    def is_connected(self) -> bool:
        return self.n_components() <= 1

    def degree_profile(self) -> tuple[int, int]:
        """(max top cells through a vertex, max top cells through a (d-1)-cell)."""
        vdeg = max(self._degrees[0], default=0)
        if self.dim >= 1:
            updeg = max(self._degrees[self.dim - 1], default=0)
        else:
            updeg = vdeg
        return vdeg, updeg

    def __repr__(self) -> str:
        counts = ",".join(str(self.n_cells(i)) for i in range(self.dim + 1))
        return f"SimplicialComplex(n={self.n_vertices}, d={self.dim}, cells=[{counts}])"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return (self.n_vertices == other.n_vertices
                and self._cells == other._cells)

    def __hash__(self) -> int:  # complexes are immutable value objects
        return hash((self.n_vertices, self.dim,
                     tuple(tuple(self._cells[i]) for i in range(self.dim + 1))))


# ----------------------------------------------------------------------
# MFL-JSON: {"maximal_faces": [[1-based ascending ...], ...], "n": int}

def maximal_faces(x: SimplicialComplex) -> list[Face]:
    """Faces contained in no larger face; isolated vertices included."""
    out = list(x.cells(x.dim))
    if x.dim >= 1:
        out.extend((v,) for v in x.isolated_vertices())
    return sorted(out)


def to_mfl_json(x: SimplicialComplex) -> str:
    """Canonical single-line serialisation; stable under write(read(...))."""
    payload = {
        "maximal_faces": [[v + 1 for v in f] for f in maximal_faces(x)],
        "n": x.n_vertices,
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def from_mfl_json(text: str) -> SimplicialComplex:
    payload = json.loads(text)
    n = int(payload["n"])
    maximal = [[v - 1 for v in f] for f in payload["maximal_faces"]]
    d = max((len(f) for f in maximal), default=1) - 1
    return SimplicialComplex.from_maximal_faces(
        maximal, n_vertices=n, allow_isolated_vertices=(d <= 1))


def write_complex(x: SimplicialComplex, path: str | Path) -> None:
    Path(path).write_text(to_mfl_json(x))


def read_complex(path: str | Path) -> SimplicialComplex:
    return from_mfl_json(Path(path).read_text())
