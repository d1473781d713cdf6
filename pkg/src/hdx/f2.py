"""F2 cochain machinery: coboundaries, Betti numbers, expansion constants.

Cochains are int bitsets over the complex's lexicographic cell enumerations.
All norms are exact: every i-cell weight shares the denominator
C(d+1, i+1) * #top-cells, so a cochain norm is an integer numerator over that
denominator and minimisation never touches floating point.

The expansion constants are certified by exhaustive search organised coset by
coset: the coboundary is constant on cosets of the subspace being quotiented,
so each coset costs one coboundary evaluation plus a Gray-code walk over the
subspace for the minimum coset norm.  Total work is bounded by 2^|X^(i)| and
guarded by ``cap``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf
from typing import Iterable, Sequence

from .complexes import Face, SimplicialComplex
from .errors import DimensionError, ExactnessUnavailable

DEFAULT_CAP = 22

# ----------------------------------------------------------------------
# GF(2) linear algebra on int bitsets


def reduce_vector(v: int, echelon: dict[int, int]) -> int:
    """Reduce v by an echelon basis keyed by lowest set bit."""
    while v:
        low = v & -v
        row = echelon.get(low)
        if row is None:
            return v
        v ^= row
    return 0


def echelon_basis(vectors: Iterable[int]) -> dict[int, int]:
    """Row-echelon basis (lowest-bit pivots) of the span of the vectors."""
    basis: dict[int, int] = {}
    for v in vectors:
        v = reduce_vector(v, basis)
        if v:
            basis[v & -v] = v
    return basis


def gf2_rank(rows: Iterable[int], target: int | None = None) -> int:
    """Rank over GF(2); stops early once ``target`` is reached."""
    basis: dict[int, int] = {}
    for v in rows:
        v = reduce_vector(v, basis)
        if v:
            basis[v & -v] = v
            if target is not None and len(basis) >= target:
                return len(basis)
    return len(basis)


def kernel_basis(rows: Sequence[int], n_cols: int) -> list[int]:
    """Basis of {x : popcount(row & x) even for all rows}."""
    basis = echelon_basis(rows)
    # back-substitute to reduced form so each pivot appears in one row only
    for low in sorted(basis, reverse=True):
        row = basis[low]
        for low2, other in basis.items():
            if low2 != low and other & low:
                basis[low2] = other ^ row
    out = []
    for j in range(n_cols):
        bit = 1 << j
        if bit in basis:
            continue
        v = bit
        for low, row in basis.items():
            if row & bit:
                v |= low
        out.append(v)
    return out


def _gray_flips(k: int):
    """Bit index flipped at each step of a 2^k Gray-code walk."""
    for step in range(1, 1 << k):
        yield (step & -step).bit_length() - 1


class _NormTable:
    """Chunked lookup tables for weighted support sums of bitsets."""

    CHUNK = 8

    def __init__(self, cell_degrees: Sequence[int]):
        self.tables = []
        for c in range(0, len(cell_degrees), self.CHUNK):
            seg = cell_degrees[c:c + self.CHUNK]
            t = [0] * (1 << len(seg))
            for m in range(1, len(t)):
                lsb = m & -m
                t[m] = t[m ^ lsb] + seg[lsb.bit_length() - 1]
            self.tables.append(t)

    def numerator(self, bits: int) -> int:
        s = 0
        c = 0
        while bits:
            s += self.tables[c][bits & 255]
            bits >>= 8
            c += 1
        return s


# ----------------------------------------------------------------------


@dataclass(frozen=True)
class F2Cochain:
    """Cochain over F2: a bitset over the i-cell enumeration of a complex."""

    dim: int
    bits: int
    length: int

    def support(self) -> list[int]:
        return [j for j in range(self.length) if self.bits >> j & 1]

    def __xor__(self, other: "F2Cochain") -> "F2Cochain":
        if (self.dim, self.length) != (other.dim, other.length):
            raise DimensionError("cochain dimensions differ")
        return F2Cochain(self.dim, self.bits ^ other.bits, self.length)


@dataclass(frozen=True)
class CohomologyReport:
    """Per-dimension cocycle/coboundary dimensions; degree 0 is reduced."""

    dim_z: list[int]
    dim_b: list[int]
    betti: list[int]


class F2Complex:
    """F2 cochain complex of a simplicial complex, with certified expansion.

    Matrices are stored as per-row bitsets; everything is built lazily so the
    cheap predicates (homological connectivity in sweeps) do not pay for the
    weight tables.
    """

    def __init__(self, X: SimplicialComplex, cap: int = DEFAULT_CAP):
        self.X = X
        self.cap = cap
        self._delta_rows: dict[int, list[int]] = {}
        self._coface_masks: dict[int, list[int]] = {}
        self._norm_tables: dict[int, _NormTable] = {}
        self._b_basis: dict[int, dict[int, int]] = {}
        self._z_basis: dict[int, list[int]] = {}

    # -- lazy structure -------------------------------------------------

    def delta_rows(self, i: int) -> list[int]:
        """Rows of the degree-i coboundary: one bitset per (i+1)-cell."""
        if i not in self._delta_rows:
            X = self.X
            if not -1 <= i <= X.dim - 1:
                self._delta_rows[i] = []
            else:
                idx = {f: j for j, f in enumerate(X.cells(i))}
                rows = []
                for F in X.cells(i + 1):
                    m = 0
                    for ell in range(len(F)):
                        m |= 1 << idx[F[:ell] + F[ell + 1:]]
                    rows.append(m)
                self._delta_rows[i] = rows
        return self._delta_rows[i]

    def coface_masks(self, i: int) -> list[int]:
        """Per i-cell, the bitset of its (i+1)-cofaces (columns of delta_i)."""
        if i not in self._coface_masks:
            masks = [0] * self.X.n_cells(i)
            for r, row in enumerate(self.delta_rows(i)):
                bits = row
                while bits:
                    low = bits & -bits
                    masks[low.bit_length() - 1] |= 1 << r
                    bits ^= low
            self._coface_masks[i] = masks
        return self._coface_masks[i]

    def norm_table(self, i: int) -> _NormTable:
        if i not in self._norm_tables:
            self._norm_tables[i] = _NormTable(self.X.degrees(i))
        return self._norm_tables[i]

    def coboundary_basis(self, i: int) -> dict[int, int]:
        """Echelon basis of B^i; B^0 is the constants (reduced convention)."""
        if i not in self._b_basis:
            self._b_basis[i] = echelon_basis(self.coface_masks(i - 1))
        return self._b_basis[i]

    def cocycle_basis(self, i: int) -> list[int]:
        """Basis of Z^i = ker delta_i (all of C^i at the top dimension)."""
        if i not in self._z_basis:
            self._z_basis[i] = kernel_basis(self.delta_rows(i),
                                            self.X.n_cells(i))
        return self._z_basis[i]

    # -- cochain arithmetic ----------------------------------------------

    def cochain(self, i: int, faces: Iterable[Face] = ()) -> F2Cochain:
        bits = 0
        for f in faces:
            bits |= 1 << self.X.cell_index(tuple(f))
        return F2Cochain(i, bits, self.X.n_cells(i))

    def delta(self, f: F2Cochain) -> F2Cochain:
        """Coboundary: (df)(F) = sum of f over the facets of F, mod 2."""
        i = f.dim
        if i >= self.X.dim:
            raise DimensionError(f"no coboundary above dimension {self.X.dim - 1}")
        bits = 0
        for r, row in enumerate(self.delta_rows(i)):
            if (row & f.bits).bit_count() & 1:
                bits |= 1 << r
        return F2Cochain(i + 1, bits, self.X.n_cells(i + 1))

    def boundary(self, c: F2Cochain) -> F2Cochain:
        """Boundary of a chain: facets with odd coefficient, mod 2."""
        i = c.dim
        if i < 0:
            raise DimensionError("no boundary below dimension 0")
        masks = self.coface_masks(i - 1)
        bits = 0
        for g, mask in enumerate(masks):
            if (mask & c.bits).bit_count() & 1:
                bits |= 1 << g
        return F2Cochain(i - 1, bits, self.X.n_cells(i - 1))

    def norm(self, f: F2Cochain) -> Fraction:
        """Weighted support measure of the cochain (a probability mass)."""
        num = self.norm_table(f.dim).numerator(f.bits)
        return Fraction(num, self.X.weight_denominator(f.dim))

    # -- ranks and cohomology ---------------------------------------------

    def rank_delta(self, i: int, target: int | None = None) -> int:
        return gf2_rank(self.delta_rows(i), target)

    def betti(self) -> CohomologyReport:
        X = self.X
        dim_z, dim_b, betti = [], [], []
        rank_below = 1 if X.n_vertices else 0  # augmentation: rank delta_{-1}
        for i in range(0, X.dim + 1):
            m = X.n_cells(i)
            rank_i = self.rank_delta(i) if i < X.dim else 0
            dim_z.append(m - rank_i)
            dim_b.append(rank_below)
            betti.append(dim_z[-1] - dim_b[-1])
            rank_below = rank_i
        return CohomologyReport(dim_z, dim_b, betti)

    def betti_number(self, i: int) -> int:
        if i > self.X.dim:
            return 0
        m = self.X.n_cells(i)
        rank_i = self.rank_delta(i) if i < self.X.dim else 0
        rank_below = (1 if self.X.n_vertices else 0) if i == 0 \
            else self.rank_delta(i - 1)
        return m - rank_i - rank_below

    def homologically_connected(self, i: int | None = None) -> bool:
        """True iff H^i(X, F2) = 0; defaults to codimension one."""
        i = self.X.dim - 1 if i is None else i
        if i > self.X.dim:
            return True
        if i < 0:
            return True
        m = self.X.n_cells(i)
        rank_below = (1 if self.X.n_vertices else 0) if i == 0 \
            else self.rank_delta(i - 1, target=m)
        target = m - rank_below
        if i == self.X.dim:
            return target == 0
        return self.rank_delta(i, target=target) >= target

    # -- exhaustive minimisation -------------------------------------------

    def _require_cap(self, size: int, what: str) -> None:
        if size > self.cap:
            raise ExactnessUnavailable(
                f"{what} needs 2^{size} enumeration, cap is 2^{self.cap}",
                size=size, cap=self.cap)

    def _min_span_numerator(self, start: int, span: list[int],
                            table: _NormTable) -> int:
        """Minimum weighted numerator over start + span (Gray-code walk)."""
        best = table.numerator(start)
        cur = start
        for j in _gray_flips(len(span)):
            cur ^= span[j]
            n = table.numerator(cur)
            if n < best:
                best = n
        return best

    def coset_norm(self, f: F2Cochain, mod: str = "B") -> Fraction:
        """Minimum norm over f + B^i (mod="B") or f + Z^i (mod="Z")."""
        i = f.dim
        if mod == "B":
            span = list(self.coboundary_basis(i).values())
        elif mod == "Z":
            span = list(self.cocycle_basis(i))
        else:
            raise ValueError("mod must be 'B' or 'Z'")
        self._require_cap(len(span), "coset norm")
        num = self._min_span_numerator(f.bits, span, self.norm_table(i))
        return Fraction(num, self.X.weight_denominator(i))

    def coboundary_expansion(self, i: int) -> Fraction | float:
        """Certified i-th coboundary expansion constant.

        Zero when H^i(X, F2) is nonzero; +inf when every cochain is a
        coboundary, so the minimisation ranges over an empty set.
        """
        X = self.X
        if not 0 <= i <= X.dim - 1:
            raise DimensionError(f"expansion defined for 0 <= i <= {X.dim - 1}")
        m = X.n_cells(i)
        self._require_cap(m, f"coboundary expansion at dimension {i}")
        b_ech = self.coboundary_basis(i)
        span = list(b_ech.values())
        free = [j for j in range(m) if (1 << j) not in b_ech]
        if not free:
            return inf
        if self.betti_number(i) != 0:
            return Fraction(0)
        return self._min_ratio_over_cosets(i, free, span)

    def cosystolic_constants(self, i: int) -> tuple[Fraction | float,
                                                    Fraction | float]:
        """(mu_i, nu_i): minimal nontrivial cocycle norm, and expansion
        relative to the cocycles.  Either is +inf when its domain is empty."""
        X = self.X
        if not 0 <= i <= X.dim - 1:
            raise DimensionError(f"expansion defined for 0 <= i <= {X.dim - 1}")
        m = X.n_cells(i)
        self._require_cap(m, f"cosystolic constants at dimension {i}")
        table = self.norm_table(i)
        b_ech = self.coboundary_basis(i)
        b_span = list(b_ech.values())
        z_vecs = self.cocycle_basis(i)

        # mu: enumerate cosets of B^i inside Z^i
        ext = echelon_basis(reduce_vector(z, b_ech) for z in z_vecs)
        ext_vecs = list(ext.values())
        if not ext_vecs:
            mu: Fraction | float = inf
        else:
            best = None
            rep = 0
            for j in _gray_flips(len(ext_vecs)):
                rep ^= ext_vecs[j]
                n = self._min_span_numerator(rep, b_span, table)
                if best is None or n < best:
                    best = n
            mu = Fraction(best, X.weight_denominator(i))

        # nu: enumerate cosets of Z^i inside C^i
        z_ech = echelon_basis(z_vecs)
        z_span = list(z_ech.values())
        free = [j for j in range(m) if (1 << j) not in z_ech]
        nu = inf if not free else self._min_ratio_over_cosets(i, free, z_span)
        return mu, nu

    def _min_ratio_over_cosets(self, i: int, free: list[int],
                               span: list[int]) -> Fraction:
        """min over nonzero cosets of ||d rep|| / min-coset-norm.

        ``free`` indexes coset representatives; the coboundary is constant on
        each coset, so it is maintained incrementally along the Gray walk.
        Cosets whose entire fibre has zero weight cannot witness expansion and
        are skipped (only possible when some cells have degree zero).
        """
        X = self.X
        dcols = self.coface_masks(i)
        t_num = self.norm_table(i)
        t_den = self.norm_table(i + 1)
        d_up = X.weight_denominator(i + 1)
        d_lo = X.weight_denominator(i)
        best_n, best_d = None, None  # ratio best_n*d_lo / (best_d*d_up)
        rep = 0
        dval = 0
        for j in _gray_flips(len(free)):
            rep ^= 1 << free[j]
            dval ^= dcols[free[j]]
            denom = self._min_span_numerator(rep, span, t_num)
            if denom == 0:
                continue
            numd = t_den.numerator(dval)
            if numd == 0:
                return Fraction(0)
            if best_n is None or numd * best_d < best_n * denom:
                best_n, best_d = numd, denom
        if best_n is None:
            return Fraction(0)
        return Fraction(best_n * d_lo, best_d * d_up)

    # -- non-certified estimate ---------------------------------------------

    def sampled_expansion_estimate(self, i: int, samples: int, rngdraw,
                                   ) -> dict:
        """Sampled lower-style estimate of the expansion ratio at dimension i.

        Draws random cochains, skips coboundaries, and scores each sample by
        ||df|| / ||f||, a per-sample underestimate of its true coset ratio
        (the coset minimum never exceeds ||f||).  The reported minimum is an
        estimate only, never a certificate; ``certified`` is always False.
        """
        X = self.X
        if not 0 <= i <= X.dim - 1:
            raise DimensionError(f"expansion defined for 0 <= i <= {X.dim - 1}")
        m = X.n_cells(i)
        b_ech = self.coboundary_basis(i)
        t_num = self.norm_table(i)
        t_den = self.norm_table(i + 1)
        dcols = self.coface_masks(i)
        best: Fraction | None = None
        skipped = 0
        for _ in range(samples):
            bits = int.from_bytes(rngdraw.bytes((m + 7) // 8), "little")
            bits &= (1 << m) - 1
            if reduce_vector(bits, b_ech) == 0:
                skipped += 1
                continue
            nf = t_num.numerator(bits)
            if nf == 0:
                skipped += 1
                continue
            dval = 0
            rem = bits
            while rem:
                low = rem & -rem
                dval ^= dcols[low.bit_length() - 1]
                rem ^= low
            ratio = Fraction(t_den.numerator(dval) * X.weight_denominator(i),
                             nf * X.weight_denominator(i + 1))
            if best is None or ratio < best:
                best = ratio
        return {
            "value": best,
            "samples": samples,
            "skipped": skipped,
            "certified": False,
            "method": "sampled",
        }
