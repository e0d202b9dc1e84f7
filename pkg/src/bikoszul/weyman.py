"""Dimension calculus for the two-term complexes behind the resultant matrix.

For a degree vector m in Z^3 the complex attached to an overdetermined
2-bilinear system has modules K_v = sum over p of K_{v,p}(m), where each
K_{v,p} splits over (a, b, c) with a + b + c = p (a of the first r
equation slots, b of the last s, c in {0,1} for the added trilinear one)
into cohomology factors

    H^jx(mx - p) . H^jy(my - (p - b)) . H^jz(mz - (p - a))

with jt in {0, n_t}, times the exterior multiplicity C(r,a) C(s,b).
Only dimensions matter here; sheaves are never materialized, a factor
is a "sections" space or the dual of one.

A degree vector is *determinantal* when the whole table is supported on
v in {0, 1} with equal total dimensions: the complex degenerates to a
single square matrix whose determinant is the resultant.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _product
from math import comb

from .core import DomainError, SystemType, mhb

DegreeVector = tuple[int, int, int]


def cohomology_dim(n_t: int, q: int, d: int) -> int:
    """dim H^q of P^{n_t} twisted by d, nonzero only for q in {0, n_t}.

    Sections for q = 0 and d >= 0; by Serre duality the top cohomology is
    the dual of the sections of degree -d - 1 - n_t, positive exactly when
    d < -n_t (the only range where the dual dimension is nonzero).
    """
    if n_t < 0:
        raise DomainError("n_t must be nonnegative")
    if q == 0 and d >= 0:
        return comb(n_t + d, d)
    if q == n_t and d < -n_t:
        dual = -d - 1 - n_t
        return comb(n_t + dual, dual)
    return 0


def _block_dim(n_t: int, j_t: int, d: int) -> tuple[int, str]:
    """(dimension, kind) of one Kunneth factor; kind is 'sections' or 'dual'."""
    dim = cohomology_dim(n_t, j_t, d)
    if n_t == 0:
        kind = "sections" if d >= 0 else "dual"
    else:
        kind = "sections" if j_t == 0 else "dual"
    return dim, kind


@dataclass(frozen=True)
class TermEntry:
    v: int
    p: int
    a: int
    b: int
    c: int
    j: tuple[int, int, int]
    dim: int
    kinds: tuple[str, str, str]


@dataclass(frozen=True)
class TermTable:
    type: SystemType
    m: DegreeVector
    entries: tuple[TermEntry, ...]

    def dim_at(self, v: int) -> int:
        return sum(e.dim for e in self.entries if e.v == v)

    def nonzero_vp(self) -> set[tuple[int, int]]:
        return {(e.v, e.p) for e in self.entries}


def term_table(t: SystemType, m: DegreeVector) -> TermTable:
    """Every nonzero term K_{v,p}(m) with its dimension."""
    mx, my, mz = m
    entries = []
    j_opts = [sorted({0, n_t}) for n_t in t.dims]
    for p in range(t.n + 2):
        for c in (0, 1):
            for a in range(min(t.r, p - c) + 1):
                b = p - a - c
                if b < 0 or b > t.s:
                    continue
                mult = comb(t.r, a) * comb(t.s, b)
                if mult == 0:
                    continue
                twists = (mx - p, my - (p - b), mz - (p - a))
                for jx, jy, jz in _product(*j_opts):
                    dx, kx = _block_dim(t.nx, jx, twists[0])
                    if dx == 0:
                        continue
                    dy, ky = _block_dim(t.ny, jy, twists[1])
                    if dy == 0:
                        continue
                    dz, kz = _block_dim(t.nz, jz, twists[2])
                    if dz == 0:
                        continue
                    v = p - (jx + jy + jz)
                    entries.append(TermEntry(v, p, a, b, c, (jx, jy, jz),
                                             dx * dy * dz * mult, (kx, ky, kz)))
    entries.sort(key=lambda e: (-e.v, e.p, e.a, e.b, e.c, e.j))
    return TermTable(t, tuple(m), tuple(entries))


def is_determinantal(t: SystemType, m: DegreeVector) -> tuple[bool, int, int]:
    """Whether the complex for m has K_1, K_0 as its only nonzero modules.

    Returns (flag, dim K_1, dim K_0); the flag also requires the two
    dimensions to be equal and positive (the matrix of the single
    surviving map is then square of that size).
    """
    table = term_table(t, m)
    dim1 = table.dim_at(1)
    dim0 = table.dim_at(0)
    only01 = all(e.v in (0, 1) for e in table.entries)
    return (only01 and dim1 == dim0 and dim1 > 0, dim1, dim0)


def four_degree_vectors(t: SystemType) -> list[DegreeVector]:
    """The four degree vectors known to give determinantal complexes.

    1 and 3 (likewise 2 and 4) are exchanged by swapping the roles of the
    y and z blocks; 1,2 and 3,4 are dual pairs giving transposed matrices.
    The matrix builder uses vector 1 exclusively.
    """
    return [
        (t.ny - 1, -1, t.nx + t.ny - t.r + 1),
        (t.nz + 1, t.nx + t.nz - t.s + 1, -1),
        (t.nz - 1, t.nx + t.nz - t.s + 1, -1),
        (t.ny + 1, -1, t.nx + t.ny - t.r + 1),
    ]


def default_box(t: SystemType) -> tuple[tuple[int, int], tuple[int, int], tuple[int, int]]:
    lo, hi = -t.n - 1, t.n + 1
    return ((lo, hi), (lo, hi), (lo, hi))


def search_degree_vectors(t: SystemType, box) -> list[DegreeVector]:
    """All determinantal degree vectors inside the box (sorted).

    Exploration tool only: the four known vectors are not the only
    determinantal ones and no completeness is claimed.
    """
    (lox, hix), (loy, hiy), (loz, hiz) = box
    found = []
    for m in _product(range(lox, hix + 1), range(loy, hiy + 1), range(loz, hiz + 1)):
        if is_determinantal(t, m)[0]:
            found.append(m)
    found.sort()
    return found


def dual_vector(t: SystemType, m: DegreeVector) -> DegreeVector:
    """The degree vector whose complex is dual to the one of m."""
    base = (t.ny + t.nz, t.nx + t.nz - t.s, t.nx + t.ny - t.r)
    return tuple(b - mi for b, mi in zip(base, m))


def mu(t: SystemType) -> int:
    """Degree of the resultant of the overdetermined system, also the
    size of the Koszul resultant matrix."""
    num = (t.nx + 1) * mhb(t) * (t.r * t.s - t.ny * t.nz + t.r + t.s + 1)
    den = (t.r - t.ny + 1) * (t.s - t.nz + 1)
    q, rem = divmod(num, den)
    if rem:
        raise DomainError(f"resultant degree formula is non-integral for {t}")
    return q
