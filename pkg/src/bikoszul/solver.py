"""Eigenvalue/eigenvector solving of square 2-bilinear systems.

Pipeline: apply a random blockwise coordinate change (so no solution
keeps a zero coordinate and the leading block stays invertible), add a
random trilinear f0, assemble and specialize the Koszul resultant
matrix, split it around the monomial theta = x0 y0 z0, and
eigen-decompose the Schur complement of the trailing block. Each
eigenvalue is (f0 / theta) at one solution; its eigenvector extends to
a kernel vector of the full matrix, which is a rank-1 combination of
dual Veronese forms, so the x and y coordinates drop out as ratios of
its entries. The z block then solves a small linear system, and the
coordinate change is undone.

The Schur complement is computed exactly over the rationals; floating
point enters only at the eigen-decomposition and afterwards.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    BilinearSystem,
    CoordinateChange,
    DomainError,
    Exponent,
    MHPoly,
    ProjectiveSolution,
    SystemType,
    apply_coordinate_change,
    evaluate,
    exponent_basis,
    mhb,
    monomial_basis,
    random_coordinate_change,
    transform_point,
)
from .exactlinalg import SingularMatrixError, schur_complement, to_float
from .koszul import ThetaPartition, assemble_delta1, k1_basis, specialize, theta_partition

EIGEN_CLUSTER_TOL = 1e-7
EXTRACT_ANCHOR_TOL = 1e-9
RESIDUAL_TOL = 1e-6


class SolveError(RuntimeError):
    """Solving failed after all retries (multiplicity or separation failure)."""


class ExtractionError(RuntimeError):
    """Eigenvector block too degenerate to read coordinates off (retry signal)."""


@dataclass
class EigenPair:
    value: complex
    vector: np.ndarray
    clustered: bool = False


@dataclass
class SolveReport:
    """Everything `solve_2bilinear` did: solutions with residuals plus the
    full randomization (A, f0, theta, seed) needed to reproduce the run."""

    type: SystemType
    solutions: list
    eigenpairs: list
    residuals: list
    retries: int
    seed: object
    f0: MHPoly
    theta: Exponent
    change: CoordinateChange


def eigen_schur(matrix, tol: float = EIGEN_CLUSTER_TOL) -> list[EigenPair]:
    """All eigenvalue / right-eigenvector pairs of a dense matrix, sorted
    by (real, imag); pairs closer than tol * (1 + max |value|) to some
    other eigenvalue are flagged as clustered."""
    array = np.asarray(matrix, dtype=complex)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise DomainError("eigen decomposition needs a square matrix")
    if not np.all(np.isfinite(array)):
        raise DomainError("matrix has non-finite entries")
    values, vectors = np.linalg.eig(array)
    order = np.lexsort((values.imag, values.real))
    scale = tol * (1.0 + max(abs(values).max(initial=0.0), 0.0))
    pairs = []
    for k in order:
        vec = vectors[:, k]
        vec = vec / np.linalg.norm(vec)
        anchor = np.argmax(np.abs(vec))
        phase = vec[anchor] / abs(vec[anchor])
        vec = vec / phase
        clustered = any(abs(values[k] - values[j]) < scale for j in range(len(values)) if j != k)
        pairs.append(EigenPair(complex(values[k]), vec, clustered))
    return pairs


def extend_eigenvector(partition: ThetaPartition, spec_float: np.ndarray,
                       vbar) -> np.ndarray:
    """Extend a Schur-complement eigenvector to the kernel direction of
    the full specialized matrix, returned in the unpermuted column order.

    The kernel equation gives the top part as -M11^{-1} M12 vbar (the
    split blocks taken from the partition-permuted matrix).
    """
    k = partition.split
    perm = spec_float[np.ix_(partition.row_perm, partition.col_perm)]
    m11 = perm[:k, :k]
    m12 = perm[:k, k:]
    vbar = np.asarray(vbar, dtype=complex)
    top = -np.linalg.solve(m11, m12 @ vbar)
    stacked = np.concatenate([top, vbar])
    out = np.empty(partition.size, dtype=complex)
    for pos, col in enumerate(partition.col_perm):
        out[col] = stacked[pos]
    return out


def extract_xy(vector, t: SystemType, tol: float = EXTRACT_ANCHOR_TOL):
    """Read (alpha_x, alpha_y) off a kernel vector in the k1 basis order.

    The vector is a rank-1 combination per exterior index set: the block
    with the largest entry gives alpha_x as its dominant dual-y column
    (the dual form over x has coefficient (x_i/x_0)(alpha) at dx_i), and
    alpha_y as ratios against the pure-y0 dual exponent along the
    dominant dual-x row. Blocks of dual-y degree 0 carry no y
    information, so y falls back to the best higher-degree block.
    """
    basis = k1_basis(t)
    if len(vector) != len(basis):
        raise DomainError("vector length does not match the k1 basis")
    groups: dict = {}
    for elem, value in zip(basis, vector):
        groups.setdefault((elem.block, elem.iset), {})[(elem.dx, elem.dy)] = value
    overall = max(abs(v) for v in vector)
    if overall == 0:
        raise ExtractionError("zero vector")

    def block_max(entries):
        return max(abs(v) for v in entries.values())

    best_key = max(groups, key=lambda key: block_max(groups[key]))
    alpha_x = _extract_x(groups[best_key], t, tol, overall)

    y_candidates = {key: g for key, g in groups.items() if _dy_degree(t, key[0]) >= 1}
    if t.ny == 0:
        alpha_y = (_one_like(vector[0]),)
    elif not y_candidates:
        raise ExtractionError("no block carries dual-y information")
    else:
        best_y = max(y_candidates, key=lambda key: block_max(groups[key]))
        alpha_y = _extract_y(groups[best_y], t, _dy_degree(t, best_y[0]), tol, overall)
    return alpha_x, alpha_y


def _dy_degree(t: SystemType, block: str) -> int:
    return t.r - t.ny + (1 if block == "L12" else 0)


def _one_like(value):
    return Fraction(1) if isinstance(value, (Fraction, int)) else 1.0 + 0j


def _extract_x(entries, t: SystemType, tol, overall):
    dxs = monomial_basis(t.nx, 1)
    dys = sorted({dy for _, dy in entries})
    best_dy = max(dys, key=lambda dy: max(abs(entries.get((dx, dy), 0)) for dx in dxs))
    column = [entries.get((dx, best_dy), 0) for dx in dxs]
    if max(abs(v) for v in column) <= tol * overall:
        raise ExtractionError("degenerate dual-y column")
    return _normalize_block(column, tol)


def _extract_y(entries, t: SystemType, d: int, tol, overall):
    dxs = monomial_basis(t.nx, 1)
    tau = (d,) + (0,) * t.ny
    best_dx = max(dxs, key=lambda dx: max(abs(v) for (dxe, _), v in entries.items() if dxe == dx))
    anchor = entries.get((best_dx, tau), 0)
    if abs(anchor) <= tol * overall:
        raise ExtractionError("anchor coefficient too small")
    coords = [_one_like(anchor)]
    for j in range(1, t.ny + 1):
        shifted = tuple((d - 1) if i == 0 else (1 if i == j else 0) for i in range(t.ny + 1))
        coords.append(entries.get((best_dx, shifted), 0) / anchor)
    return tuple(coords)


def _normalize_block(coords, tol):
    top = max(abs(v) for v in coords)
    for v in coords:
        if abs(v) > tol * top:
            return tuple(c / v for c in coords)
    raise ExtractionError("cannot normalize block")


def solve_z(sys: BilinearSystem, alpha_x, alpha_y, tol: float = 1e-8):
    """The unique z making (alpha_x, alpha_y, z) a solution: kernel
    direction of the stacked linear forms f_j(alpha_x, alpha_y) for the
    S(1,0,1) equations (the S(1,1,0) ones are constants that already
    vanish there)."""
    t = sys.type
    if t.nz == 0:
        return (1.0 + 0j,)
    ax = np.asarray(alpha_x, dtype=complex)
    ay = np.asarray(alpha_y, dtype=complex)
    rows = []
    for j in range(t.r, t.n):
        rows.append(_z_row(sys.f[j], ax, ay))
    a = np.array(rows, dtype=complex)
    _, sv, vh = np.linalg.svd(a)
    padded = np.zeros(t.nz + 1)
    padded[:len(sv)] = sv
    scale = max(1.0, padded[0])
    if padded[t.nz - 1] <= tol * scale:
        raise ExtractionError("z-system rank below nz: multiple z-solutions")
    return tuple(vh[-1].conj())


def _z_row(poly: MHPoly, ax, ay):
    nz = poly.nvars[2] - 1
    row = np.zeros(nz + 1, dtype=complex)
    for (sx, sy, sz), coeff in poly.terms.items():
        value = complex(coeff)
        for e, c in zip(sx, ax):
            if e:
                value *= c ** e
        for e, c in zip(sy, ay):
            if e:
                value *= c ** e
        row[sz.index(1)] += value
    return row


def default_theta(t: SystemType) -> Exponent:
    return tuple((1,) + (0,) * n_t for n_t in t.dims)


def choose_f0_and_theta(t: SystemType, seed, coeff_bound: int = 10):
    """Random trilinear f0 plus the separating monomial theta = x0 y0 z0;
    the theta coefficient is forced nonzero."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    theta = default_theta(t)
    terms = {}
    for exp in exponent_basis(t.nvars, (1, 1, 1)):
        terms[exp] = rng.randint(-coeff_bound, coeff_bound)
    while terms[theta] == 0:
        terms[theta] = rng.randint(-coeff_bound, coeff_bound)
    return MHPoly(t.nvars, (1, 1, 1), terms), theta


def residual(sys: BilinearSystem, sol: ProjectiveSolution) -> float:
    """max_i |f_i(sol)| / ||f_i|| with every block scaled to unit norm."""
    blocks = []
    for block in sol.blocks:
        arr = np.asarray([complex(c) for c in block])
        blocks.append(tuple(arr / np.linalg.norm(arr)))
    point = ProjectiveSolution(*blocks)
    worst = 0.0
    for poly in sys.f:
        norm = float(np.sqrt(sum(abs(complex(c)) ** 2 for c in poly.terms.values())))
        worst = max(worst, abs(evaluate(poly, point)) / max(norm, 1.0))
    return worst


def _realify(sol: ProjectiveSolution, tol: float = 1e-8) -> ProjectiveSolution:
    """Report real coordinates when every imaginary part is negligible."""
    coords = [c for block in sol.blocks for c in block]
    top = max(abs(c) for c in coords)
    if all(abs(complex(c).imag) <= tol * top for c in coords):
        return ProjectiveSolution(*[tuple(complex(c).real for c in block)
                                    for block in sol.blocks])
    return sol


def solve_2bilinear(sys: BilinearSystem, seed=0, tol: float = RESIDUAL_TOL,
                    max_retries: int = 10) -> SolveReport:
    """Solve a square 2-bilinear system with finite, multiplicity-free
    solution set; any f0 already attached to the input is ignored.

    Retries with fresh randomization on the structural failure signals
    (singular leading block, clustered eigenvalues, degenerate
    extraction); residuals are reported per solution, not retried.
    """
    t = sys.type
    matrix = assemble_delta1(t)
    count = mhb(t)
    last_failure = None
    for attempt in range(max_retries):
        rng = random.Random(f"{seed}:{attempt}")
        change = random_coordinate_change(t, rng)
        transformed = apply_coordinate_change(BilinearSystem(t, sys.f), change)
        f0, theta = choose_f0_and_theta(t, rng)
        spec = specialize(matrix, transformed.with_f0(f0))
        partition = theta_partition(matrix, theta)
        try:
            schur = schur_complement(partition.apply(spec), partition.split)
        except SingularMatrixError as exc:
            last_failure = f"attempt {attempt}: {exc}"
            continue
        pairs = eigen_schur(to_float(schur).astype(complex))
        if any(pair.clustered for pair in pairs):
            last_failure = f"attempt {attempt}: clustered eigenvalues"
            continue
        spec_float = to_float(spec)
        try:
            solutions, residuals = _recover_all(
                transformed.with_f0(f0), partition, spec_float, pairs, change, sys)
        except ExtractionError as exc:
            last_failure = f"attempt {attempt}: {exc}"
            continue
        return SolveReport(
            type=t,
            solutions=solutions,
            eigenpairs=pairs,
            residuals=residuals,
            retries=attempt,
            seed=seed,
            f0=f0,
            theta=theta,
            change=change,
        )
    raise SolveError(
        f"no solve after {max_retries} attempts (multiplicity or separation "
        f"failure; expected {count} simple solutions); last: {last_failure}")


def _recover_all(transformed, partition, spec_float, pairs, change, original):
    solutions = []
    residuals = []
    for pair in pairs:
        full = extend_eigenvector(partition, spec_float, pair.vector)
        ax, ay = extract_xy(full, transformed.type)
        az = solve_z(transformed, ax, ay)
        back = transform_point(change, ProjectiveSolution(tuple(ax), tuple(ay), tuple(az)))
        back = _realify(back.normalized(tol=1e-12))
        solutions.append(back.normalized(tol=1e-12))
        residuals.append(residual(original, back))
    return solutions, residuals
