"""Eigen decomposition, eigenvector extension and extraction, and the
full solving pipeline."""

import random
from fractions import Fraction

import numpy as np
import pytest

from bikoszul import core, exactlinalg, koszul, oracle, selftest, solver
from bikoszul.core import BilinearSystem, ProjectiveSolution, SystemType

THETA = ((1, 0), (1, 0), (1, 0))


def paper_partition(paper_system):
    matrix = koszul.assemble_delta1(paper_system.type)
    part = koszul.theta_partition(matrix, THETA)
    spec = koszul.specialize(matrix, paper_system)
    return matrix, part, spec


def test_eigen_schur_paper_values():
    pairs = solver.eigen_schur([[5, -2], [4, -1]])
    values = [p.value for p in pairs]
    assert abs(values[0] - 1) < 1e-10 and abs(values[1] - 3) < 1e-10
    unit = pairs[0].vector
    assert abs(unit[1] / unit[0] - 2) < 1e-10  # proportional to (1, 2)
    assert not any(p.clustered for p in pairs)
    ident = solver.eigen_schur(np.eye(3))
    assert all(p.clustered for p in ident)
    assert all(abs(p.value - 1) < 1e-12 for p in ident)


def test_extend_eigenvector_matches_printed_vector(paper_system):
    matrix, part, spec = paper_partition(paper_system)
    full = solver.extend_eigenvector(part, exactlinalg.to_float(spec), [1.0, 2.0])
    cidx = {lab: j for j, lab in enumerate(matrix.cols)}
    got = np.array([full[cidx[selftest.PRINTED_COLS[c]]] for c in selftest.COL_ORDER])
    want = np.array(selftest.PRINTED_EXTENDED_VECTOR, dtype=complex)
    factor = got[0] / want[0]
    assert np.max(np.abs(got - factor * want)) < 1e-8 * np.max(np.abs(want))
    zero = solver.extend_eigenvector(part, exactlinalg.to_float(spec), [0.0, 0.0])
    assert np.all(zero == 0)


def test_extended_vector_is_kernel_of_shifted_matrix(paper_system):
    # M(g) v = 0 for g = f0 - lambda theta at the eigenvalue lambda = 1
    matrix, part, spec = paper_partition(paper_system)
    t = paper_system.type
    full = solver.extend_eigenvector(part, exactlinalg.to_float(spec), [1.0, 2.0])
    g0 = core.add(paper_system.f0,
                  core.scale(core.monomial_poly(t.nvars, (1, 1, 1), THETA), -1))
    shifted = exactlinalg.to_float(koszul.specialize(matrix, paper_system.with_f0(g0)))
    residual = np.linalg.norm(shifted @ full)
    assert residual < 1e-8 * np.linalg.norm(shifted) * np.linalg.norm(full)


def test_extract_xy_from_paper_vector(paper_system):
    matrix, part, spec = paper_partition(paper_system)
    t = paper_system.type
    full = solver.extend_eigenvector(part, exactlinalg.to_float(spec), [1.0, 2.0])
    ax, ay = solver.extract_xy(full, t)
    assert abs(ax[1] / ax[0] - 3) < 1e-9
    assert abs(ay[1] / ay[0] - 2) < 1e-9


def test_extract_xy_recovers_synthetic_rho_exactly():
    # a vector that is exactly rho_alpha(lambda) gives alpha back, exactly
    for t in (SystemType(1, 1, 1, 2, 1), SystemType(2, 1, 1, 2, 2)):
        rng = random.Random(t.n)
        ax = tuple(Fraction(rng.randint(1, 7)) for _ in range(t.nx + 1))
        ay = tuple(Fraction(rng.randint(1, 7)) for _ in range(t.ny + 1))
        lam = [Fraction(rng.randint(1, 5)) for _ in oracle.rho_slots(t)]
        vec = oracle.build_rho(t, ax, ay, lam)
        got_x, got_y = solver.extract_xy(vec, t)
        assert tuple(got_x) == tuple(c / ax[0] for c in ax)
        assert tuple(got_y) == tuple(c / ay[0] for c in ay)


def test_extract_xy_rejects_zero_vector(paper_type):
    with pytest.raises(solver.ExtractionError):
        solver.extract_xy([0.0] * 10, paper_type)


def test_solve_z_cases(paper_system):
    az = solver.solve_z(paper_system, (1.0, 3.0), (1.0, 2.0))
    assert abs(az[1] / az[0] - 3) < 1e-8
    t0 = SystemType(1, 1, 0, 1, 1)
    sys0 = core.random_system(t0, 4)
    assert solver.solve_z(sys0, (1.0, 2.0), (1.0, 1.0)) == (1.0 + 0j,)
    # planted root reproduces the planted z direction
    t = SystemType(1, 1, 1, 2, 1)
    alpha = ProjectiveSolution((1, 2), (1, 3), (2, 5))
    sys_ = core.planted_root_system(t, alpha, 11)
    az = solver.solve_z(sys_, (1.0, 2.0), (1.0, 3.0))
    assert abs(az[1] / az[0] - 2.5) < 1e-8


def test_choose_f0_and_theta():
    t = SystemType(1, 1, 1, 2, 1)
    f0a, theta_a = solver.choose_f0_and_theta(t, 5)
    f0b, theta_b = solver.choose_f0_and_theta(t, 5)
    f0c, _ = solver.choose_f0_and_theta(t, 6)
    assert f0a == f0b and theta_a == theta_b == THETA
    assert f0a != f0c
    assert f0a.coefficient(THETA) != 0


def test_paper_f0_separates_the_solutions(paper_system):
    t = paper_system.type
    theta_poly = core.monomial_poly(t.nvars, (1, 1, 1), THETA)
    alpha1 = ProjectiveSolution((1, 1), (1, 1), (1, 1))
    alpha2 = ProjectiveSolution((1, 3), (1, 2), (1, 3))
    values = {
        core.evaluate(paper_system.f0, a) / core.evaluate(theta_poly, a)
        for a in (alpha1, alpha2)
    }
    assert values == {3, 1}


def test_solve_paper_system(paper_system):
    report = solver.solve_2bilinear(BilinearSystem(paper_system.type, paper_system.f), seed=0)
    assert len(report.solutions) == 2
    assert max(report.residuals) < 1e-8
    normalized = sorted(
        tuple(tuple(round(complex(c).real, 6) for c in block) for block in sol.blocks)
        for sol in report.solutions
    )
    assert normalized == [
        ((1.0, 1.0), (1.0, 1.0), (1.0, 1.0)),
        ((1.0, 3.0), (1.0, 2.0), (1.0, 3.0)),
    ]


def test_solve_finds_planted_roots():
    t = SystemType(1, 1, 1, 2, 1)
    alpha = ProjectiveSolution((1, 2), (1, -1), (1, 3))
    for seed in range(10):
        sys_ = core.planted_root_system(t, alpha, seed)
        report = solver.solve_2bilinear(sys_, seed=seed)
        hits = [
            sol for sol, res in zip(report.solutions, report.residuals)
            if res < 1e-8 and all(
                max(abs(complex(c) - complex(w)) for c, w in zip(b, wb)) < 1e-6
                for b, wb in zip(sol.normalized(1e-9).blocks, alpha.blocks))
        ]
        assert hits, f"seed {seed} lost the planted root"


def test_solve_larger_type_counts_and_residuals():
    t = SystemType(2, 1, 1, 2, 2)
    for seed in range(3):
        sys_ = core.random_system(t, seed)
        report = solver.solve_2bilinear(sys_, seed=seed)
        assert len(report.solutions) == core.mhb(t) == 4
        assert max(report.residuals) < 1e-6


def test_eigenvalues_are_f0_over_theta_at_roots():
    t = SystemType(1, 1, 1, 2, 1)
    alpha = ProjectiveSolution((1, 2), (1, 3), (1, -2))
    matrix = koszul.assemble_delta1(t)
    part = koszul.theta_partition(matrix, THETA)
    theta_poly = core.monomial_poly(t.nvars, (1, 1, 1), THETA)
    for seed in range(5):
        sys_ = core.planted_root_system(t, alpha, seed)
        f0, _ = solver.choose_f0_and_theta(t, seed + 100)
        spec = part.apply(koszul.specialize(matrix, sys_.with_f0(f0)))
        schur = exactlinalg.schur_complement(spec, part.split)
        pairs = solver.eigen_schur(exactlinalg.to_float(schur))
        expected = complex(core.evaluate(f0, alpha)) / complex(core.evaluate(theta_poly, alpha))
        assert min(abs(p.value - expected) for p in pairs) < 1e-8 * (1 + abs(expected))


def test_each_eigenvalue_kills_the_determinant(two_root_builder):
    # with both roots rational, both eigenvalues are rational and the
    # shifted system has an exactly vanishing determinant
    alpha = ProjectiveSolution((1, 2), (1, -1), (1, 3))
    beta = ProjectiveSolution((1, -3), (1, 2), (1, 1))
    t = SystemType(1, 1, 1, 2, 1)
    matrix = koszul.assemble_delta1(t)
    part = koszul.theta_partition(matrix, THETA)
    theta_poly = core.monomial_poly(t.nvars, (1, 1, 1), THETA)
    for seed in range(3):
        sys_ = two_root_builder(alpha, beta, seed)
        f0, _ = solver.choose_f0_and_theta(t, seed)
        spec = part.apply(koszul.specialize(matrix, sys_.with_f0(f0)))
        schur = exactlinalg.schur_complement(spec, part.split)
        pairs = solver.eigen_schur(exactlinalg.to_float(schur))
        for pair in pairs:
            lam = Fraction(pair.value.real).limit_denominator(10 ** 6)
            g0 = core.add(f0, core.scale(theta_poly, -lam))
            assert exactlinalg.det(koszul.specialize(matrix, sys_.with_f0(g0))) == 0


def test_schur_complement_is_diagonalizable_for_simple_roots():
    t = SystemType(1, 1, 1, 2, 1)
    matrix = koszul.assemble_delta1(t)
    part = koszul.theta_partition(matrix, THETA)
    for seed in range(5):
        sys_ = core.random_system(t, seed)
        f0, _ = solver.choose_f0_and_theta(t, seed)
        spec = part.apply(koszul.specialize(matrix, sys_.with_f0(f0)))
        schur = exactlinalg.schur_complement(spec, part.split)
        pairs = solver.eigen_schur(exactlinalg.to_float(schur))
        assert len(pairs) == core.mhb(t)
        vecs = np.column_stack([p.vector for p in pairs])
        assert not any(p.clustered for p in pairs)
        assert np.linalg.cond(vecs) < 1e8


def test_extended_vector_lies_in_rho_span(two_root_builder):
    alpha = ProjectiveSolution((1, 2), (1, -1), (1, 3))
    beta = ProjectiveSolution((1, -3), (1, 2), (1, 1))
    t = SystemType(1, 1, 1, 2, 1)
    sys_ = two_root_builder(alpha, beta, 1)
    report = solver.solve_2bilinear(sys_, seed=2)
    matrix = koszul.assemble_delta1(t)
    part = koszul.theta_partition(matrix, report.theta)
    transformed = core.apply_coordinate_change(
        BilinearSystem(t, sys_.f), report.change).with_f0(report.f0)
    spec_float = exactlinalg.to_float(koszul.specialize(matrix, transformed))
    slots = oracle.rho_slots(t)
    for pair in report.eigenpairs:
        full = solver.extend_eigenvector(part, spec_float, pair.vector)
        ax, ay = solver.extract_xy(full, t)
        basis = np.column_stack([
            np.array([float(v) for v in oracle.build_rho(
                t,
                [Fraction(c.real).limit_denominator(10 ** 6) for c in ax],
                [Fraction(c.real).limit_denominator(10 ** 6) for c in ay],
                [1 if i == k else 0 for i in range(len(slots))])], dtype=complex)
            for k in range(len(slots))
        ])
        fit = np.linalg.lstsq(basis, full, rcond=None)[0]
        misfit = np.linalg.norm(basis @ fit - full)
        assert misfit < 1e-6 * np.linalg.norm(full)


def test_complex_solutions_are_first_class():
    t = SystemType(1, 1, 1, 2, 1)
    sys_ = core.random_system(t, 4)  # this draw has a conjugate pair
    report = solver.solve_2bilinear(sys_, seed=4)
    assert max(report.residuals) < 1e-8
    imags = [max(abs(complex(c).imag) for b in sol.blocks for c in b)
             for sol in report.solutions]
    assert min(imags) > 1e-3  # both genuinely complex
    # the two solutions are conjugates of each other (real input system)
    a, b = [sol.normalized(1e-9) for sol in report.solutions]
    for block_a, block_b in zip(a.blocks, b.blocks):
        for ca, cb in zip(block_a, block_b):
            assert abs(complex(ca).conjugate() - complex(cb)) < 1e-8


def test_solve_edge_shaped_types():
    # blocks of projective dimension zero and both r < s and r > s
    shapes = [SystemType(1, 1, 0, 1, 1), SystemType(1, 0, 1, 1, 1),
              SystemType(0, 1, 1, 1, 1), SystemType(2, 0, 1, 1, 2),
              SystemType(1, 2, 1, 3, 1), SystemType(0, 2, 2, 2, 2)]
    for t in shapes:
        sys_ = core.random_system(t, 1)
        report = solver.solve_2bilinear(sys_, seed=1)
        assert len(report.solutions) == core.mhb(t)
        assert max(report.residuals) < 1e-6


def test_solver_error_reports_failure():
    # a system with a positive-dimensional solution set keeps every
    # randomization clustered or degenerate
    t = SystemType(1, 1, 1, 2, 1)
    nv = t.nvars
    f1 = core.MHPoly(nv, (1, 1, 0), {((1, 0), (1, 0), (0, 0)): 1})
    f2 = core.MHPoly(nv, (1, 1, 0), {((1, 0), (1, 0), (0, 0)): 2})
    f3 = core.MHPoly(nv, (1, 0, 1), {((1, 0), (0, 0), (1, 0)): 1})
    degenerate = BilinearSystem(t, (f1, f2, f3))
    with pytest.raises(solver.SolveError):
        solver.solve_2bilinear(degenerate, seed=0, max_retries=3)
