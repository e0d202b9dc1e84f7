import random
from fractions import Fraction

import pytest

from bikoszul import core, exactlinalg, selftest


@pytest.fixture(scope="session")
def paper_system():
    return selftest.paper_system()


@pytest.fixture(scope="session")
def paper_type(paper_system):
    return paper_system.type


def _kernel_poly(nvars, degree, points, rng, bound=9):
    """Random polynomial of the multidegree vanishing at all given points."""
    exps = core.exponent_basis(nvars, degree)
    rows = []
    for point in points:
        rows.append([
            Fraction(core.evaluate(core.monomial_poly(nvars, degree, e), point))
            for e in exps
        ])
    basis = exactlinalg.nullspace(exactlinalg.ExactMatrix(rows))
    while True:
        combo = [rng.randint(-bound, bound) for _ in basis]
        coeffs = [sum(c * vec[j] for c, vec in zip(combo, basis)) for j in range(len(exps))]
        if any(coeffs):
            break
    return core.MHPoly(nvars, degree, dict(zip(exps, coeffs)))


@pytest.fixture
def two_root_builder():
    """Builds a type-(1,1,1;2,1) system whose solution set is exactly the
    two given points: f1, f2 span the bilinear forms vanishing at both
    (x, y) pairs, f3 vanishes at both (x, z) pairs. Degenerate draws
    (extra or positive-dimensional solutions) are rejected by exhaustive
    solving mod 31."""

    def build(alpha, beta, seed):
        from bikoszul import oracle

        t = core.SystemType(1, 1, 1, 2, 1)
        rng = random.Random(seed)
        reduce = exactlinalg.fraction_mod_p
        want = sorted(
            tuple(tuple(reduce(v, 31) for v in block) for block in p.normalized().blocks)
            for p in (alpha, beta)
        )
        while True:
            f1 = _kernel_poly(t.nvars, (1, 1, 0), [alpha, beta], rng)
            f2 = _kernel_poly(t.nvars, (1, 1, 0), [alpha, beta], rng)
            f3 = _kernel_poly(t.nvars, (1, 0, 1), [alpha, beta], rng)
            sys_ = core.BilinearSystem(t, (f1, f2, f3))
            sols = oracle.ff_solve(sys_, 31)
            got = sorted((s.x, s.y, s.z) for s in sols)
            if got == want:
                return sys_

    return build
