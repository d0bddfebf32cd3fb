from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from bayesgrain.lp import LinearProgram, LPStatus, solve

F = Fraction


def test_solve_exact_optimum() -> None:
    # maximize x + 2y s.t. x + y + s = 4, x + 3y + t = 6
    program = LinearProgram(
        objective=(F(1), F(2), F(0), F(0)),
        equalities=((F(1), F(1), F(1), F(0)), (F(1), F(3), F(0), F(1))),
        rhs=(F(4), F(6)),
    )
    solution = solve(program)
    assert solution.status is LPStatus.OPTIMAL
    assert solution.value == 5
    assert solution.x == (F(3), F(1), F(0), F(0))


def test_solve_infeasible() -> None:
    program = LinearProgram(
        objective=(F(0), F(0)),
        equalities=((F(1), F(1)),),
        rhs=(F(-1),),
    )
    assert solve(program).status is LPStatus.INFEASIBLE


def test_solve_unbounded() -> None:
    program = LinearProgram(
        objective=(F(1), F(0)),
        equalities=((F(1), F(-1)),),
        rhs=(F(1),),
    )
    assert solve(program).status is LPStatus.UNBOUNDED


def test_solve_redundant_rows() -> None:
    program = LinearProgram(
        objective=(F(-1), F(-1)),
        equalities=((F(1), F(1)), (F(2), F(2))),
        rhs=(F(1), F(2)),
    )
    solution = solve(program)
    assert solution.status is LPStatus.OPTIMAL
    assert solution.value == -1


def test_solve_degenerate_barycenter() -> None:
    # weights w with w1*(4/5, 1/5) + w2*(1, 0) = (19/20, 1/20), w1 + w2 = 1
    program = LinearProgram(
        objective=(F(0), F(0)),
        equalities=((F(4, 5), F(1)), (F(1, 5), F(0)), (F(1), F(1))),
        rhs=(F(19, 20), F(1, 20), F(1)),
    )
    solution = solve(program)
    assert solution.status is LPStatus.OPTIMAL
    assert solution.x == (F(1, 4), F(3, 4))


def test_linear_program_shape() -> None:
    with pytest.raises(ValueError):
        LinearProgram(objective=(F(1),), equalities=((F(1), F(1)),), rhs=(F(1),))
    with pytest.raises(ValueError):
        LinearProgram(objective=(F(1),), equalities=((F(1),),), rhs=(F(1), F(2)))


def test_solve_float_agrees_with_scipy(rng: np.random.Generator) -> None:
    for _ in range(50):
        m, n = 3, 6
        a = rng.integers(0, 5, size=(m, n)).astype(float)
        b = a @ rng.integers(0, 3, size=n).astype(float)
        c = -rng.integers(1, 5, size=n).astype(float)
        program = LinearProgram(
            tuple(c), tuple(tuple(row) for row in a), tuple(b)
        )
        ours = solve(program, exact=False)
        reference = linprog(-c, A_eq=a, b_eq=b, bounds=(0, None), method="highs")
        assert ours.status is LPStatus.OPTIMAL
        assert reference.status == 0
        assert ours.value == pytest.approx(-reference.fun, abs=1e-9)
        assert ours.x is not None
        np.testing.assert_allclose(a @ np.array(ours.x), b, atol=1e-9)
