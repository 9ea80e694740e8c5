import random

import pytest
from hypothesis import strategies as st

from dgcat.algebra import Quiver, path_algebra
from dgcat.complexes import Complex
from dgcat.linalg import GF, QQ, Matrix


@pytest.fixture(scope="session")
def a2():
    return path_algebra(QQ, Quiver(["1", "2"], {"a": ("1", "2")}), [], 1, name="A2")


@pytest.fixture(scope="session")
def two_cycle():
    Q = Quiver(["1", "2"], {"a": ("1", "2"), "b": ("2", "1")})
    return path_algebra(QQ, Q, [{"a*b": 1}], 2, name="two-cycle")


fields = st.sampled_from([QQ, GF(2), GF(3), GF(5)])


def _unitriangular(F, n, rng):
    rows = [[F(1) if i == j else (F(rng.randint(-2, 2)) if j > i else F(0)) for j in range(n)] for i in range(n)]
    inv = [[F(0)] * n for _ in range(n)]
    # back substitution for the inverse of an upper unitriangular matrix
    for c in range(n):
        for i in range(n - 1, -1, -1):
            s = F(1) if i == c else F(0)
            for j in range(i + 1, n):
                s = F.norm(s - rows[i][j] * inv[j][c])
            inv[i][c] = s
    return Matrix.from_dense(F, rows, n), Matrix.from_dense(F, inv, n)


def random_complex(F, seed: int, lo: int = -2, hi: int = 2, size: int = 3) -> Complex:
    """Direct sum of stalks and two-term acyclic pieces, scrambled by basis changes."""
    rng = random.Random(seed)
    stalks = {i: rng.randint(0, size) for i in range(lo, hi + 1)}
    pieces = {i: rng.randint(0, size) for i in range(lo, hi)}
    dims = {i: stalks[i] + pieces.get(i, 0) + pieces.get(i - 1, 0) for i in range(lo, hi + 1)}
    # basis in degree i: stalks, then sources of pieces i -> i+1, then targets of pieces i-1 -> i
    d = {}
    for i in range(lo, hi):
        n, m = dims[i], dims[i + 1]
        cols = []
        for k in range(n):
            if stalks[i] <= k < stalks[i] + pieces[i]:
                cols.append({stalks[i + 1] + pieces.get(i + 1, 0) + (k - stalks[i]): F(1)})
            else:
                cols.append({})
        d[i] = Matrix.from_columns(F, m, cols)
    base = {i: _unitriangular(F, dims[i], rng) for i in dims if dims[i]}
    for i in list(d):
        if dims[i] and dims[i + 1]:
            P, _ = base[i + 1]
            _, Qinv = base[i]
            d[i] = P @ d[i] @ Qinv
    c = Complex(F, dims, d)
    c.expected_h = {i: n for i, n in stalks.items() if n}
    return c


complex_seeds = st.integers(min_value=0, max_value=10_000)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
