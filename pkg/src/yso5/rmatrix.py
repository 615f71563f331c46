"""Rational braid-form R-matrix of so(N) and Yang-Baxter checks.

Labels of the N-dim space run over ``(N-1)/2, ..., -(N-1)/2`` in that
order, so for N = 5 the basis order is ``(2, 1, 0, -1, -2)``.  On
``V (x) V`` the pair ``(a, b)`` sits at index ``pos(a) * N + pos(b)``.

    P^{ab}_{cd} = d_ad d_bc,  I^{ab}_{cd} = d_ac d_bd,  A^{ab}_{cd} = d_{a,-b} d_{c,-d}

The braid R-matrix is the quadratic polynomial

    R(u) = u^2 P + u (q1 P + x A + q2 I) + q1 q2 I,   q1 = (1 - N/2) x,  q2 = -x,

which for N = 5 is ``u^2 P + u x (A - I - 3/2 P) + 3/2 x^2 I``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product

from .algebra_core import Matrix, Scalar, as_scalar, kron

__all__ = [
    "BlockMatrices",
    "RCheck",
    "YBEReport",
    "UnitarityReport",
    "GridError",
    "build_blocks",
    "build_rcheck",
    "build_rcheck_general",
    "ybe_check",
    "unitarity_check",
    "default_grid",
    "labels_for",
    "drop_a_term",
    "scale_a_term",
]


class GridError(ValueError):
    """The sample grid cannot certify a polynomial identity."""


def labels_for(N: int) -> tuple:
    if N < 3 or N % 2 == 0:
        raise ValueError(f"N must be odd and at least 3, got {N}")
    half = (N - 1) // 2
    return tuple(range(half, -half - 1, -1))


@dataclass(frozen=True)
class BlockMatrices:
    """``P``, ``A`` and ``I`` on ``V (x) V`` for ``V = C^N``."""

    N: int
    labels: tuple
    P: Matrix = field(repr=False)
    A: Matrix = field(repr=False)
    I: Matrix = field(repr=False)

    def index(self, a: int, b: int) -> int:
        pos = {l: k for k, l in enumerate(self.labels)}
        return pos[a] * self.N + pos[b]


def build_blocks(N: int) -> BlockMatrices:
    """Permutation, identity and ``A`` blocks for odd ``N >= 3``."""
    labels = labels_for(N)
    pos = {l: k for k, l in enumerate(labels)}
    p_entries, a_entries = {}, {}
    for a, b in product(labels, repeat=2):
        row = pos[a] * N + pos[b]
        # P swaps the two factors; A pairs (a, -a) with (c, -c)
        p_entries[(row, pos[b] * N + pos[a])] = 1
        if a == -b:
            for c in labels:
                a_entries[(row, pos[c] * N + pos[-c])] = 1
    n = N * N
    return BlockMatrices(N, labels, Matrix.from_entries((n, n), p_entries),
                         Matrix.from_entries((n, n), a_entries), Matrix.identity(n))


@dataclass(frozen=True)
class RCheck:
    """``R(u) = u^2 coeff2 + u coeff1 + coeff0``."""

    N: int
    x: Scalar
    coeff2: Matrix = field(repr=False)
    coeff1: Matrix = field(repr=False)
    coeff0: Matrix = field(repr=False)

    def __call__(self, u) -> Matrix:
        u = as_scalar(u)
        return self.coeff2 * (u * u) + self.coeff1 * u + self.coeff0

    def coefficients(self) -> tuple:
        return (self.coeff0, self.coeff1, self.coeff2)


def build_rcheck(N: int, x) -> RCheck:
    """Braid R-matrix; N = 5 uses the closed form written in ``A, I, P``."""
    x = as_scalar(x)
    blocks = build_blocks(N)
    if N != 5:
        return build_rcheck_general(N, x)
    P, A, I = blocks.P, blocks.A, blocks.I
    c1 = (A - I - P * Scalar(Fraction(3, 2))) * x
    c0 = I * (Scalar(Fraction(3, 2)) * x * x)
    return RCheck(5, x, P, c1, c0)


def build_rcheck_general(N: int, x) -> RCheck:
    """General so(N) family with ``q1 = (1 - N/2) x`` and ``q2 = -x``."""
    x = as_scalar(x)
    blocks = build_blocks(N)
    q1 = Scalar(1 - Fraction(N, 2)) * x
    q2 = -x
    c1 = blocks.P * q1 + blocks.A * x + blocks.I * q2
    return RCheck(N, x, blocks.P, c1, blocks.I * (q1 * q2))


@dataclass(frozen=True)
class YBEReport:
    ok: bool
    points: int
    witness: dict | None = None


def default_grid(size: int = 7) -> list:
    """Full ``size x size`` grid of distinct, nonsymmetric sample values."""
    base = [Scalar(v) for v in ("-3", "-2", "-1", "1/3", "1", "2", "5/2",
                                 "7/2", "-5/3", "9/2")]
    if size > len(base):
        raise GridError(f"default grid supports at most {len(base)} values")
    us = base[:size]
    vs = [v + Scalar("1/7") for v in base[:size]]
    return [(u, v) for u in us for v in vs]


def _validate_grid(grid, minimum=7):
    grid = [(as_scalar(u), as_scalar(v)) for u, v in grid]
    us = {u for u, _ in grid}
    vs = {v for _, v in grid}
    if len(us) < minimum or len(vs) < minimum:
        raise GridError(
            f"grid needs at least {minimum} distinct u and v values, got {len(us)} and {len(vs)}")
    missing = [(u, v) for u in us for v in vs if (u, v) not in set(grid)]
    if missing:
        raise GridError(f"grid is not a full product; missing {len(missing)} points")
    return grid


def ybe_check(r: RCheck, grid=None) -> YBEReport:
    """Braid Yang-Baxter equation on every grid point.

        R12(u) R23(u+v) R12(v) = R23(v) R12(u+v) R23(u)

    Each side has degree at most 6 in either variable, so a full grid of
    seven distinct values per variable certifies the polynomial identity.
    On failure the witness names the point and the first differing entry.
    """
    grid = _validate_grid(default_grid() if grid is None else grid)
    eye = Matrix.identity(r.N)
    cache12, cache23 = {}, {}

    def r12(w):
        if w not in cache12:
            cache12[w] = kron(r(w), eye)
        return cache12[w]

    def r23(w):
        if w not in cache23:
            cache23[w] = kron(eye, r(w))
        return cache23[w]

    for u, v in grid:
        lhs = r12(u) @ r23(u + v) @ r12(v)
        rhs = r23(v) @ r12(u + v) @ r23(u)
        diff = lhs - rhs
        if not diff.is_zero():
            (i, j), _ = next(iter(diff.items()))
            return YBEReport(False, len(grid), {
                "u": str(u), "v": str(v), "row": i, "col": j,
                "lhs": str(lhs[i, j]), "rhs": str(rhs[i, j]),
            })
    return YBEReport(True, len(grid))


@dataclass(frozen=True)
class UnitarityReport:
    ok: bool
    coefficients: tuple   # of u^0 .. u^4, as Scalars
    witness: dict | None = None


def unitarity_check(r: RCheck) -> UnitarityReport:
    """``R(u) R(-u) = p(u) I`` checked coefficient by coefficient."""
    c0, c1, c2 = r.coefficients()
    # R(u) R(-u) = sum_k u^k sum_{i+j=k} (-1)^j c_i c_j
    coeffs = []
    mats = (c0, c1, c2)
    for k in range(5):
        acc = None
        for i in range(3):
            j = k - i
            if 0 <= j <= 2:
                t = mats[i] @ mats[j]
                if j % 2:
                    t = -t
                acc = t if acc is None else acc + t
        coeffs.append(acc)
    scal = []
    for k, m in enumerate(coeffs):
        c = m.scalar_multiple_of_identity()
        if c is None:
            (i, j), v = next(iter(m.items()))
            return UnitarityReport(False, tuple(scal), {
                "power": k, "row": i, "col": j, "value": str(v)})
        scal.append(c)
    return UnitarityReport(True, tuple(scal))


def scale_a_term(r: RCheck, factor) -> RCheck:
    """Copy of ``r`` with the ``A`` block multiplied by ``factor``.

    A control mutation for the Yang-Baxter check.  ``factor = 0`` removes
    ``A``; the remainder factors as ``(u + q1)(u P + q2)``, a multiple of
    the braid form of Yang's R-matrix, so it still solves the equation.
    Any other factor != 1 breaks it.
    """
    blocks = build_blocks(r.N)
    shift = as_scalar(factor) - 1
    return replace(r, coeff1=r.coeff1 + blocks.A * (r.x * shift))


def drop_a_term(r: RCheck) -> RCheck:
    """Copy of ``r`` without the ``A`` block."""
    return scale_a_term(r, 0)
