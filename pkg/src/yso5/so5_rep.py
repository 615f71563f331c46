"""so(5) generators in the 4-dim spinor and 5-dim vector representations.

Conventions
-----------
Labels run over ``1..5``.  The Clifford set is

    G1 = s1 x s3, G2 = s2 x s3, G3 = s3 x s3, G4 = 1 x s1, G5 = 1 x s2

and the generators are ``I_ab = (i/2) G_a G_b`` (spinor) and
``(I_ab)_cd = i (d_ac d_bd - d_ad d_bc)`` (vector).  With these signs both
representations satisfy

    [I_ab, I_cd] = i (d_bc I_ad + d_ad I_bc - d_ac I_bd - d_bd I_ac).

The Cartan-Weyl combinations (``E3``, ``E+-``, ``F3``, ``F+-``, ``U+-``,
``V+-``) involve ``1/sqrt(2)`` and are returned as
:class:`~yso5.algebra_core.Sqrt2Scaled` values.  They carry an overall
orientation sign ``CW_ORIENTATION = -1`` so that the Cartan-Weyl
commutation table comes out with the standard signs for these generators.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .algebra_core import (
    I_UNIT, ONE, ZERO, DimensionError, Matrix, Scalar, Sqrt2Scaled, anticommutator,
    as_scalar, commutator, kron,
)

__all__ = [
    "LABELS",
    "PAIRS",
    "CW_ORIENTATION",
    "CW_NAMES",
    "CliffordError",
    "ClosureError",
    "CliffordSet",
    "GeneratorSet",
    "CartanWeylSet",
    "build_clifford",
    "build_spinor_generators",
    "build_vector_generators",
    "to_cartan_weyl",
    "from_cartan_weyl_rational",
    "structure_constants",
    "check_so5_relations",
    "so5_rhs",
]

LABELS = (1, 2, 3, 4, 5)
#: Ordered adjoint basis ``(a, b)`` with ``a < b``; index 0..9.
PAIRS = tuple(combinations(LABELS, 2))
CW_ORIENTATION = -1
CW_NAMES = ("E3", "F3", "E+", "E-", "F+", "F-", "U+", "U-", "V+", "V-")


class CliffordError(ValueError):
    """The supplied gamma matrices do not satisfy the Clifford relations."""


class ClosureError(ValueError):
    """A commutator left the span of the generators."""


_S0 = Matrix.identity(2)
_S1 = Matrix.from_rows([[0, 1], [1, 0]])
_S2 = Matrix.from_rows([[0, "-1 i"], ["1 i", 0]])
_S3 = Matrix.from_rows([[1, 0], [0, -1]])


@dataclass(frozen=True)
class CliffordSet:
    """Five 4x4 matrices, indexed ``1..5`` via :meth:`gamma`."""

    gammas: tuple

    def gamma(self, a: int) -> Matrix:
        return self.gammas[a - 1]

    def violations(self) -> list:
        """Pairs ``(a, b)`` where ``{G_a, G_b} != 2 d_ab``."""
        bad = []
        eye2 = Matrix.identity(4) * 2
        for a in LABELS:
            for b in LABELS:
                if b < a:
                    continue
                ac = anticommutator(self.gamma(a), self.gamma(b))
                want = eye2 if a == b else Matrix.zeros(4)
                if ac != want:
                    bad.append((a, b))
        return bad


def build_clifford(validate: bool = True) -> CliffordSet:
    """The fixed Clifford set used throughout the package."""
    cs = CliffordSet((kron(_S1, _S3), kron(_S2, _S3), kron(_S3, _S3),
                      kron(_S0, _S1), kron(_S0, _S2)))
    if validate and cs.violations():
        raise CliffordError(f"Clifford relations fail for {cs.violations()}")
    return cs


@dataclass(frozen=True)
class GeneratorSet:
    """Antisymmetric family ``I_ab`` of one representation."""

    rep: str
    dim: int
    gens: dict = field(repr=False)

    def get(self, a: int, b: int):
        if a == b:
            return type(next(iter(self.gens.values()))).zeros(self.dim)
        if a < b:
            return self.gens[(a, b)]
        return -self.gens[(b, a)]

    def __getitem__(self, key):
        return self.get(*key)

    def basis(self) -> list:
        """Generators in :data:`PAIRS` order."""
        return [self.gens[p] for p in PAIRS]


def build_spinor_generators(cs: CliffordSet | None = None, validate: bool = True) -> GeneratorSet:
    """``I_ab = (i/2) G_a G_b`` on the 4-dim spinor space.

    Raises
    ------
    CliffordError
        If ``validate`` is set and ``cs`` is not a Clifford set.
    """
    cs = build_clifford() if cs is None else cs
    if validate:
        bad = cs.violations()
        if bad:
            raise CliffordError(f"Clifford relations fail for {bad}")
    half_i = Scalar(0, "1/2")
    gens = {(a, b): (cs.gamma(a) @ cs.gamma(b)) * half_i for a, b in PAIRS}
    return GeneratorSet("spinor", 4, gens)


def build_vector_generators() -> GeneratorSet:
    """``(I_ab)_cd = i (d_ac d_bd - d_ad d_bc)`` on the 5-dim space."""
    gens = {}
    for a, b in PAIRS:
        gens[(a, b)] = Matrix.from_entries(
            (5, 5), {(a - 1, b - 1): I_UNIT, (b - 1, a - 1): -I_UNIT})
    return GeneratorSet("vector", 5, gens)


def _delta(a, b) -> int:
    return 1 if a == b else 0


def so5_rhs(get, a, b, c, d):
    """Right-hand side ``i(d_bc I_ad + d_ad I_bc - d_ac I_bd - d_bd I_ac)``.

    ``get(p, q)`` returns the generator (``None`` for ``p == q``).  The
    result is ``None`` when every Kronecker delta vanishes.
    """
    terms = ((_delta(b, c), a, d), (_delta(a, d), b, c),
             (-_delta(a, c), b, d), (-_delta(b, d), a, c))
    out = None
    for coef, p, q in terms:
        if coef and p != q:
            t = get(p, q) * Scalar(0, coef)
            out = t if out is None else out + t
    return out


def check_so5_relations(gs: GeneratorSet, level2: GeneratorSet | None = None):
    """Check the so(5) bracket on all 45 unordered generator pairs.

    With ``level2`` given, checks ``[I_ab, J_cd]`` against the same
    right-hand side built from ``J`` (100 ordered pairs).

    Returns
    -------
    list of (pair, ok, residual)
        ``residual`` is ``lhs - rhs`` (``None`` when both sides vanish).
    """
    out = []
    other = gs if level2 is None else level2
    if level2 is None:
        pairs = list(combinations(PAIRS, 2))
    else:
        pairs = [(p, q) for p in PAIRS for q in PAIRS]
    for (a, b), (c, d) in pairs:
        lhs = commutator(gs.get(a, b), other.get(c, d))
        rhs = so5_rhs(other.get, a, b, c, d)
        res = lhs if rhs is None else lhs - rhs
        out.append((((a, b), (c, d)), res.is_zero(), res))
    return out


@dataclass(frozen=True)
class CartanWeylSet:
    """Named Cartan-Weyl combinations at one level."""

    level: int
    ops: dict = field(repr=False)

    def __getitem__(self, name):
        return self.ops[name]


def to_cartan_weyl(gs: GeneratorSet, h=1, level: int = 1) -> CartanWeylSet:
    """Cartan-Weyl combinations of ``gs``.

    Level-2 inputs are divided by ``h``; ``h = 0`` is rejected there.
    Values are ``Sqrt2Scaled`` so the ``1/sqrt(2)`` factors stay exact.
    """
    h = as_scalar(h)
    if level not in (1, 2):
        raise ValueError(f"level must be 1 or 2, got {level}")
    if level == 2 and not h:
        raise ValueError("h = 0 is not allowed at level 2")
    f = Scalar(CW_ORIENTATION) if level == 1 else Scalar(CW_ORIENTATION) / h
    g = gs.get
    i = I_UNIT
    half = Scalar("1/2")
    ops = {
        "E3": Sqrt2Scaled(g(2, 3) * f),
        "F3": Sqrt2Scaled(g(1, 5) * f),
    }
    for sign, tag in ((1, "+"), (-1, "-")):
        s = i * sign
        # 1/sqrt(2) = sqrt(2)**-1
        ops["E" + tag] = Sqrt2Scaled((g(3, 4) + g(4, 2) * s) * f, -1)
        ops["F" + tag] = Sqrt2Scaled((g(4, 5) + g(1, 4) * s) * f, -1)
        a = g(3, 1) + g(1, 2) * s
        b = g(2, 5) + g(3, 5) * s
        ops["U" + tag] = Sqrt2Scaled((a - b) * (f * half))
        ops["V" + tag] = Sqrt2Scaled((a + b) * (f * half))
    return CartanWeylSet(level, ops)


def from_cartan_weyl_rational(comp: dict, dim: int) -> GeneratorSet:
    """Antisymmetric ``I_ab`` from Cartan-Weyl-like components.

    ``comp`` maps the names in :data:`CW_NAMES` to operators.  The map
    inverts :func:`to_cartan_weyl` followed by the torus rescaling
    ``E+ -> sqrt(2) E+, E- -> E-/sqrt(2)`` (likewise ``F``), ``U`` fixed,
    ``V+ -> 2 V+, V- -> V-/2``.  The rescaling is an automorphism of the
    Cartan-Weyl table and keeps everything inside Q(i) when the components
    come from an RTT matrix.
    """
    half = Scalar("1/2")
    i = I_UNIT
    e3, f3 = comp["E3"], comp["F3"]
    ep, em, fp, fm = comp["E+"], comp["E-"], comp["F+"], comp["F-"]
    up, um, vp, vm = comp["U+"], comp["U-"], comp["V+"], comp["V-"]
    ops = {}
    ops[(2, 3)] = -e3
    ops[(1, 5)] = -f3
    ops[(3, 4)] = -(ep + em * 2) * half
    ops[(4, 2)] = (ep - em * 2) * (i * half)
    ops[(4, 5)] = -(fp + fm * 2) * half
    ops[(1, 4)] = (fp - fm * 2) * (i * half)
    a_ = -up - vp * half
    b_ = up - vp * half
    c_ = -um - vm * 2
    d_ = um - vm * 2
    ops[(3, 1)] = (a_ + c_) * half
    ops[(1, 2)] = (a_ - c_) * (half / i)
    ops[(2, 5)] = (b_ + d_) * half
    ops[(3, 5)] = (b_ - d_) * (half / i)
    gens = {}
    for (a, b), v in ops.items():
        if a < b:
            gens[(a, b)] = v
        else:
            gens[(b, a)] = -v
    return GeneratorSet("cartan-weyl-inverse", dim, gens)


def _solve_span(basis: list, target) -> tuple:
    """Exact coefficients ``x`` with ``sum x_k basis_k == target``.

    Gaussian elimination over Q(i) on the flattened entries.  Returns
    ``(coeffs, residual_is_zero)``.
    """
    positions = sorted({k for m in basis + [target] for k, _ in m.items()})
    cols = [dict(m.items()) for m in basis]
    rows = [[c.get(p, ZERO) for c in cols] + [dict(target.items()).get(p, ZERO)]
            for p in positions]
    n = len(basis)
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((k for k in range(r, len(rows)) if rows[k][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c]:
                fac = rows[k][c]
                rows[k] = [v - fac * w for v, w in zip(rows[k], rows[r])]
        piv_cols.append(c)
        r += 1
    consistent = all(not row[-1] for row in rows[r:])
    coeffs = [ZERO] * n
    for k, c in enumerate(piv_cols):
        coeffs[c] = rows[k][-1]
    return coeffs, consistent


def structure_constants(gs: GeneratorSet) -> dict:
    """Exact ``c[(l, m, n)]`` with ``[I_l, I_m] = c_lmn I_n``.

    Indices refer to :data:`PAIRS`.  Only nonzero constants are stored.

    Raises
    ------
    ClosureError
        If some commutator is not in the span; the message names the pair.
    """
    basis = gs.basis()
    c = {}
    for l, m in combinations(range(len(PAIRS)), 2):
        comm = commutator(basis[l], basis[m])
        if comm.is_zero():
            continue
        coeffs, ok = _solve_span(basis, comm)
        if not ok:
            raise ClosureError(
                f"[I{PAIRS[l][0]}{PAIRS[l][1]}, I{PAIRS[m][0]}{PAIRS[m][1]}] "
                "is not in the span of the generators")
        for n, v in enumerate(coeffs):
            if v:
                c[(l, m, n)] = v
                c[(m, l, n)] = -v
    return c
