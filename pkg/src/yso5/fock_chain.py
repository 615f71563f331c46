"""Four-component fermions on a finite chain and their Yangian charges.

Modes are ordered site-major, component-minor: mode ``4 (x - 1) + (al - 1)``
for site ``x = 1..L`` and component ``al = 1..4``.  Annihilators use the
Jordan-Wigner form ``Z (x) ... (x) Z (x) s (x) 1 (x) ... (x) 1`` with
``s = [[0, 1], [0, 0]]`` and ``Z = diag(1, -1)``; the Fock basis index is
the binary occupation string read with mode 0 as the most significant bit.

Charges:

    I_ab(x) = sum_{al,be} (I_ab)_{al,be} psi+_al(x) psi_be(x)
    I_ab    = sum_x I_ab(x)
    J_ab    = -(i c / 2) sum_{x,y} sgn(x - y) sum_c I_ac(x) I_cb(y) + sum_x w_x I_ab(x)

with the spinor generators ``(I_ab)`` of :mod:`yso5.so5_rep`, ``sgn(0) = 0``
and optional one-body weights ``w``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy import sparse

from .algebra_core import I_UNIT, Scalar, SparseOp, anticommutator, as_scalar, commutator
from .drinfeld import YangianPair, check_cw_tables, check_serre
from .relations import witness_of
from .results import Outcome
from .so5_rep import (LABELS, PAIRS, CliffordSet, GeneratorSet, build_spinor_generators,
                      check_so5_relations)

__all__ = [
    "ChainConfig",
    "FermionOps",
    "LatticeYangian",
    "BudgetError",
    "DEFAULT_MAX_L",
    "DEFAULT_BUDGET_MB",
    "estimate_mb",
    "memory_budget_mb",
    "build_fermions",
    "build_local_density",
    "build_level2",
    "build_chain",
    "verify_chain",
    "parity_operator",
]

DEFAULT_MAX_L = 3
DEFAULT_BUDGET_MB = 512
BUDGET_ENV = "YSO5_MEM_BUDGET_MB"


class BudgetError(MemoryError):
    """The requested chain does not fit the memory budget."""


def memory_budget_mb() -> float:
    """Budget in MB from ``YSO5_MEM_BUDGET_MB`` or the default."""
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return float(DEFAULT_BUDGET_MB)
    try:
        val = float(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be a number, got {raw!r}") from None
    if val <= 0:
        raise ValueError(f"{BUDGET_ENV} must be positive, got {raw!r}")
    return val


def estimate_mb(L: int) -> float:
    """Rough peak memory of a chain run.

    About 60 stored operators, each with up to ``~40 dim`` nonzeros of two
    int64 numerators plus CSR indices.
    """
    dim = 16 ** L
    return 60 * 40 * dim * 24 / 2**20


@dataclass(frozen=True)
class ChainConfig:
    """Chain parameters; ``h`` defaults to ``c``."""

    L: int
    c: Scalar = Scalar(1)
    h: Scalar | None = None
    one_body_weights: tuple | None = None
    allow_large: bool = False

    def __post_init__(self):
        if self.L < 1:
            raise ValueError(f"L must be at least 1, got {self.L}")
        object.__setattr__(self, "c", as_scalar(self.c))
        object.__setattr__(self, "h", self.c if self.h is None else as_scalar(self.h))
        if self.one_body_weights is not None:
            w = tuple(as_scalar(v) for v in self.one_body_weights)
            if len(w) != self.L:
                raise ValueError(f"expected {self.L} one-body weights, got {len(w)}")
            object.__setattr__(self, "one_body_weights", w)

    @property
    def dim(self) -> int:
        return 16 ** self.L

    @property
    def modes(self) -> int:
        return 4 * self.L

    def check_budget(self) -> None:
        """Raise :class:`BudgetError` unless the chain may be built."""
        if self.L > DEFAULT_MAX_L and not self.allow_large:
            raise BudgetError(
                f"L={self.L} needs Fock dimension {self.dim}; the default cap is "
                f"L <= {DEFAULT_MAX_L} (allow_large, or --allow-large on the command line, lifts it)")
        need, budget = estimate_mb(self.L), memory_budget_mb()
        if need > budget:
            raise BudgetError(
                f"L={self.L} needs Fock dimension {self.dim} and about {need:.0f} MB, "
                f"over the {budget:.0f} MB budget ({BUDGET_ENV})")


@dataclass(frozen=True)
class FermionOps:
    """Annihilators ``psi[(x, al)]`` and creators ``psi_dagger[(x, al)]``."""

    L: int
    psi: dict = field(repr=False)
    psi_dagger: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return 16 ** self.L

    def keys(self) -> list:
        return [(x, al) for x in range(1, self.L + 1) for al in range(1, 5)]


def _mode_index(x: int, al: int) -> int:
    return 4 * (x - 1) + (al - 1)


def build_fermions(cfg: ChainConfig) -> FermionOps:
    """Jordan-Wigner annihilators and creators in the fixed mode order."""
    cfg.check_budget()
    n = cfg.modes
    z = sparse.csr_array(np.diag([1, -1]).astype(np.int64))
    s = sparse.csr_array(np.array([[0, 1], [0, 0]], dtype=np.int64))
    psi, psid = {}, {}
    for x, al in product(range(1, cfg.L + 1), range(1, 5)):
        k = _mode_index(x, al)
        # Z on every earlier mode, s on mode k, identity afterwards
        op = sparse.identity(1, dtype=np.int64, format="csr")
        for _ in range(k):
            op = sparse.kron(op, z, format="csr")
        op = sparse.kron(op, s, format="csr")
        op = sparse.kron(op, sparse.identity(2 ** (n - k - 1), dtype=np.int64, format="csr"),
                         format="csr")
        psi[(x, al)] = SparseOp.from_int_arrays(op)
        psid[(x, al)] = SparseOp.from_int_arrays(op.T.tocsr())
    return FermionOps(cfg.L, psi, psid)


@dataclass(frozen=True)
class LatticeYangian:
    """Local densities, level-1 charges and (once built) level-2 charges."""

    L: int
    local_density: dict = field(repr=False)     # (x, (a, b)) -> SparseOp, a < b
    level1: GeneratorSet = field(repr=False)
    level2: GeneratorSet | None = field(default=None, repr=False)
    fermions: FermionOps | None = field(default=None, repr=False)

    def density(self, x: int, a: int, b: int) -> SparseOp | None:
        """Antisymmetric extension of the densities; ``None`` for ``a == b``."""
        if a == b:
            return None
        if a < b:
            return self.local_density[(x, (a, b))]
        return -self.local_density[(x, (b, a))]

    def pair(self, h) -> YangianPair:
        if self.level2 is None:
            raise ValueError("level-2 charges have not been built")
        return YangianPair(self.level1, self.level2, h, f"fock L={self.L}")


def build_local_density(f: FermionOps, cs: CliffordSet | None = None) -> LatticeYangian:
    """Fermion bilinears of the spinor generators, site by site."""
    spinor = build_spinor_generators(cs)
    dens = {}
    for x in range(1, f.L + 1):
        bil = {}
        for al, be in product(range(1, 5), repeat=2):
            bil[(al, be)] = f.psi_dagger[(x, al)] @ f.psi[(x, be)]
        for a, b in PAIRS:
            total = None
            for (al, be), v in spinor.gens[(a, b)].items():
                t = bil[(al + 1, be + 1)] * v
                total = t if total is None else total + t
            dens[(x, (a, b))] = total
    level1 = {}
    for p in PAIRS:
        acc = dens[(1, p)]
        for x in range(2, f.L + 1):
            acc = acc + dens[(x, p)]
        level1[p] = acc
    return LatticeYangian(f.L, dens, GeneratorSet("fock-level1", f.dim, level1), None, f)


def build_level2(f: FermionOps, cfg: ChainConfig, ly: LatticeYangian) -> LatticeYangian:
    """Bilocal level-2 charges plus the optional one-body term."""
    pref = -(I_UNIT * cfg.c) * Scalar("1/2")
    zero = SparseOp.zeros(f.dim)
    gens = {}
    for a, b in PAIRS:
        acc = zero
        if cfg.c:
            for x, y in product(range(1, cfg.L + 1), repeat=2):
                if x == y:
                    continue
                sgn = 1 if x > y else -1
                for c in LABELS:
                    left, right = ly.density(x, a, c), ly.density(y, c, b)
                    if left is None or right is None:
                        continue
                    t = left @ right
                    acc = acc + t if sgn > 0 else acc - t
            acc = acc * pref
        if cfg.one_body_weights is not None:
            for x, w in zip(range(1, cfg.L + 1), cfg.one_body_weights):
                if w:
                    acc = acc + ly.density(x, a, b) * w
        gens[(a, b)] = acc
    return LatticeYangian(ly.L, ly.local_density, ly.level1,
                          GeneratorSet("fock-level2", f.dim, gens), ly.fermions)


def build_chain(cfg: ChainConfig) -> LatticeYangian:
    """Fermions, densities and both levels of charges for ``cfg``."""
    f = build_fermions(cfg)
    return build_level2(f, cfg, build_local_density(f))


def parity_operator(f: FermionOps) -> SparseOp:
    """``(-1)^N`` in the occupation basis."""
    n = 4 * f.L
    counts = np.array([bin(k).count("1") for k in range(2 ** n)])
    diag = np.where(counts % 2 == 0, 1, -1).astype(np.int64)
    return SparseOp.from_int_arrays(sparse.diags_array(diag, format="csr"))


def _car_outcomes(f: FermionOps) -> list:
    out = []
    eye = SparseOp.identity(f.dim)
    keys = f.keys()
    for i, p in enumerate(keys):
        for q in keys[i:]:
            d = anticommutator(f.psi[p], f.psi[q])
            out.append(Outcome(f"car:psi{p},psi{q}", d.is_zero(), "car",
                               witness_of(d)))
    for p, q in product(keys, repeat=2):
        d = anticommutator(f.psi[p], f.psi_dagger[q])
        if p == q:
            d = d - eye
        out.append(Outcome(f"car:psi{p},psi+{q}", d.is_zero(), "car", witness_of(d)))
    return out


def _label(p):
    return f"{p[0]}{p[1]}"


def verify_chain(ly: LatticeYangian, cfg: ChainConfig) -> list:
    """CAR, so(5) closure, level-2 covariance, Serre relation, tables and parity.

    The Serre outcome records two measured ratios: ``fitted_lambda`` with
    ``h = cfg.h`` and ``lambda_over_c2``, the ratio at ``h = 1`` divided
    by ``c^2``.
    """
    if ly.level2 is None:
        raise ValueError("level-2 charges have not been built")
    out = []
    if ly.fermions is not None:
        out.extend(_car_outcomes(ly.fermions))
    for (p, q), ok, res in check_so5_relations(ly.level1):
        out.append(Outcome(f"so5:{_label(p)},{_label(q)}", ok, "so5.bracket",
                           None if ok else witness_of(res)))
    for (p, q), ok, res in check_so5_relations(ly.level1, ly.level2):
        out.append(Outcome(f"covariance:{_label(p)},{_label(q)}", ok,
                           "so5.level2-covariance", None if ok else witness_of(res)))
    for p in PAIRS:
        d = ly.level2.get(p[1], p[0]) + ly.level2.get(*p)
        out.append(Outcome(f"level2-antisymmetry:{_label(p)}", d.is_zero(),
                           "level2.antisymmetry", witness_of(d)))

    yp = ly.pair(cfg.h)
    serre = check_serre(yp)
    lam = serre[0].metrics.get("fitted_lambda")
    # the ratio scales as 1/h^2; normalise to h = 1 and divide by c^2
    norm = None
    if lam is not None and cfg.c:
        norm = str(Scalar.parse(lam) * cfg.h * cfg.h / (cfg.c * cfg.c))
    first = serre[0]
    metrics = dict(first.metrics, lambda_over_c2=norm, h=str(cfg.h), c=str(cfg.c))
    out.append(Outcome(first.check, first.ok, first.ref, first.witness, metrics))
    if first.metrics["lhs_zero"] and first.metrics["rhs_zero"]:
        out.append(Outcome("serre:proportional", None, "drinfeld.serre", None,
                           {"note": "both sides vanish"}))
    else:
        prop = first.metrics["fitted_lambda"] is not None
        out.append(Outcome("serre:proportional", prop, "drinfeld.serre",
                           None if prop else {"note": "sides are not proportional"}))
    out.extend(serre[1:])
    for t in ("30", "31"):
        out.extend(check_cw_tables(yp, t))

    if ly.fermions is not None:
        par = parity_operator(ly.fermions)
        for lvl, gs in (("level1", ly.level1), ("level2", ly.level2)):
            for p in PAIRS:
                d = commutator(par, gs.get(*p))
                out.append(Outcome(f"parity:{lvl}:{_label(p)}", d.is_zero(), "parity",
                                   witness_of(d)))
    return out

