"""Drinfel'd presentation checks for Y(so(5)).

Adjoint indices run over :data:`~yso5.so5_rep.PAIRS` (``I_ab`` with
``a < b``).  With structure constants ``[I_l, I_m] = c_lmn I_n`` the
relations checked here are

* ``[I_l, I_m] = c_lmn I_n`` and ``[I_l, J_m] = c_lmn J_n``;
* the cubic relation
  ``[J_l,[J_m,I_n]] - [I_l,[J_m,J_n]] = h^2 a_lmnabg {I_a,I_b,I_g}``;
* the quartic relation
  ``[[J_l,J_m],[I_s,J_t]] + [[J_s,J_t],[I_l,J_m]]
  = h^2 (a_lmnabg c_stn + a_stnabg c_lmn) {I_a,I_b,J_g}``;
* the single so(5) Serre-type relation
  ``[J_23, J_15] = (i/24) h^2 ({I13,I42,I45} + {I12,I45,I34}
  - {I14,I42,I35} - {I14,I34,I25})`` and its Cartan-Weyl form,

with ``a_lmnabg = (1/24) c_las c_mbt c_ngr c_str`` and ``{x1,x2,x3}`` the
sum over all six orderings.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product

from .algebra_core import I_UNIT, Scalar, Sqrt2Scaled, as_scalar, commutator, mat_mul
from .relations import check_entries, entries_for, witness_of
from .results import Outcome
from .rtt_engine import LaxRep, component_lookup, extract_components
from .so5_rep import (PAIRS, GeneratorSet, build_vector_generators, check_so5_relations,
                      from_cartan_weyl_rational, structure_constants, to_cartan_weyl)

__all__ = [
    "ATensor",
    "YangianPair",
    "BasisMismatchError",
    "compute_a_tensor",
    "so5_tensors",
    "triple_product",
    "check_drinfeld",
    "check_serre",
    "check_cw_tables",
    "check_level2_covariance",
    "lax_pair",
    "fit_ratio",
    "canonical_quadruples",
    "SERRE_TERMS",
    "CW_TABLES",
]

CW_TABLES = ("30", "31", "32", "33", "34")
_LAX_TABLES = ("33", "34")
_IDX = {p: k for k, p in enumerate(PAIRS)}


class BasisMismatchError(ValueError):
    """Generators and tensors do not share the 10-element adjoint basis."""


@dataclass(frozen=True)
class ATensor:
    """Sparse ``a[(l, m, n, al, be, ga)]`` over adjoint indices."""

    a: dict = field(repr=False)

    def __getitem__(self, key):
        return self.a.get(tuple(key), Scalar(0))

    def __len__(self):
        return len(self.a)

    def slice(self, l: int, m: int, n: int) -> dict:
        """``{(al, be, ga): value}`` for fixed first three indices."""
        return self._slices().get((l, m, n), {})

    def _slices(self):
        cache = self.__dict__.get("_slice_cache")
        if cache is None:
            cache = defaultdict(dict)
            for (l, m, n, al, be, ga), v in self.a.items():
                cache[(l, m, n)][(al, be, ga)] = v
            object.__setattr__(self, "_slice_cache", dict(cache))
            cache = self.__dict__["_slice_cache"]
        return cache


def compute_a_tensor(c: dict) -> ATensor:
    """``a_lmnabg = (1/24) sum_{s,t,r} c_las c_mbt c_ngr c_str``, exactly."""
    rows = defaultdict(list)   # l -> [(alpha, sigma, value)]
    for (l, al, s), v in c.items():
        if v:
            rows[l].append((al, s, v))
    inv24 = Scalar(Fraction(1, 24))
    out = {}
    indices = sorted({k[0] for k in c} | {k[1] for k in c})
    for l, m, n in product(indices, repeat=3):
        acc = {}
        for (al, s, v1), (be, t, v2) in product(rows[l], rows[m]):
            v12 = v1 * v2
            for ga, r, v3 in rows[n]:
                v4 = c.get((s, t, r))
                if v4:
                    key = (l, m, n, al, be, ga)
                    acc[key] = acc.get(key, Scalar(0)) + v12 * v3 * v4
        for key, v in acc.items():
            if v:
                out[key] = v * inv24
    return ATensor(out)


@lru_cache(maxsize=1)
def so5_tensors() -> tuple:
    """Structure constants and a-tensor of so(5) in the ``I_ab`` basis."""
    c = structure_constants(build_vector_generators())
    return c, compute_a_tensor(c)


def triple_product(x1, x2, x3):
    """``{x1, x2, x3}``: the sum of all six ordered products."""
    xs = (x1, x2, x3)
    total = None
    for p, q, r in permutations(range(3)):
        term = mat_mul(mat_mul(xs[p], xs[q]), xs[r])
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class YangianPair:
    """Level-1 generators ``I_ab``, level-2 generators ``J_ab`` and ``h``."""

    level1: GeneratorSet
    level2: GeneratorSet
    h: Scalar = Scalar(1)
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "h", as_scalar(self.h))
        if self.level1.dim != self.level2.dim:
            raise BasisMismatchError(
                f"level-1 dim {self.level1.dim} differs from level-2 dim {self.level2.dim}")

    @property
    def dim(self) -> int:
        return self.level1.dim

    def I(self, k: int):
        return self.level1.gens[PAIRS[k]]

    def J(self, k: int):
        return self.level2.gens[PAIRS[k]]

    def with_level2(self, gens: dict, tag: str) -> "YangianPair":
        """Copy with replaced level-2 generators (used for control mutations)."""
        return YangianPair(self.level1, GeneratorSet(self.level2.rep + tag, self.dim, gens),
                           self.h, self.description + tag)


def _zero_like(m):
    return m * Scalar(0)


def lax_pair(rep: LaxRep) -> YangianPair:
    """Drinfel'd pair read off an RTT representation.

    ``I`` and ``J`` are the Cartan-Weyl-inverse images of the level-1 and
    level-2 components, with ``h = 1``.  Adding multiples of ``I`` or of
    the quadratic level-1 terms to ``J`` is not needed in these
    representations.
    """
    i1 = from_cartan_weyl_rational(extract_components(rep, 1).ops, rep.quantum_dim)
    i2 = from_cartan_weyl_rational(extract_components(rep, 2).ops, rep.quantum_dim)
    return YangianPair(GeneratorSet("lax-level1", rep.quantum_dim, i1.gens),
                       GeneratorSet("lax-level2", rep.quantum_dim, i2.gens),
                       Scalar(1), rep.description)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _lin(terms, zero):
    """``sum coeff * op`` with the zero operator as a fallback."""
    total = None
    for coeff, op in terms:
        if not coeff:
            continue
        t = op * coeff
        total = t if total is None else total + t
    return zero if total is None else total


def _outcome(name, ref, diff, **metrics) -> Outcome:
    ok = diff.is_zero()
    return Outcome(name, ok, ref, None if ok else witness_of(diff), dict(metrics))


def _pname(k: int) -> str:
    a, b = PAIRS[k]
    return f"{a}{b}"


def canonical_quadruples() -> list:
    """Representatives ``(l, m, s, t)`` for the quartic relation.

    Both sides are antisymmetric in ``(l, m)`` and in ``(s, t)`` and
    symmetric under exchanging the two pairs, so the 1035 tuples with
    ``l < m``, ``s < t`` and ``(l, m) <= (s, t)`` determine all 10^4.
    """
    pairs = list(combinations(range(len(PAIRS)), 2))
    quads = [(l, m, s, t) for (l, m), (s, t) in combinations(pairs, 2)]
    return quads + [(l, m, l, m) for (l, m) in pairs]


def fit_ratio(lhs, rhs):
    """Exact ``lam`` with ``lhs == lam * rhs``, or ``None``.

    Works on plain matrices and on :class:`Sqrt2Scaled` values of equal
    power.  Returns ``None`` if ``rhs`` vanishes or no such scalar exists.
    """
    if isinstance(lhs, Sqrt2Scaled) or isinstance(rhs, Sqrt2Scaled):
        lhs, rhs = Sqrt2Scaled.lift(lhs), Sqrt2Scaled.lift(rhs)
        if lhs.power != rhs.power:
            return None
        lhs, rhs = lhs.op, rhs.op
    if rhs.is_zero():
        return None
    (i, j), v = next(iter(rhs.items()))
    lam = lhs[i, j] / v
    return lam if (lhs - rhs * lam).is_zero() else None


# ---------------------------------------------------------------------------
# Drinfel'd relations
# ---------------------------------------------------------------------------

def check_drinfeld(yp: YangianPair, c: dict | None = None, a: ATensor | None = None,
                   quadruples=None) -> list:
    """Linear, cubic and quartic Drinfel'd relations, one :class:`Outcome` each.

    Parameters
    ----------
    c, a
        Structure constants and a-tensor.  By default the so(5) constants
        of the vector representation are used; every representation with
        the same bracket shares them, which the linear relations check.
    quadruples
        Index tuples for the quartic relation; defaults to
        :func:`canonical_quadruples`.
    """
    if c is None:
        c, default_a = so5_tensors()
        a = default_a if a is None else a
    if any(max(k) >= len(PAIRS) for k in c):
        raise BasisMismatchError("structure constants use indices outside the adjoint basis")
    if a is None:
        a = compute_a_tensor(c)
    n_gen = len(PAIRS)
    zero = _zero_like(yp.I(0))
    h2 = yp.h * yp.h
    I = [yp.I(k) for k in range(n_gen)]
    J = [yp.J(k) for k in range(n_gen)]
    out = []

    # linear relations, both families
    for l, m in product(range(n_gen), repeat=2):
        rhs_i = _lin(((c.get((l, m, n), 0), I[n]) for n in range(n_gen)), zero)
        rhs_j = _lin(((c.get((l, m, n), 0), J[n]) for n in range(n_gen)), zero)
        out.append(_outcome(f"linear-II:{_pname(l)},{_pname(m)}", "drinfeld.linear",
                            commutator(I[l], I[m]) - rhs_i))
        out.append(_outcome(f"linear-IJ:{_pname(l)},{_pname(m)}", "drinfeld.linear",
                            commutator(I[l], J[m]) - rhs_j))

    # cubic relation on all ordered triples
    trip_iii = {}

    def iii(key):
        if key not in trip_iii:
            trip_iii[key] = triple_product(I[key[0]], I[key[1]], I[key[2]])
        return trip_iii[key]

    jm_i, jm_j = {}, {}
    for l, m, n in product(range(n_gen), repeat=3):
        coeffs = defaultdict(lambda: Scalar(0))
        for (al, be, ga), v in a.slice(l, m, n).items():
            coeffs[tuple(sorted((al, be, ga)))] += v
        rhs = _lin(((v * h2, iii(k)) for k, v in sorted(coeffs.items())), zero)
        if (m, n) not in jm_i:
            jm_i[(m, n)] = commutator(J[m], I[n])
            jm_j[(m, n)] = commutator(J[m], J[n])
        lhs = commutator(J[l], jm_i[(m, n)]) - commutator(I[l], jm_j[(m, n)])
        out.append(_outcome(f"cubic:{_pname(l)},{_pname(m)},{_pname(n)}", "drinfeld.cubic",
                            lhs - rhs))

    # quartic relation on the canonical quadruples
    trip_iij = {}

    def iij(al, be, ga):
        key = (min(al, be), max(al, be), ga)
        if key not in trip_iij:
            trip_iij[key] = triple_product(I[key[0]], I[key[1]], J[ga])
        return trip_iij[key]

    jj = {(l, m): commutator(J[l], J[m]) for l, m in product(range(n_gen), repeat=2)}
    ij = {(l, m): commutator(I[l], J[m]) for l, m in product(range(n_gen), repeat=2)}
    for l, m, s, t in (canonical_quadruples() if quadruples is None else quadruples):
        coeffs = defaultdict(lambda: Scalar(0))
        for nu in range(n_gen):
            for (x1, x2, y1, y2), cc in (((l, m, s, t), c.get((s, t, nu))),
                                         ((s, t, l, m), c.get((l, m, nu)))):
                if not cc:
                    continue
                for (al, be, ga), v in a.slice(x1, x2, nu).items():
                    coeffs[(min(al, be), max(al, be), ga)] += v * cc
        rhs = _lin(((v * h2, iij(*k)) for k, v in sorted(coeffs.items())), zero)
        lhs = commutator(jj[(l, m)], ij[(s, t)]) + commutator(jj[(s, t)], ij[(l, m)])
        out.append(_outcome(f"quartic:{_pname(l)},{_pname(m)},{_pname(s)},{_pname(t)}",
                            "drinfeld.quartic", lhs - rhs))
    return out


# (sign, (a, b), (c, d), (e, f)) in the right-hand side of the Serre relation
SERRE_TERMS = (
    (1, (1, 3), (4, 2), (4, 5)),
    (1, (1, 2), (4, 5), (3, 4)),
    (-1, (1, 4), (4, 2), (3, 5)),
    (-1, (1, 4), (3, 4), (2, 5)),
)


def _cw_lookup(yp):
    """Cartan-Weyl lookup for a pair, or level 1 only for a generator set."""
    if isinstance(yp, GeneratorSet):
        cw1, cw2 = to_cartan_weyl(yp, level=1), None
    else:
        cw1 = to_cartan_weyl(yp.level1, level=1)
        cw2 = to_cartan_weyl(yp.level2, yp.h, level=2)

    def look(name, level):
        if level == 1:
            return cw1[name]
        if level == 2 and cw2 is not None:
            return cw2[name]
        raise KeyError(f"{name}^{level} is not available in a Drinfel'd pair")
    return look


def check_serre(yp: YangianPair) -> list:
    """The single independent cubic relation, in both index and Cartan-Weyl form.

    Each outcome records the exact ratio ``lambda`` with ``lhs = lambda * rhs``
    under ``fitted_lambda`` when it exists (``None`` otherwise).
    """
    g1, g2 = yp.level1.get, yp.level2.get
    if g2(2, 3) is None:
        raise KeyError("level-2 generators are missing")
    lhs = commutator(g2(2, 3), g2(1, 5))
    zero = _zero_like(lhs)
    pref = I_UNIT * Scalar(Fraction(1, 24)) * yp.h * yp.h
    terms = [(Scalar(s), triple_product(g1(*p), g1(*q), g1(*r))) for s, p, q, r in SERRE_TERMS]
    rhs = _lin(terms, zero) * pref
    lam = fit_ratio(lhs, rhs)
    out = [_outcome("serre:index-form", "drinfeld.serre", lhs - rhs,
                    fitted_lambda=None if lam is None else str(lam),
                    lhs_zero=lhs.is_zero(), rhs_zero=rhs.is_zero())]
    look = _cw_lookup(yp)
    for r in check_entries(entries_for("32"), look):
        out.append(Outcome(f"serre:cartan-weyl:{r.entry_id}", r.ok, f"corpus:{r.entry_id}",
                           r.witness, {"line": r.line}))
    return out


def check_cw_tables(yp, table: str, rep_extra: LaxRep | None = None,
                    levels=(1, 2)) -> list:
    """Evaluate one Cartan-Weyl relation table.

    Tables ``30``-``32`` use the Cartan-Weyl images of ``yp`` (a
    :class:`YangianPair`, or a :class:`GeneratorSet` for level-1 tables).  Tables
    ``33`` and ``34`` mix tilde, ``X``, ``Y`` and ``I0`` components and
    therefore need an RTT representation ``rep_extra``; they are run for
    every ``n`` in ``levels``.  Corrected entries are also evaluated in
    their printed form and reported as measured outcomes.
    """
    table = str(table)
    if table not in CW_TABLES:
        raise ValueError(f"unknown table {table!r}; expected one of {CW_TABLES}")
    if table in _LAX_TABLES:
        if rep_extra is None:
            raise ValueError(f"table {table} needs an RTT representation")
        look = component_lookup(rep_extra)
        ns = tuple(levels)
    else:
        if yp is None:
            raise ValueError(f"table {table} needs a Drinfel'd pair")
        look = _cw_lookup(yp)
        ns = (None,)
    entries = entries_for(table)
    out = []
    for n in ns:
        suffix = "" if n is None else f"@n={n}"
        for printed in (False, True):
            seen = defaultdict(int)
            chosen = [e for e in entries if e.printed] if printed else entries
            results = []
            for e in chosen:
                try:
                    results.extend(check_entries([e], look, n=n, use_printed=printed))
                except ValueError as exc:
                    # a printed form may carry a level that cannot be resolved
                    if not printed:
                        raise
                    out.append(Outcome(f"table{table}:{e.id}{suffix}:printed", None,
                                       f"corpus:{e.id}", None,
                                       {"line": e.line, "erratum": e.erratum,
                                        "printed_form_holds": None, "note": str(exc)}))
            for r in results:
                key = (r.entry_id, r.tag)
                seen[key] += 1
                name = f"table{table}:{r.entry_id}" + (f"[{r.tag}]" if r.tag else "") \
                    + (f"#{seen[key]}" if seen[key] > 1 else "") + suffix
                metrics = {"line": r.line}
                if r.erratum:
                    metrics["erratum"] = r.erratum
                if printed:
                    metrics["printed_form_holds"] = r.ok
                    out.append(Outcome(name + ":printed", None, f"corpus:{r.entry_id}",
                                       r.witness, metrics))
                else:
                    out.append(Outcome(name, r.ok, f"corpus:{r.entry_id}", r.witness, metrics))
    return out


def check_level2_covariance(yp: YangianPair) -> list:
    """``[I_ab, J_cd]`` against the so(5) pattern for all 100 ordered pairs."""
    out = []
    for ((a, b), (cc, d)), ok, res in check_so5_relations(yp.level1, yp.level2):
        out.append(Outcome(f"covariance:{a}{b},{cc}{d}", ok, "so5.level2-covariance",
                           None if ok else witness_of(res)))
    return out
