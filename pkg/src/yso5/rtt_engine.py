"""RTT relation for the so(5) R-matrix, expanded in a free algebra.

The transfer matrix is ``T_ab(u) = d_ab + sum_n (x/u)^n T^(n)_ab`` with
quantum-operator entries.  :func:`expand_rtt` expands

    S(u, v) = R(u-v) (T(u) (x) T(v)) - (T(v) (x) T(u)) R(u-v)

coefficient by coefficient in ``u^-i v^-j`` into noncommutative
polynomials in the symbols ``T^(n)_ab``.  Representations (a single
Lax operator or a monodromy product) assign matrices to those symbols so
every extracted relation can be evaluated exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from itertools import product

from .algebra_core import ONE, ZERO, Matrix, Scalar, as_scalar, kron
from .rmatrix import build_blocks, build_rcheck
from . import relations as rel

__all__ = [
    "AUX_LABELS",
    "GenSymbol",
    "FreePoly",
    "Relation",
    "RelationSet",
    "LaxRep",
    "ComponentSet",
    "COMPONENT_NAMES",
    "UnassignedSymbolError",
    "expand_rtt",
    "paper_relation",
    "build_lax",
    "build_monodromy",
    "extract_components",
    "eval_relations",
    "check_constraints",
    "CONSTRAINT_TABLES",
]

AUX_LABELS = (2, 1, 0, -1, -2)
_POS = {l: k for k, l in enumerate(AUX_LABELS)}


class UnassignedSymbolError(KeyError):
    """A relation mentions a symbol the representation does not provide."""


# ---------------------------------------------------------------------------
# free algebra
# ---------------------------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class GenSymbol:
    """Abstract generator ``T^(level)_ab``; ordered by (level, a, b)."""

    level: int
    a: int
    b: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError(f"symbol level must be >= 1, got {self.level}")
        if self.a not in _POS or self.b not in _POS:
            raise ValueError(f"aux labels must lie in {AUX_LABELS}")

    def _key(self):
        return (self.level, self.a, self.b)

    def __lt__(self, other):
        return self._key() < other._key()

    def __str__(self):
        return f"T{self.level}[{self.a},{self.b}]"


class FreePoly:
    """Noncommutative polynomial: words of :class:`GenSymbol` with Scalar weights.

    The empty word is the unit.  Zero coefficients are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for w, c in (terms.items() if hasattr(terms, "items") else terms):
                c = as_scalar(c)
                w = tuple(w)
                s = clean.get(w, ZERO) + c
                if s:
                    clean[w] = s
                else:
                    clean.pop(w, None)
        self._terms = clean

    @classmethod
    def symbol(cls, s: GenSymbol) -> "FreePoly":
        return cls({(s,): ONE})

    @classmethod
    def constant(cls, c) -> "FreePoly":
        return cls({(): c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def words(self) -> list:
        return sorted(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def max_level(self) -> int:
        return max((s.level for w in self._terms for s in w), default=0)

    def __add__(self, other):
        out = dict(self._terms)
        for w, c in other._terms.items():
            s = out.get(w, ZERO) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        p = FreePoly()
        p._terms = out
        return p

    def __neg__(self):
        return self * Scalar(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FreePoly):
            out = FreePoly()
            acc = {}
            for w1, c1 in self._terms.items():
                for w2, c2 in other._terms.items():
                    w = w1 + w2
                    s = acc.get(w, ZERO) + c1 * c2
                    if s:
                        acc[w] = s
                    else:
                        acc.pop(w, None)
            out._terms = acc
            return out
        c = as_scalar(other)
        if not c:
            return FreePoly()
        p = FreePoly()
        p._terms = {w: v * c for w, v in self._terms.items()}
        return p

    def __rmul__(self, other):
        c = as_scalar(other)
        return self * c

    def __eq__(self, other):
        if not isinstance(other, FreePoly):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def normalized(self) -> "FreePoly":
        """Rescale so the lexicographically smallest word has coefficient 1."""
        if not self._terms:
            return self
        first = min(self._terms)
        return self * self._terms[first].inverse()

    def equal_up_to_scalar(self, other: "FreePoly") -> bool:
        return self.normalized() == other.normalized()

    def to_json(self) -> list:
        return [{"word": [[s.level, s.a, s.b] for s in w], "coeff": str(self._terms[w])}
                for w in self.words()]

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for w in self.words():
            word = "*".join(str(s) for s in w) or "1"
            parts.append(f"({self._terms[w]}) {word}")
        return " + ".join(parts)

    def __repr__(self):
        return f"FreePoly({str(self)})"


def _t(level: int, a: int, b: int) -> FreePoly:
    """``T^(level)_ab`` with ``T^(0) = delta`` and negative levels zero."""
    if level < 0:
        return FreePoly()
    if level == 0:
        return FreePoly.constant(1) if a == b else FreePoly()
    return FreePoly.symbol(GenSymbol(level, a, b))


# ---------------------------------------------------------------------------
# relation extraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Relation:
    """One extracted identity ``poly = 0``.

    ``i, j`` give the coefficient of ``u^-i v^-j`` and ``entry`` the
    matrix entry ``((a, b), (c, d))`` of ``S(u, v)``.
    """

    i: int
    j: int
    entry: tuple
    poly: FreePoly = field(compare=False)

    @property
    def label(self) -> str:
        (a, b), (c, d) = self.entry
        return f"u^{-self.i} v^{-self.j} [{a},{b};{c},{d}]"


@dataclass(frozen=True)
class RelationSet:
    relations: tuple
    i_max: int
    j_max: int
    x: Scalar

    @property
    def truncation(self) -> int:
        return max(self.i_max, self.j_max) + 2

    def __len__(self):
        return len(self.relations)

    def __iter__(self):
        return iter(self.relations)

    def get(self, i: int, j: int, entry) -> Relation | None:
        for r in self.relations:
            if r.i == i and r.j == j and r.entry == tuple(entry):
                return r
        return None

    def to_json(self) -> dict:
        return {
            "i_max": self.i_max,
            "j_max": self.j_max,
            "x": str(self.x),
            "count": len(self.relations),
            "relations": [
                {"label": r.label, "i": r.i, "j": r.j,
                 "entry": [list(r.entry[0]), list(r.entry[1])],
                 "terms": r.poly.to_json()}
                for r in self.relations
            ],
        }


def _rcheck_monomials(x: Scalar) -> dict:
    """``R(u - v)`` split into ``u^p v^q`` coefficient matrices."""
    r = build_rcheck(5, x)
    c0, c1, c2 = r.coefficients()
    return {(2, 0): c2, (1, 1): c2 * Scalar(-2), (0, 2): c2,
            (1, 0): c1, (0, 1): -c1, (0, 0): c0}


def _pair(k: int) -> tuple:
    return AUX_LABELS[k // 5], AUX_LABELS[k % 5]


def expand_rtt(i_max: int, j_max: int, x=1) -> RelationSet:
    """Extract every nonzero coefficient of ``u^-i v^-j`` in ``S(u, v)``.

    ``i`` runs over ``-1 .. i_max`` and ``j`` over ``-1 .. j_max``; the
    ``i = -1`` (or ``j = -1``) coefficients are the leading ones and carry
    the level-1 commutation relations.  Each coefficient only involves
    symbols up to level ``max(i, j) + 2``, so nothing is truncated.
    Relations are normalized with :meth:`FreePoly.normalized`.
    """
    if i_max < 1 or j_max < 1:
        raise ValueError("i_max and j_max must be at least 1")
    x = as_scalar(x)
    if not x:
        raise ValueError("x must be nonzero")
    mono = _rcheck_monomials(x)
    rows = {pq: {} for pq in mono}
    cols = {pq: {} for pq in mono}
    for pq, m in mono.items():
        for (r, c), v in m.items():
            rows[pq].setdefault(r, []).append((c, v))
            cols[pq].setdefault(c, []).append((r, v))
    xpow = {}

    def xp(k):
        if k not in xpow:
            xpow[k] = x ** k
        return xpow[k]

    def sym(level, a, b):
        # word and weight of T^(level)_ab; None for zero
        if level == 0:
            return ((), 1) if a == b else None
        return ((GenSymbol(level, a, b),), 1)

    out = []
    for i in range(-1, i_max + 1):
        for j in range(-1, j_max + 1):
            for row, col in product(range(25), repeat=2):
                (a, b), (c, d) = _pair(row), _pair(col)
                acc = {}

                def add(t1, t2, coeff):
                    if t1 is None or t2 is None:
                        return
                    w = t1[0] + t2[0]
                    s = acc.get(w, ZERO) + coeff
                    if s:
                        acc[w] = s
                    else:
                        acc.pop(w, None)

                for (p, q) in mono:
                    n, m = i + p, j + q
                    if n < 0 or m < 0:
                        continue
                    w = xp(n + m)
                    for k, v in rows[(p, q)].get(row, ()):
                        e, f = _pair(k)
                        add(sym(n, e, c), sym(m, f, d), v * w)
                    for k, v in cols[(p, q)].get(col, ()):
                        e, f = _pair(k)
                        add(sym(m, a, e), sym(n, b, f), -(v * w))
                if acc:
                    poly = FreePoly()
                    poly._terms = acc
                    out.append(Relation(i, j, ((a, b), (c, d)), poly.normalized()))
    return RelationSet(tuple(out), i_max, j_max, x)


def _delta(a, b) -> int:
    return 1 if a == b else 0


def _comm(p: FreePoly, q: FreePoly) -> FreePoly:
    return p * q - q * p


_KIND_ALIASES = {"4.3": "general", "4.4": "left", "4.5": "right"}


def paper_relation(kind: str, n: int, m: int, indices) -> FreePoly:
    """Hand-written RTT component identities, as polynomials asserted zero.

    ``kind`` is ``"general"`` (any ``(n, m)``), ``"left"`` (the
    ``[T^(1), T^(m)]`` family; ``n`` ignored) or ``"right"`` (the
    ``[T^(n), T^(1)]`` family; ``m`` ignored); the table identifiers
    ``"4.3"``, ``"4.4"`` and ``"4.5"`` are accepted as aliases.  Repeated
    inner labels are summed over the five aux labels.

    The general family at ``n = -1`` coincides with the left family, and
    it equals the engine coefficient of ``u^-n v^-m`` at entry
    ``((a, b), (c, d))``.
    """
    a, b, c, d = indices
    t = _t
    kind = _KIND_ALIASES.get(str(kind), str(kind))
    if kind == "left":
        return (_comm(t(1, b, c), t(m, a, d))
                + t(m, -c, d) * _delta(a, -b)
                - t(m, a, -b) * _delta(c, -d)
                - t(m, b, d) * _delta(a, c)
                + t(m, a, c) * _delta(b, d))
    if kind == "right":
        return (_comm(t(n, b, c), t(1, a, d))
                + t(n, b, -a) * _delta(c, -d)
                - t(n, -d, c) * _delta(a, -b)
                - t(n, b, d) * _delta(a, c)
                + t(n, a, c) * _delta(b, d))
    if kind != "general":
        raise ValueError(f"unknown relation kind {kind!r}")
    three_half = Scalar(Fraction(3, 2))
    p = (_comm(t(n + 2, b, c), t(m, a, d))
         - _comm(t(n + 1, b, c), t(m + 1, a, d)) * 2
         + _comm(t(n, b, c), t(m + 2, a, d)))
    if a == -b:
        for i in AUX_LABELS:
            p = p + t(n + 1, i, c) * t(m, -i, d) - t(n, i, c) * t(m + 1, -i, d)
    if c == -d:
        for i in AUX_LABELS:
            p = p + t(m + 1, a, i) * t(n, b, -i) - t(m, a, i) * t(n + 1, b, -i)
    p = p - (_comm(t(n + 1, b, c), t(m, a, d)) - _comm(t(n, b, c), t(m + 1, a, d))) * three_half
    p = (p - t(n + 1, a, c) * t(m, b, d) + t(n, a, c) * t(m + 1, b, d)
         + t(m, a, c) * t(n + 1, b, d) - t(m + 1, a, c) * t(n, b, d))
    p = p + (t(n, a, c) * t(m, b, d) - t(m, a, c) * t(n, b, d)) * three_half
    return p


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LaxRep:
    """Concrete matrices for every ``T^(n)_ab`` with ``1 <= n <= max_level``."""

    quantum_dim: int
    max_level: int
    assign: dict = field(repr=False)
    description: str = ""

    def matrix(self, s: GenSymbol) -> Matrix:
        try:
            return self.assign[s]
        except KeyError:
            raise UnassignedSymbolError(f"symbol {s} is not assigned") from None

    def level_blocks(self, n: int) -> dict:
        return {(a, b): self.assign[GenSymbol(n, a, b)] for a in AUX_LABELS for b in AUX_LABELS}

    def scaled(self, level: int, factor) -> "LaxRep":
        """Copy with one level multiplied by ``factor`` (a mutation helper)."""
        f = as_scalar(factor)
        new = {s: (m * f if s.level == level else m) for s, m in self.assign.items()}
        return LaxRep(self.quantum_dim, self.max_level, new, self.description + f" (T{level} x {f})")


def _identity_blocks(q: int) -> dict:
    eye, zero = Matrix.identity(q), Matrix.zeros(q)
    return {(a, b): (eye if a == b else zero) for a in AUX_LABELS for b in AUX_LABELS}


def _site_levels(x: Scalar, theta: Scalar) -> list:
    """Aux blocks of ``T^(0..2)`` for ``u^-2 P R(u - theta)``."""
    blocks = build_blocks(5)
    P, A, I = blocks.P, blocks.A, blocks.I
    K = A - P - I * Scalar(Fraction(3, 2))
    t1 = I * (Scalar(-2) * theta / x) + K
    t2 = I * (theta * theta / (x * x)) - K * (theta / x) + P * Scalar(Fraction(3, 2))
    out = [_identity_blocks(5)]
    for t in (t1, t2):
        lv = {}
        for a in AUX_LABELS:
            for b in AUX_LABELS:
                ents = {}
                for al in range(5):
                    for be in range(5):
                        v = t[_POS[a] * 5 + al, _POS[b] * 5 + be]
                        if v:
                            ents[(al, be)] = v
                lv[(a, b)] = Matrix.from_entries((5, 5), ents)
        out.append(lv)
    return out


def _aux_product(x_levels: list, y_levels: list, qx: int, qy: int) -> list:
    """Level expansion of the aux-space product of two transfer matrices."""
    out = []
    q = qx * qy
    for n in range(len(x_levels) + len(y_levels) - 1):
        acc = {(a, b): Matrix.zeros(q) for a in AUX_LABELS for b in AUX_LABELS}
        for n1 in range(len(x_levels)):
            n2 = n - n1
            if not 0 <= n2 < len(y_levels):
                continue
            X, Y = x_levels[n1], y_levels[n2]
            for a, b, c in product(AUX_LABELS, repeat=3):
                xa, yb = X[(a, c)], Y[(c, b)]
                if xa.is_zero() or yb.is_zero():
                    continue
                acc[(a, b)] = acc[(a, b)] + kron(xa, yb)
        out.append(acc)
    return out


def _rep_from_levels(levels: list, q: int, max_level: int | None, desc: str) -> LaxRep:
    degree = len(levels) - 1
    max_level = max(degree + 1, 3) if max_level is None else max_level
    zero = Matrix.zeros(q)
    assign = {}
    for n in range(1, max_level + 1):
        blocks = levels[n] if n <= degree else None
        for a in AUX_LABELS:
            for b in AUX_LABELS:
                assign[GenSymbol(n, a, b)] = blocks[(a, b)] if blocks else zero
    return LaxRep(q, max_level, assign, desc)


def build_lax(x=1, theta=0, max_level: int | None = None) -> LaxRep:
    """Single-site representation ``T(u) = u^-2 P R(u - theta)``.

    The expansion in ``x/u`` stops at level 2; higher levels are zero.
    """
    x, theta = as_scalar(x), as_scalar(theta)
    if not x:
        raise ValueError("x must be nonzero")
    return _rep_from_levels(_site_levels(x, theta), 5, max_level,
                            f"lax x={x} theta={theta}")


def build_monodromy(x=1, thetas=(0, 1), max_level: int | None = None) -> LaxRep:
    """Ordered aux-space product of single-site Lax operators.

    Site ``k`` acts on the ``k``-th tensor factor of ``(C^5)^(x L)``; the
    expansion is a polynomial of degree ``2 L`` in ``x/u``.
    """
    x = as_scalar(x)
    thetas = [as_scalar(t) for t in thetas]
    if not thetas:
        raise ValueError("at least one site is required")
    if not x:
        raise ValueError("x must be nonzero")
    levels = _site_levels(x, thetas[0])
    q = 5
    for th in thetas[1:]:
        levels = _aux_product(levels, _site_levels(x, th), q, 5)
        q *= 5
    desc = f"monodromy x={x} thetas=({', '.join(str(t) for t in thetas)})"
    return _rep_from_levels(levels, q, max_level, desc)


# ---------------------------------------------------------------------------
# components
# ---------------------------------------------------------------------------

# (name, plus-entry, minus-entry): name = (T_plus +- T_minus) / 2
_PAIRS_46 = (
    ("3", "E", (2, 2), (-2, -2)),
    ("+", "U", (2, 1), (-1, -2)),
    ("+", "E", (2, 0), (0, -2)),
    ("+", "V", (2, -1), (1, -2)),
    ("-", "U", (1, 2), (-2, -1)),
    ("3", "F", (1, 1), (-1, -1)),
    ("+", "F", (1, 0), (0, -1)),
    ("-", "E", (0, 2), (-2, 0)),
    ("-", "F", (0, 1), (-1, 0)),
    ("-", "V", (-1, 2), (-2, 1)),
)
_SINGLES_46 = (("Y+", (1, -1)), ("Y-", (-1, 1)), ("X-", (-2, 2)), ("X+", (2, -2)),
               ("I0", (0, 0)))

COMPONENT_NAMES = tuple(
    sorted([base + sub for sub, base, _, _ in _PAIRS_46]
           + [base + "t" + sub for sub, base, _, _ in _PAIRS_46]
           + [n for n, _ in _SINGLES_46]))


@dataclass(frozen=True)
class ComponentSet:
    """Named combinations of the 25 entries of ``T^(n)``.

    Names: ``E3, E+, E-, F3, F+, F-, U+-, V+-`` (differences), the tilde
    versions ``Et3, Et+, ...`` (sums), ``X+-, Y+-`` and ``I0``.
    """

    level: int
    ops: dict = field(repr=False)

    def __getitem__(self, name):
        return self.ops[name]

    def reconstruct(self) -> dict:
        """Aux blocks rebuilt from the components."""
        out = {}
        for sub, base, plus, minus in _PAIRS_46:
            diff, tsum = self.ops[base + sub], self.ops[base + "t" + sub]
            out[plus] = tsum + diff
            out[minus] = tsum - diff
        for name, pos in _SINGLES_46:
            out[pos] = self.ops[name]
        return out


def extract_components(rep: LaxRep, n: int) -> ComponentSet:
    if not 1 <= n <= rep.max_level:
        raise ValueError(f"level {n} outside 1..{rep.max_level}")
    g = rep.level_blocks(n)
    half = Scalar(Fraction(1, 2))
    ops = {}
    for sub, base, plus, minus in _PAIRS_46:
        ops[base + sub] = (g[plus] - g[minus]) * half
        ops[base + "t" + sub] = (g[plus] + g[minus]) * half
    for name, pos in _SINGLES_46:
        ops[name] = g[pos]
    return ComponentSet(n, ops)


class _ComponentCache:
    """Lazy per-level component lookup for corpus evaluation."""

    def __init__(self, rep: LaxRep):
        self.rep = rep
        self.levels = {}

    def __call__(self, name: str, level: int):
        if level not in self.levels:
            if level > self.rep.max_level:
                raise UnassignedSymbolError(
                    f"level {level} exceeds max_level {self.rep.max_level}")
            self.levels[level] = extract_components(self.rep, level)
        return self.levels[level][name]


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelationResult:
    label: str
    ok: bool
    witness: dict | None = None


def eval_relations(rs: RelationSet, rep: LaxRep) -> list:
    """Substitute ``rep`` into every relation; exact residuals.

    Raises
    ------
    UnassignedSymbolError
        If a relation uses a symbol above ``rep.max_level``.
    """
    cache = {(): Matrix.identity(rep.quantum_dim)}

    def word_value(w):
        if w not in cache:
            if len(w) == 1:
                cache[w] = rep.matrix(w[0])
            else:
                cache[w] = word_value(w[:-1]) @ word_value(w[-1:])
        return cache[w]

    out = []
    for r in rs:
        total = None
        for w, c in r.poly.terms.items():
            term = word_value(w) * c
            total = term if total is None else total + term
        ok = total.is_zero()
        wit = None
        if not ok:
            (i, j), v = next(iter(total.items()))
            wit = {"row": i, "col": j, "value": str(v)}
        out.append(RelationResult(r.label, ok, wit))
    return out


CONSTRAINT_TABLES = ("4.8", "4.10", "4.11", "4.12")


def check_constraints(rep: LaxRep, n: int = 2, tables=CONSTRAINT_TABLES) -> list:
    """Level-1, level-2, constraint and iterative identities at ``n``.

    Returns a list of :class:`~yso5.relations.IdentityResult`.
    """
    if rep.max_level < n + 1:
        raise ValueError(
            f"max_level {rep.max_level} is too small; level {n + 1} is needed")
    look = _ComponentCache(rep)
    out = []
    for t in tables:
        out.extend(rel.check_entries(rel.entries_for(t), look, n=n))
    return out


def component_lookup(rep: LaxRep):
    """Callable ``(name, level) -> Matrix`` over cached component sets."""
    return _ComponentCache(rep)
