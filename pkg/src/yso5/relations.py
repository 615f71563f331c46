"""Relation corpus in Cartan-Weyl notation and a small evaluator for it.

Each corpus entry is a chain of equalities written in a compact text
form, for example ``"[E3^1,U±^1] = ±U±^1"``.  The grammar is

* symbols ``E3``, ``E+``, ``E-``, ``Et3`` (tilde), ..., ``X±``, ``Y±``, ``I0``
  followed by ``^level`` where the level is an integer, ``n`` or ``{n+1}``;
* ``[a,b]`` is a commutator and ``{a,b}`` an anticommutator;
* juxtaposition is an operator product, ``(...)`` groups;
* coefficients are integers or fractions such as ``1/4``;
* ``±``/``∓`` give an upper and a lower instance, and ``α`` ranges over
  ``+``, ``-`` and ``3``.

The corpus lives in ``data/relations.json`` together with the line of
the reference text each entry was transcribed from.  Entries corrected
during transcription keep their printed form under ``printed``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .algebra_core import Scalar, Sqrt2Scaled

__all__ = [
    "RelationEntry",
    "load_corpus",
    "entries_for",
    "expand_variants",
    "parse",
    "evaluate",
    "instances",
    "CORPUS_VERSION",
]

_SYMBOL = r"(?:[EFUVXY]t?[3+\-]|I0)\^(?:\d+|n|\{n\+1\})"
_TOKEN = re.compile(r"\s*(" + _SYMBOL + r"|\d+/\d+|\d+|[\[\]{}(),+\-])")


@dataclass(frozen=True)
class RelationEntry:
    """One transcribed line of the corpus."""

    id: str
    table: str
    line: int
    expr: str
    printed: str | None = None
    erratum: str | None = None


@lru_cache(maxsize=None)
def _raw_corpus() -> dict:
    text = resources.files(__package__).joinpath("data/relations.json").read_text("utf-8")
    return json.loads(text)


def load_corpus() -> tuple:
    """All corpus entries in file order."""
    return tuple(RelationEntry(**e) for e in _raw_corpus()["entries"])


CORPUS_VERSION = _raw_corpus()["version"]


def entries_for(table: str) -> tuple:
    """Entries of one table, for example ``"30"`` or ``"4.11"``."""
    out = tuple(e for e in load_corpus() if e.table == str(table))
    if not out:
        raise KeyError(f"unknown relation table {table!r}")
    return out


def expand_variants(expr: str) -> list:
    """Expand ``α`` and ``±``/``∓`` into concrete ``(tag, expr)`` pairs."""
    outs = [expr]
    if "α" in expr:
        outs = [expr.replace("α", a) for a in ("+", "-", "3")]
    res = []
    for e in outs:
        if "±" in e or "∓" in e:
            res.append(("upper", e.replace("±", "+").replace("∓", "-")))
            res.append(("lower", e.replace("±", "-").replace("∓", "+")))
        else:
            res.append(("", e))
    if "α" in expr:
        # keep the alpha value visible in the tag
        tags = ("+", "-", "3")
        per = len(res) // 3
        res = [(f"alpha={tags[i // per]}" + (f",{t}" if t else ""), e)
               for i, (t, e) in enumerate(res)]
    return res


def _split_top(expr: str) -> list:
    depth = 0
    parts, cur = [], []
    for ch in expr:
        if ch in "[{(":
            depth += 1
        elif ch in "]})":
            depth -= 1
        if ch == "=" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def instances(expr: str) -> list:
    """Concrete ``(tag, lhs, rhs)`` identities encoded by one entry.

    A chain ``A = B = C`` gives ``A = B`` and ``C = B``.
    """
    out = []
    for tag, e in expand_variants(expr):
        parts = _split_top(e)
        if len(parts) < 2:
            raise ValueError(f"no '=' in relation {expr!r}")
        out.append((tag, parts[0], parts[1]))
        for extra in parts[2:]:
            out.append((tag, extra, parts[1]))
    return out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _tokenize(text: str) -> list:
    pos, toks = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot tokenize {text[pos:]!r}")
        toks.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def eat(self, want=None):
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise ValueError(f"expected {want!r}, got {tok!r}")
        self.i += 1
        return tok

    def expr(self):
        terms = []
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.eat() == "-" else 1
        terms.append((sign, self.term()))
        while self.peek() in ("+", "-"):
            sign = -1 if self.eat() == "-" else 1
            terms.append((sign, self.term()))
        return ("sum", tuple(terms))

    def term(self):
        coef = Fraction(1)
        tok = self.peek()
        if tok is not None and tok[0].isdigit() and tok != "0":
            coef = Fraction(self.eat())
        factors = []
        while self.peek() is not None and (self.peek() in ("[", "{", "(", "0")
                                           or "^" in self.peek()):
            factors.append(self.factor())
        if not factors:
            if coef != 1 or tok is None:
                raise ValueError("bare coefficient without operator")
            raise ValueError(f"unexpected token {tok!r}")
        return (coef, tuple(factors))

    def factor(self):
        tok = self.eat()
        if tok == "0":
            return ("zero",)
        if tok == "(":
            inner = self.expr()
            self.eat(")")
            return inner
        if tok in ("[", "{"):
            a = self.expr()
            self.eat(",")
            b = self.expr()
            self.eat("]" if tok == "[" else "}")
            return ("com" if tok == "[" else "acom", a, b)
        name, level = tok.split("^")
        return ("sym", name, level.strip("{}"))


@lru_cache(maxsize=4096)
def parse(text: str):
    """Parse one side of an identity into a nested tuple tree."""
    p = _Parser(_tokenize(text))
    node = p.expr()
    if p.peek() is not None:
        raise ValueError(f"trailing tokens in {text!r}: {p.toks[p.i:]}")
    return node


def symbols(node) -> set:
    """Set of ``(name, level)`` pairs used in a parsed tree."""
    kind = node[0]
    if kind == "sym":
        return {(node[1], node[2])}
    if kind == "sum":
        out = set()
        for _, (_, fs) in node[1]:
            for f in fs:
                out |= symbols(f)
        return out
    if kind in ("com", "acom"):
        return symbols(node[1]) | symbols(node[2])
    return set()


def resolve_level(level: str, n: int | None) -> int:
    if level.isdigit():
        return int(level)
    if n is None:
        raise ValueError(f"level {level!r} needs a value of n")
    if level == "n":
        return n
    if level == "n+1":
        return n + 1
    raise ValueError(f"bad level {level!r}")


def evaluate(node, lookup, n: int | None = None):
    """Evaluate a parsed tree.

    ``lookup(name, level)`` must return an operator (plain or
    :class:`Sqrt2Scaled`).  Zero is returned as ``None``.
    """
    kind = node[0]
    if kind == "zero":
        return None
    if kind == "sym":
        return Sqrt2Scaled.lift(lookup(node[1], resolve_level(node[2], n)))
    if kind in ("com", "acom"):
        a = evaluate(node[1], lookup, n)
        b = evaluate(node[2], lookup, n)
        if a is None or b is None:
            return None
        return a.commutator(b) if kind == "com" else a.anticommutator(b)
    total = None
    for sign, (coef, factors) in node[1]:
        prod = None
        for f in factors:
            v = evaluate(f, lookup, n)
            if v is None:
                prod = None
                break
            prod = v if prod is None else prod @ v
        if prod is None:
            continue
        prod = prod * Scalar(sign * coef)
        total = prod if total is None else total + prod
    return total


def identity_holds(lhs, rhs) -> bool:
    """Exact comparison of two evaluated sides (``None`` is zero)."""
    if lhs is None and rhs is None:
        return True
    if lhs is None:
        return rhs.is_zero()
    if rhs is None:
        return lhs.is_zero()
    return lhs.equals(rhs)


def residual(lhs, rhs):
    """``lhs - rhs`` with ``None`` for zero."""
    if rhs is None:
        return lhs
    if lhs is None:
        return -rhs
    return lhs - rhs


@dataclass(frozen=True)
class IdentityResult:
    """Outcome of one concrete identity from the corpus."""

    entry_id: str
    table: str
    line: int
    tag: str
    lhs: str
    rhs: str
    ok: bool
    witness: dict | None = None
    erratum: str | None = None
    printed: bool = False


def witness_of(value) -> dict | None:
    """First nonzero entry of a residual, in a JSON-friendly form."""
    if value is None or value.is_zero():
        return None
    op = value.op if isinstance(value, Sqrt2Scaled) else value
    (i, j), v = next(iter(op.items()))
    out = {"row": i, "col": j, "value": str(v)}
    if isinstance(value, Sqrt2Scaled) and value.power:
        out["sqrt2_power"] = value.power
    return out


def check_entries(entries, lookup, n: int | None = None, use_printed: bool = False) -> list:
    """Evaluate corpus entries against ``lookup``.

    With ``use_printed`` the printed form of corrected entries is used
    instead of the corrected one, which is how errata are demonstrated.
    """
    out = []
    for e in entries:
        text = e.printed if (use_printed and e.printed) else e.expr
        for tag, lhs_t, rhs_t in instances(text):
            lhs = evaluate(parse(lhs_t), lookup, n)
            rhs = evaluate(parse(rhs_t), lookup, n)
            ok = identity_holds(lhs, rhs)
            out.append(IdentityResult(
                e.id, e.table, e.line, tag, lhs_t, rhs_t, ok,
                None if ok else witness_of(residual(lhs, rhs)),
                e.erratum, bool(use_printed and e.printed)))
    return out
