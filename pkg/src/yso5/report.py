"""Suite orchestration and machine-readable reports."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

from . import __version__
from .algebra_core import Scalar
from .drinfeld import (CW_TABLES, check_cw_tables, check_drinfeld, check_level2_covariance,
                       check_serre, lax_pair)
from .fock_chain import ChainConfig, build_chain, verify_chain
from .relations import witness_of
from .results import Outcome
from .rmatrix import build_rcheck, default_grid, unitarity_check, ybe_check
from .rtt_engine import (AUX_LABELS, build_lax, build_monodromy, check_constraints,
                         eval_relations, expand_rtt, paper_relation)
from .so5_rep import build_spinor_generators, build_vector_generators, check_so5_relations

__all__ = [
    "SCHEMA",
    "CheckResult",
    "RunReport",
    "from_outcomes",
    "suite_so5",
    "suite_ybe",
    "suite_rtt",
    "suite_drinfeld",
    "suite_fock",
    "SUITES",
]

SCHEMA = "yso5-report/1"
STATUSES = ("pass", "fail", "measured")


@dataclass(frozen=True)
class CheckResult:
    """One reported check; ``fail`` always carries a witness."""

    suite: str
    check: str
    ref: str
    status: str
    witness: dict | None = None
    metrics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"status must be one of {STATUSES}, got {self.status!r}")
        if self.status == "fail" and not self.witness:
            raise ValueError(f"failed check {self.suite}/{self.check} has no witness")

    def to_json(self) -> dict:
        out = {"suite": self.suite, "check": self.check, "ref": self.ref,
               "status": self.status}
        if self.witness:
            out["witness"] = _jsonable(self.witness)
        if self.metrics:
            out["metrics"] = _jsonable(self.metrics)
        return out


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, Scalar):
        return str(value)
    if value is None or isinstance(value, (bool, int, str)):
        return value
    return str(value)


def from_outcomes(suite: str, outcomes) -> list:
    out = []
    for o in outcomes:
        if o.ok is None:
            status = "measured"
        elif o.ok:
            status = "pass"
        else:
            status = "fail"
        witness = o.witness
        if status == "fail" and not witness:
            witness = {"note": "no entry-level witness available"}
        out.append(CheckResult(suite, o.check, o.ref, status, witness, dict(o.metrics)))
    return out


@dataclass
class RunReport:
    """Ordered results plus a configuration echo."""

    config: dict
    results: list = field(default_factory=list)
    tool_version: str = __version__

    def add(self, results) -> None:
        self.results.extend(results)

    def ordered(self) -> list:
        return sorted(self.results, key=lambda r: (r.suite, r.check))

    def summary(self) -> dict:
        counts = {}
        for r in self.results:
            s = counts.setdefault(r.suite, {k: 0 for k in STATUSES})
            s[r.status] += 1
        total = {k: sum(c[k] for c in counts.values()) for k in STATUSES}
        return {"suites": {k: counts[k] for k in sorted(counts)}, "total": total}

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "tool_version": self.tool_version,
            "config": _jsonable(self.config),
            "summary": self.summary(),
            "results": [r.to_json() for r in self.ordered()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False, ensure_ascii=False) + "\n"

    def to_markdown(self, max_failures: int = 20) -> str:
        summ = self.summary()
        lines = [f"# yso5 report ({SCHEMA}, version {self.tool_version})", ""]
        if self.config:
            lines.append("## Configuration")
            lines.append("")
            for k, v in sorted(_jsonable(self.config).items()):
                lines.append(f"- {k}: {v}")
            lines.append("")
        lines += ["## Summary", "", "| suite | pass | fail | measured |", "|---|---|---|---|"]
        for name, c in summ["suites"].items():
            lines.append(f"| {name} | {c['pass']} | {c['fail']} | {c['measured']} |")
        t = summ["total"]
        lines.append(f"| total | {t['pass']} | {t['fail']} | {t['measured']} |")
        lines.append("")
        ordered = self.ordered()
        fails = [r for r in ordered if r.status == "fail"]
        if fails:
            lines += ["## Failures", ""]
            for r in fails[:max_failures]:
                lines.append(f"- {r.suite} / {r.check}: {json.dumps(_jsonable(r.witness))}")
            if len(fails) > max_failures:
                lines.append(f"- ... {len(fails) - max_failures} more")
            lines.append("")
        measured = [r for r in ordered if r.status == "measured" or "fitted_lambda" in r.metrics]
        if measured:
            lines += ["## Measured", ""]
            for r in measured:
                lines.append(f"- {r.suite} / {r.check}: {json.dumps(_jsonable(r.metrics))}")
            lines.append("")
        lines.append("Result: " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _label(p):
    return f"{p[0]}{p[1]}"


def suite_so5() -> list:
    """so(5) closure and the level-1 Cartan-Weyl table in both representations."""
    out = []
    for gs in (build_spinor_generators(), build_vector_generators()):
        outs = [Outcome(f"{gs.rep}:bracket:{_label(p)},{_label(q)}", ok, "so5.bracket",
                        None if ok else witness_of(res))
                for (p, q), ok, res in check_so5_relations(gs)]
        outs += [Outcome(f"{gs.rep}:{o.check}", o.ok, o.ref, o.witness, o.metrics)
                 for o in check_cw_tables(gs, "30")]
        out += from_outcomes("so5", outs)
    return out


def suite_ybe(N: int = 5, x=1, grid_size: int = 7) -> list:
    """Yang-Baxter certificate and unitarity of the braid R-matrix."""
    r = build_rcheck(N, x)
    rep = ybe_check(r, default_grid(grid_size))
    tag = f"N={N},x={r.x}"
    outs = [Outcome(f"ybe:{tag}", rep.ok, "rmatrix.ybe", rep.witness, {"points": rep.points})]
    u = unitarity_check(r)
    outs.append(Outcome(f"unitarity:{tag}", u.ok, "rmatrix.unitarity", u.witness,
                        {"coefficients_u0_to_u4": [str(c) for c in u.coefficients]}))
    return from_outcomes("ybe", outs)


def _rtt_rep(x, thetas):
    if len(thetas) == 1:
        return build_lax(x, thetas[0])
    return build_monodromy(x, thetas)


def suite_rtt(levels: int = 2, x=1, thetas=(0, 1)) -> list:
    """Extracted relations in a representation, hand-written families, constraints."""
    rs = expand_rtt(levels, levels, x)
    rep = _rtt_rep(x, thetas)
    outs = []
    by_order = {}
    for rel, res in zip(rs, eval_relations(rs, rep)):
        by_order.setdefault((rel.i, rel.j), []).append(res)
    for (i, j), results in sorted(by_order.items()):
        bad = [r for r in results if not r.ok]
        wit = None
        if bad:
            wit = dict(bad[0].witness, relation=bad[0].label)
        outs.append(Outcome(f"relations:u^{-i} v^{-j}", not bad, "rtt.relations", wit,
                            {"relations": len(results), "nonzero": len(bad)}))
    outs.append(Outcome("relations:count", None, "rtt.relations", None,
                        {"count": len(rs), "i_max": levels, "j_max": levels}))
    outs += _symbolic_families(rs, levels)
    if rep.max_level >= 3:
        for r in check_constraints(rep, n=2):
            name = f"constraints:{r.entry_id}" + (f"[{r.tag}]" if r.tag else "")
            outs.append(Outcome(name + f":{r.lhs}", r.ok, f"corpus:{r.entry_id}", r.witness,
                                {"line": r.line}))
    return from_outcomes("rtt", _dedupe(outs))


def _dedupe(outs):
    seen = {}
    res = []
    for o in outs:
        k = seen.get(o.check, 0) + 1
        seen[o.check] = k
        res.append(o if k == 1 else Outcome(f"{o.check}#{k}", o.ok, o.ref, o.witness, o.metrics))
    return res


def _symbolic_families(rs, levels) -> list:
    """Hand-written component families against the engine, for all index tuples."""
    table = {(r.i, r.j, r.entry): r.poly for r in rs}
    specs = [("level1-left", "left", -1, m) for m in range(1, levels + 1)]
    specs += [("level1-right", "right", n, -1) for n in range(1, levels + 1)]
    specs += [("general", "general", n, m) for n in range(-1, levels + 1)
              for m in range(-1, levels + 1) if n >= 0 or m >= 0]
    outs = []
    for name, kind, n, m in specs:
        agree, first_bad = 0, None
        for a, b, c, d in product(AUX_LABELS, repeat=4):
            p = paper_relation(kind, n, m, (a, b, c, d))
            eng = table.get((n, m, ((a, b), (c, d))))
            same = (eng is None and p.is_zero()) or (
                eng is not None and not p.is_zero() and p.normalized() == eng)
            agree += same
            if not same and first_bad is None:
                first_bad = {"indices": [a, b, c, d]}
        outs.append(Outcome(f"symbolic:{name}:n={n},m={m}", first_bad is None, "rtt.symbolic",
                            first_bad, {"index_tuples": 625, "agree": agree}))
    return outs


def suite_drinfeld(source: str = "lax", L: int = 2, x=1, thetas=None, c=1, h=None,
                   tables=CW_TABLES, weights=None, allow_large: bool = False) -> list:
    """Drinfel'd relations, Serre relation and Cartan-Weyl tables for one source."""
    if source not in ("lax", "fock"):
        raise ValueError(f"source must be 'lax' or 'fock', got {source!r}")
    rep = None
    if thetas is None:
        thetas = tuple(range(L))
    if source == "lax":
        rep = _rtt_rep(x, thetas)
        yp = lax_pair(rep)
        if h is not None:
            yp = type(yp)(yp.level1, yp.level2, h, yp.description)
    else:
        cfg = ChainConfig(L, c, h, weights, allow_large)
        yp = build_chain(cfg).pair(cfg.h)
    outs = list(check_drinfeld(yp))
    outs += check_level2_covariance(yp)
    outs += check_serre(yp)
    for t in tables:
        t = str(t)
        if t in ("33", "34") and rep is None:
            outs.append(Outcome(f"table{t}:skipped", None, f"corpus:{t}", None,
                                {"note": "table needs an RTT representation"}))
            continue
        outs += check_cw_tables(yp, t, rep)
    return from_outcomes("drinfeld", _dedupe(outs))


def suite_fock(L: int = 2, c=1, h=None, weights=None, allow_large: bool = False) -> list:
    cfg = ChainConfig(L, c, h, weights, allow_large)
    ly = build_chain(cfg)
    return from_outcomes("fock", verify_chain(ly, cfg))


SUITES = ("so5", "ybe", "rtt", "drinfeld", "fock")
