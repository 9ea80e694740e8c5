"""Execution of workspace commands and comparison against expected records."""

from __future__ import annotations

from dataclasses import dataclass, field

from .category import h0, koszul_commutativity_report, opposite, validate_category, validate_functor, z0
from .complexes import cohomology, cohomology_dims
from .constructions import h0_mor_comparison
from .gamma import gamma_algebra, stratifying_check, tor_oracle
from .modules import adjunction_check, regular_bimodule, validate_module, yoneda_check
from .pretr import (cone_functor_check, cone_twisted, exact_closure, hull_category, is_exact,
                    mat_identity, validate_twisted, verify_cone_axioms)
from .quotient import (DrinfeldQuotient, contractibility_report, quotient_cohomology,
                       quotient_filtration_check)
from .report import Report, ValidationError
from .verdier import verdier_oracle
from .workspace import Workspace, WorkspaceError, _matrix, morphism

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


@dataclass
class CommandResult:
    index: int
    cmd: str
    ok: bool
    value: object = None
    checks: list = field(default_factory=list)
    detail: str = ""

    def to_dict(self) -> dict:
        out = {"index": self.index, "cmd": self.cmd, "ok": self.ok, "value": _plain(self.value)}
        if self.checks:
            out["checks"] = self.checks
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class RunReport:
    results: list = field(default_factory=list)
    input_error: str = ""

    @property
    def exit_code(self) -> int:
        if self.input_error:
            return EXIT_INPUT
        return EXIT_OK if all(r.ok for r in self.results) else EXIT_MISMATCH

    def to_dict(self) -> dict:
        out = {"status": self.exit_code, "results": [r.to_dict() for r in self.results]}
        if self.input_error:
            out["input_error"] = self.input_error
        return out

    def text(self) -> str:
        lines = []
        for r in self.results:
            lines.append("[%d] %s: %s  %s" % (r.index, r.cmd, "PASS" if r.ok else "FAIL", _short(r.value)))
            for c in r.checks:
                if not c["ok"]:
                    lines.append("      FAIL %s %s" % (c["name"], c.get("detail", "")))
            if r.detail:
                lines.append("      " + r.detail)
        if self.input_error:
            lines.append("input error: " + self.input_error)
        lines.append("status %d" % self.exit_code)
        return "\n".join(lines)


def _plain(v):
    """JSON/YAML-friendly copy: Fractions as strings, tuple keys joined."""
    from fractions import Fraction
    if isinstance(v, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, Fraction):
        return str(v)
    return v


def _short(v) -> str:
    s = repr(_plain(v))
    return s if len(s) < 160 else s[:157] + "..."


def _norm_key(k):
    if isinstance(k, str):
        try:
            return int(k)
        except ValueError:
            return k
    return k


def _matches(value, expect) -> bool:
    """Exact comparison; dict keys may be written as strings of integers, and zero
    entries of an expected record may be omitted from the computed one."""
    if isinstance(expect, dict) and isinstance(value, dict):
        ev = {_norm_key(k): v for k, v in expect.items()}
        vv = {_norm_key(k): v for k, v in _plain(value).items()}
        keys = set(ev) | set(vv)
        return all(_matches(vv.get(k, 0), ev.get(k, 0)) for k in keys)
    return _plain(value) == expect


def _checks(rep: Report) -> list:
    return [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in rep.checks]


# -- command handlers ----------------------------------------------------------------
# each returns (value, Report or None)

def _cat(ws, p, key="category"):
    c = ws.category(p[key], "command.%s" % key)
    if isinstance(c, DrinfeldQuotient):
        raise WorkspaceError("%r is a dg quotient; only quotient-hom and quotient-cohomology accept it"
                             % (p[key],), "command.%s" % key)
    return c


def cmd_validate(ws: Workspace, p: dict):
    if "category" in p:
        rep = validate_category(_cat(ws, p))
    elif "functor" in p:
        rep = validate_functor(ws.functor(p["functor"]))
    elif "module" in p:
        rep = validate_module(ws.modules[p["module"]])
    elif "algebra" in p:
        from .algebra import validate_algebra
        rep = validate_algebra(ws.algebra(p["algebra"]))
    else:
        raise WorkspaceError("validate needs category, functor, module or algebra")
    return rep.ok, rep


def _kdims(K) -> dict:
    return {"%s,%s" % (x, y): K.dim(x, y) for x in K.objects for y in K.objects if K.dim(x, y)}


def cmd_h0(ws, p):
    return _kdims(h0(_cat(ws, p))), None


def cmd_z0(ws, p):
    return _kdims(z0(_cat(ws, p))), None


def cmd_cohomology(ws, p):
    A = _cat(ws, p)
    h = A.hom(p["x"], p["y"])
    if "degree" in p:
        return {int(p["degree"]): cohomology(h, int(p["degree"]))[0]}, None
    rep = Report("Euler characteristic")
    dims = cohomology_dims(h)
    rep.add("chi = alternating sum of cohomology",
            h.euler_characteristic() == sum((-1) ** (i % 2) * n for i, n in dims.items()))
    return dims, rep


def cmd_tensor(ws, p):
    T = _cat(ws, p)
    rep = validate_category(T)
    rep.extend(koszul_commutativity_report(T))
    return {"%s,%s" % xy: T.dim(*xy) for xy in T.pairs() if T.dim(*xy)}, rep


def cmd_opposite(ws, p):
    A = _cat(ws, p)
    O = opposite(A)
    rep = validate_category(O)
    OO = opposite(O)
    rep.add("op(op(A)) = A", all(OO.dim(*xy) == A.dim(*xy) for xy in A.pairs())
            and all(OO.comp.get(t, {}) == A.comp.get(t, {}) for t in set(A.comp) | set(OO.comp)))
    rep.add("Hom_op(y,x) = Hom(x,y)", all(O.dim(y, x) == A.dim(x, y) for x, y in A.pairs()))
    return rep.ok, rep


def cmd_mor(ws, p):
    M = _cat(ws, p)
    rep = h0_mor_comparison(M, samples=int(p.get("samples", 20)), seed=int(p.get("seed", 0)))
    return rep.ok, rep


def cmd_functor_cat(ws, p):
    C = _cat(ws, p)
    rep = validate_category(C)
    return {"%s,%s" % xy: C.dim(*xy) for xy in C.pairs() if C.dim(*xy)}, rep


def cmd_yoneda(ws, p):
    A = _cat(ws, p)
    M = ws.modules[p["module"]]
    rep = yoneda_check(A, p["object"], M)
    if "other" in p:
        rep.extend(adjunction_check(regular_bimodule(A), M, ws.modules[p["other"]]), "adjunction: ")
    return rep.ok, rep


def cmd_cone(ws, p):
    H = _cat(ws, p)
    T, T2 = H.twisted[p["source"]], H.twisted[p["target"]]
    m = p.get("morphism", "identity")
    f = mat_identity(H.base, T) if m in ("identity", "id") else _matrix(H.base, T, T2, m)
    C, w = cone_twisted(f, T, T2)
    rep = validate_twisted(C)
    rep.extend(verify_cone_axioms(w))
    value = {"entries": [[x, s] for x, s in C.entries],
             "End cohomology": cohomology_dims(w.cat.hom(w.cone, w.cone))}
    return value, rep


def cmd_hull(ws, p):
    H = _cat(ws, p)
    rep = validate_category(H)
    for nm, T in H.twisted.items():
        rep.extend(validate_twisted(T), nm + ": ")
    if p.get("exact"):
        rep.extend(is_exact(H, scope=p.get("scope")))
    return {"%s,%s" % xy: cohomology_dims(H.hom(*xy)) for xy in H.pairs()}, rep


def _exact_data(ws, p):
    H = _cat(ws, p)
    mors = {}
    for lab, (s, t, m) in (p.get("morphisms") or {}).items():
        T, T2 = H.twisted[s], H.twisted[t]
        mors[str(lab)] = (s, t, mat_identity(H.base, T) if m in ("identity", "id") else _matrix(H.base, T, T2, m))
    return exact_closure(H.base, H.twisted, mors)


def cmd_cone_axioms(ws, p):
    E = _exact_data(ws, p)
    rep = Report("cone axioms")
    for lab, w in E.cones.items():
        rep.extend(verify_cone_axioms(w), lab + ": ")
    rep.extend(cone_functor_check(E, samples=int(p.get("samples", 50)), seed=int(p.get("seed", 0))))
    return {"cones": len(E.cones)}, rep


def _qargs(ws, p):
    A = ws.category(p["category"], "command.category")
    if isinstance(A, DrinfeldQuotient):
        if "B" in p:
            raise WorkspaceError("B is fixed by the quotient %r" % (p["category"],), "command.B")
        A, B = A.A, list(A.B)
    else:
        B = [str(b) for b in p.get("B", [])]
    return A, B, p["x"], p["y"], int(p.get("max_length", 3))


def cmd_quotient_hom(ws, p):
    A, B, x, y, N = _qargs(ws, p)
    Q = DrinfeldQuotient(A, B)
    value = {}
    for n in range(N + 1):
        for w in Q.words(x, y, n):
            deg = Q.degree(x, y, w)
            value[deg] = value.get(deg, 0) + 1
    rep = quotient_filtration_check(A, B, x, y, N)
    if B:
        rep.extend(contractibility_report(A, B, min(N, 3)))
    return dict(sorted(value.items())), rep


def cmd_quotient_cohomology(ws, p):
    A, B, x, y, N = _qargs(ws, p)
    degs = p.get("degrees")
    if degs is None:
        degs = [int(p.get("degree", 0))]
    win = int(p.get("window", 3))
    value, traces = {}, []
    for i in degs:
        r = quotient_cohomology(A, B, x, y, int(i), N, window=win)
        value[int(i)] = r.dimension
        traces.append(r.to_dict())
    rep = Report("quotient cohomology")
    for t in traces:
        rep.add("H^%d %s" % (t["degree"], "exact" if t["exact"] else "heuristic"),
                True, t.get("reason", ""))
    return value, rep


def cmd_gamma(ws, p):
    A = ws.algebra(p["algebra"])
    e = A.element(p.get("idempotent", "0"))
    g = gamma_algebra(A, e, int(p.get("depth", 3)))
    rep = g.report()
    return rep.data["cohomology"], rep


def cmd_tor_oracle(ws, p):
    r = ws.resolutions[p["resolution"]]
    dims, rep = tor_oracle(r["ring"], r["M"], r["N"], r["resolution"], int(p.get("depth", 3)))
    return dims, rep


def cmd_stratifying(ws, p):
    A = ws.algebra(p["algebra"])
    v = stratifying_check(A, A.element(p.get("idempotent", "0")), int(p.get("depth", 3)))
    return str(v), None


def cmd_verdier_oracle(ws, p):
    H = _cat(ws, p)
    thick = [str(b) for b in p.get("thick", [])]
    targets = p.get("targets") or {0: p["y"]}
    value, rep = {}, Report("Verdier oracle")
    for i, y in targets.items():
        r = verdier_oracle(H, thick, p["x"], y)
        value[int(i)] = r.dimension
        rep.add("roof diagram filtered for %s" % y, r.filtered, "; ".join(r.issues))
        if p.get("compare_quotient"):
            q = quotient_cohomology(H, thick, p["x"], p["x"], int(i), int(p.get("max_length", 3)))
            rep.add("quotient H^%d matches" % int(i), q.exact and q.dimension == r.dimension,
                    "%d vs %d" % (q.dimension, r.dimension))
    return value, rep


def cmd_corpus(ws, p):
    from .corpus import run_corpus
    out = run_corpus()
    rep = Report("corpus")
    for name, r in out.items():
        rep.add(name, r.exit_code == EXIT_OK, "" if r.exit_code == EXIT_OK else r.text())
    return {k: r.exit_code for k, r in out.items()}, rep


COMMANDS = {
    "validate": cmd_validate, "h0": cmd_h0, "z0": cmd_z0, "cohomology": cmd_cohomology,
    "tensor": cmd_tensor, "opposite": cmd_opposite, "mor": cmd_mor, "functor-cat": cmd_functor_cat,
    "yoneda": cmd_yoneda, "cone": cmd_cone, "hull": cmd_hull, "cone-axioms": cmd_cone_axioms,
    "quotient-hom": cmd_quotient_hom, "quotient-cohomology": cmd_quotient_cohomology,
    "gamma": cmd_gamma, "tor-oracle": cmd_tor_oracle, "stratifying": cmd_stratifying,
    "verdier-oracle": cmd_verdier_oracle, "corpus": cmd_corpus,
}


def run(ws: Workspace, only: str | None = None, overrides: dict | None = None) -> RunReport:
    """Execute the workspace commands in order (optionally only those named ``only``)."""
    report = RunReport()
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    for i, c in enumerate(ws.commands):
        name = c["cmd"]
        if only and name != only:
            continue
        if name not in COMMANDS:
            report.input_error = "command %d: unknown command %r" % (i, name)
            return report
        params = dict(c)
        if "degree" in overrides:
            params.pop("degrees", None)
        params.update(overrides)
        try:
            value, rep = COMMANDS[name](ws, params)
        except (WorkspaceError, KeyError) as exc:
            report.input_error = "command %d (%s): %s" % (i, name, exc)
            return report
        except ValidationError as exc:
            report.results.append(CommandResult(i, name, False, None, _checks(exc.report), str(exc)))
            continue
        except ValueError as exc:
            report.input_error = "command %d (%s): %s" % (i, name, exc)
            return report
        ok = rep.ok if rep is not None else True
        detail = ""
        if "expect" in c:
            if not _matches(value, c["expect"]):
                ok = False
                detail = "expected %r" % (c["expect"],)
        elif value is False:
            ok = False
        report.results.append(CommandResult(i, name, ok, value, _checks(rep) if rep else [], detail))
    return report
