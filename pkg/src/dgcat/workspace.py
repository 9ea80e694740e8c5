"""
Workspace files: a YAML document naming algebras, dg categories, modules,
functors and resolutions, followed by a list of commands.

Schema (all sections optional)::

    field: Q | GF(p)
    algebras:
      A:  {quiver: {vertices: [1, 2], arrows: {a: [1, 2]}}, relations: ["a*b"], bound: 2}
      R:  {basis: [1, t], products: {"t*t": 0}, unit: "1"}
      eAe: {corner: A, idempotent: e1}
    categories:
      D:  {builder: disc, n: 1}
      K:  {builder: unit}
      G:  {builder: dg_algebra, basis: [1, x], degrees: [0, -1], products: {...}, d: {...}}
      T:  {builder: table, objects: [...], homs: {"x,y": {basis: [...], degrees: [...], d: {...}}},
           compose: {"x,y,z": {"g*f": {...}}}}
      T2: {builder: tensor, of: [D, S]}
      O:  {builder: opposite, of: D}
      M:  {builder: mor, of: D, objects: {f: [x, y, delta]}}
      C:  {builder: complexes, algebra: A, complexes: {P: {terms: {0: [e1]}, d: {}}}}
      H:  {builder: hull, base: K, objects: {k: {entries: [["*", 0]]}, C: {cone: [k, k, identity]}}}
      F:  {builder: functor-cat, source: D, target: D, functors: [idD]}
      Q:  {builder: quotient, of: H, B: [C]}   # only for quotient-hom / quotient-cohomology
    functors:
      idD: {identity: D}
    modules:
      Y:  {free: D, object: y}          # or {representable: D, object: x}
    resolutions:
      P:  {algebra: A, idempotent: e1, terms: {0: [e1]}, d: {1: [[b*a]]}, augmentation: [e1],
           period: 3}   # resolution of Ae over eAe; entries are elements of A in eAe
    commands:
      - {cmd: gamma, algebra: A, idempotent: e1, depth: 3, expect: {0: 1, -1: 1}}

Scalars are integers or "n/d" strings.  Morphisms are a basis label, a list of
labels, or a {label: coeff} mapping.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import yaml

from . import category as cat_mod
from .algebra import Algebra, Quiver, algebra_from_table, corner_algebra, path_algebra
from .category import DgCategory, TableBuilder
from .constructions import functor_dg_category, mor_category
from .linalg import Field, axpy
from .modules import ProjectiveComplex, complexes_category, free_module, representable
from .pretr import TwistedObject, cone_twisted, hull_category, hull_vector, mat_identity, suspend_twisted


class WorkspaceError(ValueError):
    """Input error, annotated with the location in the workspace file."""

    def __init__(self, msg: str, where: str = "", line: int | None = None):
        self.where, self.line = where, line
        loc = ""
        if line is not None:
            loc = "line %d: " % line
        if where:
            loc += "%s: " % where
        super().__init__(loc + msg)


@dataclass
class Workspace:
    field: Field
    spec: dict
    algebras: dict = dc_field(default_factory=dict)
    categories: dict = dc_field(default_factory=dict)
    functors: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    alg_modules: dict = dc_field(default_factory=dict)
    resolutions: dict = dc_field(default_factory=dict)
    commands: list = dc_field(default_factory=list)
    lines: dict = dc_field(default_factory=dict)

    def line_of(self, path: str):
        return self.lines.get(path)

    def category(self, name, where=""):
        if name not in self.categories:
            raise WorkspaceError("unknown category %r" % (name,), where, self.lines.get(where))
        return self.categories[name]

    def functor(self, name, where=""):
        if name not in self.functors:
            raise WorkspaceError("unknown functor %r" % (name,), where, self.lines.get(where))
        return self.functors[name]

    def algebra(self, name, where=""):
        if name not in self.algebras:
            raise WorkspaceError("unknown algebra %r" % (name,), where, self.lines.get(where))
        return self.algebras[name]


# -- positions ---------------------------------------------------------------------

def _line_map(text: str) -> dict:
    """Dotted key path -> 1-based line, from the YAML node tree."""
    out: dict = {}
    try:
        root = yaml.compose(text)
    except yaml.YAMLError:
        return out

    def walk(node, path):
        out.setdefault(path, node.start_mark.line + 1)
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                walk(v, "%s.%s" % (path, k.value) if path else str(k.value))
        elif isinstance(node, yaml.SequenceNode):
            for i, v in enumerate(node.value):
                walk(v, "%s[%d]" % (path, i))
    if root is not None:
        walk(root, "")
    return out


# -- element parsing ---------------------------------------------------------------

def morphism(cat: DgCategory, x, y, spec, F: Field | None = None) -> dict:
    """A flat vector of Hom(x, y) from a label, list of labels or {label: coeff}."""
    F = F or cat.F
    n = cat.dim(x, y)
    labels = {cat.basis_label(x, y, k): k for k in range(n)}
    if spec in (None, 0, "0"):
        return {}
    if isinstance(spec, str) and spec in ("identity", "id", "1") and x == y:
        return dict(cat.identity.get(x, {}))
    if isinstance(spec, (str, int)):
        spec = {spec: 1}
    if isinstance(spec, list):
        spec = {s: 1 for s in spec}
    out: dict = {}
    for lab, c in spec.items():
        lab = str(lab)
        if lab not in labels:
            raise KeyError("no basis element %r in Hom(%s, %s); have %s" % (lab, x, y, sorted(labels)))
        axpy(F, out, F(c), {labels[lab]: 1})
    return out


def _coeffs(F: Field, spec) -> dict:
    """{label: coeff} from a label, list, or mapping."""
    if spec in (None, 0, "0"):
        return {}
    if isinstance(spec, (str, int)):
        return {str(spec): F(1)}
    if isinstance(spec, list):
        return {str(s): F(1) for s in spec}
    return {str(k): F(v) for k, v in spec.items() if F(v)}


def _split(key, n: int, where: str):
    parts = [p.strip() for p in str(key).split("," if n != 2 or "," in str(key) else "*")]
    if len(parts) != n:
        raise WorkspaceError("expected %d comma-separated names in %r" % (n, key), where)
    return parts


# -- builders ----------------------------------------------------------------------

def _build_algebra(ws: Workspace, name: str, spec: dict) -> Algebra:
    F = ws.field
    where = "algebras.%s" % name
    if "quiver" in spec:
        q = spec["quiver"]
        verts = [str(v) for v in q.get("vertices", [])]
        arrows = {str(a): (str(st[0]), str(st[1])) for a, st in (q.get("arrows") or {}).items()}
        rels = []
        for r in spec.get("relations") or []:
            rels.append({str(r): 1} if isinstance(r, str) else {str(k): F(v) for k, v in r.items()})
        if "bound" not in spec:
            raise WorkspaceError("quiver presentation needs a nilpotency bound", where, ws.line_of(where))
        A = path_algebra(F, Quiver(verts, arrows), rels, int(spec["bound"]), name=name)
    elif "corner" in spec:
        base = ws.algebra(spec["corner"], where + ".corner")
        A, _ = corner_algebra(base, base.element(spec["idempotent"]), name=name)
    elif "basis" in spec:
        prods = {}
        for key, v in (spec.get("products") or {}).items():
            a, b = _split(key, 2, where + ".products")
            prods[(a, b)] = _coeffs(F, v)
        unit = spec.get("unit")
        if isinstance(unit, dict):
            unit = _coeffs(F, unit)
        A = algebra_from_table(F, [str(b) for b in spec["basis"]], prods, unit=unit, name=name)
    else:
        raise WorkspaceError("algebra needs quiver, basis or corner", where, ws.line_of(where))
    for nm, v in (spec.get("idempotents") or {}).items():
        A.idempotents[str(nm)] = A.element(v)
    return A


def _twisted(ws: Workspace, base: DgCategory, objs: dict, name: str, spec, where: str) -> TwistedObject:
    if isinstance(spec, dict) and "cone" in spec:
        src, tgt, mat = spec["cone"]
        T, T2 = objs[src], objs[tgt]
        f = mat_identity(base, T) if mat in ("identity", "id") else _matrix(base, T, T2, mat)
        C, _ = cone_twisted(f, T, T2, name=name)
        return C
    if isinstance(spec, dict) and "suspend" in spec:
        S, _, _ = suspend_twisted(objs[spec["suspend"]], name=name)
        return S
    if isinstance(spec, dict) and "shift" in spec:
        src = objs[spec["of"]]
        k = int(spec["shift"])
        sign = -1 if k % 2 else 1
        return TwistedObject(base, [(x, s + k) for x, s in src.entries],
                             {ij: {a: sign * c for a, c in v.items()} for ij, v in src.delta.items()}, name=name)
    entries = [(str(e[0]), int(e[1])) for e in spec["entries"]]
    T0 = TwistedObject(base, entries, {}, name=name, check=False)
    delta = _matrix(base, T0, T0, spec.get("delta") or {})
    return TwistedObject(base, entries, delta, name=name)


def _matrix(base: DgCategory, T: TwistedObject, T2: TwistedObject, spec: dict) -> dict:
    out = {}
    for key, v in spec.items():
        i, j = (int(s) for s in str(key).split(","))
        vec = morphism(base, T.entries[j][0], T2.entries[i][0], v)
        if vec:
            out[(i, j)] = vec
    return out


def _build_category(ws: Workspace, name: str, spec: dict) -> DgCategory:
    F = ws.field
    where = "categories.%s" % name
    b = spec.get("builder")
    if b == "disc":
        return cat_mod.disc(int(spec["n"]), F)
    if b == "sphere":
        return cat_mod.sphere(int(spec["n"]), F)
    if b == "unit":
        return cat_mod.unit_category(F, str(spec.get("object", "*")))
    if b == "dg_algebra":
        basis = [str(x) for x in spec["basis"]]
        mult = {}
        for key, v in (spec.get("products") or {}).items():
            g, f = _split(key, 2, where + ".products")
            mult[(g, f)] = _coeffs(F, v)
        d = {str(k): _coeffs(F, v) for k, v in (spec.get("d") or {}).items()}
        unit = _coeffs(F, spec["unit"]) if "unit" in spec else None
        return cat_mod.dg_algebra(F, basis, [int(x) for x in spec["degrees"]], mult, d, unit,
                                  obj=str(spec.get("object", "*")), name=name)
    if b == "table":
        return _explicit_table(ws, name, spec)
    if b == "tensor":
        a, c = spec["of"]
        return cat_mod.tensor(ws.category(a, where), ws.category(c, where))
    if b == "opposite":
        return cat_mod.opposite(ws.category(spec["of"], where))
    if b == "mor":
        A = ws.category(spec["of"], where)
        objs = [(str(lab), str(x), str(y), morphism(A, str(x), str(y), a))
                for lab, (x, y, a) in spec["objects"].items()]
        return mor_category(A, objs, name=name)
    if b == "complexes":
        A = ws.algebra(spec["algebra"], where)
        cxs = {}
        for nm, c in spec["complexes"].items():
            terms = {int(k): [A.element(e) for e in v] for k, v in (c.get("terms") or {}).items()}
            d = {int(k): [[A.element(e) for e in row] for row in rows] for k, rows in (c.get("d") or {}).items()}
            cxs[str(nm)] = ProjectiveComplex(A, terms, d, name=str(nm))
        return complexes_category(A, cxs, name=name)
    if b == "hull":
        base = ws.category(spec["base"], where)
        objs: dict = {}
        for nm, o in spec["objects"].items():
            objs[str(nm)] = _twisted(ws, base, objs, str(nm), o, "%s.objects.%s" % (where, nm))
        return hull_category(base, objs, name=name)
    if b == "functor-cat":
        A = ws.category(spec["source"], where)
        B = ws.category(spec["target"], where)
        fs = {str(f): ws.functor(f, where) for f in spec["functors"]}
        return functor_dg_category(A, B, fs, name=name)
    if b == "quotient":
        from .quotient import DrinfeldQuotient
        A = ws.category(spec["of"], where)
        try:
            return DrinfeldQuotient(A, [str(u) for u in spec.get("B") or []])
        except ValueError as exc:
            raise WorkspaceError(str(exc), where + ".B", ws.line_of(where + ".B"))
    raise WorkspaceError("unknown builder %r" % (b,), where, ws.line_of(where))


def _explicit_table(ws: Workspace, name: str, spec: dict) -> DgCategory:
    F = ws.field
    where = "categories.%s" % name
    objs = [str(o) for o in spec["objects"]]
    B = TableBuilder(F, objs)
    homs = spec.get("homs") or {}
    label_pair = {}
    for key, h in homs.items():
        x, y = _split(key, 2, where + ".homs")
        basis = [str(k) for k in h["basis"]]
        for k in basis:
            if k in label_pair:
                raise WorkspaceError("basis label %r used twice" % k, where + ".homs")
            label_pair[k] = (x, y)
        d = {str(k): _coeffs(F, v) for k, v in (h.get("d") or {}).items()}
        B.set_hom(x, y, basis, [int(t) for t in h["degrees"]], lambda k, d=d: d.get(k, {}))
    comp = {}
    for key, tbl in (spec.get("compose") or {}).items():
        x, y, z = _split(key, 3, where + ".compose")
        for gf, v in tbl.items():
            g, f = (s.strip() for s in str(gf).split("*"))
            comp[(x, y, z, g, f)] = _coeffs(F, v)
    ident = {}
    for o in objs:
        u = (spec.get("identities") or {}).get(o)
        if u is None:
            raise WorkspaceError("missing identity of %r" % o, where + ".identities")
        ident[o] = _coeffs(F, u)
    return B.build(lambda x, y, z, g, f: comp.get((x, y, z, g, f), {}), lambda o: ident[o], name=name)


def _build_functor(ws: Workspace, name: str, spec: dict):
    where = "functors.%s" % name
    if "identity" in spec:
        return cat_mod.identity_functor(ws.category(spec["identity"], where))
    if "images" in spec:
        A = ws.category(spec["source"], where)
        B = ws.category(spec["target"], where)
        objmap = {str(k): str(v) for k, v in spec["objects"].items()}
        imgs = {}
        for key, v in spec["images"].items():
            x, y = _split(key, 2, where + ".images")
            for lab, val in v.items():
                k = [A.basis_label(x, y, i) for i in range(A.dim(x, y))].index(str(lab))
                imgs[(x, y, k)] = morphism(B, objmap[x], objmap[y], val)
        return cat_mod.functor_from_images(A, B, objmap, lambda x, y, k: imgs.get((x, y, k), {}))
    raise WorkspaceError("functor needs identity or images", where, ws.line_of(where))


def _build_module(ws: Workspace, name: str, spec: dict):
    where = "modules.%s" % name
    if "free" in spec:
        return free_module(ws.category(spec["free"], where), str(spec["object"]))
    if "representable" in spec:
        return representable(ws.category(spec["representable"], where), str(spec["object"]))
    raise WorkspaceError("module needs free or representable", where, ws.line_of(where))


def _build_resolution(ws: Workspace, name: str, spec: dict):
    from .gamma import Resolution, corner_modules
    where = "resolutions.%s" % name
    A = ws.algebra(spec["algebra"], where)
    e = A.element(spec["idempotent"])
    R, Ae, eA = corner_modules(A, e)
    emb = Ae.embedding

    def rel(s):
        # ring elements are given as elements of A lying in eAe
        v = A.element(s)
        S = A.corner(e, e)
        if not S.contains(v):
            raise WorkspaceError("%r is not in eAe" % (s,), where)
        basis = corner_algebra(A, e)[1]
        return _coords_in(A.F, basis, v)
    terms = {int(k): [rel(x) for x in v] for k, v in spec["terms"].items()}
    d = {int(k): [[rel(x) for x in row] for row in rows] for k, rows in (spec.get("d") or {}).items()}
    aug = []
    for s in spec["augmentation"]:
        v = A.element(s)
        if not emb.contains(v):
            raise WorkspaceError("%r is not in Ae" % (s,), where)
        aug.append({k: c for k, c in enumerate(emb.coordinates(v)) if c})
    period = spec.get("period")
    if period:
        # repeat the last listed step
        last = max(terms)
        for k in range(last + 1, last + 1 + int(period)):
            terms[k] = terms[last]
            d[k] = d[last]
    return {"ring": R, "M": Ae, "N": eA, "resolution": Resolution(R, terms, d, aug)}


def _coords_in(F, basis, v) -> dict:
    from .linalg import Subspace
    S = Subspace(F, max([0] + [max(b) + 1 for b in basis if b] + [max(v) + 1 if v else 0]), basis)
    return {k: c for k, c in enumerate(S.coordinates(v)) if c}


# -- parse / emit ------------------------------------------------------------------

_SECTIONS = ("field", "algebras", "categories", "functors", "modules", "resolutions", "commands")


def parse_workspace(text: str) -> Workspace:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise WorkspaceError("YAML syntax error: %s" % getattr(exc, "problem", exc),
                             line=mark.line + 1 if mark else None) from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise WorkspaceError("workspace must be a mapping", line=1)
    lines = _line_map(text)
    for k in data:
        if k not in _SECTIONS:
            raise WorkspaceError("unknown section %r" % (k,), str(k), lines.get(str(k)))
    try:
        F = Field.parse(data.get("field", "Q"))
    except ValueError as exc:
        raise WorkspaceError(str(exc), "field", lines.get("field")) from None
    ws = Workspace(F, data, lines=lines)
    for section, store, build in (("algebras", ws.algebras, _build_algebra),
                                  ("categories", ws.categories, None),
                                  ("modules", ws.modules, _build_module),
                                  ("resolutions", ws.resolutions, _build_resolution)):
        if section == "categories":
            _build_categories_and_functors(ws, data)
            continue
        for nm, spec in (data.get(section) or {}).items():
            where = "%s.%s" % (section, nm)
            store[str(nm)] = _guard(lambda: build(ws, str(nm), spec or {}), where, lines)
    cmds = data.get("commands") or []
    if not isinstance(cmds, list):
        raise WorkspaceError("commands must be a list", "commands", lines.get("commands"))
    for i, c in enumerate(cmds):
        if not isinstance(c, dict) or "cmd" not in c:
            raise WorkspaceError("command needs a 'cmd' key", "commands[%d]" % i, lines.get("commands[%d]" % i))
    ws.commands = list(cmds)
    return ws


def _build_categories_and_functors(ws: Workspace, data: dict):
    """Categories and functors may refer to each other; build whatever resolves, repeatedly."""
    pending = [("categories", k, v) for k, v in (data.get("categories") or {}).items()]
    pending += [("functors", k, v) for k, v in (data.get("functors") or {}).items()]
    while pending:
        rest, last_err = [], None
        for section, nm, spec in pending:
            where = "%s.%s" % (section, nm)
            try:
                if section == "categories":
                    ws.categories[str(nm)] = _guard(lambda: _build_category(ws, str(nm), spec or {}), where, ws.lines)
                else:
                    ws.functors[str(nm)] = _guard(lambda: _build_functor(ws, str(nm), spec or {}), where, ws.lines)
            except _Unresolved as exc:
                rest.append((section, nm, spec))
                last_err = exc.error
        if len(rest) == len(pending):
            raise last_err
        pending = rest


class _Unresolved(Exception):
    def __init__(self, error):
        self.error = error


def _guard(thunk, where: str, lines: dict):
    try:
        return thunk()
    except WorkspaceError as exc:
        if any(w in str(exc) for w in ("unknown category", "unknown algebra", "unknown functor")):
            raise _Unresolved(WorkspaceError(str(exc), where, lines.get(where)))
        if exc.line is None:
            raise WorkspaceError(str(exc), where, lines.get(where)) from None
        raise
    except KeyError as exc:
        msg = exc.args[0] if exc.args else "missing key"
        raise WorkspaceError("missing or unknown %s" % (msg,), where, lines.get(where)) from None
    except (ValueError, TypeError, IndexError) as exc:
        raise WorkspaceError(str(exc), where, lines.get(where)) from None


def emit_workspace(ws: Workspace) -> str:
    """Serialize back to YAML; scalars are written as integers or "n/d" strings."""
    def norm(v):
        if isinstance(v, dict):
            return {str(k) if not isinstance(k, int) else k: norm(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [norm(x) for x in v]
        if isinstance(v, float):
            raise ValueError("floating point scalars are not exact")
        return v
    return yaml.safe_dump(norm(ws.spec), sort_keys=False, allow_unicode=True)


def load_workspace(path: str) -> Workspace:
    with open(path, encoding="utf-8") as fh:
        return parse_workspace(fh.read())
