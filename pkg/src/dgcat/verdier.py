"""
A brute-force oracle for Hom in the Verdier quotient H0(hull)/thick(B).

Morphisms x -> y in the quotient are computed as the colimit of H0(x, z) over
roofs alpha: y -> z with Cone(alpha) in the thick subcategory, z ranging over
the objects of the supplied hull.  Everything is enumerated over a finite
field, so the answer is only as good as the object list: the diagram of roofs
is checked for filteredness and any defect is reported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .category import DgCategory, find_h0_isomorphism, h0
from .complexes import cohomology_dims
from .linalg import Matrix, axpy
from .pretr import cone_twisted, hull_category, hull_matrix, suspend_twisted, twisted_hom
from .report import Report


@dataclass
class VerdierResult:
    dimension: int
    roofs: list
    morphisms: int
    filtered: bool
    issues: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"dimension": self.dimension, "roofs": [[z, c] for z, c in self.roofs],
                "roof_morphisms": self.morphisms, "filtered": self.filtered, "issues": self.issues}


def _classes(F, n: int, limit: int):
    if F.p ** n > limit:
        raise ValueError("enumeration of %d^%d classes exceeds the limit" % (F.p, n))
    for c in itertools.product(range(F.p), repeat=n):
        yield {k: a for k, a in enumerate(c) if a}


def _key(c: dict):
    return tuple(sorted(c.items()))


class ThickTest:
    """Membership in thick(B), approximated by: zero in H0, or H0-isomorphic to
    a suspension or desuspension of a listed object of B."""

    def __init__(self, H: DgCategory, thick):
        self.base = H.base
        self.targets = []
        for b in thick:
            T = H.twisted[b]
            S, _, _ = suspend_twisted(T)
            D = type(T)(T.base, [(x, s - 1) for x, s in T.entries],
                        {k: {i: -c for i, c in v.items()} for k, v in T.delta.items()}, name="D" + T.name)
            self.targets += [T, S, D]

    def __call__(self, Z) -> bool:
        if not cohomology_dims(twisted_hom(Z, Z)):
            return True
        for T in self.targets:
            small = hull_category(self.base, {"Z": Z, "T": T}, check=False)
            if find_h0_isomorphism(small, "Z", "T") is not None:
                return True
        return False


def verdier_oracle(H: DgCategory, thick, x, y, limit: int = 4096) -> VerdierResult:
    """dim Hom(x, y) in H0(H)/thick, by the roof colimit over the objects of H."""
    F = H.F
    if not F.is_finite:
        raise ValueError("the Verdier oracle enumerates classes and needs a finite field")
    if not hasattr(H, "twisted"):
        raise ValueError("the Verdier oracle needs a hull category")
    for b in thick:
        if b not in H.objects:
            raise KeyError("unknown thick object %r" % b)
    K = h0(H)
    member = ThickTest(H, thick)
    Ty = H.twisted[y]

    roofs = []
    for z in H.objects:
        for c in _classes(F, K.dim(y, z), limit):
            alpha = hull_matrix(H, y, z, K.lift(y, z, c)) if c else {}
            C, _ = cone_twisted(alpha, Ty, H.twisted[z])
            if member(C):
                roofs.append((z, c))

    index = {(z, _key(c)): n for n, (z, c) in enumerate(roofs)}
    arrows = []  # (src roof, tgt roof, beta class)
    for (z, c), (z2, c2) in itertools.product(roofs, repeat=2):
        for b in _classes(F, K.dim(z, z2), limit):
            if K.compose(y, z, z2, b, c) == c2:
                arrows.append((index[(z, _key(c))], index[(z2, _key(c2))], b))

    offs, o = [], 0
    for z, _ in roofs:
        offs.append(o)
        o += K.dim(x, z)
    rels = []
    for s, t, b in arrows:
        z, z2 = roofs[s][0], roofs[t][0]
        for k in range(K.dim(x, z)):
            v = {offs[s] + k: 1}
            for j, a in K.compose(x, z, z2, b, {k: 1}).items():
                axpy(F, v, -a, {offs[t] + j: 1})
            if v:
                rels.append(v)
    rank = Matrix.from_columns(F, o, rels).rank() if rels else 0

    issues = _filteredness(K, y, roofs, arrows, F, limit)
    if not roofs:
        issues.append("no roof out of %s: y itself must be among the objects" % y)
    return VerdierResult(o - rank, roofs, len(arrows), not issues, issues)


def _filteredness(K, y, roofs, arrows, F, limit) -> list:
    issues = []
    out = {}
    for s, t, b in arrows:
        out.setdefault(s, []).append((t, b))
    n = len(roofs)
    for a, b in itertools.combinations(range(n), 2):
        ta = {t for t, _ in out.get(a, [])}
        tb = {t for t, _ in out.get(b, [])}
        if not ta & tb:
            issues.append("roofs %d and %d have no common target in the list" % (a, b))
    for s in range(n):
        by_t: dict = {}
        for t, b in out.get(s, []):
            by_t.setdefault(t, []).append(b)
        for t, betas in by_t.items():
            zs, zt = roofs[s][0], roofs[t][0]
            for b1, b2 in itertools.combinations(betas, 2):
                ok = any(K.compose(zs, zt, roofs[u][0], g, b1) == K.compose(zs, zt, roofs[u][0], g, b2)
                         for u, g in out.get(t, []))
                if not ok:
                    issues.append("parallel roof maps %d -> %d are not equalized" % (s, t))
    return issues


def verdier_report(H: DgCategory, thick, x, y_by_degree: dict, expected: dict) -> Report:
    """Compare oracle dimensions with expected values, one check per degree."""
    rep = Report("Verdier oracle")
    for i, y in sorted(y_by_degree.items()):
        r = verdier_oracle(H, thick, x, y)
        rep.add("Hom^%d" % i, r.dimension == expected.get(i, 0) and r.filtered,
                "%d vs %d%s" % (r.dimension, expected.get(i, 0), "" if r.filtered else " (not filtered)"))
    return rep
