"""
The idempotent example: Gamma = End_{A/B}(A_A) with B = {eA}, the Tor oracle
over eAe, and the stratifying-ideal verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import Algebra, AlgModule, corner_algebra
from .linalg import Matrix, Subspace, image_basis
from .modules import ProjectiveComplex, complexes_category
from .quotient import DrinfeldQuotient, quotient_cohomology
from .report import Report, ValidationError


class GammaAlgebra:
    """Gamma^{-p} = words of length p from A_A to A_A through eA, i.e. Ae (x) (eAe)^{(x)(p-1)} (x) eA."""

    def __init__(self, A: Algebra, e: dict, p_max: int):
        if not A.is_idempotent(e):
            raise ValueError("e is not an idempotent")
        if p_max < 0:
            raise ValueError("depth must be >= 0")
        self.A, self.e, self.p_max = A, dict(e), p_max
        self.cat = complexes_category(A, {
            "A": ProjectiveComplex(A, {0: [A.unit]}, name="A"),
            "eA": ProjectiveComplex(A, {0: [e]} if e else {}, name="eA"),
        }, name="C(%s)" % (A.name or "A"))
        self.quotient = DrinfeldQuotient(self.cat, ["eA"])
        self._h: dict = {}

    def dims(self, p: int) -> int:
        """dim Gamma^{-p} by word enumeration."""
        return self.quotient.count("A", "A", p)

    def product_formula(self, p: int) -> int:
        C = self.cat
        if p == 0:
            return C.dim("A", "A")
        return C.dim("A", "eA") * C.dim("eA", "eA") ** (p - 1) * C.dim("eA", "A")

    def cohomology(self, p: int) -> int:
        """dim H^{-p}(Gamma)."""
        if p not in self._h:
            r = quotient_cohomology(self.cat, ["eA"], "A", "A", -p, p + 1)
            if not r.exact:
                raise RuntimeError("no exactness certificate for H^%d" % -p)
            self._h[p] = r.dimension
        return self._h[p]

    def report(self) -> Report:
        rep = Report("Gamma")
        A = self.A
        rep.add("Gamma^0 = A", self.dims(0) == A.dim)
        for p in range(1, self.p_max + 1):
            rep.add("dim Gamma^-%d word count = product formula" % p, self.dims(p) == self.product_formula(p),
                    "%d" % self.dims(p))
        quot = A.dim - A.ideal(self.e).dim
        rep.add("H^0(Gamma) = A/AeA", self.cohomology(0) == quot, "%d vs %d" % (self.cohomology(0), quot))
        rep.data["cohomology"] = {-p: self.cohomology(p) for p in range(self.p_max + 1)}
        return rep


def gamma_algebra(A: Algebra, e: dict, p_max: int) -> GammaAlgebra:
    return GammaAlgebra(A, e, p_max)


def gamma_cohomology(g: GammaAlgebra, p: int) -> int:
    if not 0 <= p <= g.p_max:
        raise ValueError("p must lie in 0..p_max")
    return g.cohomology(p)


# -- Tor ---------------------------------------------------------------------------

@dataclass
class Resolution:
    """A projective resolution P -> M of a right module over ``ring``.

    ``terms[k]`` lists idempotents: P_k = sum_i e_i R.  ``d[k]`` (k >= 1) is a matrix of
    ring elements with rows indexed by summands of P_{k-1} and columns by summands of
    P_k; entry (l, i) lies in e_l R e_i and acts by left multiplication.
    ``augmentation[i]`` is the image in M of the generator e_i of P_0.
    """
    ring: Algebra
    terms: dict
    d: dict = field(default_factory=dict)
    augmentation: list = field(default_factory=list)


def corner_modules(A: Algebra, e: dict):
    """(R = eAe, Ae as a right R-module, eA as a left R-module).

    The modules carry ``embedding``: their basis vectors inside A.
    """
    R, rbasis = corner_algebra(A, e)
    Ae = image_basis(A.right_mult(e))
    eA = image_basis(A.left_mult(e))

    def restrict(S: Subspace, side: str, name: str) -> AlgModule:
        act = []
        for r in rbasis:
            cols = []
            for b in S.basis:
                img = A.mul(b, r) if side == "right" else A.mul(r, b)
                cols.append({k: c for k, c in enumerate(S.coordinates(img)) if c})
            act.append(Matrix.from_columns(A.F, S.dim, cols))
        M = AlgModule(R, S.dim, act, side, name=name)
        M.embedding = S
        return M
    return R, restrict(Ae, "right", "Ae"), restrict(eA, "left", "eA")


def _summand(R: Algebra, e: dict) -> Subspace:
    """e R as a subspace of R."""
    return image_basis(R.left_mult(e))


def _resolution_matrix(R: Algebra, src: list, tgt: list, mat) -> Matrix:
    """k-linear matrix of the map sum e_i R -> sum e_l R given by left multiplication."""
    S_src = [_summand(R, e) for e in src]
    S_tgt = [_summand(R, e) for e in tgt]
    offs_t, o = [], 0
    for S in S_tgt:
        offs_t.append(o)
        o += S.dim
    rows = o
    cols = []
    for i, S in enumerate(S_src):
        for b in S.basis:
            col: dict = {}
            for l, T in enumerate(S_tgt):
                a = mat[l][i] if mat and l < len(mat) and i < len(mat[l]) else {}
                img = R.mul(a, b)
                for k, c in enumerate(T.coordinates(img)):
                    if c:
                        col[offs_t[l] + k] = c
            cols.append(col)
    return Matrix.from_columns(R.F, rows, cols)


def validate_resolution(M: AlgModule, res: Resolution, p_max: int) -> Report:
    R = res.ring
    rep = Report("projective resolution")
    if M.side != "right" or M.algebra is not R:
        rep.add("M is a right module over the ring", False)
        return rep
    for k in range(p_max + 2):
        if k not in res.terms:
            rep.add("terms up to degree %d" % (p_max + 1), False, "missing P_%d" % k)
            return rep
        for e in res.terms[k]:
            if not R.is_idempotent(e):
                rep.add("summands e R with e idempotent", False, "P_%d" % k)
                return rep
    for k in range(1, p_max + 2):
        mat = res.d.get(k, [])
        src, tgt = res.terms[k], res.terms[k - 1]
        for l in range(len(tgt)):
            for i in range(len(src)):
                a = mat[l][i] if l < len(mat) and i < len(mat[l]) else {}
                if R.mul(R.mul(tgt[l], a), src[i]) != a:
                    rep.add("entries in e_l R e_i", False, "d_%d (%d,%d)" % (k, l, i))
                    return rep
    if len(res.augmentation) != len(res.terms[0]):
        rep.add("augmentation has one image per generator", False)
        return rep
    for m, e in zip(res.augmentation, res.terms[0]):
        if M.action(m, e) != {k: v for k, v in m.items() if v}:
            rep.add("generator images lie in M e", False)
            return rep
    # k-linear augmentation
    cols = []
    for m, e in zip(res.augmentation, res.terms[0]):
        for b in _summand(R, e).basis:
            cols.append(M.action(m, b))
    eps = Matrix.from_columns(R.F, M.dim, cols)
    mats = {k: _resolution_matrix(R, res.terms[k], res.terms[k - 1], res.d.get(k, [])) for k in range(1, p_max + 2)}
    rep.add("augmentation surjective", eps.rank() == M.dim, "H_0 check")
    if mats.get(1) is not None:
        rep.add("eps o d_1 = 0", (eps @ mats[1]).is_zero())
    for k in range(1, p_max + 1):
        rep.add("d_%d o d_%d = 0" % (k, k + 1), (mats[k] @ mats[k + 1]).is_zero())
    if not rep.ok:
        return rep
    # exactness: ker = im at P_0 (against eps) and at P_k
    dim0 = eps.cols
    ok = dim0 - eps.rank() == mats[1].rank()
    rep.add("exact at P_0", ok, "" if ok else "homological degree 0")
    for k in range(1, p_max + 1):
        ker = mats[k].cols - mats[k].rank()
        ok = ker == mats[k + 1].rank()
        rep.add("exact at P_%d" % k, ok, "" if ok else "homological degree %d" % k)
    return rep


def tor_oracle(R: Algebra, M: AlgModule, N: AlgModule, res: Resolution, p_max: int):
    """dims of Tor_p^R(M, N), p = 0..p_max, from a validated resolution of M."""
    rep = validate_resolution(M, res, p_max)
    if not rep.ok:
        raise ValidationError(rep)
    if N.side != "left" or N.algebra is not R:
        raise ValueError("N must be a left module over the ring")
    F = R.F

    def eN(e) -> Subspace:
        return image_basis(Matrix.from_columns(F, N.dim, [N.action({k: 1}, e) for k in range(N.dim)]))

    def tensored(k) -> Matrix:
        src, tgt = res.terms[k], res.terms[k - 1]
        mat = res.d.get(k, [])
        S_src = [eN(e) for e in src]
        S_tgt = [eN(e) for e in tgt]
        offs, o = [], 0
        for S in S_tgt:
            offs.append(o)
            o += S.dim
        cols = []
        for i, S in enumerate(S_src):
            for b in S.basis:
                col: dict = {}
                for l, T in enumerate(S_tgt):
                    a = mat[l][i] if l < len(mat) and i < len(mat[l]) else {}
                    img = N.action(b, a)
                    for kk, c in enumerate(T.coordinates(img)):
                        if c:
                            col[offs[l] + kk] = c
                cols.append(col)
        return Matrix.from_columns(F, o, cols)
    dims = {}
    mats = {k: tensored(k) for k in range(1, p_max + 2)}
    for p in range(p_max + 1):
        n = sum(eN(e).dim for e in res.terms[p])
        r_out = mats[p].rank() if p >= 1 else 0
        dims[p] = n - r_out - mats[p + 1].rank()
    rep.data["tor"] = dims
    return dims, rep


# -- the verdict --------------------------------------------------------------------

@dataclass
class Verdict:
    stratifying: bool
    least_failing: int | None
    p_max: int
    cohomology: dict
    quotient_dim: int

    @property
    def label(self) -> str:
        return "STRATIFYING" if self.stratifying else "NOT_STRATIFYING"

    def __str__(self):
        if self.stratifying:
            return "STRATIFYING (checked up to p=%d)" % self.p_max
        return "NOT_STRATIFYING at p=%d" % self.least_failing

    def to_dict(self) -> dict:
        return {"verdict": self.label, "least_failing": self.least_failing, "p_max": self.p_max,
                "cohomology": self.cohomology, "A/AeA": self.quotient_dim}


def stratifying_check(A: Algebra, e: dict, p_max: int) -> Verdict:
    """AeA is stratifying (up to p_max) iff H^{-p}(Gamma) = 0 for 1 <= p <= p_max and H^0 = A/AeA."""
    g = GammaAlgebra(A, e, p_max)
    quot = A.dim - A.ideal(e).dim
    coh = {}
    least = None
    if g.cohomology(0) != quot:
        least = 0
    for p in range(0, p_max + 1):
        coh[-p] = g.cohomology(p)
        if least is None and p >= 1 and coh[-p]:
            least = p
    return Verdict(least is None, least, p_max, coh, quot)
