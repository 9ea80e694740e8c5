"""
Exact linear algebra over Q or GF(p).

Vectors are sparse dicts ``{index: scalar}`` holding only nonzero entries.
Everything here is pure: inputs are never mutated.
"""

from __future__ import annotations

from fractions import Fraction


class Field:
    """The rationals (``p is None``) or the prime field GF(p)."""

    def __init__(self, p: int | None = None):
        if p is not None:
            p = int(p)
            if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
                raise ValueError("field characteristic %d is not prime" % p)
        self.p = p

    @classmethod
    def parse(cls, spec) -> "Field":
        if isinstance(spec, Field):
            return spec
        if isinstance(spec, int):
            return cls(spec)
        if isinstance(spec, dict):
            if spec.get("kind") in ("Q", "rationals"):
                return cls()
            return cls(spec["p"])
        s = str(spec).strip()
        if s in ("Q", "QQ", "rationals"):
            return cls()
        for prefix in ("GF(", "F(", "F_", "GF"):
            if s.startswith(prefix):
                return cls(int(s[len(prefix):].rstrip(")")))
        raise ValueError("unknown field %r" % (spec,))

    def __repr__(self):
        return "Q" if self.p is None else "GF(%d)" % self.p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    def __call__(self, x):
        """Coerce an int, Fraction or ``"n/d"`` string into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def norm(self, x):
        return x if self.p is None else x % self.p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / Fraction(x)
        return pow(x, -1, self.p)

    def elements(self):
        if self.p is None:
            raise ValueError("Q is infinite")
        return range(self.p)

    def format(self, x) -> str:
        if self.p is not None:
            return str(int(x))
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)


QQ = Field()


def GF(p: int) -> Field:
    return Field(p)


# -- sparse vector helpers --------------------------------------------------

def axpy(F: Field, y: dict, a, x: dict) -> dict:
    """In place ``y += a*x``; returns y."""
    if not a:
        return y
    p = F.p
    for i, v in x.items():
        w = y.get(i, 0) + a * v
        if p is not None:
            w %= p
        if w:
            y[i] = w
        else:
            y.pop(i, None)
    return y


def scale(F: Field, a, x: dict) -> dict:
    if not a:
        return {}
    return {i: F.norm(a * v) for i, v in x.items()}


def vsum(F: Field, terms) -> dict:
    """Sum an iterable of ``(coeff, vector)`` pairs."""
    out: dict = {}
    for a, x in terms:
        axpy(F, out, a, x)
    return out


def unit(i: int) -> dict:
    return {i: 1}


class Matrix:
    """A rows x cols matrix stored as a list of sparse row dicts."""

    def __init__(self, F: Field, rows: int, cols: int, data=None):
        self.F = F
        self.rows = rows
        self.cols = cols
        if data is None:
            data = [{} for _ in range(rows)]
        if len(data) != rows:
            raise ValueError("expected %d rows, got %d" % (rows, len(data)))
        for r in data:
            for j in r:
                if not 0 <= j < cols:
                    raise ValueError("column index %d out of range" % j)
        self.data = data

    @classmethod
    def from_dense(cls, F: Field, entries, cols: int | None = None) -> "Matrix":
        entries = [list(r) for r in entries]
        if cols is None:
            cols = len(entries[0]) if entries else 0
        data = []
        for r in entries:
            if len(r) != cols:
                raise ValueError("ragged matrix")
            data.append({j: F(v) for j, v in enumerate(r) if F(v)})
        return cls(F, len(entries), cols, data)

    @classmethod
    def from_columns(cls, F: Field, rows: int, columns) -> "Matrix":
        columns = list(columns)
        data = [{} for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    data[i][j] = v
        return cls(F, rows, len(columns), data)

    @classmethod
    def identity(cls, F: Field, n: int) -> "Matrix":
        return cls(F, n, n, [{i: 1} for i in range(n)])

    @classmethod
    def zero(cls, F: Field, rows: int, cols: int) -> "Matrix":
        return cls(F, rows, cols)

    def dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, r in enumerate(self.data):
            for j, v in r.items():
                out[i][j] = v
        return out

    def columns(self):
        cols = [{} for _ in range(self.cols)]
        for i, r in enumerate(self.data):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def transpose(self) -> "Matrix":
        return Matrix(self.F, self.cols, self.rows, self.columns())

    def apply(self, v: dict) -> dict:
        F = self.F
        out = {}
        for i, r in enumerate(self.data):
            s = 0
            for j, a in r.items():
                b = v.get(j)
                if b:
                    s += a * b
            s = F.norm(s)
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch %dx%d @ %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        F = self.F
        data = []
        for r in self.data:
            out: dict = {}
            for k, a in r.items():
                axpy(F, out, a, other.data[k])
            data.append(out)
        return Matrix(F, self.rows, other.cols, data)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.F, self.rows, self.cols,
                      [axpy(self.F, dict(a), 1, b) for a, b in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.F, self.rows, self.cols,
                      [axpy(self.F, dict(a), -1, b) for a, b in zip(self.data, other.data)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.F, self.rows, self.cols, [scale(self.F, -1, r) for r in self.data])

    def scaled(self, a) -> "Matrix":
        return Matrix(self.F, self.rows, self.cols, [scale(self.F, a, r) for r in self.data])

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")

    def is_zero(self) -> bool:
        return not any(self.data)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and self.data == other.data)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def rank(self) -> int:
        return len(row_reduce(self)[1])

    def __repr__(self):
        return "Matrix(%s, %dx%d, %r)" % (self.F, self.rows, self.cols, self.dense())


class Echelon:
    """Incrementally maintained reduced row echelon form.

    With ``track=True`` each pivot row remembers which combination of the
    inserted generators produced it, so ``express`` can write a vector in
    terms of the generators.
    """

    def __init__(self, F: Field, track: bool = False):
        self.F = F
        self.track = track
        self.pivots: dict = {}      # pivot col -> row (entry 1 at col)
        self.combos: dict = {}      # pivot col -> {generator: coeff}
        self.ngens = 0

    def __len__(self):
        return len(self.pivots)

    def reduce(self, v: dict):
        """Return ``(remainder, combo)`` with ``v = sum combo[g]*gen_g + remainder``."""
        F = self.F
        r = dict(v)
        combo: dict = {}
        for c in [c for c in r if c in self.pivots]:
            a = r.get(c)
            if a:
                axpy(F, r, -a, self.pivots[c])
                if self.track:
                    axpy(F, combo, a, self.combos[c])
        return r, combo

    def insert(self, v: dict) -> bool:
        """Add a generator; True if it enlarged the span."""
        F = self.F
        g = self.ngens
        self.ngens += 1
        r, combo = self.reduce(v)
        if not r:
            return False
        c = min(r)
        inv = F.inv(r[c])
        r = scale(F, inv, r)
        if self.track:
            combo = scale(F, -inv, combo)
            combo[g] = F.norm(combo.get(g, 0) + inv)
            if not combo[g]:
                del combo[g]
        for c2, row in self.pivots.items():
            a = row.get(c)
            if a:
                axpy(F, row, -a, r)
                if self.track:
                    axpy(F, self.combos[c2], -a, combo)
        self.pivots[c] = r
        if self.track:
            self.combos[c] = combo
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)[0]

    def express(self, v: dict):
        """Coefficients of v over the generators, or None if v is not in the span."""
        r, combo = self.reduce(v)
        return None if r else combo

    def rows(self):
        return [self.pivots[c] for c in sorted(self.pivots)]


def row_reduce(m: Matrix):
    """Reduced row echelon form of m and its pivot columns."""
    E = Echelon(m.F)
    for r in m.data:
        E.insert(r)
    pivots = sorted(E.pivots)
    data = [dict(E.pivots[c]) for c in pivots] + [{} for _ in range(m.rows - len(pivots))]
    return Matrix(m.F, m.rows, m.cols, data), pivots


def rank(m: Matrix) -> int:
    return len(row_reduce(m)[1])


class Subspace:
    """A subspace of F^n with a reduced echelon basis."""

    def __init__(self, F: Field, ambient: int, vectors=()):
        self.F = F
        self.ambient = ambient
        self._ech = Echelon(F)
        for v in vectors:
            for j in v:
                if not 0 <= j < ambient:
                    raise ValueError("vector index %d outside ambient dimension %d" % (j, ambient))
            self._ech.insert(v)

    @property
    def dim(self) -> int:
        return len(self._ech)

    @property
    def basis(self):
        return self._ech.rows()

    @property
    def pivots(self):
        return sorted(self._ech.pivots)

    def contains(self, v: dict) -> bool:
        return self._ech.contains(v)

    def reduce(self, v: dict) -> dict:
        return self._ech.reduce(v)[0]

    def coordinates(self, v: dict):
        """Coordinates of v in ``self.basis`` (v must lie in the subspace)."""
        r = self.reduce(v)
        if r:
            raise ValueError("vector not in subspace")
        return [v.get(c, 0) for c in self.pivots]

    def __contains__(self, v):
        return self.contains(v)

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient == other.ambient
                and self.dim == other.dim and self <= other)

    def __repr__(self):
        return "Subspace(dim=%d in %d)" % (self.dim, self.ambient)


def kernel_basis(m: Matrix) -> Subspace:
    """Basis of {v : m v = 0}."""
    R, pivots = row_reduce(m)
    F = m.F
    pivot_set = set(pivots)
    # for each free column f: e_f - sum_r R[r][f] e_{pivot r}
    by_free: dict = {}
    for r, c in zip(R.data, pivots):
        for j, a in r.items():
            if j != c:
                by_free.setdefault(j, {})[c] = F.norm(-a)
    vecs = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = dict(by_free.get(f, {}))
        v[f] = 1
        vecs.append(v)
    return Subspace(F, m.cols, vecs)


def image_basis(m: Matrix) -> Subspace:
    """Basis of the column space of m."""
    return Subspace(m.F, m.rows, m.columns())


def solve(m: Matrix, b: dict):
    """Some x with m x = b, or None when the system is inconsistent."""
    E = Echelon(m.F, track=True)
    for col in m.columns():
        E.insert(col)
    combo = E.express(b)
    if combo is None:
        return None
    return {j: a for j, a in combo.items() if a}


def quotient_data(ambient: Subspace, sub: Subspace):
    """Dimension of ambient/sub and vectors completing sub's basis to ambient's."""
    if ambient.ambient != sub.ambient:
        raise ValueError("subspaces live in different spaces")
    for v in sub.basis:
        if not ambient.contains(v):
            raise ValueError("sub is not contained in ambient")
    E = Echelon(ambient.F)
    for v in sub.basis:
        E.insert(v)
    reps = []
    for v in ambient.basis:
        if len(reps) == ambient.dim - sub.dim:
            break
        if E.insert(v):
            reps.append(v)
    return ambient.dim - sub.dim, reps


class QuotientSpace:
    """Coordinates on span(sub + reps) / span(sub) in terms of the reps."""

    def __init__(self, F: Field, sub, reps):
        self.F = F
        self.sub = list(sub)
        self.reps = list(reps)
        self._ech = Echelon(F, track=True)
        for v in self.sub:
            self._ech.insert(v)
        self._nsub = self._ech.ngens
        for v in self.reps:
            if not self._ech.insert(v):
                raise ValueError("representatives are dependent modulo the subspace")

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, v: dict):
        """Class of v as a coefficient list over reps; None if v is outside."""
        combo = self._ech.express(v)
        if combo is None:
            return None
        n = self._nsub
        return [combo.get(n + k, 0) for k in range(len(self.reps))]

    def is_zero_class(self, v: dict) -> bool:
        c = self.coords(v)
        return c is not None and not any(c)
