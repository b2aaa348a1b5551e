"""Exact Clifford algebras of signature-(n, 2) lattices and their boundary
weight filtrations.

The algebra Cl(V) of a rational quadratic space (V, q) is presented on the
2^(n+2) monomials e_S (S an ascending index subset), with multiplication by
normal-ordering rewriting against the full Gram matrix:

    e_i e_j + e_j e_i = 2 B(e_i, e_j),    e_i^2 = q(e_i) = B(e_i, e_i).

No orthogonalisation is forced anywhere: the interesting vectors here are
isotropic.  Weight filtrations of degenerating weight-two structures are
computed as exact left-ideal images:

* type II (2-dim isotropic I = <e1, e2>):
      W_-2 = im(e1 e2)  of dimension 2^n,
      W_-1 = im(e1) + im(e2),
      with the weight-one graded piece of dimension 2^(n+1);
* type III (isotropic line <e1>):
      W_-2 = W_-1 = im(e1)  of dimension 2^(n+1), trivial gr_1.

``graded_splitting`` intersects the ascending filtration built from the dual
isotropic vectors (e3, e4) with the W-pieces, and
``cocharacter_conjugation_check`` verifies that left multiplication by
vectors of the three homogeneous slots shifts the splitting by one weight
step and preserves the even/odd grading.

All linear algebra runs over Q with exact row reduction; n is capped at 6
(algebra dimension 256) so rank certificates stay cheap.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import ComputationError
from .linalg import RowSpace, nullspace, rank

_MAX_N = 6


class GramLattice:
    """A rational quadratic lattice of signature (n, 2), by its Gram matrix."""

    def __init__(self, gram):
        gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
        dim = len(gram)
        if any(len(row) != dim for row in gram):
            raise ComputationError("Gram matrix must be square")
        for i in range(dim):
            for j in range(dim):
                if gram[i][j] != gram[j][i]:
                    raise ComputationError("Gram matrix must be symmetric")
        if dim < 3 or dim - 2 > _MAX_N:
            raise ComputationError(
                "ambient dimension must be between 3 and %d" % (_MAX_N + 2)
            )
        pos, neg = _signature(gram)
        if pos + neg != dim:
            raise ComputationError("Gram matrix is degenerate")
        if neg != 2:
            raise ComputationError(
                "signature is (%d, %d), not (n, 2)" % (pos, neg)
            )
        self.gram = gram
        self.dim = dim
        self.n = dim - 2
        self._mul_cache = {}

    # -- standard shapes ---------------------------------------------------

    @classmethod
    def split(cls, n):
        """Two hyperbolic planes <e1, e3>, <e2, e4> plus a definite rest.

        Basis order: e1, e2 (isotropic pair), e3, e4 (duals), then an
        orthonormal tail.  Needs n >= 2.
        """
        if n < 2:
            raise ComputationError("two hyperbolic planes need n >= 2")
        dim = n + 2
        g = [[Fraction(0)] * dim for _ in range(dim)]
        g[0][2] = g[2][0] = Fraction(1)
        g[1][3] = g[3][1] = Fraction(1)
        for i in range(4, dim):
            g[i][i] = Fraction(1)
        return cls(g)

    @classmethod
    def one_hyperbolic(cls, n):
        """One hyperbolic plane <e1, e2-dual> plus diag(1,...,1,-1); n >= 1."""
        if n < 1:
            raise ComputationError("n must be >= 1")
        dim = n + 2
        g = [[Fraction(0)] * dim for _ in range(dim)]
        g[0][1] = g[1][0] = Fraction(1)
        for i in range(2, dim - 1):
            g[i][i] = Fraction(1)
        g[dim - 1][dim - 1] = Fraction(-1)
        return cls(g)

    # -- plumbing ------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, GramLattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return "GramLattice(n=%d)" % self.n

    def bilinear(self, v, w):
        """B(v, w) on coordinate vectors."""
        return sum(
            v[i] * self.gram[i][j] * w[j]
            for i in range(self.dim)
            for j in range(self.dim)
            if v[i] and self.gram[i][j] and w[j]
        )

    def quadratic(self, v):
        return self.bilinear(v, v)

    def vector(self, coords):
        coords = [Fraction(c) for c in coords]
        if len(coords) != self.dim:
            raise ComputationError("vector needs %d coordinates" % self.dim)
        terms = {(i,): c for i, c in enumerate(coords) if c}
        return CliffordElement(self, terms)

    def basis_vector(self, i):
        return CliffordElement(self, {(i,): Fraction(1)})

    def one(self):
        return CliffordElement(self, {(): Fraction(1)})

    def monomials(self):
        """All index subsets, in bitmask order."""
        for mask in range(1 << self.dim):
            yield _mask_to_tuple(mask)

    def _mul_basis(self, s, t):
        """Normal-ordered product e_s * e_t as {monomial: Fraction}."""
        key = (s, t)
        cached = self._mul_cache.get(key)
        if cached is not None:
            return cached
        result = {}
        stack = [(Fraction(1), list(s + t))]
        while stack:
            coeff, seq = stack.pop()
            k = _first_violation(seq)
            if k is None:
                mono = tuple(seq)
                result[mono] = result.get(mono, 0) + coeff
                continue
            a, b = seq[k], seq[k + 1]
            if a == b:
                qa = self.gram[a][a]
                if qa:
                    stack.append((coeff * qa, seq[:k] + seq[k + 2 :]))
            else:
                twob = 2 * self.gram[a][b]
                if twob:
                    stack.append((coeff * twob, seq[:k] + seq[k + 2 :]))
                swapped = seq[:k] + [b, a] + seq[k + 2 :]
                stack.append((-coeff, swapped))
        result = {m: c for m, c in result.items() if c}
        self._mul_cache[key] = result
        return result


def _first_violation(seq):
    for k in range(len(seq) - 1):
        if seq[k] >= seq[k + 1]:
            return k
    return None


def _mask_to_tuple(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _tuple_to_mask(t):
    m = 0
    for i in t:
        m |= 1 << i
    return m


class CliffordElement:
    """A rational element of Cl(V) over the subset-monomial basis."""

    __slots__ = ("lattice", "terms")

    def __init__(self, lattice, terms):
        self.lattice = lattice
        self.terms = {m: Fraction(c) for m, c in terms.items() if c}

    def _check(self, other):
        if self.lattice != other.lattice:
            raise ComputationError("elements over different lattices")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, CliffordElement)
            and self.lattice == other.lattice
            and self.terms == other.terms
        )

    __hash__ = None

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return CliffordElement(self.lattice, out)

    def __neg__(self):
        return CliffordElement(self.lattice, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return CliffordElement(self.lattice, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out = {}
        for ms, cs in self.terms.items():
            for mt, ct in other.terms.items():
                coeff = cs * ct
                for mono, c in self.lattice._mul_basis(ms, mt).items():
                    out[mono] = out.get(mono, 0) + coeff * c
        return CliffordElement(self.lattice, out)

    __rmul__ = __mul__

    def parity(self):
        """0 (even), 1 (odd), or None if mixed."""
        seen = {len(m) % 2 for m in self.terms}
        if len(seen) == 1:
            return seen.pop()
        return None if seen else 0

    def grade_one_coords(self):
        """Coordinate vector if the element is a pure vector, else None."""
        coords = [Fraction(0)] * self.lattice.dim
        for m, c in self.terms.items():
            if len(m) != 1:
                return None
            coords[m[0]] = c
        return coords

    def to_row(self):
        """Sparse row over the bitmask-indexed monomial basis."""
        return {_tuple_to_mask(m): c for m, c in self.terms.items()}

    @classmethod
    def from_row(cls, lattice, row):
        return cls(lattice, {_mask_to_tuple(mask): c for mask, c in row.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[m]
            name = "".join("e%d" % (i + 1) for i in m) or "1"
            parts.append("%s*%s" % (c, name))
        return " + ".join(parts)


def _signature(gram):
    """Inertia (pos, neg) of a symmetric matrix by exact congruence."""
    dim = len(gram)
    m = [list(row) for row in gram]
    pos = neg = 0
    for i in range(dim):
        if m[i][i] == 0:
            swap = next((j for j in range(i + 1, dim) if m[j][j] != 0), None)
            if swap is not None:
                for r in m:
                    r[i], r[swap] = r[swap], r[i]
                m[i], m[swap] = m[swap], m[i]
            else:
                off = next((j for j in range(i + 1, dim) if m[i][j] != 0), None)
                if off is None:
                    return pos, neg  # degenerate: zero block remains
                for k in range(dim):
                    m[i][k] += m[off][k]
                for k in range(dim):
                    m[k][i] += m[k][off]
        pivot = m[i][i]
        if pivot > 0:
            pos += 1
        else:
            neg += 1
        for j in range(i + 1, dim):
            factor = Fraction(m[j][i], pivot)
            if not factor:
                continue
            for k in range(dim):
                m[j][k] -= factor * m[i][k]
            for k in range(dim):
                m[k][j] -= factor * m[k][i]
    return pos, neg


# ---------------------------------------------------------------------------
# left ideals and filtrations


@dataclass(frozen=True)
class Subspace:
    """A subspace of Cl(V) as a canonical exact row space."""

    lattice: GramLattice
    rows: RowSpace

    @property
    def dim(self):
        return self.rows.dim

    def contains(self, other):
        return self.rows.contains(other.rows)

    def contains_element(self, element):
        return self.rows.contains_row(element.to_row())

    def add(self, other):
        return Subspace(self.lattice, self.rows.add(other.rows))

    def intersect(self, other):
        return Subspace(self.lattice, self.rows.intersect(other.rows))

    def basis_elements(self):
        return [
            CliffordElement.from_row(self.lattice, r) for r in self.rows.basis_rows()
        ]

    def left_multiply(self, element):
        """The image element * self."""
        rows = [(element * b).to_row() for b in self.basis_elements()]
        return Subspace(self.lattice, RowSpace(1 << self.lattice.dim, rows))


def full_space(lattice):
    rows = [{mask: Fraction(1)} for mask in range(1 << lattice.dim)]
    return Subspace(lattice, RowSpace(1 << lattice.dim, rows))


def zero_space(lattice):
    return Subspace(lattice, RowSpace(1 << lattice.dim, []))


def left_ideal_image(lattice, element):
    """The left ideal element * Cl(V) as an exact subspace."""
    if not element:
        raise ComputationError("left ideal of the zero element")
    rows = []
    for mono in lattice.monomials():
        prod = element * CliffordElement(lattice, {mono: Fraction(1)})
        if prod:
            rows.append(prod.to_row())
    return Subspace(lattice, RowSpace(1 << lattice.dim, rows))


def _require_isotropic_vector(lattice, e, name):
    coords = e.grade_one_coords()
    if coords is None or not any(coords):
        raise ComputationError("%s must be a nonzero vector" % name)
    if lattice.quadratic(coords):
        raise ComputationError("%s must be isotropic" % name)
    return coords


@dataclass(frozen=True)
class WeightFiltration:
    """W_-2 <= W_-1 <= W_0 = Cl(V) attached to a boundary degeneration."""

    kind: str  # "II" | "III"
    lattice: GramLattice
    w_minus2: Subspace
    w_minus1: Subspace
    isotropic_vectors: tuple

    def dims(self):
        return (self.w_minus2.dim, self.w_minus1.dim, 1 << self.lattice.dim)

    def graded_dims(self):
        d2, d1, d0 = self.dims()
        return (d2, d1 - d2, d0 - d1)


def filtration_type2(lattice, e1, e2):
    """Type II boundary filtration from a 2-dimensional isotropic <e1, e2>."""
    c1 = _require_isotropic_vector(lattice, e1, "e1")
    c2 = _require_isotropic_vector(lattice, e2, "e2")
    if lattice.bilinear(c1, c2):
        raise ComputationError("e1, e2 must span an isotropic plane (B(e1,e2)=0)")
    if rank([{i: v for i, v in enumerate(c1) if v}, {i: v for i, v in enumerate(c2) if v}]) != 2:
        raise ComputationError("e1, e2 must be linearly independent")
    n = lattice.n
    w2 = left_ideal_image(lattice, e1 * e2)
    w1 = left_ideal_image(lattice, e1).add(left_ideal_image(lattice, e2))
    if w2.dim != 1 << n:
        raise ComputationError("dim W_-2 = %d, expected 2^n" % w2.dim)
    if w1.dim - w2.dim != 1 << (n + 1):
        raise ComputationError(
            "dim gr_-1 = %d, expected 2^(n+1)" % (w1.dim - w2.dim)
        )
    if not w1.contains(w2):
        raise ComputationError("W_-2 is not contained in W_-1")
    return WeightFiltration(
        kind="II",
        lattice=lattice,
        w_minus2=w2,
        w_minus1=w1,
        isotropic_vectors=(e1, e2),
    )


def filtration_type3(lattice, e1):
    """Type III boundary filtration from an isotropic line <e1>."""
    _require_isotropic_vector(lattice, e1, "e1")
    w = left_ideal_image(lattice, e1)
    if w.dim != 1 << (lattice.n + 1):
        raise ComputationError("dim im(e1) = %d, expected 2^(n+1)" % w.dim)
    return WeightFiltration(
        kind="III",
        lattice=lattice,
        w_minus2=w,
        w_minus1=w,
        isotropic_vectors=(e1,),
    )


@dataclass(frozen=True)
class GradedSplitting:
    """H_0 + H_-1 + H_-2 = Cl(V) splitting a type II weight filtration."""

    lattice: GramLattice
    filtration: WeightFiltration
    h_0: Subspace
    h_minus1: Subspace
    h_minus2: Subspace
    i_minus1: tuple  # (e1, e2)
    i_1: tuple  # (e3, e4)
    i_0_basis: tuple  # vectors orthogonal to both hyperbolic planes

    def piece(self, i):
        """H_{-i} for i in {0, 1, 2}; anything else is the zero space."""
        if i == 0:
            return self.h_0
        if i == 1:
            return self.h_minus1
        if i == 2:
            return self.h_minus2
        return zero_space(self.lattice)

    def dims(self):
        return (self.h_minus2.dim, self.h_minus1.dim, self.h_0.dim)


def graded_splitting(filtration, e3, e4):
    """Split a type II filtration against the dual isotropic pair (e3, e4).

    The pieces are H_-2 = W_-2, H_-1 = (im(e3)+im(e4)) meet W_-1, and
    H_0 = im(e3 e4); their dims (2^n, 2^(n+1), 2^n) and the direct-sum
    decomposition are verified by exact rank.
    """
    if filtration.kind != "II":
        raise ComputationError("splitting needs a type II filtration")
    lattice = filtration.lattice
    e1, e2 = filtration.isotropic_vectors
    c1 = e1.grade_one_coords()
    c2 = e2.grade_one_coords()
    c3 = _require_isotropic_vector(lattice, e3, "e3")
    c4 = _require_isotropic_vector(lattice, e4, "e4")
    pairings = (
        (lattice.bilinear(c1, c3), 1, "B(e1,e3)"),
        (lattice.bilinear(c2, c4), 1, "B(e2,e4)"),
        (lattice.bilinear(c1, c4), 0, "B(e1,e4)"),
        (lattice.bilinear(c2, c3), 0, "B(e2,e3)"),
        (lattice.bilinear(c3, c4), 0, "B(e3,e4)"),
    )
    for value, want, label in pairings:
        if value != want:
            raise ComputationError("%s = %s, need %d" % (label, value, want))
    n = lattice.n
    h2 = filtration.w_minus2
    h1 = (
        left_ideal_image(lattice, e3)
        .add(left_ideal_image(lattice, e4))
        .intersect(filtration.w_minus1)
    )
    h0 = left_ideal_image(lattice, e3 * e4)
    dims = (h2.dim, h1.dim, h0.dim)
    if dims != (1 << n, 1 << (n + 1), 1 << n):
        raise ComputationError("splitting dims %s are off" % (dims,))
    total = h2.add(h1).add(h0)
    if total.dim != 1 << lattice.dim:
        raise ComputationError("splitting pieces do not fill the algebra")
    # I_0 = the orthogonal complement of both hyperbolic planes
    constraints = []
    for c in (c1, c2, c3, c4):
        row = {}
        for j in range(lattice.dim):
            val = sum(c[i] * lattice.gram[i][j] for i in range(lattice.dim) if c[i])
            if val:
                row[j] = val
        constraints.append(row)
    i0 = []
    for vec in nullspace(constraints, lattice.dim):
        coords = [Fraction(0)] * lattice.dim
        for i, v in vec.items():
            coords[i] = v
        i0.append(lattice.vector(coords))
    return GradedSplitting(
        lattice=lattice,
        filtration=filtration,
        h_0=h0,
        h_minus1=h1,
        h_minus2=h2,
        i_minus1=(e1, e2),
        i_1=(e3, e4),
        i_0_basis=tuple(i0),
    )


# ---------------------------------------------------------------------------
# cocharacter compatibility


@dataclass(frozen=True)
class CocharacterCheck:
    """Containments v * H_{-i} <= H_{-i + shift} and parity preservation."""

    shift: int
    containments: tuple  # ((i, holds), ...) for i in occupied degrees
    parity_preserved: bool

    @property
    def ok(self):
        return self.parity_preserved and all(h for _, h in self.containments)


def _span_rows(vectors):
    return [
        {i: c for i, c in enumerate(v.grade_one_coords()) if c} for v in vectors
    ]


def _weight_slot(splitting, coords):
    lattice = splitting.lattice
    row = {i: c for i, c in enumerate(coords) if c}
    slots = (
        (-1, splitting.i_minus1),
        (0, splitting.i_0_basis),
        (1, splitting.i_1),
    )
    for shift, vectors in slots:
        if not vectors:
            continue
        space = RowSpace(lattice.dim, _span_rows(vectors))
        if space.contains_row(row):
            return shift
    return None


def cocharacter_conjugation_check(splitting, v):
    """Left multiplication by a homogeneous vector shifts the splitting by
    one weight step (down for the isotropic pair, up for its duals) and
    commutes with the even/odd grading."""
    coords = v.grade_one_coords()
    if coords is None or not any(coords):
        raise ComputationError("v must be a nonzero vector")
    shift = _weight_slot(splitting, coords)
    if shift is None:
        raise ComputationError(
            "v is not homogeneous for the I_-1 / I_0 / I_1 decomposition"
        )
    containments = []
    for i in (0, 1, 2):
        source = splitting.piece(i)
        target = splitting.piece(i - shift)
        image = source.left_multiply(v)
        containments.append((i, target.contains(image)))
    parity_ok = _parity_preserved(splitting.lattice, splitting, v)
    return CocharacterCheck(
        shift=shift,
        containments=tuple(containments),
        parity_preserved=parity_ok,
    )


def search_isotropic_vectors(lattice, height=3, limit=16):
    """Convenience search for small integer isotropic vectors.

    Enumerates coordinate vectors with entries in [-height, height]
    (height <= 10) and returns up to ``limit`` of them, normalised so the
    first nonzero coordinate is positive.  Scenario configs are expected to
    supply their own vectors; this is only a helper for exploration.
    """
    if height < 1 or height > 10:
        raise ComputationError("height must be between 1 and 10")
    found = []
    seen = set()
    span = range(-height, height + 1)
    for coords in itertools.product(span, repeat=lattice.dim):
        if not any(coords):
            continue
        lead = next(c for c in coords if c)
        if lead < 0:
            continue
        coords_f = [Fraction(c) for c in coords]
        if lattice.quadratic(coords_f):
            continue
        key = tuple(coords)
        if key in seen:
            continue
        seen.add(key)
        found.append(lattice.vector(coords_f))
        if len(found) >= limit:
            break
    return found


def _parity_preserved(lattice, splitting, v):
    """Even products of the splitting vectors act parity-preservingly."""
    vectors = list(splitting.i_minus1) + list(splitting.i_1) + list(
        splitting.i_0_basis
    )
    evens = [a * b for a, b in itertools.combinations(vectors, 2)]
    evens = [e for e in evens if e]
    for e in evens:
        if e.parity() != 0:
            return False
        for mono in lattice.monomials():
            prod = e * CliffordElement(lattice, {mono: Fraction(1)})
            if prod and prod.parity() != len(mono) % 2:
                return False
    return True
