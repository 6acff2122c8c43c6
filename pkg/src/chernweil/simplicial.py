"""Finite simplicial sets with formal degeneracies.

A simplicial set is presented by its nondegenerate simplices together
with face maps whose targets may carry a degeneracy word: the face
``d_i sigma`` is stored as ``(tau, w)`` meaning ``s_{w[0]} s_{w[1]} ...
tau``.  Words are kept in normalized, strictly decreasing form, so two
formal simplices are equal iff their representations are equal.  All
homological computations run on the normalized chain complex (the
nondegenerate generators), which has the same homology.

Degeneracy bookkeeping follows the simplicial identities

    d_i s_j = s_{j-1} d_i   (i < j)
    d_i s_j = id            (i = j, j+1)
    d_i s_j = s_j d_{i-1}   (i > j+1)
    s_i s_j = s_{j+1} s_i   (i <= j)

which are applied eagerly whenever a face or degeneracy operator meets a
word.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import nullity, rank, solve_or_certify
from .scalars import Scalar


@dataclass(frozen=True, order=True)
class SimplexId:
    """A nondegenerate simplex: its dimension and position in that dimension."""

    dim: int
    index: int

    def __repr__(self):
        return f"{self.dim}.{self.index}"


# A formal simplex (sid, word): the simplex s_{word} sid, of dimension
# sid.dim + len(word).  word is strictly decreasing.
FormalSimplex = tuple


def formal_dim(fs):
    sid, word = fs
    return sid.dim + len(word)


def compose_degeneracy(j, word):
    """Normalized word of s_j composed with s_word (s_j applied last)."""
    if not word or j > word[0]:
        return (j,) + word
    # s_j s_k = s_{k+1} s_j for j <= k
    return (word[0] + 1,) + compose_degeneracy(j, word[1:])


def compose_words(outer, inner):
    """Normalized word of s_outer composed with s_inner."""
    acc = tuple(inner)
    for j in reversed(outer):
        acc = compose_degeneracy(j, acc)
    return acc


def degenerate(fs, j):
    sid, word = fs
    return (sid, compose_degeneracy(j, word))


def strip_degeneracy(fs, j):
    """Write fs = s_j fs' and return fs'; j must lie in the word's index set."""
    sid, word = fs
    if j not in word:
        raise ValueError(f"degeneracy {j} not extractable from word {word}")
    rest = {i - 1 if i > j else i for i in word if i != j}
    return (sid, tuple(sorted(rest, reverse=True)))


def word_epi(word, top_dim):
    """Vertex map [top_dim] -> [top_dim - len(word)] of the collapse s_word."""
    out = []
    for v in range(top_dim + 1):
        for w in word:
            if v > w:
                v -= 1
        out.append(v)
    return tuple(out)


def word_of_epi(epi):
    """Degeneracy word (strictly decreasing) of a surjective monotone map."""
    flats = {i for i in range(len(epi) - 1) if epi[i] == epi[i + 1]}
    return tuple(sorted(flats, reverse=True))


def epi_mono_factor(m):
    """Factor a monotone map as injection-after-surjection.

    Returns (epi, mono): m = mono o epi with mono given by its sorted
    image values and epi by ranks within the image.
    """
    values = sorted(set(m))
    ranks = {v: i for i, v in enumerate(values)}
    return tuple(ranks[v] for v in m), tuple(values)


def compose_monotone(outer, inner):
    return tuple(outer[v] for v in inner)


def mono_skip(d, skip):
    """The injection [d - len(skip)] -> [d] missing the values in skip."""
    return tuple(v for v in range(d + 1) if v not in skip)


class SimplicialSet:
    """Finite simplicial set in nondegenerate presentation.

    Attributes
    ----------
    counts : list of int
        counts[d] is the number of nondegenerate d-simplices.
    faces : dict
        (SimplexId, i) -> FormalSimplex, for every d > 0 simplex and
        0 <= i <= d.
    names : dict
        optional human-readable labels, SimplexId -> str.
    """

    def __init__(self, counts, faces, names=None):
        self.counts = list(counts)
        while self.counts and self.counts[-1] == 0:
            self.counts.pop()
        self.faces = dict(faces)
        self.names = dict(names or {})

    def __eq__(self, other):
        """Structural equality: same cells and face structure (names ignored)."""
        return (
            isinstance(other, SimplicialSet)
            and self.counts == other.counts
            and self.faces == other.faces
        )

    __hash__ = None

    @property
    def dim(self):
        return len(self.counts) - 1

    def cells(self, d):
        if d < 0 or d > self.dim:
            return []
        return [SimplexId(d, i) for i in range(self.counts[d])]

    def all_cells(self):
        for d in range(self.dim + 1):
            yield from self.cells(d)

    def face(self, sid, i):
        return self.faces[(sid, i)]

    def face_of(self, fs, i):
        """Face d_i of a formal simplex, normalized."""
        sid, word = fs
        if not word:
            return self.faces[(sid, i)]
        j = word[0]
        rest = (sid, word[1:])
        if i < j:
            return degenerate(self.face_of(rest, i), j - 1)
        if i in (j, j + 1):
            return rest
        return degenerate(self.face_of(rest, i - 1), j)

    def name(self, sid):
        return self.names.get(sid, f"{sid.dim}.{sid.index}")

    def validate(self):
        """Check reference integrity and the simplicial identities.

        Returns a list of violation strings (empty iff valid).
        """
        bad = []
        for d in range(1, self.dim + 1):
            for sid in self.cells(d):
                for i in range(d + 1):
                    if (sid, i) not in self.faces:
                        bad.append(f"missing face ({sid}, {i})")
                        continue
                    tgt, word = self.faces[(sid, i)]
                    if tgt.dim + len(word) != d - 1:
                        bad.append(f"face ({sid}, {i}) has wrong dimension")
                    if tgt.dim > self.dim or tgt.index >= self.counts[tgt.dim]:
                        bad.append(f"face ({sid}, {i}) references missing {tgt}")
                    if any(word[k] <= word[k + 1] for k in range(len(word) - 1)):
                        bad.append(f"face ({sid}, {i}) word {word} not normalized")
        if bad:
            return bad
        for d in range(2, self.dim + 1):
            for sid in self.cells(d):
                fs = (sid, ())
                for i in range(d + 1):
                    for j in range(i + 1, d + 1):
                        a = self.face_of(self.face_of(fs, j), i)
                        b = self.face_of(self.face_of(fs, i), j - 1)
                        if a != b:
                            bad.append(
                                f"simplicial identity fails on {sid}: "
                                f"d_{i} d_{j} != d_{j-1} d_{i}"
                            )
        return bad


class SimplicialMap:
    """Map of simplicial sets, given on nondegenerate generators.

    assignment maps each nondegenerate source simplex to a formal
    simplex of the target; the extension to degenerate simplices is by
    word composition.
    """

    def __init__(self, source, target, assignment):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)

    def apply(self, fs):
        sid, word = fs
        tid, tword = self.assignment[sid]
        return (tid, compose_words(word, tword))

    def __call__(self, sid):
        return self.assignment[sid]

    def validate(self):
        bad = []
        for d in range(self.source.dim + 1):
            for sid in self.source.cells(d):
                if sid not in self.assignment:
                    bad.append(f"no assignment for {sid}")
                    continue
                tid, word = self.assignment[sid]
                if tid.dim + len(word) != d:
                    bad.append(f"assignment for {sid} has wrong dimension")
        if bad:
            return bad
        for d in range(1, self.source.dim + 1):
            for sid in self.source.cells(d):
                for i in range(d + 1):
                    lhs = self.apply(self.source.face_of((sid, ()), i))
                    rhs = self.target.face_of(self.apply((sid, ())), i)
                    if lhs != rhs:
                        bad.append(f"does not commute with d_{i} on {sid}")
        return bad

    @staticmethod
    def identity(X):
        return SimplicialMap(X, X, {sid: (sid, ()) for sid in X.all_cells()})

    def compose(self, other):
        """self o other (other applied first)."""
        if other.target != self.source:
            raise ValueError("composition mismatch")
        return SimplicialMap(
            other.source,
            self.target,
            {sid: self.apply(other.assignment[sid]) for sid in other.source.all_cells()},
        )


# ---------------------------------------------------------------------------
# standard geometries


def _from_subsets(n, subsets):
    """Subcomplex of Delta^n spanned by the given vertex subsets.

    Subsets must be downward closed.  Cells in each dimension are
    ordered lexicographically; names record the vertex tuples.
    """
    by_dim = {}
    for s in subsets:
        by_dim.setdefault(len(s) - 1, []).append(tuple(sorted(s)))
    top = max(by_dim) if by_dim else 0
    counts = []
    index = {}
    names = {}
    for d in range(top + 1):
        cells = sorted(set(by_dim.get(d, [])))
        counts.append(len(cells))
        for i, s in enumerate(cells):
            index[s] = SimplexId(d, i)
            names[SimplexId(d, i)] = "".join(map(str, s))
    faces = {}
    for s, sid in index.items():
        d = sid.dim
        for i in range(d + 1) if d > 0 else []:
            t = s[:i] + s[i + 1:]
            faces[(sid, i)] = (index[t], ())
    X = SimplicialSet(counts, faces, names)
    X._subset_index = index  # used by horns and inclusions
    return X


def standard_simplex(n):
    """The standard simplicial n-simplex; C(n+1, m+1) cells in dim m."""
    subs = []
    for m in range(n + 1):
        subs.extend(itertools.combinations(range(n + 1), m + 1))
    return _from_subsets(n, subs)


def boundary_sphere(n):
    """The boundary of Delta^{n+1}: a simplicial n-sphere."""
    subs = []
    for m in range(n + 2):
        subs.extend(itertools.combinations(range(n + 2), m + 1))
    subs.remove(tuple(range(n + 2)))
    return _from_subsets(n + 1, subs)


def two_disk_sphere():
    """Two 2-cells N and S glued along their entire boundary.

    The realization is a 2-sphere; [N] - [S] is a fundamental cycle.
    """
    X = standard_simplex(2)
    counts = [3, 3, 2]
    faces = dict(X.faces)
    names = dict(X.names)
    top = SimplexId(2, 0)
    N, S = SimplexId(2, 0), SimplexId(2, 1)
    names[N], names[S] = "N", "S"
    for i in range(3):
        faces[(S, i)] = X.faces[(top, i)]
    return SimplicialSet(counts, faces, names)


class InvalidHornError(ValueError):
    pass


@dataclass
class HornPresentation:
    """The horn Lambda^n_k as a simplicial set plus its inclusion data."""

    n: int
    k: int
    space: SimplicialSet
    cell_subsets: dict = field(default_factory=dict)

    def inclusion_into(self, delta):
        """SimplicialMap from the horn into standard_simplex(n)."""
        assignment = {}
        for sid, s in self.cell_subsets.items():
            assignment[sid] = (delta._subset_index[s], ())
        return SimplicialMap(self.space, delta, assignment)


def horn(n, k):
    """All faces of Delta^n except the k'th, without the interior."""
    if not 0 <= k <= n:
        raise InvalidHornError(f"horn index {k} out of range for Delta^{n}")
    full = tuple(range(n + 1))
    omit = full[:k] + full[k + 1:]
    subs = []
    for m in range(n + 1):
        for s in itertools.combinations(range(n + 1), m + 1):
            if s != full and s != omit:
                subs.append(s)
    space = _from_subsets(n, subs)
    cell_subsets = {sid: s for s, sid in space._subset_index.items()}
    return HornPresentation(n, k, space, cell_subsets)


# ---------------------------------------------------------------------------
# product with the interval


def _interval_simplices(m):
    """All m-simplices of Delta^1 as monotone 0/1 tuples of length m+1."""
    out = [(0,) * (m + 1), (1,) * (m + 1)]
    for j in range(m):
        out.append((0,) * (j + 1) + (1,) * (m - j))
    return out


def _tuple_ez(b):
    return {i for i in range(len(b) - 1) if b[i] == b[i + 1]}


def product_with_interval(X):
    """The prism X x Delta^1 with its two end inclusions.

    Nondegenerate (m)-cells are pairs (a, b) with a a formal simplex of
    X, b an m-simplex of Delta^1, and no common degeneracy; every
    nondegenerate n-cell of X contributes n+1 nondegenerate (n+1)-cells
    (the prism decomposition, ordered by the degeneracy position, which
    fixes orientation signs deterministically).
    """
    cells_by_dim = {}
    for m in range(X.dim + 2):
        keys = []
        # diagonal-type cells: nondegenerate a paired with any b
        for a in X.cells(m):
            for b in _interval_simplices(m):
                keys.append(((a, ()), b))
        # prism cells: s_j a' paired with the jump-at-j simplex
        for a in X.cells(m - 1) if m >= 1 else []:
            for j in range(m):
                b = (0,) * (j + 1) + (1,) * (m - j)
                keys.append(((a, (j,)), b))
        cells_by_dim[m] = keys

    index = {}
    names = {}
    counts = []
    for m in range(X.dim + 2):
        counts.append(len(cells_by_dim[m]))
        for i, key in enumerate(cells_by_dim[m]):
            sid = SimplexId(m, i)
            index[key] = sid
            (a, w), b = key
            names[sid] = f"{X.name(a)}{''.join(f's{j}' for j in w)}x{''.join(map(str, b))}"

    def normalize_pair(fsX, b):
        common = set(fsX[1]) & _tuple_ez(b)
        if not common:
            return (fsX, b), ()
        j = max(common)
        core, w = normalize_pair(strip_degeneracy(fsX, j), b[:j] + b[j + 1:])
        return core, compose_degeneracy(j, w)

    faces = {}
    for m in range(1, X.dim + 2):
        for key in cells_by_dim[m]:
            sid = index[key]
            fsX, b = key
            for i in range(m + 1):
                fX = X.face_of(fsX, i)
                fb = b[:i] + b[i + 1:]
                core, word = normalize_pair(fX, fb)
                faces[(sid, i)] = (index[core], word)

    P = SimplicialSet(counts, faces, names)
    P._product_index = index

    def end_map(eps):
        assignment = {}
        for a in X.all_cells():
            b = (eps,) * (a.dim + 1)
            assignment[a] = (index[((a, ()), b)], ())
        return SimplicialMap(X, P, assignment)

    return P, end_map(0), end_map(1)


def interval_projection(P, X):
    """The projection X x Delta^1 -> X (requires P from product_with_interval)."""
    assignment = {}
    for key, sid in P._product_index.items():
        fsX, _b = key
        assignment[sid] = fsX
    return SimplicialMap(P, X, assignment)


# ---------------------------------------------------------------------------
# chains, cochains, homology


class Chain:
    """Finitely supported chain with Fraction coefficients."""

    def __init__(self, dim, coeffs=None):
        self.dim = dim
        self.coeffs = {}
        for sid, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                self.coeffs[sid] = c

    def __add__(self, other):
        out = dict(self.coeffs)
        for sid, c in other.coeffs.items():
            s = out.get(sid, Fraction(0)) + c
            if s:
                out[sid] = s
            else:
                out.pop(sid, None)
        return Chain(self.dim, out)

    def __neg__(self):
        return Chain(self.dim, {sid: -c for sid, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, Chain) and self.dim == other.dim and self.coeffs == other.coeffs

    def is_zero(self):
        return not self.coeffs


class Cochain:
    """Finitely supported cochain with Scalar values on nondegenerate cells."""

    def __init__(self, dim, values=None):
        self.dim = dim
        self.values = {}
        for sid, v in (values or {}).items():
            v = Scalar.coerce(v)
            if not v.is_zero():
                self.values[sid] = v

    def value(self, sid):
        return self.values.get(sid, Scalar.zero())

    def __add__(self, other):
        out = dict(self.values)
        for sid, v in other.values.items():
            s = out.get(sid, Scalar.zero()) + v
            if s.is_zero():
                out.pop(sid, None)
            else:
                out[sid] = s
        return Cochain(self.dim, out)

    def __neg__(self):
        return Cochain(self.dim, {sid: -v for sid, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Cochain(self.dim, {sid: v * c for sid, v in self.values.items()})

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.dim == other.dim and self.values == other.values

    def is_zero(self):
        return not self.values


def boundary_chain(X, chain):
    if chain.dim == 0:
        return Chain(-1, {})
    out = {}
    for sid, c in chain.coeffs.items():
        for i in range(sid.dim + 1):
            tgt, word = X.face(sid, i)
            if word:
                continue  # degenerate faces vanish in the normalized complex
            s = out.get(tgt, Fraction(0)) + c * (-1) ** i
            if s:
                out[tgt] = s
            else:
                out.pop(tgt, None)
    return Chain(chain.dim - 1, out)


def pairing(cochain, chain):
    if cochain.dim != chain.dim:
        raise ValueError("pairing dimension mismatch")
    out = Scalar.zero()
    for sid, c in chain.coeffs.items():
        out = out + cochain.value(sid) * c
    return out


def coboundary(X, cochain):
    """(dc)(sigma) = c(boundary sigma) on the normalized complex."""
    k = cochain.dim
    out = {}
    for sid in X.cells(k + 1):
        v = Scalar.zero()
        for i in range(k + 2):
            tgt, word = X.face(sid, i)
            if word:
                continue
            v = v + cochain.value(tgt) * Fraction((-1) ** i)
        if not v.is_zero():
            out[sid] = v
    return Cochain(k + 1, out)


def pullback_cochain(f, cochain):
    """f^* on normalized cochains: degenerate images contribute zero."""
    out = {}
    for sid in f.source.cells(cochain.dim):
        tid, word = f.assignment[sid]
        if word:
            continue
        v = cochain.value(tid)
        if not v.is_zero():
            out[sid] = v
    return Cochain(cochain.dim, out)


def boundary_operator(X, k):
    """Matrix of the boundary C_k -> C_{k-1} on nondegenerate generators."""
    if k < 1:
        raise ValueError("boundary_operator needs k >= 1")
    rows = X.counts[k - 1] if k - 1 <= X.dim else 0
    cols = X.counts[k] if k <= X.dim else 0
    M = [[Fraction(0)] * cols for _ in range(rows)]
    for j, sid in enumerate(X.cells(k)):
        for i in range(k + 1):
            tgt, word = X.face(sid, i)
            if word:
                continue
            M[tgt.index][j] += (-1) ** i
    return M


def betti_numbers(X, max_dim):
    """Ranks of rational homology: dim ker d_k - rank d_{k+1}."""
    out = []
    for k in range(max_dim + 1):
        nk = X.counts[k] if k <= X.dim else 0
        if k == 0:
            ker = nk
        else:
            ker = nullity(boundary_operator(X, k), nk) if nk else 0
        if k + 1 <= X.dim and X.counts[k + 1]:
            rk = rank(boundary_operator(X, k + 1))
        else:
            rk = 0
        out.append(ker - rk)
    return out


def is_coboundary(X, cochain):
    """Find b with db = cochain, or certify failure with a pairing cycle.

    Returns ("witness", Cochain) or ("cycle", Chain); in the second case
    the chain z is a cycle with <cochain, z> != 0.
    """
    k = cochain.dim
    cells_k = X.cells(k)
    cells_low = X.cells(k - 1) if k >= 1 else []
    matrix = []
    rhs = []
    for sid in cells_k:
        row = [Fraction(0)] * len(cells_low)
        if k >= 1:
            for i in range(k + 1):
                tgt, word = X.face(sid, i)
                if word:
                    continue
                row[tgt.index] += (-1) ** i
        matrix.append(row)
        rhs.append(cochain.value(sid))
    if not matrix:
        return "witness", Cochain(k - 1, {})
    status, data = solve_or_certify(matrix, rhs)
    if status == "solved":
        witness = Cochain(k - 1, dict(zip(cells_low, data)))
        return "witness", witness
    cycle = Chain(k, {sid: y for sid, y in zip(cells_k, data) if y})
    return "cycle", cycle


def fundamental_cycle_two_disk(X):
    """[N] - [S] on two_disk_sphere."""
    return Chain(2, {SimplexId(2, 0): 1, SimplexId(2, 1): -1})
