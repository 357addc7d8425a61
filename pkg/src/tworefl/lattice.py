"""Even integral lattices given by Gram matrices.

Vectors are plain integer tuples in the lattice basis.  Named root lattices
(A_k, D_k, E_6, E_7, E_8) are negative definite; U is the hyperbolic plane and
``<k>`` the rank-one lattice of norm k.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import intmat
from .errors import DegenerateLatticeError, LatticeError

Vector = tuple[int, ...]


@dataclass(frozen=True)
class GramLattice:
    gram: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("gram matrix must be square")
        for i in range(n):
            if g[i][i] % 2:
                raise LatticeError("lattice is not even")
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise LatticeError("gram matrix is not symmetric")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return intmat.det(self.gram)

    @property
    def is_degenerate(self) -> bool:
        return self.rank > 0 and self.det == 0

    def require_nondegenerate(self) -> None:
        if self.is_degenerate:
            raise DegenerateLatticeError("degenerate lattice")

    def pair(self, u: Sequence, v: Sequence):
        g = self.gram
        return sum(u[i] * sum(g[i][j] * v[j] for j in range(len(v)) if v[j])
                   for i in range(len(u)) if u[i])

    def norm(self, v: Sequence):
        return self.pair(v, v)

    def pairings(self, v: Sequence) -> list:
        """(v, e_i) for every basis vector e_i."""
        return intmat.vecmat(v, self.gram)

    @cached_property
    def signature(self) -> tuple[int, int]:
        return signature(self)

    def to_json(self) -> dict:
        return {"name": self.name, "gram": [list(row) for row in self.gram]}

    def __str__(self) -> str:
        return self.name or f"GramLattice(rank={self.rank})"


def from_json(obj: dict | str) -> GramLattice:
    if isinstance(obj, str):
        obj = json.loads(obj)
    return GramLattice(tuple(map(tuple, obj["gram"])), obj.get("name", ""))


# -- named lattices ---------------------------------------------------------

def hyperbolic_plane() -> GramLattice:
    return GramLattice(((0, 1), (1, 0)), "U")


def rank_one(k: int) -> GramLattice:
    return GramLattice(((k,),), f"<{k}>")


def _from_cartan_edges(rank: int, edges: Iterable[tuple[int, int]], name: str) -> GramLattice:
    g = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        g[i][i] = -2
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return GramLattice(tuple(map(tuple, g)), name)


def root_lattice(kind: str, k: int) -> GramLattice:
    """Negative definite ADE lattice A_k, D_k (k >= 4) or E_6, E_7, E_8."""
    kind = kind.upper()
    if kind == "A" and k >= 1:
        return _from_cartan_edges(k, [(i, i + 1) for i in range(k - 1)], f"A{k}")
    if kind == "D" and k >= 4:
        edges = [(i, i + 1) for i in range(k - 2)] + [(k - 3, k - 1)]
        return _from_cartan_edges(k, edges, f"D{k}")
    if kind == "E" and k in (6, 7, 8):
        # chain 0-1-...-(k-2), branch node k-1 attached to node 2
        edges = [(i, i + 1) for i in range(k - 2)] + [(2, k - 1)]
        return _from_cartan_edges(k, edges, f"E{k}")
    raise LatticeError(f"unknown root lattice {kind}{k}")


def direct_sum(*parts: GramLattice) -> GramLattice:
    n = sum(p.rank for p in parts)
    g = [[0] * n for _ in range(n)]
    off = 0
    for p in parts:
        for i in range(p.rank):
            for j in range(p.rank):
                g[off + i][off + j] = p.gram[i][j]
        off += p.rank
    return GramLattice(tuple(map(tuple, g)), "+".join(p.name or "?" for p in parts))


def scaled(L: GramLattice, c: int) -> GramLattice:
    return GramLattice(tuple(tuple(c * x for x in row) for row in L.gram), f"{L.name}({c})")


_TOKEN = re.compile(r"\s*(\d*)\s*(U|II26|[AD]\d+|E[678]|<\s*-?\d+\s*>)\s*")


def _named(token: str) -> GramLattice:
    if token == "U":
        return hyperbolic_plane()
    if token == "II26":
        return parse_lattice("2U+3E8")
    if token.startswith("<"):
        return rank_one(int(token.strip("<> ")))
    return root_lattice(token[0], int(token[1:]))


def parse_lattice(text: str) -> GramLattice:
    """Parse ``"2U+3E8+A1+<-4>"`` style expressions, or a JSON object."""
    text = text.strip()
    if text.startswith("{"):
        return from_json(text)
    parts: list[GramLattice] = []
    for chunk in text.split("+"):
        m = _TOKEN.fullmatch(chunk)
        if not m:
            raise LatticeError(f"cannot parse lattice term {chunk!r}")
        mult = int(m.group(1)) if m.group(1) else 1
        parts.extend([_named(m.group(2).replace(" ", ""))] * mult)
    if not parts:
        raise LatticeError("empty lattice expression")
    L = direct_sum(*parts)
    return GramLattice(L.gram, text.replace(" ", ""))


def load_lattice(arg: str) -> GramLattice:
    """Expression, inline JSON, or a path to a JSON file."""
    if arg.endswith(".json"):
        with open(arg) as fh:
            return from_json(json.load(fh))
    return parse_lattice(arg)


# -- invariants ---------------------------------------------------------------

def signature(L: GramLattice) -> tuple[int, int]:
    """Exact (p, q) by symmetric Gaussian elimination over Q."""
    A = [[Fraction(x) for x in row] for row in L.gram]
    n = len(A)
    p = q = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if A[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if A[i][j] != 0), None)
            if pair is None:
                raise DegenerateLatticeError("degenerate lattice")
            i, j = pair
            # e_i <- e_i + e_j makes the diagonal entry 2 A_ij
            for k in range(n):
                A[i][k] += A[j][k]
            for k in range(n):
                A[k][i] += A[k][j]
            piv = i
        d = A[piv][piv]
        if d > 0:
            p += 1
        else:
            q += 1
        active.remove(piv)
        for i in active:
            if A[i][piv]:
                f = A[i][piv] / d
                for k in active:
                    A[i][k] -= f * A[piv][k]
                A[i][piv] = Fraction(0)
        for k in active:
            A[piv][k] = Fraction(0)
    return p, q


def divisibility(v: Sequence[int], L: GramLattice) -> int:
    """Positive generator of the ideal (v, L) for a primitive v."""
    if not any(v):
        raise LatticeError("zero vector has no divisibility")
    if intmat.vec_gcd(v) != 1:
        raise LatticeError("vector not primitive")
    return intmat.vec_gcd(L.pairings(v))


@dataclass(frozen=True)
class Sublattice:
    """A sublattice given by basis vectors in ambient coordinates."""

    ambient: GramLattice
    basis: tuple[Vector, ...]

    @cached_property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        return tuple(map(tuple, intmat.congruent(self.basis, self.ambient.gram)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def degenerate(self) -> bool:
        return self.rank > 0 and intmat.det(self.gram) == 0

    @property
    def lattice(self) -> GramLattice:
        return GramLattice(self.gram)

    def to_ambient(self, coords: Sequence[int]) -> Vector:
        return tuple(intmat.vecmat(coords, self.basis)) if self.basis else ()


def orth_complement(S: Sequence[Sequence[int]], L: GramLattice) -> Sublattice:
    """Integral basis of {v in L : (v, s) = 0 for s in S}.

    The result may be degenerate (check ``.degenerate``) when the
    restriction of the form is.
    """
    if not S:
        return Sublattice(L, tuple(tuple(int(i == j) for j in range(L.rank)) for i in range(L.rank)))
    cols = intmat.transpose([L.pairings(s) for s in S])
    basis = intmat.left_kernel(cols)
    return Sublattice(L, tuple(map(tuple, basis)))


def project_to(v: Sequence[int], K: Sequence[Sequence[int]], L: GramLattice
               ) -> tuple[tuple[Fraction, ...], Fraction]:
    """Orthogonal projection of v to K (x) Q; returns (vector, norm)."""
    if not K:
        return tuple(Fraction(0) for _ in v), Fraction(0)
    GK = intmat.congruent(K, L.gram)
    try:
        inv = intmat.inverse(GK)
    except ZeroDivisionError:
        raise DegenerateLatticeError("degenerate lattice") from None
    rhs = [L.pair(k, v) for k in K]
    c = intmat.matvec(inv, rhs)
    proj = tuple(Fraction(x) for x in intmat.vecmat(c, K))
    norm = sum(ci * ri for ci, ri in zip(c, rhs))
    return proj, Fraction(norm)


# -- enumeration ------------------------------------------------------------

def definiteness(L: GramLattice) -> int:
    """+1 positive definite, -1 negative definite, 0 otherwise."""
    if L.rank == 0:
        return 1
    p, q = L.signature
    if q == 0:
        return 1
    if p == 0:
        return -1
    return 0


def _canonical_sign(v: Sequence[int]) -> Vector:
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def _fincke_pohst(G: list[list[int]], bound: int) -> list[list[int]]:
    """All nonzero x with 0 < x^T G x <= bound, G positive definite (both signs)."""
    n = len(G)
    A = np.array(G, dtype=float)
    # completed squares: Q(x) = sum_i d_i (x_i + sum_{j>i} r_ij x_j)^2
    d = np.zeros(n)
    r = np.zeros((n, n))
    M = A.copy()
    for i in range(n):
        d[i] = M[i, i]
        for j in range(i + 1, n):
            r[i, j] = M[i, j] / d[i]
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                M[j, k] -= d[i] * r[i, j] * r[i, k]
    slack = 1e-7 * (1 + bound)
    out: list[list[int]] = []
    x = [0] * n

    def rec(i: int, remaining: float):
        if i < 0:
            if any(x):
                val = sum(x[a] * sum(G[a][b] * x[b] for b in range(n)) for a in range(n))
                if 0 < val <= bound:
                    out.append(list(x))
            return
        c = -sum(r[i, j] * x[j] for j in range(i + 1, n))
        rad = math.sqrt(max(remaining, 0.0) / d[i]) + 1e-9
        lo, hi = math.ceil(c - rad - 1e-9), math.floor(c + rad + 1e-9)
        for xi in range(lo, hi + 1):
            x[i] = xi
            used = d[i] * (xi - c) ** 2
            if used <= remaining + slack:
                rec(i - 1, remaining - used)
        x[i] = 0

    rec(n - 1, bound + slack)
    return out


def short_vectors(N: GramLattice, bound: int) -> list[Vector]:
    """One representative per +-pair of nonzero v with |(v, v)| <= bound.

    Floating point only bounds the search; the norm test is exact.
    """
    sign = definiteness(N)
    if sign == 0 or N.is_degenerate:
        raise LatticeError("definite lattice required")
    if N.rank == 0 or bound <= 0:
        return []
    G = [[sign * x for x in row] for row in N.gram]
    T = intmat.lll_gram(G)
    red = intmat.congruent(T, G)
    found = {_canonical_sign(intmat.vecmat(y, T)) for y in _fincke_pohst(red, bound)}
    return sorted(found, key=lambda v: (abs(N.norm(v)), v))


def roots(N: GramLattice) -> list[Vector]:
    """(-2)-vectors of a negative definite lattice, one per +-pair."""
    if definiteness(N) != -1:
        raise LatticeError("definite lattice required")
    return [v for v in short_vectors(N, 2) if N.norm(v) == -2]


# -- root systems -------------------------------------------------------------

def ade_root_count(kind: str, k: int) -> int:
    if kind == "A":
        return k * (k + 1)
    if kind == "D":
        return 2 * k * (k - 1)
    return {6: 72, 7: 126, 8: 240}[k]


def _ade_types(max_rank: int) -> list[tuple[str, int]]:
    out = [("A", k) for k in range(1, max_rank + 1)]
    out += [("D", k) for k in range(4, max_rank + 1)]
    out += [("E", k) for k in (6, 7, 8) if k <= max_rank]
    return out


ADE_BY_RANK_AND_COUNT: dict[tuple[int, int], str] = {}
for _kind, _k in _ade_types(64):
    _key = (_k, ade_root_count(_kind, _k))
    assert _key not in ADE_BY_RANK_AND_COUNT, _key
    ADE_BY_RANK_AND_COUNT[_key] = f"{_kind}{_k}"


@dataclass(frozen=True)
class RootComponent:
    label: str
    roots: tuple[Vector, ...]          # one per +-pair
    simple_roots: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.simple_roots)


@dataclass(frozen=True)
class RootDecomposition:
    components: tuple[RootComponent, ...]
    basis: tuple[Vector, ...]

    @property
    def labels(self) -> list[str]:
        return sorted(c.label for c in self.components)

    @property
    def rank(self) -> int:
        return len(self.basis)


def _simple_roots(N: GramLattice, rts: Sequence[Vector]) -> list[Vector]:
    # generic linear functional picks a positive system
    base = 2 * max((abs(x) for r in rts for x in r), default=1) + 1
    weights = [base ** i for i in range(N.rank)]
    pos = []
    for r in rts:
        f = sum(w * x for w, x in zip(weights, r))
        pos.append(r if f > 0 else tuple(-x for x in r))
    posset = set(pos)
    simple = []
    for r in pos:
        decomposable = any(tuple(a - b for a, b in zip(r, s)) in posset for s in pos if s != r)
        if not decomposable:
            simple.append(r)
    return simple


def root_sublattice(N: GramLattice) -> RootDecomposition:
    """Sublattice generated by the (-2)-vectors, split into ADE components."""
    rts = roots(N)
    if not rts:
        return RootDecomposition((), ())
    n = len(rts)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if N.pair(rts[i], rts[j]) != 0:
                parent[find(i)] = find(j)
    groups: dict[int, list[Vector]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(rts[i])
    comps = []
    for members in groups.values():
        simple = _simple_roots(N, members)
        rk = intmat.rank(members)
        label = ADE_BY_RANK_AND_COUNT.get((rk, 2 * len(members)))
        assert label is not None and len(simple) == rk, (rk, len(members), len(simple))
        comps.append(RootComponent(label, tuple(members), tuple(simple)))
    comps.sort(key=lambda c: (c.label[0], int(c.label[1:])))
    basis = tuple(map(tuple, intmat.hnf(rts)))
    return RootDecomposition(tuple(comps), basis)
