"""The finite pool of signature-(2,1) lattices and generic curve certificates.

a_n is governed by the largest norm of a root-lattice vector that is not
orthogonal to any root (an interior point of a Weyl chamber), b_n by the
smallest positive norm of such a vector in U + kA_1.  The pool consists of
<4>+<4>+<-a> for even 0 < a <= a_n and U+<b> for even 0 < b <= b_n.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import intmat
from .discform import DiscriminantForm, HeegnerLabel, discriminant_form, heegner_component, pi_L, splits_2U_by_length
from .errors import CapExceeded, LatticeError
from .lattice import (
    GramLattice,
    Vector,
    definiteness,
    direct_sum,
    divisibility,
    hyperbolic_plane,
    orth_complement,
    project_to,
    rank_one,
    root_lattice,
    root_sublattice,
    roots,
    short_vectors,
)

log = logging.getLogger(__name__)

DEFAULT_CAPS = {"chamber_norm": 400, "chamber_box": 4, "resplit_alpha": 8, "coset_norm": 64}


# -- interior Weyl chamber points of root lattices -------------------------------------

@lru_cache(maxsize=None)
def _chamber_optimum(cartan: tuple[tuple[int, ...], ...]) -> tuple[int, tuple[int, ...]]:
    """Least norm of a root-lattice point strictly inside the fundamental chamber.

    ``cartan`` is the positive definite Gram matrix of the simple roots.  A
    point with (m, alpha_i) = c_i >= 1 has simple-root coordinates C^-1 c and
    norm c^T C^-1 c, which grows in every c_i because C^-1 > 0 entrywise;
    a best-first walk over c therefore meets the optimum first.
    Returns (norm, simple-root coordinates).
    """
    r = len(cartan)
    det = intmat.det(cartan)
    adj = [[int(x * det) for x in row] for row in intmat.inverse(cartan)]
    # states carry adj c and det * norm so that each step costs O(r)
    start = (1,) * r
    w0 = tuple(sum(row) for row in adj)
    heap = [(sum(w0), start, w0)]
    seen = {start}
    while heap:
        val, c, w = heapq.heappop(heap)
        if all(x % det == 0 for x in w):
            return val // det, tuple(x // det for x in w)
        for i in range(r):
            nxt = c[:i] + (c[i] + 1,) + c[i + 1:]
            if nxt not in seen:
                seen.add(nxt)
                w2 = tuple(x + adj[j][i] for j, x in enumerate(w))
                heapq.heappush(heap, (val + 2 * w[i] + adj[i][i], nxt, w2))
    raise AssertionError("unreachable: the root lattice meets every chamber")


def _cartan_of(kind: str, k: int) -> tuple[tuple[int, ...], ...]:
    L = root_lattice(kind, k)
    return tuple(tuple(-x for x in row) for row in L.gram)


def ade_chamber_norm(label: str) -> int:
    """Positive norm of the optimal interior chamber point of an ADE lattice."""
    return _chamber_optimum(_cartan_of(label[0], int(label[1:])))[0]


def chamber_vector(R: GramLattice) -> tuple[Vector, int]:
    """m in the root sublattice of R, non-orthogonal to every root, of maximal norm."""
    rd = root_sublattice(R)
    if not rd.components:
        raise LatticeError("no roots")
    m = [0] * R.rank
    for comp in rd.components:
        simple = comp.simple_roots
        cartan = tuple(tuple(-R.pair(a, b) for b in simple) for a in simple)
        _, coords = _chamber_optimum(cartan)
        for c, alpha in zip(coords, simple):
            for i in range(R.rank):
                m[i] += c * alpha[i]
    return tuple(m), R.norm(m)


def max_nonorthogonal_norm(R: GramLattice | Sequence[str]) -> int:
    """max (m, m) over m in R with (m, l) != 0 for every root l of R.

    Accepts a negative definite root lattice or a list of ADE labels; the
    value is additive over orthogonal components.
    """
    if isinstance(R, GramLattice):
        return chamber_vector(R)[1]
    labels = list(R)
    if not labels:
        raise LatticeError("no roots")
    return -sum(ade_chamber_norm(lab) for lab in labels)


def enumerate_Rn(n: int) -> list[tuple[str, ...]]:
    """ADE sums of total rank 1 .. n-2, as sorted label tuples."""
    if n < 3:
        return []
    max_rank = n - 2
    types = [f"A{k}" for k in range(1, max_rank + 1)]
    types += [f"D{k}" for k in range(4, max_rank + 1)]
    types += [f"E{k}" for k in (6, 7, 8) if k <= max_rank]
    ranks = {t: int(t[1:]) for t in types}
    out: list[tuple[str, ...]] = []

    def rec(start: int, left: int, acc: list[str]):
        if acc:
            out.append(tuple(acc))
        for i in range(start, len(types)):
            t = types[i]
            if ranks[t] <= left:
                acc.append(t)
                rec(i, left - ranks[t], acc)
                acc.pop()

    rec(0, max_rank, [])
    return sorted(out, key=lambda s: (sum(ranks[t] for t in s), s))


@lru_cache(maxsize=None)
def compute_a_n(n: int) -> int:
    """-a_n = min over R in R_n of max_nonorthogonal_norm(R).

    The inner value is additive over components, so the outer optimum is an
    unbounded knapsack over ADE types with total rank <= n - 2.
    """
    if n < 3:
        raise ValueError("n >= 3 required")
    cap = n - 2
    types = [f"A{k}" for k in range(1, cap + 1)] + [f"D{k}" for k in range(4, cap + 1)]
    types += [f"E{k}" for k in (6, 7, 8) if k <= cap]
    best = [0] * (cap + 1)
    for r in range(1, cap + 1):
        best[r] = best[r - 1]
        for t in types:
            k = int(t[1:])
            if k <= r:
                best[r] = max(best[r], best[r - k] + ade_chamber_norm(t))
    return best[cap]


# -- Weyl chambers of U + kA_1 -------------------------------------------------

def u_plus_kA1(k: int) -> GramLattice:
    return direct_sum(hyperbolic_plane(), *[root_lattice("A", 1)] * k) if k else hyperbolic_plane()


def qualifies(m: Sequence[int], L: GramLattice) -> bool:
    """True iff no root of L is orthogonal to m, for (m, m) > 0 in signature (1, *)."""
    comp = orth_complement([m], L)
    if comp.rank == 0:
        return True
    return not roots(comp.lattice)


def _small_root_in_perp(m: Sequence[int], reach: int = 2) -> bool:
    """Cheap sufficient test: a root (p, q, y) of U + kA_1 orthogonal to m with y of support <= 2.

    Roots satisfy pq = |y|^2 - 1; orthogonality reads b p + a q = 2 (x, y).
    """
    a, b, *xs = m
    k = len(xs)
    ys = []
    for i in range(k):
        for u in range(1, reach + 1):
            ys.append(((i, u),))
    for i in range(k):
        for j in range(i + 1, k):
            for u in range(1, reach + 1):
                for w in range(-reach, reach + 1):
                    if w:
                        ys.append(((i, u), (j, w)))
    ys.append(())
    for y in ys:
        s = 2 * sum(xs[i] * c for i, c in y)
        c = sum(c * c for _, c in y) - 1
        if c == 0:
            if s % a == 0 or s % b == 0:
                return True
            continue
        for p in range(1, abs(c) + 1):
            if c % p:
                continue
            for pp in (p, -p):
                if b * pp + a * (c // pp) == s:
                    return True
    return False


def _multisets(k: int, top: int):
    """Nonincreasing tuples of length k with entries in 1..top."""
    return itertools.combinations_with_replacement(range(top, 0, -1), k)


@lru_cache(maxsize=None)
def min_chamber_norm_witness(k: int, norm_cap: int = DEFAULT_CAPS["chamber_norm"],
                             box: int = DEFAULT_CAPS["chamber_box"]) -> tuple[int, Vector]:
    """Least (m, m) > 0 over m in U + kA_1 not orthogonal to any root.

    Coordinates are (a, b, x_1..x_k) in the basis e, f, r_1..r_k.  Signed
    permutations of the r_i and the symmetries of U reduce the search to
    0 < a <= b and x_1 >= ... >= x_k >= 1 (x_i = 0 would be orthogonal to
    r_i).  The A_1 coefficients are searched in a box of the given size.
    """
    L = u_plus_kA1(k)
    for t in range(2, norm_cap + 1, 2):
        for top in range(1, box + 1):
            for xs in _multisets(k, top):
                if k and xs[0] != top:
                    continue
                ab = t // 2 + sum(x * x for x in xs)
                for a in range(1, int(ab ** 0.5) + 1):
                    if ab % a:
                        continue
                    m = (a, ab // a, *xs)
                    if not _small_root_in_perp(m) and qualifies(m, L):
                        return t, m
            if k == 0:
                break
    raise CapExceeded(f"cap exceeded: no chamber vector of norm <= {norm_cap} for k = {k}")


def min_chamber_norm(k: int) -> int:
    return min_chamber_norm_witness(k)[0]


@lru_cache(maxsize=None)
def compute_b_n(n: int) -> int:
    if n < 2:
        raise ValueError("n >= 2 required")
    return max(min_chamber_norm(k) for k in range(0, n - 1))


# -- the pool ----------------------------------------------------------------------

PRIME_FOUR = "PrimeFour"
HYPERBOLIC = "Hyperbolic"


@dataclass(frozen=True)
class CurveData:
    area_over_2pi: Fraction
    max_stabilizer: int


@dataclass(frozen=True)
class PoolMember:
    family: str
    param: int
    curve_data: CurveData | None = field(default=None, compare=False)

    @property
    def gram(self) -> GramLattice:
        if self.family == PRIME_FOUR:
            return direct_sum(rank_one(4), rank_one(4), rank_one(-self.param))
        return direct_sum(hyperbolic_plane(), rank_one(self.param))

    @property
    def key(self) -> str:
        return f"<4>+<4>+<-{self.param}>" if self.family == PRIME_FOUR else f"U+<{self.param}>"

    def to_json(self) -> dict:
        name = "a" if self.family == PRIME_FOUR else "b"
        return {"family": "<4>+<4>+<-a>" if self.family == PRIME_FOUR else "U+<b>",
                name: self.param, "gram": [list(r) for r in self.gram.gram]}


def build_pool(n: int, a_n: int | None = None, b_n: int | None = None) -> list[PoolMember]:
    a_n = compute_a_n(n) if a_n is None else a_n
    b_n = compute_b_n(n) if b_n is None else b_n
    members = [PoolMember(PRIME_FOUR, a) for a in range(2, a_n + 1, 2)]
    members += [PoolMember(HYPERBOLIC, b) for b in range(2, b_n + 1, 2)]
    return members


def pool_member_for(K_gram: Sequence[Sequence[int]]) -> PoolMember | None:
    g = [list(r) for r in K_gram]
    if g[0] == [4, 0, 0] and g[1] == [0, 4, 0] and g[2][:2] == [0, 0] and g[2][2] < 0:
        return PoolMember(PRIME_FOUR, -g[2][2])
    if g[0] == [0, 1, 0] and g[1] == [1, 0, 0] and g[2][:2] == [0, 0] and g[2][2] > 0:
        return PoolMember(HYPERBOLIC, g[2][2])
    return None


# -- generic curve certificates --------------------------------------------------

CASE_A = "a"
CASE_B = "b"
CASE_MU = "mu-reduction"


@dataclass(frozen=True)
class GenericCurveCertificate:
    K: tuple[Vector, ...]
    pool_member: PoolMember
    witness_root: Vector
    case_tag: str
    target: HeegnerLabel
    split: tuple[Vector, ...] = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {
            "K": [list(v) for v in self.K],
            "pool_member": self.pool_member.to_json(),
            "witness_root": list(self.witness_root),
            "case": self.case_tag,
            "target": str(self.target),
            "split": [list(v) for v in self.split],
        }


def standard_split(L: GramLattice) -> tuple[Vector, ...]:
    """e1, f1, e2, f2 when the first four basis vectors span an orthogonal 2U."""
    g = L.gram
    if L.rank < 4:
        raise LatticeError("lattice too small to contain 2U")
    ok = [list(r[:4]) for r in g[:4]] == [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    ok = ok and all(g[i][j] == 0 for i in range(4) for j in range(4, L.rank))
    if not ok:
        raise LatticeError("no explicit 2U split; pass split=(e1, f1, e2, f2)")
    return tuple(tuple(int(i == j) for j in range(L.rank)) for i in range(4))


def _check_split(L: GramLattice, split: Sequence[Vector]) -> None:
    e1, f1, e2, f2 = split
    want = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
    got = [[L.pair(u, v) for v in split] for u in split]
    if got != want:
        raise LatticeError("split vectors do not span 2U")


def _complement(L: GramLattice, split: Sequence[Vector]):
    M = orth_complement(list(split), L)
    return M, M.lattice


def _add(*vs):
    return tuple(sum(c) for c in zip(*vs))


def _mul(c, v):
    return tuple(c * x for x in v)


def _case_a(L: GramLattice, split, Msub, Mlat, witness: Vector, tag: str, target: HeegnerLabel
            ) -> GenericCurveCertificate:
    e1, f1, e2, f2 = split
    m_local, _ = chamber_vector(Mlat)
    m = Msub.to_ambient(m_local)
    K = (_add(e1, _mul(2, f1)), _add(e2, _mul(2, f2)), m)
    member = pool_member_for([[L.pair(u, v) for v in K] for u in K])
    assert member is not None and member.family == PRIME_FOUR
    return GenericCurveCertificate(K, member, witness, tag, target, tuple(split))


def _case_b(L: GramLattice, split, Msub, Mlat, target: HeegnerLabel) -> GenericCurveCertificate:
    e1, f1, e2, f2 = split
    rts = [Msub.to_ambient(r) for r in roots(Mlat)] if Mlat.rank else []
    k = len(rts)
    if Mlat.rank:
        n_a1 = sum(1 for c in root_sublattice(Mlat).components if c.label == "A1")
        assert n_a1 == k, "case (b) roots must split off as A_1 summands"
    t, coords = min_chamber_norm_witness(k)
    a, b, *xs = coords
    m = _add(_mul(a, e2), _mul(b, f2), *[_mul(x, r) for x, r in zip(xs, rts)]) if k else \
        _add(_mul(a, e2), _mul(b, f2))
    K = (e1, f1, m)
    member = pool_member_for([[L.pair(u, v) for v in K] for u in K])
    assert member is not None and member.family == HYPERBOLIC and member.param == t
    witness = tuple(x - y for x, y in zip(e1, f1))
    return GenericCurveCertificate(K, member, witness, CASE_B, target, tuple(split))


def _coset_vector(L: GramLattice, A: DiscriminantForm, mu, Msub, Mlat, cap: int):
    """A vector of least |norm| in the coset of mu inside M (x) Q, in M coordinates.

    Returns (-(x, x), coordinates).  The 2U part of a lift can be dropped
    because 2U is unimodular.
    """
    y = A.lift(mu)
    GM = intmat.congruent(Msub.basis, L.gram)
    rhs = [sum(Fraction(b[i]) * sum(L.gram[i][j] * y[j] for j in range(L.rank)) for i in range(L.rank))
           for b in Msub.basis]
    coeffs = intmat.matvec(intmat.inverse(GM), rhs)
    # M + Zx scaled by 2 so that it is integral
    r = Mlat.rank
    rows = [[2 * int(i == j) for j in range(r)] for i in range(r)] + [[int(2 * c) for c in coeffs]]
    basis2 = intmat.hnf(rows)
    N4 = GramLattice(tuple(map(tuple, intmat.congruent(basis2, Mlat.gram))))
    # coset norms are -1/2 mod 2; widen the window one step at a time
    bound = 2
    while bound <= 4 * cap:
        best = None
        for v in short_vectors(N4, bound):
            w2 = intmat.vecmat(v, basis2)
            if all(c % 2 == 0 for c in w2):
                continue
            nrm = Fraction(N4.norm(v), 4)
            if best is None or -nrm < best[0]:
                best = (-nrm, [Fraction(c, 2) for c in w2])
        if best is not None:
            return best
        bound += 8
    raise CapExceeded(f"cap exceeded: no coset vector of norm <= {cap}")


def find_mu_root(L: GramLattice, mu, split, A: DiscriminantForm | None = None,
                 caps: dict | None = None) -> tuple[Vector, bool]:
    """A (-2)-vector l of divisibility 2 with [l/2] = mu.

    Returns (l, inside_M): inside_M is True when l already lies in the
    complement of the given 2U split.
    """
    caps = {**DEFAULT_CAPS, **(caps or {})}
    A = A or discriminant_form(L)
    Msub, Mlat = _complement(L, split)
    if Mlat.rank:
        for r in roots(Mlat):
            l = Msub.to_ambient(r)
            if divisibility(l, L) == 2 and A.element_of([Fraction(x, 2) for x in l]) == mu:
                return l, True
    s, xm = _coset_vector(L, A, mu, Msub, Mlat, caps["coset_norm"])
    j = (s - Fraction(1, 2)) / 2
    assert j.denominator == 1 and j >= 0
    j = int(j)
    e1, f1, _, _ = split
    two_x = tuple(int(c) for c in intmat.vecmat([2 * c for c in xm], Msub.basis))
    l = _add(two_x, _mul(2, e1), _mul(2 * j, f1))
    assert L.norm(l) == -2 and divisibility(l, L) == 2
    assert A.element_of([Fraction(x, 2) for x in l]) == mu
    return l, False


def _hyperbolic_completion(N, v: Vector, L: GramLattice) -> Vector | None:
    """f in N with (v, f) = 1 and (f, f) = 0, or None if div_N(v) > 1."""
    pairings = [L.pair(v, b) for b in N.basis]
    # extended gcd over the pairings
    g, coeffs = 0, [0] * len(pairings)
    for i, p in enumerate(pairings):
        if p == 0:
            continue
        if g == 0:
            g, coeffs = abs(p), [0] * len(pairings)
            coeffs[i] = 1 if p > 0 else -1
            continue
        # solve s*g + t*p = gcd
        a, b = g, p
        x0, x1, y0, y1 = 1, 0, 0, 1
        while b:
            qq = a // b
            a, b = b, a - qq * b
            x0, x1 = x1, x0 - qq * x1
            y0, y1 = y1, y0 - qq * y1
        if a < 0:
            a, x0, y0 = -a, -x0, -y0
        coeffs = [x0 * c for c in coeffs]
        coeffs[i] += y0
        g = a
    if g != 1:
        return None
    fp = tuple(intmat.vecmat(coeffs, N.basis))
    assert L.pair(v, fp) == 1
    c = L.norm(fp) // 2
    return tuple(x - c * y for x, y in zip(fp, v))


def resplit_around(L: GramLattice, l: Vector, split, caps: dict | None = None) -> tuple[Vector, ...]:
    """New 2U split (e1', f1', e2, f2) orthogonal to a div-2 root l built as 2x + 2e1 + 2j f1."""
    caps = {**DEFAULT_CAPS, **(caps or {})}
    e1, f1, e2, f2 = split
    if L.pair(l, e2) or L.pair(l, f2):
        raise LatticeError("root must be orthogonal to the second hyperbolic plane")
    N1 = orth_complement([l, e2, f2], L)
    Msub, Mlat = _complement(L, split)
    # l = 2x + 2e1 + 2j f1 with x in M (x) Q
    j = L.pair(l, e1) // 2
    two_x = _add(l, _mul(-2, e1), _mul(-2 * j, f1))
    tried = 0
    for alpha in range(1, caps["resplit_alpha"] + 1):
        # isotropic v = alpha e1 + beta f1 + w, w in M, needs (w - alpha x)^2 = -alpha^2 / 2
        target = Fraction(alpha * alpha, 2)
        for z2 in _coset_candidates(L, Msub, Mlat, two_x, alpha, target):
            w2 = _add(z2, _mul(alpha, two_x))        # 2w
            if any(c % 2 for c in w2):
                continue
            w = _mul(Fraction(1, 2), w2)
            w = tuple(int(c) for c in w)
            beta = -Fraction(L.pair(w, two_x), 2) - j * alpha
            if beta.denominator != 1:
                continue
            v = _add(_mul(alpha, e1), _mul(int(beta), f1), w)
            tried += 1
            if L.norm(v) != 0 or L.pair(v, l) != 0 or intmat.vec_gcd(v) != 1:
                continue
            f = _hyperbolic_completion(N1, v, L)
            if f is not None:
                return v, f, e2, f2
    raise CapExceeded(f"cap exceeded: no hyperbolic plane found around the root after {tried} candidates")


def _coset_candidates(L, Msub, Mlat, two_x, alpha, target):
    """2z for z in -alpha x + M with (z, z) = -target (ambient coordinates)."""
    r = Mlat.rank
    # coordinates of 2x in the M basis
    GM = intmat.congruent(Msub.basis, L.gram)
    rhs = [L.pair(b, two_x) for b in Msub.basis]
    cx2 = intmat.matvec(intmat.inverse(GM), rhs)
    rows = [[2 * int(i == j) for j in range(r)] for i in range(r)] + [[int(c) for c in cx2]]
    basis2 = intmat.hnf(rows)
    gram4 = intmat.congruent(basis2, Mlat.gram)
    N4 = GramLattice(tuple(map(tuple, gram4)))
    want_odd = alpha % 2 == 1
    for v in short_vectors(N4, int(4 * target)):
        if Fraction(N4.norm(v), 4) != -target:
            continue
        z2_local = intmat.vecmat(v, basis2)
        in_M = all(c % 2 == 0 for c in z2_local)
        if in_M == want_odd:
            continue
        z2 = tuple(intmat.vecmat(z2_local, Msub.basis))
        yield z2
        yield tuple(-c for c in z2)


def construct_generic_K(L: GramLattice, target: HeegnerLabel | str = "H0",
                        split: Sequence[Vector] | None = None,
                        caps: dict | None = None) -> GenericCurveCertificate:
    """A sublattice K from the pool meeting the genericity conditions for ``target``."""
    split = tuple(split) if split is not None else standard_split(L)
    _check_split(L, split)
    if isinstance(target, str):
        target = HeegnerLabel("H0") if target == "H0" else target
    Msub, Mlat = _complement(L, split)
    if target.kind == "H0":
        rts = [Msub.to_ambient(r) for r in roots(Mlat)] if Mlat.rank else []
        div1 = [l for l in rts if divisibility(l, L) == 1]
        if div1:
            return _case_a(L, split, Msub, Mlat, div1[0], CASE_A, target)
        return _case_b(L, split, Msub, Mlat, target)
    A = discriminant_form(L)
    if target.mu not in pi_L(A):
        raise LatticeError(f"{target} is not a component: mu not in pi_L")
    n = L.signature[1]
    if not splits_2U_by_length(A, n):
        raise LatticeError("length condition fails; the mu-reduction needs it")
    l, inside = find_mu_root(L, target.mu, split, A, caps)
    if not inside:
        split = resplit_around(L, l, split, caps)
        _check_split(L, split)
        Msub, Mlat = _complement(L, split)
    return _case_a(L, split, Msub, Mlat, l, CASE_MU, target)


def check_condition_i(K: Sequence[Vector], L: GramLattice) -> bool:
    """No (-2)-vector of L is orthogonal to all of K."""
    GK = intmat.congruent(K, L.gram)
    if intmat.det(GK) == 0:
        raise LatticeError("degenerate lattice")
    comp = orth_complement(list(K), L)
    if comp.rank == 0:
        return True
    N = comp.lattice
    if definiteness(N) == -1:
        return not roots(N)
    # indefinite complement (K not of signature (2, 1)): a small root refutes (i)
    for coeffs in itertools.product((-1, 0, 1), repeat=N.rank):
        if N.norm(coeffs) == -2:
            return False
    raise LatticeError("condition (i) undecided: orthogonal complement is not negative definite")


def check_condition_ii(cert: GenericCurveCertificate, L: GramLattice) -> bool:
    """The witness root lies in the target component and projects to negative norm on K."""
    l = cert.witness_root
    if l is None or not any(l):
        raise LatticeError("missing witness")
    if L.norm(l) != -2:
        return False
    if heegner_component(l, L) != cert.target:
        return False
    _, nrm = project_to(l, list(cert.K), L)
    return nrm < 0


def member_in_pool(member: PoolMember, n: int) -> bool:
    if member.param <= 0 or member.param % 2:
        return False
    bound = compute_a_n(n) if member.family == PRIME_FOUR else compute_b_n(n)
    return member.param <= bound


def verify_certificate(cert: GenericCurveCertificate, L: GramLattice, n: int | None = None) -> dict:
    n = L.signature[1] if n is None else n
    gram = [[L.pair(u, v) for v in cert.K] for u in cert.K]
    return {
        "condition_i": check_condition_i(cert.K, L),
        "condition_ii": check_condition_ii(cert, L),
        "gram_matches_member": [list(r) for r in cert.pool_member.gram.gram] == gram,
        "member_in_pool": member_in_pool(cert.pool_member, n),
    }
