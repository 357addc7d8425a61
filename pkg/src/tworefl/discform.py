"""Finite quadratic modules and discriminant forms.

The quadratic form q takes values in Q/2Z (so q(x) = (x, x) mod 2 for a
discriminant class x); the bilinear form b takes values in Q/Z.  A module is
stored as cyclic orders together with a matrix whose diagonal holds q on the
generators (mod 2) and whose off-diagonal entries hold b (mod 1).
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from . import intmat
from .errors import FormError, LatticeError
from .lattice import GramLattice, divisibility

Element = tuple[int, ...]


def _mod(x: Fraction, m: int) -> Fraction:
    return x - m * math.floor(x / m)


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class FiniteQuadraticModule:
    orders: tuple[int, ...]
    qmat: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        k = len(self.orders)
        if any(d < 1 for d in self.orders):
            raise FormError("cyclic orders must be positive")
        if len(self.qmat) != k or any(len(r) != k for r in self.qmat):
            raise FormError("form matrix has the wrong shape")
        m = [[Fraction(self.qmat[i][j]) for j in range(k)] for i in range(k)]
        for i in range(k):
            for j in range(k):
                if i == j:
                    m[i][i] = _mod(m[i][i], 2)
                else:
                    if m[i][j] != m[j][i] and _mod(m[i][j] - m[j][i], 1) != 0:
                        raise FormError("bilinear form is not symmetric")
                    m[i][j] = _mod(m[i][j], 1)
        for i, d in enumerate(self.orders):
            if _mod(d * d * m[i][i], 2) != 0:
                raise FormError("q is not well defined on the cyclic factor")
            for j in range(k):
                if _mod(d * m[i][j], 1) != 0:
                    raise FormError("b is not well defined on the cyclic factor")
        object.__setattr__(self, "orders", tuple(int(d) for d in self.orders))
        object.__setattr__(self, "qmat", tuple(map(tuple, m)))

    # group structure
    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def zero(self) -> Element:
        return (0,) * len(self.orders)

    @cached_property
    def elements(self) -> list[Element]:
        return list(itertools.product(*(range(d) for d in self.orders)))

    @cached_property
    def index(self) -> dict[Element, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % d for a, d in zip(x, self.orders))

    def scale(self, n: int, x: Element) -> Element:
        return tuple((n * a) % d for a, d in zip(x, self.orders))

    def element_order(self, x: Element) -> int:
        return intmat.lcm(*(d // math.gcd(d, a) for a, d in zip(x, self.orders)))

    # forms
    @cached_property
    def _int_form(self) -> tuple[int, list[list[int]]]:
        den = intmat.lcm(*(x.denominator for row in self.qmat for x in row))
        return den, [[int(x * den) for x in row] for row in self.qmat]

    @cached_property
    def _q_cache(self) -> dict[Element, Fraction]:
        return {}

    def q(self, x: Element) -> Fraction:
        cache = self._q_cache
        val = cache.get(x)
        if val is None:
            den, m = self._int_form
            k = len(x)
            s = sum(x[i] * x[i] * m[i][i] for i in range(k) if x[i])
            s += 2 * sum(x[i] * x[j] * m[i][j] for i in range(k) if x[i] for j in range(i + 1, k) if x[j])
            val = cache[x] = Fraction(s % (2 * den), den)
        return val

    def b(self, x: Element, y: Element) -> Fraction:
        den, m = self._int_form
        s = 0
        for i, a in enumerate(x):
            if a:
                row = m[i]
                s += a * sum(row[j] * c for j, c in enumerate(y) if c)
        return Fraction(s % den, den)

    # structure invariants
    def length(self, p: int) -> int:
        return sum(1 for d in self.orders if d % p == 0)

    @property
    def exponent(self) -> int:
        return intmat.lcm(*self.orders)

    @property
    def primes(self) -> list[int]:
        return sorted(_factor(self.order))

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        """Elementary divisors d_1 | d_2 | ... with trivial factors dropped."""
        by_prime: dict[int, list[int]] = {}
        for d in self.orders:
            for p, e in _factor(d).items():
                by_prime.setdefault(p, []).append(p ** e)
        k = max((len(v) for v in by_prime.values()), default=0)
        out = [1] * k
        for p, powers in by_prime.items():
            powers.sort(reverse=True)
            for i, pe in enumerate(powers):
                out[k - 1 - i] *= pe
        return tuple(out)

    def is_nondegenerate(self) -> bool:
        gens = [tuple(int(i == j) for j in range(len(self.orders))) for i in range(len(self.orders))]
        return all(x == self.zero or any(self.b(x, g) != 0 for g in gens) for x in self.elements)

    def q_multiset(self) -> Counter:
        return Counter(self.q(x) for x in self.elements)

    def isomorphism_data(self) -> tuple:
        """Invariants compared when checking two modules for isomorphism."""
        return self.invariant_factors, tuple(sorted(self.q_multiset().items()))

    def to_json(self) -> dict:
        k = len(self.orders)
        diag = [self.qmat[i][i] for i in range(k)]
        return {
            "orders": list(self.orders),
            "q_num": [x.numerator for x in diag],
            "q_den": [x.denominator for x in diag],
            "b": [[str(self.qmat[i][j] if i != j else _mod(self.qmat[i][i], 1)) for j in range(k)]
                  for i in range(k)],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> FiniteQuadraticModule:
        if isinstance(obj, str):
            obj = json.loads(obj)
        k = len(obj["orders"])
        m = [[Fraction(obj["b"][i][j]) for j in range(k)] for i in range(k)]
        for i in range(k):
            m[i][i] = Fraction(obj["q_num"][i], obj["q_den"][i])
        return cls(tuple(obj["orders"]), tuple(map(tuple, m)))


def trivial_module() -> FiniteQuadraticModule:
    return FiniteQuadraticModule((), ())


@dataclass(frozen=True)
class DiscriminantForm(FiniteQuadraticModule):
    """A_L together with lifts of its generators to L^dual (lattice coordinates)."""

    lattice: GramLattice | None = field(default=None, compare=False, repr=False)
    lifts: tuple[tuple[Fraction, ...], ...] = field(default=(), compare=False, repr=False)
    coord_matrix: tuple[tuple[int, ...], ...] = field(default=(), compare=False, repr=False)

    def element_of(self, y: Sequence) -> Element:
        """Class of a dual vector y (rational lattice coordinates)."""
        out = []
        for row, d in zip(self.coord_matrix, self.orders):
            z = sum(Fraction(a) * Fraction(c) for a, c in zip(row, y)) * d
            if z.denominator != 1:
                raise LatticeError("vector is not in the dual lattice")
            out.append(int(z) % d)
        return tuple(out)

    def lift(self, x: Element) -> tuple[Fraction, ...]:
        r = self.lattice.rank
        v = [Fraction(0)] * r
        for a, g in zip(x, self.lifts):
            if a:
                for i in range(r):
                    v[i] += a * g[i]
        return tuple(v)


def discriminant_form(L: GramLattice) -> DiscriminantForm:
    """A_L = L^dual / L via the Smith form of the Gram matrix."""
    if L.is_degenerate:
        raise LatticeError("degenerate lattice")
    if L.rank == 0:
        return DiscriminantForm((), (), lattice=L)
    U, D, V = intmat.smith(L.gram)
    Vinv = intmat.inverse(V)
    keep = [i for i in range(L.rank) if D[i][i] > 1]
    orders = tuple(D[i][i] for i in keep)
    lifts = tuple(tuple(Fraction(V[r][i], D[i][i]) for r in range(L.rank)) for i in keep)
    # y = V D^-1 z, so the class of y has coordinates z = D V^-1 y mod D
    coord = tuple(tuple(int(x) for x in Vinv[i]) for i in keep)
    G = L.gram
    k = len(keep)
    m = [[Fraction(0)] * k for _ in range(k)]
    for a in range(k):
        for c in range(k):
            m[a][c] = sum(lifts[a][i] * G[i][j] * lifts[c][j]
                          for i in range(L.rank) if lifts[a][i]
                          for j in range(L.rank) if lifts[c][j])
    return DiscriminantForm(orders, tuple(map(tuple, m)), lattice=L, lifts=lifts,
                            coord_matrix=coord)


# -- subgroups ------------------------------------------------------------------

def subgroup_closure(A: FiniteQuadraticModule, gens: Sequence[Element]) -> frozenset[Element]:
    seen = {A.zero}
    frontier = deque([A.zero])
    gens = [g for g in gens if g != A.zero]
    while frontier:
        x = frontier.popleft()
        for g in gens:
            y = A.add(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)


def _generators(A: FiniteQuadraticModule, elements: frozenset[Element]) -> list[Element]:
    gens: list[Element] = []
    span = frozenset({A.zero})
    for x in sorted(elements, key=lambda e: (-A.element_order(e), e)):
        if x not in span:
            gens.append(x)
            span = subgroup_closure(A, gens)
            if len(span) == len(elements):
                break
    return gens


@dataclass(frozen=True)
class IsotropicSubgroup:
    module: FiniteQuadraticModule = field(repr=False)
    generators: tuple[Element, ...]
    elements: frozenset[Element] = field(default=frozenset(), repr=False)

    def __post_init__(self):
        A = self.module
        elems = subgroup_closure(A, self.generators)
        object.__setattr__(self, "elements", elems)
        if any(A.q(x) != 0 for x in self.generators):
            raise FormError("subgroup is not isotropic")
        if any(A.b(x, y) != 0 for x in self.generators for y in self.generators):
            raise FormError("subgroup is not isotropic")

    @property
    def order(self) -> int:
        return len(self.elements)


def orthogonal(A: FiniteQuadraticModule, gens: Sequence[Element]) -> frozenset[Element]:
    return frozenset(x for x in A.elements if all(A.b(x, g) == 0 for g in gens))


@dataclass(frozen=True)
class Subquotient:
    module: FiniteQuadraticModule
    generators: tuple[Element, ...]      # generator lifts as elements of the parent
    basis: tuple[tuple[int, ...], ...] = field(repr=False)
    transform: tuple[tuple[int, ...], ...] = field(repr=False)

    def coords(self, x: Element) -> Element:
        """Coordinates of a parent element of the numerator subgroup."""
        y = intmat.vecmat(list(x), intmat.inverse(self.basis))
        z = intmat.vecmat(y, self.transform)
        out = []
        for zi, d in zip(z, self.module.orders):
            if Fraction(zi).denominator != 1:
                raise FormError("element not in the subgroup")
            out.append(int(zi) % d)
        return tuple(out)


def subquotient(A: FiniteQuadraticModule, top: Sequence[Element], bottom: Sequence[Element]
                ) -> Subquotient:
    """Presentation of <top>/<bottom> with the form induced from A."""
    k = len(A.orders)
    rel = [[A.orders[i] if i == j else 0 for j in range(k)] for i in range(k)]
    if k == 0:
        return Subquotient(trivial_module(), (), (), ())
    B1 = intmat.hnf([list(x) for x in top] + rel)
    B0 = intmat.hnf([list(x) for x in bottom] + rel)
    B1inv = intmat.inverse(B1)
    R = [[int(c) for c in intmat.vecmat(row, B1inv)] for row in B0]
    U, D, V = intmat.smith(R)
    Vinv = [[int(x) for x in row] for row in intmat.inverse(V)]
    gens_rows = intmat.matmul(Vinv, B1)
    keep = [i for i in range(k) if D[i][i] != 1]
    orders = tuple(D[i][i] for i in keep)
    gens = tuple(tuple(c % d for c, d in zip(gens_rows[i], A.orders)) for i in keep)
    m = [[A.b(gens[a], gens[c]) if a != c else A.q(gens[a]) for c in range(len(keep))]
         for a in range(len(keep))]
    module = FiniteQuadraticModule(orders, tuple(map(tuple, m)))
    transform = tuple(tuple(V[r][i] for i in keep) for r in range(k))
    return Subquotient(module, gens, tuple(map(tuple, B1)), transform)


def quotient_form(A: FiniteQuadraticModule, G: IsotropicSubgroup | Sequence[Element]
                  ) -> FiniteQuadraticModule:
    """G^perp / G with the induced form."""
    gens = G.generators if isinstance(G, IsotropicSubgroup) else tuple(G)
    if not isinstance(G, IsotropicSubgroup):
        IsotropicSubgroup(A, gens)
    perp = orthogonal(A, gens)
    return subquotient(A, _generators(A, perp), gens).module


def isotropic_elements(A: FiniteQuadraticModule) -> list[Element]:
    return [x for x in A.elements if x != A.zero and A.q(x) == 0]


def is_anisotropic(A: FiniteQuadraticModule) -> bool:
    return not isotropic_elements(A)


def isotropic_subgroups(A: FiniteQuadraticModule, max_count: int | None = None
                        ) -> Iterator[IsotropicSubgroup]:
    """Breadth-first enumeration of all isotropic subgroups, trivial first."""
    iso = isotropic_elements(A)
    start = frozenset({A.zero})
    seen = {start}
    queue = deque([(start, ())])
    count = 0
    while queue:
        elems, gens = queue.popleft()
        yield IsotropicSubgroup(A, gens)
        count += 1
        if max_count is not None and count >= max_count:
            return
        for x in iso:
            if x in elems or any(A.b(x, g) != 0 for g in gens):
                continue
            new = subgroup_closure(A, gens + (x,))
            if new not in seen:
                seen.add(new)
                queue.append((new, gens + (x,)))


# -- Heegner labels -------------------------------------------------------------

def pi_L(A: FiniteQuadraticModule) -> list[Element]:
    """Order-2 elements with q = -1/2 mod 2."""
    target = Fraction(3, 2)
    return [x for x in A.elements
            if x != A.zero and A.scale(2, x) == A.zero and A.q(x) == target]


@dataclass(frozen=True)
class HeegnerLabel:
    kind: str                       # "H0" or "Hmu"
    mu: Element | None = None

    def __str__(self) -> str:
        return "H0" if self.kind == "H0" else f"H_mu{list(self.mu)}"


def heegner_component(l: Sequence[int], L: GramLattice, A: DiscriminantForm | None = None
                      ) -> HeegnerLabel:
    if L.norm(l) != -2:
        raise LatticeError("Heegner labels need a (-2)-vector")
    d = divisibility(l, L)
    assert d in (1, 2), d
    if d == 1:
        return HeegnerLabel("H0")
    A = A or discriminant_form(L)
    mu = A.element_of([Fraction(x, 2) for x in l])
    assert mu in pi_L(A)
    return HeegnerLabel("Hmu", mu)


# -- Gauss sums -----------------------------------------------------------------

def gauss_sum(A: FiniteQuadraticModule) -> complex:
    return sum(cmath.exp(1j * math.pi * float(A.q(x))) for x in A.elements)


def milgram_signature(A: FiniteQuadraticModule, tol: float = 1e-9) -> int:
    """sigma mod 8 with sum exp(pi i q) = sqrt|A| exp(2 pi i sigma / 8)."""
    s = gauss_sum(A)
    root = math.sqrt(A.order)
    if abs(abs(s) - root) > tol * max(1.0, root):
        raise FormError("degenerate or inconsistent form")
    w = s / root
    sigma = round(cmath.phase(w) / (math.pi / 4)) % 8
    if abs(w - cmath.exp(1j * math.pi * sigma / 4)) > 1e-6:
        raise FormError("degenerate or inconsistent form")
    return sigma


# -- overlattices -----------------------------------------------------------------

def _lattice_from_rational_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    den = intmat.lcm(*(Fraction(x).denominator for r in rows for x in r))
    scaled_rows = [[int(Fraction(x) * den) for x in r] for r in rows]
    H = intmat.hnf(scaled_rows)
    return [[Fraction(x, den) for x in r] for r in H]


@dataclass(frozen=True)
class Overlattice:
    """An even overlattice L' of L with its basis in L-coordinates."""

    lattice: GramLattice
    base: GramLattice = field(repr=False)
    basis: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def index(self) -> int:
        return math.isqrt(abs(self.base.det // self.lattice.det))


def _overlattice(L: GramLattice, A: DiscriminantForm, gens: Sequence[Element]) -> Overlattice:
    r = L.rank
    rows = [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]
    rows += [list(A.lift(g)) for g in gens]
    B = _lattice_from_rational_rows(rows)
    gram = []
    for u in B:
        row = []
        for v in B:
            val = sum(u[i] * L.gram[i][j] * v[j] for i in range(r) if u[i] for j in range(r) if v[j])
            row.append(val)
        gram.append(row)
    if any(Fraction(x).denominator != 1 for row in gram for x in row) or \
            any(gram[i][i] % 2 for i in range(r)):
        raise LatticeError("resulting lattice not even")
    name = L.name + "'" if L.name else ""
    lat = GramLattice(tuple(tuple(int(x) for x in row) for row in gram), name)
    return Overlattice(lat, L, tuple(map(tuple, B)))


def overlattice(L: GramLattice, G: IsotropicSubgroup | Sequence[Element],
                A: DiscriminantForm | None = None) -> Overlattice:
    """Preimage of the isotropic subgroup G in L^dual, rebased integrally."""
    A = A or discriminant_form(L)
    gens = G.generators if isinstance(G, IsotropicSubgroup) else tuple(G)
    if any(A.q(g) != 0 for g in gens) or any(A.b(g, h) != 0 for g in gens for h in gens):
        raise LatticeError("resulting lattice not even")
    return _overlattice(L, A, gens)


def compose(outer: Overlattice, inner: Overlattice) -> Overlattice:
    """outer is an overlattice of inner.lattice; re-express it over inner.base."""
    B = intmat.matmul(outer.basis, inner.basis)
    return Overlattice(outer.lattice, inner.base, tuple(tuple(Fraction(x) for x in r) for r in B))


def maximal_even_overlattice(L: GramLattice) -> Overlattice:
    """Greedy chain of prime-order isotropic extensions until A is anisotropic."""
    r = L.rank
    current = Overlattice(L, L, tuple(tuple(Fraction(int(i == j)) for j in range(r)) for i in range(r)))
    while True:
        A = discriminant_form(current.lattice)
        iso = isotropic_elements(A)
        if not iso:
            return current
        x = min(iso, key=lambda e: (A.element_order(e), e))
        o = A.element_order(x)
        p = min(_factor(o))
        x = A.scale(o // p, x)
        step = _overlattice(current.lattice, A, [x])
        current = compose(step, current)


def overlattice_subgroup(over: Overlattice) -> list[Element]:
    """Generators of L'/L inside A_L."""
    A = discriminant_form(over.base)
    return [A.element_of(row) for row in over.basis]


def cyclic_intermediate(over: Overlattice) -> Overlattice:
    """L'' with L <= L'' <= L' and L'/L'' the largest cyclic quotient of L'/L."""
    L = over.base
    A = discriminant_form(L)
    H = subgroup_closure(A, overlattice_subgroup(over))
    sq = subquotient(A, _generators(A, H), [])
    gens = sq.generators
    sub = list(gens[:-1]) if gens else []
    return _overlattice(L, A, sub)


# -- length conditions and the economic subgroup ----------------------------------

def splits_2U_by_length(A: FiniteQuadraticModule, n: int) -> bool:
    """l(A)_2 <= n-3 and l(A)_p <= n-4 for odd p (sufficient for L to contain 2U)."""
    for p in A.primes:
        limit = n - 3 if p == 2 else n - 4
        if A.length(p) > limit:
            return False
    return True


def is_economic(A: FiniteQuadraticModule, Q: FiniteQuadraticModule) -> bool:
    if Q.length(2) > 4 or any(Q.length(p) > 3 for p in Q.primes if p > 2):
        return False
    e = A.exponent
    return Q.exponent == e or 2 * Q.exponent == e


def economic_isotropic(A: FiniteQuadraticModule, max_count: int | None = None) -> IsotropicSubgroup:
    """Isotropic G with l(G^perp/G)_2 <= 4, l_p <= 3 and exponent e(A) or e(A)/2."""
    groups = sorted(isotropic_subgroups(A, max_count), key=lambda G: -G.order)
    for G in groups:
        if is_economic(A, quotient_form(A, G)):
            return G
    raise FormError("economic subgroup not found")


# -- block construction -----------------------------------------------------------

def _nonresidue(p: int) -> int:
    return next(u for u in range(2, p) if pow(u, (p - 1) // 2, p) == p - 1)


_BLOCK = re.compile(r"(\d+)\^(\d+):([+-]?\d+|[+-]|U|V)")


def _block(p: int, k: int, tag: str) -> FiniteQuadraticModule:
    pk = p ** k
    if tag in ("U", "V"):
        if p != 2:
            raise FormError("rank-2 blocks exist only for p = 2")
        qd = Fraction(0) if tag == "U" else Fraction(2, pk)
        return FiniteQuadraticModule((pk, pk), ((qd, Fraction(1, pk)), (Fraction(1, pk), qd)))
    if p == 2:
        a = int(tag)
        if a % 2 == 0:
            raise FormError("2-adic rank-1 blocks need an odd numerator")
        return FiniteQuadraticModule((pk,), ((Fraction(a, pk),),))
    if tag == "+":
        u = 1
    elif tag == "-":
        u = _nonresidue(p)
    else:
        u = int(tag)
        if u % p == 0:
            raise FormError("unit required")
    return FiniteQuadraticModule((pk,), ((Fraction(2 * u, pk),),))


def direct_sum_fqm(*parts: FiniteQuadraticModule) -> FiniteQuadraticModule:
    orders = tuple(d for A in parts for d in A.orders)
    k = len(orders)
    m = [[Fraction(0)] * k for _ in range(k)]
    off = 0
    for A in parts:
        for i in range(len(A.orders)):
            for j in range(len(A.orders)):
                m[off + i][off + j] = A.qmat[i][j]
        off += len(A.orders)
    return FiniteQuadraticModule(orders, tuple(map(tuple, m)))


def fqm_from_blocks(text: str | Sequence[tuple]) -> FiniteQuadraticModule:
    """Direct sum of standard blocks.

    String form ``"2^1:-1 + 3^1:+ + 2^2:U"``; tuple form ``(p, k, tag)``.
    For p = 2 the tag is an odd numerator a (q = a/2^k) or U/V; for odd p
    it is "+", "-" or a unit u (q = 2u/p^k).
    """
    if isinstance(text, str):
        items = []
        for chunk in text.split(" + ") if text.strip() else []:
            m = _BLOCK.fullmatch(chunk.strip())
            if not m:
                raise FormError(f"malformed block {chunk!r}")
            items.append((int(m.group(1)), int(m.group(2)), m.group(3)))
    else:
        items = list(text)
    blocks = []
    for item in items:
        if len(item) != 3:
            raise FormError(f"malformed block {item!r}")
        p, k, tag = item
        if p < 2 or k < 1 or len(_factor(p)) != 1 or _factor(p).get(p) != 1:
            raise FormError(f"malformed block {item!r}")
        blocks.append(_block(int(p), int(k), str(tag)))
    return direct_sum_fqm(*blocks)
