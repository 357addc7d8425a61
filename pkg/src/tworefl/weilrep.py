"""Weil representation on C[A_L] and the weight/invariance obstruction.

Only the two generators T and S of Mp2(Z) are realised.  With q in Q/2Z,

    T e_x = exp(pi i q(x)) e_x
    S e_x = g / sqrt|A| * sum_y exp(-2 pi i b(x, y)) e_y,   g = exp(2 pi i (n - 2) / 8)

for a lattice of signature (2, n).  The relations (ST)^3 = S^2 and
S^2 e_x = c e_{-x} are checked whenever a representation is built.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .discform import (
    DiscriminantForm,
    Element,
    FiniteQuadraticModule,
    discriminant_form,
    pi_L,
)
from .errors import ConventionError, LatticeError
from .lattice import GramLattice, divisibility

TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WeilRep:
    module: FiniteQuadraticModule = field(repr=False)
    n: int
    rhoS: np.ndarray = field(repr=False)
    rhoT: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.rhoS.shape[0]

    @property
    def signature_octant(self) -> int:
        return (2 - self.n) % 8

    @property
    def elements(self) -> list[Element]:
        return self.module.elements

    def relation_errors(self) -> dict[str, float]:
        S, T = self.rhoS, self.rhoT
        ST = S @ T
        S2 = S @ S
        braid = float(np.abs(ST @ ST @ ST - S2).max())
        # S^2 should be a scalar times the permutation e_x -> e_{-x}
        A = self.module
        idx = A.index
        perm = np.zeros_like(S2)
        for i, x in enumerate(A.elements):
            perm[idx[A.neg(x)], i] = 1.0
        c = S2[idx[A.neg(A.zero)], 0]
        center = float(np.abs(S2 - c * perm).max())
        return {"braid": braid, "center": center, "center_scalar_modulus": abs(abs(c) - 1.0)}


def _b_matrix(A: FiniteQuadraticModule) -> tuple[np.ndarray, np.ndarray]:
    """Numerators of b(x, y) and of q(x) over the common denominator."""
    den, m = A._int_form
    X = np.array(A.elements, dtype=np.int64).reshape(len(A.elements), len(A.orders))
    M = np.array(m, dtype=np.int64).reshape(len(A.orders), len(A.orders))
    B = (X @ M @ X.T) % den
    qnum = np.array([A.q(x) * den for x in A.elements], dtype=np.float64)
    return B / den, qnum / den


def build_weilrep(A: FiniteQuadraticModule, n: int, tol: float = TOL, strict: bool = True) -> WeilRep:
    """Matrices of S and T; raises ConventionError if the relations fail."""
    N = A.order
    bfrac, qvals = _b_matrix(A)
    rhoT = np.diag(np.exp(1j * math.pi * qvals))
    gamma = cmath.exp(2j * math.pi * (n - 2) / 8)
    rhoS = gamma / math.sqrt(N) * np.exp(-2j * math.pi * bfrac)
    W = WeilRep(A, n, rhoS, rhoT)
    if strict:
        errs = W.relation_errors()
        if max(errs.values()) > tol:
            raise ConventionError(f"convention inconsistency: {errs}")
    return W


def s_image_of_e0(W: WeilRep) -> np.ndarray:
    return W.rhoS[:, 0].copy()


@dataclass(frozen=True, eq=False)
class InvariantSpace:
    basis: np.ndarray                 # columns span the joint fixed space
    singular_values: np.ndarray = field(repr=False)
    ill_conditioned: bool

    @property
    def dimension(self) -> int:
        return self.basis.shape[1]

    def contains(self, v: np.ndarray, tol: float = 1e-7) -> bool:
        if self.dimension == 0:
            return bool(np.linalg.norm(v) < tol)
        coeffs = self.basis.conj().T @ v
        return bool(np.linalg.norm(self.basis @ coeffs - v) < tol * max(1.0, np.linalg.norm(v)))


def invariant_vectors(W: WeilRep, tol: float = 1e-8) -> InvariantSpace:
    """Joint fixed space of rhoS and rhoT."""
    N = W.dimension
    I = np.eye(N)
    stacked = np.vstack([W.rhoS - I, W.rhoT - I])
    _, s, vh = np.linalg.svd(stacked)
    null = s < tol
    ill = bool(np.any((s > tol / 10) & (s < tol * 10)))
    basis = vh[null].conj().T
    return InvariantSpace(basis, s, ill)


# -- the obstruction --------------------------------------------------------------

EXCLUDED_WEIGHT = "ExcludedWeight"
EXCLUDED_INVARIANCE = "ExcludedInvariance"
NOT_EXCLUDED = "NotExcluded"
INCONCLUSIVE = "Inconclusive"


@dataclass
class ObstructionVerdict:
    verdict: str
    n: int
    order: int
    reason: str
    witness: list[complex] | None = None

    @property
    def weight(self) -> Fraction:
        """Weight of f * Delta, i.e. 13 - n/2."""
        return Fraction(26 - self.n, 2)

    @property
    def excluded(self) -> bool:
        return self.verdict in (EXCLUDED_WEIGHT, EXCLUDED_INVARIANCE)

    def to_json(self) -> dict:
        w = self.weight
        return {
            "verdict": self.verdict,
            "witness": None if self.witness is None else [[z.real, z.imag] for z in self.witness],
            "weight_13_minus_n_over_2": str(w),
            "n": self.n,
            "order": self.order,
            "reason": self.reason,
        }


def borcherds_obstruction(L: GramLattice, contains_2U: bool, tol: float = TOL) -> ObstructionVerdict:
    """Exclude L (assumed to contain 2U) when n >= 26 and L is not II_{2,26}.

    The caller must establish that L contains 2U, e.g. by the length
    condition or an overlattice reduction.
    """
    if not contains_2U:
        raise LatticeError("reduction required")
    p, n = L.signature
    if p != 2:
        raise LatticeError("signature (2, n) required")
    A = discriminant_form(L)
    N = A.order
    if n >= 27:
        return ObstructionVerdict(
            EXCLUDED_WEIGHT, n, N,
            f"f*Delta would be holomorphic of negative weight {Fraction(26 - n, 2)}, so f = 0")
    if n <= 25:
        return ObstructionVerdict(INCONCLUSIVE, n, N, "weight argument needs n >= 26")
    if N == 1:
        return ObstructionVerdict(NOT_EXCLUDED, n, N, "unimodular: II_{2,26}")
    W = build_weilrep(A, n, tol)
    image = s_image_of_e0(W)
    e0 = np.zeros(N, dtype=complex)
    e0[0] = 1.0
    moduli_ok = np.allclose(np.abs(image), N ** -0.5, atol=tol, rtol=0)
    space = invariant_vectors(W)
    if moduli_ok and not space.contains(e0):
        return ObstructionVerdict(
            EXCLUDED_INVARIANCE, n, N,
            f"weight 0: constant term beta_0 e_0 must be invariant, but S e_0 spreads over all "
            f"{N} classes with modulus |A|^(-1/2)", list(image))
    return ObstructionVerdict(INCONCLUSIVE, n, N, "invariance test did not separate e_0")


# -- reflective vectors and principal parts -----------------------------------------

REFLECTIVE_FULL = "ReflectiveFullDiv"
REFLECTIVE_HALF = "ReflectiveHalfDiv"
NOT_REFLECTIVE = "NotReflective"


@dataclass(frozen=True)
class ReflectiveClass:
    label: str
    d: int
    div: int
    heegner: tuple[Element, Fraction] | None = None   # (lambda, m) of H(lambda, m)


def classify_reflective_vector(l: Sequence[int], L: GramLattice,
                               A: DiscriminantForm | None = None) -> ReflectiveClass:
    """Reflective iff div(l) = 2d or d, where (l, l) = -2d."""
    nrm = L.norm(l)
    if nrm >= 0 or nrm % 2:
        raise LatticeError("negative even norm required")
    d = -nrm // 2
    div = divisibility(l, L)
    if div not in (d, 2 * d):
        return ReflectiveClass(NOT_REFLECTIVE, d, div)
    A = A or discriminant_form(L)
    lam = A.element_of([Fraction(x, div) for x in l])
    if div == 2 * d:
        return ReflectiveClass(REFLECTIVE_FULL, d, div, (lam, Fraction(-1, 4 * d)))
    return ReflectiveClass(REFLECTIVE_HALF, d, div, (lam, Fraction(-1, d)))


@dataclass(frozen=True)
class DivisorPattern:
    weight: Fraction
    beta0: int
    betas: dict = field(default_factory=dict)     # mu -> beta_mu

    def __post_init__(self):
        if self.weight <= 0:
            raise ValueError("weight must be positive")
        if self.beta0 < 0 or any(v < 0 for v in self.betas.values()):
            raise ValueError("multiplicities must be nonnegative")

    @property
    def max_slope(self) -> Fraction:
        vals = [self.beta0, *self.betas.values()]
        return max(Fraction(v) / Fraction(self.weight) for v in vals)


def principal_part(pattern: DivisorPattern, zero: Element = (),
                   A: FiniteQuadraticModule | None = None) -> dict[tuple[Element, Fraction], int]:
    """beta_0 q^-1 e_0 + sum_mu (beta_mu - beta_0) q^-1/4 e_mu."""
    out = {(zero, Fraction(-1)): pattern.beta0}
    allowed = set(pi_L(A)) if A is not None else None
    for mu, beta in pattern.betas.items():
        if allowed is not None and mu not in allowed:
            raise LatticeError(f"{mu} is not in pi_L")
        out[(mu, Fraction(-1, 4))] = beta - pattern.beta0
    if A is not None:
        for (lam, e) in out:
            if (e - A.q(lam) / 2) % 1 != 0:
                raise LatticeError("exponent incompatible with q")
    return out
