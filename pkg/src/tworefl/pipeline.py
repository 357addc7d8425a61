"""End-to-end classification: obstruction chains, slope bounds, candidate enumeration.

Steps that rely on externally supplied data (slope constants of the pool
curves and the f_AI / f_AII functions) are flagged config-dependent in the
verdict so they can be told apart from the self-contained arguments.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

from . import intmat
from .discform import (
    FiniteQuadraticModule,
    Overlattice,
    _block,
    _factor,
    cyclic_intermediate,
    direct_sum_fqm,
    discriminant_form,
    economic_isotropic,
    is_anisotropic,
    maximal_even_overlattice,
    milgram_signature,
    overlattice,
    splits_2U_by_length,
    trivial_module,
)
from .errors import ConfigError, FormError, LatticeError
from .lattice import GramLattice, direct_sum, hyperbolic_plane, rank_one, root_lattice
from .pool import HYPERBOLIC, PRIME_FOUR, PoolMember, build_pool
from .weilrep import NOT_EXCLUDED, borcherds_obstruction

log = logging.getLogger(__name__)

NOT_TWO_REFLECTIVE = "NotTwoReflective"
CANDIDATE = "Candidate"
UNKNOWN = "Unknown"


# -- curve data and configuration -------------------------------------------------

@dataclass(frozen=True)
class CurveInvariants:
    area_over_2pi: Fraction
    max_stabilizer: int
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "area_over_2pi", Fraction(self.area_over_2pi))
        if self.area_over_2pi <= 0 or self.max_stabilizer <= 0:
            raise ValueError("curve invariants must be positive")


def slope_bound_from_curve(inv: CurveInvariants) -> Fraction:
    """lambda_K = max_stabilizer * area / 2pi.

    The valence formula makes the zero degree of a weight-w form
    w * area / 4pi, so 2 deg' / w = area / 2pi; the stabilizer order
    absorbs the fractional weights of elliptic points.
    """
    return inv.max_stabilizer * inv.area_over_2pi


def _member_key(family: str, param: int) -> tuple[str, int]:
    fam = {"<4>+<4>+<-a>": PRIME_FOUR, "U+<b>": HYPERBOLIC,
           PRIME_FOUR: PRIME_FOUR, HYPERBOLIC: HYPERBOLIC}.get(family)
    if fam is None:
        raise ConfigError(f"unknown pool family {family!r}")
    return fam, int(param)


@dataclass
class Config:
    lambda_table: dict[tuple[str, int], Fraction] = field(default_factory=dict)
    f_AI: dict[int, Fraction] = field(default_factory=dict)
    f_AII: dict[int, Fraction] = field(default_factory=dict)
    tol: float = 1e-9
    caps: dict = field(default_factory=dict)
    drop_H0: bool = False

    @classmethod
    def from_json(cls, obj: dict | str | Path) -> Config:
        if isinstance(obj, Path) or (isinstance(obj, str) and not obj.lstrip().startswith("{")):
            obj = json.loads(Path(obj).read_text())
        elif isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        table = {}
        for entry in obj.get("lambda_table", []):
            fam = entry.get("family")
            param = entry.get("a", entry.get("b"))
            if param is None:
                raise ConfigError(f"pool entry without parameter: {entry}")
            key = _member_key(fam, param)
            if "lambda" in entry:
                table[key] = Fraction(str(entry["lambda"]))
            elif "area_over_2pi" in entry and "max_stabilizer" in entry:
                inv = CurveInvariants(Fraction(str(entry["area_over_2pi"])), int(entry["max_stabilizer"]),
                                      entry.get("source", ""))
                table[key] = slope_bound_from_curve(inv)
            else:
                raise ConfigError(f"pool entry needs lambda or curve invariants: {entry}")
            if table[key] < 0:
                raise ConfigError("lambda must be nonnegative")
        f_ai = {int(k): Fraction(str(v)) for k, v in obj.get("f_AI", {}).items()}
        f_aii = {int(k): Fraction(str(v)) for k, v in obj.get("f_AII", {}).items()}
        if any(v <= 0 for v in [*f_ai.values(), *f_aii.values()]):
            raise ConfigError("f values must be positive")
        return cls(table, f_ai, f_aii, float(obj.get("tol", 1e-9)), dict(obj.get("caps", {})),
                   bool(obj.get("drop_H0", False)))

    def lambda_for(self, member: PoolMember) -> Fraction | None:
        key = (member.family, member.param)
        if key in self.lambda_table:
            return self.lambda_table[key]
        if member.curve_data is not None:
            return slope_bound_from_curve(CurveInvariants(member.curve_data.area_over_2pi,
                                                          member.curve_data.max_stabilizer))
        return None


def discriminant_bound(n: int, lam, cfg: Config, drop_H0: bool | None = None) -> Fraction:
    """(n lam / 2) (1 + lam)^(n-1) (9 f_AI(n) + 2^(n-2) f_AII(n)), exactly.

    With drop_H0 the 2^(n-2) f_AII(n) term is omitted.
    """
    drop = cfg.drop_H0 if drop_H0 is None else drop_H0
    lam = Fraction(lam)
    if n not in cfg.f_AI or (not drop and n not in cfg.f_AII):
        raise ConfigError(f"config incomplete: f values missing for n = {n}")
    tail = 9 * cfg.f_AI[n]
    if not drop:
        tail += 2 ** (n - 2) * cfg.f_AII[n]
    return Fraction(n) * lam / 2 * (1 + lam) ** (n - 1) * tail


# -- step records ------------------------------------------------------------------

def _gram_list(L: GramLattice) -> list[list[int]]:
    return [list(r) for r in L.gram]


def _frac_rows(rows) -> list[list[str]]:
    return [[str(Fraction(x)) for x in r] for r in rows]


@dataclass
class StepRecord:
    kind: str
    data: dict
    outcome: str
    config_dependent: bool = False

    def to_json(self) -> dict:
        return {"kind": self.kind, "data": self.data, "outcome": self.outcome,
                "config_dependent": self.config_dependent}

    @classmethod
    def from_json(cls, obj: dict) -> StepRecord:
        return cls(obj["kind"], obj["data"], obj["outcome"], bool(obj.get("config_dependent", False)))


def _overlattice_record(kind: str, over: Overlattice) -> StepRecord:
    return StepRecord(kind, {
        "base": _gram_list(over.base),
        "basis": _frac_rows(over.basis),
        "gram": _gram_list(over.lattice),
        "index": over.index,
    }, f"index {over.index}, |A| = {abs(over.lattice.det)}")


def _check_overlattice(data: dict) -> bool:
    base = data["base"]
    r = len(base)
    B = [[Fraction(x) for x in row] for row in data["basis"]]
    if len(B) != r:
        return False
    den = intmat.lcm(*(x.denominator for row in B for x in row))
    if intmat.det([[int(x * den) for x in row] for row in B]) == 0:
        return False
    # the base lattice must lie in the span: integral coordinates of the identity rows
    Binv = intmat.inverse(B)
    if any(Fraction(x).denominator != 1 for row in Binv for x in row):
        return False
    gram = intmat.congruent(B, base)
    if gram != [[Fraction(x) for x in row] for row in data["gram"]]:
        return False
    return all(gram[i][i] % 2 == 0 for i in range(r))


def replay_step(step: StepRecord) -> bool:
    """Re-execute one step record and compare with its recorded outcome."""
    d = step.data
    if step.kind in ("maximal_overlattice", "economic_overlattice"):
        if not _check_overlattice(d):
            return False
        A = discriminant_form(GramLattice(tuple(map(tuple, d["gram"]))))
        if step.kind == "maximal_overlattice":
            return is_anisotropic(A)
        return True
    if step.kind == "cyclic_intermediate":
        if not _check_overlattice(d):
            return False
        # the top lattice modulo this one must be cyclic
        top = [[Fraction(x) for x in row] for row in d["top_basis"]]
        B = [[Fraction(x) for x in row] for row in d["basis"]]
        rel = intmat.matmul(B, intmat.inverse(top))
        if any(x.denominator != 1 for row in rel for x in row):
            return False
        _, D, _ = intmat.smith([[int(x) for x in row] for row in rel])
        return sum(1 for i in range(len(D)) if abs(D[i][i]) > 1) <= 1
    if step.kind == "contains_2U":
        L = GramLattice(tuple(map(tuple, d["gram"])))
        A = discriminant_form(L)
        return splits_2U_by_length(A, L.signature[1]) == (step.outcome == "holds")
    if step.kind == "obstruction":
        L = GramLattice(tuple(map(tuple, d["gram"])))
        return borcherds_obstruction(L, True).verdict == step.outcome
    if step.kind == "discriminant_bound":
        cfg = Config(f_AI={d["n"]: Fraction(d["f_AI"])},
                     f_AII={d["n"]: Fraction(d["f_AII"])} if d["f_AII"] is not None else {},
                     drop_H0=d["drop_H0"])
        B = discriminant_bound(d["n"], Fraction(d["lambda"]), cfg)
        if str(B) != d["B"]:
            return False
        excluded = Fraction(d["order"]) >= B * B
        return excluded == (step.outcome == "excluded")
    if step.kind == "unimodular":
        L = GramLattice(tuple(map(tuple, d["gram"])))
        return (abs(L.det) == 1) == (step.outcome == "yes")
    return False


@dataclass
class ClassificationVerdict:
    status: str
    reason_chain: list[StepRecord]
    provenance: dict = field(default_factory=dict)
    summary: str = ""

    def __post_init__(self):
        if self.status == NOT_TWO_REFLECTIVE and not self.reason_chain:
            raise ValueError("an exclusion needs at least one decisive step")

    @property
    def config_dependent(self) -> bool:
        return any(s.config_dependent for s in self.reason_chain)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "summary": self.summary,
            "config_dependent": self.config_dependent,
            "provenance": self.provenance,
            "reason_chain": [s.to_json() for s in self.reason_chain],
        }


def replay(verdict: ClassificationVerdict) -> bool:
    return all(replay_step(s) for s in verdict.reason_chain)


# -- reductions for n >= 26 ----------------------------------------------------------

def reduce_for_obstruction(L: GramLattice) -> tuple[GramLattice, list[StepRecord]]:
    """A lattice containing 2U whose exclusion also excludes L.

    Takes a maximal even overlattice; if that one is unimodular and L is
    not, falls back to an intermediate lattice with cyclic quotient.
    """
    chain: list[StepRecord] = []
    if abs(L.det) == 1:
        chain.append(StepRecord("unimodular", {"gram": _gram_list(L)}, "yes"))
        return L, chain
    over = maximal_even_overlattice(L)
    chain.append(_overlattice_record("maximal_overlattice", over))
    reduced = over.lattice
    if abs(reduced.det) == 1:
        mid = cyclic_intermediate(over)
        rec = _overlattice_record("cyclic_intermediate", mid)
        rec.data["top_basis"] = _frac_rows(over.basis)
        chain.append(rec)
        reduced = mid.lattice
    A = discriminant_form(reduced)
    n = reduced.signature[1]
    ok = splits_2U_by_length(A, n)
    chain.append(StepRecord("contains_2U", {"gram": _gram_list(reduced),
                                            "lengths": {str(p): A.length(p) for p in A.primes}, "n": n},
                            "holds" if ok else "fails"))
    return reduced, chain


# -- classification --------------------------------------------------------------

def _pool_lambda(n: int, cfg: Config) -> tuple[Fraction | None, list[str]]:
    missing = []
    best = None
    for member in build_pool(n):
        lam = cfg.lambda_for(member)
        if lam is None:
            missing.append(member.key)
        elif best is None or lam > best:
            best = lam
    return best, missing


def bound_from_config(n: int, cfg: Config) -> Fraction:
    """B for signature (2, n) from the largest slope constant over the pool."""
    lam, missing = _pool_lambda(n, cfg)
    if missing:
        raise ConfigError(f"config incomplete: no slope constant for {missing[0]} and {len(missing) - 1} more")
    return discriminant_bound(n, lam, cfg)


def _bound_step(L: GramLattice, cfg: Config) -> tuple[str, list[StepRecord], str]:
    n = L.signature[1]
    order = abs(L.det)
    lam, missing = _pool_lambda(n, cfg)
    if missing:
        return UNKNOWN, [], f"config incomplete: no slope constant for {', '.join(missing[:5])}" + \
            (" ..." if len(missing) > 5 else "")
    try:
        B = discriminant_bound(n, lam, cfg)
    except ConfigError as exc:
        return UNKNOWN, [], str(exc)
    excluded = order >= B * B
    step = StepRecord("discriminant_bound", {
        "n": n, "lambda": str(lam), "f_AI": str(cfg.f_AI[n]),
        "f_AII": str(cfg.f_AII[n]) if n in cfg.f_AII else None,
        "drop_H0": cfg.drop_H0, "B": str(B), "order": order,
    }, "excluded" if excluded else "within", config_dependent=True)
    if excluded:
        return NOT_TWO_REFLECTIVE, [step], f"|A_L| = {order} >= B^2 with B = {B}"
    return CANDIDATE, [step], f"|A_L| = {order} < B^2 with B = {B}"


def classify(L: GramLattice, cfg: Config | None = None, _depth: int = 0) -> ClassificationVerdict:
    cfg = cfg or Config()
    p, n = L.signature
    if p != 2 or L.rank != n + 2:
        raise LatticeError("signature (2, n) required")
    if n < 3:
        raise LatticeError("n >= 3 required")
    prov = {"lambda_table": False, "f_functions": False}
    if n >= 26:
        reduced, chain = reduce_for_obstruction(L)
        verdict = borcherds_obstruction(reduced, True, cfg.tol)
        chain.append(StepRecord("obstruction", {"gram": _gram_list(reduced)}, verdict.verdict))
        if verdict.excluded:
            return ClassificationVerdict(NOT_TWO_REFLECTIVE, chain, prov,
                                         f"{verdict.verdict}: {verdict.reason}")
        if verdict.verdict == NOT_EXCLUDED and abs(L.det) == 1:
            return ClassificationVerdict(CANDIDATE, chain, prov, "II_{2,26}: the known exception")
        return ClassificationVerdict(UNKNOWN, chain, prov,
                                     f"obstruction {verdict.verdict} on the reduced lattice")
    A = discriminant_form(L)
    if splits_2U_by_length(A, n):
        if n < 4:
            return ClassificationVerdict(UNKNOWN, [], prov, "the pool argument needs n >= 4")
        status, chain, why = _bound_step(L, cfg)
        prov.update(lambda_table=bool(chain), f_functions=bool(chain))
        return ClassificationVerdict(status, chain, prov, why)
    if _depth:
        return ClassificationVerdict(UNKNOWN, [], prov, "length condition fails after reduction")
    try:
        G = economic_isotropic(A, cfg.caps.get("isotropic_subgroups"))
    except FormError as exc:
        return ClassificationVerdict(UNKNOWN, [], prov, str(exc))
    over = overlattice(L, G, A)
    rec = _overlattice_record("economic_overlattice", over)
    inner = classify(over.lattice, cfg, _depth + 1)
    chain = [rec, *inner.reason_chain]
    prov.update(inner.provenance)
    if inner.status == NOT_TWO_REFLECTIVE:
        return ClassificationVerdict(NOT_TWO_REFLECTIVE, chain, prov,
                                     f"economic overlattice excluded: {inner.summary}")
    return ClassificationVerdict(UNKNOWN, chain, prov,
                                 f"economic overlattice is {inner.status}: {inner.summary}")


# -- candidate enumeration --------------------------------------------------------

def _blocks_for(p: int, k: int) -> list[str]:
    if p == 2:
        return ["1", "3"] if k == 1 else ["1", "3", "5", "7"]
    return ["+", "-"]


def _primary_block_lists(p: int, e: int) -> list[list[tuple[int, int, str]]]:
    """Block lists for p-groups of order p^e, each multiset once."""
    kinds = []                      # (exponent consumed, block)
    for k in range(1, e + 1):
        kinds += [(k, (p, k, t)) for t in _blocks_for(p, k)]
        if p == 2 and 2 * k <= e:
            kinds += [(2 * k, (p, k, t)) for t in ("U", "V")]
    out = []

    def rec(start: int, left: int, acc: list):
        if left == 0:
            out.append(list(acc))
            return
        for i in range(start, len(kinds)):
            used, blk = kinds[i]
            if used <= left:
                acc.append(blk)
                rec(i, left - used, acc)
                acc.pop()

    rec(0, e, [])
    return out


def _block_lists_of_order(N: int) -> Iterator[list[tuple[int, int, str]]]:
    per_prime = [_primary_block_lists(p, e) for p, e in sorted(_factor(N).items())]
    for combo in itertools.product(*per_prime):
        yield [blk for part in combo for blk in part]


def _negative_realizations(max_rank: int) -> list[tuple[GramLattice, tuple]]:
    """Small negative definite lattices whose discriminant forms serve as block realizations."""
    lats = [rank_one(-2 * k) for k in range(1, 65)]
    lats += [root_lattice("A", k) for k in range(2, max_rank + 1)]
    lats += [root_lattice("D", k) for k in range(4, max_rank + 1)]
    lats += [root_lattice("E", k) for k in (6, 7) if k <= max_rank]
    out = []
    for N in lats:
        if N.rank <= max_rank:
            out.append((N, discriminant_form(N).isomorphism_data()))
    return out


@dataclass
class Candidate:
    form: FiniteQuadraticModule
    blocks: tuple
    realization: GramLattice | None = None

    def to_json(self) -> dict:
        return {
            "blocks": " + ".join(f"{p}^{k}:{t}" for p, k, t in self.blocks),
            "order": self.form.order,
            "form": self.form.to_json(),
            "realization": None if self.realization is None else _gram_list(self.realization),
        }


def _realize(A: FiniteQuadraticModule, blocks, n: int, table) -> GramLattice | None:
    """2U + (a table lattice for the whole form, else one per block) + E8's.

    Only used when the ranks fit exactly; the result is checked against A.
    """
    whole = [N for N, d in table if d == A.isomorphism_data()]
    for N in whole:
        L = _pad_and_check(A, [N], n)
        if L is not None:
            return L
    parts = []
    for blk in blocks:
        data = _block(*blk).isomorphism_data()
        match = next((N for N, d in table if d == data), None)
        if match is None:
            return None
        parts.append(match)
    return _pad_and_check(A, parts, n)


def _pad_and_check(A: FiniteQuadraticModule, parts: list, n: int) -> GramLattice | None:
    used = sum(N.rank for N in parts)
    spare = n - 2 - used
    if spare < 0 or spare % 8:
        return None
    parts += [root_lattice("E", 8)] * (spare // 8)
    L = direct_sum(hyperbolic_plane(), hyperbolic_plane(), *parts)
    if discriminant_form(L).isomorphism_data() != A.isomorphism_data():
        return None
    return L


def iter_candidates(n: int, B, cfg: Config | None = None, realize: bool = True) -> Iterator[Candidate]:
    """Block-built forms with |A| <= B^2, Milgram signature 2 - n mod 8 and the length condition.

    Forms come out in order of increasing |A|, so the iterator can be
    paginated even when the bound is astronomically large.
    """
    cfg = cfg or Config()
    if n > 25:
        raise ValueError("n <= 25 required")
    limit = Fraction(B) ** 2
    table = _negative_realizations(max(n - 2, 1)) if realize else []
    N = 1
    while N <= limit:
        seen = set()
        for blocks in _block_lists_of_order(N):
            A = direct_sum_fqm(*[_block(*b) for b in blocks]) if blocks else trivial_module()
            if not splits_2U_by_length(A, n):
                continue
            key = A.isomorphism_data()
            if key in seen:
                continue
            seen.add(key)
            if milgram_signature(A, cfg.tol) != (2 - n) % 8:
                continue
            L = _realize(A, blocks, n, table) if realize else None
            yield Candidate(A, tuple(blocks), L)
        N += 1


def enumerate_candidates(n: int, B, cfg: Config | None = None, limit: int | None = None,
                         realize: bool = True) -> list[Candidate]:
    return list(itertools.islice(iter_candidates(n, B, cfg, realize), limit))
