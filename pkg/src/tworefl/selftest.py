"""Fast built-in checks against naive oracles, used by ``tworefl selftest``."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from .discform import discriminant_form, gauss_sum, milgram_signature
from .lattice import GramLattice, direct_sum, parse_lattice, rank_one, short_vectors, signature
from .pipeline import CANDIDATE, NOT_TWO_REFLECTIVE, Config, classify, discriminant_bound, replay
from .pool import compute_a_n, max_nonorthogonal_norm, min_chamber_norm
from .weilrep import build_weilrep


def _box_vectors(G, bound, radius):
    n = len(G)
    out = set()
    for v in itertools.product(range(-radius, radius + 1), repeat=n):
        if any(v):
            val = sum(v[i] * G[i][j] * v[j] for i in range(n) for j in range(n))
            if 0 < abs(val) <= bound:
                out.add(v if next(x for x in v if x) > 0 else tuple(-x for x in v))
    return out


def check_short_vectors():
    rng = random.Random(1)
    for _ in range(5):
        n = rng.randint(1, 3)
        B = [[rng.randint(-1, 1) for _ in range(n)] for _ in range(n)]
        if abs(np.linalg.det(np.array(B, dtype=float))) < 0.5:
            continue
        G = [[2 * sum(B[i][k] * B[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
        L = GramLattice(tuple(map(tuple, G)))
        got = set(short_vectors(L, 8))
        want = _box_vectors(G, 8, 6)
        if got != want:
            return False, f"mismatch on {G}"
    return True, "short vectors agree with box enumeration"


def check_milgram():
    rng = random.Random(2)
    done = 0
    while done < 20:
        n = rng.randint(1, 4)
        G = [[0] * n for _ in range(n)]
        for i in range(n):
            G[i][i] = 2 * rng.randint(-4, 4)
            for j in range(i):
                G[i][j] = G[j][i] = rng.randint(-3, 3)
        L = GramLattice(tuple(map(tuple, G)))
        if L.is_degenerate or abs(L.det) > 200:
            continue
        A = discriminant_form(L)
        p, q = signature(L)
        if milgram_signature(A) != (p - q) % 8 or abs(abs(gauss_sum(A)) - A.order ** 0.5) > 1e-9:
            return False, f"Milgram fails on {G}"
        done += 1
    return True, "Milgram formula on 20 random lattices"


def check_weil():
    for expr in ["2U+D4", "2U+A2+A1", "2U+<-6>+<-4>", "2U+2E8+D8"]:
        L = parse_lattice(expr)
        W = build_weilrep(discriminant_form(L), L.signature[1])
        if max(W.relation_errors().values()) > 1e-9:
            return False, expr
    return True, "(ST)^3 = S^2 and S^2 = c e_{-x} on sample forms"


def check_pool():
    if [max_nonorthogonal_norm(["A1"]), max_nonorthogonal_norm(["A1", "A1"]),
            max_nonorthogonal_norm(["A2"])] != [-2, -4, -2]:
        return False, "small chamber norms"
    if min_chamber_norm(0) != 4 or compute_a_n(4) != 4:
        return False, "pool constants"
    return True, "chamber norms of A1, 2A1, A2, U and a_4"


def check_pipeline():
    if classify(parse_lattice("2U+3E8")).status != CANDIDATE:
        return False, "II_{2,26}"
    v = classify(parse_lattice("2U+2E8+D8"))
    if v.status != NOT_TWO_REFLECTIVE or not replay(v):
        return False, "2U+2E8+D8"
    cfg = Config(f_AI={7: Fraction(1)}, f_AII={7: Fraction(1)})
    if discriminant_bound(7, 1, cfg) != 9184:
        return False, "bound arithmetic"
    return True, "II_{2,26}, 2U+2E8+D8 and the n = 7 bound"


CHECKS = [check_short_vectors, check_milgram, check_weil, check_pool, check_pipeline]


def run_all():
    out = []
    for fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:          # report, do not crash the suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((fn.__name__.removeprefix("check_"), ok, detail))
    return out
