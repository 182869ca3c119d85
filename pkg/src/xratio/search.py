"""Searching for the largest degree at a given label count.

Triangulations only realize powers of two (2 to the internal-triangle
count, at most 2**(floor(n/2) - 2) for an n-gon), but general
configurations beat them: the record values are not all powers of two.
This module provides an exhaustive search over all quad multisets for
small n (certified maxima), a budgeted hill-climbing search for larger n
(lower bounds only), and the bound sandwich each result must respect.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement

from .engine import CrossRatioProblem, Engine, canonical_key, normalize
from .polygon import (
    inscribed_polygon_triangulation,
    random_triangulation,
    triangulation_to_problem,
)

__all__ = [
    "SearchResult",
    "BoundReport",
    "RECORDS",
    "bound_report",
    "exhaustive_cn",
    "heuristic_cn",
    "append_result",
    "load_results",
]

# Best degrees from recorded searches (exact where the exhaustive range
# certifies them, lower bounds beyond).
RECORDS = {3: 1, 4: 1, 5: 1, 6: 2, 7: 2, 8: 4, 9: 6, 10: 10,
           11: 13, 12: 20, 13: 28, 14: 41}
EXHAUSTIVE_CERTIFIED = 6
WITNESS_CAP = 64


@dataclass(frozen=True)
class BoundReport:
    """Sandwich for the maximal degree at n labels."""

    n: int
    lower: int           # met by an explicit triangulation
    upper: int
    record: int | None   # best recorded search value (lower bound on the max)
    exact: bool          # record certified by exhaustive search

    def to_json(self) -> dict:
        return {"n": self.n, "lower": self.lower, "upper": self.upper,
                "record": self.record, "exact": self.exact}


def bound_report(n: int) -> BoundReport:
    if n < 3:
        raise ValueError("need n >= 3")
    if n <= 4:
        lower = upper = 1
    else:
        lower = 2 ** (n // 2 - 2)
        upper = 2 ** (n - 5)
    return BoundReport(n, lower, upper, RECORDS.get(n),
                       n <= EXHAUSTIVE_CERTIFIED)


@dataclass(frozen=True)
class SearchResult:
    n: int
    mode: str                     # exhaustive | heuristic
    best_degree: int
    witnesses: tuple[CrossRatioProblem, ...]   # canonical forms
    evaluations: int
    elapsed: float
    seed: int | None
    budget: int | None
    certified: bool               # True when the whole space was covered

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "best_degree": self.best_degree,
            "witnesses": [[sorted(q) for q in w.quads] for w in self.witnesses],
            "evaluations": self.evaluations,
            "elapsed": round(self.elapsed, 3),
            "seed": self.seed,
            "budget": self.budget,
            "certified": self.certified,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SearchResult":
        return cls(
            n=int(obj["n"]),
            mode=obj["mode"],
            best_degree=int(obj["best_degree"]),
            witnesses=tuple(
                CrossRatioProblem(int(obj["n"]), tuple(frozenset(q) for q in w))
                for w in obj["witnesses"]
            ),
            evaluations=int(obj["evaluations"]),
            elapsed=float(obj["elapsed"]),
            seed=obj.get("seed"),
            budget=obj.get("budget"),
            certified=bool(obj["certified"]),
        )


class _Tracker:
    def __init__(self):
        self.best = -1
        self.witnesses: dict[CrossRatioProblem, None] = {}

    def record(self, problem: CrossRatioProblem, d: int):
        if d > self.best:
            self.best = d
            self.witnesses.clear()
        if d == self.best and len(self.witnesses) < WITNESS_CAP:
            self.witnesses.setdefault(normalize(problem))


def exhaustive_cn(n: int, engine: Engine | None = None, max_n: int = 7) -> SearchResult:
    """Certified maximum over every multiset of n-3 quads.

    Multisets are deduplicated by the engine's canonical key, and any
    repeated quad vanishes anyway.  The space grows fast; n above 7
    requires raising max_n explicitly.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if n > max_n:
        raise ValueError(f"exhaustive search for n={n} needs max_n >= {n}")
    eng = engine or Engine()
    t0 = time.perf_counter()
    all_quads = [frozenset(c) for c in combinations(range(1, n + 1), 4)]
    pos = {lab: i for i, lab in enumerate(range(1, n + 1))}
    tracker = _Tracker()
    seen: set = set()
    evals = 0
    for combo in combinations_with_replacement(all_quads, n - 3):
        masks = tuple(sorted(sum(1 << pos[x] for x in q) for q in combo))
        key = canonical_key(n, masks)
        if key in seen:
            continue
        seen.add(key)
        problem = CrossRatioProblem(n, combo)
        evals += 1
        tracker.record(problem, eng.degree(problem))
    return SearchResult(
        n=n, mode="exhaustive", best_degree=tracker.best,
        witnesses=tuple(tracker.witnesses), evaluations=evals,
        elapsed=time.perf_counter() - t0, seed=None, budget=None,
        certified=True,
    )


def _mutate(state: list, all_quads, rng: random.Random) -> list:
    # swap one quad; prefer replacements overlapping the rest in <= 2 labels
    k = len(state)
    i = rng.randrange(k)
    rest = state[:i] + state[i + 1:]
    best_q, best_score = None, 5
    for _ in range(12):
        q = all_quads[rng.randrange(len(all_quads))]
        if q == state[i] or q in rest:
            continue
        score = max((len(q & s) for s in rest), default=0)
        if score <= 2:
            best_q = q
            break
        if score < best_score:
            best_q, best_score = q, score
    if best_q is None:
        return state[:]
    out = state[:]
    out[i] = best_q
    return out


def heuristic_cn(n: int, budget: int = 200_000, seed: int = 1729,
                 engine: Engine | None = None, sideways_cap: int = 40,
                 stall_cap: int = 300) -> SearchResult:
    """Budgeted multi-restart hill climbing; result is a lower bound.

    Restart points alternate between triangulation-induced configurations
    (the inscribed construction first, so the triangulation lower bound
    2**(floor(n/2) - 2) always holds for n >= 6) and random quad sets.
    A move replaces one quad; equal-degree moves are accepted up to
    sideways_cap in a row, and a climb restarts after stall_cap rejected
    moves.  The budget counts engine evaluations.
    """
    if n < 6:
        raise ValueError("heuristic search needs n >= 6; below that use exhaustive_cn")
    if budget < 1:
        raise ValueError("budget must be positive")
    rng = random.Random(seed)
    eng = engine or Engine()
    t0 = time.perf_counter()
    k = n - 3
    all_quads = [frozenset(c) for c in combinations(range(1, n + 1), 4)]
    tracker = _Tracker()
    evals = 0

    def evaluate(quads) -> int:
        nonlocal evals
        evals += 1
        problem = CrossRatioProblem(n, tuple(quads))
        d = eng.degree(problem)
        tracker.record(problem, d)
        return d

    def next_start(first: bool):
        if first:
            return list(triangulation_to_problem(inscribed_polygon_triangulation(n)).quads)
        if rng.random() < 0.4:
            t = random_triangulation(n, rng.randrange(2**32))
            return list(triangulation_to_problem(t).quads)
        return rng.sample(all_quads, k)

    first = True
    while evals < budget:
        state = next_start(first)
        first = False
        d = evaluate(state)
        sideways = stalls = 0
        while evals < budget and stalls < stall_cap:
            cand = _mutate(state, all_quads, rng)
            if cand == state:
                stalls += 1
                continue
            d2 = evaluate(cand)
            if d2 > d:
                state, d = cand, d2
                sideways = stalls = 0
            elif d2 == d and d2 > 0 and sideways < sideways_cap:
                state, d = cand, d2
                sideways += 1
            else:
                stalls += 1

    return SearchResult(
        n=n, mode="heuristic", best_degree=tracker.best,
        witnesses=tuple(tracker.witnesses), evaluations=evals,
        elapsed=time.perf_counter() - t0, seed=seed, budget=budget,
        certified=False,
    )


def append_result(path: str, result: SearchResult) -> None:
    with open(path, "a") as fh:
        fh.write(json.dumps(result.to_json()) + "\n")


def load_results(path: str) -> list[SearchResult]:
    out = []
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    out.append(SearchResult.from_json(json.loads(line)))
    except FileNotFoundError:
        pass
    return out
