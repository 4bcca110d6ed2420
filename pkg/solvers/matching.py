"""
Exact coordination matching
Maximum-weight assignment of receivers to supporters, one supporter per
receiver and one receiver per supporter
"""
from __future__ import annotations
from fractions import Fraction
from typing import Dict, List, Tuple

from core.model import ZERO

Pair = Tuple[int, int]  # (receiver, supporter)

EXHAUSTIVE_PAIR_LIMIT = 4


def max_weight_matching(weights: Dict[Pair, Fraction]) -> Tuple[Fraction, List[Pair]]:
    """
    Best set of disjoint (receiver, supporter) pairs

    Only positive weights are worth matching. Up to four candidate pairs
    are enumerated exhaustively; larger problems use branch and bound with
    an optimistic per-receiver bound. Among equal totals the first one
    found wins, so results are deterministic.

    Args:
        weights: Candidate pairs and their cost reduction

    Returns:
        (total reduction, chosen pairs sorted)
    """
    candidates = {pair: w for pair, w in weights.items() if w > 0}
    if not candidates:
        return ZERO, []

    options: Dict[int, List[Tuple[Fraction, int]]] = {}
    for (r, s), w in candidates.items():
        options.setdefault(r, []).append((w, s))
    for r in options:
        options[r].sort(key=lambda item: (-item[0], item[1]))

    receivers = sorted(options, key=lambda r: (-options[r][0][0], r))
    best_rest = [ZERO] * (len(receivers) + 1)
    for i in range(len(receivers) - 1, -1, -1):
        best_rest[i] = best_rest[i + 1] + options[receivers[i]][0][0]

    use_bound = len(candidates) > EXHAUSTIVE_PAIR_LIMIT
    best_total = ZERO
    best_pairs: List[Pair] = []
    chosen: List[Pair] = []
    taken = set()

    def branch(i: int, total: Fraction) -> None:
        nonlocal best_total, best_pairs
        if i == len(receivers):
            if total > best_total:
                best_total = total
                best_pairs = list(chosen)
            return
        if use_bound and total + best_rest[i] <= best_total:
            return

        r = receivers[i]
        for w, s in options[r]:
            if s in taken:
                continue
            taken.add(s)
            chosen.append((r, s))
            branch(i + 1, total + w)
            chosen.pop()
            taken.discard(s)
        branch(i + 1, total)

    branch(0, ZERO)
    return best_total, sorted(best_pairs)
