"""Hand detection, scoring, and comparison under script-defined rules.

Everything here is parameterized by the script: rank order, suit set, hand
size, and the combination lattice. A hand's value is (lattice index,
tiebreak vector); bigger wins unless the script says the lowest hand wins,
in which case only the comparison flips, never the detectors.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .cards import Card


class InsufficientCards(Exception):
    """Fewer cards available than the script's hand size."""


#: Combination names with built-in detectors.
BUILTIN_COMBINATIONS = frozenset({
    "High Card",
    "Pair",
    "Two Pair",
    "Three of a Kind",
    "Straight",
    "Flush",
    "Full House",
    "Four of a Kind",
    "Straight Flush",
    "Small Straight",
    "Three Pair",
    "Big House",
})

#: Detector ids new combinations may bind to.
NEW_COMBINATION_DETECTORS = frozenset({"three_pairs", "two_triples"})

#: Detector id equivalences for script-declared combinations.
_DETECTOR_ALIASES = {"three_pairs": "Three Pair", "two_triples": "Big House"}


@dataclass(frozen=True, order=True)
class HandValue:
    """Total-order hand score: lattice position first, then kickers."""

    index: int
    tiebreak: tuple[int, ...]


@dataclass(frozen=True)
class BadugiValue:
    """More suit/rank-distinct cards beat fewer; then lower ranks win."""

    count: int
    ranks_desc: tuple[int, ...]

    def beats(self, other: "BadugiValue") -> bool:
        if self.count != other.count:
            return self.count > other.count
        return self.ranks_desc < other.ranks_desc

    def ties(self, other: "BadugiValue") -> bool:
        return self.count == other.count and self.ranks_desc == other.ranks_desc


class EvalContext:
    """Per-script lookup tables shared by the scoring routines."""

    def __init__(self, script):
        self.ordinal = {r: i for i, r in enumerate(script.rank_order)}
        self.suit_pos = {s: i for i, s in enumerate(script.suits)}
        self.top_ordinal = len(script.rank_order) - 1
        self.hand_size = script.hand_size()
        self.lattice = script.effective_hand_rank()
        self.low_wins = script.has_rule("low_wins")
        omaha = script.get_rule("omaha_constraint")
        self.omaha = (omaha.params["holes"], omaha.params["community"]) if omaha else None

    @classmethod
    def for_script(cls, script) -> "EvalContext":
        # Scripts are immutable after validation; memoize on the instance.
        ctx = script.__dict__.get("_eval_ctx")
        if ctx is None:
            ctx = cls(script)
            script.__dict__["_eval_ctx"] = ctx
        return ctx

    def ord_of(self, card: Card) -> int:
        return self.ordinal[card.rank]

    def sort_key(self, card: Card):
        return (self.ordinal[card.rank], self.suit_pos[card.suit])


def _groups(ords: Sequence[int]) -> list[tuple[int, int]]:
    """(count, ordinal) pairs, best group first: larger count, then higher rank."""
    return sorted(((c, o) for o, c in Counter(ords).items()), key=lambda t: (-t[0], -t[1]))


def _is_run(ords: Sequence[int]) -> bool:
    s = sorted(set(ords))
    return len(s) == len(ords) and s[-1] - s[0] == len(s) - 1


def _wrapped_ords(subset: Sequence[Card], ctx: EvalContext) -> list[int] | None:
    """Ordinals with the top-ranked card counted below the bottom, or None."""
    if not any(ctx.ord_of(c) == ctx.top_ordinal for c in subset):
        return None
    return [-1 if ctx.ord_of(c) == ctx.top_ordinal else ctx.ord_of(c) for c in subset]


def _kickers(ords: Sequence[int], used: Sequence[int]) -> list[int]:
    """Ordinals not consumed by the combination, highest first."""
    pool = list(ords)
    for o in used:
        pool.remove(o)
    return sorted(pool, reverse=True)


class _Facts:
    """One-pass classification of a fixed k-subset."""

    __slots__ = ("ords", "paired", "trips", "quads", "flush", "run", "wrapped")

    def __init__(self, subset: Sequence[Card], ctx: EvalContext):
        ords = sorted((ctx.ordinal[c.rank] for c in subset), reverse=True)
        self.ords = ords
        counts = Counter(ords)
        self.paired = sorted((o for o, n in counts.items() if n >= 2), reverse=True)
        self.trips = sorted((o for o, n in counts.items() if n >= 3), reverse=True)
        self.quads = sorted((o for o, n in counts.items() if n >= 4), reverse=True)
        # Runs and same-suit sets of one card are no combination at all.
        self.flush = len(ords) >= 2 and len({c.suit for c in subset}) == 1
        distinct = len(counts) == len(ords)
        self.run = len(ords) >= 2 and distinct and ords[0] - ords[-1] == len(ords) - 1
        self.wrapped = None
        if len(ords) >= 2 and ctx.top_ordinal in counts:
            w = sorted((-1 if o == ctx.top_ordinal else o for o in ords), reverse=True)
            if len(set(w)) == len(w) and w[0] - w[-1] == len(w) - 1:
                self.wrapped = w


def _facts_tiebreak(name: str, f: _Facts) -> tuple[int, ...] | None:
    """Tiebreak vector if the subset forms the combination, else None.

    The vector always covers all k cards: combination cards first (highest
    first), then kickers in descending order.
    """
    if name == "High Card":
        return tuple(f.ords)
    if name == "Pair":
        if f.paired:
            o = f.paired[0]
            return tuple([o, o] + _kickers(f.ords, [o, o]))
        return None
    if name == "Two Pair":
        if len(f.paired) >= 2:
            hi, lo = f.paired[0], f.paired[1]
            return tuple([hi, hi, lo, lo] + _kickers(f.ords, [hi, hi, lo, lo]))
        return None
    if name == "Three of a Kind":
        if f.trips:
            o = f.trips[0]
            return tuple([o, o, o] + _kickers(f.ords, [o, o, o]))
        return None
    if name == "Straight":
        return tuple(f.ords) if f.run else None
    if name == "Small Straight":
        return tuple(f.wrapped) if f.wrapped is not None else None
    if name == "Flush":
        return tuple(f.ords) if f.flush else None
    if name == "Full House":
        if not f.trips:
            return None
        t = f.trips[0]
        pairs = [o for o in f.paired if o != t]
        if not pairs:
            return None
        used = [t, t, t, pairs[0], pairs[0]]
        return tuple(used + _kickers(f.ords, used))
    if name == "Four of a Kind":
        if f.quads:
            o = f.quads[0]
            return tuple([o] * 4 + _kickers(f.ords, [o] * 4))
        return None
    if name == "Straight Flush":
        return tuple(f.ords) if f.flush and f.run else None
    if name == "Three Pair":
        if len(f.paired) >= 3:
            used = [f.paired[0]] * 2 + [f.paired[1]] * 2 + [f.paired[2]] * 2
            return tuple(used + _kickers(f.ords, used))
        return None
    if name == "Big House":
        if len(f.trips) >= 2:
            used = [f.trips[0]] * 3 + [f.trips[1]] * 3
            return tuple(used + _kickers(f.ords, used))
        return None
    raise ValueError(f"no detector for combination {name!r}")


def _subset_tiebreak(name: str, subset: Sequence[Card], ctx: EvalContext) -> tuple[int, ...] | None:
    return _facts_tiebreak(name, _Facts(subset, ctx))


def score_subset(subset: Sequence[Card], ctx: EvalContext) -> HandValue:
    """Best combination a fixed k-subset forms, scanning the lattice downward."""
    facts = _Facts(subset, ctx)
    for idx in range(len(ctx.lattice) - 1, -1, -1):
        tb = _facts_tiebreak(ctx.lattice[idx], facts)
        if tb is not None:
            return HandValue(idx, tb)
    # Lattices are validated to contain High Card or an always-on combination;
    # an empty lattice would already have been rejected at script validation.
    raise ValueError("no combination in the lattice matches the subset")


def detect(name: str, cards: Sequence[Card], script) -> tuple[HandValue, list[Card]] | None:
    """Best instance of one combination inside an arbitrary card set.

    Returns the instance's value within the script lattice plus the cards
    forming it (combination cards only, no kickers), or None when absent.
    The instance uses only cards from the input.
    """
    ctx = EvalContext.for_script(script)
    size = _instance_size(name, ctx)
    if size > len(cards):
        return None
    lattice_idx = ctx.lattice.index(name) if name in ctx.lattice else 0
    best = None
    for combo in combinations(sorted(cards, key=ctx.sort_key), size):
        tb = _instance_tiebreak(name, combo, ctx)
        if tb is None:
            continue
        if best is None or tb > best[0]:
            best = (tb, list(combo))
    if best is None:
        return None
    ordered = sorted(best[1], key=lambda c: (-ctx.ord_of(c), ctx.suit_pos[c.suit]))
    return HandValue(lattice_idx, best[0]), ordered


def _instance_size(name: str, ctx: EvalContext) -> int:
    k = ctx.hand_size
    return {
        "High Card": 1,
        "Pair": 2,
        "Two Pair": 4,
        "Three of a Kind": 3,
        "Straight": k,
        "Small Straight": k,
        "Flush": k,
        "Full House": 5,
        "Four of a Kind": 4,
        "Straight Flush": k,
        "Three Pair": 6,
        "Big House": 6,
    }[name]


def _instance_tiebreak(name: str, combo: Sequence[Card], ctx: EvalContext) -> tuple[int, ...] | None:
    """Tiebreak for an exact-size instance (no kickers involved)."""
    ords = sorted((ctx.ord_of(c) for c in combo), reverse=True)
    groups = _groups([ctx.ord_of(c) for c in combo])
    counts = sorted((g[0] for g in groups), reverse=True)
    if name in ("Straight", "Small Straight", "Flush", "Straight Flush") and len(combo) < 2:
        return None
    if name == "High Card":
        return tuple(ords)
    if name == "Pair":
        return tuple(ords) if counts == [2] else None
    if name == "Two Pair":
        return tuple(ords) if counts == [2, 2] else None
    if name == "Three of a Kind":
        return tuple(ords) if counts == [3] else None
    if name == "Straight":
        return tuple(ords) if _is_run(ords) else None
    if name == "Small Straight":
        wrapped = _wrapped_ords(combo, ctx)
        if wrapped is not None and _is_run(wrapped):
            return tuple(sorted(wrapped, reverse=True))
        return None
    if name == "Flush":
        return tuple(ords) if len({c.suit for c in combo}) == 1 else None
    if name == "Full House":
        return tuple(ords) if counts == [3, 2] else None
    if name == "Four of a Kind":
        return tuple(ords) if counts == [4] else None
    if name == "Straight Flush":
        return tuple(ords) if len({c.suit for c in combo}) == 1 and _is_run(ords) else None
    if name == "Three Pair":
        return tuple(ords) if counts == [2, 2, 2] else None
    if name == "Big House":
        return tuple(ords) if counts == [3, 3] else None
    raise ValueError(f"no detector for combination {name!r}")


def iter_subsets(hole: Sequence[Card], community: Sequence[Card], ctx: EvalContext) -> Iterable[tuple[Card, ...]]:
    """All k-subsets a player may use, honoring a hole/community constraint."""
    if ctx.omaha:
        h, c = ctx.omaha
        for hs in combinations(hole, h):
            for cs in combinations(community, c):
                yield hs + cs
    else:
        pool = list(hole) + list(community)
        yield from combinations(pool, ctx.hand_size)


def best_hand(hole: Sequence[Card], community: Sequence[Card], script) -> tuple[HandValue, list[Card]]:
    """Strongest k-subset under the script; weakest when the low hand wins."""
    return best_hand_directed(hole, community, script, script.has_rule("low_wins"))


def compare(a: HandValue, b: HandValue, script) -> int:
    """-1, 0, or 1 from the winner's point of view (1 means a beats b)."""
    if a == b:
        return 0
    high = 1 if a > b else -1
    return -high if script.has_rule("low_wins") else high


def badugi_select(cards: Sequence[Card], script) -> tuple[BadugiValue, list[Card]]:
    """Largest suit-distinct, rank-distinct selection; lower ranks on conflict.

    Exhaustive over subsets (hands are small), so the returned selection is
    exactly the maximal one rather than a greedy approximation.
    """
    ctx = EvalContext.for_script(script)
    items = sorted(cards, key=ctx.sort_key)
    best_val: BadugiValue | None = None
    best_cards: list[Card] | None = None
    n = len(items)
    for mask in range(1, 1 << n):
        chosen = [items[i] for i in range(n) if mask >> i & 1]
        if len({c.suit for c in chosen}) != len(chosen):
            continue
        if len({c.rank for c in chosen}) != len(chosen):
            continue
        val = BadugiValue(len(chosen), tuple(sorted((ctx.ord_of(c) for c in chosen), reverse=True)))
        if best_val is None or val.beats(best_val):
            best_val, best_cards = val, chosen
        elif val.ties(best_val):
            key = [ctx.sort_key(c) for c in chosen]
            if key < [ctx.sort_key(c) for c in best_cards]:
                best_cards = chosen
    return best_val, best_cards


def _argbest(values: dict[str, object], better) -> list[str]:
    """Player ids holding the best value under a strict `better` predicate."""
    leaders: list[str] = []
    top = None
    for pid, val in values.items():
        if top is None or better(val, top):
            top, leaders = val, [pid]
        elif not better(top, val):
            leaders.append(pid)
    return leaders


def winners(holes: dict[str, list[Card]], community: Sequence[Card], script) -> list[list[str]]:
    """Winner set(s) at showdown. Two sets for split-pot scripts, else one.

    A lone contender wins outright without evaluation.
    """
    if not holes:
        raise ValueError("no contenders at showdown")
    order = list(holes)
    if len(order) == 1:
        return [order]

    split = script.get_rule("high_low_split")
    badugi = script.has_rule("badugi_ranking")

    def lattice_values(low: bool) -> dict[str, HandValue]:
        vals = {}
        for pid in order:
            val, _ = best_hand_directed(holes[pid], community, script, low)
            vals[pid] = val
        return vals

    if split:
        high_metric = split.params["high"]
        sets = []
        # First portion: the low lattice winners.
        lows = lattice_values(low=True)
        sets.append(_argbest(lows, lambda a, b: a < b))
        if high_metric == "badugi":
            bvals = {pid: badugi_select(list(holes[pid]) + list(community), script)[0] for pid in order}
            sets.append(_argbest(bvals, lambda a, b: a.beats(b)))
        else:
            highs = lattice_values(low=False)
            sets.append(_argbest(highs, lambda a, b: a > b))
        # Highest combination first so the first set matches the first-named
        # group in generic high/low scripts; badugi splits keep low first.
        if high_metric != "badugi":
            sets.reverse()
        return sets

    if badugi and not script.hand_rank:
        bvals = {pid: badugi_select(list(holes[pid]) + list(community), script)[0] for pid in order}
        return [_argbest(bvals, lambda a, b: a.beats(b))]

    vals = lattice_values(low=script.has_rule("low_wins"))
    if script.has_rule("low_wins"):
        return [_argbest(vals, lambda a, b: a < b)]
    return [_argbest(vals, lambda a, b: a > b)]


def best_hand_directed(hole, community, script, low: bool) -> tuple[HandValue, list[Card]]:
    """best_hand with the search direction forced, ignoring the low_wins rule."""
    ctx = EvalContext.for_script(script)
    if ctx.omaha:
        h, c = ctx.omaha
        if len(hole) < h or len(community) < c:
            raise InsufficientCards(
                f"need {h} hole and {c} community cards, have {len(hole)} and {len(community)}"
            )
    elif len(hole) + len(community) < ctx.hand_size:
        raise InsufficientCards(
            f"hand size is {ctx.hand_size}, only {len(hole) + len(community)} cards available"
        )
    best_val = None
    best_cards = None
    for subset in iter_subsets(hole, community, ctx):
        val = score_subset(subset, ctx)
        better = best_val is None or (val < best_val if low else val > best_val)
        if better:
            best_val, best_cards = val, subset
        elif val == best_val:
            key = sorted(ctx.sort_key(c) for c in subset)
            if key < sorted(ctx.sort_key(c) for c in best_cards):
                best_cards = subset
    return best_val, sorted(best_cards, key=ctx.sort_key, reverse=True)
