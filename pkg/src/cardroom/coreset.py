"""The instruction core set: 40 standalone poker skills with oracle outputs.

Every sample is (instruction, input text, output text) where the output is
computed by the same card/evaluator/engine primitives the rules engine runs
on. Verification recomputes the output from scratch and compares.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import evaluator
from .cards import Card, build_deck, parse_card, shuffle
from .engine import GameState, Message, PlayerInput, init_round, next_state
from .rng import Rng
from .script import GameScript, PhaseSpec, RulePredicate
from .statelang import parse_state, serialize_state

FUNCTIONS = (
    "shuffle", "blind", "dealx", "flopx", "switch", "show", "prize",
    "show low", "show high", "show high low", "prize high low",
    "get straight", "get pair", "get two pair", "get 3 of a kind",
    "get 4 of a kind", "get flush", "get full house",
    "rank low high", "rank high low", "low suit", "high suit",
    "highest x", "lowest x", "total bonus", "bonus for x",
    "add x chips", "drop x chips",
    "bet check", "bet call", "bet raise to x", "bet fold",
    "show high x", "show low x", "highest no pair", "lowest no pair",
    "group suits", "rank", "get all", "len",
)

INSTRUCTIONS = {
    "shuffle": "Generate a deck of all cards and shuffle it following the settings.",
    "blind": (
        "Set the blind players who are forced to place the bet. The small blind is the one "
        "to the left of the button player and the bet is half the minimum bet. The big blind "
        "is the one to the left of the small blind and the bet is the minimum bet."
    ),
    "dealx": "Deal {x} cards to each of the players by order from the top of the deck.",
    "flopx": "Discard one card, and then flop {x} cards from the top of the deck as the community cards.",
    "switch": (
        "Discard the specified cards, and then draw the same number of cards from the deck. "
        "This is specified by the user: `p{a}: Switch {x}`."
    ),
    "show": (
        "Show all the hole cards of players and pick out one or more players with the best "
        "combination of cards as the winners."
    ),
    "prize": (
        "Split the prize pool among the winners and recalculate their chips. If more than "
        "one players win the game, the pot is split to each of them equally."
    ),
    "show low": (
        "Show all the hole cards of players and pick out the players with the lowest "
        "combination of cards as the winners."
    ),
    "show high": (
        "Show all the hole cards of players and pick out the players with the highest "
        "combination of cards as the winners."
    ),
    "show high low": (
        "Show all the hole cards of players and pick out the players who have the highest "
        "and the lowest combinations of cards as the winners."
    ),
    "prize high low": (
        "Split the prize pool equally, and one portion for the winners of the highest "
        "combination of cards, and the other portion for the winners of the lowest combination of cards."
    ),
    "get straight": "Pick out the `straight` from given cards, if it exists. If there are more than one, pick out the greater one.",
    "get pair": "Pick out the `pair` from given cards, if it exists. If there are more than one, pick out the greater one.",
    "get two pair": "Pick out the `two pair` from given cards, if it exists. If there are more than one, pick out the greater one.",
    "get 3 of a kind": "Pick out the `three of a kind` from given cards, if it exists. If there are more than one, pick out the greater one.",
    "get 4 of a kind": "Pick out the `four of a kind` from given cards, if it exists. If there are more than one, pick out the greater one.",
    "get flush": "Pick out the `flush` from given cards, if it exists. If there are more than one, pick out the greater one.",
    "get full house": "Pick out the `full house` from given cards, if it exists. If there are more than one, pick out the greater one.",
    "rank low high": "Rank the given cards from low to high.",
    "rank high low": "Rank the given cards from high to low.",
    "low suit": "Pick out the cards of distinct suits. If there are more than one of the same suit, choose the smaller one.",
    "high suit": "Pick out the cards of distinct suits. If there are more than one of the same suit, choose the greater one.",
    "highest x": "Choose the top {x} highest-ranking card from given cards.",
    "lowest x": "Choose the top {x} lowest-ranking cards from given cards.",
    "total bonus": "Add up all players' chips as the prize pool, which is the total bonus.",
    "bonus for x": "Average the total bonus or prize pool to {x} winners.",
    "add x chips": "Add {x} to player p{a}'s bet.",
    "drop x chips": "Take {x} from player p{a}'s bet.",
    "bet check": (
        "Define a user operation called `Check`: Do nothing, only when the bet already "
        "matches the highest bet. This is specified by the user: `p{a}: Check`."
    ),
    "bet call": (
        "Define a user operation called `Call`: Match the amount of the highest bet. "
        "This is specified by the user: `p{a}: Call`."
    ),
    "bet raise to x": (
        "Define a user operation called `Raise`: Increase the bet to a higher bar. "
        "This is specified by the user: `p{a}: Raise to {x}`."
    ),
    "bet fold": (
        "Define a user operation called `Fold`: Discard the hole cards and forfeit all "
        "chips already committed to the pot. This is specified by the user: `p{a}: Fold`."
    ),
    "show high x": (
        "Show all the hole cards of players, and only a combination of {x} hole cards can "
        "be considered. Pick out the players with the highest combination of {x} cards as the winners."
    ),
    "show low x": (
        "Show all the hole cards of players, and only a combination of {x} hole cards can "
        "be considered. Pick out the players with the lowest combination of {x} cards as the winners."
    ),
    "highest no pair": "Select the highest-ranking card with no pair.",
    "lowest no pair": "Select the lowest-ranking card with no pair.",
    "group suits": "Group the given cards by their suits.",
    "rank": "Rank the given cards.",
    "get all": "List all possible combination of cards from given cards. If there are one more for each combination, choose the greatest one.",
    "len": "Get the number of cards.",
}


@dataclass(frozen=True)
class CoreSample:
    function: str
    instruction: str
    input: str
    output: str


DEFAULT_SUITS = ["H", "D", "C", "S"]
DEFAULT_RANKS = [2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 1]
STANDARD_LATTICE = [
    "High Card", "Pair", "Two Pair", "Three of a Kind", "Straight",
    "Flush", "Full House", "Four of a Kind", "Straight Flush",
]


def _context_script(suits=None, ranks=None, hand_rank=None, rules=None, players=5, min_bet=10) -> GameScript:
    """A synthetic script carrying just enough context for one core function."""
    return GameScript(
        num_players=players,
        suits=suits or list(DEFAULT_SUITS),
        rank_order=ranks or list(DEFAULT_RANKS),
        hand_rank=hand_rank if hand_rank is not None else list(STANDARD_LATTICE),
        min_bet=min_bet,
        max_bet=5000,
        flow=[PhaseSpec("start"), PhaseSpec("blind"), PhaseSpec("deal", 5),
              PhaseSpec("bet"), PhaseSpec("show"), PhaseSpec("prize")],
        rules=list(rules or []),
    )


def _cards_line(cards: list[Card]) -> str:
    return "Cards: " + " ".join(str(c) for c in cards)


def _rank_line(ranks: list[int]) -> str:
    return "Card Rank: " + "<".join(str(r) for r in ranks)


def _parse_context(input_text: str) -> dict:
    """Pull the common context lines out of a sample input."""
    ctx: dict = {"suits": list(DEFAULT_SUITS), "ranks": list(DEFAULT_RANKS)}
    for line in input_text.splitlines():
        line = line.rstrip()
        if line.startswith("Suit: "):
            ctx["suits"] = [t.strip() for t in line[len("Suit: "):].split(",")]
        elif line.startswith("Card Rank: "):
            ctx["ranks"] = [int(t) for t in line[len("Card Rank: "):].split("<")]
        elif line.startswith("Hand Rank: "):
            ctx["hand_rank"] = [t.strip() for t in line[len("Hand Rank: "):].split("<")]
        elif line.startswith("Cards: "):
            ctx["cards"] = [parse_card(t) for t in line[len("Cards: "):].split()]
        elif line.startswith("Seed: "):
            ctx["seed"] = int(line[len("Seed: "):])
        elif line.startswith("Min bet: "):
            ctx["min_bet"] = int(line[len("Min bet: "):])
        elif line.startswith("Prize pool: "):
            ctx["pool"] = int(line[len("Prize pool: "):])
        elif line.startswith("Winners: "):
            ctx["winners"] = [t.strip() for t in line[len("Winners: "):].split(",")]
        elif line.startswith("High winners: "):
            ctx["high_winners"] = [t.strip() for t in line[len("High winners: "):].split(",")]
        elif line.startswith("Low winners: "):
            ctx["low_winners"] = [t.strip() for t in line[len("Low winners: "):].split(",")]
        elif line.startswith("|"):
            ctx.setdefault("state_lines", []).append(line)
        elif re.fullmatch(r"p\d+: .*", line):
            ctx["directive"] = line
    return ctx


def _ord_key(ctx_ranks: list[int], suits: list[str]):
    ordinal = {r: i for i, r in enumerate(ctx_ranks)}
    suit_pos = {s: i for i, s in enumerate(suits)}
    return lambda c: (ordinal[c.rank], suit_pos.get(c.suit, 99))


def _line(state_lines: list[str], key: str) -> str | None:
    for line in state_lines:
        if line.startswith(f"|{key}"):
            return line
    return None


def _parse_chip_line(line: str) -> dict[str, dict]:
    out: dict[str, dict] = {}
    for entry in line.split("|")[2:]:
        m = re.fullmatch(r"(p\d+): (\d+)/(\d+)( \((?:all-in|folded)\))?", entry)
        out[m.group(1)] = {
            "bet": int(m.group(2)),
            "stack": int(m.group(3)),
            "marker": m.group(4).strip(" ()") if m.group(4) else None,
        }
    return out


def _chip_line(chips: dict[str, dict]) -> str:
    parts = []
    for pid, c in chips.items():
        entry = f"{pid}: {c['bet']}/{c['stack']}"
        if c.get("marker"):
            entry += f" ({c['marker']})"
        parts.append(entry)
    return "|chip|" + "|".join(parts)


def _parse_holes(line: str) -> dict[str, list[Card]]:
    holes: dict[str, list[Card]] = {}
    current = None
    for tok in line.split("|")[2:]:
        if re.fullmatch(r"p\d+", tok):
            current = tok
            holes[current] = []
        else:
            holes[current].append(parse_card(tok))
    return holes


def _holes_line(holes: dict[str, list[Card]]) -> str:
    parts = [pid + "|" + "|".join(str(c) for c in cards) for pid, cards in holes.items()]
    return "|hole|" + "|".join(parts)


def _stack_line(cards: list[Card]) -> str:
    return "|stack" + "".join(f"|{c}" for c in cards)


def _parse_stack(line: str) -> list[Card]:
    return [parse_card(t) for t in line.split("|")[2:] if t]


# -- the oracle: recompute a sample's output from its input -------------------


def compute_output(function: str, instruction: str, input_text: str) -> str:
    ctx = _parse_context(input_text)
    suits, ranks = ctx["suits"], ctx["ranks"]
    state_lines = ctx.get("state_lines", [])

    if function == "shuffle":
        deck = shuffle(build_deck(suits, ranks), Rng(ctx["seed"]))
        return _stack_line(deck)

    if function == "blind":
        chips = _parse_chip_line(_line(state_lines, "chip"))
        state = _state_from_lines(state_lines, deck=[], trace=["start"])
        script = _context_script(suits, ranks, min_bet=ctx["min_bet"], players=state.num_players)
        after = next_state(state, None, script)
        return _chip_line({
            p: {"bet": after.bets[p], "stack": after.stacks[p], "marker": chips[p]["marker"]}
            for p in after.players()
        })

    if function == "dealx":
        x = int(re.search(r"Deal (\d+) cards", instruction).group(1))
        deck = _parse_stack(_line(state_lines, "stack"))
        state = _state_from_lines(state_lines, deck=deck, trace=["start", "blind"])
        script = _deal_script(_context_script(suits, ranks, players=state.num_players), x)
        dealt = next_state(state, None, script)
        return _holes_line({p: dealt.holes[p] for p in dealt.players()}) + "\n" + _stack_line(dealt.deck)

    if function == "flopx":
        x = int(re.search(r"flop (\d+) cards", instruction).group(1))
        deck = _parse_stack(_line(state_lines, "stack"))
        community_line = _line(state_lines, "community")
        community = [parse_card(t) for t in community_line.split("|")[2:]] if community_line else []
        deck = deck[1:]  # one card is discarded off the top first
        revealed, deck = deck[:x], deck[x:]
        return "|community|" + "|".join(str(c) for c in community + revealed) + "\n" + _stack_line(deck)

    if function == "switch":
        holes = _parse_holes(_line(state_lines, "hole"))
        deck = _parse_stack(_line(state_lines, "stack"))
        pid, body = ctx["directive"].split(": ", 1)
        tokens = body.split()[1:]
        outgoing = [parse_card(t) for t in tokens if t != "0"]
        hand = list(holes[pid])
        for card in outgoing:
            hand.remove(card)
        drawn, deck = deck[: len(outgoing)], deck[len(outgoing):]
        holes[pid] = hand + drawn
        return _holes_line(holes) + "\n" + _stack_line(deck)

    if function in ("show", "show high"):
        return _show_output(ctx, low=False)
    if function == "show low":
        return _show_output(ctx, low=True)
    if function == "show high low":
        highs = _show_winners(ctx, low=False)
        lows = _show_winners(ctx, low=True)
        return f"high: {', '.join(highs)}; low: {', '.join(lows)}"
    if function in ("show high x", "show low x"):
        x = int(re.search(r"combination of (\d+) hole", instruction).group(1))
        return _show_output(ctx, low=function == "show low x", hand_size=x)

    if function == "prize":
        chips = _parse_chip_line(_line(state_lines, "chip"))
        winners = ctx["winners"]
        pot = sum(c["bet"] for c in chips.values())
        share, rem = divmod(pot, len(winners))
        for pid in chips:
            payout = share if pid in winners else 0
            if winners and pid == winners[0]:
                payout += rem
            chips[pid] = {"bet": 0, "stack": chips[pid]["stack"] + payout, "marker": chips[pid]["marker"]}
        return _chip_line(chips)

    if function == "prize high low":
        chips = _parse_chip_line(_line(state_lines, "chip"))
        pot = sum(c["bet"] for c in chips.values())
        payouts = {p: 0 for p in chips}
        for group, portion in ((ctx["high_winners"], (pot + 1) // 2), (ctx["low_winners"], pot // 2)):
            share, rem = divmod(portion, len(group))
            for pid in group:
                payouts[pid] += share
            payouts[group[0]] += rem
        for pid in chips:
            chips[pid] = {"bet": 0, "stack": chips[pid]["stack"] + payouts[pid], "marker": chips[pid]["marker"]}
        return _chip_line(chips)

    if function.startswith("get ") and function != "get all":
        name = {
            "get straight": "Straight", "get pair": "Pair", "get two pair": "Two Pair",
            "get 3 of a kind": "Three of a Kind", "get 4 of a kind": "Four of a Kind",
            "get flush": "Flush", "get full house": "Full House",
        }[function]
        script = _context_script(suits, ranks)
        found = evaluator.detect(name, ctx["cards"], script)
        if found is None:
            return "none"
        return " ".join(str(c) for c in found[1])

    if function == "get all":
        script = _context_script(suits, ranks)
        parts = []
        for name in reversed(script.effective_hand_rank()):
            found = evaluator.detect(name, ctx["cards"], script)
            if found is not None:
                parts.append(f"{name}: " + " ".join(str(c) for c in found[1]))
        return "; ".join(parts)

    key = _ord_key(ranks, suits)
    cards = ctx.get("cards", [])

    if function in ("rank low high", "rank"):
        return " ".join(str(c) for c in sorted(cards, key=key))
    if function == "rank high low":
        return " ".join(str(c) for c in sorted(cards, key=key, reverse=True))
    if function in ("low suit", "high suit"):
        best: dict[str, Card] = {}
        for card in cards:
            cur = best.get(card.suit)
            if cur is None:
                best[card.suit] = card
            elif function == "low suit" and key(card) < key(cur):
                best[card.suit] = card
            elif function == "high suit" and key(card) > key(cur):
                best[card.suit] = card
        chosen = [best[s] for s in suits if s in best]
        return " ".join(str(c) for c in chosen)
    if function == "highest x":
        x = int(re.search(r"top (\d+)", instruction).group(1))
        return " ".join(str(c) for c in sorted(cards, key=key, reverse=True)[:x])
    if function == "lowest x":
        x = int(re.search(r"top (\d+)", instruction).group(1))
        return " ".join(str(c) for c in sorted(cards, key=key)[:x])
    if function in ("highest no pair", "lowest no pair"):
        counts: dict[int, int] = {}
        for card in cards:
            counts[card.rank] = counts.get(card.rank, 0) + 1
        single = [c for c in cards if counts[c.rank] == 1]
        if not single:
            return "none"
        pick = max(single, key=key) if function.startswith("highest") else min(single, key=key)
        return str(pick)
    if function == "group suits":
        groups = []
        for s in suits:
            inside = sorted((c for c in cards if c.suit == s), key=key)
            if inside:
                groups.append(f"{s}: " + " ".join(str(c) for c in inside))
        return "; ".join(groups)
    if function == "len":
        return str(len(cards))

    if function == "total bonus":
        chips = _parse_chip_line(_line(state_lines, "chip"))
        return str(sum(c["bet"] for c in chips.values()))
    if function == "bonus for x":
        x = int(re.search(r"to (\d+) winners", instruction).group(1))
        return str(ctx["pool"] // x)
    if function in ("add x chips", "drop x chips"):
        m = re.search(r"(Add|Take) (\d+) (?:to|from) player (p\d+)", instruction)
        amount, pid = int(m.group(2)), m.group(3)
        chips = _parse_chip_line(_line(state_lines, "chip"))
        sign = 1 if function == "add x chips" else -1
        chips[pid]["bet"] += sign * amount
        chips[pid]["stack"] -= sign * amount
        return _chip_line(chips)

    if function in ("bet check", "bet call", "bet raise to x", "bet fold"):
        chips = _parse_chip_line(_line(state_lines, "chip"))
        pid, body = ctx["directive"].split(": ", 1)
        if function == "bet call":
            high = max(c["bet"] for c in chips.values())
            delta = high - chips[pid]["bet"]
            chips[pid]["bet"] += delta
            chips[pid]["stack"] -= delta
        elif function == "bet raise to x":
            target = int(re.fullmatch(r"Raise to (\d+)", body).group(1))
            delta = target - chips[pid]["bet"]
            chips[pid]["bet"] = target
            chips[pid]["stack"] -= delta
        elif function == "bet fold":
            chips[pid]["marker"] = "folded"
        return _chip_line(chips)

    raise ValueError(f"unknown core function {function!r}")


def _deal_script(script: GameScript, x: int) -> GameScript:
    flow = [PhaseSpec("start"), PhaseSpec("blind"), PhaseSpec("deal", x),
            PhaseSpec("bet"), PhaseSpec("show"), PhaseSpec("prize")]
    return GameScript(script.num_players, script.suits, script.rank_order,
                      script.hand_rank, script.min_bet, script.max_bet, flow, script.rules)


def _state_from_lines(state_lines: list[str], deck: list[Card], trace: list[str]) -> GameState:
    """A bare engine state assembled from order/chip sample lines."""
    order_line = _line(state_lines, "order")
    entries = order_line.split("|")[2:]
    n = len(entries)
    button = small = big = None
    for entry in entries:
        m = re.fullmatch(r"(p\d+)(?: \(([^)]*)\))?", entry)
        seat = int(m.group(1)[1:])
        roles = (m.group(2) or "").split(", ")
        if "button" in roles:
            button = seat
        if "small blind" in roles:
            small = seat
        if "big blind" in roles:
            big = seat
    chip_line = _line(state_lines, "chip")
    if chip_line is not None:
        chips = _parse_chip_line(chip_line)
    else:
        chips = {f"p{i}": {"bet": 0, "stack": 1000, "marker": None} for i in range(1, n + 1)}
    return GameState(
        num_players=n,
        button=button if button is not None else n,
        small_blind=small,
        big_blind=big,
        bets={p: chips[p]["bet"] for p in chips},
        stacks={p: chips[p]["stack"] for p in chips},
        folded={p for p, c in chips.items() if c["marker"] == "folded"},
        all_in={p for p, c in chips.items() if c["marker"] == "all-in"},
        deck=deck,
        discards=[],
        holes={p: [] for p in chips},
        community=[],
        trace=list(trace),
    )


def _show_ctx_script(ctx: dict, low: bool, hand_size: int | None = None) -> GameScript:
    rules = []
    if low:
        rules.append(RulePredicate("low_wins", {}))
    if hand_size is not None:
        rules.append(RulePredicate("hand_size", {"k": hand_size}))
    return _context_script(ctx["suits"], ctx["ranks"], ctx.get("hand_rank"), rules)


def _show_winners(ctx: dict, low: bool, hand_size: int | None = None) -> list[str]:
    state_lines = ctx["state_lines"]
    holes = _parse_holes(_line(state_lines, "hole"))
    community_line = _line(state_lines, "community")
    community = [parse_card(t) for t in community_line.split("|")[2:]] if community_line else []
    script = _show_ctx_script(ctx, low, hand_size)
    values = {
        pid: evaluator.best_hand_directed(cards, community, script, low)[0]
        for pid, cards in holes.items()
    }
    better = (lambda a, b: a < b) if low else (lambda a, b: a > b)
    leaders: list[str] = []
    top = None
    for pid, val in values.items():
        if top is None or better(val, top):
            top, leaders = val, [pid]
        elif not better(top, val):
            leaders.append(pid)
    return leaders


def _show_output(ctx: dict, low: bool, hand_size: int | None = None) -> str:
    return ", ".join(_show_winners(ctx, low, hand_size))


# -- sample generation ---------------------------------------------------------


def _rand_cards(rng: Rng, n: int, suits=None, ranks=None) -> list[Card]:
    deck = build_deck(suits or DEFAULT_SUITS, ranks or DEFAULT_RANKS)
    rng.shuffle(deck)
    return deck[:n]


def _rand_chips(rng: Rng, n: int, matched: bool = False) -> dict[str, dict]:
    high = rng.randint(10, 60)
    chips = {}
    for i in range(1, n + 1):
        bet = high if matched else rng.choice([0, high // 2, high])
        chips[f"p{i}"] = {"bet": bet, "stack": 1000 - bet, "marker": None}
    if not matched:
        chips[f"p{rng.randint(1, n)}"]["bet"] = high
    return chips


def make_sample(function: str, rng: Rng) -> CoreSample:
    instruction = INSTRUCTIONS[function]
    input_lines: list[str] = []

    if function == "shuffle":
        n_suits = rng.randint(2, 4)
        suits = DEFAULT_SUITS[:n_suits]
        ranks = DEFAULT_RANKS[: rng.randint(5, 13)]
        input_lines = ["Suit: " + ", ".join(suits), _rank_line(ranks), f"Seed: {rng.randint(1, 10**6)}"]
    elif function == "blind":
        n = rng.randint(3, 6)
        min_bet = rng.choice([4, 10, 20])
        script = _context_script(players=n, min_bet=min_bet)
        state = init_round(script, seed=rng.randint(1, 10**6))
        input_lines = [
            f"Min bet: {min_bet}",
            f"|order|" + "|".join(_order_entry(state, i) for i in range(1, n + 1)),
            _chip_line({p: {"bet": 0, "stack": state.stacks[p], "marker": None} for p in state.players()}),
        ]
    elif function == "dealx":
        n = rng.randint(2, 5)
        x = rng.randint(1, 5)
        instruction = instruction.replace("{x}", str(x))
        script = _context_script(players=n)
        state = init_round(script, seed=rng.randint(1, 10**6))
        input_lines = [
            "|order|" + "|".join(_order_entry(state, i) for i in range(1, n + 1)),
            _stack_line(state.deck),
        ]
    elif function == "flopx":
        x = rng.randint(1, 3)
        instruction = instruction.replace("{x}", str(x))
        deck = _rand_cards(rng, rng.randint(8, 15))
        input_lines = [_stack_line(deck)]
        if rng.below(2):
            community = _rand_cards(rng, 3)
            deck = [c for c in deck if c not in community]
            input_lines = ["|community|" + "|".join(str(c) for c in community), _stack_line(deck)]
    elif function == "switch":
        pool = _rand_cards(rng, 12)
        hand, deck = pool[:5], pool[5:]
        count = rng.randint(0, 3)
        outgoing = hand[:count]
        pid = f"p{rng.randint(1, 5)}"
        directive = f"{pid}: Switch " + (" ".join(str(c) for c in outgoing) if outgoing else "0")
        instruction = instruction.replace("p{a}", pid).replace("{x}", "{x}")
        input_lines = [_holes_line({pid: hand}), _stack_line(deck), directive]
    elif function in ("show", "show high", "show low", "show high low"):
        n = rng.randint(2, 4)
        pool = _rand_cards(rng, 5 * n)
        holes = {f"p{i + 1}": pool[i * 5:(i + 1) * 5] for i in range(n)}
        input_lines = [_rank_line(DEFAULT_RANKS),
                       "Hand Rank: " + "<".join(STANDARD_LATTICE),
                       _holes_line(holes)]
    elif function in ("show high x", "show low x"):
        x = rng.randint(2, 4)
        instruction = instruction.replace("{x}", str(x))
        n = rng.randint(2, 4)
        pool = _rand_cards(rng, 5 * n)
        holes = {f"p{i + 1}": pool[i * 5:(i + 1) * 5] for i in range(n)}
        input_lines = [_rank_line(DEFAULT_RANKS),
                       "Hand Rank: " + "<".join(STANDARD_LATTICE),
                       _holes_line(holes)]
    elif function == "prize":
        n = rng.randint(2, 5)
        chips = _rand_chips(rng, n)
        winner_count = rng.randint(1, min(3, n))
        winners = [f"p{i}" for i in rng.sample(list(range(1, n + 1)), winner_count)]
        winners.sort(key=lambda p: int(p[1:]))
        input_lines = [_chip_line(chips), "Winners: " + ", ".join(winners)]
    elif function == "prize high low":
        n = rng.randint(3, 5)
        chips = _rand_chips(rng, n)
        ids = [f"p{i}" for i in range(1, n + 1)]
        highs = sorted(rng.sample(ids, rng.randint(1, 2)), key=lambda p: int(p[1:]))
        lows = sorted(rng.sample(ids, rng.randint(1, 2)), key=lambda p: int(p[1:]))
        input_lines = [_chip_line(chips),
                       "High winners: " + ", ".join(highs),
                       "Low winners: " + ", ".join(lows)]
    elif function in ("get straight", "get pair", "get two pair", "get 3 of a kind",
                      "get 4 of a kind", "get flush", "get full house", "get all",
                      "rank low high", "rank high low", "low suit", "high suit",
                      "highest no pair", "lowest no pair", "group suits", "rank", "len"):
        cards = _rand_cards(rng, rng.randint(5, 8))
        input_lines = [_rank_line(DEFAULT_RANKS), _cards_line(cards)]
    elif function in ("highest x", "lowest x"):
        x = rng.randint(1, 4)
        instruction = instruction.replace("{x}", str(x))
        cards = _rand_cards(rng, rng.randint(max(5, x), 8))
        input_lines = [_rank_line(DEFAULT_RANKS), _cards_line(cards)]
    elif function == "total bonus":
        input_lines = [_chip_line(_rand_chips(rng, rng.randint(2, 6)))]
    elif function == "bonus for x":
        x = rng.randint(1, 5)
        instruction = instruction.replace("{x}", str(x))
        input_lines = [f"Prize pool: {x * rng.randint(20, 400)}", f"Winners: {x}"]
    elif function in ("add x chips", "drop x chips"):
        n = rng.randint(2, 5)
        chips = _rand_chips(rng, n)
        pid = f"p{rng.randint(1, n)}"
        amount = rng.randint(1, 50)
        if function == "drop x chips":
            chips[pid]["bet"] += amount  # keep the result non-negative
            chips[pid]["stack"] -= amount
        instruction = instruction.replace("{x}", str(amount)).replace("p{a}", pid)
        input_lines = [_chip_line(chips)]
    elif function in ("bet check", "bet call", "bet raise to x", "bet fold"):
        n = rng.randint(2, 5)
        pid = f"p{rng.randint(1, n)}"
        chips = _rand_chips(rng, n, matched=function == "bet check")
        if function == "bet check":
            body = "Check"
        elif function == "bet call":
            body = "Call"
        elif function == "bet fold":
            body = "Fold"
        else:
            high = max(c["bet"] for c in chips.values())
            target = high + 10 * rng.randint(1, 6)
            body = f"Raise to {target}"
            instruction = instruction.replace("{x}", str(target))
        instruction = instruction.replace("p{a}", pid)
        input_lines = [_chip_line(chips), f"{pid}: {body}"]
    else:
        raise ValueError(f"unknown core function {function!r}")

    input_text = "\n".join(input_lines)
    output = compute_output(function, instruction, input_text)
    return CoreSample(function, instruction, input_text, output)


def _order_entry(state: GameState, seat: int) -> str:
    roles = []
    if seat == state.button:
        roles.append("button")
    if seat == state.small_blind:
        roles.append("small blind")
    if seat == state.big_blind:
        roles.append("big blind")
    return f"p{seat}" + (f" ({', '.join(roles)})" if roles else "")


def generate_core_set(n_per_function: int, seed: int) -> list[CoreSample]:
    """n samples for each of the 40 functions, deterministic in the seed."""
    samples = []
    for fi, function in enumerate(FUNCTIONS):
        rng = Rng(seed).fork(fi + 1)
        for _ in range(n_per_function):
            samples.append(make_sample(function, rng))
    return samples


def verify_core_sample(sample: CoreSample) -> bool:
    """Recompute the output from the stored instruction and input."""
    return compute_output(sample.function, sample.instruction, sample.input) == sample.output
