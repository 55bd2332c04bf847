"""Turn semantics: a pure (state, player input, script) -> next state function.

One transition performs exactly one step: a single auto phase (blind, deal,
flop, show, prize, ...) or a single player turn inside a bet/switch phase.
Every piece of information the transition needs is carried by the state's
serialized form, so a state parsed back from text continues identically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from . import evaluator
from .cards import Card, DeckExhausted, build_deck, draw, parse_card, shuffle
from .rng import Rng
from .script import GameScript, PhaseSpec


class IllegalAction(Exception):
    """Rejected player input; the state it was aimed at is left untouched."""


class UnknownPlayer(Exception):
    pass


PROMPT_BET = "It's your turn to bet."
PROMPT_SWITCH = "It's your turn to switch."


@dataclass(frozen=True)
class Message:
    frm: str
    to: str
    text: str


@dataclass
class PlayerInput:
    """One player action: check, call, raise-to, fold, all-in, or a card switch."""

    player: str
    kind: str
    amount: int | None = None
    cards: list[Card] | None = None

    def to_text(self) -> str:
        if self.kind == "check":
            return "Check."
        if self.kind == "call":
            return "Call."
        if self.kind == "fold":
            return "Fold."
        if self.kind == "all_in":
            return "All-in."
        if self.kind == "raise_to":
            return f"Raise to {self.amount}."
        if self.kind == "switch":
            if not self.cards:
                return "Switch 0."
            return "Switch " + " ".join(str(c) for c in self.cards) + "."
        raise ValueError(f"unknown action kind {self.kind!r}")

    def to_message(self) -> Message:
        return Message(self.player, "engine", self.to_text())

    @classmethod
    def parse(cls, player: str, text: str) -> "PlayerInput":
        body = text.strip()
        if body.endswith("."):
            body = body[:-1]
        if body == "Check":
            return cls(player, "check")
        if body == "Call":
            return cls(player, "call")
        if body == "Fold":
            return cls(player, "fold")
        if body == "All-in":
            return cls(player, "all_in")
        m = re.fullmatch(r"Raise to (\d+)", body)
        if m:
            return cls(player, "raise_to", amount=int(m.group(1)))
        m = re.fullmatch(r"Switch(.*)", body)
        if m:
            rest = m.group(1).strip()
            if rest in ("", "0"):
                return cls(player, "switch", cards=[])
            return cls(player, "switch", cards=[parse_card(tok) for tok in rest.split()])
        raise IllegalAction(f"cannot understand action {text!r}")


@dataclass
class GameState:
    """One full frame of a round. Everything here survives serialization,
    except the concrete discard list (only its size is recoverable) and the
    produced_by bookkeeping label."""

    num_players: int
    button: int
    small_blind: int | None
    big_blind: int | None
    bets: dict[str, int]
    stacks: dict[str, int]
    folded: set[str]
    all_in: set[str]
    deck: list[Card]
    discards: list[Card]
    holes: dict[str, list[Card]]
    community: list[Card]
    trace: list[str]
    to_act: str | None = None
    message: Message | None = None
    discard_count: int = 0
    produced_by: str | None = None
    # (contenders, winner sets) memo; recomputation is deterministic, this
    # only spares repeated showdown evaluation between show and prize.
    winners_memo: tuple | None = None

    # -- identity ------------------------------------------------------------

    def players(self) -> list[str]:
        return [f"p{i}" for i in range(1, self.num_players + 1)]

    def seat(self, pid: str) -> int:
        return int(pid[1:])

    def pid(self, seat: int) -> str:
        return f"p{seat}"

    def next_seat(self, seat: int) -> int:
        return seat % self.num_players + 1

    def contenders(self) -> list[str]:
        return [p for p in self.players() if p not in self.folded]

    def is_active(self, pid: str) -> bool:
        return pid not in self.folded and pid not in self.all_in

    def high_bet(self) -> int:
        return max((self.bets[p] for p in self.contenders()), default=0)

    def pot(self) -> int:
        return sum(self.bets.values())

    def holes_revealed(self) -> bool:
        return "show" in self.trace

    def finished(self) -> bool:
        return bool(self.trace) and self.trace[-1] == "prize"

    def copy(self) -> "GameState":
        return replace(
            self,
            bets=dict(self.bets),
            stacks=dict(self.stacks),
            folded=set(self.folded),
            all_in=set(self.all_in),
            deck=list(self.deck),
            discards=list(self.discards),
            holes={p: list(cs) for p, cs in self.holes.items()},
            community=list(self.community),
            trace=list(self.trace),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GameState):
            return NotImplemented
        mine = self._key()
        theirs = other._key()
        if mine != theirs:
            return False
        # Discard lists may be reconstructed as unknown-but-counted.
        if self.discard_count >= 0 and other.discard_count >= 0:
            return self.discard_count == other.discard_count
        return True

    def _key(self):
        return (
            self.num_players, self.button, self.small_blind, self.big_blind,
            self.bets, self.stacks, self.folded, self.all_in, self.deck,
            {p: cs for p, cs in self.holes.items() if cs}, self.community,
            self.trace, self.to_act, self.message,
        )


@dataclass
class RoundLog:
    """A completed (or aborted) round: states plus the inputs between them."""

    script_text: str
    seed: int
    states: list[GameState]
    inputs: list[PlayerInput | None] = field(default_factory=list)
    script: "GameScript | None" = None

    def transitions(self):
        for i in range(1, len(self.states)):
            yield self.states[i - 1], self.inputs[i - 1], self.states[i]


# -- round setup --------------------------------------------------------------


def init_round(
    script: GameScript,
    seed: int,
    stacks: int | list[int] = 1000,
    button: int | None = None,
) -> GameState:
    """Shuffled deck, seats, and roles; no cards dealt yet.

    The default button sits so that the big blind lands on the last seat;
    pass `button` to rotate it (blinds follow clockwise, and heads-up the
    button doubles as the small blind).
    """
    script.validate()
    n = script.num_players
    if isinstance(stacks, int):
        stack_list = [stacks] * n
    else:
        stack_list = list(stacks)
        if len(stack_list) != n:
            raise ValueError("one stack per player required")
    if any(s <= 0 for s in stack_list):
        raise ValueError("stacks must be positive")

    deck = shuffle(build_deck(script.suits, script.rank_order), Rng(seed))
    if script.has_blinds():
        if button is None:
            button = 2 if n == 2 else n - 2
        if n == 2:
            sb = button
            bb = button % n + 1
        else:
            sb = button % n + 1
            bb = sb % n + 1
    else:
        button = button if button is not None else n
        sb = bb = None

    state = GameState(
        num_players=n,
        button=button,
        small_blind=sb,
        big_blind=bb,
        bets={f"p{i}": 0 for i in range(1, n + 1)},
        stacks={f"p{i}": stack_list[i - 1] for i in range(1, n + 1)},
        folded=set(),
        all_in=set(),
        deck=deck,
        discards=[],
        holes={f"p{i}": [] for i in range(1, n + 1)},
        community=[],
        trace=["start"],
        produced_by="start",
    )
    return state


# -- phase bookkeeping, all derivable from the serialized state ---------------


def current_phase(state: GameState, script: GameScript) -> PhaseSpec:
    """The in-progress or next phase. A lone contender jumps straight to prize."""
    if len(state.contenders()) == 1 and not state.finished():
        return PhaseSpec("prize")
    idx = len(state.trace)
    if idx >= len(script.flow):
        raise IllegalAction("the round is over")
    return script.flow[idx]


def _completed_bets(state: GameState) -> int:
    return state.trace.count("bet")


def _phase_start_seat(state: GameState, script: GameScript, kind: str) -> int:
    if kind == "bet" and script.has_blinds() and _completed_bets(state) == 0:
        return state.next_seat(state.big_blind)
    return state.next_seat(state.button)


def _baseline(state: GameState, script: GameScript) -> int:
    """The bet level a street opened at; a higher high bet means aggression."""
    if script.has_blinds() and _completed_bets(state) == 0:
        return script.min_bet
    active = [state.bets[p] for p in state.players() if state.is_active(p)]
    return min(active) if active else 0


def _endpoint_seat(state: GameState, script: GameScript, last_seat: int) -> int:
    """Seat the betting sweep ends at: the last aggressor, else the start seat."""
    high = state.high_bet()
    if high <= _baseline(state, script):
        return _phase_start_seat(state, script, "bet")
    seat = state.next_seat(last_seat)
    for _ in range(state.num_players):
        pid = state.pid(seat)
        if pid not in state.folded and state.bets[pid] == high:
            return seat
        seat = state.next_seat(seat)
    raise AssertionError("no endpoint found in a betting sweep")


def _arm_next_phase(state: GameState, script: GameScript) -> None:
    """Set the prompt for an upcoming interactive phase, if it has an actor."""
    state.to_act = None
    if state.finished() or len(state.contenders()) == 1:
        return
    idx = len(state.trace)
    if idx >= len(script.flow):
        return
    phase = script.flow[idx]
    if phase.kind not in ("bet", "switch"):
        return
    seat = _phase_start_seat(state, script, phase.kind)
    for _ in range(state.num_players):
        pid = state.pid(seat)
        if state.is_active(pid):
            state.to_act = pid
            prompt = PROMPT_BET if phase.kind == "bet" else PROMPT_SWITCH
            state.message = Message("engine", pid, prompt)
            return
        seat = state.next_seat(seat)
    # Nobody can act; the phase completes by itself on the next transition.


def _complete_phase(state: GameState, script: GameScript, phase: PhaseSpec) -> None:
    state.trace.append(phase.label())
    state.message = None
    _arm_next_phase(state, script)


def _continue_or_close(state: GameState, script: GameScript, phase: PhaseSpec, last_seat: int) -> None:
    """After a turn: prompt the next actor or close the phase."""
    if len(state.contenders()) == 1:
        _complete_phase(state, script, phase)
        return
    if phase.kind == "bet":
        endpoint = _endpoint_seat(state, script, last_seat)
    else:
        endpoint = _phase_start_seat(state, script, phase.kind)
    seat = state.next_seat(last_seat)
    for _ in range(state.num_players):
        if seat == endpoint:
            _complete_phase(state, script, phase)
            return
        pid = state.pid(seat)
        if state.is_active(pid):
            prompt = PROMPT_BET if phase.kind == "bet" else PROMPT_SWITCH
            state.to_act = pid
            state.message = Message("engine", pid, prompt)
            return
        seat = state.next_seat(seat)
    _complete_phase(state, script, phase)


# -- auto phases ---------------------------------------------------------------


def _post_blind(state: GameState, pid: str, amount: int) -> None:
    posted = min(amount, state.stacks[pid])
    state.bets[pid] += posted
    state.stacks[pid] -= posted


def _run_blind(state: GameState, script: GameScript) -> None:
    _post_blind(state, state.pid(state.small_blind), script.min_bet // 2)
    _post_blind(state, state.pid(state.big_blind), script.min_bet)


def _deal_start_seat(state: GameState) -> int:
    if state.small_blind is not None:
        return state.small_blind
    return state.next_seat(state.button)


def _run_deal(state: GameState, count: int) -> None:
    seat = _deal_start_seat(state)
    order = []
    for _ in range(state.num_players):
        pid = state.pid(seat)
        if pid not in state.folded:
            order.append(pid)
        seat = state.next_seat(seat)
    for _ in range(count):
        for pid in order:
            cards, state.deck = draw(state.deck, 1)
            state.holes[pid].extend(cards)


def _run_flop(state: GameState, count: int) -> None:
    if len(state.deck) < count + 1:
        raise DeckExhausted(f"need {count + 1} cards, deck has {len(state.deck)}")
    burned, state.deck = draw(state.deck, 1)
    state.discards.extend(burned)
    state.discard_count += 1
    revealed, state.deck = draw(state.deck, count)
    state.community.extend(revealed)


def _winner_sets(state: GameState, script: GameScript) -> list[list[str]]:
    contenders = state.contenders()
    if len(contenders) == 1:
        return [contenders]
    if state.winners_memo and state.winners_memo[0] == tuple(contenders):
        return [list(group) for group in state.winners_memo[1]]
    holes = {p: state.holes[p] for p in contenders}
    sets = [sorted(s, key=state.seat) for s in evaluator.winners(holes, state.community, script)]
    state.winners_memo = (tuple(contenders), tuple(tuple(g) for g in sets))
    return sets


def _set_labels(script: GameScript) -> tuple[str, str]:
    split = script.get_rule("high_low_split")
    if split and split.params.get("high") == "badugi":
        return ("low", "badugi")
    return ("high", "low")


def _run_show(state: GameState, script: GameScript) -> None:
    sets = _winner_sets(state, script)
    if len(sets) == 1:
        names = ", ".join(sets[0])
        verb = "wins" if len(sets[0]) == 1 else "win"
        text = f"Showdown: {names} {verb}."
    else:
        labels = _set_labels(script)
        parts = [f"{label}: {', '.join(group)}" for label, group in zip(labels, sets)]
        text = "Showdown: " + "; ".join(parts) + "."
    state.message = Message("engine", "all", text)


def _run_prize(state: GameState, script: GameScript) -> str:
    sets = _winner_sets(state, script)
    pot = state.pot()
    portions = [pot]
    if len(sets) == 2:
        portions = [(pot + 1) // 2, pot // 2]
    payouts: dict[str, int] = {}
    for group, portion in zip(sets, portions):
        share, remainder = divmod(portion, len(group))
        for pid in group:
            payouts[pid] = payouts.get(pid, 0) + share
        if remainder:
            payouts[_first_after_button(state, group)] += remainder
    for pid, amount in payouts.items():
        state.stacks[pid] += amount
    for pid in state.players():
        state.bets[pid] = 0
    ordered = [p for p in state.players() if payouts.get(p)]
    return " ".join(f"{p} wins {payouts[p]}." for p in ordered)


def _first_after_button(state: GameState, group: list[str]) -> str:
    seat = state.next_seat(state.button)
    for _ in range(state.num_players):
        pid = state.pid(seat)
        if pid in group:
            return pid
        seat = state.next_seat(seat)
    raise AssertionError("winner not seated")


# -- player turns ---------------------------------------------------------------


def _raise_bounds(state: GameState, script: GameScript, pid: str) -> tuple[int, int]:
    lo = state.high_bet() + script.min_bet
    hi = min(script.max_bet, state.bets[pid] + state.stacks[pid])
    return lo, hi


def _apply_bet_action(state: GameState, script: GameScript, inp: PlayerInput) -> None:
    pid = inp.player
    high = state.high_bet()
    if inp.kind == "check":
        if state.bets[pid] != high:
            raise IllegalAction("check is allowed only when the bet already matches the highest bet")
    elif inp.kind == "call":
        need = high - state.bets[pid]
        if need <= 0:
            raise IllegalAction("nothing to call; check instead")
        if need > state.stacks[pid]:
            raise IllegalAction("not enough chips to call")
        state.bets[pid] += need
        state.stacks[pid] -= need
    elif inp.kind == "raise_to":
        lo, hi = _raise_bounds(state, script, pid)
        if inp.amount is None or inp.amount < lo or inp.amount > hi:
            raise IllegalAction(f"raise must be between {lo} and {hi}")
        delta = inp.amount - state.bets[pid]
        state.bets[pid] = inp.amount
        state.stacks[pid] -= delta
    elif inp.kind == "fold":
        state.discards.extend(state.holes[pid])
        state.discard_count += len(state.holes[pid])
        state.holes[pid] = []
        state.folded.add(pid)
    elif inp.kind == "all_in":
        if not script.has_rule("all_in_allowed"):
            raise IllegalAction("this game has no all-in operation")
        if state.stacks[pid] == 0:
            raise IllegalAction("no chips left to push")
        state.bets[pid] += state.stacks[pid]
        state.stacks[pid] = 0
        state.all_in.add(pid)
    else:
        raise IllegalAction(f"{inp.kind} is not a betting action")


def _apply_switch_action(state: GameState, inp: PlayerInput) -> None:
    pid = inp.player
    if inp.kind != "switch":
        raise IllegalAction(f"{inp.kind} is not allowed during a switch phase")
    cards = inp.cards or []
    hand = list(state.holes[pid])
    for card in cards:
        if card not in hand:
            raise IllegalAction(f"{card} is not in {pid}'s hand")
        hand.remove(card)
    if len(cards) > len(state.deck):
        raise IllegalAction("the deck cannot cover that switch")
    state.discards.extend(cards)
    state.discard_count += len(cards)
    for card in cards:
        state.holes[pid].remove(card)
    drawn, state.deck = draw(state.deck, len(cards))
    state.holes[pid].extend(drawn)


# -- the transition function -----------------------------------------------------


def next_state(state: GameState, inp: PlayerInput | None, script: GameScript) -> GameState:
    """Compute the following state. Pure: errors leave the input state intact."""
    if state.finished():
        raise IllegalAction("the round is over")

    if state.to_act is not None:
        if inp is None:
            raise IllegalAction(f"an action from {state.to_act} is required")
        if inp.player not in state.players():
            raise UnknownPlayer(inp.player)
        if inp.player != state.to_act:
            raise IllegalAction(f"it is {state.to_act}'s turn, not {inp.player}'s")
        phase = current_phase(state, script)
        new = state.copy()
        if phase.kind == "bet":
            _apply_bet_action(new, script, inp)
        elif phase.kind == "switch":
            _apply_switch_action(new, inp)
        else:
            raise IllegalAction(f"no player action fits a {phase.kind} phase")
        last_seat = new.seat(inp.player)
        _continue_or_close(new, script, phase, last_seat)
        new.produced_by = phase.kind
        return new

    if inp is not None:
        raise IllegalAction("no player action is expected right now")
    phase = current_phase(state, script)
    new = state.copy()
    announcement = None
    if phase.kind == "shuffle":
        pass  # ordering is fixed at start; the label still enters the trace
    elif phase.kind == "blind":
        _run_blind(new, script)
    elif phase.kind == "deal":
        _run_deal(new, phase.count)
    elif phase.kind == "flop":
        _run_flop(new, phase.count)
    elif phase.kind == "show":
        pass  # holes become public; winners are announced below
    elif phase.kind == "prize":
        announcement = _run_prize(new, script)
    elif phase.kind in ("bet", "switch"):
        # An interactive phase nobody can act in: it completes untouched.
        pass
    else:
        raise AssertionError(f"unhandled phase {phase.kind}")
    _complete_phase(new, script, phase)
    if phase.kind == "show":
        _run_show(new, script)
    elif announcement is not None:
        new.message = Message("engine", "all", announcement)
    new.produced_by = phase.kind
    return new


# -- legal action enumeration ------------------------------------------------------


def legal_actions(state: GameState, script: GameScript, pid: str) -> list[dict]:
    """Concrete options for one player; empty unless it is their turn."""
    if pid not in state.players():
        raise UnknownPlayer(pid)
    if state.finished() or state.to_act != pid:
        return []
    phase = current_phase(state, script)
    actions: list[dict] = []
    if phase.kind == "bet":
        high = state.high_bet()
        if state.bets[pid] == high:
            actions.append({"kind": "check", "text": "Check."})
        need = high - state.bets[pid]
        if 0 < need <= state.stacks[pid]:
            actions.append({"kind": "call", "text": "Call.", "amount": need})
        lo, hi = _raise_bounds(state, script, pid)
        if lo <= hi:
            actions.append({"kind": "raise_to", "min": lo, "max": hi})
        actions.append({"kind": "fold", "text": "Fold."})
        if script.has_rule("all_in_allowed") and state.stacks[pid] > 0:
            actions.append({"kind": "all_in", "text": "All-in."})
    elif phase.kind == "switch":
        max_cards = min(len(state.holes[pid]), len(state.deck))
        actions.append({
            "kind": "switch",
            "max_cards": max_cards,
            "hand": [str(c) for c in state.holes[pid]],
        })
    return actions


# -- whole rounds -------------------------------------------------------------------


class RandomAgent:
    """Uniform choice among the legal action kinds; bounded values drawn uniformly."""

    def __init__(self, rng: Rng):
        self.rng = rng

    def act(self, state: GameState, script: GameScript, options: list[dict]) -> PlayerInput:
        pid = state.to_act
        choice = options[self.rng.below(len(options))]
        kind = choice["kind"]
        if kind == "raise_to":
            return PlayerInput(pid, "raise_to", amount=self.rng.randint(choice["min"], choice["max"]))
        if kind == "switch":
            hand = [parse_card(c) for c in choice["hand"]]
            count = self.rng.randint(0, choice["max_cards"])
            return PlayerInput(pid, "switch", cards=self.rng.sample(hand, count))
        return PlayerInput(pid, kind)


class WeightedAgent:
    """Random player with casual-table weights: folds rarely, raises small.

    Kind-uniform play folds a third of all turns and collapses most rounds
    into early walkovers, which starves the showdown statistics the data
    tooling needs; these weights keep rounds alive without any card sense.
    """

    WEIGHTS = {"check": 40, "call": 40, "raise_to": 12, "fold": 6, "all_in": 2, "switch": 1}

    def __init__(self, rng: Rng):
        self.rng = rng

    def act(self, state: GameState, script: GameScript, options: list[dict]) -> PlayerInput:
        pid = state.to_act
        weighted = [(o, self.WEIGHTS.get(o["kind"], 1)) for o in options]
        pick = self.rng.below(sum(w for _, w in weighted))
        choice = weighted[-1][0]
        for option, w in weighted:
            if pick < w:
                choice = option
                break
            pick -= w
        kind = choice["kind"]
        if kind == "raise_to":
            step = script.min_bet * self.rng.randint(1, 4)
            amount = min(choice["max"], max(choice["min"], state.high_bet() + step))
            return PlayerInput(pid, "raise_to", amount=amount)
        if kind == "switch":
            hand = [parse_card(c) for c in choice["hand"]]
            keep = [c for c in hand if self.rng.below(2)][: choice["max_cards"]]
            return PlayerInput(pid, "switch", cards=keep)
        return PlayerInput(pid, kind)


def run_round(
    script: GameScript,
    seed: int,
    agents: dict[str, object] | None = None,
    stacks: int | list[int] = 1000,
    script_text: str | None = None,
    max_steps: int = 10_000,
) -> RoundLog:
    """Play a full round. Unassigned seats use the weighted random agent."""
    from .script import serialize_script

    state = init_round(script, seed, stacks)
    shared = WeightedAgent(Rng(seed).fork(0xA2D1))
    agents = agents or {}
    log = RoundLog(
        script_text=script_text if script_text is not None else serialize_script(script),
        seed=seed,
        states=[state],
        script=script,
    )
    for _ in range(max_steps):
        if state.finished():
            return log
        if state.to_act is None:
            inp = None
        else:
            agent = agents.get(state.to_act, shared)
            inp = agent.act(state, script, legal_actions(state, script, state.to_act))
        state = next_state(state, inp, script)
        log.inputs.append(inp)
        log.states.append(state)
    raise RuntimeError("round did not finish within the step limit")


# -- redacted views -------------------------------------------------------------------


@dataclass(frozen=True)
class PlayerView:
    """What one seat (or a spectator) is allowed to see, as state text."""

    viewer: str | None
    text: str


def redact(state: GameState, player: str | None) -> PlayerView:
    """Strip the deck and everyone else's hole cards (until the showdown)."""
    if player is not None and player not in state.players():
        raise UnknownPlayer(player)
    from .statelang import serialize_view

    return PlayerView(player, serialize_view(state, player))
