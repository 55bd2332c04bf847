"""The pipe-delimited state text: canonical serializer, parser, and diff.

Line order is fixed: order, chip, stack, hole, community (when present),
the phase trace, then at most one message. Text is UTF-8 with LF endings
and no trailing whitespace; two states serialize to the same bytes exactly
when they are the same state.
"""

from __future__ import annotations

import re

from .cards import Card, parse_card
from .engine import GameState, Message
from .script import GameScript, PhaseSpec


class StateParseError(Exception):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


_CHIP_ENTRY = re.compile(r"^(p\d+): (\d+)/(\d+)( \(all-in\)| \(folded\))?$")
_ORDER_ENTRY = re.compile(r"^(p\d+)( \((button|small blind|big blind)(, (small blind|big blind))?\))?$")
_PLAYER = re.compile(r"^p\d+$")


def _order_line(state: GameState) -> str:
    parts = []
    for i in range(1, state.num_players + 1):
        roles = []
        if i == state.button:
            roles.append("button")
        if i == state.small_blind:
            roles.append("small blind")
        if i == state.big_blind:
            roles.append("big blind")
        tag = f" ({', '.join(roles)})" if roles else ""
        parts.append(f"p{i}{tag}")
    return "|order|" + "|".join(parts)


def _chip_line(state: GameState) -> str:
    parts = []
    for pid in state.players():
        entry = f"{pid}: {state.bets[pid]}/{state.stacks[pid]}"
        if pid in state.all_in:
            entry += " (all-in)"
        if pid in state.folded:
            entry += " (folded)"
        parts.append(entry)
    return "|chip|" + "|".join(parts)


def _hole_line(state: GameState, viewers: set[str] | None = None) -> str | None:
    parts = []
    for pid in state.players():
        cards = state.holes[pid]
        if not cards:
            continue
        if viewers is not None and pid not in viewers:
            continue
        parts.append(pid + "|" + "|".join(str(c) for c in cards))
    if not parts:
        return None
    return "|hole|" + "|".join(parts)


def _message_line(msg: Message) -> str:
    return f"|message|{msg.frm}|{msg.to}|{msg.text}"


def _lines(state: GameState, include_stack: bool, hole_viewers: set[str] | None) -> list[str]:
    lines = [_order_line(state), _chip_line(state)]
    if include_stack:
        lines.append("|stack" + "".join(f"|{c}" for c in state.deck))
    hole = _hole_line(state, hole_viewers)
    if hole:
        lines.append(hole)
    if state.community:
        lines.append("|community|" + "|".join(str(c) for c in state.community))
    lines.append("|" + "|".join(state.trace))
    if state.message:
        lines.append(_message_line(state.message))
    return lines


def serialize_state(state: GameState) -> str:
    """Canonical global-view text for one state."""
    return "\n".join(_lines(state, include_stack=True, hole_viewers=None))


def serialize_view(state: GameState, viewer: str | None) -> str:
    """Redacted text: no deck, and only holes the viewer is entitled to see."""
    if state.holes_revealed():
        viewers = None  # the showdown made every remaining hand public
    elif viewer is None:
        viewers = set()
    else:
        viewers = {viewer}
    return "\n".join(_lines(state, include_stack=False, hole_viewers=viewers))


def serialize_input(inp) -> str:
    """The player's turn as its own message line."""
    msg = inp.to_message()
    return _message_line(msg)


def parse_state(text: str, script: GameScript | None = None) -> GameState:
    """Rebuild a GameState from its text.

    The discard pile is hidden; with a script at hand its size is recovered
    from card conservation, otherwise it is marked unknown (-1).
    """
    order: list[tuple[str, list[str]]] | None = None
    chips: dict[str, tuple[int, int, str | None]] = {}
    deck: list[Card] | None = None
    holes: dict[str, list[Card]] = {}
    community: list[Card] = []
    trace: list[str] | None = None
    message: Message | None = None

    for no, line in enumerate(text.splitlines(), start=1):
        if not line.startswith("|"):
            raise StateParseError(no, "every line starts with '|'")
        body = line[1:]
        key = body.split("|", 1)[0]
        if key == "order":
            order = []
            for entry in body.split("|")[1:]:
                m = _ORDER_ENTRY.fullmatch(entry)
                if not m:
                    raise StateParseError(no, f"bad order entry {entry!r}")
                roles = []
                if m.group(2):
                    roles = [r.strip() for r in m.group(2)[2:-1].split(",")]
                order.append((m.group(1), roles))
        elif key == "chip":
            for entry in body.split("|")[1:]:
                m = _CHIP_ENTRY.fullmatch(entry)
                if not m:
                    raise StateParseError(no, f"bad chip entry {entry!r}")
                marker = m.group(4).strip(" ()") if m.group(4) else None
                chips[m.group(1)] = (int(m.group(2)), int(m.group(3)), marker)
        elif key == "stack":
            toks = body.split("|")[1:]
            try:
                deck = [parse_card(t) for t in toks if t]
            except ValueError as exc:
                raise StateParseError(no, str(exc)) from None
        elif key == "hole":
            current = None
            for tok in body.split("|")[1:]:
                if _PLAYER.fullmatch(tok):
                    current = tok
                    holes[current] = []
                elif current is None:
                    raise StateParseError(no, "hole cards before any player id")
                else:
                    try:
                        holes[current].append(parse_card(tok))
                    except ValueError as exc:
                        raise StateParseError(no, str(exc)) from None
        elif key == "community":
            try:
                community = [parse_card(t) for t in body.split("|")[1:]]
            except ValueError as exc:
                raise StateParseError(no, str(exc)) from None
        elif key == "message":
            parts = body.split("|", 3)
            if len(parts) != 4:
                raise StateParseError(no, "message needs from, to, and text")
            message = Message(parts[1], parts[2], parts[3])
        else:
            labels = body.split("|")
            for lab in labels:
                try:
                    PhaseSpec.from_label(lab)
                except ValueError:
                    raise StateParseError(no, f"unknown line or phase label {lab!r}") from None
            trace = labels

    if order is None:
        raise StateParseError(0, "missing order line")
    if trace is None:
        raise StateParseError(0, "missing phase trace line")
    if deck is None:
        raise StateParseError(0, "missing stack line")

    n = len(order)
    players = [pid for pid, _ in order]
    if players != [f"p{i}" for i in range(1, n + 1)]:
        raise StateParseError(0, "players must be p1..pn in seat order")
    button = small = big = None
    for pid, roles in order:
        if "button" in roles:
            button = int(pid[1:])
        if "small blind" in roles:
            small = int(pid[1:])
        if "big blind" in roles:
            big = int(pid[1:])
    if button is None:
        raise StateParseError(0, "no button in the order line")
    if set(chips) != set(players):
        raise StateParseError(0, "chip line must cover every seated player")
    for pid in holes:
        if pid not in chips:
            raise StateParseError(0, f"hole cards for unknown player {pid}")

    state = GameState(
        num_players=n,
        button=button,
        small_blind=small,
        big_blind=big,
        bets={p: chips[p][0] for p in players},
        stacks={p: chips[p][1] for p in players},
        folded={p for p in players if chips[p][2] == "folded"},
        all_in={p for p in players if chips[p][2] == "all-in"},
        deck=deck,
        discards=[],
        holes={p: holes.get(p, []) for p in players},
        community=community,
        trace=trace,
        message=message,
        discard_count=-1,
    )
    if message and message.frm == "engine" and message.to != "all":
        state.to_act = message.to
    if script is not None:
        visible = len(deck) + sum(len(h) for h in holes.values()) + len(community)
        state.discard_count = script.deck_size() - visible
    return state


def line_key(line: str) -> str:
    """Which part of the state a text line belongs to."""
    if not line.startswith("|"):
        return "other"
    head = line[1:].split("|", 1)[0]
    if head in ("order", "chip", "stack", "hole", "community", "message"):
        return head
    return "trace"


def diff_states(expected: str, actual: str) -> list[tuple[str, str | None, str | None]]:
    """Positional line diff: (line key, expected line, actual line) triples.

    Empty exactly when the two texts are byte-equal; line order matters.
    """
    exp_lines = expected.splitlines()
    act_lines = actual.splitlines()
    out = []
    for i in range(max(len(exp_lines), len(act_lines))):
        e = exp_lines[i] if i < len(exp_lines) else None
        a = act_lines[i] if i < len(act_lines) else None
        if e != a:
            out.append((line_key(e if e is not None else a), e, a))
    return out
