"""Game script data model: the structured DSL, validation, and predicates.

A script has seven configurable elements (players, suits, card ranking,
combination ranking, bet limits, flow) plus an enumerated set of specific
rules expressed as fixed natural-language sentences. Anything outside the
sentence bank is an error, never silently ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import evaluator


class ScriptError(Exception):
    pass


class ScriptSyntaxError(ScriptError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.message = message


class UnknownPredicate(ScriptError):
    def __init__(self, sentence: str):
        super().__init__(f"unrecognized specific rule: {sentence!r}")
        self.sentence = sentence


class ValidationError(ScriptError):
    pass


PHASE_KINDS = ("start", "shuffle", "blind", "deal", "bet", "flop", "switch", "show", "prize")


@dataclass(frozen=True)
class PhaseSpec:
    kind: str
    count: int | None = None

    def label(self) -> str:
        if self.kind in ("deal", "flop"):
            return f"{self.kind}{self.count}"
        return self.kind

    @classmethod
    def from_label(cls, token: str) -> "PhaseSpec":
        m = re.fullmatch(r"(deal|flop)(\d+)", token)
        if m:
            return cls(m.group(1), int(m.group(2)))
        if token in PHASE_KINDS and token not in ("deal", "flop"):
            return cls(token)
        raise ValueError(f"unknown flow phase: {token!r}")


@dataclass(frozen=True)
class RulePredicate:
    """One enumerated specific rule, e.g. low hand wins or a new combination."""

    id: str
    params: dict = field(default_factory=dict, hash=False, compare=True)

    def __hash__(self):
        return hash((self.id, tuple(sorted(self.params.items()))))


@dataclass
class GameScript:
    num_players: int
    suits: list[str]
    rank_order: list[int]
    hand_rank: list[str]
    min_bet: int
    max_bet: int
    flow: list[PhaseSpec]
    rules: list[RulePredicate] = field(default_factory=list)

    # -- rule helpers -------------------------------------------------------

    def has_rule(self, rule_id: str) -> bool:
        return any(r.id == rule_id for r in self.rules)

    def get_rule(self, rule_id: str) -> RulePredicate | None:
        for r in self.rules:
            if r.id == rule_id:
                return r
        return None

    def hand_size(self) -> int:
        """Declared hand size, or 5 capped by what a player can ever see."""
        rule = self.get_rule("hand_size")
        if rule:
            return rule.params["k"]
        return max(1, min(5, self.deal_total() + self.flop_total()))

    def effective_hand_rank(self) -> list[str]:
        """Lattice with Small Straight slotted just below Straight when declared."""
        lattice = list(self.hand_rank)
        if self.has_rule("small_straight") and "Straight" in lattice and "Small Straight" not in lattice:
            lattice.insert(lattice.index("Straight"), "Small Straight")
        return lattice

    def deck_size(self) -> int:
        return len(self.suits) * len(self.rank_order)

    def deal_total(self) -> int:
        return sum(p.count for p in self.flow if p.kind == "deal")

    def flop_total(self) -> int:
        return sum(p.count for p in self.flow if p.kind == "flop")

    def has_blinds(self) -> bool:
        return any(p.kind == "blind" for p in self.flow)

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        if self.num_players < 2:
            raise ValidationError("at least 2 players required")
        if len(self.suits) < 1:
            raise ValidationError("at least one suit required")
        if len(set(self.suits)) != len(self.suits):
            raise ValidationError("duplicate suits")
        if any(len(s) != 1 or not s.isalpha() for s in self.suits):
            raise ValidationError("suits must be single letters")
        if len(self.rank_order) < 2:
            raise ValidationError("at least two ranks required")
        if len(set(self.rank_order)) != len(self.rank_order):
            raise ValidationError("duplicate rank labels")
        if any(r <= 0 for r in self.rank_order):
            raise ValidationError("rank labels must be positive integers")
        if self.min_bet < 2 or self.min_bet % 2 != 0:
            raise ValidationError("minimum bet must be an even number of at least 2")
        if self.min_bet > self.max_bet:
            raise ValidationError("minimum bet exceeds maximum bet")
        self._validate_flow()
        self._validate_rules()

    def _validate_flow(self) -> None:
        if not self.flow or self.flow[0].kind != "start":
            raise ValidationError("flow must begin with start")
        if self.flow[-1].kind != "prize":
            raise ValidationError("flow must end with prize")
        kinds = [p.kind for p in self.flow]
        if kinds.count("start") != 1 or kinds.count("prize") != 1:
            raise ValidationError("start and prize must each appear exactly once")
        if kinds.count("show") != 1:
            raise ValidationError("flow needs exactly one show phase")
        if kinds.index("show") > kinds.index("prize"):
            raise ValidationError("show must precede prize")
        if kinds.count("blind") > 1:
            raise ValidationError("at most one blind phase")
        if "blind" in kinds and kinds.index("blind") > kinds.index("show"):
            raise ValidationError("blind must come before the showdown")
        for p in self.flow:
            if p.kind in ("deal", "flop") and (p.count is None or p.count < 1):
                raise ValidationError(f"{p.kind} needs a positive card count")
        first_deal = kinds.index("deal") if "deal" in kinds else None
        for i, k in enumerate(kinds):
            if k in ("switch", "show") and (first_deal is None or i < first_deal):
                raise ValidationError(f"{k} cannot come before the first deal")

    def _validate_rules(self) -> None:
        known_new = {r.params["name"] for r in self.rules if r.id == "new_combination"}
        for name in self.hand_rank:
            if name not in evaluator.BUILTIN_COMBINATIONS and name not in known_new:
                raise ValidationError(f"unknown combination in hand ranking: {name!r}")
        if len(set(self.hand_rank)) != len(self.hand_rank):
            raise ValidationError("duplicate combination in hand ranking")
        for r in self.rules:
            if r.id == "new_combination" and r.params["detector"] not in evaluator.NEW_COMBINATION_DETECTORS:
                raise ValidationError(f"unknown detector {r.params['detector']!r}")
        if not self.hand_rank and not self.has_rule("badugi_ranking"):
            raise ValidationError("no hand ranking and no alternative ranking rule")
        k = self.hand_size()
        if k < 1:
            raise ValidationError("hand size must be positive")
        # Lattice-free scripts (alternative ranking only) evaluate whatever
        # cards a player holds, so the hand-size bound does not apply; the
        # implicit default already adapts to the visible-card budget.
        if self.get_rule("hand_size") and self.hand_rank and self.deal_total() + self.flop_total() < k:
            raise ValidationError(
                f"hand size {k} exceeds the {self.deal_total() + self.flop_total()} cards a player can see"
            )
        omaha = self.get_rule("omaha_constraint")
        if omaha:
            h, c = omaha.params["holes"], omaha.params["community"]
            if h + c != k:
                raise ValidationError("hole/community split must add up to the hand size")
            if self.deal_total() < h:
                raise ValidationError("not enough hole cards dealt for the hole/community split")
            if self.flop_total() < c:
                raise ValidationError("not enough community cards for the hole/community split")
        split = self.get_rule("high_low_split")
        if split and split.params["high"] == "badugi" and not self.has_rule("badugi_ranking"):
            raise ValidationError("a badugi split needs the badugi ranking rule")


# -- specific-rule sentence bank --------------------------------------------
#
# Each entry: (predicate id, compiled pattern, renderer). The sentences are
# the closed set of rule descriptions the engine understands; parsing
# anything else raises UnknownPredicate.

_NUM = r"(\d+)"


def _norm_sentence(text: str) -> str:
    text = text.replace("``", '"').replace("''", '"').replace("`", '"')
    text = text.replace("‘", '"').replace("’", '"')
    text = text.replace("“", '"').replace("”", '"')
    return re.sub(r"\s+", " ", text).strip()


_BADUGI_SENTENCE = (
    'In showdown, define a new ranking strategy called "Badugi". In given cards, '
    "pick out the cards of distinct suits and no pair. If there are more than one "
    "cards of the same suit or same value, choose the smaller-ranking one. Hence, "
    "the greatest Badugi refers to the most number of distinct cards and the smallest values."
)

_BADUGI_SPLIT_SENTENCE = (
    "Pick out the players with the lowest combinations of cards and greatest Badugi "
    "as the winners, and split the prize pool equally, and one portion for the winners "
    "of the lowest combination, and the other portion for the winners of the greatest Badugi."
)

_RULE_BANK: list[tuple[str, re.Pattern, object]] = []


def _bank(rule_id: str, pattern: str, render):
    _RULE_BANK.append((rule_id, re.compile(pattern, re.IGNORECASE), render))


_bank(
    "low_wins",
    r"In showdown, pick out the players with the lowest combination of cards as the winners\.?",
    lambda p: "In showdown, pick out the players with the lowest combination of cards as the winners.",
)
_bank(
    "omaha_constraint",
    rf"In showdown, only a combination of {_NUM} hole cards? and {_NUM} community cards? "
    r"can be used to form the optimal cards\.?",
    lambda p: (
        f"In showdown, only a combination of {p['holes']} hole cards and "
        f"{p['community']} community cards can be used to form the optimal cards."
    ),
)
_bank(
    "badugi_ranking",
    r'In showdown, define a new ranking strategy called "Badugi"\. In given cards, '
    r"pick out the cards of distinct suits and no pair\. If there are more than one "
    r"cards of the same suit or same value, choose the smaller-ranking one\. Hence, "
    r"the greatest Badugi refers to the (?:the )?most number of distinct cards and the smallest values\.?",
    lambda p: _BADUGI_SENTENCE,
)
_bank(
    "high_low_split",
    r"Pick out the players with the lowest combinations of cards and greatest Badugi "
    r"as the winners, and split the prize pool equally, and one portion for the winners "
    r"of the lowest combination, and the other portion for the winners of the greatest Badugi\.?",
    lambda p: _BADUGI_SPLIT_SENTENCE,
)
_bank(
    "high_low_split_lattice",
    r"In showdown, the players with the highest combination of cards and the players "
    r"with the lowest combination of cards split the prize pool equally\.?",
    lambda p: (
        "In showdown, the players with the highest combination of cards and the "
        "players with the lowest combination of cards split the prize pool equally."
    ),
)
_bank(
    "small_straight",
    r'Define a new combination "Small Straight"\. It allows the highest-ranking card '
    r"to be used as the lowest-ranking when forming the straight\. "
    r"A small straight is smaller than a standard(?: straight)?\.?",
    lambda p: (
        'Define a new combination "Small Straight". It allows the highest-ranking card '
        "to be used as the lowest-ranking when forming the straight. "
        "A small straight is smaller than a standard straight."
    ),
)
_bank(
    "all_in_allowed",
    r'Define a new player operation in the phase of bet "All-in"\. The player puts all '
    r"his remaining chips into the pot, and is no longer able to make further bet during the game\.?",
    lambda p: (
        'Define a new player operation in the phase of bet "All-in". The player puts all '
        "his remaining chips into the pot, and is no longer able to make further bet during the game."
    ),
)
_bank(
    "hand_size",
    rf"A hand is made up of {_NUM} cards\.?",
    lambda p: f"A hand is made up of {p['k']} cards.",
)
_bank(
    "new_combination_three_pairs",
    r'Define a new combination "Three Pair": there are three pairs of distinct numbers\.?',
    lambda p: 'Define a new combination "Three Pair": there are three pairs of distinct numbers.',
)
_bank(
    "new_combination_two_triples",
    r'Define a new combination "Big House": there are two pairs of three of one kind\.?',
    lambda p: 'Define a new combination "Big House": there are two pairs of three of one kind.',
)


def parse_rule_sentence(sentence: str) -> RulePredicate:
    text = _norm_sentence(sentence)
    for rule_id, pattern, _ in _RULE_BANK:
        m = pattern.fullmatch(text)
        if not m:
            continue
        if rule_id == "omaha_constraint":
            return RulePredicate(rule_id, {"holes": int(m.group(1)), "community": int(m.group(2))})
        if rule_id == "hand_size":
            return RulePredicate(rule_id, {"k": int(m.group(1))})
        if rule_id == "high_low_split":
            return RulePredicate(rule_id, {"high": "badugi", "low": "lattice"})
        if rule_id == "high_low_split_lattice":
            return RulePredicate("high_low_split", {"high": "lattice", "low": "lattice"})
        if rule_id == "new_combination_three_pairs":
            return RulePredicate("new_combination", {"name": "Three Pair", "detector": "three_pairs"})
        if rule_id == "new_combination_two_triples":
            return RulePredicate("new_combination", {"name": "Big House", "detector": "two_triples"})
        return RulePredicate(rule_id, {})
    raise UnknownPredicate(sentence)


def render_rule(rule: RulePredicate) -> str:
    if rule.id == "high_low_split":
        if rule.params.get("high") == "badugi":
            return _BADUGI_SPLIT_SENTENCE
        return (
            "In showdown, the players with the highest combination of cards and the "
            "players with the lowest combination of cards split the prize pool equally."
        )
    if rule.id == "new_combination":
        detector = rule.params["detector"]
        if detector == "three_pairs":
            return 'Define a new combination "Three Pair": there are three pairs of distinct numbers.'
        return 'Define a new combination "Big House": there are two pairs of three of one kind.'
    for rule_id, _, render in _RULE_BANK:
        if rule_id == rule.id:
            return render(rule.params)
    raise ValueError(f"no sentence for rule {rule.id!r}")


# -- combination-name aliases ------------------------------------------------

_COMBO_ALIASES = {
    "3 of a kind": "Three of a Kind",
    "4 of a kind": "Four of a Kind",
    "one pair": "Pair",
}


def _canon_combo(name: str) -> str:
    name = re.sub(r"\s+", " ", name).strip()
    return _COMBO_ALIASES.get(name.lower(), name)


# -- parsing ------------------------------------------------------------------

_SUIT_ITEM = re.compile(r"^(?:[A-Za-z]+ )?\(?([A-Za-z])\)?$")


def _parse_suits(value: str, line_no: int) -> list[str]:
    suits = []
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        m = re.fullmatch(r"[A-Za-z][A-Za-z']* \(([A-Za-z])\)", item) or re.fullmatch(r"([A-Za-z])", item)
        if not m:
            raise ScriptSyntaxError(line_no, f"bad suit entry: {item!r}")
        suits.append(m.group(1))
    if not suits:
        raise ScriptSyntaxError(line_no, "empty suit list")
    return suits


def parse_script(text: str) -> GameScript:
    """Parse the canonical DSL. The result is validated before returning."""
    fields: dict[str, object] = {}
    rules: list[RulePredicate] = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i]
        line = raw.strip()
        i += 1
        if not line:
            continue
        if line == "Specific Rules:":
            rules = _parse_rules_block(lines[i:], i)
            break
        if ":" not in line:
            raise ScriptSyntaxError(i, f"expected 'Key: value', got {line!r}")
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "Number of players":
            if not value.isdigit():
                raise ScriptSyntaxError(i, f"bad player count: {value!r}")
            fields["num_players"] = int(value)
        elif key == "Suit":
            fields["suits"] = _parse_suits(value, i)
        elif key == "Card Rank":
            try:
                fields["rank_order"] = [int(tok.strip()) for tok in value.split("<")]
            except ValueError:
                raise ScriptSyntaxError(i, f"bad card ranking: {value!r}") from None
        elif key == "Hand Rank":
            fields["hand_rank"] = [_canon_combo(tok) for tok in value.split("<")]
        elif key == "Min / Max bet":
            m = re.fullmatch(r"(\d+)\s*/\s*(\d+)", value)
            if not m:
                raise ScriptSyntaxError(i, f"bad bet limits: {value!r}")
            fields["min_bet"], fields["max_bet"] = int(m.group(1)), int(m.group(2))
        elif key == "Flow":
            try:
                fields["flow"] = [PhaseSpec.from_label(tok.strip()) for tok in value.split("->")]
            except ValueError as exc:
                raise ScriptSyntaxError(i, str(exc)) from None
        else:
            raise ScriptSyntaxError(i, f"unknown key: {key!r}")

    missing = [k for k in ("num_players", "suits", "rank_order", "min_bet", "flow") if k not in fields]
    if missing:
        raise ValidationError(f"missing script elements: {', '.join(missing)}")
    script = GameScript(
        num_players=fields["num_players"],
        suits=fields["suits"],
        rank_order=fields["rank_order"],
        hand_rank=fields.get("hand_rank", []),
        min_bet=fields["min_bet"],
        max_bet=fields["max_bet"],
        flow=fields["flow"],
        rules=rules,
    )
    script.validate()
    return script


def _parse_rules_block(lines: list[str], offset: int) -> list[RulePredicate]:
    """Numbered items are separate rules; an unnumbered block is one rule."""
    items: list[str] = []
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        m = re.match(r"^(\d+)\.\s+(.*)$", line)
        if m:
            items.append(m.group(2))
        elif items and not _looks_like_new_rule(line):
            items[-1] += " " + line
        else:
            items.append(line)
    return [parse_rule_sentence(item) for item in items]


def _looks_like_new_rule(line: str) -> bool:
    return bool(re.match(r"^(In showdown|Define a new|Pick out|A hand is)", line))


def serialize_script(script: GameScript) -> str:
    """Canonical DSL text; parse_script round-trips it to an equal script."""
    lines = [
        f"Number of players: {script.num_players}",
        "Suit: " + ", ".join(script.suits),
        "Card Rank: " + "<".join(str(r) for r in script.rank_order),
    ]
    if script.hand_rank:
        lines.append("Hand Rank: " + "<".join(script.hand_rank))
    lines.append(f"Min / Max bet: {script.min_bet} / {script.max_bet}")
    lines.append("Flow: " + "->".join(p.label() for p in script.flow))
    if script.rules:
        lines.append("Specific Rules:")
        if len(script.rules) == 1:
            lines.append(render_rule(script.rules[0]))
        else:
            for n, rule in enumerate(script.rules, start=1):
                lines.append(f"{n}. {render_rule(rule)}")
    return "\n".join(lines) + "\n"
