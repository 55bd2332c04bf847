"""Seeded, information-preserving rephrasing of script elements.

Each structured element owns a small bank of natural-language templates.
Rephrasing swaps selected element lines for a rendered template; every
template is invertible, so a rephrased script parses back to the original
script. The specific-rules block is already prose and passes through.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .rng import Rng
from .script import GameScript, PhaseSpec, ScriptError, parse_script, serialize_script, _parse_rules_block


class UnrecognizedTemplate(ScriptError):
    def __init__(self, line: str):
        super().__init__(f"no template matches: {line!r}")
        self.line = line


@dataclass(frozen=True)
class RephraseConfig:
    seed: int
    element_probability: float = 0.4
    whole_script_probability: float = 0.02

    def __post_init__(self):
        if not 0.0 <= self.element_probability <= 1.0:
            raise ValueError("element probability must be within [0, 1]")
        if not 0.0 <= self.whole_script_probability <= 0.05:
            raise ValueError("whole-script probability must stay at or below 0.05")


# -- small word helpers -------------------------------------------------------

_WORDS = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen", "twenty",
]
_WORD_TO_INT = {w: i for i, w in enumerate(_WORDS)}


def _num_word(n: int) -> str:
    return _WORDS[n] if 0 <= n < len(_WORDS) else str(n)


def _parse_num_word(tok: str) -> int:
    tok = tok.strip().lower()
    if tok.isdigit():
        return int(tok)
    if tok in _WORD_TO_INT:
        return _WORD_TO_INT[tok]
    raise ValueError(f"not a number: {tok!r}")


def _list_and(items: list[str]) -> str:
    if len(items) == 1:
        return items[0]
    if len(items) == 2:
        return f"{items[0]} and {items[1]}"
    return ", ".join(items[:-1]) + f", and {items[-1]}"


def _split_list_and(text: str) -> list[str]:
    text = text.strip()
    if ", and " in text:
        head, tail = text.rsplit(", and ", 1)
        return [t.strip() for t in head.split(",")] + [tail.strip()]
    if " and " in text:
        head, tail = text.rsplit(" and ", 1)
        if "," not in head:
            return [head.strip(), tail.strip()]
    return [t.strip() for t in text.split(",")]


# -- flow phrase maps ----------------------------------------------------------

def _plural(n: int, noun: str) -> str:
    return f"{n} {noun}" if n == 1 else f"{n} {noun}s"


def _flow_phrase_brief(p: PhaseSpec) -> str:
    if p.kind == "deal":
        return f"deal {_plural(p.count, 'card')}"
    if p.kind == "flop":
        return f"reveal {_plural(p.count, 'card')}"
    return {"start": "start", "shuffle": "shuffle", "blind": "blinds",
            "bet": "bet", "switch": "switch", "show": "show"}[p.kind]


_BRIEF_FIXED = {
    "start": PhaseSpec("start"), "shuffle": PhaseSpec("shuffle"),
    "blinds": PhaseSpec("blind"), "bet": PhaseSpec("bet"),
    "switch": PhaseSpec("switch"), "show": PhaseSpec("show"),
}


def _parse_flow_brief(tok: str) -> PhaseSpec:
    tok = tok.strip()
    if tok in _BRIEF_FIXED:
        return _BRIEF_FIXED[tok]
    m = re.fullmatch(r"deal (\d+) cards?", tok)
    if m:
        return PhaseSpec("deal", int(m.group(1)))
    m = re.fullmatch(r"reveal (\d+) cards?", tok)
    if m:
        return PhaseSpec("flop", int(m.group(1)))
    raise ValueError(f"not a flow step: {tok!r}")


def _flow_phrase_gerund(p: PhaseSpec) -> str:
    if p.kind == "deal":
        return f"dealing {_plural(p.count, 'card')} to each player"
    if p.kind == "flop":
        return f"flopping {_plural(p.count, 'community card')}"
    return {
        "shuffle": "shuffling the deck",
        "blind": "placing the blinds",
        "bet": "placing the bet for each player",
        "switch": "switching cards",
        "show": "the showdown",
        "prize": "distributing the prize",
    }[p.kind]


_GERUND_FIXED = {
    "shuffling the deck": PhaseSpec("shuffle"),
    "placing the blinds": PhaseSpec("blind"),
    "placing the bet for each player": PhaseSpec("bet"),
    "switching cards": PhaseSpec("switch"),
    "the showdown": PhaseSpec("show"),
    "distributing the prize": PhaseSpec("prize"),
}


def _parse_flow_gerund(tok: str) -> PhaseSpec:
    tok = tok.strip()
    if tok in _GERUND_FIXED:
        return _GERUND_FIXED[tok]
    m = re.fullmatch(r"dealing (\d+) cards? to each player", tok)
    if m:
        return PhaseSpec("deal", int(m.group(1)))
    m = re.fullmatch(r"flopping (\d+) community cards?", tok)
    if m:
        return PhaseSpec("flop", int(m.group(1)))
    raise ValueError(f"not a flow step: {tok!r}")


# -- the template bank ----------------------------------------------------------
#
# Bank version 1. Adding templates is append-only so that existing corpora
# keep parsing exactly as generated.

BANK_VERSION = 1

ELEMENTS = ("players", "suits", "card_rank", "hand_rank", "bets", "flow")


def _render(element: str, index: int, script: GameScript) -> str:
    if element == "players":
        n = script.num_players
        return [
            f"In this game of Texas hold'em, there are {_num_word(n)} players.",
            f"The table seats {_num_word(n)} players.",
            f"A total of {_num_word(n)} players take part in the game.",
        ][index]
    if element == "suits":
        suits = script.suits
        return [
            f"The suits are {_list_and(suits)}.",
            f"There are {_num_word(len(suits))} suits: {', '.join(suits)}.",
            f"Cards come in the suits {_list_and(suits)}.",
        ][index]
    if element == "card_rank":
        ranks = [str(r) for r in script.rank_order]
        return [
            f"The card numbers rank from low to high as follows: {', '.join(ranks)}.",
            f"The card numbers, from lowest to highest value, are {_list_and(ranks)}.",
            f"From weakest to strongest, the single cards are {', '.join(ranks)}.",
        ][index]
    if element == "hand_rank":
        names = script.hand_rank
        return [
            "All combinations rank as: " + "<".join(names) + ".",
            f"Combinations from weakest to strongest: {', '.join(names)}.",
            f"The ranking of card combinations, lowest first, is {_list_and(names)}.",
        ][index]
    if element == "bets":
        m, M = script.min_bet, script.max_bet
        return [
            f"The minimum bet is {m}, maximum bet is {M}.",
            f"The minimum and maximum bet of the game is {m} and {M}.",
            f"Bets must stay between {m} and {M} chips.",
        ][index]
    if element == "flow":
        flow = script.flow
        if index == 0:
            steps = [_flow_phrase_brief(p) for p in flow[:-1]]
            return ("The game proceeds in the following order: " + ", ".join(steps)
                    + ", and finally the prize is distributed.")
        if index == 1:
            steps = [_flow_phrase_gerund(p) for p in flow[1:]]
            if len(steps) == 1:
                return f"The game begins with {steps[0]}."
            return ("The game begins with " + steps[0] + ", followed by "
                    + ", ".join(steps[1:-1]) + (", " if len(steps) > 2 else "")
                    + "and " + steps[-1] + ".")
        return "Step by step, the game runs: " + ", ".join(p.label() for p in flow) + "."
    raise ValueError(f"unknown element {element!r}")


_TEMPLATE_COUNT = {e: 3 for e in ELEMENTS}


def _try_parse_line(line: str) -> tuple[str, object] | None:
    """Match one natural line against the bank; (element, value) or None."""
    m = re.fullmatch(r"In this game of Texas hold'em, there are (\S+) players\.", line)
    if m:
        return ("players", _parse_num_word(m.group(1)))
    m = re.fullmatch(r"The table seats (\S+) players\.", line)
    if m:
        return ("players", _parse_num_word(m.group(1)))
    m = re.fullmatch(r"A total of (\S+) players take part in the game\.", line)
    if m:
        return ("players", _parse_num_word(m.group(1)))

    m = re.fullmatch(r"The suits are (.+)\.", line)
    if m:
        return ("suits", _split_list_and(m.group(1)))
    m = re.fullmatch(r"There are \S+ suits: (.+)\.", line)
    if m:
        return ("suits", [t.strip() for t in m.group(1).split(",")])
    m = re.fullmatch(r"Cards come in the suits (.+)\.", line)
    if m:
        return ("suits", _split_list_and(m.group(1)))

    m = re.fullmatch(r"The card numbers rank from low to high as follows: (.+)\.", line)
    if m:
        return ("card_rank", [int(t) for t in m.group(1).split(",")])
    m = re.fullmatch(r"The card numbers, from lowest to highest value, are (.+)\.", line)
    if m:
        return ("card_rank", [int(t) for t in _split_list_and(m.group(1))])
    m = re.fullmatch(r"From weakest to strongest, the single cards are (.+)\.", line)
    if m:
        return ("card_rank", [int(t) for t in m.group(1).split(",")])

    m = re.fullmatch(r"All combinations rank as: (.+)\.", line)
    if m:
        return ("hand_rank", [t.strip() for t in m.group(1).split("<")])
    m = re.fullmatch(r"Combinations from weakest to strongest: (.+)\.", line)
    if m:
        return ("hand_rank", [t.strip() for t in m.group(1).split(",")])
    m = re.fullmatch(r"The ranking of card combinations, lowest first, is (.+)\.", line)
    if m:
        return ("hand_rank", _split_list_and(m.group(1)))

    m = re.fullmatch(r"The minimum bet is (\d+), maximum bet is (\d+)\.", line)
    if m:
        return ("bets", (int(m.group(1)), int(m.group(2))))
    m = re.fullmatch(r"The minimum and maximum bet of the game is (\d+) and (\d+)\.", line)
    if m:
        return ("bets", (int(m.group(1)), int(m.group(2))))
    m = re.fullmatch(r"Bets must stay between (\d+) and (\d+) chips\.", line)
    if m:
        return ("bets", (int(m.group(1)), int(m.group(2))))

    m = re.fullmatch(
        r"The game proceeds in the following order: (.+), and finally the prize is distributed\.", line
    )
    if m:
        steps = [_parse_flow_brief(t) for t in m.group(1).split(",")]
        return ("flow", steps + [PhaseSpec("prize")])
    m = re.fullmatch(r"The game begins with (.+)\.", line)
    if m:
        body = m.group(1)
        if ", followed by " in body:
            first, rest = body.split(", followed by ", 1)
            tail = _split_list_and(rest)
            steps = [first] + tail
        else:
            steps = [body]
        return ("flow", [PhaseSpec("start")] + [_parse_flow_gerund(t) for t in steps])
    m = re.fullmatch(r"Step by step, the game runs: (.+)\.", line)
    if m:
        return ("flow", [PhaseSpec.from_label(t.strip()) for t in m.group(1).split(",")])
    return None


# -- public operations -------------------------------------------------------------


def rephrase_script(script: GameScript, cfg: RephraseConfig) -> str:
    """Serialize with selected elements swapped for natural-language lines."""
    rng = Rng(cfg.seed)
    million = 1_000_000
    whole = rng.below(million) < int(cfg.whole_script_probability * million)
    chosen: dict[str, int] = {}
    for element in ELEMENTS:
        if element == "hand_rank" and not script.hand_rank:
            continue
        selected = whole or rng.below(million) < int(cfg.element_probability * million)
        if selected:
            chosen[element] = rng.below(_TEMPLATE_COUNT[element])

    lines = []
    lines.append(_render("players", chosen["players"], script) if "players" in chosen
                 else f"Number of players: {script.num_players}")
    lines.append(_render("suits", chosen["suits"], script) if "suits" in chosen
                 else "Suit: " + ", ".join(script.suits))
    lines.append(_render("card_rank", chosen["card_rank"], script) if "card_rank" in chosen
                 else "Card Rank: " + "<".join(str(r) for r in script.rank_order))
    if script.hand_rank:
        lines.append(_render("hand_rank", chosen["hand_rank"], script) if "hand_rank" in chosen
                     else "Hand Rank: " + "<".join(script.hand_rank))
    lines.append(_render("bets", chosen["bets"], script) if "bets" in chosen
                 else f"Min / Max bet: {script.min_bet} / {script.max_bet}")
    lines.append(_render("flow", chosen["flow"], script) if "flow" in chosen
                 else "Flow: " + "->".join(p.label() for p in script.flow))
    if script.rules:
        tail = serialize_script(script).split("Specific Rules:\n", 1)[1]
        lines.append("Specific Rules:")
        lines.append(tail.rstrip("\n"))
    return "\n".join(lines) + "\n"


_DSL_KEYS = ("Number of players", "Suit", "Card Rank", "Hand Rank", "Min / Max bet", "Flow")


def parse_rephrased(text: str) -> GameScript:
    """Parse a script whose lines may be DSL, template output, or a mix."""
    values: dict[str, object] = {}
    dsl_lines: list[str] = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        i += 1
        if not line:
            continue
        if line == "Specific Rules:":
            rules = _parse_rules_block(lines[i:], i)
            values["rules"] = rules
            break
        key = line.partition(":")[0].strip()
        if key in _DSL_KEYS:
            dsl_lines.append(line)
            continue
        parsed = _try_parse_line(line)
        if parsed is None:
            raise UnrecognizedTemplate(line)
        values[parsed[0]] = parsed[1]

    base: dict[str, object] = {}
    if dsl_lines:
        # Reuse the strict DSL parser for the structured remainder.
        probe = parse_script_fragment(dsl_lines)
        base.update(probe)
    if "players" in values:
        base["num_players"] = values["players"]
    if "suits" in values:
        base["suits"] = values["suits"]
    if "card_rank" in values:
        base["rank_order"] = values["card_rank"]
    if "hand_rank" in values:
        base["hand_rank"] = values["hand_rank"]
    if "bets" in values:
        base["min_bet"], base["max_bet"] = values["bets"]
    if "flow" in values:
        base["flow"] = values["flow"]

    script = GameScript(
        num_players=base.get("num_players"),
        suits=base.get("suits"),
        rank_order=base.get("rank_order"),
        hand_rank=base.get("hand_rank", []),
        min_bet=base.get("min_bet"),
        max_bet=base.get("max_bet"),
        flow=base.get("flow"),
        rules=values.get("rules", []),
    )
    missing = [k for k in ("num_players", "suits", "rank_order", "min_bet", "flow")
               if getattr(script, k if k != "num_players" else "num_players") is None]
    if missing:
        raise ScriptError(f"rephrased script is missing elements: {', '.join(missing)}")
    script.validate()
    return script


def parse_script_fragment(dsl_lines: list[str]) -> dict[str, object]:
    """Parse a subset of DSL element lines into plain field values."""
    # A fragment may omit elements, so feed the full parser a padded script
    # and keep only the fields the fragment actually set.
    probe = parse_script_lenient("\n".join(dsl_lines))
    return probe


def parse_script_lenient(text: str) -> dict[str, object]:
    from .script import ScriptSyntaxError

    out: dict[str, object] = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        key, _, value = line.partition(":")
        key, value = key.strip(), value.strip()
        try:
            if key == "Number of players":
                out["num_players"] = int(value)
            elif key == "Suit":
                out["suits"] = [t.strip().split(" ")[-1].strip("()") for t in value.split(",")]
            elif key == "Card Rank":
                out["rank_order"] = [int(t) for t in value.split("<")]
            elif key == "Hand Rank":
                out["hand_rank"] = [t.strip() for t in value.split("<")]
            elif key == "Min / Max bet":
                m = re.fullmatch(r"(\d+)\s*/\s*(\d+)", value)
                out["min_bet"], out["max_bet"] = int(m.group(1)), int(m.group(2))
            elif key == "Flow":
                out["flow"] = [PhaseSpec.from_label(t.strip()) for t in value.split("->")]
        except (ValueError, AttributeError) as exc:
            raise ScriptSyntaxError(no, str(exc)) from None
    return out


def is_natural_form(text: str) -> bool:
    """True when at least one element line is template output rather than DSL."""
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line == "Specific Rules:":
            return False
        key = line.partition(":")[0].strip()
        if key in _DSL_KEYS:
            continue
        return _try_parse_line(line) is not None
    return False
