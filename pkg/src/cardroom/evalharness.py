"""Scoring predicted next-states against the oracle corpus.

Correctness is exact byte match after newline normalization. Each state is
attributed to the flow function that produced it, so the report shows both
per-function accuracy and the round-level success rate (a round succeeds
only if every one of its states matched).
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass

from .cards import parse_card
from .datagen import load_jsonl
from .rng import Rng
from .statelang import diff_states

#: Report columns, in display order.
FUNCTION_CELLS = ("start", "blind", "deal", "flop", "switch", "bet", "show", "prize")

#: Raw transition labels fold into the report cells here.
_CELL_OF = {
    "start": "start", "shuffle": "start", "blind": "blind", "deal": "deal",
    "flop": "flop", "switch": "switch", "bet": "bet", "show": "show", "prize": "prize",
}


def attribute_function(meta_function: str) -> str:
    """Collapse a transition label to its report cell (deal2 -> deal, etc.)."""
    label = meta_function.rstrip("0123456789")
    if label not in _CELL_OF:
        raise ValueError(f"unknown transition function {meta_function!r}")
    return _CELL_OF[label]


def _normalize(text: str) -> str:
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    return "\n".join(line.rstrip() for line in lines).strip("\n")


@dataclass
class EvalReport:
    per_function: dict[str, dict]
    macro_avg: float | None
    round_success: int
    round_total: int

    @property
    def round_rate(self) -> float | None:
        if self.round_total == 0:
            return None
        return 100.0 * self.round_success / self.round_total

    def as_dict(self) -> dict:
        return {
            "per_function": self.per_function,
            "macro_avg": self.macro_avg,
            "rounds": {
                "success": self.round_success,
                "total": self.round_total,
                "rate": self.round_rate,
            },
        }

    def table(self) -> str:
        cells = [f"{'cell':8s} {'acc':>7s} {'n':>6s}"]
        for name in FUNCTION_CELLS:
            info = self.per_function[name]
            acc = "-" if info["accuracy"] is None else f"{info['accuracy']:.1f}"
            cells.append(f"{name:8s} {acc:>7s} {info['total']:>6d}")
        avg = "-" if self.macro_avg is None else f"{self.macro_avg:.1f}"
        rate = "-" if self.round_rate is None else f"{self.round_rate:.1f}"
        cells.append(f"{'avg':8s} {avg:>7s}")
        cells.append(f"round success {rate}% ({self.round_success}/{self.round_total})")
        return "\n".join(cells)


def score(
    gold: list[dict],
    predictions: list[str],
    free_running: bool = False,
) -> EvalReport:
    """Exact-match scoring of one prediction per gold record, in file order.

    Teacher-forced by default: each step stands alone against its gold next
    state. With free_running, a round is walked in order and every step after
    the first mismatch is counted wrong too (prediction cascades).
    """
    if len(gold) != len(predictions):
        raise ValueError(f"{len(gold)} gold records but {len(predictions)} predictions")
    cells = {name: {"correct": 0, "total": 0, "accuracy": None} for name in FUNCTION_CELLS}
    rounds: dict[tuple, bool] = {}
    broken_rounds: set[tuple] = set()

    for rec, pred in zip(gold, predictions):
        meta = rec["meta"]
        key = (meta["variant"], meta["round"], meta["round_seed"])
        cell = attribute_function(meta["function"])
        ok = _normalize(pred) == _normalize(rec["next_state"])
        if free_running and key in broken_rounds:
            ok = False
        if not ok and free_running:
            broken_rounds.add(key)
        cells[cell]["total"] += 1
        if ok:
            cells[cell]["correct"] += 1
        rounds[key] = rounds.get(key, True) and ok

    populated = []
    for info in cells.values():
        if info["total"]:
            info["accuracy"] = round(100.0 * info["correct"] / info["total"], 2)
            populated.append(info["accuracy"])
    macro = round(sum(populated) / len(populated), 2) if populated else None
    return EvalReport(
        per_function=cells,
        macro_avg=macro,
        round_success=sum(rounds.values()),
        round_total=len(rounds),
    )


def score_files(gold_path: str, pred_path: str, free_running: bool = False) -> EvalReport:
    gold = load_jsonl(gold_path)
    preds = [rec["predicted"] for rec in load_jsonl(pred_path)]
    return score(gold, preds, free_running)


def failure_dump(gold: list[dict], predictions: list[str], limit: int = 20) -> str:
    """Human-readable line diffs for the first mismatching states."""
    chunks = []
    for rec, pred in zip(gold, predictions):
        if _normalize(pred) == _normalize(rec["next_state"]):
            continue
        meta = rec["meta"]
        diffs = diff_states(rec["next_state"], pred)
        lines = [f"round {meta['round']} step {meta['step']} ({meta['function']}):"]
        for key, exp, got in diffs:
            lines.append(f"  [{key}] expected: {exp!r}")
            lines.append(f"  [{key}]   actual: {got!r}")
        chunks.append("\n".join(lines))
        if len(chunks) >= limit:
            break
    return "\n\n".join(chunks)


# -- mutation suite --------------------------------------------------------------

MUTATION_KINDS = ("card_hallucination", "card_omission", "chip_off_by_one", "message_misaddress")

#: States a mutation kind may target, by report cell.
_ELIGIBLE = {
    "card_hallucination": {"deal", "flop", "switch"},
    "card_omission": {"deal", "flop", "switch"},
    "chip_off_by_one": {"blind", "bet", "prize"},
    "message_misaddress": {"bet", "switch"},
}


def _mutate_text(text: str, kind: str, rng: Rng) -> str | None:
    """Apply one defect to a state text; None when the text offers no target."""
    lines = text.split("\n")
    if kind in ("card_hallucination", "card_omission"):
        targets = [i for i, l in enumerate(lines)
                   if l.startswith(("|stack", "|hole", "|community")) and len(l.split("|")) > 3]
        if not targets:
            return None
        idx = targets[rng.below(len(targets))]
        parts = lines[idx].split("|")
        card_slots = [j for j in range(2, len(parts)) if parts[j] and not parts[j].startswith("p")]
        if not card_slots:
            return None
        slot = card_slots[rng.below(len(card_slots))]
        if kind == "card_omission":
            del parts[slot]
        else:
            card = parse_card(parts[slot])
            parts[slot] = f"{card.suit}{card.rank + 40}"  # a label outside any script
        lines[idx] = "|".join(parts)
        return "\n".join(lines)
    if kind == "chip_off_by_one":
        for i, line in enumerate(lines):
            if line.startswith("|chip|"):
                head, _, rest = line.partition("|chip|")
                entries = rest.split("|")
                j = rng.below(len(entries))
                pid, _, amounts = entries[j].partition(": ")
                bet, _, stack = amounts.partition("/")
                entries[j] = f"{pid}: {int(bet) + 1}/{stack}"
                lines[i] = "|chip|" + "|".join(entries)
                return "\n".join(lines)
        return None
    if kind == "message_misaddress":
        for i, line in enumerate(lines):
            if line.startswith("|message|engine|p"):
                parts = line.split("|")
                seat = int(parts[3][1:])
                parts[3] = f"p{seat + 1}"
                lines[i] = "|".join(parts)
                return "\n".join(lines)
        return None
    raise ValueError(f"unknown mutation kind {kind!r}")


def make_mutation_suite(
    gold: list[dict],
    kinds: list[str] = list(MUTATION_KINDS),
    seed: int = 0,
    defects_per_round: int = 1,
) -> tuple[list[str], list[dict]]:
    """Predictions with injected defects plus the ground-truth defect manifest.

    Each round receives exactly defects_per_round mutations (when it has any
    eligible state); every other prediction is the oracle text itself.
    """
    for kind in kinds:
        if kind not in MUTATION_KINDS:
            raise ValueError(f"unknown mutation kind {kind!r}")
    predictions = [rec["next_state"] for rec in gold]
    manifest: list[dict] = []
    rounds: dict[tuple, list[int]] = {}
    for i, rec in enumerate(gold):
        key = (rec["meta"]["variant"], rec["meta"]["round"], rec["meta"]["round_seed"])
        rounds.setdefault(key, []).append(i)

    eligible_cells = set()
    for kind in kinds:
        eligible_cells |= _ELIGIBLE[kind]

    for key in sorted(rounds, key=str):
        rng = Rng(seed).fork(zlib.crc32(str(key).encode()))
        indices = [
            i for i in rounds[key]
            if attribute_function(gold[i]["meta"]["function"]) in eligible_cells
        ]
        injected = 0
        attempts = 0
        while injected < defects_per_round and indices and attempts < 50:
            attempts += 1
            i = indices[rng.below(len(indices))]
            cell = attribute_function(gold[i]["meta"]["function"])
            fitting = [k for k in kinds if cell in _ELIGIBLE[k]]
            kind = fitting[rng.below(len(fitting))]
            mutated = _mutate_text(gold[i]["next_state"], kind, rng)
            if mutated is None or mutated == predictions[i]:
                continue
            predictions[i] = mutated
            manifest.append({
                "round": gold[i]["meta"]["round"],
                "variant": gold[i]["meta"]["variant"],
                "step": gold[i]["meta"]["step"],
                "kind": kind,
                "function": cell,
            })
            injected += 1
    return predictions, manifest


def dump_predictions(predictions: list[str], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for text in predictions:
            fh.write(json.dumps({"predicted": text}, sort_keys=True, ensure_ascii=False,
                               separators=(",", ":")))
            fh.write("\n")
