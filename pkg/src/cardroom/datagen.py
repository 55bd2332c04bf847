"""Corpus factory: simulated rounds become training samples.

Each sample is one transition: (script text, previous state text, player
input text) paired with the oracle next-state text. Rounds are the unit of
everything here: category balancing accepts or rejects whole rounds, and
regeneration from the same seeds is byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import coreset, evaluator, variants
from .engine import run_round
from .rephrase import RephraseConfig, parse_rephrased, rephrase_script
from .rng import Rng
from .script import GameScript, parse_script, serialize_script
from .statelang import parse_state, serialize_input, serialize_state

DEFAULT_STACK = 1000


class QuotaUnreachable(Exception):
    def __init__(self, category: str, detail: str = ""):
        super().__init__(f"cannot fill quota for category {category!r}" + (f": {detail}" if detail else ""))
        self.category = category


@dataclass
class BalanceSpec:
    """Round-acceptance quotas keyed by showdown category."""

    weights: dict[str, float]
    tolerance: float = 0.05
    attempts_factor: int = 400

    def __post_init__(self):
        if not self.weights:
            raise ValueError("at least one category weight required")
        if any(w <= 0 for w in self.weights.values()):
            raise ValueError("weights must be positive")
        total = sum(self.weights.values())
        if abs(total - 1.0) > 1e-9:
            self.weights = {k: w / total for k, w in self.weights.items()}

    @classmethod
    def uniform(cls, categories: list[str]) -> "BalanceSpec":
        return cls({c: 1.0 / len(categories) for c in categories})


NO_SHOWDOWN = "no-showdown"

_SUIT_POOL = ["H", "D", "C", "S", "R", "O", "G", "B", "T", "W"]
_MIN_BETS = [2, 4, 10, 20, 40]
_MAX_BETS = [500, 1000, 2000, 5000]


def _player_cap(script: GameScript) -> int:
    """Largest table the deck can serve with one spare hand of headroom."""
    deck = script.deck_size()
    flops = sum(1 for p in script.flow if p.kind == "flop")
    deal = script.deal_total()
    cap = 2
    for n in range(2, 8):
        if n * deal + script.flop_total() + flops + deal <= deck:
            cap = n
    return cap


def jitter_script(base: GameScript, rng: Rng) -> GameScript:
    """A fresh configuration of the same variant: seats, bets, labels vary."""
    n = rng.randint(2, _player_cap(base))
    min_bet = rng.choice(_MIN_BETS)
    max_bet = rng.choice([m for m in _MAX_BETS if m > min_bet * 2])
    suits = list(base.suits)
    if rng.below(10) < 3:
        suits = rng.sample(_SUIT_POOL, len(base.suits))
    ranks = list(base.rank_order)
    if rng.below(10) < 3:
        offset = rng.randint(1, 30)
        ranks = [r + offset for r in ranks]
    script = GameScript(
        num_players=n,
        suits=suits,
        rank_order=ranks,
        hand_rank=list(base.hand_rank),
        min_bet=min_bet,
        max_bet=max_bet,
        flow=list(base.flow),
        rules=list(base.rules),
    )
    script.validate()
    return script


def round_category(log) -> str:
    """Balancing key: the winning combination at showdown, if one happened."""
    final = log.states[-1]
    if "show" not in final.trace:
        return NO_SHOWDOWN
    script = log.script if log.script is not None else parse_script(log.script_text)
    show_state = next(s for s in log.states if s.produced_by == "show")
    from .engine import _winner_sets

    sets = _winner_sets(show_state, script)
    winner = sets[0][0]
    if script.hand_rank:
        low = script.has_rule("low_wins") or (
            script.get_rule("high_low_split") is not None
            and script.get_rule("high_low_split").params.get("high") == "badugi"
        )
        value, _ = evaluator.best_hand_directed(
            show_state.holes[winner], show_state.community, script, low
        )
        return script.effective_hand_rank()[value.index]
    value, _ = evaluator.badugi_select(
        list(show_state.holes[winner]) + list(show_state.community), script
    )
    return f"Badugi-{value.count}"


def _resolve_scripts(scripts) -> list[tuple[str, GameScript]]:
    """Accept variant names, file paths, or (name, GameScript) pairs."""
    out = []
    for item in scripts:
        if isinstance(item, tuple):
            out.append(item)
        elif item in variants.ALL_VARIANTS:
            out.append((item, variants.load_variant(item)))
        else:
            with open(item, encoding="utf-8") as fh:
                out.append((item, parse_script(fh.read())))
    if not out:
        raise ValueError("no scripts given")
    return out


def _possible_categories(script: GameScript) -> set[str]:
    cats = set(script.effective_hand_rank())
    if not script.hand_rank:
        cats |= {f"Badugi-{k}" for k in range(1, len(script.suits) + 1)}
    cats.add(NO_SHOWDOWN)
    return cats


@dataclass
class RoundRecord:
    """One accepted round plus the metadata shared by its samples."""

    index: int
    seed: int
    variant: str
    script: GameScript
    script_text: str
    script_form: str
    category: str
    log: object
    stage: str | None = None


def _script_text_for(script: GameScript, form: str, seed: int, stage: str | None) -> str:
    if form == "structured":
        return serialize_script(script)
    if form == "natural":
        cfg = RephraseConfig(seed=seed, element_probability=1.0, whole_script_probability=0.0)
        return rephrase_script(script, cfg)
    cfg = RephraseConfig(seed=seed, element_probability=0.5, whole_script_probability=0.02)
    return rephrase_script(script, cfg)


def generate_rounds(
    scripts,
    n_rounds: int,
    seed: int,
    balance: BalanceSpec | None = None,
    natural_fraction: float = 0.0,
    stage: str | None = None,
    rephrased: bool = False,
) -> list[RoundRecord]:
    """Simulate and (optionally) balance accepted rounds.

    Determinism: the attempt counter drives every seed, so the same inputs
    regenerate the same rounds regardless of rejection history.
    """
    pool = _resolve_scripts(scripts)
    if balance:
        possible = set()
        for _, script in pool:
            possible |= _possible_categories(script)
        for category in balance.weights:
            if category not in possible:
                raise QuotaUnreachable(category, "no given script can produce it")
        quotas = _integer_quotas(balance.weights, n_rounds)
        max_attempts = balance.attempts_factor * n_rounds
    else:
        quotas = None
        max_attempts = n_rounds

    accepted: list[RoundRecord] = []
    attempt = 0
    while len(accepted) < n_rounds:
        if balance and attempt >= max_attempts:
            missing = [c for c, q in quotas.items() if q > 0]
            raise QuotaUnreachable(missing[0], f"{attempt} attempts exhausted")
        round_seed = Rng(seed).fork(attempt + 1).next_u64() & 0x7FFFFFFF
        attempt += 1
        name, base = pool[(attempt - 1) % len(pool)]
        script = jitter_script(base, Rng(round_seed).fork(11))
        log = run_round(script, seed=round_seed, stacks=DEFAULT_STACK)
        category = round_category(log)
        if quotas is not None:
            if quotas.get(category, 0) <= 0:
                continue
            quotas[category] -= 1
        index = len(accepted)
        if rephrased:
            form = "rephrased"
        elif natural_fraction > 0 and index % round(1 / natural_fraction) == 0:
            form = "natural"
        else:
            form = "structured"
        text = _script_text_for(script, form, round_seed, stage)
        accepted.append(RoundRecord(index, round_seed, name, script, text, form, category, log, stage))
    return accepted


def _integer_quotas(weights: dict[str, float], total: int) -> dict[str, int]:
    raw = {c: w * total for c, w in weights.items()}
    quotas = {c: int(v) for c, v in raw.items()}
    leftovers = sorted(raw, key=lambda c: (raw[c] - quotas[c], c), reverse=True)
    for c in leftovers[: total - sum(quotas.values())]:
        quotas[c] += 1
    return quotas


def round_samples(record: RoundRecord, include_start: bool = False) -> list[dict]:
    """The NSP records of one round, in transition order.

    A round of T+1 states yields T transition records. With include_start a
    leading record for the initial state itself is added (empty previous
    state and input); its oracle is round setup from the recorded seed.
    """
    out = []
    states = record.log.states
    inputs = record.log.inputs
    if include_start:
        out.append({
            "script": record.script_text,
            "prev_state": "",
            "player_input": "",
            "next_state": serialize_state(states[0]),
            "meta": {
                "variant": record.variant,
                "round": record.index,
                "round_seed": record.seed,
                "step": -1,
                "function": "start",
                "category": record.category,
                "script_form": record.script_form,
                "stage": record.stage,
            },
        })
    for step in range(1, len(states)):
        prev, nxt = states[step - 1], states[step]
        inp = inputs[step - 1]
        out.append({
            "script": record.script_text,
            "prev_state": serialize_state(prev),
            "player_input": serialize_input(inp) if inp is not None else "",
            "next_state": serialize_state(nxt),
            "meta": {
                "variant": record.variant,
                "round": record.index,
                "round_seed": record.seed,
                "step": step - 1,
                "function": nxt.produced_by,
                "category": record.category,
                "script_form": record.script_form,
                "stage": record.stage,
            },
        })
    return out


def generate_corpus(
    scripts,
    n_rounds: int,
    seed: int,
    balance: BalanceSpec | None = None,
    natural_fraction: float = 0.0,
    stage: str | None = None,
    rephrased: bool = False,
    include_start: bool = False,
):
    """Stream sample dicts for n_rounds accepted rounds."""
    for record in generate_rounds(scripts, n_rounds, seed, balance, natural_fraction, stage, rephrased):
        yield from round_samples(record, include_start)


def dump_jsonl(records, path: str) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True, ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")
            n += 1
    return n


def load_jsonl(path: str) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


# -- curriculum -----------------------------------------------------------------


@dataclass
class CurriculumConfig:
    seed: int = 7
    scripts: tuple = variants.STANDARD_VARIANTS
    warmup_records: int = 1000
    standard_records: int = 10_000
    diverse_rephrased_records: int = 1000
    diverse_standard_records: int = 1000
    natural_fraction: float = 0.5


def _take_records(scripts, target: int, seed: int, stage: str, natural_fraction=0.0, rephrased=False):
    """Exactly `target` records, growing the round pool geometrically."""
    n_rounds = max(1, target // 20)
    while True:
        out = []
        for rec in generate_corpus(scripts, n_rounds, seed, None, natural_fraction, stage, rephrased):
            out.append(rec)
            if len(out) == target:
                return out
        n_rounds *= 2


def emit_curriculum(cfg: CurriculumConfig, out_dir: str) -> dict[str, int]:
    """Write warmup/standard/diverse JSONL files with exact record counts."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    counts = {}

    per_fn = -(-cfg.warmup_records // len(coreset.FUNCTIONS))
    core = coreset.generate_core_set(per_fn, cfg.seed)
    warmup = [
        {"function": s.function, "instruction": s.instruction, "input": s.input,
         "output": s.output, "meta": {"stage": "warmup"}}
        for s in core[: cfg.warmup_records]
    ]
    counts["warmup"] = dump_jsonl(warmup, os.path.join(out_dir, "warmup.jsonl"))

    standard = _take_records(cfg.scripts, cfg.standard_records, cfg.seed + 1,
                             "standard", natural_fraction=cfg.natural_fraction)
    counts["standard"] = dump_jsonl(standard, os.path.join(out_dir, "standard.jsonl"))

    diverse = _take_records(cfg.scripts, cfg.diverse_rephrased_records, cfg.seed + 2,
                            "diverse", rephrased=True)
    diverse += _take_records(cfg.scripts, cfg.diverse_standard_records, cfg.seed + 3,
                             "diverse")
    counts["diverse"] = dump_jsonl(diverse, os.path.join(out_dir, "diverse.jsonl"))
    return counts


# -- statistics -------------------------------------------------------------------


def corpus_stats(records: list[dict]) -> dict:
    """Counts, mixes, lengths, and the category histogram of a corpus."""
    if not records:
        return {
            "records": 0, "rounds": 0, "variants": {}, "category_histogram": {},
            "script_form": {}, "mean_script_chars": 0.0, "mean_script_tokens": 0.0,
            "mean_state_chars": 0.0, "mean_state_tokens": 0.0,
            "mean_states_per_round": 0.0, "whitespace_vocab": 0,
        }
    rounds: dict[tuple, dict] = {}
    vocab = set()
    script_chars = script_tokens = 0
    state_chars = state_tokens = 0
    forms: dict[str, int] = {}
    for rec in records:
        meta = rec["meta"]
        key = (meta["variant"], meta["round"], meta["round_seed"])
        info = rounds.setdefault(key, {"steps": 0, "category": meta["category"],
                                       "form": meta["script_form"], "script": rec["script"]})
        info["steps"] += 1
        state_chars += len(rec["next_state"])
        state_tokens += len(rec["next_state"].split())
        vocab.update(rec["next_state"].split())
        vocab.update(rec["script"].split())
        if rec["player_input"]:
            vocab.update(rec["player_input"].split())
    variant_mix: dict[str, int] = {}
    categories: dict[str, int] = {}
    for (variant, _, _), info in rounds.items():
        variant_mix[variant] = variant_mix.get(variant, 0) + 1
        categories[info["category"]] = categories.get(info["category"], 0) + 1
        forms[info["form"]] = forms.get(info["form"], 0) + 1
        script_chars += len(info["script"])
        script_tokens += len(info["script"].split())
    n_rounds = len(rounds)
    return {
        "records": len(records),
        "rounds": n_rounds,
        "variants": dict(sorted(variant_mix.items())),
        "category_histogram": dict(sorted(categories.items())),
        "script_form": dict(sorted(forms.items())),
        "mean_script_chars": round(script_chars / n_rounds, 1),
        "mean_script_tokens": round(script_tokens / n_rounds, 1),
        "mean_state_chars": round(state_chars / len(records), 1),
        "mean_state_tokens": round(state_tokens / len(records), 1),
        "mean_states_per_round": round(len(records) / n_rounds + 1, 2),
        "whitespace_vocab": len(vocab),
    }


# -- oracle-consistency verification ------------------------------------------------


def resolve_script(text: str) -> GameScript:
    """Parse a script whether it is DSL, mixed, or fully natural."""
    from .script import ScriptError

    try:
        return parse_script(text)
    except ScriptError as dsl_error:
        try:
            return parse_rephrased(text)
        except ScriptError:
            # Pure-DSL input: the strict parser's diagnostics are the useful ones.
            raise dsl_error from None


def verify_corpus(records: list[dict]) -> list[str]:
    """Re-run every transition; returns a list of human-readable failures.

    Two checks per sample: replaying the round from its seed reproduces the
    stored texts, and the parsed previous state alone is enough to recompute
    the next state byte-exactly.
    """
    from .engine import PlayerInput, init_round, next_state

    failures: list[str] = []
    rounds: dict[tuple, list[dict]] = {}
    for rec in records:
        key = (rec["meta"]["variant"], rec["meta"]["round"], rec["meta"]["round_seed"])
        rounds.setdefault(key, []).append(rec)

    for key, recs in rounds.items():
        recs.sort(key=lambda r: r["meta"]["step"])
        try:
            script = resolve_script(recs[0]["script"])
        except Exception as exc:
            failures.append(f"round {key}: script does not parse: {exc}")
            continue
        state = init_round(script, recs[0]["meta"]["round_seed"], DEFAULT_STACK)
        for rec in recs:
            step = rec["meta"]["step"]
            if rec["meta"]["function"] == "start":
                # The initial state has no predecessor; its oracle is round
                # setup from the recorded seed.
                if serialize_state(state) != rec["next_state"]:
                    failures.append(f"round {key}: start state differs from re-initialization")
                    break
                continue
            if serialize_state(state) != rec["prev_state"]:
                failures.append(f"round {key} step {step}: replayed previous state differs")
                break
            inp = None
            if rec["player_input"]:
                inp = _input_from_line(rec["player_input"])
            try:
                state = next_state(state, inp, script)
            except Exception as exc:
                failures.append(f"round {key} step {step}: engine error: {exc}")
                break
            if serialize_state(state) != rec["next_state"]:
                failures.append(f"round {key} step {step}: replayed next state differs")
                break
            reparsed = parse_state(rec["prev_state"], script)
            recomputed = next_state(reparsed, inp, script)
            if serialize_state(recomputed) != rec["next_state"]:
                failures.append(f"round {key} step {step}: parse-based recomputation differs")
                break
    return failures


def _input_from_line(line: str):
    from .engine import PlayerInput

    parts = line.split("|", 4)
    if len(parts) != 5 or parts[1] != "message" or parts[3] != "engine":
        raise ValueError(f"bad player input line: {line!r}")
    return PlayerInput.parse(parts[2], parts[4])
