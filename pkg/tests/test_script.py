import pytest

from cardroom import variants
from cardroom.rng import Rng
from cardroom.script import (
    GameScript,
    PhaseSpec,
    RulePredicate,
    ScriptSyntaxError,
    UnknownPredicate,
    ValidationError,
    parse_script,
    serialize_script,
)

MINIMAL = """Number of players: 2
Suit: H
Card Rank: 1<2
Hand Rank: High Card
Min / Max bet: 2 / 10
Flow: start->blind->deal1->bet->show->prize
"""


def test_all_bundled_variants_parse_and_validate():
    for name in variants.ALL_VARIANTS:
        script = variants.load_variant(name)
        script.validate()


def test_texas_flow_matches_its_script_file():
    script = variants.load_variant("texas_holdem")
    assert [p.label() for p in script.flow] == [
        "start", "blind", "deal2", "bet", "flop3", "bet", "flop1", "bet", "show", "prize",
    ]


def test_minimal_script_is_valid():
    script = parse_script(MINIMAL)
    assert script.num_players == 2
    assert script.hand_rank == ["High Card"]


def test_bet_limit_parsing():
    text = MINIMAL.replace("Min / Max bet: 2 / 10", "Min / Max bet: 10 / 5000")
    script = parse_script(text)
    assert (script.min_bet, script.max_bet) == (10, 5000)


def test_suit_names_with_letters_accepted():
    text = MINIMAL.replace("Suit: H", "Suit: Hearts (H), Diamonds (D)")
    assert parse_script(text).suits == ["H", "D"]


def test_round_trip_bundled_variants():
    for name in variants.ALL_VARIANTS:
        script = variants.load_variant(name)
        assert parse_script(serialize_script(script)) == script


def test_round_trip_minimal():
    script = parse_script(MINIMAL)
    assert parse_script(serialize_script(script)) == script


def random_valid_script(rng: Rng) -> GameScript:
    n_suits = rng.randint(1, 5)
    suits = rng.sample(list("HDCSROGB"), n_suits)
    n_ranks = rng.randint(6, 14)
    ranks = rng.sample(list(range(1, 40)), n_ranks)
    lattice = ["High Card", "Pair", "Two Pair", "Three of a Kind"]
    if rng.below(2):
        lattice += ["Straight", "Flush"]
    flow = [PhaseSpec("start"), PhaseSpec("blind"), PhaseSpec("deal", 5), PhaseSpec("bet")]
    if rng.below(2):
        flow += [PhaseSpec("switch"), PhaseSpec("bet")]
    if rng.below(2):
        flow += [PhaseSpec("flop", rng.randint(1, 3)), PhaseSpec("bet")]
    flow += [PhaseSpec("show"), PhaseSpec("prize")]
    rules = []
    if rng.below(3) == 0:
        rules.append(RulePredicate("low_wins", {}))
    min_bet = 2 * rng.randint(1, 20)
    script = GameScript(
        num_players=rng.randint(2, 6),
        suits=suits,
        rank_order=ranks,
        hand_rank=lattice,
        min_bet=min_bet,
        max_bet=min_bet + rng.randint(10, 4000),
        flow=flow,
        rules=rules,
    )
    script.validate()
    return script


def test_round_trip_random_scripts():
    rng = Rng(40)
    for _ in range(1000):
        script = random_valid_script(rng)
        assert parse_script(serialize_script(script)) == script


def test_unparsed_rule_sentence_is_an_error():
    text = MINIMAL + "Specific Rules:\nPlayers must wear hats on Tuesdays.\n"
    with pytest.raises(UnknownPredicate):
        parse_script(text)


def test_syntax_error_carries_line_number():
    with pytest.raises(ScriptSyntaxError) as err:
        parse_script(MINIMAL.replace("Flow: start->blind->deal1->bet->show->prize",
                                     "Flow: start->blind->dance->show->prize"))
    assert err.value.line_no == 6


@pytest.mark.parametrize("mutation, fragment", [
    (("Flow: start->blind->deal1->bet->show->prize", "Flow: start->blind->deal1->bet->prize"),
     "show"),
    (("Suit: H", "Suit: H, H"), "duplicate suits"),
    (("Min / Max bet: 2 / 10", "Min / Max bet: 20 / 10"), "maximum"),
    (("Min / Max bet: 2 / 10", "Min / Max bet: 3 / 10"), "even"),
    (("Card Rank: 1<2", "Card Rank: 1<1"), "duplicate rank"),
    (("Number of players: 2", "Number of players: 1"), "players"),
])
def test_validation_rejections(mutation, fragment):
    old, new = mutation
    with pytest.raises(ValidationError) as err:
        parse_script(MINIMAL.replace(old, new))
    assert fragment in str(err.value)


def test_hand_size_larger_than_visible_cards_rejected():
    text = MINIMAL + "Specific Rules:\nA hand is made up of 3 cards.\n"
    with pytest.raises(ValidationError):
        parse_script(text)


def test_flow_prefixed_with_prize_rejected():
    bad = MINIMAL.replace("Flow: start->blind->deal1->bet->show->prize",
                          "Flow: start->prize->blind->deal1->bet->show->prize")
    with pytest.raises(ValidationError):
        parse_script(bad)


def test_small_straight_slots_below_straight():
    script = variants.load_variant("short_deck_holdem")
    lattice = script.effective_hand_rank()
    assert lattice.index("Small Straight") == lattice.index("Straight") - 1


def test_badugi_script_has_no_lattice():
    script = variants.load_variant("badugi")
    assert script.hand_rank == []
    assert script.has_rule("badugi_ranking")


def test_custom_games_carry_their_predicates():
    assert variants.load_variant("all_in").has_rule("all_in_allowed")
    assert variants.load_variant("three_card_draw").hand_size() == 3
    six = variants.load_variant("six_card_draw")
    assert six.hand_size() == 6
    assert {r.params["name"] for r in six.rules if r.id == "new_combination"} == {
        "Three Pair", "Big House",
    }
    omaha = variants.load_variant("omaha").get_rule("omaha_constraint")
    assert omaha.params == {"holes": 2, "community": 3}


def test_reversed_ranks_deck_is_39_cards():
    script = variants.load_variant("reversed_ranks")
    assert script.suits == ["D", "O", "G"]
    assert script.deck_size() == 39
    assert script.rank_order[0] == 1 and script.rank_order[-1] == 2
