import pytest

import oracle_eval
from cardroom import evaluator
from cardroom.cards import Card, build_deck, parse_card
from cardroom.rng import Rng
from cardroom.script import GameScript, PhaseSpec, RulePredicate

STANDARD = ["High Card", "Pair", "Two Pair", "Three of a Kind", "Straight",
            "Flush", "Four of a Kind", "Straight Flush"]


def make_script(suits="HDCS", ranks=None, lattice=None, rules=(), players=4):
    ranks = ranks if ranks is not None else [2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 1]
    k = 5
    for r in rules:
        if r.id == "hand_size":
            k = r.params["k"]
    deal = max(k, 5)
    flow = [PhaseSpec("start"), PhaseSpec("blind"), PhaseSpec("deal", deal),
            PhaseSpec("bet"), PhaseSpec("show"), PhaseSpec("prize")]
    script = GameScript(
        num_players=players,
        suits=list(suits),
        rank_order=ranks,
        hand_rank=lattice if lattice is not None else list(STANDARD),
        min_bet=10,
        max_bet=1000,
        flow=flow,
        rules=list(rules),
    )
    script.validate()
    return script


def cards(text):
    return [parse_card(t) for t in text.split()]


def tup(cs):
    return [(c.suit, c.rank) for c in cs]


# -- frozen spot checks --------------------------------------------------------


def test_three_card_straight():
    rules = (RulePredicate("hand_size", {"k": 3}),)
    script = make_script(suits="HDC", lattice=["High Card", "Pair", "Three of a Kind",
                                               "Straight", "Flush", "Straight Flush"],
                         rules=rules)
    found = evaluator.detect("Straight", cards("C10 H11 D12"), script)
    assert found is not None
    assert sorted(str(c) for c in found[1]) == ["C10", "D12", "H11"]


def test_no_pair_detected_in_rainbow_hand():
    script = make_script()
    assert evaluator.detect("Pair", cards("H2 D5 C9 S11 H13"), script) is None


def test_three_pair_present():
    rules = (RulePredicate("hand_size", {"k": 6}),
             RulePredicate("new_combination", {"name": "Three Pair", "detector": "three_pairs"}),
             RulePredicate("new_combination", {"name": "Big House", "detector": "two_triples"}))
    lattice = ["High Card", "Pair", "Three of a Kind", "Straight", "Flush",
               "Full House", "Three Pair", "Big House", "Straight Flush"]
    script = make_script(suits="HDCSR", lattice=lattice, rules=rules)
    found = evaluator.detect("Three Pair", cards("R8 H8 C10 H10 H12 D12"), script)
    assert found is not None
    val, _ = evaluator.best_hand(cards("R8 H8 C10 H10 H12 D12"), [], script)
    assert script.effective_hand_rank()[val.index] == "Three Pair"


def test_big_house_beats_three_pair():
    rules = (RulePredicate("hand_size", {"k": 6}),
             RulePredicate("new_combination", {"name": "Three Pair", "detector": "three_pairs"}),
             RulePredicate("new_combination", {"name": "Big House", "detector": "two_triples"}))
    lattice = ["High Card", "Pair", "Three of a Kind", "Straight", "Flush",
               "Full House", "Three Pair", "Big House", "Straight Flush"]
    script = make_script(suits="HDCSR", lattice=lattice, rules=rules)
    big_house, _ = evaluator.best_hand(cards("R8 H8 C8 D12 H12 S12"), [], script)
    three_pair, _ = evaluator.best_hand(cards("R8 H8 C10 H10 H12 D12"), [], script)
    assert evaluator.compare(big_house, three_pair, script) == 1


def test_lowball_high_card_beats_any_pair():
    script = make_script(rules=(RulePredicate("low_wins", {}),))
    seven_five = evaluator.best_hand(cards("H7 D5 C4 S3 H2"), [], script)[0]
    paired = evaluator.best_hand(cards("H8 D8 C4 S3 H2"), [], script)[0]
    assert evaluator.compare(seven_five, paired, script) == 1


def test_reversed_rank_order_pair_of_twos_wins():
    # Rank order 1 < 13 < ... < 2 makes 2 the highest label.
    ranks = [1, 13, 12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2]
    script = make_script(suits="DOG", ranks=ranks)
    twos = evaluator.best_hand(cards("D2 O2 G5 D9 O11"), [], script)[0]
    thirteens = evaluator.best_hand(cards("D13 O13 G5 D9 O11"), [], script)[0]
    assert evaluator.compare(twos, thirteens, script) == 1


def test_identical_hands_tie():
    script = make_script()
    a = evaluator.best_hand(cards("H7 D5 C4 S3 H2"), [], script)[0]
    b = evaluator.best_hand(cards("D7 H5 S4 C3 D2"), [], script)[0]
    assert evaluator.compare(a, b, script) == 0


def test_high_card_of_single_card_hand():
    script = make_script(rules=(RulePredicate("hand_size", {"k": 1}),))
    val, chosen = evaluator.best_hand(cards("H8"), [], script)
    assert script.effective_hand_rank()[val.index] == "High Card"
    assert chosen == cards("H8")


def test_kickers_break_high_card_ties():
    script = make_script()
    better = evaluator.best_hand(cards("H1 D9 C7 S5 H3"), [], script)[0]
    worse = evaluator.best_hand(cards("H1 D9 C7 S5 H2"), [], script)[0]
    assert evaluator.compare(better, worse, script) == 1


def test_detect_uses_only_input_cards():
    script = make_script()
    hand = cards("H8 D8 C3 S4 H13")
    for name in STANDARD:
        found = evaluator.detect(name, hand, script)
        if found is not None:
            assert all(c in hand for c in found[1])


# -- small straight ---------------------------------------------------------------


def small_straight_script():
    lattice = ["High Card", "Pair", "Two Pair", "Three of a Kind", "Flush",
               "Straight", "Four of a Kind", "Straight Flush"]
    ranks = [6, 7, 8, 9, 10, 11, 12, 13, 1]
    return make_script(ranks=ranks, lattice=lattice,
                       rules=(RulePredicate("small_straight", {}),))


def test_small_straight_recognized_and_below_standard():
    script = small_straight_script()
    wrapped, _ = evaluator.best_hand(cards("H1 D6 C7 S8 H9"), [], script)
    standard, _ = evaluator.best_hand(cards("H6 D7 C8 S9 H10"), [], script)
    lattice = script.effective_hand_rank()
    assert lattice[wrapped.index] == "Small Straight"
    assert lattice[standard.index] == "Straight"
    assert evaluator.compare(standard, wrapped, script) == 1


def test_small_straight_never_outranks_any_standard_straight():
    script = small_straight_script()
    rng = Rng(12)
    deck = build_deck(script.suits, script.rank_order)
    best_wrapped, _ = evaluator.best_hand(cards("H1 D6 C7 S8 H9"), [], script)
    # The lowest standard straight still wins.
    lowest_standard, _ = evaluator.best_hand(cards("H6 D7 C8 S9 H10"), [], script)
    assert evaluator.compare(lowest_standard, best_wrapped, script) == 1
    for _ in range(200):
        rng.shuffle(deck)
        hand = deck[:5]
        val, _ = evaluator.best_hand(hand, [], script)
        name = script.effective_hand_rank()[val.index]
        if name == "Straight":
            assert evaluator.compare(val, best_wrapped, script) == 1


# -- badugi --------------------------------------------------------------------


def badugi_script():
    ranks = list(range(1, 14))
    script = make_script(ranks=ranks, lattice=[],
                         rules=(RulePredicate("badugi_ranking", {}),))
    return script


def test_badugi_all_distinct():
    val, chosen = evaluator.badugi_select(cards("H1 D2 C3 S4"), badugi_script())
    assert val.count == 4
    assert sorted(str(c) for c in chosen) == ["C3", "D2", "H1", "S4"]


def test_badugi_conflict_resolution():
    val, chosen = evaluator.badugi_select(cards("H1 H2 D2 C5"), badugi_script())
    assert val.count == 3
    assert sorted(str(c) for c in chosen) == ["C5", "D2", "H1"]


def test_badugi_single_card():
    val, chosen = evaluator.badugi_select(cards("S9"), badugi_script())
    assert val.count == 1 and chosen == cards("S9")


def test_badugi_more_cards_beats_lower_ranks():
    script = badugi_script()
    three, _ = evaluator.badugi_select(cards("H1 D2 C3 S3"), script)
    four, _ = evaluator.badugi_select(cards("H10 D11 C12 S13"), script)
    assert four.beats(three)


def test_badugi_matches_exhaustive_oracle():
    script = badugi_script()
    cfg = oracle_eval.make_cfg(script.rank_order, [], hand_size=4)
    deck = build_deck(script.suits, script.rank_order)
    rng = Rng(77)
    for _ in range(300):
        rng.shuffle(deck)
        hand = deck[:5]
        val, _ = evaluator.badugi_select(hand, script)
        count, ranks = oracle_eval.badugi_value(cfg, tup(hand))
        assert (val.count, val.ranks_desc) == (count, ranks)


# -- omaha constraint -------------------------------------------------------------


def omaha_script():
    lattice = ["High Card", "Pair", "Two Pair", "Three of a Kind", "Flush",
               "Straight", "Four of a Kind", "Straight Flush"]
    flow = [PhaseSpec("start"), PhaseSpec("blind"), PhaseSpec("deal", 4), PhaseSpec("bet"),
            PhaseSpec("flop", 3), PhaseSpec("bet"), PhaseSpec("flop", 1), PhaseSpec("bet"),
            PhaseSpec("show"), PhaseSpec("prize")]
    script = GameScript(4, list("HDCS"), [2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 1],
                        lattice, 10, 1000, flow,
                        [RulePredicate("omaha_constraint", {"holes": 2, "community": 3})])
    script.validate()
    return script


def test_omaha_requires_two_hole_cards():
    # Four spades on the board plus one in hand is NOT a flush here: exactly
    # two hole cards must be used.
    script = omaha_script()
    hole = cards("S2 H7 D9 C11")
    community = cards("S5 S8 S10 S13 H3")
    val, _ = evaluator.best_hand(hole, community, script)
    assert script.effective_hand_rank()[val.index] != "Flush"


def test_omaha_matches_restricted_brute_force():
    script = omaha_script()
    cfg = oracle_eval.make_cfg(script.rank_order, script.effective_hand_rank(),
                               hand_size=5, omaha=(2, 3))
    deck = build_deck(script.suits, script.rank_order)
    rng = Rng(31)
    for _ in range(400):
        rng.shuffle(deck)
        hole, community = deck[:4], deck[4:9]
        val, _ = evaluator.best_hand(hole, community, script)
        assert (val.index, val.tiebreak) == oracle_eval.best_value(cfg, tup(hole), tup(community))


def test_insufficient_cards():
    script = make_script()
    with pytest.raises(evaluator.InsufficientCards):
        evaluator.best_hand(cards("H2 D3"), [], script)


# -- winners ------------------------------------------------------------------------


def test_single_contender_wins_without_evaluation():
    script = make_script()
    assert evaluator.winners({"p3": cards("H2")}, [], script) == [["p3"]]


def test_tied_hands_share_the_win():
    # Suits never break ties: equal straight flushes split the win.
    script = make_script()
    sets = evaluator.winners(
        {"p1": cards("H9 H8 H7 H6 H5"), "p2": cards("S9 S8 S7 S6 S5"),
         "p3": cards("D2 C3 D4 C6 D8")},
        [], script)
    assert sets == [["p1", "p2"]]


def test_badeucey_split_matches_brute_force():
    lattice = ["High Card", "Pair", "Two Pair", "Three of a Kind", "Full House",
               "Four of a Kind"]
    script = make_script(lattice=lattice,
                         rules=(RulePredicate("badugi_ranking", {}),
                                RulePredicate("high_low_split", {"high": "badugi", "low": "lattice"})))
    deck = build_deck(script.suits, script.rank_order)
    rng = Rng(5)
    badugi_cfg = oracle_eval.make_cfg(script.rank_order, [], hand_size=5)
    low_cfg = oracle_eval.make_cfg(script.rank_order, lattice, hand_size=5, low=True)
    for _ in range(100):
        rng.shuffle(deck)
        hands = {f"p{i + 1}": deck[i * 5:(i + 1) * 5] for i in range(4)}
        low_set, badugi_set = evaluator.winners(hands, [], script)
        assert sorted(low_set) == oracle_eval.winners(low_cfg, {p: tup(c) for p, c in hands.items()})
        best_b = max((oracle_eval.badugi_value(badugi_cfg, tup(c)) for c in hands.values()),
                     key=lambda v: (v[0], tuple(-x for x in v[1])))
        expect_b = sorted(p for p, c in hands.items()
                          if oracle_eval.badugi_value(badugi_cfg, tup(c)) == best_b)
        assert sorted(badugi_set) == expect_b


# -- oracle equivalence sweeps ------------------------------------------------------


def test_best_hand_matches_oracle_on_reduced_decks():
    rng = Rng(2024)
    checked = 0
    for suits, n_ranks, low in (("HD", 6, False), ("HDC", 8, True), ("HDCS", 8, False)):
        ranks = list(range(1, n_ranks + 1))
        rng.shuffle(ranks)
        lattice = list(STANDARD)
        script = make_script(suits=suits, ranks=list(ranks), lattice=lattice,
                             rules=(RulePredicate("low_wins", {}),) if low else ())
        cfg = oracle_eval.make_cfg(script.rank_order, script.effective_hand_rank(),
                                   hand_size=5, low=low)
        deck = build_deck(script.suits, script.rank_order)
        for _ in range(400):
            rng.shuffle(deck)
            hole, community = deck[:2], deck[2:7]
            val, _ = evaluator.best_hand(hole, community, script)
            assert (val.index, val.tiebreak) == oracle_eval.best_value(cfg, tup(hole), tup(community))
            checked += 1
    assert checked == 1200


def test_compare_is_a_total_order_on_samples():
    script = make_script()
    deck = build_deck(script.suits, script.rank_order)
    rng = Rng(91)
    values = []
    for _ in range(60):
        rng.shuffle(deck)
        values.append(evaluator.best_hand(deck[:5], [], script)[0])
    for a in values[:20]:
        for b in values[:20]:
            assert evaluator.compare(a, b, script) == -evaluator.compare(b, a, script)
            for c in values[:10]:
                if evaluator.compare(a, b, script) >= 0 and evaluator.compare(b, c, script) >= 0:
                    assert evaluator.compare(a, c, script) >= 0


def test_low_wins_is_pure_comparison_inversion():
    high = make_script()
    low = make_script(rules=(RulePredicate("low_wins", {}),))
    deck = build_deck(high.suits, high.rank_order)
    rng = Rng(13)
    for _ in range(100):
        rng.shuffle(deck)
        hands = {f"p{i + 1}": deck[i * 5:(i + 1) * 5] for i in range(3)}
        lows = evaluator.winners(hands, [], low)[0]
        values = {p: evaluator.best_hand_directed(c, [], high, low=True)[0] for p, c in hands.items()}
        best = min(values.values())
        assert sorted(lows) == sorted(p for p, v in values.items() if v == best)
