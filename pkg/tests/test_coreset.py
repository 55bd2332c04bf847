from cardroom import coreset


def test_forty_functions_defined():
    assert len(coreset.FUNCTIONS) == 40
    assert len(set(coreset.FUNCTIONS)) == 40
    assert set(coreset.INSTRUCTIONS) == set(coreset.FUNCTIONS)


def test_generation_covers_every_function():
    samples = coreset.generate_core_set(2, seed=1)
    assert len(samples) == 80
    assert {s.function for s in samples} == set(coreset.FUNCTIONS)


def test_every_sample_verifies():
    samples = coreset.generate_core_set(3, seed=5)
    assert all(coreset.verify_core_sample(s) for s in samples)


def test_generation_is_deterministic():
    a = coreset.generate_core_set(2, seed=9)
    b = coreset.generate_core_set(2, seed=9)
    assert a == b


def test_len_counts_cards():
    out = coreset.compute_output("len", coreset.INSTRUCTIONS["len"],
                                 "Cards: H1 D2 C3 S4 H5 D6 C7")
    assert out == "7"


def test_blind_posts_half_then_full_minimum():
    input_text = (
        "Min bet: 10\n"
        "|order|p1|p2|p3 (button)|p4 (small blind)|p5 (big blind)\n"
        "|chip|p1: 0/1000|p2: 0/1000|p3: 0/1000|p4: 0/1000|p5: 0/1000"
    )
    out = coreset.compute_output("blind", coreset.INSTRUCTIONS["blind"], input_text)
    assert out == "|chip|p1: 0/1000|p2: 0/1000|p3: 0/1000|p4: 5/995|p5: 10/990"


def test_bonus_for_three_splits_evenly():
    instruction = coreset.INSTRUCTIONS["bonus for x"].replace("{x}", "3")
    out = coreset.compute_output("bonus for x", instruction, "Prize pool: 900\nWinners: 3")
    assert out == "300"


def test_get_pair_picks_the_greater_pair():
    out = coreset.compute_output("get pair", coreset.INSTRUCTIONS["get pair"],
                                 "Card Rank: 2<3<4<5<6<7<8<9<10<11<12<13<1\n"
                                 "Cards: H3 D3 C12 S12 H7")
    assert out == "C12 S12"


def test_get_straight_absent_is_none():
    out = coreset.compute_output("get straight", coreset.INSTRUCTIONS["get straight"],
                                 "Card Rank: 2<3<4<5<6<7<8<9<10<11<12<13<1\n"
                                 "Cards: H2 D5 C9 S11 H13")
    assert out == "none"


def test_check_leaves_chips_untouched():
    out = coreset.compute_output("bet check", coreset.INSTRUCTIONS["bet check"].replace("p{a}", "p2"),
                                 "|chip|p1: 20/980|p2: 20/980\np2: Check")
    assert out == "|chip|p1: 20/980|p2: 20/980"


def test_fold_marks_the_player():
    out = coreset.compute_output("bet fold", coreset.INSTRUCTIONS["bet fold"].replace("p{a}", "p1"),
                                 "|chip|p1: 20/980|p2: 40/960\np1: Fold")
    assert out == "|chip|p1: 20/980 (folded)|p2: 40/960"


def test_highest_no_pair_skips_paired_ranks():
    out = coreset.compute_output("highest no pair", coreset.INSTRUCTIONS["highest no pair"],
                                 "Card Rank: 2<3<4<5<6<7<8<9<10<11<12<13<1\n"
                                 "Cards: H1 D1 C9 S5 H3")
    assert out == "C9"


def test_show_low_prefers_the_weakest_hand():
    input_text = (
        "Card Rank: 2<3<4<5<6<7<8<9<10<11<12<13<1\n"
        "Hand Rank: High Card<Pair<Two Pair<Three of a Kind<Straight<Flush<Full House"
        "<Four of a Kind<Straight Flush\n"
        "|hole|p1|H7|D5|C4|S3|H2|p2|H1|D1|C4|S5|H9"
    )
    out = coreset.compute_output("show low", coreset.INSTRUCTIONS["show low"], input_text)
    assert out == "p1"


def test_switch_zero_is_identity():
    input_text = "|hole|p3|H2|D4|C6\n|stack|S9|S10\np3: Switch 0"
    out = coreset.compute_output("switch", coreset.INSTRUCTIONS["switch"], input_text)
    assert out == "|hole|p3|H2|D4|C6\n|stack|S9|S10"
