"""Bundled variant scripts: ten table stakes plus five custom test games."""

from importlib import resources

from .script import GameScript, parse_script

#: The ten standard variants the engine ships with.
STANDARD_VARIANTS = (
    "texas_holdem",
    "five_card_draw",
    "short_deck_holdem",
    "omaha",
    "two_to_seven_triple_draw",
    "ace_to_five_triple_draw",
    "two_to_seven_single_draw",
    "badugi",
    "badeucey",
    "badacey",
)

#: Custom games used to exercise rules outside the standard set.
CUSTOM_VARIANTS = (
    "reversed_ranks",
    "extra_deal",
    "all_in",
    "three_card_draw",
    "six_card_draw",
)

ALL_VARIANTS = STANDARD_VARIANTS + CUSTOM_VARIANTS


def variant_text(name: str) -> str:
    if name not in ALL_VARIANTS:
        raise KeyError(f"unknown variant: {name!r}")
    return resources.files("cardroom.data").joinpath(f"{name}.txt").read_text("utf-8")


def load_variant(name: str) -> GameScript:
    return parse_script(variant_text(name))
