"""Cards, decks, and dealing primitives.

A card is a (suit letter, integer rank label) pair. Rank labels carry no
intrinsic order; ordering always comes from the owning script's rank list.
Card text is the suit letter glued to the rank label, e.g. "H8" or "D12".
"""

from __future__ import annotations

from typing import NamedTuple

from .rng import Rng


class DeckExhausted(Exception):
    """A draw asked for more cards than the deck holds."""


class Card(NamedTuple):
    suit: str
    rank: int

    def __str__(self) -> str:
        return f"{self.suit}{self.rank}"


def parse_card(text: str) -> Card:
    """Inverse of str(card): leading letter, then the integer label."""
    if len(text) < 2 or not text[0].isalpha() or not text[1:].isdigit():
        raise ValueError(f"not a card: {text!r}")
    return Card(text[0], int(text[1:]))


def build_deck(suits: list[str], ranks: list[int]) -> list[Card]:
    """Full deck in suit-major order, ranks in the script's low-to-high order."""
    return [Card(s, r) for s in suits for r in ranks]


def shuffle(deck: list[Card], rng: Rng) -> list[Card]:
    """Shuffled copy; the input list is left untouched."""
    out = list(deck)
    rng.shuffle(out)
    return out


def draw(deck: list[Card], n: int) -> tuple[list[Card], list[Card]]:
    """Remove n cards from the top (front). Returns (drawn, rest)."""
    if n < 0:
        raise ValueError("cannot draw a negative number of cards")
    if n > len(deck):
        raise DeckExhausted(f"need {n} cards, deck has {len(deck)}")
    return deck[:n], deck[n:]
