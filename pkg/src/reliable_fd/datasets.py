"""Built-in example data.

The tic-tac-toe endgame table (958 boards, 9 cells with values x/o/b and a
positive/negative outcome for x) is fully determined by the rules of the
game, so it is regenerated by walking the game tree instead of being shipped.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .data import Dataset, encode_dataset

__all__ = ["tic_tac_toe_rows", "tic_tac_toe", "write_tic_tac_toe_csv", "TIC_TAC_TOE_HEADER"]

TIC_TAC_TOE_HEADER = [
    "top-left", "top-middle", "top-right",
    "middle-left", "middle-middle", "middle-right",
    "bottom-left", "bottom-middle", "bottom-right",
    "class",
]

_LINES = ((0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6), (1, 4, 7), (2, 5, 8), (0, 4, 8), (2, 4, 6))


def _winner(board: list[str]) -> str | None:
    for i, j, k in _LINES:
        if board[i] != "b" and board[i] == board[j] == board[k]:
            return board[i]
    return None


def tic_tac_toe_rows() -> list[list[str]]:
    """Header plus one row per distinct terminal board reachable with x moving first.

    A board is terminal when a player has three in a row or the board is
    full.  ``class`` is ``positive`` when x has won, ``negative`` otherwise
    (o wins and draws).  Rows are sorted by board.
    """
    endings: dict[tuple[str, ...], str] = {}
    board = ["b"] * 9

    def play(player: str) -> None:
        won = _winner(board)
        if won or "b" not in board:
            endings[tuple(board)] = "positive" if won == "x" else "negative"
            return
        other = "o" if player == "x" else "x"
        for cell in range(9):
            if board[cell] == "b":
                board[cell] = player
                play(other)
                board[cell] = "b"

    play("x")
    return [list(TIC_TAC_TOE_HEADER)] + [list(b) + [endings[b]] for b in sorted(endings)]


def tic_tac_toe() -> Dataset:
    return encode_dataset(tic_tac_toe_rows(), "class", name="tic-tac-toe")


def write_tic_tac_toe_csv(path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        csv.writer(fh).writerows(tic_tac_toe_rows())
    return path
