"""Shared fixtures: the worked example contexts and their groupings."""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from genconcept.context import FormalContext
from genconcept.generalize import Axis, Group, GroupingScheme, Mode

DATA_DIR = Path(__file__).parent / "data"


def ctx_from_strings(name, objects, attributes, rows) -> FormalContext:
    packed = tuple(
        sum(1 << j for j, c in enumerate(line) if c in "xX") for line in rows
    )
    return FormalContext(tuple(objects), tuple(attributes), packed, name)


@pytest.fixture(scope="session")
def smallcxt() -> FormalContext:
    """5 transactions x 6 items; 7 concepts, 8 after merging m1 and m2."""
    return ctx_from_strings(
        "smallcxt",
        ["g1", "g2", "g3", "g4", "g5"],
        ["m1", "m2", "m3", "m4", "m5", "m6"],
        ["..xxxx", ".x.xx.", "x.x.x.", "xxxxxx", "....x."],
    )


@pytest.fixture(scope="session")
def kgen_expected() -> FormalContext:
    """smallcxt with m1, m2 merged existentially into m12."""
    return ctx_from_strings(
        "smallcxt",
        ["g1", "g2", "g3", "g4", "g5"],
        ["m12", "m3", "m4", "m5", "m6"],
        [".xxxx", "x.xx.", "xx.x.", "xxxxx", "...x."],
    )


@pytest.fixture(scope="session")
def initlattice() -> FormalContext:
    """The 8-transaction market-basket context with items a..h."""
    return ctx_from_strings(
        "initlattice",
        ["1", "2", "3", "4", "5", "6", "7", "8"],
        ["a", "b", "c", "d", "e", "f", "g", "h"],
        [
            "x...x.x.",
            "x...xx.x",
            "xx..xxx.",
            ".x..xxxx",
            "x.xx....",
            "xxxx....",
            ".xx...x.",
            ".xxx..x.",
        ],
    )


@pytest.fixture(scope="session")
def kexists_full() -> FormalContext:
    """The printed 8x12 cross-table: a..h apposed with existential A..D."""
    return ctx_from_strings(
        "initlattice",
        ["1", "2", "3", "4", "5", "6", "7", "8"],
        ["a", "b", "c", "d", "e", "f", "g", "h", "A", "B", "C", "D"],
        [
            "x...x.x.x.x.",
            "x...xx.xx.xx",
            "xx..xxx.xxxx",
            ".x..xxxxxx.x",
            "x.xx.....xx.",
            "xxxx.....xx.",
            ".xx...x.xx..",
            ".xxx..x.xxx.",
        ],
    )


@pytest.fixture(scope="session")
def kforall_full() -> FormalContext:
    """The printed 8x12 cross-table: a..h apposed with universal S..V."""
    return ctx_from_strings(
        "initlattice",
        ["1", "2", "3", "4", "5", "6", "7", "8"],
        ["a", "b", "c", "d", "e", "f", "g", "h", "S", "T", "U", "V"],
        [
            "x...x.x.x...",
            "x...xx.x...x",
            "xx..xxx.x...",
            ".x..xxxxx..x",
            "x.xx......x.",
            "xxxx.....xx.",
            ".xx...x..x..",
            ".xxx..x..x..",
        ],
    )


@pytest.fixture(scope="session")
def kalpha_full() -> FormalContext:
    """The printed 8x11 cross-table: a..h apposed with 60% groups E, F, H."""
    return ctx_from_strings(
        "initlattice",
        ["1", "2", "3", "4", "5", "6", "7", "8"],
        ["a", "b", "c", "d", "e", "f", "g", "h", "E", "F", "H"],
        [
            "x...x.x....",
            "x...xx.x.x.",
            "xx..xxx.xx.",
            ".x..xxxx.xx",
            "x.xx....x..",
            "xxxx....x..",
            ".xx...x.x..",
            ".xxx..x.x..",
        ],
    )


def _attr_group(ctx: FormalContext, name: str, names: list[str], alpha=None) -> Group:
    return Group(name, ctx.attribute_set(names), alpha)


@pytest.fixture(scope="session")
def scheme_exists_abcd(initlattice) -> GroupingScheme:
    return GroupingScheme(
        Axis.ATTRIBUTES,
        Mode.EXISTS,
        (
            _attr_group(initlattice, "A", ["e", "g"]),
            _attr_group(initlattice, "B", ["b", "c"]),
            _attr_group(initlattice, "C", ["a", "d"]),
            _attr_group(initlattice, "D", ["f", "h"]),
        ),
    )


@pytest.fixture(scope="session")
def scheme_forall_stuv(initlattice) -> GroupingScheme:
    return GroupingScheme(
        Axis.ATTRIBUTES,
        Mode.FORALL,
        (
            _attr_group(initlattice, "S", ["e", "g"]),
            _attr_group(initlattice, "T", ["b", "c"]),
            _attr_group(initlattice, "U", ["a", "d"]),
            _attr_group(initlattice, "V", ["f", "h"]),
        ),
    )


@pytest.fixture(scope="session")
def scheme_alpha_efh(initlattice) -> GroupingScheme:
    alpha = Fraction(3, 5)  # the printed tables use a 60% threshold
    return GroupingScheme(
        Axis.ATTRIBUTES,
        Mode.ALPHA,
        (
            _attr_group(initlattice, "E", ["a", "b", "c"], alpha),
            _attr_group(initlattice, "F", ["d", "e", "f"], alpha),
            _attr_group(initlattice, "H", ["g", "h"], alpha),
        ),
    )


@pytest.fixture(scope="session")
def scheme_merge_m12(smallcxt) -> GroupingScheme:
    return GroupingScheme(
        Axis.ATTRIBUTES,
        Mode.EXISTS,
        (_attr_group(smallcxt, "m12", ["m1", "m2"]),),
        keep_ungrouped=True,
    )


@pytest.fixture(scope="session")
def contranominal():
    def build(n: int) -> FormalContext:
        full = (1 << n) - 1
        return FormalContext(
            tuple(f"g{i + 1}" for i in range(n)),
            tuple(f"m{j + 1}" for j in range(n)),
            tuple(full ^ (1 << i) for i in range(n)),
            f"contranominal-{n}",
        )

    return build


@pytest.fixture(scope="session")
def chain_context():
    def build(n: int) -> FormalContext:
        return FormalContext(
            tuple(f"g{i + 1}" for i in range(n)),
            tuple(f"m{j + 1}" for j in range(n)),
            tuple((1 << (i + 1)) - 1 for i in range(n)),
            f"chain-{n}",
        )

    return build
