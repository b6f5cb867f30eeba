"""Canonical desk-scale synthesis instances used by tests and the CLI."""

from __future__ import annotations

import random

from .engine import CdhInstance, OrderedInstance
from .points import EpPoint, SetPresentation, ep


def standard_ep_instance() -> CdhInstance:
    """All eventually periodic points; transport the jump points onto the
    alternating class."""
    return CdhInstance(
        X=SetPresentation.all_ep(),
        D0=SetPresentation.of_classes("0", "1"),
        D1=SetPresentation.of_classes("01"),
    )


def standard_ordered_instance() -> OrderedInstance:
    """Two fresh classes to exchange, keeping a third class pointwise stable."""
    return OrderedInstance(
        D0=SetPresentation.of_classes("001"),
        D1=SetPresentation.of_classes("0001"),
        W=SetPresentation.of_classes("011"),
    )


def random_point(rng: random.Random, max_pre: int = 6, max_per: int = 3) -> EpPoint:
    pre = "".join(rng.choice("01") for _ in range(rng.randrange(max_pre + 1)))
    per = "".join(rng.choice("01") for _ in range(rng.randrange(1, max_per + 1)))
    return ep(pre, per)


def seeded_points(seed: int, n: int, max_pre: int = 6, max_per: int = 3):
    rng = random.Random(seed)
    return [random_point(rng, max_pre, max_per) for _ in range(n)]
