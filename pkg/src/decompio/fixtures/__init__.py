"""Example models shipped with the package."""

from __future__ import annotations

from importlib import resources

from ..model import Iolts, parse_iolts

NAMES = (
    "vending_s",
    "vending_l",
    "vending_delta",
    "vending_e",
    "money_r",
    "drink_m",
    "drink_p",
    "drink_c",
    "quotient_r",
    "quotient_i",
    "eft_s",
    "eft_e",
    "eft_quotient",
)


def text(name: str) -> str:
    if name not in NAMES:
        raise KeyError(f"no fixture named {name!r}")
    return resources.files(__name__).joinpath(f"{name}.im").read_text(encoding="utf-8")


def fixture(name: str) -> Iolts:
    return parse_iolts(text(name))
