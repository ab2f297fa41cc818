#!/usr/bin/env python3
"""
Random CSS augmentation for rendered tables.
"""

import random
from dataclasses import asdict, dataclass
from typing import Tuple

RGB = Tuple[int, int, int]

TEXT_ALIGNS = ("left", "center", "right", "justify")
SERIF_FAMILIES = (
    "Times New Roman",
    "Georgia",
    "Garamond",
    "Palatino Linotype",
    "Book Antiqua",
    "Cambria",
)
SANS_FAMILIES = (
    "Arial",
    "Helvetica",
    "Verdana",
    "Tahoma",
    "Trebuchet MS",
    "Calibri",
)
FONT_FAMILIES = SERIF_FAMILIES + SANS_FAMILIES
FONT_SIZE_PT = (10, 25)
PADDING_PX = (2, 12)
BORDER_STYLES = ("solid", "dashed", "dotted", "double", "none")
LINE_TYPES = ("single", "double", "hidden")
MIN_CONTRAST = 2.0

# line_type -> table-level rules
_LINE_RULES = {
    "single": "border-collapse: collapse;",
    "double": "border-collapse: separate; border-spacing: 2px;",
    "hidden": "border-collapse: collapse;",
}


def relative_luminance(color: RGB) -> float:
    """sRGB relative luminance in [0, 1]."""

    def channel(value: int) -> float:
        v = value / 255.0
        return v / 12.92 if v <= 0.03928 else ((v + 0.055) / 1.055) ** 2.4

    r, g, b = (channel(v) for v in color)
    return 0.2126 * r + 0.7152 * g + 0.0722 * b


def contrast_ratio(a: RGB, b: RGB) -> float:
    """Contrast ratio between two colours, from 1.0 to 21.0."""
    la, lb = sorted((relative_luminance(a), relative_luminance(b)), reverse=True)
    return (la + 0.05) / (lb + 0.05)


def hex_color(color: RGB) -> str:
    return "#{:02x}{:02x}{:02x}".format(*color)


@dataclass(frozen=True)
class StyleAugmentation:
    text_align: str
    font_family: int
    font_size_pt: int
    padding_px: int
    border_style: str
    line_type: str
    text_color: RGB
    background_color: RGB

    @property
    def font_name(self) -> str:
        return FONT_FAMILIES[self.font_family]

    @property
    def generic_family(self) -> str:
        return "serif" if self.font_family < len(SERIF_FAMILIES) else "sans-serif"

    def in_range(self) -> bool:
        return (
            self.text_align in TEXT_ALIGNS
            and 0 <= self.font_family < len(FONT_FAMILIES)
            and FONT_SIZE_PT[0] <= self.font_size_pt <= FONT_SIZE_PT[1]
            and PADDING_PX[0] <= self.padding_px <= PADDING_PX[1]
            and self.border_style in BORDER_STYLES
            and self.line_type in LINE_TYPES
            and all(0 <= v <= 255 for v in self.text_color + self.background_color)
            and contrast_ratio(self.text_color, self.background_color) >= MIN_CONTRAST
        )

    def to_css(self) -> str:
        """
        Style sheet realizing this augmentation.

        line_type maps onto the border model: single collapses cell borders,
        double separates them by 2px, hidden collapses them and hides cell
        borders whatever border_style says.
        """
        cell_border = "hidden" if self.line_type == "hidden" else self.border_style
        return (
            "body { margin: 0; padding: 8px; "
            f"background-color: {hex_color(self.background_color)}; }}\n"
            f"table {{ {_LINE_RULES[self.line_type]} "
            f"border: 1px {self.border_style} {hex_color(self.text_color)}; }}\n"
            "td, th { "
            f"text-align: {self.text_align}; "
            f"font-family: \"{self.font_name}\", {self.generic_family}; "
            f"font-size: {self.font_size_pt}pt; "
            f"padding: {self.padding_px}px 4px; "
            f"border: 1px {cell_border} {hex_color(self.text_color)}; "
            f"color: {hex_color(self.text_color)}; "
            f"background-color: {hex_color(self.background_color)}; }}\n"
        )

    def as_dict(self) -> dict:
        data = asdict(self)
        data["text_color"] = list(self.text_color)
        data["background_color"] = list(self.background_color)
        return data


def _random_color(rng: random.Random) -> RGB:
    return (rng.randint(0, 255), rng.randint(0, 255), rng.randint(0, 255))


def sample_style(rng: random.Random) -> StyleAugmentation:
    """
    Draw every style field uniformly from its range.

    Colour pairs are redrawn until text and background contrast at least 2:1.
    """
    text_align = rng.choice(TEXT_ALIGNS)
    font_family = rng.randrange(len(FONT_FAMILIES))
    font_size = rng.randint(*FONT_SIZE_PT)
    padding = rng.randint(*PADDING_PX)
    border = rng.choice(BORDER_STYLES)
    line_type = rng.choice(LINE_TYPES)
    while True:
        text_color = _random_color(rng)
        background = _random_color(rng)
        if contrast_ratio(text_color, background) >= MIN_CONTRAST:
            break
    return StyleAugmentation(
        text_align, font_family, font_size, padding, border, line_type, text_color, background
    )
