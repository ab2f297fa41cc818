#!/usr/bin/env python3
"""
Reference renderer for a tabforge render manifest.

Loads each document with headless Chromium, screenshots the table, and writes
one geometry JSONL per record by evaluating every cell's XPath locator.
Samples that break the manifest constraints are reported as discarded.

Requires Playwright:
    pip install playwright
    playwright install chromium

Run:
    python scripts/headless_render.py <dataset-dir>
"""

import argparse
import json
import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.core.logging_config import configure_logging  # noqa: E402
from src.render.manifest import MANIFEST_NAME, RenderConstraints, check_constraints  # noqa: E402

logger = logging.getLogger("render-manifest")

# Smallest rendered font height among the table's cells, in CSS pixels
MIN_GLYPH_JS = """
() => Math.min(...Array.from(document.querySelectorAll('td')).map(
    td => parseFloat(getComputedStyle(td).fontSize)))
"""


def render_entry(page, root: Path, entry: dict, constraints: RenderConstraints) -> str:
    document = (root / entry["document"]).resolve()
    page.goto(document.as_uri(), wait_until="load")
    table = page.query_selector("table")
    box = table.bounding_box()
    min_glyph = page.evaluate(MIN_GLYPH_JS)
    verdict = check_constraints(box["width"], box["height"], min_glyph, constraints)
    if verdict == "discard":
        logger.info(f"{entry['id']} discarded: {box['width']}x{box['height']}, glyph {min_glyph}px")
        return verdict

    image = root / entry["image"]
    image.parent.mkdir(parents=True, exist_ok=True)
    table.screenshot(path=str(image))

    geometry = root / entry["geometry"]
    geometry.parent.mkdir(parents=True, exist_ok=True)
    with geometry.open("w", encoding="utf-8") as handle:
        for locator in entry["locators"]:
            cell = page.query_selector(f"xpath={locator['xpath']}").bounding_box()
            x0 = cell["x"] - box["x"]
            y0 = cell["y"] - box["y"]
            line = {
                "row": locator["row"],
                "col": locator["col"],
                "box": [x0, y0, x0 + cell["width"], y0 + cell["height"]],
            }
            handle.write(json.dumps(line, sort_keys=True) + "\n")
    return verdict


def main() -> int:
    parser = argparse.ArgumentParser(description="Render a tabforge dataset with headless Chromium")
    parser.add_argument("dataset", help="Dataset directory holding render_manifest.json")
    args = parser.parse_args()
    configure_logging()

    try:
        from playwright.sync_api import sync_playwright
    except ImportError:
        logger.error("Playwright not installed. Install with: pip install playwright")
        return 3

    root = Path(args.dataset)
    manifest = json.loads((root / MANIFEST_NAME).read_text(encoding="utf-8"))
    constraints = RenderConstraints(**manifest["constraints"])

    kept = discarded = 0
    with sync_playwright() as p:
        browser = p.chromium.launch(headless=True)
        page = browser.new_page(viewport={"width": constraints.max_width_px, "height": 1000})
        for entry in manifest["entries"]:
            if render_entry(page, root, entry, constraints) == "keep":
                kept += 1
            else:
                discarded += 1
        browser.close()

    logger.info(f"rendered {kept} tables, discarded {discarded}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
