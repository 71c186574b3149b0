from __future__ import annotations

import io
import random

import pytest
from PIL import Image

from facadex.model import (
    FacadeContainer,
    FacadeTree,
    FacadeValue,
    NumberKey,
    StringKey,
)

EXIF_ARTIST = 315

# ---------------------------------------------------------------------------
# Acceptance reporting: one PASS/FAIL line per criterion, emitted in the
# terminal summary so it survives output capture.

acceptance_lines: list = []


def record_acceptance(line: str):
    acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


def make_jpeg(width=2, height=3, artist=None) -> bytes:
    buf = io.BytesIO()
    img = Image.new("RGB", (width, height), "red")
    if artist is not None:
        exif = Image.Exif()
        exif[EXIF_ARTIST] = artist
        img.save(buf, "JPEG", exif=exif.tobytes())
    else:
        img.save(buf, "JPEG")
    return buf.getvalue()


@pytest.fixture
def jpeg_bytes():
    return make_jpeg()


# ---------------------------------------------------------------------------
# Independent counting oracle: triple count = 1 (root type)
# + per container: slot count + type-label count.


def expected_triple_count(tree: FacadeTree) -> int:
    def count(container: FacadeContainer) -> int:
        n = len(container.slots) + len(container.types)
        for _, content in container.slots:
            if isinstance(content, FacadeContainer):
                n += count(content)
        return n

    return 1 + count(tree.root)


# ---------------------------------------------------------------------------
# Seeded random document generators for fuzzing.


def random_json(rng: random.Random, depth=4):
    if depth == 0 or rng.random() < 0.4:
        return rng.choice(
            [
                rng.randint(-1000, 1000),
                rng.random() * 100,
                rng.choice([True, False, None]),
                "".join(rng.choices("abcxyz äë€ 字", k=rng.randint(0, 8))),
            ]
        )
    if rng.random() < 0.5:
        return {
            f"k{i}_{rng.randint(0, 9)}": random_json(rng, depth - 1)
            for i in range(rng.randint(0, 5))
        }
    return [random_json(rng, depth - 1) for _ in range(rng.randint(0, 5))]


def random_csv(rng: random.Random, max_rows=50, max_cols=10) -> bytes:
    import csv as csv_mod
    import io as io_mod

    rows = rng.randint(0, max_rows)
    cols = rng.randint(1, max_cols)
    buf = io_mod.StringIO()
    writer = csv_mod.writer(buf, lineterminator="\n")
    for _ in range(rows):
        writer.writerow(
            [
                rng.choice(["", "plain", 'quo"te', "comma,inside", "li\nne", "1034"])
                for _ in range(cols)
            ]
        )
    return buf.getvalue().encode()


def random_xml(rng: random.Random, depth=4) -> bytes:
    def element(d):
        name = rng.choice(["a", "b", "rec", "OGT"])
        attrs = "".join(
            f' at{i}="v{rng.randint(0, 9)}"' for i in range(rng.randint(0, 3))
        )
        if d == 0:
            return f"<{name}{attrs}>text{rng.randint(0, 9)}</{name}>"
        children = "".join(element(d - 1) for _ in range(rng.randint(0, 3)))
        return f"<{name}{attrs}>{children}</{name}>"

    return element(depth).encode()


# ---------------------------------------------------------------------------
# Hand-built Malevich tree from the worked JSON example.


def malevich_tree() -> FacadeTree:
    ukr = FacadeContainer(
        slots=(
            (StringKey("name"), FacadeValue("Ukrayina")),
            (StringKey("type"), FacadeValue("nation")),
        )
    )
    mos = FacadeContainer(
        slots=(
            (StringKey("name"), FacadeValue("Moskva, Rossiya")),
            (StringKey("type"), FacadeValue("inhabited_place")),
        )
    )
    places = FacadeContainer(slots=((NumberKey(1), ukr), (NumberKey(2), mos)))
    root = FacadeContainer(
        slots=(
            (StringKey("fc"), FacadeValue("Kazimir Malevich")),
            (StringKey("id"), FacadeValue("1561", "integer")),
            (StringKey("places"), places),
            (
                StringKey("url"),
                FacadeValue("http://www.tate.org.uk/art/artists/kazimir-malevich-1561"),
            ),
        )
    )
    return FacadeTree(root, "file:./malevich.json")
