"""Built-in roster of small p-groups the verification suites run over.

Each entry carries a presentation in the text grammar, the prime, the
order the presentation enumerates to, and the multiplier invariants the
three independent routes must agree on.  Multiplier values tagged
"derived:bar" were computed by the bar-resolution route and frozen after
the other two routes reproduced them; "trivial" marks groups whose
multiplier vanishes for elementary reasons (cyclic groups).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .words import parse_presentation


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    p: int
    presentation_text: str
    expected_order: int | None
    expected_h2: tuple[int, ...] | None
    h2_provenance: str | None = None

    def presentation(self):
        pres = parse_presentation(self.presentation_text)
        if pres.name is None:
            pres.name = self.name
        return pres


_ENTRIES = [
    CatalogEntry("C2", 2, "gens a\nrels a^2", 2, (), "trivial"),
    CatalogEntry("C3", 3, "gens a\nrels a^3", 3, (), "trivial"),
    CatalogEntry("C4", 2, "gens a\nrels a^4", 4, (), "trivial"),
    CatalogEntry("C8", 2, "gens a\nrels a^8", 8, (), "trivial"),
    CatalogEntry("C2xC2", 2, "gens a, b\nrels a^2, b^2, [a,b]", 4, (2,), "derived:bar"),
    CatalogEntry("C2xC4", 2, "gens a, b\nrels a^2, b^4, [a,b]", 8, (2,), "derived:bar"),
    CatalogEntry("D8", 2, "gens a, b\nrels a^4, b^2, (a*b)^2", 8, (2,), "derived:bar"),
    CatalogEntry("Q8", 2, "gens a, b\nrels a^4, a^2*b^-2, b^-1*a*b*a", 8, (), "derived:bar"),
    CatalogEntry("C9", 3, "gens a\nrels a^9", 9, (), "trivial"),
    CatalogEntry("C3xC3", 3, "gens a, b\nrels a^3, b^3, [a,b]", 9, (3,), "derived:bar"),
    CatalogEntry(
        "Heis27",
        3,
        "gens a, b, c\nrels a^3, b^3, c^3, [a,b]*c^-1, [a,c], [b,c]",
        27,
        (3, 3),
        "derived:bar",
    ),
    CatalogEntry(
        "Mod27",
        3,
        "gens a, b\nrels a^9, b^3, b^-1*a*b*a^-4",
        27,
        (),
        "derived:bar",
    ),
]


def builtin_catalog() -> list[CatalogEntry]:
    return list(_ENTRIES)


def catalog_entry(name: str) -> CatalogEntry:
    for entry in _ENTRIES:
        if entry.name == name:
            return entry
    known = ", ".join(e.name for e in _ENTRIES)
    raise KeyError(f"no catalog entry {name!r} (known: {known})")


def load_catalog_dir(path: str) -> list[CatalogEntry]:
    """Entries from a directory of presentation files (*.pres / *.txt).
    Loaded entries carry no expected values; the prime is inferred when
    the enumerated order is a prime power, so suites that need `p` will
    still work after the base group is built."""
    entries = []
    for fname in sorted(os.listdir(path)):
        stem, ext = os.path.splitext(fname)
        if ext not in (".pres", ".txt"):
            continue
        with open(os.path.join(path, fname)) as fh:
            text = fh.read()
        pres = parse_presentation(text)
        entries.append(
            CatalogEntry(
                name=pres.name or stem,
                p=0,
                presentation_text=text,
                expected_order=None,
                expected_h2=None,
            )
        )
    if not entries:
        raise ValueError(f"no presentation files in {path!r}")
    return entries
