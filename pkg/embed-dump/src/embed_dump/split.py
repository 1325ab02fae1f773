"""Sentence unit extraction: line passthrough or a rule-based splitter."""

import re

SPLIT_NONE = "none"
SPLIT_RULES = "rules"
SPLITTERS = (SPLIT_NONE, SPLIT_RULES)

# sentence-final punctuation, optionally one closing wrapper, then a
# new sentence opener; only the whitespace is consumed, so pieces
# rejoin losslessly when an abbreviation fooled the boundary
_BOUNDARY = re.compile(
    r'(?:(?<=[.!?])|(?<=[.!?]["\')\]]))\s+(?=["\'(\[]?[A-Z0-9])'
)

# titles and latinisms whose trailing period does not end a sentence
_ABBREVS = frozenset((
    "mr", "mrs", "ms", "dr", "prof", "rev", "gen", "sen", "st",
    "vs", "etc", "al", "no", "vol", "fig", "eq", "cf", "approx",
    "e.g", "i.e",
))


def _ends_with_abbreviation(chunk: str) -> bool:
    m = re.search(r"(\S+)$", chunk)
    if m is None:
        return False
    word = m.group(1).strip("\"')]")
    if not word.endswith("."):
        return False
    core = word[:-1].lower()
    if core in _ABBREVS:
        return True
    # single-letter initials, as in "J. Smith"
    return len(core) == 1 and core.isalpha()


def split_sentences(text: str) -> list[str]:
    """Rule-based splitting; blank lines are hard paragraph breaks."""
    units = []
    for para in re.split(r"\n\s*\n", text):
        para = " ".join(para.split())
        if not para:
            continue
        buf = ""
        for piece in _BOUNDARY.split(para):
            buf = piece if not buf else buf + " " + piece
            if _ends_with_abbreviation(buf):
                continue
            units.append(buf)
            buf = ""
        if buf:
            units.append(buf)
    return units


def load_units(path, splitter: str) -> list[str]:
    """Sentence units of a UTF-8 file under the chosen splitter."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if splitter == SPLIT_NONE:
        return [line.strip() for line in text.splitlines() if line.strip()]
    if splitter == SPLIT_RULES:
        return split_sentences(text)
    raise ValueError(f"unknown splitter {splitter!r}")
