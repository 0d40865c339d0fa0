"""Loaders for the data files bundled with the package.

The package ships the discrete IPA symbol table, the 69-token elicitation
paragraph read by 20 speakers (one native reference + 19 test speakers), a
55-word lexicon of the paragraph's vocabulary, a distractor word list that
pads the recognition vocabulary, and the published French-speaker
transformation table used as a regression reference.

The full 2000-word recognition inventory from the original experiments is
not redistributable; ``evaluation_lexicon`` accepts an optional path to a
user-supplied copy and otherwise falls back to paragraph + distractor words.
"""

from __future__ import annotations

import importlib.resources as ir
from contextlib import ExitStack

from .harness import SpeakerTranscript, load_reference_table, load_transcript
from .lexicon import Lexicon, load_lexicon, merge_lexicons, overlay_lexicons
from .phonology import SymbolTable

_DATA = "accenthmm", "data"

NATIVE_SPEAKER = "native"


def _data_path(stack: ExitStack, *parts: str):
    resource = ir.files(_DATA[0]).joinpath(_DATA[1], *parts)
    return stack.enter_context(ir.as_file(resource))


def load_symbols() -> SymbolTable:
    """The bundled IPA symbol table."""
    with ExitStack() as stack:
        return SymbolTable.load(_data_path(stack, "symbols.tsv"))


def load_paragraph_lexicon(symbols: SymbolTable | None = None) -> Lexicon:
    """The 55 words of the elicitation paragraph with native pronunciations."""
    if symbols is None:
        symbols = load_symbols()
    with ExitStack() as stack:
        return load_lexicon(_data_path(stack, "paragraph_lexicon.tsv"), symbols)


def load_distractors(symbols: SymbolTable | None = None) -> Lexicon:
    """Words outside the paragraph that pad the recognition vocabulary."""
    if symbols is None:
        symbols = load_symbols()
    with ExitStack() as stack:
        return load_lexicon(_data_path(stack, "distractors.tsv"), symbols)


def evaluation_lexicon(symbols: SymbolTable | None = None,
                       inventory_path=None) -> Lexicon:
    """The recognition vocabulary for the paragraph experiments.

    With ``inventory_path`` the user-supplied word list is merged over the
    paragraph lexicon (paragraph pronunciations win on conflicts); without
    it the bundled distractor list stands in for the full inventory.
    """
    if symbols is None:
        symbols = load_symbols()
    paragraph = load_paragraph_lexicon(symbols)
    if inventory_path is not None:
        return overlay_lexicons(paragraph, load_lexicon(inventory_path, symbols))
    return merge_lexicons(paragraph, load_distractors(symbols))


def speaker_names() -> list[str]:
    """Bundled transcript names: the native reference plus 19 speakers."""
    names = []
    for entry in ir.files(_DATA[0]).joinpath(_DATA[1], "transcripts").iterdir():
        if entry.name.endswith(".tsv"):
            names.append(entry.name[: -len(".tsv")])
    return sorted(names)


def subject_names() -> list[str]:
    """The 19 experiment subjects (everything but the native reference)."""
    return [n for n in speaker_names() if n != NATIVE_SPEAKER]


def load_speaker(name: str, symbols: SymbolTable | None = None) -> SpeakerTranscript:
    """One bundled speaker's 69-token paragraph transcript."""
    if symbols is None:
        symbols = load_symbols()
    with ExitStack() as stack:
        return load_transcript(
            _data_path(stack, "transcripts", f"{name}.tsv"), symbols
        )


def load_reference_transformations(symbols: SymbolTable | None = None):
    """Published French-speaker transformation counts (learning set)."""
    if symbols is None:
        symbols = load_symbols()
    with ExitStack() as stack:
        return load_reference_table(
            _data_path(stack, "reference_transformations.tsv"), symbols
        )
