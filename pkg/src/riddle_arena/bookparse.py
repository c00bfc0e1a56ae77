"""Textbook markup parsing and passage segmentation.

The declared markup subset: h1 opens a chapter, h2 opens a section, p is
a paragraph. Text from any other element flattens into the enclosing
paragraph; script/style content is dropped. Stray text between block
tags coalesces into synthetic paragraphs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path
from typing import BinaryIO, Iterable, TextIO, Union

STRUCTURAL_TAGS = {"h1", "h2", "p"}
VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "source", "track", "wbr",
}
SKIP_TAGS = {"script", "style"}


class BookParseError(ValueError):
    """Malformed markup; carries the byte offset of the offending tag."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(f"{message} (byte offset {offset})" if offset is not None else message)
        self.offset = offset


@dataclass
class BookNode:
    """Tree node: book -> chapters -> sections/paragraphs -> paragraphs."""

    kind: str  # book | chapter | section | paragraph
    title: str = ""
    text: str = ""
    children: list["BookNode"] = field(default_factory=list)


@dataclass
class Passage:
    """A retrieval unit of one or more merged consecutive paragraphs."""

    id: str
    source_book: str
    heading_path: list[str]
    text: str
    word_count: int

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source_book": self.source_book,
            "heading_path": self.heading_path,
            "text": self.text,
            "word_count": self.word_count,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Passage":
        return cls(
            id=d["id"],
            source_book=d["source_book"],
            heading_path=list(d["heading_path"]),
            text=d["text"],
            word_count=d["word_count"],
        )


def _collapse(parts: list[str]) -> str:
    return " ".join(" ".join(parts).split())


class _BookBuilder(HTMLParser):
    def __init__(self, book_name: str, raw: str):
        super().__init__(convert_charrefs=True)
        self.raw = raw
        self.book = BookNode(kind="book", title=book_name)
        self.chapter: BookNode | None = None
        self.section: BookNode | None = None
        self.stack: list[str] = []
        self.capture: str | None = None  # structural tag currently collecting text
        self.buffer: list[str] = []
        self.stray: list[str] = []
        self.skip_depth = 0

    # -- error helpers -------------------------------------------------
    def _offset(self) -> int:
        lineno, col = self.getpos()
        chars = sum(len(line) + 1 for line in self.raw.split("\n")[: lineno - 1]) + col
        return len(self.raw[:chars].encode("utf-8"))

    def _fail(self, message: str) -> None:
        raise BookParseError(message, self._offset())

    # -- tree helpers ----------------------------------------------------
    def _ensure_chapter(self) -> BookNode:
        if self.chapter is None:
            self.chapter = BookNode(kind="chapter", title="")
            self.book.children.append(self.chapter)
        return self.chapter

    def _container(self) -> BookNode:
        return self.section if self.section is not None else self._ensure_chapter()

    def _flush_stray(self) -> None:
        text = _collapse(self.stray)
        self.stray = []
        if text:
            self._container().children.append(BookNode(kind="paragraph", text=text))

    # -- parser callbacks ------------------------------------------------
    def handle_starttag(self, tag, attrs):
        if tag in VOID_TAGS:
            return
        self.stack.append(tag)
        if tag in SKIP_TAGS:
            self.skip_depth += 1
            return
        if tag in STRUCTURAL_TAGS:
            if self.capture is not None:
                self._fail(f"<{tag}> opened inside <{self.capture}>")
            self._flush_stray()
            self.capture = tag
            self.buffer = []

    def handle_startendtag(self, tag, attrs):
        # self-closing form of a non-void tag contributes nothing
        if tag in VOID_TAGS:
            return

    def handle_endtag(self, tag):
        if tag in VOID_TAGS:
            return
        if not self.stack or self.stack[-1] != tag:
            self._fail(f"unexpected </{tag}>")
        self.stack.pop()
        if tag in SKIP_TAGS:
            self.skip_depth -= 1
            return
        if tag not in STRUCTURAL_TAGS or self.capture != tag:
            return

        text = _collapse(self.buffer)
        self.capture = None
        self.buffer = []
        if tag == "h1":
            self.chapter = BookNode(kind="chapter", title=text)
            self.book.children.append(self.chapter)
            self.section = None
        elif tag == "h2":
            self._ensure_chapter()
            self.section = BookNode(kind="section", title=text)
            self.chapter.children.append(self.section)
        elif text:
            self._container().children.append(BookNode(kind="paragraph", text=text))

    def handle_data(self, data):
        if self.skip_depth:
            return
        if self.capture is not None:
            self.buffer.append(data)
        else:
            self.stray.append(data)

    def finish(self) -> BookNode:
        self.close()
        if self.stack:
            raise BookParseError(f"unclosed <{self.stack[-1]}> at end of document")
        self._flush_stray()
        if not self.book.children:
            raise BookParseError("empty document")
        return self.book


def parse_book(markup: Union[bytes, str, BinaryIO], book_name: str) -> BookNode:
    """Parse markup into a book tree. Raises BookParseError on unbalanced
    or overlapping tags (with byte offset) and on empty documents."""
    if isinstance(markup, bytes):
        raw = markup.decode("utf-8")
    elif isinstance(markup, str):
        raw = markup
    else:
        raw = markup.read()
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
    builder = _BookBuilder(book_name, raw)
    builder.feed(raw)
    return builder.finish()


def _word_count(text: str) -> int:
    return len(text.split())


def segment_passages(tree: BookNode, max_words: int = 200) -> list[Passage]:
    """Greedily merge consecutive paragraphs into passages of at most
    max_words words (an oversized single paragraph stays whole)."""
    if max_words < 20:
        raise ValueError("max_words must be >= 20")

    passages: list[Passage] = []

    def emit(group: list[BookNode], heading: list[str], ci: int, si: int) -> None:
        batch: list[str] = []
        batch_words = 0
        index = 0

        def flush() -> None:
            nonlocal batch, batch_words, index
            if not batch:
                return
            index += 1
            text = " ".join(batch)
            passages.append(
                Passage(
                    id=f"{tree.title}/{ci}/{si}/{index}",
                    source_book=tree.title,
                    heading_path=heading,
                    text=text,
                    word_count=_word_count(text),
                )
            )
            batch = []
            batch_words = 0

        for para in group:
            w = _word_count(para.text)
            if batch and batch_words + w > max_words:
                flush()
            batch.append(para.text)
            batch_words += w
        flush()

    for ci, chapter in enumerate(tree.children, start=1):
        direct = [c for c in chapter.children if c.kind == "paragraph"]
        heading = [t for t in (chapter.title,) if t]
        emit(direct, heading, ci, 0)
        si = 0
        for child in chapter.children:
            if child.kind != "section":
                continue
            si += 1
            heading = [t for t in (chapter.title, child.title) if t]
            emit([c for c in child.children if c.kind == "paragraph"], heading, ci, si)
    return passages


def write_passages_jsonl(passages: Iterable[Passage], dest: Union[str, Path, TextIO]) -> None:
    own = isinstance(dest, (str, Path))
    fp = open(dest, "w", encoding="utf-8") if own else dest
    try:
        for p in passages:
            fp.write(json.dumps(p.to_dict()) + "\n")
    finally:
        if own:
            fp.close()


def load_passages_jsonl(source: Union[str, Path, TextIO]) -> list[Passage]:
    own = isinstance(source, (str, Path))
    fp = open(source, "r", encoding="utf-8") if own else source
    try:
        return [Passage.from_dict(json.loads(line)) for line in fp if line.strip()]
    finally:
        if own:
            fp.close()
