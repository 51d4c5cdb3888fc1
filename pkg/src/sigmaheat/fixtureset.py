"""Checked-in transcriptions of the published operator tables.

File format (``fixtures/g<genus>/<name>.txt``)::

    # comment lines start with '#'
    genus 4, H_{2}
    1/2 d1^2 + z1 d3 + ... -
    - 7/18 l4 z1^2 + ...

    genus 4, w_{2,1}
    ...

* A block is a header line ``genus <g>, <kind>_{<label>}`` followed by one
  or more expression lines, and ends at a blank line or the next header.
  ``kind`` is ``H`` (label ``2k``), ``scriptL`` (label ``2k``) or ``w``
  (label ``2k,j``).  Labels are kept exactly as printed, so a label may fail
  to resolve to integers; that is reported, not repaired.
* Expression lines use the text grammar of :mod:`sigmaheat.textio`.
* Line breaks follow the printed layout.  When a line ends with ``+`` or
  ``-`` and the next line starts with ``+`` or ``-``, the operator at the
  end of the line is a typesetting repeat and is dropped; the one starting
  the next line is the sign of the following term.  A trailing operator
  followed by a line without a leading sign is kept.

Corrections live in ``overlay.txt`` next to the tables, never in the tables
themselves.  Each non-comment overlay line is one directive::

    relabel <kind>_{<label>} [#n] -> <kind>_{<label>} ; <reason>
    replace <kind>_{<label>} [#n] :: <old text> => <new text> ; <reason>

``#n`` selects the n-th block carrying that label (default 1).  ``replace``
edits the joined expression text and fails if ``<old text>`` is absent.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .errors import FixtureParseError, ParseError
from .textio import parse_expr, parse_weyl

KINDS = ("H", "scriptL", "w")
_HEADER = re.compile(r"^genus\s+(\d+),\s*(H|scriptL|w)_\{([^}]*)\}\s*$")
_DIRECTIVE = re.compile(
    r"^(?P<verb>relabel|replace)\s+(?P<kind>H|scriptL|w)_\{(?P<label>[^}]*)\}\s*(?:#(?P<nth>\d+))?\s*"
    r"(?:->\s*(?P=kind)_\{(?P<new_label>[^}]*)\}|::\s*(?P<old>.+?)\s*=>\s*(?P<new>.+?))\s*;\s*(?P<reason>.+)$"
)


@dataclass(frozen=True)
class FixtureBlock:
    genus: int
    kind: str
    label: str
    text: str
    source: str
    line: int
    occurrence: int = 1
    corrections: tuple[str, ...] = ()

    @property
    def name(self) -> str:
        return f"{self.kind}_{{{self.label}}}"

    def indices(self) -> tuple[int, ...] | None:
        """Label parts as integers, ``None`` if any part is not a number."""
        try:
            return tuple(int(p) for p in self.label.split(","))
        except ValueError:
            return None

    def expr(self):
        try:
            return parse_expr(self.text)
        except ParseError as exc:
            raise FixtureParseError(f"{self.source}:{self.line}: {self.name}: {exc}") from exc


@dataclass(frozen=True)
class OverlayEntry:
    verb: str
    kind: str
    label: str
    nth: int
    reason: str
    new_label: str | None = None
    old: str | None = None
    new: str | None = None
    line: int = 0

    def describe(self) -> str:
        target = f"{self.kind}_{{{self.label}}}" + (f" #{self.nth}" if self.nth > 1 else "")
        if self.verb == "relabel":
            return f"relabel {target} -> {self.kind}_{{{self.new_label}}}: {self.reason}"
        return f"replace in {target} '{self.old}' -> '{self.new}': {self.reason}"


def join_lines(lines: list[str]) -> str:
    """Join printed lines, dropping typesetting repeats of a sign at a break."""
    out: list[str] = []
    for n, line in enumerate(lines):
        text = line.strip()
        nxt = lines[n + 1].strip() if n + 1 < len(lines) else ""
        if text and text[-1] in "+-" and nxt[:1] in ("+", "-"):
            text = text[:-1].rstrip()
        out.append(text)
    return " ".join(t for t in out if t)


def parse_fixture_text(text: str, source: str = "<string>") -> list[FixtureBlock]:
    blocks: list[FixtureBlock] = []
    seen: dict[tuple[str, str], int] = {}
    current: dict | None = None

    def close():
        if current is None:
            return
        if not current["lines"]:
            raise FixtureParseError(f"{source}:{current['line']}: header without expression")
        key = (current["kind"], current["label"])
        seen[key] = seen.get(key, 0) + 1
        blocks.append(FixtureBlock(
            current["genus"], current["kind"], current["label"], join_lines(current["lines"]),
            source, current["line"], seen[key],
        ))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            close()
            current = None
            continue
        m = _HEADER.match(line)
        if m:
            close()
            current = {"genus": int(m.group(1)), "kind": m.group(2), "label": m.group(3).strip(),
                       "line": lineno, "lines": []}
            continue
        if current is None:
            raise FixtureParseError(f"{source}:{lineno}: expression outside a block")
        current["lines"].append(line)
    close()
    return blocks


def parse_overlay_text(text: str, source: str = "<overlay>") -> list[OverlayEntry]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _DIRECTIVE.match(line)
        if not m:
            raise FixtureParseError(f"{source}:{lineno}: malformed overlay directive")
        if (m.group("verb") == "relabel") != (m.group("new_label") is not None):
            raise FixtureParseError(f"{source}:{lineno}: directive verb does not match its form")
        out.append(OverlayEntry(
            m.group("verb"), m.group("kind"), m.group("label").strip(), int(m.group("nth") or 1),
            m.group("reason").strip(), m.group("new_label"), m.group("old"), m.group("new"), lineno,
        ))
    return out


def apply_overlay(blocks: list[FixtureBlock], overlay: list[OverlayEntry]) -> list[FixtureBlock]:
    """Corrected copy of ``blocks``; block positions are preserved."""
    out = list(blocks)
    for entry in overlay:
        hits = [n for n, b in enumerate(blocks)
                if (b.kind, b.label, b.occurrence) == (entry.kind, entry.label, entry.nth)]
        if not hits:
            raise FixtureParseError(f"overlay line {entry.line}: no block {entry.kind}_{{{entry.label}}} #{entry.nth}")
        n = hits[0]
        b = out[n]
        if entry.verb == "relabel":
            b = replace(b, label=entry.new_label)
        else:
            if entry.old not in b.text:
                raise FixtureParseError(f"overlay line {entry.line}: '{entry.old}' not found in {b.name}")
            b = replace(b, text=b.text.replace(entry.old, entry.new, 1))
        out[n] = replace(b, corrections=b.corrections + (entry.describe(),))
    return out


def fixture_root() -> Path:
    return Path(str(resources.files("sigmaheat") / "fixtures"))


@dataclass
class FixtureSet:
    """Verbatim tables for one genus plus the optional correction overlay."""

    genus: int
    blocks: list[FixtureBlock] = field(default_factory=list)
    overlay: list[OverlayEntry] = field(default_factory=list)

    def corrected_blocks(self) -> list[FixtureBlock]:
        return apply_overlay(self.blocks, self.overlay)

    def of_kind(self, kind: str, corrected: bool = False) -> list[FixtureBlock]:
        src = self.corrected_blocks() if corrected else self.blocks
        return [b for b in src if b.kind == kind]

    def h_operators(self, corrected: bool = False):
        """``(label, k, H_2k)`` for every ``H`` block."""
        for b in self.of_kind("H", corrected):
            idx = b.indices()
            if idx is None or len(idx) != 1 or idx[0] % 2:
                raise FixtureParseError(f"{b.source}:{b.line}: bad operator label {b.name}")
            try:
                op = parse_weyl(b.text, self.genus)
            except ParseError as exc:
                raise FixtureParseError(f"{b.source}:{b.line}: {exc}") from exc
            yield b.name, idx[0] // 2, op

    def script_l(self, corrected: bool = False):
        """``(label, k, DerivationOperator)`` for every ``scriptL`` block."""
        from .derivations import script_l_from_expr

        for b in self.of_kind("scriptL", corrected):
            idx = b.indices()
            if idx is None or len(idx) != 1 or idx[0] % 2:
                raise FixtureParseError(f"{b.source}:{b.line}: bad operator label {b.name}")
            try:
                op = script_l_from_expr(b.expr(), self.genus)
            except ParseError as exc:
                raise FixtureParseError(f"{b.source}:{b.line}: {exc}") from exc
            yield b.name, idx[0] // 2, op

    def w_entries(self, corrected: bool = False):
        """``(block, k, j, PsiPoly)``; ``k`` and ``j`` are ``None`` for unresolved labels."""
        from .derivations import to_psi_poly

        for b in self.of_kind("w", corrected):
            idx = b.indices()
            k = j = None
            if idx is not None and len(idx) == 2 and idx[0] % 2 == 0:
                k, j = idx[0] // 2, idx[1]
            try:
                poly = to_psi_poly(b.expr(), self.genus)
            except ParseError as exc:
                raise FixtureParseError(f"{b.source}:{b.line}: {exc}") from exc
            yield b, k, j, poly

    def kinds(self) -> set[str]:
        return {b.kind for b in self.blocks}


def load_fixtures(genus: int, root: Path | str | None = None, with_overlay: bool = True) -> FixtureSet:
    """Read ``g<genus>/*.txt`` under ``root`` (the bundled tables by default)."""
    base = Path(root) if root is not None else fixture_root()
    gdir = base / f"g{genus}"
    if not gdir.is_dir():
        raise FixtureParseError(f"no fixtures for genus {genus} under {base}")
    fs = FixtureSet(genus)
    for path in sorted(gdir.glob("*.txt")):
        if path.name == "overlay.txt":
            if with_overlay:
                fs.overlay = parse_overlay_text(path.read_text(), str(path))
            continue
        blocks = parse_fixture_text(path.read_text(), str(path))
        for b in blocks:
            if b.genus != genus:
                raise FixtureParseError(f"{path}:{b.line}: header says genus {b.genus}, directory says {genus}")
        fs.blocks += blocks
    return fs


def available_genera(root: Path | str | None = None) -> list[int]:
    base = Path(root) if root is not None else fixture_root()
    out = []
    for p in base.glob("g*"):
        if p.is_dir() and p.name[1:].isdigit():
            out.append(int(p.name[1:]))
    return sorted(out)


__all__ = [
    "FixtureBlock",
    "FixtureSet",
    "OverlayEntry",
    "apply_overlay",
    "available_genera",
    "join_lines",
    "load_fixtures",
    "parse_fixture_text",
    "parse_overlay_text",
]
