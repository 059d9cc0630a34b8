"""Method-level corpus construction.

Turns Java-like source trees into MethodDocuments using a lightweight
lexer and brace matching (no compiler frontend), and reads/writes the
line-delimited JSON corpus format.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path


class CorpusError(Exception):
    pass


@dataclass(frozen=True)
class MethodDocument:
    method_id: str
    file_path: str
    method_name: str
    body_text: str
    comments: str
    literals: tuple[str, ...]
    start_line: int
    end_line: int

    def __post_init__(self):
        if self.start_line < 1 or self.end_line < self.start_line:
            raise CorpusError(
                f"bad line range {self.start_line}..{self.end_line} for {self.method_id}"
            )


@dataclass(frozen=True)
class Corpus:
    documents: tuple[MethodDocument, ...]
    source_label: str = ""

    def __post_init__(self):
        ids = [d.method_id for d in self.documents]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise CorpusError(f"duplicate method_id: {dupes[0]}")
        object.__setattr__(
            self, "documents", tuple(sorted(self.documents, key=lambda d: d.method_id))
        )


@dataclass(frozen=True)
class LanguageProfile:
    """Extraction profile for brace-delimited languages."""
    name: str = "java"
    extensions: tuple[str, ...] = (".java",)
    type_keywords: frozenset[str] = frozenset({"class", "interface", "enum", "record"})
    control_keywords: frozenset[str] = frozenset(
        {"if", "for", "while", "switch", "catch", "synchronized", "do",
         "else", "try", "return", "new", "throw", "assert"}
    )


JAVA_PROFILE = LanguageProfile()


@dataclass
class _Tok:
    text: str
    line: int


@dataclass
class _Lexed:
    tokens: list[_Tok] = field(default_factory=list)
    comments: list[tuple[int, int, str]] = field(default_factory=list)  # start, end, text
    literals: list[tuple[int, str]] = field(default_factory=list)


def _lex(source: str) -> _Lexed:
    out = _Lexed()
    i, n, line = 0, len(source), 1
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            i += 1
        elif ch == "/" and i + 1 < n and source[i + 1] == "/":
            start = i + 2
            while i < n and source[i] != "\n":
                i += 1
            out.comments.append((line, line, source[start:i].strip()))
        elif ch == "/" and i + 1 < n and source[i + 1] == "*":
            start_line = line
            i += 2
            start = i
            while i + 1 < n and not (source[i] == "*" and source[i + 1] == "/"):
                if source[i] == "\n":
                    line += 1
                i += 1
            text = source[start:i]
            i = min(i + 2, n)
            cleaned = "\n".join(l.strip().lstrip("*").strip() for l in text.splitlines())
            out.comments.append((start_line, line, cleaned.strip()))
        elif ch in "\"'":
            quote = ch
            i += 1
            start = i
            while i < n and source[i] != quote:
                if source[i] == "\\":
                    i += 1
                elif source[i] == "\n":
                    line += 1
                i += 1
            if quote == '"':
                out.literals.append((line, source[start:i]))
            i += 1
        elif ch.isalnum() or ch == "_":
            start = i
            while i < n and (source[i].isalnum() or source[i] == "_"):
                i += 1
            out.tokens.append(_Tok(source[start:i], line))
        elif ch.isspace():
            i += 1
        else:
            out.tokens.append(_Tok(ch, line))
            i += 1
    return out


@dataclass
class _Frame:
    kind: str  # "type", "method" or "block"
    name: str = ""
    start_line: int = 0
    arity: int = 0
    open_line: int = 0


def _paren_group_before(stmt: list[_Tok]) -> tuple[int, int] | None:
    """Indexes (open, close) of the last parenthesis group in a statement,
    allowing a trailing `throws A, B` clause after it."""
    j = len(stmt) - 1
    while j >= 0 and (stmt[j].text in {",", "."} or stmt[j].text.isidentifier()):
        if stmt[j].text == "throws":
            j -= 1
            break
        j -= 1
    if j < 0 or stmt[j].text != ")":
        return None
    depth = 0
    close = j
    while j >= 0:
        if stmt[j].text == ")":
            depth += 1
        elif stmt[j].text == "(":
            depth -= 1
            if depth == 0:
                return (j, close)
        j -= 1
    return None


def _count_params(stmt: list[_Tok], open_: int, close: int) -> int:
    if close == open_ + 1:
        return 0
    commas = 0
    depth = 0
    for t in stmt[open_ + 1 : close]:
        if t.text in "([<":
            depth += 1
        elif t.text in ")]>":
            depth -= 1
        elif t.text == "," and depth == 0:
            commas += 1
    return commas + 1


def _classify_header(stmt: list[_Tok], profile: LanguageProfile, parent_kind: str) -> _Frame:
    """Decide what the `{` that follows this statement opens."""
    texts = [t.text for t in stmt]
    for k, t in enumerate(texts):
        if t in profile.type_keywords and k + 1 < len(texts) and texts[k + 1].isidentifier():
            return _Frame(kind="type", name=texts[k + 1])
    if parent_kind not in ("top", "type"):
        return _Frame(kind="block")
    if "=" in texts:
        return _Frame(kind="block")
    group = _paren_group_before(stmt)
    if group is not None:
        open_, close = group
        if open_ >= 1:
            name_tok = stmt[open_ - 1]
            if name_tok.text.isidentifier() and name_tok.text not in profile.control_keywords:
                return _Frame(
                    kind="method",
                    name=name_tok.text,
                    start_line=stmt[0].line,
                    arity=_count_params(stmt, open_, close),
                )
        return _Frame(kind="block")
    if parent_kind == "type" and (not texts or texts == ["static"]):
        # static or instance initializer block
        return _Frame(kind="method", name="initializer", start_line=0, arity=0)
    return _Frame(kind="block")


def _attach_comments(lexed: _Lexed, start: int, end: int) -> str:
    picked = [c for c in lexed.comments if start <= c[1] <= end]
    # comment block ending on the line right above the header, chained upward
    boundary = start - 1
    above = []
    for c in sorted(lexed.comments, key=lambda c: -c[1]):
        if c[1] == boundary:
            above.append(c)
            boundary = c[0] - 1
    picked = sorted(above, key=lambda c: c[0]) + picked
    return "\n".join(c[2] for c in picked if c[2])


def extract_file(path: Path, rel_path: str, profile: LanguageProfile,
                 diagnostics: list[str]) -> list[MethodDocument]:
    try:
        source = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        diagnostics.append(f"warning: unreadable file {rel_path}: {exc}")
        return []
    lexed = _lex(source)
    lines = source.splitlines()

    docs: list[MethodDocument] = []
    stack: list[_Frame] = []
    stmt: list[_Tok] = []
    for tok in lexed.tokens:
        if tok.text == "{":
            parent = stack[-1].kind if stack else "top"
            frame = _classify_header(stmt, profile, parent)
            frame.open_line = tok.line
            if frame.kind == "method" and frame.start_line == 0:
                frame.start_line = stmt[0].line if stmt else tok.line
            stack.append(frame)
            stmt = []
        elif tok.text == "}":
            if not stack:
                diagnostics.append(
                    f"diagnostic: unbalanced braces in {rel_path} at line {tok.line}; file skipped"
                )
                return []
            frame = stack.pop()
            if frame.kind == "method":
                start, end = frame.start_line, tok.line
                body = "\n".join(lines[start - 1 : end])
                literals = tuple(t for ln, t in lexed.literals if start <= ln <= end)
                class_names = [f.name for f in stack if f.kind == "type"]
                qual = ".".join(class_names + [frame.name])
                docs.append(MethodDocument(
                    method_id=f"{rel_path}#{qual}({frame.arity})",
                    file_path=rel_path,
                    method_name=frame.name,
                    body_text=body,
                    comments=_attach_comments(lexed, start, end),
                    literals=literals,
                    start_line=start,
                    end_line=end,
                ))
            stmt = []
        elif tok.text == ";":
            stmt = []
        else:
            stmt.append(tok)
    if stack:
        diagnostics.append(
            f"diagnostic: unbalanced braces in {rel_path} at line {stack[-1].open_line}; file skipped"
        )
        return []
    return docs


def extract_methods(source_root: str | Path, profile: LanguageProfile = JAVA_PROFILE,
                    source_label: str = "",
                    diagnostics: list[str] | None = None) -> Corpus:
    """Extract every method/constructor body under source_root."""
    root = Path(source_root)
    if not root.is_dir():
        raise CorpusError(f"source root does not exist: {root}")
    if diagnostics is None:
        diagnostics = []
    docs: list[MethodDocument] = []
    files = sorted(p for p in root.rglob("*") if p.suffix in profile.extensions and p.is_file())
    for path in files:
        rel = path.relative_to(root).as_posix()
        docs.extend(extract_file(path, rel, profile, diagnostics))
    seen: dict[str, int] = {}
    unique: list[MethodDocument] = []
    for d in sorted(docs, key=lambda d: (d.method_id, d.start_line)):
        if d.method_id in seen:
            d = MethodDocument(
                method_id=f"{d.method_id}@L{d.start_line}",
                file_path=d.file_path, method_name=d.method_name,
                body_text=d.body_text, comments=d.comments, literals=d.literals,
                start_line=d.start_line, end_line=d.end_line,
            )
        seen[d.method_id] = 1
        unique.append(d)
    if not unique:
        raise CorpusError("no methods extracted")
    return Corpus(documents=tuple(unique), source_label=source_label or root.name)


def corpus_digest(corpus: Corpus) -> str:
    """Content hash of the canonical corpus serialization."""
    h = hashlib.sha256()
    for d in corpus.documents:
        rec = (d.method_id, d.file_path, d.method_name, d.body_text,
               d.comments, list(d.literals), d.start_line, d.end_line)
        h.update(json.dumps(rec, ensure_ascii=False).encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def load_corpus(path: str | Path, source_label: str = "") -> Corpus:
    """Load a line-delimited JSON corpus file."""
    docs = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}: malformed record at line {lineno}: {exc}") from exc
            missing = {"id", "path", "name", "body", "start", "end"} - rec.keys()
            if missing:
                raise CorpusError(
                    f"{path}: record at line {lineno} missing field(s): {', '.join(sorted(missing))}"
                )
            if rec["id"] in seen:
                raise CorpusError(f"{path}: duplicate method_id: {rec['id']}")
            seen.add(rec["id"])
            docs.append(MethodDocument(
                method_id=rec["id"],
                file_path=rec["path"],
                method_name=rec["name"],
                body_text=rec["body"],
                comments=rec.get("comments", ""),
                literals=tuple(rec.get("literals", ())),
                start_line=int(rec["start"]),
                end_line=int(rec["end"]),
            ))
    return Corpus(documents=tuple(docs), source_label=source_label or Path(path).stem)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write one JSON record per method; inverse of load_corpus."""
    if not corpus.documents:
        raise CorpusError("refusing to save an empty corpus")
    with open(path, "w", encoding="utf-8") as fh:
        for d in corpus.documents:
            rec = {
                "id": d.method_id, "path": d.file_path, "name": d.method_name,
                "body": d.body_text, "comments": d.comments,
                "literals": list(d.literals), "start": d.start_line, "end": d.end_line,
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
