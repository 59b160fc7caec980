"""Readers for space, marked-space and correspondence files.

Format (line oriented, ``#`` starts a comment)::

    space Y
      points: a b c
      weight: a=1/2 b=-1
      edges: a->b b->c
    marked M p0=p p1=q
    corr F flavor=S source=Y target=X
      component a: { a->x, b->y } ; { a->y, b->y }

Every error carries the file and line it was found on.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .corr import Correspondence
from .errors import CorrError, ParseError
from .model import MarkedSpace, Space

_HEADER = re.compile(r"^(space|marked|corr)\s+(\S+)(.*)$")
_KV = re.compile(r"^(\w+)=(\S+)$")
_ARROW = re.compile(r"^\s*(\S+?)\s*->\s*(\S+?)\s*$")


@dataclass
class Models:
    """Everything defined by one or more model files, keyed by id."""

    spaces: dict = field(default_factory=dict)
    marked: dict = field(default_factory=dict)
    corrs: dict = field(default_factory=dict)

    def space(self, id):
        if id in self.spaces:
            return self.spaces[id]
        if id in self.marked:
            return self.marked[id].space
        raise KeyError(f"unknown space {id!r}")

    def update(self, other):
        self.spaces.update(other.spaces)
        self.marked.update(other.marked)
        self.corrs.update(other.corrs)
        return self


def _kvs(text, lineno, path):
    out = {}
    for tok in text.split():
        m = _KV.match(tok)
        if not m:
            raise ParseError(f"expected key=value, got {tok!r}", lineno, path)
        out[m.group(1)] = m.group(2)
    return out


def _rational(text, lineno, path):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {text!r}", lineno, path) from None


def _arrows(text, lineno, path):
    pairs = []
    for tok in _split_arrows(text):
        m = _ARROW.match(tok)
        if not m:
            raise ParseError(f"expected a->b, got {tok!r}", lineno, path)
        pairs.append((m.group(1), m.group(2)))
    return pairs


def _split_arrows(text):
    toks = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    # rejoin "a -> b" written with spaces
    out, i = [], 0
    while i < len(toks):
        if i + 2 < len(toks) and toks[i + 1] == "->":
            out.append(toks[i] + "->" + toks[i + 2])
            i += 3
        else:
            out.append(toks[i])
            i += 1
    return out


def _body(lines, start):
    """Indented or attribute lines following a header."""
    out = []
    i = start
    while i < len(lines):
        lineno, text = lines[i]
        if _HEADER.match(text):
            break
        out.append((lineno, text))
        i += 1
    return out, i


def _build_space(id, rest, body, path, hdr_line):
    if rest.strip():
        raise ParseError(f"unexpected text after space id: {rest.strip()!r}", hdr_line, path)
    points, weight, edges = None, {}, []
    for lineno, text in body:
        key, sep, val = text.partition(":")
        if not sep:
            raise ParseError(f"expected 'points:', 'weight:' or 'edges:', got {text!r}", lineno, path)
        key = key.strip()
        if key == "points":
            points = val.split()
        elif key == "weight":
            for tok in val.split():
                label, eq, w = tok.partition("=")
                if not eq:
                    raise ParseError(f"expected label=p/q, got {tok!r}", lineno, path)
                weight[label] = _rational(w, lineno, path)
        elif key == "edges":
            edges.extend(_arrows(val, lineno, path))
        else:
            raise ParseError(f"unknown space attribute {key!r}", lineno, path)
    if points is None:
        raise ParseError(f"space {id} has no points line", hdr_line, path)
    try:
        return Space(id, points, weight, edges)
    except CorrError as e:
        raise ParseError(str(e), hdr_line, path) from None


def _sheet_maps(text, lineno, path):
    text = text.strip()
    if text in ("", "(empty)"):
        return []
    sheets = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not (chunk.startswith("{") and chunk.endswith("}")):
            raise ParseError(f"sheet must be braced, got {chunk!r}", lineno, path)
        sheets.append(dict(_arrows(chunk[1:-1], lineno, path)))
    return sheets


def _build_corr(id, rest, body, models, path, hdr_line):
    kv = _kvs(rest, hdr_line, path)
    for need in ("flavor", "source", "target"):
        if need not in kv:
            raise ParseError(f"corr {id} is missing {need}=", hdr_line, path)
    flavor = kv["flavor"].upper()
    try:
        src, tgt = models.space(kv["source"]), models.space(kv["target"])
    except KeyError as e:
        raise ParseError(e.args[0], hdr_line, path) from None
    comps = src.components()
    least = {c[0]: k for k, c in enumerate(comps)}
    sheets = [[] for _ in comps]
    for lineno, text in body:
        m = re.match(r"^component\s+(\S+?)\s*:(.*)$", text)
        if not m:
            raise ParseError(f"expected 'component <least-label>: ...', got {text!r}", lineno, path)
        label = m.group(1)
        if label not in least:
            raise ParseError(f"{label!r} is not the least label of a component of {src.id}", lineno, path)
        k = least[label]
        for s in _sheet_maps(m.group(2), lineno, path):
            if set(s) != set(comps[k]):
                raise ParseError(f"sheet on component {label} must map exactly {list(comps[k])}", lineno, path)
            sheets[k].append(s)
    iso = kv.get("isotropic", "no").lower() in ("yes", "true", "1")
    try:
        return Correspondence(src, tgt, flavor, sheets, isotropic=iso)
    except CorrError as e:
        raise ParseError(str(e), hdr_line, path) from None


def parse_text(text, path="<string>", models=None):
    models = Models() if models is None else models
    lines = []
    for n, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            lines.append((n, s))
    i = 0
    while i < len(lines):
        lineno, text = lines[i]
        m = _HEADER.match(text)
        if not m:
            raise ParseError(f"expected 'space', 'marked' or 'corr', got {text!r}", lineno, path)
        kind, id, rest = m.groups()
        body, i = _body(lines, i + 1)
        if kind == "space":
            models.spaces[id] = _build_space(id, rest, body, path, lineno)
        elif kind == "marked":
            if body:
                raise ParseError("marked takes no body lines", body[0][0], path)
            kv = _kvs(rest, lineno, path)
            if "p0" not in kv or "p1" not in kv:
                raise ParseError("marked needs p0= and p1=", lineno, path)
            space = models.spaces.get(kv.get("space", id))
            if space is None:
                raise ParseError(f"marked {id}: no space {kv.get('space', id)!r} defined before it", lineno, path)
            try:
                models.marked[id] = MarkedSpace(space, kv["p0"], kv["p1"])
            except CorrError as e:
                raise ParseError(str(e), lineno, path) from None
        else:
            models.corrs[id] = _build_corr(id, rest, body, models, path, lineno)
    return models


def parse_files(paths, models=None):
    models = Models() if models is None else models
    for p in paths:
        try:
            text = Path(p).read_text(encoding="utf-8")
        except OSError as e:
            raise ParseError(f"cannot read: {e.strerror}", None, p) from None
        parse_text(text, str(p), models)
    return models


def format_space(space):
    lines = [f"space {space.id}", "  points: " + " ".join(map(str, space.points))]
    ws = [f"{p}={space.weight(p)}" for p in space.points if space.weight(p)]
    if ws:
        lines.append("  weight: " + " ".join(ws))
    if space.edges:
        lines.append("  edges: " + " ".join(f"{a}->{b}" for a, b in sorted(space.edges, key=lambda e: (space.index(e[0]), space.index(e[1])))))
    return "\n".join(lines)


def format_corr(id, f):
    head = f"corr {id} flavor={f.flavor} source={f.source.id} target={f.target.id}"
    if f.isotropic:
        head += " isotropic=yes"
    body = ["  " + line.replace(": (empty)", ":") for line in f.describe().splitlines()]
    return "\n".join([head] + body)
