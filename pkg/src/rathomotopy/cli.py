"""Command line: ``rathomotopy compute|table|list``."""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass

from . import __version__
from .cgda import RankTable
from .embedding import (
    CatalogError,
    EmbeddingError,
    NotGeneralisedSymmetric,
    SpaceDescriptor,
    SummandSpec,
    catalog,
    find_family,
    normalize_name,
    instances,
)
from .homotopy import MethodReport, cartan_with_notes, cross_check, symmetric_table, theorem_with_notes
from .liedata import LieDataError, SimpleType, Unsupported

EXIT_OK, EXIT_DISAGREE, EXIT_PARSE, EXIT_UNSUPPORTED = 0, 1, 2, 3


class SpecError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        token = text[position:position + 12] or "<end>"
        super().__init__(f"{message} at position {position} (near {token!r})")
        self.position = position


# -- space specifications ---------------------------------------------------------

_PARAMS = re.compile(r"\((\s*[a-z]\s*=\s*\d+\s*(?:,\s*[a-z]\s*=\s*\d+\s*)*)\)\s*$")


def parse_space(text: str) -> SpaceDescriptor:
    if re.match(r"\s*g\s*=", text):
        return _parse_generic(text)
    return _parse_family(text)


def _parse_family(text: str) -> SpaceDescriptor:
    m = _PARAMS.search(text)
    if m:
        name = text[:m.start()]
        params = {}
        for item in m.group(1).split(","):
            k, v = item.split("=")
            params[k.strip()] = int(v)
        try:
            fam = find_family(name)
        except CatalogError:
            raise SpecError(f"unknown family {name.strip()!r}", 0, text) from None
        try:
            return fam.instantiate(**params)
        except CatalogError as exc:
            raise SpecError(str(exc), m.start(), text) from None
    try:
        fam = find_family(text)
        if not fam.params:
            return fam.build()
        raise SpecError(f"family {fam.key} needs parameters {fam.params}", len(text), text)
    except CatalogError:
        pass
    want = normalize_name(text)
    for fam in catalog():
        if not fam.params:
            continue
        for n in range(1, 41):
            for k in (range(1, n + 2) if "k" in fam.params else [None]):
                p = {"n": n} if k is None else {"n": n, "k": k}
                if fam.valid(**p) and normalize_name(fam.label(**p)) == want:
                    return fam.build(**p)
    raise SpecError("not a catalog family or instance", 0, text)


class _Cursor:
    def __init__(self, text: str, pos: int = 0):
        self.text, self.pos = text, pos

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, ch: str):
        self.skip()
        if not self.text.startswith(ch, self.pos):
            raise SpecError(f"expected {ch!r}", self.pos, self.text)
        self.pos += len(ch)

    def peek(self, ch: str) -> bool:
        self.skip()
        return self.text.startswith(ch, self.pos)

    def match(self, pattern: str, what: str) -> str:
        self.skip()
        m = re.compile(pattern).match(self.text, self.pos)
        if not m:
            raise SpecError(f"expected {what}", self.pos, self.text)
        self.pos = m.end()
        return m.group(0)


def _parse_summands(cur: _Cursor) -> list[SummandSpec]:
    out = []
    cur.expect("[")
    if cur.peek("]"):
        cur.expect("]")
        return out
    while True:
        cur.expect("(")
        start = cur.pos
        tname = cur.match(r"[A-G]\d+", "a simple type such as A2")
        try:
            t = SimpleType.parse(tname)
        except LieDataError as exc:
            raise SpecError(str(exc), start, cur.text) from None
        cur.expect(",")
        cur.expect("[")
        idx = [int(cur.match(r"\d+", "a basis index"))]
        while cur.peek(","):
            cur.expect(",")
            idx.append(int(cur.match(r"\d+", "a basis index")))
        cur.expect("]")
        cur.expect(")")
        try:
            out.append(SummandSpec(t, tuple(idx)))
        except EmbeddingError as exc:
            raise SpecError(str(exc), start, cur.text) from None
        if cur.peek(","):
            cur.expect(",")
            continue
        cur.expect("]")
        return out


def _parse_generic(text: str) -> SpaceDescriptor:
    fields: dict[str, object] = {}
    pos = 0
    for chunk in text.split(";"):
        start = pos + len(chunk) - len(chunk.lstrip())
        pos += len(chunk) + 1
        if not chunk.strip():
            continue
        if "=" not in chunk:
            raise SpecError("expected key=value", start, text)
        key, _, value = chunk.partition("=")
        key = key.strip()
        vstart = text.index("=", start) + 1
        if key in fields:
            raise SpecError(f"duplicate key {key!r}", start, text)
        if key == "g":
            try:
                fields[key] = SimpleType.parse(value)
            except LieDataError as exc:
                raise SpecError(str(exc), vstart, text) from None
        elif key in ("cat", "torus", "twist"):
            if not re.fullmatch(r"\s*\d+\s*", value):
                raise SpecError(f"{key} must be a non-negative integer", vstart, text)
            fields[key] = int(value)
        elif key == "variant":
            fields[key] = value.strip()
        elif key == "summands":
            cur = _Cursor(text, vstart)
            fields[key] = _parse_summands(cur)
            if text[cur.pos:pos - 1].strip():
                raise SpecError("trailing characters after summand list", cur.pos, text)
        else:
            raise SpecError(f"unknown key {key!r}", start, text)
    for need in ("g", "cat", "torus"):
        if need not in fields:
            raise SpecError(f"missing key {need!r}", len(text), text)
    try:
        return SpaceDescriptor(fields["g"], fields["cat"], fields["torus"],
                               tuple(fields.get("summands", [])), twist=fields.get("twist"),
                               variant=fields.get("variant"))
    except (EmbeddingError, LieDataError) as exc:
        raise SpecError(str(exc), 0, text) from None


# -- output ---------------------------------------------------------------------


@dataclass(frozen=True)
class OutputDocument:
    space: str
    method: str
    ranks: RankTable
    notes: tuple[str, ...]
    agreement: bool | None = None

    def to_json_obj(self) -> dict:
        obj = {"space": self.space, "method": self.method,
               "ranks": [{"q": q, "dim": d} for q, d in self.ranks.items()],
               "notes": list(self.notes), "version": __version__}
        if self.agreement is not None:
            obj["agreement"] = self.agreement
        return obj

    def to_text(self) -> str:
        head = f"{self.space}  [{self.method}"
        if self.agreement is not None:
            head += ", paths agree" if self.agreement else ", PATHS DISAGREE"
        lines = [head + "]"]
        lines += [f"  pi_{q} (x) Q: dim {d}" for q, d in self.ranks.items()] or ["  all rational homotopy groups vanish"]
        lines += [f"  # {n}" for n in self.notes]
        return "\n".join(lines)


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def _doc(report: MethodReport) -> OutputDocument:
    return OutputDocument(report.space.label(), report.method, report.ranks, report.notes, report.agreement)


def compute(space: SpaceDescriptor, method: str) -> OutputDocument:
    if method == "theorem":
        t, notes = theorem_with_notes(space)
        return OutputDocument(space.label(), method, t, tuple(notes))
    if method == "cartan":
        t, notes = cartan_with_notes(space)
        return OutputDocument(space.label(), method, t, tuple(notes))
    report = cross_check(space)
    if report.method != "both":
        raise Unsupported(f"the Cartan path is not available for {space.ambient}")
    return _doc(report)


def table_line(report: MethodReport) -> str:
    body = ", ".join(f"q={q} (dim {d})" for q, d in report.ranks.items())
    flag = "" if report.agreement in (True, None) else "  [paths disagree]"
    return f"{report.space.label()}: {body}{flag}"


# -- entry point ---------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rathomotopy",
                                 description="Rational homotopy ranks of generalised symmetric spaces.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="verb", required=True)
    c = sub.add_parser("compute", help="ranks of one space")
    c.add_argument("spec", help='family form "NAME(n=..,k=..)", an instance such as "SU(6)/Sp(3)", '
                                'or "g=A2; cat=1; torus=2; summands=[]"')
    c.add_argument("--method", choices=("theorem", "cartan", "both"), default="both")
    c.add_argument("--format", choices=("text", "json"), default="text")
    t = sub.add_parser("table", help="the symmetric-space table")
    t.add_argument("kind", choices=("symmetric",))
    t.add_argument("--max-rank", type=int, default=8)
    t.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_parser("list", help="catalog families")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    out = sys.stdout
    if args.verb == "list":
        for fam in catalog():
            out.write(fam.display() + "\n")
        return EXIT_OK
    if args.verb == "table":
        if args.max_rank < 2:
            sys.stderr.write("error: --max-rank must be at least 2\n")
            return EXIT_PARSE
        reports = symmetric_table(args.max_rank)
        bad = any(r.agreement is False for r in reports)
        if args.format == "json":
            out.write(dump_json([_doc(r).to_json_obj() for r in reports]))
        else:
            current = None
            fams = [f.key for f, _, _ in instances(args.max_rank) if f.symmetric]
            for fam, r in zip(fams, reports):
                if fam != current:
                    out.write(fam + "\n")
                    current = fam
                out.write("  " + table_line(r) + "\n")
        return EXIT_DISAGREE if bad else EXIT_OK
    try:
        space = parse_space(args.spec)
    except SpecError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    try:
        doc = compute(space, args.method)
    except (Unsupported, NotGeneralisedSymmetric) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_UNSUPPORTED
    out.write(dump_json(doc.to_json_obj()) if args.format == "json" else doc.to_text() + "\n")
    return EXIT_DISAGREE if doc.agreement is False else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
