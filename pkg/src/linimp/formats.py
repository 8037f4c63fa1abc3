"""Line-oriented lattice files.

    elements: a b c ...
    leq: a<=b b<=c ...            (reflexive-transitive closure is applied)
    imp: heyting | imp: a b -> c  (one pair per line)
    bang: a -> b
    record l: a -> b

`#` starts a comment.  Writing always emits explicit tables.
"""

from __future__ import annotations

import re
from pathlib import Path

from .structures import FinLattice, ImpStructure, StructureError, heyting_arrow
from .syntax import ParseError

_LEQ = re.compile(r"^(\S+?)<=(\S+)$")


def parse_lattice(text: str) -> tuple[FinLattice, ImpStructure | None]:
    names: list[str] | None = None
    pairs: list[tuple[str, str, int]] = []
    imp_lines: list[tuple[str, str, str, int]] = []
    heyting = False
    bang: list[tuple[str, str, int]] = []
    records: dict[str, list[tuple[str, str, int]]] = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno, 1)
        key, _, rest = line.partition(":")
        key = key.strip()
        rest = rest.strip()
        col = raw.index(":") + 2
        if key == "elements":
            names = rest.split()
            if len(set(names)) != len(names):
                raise ParseError("duplicate element name", lineno, col)
        elif key == "leq":
            for item in rest.split():
                m = _LEQ.match(item)
                if not m:
                    raise ParseError(f"bad order pair {item!r}", lineno, col)
                pairs.append((m.group(1), m.group(2), lineno))
        elif key == "imp":
            if rest == "heyting":
                heyting = True
                continue
            lhs, arrow, out = rest.partition("->")
            args = lhs.split()
            if not arrow or len(args) != 2 or len(out.split()) != 1:
                raise ParseError("expected 'imp: a b -> c'", lineno, col)
            imp_lines.append((args[0], args[1], out.strip(), lineno))
        elif key == "bang" or key.startswith("record "):
            lhs, arrow, out = rest.partition("->")
            if not arrow or len(lhs.split()) != 1 or len(out.split()) != 1:
                raise ParseError(f"expected '{key}: a -> b'", lineno, col)
            entry = (lhs.strip(), out.strip(), lineno)
            if key == "bang":
                bang.append(entry)
            else:
                label = key.split(None, 1)[1].strip()
                records.setdefault(label, []).append(entry)
        else:
            raise ParseError(f"unknown key {key!r}", lineno, 1)

    if names is None:
        raise ParseError("missing 'elements:' line", 1, 1)
    index = {nm: i for i, nm in enumerate(names)}

    def ident(nm: str, lineno: int) -> int:
        if nm not in index:
            raise ParseError(f"unknown element {nm!r}", lineno, 1)
        return index[nm]

    L = FinLattice.from_pairs(names, [(ident(a, ln), ident(b, ln), ) for a, b, ln in pairs])
    if not heyting and not imp_lines:
        if bang or records:
            raise ParseError("bang/record tables need an implication", 1, 1)
        return L, None

    n = len(names)
    if heyting:
        try:
            imp = [list(row) for row in heyting_arrow(L)]
        except (StructureError, TypeError):
            raise ParseError("'imp: heyting' needs a lattice", 1, 1) from None
    else:
        imp = [[None] * n for _ in range(n)]
    for a, b, c, ln in imp_lines:
        imp[ident(a, ln)][ident(b, ln)] = ident(c, ln)
    missing = [(names[a], names[b]) for a in range(n) for b in range(n) if imp[a][b] is None]
    if missing:
        raise ParseError(f"implication table misses {missing[0]}", 1, 1)

    def unary(entries, what):
        table = [None] * n
        for a, b, ln in entries:
            table[ident(a, ln)] = ident(b, ln)
        if None in table:
            raise ParseError(f"{what} table misses {names[table.index(None)]}", 1, 1)
        return table

    bang_table = unary(bang, "bang") if bang else None
    recs = {label: unary(entries, f"record {label}") for label, entries in records.items()}
    return L, ImpStructure(L, imp, bang_table, recs)


def print_lattice(L: FinLattice, A: ImpStructure | None = None) -> str:
    nm = L.names
    lines = [f"elements: {' '.join(nm)}"]
    covers = [
        f"{nm[a]}<={nm[b]}"
        for a in L.elements for b in L.elements
        if a != b and L.leq[a][b] and not any(c not in (a, b) and L.leq[a][c] and L.leq[c][b] for c in L.elements)
    ]
    if covers:
        lines.append("leq: " + " ".join(covers))
    if A is not None:
        for a in L.elements:
            for b in L.elements:
                lines.append(f"imp: {nm[a]} {nm[b]} -> {nm[A.imp[a][b]]}")
        if A.bang is not None:
            lines.extend(f"bang: {nm[a]} -> {nm[A.bang[a]]}" for a in L.elements)
        for label in sorted(A.records):
            lines.extend(f"record {label}: {nm[a]} -> {nm[A.records[label][a]]}" for a in L.elements)
    return "\n".join(lines) + "\n"


DATA_DIR = Path(__file__).parent / "data"


def resolve_path(path: str | Path) -> Path:
    """A path as given, else relative to the shipped data directory."""
    p = Path(path)
    if p.exists():
        return p
    alt = DATA_DIR / p
    if alt.exists():
        return alt
    raise FileNotFoundError(str(path))


def load_lattice(path: str | Path) -> tuple[FinLattice, ImpStructure | None]:
    p = resolve_path(path)
    L, A = parse_lattice(p.read_text())
    if A is not None:
        A.name = p.stem
    return L, A


def load_structure(path: str | Path) -> ImpStructure:
    L, A = load_lattice(path)
    if A is None:
        raise StructureError(f"{path}: no implication table")
    return A
