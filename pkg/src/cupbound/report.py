"""Input documents, report documents, and optional figure rendering.

Both formats are line-oriented ``key: value`` text.  Input documents
describe a complex, an integral cocycle, optional named bundles, and an
optional cut presentation; report documents are deterministic (identical
input yields a byte-identical body; the trailing timing line is exempt).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field as dc_field

from .complexes import (CutPresentation, FlatBundle, IntegralCocycle,
                        SimplicialComplex)
from .fields import FieldSpec


class DocumentError(ValueError):
    """Malformed input document; message carries the line number."""


@dataclass
class InputDocument:
    field: str = None
    n_vertices: int = 0
    simplices: list = dc_field(default_factory=list)
    cocycle: dict = dc_field(default_factory=dict)
    bundles: dict = dc_field(default_factory=dict)   # name -> (rank, {edge: [entry strings]})
    cut: dict = None                                 # raw cut data
    options: dict = dc_field(default_factory=dict)
    text: str = ""

    def digest(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()


def parse_document(text: str) -> InputDocument:
    doc = InputDocument(text=text)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise DocumentError(f"line {lineno}: expected 'key: value'")
        key, _, rest = line.partition(":")
        key, rest = key.strip(), rest.strip()
        try:
            _parse_line(doc, key, rest)
        except DocumentError:
            raise
        except Exception as exc:
            raise DocumentError(f"line {lineno}: {exc}") from exc
    if doc.n_vertices <= 0:
        raise DocumentError("missing or invalid 'vertices' line")
    return doc


def _parse_line(doc, key, rest):
    if key == "cupbound-input":
        if rest != "1":
            raise DocumentError(f"unsupported document version {rest!r}")
    elif key == "field":
        doc.field = rest
    elif key == "vertices":
        doc.n_vertices = int(rest)
    elif key == "simplex":
        doc.simplices.append(tuple(int(v) for v in rest.split()))
    elif key == "cocycle":
        lhs, _, val = rest.partition("=")
        u, v = (int(x) for x in lhs.split())
        doc.cocycle[(u, v)] = int(val)
    elif key == "bundle":
        parts = rest.split()
        name, rank = parts[0], int(parts[1]) if len(parts) > 1 else 1
        doc.bundles.setdefault(name, (rank, {}))
    elif key == "bundle-edge":
        lhs, _, val = rest.partition("=")
        parts = lhs.split()
        name, u, v = parts[0], int(parts[1]), int(parts[2])
        if name not in doc.bundles:
            doc.bundles[name] = (1, {})
        doc.bundles[name][1][(u, v)] = [s.strip() for s in val.split(",")]
    elif key in ("cut-vertices", "cutv-vertices"):
        doc.cut = doc.cut or {"n": 0, "nv": 0, "nsimp": [], "vsimp": [],
                              "iplus": {}, "iminus": {}}
        doc.cut["n" if key == "cut-vertices" else "nv"] = int(rest)
    elif key in ("cut-simplex", "cutv-simplex"):
        if doc.cut is None:
            raise DocumentError("cut simplex before cut-vertices")
        lst = doc.cut["nsimp" if key == "cut-simplex" else "vsimp"]
        lst.append(tuple(int(v) for v in rest.split()))
    elif key in ("iplus", "iminus"):
        if doc.cut is None:
            raise DocumentError(f"{key} before cut-vertices")
        lhs, _, val = rest.partition("=")
        doc.cut[key][int(lhs)] = int(val)
    elif key == "option":
        k, _, v = rest.partition(" ")
        doc.options[k.strip()] = v.strip()
    else:
        raise DocumentError(f"unknown key {key!r}")


def realize(doc: InputDocument, spec: FieldSpec):
    """Build the complex, cocycle, bundles, and cut over the given field."""
    X = SimplicialComplex(doc.n_vertices, _closed(doc.simplices, doc.n_vertices))
    z = IntegralCocycle(doc.cocycle)
    bundles = []
    for name in sorted(doc.bundles):
        rank, edges = doc.bundles[name]
        mats = {}
        for e, entries in edges.items():
            if len(entries) != rank * rank:
                raise DocumentError(
                    f"bundle {name} edge {e}: expected {rank * rank} entries")
            vals = [spec.parse_elem(s) for s in entries]
            mats[e] = [vals[i * rank:(i + 1) * rank] for i in range(rank)]
        bundles.append(FlatBundle(spec, X, rank, mats, None, name))
    cut = None
    if doc.cut is not None:
        N = SimplicialComplex(doc.cut["n"], _closed(doc.cut["nsimp"], doc.cut["n"]))
        V = SimplicialComplex(doc.cut["nv"], _closed(doc.cut["vsimp"], doc.cut["nv"]))
        cut = CutPresentation(N, V, doc.cut["iplus"], doc.cut["iminus"],
                              FlatBundle.trivial(spec, N))
    return X, z, bundles, cut


def _closed(simplices, n):
    from itertools import combinations
    closure = {(v,) for v in range(n)}
    for s in simplices:
        t = tuple(sorted(set(s)))
        for k in range(1, len(t) + 1):
            closure.update(combinations(t, k))
    return closure


def serialize_space(space, spec: FieldSpec) -> str:
    """Emit a corpus space as an input document over the given field."""
    from .corpus import _facets
    lines = ["cupbound-input: 1",
             f"# corpus space: {space.name}",
             f"field: {_field_string(spec)}",
             f"vertices: {space.X.n_vertices}"]
    for s in sorted(_facets(space.X), key=lambda t: (len(t), t)):
        lines.append("simplex: " + " ".join(map(str, s)))
    for (u, v), w in sorted(space.xi.values.items()):
        lines.append(f"cocycle: {u} {v} = {w}")
    for name in sorted(space.bundles):
        try:
            F = space.make_bundle(name, spec)
        except ValueError:
            continue
        lines.append(f"bundle: {name} {F.rank}")
        for e in sorted(F.mats):
            entries = ", ".join(spec.format(x) for row in F.mats[e] for x in row)
            lines.append(f"bundle-edge: {name} {e[0]} {e[1]} = {entries}")
    if space.cut is not None:
        cut = space.cut
        lines.append(f"cut-vertices: {cut.N.n_vertices}")
        for s in sorted(_facets(cut.N), key=lambda t: (len(t), t)):
            lines.append("cut-simplex: " + " ".join(map(str, s)))
        lines.append(f"cutv-vertices: {cut.V.n_vertices}")
        for s in sorted(_facets(cut.V), key=lambda t: (len(t), t)):
            lines.append("cutv-simplex: " + " ".join(map(str, s)))
        for k in sorted(cut.iplus):
            lines.append(f"iplus: {k} = {cut.iplus[k]}")
        for k in sorted(cut.iminus):
            lines.append(f"iminus: {k} = {cut.iminus[k]}")
    return "\n".join(lines) + "\n"


def _field_string(spec: FieldSpec) -> str:
    if spec.kind == "rationals":
        return "Q"
    if spec.kind == "prime":
        return str(spec.p)
    return f"{spec.p}^{spec.m}"


class Report:
    """Ordered key/value report body with a deterministic serialization."""

    def __init__(self):
        self.lines = []

    def add(self, key, value):
        self.lines.append(f"{key}: {value}")

    def section(self, title):
        self.lines.append(f"[{title}]")

    def body(self) -> str:
        return "\n".join(self.lines) + "\n"


# ---------------------------------------------------------------------------
# figures (opt-in; written next to the report output)


def render_figures(command: str, data: dict, prefix: str):
    """Render matplotlib figures for a report; returns the written paths."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    paths = []

    def save(fig, tag):
        path = f"{prefix}-{tag}.png"
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        paths.append(path)

    if "novikov" in data:
        rep = data["novikov"]
        degs = [d.q for d in rep.degrees]
        bs = [d.b for d in rep.degrees]
        fig, ax = plt.subplots(figsize=(4, 3))
        ax.bar(degs, bs, color="#33658a")
        ax.set_xlabel("degree q")
        ax.set_ylabel("free rank b_q")
        ax.set_title("generic twisted dimensions")
        ax.set_xticks(degs)
        save(fig, "novikov")
    if "pages" in data:
        pages = data["pages"]
        fig, ax = plt.subplots(figsize=(4, 3))
        for i in range(len(pages[0].dims)):
            ax.plot([p.r for p in pages], [p.dims[i] for p in pages],
                    marker="o", label=f"degree {i}")
        ax.set_xlabel("page r")
        ax.set_ylabel("dim E_r")
        ax.set_xticks([p.r for p in pages])
        ax.legend(fontsize=7)
        ax.set_title("spectral page dimensions")
        save(fig, "pages")
    if "survivors" in data:
        bases = data["survivors"]
        degs = [b.degree for b in bases]
        fig, ax = plt.subplots(figsize=(4, 3))
        ax.bar([d - 0.18 for d in degs], [b.ambient_dim for b in bases],
               width=0.36, label="dim H^q(X;k)", color="#c0c0c0")
        ax.bar([d + 0.18 for d in degs], [b.dim for b in bases],
               width=0.36, label="survivors", color="#f26419")
        ax.set_xlabel("degree q")
        ax.set_xticks(degs)
        ax.legend(fontsize=8)
        ax.set_title("survivor subspaces")
        save(fig, "survivors")
    if "cuplength" in data:
        rep = data["cuplength"]
        fig, ax = plt.subplots(figsize=(4, 3))
        if rep.witness:
            labels = [w.label for w in rep.witness]
            ax.bar(range(len(labels)), [w.degree for w in rep.witness],
                   color="#55dde0")
            ax.set_xticks(range(len(labels)))
            ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=6)
            ax.set_ylabel("factor degree")
        ax.set_title(f"m = {rep.m}, critical bound = {rep.critical_bound}")
        save(fig, "cuplength")
    return paths
