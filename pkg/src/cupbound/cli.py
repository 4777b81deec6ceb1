"""Command-line interface.

Commands: validate, novikov, massey, survivors, cuplength, bound,
example, selftest.  Inputs are line-oriented documents (see report.py);
``example:<name>`` anywhere an input path is expected substitutes a
bundled corpus space.  Exit codes: 0 success, 1 validation/input failure,
2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .complexes import validate as validate_objects
from .fields import FieldSpec
from .report import (DocumentError, Report, parse_document, realize,
                     render_figures, serialize_space, _field_string)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except AssertionError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 2


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="cupbound",
        description="Exact twisted cohomology, Novikov numbers, spectral "
                    "pages, survivor classes, and critical-point bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input",
                           help="input document path, '-' for stdin, or "
                                "'example:<name>'")
        p.add_argument("--field", help="field override: Q, p, or p^m")
        p.add_argument("--figures", action="store_true",
                       help="render figures next to the report")
        p.add_argument("--figures-prefix", default="cupbound",
                       help="path prefix for figure files")

    common(sub.add_parser("validate", help="check the input document"))
    common(sub.add_parser("novikov", help="Novikov numbers and jump points"))
    p = sub.add_parser("massey", help="spectral pages of the twist family")
    common(p)
    p.add_argument("--max-page", type=int, default=None)
    common(sub.add_parser("survivors", help="survivor subspaces per degree"))
    p = sub.add_parser("cuplength", help="cup-length lower bound")
    common(p)
    p.add_argument("--strict-dual-survivor", action="store_true")
    p = sub.add_parser("bound", help="full pipeline ending in the "
                                     "critical-point bound")
    common(p)
    p.add_argument("--strict-dual-survivor", action="store_true")
    p.add_argument("--max-page", type=int, default=None)
    p = sub.add_parser("example", help="emit a corpus input document")
    p.add_argument("name")
    p.add_argument("--field", default="Q")
    p = sub.add_parser("selftest", help="run the oracle cross-check suites")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _load(args):
    from .corpus import EXAMPLES, build
    text = None
    if args.input.startswith("example:"):
        name = args.input.split(":", 1)[1]
        if name not in EXAMPLES:
            raise ValueError(f"unknown example {name!r}; choices: "
                             + ", ".join(sorted(EXAMPLES)))
        spec = FieldSpec.parse(args.field or "Q")
        text = serialize_space(build(name), spec)
    elif args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    doc = parse_document(text)
    field_string = args.field or doc.field or "Q"
    spec = FieldSpec.parse(field_string)
    X, z, bundles, cut = realize(doc, spec)
    return doc, spec, X, z, bundles, cut


def _header(rep: Report, args, doc, spec):
    rep.add("cupbound-report", 1)
    rep.add("version", __version__)
    rep.add("command", args.command)
    rep.add("field", _field_string(spec))
    rep.add("input-sha256", doc.digest())


def _dispatch(args) -> int:
    if args.command == "example":
        from .corpus import EXAMPLES, build
        if args.name not in EXAMPLES:
            raise ValueError(f"unknown example {args.name!r}; choices: "
                             + ", ".join(sorted(EXAMPLES)))
        spec = FieldSpec.parse(args.field)
        sys.stdout.write(serialize_space(build(args.name), spec))
        return 0
    if args.command == "selftest":
        return _selftest(args.seed)

    t0 = time.monotonic()
    doc, spec, X, z, bundles, cut = _load(args)
    rep = Report()
    _header(rep, args, doc, spec)
    figure_data = {}

    if args.command == "validate":
        diag = validate_objects(X, z, bundles)
        if cut is not None:
            diag.issues.extend(cut.violations())
        rep.add("valid", "yes" if not diag.issues else "no")
        for issue in diag.issues:
            rep.add("issue", issue)
        rep.add("dim", X.dim)
        for d in range(X.dim + 1):
            rep.add(f"count {d}", X.count(d))
        _finish(rep, args, figure_data, t0)
        return 0 if not diag.issues else 1

    cache = {}

    def laurent_C():
        from .massey import _laurent_complex
        if "C" not in cache:
            cache["C"] = _laurent_complex(X, z, spec=spec)[0]
        return cache["C"]

    if args.command == "novikov":
        _run_novikov(rep, figure_data, X, z, spec, laurent_C)
    elif args.command == "massey":
        _run_massey(rep, figure_data, spec, args.max_page, laurent_C)
    elif args.command == "survivors":
        _run_survivors(rep, figure_data, X, spec, laurent_C)
    elif args.command == "cuplength":
        _run_cuplength(rep, figure_data, X, z, spec, bundles,
                       args.strict_dual_survivor, laurent_C)
    elif args.command == "bound":
        _run_novikov(rep, figure_data, X, z, spec, laurent_C)
        _run_massey(rep, figure_data, spec, args.max_page, laurent_C)
        _run_survivors(rep, figure_data, X, spec, laurent_C)
        _run_cuplength(rep, figure_data, X, z, spec, bundles,
                       args.strict_dual_survivor, laurent_C)
    _finish(rep, args, figure_data, t0)
    return 0


def _run_novikov(rep, figure_data, X, z, spec, laurent_C):
    from .novikov import novikov_numbers
    report = novikov_numbers(X, z, spec=spec, _complex=laurent_C())
    rep.section("novikov")
    rep.add("b", " ".join(str(d.b) for d in report.degrees))
    for d in report.degrees:
        if d.torsion:
            rep.add(f"torsion {d.q}",
                    "; ".join(repr(f) for f in d.torsion))
        if d.jump_roots:
            rep.add(f"jumps {d.q}",
                    "; ".join(f"{spec.format(a)} x{e}"
                              for a, e in d.jump_roots))
        for f in d.symbolic:
            rep.add(f"rootless-factor {d.q}", repr(f))
    if report.checked_at is not None:
        rep.add("verified-generic-at", spec.format(report.checked_at))
    figure_data["novikov"] = report


def _run_massey(rep, figure_data, spec, max_page, laurent_C):
    from .massey import pages_from_modules
    pages = pages_from_modules(laurent_C().modules(), spec, max_page)
    rep.section("massey")
    for p in pages:
        tag = " stable" if p.stabilized else ""
        rep.add(f"page {p.r}",
                "dims " + " ".join(map(str, p.dims))
                + " ; d-ranks " + " ".join(map(str, p.d_ranks)) + tag)
    figure_data["pages"] = pages


def _run_survivors(rep, figure_data, X, spec, laurent_C):
    from .massey import survivors_from_complex
    C = laurent_C()
    bases = [survivors_from_complex(C, q) for q in range(X.dim + 1)]
    rep.section("survivors")
    for b in bases:
        rep.add(f"degree {b.degree}",
                f"dim {b.dim} of {b.ambient_dim} ; lift-order {b.lift_order}")
        for i, vec in enumerate(b.vectors):
            rep.add(f"basis {b.degree}.{i}",
                    " ".join(spec.format(x) for x in vec))
    figure_data["survivors"] = bases


def _run_cuplength(rep, figure_data, X, z, spec, bundles, strict_dual,
                   laurent_C):
    from .cuplen import cuplength_massey
    report = cuplength_massey(X, z, extra_bundles=bundles, spec=spec,
                              strict_dual=strict_dual, _complex=laurent_C())
    rep.section("cuplength")
    rep.add("m", f"{report.m} (certified lower bound)")
    rep.add("critical-bound", report.critical_bound)
    rep.add("mode", report.mode)
    for w in report.witness:
        rep.add("witness", f"{w.label} degree {w.degree} bundle {w.bundle}")
    for a in report.excluded:
        rep.add("excluded", spec.format(a))
    for note in report.notes:
        rep.add("note", note)
    figure_data["cuplength"] = report


def _finish(rep, args, figure_data, t0):
    if getattr(args, "figures", False) and figure_data:
        for path in render_figures(args.command, figure_data,
                                   args.figures_prefix):
            rep.add("figure", path)
    rep.add("timing-seconds", f"{time.monotonic() - t0:.3f}")
    sys.stdout.write(rep.body())


# ---------------------------------------------------------------------------
# selftest


def _selftest(seed: int) -> int:
    import random
    from . import linalg
    from .corpus import build
    from .cuplen import deformation_differential, psi_product
    from .complexes import deformation_complex, twisted_complex, FlatBundle
    from .massey import _laurent_complex, chain_pages, pages_from_modules
    from .pidmod import dims_at

    rng = random.Random(seed)
    t0 = time.monotonic()
    checks = 0

    def ok(cond, what):
        nonlocal checks
        checks += 1
        if not cond:
            raise AssertionError(f"selftest: {what}")

    specs = [FieldSpec.rationals(), FieldSpec.prime(5),
             FieldSpec.extension(2, 2)]
    small = ["circle", "torus2", "surface2", "rp2"]
    for name in small:
        sp = build(name)
        for spec in specs:
            C, _ = _laurent_complex(sp.X, sp.xi, spec=spec)
            pm = pages_from_modules(C.modules(), spec)
            pc = chain_pages(C, len(pm))
            ok(all(a.dims == b.dims and a.d_ranks == b.d_ranks
                   for a, b in zip(pm, pc)),
               f"page oracle mismatch on {name} over {spec!r}")
            # universal-coefficient spot checks
            decs = C.modules()
            for _ in range(3):
                a = linalg.random_nonzero(spec, rng)
                ok(dims_at(decs, a, spec) == C.evaluate(a).cohomology_dims(),
                   f"UCT mismatch on {name} over {spec!r}")
    # random 2-complexes
    for trial in range(8):
        spec = specs[trial % 3]
        X, z = _random_two_complex(rng)
        C, _ = _laurent_complex(X, z, spec=spec)
        pm = pages_from_modules(C.modules(), spec)
        pc = chain_pages(C, len(pm))
        ok(all(a.dims == b.dims and a.d_ranks == b.d_ranks
               for a, b in zip(pm, pc)),
           f"page oracle mismatch on random complex {trial}")
    # cut-model consistency + Leibniz
    for name in ("circle", "torus2", "surface2"):
        sp = build(name)
        for spec in (FieldSpec.rationals(), FieldSpec.prime(5)):
            cut = sp.cut.with_field(spec)
            D = deformation_complex(cut)
            direct, _ = _laurent_complex(sp.X, sp.xi, spec=spec)
            for _ in range(2):
                a = linalg.random_nonzero(spec, rng)
                dims = direct.evaluate(a).cohomology_dims()
                dd = D.evaluate(a).cohomology_dims()[:len(dims)]
                ok(dd == dims, f"cut-model mismatch on {name} at {a}")
            for _ in range(10):
                t = linalg.random_elem(spec, rng)
                if spec.is_zero(spec.add(spec.one(), t)):
                    continue
                ok(_leibniz_once(cut, spec, rng, t),
                   f"Leibniz failure on {name} over {spec!r}")
    print(f"selftest: PASS ({checks} checks, "
          f"{time.monotonic() - t0:.1f}s, seed {seed})")
    return 0


def _random_two_complex(rng, nv=8):
    from .complexes import IntegralCocycle, SimplicialComplex
    edges = [(u, v) for u in range(nv) for v in range(u + 1, nv)
             if rng.random() < 0.45]
    eset = set(edges)
    tris = [(u, v, w)
            for u in range(nv) for v in range(u + 1, nv)
            for w in range(v + 1, nv)
            if (u, v) in eset and (u, w) in eset and (v, w) in eset
            and rng.random() < 0.6]
    X = SimplicialComplex(nv, [(v,) for v in range(nv)] + edges + tris)
    g = [rng.randint(-2, 2) for _ in range(nv)]
    z = IntegralCocycle({(u, v): g[u] - g[v] for (u, v) in edges})
    return X, z


def _leibniz_once(cut, spec, rng, t):
    from . import linalg
    from .cuplen import deformation_differential, psi_product
    p = pp = 1
    rand = lambda n: [linalg.random_elem(spec, rng) for _ in range(n)]
    c = ((rand(cut.N.count(p)), p), (rand(cut.V.count(p - 1)), p - 1))
    cp = ((rand(cut.N.count(pp)), pp), (rand(cut.V.count(pp - 1)), pp - 1))
    one = spec.one()
    tprime = spec.sub(spec.inv(spec.add(one, t)), one)
    lhs = deformation_differential(cut, psi_product(cut, c, cp, t), t)
    r1 = psi_product(cut, deformation_differential(cut, c, t), cp, t)
    r2 = psi_product(cut, c, deformation_differential(cut, cp, tprime), t)
    sgn = one if p % 2 == 0 else spec.neg(one)
    for comp in (0, 1):
        rhs = [spec.add(a, spec.mul(sgn, b))
               for a, b in zip(r1[comp][0], r2[comp][0])]
        if any(not spec.is_zero(spec.sub(a, b))
               for a, b in zip(lhs[comp][0], rhs)):
            return False
    return True


if __name__ == "__main__":
    sys.exit(main())
