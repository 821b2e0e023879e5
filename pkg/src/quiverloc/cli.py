"""Problem-file format and command-line surface.

A problem file is line-oriented UTF-8 text: a field, a quiver, named
representations and morphisms with explicit integer matrices, a
generator-set name list, and command parameters. Matrices are written
row-major with rows separated by ';'. Prime-field entries must be
canonical representatives 0..p-1; rational entries are written n or n/d.
Reports are JSON with sorted keys so consecutive runs are byte-identical.

Grammar (one statement per line, '#' starts a comment):

    field (prime <p> | rationals)
    quiver <vertex-count>
    arrow <name> <source> <target>        # vertices are 1-based
    rep <name> <d1> ... <dn>
    map <rep> <arrow> <matrix>            # omitted maps are zero
    morphism <name> <source-rep> <target-rep>
    vmap <morphism> <vertex> <matrix>
    generators <rep-name> ...
    args <name> ...
    param (budget|max-steps) <N>
    param (dim-bound|probe-bound) <d1,d2,...>
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    BudgetExceededError,
    HomPerpRejection,
    InconclusiveError,
    NonStabilizingError,
    ParseError,
    UnsupportedFieldError,
)
from .exactlin import FieldSpec, Mat
from .quiverrep import Quiver, Rep, RepMorphism, make_rep
from .homcalc import ext_space, hom_space, is_bound
from .localise import (
    WellPlacedGen,
    check_hom_perp_set,
    filt_membership,
    induced_iso_test,
    localize,
    localized_algebra,
    reduce_to_homperp,
    trace_torsion_submodule,
    verify_well_placed,
)
from .projmon import (
    fac_membership,
    generators_enumerate,
    is_early,
    is_late,
    k0_presentation,
    monoid_presentation,
    relproj_membership,
    s_related,
    strip_top,
    tor1,
    tor_iso_test,
)

COMMANDS = (
    "hom", "ext", "bound", "check-set", "torsion", "filt", "localize",
    "induced-iso", "reduce-homperp", "localized-algebra",
    "verify-well-placed", "fac", "relproj", "tor1", "strip-top", "tor-iso",
    "generators", "monoid", "s-related", "late", "early", "k0",
)

EXIT_COMPUTED = 0
EXIT_INPUT_ERROR = 1
EXIT_INCONCLUSIVE = 2


@dataclass
class ProblemFile:
    """Parsed and validated problem description."""

    field: FieldSpec
    quiver: Quiver
    reps: dict[str, Rep]
    morphisms: dict[str, RepMorphism]
    generators: tuple[str, ...]
    args: tuple[str, ...]
    params: dict[str, object]

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, ProblemFile)
                and self.field == other.field
                and self.quiver == other.quiver
                and self.reps == other.reps
                and self.morphisms == other.morphisms
                and self.generators == other.generators
                and self.args == other.args
                and self.params == other.params)


def _parse_element(tok: str, field: FieldSpec, line: int):
    if field.is_prime_field:
        try:
            v = int(tok)
        except ValueError:
            raise ParseError(line, "syntax", f"bad field element {tok!r}")
        if not (0 <= v < field.p):
            raise ParseError(line, "invariant-violation",
                             f"entry {v} outside canonical range 0..{field.p - 1}")
        return v
    try:
        if "/" in tok:
            num, den = tok.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(tok))
    except (ValueError, ZeroDivisionError):
        raise ParseError(line, "syntax", f"bad rational entry {tok!r}")


def _parse_matrix(tokens: list[str], rows: int, cols: int,
                  field: FieldSpec, line: int, what: str) -> Mat:
    row_groups: list[list] = [[]]
    for tok in tokens:
        if tok == ";":
            row_groups.append([])
        else:
            row_groups[-1].append(_parse_element(tok, field, line))
    if rows == 0 or cols == 0:
        if any(g for g in row_groups):
            raise ParseError(line, "invariant-violation",
                             f"{what}: expected an empty {rows}x{cols} matrix")
        return Mat.zeros(field, rows, cols)
    if len(row_groups) != rows or any(len(g) != cols for g in row_groups):
        got = "x".join(str(len(g)) for g in row_groups)
        raise ParseError(line, "invariant-violation",
                         f"{what}: matrix shape {len(row_groups)} rows ({got} "
                         f"entries) does not match expected {rows}x{cols}")
    return Mat(rows, cols, field,
               tuple(x for g in row_groups for x in g))


def parse_problem(text: str) -> ProblemFile:
    """Parse a problem file into a validated object graph.

    Raises ParseError with the line number and a distinct kind for syntax
    errors, unresolved references, and invariant violations.
    """
    field: Optional[FieldSpec] = None
    vertex_count: Optional[int] = None
    arrows: list[tuple[int, int]] = []
    arrow_names: list[str] = []
    rep_dims: dict[str, tuple[int, ...]] = {}
    rep_maps: dict[str, dict[int, tuple[Mat, int]]] = {}
    rep_line: dict[str, int] = {}
    morph_decl: dict[str, tuple[str, str, int]] = {}
    morph_maps: dict[str, dict[int, tuple[Mat, int]]] = {}
    generators: tuple[str, ...] = ()
    cmd_args: tuple[str, ...] = ()
    params: dict[str, object] = {}

    def need_field(line: int) -> FieldSpec:
        if field is None:
            raise ParseError(line, "syntax", "field must be declared first")
        return field

    def need_quiver(line: int) -> int:
        if vertex_count is None:
            raise ParseError(line, "syntax", "quiver must be declared first")
        return vertex_count

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        toks = stripped.split()
        stmt = toks[0]
        if stmt == "field":
            if field is not None:
                raise ParseError(lineno, "syntax", "duplicate field statement")
            if len(toks) == 2 and toks[1] == "rationals":
                field = FieldSpec.rationals()
            elif len(toks) == 3 and toks[1] == "prime":
                try:
                    field = FieldSpec.prime(int(toks[2]))
                except ValueError as exc:
                    raise ParseError(lineno, "invariant-violation", str(exc))
            else:
                raise ParseError(lineno, "syntax",
                                 "expected 'field prime <p>' or 'field rationals'")
        elif stmt == "quiver":
            if vertex_count is not None:
                raise ParseError(lineno, "syntax", "duplicate quiver statement")
            if len(toks) != 2:
                raise ParseError(lineno, "syntax", "expected 'quiver <count>'")
            try:
                vertex_count = int(toks[1])
            except ValueError:
                raise ParseError(lineno, "syntax", f"bad vertex count {toks[1]!r}")
            if vertex_count < 1:
                raise ParseError(lineno, "invariant-violation",
                                 "vertex count must be positive")
        elif stmt == "arrow":
            nv = need_quiver(lineno)
            if len(toks) != 4:
                raise ParseError(lineno, "syntax",
                                 "expected 'arrow <name> <source> <target>'")
            name = toks[1]
            if name in arrow_names:
                raise ParseError(lineno, "syntax", f"duplicate arrow {name!r}")
            try:
                s, t = int(toks[2]), int(toks[3])
            except ValueError:
                raise ParseError(lineno, "syntax", "arrow endpoints must be integers")
            if not (1 <= s <= nv and 1 <= t <= nv):
                raise ParseError(lineno, "invariant-violation",
                                 f"arrow endpoint outside 1..{nv}")
            arrows.append((s - 1, t - 1))
            arrow_names.append(name)
        elif stmt == "rep":
            need_field(lineno)
            nv = need_quiver(lineno)
            if len(toks) != 2 + nv:
                raise ParseError(lineno, "syntax",
                                 f"expected 'rep <name> <{nv} dimensions>'")
            name = toks[1]
            if name in rep_dims:
                raise ParseError(lineno, "syntax", f"duplicate rep {name!r}")
            try:
                dims = tuple(int(x) for x in toks[2:])
            except ValueError:
                raise ParseError(lineno, "syntax", "dimensions must be integers")
            if any(d < 0 for d in dims):
                raise ParseError(lineno, "invariant-violation",
                                 "dimensions must be non-negative")
            rep_dims[name] = dims
            rep_maps[name] = {}
            rep_line[name] = lineno
        elif stmt == "map":
            f = need_field(lineno)
            if len(toks) < 3:
                raise ParseError(lineno, "syntax",
                                 "expected 'map <rep> <arrow> <matrix>'")
            rname, aname = toks[1], toks[2]
            if rname not in rep_dims:
                raise ParseError(lineno, "unresolved-reference",
                                 f"unknown rep {rname!r}")
            if aname not in arrow_names:
                raise ParseError(lineno, "unresolved-reference",
                                 f"unknown arrow {aname!r}")
            a = arrow_names.index(aname)
            s, t = arrows[a]
            dims = rep_dims[rname]
            mat = _parse_matrix(toks[3:], dims[t], dims[s], f, lineno,
                                f"map of arrow {aname!r}")
            rep_maps[rname][a] = (mat, lineno)
        elif stmt == "morphism":
            if len(toks) != 4:
                raise ParseError(lineno, "syntax",
                                 "expected 'morphism <name> <source> <target>'")
            name, src, tgt = toks[1], toks[2], toks[3]
            if name in morph_decl:
                raise ParseError(lineno, "syntax", f"duplicate morphism {name!r}")
            for r in (src, tgt):
                if r not in rep_dims:
                    raise ParseError(lineno, "unresolved-reference",
                                     f"unknown rep {r!r}")
            morph_decl[name] = (src, tgt, lineno)
            morph_maps[name] = {}
        elif stmt == "vmap":
            f = need_field(lineno)
            nv = need_quiver(lineno)
            if len(toks) < 3:
                raise ParseError(lineno, "syntax",
                                 "expected 'vmap <morphism> <vertex> <matrix>'")
            name = toks[1]
            if name not in morph_decl:
                raise ParseError(lineno, "unresolved-reference",
                                 f"unknown morphism {name!r}")
            try:
                v = int(toks[2])
            except ValueError:
                raise ParseError(lineno, "syntax", "vertex must be an integer")
            if not (1 <= v <= nv):
                raise ParseError(lineno, "invariant-violation",
                                 f"vertex outside 1..{nv}")
            src, tgt, _ = morph_decl[name]
            mat = _parse_matrix(toks[3:], rep_dims[tgt][v - 1],
                                rep_dims[src][v - 1], f, lineno,
                                f"vertex map at vertex {v}")
            morph_maps[name][v - 1] = (mat, lineno)
        elif stmt == "generators":
            generators = tuple(toks[1:])
        elif stmt == "args":
            cmd_args = tuple(toks[1:])
        elif stmt == "param":
            if len(toks) != 3:
                raise ParseError(lineno, "syntax", "expected 'param <key> <value>'")
            key = toks[1]
            if key in ("budget", "max-steps"):
                try:
                    params[key] = int(toks[2])
                except ValueError:
                    raise ParseError(lineno, "syntax", f"bad integer {toks[2]!r}")
            elif key in ("dim-bound", "probe-bound"):
                try:
                    params[key] = tuple(int(x) for x in toks[2].split(","))
                except ValueError:
                    raise ParseError(lineno, "syntax", f"bad bound {toks[2]!r}")
            else:
                raise ParseError(lineno, "syntax", f"unknown parameter {key!r}")
        else:
            raise ParseError(lineno, "syntax", f"unknown statement {stmt!r}")

    if field is None:
        raise ParseError(0, "syntax", "missing field statement")
    if vertex_count is None:
        raise ParseError(0, "syntax", "missing quiver statement")
    try:
        quiver = Quiver(vertex_count, tuple(arrows), tuple(arrow_names) or None)
    except ValueError as exc:
        raise ParseError(0, "invariant-violation", str(exc))

    reps: dict[str, Rep] = {}
    for name, dims in rep_dims.items():
        maps = {a: m for a, (m, _) in rep_maps[name].items()}
        try:
            reps[name] = make_rep(quiver, field, dims, maps)
        except ValueError as exc:
            raise ParseError(rep_line[name], "invariant-violation",
                             f"rep {name!r}: {exc}")
    morphisms: dict[str, RepMorphism] = {}
    for name, (src, tgt, decl_line) in morph_decl.items():
        vm = []
        for v in range(vertex_count):
            if v in morph_maps[name]:
                vm.append(morph_maps[name][v][0])
            else:
                vm.append(Mat.zeros(field, reps[tgt].dims[v], reps[src].dims[v]))
        try:
            morphisms[name] = RepMorphism(reps[src], reps[tgt], vm)
        except ValueError as exc:
            # name the arrow and its endpoints in the diagnostic
            msg = str(exc)
            detail = msg
            if "commuting square fails at arrow" in msg:
                label = msg.rsplit(" ", 1)[-1]
                if label in arrow_names:
                    a = arrow_names.index(label)
                    s, t = arrows[a]
                    detail = (f"commuting square fails at arrow {label!r} "
                              f"(vertices {s + 1} -> {t + 1})")
            raise ParseError(decl_line, "invariant-violation",
                             f"morphism {name!r}: {detail}")
    for g in generators:
        if g not in reps:
            raise ParseError(0, "unresolved-reference",
                             f"generator {g!r} is not a declared rep")
    for a in cmd_args:
        if a not in reps and a not in morphisms:
            raise ParseError(0, "unresolved-reference",
                             f"argument {a!r} is not a declared rep or morphism")
    return ProblemFile(field, quiver, reps, morphisms, generators, cmd_args,
                       params)


def _ser_element(x, field: FieldSpec):
    if field.is_prime_field:
        return int(x)
    fr = Fraction(x)
    return f"{fr.numerator}/{fr.denominator}" if fr.denominator != 1 \
        else str(fr.numerator)


def _ser_matrix(m: Mat) -> str:
    if m.rows == 0 or m.cols == 0:
        return ""
    return " ; ".join(" ".join(str(_ser_element(x, m.field)) for x in
                               m.entries[i * m.cols:(i + 1) * m.cols])
                      for i in range(m.rows))


def serialize_problem(p: ProblemFile) -> str:
    """Canonical text form; parsing it back yields an equal object graph."""
    lines: list[str] = []
    if p.field.is_prime_field:
        lines.append(f"field prime {p.field.p}")
    else:
        lines.append("field rationals")
    lines.append(f"quiver {p.quiver.vertex_count}")
    for a, (s, t) in enumerate(p.quiver.arrows):
        lines.append(f"arrow {p.quiver.arrow_label(a)} {s + 1} {t + 1}")
    for name in sorted(p.reps):
        rep = p.reps[name]
        lines.append(f"rep {name} " + " ".join(str(d) for d in rep.dims))
        for a in range(len(p.quiver.arrows)):
            m = rep.maps[a]
            if m.rows and m.cols and not m.is_zero():
                lines.append(f"map {name} {p.quiver.arrow_label(a)} "
                             + _ser_matrix(m))
    for name in sorted(p.morphisms):
        mor = p.morphisms[name]
        src = next(k for k, v in p.reps.items() if v == mor.source)
        tgt = next(k for k, v in p.reps.items() if v == mor.target)
        lines.append(f"morphism {name} {src} {tgt}")
        for v, m in enumerate(mor.vertex_maps):
            if m.rows and m.cols and not m.is_zero():
                lines.append(f"vmap {name} {v + 1} " + _ser_matrix(m))
    if p.generators:
        lines.append("generators " + " ".join(p.generators))
    if p.args:
        lines.append("args " + " ".join(p.args))
    for key in sorted(p.params):
        val = p.params[key]
        if isinstance(val, tuple):
            lines.append(f"param {key} " + ",".join(str(x) for x in val))
        else:
            lines.append(f"param {key} {val}")
    return "\n".join(lines) + "\n"


def _ser_rep(r: Rep) -> dict:
    maps = {}
    for a in range(len(r.quiver.arrows)):
        m = r.maps[a]
        if m.rows and m.cols and not m.is_zero():
            maps[r.quiver.arrow_label(a)] = [
                [_ser_element(m.entry(i, j), r.field) for j in range(m.cols)]
                for i in range(m.rows)]
    return {"dims": list(r.dims), "maps": maps}


def _ser_morphism(f: RepMorphism) -> dict:
    return {
        "source_dims": list(f.source.dims),
        "target_dims": list(f.target.dims),
        "vertex_maps": [
            [[_ser_element(m.entry(i, j), m.field) for j in range(m.cols)]
             for i in range(m.rows)]
            for m in f.vertex_maps],
    }


def _gen_set(p: ProblemFile) -> WellPlacedGen:
    return check_hom_perp_set([p.reps[g] for g in p.generators],
                              quiver=p.quiver, field=p.field)


def _need_args(p: ProblemFile, count: int, cmd: str) -> list[Rep]:
    if len(p.args) < count:
        raise ValueError(f"command {cmd!r} needs {count} argument rep(s) "
                         f"in an 'args' statement")
    out = []
    for name in p.args[:count]:
        if name not in p.reps:
            raise ValueError(f"argument {name!r} is not a rep")
        out.append(p.reps[name])
    return out


def _gen_label(s_names: Sequence[str], idx: int) -> str:
    return s_names[idx] if idx < len(s_names) else f"S{idx}"


def run_command(p: ProblemFile, cmd: str, budget: Optional[int] = None,
                max_steps: Optional[int] = None,
                dim_bound: Optional[Sequence[int]] = None,
                ) -> tuple[dict, int]:
    """Execute a command against a problem file.

    Returns (report, exit code): 0 when a verdict was computed (including
    negative verdicts), 2 when a search ended inconclusive or ran out of
    budget, while input errors raise before a report exists.
    """
    if cmd not in COMMANDS:
        raise ValueError(f"unknown command {cmd!r}")
    from .localise import DEFAULT_MAX_STEPS, DEFAULT_SEARCH_BUDGET
    budget = budget if budget is not None else \
        p.params.get("budget", DEFAULT_SEARCH_BUDGET)
    max_steps = max_steps if max_steps is not None else \
        p.params.get("max-steps", DEFAULT_MAX_STEPS)
    dim_bound = tuple(dim_bound) if dim_bound is not None else \
        p.params.get("dim-bound", (2,) * p.quiver.vertex_count)
    probe_bound = p.params.get("probe-bound", dim_bound)
    report: dict = {"command": cmd}
    code = EXIT_COMPUTED
    gen_names = list(p.generators)

    if cmd == "hom":
        m, n = _need_args(p, 2, cmd)
        hs = hom_space(m, n)
        report.update(status="computed", dim=hs.dim,
                      basis=[_ser_morphism(b) for b in hs.basis])
    elif cmd == "ext":
        m, n = _need_args(p, 2, cmd)
        es = ext_space(m, n)
        report.update(status="computed", dim=es.dim)
    elif cmd == "bound":
        (m,) = _need_args(p, 1, cmd)
        report.update(status="computed", bound=is_bound(m))
    elif cmd == "check-set":
        try:
            s = _gen_set(p)
            report.update(status="valid",
                          certificate=list(s.validation_certificate))
        except HomPerpRejection as exc:
            report.update(status="rejected", kind=exc.kind,
                          indices=list(exc.indices),
                          members=[gen_names[i] for i in exc.indices])
    elif cmd == "torsion":
        s = _gen_set(p)
        (m,) = _need_args(p, 1, cmd)
        t, _ = trace_torsion_submodule(m, s)
        report.update(status="computed", dims=list(t.dims),
                      torsion_submodule=_ser_rep(t))
    elif cmd == "filt":
        s = _gen_set(p)
        (x,) = _need_args(p, 1, cmd)
        series = filt_membership(x, s, budget)
        if series is None:
            report.update(status="computed", member=False)
        else:
            report.update(status="computed", member=True,
                          series=[_gen_label(gen_names, i) for i in series])
    elif cmd == "localize":
        s = _gen_set(p)
        (m,) = _need_args(p, 1, cmd)
        chain = localize(m, s, max_steps)
        report.update(
            status="computed",
            kernel_dims=list(chain.kernel.dims),
            steps=len(chain.steps),
            stabilized=chain.stabilized,
            term_dims=[list(chain.term(k).dims)
                       for k in range(chain.term_count)],
            value=_ser_rep(chain.value),
            quotient_dims=[list(st.quotient.dims) for st in chain.steps])
    elif cmd == "induced-iso":
        s = _gen_set(p)
        m, n = _need_args(p, 2, cmd)
        v = induced_iso_test(m, n, s, budget, max_steps)
        report.update(status=v.status)
        if v.status == "iso":
            report.update(overmodule=_ser_rep(v.overmodule),
                          quotient_m_dims=list(v.seq_m.quotient.dims),
                          quotient_n_dims=list(v.seq_n.quotient.dims))
        if v.status == "inconclusive":
            code = EXIT_INCONCLUSIVE
    elif cmd == "reduce-homperp":
        s = _gen_set(p)
        (m,) = _need_args(p, 1, cmd)
        r = reduce_to_homperp(m, s, budget)
        report.update(status=r.status, submodule=_ser_rep(r.submodule),
                      series=[_gen_label(gen_names, i) for i in r.series])
    elif cmd == "localized-algebra":
        s = _gen_set(p)
        try:
            alg = localized_algebra(s, max_steps)
            report.update(status="computed",
                          total_dimension=alg.total_dimension,
                          basis_dims=[list(row) for row in alg.basis_dims],
                          radical_dimension=alg.radical_dimension(),
                          indecomposable_classes=alg.indecomposable_class_count())
        except NonStabilizingError as exc:
            report.update(status="infinite-dimensional-localisation",
                          vertex=exc.vertex + 1 if exc.vertex is not None else None,
                          detail=str(exc))
    elif cmd == "verify-well-placed":
        s = _gen_set(p)
        rep_ = verify_well_placed(s, budget)
        report.update(status="computed", ok=rep_.ok,
                      checks=len(rep_.checks),
                      samples=rep_.samples_generated,
                      counterexamples=[c.description
                                       for c in rep_.counterexamples])
    elif cmd == "fac":
        s = _gen_set(p)
        (m,) = _need_args(p, 1, cmd)
        report.update(status="computed", member=fac_membership(m, s))
    elif cmd == "relproj":
        s = _gen_set(p)
        (m,) = _need_args(p, 1, cmd)
        v = relproj_membership(m, s, budget, max_steps)
        report.update(status=v.status)
        if v.status == "non-member":
            report.update(witness_kind=v.witness_kind,
                          witness=_ser_rep(v.witness))
        if v.status == "member":
            report.update(torsion_series=[_gen_label(gen_names, i)
                                          for i in v.certificate.torsion_series],
                          overmodule_dims=list(v.certificate.overmodule.dims))
        if v.status == "inconclusive":
            code = EXIT_INCONCLUSIVE
    elif cmd == "tor1":
        s = _gen_set(p)
        (m,) = _need_args(p, 1, cmd)
        try:
            t = tor1(m, s, max_steps, budget)
            report.update(status="computed", dims=list(t.dims), value=_ser_rep(t))
        except NonStabilizingError as exc:
            report.update(status="non-stabilizing", detail=str(exc))
            code = EXIT_INCONCLUSIVE
    elif cmd == "strip-top":
        s = _gen_set(p)
        (m,) = _need_args(p, 1, cmd)
        r = strip_top(m, s, budget)
        report.update(status="computed", submodule=_ser_rep(r.submodule),
                      series=[_gen_label(gen_names, i) for i in r.series])
    elif cmd == "tor-iso":
        s = _gen_set(p)
        m, n = _need_args(p, 2, cmd)
        v = tor_iso_test(m, n, s, budget, max_steps)
        report.update(status=v.status)
        if v.status == "iso":
            report.update(
                tor_dims=list(v.tor_value.dims),
                kernel_pair_middles=[list(q.middle.dims) for q in v.kernel_pair],
                extension_pair_middles=[list(q.middle.dims)
                                        for q in v.extension_pair])
        if v.status == "inconclusive":
            code = EXIT_INCONCLUSIVE
    elif cmd == "generators":
        s = _gen_set(p)
        gens = generators_enumerate(s, budget)
        report.update(status="computed",
                      generators=[{"label": l, "dims": list(r.dims),
                                   "rep": _ser_rep(r)}
                                  for l, r in sorted(
                                      gens, key=lambda g:
                                      (g[0], g[1].dims))])
    elif cmd == "monoid":
        s = _gen_set(p)
        mp = monoid_presentation(s, dim_bound, budget)
        labels = [l for l, _ in mp.generators]

        def fmt_vec(vec):
            return {labels[i]: vec[i] for i in range(len(labels)) if vec[i]}

        report.update(status="computed",
                      generators=sorted(labels),
                      relations=[[fmt_vec(l), fmt_vec(r)]
                                 for l, r in mp.relations],
                      identifications={k: fmt_vec(v) for k, v in
                                       mp.derived_identifications.items()},
                      complete=mp.complete,
                      free_rank=mp.free_rank())
    elif cmd == "s-related":
        s = _gen_set(p)
        a, b = _need_args(p, 2, cmd)
        v = s_related(a, b, s, budget)
        report.update(status=v.status,
                      path=[{"generator": _gen_label(gen_names, st.generator),
                             "role": st.role,
                             "dims": list(st.intermediate.dims)}
                            for st in v.path])
        if v.status == "inconclusive":
            code = EXIT_INCONCLUSIVE
    elif cmd in ("late", "early"):
        s = _gen_set(p)
        (m,) = _need_args(p, 1, cmd)
        fn = is_late if cmd == "late" else is_early
        v = fn(m, s, probe_bound, budget, max_steps)
        report.update(status=v.status, probes=v.probes,
                      skipped_memberships=v.skipped_memberships)
        if v.witness_object is not None:
            report.update(witness_dims=list(v.witness_object.dims),
                          witness=_ser_morphism(v.witness_map))
    elif cmd == "k0":
        s = _gen_set(p)
        k = k0_presentation(s)
        report.update(status="computed", ambient_rank=k.ambient_rank,
                      relation_lattice=[list(r) for r in k.relation_lattice],
                      invariants=list(k.smith_form),
                      free_rank=k.free_rank, group=k.describe())
    return report, code


def format_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="quiverloc",
        description="Universal localisations of path algebras of finite "
                    "acyclic quivers")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", required=True, help="problem file")
    parser.add_argument("--budget", type=int, default=None)
    parser.add_argument("--max-steps", type=int, default=None)
    parser.add_argument("--dim-bound", type=str, default=None,
                        help="comma-separated per-vertex bound")
    parser.add_argument("--output", type=str, default=None,
                        help="write the report here instead of stdout")
    ns = parser.parse_args(argv)
    try:
        with open(ns.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    dim_bound = None
    if ns.dim_bound is not None:
        try:
            dim_bound = tuple(int(x) for x in ns.dim_bound.split(","))
        except ValueError:
            print("error: bad --dim-bound", file=sys.stderr)
            return EXIT_INPUT_ERROR
    try:
        problem = parse_problem(text)
        report, code = run_command(problem, ns.command, ns.budget,
                                   ns.max_steps, dim_bound)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (HomPerpRejection, UnsupportedFieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (BudgetExceededError, InconclusiveError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    out = format_report(report)
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
