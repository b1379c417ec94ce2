"""Command-line front end for the scheme kernel.

Subcommands bind the decision procedures of the library to files and
inline expressions: ring normal forms and inversion, ideal membership
with certificates, lattice order and operations, gluing-data validation,
scheme-level section and restriction reports, point enumeration over
finite fields, cover certificates, locality of the points functor, and
the two-presentation comparison.

Exit codes: 0 when the request is verified or answered positively, 1 on
a mathematical refutation (always with a witness), 2 on malformed input
(parse errors carry line and column).  Output is deterministic: identical
inputs produce identical bytes.
"""

from __future__ import annotations

import json
import sys
from typing import Dict, List, Optional, Sequence, Tuple

import click

from .algebra import (
    AlgebraElement,
    AlgebraMorphism,
    PresentedAlgebra,
    ExtractionCapError,
    make_localization,
)
from .funscheme import check_locality, eval_points, functorial
from .groebner import GroebnerBasis
from .compare import comparison_check
from .lattice import ZarElement, basic_open, eq, join, leq, meet
from .latscheme import (
    CompactOpen,
    GlobalSection,
    GluingData,
    GluingError,
    LatticeScheme,
    affine_hull_map,
    glue_schemes,
    make_patch,
    mk_affine,
    restrict_scheme,
    section_compatibility_witness,
    top_open,
)
from .parsing import (
    ParseError,
    parse_basic_open,
    parse_field,
    parse_order,
    parse_poly,
    parse_ring,
)
from .polynomials import MonomialOrder, PolyRing


# -- plumbing ---------------------------------------------------------------------


def _refute(*lines: str) -> None:
    """Report a mathematical refutation and exit with status 1."""
    for line in lines:
        click.echo(line)
    sys.exit(1)


def _input_error(message: str) -> None:
    raise click.UsageError(message)


def _emit_json(payload: object) -> None:
    click.echo(json.dumps(payload, sort_keys=True, indent=2))


def _parse_algebra_text(ring_text: str, order_text: str) -> PresentedAlgebra:
    try:
        order = parse_order(order_text)
        ring, rels = parse_ring(ring_text, order)
    except ParseError as exc:
        _input_error(f"--ring: {exc}")
    return PresentedAlgebra(ring, rels)


def _parse_element(text: str, A: PresentedAlgebra, where: str) -> AlgebraElement:
    try:
        return A.element(parse_poly(text, A.ring))
    except ParseError as exc:
        _input_error(f"{where}: {exc}")


def _parse_open(text: str, A: PresentedAlgebra, where: str) -> ZarElement:
    try:
        gens = parse_basic_open(text, A.ring)
    except ParseError as exc:
        _input_error(f"{where}: {exc}")
    return basic_open(A, [A.element(g) for g in gens])


def _fmt_open(z: ZarElement) -> str:
    return "D(" + ", ".join(str(g) for g in z.generators) + ")"


def _fmt_compact(u: CompactOpen) -> str:
    return "; ".join(_fmt_open(w) for w in u.components)


def _parse_fields(over: str) -> List:
    out = []
    for part in over.split(","):
        part = part.strip()
        if not part:
            _input_error("--over: empty field name")
        try:
            out.append(parse_field(part))
        except ParseError as exc:
            _input_error(f"--over: {exc}")
    return out


def _load_json(path: str) -> Dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            obj = json.load(handle)
    except OSError as exc:
        _input_error(f"cannot read {path}: {exc.strerror or exc}")
    except json.JSONDecodeError as exc:
        _input_error(
            f"{path}: invalid JSON (line {exc.lineno}, column {exc.colno}): "
            f"{exc.msg}"
        )
    if not isinstance(obj, dict):
        _input_error(f"{path}: top level must be an object")
    return obj


def _check_keys(
    obj: Dict, allowed: set, required: set, where: str
) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        _input_error(f"{where}: unknown field(s) {', '.join(unknown)}")
    missing = sorted(required - set(obj))
    if missing:
        _input_error(f"{where}: missing field(s) {', '.join(missing)}")


def _require_schema(obj: Dict, where: str) -> None:
    if obj.get("schema") != 1:
        _input_error(f"{where}: schema must be 1")


def _algebra_from_spec(
    obj: Dict, where: str, order: Optional[MonomialOrder]
) -> PresentedAlgebra:
    _check_keys(obj, {"field", "vars", "relations"}, {"field", "vars"}, where)
    try:
        field = parse_field(obj["field"])
    except (ParseError, TypeError) as exc:
        _input_error(f"{where}.field: {exc}")
    names = obj["vars"]
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        _input_error(f"{where}.vars: must be a list of variable names")
    ring = PolyRing(field, names, order)
    rels = []
    for k, text in enumerate(obj.get("relations", [])):
        try:
            rels.append(parse_poly(text, ring))
        except ParseError as exc:
            _input_error(f"{where}.relations[{k}]: {exc}")
    return PresentedAlgebra(ring, rels)


def _rebind(poly, target_ring: PolyRing):
    """Move a polynomial to a ring with the same variables in the same
    positions (only the final, inverse variable is named differently)."""
    return target_ring.from_terms(poly.terms)


def _gluing_from_spec(
    obj: Dict, where: str, order: Optional[MonomialOrder], cap: int
) -> GluingData:
    _check_keys(
        obj, {"schema", "kind", "charts", "patches"}, {"schema", "kind", "charts"}, where
    )
    charts_spec = obj["charts"]
    if not isinstance(charts_spec, list) or not charts_spec:
        _input_error(f"{where}.charts: must be a non-empty list")
    charts = [
        _algebra_from_spec(c, f"{where}.charts[{k}]", order)
        for k, c in enumerate(charts_spec)
    ]
    patches = []
    for k, p in enumerate(obj.get("patches", [])):
        pwhere = f"{where}.patches[{k}]"
        _check_keys(
            p,
            {"from", "to", "f", "g", "f_inverse", "g_inverse", "forward", "backward"},
            {"from", "to", "f", "g", "f_inverse", "g_inverse", "forward", "backward"},
            pwhere,
        )
        i, j = p["from"], p["to"]
        if not (isinstance(i, int) and 0 <= i < len(charts)):
            _input_error(f"{pwhere}.from: chart index out of range")
        if not (isinstance(j, int) and 0 <= j < len(charts)) or i == j:
            _input_error(f"{pwhere}.to: must name a different chart")
        Ai, Aj = charts[i], charts[j]
        f = _parse_element(p["f"], Ai, f"{pwhere}.f")
        g = _parse_element(p["g"], Aj, f"{pwhere}.g")
        loc_f = make_localization(Ai, f)
        loc_g = make_localization(Aj, g)
        for nm, base in ((p["f_inverse"], Ai), (p["g_inverse"], Aj)):
            if not isinstance(nm, str) or not nm:
                _input_error(f"{pwhere}: declared inverses must be names")
            if nm in base.ring.names:
                _input_error(
                    f"{pwhere}: inverse name {nm!r} collides with a chart variable"
                )
        scratch_fwd = PolyRing(Aj.field, tuple(Aj.ring.names) + (p["g_inverse"],))
        scratch_bwd = PolyRing(Ai.field, tuple(Ai.ring.names) + (p["f_inverse"],))
        if not isinstance(p["forward"], list) or len(p["forward"]) != Ai.nvars:
            _input_error(
                f"{pwhere}.forward: need one image per variable of chart {i}"
            )
        if not isinstance(p["backward"], list) or len(p["backward"]) != Aj.nvars:
            _input_error(
                f"{pwhere}.backward: need one image per variable of chart {j}"
            )
        fwd_imgs = []
        for m, text in enumerate(p["forward"]):
            try:
                raw = parse_poly(text, scratch_fwd)
            except ParseError as exc:
                _input_error(f"{pwhere}.forward[{m}]: {exc}")
            fwd_imgs.append(loc_g.algebra.element(_rebind(raw, loc_g.algebra.ring)))
        bwd_imgs = []
        for m, text in enumerate(p["backward"]):
            try:
                raw = parse_poly(text, scratch_bwd)
            except ParseError as exc:
                _input_error(f"{pwhere}.backward[{m}]: {exc}")
            bwd_imgs.append(loc_f.algebra.element(_rebind(raw, loc_f.algebra.ring)))
        patches.append(make_patch(charts, i, j, f, g, fwd_imgs, bwd_imgs))
    return GluingData(charts, patches, validate=False, cap=cap)


def _load_scheme(
    path: str, order: Optional[MonomialOrder], cap: int
) -> LatticeScheme:
    """Load a scheme file and validate the data, refuting on failure."""
    obj = _load_json(path)
    _require_schema(obj, path)
    kind = obj.get("kind")
    if kind == "algebra":
        spec = {k: v for k, v in obj.items() if k not in ("schema", "kind")}
        return mk_affine(_algebra_from_spec(spec, path, order))
    if kind == "gluedata":
        raw = _gluing_from_spec(obj, path, order, cap)
        try:
            data = GluingData(
                raw.charts,
                [p for p in raw.patches if p.i < p.j],
                validate=True,
                cap=cap,
            )
        except (GluingError, ValueError) as exc:
            _refute(f"invalid gluing data: {exc}")
        return glue_schemes(data)
    _input_error(f"{path}: kind must be 'algebra' or 'gluedata'")


def _load_family_values(
    path: str, X: LatticeScheme
) -> List[AlgebraElement]:
    obj = _load_json(path)
    _require_schema(obj, path)
    if obj.get("kind") != "family":
        _input_error(f"{path}: kind must be 'family'")
    _check_keys(obj, {"schema", "kind", "values"}, {"schema", "kind", "values"}, path)
    values = obj["values"]
    if not isinstance(values, list) or len(values) != X.ncharts:
        _input_error(f"{path}.values: need one value per chart ({X.ncharts})")
    return [
        _parse_element(text, X.charts[k], f"{path}.values[{k}]")
        for k, text in enumerate(values)
    ]


def _global_section_from_values(
    X: LatticeScheme, values: Sequence[AlgebraElement]
) -> GlobalSection:
    t = top_open(X)
    rows = []
    for k, v in enumerate(values):
        loc = make_localization(X.charts[k], X.charts[k].one)
        rows.append([loc.to_loc(v)])
    return GlobalSection(X, t, rows)


def _membership_certificate(
    A: PresentedAlgebra,
    f: AlgebraElement,
    gens: Sequence[AlgebraElement],
    cap: int,
    radical: bool,
) -> Optional[Tuple[int, List]]:
    """Cofactors for f**n in the ideal of gens (n = 1 when not radical)."""
    polys = [g.poly for g in gens] + list(A.relations)
    gb = GroebnerBasis(A.ring, polys)
    powers = range(1, cap + 1) if radical else range(1, 2)
    acc = A.one
    for n in powers:
        acc = acc * f
        cof = gb.member(acc.poly)
        if cof is not None:
            return n, cof[: len(gens)]
    return None


def _fmt_identity(
    lhs: str, cofactors: Sequence, gens: Sequence[AlgebraElement]
) -> str:
    terms = [
        f"({c}) * ({g})" for c, g in zip(cofactors, gens) if not c.is_zero()
    ]
    rhs = " + ".join(terms) if terms else "0"
    return f"{lhs} = {rhs}"


# -- command tree -----------------------------------------------------------------


ORDER_OPTION = click.option(
    "--order",
    "order_text",
    default="grevlex",
    show_default=True,
    type=click.Choice(["grevlex", "lex"]),
    help="Monomial order for all rings.",
)
RING_OPTION = click.option(
    "--ring", "ring_text", required=True, help='Ring, e.g. "QQ[x,y]/(x*y-1)".'
)
FORMAT_OPTION = click.option(
    "--format",
    "fmt",
    default="text",
    show_default=True,
    type=click.Choice(["text", "json"]),
)
CAP_OPTION = click.option(
    "--cap",
    default=64,
    show_default=True,
    type=click.IntRange(min=1),
    help="Bound for denominator-power searches.",
)


@click.group()
def main() -> None:
    """Decision procedures for schemes presented by charts and patches."""


# -- ring -------------------------------------------------------------------------


@main.group()
def ring() -> None:
    """Normal forms and inversion in a presented algebra."""


@ring.command("show")
@RING_OPTION
@ORDER_OPTION
@FORMAT_OPTION
def ring_show(ring_text: str, order_text: str, fmt: str) -> None:
    """Print the presentation and its reduced basis."""
    A = _parse_algebra_text(ring_text, order_text)
    payload = {
        "field": repr(A.field),
        "vars": list(A.ring.names),
        "relations": [str(r) for r in A.relations],
        "reduced_basis": [str(b) for b in A.gb.basis],
    }
    if fmt == "json":
        _emit_json(payload)
        return
    click.echo(f"field: {payload['field']}")
    click.echo(f"vars: {', '.join(payload['vars']) or '(none)'}")
    click.echo(f"relations: {', '.join(payload['relations']) or '(none)'}")
    click.echo(f"reduced basis: {', '.join(payload['reduced_basis']) or '(none)'}")


@ring.command("nf")
@click.argument("expr")
@RING_OPTION
@ORDER_OPTION
def ring_nf(expr: str, ring_text: str, order_text: str) -> None:
    """Normal form of EXPR modulo the relations."""
    A = _parse_algebra_text(ring_text, order_text)
    value = _parse_element(expr, A, "EXPR")
    click.echo(str(value))


@ring.command("invert")
@click.argument("expr")
@RING_OPTION
@ORDER_OPTION
def ring_invert(expr: str, ring_text: str, order_text: str) -> None:
    """Invert EXPR, printing the inverse and the checked identity."""
    A = _parse_algebra_text(ring_text, order_text)
    value = _parse_element(expr, A, "EXPR")
    inv = A.try_invert(value)
    if inv is None:
        _refute(f"not invertible: {value} has no inverse modulo the relations")
    click.echo(f"inverse: {inv}")
    click.echo(f"check: ({value}) * ({inv}) = {value * inv}")


# -- ideal ------------------------------------------------------------------------


@main.group()
def ideal() -> None:
    """Ideal and radical membership with certificates."""


@ideal.command("member")
@click.argument("f")
@click.argument("gens", nargs=-1, required=True)
@RING_OPTION
@ORDER_OPTION
@click.option("--radical", is_flag=True, help="Test radical membership.")
@CAP_OPTION
def ideal_member(
    f: str, gens: Tuple[str, ...], ring_text: str, order_text: str,
    radical: bool, cap: int,
) -> None:
    """Decide whether F lies in the ideal (or radical) of GENS."""
    A = _parse_algebra_text(ring_text, order_text)
    f_el = _parse_element(f, A, "F")
    g_els = [_parse_element(g, A, f"GENS[{k}]") for k, g in enumerate(gens)]
    if radical:
        verdict = A.radical_member(f_el, g_els)
        if not verdict:
            _refute(
                f"not a member: {f_el} is not in the radical of "
                f"({', '.join(str(g) for g in g_els)})"
            )
        found = _membership_certificate(A, f_el, g_els, cap, radical=True)
        if found is None:
            click.echo(
                "member of the radical (power certificate exceeds the cap)"
            )
            return
        n, cof = found
        click.echo("member of the radical")
        click.echo(
            _fmt_identity(f"({f_el})^{n}", cof, g_els)
            + (" (modulo the relations)" if A.relations else "")
        )
        return
    found = _membership_certificate(A, f_el, g_els, cap, radical=False)
    if found is None:
        gb = GroebnerBasis(A.ring, [g.poly for g in g_els] + list(A.relations))
        _refute(
            f"not a member: normal form of {f_el} modulo the ideal is "
            f"{gb.normal_form(f_el.poly)}"
        )
    _, cof = found
    click.echo("member")
    click.echo(
        _fmt_identity(str(f_el), cof, g_els)
        + (" (modulo the relations)" if A.relations else "")
    )


# -- lattice ----------------------------------------------------------------------


@main.group()
def lattice() -> None:
    """Order and operations in the lattice of basic opens."""


def _lattice_pair(u_text, v_text, ring_text, order_text):
    A = _parse_algebra_text(ring_text, order_text)
    u = _parse_open(u_text, A, "U")
    v = _parse_open(v_text, A, "V")
    return A, u, v


def _leq_witness(A: PresentedAlgebra, u: ZarElement, v: ZarElement) -> str:
    vg = list(v.generators)
    for g in u.generators:
        if not A.radical_member(g, vg):
            return (
                f"{g} is not in the radical of "
                f"({', '.join(str(x) for x in vg) or '0'})"
            )
    return "no witness (inconsistent state)"  # pragma: no cover


@lattice.command("leq")
@click.argument("u_text", metavar="U")
@click.argument("v_text", metavar="V")
@RING_OPTION
@ORDER_OPTION
def lattice_leq(u_text, v_text, ring_text, order_text) -> None:
    """Decide U <= V; on refusal print a witness generator."""
    A, u, v = _lattice_pair(u_text, v_text, ring_text, order_text)
    if leq(u, v):
        click.echo("true")
        return
    _refute(f"false: {_leq_witness(A, u, v)}")


@lattice.command("eq")
@click.argument("u_text", metavar="U")
@click.argument("v_text", metavar="V")
@RING_OPTION
@ORDER_OPTION
def lattice_eq(u_text, v_text, ring_text, order_text) -> None:
    """Decide U = V; on refusal print a witness generator and side."""
    A, u, v = _lattice_pair(u_text, v_text, ring_text, order_text)
    if not leq(u, v):
        _refute(f"false: {_leq_witness(A, u, v)}")
    if not leq(v, u):
        _refute(f"false: {_leq_witness(A, v, u)}")
    click.echo("true")


@lattice.command("join")
@click.argument("u_text", metavar="U")
@click.argument("v_text", metavar="V")
@RING_OPTION
@ORDER_OPTION
def lattice_join(u_text, v_text, ring_text, order_text) -> None:
    """Print the canonical form of U v V."""
    _, u, v = _lattice_pair(u_text, v_text, ring_text, order_text)
    click.echo(_fmt_open(join(u, v)))


@lattice.command("meet")
@click.argument("u_text", metavar="U")
@click.argument("v_text", metavar="V")
@RING_OPTION
@ORDER_OPTION
def lattice_meet(u_text, v_text, ring_text, order_text) -> None:
    """Print the canonical form of U ^ V."""
    _, u, v = _lattice_pair(u_text, v_text, ring_text, order_text)
    click.echo(_fmt_open(meet(u, v)))


# -- glue and scheme ----------------------------------------------------------------


def _scheme_summary(X: LatticeScheme, fmt: str) -> None:
    n_patches = sum(1 for p in X.data.patches if p.i < p.j)
    payload = {
        "charts": [repr(A) for A in X.charts],
        "patches": n_patches,
        "overlaps": [],
    }
    for i in range(X.ncharts):
        for j in range(i + 1, X.ncharts):
            payload["overlaps"].append(
                {
                    "pair": [i, j],
                    "in_chart_i": _fmt_open(X.data.overlap(i, j)),
                    "in_chart_j": _fmt_open(X.data.overlap(j, i)),
                }
            )
    if fmt == "json":
        _emit_json({"valid": True, **payload})
        return
    click.echo(f"valid: {X.ncharts} chart(s), {n_patches} patch(es)")
    for k, A in enumerate(X.charts):
        click.echo(f"chart {k}: {A!r}")
    for row in payload["overlaps"]:
        i, j = row["pair"]
        click.echo(
            f"overlap {i}~{j}: {row['in_chart_i']} | {row['in_chart_j']}"
        )


@main.group()
def glue() -> None:
    """Gluing-data validation."""


@glue.command("check")
@click.argument("data_path", metavar="DATA")
@ORDER_OPTION
@CAP_OPTION
@FORMAT_OPTION
def glue_check(data_path, order_text, cap, fmt) -> None:
    """Validate the patch isomorphisms, agreements, and cocycle identity."""
    order = parse_order(order_text)
    X = _load_scheme(data_path, order, cap)
    _scheme_summary(X, fmt)


@main.group()
def scheme() -> None:
    """Scheme-level reports: validation, sections, hull comparison, restriction."""


@scheme.command("validate")
@click.argument("data_path", metavar="DATA")
@ORDER_OPTION
@CAP_OPTION
@FORMAT_OPTION
def scheme_validate(data_path, order_text, cap, fmt) -> None:
    """Validate DATA and print the chart/overlap summary."""
    order = parse_order(order_text)
    X = _load_scheme(data_path, order, cap)
    _scheme_summary(X, fmt)


@scheme.command("sections")
@click.argument("data_path", metavar="DATA")
@click.argument("family_path", metavar="FAMILY")
@ORDER_OPTION
@CAP_OPTION
def scheme_sections(data_path, family_path, order_text, cap) -> None:
    """Check that FAMILY's chart values agree on overlaps (a global section)."""
    order = parse_order(order_text)
    X = _load_scheme(data_path, order, cap)
    values = _load_family_values(family_path, X)
    s = _global_section_from_values(X, values)
    witness = section_compatibility_witness(s, cap)
    if witness is not None:
        _refute(f"not a global section: {witness}")
    click.echo(
        "global section: " + "; ".join(str(v) for v in values)
    )


@scheme.command("eta")
@click.argument("data_path", metavar="DATA")
@click.option(
    "--sections",
    "section_paths",
    multiple=True,
    required=True,
    help="Family file(s); their supports generate the hull-side open.",
)
@click.option(
    "--against",
    "against_paths",
    multiple=True,
    help="Second list of family files to compare against.",
)
@ORDER_OPTION
@CAP_OPTION
def scheme_eta(data_path, section_paths, against_paths, order_text, cap) -> None:
    """Carry global sections through the affine-hull comparison map.

    Prints the compact open where the listed sections are jointly
    invertible; with --against, decides whether the two lists are
    identified by the map.
    """
    order = parse_order(order_text)
    X = _load_scheme(data_path, order, cap)
    hull_open, _ = affine_hull_map(X, cap)

    def load_list(paths):
        sections = []
        for path in paths:
            values = _load_family_values(path, X)
            s = _global_section_from_values(X, values)
            witness = section_compatibility_witness(s, cap)
            if witness is not None:
                _refute(f"{path} is not a global section: {witness}")
            sections.append(s)
        return sections

    u = hull_open(load_list(section_paths))
    click.echo(f"hull image: {_fmt_compact(u)}")
    if against_paths:
        v = hull_open(load_list(against_paths))
        click.echo(f"against: {_fmt_compact(v)}")
        if u.eq(v):
            click.echo("identified: true")
        else:
            _refute("identified: false")


@scheme.command("restrict")
@click.argument("data_path", metavar="DATA")
@click.argument("open_text", metavar="OPEN")
@ORDER_OPTION
@CAP_OPTION
@FORMAT_OPTION
def scheme_restrict(data_path, open_text, order_text, cap, fmt) -> None:
    """Restrict the scheme to OPEN ("D(..); D(..)", one per chart)."""
    order = parse_order(order_text)
    X = _load_scheme(data_path, order, cap)
    parts = [p.strip() for p in open_text.split(";")]
    if len(parts) != X.ncharts:
        _input_error(
            f"OPEN: need one basic open per chart ({X.ncharts}), got {len(parts)}"
        )
    comps = [
        _parse_open(part, X.charts[k], f"OPEN[{k}]")
        for k, part in enumerate(parts)
    ]
    u = CompactOpen(X, comps)
    try:
        Xu, _ = restrict_scheme(X, u, cap)
    except ExtractionCapError as exc:
        _refute(f"restriction failed: {exc}")
    _scheme_summary(Xu, fmt)


# -- points -----------------------------------------------------------------------


@main.command("points")
@click.argument("data_path", metavar="DATA")
@click.option("--over", required=True, help='Fields, e.g. "GF(2),GF(3)".')
@ORDER_OPTION
@CAP_OPTION
@FORMAT_OPTION
def points_cmd(data_path, over, order_text, cap, fmt) -> None:
    """Enumerate the points of DATA over each finite field."""
    order = parse_order(order_text)
    X = _load_scheme(data_path, order, cap)
    fun = functorial(X)
    fields = _parse_fields(over)
    payload = {}
    for field in fields:
        if field != X.charts[0].field:
            _input_error(
                f"--over: {field!r} does not match the chart field "
                f"{X.charts[0].field!r}"
            )
        B = PresentedAlgebra(PolyRing(field, []))
        rows = []
        for p in eval_points(fun, B):
            for (_, chart, phi) in p.factors:
                rows.append((chart, tuple(str(v) for v in phi.images)))
        rows.sort()
        payload[repr(field)] = rows
    if fmt == "json":
        _emit_json(
            {
                name: [{"chart": c, "images": list(imgs)} for (c, imgs) in rows]
                for name, rows in payload.items()
            }
        )
        return
    for name, rows in payload.items():
        click.echo(f"over {name}: {len(rows)} point(s)")
        for (c, imgs) in rows:
            click.echo(f"  chart {c}: ({', '.join(imgs)})")


# -- cover-check --------------------------------------------------------------------


@main.command("cover-check")
@click.argument("pieces", nargs=-1, required=True)
@RING_OPTION
@ORDER_OPTION
@click.option(
    "--on",
    "on_text",
    default="1",
    show_default=True,
    help="Basic open D(ON) that the pieces must cover.",
)
@CAP_OPTION
def cover_check(pieces, ring_text, order_text, on_text, cap) -> None:
    """Decide D(ON) <= D(PIECES...) and print the power certificate."""
    A = _parse_algebra_text(ring_text, order_text)
    piece_els = [
        _parse_element(p, A, f"PIECES[{k}]") for k, p in enumerate(pieces)
    ]
    on_el = _parse_element(on_text, A, "--on")
    if not leq(basic_open(A, [on_el]), basic_open(A, piece_els)):
        _refute(
            f"does not cover: {on_el} is not in the radical of "
            f"({', '.join(str(p) for p in piece_els)})"
        )
    found = _membership_certificate(A, on_el, piece_els, cap, radical=True)
    click.echo("covers")
    if found is None:
        click.echo("(power certificate exceeds the cap)")
        return
    n, cof = found
    click.echo(
        _fmt_identity(f"({on_el})^{n}", cof, piece_els)
        + (" (modulo the relations)" if A.relations else "")
    )


# -- locality-check -----------------------------------------------------------------


@main.command("locality-check")
@click.argument("data_path", metavar="DATA")
@click.option(
    "--test-algebra",
    "algebra_path",
    required=True,
    help="JSON algebra file for the test algebra B.",
)
@click.option(
    "--pieces",
    "pieces_text",
    required=True,
    help='Comma-separated cover of B, e.g. "e,1-e".',
)
@ORDER_OPTION
@CAP_OPTION
def locality_check(data_path, algebra_path, pieces_text, order_text, cap) -> None:
    """Check the equalizer condition for the points functor along a cover of B."""
    order = parse_order(order_text)
    X = _load_scheme(data_path, order, cap)
    obj = _load_json(algebra_path)
    _require_schema(obj, algebra_path)
    if obj.get("kind") != "algebra":
        _input_error(f"{algebra_path}: kind must be 'algebra'")
    spec = {k: v for k, v in obj.items() if k not in ("schema", "kind")}
    B = _algebra_from_spec(spec, algebra_path, order)
    if B.field != X.charts[0].field:
        _input_error(
            f"{algebra_path}: field {B.field!r} does not match the chart field "
            f"{X.charts[0].field!r}"
        )
    piece_els = [
        _parse_element(part.strip(), B, f"--pieces[{k}]")
        for k, part in enumerate(pieces_text.split(","))
    ]
    try:
        verdict = check_locality(functorial(X), B, piece_els)
    except ValueError as exc:
        _refute(f"locality check refused: {exc}")
    if not verdict:
        _refute(
            "not local: matching families along the cover do not correspond "
            "one-to-one with points"
        )
    click.echo(
        f"local: points over {B!r} are exactly the matching families along "
        f"D({', '.join(str(p) for p in piece_els)})"
    )


# -- compare ----------------------------------------------------------------------


@main.command("compare")
@click.argument("data_path", metavar="DATA")
@click.option("--over", required=True, help='Fields, e.g. "GF(2),GF(3)".')
@ORDER_OPTION
@CAP_OPTION
@FORMAT_OPTION
def compare_cmd(data_path, over, order_text, cap, fmt) -> None:
    """Compare the two presentations of DATA over each test field.

    For each field: enumerate the functor's points, carry each to a
    validated morphism of chart presentations, and check the roundtrip,
    distinctness, and the realization certificate.
    """
    order = parse_order(order_text)
    X = _load_scheme(data_path, order, cap)
    fields = _parse_fields(over)
    tests = []
    for field in fields:
        if field != X.charts[0].field:
            _input_error(
                f"--over: {field!r} does not match the chart field "
                f"{X.charts[0].field!r}"
            )
        tests.append(PresentedAlgebra(PolyRing(field, [])))
    ok, report = comparison_check(X, tests)
    if fmt == "json":
        _emit_json({"ok": ok, "report": report})
        if not ok:
            sys.exit(1)
        return
    for field, entry in zip(fields, report["per_algebra"]):
        bij = (
            entry["count"]
            if entry["morphisms_valid"] and entry["roundtrip"] and entry["distinct"]
            else "?"
        )
        click.echo(f"over {field!r}: {bij} = {entry['count']}")
    click.echo(f"realization: {report['realization']}")
    if not ok:
        witnesses = [
            entry["witness"]
            for entry in report["per_algebra"]
            if "witness" in entry
        ]
        if "naturality_witness" in report:
            witnesses.append(report["naturality_witness"])
        _refute("REFUTED" + (": " + "; ".join(witnesses) if witnesses else ""))
    click.echo("VERIFIED")


if __name__ == "__main__":  # pragma: no cover
    main()
