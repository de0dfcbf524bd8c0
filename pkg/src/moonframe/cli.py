"""Command-line surface for the code/lattice/character pipeline.

Exit codes: 0 all requested checks passed, 1 a check failed, 2 usage or
parse error, 3 budget exhausted.  Standard output carries the requested
table or JSON document only; progress and logs go to standard error.
"""

import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import click

from . import catalog, lattice, moonshine, qseries, zkcode
from .catalog import CheckResult, emit_report, report_passed
from .errors import BudgetExceededError, MoonframeError, ParseError

EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


@dataclass
class CliConfig:
    order: int = 8
    seed: int = 0
    budget_seconds: float = 600.0
    workers: int = 1
    fmt: str = "table"
    fixtures_dir: str = "fixtures"


def parse_budget(text):
    """Durations like '90', '30s', '10m', '2h' in seconds."""
    text = text.strip().lower()
    mult = 1.0
    if text.endswith(("s", "m", "h")):
        mult = {"s": 1.0, "m": 60.0, "h": 3600.0}[text[-1]]
        text = text[:-1]
    try:
        value = float(text)
    except ValueError:
        raise click.UsageError(f"cannot parse budget {text!r}")
    if value <= 0:
        raise click.UsageError("budget must be positive")
    return value * mult


def _echo_report(cfg, results, extra=None):
    doc = emit_report(results)
    if extra:
        doc.update(extra)
    if cfg.fmt == "json":
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for c in doc["checks"]:
            status = c["status"].upper()
            witness = " ".join(f"{k}={v}" for k, v in c["witness"].items())
            click.echo(f"{status:4}  {c['check_name']}  {witness}".rstrip())
    return doc


def _finish(doc):
    sys.exit(0 if report_passed(doc) else EXIT_CHECK_FAILED)


def _progress(label):
    t0 = time.monotonic()

    def cb(done, total):
        pct = 100.0 * done / total if total else 100.0
        print(f"{label}: {done}/{total} ({pct:.0f}%) "
              f"{time.monotonic() - t0:.0f}s", file=sys.stderr)

    return cb


@click.group()
@click.option("--order", default=8, show_default=True,
              help="verify/emit series through q^ORDER")
@click.option("--seed", default=0, show_default=True)
@click.option("--budget", default="10m", show_default=True,
              help="time budget per phase (30s, 10m, 1h)")
@click.option("--workers", default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["table", "json"]),
              default="table", show_default=True)
@click.option("--fixtures-dir", default="fixtures", show_default=True,
              help="directory for discovered frames/codes")
@click.pass_context
def main(ctx, order, seed, budget, workers, fmt, fixtures_dir):
    """Codes over Z_2k, Leech frames, and exact character identities."""
    if order < 2:
        raise click.UsageError("--order must be at least 2")
    ctx.obj = CliConfig(order, seed, parse_budget(budget), workers, fmt,
                        fixtures_dir)


def _load_code(path):
    try:
        return zkcode.ZkCode.from_file(path)
    except OSError as exc:
        raise click.UsageError(f"cannot read code file: {exc}")
    except ParseError as exc:
        raise click.UsageError(f"bad code file: {exc}")


def _load_lattice(path):
    if path is None:
        return lattice.standard_leech()
    try:
        return lattice.IntegralLattice.from_file(path)
    except OSError as exc:
        raise click.UsageError(f"cannot read lattice file: {exc}")
    except ParseError as exc:
        raise click.UsageError(f"bad lattice file: {exc}")


# -- code ---------------------------------------------------------------------


@main.group()
def code():
    """Verify codes and enumerate weight data."""


@code.command("verify")
@click.argument("path", type=click.Path())
@click.option("--skip-extremal", is_flag=True,
              help="skip the full-enumeration extremality check")
@click.pass_obj
def code_verify(cfg, path, skip_extremal):
    """Self-dual / Type II / extremal / C2 report for a code file."""
    c = _load_code(path)
    rep = zkcode.verify_type_ii(c)
    results = [
        CheckResult("self_orthogonal", "pass" if rep.self_orthogonal
                    else "fail", rep.witness if not rep.self_orthogonal else {}),
        CheckResult("self_dual", "pass" if rep.self_dual else "fail",
                    {"card": c.card, "needed": c.modulus ** (c.length // 2)}),
        CheckResult("type_ii", "pass" if rep.type_ii else "fail",
                    rep.witness if rep.self_dual and not rep.type_ii else {}),
    ]
    if rep.self_dual:
        c2 = zkcode.c2_analysis(c)
        results.append(CheckResult(
            "c2_analysis",
            "pass" if c2.m >= 12 or c.length != 24 else "fail",
            {"m": c2.m, "all_ones_in_c2": c2.all_ones_in_c2,
             "c2_type_ii": c2.c2_type_ii}))
    if not skip_extremal and rep.type_ii:
        try:
            data = zkcode.enumerate_swe(
                c, workers=cfg.workers, budget_seconds=cfg.budget_seconds,
                progress=_progress("swe"))
        except BudgetExceededError as exc:
            print(f"budget exceeded: {exc.progress}", file=sys.stderr)
            sys.exit(EXIT_BUDGET)
        want = 4 * c.modulus
        got = data.histogram.min_euclidean_weight()
        results.append(CheckResult(
            "extremal", "pass" if got == want else "fail",
            {"min_euclidean_weight": got, "required": want}))
    _finish(_echo_report(cfg, results))


@code.command("swe")
@click.argument("path", type=click.Path())
@click.option("--signed-coord", type=int, default=None,
              help="also emit the signed split for this coordinate")
@click.pass_obj
def code_swe(cfg, path, signed_coord):
    """Symmetrized weight enumerator histogram as JSON."""
    c = _load_code(path)
    try:
        data = zkcode.enumerate_swe(
            c, signed=signed_coord is not None, workers=cfg.workers,
            budget_seconds=cfg.budget_seconds, progress=_progress("swe"))
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc.progress}", file=sys.stderr)
        sys.exit(EXIT_BUDGET)
    doc = {
        "schema": 1,
        "length": c.length,
        "modulus": c.modulus,
        "words": str(data.words),
        "min_euclidean_weight": data.histogram.min_euclidean_weight(),
        "histogram": [
            {"composition": list(comp), "count": str(cnt)}
            for comp, cnt in sorted(data.histogram.counts.items())
        ],
    }
    if signed_coord is not None:
        even, odd = data.signed_histograms(signed_coord)
        doc["signed_coordinate"] = signed_coord
        doc["even"] = [{"composition": list(k), "count": str(v)}
                       for k, v in sorted(even.counts.items())]
        doc["odd"] = [{"composition": list(k), "count": str(v)}
                      for k, v in sorted(odd.counts.items())]
    click.echo(json.dumps(doc, indent=2, sort_keys=True))


# -- lattice ------------------------------------------------------------------


@main.group("lattice")
def lattice_group():
    """Build and certify lattices."""


@lattice_group.command("build-leech")
@click.option("--out", type=click.Path(), default=None,
              help="write the basis to this file")
@click.pass_obj
def lattice_build_leech(cfg, out):
    """Construct the Golay-based Leech lattice and certify it."""
    lat = lattice.standard_leech()
    cert = lattice.verify_leech(lat)
    results = [
        CheckResult("even", "pass" if cert.even else "fail"),
        CheckResult("unimodular", "pass" if cert.determinant == 1 else "fail",
                    {"determinant": cert.determinant}),
        CheckResult("rootless", "pass" if cert.rootless else "fail"),
    ]
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(lat.to_text())
        print(f"wrote {out}", file=sys.stderr)
    _finish(_echo_report(cfg, results))


@lattice_group.command("check")
@click.argument("path", type=click.Path())
@click.option("--theta-bound", type=int, default=None,
              help="also count vectors of norm <= bound by enumeration")
@click.pass_obj
def lattice_check(cfg, path, theta_bound):
    """Even/unimodular/rootless certificate for a lattice file."""
    lat = _load_lattice(path)
    cert = lattice.verify_leech(lat)
    results = [
        CheckResult("even", "pass" if cert.even else "fail"),
        CheckResult("unimodular", "pass" if cert.determinant == 1 else "fail",
                    {"determinant": cert.determinant}),
        CheckResult("rootless", "pass" if cert.rootless else "fail"),
    ]
    extra = None
    if theta_bound is not None:
        counts = lat.vector_counts(theta_bound)
        extra = {"vector_counts": {str(k): str(v)
                                   for k, v in sorted(counts.items())}}
    _finish(_echo_report(cfg, results, extra))


# -- frame --------------------------------------------------------------------


@main.group()
def frame():
    """Search for frames and extract their codes."""


@frame.command("search")
@click.option("--k", "kval", type=int, required=True)
@click.option("--lattice", "lattice_path", type=click.Path(), default=None,
              help="lattice file (default: standard Leech)")
@click.option("--name", default=None, help="fixture name for the discovery")
@click.pass_obj
def frame_search_cmd(cfg, kval, lattice_path, name):
    """Randomized backtracking search for a 2k-frame."""
    lat = _load_lattice(lattice_path)
    t0 = time.monotonic()
    try:
        f = lattice.frame_search(
            lat, kval, seed=cfg.seed, budget_seconds=cfg.budget_seconds,
            log=lambda m: print(m, file=sys.stderr))
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc.progress}", file=sys.stderr)
        sys.exit(EXIT_BUDGET)
    used = time.monotonic() - t0
    name = name or f"frame_k{kval}_seed{cfg.seed}"
    path = catalog.store_discovery(
        f, cfg.fixtures_dir, name, seed=cfg.seed, budget_used=round(used, 2),
        lattice=lat)
    c = lattice.frame_to_code(lat, f)
    code_path = catalog.store_discovery(
        c, cfg.fixtures_dir, name, seed=cfg.seed, budget_used=round(used, 2))
    print(f"wrote {path} and {code_path}", file=sys.stderr)
    doc = _echo_report(cfg, [CheckResult.ok(
        "frame_search", k=kval, seed=cfg.seed,
        frame_file=str(path), code_file=str(code_path))])
    _finish(doc)


@frame.command("extract")
@click.option("--frame", "frame_path", type=click.Path(), required=True)
@click.option("--lattice", "lattice_path", type=click.Path(), default=None)
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
def frame_extract(cfg, frame_path, lattice_path, out):
    """Extract the Z_2k code of a stored frame."""
    lat = _load_lattice(lattice_path)
    try:
        f = lattice.Frame.from_file(frame_path)
    except (OSError, ParseError) as exc:
        raise click.UsageError(f"bad frame file: {exc}")
    try:
        f.verify(lat)
    except MoonframeError as exc:
        _echo_report(cfg, [CheckResult.fail("frame_verifies", error=str(exc))])
        sys.exit(EXIT_CHECK_FAILED)
    c = lattice.frame_to_code(lat, f)
    text = c.to_text()
    if out:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
        print(f"wrote {out}", file=sys.stderr)
    else:
        click.echo(text, nl=False)
    sys.exit(0)


# -- moonshine ------------------------------------------------------------------


def _build_table(cfg, path):
    c = _load_code(path)
    try:
        return moonshine.decompose(
            c, order=cfg.order + 2, workers=cfg.workers,
            budget_seconds=cfg.budget_seconds)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc.progress}", file=sys.stderr)
        sys.exit(EXIT_BUDGET)
    except ValueError as exc:
        _echo_report(cfg, [CheckResult.fail("decompose_preconditions",
                                            error=str(exc))])
        sys.exit(EXIT_CHECK_FAILED)


@main.group("moonshine")
def moonshine_group():
    """Character decompositions and identity checks."""


@moonshine_group.command("character")
@click.option("--code", "code_path", type=click.Path(), required=True)
@click.pass_obj
def moonshine_character(cfg, code_path):
    """Assemble the full character and compare with the j-function."""
    table = _build_table(cfg, code_path)
    asm = moonshine.assemble_character(table)
    mismatch = moonshine.verify_against_j(asm, cfg.order)
    results = []
    for n in range(cfg.order + 1):
        results.append(CheckResult(
            f"coefficient_q{n}", "pass",
            {"value": asm.total.coeff(n)}))
    results.append(CheckResult(
        "matches_j_function",
        "pass" if mismatch is None else "fail",
        {} if mismatch is None else
        {"exponent": mismatch[0], "character": mismatch[1],
         "j_side": mismatch[2]}))
    _finish(_echo_report(cfg, results))


@moonshine_group.command("decompose")
@click.option("--code", "code_path", type=click.Path(), required=True)
@click.pass_obj
def moonshine_decompose(cfg, code_path):
    """Emit the summand table (JSON or aligned text)."""
    table = _build_table(cfg, code_path)
    moonshine.assemble_character(table)  # runs the consistency gauntlet
    if cfg.fmt == "json":
        click.echo(json.dumps(moonshine.table_to_json(table, cfg.order),
                              indent=2, sort_keys=True))
    else:
        click.echo(moonshine.table_to_text(table), nl=False)
    sys.exit(0)


@moonshine_group.command("mt")
@click.option("--class", "mt_class", type=click.Choice(["4A"]), default="4A",
              show_default=True)
@click.option("--i", "coord", type=int, default=0, show_default=True,
              help="frame coordinate of the diagonal automorphism")
@click.option("--code", "code_path", type=click.Path(), required=True)
@click.pass_obj
def moonshine_mt(cfg, mt_class, coord, code_path):
    """Trace series of the order-4 element against the eta quotient."""
    table = _build_table(cfg, code_path)
    if table.k % 2 == 0:
        raise click.UsageError("class 4A requires odd k (modulus 2 mod 4)")
    rep = moonshine.mckay_thompson_4A(table, coord)
    results = [
        CheckResult("twisted_trace_vanishes", "pass"),
        CheckResult(
            "eta_quotient_identity",
            "pass" if rep.matched_variant != "none" else "fail",
            {"matched_variant": rep.matched_variant} if rep.first_mismatch is None
            else {"exponent": rep.first_mismatch[0],
                  "trace": rep.first_mismatch[1],
                  "eta_side": rep.first_mismatch[2]}),
    ]
    rows = []
    for n in range(-1, cfg.order - 1):
        rows.append(CheckResult(
            f"coefficient_q{n}", "pass",
            {"trace": rep.series.coeff(n), "eta": rep.eta_side.coeff(n)}))
    _finish(_echo_report(cfg, results + rows))


# -- qseries ----------------------------------------------------------------------


@main.command("qseries")
@click.argument("name", type=click.Choice(
    ["phi", "eta", "a", "b", "F", "G", "j", "eta4a"]))
@click.option("--k", "kval", type=int, default=2, show_default=True)
@click.option("--i", "idx", type=int, default=0, show_default=True)
@click.option("--scale-num", type=int, default=1, show_default=True)
@click.option("--scale-den", type=int, default=1, show_default=True)
@click.pass_obj
def qseries_eval(cfg, name, kval, idx, scale_num, scale_den):
    """Evaluate a named special series to the configured order."""
    order = cfg.order + 1
    scale = Fraction(scale_num, scale_den)
    if name == "phi":
        s = qseries.phi(order, scale)
    elif name == "eta":
        s = qseries.eta(order, scale)
    elif name == "a":
        s = qseries.theta_a(kval, idx, order)
    elif name == "b":
        s = qseries.series_b(order)
    elif name in ("F", "G"):
        s = qseries.twisted_pair(order)[0 if name == "F" else 1]
    elif name == "j":
        s = qseries.j_minus_744(order)
    else:
        s = qseries.eta_quotient({2: 48, 1: -24, 4: -24}, order) - 24
    if cfg.fmt == "json":
        click.echo(json.dumps(s.to_json_terms(), indent=2))
    else:
        click.echo(str(s))
    sys.exit(0)


if __name__ == "__main__":
    main()
