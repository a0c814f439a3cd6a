import csv
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor

import attrs
import click
import numpy as np

from ..classify import (
    GROUP_TABLE,
    GroupLabel,
    analytic_rule,
    class_rank,
    groups_of_case,
    numeric_verdict,
    transition_curves,
)
from ..models import PARAM_NAMES, DesignParams, FamilyCase, family_case
from ..utils.errors import InvalidParameters, NoSignatureMatch, OutputError, VerificationFailed
from ..workspace import ALL_THE_WORKSPACE, GridSpec
from .render import cross_section_svg, zone_map_svg
from .schemas import build_report
from .suite import FULL_QUATERNARY, select

logger = logging.getLogger(__name__)

# sweeps evaluate the transition curves on this many points per axis for the overlay
OVERLAY_SAMPLES = 200
# aspects() rejects coarser rasters
MIN_ASPECT_GRID = 128

length_option = dict(type=float, required=True)


def design_options(command):
    for name in reversed(PARAM_NAMES):
        command = click.option(f"--{name}", name, help=f"link length {name} (>= 0)", **length_option)(command)
    return command


def _params(values):
    return DesignParams(*(values[name] for name in PARAM_NAMES))


def _grid(config, p, resolution):
    return GridSpec.for_params(p, resolution or config.GRID, config.REACH_MARGIN)


def _verdict(config, p, resolution=None, trace_resolution=None, aspect_resolution=None):
    return numeric_verdict(
        p,
        _grid(config, p, resolution),
        trace_resolution or config.TRACE,
        aspect_resolution or config.ASPECT_GRID,
        config.MIN_VOID_CELLS,
    )


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as error:
        raise OutputError(f"cannot write {path}: {error.strerror}", path=path) from error


def _dumps(report):
    return json.dumps(report, indent=2) + "\n"


# CLASSIFY
@click.command()
@design_options
@click.option("--grid", "resolution", type=int, default=None, help="raster cells along rho")
@click.option("--json", "as_json", is_flag=True, help="print the full report as JSON")
@click.pass_obj
def classify(config, resolution, as_json, **lengths):
    """Classify one manipulator into its workspace group."""
    p = _params(lengths)
    verdict = _verdict(config, p, resolution)
    if as_json:
        click.echo(_dumps(build_report(verdict, config.VERSION)), nl=False)
        return
    measured = verdict.metrics
    record = GROUP_TABLE[verdict.label]
    click.echo(f"parameters      {p}")
    click.echo(f"case            {family_case(p).name}")
    click.secho(f"group           {verdict.label} (class {class_rank(verdict.label)})", bold=True)
    analytic = verdict.analytic.label or "Indeterminate"
    click.echo(f"analytic rule   {analytic} [{verdict.analytic.rule}]")
    click.echo(f"nodes / voids   {measured.node_count} / {measured.void_count}")
    click.echo(f"4-IKS zone      {measured.quaternary_ratio:.3f} ({measured.buckets['quaternary']}; table: {record.quaternary_zone})")
    click.echo(f"holes           {measured.hole_ratio:.3f} ({measured.buckets['holes']}; table: {record.holes})")
    click.echo(f"feasible paths  {measured.feasible_ratio:.3f} ({measured.buckets['feasible']}; table: {record.feasible_zone})")
    for warning in verdict.warnings:
        click.secho(f"warning         {warning}", fg="yellow", err=True)


# ANALYZE
@click.command()
@design_options
@click.option("--out", "out_dir", required=True, help="output directory")
@click.option("--grid", "resolution", type=int, default=None)
@click.pass_obj
def analyze(config, out_dir, resolution, **lengths):
    """Write report.json and cross_section.svg for one manipulator."""
    p = _params(lengths)
    # validate the family before the (slow) analysis
    family_case(p)
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as error:
        raise OutputError(f"cannot create {out_dir}: {error.strerror}", path=out_dir) from error
    verdict = _verdict(config, p, resolution)
    _write(os.path.join(out_dir, "report.json"), _dumps(build_report(verdict, config.VERSION)))
    _write(os.path.join(out_dir, "cross_section.svg"), cross_section_svg(verdict.analysis))
    click.echo(f"{verdict.label}: wrote report.json and cross_section.svg to {out_dir}")


# SWEEP
@attrs.frozen
class SweepAxis:
    name: str
    lo: float
    hi: float
    steps: int

    @property
    def values(self):
        return np.linspace(self.lo, self.hi, self.steps)


def parse_axis(text):
    """NAME:LO..HI:STEPS"""
    try:
        name, bounds, steps = text.split(":")
        lo, hi = bounds.split("..")
        axis = SweepAxis(name.strip(), float(lo), float(hi), int(steps))
    except ValueError as error:
        raise InvalidParameters(f"bad sweep axis {text!r}; expected NAME:LO..HI:STEPS") from error
    if axis.name not in PARAM_NAMES:
        raise InvalidParameters(f"unknown parameter {axis.name!r}")
    if axis.steps < 1 or not axis.lo <= axis.hi:
        raise InvalidParameters(f"empty sweep range {text!r}")
    return axis


def parse_fixed(items):
    fixed = {}
    for item in items:
        name, _, value = item.partition("=")
        name = name.strip()
        if name not in PARAM_NAMES or not value:
            raise InvalidParameters(f"bad fixed value {item!r}; expected NAME=VALUE")
        try:
            fixed[name] = float(value)
        except ValueError as error:
            raise InvalidParameters(f"bad fixed value {item!r}") from error
    return fixed


def check_pattern(case, x, y, fixed):
    """Every cell of the sweep must stay inside `case`."""
    free = set(case.free_parameters)
    if x.name == y.name:
        raise InvalidParameters("the two sweep axes must be different parameters")
    for axis in (x, y):
        if axis.name not in free:
            raise InvalidParameters(f"{axis.name} is zero in case {case.name} and cannot be swept")
        if axis.lo <= 0:
            raise InvalidParameters(f"{axis.name} must stay strictly positive in case {case.name}")
    for name in PARAM_NAMES:
        if name in (x.name, y.name):
            if name in fixed:
                raise InvalidParameters(f"{name} is both swept and fixed")
            continue
        value = fixed.get(name, 0.0)
        if name in free and not value > 0:
            raise InvalidParameters(f"case {case.name} needs a positive --fixed {name}=VALUE")
        if name not in free and value != 0:
            raise InvalidParameters(f"{name} must be zero in case {case.name}")


@attrs.frozen(eq=False)
class Sweep:
    case: FamilyCase
    x_name: str
    xs: np.ndarray
    y_name: str
    ys: np.ndarray
    rows: list
    transitions: list

    @property
    def labels(self):
        return groups_of_case(self.case)


def _sweep_cell(task):
    i, j, values, settings = task
    p = DesignParams(**values)
    indeterminate = analytic_rule(p).indeterminate
    try:
        verdict = numeric_verdict(p, GridSpec.for_params(p, settings["grid"], settings["margin"]),
                                  settings["trace"], settings["aspect"], settings["min_void_cells"])
    except NoSignatureMatch as error:
        logger.warning("sweep cell %s: %s", p, error.message)
        measured = error.details["metrics"]
        label, nodes, voids = "?", measured["node_count"], measured["void_count"]
    else:
        label = str(verdict.label)
        nodes, voids = verdict.metrics.node_count, verdict.metrics.void_count
    return dict(i=i, j=j, label=label, node_count=nodes, void_count=voids, indeterminate=indeterminate)


def transition_points(case, x, y, fixed, samples=OVERLAY_SAMPLES):
    """Midpoints between neighbouring overlay samples where a transition curve changes sign."""
    xs = np.linspace(x.lo, x.hi, samples)
    ys = np.linspace(y.lo, y.hi, samples)
    points = []
    for curve in transition_curves(case):
        values = np.full((samples, samples), np.nan)
        for j, yv in enumerate(ys):
            for i, xv in enumerate(xs):
                values[j, i] = curve.fn({**fixed, x.name: xv, y.name: yv})
        with np.errstate(invalid="ignore"):
            across = np.sign(values[:, :-1]) * np.sign(values[:, 1:]) <= 0
            up = np.sign(values[:-1]) * np.sign(values[1:]) <= 0
        for j, i in zip(*np.nonzero(across)):
            points.append((0.5 * (xs[i] + xs[i + 1]), ys[j]))
        for j, i in zip(*np.nonzero(up)):
            points.append((xs[i], 0.5 * (ys[j] + ys[j + 1])))
    return sorted(set((float(a), float(b)) for a, b in points))


def run_sweep(config, case, x, y, fixed, resolution=None, jobs=1):
    check_pattern(case, x, y, fixed)
    settings = dict(
        grid=resolution or config.SWEEP_GRID,
        margin=config.REACH_MARGIN,
        trace=config.SWEEP_TRACE,
        aspect=max(MIN_ASPECT_GRID, config.ASPECT_GRID // 2),
        min_void_cells=config.MIN_VOID_CELLS,
    )
    base = {name: fixed.get(name, 0.0) for name in PARAM_NAMES}
    tasks = [
        (i, j, {**base, x.name: float(xv), y.name: float(yv)}, settings)
        for j, yv in enumerate(y.values)
        for i, xv in enumerate(x.values)
    ]
    logger.info("sweeping case %s over %d cells", case.name, len(tasks))
    if jobs > 1:
        # cells are independent; map keeps the task order
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_cell, tasks))
    else:
        rows = [_sweep_cell(task) for task in tasks]
    return Sweep(case, x.name, x.values, y.name, y.values, rows, transition_points(case, x, y, base))


def sweep_csv(sweep):
    lines = [["x", "y", "label", "node_count", "void_count"]]
    for row in sweep.rows:
        lines.append([
            f"{sweep.xs[row['i']]:.9g}", f"{sweep.ys[row['j']]:.9g}",
            row["label"], row["node_count"], row["void_count"],
        ])
    return lines


@click.command()
@click.option("--case", "case_name", type=click.Choice([case.name for case in FamilyCase]), required=True)
@click.option("--x", "x_axis", required=True, help="NAME:LO..HI:STEPS")
@click.option("--y", "y_axis", required=True, help="NAME:LO..HI:STEPS")
@click.option("--fixed", multiple=True, help="NAME=VALUE for a parameter held constant")
@click.option("--grid", "resolution", type=int, default=None)
@click.option("--jobs", type=int, default=1, show_default=True, help="worker processes")
@click.option("--out", "out_dir", default=".", show_default=True, help="output directory")
@click.pass_obj
def sweep(config, case_name, x_axis, y_axis, fixed, resolution, jobs, out_dir):
    """Label a 2-D parameter slice of one case; writes zone_map.svg and zone_map.csv."""
    case = FamilyCase[case_name]
    result = run_sweep(config, case, parse_axis(x_axis), parse_axis(y_axis), parse_fixed(fixed), resolution, jobs)
    try:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "zone_map.csv"), "w", encoding="utf-8", newline="") as handle:
            csv.writer(handle, lineterminator="\n").writerows(sweep_csv(result))
    except OSError as error:
        raise OutputError(f"cannot write to {out_dir}: {error.strerror}", path=out_dir) from error
    _write(os.path.join(out_dir, "zone_map.svg"), zone_map_svg(result))
    counts = {}
    for row in result.rows:
        counts[row["label"]] = counts.get(row["label"], 0) + 1
    summary = ", ".join(f"{label}: {n}" for label, n in sorted(counts.items()))
    click.echo(f"case {case.name}, {len(result.rows)} cells ({summary})")


# VERIFY
def table_mismatches(entry, measured):
    """(hard, soft) differences between the measured zone buckets and the group table."""
    record = GROUP_TABLE[GroupLabel(entry.label)]
    hard, soft = [], []
    buckets = measured.buckets
    if entry.label in FULL_QUATERNARY and measured.quaternary_ratio < 0.99:
        hard.append(f"4-IKS zone {measured.quaternary_ratio:.3f} < 0.99")
    for name, expected in (("quaternary", record.quaternary_zone), ("holes", record.holes),
                           ("feasible", record.feasible_zone)):
        if buckets[name] != expected:
            soft.append(f"{name}: {buckets[name]} (table: {expected})")
    if record.quaternary_zone == ALL_THE_WORKSPACE and entry.label not in FULL_QUATERNARY:
        # a node point pinches the 4-IKS zone; the table still calls it the whole workspace
        soft = [item for item in soft if not item.startswith("quaternary")]
    return hard, soft


@click.command()
@click.option("--grid", "resolution", type=int, default=None)
@click.option("--only", default=None, help="comma-separated cases or groups, e.g. D or A3,B2")
@click.option("--table", "check_table", is_flag=True, help="also compare zone sizes with the group table")
@click.pass_obj
def verify(config, resolution, only, check_table):
    """Run the example manipulators of every group and check the computed labels."""
    entries = select(only)
    if not entries:
        raise InvalidParameters(f"--only {only!r} selects no example")
    failures = []
    for entry in entries:
        verdict = _verdict(config, entry.params, resolution)
        measured = verdict.metrics
        problems = []
        if str(verdict.label) != entry.label:
            problems.append(f"label {verdict.label}")
        if (measured.node_count, measured.void_count) != (entry.nodes, entry.voids):
            problems.append(f"nodes/voids {measured.node_count}/{measured.void_count}")
        notes = []
        if check_table:
            hard, soft = table_mismatches(entry, measured)
            problems.extend(hard)
            notes.extend(soft)
        status = click.style("FAIL", fg="red") if problems else click.style("ok", fg="green")
        click.echo(f"{entry.label:<3} {str(entry.params):<48} "
                   f"{entry.nodes}/{entry.voids} -> {verdict.label} {measured.node_count}/{measured.void_count} {status}")
        for problem in problems:
            click.echo(f"      {problem}")
        for note in notes:
            click.secho(f"      note: {note}", fg="yellow")
        if problems:
            failures.append(entry.label)
    click.echo(f"{len(entries) - len(failures)}/{len(entries)} passed")
    if failures:
        raise VerificationFailed(f"verification failed for {', '.join(failures)}", failures=failures)


# TABLE
@click.command()
def table():
    """Print the group table with the class rank of every group."""
    click.echo(f"{'group':<6}{'voids':>6}{'nodes':>6}  {'4-IKS zone':<18}{'holes':<14}{'feasible paths':<18}rank")
    for label, record in GROUP_TABLE.items():
        click.echo(f"{str(label):<6}{record.voids:>6}{record.nodes:>6}  {record.quaternary_zone:<18}"
                   f"{record.holes:<14}{record.feasible_zone:<18}{class_rank(label)}")


atlas_commands = (classify, analyze, sweep, verify, table)
