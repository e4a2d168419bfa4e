"""Command-line driver.

    toricdegen fan-check  --builtin P2
    toricdegen degenerate --fan fan.json --partition part.json
    toricdegen monodromy  --builtin quintic
    toricdegen period     --builtin quintic --order 10

Exit codes: 0 every check passed, 1 some check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import builtins, lattice
from .clemens import (
    clemens_complex,
    homology,
    reduced_genus_check,
    verify_sphere_theorem,
)
from .degeneration import (
    DegenerationError,
    FamilySpec,
    Partition,
    components,
    strata,
)
from .io import InputError, canonical_json, content_hash, load_fan, load_partition, load_sections, write_json
from .residue import period_series, torus_polynomial, verify_max_monodromy_criterion
from .toric import (
    Fan,
    FanError,
    Section,
    TorusDivisor,
    delta_polytope,
    has_reflexive_delta,
    is_complete,
    is_smooth,
    nabla_polytope,
    picard_group,
)

STATUSES = ("pass", "fail", "assumed", "skipped")


@dataclass
class RunReport:
    command: str
    inputs: list[dict] = field(default_factory=list)
    results: dict = field(default_factory=dict)
    verdicts: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    duration: float = 0.0

    def verdict(self, check: str, status: str | bool, reason: str) -> None:
        if isinstance(status, bool):
            status = "pass" if status else "fail"
        assert status in STATUSES
        self.verdicts.append({"check": check, "status": status, "reason": reason})

    @property
    def exit_code(self) -> int:
        return 0 if all(v["status"] in ("pass", "assumed") for v in self.verdicts) else 1

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "verdicts": self.verdicts,
            "warnings": self.warnings,
            "exit_code": self.exit_code,
        }
        if timing:
            out["duration_s"] = round(self.duration, 3)
        return out


def _num(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def _vec(v):
    return [_num(Fraction(x)) for x in v]


# ---------------------------------------------------------------------------
# Commands on already-parsed inputs
# ---------------------------------------------------------------------------


def cmd_fan_check(fan: Fan, inputs: list | None = None) -> RunReport:
    rep = RunReport("fan-check", inputs or [])
    rep.results["rays"] = len(fan.rays)
    smooth = is_smooth(fan)
    rep.results["smooth"] = smooth
    rep.verdict("smooth", smooth, "every maximal cone is spanned by a lattice basis")
    try:
        complete = is_complete(fan)
        reason = "every ridge lies in exactly two maximal cones"
    except FanError as exc:
        complete, reason = False, str(exc)
    rep.results["complete"] = complete
    rep.verdict("complete", complete, reason)
    try:
        delta = delta_polytope(fan)
    except FanError as exc:
        rep.verdict("delta", False, str(exc))
        rep.verdict("reflexive", "skipped", "no full-dimensional Delta")
        return rep
    rep.results["delta_vertices"] = [_vec(v) for v in delta.vertices]
    reflexive = has_reflexive_delta(fan)
    rep.results["reflexive"] = reflexive
    rep.verdict("reflexive", reflexive, "Delta and its polar dual are lattice polytopes, 0 the only interior point")
    if reflexive:
        nabla = nabla_polytope(fan)
        rep.results["nabla_vertices"] = [_vec(v) for v in nabla.vertices]
        rep.results["nabla_lattice_points"] = len(lattice.lattice_points(nabla))
    if smooth:
        rep.results["class_group_invariants"] = picard_group(fan)
    return rep


def cmd_degenerate(spec: FamilySpec, inputs: list | None = None) -> RunReport:
    rep = RunReport("degenerate", inputs or [])
    rep.results["family"] = spec.label
    rep.results["N"], rep.results["k"], rep.results["n"] = spec.fan.rank, spec.k, spec.n
    comps = components(spec)
    rep.results["components"] = [list(c.rays) for c in comps]
    rep.results["component_count"] = len(comps)
    if spec.claimed_component_count is not None:
        rep.results["claimed_component_count"] = spec.claimed_component_count
        if spec.claimed_component_count != len(comps):
            rep.warnings.append(
                f"component count {len(comps)} differs from the closed-form count "
                f"prod(n_i - 1) = {spec.claimed_component_count}; the enumerated count is reported"
            )
    if not comps:
        rep.warnings.append("X0 empty: every transversal of the partition contains a primitive collection")
        rep.verdict("components", False, "X0 empty; no component C_sigma is nonempty")
        return rep
    rep.verdict("components", True, f"{len(comps)} nonempty components")

    st = strata(spec, comps)
    rep.results["strata"] = st.to_json()
    cx = clemens_complex(spec)
    betti = homology(cx).betti
    rep.results["clemens_complex"] = {"model": "nerve model", **cx.to_json()}
    rep.results["f_vector"] = [cx.count(d) for d in range(cx.dim + 1)]
    rep.results["betti"] = list(betti)
    blocks = betti[spec.n] if spec.n < len(betti) else 0
    rep.results["max_jordan_block_count"] = blocks
    rep.results["max_jordan_block_size"] = spec.n + 1
    if has_reflexive_delta(spec.fan):
        rep.verdict("max_jordan_blocks", blocks == 1,
                    f"b_{spec.n} of Clemens' complex = {blocks}; one block of size n+1 expected")
        genus = reduced_genus_check(spec)
        rep.results["genus"] = genus.to_json()
        rep.verdict("geometric_genus", genus.passed, f"p_g = {genus.geometric_genus}, Calabi-Yau value 1")
    if spec.k == 1:
        sphere = verify_sphere_theorem(spec.fan, spec.partition)
        rep.results["sphere"] = sphere.to_json()
        rep.verdict("sphere", sphere.passed,
                    f"Clemens' complex matches the boundary of Delta; Betti {list(sphere.betti)}")
    return rep


def cmd_monodromy(spec: FamilySpec, inputs: list | None = None) -> RunReport:
    rep = RunReport("monodromy", inputs or [])
    crit = verify_max_monodromy_criterion(spec)
    rep.results.update(crit.to_json())
    for v in crit.verdicts:
        rep.verdict(f"condition {v.condition}", v.status, v.reason)
    if not components(spec):
        rep.warnings.append("X0 empty: no monodromy statement")
    return rep


def cmd_period(fan: Fan, section: Section, order: int, inputs: list | None = None) -> RunReport:
    rep = RunReport("period", inputs or [])
    f = torus_polynomial(fan, section)
    series = period_series(f, order)
    rep.results["order"] = order
    rep.results["torus_polynomial"] = f.to_json()
    rep.results["period"] = series.to_json()
    rep.verdict("hypersurface", True, "single-block family; period = sum_m CT(f^m) t^m")
    return rep


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------


def _builtin_hash(obj) -> str:
    return content_hash(canonical_json(obj))


def _resolve(args) -> tuple[Fan, Partition, tuple[Section, ...] | None, str, list, FamilySpec | None]:
    inputs = []
    fam = None
    if args.builtin and args.fan:
        raise InputError("give either --fan or --builtin, not both")
    if args.builtin:
        name = args.builtin
        if name in builtins.FAMILIES:
            fam = builtins.family(name)
            fan = fam.fan
        elif name in builtins.FANS:
            fan = builtins.fan(name)
        else:
            raise InputError(
                f"unknown builtin {name!r}; fans: {sorted(builtins.FANS)}, "
                f"families: {sorted(builtins.FAMILIES)}"
            )
        inputs.append({"builtin": name, "hash": _builtin_hash(fan.to_json())})
        label = name
    elif args.fan:
        fan, h = load_fan(args.fan)
        inputs.append({"path": args.fan, "hash": h})
        label = fan.name
    else:
        raise InputError("an input fan is required: --fan PATH or --builtin NAME")

    partition = fam.partition if fam else None
    if getattr(args, "partition", None):
        partition, h = load_partition(args.partition, fan)
        inputs.append({"path": args.partition, "hash": h})
    if partition is None:
        partition = Partition.single_block(fan.nrays)

    sections = None
    if getattr(args, "sections", None):
        sections, h = load_sections(args.sections, fan, partition)
        inputs.append({"path": args.sections, "hash": h})
    elif fam is not None and partition == fam.partition:
        sections = fam.sections
    return fan, partition, sections, label, inputs, fam


def _family(fan, partition, sections, label, fam) -> FamilySpec:
    try:
        if sections is None:
            spec = FamilySpec.generic(fan, partition, label=label)
        else:
            spec = FamilySpec(fan, partition, sections, label=label)
    except (DegenerationError, FanError) as exc:
        raise InputError(str(exc)) from None
    if fam is not None and partition == fam.partition:
        spec = FamilySpec(spec.fan, spec.partition, spec.sections, label=label,
                          claimed_component_count=fam.claimed_component_count)
    return spec


def run(args) -> RunReport:
    fan, partition, sections, label, inputs, fam = _resolve(args)
    if args.command == "fan-check":
        return cmd_fan_check(fan, inputs)
    if args.command == "period":
        if partition.k != 1:
            raise InputError("period needs a hypersurface (single-block) family")
        if sections is None:
            sections = (Section.generic(fan, TorusDivisor.anticanonical(fan)),)
        return cmd_period(fan, sections[0], args.order, inputs)
    spec = _family(fan, partition, sections, label, fam)
    if args.command == "degenerate":
        return cmd_degenerate(spec, inputs)
    return cmd_monodromy(spec, inputs)


def render(report: dict) -> str:
    """Human-readable view of a report's JSON."""
    lines = [f"== {report['command']} =="]
    for inp in report["inputs"]:
        src = inp.get("path") or f"builtin:{inp.get('builtin')}"
        lines.append(f"input   {src}  {inp['hash'][:19]}")
    for v in report["verdicts"]:
        lines.append(f"[{v['status'].upper():7}] {v['check']}: {v['reason']}")
    for key, value in report["results"].items():
        if key in ("clemens_complex", "strata", "conditions", "torus_polynomial"):
            continue
        text = json.dumps(value, sort_keys=True)
        if len(text) > 100:
            text = text[:97] + "..."
        lines.append(f"{key:24} {text}")
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    if "duration_s" in report:
        lines.append(f"duration {report['duration_s']} s")
    lines.append(f"exit {report['exit_code']}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toricdegen", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, partition=True, sections=True):
        p.add_argument("--fan", metavar="PATH", help="fan JSON file")
        p.add_argument("--builtin", metavar="NAME", help="builtin fan or family")
        if partition:
            p.add_argument("--partition", metavar="PATH", help="partition JSON file")
        if sections:
            p.add_argument("--sections", metavar="PATH", help="section coefficients JSON file")
        p.add_argument("--json", metavar="OUT", help="write the JSON report here ('-' for stdout)")
        p.add_argument("--quiet", action="store_true", help="no human-readable output")
        p.add_argument("--timing", action="store_true", help="include the run time in the report")

    common(sub.add_parser("fan-check", help="smoothness, completeness, reflexivity"),
           partition=False, sections=False)
    common(sub.add_parser("degenerate", help="components, Clemens complex, Betti numbers"),
           sections=False)
    common(sub.add_parser("monodromy", help="maximal Jordan block criterion"))
    p = sub.add_parser("period", help="torus period coefficients")
    common(p, partition=False)
    p.add_argument("--order", type=int, default=10, metavar="M")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report = run(args)
    except (InputError, FanError, DegenerationError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"toricdegen: input error: {msg}", file=sys.stderr)
        return 2
    report.duration = time.perf_counter() - start
    data = report.to_json(timing=args.timing)
    if args.json:
        write_json(data, args.json)
    if not args.quiet:
        print(render(data), file=sys.stderr if args.json == "-" else sys.stdout)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
