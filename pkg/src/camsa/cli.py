"""Command-line front end.

Subcommands: validate (layout check), score (bundle -> report), aggregate
(reports -> cohort means), synth (scripted fixture generation). Exit codes:
0 success, 1 domain error (invalid layout, unscorable input), 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import balltrack, scoring, segmenter, synth
from .config import ScoringConfig
from .course import parse_layout, validate_layout, write_layout
from .errors import CamsaError
from .trajectory import RunBundle, parse_trajectory, write_trajectory


def _load_config(path: str | None) -> ScoringConfig:
    if path is None:
        return ScoringConfig()
    return ScoringConfig.from_file(path)


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _load_ball_source(entry: dict, base: Path) -> balltrack.BallSource:
    if "track" in entry:
        return balltrack.Precomputed(balltrack.parse_track(_read(base / entry["track"])))
    if "grids" in entry:
        grids = balltrack.parse_grids(_read(base / entry["grids"]))
        return balltrack.GridSource(
            grids=grids,
            origin=tuple(entry.get("origin", (0.0, 0.0))),
            cell_size=float(entry.get("cell_size", 1.0)),
        )
    raise CamsaError(f"ball source needs 'track' or 'grids': {entry}")


def load_bundle(manifest_path: str) -> RunBundle:
    """Assemble a RunBundle from a manifest of relative file paths."""
    base = Path(manifest_path).parent
    manifest = json.loads(_read(manifest_path).decode("utf-8"))
    return RunBundle(
        front=parse_trajectory(_read(base / manifest["front"])),
        rear=parse_trajectory(_read(base / manifest["rear"])),
        front_layout=parse_layout(_read(base / manifest["front_layout"])),
        rear_layout=parse_layout(_read(base / manifest["rear_layout"])),
        ball_front=_load_ball_source(manifest["ball_front"], base),
        ball_rear=_load_ball_source(manifest["ball_rear"], base),
        rear_frame_offset=int(manifest.get("rear_frame_offset", 0)),
    )


def cmd_validate(args) -> int:
    front = parse_layout(_read(args.front))
    rear = parse_layout(_read(args.rear))
    report = validate_layout(front, rear)
    if report.ok:
        print("layouts valid")
        return 0
    for violation in report.violations:
        print(f"violation: {violation}")
    return 1


def cmd_score(args) -> int:
    cfg = _load_config(args.config)
    out = Path(args.out) if args.out else None
    if len(args.bundles) > 1 and out is not None and not out.is_dir():
        out.mkdir(parents=True, exist_ok=True)
    code = 0
    for manifest in args.bundles:
        try:
            bundle = load_bundle(manifest)
            report = scoring.score_run(bundle, cfg)
        except CamsaError as exc:
            print(f"{manifest}: unscorable: {exc}", file=sys.stderr)
            code = max(code, 1)
            continue
        if args.verbose:
            for c in report.criteria:
                status = "pass" if c.passed else "FAIL"
                print(f"{manifest}: criterion {c.criterion_id:2d} {status}  {c.evidence}", file=sys.stderr)
            for e in report.errors:
                print(f"{manifest}: note {e}", file=sys.stderr)
        payload = scoring.report_to_json(report)
        if out is None:
            sys.stdout.write(payload.decode("utf-8") + "\n")
        else:
            target = out / (Path(manifest).stem + ".report.json") if out.is_dir() else out
            target.write_bytes(payload)
            print(f"{manifest}: total {report.total} -> {target}")
        if args.dump_phases:
            seg = segmenter.segment_partial(bundle, cfg)
            dump = json.dumps(segmenter.phases_to_json(seg), indent=2)
            if out is None:
                sys.stdout.write(dump + "\n")
            else:
                phase_path = (out if out.is_dir() else out.parent) / (Path(manifest).stem + ".phases.json")
                phase_path.write_text(dump, encoding="utf-8")
    return code


def cmd_aggregate(args) -> int:
    labels = args.labels.split(",") if args.labels else ["all"] * len(args.reports)
    if len(labels) != len(args.reports):
        print(f"{len(args.reports)} reports but {len(labels)} labels", file=sys.stderr)
        return 1
    rows = []
    for label, path in zip(labels, args.reports):
        report = scoring.report_from_json(_read(path))
        rows.append((label, [float(s) for s in report.action_scores()], float(report.time_score)))
    try:
        cohort = scoring.aggregate_cohort(rows)
    except CamsaError as exc:
        print(f"aggregation failed: {exc}", file=sys.stderr)
        return 1
    payload = scoring.cohort_to_json(cohort)
    if args.out:
        Path(args.out).write_bytes(payload)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(payload.decode("utf-8") + "\n")
    return 0


def cmd_synth(args) -> int:
    if args.script:
        raw = json.loads(_read(args.script).decode("utf-8"))
        fault_set = frozenset(
            int(str(f).lstrip("Ff")) for f in raw.get("fault_set", [])
        )
        script = synth.RunScript(
            seed=int(raw.get("seed", 1)),
            action_durations=tuple(raw.get("action_durations", synth.DEFAULT_ACTION_SECONDS)),
            fault_set=fault_set,
            noise=float(raw.get("noise", 0.5)),
            fps=float(raw.get("fps", 30.0)),
            pace=float(raw.get("pace", 1.0)),
        )
    else:
        script = synth.RunScript()
    bundle, truth = synth.generate_run(script)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "front.traj.json").write_bytes(write_trajectory(bundle.front))
    (out / "rear.traj.json").write_bytes(write_trajectory(bundle.rear))
    (out / "front.layout.json").write_bytes(write_layout(bundle.front_layout))
    (out / "rear.layout.json").write_bytes(write_layout(bundle.rear_layout))
    (out / "ball_front.track.json").write_bytes(balltrack.write_track(bundle.ball_front.track))
    (out / "ball_rear.track.json").write_bytes(balltrack.write_track(bundle.ball_rear.track))
    manifest = {
        "front": "front.traj.json",
        "rear": "rear.traj.json",
        "front_layout": "front.layout.json",
        "rear_layout": "rear.layout.json",
        "ball_front": {"track": "ball_front.track.json"},
        "ball_rear": {"track": "ball_rear.track.json"},
        "rear_frame_offset": bundle.rear_frame_offset,
    }
    (out / "bundle.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    truth_obj = {
        "expected_failed_criteria": sorted(truth.expected_failed_criteria),
        "phases": {
            str(k): {"view": truth.phase_views[k], "start": truth.phases[k][0], "end": truth.phases[k][1]}
            for k in sorted(truth.phases)
        },
        "run_start_frame": truth.run_start_frame,
        "kick_frame": truth.kick_frame,
        "completion_seconds": truth.completion_seconds,
    }
    (out / "groundtruth.json").write_text(json.dumps(truth_obj, indent=2), encoding="utf-8")
    print(f"wrote fixture set to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="camsa",
        description="Deterministic CAMSA run scoring from pose trajectories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a front/rear layout pair")
    p.add_argument("front")
    p.add_argument("rear")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("score", help="score one or more run bundles")
    p.add_argument("bundles", nargs="+", help="bundle manifest JSON paths")
    p.add_argument("--config", default=None, help="threshold override file")
    p.add_argument("--out", default=None, help="report file (or directory for many bundles)")
    p.add_argument("--dump-phases", action="store_true", help="also write the segmentation dump")
    p.add_argument("-v", "--verbose", action="store_true", help="print per-criterion outcomes")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("aggregate", help="aggregate score reports into cohort means")
    p.add_argument("reports", nargs="+")
    p.add_argument("--labels", default=None, help="comma-separated label per report")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("synth", help="generate a synthetic fixture set")
    p.add_argument("--script", default=None, help="run script JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CamsaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
