"""Command-line front-end: offline batch analysis and the service runner."""

from __future__ import annotations

import argparse
import json
import socket
import sys
from pathlib import Path

from . import __version__
from .config import apply_overrides, load_config
from .pipeline import analyze_bytes, report_dict


def _color_flag(text: str):
    parts = tuple(int(p) for p in text.split(","))
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected R,G,B")
    return parts


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--bins", dest="bin_count", type=int, default=None,
                        help="bins per channel (default 8)")
    parser.add_argument("--s-min", dest="s_min", type=float, default=None,
                        help="achromatic saturation threshold (default 0.1)")
    parser.add_argument("--smooth-radius", dest="smooth_radius", type=int, default=None,
                        help="interest-map box smoothing radius (default 2)")
    parser.add_argument("--suppress-radius", dest="suppress_radius", type=float, default=None,
                        help="non-max suppression radius (default 20)")
    parser.add_argument("--k", dest="k", type=int, default=None,
                        help="number of interest points (default 3)")
    parser.add_argument("--box-color", dest="box_color", type=_color_flag, default=None)
    parser.add_argument("--marker-color", dest="marker_color", type=_color_flag, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phonecam",
        description="Locate the three most uncommon points in field captures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze local image files")
    analyze.add_argument("paths", nargs="+", help="PNG/JPEG files to analyze")
    analyze.add_argument("--out-dir", default=".", help="output directory")
    analyze.add_argument("--config", default=None, help="config file (flags override)")
    _add_pipeline_flags(analyze)

    serve = sub.add_parser("serve", help="run the ingestion service")
    serve.add_argument("--config", default=None,
                       help="config file (default: $PHONECAM_CONFIG or ./phonecam.conf)")
    serve.add_argument("--prefix", default=None)
    serve.add_argument("--poll-interval", dest="poll_interval", type=float, default=None)
    serve.add_argument("--inbox", dest="inbox_path", default=None)
    serve.add_argument("--publish", dest="publish_path", default=None)
    serve.add_argument("--bind", dest="http_bind", default=None, help="host:port")
    serve.add_argument("--console", dest="console_path", default=None,
                       help="directory of console static files")
    _add_pipeline_flags(serve)

    sub.add_parser("version", help="print version")
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    keys = ("bin_count", "s_min", "smooth_radius", "suppress_radius", "k",
            "box_color", "marker_color", "prefix", "poll_interval",
            "inbox_path", "publish_path", "http_bind", "console_path")
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = apply_overrides(load_config(args.config), **_overrides(args))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    failures = 0
    for path_text in args.paths:
        path = Path(path_text)
        try:
            analysis = analyze_bytes(path.read_bytes(), cfg.pipeline)
        except Exception as exc:
            print(f"{path.name}: error: {exc}", file=sys.stderr)
            failures += 1
            continue
        stem = path.stem
        (out_dir / f"{stem}.annotated.png").write_bytes(analysis.annotated_raw)
        (out_dir / f"{stem}.processed.png").write_bytes(analysis.annotated_processed)
        report = report_dict(analysis, job_id=stem)
        (out_dir / f"{stem}.report.json").write_text(json.dumps(report, indent=2, sort_keys=True))
        summary = " ".join(
            f"{p.rank}:({p.x},{p.y}) s={p.score:.3f}" for p in analysis.points
        )
        print(f"{path.name}: {summary}")
    return 1 if failures else 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import PhonecamService, create_app

    try:
        cfg = apply_overrides(load_config(args.config), **_overrides(args))
        host, port = cfg.host, cfg.port
    except Exception as exc:
        print(f"phonecam serve: {exc}", file=sys.stderr)
        return 1

    # fail fast on an occupied port instead of letting uvicorn stack-trace
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        print(f"phonecam serve: cannot bind {host}:{port}: {exc}", file=sys.stderr)
        return 1
    finally:
        probe.close()

    service = PhonecamService(cfg)
    app = create_app(service)
    service.start()
    print(f"phonecam serving on http://{host}:{port} (inbox: {cfg.inbox_path}, "
          f"prefix: {cfg.prefix!r})")
    try:
        uvicorn.run(app, host=host, port=port, log_level="info")
    finally:
        # let the in-flight job finish, then stop cleanly
        service.stop(drain=True)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "analyze":
        return cmd_analyze(args)
    if args.command == "serve":
        return cmd_serve(args)
    print(f"phonecam {__version__}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
