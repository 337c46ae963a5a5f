"""Command-line front end.

Every subcommand prints a JSON report on stdout. Failures print a JSON
diagnostic ``{"error": ..., "message": ...}`` on stderr and exit with the
code listed in ``EXIT_CODES``.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, obstruction
from .embedding import embeds_on
from .errors import (
    ConstraintError,
    CoordinateRangeError,
    DomainError,
    GeneralPositionError,
    MalformedFileError,
)
from .geometry import PointSet
from .order_types import (
    canonical_key,
    generate_order_types,
    has_triangular_hull,
    load_order_types,
    read_otypes_path,
    write_database,
)
from .threetrees import count_T_family, gen_T_family
from .triangulations import Triangulation, gen_triangulations, parse_planar_code, write_planar_code

log = logging.getLogger("unipoint")

EXIT_OK = 0
EXIT_FAILED = 1  # the command ran but the checked property does not hold
EXIT_USAGE = 2
EXIT_MISSING_FILE = 3
EXIT_MALFORMED = 4
EXIT_UNSUPPORTED_N = 5
EXIT_GENERAL_POSITION = 6
EXIT_CONSTRAINT = 7

EXIT_CODES = {
    FileNotFoundError: EXIT_MISSING_FILE,
    MalformedFileError: EXIT_MALFORMED,
    CoordinateRangeError: EXIT_MALFORMED,
    GeneralPositionError: EXIT_GENERAL_POSITION,
    DomainError: EXIT_UNSUPPORTED_N,
    ConstraintError: EXIT_CONSTRAINT,
}

# supported n per command (inclusive)
N_RANGE = {
    "gen-3trees": (4, 12),
    "gen-triangulations": (4, 12),
    "gen-otypes": (3, 8),
    "survey": (1, 11),
    "check-universal": (1, 11),
    "count unlabeled-3trees": (4, 15),
    "verify bounds": (4, 1 << 16),
}


@dataclass
class RunConfig:
    command: str
    n: Optional[int] = None
    otypes: Optional[Path] = None
    planar_code: Optional[Path] = None
    threads: int = 1
    out: Path = Path(".")
    resume: bool = False
    endian: str = "le"
    max_families: Optional[int] = None
    seed: Optional[int] = None
    no_timestamps: bool = False
    count_only: bool = False
    index: int = 0
    graph_index: int = 0
    family: Optional[Path] = None

    @property
    def byteorder(self) -> str:
        return "little" if self.endian == "le" else "big"


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _require_n(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise DomainError(f"{cfg.command} needs --n")
    lo, hi = N_RANGE.get(cfg.command, (1, 1 << 16))
    if not lo <= cfg.n <= hi:
        raise DomainError(f"{cfg.command} supports {lo} <= n <= {hi}, got {cfg.n}")
    return cfg.n


def _require_file(path: Optional[Path]) -> Path:
    if path is None or not Path(path).is_file():
        raise FileNotFoundError(f"no such file: {path}")
    return Path(path)


def _point_sets(cfg: RunConfig, n: Optional[int]) -> list[PointSet]:
    if cfg.otypes is not None:
        return read_otypes_path(_require_file(cfg.otypes), n, cfg.byteorder)
    if n is None:
        raise DomainError("give --n or --otypes")
    return load_order_types(n)


def _graphs(cfg: RunConfig, n: int) -> list[Triangulation]:
    if cfg.planar_code is not None:
        graphs = parse_planar_code(_require_file(cfg.planar_code).read_bytes())
        bad = [i for i, G in enumerate(graphs) if G.n != n]
        if bad:
            raise DomainError(f"graph {bad[0]} has {graphs[bad[0]].n} vertices, expected {n}")
        return graphs
    return gen_triangulations(n)


def _pick(items: Sequence, i: int, what: str):
    if not 0 <= i < len(items):
        raise DomainError(f"{what} index {i} out of range 0..{len(items) - 1}")
    return items[i]


# -- subcommands ----------------------------------------------------------------


def cmd_gen_3trees(cfg: RunConfig) -> int:
    n = _require_n(cfg)
    if cfg.count_only:
        count = sum(1 for _ in gen_T_family(n))
        print(count)
        return EXIT_OK if count == count_T_family(n) else EXIT_FAILED
    path = cfg.out / f"T_{n}.planarcode"
    members = list(gen_T_family(n))
    path.write_bytes(write_planar_code(T.to_triangulation() for T in members))
    _emit({"n": n, "count": len(members), "file": str(path)})
    return EXIT_OK


def cmd_gen_triangulations(cfg: RunConfig) -> int:
    n = _require_n(cfg)
    graphs = gen_triangulations(n)
    path = cfg.out / f"triangulations_{n}.planarcode"
    path.write_bytes(write_planar_code(graphs))
    _emit({"n": n, "count": len(graphs), "file": str(path)})
    return EXIT_OK


def cmd_gen_otypes(cfg: RunConfig) -> int:
    n = _require_n(cfg)
    levels = generate_order_types(n, seed=1 if cfg.seed is None else cfg.seed)
    paths = write_database(levels, cfg.out)
    _emit({"counts": {str(k): len(v) for k, v in sorted(levels.items())}, "files": [str(p) for p in paths]})
    return EXIT_OK


def cmd_parse_otypes(cfg: RunConfig) -> int:
    sets = read_otypes_path(_require_file(cfg.otypes), cfg.n, cfg.byteorder)
    keys = {canonical_key(P) for P in sets}
    _emit(
        {
            "file": str(cfg.otypes),
            "n": sets[0].n if sets else cfg.n,
            "records": len(sets),
            "classes": len(keys),
            "triangular_hull": sum(1 for P in sets if has_triangular_hull(P)),
        }
    )
    return EXIT_OK


def cmd_embed(cfg: RunConfig) -> int:
    sets = _point_sets(cfg, cfg.n)
    P = _pick(sets, cfg.index, "point set")
    graphs = _graphs(cfg, P.n)
    results = [embeds_on(G, P) for G in graphs]
    _emit({"point_set": P.to_json(), "assignments": results})
    return EXIT_OK


def cmd_check_universal(cfg: RunConfig) -> int:
    sets = _point_sets(cfg, cfg.n)
    P = _pick(sets, cfg.index, "point set")
    graphs = _graphs(cfg, P.n)
    ok, bad = analysis.check_universal(P, graphs)
    _emit(
        {
            "key": canonical_key(P).hex(),
            "universal": ok,
            "witness": None if ok else graphs.index(bad),
            "witness_rotation": None if ok else bad.rotation,
        }
    )
    return EXIT_OK


def cmd_survey(cfg: RunConfig) -> int:
    n = _require_n(cfg)
    source = None if n <= 3 else _point_sets(cfg, n)
    graphs = None if n <= 3 or cfg.planar_code is None else _graphs(cfg, n)
    cfg.out.mkdir(parents=True, exist_ok=True)
    jsonl = cfg.out / f"survey_{n}.jsonl"
    done: dict[str, analysis.ClassRecord] = {}
    if cfg.resume and jsonl.exists():
        for line in jsonl.read_text().splitlines():
            if line.strip():
                rec = analysis.ClassRecord.from_json(json.loads(line))
                done[rec.key] = rec
    elif jsonl.exists():
        jsonl.unlink()
    with jsonl.open("a") as stream:

        def on_record(rec: analysis.ClassRecord) -> None:
            stream.write(json.dumps(rec.to_json(), sort_keys=True) + "\n")
            stream.flush()

        report = analysis.survey_universal(n, source, graphs, done, on_record, threads=cfg.threads)
    # rewrite in canonical order so resumed and uninterrupted runs agree byte for byte
    jsonl.write_text("".join(json.dumps(r.to_json(), sort_keys=True) + "\n" for r in report.records))
    _write_summary(cfg.out / "survey_summary.csv", n, report)
    _emit(
        {
            "n": n,
            "universal_count": report.universal_count,
            "universal_count_unreflected": report.universal_count_unreflected,
            "total_classes": report.total,
            "warnings": report.warnings,
        }
    )
    return EXIT_FAILED if report.warnings else EXIT_OK


def _write_summary(path: Path, n: int, report: analysis.SurveyReport) -> None:
    rows = {}
    if path.exists():
        with path.open(newline="") as f:
            for row in csv.DictReader(f):
                rows[int(row["n"])] = row
    rows[n] = {"n": n, "universal_count": report.universal_count, "total_classes": report.total}
    with path.open("w", newline="") as f:
        w = csv.DictWriter(f, ["n", "universal_count", "total_classes"], lineterminator="\n")
        w.writeheader()
        for k in sorted(rows):
            w.writerow(rows[k])


def cmd_verify_bounds(cfg: RunConfig) -> int:
    ns = [_require_n(cfg)] if cfg.n is not None else list(range(4, 65))
    rows = []
    for n in ns:
        f, g, possible = analysis.main_theorem_inequality(n)
        num, den = analysis.embeddable_T_bound_exact(n)
        rows.append({"n": n, "f": f, "g": g, "universal_possible": possible, "embeddable_bound": [num, den]})
    _emit({"bounds": rows})
    return EXIT_OK


def cmd_verify_lemma6(cfg: RunConfig) -> int:
    universe = _point_sets(cfg, 5) if cfg.otypes else None
    ok, masks = analysis.verify_lemma6(universe)
    _emit({"holds": ok, "masks": masks})
    return EXIT_OK if ok else EXIT_FAILED


def cmd_search_lemma7(cfg: RunConfig) -> int:
    universe = _point_sets(cfg, 8)
    fams = obstruction.search_obstruction_families(universe, cfg.max_families, cfg.seed)
    cfg.out.mkdir(parents=True, exist_ok=True)
    reports = []
    all_ok = bool(fams)
    for k, fam in enumerate(fams):
        ok, worst = obstruction.reverify_family(fam, universe)
        all_ok &= ok
        (cfg.out / f"family_{k}.planarcode").write_bytes(fam.to_planar_code())
        (cfg.out / f"family_{k}.json").write_text(json.dumps(fam.to_json(), sort_keys=True) + "\n")
        reports.append({"index": k, "reverified": ok, "max_simultaneous": worst})
    _emit({"families": len(fams), "reports": reports})
    return EXIT_OK if all_ok else EXIT_FAILED


def cmd_count_family(cfg: RunConfig) -> int:
    if cfg.family is not None:
        fam = obstruction.ObstructionFamily.from_json(json.loads(_require_file(cfg.family).read_text()))
    else:
        fam = obstruction.cached_family()
    bins, per_bin, bound = analysis.verify_bin_bound()
    count = obstruction.count_family_classes(fam)
    _emit({"classes": count, "bins": bins, "per_bin": per_bin, "bound": bound, "exceeds_bound": count > bound})
    return EXIT_OK if count > bound else EXIT_FAILED


def cmd_count_unlabeled(cfg: RunConfig) -> int:
    n = _require_n(cfg)
    _emit({"n": n, "count": analysis.count_unlabeled_3trees(n)})
    return EXIT_OK


def cmd_render(cfg: RunConfig) -> int:
    sets = _point_sets(cfg, cfg.n)
    P = _pick(sets, cfg.index, "point set")
    edges: list[tuple[int, int]] = []
    if cfg.planar_code is not None or P.n >= 4:
        G = _pick(_graphs(cfg, P.n), cfg.graph_index, "graph")
        phi = embeds_on(G, P)
        if phi is not None:
            edges = [(phi[u], phi[v]) for u, v in G.edges]
    cfg.out.mkdir(parents=True, exist_ok=True)
    path = cfg.out / f"drawing_{P.n}_{cfg.index}_{cfg.graph_index}.svg"
    path.write_text(render_svg(P, edges, timestamp=not cfg.no_timestamps))
    _emit({"file": str(path), "embedded": bool(edges)})
    return EXIT_OK


def render_svg(P: PointSet, edges: Sequence[tuple[int, int]], size: int = 400, timestamp: bool = True) -> str:
    """Points and segments scaled into a fixed square viewport."""
    xs = [p.x for p in P]
    ys = [p.y for p in P]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    pad = 20
    scale = (size - 2 * pad) / span

    def at(i: int) -> tuple[float, float]:
        # svg y grows downwards
        return pad + (P[i].x - min(xs)) * scale, size - pad - (P[i].y - min(ys)) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    if timestamp:
        out.append(f"<metadata>{datetime.now(timezone.utc).isoformat()}</metadata>")
    for u, v in edges:
        (x1, y1), (x2, y2) = at(u), at(v)
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" stroke="black"/>')
    for i in range(P.n):
        x, y = at(i)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="crimson"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


COMMANDS = {
    "gen-3trees": cmd_gen_3trees,
    "gen-triangulations": cmd_gen_triangulations,
    "gen-otypes": cmd_gen_otypes,
    "parse-otypes": cmd_parse_otypes,
    "embed": cmd_embed,
    "check-universal": cmd_check_universal,
    "survey": cmd_survey,
    "verify bounds": cmd_verify_bounds,
    "verify lemma6": cmd_verify_lemma6,
    "search lemma7": cmd_search_lemma7,
    "count family": cmd_count_family,
    "count unlabeled-3trees": cmd_count_unlabeled,
    "render": cmd_render,
}


def run(cfg: RunConfig) -> int:
    """Execute one subcommand; errors become a diagnostic and an exit code."""
    try:
        return COMMANDS[cfg.command](cfg)
    except tuple(EXIT_CODES) as exc:
        code = next(c for t, c in EXIT_CODES.items() if isinstance(exc, t))
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return code


# -- argument parsing ----------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int)
    p.add_argument("--otypes", type=Path, help="order type database file")
    p.add_argument("--planar-code", type=Path, help="graphs in planar_code format")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("."))
    p.add_argument("--resume", action="store_true")
    p.add_argument("--endian", choices=("le", "be"), default="le")
    p.add_argument("--max-families", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--no-timestamps", action="store_true")
    p.add_argument("--index", type=int, default=0, help="point set index within the database")
    p.add_argument("--graph-index", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unipoint", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("gen-triangulations", "gen-otypes", "parse-otypes", "embed", "check-universal", "survey", "render"):
        _common(sub.add_parser(name))
    p = sub.add_parser("gen-3trees")
    _common(p)
    p.add_argument("--count-only", action="store_true")
    for group, names in (("verify", ("bounds", "lemma6")), ("search", ("lemma7",)), ("count", ("family", "unlabeled-3trees"))):
        gp = sub.add_parser(group)
        gsub = gp.add_subparsers(dest="what", required=True)
        for name in names:
            p = gsub.add_parser(name)
            _common(p)
            if name == "family":
                p.add_argument("--family", type=Path, help="family JSON (default: the bundled one)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    command = args.command if getattr(args, "what", None) is None else f"{args.command} {args.what}"
    return RunConfig(
        command=command,
        n=args.n,
        otypes=args.otypes,
        planar_code=args.planar_code,
        threads=args.threads,
        out=args.out,
        resume=args.resume,
        endian=args.endian,
        max_families=args.max_families,
        seed=args.seed,
        no_timestamps=args.no_timestamps,
        count_only=getattr(args, "count_only", False),
        index=args.index,
        graph_index=args.graph_index,
        family=getattr(args, "family", None),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
