"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import report
from .corpus import (Corpus, IngestReport, ParseError, SynthParams, dump_impact_factors,
                     gen_synthetic_corpus, gen_synthetic_impact_factors, load_corpus,
                     load_impact_factors)
from .credit import credit_vector
from .indices import AJ_YEAR_MIN, InstitutionIndices, compute_all
from .ranking import RankingError, correlation_report, load_external_ranking, rank_by

log = logging.getLogger("axirank")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    corpus_path: Optional[Path] = None
    jif_path: Optional[Path] = None
    external_rankings: List[Tuple[str, Path]] = field(default_factory=list)
    output_dir: Optional[Path] = None
    format: str = "csv"
    strict: bool = False
    seed: Optional[int] = None
    year_min_aj: int = AJ_YEAR_MIN

    def validate(self) -> None:
        if self.year_min_aj < 1000:
            raise UsageError("--year-min-aj must be >= 1000")
        paths = [("--corpus", self.corpus_path), ("--jif", self.jif_path)]
        paths += [(f"--external {label}", p) for label, p in self.external_rankings]
        for flag, path in paths:
            if path is not None and not path.is_file():
                raise UsageError(f"{flag}: cannot read {path}")


def _external(spec: str) -> Tuple[str, Path]:
    label, sep, path = spec.partition("=")
    if not sep or not label or not path:
        raise argparse.ArgumentTypeError(f"expected LABEL=PATH, got {spec!r}")
    return label, Path(path)


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        corpus_path=getattr(args, "corpus", None),
        jif_path=getattr(args, "jif", None),
        external_rankings=list(getattr(args, "external", None) or []),
        output_dir=getattr(args, "out", None),
        format=getattr(args, "format", "csv"),
        strict=getattr(args, "strict", False),
        seed=getattr(args, "seed", None),
        year_min_aj=getattr(args, "year_min_aj", AJ_YEAR_MIN),
    )
    cfg.validate()
    return cfg


# -- shared steps -------------------------------------------------------------

def _log_ingest(rep: IngestReport) -> None:
    log.info("ingest: accepted=%d dropped=%d dangling_references=%d",
             rep.accepted, len(rep.dropped), rep.dangling_references)
    for line_number, reason in rep.dropped:
        log.warning("dropped line %d: %s", line_number, reason)


def _ingest(cfg: RunConfig, report_path: Optional[Path] = None) -> Tuple[Corpus, IngestReport]:
    jif = None
    if cfg.jif_path is not None:
        try:
            with open(cfg.jif_path, encoding="utf-8", newline="") as fh:
                jif = load_impact_factors(fh)
        except (ValueError, KeyError) as exc:
            raise DataError(f"{cfg.jif_path}: {exc}") from None
    try:
        with open(cfg.corpus_path, encoding="utf-8") as fh:
            corpus, rep = load_corpus(fh, jif, strict=cfg.strict)
    except UnicodeDecodeError as exc:
        raise DataError(f"{cfg.corpus_path}: not UTF-8 ({exc.reason})") from None
    _log_ingest(rep)
    if report_path is not None:
        report.write_text(report_path, json.dumps(rep.to_dict(), indent=2) + "\n")
    return corpus, rep


def _require_clean(cfg: RunConfig, rep: IngestReport) -> None:
    if rep.dropped and cfg.strict:
        raise DataError(f"{len(rep.dropped)} record(s) dropped in strict mode")
    if rep.dropped:
        log.warning("%d record(s) dropped; continuing (lenient mode)", len(rep.dropped))


def _ext(fmt: str) -> str:
    return "json" if fmt == "json" else "csv"


# -- commands -----------------------------------------------------------------

def cmd_validate(cfg: RunConfig, report_path: Optional[Path] = None) -> int:
    if cfg.corpus_path is None:
        raise UsageError("--corpus is required")
    _, rep = _ingest(cfg, report_path)
    print(f"accepted {rep.accepted}  dropped {len(rep.dropped)}  dangling {rep.dangling_references}")
    _require_clean(cfg, rep)
    return EXIT_OK


def _compute(cfg: RunConfig, report_path: Optional[Path] = None) -> Tuple[Corpus, Dict[str, InstitutionIndices]]:
    if cfg.corpus_path is None:
        raise UsageError("--corpus is required")
    corpus, rep = _ingest(cfg, report_path)
    _require_clean(cfg, rep)
    return corpus, compute_all(corpus, cfg.year_min_aj)


def cmd_compute(cfg: RunConfig, report_path: Optional[Path] = None) -> int:
    if cfg.output_dir is None:
        raise UsageError("--out is required")
    _, results = _compute(cfg, report_path)
    ext = _ext(cfg.format)
    tables = {name: rank_by(report.index_values(results, name), name) for name in report.INDEX_NAMES}
    order = [e.institution_id for e in tables["ac"].entries]
    report.write_text(cfg.output_dir / f"indices.{ext}", report.indices_text(results, order, cfg.format))
    for name, table in tables.items():
        report.write_text(cfg.output_dir / f"ranking_{name}.{ext}", report.ranking_text(table, cfg.format))
    print(f"{len(results)} institution(s) written to {cfg.output_dir}")
    return EXIT_OK


def cmd_rank(cfg: RunConfig, index: str, top: int) -> int:
    _, results = _compute(cfg)
    table = rank_by(report.index_values(results, index), index)
    text = report.ranking_text(table, "csv")
    lines = text.splitlines()
    print("\n".join(lines[: top + 1] if top > 0 else lines))
    if cfg.output_dir is not None:
        ext = _ext(cfg.format)
        report.write_text(cfg.output_dir / f"ranking_{index}.{ext}", report.ranking_text(table, cfg.format))
    return EXIT_OK


def cmd_compare(cfg: RunConfig, indices: Sequence[str]) -> int:
    sources: List[Tuple[str, Dict[str, float]]] = []
    if cfg.corpus_path is not None:
        _, results = _compute(cfg)
        for name in indices:
            sources.append((name, rank_by(report.index_values(results, name), name).ranks()))
    for label, path in cfg.external_rankings:
        try:
            with open(path, encoding="utf-8", newline="") as fh:
                sources.append((label, dict(load_external_ranking(fh, label).ranks)))
        except (ValueError, KeyError) as exc:
            raise DataError(f"{path}: {exc}") from None
    if len(sources) < 2:
        raise UsageError("compare needs at least 2 ranking sources (indices and/or --external)")
    try:
        rep = correlation_report(sources)
    except RankingError as exc:
        raise DataError(str(exc)) from None
    texts = report.correlation_texts(rep, "csv")
    print(texts["spearman.csv"] + texts["kendall.csv"], end="")
    if cfg.output_dir is not None:
        for name, text in report.correlation_texts(rep, cfg.format).items():
            report.write_text(cfg.output_dir / name, text)
    return EXIT_OK


def cmd_synth(cfg: RunConfig, params: SynthParams) -> int:
    if cfg.seed is None:
        raise UsageError("--seed is required")
    if cfg.output_dir is None:
        raise UsageError("--out is required")
    try:
        lines = gen_synthetic_corpus(params, cfg.seed)
        jif = gen_synthetic_impact_factors(params, cfg.seed)
    except ValueError as exc:
        raise UsageError(f"infeasible generator parameters: {exc}") from None
    report.write_text(cfg.output_dir / "corpus.jsonl", "".join(line + "\n" for line in lines))
    report.write_text(cfg.output_dir / "jif.csv", dump_impact_factors(jif))
    print(f"{len(lines)} paper(s) written to {cfg.output_dir / 'corpus.jsonl'}")
    return EXIT_OK


def cmd_explain(cfg: RunConfig, paper_id: str) -> int:
    if cfg.corpus_path is None:
        raise UsageError("--corpus is required")
    corpus, rep = _ingest(cfg)
    _require_clean(cfg, rep)
    paper = corpus.papers.get(paper_id)
    if paper is None:
        raise DataError(f"paper {paper_id!r} not in corpus")
    vec = credit_vector(paper)
    print(f"{paper_id}  n={paper.n_authors}  mode={vec.mode.value}")
    for slot, share in zip(paper.authors, vec.shares):
        print(f"{slot.position:>4}  {slot.author_id}  {slot.institution_id or '-'}  {share:.6f}")
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------

def _refs_range(text: str) -> Tuple[int, int]:
    lo, _, hi = text.partition(",")
    try:
        return int(lo), int(hi or lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--strict", action="store_true",
                        help="reject unknown fields and fail on any dropped record")
    common.add_argument("-v", "--verbose", action="store_true")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--corpus", type=Path)
    data.add_argument("--jif", type=Path)
    data.add_argument("--year-min-aj", type=int, default=AJ_YEAR_MIN)
    data.add_argument("--report", type=Path, help="write the ingest report as JSON")

    parser = _Parser(prog="axirank", description="Axiomatic citation indices and institutional rankings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common, data], help="check a corpus file")

    p = sub.add_parser("compute", parents=[common, data], help="write indices and ranking tables")
    p.add_argument("--out", type=Path)
    p.add_argument("--explain", metavar="PAPER_ID", help="print one paper's credit vector instead")

    p = sub.add_parser("rank", parents=[common, data], help="rank institutions by one index")
    p.add_argument("--index", choices=report.INDEX_NAMES, default="ac")
    p.add_argument("--top", type=int, default=0, help="print only the first N rows")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("compare", parents=[common, data], help="rank correlations between rankings")
    p.add_argument("--indices", default=",".join(report.INDEX_NAMES),
                   help="comma-separated internal indices to include when --corpus is given")
    p.add_argument("--external", type=_external, action="append", metavar="LABEL=PATH")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic corpus")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path)
    defaults = SynthParams()
    p.add_argument("--n-papers", type=int, default=defaults.n_papers)
    p.add_argument("--n-authors", type=int, default=defaults.n_authors)
    p.add_argument("--n-institutions", type=int, default=defaults.n_institutions)
    p.add_argument("--mean-team-size", type=float, default=defaults.mean_team_size)
    p.add_argument("--self-cite-rate", type=float, default=defaults.self_cite_rate)
    p.add_argument("--refs", type=_refs_range, default=defaults.reference_count_range, metavar="LO,HI")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = _config(args)
        report_path = getattr(args, "report", None)
        if args.command == "validate":
            return cmd_validate(cfg, report_path)
        if args.command == "compute":
            if args.explain:
                return cmd_explain(cfg, args.explain)
            return cmd_compute(cfg, report_path)
        if args.command == "rank":
            return cmd_rank(cfg, args.index, args.top)
        if args.command == "compare":
            names = [n.strip() for n in args.indices.split(",") if n.strip()]
            unknown = set(names) - set(report.INDEX_NAMES)
            if unknown:
                raise UsageError(f"unknown index name(s): {', '.join(sorted(unknown))}")
            return cmd_compare(cfg, names)
        params = SynthParams(n_papers=args.n_papers, n_authors=args.n_authors,
                             n_institutions=args.n_institutions, mean_team_size=args.mean_team_size,
                             self_cite_rate=args.self_cite_rate, reference_count_range=args.refs)
        return cmd_synth(cfg, params)
    except UsageError as exc:
        print(f"axirank: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ParseError) as exc:
        print(f"axirank: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"axirank: I/O error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
