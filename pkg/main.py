"""
Ponto de entrada da linha de comando
Regenera os dados das curvas e verifica numericamente as propriedades focais
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from config import settings
from eph_scenarios import (
    DEFAULT_TABLES, arrow_curves, evaluate_checks, future_past_frames, generate_arrows,
    generate_orbits, generate_transverses, render_check_text, render_vector_fields,
)
from errors import CliffordError
from models import (
    EmitConfig, MetricKind, MoebiusVariant, PlanePoint, RunReport, ScenarioBatch, Subgroup, TuningTables,
)
from plot_emit import curve_file_stem, emit_curves, frame_file_stem

logger = logging.getLogger(__name__)

MODES = ("orbits", "transverses", "arrows", "future-past", "checks")

# Radicais dos arquivos por variante
ORBIT_STEMS = {
    MoebiusVariant.DIRECT: "orbit",
    MoebiusVariant.CAYLEY_POINT: "cayley",
    MoebiusVariant.CAYLEY1_POINT: "cayl-a",
}

EXIT_OK = 0
EXIT_IO_ERROR = 1
EXIT_USAGE = 2
EXIT_CHECK_FAILED = 3
EXIT_INTERNAL_ERROR = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="main.py",
        description=f"{settings.APP_NAME} {settings.APP_VERSION}: órbitas de SL(2,R) nas geometrias EPH",
    )
    parser.add_argument("--metric", choices=["e", "p", "h", "all"], default="all",
                        help="Geometria: elíptica, parabólica, hiperbólica ou todas")
    parser.add_argument("--subgroup", choices=["A", "N", "K", "all"], default="all",
                        help="Subgrupo a um parâmetro")
    parser.add_argument("--mode", choices=list(MODES) + ["all"], default="all",
                        help="Conjunto de dados a gerar")
    parser.add_argument("--out-dir", default=settings.OUTPUT_DIR, help="Diretório de saída")
    parser.add_argument("--format", choices=["csv", "svg", "both"], default="both",
                        help="Formato dos arquivos")
    parser.add_argument("--verbose", action="store_true", help="Log detalhado e relatório JSON")
    return parser


def _log_level(name: str) -> int:
    """Nível de log pelo nome; nomes desconhecidos caem em INFO"""
    level = logging.getLevelName(name.upper())
    if not isinstance(level, int):
        logger.warning(f"LOG_LEVEL inválido: {name!r}; usando INFO")
        return logging.INFO
    return level


def _emit_batch(batch: ScenarioBatch, suffix: str, cfg: EmitConfig, report: RunReport) -> None:
    key = f"{batch.subgroup.value}-{batch.kind.value}"
    for variant, stem in ORBIT_STEMS.items():
        name = curve_file_stem(stem + suffix, batch.subgroup, batch.kind)
        for path in emit_curves(batch.curves[variant], name, cfg):
            report.add_file(key, path)


def run(kinds: Sequence[MetricKind], subgroups: Sequence[Subgroup], modes: Sequence[str],
        cfg: EmitConfig, tables: TuningTables = DEFAULT_TABLES) -> RunReport:
    """
    Executa os modos pedidos para cada (métrico, subgrupo)
    As órbitas são calculadas uma única vez e servem também às verificações
    """
    report = RunReport()
    orbit_batches: List[ScenarioBatch] = []
    field_texts: List[str] = []
    for kind in kinds:
        logger.info(f"Métrico: {kind.label}")
        if "checks" in modes:
            u, v = tables.field_point
            field_texts.append(render_vector_fields(kind, PlanePoint(u=u, v=v)))
        for s in subgroups:
            key = f"{s.value}-{kind.value}"
            if "arrows" in modes:
                grid = generate_arrows(s, kind, tables)
                report.singular_nodes += grid.singular_points
                for path in emit_curves(arrow_curves(grid), curve_file_stem("arrows", s, kind), cfg):
                    report.add_file(key, path)
            if "orbits" in modes or "checks" in modes:
                batch = generate_orbits(s, kind, tables)
                orbit_batches.append(batch)
                report.singular_nodes += batch.singular_nodes
                report.segment_breaks += batch.segment_breaks
                report.focal_checks.extend(batch.focal_reports)
                report.parabola_checks.extend(batch.parabola_checks)
                if "orbits" in modes:
                    _emit_batch(batch, "", cfg, report)
            if "transverses" in modes:
                batch = generate_transverses(s, kind, tables)
                report.singular_nodes += batch.singular_nodes
                report.segment_breaks += batch.segment_breaks
                _emit_batch(batch, "-t", cfg, report)
    if "future-past" in modes:
        logger.info("Gerando os quadros da transição futuro-passado")
        for j, curves in enumerate(future_past_frames(tables)):
            report.segment_breaks += sum(c.breaks for c in curves)
            for path in emit_curves(curves, frame_file_stem(j), cfg):
                report.add_file("future-past", path)
    report.failed_checks = evaluate_checks(orbit_batches)
    report.check_text = "\n".join(t for t in field_texts + [render_check_text(orbit_batches)] if t)
    return report


def _print_report(report: RunReport, verbose: bool) -> None:
    if report.check_text:
        print(report.check_text)
    print(f"Arquivos gerados: {len(report.all_files())}")
    print(f"Verificações focais: {len(report.focal_checks)}; parábolas: {len(report.parabola_checks)}")
    print(f"Nós singulares: {report.singular_nodes}; quebras de segmento: {report.segment_breaks}")
    for failure in report.failed_checks:
        print(f"FALHOU: {failure}")
    if verbose:
        print(report.model_dump_json(indent=2))


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """Executa a linha de comando e devolve o código de saída"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else _log_level(settings.LOG_LEVEL),
        format="%(levelname)s:%(name)s:%(message)s",
        force=True,
    )

    kinds = list(MetricKind) if args.metric == "all" else [MetricKind(args.metric)]
    subgroups = list(Subgroup) if args.subgroup == "all" else [Subgroup(args.subgroup)]
    modes = MODES if args.mode == "all" else (args.mode,)
    formats = ["csv", "svg"] if args.format == "both" else [args.format]
    cfg = EmitConfig.from_tables(DEFAULT_TABLES, out_dir=Path(args.out_dir), formats=formats)

    try:
        report = run(kinds, subgroups, modes, cfg)
    except OSError as e:
        logger.error(f"Erro de E/S: {e}")
        return EXIT_IO_ERROR
    except (CliffordError, ValueError, ArithmeticError) as e:
        logger.exception(f"Erro interno na geração: {e}")
        return EXIT_INTERNAL_ERROR

    _print_report(report, args.verbose)
    if not report.passed:
        logger.warning(f"{len(report.failed_checks)} verificações falharam")
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(cli_main())
