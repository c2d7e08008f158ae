"""
Emissão das curvas em CSV (formato canônico) e SVG (visualização)
"""

import csv
import logging
from pathlib import Path
from typing import Iterable, List, Sequence

from models import Curve, EmitConfig, MetricKind, MoebiusVariant, PlanePoint, Subgroup

logger = logging.getLogger(__name__)

CSV_HEADER = ["curve_id", "segment_id", "u", "v", "color_grade", "subgroup", "metric", "variant"]


def _fmt(x: float, precision: int) -> str:
    text = f"{x:.{precision}f}"
    # evita "-0.000" no arquivo
    if text.startswith("-") and float(text) == 0:
        text = text[1:]
    return text


def curve_file_stem(stem: str, subgroup: Subgroup, kind: MetricKind) -> str:
    """Nome no modelo <stem>-<subgrupo>-<métrico>, ex. orbit-K-e"""
    return f"{stem}-{subgroup.value}-{kind.value}"


def frame_file_stem(frame: int) -> str:
    return f"future-past-{frame:02d}"


def write_csv(curves: Iterable[Curve], path: Path, cfg: EmitConfig) -> None:
    """
    Uma linha por ponto, em ordem de geração
    segment_id recomeça em 0 para cada curva e cresce a cada quebra
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for curve in curves:
            grade = _fmt(curve.color_grade, cfg.precision)
            for segment_id, segment in enumerate(curve.drawable_segments()):
                for p in segment:
                    writer.writerow([
                        curve.curve_id, segment_id,
                        _fmt(p.u, cfg.precision), _fmt(p.v, cfg.precision), grade,
                        curve.subgroup.value, curve.kind.value, curve.variant.label,
                    ])
    logger.info(f"Arquivo gravado: {path}")


def read_csv(path: Path) -> List[Curve]:
    """Reconstrói as curvas de um CSV emitido por write_csv"""
    curves: List[Curve] = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"Cabeçalho inesperado em {path}: {reader.fieldnames}")
        current = None
        segment_id = None
        for row in reader:
            curve_id = int(row["curve_id"])
            if current is None or current.curve_id != curve_id:
                current = Curve(
                    curve_id=curve_id,
                    subgroup=Subgroup(row["subgroup"]),
                    kind=MetricKind(row["metric"]),
                    variant=MoebiusVariant[row["variant"].upper()],
                    color_grade=float(row["color_grade"]),
                )
                curves.append(current)
                segment_id = int(row["segment_id"])
            elif int(row["segment_id"]) != segment_id:
                current.break_segment()
                segment_id = int(row["segment_id"])
            current.add_point(PlanePoint(u=float(row["u"]), v=float(row["v"])))
    return curves


def grey_level(color_grade: float) -> float:
    """Tom de cinza: 0 mais escuro, 1.2 mais claro, 0.6 o cinza das setas"""
    grade = min(max(color_grade, 0.0), 1.2)
    return 0.6 + (grade - 0.6) * 0.5


def _rgb(color_grade: float) -> str:
    level = int(round(255 * grey_level(color_grade)))
    return f"rgb({level},{level},{level})"


def write_svg(curves: Iterable[Curve], path: Path, cfg: EmitConfig) -> None:
    """
    Uma polyline por segmento, eixo v para cima, recortado ao viewport
    Setas ganham marcador de ponta
    """
    umin, umax, vmin, vmax = cfg.viewport
    scale = cfg.svg_scale
    width, height = (umax - umin) * scale, (vmax - vmin) * scale

    def to_svg(p: PlanePoint) -> str:
        return f"{(p.u - umin) * scale:.3f},{(vmax - p.v) * scale:.3f}"

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.0f}" height="{height:.0f}" viewBox="0 0 {width:.3f} {height:.3f}">',
        "<defs>",
        f'<clipPath id="viewport"><rect x="0" y="0" width="{width:.3f}" height="{height:.3f}"/></clipPath>',
        '<marker id="arrowhead" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto">'
        f'<path d="M0,0 L6,3 L0,6 z" fill="{_rgb(0.6)}"/></marker>',
        "</defs>",
        '<g clip-path="url(#viewport)" fill="none" stroke-width="1">',
    ]
    for curve in curves:
        marker = ' marker-end="url(#arrowhead)"' if curve.arrow else ""
        for segment in curve.drawable_segments():
            points = " ".join(to_svg(p) for p in segment)
            parts.append(f'<polyline points="{points}" stroke="{_rgb(curve.color_grade)}"{marker}/>')
    parts.append("</g>")
    parts.append("</svg>")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as f:
        f.write("\n".join(parts) + "\n")
    logger.info(f"Arquivo gravado: {path}")


def emit_curves(curves: Sequence[Curve], stem: str, cfg: EmitConfig) -> List[Path]:
    """Grava as curvas em cada formato pedido; stem é o nome sem extensão"""
    written = []
    for fmt in cfg.formats:
        path = cfg.out_dir / f"{stem}.{fmt}"
        if fmt == "csv":
            write_csv(curves, path, cfg)
        else:
            write_svg(curves, path, cfg)
        written.append(path)
    return written
