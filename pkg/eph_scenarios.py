"""
Programa numérico das geometrias EPH
Setas dos campos vetoriais, órbitas e transversais dos subgrupos A, N, K,
imagens de Cayley, ajuste de parábolas, verificação das propriedades focais
e os quadros da transição futuro-passado
"""

import logging
import math
from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import settings
from errors import CliffordError, DegenerateAbscissaeError, IndexOutOfRangeError
from models import (
    ArrowGrid, Curve, FocalCheckReport, MetricKind, MoebiusVariant, NodeParams,
    ParabolaCheck, ParabolaFit, PlanePoint, ScenarioBatch, Subgroup, TuningTables,
)
from moebius import (
    matrix_from_entries, moebius_family, moebius_map, plane_metric, vector_field, vector_field_table,
)
from algebra_core import scale, unit

logger = logging.getLogger(__name__)

DEFAULT_TABLES = TuningTables()

# Variantes de pontos desenhadas em cada nó: direta, Cayley e Cayley alternativa
POINT_VARIANTS = (MoebiusVariant.DIRECT, MoebiusVariant.CAYLEY_POINT, MoebiusVariant.CAYLEY1_POINT)
CAYLEY_VARIANTS = (MoebiusVariant.CAYLEY_POINT, MoebiusVariant.CAYLEY1_POINT)

FOCAL_FORMULA = {
    MetricKind.ELLIPTIC: "Distance to center is:",
    MetricKind.PARABOLIC: "Directrice is:",
    MetricKind.HYPERBOLIC: "Difference to foci is:",
}


def node_params(s: Subgroup, kind: MetricKind, vi: int, f: float,
                tables: TuningTables = DEFAULT_TABLES) -> NodeParams:
    """Substituições (t, x, y) de um nó da órbita vi no parâmetro f"""
    limit = tables.vilimit(s, kind)
    if not 0 <= vi < limit:
        raise IndexOutOfRangeError(f"Órbita {vi} fora de [0, {limit})", {"vi": vi})
    row = tables.vpoints[kind.index]
    if s == Subgroup.A:
        vval = 1.0 * vi / (limit - 1)
        if kind == MetricKind.HYPERBOLIC:
            # conjunto duplo para alcançar também os negativos
            vval *= 2
        return NodeParams(t=f, x=math.cos(math.pi * vval), y=math.sin(math.pi * vval), vval=vval)
    if s == Subgroup.N:
        if kind == MetricKind.HYPERBOLIC:
            offset = vi - limit // 2
            vval = (-1 if offset < 0 else 1) * row[abs(offset)]
        else:
            vval = row[vi]
        return NodeParams(t=f, x=0.0, y=vval, vval=vval)
    vval = row[vi]
    return NodeParams(t=f * math.pi, x=0.0, y=vval, vval=vval)


def in_limits(p: PlanePoint, kind: MetricKind, cayley: bool, inversion: bool,
              tables: TuningTables = DEFAULT_TABLES) -> bool:
    """
    Verifica se o ponto ainda está na área limitada
    No caso hiperbólico restringe ao semiplano superior ou ao disco unitário
    """
    if abs(p.u) > tables.ulim or abs(p.v) > tables.vlim:
        return False
    if kind != MetricKind.HYPERBOLIC or inversion:
        return True
    if not cayley:
        return p.v >= 0
    return not (-p.u ** 2 + p.v ** 2 - 1.001 > 0)


def _place_node(curve: Curve, s: Subgroup, kind: MetricKind, variant: MoebiusVariant,
                node: NodeParams, tables: TuningTables) -> Optional[PlanePoint]:
    """
    Calcula um nó e acrescenta à curva, ou quebra o segmento
    Devolve o ponto calculado (mesmo fora dos limites) ou None se singular
    """
    try:
        point = moebius_family(s, kind, variant, node.t, PlanePoint(u=node.x, v=node.y))
    except CliffordError as e:
        logger.debug(f"Problema no nó t={node.t:.4f} ({s.value}-{kind.value}, {variant.label}): {e}")
        curve.break_segment()
        return None
    if in_limits(point, kind, variant != MoebiusVariant.DIRECT, False, tables):
        curve.add_point(point)
    else:
        curve.break_segment()
    return point


def generate_arrows(s: Subgroup, kind: MetricKind,
                    tables: TuningTables = DEFAULT_TABLES) -> ArrowGrid:
    """Campo vetorial direto numa grade regular do semiplano superior"""
    grid = ArrowGrid(subgroup=s, kind=kind)
    k_from, k_to = tables.arrow_k_range
    j_from, j_to = tables.arrow_j_range
    for k in range(k_from, k_to):
        for j in range(j_from, j_to):
            base = PlanePoint(u=k * tables.arrow_spacing, v=j * tables.arrow_spacing)
            try:
                offset = vector_field(s, kind, MoebiusVariant.DIRECT, base)
            except CliffordError as e:
                logger.debug(f"Seta omitida em ({base.u:.3f}, {base.v:.3f}): {e}")
                grid.singular_points += 1
                continue
            grid.arrows.append((base, offset))
    if grid.singular_points:
        logger.info(f"Setas {s.value}-{kind.value}: {grid.singular_points} pontos singulares omitidos")
    return grid


def arrow_curves(grid: ArrowGrid) -> List[Curve]:
    """Cada seta vira uma curva de dois pontos, base e ponta"""
    curves = []
    for idx, (base, (du, dv)) in enumerate(grid.arrows):
        curve = Curve(curve_id=idx, subgroup=grid.subgroup, kind=grid.kind,
                      color_grade=settings.ARROW_GREY, arrow=True)
        curve.add_point(base)
        curve.add_point(PlanePoint(u=base.u + du, v=base.v + dv))
        curves.append(curve)
    return curves


def check_focal_K(kind: MetricKind, vval: float, node: PlanePoint) -> float:
    """
    Invariante focal de um nó da órbita K
    Elíptico: distância ao centro; parabólico: distância ao foco menos v;
    hiperbólico: diferença das distâncias aos focos
    """
    u, v = node.u, node.v
    if kind == MetricKind.ELLIPTIC:
        return math.sqrt(u * u + (v - (vval + 1 / vval) / 2) ** 2)
    if kind == MetricKind.PARABOLIC:
        return math.sqrt(u * u + (v - (vval + 1 / vval / 4)) ** 2) - v
    p = (vval * vval + 1) / vval / math.sqrt(2)
    # vval = 1 coloca os focos no mesmo ponto
    half_gap = math.sqrt(max(p * p / 2 - 1, 0.0))
    focal = p - half_gap if vval < 1 else p + half_gap
    return (math.sqrt(u * u + (v - focal) ** 2)
            - math.sqrt(u * u + (v - focal + 2 * p) ** 2))


def expected_focal_value(kind: MetricKind, vval: float) -> float:
    """Constante esperada de check_focal_K (módulo, no caso hiperbólico)"""
    if kind == MetricKind.ELLIPTIC:
        return abs(vval - 1 / vval) / 2
    if kind == MetricKind.PARABOLIC:
        return 1 / (4 * vval) - vval
    return vval + 1 / vval


def pair_deviation(previous: float, current: float) -> float:
    """Desvio entre valores consecutivos: absoluto se pequeno, senão relativo"""
    delta = abs(current - previous)
    if delta < settings.CONSTANCY_TOLERANCE or current == 0:
        return delta
    return min(delta, abs((current - previous) / current))


def is_constant_step(previous: float, current: float) -> bool:
    return pair_deviation(previous, current) < settings.CONSTANCY_TOLERANCE


def focal_report(kind: MetricKind, vi: int, vval: float, values: Sequence[float]) -> FocalCheckReport:
    """Resume os valores focais de uma órbita"""
    expected = expected_focal_value(kind, vval)
    pairs = list(zip(values, values[1:]))
    deviations = [pair_deviation(a, b) for a, b in pairs]
    constant = all(d < settings.CONSTANCY_TOLERANCE for d in deviations)
    constant_magnitude = all(is_constant_step(abs(a), abs(b)) for a, b in pairs)
    sign_changes = sum(1 for a, b in pairs if a * b < 0)
    if kind == MetricKind.HYPERBOLIC:
        close = all(abs(abs(x) - expected) < settings.CHECK_TOLERANCE for x in values)
        passed = constant_magnitude and close
    else:
        close = all(abs(x - expected) < settings.CHECK_TOLERANCE for x in values)
        passed = constant and close
    return FocalCheckReport(
        kind=kind, vi=vi, vval=vval, values=list(values), expected=expected,
        max_deviation=max(deviations, default=0.0), constant=constant,
        constant_magnitude=constant_magnitude, sign_changes=sign_changes, passed=passed,
    )


def fit_parabola(p0: PlanePoint, p1: PlanePoint, p2: PlanePoint) -> ParabolaFit:
    """
    Parábola v = a u^2 + b u + c pelos três pontos
    Sem campos focais quando a = 0
    """
    us = np.array([p0.u, p1.u, p2.u])
    vs = np.array([p0.v, p1.v, p2.v])
    vandermonde = np.vander(us, 3)
    if abs(np.linalg.det(vandermonde)) < settings.EPS_VANDERMONDE:
        raise DegenerateAbscissaeError(f"Abscissas degeneradas: {us.tolist()}")
    a, b, c = (float(x) for x in np.linalg.solve(vandermonde, vs))
    if abs(a) < settings.EPS_VANDERMONDE:
        return ParabolaFit(a=0.0, b=b, c=c)
    focal_u = b / (2 * a)
    return ParabolaFit(a=a, b=b, c=c, focal_l=1 / (4 * a), focal_u=focal_u,
                       focal_v=c - focal_u ** 2)


def check_parabolic_vertices(fit0: Optional[ParabolaFit],
                             fit1: Optional[ParabolaFit]) -> Tuple[Optional[float], Optional[float]]:
    """
    Vértices das duas imagens de Cayley devem estar em v = ±u^2 - 1
    Um ajuste ausente (nó singular ou abscissas degeneradas) fica como None
    """
    return tuple(f.vertex_check() if f is not None else None for f in (fit0, fit1))


def _safe_fit(points: Sequence[PlanePoint]) -> Optional[ParabolaFit]:
    try:
        return fit_parabola(*points)
    except DegenerateAbscissaeError as e:
        logger.warning(f"Parábola não ajustada: {e}")
        return None


def _new_curves(s: Subgroup, kind: MetricKind, curve_id: int, color_grade: float) -> Dict[MoebiusVariant, Curve]:
    return {variant: Curve(curve_id=curve_id, subgroup=s, kind=kind, variant=variant,
                           color_grade=color_grade)
            for variant in POINT_VARIANTS}


def generate_orbits(s: Subgroup, kind: MetricKind,
                    tables: TuningTables = DEFAULT_TABLES) -> ScenarioBatch:
    """
    Órbitas do subgrupo e suas duas imagens de Cayley
    Também verifica propriedades focais (K) e ajusta parábolas (parabólico, A e N)
    """
    logger.debug(f"Drawing orbit for subgroup {s.value}; metric={kind.value}")
    batch = ScenarioBatch(subgroup=s, kind=kind, curves={v: [] for v in POINT_VARIANTS})
    limit = tables.vilimit(s, kind)
    steps = tables.fstep(s, kind)
    capture = kind == MetricKind.PARABOLIC and s != Subgroup.K
    for vi in range(limit):
        curves = _new_curves(s, kind, vi, 1.2 * vi / limit)
        focal_values: List[float] = []
        buffers = [deque(maxlen=3), deque(maxlen=3)]
        fits: List[Optional[ParabolaFit]] = [None, None]
        vval = 0.0
        for j, f in tables.f_values(s, kind):
            node = node_params(s, kind, vi, f, tables)
            vval = node.vval
            point = _place_node(curves[MoebiusVariant.DIRECT], s, kind, MoebiusVariant.DIRECT, node, tables)
            if point is None:
                batch.singular_nodes += 1
            elif s == Subgroup.K and abs(j) != steps and vval != 0:
                # extremos excluídos
                focal_values.append(check_focal_K(kind, vval, point))
            for slot, variant in enumerate(CAYLEY_VARIANTS):
                point = _place_node(curves[variant], s, kind, variant, node, tables)
                if point is None:
                    batch.singular_nodes += 1
                    continue
                if capture:
                    buffers[slot].append(point)
                    if j == 1 and len(buffers[slot]) == 3:
                        fits[slot] = _safe_fit(list(buffers[slot]))
        for variant, curve in curves.items():
            batch.curves[variant].append(curve)
        if s == Subgroup.K and vval != 0:
            report = focal_report(kind, vi, vval, focal_values)
            if not report.passed:
                logger.warning(f"Verificação focal falhou: K-{kind.value} vval={vval}")
            batch.focal_reports.append(report)
        if capture:
            check = ParabolaCheck(subgroup=s, vi=vi, vval=vval, fits=fits)
            if s == Subgroup.A:
                check.vertex_values = list(check_parabolic_vertices(*fits))
            batch.parabola_checks.append(check)
    return batch


def generate_transverses(s: Subgroup, kind: MetricKind,
                         tables: TuningTables = DEFAULT_TABLES) -> ScenarioBatch:
    """Mesmos nós das órbitas com a ordem dos laços trocada"""
    logger.debug(f"Transversal line created for subgroup {s.value}; metric={kind.value}")
    batch = ScenarioBatch(subgroup=s, kind=kind, curves={v: [] for v in POINT_VARIANTS})
    steps = tables.fstep(s, kind)
    for j, f in tables.f_values(s, kind):
        curves = _new_curves(s, kind, j + steps, 1.2)
        for vi in range(tables.vilimit(s, kind)):
            node = node_params(s, kind, vi, f, tables)
            for variant in POINT_VARIANTS:
                if _place_node(curves[variant], s, kind, variant, node, tables) is None:
                    batch.singular_nodes += 1
        for variant, curve in curves.items():
            batch.curves[variant].append(curve)
    return batch


def future_past_frames(tables: TuningTables = DEFAULT_TABLES) -> List[List[Curve]]:
    """
    Quadros da transição do futuro para o passado do cone de luz
    Hipérboles de raio rad[k] transformadas por [[1, -a e1], [a e1, 1]]
    """
    kind = MetricKind.HYPERBOLIC
    metric = plane_metric(kind)
    e1 = unit(metric, 1)
    half = tables.fp_nodes // 2
    frames = []
    for j in range(tables.fp_frames):
        logger.debug(f"Frame {j}; curves: {tables.fp_curves}")
        angl = math.exp(j / tables.fp_exp_scale - 3) if j > 0 else 0.0
        M = matrix_from_entries(metric, 1.0, scale(e1, -angl), scale(e1, angl), 1.0)
        curves = []
        for k in range(tables.fp_curves):
            # divisão inteira: dois tons por quadro
            curve = Curve(curve_id=k, subgroup=Subgroup.K, kind=kind,
                          color_grade=float(k // tables.fp_frames))
            rad = tables.fp_rad[k]
            for l in range(-half, half + 1):
                seed = PlanePoint(u=rad * math.cosh(l / tables.fp_node_scale),
                                  v=rad * math.sinh(l / tables.fp_node_scale))
                try:
                    point = moebius_map(M, seed, metric)
                except CliffordError as e:
                    logger.debug(f"Problema no quadro {j}, curva {k}, nó {l}: {e}")
                    curve.break_segment()
                    continue
                if in_limits(point, kind, False, True, tables):
                    curve.add_point(point)
                else:
                    curve.break_segment()
            curves.append(curve)
        frames.append(curves)
    return frames


def evaluate_checks(orbit_batches: Sequence[ScenarioBatch]) -> List[str]:
    """Lista de verificações que falharam (vazia quando tudo passa)"""
    failures = []
    for batch in orbit_batches:
        for report in batch.focal_reports:
            if not report.passed:
                failures.append(f"focal K-{report.kind.value} vi={report.vi} vval={report.vval}")
        if batch.subgroup == Subgroup.K and batch.kind == MetricKind.HYPERBOLIC:
            if batch.focal_reports and not any(r.sign_changes for r in batch.focal_reports):
                failures.append("focal K-h: nenhuma troca de sinal ao longo das órbitas")
        for check in batch.parabola_checks:
            if check.vertex_values is None:
                continue
            for value in check.vertex_values:
                if value is None or abs(value + 1) >= settings.CHECK_TOLERANCE:
                    failures.append(f"vertices {check.subgroup.value}-p vi={check.vi}: {value}")
    return failures


def _format_fit(fit: ParabolaFit) -> str:
    return f"vert=({fit.focal_u:6.3f}, {fit.focal_v:6.3f}); l={fit.focal_l:7.4f}"


def _format_field(field: Optional[Tuple[float, float]]) -> str:
    if field is None:
        return "singular"
    # sem "-0.0000"
    du, dv = (round(x, 4) + 0.0 for x in field)
    return f"({du:.4f}, {dv:.4f})"


def render_vector_fields(kind: MetricKind, p: PlanePoint) -> str:
    """Campos dA, dN e dK no ponto p: direto e nas duas transformadas de Cayley"""
    table = vector_field_table(kind, p)
    lines = [f"Vect field ({kind.label}; u={p.u:g}, v={p.v:g})",
             "Vect field \t Direct \t\t In Cayley \t\t In Cayley1"]
    for s, (direct, cayley, cayley1) in table.items():
        lines.append(f"  d{s.value} is:\t{_format_field(direct)};\t{_format_field(cayley)};\t {_format_field(cayley1)}")
    return "\n".join(lines)


def render_check_text(orbit_batches: Sequence[ScenarioBatch]) -> str:
    """Texto de conferência: constantes focais, parábolas e vértices"""
    lines = []
    for batch in orbit_batches:
        for report in batch.focal_reports:
            text = FOCAL_FORMULA[report.kind]
            for idx, value in enumerate(report.values):
                if idx and is_constant_step(report.values[idx - 1], value):
                    text += "="
                else:
                    text += f" {value:.3f}"
            lines.append(text)
        for check in batch.parabola_checks:
            head = f"Parab ({check.subgroup.value}/{check.vi:2d}/{check.vval:6.3f})"
            fit0, fit1 = check.fits
            if fit0 is None or fit1 is None or fit0.degenerate or fit1.degenerate:
                lines.append(f"{head}; degenerate")
                continue
            lines.append(f"{head}; {_format_fit(fit0)}; second {_format_fit(fit1)}")
            if check.vertex_values is not None:
                v0, v1 = check.vertex_values
                lines.append(f"Check vertices: {v0:g} and {v1:g}")
    return "\n".join(lines)
