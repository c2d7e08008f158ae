"""
Matrizes 2x2 com entradas de Clifford e transformações de Möbius do plano
Inclui as transformadas de Cayley de cada geometria, as exponenciais dos
subgrupos A, N, K e os campos vetoriais obtidos por diferenciação dual
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, NamedTuple, Optional, Tuple, Union

from algebra_core import (
    DualScalar, Multivector, Scalar, embed_vector, extract_vector, gp, inverse,
    metric_new, real_part, scalar_cos, scalar_exp, scalar_mv, scalar_sin, scale, unit,
)
from errors import (
    CliffordError, MetricMismatchError, NotAVectorError, NotInvertibleError,
    ResultNotVectorError, SingularDenominatorError, ZeroNormError,
)
from models import Metric, MetricKind, MoebiusVariant, PlanePoint, Subgroup

logger = logging.getLogger(__name__)

Entry = Union[Multivector, float, DualScalar]


@dataclass(frozen=True)
class CliffordMatrix2:
    """Matriz [[a, b], [c, d]] com entradas multivetoriais de um mesmo métrico"""
    a: Multivector
    b: Multivector
    c: Multivector
    d: Multivector

    def __post_init__(self):
        metric = self.a.metric
        for entry in (self.b, self.c, self.d):
            if entry.metric is not metric and entry.metric != metric:
                raise MetricMismatchError("Entradas da matriz com métricos diferentes")

    @property
    def metric(self) -> Metric:
        return self.a.metric

    def __matmul__(self, other: "CliffordMatrix2") -> "CliffordMatrix2":
        return mat_mul(self, other)


class CayleyMatrices(NamedTuple):
    C: CliffordMatrix2
    CI: CliffordMatrix2
    C1: CliffordMatrix2
    C1I: CliffordMatrix2


def _as_entry(metric: Metric, value: Entry) -> Multivector:
    if isinstance(value, Multivector):
        return value
    return scalar_mv(metric, value)


def matrix_from_entries(metric: Metric, a: Entry, b: Entry, c: Entry, d: Entry) -> CliffordMatrix2:
    """Monta a matriz; entradas escalares viram múltiplos da identidade"""
    return CliffordMatrix2(*(_as_entry(metric, x) for x in (a, b, c, d)))


def identity_matrix(metric: Metric) -> CliffordMatrix2:
    return matrix_from_entries(metric, 1.0, 0.0, 0.0, 1.0)


def mat_mul(m1: CliffordMatrix2, m2: CliffordMatrix2) -> CliffordMatrix2:
    """Produto 2x2; as entradas não comutam, a ordem é preservada"""
    if m1.metric is not m2.metric and m1.metric != m2.metric:
        raise MetricMismatchError("Matrizes com métricos diferentes")
    return CliffordMatrix2(
        gp(m1.a, m2.a) + gp(m1.b, m2.c),
        gp(m1.a, m2.b) + gp(m1.b, m2.d),
        gp(m1.c, m2.a) + gp(m1.d, m2.c),
        gp(m1.c, m2.b) + gp(m1.d, m2.d),
    )


def mat_scale(m: CliffordMatrix2, s: Scalar) -> CliffordMatrix2:
    return CliffordMatrix2(scale(m.a, s), scale(m.b, s), scale(m.c, s), scale(m.d, s))


def moebius_components(M: CliffordMatrix2, x: Scalar, y: Scalar) -> Tuple[Scalar, Scalar]:
    """
    Calcula (av+b)(cv+d)^-1 para v = x e0 + y e1
    Devolve as componentes sem converter para float (aceita duais)
    """
    point = embed_vector(M.metric, [x, y])
    numerator = gp(M.a, point) + M.b
    denominator = gp(M.c, point) + M.d
    try:
        denominator_inv = inverse(denominator)
    except (ZeroNormError, NotInvertibleError) as e:
        raise SingularDenominatorError(f"Denominador singular em ({real_part(x)}, {real_part(y)})",
                                       {"cause": e.error}) from e
    try:
        u, v = extract_vector(gp(numerator, denominator_inv))
    except NotAVectorError as e:
        raise ResultNotVectorError(e.message) from e
    return u, v


def moebius_map(M: CliffordMatrix2, p: PlanePoint, metric: Metric) -> PlanePoint:
    """Transformação linear-fracionária v -> (av+b)(cv+d)^-1 de um ponto do plano"""
    if M.metric is not metric and M.metric != metric:
        raise MetricMismatchError("Métrico da matriz difere do métrico informado")
    u, v = moebius_components(M, p.u, p.v)
    u, v = real_part(u), real_part(v)
    if not (math.isfinite(u) and math.isfinite(v)):
        raise SingularDenominatorError(f"Resultado não finito em ({p.u}, {p.v})")
    return PlanePoint(u=u, v=v)


@lru_cache(maxsize=None)
def plane_metric(kind: MetricKind) -> Metric:
    """Métrico do plano: e0^2 = -1, e1^2 = signum"""
    return metric_new([-1.0, float(kind.signum)])


def shift_matrices(metric: Metric) -> Tuple[CliffordMatrix2, CliffordMatrix2]:
    """Matrizes T e TI que levam a primeira transformada de Cayley à segunda"""
    e0 = unit(metric, 0)
    T = matrix_from_entries(metric, 1.0, e0, e0, 1.0)
    TI = matrix_from_entries(metric, 1.0, -e0, -e0, 1.0)
    return T, TI


@lru_cache(maxsize=None)
def cayley_matrices(kind: MetricKind) -> CayleyMatrices:
    """Duas versões da transformada de Cayley (C, C1) e seus inversos"""
    metric = plane_metric(kind)
    e1 = unit(metric, 1)
    signum = float(kind.signum)
    if kind == MetricKind.PARABOLIC:
        return CayleyMatrices(
            C=matrix_from_entries(metric, 1.0, -e1, -e1, 1.0),
            CI=matrix_from_entries(metric, 1.0, e1, e1, 1.0),
            C1=matrix_from_entries(metric, 1.0, -e1, e1, 1.0),
            C1I=matrix_from_entries(metric, 1.0, e1, -e1, 1.0),
        )
    T, TI = shift_matrices(metric)
    C = matrix_from_entries(metric, 1.0, -e1, scale(e1, signum), 1.0)
    CI = matrix_from_entries(metric, 1.0, e1, scale(e1, -signum), 1.0)
    return CayleyMatrices(C=C, CI=CI, C1=mat_mul(C, T), C1I=mat_mul(TI, CI))


def subgroup_exp(s: Subgroup, t: Scalar, metric: Metric) -> CliffordMatrix2:
    """Exponenciais dos subgrupos A, N, K (decomposição de Iwasawa)"""
    if s == Subgroup.A:
        return matrix_from_entries(metric, scalar_exp(t), 0.0, 0.0, scalar_exp(-t))
    e0 = unit(metric, 0)
    if s == Subgroup.N:
        return matrix_from_entries(metric, 1.0, scale(e0, t), 0.0, 1.0)
    cos_t, sin_t = scalar_cos(t), scalar_sin(t)
    return matrix_from_entries(metric, cos_t, scale(e0, sin_t), scale(e0, sin_t), cos_t)


@lru_cache(maxsize=8192)
def family_matrix(s: Subgroup, kind: MetricKind, variant: MoebiusVariant, t: Scalar) -> CliffordMatrix2:
    """Matriz da variante: Exp, C.Exp.CI, C1.Exp.C1I, C.Exp ou C1.Exp"""
    exp_matrix = subgroup_exp(s, t, plane_metric(kind))
    if variant == MoebiusVariant.DIRECT:
        return exp_matrix
    cayley = cayley_matrices(kind)
    if variant == MoebiusVariant.CAYLEY_OP:
        return mat_mul(mat_mul(cayley.C, exp_matrix), cayley.CI)
    if variant == MoebiusVariant.CAYLEY1_OP:
        return mat_mul(mat_mul(cayley.C1, exp_matrix), cayley.C1I)
    if variant == MoebiusVariant.CAYLEY_POINT:
        return mat_mul(cayley.C, exp_matrix)
    return mat_mul(cayley.C1, exp_matrix)


def moebius_family(s: Subgroup, kind: MetricKind, variant: MoebiusVariant,
                   t: float, p: PlanePoint) -> PlanePoint:
    return moebius_map(family_matrix(s, kind, variant, t), p, plane_metric(kind))


def _derivative(s: Scalar) -> float:
    return s.de if isinstance(s, DualScalar) else 0.0


def vector_field(s: Subgroup, kind: MetricKind, variant: MoebiusVariant,
                 p: PlanePoint) -> Tuple[float, float]:
    """
    Representação derivada rho(X) = d/dt rho(e^{tX}) em t = 0
    Avalia a família com t dual (0, 1) e lê as partes derivadas
    """
    M = family_matrix(s, kind, variant, DualScalar(0.0, 1.0))
    u, v = moebius_components(M, p.u, p.v)
    return _derivative(u), _derivative(v)


def vector_field_table(kind: MetricKind, p: PlanePoint) -> Dict[Subgroup, Tuple[Optional[Tuple[float, float]], ...]]:
    """Campos direto, Cayley e Cayley1 de operadores para cada subgrupo"""
    table = {}
    for s in Subgroup:
        fields = []
        for variant in (MoebiusVariant.DIRECT, MoebiusVariant.CAYLEY_OP, MoebiusVariant.CAYLEY1_OP):
            try:
                fields.append(vector_field(s, kind, variant, p))
            except CliffordError as e:
                logger.debug(f"Problema no campo vetorial d{s.value} ({variant.label}): {e}")
                fields.append(None)
        table[s] = tuple(fields)
    return table
