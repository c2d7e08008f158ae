"""
Núcleo da álgebra de Clifford com métrico diagonal
Multivetores densos (2^n coeficientes, blade indexado por bitmask), produtos,
involuções, norma, inverso e conversão entre vetores e listas.
Os coeficientes são escalares abstratos: float ou DualScalar.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple, Union

from config import settings
from errors import (
    DimensionOutOfRangeError, IndexOutOfRangeError, LengthMismatchError,
    MetricMismatchError, NonFiniteEntryError, NormNotScalarError, NotAVectorError,
    NotInvertibleError, NotScalarError, ZeroNormError,
)
from models import Metric

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class DualScalar:
    """
    Número dual re + de*ε com ε^2 = 0
    Avaliar uma função em (t, 1) devolve o valor e a derivada em t
    """
    re: float
    de: float = 0.0

    def __add__(self, other):
        if isinstance(other, DualScalar):
            return DualScalar(self.re + other.re, self.de + other.de)
        return DualScalar(self.re + other, self.de)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, DualScalar):
            return DualScalar(self.re - other.re, self.de - other.de)
        return DualScalar(self.re - other, self.de)

    def __rsub__(self, other):
        return DualScalar(other - self.re, -self.de)

    def __mul__(self, other):
        if isinstance(other, DualScalar):
            return DualScalar(self.re * other.re, self.re * other.de + self.de * other.re)
        return DualScalar(self.re * other, self.de * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, DualScalar):
            if other.re == 0:
                raise ZeroDivisionError("Divisão por número dual com parte real nula")
            return DualScalar(self.re / other.re,
                              (self.de * other.re - self.re * other.de) / (other.re * other.re))
        return DualScalar(self.re / other, self.de / other)

    def __rtruediv__(self, other):
        if self.re == 0:
            raise ZeroDivisionError("Divisão por número dual com parte real nula")
        return DualScalar(other / self.re, -other * self.de / (self.re * self.re))

    def __neg__(self):
        return DualScalar(-self.re, -self.de)

    def __repr__(self):
        return f"{self.re} + {self.de}ε"


Scalar = Union[float, DualScalar]


def real_part(s: Scalar) -> float:
    """Parte real de um escalar (o próprio valor para float)"""
    return s.re if isinstance(s, DualScalar) else float(s)


def magnitude(s: Scalar) -> float:
    """Tamanho usado nos testes de tolerância; para duais considera as duas partes"""
    if isinstance(s, DualScalar):
        return max(abs(s.re), abs(s.de))
    return abs(s)


def scalar_exp(s: Scalar) -> Scalar:
    if isinstance(s, DualScalar):
        e = math.exp(s.re)
        return DualScalar(e, e * s.de)
    return math.exp(s)


def scalar_cos(s: Scalar) -> Scalar:
    if isinstance(s, DualScalar):
        return DualScalar(math.cos(s.re), -math.sin(s.re) * s.de)
    return math.cos(s)


def scalar_sin(s: Scalar) -> Scalar:
    if isinstance(s, DualScalar):
        return DualScalar(math.sin(s.re), math.cos(s.re) * s.de)
    return math.sin(s)


def scalar_abs(s: Scalar) -> Scalar:
    if isinstance(s, DualScalar):
        return -s if s.re < 0 else s
    return abs(s)


def scalar_sqrt(s: Scalar) -> Scalar:
    """Raiz quadrada de valor não negativo"""
    if isinstance(s, DualScalar):
        r = math.sqrt(s.re)
        return DualScalar(r, s.de / (2 * r) if r else 0.0)
    return math.sqrt(s)


# Métrico

def metric_new(diag: Sequence[float]) -> Metric:
    """Cria o métrico diagonal validando dimensão e finitude"""
    diag = tuple(float(x) for x in diag)
    if not 1 <= len(diag) <= settings.MAX_DIMENSION:
        raise DimensionOutOfRangeError(
            f"Dimensão {len(diag)} fora do intervalo [1, {settings.MAX_DIMENSION}]",
            {"n": len(diag)},
        )
    if not all(math.isfinite(x) for x in diag):
        raise NonFiniteEntryError(f"Métrico com entrada não finita: {list(diag)}")
    return Metric(diag=diag)


def grade_of(blade: int) -> int:
    return bin(blade).count("1")


def _reordering_sign(a: int, b: int) -> int:
    """Sinal de levar o produto dos blades a, b à ordem crescente dos geradores"""
    a >>= 1
    swaps = 0
    while a:
        swaps += grade_of(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=64)
def _blade_table(diag: Tuple[float, ...]) -> Tuple[Tuple[Tuple[int, float], ...], ...]:
    """
    Tabela de produtos de blades: table[i][j] = (índice, fator)
    Geradores repetidos contraem para diag[k]
    """
    size = 1 << len(diag)
    table = []
    for i in range(size):
        row = []
        for j in range(size):
            factor = float(_reordering_sign(i, j))
            common = i & j
            for k, square in enumerate(diag):
                if common >> k & 1:
                    factor *= square
            row.append((i ^ j, factor))
        table.append(tuple(row))
    return tuple(table)


@dataclass(frozen=True)
class Multivector:
    """
    Multivetor denso sobre um métrico diagonal
    coeff[m] é o coeficiente do blade cujos geradores são os bits de m
    """
    metric: Metric
    coeff: Tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.coeff) != 1 << self.metric.n:
            raise LengthMismatchError(
                f"Esperados {1 << self.metric.n} coeficientes, recebidos {len(self.coeff)}"
            )

    def __add__(self, other: "Multivector") -> "Multivector":
        return add(self, other)

    def __sub__(self, other: "Multivector") -> "Multivector":
        return add(self, scale(other, -1.0))

    def __neg__(self) -> "Multivector":
        return scale(self, -1.0)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return gp(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return scale(self, other)

    def __repr__(self):
        terms = [f"{c}*e{_blade_name(m)}" for m, c in enumerate(self.coeff) if c != 0]
        return f"<Multivector({' + '.join(terms) or '0'})>"


def _blade_name(blade: int) -> str:
    return "".join(str(k) for k in range(blade.bit_length()) if blade >> k & 1)


def _check_same_metric(a: Multivector, b: Multivector) -> None:
    if a.metric is not b.metric and a.metric != b.metric:
        raise MetricMismatchError(
            f"Métricos diferentes: {list(a.metric.diag)} e {list(b.metric.diag)}"
        )


def zero_mv(metric: Metric) -> Multivector:
    return Multivector(metric, (0.0,) * (1 << metric.n))


def scalar_mv(metric: Metric, s: Scalar) -> Multivector:
    """Múltiplo escalar da identidade"""
    coeff = [0.0] * (1 << metric.n)
    coeff[0] = s
    return Multivector(metric, tuple(coeff))


def unit(metric: Metric, k: int) -> Multivector:
    """Gerador e_k"""
    if not 0 <= k < metric.n:
        raise IndexOutOfRangeError(f"Índice {k} fora de [0, {metric.n})", {"k": k})
    coeff = [0.0] * (1 << metric.n)
    coeff[1 << k] = 1.0
    return Multivector(metric, tuple(coeff))


def add(a: Multivector, b: Multivector) -> Multivector:
    _check_same_metric(a, b)
    return Multivector(a.metric, tuple(x + y for x, y in zip(a.coeff, b.coeff)))


def scale(a: Multivector, s: Scalar) -> Multivector:
    return Multivector(a.metric, tuple(s * x for x in a.coeff))


def gp(a: Multivector, b: Multivector) -> Multivector:
    """
    Produto geométrico
    O resultado já sai na forma canônica (geradores em ordem crescente)
    """
    _check_same_metric(a, b)
    table = _blade_table(a.metric.diag)
    out: List[Scalar] = [0.0] * len(a.coeff)
    for i, x in enumerate(a.coeff):
        if x == 0:
            continue
        row = table[i]
        for j, y in enumerate(b.coeff):
            if y == 0:
                continue
            k, factor = row[j]
            if factor == 0:
                continue
            out[k] = out[k] + factor * x * y
    return Multivector(a.metric, tuple(out))


def grade_part(a: Multivector, g: int) -> Multivector:
    return Multivector(
        a.metric,
        tuple(c if grade_of(m) == g else 0.0 for m, c in enumerate(a.coeff)),
    )


def _apply_grade_signs(a: Multivector, sign_of_grade) -> Multivector:
    return Multivector(
        a.metric,
        tuple(c if sign_of_grade(grade_of(m)) > 0 else -c for m, c in enumerate(a.coeff)),
    )


def prime(a: Multivector) -> Multivector:
    """Involução de grau: troca o sinal de todas as unidades"""
    return _apply_grade_signs(a, lambda g: (-1) ** g)


def star(a: Multivector) -> Multivector:
    """Reversão: inverte a ordem dos fatores"""
    return _apply_grade_signs(a, lambda g: (-1) ** (g * (g - 1) // 2))


def bar(a: Multivector) -> Multivector:
    """Conjugação de Clifford = prime ∘ star"""
    return _apply_grade_signs(a, lambda g: (-1) ** (g * (g + 1) // 2))


def embed_vector(metric: Metric, v: Sequence[Scalar]) -> Multivector:
    """Converte uma lista de componentes em vetor sum v_k e_k"""
    if len(v) != metric.n:
        raise LengthMismatchError(f"Vetor com {len(v)} componentes para dimensão {metric.n}")
    coeff: List[Scalar] = [0.0] * (1 << metric.n)
    for k, x in enumerate(v):
        coeff[1 << k] = x
    return Multivector(metric, tuple(coeff))


def _max_outside(a: Multivector, keep) -> float:
    return max((magnitude(c) for m, c in enumerate(a.coeff) if not keep(m)), default=0.0)


def extract_vector(a: Multivector) -> List[Scalar]:
    """
    Encontra a lista v com a = sum v_k e_k
    Usa v_k = <a e_k + e_k a>_0 / (2 B(k,k)); para unidade nula lê o coeficiente
    """
    residue = _max_outside(a, lambda m: grade_of(m) == 1)
    if residue >= settings.EPS_GRADE:
        raise NotAVectorError(f"Multivetor não é vetor (resíduo {residue:.3e})")
    result: List[Scalar] = []
    for k, square in enumerate(a.metric.diag):
        if square == 0:
            result.append(a.coeff[1 << k])
            continue
        e_k = unit(a.metric, k)
        result.append(scalar_part(gp(a, e_k) + gp(e_k, a)) / (2 * square))
    return result


def scalar_part(a: Multivector) -> Scalar:
    """Converte um múltiplo da identidade em escalar"""
    residue = _max_outside(a, lambda m: m == 0)
    if residue >= settings.EPS_GRADE:
        raise NotScalarError(f"Multivetor não é escalar (resíduo {residue:.3e})")
    return a.coeff[0]


def signed_norm_sq(a: Multivector) -> Scalar:
    """Quadrado da norma com sinal: <a bar(a)>_0"""
    q = gp(a, bar(a))
    residue = _max_outside(q, lambda m: m == 0)
    if residue >= settings.EPS_GRADE:
        raise NormNotScalarError(f"a*bar(a) não é escalar (resíduo {residue:.3e})")
    return q.coeff[0]


def norm(a: Multivector) -> Scalar:
    return scalar_sqrt(scalar_abs(signed_norm_sq(a)))


def inverse(a: Multivector) -> Multivector:
    """
    Inverso e^-1 = bar(e) / |e|^2
    Levanta ZeroNormError para norma nula
    """
    try:
        q = signed_norm_sq(a)
    except NormNotScalarError as e:
        raise NotInvertibleError(e.message) from e
    if abs(real_part(q)) < settings.EPS_ZERO:
        raise ZeroNormError("Norma nula: multivetor sem inverso")
    result = scale(bar(a), 1.0 / q)
    check = gp(a, result)
    deviation = max(magnitude(c - (1.0 if m == 0 else 0.0)) for m, c in enumerate(check.coeff))
    if deviation >= settings.EPS_INV:
        raise NotInvertibleError(f"Validação do inverso falhou (desvio {deviation:.3e})")
    return result
