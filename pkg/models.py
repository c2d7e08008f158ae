"""
Modelos de dados do projeto
Inclui o métrico da álgebra, pontos do plano, enumerações EPH e os registros
pydantic produzidos pelos cenários e pela emissão de arquivos
"""

import math
from enum import Enum, IntEnum
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import settings


class Metric(BaseModel):
    """
    Métrico diagonal da álgebra de Clifford
    diag[k] = B(k,k) é o quadrado da unidade e_k
    """
    model_config = ConfigDict(frozen=True)

    diag: Tuple[float, ...] = Field(..., description="Entradas diagonais B(k,k)")

    @field_validator("diag")
    @classmethod
    def validate_diag(cls, v):
        """Valida dimensão e finitude"""
        if not 1 <= len(v) <= settings.MAX_DIMENSION:
            raise ValueError(f"Dimensão deve estar entre 1 e {settings.MAX_DIMENSION}")
        if not all(math.isfinite(x) for x in v):
            raise ValueError("Entradas do métrico devem ser finitas")
        return v

    @property
    def n(self) -> int:
        return len(self.diag)

    def __repr__(self):
        return f"<Metric(diag={list(self.diag)})>"


class PlanePoint(BaseModel):
    """Ponto (u, v) do plano"""
    model_config = ConfigDict(frozen=True)

    u: float
    v: float

    @field_validator("u", "v")
    @classmethod
    def validate_finite(cls, v):
        if not math.isfinite(v):
            raise ValueError("Coordenadas devem ser finitas")
        return v


class MetricKind(str, Enum):
    """Geometria do plano: elíptica, parabólica ou hiperbólica"""
    ELLIPTIC = "e"
    PARABOLIC = "p"
    HYPERBOLIC = "h"

    @property
    def index(self) -> int:
        return _KIND_ORDER.index(self)

    @property
    def signum(self) -> int:
        """Valor de e1^2"""
        return self.index - 1

    @property
    def label(self) -> str:
        return self.name.lower()


_KIND_ORDER = [MetricKind.ELLIPTIC, MetricKind.PARABOLIC, MetricKind.HYPERBOLIC]


class Subgroup(str, Enum):
    """Subgrupos a um parâmetro de SL(2,R)"""
    A = "A"
    N = "N"
    K = "K"

    @property
    def index(self) -> int:
        return _SUBGROUP_ORDER.index(self)


_SUBGROUP_ORDER = [Subgroup.A, Subgroup.N, Subgroup.K]


class MoebiusVariant(IntEnum):
    """Variantes da transformação: direta, Cayley de operadores e Cayley de pontos"""
    DIRECT = 0
    CAYLEY_OP = 1
    CAYLEY1_OP = 2
    CAYLEY_POINT = 3
    CAYLEY1_POINT = 4

    @property
    def label(self) -> str:
        return self.name.lower()


class NodeParams(BaseModel):
    """Parâmetros de um nó: parâmetro do grupo e ponto semente"""
    t: float
    x: float
    y: float
    vval: float = Field(..., description="Ordenada (ou ângulo) que identifica a órbita")

    @field_validator("t", "x", "y", "vval")
    @classmethod
    def validate_finite(cls, v):
        if not math.isfinite(v):
            raise ValueError("Parâmetros do nó devem ser finitos")
        return v


class ParabolaFit(BaseModel):
    """
    Parábola v = a*u^2 + b*u + c ajustada por três pontos
    Os campos focais ficam vazios quando a = 0
    """
    a: float
    b: float
    c: float
    focal_l: Optional[float] = None
    focal_u: Optional[float] = None
    focal_v: Optional[float] = None

    @property
    def degenerate(self) -> bool:
        return self.focal_l is None

    def vertex_check(self) -> Optional[float]:
        """Valor focal_v + focal_u^2 (esperado -1 para imagens de Cayley)"""
        if self.degenerate:
            return None
        return self.focal_v + self.focal_u ** 2


class ParabolaCheck(BaseModel):
    """Parábolas capturadas numa órbita parabólica, uma por variante de Cayley"""
    subgroup: Subgroup
    vi: int
    vval: float
    fits: List[Optional[ParabolaFit]] = Field(default_factory=lambda: [None, None])
    vertex_values: Optional[List[Optional[float]]] = None


class FocalCheckReport(BaseModel):
    """Verificação da propriedade focal ao longo de uma órbita do subgrupo K"""
    kind: MetricKind
    vi: int
    vval: float
    values: List[float] = Field(default_factory=list)
    expected: float
    max_deviation: float = 0.0
    constant: bool = True
    constant_magnitude: bool = True
    sign_changes: int = 0
    passed: bool = True


class Curve(BaseModel):
    """
    Curva formada por segmentos de pontos
    Um novo segmento começa em cada singularidade ou saída da área limitada
    """
    curve_id: int
    subgroup: Subgroup
    kind: MetricKind
    variant: MoebiusVariant = MoebiusVariant.DIRECT
    color_grade: float = Field(..., ge=0.0, le=1.2)
    arrow: bool = False
    segments: List[List[PlanePoint]] = Field(default_factory=lambda: [[]])
    breaks: int = 0

    def add_point(self, point: PlanePoint) -> None:
        self.segments[-1].append(point)

    def break_segment(self) -> None:
        self.breaks += 1
        if self.segments[-1]:
            self.segments.append([])

    def drawable_segments(self) -> List[List[PlanePoint]]:
        """Segmentos com pelo menos dois pontos"""
        return [s for s in self.segments if len(s) >= 2]

    def points(self) -> List[PlanePoint]:
        return [p for s in self.segments for p in s]


class ArrowGrid(BaseModel):
    """Setas do campo vetorial: (base, deslocamento) e número de pontos singulares"""
    subgroup: Subgroup
    kind: MetricKind
    arrows: List[Tuple[PlanePoint, Tuple[float, float]]] = Field(default_factory=list)
    singular_points: int = 0


class ScenarioBatch(BaseModel):
    """Resultado das órbitas ou transversais de um par (subgrupo, métrico)"""
    subgroup: Subgroup
    kind: MetricKind
    curves: Dict[MoebiusVariant, List[Curve]] = Field(default_factory=dict)
    focal_reports: List[FocalCheckReport] = Field(default_factory=list)
    parabola_checks: List[ParabolaCheck] = Field(default_factory=list)
    singular_nodes: int = 0

    @property
    def segment_breaks(self) -> int:
        return sum(c.breaks for curves in self.curves.values() for c in curves)


class TuningTables(BaseModel):
    """
    Tabelas de ajuste das figuras
    Indexadas por [subgrupo][métrico] ou [métrico][ponto]
    """
    vilimits: List[List[int]] = [[10, 20, 30], [10, 10, 19], [10, 10, 10]]
    fsteps: List[List[int]] = [[15, 15, 20], [15, 15, 25], [12, 15, 15]]
    flimits: List[List[float]] = [[2.0, 2.0, 4.0], [10.0, 4.0, 4.0], [0.5, 0.5, 0.5]]
    vpoints: List[List[float]] = [
        [0, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0, 2.0, 3.0, 5.0, 8.0, 16.0],
        [0, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1, 2.0, 3.0, 6.0, 10.0, 20.0],
        [0, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0, 2.0, 3.0, 5.0, 10.0, 100],
    ]
    ulim: float = 8.5
    vlim: float = 8.5

    # Grade de setas: u = k*spacing, v = j*spacing
    arrow_k_range: Tuple[int, int] = (-10, 10)
    arrow_j_range: Tuple[int, int] = (0, 11)
    arrow_spacing: float = 1.0 / 3

    # Ponto da tabela de campos vetoriais do texto de conferência
    field_point: Tuple[float, float] = (0.5, 1.0)

    # Transição futuro-passado
    fp_curves: int = 15
    fp_nodes: int = 40
    fp_frames: int = 8
    fp_exp_scale: float = 1.3
    fp_node_scale: float = 4.0
    fp_rad: List[float] = [1.0 / 5, 1.0 / 4, 1 / 3.5, 1.0 / 3, 1 / 2.5, 1.0 / 2, 1 / 1.5,
                           1, 1.5, 2, 2.5, 3, 3.5, 4, 4.5, 5]

    @model_validator(mode="after")
    def validate_shapes(self):
        """Valida formatos das tabelas"""
        for name in ("vilimits", "fsteps", "flimits", "vpoints"):
            table = getattr(self, name)
            if len(table) != 3:
                raise ValueError(f"Tabela {name} deve ter 3 linhas")
        if any(len(row) != 3 for row in self.vilimits + self.fsteps + self.flimits):
            raise ValueError("Tabelas por subgrupo devem ser 3x3")
        if self.fp_curves > len(self.fp_rad):
            raise ValueError("fp_rad deve ter pelo menos fp_curves raios")
        return self

    def vilimit(self, subgroup: Subgroup, kind: MetricKind) -> int:
        return self.vilimits[subgroup.index][kind.index]

    def fstep(self, subgroup: Subgroup, kind: MetricKind) -> int:
        return self.fsteps[subgroup.index][kind.index]

    def flimit(self, subgroup: Subgroup, kind: MetricKind) -> float:
        return self.flimits[subgroup.index][kind.index]

    def f_values(self, subgroup: Subgroup, kind: MetricKind) -> List[Tuple[int, float]]:
        """Pares (j, f) com j em [-fsteps, fsteps]"""
        steps = self.fstep(subgroup, kind)
        limit = self.flimit(subgroup, kind)
        return [(j, limit * j / steps) for j in range(-steps, steps + 1)]


class EmitConfig(BaseModel):
    """Configuração da emissão de arquivos CSV/SVG"""
    out_dir: Path = Field(default_factory=lambda: Path(settings.OUTPUT_DIR))
    formats: List[Literal["csv", "svg"]] = Field(default_factory=lambda: ["csv", "svg"])
    ulim: float = 8.5
    vlim: float = 8.5
    svg_scale: float = Field(default=settings.SVG_SCALE, gt=0)
    precision: int = Field(default=settings.CSV_PRECISION, ge=1, le=17)

    @property
    def viewport(self) -> Tuple[float, float, float, float]:
        """(umin, umax, vmin, vmax)"""
        return (-self.ulim, self.ulim, -self.vlim, self.vlim)

    @classmethod
    def from_tables(cls, tables: TuningTables, **kwargs) -> "EmitConfig":
        return cls(ulim=tables.ulim, vlim=tables.vlim, **kwargs)


class RunReport(BaseModel):
    """Resumo de uma execução completa"""
    files: Dict[str, List[str]] = Field(default_factory=dict)
    focal_checks: List[FocalCheckReport] = Field(default_factory=list)
    parabola_checks: List[ParabolaCheck] = Field(default_factory=list)
    singular_nodes: int = 0
    segment_breaks: int = 0
    failed_checks: List[str] = Field(default_factory=list)
    check_text: str = ""

    @property
    def passed(self) -> bool:
        return not self.failed_checks

    def add_file(self, key: str, path: Path) -> None:
        self.files.setdefault(key, []).append(str(path))

    def all_files(self) -> List[str]:
        return [f for files in self.files.values() for f in files]
