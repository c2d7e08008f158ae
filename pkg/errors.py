"""
Exceções tipadas da álgebra, das transformações de Möbius e dos cenários
Cada exceção carrega um código curto (`error`) e uma mensagem legível
"""

from typing import Optional


class CliffordError(ValueError):
    """
    Erro base do projeto
    Segue o formato error/message/details usado nas respostas de erro
    """
    error: str = "clifford-error"

    def __init__(self, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __repr__(self):
        return f"<{type(self).__name__}(error='{self.error}', message='{self.message}')>"


class DimensionOutOfRangeError(CliffordError):
    error = "dimension-out-of-range"


class NonFiniteEntryError(CliffordError):
    error = "non-finite-entry"


class IndexOutOfRangeError(CliffordError):
    error = "index-out-of-range"


class MetricMismatchError(CliffordError):
    error = "metric-mismatch"


class LengthMismatchError(CliffordError):
    error = "length-mismatch"


class NotAVectorError(CliffordError):
    error = "not-a-vector"


class NotScalarError(CliffordError):
    error = "not-scalar"


class NormNotScalarError(CliffordError):
    error = "norm-not-scalar"


class ZeroNormError(CliffordError):
    error = "zero-norm"


class NotInvertibleError(CliffordError):
    error = "not-invertible-by-conjugate"


class SingularDenominatorError(CliffordError):
    """Denominador cv+d sem inverso: o ponto vai para o infinito"""
    error = "singular-denominator"


class ResultNotVectorError(CliffordError):
    error = "result-not-vector"


class DegenerateAbscissaeError(CliffordError):
    error = "degenerate-abscissae"
