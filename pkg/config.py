import os
from dotenv import load_dotenv

# Carrega variáveis de ambiente do arquivo .env
load_dotenv()

class Settings:
    """Configurações da aplicação"""

    # Configurações básicas
    APP_NAME: str = "EPH Moebius"
    APP_VERSION: str = "1.0.0"

    # Configurações de logging (único valor lido do ambiente)
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    # Álgebra de Clifford
    MAX_DIMENSION: int = 8
    EPS_GRADE: float = 1e-9      # pureza de grau
    EPS_ZERO: float = 1e-12      # norma nula
    EPS_INV: float = 1e-9        # validação do inverso

    # Verificações numéricas das órbitas
    EPS_VANDERMONDE: float = 1e-12
    CONSTANCY_TOLERANCE: float = 0.001
    CHECK_TOLERANCE: float = 1e-3

    # Configurações de saída
    OUTPUT_DIR: str = "output"
    CSV_PRECISION: int = 9
    SVG_SCALE: float = 40.0
    ARROW_GREY: float = 0.6

# Instância global das configurações
settings = Settings()
