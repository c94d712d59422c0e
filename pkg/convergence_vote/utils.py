"""Utility functions for convergence voting."""

import logging
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, Optional, Union

from .config import config

logger = logging.getLogger(__name__)

Number = Union[int, Fraction]

def setup_logging(level=logging.INFO, log_file: Optional[str] = None):
    """Setup logging configuration."""
    handlers = [logging.StreamHandler()]
    log_file = log_file if log_file is not None else config.LOG_FILE
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )

def decimal_string(value: Number, digits: int = 12) -> str:
    """Render an exact rational with `digits` significant digits."""
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = digits
        result = Decimal(value.numerator) / Decimal(value.denominator)
    return format(result.normalize() if result == result.to_integral() else result, 'f')

def fraction_string(value: Number) -> str:
    """Render '5/11', or '3' for integral values."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"

def fraction_to_json(value: Number) -> Dict[str, object]:
    """Serialize an exact rational as a {"num","den","decimal"} triple."""
    value = Fraction(value)
    return {
        'num': value.numerator,
        'den': value.denominator,
        'decimal': float(decimal_string(value)),
    }
