from .enumerative import TypicalShellCoder
from .quantizer import UniformQuantizer, design_quantizer

__all__ = ["TypicalShellCoder", "UniformQuantizer", "design_quantizer"]
