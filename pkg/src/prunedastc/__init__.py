"""Fixed-rate, low-latency ASTC encoding with a single pruned configuration.

Blocks are 12x12 (0.89 bpp) or 8x8 (2.0 bpp); every block uses an 8x5 grid
of 2-bit weights and 5-bit direct RGB endpoints.
"""

from .astc import EncoderConfig, decode_image, encode_image, roundtrip
from .image import BlockSize

__version__ = "0.1.0"

__all__ = ["BlockSize", "EncoderConfig", "decode_image", "encode_image", "roundtrip"]
