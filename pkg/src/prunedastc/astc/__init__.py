"""Pruned ASTC codec: 8x5 weight grid, 2-bit weights, 5-bit CEM 8 endpoints."""

from .blockpack import pack_block, unpack_block
from .config import EncoderConfig
from .decoder import (
    decode_block,
    decode_endpoints,
    infill_weights,
    interpolate_color,
    unquantize_endpoint,
    unquantize_weight,
)
from .encoder import (
    downsample_weights,
    encode_block,
    project_weights,
    quantize_endpoints,
    quantize_weights,
    select_endpoints,
)
from .frame import EncodedImage, EncodeStats, decode_image, encode_image, encode_blocks, roundtrip
from .types import EndpointPair, QuantizedEndpoints

__all__ = [
    "EncodeStats",
    "EncodedImage",
    "EncoderConfig",
    "EndpointPair",
    "QuantizedEndpoints",
    "decode_block",
    "decode_endpoints",
    "decode_image",
    "downsample_weights",
    "encode_block",
    "encode_image",
    "encode_blocks",
    "infill_weights",
    "interpolate_color",
    "pack_block",
    "project_weights",
    "quantize_endpoints",
    "quantize_weights",
    "roundtrip",
    "select_endpoints",
    "unpack_block",
    "unquantize_endpoint",
    "unquantize_weight",
]
