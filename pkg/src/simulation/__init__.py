from .codec import BlockCodec, CodecConfig, run_codec
from .channel import ChannelConfig, run_channel_experiment
from .typicality import gaussian_typicality, concentration_experiment

__all__ = [
    "BlockCodec",
    "CodecConfig",
    "run_codec",
    "ChannelConfig",
    "run_channel_experiment",
    "gaussian_typicality",
    "concentration_experiment"
]
