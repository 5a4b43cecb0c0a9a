"""Closed forms and brute-force oracles for PSC/BSC coding and secrecy duality."""

from .channelmodels import ChannelVector
from .codebook import load_code
from .gf2core import BitMatrix, CodePair, build_pair

__all__ = ["BitMatrix", "ChannelVector", "CodePair", "build_pair", "load_code"]
__version__ = "0.1.0"
