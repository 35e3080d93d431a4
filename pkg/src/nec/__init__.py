"""Linear network error-correction coding over prime fields."""

from .analysis import min_distance, sink_report
from .construct import Code, construct_code
from .galois import Field
from .netgraph import Channel, Network, parse_network
from .randomcode import random_code

__all__ = ["Channel", "Code", "Field", "Network", "construct_code", "min_distance",
           "parse_network", "random_code", "sink_report"]
__version__ = "0.1.0"
