"""Interop simulator: negotiation, historical clients, proxy caches and scripted exchanges."""

from .cache import CacheDecision, cache_decision
from .emulate import ClientFlavor, Emulated, Ignored, emulate_client
from .exchange import run_exchange
from .negotiate import HeaderPlan, ServerState, negotiate_server_headers
from .script import ExchangeScript, format_script, parse_script
from .trace import EventKind, TraceEvent, format_trace, parse_trace

__all__ = [
    "CacheDecision",
    "cache_decision",
    "ClientFlavor",
    "Emulated",
    "Ignored",
    "emulate_client",
    "run_exchange",
    "HeaderPlan",
    "ServerState",
    "negotiate_server_headers",
    "ExchangeScript",
    "format_script",
    "parse_script",
    "EventKind",
    "TraceEvent",
    "format_trace",
    "parse_trace",
]
