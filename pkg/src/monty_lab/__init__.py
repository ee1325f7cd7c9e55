"""Exhaustive analysis of Monty-Hall-style door games."""
from .game_core import (AtOnce, DomainError, ProtocolViolation, Sequential4, Transcript,
                        legal_reveal_sets, offered_door, play_at_once, play_sequential)
from .strategy import (ConieStrategy, MonteStrategy, ParseError, always_switch,
                       enumerate_conie, enumerate_monte, format_conie_label,
                       format_monte_label, parse_conie_label, parse_monte_label)

__version__ = "0.1.0"
