"""
Network configuration files and command-line value parsing.

A config holds `#` comments, blank lines, one `K = n` line and any number of
`S = capacity` lines. Missing links have capacity 0.
"""

import logging
import os
from fractions import Fraction
from typing import Dict, List, Tuple

from rate_regions.config import CONFIG_DIR, MAX_RECEIVERS
from rate_regions.models.lattice import ReceiverSet
from rate_regions.models.messages import MessageSpec, message_variable, split_top_level
from rate_regions.models.network import CombinationNetwork
from rate_regions.utils.errors import ConfigError, LatticeError, MessageSpecError

logger = logging.getLogger(__name__)


def parse_rational(text: str) -> Fraction:
    """Exact value of "3/4", "0.75" or "2"."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"'{text}' is not a rational number")


def parse_network_text(text: str, source: str = "<string>") -> CombinationNetwork:
    """
    Parse a network configuration.

    Args:
        text: Config file contents
        source: Name used in error messages

    Returns:
        The combination network
    """
    K = None
    entries: List[Tuple[int, str, str]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{number}: expected 'key = value', got '{raw.strip()}'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "K":
            if K is not None:
                raise ConfigError(f"{source}:{number}: K is given twice")
            if not value.isdigit() or not 1 <= int(value) <= MAX_RECEIVERS:
                raise ConfigError(f"{source}:{number}: K must be an integer in 1..{MAX_RECEIVERS}")
            K = int(value)
        else:
            entries.append((number, key, value))
    if K is None:
        raise ConfigError(f"{source}: missing 'K = n' line")

    capacities: Dict[ReceiverSet, Fraction] = {}
    for number, key, value in entries:
        try:
            S = ReceiverSet.parse(key, K)
        except LatticeError as e:
            raise ConfigError(f"{source}:{number}: unknown key '{key}': {e}")
        if S in capacities:
            raise ConfigError(f"{source}:{number}: link {S.label(K)} is given twice")
        try:
            capacity = parse_rational(value)
        except ValueError as e:
            raise ConfigError(f"{source}:{number}: {e}")
        if capacity < 0:
            raise ConfigError(f"{source}:{number}: capacity of link {S.label(K)} is negative")
        capacities[S] = capacity
    logger.debug(f"{source}: K={K}, {len(capacities)} links")
    return CombinationNetwork(K, capacities)


def resolve_config_path(path: str) -> str:
    """The path itself, or a bundled config of that name."""
    if os.path.exists(path):
        return path
    for candidate in (os.path.join(CONFIG_DIR, path), os.path.join(CONFIG_DIR, f"{path}.cfg")):
        if os.path.exists(candidate):
            return candidate
    raise ConfigError(f"config file not found: {path}")


def load_network(path: str) -> CombinationNetwork:
    resolved = resolve_config_path(path)
    try:
        with open(resolved, "r") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read {resolved}: {e}")
    return parse_network_text(text, os.path.basename(resolved))


def parse_message_set(text: str, K: int) -> MessageSpec:
    return MessageSpec.parse(text, K)


def parse_rate_point(text: str, spec: MessageSpec) -> Dict[str, Fraction]:
    """
    Parse "a,b" into rates for the spec's first and second message.

    Returns:
        Message variable name -> rate
    """
    parts = split_top_level(text)
    if len(parts) != 2:
        raise MessageSpecError(f"expected two rates in '{text}'")
    try:
        values = [parse_rational(p) for p in parts]
    except ValueError as e:
        raise MessageSpecError(str(e))
    names = [message_variable(S, spec.K).name for S in (spec.s1, spec.s2)]
    return dict(zip(names, values))
