"""
Two-groupcast message specifications, message set expansions, up-set rate
splitting and reconstruction-rate bookkeeping.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from rate_regions.models.lattice import (
    ReceiverSet,
    SetFamily,
    down_set,
    power_family,
    up_set,
)
from rate_regions.models.linear import Equality, LinearForm
from rate_regions.utils.errors import MessageSpecError

logger = logging.getLogger(__name__)

EXPANSION_KINDS = ("E", "upE", "upE+Sp", "P")

MESSAGE = "message"
SPLIT = "split"
RECONSTRUCTION = "reconstruction"


@dataclass(frozen=True)
class MessageSpec:
    """
    Two messages demanded by the receiver groups s1 and s2.
    """

    s1: ReceiverSet
    s2: ReceiverSet
    K: int

    def __post_init__(self):
        full = ReceiverSet.full(self.K)
        for s in (self.s1, self.s2):
            if not s or not s.issubset(full):
                raise MessageSpecError(f"{s!r} is not a nonempty subset of [1:{self.K}]")
        if self.s1 == self.s2:
            raise MessageSpecError("the two messages must have different receiver sets")

    @classmethod
    def parse(cls, text: str, K: int) -> "MessageSpec":
        """
        Parse "S1,S2" where each part is a receiver set ("12", "~3", "{1,10}").
        """
        parts = split_top_level(text)
        if len(parts) != 2:
            raise MessageSpecError(f"expected two message sets in '{text}'")
        try:
            first, second = (ReceiverSet.parse(p, K) for p in parts)
        except ValueError as e:
            raise MessageSpecError(f"bad message set '{text}': {e}")
        return cls(first, second, K)

    @property
    def private(self) -> ReceiverSet:
        """Receivers demanding both messages; may be empty."""
        return self.s1 & self.s2

    @property
    def common_first(self) -> ReceiverSet:
        return self.s1 - self.s2

    @property
    def common_second(self) -> ReceiverSet:
        return self.s2 - self.s1

    @property
    def messages(self) -> SetFamily:
        return SetFamily([self.s1, self.s2], self.K)

    def is_nested(self) -> bool:
        return self.s1.issubset(self.s2) or self.s2.issubset(self.s1)

    def nested_parts(self) -> Tuple[ReceiverSet, ReceiverSet]:
        """
        Split a nested spec whose larger set is [1:K].

        Returns:
            (private set, full set)
        """
        full = ReceiverSet.full(self.K)
        if self.s2 == full and self.s1.issubset(full):
            return self.s1, full
        if self.s1 == full:
            return self.s2, full
        raise MessageSpecError(f"{self.label()} has no message for all {self.K} receivers")

    def demanded_by(self, j: int) -> List[ReceiverSet]:
        return [s for s in (self.s1, self.s2) if j in s]

    def label(self) -> str:
        return f"{{{self.s1.label(self.K)},{self.s2.label(self.K)}}}"


def split_top_level(text: str) -> List[str]:
    """Split on commas that are not inside braces."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    parts.append("".join(current).strip())
    return [p for p in parts if p]


def validate_expansion(spec: MessageSpec, F: SetFamily) -> SetFamily:
    """Check that F contains both messages and lives in the same lattice."""
    if F.K != spec.K:
        raise MessageSpecError(f"expansion is over K={F.K}, messages over K={spec.K}")
    if not spec.messages.issubset(F):
        raise MessageSpecError(f"expansion {F.label()} does not contain {spec.label()}")
    return F


def expansion_for(spec: MessageSpec, kind: str) -> SetFamily:
    """
    Build one of the named expansions.

    Args:
        spec: The message specification
        kind: "E" (the messages only), "upE" (their up-set), "upE+Sp" (up-set
            plus the private set) or "P" (every set)

    Returns:
        The expansion F
    """
    P = power_family(spec.K)
    if kind == "E":
        return spec.messages
    if kind == "upE":
        return up_set(P, spec.messages)
    if kind == "upE+Sp":
        if not spec.private:
            raise MessageSpecError(f"{spec.label()} has no private receivers")
        return up_set(P, spec.messages) | [spec.private]
    if kind == "P":
        return P
    raise MessageSpecError(f"unknown expansion '{kind}', expected one of {EXPANSION_KINDS}")


@dataclass(frozen=True)
class RateVariable:
    """
    A message rate R_S, a split rate R_{S->T} or a reconstruction rate Rh_T.
    """

    kind: str
    origin: ReceiverSet
    K: int
    target: Optional[ReceiverSet] = None

    def __post_init__(self):
        if self.kind == SPLIT:
            if self.target is None or not self.origin.issubset(self.target):
                raise MessageSpecError("split targets must contain their origin")
        elif self.kind not in (MESSAGE, RECONSTRUCTION):
            raise MessageSpecError(f"unknown rate variable kind '{self.kind}'")

    @property
    def name(self) -> str:
        origin = self.origin.label(self.K)
        if self.kind == MESSAGE:
            return f"R_{{{origin}}}"
        if self.kind == SPLIT:
            return f"R_{{{origin}->{self.target.label(self.K)}}}"
        return f"Rh_{{{origin}}}"

    def __str__(self) -> str:
        return self.name


def message_variable(S: ReceiverSet, K: int) -> RateVariable:
    return RateVariable(MESSAGE, S, K)


def split_variable(S: ReceiverSet, T: ReceiverSet, K: int) -> RateVariable:
    return RateVariable(SPLIT, S, K, T)


def expansions_count(spec: MessageSpec) -> int:
    """Number of expansions F with E in F in P: 2^(|P| - |E|)."""
    return 2 ** ((1 << spec.K) - 1 - len(spec.messages))


def split_variables(spec: MessageSpec, F: SetFamily) -> List[RateVariable]:
    """
    One split rate R_{S_i->T} per T in the up-set of S_i within F, first
    message first.
    """
    validate_expansion(spec, F)
    return [
        split_variable(S, T, spec.K)
        for S in (spec.s1, spec.s2)
        for T in up_set(F, [S])
    ]


def decomposition_equalities(spec: MessageSpec, F: SetFamily) -> List[Equality]:
    """R_{S_i} = sum of its split rates, for both messages."""
    validate_expansion(spec, F)
    result = []
    for S in (spec.s1, spec.s2):
        parts = [split_variable(S, T, spec.K).name for T in up_set(F, [S])]
        lhs = LinearForm.variable(message_variable(S, spec.K).name) - LinearForm.total(parts)
        result.append(Equality(lhs, label=f"split {S.label(spec.K)}"))
    return result


def reconstruction_rate(spec: MessageSpec, F: SetFamily, target: ReceiverSet) -> LinearForm:
    """
    Rate of the codebook indexed by target: the sum of split rates of the
    messages below it. Zero when no message lies below target.

    Args:
        spec: The message specification
        F: The expansion
        target: A member of F

    Returns:
        The reconstruction rate as a linear form over split variables
    """
    validate_expansion(spec, F)
    if target not in F:
        raise MessageSpecError(f"{target.label(spec.K)} is not in {F.label()}")
    sources = down_set(spec.messages, [target])
    return LinearForm.total(split_variable(S, target, spec.K).name for S in sources)


def zero_reconstruction_targets(spec: MessageSpec, F: SetFamily) -> SetFamily:
    """Members of F that no message reaches: F minus the up-set of E in F."""
    validate_expansion(spec, F)
    return F - up_set(F, spec.messages)
