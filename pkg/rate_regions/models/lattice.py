"""
Subset-inclusion lattice over the receiver indices [1:K].

Receiver sets are bitmasks: bit (i - 1) is set when receiver i belongs to the
set. Families are duplicate-free and always iterate in (cardinality, members)
order so every system built on top of them is reproducible.
"""

import logging
from functools import total_ordering
from typing import Iterable, List, Optional, Tuple, Union

from rate_regions.config import DOWN_SET_GUARD, MAX_RECEIVERS
from rate_regions.utils.errors import GuardExceededError, LatticeError

logger = logging.getLogger(__name__)


def _check_k(K: int):
    if not isinstance(K, int) or K < 1 or K > MAX_RECEIVERS:
        raise LatticeError(f"K must be an integer in 1..{MAX_RECEIVERS}, got {K!r}")


@total_ordering
class ReceiverSet:
    """
    A subset of receivers stored as a bitmask.

    Ordering operators sort by (cardinality, members); use issubset() and
    issuperset() for inclusion tests.
    """

    __slots__ = ("mask",)

    def __init__(self, mask: int):
        if mask < 0:
            raise LatticeError(f"invalid receiver mask {mask}")
        self.mask = mask

    @classmethod
    def from_members(cls, members: Iterable[int]) -> "ReceiverSet":
        mask = 0
        for member in members:
            if not isinstance(member, int) or member < 1 or member > MAX_RECEIVERS:
                raise LatticeError(f"receiver index out of range: {member!r}")
            mask |= 1 << (member - 1)
        return cls(mask)

    @classmethod
    def full(cls, K: int) -> "ReceiverSet":
        _check_k(K)
        return cls((1 << K) - 1)

    @classmethod
    def singleton(cls, i: int) -> "ReceiverSet":
        return cls.from_members([i])

    @classmethod
    def parse(cls, text: str, K: int) -> "ReceiverSet":
        """
        Parse a receiver set written as digits ("124"), a braced list
        ("{1,2,10}") or an overline escape ("~4" for [1:K] minus 4, "~" for
        the full set).

        Args:
            text: The set as written on a command line or in a config
            K: Number of receivers

        Returns:
            The parsed nonempty ReceiverSet
        """
        _check_k(K)
        token = text.strip()
        if token.startswith("~"):
            inner = token[1:].strip()
            removed = cls(0) if not inner else cls.parse(inner, K)
            result = complement_set(removed, K, allow_empty=True)
            if not result:
                raise LatticeError(f"'{text}' denotes the empty set")
            return result
        if token.startswith("{") and token.endswith("}"):
            body = token[1:-1].strip()
            if not body:
                raise LatticeError("receiver sets are nonempty")
            try:
                members = [int(part) for part in body.split(",")]
            except ValueError:
                raise LatticeError(f"malformed receiver list '{text}'")
        elif token.isdigit():
            members = [int(ch) for ch in token]
        else:
            raise LatticeError(f"malformed receiver set '{text}'")
        if not members or any(m < 1 or m > K for m in members):
            raise LatticeError(f"receiver set '{text}' is not a nonempty subset of [1:{K}]")
        if len(set(members)) != len(members):
            raise LatticeError(f"receiver set '{text}' repeats a member")
        return cls.from_members(members)

    def members(self) -> Tuple[int, ...]:
        result = []
        mask, index = self.mask, 1
        while mask:
            if mask & 1:
                result.append(index)
            mask >>= 1
            index += 1
        return tuple(result)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, i: int) -> bool:
        return i >= 1 and bool(self.mask & (1 << (i - 1)))

    def issubset(self, other: "ReceiverSet") -> bool:
        return self.mask & ~other.mask == 0

    def issuperset(self, other: "ReceiverSet") -> bool:
        return other.mask & ~self.mask == 0

    def __and__(self, other: "ReceiverSet") -> "ReceiverSet":
        return ReceiverSet(self.mask & other.mask)

    def __or__(self, other: "ReceiverSet") -> "ReceiverSet":
        return ReceiverSet(self.mask | other.mask)

    def __sub__(self, other: "ReceiverSet") -> "ReceiverSet":
        return ReceiverSet(self.mask & ~other.mask)

    @property
    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return (len(self), self.members())

    def __eq__(self, other) -> bool:
        return isinstance(other, ReceiverSet) and self.mask == other.mask

    def __lt__(self, other: "ReceiverSet") -> bool:
        return self.sort_key < other.sort_key

    def __hash__(self) -> int:
        return hash(self.mask)

    def label(self, K: Optional[int] = None) -> str:
        """Digit string when every index fits in one digit, braced list otherwise."""
        members = self.members()
        if not members:
            return "{}"
        widest = K if K is not None else members[-1]
        if widest <= 9:
            return "".join(str(m) for m in members)
        return "{" + ",".join(str(m) for m in members) + "}"

    def __str__(self) -> str:
        return self.label()

    def __repr__(self) -> str:
        return f"ReceiverSet({self.label()})"


SetLike = Union["SetFamily", Iterable[ReceiverSet]]


class SetFamily:
    """
    Duplicate-free collection of nonempty receiver sets within [1:K].
    """

    __slots__ = ("K", "_sets", "_masks")

    def __init__(self, sets: Iterable[ReceiverSet], K: int):
        _check_k(K)
        limit = 1 << K
        unique = set()
        for s in sets:
            if not isinstance(s, ReceiverSet):
                raise LatticeError(f"not a ReceiverSet: {s!r}")
            if s.mask == 0 or s.mask >= limit:
                raise LatticeError(f"{s!r} is not a nonempty subset of [1:{K}]")
            unique.add(s)
        self.K = K
        self._sets = tuple(sorted(unique))
        self._masks = frozenset(s.mask for s in self._sets)

    @classmethod
    def parse(cls, labels: Iterable[str], K: int) -> "SetFamily":
        return cls([ReceiverSet.parse(label, K) for label in labels], K)

    def __iter__(self):
        return iter(self._sets)

    def __len__(self) -> int:
        return len(self._sets)

    def __bool__(self) -> bool:
        return bool(self._sets)

    def __getitem__(self, index: int) -> ReceiverSet:
        return self._sets[index]

    def __contains__(self, s: ReceiverSet) -> bool:
        return isinstance(s, ReceiverSet) and s.mask in self._masks

    def __eq__(self, other) -> bool:
        return isinstance(other, SetFamily) and self._masks == other._masks

    def __hash__(self) -> int:
        return hash(self._masks)

    @property
    def masks(self) -> frozenset:
        return self._masks

    def issubset(self, other: "SetFamily") -> bool:
        return self._masks <= other._masks

    def __or__(self, other: SetLike) -> "SetFamily":
        return SetFamily(list(self._sets) + list(other), self.K)

    def __and__(self, other: SetLike) -> "SetFamily":
        keep = {s.mask for s in other}
        return SetFamily([s for s in self._sets if s.mask in keep], self.K)

    def __sub__(self, other: SetLike) -> "SetFamily":
        drop = {s.mask for s in other}
        return SetFamily([s for s in self._sets if s.mask not in drop], self.K)

    def without(self, s: ReceiverSet) -> "SetFamily":
        return SetFamily([t for t in self._sets if t != s], self.K)

    @property
    def sort_key(self) -> Tuple:
        return (len(self._sets), tuple(s.sort_key for s in self._sets))

    def labels(self) -> List[str]:
        return [s.label(self.K) for s in self._sets]

    def label(self) -> str:
        return "{" + ",".join(self.labels()) + "}"

    def __str__(self) -> str:
        return self.label()

    def __repr__(self) -> str:
        return f"SetFamily({self.label()}, K={self.K})"


def power_family(K: int) -> SetFamily:
    """
    Every nonempty subset of [1:K].

    Args:
        K: Number of receivers, 1 <= K <= 16

    Returns:
        The family P with 2^K - 1 sets
    """
    _check_k(K)
    return SetFamily((ReceiverSet(mask) for mask in range(1, 1 << K)), K)


def messages_for_receiver(F: SetFamily, i: int) -> SetFamily:
    """Sets of F that contain receiver i."""
    if not isinstance(i, int) or i < 1 or i > F.K:
        raise LatticeError(f"receiver index {i!r} outside 1..{F.K}")
    return SetFamily((s for s in F if i in s), F.K)


def down_set(ground: SetFamily, seeds: SetLike) -> SetFamily:
    """Members of ground contained in some seed. Seeds need not belong to ground."""
    seed_masks = [s.mask for s in seeds]
    return SetFamily(
        (y for y in ground if any(y.mask & ~m == 0 for m in seed_masks)), ground.K
    )


def up_set(ground: SetFamily, seeds: SetLike) -> SetFamily:
    """Members of ground containing some seed. Seeds need not belong to ground."""
    seed_masks = [s.mask for s in seeds]
    return SetFamily(
        (y for y in ground if any(m & ~y.mask == 0 for m in seed_masks)), ground.K
    )


def family_of_down_sets(ground: SetFamily) -> List[SetFamily]:
    """
    Enumerate the nonempty down-closed subfamilies of ground.

    Elements are visited in cardinality order, so every strict subset of an
    element is decided before the element itself; an element may join only
    when all of its subsets inside ground already have.

    Args:
        ground: The family to enumerate over, at most DOWN_SET_GUARD sets

    Returns:
        Down-sets sorted by size, then by members
    """
    if len(ground) > DOWN_SET_GUARD:
        raise GuardExceededError(
            f"down-set enumeration over {len(ground)} sets exceeds the guard of {DOWN_SET_GUARD}"
        )
    elements = list(ground)
    count = len(elements)
    below = [
        [k for k in range(idx) if elements[k].issubset(elements[idx])]
        for idx in range(count)
    ]
    chosen = [False] * count
    found: List[SetFamily] = []

    def visit(idx: int):
        if idx == count:
            if any(chosen):
                found.append(SetFamily([e for e, c in zip(elements, chosen) if c], ground.K))
            return
        visit(idx + 1)
        if all(chosen[k] for k in below[idx]):
            chosen[idx] = True
            visit(idx + 1)
            chosen[idx] = False

    visit(0)
    found.sort(key=lambda family: family.sort_key)
    logger.debug(f"{len(found)} down-sets over {ground.label()}")
    return found


def family_of_down_sets_containing(ground: SetFamily, required: SetLike) -> List[SetFamily]:
    """
    Down-sets of ground that contain every set in required.

    Args:
        ground: The family to enumerate over
        required: Sets every returned down-set must contain; must lie in ground

    Returns:
        The matching down-sets in the same order as family_of_down_sets
    """
    required = list(required)
    missing = [s for s in required if s not in ground]
    if missing:
        raise LatticeError(
            f"required sets {[s.label(ground.K) for s in missing]} are not in {ground.label()}"
        )
    masks = {s.mask for s in required}
    return [b for b in family_of_down_sets(ground) if masks <= b.masks]


def complement_set(S: ReceiverSet, K: int, allow_empty: bool = False) -> ReceiverSet:
    """
    The set [1:K] minus S.

    Args:
        S: A subset of [1:K]
        K: Number of receivers
        allow_empty: Return the empty set instead of raising when S = [1:K]

    Returns:
        The complement of S
    """
    full = ReceiverSet.full(K)
    if not S.issubset(full):
        raise LatticeError(f"{S!r} is not a subset of [1:{K}]")
    result = full - S
    if not result and not allow_empty:
        raise LatticeError(f"the complement of {S.label(K)} in [1:{K}] is empty")
    return result
