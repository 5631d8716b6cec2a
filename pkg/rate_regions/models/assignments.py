"""
Named auxiliary component assignments.

The dependent constructions use the smaller expansions of the explicit
regions: a common cloud U_{~} carries the components the common receivers
see, and satellites carry their clouds. The fixed K=3, K=6 and K=7
assignments reproduce hand-built schemes for specific networks.
"""

import logging
from typing import Dict, List

from rate_regions.models.lattice import (
    ReceiverSet,
    complement_set,
    messages_for_receiver,
    power_family,
)
from rate_regions.models.network import (
    INDEPENDENT,
    STRICT,
    AuxAssignment,
    CombinationNetwork,
    canonical_assignment,
)
from rate_regions.utils.errors import AssignmentError

logger = logging.getLogger(__name__)

NAMED_ASSIGNMENTS = (
    "canonical",
    "dependent_one_common",
    "dependent_two_common",
    "dependent_two_order",
    "common_heavy",
    "private_heavy",
    "three_links_direct",
    "three_links_rerouted",
    "six_links_rerouted",
)

# Fixed assignments: auxiliary index -> carried components; unlisted indices carry nothing.
_FIXED: Dict[str, Dict[str, List[str]]] = {
    "common_heavy": {"123": ["123", "23"], "12": ["2", "12"], "13": ["3", "13"], "1": ["1"]},
    "private_heavy": {"123": ["23"], "12": ["2"], "13": ["3"], "1": ["1", "12", "13", "123"]},
    "three_links_direct": {"124": ["124"], "135": ["135"], "236": ["236"]},
    "three_links_rerouted": {"123": ["236"], "124": ["124"], "135": ["135"]},
    "six_links_rerouted": {
        "12345": ["1245"],
        "12347": ["1347"],
        "12357": ["1257"],
        "1235": ["2356"],
        "1237": ["2367"],
        "1346": ["1346"],
    },
}

_FIXED_K = {
    "common_heavy": 3,
    "private_heavy": 3,
    "three_links_direct": 6,
    "three_links_rerouted": 6,
    "six_links_rerouted": 7,
}

_MIN_K = {"dependent_one_common": 2, "dependent_two_common": 3, "dependent_two_order": 3}


def _fixed_assignment(which: str, K: int) -> AuxAssignment:
    P = power_family(K)
    listed = {ReceiverSet.parse(t, K): [ReceiverSet.parse(c, K) for c in comps] for t, comps in _FIXED[which].items()}
    if which in ("common_heavy", "private_heavy"):
        components = listed
    else:
        components = {T: listed.get(T, []) for T in P}
    return AuxAssignment(components, K, INDEPENDENT, which)


def _dependent_assignment(which: str, K: int) -> AuxAssignment:
    P = power_family(K)
    full = ReceiverSet.full(K)
    last = ReceiverSet.singleton(K)
    not_last = complement_set(last, K)
    seen_by_last = messages_for_receiver(P, K)
    if which == "dependent_one_common":
        components = {full: seen_by_last, not_last: P}
        return AuxAssignment(components, K, STRICT, which)
    before_last = ReceiverSet.singleton(K - 1)
    not_before_last = complement_set(before_last, K)
    private = complement_set(before_last | last, K)
    seen_by_before_last = messages_for_receiver(P, K - 1)
    components = {
        full: [S for S in seen_by_before_last if K in S],
        not_last: seen_by_before_last,
        not_before_last: seen_by_last,
        private: P,
    }
    return AuxAssignment(components, K, STRICT, which)


def named_assignment(which: str, net: CombinationNetwork, K: int) -> AuxAssignment:
    """
    Look up a named assignment.

    Args:
        which: One of NAMED_ASSIGNMENTS
        net: The network the assignment will be evaluated on
        K: Number of receivers

    Returns:
        The assignment
    """
    if net.K != K:
        raise AssignmentError(f"network has K={net.K}, assignment requested for K={K}")
    if which == "canonical":
        return canonical_assignment(net, power_family(K))
    if which in _FIXED:
        if K != _FIXED_K[which]:
            raise AssignmentError(f"assignment '{which}' is defined for K={_FIXED_K[which]} only")
        return _fixed_assignment(which, K)
    if which in _MIN_K:
        if K < _MIN_K[which]:
            raise AssignmentError(f"assignment '{which}' needs K >= {_MIN_K[which]}")
        return _dependent_assignment(which, K)
    raise AssignmentError(f"unknown assignment '{which}', expected one of {NAMED_ASSIGNMENTS}")
