"""
Symbolic achievable-region generation.

build_general_region writes the superposition-coding region for any two
messages and any expansion F; build_nested_region specializes it to a private
message plus a message for every receiver. explicit_region returns the
projected closed forms (and the smaller-expansion literal regions) used as
regression targets.
"""

import logging
from typing import Callable, Dict, List, Sequence

from rate_regions.models.lattice import (
    ReceiverSet,
    SetFamily,
    complement_set,
    down_set,
    family_of_down_sets,
    family_of_down_sets_containing,
    messages_for_receiver,
    power_family,
    up_set,
)
from rate_regions.models.linear import Bound, Equality, Inequality, LinearForm, MutualInfoAtom
from rate_regions.models.messages import (
    MessageSpec,
    decomposition_equalities,
    message_variable,
    reconstruction_rate,
    split_variable,
    split_variables,
    validate_expansion,
)
from rate_regions.models.polyhedra import SymbolicPolyhedron
from rate_regions.utils.errors import MessageSpecError

logger = logging.getLogger(__name__)


def _sum_forms(forms) -> LinearForm:
    total = LinearForm()
    for form in forms:
        total = total + form
    return total


def build_general_region(spec: MessageSpec, F: SetFamily) -> SymbolicPolyhedron:
    """
    Superposition region with up-set rate splitting and non-unique decoding.

    A receiver demanding both messages gets one row per nonempty down-set B of
    its family W_j^F; a receiver demanding one message S_i gets one row per
    down-set containing S_i. The left side is the total reconstruction rate
    over B, the right side I(U_B; Y_j | U_{W_j^F minus B}). Rows whose left
    side is structurally zero are dropped.

    Args:
        spec: The two messages
        F: The expansion, containing both messages

    Returns:
        The symbolic region over message and split rates
    """
    validate_expansion(spec, F)
    K = spec.K
    messages = [message_variable(spec.s1, K), message_variable(spec.s2, K)]
    splits = split_variables(spec, F)
    recon = {T: reconstruction_rate(spec, F, T) for T in F}

    rows: List[Inequality] = []
    for j in range(1, K + 1):
        demanded = spec.demanded_by(j)
        if not demanded:
            continue
        W = messages_for_receiver(F, j)
        if len(demanded) == 2:
            families = family_of_down_sets(W)
        else:
            families = family_of_down_sets_containing(W, demanded)
        for B in families:
            lhs = _sum_forms(recon[T] for T in B)
            if lhs.is_zero():
                continue
            atom = MutualInfoAtom.given_rest(j, B, W)
            rows.append(Inequality(lhs, Bound.of_atoms(atom), label=f"Y{j} B={B.label()}"))

    logger.info(f"built region for {spec.label()} over F={F.label()}: {len(rows)} inequalities")
    return SymbolicPolyhedron(
        tuple(messages + splits),
        tuple(decomposition_equalities(spec, F)),
        tuple(rows),
        K,
        title=f"region E={spec.messages.label()} F={F.label()}",
    )


def _nested_variables(spec: MessageSpec, F: SetFamily):
    private, full = spec.nested_parts()
    K = spec.K
    targets = up_set(F, [private])
    r_private = message_variable(private, K)
    r_common = message_variable(full, K)
    splits = [split_variable(private, T, K) for T in targets]
    split_names = {T: v.name for T, v in zip(targets, splits)}
    equality = Equality(
        LinearForm.variable(r_private.name) - LinearForm.total(split_names.values()),
        label=f"split {private.label(K)}",
    )
    return private, full, r_private, r_common, splits, split_names, equality


def build_nested_region(spec: MessageSpec, F: SetFamily, reduced: bool = False) -> SymbolicPolyhedron:
    """
    Region for a private message M_{S_p} and a message for every receiver.

    The common message is never split. For each private receiver j:
    R_common + R_private <= I(U_{W_j^F}; Y_j), and split-rate rows over the
    down-sets of W_j^F without the full set. For each other receiver i:
    R_common plus the splits aimed at sets containing S_p and i is bounded by
    I(U_{W_i^F}; Y_i).

    Args:
        spec: A nested spec whose larger message is demanded by all receivers
        F: The expansion
        reduced: Enumerate only down-sets of the split targets, informing the
            down-closure in W_j^F. Same feasible set, far fewer rows.

    Returns:
        The symbolic region
    """
    if not spec.is_nested():
        raise MessageSpecError(f"{spec.label()} is not nested")
    validate_expansion(spec, F)
    K = spec.K
    private, full, r_private, r_common, splits, split_names, equality = _nested_variables(spec, F)
    targets = SetFamily(split_names, K)

    rows: List[Inequality] = []
    for j in private.members():
        W = messages_for_receiver(F, j)
        rows.append(Inequality(
            LinearForm.total([r_common.name, r_private.name]),
            Bound.of_atoms(MutualInfoAtom(j, W, SetFamily([], K))),
            label=f"Y{j} total",
        ))
        if reduced:
            for B in family_of_down_sets(targets.without(full)):
                informed = down_set(W, B)
                lhs = LinearForm.total(split_names[T] for T in B)
                atom = MutualInfoAtom.given_rest(j, informed, W)
                rows.append(Inequality(lhs, Bound.of_atoms(atom), label=f"Y{j} B={B.label()}"))
        else:
            for B in family_of_down_sets(W.without(full)):
                lhs = LinearForm.total(split_names[T] for T in B if T in split_names)
                if lhs.is_zero():
                    continue
                atom = MutualInfoAtom.given_rest(j, B, W)
                rows.append(Inequality(lhs, Bound.of_atoms(atom), label=f"Y{j} B={B.label()}"))

    for i in (full - private).members():
        W = messages_for_receiver(F, i)
        reach = up_set(F, [private | ReceiverSet.singleton(i)])
        lhs = LinearForm.variable(r_common.name) + LinearForm.total(split_names[T] for T in reach)
        rows.append(Inequality(
            lhs,
            Bound.of_atoms(MutualInfoAtom(i, W, SetFamily([], K))),
            label=f"Y{i} common",
        ))

    logger.info(f"built nested region for {spec.label()} over F={F.label()}: {len(rows)} inequalities")
    return SymbolicPolyhedron(
        tuple([r_private, r_common] + splits),
        (equality,),
        tuple(rows),
        K,
        title=f"nested region E={spec.messages.label()} F={F.label()}" + (" (reduced)" if reduced else ""),
    )


class _Atoms:
    """Atom shorthands over the full power family for one K."""

    def __init__(self, K: int):
        self.K = K
        self.P = power_family(K)
        self.empty = SetFamily([], K)

    def W(self, j: int) -> SetFamily:
        return messages_for_receiver(self.P, j)

    def whole(self, j: int) -> MutualInfoAtom:
        """I(U_{W_j^P}; Y_j)."""
        return MutualInfoAtom(j, self.W(j), self.empty)

    def below(self, j: int, generators: Sequence[ReceiverSet]) -> MutualInfoAtom:
        """I(U_D; Y_j | U_{W_j^P minus D}) with D the down-set of generators in W_j^P."""
        informed = down_set(self.W(j), generators)
        return MutualInfoAtom.given_rest(j, informed, self.W(j))

    def aux(self, j: int, informed: Sequence[ReceiverSet], conditioned: Sequence[ReceiverSet] = ()) -> MutualInfoAtom:
        """I(U_informed; Y_j | U_conditioned) for literal smaller-expansion regions."""
        return MutualInfoAtom(j, SetFamily(informed, self.K), SetFamily(conditioned, self.K))


def _names(K: int):
    full = ReceiverSet.full(K)
    last = ReceiverSet.singleton(K)
    not_last = complement_set(last, K)
    if K < 2:
        return full, not_last, None, None
    before_last = ReceiverSet.singleton(K - 1)
    not_before_last = complement_set(before_last, K)
    not_both = complement_set(before_last | last, K, allow_empty=True)
    return full, not_last, not_before_last, not_both


def _region(spec: MessageSpec, rows: List[Inequality], title: str) -> SymbolicPolyhedron:
    K = spec.K
    variables = (message_variable(spec.s1, K), message_variable(spec.s2, K))
    return SymbolicPolyhedron(variables, (), tuple(rows), K, title=title)


def _row(terms: Dict[str, int], *atoms: MutualInfoAtom, label: str = "") -> Inequality:
    return Inequality(LinearForm(terms), Bound.of_atoms(*atoms), label=label)


def _two_order(K: int) -> SymbolicPolyhedron:
    a = _Atoms(K)
    _, nl, nbl, both = _names(K)
    spec = MessageSpec(nl, nbl, K)
    r_nl, r_nbl = message_variable(nl, K).name, message_variable(nbl, K).name
    pair = {r_nl: 1, r_nbl: 1}
    private = list(both.members()) if both else []
    rows = [
        _row({r_nbl: 1}, a.whole(K), label=f"Y{K}"),
        _row({r_nl: 1}, a.whole(K - 1), label=f"Y{K - 1}"),
    ]
    rows += [_row(pair, a.whole(j), label=f"Y{j} total") for j in private]
    rows += [_row(pair, a.below(j, [nl]), a.whole(K), label=f"Y{j}+Y{K}") for j in private + [K - 1]]
    rows += [_row(pair, a.below(j, [nbl]), a.whole(K - 1), label=f"Y{j}+Y{K - 1}") for j in private + [K]]
    rows += [
        _row({r_nl: 2, r_nbl: 2}, a.below(j, [nbl, nl]), a.whole(K), a.whole(K - 1), label=f"Y{j}+Y{K - 1}+Y{K}")
        for j in private
    ]
    return _region(spec, rows, f"two order-(K-1) messages, K={K}")


def _one_common(K: int) -> SymbolicPolyhedron:
    a = _Atoms(K)
    full, nl, _, _ = _names(K)
    spec = MessageSpec(nl, full, K)
    r_p, r_c = message_variable(nl, K).name, message_variable(full, K).name
    pair = {r_p: 1, r_c: 1}
    rows = [_row({r_c: 1}, a.whole(K), label=f"Y{K}")]
    rows += [_row(pair, a.whole(j), label=f"Y{j} total") for j in nl.members()]
    rows += [_row(pair, a.below(j, [nl]), a.whole(K), label=f"Y{j}+Y{K}") for j in nl.members()]
    return _region(spec, rows, f"nested messages, one common receiver, K={K}")


def _two_common(K: int) -> SymbolicPolyhedron:
    a = _Atoms(K)
    full, nl, nbl, both = _names(K)
    spec = MessageSpec(both, full, K)
    r_p, r_c = message_variable(both, K).name, message_variable(full, K).name
    pair = {r_p: 1, r_c: 1}
    private = list(both.members())
    rows = [_row({r_c: 1}, a.whole(i), label=f"Y{i}") for i in (K - 1, K)]
    rows += [_row(pair, a.whole(j), label=f"Y{j} total") for j in private]
    rows += [_row(pair, a.below(j, [nbl]), a.whole(K - 1), label=f"Y{j}+Y{K - 1}") for j in private]
    rows += [_row(pair, a.below(j, [nl]), a.whole(K), label=f"Y{j}+Y{K}") for j in private]
    rows += [
        _row({r_p: 1, r_c: 2}, a.below(j, [both]), a.whole(K - 1), a.whole(K), label=f"Y{j}+Y{K - 1}+Y{K}")
        for j in private
    ]
    rows += [
        _row(
            {r_p: 2, r_c: 2},
            a.below(j1, [both]),
            a.below(j2, [nbl, nl]),
            a.whole(K - 1),
            a.whole(K),
            label=f"Y{j1}+Y{j2}+Y{K - 1}+Y{K}",
        )
        for j1 in private
        for j2 in private
    ]
    return _region(spec, rows, f"nested messages, two common receivers, K={K}")


def _three_common(K: int) -> SymbolicPolyhedron:
    full = ReceiverSet.full(K)
    tail = ReceiverSet.from_members([K - 2, K - 1, K])
    spec = MessageSpec(full - tail, full, K)
    region = build_nested_region(spec, power_family(K), reduced=True)
    return SymbolicPolyhedron(
        region.variables, region.equalities, region.inequalities, K,
        title=f"nested messages, three common receivers, K={K}",
    )


def _smaller_one_common(K: int) -> SymbolicPolyhedron:
    a = _Atoms(K)
    full, nl, _, _ = _names(K)
    spec = MessageSpec(nl, full, K)
    r_p, r_c = message_variable(nl, K).name, message_variable(full, K).name
    pair = {r_p: 1, r_c: 1}
    cloud = a.aux(K, [full])
    rows = [_row({r_c: 1}, cloud, label=f"Y{K}")]
    rows += [_row(pair, a.aux(j, [nl]), label=f"Y{j} total") for j in nl.members()]
    rows += [_row(pair, a.aux(j, [nl], [full]), cloud, label=f"Y{j}+Y{K}") for j in nl.members()]
    return _region(spec, rows, f"nested messages, one common receiver, F=E, K={K}")


def _smaller_two_common(K: int) -> SymbolicPolyhedron:
    a = _Atoms(K)
    full, nl, nbl, both = _names(K)
    spec = MessageSpec(both, full, K)
    r_p, r_c = message_variable(both, K).name, message_variable(full, K).name
    pair = {r_p: 1, r_c: 1}
    via_before_last = a.aux(K - 1, [nl, full])
    via_last = a.aux(K, [nbl, full])
    rows = [
        _row({r_c: 1}, via_before_last, label=f"Y{K - 1}"),
        _row({r_c: 1}, via_last, label=f"Y{K}"),
    ]
    for j in both.members():
        rows += [
            _row(pair, a.aux(j, [both]), label=f"Y{j} total"),
            _row(pair, a.aux(j, [both], [full, nl]), via_before_last, label=f"Y{j}+Y{K - 1}"),
            _row(pair, a.aux(j, [both], [full, nbl]), via_last, label=f"Y{j}+Y{K}"),
            _row({r_p: 1, r_c: 2}, a.aux(j, [both], [nl, nbl]), via_before_last, via_last,
                 label=f"Y{j}+Y{K - 1}+Y{K}"),
            _row({r_p: 2, r_c: 2}, a.aux(j, [both], [nl, nbl]), a.aux(j, [both], [full]),
                 via_before_last, via_last, label=f"Y{j}x2+Y{K - 1}+Y{K}"),
        ]
    return _region(spec, rows, f"nested messages, two common receivers, F=up(E), K={K}")


def _smaller_two_order(K: int) -> SymbolicPolyhedron:
    a = _Atoms(K)
    full, nl, nbl, both = _names(K)
    spec = MessageSpec(nl, nbl, K)
    r_nl, r_nbl = message_variable(nl, K).name, message_variable(nbl, K).name
    pair = {r_nl: 1, r_nbl: 1}
    via_before_last = a.aux(K - 1, [nl, full])
    via_last = a.aux(K, [nbl, full])
    rows = [
        _row({r_nbl: 1}, via_last, label=f"Y{K}"),
        _row({r_nl: 1}, via_before_last, label=f"Y{K - 1}"),
    ]
    private = list(both.members()) if both else []
    for j in private:
        rows += [
            _row(pair, a.aux(j, [both]), label=f"Y{j} total"),
            _row(pair, a.aux(j, [both], [full, nl]), via_before_last, label=f"Y{j}+Y{K - 1}"),
            _row(pair, a.aux(j, [both], [full, nbl]), via_last, label=f"Y{j}+Y{K}"),
        ]
    rows += [
        _row(pair, a.aux(K - 1, [nl], [full]), via_last, label=f"Y{K - 1}+Y{K}"),
        _row(pair, a.aux(K, [nbl], [full]), via_before_last, label=f"Y{K}+Y{K - 1}"),
    ]
    rows += [
        _row({r_nl: 2, r_nbl: 2}, a.aux(j, [both], [full]), via_before_last, via_last,
             label=f"Y{j}+Y{K - 1}+Y{K}")
        for j in private
    ]
    return _region(spec, rows, f"two order-(K-1) messages, F=up(E)+Sp, K={K}")


EXPLICIT_REGIONS: Dict[str, Callable[[int], SymbolicPolyhedron]] = {
    "two_order_k_minus_1": _two_order,
    "one_common": _one_common,
    "two_common": _two_common,
    "three_common": _three_common,
    "smaller_f_one_common": _smaller_one_common,
    "smaller_f_two_common": _smaller_two_common,
    "smaller_f_two_order": _smaller_two_order,
}

MIN_RECEIVERS = {
    "two_order_k_minus_1": 2,
    "one_common": 2,
    "two_common": 3,
    "three_common": 4,
    "smaller_f_one_common": 3,
    "smaller_f_two_common": 3,
    "smaller_f_two_order": 3,
}


def explicit_region(which: str, K: int) -> SymbolicPolyhedron:
    """
    Closed-form region for one of the covered message sets.

    The projected forms keep only message rates; three_common keeps its split
    rates and is a feasibility system.

    Args:
        which: A key of EXPLICIT_REGIONS
        K: Number of receivers

    Returns:
        The symbolic region
    """
    if which not in EXPLICIT_REGIONS:
        raise MessageSpecError(f"unknown explicit region '{which}', expected one of {sorted(EXPLICIT_REGIONS)}")
    if K < MIN_RECEIVERS[which]:
        raise MessageSpecError(f"explicit region '{which}' needs K >= {MIN_RECEIVERS[which]}")
    return EXPLICIT_REGIONS[which](K)


def message_spec_for(which: str, K: int) -> MessageSpec:
    """The message set an explicit region is written for."""
    region = explicit_region(which, K)
    first, second = (v.origin for v in region.message_variables)
    return MessageSpec(first, second, K)
