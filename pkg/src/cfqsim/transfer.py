"""Deterministic state transfer over a counterfactually shared device pair.

The receiver prepares a balanced device, one counterfactual round leaves
the two devices in a payload-dependent entangled pair, and a Hadamard plus
measurement on the sender's device steers the receiver into the payload up
to a known Pauli correction announced with one classical bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .michelson import ALICE_DEVICE, BOB_DEVICE, BeamSplitter, RoundConfig, run_round
from .states import PureState, Qubit, apply_map, postselect

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class TransferTranscript:
    shared: PureState  # normalized device pair before the sender's Hadamard
    sender_outcome: str
    classical_bit: int  # 0: receiver applies identity, 1: phase flip
    receiver_state: Qubit
    fidelity: float
    branch_probability: float


def _shared_pair(alice: Qubit, bob: Qubit, bs: BeamSplitter) -> PureState:
    outcomes = run_round(RoundConfig(bs, alice, bob))
    d1 = outcomes[0]
    if d1.probability <= 0.0:
        raise ValueError("configuration admits no counterfactual branch")
    return d1.posterior.restrict((ALICE_DEVICE, BOB_DEVICE))


def _hadamard_rules(basis: tuple[str, str]):
    # Minus sign on the first basis symbol's image, so the correction table
    # below comes out as: first-symbol outcome -> phase flip.
    plus, minus = basis[1], basis[0]
    return {
        (plus,): [((plus,), _SQRT_HALF), ((minus,), _SQRT_HALF)],
        (minus,): [((plus,), _SQRT_HALF), ((minus,), -_SQRT_HALF)],
    }


def transfer_alice_to_bob(
    payload: Qubit, bs: BeamSplitter, sender_branch: str
) -> TransferTranscript:
    """Transfer the sender's (V, H) payload onto the receiver's (P, B) device.

    ``sender_branch`` selects which measurement outcome to follow; both
    yield the payload exactly (fidelity 1) after the dictated correction,
    each with probability 1/2.
    """
    if tuple(payload.basis) != ("V", "H"):
        raise ValueError("payload must be declared over (V, H)")
    if sender_branch not in ("V", "H"):
        raise ValueError("sender branch must be 'V' or 'H'")
    shared = _shared_pair(payload, Qubit.balanced(("P", "B")), bs)
    rotated = apply_map(shared, (ALICE_DEVICE,), _hadamard_rules(("V", "H")))
    prob, post = postselect(rotated, ALICE_DEVICE, sender_branch)
    received = post.restrict((BOB_DEVICE,))
    amp_p = received.amps.get(("P",), 0j)
    amp_b = received.amps.get(("B",), 0j)
    bit = 0
    if sender_branch == "V":
        amp_b = -amp_b  # phase flip in the (P, B) basis
        bit = 1
    receiver = Qubit(("P", "B"), amp_p, amp_b)
    target_p, target_b = payload.amp1, payload.amp0  # V maps to B, H maps to P
    fid = abs(target_p.conjugate() * amp_p + target_b.conjugate() * amp_b) ** 2
    return TransferTranscript(shared, sender_branch, bit, receiver, float(fid), prob)


def transfer_bob_to_alice(
    payload: Qubit, bs: BeamSplitter, sender_branch: str
) -> TransferTranscript:
    """Mirrored direction: a (P, B) payload lands on the (V, H) device."""
    if tuple(payload.basis) != ("P", "B"):
        raise ValueError("payload must be declared over (P, B)")
    if sender_branch not in ("P", "B"):
        raise ValueError("sender branch must be 'P' or 'B'")
    shared = _shared_pair(Qubit.balanced(("V", "H")), payload, bs)
    rotated = apply_map(shared, (BOB_DEVICE,), _hadamard_rules(("B", "P")))
    prob, post = postselect(rotated, BOB_DEVICE, sender_branch)
    received = post.restrict((ALICE_DEVICE,))
    amp_v = received.amps.get(("V",), 0j)
    amp_h = received.amps.get(("H",), 0j)
    bit = 0
    if sender_branch == "B":
        amp_v = -amp_v  # phase flip in the (V, H) basis, H as the +1 axis
        bit = 1
    receiver = Qubit(("V", "H"), amp_v, amp_h)
    target_v, target_h = payload.amp1, payload.amp0  # P maps to H, B maps to V
    fid = abs(target_v.conjugate() * amp_v + target_h.conjugate() * amp_h) ** 2
    return TransferTranscript(shared, sender_branch, bit, receiver, float(fid), prob)


def transfer_without_correction(payload: Qubit) -> float:
    """Average fidelity when the receiver never applies the correction.

    Averaged over both equally likely measurement branches; equals 1 for
    polar payloads and degrades towards 1/2 at the equator of the device
    Bloch sphere.  Independent of the beam splitter, which only rescales
    the shared pair's yield.
    """
    if tuple(payload.basis) != ("V", "H"):
        raise ValueError("payload must be declared over (V, H)")
    bs = BeamSplitter(0.5)
    shared = _shared_pair(payload, Qubit.balanced(("P", "B")), bs)
    rotated = apply_map(shared, (ALICE_DEVICE,), _hadamard_rules(("V", "H")))
    target_p, target_b = payload.amp1, payload.amp0
    average = 0.0
    for branch in ("V", "H"):
        prob, post = postselect(rotated, ALICE_DEVICE, branch)
        if prob == 0.0:
            continue
        received = post.restrict((BOB_DEVICE,))
        amp_p = received.amps.get(("P",), 0j)
        amp_b = received.amps.get(("B",), 0j)
        average += prob * abs(target_p.conjugate() * amp_p + target_b.conjugate() * amp_b) ** 2
    return float(average)


def transcript_record(transcript: TransferTranscript, payload: Qubit) -> dict:
    """Flat serializable record of one transfer branch."""
    from .states import format_complex

    return {
        "mu": format_complex(payload.amp0),
        "nu": format_complex(payload.amp1),
        "branch": transcript.sender_outcome,
        "bit": transcript.classical_bit,
        "fidelity": transcript.fidelity,
    }
