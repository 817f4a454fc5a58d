"""The retrieval stages: cued/free probe generation, one-pass attempt loops,
the metamemory comparator stop rule, the component cascade, outcome
classification, and attempt-based chronometry."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionError, ParameterError
from .lexicon import COMPONENTS, Lexicon
from .network import ComponentNetwork
from .patterns import BipolarPattern, overlap, slot_match


class Classification(str, Enum):
    RESOLVED = "Resolved"
    TOT = "TOT"
    NO_ACCESS = "NoAccess"


@dataclass(frozen=True)
class RecallParams:
    """Knobs of the retrieval loop.

    `cue_fraction` gives the per-component fraction of probe units clamped
    to the metamemory reference (0 = free recall). `link_gain` is the cue
    bonus a component receives when the previous component in the cascade
    resolved. Chronometry: each attempt costs `spike_ms`, successive
    attempts are separated by `interval_ms`. `strength_threshold` labels a
    TOT strong. With `fixed_cue_per_episode` the cue indices are drawn once
    per component per episode instead of per attempt.
    """

    cue_fraction: dict[str, float]
    max_attempts: int = 64
    link_gain: float = 0.0
    spike_ms: float = 1.0
    interval_ms: float = 10.0
    strength_threshold: float = 0.7
    fixed_cue_per_episode: bool = False

    def __post_init__(self):
        if tuple(sorted(self.cue_fraction)) != tuple(sorted(COMPONENTS)):
            raise ParameterError(f"cue_fraction must cover exactly {COMPONENTS}")
        for comp, q in self.cue_fraction.items():
            if not 0.0 <= q <= 1.0:
                raise ParameterError(f"cue fraction for {comp} must be in [0, 1], got {q}")
        if self.max_attempts < 1:
            raise ParameterError("max_attempts must be >= 1")
        if not 0.0 <= self.link_gain <= 1.0:
            raise ParameterError(f"link gain must be in [0, 1], got {self.link_gain}")
        if self.spike_ms <= 0:
            raise ParameterError(f"spike_ms must be > 0, got {self.spike_ms}")
        if self.interval_ms < 0:
            raise ParameterError(f"interval_ms must be >= 0, got {self.interval_ms}")
        if not 0.0 < self.strength_threshold < 1.0:
            raise ParameterError(
                f"strength threshold must be in (0, 1), got {self.strength_threshold}"
            )

    @classmethod
    def with_uniform_cue(cls, q: float, **kwargs) -> "RecallParams":
        return cls(cue_fraction={comp: q for comp in COMPONENTS}, **kwargs)


@dataclass(frozen=True)
class ComponentOutcome:
    """Trace of one component's attempt loop.

    `best_overlap_frac` is the maximum over attempts of
    overlap(output, reference) / N and equals 1 iff some attempt matched
    exactly; `best_output` is the output that achieved it (None if the
    component was never attempted).
    """

    resolved: bool
    attempts: int
    best_overlap_frac: float
    elapsed_ms: float
    best_output: BipolarPattern | None = None


def skipped_outcome() -> ComponentOutcome:
    """Outcome of a component the cascade never reached."""
    return ComponentOutcome(False, 0, 0.0, 0.0, None)


@dataclass(frozen=True)
class RecallOutcome:
    """Full trace of one recall episode for one word."""

    word_id: str | None
    selected: bool
    completeness: float
    components: dict[str, ComponentOutcome]
    classification: Classification
    tot_strength: float
    partial_info: dict[str, bool]
    total_time_ms: float


def chronometry(attempts: int, spike_ms: float, interval_ms: float) -> float:
    """Retrieval time: attempts * spike_ms + (attempts - 1) * interval_ms.

    Zero attempts take zero time. Affine in the attempt count with slope
    spike_ms + interval_ms.
    """
    if attempts < 0:
        raise ParameterError("attempts must be >= 0")
    if spike_ms < 0 or interval_ms < 0:
        raise ParameterError("chronometry durations must be >= 0")
    if attempts == 0:
        return 0.0
    return attempts * spike_ms + (attempts - 1) * interval_ms


def generate_probe(
    reference: BipolarPattern, cue_indices, rng: np.random.Generator
) -> BipolarPattern:
    """One retrieval probe: random +1/-1 units with the cue indices clamped
    to the reference.

    Always consumes len(reference) draws, independent of the cue size.
    """
    n = len(reference)
    idx = np.asarray(list(cue_indices), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise DimensionError("cue index out of range")
    probe = rng.integers(0, 2, size=n) * 2 - 1
    probe[idx] = reference.units[idx]
    return BipolarPattern(probe)


def compare(output: BipolarPattern, reference: BipolarPattern) -> bool:
    """Comparator stage: exact unit-wise equality."""
    if len(output) != len(reference):
        raise DimensionError(f"length mismatch: {len(output)} vs {len(reference)}")
    return output == reference


def recall_component(
    net: ComponentNetwork,
    reference: BipolarPattern,
    q: float,
    max_attempts: int,
    rng: np.random.Generator,
    *,
    spike_ms: float = 1.0,
    interval_ms: float = 10.0,
    cue_indices=None,
) -> ComponentOutcome:
    """Attempt loop for one component: probe, retrieve once, compare, repeat.

    Stops at the first exact match against `reference` or after
    `max_attempts`. floor(q * N) cue indices are redrawn uniformly per
    attempt unless explicit `cue_indices` pin them for the whole loop.
    """
    if len(reference) != net.n:
        raise DimensionError(
            f"reference length {len(reference)} != network size {net.n}"
        )
    if not 0.0 <= q <= 1.0:
        raise ParameterError(f"cue fraction must be in [0, 1], got {q}")
    if max_attempts < 1:
        raise ParameterError("max_attempts must be >= 1")
    n = net.n
    k = math.floor(q * n)
    best_frac = -1.0
    best_output: BipolarPattern | None = None
    for attempt in range(1, max_attempts + 1):
        idx = rng.choice(n, size=k, replace=False) if cue_indices is None else cue_indices
        probe = generate_probe(reference, idx, rng)
        output = net.retrieve_once(probe)
        frac = overlap(output, reference) / n
        if frac > best_frac:
            best_frac, best_output = frac, output
        if compare(output, reference):
            return ComponentOutcome(
                True, attempt, 1.0, chronometry(attempt, spike_ms, interval_ms), output
            )
    return ComponentOutcome(
        False,
        max_attempts,
        best_frac,
        chronometry(max_attempts, spike_ms, interval_ms),
        best_output,
    )


def classify_outcome(
    selected: bool, outcomes: dict[str, ComponentOutcome]
) -> tuple[Classification, float]:
    """Classification and TOT strength from the cascade trace.

    NoAccess when selection failed; Resolved when every component resolved;
    otherwise TOT with strength = best observed phonological overlap
    fraction (clamped at 0). Total over valid inputs.
    """
    if not selected:
        return Classification.NO_ACCESS, 0.0
    if all(outcomes[comp].resolved for comp in COMPONENTS):
        return Classification.RESOLVED, 1.0
    return Classification.TOT, max(0.0, outcomes["phonological"].best_overlap_frac)


def is_strong(tot_strength: float, strength_threshold: float) -> bool:
    return tot_strength >= strength_threshold


def recall_word(
    lex: Lexicon,
    semantic_input: BipolarPattern,
    params: RecallParams,
    rng: np.random.Generator,
    bonuses: dict[str, float] | None = None,
) -> RecallOutcome:
    """One full recall episode: selection, masking, component cascade.

    Selection completeness c masks floor((1 - c) * n) units of each
    component network for this episode. Components run in the order
    semantic, lexical, phonological; each gets cue fraction
    min(1, q + link_gain * [previous resolved]) and the cascade stops at the
    first component that fails to resolve (later components count as
    unattempted), so Resolved means all three resolved and a selected word
    whose phonological form did not resolve is a TOT.
    """
    selection = lex.select_node(semantic_input, bonuses=bonuses)
    if selection is None:
        return RecallOutcome(
            word_id=None,
            selected=False,
            completeness=0.0,
            components={comp: skipped_outcome() for comp in COMPONENTS},
            classification=Classification.NO_ACCESS,
            tot_strength=0.0,
            partial_info={},
            total_time_ms=0.0,
        )
    node, completeness = selection
    mask_fraction = 1.0 - completeness
    episode_nets = {}
    for comp in COMPONENTS:
        net = node.components[comp]
        episode_nets[comp] = net.apply_mask(mask_fraction, rng) if mask_fraction > 0 else net

    outcomes: dict[str, ComponentOutcome] = {}
    previous_resolved = False
    reached = True
    for i, comp in enumerate(COMPONENTS):
        if not reached:
            outcomes[comp] = skipped_outcome()
            continue
        gain = params.link_gain if (i > 0 and previous_resolved) else 0.0
        q_eff = min(1.0, params.cue_fraction[comp] + gain)
        fixed_idx = None
        if params.fixed_cue_per_episode:
            k = math.floor(q_eff * episode_nets[comp].n)
            fixed_idx = rng.choice(episode_nets[comp].n, size=k, replace=False)
        outcome = recall_component(
            episode_nets[comp],
            node.metamemory_ref[comp],
            q_eff,
            params.max_attempts,
            rng,
            spike_ms=params.spike_ms,
            interval_ms=params.interval_ms,
            cue_indices=fixed_idx,
        )
        outcomes[comp] = outcome
        previous_resolved = outcome.resolved
        if not outcome.resolved:
            reached = False

    classification, tot_strength = classify_outcome(True, outcomes)
    phon = outcomes["phonological"]
    if phon.best_output is not None:
        partial = slot_match(
            phon.best_output, node.metamemory_ref["phonological"], node.slot_map
        )
    else:
        partial = {name: False for name in node.slot_map.names()}
    total_time = sum(outcomes[comp].elapsed_ms for comp in COMPONENTS)
    return RecallOutcome(
        word_id=node.id,
        selected=True,
        completeness=completeness,
        components=outcomes,
        classification=classification,
        tot_strength=tot_strength,
        partial_info=partial,
        total_time_ms=total_time,
    )
