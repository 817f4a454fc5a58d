"""Word nodes, the lexicon, threshold selection with priming, and
deterministic lexicon construction."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, DimensionError, GenerationError, ParameterError
from .network import ComponentNetwork, train
from .patterns import BipolarPattern, SlotMap, hamming, overlap, random_pattern

COMPONENTS = ("semantic", "lexical", "phonological")

_GENERATION_RETRY_BUDGET = 1000


@dataclass(frozen=True, eq=False)
class WordNode:
    """One word: three trained component networks plus metamemory references.

    `truth` holds the originally learned pattern per component; the
    comparator's `metamemory_ref` normally equals it but may be corrupted by
    a scenario. The slot map segments the phonological component.
    """

    id: str
    components: dict[str, ComponentNetwork]
    truth: dict[str, BipolarPattern]
    metamemory_ref: dict[str, BipolarPattern]
    slot_map: SlotMap
    frequency: float = 1.0

    def __post_init__(self):
        if not self.id:
            raise ParameterError("word id must be non-empty")
        if self.frequency < 0:
            raise ParameterError("word frequency must be >= 0")
        for mapping, what in (
            (self.components, "components"),
            (self.truth, "truth"),
            (self.metamemory_ref, "metamemory_ref"),
        ):
            if tuple(sorted(mapping)) != tuple(sorted(COMPONENTS)):
                raise ParameterError(f"{what} must cover exactly {COMPONENTS}")
        for comp in COMPONENTS:
            n = self.components[comp].n
            if len(self.truth[comp]) != n or len(self.metamemory_ref[comp]) != n:
                raise DimensionError(
                    f"{comp} pattern length does not match its network size {n}"
                )
        if self.slot_map.length != self.components["phonological"].n:
            raise DimensionError("slot map length must match the phonological component")

    def component_length(self, component: str) -> int:
        return self.components[component].n


@dataclass(eq=False)
class Lexicon:
    """All word nodes plus the selection threshold and priming state.

    Nodes are immutable; `priming_state` is the only mutable part. Trials
    running in parallel must snapshot effective bonuses up front instead of
    sharing the decaying state.
    """

    nodes: tuple[WordNode, ...]
    selection_threshold: float
    priming_state: dict[str, list[list]] = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 < self.selection_threshold <= 1.0:
            raise ParameterError(
                f"selection threshold must be in (0, 1], got {self.selection_threshold}"
            )
        ids = [node.id for node in self.nodes]
        if len(set(ids)) != len(ids):
            raise ConfigError("lexicon", "word ids must be unique")
        for comp in COMPONENTS:
            lengths = {node.component_length(comp) for node in self.nodes}
            if len(lengths) > 1:
                raise DimensionError(f"nodes disagree on {comp} length: {sorted(lengths)}")

    def node_by_id(self, word_id: str) -> WordNode:
        for node in self.nodes:
            if node.id == word_id:
                return node
        raise ConfigError("lexicon", f"unknown word id {word_id!r}")

    def component_length(self, component: str) -> int:
        if not self.nodes:
            raise ConfigError("lexicon", "lexicon has no word nodes")
        return self.nodes[0].component_length(component)

    def effective_bonuses(self) -> dict[str, float]:
        """Current priming bonus per word id (entries still within decay)."""
        out: dict[str, float] = {}
        for word_id, entries in self.priming_state.items():
            total = sum(bonus for bonus, remaining in entries if remaining > 0)
            if total > 0:
                out[word_id] = total
        return out

    def prime(self, word_id: str, bonus: float, decay_trials: int) -> "Lexicon":
        """Grant `word_id` a selection bonus for the next `decay_trials` selections."""
        self.node_by_id(word_id)
        if not 0.0 <= bonus <= 1.0:
            raise ParameterError(f"priming bonus must be in [0, 1], got {bonus}")
        if decay_trials < 0:
            raise ParameterError("decay_trials must be >= 0")
        if bonus > 0 and decay_trials > 0:
            self.priming_state.setdefault(word_id, []).append([bonus, decay_trials])
        return self

    def _decay_priming(self) -> None:
        for word_id in list(self.priming_state):
            entries = [
                [bonus, remaining - 1]
                for bonus, remaining in self.priming_state[word_id]
                if remaining - 1 > 0
            ]
            if entries:
                self.priming_state[word_id] = entries
            else:
                del self.priming_state[word_id]

    def select_node(
        self, semantic_input: BipolarPattern, bonuses: dict[str, float] | None = None
    ):
        """Stage-one word node selection from semantic input.

        Each node scores max(0, overlap / N) plus its priming bonus, capped
        at 1. The highest score wins (ties to the lexicographically smallest
        id) and doubles as the selection completeness; below the threshold
        nothing is selected and None is returned.

        When `bonuses` is None the lexicon's own priming state is used and
        one decay step is consumed; passing an explicit mapping leaves the
        state untouched (snapshot mode for parallel trials).
        """
        if not self.nodes:
            raise ConfigError("lexicon", "lexicon has no word nodes")
        n = self.component_length("semantic")
        if len(semantic_input) != n:
            raise DimensionError(
                f"semantic input length {len(semantic_input)} != lexicon length {n}"
            )
        if bonuses is None:
            bonuses = self.effective_bonuses()
            self._decay_priming()
        best_node = None
        best_score = -1.0
        for node in self.nodes:
            score = max(0.0, overlap(semantic_input, node.truth["semantic"]) / n)
            score = min(1.0, score + bonuses.get(node.id, 0.0))
            if score > best_score or (score == best_score and node.id < best_node.id):
                best_node, best_score = node, score
        if best_score < self.selection_threshold:
            return None
        return best_node, best_score


@dataclass(frozen=True)
class WordSpec:
    """Explicit word declaration: one pattern per component."""

    id: str
    patterns: dict[str, BipolarPattern]
    frequency: float = 1.0


@dataclass(frozen=True)
class GeneratorSpec:
    """Random lexicon declaration: per-component lengths and a minimum
    pairwise Hamming distance between the words of each component."""

    count: int
    lengths: dict[str, int]
    min_pairwise_distance: int = 1


@dataclass(frozen=True)
class LexiconSpec:
    """Declarative lexicon description: explicit words or a generator."""

    selection_threshold: float = 0.3
    words: tuple[WordSpec, ...] | None = None
    generator: GeneratorSpec | None = None
    slots: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if (self.words is None) == (self.generator is None):
            raise ConfigError("lexicon", "declare exactly one of words/generator")


def _generated_patterns(
    gen: GeneratorSpec, component: str, rng: np.random.Generator
) -> list[BipolarPattern]:
    n = gen.lengths[component]
    minimum = gen.min_pairwise_distance
    if minimum > n:
        raise GenerationError(
            f"min pairwise distance {minimum} impossible at {component} length {n}"
        )
    patterns: list[BipolarPattern] = []
    for i in range(gen.count):
        for _ in range(_GENERATION_RETRY_BUDGET):
            candidate = random_pattern(n, rng)
            if all(hamming(candidate, prev) >= minimum for prev in patterns):
                patterns.append(candidate)
                break
        else:
            raise GenerationError(
                f"could not place {component} pattern for word {i} with min "
                f"pairwise distance {minimum} in {_GENERATION_RETRY_BUDGET} tries"
            )
    return patterns


def build_lexicon(spec: LexiconSpec, rng: np.random.Generator) -> Lexicon:
    """Construct a lexicon of trained, undamaged word nodes.

    Deterministic given the stream state. Random generation that cannot
    satisfy the minimum-distance constraint within the retry budget raises
    GenerationError rather than relaxing the constraint.
    """
    if spec.words is not None:
        word_ids = [w.id for w in spec.words]
        frequencies = [w.frequency for w in spec.words]
        per_component = {
            comp: [w.patterns[comp] for w in spec.words] for comp in COMPONENTS
        }
    else:
        gen = spec.generator
        word_ids = [f"w{i}" for i in range(gen.count)]
        frequencies = [1.0] * gen.count
        per_component = {
            comp: _generated_patterns(gen, comp, rng) for comp in COMPONENTS
        }
    phon_length = len(per_component["phonological"][0])
    slot_map = SlotMap(phon_length, dict(spec.slots))
    nodes = []
    for i, word_id in enumerate(word_ids):
        truth = {comp: per_component[comp][i] for comp in COMPONENTS}
        nodes.append(
            WordNode(
                id=word_id,
                components={comp: train([truth[comp]]) for comp in COMPONENTS},
                truth=truth,
                metamemory_ref=dict(truth),
                slot_map=slot_map,
                frequency=frequencies[i],
            )
        )
    return Lexicon(tuple(nodes), spec.selection_threshold)


def corrupt_metamemory(
    node: WordNode, component: str, flips: int, rng: np.random.Generator
) -> WordNode:
    """Return a node whose comparator reference has `flips` units flipped.

    The stored network is untouched: this models a wrong metamemory standard
    (illusory target), not damaged object-level memory.
    """
    if component not in COMPONENTS:
        raise ParameterError(f"unknown component {component!r}")
    n = node.component_length(component)
    if not 0 <= flips <= n:
        raise ParameterError(f"flip count must be in [0, {n}], got {flips}")
    idx = rng.choice(n, size=flips, replace=False)
    refs = dict(node.metamemory_ref)
    refs[component] = refs[component].with_flipped(idx)
    return replace(node, metamemory_ref=refs)
