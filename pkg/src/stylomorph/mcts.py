"""Search for short transformation sequences that change attribution.

UCT tree search over the transform action space. Rewards come straight
from the classifier: 1 - P(true author) when evading, P(target author)
when impersonating. Each iteration selects by upper confidence bound,
expands one untried action (chosen by the seeded stream), evaluates the
new state, runs a short random rollout, evaluates the end state, and
backs the rollout reward up the path. The search stops the moment any
evaluated state flips the prediction the desired way.

A uniform-random restart baseline with the same evaluation budget and
success predicate provides the control condition.
"""

from __future__ import annotations

import copy
import json
import math
import random
from dataclasses import dataclass, field

from .attrib.model import AttributionModel
from .frontend.astnodes import Program
from .frontend.printer import print_source
from .transforms import TransformAction, apply, enumerate_actions

UNTARGETED = "untargeted"
TARGETED = "targeted"


class NoActions(Exception):
    pass


@dataclass(frozen=True)
class Objective:
    kind: str
    author: str  # true author when untargeted, target author when targeted

    @staticmethod
    def evade_author(true_author: str) -> "Objective":
        return Objective(UNTARGETED, true_author)

    @staticmethod
    def imitate(target_author: str) -> "Objective":
        return Objective(TARGETED, target_author)

    def success(self, predicted: str) -> bool:
        if self.kind == UNTARGETED:
            return predicted != self.author
        return predicted == self.author


@dataclass(frozen=True)
class SearchConfig:
    iterations: int = 500
    max_depth: int = 8
    exploration: float = math.sqrt(2)
    rollout_depth: int = 2
    early_stop: bool = True
    seed: int = 0


@dataclass
class EvasionResult:
    success: bool
    final_code: str
    predicted: str
    true_author: str
    sequence: list[TransformAction]
    iterations_used: int
    reward: float = 0.0


def reward(model: AttributionModel, ast: Program,
           objective: Objective) -> float:
    """Score in [0, 1]; higher is closer to the objective."""
    _, dist = model.predict_source(print_source(ast))
    if objective.kind == UNTARGETED:
        return 1.0 - dist.get(objective.author, 0.0)
    return dist.get(objective.author, 0.0)


class _Eval:
    """Shared scorer: caches nothing across states, counts evaluations,
    and tracks the best state seen."""

    def __init__(self, model: AttributionModel, objective: Objective,
                 true_author: str):
        self.model = model
        self.objective = objective
        self.true_author = true_author
        self.best_reward = -1.0
        self.best_code = ""
        self.best_predicted = ""
        self.best_sequence: list[TransformAction] = []
        self.hit: EvasionResult | None = None

    def score(self, ast: Program,
              sequence: list[TransformAction]) -> tuple[float, bool]:
        code = print_source(ast)
        predicted, dist = self.model.predict_source(code)
        if self.objective.kind == UNTARGETED:
            value = 1.0 - dist.get(self.objective.author, 0.0)
        else:
            value = dist.get(self.objective.author, 0.0)
        if value > self.best_reward:
            self.best_reward = value
            self.best_code = code
            self.best_predicted = predicted
            self.best_sequence = list(sequence)
        won = self.objective.success(predicted)
        if won and self.hit is None:
            self.hit = EvasionResult(
                success=True, final_code=code, predicted=predicted,
                true_author=self.true_author, sequence=list(sequence),
                iterations_used=0, reward=value)
        return value, won

    def result(self, iterations: int) -> EvasionResult:
        if self.hit is not None:
            self.hit.iterations_used = iterations
            return self.hit
        return EvasionResult(
            success=False, final_code=self.best_code,
            predicted=self.best_predicted, true_author=self.true_author,
            sequence=self.best_sequence, iterations_used=iterations,
            reward=self.best_reward)


@dataclass
class SearchNode:
    state: Program
    sequence: list[TransformAction]
    parent: "SearchNode | None" = None
    action_from_parent: TransformAction | None = None
    visits: int = 0
    total_reward: float = 0.0
    children: list["SearchNode"] = field(default_factory=list)
    untried: list[TransformAction] | None = None

    @property
    def depth(self) -> int:
        return len(self.sequence)

    def ensure_actions(self) -> None:
        if self.untried is None:
            self.untried = enumerate_actions(self.state)

    def uct_child(self, c: float) -> "SearchNode":
        log_n = math.log(self.visits)
        best, best_score = None, -1.0
        for child in self.children:
            score = (child.total_reward / child.visits
                     + c * math.sqrt(log_n / child.visits))
            if score > best_score:
                best, best_score = child, score
        return best


def _backprop(node: SearchNode | None, value: float) -> None:
    while node is not None:
        node.visits += 1
        node.total_reward += value
        node = node.parent


def _rollout(state: Program, sequence: list[TransformAction],
             rng: random.Random, config: SearchConfig
             ) -> tuple[Program, list[TransformAction]]:
    for _ in range(config.rollout_depth):
        if len(sequence) >= config.max_depth:
            break
        actions = enumerate_actions(state)
        if not actions:
            break
        action = rng.choice(actions)
        state = apply(state, action)
        sequence = sequence + [action]
    return state, sequence


def evade(ast: Program, model: AttributionModel, objective: Objective,
          config: SearchConfig | None = None,
          true_author: str | None = None,
          trace_path: str | None = None) -> EvasionResult:
    """UCT search; deterministic given config.seed."""
    config = config or SearchConfig()
    rng = random.Random(config.seed)
    if true_author is None:
        true_author = objective.author if objective.kind == UNTARGETED \
            else model.predict_source(print_source(ast))[0]
    scorer = _Eval(model, objective, true_author)
    trace = open(trace_path, "w", encoding="utf-8") if trace_path else None
    try:
        root = SearchNode(state=ast, sequence=[])
        _, won = scorer.score(ast, [])
        if won and config.early_stop:
            return scorer.result(0)
        root.ensure_actions()
        if not root.untried:
            return scorer.result(0)
        iterations = 0
        while iterations < config.iterations:
            iterations += 1
            node = root
            # select
            while not node.untried and node.children \
                    and node.depth < config.max_depth:
                node = node.uct_child(config.exploration)
            # expand
            stop = None
            if node.untried and node.depth < config.max_depth:
                action = node.untried.pop(
                    rng.randrange(len(node.untried)))
                child = SearchNode(
                    state=apply(node.state, action),
                    sequence=node.sequence + [action],
                    parent=node, action_from_parent=action)
                child.ensure_actions()
                node.children.append(child)
                node = child
                value, won = scorer.score(node.state, node.sequence)
                if trace:
                    trace.write(json.dumps(
                        {"iteration": iterations, "depth": node.depth,
                         "reward": value,
                         "action": node.action_from_parent.describe()})
                        + "\n")
                if won and config.early_stop:
                    stop = value
            if stop is None:
                end_state, end_seq = _rollout(node.state, node.sequence,
                                              rng, config)
                value, won = scorer.score(end_state, end_seq)
                if won and config.early_stop:
                    stop = value
            _backprop(node, value if stop is None else stop)
            if stop is not None:
                break
        return scorer.result(iterations)
    finally:
        if trace:
            trace.close()


def random_baseline(ast: Program, model: AttributionModel,
                    objective: Objective, budget: int = 500,
                    seed: int = 0, max_depth: int = 8,
                    true_author: str | None = None) -> EvasionResult:
    """Random restarts with the same evaluation budget and predicate."""
    rng = random.Random(seed)
    if true_author is None:
        true_author = objective.author if objective.kind == UNTARGETED \
            else model.predict_source(print_source(ast))[0]
    scorer = _Eval(model, objective, true_author)
    _, won = scorer.score(ast, [])
    if won:
        return scorer.result(0)
    if not enumerate_actions(ast):
        return scorer.result(0)
    used = 0
    while used < budget:
        state, sequence = ast, []
        while used < budget and len(sequence) < max_depth:
            actions = enumerate_actions(state)
            if not actions:
                break
            action = rng.choice(actions)
            state = apply(state, action)
            sequence = sequence + [action]
            used += 1
            _, won = scorer.score(state, sequence)
            if won:
                return scorer.result(used)
    return scorer.result(used)
