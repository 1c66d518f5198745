"""On-the-fly testing of a component against a specification and its platform."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple, Protocol

from .model import DELTA, InterfaceSpec, Iolts, ModelError, check_input_enabled
from .quotient import JointEngine
from .semantics import Determinizer, is_quiescent, tau_closure


class ChoiceReport(NamedTuple):
    internal_choice: bool
    offending: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.internal_choice


def check_internal_choice(m: Iolts) -> ChoiceReport:
    """Inputs are accepted only in quiescent states."""
    bad = tuple(
        s
        for s in sorted(m.reachable)
        if any(x in m.inputs for x in m.succ[s]) and not is_quiescent(m, s)
    )
    return ChoiceReport(not bad, bad)


# -- system under test -------------------------------------------------------


class SutAdapter(Protocol):
    def supply(self, action: str) -> None: ...

    def observe(self) -> str:
        """An output label, or ``delta`` for quiescence."""
        ...


class ModelSut:
    """Simulates an input-enabled model; internal choices come from a seeded RNG."""

    def __init__(self, m: Iolts, seed: int = 0):
        enabled = check_input_enabled(m)
        if not enabled:
            raise ModelError(f"{m.name} is not input-enabled at {', '.join(enabled.offending)}")
        self.model = m
        self.rng = random.Random(seed)
        self.state = m.initial

    def _closure(self) -> list[str]:
        return sorted(tau_closure(self.model, {self.state}))

    def supply(self, action: str) -> None:
        if action not in self.model.inputs:
            raise ModelError(f"{action!r} is not an input of {self.model.name}")
        targets = sorted({t for s in self._closure() for t in self.model.post(s, action)})
        if not targets:
            raise ModelError(f"{self.model.name} refuses input {action} in {self.state}")
        self.state = self.rng.choice(targets)

    def observe(self) -> str:
        m = self.model
        options = []
        for s in self._closure():
            if is_quiescent(m, s):
                options.append((DELTA, s))
            for x, targets in sorted(m.succ[s].items()):
                if x in m.outputs:
                    options.extend((x, t) for t in sorted(targets))
        label, self.state = self.rng.choice(options)
        return label


def sut_from_model(m: Iolts, seed: int = 0) -> ModelSut:
    return ModelSut(m, seed)


# -- algorithm ---------------------------------------------------------------


@dataclass(frozen=True)
class TestConfig:
    __test__ = False  # not a pytest class

    seed: int = 0
    max_steps: int = 200
    stop_prob: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.stop_prob <= 1.0:
            raise ValueError("stop probability must lie in [0, 1]")
        if self.max_steps < 1:
            raise ValueError("max steps must be at least 1")


@dataclass
class Verdict:
    value: str  # "None", "Pass" or "Fail"
    log: list[str] = field(default_factory=list)
    rule: int | None = None
    observation: str | None = None

    def __bool__(self) -> bool:
        return self.value != "Fail"

    def text(self) -> str:
        return "\n".join(self.log) + "\n"


class OnTheFlyTester:
    """Tracks the reachable (spec, platform) state-set pairs during a test."""

    def __init__(self, spec: Iolts, env: Iolts, iface: InterfaceSpec | None = None):
        self.iface = iface or InterfaceSpec.from_models(spec, env)
        self.engine = JointEngine(Determinizer(spec), Determinizer(env), self.iface)
        self.inputs = sorted(self.iface.quotient_inputs)
        self.shared_outputs = self.iface.component_outputs_v
        self.outputs = self.iface.quotient_outputs
        self.initial = frozenset({(self.engine.spec.initial, self.engine.env.initial)})

    def inputs_at(self, S: frozenset) -> list[str]:
        return [a for a in self.inputs if self.engine.execute(S, a)]

    def react(self, S: frozenset, obs: str) -> tuple[int, frozenset | None]:
        """Rule number fired by observation ``obs`` and the next pair set (``None`` on Fail)."""
        engine = self.engine
        if obs == DELTA:
            if engine.allows_delta(S):
                return 2, engine.execute(S, DELTA)
            return 3, None
        if obs in self.shared_outputs:
            target = engine.execute(S, obs)
            return (4, target) if target else (5, None)
        if obs not in self.outputs:
            raise ModelError(f"component produced {obs!r}, which is outside its output alphabet")
        if engine.allows_output(S, obs):
            return 6, engine.execute(S, obs)
        return 7, None


def run_onthefly_test(
    spec: Iolts,
    env: Iolts,
    sut: SutAdapter,
    iface: InterfaceSpec | None = None,
    cfg: TestConfig = TestConfig(),
    tester: OnTheFlyTester | None = None,
) -> Verdict:
    """Run one randomized test session and return its verdict with the log."""
    tester = tester or OnTheFlyTester(spec, env, iface)
    rng = random.Random(cfg.seed)
    S = tester.initial
    verdict = Verdict("None")
    log = verdict.log

    def record(n: int, rule: int, what: str) -> None:
        log.append(f"step {n} {rule} {what} {verdict.value}")

    for n in range(1, cfg.max_steps + 1):
        if n == cfg.max_steps or rng.random() < cfg.stop_prob:
            verdict.value, verdict.rule = "Pass", 8
            record(n, 8, "stop")
            break
        inputs = tester.inputs_at(S)
        if inputs and rng.random() < 0.5:
            a = rng.choice(inputs)
            S = tester.engine.execute(S, a)
            sut.supply(a)
            record(n, 1, a)
            continue
        obs = sut.observe()
        rule, nxt = tester.react(S, obs)
        if nxt is None:
            verdict.value, verdict.rule, verdict.observation = "Fail", rule, obs
            record(n, rule, obs)
            break
        if not nxt:
            # the platform cannot follow: nothing further can be judged
            verdict.value, verdict.rule, verdict.observation = "Pass", 8, obs
            record(n, 8, obs)
            break
        S = nxt
        record(n, rule, obs)
    log.append(f"verdict {verdict.value} seed {cfg.seed}")
    return verdict
