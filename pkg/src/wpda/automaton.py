"""Core WPDA data model: machines, runs, subclass classification, file I/O.

Stacks are strings over the stack alphabet written bottom-to-top, so the
rightmost symbol is the top of the stack and pop/push rewrite the right
suffix.  A transition pops a string, optionally scans one input symbol, and
pushes a string; its weight lives in the machine's semiring.

State and stack-symbol labels are interned to dense integer ids internally;
all external interfaces (the JSON file format, reports) use string labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import StackMismatchError, ValidationError
from .semirings import SEMIRING_KINDS, SemiringDescriptor, make_semiring

EPSILON = ""  # external spelling of the empty scan


@dataclass(frozen=True)
class Transition:
    """One move: pop `pop` (bottom-to-top), scan `scan` (None for ε), push `push`."""

    source: int
    pop: tuple
    scan: Optional[int]
    target: int
    push: tuple
    weight: object

    @property
    def key(self):
        return (self.source, self.pop, self.scan, self.target, self.push)

    def is_scanning(self) -> bool:
        return self.scan is not None


@dataclass(frozen=True)
class Configuration:
    state: int
    stack: tuple


@dataclass(frozen=True)
class Run:
    """Alternating configurations and transitions; configs has one more entry."""

    configs: tuple
    transitions: tuple

    def __post_init__(self):
        if len(self.configs) != len(self.transitions) + 1:
            raise ValidationError("a run needs exactly one more configuration than transitions")


@dataclass(frozen=True)
class SubclassReport:
    is_bottom_up: bool
    is_top_down: bool
    is_simple: bool
    is_normal_form_bu: bool
    is_normal_form_td: bool
    max_pop: int
    max_push: int

    def describe(self) -> str:
        names = []
        if self.is_bottom_up:
            names.append("bottom-up" + (" (normal form)" if self.is_normal_form_bu else ""))
        if self.is_top_down:
            names.append("top-down" + (" (normal form)" if self.is_normal_form_td else ""))
        if self.is_simple:
            names.append("simple")
        if not names:
            names.append("unrestricted")
        return ", ".join(names) + f"; max pop {self.max_pop}, max push {self.max_push}"


class Wpda:
    """An immutable weighted pushdown automaton.

    Use :meth:`build` to construct one from label-level transition tuples;
    duplicate transition keys are merged by ⊕ and zero-weight transitions
    are dropped.
    """

    def __init__(self, semiring, states, input_alphabet, stack_alphabet,
                 transitions, initial, final, merged_duplicates=0):
        self.semiring: SemiringDescriptor = semiring
        self.states = tuple(states)
        self.input_alphabet = tuple(input_alphabet)
        self.stack_alphabet = tuple(stack_alphabet)
        self.transitions = tuple(transitions)
        self.initial: Configuration = initial
        self.final: Configuration = final
        self.merged_duplicates = merged_duplicates
        self._state_id = {s: i for i, s in enumerate(self.states)}
        self._input_id = {s: i for i, s in enumerate(self.input_alphabet)}
        self._stack_id = {s: i for i, s in enumerate(self.stack_alphabet)}
        if len(self._state_id) != len(self.states):
            raise ValidationError("duplicate state label")
        if len(self._input_id) != len(self.input_alphabet):
            raise ValidationError("duplicate input symbol")
        if len(self._stack_id) != len(self.stack_alphabet):
            raise ValidationError("duplicate stack symbol")

    # -- construction -----------------------------------------------------

    @classmethod
    def build(cls, semiring, transitions, initial, final,
              states=None, input_alphabet=None, stack_alphabet=None):
        """Build a machine from label-level parts.

        `transitions` is an iterable of tuples
        ``(source, pop_labels, scan_label_or_"", target, push_labels, weight)``.
        `initial`/`final` are ``(state_label, stack_labels)`` pairs.  Label
        sets may be given explicitly (they are validated) or collected from
        usage.
        """
        trans = [tuple(t) for t in transitions]
        init_state, init_stack = initial
        fin_state, fin_stack = final
        init_stack = tuple(init_stack)
        fin_stack = tuple(fin_stack)

        seen_states, seen_inputs, seen_stack = [], [], []

        def note(seen, label):
            if label not in seen:
                seen.append(label)

        note(seen_states, init_state)
        note(seen_states, fin_state)
        for x in init_stack + fin_stack:
            note(seen_stack, x)
        for idx, t in enumerate(trans):
            if len(t) != 6:
                raise ValidationError(f"transition #{idx} must have 6 fields, got {t!r}")
            src, pop, scan, tgt, push, _w = t
            note(seen_states, src)
            note(seen_states, tgt)
            if scan != EPSILON:
                note(seen_inputs, scan)
            for x in tuple(pop) + tuple(push):
                note(seen_stack, x)

        states = tuple(states) if states is not None else tuple(seen_states)
        input_alphabet = (tuple(input_alphabet) if input_alphabet is not None
                          else tuple(seen_inputs))
        stack_alphabet = tuple(stack_alphabet) if stack_alphabet is not None else tuple(seen_stack)

        state_id = {s: i for i, s in enumerate(states)}
        input_id = {s: i for i, s in enumerate(input_alphabet)}
        stack_id = {s: i for i, s in enumerate(stack_alphabet)}

        def lookup(table, label, what, ctx):
            try:
                return table[label]
            except KeyError:
                raise ValidationError(f"{ctx}: undeclared {what} {label!r}") from None

        merged: dict = {}
        n_merged = 0
        for idx, (src, pop, scan, tgt, push, w) in enumerate(trans):
            ctx = f"transition #{idx}"
            w = semiring.parse_weight(w)
            key = (
                lookup(state_id, src, "state", ctx),
                tuple(lookup(stack_id, x, "stack symbol", ctx) for x in pop),
                None if scan == EPSILON else lookup(input_id, scan, "input symbol", ctx),
                lookup(state_id, tgt, "state", ctx),
                tuple(lookup(stack_id, x, "stack symbol", ctx) for x in push),
            )
            if key in merged:
                merged[key] = semiring.plus(merged[key], w)
                n_merged += 1
            else:
                merged[key] = w

        final_trans = [
            Transition(src, pop, scan, tgt, push, w)
            for (src, pop, scan, tgt, push), w in merged.items()
            if not semiring.is_zero(w)
        ]
        init = Configuration(
            lookup(state_id, init_state, "state", "initial configuration"),
            tuple(lookup(stack_id, x, "stack symbol", "initial configuration")
                  for x in init_stack),
        )
        fin = Configuration(
            lookup(state_id, fin_state, "state", "final configuration"),
            tuple(lookup(stack_id, x, "stack symbol", "final configuration") for x in fin_stack),
        )
        return cls(semiring, states, input_alphabet, stack_alphabet,
                   final_trans, init, fin, merged_duplicates=n_merged)

    # -- label helpers ----------------------------------------------------

    def state_label(self, i: int) -> str:
        return self.states[i]

    def input_label(self, i: Optional[int]) -> str:
        return EPSILON if i is None else self.input_alphabet[i]

    def stack_label(self, i: int) -> str:
        return self.stack_alphabet[i]

    def state_id(self, label: str) -> int:
        return self._state_id[label]

    def input_id(self, label: str) -> int:
        return self._input_id[label]

    def stack_id(self, label: str) -> int:
        return self._stack_id[label]

    def arcs(self):
        """Yield transitions in label form (src, pop, scan, tgt, push, weight)."""
        for t in self.transitions:
            yield (self.state_label(t.source),
                   tuple(self.stack_label(x) for x in t.pop),
                   self.input_label(t.scan),
                   self.state_label(t.target),
                   tuple(self.stack_label(x) for x in t.push),
                   t.weight)

    def parse_input(self, text: str) -> tuple:
        """Turn CLI/file text into a tuple of input-symbol ids.

        Single-character alphabets read the text as characters; otherwise
        symbols must be separated by spaces or commas.
        """
        if text == "":
            return ()
        if any((" " in s or "," in s) for s in self.input_alphabet):
            raise ValidationError("input symbols may not contain spaces or commas")
        if all(len(s) == 1 for s in self.input_alphabet) and " " not in text and "," not in text:
            parts = list(text)
        else:
            parts = [p for p in text.replace(",", " ").split() if p]
        out = []
        for p in parts:
            if p not in self._input_id:
                raise ValidationError(f"input symbol {p!r} is not in the alphabet")
            out.append(self._input_id[p])
        return tuple(out)

    def __repr__(self):
        return (f"Wpda({self.semiring.name}, |Q|={len(self.states)}, "
                f"|Σ|={len(self.input_alphabet)}, |Γ|={len(self.stack_alphabet)}, "
                f"|δ|={len(self.transitions)})")


# -- run semantics --------------------------------------------------------


def step(config: Configuration, t: Transition) -> Configuration:
    """Apply one transition: replace the popped suffix by the pushed string."""
    if config.state != t.source:
        raise StackMismatchError(
            f"transition leaves state {t.source}, configuration is in {config.state}")
    k = len(t.pop)
    if k and config.stack[-k:] != t.pop:
        raise StackMismatchError(
            f"stack {config.stack} does not end with popped string {t.pop}")
    rest = config.stack[:len(config.stack) - k] if k else config.stack
    return Configuration(t.target, rest + t.push)


def run_weight(run: Run, semiring: SemiringDescriptor):
    """Left-to-right ⊗ product over the run's transitions; empty run is 1̄."""
    return semiring.product(t.weight for t in run.transitions)


def scanned_string(run: Run) -> tuple:
    """Input-symbol ids scanned by the run's non-ε transitions, in order."""
    return tuple(t.scan for t in run.transitions if t.scan is not None)


def replay(run: Run) -> Configuration:
    """Re-apply every transition from the first configuration; returns the end."""
    config = run.configs[0]
    for i, t in enumerate(run.transitions):
        config = step(config, t)
        if config != run.configs[i + 1]:
            raise ValidationError(f"run is inconsistent at step {i + 1}")
    return config


# -- subclass classification ----------------------------------------------


def lone_nullary(machine: Wpda) -> Optional[Transition]:
    """The single inert ε-acceptance transition of a normal-form machine, if any.

    Bottom-up shape: s --ε, ε→F/w--> f where F is the final stack symbol;
    top-down shape: s --ε, I→ε/w--> f where I is the initial stack symbol.
    Inert means nothing else enters the initial state or leaves the final one.
    """
    s, f = machine.initial.state, machine.final.state
    bu_shape = ((), machine.final.stack) if len(machine.final.stack) == 1 else None
    td_shape = (machine.initial.stack, ()) if len(machine.initial.stack) == 1 else None
    candidates = [
        t for t in machine.transitions
        if not t.is_scanning() and t.source == s and t.target == f
        and (t.pop, t.push) in (bu_shape, td_shape)
    ]
    if len(candidates) != 1:
        return None
    t = candidates[0]
    for other in machine.transitions:
        if other is not t and (other.target == s or other.source == f):
            return None
    return t


def classify(machine: Wpda) -> SubclassReport:
    """Definition scan for the bottom-up / top-down / simple subclasses and
    the two normal forms."""
    pops = [len(t.pop) for t in machine.transitions]
    pushes = [len(t.push) for t in machine.transitions]
    max_pop = max(pops, default=0)
    max_push = max(pushes, default=0)

    is_bottom_up = (all(p == 1 for p in pushes)
                    and machine.initial.stack == ()
                    and len(machine.final.stack) == 1)
    is_top_down = (all(p == 1 for p in pops)
                   and len(machine.initial.stack) == 1
                   and machine.final.stack == ())
    is_simple = max_pop <= 1 and max_push <= 1

    nullary = lone_nullary(machine)

    def nf_bu() -> bool:
        if not is_bottom_up:
            return False
        for t in machine.transitions:
            if t is nullary:
                continue
            if t.is_scanning():
                if len(t.pop) > 2:
                    return False
            elif len(t.pop) != 2:
                return False
        return True

    def nf_td() -> bool:
        if not is_top_down:
            return False
        for t in machine.transitions:
            if t is nullary:
                continue
            if t.is_scanning():
                if len(t.push) > 2:
                    return False
            elif len(t.push) != 2:
                return False
        return True

    return SubclassReport(
        is_bottom_up=is_bottom_up,
        is_top_down=is_top_down,
        is_simple=is_simple,
        is_normal_form_bu=nf_bu(),
        is_normal_form_td=nf_td(),
        max_pop=max_pop,
        max_push=max_push,
    )


# -- file format -----------------------------------------------------------


def wpda_to_dict(machine: Wpda) -> dict:
    return {
        "semiring": machine.semiring.name,
        "states": list(machine.states),
        "input_alphabet": list(machine.input_alphabet),
        "stack_alphabet": list(machine.stack_alphabet),
        "initial": {"state": machine.state_label(machine.initial.state),
                    "stack": [machine.stack_label(x) for x in machine.initial.stack]},
        "final": {"state": machine.state_label(machine.final.state),
                  "stack": [machine.stack_label(x) for x in machine.final.stack]},
        "transitions": [
            {"from": src, "pop": list(pop), "scan": scan, "to": tgt,
             "push": list(push), "weight": w}
            for (src, pop, scan, tgt, push, w) in machine.arcs()
        ],
    }


def wpda_from_dict(data: dict, tolerance: float = None) -> Wpda:
    try:
        kind = data["semiring"]
    except (KeyError, TypeError):
        raise ValidationError("missing 'semiring' field") from None
    if kind not in SEMIRING_KINDS:
        raise ValidationError(f"unknown semiring {kind!r}")
    semiring = make_semiring(kind) if tolerance is None else make_semiring(kind, tolerance)
    for field_name in ("states", "input_alphabet", "stack_alphabet",
                       "initial", "final", "transitions"):
        if field_name not in data:
            raise ValidationError(f"missing {field_name!r} field")
    trans = []
    for idx, t in enumerate(data["transitions"]):
        for key in ("from", "pop", "scan", "to", "push", "weight"):
            if key not in t:
                raise ValidationError(f"transition #{idx}: missing {key!r}")
        trans.append((t["from"], tuple(t["pop"]), t["scan"], t["to"],
                      tuple(t["push"]), t["weight"]))
    return Wpda.build(
        semiring,
        trans,
        initial=(data["initial"]["state"], tuple(data["initial"]["stack"])),
        final=(data["final"]["state"], tuple(data["final"]["stack"])),
        states=data["states"],
        input_alphabet=data["input_alphabet"],
        stack_alphabet=data["stack_alphabet"],
    )


def load_wpda(path, tolerance: float = None) -> Wpda:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValidationError(f"{path}: invalid JSON at line {e.lineno}, "
                                  f"column {e.colno}: {e.msg}") from None
    return wpda_from_dict(data, tolerance)


def dump_wpda(machine: Wpda, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(wpda_to_dict(machine), fh, indent=2, sort_keys=False)
        fh.write("\n")
