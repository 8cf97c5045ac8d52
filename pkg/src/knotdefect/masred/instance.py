"""Minimum Axiom Set instances: text format, closure, preprocessing, doubling."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable


class MasSyntaxError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class MasError(ValueError):
    """An instance violates a precondition (unknown sentence, not preprocessed...)."""


@dataclass(frozen=True)
class Relation:
    premises: frozenset[str]
    conclusion: str

    def __str__(self):
        return f"rel {self.conclusion} <- {' '.join(sorted(self.premises))}".rstrip()


@dataclass
class MasInstance:
    """Sentences, implication relations ``T -> t`` and a budget ``k``.

    ``k`` may go negative during preprocessing; such an instance is a
    trivial no-instance.
    """
    sentences: list[str]
    relations: list[Relation]
    k: int
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.sentences = list(dict.fromkeys(self.sentences))
        self.relations = [r if isinstance(r, Relation) else Relation(frozenset(r[0]), r[1])
                          for r in self.relations]
        known = set(self.sentences)
        for r in self.relations:
            missing = (set(r.premises) | {r.conclusion}) - known
            if missing:
                raise MasError(f"relation {r} mentions unknown sentence(s) {sorted(missing)}")

    @property
    def trivially_no(self) -> bool:
        return self.k < 0

    def incoming(self, t: str) -> list[Relation]:
        return [r for r in self.relations if r.conclusion == t]

    def is_preprocessed(self) -> bool:
        if any(not r.premises or r.conclusion in r.premises for r in self.relations):
            return False
        heads = {r.conclusion for r in self.relations}
        return all(s in heads for s in self.sentences)

    def __str__(self):
        return format_mas(self)


def parse_mas(text: str) -> MasInstance:
    header = False
    sentences = None
    k = None
    rels = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if not header:
            if tok != ["mas", "v1"]:
                raise MasSyntaxError("expected header 'mas v1'", no)
            header = True
        elif tok[0] == "sentences":
            if sentences is not None:
                raise MasSyntaxError("duplicate 'sentences' line", no)
            sentences = tok[1:]
            if len(set(sentences)) != len(sentences):
                raise MasSyntaxError("repeated sentence name", no)
        elif tok[0] == "k":
            if len(tok) != 2 or k is not None:
                raise MasSyntaxError("expected a single 'k <int>' line", no)
            try:
                k = int(tok[1])
            except ValueError:
                raise MasSyntaxError(f"bad integer {tok[1]!r}", no) from None
        elif tok[0] == "rel":
            if len(tok) < 3 or tok[2] != "<-":
                raise MasSyntaxError("expected 'rel <t> <- <t1> ...'", no)
            rels.append((no, tok[1], tok[3:]))
        else:
            raise MasSyntaxError(f"unknown keyword {tok[0]!r}", no)
    if not header:
        raise MasSyntaxError("empty input")
    if sentences is None or k is None:
        raise MasSyntaxError("missing 'sentences' or 'k' line")
    known = set(sentences)
    relations = []
    for no, t, ts in rels:
        bad = [x for x in [t, *ts] if x not in known]
        if bad:
            raise MasSyntaxError(f"unknown sentence {bad[0]!r}", no)
        relations.append(Relation(frozenset(ts), t))
    return MasInstance(sentences, relations, k)


def format_mas(inst: MasInstance) -> str:
    lines = ["mas v1", " ".join(["sentences", *inst.sentences]), f"k {inst.k}"]
    lines += [str(r) for r in inst.relations]
    return "\n".join(lines) + "\n"


def closure(inst: MasInstance, s0: Iterable[str]) -> frozenset[str]:
    """Everything derivable from ``s0`` by repeatedly firing relations."""
    return frozenset().union(*closure_rounds(inst, s0))


def closure_rounds(inst: MasInstance, s0: Iterable[str]) -> list[frozenset[str]]:
    """The closure split into rounds: round 0 is ``s0``, round i+1 what fires next."""
    have = set(s0)
    unknown = have - set(inst.sentences)
    if unknown:
        raise MasError(f"unknown sentence(s) {sorted(unknown)}")
    rounds = [frozenset(have)]
    while True:
        new = {r.conclusion for r in inst.relations
               if r.conclusion not in have and r.premises <= have}
        if not new:
            return rounds
        have |= new
        rounds.append(frozenset(new))


def is_axiom_set(inst: MasInstance, a: Iterable[str]) -> bool:
    return closure(inst, a) == frozenset(inst.sentences)


def min_axiom_set(inst: MasInstance) -> tuple[str, ...]:
    """A smallest axiom set, by enumerating subsets in increasing size."""
    for size in range(len(inst.sentences) + 1):
        for a in combinations(inst.sentences, size):
            if is_axiom_set(inst, a):
                return a
    raise AssertionError("the full sentence set is always an axiom set")


def min_axiom_set_brute(inst: MasInstance) -> int:
    return len(min_axiom_set(inst))


def preprocess(inst: MasInstance) -> MasInstance:
    """Apply the three simplification rules until none fires.

    * a relation with no premises makes its conclusion free: drop the
      sentence, its incoming relations, and its premise occurrences;
    * a sentence nobody derives must be an axiom: drop it as above and
      spend one unit of ``k``;
    * a relation whose conclusion is among its premises never helps: drop it.
    """
    sentences = list(inst.sentences)
    relations = list(inst.relations)
    k = inst.k

    def drop(t):
        nonlocal relations
        sentences.remove(t)
        relations = [Relation(r.premises - {t}, r.conclusion)
                     for r in relations if r.conclusion != t]

    changed = True
    while changed:
        changed = False
        kept = [r for r in relations if r.conclusion not in r.premises]
        if len(kept) != len(relations):
            relations = kept
            changed = True
        free = next((r.conclusion for r in relations if not r.premises), None)
        if free is not None:
            drop(free)
            changed = True
            continue
        heads = {r.conclusion for r in relations}
        forced = next((s for s in sentences if s not in heads), None)
        if forced is not None:
            drop(forced)
            k -= 1
            changed = True
    return MasInstance(sentences, _dedup(relations), k)


def _dedup(relations):
    return list(dict.fromkeys(relations))


def hat(name: str) -> str:
    return name + "'"


def double_instance(inst: MasInstance) -> MasInstance:
    """Disjoint union of the instance with a renamed copy; ``k`` doubles."""
    clash = {hat(s) for s in inst.sentences} & set(inst.sentences)
    if clash:
        raise MasError(f"copy names clash with existing sentences: {sorted(clash)}")
    sentences = list(inst.sentences) + [hat(s) for s in inst.sentences]
    relations = list(inst.relations) + [
        Relation(frozenset(hat(p) for p in r.premises), hat(r.conclusion)) for r in inst.relations]
    return MasInstance(sentences, relations, 2 * inst.k)


def cycle2() -> MasInstance:
    """Two sentences deriving each other; one axiom suffices."""
    return MasInstance(["a", "b"], [({"a"}, "b"), ({"b"}, "a")], 1)
