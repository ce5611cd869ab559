"""Driving distributions for LRB walks."""

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import format_fraction, to_fraction


@dataclass
class WeightDistribution:
    """Nonnegative rational weights on semigroup labels, total at most 1.

    Whatever mass is missing sits on the identity, which fixes every state.
    ``names`` gives optional display names (e.g. ``w_{1,3}``) for symbolic output.
    """
    weights: dict
    names: dict = field(default_factory=dict)

    def __post_init__(self):
        self.weights = {k: to_fraction(v) for k, v in self.weights.items()}
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("negative weight")
        if self.total > 1:
            raise ValueError("weights sum to more than 1")

    @property
    def total(self):
        return sum(self.weights.values(), Fraction(0))

    @property
    def deficit(self):
        return 1 - self.total

    def name(self, label):
        return self.names.get(label, f"w[{label}]")

    def to_json(self):
        return json.dumps({"weights": {k: format_fraction(v) for k, v in self.weights.items()}},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text) if isinstance(text, str) else text
        return cls(dict(d["weights"]))
