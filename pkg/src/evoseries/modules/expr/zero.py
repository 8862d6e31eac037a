"""
Zero testing: exact proof through the exp-atom normal form first, then
high-precision sampling for a nonzero witness.
"""
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from evoseries.modules.expr.atoms import to_exp_atoms
from evoseries.modules.expr.evaluate import evaluate
from evoseries.modules.expr.nodes import Const
from evoseries.modules.expr.simplify import simplify
from evoseries.modules.utils.errors import AtomMergeFailure, PoleEvaluation, UnboundSymbol, UnresolvedOperator
from evoseries.modules.utils.util import DEFAULT_SEED, NONZERO_THRESHOLD, default_precision, fraction_str

ZERO_TEST_PRECISION = 25
DEFAULT_SAMPLE_COUNT = 12


class ZeroVerdict:
    name = None

    def to_dict(self):
        return {'verdict': self.name}

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ProvenZero(ZeroVerdict):
    name = 'ProvenZero'


@dataclass(frozen=True)
class ProvenNonZero(ZeroVerdict):
    witness: dict = field(default_factory=dict)
    magnitude: object = None
    name = 'ProvenNonZero'

    def to_dict(self):
        return {'verdict': self.name,
                'witness': {k: fraction_str(v) for k, v in sorted(self.witness.items())},
                'magnitude': mpmath.nstr(self.magnitude, 15)}

    def __str__(self):
        point = ", ".join("{}={}".format(k, fraction_str(v)) for k, v in sorted(self.witness.items()))
        return "{} at ({}) |value| = {}".format(self.name, point, mpmath.nstr(self.magnitude, 15))


@dataclass(frozen=True)
class Unknown(ZeroVerdict):
    reason: str = ''
    name = 'Unknown'

    def to_dict(self):
        return {'verdict': self.name, 'reason': self.reason}


def prove_zero(e):
    """True only when the exp-atom numerator of ``e`` is the zero polynomial."""
    e = simplify(e)
    if isinstance(e, Const):
        return e.value == 0
    try:
        return to_exp_atoms(e).is_zero
    except (AtomMergeFailure, UnresolvedOperator):
        return False


def default_samples(names, count=DEFAULT_SAMPLE_COUNT, seed=DEFAULT_SEED):
    """All symbols at 1 first, then seeded random rationals in [-2, 2]."""
    names = sorted(names)
    rng = random.Random(seed)
    samples = [{name: Fraction(1) for name in names}]
    for _ in range(count - 1):
        samples.append({name: Fraction(rng.randint(-24, 24), 12) for name in names})
    return samples


def scan_samples(e, samples, precision=None):
    """
    Evaluate ``e`` over ``samples``.

    Returns
    -------
    (worst, values) : worst is (bindings, magnitude) of the largest |value| or None
        when every sample hit a pole; values lists (bindings, magnitude or None).
    """
    precision = max(precision or default_precision(), ZERO_TEST_PRECISION)
    worst = None
    values = []
    for bindings in samples:
        try:
            magnitude = abs(evaluate(e, bindings, precision))
        except PoleEvaluation:
            values.append((bindings, None))
            continue
        values.append((bindings, magnitude))
        if worst is None or magnitude > worst[1]:
            worst = (bindings, magnitude)
    return worst, values


def is_zero(e, samples=None, precision=None, threshold=NONZERO_THRESHOLD, seed=DEFAULT_SEED):
    """
    Decide whether ``e`` is identically zero.

    Parameters
    ----------
    e : Expr
    samples : list of dict, optional
        Bindings to search for a nonzero witness; defaults to ``default_samples``.
    precision : int, optional
        Working digits, raised to at least 25.
    threshold : float
        A sample counts as a witness when its magnitude exceeds this.

    Returns
    -------
    ZeroVerdict : ProvenZero, ProvenNonZero or Unknown; never raises for
        evaluation failures.
    """
    return sample_verdict(e, samples, precision, threshold, seed)[0]


def sample_verdict(e, samples=None, precision=None, threshold=NONZERO_THRESHOLD, seed=DEFAULT_SEED):
    """
    ``is_zero`` together with the evidence behind it.

    Returns
    -------
    (verdict, worst, values) : worst and values as in ``scan_samples``; both are
        empty when no sampling was needed.
    """
    # witnesses bind every symbol of the input, including ones simplification cancelled
    names = e.free_symbols
    e = simplify(e)
    names = names | e.free_symbols
    if isinstance(e, Const):
        if e.value == 0:
            return ProvenZero(), None, []
        magnitude = mpmath.mpf(abs(e.value.numerator)) / e.value.denominator
        witness = default_samples(names, count=1, seed=seed)[0]
        if abs(e.value) > threshold:
            return ProvenNonZero(witness=witness, magnitude=magnitude), (witness, magnitude), []
        return Unknown(reason='nonzero constant below threshold'), (witness, magnitude), []
    if prove_zero(e):
        return ProvenZero(), None, []
    if samples is None:
        samples = default_samples(names, seed=seed)
    try:
        worst, values = scan_samples(e, samples, precision)
    except (UnresolvedOperator, UnboundSymbol) as err:
        return Unknown(reason=str(err)), None, []
    if worst is None:
        return Unknown(reason='every sample is a pole'), None, values
    for bindings, magnitude in values:
        if magnitude is not None and magnitude > threshold:
            return ProvenNonZero(witness=dict(bindings), magnitude=magnitude), worst, values
    return Unknown(reason="max |value| {} not above threshold".format(mpmath.nstr(worst[1], 5))), worst, values
