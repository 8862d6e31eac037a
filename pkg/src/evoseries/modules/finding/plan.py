import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from evoseries.modules.expr.evaluate import check_precision
from evoseries.modules.load.problem import DDE, TIME
from evoseries.modules.utils.errors import ValidationError
from evoseries.modules.utils.util import DEFAULT_SEED, fraction_str, log, to_fraction

PDE_SPACE_SAMPLES = (Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(1, 2), Fraction(1), Fraction(2))
DDE_SPACE_SAMPLES = tuple(Fraction(n) for n in range(-3, 4))
TIME_SAMPLES = (Fraction(1, 10), Fraction(1, 2), Fraction(1))
PERTURBATION_COUNT = 8


@dataclass
class SamplePlan:
    """
    Where residuals and initial-condition deviations are sampled.

    The first parameter set is ``base``; the rest are seeded perturbations of it,
    so every witness can be reproduced from (seed, base).
    """
    space_name: str
    space: tuple
    times: tuple
    base: dict
    perturbations: tuple = ()
    precision: int = None
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not self.space:
            raise ValidationError("sample plan needs at least one space sample")
        if not self.times:
            raise ValidationError("sample plan needs at least one time sample")
        self.precision = check_precision(self.precision)

    @property
    def parameter_sets(self):
        return [dict(self.base)] + [dict(p) for p in self.perturbations]

    def bindings(self, with_time=True, parameter_sets=None):
        """Parameter sets outermost, then space, then time."""
        parameter_sets = self.parameter_sets if parameter_sets is None else parameter_sets
        out = []
        times = self.times if with_time else (None,)
        for params, x, t in itertools.product(parameter_sets, self.space, times):
            b = dict(params)
            b[self.space_name] = x
            if t is not None:
                b[TIME] = t
            out.append(b)
        return out

    def with_base(self, name, value, perturb=False):
        """A copy with one parameter pinned; ``perturb=False`` drops the perturbed sets."""
        base = dict(self.base)
        base[name] = to_fraction(value)
        perturbations = ()
        if perturb:
            perturbations = tuple({**p, name: base[name]} for p in self.perturbations)
        return SamplePlan(self.space_name, self.space, self.times, base, perturbations, self.precision, self.seed)

    def inventory(self):
        return {'space': [fraction_str(x) for x in self.space],
                'times': [fraction_str(t) for t in self.times],
                'base': {k: fraction_str(v) for k, v in sorted(self.base.items())},
                'perturbations': len(self.perturbations),
                'residual_samples': len(self.parameter_sets) * len(self.space) * len(self.times),
                'ic_samples': len(self.parameter_sets) * len(self.space),
                'precision': self.precision,
                'seed': self.seed}


def build_plan(spec, claim=None, params=None, seed=DEFAULT_SEED, precision=None,
               perturbations=PERTURBATION_COUNT, space=None, times=None):
    """
    The default sample plan of a problem (and claim).

    Parameters
    ----------
    spec : ProblemSpec
    claim : Claim, optional
        Its extra ``params`` join the parameter sets.
    params : dict, optional
        Base value overrides (name -> rational); default base values are 1.
    seed : int
        Seed of the perturbation generator.
    perturbations : int
        Number of perturbed parameter sets, each base + m/16 with m in [-8, 8].
    """
    names = spec.claim_parameters(claim)
    base = {name: Fraction(1) for name in names}
    for name, value in (params or {}).items():
        if name not in base:
            raise ValidationError("unknown parameter override: {} (declared: {})".format(
                name, ", ".join(names) or "none"))
        base[name] = to_fraction(value)
    rng = random.Random(seed)
    perturbed = []
    if names:
        for _ in range(perturbations):
            perturbed.append({name: base[name] + Fraction(rng.randint(-8, 8), 16) for name in sorted(names)})
    if space is None:
        space = DDE_SPACE_SAMPLES if spec.kind == DDE else PDE_SPACE_SAMPLES
    if times is None:
        times = TIME_SAMPLES
    plan = SamplePlan(space_name=spec.space,
                      space=tuple(to_fraction(x) for x in space),
                      times=tuple(to_fraction(t) for t in times),
                      base=base,
                      perturbations=tuple(perturbed),
                      precision=precision,
                      seed=seed)
    log("sample plan: space={}, times={}, parameter sets={}, precision={}, seed={}".format(
        len(plan.space), len(plan.times), len(plan.parameter_sets), plan.precision, plan.seed))
    return plan
