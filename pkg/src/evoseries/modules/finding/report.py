"""
Claim reports: verdict aggregation and their JSON and text renderings.
"""
import json
from dataclasses import dataclass, field

import mpmath

import evoseries
from evoseries.modules.expr.zero import ProvenNonZero, ProvenZero
from evoseries.modules.utils.util import fraction_str

SATISFIED = 'Satisfied'
VIOLATED = 'Violated'
INCONCLUSIVE = 'Inconclusive'


def number_str(value):
    """15 significant digits; the same string for the same value on every run."""
    if value is None:
        return None
    if isinstance(value, float):
        return "{:.15g}".format(value)
    return mpmath.nstr(mpmath.mpf(value), 15)


def bindings_dict(bindings):
    return {k: fraction_str(v) for k, v in sorted(bindings.items())}


@dataclass
class FieldCheck:
    """The zero verdict of one residual or initial-condition deviation."""
    field: str
    verdict: object
    expression: str = ''
    worst: tuple = None
    samples: int = 0
    poles: list = field(default_factory=list)

    @property
    def max_deviation(self):
        if isinstance(self.verdict, ProvenZero):
            return mpmath.mpf(0)
        return None if self.worst is None else self.worst[1]

    def to_dict(self):
        out = {'field': self.field,
               'expression': self.expression,
               'samples': self.samples,
               'poles': [bindings_dict(b) for b in self.poles],
               'max_deviation': number_str(self.max_deviation)}
        out.update(self.verdict.to_dict())
        if self.worst is not None:
            out['worst'] = {'bindings': bindings_dict(self.worst[0]), 'magnitude': number_str(self.worst[1])}
        return out


def aggregate_status(checks):
    verdicts = [c.verdict for c in checks]
    if any(isinstance(v, ProvenNonZero) for v in verdicts):
        return VIOLATED
    if verdicts and all(isinstance(v, ProvenZero) for v in verdicts):
        return SATISFIED
    return INCONCLUSIVE


@dataclass
class ClaimReport:
    claim: str
    problem: str
    kind: str
    equations: list
    ic: list
    plan: object
    source_hash: str = ''
    scan: object = None
    first_term: object = None

    @property
    def status(self):
        return aggregate_status(self.equations + self.ic)

    def witnesses(self):
        return [c for c in self.equations + self.ic if isinstance(c.verdict, ProvenNonZero)]

    def to_dict(self):
        out = {'claim': self.claim,
               'problem': self.problem,
               'kind': self.kind,
               'status': self.status,
               'equations': [c.to_dict() for c in self.equations],
               'ic': [c.to_dict() for c in self.ic],
               'samples': self.plan.inventory(),
               'seed': self.plan.seed,
               'precision': self.plan.precision,
               'source_hash': self.source_hash,
               'version': evoseries.__version__}
        if self.scan is not None:
            out['scan'] = self.scan.to_dict()
        if self.first_term is not None:
            out['first_term'] = self.first_term.to_dict()
        return out

    def to_json(self):
        return dumps(self.to_dict())

    def to_text(self):
        lines = ["claim {} of {} ({}): {}".format(self.claim, self.problem, self.kind, self.status)]
        for title, checks in (('residual', self.equations), ('initial condition', self.ic)):
            for c in checks:
                line = "  {} {}: {}".format(title, c.field, c.verdict)
                if c.max_deviation is not None and not isinstance(c.verdict, ProvenNonZero):
                    line += ", max |deviation| = {}".format(number_str(c.max_deviation))
                if c.poles:
                    line += ", {} pole samples skipped".format(len(c.poles))
                lines.append(line)
        lines.append("  samples: {} residual, {} initial, precision {}, seed {}".format(
            self.plan.inventory()['residual_samples'], self.plan.inventory()['ic_samples'],
            self.plan.precision, self.plan.seed))
        if self.scan is not None:
            lines.append(self.scan.to_text())
        if self.first_term is not None:
            lines.append(self.first_term.to_text())
        return "\n".join(lines)


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True)
