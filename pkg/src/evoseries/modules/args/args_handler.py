import json
import math
import re
from dataclasses import asdict, dataclass, field, fields

from evoseries.modules.series.taylor import DEFAULT_ORDER
from evoseries.modules.utils.errors import ValidationError
from evoseries.modules.utils.util import DEFAULT_SEED, MIN_PRECISION, fraction_str, log, to_fraction

SOLVE = 'solve'
VERIFY = 'verify'
COMPARE = 'compare'
REPORT = 'report'
COMMANDS = (SOLVE, VERIFY, COMPARE, REPORT)

DEFAULT_T_MAX = 0.5
DEFAULT_TOL = 1e-4

_SCAN_RE = re.compile(r'^\s*([A-Za-z][A-Za-z0-9_]*)\s*=\s*([^.:][^:]*?)\s*\.\.\s*([^:]+?)\s*:\s*(\d+)\s*$')
_PARAM_RE = re.compile(r'^\s*([A-Za-z][A-Za-z0-9_]*)\s*=\s*(\S+)\s*$')


@dataclass(frozen=True)
class ScanRequest:
    symbol: str
    lo: object
    hi: object
    count: int

    def __str__(self):
        return "{}={}..{}:{}".format(self.symbol, fraction_str(self.lo), fraction_str(self.hi), self.count)


def parse_scan(text):
    """NAME=lo..hi:count, bounds rational."""
    m = _SCAN_RE.match(text)
    if m is None:
        raise ValidationError("scan must read NAME=lo..hi:count, got {!r}".format(text))
    try:
        lo, hi = to_fraction(m.group(2)), to_fraction(m.group(3))
    except (ValueError, ZeroDivisionError):
        raise ValidationError("scan bounds must be rational numbers, got {!r}".format(text))
    count = int(m.group(4))
    if count < 1:
        raise ValidationError("scan count must be positive, got {}".format(count))
    return ScanRequest(m.group(1), lo, hi, count)


def parse_param(text):
    """NAME=VALUE with a rational value (1/2, 0.25, -3)."""
    m = _PARAM_RE.match(text)
    if m is None:
        raise ValidationError("parameter override must read NAME=VALUE, got {!r}".format(text))
    try:
        return m.group(1), to_fraction(m.group(2))
    except (ValueError, ZeroDivisionError):
        raise ValidationError("parameter {} needs a rational value, got {!r}".format(m.group(1), m.group(2)))


def parse_tol(value):
    if isinstance(value, str) and value.strip().lower() in ('inf', '+inf', 'infinity'):
        return math.inf
    try:
        tol = float(value)
    except (TypeError, ValueError):
        raise ValidationError("tolerance must be a number or inf, got {!r}".format(value))
    return tol


@dataclass
class RunConfig:
    """
    One command run; built from command-line flags or from a JSON argument file.
    """
    command: str
    problem: str
    claim: str = None
    order: int = DEFAULT_ORDER
    t_max: float = DEFAULT_T_MAX
    tol: float = DEFAULT_TOL
    precision: int = None
    seed: int = DEFAULT_SEED
    output: str = 'text'
    params: dict = field(default_factory=dict)
    scan: ScanRequest = None
    out: str = None
    workers: int = 1
    verbose: bool = False
    normal_form: bool = None

    @classmethod
    def from_dict(cls, dic):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(dic) - known)
        if unknown:
            raise ValidationError("unknown argument: {}".format(unknown[0]))
        dic = dict(dic)
        if 'params' in dic:
            params = dic['params']
            if isinstance(params, list):
                params = dict(parse_param(p) for p in params)
            dic['params'] = {k: to_fraction(v) for k, v in params.items()}
        if isinstance(dic.get('scan'), str):
            dic['scan'] = parse_scan(dic['scan'])
        if 'tol' in dic:
            dic['tol'] = parse_tol(dic['tol'])
        return cls(**dic)

    def to_dict(self):
        out = asdict(self)
        out['params'] = {k: fraction_str(v) for k, v in sorted(self.params.items())}
        out['scan'] = None if self.scan is None else str(self.scan)
        out['tol'] = "inf" if math.isinf(self.tol) else self.tol
        return out

    @property
    def json(self):
        return self.output == 'json'


def load_args(file_path):
    with open(file_path, 'r') as f:
        args_dict = json.load(f)
    log("load arguments:", args_dict)
    return RunConfig.from_dict(args_dict)


def check_args(config, spec=None):
    """
    Command-specific checks; with ``spec`` also checks names against the problem.

    Raises ValidationError naming the first problem found.
    """
    if config.command not in COMMANDS:
        raise ValidationError("unknown command: {} (expected one of {})".format(config.command, ", ".join(COMMANDS)))
    if not config.problem:
        raise ValidationError("a problem file is required")
    if config.output not in ('text', 'json'):
        raise ValidationError("output must be text or json, got {}".format(config.output))
    if config.command == VERIFY and not config.claim:
        raise ValidationError("verify needs --claim")
    if config.scan is not None and config.command != VERIFY:
        raise ValidationError("--scan only applies to verify")
    if int(config.order) < 0:
        raise ValidationError("order must be non-negative, got {}".format(config.order))
    if config.command == COMPARE:
        if not float(config.t_max) > 0:
            raise ValidationError("t-max must be positive, got {}".format(config.t_max))
        if math.isnan(config.tol) or config.tol <= 0:
            raise ValidationError("tol must be positive, got {}".format(config.tol))
    if config.precision is not None and int(config.precision) < MIN_PRECISION:
        raise ValidationError("precision must be at least {} digits, got {}".format(MIN_PRECISION, config.precision))
    if int(config.workers) < 1:
        raise ValidationError("workers must be at least 1, got {}".format(config.workers))
    if spec is None:
        return
    claim = spec.claim(config.claim) if config.claim else None
    declared = spec.claim_parameters(claim)
    for name in config.params:
        if name not in declared:
            raise ValidationError("unknown parameter override: {} (declared: {})".format(
                name, ", ".join(declared) or "none"))
    if config.scan is not None and config.scan.symbol not in declared:
        raise ValidationError("cannot scan {}: not a parameter of claim {}".format(config.scan.symbol, config.claim))
