"""
evoseries command line: solve | verify | compare | report.

stdout carries only the report (text or JSON); progress and diagnostics go to
stderr. Exit codes: 0 ok or Satisfied, 1 error, 2 Violated, 3 Inconclusive,
4 BlowUp or StabilityViolation.
"""
import argparse
import os
import sys
import time

import evoseries
from evoseries.modules.args.args_handler import COMMANDS, COMPARE, REPORT, SOLVE, VERIFY, RunConfig, check_args, \
    parse_param, parse_scan, parse_tol
from evoseries.modules.expr.evaluate import check_precision
from evoseries.modules.finding.claims import check_claim, first_term_agreement, parameter_scan, scan_grid
from evoseries.modules.finding.plan import build_plan
from evoseries.modules.finding.report import INCONCLUSIVE, SATISFIED, VIOLATED, dumps
from evoseries.modules.load.problem import DDE, read_problem_file
from evoseries.modules.numeric.integrators import integrate, reference_params
from evoseries.modules.numeric.window import validity_window
from evoseries.modules.series.taylor import residual_order, series_defect, taylor
from evoseries.modules.utils.errors import BlowUp, EvoSeriesError, StabilityViolation, ValidationError
from evoseries.modules.utils.util import fraction_str, generate_out_folder, log

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATED = 2
EXIT_INCONCLUSIVE = 3
EXIT_NUMERIC = 4

STATUS_EXIT = {SATISFIED: EXIT_OK, VIOLATED: EXIT_VIOLATED, INCONCLUSIVE: EXIT_INCONCLUSIVE}


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1, keeping 2 for Violated
    def error(self, message):
        raise ValidationError(message)


def build_parser():
    parser = _Parser(prog='evoseries', description=evoseries.__description__)
    parser.add_argument('--version', action='version', version='%(prog)s ' + evoseries.__version__)
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('problem', help="problem file (.prob)")
    parser.add_argument('--claim', default=None)
    parser.add_argument('--order', type=int, default=None)
    parser.add_argument('--t-max', dest='t_max', type=float, default=None)
    parser.add_argument('--tol', type=parse_tol, default=None, help="number or inf")
    parser.add_argument('--precision', type=int, default=None)
    parser.add_argument('--seed', type=int, default=None)
    parser.add_argument('--json', action='store_true')
    parser.add_argument('--param', action='append', type=parse_param, default=[], metavar='NAME=VALUE')
    parser.add_argument('--scan', type=parse_scan, default=None, metavar='NAME=lo..hi:count')
    parser.add_argument('--out', default=None, help="folder for report files")
    parser.add_argument('--workers', type=int, default=1)
    parser.add_argument('--verbose', action='store_true')
    parser.add_argument('--normal-form', dest='normal_form', action='store_true', default=None)
    parser.add_argument('--no-normal-form', dest='normal_form', action='store_false')
    return parser


def config_from_args(args):
    values = {'command': args.command,
              'problem': args.problem,
              'claim': args.claim,
              'output': 'json' if args.json else 'text',
              'params': dict(args.param),
              'scan': args.scan,
              'out': args.out,
              'workers': args.workers,
              'verbose': args.verbose,
              'normal_form': args.normal_form,
              'precision': args.precision}
    for name in ('order', 't_max', 'tol', 'seed'):
        if getattr(args, name) is not None:
            values[name] = getattr(args, name)
    return RunConfig(**values)


def _header(config, spec, precision):
    return {'command': config.command,
            'problem': spec.name,
            'kind': spec.kind,
            'source_hash': spec.source_hash,
            'precision': precision,
            'seed': config.seed,
            'params': {k: fraction_str(v) for k, v in sorted(config.params.items())},
            'version': evoseries.__version__}


def cmd_solve(config, spec):
    precision = check_precision(config.precision)
    series = taylor(spec, order=config.order, normal_form=config.normal_form, workers=config.workers,
                    verbose=config.verbose)
    defect = series_defect(spec, series)
    measured = residual_order(spec, series, params=config.params, precision=precision)
    doc = _header(config, spec, precision)
    doc.update({'order': config.order,
                'series': {f: ts.to_dict() for f, ts in series.items()},
                'defect': {f: [v.name for v in verdicts] for f, verdicts in defect.items()},
                'residual_order': measured.to_dict()})
    lines = ["{} ({}), order {}".format(spec.name, spec.kind, config.order)]
    for f, ts in series.items():
        for j, c in enumerate(ts.to_dict()['coefficients']):
            lines.append("  {}[{}] = {}".format(f, j, c))
        lines.append("  defect {}: {}".format(f, ", ".join(v.name for v in defect[f]) or "-"))
    lines.append("  residual order: {}".format(measured))
    return EXIT_OK, doc, "\n".join(lines)


def _verify_claim(config, spec, name, precision):
    claim = spec.claim(name)
    params = {k: v for k, v in config.params.items() if k in spec.claim_parameters(claim)}
    plan = build_plan(spec, claim, params=params, seed=config.seed, precision=precision)
    report = check_claim(spec, claim, plan, workers=config.workers)
    return claim, plan, report


def cmd_verify(config, spec):
    precision = check_precision(config.precision)
    claim, plan, report = _verify_claim(config, spec, config.claim, precision)
    if config.scan is not None:
        grid = scan_grid(config.scan.lo, config.scan.hi, config.scan.count)
        report.scan = parameter_scan(spec, claim, config.scan.symbol, grid, plan, verbose=config.verbose)
    return STATUS_EXIT[report.status], report.to_dict(), report.to_text()


def cmd_compare(config, spec):
    series = taylor(spec, order=config.order, normal_form=config.normal_form, workers=config.workers,
                    verbose=config.verbose)
    params = reference_params(spec, config.params)
    ref = integrate(spec, params, t_end=config.t_max, verbose=config.verbose)
    window = validity_window(series, ref, config.tol)
    doc = _header(config, spec, check_precision(config.precision))
    doc.update({'order': config.order, 't_max': "{:.15g}".format(config.t_max), 'window': window.to_dict(),
                'reference': ref.metadata()})
    if config.out:
        folder = generate_out_folder(config.out, config.problem, config.command)
        ref.to_csv(os.path.join(folder, 'reference.csv'))
        with open(os.path.join(folder, 'reference.json'), 'w') as f:
            f.write(ref.to_json())
    return EXIT_OK, doc, window.to_text()


def cmd_report(config, spec):
    precision = check_precision(config.precision)
    code, solved, solved_text = cmd_solve(config, spec)
    doc = _header(config, spec, precision)
    doc['solve'] = {k: solved[k] for k in ('order', 'series', 'defect', 'residual_order')}
    doc['claims'] = dict()
    texts = [solved_text]
    for name in spec.claims:
        claim, plan, report = _verify_claim(config, spec, name, precision)
        if spec.kind == DDE:
            report.first_term = first_term_agreement(spec, claim, plan)
        doc['claims'][name] = report.to_dict()
        texts.append(report.to_text())
    return code, doc, "\n".join(texts)


COMMAND_FUNCTIONS = {SOLVE: cmd_solve, VERIFY: cmd_verify, COMPARE: cmd_compare, REPORT: cmd_report}


def run_config(config):
    """Run one command; returns (exit code, JSON-ready dict, text)."""
    check_args(config)
    spec = read_problem_file(config.problem)
    check_args(config, spec)
    return COMMAND_FUNCTIONS[config.command](config, spec)


def write_outputs(config, doc, text):
    rendered = dumps(doc) if config.json else text
    print(rendered)
    if config.out:
        folder = generate_out_folder(config.out, config.problem, config.command)
        with open(os.path.join(folder, 'report.json'), 'w') as f:
            f.write(dumps(doc) + "\n")
        with open(os.path.join(folder, 'report.txt'), 'w') as f:
            f.write(text + "\n")


def main(argv=None):
    t = time.time()
    try:
        config = config_from_args(build_parser().parse_args(argv))
        code, doc, text = run_config(config)
    except (BlowUp, StabilityViolation) as err:
        log("error: {}: {}".format(type(err).__name__, err))
        return EXIT_NUMERIC
    except EvoSeriesError as err:
        log("error: {}: {}".format(type(err).__name__, err))
        return EXIT_ERROR
    except OSError as err:
        log("error: {}".format(err))
        return EXIT_ERROR
    write_outputs(config, doc, text)
    log("total run time = {:.3f} s".format(time.time() - t))
    return code


def run():
    sys.exit(main())


if __name__ == '__main__':
    run()
