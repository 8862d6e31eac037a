import multiprocessing
import os
import sys
from fractions import Fraction

from evoseries.modules.utils.errors import ValidationError

PRECISION_ENV = 'EVOSERIES_PRECISION'
DEFAULT_PRECISION = 30
MIN_PRECISION = 15
NONZERO_THRESHOLD = 1e-6
DEFAULT_SEED = 20100


def default_precision():
    value = os.environ.get(PRECISION_ENV)
    if value is None or value.strip() == '':
        return DEFAULT_PRECISION
    try:
        digits = int(value)
    except ValueError:
        raise ValidationError("{} must be an integer, got {!r}".format(PRECISION_ENV, value))
    if digits < MIN_PRECISION:
        raise ValidationError("{} must be at least {}, got {}".format(PRECISION_ENV, MIN_PRECISION, digits))
    return digits


def to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        # repr keeps the shortest decimal, so 0.1 stays 1/10
        return Fraction(repr(value))
    return Fraction(value)


def fraction_str(value):
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return "{}/{}".format(value.numerator, value.denominator)


def log(*args):
    print(*args, file=sys.stderr)


def task_divide(idx, n):
    total = len(idx)
    if n <= 0 or 0 == total:
        return [idx]
    if n > total:
        return [idx]
    elif n == total:
        return [[i] for i in idx]
    else:
        j = total // n
        tasks = []
        for i in range(0, (n - 1) * j, j):
            tasks.append(idx[i:i + j])
        tasks.append(idx[(n - 1) * j:])
        return tasks


def run_tasks(func, items, workers, *args):
    """
    Apply ``func(chunk, *args)`` over ``items`` split into ``workers`` chunks.

    Results are concatenated in the order of ``items`` whatever order the
    workers finish in, so callers get a deterministic list.
    """
    if workers <= 1 or len(items) <= 1:
        return list(func(list(items), *args))
    tasks = task_divide(list(items), workers)
    pool = multiprocessing.Pool(processes=len(tasks))
    rests = list()
    for task in tasks:
        rests.append(pool.apply_async(func, (task,) + args))
    pool.close()
    pool.join()
    results = list()
    for rest in rests:
        results.extend(rest.get())
    return results


def generate_out_folder(out_folder, problem_path, command):
    stem = os.path.splitext(os.path.basename(problem_path))[0]
    folder = os.path.join(out_folder, stem, command)
    os.makedirs(folder, exist_ok=True)
    log("results output folder:", folder)
    return folder
