import os
from fractions import Fraction

import pytest

from evoseries.modules.utils.errors import ValidationError
from evoseries.modules.utils.util import DEFAULT_PRECISION, PRECISION_ENV, default_precision, fraction_str, \
    generate_out_folder, run_tasks, task_divide, to_fraction


def squares(chunk, offset):
    return [i * i + offset for i in chunk]


def test_task_divide():
    idx = list(range(10))
    assert task_divide(idx, 3) == [[0, 1, 2], [3, 4, 5], [6, 7, 8, 9]]
    assert task_divide(idx, 10) == [[i] for i in idx]
    assert task_divide(idx, 20) == [idx]
    assert task_divide(idx, 0) == [idx]
    assert task_divide([], 4) == [[]]


@pytest.mark.parametrize('workers', [1, 2, 3])
def test_run_tasks_keeps_order(workers):
    assert run_tasks(squares, list(range(7)), workers, 1) == [i * i + 1 for i in range(7)]


def test_to_fraction():
    assert to_fraction(0.1) == Fraction(1, 10)
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(" -2 ") == -2
    assert to_fraction(Fraction(1, 3)) == Fraction(1, 3)
    with pytest.raises(ValueError):
        to_fraction("one")


def test_fraction_str():
    assert fraction_str(Fraction(-1, 2)) == "-1/2"
    assert fraction_str(4) == "4"
    assert fraction_str(0.25) == "1/4"


def test_default_precision(monkeypatch):
    monkeypatch.delenv(PRECISION_ENV, raising=False)
    assert default_precision() == DEFAULT_PRECISION
    monkeypatch.setenv(PRECISION_ENV, "50")
    assert default_precision() == 50
    monkeypatch.setenv(PRECISION_ENV, "10")
    with pytest.raises(ValidationError):
        default_precision()
    monkeypatch.setenv(PRECISION_ENV, "many")
    with pytest.raises(ValidationError):
        default_precision()


def test_generate_out_folder(tmp_path):
    folder = generate_out_folder(str(tmp_path), '/some/where/heat.prob', 'verify')
    assert folder == os.path.join(str(tmp_path), 'heat', 'verify')
    assert os.path.isdir(folder)
