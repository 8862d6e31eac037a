import os

import pytest

from evoseries.modules.load.problem import parse_problem, read_problem_file

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
PROBLEMS = os.path.join(ROOT, 'problems')


def problem_path(name):
    return os.path.join(PROBLEMS, name + '.prob')


@pytest.fixture
def write_problem(tmp_path):
    def write(text, name='problem'):
        path = tmp_path / (name + '.prob')
        path.write_text(text, encoding='utf-8')
        return str(path)
    return write


@pytest.fixture(scope='session')
def reaction_diffusion():
    return read_problem_file(problem_path('reaction_diffusion'))


@pytest.fixture(scope='session')
def kdv_lattice():
    return read_problem_file(problem_path('kdv_lattice'))


@pytest.fixture(scope='session')
def heat():
    return read_problem_file(problem_path('heat'))


@pytest.fixture(scope='session')
def fisher_front():
    return read_problem_file(problem_path('fisher_front'))


@pytest.fixture(scope='session')
def linear_lattice():
    return read_problem_file(problem_path('linear_lattice'))


def single_field(kind, rhs, initial, claims='', parameters=''):
    """A one-field problem built from text; claims are raw [claim.NAME] sections."""
    text = "[problem]\nkind = {}\nfields = u\n".format(kind)
    if parameters:
        text += "parameters = {}\n".format(parameters)
    text += "[equations]\ndt(u) = {}\n[initial]\nu = {}\n{}".format(rhs, initial, claims)
    return parse_problem(text)
